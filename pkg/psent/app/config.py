"""
Configuration Module for psent
==============================

This module defines the configuration settings shared by the analysis modules,
the continuation engine and the command-line frontend.

It uses Pydantic's `BaseSettings` to load configuration values from environment variables,
so runs can be tuned without touching equation or path files.

For local work, environment variables can be defined in a `.env` file located at the project root.

Unknown environment variables are ignored to allow shared `.env` files.

Usage:
    Import the singleton `settings` object from this module to access configuration values
    throughout the application.

    .. code-block:: python
        from psent.app.config import settings

        print(settings.blowup_threshold)

Environment Variables:

Continuation:
    - `PSENT_REL_TOL`: Relative tolerance of the adaptive integrator (default: 1e-9)
    - `PSENT_ABS_TOL`: Absolute tolerance of the adaptive integrator (default: 1e-9)
    - `PSENT_BLOWUP_THRESHOLD`: |y| above which a singularity encounter is declared (default: 1e6)
    - `PSENT_CHART_HANDOFF_RADIUS`: |y| at which the (u, v) chart takes over (default: 1e3)
    - `PSENT_MIN_STEP_FACTOR`: Minimal step as a fraction of the path length (default: 1e-13)
    - `PSENT_MAX_STEPS`: Maximal number of attempted steps per trajectory (default: 200000)
    - `PSENT_LATERAL_OFFSET`: Relative offset of the lateral path used for near-path singularities (default: 1e-2)
    - `PSENT_VAULT_RADIUS_FACTOR`: Vaulting radius relative to the distance to the walk target (default: 0.5)

Analysis:
    - `PSENT_SERIES_ORDER`: Taylor order used when canonicalizing numerically (default: 24)
    - `PSENT_OBSTRUCTION_TOL`: Relative gauge of the floating-point obstruction test (default: 1e-10)
    - `PSENT_BRANCH_FIT_TOL`: Relative residual above which no branch class fits (default: 1e-3)

Runtime & Logging:
    - `PSENT_THREADS`: Maximal number of worker threads used by scans (default: 4)
    - `LOG_LEVEL`: Logging level ("debug", "info", "warning", "error", "critical"; default: "info")
"""

from pydantic_settings import BaseSettings
from pydantic import AliasChoices, Field, field_validator


class Settings(BaseSettings):
    """
    Application configuration settings loaded from environment variables.

    Attributes:
        rel_tol (float): Relative tolerance of the integrator. Environment variable: `PSENT_REL_TOL`.
        abs_tol (float): Absolute tolerance of the integrator. Environment variable: `PSENT_ABS_TOL`.
        blowup_threshold (float): Blow-up threshold Y_max. Environment variable: `PSENT_BLOWUP_THRESHOLD`.
        chart_handoff_radius (float): |y| at which locate hands over to the regularizing chart.
            Environment variable: `PSENT_CHART_HANDOFF_RADIUS`.
        min_step_factor (float): Minimal step relative to the path length.
            Environment variable: `PSENT_MIN_STEP_FACTOR`.
        max_steps (int): Step budget per trajectory. Environment variable: `PSENT_MAX_STEPS`.
        lateral_offset (float): Relative offset of lateral paths. Environment variable: `PSENT_LATERAL_OFFSET`.
        vault_radius_factor (float): Vaulting radius factor. Environment variable: `PSENT_VAULT_RADIUS_FACTOR`.
        series_order (int): Taylor truncation order for numeric canonicalization.
            Environment variable: `PSENT_SERIES_ORDER`.
        obstruction_tol (float): Relative tolerance of the float obstruction test.
            Environment variable: `PSENT_OBSTRUCTION_TOL`.
        branch_fit_tol (float): Residual threshold of series matching. Environment variable: `PSENT_BRANCH_FIT_TOL`.
        threads (int): Worker threads for scans. Environment variable: `PSENT_THREADS`.
        log_level (str): Logging verbosity level. Environment variable: `LOG_LEVEL`. Default: "info".
    """

    # Continuation
    rel_tol: float = Field(default=1e-9, validation_alias=AliasChoices("PSENT_REL_TOL", "rel_tol"))
    abs_tol: float = Field(default=1e-9, validation_alias=AliasChoices("PSENT_ABS_TOL", "abs_tol"))
    blowup_threshold: float = Field(default=1e6, validation_alias=AliasChoices("PSENT_BLOWUP_THRESHOLD", "blowup_threshold"))
    chart_handoff_radius: float = Field(default=1e3, validation_alias=AliasChoices("PSENT_CHART_HANDOFF_RADIUS", "chart_handoff_radius"))
    min_step_factor: float = Field(default=1e-13, validation_alias=AliasChoices("PSENT_MIN_STEP_FACTOR", "min_step_factor"))
    max_steps: int = Field(default=200000, validation_alias=AliasChoices("PSENT_MAX_STEPS", "max_steps"))
    lateral_offset: float = Field(default=1e-2, validation_alias=AliasChoices("PSENT_LATERAL_OFFSET", "lateral_offset"))
    vault_radius_factor: float = Field(default=0.5, validation_alias=AliasChoices("PSENT_VAULT_RADIUS_FACTOR", "vault_radius_factor"))

    # Analysis
    series_order: int = Field(default=24, validation_alias=AliasChoices("PSENT_SERIES_ORDER", "series_order"))
    obstruction_tol: float = Field(default=1e-10, validation_alias=AliasChoices("PSENT_OBSTRUCTION_TOL", "obstruction_tol"))
    branch_fit_tol: float = Field(default=1e-3, validation_alias=AliasChoices("PSENT_BRANCH_FIT_TOL", "branch_fit_tol"))

    # Miscellaneous
    threads: int = Field(default=4, validation_alias=AliasChoices("PSENT_THREADS", "threads"))
    log_level: str = Field(default="info", validation_alias=AliasChoices("LOG_LEVEL", "log_level"))

    model_config = {
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "extra": "ignore"
    }

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v):
        allowed = {"debug", "info", "warning", "error", "critical"}
        level = v.lower()
        if level not in allowed:
            raise ValueError(f"log_level must be one of {allowed}")
        return level

    @field_validator("threads", "max_steps", "series_order")
    @classmethod
    def validate_positive_int(cls, v):
        if v < 1:
            raise ValueError("must be a positive integer")
        return v

    @field_validator("rel_tol", "abs_tol", "blowup_threshold", "chart_handoff_radius",
                     "min_step_factor", "lateral_offset", "vault_radius_factor",
                     "obstruction_tol", "branch_fit_tol")
    @classmethod
    def validate_positive_float(cls, v):
        if not v > 0:
            raise ValueError("must be strictly positive")
        return v


# Singleton settings object
settings = Settings()
