"""
Shared helpers of the CLI commands: argument parsing of complex values and
paths, equation loading and run settings.
"""

from pathlib import Path
from typing import List, Optional, Tuple

from psent.app.core.algebra.scalars import GaussianRational, parse
from psent.app.core.analysis.equation import SecondOrderEquation
from psent.app.core.continuation.demos import load_demo
from psent.app.core.continuation.types import ContinuationSettings, LoopSpec, PathSpec
from psent.app.reports import ComplexPair, EquationFile, LoopArgument, RunConfig


def parse_complex(text: str) -> ComplexPair:
    """ "re,im" or "re" -> (re, im). """
    parts = [p.strip() for p in text.split(",")]
    if len(parts) == 1:
        parts.append("0")
    if len(parts) != 2:
        raise ValueError(f"expected 're,im', got '{text}'")
    return float(parts[0]), float(parts[1])


def parse_path(text: str) -> List[ComplexPair]:
    """ "x0,y0:x1,y1:..." -> waypoints. """
    return [parse_complex(p) for p in text.split(":") if p.strip()]


def parse_loop(text: str) -> LoopArgument:
    """ "cx,cy,r,turns" -> loop argument. """
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4:
        raise ValueError(f"expected 'cx,cy,r,turns', got '{text}'")
    return LoopArgument(center=(float(parts[0]), float(parts[1])), radius=float(parts[2]), turns=int(parts[3]))


def as_complex(pair: Optional[ComplexPair]) -> Optional[complex]:
    return None if pair is None else complex(pair[0], pair[1])


def as_exact(pair: ComplexPair) -> GaussianRational:
    """ Decimal input read as the rational it spells, e.g. 0.1 -> 1/10. """
    return parse(repr(pair[0]), repr(pair[1]))


def load_equation(config: RunConfig) -> SecondOrderEquation:
    if config.equation is not None:
        return EquationFile.from_path(config.equation).to_spec(config.mode)
    return load_demo(config.demo)


def continuation_settings(config: RunConfig) -> ContinuationSettings:
    return ContinuationSettings.from_settings(**config.overrides)


def build_path(config: RunConfig) -> PathSpec:
    loop = None
    if config.loop is not None:
        loop = LoopSpec(as_complex(config.loop.center), config.loop.radius, config.loop.turns)
    return PathSpec(tuple(as_complex(w) for w in config.path), loop=loop)


def initial_state(config: RunConfig, z0: complex) -> Tuple[complex, complex, complex]:
    return z0, as_complex(config.y0), as_complex(config.yp0)


def output_dir(config: RunConfig) -> Path:
    config.out.mkdir(parents=True, exist_ok=True)
    return config.out
