"""
Input Files and Report Schemas for psent
========================================

This module defines the pydantic models for everything the command-line
frontend reads or writes:

Inputs:
    - `EquationFile`: JSON description of y'' = sum a_n(z) y^n with exact rational coefficients.
    - `RunConfig`: One fully parsed CLI invocation.

Reports (all carry `schema_version`):
    - `ResonanceReportModel`, `ExpansionReportModel`, `TrajectoryReportModel`,
      `SingularityReportModel`, `MonodromyReportModel`, `ScanReportModel`,
      `DemoReportModel`, `ErrorReportModel`

Complex numbers are written as `[re, im]` floats, exact scalars as `["p/q", "p/q"]`
strings. Trajectories go to CSV with the columns of `CSV_COLUMNS`, one row per
accepted step.

Example equation file (Painleve I, y'' = 6 y^2 + z):
    .. code-block:: json

        {"N": 2, "coeffs": [[["0", "0"], ["1", "0"]], [], [["6", "0"]]]}
"""

import csv
import math
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, field_validator, model_validator

from psent.app.core.algebra.scalars import is_exact, parse, to_complex, to_strings
from psent.app.core.analysis.equation import EquationSpec
from psent.app.core.analysis.expansion import BranchClass, ExpansionResult
from psent.app.core.analysis.resonance import ClosedFormResult, ResonanceReport, describe
from psent.app.core.continuation.demos import DemoOutcome
from psent.app.core.continuation.locate import SingularityReport
from psent.app.core.continuation.monodromy import MonodromyResult
from psent.app.core.continuation.scan import ScanEntry
from psent.app.core.continuation.types import Trajectory
from psent.app.core.errors import InvalidEquationError, PsentError


SCHEMA_VERSION = "1.0"

CSV_COLUMNS = ["step_index", "z_re", "z_im", "y_re", "y_im", "yp_re", "yp_im", "abs_y", "err_est"]

ComplexPair = Tuple[float, float]
ExactPair = Tuple[str, str]
ScalarValue = Union[ExactPair, ComplexPair]


def complex_pair(z) -> Optional[ComplexPair]:
    if z is None:
        return None
    z = to_complex(z)
    return (z.real, z.imag)


def scalar_value(x) -> Optional[ScalarValue]:
    """ Exact scalars keep their rational strings, everything else becomes floats. """
    if x is None:
        return None
    if is_exact(x):
        return to_strings(x)
    return complex_pair(x)


def _finite(x: Optional[float]) -> Optional[float]:
    return None if x is None or not math.isfinite(x) else float(x)


def _parse_rational(text: str) -> str:
    try:
        parse(text)
    except ValueError:
        raise ValueError(f"'{text}' is not a rational number 'p/q'")
    return text.strip()


# ----------------------------------------------------------------------
# inputs
# ----------------------------------------------------------------------

class EquationFile(BaseModel):
    """
    Equation file contents.

    Attributes:
        N (int): Degree in y.
        coeffs (list): a_0..a_N, each a list of polynomial coefficients by
            increasing power of z; a coefficient is `[re, im]` (or a bare real) as rational strings.
        already_canonical (bool): Assert that the equation is in canonical form.
    """

    N: int
    coeffs: List[List[Union[ExactPair, str]]]
    already_canonical: bool = False

    @field_validator("coeffs")
    @classmethod
    def validate_rationals(cls, v):
        for poly in v:
            for c in poly:
                for part in ((c,) if isinstance(c, str) else c):
                    _parse_rational(part)
        return v

    @model_validator(mode="after")
    def validate_length(self):
        if self.N < 2:
            raise ValueError(f"N must be at least 2, got {self.N}")
        if len(self.coeffs) != self.N + 1:
            raise ValueError(f"coeffs must list N+1 = {self.N + 1} polynomials, got {len(self.coeffs)}")
        return self

    @classmethod
    def from_path(cls, path: Union[str, Path]) -> "EquationFile":
        return cls.model_validate_json(Path(path).read_text(encoding="utf-8"))

    @classmethod
    def from_spec(cls, eq: EquationSpec) -> "EquationFile":
        if not eq.is_exact:
            raise InvalidEquationError("only exact equations can be written to an equation file")
        return cls(N=eq.N, coeffs=[[to_strings(c) for c in p.coeffs] for p in eq.a], already_canonical=eq.is_canonical)

    def to_spec(self, mode: str = "exact") -> EquationSpec:
        """
        Raises:
            InvalidEquationError: If the data does not describe a class member,
                or `already_canonical` is set on a non-canonical equation.
        """
        polys = [[parse(c) if isinstance(c, str) else parse(*c) for c in p]
                 for p in self.coeffs]
        eq = EquationSpec.from_lists(self.N, polys)
        if self.already_canonical and not eq.is_canonical:
            raise InvalidEquationError("file is flagged already_canonical but a_N or a_{N-1} is not canonical")
        return eq.to_float() if mode == "float" else eq


class LoopArgument(BaseModel):
    center: ComplexPair
    radius: float = Field(gt=0)
    turns: int = 1


class RunConfig(BaseModel):
    """ One CLI invocation after parsing; validated for the requirements of its command. """

    command: Literal["analyze", "expand", "continue", "locate", "monodromy", "scan", "demo"]
    equation: Optional[Path] = None
    demo: Optional[str] = None
    z0: Optional[ComplexPair] = None
    y0: Optional[ComplexPair] = None
    yp0: Optional[ComplexPair] = None
    branch: Optional[str] = None
    beta: ComplexPair = (0.0, 0.0)
    order: Optional[int] = None
    path: Optional[List[ComplexPair]] = None
    loop: Optional[LoopArgument] = None
    rays: Optional[int] = None
    length: Optional[float] = None
    mode: Literal["exact", "float"] = "exact"
    overrides: Dict[str, Union[float, int]] = Field(default_factory=dict)
    out: Path = Path("psent-out")

    @model_validator(mode="after")
    def validate_command(self):
        if self.command == "demo":
            if not self.demo:
                raise ValueError("demo needs a demo name")
            return self
        if self.command in ("analyze", "expand") and self.equation is None:
            raise ValueError(f"{self.command} needs --equation")
        if self.equation is None and self.demo is None:
            raise ValueError(f"{self.command} needs --equation or --demo")
        if self.command == "expand" and self.z0 is None:
            raise ValueError("expand needs --z0")
        if self.order is not None and self.order < 1:
            raise ValueError("--order must be positive")
        if self.command in ("continue", "locate", "monodromy", "scan"):
            if self.y0 is None or self.yp0 is None:
                raise ValueError(f"{self.command} needs --y0 and --yp0")
        if self.command in ("continue", "locate", "monodromy") and not self.path:
            raise ValueError(f"{self.command} needs --path")
        if self.command == "scan" and not (self.path or self.rays):
            raise ValueError("scan needs --path or --rays")
        if self.command == "scan" and self.rays and self.z0 is None:
            raise ValueError("scan --rays needs --z0")
        return self


# ----------------------------------------------------------------------
# reports
# ----------------------------------------------------------------------

class ReportModel(BaseModel):
    schema_version: str = SCHEMA_VERSION


class ConditionModel(BaseModel):
    name: str
    passed: bool
    base_point: Optional[ComplexPair] = None
    expression: Dict[str, Union[str, List[str]]]


class ResonanceReportModel(ReportModel):
    N: int
    mode: str
    verdict: str
    passed: bool
    order: Optional[int] = None
    conditions: List[ConditionModel]
    witnesses: List[str]
    b: Optional[List[Dict[str, Union[str, List[str]]]]] = None
    closed_form: Optional[Dict[str, Union[str, bool]]] = None

    @classmethod
    def from_result(cls, report: ResonanceReport, closed: Optional[ClosedFormResult] = None) -> "ResonanceReportModel":
        conditions = [ConditionModel(name=c.name, passed=c.passed, base_point=complex_pair(c.base_point),
                                     expression=describe(c.expression)) for c in report.conditions]
        b = [describe(v) for _, v in report.b.items()] if report.b is not None else None
        return cls(N=report.N, mode=report.mode, verdict=report.verdict, passed=report.passed, order=report.order,
                   conditions=conditions, witnesses=[c.name for c in report.witnesses], b=b,
                   closed_form=None if closed is None else {"label": closed.label, "passed": closed.passed})


class CoefficientModel(BaseModel):
    j: int
    exponent: str
    value: ScalarValue


class ExpansionReportModel(ReportModel):
    N: int
    branch: str
    base: ScalarValue
    beta: ScalarValue
    order: int
    resonance_index: int
    obstruction: ScalarValue
    coefficients: List[CoefficientModel]

    @classmethod
    def from_result(cls, result: ExpansionResult) -> "ExpansionReportModel":
        return cls(N=result.N, branch=result.branch.label, base=scalar_value(result.base),
                   beta=scalar_value(result.beta), order=result.order, resonance_index=result.resonance_index,
                   obstruction=scalar_value(result.obstruction),
                   coefficients=[CoefficientModel(j=j, exponent=str(e), value=scalar_value(c))
                                 for j, e, c in result.table()])

    def table(self) -> str:
        """ Human-readable coefficient table. """
        lines = [f"{'j':>4}  {'exponent':>10}  value"]
        for c in self.coefficients:
            value = f"{c.value[0]} + {c.value[1]} i" if isinstance(c.value[0], str) else f"{complex(*c.value):.12g}"
            lines.append(f"{c.j:>4}  {c.exponent:>10}  {value}")
        return "\n".join(lines)


class TrajectoryReportModel(ReportModel):
    termination: str
    accepted_steps: int
    start: ComplexPair
    end: ComplexPair
    y_end: ComplexPair
    yp_end: ComplexPair
    max_abs_y: float

    @classmethod
    def from_result(cls, traj: Trajectory) -> "TrajectoryReportModel":
        last = traj.last
        return cls(termination=traj.termination.value, accepted_steps=traj.accepted_steps,
                   start=complex_pair(traj.samples[0].z), end=complex_pair(last.z), y_end=complex_pair(last.y),
                   yp_end=complex_pair(last.yp), max_abs_y=abs(traj.samples[traj.peak_index()].y))


class SingularityReportModel(ReportModel):
    z_star: ComplexPair
    exponent_estimate: Optional[float]
    branch_class: Optional[str]
    beta_or_kappa: Optional[ComplexPair]
    method: str
    residual: Optional[float]
    discrepancy: Optional[float] = None
    anchor: Optional[ComplexPair] = None
    flags: List[str] = Field(default_factory=list)
    N: Optional[int] = None

    @classmethod
    def from_result(cls, report: SingularityReport) -> "SingularityReportModel":
        branch = report.branch_class
        return cls(z_star=complex_pair(report.z_star), exponent_estimate=_finite(report.exponent_estimate),
                   branch_class=branch.label if isinstance(branch, BranchClass) else branch,
                   beta_or_kappa=complex_pair(report.beta_or_kappa), method=report.method,
                   residual=_finite(report.residual), discrepancy=_finite(report.discrepancy),
                   anchor=complex_pair(report.anchor.z) if report.anchor else None,
                   flags=list(report.flags), N=report.N)


class MonodromyReportModel(ReportModel):
    center: ComplexPair
    radius: float
    turns: int
    deviations: List[float]
    ramification: Optional[int]
    returns_after: Optional[int]
    final_state: Tuple[ComplexPair, ComplexPair, ComplexPair]
    singularity: Optional[SingularityReportModel] = None

    @classmethod
    def from_result(cls, result: MonodromyResult, report: Optional[SingularityReport] = None) -> "MonodromyReportModel":
        return cls(center=complex_pair(result.z_star), radius=result.radius, turns=len(result.deviations),
                   deviations=list(result.deviations), ramification=result.ramification,
                   returns_after=result.returns_after(),
                   final_state=tuple(complex_pair(v) for v in result.final_state),
                   singularity=SingularityReportModel.from_result(report) if report else None)


class ScanEntryModel(BaseModel):
    index: int
    start: ComplexPair
    end: ComplexPair
    termination: Optional[str]
    accepted_steps: Optional[int]
    singularity: Optional[SingularityReportModel] = None
    error: Optional[Dict[str, Union[str, int, float]]] = None


class ScanReportModel(ReportModel):
    entries: List[ScanEntryModel]

    @classmethod
    def from_result(cls, entries: List[ScanEntry]) -> "ScanReportModel":
        def entry(e: ScanEntry) -> ScanEntryModel:
            legs = e.path.legs()
            return ScanEntryModel(
                index=e.index, start=complex_pair(e.path.start), end=complex_pair(legs[-1].end),
                termination=e.trajectory.termination.value if e.trajectory else None,
                accepted_steps=e.trajectory.accepted_steps if e.trajectory else None,
                singularity=SingularityReportModel.from_result(e.report) if e.report else None,
                error=e.error)
        return cls(entries=[entry(e) for e in entries])


class DemoReportModel(ReportModel):
    name: str
    singularities: List[SingularityReportModel]
    expected: Optional[List[ComplexPair]] = None
    errors: List[float] = Field(default_factory=list)
    phi: Optional[List[float]] = None

    @classmethod
    def from_result(cls, outcome: DemoOutcome) -> "DemoReportModel":
        return cls(name=outcome.name, singularities=[SingularityReportModel.from_result(r) for r in outcome.reports],
                   expected=[complex_pair(e) for e in outcome.expected] if outcome.expected is not None else None,
                   errors=outcome.errors(), phi=outcome.phi)


class ErrorReportModel(ReportModel):
    error: str
    message: str
    exit_code: int
    details: Dict[str, Union[str, int, float, None]] = Field(default_factory=dict)

    @classmethod
    def from_error(cls, err: PsentError) -> "ErrorReportModel":
        payload = err.payload()
        details = {k: v for k, v in payload.items() if k not in ("error", "message", "exit_code")}
        return cls(error=payload["error"], message=payload["message"], exit_code=payload["exit_code"],
                   details={k: v if isinstance(v, (str, int, float)) or v is None else str(v) for k, v in details.items()})


# ----------------------------------------------------------------------
# writers
# ----------------------------------------------------------------------

def write_json(model: BaseModel, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(model.model_dump_json(indent=2), encoding="utf-8")
    return path


def write_trajectory_csv(traj: Trajectory, path: Union[str, Path]) -> Path:
    """ One row per accepted step; the initial state is not a row. """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for index, s in enumerate(traj.samples[1:], start=1):
            writer.writerow([index, repr(s.z.real), repr(s.z.imag), repr(s.y.real), repr(s.y.imag),
                             repr(s.yp.real), repr(s.yp.imag), repr(abs(s.y)), repr(s.err)])
    return path
