"""
Locating and classifying movable singularities.

`locate` hands a trajectory that ran into (or close by) a singularity over to
the regularizing (u, v) chart once |y| exceeds the handoff radius, integrates
the chart system to u = 0 and reads z* = z(0) and kappa = v(0). An
independent power-law fit of the approach tail cross-checks the location.
Equations outside the class, or failing resonance, are located by the fit
alone and flagged.

Example:
    .. code-block:: python

        eq = EquationSpec.canonical(3, [[0], [0]])           # y'' = 2 y^3
        traj = integrate(eq, (0, -1, -1), PathSpec.segment(0, 2))
        report = locate(eq, traj)
        print(report.z_star, report.branch_class)
"""

import cmath
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import least_squares

from psent.app.core.analysis.canonical import CanonicalEquation, canonicalize, pushforward_state
from psent.app.core.analysis.equation import EquationSpec, SecondOrderEquation
from psent.app.core.analysis.expansion import BranchClass, expand
from psent.app.core.analysis.resonance import check_resonance
from psent.app.core.analysis.wfunction import UVChart, WFunction, chart_from_state, chart_rhs
from psent.app.core.continuation.integrator import integrate, integrate_system
from psent.app.core.continuation.types import ContinuationSettings, PathSpec, Sample, Termination, Trajectory
from psent.app.core.errors import (
    ChartError, NoBranchFitError, NonMonotoneTailError, PreconditionError, PsentError)
from psent.app.core.logger import get_logger


logger = get_logger(__name__)


@dataclass(frozen=True)
class SingularityReport:
    """
    Attributes:
        z_star (complex): Location of the singularity.
        exponent_estimate (float): Fitted exponent p of y ~ c (z - z*)^p.
        branch_class: `BranchClass` for class equations, "pole"/"other" for demo equations.
        beta_or_kappa (complex): kappa = W at the singularity (chart) or beta (series match).
        method (str): "uv-chart", "exponent-fit" or "series-match".
        residual (float): RMS residual of the exponent fit.
        discrepancy (float): |z* (chart) - z* (fit)| when both ran.
        anchor (Sample): Handoff state.
        flags (tuple): Fallbacks and warnings.
        trajectory (Trajectory): The run that reached the singularity; monodromy loops start from it.
    """

    z_star: complex
    exponent_estimate: float
    branch_class: Union[BranchClass, str, None]
    beta_or_kappa: Optional[complex]
    method: str
    residual: float
    discrepancy: Optional[float] = None
    anchor: Optional[Sample] = None
    flags: Tuple[str, ...] = field(default_factory=tuple)
    N: Optional[int] = None
    trajectory: Optional[Trajectory] = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class FitResult:
    exponent: float
    z_star: complex
    c0: complex
    residual: float
    samples: int


# ----------------------------------------------------------------------
# exponent fit
# ----------------------------------------------------------------------

def _relative_logs(values: np.ndarray) -> np.ndarray:
    """ log(v_i / v_last) with the argument continued along the samples. """
    ratio = values / values[-1]
    phase = np.unwrap(np.angle(ratio))
    return np.log(np.abs(ratio)) + 1j * (phase - phase[-1])


def fit_exponent(samples: Sequence[Sample], z_star: complex, iterations: int = 30) -> FitResult:
    """
    Fit y ~ c (z - z*)^p to an approach tail.

    Alternates a linear least-squares step for (log c, p) with a nonlinear
    step for z*, then polishes all parameters jointly.

    Raises:
        NonMonotoneTailError: With fewer than 10 samples or |y| not strictly growing.
    """
    if len(samples) < 10:
        raise NonMonotoneTailError(f"exponent fit needs at least 10 samples, got {len(samples)}")
    z = np.array([s.z for s in samples], dtype=complex)
    y = np.array([s.y for s in samples], dtype=complex)
    if np.any(np.diff(np.abs(y)) <= 0):
        raise NonMonotoneTailError("|y| does not grow monotonically along the tail")
    ly = _relative_logs(y)
    n = len(z)

    def lz(zs: complex) -> np.ndarray:
        return _relative_logs(z - zs)

    def linear(zs: complex) -> np.ndarray:
        L = lz(zs)
        M = np.zeros((2 * n, 3))
        M[:n, 0], M[n:, 1] = 1.0, 1.0
        M[:n, 2], M[n:, 2] = L.real, L.imag
        return np.linalg.lstsq(M, np.concatenate([ly.real, ly.imag]), rcond=None)[0]

    def residual(params: np.ndarray) -> np.ndarray:
        zs = complex(params[0], params[1])
        r = ly - (params[2] + 1j * params[3] + params[4] * lz(zs))
        return np.concatenate([r.real, r.imag])

    zs = complex(z_star)
    coef = linear(zs)
    for _ in range(iterations):
        fixed = coef

        def shift_residual(xy, fixed=fixed):
            return residual(np.array([xy[0], xy[1], *fixed]))
        sol = least_squares(shift_residual, [zs.real, zs.imag], method="lm")
        moved = complex(*sol.x) - zs
        zs = complex(*sol.x)
        coef = linear(zs)
        if abs(moved) <= 1e-15 * max(1.0, abs(zs)):
            break

    polish = least_squares(residual, [zs.real, zs.imag, *coef], method="lm")
    zs = complex(polish.x[0], polish.x[1])
    p = float(polish.x[4])
    rms = float(np.sqrt(np.mean(polish.fun ** 2)))
    c0 = complex(y[-1] / (z[-1] - zs) ** p)
    return FitResult(p, zs, c0, rms, n)


def refine_center(samples: Sequence[Sample], z_star: complex, exponent: float) -> complex:
    """
    Least-squares z* of y ~ c (z - z*)^p with p held fixed.

    Unlike `fit_exponent` the samples need not approach z*; a stretch of a
    loop around it will do.
    """
    if len(samples) < 3:
        return complex(z_star)
    z = np.array([s.z for s in samples], dtype=complex)
    ly = _relative_logs(np.array([s.y for s in samples], dtype=complex))

    def residual(params: np.ndarray) -> np.ndarray:
        zs = complex(params[0], params[1])
        r = ly - (params[2] + 1j * params[3] + exponent * _relative_logs(z - zs))
        return np.concatenate([r.real, r.imag])

    z_star = complex(z_star)
    sol = least_squares(residual, [z_star.real, z_star.imag, 0.0, 0.0])
    return complex(sol.x[0], sol.x[1])


def log_derivative_estimate(eq: SecondOrderEquation, z, y, yp) -> Tuple[complex, complex]:
    """
    (z*, p) from one state, assuming y ~ c (z - z*)^p.

    p = 1 / (1 - y y'' / y'^2) and z* = z - p y / y'; non-finite or wild
    exponents fall back to p = -1.
    """
    z, y, yp = complex(z), complex(y), complex(yp)
    if yp == 0:
        raise PreconditionError("log-derivative estimate needs y' != 0")
    ypp = eq.acceleration(z, y, yp)
    denom = 1 - y * ypp / (yp * yp)
    p = 1 / denom if denom != 0 else -1.0
    if not cmath.isfinite(p) or abs(p) > 50:
        p = -1.0
    return z - p * y / yp, p


def approach(eq: SecondOrderEquation, state: Tuple[complex, complex, complex],
             cs: Optional[ContinuationSettings] = None, max_iter: int = 10) -> Trajectory:
    """
    Steer toward a nearby singularity until |y| reaches the handoff radius.

    Each round aims at the log-derivative estimate (overshooting it by half
    the distance) and restarts from the largest |y| reached. When a round
    makes no progress the aim is moved sideways by the lateral offset.

    Returns:
        Trajectory: The final approach run.

    Raises:
        PreconditionError: If the handoff radius is not reached.
    """
    cs = cs or ContinuationSettings.from_settings()
    z, y, yp = (complex(v) for v in state)
    lateral = 0
    for it in range(max_iter):
        target, _ = log_derivative_estimate(eq, z, y, yp)
        dist = abs(target - z)
        if dist == 0 or not cmath.isfinite(target):
            break
        if lateral:
            target += lateral * cs.lateral_offset * dist * 1j * (target - z) / dist
        end = target + 0.5 * (target - z)
        traj = integrate(eq, (z, y, yp), PathSpec.segment(z, end), cs)
        peak = traj.samples[traj.peak_index()]
        logger.debug(f"approach round {it}: |y| {abs(y):.3g} -> {abs(peak.y):.3g}")
        if traj.termination is Termination.SINGULARITY or abs(peak.y) >= cs.chart_handoff_radius:
            return traj
        if abs(peak.y) <= 1.01 * abs(y):
            lateral = 1 if lateral <= 0 else -1
            continue
        lateral = 0
        z, y, yp = peak.state
    raise PreconditionError("could not approach a singularity to the chart handoff radius")


# ----------------------------------------------------------------------
# chart location
# ----------------------------------------------------------------------

class _ResonanceFailure(PsentError):
    pass


def _canonical_view(eq: EquationSpec, sample: Sample, cs: ContinuationSettings):
    if eq.is_canonical:
        return CanonicalEquation.from_spec(eq), None, sample.state
    canon, record = canonicalize(eq, sample.z, cs.series_order)
    return canon, record, pushforward_state(record, *sample.state)


def _chart_locate(eq: EquationSpec, sample: Sample, cs: ContinuationSettings):
    canon, record, (zt, yt, ytp) = _canonical_view(eq, sample, cs)
    resonance = check_resonance(canon)
    if not resonance.passed:
        raise _ResonanceFailure(f"resonance {resonance.verdict}")
    chart = UVChart(WFunction(canon, resonance.b))
    state, chart = chart_from_state(chart, zt, yt, ytp)
    u_h = state.u

    def rhs(s, x):
        dz, dv = chart_rhs(chart, x[0], u_h * (1 - s), x[1])
        return np.array([-u_h * dz, -u_h * dv], dtype=complex)

    termination, x, _ = integrate_system(rhs, 1.0, [zt, state.v], cs)
    if termination is not Termination.COMPLETED:
        raise ChartError(f"chart integration ended with {termination.value}")
    zt_star, kappa = complex(x[0]), complex(x[1])
    z_star = record.z_of(zt_star) if record is not None else zt_star
    return z_star, kappa, BranchClass(eq.N, chart.epsilon)


def _handoff(traj: Trajectory, radius: float) -> Optional[Sample]:
    return next((s for s in traj.samples if abs(s.y) >= radius), None)


def _fit_tail(eq, traj: Trajectory, z_guess: Optional[complex] = None) -> FitResult:
    tail = traj.growth_tail()
    if z_guess is None:
        z_guess, _ = log_derivative_estimate(eq, *tail[-1].state)
    return fit_exponent(tail, z_guess)


def _demo_class(p: float) -> str:
    return "pole" if abs(p + 1) < 0.05 else "other"


def locate(eq: SecondOrderEquation, traj: Trajectory, cs: Optional[ContinuationSettings] = None) -> SingularityReport:
    """
    Locate the singularity a trajectory ran into.

    Args:
        eq: Class equation (chart method) or demo equation (fit only).
        traj (Trajectory): Run that reached or passed near a singularity.
        cs (ContinuationSettings): Numerical settings.

    Returns:
        SingularityReport: Location, exponent, class and diagnostics.
    """
    cs = cs or ContinuationSettings.from_settings()
    history = traj
    if _handoff(traj, cs.chart_handoff_radius) is None:
        if traj.termination is Termination.COMPLETED and abs(traj.samples[traj.peak_index()].y) < 1.0:
            raise PreconditionError("trajectory shows no sign of a singularity")
        peak = traj.peak_index()
        traj = approach(eq, traj.samples[peak].state, cs)
        history = Trajectory(history.samples[:peak + 1] + traj.samples, traj.termination)
    anchor = _handoff(traj, cs.chart_handoff_radius)

    if not isinstance(eq, EquationSpec):
        fit = _fit_tail(eq, traj)
        logger.info(f"✅ located singularity of {eq.name} at {fit.z_star:.10g} (p = {fit.exponent:.4f})")
        return SingularityReport(fit.z_star, fit.exponent, _demo_class(fit.exponent), None, "exponent-fit",
                                 fit.residual, None, anchor, ("demo-equation",), trajectory=history)

    flags: List[str] = []
    try:
        z_star, kappa, branch = _chart_locate(eq, anchor, cs)
    except (ChartError, _ResonanceFailure) as err:
        flag = "resonance-fallback" if isinstance(err, _ResonanceFailure) else "chart-fallback"
        logger.warning(f"⚠️ chart location unavailable ({err}); falling back to the exponent fit")
        fit = _fit_tail(eq, traj)
        return SingularityReport(fit.z_star, fit.exponent, None, None, "exponent-fit", fit.residual,
                                 None, anchor, (flag,), eq.N, history)

    try:
        fit = _fit_tail(eq, traj, z_star)
        exponent, residual, discrepancy = fit.exponent, fit.residual, abs(fit.z_star - z_star)
    except NonMonotoneTailError as err:
        flags.append("no-exponent-fit")
        logger.warning(f"⚠️ exponent cross-check skipped: {err}")
        exponent, residual, discrepancy = -2.0 / (eq.N - 1), float("nan"), None
    logger.info(f"✅ located singularity at {z_star:.12g}, class {branch}, kappa {kappa:.6g}")
    return SingularityReport(z_star, exponent, branch, kappa, "uv-chart", residual, discrepancy,
                             anchor, tuple(flags), eq.N, history)


# ----------------------------------------------------------------------
# series matching
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class MatchResult:
    beta: complex
    z_star: complex
    residual: float
    sheet: int
    samples: int


def _series_values(coeffs: np.ndarray, start: int, zeta: np.ndarray, phase: np.ndarray, m: int, k: int) -> np.ndarray:
    t = np.abs(zeta) ** (1.0 / m) * np.exp(1j * (phase + 2 * np.pi * k) / m)
    return np.polyval(coeffs[::-1], t) * t ** start


def series_match(eq: EquationSpec, z_star: complex, branch: BranchClass, samples: Sequence[Sample],
                 cs: Optional[ContinuationSettings] = None, order: Optional[int] = None,
                 min_abs_y: float = 2.0) -> MatchResult:
    """
    Fit beta (and a small shift of z*) so the expansion matches the samples.

    Canonical polynomial equations fit beta and z* jointly; other equations
    are matched in canonical coordinates about z* with z* held fixed.

    Raises:
        NoBranchFitError: If the best relative residual exceeds `branch_fit_tol`.
    """
    cs = cs or ContinuationSettings.from_settings()
    N = eq.N
    m = N - 1
    order = order or 2 * (N + 1) + 8
    chosen = [s for s in samples if abs(s.y) >= min_abs_y and np.isfinite(s.y)]
    if len(chosen) < 8:
        raise PreconditionError(f"series matching needs at least 8 samples with |y| >= {min_abs_y}")

    if eq.is_canonical:
        canon = CanonicalEquation.from_spec(eq).to_float()
        points = [(s.z, s.y) for s in chosen]
        fit_shift = True
    else:
        canon, record = canonicalize(eq, z_star, cs.series_order)
        points = [pushforward_state(record, *s.state)[:2] for s in chosen]
        fit_shift = False
    zs = np.array([p[0] for p in points], dtype=complex)
    ys = np.array([p[1] for p in points], dtype=complex)
    origin = complex(z_star) if fit_shift else 0j

    def model(params: np.ndarray, k: int) -> np.ndarray:
        beta = complex(params[0], params[1])
        base = origin + (complex(params[2], params[3]) if fit_shift else 0j)
        result = expand(canon, branch, beta, order, base=base if canon.is_polynomial else None, tol=np.inf)
        coeffs = np.array([complex(result.series.coefficient(j)) for j in range(-2, result.series.order + 1)])
        zeta = zs - base
        phase = np.unwrap(np.angle(zeta))
        return _series_values(coeffs, -2, zeta, phase, m, k)

    def residual(params: np.ndarray, k: int) -> np.ndarray:
        r = (model(params, k) - ys) / np.abs(ys)
        return np.concatenate([r.real, r.imag])

    x0 = np.zeros(4 if fit_shift else 2)
    sheet = min(range(m), key=lambda k: float(np.sum(residual(x0, k) ** 2)))
    sol = least_squares(lambda p: residual(p, sheet), x0, method="lm")
    rms = float(np.sqrt(np.mean(sol.fun ** 2)))
    if rms > cs.branch_fit_tol:
        logger.warning(f"⚠️ no branch fits at {z_star:.8g} (residual {rms:.3e})")
        raise NoBranchFitError(rms, cs.branch_fit_tol)
    shift = complex(sol.x[2], sol.x[3]) if fit_shift else 0j
    beta = complex(sol.x[0], sol.x[1])
    logger.info(f"✅ series match at {z_star + shift:.10g}: beta = {beta:.8g}, residual {rms:.2e}")
    return MatchResult(beta, complex(z_star) + shift, rms, sheet, len(chosen))
