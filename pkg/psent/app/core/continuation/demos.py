"""
Demo equations outside the analysable class.

Two equations illustrate singularities accumulating at a finite point:

    - smith:   y'' = -4 y^3 y' - y, whose movable singularities are algebraic
               branch points y ~ c (z - z*)^{-1/3} with c^3 = 1/3, and along
               which Phi = y' + y^4 stays bounded.
    - warning: y'' = (2y - 1)/(y^2 + 1) y'^2, solved by y = tan(log(c1 z - c2)),
               with poles z_n = (c2 + exp(pi/2 + n pi)) / c1 accumulating at c2/c1.

Both can be integrated, scanned and fitted; the analysis modules reject
them. Further demo equations may be registered by installed distributions
under the entry-point group `psent.demo_equations`.
"""

import cmath
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Type

import numpy as np

from psent.app.core.analysis.equation import SecondOrderEquation
from psent.app.core.continuation.integrator import integrate
from psent.app.core.continuation.locate import SingularityReport, locate
from psent.app.core.continuation.types import ArcLeg, ContinuationSettings, PathSpec, Termination, Trajectory
from psent.app.core.errors import PreconditionError, PsentError, UnknownDemoError
from psent.app.core.logger import get_logger
from psent.app.core.utils import available_plugins, load_plugin


logger = get_logger(__name__)

DEMO_GROUP = "psent.demo_equations"


class DemoEquation(SecondOrderEquation):
    """ Base class of demo equations; `description` is shown by the CLI. """

    description: str = ""

    @property
    def name(self) -> str:
        return type(self).__name__


class SmithEquation(DemoEquation):
    description = "y'' = -4 y^3 y' - y (algebraic singularities with exponent -1/3)"

    @property
    def name(self) -> str:
        return "smith"

    def acceleration(self, z, y, yp):
        y2 = y * y
        return -4 * y2 * y * yp - y

    @staticmethod
    def phi(y, yp):
        y2 = y * y
        return yp + y2 * y2


@dataclass(frozen=True)
class WarningEquation(DemoEquation):
    """ y'' = (2y - 1)/(y^2 + 1) y'^2 with the exact solution y = tan(log(c1 z - c2)). """

    c1: complex = 1.0
    c2: complex = 0.0
    description = "y'' = (2y - 1)/(y^2 + 1) y'^2 (poles accumulating at c2/c1)"

    @property
    def name(self) -> str:
        return "warning"

    def acceleration(self, z, y, yp):
        return (2 * y - 1) / (y * y + 1) * yp * yp

    @property
    def accumulation_point(self) -> complex:
        return self.c2 / self.c1

    def solution(self, z) -> Tuple[complex, complex]:
        """ (y, y') of tan(log(c1 z - c2)) at z. """
        w = cmath.log(self.c1 * z - self.c2)
        sec2 = 1 / cmath.cos(w) ** 2
        return cmath.tan(w), sec2 * self.c1 / (self.c1 * z - self.c2)

    def pole(self, n: int) -> complex:
        return (self.c2 + math.exp(math.pi / 2 + n * math.pi)) / self.c1

    def poles_between(self, z0: complex, count: int) -> List[complex]:
        """ The first `count` poles met walking from z0 straight to the accumulation point. """
        distance = abs(z0 - self.accumulation_point)
        n = math.floor((math.log(distance * abs(self.c1)) - math.pi / 2) / math.pi)
        return [self.pole(n - k) for k in range(count)]


_BUILTIN: Dict[str, Type[DemoEquation]] = {
    "smith": SmithEquation,
    "warning": WarningEquation,
}


def demo_equations() -> Dict[str, Type[DemoEquation]]:
    """ Built-in demo equations by name. """
    return dict(_BUILTIN)


def demo_names() -> List[str]:
    return sorted(set(_BUILTIN) | set(available_plugins(DEMO_GROUP)))


def load_demo(name: str) -> DemoEquation:
    """
    Instantiate a demo equation by name.

    Raises:
        UnknownDemoError: If neither the built-ins nor the plugins know `name`.
    """
    if name in _BUILTIN:
        return _BUILTIN[name]()
    try:
        factory = load_plugin(DEMO_GROUP, name)
    except ValueError:
        raise UnknownDemoError(f"unknown demo equation '{name}'; known: {', '.join(demo_names())}")
    return factory()


def phi_monitor(traj: Trajectory) -> np.ndarray:
    """ |Phi| = |y' + y^4| at every sample of a Smith trajectory. """
    _, y, yp = traj.arrays()
    return np.abs(SmithEquation.phi(y, yp))


# ----------------------------------------------------------------------
# walks
# ----------------------------------------------------------------------

@dataclass
class VaultWalk:
    """ Reports of the singularities met on the way, in order, and the runs between them. """

    reports: List[SingularityReport] = field(default_factory=list)
    trajectories: List[Trajectory] = field(default_factory=list)
    reached: bool = False


def _vault(eq, traj: Trajectory, report: SingularityReport, radius: float, cs: ContinuationSettings) -> Trajectory:
    """ Back off to the circle of `radius` about z* and go half way around it. """
    center = report.z_star
    back = next((s for s in reversed(traj.samples) if abs(s.z - center) >= radius), traj.samples[0])
    direction = (back.z - center) / abs(back.z - center)
    entry = center + radius * direction
    arc = ArcLeg(center, radius, cmath.phase(direction), math.pi)
    if abs(entry - back.z) > 1e-12 * max(1.0, abs(entry)):
        path = PathSpec((back.z, entry), extra_legs=(arc,))
    else:
        path = PathSpec((back.z,), extra_legs=(arc,))
    run = integrate(eq, back.state, path, cs)
    if run.termination is not Termination.COMPLETED:
        raise PreconditionError(f"vaulting around {center:.8g} ran into another singularity")
    return run


def vault_walk(eq, state0: Tuple[complex, complex, complex], target: complex,
               cs: Optional[ContinuationSettings] = None, max_singularities: int = 10) -> VaultWalk:
    """
    Walk toward `target`, vaulting around every singularity met on the way.

    Each singularity is located, then passed on a counterclockwise half circle
    of radius `vault_radius_factor * |z* - target|`; the walk resumes toward
    the target from the far side.
    """
    cs = cs or ContinuationSettings.from_settings()
    walk = VaultWalk()
    state = tuple(complex(v) for v in state0)
    target = complex(target)
    while True:
        traj = integrate(eq, state, PathSpec.segment(state[0], target), cs)
        walk.trajectories.append(traj)
        if traj.termination is Termination.COMPLETED:
            walk.reached = True
            break
        report = locate(eq, traj, cs)
        walk.reports.append(report)
        logger.info(f"✅ singularity {len(walk.reports)} at {report.z_star:.10g}")
        if len(walk.reports) == max_singularities:
            break
        run = _vault(eq, traj, report, cs.vault_radius_factor * abs(report.z_star - target), cs)
        walk.trajectories.append(run)
        state = run.last.state
    return walk


# ----------------------------------------------------------------------
# demo runs
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class DemoOutcome:
    """
    Attributes:
        name (str): Demo name.
        reports (list): Located singularities in the order they were met.
        expected (list): Exact locations where known, paired with `reports`.
        phi (list): Largest |Phi| on each approach (Smith only).
    """

    name: str
    reports: List[SingularityReport]
    expected: Optional[List[complex]] = None
    phi: Optional[List[float]] = None
    trajectories: List[Trajectory] = field(default_factory=list)

    def errors(self) -> List[float]:
        if self.expected is None:
            return []
        return [abs(r.z_star - e) for r, e in zip(self.reports, self.expected)]


def run_warning_demo(cs: Optional[ContinuationSettings] = None, count: int = 4,
                     z0: complex = 30.0, c1: complex = 1.0, c2: complex = 0.0) -> DemoOutcome:
    """ Walk from z0 toward c2/c1 and locate the first `count` poles of tan(log(c1 z - c2)). """
    eq = WarningEquation(c1, c2)
    y0, yp0 = eq.solution(z0)
    logger.info(f"🚀 warning demo from z = {z0} toward {eq.accumulation_point}")
    walk = vault_walk(eq, (z0, y0, yp0), eq.accumulation_point, cs, max_singularities=count)
    expected = eq.poles_between(z0, len(walk.reports))
    return DemoOutcome("warning", walk.reports, expected, None, walk.trajectories)


def _distinct(reports: Sequence[SingularityReport], z_star: complex, tol: float = 1e-4) -> bool:
    return all(abs(r.z_star - z_star) > tol for r in reports)


def smith_targets(phi0: complex, levels: int = 2) -> List[complex]:
    """
    Predicted Smith singularities for y(0) = 0, y'(0) = phi0 with |phi0| large.

    While Phi stays near phi0, y = phi0^{1/4} w(phi0^{3/4} z) with w' = 1 - w^4,
    whose singularities nearest the real axis sit at s = pi/4 (+-1 + (2n + 1) i).
    """
    scale = complex(phi0) ** -0.75
    return [scale * math.pi / 4 * (side + (2 * n + 1) * 1j) for side in (1, -1) for n in range(-levels, levels)]


def smith_path(phi0: complex, target: complex, reach: float = 2.0) -> PathSpec:
    """
    Route to a predicted singularity that stays clear of the others.

    Out along the real axis to reach * |phi0|^{-3/4} on the target's side,
    up to the target's height, then straight across it and half as far again.
    """
    x = math.copysign(reach * abs(complex(phi0)) ** -0.75, target.real)
    corner = complex(x, target.imag)
    end = target - 0.5 * (corner - target)
    return PathSpec((0j, complex(x), corner, end))


def run_smith_demo(cs: Optional[ContinuationSettings] = None, phi0: complex = 16.0, levels: int = 2,
                   reach: float = 2.0) -> DemoOutcome:
    """
    Locate Smith singularities from y(0) = 0, y'(0) = phi0.

    Each run follows `smith_path` to one of `smith_targets`; `locate` steers
    into the singularity when the run only passes near it, since Phi drifts
    away from phi0 along the way. The blow-up threshold is lowered to 1e4
    because |y| only grows like |z - z*|^{-1/3}.
    """
    cs = cs or ContinuationSettings.from_settings()
    cs = cs.model_copy(update={"blowup_threshold": min(cs.blowup_threshold, 1e4),
                               "chart_handoff_radius": min(cs.chart_handoff_radius, 1e2)})
    eq = SmithEquation()
    targets = smith_targets(phi0, levels)
    logger.info(f"🚀 smith demo: Phi(0) = {phi0}, {len(targets)} predicted singularities")
    reports: List[SingularityReport] = []
    phis: List[float] = []
    trajectories: List[Trajectory] = []
    for target in targets:
        try:
            traj = integrate(eq, (0j, 0j, complex(phi0)), smith_path(phi0, target, reach), cs)
            report = locate(eq, traj, cs)
        except PsentError as err:
            logger.warning(f"⚠️ no singularity near {target:.6g}: {err}")
            continue
        if not _distinct(reports, report.z_star):
            continue
        run = report.trajectory or traj
        reports.append(report)
        trajectories.append(run)
        phis.append(float(np.max(phi_monitor(Trajectory(tuple(run.growth_tail()), run.termination)))))
        logger.debug(f"smith singularity at {report.z_star:.8g} (predicted {target:.8g})")
    logger.info(f"✅ smith demo located {len(reports)} singularit{'y' if len(reports) == 1 else 'ies'}")
    return DemoOutcome("smith", reports, None, phis, trajectories)
