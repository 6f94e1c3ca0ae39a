"""
Monodromy loops around a located singularity.

Loops start from the sample of the located trajectory whose distance to z*
is closest to the loop radius, so the starting state is one the integrator
produced at moderate |y|. The solution is continued radially onto the circle
and then around it one turn at a time, each turn made of four quarter arcs.
After every quarter the center is refit to the arc just traversed (exponent
held at the located value) and the next arc is drawn around it; a short
segment closes every turn at the start point.

Before looping, chords of the disc are integrated from the start point; a
singularity other than z* found inside the disc rejects the loop.

The state after every turn is compared with the state at the loop start: an
algebraic branch point with ramification m returns after m turns and not
before.
"""

import cmath
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

from psent.app.core.analysis.expansion import BranchClass
from psent.app.core.analysis.equation import SecondOrderEquation
from psent.app.core.continuation.integrator import integrate
from psent.app.core.continuation.locate import SingularityReport, refine_center
from psent.app.core.continuation.scan import scan
from psent.app.core.continuation.types import (
    ArcLeg, ContinuationSettings, PathSpec, Sample, Termination, Trajectory, states_close)
from psent.app.core.errors import LoopEncounterError, PreconditionError
from psent.app.core.logger import get_logger


logger = get_logger(__name__)

# largest move of the center per quarter turn, relative to the radius
MAX_RECENTER = 0.05


@dataclass(frozen=True)
class MonodromyResult:
    """
    Attributes:
        z_star (complex): Loop center.
        radius (float): Loop radius.
        start (tuple): (z, y, y') where the loops start.
        states (tuple): State after each completed turn.
        deviations (tuple): `states_close(start, state)` after each turn.
        ramification (int): Expected number of turns to return, if known.
        centers (tuple): Center used for every quarter arc.
    """

    z_star: complex
    radius: float
    start: Tuple[complex, complex, complex]
    states: Tuple[Tuple[complex, complex, complex], ...]
    deviations: Tuple[float, ...]
    ramification: Optional[int] = None
    trajectory: Optional[Trajectory] = None
    centers: Tuple[complex, ...] = ()

    @property
    def final_state(self) -> Tuple[complex, complex, complex]:
        return self.states[-1]

    def returns_after(self, tol: float = 1e-5) -> Optional[int]:
        """ First number of turns after which the state is back within `tol`. """
        return next((k + 1 for k, d in enumerate(self.deviations) if d <= tol), None)


def _checked(traj: Trajectory, what: str) -> Trajectory:
    if traj.termination is not Termination.COMPLETED:
        z = traj.last.z
        raise LoopEncounterError(f"{what} ended with {traj.termination.value} at z = {z:.8g}")
    return traj


def loop_start(report: SingularityReport, radius: float, center: Optional[complex] = None) -> Sample:
    """
    The sample of the located run closest to the circle |z - center| = radius.

    Only samples up to the largest |y| are considered. Without a stored run
    the handoff anchor is used.
    """
    center = complex(report.z_star if center is None else center)
    if report.trajectory is None:
        if report.anchor is None:
            raise PreconditionError("the singularity report carries no state to start the loops from")
        return report.anchor
    samples = report.trajectory.samples[:report.trajectory.peak_index() + 1]
    candidates = [s for s in samples if s.z != center]
    if not candidates:
        raise PreconditionError("the located run never leaves the loop center")
    return min(candidates, key=lambda s: abs(abs(s.z - center) - radius))


def enclosed_singularities(eq: SecondOrderEquation, center: complex, state: Tuple[complex, complex, complex],
                           radius: float, cs: Optional[ContinuationSettings] = None,
                           chords: int = 8) -> List[complex]:
    """
    Singularities other than `center` met on chords of the disc |z - center| < radius.

    The chords run from `state` (a point on the circle) to `chords` points of
    the circle spread evenly around it; none passes through the center.
    """
    cs = cs or ContinuationSettings.from_settings()
    center = complex(center)
    z0 = complex(state[0])
    theta0 = cmath.phase(z0 - center)
    ends = [center + radius * cmath.exp(1j * (theta0 + 2 * math.pi * (k + 0.5) / chords)) for k in range(chords)]
    fan = [PathSpec((z0, end)) for end in ends]
    found = []
    for entry in scan(eq, state, fan, cs):
        traj = entry.trajectory
        if entry.report is not None:
            hit = entry.report.z_star
        elif traj is not None and traj.termination in (Termination.SINGULARITY, Termination.STEP_COLLAPSE):
            hit = traj.last.z
        else:
            continue
        if MAX_RECENTER * radius < abs(hit - center) < radius:
            found.append(hit)
    return found


def _sweep_to(center: complex, z: complex, target_angle: float, direction: float) -> float:
    """ Signed sweep from the angle of z around center to target_angle, in (0, 2 pi) times direction. """
    delta = (target_angle - cmath.phase(z - center)) * direction
    delta = math.fmod(delta, 2 * math.pi)
    if delta <= 0:
        delta += 2 * math.pi
    return direction * delta


def loop_around(eq: SecondOrderEquation, center: complex, state: Tuple[complex, complex, complex],
                radius: float, turns: int, cs: Optional[ContinuationSettings] = None,
                ramification: Optional[int] = None, exponent: Optional[float] = None,
                check_enclosure: bool = True) -> MonodromyResult:
    """
    Continue `state` to the circle |z - center| = radius and loop `turns` times.

    Args:
        exponent: Leading exponent at the center; when given, the center is
            refit after every quarter turn.
        check_enclosure: Scan chords of the disc for other singularities first.

    Raises:
        LoopEncounterError: If a singularity is met on the way or on the circle.
        PreconditionError: If the disc holds another singularity.
    """
    cs = cs or ContinuationSettings.from_settings()
    if radius <= 0 or turns == 0:
        raise PreconditionError("loops need a positive radius and a nonzero number of turns")
    center = complex(center)
    z, y, yp = (complex(v) for v in state)
    offset = z - center
    if offset == 0:
        raise PreconditionError("the loop cannot start at its center")
    entry = center + radius * offset / abs(offset)
    trajectory = None
    if abs(entry - z) > 1e-14 * max(1.0, abs(z)):
        trajectory = _checked(integrate(eq, (z, y, yp), PathSpec.segment(z, entry), cs), "radial entry")
        z, y, yp = trajectory.last.state
    start = (z, y, yp)

    if check_enclosure:
        others = enclosed_singularities(eq, center, start, radius, cs)
        if others:
            raise PreconditionError(
                f"the loop of radius {radius:g} around {center:.8g} also encloses {others[0]:.8g}")

    theta0 = cmath.phase(offset)
    direction = math.copysign(1.0, turns)
    states: List[Tuple[complex, complex, complex]] = []
    deviations: List[float] = []
    centers: List[complex] = []
    for turn in range(abs(turns)):
        c = center
        for quarter in range(4):
            target = theta0 + direction * (quarter + 1) * math.pi / 2
            arc = ArcLeg(c, abs(z - c), cmath.phase(z - c), _sweep_to(c, z, target, direction))
            traj = _checked(integrate(eq, (z, y, yp), PathSpec((z,), extra_legs=(arc,)), cs),
                            f"turn {turn + 1}, quarter {quarter + 1}")
            trajectory = traj if trajectory is None else trajectory.concat(traj)
            centers.append(c)
            z, y, yp = traj.last.state
            if exponent is not None and quarter < 3:
                moved = refine_center(traj.samples, c, exponent) - c
                if abs(moved) > MAX_RECENTER * radius:
                    moved *= MAX_RECENTER * radius / abs(moved)
                c += moved
        if abs(z - start[0]) > 1e-14 * max(1.0, abs(z)):
            traj = _checked(integrate(eq, (z, y, yp), PathSpec.segment(z, start[0]), cs), f"closing turn {turn + 1}")
            trajectory = trajectory.concat(traj)
            y, yp = traj.last.y, traj.last.yp
        z = start[0]
        states.append((z, y, yp))
        deviations.append(states_close(start[1:], (y, yp)))
        logger.debug(f"turn {turn + 1}: deviation {deviations[-1]:.3e}")
    return MonodromyResult(center, radius, start, tuple(states), tuple(deviations), ramification, trajectory,
                           tuple(centers))


def monodromy(eq: SecondOrderEquation, report: SingularityReport, radius: float,
              turns: Optional[int] = None, cs: Optional[ContinuationSettings] = None) -> MonodromyResult:
    """
    Loop around a located singularity.

    Args:
        eq: The equation of the located trajectory.
        report (SingularityReport): Output of `locate`, with the run that reached the singularity.
        radius (float): Loop radius, small enough to exclude other singularities.
        turns (int): Number of turns; defaults to the ramification of the branch class.

    Returns:
        MonodromyResult: States and deviations after every turn.
    """
    m = report.branch_class.ramification if isinstance(report.branch_class, BranchClass) else None
    turns = turns if turns is not None else (m or 1)
    start = loop_start(report, radius)
    logger.info(f"🚀 monodromy around {report.z_star:.10g}: radius {radius:g}, {turns} turn(s), "
                f"starting at {start.z:.6g}")
    result = loop_around(eq, report.z_star, start.state, radius, turns, cs, m, report.exponent_estimate)
    back = result.returns_after()
    if m is not None and back is not None and back != m:
        logger.warning(f"⚠️ state returned after {back} turn(s), expected {m}")
    logger.info(f"✅ monodromy deviations {', '.join(f'{d:.2e}' for d in result.deviations)}")
    return result
