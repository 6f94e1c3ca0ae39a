"""
Scanning a fan of paths for singularities.

Each path is integrated from the same initial state and, when the run shows
a singularity, handed to `locate`. Paths are independent, so they run on a
thread pool capped by `threads`; the result list always follows the input
order. Failures are recorded per path and never abort the scan.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from psent.app.core.analysis.equation import SecondOrderEquation
from psent.app.core.continuation.integrator import integrate
from psent.app.core.continuation.locate import SingularityReport, locate
from psent.app.core.continuation.types import ContinuationSettings, PathSpec, Termination, Trajectory
from psent.app.core.errors import PreconditionError, PsentError
from psent.app.core.logger import get_logger


logger = get_logger(__name__)


@dataclass(frozen=True)
class ScanEntry:
    index: int
    path: PathSpec
    trajectory: Optional[Trajectory] = None
    report: Optional[SingularityReport] = None
    error: Optional[dict] = None

    @property
    def found(self) -> bool:
        return self.report is not None


def ray_fan(origin: complex, count: int, length: float, phase: float = 0.0) -> List[PathSpec]:
    """ `count` rays of the given length from `origin`, equally spaced in angle. """
    if count < 1 or length <= 0:
        raise PreconditionError("a fan needs at least one ray of positive length")
    return [PathSpec.ray(complex(origin), phase + 2 * math.pi * k / count, length) for k in range(count)]


def _shows_singularity(traj: Trajectory, cs: ContinuationSettings) -> bool:
    if traj.termination in (Termination.SINGULARITY, Termination.STEP_COLLAPSE):
        return True
    return abs(traj.samples[traj.peak_index()].y) >= cs.chart_handoff_radius


def _scan_one(eq: SecondOrderEquation, state0: Tuple[complex, complex, complex], index: int,
              path: PathSpec, cs: ContinuationSettings) -> ScanEntry:
    traj = None
    try:
        state = (path.start, state0[1], state0[2])
        traj = integrate(eq, state, path, cs)
        report = locate(eq, traj, cs) if _shows_singularity(traj, cs) else None
        return ScanEntry(index, path, traj, report)
    except PsentError as err:
        logger.warning(f"⚠️ path {index}: {type(err).__name__}: {err}")
        return ScanEntry(index, path, traj or getattr(err, "trajectory", None), None, err.payload())


def scan(eq: SecondOrderEquation, state0: Tuple[complex, complex, complex], fan: Sequence[PathSpec],
         cs: Optional[ContinuationSettings] = None) -> List[ScanEntry]:
    """
    Integrate and locate along every path of `fan`.

    Args:
        eq: The equation.
        state0: (z0, y, y'); every path must start at z0.
        fan: Paths to run.
        cs (ContinuationSettings): Settings; `cs.threads` caps the worker pool.

    Returns:
        List[ScanEntry]: One entry per path, in input order.
    """
    cs = cs or ContinuationSettings.from_settings()
    z0 = complex(state0[0])
    for path in fan:
        if abs(path.start - z0) > 1e-12 * max(1.0, abs(z0)):
            raise PreconditionError(f"path starting at {path.start} does not start at {z0}")
    logger.info(f"🚀 scanning {len(fan)} path(s) with {min(cs.threads, max(len(fan), 1))} worker(s)")

    def run(item):
        return _scan_one(eq, state0, item[0], item[1], cs)

    if cs.threads == 1 or len(fan) <= 1:
        entries = [run(item) for item in enumerate(fan)]
    else:
        with ThreadPoolExecutor(max_workers=cs.threads) as pool:
            entries = list(pool.map(run, enumerate(fan)))
    found = sum(e.found for e in entries)
    logger.info(f"✅ scan finished: {found} singularit{'y' if found == 1 else 'ies'} located")
    return entries

