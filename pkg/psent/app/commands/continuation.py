"""
Continuation Commands for psent
===============================

Commands:
    continue    - Integrate along --path (and --loop) -> trajectory.csv + trajectory.json
    locate      - Integrate along --path and locate the singularity met -> singularity.json
    monodromy   - Locate, then loop around the singularity -> monodromy.json
    scan        - Rays from --z0 (--rays, --length) or segments from the first --path point
                  to every other one -> scan.json

The equation comes from --equation (class members) or --demo (demo equations).
Numeric failures exit with code 3; a partial trajectory is still written
when the step budget runs out.

Example:
    .. code-block:: bash

        psent locate --equation cubic.json --y0=-1,0 --yp0=-1,0 --path "0,0:2,0"
        psent scan --equation cubic.json --z0 0,0 --y0 1,0 --yp0=-1,0 --rays 8 --length 2
"""

from psent.app.commands.common import (
    as_complex, build_path, continuation_settings, initial_state, load_equation, output_dir)
from psent.app.core.analysis.expansion import BranchClass
from psent.app.core.continuation.integrator import integrate
from psent.app.core.continuation.locate import locate
from psent.app.core.continuation.monodromy import loop_around, loop_start, monodromy
from psent.app.core.continuation.scan import ray_fan, scan
from psent.app.core.continuation.types import PathSpec
from psent.app.core.errors import MaxStepsExceeded, PreconditionError
from psent.app.core.logger import get_logger
from psent.app.reports import (
    MonodromyReportModel, RunConfig, ScanReportModel, SingularityReportModel, TrajectoryReportModel,
    write_json, write_trajectory_csv)


logger = get_logger(__name__)


def _waypoints(config: RunConfig) -> PathSpec:
    return PathSpec(tuple(as_complex(w) for w in config.path))


def _integrate(config: RunConfig, eq, path: PathSpec, cs):
    out = output_dir(config)
    try:
        traj = integrate(eq, initial_state(config, path.start), path, cs)
    except MaxStepsExceeded as err:
        write_trajectory_csv(err.trajectory, out / "trajectory.csv")
        raise
    write_trajectory_csv(traj, out / "trajectory.csv")
    write_json(TrajectoryReportModel.from_result(traj), out / "trajectory.json")
    return traj


def run_continue(config: RunConfig) -> int:
    eq = load_equation(config)
    traj = _integrate(config, eq, build_path(config), continuation_settings(config))
    last = traj.last
    print(f"{traj.termination.value} after {traj.accepted_steps} steps: z = {last.z:.10g}, y = {last.y:.10g}")
    return 0


def run_locate(config: RunConfig) -> int:
    eq = load_equation(config)
    cs = continuation_settings(config)
    traj = _integrate(config, eq, _waypoints(config), cs)
    report = locate(eq, traj, cs)
    write_json(SingularityReportModel.from_result(report), output_dir(config) / "singularity.json")
    print(f"z* = {report.z_star:.12g}  exponent {report.exponent_estimate:.6g}  "
          f"class {report.branch_class}  method {report.method}")
    return 0


def run_monodromy(config: RunConfig) -> int:
    eq = load_equation(config)
    cs = continuation_settings(config)
    traj = _integrate(config, eq, _waypoints(config), cs)
    report = locate(eq, traj, cs)
    if config.loop is None:
        result = monodromy(eq, report, 0.5 * abs(traj.samples[0].z - report.z_star), cs=cs)
    else:
        m = report.branch_class.ramification if isinstance(report.branch_class, BranchClass) else None
        center = as_complex(config.loop.center)
        start = loop_start(report, config.loop.radius, center)
        result = loop_around(eq, center, start.state, config.loop.radius, config.loop.turns, cs, m,
                             report.exponent_estimate)
    write_json(MonodromyReportModel.from_result(result, report), output_dir(config) / "monodromy.json")
    print("deviation after each turn: " + ", ".join(f"{d:.3e}" for d in result.deviations))
    return 0


def run_scan(config: RunConfig) -> int:
    eq = load_equation(config)
    cs = continuation_settings(config)
    if config.rays:
        fan = ray_fan(as_complex(config.z0), config.rays, config.length or 2.0)
    else:
        points = [as_complex(w) for w in config.path]
        if len(points) < 2:
            raise PreconditionError("scan --path needs a start point and at least one end point")
        fan = [PathSpec.segment(points[0], p) for p in points[1:]]
    entries = scan(eq, initial_state(config, fan[0].start), fan, cs)
    write_json(ScanReportModel.from_result(entries), output_dir(config) / "scan.json")
    for e in entries:
        found = f"z* = {e.report.z_star:.10g}" if e.report else (e.error or {}).get("error", "no singularity")
        print(f"path {e.index}: {found}")
    return 0
