"""
Demo Command for psent
======================

Commands:
    demo warning    - Walk toward the accumulation point of tan(log z) and locate its poles
    demo smith      - Routes from y(0) = 0, y'(0) = --yp0 (default 16) to predicted singularities of y'' = -4 y^3 y' - y
    demo <plugin>   - Ray fan from --z0 for a demo equation registered under `psent.demo_equations`

Writes demo.json with the located singularities (and the exact pole
locations for the warning equation).

Example:
    .. code-block:: bash

        psent demo warning --out results/
"""

from psent.app.commands.common import as_complex, continuation_settings, output_dir
from psent.app.core.continuation.demos import DemoOutcome, load_demo, run_smith_demo, run_warning_demo
from psent.app.core.continuation.scan import ray_fan, scan
from psent.app.core.logger import get_logger
from psent.app.reports import DemoReportModel, RunConfig, write_json


logger = get_logger(__name__)


def run_demo(config: RunConfig) -> int:
    cs = continuation_settings(config)
    if config.demo == "warning":
        outcome = run_warning_demo(cs)
    elif config.demo == "smith":
        outcome = run_smith_demo(cs, phi0=as_complex(config.yp0) if config.yp0 is not None else 16.0)
    else:
        eq = load_demo(config.demo)
        z0 = as_complex(config.z0) if config.z0 is not None else 0j
        y0 = as_complex(config.y0) if config.y0 is not None else 1 + 0j
        yp0 = as_complex(config.yp0) if config.yp0 is not None else 0j
        entries = scan(eq, (z0, y0, yp0), ray_fan(z0, config.rays or 8, config.length or 2.0), cs)
        outcome = DemoOutcome(config.demo, [e.report for e in entries if e.report is not None])
    write_json(DemoReportModel.from_result(outcome), output_dir(config) / "demo.json")
    for k, report in enumerate(outcome.reports):
        line = f"{k}: z* = {report.z_star:.10g}  exponent {report.exponent_estimate:.4f}"
        if outcome.expected is not None:
            line += f"  exact {outcome.expected[k]:.10g}"
        print(line)
    logger.info(f"✅ demo {config.demo}: {len(outcome.reports)} singularities")
    return 0
