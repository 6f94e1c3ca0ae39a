"""
Analysis Commands for psent
===========================

Commands:
    analyze     - Resonance conditions of an equation file -> resonance.json
    expand      - Puiseux expansion about a movable singularity -> expansion.json + table on stdout

Exit codes:
    0 on PASS / success, 2 when the resonance check fails (the report is still
    written) or the expansion is obstructed, 1 on input errors.

Example:
    .. code-block:: bash

        psent analyze --equation painleve1.json --out results/
        psent expand --equation painleve1.json --z0 1,0 --beta 0,0 --order 8
"""

from psent.app.commands.common import as_complex, as_exact, load_equation, output_dir
from psent.app.config import settings
from psent.app.core.analysis.canonical import CanonicalEquation, canonicalize
from psent.app.core.analysis.expansion import BranchClass, expand
from psent.app.core.analysis.resonance import check_resonance, check_resonance_series, closed_form_condition
from psent.app.core.logger import get_logger
from psent.app.reports import EquationFile, ExpansionReportModel, ResonanceReportModel, RunConfig, write_json


logger = get_logger(__name__)

CLOSED_FORM_DEGREES = (3, 5, 7)


def series_base_points(z0: complex):
    return [z0, z0 + 0.5, z0 + 0.5j]


def run_analyze(config: RunConfig) -> int:
    eq = load_equation(config)
    if eq.is_canonical and config.mode == "exact":
        report = check_resonance(eq)
        closed = closed_form_condition(eq) if eq.N in CLOSED_FORM_DEGREES else None
    else:
        if config.mode == "exact":
            logger.warning("⚠️ equation is not canonical; checking in series mode")
        z0 = as_complex(config.z0) if config.z0 is not None else 0j
        report = check_resonance_series(eq, series_base_points(z0), config.order or settings.series_order)
        closed = None
    model = ResonanceReportModel.from_result(report, closed)
    write_json(model, output_dir(config) / "resonance.json")
    print(f"resonance: {report.verdict}")
    for witness in report.witnesses:
        print(f"  failed: {witness.name}" + (f" at {witness.base_point}" if witness.base_point is not None else ""))
    logger.info(f"✅ resonance {report.verdict} for {eq.name}")
    return 0 if report.passed else 2


def run_expand(config: RunConfig) -> int:
    eq = EquationFile.from_path(config.equation).to_spec()
    branch = BranchClass.from_label(eq.N, config.branch)
    exact = config.mode == "exact"
    beta = as_exact(config.beta) if exact else as_complex(config.beta)
    if eq.is_canonical:
        canon = CanonicalEquation.from_spec(eq)
        base = as_exact(config.z0) if exact else as_complex(config.z0)
    else:
        canon, _ = canonicalize(eq, as_complex(config.z0), settings.series_order)
        base, beta = None, as_complex(config.beta)
    order = config.order or 2 * (eq.N + 1) + 4
    result = expand(canon, branch, beta, order, base=base)
    model = ExpansionReportModel.from_result(result)
    write_json(model, output_dir(config) / "expansion.json")
    print(model.table())
    logger.info(f"✅ expansion to index {result.order} at branch {branch}")
    return 0
