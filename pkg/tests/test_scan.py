import math

import pytest

from psent.app.core.continuation.scan import ray_fan, scan
from psent.app.core.continuation.types import ContinuationSettings, PathSpec
from psent.app.core.errors import PreconditionError
from psent.app.reports import ScanReportModel


def test_ray_fan():
    fan = ray_fan(1j, 4, 2.0)
    assert [p.start for p in fan] == [1j] * 4
    assert fan[1].legs()[-1].end == pytest.approx(1j + 2j)
    assert all(p.length() == pytest.approx(2.0) for p in fan)
    with pytest.raises(PreconditionError):
        ray_fan(0, 0, 1.0)


@pytest.mark.parametrize("threads", [1, 4])
def test_scan_finds_the_pole_on_one_ray(cubic, tight, threads):
    # y = 1/(z - 1) from the origin: only the ray along the positive real axis meets the pole
    cs = tight.model_copy(update={"threads": threads})
    entries = scan(cubic, (0, -1, -1), ray_fan(0, 8, 2.0), cs)
    assert [e.index for e in entries] == list(range(8))
    assert entries[0].found
    assert abs(entries[0].report.z_star - 1) <= 1e-8
    assert not any(e.found for e in entries[1:])
    assert all(e.error is None for e in entries)


def test_failures_are_recorded_per_path(cubic):
    cs = ContinuationSettings.from_settings(max_steps=3)
    entries = scan(cubic, (0, -1, -1), ray_fan(0, 2, 2.0), cs)
    assert len(entries) == 2
    assert all(e.error["error"] == "MaxStepsExceeded" for e in entries)
    assert all(e.trajectory is not None for e in entries)


def test_paths_must_share_the_start(cubic):
    with pytest.raises(PreconditionError):
        scan(cubic, (0, -1, -1), [PathSpec.segment(1, 2)])


def test_scan_of_segments(cubic, tight):
    fan = [PathSpec.segment(0, p) for p in (2, 2j, -2)]
    entries = scan(cubic, (0, -1, -1), fan, tight)
    assert [e.found for e in entries] == [True, False, False]
    assert math.isclose(entries[0].report.exponent_estimate, -1, abs_tol=0.01)


def test_serial_scans_are_bitwise_identical(cubic, tight):
    fan = ray_fan(0, 4, 2.0)
    first = ScanReportModel.from_result(scan(cubic, (0, -1, -1), fan, tight)).model_dump_json()
    second = ScanReportModel.from_result(scan(cubic, (0, -1, -1), fan, tight)).model_dump_json()
    assert first == second
