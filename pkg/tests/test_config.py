import pytest
from pydantic import ValidationError

from psent.app.config import Settings
from psent.app.core.continuation.types import ContinuationSettings


def test_defaults(monkeypatch):
    for name in ("PSENT_THREADS", "PSENT_REL_TOL", "LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    s = Settings(_env_file=None)
    assert s.rel_tol == 1e-9
    assert s.blowup_threshold == 1e6
    assert s.chart_handoff_radius == 1e3
    assert s.branch_fit_tol == 1e-3
    assert s.threads == 4
    assert s.log_level == "info"


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("PSENT_THREADS", "2")
    monkeypatch.setenv("PSENT_REL_TOL", "1e-12")
    monkeypatch.setenv("LOG_LEVEL", "DEBUG")
    s = Settings(_env_file=None)
    assert s.threads == 2
    assert s.rel_tol == 1e-12
    assert s.log_level == "debug"
    cs = ContinuationSettings.from_settings(s, abs_tol=1e-7)
    assert cs.threads == 2
    assert cs.abs_tol == 1e-7


@pytest.mark.parametrize("name, value", [
    ("PSENT_THREADS", "0"),
    ("PSENT_BLOWUP_THRESHOLD", "-1"),
    ("LOG_LEVEL", "loud"),
])
def test_invalid_values(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(ValidationError):
        Settings(_env_file=None)


def test_continuation_settings_are_frozen():
    cs = ContinuationSettings.from_settings()
    with pytest.raises(ValidationError):
        cs.rel_tol = 1e-3
    assert cs.model_copy(update={"rel_tol": 1e-3}).rel_tol == 1e-3
