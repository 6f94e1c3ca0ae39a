import logging

from psent.app.core.logger import ShortNameFormatter, get_logger, setup_logging


def record(name, level=logging.INFO):
    return logging.LogRecord(name, level, __file__, 1, "hello", None, None)


def test_prefix_is_stripped_and_padded():
    formatter = ShortNameFormatter("%(name)s|%(message)s", use_colors=False)
    line = formatter.format(record("psent.app.core.continuation.locate"))
    name, message = line.split("|")
    assert name == "[continuation.locate]".ljust(ShortNameFormatter.NAME_WIDTH)
    assert message == "hello"


def test_original_record_is_untouched():
    formatter = ShortNameFormatter("%(levelname)s %(name)s", use_colors=True)
    rec = record("psent.app.core.analysis.resonance", logging.WARNING)
    line = formatter.format(rec)
    assert ShortNameFormatter.LEVEL_COLORS["WARNING"] in line
    assert rec.name == "psent.app.core.analysis.resonance"
    assert rec.levelname == "WARNING"


def test_setup_logging_sets_the_level():
    root = logging.getLogger()
    saved_level, saved_handlers = root.level, list(root.handlers)
    try:
        setup_logging("warning", use_colors=False)
        assert root.level == logging.WARNING
        assert len(root.handlers) == 1
        assert isinstance(root.handlers[0].formatter, ShortNameFormatter)
        assert get_logger("psent.app.core.errors").getEffectiveLevel() == logging.WARNING
    finally:
        root.handlers[:] = saved_handlers
        root.setLevel(saved_level)
