"""Tests for utility modules."""

import logging

import numpy as np

from xns11.utils.cache import AnCache
from xns11.utils.logging import setup_logging


def test_setup_logging_installs_single_handler():
    setup_logging("DEBUG")
    setup_logging("WARNING")
    logger = logging.getLogger("xns11")
    assert logger.level == logging.WARNING
    assert len(logger.handlers) == 1


def test_setup_logging_unknown_level_defaults_to_info():
    setup_logging("chatty")
    assert logging.getLogger("xns11").level == logging.INFO


def test_cache_round_trip(tmp_path):
    cache = AnCache(tmp_path)
    values = np.array([0, 1, -1, 0, -1, 1], dtype=np.int64)
    path = cache.store("B", values)
    assert path == tmp_path / "v1" / "an_B.tsv"
    assert path.read_text().splitlines()[0] == "# xns11 an-table v1 label=B nmax=5"
    assert list(cache.load("B", 5)) == list(values)
    assert list(cache.load("B", 3)) == list(values[:4])


def test_cache_too_short_is_a_miss(tmp_path):
    cache = AnCache(tmp_path)
    cache.store("A", np.arange(4, dtype=np.int64))
    assert cache.load("A", 10) is None


def test_cache_missing_is_a_miss(tmp_path):
    assert AnCache(tmp_path).load("C", 10) is None


def test_cache_malformed_is_ignored(tmp_path, caplog):
    cache = AnCache(tmp_path)
    path = cache.store("D", np.arange(4, dtype=np.int64))
    path.write_text("# xns11 an-table v1 label=D nmax=3\n1\t1\n3\t2\n")
    with caplog.at_level(logging.WARNING, logger="xns11.utils.cache"):
        assert cache.load("D", 3) is None
    assert "malformed" in caplog.text


def test_cache_label_mismatch_is_ignored(tmp_path):
    cache = AnCache(tmp_path)
    path = cache.store("A", np.arange(4, dtype=np.int64))
    path.rename(cache.path_for("B"))
    assert cache.load("B", 3) is None


def test_cache_leaves_no_temporary_files(tmp_path):
    cache = AnCache(tmp_path)
    cache.store("A", np.arange(6, dtype=np.int64))
    assert [p.name for p in (tmp_path / "v1").iterdir()] == ["an_A.tsv"]


def test_setup_logging_leaves_third_party_loggers_alone(mocker):
    setup_logging("DEBUG")
    handler = logging.getLogger("xns11").handlers[0]
    emit = mocker.patch.object(handler, "emit")
    logging.getLogger("sympy.polys").debug("factoring")
    emit.assert_not_called()
    logging.getLogger("xns11.derive.units").debug("units built")
    emit.assert_called_once()
    assert logging.getLogger("sympy").handlers == []
