# tests/test_utils/test_parallel.py
from lapnet.utils.parallel import THREADS_ENV_VAR, ordered_map, thread_count


def test_thread_count_defaults_to_one(monkeypatch):
    monkeypatch.delenv(THREADS_ENV_VAR, raising=False)
    assert thread_count() == 1
    assert thread_count(default=3) == 3


def test_thread_count_reads_environment(monkeypatch):
    monkeypatch.setenv(THREADS_ENV_VAR, "4")
    assert thread_count(default=2) == 4


def test_thread_count_ignores_invalid_environment(monkeypatch):
    monkeypatch.setenv(THREADS_ENV_VAR, "many")
    assert thread_count(default=2) == 2
    monkeypatch.setenv(THREADS_ENV_VAR, "0")
    assert thread_count() == 1


def test_ordered_map_keeps_input_order():
    items = list(range(50))
    serial = ordered_map(lambda x: x * x, items, threads=1)
    threaded = ordered_map(lambda x: x * x, items, threads=4)
    assert serial == threaded == [x * x for x in items]


def test_ordered_map_empty():
    assert ordered_map(str, [], threads=4) == []
