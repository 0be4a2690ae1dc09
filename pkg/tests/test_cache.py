import json

from context.cache_manager import CacheManager, CacheRecord
from context.search_context import SearchContext, TaskOutcome
from services.extremal_service import ExtremalService
from tools import constructions as cons


def _service(path) -> ExtremalService:
    return ExtremalService(split_depth=3, cache=CacheManager(str(path)))


def test_exact_results_are_reused(tmp_path, triangle):
    path = tmp_path / "cache.jsonl"
    first = _service(path).max_cliques_forbidden(5, 2, [triangle])
    assert not first.from_cache
    again = _service(path).max_cliques_forbidden(5, 2, [triangle])
    assert again.from_cache
    assert (again.optimum, again.witness_text()) == (first.optimum, first.witness_text())


def test_tampered_optimum_is_rejected(tmp_path, triangle):
    path = tmp_path / "cache.jsonl"
    first = _service(path).max_cliques_forbidden(5, 2, [triangle])
    lines = path.read_text(encoding="utf-8").splitlines()
    record = json.loads(lines[-1])
    record["optimum"] += 1
    path.write_text(json.dumps(record) + "\n", encoding="utf-8")

    fresh = _service(path).max_cliques_forbidden(5, 2, [triangle])
    assert not fresh.from_cache
    assert fresh.optimum == first.optimum


def test_malformed_lines_are_skipped(tmp_path):
    path = tmp_path / "cache.jsonl"
    good = CacheRecord("abc", "ex", {}, 5, "", 1, 0.0, "1.0.0")
    path.write_text("not json\n" + good.to_json() + "\n", encoding="utf-8")
    cache = CacheManager(str(path))
    assert cache.lookup("abc", lambda rec: True) == good
    assert cache.lookup("abc", lambda rec: False) is None
    assert cache.lookup("missing", lambda rec: True) is None


def test_disabled_cache_neither_reads_nor_writes(tmp_path):
    path = tmp_path / "cache.jsonl"
    cache = CacheManager(str(path), enabled=False)
    cache.store(CacheRecord("abc", "ex", {}, 5, "", 1, 0.0, "1.0.0"))
    assert not path.exists()
    assert cache.lookup("abc", lambda rec: True) is None


def test_context_merges_in_task_order(tmp_path):
    context = SearchContext("ex-cliques", "key", {"n": 5})
    context.record_seed(3, [1], 4)
    context.add_outcome(TaskOutcome(1, 5, [2], 10))
    context.add_outcome(TaskOutcome(0, 5, [3], 7))
    context.add_outcome(TaskOutcome(2, 4, None, 2, exhausted=True))
    assert context.best() == (5, [3])
    assert context.nodes == 23
    assert context.exhausted
    saved = context.save_snapshot(str(tmp_path / "snapshots"))
    with open(saved, encoding="utf-8") as f:
        assert json.load(f)["optimum"] == 5


def test_uniform_and_complex_searches_share_one_file(tmp_path, closed_triangle):
    path = tmp_path / "cache.jsonl"
    service = _service(path)
    service.max_edges_pattern_free(4, closed_triangle)
    service.max_copies(5, 2, cons.complete(2, 3), cons.complete(2, 4))
    assert len(path.read_text(encoding="utf-8").splitlines()) == 2
    assert _service(path).max_edges_pattern_free(4, closed_triangle).from_cache
