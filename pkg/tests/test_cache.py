import json
import threading

from tightwp.cache import DiskCache, NullCache, canonical_json, checksum, default_dir


def test_env_var_sets_location(cache_dir):
    assert default_dir() == cache_dir
    assert DiskCache().root == cache_dir


def test_round_trip(tmp_path):
    c = DiskCache(tmp_path)
    key = c.key("V", 1, 1, None, "wp")
    assert c.get(key) is None
    c.put(key, {"a": [1, "1/2"]})
    assert c.get(key) == {"a": [1, "1/2"]}
    assert c.clear() == 1 and c.get(key) is None


def test_fetch_computes_once(tmp_path):
    c = DiskCache(tmp_path)
    calls = []
    key = c.key("Tgnp", 1, 1, 2, "wp")
    for _ in range(3):
        assert c.fetch(key, lambda: calls.append(1) or {"x": 1}) == {"x": 1}
    assert len(calls) == 1


def test_version_mismatch_ignored(tmp_path):
    old = DiskCache(tmp_path, version=0)
    key = old.key("P", 2, 1, None, "m")
    old.put(key, {"stale": True})
    new = DiskCache(tmp_path)
    assert new.get(key) is None
    # a forged file under the new name but with the old version inside is ignored too
    path = new.path(key)
    entry = json.loads(old.path(key).read_text())
    path.write_text(canonical_json(entry))
    assert new.get(key) is None


def test_checksum_mismatch_ignored(tmp_path):
    c = DiskCache(tmp_path)
    key = c.key("omega", 0, 4, None, "beta")
    c.put(key, {"v": 1})
    entry = json.loads(c.path(key).read_text())
    entry["payload"] = {"v": 2}
    c.path(key).write_text(canonical_json(entry))
    assert c.get(key) is None
    c.path(key).write_text("{not json")
    assert c.get(key) is None


def test_canonical_and_checksum_stable():
    a = {"b": 1, "a": [1, 2]}
    assert canonical_json(a) == '{"a":[1,2],"b":1}'
    assert checksum(a) == checksum({"a": [1, 2], "b": 1})


def test_concurrent_writers_leave_no_temp_files(tmp_path):
    c = DiskCache(tmp_path)
    key = c.key("Hp", 0, 2, 3, "wp")
    payload = {"data": list(range(2000))}
    threads = [threading.Thread(target=c.put, args=(key, payload)) for _ in range(16)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert c.get(key) == payload
    assert [p.name for p in tmp_path.iterdir()] == [c.path(key).name]


def test_intersection_key_with_tuple(tmp_path):
    c = DiskCache(tmp_path)
    k1 = c.key("intersection", 2, 2, [3, 2])
    k2 = c.key("intersection", 2, 2, [4, 1])
    assert c.path(k1) != c.path(k2)


def test_null_cache(tmp_path):
    c = NullCache()
    key = c.key("V", 0, 3)
    assert c.fetch(key, lambda: {"v": 1}) == {"v": 1}
    assert c.get(key) is None
