import io
import json

import pytest

import sctrace.lmfdb_interface as lm
from sctrace.lmfdb_interface import (
    OfflineError,
    OrbitRecord,
    SchemaError,
    compare,
    engine_records,
    fetch_orbits,
    lmfdb_character,
    parse_api_row,
    read_cache,
    records_as_orbits,
)
from sctrace.residue_fields import Nebentypus, quadratic_character

ROW = {
    "label": "27.5.b.b",
    "level": 27,
    "weight": 5,
    "char_orbit_label": "b",
    "dim": 2,
    "traces": [2, 0, 0, -76, 0, 0, 34],
    "atkin_lehner_eigenvals": None,
}


def test_parse_row():
    rec = parse_api_row(ROW)
    assert rec.traces[4] == -76 and rec.traces[1] == 2
    assert rec.al_signs is None
    rec = parse_api_row(dict(ROW, atkin_lehner_eigenvals=[[3, -1]]))
    assert rec.al_signs == {3: -1}


def test_schema_errors():
    with pytest.raises(SchemaError, match="traces"):
        parse_api_row({k: v for k, v in ROW.items() if k != "traces"})
    with pytest.raises(SchemaError):
        OrbitRecord("x", 27, 5, "b", 3, {1: 2})


class FakeResponse(io.BytesIO):
    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False


def test_cache_round_trip(tmp_path, monkeypatch):
    calls = []

    def fake_urlopen(url, timeout):
        calls.append(url)
        return FakeResponse(json.dumps({"data": [ROW]}).encode())

    monkeypatch.setattr(lm.urllib.request, "urlopen", fake_urlopen)
    fresh = fetch_orbits(27, 5, "b", offline=False, use_fixtures=False, directory=str(tmp_path))
    assert len(calls) == 1 and "level=i27" in calls[0]
    cached = fetch_orbits(27, 5, "b", offline=True, use_fixtures=False, directory=str(tmp_path))
    assert [r.to_json() for r in cached] == [r.to_json() for r in fresh]
    assert read_cache(lm.query_key(27, 5, "b"), str(tmp_path))[0].traces[7] == 34
    assert len(calls) == 1


def test_network_failure_is_reported(tmp_path, monkeypatch):
    def broken(url, timeout):
        raise OSError("unreachable")

    monkeypatch.setattr(lm.urllib.request, "urlopen", broken)
    with pytest.raises(OfflineError, match="network failure"):
        fetch_orbits(99, 4, "a", offline=False, directory=str(tmp_path))


def test_offline_without_data(tmp_path):
    with pytest.raises(OfflineError, match="offline"):
        fetch_orbits(99, 4, "a", offline=True, directory=str(tmp_path))


def test_fixtures_bundled():
    orbits = fetch_orbits(27, 5, "b", offline=True)
    assert [o.label for o in orbits] == ["27.5.b.a", "27.5.b.b", "27.5.b.c"]
    assert sum(o.dim for o in fetch_orbits(968, 6, "a", offline=True)) == 62


def test_character_inversion_fixes_quadratic():
    q3 = quadratic_character(27, 3)
    assert lmfdb_character(q3) == q3
    neb = Nebentypus(125, {5: 1})
    assert lmfdb_character(neb) == Nebentypus(125, {5: 3})


def test_level27_partition():
    records = engine_records(1, 3, 5, quadratic_character(27, 3), (4, 7))
    result = compare(records, fetch_orbits(27, 5, "b", offline=True))
    assert result.unique and not result.mismatches
    assert result.assignment["27.5.b.a"] == ["3:t=-1,zeta=-i"]
    assert result.assignment["27.5.b.b"] == ["3:t=-1,zeta=i"]
    assert sorted(result.assignment["27.5.b.c"]) == ["3:t=1,zeta=+1", "3:t=1,zeta=-1"]


def test_level968_partition():
    records = engine_records(11, 2, 6, Nebentypus.trivial(968), (7,), {11: (7, 2)})
    result = compare(records, fetch_orbits(968, 6, "a", offline=True))
    assert result.unique and not result.mismatches
    assert len(result.assignment["968.6.a.l"]) == 2


def test_identical_inputs_give_empty_diff():
    records = engine_records(1, 3, 5, quadratic_character(27, 3), (4, 7))
    orbits = records_as_orbits(records, 27, 5, "b")
    result = compare(records, orbits)
    assert result.consistent and result.mismatches == []


def test_mismatch_reported():
    records = engine_records(1, 3, 5, quadratic_character(27, 3), (4, 7))
    orbits = fetch_orbits(27, 5, "b", offline=True)
    orbits[0] = OrbitRecord(**dict(orbits[0].to_json(), traces={"1": 1, "4": 17, "7": 71}))
    result = compare(records, orbits)
    assert not result.consistent
    assert result.mismatches
