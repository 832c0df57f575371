"""Newform orbit data from the LMFDB, with a local cache and bundled fixtures.

Lookup order: bundled fixture, then cache, then network (unless offline).
Environment: SCTRACE_LMFDB_URL, SCTRACE_CACHE_DIR, SCTRACE_OFFLINE.
"""
import hashlib
import json
import os
import tempfile
import urllib.parse
import urllib.request
from dataclasses import dataclass, field
from importlib import resources

from .cyclotomic import CycNumber, format_cyc
from .local_data import enumerate_tuples, format_root_of_unity, global_root_number, root_number, validate_tuple
from .trace_engine import root_number_key, trace_hecke

DEFAULT_URL = "https://www.lmfdb.org/api/mf_newforms/"
FIELDS = ("label", "level", "weight", "char_orbit_label", "dim", "traces", "atkin_lehner_eigenvals")


class OfflineError(RuntimeError):
    pass


class SchemaError(ValueError):
    pass


@dataclass
class OrbitRecord:
    label: str
    level: int
    weight: int
    char_orbit_label: str
    dim: int
    traces: dict
    al_signs: dict = None
    root_numbers: list = None

    def __post_init__(self):
        self.traces = {int(n): int(v) for n, v in self.traces.items()}
        if self.al_signs is not None:
            self.al_signs = {int(p): int(s) for p, s in self.al_signs.items()}
        if self.dim < 1:
            raise SchemaError("%s: dim must be positive" % self.label)
        if 1 in self.traces and self.traces[1] != self.dim:
            raise SchemaError("%s: trace of T_1 is %d but dim is %d" % (self.label, self.traces[1], self.dim))

    def to_json(self):
        return {
            "label": self.label,
            "level": self.level,
            "weight": self.weight,
            "char_orbit_label": self.char_orbit_label,
            "dim": self.dim,
            "traces": {str(n): v for n, v in sorted(self.traces.items())},
            "al_signs": None if self.al_signs is None else {str(p): s for p, s in sorted(self.al_signs.items())},
            "root_numbers": self.root_numbers,
        }

    @classmethod
    def from_json(cls, obj):
        return cls(
            obj["label"],
            obj["level"],
            obj["weight"],
            obj["char_orbit_label"],
            obj["dim"],
            obj["traces"],
            obj.get("al_signs"),
            obj.get("root_numbers"),
        )


def _require(row, name):
    if name not in row:
        raise SchemaError("LMFDB response is missing field %r" % name)
    return row[name]


def parse_api_row(row):
    """Normal form of one mf_newforms row."""
    traces = _require(row, "traces")
    al = row.get("atkin_lehner_eigenvals")
    return OrbitRecord(
        label=_require(row, "label"),
        level=_require(row, "level"),
        weight=_require(row, "weight"),
        char_orbit_label=_require(row, "char_orbit_label"),
        dim=_require(row, "dim"),
        traces={n + 1: v for n, v in enumerate(traces)},
        al_signs={p: s for p, s in al} if al else None,
    )


# storage

def query_key(level, weight, char_label):
    return {"level": int(level), "weight": int(weight), "char_orbit_label": str(char_label)}


def _digest(key):
    return hashlib.sha256(json.dumps(key, sort_keys=True).encode()).hexdigest()[:24]


def cache_dir():
    return os.environ.get("SCTRACE_CACHE_DIR") or os.path.join(os.path.expanduser("~"), ".cache", "sctrace")


def _atomic_write(path, obj):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(obj, fh, indent=1, sort_keys=True)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cache_path(key, directory=None):
    return os.path.join(directory or cache_dir(), "%s.json" % _digest(key))


def write_cache(key, raw, records, directory=None):
    path = cache_path(key, directory)
    _atomic_write(path, {"query": key, "raw": raw, "records": [r.to_json() for r in records]})
    return path


def read_cache(key, directory=None):
    path = cache_path(key, directory)
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except FileNotFoundError:
        return None
    if obj.get("query") != key:
        return None
    return [OrbitRecord.from_json(r) for r in obj["records"]]


def fixture_name(level, weight, char_label):
    return "%d.%d.%s.json" % (level, weight, char_label)


def read_fixture(key):
    name = fixture_name(key["level"], key["weight"], key["char_orbit_label"])
    res = resources.files("sctrace").joinpath("fixtures").joinpath(name)
    if not res.is_file():
        return None
    obj = json.loads(res.read_text())
    return [OrbitRecord.from_json(r) for r in obj["records"]]


def _offline_default():
    return os.environ.get("SCTRACE_OFFLINE", "").lower() in ("1", "true", "yes")


def fetch_orbits(level, weight, char_label, offline=None, use_fixtures=True, directory=None, timeout=30):
    """Newform orbits at (level, weight, character orbit letter)."""
    key = query_key(level, weight, char_label)
    if use_fixtures:
        records = read_fixture(key)
        if records is not None:
            return records
    records = read_cache(key, directory)
    if records is not None:
        return records
    if offline if offline is not None else _offline_default():
        raise OfflineError("offline, no fixture or cached data for %d.%d.%s" % (level, weight, char_label))
    base = os.environ.get("SCTRACE_LMFDB_URL", DEFAULT_URL)
    params = {
        "level": "i%d" % level,
        "weight": "i%d" % weight,
        "char_orbit_label": char_label,
        "_format": "json",
        "_fields": ",".join(FIELDS),
    }
    url = base + "?" + urllib.parse.urlencode(params)
    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            raw = json.loads(resp.read().decode())
    except OSError as exc:
        raise OfflineError("network failure fetching %s: %s" % (url, exc)) from exc
    rows = _require(raw, "data")
    records = sorted((parse_api_row(row) for row in rows), key=lambda r: r.label)
    write_cache(key, raw, records, directory)
    return records


# engine side

@dataclass
class EngineRecord:
    label: str
    dim: int
    traces: dict
    al_signs: dict = None
    root_number: str = None


def lmfdb_character(neb):
    """The character to look up: LMFDB's nebentypus is the inverse of ours."""
    return neb.inverse()


def engine_records(S, T, k, neb, ns, moduli=None):
    """One EngineRecord per admissible tuple, with traces at each n in ns."""
    out = []
    for tup in enumerate_tuples(S, T, neb, moduli):
        if validate_tuple(tup, k):
            continue
        traces = {n: trace_hecke(tup, k, n).total for n in ns}
        dim = trace_hecke(tup, k, 1).total.as_rational()
        al = None
        if neb.is_trivial:
            al = {}
            for rep in tup.reps:
                eps = root_number(rep, neb)
                q = eps.as_rational() if eps is not None else None
                if q is None:
                    al = None
                    break
                al[rep.p] = int(q)
        eps = global_root_number(k, tup)
        rn = None if eps is None else format_root_of_unity(root_number_key(eps))
        out.append(EngineRecord(tup.label, int(dim), traces, al, rn))
    return out


# comparison

@dataclass
class CompareResult:
    assignment: dict = field(default_factory=dict)
    solutions: int = 0
    mismatches: list = field(default_factory=list)

    @property
    def consistent(self):
        return self.solutions > 0 and not self.mismatches

    @property
    def unique(self):
        return self.solutions == 1

    def summary_lines(self):
        lines = []
        if self.consistent:
            state = "unique" if self.unique else "one of %s" % ("several" if self.solutions > 1 else "?")
            lines.append("consistent partition found (%s)" % state)
            for orbit, labels in sorted(self.assignment.items()):
                lines.append("  %s <- %s" % (orbit, " + ".join(labels)))
        else:
            lines.append("no consistent partition")
        lines.extend("  mismatch: %s" % m for m in self.mismatches)
        return lines


def _accepts(orbit, rec):
    if orbit.al_signs is not None and rec.al_signs is not None:
        if any(rec.al_signs.get(p) != s for p, s in orbit.al_signs.items()):
            return False
    if orbit.root_numbers is not None and rec.root_number is not None:
        if rec.root_number not in orbit.root_numbers:
            return False
    return True


def _class_mismatches(records, orbits):
    """Dimension totals per orbit key class, reported where they differ."""
    out = []
    for orbit in orbits:
        peers = [o for o in orbits if all(_accepts(o, r) == _accepts(orbit, r) for r in records)]
        lhs = sum(o.dim for o in peers)
        rhs = sum(r.dim for r in records if _accepts(orbit, r))
        if lhs != rhs:
            out.append("%s: orbit dims in its sign class total %d, engine gives %d" % (orbit.label, lhs, rhs))
    return sorted(set(out))


def compare(records, orbits, max_solutions=2):
    """Partition engine records into orbits matching dims, signs and traces."""
    records = [r for r in records if r.dim > 0]
    orbits = sorted(orbits, key=lambda o: o.label)
    common = [set(o.traces) for o in orbits] + [set(r.traces) for r in records]
    ns = sorted(set.intersection(*common) - {1}) if orbits else []
    result = CompareResult()
    slots = {o.label: [] for o in orbits}
    dims = {o.label: 0 for o in orbits}
    first = {}

    def done():
        for o in orbits:
            members = [records[i] for i in slots[o.label]]
            if not members or dims[o.label] != o.dim:
                return False
            for n in ns:
                total = CycNumber.zero()
                for m in members:
                    total = total + m.traces[n]
                if not total.equals(o.traces[n]):
                    return False
        return True

    def search(i):
        if result.solutions >= max_solutions:
            return
        if i == len(records):
            if done():
                result.solutions += 1
                if not first:
                    first.update({k: [records[j].label for j in v] for k, v in slots.items()})
            return
        rec = records[i]
        for o in orbits:
            if not _accepts(o, rec) or dims[o.label] + rec.dim > o.dim:
                continue
            slots[o.label].append(i)
            dims[o.label] += rec.dim
            search(i + 1)
            slots[o.label].pop()
            dims[o.label] -= rec.dim

    search(0)
    result.assignment = first
    if not result.solutions:
        result.mismatches = _class_mismatches(records, orbits) or ["no assignment matches all dims and traces"]
    return result


def records_as_orbits(records, level, weight, char_label):
    """Treat each engine record as its own orbit (traces must be rational)."""
    out = []
    for r in records:
        traces = {}
        for n, v in r.traces.items():
            q = v.as_rational()
            if q is None or q.denominator != 1:
                raise ValueError("trace of T_%d on %s is not an integer: %s" % (n, r.label, format_cyc(v)))
            traces[n] = int(q)
        traces[1] = r.dim
        out.append(
            OrbitRecord(r.label, level, weight, char_label, r.dim, traces, r.al_signs, None if r.root_number is None else [r.root_number])
        )
    return out
