"""Exhaustive survey over interaction networks and the catalog file format.

A catalog is a CSV file whose first line is a version comment, followed by
a header row and one row per network in canonical order.  Floats are written
with 17 significant digits; dynamics columns are empty when dynamics were
skipped.  A JSON schema describing the columns is written next to it.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import multiprocessing
import os
from dataclasses import asdict, dataclass
from pathlib import Path

from threadpoolctl import threadpool_limits

from . import graphs
from .dynamics import DynamicsParams, dynamics_record
from .entanglement import min_eigenstate_entanglement
from .graphs import InteractionNetwork
from .hamiltonian import FieldParams, build_hamiltonian_fock, diagonalize
from .landscape import build_equienergy_subgraph, degree_profile
from .stats import CorrelationReport, Histogram2D, histogram2d, pearson

log = logging.getLogger(__name__)

CATALOG_VERSION = "isingnet-catalog v1"
WORKERS_ENV = "ISINGNET_WORKERS"

COLUMNS = (
    "id",
    "n_spins",
    "edges",
    "q_min",
    "nu",
    "degenerate",
    "circuit_rank",
    "unconstrained_pairs",
    "closest_state",
    "closest_amp",
    "closest_freq",
    "furthest_state",
    "furthest_amp",
    "furthest_freq",
)
_INT = {"n_spins", "nu", "circuit_rank", "unconstrained_pairs", "closest_state", "furthest_state"}
_FLOAT = {"q_min", "closest_amp", "closest_freq", "furthest_amp", "furthest_freq"}
NUMERIC_FIELDS = tuple(c for c in COLUMNS if c in _INT | _FLOAT or c == "degenerate")

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "interaction network catalog row",
    "description": f"CSV rows of a '{CATALOG_VERSION}' catalog; empty dynamics cells mean dynamics were skipped",
    "type": "object",
    "required": list(COLUMNS[:8]),
    "properties": {
        "id": {"type": "string", "pattern": "^N[1-7]-[0-9]+$"},
        "n_spins": {"type": "integer", "minimum": 1, "maximum": 7},
        "edges": {
            "type": "array",
            "description": "JSON list of [i, j, sign] with 0-based i < j, sorted by (i, j)",
            "items": {"type": "array", "minItems": 3, "maxItems": 3},
        },
        "q_min": {"type": "number", "minimum": 0, "maximum": 1},
        "nu": {"type": "integer", "minimum": 0},
        "degenerate": {"type": "integer", "enum": [0, 1]},
        "circuit_rank": {"type": "integer", "minimum": 0},
        "unconstrained_pairs": {"type": "integer", "minimum": 0},
        "closest_state": {"type": ["integer", "null"]},
        "closest_amp": {"type": ["number", "null"]},
        "closest_freq": {"type": ["number", "null"]},
        "furthest_state": {"type": ["integer", "null"]},
        "furthest_amp": {"type": ["number", "null"]},
        "furthest_freq": {"type": ["number", "null"]},
    },
}

FIGURES = {
    "fig2": ("circuit_rank", "q_min"),
    "fig3": ("unconstrained_pairs", "circuit_rank"),
    "fig4": ("unconstrained_pairs", "q_min"),
}


class SurveyError(RuntimeError):
    pass


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class NetworkRecord:
    id: str
    n_spins: int
    edges: tuple[tuple[int, int, int], ...]
    q_min: float
    nu: int
    degenerate: bool
    circuit_rank: int
    unconstrained_pairs: int
    closest_state: int | None = None
    closest_amp: float | None = None
    closest_freq: float | None = None
    furthest_state: int | None = None
    furthest_amp: float | None = None
    furthest_freq: float | None = None

    def to_row(self) -> list[str]:
        d = asdict(self)
        row = []
        for c in COLUMNS:
            v = d[c]
            if v is None:
                row.append("")
            elif c == "edges":
                row.append(json.dumps([list(e) for e in v], separators=(",", ":")))
            elif c == "degenerate":
                row.append("1" if v else "0")
            elif c in _FLOAT:
                row.append(format(v, ".17g"))
            else:
                row.append(str(v))
        return row

    @classmethod
    def from_row(cls, row: dict) -> "NetworkRecord":
        kw = {}
        for c in COLUMNS:
            v = row[c]
            if c == "id":
                kw[c] = v
            elif c == "edges":
                kw[c] = tuple(tuple(e) for e in json.loads(v))
            elif c == "degenerate":
                kw[c] = v == "1"
            elif v == "":
                kw[c] = None
            elif c in _INT:
                kw[c] = int(v)
            else:
                kw[c] = float(v)
        return cls(**kw)

    def field(self, name: str) -> float:
        if name not in NUMERIC_FIELDS:
            raise CatalogError(f"unknown numeric field {name!r}; choose from {', '.join(NUMERIC_FIELDS)}")
        v = getattr(self, name)
        if v is None:
            raise CatalogError(f"field {name!r} is empty for {self.id} (dynamics skipped?)")
        return float(v)


def survey_network(
    net: InteractionNetwork,
    fields: FieldParams,
    p: DynamicsParams,
    skip_dynamics: bool = False,
) -> NetworkRecord:
    """All per-network quantities of the survey for one network."""
    stage = "hamiltonian"
    try:
        spec = diagonalize(build_hamiltonian_fock(net, fields))
        stage = "entanglement"
        q_min, nu = min_eigenstate_entanglement(spec)
        stage = "landscape"
        sub = build_equienergy_subgraph(net)
        profile = degree_profile(net)
        extra = {}
        if not skip_dynamics:
            stage = "dynamics"
            dyn = dynamics_record(net, fields, p, spec=spec, nu=nu)
            extra = dict(
                closest_state=dyn.closest_state,
                closest_amp=dyn.closest[0],
                closest_freq=dyn.closest[1],
                furthest_state=dyn.furthest_state,
                furthest_amp=dyn.furthest[0],
                furthest_freq=dyn.furthest[1],
            )
    except Exception as exc:
        raise SurveyError(f"stage {stage} failed for network {net.id}: {exc}") from exc
    record = NetworkRecord(
        id=net.id,
        n_spins=net.n,
        edges=tuple(net.edges),
        q_min=q_min,
        nu=nu,
        degenerate=spec.degenerate,
        circuit_rank=sub.rank,
        unconstrained_pairs=profile.unconstrained_pairs,
        **extra,
    )
    values = [record.q_min] + [v for v in extra.values() if isinstance(v, float)]
    if not all(math.isfinite(v) for v in values):
        raise SurveyError(f"non-finite value in record for network {net.id}")
    return record


# -- worker plumbing ---------------------------------------------------------

_task_config: tuple | None = None


def _init_worker(config, limit_threads: bool = True) -> None:
    global _task_config
    _task_config = config
    if limit_threads:
        # single-threaded BLAS keeps results bit-identical across worker counts
        threadpool_limits(1)


def _survey_task(item) -> list[str]:
    n, code, ordinal = item
    fields, p, skip = _task_config
    net = graphs.network_from_code(n, code, ordinal)
    return survey_network(net, fields, p, skip).to_row()


def default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


# -- catalog files -----------------------------------------------------------


def select_ordinals(total: int, shard: tuple[int, int] = (0, 1), sample: int = 1) -> list[int]:
    """1-based ordinals covered by a shard of an (optionally) sampled sweep.

    Sampling keeps every ``sample``-th ordinal starting from the first; the
    sampled list is then split into ``count`` contiguous shards.
    """
    index, count = shard
    if count < 1 or not 0 <= index < count:
        raise SurveyError(f"invalid shard {index}/{count}")
    if sample < 1:
        raise SurveyError(f"invalid sample stride {sample}")
    ordinals = list(range(1, total + 1, sample))
    lo = index * len(ordinals) // count
    hi = (index + 1) * len(ordinals) // count
    return ordinals[lo:hi]


def catalog_name(n: int, shard: tuple[int, int] = (0, 1), sample: int = 1) -> str:
    name = f"catalog_n{n}"
    if sample != 1:
        name += f"_sample{sample}"
    if shard[1] != 1:
        name += f"_shard{shard[0]}of{shard[1]}"
    return name + ".csv"


def _header() -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerow(COLUMNS)
    return f"# {CATALOG_VERSION}\n" + buf.getvalue()


def _format_row(row: list[str]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerow(row)
    return buf.getvalue()


def _resume_partial(partial: Path, expected_ids: list[str]) -> int:
    """Number of complete, in-order rows already present in ``partial``; trims any torn tail."""
    text = partial.read_text()
    header = _header()
    if not text.startswith(header):
        return -1
    body = text[len(header) :]
    keep = body.rfind("\n") + 1
    done = 0
    for row in csv.reader(io.StringIO(body[:keep])):
        if done >= len(expected_ids) or row[0] != expected_ids[done]:
            return -1
        done += 1
    with open(partial, "r+") as fh:
        fh.truncate(len(header) + keep)
    return done


def _write_json_atomic(path: Path, data) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
    os.replace(tmp, path)


def run_survey(
    n: int,
    fields: FieldParams,
    p: DynamicsParams,
    out: str | os.PathLike,
    shard: tuple[int, int] = (0, 1),
    sample: int = 1,
    skip_dynamics: bool = False,
    workers: int | None = None,
    progress=None,
) -> Path:
    """Survey every network of ``n`` spins in the shard, writing a catalog into directory ``out``.

    Rows are written in canonical order by this process only.  A completed
    catalog is left untouched on rerun; an interrupted one resumes after its
    last complete row.
    """
    graphs._check_n(n, lo=3)
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    codes = graphs.network_codes(n)
    ordinals = select_ordinals(len(codes), shard, sample)
    ids = [graphs.network_id(n, k) for k in ordinals]

    path = out / catalog_name(n, shard, sample)
    meta_path = path.with_name(path.name + ".meta.json")
    partial = path.with_name(path.name + ".partial")
    params = {
        "n": n,
        "h_x": fields.h_x,
        "tau": p.tau,
        "dt": p.dt,
        "shard": list(shard),
        "sample": sample,
        "skip_dynamics": skip_dynamics,
        "version": CATALOG_VERSION,
    }
    schema_path = out / "catalog.schema.json"
    if not schema_path.exists():
        _write_json_atomic(schema_path, SCHEMA)

    if path.exists() and meta_path.exists():
        meta = json.loads(meta_path.read_text())
        if meta.get("complete") and meta.get("params") == params:
            log.info("%s already complete, skipping", path)
            return path
    done = -1
    if partial.exists() and meta_path.exists() and json.loads(meta_path.read_text()).get("params") == params:
        done = _resume_partial(partial, ids)
    if done < 0:
        partial.write_text(_header())
        done = 0
    _write_json_atomic(meta_path, {"params": params, "complete": False, "records": len(ids)})
    if done:
        log.info("resuming %s after %d records", path, done)

    items = [(n, int(codes[k - 1]), k) for k in ordinals[done:]]
    workers = default_workers() if workers is None else max(1, workers)
    config = (fields, p, skip_dynamics)
    with open(partial, "a") as fh:
        if workers == 1 or len(items) < 2:
            _init_worker(config, limit_threads=False)
            with threadpool_limits(1):
                _drain(map(_survey_task, items), fh, done, len(ids), progress)
        else:
            ctx = multiprocessing.get_context("spawn")
            with ctx.Pool(workers, initializer=_init_worker, initargs=(config,)) as pool:
                chunk = max(1, min(256, len(items) // (workers * 8) or 1))
                _drain(pool.imap(_survey_task, items, chunksize=chunk), fh, done, len(ids), progress)
    os.replace(partial, path)
    _write_json_atomic(meta_path, {"params": params, "complete": True, "records": len(ids)})
    return path


def _drain(rows, fh, done: int, total: int, progress) -> None:
    for row in rows:
        fh.write(_format_row(row))
        done += 1
        if done % 1000 == 0:
            fh.flush()
        if progress is not None:
            progress(done, total)


def read_catalog(path: str | os.PathLike) -> list[NetworkRecord]:
    with open(path, newline="") as fh:
        first = fh.readline().strip()
        if first != f"# {CATALOG_VERSION}":
            raise CatalogError(f"{path}: unsupported catalog header {first!r}")
        return [NetworkRecord.from_row(r) for r in csv.DictReader(fh)]


def load_records(paths) -> list[NetworkRecord]:
    if isinstance(paths, (str, os.PathLike)):
        paths = [paths]
    records = []
    for path in paths:
        records.extend(read_catalog(path))
    return records


def merge_catalogs(paths, out: str | os.PathLike) -> Path:
    """Concatenate shard catalogs (given in shard order) into one catalog."""
    out = Path(out)
    with open(out, "w") as fh:
        fh.write(_header())
        for path in paths:
            for rec in read_catalog(path):
                fh.write(_format_row(rec.to_row()))
    return out


def _single_n(records: list[NetworkRecord]) -> int:
    ns = {r.n_spins for r in records}
    if len(ns) != 1:
        raise CatalogError(f"catalog must hold a single spin count, found {sorted(ns)}")
    return ns.pop()


def correlate_records(records: list[NetworkRecord], x: str, y: str, bins: int = 64) -> tuple[CorrelationReport, Histogram2D]:
    _single_n(records)
    xs = [r.field(x) for r in records]
    ys = [r.field(y) for r in records]
    return pearson(xs, ys, x, y), histogram2d(xs, ys, bins)


def correlate_catalog(paths, x: str, y: str, bins: int = 64) -> tuple[CorrelationReport, Histogram2D]:
    """Pearson statistics and density histogram of two catalog columns."""
    return correlate_records(load_records(paths), x, y, bins)


def plot_data(paths, figure: str, bins: int = 64) -> str:
    """CSV text with scatter points and the 64x64 bin count each point falls in."""
    records = load_records(paths)
    _single_n(records)
    if figure in FIGURES:
        series = [("all", *FIGURES[figure])]
    elif figure == "fig5":
        series = [("closest", "closest_freq", "closest_amp"), ("furthest", "furthest_freq", "furthest_amp")]
    else:
        raise CatalogError(f"unknown figure {figure!r}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if figure in FIGURES:
        report, _ = correlate_records(records, series[0][1], series[0][2], bins)
        buf.write(f"# {report}\n")
    w.writerow(["id", "series", "x_field", "y_field", "x", "y", "bin_x", "bin_y", "density"])
    for label, xf, yf in series:
        xs = [r.field(xf) for r in records]
        ys = [r.field(yf) for r in records]
        hist = histogram2d(xs, ys, bins)
        for rec, xv, yv in zip(records, xs, ys):
            bx, by = hist.bin_of(xv, yv)
            w.writerow([rec.id, label, xf, yf, format(xv, ".17g"), format(yv, ".17g"), bx, by, int(hist.counts[bx, by])])
    return buf.getvalue()


def find_network(net_id: str, catalogs=()) -> InteractionNetwork:
    """Look a network up by id in catalog/enumeration files, falling back to regenerating it."""
    for path in catalogs:
        path = Path(path)
        with open(path) as fh:
            first = fh.readline()
            if first.startswith("#"):
                for row in csv.DictReader(fh):
                    if row["id"] == net_id:
                        rec = NetworkRecord.from_row(row)
                        return InteractionNetwork.from_edges(rec.n_spins, rec.edges, net_id)
            else:
                for line in [first, *fh]:
                    if not line.strip():
                        continue
                    obj = json.loads(line)
                    if obj["id"] == net_id:
                        return InteractionNetwork.from_edges(obj["n"], obj["edges"], net_id)
    if catalogs:
        raise KeyError(f"network {net_id} not found in {', '.join(map(str, catalogs))}")
    return graphs.network_by_id(net_id)
