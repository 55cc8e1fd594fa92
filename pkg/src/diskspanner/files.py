"""Instance and spanner files: versioned JSON, canonical byte layout.

All writers emit the same bytes for the same content (sorted keys, fixed
separators, one trailing newline), which is what makes same-seed pipeline
runs byte-identical and diffs meaningful.  Floats round-trip exactly through
``repr``; nothing is ever rounded for display.

Instance schema (version 1):

* ``{"version": 1, "kind": "euclidean", "n": ..., "dim": ...,
   "coords": [[...]], "radii": [...], "metadata": {...}}``
* ``{"version": 1, "kind": "matrix" | "prescribed-closure", "n": ...,
   "dist": [[...]], "radii": [...], "metadata": {...}}``

``matrix`` stores the metric itself; ``prescribed-closure`` stores a distance
prescription whose shortest-path closure is the metric (the closure runs on
load, so the file stays faithful to how the instance was defined).

Spanner schema (version 1): mode, parameters, normalization scale, and one
record per edge with endpoints, weight (normalized scale), level, insertion
case, origin pass, and prune survival.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .diskgraph import RadiusAssignment
from .errors import UsageError
from .metric import Metric, metric_closure
from .spanner import Params, SpannerEdge

__all__ = [
    "Instance",
    "serialize_instance",
    "deserialize_instance",
    "write_instance",
    "read_instance",
    "SpannerFile",
    "serialize_spanner",
    "deserialize_spanner",
    "read_spanner",
    "write_json",
    "canonical_json",
]

_KINDS = ("euclidean", "matrix", "prescribed-closure")


@dataclass
class Instance:
    """A problem instance: metric, radii, provenance metadata."""

    kind: str
    metric: Metric
    radii: RadiusAssignment
    metadata: dict
    coords: np.ndarray | None = None
    dist: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.metric.n

    @property
    def dim(self) -> int | None:
        return self.metric.dim

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        if self.kind != other.kind or self.metadata != other.metadata:
            return False
        if not np.array_equal(self.radii.values, other.radii.values):
            return False
        if (self.coords is None) != (other.coords is None):
            return False
        if self.coords is not None and not np.array_equal(self.coords, other.coords):
            return False
        if (self.dist is None) != (other.dist is None):
            return False
        if self.dist is not None and not np.array_equal(self.dist, other.dist):
            return False
        return True


def canonical_json(obj) -> bytes:
    """Deterministic JSON bytes: sorted keys, tight separators, newline."""
    return (json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n").encode()


def write_json(path, obj) -> None:
    with open(path, "wb") as f:
        f.write(canonical_json(obj))


def serialize_instance(inst: Instance) -> dict:
    doc: dict = {
        "version": 1,
        "kind": inst.kind,
        "n": inst.n,
        "radii": inst.radii.values.tolist(),
        "metadata": inst.metadata,
    }
    if inst.kind == "euclidean":
        assert inst.coords is not None
        doc["dim"] = int(inst.coords.shape[1])
        doc["coords"] = inst.coords.tolist()
    else:
        assert inst.dist is not None
        doc["dist"] = inst.dist.tolist()
    return doc


def deserialize_instance(doc: dict) -> Instance:
    if not isinstance(doc, dict):
        raise UsageError("instance document must be a JSON object")
    if doc.get("version") != 1:
        raise UsageError(f"unsupported instance version {doc.get('version')!r}")
    kind = doc.get("kind")
    if kind not in _KINDS:
        raise UsageError(f"unknown instance kind {kind!r}; expected one of {_KINDS}")
    try:
        radii = RadiusAssignment(np.asarray(doc["radii"], dtype=float))
    except KeyError as e:
        raise UsageError(f"instance document missing field {e}") from None
    n = doc.get("n")
    if n != radii.n:
        raise UsageError(f"declared n = {n} but {radii.n} radii given")
    metadata = doc.get("metadata", {})
    if kind == "euclidean":
        try:
            coords = np.asarray(doc["coords"], dtype=float)
        except KeyError:
            raise UsageError("euclidean instance missing coords") from None
        if coords.ndim != 2 or coords.shape[0] != radii.n:
            raise UsageError("coords must be an (n, dim) array matching the radii")
        if "dim" in doc and doc["dim"] != coords.shape[1]:
            raise UsageError("declared dim does not match coords")
        metric = Metric.euclidean(coords)
        return Instance(kind, metric, radii, metadata, coords=coords)
    try:
        dist = np.asarray(doc["dist"], dtype=float)
    except KeyError:
        raise UsageError(f"{kind} instance missing dist") from None
    if dist.ndim != 2 or dist.shape[0] != dist.shape[1] or dist.shape[0] != radii.n:
        raise UsageError("dist must be a square n x n matrix matching the radii")
    if kind == "matrix":
        metric = Metric.from_matrix(dist)
    else:
        metric = metric_closure(dist)
    return Instance(kind, metric, radii, metadata, dist=dist)


def write_instance(path, inst: Instance) -> None:
    write_json(path, serialize_instance(inst))


def read_instance(path) -> Instance:
    try:
        with open(path, "rb") as f:
            doc = json.load(f)
    except OSError as e:
        raise UsageError(f"cannot read instance file: {e}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"malformed instance file {path}: {e}") from None
    return deserialize_instance(doc)


@dataclass
class SpannerFile:
    """Parsed spanner document."""

    mode: str
    params: Params
    scale: float
    n: int
    edges: list[SpannerEdge]

    def surviving(self) -> list[SpannerEdge]:
        return [e for e in self.edges if e.survived]


def serialize_spanner(
    mode: str, params: Params, scale: float, n: int, edges: list[SpannerEdge]
) -> dict:
    return {
        "version": 1,
        "mode": mode,
        "params": params.to_dict(),
        "scale": scale,
        "n": n,
        "edges": [
            {
                "s": e.source,
                "t": e.target,
                "w": e.weight,
                "level": e.level,
                "case": e.case,
                "origin": e.origin,
                "survived": e.survived,
            }
            for e in edges
        ],
    }


def deserialize_spanner(doc: dict) -> SpannerFile:
    if not isinstance(doc, dict):
        raise UsageError("spanner document must be a JSON object")
    if doc.get("version") != 1:
        raise UsageError(f"unsupported spanner version {doc.get('version')!r}")
    mode = doc.get("mode")
    if mode not in ("baseline", "relaxed"):
        raise UsageError(f"unknown spanner mode {mode!r}")
    p = doc.get("params", {})
    try:
        params = Params(
            p["eps"], alpha=p.get("alpha"), beta=p.get("beta"), gamma=p.get("gamma")
        )
    except KeyError as e:
        raise UsageError(f"spanner params missing {e}") from None
    edges = []
    for rec in doc.get("edges", []):
        try:
            edges.append(
                SpannerEdge(
                    source=int(rec["s"]),
                    target=int(rec["t"]),
                    weight=float(rec["w"]),
                    level=int(rec["level"]),
                    case=str(rec["case"]),
                    origin=str(rec.get("origin", "H")),
                    survived=bool(rec.get("survived", True)),
                )
            )
        except KeyError as e:
            raise UsageError(f"spanner edge record missing {e}") from None
    n = doc.get("n")
    if not isinstance(n, int) or n < 1:
        raise UsageError("spanner document needs a positive integer n")
    scale = float(doc.get("scale", 1.0))
    return SpannerFile(mode=mode, params=params, scale=scale, n=n, edges=edges)


def read_spanner(path) -> SpannerFile:
    try:
        with open(path, "rb") as f:
            doc = json.load(f)
    except OSError as e:
        raise UsageError(f"cannot read spanner file: {e}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"malformed spanner file {path}: {e}") from None
    return deserialize_spanner(doc)
