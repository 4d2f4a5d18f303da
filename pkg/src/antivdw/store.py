"""Append-only persistence of proven aw values and their witnesses.

One JSON object per line, keys in a fixed order, so files are greppable,
mergeable and byte-stable across a save/load/save round trip.  A witness is
stored only for the maximal rainbow-free color count (aw-1); smaller ones
follow by merging color classes.  Every witness is re-verified on load and
a failure aborts with StoreCorruptionError rather than continuing with a
bad cache, because the solver's prefix pruning consumes these values as
trusted facts.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from .core import CYCLIC, INTERVAL, Coloring, Structure, has_rainbow_kap
from .errors import AwError, ConflictError, StoreCorruptionError

ENV_CACHE = "AW_CACHE"
DEFAULT_CACHE_NAME = "aw-cache.jsonl"

_METHODS = ("search", "formula", "oracle", "construction+search")


@dataclass(frozen=True)
class AwRecord:
    kind: str
    n: int
    k: int
    aw: int
    witness: tuple[int, ...] | None = None
    method: str = "search"
    nodes: int | None = None
    seconds: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in (INTERVAL, CYCLIC):
            raise AwError(f"unknown structure kind {self.kind!r}")
        if self.method not in _METHODS:
            raise AwError(f"unknown method {self.method!r}")

    def key(self) -> tuple[str, int, int]:
        return (self.kind, self.n, self.k)

    def witness_coloring(self) -> Coloring | None:
        if self.witness is None:
            return None
        return Coloring(Structure(self.kind, self.n), self.witness, self.aw - 1)

    def to_line(self) -> str:
        payload: dict = {
            "structure": self.kind,
            "n": self.n,
            "k": self.k,
            "aw": self.aw,
        }
        if self.witness is not None:
            payload["witness"] = list(self.witness)
        payload["method"] = self.method
        if self.nodes is not None:
            payload["nodes"] = self.nodes
        if self.seconds is not None:
            payload["seconds"] = round(self.seconds, 6)
        return json.dumps(payload, separators=(", ", ": "))

    @staticmethod
    def from_line(line: str) -> "AwRecord":
        try:
            payload = json.loads(line)
        except json.JSONDecodeError as exc:
            raise StoreCorruptionError(f"unparseable record: {line!r}") from exc
        try:
            witness = payload.get("witness")
            return AwRecord(
                kind=payload["structure"],
                n=payload["n"],
                k=payload["k"],
                aw=payload["aw"],
                witness=tuple(witness) if witness is not None else None,
                method=payload.get("method", "search"),
                nodes=payload.get("nodes"),
                seconds=payload.get("seconds"),
            )
        except (KeyError, TypeError) as exc:
            raise StoreCorruptionError(f"malformed record: {line!r}") from exc

    def verify(self) -> None:
        """Re-check the witness semantics: aw-1 colors, exact, rainbow-free."""
        if self.aw < 1:
            raise StoreCorruptionError(f"nonsensical aw in {self.key()}")
        if self.witness is None:
            return
        try:
            coloring = self.witness_coloring()
            assert coloring is not None
            if not coloring.is_exact():
                raise AwError("witness is not exact")
            if has_rainbow_kap(coloring, self.k):
                raise AwError("witness has a rainbow k-AP")
        except AwError as exc:
            raise StoreCorruptionError(
                f"witness for {self.key()} failed verification: {exc}"
            ) from exc


class AwStore:
    """In-memory index over an append-only record file.

    path=None keeps the store purely in memory.  Concurrent readers are
    fine; keep a single writer per file.  put() is idempotent for an
    identical value and raises ConflictError on a contradictory one --
    a conflict means something upstream computed a wrong value, so it must
    never be merged away silently.
    """

    def __init__(self, path: str | Path | None = None, verify: bool = True):
        self.path = Path(path) if path is not None else None
        self._records: dict[tuple[str, int, int], AwRecord] = {}
        if self.path is not None and self.path.exists():
            self._load(verify=verify)

    @staticmethod
    def from_env(explicit: str | None = None) -> "AwStore":
        path = explicit or os.environ.get(ENV_CACHE) or DEFAULT_CACHE_NAME
        return AwStore(path)

    def _load(self, verify: bool) -> None:
        assert self.path is not None
        with self.path.open() as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                rec = AwRecord.from_line(line)
                if verify:
                    rec.verify()
                existing = self._records.get(rec.key())
                if existing is not None and existing.aw != rec.aw:
                    raise StoreCorruptionError(
                        f"conflicting values for {rec.key()}: {existing.aw} vs {rec.aw}"
                    )
                self._records[rec.key()] = rec

    def get(self, kind: str, n: int, k: int) -> AwRecord | None:
        return self._records.get((kind, n, k))

    def put(self, rec: AwRecord, flush: bool = True) -> None:
        existing = self._records.get(rec.key())
        if existing is not None:
            if existing.aw != rec.aw:
                raise ConflictError(
                    f"{rec.key()} already proven aw={existing.aw}, refusing {rec.aw}"
                )
            return
        rec.verify()
        self._records[rec.key()] = rec
        if self.path is not None:
            with self.path.open("a") as fh:
                fh.write(rec.to_line() + "\n")
                if flush:
                    fh.flush()
                    os.fsync(fh.fileno())

    def records(self) -> list[AwRecord]:
        return sorted(
            self._records.values(), key=lambda r: (r.kind, r.k, r.n)
        )

    def save_as(self, path: str | Path) -> None:
        """Write every record to a fresh file in canonical order."""
        p = Path(path)
        with p.open("w") as fh:
            for rec in self.records():
                fh.write(rec.to_line() + "\n")

    def __len__(self) -> int:
        return len(self._records)


def bootstrap_interval(
    k: int,
    n_max: int,
    store: AwStore | None = None,
    options=None,
) -> AwStore:
    """Fill the store with aw([m],k) for m = k..n_max, ascending.

    Each run consumes the previous records through the solver's prefix
    pruning; existing records are kept, so an interrupted run resumes.
    """
    from .solver import DEFAULT_OPTIONS, compute_aw_detailed

    store = store if store is not None else AwStore()
    options = options or DEFAULT_OPTIONS
    for m in range(k, n_max + 1):
        if store.get(INTERVAL, m, k) is not None:
            continue
        comp = compute_aw_detailed(Structure.interval(m), k, cache=store, options=options)
        witness = comp.witness.assign if comp.witness is not None else None
        store.put(
            AwRecord(
                INTERVAL,
                m,
                k,
                comp.aw,
                witness=witness,
                method=comp.method,
                nodes=comp.nodes,
                seconds=comp.seconds,
            )
        )
    return store


def bootstrap_cyclic(
    k: int,
    n_max: int,
    store: AwStore | None = None,
    n_min: int = 3,
    options=None,
) -> AwStore:
    """Fill the store with aw(Z_n,k) for n = n_min..n_max by search."""
    from .solver import DEFAULT_OPTIONS, compute_aw_detailed

    store = store if store is not None else AwStore()
    options = options or DEFAULT_OPTIONS
    for n in range(n_min, n_max + 1):
        if store.get(CYCLIC, n, k) is not None:
            continue
        comp = compute_aw_detailed(Structure.cyclic(n), k, cache=store, options=options)
        witness = comp.witness.assign if comp.witness is not None else None
        store.put(
            AwRecord(
                CYCLIC,
                n,
                k,
                comp.aw,
                witness=witness,
                method=comp.method,
                nodes=comp.nodes,
                seconds=comp.seconds,
            )
        )
    return store
