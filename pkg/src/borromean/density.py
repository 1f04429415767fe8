"""Exact counting of linked pairs, Borromean triples and per-pair densities.

Pair counts are ordered (p1, p2); triple counts are unordered sets. Every
count uses strict inequality p < x. The sweep splits the work into index
ranges, merges counters by integer addition and can checkpoint to disk, so
results do not depend on worker count or on where a run was resumed.
"""

from __future__ import annotations

import json
import logging
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .arith import _jacobi, legendre_block, sieve_primes
from .errors import CheckpointInvalidError, InvalidArgumentError
from .redei import AdmissiblePair, admissible_pair, redei_unchecked

log = logging.getLogger(__name__)

PAIR_DENSITY = 1 / 8
TRIPLE_DENSITY = 1 / 128
RHO_DENSITY = 1 / 16

CHUNK = 1024
FORMAT_VERSION = 1
MODES = ("pairs", "triples")


@dataclass(frozen=True)
class PairCounts:
    x: int
    pi_x: int
    pi_x_1mod4: int
    ordered_linked: int

    @property
    def ratio(self) -> float:
        return self.ordered_linked / self.pi_x**2 if self.pi_x else 0.0

    @property
    def deviation(self) -> float:
        return abs(self.ratio - PAIR_DENSITY)


@dataclass(frozen=True)
class TripleCounts:
    x: int
    unordered_distinct: int
    linked_unordered: int
    borromean_unordered: int

    @property
    def ratio_all(self) -> float:
        if not self.unordered_distinct:
            return 0.0
        return self.borromean_unordered / self.unordered_distinct

    @property
    def ratio_linked(self) -> float:
        if not self.linked_unordered:
            return 0.0
        return self.borromean_unordered / self.linked_unordered

    @property
    def deviation(self) -> float:
        return abs(self.ratio_all - TRIPLE_DENSITY)


# --- shared context -------------------------------------------------------


@lru_cache(maxsize=4)
def _one_mod_four(x: int) -> np.ndarray:
    return sieve_primes(x).one_mod_four()


@lru_cache(maxsize=2)
def _legendre_table(x: int) -> np.ndarray:
    """(P[i] / P[j]) for all primes P = 1 mod 4 below x; the diagonal is 0."""
    ps = _one_mod_four(x)
    table = legendre_block(ps, ps)
    table.setflags(write=False)
    return table


@lru_cache(maxsize=2)
def _linked_pairs(x: int) -> np.ndarray:
    """Index pairs (i, j), i < j, of linked primes below x, in lexicographic order."""
    table = _legendre_table(x)
    i, j = np.nonzero(np.triu(table == 1, k=1))
    out = np.stack([i, j], axis=1).astype(np.int64)
    out.setflags(write=False)
    return out


def _validate_grid(x_grid: Sequence[int]) -> list[int]:
    grid = [int(x) for x in x_grid]
    if not grid:
        raise InvalidArgumentError("empty cutoff grid")
    if grid[0] < 2:
        raise InvalidArgumentError(f"cutoffs must be >= 2, got {grid[0]}")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise InvalidArgumentError(f"cutoff grid must be strictly increasing: {grid}")
    return grid


# --- work units -----------------------------------------------------------


def _unit_count(mode: str, x_max: int) -> int:
    if mode == "pairs":
        return int(_one_mod_four(x_max).size)
    return int(_linked_pairs(x_max).shape[0])


def _pair_unit(x_max: int, grid: tuple[int, ...], lo: int, hi: int) -> dict[str, list[int]]:
    """Ordered linked pairs and character-sum terms with first entry P[lo:hi]."""
    ps = _one_mod_four(x_max)
    block = legendre_block(ps[lo:hi], ps)
    ks = np.searchsorted(ps, grid, side="left")
    linked, charsum = [], []
    for k in ks:
        rows = max(0, min(hi, k) - lo)
        sub = block[:rows, :k]
        linked.append(int(np.count_nonzero(sub == 1)))
        charsum.append(int(sub.sum(dtype=np.int64)))
    return {"linked": linked, "charsum": charsum}


def _triple_unit(x_max: int, grid: tuple[int, ...], lo: int, hi: int) -> dict[str, list[int]]:
    """Linked and Borromean triples p1 < p2 < p3 for linked pairs lo..hi-1."""
    ps = _one_mod_four(x_max)
    table = _legendre_table(x_max)
    pairs = _linked_pairs(x_max)[lo:hi]
    grid_arr = np.asarray(grid, dtype=np.int64)
    linked = np.zeros(len(grid), dtype=np.int64)
    borr = np.zeros(len(grid), dtype=np.int64)
    for i, j in pairs.tolist():
        mask = (table[i, j + 1 :] == 1) & (table[j, j + 1 :] == 1)
        thirds = ps[j + 1 :][mask]
        if thirds.size == 0:
            continue
        pair = admissible_pair(int(ps[i]), int(ps[j]))
        linked += np.searchsorted(thirds, grid_arr, side="left")
        minus = [p for p in thirds.tolist() if redei_unchecked(pair, p) == -1]
        if minus:
            borr += np.searchsorted(np.asarray(minus, dtype=np.int64), grid_arr, side="left")
    return {"linked": linked.tolist(), "borromean": borr.tolist()}


_UNITS: dict[str, Callable[..., dict[str, list[int]]]] = {
    "pairs": _pair_unit,
    "triples": _triple_unit,
}
_COUNTER_KEYS = {"pairs": ("linked", "charsum"), "triples": ("linked", "borromean")}


def _run_unit(args: tuple) -> tuple[int, int, dict[str, list[int]]]:
    mode, x_max, grid, lo, hi = args
    return lo, hi, _UNITS[mode](x_max, grid, lo, hi)


# --- checkpoint -----------------------------------------------------------


@dataclass
class SweepCheckpoint:
    """Completed ranges and merged counters of a (possibly partial) sweep."""

    mode: str
    grid: list[int]
    total: int
    chunk: int = CHUNK
    ranges: list[tuple[int, int]] = field(default_factory=list)
    counters: dict[str, list[int]] = field(default_factory=dict)
    format_version: int = FORMAT_VERSION

    @classmethod
    def empty(cls, mode: str, grid: list[int], total: int, chunk: int = CHUNK) -> "SweepCheckpoint":
        counters = {k: [0] * len(grid) for k in _COUNTER_KEYS[mode]}
        return cls(mode, list(grid), total, chunk, [], counters)

    def add(self, lo: int, hi: int, counts: dict[str, list[int]]) -> None:
        self.ranges.append((lo, hi))
        self.ranges.sort()
        for key, vals in counts.items():
            acc = self.counters[key]
            for n, v in enumerate(vals):
                acc[n] += int(v)

    def done(self) -> set[int]:
        return {lo for lo, _ in self.ranges}

    def to_json(self) -> dict:
        return {
            "format_version": self.format_version,
            "mode": self.mode,
            "grid": self.grid,
            "total": self.total,
            "chunk": self.chunk,
            "ranges": [[lo, hi] for lo, hi in self.ranges],
            "counters": self.counters,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "SweepCheckpoint":
        try:
            cp = cls(
                mode=doc["mode"],
                grid=[int(x) for x in doc["grid"]],
                total=int(doc["total"]),
                chunk=int(doc["chunk"]),
                ranges=[(int(lo), int(hi)) for lo, hi in doc["ranges"]],
                counters={k: [int(v) for v in vals] for k, vals in doc["counters"].items()},
                format_version=int(doc["format_version"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CheckpointInvalidError(f"malformed checkpoint: {exc}") from exc
        cp.validate()
        return cp

    def validate(self) -> None:
        if self.format_version != FORMAT_VERSION:
            raise CheckpointInvalidError(f"unsupported format_version {self.format_version}")
        if self.mode not in MODES:
            raise CheckpointInvalidError(f"unknown mode {self.mode!r}")
        if self.chunk < 1:
            raise CheckpointInvalidError(f"chunk must be positive, got {self.chunk}")
        if set(self.counters) != set(_COUNTER_KEYS[self.mode]):
            raise CheckpointInvalidError(f"counter keys {sorted(self.counters)} do not match mode")
        if any(len(v) != len(self.grid) for v in self.counters.values()):
            raise CheckpointInvalidError("counter length does not match grid")
        prev_hi = 0
        for lo, hi in sorted(self.ranges):
            if lo < prev_hi:
                raise CheckpointInvalidError(f"overlapping range [{lo}, {hi})")
            if lo % self.chunk or hi != min(lo + self.chunk, self.total) or lo >= hi:
                raise CheckpointInvalidError(f"range [{lo}, {hi}) is not a work unit")
            prev_hi = hi

    def save(self, path: str | os.PathLike) -> None:
        """Atomic write: temp file in the same directory, then rename."""
        path = Path(path)
        fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=path.name, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(self.to_json(), fh, separators=(",", ":"))
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    @classmethod
    def load(cls, path: str | os.PathLike) -> "SweepCheckpoint":
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CheckpointInvalidError(f"checkpoint {path} is not valid JSON: {exc}") from exc
        return cls.from_json(doc)


# --- sweep ----------------------------------------------------------------


def _rows(mode: str, grid: list[int], counters: dict[str, list[int]]):
    pl = sieve_primes(grid[-1])
    ps = _one_mod_four(grid[-1])
    out = []
    for n, x in enumerate(grid):
        pi_x = pl.pi(x)
        if mode == "pairs":
            pi1 = int(np.searchsorted(ps, x, side="left"))
            out.append(PairCounts(x, pi_x, pi1, counters["linked"][n]))
        else:
            out.append(
                TripleCounts(x, comb(pi_x, 3), counters["linked"][n], counters["borromean"][n])
            )
    return out


def sweep(
    x_grid: Sequence[int],
    mode: str = "pairs",
    checkpoint: str | os.PathLike | None = None,
    workers: int = 1,
    chunk: int = CHUNK,
    on_unit: Callable[[int, int], None] | None = None,
) -> list:
    """Counts at every cutoff of ``x_grid`` (PairCounts or TripleCounts rows).

    ``checkpoint`` names a JSON file that is read if present and rewritten
    after every finished work unit. ``on_unit(lo, hi)`` is called after each
    unit is merged and saved. ``chunk`` is the number of enumeration
    indices per work unit.
    """
    if mode not in MODES:
        raise InvalidArgumentError(f"mode must be one of {MODES}, got {mode!r}")
    if workers < 1:
        raise InvalidArgumentError(f"workers must be >= 1, got {workers}")
    if chunk < 1:
        raise InvalidArgumentError(f"chunk must be >= 1, got {chunk}")
    grid = _validate_grid(x_grid)
    x_max = grid[-1]
    total = _unit_count(mode, x_max)

    state = None
    if checkpoint is not None and os.path.exists(checkpoint):
        state = SweepCheckpoint.load(checkpoint)
        if (state.mode, state.grid, state.total, state.chunk) != (mode, grid, total, chunk):
            raise CheckpointInvalidError(
                f"checkpoint {checkpoint} belongs to a different run "
                f"(mode={state.mode}, grid={state.grid}, total={state.total}, chunk={state.chunk})"
            )
        log.info("resuming %s sweep: %d ranges already done", mode, len(state.ranges))
    if state is None:
        state = SweepCheckpoint.empty(mode, grid, total, chunk)

    done = state.done()
    todo = [(mode, x_max, tuple(grid), lo, min(lo + chunk, total))
            for lo in range(0, total, chunk) if lo not in done]

    def merge(lo: int, hi: int, counts: dict[str, list[int]]) -> None:
        state.add(lo, hi, counts)
        if checkpoint is not None:
            state.save(checkpoint)
        if on_unit is not None:
            on_unit(lo, hi)

    if workers == 1 or len(todo) <= 1:
        for args in todo:
            merge(*_run_unit(args))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for lo, hi, counts in pool.map(_run_unit, todo):
                merge(lo, hi, counts)

    if checkpoint is not None and not todo:
        state.save(checkpoint)
    return _rows(mode, grid, state.counters)


# --- single-cutoff entry points ------------------------------------------


def count_pairs(x: int) -> PairCounts:
    """Ordered pairs p1 != p2 < x, both 1 mod 4, with (p1/p2) = 1."""
    return sweep([x], "pairs")[0]


def count_triples(x: int) -> TripleCounts:
    """Unordered linked and Borromean triples with all entries below x."""
    return sweep([x], "triples")[0]


def character_sum_E(x: int) -> int:
    """Sum of (p1/p2) over ordered pairs of primes below x that are 1 mod 4.

    The diagonal terms (p/p) = 0 are part of the index set.
    """
    if x < 2:
        raise InvalidArgumentError(f"x must be >= 2, got {x}")
    total = _unit_count("pairs", x)
    acc = 0
    for lo in range(0, total, CHUNK):
        acc += _pair_unit(x, (x,), lo, min(lo + CHUNK, total))["charsum"][0]
    return acc


def rho_count(pair: AdmissiblePair, x: int) -> int:
    """Primes p < x outside the pair with p = 1 (mod 4), (p1/p) = (p2/p) = 1 and [p1, p2, p] = -1."""
    if x < 2:
        raise InvalidArgumentError(f"x must be >= 2, got {x}")
    count = 0
    for p in sieve_primes(x).tolist():
        if p % 4 != 1 or p == pair.p1 or p == pair.p2:
            continue
        if _jacobi(pair.p1, p) == 1 and _jacobi(pair.p2, p) == 1:
            if redei_unchecked(pair, p) == -1:
                count += 1
    return count
