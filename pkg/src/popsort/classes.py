"""Class-level computations: counting, basis mining, Wilf tables, simples.

A `ClassSpec` wraps a membership oracle (a finite basis, a machine kind,
or an arbitrary named predicate) together with a canonical text and a
stable fingerprint used as a cache key.  Counting is an honest exhaustive
scan over all n! permutations; basis mining assumes the oracle describes a
downward-closed set (the caller's responsibility) and walks lengths bottom
up so that only permutations whose one-entry deletions are all members
ever reach the oracle.
"""
from __future__ import annotations

import hashlib
import itertools
import multiprocessing
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from . import machines
from .machines import MachineKind
from .perms import (
    EMPTY,
    Permutation,
    all_perms,
    avoids,
    contains_values,
    is_simple_values,
    parallel_alternation,
    pattern_of,
    substitution_decompose,
)


class MalformedOracleError(RuntimeError):
    """The membership oracle cannot describe a permutation class."""


class ClassSpec:
    """A named membership oracle with a canonical text and fingerprint.

    `descriptor` is a picklable recipe for rebuilding the spec inside
    worker processes; predicate-backed specs have none and always scan
    serially.
    """

    __slots__ = ("name", "canonical_text", "fingerprint", "descriptor", "_member")

    def __init__(
        self,
        name: str,
        canonical_text: str,
        member: Callable[[Permutation], bool],
        descriptor: tuple | None = None,
    ):
        self.name = name
        self.canonical_text = canonical_text
        self.fingerprint = hashlib.sha256(canonical_text.encode()).hexdigest()[:16]
        self.descriptor = descriptor
        self._member = member

    def member(self, p: Permutation) -> bool:
        return self._member(p)

    def __repr__(self) -> str:
        return f"ClassSpec({self.canonical_text!r})"

    @staticmethod
    def from_basis(patterns: Iterable[Permutation], name: str | None = None) -> "ClassSpec":
        pats = tuple(sorted(set(patterns), key=lambda p: (len(p), p.values)))
        text = "basis:" + ";".join(str(p) for p in pats)
        return ClassSpec(
            name or f"Av({','.join(str(p).replace(',', '') for p in pats)})",
            text,
            lambda p: avoids(p, pats),
            descriptor=("basis", tuple(p.values for p in pats)),
        )

    @staticmethod
    def from_machine(kind: MachineKind) -> "ClassSpec":
        return ClassSpec(
            f"{kind.name}-sortable",
            f"machine:{kind.value}",
            lambda p: machines.is_sortable(kind, p),
            descriptor=("machine", kind.value),
        )

    @staticmethod
    def from_predicate(name: str, member: Callable[[Permutation], bool]) -> "ClassSpec":
        return ClassSpec(name, f"predicate:{name}", member)


def _rebuild_spec(descriptor: tuple) -> ClassSpec:
    tag, payload = descriptor
    if tag == "machine":
        return ClassSpec.from_machine(MachineKind.from_name(payload))
    if tag == "basis":
        return ClassSpec.from_basis(Permutation(vals) for vals in payload)
    raise ValueError(f"unknown spec descriptor {descriptor!r}")


def _count_partition(args: tuple) -> int:
    descriptor, n, first = args
    spec = _rebuild_spec(descriptor)
    rest = [v for v in range(1, n + 1) if v != first]
    return sum(
        1
        for tail in itertools.permutations(rest)
        if spec.member(Permutation((first,) + tail))
    )


def count_members(spec: ClassSpec, n: int, jobs: int = 1) -> int:
    """Number of length-n members, by exhaustive scan of all n! permutations.

    With jobs > 1 the scan is partitioned by first entry across worker
    processes; the aggregate is an order-independent integer sum, so the
    result is identical for any job count.  Predicate-backed specs cannot
    cross a process boundary and fall back to the serial scan.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return 1 if spec.member(EMPTY) else 0
    if jobs > 1 and spec.descriptor is not None and n >= 4:
        tasks = [(spec.descriptor, n, first) for first in range(1, n + 1)]
        with multiprocessing.Pool(jobs) as pool:
            return sum(pool.map(_count_partition, tasks))
    return sum(1 for p in all_perms(n) if spec.member(p))


def _deletion_patterns(vals: tuple[int, ...]) -> Iterable[tuple[int, ...]]:
    for t, v in enumerate(vals):
        yield tuple(w - (w > v) for s, w in enumerate(vals) if s != t)


def compute_basis(spec: ClassSpec, max_len: int) -> list[Permutation]:
    """Minimal non-members up to max_len: every one-entry deletion a member.

    Requires a downward-closed oracle; under that assumption a permutation
    with a non-member deletion is itself a non-member, so the oracle is
    only consulted on permutations whose deletions all survived the
    previous level.
    """
    basis: list[Permutation] = []
    if max_len < 1:
        return basis
    if not spec.member(Permutation((1,))):
        raise MalformedOracleError(
            f"{spec.name}: oracle rejects the singleton permutation; "
            "basis mining expects a class containing 1"
        )
    prev: set[tuple[int, ...]] = {(1,)}
    for n in range(2, max_len + 1):
        cur: set[tuple[int, ...]] = set()
        for vals in itertools.permutations(range(1, n + 1)):
            if all(d in prev for d in _deletion_patterns(vals)):
                if spec.member(Permutation(vals)):
                    cur.add(vals)
                else:
                    basis.append(Permutation(vals))
        prev = cur
    return basis


@dataclass(frozen=True)
class WilfRow:
    n: int
    counts: tuple[int, ...]
    all_equal: bool


@dataclass(frozen=True)
class WilfTable:
    spec_names: tuple[str, ...]
    rows: tuple[WilfRow, ...]

    @property
    def all_equal(self) -> bool:
        return all(row.all_equal for row in self.rows)

    def to_csv(self) -> str:
        """One row per n: n, then one count column per spec."""
        lines = [",".join(["n", *self.spec_names])]
        for row in self.rows:
            lines.append(",".join([str(row.n), *(str(c) for c in row.counts)]))
        return "\n".join(lines) + "\n"

    def to_json_obj(self) -> dict:
        return {
            "specs": list(self.spec_names),
            "rows": [
                {"n": row.n, "counts": list(row.counts), "all_equal": row.all_equal}
                for row in self.rows
            ],
            "all_equal": self.all_equal,
        }


def wilf_table(specs: Sequence[ClassSpec], max_n: int, jobs: int = 1) -> WilfTable:
    """count_members for each spec and each n <= max_n, with equality flags."""
    rows = []
    for n in range(1, max_n + 1):
        counts = tuple(count_members(spec, n, jobs=jobs) for spec in specs)
        rows.append(WilfRow(n, counts, len(set(counts)) <= 1))
    return WilfTable(tuple(spec.name for spec in specs), tuple(rows))


def simples_in_class(basis: Iterable[Permutation], max_len: int) -> list[Permutation]:
    """All simple permutations of length <= max_len avoiding the basis.

    Simplicity is checked first so only the (much rarer) simple candidates
    pay for pattern containment tests.
    """
    pats = [p.values for p in basis]
    out: list[Permutation] = []
    for n in range(1, max_len + 1):
        for vals in itertools.permutations(range(1, n + 1)):
            if is_simple_values(vals) and not any(
                contains_values(pv, vals) for pv in pats
            ):
                out.append(Permutation(vals))
    return out


# ---------------------------------------------------------------------------
# Structural recognizer for the class avoiding 2431, 3142 and 3241 (the
# PS-sortable permutations).  A member is a sum of members, or a skew sum
# of a reverse layered permutation over a member, or an inflation of a
# parallel alternation 24...(2m)13...(2m-1) whose even entries become
# increasing intervals and whose odd entries become members.
# ---------------------------------------------------------------------------

_REVERSE_LAYERED_OBSTRUCTIONS = ((1, 3, 2), (2, 1, 3))
_structural_memo: dict[tuple[int, ...], bool] = {}


def _is_reverse_layered(vals: tuple[int, ...]) -> bool:
    return not any(contains_values(pv, vals) for pv in _REVERSE_LAYERED_OBSTRUCTIONS)


def structural_member(p: Permutation) -> bool:
    """Recursive membership test for Av(2431, 3142, 3241) by shape."""
    return _structural(p.values)


def _structural(vals: tuple[int, ...]) -> bool:
    n = len(vals)
    if n <= 1:
        return True
    cached = _structural_memo.get(vals)
    if cached is not None:
        return cached
    result = _structural_uncached(vals, n)
    _structural_memo[vals] = result
    return result


def _structural_uncached(vals: tuple[int, ...], n: int) -> bool:
    # Direct sums: every summand must be a member.
    mx = 0
    start = 0
    cuts = []
    for i, w in enumerate(vals):
        if w > mx:
            mx = w
        if mx == i + 1:
            cuts.append((start, i + 1))
            start = i + 1
    if len(cuts) > 1:
        return all(_structural(pattern_of(vals[a:b])) for a, b in cuts)

    # Skew splits: reverse layered prefix over a member suffix.
    mn = n + 1
    for k in range(1, n):
        if vals[k - 1] < mn:
            mn = vals[k - 1]
        if mn == n - k + 1:  # prefix holds exactly the top k values
            if _is_reverse_layered(pattern_of(vals[:k])) and _structural(
                pattern_of(vals[k:])
            ):
                return True
    # Inflations of a parallel alternation.  For a permutation that is
    # neither sum nor skew decomposable the simple quotient and blocks are
    # unique; a skew decomposable permutation that survived to here gets a
    # quotient of 21 and is correctly rejected.
    quotient, parts = substitution_decompose(Permutation(vals))
    qv = quotient.values
    m = len(qv) // 2
    if m >= 2 and qv == parallel_alternation(m).values:
        evens_ok = all(
            parts[t].values == tuple(range(1, len(parts[t]) + 1)) for t in range(m)
        )
        return evens_ok and all(_structural(parts[t].values) for t in range(m, 2 * m))
    return False
