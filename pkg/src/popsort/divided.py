"""Divided permutations and block-respecting pattern containment.

A divided permutation is a permutation split by dividers into consecutive
blocks, written 5,1,3|4|2.  A divided pattern sigma_1|...|sigma_s occurs in
a divided host when the base contains an order-isomorphic subsequence in
which each sigma_i sits inside a single host block, no two sigma_i share a
host block, and no stray entries of the subsequence invade those blocks.
An undivided pattern therefore has to land inside one block.

The search space of all 2^(n-1) divisions of a permutation is scanned in
increasing bitmask order (bit i-1 set = divider after position i), so
returned witnesses are reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional

from .perms import ParseError, Permutation, _neighbor_bounds, parse


@dataclass(frozen=True)
class DividedPermutation:
    """A permutation plus divider positions; divider i splits after entry i."""

    base: Permutation
    dividers: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        n = len(self.base)
        divs = tuple(sorted(set(self.dividers)))
        object.__setattr__(self, "dividers", divs)
        if divs and not (1 <= divs[0] and divs[-1] <= n - 1):
            raise ValueError(f"dividers {divs} out of range 1..{n - 1}")

    def __str__(self) -> str:
        return "|".join(",".join(str(v) for v in blk) for blk in self.blocks())

    def __len__(self) -> int:
        return len(self.base)

    def blocks(self) -> tuple[tuple[int, ...], ...]:
        v = self.base.values
        cuts = (0,) + self.dividers + (len(v),)
        return tuple(v[a:b] for a, b in zip(cuts, cuts[1:]))

    def block_ids(self) -> tuple[int, ...]:
        """block_ids()[i] = index of the block holding position i+1."""
        ids = []
        b = 0
        divs = set(self.dividers)
        for pos in range(1, len(self.base) + 1):
            ids.append(b)
            if pos in divs:
                b += 1
        return tuple(ids)


DividedPattern = DividedPermutation


def parse_divided(text: str) -> DividedPermutation:
    """Parse "3,1|4,2" (canonical) or "31|42" (digit form, n <= 9)."""
    parts = text.strip().split("|")
    if any(not part.strip() for part in parts):
        raise ParseError(f"empty block in divided permutation {text!r}")
    if "," in text:
        block_vals = [[tok for tok in part.split(",")] for part in parts]
    else:
        block_vals = [list(part.strip()) for part in parts]
    flat = ",".join(tok for blk in block_vals for tok in blk)
    base = parse(flat)
    dividers = []
    pos = 0
    for blk in block_vals[:-1]:
        pos += len(blk)
        dividers.append(pos)
    return DividedPermutation(base, tuple(dividers))


def _prep_pattern(pat: DividedPermutation):
    pv = pat.base.values
    pb = pat.block_ids()
    lo, hi = _neighbor_bounds(pv)
    starts_block = tuple(j == 0 or pb[j] != pb[j - 1] for j in range(len(pv)))
    return pv, lo, hi, starts_block


def _div_contains_raw(prep, hv: tuple[int, ...], hb: tuple[int, ...]) -> bool:
    pv, lo, hi, starts_block = prep
    k, n = len(pv), len(hv)
    if k == 0:
        return True
    if k > n:
        return False
    chosen = [0] * k
    cblock = [0] * k

    def extend(j: int, start: int) -> bool:
        bl, bh = lo[j], hi[j]
        vlo = chosen[bl] if bl >= 0 else 0
        vhi = chosen[bh] if bh >= 0 else n + 1
        new_block = starts_block[j]
        minb = cblock[j - 1] + 1 if (new_block and j) else 0
        reqb = cblock[j - 1] if not new_block else -1
        last = j + 1 == k
        for i in range(start, n - (k - j) + 1):
            b = hb[i]
            if new_block:
                if b < minb:
                    continue
            elif b != reqb:
                if b > reqb:
                    break  # host blocks only grow with position
                continue
            v = hv[i]
            if vlo < v < vhi:
                if last:
                    return True
                chosen[j] = v
                cblock[j] = b
                if extend(j + 1, i + 1):
                    return True
        return False

    return extend(0, 0)


def div_contains(pattern: DividedPattern, host: DividedPermutation) -> bool:
    """True iff the divided pattern occurs in the divided host."""
    return _div_contains_raw(_prep_pattern(pattern), host.base.values, host.block_ids())


def div_avoids(host: DividedPermutation, patterns: Iterable[DividedPattern]) -> bool:
    hv, hb = host.base.values, host.block_ids()
    return not any(_div_contains_raw(_prep_pattern(p), hv, hb) for p in patterns)


def _dividers_of_mask(mask: int, n: int) -> tuple[int, ...]:
    return tuple(t + 1 for t in range(n - 1) if mask >> t & 1)


def all_divisions(p: Permutation) -> Iterator[DividedPermutation]:
    """All 2^(n-1) divisions of p, in increasing divider-bitmask order."""
    n = len(p)
    if n == 0:
        yield DividedPermutation(p, ())
        return
    for mask in range(1 << (n - 1)):
        yield DividedPermutation(p, _dividers_of_mask(mask, n))


def exists_division_avoiding(
    p: Permutation, patterns: Iterable[DividedPattern]
) -> Optional[DividedPermutation]:
    """First division of p (in all_divisions order) avoiding every pattern."""
    preps = [_prep_pattern(pat) for pat in patterns]
    hv = p.values
    n = len(hv)
    if n == 0:
        return DividedPermutation(p, ())
    hb = [0] * n
    for mask in range(1 << (n - 1)):
        b = 0
        for i in range(1, n):
            if mask >> (i - 1) & 1:
                b += 1
            hb[i] = b
        hbt = tuple(hb)
        if not any(_div_contains_raw(prep, hv, hbt) for prep in preps):
            return DividedPermutation(p, _dividers_of_mask(mask, n))
    return None


def blockwise_reverse(d: DividedPermutation) -> Permutation:
    """Reverse each block in place and concatenate."""
    out: list[int] = []
    for blk in d.blocks():
        out.extend(reversed(blk))
    return Permutation(tuple(out))


def reachable_by_local_reversals(
    p: Permutation, membership: Callable[[Permutation], bool]
) -> bool:
    """True iff some division of p blockwise-reverses into the given set."""
    return any(membership(blockwise_reverse(d)) for d in all_divisions(p))
