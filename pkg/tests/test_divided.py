import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import perm_strategy
from popsort.divided import (
    DividedPermutation,
    all_divisions,
    blockwise_reverse,
    div_contains,
    exists_division_avoiding,
    parse_divided,
    reachable_by_local_reversals,
)
from popsort.machines import DIVIDED_OBSTRUCTIONS, MachineKind, is_sortable
from popsort.perms import EMPTY, ParseError, Permutation, all_perms, contains, parse, pattern_of

PS_PATTERNS = DIVIDED_OBSTRUCTIONS[MachineKind.PS]
PQS_PATTERNS = DIVIDED_OBSTRUCTIONS[MachineKind.PQS]


def naive_div_contains(pattern, host):
    """Oracle: every subsequence, every block bookkeeping done from scratch."""
    pv, hv = pattern.base.values, host.base.values
    if not pv:
        return True
    pb, hb = pattern.block_ids(), host.block_ids()
    for idx in itertools.combinations(range(len(hv)), len(pv)):
        if pattern_of([hv[i] for i in idx]) != pv:
            continue
        assignment = {}
        ok = True
        for j, i in enumerate(idx):
            if assignment.setdefault(pb[j], hb[i]) != hb[i]:
                ok = False
                break
        if ok and len(set(assignment.values())) == len(assignment):
            return True
    return False


class TestDividedPermutation:
    def test_parse_digit_and_comma_forms_agree(self):
        assert parse_divided("31|42") == parse_divided("3,1|4,2")

    def test_str_is_canonical(self):
        assert str(parse_divided("31|42")) == "3,1|4,2"

    def test_blocks(self):
        d = parse_divided("513|4|2")
        assert d.blocks() == ((5, 1, 3), (4,), (2,))
        assert d.block_ids() == (0, 0, 0, 1, 2)

    def test_empty_block_rejected(self):
        with pytest.raises(ParseError):
            parse_divided("3||42")

    def test_divider_out_of_range(self):
        with pytest.raises(ValueError):
            DividedPermutation(parse("21"), (2,))

    def test_base_must_be_permutation(self):
        with pytest.raises(ParseError):
            parse_divided("31|52")


class TestDivContains:
    def test_contained_via_532(self):
        assert div_contains(parse_divided("32|1"), parse_divided("513|4|2"))

    def test_blocked_despite_subsequence(self):
        assert not div_contains(parse_divided("32|1"), parse_divided("51|34|2"))

    def test_undivided_pattern_needs_single_block(self):
        assert not div_contains(parse_divided("21"), parse_divided("2|1"))
        assert div_contains(parse_divided("21"), parse_divided("21"))

    def test_distinct_pattern_blocks_need_distinct_host_blocks(self):
        # 2|3|1 needs three blocks
        assert not div_contains(parse_divided("2|3|1"), parse_divided("23|1"))
        assert div_contains(parse_divided("2|3|1"), parse_divided("2|3|1"))

    def test_agrees_with_naive_oracle_exhaustively(self):
        pats = [parse_divided(t) for t in ("21", "2|1", "132", "2|13", "32|1", "2|3|1", "31|42")]
        for n in range(0, 6):
            for base in all_perms(n):
                for host in all_divisions(base):
                    for pat in pats:
                        assert div_contains(pat, host) == naive_div_contains(pat, host)

    @settings(max_examples=150)
    @given(perm_strategy(max_n=7, min_n=1), st.integers(0, 1 << 6), st.integers(0, 1 << 6))
    def test_agrees_with_naive_oracle_random(self, host_base, hmask, pmask):
        hosts = list(all_divisions(host_base))
        host = hosts[hmask % len(hosts)]
        pat_base = parse("3142")
        pats = list(all_divisions(pat_base))
        pat = pats[pmask % len(pats)]
        assert div_contains(pat, host) == naive_div_contains(pat, host)

    def test_degenerates_to_plain_containment(self):
        for n in range(0, 6):
            for host in all_perms(n):
                undivided = DividedPermutation(host)
                for k in range(1, 4):
                    for pat in all_perms(k):
                        assert div_contains(
                            DividedPermutation(pat), undivided
                        ) == contains(pat, host)


class TestAllDivisions:
    @pytest.mark.parametrize("n,count", [(1, 1), (3, 4), (5, 16)])
    def test_division_counts(self, n, count):
        p = Permutation(tuple(range(1, n + 1)))
        assert len(list(all_divisions(p))) == count

    def test_empty_permutation_has_one_division(self):
        assert list(all_divisions(EMPTY)) == [DividedPermutation(EMPTY)]

    def test_deterministic_order(self):
        divs = list(all_divisions(parse("321")))
        assert [d.dividers for d in divs] == [(), (1,), (2,), (1, 2)]


class TestExistsDivisionAvoiding:
    def test_division_found_for_3142(self):
        d = exists_division_avoiding(parse("3142"), PQS_PATTERNS)
        assert d is not None
        assert d.dividers == (2,)  # 3,1|4,2

    def test_no_division_for_2431(self):
        assert exists_division_avoiding(parse("2431"), PS_PATTERNS) is None

    def test_identity_returns_undivided(self):
        for n in (1, 4, 6):
            p = Permutation(tuple(range(1, n + 1)))
            d = exists_division_avoiding(p, PS_PATTERNS)
            assert d == DividedPermutation(p, ())

    def test_empty_permutation(self):
        assert exists_division_avoiding(EMPTY, PS_PATTERNS) == DividedPermutation(EMPTY)


class TestBlockwiseReverse:
    def test_one_divider(self):
        assert blockwise_reverse(parse_divided("31|42")) == parse("1324")

    def test_single_block_reverses_wholly(self):
        p = parse("3142")
        assert blockwise_reverse(DividedPermutation(p)) == p.reverse()

    def test_fully_divided_is_fixed(self):
        p = parse("3142")
        assert blockwise_reverse(DividedPermutation(p, (1, 2, 3))) == p


class TestLocalReversals:
    def avoids_231(self, q):
        return not contains(parse("231"), q)

    def test_3142_reachable(self):
        assert reachable_by_local_reversals(parse("3142"), self.avoids_231)

    def test_identity_reachable(self):
        assert reachable_by_local_reversals(Permutation((1, 2, 3, 4, 5)), self.avoids_231)

    def test_465132_not_reachable(self):
        assert not reachable_by_local_reversals(parse("465132"), self.avoids_231)

    def test_matches_pqs_divisions_small(self):
        for n in range(0, 7):
            for p in all_perms(n):
                via_division = exists_division_avoiding(p, PQS_PATTERNS) is not None
                assert via_division == reachable_by_local_reversals(p, self.avoids_231)


class TestMachineCharacterizations:
    def test_ps_division_matches_simulator_small(self):
        for n in range(0, 7):
            for p in all_perms(n):
                assert (
                    exists_division_avoiding(p, PS_PATTERNS) is not None
                ) == is_sortable(MachineKind.PS, p)

    def test_pqs_division_matches_simulator_small(self):
        for n in range(0, 7):
            for p in all_perms(n):
                assert (
                    exists_division_avoiding(p, PQS_PATTERNS) is not None
                ) == is_sortable(MachineKind.PQS, p)
