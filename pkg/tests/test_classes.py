import pytest

from popsort.classes import (
    ClassSpec,
    MalformedOracleError,
    compute_basis,
    count_members,
    simples_in_class,
    structural_member,
    wilf_table,
)
from popsort.machines import MachineKind, PS_BASIS
from popsort.perms import all_perms, avoids, inflate, parse
from popsort.series import closed_form

PS_SPEC = ClassSpec.from_machine(MachineKind.PS)
PS_BASIS_SPEC = ClassSpec.from_basis(PS_BASIS)


class TestClassSpec:
    def test_fingerprint_stable_across_instances(self):
        a = ClassSpec.from_basis([parse("2431"), parse("3142")])
        b = ClassSpec.from_basis([parse("3142"), parse("2431")])  # order-insensitive
        assert a.fingerprint == b.fingerprint

    def test_fingerprints_distinguish_specs(self):
        specs = [
            ClassSpec.from_machine(MachineKind.PS),
            ClassSpec.from_machine(MachineKind.PQS),
            ClassSpec.from_basis([parse("231")]),
        ]
        assert len({s.fingerprint for s in specs}) == 3

    def test_predicate_spec(self):
        spec = ClassSpec.from_predicate("increasing", lambda p: list(p) == sorted(p))
        assert count_members(spec, 4) == 1


class TestCountMembers:
    def test_pqs_counts_to_six(self):
        spec = ClassSpec.from_machine(MachineKind.PQS)
        assert [count_members(spec, n) for n in range(1, 7)] == [1, 2, 6, 24, 120, 685]

    def test_short_lengths_unconstrained_by_length_four_basis(self):
        assert count_members(PS_BASIS_SPEC, 3) == 6

    def test_basis_count_at_four(self):
        assert count_members(PS_BASIS_SPEC, 4) == 21

    def test_empty_length(self):
        assert count_members(PS_SPEC, 0) == 1

    def test_jobs_do_not_change_counts(self):
        spec = ClassSpec.from_machine(MachineKind.PQS)
        assert count_members(spec, 5, jobs=2) == count_members(spec, 5, jobs=1)

    def test_machine_and_basis_agree_for_ps(self):
        for n in range(0, 7):
            assert count_members(PS_SPEC, n) == count_members(PS_BASIS_SPEC, n)


class TestComputeBasis:
    def test_single_stack_basis(self):
        assert compute_basis(ClassSpec.from_machine(MachineKind.S), 5) == [parse("231")]

    def test_ps_basis(self):
        assert compute_basis(PS_SPEC, 6) == sorted(
            PS_BASIS, key=lambda p: (len(p), p.values)
        )

    def test_av_basis_recovered(self):
        mined = compute_basis(PS_BASIS_SPEC, 6)
        assert mined == sorted(PS_BASIS, key=lambda p: (len(p), p.values))

    def test_oracle_rejecting_singleton_is_malformed(self):
        spec = ClassSpec.from_predicate("empty-class", lambda p: False)
        with pytest.raises(MalformedOracleError):
            compute_basis(spec, 3)

    def test_whole_universe_has_empty_basis(self):
        spec = ClassSpec.from_predicate("everything", lambda p: True)
        assert compute_basis(spec, 4) == []


class TestWilfTable:
    def test_three_wilf_equivalent_classes_to_four(self):
        specs = [
            ClassSpec.from_basis([parse(t) for t in texts])
            for texts in (
                ("2431", "3142", "3241"),
                ("2431", "4231", "4321"),
                ("2143", "2413", "3142"),
            )
        ]
        table = wilf_table(specs, 4)
        assert table.all_equal
        assert table.rows[-1].counts == (21, 21, 21)

    def test_single_spec_trivially_equal(self):
        table = wilf_table([PS_SPEC], 4)
        assert table.all_equal

    def test_catalan_vs_ps_diverge_at_four(self):
        specs = [ClassSpec.from_basis([parse("231")]), PS_BASIS_SPEC]
        table = wilf_table(specs, 4)
        assert table.rows[3].counts == (14, 21)
        assert not table.rows[3].all_equal
        assert not table.all_equal

    def test_serialization(self):
        specs = [ClassSpec.from_basis([parse("231")]), PS_BASIS_SPEC]
        table = wilf_table(specs, 3)
        lines = table.to_csv().splitlines()
        assert lines[0] == f"n,{specs[0].name},{specs[1].name}"
        assert lines[1:] == ["1,1,1", "2,2,2", "3,5,6"]
        obj = table.to_json_obj()
        assert obj["rows"][2] == {"n": 3, "counts": [5, 6], "all_equal": False}


class TestSimples:
    def test_census_to_six(self):
        got = simples_in_class([parse("2431"), parse("3142")], 6)
        assert got == [parse("1"), parse("12"), parse("21"), parse("2413"), parse("246135")]

    def test_no_simples_of_length_three(self):
        assert simples_in_class([parse("2431"), parse("3142")], 3) == [
            parse("1"), parse("12"), parse("21"),
        ]

    def test_unconstrained_census_to_four(self):
        assert simples_in_class([], 4) == [
            parse("1"), parse("12"), parse("21"), parse("2413"), parse("3142"),
        ]


class TestStructuralMember:
    def test_figure_permutation(self):
        assert structural_member(parse("24513"))

    def test_basis_elements_rejected(self):
        for t in ("2431", "3142", "3241"):
            assert not structural_member(parse(t))

    def test_alternation_inflation_with_decreasing_odd_part(self):
        # odd entries may be inflated by any member, including 21
        p = inflate(parse("2413"), [parse("12"), parse("1"), parse("21"), parse("1")])
        assert p == parse("346215")
        assert avoids(p, PS_BASIS)  # cross-check with the containment oracle
        assert structural_member(p)

    def test_alternation_inflation_with_decreasing_even_part(self):
        # even entries must inflate to increasing intervals: 21 there breaks it
        p = inflate(parse("2413"), [parse("21"), parse("1"), parse("1"), parse("1")])
        assert p == parse("32514")
        assert not avoids(p, PS_BASIS)
        assert not structural_member(p)

    def test_matches_avoidance_to_seven(self):
        for n in range(0, 8):
            for p in all_perms(n):
                assert structural_member(p) == avoids(p, PS_BASIS), p

    def test_reverse_layered_members(self):
        # iota_1 (-) iota_2 (-) ... shapes are members for any increasing runs
        p = parse("563412")  # 12 (-) 12 (-) 12
        assert structural_member(p)
        assert structural_member(parse("321"))


class TestCountsMatchSeries:
    def test_machine_counts_equal_series_coefficients(self):
        coeffs = closed_form(7).integer_coefficients()
        for n in range(1, 8):
            assert count_members(PS_SPEC, n) == coeffs[n]


class TestSpecGuards:
    def test_negative_length_rejected(self):
        with pytest.raises(ValueError):
            count_members(PS_SPEC, -1)
