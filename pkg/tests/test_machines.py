import pytest
from hypothesis import given, settings

from conftest import perm_strategy
from popsort.machines import (
    DIVIDED_OBSTRUCTIONS,
    IllegalMoveError,
    Machine,
    MachineKind,
    MachineState,
    Move,
    PS_BASIS,
    is_sortable,
    is_sortable_by_division,
    is_sortable_ps_by_basis,
    is_sortable_unpruned,
    moves_from_text,
    moves_to_text,
    replay,
    sorting_witness,
)
from popsort.perms import EMPTY, all_perms, avoids, identity, parse

ALL_KINDS = list(MachineKind)


class TestMoveText:
    def test_tokens(self):
        moves = [Move.INPUT, Move.FLUSH_POP, Move.OUTPUT]
        assert moves_to_text(moves) == "I,F,O"

    def test_flush_resolution_by_kind(self):
        assert moves_from_text(MachineKind.PS, "I,F,O") == [
            Move.INPUT, Move.FLUSH_POP, Move.OUTPUT,
        ]
        assert moves_from_text(MachineKind.SP, "I,P,F") == [
            Move.INPUT, Move.PUSH_ONE, Move.FLUSH_OUTPUT,
        ]

    def test_roundtrip_on_witness(self):
        w = sorting_witness(MachineKind.PQS, parse("3142"))
        assert moves_from_text(MachineKind.PQS, moves_to_text(w)) == w

    def test_unknown_token(self):
        with pytest.raises(ValueError):
            moves_from_text(MachineKind.S, "I,Q")


class TestLegalMoves:
    def test_initial_state_only_input(self):
        machine = Machine(MachineKind.PS, parse("24513"))
        assert machine.legal_moves(machine.initial_state()) == [Move.INPUT]

    def test_flush_transfers_whole_pop_stack(self):
        machine = Machine(MachineKind.PS, parse("356124"))
        state = MachineState(input_pos=3, pop=(3, 5, 6))
        assert Move.FLUSH_POP in machine.legal_moves(state)
        after = machine.apply_move(state, Move.FLUSH_POP)
        assert after.stack == (6, 5, 3)  # 3 ends on top
        assert after.pop == ()

    def test_flush_on_empty_pop_never_offered(self):
        machine = Machine(MachineKind.PS, parse("21"))
        for state in (machine.initial_state(), MachineState(input_pos=2, stack=(2, 1))):
            assert Move.FLUSH_POP not in machine.legal_moves(state)

    def test_di_input_must_keep_first_stack_decreasing(self):
        machine = Machine(MachineKind.DI, parse("53142"))
        state = MachineState(input_pos=1, pop=(5,))
        # next input is 3 < 5: pushing it would break the decreasing read
        assert Move.INPUT not in machine.legal_moves(state)

    def test_di_push_must_keep_second_stack_increasing(self):
        machine = Machine(MachineKind.DI, parse("12"))
        state = MachineState(input_pos=2, pop=(2,), stack=(1,), next_needed=1)
        assert Move.PUSH_ONE not in machine.legal_moves(state)

    def test_output_only_for_next_needed(self):
        machine = Machine(MachineKind.S, parse("12"))
        state = MachineState(input_pos=2, stack=(1, 2), next_needed=1)
        assert machine.legal_moves(state) == []  # top is 2, need 1

    def test_sqp_flush_requires_exact_run(self):
        machine = Machine(MachineKind.SQP, parse("321"))
        good = MachineState(input_pos=3, pop=(3, 2, 1), next_needed=1)
        assert Move.FLUSH_OUTPUT in machine.legal_moves(good)
        bad = MachineState(input_pos=3, pop=(2, 3), queue=(1,), next_needed=1)
        assert Move.FLUSH_OUTPUT not in machine.legal_moves(bad)


class TestApplyMove:
    def test_pqs_flush_enqueues_in_pop_order(self):
        machine = Machine(MachineKind.PQS, parse("3142"))
        state = MachineState(input_pos=2, pop=(3, 1))
        after = machine.apply_move(state, Move.FLUSH_POP)
        assert after.queue == (1, 3)  # 1 was on top, enqueued first

    def test_output_advances_counter(self):
        machine = Machine(MachineKind.S, parse("1"))
        state = MachineState(input_pos=1, stack=(1,))
        after = machine.apply_move(state, Move.OUTPUT)
        assert after.next_needed == 2 and after.stack == ()

    def test_illegal_move_raises(self):
        machine = Machine(MachineKind.S, parse("12"))
        with pytest.raises(IllegalMoveError):
            machine.apply_move(machine.initial_state(), Move.OUTPUT)

    def test_flush_output_emits_run(self):
        machine = Machine(MachineKind.SP, parse("321"))
        state = MachineState(input_pos=3, pop=(3, 2, 1))
        after = machine.apply_move(state, Move.FLUSH_OUTPUT)
        assert after.next_needed == 4 and after.pop == ()


class TestSortable:
    def test_ps_sorts_figure_permutation(self):
        assert is_sortable(MachineKind.PS, parse("24513"))

    @pytest.mark.parametrize("text", ["2431", "3142", "3241"])
    def test_ps_minimal_unsortables(self, text):
        assert not is_sortable(MachineKind.PS, parse(text))

    def test_pqs_di_separations(self):
        assert is_sortable(MachineKind.PQS, parse("3142"))
        assert not is_sortable(MachineKind.DI, parse("3142"))
        assert is_sortable(MachineKind.DI, parse("465132"))
        assert not is_sortable(MachineKind.PQS, parse("465132"))

    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_identity_always_sortable(self, kind):
        for n in (0, 1, 5, 8):
            assert is_sortable(kind, identity(n))

    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_empty_sortable(self, kind):
        assert is_sortable(kind, EMPTY)
        assert sorting_witness(kind, EMPTY) == []


class TestWitness:
    def test_figure_trace(self):
        w = sorting_witness(MachineKind.PS, parse("356124"))
        assert moves_to_text(w) == "I,I,I,F,I,I,F,O,O,O,I,F,O,O,O"

    def test_absent_for_unsortable(self):
        assert sorting_witness(MachineKind.PS, parse("2431")) is None

    def test_single_stack_singleton(self):
        assert sorting_witness(MachineKind.S, parse("1")) == [Move.INPUT, Move.OUTPUT]

    def test_ps_singleton(self):
        assert moves_to_text(sorting_witness(MachineKind.PS, parse("1"))) == "I,F,O"

    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_witness_replays_to_identity_small(self, kind):
        for n in range(0, 6):
            for p in all_perms(n):
                w = sorting_witness(kind, p)
                assert (w is not None) == is_sortable(kind, p)
                if w is not None:
                    assert replay(kind, p, w) == identity(n)

    @settings(max_examples=100)
    @given(perm_strategy(max_n=7))
    def test_witness_replays_to_identity_random(self, p):
        for kind in ALL_KINDS:
            w = sorting_witness(kind, p)
            if w is not None:
                assert replay(kind, p, w) == identity(len(p))


class TestReplay:
    def test_figure_replay(self):
        moves = moves_from_text(MachineKind.PS, "I,I,I,F,I,I,F,O,O,O,I,F,O,O,O")
        assert replay(MachineKind.PS, parse("356124"), moves) == parse("123456")

    def test_single_stack_swap(self):
        moves = moves_from_text(MachineKind.S, "I,I,O,O")
        assert replay(MachineKind.S, parse("21"), moves) == parse("12")

    def test_illegal_output_reports_step(self):
        moves = moves_from_text(MachineKind.S, "I,I,O,O")
        with pytest.raises(IllegalMoveError) as exc:
            replay(MachineKind.S, parse("12"), moves)
        assert exc.value.step == 3

    def test_partial_replay_returns_prefix(self):
        moves = moves_from_text(MachineKind.S, "I,O")
        assert replay(MachineKind.S, parse("12"), moves) == parse("1")


class TestAlternateRoutes:
    def test_basis_route_examples(self):
        assert is_sortable_ps_by_basis(parse("24513"))
        assert not is_sortable_ps_by_basis(parse("2431"))
        assert is_sortable_ps_by_basis(identity(7))

    def test_division_route_examples(self):
        assert is_sortable_by_division(MachineKind.PS, parse("24513"))
        assert not is_sortable_by_division(MachineKind.PQS, parse("465132"))
        assert is_sortable_by_division(MachineKind.PS, parse("1"))

    def test_division_route_rejects_other_kinds(self):
        with pytest.raises(ValueError):
            is_sortable_by_division(MachineKind.S, parse("1"))

    def test_ps_triple_small(self):
        for n in range(0, 7):
            for p in all_perms(n):
                sim = is_sortable(MachineKind.PS, p)
                assert sim == is_sortable_ps_by_basis(p)
                assert sim == is_sortable_by_division(MachineKind.PS, p)


class TestMachineRelations:
    def test_single_stack_is_av231(self):
        pat = parse("231")
        for n in range(0, 7):
            for p in all_perms(n):
                assert is_sortable(MachineKind.S, p) == avoids(p, [pat])

    def test_sp_equals_sqp_small(self):
        for n in range(0, 6):
            for p in all_perms(n):
                assert is_sortable(MachineKind.SP, p) == is_sortable(MachineKind.SQP, p)

    def test_pqs_equals_sp_of_dual_small(self):
        for n in range(0, 6):
            for p in all_perms(n):
                assert is_sortable(MachineKind.PQS, p) == is_sortable(
                    MachineKind.SP, p.dual()
                )

    def test_ps_subset_of_pqs_and_di_small(self):
        for n in range(0, 6):
            for p in all_perms(n):
                if is_sortable(MachineKind.PS, p):
                    assert is_sortable(MachineKind.PQS, p)
                    assert is_sortable(MachineKind.DI, p)

    def test_ps_sum_closure(self):
        sortable = [
            p
            for n in range(1, 6)
            for p in all_perms(n)
            if is_sortable(MachineKind.PS, p)
        ]
        for a in sortable:
            for b in sortable:
                if len(a) + len(b) <= 7:
                    assert is_sortable(MachineKind.PS, a.direct_sum(b))


class TestPruningSoundness:
    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_pruned_equals_unpruned(self, kind):
        for n in range(0, 6):
            for p in all_perms(n):
                assert is_sortable(kind, p) == is_sortable_unpruned(kind, p), p
