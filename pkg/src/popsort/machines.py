"""Operational semantics and sortability deciders for six serial machines.

Kinds (first device listed first):

  S    a single stack
  PS   pop stack, then stack, linked directly: a pop-stack flush lands on
       the stack with no buffering
  PQS  pop stack, queue, stack
  SP   stack, then pop stack, linked directly: popping the pop stack emits
       its whole content to the output
  SQP  stack, queue, pop stack
  DI   a strictly decreasing stack (read top to bottom) feeding a strictly
       increasing one

A machine sorts pi when some move sequence emits 1,...,n.  Output-type
moves are restricted to emitting the smallest outstanding value, which
turns the output into a counter.  `Machine` exposes the raw move
semantics; `is_sortable`/`sorting_witness` run a pruned depth-first
search over configurations, and `is_sortable_unpruned` is the slow
reference search used to validate the pruning.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from .divided import DividedPattern, exists_division_avoiding, parse_divided
from .perms import Permutation, avoids, parse


class MachineKind(Enum):
    S = "s"
    PS = "ps"
    PQS = "pqs"
    SP = "sp"
    SQP = "sqp"
    DI = "di"

    @classmethod
    def from_name(cls, name: str) -> "MachineKind":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise ValueError(f"unknown machine kind {name!r}") from None


class Move(Enum):
    INPUT = "I"
    FLUSH_POP = "F"       # entire pop stack onto its successor, top first
    PUSH_ONE = "P"        # one entry from the first device to its successor
    DEQUEUE = "D"         # queue front to the next device
    OUTPUT = "O"
    FLUSH_OUTPUT = "F2"   # entire pop stack to the output, top first


_MOVE_TOKENS = {
    Move.INPUT: "I",
    Move.FLUSH_POP: "F",
    Move.PUSH_ONE: "P",
    Move.DEQUEUE: "D",
    Move.OUTPUT: "O",
    Move.FLUSH_OUTPUT: "F",
}


def moves_to_text(moves: Iterable[Move]) -> str:
    return ",".join(_MOVE_TOKENS[m] for m in moves)


def moves_from_text(kind: MachineKind, text: str) -> list[Move]:
    """Parse a comma-separated move string; the kind disambiguates F."""
    flush = Move.FLUSH_OUTPUT if kind in (MachineKind.SP, MachineKind.SQP) else Move.FLUSH_POP
    table = {"I": Move.INPUT, "F": flush, "P": Move.PUSH_ONE, "D": Move.DEQUEUE, "O": Move.OUTPUT}
    moves = []
    text = text.strip()
    if not text:
        return moves
    for tok in text.split(","):
        tok = tok.strip().upper()
        if tok not in table:
            raise ValueError(f"unknown move token {tok!r}")
        moves.append(table[tok])
    return moves


class IllegalMoveError(RuntimeError):
    def __init__(self, move: Move, state: "MachineState", step: int | None = None):
        self.move = move
        self.state = state
        self.step = step
        at = f" at step {step}" if step is not None else ""
        super().__init__(f"illegal move {move.name}{at} in state {state}")


@dataclass(frozen=True)
class MachineState:
    """A machine configuration.

    `pop`, `queue` and `stack` are tuples; the last element of a stack
    tuple is its top, the first element of the queue is its front.  For DI
    the `pop` field holds the first (decreasing) stack.  `next_needed` is
    the smallest value not yet output.
    """

    input_pos: int = 0
    pop: tuple[int, ...] = ()
    queue: tuple[int, ...] = ()
    stack: tuple[int, ...] = ()
    next_needed: int = 1

    def __str__(self) -> str:
        return (
            f"(in={self.input_pos} pop={list(self.pop)} queue={list(self.queue)}"
            f" stack={list(self.stack)} next={self.next_needed})"
        )


class Machine:
    """The move semantics of one machine kind bound to one input permutation."""

    def __init__(self, kind: MachineKind, perm: Permutation):
        self.kind = kind
        self.perm = perm

    def initial_state(self) -> MachineState:
        return MachineState()

    def is_sorted(self, state: MachineState) -> bool:
        return state.next_needed == len(self.perm) + 1

    def legal_moves(self, state: MachineState) -> list[Move]:
        """Moves applicable in `state`, output-type moves first.

        Flushing an empty pop stack is never offered (it would be a no-op),
        and output moves are only offered when they emit the next needed
        value (or, for SP/SQP, the run starting at it).
        """
        kind = self.kind
        p = self.perm.values
        i, pop, queue, stack, nn = (
            state.input_pos, state.pop, state.queue, state.stack, state.next_needed,
        )
        moves: list[Move] = []
        if kind is MachineKind.S:
            if stack and stack[-1] == nn:
                moves.append(Move.OUTPUT)
            if i < len(p):
                moves.append(Move.INPUT)
        elif kind is MachineKind.PS:
            if stack and stack[-1] == nn:
                moves.append(Move.OUTPUT)
            if i < len(p):
                moves.append(Move.INPUT)
            if pop:
                moves.append(Move.FLUSH_POP)
        elif kind is MachineKind.PQS:
            if stack and stack[-1] == nn:
                moves.append(Move.OUTPUT)
            if i < len(p):
                moves.append(Move.INPUT)
            if pop:
                moves.append(Move.FLUSH_POP)
            if queue:
                moves.append(Move.DEQUEUE)
        elif kind is MachineKind.SP:
            if pop and self._pop_is_next_run(pop, nn):
                moves.append(Move.FLUSH_OUTPUT)
            if i < len(p):
                moves.append(Move.INPUT)
            if stack:
                moves.append(Move.PUSH_ONE)
        elif kind is MachineKind.SQP:
            if pop and self._pop_is_next_run(pop, nn):
                moves.append(Move.FLUSH_OUTPUT)
            if i < len(p):
                moves.append(Move.INPUT)
            if stack:
                moves.append(Move.PUSH_ONE)
            if queue:
                moves.append(Move.DEQUEUE)
        elif kind is MachineKind.DI:
            if stack and stack[-1] == nn:
                moves.append(Move.OUTPUT)
            if i < len(p) and (not pop or p[i] > pop[-1]):
                moves.append(Move.INPUT)
            if pop and (not stack or pop[-1] < stack[-1]):
                moves.append(Move.PUSH_ONE)
        return moves

    @staticmethod
    def _pop_is_next_run(pop: tuple[int, ...], nn: int) -> bool:
        # Popping emits top to bottom; that must read nn, nn+1, ...
        return all(pop[len(pop) - 1 - t] == nn + t for t in range(len(pop)))

    def apply_move(self, state: MachineState, move: Move) -> MachineState:
        if move not in self.legal_moves(state):
            raise IllegalMoveError(move, state)
        kind = self.kind
        p = self.perm.values
        i, pop, queue, stack, nn = (
            state.input_pos, state.pop, state.queue, state.stack, state.next_needed,
        )
        if move is Move.INPUT:
            x = p[i]
            if kind in (MachineKind.PS, MachineKind.PQS, MachineKind.DI):
                return MachineState(i + 1, pop + (x,), queue, stack, nn)
            return MachineState(i + 1, pop, queue, stack + (x,), nn)
        if move is Move.FLUSH_POP:
            chunk = pop[::-1]  # popped top first
            if kind is MachineKind.PQS:
                return MachineState(i, (), queue + chunk, stack, nn)
            return MachineState(i, (), queue, stack + chunk, nn)
        if move is Move.PUSH_ONE:
            x = stack[-1] if kind in (MachineKind.SP, MachineKind.SQP) else pop[-1]
            if kind is MachineKind.SP:
                return MachineState(i, pop + (x,), queue, stack[:-1], nn)
            if kind is MachineKind.SQP:
                return MachineState(i, pop, queue + (x,), stack[:-1], nn)
            return MachineState(i, pop[:-1], queue, stack + (x,), nn)  # DI
        if move is Move.DEQUEUE:
            x = queue[0]
            if kind is MachineKind.PQS:
                return MachineState(i, pop, queue[1:], stack + (x,), nn)
            return MachineState(i, pop + (x,), queue[1:], stack, nn)  # SQP
        if move is Move.OUTPUT:
            return MachineState(i, pop, queue, stack[:-1], nn + 1)
        if move is Move.FLUSH_OUTPUT:
            return MachineState(i, (), queue, stack, nn + len(pop))
        raise IllegalMoveError(move, state)


# ---------------------------------------------------------------------------
# Pruned depth-first searches, one per kind.
#
# All searches force output-type moves the moment they are legal and skip
# moves that provably lead nowhere: the final stack must stay strictly
# increasing read top to bottom (else its entries can never leave in
# order), a PS pop stack must stay strictly decreasing read top to bottom
# (a flush would wedge the stack otherwise), and an SP/SQP pop stack must
# always hold a descending consecutive run (nothing else can ever be
# flushed out).  `is_sortable_unpruned` explores the raw move graph and is
# compared against these searches by the test suite.
# ---------------------------------------------------------------------------


def _solve_s(p: tuple[int, ...], rec: Optional[list[Move]]) -> bool:
    n = len(p)
    stack: list[int] = []
    nn = 1
    i = 0
    while nn <= n:
        if stack and stack[-1] == nn:
            stack.pop()
            nn += 1
            if rec is not None:
                rec.append(Move.OUTPUT)
        elif i < n and (not stack or p[i] < stack[-1]):
            stack.append(p[i])
            i += 1
            if rec is not None:
                rec.append(Move.INPUT)
        else:
            return False
    return True


def _solve_ps(p: tuple[int, ...], rec: Optional[list[Move]]) -> bool:
    n = len(p)
    failed: set[tuple] = set()

    def dfs(i: int, j: int, stack: tuple[int, ...], nn: int) -> bool:
        # pop stack = p[j:i], oldest first
        outs = 0
        while stack and stack[-1] == nn:
            stack = stack[:-1]
            nn += 1
            outs += 1
        if rec is not None and outs:
            rec.extend((Move.OUTPUT,) * outs)
        if nn > n:
            return True
        key = (i, j, stack, nn)
        if key in failed:
            return False
        mark = len(rec) if rec is not None else 0
        if i < n and (j == i or p[i] > p[i - 1]):
            if rec is not None:
                rec.append(Move.INPUT)
            if dfs(i + 1, j, stack, nn):
                return True
            if rec is not None:
                del rec[mark:]
        if j < i and (not stack or p[i - 1] < stack[-1]):
            if rec is not None:
                rec.append(Move.FLUSH_POP)
            if dfs(i, i, stack + p[j:i][::-1], nn):
                return True
            if rec is not None:
                del rec[mark:]
        failed.add(key)
        return False

    return dfs(0, 0, (), 1)


def _solve_pqs(p: tuple[int, ...], rec: Optional[list[Move]]) -> bool:
    # The stack only receives entries from the queue front, so while the
    # queue is nonempty nothing else can touch the stack: a legal dequeue
    # commutes with any input/flush and may be taken at once, and a blocked
    # one (front above the stack top) can never unblock.  Each flush is
    # therefore followed by draining the whole queue through the stack,
    # interleaved with the forced outputs, and the queue is empty at every
    # branch point.
    n = len(p)
    failed: set[tuple] = set()

    def dfs(i: int, j: int, stack: tuple[int, ...], nn: int) -> bool:
        # pop stack = p[j:i], oldest first; queue empty
        if nn > n:
            return True
        key = (i, j, stack, nn)
        if key in failed:
            return False
        mark = len(rec) if rec is not None else 0
        if i < n:
            if rec is not None:
                rec.append(Move.INPUT)
            if dfs(i + 1, j, stack, nn):
                return True
            if rec is not None:
                del rec[mark:]
        if j < i:
            st = stack
            nn2 = nn
            alive = True
            drain: list[Move] | None = [Move.FLUSH_POP] if rec is not None else None
            for t in range(i - 1, j - 1, -1):
                x = p[t]
                if st and x > st[-1]:
                    alive = False
                    break
                st = st + (x,)
                if drain is not None:
                    drain.append(Move.DEQUEUE)
                while st and st[-1] == nn2:
                    st = st[:-1]
                    nn2 += 1
                    if drain is not None:
                        drain.append(Move.OUTPUT)
            if alive:
                if rec is not None:
                    rec.extend(drain)
                if dfs(i, i, st, nn2):
                    return True
                if rec is not None:
                    del rec[mark:]
        failed.add(key)
        return False

    return dfs(0, 0, (), 1)


def _solve_sp(p: tuple[int, ...], rec: Optional[list[Move]]) -> bool:
    n = len(p)
    failed: set[tuple] = set()

    def dfs(i: int, stack: tuple[int, ...], pop: tuple[int, ...], nn: int) -> bool:
        # pop is kept a descending consecutive run, oldest (largest) first
        if pop and pop[-1] == nn:
            nn += len(pop)
            pop = ()
            if rec is not None:
                rec.append(Move.FLUSH_OUTPUT)
        if nn > n:
            return True
        key = (i, stack, pop, nn)
        if key in failed:
            return False
        mark = len(rec) if rec is not None else 0
        if i < n:
            if rec is not None:
                rec.append(Move.INPUT)
            if dfs(i + 1, stack + (p[i],), pop, nn):
                return True
            if rec is not None:
                del rec[mark:]
        if stack and (not pop or stack[-1] == pop[-1] - 1):
            if rec is not None:
                rec.append(Move.PUSH_ONE)
            if dfs(i, stack[:-1], pop + (stack[-1],), nn):
                return True
            if rec is not None:
                del rec[mark:]
        failed.add(key)
        return False

    return dfs(0, (), (), 1)


def _solve_sqp(p: tuple[int, ...], rec: Optional[list[Move]]) -> bool:
    n = len(p)
    failed: set[tuple] = set()

    def dfs(i: int, stack: tuple[int, ...], flow: tuple[int, ...], d: int,
            pop: tuple[int, ...], nn: int) -> bool:
        # queue = flow[d:]
        if pop and pop[-1] == nn:
            nn += len(pop)
            pop = ()
            if rec is not None:
                rec.append(Move.FLUSH_OUTPUT)
        if nn > n:
            return True
        key = (i, stack, flow, d, pop, nn)
        if key in failed:
            return False
        mark = len(rec) if rec is not None else 0
        if i < n:
            if rec is not None:
                rec.append(Move.INPUT)
            if dfs(i + 1, stack + (p[i],), flow, d, pop, nn):
                return True
            if rec is not None:
                del rec[mark:]
        if stack:
            if rec is not None:
                rec.append(Move.PUSH_ONE)
            if dfs(i, stack[:-1], flow + (stack[-1],), d, pop, nn):
                return True
            if rec is not None:
                del rec[mark:]
        if d < len(flow) and (not pop or flow[d] == pop[-1] - 1):
            if rec is not None:
                rec.append(Move.DEQUEUE)
            if dfs(i, stack, flow, d + 1, pop + (flow[d],), nn):
                return True
            if rec is not None:
                del rec[mark:]
        failed.add(key)
        return False

    return dfs(0, (), (), 0, (), 1)


def _solve_di(p: tuple[int, ...], rec: Optional[list[Move]]) -> bool:
    n = len(p)
    failed: set[tuple] = set()

    def dfs(i: int, first: tuple[int, ...], second: tuple[int, ...], nn: int) -> bool:
        outs = 0
        while second and second[-1] == nn:
            second = second[:-1]
            nn += 1
            outs += 1
        if rec is not None and outs:
            rec.extend((Move.OUTPUT,) * outs)
        if nn > n:
            return True
        key = (i, first, second, nn)
        if key in failed:
            return False
        mark = len(rec) if rec is not None else 0
        if i < n and (not first or p[i] > first[-1]):
            if rec is not None:
                rec.append(Move.INPUT)
            if dfs(i + 1, first + (p[i],), second, nn):
                return True
            if rec is not None:
                del rec[mark:]
        if first and (not second or first[-1] < second[-1]):
            if rec is not None:
                rec.append(Move.PUSH_ONE)
            if dfs(i, first[:-1], second + (first[-1],), nn):
                return True
            if rec is not None:
                del rec[mark:]
        failed.add(key)
        return False

    return dfs(0, (), (), 1)


_SOLVERS = {
    MachineKind.S: _solve_s,
    MachineKind.PS: _solve_ps,
    MachineKind.PQS: _solve_pqs,
    MachineKind.SP: _solve_sp,
    MachineKind.SQP: _solve_sqp,
    MachineKind.DI: _solve_di,
}


def is_sortable(kind: MachineKind, p: Permutation) -> bool:
    """True iff some move sequence of the machine outputs 1, ..., n."""
    return _SOLVERS[kind](p.values, None)


def sorting_witness(kind: MachineKind, p: Permutation) -> Optional[list[Move]]:
    """A move sequence sorting p, or None; present iff `is_sortable`."""
    rec: list[Move] = []
    return rec if _SOLVERS[kind](p.values, rec) else None


def replay(kind: MachineKind, p: Permutation, moves: Iterable[Move]) -> Permutation:
    """Run a move sequence and return what was output, as a permutation.

    Raises IllegalMoveError (with the 1-based step) on the first move that
    is not legal in the state it is applied to.
    """
    machine = Machine(kind, p)
    state = machine.initial_state()
    emitted: list[int] = []
    for step, move in enumerate(moves, start=1):
        before = state
        try:
            state = machine.apply_move(state, move)
        except IllegalMoveError:
            raise IllegalMoveError(move, before, step) from None
        if move is Move.OUTPUT:
            emitted.append(before.stack[-1])
        elif move is Move.FLUSH_OUTPUT:
            emitted.extend(before.pop[::-1])
    return Permutation(tuple(emitted))


def is_sortable_unpruned(kind: MachineKind, p: Permutation) -> bool:
    """Exhaustive search over the raw move graph (reference implementation)."""
    machine = Machine(kind, p)
    start = machine.initial_state()
    seen = {start}
    todo = [start]
    while todo:
        state = todo.pop()
        if machine.is_sorted(state):
            return True
        for move in machine.legal_moves(state):
            nxt = machine.apply_move(state, move)
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return False


# ---------------------------------------------------------------------------
# The two non-simulation routes to PS/PQS sortability.
# ---------------------------------------------------------------------------

PS_BASIS: tuple[Permutation, ...] = (parse("2431"), parse("3142"), parse("3241"))

DIVIDED_OBSTRUCTIONS: dict[MachineKind, tuple[DividedPattern, ...]] = {
    MachineKind.PS: tuple(parse_divided(t) for t in ("21", "2|13", "2|3|1")),
    MachineKind.PQS: tuple(parse_divided(t) for t in ("132", "2|13", "32|1", "2|3|1")),
}


def is_sortable_ps_by_basis(p: Permutation) -> bool:
    """PS sortability via avoidance of the three minimal unsortable patterns."""
    return avoids(p, PS_BASIS)


def is_sortable_by_division(kind: MachineKind, p: Permutation) -> bool:
    """PS/PQS sortability via the divided-pattern characterization."""
    if kind not in DIVIDED_OBSTRUCTIONS:
        raise ValueError(f"no divided-pattern characterization for {kind.name}")
    return exists_division_avoiding(p, DIVIDED_OBSTRUCTIONS[kind]) is not None
