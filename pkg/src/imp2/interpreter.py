"""Resource-bounded IMP2 execution.

Sentences are compiled to a flat stack code whose only interaction with the
outside world is the ``READ`` instruction.  :func:`run_segment` executes
until the program terminates, needs an input bit, repeats a configuration
at a loop guard, or exceeds its step budget; :func:`execute` drives it over
a concrete input stream.

Step accounting: one step per statement dispatch (a ``while`` is
dispatched once per guard evaluation) and one per expression node.
Evaluation is strict left to right with no short-circuiting; subtraction
is truncated at zero.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Union

from .codec import ProgramCode, binstring_unrank, decode_program
from .enumeration import sentence_unrank
from .syntax import (
    Add, And, Assign, Eq, FalseB, If, Lit, Loc, Lt, Mul, Not, Or, ReadBit,
    Seq, Skip, Sub, TrueB, While,
)

__all__ = [
    "Status", "ExecOutcome", "Code", "compile_sentence", "run_segment",
    "execute", "extract_output", "DEFAULT_MAX_VALUE_BITS",
    "EV_HALT", "EV_READ", "EV_LOOP", "EV_LIMIT",
]


class Status(str, enum.Enum):
    HALTED = "Halted"
    EXTENSION = "Extension"
    READ_PAST_END = "ReadPastEnd"
    LOOP_DETECTED = "LoopDetected"
    THRESHOLD_SURPASSED = "ThresholdSurpassed"

    def __str__(self) -> str:
        return self.value


# Values wider than this are treated as exhausting the resource budget.
# Repeated squaring doubles bit length per iteration, so without a cap a
# handful of loop iterations can exhaust host memory.
DEFAULT_MAX_VALUE_BITS = 1 << 20

# opcodes
(NOP, LIT, LOAD, READ, ADD, SUB, MUL, TRUE, FALSE, EQ, LT, AND, OR, NOT,
 STORE, JIF, JMP, GUARD) = range(18)

# segment events
EV_HALT, EV_READ, EV_LOOP, EV_LIMIT = "halt", "read", "loop", "limit"


@dataclass
class Code:
    ops: list = field(default_factory=list)
    args: list = field(default_factory=list)
    costs: list = field(default_factory=list)

    def emit(self, op: int, arg=None, cost: int = 0) -> int:
        self.ops.append(op)
        self.args.append(arg)
        self.costs.append(cost)
        return len(self.ops) - 1

    def __len__(self) -> int:
        return len(self.ops)


_ARITH = {Add: ADD, Sub: SUB, Mul: MUL}
_CMP = {Eq: EQ, Lt: LT, And: AND, Or: OR}


def _expr(code: Code, e, entry: int) -> None:
    t = type(e)
    if t is Lit:
        code.emit(LIT, e.n, entry + 1)
    elif t is Loc:
        code.emit(LOAD, e.index, entry + 1)
    elif t is ReadBit:
        code.emit(READ, None, entry + 1)
    elif t is TrueB:
        code.emit(TRUE, None, entry + 1)
    elif t is FalseB:
        code.emit(FALSE, None, entry + 1)
    elif t is Not:
        _expr(code, e.e, entry)
        code.emit(NOT, None, 1)
    elif t in _ARITH or t in _CMP:
        _expr(code, e.l, entry)
        _expr(code, e.r, 0)
        code.emit(_ARITH.get(t) or _CMP[t], None, 1)
    else:
        raise TypeError(f"not an IMP2 expression: {e!r}")


def _stmt(code: Code, s, entry: int) -> None:
    # ``entry`` is the dispatch cost of enclosing statements that start
    # here; it is folded into the first instruction unless that instruction
    # is a loop head, which is re-entered on every iteration.
    t = type(s)
    if t is Skip:
        code.emit(NOP, None, entry + 1)
    elif t is Assign:
        _expr(code, s.expr, entry)
        code.emit(STORE, s.location, 1)
    elif t is Seq:
        _stmt(code, s.first, entry + 1)
        _stmt(code, s.second, 0)
    elif t is If:
        _expr(code, s.cond, entry + 1)
        jif = code.emit(JIF)
        _stmt(code, s.then_branch, 0)
        jmp = code.emit(JMP)
        code.args[jif] = len(code)
        _stmt(code, s.else_branch, 0)
        code.args[jmp] = len(code)
    elif t is While:
        if entry:
            code.emit(NOP, None, entry)
        head = code.emit(GUARD)
        _expr(code, s.cond, 0)
        jif = code.emit(JIF, None, 1)
        _stmt(code, s.body, 0)
        code.emit(JMP, head)
        code.args[jif] = len(code)
    else:
        raise TypeError(f"not an IMP2 sentence: {s!r}")


def compile_sentence(s) -> Code:
    code = Code()
    _stmt(code, s, 0)
    return code


def run_segment(code: Code, pc: int, stack: list, mem: dict, steps: int,
                threshold: int, max_bits: int = DEFAULT_MAX_VALUE_BITS):
    """Run from ``pc`` until an event; returns ``(event, pc, steps)``.

    ``stack`` and ``mem`` are mutated in place.  On a ``READ`` event ``pc``
    points at the read instruction, whose step is already charged; resume
    at ``pc + 1`` after pushing the bit.  Guard configurations are only
    compared within one segment: every read advances the input cursor, so a
    configuration seen before a read can never recur after it.
    """
    ops, args, costs = code.ops, code.args, code.costs
    end = len(ops)
    seen = set()
    push = stack.append
    pop = stack.pop
    while pc < end:
        steps += costs[pc]
        if steps > threshold:
            # folded costs may overshoot; report the first step past the budget
            return EV_LIMIT, pc, threshold + 1
        op = ops[pc]
        if op == LOAD:
            push(mem.get(args[pc], 0))
        elif op == LIT:
            push(args[pc])
        elif op == STORE:
            v = pop()
            if v:
                mem[args[pc]] = v
            else:
                mem.pop(args[pc], None)
        elif op == JIF:
            if not pop():
                pc = args[pc]
                continue
        elif op == JMP:
            pc = args[pc]
            continue
        elif op == GUARD:
            key = (pc, frozenset(mem.items()))
            if key in seen:
                return EV_LOOP, pc, steps
            seen.add(key)
        elif op == ADD:
            b = pop()
            stack[-1] += b
        elif op == SUB:
            b = pop()
            a = stack[-1]
            stack[-1] = a - b if a > b else 0
        elif op == MUL:
            b = pop()
            v = stack[-1] * b
            stack[-1] = v
            if v.bit_length() > max_bits:
                return EV_LIMIT, pc, steps
        elif op == READ:
            return EV_READ, pc, steps
        elif op == EQ:
            b = pop()
            stack[-1] = stack[-1] == b
        elif op == LT:
            b = pop()
            stack[-1] = stack[-1] < b
        elif op == AND:
            b = pop()
            stack[-1] = stack[-1] and b
        elif op == OR:
            b = pop()
            stack[-1] = stack[-1] or b
        elif op == NOT:
            stack[-1] = not stack[-1]
        elif op == TRUE:
            push(True)
        elif op == FALSE:
            push(False)
        # NOP: cost only
        pc += 1
    return EV_HALT, pc, steps


def extract_output(memory: dict) -> str:
    """Concatenate the binary strings of all memory values by location."""
    return "".join(binstring_unrank(memory[i]) for i in sorted(memory) if memory[i])


@dataclass
class ExecOutcome:
    status: Status
    steps_used: int
    bits_consumed: int
    output: Optional[str] = None
    memory: Optional[dict] = None

    @property
    def halted(self) -> bool:
        return self.status is Status.HALTED


def execute(program: Union[ProgramCode, str, object], input_bits: Optional[str] = None,
            threshold: int = 10**6, max_value_bits: int = DEFAULT_MAX_VALUE_BITS) -> ExecOutcome:
    """Run one program on its input stream.

    ``program`` is a :class:`ProgramCode`, a program bit string, a sentence
    AST, or compiled :class:`Code`.  ``input_bits`` is only given together
    with a sentence or compiled code.
    """
    if threshold < 1:
        raise ValueError("threshold must be at least 1")
    if isinstance(program, str):
        program = decode_program(program)
    if isinstance(program, ProgramCode):
        if input_bits is not None:
            raise ValueError("a ProgramCode already carries its input")
        input_bits = program.input
        program = sentence_unrank(program.sentence_index)
    code = program if isinstance(program, Code) else compile_sentence(program)
    y = input_bits or ""
    stack: list = []
    mem: dict = {}
    pc = steps = cursor = 0
    while True:
        event, pc, steps = run_segment(code, pc, stack, mem, steps, threshold, max_value_bits)
        if event == EV_READ:
            if cursor == len(y):
                return ExecOutcome(Status.READ_PAST_END, steps, cursor)
            stack.append(1 if y[cursor] == "1" else 0)
            cursor += 1
            pc += 1
        elif event == EV_HALT:
            if cursor == len(y):
                return ExecOutcome(Status.HALTED, steps, cursor, extract_output(mem), mem)
            return ExecOutcome(Status.EXTENSION, steps, cursor, None, mem)
        elif event == EV_LOOP:
            return ExecOutcome(Status.LOOP_DETECTED, steps, cursor)
        else:
            return ExecOutcome(Status.THRESHOLD_SURPASSED, steps, cursor)
