import random

import pytest
from hypothesis import given, settings, strategies as st

from imp2.codec import ProgramCode, decode_program, encode_program, iterate_stratum, strata
from imp2.enumeration import sentence_unrank
from imp2.interpreter import Status, compile_sentence, execute, extract_output
from imp2.syntax import Assign, Lit, Loc, Mul, Seq, Skip, TrueB, While, parse
from conftest import FACTORIAL, COUNTER
from oracles import all_bitstrings, random_sentence, reference_execute


def test_factorial_example():
    out = execute(parse(FACTORIAL), "")
    assert out.status is Status.HALTED
    assert out.output == "111001"
    assert out.memory == {1: 120}
    assert out.steps_used == 75


def test_counting_example():
    out = execute(parse(COUNTER), "1110")
    assert out.status is Status.HALTED
    assert out.memory[0] == 3
    assert out.output == "00"
    assert out.bits_consumed == 4


def test_read_past_end_example():
    out = execute(parse(COUNTER), "11")
    assert out.status is Status.READ_PAST_END
    assert out.output is None
    assert out.bits_consumed == 2


def test_extension_example():
    out = execute(Skip(), "0", threshold=10)
    assert out.status is Status.EXTENSION
    assert out.bits_consumed == 0
    assert out.output is None


def test_trivial_loop_detected():
    out = execute(While(TrueB(), Skip()), "")
    assert out.status is Status.LOOP_DETECTED


def test_growing_loop_hits_threshold():
    s = While(TrueB(), Assign(0, Mul(Loc(0), Lit(2))))
    assert execute(s, "").status is Status.LOOP_DETECTED  # 0 * 2 stays 0
    s = Seq(Assign(0, Lit(1)), s)
    out = execute(s, "", threshold=500)
    assert out.status is Status.THRESHOLD_SURPASSED
    assert out.steps_used == 501


def test_value_cap_counts_as_threshold():
    s = Seq(Assign(0, Lit(2)), While(TrueB(), Assign(0, Mul(Loc(0), Loc(0)))))
    out = execute(s, "", threshold=10**6, max_value_bits=256)
    assert out.status is Status.THRESHOLD_SURPASSED
    assert out.steps_used < 10**6


def test_extract_output_examples():
    assert extract_output({}) == ""
    assert extract_output({0: 0, 1: 120}) == "111001"
    assert extract_output({2: 1, 5: 2}) == "01"


def test_threshold_must_be_positive():
    with pytest.raises(ValueError):
        execute(Skip(), "", threshold=0)


def test_program_code_and_bits_agree():
    p = ProgramCode(1405, "01")
    a = execute(p)
    b = execute(encode_program(p))
    c = execute(sentence_unrank(1405), "01")
    assert a == b == c
    with pytest.raises(ValueError):
        execute(p, "0")


def test_compiled_code_reusable():
    code = compile_sentence(parse(COUNTER))
    assert execute(code, "00").output == ""
    assert execute(code, "10").output == "0"
    assert execute(code, "110").output == "1"
    assert execute(code, "1110").output == "00"


def _agree(s, y, threshold):
    got = execute(s, y, threshold=threshold, max_value_bits=4096)
    want = reference_execute(s, y, threshold, max_bits=4096)
    assert (got.status.value, got.steps_used, got.bits_consumed, got.output) == want


def test_matches_reference_on_random_sentences():
    rng = random.Random(11)
    for _ in range(3000):
        s = random_sentence(rng, rng.randrange(1, 6))
        y = "".join(rng.choice("01") for _ in range(rng.randrange(0, 8)))
        _agree(s, y, rng.choice([5, 40, 300, 3000]))


def test_matches_reference_on_enumerated_programs():
    for n in range(3000):
        s = sentence_unrank(n)
        for y in ("", "0", "1", "10", "011"):
            _agree(s, y, 200)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**30), st.text("01", max_size=10), st.integers(1, 400))
def test_matches_reference_on_large_indices(n, y, threshold):
    _agree(sentence_unrank(n), y, threshold)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**12), st.text("01", max_size=8))
def test_deterministic(n, y):
    s = sentence_unrank(n)
    assert execute(s, y, threshold=300) == execute(s, y, threshold=300)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**9), st.text("01", max_size=8), st.integers(1, 200), st.integers(0, 800))
def test_monotone_threshold(n, y, t, extra):
    s = sentence_unrank(n)
    lo = execute(s, y, threshold=t)
    hi = execute(s, y, threshold=t + extra)
    if lo.status is not Status.THRESHOLD_SURPASSED:
        assert hi == lo
    assert hi.bits_consumed >= lo.bits_consumed


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**9), st.text("01", max_size=10))
def test_read_discipline(n, y):
    out = execute(sentence_unrank(n), y, threshold=500)
    assert 0 <= out.bits_consumed <= len(y)
    if out.status is Status.HALTED:
        assert out.bits_consumed == len(y)
    if out.status is Status.EXTENSION:
        assert out.bits_consumed < len(y)
    if out.status is Status.READ_PAST_END:
        assert out.bits_consumed == len(y)


def test_prefix_coherence_exhaustive():
    # every halting program of code length <= 14 turns into an Extension
    # with identical memory once more input is appended
    L = 14
    checked = 0
    for s in strata(L):
        for p in iterate_stratum(s.code_length, s.prefix_length):
            out = execute(p, threshold=300)
            if out.status is not Status.HALTED:
                continue
            checked += 1
            room = L - s.code_length
            sent = sentence_unrank(p.sentence_index)
            for z in all_bitstrings(min(room, 3))[1:]:
                ext = execute(sent, p.input + z, threshold=300)
                assert ext.status is Status.EXTENSION
                assert ext.bits_consumed == out.bits_consumed
                assert ext.memory == out.memory
    assert checked > 0


def test_halting_programs_prefix_free():
    halted = []
    for s in strata(14):
        for p in iterate_stratum(s.code_length, s.prefix_length):
            if execute(p, threshold=300).status is Status.HALTED:
                halted.append(encode_program(p))
    hs = set(halted)
    for b in halted:
        for i in range(1, len(b)):
            assert b[:i] not in hs
    assert all(decode_program(b) for b in halted)
