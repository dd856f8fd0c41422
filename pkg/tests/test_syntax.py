import pytest
from hypothesis import given, settings, strategies as st

from imp2.enumeration import sentence_unrank
from imp2.syntax import (
    Assign, Lit, Loc, Lt, Mul, ParseError, Seq, Skip, Sub, TrueB, While, parse, to_text,
)
from conftest import FACTORIAL


def test_skip():
    assert parse("skip") == Skip()
    assert to_text(Skip()) == "skip"


def test_factorial_sentence():
    loop = While(Lt(Lit(0), Loc(0)),
                 Seq(Assign(1, Mul(Loc(1), Loc(0))), Assign(0, Sub(Loc(0), Lit(1)))))
    expected = Seq(Assign(0, Lit(5)), Seq(Assign(1, Lit(1)), loop))
    assert parse(FACTORIAL) == expected


def test_printer_examples():
    assert to_text(Assign(0, Lit(5))) == "x[0] := 5"
    assert to_text(While(TrueB(), Skip())) == "(while true do skip)"


@pytest.mark.parametrize("text", [
    "x[01] := 5",
    "x[0] := 05",
    "x[0] := (1 + 2",
    "x[0] := 1 + 2",
    "(skip ; skip",
    "(while true skip)",
    "(if true then skip)",
    "x[0] := (1 < 2)",
    "(while (1 + 2) do skip)",
    "(while ((1 < 2) + true) do skip)",
    "skip skip",
    "",
    "x[-1] := 0",
    "y[0] := 1",
])
def test_rejects(text):
    with pytest.raises(ParseError):
        parse(text)


def test_error_offset():
    with pytest.raises(ParseError) as info:
        parse("x[01] := 5")
    assert info.value.offset == 2


def test_whitespace_insignificant():
    a = parse("(  x[0]:=readbit ;\n\t(while (readbit=1) do x[0] := (x[0]+1)))")
    b = parse("(x[0] := readbit ; (while (readbit = 1) do x[0] := (x[0] + 1)))")
    assert a == b


def test_nested_boolean_operands():
    s = parse("(while ((x[0] < 1) and not (readbit = (1 * x[2]))) do skip)")
    assert parse(to_text(s)) == s
    s = parse("(if (((1 + 2) = 3) or false) then skip else x[3] := 4)")
    assert parse(to_text(s)) == s


def test_roundtrip_enumerated_prefix():
    for n in range(20000):
        s = sentence_unrank(n)
        assert parse(to_text(s)) == s


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=0, max_value=10**60))
def test_roundtrip_huge_indices(n):
    s = sentence_unrank(n)
    assert parse(to_text(s)) == s


_TOKENS = ["skip", "x", "[", "]", ":=", "(", ")", ";", "while", "do", "if", "then", "else",
           "true", "false", "and", "or", "not", "readbit", "=", "<", "+", "-", "*", "0", "7"]


@settings(max_examples=500, deadline=None)
@given(st.integers(min_value=0, max_value=10**12), st.data())
def test_mutations_rejected_or_genuinely_derivable(n, data):
    tokens = to_text(sentence_unrank(n)).replace("[", " [ ").replace("]", " ] ") \
        .replace("(", " ( ").replace(")", " ) ").split()
    i = data.draw(st.integers(0, len(tokens) - 1))
    kind = data.draw(st.sampled_from(["drop", "replace", "insert"]))
    if kind == "drop":
        mutated = tokens[:i] + tokens[i + 1:]
    elif kind == "replace":
        mutated = tokens[:i] + [data.draw(st.sampled_from(_TOKENS))] + tokens[i + 1:]
    else:
        mutated = tokens[:i] + [data.draw(st.sampled_from(_TOKENS))] + tokens[i:]
    text = " ".join(mutated)
    try:
        tree = parse(text)
    except ParseError:
        return
    # accepted: the token stream must then be exactly that of the parsed tree
    printed = to_text(tree).replace("[", " [ ").replace("]", " ] ") \
        .replace("(", " ( ").replace(")", " ) ").split()
    assert printed == mutated
