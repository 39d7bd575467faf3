import pytest
from hypothesis import given
from hypothesis import strategies as st

from chshgen.funcs import (
    AND,
    EMBEDDED_XOR,
    OR,
    XNOR,
    XOR,
    TruthTable2,
    TruthTable3,
    all_tables2,
    enumerate_f2,
    enumerate_g3,
    eval2,
    eval3,
    ones_count,
    restrict_g3,
    table_for_dim,
)


def test_enumeration_sizes_and_order():
    fs, gs = enumerate_f2(), enumerate_g3()
    assert len(fs) == 14 and len(gs) == 510 and len(all_tables2()) == 16
    assert [f.code for f in fs] == list(range(1, 15))
    assert gs[0].code == 1 and gs[-1].code == 510
    assert not any(f.is_constant for f in fs + gs)


@pytest.mark.parametrize("table,code", [(AND, 1), (XOR, 6), (XNOR, 9), (OR, 7)])
def test_codes_are_msb_first(table, code):
    assert table.code == code
    assert TruthTable2.from_code(code) == table


def test_lexicographic_evaluation():
    assert [AND(x, y) for x in (0, 1) for y in (0, 1)] == [0, 0, 0, 1]
    assert [EMBEDDED_XOR(a, b) for a in range(3) for b in range(3)] == [0, 1, 1, 1, 0, 1, 1, 1, 0]


def test_embedded_xor_restricts_to_xor():
    assert restrict_g3(EMBEDDED_XOR) == XOR


def test_restriction_drops_index_two():
    g = TruthTable3((1, 0, 1, 0, 1, 1, 1, 1, 0))
    assert restrict_g3(g).bits == (1, 0, 0, 1)


def test_restriction_may_be_constant():
    assert restrict_g3(TruthTable3((0, 0, 1, 0, 0, 1, 1, 1, 1))).is_constant


@pytest.mark.parametrize("text,bits", [("[0,1,1,0]", (0, 1, 1, 0)), ("[ 1, 0, 0, 0 ]", (1, 0, 0, 0))])
def test_parse(text, bits):
    assert TruthTable2.parse(text).bits == bits
    assert str(TruthTable2.parse(text)) == "[" + ",".join(map(str, bits)) + "]"


@pytest.mark.parametrize("text", ["[0,1,1]", "[0,1,2,0]", "0110", "{}", "[0,1,1,0", '"x"'])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        TruthTable2.parse(text)


def test_domain_checks():
    with pytest.raises(ValueError):
        AND(2, 0)
    with pytest.raises(ValueError):
        TruthTable3.from_code(512)
    with pytest.raises(TypeError):
        eval2(EMBEDDED_XOR, 0, 0)
    with pytest.raises(TypeError):
        eval3(AND, 0, 0)
    assert eval3(EMBEDDED_XOR, 2, 2) == 0 and eval2(AND, 1, 1) == 1


@given(st.integers(0, 511))
def test_code_roundtrip_and_complement(code):
    t = TruthTable3.from_code(code)
    assert t.code == code
    assert t.complement().complement() == t
    assert ones_count(t) + ones_count(t.complement()) == 9


def test_table_for_dim():
    assert isinstance(table_for_dim(2, [0, 1, 1, 0]), TruthTable2)
    assert isinstance(table_for_dim(3, [0] * 8 + [1]), TruthTable3)
    with pytest.raises(ValueError):
        table_for_dim(4, [0])
