from pathlib import Path

import pytest

from cleftgp.exactla import Field
from cleftgp.fileformat import (
    ParseError,
    SemanticError,
    format_algebra,
    format_field,
    format_module,
    load,
    parse,
)

from helpers import dual_numbers, truncated_cubic, upper_triangular

CORPUS = Path(__file__).resolve().parents[1] / "src" / "cleftgp" / "corpus"

K = """field 7
algebra k dim 1
  unit 1
  prod 0 0 = 1
end
"""


def test_empty_file():
    doc = parse("")
    assert doc.blocks == [] and doc.field == Field(7)


def test_comments_and_blank_lines():
    doc = parse("# nothing\n\n" + K + "   # trailing\n")
    assert list(doc.algebras) == ["k"]


def test_rational_field_and_fractions():
    doc = parse(K.replace("field 7", "field rational") + "module X over k dim 1\n  act 0 = 1/1\nend\n")
    assert doc.field.is_rational
    assert doc.modules["X"].dim == 1


def test_fraction_reduced_mod_p():
    doc = parse(K + "bimodule M left k right k dim 1\nend\ntheta th on M = 1/2\n" )
    assert doc.thetas["th"].theta.entry(0, 0) == 4


def test_field_override():
    doc = parse(K, Field(11))
    assert doc.field == Field(11)


def test_unknown_keyword_position():
    with pytest.raises(ParseError) as e:
        parse("field 7\n  bogus 1\n")
    assert (e.value.line, e.value.col) == (2, 3)


def test_unclosed_block():
    with pytest.raises(ParseError) as e:
        parse("field 7\nalgebra k dim 1\n  unit 1\n")
    assert e.value.line == 2


def test_wrong_row_length():
    with pytest.raises(ParseError) as e:
        parse(K + "module X over k dim 2\n  act 0 = 1 0 ; 0\nend\n")
    assert e.value.line == 7 and "entries per row" in e.value.message


def test_bad_number_column():
    with pytest.raises(ParseError) as e:
        parse("field 7\nalgebra k dim 1\n  unit x\nend\n")
    assert (e.value.line, e.value.col) == (3, 8)


def test_unknown_reference():
    with pytest.raises(ParseError) as e:
        parse(K + "module X over nope dim 1\nend\n")
    assert "unknown algebra" in e.value.message and e.value.col == 15


def test_duplicate_name():
    with pytest.raises(ParseError):
        parse(K + K.replace("field 7\n", ""))


def test_composite_field_rejected():
    with pytest.raises(ParseError):
        parse("field 8\n")


def test_nonassociative_block_names_itself():
    bad = """field 7
algebra bad dim 3
  unit 1 0 0
  prod 0 0 = 1 0 0
  prod 0 1 = 0 1 0
  prod 1 0 = 0 1 0
  prod 0 2 = 0 0 1
  prod 2 0 = 0 0 1
  prod 1 1 = 0 0 1
  prod 2 1 = 1 0 0
end
"""
    with pytest.raises(SemanticError) as e:
        parse(bad)
    assert e.value.block == "bad" and "associativity" in e.value.message


def test_module_action_law_checked():
    text = """field 7
algebra D dim 2
  unit 1 0
  prod 0 0 = 1 0
  prod 0 1 = 0 1
  prod 1 0 = 0 1
end
module X over D dim 1
  act 1 = 1
end
"""
    with pytest.raises(SemanticError) as e:
        parse(text)
    assert e.value.block == "X"


def test_pair_law_checked():
    text = K + "bimodule M left k right k dim 1\nend\nextension E base k bimodule M\n" \
        "module S over k dim 1\nend\npair p over E base S\n  alpha = 1\nend\n"
    with pytest.raises(SemanticError) as e:
        parse(text)
    assert e.value.block == "p"


def test_quad_zero_law_checked():
    text = K + "bimodule M left k right k dim 1\nend\nbimodule N left k right k dim 1\nend\n" \
        "context C A k B k M M N N\nmodule S over k dim 1\nend\n" \
        "quad q over C X S Y S\n  f = 1\n  g = 1\nend\n"
    with pytest.raises(SemanticError) as e:
        parse(text)
    assert e.value.block == "q" and "zero-composition" in e.value.message


def test_modules_over_extension_rings():
    text = K + "bimodule M left k right k dim 1\nend\nextension E base k bimodule M\n" \
        "module Z over E dim 2\n  act 1 = 0 0 ; 1 0\nend\n"
    doc = parse(text)
    assert doc.modules["Z"].alg is doc.extensions["E"].t


@pytest.mark.parametrize("alg", [dual_numbers(), truncated_cubic(), upper_triangular()])
def test_algebra_roundtrip(alg):
    text = format_field(alg.field) + format_algebra(alg, "A")
    again = parse(text).algebras["A"]
    assert (again.mult == alg.mult).all() and (again.unit == alg.unit).all()


def test_module_roundtrip():
    from helpers import t2_simple
    t = upper_triangular()
    text = format_field(t.field) + format_algebra(t, "T2") + format_module(t2_simple(1), "S", "T2")
    doc = parse(text)
    assert doc.modules["S"].action[2].entry(0, 0) == 1


@pytest.mark.parametrize("path", sorted(CORPUS.glob("*.cgp")), ids=lambda p: p.stem)
def test_corpus_files_load(path):
    doc = load(path)
    assert doc.blocks and doc.expectations
