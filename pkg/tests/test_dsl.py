import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unitlab.catalog import builtin_catalog, spec_order
from unitlab.dsl import BinOp, Ctor, evaluate, format_spec, parse_group_spec
from unitlab.errors import CapExceeded, SpecError


def test_direct_product_spec():
    spec = parse_group_spec("extraspecial(3,p) x cyclic(3,1)")
    assert spec == BinOp("x", Ctor("extraspecial", (3, "p")), Ctor("cyclic", (3, 1)))


def test_function_forms_match_infix():
    assert parse_group_spec("central(extraspecial(3,p), cyclic(3,2))") == parse_group_spec(
        "extraspecial(3,p) Y cyclic(3,2)"
    )
    assert parse_group_spec("direct(cyclic(3,1),cyclic(3,2))") == parse_group_spec("cyclic(3,1) x cyclic(3,2)")


def test_precedence_and_whitespace():
    spec = parse_group_spec("cyclic(3,1)x  extraspecial(3,p)Y cyclic(3,2)")
    assert spec.op == "x" and spec.right.op == "Y"
    assert parse_group_spec(" extraspecial( 3 , p^2 ) ") == Ctor("extraspecial", (3, "p2"))


@pytest.mark.parametrize(
    "text, fragment, column",
    [
        ("modular(3)", "modular takes 2 arguments, got 1", 1),
        ("foo(3,1)", "unknown constructor 'foo'", 1),
        ("cyclic(3,1) x", "expected a constructor", 14),
        ("cyclic(3,1", "expected ')'", 11),
        ("cyclic(3,1) $ cyclic(3,1)", "unexpected character '$'", 13),
        ("extraspecial(3,q)", "unknown constructor 'q'", 16),
    ],
)
def test_errors_carry_position(text, fragment, column):
    with pytest.raises(SpecError) as err:
        parse_group_spec(text)
    assert fragment in str(err.value)
    assert err.value.column == column and err.value.line == 1


def test_error_on_second_line():
    with pytest.raises(SpecError) as err:
        parse_group_spec("cyclic(3,1) x\n  bogus(1)")
    assert (err.value.line, err.value.column) == (2, 3)


def test_evaluate_respects_cap():
    with pytest.raises(CapExceeded):
        evaluate("extraspecial(5,p) Y cyclic(5,2)")
    assert evaluate("extraspecial(5,p) Y cyclic(5,2)", cap=625).order == 625


ctors = st.one_of(
    st.builds(lambda n: Ctor("cyclic", (3, n)), st.integers(1, 2)),
    st.builds(lambda n: Ctor("elem_abelian", (3, n)), st.integers(1, 2)),
    st.builds(lambda k: Ctor("extraspecial", (3, k)), st.sampled_from(["p", "p2"])),
    st.just(Ctor("modular", (3, 3))),
)
specs = st.recursive(ctors, lambda inner: st.builds(BinOp, st.sampled_from(["x", "Y"]), inner, inner), max_leaves=4)


@settings(max_examples=150, deadline=None)
@given(specs)
def test_format_round_trip(spec):
    text = format_spec(spec)
    assert parse_group_spec(text) == spec
    assert format_spec(parse_group_spec(text.replace(" ", ""))) == text


@settings(max_examples=40, deadline=None)
@given(specs)
def test_spec_order_matches_evaluation(spec):
    predicted = spec_order(spec)
    if predicted > 243:
        return
    try:
        G = evaluate(spec, cap=243)
    except Exception:
        return  # e.g. Y with a factor whose centre is not of order p
    assert G.order == predicted


def test_catalog_contract():
    p3 = builtin_catalog(3)
    labels = [e.label for e in p3]
    assert sum(e.hypotheses for e in p3) >= 6
    assert {"Ep27", "M27", "M81", "Ep27xC3", "Ep27YC9", "C3xC9", "D8"} <= set(labels)
    for e in p3:
        G = e.build()
        assert G.label == e.label
        if e.hypotheses:
            assert not G.is_abelian and G.frattini.is_cyclic and G.p == 3
    p5 = {e.label for e in builtin_catalog(5)}
    assert {"Ep125", "M125"} <= p5
    assert builtin_catalog(7) == []
    assert [e.label for e in builtin_catalog(7, cap=2401)] == ["Ep343", "M343", "M2401", "Ep343xC7", "C7xC49"]
    assert builtin_catalog(2) == []
