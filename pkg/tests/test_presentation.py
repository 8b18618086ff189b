import pytest

from quantdga.errors import PresentationSyntaxError, SemanticError
from quantdga.models import canned_model, catalog_names, isomorphic_by_renaming
from quantdga.presentation import (dga_to_text, load, parse, parse_element, print_program)

CATALOG = [n for n in catalog_names() if n != "S<n>"] + ["S3", "S4", "S6"]


def test_hopf_source_text():
    ws = load("dga S2 { gen x:2; gen y:3; d x = 0; d y = x^2; }")
    A = ws.dgas["S2"]
    assert A.degrees == (2, 3)
    assert A.d("y") == A["x"] ** 2


def test_undeclared_generator_in_differential():
    with pytest.raises(SemanticError):
        load("dga B { gen y:3; d y = x^2; }")


def test_syntax_error_reports_position():
    with pytest.raises(PresentationSyntaxError) as info:
        parse("dga A {\n  gen x 2;\n}")
    assert info.value.line == 2
    assert ":" in info.value.expected


def test_degree_mismatch_is_semantic():
    with pytest.raises(SemanticError):
        load("dga A { gen x:2; gen y:4; d y = x^2; }")


def test_nf_text_matches_catalog():
    src = """
    # nilpotent eight-manifold, truncated model
    dga NF { gen x:3; gen y:3; gen z:5; gen T:10;
             d z = x*y; d T = x*y*z; }
    """
    A = load(src).dgas["NF"]
    assert isomorphic_by_renaming(A, canned_model("NF")) is not None


@pytest.mark.parametrize("name", CATALOG)
def test_round_trip_over_catalog(name):
    text = dga_to_text(canned_model(name), name)
    prog = parse(text)
    assert parse(print_program(prog)) == prog
    B = load(text).dgas[name]
    assert isomorphic_by_renaming(B, canned_model(name)) == {
        g.name: g.name for g in B.generators}


def test_round_trip_of_mixed_program():
    src = """
    dga S { gen a:4; gen b:7; d b = a^2; }
    dga T { gen x:3; gen y:4; gen z:7 weight 2; d z = y^2; }
    morphism f : S -> T { a -> y; b -> z; }
    homotopy H : S -> T { a -> y - 1/2 * x*dt; b -> z + x*y*t; }
    ledger L : T { x = 3; y = 4; z = 8; dt = 1; }
    complex K { 0 1 2; 1 2 3; A { 0 1; } }
    """
    prog = parse(src)
    assert parse(print_program(prog)) == prog
    ws = load(src)
    assert ws.homotopies["H"].is_chain_map()
    assert ws.ledgers["L"].weights["z"] == 8
    assert (0, 1) in ws.complexes["K"].A


def test_parse_element_with_symbol_names():
    from quantdga.periods import model_periods
    r = model_periods(canned_model("S2"), 3)
    alg = r.extension.algebra
    y = parse_element(alg, "-1 * w^x ^ c(w^x)")
    assert y == r.integrands["y"]
    assert parse_element(alg, "(w^x)^2") == alg.zero()


def test_reserved_names():
    with pytest.raises(SemanticError):
        load("dga A { gen t:2; }")
