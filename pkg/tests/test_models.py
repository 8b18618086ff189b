from fractions import Fraction

import pytest

from quantdga.algebra import Generator, cohomology_dims, make_free_cdga
from quantdga.errors import (DegreeMismatch, InvalidGrading, NotClosed, UnknownModel)
from quantdga.models import (HirschExtension, SymbolicScaling, apply_grading_automorphism,
                             canned_model, detect_positive_weights, hirsch_extend,
                             hurewicz_image, isomorphic_by_renaming, minimal_model_of,
                             predict_distortion_exponent, sphere_model, split_grading,
                             weight_filtration, WeightGrading)


def test_sphere_models():
    assert sphere_model(3).degrees == (3,)
    S4 = sphere_model(4)
    assert S4.degrees == (4, 7) and S4.d("b") == S4["a"] ** 2
    with pytest.raises(UnknownModel):
        sphere_model(1)
    with pytest.raises(UnknownModel):
        canned_model("K3")


def test_catalog_entries():
    NF = canned_model("NF")
    assert NF.degrees == (3, 3, 5, 10)
    assert NF.d("T") == NF["x"] * NF["y"] * NF["z"]
    R = canned_model("EpsTarget")
    assert R.d("z") == R["y"] ** 2
    assert all(canned_model(n).minimal for n in ("S2", "S3vS3", "NF", "CP2"))


@pytest.mark.parametrize("source,expected", [
    (make_free_cdga([("x", 2)], top_degree=2), "S2"),
    (make_free_cdga([("x", 2), ("y", 3), ("u", 4), ("v", 3)], {"y": "x^2", "v": "u"}), "S2"),
    (make_free_cdga([("a", 4)], top_degree=4), "S4"),
    (make_free_cdga([("x", 2)], top_degree=4), "CP2"),
])
def test_minimal_model_recovers_catalog(source, expected):
    M, f = minimal_model_of(source, 9)
    assert M.minimal
    assert isomorphic_by_renaming(M, canned_model(expected)) is not None
    assert f.is_chain_map()
    assert cohomology_dims(M, 9) == cohomology_dims(source, 9)


def test_minimal_model_of_wedge_has_whitehead_generators():
    A = make_free_cdga([("a", 3), ("b", 3)], top_degree=3)
    M, _ = minimal_model_of(A, 7)
    by_deg = [g.degree for g in M.generators]
    # two classes in degree 3, one product killer in 5, two in 7
    assert by_deg == [3, 3, 5, 7, 7]
    assert isomorphic_by_renaming(M, canned_model("S3vS3")) is not None


def test_hirsch_extension_checks():
    S3 = sphere_model(3)
    A = hirsch_extend(S3, HirschExtension([Generator("e", 5)], {"e": 0}))
    assert A.degrees == (3, 5)
    B = canned_model("S2")
    with pytest.raises(NotClosed):
        hirsch_extend(B, HirschExtension([Generator("z", 4)], {"z": "x*y"}))
    with pytest.raises(DegreeMismatch):
        hirsch_extend(B, HirschExtension([Generator("p", 3), Generator("q", 5)], {}))


def test_detected_weights():
    S2 = canned_model("S2")
    assert detect_positive_weights(S2) == {"x": 1, "y": 2}
    assert detect_positive_weights(canned_model("NF")) == {"x": 1, "y": 1, "z": 2, "T": 4}
    # a doubled grading is valid as well
    assert WeightGrading({"x": 2, "y": 4}).is_valid(S2)


def test_no_positive_weights_when_differentials_loop():
    A = make_free_cdga([("e", 1), ("p", 4), ("q", 4)], {"p": "e*q", "q": "e*p"})
    assert detect_positive_weights(A) is None


def test_split_grading_for_sphere():
    S2 = canned_model("S2")
    # x in W0 with weight 2, y in W1 with weight 4
    assert split_grading(S2, ["x"], ["y"]) == {"x": 2, "y": 4}
    with pytest.raises(InvalidGrading):
        split_grading(S2, [], ["x", "y"])


def test_grading_automorphism_numeric_and_symbolic():
    NF = canned_model("NF")
    g = detect_positive_weights(NF)
    phi = apply_grading_automorphism(NF, g, 3)
    assert phi.is_chain_map()
    assert phi.images["T"] == NF["T"].scale(81)
    sym = apply_grading_automorphism(NF, g, "L")
    assert isinstance(sym, SymbolicScaling)
    assert sym.at(Fraction(1, 2)).is_chain_map()
    with pytest.raises(InvalidGrading):
        apply_grading_automorphism(NF, {"x": 1, "y": 1, "z": 1, "T": 1}, 2)


def test_weight_filtration_levels():
    F = weight_filtration(canned_model("NF"))
    assert [F.level_of(n) for n in ("x", "y", "z", "T")] == [1, 1, 2, 3]
    assert F.depth == 3


def test_hurewicz_image():
    assert hurewicz_image(canned_model("S2"), 2) == [{"x": 1}]
    assert hurewicz_image(canned_model("S2"), 3) == []
    assert len(hurewicz_image(canned_model("S3vS3"), 3)) == 2


@pytest.mark.parametrize("model,n,gen,expected", [
    ("S2", 2, "x", Fraction(1, 2)),
    ("S2", 3, "y", Fraction(1, 4)),
    ("NF", 10, "T", Fraction(1, 11)),
    ("S3vS3", 3, "x1", Fraction(1, 3)),
    ("S3vS3", 7, "z1", Fraction(1, 8)),
])
def test_distortion_exponents(model, n, gen, expected):
    assert predict_distortion_exponent(canned_model(model), n, gen) == expected


def test_distortion_rejects_wrong_degree():
    with pytest.raises(DegreeMismatch):
        predict_distortion_exponent(canned_model("S2"), 3, "x")
