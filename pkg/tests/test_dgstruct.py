"""DG structures: preset validation, duals, the functors F and tD,
twisting cochains, primitive filtrations."""

import pytest

from dgkoszul.gradedcomplex import DegreeWindow, GradedMap
from dgkoszul.dgstruct import (
    TwistingCochain,
    cocomplete_filtration,
    comodule_over_self,
    comodule_to_module_F,
    dual_complex,
    dual_label,
    exterior_algebra,
    exterior_coalgebra,
    free_module,
    graded_dual_algebra,
    graded_dual_coalgebra,
    module_direct_sum,
    module_shift,
    polynomial_algebra,
    tD,
    trivial_algebra,
    trivial_comodule,
    trivial_module,
    truncated_module,
    truncated_polynomial_algebra,
    undual_label,
    validate_algebra,
    validate_coalgebra,
    validate_comodule,
    validate_module,
    validate_twisting_cochain,
)


@pytest.mark.parametrize("build", [
    lambda f, w: trivial_algebra(f, w),
    lambda f, w: polynomial_algebra(f, w, [("y", 2)]),
    lambda f, w: polynomial_algebra(f, w, [("y1", 2), ("y2", 4)]),
    lambda f, w: truncated_polynomial_algebra(f, w, "y", 2, 3),
    lambda f, w: exterior_algebra(f, w, [("x", -3)]),
    lambda f, w: exterior_algebra(f, w, [("x1", -3), ("x2", -5)]),
])
def test_preset_algebras_validate(F5, window, build):
    assert validate_algebra(build(F5, window)).ok


def test_polynomial_rejects_odd(F5, window):
    with pytest.raises(ValueError):
        polynomial_algebra(F5, window, [("y", 3)])


def test_exterior_rejects_even(F5, window):
    with pytest.raises(ValueError):
        exterior_algebra(F5, window, [("x", -2)])


def test_exterior_square_zero_and_sign(F5, window):
    e = exterior_algebra(F5, window, [("x1", -3), ("x2", -5)])
    assert e.mult_pair("x1", "x1") == {}
    ab = e.mult_pair("x1", "x2")
    ba = e.mult_pair("x2", "x1")
    ((l1, c1),) = ab.items()
    ((l2, c2),) = ba.items()
    assert l1 == l2
    assert c2 == F5.neg(c1)  # odd generators anticommute


def test_exterior_coalgebra_validates(F5, window):
    for gens in ([("sx", 1)], [("sx1", 1), ("sx2", 3)]):
        assert validate_coalgebra(exterior_coalgebra(F5, window, gens)).ok


def test_preset_modules_validate(F5, window):
    a = polynomial_algebra(F5, window, [("y", 2)])
    for m in (trivial_module(a), free_module(a),
              truncated_module(a, "y", 2, 3),
              module_shift(trivial_module(a), 3)):
        assert validate_module(m).ok
    s, _, _ = module_direct_sum([trivial_module(a), free_module(a)])
    assert validate_module(s).ok


def test_comodules_validate(F5, window):
    c = exterior_coalgebra(F5, window, [("sx1", 1), ("sx2", 1)])
    assert validate_comodule(comodule_over_self(c)).ok
    assert validate_comodule(trivial_comodule(c)).ok


def test_dual_labels_roundtrip():
    assert undual_label(dual_label("y^2")) == "y^2"


def test_dual_complex_squares(F5, window):
    a = exterior_algebra(F5, window, [("x", -3)])
    d = dual_complex(a.carrier)
    assert d.space.deg(dual_label("x")) == 3


def test_graded_dual_algebra_coalgebra_validate(F5, window):
    s = polynomial_algebra(F5, window, [("y", 2)])
    assert validate_coalgebra(graded_dual_algebra(s)).ok
    c = exterior_coalgebra(F5, window, [("sy", 1)])
    assert validate_algebra(graded_dual_coalgebra(c)).ok


def test_functor_F_gives_valid_module(F5, window):
    c = exterior_coalgebra(F5, window, [("sy", 1)])
    n = comodule_over_self(c)
    m = comodule_to_module_F(n)
    assert m.side == "left"
    assert validate_module(m).ok


def test_functor_tD_gives_valid_right_module(F5, window):
    c = exterior_coalgebra(F5, window, [("sy", 1)])
    m = tD(comodule_over_self(c))
    assert m.side == "right"
    assert validate_module(m).ok


def test_twisting_cochain_koszul_residual_zero(F5, window):
    s = polynomial_algebra(F5, window, [("y", 2)])
    c = exterior_coalgebra(F5, window, [("sy", 1)])
    t = TwistingCochain(c, s, GradedMap(c.space, s.space, 1,
                                        {"sy": {"y": F5.one}}))
    assert validate_twisting_cochain(t).ok


def test_twisting_cochain_bad_residual_caught(F5, window):
    from dgkoszul.barcobar import bar, canonical_tau
    a = polynomial_algebra(F5, window, [("y", 2)])
    t = canonical_tau(a, window)
    # scaling τ breaks the balance between the linear part (against the
    # bar differential) and the quadratic Maurer-Cartan term
    bad = TwistingCochain(t.source, t.target, t.map.scale(F5.from_int(2)))
    assert not validate_twisting_cochain(bad).ok


def test_cocomplete_filtration_levels(F5, window):
    c = exterior_coalgebra(F5, window, [("sx1", 1), ("sx2", 1)])
    levels = cocomplete_filtration(comodule_over_self(c), 5)
    by_label = {l: lvl for l, lvl in levels.items()}
    assert by_label["1"] == 1
    assert by_label["sx1"] == 2
    assert by_label["sx1*sx2"] == 3
