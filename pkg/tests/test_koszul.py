"""Exterior/polynomial Koszul duality: pairs, Loewy lengths, level
duality, Ext tables."""

import pytest

from dgkoszul.gradedcomplex import DegreeWindow, StructureError, check_d_squared
from dgkoszul.dgstruct import (
    exterior_algebra,
    polynomial_algebra,
    trivial_module,
    truncated_module,
    validate_comodule,
    validate_module,
)
from dgkoszul.koszul import (
    chain_loewy_length,
    cobar_polynomial_check,
    eta,
    ext_algebra,
    exterior_tor_check,
    koszul_L,
    koszul_R,
    koszul_pair_check,
    level_duality_check,
    loewy_length,
    make_koszul_pair,
)


@pytest.fixture(scope="module")
def pair2(F5, window):
    return make_koszul_pair(F5, window, [2])


def test_make_pair_validates(F5, window, pair2):
    assert pair2.algebra.space.deg("y1") == 2
    assert pair2.coalgebra.space.deg("sy1") == 1
    p22 = make_koszul_pair(F5, window, [2, 2])
    assert p22.coalgebra.space.deg("sy2") == 1


def test_make_pair_rejects_odd_or_negative(F5, window):
    for degs in ([3], [-2], [0], [2, 3]):
        with pytest.raises(StructureError):
            make_koszul_pair(F5, window, degs)


def test_R_of_free_module_acyclic(F5, window, pair2):
    from dgkoszul.dgstruct import free_module
    from dgkoszul.gradedcomplex import homology
    r = koszul_R(pair2, free_module(pair2.algebra))
    assert validate_comodule(r).ok
    cx = r.carrier
    dims = {}
    for n in cx.space.degrees():
        if (cx.space.complete_at(n - 1) and cx.space.complete_at(n)
                and cx.space.complete_at(n + 1)):
            h = homology(cx, n)
            if h.dimension:
                dims[n] = h.dimension
    assert dims == {0: 1}


def test_L_valid_module(F5, window, pair2):
    from dgkoszul.dgstruct import trivial_comodule
    m = koszul_L(pair2, trivial_comodule(pair2.coalgebra))
    assert m.side == "right"
    assert check_d_squared(m.carrier)


def test_eta_loewy_lengths(F5, window, pair2):
    sv = pair2.algebra
    # η(K): homology K ⊕ ΣK with a nontrivial action, Loewy length 2
    n_free = eta(pair2, trivial_module(sv))
    lw = loewy_length(n_free)
    assert lw["length"] == 2
    assert lw["homology_dims"] == {0: 1, 1: 1}
    # η(SV) ≃ K: one class, Loewy length 1
    from dgkoszul.dgstruct import free_module
    n_sv = eta(pair2, free_module(sv))
    lw2 = loewy_length(n_sv)
    assert lw2["length"] == 1
    assert lw2["homology_dims"] == {0: 1}
    assert chain_loewy_length(n_free) >= lw["length"]


def test_level_duality_values(F5, window, pair2):
    sv = pair2.algebra
    from dgkoszul.dgstruct import free_module
    # level^{SV}(SV) = 1
    r1 = level_duality_check(pair2, free_module(sv))
    assert r1["value"] == 1
    assert r1["intervals_intersect"]
    assert r1.get("eta_trivial_qiso") is True
    # level^{SV}(K) = 2
    r2 = level_duality_check(pair2, trivial_module(sv))
    assert r2["value"] == 2
    assert r2["side_a"]["class"] == 2 and r2["side_a"]["exhausted"]
    assert r2["side_b"]["lower"] == 2 and r2["side_b"]["upper"] == 2
    # level^{SV}(SV/(y^2)) = 2
    r3 = level_duality_check(pair2, truncated_module(sv, "y1", 2, 2))
    assert r3["value"] == 2
    assert r3["intervals_intersect"]


def test_ext_algebra_of_poly(F5, window):
    a = polynomial_algebra(F5, window, [("y", 2)])
    r = ext_algebra(a, window)
    assert r["dims"] == {-1: 1, 0: 1}
    # the exterior generator squares to zero
    sq = r["products"].get(((-1, 0), (-1, 0)))
    assert sq == {}


def test_ext_algebra_of_exterior_is_polynomial(F5, window):
    e = exterior_algebra(F5, window, [("x", -3)])
    r = ext_algebra(e, window)
    assert r["dims"] == {0: 1, 4: 1, 8: 1, 12: 1}
    prod = r["products"][((4, 0), (4, 0))]
    assert list(prod) == [(8, 0)] and not F5.is_zero(prod[(8, 0)])
    prod2 = r["products"][((4, 0), (8, 0))]
    assert list(prod2) == [(12, 0)]


@pytest.mark.parametrize("fieldname", ["F2", "Q"])
def test_exterior_tor_check_one_var(request, window, fieldname):
    f = request.getfixturevalue(fieldname)
    r = exterior_tor_check(f, [-3], window)
    assert r["ok"], r
    assert {n: v for n, v in r["dims"].items() if v} \
        == {0: 1, -4: 1, -8: 1, -12: 1}


def test_exterior_tor_check_two_vars(F5, window):
    assert exterior_tor_check(F5, [-3, -5], window)["ok"]


@pytest.mark.parametrize("fieldname", ["F2", "Q"])
def test_cobar_polynomial_check_one_var(request, window, fieldname):
    f = request.getfixturevalue(fieldname)
    r = cobar_polynomial_check(f, [-3], window)
    assert r["ok"], r
    assert {n: v for n, v in r["dims"].items() if v} \
        == {0: 1, 4: 1, 8: 1, 12: 1}


def test_cobar_polynomial_check_two_vars(F5, window):
    r = cobar_polynomial_check(F5, [-3, -3], window)
    assert r["ok"], r
    assert {n: v for n, v in r["dims"].items() if v} \
        == {0: 1, 4: 2, 8: 3, 12: 4}
    assert r["commutators_bound"]


def test_koszul_pair_check_two_sided(F5, window, pair2):
    r = koszul_pair_check(pair2, window)
    assert r["ok"] and r["tau_ok"] and r["two_sided"]["ok"]


def test_koszul_pair_check_rank_two(F5, window):
    p = make_koszul_pair(F5, window, [2, 2])
    r = koszul_pair_check(p, window)
    assert r["ok"]
