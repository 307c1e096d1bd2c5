from fractions import Fraction

import numpy as np
import pytest

from hodgecheck.errors import (
    BadDimension,
    DimensionMismatch,
    InputNotRankOne,
    NotIndependent,
    NotSymmetric,
)
from hodgecheck.linalg import LinSubspace, sym_dim, sym_to_vec
from hodgecheck.sampling import derive_rng, random_subspace
from hodgecheck.symmaps import (
    RationalSymMap,
    annihilator_rigidity_suite,
    check_evaluation_degeneracy,
    eval_matrix_exact,
    find_rank_ones,
    frac_det,
    frac_matrix,
    frac_nullspace,
    frac_rank,
    frac_rref,
    pencil_rank_profile,
    random_rank_k_symmap,
    random_rational_symmap,
    random_rational_vector,
    rank_locus_tangent_check,
    rational_span_to_subspace,
    tangent_direction,
    wperp,
    wperp_exact,
)


def line(g, j):
    row = np.zeros(g)
    row[j] = 1.0
    return LinSubspace(row[None, :], "V")


def test_wperp_dimensions():
    # codim c annihilator has dimension c(c+1)/2
    assert wperp(line(3, 0)).dim == 3
    full = LinSubspace(np.eye(3), "V")
    assert wperp(full).dim == 0
    trivial = LinSubspace(np.zeros((0, 3)), "V")
    assert wperp(trivial).dim == sym_dim(3)


def test_wperp_members_annihilate():
    rng = derive_rng(50, "wperp")
    for g, wdim in ((3, 1), (4, 2), (5, 3)):
        w = random_subspace(g, wdim, rng, "V")
        x = wperp(w)
        assert x.dim == (g - wdim) * (g - wdim + 1) // 2
        from hodgecheck.linalg import vec_to_sym
        for row in x.basis:
            m = vec_to_sym(row, g)
            assert np.max(np.abs(m @ w.basis.T)) < 1e-10


def test_wperp_exact_kernel():
    w_rows = [[Fraction(1), Fraction(2), Fraction(0), Fraction(-1)]]
    basis = wperp_exact(w_rows, 4)
    assert len(basis) == 6
    for m in basis:
        out = m.apply([Fraction(1), Fraction(2), Fraction(0), Fraction(-1)])
        assert all(v == 0 for v in out)


def test_rational_symmap_validation():
    with pytest.raises(NotSymmetric):
        RationalSymMap([[Fraction(0), Fraction(1)], [Fraction(0), Fraction(0)]])
    with pytest.raises(DimensionMismatch):
        RationalSymMap([[Fraction(0), Fraction(1)]])
    m = RationalSymMap([[Fraction(1), Fraction(1, 2)],
                        [Fraction(1, 2), Fraction(3)]])
    assert m.as_float()[0, 1] == 0.5
    assert not m.is_zero()


def test_frac_helpers():
    ident = frac_matrix([[1, 0], [0, 1]])
    assert frac_rank(ident) == 2
    assert frac_det(ident) == 1
    m = frac_matrix([[1, 2], [2, 4]])
    assert frac_rank(m) == 1
    assert frac_det(m) == 0
    null = frac_nullspace(m, 2)
    assert len(null) == 1
    v = null[0]
    assert m[0][0] * v[0] + m[0][1] * v[1] == 0
    rows, pivots = frac_rref(frac_matrix([[0, 1, 2], [0, 0, 3]]))
    assert pivots == [1, 2]


def test_frac_rank_matches_float_rank():
    rng = derive_rng(51, "crosscheck")
    for _ in range(10):
        a = rng.integers(-5, 6, size=(4, 2))
        b = rng.integers(-5, 6, size=(2, 4))
        prod = a @ b
        want = np.linalg.matrix_rank(prod)
        assert frac_rank(frac_matrix(prod.tolist())) == want


def test_eval_matrix_symmetry():
    # x(v)(u) = x(u)(v) for symmetric maps
    rng = derive_rng(52, "eval-sym")
    g = 4
    maps = [random_rational_symmap(g, rng) for _ in range(3)]
    u = random_rational_vector(g, rng, bound=20)
    v = random_rational_vector(g, rng, bound=20)
    ev = eval_matrix_exact(maps, v)
    eu = eval_matrix_exact(maps, u)
    for j in range(3):
        lhs = sum(ev[j][i] * u[i] for i in range(g))
        rhs = sum(eu[j][i] * v[i] for i in range(g))
        assert lhs == rhs


def test_degeneracy_annihilator_never_witnessed():
    rng = derive_rng(53, "deg")
    for g in (3, 4):
        w_rows = [random_rational_vector(g, rng, bound=9) for _ in range(g - 2)]
        basis = wperp_exact(w_rows, g)
        rep = check_evaluation_degeneracy(basis, 3, n_v_samples=30, seed=1,
                                          exact=True)
        assert rep.satisfied
        assert rep.witness is None
        rep_f = check_evaluation_degeneracy(rational_span_to_subspace(basis), 3,
                                            n_v_samples=30, seed=1, exact=False)
        assert rep_f.satisfied


def test_degeneracy_generic_space_witnessed():
    rng = derive_rng(54, "deg-gen")
    g = 3
    maps = [random_rational_symmap(g, rng) for _ in range(3)]
    rep = check_evaluation_degeneracy(maps, 3, n_v_samples=30, seed=2,
                                      exact=True)
    assert not rep.satisfied
    assert rep.witness is not None
    assert rep.witness.rank >= 3


def test_degeneracy_rank_one_case():
    # any nonzero map has vectors outside its kernel
    rng = derive_rng(55, "deg-r1")
    maps = [random_rational_symmap(3, rng)]
    rep = check_evaluation_degeneracy(maps, 1, n_v_samples=10, seed=0,
                                      exact=True)
    assert not rep.satisfied


def test_degeneracy_dimension_guard():
    rng = derive_rng(56, "deg-guard")
    maps = [random_rational_symmap(3, rng)]
    with pytest.raises(BadDimension):
        check_evaluation_degeneracy(maps, 2, n_v_samples=5, seed=0, exact=True)


def test_tangent_full_rank_always():
    rng = derive_rng(57, "tan-full")
    g = 3
    m, factors = random_rank_k_symmap(g, g, rng)
    n = random_rational_symmap(g, rng)
    res = rank_locus_tangent_check(m, n, exact=True)
    assert res.predicate_holds and res.minors_vanish and res.agree
    assert res.max_minor_derivative == 0.0


def test_tangent_explicit_two_by_two():
    e11 = RationalSymMap([[Fraction(1), Fraction(0)],
                          [Fraction(0), Fraction(0)]])
    e22 = RationalSymMap([[Fraction(0), Fraction(0)],
                          [Fraction(0), Fraction(1)]])
    off = RationalSymMap([[Fraction(0), Fraction(1)],
                          [Fraction(1), Fraction(0)]])
    bad = rank_locus_tangent_check(e11, e22, exact=True)
    assert not bad.predicate_holds
    assert bad.agree
    assert bad.max_minor_derivative > 0
    good = rank_locus_tangent_check(e11, off, exact=True)
    assert good.predicate_holds and good.minors_vanish and good.agree
    assert good.max_minor_derivative == 0.0


def test_tangent_constructed_directions_recognized():
    rng = derive_rng(58, "tan-dir")
    for g, k in ((3, 1), (3, 2), (4, 2)):
        m, factors = random_rank_k_symmap(g, k, rng)
        n = tangent_direction(factors, g, rng)
        res = rank_locus_tangent_check(m, n, exact=True)
        assert res.predicate_holds and res.agree
        res_f = rank_locus_tangent_check(m, n, exact=False)
        assert res_f.predicate_holds and res_f.agree


def test_pencil_profile():
    e11 = np.diag([1.0, 0.0])
    e22 = np.diag([0.0, 1.0])
    prof = pencil_rank_profile(e11, e22)
    assert prof.max_rank == 2
    assert prof.rank_two_achieved
    with pytest.raises(NotIndependent):
        pencil_rank_profile(e11, 2.0 * e11)
    with pytest.raises(InputNotRankOne):
        pencil_rank_profile(np.eye(2), e22)


def test_find_rank_ones_explicit():
    # maps killing e1, intersected against v = e2, leave multiples of e3 x e3
    x = wperp(line(3, 0))
    found = find_rank_ones(x, np.array([0.0, 1.0, 0.0]))
    assert found
    for m in found:
        arr = m.m
        assert np.linalg.matrix_rank(arr, tol=1e-8) == 1
        assert np.max(np.abs(arr[:2, :])) < 1e-8 * np.max(np.abs(arr))


def test_find_rank_ones_generic_empty():
    rng = derive_rng(59, "fr1")
    m = np.eye(3) + 0.1 * rng.standard_normal((3, 3))
    m = m + m.T
    x = LinSubspace.from_spanning(sym_to_vec(m)[None, :], "Sg")
    found = find_rank_ones(x, np.array([0.3, -1.0, 0.7]))
    assert found == []


def test_find_rank_ones_dimension_guard():
    # v inside W leaves the whole 3-dim annihilator, too big to search
    x = wperp(line(3, 0))
    with pytest.raises(BadDimension):
        find_rank_ones(x, np.array([1.0, 0.0, 0.0]))


def test_rigidity_suite_small():
    rep = annihilator_rigidity_suite(3, 3, trials=4, n_v_samples=20, seed=3)
    assert rep.passed
    checks = {c["name"]: c for c in rep.to_dict()["checks"]}
    assert checks["annihilator-dimension"]["passed"]
    assert checks["perturbed-witness-eps-unit"]["passed"]
    assert checks["generic-same-dim-witness"]["passed"]
    assert checks["rank-1-always-witnessed"]["passed"]
    assert checks["rank-2-always-witnessed"]["passed"]
