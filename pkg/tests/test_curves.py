from itertools import product

import numpy as np
import pytest

from mqsurf import _kernels
from mqsurf.curves import (
    DivisibilityError,
    UnsupportedGenusError,
    certify_over_Fp,
    ci_genus,
    curve_points_mod_p,
    diagonal_selfint,
    etale_quotient_genus,
    free_action_check,
    h0_of_dK,
    hasse_weil_ok,
    hasse_weil_window,
    normalize_point,
    reduce_coefficient,
    weierstrass_count,
    xi_on_point,
)
from mqsurf.exact import InvalidPrimeError
from mqsurf.pipeline import sample_generic_forms
from mqsurf.polynomials import build_curve_forms, parse_form

from . import oracles


def simple_curve():
    return build_curve_forms(parse_form("x0*x1", 2), parse_form("x0^3 + x1^3", 2))


@pytest.mark.parametrize("d1,d2,g", [(2, 3, 4), (2, 2, 1), (3, 3, 10), (1, 1, 0)])
def test_ci_genus(d1, d2, g):
    assert ci_genus(d1, d2) == g


def test_etale_quotient_genus():
    assert etale_quotient_genus(4, 3) == 2
    for n in (1, 2, 5):
        assert etale_quotient_genus(1, n) == 1
    assert etale_quotient_genus(5, 2) == 3
    with pytest.raises(DivisibilityError):
        etale_quotient_genus(4, 4)
    # Riemann-Hurwitz round trip
    assert 2 * ci_genus(2, 3) - 2 == 3 * (2 * etale_quotient_genus(4, 3) - 2)


def test_h0_of_dK():
    assert h0_of_dK(2, 2) == 3
    assert h0_of_dK(2, 3) == 5
    assert h0_of_dK(2, 1) == 2
    assert h0_of_dK(4, 2) == 9
    with pytest.raises(UnsupportedGenusError):
        h0_of_dK(1, 2)


def test_misc_formulas():
    assert diagonal_selfint(4) == -6
    assert weierstrass_count(2) == 6
    assert hasse_weil_window(7, 4) == (0, 29)
    for n in range(0, 40):
        assert hasse_weil_ok(n, 7, 4) == (abs(n - 8) <= 8 * 7**0.5)


def test_free_action_check():
    assert free_action_check(parse_form("x0*x1", 2), parse_form("x0^3 + x1^3", 2)).is_free
    c = free_action_check(parse_form("x0^2", 2), parse_form("x0^3", 2))
    assert (c.resultant_nonzero, c.coordinate_points_excluded) == (False, True)


def test_projective_points():
    for p in (2, 3, 7):
        pts = _kernels.projective_points(p)
        assert len(pts) == p**3 + p**2 + p + 1
        assert len({tuple(r) for r in pts}) == len(pts)
        for row in pts:
            lead = next(x for x in row if x)
            assert lead == 1


def test_xi_on_point_has_order_three():
    p, z = 13, 3
    for pt in [(1, 2, 3, 4), (0, 1, 5, 0), (0, 0, 1, 7)]:
        q = normalize_point(pt, p)
        assert xi_on_point(q, 3, p, z) == q
        assert xi_on_point(xi_on_point(q, 1, p, z), 2, p, z) == q


def _ev_mod_p(f, x, p, z):
    total = 0
    for e, c in f.terms.items():
        t = reduce_coefficient(c, p, z)
        for xi, k in zip(x, e):
            t = t * pow(xi, k, p)
        total += t
    return total % p


def bruteforce_points(v2, v3, p, z):
    """Every nonzero vector, deduplicated by scaling; plain Python evaluation."""
    found = set()
    for x in product(range(p), repeat=4):
        if any(x) and _ev_mod_p(v2, x, p, z) == 0 and _ev_mod_p(v3, x, p, z) == 0:
            found.add(normalize_point(x, p))
    return found


@pytest.mark.parametrize("backend", ["numba", "numpy", "exact"])
@pytest.mark.parametrize("p", [7, 13])
def test_backends_match_bruteforce(backend, p):
    v2, v3 = simple_curve()
    z = {7: 2, 13: 3}[p]
    pts, ranks, total = curve_points_mod_p(v2, v3, p, z, backend)
    assert total == p**3 + p**2 + p + 1
    assert set(pts) == bruteforce_points(v2, v3, p, z)
    for pt, rk in zip(pts, ranks):
        jac = [[_ev_mod_p(d, pt, p, z) for d in f.gradient()] for f in (v2, v3)]
        assert rk == oracles.rank_mod_p(jac, p)


@pytest.mark.parametrize("seed", range(4))
def test_numba_numpy_exact_agree(seed):
    r, s, _, _ = sample_generic_forms(seed)
    v2, v3 = build_curve_forms(r, s)
    certs = [certify_over_Fp(v2, v3, 13, backend=b) for b in ("numba", "numpy", "exact")]
    assert certs[0] == certs[1] == certs[2]


def test_rank_kernel_backends_agree():
    rng = np.random.Generator(np.random.PCG64(5))
    for p in (7, 13, 31):
        jac = rng.integers(0, p, size=(500, 2, 4))
        jac[::7, 1] = jac[::7, 0] * 3 % p  # force rank drops
        jac[::11] = 0
        a = _kernels.rank_2xn(jac, p, "numba")
        b = _kernels.rank_2xn(jac, p, "numpy")
        assert np.array_equal(a, b)
        for q in range(0, 500, 37):
            assert a[q] == oracles.rank_mod_p(jac[q].tolist(), p)


def test_certificate_simple_curve():
    v2, v3 = simple_curve()
    c = certify_over_Fp(v2, v3, 7)
    assert c.valid
    assert c.zeta_image == 2
    assert c.points_enumerated == 400
    assert c.points_found % 3 == 0
    assert 0 <= c.points_found <= 29
    assert c == certify_over_Fp(v2, v3, 7)  # deterministic


def test_certificate_detects_singular_point():
    # r = x0^2 has the double root [0:1] and s vanishes there
    v2, v3 = build_curve_forms(parse_form("x0^2", 2), parse_form("x0^3 + x0*x1^2", 2))
    c = certify_over_Fp(v2, v3, 7)
    assert not c.all_smooth
    assert (0, 1, 0, 0) in c.points
    assert not c.resultant_nonzero
    assert not c.valid


def test_certificate_rejects_bad_primes():
    v2, v3 = simple_curve()
    for p in (5, 9, 11):
        with pytest.raises(InvalidPrimeError):
            certify_over_Fp(v2, v3, p)


@pytest.mark.parametrize("seed", range(10))
def test_valid_certificates_have_orbits_of_three(seed):
    r, s, _, _ = sample_generic_forms(seed)
    v2, v3 = build_curve_forms(r, s)
    for p in (7, 13, 31):
        c = certify_over_Fp(v2, v3, p)
        if c.valid:
            assert c.points_found % 3 == 0
