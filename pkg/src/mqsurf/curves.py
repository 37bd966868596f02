"""Genus bookkeeping for curves and finite-field certification of C4.

:func:`certify_over_Fp` enumerates P^3(F_p), keeps the common zeros of the
reduced V2 and V3, and checks smoothness (Jacobian rank 2), that <xi>
splits the points into orbits of size 3, and the Hasse-Weil window for
genus 4.  The ``numba``/``numpy`` backends share :mod:`mqsurf._kernels`;
the ``exact`` backend redoes everything with :class:`~mqsurf.exact.Fp`
arithmetic and :func:`~mqsurf.exact.matrix_rank`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import numpy as np

from . import _kernels
from .exact import CycNum, Fp, is_prime, matrix_rank, reduce_mod_p, smallest_cube_root_of_unity
from .exact import InvalidPrimeError
from .polynomials import Form, evaluate, jacobian_at, resultant_binary, split_curve_forms


class UnsupportedGenusError(ValueError):
    pass


class DivisibilityError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Genus formulas
# ---------------------------------------------------------------------------


def ci_genus(d1: int, d2: int) -> int:
    """Genus of a smooth complete intersection of degrees d1, d2 in P^3."""
    if d1 < 1 or d2 < 1:
        raise ValueError("degrees must be positive")
    return 1 + d1 * d2 * (d1 + d2 - 4) // 2


def etale_quotient_genus(g_top: int, n: int) -> int:
    """Solve ``2 g_top - 2 = n (2 g - 2)`` for g."""
    q, rem = divmod(2 * g_top - 2, n)
    if rem or q % 2:
        raise DivisibilityError(f"no etale degree-{n} quotient of a genus-{g_top} curve")
    return q // 2 + 1


def h0_of_dK(g: int, d: int) -> int:
    if g <= 1:
        raise UnsupportedGenusError("h0(dK) helper needs genus >= 2")
    if d < 1:
        raise ValueError("d must be positive")
    return g if d == 1 else (2 * d - 1) * (g - 1)


def diagonal_selfint(g: int) -> int:
    """Self-intersection of the diagonal in ``C x C``: ``2 - 2g``."""
    return 2 - 2 * g


def weierstrass_count(g: int) -> int:
    """Branch points of the hyperelliptic double cover, ``2g + 2``."""
    return 2 * g + 2


def hasse_weil_ok(n_points: int, p: int, g: int) -> bool:
    # |N - (p+1)| <= 2 g sqrt(p), squared to stay in integers
    dev = n_points - (p + 1)
    return dev * dev <= 4 * g * g * p


def hasse_weil_window(p: int, g: int) -> tuple[int, int]:
    w = isqrt(4 * g * g * p)
    return max(0, p + 1 - w), p + 1 + w


# ---------------------------------------------------------------------------
# Freeness of xi on C4
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FreeActionCertificate:
    resultant_nonzero: bool
    coordinate_points_excluded: bool

    @property
    def is_free(self) -> bool:
        return self.resultant_nonzero and self.coordinate_points_excluded


def free_action_check(r: Form, s: Form) -> FreeActionCertificate:
    """Fixed points of xi in P^3 are the line x2 = x3 = 0 and the points
    [0:0:1:0], [0:0:0:1]; rule out C4 meeting either."""
    from .polynomials import build_curve_forms

    _, v3 = build_curve_forms(r, s)
    res = resultant_binary(r, s)
    excluded = evaluate(v3, [0, 0, 1, 0]) != 0 and evaluate(v3, [0, 0, 0, 1]) != 0
    return FreeActionCertificate(res != 0, bool(excluded))


# ---------------------------------------------------------------------------
# Points over F_p
# ---------------------------------------------------------------------------


def reduce_coefficient(c, p: int, zeta_image: int) -> int:
    if isinstance(c, CycNum):
        return reduce_mod_p(c, p, zeta_image).value
    return Fp(Fraction(c), p).value


def normalize_point(pt, p: int) -> tuple[int, ...]:
    pt = [int(x) % p for x in pt]
    lead = next(x for x in pt if x)
    inv = pow(lead, -1, p)
    return tuple(x * inv % p for x in pt)


def xi_on_point(pt, power: int, p: int, zeta_image: int) -> tuple[int, ...]:
    k = power % 3
    z = pow(zeta_image, k, p)
    return normalize_point((pt[0], pt[1], pt[2] * z, pt[3] * z * z), p)


@dataclass(frozen=True)
class CurveCertificate:
    prime: int
    zeta_image: int
    points_enumerated: int
    points_found: int
    all_smooth: bool
    free_orbits: bool
    hasse_weil_ok: bool
    resultant_nonzero: bool
    coordinate_points_excluded: bool
    points: tuple[tuple[int, ...], ...] = ()

    @property
    def valid(self) -> bool:
        return (
            self.all_smooth
            and self.free_orbits
            and self.hasse_weil_ok
            and self.resultant_nonzero
            and self.coordinate_points_excluded
        )

    @property
    def is_free(self) -> bool:
        return self.resultant_nonzero and self.coordinate_points_excluded and self.free_orbits

    def summary(self) -> dict:
        return {
            "prime": self.prime,
            "zeta_image": self.zeta_image,
            "points_enumerated": self.points_enumerated,
            "points_found": self.points_found,
            "all_smooth": self.all_smooth,
            "free_orbits": self.free_orbits,
            "hasse_weil_ok": self.hasse_weil_ok,
            "resultant_nonzero": self.resultant_nonzero,
            "coordinate_points_excluded": self.coordinate_points_excluded,
        }


def _pack(forms: list[Form], p: int, zeta_image: int):
    exps, coefs, owner = [], [], []
    for k, f in enumerate(forms):
        for e, c in f.terms.items():
            exps.append(e)
            coefs.append(reduce_coefficient(c, p, zeta_image))
            owner.append(k)
    n = forms[0].num_vars
    return (
        np.array(exps, dtype=np.int64).reshape(-1, n),
        np.array(coefs, dtype=np.int64),
        np.array(owner, dtype=np.int64),
    )


def curve_points_mod_p(v2: Form, v3: Form, p: int, zeta_image: int, backend: str | None = None):
    """``(points_on_curve, jacobian_ranks, points_enumerated)`` over F_p."""
    backend = backend or _kernels.BACKEND
    if backend == "exact":
        return _curve_points_exact(v2, v3, p, zeta_image)
    forms = [v2, v3] + v2.gradient() + v3.gradient()
    exps, coefs, owner = _pack(forms, p, zeta_image)
    pts = _kernels.projective_points(p)
    vals = _kernels.eval_forms(pts, exps, coefs, owner, len(forms), p, backend)
    on = (vals[:, 0] == 0) & (vals[:, 1] == 0)
    jac = np.stack([vals[on, 2:6], vals[on, 6:10]], axis=1)
    ranks = _kernels.rank_2xn(jac, p, backend)
    return [tuple(int(x) for x in row) for row in pts[on]], [int(r) for r in ranks], len(pts)


def _curve_points_exact(v2: Form, v3: Form, p: int, zeta_image: int):
    red = [f.map_coefficients(lambda c: Fp(reduce_coefficient(c, p, zeta_image), p)) for f in (v2, v3)]
    pts, ranks, total = [], [], 0
    for row in _kernels.projective_points(p):
        total += 1
        x = [Fp(int(v), p) for v in row]
        if evaluate(red[0], x) == 0 and evaluate(red[1], x) == 0:
            pts.append(tuple(int(v) for v in row))
            ranks.append(matrix_rank(jacobian_at(red, x)))
    return pts, ranks, total


def orbits_are_free(points, p: int, zeta_image: int) -> bool:
    """Every <xi>-orbit of the point set has exactly 3 elements inside the set."""
    pset = set(points)
    for pt in points:
        orbit = {xi_on_point(pt, k, p, zeta_image) for k in range(3)}
        if len(orbit) != 3 or not orbit <= pset:
            return False
    return True


def certify_over_Fp(
    v2: Form, v3: Form, p: int, zeta_image: int | None = None, backend: str | None = None
) -> CurveCertificate:
    if not is_prime(p) or p % 3 != 1:
        raise InvalidPrimeError(f"p={p} must be a prime congruent to 1 mod 3")
    if zeta_image is None:
        zeta_image = smallest_cube_root_of_unity(p)
    r, s = split_curve_forms(v2, v3)
    free = free_action_check(r, s)
    pts, ranks, total = curve_points_mod_p(v2, v3, p, zeta_image, backend)
    g = ci_genus(2, 3)
    return CurveCertificate(
        prime=p,
        zeta_image=int(zeta_image),
        points_enumerated=total,
        points_found=len(pts),
        all_smooth=all(rk == 2 for rk in ranks),
        free_orbits=orbits_are_free(pts, p, zeta_image),
        hasse_weil_ok=hasse_weil_ok(len(pts), p, g),
        resultant_nonzero=free.resultant_nonzero,
        coordinate_points_excluded=free.coordinate_points_excluded,
        points=tuple(pts),
    )


# ---------------------------------------------------------------------------
# Brute-force fixed points of H on C4(F_p) x C4(F_p)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FixedPointScan:
    agrees: bool
    graphs_disjoint: bool
    fixed_counts: dict


def fixed_locus_bruteforce(cert: CurveCertificate) -> FixedPointScan:
    """Compare actual fixed pairs with :func:`classify_fixed_locus` predictions."""
    from .groups import ELEMENTS, act_on_pair, classify_fixed_locus

    p, z = cert.prime, cert.zeta_image

    def xi_pow(pt, n):
        return xi_on_point(pt, n, p, z)

    agrees = True
    counts = {}
    members: dict[int, set] = {0: set(), 1: set(), 2: set()}
    for g in ELEMENTS:
        if g.is_identity():
            continue
        locus = classify_fixed_locus(g, cert)
        n = 0
        for x in cert.points:
            for y in cert.points:
                fixed = act_on_pair(g, x, y, xi_pow) == (x, y)
                predicted = locus.kind == "graph" and y == xi_pow(x, locus.index)
                if fixed != predicted:
                    agrees = False
                if fixed:
                    n += 1
                    if locus.kind == "graph":
                        members[locus.index].add((x, y))
        counts[str(g)] = n
    disjoint = all(not (members[a] & members[b]) for a in range(3) for b in range(a + 1, 3))
    return FixedPointScan(agrees, disjoint, counts)
