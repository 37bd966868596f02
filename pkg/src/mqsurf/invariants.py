"""Dimensions of <xi>-invariant pieces of Sym^d of the coordinate space.

The generator xi acts diagonally, coordinate ``x_i`` having eigenvalue
``zeta**w_i``.  Invariant dimensions are counted two ways: directly from
monomial weights, and from the Burnside average of ``trace(Sym^d g)``
computed in Q(zeta_3) from eigenvalue power sums.
"""
from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple, Sequence

from .curves import etale_quotient_genus, h0_of_dK
from .exact import ZETA, CycNum, ExactMatrix, matrix_rank, subspace_intersection_dim
from .polynomials import Form, Monomial, grlex_monomials

CURVE_WEIGHTS = (0, 0, 1, 2)


class DegreeUnsupportedError(ValueError):
    pass


def eigenspace_dims(weights: Sequence[int]) -> tuple[int, int, int]:
    counts = [0, 0, 0]
    for w in weights:
        counts[w % 3] += 1
    return tuple(counts)


def monomial_weight(exp: Monomial, weights: Sequence[int]) -> int:
    return sum(e * w for e, w in zip(exp, weights)) % 3


def list_invariant_monomials(weights: Sequence[int], d: int) -> list[Monomial]:
    if d < 1:
        raise ValueError("degree must be positive")
    return [m for m in grlex_monomials(len(weights), d) if monomial_weight(m, weights) == 0]


def invariant_dim(weights: Sequence[int], d: int) -> int:
    return len(list_invariant_monomials(weights, d))


def character_dims(weights: Sequence[int], d: int) -> tuple[int, int, int]:
    """Dimensions of the three isotypic pieces of Sym^d."""
    counts = [0, 0, 0]
    for m in grlex_monomials(len(weights), d):
        counts[monomial_weight(m, weights)] += 1
    return tuple(counts)


def sym_trace(eigenvalues: Sequence, d: int):
    """``trace(Sym^d g)`` = complete homogeneous symmetric polynomial h_d.

    Newton's identity ``k h_k = sum_{i=1..k} p_i h_{k-i}`` from power sums.
    """
    power = [None] + [sum((lam**i for lam in eigenvalues), CycNum(0)) for i in range(1, d + 1)]
    h = [CycNum(1)]
    for k in range(1, d + 1):
        acc = CycNum(0)
        for i in range(1, k + 1):
            acc = acc + power[i] * h[k - i]
        h.append(acc * Fraction(1, k))
    return h[d]


def invariant_dim_burnside(weights: Sequence[int], d: int) -> int:
    total = CycNum(0)
    for g in range(3):
        total = total + sym_trace([ZETA ** (g * w % 3) for w in weights], d)
    avg = total * Fraction(1, 3)
    if not avg.is_rational() or avg.a.denominator != 1:
        raise ArithmeticError(f"Burnside average {avg} is not an integer")
    return int(avg.a)


# ---------------------------------------------------------------------------
# Invariant part of the ideal of C4
# ---------------------------------------------------------------------------


def ideal_slice(v2: Form, v3: Form, d: int, v2_multiples_only: bool = False) -> list[Form]:
    """Spanning set of the degree-d part of the ideal ``(V2, V3)``."""
    if d == 2:
        return [v2]
    if d == 3:
        gens = [Form.variable(i, v2.num_vars) * v2 for i in range(v2.num_vars)]
        return gens if v2_multiples_only else gens + [v3]
    raise DegreeUnsupportedError(f"degree {d} not supported (only 2 and 3)")


def _slice_matrix(forms: Sequence[Form], basis: Sequence[Monomial]) -> ExactMatrix:
    return ExactMatrix([f.coeff_vector(basis) for f in forms], len(basis))


def _invariant_coordinate_matrix(basis: Sequence[Monomial], weights) -> ExactMatrix:
    rows = [
        [1 if j == i else 0 for j in range(len(basis))]
        for i, m in enumerate(basis)
        if monomial_weight(m, weights) == 0
    ]
    return ExactMatrix(rows, len(basis))


def ideal_slice_rank(v2: Form, v3: Form, d: int) -> int:
    basis = grlex_monomials(v2.num_vars, d)
    return matrix_rank(_slice_matrix(ideal_slice(v2, v3, d), basis))


def ideal_slice_invariant_dim(
    v2: Form,
    v3: Form,
    d: int,
    weights: Sequence[int] = CURVE_WEIGHTS,
    v2_multiples_only: bool = False,
) -> int:
    """Dimension of the invariant forms of degree d vanishing on C4."""
    basis = grlex_monomials(v2.num_vars, d)
    U = _slice_matrix(ideal_slice(v2, v3, d, v2_multiples_only), basis)
    W = _invariant_coordinate_matrix(basis, weights)
    return subspace_intersection_dim(U, W)


class Surjectivity(NamedTuple):
    invariant_sym_dim: int
    invariant_ideal_dim: int
    image_dim: int
    expected_image_dim: int

    @property
    def consistent(self) -> bool:
        return self.image_dim == self.expected_image_dim


def surjectivity_consistency(
    d: int, v2: Form, v3: Form, weights: Sequence[int] = CURVE_WEIGHTS
) -> Surjectivity:
    """Compare ``dim Sym^d^inv - dim I_d^inv`` with ``h0(d K)`` on the quotient curve."""
    if d not in (2, 3):
        raise DegreeUnsupportedError(f"degree {d} not supported (only 2 and 3)")
    sym = invariant_dim(weights, d)
    ideal = ideal_slice_invariant_dim(v2, v3, d, weights)
    order = 1 if all(w % 3 == 0 for w in weights) else 3
    genus = etale_quotient_genus(4, order)
    return Surjectivity(sym, ideal, sym - ideal, h0_of_dK(genus, d))
