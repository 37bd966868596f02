"""The group H = <xi_x, xi_y, sigma>, a semidirect product (Z/3)^2 x| Z/2.

Elements are kept in the normal form ``sigma^k xi_x^i xi_y^j``.  The only
relation needed to multiply is ``xi_x^i xi_y^j sigma = sigma xi_x^j xi_y^i``.
H acts on ``C4 x C4`` by ``xi_x(x, y) = (xi x, y)``, ``xi_y(x, y) = (x, xi y)``
and ``sigma(x, y) = (y, x)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Sequence

from .exact import ZETA, is_prime
from .polynomials import CoordinateAction


class PreconditionUnverifiedError(RuntimeError):
    pass


class NotNormalError(ValueError):
    pass


class NonPrimeError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class GroupElem:
    k: int = 0
    i: int = 0
    j: int = 0

    def __post_init__(self):
        object.__setattr__(self, "k", self.k % 2)
        object.__setattr__(self, "i", self.i % 3)
        object.__setattr__(self, "j", self.j % 3)

    def __mul__(self, other: "GroupElem") -> "GroupElem":
        a, b = (self.j, self.i) if other.k else (self.i, self.j)
        return GroupElem(self.k + other.k, a + other.i, b + other.j)

    def inverse(self) -> "GroupElem":
        if self.k:
            return GroupElem(1, -self.j, -self.i)
        return GroupElem(0, -self.i, -self.j)

    def __pow__(self, n: int) -> "GroupElem":
        out = IDENTITY
        base = self if n >= 0 else self.inverse()
        for _ in range(abs(n)):
            out = out * base
        return out

    def order(self) -> int:
        g, n = self, 1
        while g != IDENTITY:
            g, n = g * self, n + 1
        return n

    def is_identity(self) -> bool:
        return self == IDENTITY

    def __str__(self):
        parts = []
        if self.k:
            parts.append("s")
        if self.i:
            parts.append("xx" if self.i == 1 else "xx^2")
        if self.j:
            parts.append("xy" if self.j == 1 else "xy^2")
        return "*".join(parts) or "e"


IDENTITY = GroupElem(0, 0, 0)
SIGMA = GroupElem(1, 0, 0)
XI_X = GroupElem(0, 1, 0)
XI_Y = GroupElem(0, 0, 1)
XI_XY = XI_X * XI_Y
ELEMENTS: tuple[GroupElem, ...] = tuple(GroupElem(k, i, j) for k, i, j in product(range(2), range(3), range(3)))


def compose(g: GroupElem, h: GroupElem) -> GroupElem:
    return g * h


def involution(i: int) -> GroupElem:
    """``h_i = sigma xi_x^i xi_y^(3-i)``."""
    return GroupElem(1, i, 3 - i)


# ---------------------------------------------------------------------------
# Fixed loci
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FixedLocus:
    kind: str  # "empty" or "graph"
    index: int | None = None

    def __str__(self):
        return "empty" if self.kind == "empty" else f"graph({self.index})"


EMPTY = FixedLocus("empty")


def classify_fixed_locus(g: GroupElem, certificate) -> FixedLocus:
    """Fixed locus of ``g`` on ``C4 x C4``.

    Relies on xi acting freely on C4; ``certificate`` must be a freeness
    certificate (anything with a true ``is_free`` attribute).
    """
    if certificate is None or not getattr(certificate, "is_free", False):
        raise PreconditionUnverifiedError("freeness of the xi-action on C4 is not certified")
    if g.is_identity():
        raise ValueError("the identity fixes everything")
    if g.k == 1 and (g.i + g.j) % 3 == 0:
        return FixedLocus("graph", g.i)
    return EMPTY


def act_on_pair(g: GroupElem, x, y, xi_pow: Callable[[object, int], object]):
    """Image of ``(x, y)`` under ``g``; ``xi_pow(pt, n)`` applies ``xi^n`` to a point."""
    x2, y2 = xi_pow(x, g.i), xi_pow(y, g.j)
    return (y2, x2) if g.k else (x2, y2)


def coordinate_action(g: GroupElem, zeta=ZETA) -> CoordinateAction:
    """``g`` as a linear action on the 8 coordinates ``(x0..x3, y0..y3)``."""
    wts = (0, 0, 1, 2)
    scal = tuple(zeta ** (w * g.i % 3) for w in wts) + tuple(zeta ** (w * g.j % 3) for w in wts)
    perm = tuple(range(4, 8)) + tuple(range(4)) if g.k else tuple(range(8))
    return CoordinateAction(perm, scal)


# ---------------------------------------------------------------------------
# Subgroups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubgroupDescriptor:
    generators: tuple[GroupElem, ...]
    elements: frozenset[GroupElem]
    order: int
    index: int
    normal: bool
    abelian: bool


def closure(gens: Iterable[GroupElem]) -> frozenset[GroupElem]:
    gens = list(gens)
    seen = {IDENTITY}
    frontier = [IDENTITY]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = a * g
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return frozenset(seen)


def _is_normal(elems: frozenset[GroupElem]) -> bool:
    return all(g * n * g.inverse() in elems for g in ELEMENTS for n in elems)


def subgroup(gens: Sequence[GroupElem]) -> SubgroupDescriptor:
    elems = closure(gens)
    return SubgroupDescriptor(
        generators=tuple(gens),
        elements=elems,
        order=len(elems),
        index=len(ELEMENTS) // len(elems),
        normal=_is_normal(elems),
        abelian=all(a * b == b * a for a in elems for b in elems),
    )


def quotient_order_profile(N: SubgroupDescriptor) -> dict[int, int]:
    if not N.normal:
        raise NotNormalError("quotient by a non-normal subgroup")
    cosets = {frozenset(g * n for n in N.elements) for g in ELEMENTS}
    profile: dict[int, int] = {}
    for coset in cosets:
        g = min(coset)
        m, h = 1, g
        while h not in N.elements:
            h, m = h * g, m + 1
        profile[m] = profile.get(m, 0) + 1
    return dict(sorted(profile.items()))


S3_PROFILE = {1: 1, 2: 3, 3: 2}


def quotient_is_S3(N: SubgroupDescriptor) -> bool:
    # among groups of order 6 the element-order profile pins down S3
    return quotient_order_profile(N) == S3_PROFILE


def check_group_axioms() -> bool:
    """Associativity, identity and inverses, exhaustively over all 18^3 triples."""
    for a in ELEMENTS:
        if a * IDENTITY != a or IDENTITY * a != a:
            return False
        invs = [b for b in ELEMENTS if a * b == IDENTITY]
        if len(invs) != 1 or invs[0] * a != IDENTITY or invs[0] != a.inverse():
            return False
        for b in ELEMENTS:
            ab = a * b
            for c in ELEMENTS:
                if ab * c != a * (b * c):
                    return False
    return sum(1 for e in ELEMENTS if all(e * a == a for a in ELEMENTS)) == 1


# ---------------------------------------------------------------------------
# Order-q subgroups of (Z/q)^rank
# ---------------------------------------------------------------------------


def count_order_q_subgroups(q: int, rank: int) -> int:
    """Number of order-``q`` subgroups of ``(Z/q)^rank``, ``(q^rank - 1)/(q - 1)``."""
    if not is_prime(q):
        raise NonPrimeError(f"{q} is not prime")
    if rank < 1:
        raise ValueError("rank must be positive")
    return (q**rank - 1) // (q - 1)


def enumerate_order_q_subgroups(q: int, rank: int) -> set[frozenset[tuple[int, ...]]]:
    """The cyclic subgroups generated by each nonzero vector, found by brute force."""
    if not is_prime(q):
        raise NonPrimeError(f"{q} is not prime")
    subs = set()
    for v in product(range(q), repeat=rank):
        if any(v):
            subs.add(frozenset(tuple(c * a % q for a in v) for c in range(q)))
    return subs
