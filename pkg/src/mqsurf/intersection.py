"""Integer intersection theory for the quotients of C4 x C4.

NS(A) is tracked as ``<Theta>`` with ``Theta^2 = 2``; NS(B) for
B = Sym^2(C2) as the rank-2 sublattice ``<Theta_B, E>`` with Gram
``diag(2, -1)`` (blow-up of A at a point, ``Theta_B`` the pullback).
Classes on S are formal symbols whose pairings are filled in as they are
derived; NS(S) itself is never modelled.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .curves import ci_genus, diagonal_selfint, etale_quotient_genus, weierstrass_count


class LatticeMismatchError(ValueError):
    pass


class NonIntegralError(ArithmeticError):
    pass


def _exact_div(a: int, b: int, what: str) -> int:
    q, r = divmod(a, b)
    if r:
        raise NonIntegralError(f"{what}: {a}/{b} is not an integer")
    return q


@dataclass(frozen=True)
class Lattice:
    name: str
    basis_labels: tuple[str, ...]
    gram: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.basis_labels)
        if len(self.gram) != n or any(len(r) != n for r in self.gram):
            raise ValueError("Gram matrix shape does not match the basis")
        if any(self.gram[i][j] != self.gram[j][i] for i in range(n) for j in range(n)):
            raise ValueError("Gram matrix is not symmetric")

    def cls(self, **coords: int) -> "DivClass":
        unknown = set(coords) - set(self.basis_labels)
        if unknown:
            raise KeyError(f"unknown basis labels {sorted(unknown)}")
        return DivClass(self, tuple(coords.get(b, 0) for b in self.basis_labels))


@dataclass(frozen=True)
class DivClass:
    lattice: Lattice
    coords: tuple[int, ...]

    def __add__(self, other: "DivClass") -> "DivClass":
        _same(self, other)
        return DivClass(self.lattice, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "DivClass") -> "DivClass":
        return self + (-1) * other

    def __rmul__(self, k: int) -> "DivClass":
        return DivClass(self.lattice, tuple(k * a for a in self.coords))

    def __str__(self):
        parts = [f"{c}*{b}" for c, b in zip(self.coords, self.lattice.basis_labels) if c]
        return " + ".join(parts) or "0"


def _same(a: DivClass, b: DivClass):
    if a.lattice != b.lattice:
        raise LatticeMismatchError(f"{a.lattice.name} vs {b.lattice.name}")


def pair(a: DivClass, b: DivClass) -> int:
    _same(a, b)
    g = a.lattice.gram
    n = len(a.coords)
    return sum(a.coords[i] * g[i][j] * b.coords[j] for i in range(n) for j in range(n))


NS_A = Lattice("NS(A)", ("Theta",), ((2,),))
NS_B = Lattice("NS(B)", ("Theta_B", "E"), ((2, 0), (0, -1)))

THETA = NS_A.cls(Theta=1)
THETA_B = NS_B.cls(Theta_B=1)
E = NS_B.cls(E=1)
X_CLASS = THETA_B - E  # image of p -> p0 + p
D_B = 4 * THETA_B - 6 * E


def blowdown_pushforward(c: DivClass) -> DivClass:
    """pi_* : NS(B) -> NS(A); Theta_B -> Theta, E -> 0."""
    if c.lattice != NS_B:
        raise LatticeMismatchError("pushforward expects a class on NS(B)")
    return NS_A.cls(Theta=c.coords[0])


def d_b_from_relations() -> DivClass:
    """Solve ``2E + D_B = 4x`` with ``x = Theta_B - E`` for D_B."""
    return 4 * X_CLASS - 2 * E


# ---------------------------------------------------------------------------
# Numerical invariants of surfaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SurfaceInvariants:
    K2: int
    c2: int
    chi: int
    p_g: int
    q: int

    def noether_holds(self) -> bool:
        return 12 * self.chi == self.K2 + self.c2

    def chi_matches_genera(self) -> bool:
        return self.chi == 1 - self.q + self.p_g


@dataclass(frozen=True)
class CoverMap:
    name: str
    degree: int
    kind: str  # etale | double-branched | triple-simply-branched | blow-down
    ramification: tuple[tuple[str, int], ...] = ()


COVERS = (
    CoverMap("t: C4xC4 -> T", 3, "etale"),
    CoverMap("u: T -> S", 2, "double-branched", (("Sigma_0", 2),)),
    CoverMap("beta: S -> B", 3, "triple-simply-branched", (("R", 2),)),
    CoverMap("v: C2xC2 -> B", 2, "double-branched", (("Delta", 2),)),
    CoverMap("pi: B -> A", 1, "blow-down"),
)


def product_invariants(g: int) -> SurfaceInvariants:
    """``C_g x C_g``."""
    K2 = 8 * (g - 1) ** 2
    chi = (g - 1) ** 2
    return SurfaceInvariants(K2=K2, c2=(2 - 2 * g) ** 2, chi=chi, p_g=g * g, q=2 * g)


def free_quotient_invariants(g: int, n: int) -> SurfaceInvariants:
    """``(C_g x C_g)/(Z/n)`` with Z/n acting freely and diagonally."""
    prod = product_invariants(g)
    K2 = _exact_div(prod.K2, n, "K^2")
    chi = _exact_div(prod.chi, n, "chi")
    q = 2 * etale_quotient_genus(g, n)
    return SurfaceInvariants(K2=K2, c2=12 * chi - K2, chi=chi, p_g=chi - 1 + q, q=q)


def pushpull_selfint(upstairs, n: int, mode: str) -> int:
    """Self-intersection downstairs from self-intersections upstairs.

    ``unramified-image``: ``upstairs`` lists the disjoint components of the
    preimage, ``D^2 = sum / n``.  ``branch``: the preimage is twice a
    ramification curve of square ``upstairs``, ``D^2 = 4 upstairs / n``.
    """
    if mode == "branch":
        return _exact_div(4 * int(upstairs), n, "branch self-intersection")
    if mode == "unramified-image":
        vals = [upstairs] if isinstance(upstairs, int) else list(upstairs)
        return _exact_div(sum(vals), n, "image self-intersection")
    raise ValueError(f"unknown mode {mode!r}")


def adjunction_KD(g: int, D2: int) -> int:
    return 2 * g - 2 - D2


def double_cover_K2(KT2: int, D2: int, KD: int) -> int:
    """Solve ``K_T^2 = 2 (K + D/2)^2`` for ``K^2``."""
    if D2 % 4:
        raise NonIntegralError("D^2 must be divisible by 4")
    return _exact_div(KT2, 2, "K_T^2 / 2") - KD - D2 // 4


def stratified_euler(c2_T: int, branch_curves_T: Sequence[int], image_curves_S: Sequence[int], n: int) -> int:
    """c2 of the quotient by cutting out the curves and using multiplicativity."""
    open_part = _exact_div(c2_T - sum(branch_curves_T), n, "open-stratum Euler number")
    return open_part + sum(image_curves_S)


def noether_chi(K2: int, c2: int) -> int:
    return _exact_div(K2 + c2, 12, "Noether")


def solve_Z2(K2: int, ZR: int, R2: int) -> int:
    """``K = Z + R``, so ``Z^2 = K^2 - 2 ZR - R^2``."""
    return K2 - 2 * ZR - R2


def chi_top(g: int) -> int:
    return 2 - 2 * g


# ---------------------------------------------------------------------------
# The derivation chain
# ---------------------------------------------------------------------------


@dataclass
class PairingTable:
    """Symmetric pairings among formal classes on a surface."""

    values: dict = field(default_factory=dict)

    def set(self, a: str, b: str, v: int):
        self.values[frozenset((a, b)) if a != b else (a,)] = v

    def get(self, a: str, b: str) -> int:
        return self.values[frozenset((a, b)) if a != b else (a,)]


@dataclass
class Derivation:
    """Every number computed along the way, keyed by a stable name."""

    values: dict = field(default_factory=dict)
    assumptions: dict = field(default_factory=dict)
    S_pairings: PairingTable = field(default_factory=PairingTable)

    def __getitem__(self, key):
        return self.values[key]


def derive_chain() -> Derivation:
    d = Derivation()
    v = d.values
    g4 = ci_genus(2, 3)
    g2 = etale_quotient_genus(g4, 3)
    v["genus_C4"], v["genus_C2"] = g4, g2

    prod = product_invariants(g4)
    v["prod"] = prod
    T = free_quotient_invariants(g4, 3)
    v["T"] = T

    # Gamma_i ~ C4 are translates of the diagonal
    gamma2 = diagonal_selfint(g4)
    v["Gamma2"] = gamma2
    sigma2 = pushpull_selfint([gamma2], 3, "unramified-image")
    v["Sigma2"] = sigma2
    DS2 = pushpull_selfint(sigma2, 2, "branch")
    R2 = pushpull_selfint([sigma2, sigma2], 2, "unramified-image")
    v["D_S2"], v["R2"] = DS2, R2
    KD = adjunction_KD(g2, DS2)
    v["K_DS"] = KD
    K2 = double_cover_K2(T.K2, DS2, KD)
    v["K_S2"] = K2
    c2 = stratified_euler(T.c2, [chi_top(g2)] * 3, [chi_top(g2), chi_top(g2)], 2)
    v["c2_S"] = c2
    chi = noether_chi(K2, c2)
    v["chi_S"] = chi
    # q >= 2 from the surjection onto A; q <= 2 imported from classification
    q = 2
    d.assumptions["q_S"] = "minimal surfaces of general type with p_g = q >= 3 have K^2 in {6, 8}"
    v["q_S"] = q
    v["p_g_S"] = chi - 1 + q
    v["S"] = SurfaceInvariants(K2=K2, c2=c2, chi=chi, p_g=chi - 1 + q, q=q)

    # Lattice side
    v["E2"] = pair(E, E)
    v["Theta2"] = pair(THETA, THETA)
    v["x2"] = pair(X_CLASS, X_CLASS)
    v["xE"] = pair(X_CLASS, E)
    v["D_B"] = D_B
    v["D_B_relations_agree"] = d_b_from_relations() == D_B
    v["D_B.E"] = pair(D_B, E)
    v["D_B2_lattice"] = pair(D_B, D_B)
    # v: C2 x C2 -> B is branched along D_B with v^* D_B = 2 Delta
    v["D_B2_cover"] = pushpull_selfint(diagonal_selfint(g2), 2, "branch")
    v["pi_D_B"] = blowdown_pushforward(D_B)

    # Z = beta^* E meets R transversally over the Weierstrass points of C2
    ZR_up = weierstrass_count(g2)
    ZR_down = pair(E, D_B)  # E . beta_* R, beta_* R = D_B
    v["ZR_upstairs"], v["ZR_downstairs"] = ZR_up, ZR_down
    ZR = ZR_down
    Z2 = solve_Z2(K2, ZR, R2)
    v["ZR"], v["Z2"] = ZR, Z2
    v["K_S2_rederived"] = Z2 + 2 * ZR + R2
    # adjunction with K_S = Z + R
    v["genus_R_adjunction"] = ((ZR + R2) + R2) // 2 + 1
    v["genus_Z_adjunction"] = ((Z2 + ZR) + Z2) // 2 + 1

    tab = d.S_pairings
    tab.set("Z", "Z", Z2)
    tab.set("Z", "R", ZR)
    tab.set("R", "R", R2)
    tab.set("D_S", "D_S", DS2)
    tab.set("K_S", "D_S", KD)
    tab.set("K_S", "K_S", K2)
    tab.set("D_S", "R", 0)
    return d


def deformation_degree_ledger(d: Derivation | None = None) -> list[tuple[str, int, int, bool]]:
    """Degree arithmetic behind the deformation count.

    Returns ``(name, expected, computed, ok)`` rows; the expected values are
    the signs/values each step needs.
    """
    d = d or derive_chain()
    R2, Z2, ZR = d["R2"], d["Z2"], d["ZR"]
    g_R = d["genus_C2"]
    deg_N_beta = 2 * R2  # N_beta = O_R(2R)
    deg_OZ = -ZR - Z2  # O_Z(-R-Z)
    h0_KR = g_R
    deg_N_alpha_R = 2 * R2 + ZR  # O_R(2R + Z) should be K_R
    h0_TA = 2  # H^0(S, alpha^* T_A), T_A trivial of rank 2
    rank_eps = 3  # dimension of ppav moduli; imported
    h0_N_upper = h0_KR if deg_OZ < 0 else None
    h0_N_lower = h0_TA
    h0_N = h0_N_upper if h0_N_upper == h0_N_lower else None
    h1_TS = None if h0_N is None else h0_N - h0_TA + rank_eps
    d.assumptions["rank_epsilon"] = "first-order deformations of S dominate those of the Jacobian (rank 3)"
    return [
        ("deg_N_beta_on_R", -4, deg_N_beta, deg_N_beta < 0),
        ("deg_OZ_minus_R_minus_Z", -3, deg_OZ, deg_OZ < 0),
        ("h0_R_KR", 2, h0_KR, True),
        ("deg_N_alpha_on_R_equals_deg_KR", 2 * g_R - 2, deg_N_alpha_R, deg_N_alpha_R == 2 * g_R - 2),
        ("h0_N_alpha", 2, h0_N, h0_N is not None),
        ("h1_T_S", 3, h1_TS, h1_TS is not None),
        ("K_S_squared_from_Z_plus_R", d["K_S2"], d["K_S2_rederived"], d["K_S2"] == d["K_S2_rederived"]),
    ]
