"""Sparse homogeneous forms over an exact coefficient ring.

A :class:`Form` maps exponent tuples to nonzero coefficients.  Coefficients
can be ``int``/``Fraction``, :class:`~mqsurf.exact.CycNum` or
:class:`~mqsurf.exact.Fp`; nothing here cares which.

Coordinate actions act on points by ``(g.x)[perm[i]] = scalings[i] * x[i]``
and on forms by inverse substitution, ``(g.f)(x) = f(g^-1 . x)``, so a form
is invariant exactly when ``apply_action(f, g) == f``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .exact import ZETA, CycNum, ExactMatrix, determinant

Monomial = tuple[int, ...]


class DegreeMismatchError(ValueError):
    pass


class NonHomogeneousError(ValueError):
    pass


class ZeroFormError(ValueError):
    pass


def grlex_monomials(num_vars: int, degree: int) -> list[Monomial]:
    """All degree-``degree`` monomials, graded-lex with x0 > x1 > ..."""
    out = []
    for combo in combinations_with_replacement(range(num_vars), degree):
        e = [0] * num_vars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


def _inv(x):
    if isinstance(x, int):
        return Fraction(1, x)
    return 1 / x


class Form:
    """Homogeneous polynomial in ``num_vars`` variables."""

    __slots__ = ("num_vars", "_terms", "_degree")

    def __init__(self, num_vars: int, terms: Mapping[Monomial, object] | Iterable = ()):
        if num_vars < 1:
            raise ValueError("num_vars must be positive")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Monomial, object] = {}
        for exp, c in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != num_vars or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent vector {exp} for {num_vars} variables")
            acc[exp] = acc[exp] + c if exp in acc else c
        clean = {e: c for e, c in acc.items() if c != 0}
        degrees = {sum(e) for e in clean}
        if len(degrees) > 1:
            raise NonHomogeneousError(f"mixed degrees {sorted(degrees)}")
        object.__setattr__(self, "num_vars", num_vars)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_degree", degrees.pop() if degrees else None)

    def __setattr__(self, name, value):
        raise AttributeError("Form is immutable")

    # constructors -----------------------------------------------------------
    @classmethod
    def variable(cls, i: int, num_vars: int) -> "Form":
        e = [0] * num_vars
        e[i] = 1
        return cls(num_vars, {tuple(e): 1})

    @classmethod
    def from_coeffs(cls, num_vars: int, degree: int, coeffs: Sequence) -> "Form":
        """Build a form from a coefficient list in graded-lex monomial order."""
        basis = grlex_monomials(num_vars, degree)
        if len(coeffs) != len(basis):
            raise DegreeMismatchError(
                f"expected {len(basis)} coefficients for degree {degree} in {num_vars} vars"
            )
        return cls(num_vars, zip(basis, coeffs))

    # accessors --------------------------------------------------------------
    @property
    def terms(self) -> Mapping[Monomial, object]:
        return MappingProxyType(self._terms)

    @property
    def degree(self) -> int | None:
        return self._degree

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, exp: Monomial):
        return self._terms.get(tuple(exp), 0)

    def coeff_vector(self, basis: Sequence[Monomial]) -> list:
        return [self._terms.get(m, 0) for m in basis]

    def __len__(self):
        return len(self._terms)

    # arithmetic -------------------------------------------------------------
    def _check(self, other: "Form"):
        if other.num_vars != self.num_vars:
            raise ValueError("forms live in different numbers of variables")

    def __add__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        self._check(other)
        return Form(self.num_vars, list(self._terms.items()) + list(other._terms.items()))

    def __neg__(self):
        return Form(self.num_vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Form):
            self._check(other)
            acc: dict[Monomial, object] = {}
            for e1, c1 in self._terms.items():
                for e2, c2 in other._terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    acc[e] = acc[e] + c1 * c2 if e in acc else c1 * c2
            return Form(self.num_vars, acc)
        return Form(self.num_vars, {e: c * other for e, c in self._terms.items()})

    def __rmul__(self, other):
        if isinstance(other, Form):
            return NotImplemented
        return Form(self.num_vars, {e: other * c for e, c in self._terms.items()})

    def map_coefficients(self, fn) -> "Form":
        return Form(self.num_vars, {e: fn(c) for e, c in self._terms.items()})

    def lift(self, num_vars: int) -> "Form":
        """Same polynomial viewed in more variables (appended at the end)."""
        pad = (0,) * (num_vars - self.num_vars)
        return Form(num_vars, {e + pad: c for e, c in self._terms.items()})

    def derivative(self, i: int) -> "Form":
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                d = list(e)
                d[i] -= 1
                out[tuple(d)] = c * e[i]
        return Form(self.num_vars, out)

    def gradient(self) -> list["Form"]:
        return [self.derivative(i) for i in range(self.num_vars)]

    def __call__(self, point):
        return evaluate(self, point)

    # comparison -------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self.num_vars == other.num_vars and self._terms == other._terms

    def __hash__(self):
        return hash((self.num_vars, frozenset(self._terms.items())))

    def __repr__(self):
        return f"Form({self.num_vars}, {dict(sorted(self._terms.items(), reverse=True))!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e in sorted(self._terms, reverse=True):
            mono = " ".join(
                f"x{i}" if k == 1 else f"x{i}^{k}" for i, k in enumerate(e) if k
            )
            parts.append(f"{self._terms[e]}*{mono}" if mono else str(self._terms[e]))
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# The curve C4 and the coordinate actions
# ---------------------------------------------------------------------------


def build_curve_forms(r: Form, s: Form) -> tuple[Form, Form]:
    """``V2 = x2 x3 + r(x0, x1)`` and ``V3 = x2^3 + x3^3 + s(x0, x1)``."""
    if r.num_vars != 2 or r.degree != 2:
        raise DegreeMismatchError(f"r must be a binary quadratic form, got {r}")
    if s.num_vars != 2 or s.degree != 3:
        raise DegreeMismatchError(f"s must be a binary cubic form, got {s}")
    v2 = Form(4, {(0, 0, 1, 1): 1}) + r.lift(4)
    v3 = Form(4, {(0, 0, 3, 0): 1, (0, 0, 0, 3): 1}) + s.lift(4)
    return v2, v3


def split_curve_forms(v2: Form, v3: Form) -> tuple[Form, Form]:
    """Recover ``(r, s)`` from forms produced by :func:`build_curve_forms`."""
    r = v2 - Form(4, {(0, 0, 1, 1): 1})
    s = v3 - Form(4, {(0, 0, 3, 0): 1, (0, 0, 0, 3): 1})
    out = []
    for f, name in ((r, "V2"), (s, "V3")):
        if any(e[2] or e[3] for e in f.terms):
            raise ValueError(f"{name} is not of the shape produced by build_curve_forms")
        out.append(Form(2, {e[:2]: c for e, c in f.terms.items()}))
    return out[0], out[1]


@dataclass(frozen=True)
class CoordinateAction:
    """Scale each coordinate, then permute: ``y[perm[i]] = scalings[i] * x[i]``."""

    permutation: tuple[int, ...]
    scalings: tuple

    def __post_init__(self):
        n = len(self.permutation)
        if sorted(self.permutation) != list(range(n)) or len(self.scalings) != n:
            raise ValueError("permutation must be a bijection matching the scalings")

    @property
    def num_vars(self) -> int:
        return len(self.permutation)

    @classmethod
    def identity(cls, n: int) -> "CoordinateAction":
        return cls(tuple(range(n)), (1,) * n)

    def __mul__(self, other: "CoordinateAction") -> "CoordinateAction":
        """Composite ``self o other`` (apply ``other`` first)."""
        if other.num_vars != self.num_vars:
            raise ValueError("actions on different numbers of variables")
        perm = tuple(self.permutation[other.permutation[i]] for i in range(self.num_vars))
        scal = tuple(
            self.scalings[other.permutation[i]] * other.scalings[i] for i in range(self.num_vars)
        )
        return CoordinateAction(perm, scal)

    def inverse(self) -> "CoordinateAction":
        n = self.num_vars
        perm = [0] * n
        scal = [None] * n
        for i, j in enumerate(self.permutation):
            perm[j] = i
            scal[j] = _inv(self.scalings[i])
        return CoordinateAction(tuple(perm), tuple(scal))

    def act(self, point: Sequence) -> list:
        out = [None] * self.num_vars
        for i, j in enumerate(self.permutation):
            out[j] = self.scalings[i] * point[i]
        return out

    def __eq__(self, other):
        if not isinstance(other, CoordinateAction):
            return NotImplemented
        return self.permutation == other.permutation and all(
            a == b for a, b in zip(self.scalings, other.scalings)
        )

    def __hash__(self):
        return hash(self.permutation)


def xi_action(power: int = 1, zeta=ZETA) -> CoordinateAction:
    """``xi^power . [x0:x1:x2:x3] = [x0:x1:z^power x2:z^(2 power) x3]``."""
    k = power % 3
    return CoordinateAction((0, 1, 2, 3), (1, 1, zeta**k, zeta ** (2 * k)))


def apply_action(f: Form, g: CoordinateAction) -> Form:
    """The form ``x -> f(g^-1 . x)``."""
    if f.num_vars != g.num_vars:
        raise ValueError("form and action have different numbers of variables")
    inv_scal = [_inv(c) for c in g.scalings]
    out = {}
    for e, c in f.terms.items():
        new = [0] * f.num_vars
        coef = c
        for i, k in enumerate(e):
            if k:
                new[g.permutation[i]] = k
                coef = coef * inv_scal[i] ** k
        out[tuple(new)] = coef
    return Form(f.num_vars, out)


# ---------------------------------------------------------------------------
# Evaluation, Jacobians, resultants
# ---------------------------------------------------------------------------


def evaluate(f: Form, point: Sequence):
    if len(point) != f.num_vars:
        raise ValueError(f"point has {len(point)} coordinates, form has {f.num_vars} variables")
    total = 0
    for e, c in f.terms.items():
        term = c
        for x, k in zip(point, e):
            if k:
                term = term * x**k
        total = total + term
    return total


def jacobian_at(forms: Sequence[Form], point: Sequence) -> ExactMatrix:
    n = forms[0].num_vars
    if any(f.num_vars != n for f in forms):
        raise ValueError("forms must share the number of variables")
    return ExactMatrix([[evaluate(d, point) for d in f.gradient()] for f in forms], n)


def binary_coefficients(f: Form) -> list:
    """Coefficients of ``x0^(m-k) x1^k`` for ``k = 0..m``."""
    if f.num_vars != 2:
        raise ValueError("not a binary form")
    m = f.degree
    return [f.coefficient((m - k, k)) for k in range(m + 1)]


def sylvester_matrix(r: Form, s: Form) -> ExactMatrix:
    if r.is_zero() or s.is_zero():
        raise ZeroFormError("resultant of the zero form")
    a, b = binary_coefficients(r), binary_coefficients(s)
    m, n = r.degree, s.degree
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + a + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + b + [0] * (size - n - 1 - i))
    return ExactMatrix(rows, size)


def resultant_binary(r: Form, s: Form):
    """Sylvester resultant of two binary forms; zero iff they share a projective root."""
    return determinant(sylvester_matrix(r, s))


def discriminant(f: Form):
    """``Res(df/dx0, df/dx1)``, which vanishes iff ``f`` has a repeated root.

    Agrees with the classical discriminant up to a nonzero constant whenever
    the characteristic does not divide ``deg f``.
    """
    d0, d1 = f.derivative(0), f.derivative(1)
    if d0.is_zero() or d1.is_zero():
        return 0
    return resultant_binary(d0, d1)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\d+/\d+|\d+|x\d+|\^|\*|\+|-")
_ALLOWED = re.compile(r"[\dx^*+\-/\s]*")


def parse_form(text: str, num_vars: int | None = None) -> Form:
    """Parse ``"2*x0^2 + 3*x0*x1 - x1^2"`` or the one-term-per-line format."""
    text = text.replace("**", "^")
    if not text.strip() or not _ALLOWED.fullmatch(text):
        raise ValueError(f"cannot parse form from {text!r}")
    text = "\n".join(line for line in text.splitlines() if line.strip())
    tokens = _TOKEN.findall(text.replace("\n", " + "))
    terms: list[tuple[dict[int, int], Fraction]] = []
    sign, coef, exps, have = 1, Fraction(1), {}, False
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok in "+-":
            if have:
                terms.append((exps, sign * coef))
                sign, coef, exps, have = 1, Fraction(1), {}, False
            if tok == "-":
                sign = -sign
        elif tok == "*":
            pass
        elif tok.startswith("x"):
            var = int(tok[1:])
            k = 1
            if i + 1 < len(tokens) and tokens[i + 1] == "^":
                if i + 2 >= len(tokens) or not tokens[i + 2].isdigit():
                    raise ValueError(f"bad exponent in {text!r}")
                k = int(tokens[i + 2])
                i += 2
            exps[var] = exps.get(var, 0) + k
            have = True
        elif tok == "^":
            raise ValueError(f"dangling '^' in {text!r}")
        else:
            coef *= Fraction(tok)
            have = True
        i += 1
    if have:
        terms.append((exps, sign * coef))
    if not terms:
        raise ValueError(f"no terms in {text!r}")
    top = max((v for e, _ in terms for v in e), default=0) + 1
    n = top if num_vars is None else num_vars
    if top > n:
        raise ValueError(f"variable x{top - 1} out of range for {n} variables")
    return Form(n, [(tuple(e.get(v, 0) for v in range(n)), c) for e, c in terms])


def _rational(c) -> Fraction:
    if isinstance(c, CycNum):
        if not c.is_rational():
            raise TypeError("only rational coefficients are serializable")
        return c.a
    return Fraction(c)


def form_to_text(f: Form) -> str:
    """One ``coefficient * x0^a x1^b ...`` term per line, graded-lex order."""
    lines = []
    for e in sorted(f.terms, reverse=True):
        mono = " ".join(f"x{i}^{k}" for i, k in enumerate(e))
        lines.append(f"{_rational(f.terms[e])} * {mono}")
    return "\n".join(lines)


def form_to_json(f: Form) -> dict:
    terms = []
    for e in sorted(f.terms, reverse=True):
        q = _rational(f.terms[e])
        terms.append({"exp": list(e), "num": q.numerator, "den": q.denominator})
    return {"terms": terms}


def form_from_json(obj: dict | str, num_vars: int | None = None) -> Form:
    if isinstance(obj, str):
        obj = json.loads(obj)
    terms = obj["terms"]
    if not terms and num_vars is None:
        raise ValueError("empty form needs num_vars")
    n = len(terms[0]["exp"]) if num_vars is None else num_vars
    return Form(n, [(t["exp"], Fraction(t["num"], t.get("den", 1))) for t in terms])
