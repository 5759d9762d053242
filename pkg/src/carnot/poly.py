"""Exact algebra of truncated polynomial vector fields.

Polynomials are multivariate with Fraction coefficients and a hard cap on
total degree: products silently drop monomials above the cap and record that
truncation happened (the ``truncated`` flag is sticky through arithmetic).
Vector fields are n-tuples of such polynomials, acting on functions as
derivations. Everything here is exact; floats only appear in ``eval_float``
and in the numerics built on top.

Axis indices are 0-based throughout the Python API. The text format for
literals uses 1-based variables ``x1 .. xn``, e.g. ``"1/2*x1^2*x3 - x2"``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch, PolyParseError

MAX_DIM = 8

Monomial = tuple  # tuple[int, ...], one exponent per axis


def _check_dim(dim: int) -> None:
    if not 1 <= dim <= MAX_DIM:
        raise DimensionMismatch(f"dimension must be in 1..{MAX_DIM}, got {dim}")


@dataclass(frozen=True, eq=True)
class Poly:
    """Total-degree-truncated polynomial with exact rational coefficients."""

    coeffs: dict
    dim: int
    cap: int
    truncated: bool = False

    # -- construction ------------------------------------------------------

    @staticmethod
    def make(coeffs, dim, cap, truncated=False) -> "Poly":
        """Normalize: drop zeros, drop (and flag) monomials above the cap."""
        _check_dim(dim)
        clean = {}
        for expo, c in coeffs.items():
            expo = tuple(int(e) for e in expo)
            if len(expo) != dim or any(e < 0 for e in expo):
                raise DimensionMismatch(f"bad exponent {expo} for dim {dim}")
            c = Fraction(c)
            if c == 0:
                continue
            if sum(expo) > cap:
                truncated = True
                continue
            clean[expo] = clean.get(expo, Fraction(0)) + c
        clean = {e: c for e, c in clean.items() if c != 0}
        return Poly(clean, dim, cap, truncated)

    @staticmethod
    def zero(dim, cap) -> "Poly":
        _check_dim(dim)
        return Poly({}, dim, cap)

    @staticmethod
    def const(value, dim, cap) -> "Poly":
        return Poly.make({(0,) * dim: Fraction(value)}, dim, cap)

    @staticmethod
    def variable(i, dim, cap) -> "Poly":
        _check_dim(dim)
        if not 0 <= i < dim:
            raise DimensionMismatch(f"variable index {i} out of range for dim {dim}")
        expo = tuple(1 if j == i else 0 for j in range(dim))
        return Poly({expo: Fraction(1)}, dim, cap)

    @staticmethod
    def monomial(expo, coeff, cap) -> "Poly":
        return Poly.make({tuple(expo): Fraction(coeff)}, len(expo), cap)

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Max total degree, or -1 for the zero polynomial."""
        return max((sum(e) for e in self.coeffs), default=-1)

    def constant_term(self) -> Fraction:
        return self.coeffs.get((0,) * self.dim, Fraction(0))

    def min_weighted_degree(self, weights) -> int | None:
        """Smallest weighted degree among stored monomials, None if zero."""
        if not self.coeffs:
            return None
        return min(sum(w * e for w, e in zip(weights, expo)) for expo in self.coeffs)

    def weighted_part(self, weights, d) -> "Poly":
        """Monomials whose weighted degree equals d, exactly."""
        kept = {
            expo: c
            for expo, c in self.coeffs.items()
            if sum(w * e for w, e in zip(weights, expo)) == d
        }
        return Poly(dict(kept), self.dim, self.cap, self.truncated)

    # -- arithmetic --------------------------------------------------------

    def _binary_check(self, other: "Poly") -> None:
        if self.dim != other.dim or self.cap != other.cap:
            raise DimensionMismatch(
                f"operands disagree: dim {self.dim}/{other.dim}, "
                f"cap {self.cap}/{other.cap}"
            )

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other, self.dim, self.cap)
        self._binary_check(other)
        out = dict(self.coeffs)
        for expo, c in other.coeffs.items():
            s = out.get(expo, Fraction(0)) + c
            if s == 0:
                out.pop(expo, None)
            else:
                out[expo] = s
        return Poly(out, self.dim, self.cap, self.truncated or other.truncated)

    def __neg__(self):
        return Poly(
            {e: -c for e, c in self.coeffs.items()}, self.dim, self.cap, self.truncated
        )

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other, self.dim, self.cap)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if c == 0:
                return Poly({}, self.dim, self.cap, self.truncated)
            return Poly(
                {e: c * v for e, v in self.coeffs.items()},
                self.dim,
                self.cap,
                self.truncated,
            )
        self._binary_check(other)
        out = {}
        dropped = False
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                expo = tuple(a + b for a, b in zip(e1, e2))
                if sum(expo) > self.cap:
                    dropped = True
                    continue
                s = out.get(expo, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(expo, None)
                else:
                    out[expo] = s
        return Poly(
            out, self.dim, self.cap, self.truncated or other.truncated or dropped
        )

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = Poly.const(1, self.dim, self.cap)
        for _ in range(n):
            out = out * self
        return out

    def derive(self, i: int) -> "Poly":
        """Exact partial derivative along axis i (0-based)."""
        if not 0 <= i < self.dim:
            raise DimensionMismatch(f"axis {i} out of range for dim {self.dim}")
        out = {}
        for expo, c in self.coeffs.items():
            if expo[i] == 0:
                continue
            new = list(expo)
            new[i] -= 1
            out[tuple(new)] = c * expo[i]
        return Poly(out, self.dim, self.cap, self.truncated)

    def compose(self, args: Sequence["Poly"]) -> "Poly":
        """Substitute args[i] for variable i. Result truncated at the cap."""
        if len(args) != self.dim:
            raise DimensionMismatch("wrong number of substitution arguments")
        if not args:
            return self
        adim, acap = args[0].dim, args[0].cap
        out = Poly.zero(adim, acap)
        dropped = self.truncated
        for expo, c in self.coeffs.items():
            term = Poly.const(c, adim, acap)
            for i, e in enumerate(expo):
                if e:
                    term = term * (args[i] ** e)
            dropped = dropped or term.truncated
            out = out + term
        return Poly(out.coeffs, adim, acap, dropped)

    # -- evaluation --------------------------------------------------------

    def eval_exact(self, point) -> Fraction:
        if len(point) != self.dim:
            raise DimensionMismatch("point dimension mismatch")
        pt = [Fraction(x) for x in point]
        total = Fraction(0)
        for expo, c in self.coeffs.items():
            term = c
            for x, e in zip(pt, expo):
                if e:
                    term *= x**e
            total += term
        return total

    def eval_float(self, point) -> float:
        if len(point) != self.dim:
            raise DimensionMismatch("point dimension mismatch")
        total = 0.0
        for expo, c in self.coeffs.items():
            term = float(c)
            for x, e in zip(point, expo):
                if e:
                    term *= float(x) ** e
            total += term
        return total

    def with_cap(self, cap: int) -> "Poly":
        return Poly.make(self.coeffs, self.dim, cap, self.truncated)

    # -- text form ---------------------------------------------------------

    def to_text(self) -> str:
        if not self.coeffs:
            return "0"
        items = sorted(self.coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0]))
        parts = []
        for expo, c in items:
            factors = [
                f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}"
                for i, e in enumerate(expo)
                if e
            ]
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = str(mag) + "*" + "*".join(factors)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"Poly({self.to_text()!r}, dim={self.dim}, cap={self.cap})"


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+|\.\d+)?)|(?P<var>x\d+)|(?P<op>[\^*+-]))"
)


def parse_poly(text: str, dim: int, cap: int) -> Poly:
    """Parse a polynomial literal such as ``"1/2*x1^2*x3 - x2 + 3"``.

    Accepted pieces: rational coefficients (``3``, ``1/2``, ``0.25``),
    variables ``x1 .. xn``, powers with ``^``, products with ``*``, and
    top-level ``+``/``-``.
    """
    _check_dim(dim)
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise PolyParseError("unexpected character", text, pos)
        pos = m.end()
        if m.lastgroup == "num":
            tokens.append(("num", Fraction(m.group("num"))))
        elif m.lastgroup == "var":
            idx = int(m.group("var")[1:])
            if not 1 <= idx <= dim:
                raise PolyParseError(f"variable x{idx} exceeds dimension {dim}", text, m.start())
            tokens.append(("var", idx - 1))
        else:
            tokens.append((m.group("op"), None))
    if not tokens:
        raise PolyParseError("empty polynomial literal", text, 0)

    result = Poly.zero(dim, cap)
    i = 0
    n = len(tokens)
    while i < n:
        sign = Fraction(1)
        while i < n and tokens[i][0] in "+-":
            if tokens[i][0] == "-":
                sign = -sign
            i += 1
        if i >= n:
            raise PolyParseError("dangling sign", text, len(text))
        term = Poly.const(sign, dim, cap)
        expect_factor = True
        while i < n:
            kind, value = tokens[i]
            if kind == "num" and expect_factor:
                term = term * value
                i += 1
            elif kind == "var" and expect_factor:
                power = 1
                i += 1
                if i < n and tokens[i][0] == "^":
                    i += 1
                    if i >= n or tokens[i][0] != "num" or tokens[i][1].denominator != 1:
                        raise PolyParseError("exponent must be an integer", text, len(text))
                    power = int(tokens[i][1])
                    if power < 0:
                        raise PolyParseError("negative exponent", text, len(text))
                    i += 1
                term = term * (Poly.variable(value, dim, cap) ** power)
            elif kind == "*":
                i += 1
                expect_factor = True
                continue
            else:
                break
            expect_factor = False
        if expect_factor:
            raise PolyParseError("term ended unexpectedly", text, len(text))
        result = result + term
    return result


@dataclass(frozen=True, eq=True)
class VectorField:
    """Polynomial vector field: component j is the coefficient of d/dx_j."""

    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise DimensionMismatch("vector field needs at least one component")
        dim, cap = comps[0].dim, comps[0].cap
        if len(comps) != dim:
            raise DimensionMismatch(
                f"{len(comps)} components for dimension-{dim} polynomials"
            )
        for c in comps:
            if c.dim != dim or c.cap != cap:
                raise DimensionMismatch("components disagree on dim or cap")
        object.__setattr__(self, "components", comps)

    @property
    def dim(self) -> int:
        return self.components[0].dim

    @property
    def cap(self) -> int:
        return self.components[0].cap

    @property
    def truncated(self) -> bool:
        return any(c.truncated for c in self.components)

    @staticmethod
    def zero(dim, cap) -> "VectorField":
        return VectorField(tuple(Poly.zero(dim, cap) for _ in range(dim)))

    @staticmethod
    def coordinate(i, dim, cap) -> "VectorField":
        """The constant field d/dx_i."""
        comps = [Poly.zero(dim, cap) for _ in range(dim)]
        comps[i] = Poly.const(1, dim, cap)
        return VectorField(tuple(comps))

    @staticmethod
    def from_strings(literals: Sequence[str], cap: int) -> "VectorField":
        dim = len(literals)
        return VectorField(tuple(parse_poly(s, dim, cap) for s in literals))

    def to_strings(self):
        return [c.to_text() for c in self.components]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __add__(self, other):
        return VectorField(
            tuple(a + b for a, b in zip(self.components, other.components))
        )

    def __sub__(self, other):
        return VectorField(
            tuple(a - b for a, b in zip(self.components, other.components))
        )

    def __neg__(self):
        return VectorField(tuple(-a for a in self.components))

    def scale(self, c) -> "VectorField":
        return VectorField(tuple(comp * c for comp in self.components))

    def apply(self, a: Poly) -> Poly:
        """Act as a derivation: f(a) = sum_j f_j * da/dx_j."""
        if a.dim != self.dim or a.cap != self.cap:
            raise DimensionMismatch("function does not match the field's ring")
        out = Poly.zero(self.dim, self.cap)
        for j, fj in enumerate(self.components):
            if not fj.is_zero():
                out = out + fj * a.derive(j)
        return out

    def bracket(self, other: "VectorField") -> "VectorField":
        """Lie bracket [self, other], component-wise f(g_j) - g(f_j)."""
        if other.dim != self.dim or other.cap != self.cap:
            raise DimensionMismatch("bracket operands disagree")
        return VectorField(
            tuple(
                self.apply(gj) - other.apply(fj)
                for fj, gj in zip(self.components, other.components)
            )
        )

    def evaluate(self, point):
        """Float evaluation of every component at a point."""
        return tuple(c.eval_float(point) for c in self.components)

    def evaluate_exact(self, point):
        return tuple(c.eval_exact(point) for c in self.components)

    def constant_part(self):
        """The value at the origin, as exact Fractions."""
        return tuple(c.constant_term() for c in self.components)

    def min_weighted_degree(self, weights) -> int | None:
        """min over nonzero monomials of w(alpha) - w_j; None for the zero field."""
        best = None
        for j, comp in enumerate(self.components):
            d = comp.min_weighted_degree(weights)
            if d is None:
                continue
            d -= weights[j]
            if best is None or d < best:
                best = d
        return best

    def homogeneous_part(self, weights, d) -> "VectorField":
        """Keep exactly the monomial terms of weighted degree d."""
        return VectorField(
            tuple(
                comp.weighted_part(weights, d + weights[j])
                for j, comp in enumerate(self.components)
            )
        )

    def weighted_degree_range(self, weights):
        degs = set()
        for j, comp in enumerate(self.components):
            for expo in comp.coeffs:
                degs.add(sum(w * e for w, e in zip(weights, expo)) - weights[j])
        return sorted(degs)

    def with_cap(self, cap) -> "VectorField":
        return VectorField(tuple(c.with_cap(cap) for c in self.components))

    def __repr__(self):
        return f"VectorField({self.to_strings()})"


def lie_bracket(f: VectorField, g: VectorField) -> VectorField:
    return f.bracket(g)


def ad_power(f0: VectorField, f: VectorField, ell: int) -> VectorField:
    """ell-fold iterated bracket [f0, [f0, ... [f0, f]]]; ell = 0 gives f."""
    if ell < 0:
        raise ValueError("ad power must be >= 0")
    out = f
    for _ in range(ell):
        out = f0.bracket(out)
    return out


def weighted_degree(alpha, j, weights) -> int:
    """Weighted degree of the monomial field x^alpha d/dx_j: w(alpha) - w_j."""
    if not 0 <= j < len(weights):
        raise DimensionMismatch(f"axis {j} out of range")
    return sum(w * a for w, a in zip(weights, alpha)) - weights[j]


def pushforward_series(f0: VectorField, f: VectorField, order: int):
    """Taylor coefficients of the backward-flow pushforward of f along f0.

    Returns [(ell, g_ell)] for ell = 0..order with g_ell = ad^ell(f0)(f)/ell!,
    so that the pulled-back field at time t is approximately
    sum_ell t^ell g_ell.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    out = []
    current = f
    fact = 1
    for ell in range(order + 1):
        if ell > 0:
            current = f0.bracket(current)
            fact *= ell
        out.append((ell, current.scale(Fraction(1, fact))))
    return out


def evaluate(f: VectorField, point):
    return f.evaluate(point)
