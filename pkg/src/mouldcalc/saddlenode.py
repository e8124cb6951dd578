"""Prepared saddle-node fields A(x, y) and their homogeneous letters.

The input is a bivariate polynomial representative of A with
A(0, y) = y and vanishing x*y coefficient.  Its decomposition
A = y + sum a_n(x) y^{n+1} (n >= -1) yields the letters a_n used by
the mould machinery.  Input polynomials are taken as exact: every
coefficient not stored is exactly zero, so letters can be produced at
any requested x-order.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import FieldValidationError
from .scalars import CQ, ONE, ZERO
from .series import TruncatedSeries, euler_derivation


class BivariateSeries:
    """Truncated bivariate series: map (m, n) -> coefficient of x^m y^n."""

    __slots__ = ("x_order", "y_order", "coeffs")

    def __init__(self, coeffs, x_order: int, y_order: int):
        clean = {}
        for (m, n), c in coeffs.items():
            if m < 0 or n < 0:
                raise ValueError(f"negative exponent ({m}, {n})")
            if m <= x_order and n <= y_order and c:
                clean[(m, n)] = c if isinstance(c, CQ) else CQ(c)
        object.__setattr__(self, "x_order", x_order)
        object.__setattr__(self, "y_order", y_order)
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("BivariateSeries is immutable")

    def coefficient(self, m: int, n: int) -> CQ:
        return self.coeffs.get((m, n), ZERO)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other):
        if not isinstance(other, BivariateSeries):
            return NotImplemented
        xo = min(self.x_order, other.x_order)
        yo = min(self.y_order, other.y_order)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, ZERO) + c
        return BivariateSeries(out, xo, yo)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return BivariateSeries({k: -c for k, c in self.coeffs.items()},
                               self.x_order, self.y_order)

    def __mul__(self, other):
        if not isinstance(other, BivariateSeries):
            return NotImplemented
        xo = min(self.x_order, other.x_order)
        yo = min(self.y_order, other.y_order)
        out = {}
        for (m1, n1), c1 in self.coeffs.items():
            for (m2, n2), c2 in other.coeffs.items():
                m, n = m1 + m2, n1 + n2
                if m <= xo and n <= yo:
                    key = (m, n)
                    out[key] = out.get(key, ZERO) + c1 * c2
        return BivariateSeries(out, xo, yo)

    def truncate(self, x_order: int, y_order: int) -> "BivariateSeries":
        return BivariateSeries(self.coeffs, min(self.x_order, x_order),
                               min(self.y_order, y_order))

    def __eq__(self, other):
        if not isinstance(other, BivariateSeries):
            return NotImplemented
        return (self.x_order == other.x_order
                and self.y_order == other.y_order
                and self.coeffs == other.coeffs)

    def __repr__(self):
        terms = [f"{c}*x^{m}*y^{n}"
                 for (m, n), c in sorted(self.coeffs.items())]
        body = " + ".join(terms) if terms else "0"
        return f"<{body}; orders ({self.x_order}, {self.y_order})>"


class SaddleNodeField:
    """Validated letters a_n(x), n >= -1, of a prepared field.

    Letters are exact polynomials in x: they can be rendered as
    TruncatedSeries at any order.
    """

    __slots__ = ("letters", "x_order", "y_order")

    def __init__(self, letters: dict):
        clean = {}
        max_deg = 0
        for n, poly in letters.items():
            poly = tuple(c if isinstance(c, CQ) else CQ(c) for c in poly)
            while poly and not poly[-1]:
                poly = poly[:-1]
            if not poly:
                continue
            if n < -1:
                raise ValueError(f"letter index {n} < -1")
            if poly[0]:
                raise FieldValidationError(
                    "A(0, y) = y", f"a_{n} has nonzero constant term")
            if n == 0 and len(poly) > 1 and poly[1]:
                raise FieldValidationError(
                    "d2A/dxdy(0, 0) = 0", "a_0 has nonzero x^1 coefficient")
            clean[n] = poly
            max_deg = max(max_deg, len(poly) - 1)
        object.__setattr__(self, "letters", clean)
        object.__setattr__(self, "x_order", max_deg)
        object.__setattr__(
            self, "y_order",
            max((n + 1 for n in clean), default=0))

    def __setattr__(self, name, value):
        raise AttributeError("SaddleNodeField is immutable")

    @property
    def support(self) -> tuple:
        """Sorted letter indices with nonzero a_n."""
        return tuple(sorted(self.letters))

    def letter_series(self, n: int, order: int) -> TruncatedSeries:
        """a_n as a TruncatedSeries at the requested order (exact,
        because the stored letters are polynomials)."""
        poly = self.letters.get(n, ())
        return TruncatedSeries(list(poly[: order + 1]), order)

    def to_bivariate(self, x_order=None, y_order=None) -> BivariateSeries:
        """Reassemble A = y + sum a_n y^{n+1}."""
        if x_order is None:
            x_order = self.x_order
        if y_order is None:
            y_order = self.y_order
        out = {(0, 1): ONE}
        for n, poly in self.letters.items():
            for m, c in enumerate(poly):
                if c and m <= x_order and n + 1 <= y_order:
                    key = (m, n + 1)
                    out[key] = out.get(key, ZERO) + c
        return BivariateSeries(out, x_order, y_order)

    def __repr__(self):
        return f"<SaddleNodeField support={self.support}>"


class PhiSeries:
    """Components phi_n(x) of a fibred transformation
    (x, y) -> (x, y + sum phi_n(x) y^n); each phi_n is in xC[[x]]."""

    __slots__ = ("components", "x_order")

    def __init__(self, components: dict, x_order: int):
        clean = {}
        for n, s in components.items():
            if n < 0:
                raise ValueError(f"component index {n} < 0")
            if s.constant_term():
                raise FieldValidationError(
                    "phi_n in xC[[x]]", f"phi_{n} has a constant term")
            clean[n] = s.truncate(min(s.order, x_order))
        object.__setattr__(self, "components", clean)
        object.__setattr__(self, "x_order", x_order)

    def __setattr__(self, name, value):
        raise AttributeError("PhiSeries is immutable")

    def component(self, n: int) -> TruncatedSeries:
        return self.components.get(n, TruncatedSeries.zero(self.x_order))

    def to_bivariate(self, x_order: int, y_order: int) -> BivariateSeries:
        """phi(x, y) = y + sum phi_n(x) y^n as a bivariate series."""
        out = {(0, 1): ONE}
        for n, s in self.components.items():
            if n > y_order:
                continue
            for m in range(1, min(s.order, x_order) + 1):
                c = s.coeffs[m]
                if c:
                    key = (m, n)
                    out[key] = out.get(key, ZERO) + c
        return BivariateSeries(out, x_order, y_order)

    def __repr__(self):
        ns = sorted(self.components)
        return f"<PhiSeries components={ns} x_order={self.x_order}>"


def extract_letters(A: BivariateSeries, repair: bool = False) -> SaddleNodeField:
    """Decompose A = y + sum a_n(x) y^{n+1} after validating the
    prepared-form conditions.

    With repair=True the offending terms (A(0, y) - y and the x*y
    monomial) are zeroed out instead of raising.
    """
    coeffs = dict(A.coeffs)
    for n in range(A.y_order + 1):
        c = coeffs.get((0, n), ZERO)
        expected = ONE if n == 1 else ZERO
        if c != expected:
            if repair:
                if n == 1:
                    coeffs[(0, 1)] = ONE
                else:
                    coeffs.pop((0, n), None)
            else:
                raise FieldValidationError(
                    "A(0, y) = y", f"coefficient of y^{n} at x = 0 is {c}")
    if (0, 1) not in coeffs:
        if repair:
            coeffs[(0, 1)] = ONE
        else:
            raise FieldValidationError(
                "A(0, y) = y", "coefficient of y at x = 0 is 0")
    if coeffs.get((1, 1), ZERO):
        if repair:
            coeffs.pop((1, 1), None)
        else:
            raise FieldValidationError(
                "d2A/dxdy(0, 0) = 0",
                f"x*y coefficient is {coeffs[(1, 1)]}")

    letters: dict[int, list] = {}
    for (m, n), c in coeffs.items():
        if not c:
            continue
        if (m, n) == (0, 1):
            continue
        idx = n - 1  # a_{n-1} multiplies y^n
        poly = letters.setdefault(idx, [ZERO] * (A.x_order + 1))
        poly[m] = poly[m] + c
    # the identity part y contributes nothing to a_0
    return SaddleNodeField(letters)


def substitute_phi(A: BivariateSeries, phi: PhiSeries,
                   x_order=None, y_order=None) -> BivariateSeries:
    """A(x, phi(x, y)), truncated to the requested box."""
    if x_order is None:
        x_order = min(A.x_order, phi.x_order)
    if y_order is None:
        y_order = A.y_order
    phib = phi.to_bivariate(x_order, y_order)
    # powers of phi(x, y) up to the y-degree of A
    powers = {0: BivariateSeries({(0, 0): ONE}, x_order, y_order)}
    max_pow = max((n for (_, n) in A.coeffs), default=0)
    for j in range(1, max_pow + 1):
        powers[j] = powers[j - 1] * phib
    out = BivariateSeries({}, x_order, y_order)
    for (m, n), c in A.coeffs.items():
        if m > x_order:
            continue
        term = BivariateSeries(
            {(m + mm, nn): c * cc for (mm, nn), cc in powers[n].coeffs.items()
             if m + mm <= x_order},
            x_order, y_order)
        out = out + term
    return out


def pde_residual(A: BivariateSeries, phi: PhiSeries,
                 x_order=None, y_order=None) -> BivariateSeries:
    """x^2 d_x phi + y d_y phi - A(x, phi(x, y)).

    The zero series certifies that (x, y) -> (x, phi(x, y)) conjugates
    the normal form to the field, to the stated orders.
    """
    if x_order is None:
        x_order = min(A.x_order, phi.x_order)
    if y_order is None:
        y_order = A.y_order
    out: dict = {}
    # y d_y phi = y + sum n phi_n y^n
    out[(0, 1)] = ONE
    for n, s in phi.components.items():
        if n > y_order:
            continue
        ds = euler_derivation(s)
        for m in range(1, x_order + 1):
            c = ZERO
            if m <= ds.order:
                c = ds.coeffs[m]
            if m <= s.order:
                c = c + s.coeffs[m] * n
            if c:
                key = (m, n)
                out[key] = out.get(key, ZERO) + c
    lhs = BivariateSeries(out, x_order, y_order)
    return lhs - substitute_phi(A, phi, x_order, y_order)


# -- JSON field files ---------------------------------------------------

def field_to_json(A: BivariateSeries) -> dict:
    monomials = []
    for (m, n), c in sorted(A.coeffs.items()):
        monomials.append({
            "m": m, "n": n,
            "re": [c.re.numerator, c.re.denominator],
            "im": [c.im.numerator, c.im.denominator],
        })
    return {"x_order": A.x_order, "y_order": A.y_order,
            "monomials": monomials}


def field_from_json(obj) -> BivariateSeries:
    try:
        x_order = int(obj["x_order"])
        y_order = int(obj["y_order"])
        coeffs = {}
        for mono in obj["monomials"]:
            m, n = int(mono["m"]), int(mono["n"])
            re = Fraction(int(mono["re"][0]), int(mono["re"][1]))
            im = Fraction(int(mono["im"][0]), int(mono["im"][1]))
            c = CQ(re, im)
            if c:
                coeffs[(m, n)] = coeffs.get((m, n), ZERO) + c
    except (KeyError, TypeError, IndexError, ValueError,
            ZeroDivisionError) as exc:
        raise ValueError(f"malformed field file: {exc}") from exc
    return BivariateSeries(coeffs, x_order, y_order)


def load_field_file(path) -> BivariateSeries:
    with open(path, "r", encoding="utf-8") as fh:
        return field_from_json(json.load(fh))
