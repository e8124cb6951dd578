"""Assembly of the normalising series from the mould expansion, the
comould action on y-polynomials, and two independent verification
routes: the PDE oracle and the formal-integral residual.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from math import ceil

from .errors import ComouldDomainError
from .moulds import Mould, solve_V, symmetral_inverse
from .saddlenode import BivariateSeries, PhiSeries, SaddleNodeField
from .scalars import ONE, ZERO
from .series import (TruncatedSeries, euler_derivation, ps_mul,
                     solve_euler_shifted)
from .words import beta, contributing_words, weight, word_key

# y-polynomials are maps y-exponent -> TruncatedSeries with finitely
# many nonzero entries.
YPolynomial = dict


def y_monomial(k: int, x_order: int, series=None) -> YPolynomial:
    """The monomial s(x) * y^k (s = 1 by default)."""
    if series is None:
        series = TruncatedSeries.one(x_order)
    return {k: series}


def comould_apply(word, f: YPolynomial) -> YPolynomial:
    """Apply B_w = B_{n_r} ... B_{n_1} to f, i.e. B_{n_1} first.

    B_n = y^{n+1} d/dy maps s(x) y^k to k s(x) y^{k+n}.  Negative
    y-exponents must cancel along the way; a survivor is an internal
    invariant violation.
    """
    cur = {k: s for k, s in f.items() if not s.is_zero()}
    for n in word:
        nxt: YPolynomial = {}
        for k, s in cur.items():
            if k == 0:
                continue  # d/dy kills the constant-in-y part
            scaled = s.scale(k)
            if scaled.is_zero():
                continue
            k2 = k + n
            if k2 < 0:
                raise ComouldDomainError(
                    f"letter {n} drove y-exponent {k} below zero")
            nxt[k2] = nxt.get(k2, TruncatedSeries.zero(s.order)) + scaled
        cur = {k: s for k, s in nxt.items() if not s.is_zero()}
    return cur


def mould_expansion_apply(M: Mould, words, f: YPolynomial) -> YPolynomial:
    """sum over the given words of M^w * (B_w f): the action of a
    finitely supported mould expansion on a y-polynomial."""
    out: YPolynomial = {}
    for w in sorted(words, key=word_key):
        coeff = M.value(w)
        if coeff.is_zero():
            continue
        for k, s in comould_apply(w, f).items():
            term = ps_mul(coeff, s)
            out[k] = out.get(k, TruncatedSeries.zero(term.order)) + term
    return {k: s for k, s in out.items() if not s.is_zero()}


def _component_sum(field: SaddleNodeField, n: int, x_order: int,
                   mould: Mould, reverse: bool, threads: int = 1):
    """sum of beta(w) * M^w over contributing words of weight n - 1.

    Returns (series, word_count).  Words with beta = 0 are counted but
    never evaluated.  With threads > 1 the terms are computed in a
    thread pool; the reduction order is always the canonical word
    order, so results are schedule-independent.
    """
    words = sorted(
        contributing_words(n - 1, x_order, field.support, reverse=reverse),
        key=word_key)
    active = [w for w in words if beta(w) != 0]
    if threads > 1 and len(active) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(mould.value, active))
    else:
        values = [mould.value(w) for w in active]
    acc = TruncatedSeries.zero(x_order)
    for w, v in zip(active, values):
        acc = acc + v.scale(beta(w))
    return acc, len(words)


def phi_component(field: SaddleNodeField, n: int, x_order: int,
                  mould: Mould = None, threads: int = 1):
    """phi_n = sum beta(w) V^w over words of weight n - 1; returns
    (series, word_count)."""
    if n < 0:
        raise ValueError("component index must be >= 0")
    if mould is None:
        mould = solve_V(field, x_order)
    return _component_sum(field, n, x_order, mould, reverse=False,
                          threads=threads)


def phi_n(field: SaddleNodeField, n: int, x_order: int,
          mould: Mould = None) -> TruncatedSeries:
    return phi_component(field, n, x_order, mould)[0]


def psi_component(field: SaddleNodeField, n: int, x_order: int,
                  mould: Mould = None, threads: int = 1):
    """Same assembly as phi_component with the symmetral inverse of the
    solver mould; returns (series, word_count)."""
    if n < 0:
        raise ValueError("component index must be >= 0")
    if mould is None:
        mould = solve_V(field, x_order)
    inv = symmetral_inverse(mould)
    return _component_sum(field, n, x_order, inv, reverse=True,
                          threads=threads)


def psi_n(field: SaddleNodeField, n: int, x_order: int,
          mould: Mould = None) -> TruncatedSeries:
    return psi_component(field, n, x_order, mould)[0]


def assemble_phi(field: SaddleNodeField, n_max: int, x_order: int,
                 mould: Mould = None, inverse: bool = False) -> PhiSeries:
    """PhiSeries with components 0..n_max from the mould expansion
    (the inverse transformation when inverse=True)."""
    if mould is None:
        mould = solve_V(field, x_order)
    comp = {}
    for n in range(n_max + 1):
        s = (psi_n if inverse else phi_n)(field, n, x_order, mould)
        comp[n] = s
    return PhiSeries(comp, x_order)


def components_needed(field: SaddleNodeField, x_order: int,
                      y_order: int) -> int:
    """Largest component index that can contribute to the box
    (x <= x_order, y <= y_order) in a composition phi(x, psi(x, y)).

    Based on the valuation bound: phi_n is a sum over words of weight
    n - 1, which need at least ceil((n-1)/L) letters (L = max letter of
    the support), hence has x-valuation >= ceil(ceil((n-1)/L)/2); the
    term phi_n psi^n additionally carries x-valuation n - y_order from
    the component factors of psi^n that do not fit in the y-box.
    """
    sup = field.support
    if not sup:
        return y_order
    top = max(sup)
    n = y_order
    while True:
        m = n + 1
        if top <= 0 and m >= 2:
            # weight m - 1 >= 1 is unreachable: phi_m = 0
            return n
        vbound = max(1, ceil(ceil((m - 1) / top) / 2)) if m >= 2 else 1
        if vbound + max(0, m - y_order) > x_order:
            return n
        n = m


def oracle_phi(field: SaddleNodeField, n_max: int,
               x_order: int) -> PhiSeries:
    """Solve the conjugacy PDE x^2 d_x phi + y d_y phi = A(x, phi)
    order by order, independently of the mould machinery.

    The y^n component reads (x^2 d/dx + (n - 1)) phi_n = C_n(phi) with
    C_n the y^n coefficient of sum_m a_m(x) phi^{m+1}.  Since every a_m
    is divisible by x (and a_0 by x^2), the fixed-point iteration
    phi <- E(C(phi)) is a contraction in the x-adic sense and reaches
    its exact fixed point after at most (working order) steps.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    work = x_order + 2
    zero = TruncatedSeries.zero(work)
    comp = {n: zero for n in range(n_max + 1)}
    support = field.support
    letters = {m: field.letter_series(m, work) for m in support}

    def rhs_components(cur):
        # y^n coefficients of sum_m a_m(x) phi^{m+1},
        # phi = y + sum_k cur[k] y^k, for n <= n_max
        # powers of phi as maps y-exp -> series, y-exp truncated
        phi_poly = {1: TruncatedSeries.one(work)}
        for k, s in cur.items():
            phi_poly[k] = phi_poly.get(k, zero) + s
        max_pow = max((m + 1 for m in support), default=0)
        powers = {0: {0: TruncatedSeries.one(work)}}
        for j in range(1, max_pow + 1):
            prev = powers[j - 1]
            nxt: dict = {}
            for k1, s1 in prev.items():
                for k2, s2 in phi_poly.items():
                    k = k1 + k2
                    if k > n_max:
                        continue
                    term = ps_mul(s1, s2)
                    nxt[k] = nxt.get(k, zero) + term
            powers[j] = nxt
        out = {n: zero for n in range(n_max + 1)}
        for m in support:
            a = letters[m]
            for k, s in powers[m + 1].items():
                if k <= n_max:
                    out[k] = out[k] + ps_mul(a, s)
        return out

    def pad(s, order):
        # intermediate iterates may be shorter after the mu = 0 solve;
        # zero-padding is harmless, the affected coefficients influence
        # nothing at or below the working order
        if s.order >= order:
            return s.truncate(order)
        return TruncatedSeries(list(s.coeffs), order)

    for _ in range(work + 2):
        rhs = rhs_components(comp)
        new = {}
        for n in range(n_max + 1):
            new[n] = pad(solve_euler_shifted(rhs[n], n - 1), work)
        if new == comp:
            break
        comp = new
    else:
        raise AssertionError("oracle fixed-point iteration did not settle")
    return PhiSeries({n: s.truncate(x_order) for n, s in comp.items()},
                     x_order)


def compose_check(phi: PhiSeries, psi: PhiSeries, x_order: int,
                  y_order: int) -> BivariateSeries:
    """Residual phi(x, psi(x, y)) - y in the stated box; the zero
    series certifies mutual inversion there (provided both PhiSeries
    carry every component that can contribute, see
    components_needed)."""
    psib = psi.to_bivariate(x_order, y_order)
    out = psib  # the identity part Y of phi(x, Y)
    max_n = max(phi.components, default=0)
    power = BivariateSeries({(0, 0): ONE}, x_order, y_order)
    for n in range(0, max_n + 1):
        if n > 0:
            power = power * psib
        s = phi.components.get(n)
        if s is None or s.is_zero():
            continue
        coeffs = {}
        for (m, k), c in power.coeffs.items():
            for mm in range(1, min(s.order, x_order - m) + 1):
                cc = s.coeffs[mm]
                if cc:
                    key = (m + mm, k)
                    coeffs[key] = coeffs.get(key, ZERO) + c * cc
        out = out + BivariateSeries(coeffs, x_order, y_order)
    return out - BivariateSeries({(0, 1): ONE}, x_order, y_order)


def formal_integral_residual(field: SaddleNodeField, phi: PhiSeries,
                             u_order: int, z_order: int) -> dict:
    """Residual of the formal-integral equation dY/dz = A(-1/z, Y) for
    the ansatz Y = U + sum phi~_n(z) U^n, U = u e^z.

    Returns a map n -> residual coefficients (c_1..c_{z_order} of
    z^{-1}..z^{-z_order}) for each row 0 <= n <= u_order.  All rows are
    zero when the supplied components solve the conjugacy problem.

    Internally everything is carried as series in w = z^{-1}, where
    d/dz acts as -w^2 d/dw and s(x) maps to s(-w).
    """
    work = z_order + 1
    zero = TruncatedSeries.zero(work)

    def to_w(s: TruncatedSeries) -> TruncatedSeries:
        # x -> -w, padded to the working order (components are exact
        # to their stated order; beyond it they are unknown, so demand
        # enough x-order up front)
        if s.order < work:
            raise ValueError(
                f"need components to x-order {work}, got {s.order}")
        return TruncatedSeries(
            [s.coeffs[k] if k % 2 == 0 else -s.coeffs[k]
             for k in range(work + 1)], work)

    # Y as a polynomial in U with w-series coefficients
    Y = {1: TruncatedSeries.one(work)}
    for n in range(0, u_order + 1):
        s = phi.components.get(n)
        if s is not None and not s.is_zero():
            Y[n] = Y.get(n, zero) + to_w(s)

    def poly_mul(p, q):
        out = {}
        for i, a in p.items():
            for j, b in q.items():
                k = i + j
                if k > u_order:
                    continue
                term = ps_mul(a, b)
                out[k] = out.get(k, zero) + term
        return out

    # dY/dz row by row: d/dz (phi~_n U^n) = (phi~_n' + n phi~_n) U^n
    lhs = {}
    for n, s in Y.items():
        ds = -euler_derivation(s).truncate(work)  # d/dz in the w chart
        lhs[n] = ds + s.scale(n)

    # A(-1/z, Y) = Y + sum_m a~_m Y^{m+1}
    rhs = dict(Y)
    powers = {0: {0: TruncatedSeries.one(work)}}
    max_pow = max((m + 1 for m in field.support), default=0)
    for j in range(1, max_pow + 1):
        powers[j] = poly_mul(powers[j - 1], Y)
    for m in field.support:
        am = to_w(field.letter_series(m, work))
        for k, s in powers[m + 1].items():
            rhs[k] = rhs.get(k, zero) + ps_mul(am, s)

    residual = {}
    for n in range(0, u_order + 1):
        r = lhs.get(n, zero) - rhs.get(n, zero)
        residual[n] = tuple(r.coeffs[1: z_order + 1])
    return residual
