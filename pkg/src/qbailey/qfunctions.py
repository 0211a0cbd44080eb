"""q-Pochhammer symbols, q-binomials, the two orthogonal polynomial
families on the unit circle, and the constant-term functional.

Infinite products terminate because multiplying the base by q
eventually pushes every monomial past the q-cap; a hard iteration guard
turns any failure of that argument into an error instead of a silent
truncation.  Integrals of symmetric Laurent series against d(theta)/pi
are realized as z-constant-term extraction; ct_z checks the symmetry
hypothesis rather than trusting the caller.

The memo tables cache immutable series keyed by (args, truncation);
concurrent read-through population is safe (worst case recomputes a
value that is deterministic anyway).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError, NonInvertible
from .series import TruncatedSeries, Truncation

_qbinom_memo: dict = {}
_hermite_memo: dict = {}
_inv_qq_memo: dict = {}
_inv_tq_memo: dict = {}
_ratio_memo: dict = {}
_weight_memo: dict = {}


def poch_finite(base: TruncatedSeries, n: int) -> TruncatedSeries:
    """(a;q)_n = prod_{k=0}^{n-1} (1 - a q^k); empty product for n = 0.

    Negative n uses (a;q)_{-m} = 1/(a q^{-m};q)_m, which stays inside
    the ring only when the shifted factors have nonnegative exponents
    and unit constant term; otherwise a DomainError is raised and the
    rational-point backend must be used instead.
    """
    trunc = base.trunc
    if n >= 0:
        result = TruncatedSeries.one(trunc)
        cur = base
        for _ in range(n):
            result = result * (TruncatedSeries.one(trunc) - cur)
            cur = cur.shift(e_q=1)
        return result
    m = -n
    prod = TruncatedSeries.one(trunc)
    for j in range(1, m + 1):
        try:
            factor = TruncatedSeries.one(trunc) - base.shift(e_q=-j)
        except DomainError as exc:
            raise DomainError(
                f"(a;q)_{n}: factor with q^(-{j}) leaves the series ring") from exc
        prod = prod * factor
    try:
        return prod.invert()
    except NonInvertible as exc:
        raise DomainError(f"(a;q)_{n}: non-invertible factor product") from exc


def poch_infinite(base: TruncatedSeries) -> TruncatedSeries:
    """(a;q)_inf, stopping once a q-shifted copy of the base vanishes
    modulo the truncation (all later factors then equal 1)."""
    trunc = base.trunc
    guard = trunc.degree_bound() + 2
    result = TruncatedSeries.one(trunc)
    cur = base
    for _ in range(guard):
        if cur.is_zero():
            return result
        result = result * (TruncatedSeries.one(trunc) - cur)
        cur = cur.shift(e_q=1)
    raise DomainError(
        f"(a;q)_inf does not terminate within {guard} factors for base "
        f"{base!r}")


def inv_poch_infinite(base: TruncatedSeries) -> TruncatedSeries:
    """1/(a;q)_inf.  For a single-monomial base this is Euler's series
    sum_n a^n / (q;q)_n, which is much cheaper than a generic inversion."""
    trunc = base.trunc
    if base.term_count() == 1:
        [(mono, coeff)] = base.terms()
        if mono.e_q + mono.e_t + mono.e_s > 0:
            total = TruncatedSeries.zero(trunc)
            power = TruncatedSeries.one(trunc)
            n = 0
            while not power.is_zero():
                total = total + power * inv_qq(n, trunc)
                power = power * base
                n += 1
            return total
    return poch_infinite(base).invert()


def combined_poch(b, n: int, trunc: Truncation) -> TruncatedSeries:
    """prod_{i=0}^{n-1} (b - q^i) for rational b, the polynomial form of
    (1/b;q)_n b^n.  Valid at b = 0, where it collapses to
    (-1)^n q^(n(n-1)/2)."""
    scalar = TruncatedSeries.monomial(trunc, b)
    result = TruncatedSeries.one(trunc)
    qpow = TruncatedSeries.one(trunc)
    for _ in range(n):
        result = result * (scalar - qpow)
        qpow = qpow.shift(e_q=1)
    return result


def qbinomial(M: int, N: int, trunc: Truncation) -> TruncatedSeries:
    """Gaussian binomial coefficient as a truncated q-polynomial;
    zero unless 0 <= N <= M.  q-Pascal recursion, memoized."""
    if N < 0 or N > M or M < 0:
        return TruncatedSeries.zero(trunc)
    if N == 0 or N == M:
        return TruncatedSeries.one(trunc)
    key = (M, N, trunc)
    got = _qbinom_memo.get(key)
    if got is None:
        got = qbinomial(M - 1, N - 1, trunc) + qbinomial(M - 1, N, trunc).shift(e_q=N)
        _qbinom_memo[key] = got
    return got


def inv_qq(n: int, trunc: Truncation) -> TruncatedSeries:
    """1/(q;q)_n, memoized."""
    key = (n, trunc)
    got = _inv_qq_memo.get(key)
    if got is None:
        q = TruncatedSeries.variable(trunc, "q")
        got = poch_finite(q, n).invert()
        _inv_qq_memo[key] = got
    return got


def inv_tq(n: int, trunc: Truncation) -> TruncatedSeries:
    """1/(tq;q)_n, memoized."""
    key = (n, trunc)
    got = _inv_tq_memo.get(key)
    if got is None:
        tq = TruncatedSeries.monomial(trunc, 1, e_q=1, e_t=1)
        got = poch_finite(tq, n).invert()
        _inv_tq_memo[key] = got
    return got


def poch_ratio(param: str, j: int, trunc: Truncation) -> TruncatedSeries:
    """(x;q)_j / (q;q)_j for a ring variable x in {t, s}, memoized."""
    key = (param, j, trunc)
    got = _ratio_memo.get(key)
    if got is None:
        x = TruncatedSeries.variable(trunc, param)
        got = poch_finite(x, j) * inv_qq(j, trunc)
        _ratio_memo[key] = got
    return got


def hermite(n: int, trunc: Truncation) -> TruncatedSeries:
    """Continuous q-Hermite polynomial H_n(z;q) = sum_j [n,j]_q z^(n-2j)."""
    if n < 0:
        raise DomainError("hermite degree must be >= 0")
    key = (n, trunc)
    got = _hermite_memo.get(key)
    if got is None:
        got = TruncatedSeries.zero(trunc)
        for j in range(n + 1):
            got = got + qbinomial(n, j, trunc).shift(e_z=n - 2 * j)
        _hermite_memo[key] = got
    return got


def ultraspherical(n: int, trunc: Truncation, param: str = "t") -> TruncatedSeries:
    """Continuous q-ultraspherical polynomial
    C_n(z,x;q) = sum_j (x;q)_j (x;q)_{n-j} / ((q;q)_j (q;q)_{n-j}) z^(n-2j),
    with parameter x one of the ring variables t or s."""
    if n < 0:
        raise DomainError("ultraspherical degree must be >= 0")
    total = TruncatedSeries.zero(trunc)
    for j in range(n + 1):
        term = poch_ratio(param, j, trunc) * poch_ratio(param, n - j, trunc)
        total = total + term.shift(e_z=n - 2 * j)
    return total


def ct_z(f: TruncatedSeries) -> TruncatedSeries:
    """z-constant term of a series symmetric under z -> 1/z.

    On such series this equals the normalized circle integral
    (1/pi) * int_0^pi (.) d(theta); the symmetry hypothesis is checked.
    """
    if f.flip_z() != f:
        raise DomainError("ct_z requires a series symmetric under z -> 1/z")
    return TruncatedSeries(f.trunc,
                           {k: c for (k, c) in f._terms.items() if k[3] == 0})


def hermite_weight(trunc: Truncation) -> TruncatedSeries:
    """(z^2, z^-2; q)_inf, the q-Hermite orthogonality weight."""
    key = ("hermite", trunc)
    got = _weight_memo.get(key)
    if got is None:
        zz = TruncatedSeries.monomial(trunc, 1, e_z=2)
        zzi = TruncatedSeries.monomial(trunc, 1, e_z=-2)
        got = poch_infinite(zz) * poch_infinite(zzi)
        _weight_memo[key] = got
    return got


def ultraspherical_weight(trunc: Truncation) -> TruncatedSeries:
    """(z^2, z^-2; q)_inf / (s z^2, s z^-2; q)_inf."""
    if trunc.max_s is None:
        raise DomainError("ultraspherical weight needs a truncation with s")
    key = ("ultraspherical", trunc)
    got = _weight_memo.get(key)
    if got is None:
        szz = TruncatedSeries.monomial(trunc, 1, e_s=1, e_z=2)
        szzi = TruncatedSeries.monomial(trunc, 1, e_s=1, e_z=-2)
        got = hermite_weight(trunc) * inv_poch_infinite(szz) * inv_poch_infinite(szzi)
        _weight_memo[key] = got
    return got


def hermite_inner(m: int, n: int, trunc: Truncation) -> TruncatedSeries:
    """Constant-term pairing of H_m and H_n against the Hermite weight."""
    if m < 0 or n < 0:
        raise DomainError("inner product degrees must be >= 0")
    return ct_z(hermite(m, trunc) * hermite(n, trunc) * hermite_weight(trunc))


def ultraspherical_inner(m: int, n: int, trunc: Truncation) -> TruncatedSeries:
    """Constant-term pairing of C_m(z,s) and C_n(z,s) against the
    s-parameter weight."""
    if m < 0 or n < 0:
        raise DomainError("inner product degrees must be >= 0")
    cm = ultraspherical(m, trunc, "s")
    cn = ultraspherical(n, trunc, "s")
    return ct_z(cm * cn * ultraspherical_weight(trunc))


def hermite_inner_closed(m: int, n: int, trunc: Truncation) -> TruncatedSeries:
    """2 (q;q)_n / (q;q)_inf * delta_{m,n}."""
    if m != n:
        return TruncatedSeries.zero(trunc)
    q = TruncatedSeries.variable(trunc, "q")
    return (poch_finite(q, n) * inv_poch_infinite(q)).scale(2)


def ultraspherical_inner_closed(m: int, n: int, trunc: Truncation) -> TruncatedSeries:
    """2 (1-s) (s^2;q)_n (s,sq;q)_inf / ((1-s q^n) (q;q)_n (q,s^2;q)_inf)
    * delta_{m,n}."""
    if m != n:
        return TruncatedSeries.zero(trunc)
    one = TruncatedSeries.one(trunc)
    s = TruncatedSeries.variable(trunc, "s")
    sq = TruncatedSeries.monomial(trunc, 1, e_q=1, e_s=1)
    sqn = TruncatedSeries.monomial(trunc, 1, e_q=n, e_s=1)
    ss = TruncatedSeries.monomial(trunc, 1, e_s=2)
    q = TruncatedSeries.variable(trunc, "q")
    num = (one - s) * poch_finite(ss, n) * poch_infinite(s) * poch_infinite(sq)
    den_inv = ((one - sqn) * poch_finite(q, n)).invert() \
        * inv_poch_infinite(q) * inv_poch_infinite(ss)
    return (num * den_inv).scale(2)


def hermite_linearize(m: int, n: int, trunc: Truncation) -> TruncatedSeries:
    """Expansion of H_m * H_n in the Hermite basis:
    sum_l [m,l]_q [n,l]_q (q;q)_l H_{m+n-2l}."""
    total = TruncatedSeries.zero(trunc)
    q = TruncatedSeries.variable(trunc, "q")
    for l in range(min(m, n) + 1):
        coeff = qbinomial(m, l, trunc) * qbinomial(n, l, trunc) * poch_finite(q, l)
        total = total + coeff * hermite(m + n - 2 * l, trunc)
    return total


def hermite_expansion_coeff(n: int, l: int, trunc: Truncation) -> TruncatedSeries:
    """Coefficient of H_{2l} in the Hermite expansion of
    C_{2n}(z,t;q) / (t z^2, t z^-2;q)_inf, computed by the orthogonality
    route (constant-term pairing), independent of the closed form."""
    if n < 0 or l < 0:
        raise DomainError("expansion coefficient indices must be >= 0")
    tzz = TruncatedSeries.monomial(trunc, 1, e_t=1, e_z=2)
    tzzi = TruncatedSeries.monomial(trunc, 1, e_t=1, e_z=-2)
    integrand = (ultraspherical(2 * n, trunc, "t")
                 * inv_poch_infinite(tzz) * inv_poch_infinite(tzzi)
                 * hermite(2 * l, trunc) * hermite_weight(trunc))
    q = TruncatedSeries.variable(trunc, "q")
    return (ct_z(integrand) * poch_infinite(q) * inv_qq(2 * l, trunc)).scale(Fraction(1, 2))


def hermite_expansion_coeff_closed(n: int, l: int, trunc: Truncation) -> TruncatedSeries:
    """Closed form of the same coefficient:
    (t,tq;q)_inf (t^2;q)_{2n} t^(l-n) /
    ((t^2;q)_inf (q;q)_{2n} (q;q)_{l-n} (tq;q)_{l+n}); zero for l < n."""
    if l < n:
        return TruncatedSeries.zero(trunc)
    t = TruncatedSeries.variable(trunc, "t")
    tq = TruncatedSeries.monomial(trunc, 1, e_q=1, e_t=1)
    ttq2n = TruncatedSeries.monomial(trunc, 1, e_q=2 * n, e_t=2)
    # (t^2;q)_{2n} / (t^2;q)_inf = 1/(t^2 q^{2n};q)_inf
    out = (poch_infinite(t) * poch_infinite(tq) * inv_poch_infinite(ttq2n)
           * inv_qq(2 * n, trunc) * inv_qq(l - n, trunc) * inv_tq(l + n, trunc))
    return out.shift(e_t=l - n)


def weight_expansion_sides(trunc: Truncation) -> tuple[TruncatedSeries, TruncatedSeries]:
    """Both sides of the bilateral expansion of the weight ratio
    (z^2,z^-2;q)_inf / (t z^2,t z^-2;q)_inf in powers of z^2.

    The bilateral terms use index-combined polynomial forms so that no
    negative q- or t-power is ever formed:
      k >= 0:  prod_{i<k} (t - q^i) / (t;q)_k
      k = -m:  (-1)^m prod_{j=1..m} (q^j - t) / (1 - t q^j)
    and each side truncates because the minimum total degree of the
    k-th term grows with |k|.
    """
    tzz = TruncatedSeries.monomial(trunc, 1, e_t=1, e_z=2)
    tzzi = TruncatedSeries.monomial(trunc, 1, e_t=1, e_z=-2)
    lhs = hermite_weight(trunc) * inv_poch_infinite(tzz) * inv_poch_infinite(tzzi)

    one = TruncatedSeries.one(trunc)
    t = TruncatedSeries.variable(trunc, "t")
    q = TruncatedSeries.variable(trunc, "q")
    tq = TruncatedSeries.monomial(trunc, 1, e_q=1, e_t=1)
    bilateral = TruncatedSeries.zero(trunc)

    # k >= 0 branch
    num = TruncatedSeries.one(trunc)
    k = 0
    while not num.is_zero():
        bilateral = bilateral + (num * poch_finite(t, k).invert()).shift(e_z=2 * k)
        num = num * (t - TruncatedSeries.monomial(trunc, 1, e_q=k))
        k += 1
    # k = -m branch
    num = TruncatedSeries.one(trunc)
    den = TruncatedSeries.one(trunc)
    m = 1
    while True:
        num = num * (TruncatedSeries.monomial(trunc, 1, e_q=m) - t)
        if num.is_zero():
            break
        den = den * (one - tq.shift(e_q=m - 1))
        sign = -1 if m % 2 else 1
        bilateral = bilateral + (num * den.invert()).scale(sign).shift(e_z=-2 * m)
        m += 1

    tt = TruncatedSeries.monomial(trunc, 1, e_t=2)
    pref = (poch_infinite(t) * poch_infinite(tq)
            * (one - TruncatedSeries.monomial(trunc, 1, e_z=-2))
            * inv_poch_infinite(q) * inv_poch_infinite(tt))
    return lhs, pref * bilateral
