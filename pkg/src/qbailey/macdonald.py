"""The four series representations of the rank-one Macdonald-type index
for odd D-series Dynkin data, the parametrized single-sum/multisum
identity, and the multisum Rogers-Ramanujan identity.

Summation bounds are derived from exponent prefactors, never guessed:
a summand is enumerated only while its guaranteed minimum q- and
t-degree fits the caps, and the enumeration orders make those tails
monotone.  The four representations are computed independently so that
their equality is a genuine cross-check, and all outputs share one
canonical term order so a difference localizes to a single monomial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, InternalConsistencyError
from .qfunctions import (combined_poch, hermite, inv_qq, inv_poch_infinite,
                         poch_finite, poch_infinite, poch_ratio, qbinomial)
from .report import IdentityReport, Stopwatch, series_report
from .series import TruncatedSeries, Truncation

_binom2 = lambda n: n * (n - 1) // 2

_inv_tpoch_memo: dict = {}
_prefactor_memo: dict = {}

REPRESENTATIONS = ("bosonic", "fermionic", "fermionic2", "original")


@dataclass(frozen=True)
class DynkinData:
    """Adjacency matrix of the odd D-series Dynkin diagram on 2k+1
    nodes: a path 1..(2k-1) with the two fork nodes 2k and 2k+1 both
    attached to node 2k-1."""

    k: int
    adjacency: tuple

    @classmethod
    def build(cls, k: int) -> "DynkinData":
        if k < 1:
            raise DomainError("k must be >= 1")
        size = 2 * k + 1
        a = [[0] * size for _ in range(size)]
        for i in range(2 * k - 2):          # path edges 1-2, ..., (2k-2)-(2k-1)
            a[i][i + 1] = a[i + 1][i] = 1
        a[2 * k - 2][2 * k - 1] = a[2 * k - 1][2 * k - 2] = 1   # fork edge to 2k
        a[2 * k - 2][2 * k] = a[2 * k][2 * k - 2] = 1           # fork edge to 2k+1
        return cls(k, tuple(tuple(row) for row in a))

    def __post_init__(self):
        size = 2 * self.k + 1
        if len(self.adjacency) != size or any(len(r) != size for r in self.adjacency):
            raise InternalConsistencyError("adjacency matrix has wrong shape")
        for i in range(size):
            if self.adjacency[i][i] != 0:
                raise InternalConsistencyError("adjacency diagonal must vanish")
            for j in range(size):
                if self.adjacency[i][j] != self.adjacency[j][i]:
                    raise InternalConsistencyError("adjacency must be symmetric")

    def edges(self) -> set[tuple[int, int]]:
        """1-based edge set {(i, j) : i < j, a_ij = 1}."""
        size = 2 * self.k + 1
        return {(i + 1, j + 1) for i in range(size) for j in range(i + 1, size)
                if self.adjacency[i][j]}


@dataclass(frozen=True)
class IndexSpec:
    k: int
    representation: str
    trunc: Truncation

    def __post_init__(self):
        if self.k < 1:
            raise DomainError("k must be >= 1")
        if self.representation not in REPRESENTATIONS:
            raise DomainError(f"unknown representation {self.representation!r}")

    def compute(self) -> TruncatedSeries:
        fn = {"bosonic": bosonic_index, "fermionic": fermionic_index,
              "fermionic2": fermionic2_index, "original": original_index}
        return fn[self.representation](self.k, self.trunc)


def _inv_tpoch(n: int, trunc: Truncation) -> TruncatedSeries:
    # 1/(t;q)_n, memoized
    key = (n, trunc)
    got = _inv_tpoch_memo.get(key)
    if got is None:
        t = TruncatedSeries.variable(trunc, "t")
        got = poch_finite(t, n).invert()
        _inv_tpoch_memo[key] = got
    return got


def _tq_qq_inf_power(k: int, trunc: Truncation) -> TruncatedSeries:
    # ((t;q)_inf (q;q)_inf)^k, memoized
    key = (k, trunc)
    got = _prefactor_memo.get(key)
    if got is None:
        t = TruncatedSeries.variable(trunc, "t")
        q = TruncatedSeries.variable(trunc, "q")
        got = (poch_infinite(t) * poch_infinite(q)) ** k
        _prefactor_memo[key] = got
    return got


def bosonic_index(k: int, trunc: Truncation) -> TruncatedSeries:
    """Single-sum (alternating, product-prefactored) representation:
    1/(t,tz^2,t z^-2;q)_inf * sum_n (-1)^n t^((k+1)n) q^(k n^2 + binom(n,2))
      (q^(n+1);q)_n (t^2 q^(2n);q)_inf / ((t q^n;q)_n (t q^(2n+1);q)_inf)
      * sum_j (t;q)_j (t;q)_{2n-j} / ((q;q)_j (q;q)_{2n-j}) z^(2j-2n)."""
    if k < 1:
        raise DomainError("k must be >= 1")
    t = TruncatedSeries.variable(trunc, "t")
    tzz = TruncatedSeries.monomial(trunc, 1, e_t=1, e_z=2)
    tzzi = TruncatedSeries.monomial(trunc, 1, e_t=1, e_z=-2)
    pref = inv_poch_infinite(t) * inv_poch_infinite(tzz) * inv_poch_infinite(tzzi)

    total = TruncatedSeries.zero(trunc)
    n = 0
    while (k + 1) * n <= trunc.max_t and k * n * n + _binom2(n) <= trunc.max_q:
        term = _bosonic_summand(k, n, trunc)
        total = total + term
        n += 1
    return pref * total


def _bosonic_summand(k: int, n: int, trunc: Truncation) -> TruncatedSeries:
    sign = -1 if n % 2 else 1
    mono = TruncatedSeries.monomial(trunc, sign,
                                    e_q=k * n * n + _binom2(n), e_t=(k + 1) * n)
    qn1 = TruncatedSeries.monomial(trunc, 1, e_q=n + 1)
    ttq2n = TruncatedSeries.monomial(trunc, 1, e_q=2 * n, e_t=2)
    tqn = TruncatedSeries.monomial(trunc, 1, e_q=n, e_t=1)
    tq2n1 = TruncatedSeries.monomial(trunc, 1, e_q=2 * n + 1, e_t=1)
    val = (mono * poch_finite(qn1, n) * poch_infinite(ttq2n)
           * poch_finite(tqn, n).invert() * inv_poch_infinite(tq2n1))
    jsum = TruncatedSeries.zero(trunc)
    for j in range(2 * n + 1):
        jsum = jsum + (poch_ratio("t", j, trunc)
                       * poch_ratio("t", 2 * n - j, trunc)).shift(e_z=2 * j - 2 * n)
    return val * jsum


def _chains(k: int, cap: int):
    # nondecreasing tuples (n_1 <= ... <= n_k) with sum <= cap
    def rec(level, lo, left, prefix):
        if level == 0:
            yield prefix
            return
        # remaining levels must each be >= lo, so lo * level <= left
        v = lo
        while v * level <= left:
            yield from rec(level - 1, v, left - v, prefix + (v,))
            v += 1
    yield from rec(k, 0, cap, ())


def fermionic_index(k: int, trunc: Truncation) -> TruncatedSeries:
    """Multisum ("exclusion") representation over chains
    n_k >= ... >= n_1 >= 0:
    t^(sum n_i) q^(n_1^2+...+n_{k-1}^2) / ((q;q)_{n_k-n_{k-1}} ... (q;q)_{n_1})
      * sum_j [2 n_k, j]_q z^(2j-2n_k)."""
    if k < 1:
        raise DomainError("k must be >= 1")
    total = TruncatedSeries.zero(trunc)
    for chain in _chains(k, trunc.max_t):
        qexp = sum(v * v for v in chain[:-1])
        if qexp > trunc.max_q:
            continue
        val = TruncatedSeries.monomial(trunc, 1, e_q=qexp, e_t=sum(chain))
        val = val * inv_qq(chain[0], trunc)
        for a, b in zip(chain, chain[1:]):
            val = val * inv_qq(b - a, trunc)
        total = total + val * hermite(2 * chain[-1], trunc)
    return total


_rsum_memo: dict = {}


def _r_geometric(c: int, trunc: Truncation) -> TruncatedSeries:
    # sum_{r>=0} q^(r c) / ((t;q)_r (q;q)_r), truncated at r c <= max_q
    key = (c, trunc)
    got = _rsum_memo.get(key)
    if got is None:
        got = TruncatedSeries.zero(trunc)
        r = 0
        while r * c <= trunc.max_q:
            got = got + (_inv_tpoch(r, trunc) * inv_qq(r, trunc)).shift(e_q=r * c)
            r += 1
        _rsum_memo[key] = got
    return got


def fermionic2_index(k: int, trunc: Truncation) -> TruncatedSeries:
    """Second multisum representation with auxiliary geometric sums:
    (t,q;q)_inf^k * sum over r_1..r_k, s_1..s_k >= 0 of
    t^(sum s_i) q^(sum r_i (s_{i-1}+s_i+1)) /
      (prod (t,q;q)_{r_i} * prod (q;q)_{s_i}^2)
      * sum_{u1,u2} [s_k,u1]_q [s_k,u2]_q z^(2u1-2u2),  with s_0 = 0.

    The r-sums factor per level into memoized one-dimensional series."""
    if k < 1:
        raise DomainError("k must be >= 1")
    total = TruncatedSeries.zero(trunc)
    for svec in _svectors(k, trunc.max_t):
        val = TruncatedSeries.monomial(trunc, 1, e_t=sum(svec))
        s_full = (0,) + svec
        for i in range(k):
            val = val * _r_geometric(s_full[i] + s_full[i + 1] + 1, trunc)
            val = val * inv_qq(svec[i], trunc) ** 2
        a = TruncatedSeries.zero(trunc)
        for u in range(svec[-1] + 1):
            a = a + qbinomial(svec[-1], u, trunc).shift(e_z=2 * u)
        total = total + val * a * a.flip_z()
    return _tq_qq_inf_power(k, trunc) * total


def _svectors(k: int, cap: int):
    # all tuples (s_1..s_k) of nonnegative ints with sum <= cap
    def rec(level, left, prefix):
        if level == 0:
            yield prefix
            return
        for v in range(left + 1):
            yield from rec(level - 1, left - v, prefix + (v,))
    yield from rec(k, cap, ())


def original_index(k: int, trunc: Truncation) -> TruncatedSeries:
    """Dynkin-data form of the second multisum: a sum over two index
    vectors (l, m) tied by Kronecker deltas, with the q-exponent built
    from the adjacency quadratic form sum a_ij l_i m_j / 2.  Exponents
    are accumulated as exact rationals and asserted integral, keeping
    this an independent witness of the adjacency data rather than a
    restatement of the factored multisum."""
    if k < 1:
        raise DomainError("k must be >= 1")
    data = DynkinData.build(k)
    adj = data.adjacency
    size = 2 * k + 1
    total = TruncatedSeries.zero(trunc)
    for svec in _svectors(k, trunc.max_t):
        sigma_k = svec[-1]
        for u1 in range(sigma_k + 1):
            for u2 in range(sigma_k + 1):
                total = total + _original_rho_block(
                    k, adj, size, svec, u1, u2, trunc)
    return _tq_qq_inf_power(k, trunc) * total


def _original_rho_block(k, adj, size, svec, u1, u2, trunc):
    # sum over rho = (l_1, l_3, ..., l_{2k-1}) with the remaining
    # entries of l and m fixed by svec, u1, u2
    block = TruncatedSeries.zero(trunc)
    l = [0] * size
    m = [0] * size
    for i in range(k - 1):
        l[2 * i + 1] = m[2 * i + 1] = svec[i]   # l_{2i} (1-based) = s_i
    sigma_k = svec[-1]
    l[2 * k - 1] = u1                           # l_{2k}
    m[2 * k - 1] = u2                           # m_{2k}
    l[2 * k] = sigma_k - u1                     # l_{2k+1}
    m[2 * k] = sigma_k - u2                     # m_{2k+1}

    for rho in _svectors(k, trunc.max_q):
        for i in range(k):
            l[2 * i] = m[2 * i] = rho[i]        # l_{2i-1} (1-based) = rho_i
        quad = sum(adj[i][j] * l[i] * m[j] for i in range(size) for j in range(size))
        e_q = Fraction(quad, 2) + Fraction(sum(l[2 * i] + m[2 * i] for i in range(k)), 2)
        e_t = Fraction(sum(l[2 * i + 1] + m[2 * i + 1] for i in range(k - 1))
                       + l[2 * k - 1] + m[2 * k - 1] + l[2 * k] + m[2 * k], 2)
        if e_q.denominator != 1 or e_t.denominator != 1:
            raise InternalConsistencyError(
                f"non-integral exponent for l={l}, m={m}: q^{e_q} t^{e_t}")
        e_q, e_t = int(e_q), int(e_t)
        if e_q > trunc.max_q or e_t > trunc.max_t:
            continue
        val = TruncatedSeries.monomial(trunc, 1, e_q=e_q, e_t=e_t,
                                       e_z=2 * m[2 * k] - 2 * l[2 * k])
        val = val * inv_qq(l[2 * k], trunc) * inv_qq(m[2 * k], trunc)
        for i in range(k):
            val = val * inv_qq(l[2 * i + 1], trunc) * inv_qq(m[2 * i + 1], trunc)
            val = val * _inv_tpoch(l[2 * i], trunc) * inv_qq(m[2 * i], trunc)
        block = block + val
    return block


def generalized_sides(k: int, b, c,
                      trunc: Truncation) -> tuple[TruncatedSeries, TruncatedSeries]:
    """Both sides of the parametrized single-sum/multisum identity,
    computed independently.  b and c are length-k rational vectors;
    zeros are allowed and at b = c = 0 both sides reduce bit-for-bit to
    the plain fermionic/bosonic pair."""
    if k < 1:
        raise DomainError("k must be >= 1")
    b = [Fraction(x) for x in b]
    c = [Fraction(x) for x in c]
    if len(b) != k or len(c) != k:
        raise DomainError("parameter vectors must have length k")

    def bc_mono(x: Fraction) -> TruncatedSeries:
        return TruncatedSeries.monomial(trunc, x, e_q=1, e_t=1)

    lhs = TruncatedSeries.zero(trunc)
    for chain in _chains(k, trunc.max_t):
        qexp = sum(chain[:-1])
        if qexp > trunc.max_q:
            continue
        val = TruncatedSeries.monomial(trunc, 1, e_q=qexp, e_t=sum(chain))
        diffs = [chain[0]] + [y - x for x, y in zip(chain, chain[1:])]
        for i in range(k):
            val = val * inv_qq(diffs[i], trunc)
            val = val * poch_finite(bc_mono(b[i] * c[i]), diffs[i])
        den = TruncatedSeries.one(trunc)
        for i in range(k):
            den = den * poch_finite(bc_mono(b[i]), chain[i]) \
                * poch_finite(bc_mono(c[i]), chain[i])
        val = val * den.invert()
        for i in range(1, k):
            val = val * combined_poch(b[i], chain[i - 1], trunc) \
                * combined_poch(c[i], chain[i - 1], trunc)
        lhs = lhs + val * hermite(2 * chain[-1], trunc)

    t = TruncatedSeries.variable(trunc, "t")
    tzz = TruncatedSeries.monomial(trunc, 1, e_t=1, e_z=2)
    tzzi = TruncatedSeries.monomial(trunc, 1, e_t=1, e_z=-2)
    pref = inv_poch_infinite(t) * inv_poch_infinite(tzz) * inv_poch_infinite(tzzi)
    rhs_sum = TruncatedSeries.zero(trunc)
    n = 0
    while (k + 1) * n <= trunc.max_t and k * n + _binom2(n) <= trunc.max_q:
        sign = -1 if n % 2 else 1
        mono = TruncatedSeries.monomial(trunc, sign,
                                        e_q=k * n + _binom2(n), e_t=(k + 1) * n)
        qn1 = TruncatedSeries.monomial(trunc, 1, e_q=n + 1)
        ttq2n = TruncatedSeries.monomial(trunc, 1, e_q=2 * n, e_t=2)
        tqn = TruncatedSeries.monomial(trunc, 1, e_q=n, e_t=1)
        tq2n1 = TruncatedSeries.monomial(trunc, 1, e_q=2 * n + 1, e_t=1)
        val = (mono * poch_finite(qn1, n) * poch_infinite(ttq2n)
               * poch_finite(tqn, n).invert() * inv_poch_infinite(tq2n1))
        den = TruncatedSeries.one(trunc)
        for i in range(k):
            val = val * combined_poch(b[i], n, trunc) * combined_poch(c[i], n, trunc)
            den = den * poch_finite(bc_mono(b[i]), n) * poch_finite(bc_mono(c[i]), n)
        val = val * den.invert()
        jsum = TruncatedSeries.zero(trunc)
        for j in range(2 * n + 1):
            jsum = jsum + (poch_ratio("t", j, trunc)
                           * poch_ratio("t", 2 * n - j, trunc)).shift(e_z=2 * j - 2 * n)
        rhs_sum = rhs_sum + val * jsum
        n += 1
    return lhs, pref * rhs_sum


def generalized_identity(k: int, b, c, trunc: Truncation) -> IdentityReport:
    """Compare the two independently computed sides of the parametrized
    identity."""
    watch = Stopwatch()
    lhs, rhs = generalized_sides(k, b, c, trunc)
    b = [Fraction(x) for x in b]
    c = [Fraction(x) for x in c]
    params = {"k": k,
              "b": [f"{x.numerator}/{x.denominator}" for x in b],
              "c": [f"{x.numerator}/{x.denominator}" for x in c]}
    return series_report("parametrized-duality", lhs, rhs, params, watch)


def multi_rogers_ramanujan(k: int, max_q: int) -> IdentityReport:
    """Multisum Rogers-Ramanujan identity in the single variable q:
    sum over chains of q^(n_1^2+...+n_k^2) / ((q;q)_{n_k-n_{k-1}} ...)
      = (1/(q;q)_inf) sum_{n in Z} (-1)^n q^((k+1)n^2 + binom(n,2))."""
    if k < 1:
        raise DomainError("k must be >= 1")
    watch = Stopwatch()
    trunc = Truncation(max_q, 0)
    lhs = TruncatedSeries.zero(trunc)
    cap = int(math.isqrt(max_q))
    for chain in _chains(k, k * cap):
        qexp = sum(v * v for v in chain)
        if qexp > max_q:
            continue
        val = TruncatedSeries.monomial(trunc, 1, e_q=qexp)
        val = val * inv_qq(chain[0], trunc)
        for a, bb in zip(chain, chain[1:]):
            val = val * inv_qq(bb - a, trunc)
        lhs = lhs + val

    q = TruncatedSeries.variable(trunc, "q")
    bilateral = TruncatedSeries.zero(trunc)
    reach = int(math.isqrt(max_q // (k + 1))) + 2
    for n in range(-reach, reach + 1):
        e = (k + 1) * n * n + _binom2(n)
        if e <= max_q:
            bilateral = bilateral + TruncatedSeries.monomial(
                trunc, -1 if n % 2 else 1, e_q=e)
    rhs = inv_poch_infinite(q) * bilateral
    return series_report("multisum-rogers-ramanujan", lhs, rhs,
                         {"k": k, "max_q": max_q}, watch)


def specialize_index(f: TruncatedSeries, mode: str) -> TruncatedSeries:
    """Standard specializations: schur (t -> q; needs max_t >= max_q),
    hall-littlewood (q -> 0), unrefined (z -> 1)."""
    if mode == "schur":
        return f.specialize("t", "q")
    if mode == "hall-littlewood":
        return f.specialize("q", 0)
    if mode == "unrefined":
        return f.specialize("z", 1)
    raise DomainError(f"unknown specialization mode {mode!r}")


def coefficient_rows(f: TruncatedSeries) -> list[tuple[int, int, int, int, int]]:
    """Coefficient table rows (e_q, e_t, e_z, num, den) in canonical
    monomial order.  Index series carry no s-exponent."""
    rows = []
    for mono, coeff in f.terms():
        if mono.e_s != 0:
            raise DomainError("coefficient tables are for s-free series")
        num, den = (coeff, 1) if isinstance(coeff, int) else \
            (coeff.numerator, coeff.denominator)
        rows.append((mono.e_q, mono.e_t, mono.e_z, num, den))
    return rows


def rows_to_csv(rows) -> str:
    return "".join(f"{eq},{et},{ez},{num},{den}\n" for eq, et, ez, num, den in rows)


def rows_to_json_obj(rows) -> dict:
    return {"columns": ["e_q", "e_t", "e_z", "num", "den"],
            "rows": [list(r) for r in rows]}
