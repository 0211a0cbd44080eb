"""Bailey pairs, conjugate pairs, chain lifts, the transform, and the
well-poised (s-parameter) conjugate pair.

Families are lazily generated, memoized sequences n -> series.  Each
constructor declares a sound support bound: the smallest index beyond
which entries vanish modulo the truncation (typically forced by a t^n
prefactor), which is what finitizes the infinite sums in the conjugate
relation and the transform.  Verification refuses families whose bound
is needed but missing.

The well-poised relation weight (s/t;q)_{l-n} carries a negative
t-power; it is absorbed against the t^l prefactor of the delta entries
through the polynomial form prod_i (t - s q^i), so the verifier works
on the t-free entry cores and never forms a negative exponent.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable

from .errors import DomainError
from .qfunctions import (combined_poch, inv_qq, inv_tq, poch_finite,
                         poch_infinite, inv_poch_infinite, poch_ratio, qbinomial)
from .report import IdentityReport, Stopwatch, first_mismatch, series_report
from .series import TruncatedSeries, Truncation

_binom2 = lambda n: n * (n - 1) // 2

_conj_pref_memo: dict = {}


class PairFamily:
    """A memoized sequence n -> TruncatedSeries.

    support_bound, when set, promises that entries with index beyond it
    are identically zero modulo the truncation.  core_gen, when set,
    generates the t-free core of entry n (entry = t^n * core); the
    well-poised verifier needs cores past the point where the entries
    themselves have vanished.
    """

    def __init__(self, kind: str, trunc: Truncation,
                 gen: Callable[[int], TruncatedSeries],
                 support_bound: int | None = None,
                 core_gen: Callable[[int], TruncatedSeries] | None = None):
        if kind not in ("alpha", "beta", "gamma", "delta"):
            raise DomainError(f"unknown family kind {kind!r}")
        self.kind = kind
        self.trunc = trunc
        self.support_bound = support_bound
        self._gen = gen
        self._core_gen = core_gen
        self._memo: dict[int, TruncatedSeries] = {}
        self._core_memo: dict[int, TruncatedSeries] = {}

    def __getitem__(self, n: int) -> TruncatedSeries:
        if n < 0:
            raise DomainError("family indices are nonnegative")
        got = self._memo.get(n)
        if got is None:
            got = self._gen(n)
            self._memo[n] = got
        return got

    def regenerate(self, n: int) -> TruncatedSeries:
        """Recompute entry n without the memo (reproducibility checks)."""
        return self._gen(n)

    @property
    def has_core(self) -> bool:
        return self._core_gen is not None

    def core(self, n: int) -> TruncatedSeries:
        if self._core_gen is None:
            raise DomainError(f"{self.kind} family carries no t-free core generator")
        got = self._core_memo.get(n)
        if got is None:
            got = self._core_gen(n)
            self._core_memo[n] = got
        return got


@dataclass(frozen=True)
class ChainParams:
    """Rational lift parameters; zeros are first-class (handled through
    the combined polynomial form of (1/b;q)_n b^n)."""

    b: tuple
    c: tuple

    def __post_init__(self):
        if len(self.b) != len(self.c) or not self.b:
            raise DomainError("chain parameter lists must be nonempty and equal length")

    @classmethod
    def of(cls, b, c) -> "ChainParams":
        return cls(tuple(Fraction(x) for x in b), tuple(Fraction(x) for x in c))

    @property
    def k(self) -> int:
        return len(self.b)


def _max_n_with(bound: int, weight: Callable[[int], int]) -> int:
    n = 0
    while weight(n + 1) <= bound:
        n += 1
    return n


def seed_pair(trunc: Truncation) -> tuple[PairFamily, PairFamily]:
    """The elementary unit Bailey pair:
    alpha_n = (-1)^n q^binom(n,2) (1 - t q^(2n)) (tq;q)_{n-1} / (q;q)_n
    (the (t;q)_n / (1-t) factor pre-cancelled), beta_n = [n = 0]."""
    one = TruncatedSeries.one(trunc)

    def alpha(n: int) -> TruncatedSeries:
        if n == 0:
            return one
        tq2n = TruncatedSeries.monomial(trunc, 1, e_q=2 * n, e_t=1)
        tq = TruncatedSeries.monomial(trunc, 1, e_q=1, e_t=1)
        val = (one - tq2n) * poch_finite(tq, n - 1) * inv_qq(n, trunc)
        sign = -1 if n % 2 else 1
        return val.scale(sign).shift(e_q=_binom2(n))

    def beta(n: int) -> TruncatedSeries:
        return one if n == 0 else TruncatedSeries.zero(trunc)

    alpha_bound = _max_n_with(trunc.max_q, _binom2)
    return (PairFamily("alpha", trunc, alpha, support_bound=alpha_bound),
            PairFamily("beta", trunc, beta, support_bound=0))


def chain_lift(alpha: PairFamily, beta: PairFamily, params: ChainParams,
               trunc: Truncation) -> tuple[PairFamily, PairFamily]:
    """k-fold chain lift of a Bailey pair."""
    k = params.k
    one = TruncatedSeries.one(trunc)

    def bc_mono(x: Fraction) -> TruncatedSeries:
        return TruncatedSeries.monomial(trunc, x, e_q=1, e_t=1)

    def lifted_alpha(n: int) -> TruncatedSeries:
        val = alpha[n].shift(e_q=k * n, e_t=k * n)
        for b, c in zip(params.b, params.c):
            val = val * combined_poch(b, n, trunc) * combined_poch(c, n, trunc)
            val = val * (poch_finite(bc_mono(b), n) * poch_finite(bc_mono(c), n)).invert()
        return val

    def lifted_beta(n: int) -> TruncatedSeries:
        total = TruncatedSeries.zero(trunc)
        for chain in combinations_with_replacement(range(n + 1), k):
            # chain = (n_0, ..., n_{k-1}); n_k = n
            seq = list(chain) + [n]
            e = sum(chain)
            if e > trunc.max_q or e > trunc.max_t:
                continue
            base = beta[chain[0]]
            if base.is_zero():
                continue
            val = base.shift(e_q=e, e_t=e)
            for i in range(k):
                d = seq[i + 1] - seq[i]
                val = val * inv_qq(d, trunc)
                val = val * poch_finite(bc_mono(params.b[i] * params.c[i]), d)
            den = one
            for i in range(k):
                den = den * poch_finite(bc_mono(params.b[i]), seq[i + 1]) \
                    * poch_finite(bc_mono(params.c[i]), seq[i + 1])
            val = val * den.invert()
            for i in range(k):
                val = val * combined_poch(params.b[i], seq[i], trunc) \
                    * combined_poch(params.c[i], seq[i], trunc)
            total = total + val
        return total

    bounds = [trunc.max_t // k, trunc.max_q // k]
    if alpha.support_bound is not None:
        bounds.append(alpha.support_bound)
    return (PairFamily("alpha", trunc, lifted_alpha, support_bound=min(bounds)),
            PairFamily("beta", trunc, lifted_beta))


def verify_bailey_pair(alpha: PairFamily, beta: PairFamily,
                       n_max: int) -> IdentityReport:
    """Check beta_n = sum_{l<=n} alpha_l / ((q;q)_{n-l} (tq;q)_{n+l})
    for all n <= n_max."""
    watch = Stopwatch()
    trunc = alpha.trunc
    counts = {}
    for n in range(n_max + 1):
        rhs = TruncatedSeries.zero(trunc)
        for l in range(n + 1):
            rhs = rhs + alpha[l] * inv_qq(n - l, trunc) * inv_tq(n + l, trunc)
        counts = {"lhs": beta[n].term_count(), "rhs": rhs.term_count()}
        mismatch = first_mismatch(beta[n], rhs)
        if mismatch is not None:
            return IdentityReport(
                "bailey-pair-relation", {"n_max": n_max}, trunc, "fail",
                {"n": n, **mismatch}, watch.ms(), counts)
    return IdentityReport("bailey-pair-relation", {"n_max": n_max}, trunc,
                          "pass", None, watch.ms(), counts)


def _conj_prefactor_inv(trunc: Truncation) -> TruncatedSeries:
    # 1 / (t, tq, tz, t/z; q)_inf
    got = _conj_pref_memo.get(trunc)
    if got is None:
        t = TruncatedSeries.variable(trunc, "t")
        tq = TruncatedSeries.monomial(trunc, 1, e_q=1, e_t=1)
        tz = TruncatedSeries.monomial(trunc, 1, e_t=1, e_z=1)
        tzi = TruncatedSeries.monomial(trunc, 1, e_t=1, e_z=-1)
        got = (inv_poch_infinite(t) * inv_poch_infinite(tq)
               * inv_poch_infinite(tz) * inv_poch_infinite(tzi))
        _conj_pref_memo[trunc] = got
    return got


def _ultra_half_sum(n: int, trunc: Truncation, param: str) -> TruncatedSeries:
    # sum_{j=0}^{2n} (x;q)_j (x;q)_{2n-j} / ((q;q)_j (q;q)_{2n-j}) z^(j-n)
    total = TruncatedSeries.zero(trunc)
    for j in range(2 * n + 1):
        total = total + (poch_ratio(param, j, trunc)
                         * poch_ratio(param, 2 * n - j, trunc)).shift(e_z=j - n)
    return total


def hermite_conjugate_pair(trunc: Truncation) -> tuple[PairFamily, PairFamily]:
    """The conjugate Bailey pair built from the q-Hermite expansion of
    the ultraspherical kernel:
    gamma_n = t^n (q;q)_{2n} (t^2;q)_inf / ((t^2;q)_{2n} (t,tq,tz,t/z;q)_inf)
              * sum_j (t;q)_j (t;q)_{2n-j} / ((q;q)_j (q;q)_{2n-j}) z^(j-n),
    delta_n = t^n sum_j [2n,j]_q z^(j-n)."""
    q = TruncatedSeries.variable(trunc, "q")

    def gamma(n: int) -> TruncatedSeries:
        # (t^2;q)_inf / (t^2;q)_{2n} = (t^2 q^{2n};q)_inf
        tail = poch_infinite(TruncatedSeries.monomial(trunc, 1, e_q=2 * n, e_t=2))
        pref = poch_finite(q, 2 * n) * tail * _conj_prefactor_inv(trunc)
        return (pref * _ultra_half_sum(n, trunc, "t")).shift(e_t=n)

    def delta_core(n: int) -> TruncatedSeries:
        total = TruncatedSeries.zero(trunc)
        for j in range(2 * n + 1):
            total = total + qbinomial(2 * n, j, trunc).shift(e_z=j - n)
        return total

    def delta(n: int) -> TruncatedSeries:
        return delta_core(n).shift(e_t=n)

    return (PairFamily("gamma", trunc, gamma, support_bound=trunc.max_t),
            PairFamily("delta", trunc, delta, support_bound=trunc.max_t,
                       core_gen=delta_core))


def verify_conjugate_pair(gamma: PairFamily, delta: PairFamily,
                          n_max: int) -> IdentityReport:
    """Check gamma_n = sum_{l>=n} delta_l / ((q;q)_{l-n} (tq;q)_{l+n})
    for n <= n_max, the sum finitized by delta's support bound."""
    watch = Stopwatch()
    if delta.support_bound is None:
        raise DomainError("conjugate verification needs a support bound on delta")
    trunc = gamma.trunc
    counts = {}
    for n in range(n_max + 1):
        rhs = TruncatedSeries.zero(trunc)
        for l in range(n, delta.support_bound + 1):
            rhs = rhs + delta[l] * inv_qq(l - n, trunc) * inv_tq(l + n, trunc)
        counts = {"lhs": gamma[n].term_count(), "rhs": rhs.term_count()}
        mismatch = first_mismatch(gamma[n], rhs)
        if mismatch is not None:
            return IdentityReport(
                "conjugate-pair-relation", {"n_max": n_max}, trunc, "fail",
                {"n": n, **mismatch}, watch.ms(), counts)
    return IdentityReport("conjugate-pair-relation", {"n_max": n_max}, trunc,
                          "pass", None, watch.ms(), counts)


def bailey_transform_check(alpha: PairFamily, beta: PairFamily,
                           gamma: PairFamily, delta: PairFamily) -> IdentityReport:
    """Check sum_n alpha_n gamma_n = sum_n beta_n delta_n, both sides
    finitized by the declared support bounds."""
    watch = Stopwatch()
    trunc = alpha.trunc
    if not (alpha.trunc == beta.trunc == gamma.trunc == delta.trunc):
        raise DomainError("transform check needs families over one truncation")
    left_bounds = [b for b in (alpha.support_bound, gamma.support_bound) if b is not None]
    right_bounds = [b for b in (beta.support_bound, delta.support_bound) if b is not None]
    if not left_bounds or not right_bounds:
        raise DomainError("transform check needs a support bound on each side")
    lhs = TruncatedSeries.zero(trunc)
    for n in range(min(left_bounds) + 1):
        lhs = lhs + alpha[n] * gamma[n]
    rhs = TruncatedSeries.zero(trunc)
    for n in range(min(right_bounds) + 1):
        rhs = rhs + beta[n] * delta[n]
    return series_report("bailey-transform", lhs, rhs, params={}, watch=watch)


def wp_conjugate_pair(trunc: Truncation) -> tuple[PairFamily, PairFamily]:
    """The well-poised lift of the conjugate pair, relative to (s,t,q):
    gamma'_n gains the numerator (sz, s/z;q)_inf, and
    delta'_n = t^n (1-s q^(2n)) (q;q)_{2n} (s^2;q)_inf /
               ((1-s) (s^2;q)_{2n} (s,sq;q)_inf) * [s-weighted j-sum].
    The standalone 1/(1-s) is cancelled against the leading factor of
    (s^2;q)_inf, via (s^2;q)_inf / (1-s) = (1+s) (s^2 q;q)_inf, before
    any inversion."""
    if trunc.max_s is None:
        raise DomainError("the well-poised pair needs a truncation with s")
    one = TruncatedSeries.one(trunc)
    q = TruncatedSeries.variable(trunc, "q")
    s = TruncatedSeries.variable(trunc, "s")
    sq = TruncatedSeries.monomial(trunc, 1, e_q=1, e_s=1)
    ssq = TruncatedSeries.monomial(trunc, 1, e_q=1, e_s=2)
    ss = TruncatedSeries.monomial(trunc, 1, e_s=2)
    sz = TruncatedSeries.monomial(trunc, 1, e_s=1, e_z=1)
    szi = TruncatedSeries.monomial(trunc, 1, e_s=1, e_z=-1)

    def gamma(n: int) -> TruncatedSeries:
        tail = poch_infinite(TruncatedSeries.monomial(trunc, 1, e_q=2 * n, e_t=2))
        pref = (poch_finite(q, 2 * n) * tail * poch_infinite(sz)
                * poch_infinite(szi) * _conj_prefactor_inv(trunc))
        return (pref * _ultra_half_sum(n, trunc, "t")).shift(e_t=n)

    def delta_core(n: int) -> TruncatedSeries:
        sq2n = TruncatedSeries.monomial(trunc, 1, e_q=2 * n, e_s=1)
        num = (one - sq2n) * poch_finite(q, 2 * n) * (one + s) * poch_infinite(ssq)
        den_inv = (poch_finite(ss, n * 2).invert()
                   * inv_poch_infinite(s) * inv_poch_infinite(sq))
        return num * den_inv * _ultra_half_sum(n, trunc, "s")

    def delta(n: int) -> TruncatedSeries:
        return delta_core(n).shift(e_t=n)

    return (PairFamily("gamma", trunc, gamma, support_bound=trunc.max_t),
            PairFamily("delta", trunc, delta, support_bound=trunc.max_t,
                       core_gen=delta_core))


def verify_wp_conjugate(gamma_p: PairFamily, delta_p: PairFamily,
                        n_max: int) -> IdentityReport:
    """Check the well-poised conjugate relation
    gamma'_n = sum_{l>=n} (s/t;q)_{l-n} (s;q)_{l+n} /
                          ((q;q)_{l-n} (tq;q)_{l+n}) * delta'_l
    with (s/t;q)_{l-n} t^{l-n} realized as prod_i (t - s q^i), absorbed
    against the t^l prefactor of delta'_l, so only the t-free cores and
    nonnegative powers appear.  Contributions run past delta's own
    support bound, up to l = max_t + max_s."""
    watch = Stopwatch()
    if not delta_p.has_core:
        raise DomainError("well-poised verification needs delta's t-free cores")
    trunc = gamma_p.trunc
    t = TruncatedSeries.variable(trunc, "t")
    s_series = TruncatedSeries.variable(trunc, "s")
    l_max = trunc.max_t + trunc.s_cap
    counts = {}
    for n in range(n_max + 1):
        rhs = TruncatedSeries.zero(trunc)
        running = TruncatedSeries.one(trunc)   # prod_{i<l-n} (t - s q^i)
        for l in range(n, l_max + 1):
            if l > n:
                running = running * (t - s_series.shift(e_q=l - n - 1))
                if running.is_zero():
                    break
            term = (running * poch_finite(s_series, l + n)
                    * inv_qq(l - n, trunc) * inv_tq(l + n, trunc)
                    * delta_p.core(l))
            rhs = rhs + term
        rhs = rhs.shift(e_t=n)
        counts = {"lhs": gamma_p[n].term_count(), "rhs": rhs.term_count()}
        mismatch = first_mismatch(gamma_p[n], rhs)
        if mismatch is not None:
            return IdentityReport(
                "wp-conjugate-pair-relation", {"n_max": n_max}, trunc, "fail",
                {"n": n, **mismatch}, watch.ms(), counts)
    return IdentityReport("wp-conjugate-pair-relation", {"n_max": n_max}, trunc,
                          "pass", None, watch.ms(), counts)


def wp_collapse_check(trunc: Truncation, n_max: int) -> IdentityReport:
    """Setting s = 0 must collapse the well-poised families entrywise
    to the ordinary conjugate pair (exact term-map equality)."""
    watch = Stopwatch()
    gamma_p, delta_p = wp_conjugate_pair(trunc)
    gamma, delta = hermite_conjugate_pair(trunc)
    for n in range(n_max + 1):
        for label, wp_fam, plain_fam in (("gamma", gamma_p, gamma),
                                         ("delta", delta_p, delta)):
            mismatch = first_mismatch(wp_fam[n].specialize("s", 0), plain_fam[n])
            if mismatch is not None:
                return IdentityReport(
                    "wp-collapse-s0", {"n_max": n_max}, trunc, "fail",
                    {"n": n, "family": label, **mismatch}, watch.ms(), {})
    return IdentityReport("wp-collapse-s0", {"n_max": n_max}, trunc,
                          "pass", None, watch.ms(), {})
