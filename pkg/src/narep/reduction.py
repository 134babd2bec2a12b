"""Continued fractions and the Dujella-Petho reduction of the exponent bounds.

Each step bounds one exponent w in an inequality

    0 < |k tau - v + mu| < A g^(-w),    tau = log(alpha)/log(g),

for every admissible mu.  mu depends on the product P of the four digits and
on the exponents already bounded, so a step evaluates ||mu q|| for up to a
few billion (P, exponents) instances.  The bulk evaluation works on 64-bit
fixed-point fractional parts: frac(q*mu) is the wrapping sum of precomputed
frac(q*log(x)/log(g)) terms, so only integer additions remain in the hot loop.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable, Iterator, Sequence, Union

import mpmath
import numpy as np
from mpmath import mpf

from .baker import PUBLISHED_M
from .narayana import binet_coefficients
from .numerics import DEFAULT_PRECISION, GUARD_DIGITS, HPReal, PrecisionError, dominant_root

FIXED_BITS = 64
FIXED_ONE = 1 << FIXED_BITS
# Rounding slack in fixed-point units: at most five floored terms plus a ceiled threshold.
FIXED_ERR = 8
BLOCK_ELEMENTS = 1 << 21

# Exponent caps used in steps 2-4 for the exponents already reduced.
PUBLISHED_CAPS = (257, 265, 271)
# The step-s inequality is only available when its own variable reaches this value.
STEP_THRESHOLD = {1: 5, 2: 4, 3: 3, 4: 3}
# A = 2 * (16, 8, 4, 2) / log g
STEP_A_NUMERATOR = {1: 32, 2: 16, 3: 8, 4: 4}
STEP_VARIABLE = {1: "l", 2: "m", 3: "n", 4: "t"}
DEFAULT_WINDOW = 8
MAX_WINDOW = 64

# Published Tables 2-5: g -> (1-based convergent index, epsilon, bound).
PUBLISHED_TABLES: dict[int, dict[int, tuple[int, float, int]]] = {
    1: {2: (153, 0.34, 257), 3: (141, 0.39, 162), 4: (147, 0.051, 130), 5: (145, 0.011, 112),
        6: (134, 0.0037, 101), 7: (151, 0.000019, 96), 8: (153, 0.0023, 88), 9: (147, 0.0016, 84),
        10: (134, 0.006, 79), 11: (140, 0.00028, 76), 12: (154, 0.0062, 75)},
    2: {2: (153, 0.0012, 264), 3: (141, 3e-4, 168), 4: (147, 3.3e-4, 133), 5: (146, 6.9e-4, 113),
        6: (134, 6.6e-4, 102), 7: (151, 1.9e-5, 95), 8: (153, 1.3e-4, 89), 9: (147, 2.7e-5, 85),
        10: (134, 1.8e-5, 82), 11: (140, 1.1e-5, 77), 12: (154, 4.6e-6, 77)},
    3: {2: (153, 4.28e-6, 270), 3: (141, 1.6e-6, 171), 4: (147, 3.39e-6, 135), 5: (146, 2.3e-6, 115),
        6: (134, 2.1e-6, 103), 7: (151, 1.2e-6, 95), 8: (153, 8e-6, 89), 9: (147, 3.2e-7, 86),
        10: (134, 1.7e-6, 82), 11: (140, 7.3e-7, 77), 12: (154, 9e-7, 77)},
    4: {2: (153, 4.28e-6, 269), 3: (141, 1.6e-6, 170), 4: (147, 1.9e-6, 135), 5: (145, 2.3e-6, 115),
        6: (134, 5.4e-6, 103), 7: (151, 6e-6, 94), 8: (152, 8e-6, 88), 9: (147, 3.2e-6, 85),
        10: (134, 9.6e-6, 80), 11: (140, 7.9e-7, 77), 12: (154, 2.8e-6, 76)},
}
PUBLISHED_GLOBAL = {1: 257, 2: 265, 3: 271, 4: 270}


class InconclusiveReduction(RuntimeError):
    """No convergent in the examined window gives epsilon > 0."""

    def __init__(self, message: str, instance: object = None):
        super().__init__(message)
        self.instance = instance


# ---------------------------------------------------------------- continued fractions


@dataclass
class ContinuedFraction:
    target: HPReal | Fraction
    partial_quotients: list[int]
    convergents: list[tuple[int, int]]
    terminated: bool = False  # the expansion ended because the target is rational

    def __len__(self) -> int:
        return len(self.partial_quotients)

    @property
    def denominators(self) -> list[int]:
        return [q for _, q in self.convergents]


def _convergents(quotients: Sequence[int]) -> list[tuple[int, int]]:
    out = []
    p0, p1, q0, q1 = 1, 0, 0, 1
    for a in quotients:
        p0, p1 = a * p0 + p1, p0
        q0, q1 = a * q0 + q1, q0
        out.append((p0, q0))
    return out


def _quotients_fraction(x: Fraction, count: int) -> tuple[list[int], bool]:
    out: list[int] = []
    num, den = x.numerator, x.denominator
    while den and len(out) < count:
        a, r = divmod(num, den)
        out.append(a)
        num, den = den, r
    return out, den == 0


def _quotients_interval(x: mpf, digits: int, count: int) -> tuple[list[int], bool]:
    """Quotients shared by every real within 10^(3-digits)*max(1,|x|) of x."""
    out: list[int] = []
    with mpmath.workdps(digits + 2 * GUARD_DIGITS):
        delta = mpf(10) ** (3 - digits) * max(mpf(1), abs(x))
        lo, hi = x - delta, x + delta
        small = mpf(10) ** (-(digits // 2))
        while len(out) < count:
            a = int(mpmath.floor(lo))
            if int(mpmath.floor(hi)) != a:
                n = int(mpmath.floor(hi))
                if hi - lo < small:
                    # interval pinches an integer: numerically rational
                    out.append(n)
                    return out, True
                return out, False
            lo_f, hi_f = lo - a, hi - a
            if lo_f <= 0:
                return out, False
            out.append(a)
            lo, hi = 1 / hi_f, 1 / lo_f
    return out, False


def cf_expand(
    x: Union[HPReal, Fraction, Callable[[int], HPReal]],
    count: int,
    precision: int = DEFAULT_PRECISION,
) -> ContinuedFraction:
    """First ``count`` partial quotients and convergents that the precision certifies.

    A callable is evaluated at ``precision`` and ``2*precision`` and only the
    common prefix of the two expansions is kept.  An :class:`HPReal` is
    expanded as an interval of half-width 10^(3-digits).
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if isinstance(x, Fraction):
        qs, term = _quotients_fraction(x, count)
        return ContinuedFraction(x, qs, _convergents(qs), term)
    if callable(x):
        lo_val = x(precision)
        hi_val = x(2 * precision)
        q1, t1 = _quotients_interval(lo_val.value, lo_val.digits, count)
        q2, t2 = _quotients_interval(hi_val.value, hi_val.digits, count)
        n = 0
        while n < min(len(q1), len(q2)) and q1[n] == q2[n]:
            n += 1
        qs, term, target = q1[:n], t1 and t2 and n == len(q1) == len(q2), hi_val
    else:
        qs, term = _quotients_interval(x.value, x.digits, count)
        target = x
    if not qs:
        raise PrecisionError("precision too low to certify a single partial quotient")
    return ContinuedFraction(target, qs, _convergents(qs), term)


def nearest_int_distance(x: mpf) -> mpf:
    return abs(x - mpmath.nint(x))


# ---------------------------------------------------------------- single instance


@dataclass(frozen=True)
class ReductionProblem:
    tau: HPReal
    mu: HPReal
    A: float
    B: float
    M: int

    def __post_init__(self) -> None:
        if not self.A > 0:
            raise ValueError("A must be positive")
        if not self.B > 1:
            raise ValueError("B must exceed 1")
        if self.M < 1:
            raise ValueError("M must be >= 1")


@dataclass(frozen=True)
class ReductionOutcome:
    convergent_index: int  # 1-based position in the convergent list (q_1 = 1)
    q: int
    epsilon: float
    w_bound: int
    x: float = 0.0  # log(A q / epsilon) / log B before rounding up


def _w_from(A: float, q: int, eps: mpf, B: float) -> mpf:
    with mpmath.workdps(40):
        return mpmath.log(mpf(A) * q / eps) / mpmath.log(mpf(B))


def dujella_petho(
    p: ReductionProblem,
    cf: ContinuedFraction | None = None,
    policy: str = "first",
    window: int = DEFAULT_WINDOW,
) -> ReductionOutcome:
    """Apply the Dujella-Petho lemma to one inequality.

    Convergents p/q of tau with q > 6M are tried in order.  ``policy='first'``
    stops at the first with epsilon = ||mu q|| - M ||tau q|| > 0; ``'best'``
    examines ``window`` convergents and keeps the one giving the smallest
    bound.  Any returned bound is valid: no solution has w >= x where
    x = log(A q / epsilon) / log B; ``w_bound`` is ceil(x).
    """
    if policy not in ("first", "best"):
        raise ValueError(f"unknown policy {policy!r}")
    digits = min(p.tau.digits, p.mu.digits)
    if cf is None:
        cf = cf_expand(p.tau, 10**6)
    start = next((i for i, q in enumerate(cf.denominators) if q > 6 * p.M), None)
    if start is None:
        raise InconclusiveReduction("expansion too short: no convergent with q > 6M")
    best: tuple[mpf, int, int, mpf] | None = None
    with mpmath.workdps(digits + GUARD_DIGITS):
        tau, mu = p.tau.value, p.mu.value
        for i in range(start, min(start + window, len(cf))):
            q = cf.denominators[i]
            if math.log10(q) + 30 > digits:
                raise PrecisionError(f"q ~ 1e{int(math.log10(q))} needs more than {digits} digits")
            eps = nearest_int_distance(mu * q) - p.M * nearest_int_distance(tau * q)
            if eps <= 0:
                continue
            x = _w_from(p.A, q, eps, p.B)
            if best is None or x < best[0]:
                best = (x, i, q, eps)
            if policy == "first":
                break
    if best is None:
        raise InconclusiveReduction(f"epsilon <= 0 for {window} convergents from q_{start + 1}")
    x, i, q, eps = best
    return ReductionOutcome(i + 1, q, float(eps), int(mpmath.ceil(x)), float(x))


# ---------------------------------------------------------------- problem data


def tau_value(g: int, precision: int = DEFAULT_PRECISION) -> HPReal:
    """log(alpha)/log(g)."""
    alpha = dominant_root(precision)
    return alpha.log() / HPReal.of(g, precision).log()


def digit_products(g: int, distinct: bool = True) -> list[int]:
    """Products d1 d2 d3 d4 over multisets of digits 1..g-1."""
    prods = [a * b * c * d for a, b, c, d in combinations_with_replacement(range(1, g), 4)]
    return sorted(set(prods)) if distinct else prods


def mu_value(g: int, P: int, exps: Sequence[int], precision: int = DEFAULT_PRECISION) -> HPReal:
    """log(a (g-1)^4 / (P prod (g^e - 1))) / log g."""
    a = binet_coefficients(precision).a
    den = P
    for e in exps:
        den *= g**e - 1
    return (a * (g - 1) ** 4 / den).log() / HPReal.of(g, precision).log()


def step_problem(g: int, step: int, P: int, exps: Sequence[int], M: int = PUBLISHED_M, precision: int = DEFAULT_PRECISION) -> ReductionProblem:
    if len(exps) != step - 1:
        raise ValueError(f"step {step} takes {step - 1} known exponents")
    lg = math.log(g)
    return ReductionProblem(
        tau=tau_value(g, precision),
        mu=mu_value(g, P, exps, precision),
        A=STEP_A_NUMERATOR[step] / lg,
        B=float(g),
        M=M,
    )


# ---------------------------------------------------------------- vectorized step engine


def _fixed_frac(x: mpf, q: int) -> int:
    y = x * q
    return int(mpmath.floor((y - mpmath.floor(y)) * FIXED_ONE))


class ReductionContext:
    """Per-base data shared by all steps: tau, its convergents and fixed-point tables."""

    def __init__(self, g: int, M: int = PUBLISHED_M, precision: int = DEFAULT_PRECISION, window: int = DEFAULT_WINDOW, max_exponent: int = max(PUBLISHED_CAPS)):
        if not 2 <= g <= 12:
            raise ValueError("base must lie in 2..12")
        self.g, self.M, self.precision, self.window = g, M, precision, window
        self.max_exponent = max_exponent
        self.cf = cf_expand(lambda dps: tau_value(g, dps), 4 * precision // 5, precision)
        qs = self.cf.denominators
        start = next((i for i, q in enumerate(qs) if q > 6 * M), None)
        if start is None or start + window > len(qs):
            raise PrecisionError(f"certified expansion of tau too short for base {g}")
        self.start = start
        self.qs = qs[start : start + window]
        self.indices = list(range(start + 1, start + window + 1))  # 1-based
        dps = precision + GUARD_DIGITS
        with mpmath.workdps(dps):
            tau = tau_value(g, precision).value
            lg = mpmath.log(g)
            a = binet_coefficients(precision).a.value
            self._lg = lg
            self.base_log = mpmath.log(a * (g - 1) ** 4) / lg
            self.exp_logs = [mpf(0)] + [mpmath.log(g**e - 1) / lg for e in range(1, max_exponent + 1)]
            self.thr = np.array(
                [int(mpmath.ceil(M * nearest_int_distance(tau * q) * FIXED_ONE)) for q in self.qs],
                dtype=np.uint64,
            )
            self.base = np.array([_fixed_frac(self.base_log, q) for q in self.qs], dtype=np.uint64)
            self.LE = np.array([[_fixed_frac(v, q) for v in self.exp_logs] for q in self.qs], dtype=np.uint64)
        self.log_q_units = np.array([float(mpmath.log(q)) + FIXED_BITS * math.log(2) for q in self.qs])
        self._lp_cache: dict[tuple[int, ...], np.ndarray] = {}

    def product_table(self, products: Sequence[int]) -> np.ndarray:
        key = tuple(products)
        if key not in self._lp_cache:
            with mpmath.workdps(self.precision + GUARD_DIGITS):
                logs = {P: mpmath.log(P) / self._lg for P in set(products)}
                self._lp_cache[key] = np.array(
                    [[_fixed_frac(logs[P], q) for P in products] for q in self.qs], dtype=np.uint64
                )
        return self._lp_cache[key]


@dataclass
class StepResult:
    g: int
    step: int
    min_epsilon: float  # certified epsilon of the binding instance
    used_index: int  # 1-based index of the binding instance's convergent
    variable_bound: int
    x: float
    q: int
    binding_product: int
    binding_exponents: tuple[int, ...]
    instances: int
    policy: str
    max_index: int = 0  # largest convergent index any examined instance needed

    @property
    def variable(self) -> str:
        return STEP_VARIABLE[self.step]

    def as_dict(self) -> dict:
        return {
            "g": self.g,
            "step": self.step,
            "variable": self.variable,
            "q_index": self.used_index,
            "epsilon": self.min_epsilon,
            "bound": self.variable_bound,
            "x": self.x,
            "binding_product": self.binding_product,
            "binding_exponents": list(self.binding_exponents),
            "instances": self.instances,
            "policy": self.policy,
        }


def _exponent_chunks(step: int, caps: Sequence[int]) -> Iterator[np.ndarray]:
    """Non-decreasing tuples of known exponents, in deterministic chunks."""
    if step == 1:
        yield np.zeros((1, 0), dtype=np.int64)
    elif step == 2:
        yield np.arange(1, caps[0] + 1, dtype=np.int64)[:, None]
    elif step == 3:
        l, m = np.triu_indices(caps[1] + 1)
        sel = (l >= 1) & (l <= caps[0])
        yield np.stack([l[sel], m[sel]], axis=1).astype(np.int64)
    elif step == 4:
        mm, nn = np.triu_indices(caps[2] + 1)
        for l in range(1, caps[0] + 1):
            sel = (mm >= l) & (mm <= caps[1])
            rows = np.stack([np.full(sel.sum(), l), mm[sel], nn[sel]], axis=1).astype(np.int64)
            yield rows
    else:
        raise ValueError("step must be 1..4")


def _count_instances(step: int, caps: Sequence[int]) -> int:
    return sum(len(c) for c in _exponent_chunks(step, caps))


def _scan(ctx: ReductionContext, step: int, caps: Sequence[int], products: Sequence[int], policy: str):
    W = len(ctx.qs)
    LP = ctx.product_table(products)
    nP = len(products)
    thr = ctx.thr.astype(np.float64)
    thr_err = ctx.thr + np.uint64(FIXED_ERR)
    best_r = -math.inf
    binding = None
    instances = 0
    max_j = 0
    with np.errstate(over="ignore", divide="ignore"):
        for rows in _exponent_chunks(step, caps):
            nr = len(rows)
            instances += nr * nP
            S = np.zeros((W, nr), dtype=np.uint64)
            for c in range(rows.shape[1]):
                S += ctx.LE[:, rows[:, c]]
            pb = max(1, BLOCK_ELEMENTS // max(nr, 1))
            for p0 in range(0, nP, pb):
                p1 = min(nP, p0 + pb)
                Z0 = (ctx.base[0] - S[0])[None, :] - LP[0, p0:p1, None]
                D0 = np.minimum(Z0, -Z0)
                if best_r == -math.inf:
                    cand = np.ones(D0.shape, dtype=bool)
                else:
                    e_lim = math.exp(min(ctx.log_q_units[0] - best_r, 700.0))
                    cand = D0.astype(np.float64) <= thr[0] + FIXED_ERR + e_lim * (1 + 1e-9) + 2
                pi, ri = np.nonzero(cand)
                if pi.size == 0:
                    continue
                pi = pi + p0
                r = np.full(pi.size, math.inf)
                j_used = np.full(pi.size, -1, dtype=np.int64)
                pending = np.ones(pi.size, dtype=bool)
                for j in range(W):
                    idx = np.flatnonzero(pending) if policy == "first" else np.arange(pi.size)
                    if idx.size == 0:
                        break
                    Z = ctx.base[j] - S[j, ri[idx]] - LP[j, pi[idx]]
                    D = np.minimum(Z, -Z)
                    ok = D > thr_err[j]
                    eps_units = (D - thr_err[j]).astype(np.float64)
                    rj = np.where(ok, ctx.log_q_units[j] - np.log(np.where(ok, eps_units, 1.0)), math.inf)
                    better = rj < r[idx]
                    upd = idx[better]
                    r[upd] = rj[better]
                    j_used[upd] = j
                    if policy == "first":
                        pending[idx[ok]] = False
                if np.isinf(r).any():
                    k = int(np.flatnonzero(np.isinf(r))[0])
                    inst = (int(products[pi[k]]), tuple(int(e) for e in rows[ri[k]]))
                    raise InconclusiveReduction(
                        f"base {ctx.g} step {step}: epsilon <= 0 on {W} convergents for P={inst[0]}, exponents={inst[1]}",
                        inst,
                    )
                max_j = max(max_j, int(j_used.max()))
                k = int(np.argmax(r))
                if r[k] > best_r:
                    best_r = float(r[k])
                    j = int(j_used[k])
                    Z = int(ctx.base[j] - S[j, ri[k]] - LP[j, pi[k]])
                    D = min(Z, FIXED_ONE - Z) if Z else 0
                    binding = (int(products[pi[k]]), tuple(int(e) for e in rows[ri[k]]), j, D - int(thr_err[j]))
    return binding, instances, max_j


def reduce_step(
    g: int,
    step: int,
    caps: Sequence[int] = PUBLISHED_CAPS,
    M: int = PUBLISHED_M,
    *,
    policy: str = "best",
    precision: int = DEFAULT_PRECISION,
    window: int = DEFAULT_WINDOW,
    products: Sequence[int] | None = None,
    ctx: ReductionContext | None = None,
    max_window: int = MAX_WINDOW,
) -> StepResult:
    """Largest bound for the step's exponent over every admissible mu.

    Known exponents are taken non-decreasing (l <= m <= n), each below its
    cap.  For step 4 the lemma bounds w = t - 1 < x, so t <= ceil(x) as well.
    When some instance has epsilon <= 0 on the whole window, the window is
    doubled up to ``max_window`` before giving up.
    """
    if policy not in ("first", "best"):
        raise ValueError(f"unknown policy {policy!r}")
    if products is None:
        products = digit_products(g)
    while True:
        if ctx is None or len(ctx.qs) != window or ctx.M != M:
            ctx = ReductionContext(g, M, precision, window)
        try:
            binding, instances, max_j = _scan(ctx, step, caps, products, policy)
            break
        except InconclusiveReduction:
            if window >= max_window:
                raise
            window *= 2
            ctx = None
    P, exps, j, eps_units = binding
    q = ctx.qs[j]
    with mpmath.workdps(50):
        eps = mpf(eps_units) / FIXED_ONE
        x = mpmath.log(mpf(STEP_A_NUMERATOR[step]) / mpmath.log(g) * q / eps) / mpmath.log(g)
        bound = int(mpmath.ceil(x + mpf("1e-9")))
    bound = max(bound, STEP_THRESHOLD[step] - 1)
    return StepResult(
        g=g,
        step=step,
        min_epsilon=float(eps),
        used_index=ctx.indices[j],
        variable_bound=bound,
        x=float(x),
        q=q,
        binding_product=P,
        binding_exponents=exps,
        instances=instances,
        policy=policy,
        max_index=ctx.indices[max_j],
    )


@dataclass
class ReductionTable:
    results: dict[int, list[StepResult]] = field(default_factory=dict)
    caps: tuple[int, int, int] = PUBLISHED_CAPS
    policy: str = "best"

    def step(self, step: int) -> list[StepResult]:
        return [self.results[g][step - 1] for g in sorted(self.results)]

    def bounds(self, g: int) -> tuple[int, ...]:
        return tuple(r.variable_bound for r in self.results[g])

    def global_max(self) -> dict[str, int]:
        return {STEP_VARIABLE[s]: max(r.variable_bound for r in self.step(s)) for s in range(1, 5)}

    def t_bounds(self) -> dict[int, int]:
        return {g: rs[3].variable_bound for g, rs in sorted(self.results.items())}

    def as_dict(self) -> dict:
        return {
            "policy": self.policy,
            "caps": list(self.caps),
            "tables": {
                STEP_VARIABLE[s]: [r.as_dict() for r in self.step(s)] for s in range(1, 5)
            },
            "global": self.global_max(),
        }


def _reduce_base(args) -> list[StepResult]:
    g, caps, M, policy, precision, window, max_window = args
    ctx = ReductionContext(g, M, precision, window)
    out = []
    for step in range(1, 5):
        out.append(
            reduce_step(g, step, caps, M, policy=policy, precision=precision, window=window, ctx=ctx, max_window=max_window)
        )
    return out


def full_reduction(
    g_range: Sequence[int] = range(2, 13),
    caps: Sequence[int] = PUBLISHED_CAPS,
    M: int = PUBLISHED_M,
    *,
    policy: str = "best",
    precision: int = DEFAULT_PRECISION,
    window: int = DEFAULT_WINDOW,
    jobs: int = 1,
    max_window: int = MAX_WINDOW,
) -> ReductionTable:
    """All four steps for every base; bases are independent and may run in parallel."""
    gs = sorted(set(g_range))
    for g in gs:
        if not 2 <= g <= 12:
            raise ValueError("bases must lie in 2..12")
    work = [(g, tuple(caps), M, policy, precision, window, max(window, max_window)) for g in gs]
    if jobs > 1 and len(gs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            res = list(ex.map(_reduce_base, work))
    else:
        res = [_reduce_base(w) for w in work]
    return ReductionTable(dict(zip(gs, res)), tuple(caps), policy)
