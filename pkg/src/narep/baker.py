"""Absolute bounds from linear forms in logarithms.

Four successive applications of Matveev's lower bound, each to a linear form
in log(eta_1), log(alpha), log(g), bound the exponents l <= m <= n <= t one
after another in terms of log t and log g; a Guzman-Luca absorption step then
removes the log t dependence.  Every constant is recomputed here and compared
with the published value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np
from mpmath import mpf

from .narayana import binet_coefficients, narayana
from .numerics import DEFAULT_PRECISION, HPReal, dominant_root

# Published constants, kept apart from the recomputed ones.
PUBLISHED_MATVEEV = {1: 6.5e13, 2: 7.26e27, 3: 8.1e41, 4: 9.1e55}
PUBLISHED_STAGE = {1: 7.8e14, 2: 8.7e28, 3: 9.72e42, 4: 1.1e57}
PUBLISHED_A1 = {1: None, 2: 2.34e15, 3: 2.61e28, 4: 2.92e43}  # as printed; stage 3 should read 3 * 8.7e28 = 2.61e29
PUBLISHED_T_COEFF = 2.11e67
PUBLISHED_K_COEFF = 2.54e68
PUBLISHED_ABSORB_CONSTANT = 186
PUBLISHED_T_BOUND_G12 = 1.18e72
PUBLISHED_M = 35 * 10**72

# Right-hand sides 16/g^l, 8/g^m, 4/g^n, 2/g^(t-1) of the four smallness inequalities.
STAGE_NUMERATOR = {1: 16, 2: 8, 3: 4, 4: 2}

A_MINIMAL_POLYNOMIAL = (31, 0, -3, -1)  # 31x^3 - 3x - 1, leading coefficient first
FIELD_DEGREE = 3
LOG2 = math.log(2)


def round_up(x: float, sig: int = 3) -> float:
    """Round a positive number up to ``sig`` significant digits."""
    if x <= 0:
        raise ValueError("round_up expects a positive number")
    e = math.floor(math.log10(x)) - (sig - 1)
    return math.ceil(x / 10.0**e) * 10.0**e


@dataclass(frozen=True)
class MatveevInput:
    s: int
    d_K: int
    B: float
    A: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.s < 1 or len(self.A) != self.s:
            raise ValueError("need s >= 1 and exactly s values A_i")
        if self.B < 1:
            raise ValueError("B must be >= 1")
        if any(a < 0.16 for a in self.A):
            raise ValueError("every A_i must be >= 0.16")


def matveev_constant(s: int, d_K: int) -> mpf:
    """1.4 * 30^(s+3) * s^4.5 * d_K^2 * (1 + log d_K)."""
    with mpmath.workdps(40):
        return mpf("1.4") * mpf(30) ** (s + 3) * mpf(s) ** mpf("4.5") * d_K**2 * (1 + mpmath.log(d_K))


def matveev_log_lower_bound(inp: MatveevInput) -> float:
    """Lower bound for log|eta_1^b_1 ... eta_s^b_s - 1| when the form is nonzero."""
    with mpmath.workdps(40):
        c = matveev_constant(inp.s, inp.d_K) * (1 + mpmath.log(inp.B))
        for a in inp.A:
            c *= mpf(a)
        return float(-c)


def height_a() -> float:
    """h(a) from the minimal polynomial 31x^3 - 3x - 1 (all conjugates lie in the unit disc)."""
    roots = np.roots(A_MINIMAL_POLYNOMIAL)
    lead = A_MINIMAL_POLYNOMIAL[0]
    return (math.log(lead) + sum(math.log(max(abs(r), 1.0)) for r in roots)) / 3


def height_eta1(stage: int, g: int, exps: tuple[int, ...] | list[int] = ()) -> float:
    """Upper bound (7 + sum(exps)) log g for h(eta_1) at the given stage.

    eta_1 = a (g-1)^4 / (d1 d2 d3 d4 prod (g^e - 1)) and
    h(eta_1) <= h(a) + 4 log g + sum e log g with h(a) < 2 <= 3 log g.
    """
    if not 1 <= stage <= 4:
        raise ValueError("stage must be 1..4")
    if len(exps) != stage - 1:
        raise ValueError(f"stage {stage} needs {stage - 1} known exponents")
    if g < 2:
        raise ValueError("g must be >= 2")
    return (7 + sum(exps)) * math.log(g)


def lemma4_k_bound(t: int, g: int) -> int:
    """floor(12 t log g); every solution has k below 12 t log g."""
    if t < 1 or g < 2:
        raise ValueError("need t >= 1 and g >= 2")
    with mpmath.workdps(50):
        return int(mpmath.floor(12 * t * mpmath.log(g)))


def k_bound_closed_form(t: int, g: int, precision: int = 50) -> float:
    """3 + 4 t log g / log alpha, from alpha^(k-3) <= N_k < g^(4t)."""
    alpha = dominant_root(max(precision, 50)).value
    with mpmath.workdps(precision):
        return float(3 + 4 * t * mpmath.log(g) / mpmath.log(alpha))


def k_max_direct(t: int, g: int) -> int:
    """Largest k with N_k <= (g^t - 1)^4, by direct enumeration."""
    cap = (g**t - 1) ** 4
    k = 1
    while narayana(k + 1) <= cap:
        k += 1
    return k


def absorption_holds(t: float, g: float) -> bool:
    """1 + log(12 t log g) < 12 log t log g (used for t, g >= 2)."""
    return 1 + math.log(12 * t * math.log(g)) < 12 * math.log(t) * math.log(g)


def guzman_luca_absorb(l: int, H: float) -> float:
    """If H > (4 l^2)^l and H > L / (log L)^l then L < 2^l H (log H)^l."""
    if l < 1:
        raise ValueError("l must be >= 1")
    if not H > (4 * l * l) ** l:
        raise ValueError(f"H = {H:g} does not exceed (4 l^2)^l = {(4 * l * l) ** l:g}")
    return 2.0**l * H * math.log(H) ** l


@dataclass(frozen=True)
class StageBound:
    stage: int
    coefficient: float
    t_power: int
    g_power: int
    matveev_coefficient: float
    height_coefficient: float
    published_coefficient: float
    published_matveev: float

    def evaluate(self, t: float, g: float) -> float:
        return self.coefficient * math.log(t) ** self.t_power * math.log(g) ** self.g_power

    @property
    def ratio(self) -> float:
        return self.coefficient / self.published_coefficient

    @property
    def matveev_ratio(self) -> float:
        return self.matveev_coefficient / self.published_matveev


def derive_stage_bounds(g: int = 2, precision: int = DEFAULT_PRECISION) -> list[StageBound]:
    """Recompute the four stage constants.

    Stage i bounds its variable by V_i (log t)^i (log g)^(2i).  The height
    of eta_1 at stage i is below H_i (log t)^(i-1) (log g)^(2i-1), where
    lower-order terms are absorbed using log t, log g >= log 2.  Matveev
    with A = (3 H_i ..., log alpha, 3 log g), B = 12 t log g and the
    absorption 1 + log B < 12 log t log g then give V_i.  Each constant is
    rounded up to three significant digits.
    """
    if g < 2:
        raise ValueError("g must be >= 2")
    log_alpha = float(mpmath.log(dominant_root(max(precision, 50)).value))
    C = float(matveev_constant(3, FIELD_DEGREE))
    stages: list[StageBound] = []
    prev: list[float] = []
    for i in range(1, 5):
        if i == 1:
            h = 7.0  # h(eta_1) < 7 log g
        else:
            # 7 + l + m + ... with each earlier bound lifted to the top power
            h = prev[-1]
            for j, v in enumerate(reversed(prev[:-1]), start=1):
                h += v / LOG2 ** (3 * j)
            h += 7 / LOG2 ** (3 * (i - 1))
            h = round_up(h)
        a1 = FIELD_DEGREE * h
        matveev = round_up(C * a1 * log_alpha * 3)
        # additive constant from the log of the right-hand side
        additive = math.log(STAGE_NUMERATOR[i]) / LOG2 + (1 if i == 4 else 0)
        v = round_up(12 * matveev + additive / LOG2 ** (3 * i))
        stages.append(
            StageBound(
                stage=i,
                coefficient=v,
                t_power=i,
                g_power=2 * i,
                matveev_coefficient=matveev,
                height_coefficient=a1,
                published_coefficient=PUBLISHED_STAGE[i],
                published_matveev=PUBLISHED_MATVEEV[i],
            )
        )
        prev.append(v)
    return stages


@dataclass(frozen=True)
class AbsoluteBounds:
    g: int
    t_bound: float
    k_bound: float
    t_coefficient: float
    k_coefficient: float
    absorb_constant: int
    stages: list[StageBound] = field(default_factory=list, compare=False)

    def as_dict(self) -> dict:
        return {
            "g": self.g,
            "t_bound": self.t_bound,
            "k_bound": self.k_bound,
            "t_coefficient": self.t_coefficient,
            "k_coefficient": self.k_coefficient,
            "absorb_constant": self.absorb_constant,
            "stages": [
                {
                    "stage": s.stage,
                    "matveev_coefficient": s.matveev_coefficient,
                    "published_matveev": s.published_matveev,
                    "coefficient": s.coefficient,
                    "published_coefficient": s.published_coefficient,
                    "t_power": s.t_power,
                    "g_power": s.g_power,
                }
                for s in self.stages
            ],
        }


def absorb_constant(stage4_coefficient: float) -> int:
    """Smallest integer K with log(V4) + 8 log log g < K log g for all g >= 2.

    (log V4 + 8 log x)/x is decreasing for x = log g >= log 2 once
    log V4 + 8 log x > 8, so g = 2 is the worst case.
    """
    lv = math.log(stage4_coefficient)
    assert lv + 8 * math.log(LOG2) > 8
    return math.floor((lv + 8 * math.log(LOG2)) / LOG2) + 1


def theorem1_bounds(g: int, precision: int = DEFAULT_PRECISION) -> AbsoluteBounds:
    """t < T log^12 g and k < 12 t log g for solutions in base g."""
    if g < 2:
        raise ValueError("g must be >= 2")
    stages = derive_stage_bounds(g, precision)
    v4 = stages[-1].coefficient
    K = absorb_constant(v4)
    # absorption with l = 4, H = V4 log^8 g: t < 16 V4 log^8 g (log V4 + 8 log log g)^4
    t_coeff = round_up(16 * v4 * K**4)
    k_coeff = round_up(12 * t_coeff)
    lg = math.log(g)
    t_bound = t_coeff * lg**12
    return AbsoluteBounds(
        g=g,
        t_bound=t_bound,
        k_bound=12 * t_bound * lg,
        t_coefficient=t_coeff,
        k_coefficient=k_coeff,
        absorb_constant=K,
        stages=stages,
    )


def lambda1_value(g: int, k: int, digits: tuple[int, int, int, int], exps: tuple[int, int, int, int], precision: int = 60) -> HPReal:
    """a (g-1)^4/(d1 d2 d3 d4) alpha^k g^-(l+m+n+t) - 1 for a concrete instance."""
    c = binet_coefficients(max(precision, 50))
    P = digits[0] * digits[1] * digits[2] * digits[3]
    return c.a * (g - 1) ** 4 / P * c.alpha**k / HPReal.of(g, precision) ** sum(exps) - 1
