"""Closed-form regime analysis for expected face counts of a high-dimensional
complex controlled by (t, delta): two-sided bounds on E[F_k], consecutive-ratio
bounds, the dominating face dimension as a function of x = delta * t^(1/d), and
certified Euler-characteristic approximations with geometric error factors.

All bound arithmetic runs in log space.  The analyzer treats the face-count
bounds as axioms and takes (t, delta) abstractly; mapping a simulation onto
them (t as expected point count, delta^d as the per-pair connection factor) is
a convention recorded in the README.
"""

import math
from dataclasses import dataclass

BOUNDARY_TOL = 1e-12
D_SCAN_CAP = 10_000


@dataclass(frozen=True)
class RegimeInput:
    d: int
    t: float
    delta: float
    epsilon: float
    k: int = 1

    def __post_init__(self):
        if not (isinstance(self.d, int) and self.d >= 1):
            raise ValueError("d must be a positive integer")
        if not (self.t > 0 and math.isfinite(self.t)):
            raise ValueError("t must be positive")
        if not (0.0 < self.delta < 0.25):
            raise ValueError(f"delta must lie in (0, 1/4), got {self.delta}")
        if not (0.0 < self.epsilon < 1.0):
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.k < 0:
            raise ValueError("k must be >= 0")

    @property
    def x(self) -> float:
        """delta * t^(1/d), the regime coordinate."""
        return self.delta * self.t ** (1.0 / self.d)


@dataclass(frozen=True)
class BoundPair:
    lower: float
    upper: float
    log_lower: float
    log_upper: float

    def __post_init__(self):
        if self.log_lower > self.log_upper + 1e-12:
            raise ValueError("lower bound exceeds upper bound")

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)


def _exp(x):
    return math.exp(x) if x < 700 else math.inf


def ef_bounds(inp: RegimeInput, k=None) -> BoundPair:
    """Two-sided bounds on the expected k-face count.

    upper = t (t delta^d)^k (k+1)^d / (k+1)!, lower = (1-2 delta)^d * upper;
    at k = 0 the exact value t sits inside.
    """
    k = inp.k if k is None else k
    if k < 0:
        raise ValueError("k must be >= 0")
    d, t, delta = inp.d, inp.t, inp.delta
    # t is factored out of the exponential so the k = 0 upper bound is exactly t
    rest = (k * (math.log(t) + d * math.log(delta))
            + d * math.log(k + 1) - math.lgamma(k + 2))
    spread = d * math.log1p(-2.0 * delta)
    upper = t * _exp(rest)
    lower = t * _exp(rest + spread)
    return BoundPair(lower=lower, upper=upper,
                     log_lower=math.log(t) + rest + spread,
                     log_upper=math.log(t) + rest)


def ratio_bounds(inp: RegimeInput, k=None) -> BoundPair:
    """Bounds on E[F_k]/E[F_{k-1}] for k >= 1."""
    k = inp.k if k is None else k
    if k < 1:
        raise ValueError("ratio bounds need k >= 1")
    d, t, delta = inp.d, inp.t, inp.delta
    core = math.log(t) + d * math.log(delta * (k + 1) / k) - math.log(k + 1)
    spread = d * math.log1p(-2.0 * delta)
    return BoundPair(lower=_exp(core + spread), upper=_exp(core - spread),
                     log_lower=core + spread, log_upper=core - spread)


BOUNDARY = "boundary"


def dominant_index(x: float):
    """Face dimension whose expected count dominates, from x = delta t^(1/d).

    0 on (0, 2/3) (the low regime, where chi ~ t - E[F_1]); k on
    (1 - 1/(k+1), 1 - 1/(k+2)) above that; the string "boundary" within
    1e-12 of a threshold 1 - 1/(k+2).
    """
    if not (0.0 < x < 1.0):
        raise ValueError(f"x must lie in (0, 1), got {x}")
    # thresholds are 1 - 1/m for m >= 3; x/(1-x) sits near m-1 there
    ratio = x / (1.0 - x)
    for near in (math.floor(ratio), math.ceil(ratio)):
        if near >= 2 and abs(x - (1.0 - 1.0 / (near + 1))) <= BOUNDARY_TOL:
            return BOUNDARY
    if x < 2.0 / 3.0:
        return 0
    k = math.floor(ratio)
    if x <= 1.0 - 1.0 / (k + 1):  # float edge just below the k-th interval
        k -= 1
    return max(int(k), 2)


@dataclass(frozen=True)
class Certificate:
    """Outcome of the d-largeness check behind the geometric tail bounds."""

    item: int | None            # 1, 2, or None when neither hypothesis holds
    conditions: dict            # name -> bool at the input d
    min_d: int | None           # smallest d <= cap where all conditions hold
    tail_bound: float | None    # certified bound value at the input d, if conditions hold
    tail_statement: str


def _tail_condition(d, eps):
    # (1 - eps/2)^d <= (1 - eps/3)^d (1 - (1 - eps/2)^d)
    lhs = (1.0 - 0.5 * eps) ** d
    return lhs <= (1.0 - eps / 3.0) ** d * (1.0 - lhs)


def domination_certificate(inp: RegimeInput) -> Certificate:
    """Check the explicit largeness conditions and emit the certified tail bound.

    Item 1 applies when delta <= (k/(k+1)) t^(-1/d) (1-eps): the tail above k
    is controlled by E[F_{k-1}].  Item 2 applies when delta >= (k/(k+1))
    t^(-1/d) (1+eps): the head below k is controlled by E[F_k].
    """
    d, t, delta, eps, k = inp.d, inp.t, inp.delta, inp.epsilon, inp.k
    if k < 1:
        raise ValueError("the certificate needs k >= 1")
    pivot = (k / (k + 1)) * t ** (-1.0 / d)
    if delta <= pivot * (1.0 - eps):
        item = 1
    elif delta >= pivot * (1.0 + eps):
        item = 2
    else:
        return Certificate(item=None, conditions={}, min_d=None, tail_bound=None,
                           tail_statement="neither hypothesis holds at this delta")

    def conds_at(dd):
        tail = _tail_condition(dd, eps)
        if item == 1:
            ratio = (1.0 - eps) / (1.0 - 2.0 * delta) <= 1.0 - 0.5 * eps
            return {"ratio_contraction": ratio, "geometric_tail": tail}
        growth = ((1.0 + eps) * (1.0 - 2.0 * delta)
                  * (1.0 / (k + 1)) ** (1.0 / dd) >= 1.0 + 0.5 * eps)
        return {"ratio_growth": growth, "geometric_tail": tail}

    conditions = conds_at(d)
    min_d = None
    for dd in range(1, D_SCAN_CAP + 1):
        if all(conds_at(dd).values()):
            min_d = dd
            break

    tail_bound = None
    if all(conditions.values()):
        factor = (1.0 - eps / 3.0) ** d
        ref = ef_bounds(inp, k - 1 if item == 1 else k)
        tail_bound = factor * ref.upper
    statement = (f"sum of E[F_l] for l >= {k} <= E[F_{k - 1}] (1-eps/3)^d"
                 if item == 1 else
                 f"sum of E[F_l] for l <= {k - 1} <= E[F_{k}] (1-eps/3)^d")
    return Certificate(item=item, conditions=conditions, min_d=min_d,
                       tail_bound=tail_bound, tail_statement=statement)


@dataclass(frozen=True)
class ChiApprox:
    """Euler-characteristic approximation in an eps-shrunk regime window."""

    regime: str                 # "low" (chi ~ t - E[F_1]) or "single_term"
    k: int
    error_factor: float         # 1 or 2
    rel_error_bound: float      # factor * (1 - eps/3)^d
    chi_estimate: float         # prediction using E[F_k] midpoints


def euler_approx_bounds(inp: RegimeInput) -> ChiApprox | None:
    """Certified chi approximation, or None when x sits near a threshold.

    x <= 2/3 - eps: chi ~ t - E[F_1] with relative bound (1-eps/3)^d against
    E[F_1].  1 - 1/(k+1) + eps <= x <= 1 - 1/(k+2) - eps (k >= 2): chi ~
    (-1)^k E[F_k] with relative bound 2 (1-eps/3)^d.
    """
    x = inp.x
    eps = inp.epsilon
    geo = (1.0 - eps / 3.0) ** inp.d
    if x <= 2.0 / 3.0 - eps:
        f1 = ef_bounds(inp, 1)
        return ChiApprox(regime="low", k=1, error_factor=1.0,
                         rel_error_bound=geo,
                         chi_estimate=inp.t - f1.midpoint)
    k = 2
    while 1.0 - 1.0 / (k + 1) + eps <= 1.0:
        if 1.0 - 1.0 / (k + 1) + eps <= x <= 1.0 - 1.0 / (k + 2) - eps:
            fk = ef_bounds(inp, k)
            sign = -1.0 if k % 2 else 1.0
            return ChiApprox(regime="single_term", k=k, error_factor=2.0,
                             rel_error_bound=2.0 * geo,
                             chi_estimate=sign * fk.midpoint)
        if 1.0 - 1.0 / (k + 1) + eps > x:
            break
        k += 1
    return None


def regime_report(inp: RegimeInput, k_max: int = 6) -> dict:
    """JSON-ready report: dominating index, per-k bounds, conditions, chi section."""
    x = inp.x
    dom = dominant_index(x)
    ef = {k: ef_bounds(inp, k) for k in range(k_max + 1)}
    ratios = {k: ratio_bounds(inp, k) for k in range(1, k_max + 1)}
    cert = domination_certificate(inp) if inp.k >= 1 else None
    chi = euler_approx_bounds(inp)
    report = {
        "x": x,
        "dominant_k": dom,
        "ef_bounds": {str(k): {"lower": b.lower, "upper": b.upper,
                               "log_lower": b.log_lower, "log_upper": b.log_upper}
                      for k, b in ef.items()},
        "ratio_bounds": {str(k): {"lower": b.lower, "upper": b.upper}
                         for k, b in ratios.items()},
    }
    if cert is not None:
        report["conditions_met"] = {
            "item": cert.item,
            "conditions": cert.conditions,
            "min_d": cert.min_d,
            "tail_bound": cert.tail_bound,
            "tail_statement": cert.tail_statement,
        }
    report["chi_approx"] = None if chi is None else {
        "regime": chi.regime,
        "k": chi.k,
        "error_factor": chi.error_factor,
        "rel_error_bound": chi.rel_error_bound,
        "chi_estimate": chi.chi_estimate,
    }
    return report
