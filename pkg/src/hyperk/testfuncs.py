"""Positive test functions and seeded inequality scenarios.

The function family is deliberately small: powers, exponentials, affine
functions and tabulated monotone interpolants, closed under pointwise sum,
product and positive powers.  Instances only ever get evaluated on (0, x]
for their own x, and every generated scenario re-verifies its hypothesis
(ratio sandwich or monotonicity) on a dense sample before it is returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import ConstructionError, DomainError, GenerationError
from .fracint import OperatorParams

__all__ = [
    "FunctionSpec",
    "PowerFn",
    "ExpFn",
    "AffineFn",
    "TabulatedFn",
    "SumFn",
    "ProductFn",
    "PowFn",
    "function_from_dict",
    "TestInstance",
    "sample_points",
    "make_ratio_pair",
    "make_monotone_pair",
    "draw_positive_function",
    "random_instance",
    "verify_hypotheses",
    "equality_instance",
    "instance_from_dict",
    "THEOREM_IDS",
]

THEOREM_IDS = ("3.1", "3.2", "4.1", "4.2", "4.3", "4.4")
_THEOREM_KEYS = {tid: 10 * int(tid[0]) + int(tid[2]) for tid in THEOREM_IDS}

_SAMPLE_COUNT = 512
_MAX_TRIES = 1000


class FunctionSpec:
    """Base class: a positive function on (0, x], vectorized over arrays."""

    def __call__(self, t):
        raise NotImplementedError

    def __add__(self, other: "FunctionSpec") -> "FunctionSpec":
        return SumFn((self, other))

    def __mul__(self, other: "FunctionSpec") -> "FunctionSpec":
        return ProductFn((self, other))

    def __pow__(self, exponent: float) -> "FunctionSpec":
        return PowFn(self, float(exponent))

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class PowerFn(FunctionSpec):
    c: float
    p0: float

    def __call__(self, t):
        return self.c * np.asarray(t, dtype=float) ** self.p0

    def to_dict(self):
        return {"family": "power", "c": self.c, "p0": self.p0}


@dataclass(frozen=True)
class ExpFn(FunctionSpec):
    c: float
    lam: float

    def __call__(self, t):
        return self.c * np.exp(self.lam * np.asarray(t, dtype=float))

    def to_dict(self):
        return {"family": "exp", "c": self.c, "lam": self.lam}


@dataclass(frozen=True)
class AffineFn(FunctionSpec):
    a0: float
    b0: float

    def __call__(self, t):
        return self.a0 + self.b0 * np.asarray(t, dtype=float)

    def to_dict(self):
        return {"family": "affine", "a0": self.a0, "b0": self.b0}


@dataclass(frozen=True)
class TabulatedFn(FunctionSpec):
    """Piecewise-linear interpolant; clamps to the end values outside."""

    breakpoints: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.breakpoints) != len(self.values) or len(self.breakpoints) < 2:
            raise ConstructionError("tabulated function needs matching lists, length >= 2")
        if not all(math.isfinite(v) for v in self.values):
            raise ConstructionError("tabulated values must be finite")
        if not all(b1 < b2 for b1, b2 in zip(self.breakpoints, self.breakpoints[1:])):
            raise ConstructionError("tabulated breakpoints must be strictly increasing")

    def __call__(self, t):
        return np.interp(np.asarray(t, dtype=float), self.breakpoints, self.values)

    def to_dict(self):
        return {
            "family": "tabulated",
            "breakpoints": list(self.breakpoints),
            "values": list(self.values),
        }


@dataclass(frozen=True)
class SumFn(FunctionSpec):
    parts: tuple[FunctionSpec, ...]

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        total = self.parts[0](t)
        for part in self.parts[1:]:
            total = total + part(t)
        return total

    def to_dict(self):
        return {"family": "sum", "parts": [p.to_dict() for p in self.parts]}


@dataclass(frozen=True)
class ProductFn(FunctionSpec):
    parts: tuple[FunctionSpec, ...]

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        total = self.parts[0](t)
        for part in self.parts[1:]:
            total = total * part(t)
        return total

    def to_dict(self):
        return {"family": "product", "parts": [p.to_dict() for p in self.parts]}


@dataclass(frozen=True)
class PowFn(FunctionSpec):
    base: FunctionSpec
    exponent: float

    def __post_init__(self):
        if not (math.isfinite(self.exponent) and self.exponent > 0.0):
            raise DomainError(f"pointwise power requires a positive exponent, got {self.exponent!r}")

    def __call__(self, t):
        return self.base(np.asarray(t, dtype=float)) ** self.exponent

    def to_dict(self):
        return {"family": "pow", "base": self.base.to_dict(), "exponent": self.exponent}


def function_from_dict(d: dict) -> FunctionSpec:
    """Rebuild a FunctionSpec from its to_dict record."""
    family = d["family"]
    if family == "power":
        return PowerFn(d["c"], d["p0"])
    if family == "exp":
        return ExpFn(d["c"], d["lam"])
    if family == "affine":
        return AffineFn(d["a0"], d["b0"])
    if family == "tabulated":
        return TabulatedFn(tuple(d["breakpoints"]), tuple(d["values"]))
    if family == "sum":
        return SumFn(tuple(function_from_dict(p) for p in d["parts"]))
    if family == "product":
        return ProductFn(tuple(function_from_dict(p) for p in d["parts"]))
    if family == "pow":
        return PowFn(function_from_dict(d["base"]), d["exponent"])
    raise DomainError(f"unknown function family {family!r}")


@dataclass(frozen=True)
class TestInstance:
    """One randomized inequality scenario, replayable from (seed, theorem_id)."""

    theorem_id: str
    params: OperatorParams
    f: FunctionSpec
    g: FunctionSpec
    m: Optional[float]
    M: Optional[float]
    p: Optional[float]
    q: Optional[float]
    gamma: Optional[float]
    delta: Optional[float]
    x: float
    seed: int

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem_id,
            "seed": self.seed,
            "alpha": self.params.alpha,
            "beta": self.params.beta,
            "eta": self.params.eta,
            "mu": self.params.mu,
            "k": self.params.k,
            "validation_mode": self.params.validation_mode,
            "f": self.f.to_dict(),
            "g": self.g.to_dict(),
            "m": self.m,
            "M": self.M,
            "p": self.p,
            "q": self.q,
            "gamma": self.gamma,
            "delta": self.delta,
            "x": self.x,
        }


def instance_from_dict(d: dict) -> TestInstance:
    params = OperatorParams(
        d["alpha"], d["beta"], d["eta"], d["mu"], d["k"],
        d.get("validation_mode", "strict-theorem"),
    )
    return TestInstance(
        theorem_id=d["theorem"],
        params=params,
        f=function_from_dict(d["f"]),
        g=function_from_dict(d["g"]),
        m=d.get("m"),
        M=d.get("M"),
        p=d.get("p"),
        q=d.get("q"),
        gamma=d.get("gamma"),
        delta=d.get("delta"),
        x=d["x"],
        seed=d["seed"],
    )


def sample_points(x_max: float, count: int = _SAMPLE_COUNT) -> np.ndarray:
    """Sample of (0, x_max], geometrically dense toward both endpoints.

    Ratio and monotonicity violations hide at the ends, so half the points
    crowd 0 and half crowd x_max (which is itself included).
    """
    half = count // 2
    lo = np.geomspace(x_max * 1e-6, x_max * 0.5, half)
    hi = x_max - np.geomspace(x_max * 1e-6, x_max * 0.5, count - half)
    return np.unique(np.concatenate([lo, hi, [x_max]]))


def _check_positive(fs: FunctionSpec, x_max: float, label: str) -> None:
    vals = fs(sample_points(x_max))
    if not np.all(np.isfinite(vals)):
        raise ConstructionError(f"{label} is not finite everywhere on (0, {x_max}]")
    if np.min(vals) <= 0.0:
        raise ConstructionError(f"{label} is not strictly positive on (0, {x_max}]")


def make_ratio_pair(
    g_spec: FunctionSpec,
    ratio_spec: FunctionSpec,
    m: float,
    M: float,
    x_max: float = 1.0,
) -> tuple[FunctionSpec, FunctionSpec]:
    """Build f = ratio * g so that m <= f/g <= M holds by construction.

    The sandwich is still re-verified on the dense sample; a ratio that
    escapes [m, M] raises ConstructionError.
    """
    if not (0.0 < m <= M):
        raise DomainError(f"need 0 < m <= M, got m = {m!r}, M = {M!r}")
    _check_positive(g_spec, x_max, "g")
    ratios = ratio_spec(sample_points(x_max))
    slack = 1e-12 * max(1.0, abs(M))
    if not np.all(np.isfinite(ratios)):
        raise ConstructionError("ratio function is not finite on the sample")
    if np.min(ratios) < m - slack or np.max(ratios) > M + slack:
        raise ConstructionError(
            f"ratio escapes [{m}, {M}]: observed range "
            f"[{float(np.min(ratios))}, {float(np.max(ratios))}]"
        )
    return ratio_spec * g_spec, g_spec


def _is_nondecreasing(vals: np.ndarray) -> bool:
    return bool(np.all(np.diff(vals) >= -1e-12 * max(1.0, float(np.max(np.abs(vals))))))


def _draw_simple(rng: np.random.Generator, x_max: float) -> FunctionSpec:
    kind = rng.integers(0, 4)
    if kind == 0:
        return PowerFn(rng.uniform(0.3, 3.0), rng.uniform(0.0, 2.0))
    if kind == 1:
        return ExpFn(rng.uniform(0.3, 3.0), rng.uniform(-1.0, 1.0))
    if kind == 2:
        a0 = rng.uniform(0.2, 3.0)
        b0 = rng.uniform(-0.8 * a0 / x_max, 2.0)
        return AffineFn(a0, b0)
    inner = np.sort(rng.uniform(0.0, x_max, 3))
    bp = np.unique(np.concatenate([[0.0], inner, [x_max]]))
    vals = rng.uniform(0.3, 3.0, len(bp))
    return TabulatedFn(tuple(bp), tuple(vals))


def draw_positive_function(rng: np.random.Generator, x_max: float) -> FunctionSpec:
    """One positive function on (0, x_max], occasionally a two-term sum."""
    if rng.random() < 0.2:
        return SumFn((_draw_simple(rng, x_max), _draw_simple(rng, x_max)))
    return _draw_simple(rng, x_max)


def _draw_ratio_function(rng, x_max: float, m: float, M: float) -> FunctionSpec:
    """A function with range inside [m, M] on (0, x_max]."""
    kind = rng.integers(0, 5)
    if kind == 0:
        return AffineFn(rng.uniform(m, M), 0.0)
    if kind == 1:
        return AffineFn(m, (M - m) / x_max)
    if kind == 2:
        return AffineFn(M, -(M - m) / x_max)
    if kind == 3:
        pr = rng.uniform(0.5, 2.0)
        return SumFn((AffineFn(m, 0.0), PowerFn((M - m) / x_max ** pr, pr)))
    inner = np.sort(rng.uniform(0.0, x_max, 3))
    bp = np.unique(np.concatenate([[0.0], inner, [x_max]]))
    vals = rng.uniform(m, M, len(bp))
    return TabulatedFn(tuple(bp), tuple(vals))


def _draw_monotone_pair(rng, x_max: float) -> tuple[FunctionSpec, FunctionSpec]:
    kind_f = rng.integers(0, 4)
    if kind_f == 0:
        f = PowerFn(rng.uniform(0.3, 3.0), rng.uniform(0.0, 2.0))
    elif kind_f == 1:
        f = ExpFn(rng.uniform(0.3, 3.0), rng.uniform(0.0, 1.0))
    elif kind_f == 2:
        f = AffineFn(rng.uniform(0.2, 2.0), rng.uniform(0.0, 2.0))
    else:
        inner = np.sort(rng.uniform(0.0, x_max, 3))
        bp = np.unique(np.concatenate([[0.0], inner, [x_max]]))
        vals = np.sort(rng.uniform(0.3, 3.0, len(bp)))
        f = TabulatedFn(tuple(bp), tuple(vals))

    kind_g = rng.integers(0, 3)
    if kind_g == 0:
        g = ExpFn(rng.uniform(0.3, 3.0), rng.uniform(-1.0, 0.0))
    elif kind_g == 1:
        a0 = rng.uniform(0.5, 3.0)
        g = AffineFn(a0, -rng.uniform(0.0, 0.8) * a0 / x_max)
    else:
        inner = np.sort(rng.uniform(0.0, x_max, 3))
        bp = np.unique(np.concatenate([[0.0], inner, [x_max]]))
        vals = np.sort(rng.uniform(0.3, 3.0, len(bp)))[::-1]
        g = TabulatedFn(tuple(bp), tuple(vals))
    return f, g


def make_monotone_pair(seed: int, x_max: float = 1.0) -> tuple[FunctionSpec, FunctionSpec]:
    """Seeded (non-decreasing f, non-increasing g), verified on the sample."""
    rng = np.random.default_rng((int(seed) & (2 ** 64 - 1), 77))
    f, g = _draw_monotone_pair(rng, x_max)
    pts = sample_points(x_max)
    if not _is_nondecreasing(f(pts)):
        raise ConstructionError("drawn f is not non-decreasing")
    if not _is_nondecreasing(g(pts)[::-1]):
        raise ConstructionError("drawn g is not non-increasing")
    _check_positive(f, x_max, "f")
    _check_positive(g, x_max, "g")
    return f, g


def _draw_params(rng) -> OperatorParams:
    """Strict-window parameter draw.

    Rejects draws where alpha + beta + mu comes within 0.05 of zero or the
    gap eta - beta - mu within 0.02 of an integer; both regions are
    numerically delicate for no testing benefit.  A quarter of the draws
    pin k to an integer so the polynomial substitution path gets exercised.
    """
    for _ in range(_MAX_TRIES):
        alpha = rng.uniform(0.3, 2.0)
        mu = rng.uniform(-0.5, 1.0)
        beta = rng.uniform(-1.0, 0.9)
        if alpha <= max(0.0, -beta - mu) + 0.05:
            continue
        eta = rng.uniform(beta - 1.0 + 0.05, -0.05)
        s = eta - beta - mu
        if abs(s - round(s)) < 0.02:
            continue
        k = float(rng.integers(0, 3)) if rng.random() < 0.25 else float(rng.uniform(0.0, 2.0))
        return OperatorParams(alpha, beta, eta, mu, k)
    raise GenerationError("parameter rejection sampling exhausted its retry budget")


def random_instance(seed: int, theorem_id: str) -> TestInstance:
    """Deterministic scenario for the given inequality, keyed by (seed, id)."""
    if theorem_id not in _THEOREM_KEYS:
        raise DomainError(f"unknown theorem id {theorem_id!r}; expected one of {THEOREM_IDS}")
    rng = np.random.default_rng((int(seed) & (2 ** 64 - 1), _THEOREM_KEYS[theorem_id]))
    params = _draw_params(rng)
    x = float(rng.uniform(0.5, 3.0))

    p = float(rng.uniform(1.1, 4.0))
    q = p / (p - 1.0)

    if theorem_id == "4.4":
        gamma, delta = (float(v) for v in rng.uniform(0.5, 3.0, 2))
        for _ in range(_MAX_TRIES):
            try:
                f, g = _draw_monotone_pair(rng, x)
                inst = TestInstance(theorem_id, params, f, g, None, None, None, None,
                                    gamma, delta, x, int(seed))
                verify_hypotheses(inst)
                return inst
            except ConstructionError:
                continue
        raise GenerationError("monotone pair generation exhausted its retry budget")

    lo, hi = np.sort(rng.uniform(0.2, 5.0, 2))
    if hi - lo < 0.05:
        hi = lo + 0.05
    m, M = float(lo), float(hi)

    for _ in range(_MAX_TRIES):
        try:
            g = draw_positive_function(rng, x)
            ratio = _draw_ratio_function(rng, x, m, M)
            if theorem_id == "4.2":
                # the sandwich binds f^p / g^q, so solve f from the ratio
                f = PowFn(ratio * PowFn(g, q), 1.0 / p)
                _check_positive(g, x, "g")
            else:
                f, g = make_ratio_pair(g, ratio, m, M, x)
            inst = TestInstance(theorem_id, params, f, g, m, M, p, q, None, None,
                                x, int(seed))
            verify_hypotheses(inst)
            return inst
        except ConstructionError:
            continue
    raise GenerationError("function pair generation exhausted its retry budget")


def verify_hypotheses(instance: TestInstance) -> None:
    """Re-check the instance's own hypothesis on the dense sample.

    Raises ConstructionError when positivity, the ratio sandwich (on f/g,
    or f^p/g^q for the 4.2 form) or monotonicity (4.4) fails.
    """
    pts = sample_points(instance.x)
    fv = instance.f(pts)
    gv = instance.g(pts)
    for label, vals in (("f", fv), ("g", gv)):
        if not np.all(np.isfinite(vals)) or np.min(vals) <= 0.0:
            raise ConstructionError(f"{label} is not positive and finite on (0, x]")

    if instance.theorem_id == "4.4":
        if not _is_nondecreasing(fv):
            raise ConstructionError("f must be non-decreasing")
        if not _is_nondecreasing(gv[::-1]):
            raise ConstructionError("g must be non-increasing")
        return

    if instance.m is None or instance.M is None:
        raise ConstructionError("ratio-sandwich instance is missing m or M")
    if instance.theorem_id == "4.2":
        ratio = fv ** instance.p / gv ** instance.q
    else:
        ratio = fv / gv
    slack = 1e-9 * max(1.0, abs(instance.M))
    if np.min(ratio) < instance.m - slack or np.max(ratio) > instance.M + slack:
        raise ConstructionError(
            f"ratio sandwich [{instance.m}, {instance.M}] violated: observed "
            f"[{float(np.min(ratio))}, {float(np.max(ratio))}]"
        )


def equality_instance(theorem_id: str, seed: int = 0) -> TestInstance:
    """The boundary scenario m = M = 1 with f = g (f = g = 1 where needed).

    For ids 3.1, 3.2, 4.1 any common function forces both sides equal; the
    Young-based bound 4.3 needs f = g = 1, and the monotone form 4.4 uses a
    constant pair (the only functions that are monotone both ways).
    """
    base = random_instance(seed, theorem_id)
    one = AffineFn(1.0, 0.0)
    if theorem_id == "4.4":
        return replace(base, f=one, g=one)
    if theorem_id == "4.3":
        return replace(base, f=one, g=one, m=1.0, M=1.0)
    if theorem_id == "4.2":
        f = PowFn(base.g, base.q / base.p)
        return replace(base, f=f, m=1.0, M=1.0)
    return replace(base, f=base.g, m=1.0, M=1.0)
