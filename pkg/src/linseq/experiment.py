"""Simulation protocol: truncated linear process, normalization, range calibration."""
import math
from dataclasses import dataclass, field, fields

import numpy as np

from . import rng
from .cadlag import StepPath, plot_affine, plot_auto
from .coeffs import (AlternatingPower, DifferencePair, FiniteList, OneSidedPower,
                     coefficient_limits, draw_window, partial_sum_weights, partial_sums,
                     path_from_sums, scaling_for, total_sum)
from .errors import DegenerateRangeError, DomainError
from .innovations import InnovationModel, norm_constant_a, stable_sigma
from .limits import c_H

NORMALIZATIONS = ("dn_an", "an_only")
RANGE_MODES = ("calibrated", "auto")


@dataclass(frozen=True)
class ExperimentConfig:
    alpha: float
    scheme: object
    n: int = 1000
    N_trunc: int = 50
    M: int = 75
    q_lo: float = 0.10
    q_hi: float = 0.90
    seed: int = 0
    normalization: str = "dn_an"
    range_mode: str = "calibrated"

    def __post_init__(self):
        InnovationModel(self.alpha)
        if self.n < 1 or self.N_trunc < 0 or self.M < 1:
            raise DomainError("need n >= 1, N_trunc >= 0, M >= 1")
        if not (0.0 <= self.q_lo < self.q_hi <= 1.0):
            raise DomainError("need 0 <= q_lo < q_hi <= 1")
        if self.normalization not in NORMALIZATIONS:
            raise DomainError(f"normalization must be one of {NORMALIZATIONS}")
        if self.range_mode not in RANGE_MODES:
            raise DomainError(f"range_mode must be one of {RANGE_MODES}")

    @property
    def model(self):
        return InnovationModel(self.alpha)


def normalizer(config):
    a_n = norm_constant_a(config.model, config.n)
    if config.normalization == "an_only":
        return a_n
    spec = scaling_for(config.scheme, config.alpha)
    return a_n * (spec.d_n(config.n) if spec is not None else 1.0)


class _Simulator:
    """Normalized partial sums ``T_k = S_k^N / gamma_n`` for one config, one stream at a time."""

    def __init__(self, config):
        self.config = config
        self.gamma_n = normalizer(config)
        self.weights = None
        if config.n * (config.n + 2 * config.N_trunc) <= 12_000_000:
            self.weights = partial_sum_weights(config.scheme, config.n, config.N_trunc)

    def sums(self, stream):
        c = self.config
        xi = draw_window(c.model, c.n, c.N_trunc, c.seed, stream)
        return partial_sums(c.scheme, xi, c.n, c.N_trunc, self.weights)

    def path(self, stream):
        return path_from_sums(self.sums(stream), self.config.n, self.gamma_n)


def order_statistic_quantile(values, q):
    """Lower empirical quantile: the ``ceil(q M)``-th smallest of ``M`` values (at least the 1st)."""
    v = np.sort(np.asarray(values, dtype=float))
    k = min(max(int(math.ceil(q * v.size - 1e-9)), 1), v.size)
    return float(v[k - 1])


def calibrate_range(config, _sim=None):
    """Plot range from ``M`` replicates on streams ``1..M``.

    Each replicate contributes ``T_min = min_k T_k`` and ``T_max = max_k T_k``
    over ``k = 1..n``; the range is the ``q_lo`` quantile of the minima and the
    ``q_hi`` quantile of the maxima. Stream 0 (the displayed path) is never used.
    """
    sim = _sim or _Simulator(config)
    t_min = np.empty(config.M)
    t_max = np.empty(config.M)
    for r in range(config.M):
        T = sim.sums(r + 1) / sim.gamma_n
        t_min[r] = T.min()
        t_max[r] = T.max()
    x_min = order_statistic_quantile(t_min, config.q_lo)
    x_max = order_statistic_quantile(t_max, config.q_hi)
    if not x_min < x_max:
        raise DegenerateRangeError(f"calibrated range [{x_min}, {x_max}] is empty")
    return x_min, x_max


def theoretical_constants(config):
    """Constants attached to a run: normalizers and the limit parameters that apply."""
    model = config.model
    n = config.n
    out = {"alpha": config.alpha, "n": n, "N_trunc": config.N_trunc,
           "a_n": norm_constant_a(model, n), "rng": rng.ALGORITHM}
    spec = scaling_for(config.scheme, config.alpha)
    if spec is not None:
        lim = coefficient_limits(config.scheme, spec)
        out.update(H=spec.H, mode=spec.mode, d_n=spec.d_n(n), a=lim.a, b=lim.b,
                   a_pos=lim.a_pos, a_neg=lim.a_neg)
        if lim.A is not None:
            out["A"] = lim.A
        if spec.mode == "lfsm" and config.alpha == 2.0:
            ch = c_H(spec.H)
            out["C_H"] = ch
            out["a_over_C_H"] = lim.a / ch
    else:
        A = total_sum(config.scheme)
        out.update(H=1.0 / config.alpha, mode="levy", d_n=1.0, a=A, b=0.0, A=A)
    if config.alpha < 2.0:
        out["sigma"] = stable_sigma(config.alpha)
    out["normalization"] = config.normalization
    out["normalizer"] = normalizer(config)
    return out


@dataclass
class ExampleResult:
    config: ExperimentConfig
    path: StepPath
    range: tuple
    scaled: StepPath
    constants: dict = field(default_factory=dict)

    @property
    def display_range(self):
        if self.config.range_mode == "auto":
            lo, hi = float(self.path.values.min()), float(self.path.values.max())
            return lo, hi
        return self.range


def run_example(config):
    sim = _Simulator(config)
    path = sim.path(0)
    rng_ = calibrate_range(config, sim)
    if config.range_mode == "auto":
        scaled = plot_auto(path)
    else:
        scaled = plot_affine(path, *rng_)
    return ExampleResult(config=config, path=path, range=rng_, scaled=scaled,
                         constants=theoretical_constants(config))


# --------------------------------------------------------------------------
# presets and config files

PRESETS = {
    "4.3i": dict(scheme=OneSidedPower(0.75), q_lo=0.10, q_hi=0.90, range_mode="auto"),
    "4.3ii": dict(scheme=OneSidedPower(4.0), q_lo=0.10, q_hi=0.90, range_mode="auto"),
    "4.4": dict(scheme=AlternatingPower(3.0, 1.0, 0.75), q_lo=0.10, q_hi=0.90),
    "4.4zero": dict(scheme=AlternatingPower(1.0, 1.0, 0.75), q_lo=0.10, q_hi=0.90),
    "4.5": dict(scheme=AlternatingPower(1.0, 1.0, 4.0), q_lo=0.10, q_hi=0.90),
    "4.6": dict(scheme=AlternatingPower(1.0, 1.0, 4.0), q_lo=0.15, q_hi=0.85,
                normalization="an_only"),
}


def preset(example, alpha, seed=0, **overrides):
    if example not in PRESETS:
        raise DomainError(f"unknown example {example!r}; choose from {sorted(PRESETS)}")
    kw = dict(PRESETS[example], alpha=alpha, seed=seed)
    kw.update(overrides)
    return ExperimentConfig(**kw)


_SCHEME_KEYS = ("scheme", "gamma", "k1", "k2", "coeffs")


def scheme_from_fields(kind, gamma=None, k1=None, k2=None, coeffs=None):
    kind = kind.strip().lower()
    if kind in ("one_sided", "onesided", "power"):
        return OneSidedPower(float(gamma))
    if kind in ("alternating", "alt"):
        return AlternatingPower(float(k1), float(k2), float(gamma))
    if kind in ("difference", "diff", "difference_pair"):
        return DifferencePair()
    if kind in ("finite", "list", "finite_list"):
        items = []
        for part in (coeffs or "").split(","):
            if part.strip():
                j, c = part.split(":")
                items.append((int(j), float(c)))
        return FiniteList(items)
    raise DomainError(f"unknown scheme {kind!r}")


def parse_config_text(text, overrides=None):
    """Flat ``key = value`` config; ``#`` starts a comment. ``overrides`` win over the file."""
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"line {lineno}: expected key=value")
        k, v = line.split("=", 1)
        raw[k.strip()] = v.strip()
    for k, v in (overrides or {}).items():
        if v is not None:
            raw[k] = str(v)
    known = {f.name for f in fields(ExperimentConfig)} | set(_SCHEME_KEYS)
    unknown = set(raw) - known
    if unknown:
        raise DomainError(f"unknown config keys: {sorted(unknown)}")
    if "alpha" not in raw or "scheme" not in raw:
        raise DomainError("config needs at least 'alpha' and 'scheme'")
    scheme = scheme_from_fields(raw["scheme"], raw.get("gamma"), raw.get("k1"),
                                raw.get("k2"), raw.get("coeffs"))
    casts = {"alpha": float, "n": int, "N_trunc": int, "M": int, "q_lo": float,
             "q_hi": float, "seed": int, "normalization": str, "range_mode": str}
    kw = {k: casts[k](v) for k, v in raw.items() if k in casts}
    return ExperimentConfig(scheme=scheme, **kw)
