"""Discretized limit processes: stable Levy motion, LFSM and FBM.

The LFSM approximation integrates the moving-average kernel against the
normalized innovation measure, ``int f(u) dZ_n(u) = (1/a_n) sum_j f(j/n) xi_j``,
on the grid ``j = -floor(T_cut n) .. n``.
"""
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.signal import fftconvolve

from .cadlag import StepPath
from .coeffs import path_from_sums
from .errors import DomainError
from .innovations import norm_constant_a, sample_from, stable_sigma
from . import rng

DEFAULT_T_CUT = 50.0


@dataclass(frozen=True)
class LimitSpec:
    alpha: float
    H: float
    a: float
    b: float = 0.0
    sigma: float = field(init=False)

    def __post_init__(self):
        if not (0.0 < self.alpha <= 2.0):
            raise DomainError("alpha must lie in (0, 2]")
        if abs(self.a) + abs(self.b) <= 0:
            raise DomainError("need |a| + |b| > 0")
        if not self.degenerate:
            if self.H < 1.0 / self.alpha:
                raise DomainError("H < 1/alpha is not supported")
            if self.H >= 1.0:
                raise DomainError("H must be < 1")
        sigma = 1.0 if self.alpha == 2.0 else stable_sigma(self.alpha)
        object.__setattr__(self, "sigma", sigma)

    @property
    def exponent(self):
        return self.H - 1.0 / self.alpha

    @property
    def degenerate(self):
        """``H = 1/alpha``: the kernel collapses to ``(a - b) 1_(0,t](u)``."""
        return math.isclose(self.H, 1.0 / self.alpha, rel_tol=0.0, abs_tol=1e-12)


def _pos_pow(x, e):
    x = np.asarray(x, dtype=float)
    xp = np.maximum(x, 0.0)
    with np.errstate(divide="ignore"):
        return np.where(x > 0.0, xp ** e, 0.0)


def lfsm_kernel(spec, t, u):
    """``f_{alpha,H,a,b}(t, u)``; elementwise over arrays."""
    t = np.asarray(t, dtype=float)
    u = np.asarray(u, dtype=float)
    if spec.degenerate:
        inside = (u > 0.0) & (u <= t)
        out = np.where(inside, spec.a - spec.b, 0.0)
    else:
        e = spec.exponent
        out = (spec.a * (_pos_pow(t - u, e) - _pos_pow(-u, e))
               + spec.b * (_pos_pow(u - t, e) - _pos_pow(u, e)))
    return float(out) if out.ndim == 0 else out


def _ch_integrand_near(u, p):
    return ((1.0 + u) ** p - u ** p) ** 2


def _ch_integrand_far(v, p):
    # u = 1/v on [1, inf): ((1+u)^p - u^p)^2 du = v^(-2p-2) ((1+v)^p - 1)^2 dv
    return v ** (-2.0 * p - 2.0) * math.expm1(p * math.log1p(v)) ** 2


def c_H(H):
    """FBM moving-average constant ``{int_0^inf [(1+u)^(H-1/2) - u^(H-1/2)]^2 du + 1/(2H)}^(1/2)``."""
    if not (0.0 < H < 1.0):
        raise DomainError("H must lie in (0, 1)")
    p = H - 0.5
    if p == 0.0:
        return 1.0
    near, _ = integrate.quad(_ch_integrand_near, 0.0, 1.0, args=(p,),
                             epsabs=0.0, epsrel=1e-10, limit=200)
    far, _ = integrate.quad(_ch_integrand_far, 0.0, 1.0, args=(p,),
                            epsabs=0.0, epsrel=1e-10, limit=200)
    return math.sqrt(near + far + 1.0 / (2.0 * H))


def kernel_tail_mass(spec, T_cut, t=1.0):
    """``int_{-inf}^{-T_cut} |f(t, u)|^alpha du``: kernel mass dropped by truncation."""
    if spec.degenerate:
        return 0.0
    val, _ = integrate.quad(lambda u: abs(lfsm_kernel(spec, t, u)) ** spec.alpha,
                            -np.inf, -T_cut, limit=200)
    return val


def levy_path(model, n, seed, stream=0):
    """``Z_n(t) = (1/a_n) sum_{i <= floor(nt)} xi_i`` from ``n`` fresh innovations."""
    if n < 1:
        raise DomainError("n must be >= 1")
    gen = rng.generator(seed, stream)
    xi = sample_from(model, gen, n)
    return path_from_sums(np.cumsum(xi), n, norm_constant_a(model, n))


def _lfsm_sums(e, xi_past, xi_now):
    """Unnormalized ``(sum_j (k-j)_+^e xi_j - sum_{j<0} (-j)^e xi_j,
    sum_j (j-k)_+^e xi_j - sum_{j>0} j^e xi_j)`` for ``k = 0..n``.

    ``xi_past`` holds ``xi_{-J} .. xi_0`` and ``xi_now`` holds ``xi_1 .. xi_n``;
    both may carry a leading replicate axis.
    """
    full = np.concatenate([xi_past, xi_now], axis=-1)  # xi_{-J} .. xi_n
    J = xi_past.shape[-1] - 1
    n = xi_now.shape[-1]
    L = full.shape[-1]
    g = np.arange(L, dtype=float) ** e
    g[0] = 0.0
    if full.ndim == 2:
        g2 = g[None, :]
    else:
        g2 = g
    left = fftconvolve(full, g2, axes=-1)[..., J : J + n + 1]
    tail = full[..., J:]  # xi_0 .. xi_n
    rev = tail[..., ::-1]
    gr = g[: n + 1]
    gr2 = gr[None, :] if full.ndim == 2 else gr
    right = fftconvolve(rev, gr2, axes=-1)[..., : n + 1][..., ::-1]
    return left - left[..., :1], right - right[..., :1]


def _draw_lfsm_innovations(model, n, J, seed, stream):
    # xi_1..xi_n first, so the degenerate case shares them with levy_path
    gen = rng.generator(seed, stream)
    xi_now = sample_from(model, gen, n)
    xi_past = sample_from(model, gen, J + 1)
    return xi_past, xi_now


def lfsm_path(spec, model, n, T_cut=DEFAULT_T_CUT, seed=0, stream=0):
    """Approximate LFSM path ``(1/a_n) sum_{j=-floor(T_cut n)}^{n} f(k/n, j/n) xi_j`` at ``k/n``."""
    if n < 1:
        raise DomainError("n must be >= 1")
    if not T_cut > 0:
        raise DomainError("T_cut must be positive")
    if model.alpha != spec.alpha:
        raise DomainError("innovation and limit alpha differ")
    a_n = norm_constant_a(model, n)
    J = int(math.floor(T_cut * n))
    if spec.degenerate:
        gen = rng.generator(seed, stream)
        xi = sample_from(model, gen, n)
        z = path_from_sums(np.cumsum(xi), n, a_n)
        return StepPath(z.breakpoints, (spec.a - spec.b) * z.values)
    xi_past, xi_now = _draw_lfsm_innovations(model, n, J, seed, stream)
    vals = _lfsm_values(spec, xi_past, xi_now, n, a_n)
    return StepPath(np.arange(n + 1) / n, vals)


def _lfsm_values(spec, xi_past, xi_now, n, a_n):
    e = spec.exponent
    left, right = _lfsm_sums(e, xi_past, xi_now)
    scale = float(n) ** -e / a_n
    vals = scale * (spec.a * left + spec.b * right)
    vals[..., 0] = 0.0
    return vals


def lfsm_ensemble(spec, model, n, replicates, T_cut=DEFAULT_T_CUT, seed=0,
                  first_stream=0, times=None, chunk=64):
    """Values of ``replicates`` independent LFSM paths (streams ``first_stream, ...``).

    Returns an array of shape ``(replicates, n + 1)``, or only the columns
    ``k`` listed in ``times`` (as grid indices). Row ``r`` equals
    ``lfsm_path(..., stream=first_stream + r).values``.
    """
    a_n = norm_constant_a(model, n)
    J = int(math.floor(T_cut * n))
    cols = slice(None) if times is None else np.asarray(times)
    out = []
    for start in range(0, replicates, chunk):
        streams = range(first_stream + start, first_stream + min(start + chunk, replicates))
        if spec.degenerate:
            rows = [lfsm_path(spec, model, n, T_cut, seed, s).values for s in streams]
            block = np.stack(rows)
        else:
            pairs = [_draw_lfsm_innovations(model, n, J, seed, s) for s in streams]
            past = np.stack([p for p, _ in pairs])
            now = np.stack([q for _, q in pairs])
            block = _lfsm_values(spec, past, now, n, a_n)
        out.append(block[:, cols])
    return np.concatenate(out, axis=0)


def kernel_weights(spec, n, T_cut, t):
    """Weights ``f(t, j/n)`` for ``j = -floor(T_cut n) .. n``."""
    J = int(math.floor(T_cut * n))
    j = np.arange(-J, n + 1)
    return lfsm_kernel(spec, t, j / n)
