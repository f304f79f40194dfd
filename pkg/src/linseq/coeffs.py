"""Coefficient families, truncated linear processes and their limit constants."""
import math
from dataclasses import dataclass, field

import numpy as np

from .cadlag import StepPath
from .errors import DomainError
from .innovations import sample_innovations


@dataclass(frozen=True)
class OneSidedPower:
    """``c_j = j^(-gamma)`` for ``j >= 1``, zero otherwise."""

    gamma: float

    def values(self, j):
        j = np.asarray(j)
        jf = np.where(j >= 1, j, 1).astype(float)
        return np.where(j >= 1, jf ** -self.gamma, 0.0)


@dataclass(frozen=True)
class AlternatingPower:
    """``k1 j^(-gamma)`` for even ``j >= 1``, ``-k2 j^(-gamma)`` for odd ``j >= 1``."""

    k1: float
    k2: float
    gamma: float

    def values(self, j):
        j = np.asarray(j)
        jf = np.where(j >= 1, j, 1).astype(float)
        mag = jf ** -self.gamma
        v = np.where(j % 2 == 0, self.k1 * mag, -self.k2 * mag)
        return np.where(j >= 1, v, 0.0)


@dataclass(frozen=True)
class FiniteList:
    """Finitely many non-zero coefficients given as ``(j, c_j)`` pairs."""

    items: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "items", tuple((int(j), float(c)) for j, c in self.items))

    def values(self, j):
        j = np.asarray(j)
        out = np.zeros(j.shape)
        for idx, c in self.items:
            out = np.where(j == idx, out + c, out)
        return out


@dataclass(frozen=True)
class DifferencePair:
    """``c_0 = 1``, ``c_1 = -1``: the telescoping sequence ``X_i = xi_i - xi_{i-1}``."""

    def values(self, j):
        j = np.asarray(j)
        return np.where(j == 0, 1.0, np.where(j == 1, -1.0, 0.0))


@dataclass(frozen=True)
class _PartScheme:
    base: object
    sign: float

    def values(self, j):
        return np.maximum(self.sign * self.base.values(j), 0.0)


ZERO = FiniteList(())


def coefficient(scheme, j):
    v = scheme.values(j)
    return float(v) if np.ndim(j) == 0 else v


def decompose(scheme):
    """Canonical split ``c_j = pos_j - neg_j`` with ``pos = max(c, 0)``, ``neg = max(-c, 0)``."""
    if isinstance(scheme, OneSidedPower):
        return scheme, ZERO
    if isinstance(scheme, AlternatingPower):
        return (AlternatingPower(scheme.k1, 0.0, scheme.gamma),
                _negate_odd(scheme))
    if isinstance(scheme, DifferencePair):
        return FiniteList([(0, 1.0)]), FiniteList([(1, 1.0)])
    if isinstance(scheme, FiniteList):
        pos = [(j, c) for j, c in scheme.items if c > 0]
        neg = [(j, -c) for j, c in scheme.items if c < 0]
        return FiniteList(pos), FiniteList(neg)
    return _PartScheme(scheme, 1.0), _PartScheme(scheme, -1.0)


@dataclass(frozen=True)
class _OddPower:
    k2: float
    gamma: float

    def values(self, j):
        j = np.asarray(j)
        jf = np.where(j >= 1, j, 1).astype(float)
        return np.where((j >= 1) & (j % 2 == 1), self.k2 * jf ** -self.gamma, 0.0)


def _negate_odd(scheme):
    return _OddPower(scheme.k2, scheme.gamma)


def is_power_family(scheme):
    return isinstance(scheme, (OneSidedPower, AlternatingPower))


# --------------------------------------------------------------------------
# scaling

@dataclass(frozen=True)
class ScalingSpec:
    alpha: float
    gamma: float
    H: float = field(init=False)
    mode: str = field(init=False)

    def __post_init__(self):
        if not (0.0 < self.alpha <= 2.0):
            raise DomainError(f"alpha must lie in (0, 2], got {self.alpha}")
        if self.gamma <= 1.0 / self.alpha:
            raise DomainError(
                f"gamma = {self.gamma} must exceed 1/alpha = {1.0 / self.alpha}: "
                "the coefficients are not delta-summable for any delta < alpha")
        if self.gamma == 1.0:
            raise DomainError("gamma = 1 gives d_n ~ ln n, which is not of the form n^(H - 1/alpha)")
        if self.gamma < 1.0:
            H, mode = 1.0 / self.alpha + 1.0 - self.gamma, "lfsm"
        else:
            H, mode = 1.0 / self.alpha, "levy"
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "mode", mode)

    def d_n(self, n):
        if self.mode == "levy":
            return 1.0
        return float(n) ** (self.H - 1.0 / self.alpha)


def scaling_for(scheme, alpha):
    """ScalingSpec for a power family; ``None`` for finitely supported schemes (Levy regime)."""
    if is_power_family(scheme):
        return ScalingSpec(alpha, scheme.gamma)
    return None


# --------------------------------------------------------------------------
# truncated process and partial sums

def coefficient_window(scheme, N):
    """``(c_{-N}, ..., c_N)``."""
    return np.asarray(scheme.values(np.arange(-N, N + 1)), dtype=float)


def innovation_window(n, N):
    """Indices ``k = 1-N, ..., n+N`` of the innovations feeding ``X_1^N .. X_n^N``."""
    return np.arange(1 - N, n + N + 1)


def draw_window(model, n, N, seed, stream):
    return sample_innovations(model, n + 2 * N, seed, stream)


def filter_innovations(c_window, xi):
    """``X_i = sum_{|j|<=N} c_j xi_{i-j}`` for every ``i`` fully covered by ``xi``.

    ``xi`` may be 2-D (one replicate per row).
    """
    xi = np.asarray(xi, dtype=float)
    if xi.ndim == 1:
        return np.convolve(xi, c_window, mode="valid")
    return np.stack([np.convolve(row, c_window, mode="valid") for row in xi])


def build_truncated_process(scheme, model, n, N, seed, stream=0):
    """``(X_1^N, ..., X_n^N)`` from innovations ``xi_{1-N} .. xi_{n+N}`` of one stream."""
    if n < 1 or N < 0:
        raise DomainError("need n >= 1 and N >= 0")
    xi = draw_window(model, n, N, seed, stream)
    return filter_innovations(coefficient_window(scheme, N), xi)


def partial_sum_weights(scheme, n, N):
    """Matrix ``W`` with ``S_k = sum_p W[k-1, p] xi_{p+1-N}`` for ``k = 1..n``.

    Row ``k`` holds ``f_n(k/n, j/n) = sum_{l=1-j}^{k-j} c_l`` (truncated to
    ``|l| <= N``) for ``j = 1-N .. n+N``. Summing the innovations against these
    weights, instead of cumulating the rounded ``X_i``, keeps cancellations such
    as the telescoping ``xi_k - xi_0`` exact in floating point.
    """
    c = coefficient_window(scheme, N)
    cum = np.concatenate([[0.0], np.cumsum(c)])  # cum[m+N+1] = sum_{l=-N}^{m} c_l

    def C(m):
        m = np.clip(m, -N - 1, N)
        return cum[m + N + 1]

    k = np.arange(1, n + 1)[:, None]
    j = innovation_window(n, N)[None, :]
    return C(k - j) - C(-j)


_DENSE_LIMIT = 12_000_000


def partial_sums(scheme, xi, n, N, weights=None):
    """Partial sums ``S_1..S_n`` of the truncated process driven by ``xi``.

    ``xi`` holds ``xi_{1-N} .. xi_{n+N}`` (or one such row per replicate).
    """
    xi = np.asarray(xi, dtype=float)
    if weights is None and n * (n + 2 * N) <= _DENSE_LIMIT:
        weights = partial_sum_weights(scheme, n, N)
    if weights is not None:
        return xi @ weights.T
    X = filter_innovations(coefficient_window(scheme, N), xi)
    return np.cumsum(X, axis=-1)


def partial_sum_path(X, n, normalizer):
    """Step path of ``t -> sum_{i <= floor(nt)} X_i / normalizer`` with breakpoints ``k/n``."""
    return path_from_sums(np.cumsum(np.asarray(X, dtype=float)), n, normalizer)


def path_from_sums(S, n, normalizer):
    """Step path through ``(k/n, S_k / normalizer)``, ``k = 0..n``, with ``S_0 = 0``."""
    if not normalizer > 0:
        raise DomainError("normalizer must be positive")
    S = np.asarray(S, dtype=float)
    if S.shape != (n,):
        raise DomainError(f"expected {n} partial sums, got shape {S.shape}")
    t = np.arange(n + 1) / n
    return StepPath(t, np.concatenate([[0.0], S / normalizer]))


# --------------------------------------------------------------------------
# limit constants

def _em_tail(J, gamma):
    """Bracket for ``sum_{j>=J} j^(-gamma)`` (gamma > 1, J >= 1).

    Trapezoid comparison for a convex decreasing summand:
    ``I + f(J)/2 <= R <= I + f(J)/2 - f'(J)/8`` with ``I = J^(1-gamma)/(gamma-1)``.
    """
    base = J ** (1.0 - gamma) / (gamma - 1.0) + 0.5 * J ** -gamma
    return base, base + gamma * J ** (-gamma - 1.0) / 8.0


def _head_cut(gamma, tol):
    # bracket width gamma J^(-gamma-1)/8 <= tol
    J = int(math.ceil((gamma / (8.0 * tol)) ** (1.0 / (gamma + 1.0))))
    J = max(J, 16)
    return J + (J % 2)


def zeta_series(gamma, signed=False, tol=1e-12):
    """``sum_{j>=1} j^(-gamma)`` or, if ``signed``, ``sum_{j>=1} (-1)^j j^(-gamma)``.

    Direct summation of the head plus a bracketed integral tail estimate; the
    returned value sits at the bracket midpoint.
    """
    if gamma <= 1.0:
        raise DomainError("zeta_series needs gamma > 1")
    J = _head_cut(gamma, tol)
    j = np.arange(1, J, dtype=float)
    terms = j ** -gamma
    if not signed:
        lo, hi = _em_tail(J, gamma)
        return math.fsum(terms) + 0.5 * (lo + hi)
    sgn = np.where(np.arange(1, J) % 2 == 0, 1.0, -1.0)
    head = math.fsum(sgn * terms)
    # J even: even tail = 2^-gamma * sum_{k >= J/2} k^-gamma
    e_lo, e_hi = _em_tail(J // 2, gamma)
    a_lo, a_hi = _em_tail(J, gamma)
    scale = 2.0 ** -gamma
    even_mid = scale * 0.5 * (e_lo + e_hi)
    all_mid = 0.5 * (a_lo + a_hi)
    return head + even_mid - (all_mid - even_mid)


def zeta_even_odd(gamma):
    """``(sum over even j >= 1, sum over odd j >= 1)`` of ``j^(-gamma)``."""
    total = zeta_series(gamma)
    even = 2.0 ** -gamma * total
    return even, total - even


@dataclass
class CoefficientLimits:
    a: float
    b: float
    a_pos: float
    a_neg: float
    A: float = None
    H: float = None
    mode: str = None
    empirical: dict = None


def _partial_coefficient_sum(scheme, n):
    j = np.arange(0, n + 1)
    return math.fsum(np.asarray(scheme.values(j), dtype=float))


def empirical_ratio(scheme, spec, n):
    """``(1/d_n) sum_{j=0}^{n} c_j``."""
    return _partial_coefficient_sum(scheme, n) / spec.d_n(n)


def coefficient_limits(scheme, spec, n_probe=0):
    """Theoretical limits of the normalized coefficient sums for a power family.

    ``a``/``a_pos``/``a_neg`` are the limits of ``(1/d_n) sum_{j=0}^n`` of the
    coefficients, their positive and their negative parts; ``b = 0`` since every
    family here is one-sided; ``A = sum_j c_j`` when that series converges.
    With ``n_probe > 0`` the finite-``n`` ratios and the diagnostic
    ``max_{m <= n_probe} |c_m| m / d_m`` are attached as ``empirical``.
    """
    if spec.gamma <= 1.0 / spec.alpha:
        raise DomainError("gamma must exceed 1/alpha")
    g = spec.gamma
    lfsm = spec.mode == "lfsm"
    if isinstance(scheme, OneSidedPower):
        a_pos = 1.0 / (1.0 - g) if lfsm else zeta_series(g)
        a_neg = 0.0
        a = a_pos
    elif isinstance(scheme, AlternatingPower):
        k1, k2 = scheme.k1, scheme.k2
        if lfsm:
            a_pos = k1 / (2.0 * (1.0 - g))
            a_neg = k2 / (2.0 * (1.0 - g))
            a = a_pos - a_neg
        else:
            even, odd = zeta_even_odd(g)
            a_pos, a_neg = k1 * even, k2 * odd
            if k1 == k2:
                # sum the alternating series directly instead of cancelling two zetas
                a = k1 * zeta_series(g, signed=True)
            else:
                a = a_pos - a_neg
    else:
        raise DomainError("closed-form limits exist only for the power families")
    A = None if lfsm else a
    out = CoefficientLimits(a=a, b=0.0, a_pos=a_pos, a_neg=a_neg, A=A, H=spec.H, mode=spec.mode)
    if n_probe > 0:
        pos, neg = decompose(scheme)
        m = np.arange(1, n_probe + 1)
        dm = m.astype(float) ** (spec.H - 1.0 / spec.alpha) if lfsm else np.ones(len(m))
        diag = float(np.max(np.abs(scheme.values(m)) * m / dm))
        out.empirical = {
            "n": n_probe,
            "a": empirical_ratio(scheme, spec, n_probe),
            "a_pos": empirical_ratio(pos, spec, n_probe),
            "a_neg": empirical_ratio(neg, spec, n_probe),
            "decay_ratio": diag,
        }
    return out


def total_sum(scheme):
    """``A = sum_j c_j`` for finitely supported schemes."""
    if isinstance(scheme, DifferencePair):
        return 0.0
    if isinstance(scheme, FiniteList):
        return math.fsum(c for _, c in scheme.items)
    raise DomainError("use coefficient_limits for the power families")


def summability_partial(scheme, delta, J):
    """``sum_{j<=J} |c_j|^delta`` over ``j = -J .. J``."""
    j = np.arange(-J, J + 1)
    return math.fsum(np.abs(np.asarray(scheme.values(j), dtype=float)) ** delta)
