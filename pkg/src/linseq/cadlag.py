"""Step-function cadlag paths on [0, 1] and the oscillation / upcrossing toolkit.

A :class:`StepPath` takes ``values[k]`` on ``[breakpoints[k], breakpoints[k+1])``
and its last value up to and including ``t = 1``. Because a right-continuous
step function only ever takes its piece values, every supremum over time points
used below reduces to a search over piece indices.
"""
import io
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateRangeError, DomainError, PreconditionNotMet


@dataclass(frozen=True, eq=False)
class StepPath:
    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.array(self.breakpoints, dtype=float).reshape(-1)
        v = np.array(self.values, dtype=float).reshape(-1)
        if t.size == 0 or t.size != v.size:
            raise DomainError("need one value per breakpoint and at least one breakpoint")
        if t[0] != 0.0:
            raise DomainError("first breakpoint must be 0")
        if t[-1] > 1.0 or np.any(np.diff(t) <= 0):
            raise DomainError("breakpoints must be strictly increasing within [0, 1]")
        t.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "breakpoints", t)
        object.__setattr__(self, "values", v)

    @classmethod
    def constant(cls, c=0.0):
        return cls([0.0], [c])

    def __len__(self):
        return self.values.size

    def __eq__(self, other):
        if not isinstance(other, StepPath):
            return NotImplemented
        return (np.array_equal(self.breakpoints, other.breakpoints)
                and np.array_equal(self.values, other.values))

    def __hash__(self):
        return hash((self.breakpoints.tobytes(), self.values.tobytes()))

    def piece(self, t):
        """Index of the piece containing time ``t``."""
        return int(np.searchsorted(self.breakpoints, t, side="right")) - 1

    def __call__(self, t):
        return eval_path(self, t)


def eval_path(x, t):
    """Value of ``x`` at ``t`` (right-continuous; the last value holds at ``t = 1``)."""
    t_arr = np.asarray(t, dtype=float)
    if np.any((t_arr < 0.0) | (t_arr > 1.0)):
        raise DomainError("t must lie in [0, 1]")
    idx = np.searchsorted(x.breakpoints, t_arr, side="right") - 1
    out = x.values[idx]
    return float(out) if out.ndim == 0 else out


def sup_norm(x):
    return float(np.max(np.abs(x.values)))


def h_dist(a, b, c):
    """Distance from ``b`` to the closed interval with endpoints ``a`` and ``c``."""
    lo, hi = min(a, c), max(a, c)
    return max(lo - min(lo, b), max(hi, b) - hi)


def _h_arr(a, b, c):
    lo, hi = np.minimum(a, c), np.maximum(a, c)
    return np.maximum(lo - np.minimum(lo, b), np.maximum(hi, b) - hi)


# --------------------------------------------------------------------------
# oscillation function w(x, delta)

def _sparse_tables(v):
    m = v.size
    K = max(1, int(m).bit_length())
    mins = np.empty((K, m))
    maxs = np.empty((K, m))
    mins[0] = maxs[0] = v
    for k in range(1, K):
        w = 1 << (k - 1)
        mins[k] = mins[k - 1]
        maxs[k] = maxs[k - 1]
        mins[k, : m - w] = np.minimum(mins[k - 1, : m - w], mins[k - 1, w:])
        maxs[k, : m - w] = np.maximum(maxs[k - 1, : m - w], maxs[k - 1, w:])
    return mins, maxs


def _range_query(tables, lo, hi):
    mins, maxs = tables
    k = np.floor(np.log2(hi - lo + 1)).astype(int)
    r = hi - (1 << k) + 1
    return np.minimum(mins[k, lo], mins[k, r]), np.maximum(maxs[k, lo], maxs[k, r])


def oscillation(x, delta):
    """``w(x, delta)``: sup of ``H(x(t1), x(t2), x(t3))`` over
    ``t2 - delta <= t1 < t2 < t3 <= t2 + delta`` in [0, 1].

    Exact for step paths. With ``t1`` in piece ``j``, ``t2`` in piece ``i`` and
    ``t3`` in piece ``l`` (``j < i < l``), the triple is admissible iff some
    ``t2`` in piece ``i`` has ``t2 - delta < tau_{j+1}`` and ``tau_l <= t2 + delta``.
    The reachable right block only grows with ``t2`` while the left block only
    shrinks, so it suffices to try ``t2 = tau_i`` and ``t2 = tau_l - delta``.
    """
    if not delta > 0:
        raise DomainError("delta must be positive")
    tau, v = x.breakpoints, x.values
    m = v.size
    if m < 3:
        return 0.0
    mid = np.arange(1, m - 1)
    # candidates t2 = tau_i
    cand_i = [mid]
    cand_t = [tau[mid]]
    cand_l = [np.searchsorted(tau, tau[mid] + delta, side="right") - 1]
    # candidates t2 = tau_l - delta strictly inside piece i
    l_all = np.arange(2, m)
    t2 = tau[l_all] - delta
    i_of = np.searchsorted(tau, t2, side="right") - 1
    ok = (i_of >= 1) & (i_of < l_all) & (t2 > tau[np.clip(i_of, 0, m - 1)])
    cand_i.append(i_of[ok])
    cand_t.append(t2[ok])
    cand_l.append(l_all[ok])
    ii = np.concatenate(cand_i)
    tt = np.concatenate(cand_t)
    ll = np.minimum(np.concatenate(cand_l), m - 1)
    jmin = np.maximum(np.searchsorted(tau, tt - delta, side="right") - 1, 0)
    keep = (jmin <= ii - 1) & (ll >= ii + 1)
    if not np.any(keep):
        return 0.0
    ii, ll, jmin = ii[keep], ll[keep], jmin[keep]
    tables = _sparse_tables(v)
    lmin, lmax = _range_query(tables, jmin, ii - 1)
    rmin, rmax = _range_query(tables, ii + 1, ll)
    vi = v[ii]
    above = vi - np.maximum(lmin, rmin)
    below = np.minimum(lmax, rmax) - vi
    return float(max(0.0, np.max(above), np.max(below)))


# --------------------------------------------------------------------------
# counting

def _window_values(x, s, t):
    if not (0.0 <= s < t <= 1.0):
        raise DomainError("need 0 <= s < t <= 1")
    i0 = x.piece(s)
    i1 = x.piece(t)
    return x.values[i0 : i1 + 1].tolist()


def _count_eta(vals, eta):
    # Greedy by earliest completion: a pair closes at the first index whose
    # value differs by more than eta from some value seen since the previous
    # close; the next pair may start at that same index.
    n = 0
    lo = hi = vals[0]
    for v in vals[1:]:
        if v - lo > eta or hi - v > eta:
            n += 1
            lo = hi = v
        else:
            if v < lo:
                lo = v
            elif v > hi:
                hi = v
    return n


def count_oscillations(x, eta, s=0.0, t=1.0):
    """Number ``N_eta(x; [s, t])`` of eta-oscillations of ``x`` inside ``[s, t]``.

    Comparisons are strict (a move of exactly ``eta`` does not count).
    """
    if not eta > 0:
        raise DomainError("eta must be positive")
    return _count_eta(_window_values(x, s, t), eta)


def _count_up(vals, a, b):
    n = 0
    armed = False
    for v in vals:
        if not armed:
            if v < a:
                armed = True
        elif v > b:
            n += 1
            armed = False
    return n


def count_upcrossings(x, a, b, s=0.0, t=1.0):
    """Number ``N^{a,b}(x)`` of upcrossings: alternations from strictly below ``a`` to strictly above ``b``."""
    if not a < b:
        raise DomainError("need a < b")
    return _count_up(_window_values(x, s, t), a, b)


def local_beta(x, s=0.0, t=1.0):
    """``sup_{s <= u < v < w <= t} H(x(u), x(v), x(w))``."""
    vals = np.asarray(_window_values(x, s, t))
    if vals.size < 3:
        return 0.0
    pmin = np.minimum.accumulate(vals)[:-2]
    pmax = np.maximum.accumulate(vals)[:-2]
    smin = np.minimum.accumulate(vals[::-1])[::-1][2:]
    smax = np.maximum.accumulate(vals[::-1])[::-1][2:]
    mid = vals[1:-1]
    return float(max(0.0, np.max(mid - np.maximum(pmin, smin)), np.max(np.minimum(pmax, smax) - mid)))


# --------------------------------------------------------------------------
# appendix inequalities

def lemma_a1_gap(x, s, u, v, t):
    """RHS minus LHS of ``|x(u)-x(v)| <= 2|x(s)-x(t)| + H(x(s),x(u),x(t)) + H(x(s),x(v),x(t))``.

    Never negative for a genuine cadlag path.
    """
    if not (0.0 <= s <= u < v <= t <= 1.0):
        raise DomainError("need 0 <= s <= u < v <= t <= 1")
    xs, xu, xv, xt = eval_path(x, np.array([s, u, v, t])).tolist()
    rhs = 2.0 * abs(xs - xt) + h_dist(xs, xu, xt) + h_dist(xs, xv, xt)
    return rhs - abs(xu - xv)


@dataclass
class LemmaA2Record:
    count: int
    bound: float
    beta_local: float

    @property
    def holds(self):
        return self.count <= self.bound


def lemma_a2_bound(x, eta, s=0.0, t=1.0):
    """Oscillation count on ``[s, t]`` together with its a-priori bound
    ``(2|x(t) - x(s)| + beta) / (eta - beta)``.

    Raises :class:`PreconditionNotMet` unless ``eta > 2 beta``.
    """
    if not eta > 0:
        raise DomainError("eta must be positive")
    beta = local_beta(x, s, t)
    if not eta > 2.0 * beta:
        raise PreconditionNotMet(f"eta = {eta} does not exceed 2*beta = {2.0 * beta}")
    xs, xt = eval_path(x, np.array([s, t])).tolist()
    bound = (2.0 * abs(xt - xs) + beta) / (eta - beta)
    return LemmaA2Record(count=count_oscillations(x, eta, s, t), bound=bound, beta_local=beta)


# --------------------------------------------------------------------------
# maps on paths

def plot_affine(x, a, b):
    """``(x - a) / (b - a)`` pointwise."""
    if not a < b:
        raise DomainError("need a < b")
    return StepPath(x.breakpoints, (x.values - a) / (b - a))


def plot_auto(x):
    """Automatic shift-and-scale onto [0, 1]. Not S-continuous; kept for comparison."""
    lo, hi = float(np.min(x.values)), float(np.max(x.values))
    if not hi > lo:
        raise DegenerateRangeError("constant path has no range to rescale")
    return StepPath(x.breakpoints, (x.values - lo) / (hi - lo))


def sum_paths(x, y):
    t = np.union1d(x.breakpoints, y.breakpoints)
    return StepPath(t, eval_path(x, t) + eval_path(y, t))


def scale_path(x, c):
    return StepPath(x.breakpoints, c * x.values)


# --------------------------------------------------------------------------
# compactness diagnostics

@dataclass
class CompactnessReport:
    sup_norm_max: float
    osc_counts: dict = field(default_factory=dict)
    upcross_counts: dict = field(default_factory=dict)


def compactness_report(family, etas=(), bands=()):
    """Family-wise maxima of ``||x||``, ``N_eta(x)`` and ``N^{a,b}(x)``.

    Only the finite family given is inspected; nothing is extrapolated.
    """
    family = list(family)
    if not family:
        raise DomainError("empty family")
    rep = CompactnessReport(sup_norm_max=max(sup_norm(x) for x in family))
    for eta in etas:
        rep.osc_counts[eta] = max(count_oscillations(x, eta) for x in family)
    for a, b in bands:
        rep.upcross_counts[(a, b)] = max(count_upcrossings(x, a, b) for x in family)
    return rep


def pulse(n):
    """``x_n = 1`` on ``[1/2 - 1/n, 1/2 + 1/n)`` and 0 elsewhere (needs ``n > 2``)."""
    if n <= 2:
        raise DomainError("pulse needs n > 2")
    return StepPath([0.0, 0.5 - 1.0 / n, 0.5 + 1.0 / n], [0.0, 1.0, 0.0])


def staircase(values, breakpoints=None):
    values = list(values)
    if breakpoints is None:
        breakpoints = np.arange(len(values)) / len(values)
    return StepPath(breakpoints, values)


# --------------------------------------------------------------------------
# CSV

def _fmt(v):
    if v == 0.0:
        return "0"
    return format(float(v), ".17g")


def to_csv_text(x):
    lines = ["t,value"]
    lines += [f"{_fmt(t)},{_fmt(v)}" for t, v in zip(x.breakpoints.tolist(), x.values.tolist())]
    return "\n".join(lines) + "\n"


def from_csv_text(text):
    rows = [ln.strip() for ln in io.StringIO(text) if ln.strip()]
    if not rows or rows[0].replace(" ", "") != "t,value":
        raise DomainError("expected CSV header 't,value'")
    t, v = [], []
    for ln in rows[1:]:
        a, b = ln.split(",")
        t.append(float(a))
        v.append(float(b))
    return StepPath(t, v)
