"""Self-check suites behind ``linseq verify``."""
import itertools
import math
import time
from dataclasses import dataclass

import numpy as np

from . import cadlag
from .cadlag import StepPath
from .coeffs import (AlternatingPower, DifferencePair, OneSidedPower, ScalingSpec,
                     coefficient_limits, draw_window, partial_sums, zeta_series)
from .errors import PreconditionNotMet
from .innovations import InnovationModel, norm_constant_a, norm_constant_a_lambertw, stable_sigma
from .limits import LimitSpec, c_H, levy_path, lfsm_path

SUITES = ("constants", "lemmas", "distributions")


@dataclass
class Check:
    name: str
    observed: object
    expected: object
    tolerance: object
    passed: bool

    def line(self):
        mark = "PASS" if self.passed else "FAIL"
        return (f"[{mark}] {self.name}: observed={self.observed!r} "
                f"expected={self.expected!r} tol={self.tolerance!r}")


def _close(name, observed, expected, tol):
    return Check(name, observed, expected, tol, abs(observed - expected) <= tol)


def constants_suite():
    m2, m15 = InnovationModel(2.0), InnovationModel(1.5)
    alt = AlternatingPower(3.0, 1.0, 0.75)
    checks = [
        _close("a_1000(alpha=2)", norm_constant_a(m2, 1000), 95.4883, 5e-5),
        _close("a_1000(alpha=2) vs Lambert W", norm_constant_a(m2, 1000),
               norm_constant_a_lambertw(1000), 1e-9),
        Check("a_1000(alpha=1.5)", norm_constant_a(m15, 1000), 100.0, 0.0,
              norm_constant_a(m15, 1000) == 100.0),
        _close("zeta(4)", zeta_series(4.0), math.pi ** 4 / 90.0, 1e-10),
        _close("sum (-1)^j j^-4", zeta_series(4.0, signed=True), -7.0 * math.pi ** 4 / 720.0, 1e-10),
        _close("H(alpha=1.5, gamma=0.75)", ScalingSpec(1.5, 0.75).H, 11.0 / 12.0, 1e-15),
        _close("a, one-sided gamma=0.75", coefficient_limits(OneSidedPower(0.75), ScalingSpec(1.5, 0.75)).a,
               4.0, 1e-12),
        _close("a, alternating k1=3 k2=1 gamma=0.75", coefficient_limits(alt, ScalingSpec(1.5, 0.75)).a,
               4.0, 1e-12),
        Check("C_0.5", c_H(0.5), 1.0, 0.0, c_H(0.5) == 1.0),
        _close("4/C_0.75", 4.0 / c_H(0.75), 4.28, 0.02),
        _close("sigma(alpha=1.5)", stable_sigma(1.5), (2.0 * math.pi) ** (1.0 / 3.0), 1e-12),
    ]
    return checks


def random_step_path(gen, max_breaks=40, lo=-5.0, hi=5.0):
    m = int(gen.integers(1, max_breaks + 1))
    t = np.unique(np.concatenate([[0.0], gen.random(m - 1)]))
    kind = gen.integers(0, 3)
    if kind == 0:
        v = gen.uniform(lo, hi, t.size)
    elif kind == 1:
        v = gen.integers(int(lo), int(hi) + 1, t.size).astype(float)
    else:
        # drifting walk with small reversals: small beta, many oscillations
        step = gen.uniform(0.0, 1.0, t.size) - gen.uniform(0.0, 0.15, t.size)
        v = np.clip(np.cumsum(step) * gen.choice([-1.0, 1.0]) , lo, hi)
    return StepPath(t, v)


def _random_times(gen, k):
    return np.sort(gen.random(k)).tolist()


def lemma_a1_trials(count, seed=1):
    gen = np.random.default_rng(seed)
    worst = math.inf
    violations = 0
    for _ in range(count):
        x = random_step_path(gen)
        s, u, v, t = _random_times(gen, 4)
        if gen.random() < 0.3:
            s, t = 0.0, 1.0
        if not u < v:
            continue
        gap = cadlag.lemma_a1_gap(x, s, u, v, t)
        worst = min(worst, gap)
        violations += gap < 0
    return violations, worst


def lemma_a2_trials(count, seed=2):
    gen = np.random.default_rng(seed)
    violations = 0
    nontrivial = 0
    for _ in range(count):
        x = random_step_path(gen)
        if gen.random() < 0.5:
            s, t = 0.0, 1.0
        else:
            s, t = _random_times(gen, 2)
            if not s < t:
                continue
        beta = cadlag.local_beta(x, s, t)
        eta = 2.0 * beta + gen.exponential(1.0) + 1e-9
        try:
            rec = cadlag.lemma_a2_bound(x, eta, s, t)
        except PreconditionNotMet:
            continue
        nontrivial += rec.count > 0
        violations += not rec.holds
    return violations, nontrivial


def sum_inequality_trials(count, etas=(0.1, 0.5, 1.0), seed=3):
    gen = np.random.default_rng(seed)
    violations = 0
    for _ in range(count):
        x = random_step_path(gen)
        y = random_step_path(gen)
        z = cadlag.sum_paths(x, y)
        if cadlag.sup_norm(z) > cadlag.sup_norm(x) + cadlag.sup_norm(y):
            violations += 1
        for eta in etas:
            if cadlag.count_oscillations(z, eta) > (cadlag.count_oscillations(x, eta / 2)
                                                   + cadlag.count_oscillations(y, eta / 2)):
                violations += 1
    return violations


def brute_count(vals, ok):
    """Largest N with indices ``i1 < i2 <= i3 < i4 <= ...`` and ``ok(v[i_{2k-1}], v[i_{2k}])``."""
    m = len(vals)
    best = [0] * (m + 1)  # best[s]: max pairs using indices >= s
    for s in range(m - 1, -1, -1):
        b = best[s + 1]
        for i in range(s, m):
            for j in range(i + 1, m):
                if ok(vals[i], vals[j]):
                    b = max(b, 1 + best[j])
        best[s] = b
    return best[0]


def counting_equivalence(max_breaks=8, alphabet=(-1.0, 0.0, 1.0, 2.0),
                         etas=(0.5, 1.5, 2.5), bands=((-0.5, 0.5), (0.5, 1.5))):
    mismatches = 0
    ineq = 0
    cases = 0
    for m in range(1, max_breaks + 1):
        for vals in itertools.product(alphabet, repeat=m):
            cases += 1
            for eta in etas:
                if cadlag._count_eta(list(vals), eta) != brute_count(
                        vals, lambda p, q: abs(q - p) > eta):
                    mismatches += 1
            for a, b in bands:
                up = cadlag._count_up(list(vals), a, b)
                if up != brute_count(vals, lambda p, q: p < a and q > b):
                    mismatches += 1
                if up > cadlag._count_eta(list(vals), b - a):
                    ineq += 1
    return cases, mismatches, ineq


def lemmas_suite(n_lemma=100_000, n_sum=10_000, max_breaks=8):
    checks = []
    v1, worst = lemma_a1_trials(n_lemma)
    checks.append(Check(f"Lemma A.1 gap >= 0 ({n_lemma} trials)", v1, 0, 0, v1 == 0))
    v2, nontriv = lemma_a2_trials(n_lemma)
    checks.append(Check(f"Lemma A.2 count <= bound ({n_lemma} trials, {nontriv} with count > 0)",
                        v2, 0, 0, v2 == 0))
    vs = sum_inequality_trials(n_sum)
    checks.append(Check(f"sum inequalities ({n_sum} pairs)", vs, 0, 0, vs == 0))
    cases, mism, ineq = counting_equivalence(max_breaks)
    checks.append(Check(f"scan == exhaustive counting ({cases} paths)", mism, 0, 0, mism == 0))
    checks.append(Check("N^{a,b} <= N_{b-a}", ineq, 0, 0, ineq == 0))
    return checks


def distributions_suite(seeds=(0, 1, 2), replicates=500):
    checks = []
    model = InnovationModel(1.5)
    n, N = 1000, 50
    bad = 0
    for seed in seeds:
        xi = draw_window(model, n, N, seed, 0)
        S = partial_sums(DifferencePair(), xi, n, N)
        # xi_k sits at offset k - 1 + N, xi_0 at offset N - 1
        expected = xi[N : N + n] - xi[N - 1]
        bad += int(np.count_nonzero(S != expected))
    checks.append(Check("telescoping S_k == xi_k - xi_0 (exact)", bad, 0, 0, bad == 0))

    a_n = norm_constant_a(model, n)
    sups, ends = [], []
    for r in range(replicates):
        xi = draw_window(model, n, N, 7, r)
        S = partial_sums(DifferencePair(), xi, n, N) / a_n
        sups.append(np.max(np.abs(S)))
        ends.append(S[-1])
    sd = float(np.std(sups, ddof=1))
    checks.append(Check("sup|S_n(t)|/a_n has spread", sd, "> 0", None, sd > 0))
    mean, se = float(np.mean(ends)), float(np.std(ends, ddof=1) / math.sqrt(replicates))
    checks.append(Check("S_n(1)/a_n centred", mean, 0.0, 3 * se, abs(mean) < 3 * se))

    worst = 0.0
    for a, b in ((1.0, 0.0), (2.0, 1.0), (0.0, 1.0)):
        spec = LimitSpec(1.5, 1.0 / 1.5, a, b)
        z = levy_path(model, n, 11, 4)
        lam = lfsm_path(spec, model, n, seed=11, stream=4)
        ref = (a - b) * z.values
        scale = max(np.max(np.abs(ref)), 1e-300)
        worst = max(worst, float(np.max(np.abs(lam.values - ref)) / scale))
    checks.append(Check("H = 1/alpha: lfsm == (a-b) levy", worst, 0.0, 1e-12, worst <= 1e-12))
    return checks


def run(suite="all"):
    names = SUITES if suite == "all" else (suite,)
    table = {"constants": constants_suite, "lemmas": lemmas_suite,
             "distributions": distributions_suite}
    results = []
    for name in names:
        t0 = time.perf_counter()
        checks = table[name]()
        results.append((name, checks, time.perf_counter() - t0))
    return results
