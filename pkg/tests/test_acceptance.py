"""Acceptance criteria, each run at its stated scale, tolerance and time limit.

Every test records one PASS/FAIL line; the lines are printed together in
the "acceptance criteria" section at the end of the pytest run.
"""

import csv
import subprocess
import sys
import time

import numpy as np
import pytest

from commonfix import (AlphaOracle, CompactlyPositiveGap, Gauge, MetricSpace, SolverConfig,
                       alpha_from_compact_gap, alpha_from_gauge, cauchy_bound,
                       check_alpha_duality, check_weakly_contractive, find_common_endpoint,
                       hausdorff, iterate_duality, load_problem, m_functional)
from commonfix.oracle import enumerate_endpoints, enumerate_fixed_points, generate_certified_instance
from conftest import PROBLEMS, random_integer_metric

GAMMAS = (0.0, 0.1, 0.25, 0.5, 0.75, 0.9)


@pytest.fixture(scope="module")
def instances():
    """400 constructive instances (n = 1..12) and 120 rejection instances (n = 1..3)."""
    start = time.perf_counter()
    out = [generate_certified_instance(seed, 1 + seed % 12, "constructive") for seed in range(400)]
    out += [generate_certified_instance(10_000 + seed, 1 + seed % 3, "rejection")
            for seed in range(120)]
    return out, time.perf_counter() - start


# ---- 1 --------------------------------------------------------------------

def _random_matrix_space(rng):
    """Integer or dyadic shortest-path metric; both keep every sum exact in floating point."""
    n = int(rng.integers(1, 31))
    D = random_integer_metric(rng, n, wmax=int(rng.choice([20, 4096])))
    if rng.random() < 0.5:
        D = D / 1024
    return MetricSpace.from_matrix(D)


def _random_set(rng, n):
    k = int(rng.integers(1, min(20, n) + 1))
    return [int(v) for v in rng.choice(n, size=k, replace=False)]


def _related_set(rng, n, A):
    """A copy of ``A``, a one-point perturbation of it, or an unrelated set."""
    u = rng.random()
    if u < 0.2:
        return list(A)
    if u < 0.4 and len(A) < n:
        extra = int(rng.choice(np.setdiff1d(np.arange(n), A)))
        return list(A) + [extra]
    return _random_set(rng, n)


def test_criterion_1_hausdorff_axioms(acceptance):
    rng = np.random.default_rng(20240001)
    start = time.perf_counter()
    sets = bad_sym = bad_id = bad_tri = 0
    for _ in range(120):
        space = _random_matrix_space(rng)
        n = space.n
        for _ in range(30):
            A = _random_set(rng, n)
            B = _related_set(rng, n, A)
            C = _random_set(rng, n)
            sets += 3
            ab, ba = hausdorff(space, A, B), hausdorff(space, B, A)
            bad_sym += ab != ba
            bad_id += (ab == 0) != (set(A) == set(B)) or hausdorff(space, A, A) != 0
            bad_tri += hausdorff(space, A, C) > ab + hausdorff(space, B, C)
    grid_sets = grid_bad = 0
    for _ in range(400):
        count = int(rng.integers(1, 31))
        grid = MetricSpace.grid(float(rng.uniform(-5, 5)), float(rng.uniform(1e-3, 2)), count)
        A, B, C = (_random_set(rng, count) for _ in range(3))
        grid_sets += 3
        ab, bc, ac = hausdorff(grid, A, B), hausdorff(grid, B, C), hausdorff(grid, A, C)
        grid_bad += (ab != hausdorff(grid, B, A)) + ((ab == 0) != (set(A) == set(B)))
        grid_bad += ac > (ab + bc) * (1 + 1e-12)
    elapsed = time.perf_counter() - start
    failures = bad_sym + bad_id + bad_tri + grid_bad
    ok = sets >= 10_000 and failures == 0 and elapsed < 10
    acceptance(1, "Hausdorff metric axioms", ok,
               f"{sets} matrix-mode sets (exact) + {grid_sets} grid sets (rtol 1e-12), "
               f"{failures} violations, {elapsed:.2f} s")
    assert ok


# ---- 2 --------------------------------------------------------------------

def test_criterion_2_fixed_point_and_endpoint_identities(acceptance, instances):
    insts, gen_time = instances
    start = time.perf_counter()
    generated = [i for i in insts if i.ok]
    failed = len(insts) - len(generated)
    bad = 0
    for inst in generated:
        sp, S, T = inst.space, inst.S, inst.T
        fix_s, fix_t = enumerate_fixed_points(sp, S), enumerate_fixed_points(sp, T)
        end_s, end_t = enumerate_endpoints(sp, S), enumerate_endpoints(sp, T)
        bad += not (fix_s == fix_t and end_s == end_t and len(end_s) <= 1
                    and set(end_s) <= set(fix_s))
    elapsed = gen_time + time.perf_counter() - start
    families = {f: sum(i.family == f for i in generated) for f in ("constructive", "rejection")}
    ok = len(generated) >= 500 and all(families.values()) and bad == 0 and elapsed < 30
    acceptance(2, "Fix(S)=Fix(T), End(S)=End(T), |End|<=1, End in Fix", ok,
               f"{len(generated)} instances ({families['constructive']} constructive, "
               f"{families['rejection']} rejection, {failed} generation failures), "
               f"{bad} counterexamples, {elapsed:.2f} s")
    assert ok


# ---- 3 --------------------------------------------------------------------

def test_criterion_3_iteration_converges(acceptance, instances):
    insts, _ = instances
    runs = failures = 0
    worst_alpha = 0.0
    for inst in (i for i in insts if i.ok):
        sp = inst.space
        fix = set(enumerate_fixed_points(sp, inst.S))
        alpha = AlphaOracle.constant(inst.alpha)
        cfg = SolverConfig(max_iterations=10 * sp.n)
        for x0 in sp.points():
            runs += 1
            trace = iterate_duality(sp, inst.S, inst.T, alpha, x0, cfg)
            gamma = max(trace.alphas, default=0.0)
            worst_alpha = max(worst_alpha, gamma)
            failures += not (trace.converged and trace.final_point in fix
                             and trace.strictly_decreasing() and gamma < 1)
    ok = runs > 0 and failures == 0
    acceptance(3, "alternating iteration reaches a common fixed point", ok,
               f"{runs} runs (every start point, max_iterations = 10 n), {failures} failures, "
               f"max recorded alpha {worst_alpha:.4g}")
    assert ok


# ---- 4 --------------------------------------------------------------------

def _recurrence_sequences(rng, gamma, count, length):
    """Gap sequences with d_0 <= 1 and d_k drawn uniformly in [0, gamma d_{k-1} + 2^-k].

    Row 0 is the extremal sequence that always takes the upper end.
    """
    d = np.empty((count, length))
    d[:, 0] = rng.uniform(0, 1, size=count)
    d[0, 0] = 1.0
    for k in range(1, length):
        cap = gamma * d[:, k - 1] + 0.5 ** k
        d[:, k] = rng.uniform(0, 1, size=count) * cap
        d[0, k] = cap[0]
    return d


def test_criterion_4_bound_domination(acceptance):
    rng = np.random.default_rng(20240004)
    start = time.perf_counter()
    ns, ms = range(1, 11), range(1, 51)
    violations = 0
    maxima = []
    for gamma in GAMMAS:
        d = _recurrence_sequences(rng, gamma, 1001, 10 + 50 + 1)
        prefix = np.concatenate([np.zeros((d.shape[0], 1)), np.cumsum(d, axis=1)], axis=1)
        worst_ratio = 0.0
        for n in ns:
            for m in ms:
                sums = prefix[:, n + m] - prefix[:, n]
                bound = cauchy_bound(gamma, n, m)
                violations += int(np.count_nonzero(sums > bound))
                worst_ratio = max(worst_ratio, float(sums.max() / bound))
        maxima.append(f"{gamma:g}:{worst_ratio:.3f}")
    elapsed = time.perf_counter() - start
    pinned = cauchy_bound(0.75, 1) == 18.0
    ok = violations == 0 and pinned and elapsed < 10
    acceptance(4, "gap sums stay below the a-priori bound", ok,
               f"1001 sequences per gamma, n<=10, m<=50, {violations} violations, "
               f"bound(0.75, 1) = {cauchy_bound(0.75, 1):g}, "
               f"max sum/bound per gamma {' '.join(maxima)}, {elapsed:.2f} s")
    assert ok


# ---- 5 --------------------------------------------------------------------

def test_criterion_5_common_endpoints(acceptance, instances):
    insts, _ = instances
    with_end = failures = 0
    for inst in (i for i in insts if i.ok):
        sp, S, T = inst.space, inst.S, inst.T
        zero = [x for x in sp.points() if tuple(S(x)) == (x,) and tuple(T(x)) == (x,)]
        res = find_common_endpoint(sp, S, T, inst.spec)
        if zero:
            with_end += 1
            failures += not (len(zero) == 1 and res.endpoint == zero[0] and res.unique)
        else:
            failures += res.found
    shift = load_problem(PROBLEMS / "shift.prob")
    res = find_common_endpoint(shift.space, shift.S, shift.T, shift.spec())
    shift_ok = not res.found and res.final_gap == 1.0
    ok = with_end > 0 and failures == 0 and shift_ok
    acceptance(5, "common endpoint located and unique", ok,
               f"{with_end} instances with a zero-gap point, {failures} failures; "
               f"shift fixture: {'no endpoint' if not res.found else 'endpoint?'}, "
               f"inf gap {res.final_gap:g}")
    assert ok


# ---- 6 --------------------------------------------------------------------

def test_criterion_6_adapter_consistency(acceptance, instances):
    insts, _ = instances
    alpha_bad = implication_bad = weak_passes = maps_checked = gauge_bad = 0
    for inst in (i for i in insts if i.ok):
        sp = inst.space
        gap = CompactlyPositiveGap.linear(sp, 0.5)
        alpha = alpha_from_compact_gap(gap, sp)
        alpha_bad += any(alpha(x, y) != (0.0 if x == y else 0.5)
                         for x in sp.points() for y in sp.points())
        for T in (inst.S, inst.T):
            maps_checked += 1
            if check_weakly_contractive(sp, T, gap).passed:
                weak_passes += 1
                implication_bad += not check_alpha_duality(sp, T, T, alpha).passed
        from_gauge = alpha_from_gauge(Gauge.linear(0.5), inst.S, inst.T, sp)
        gauge_bad += any(from_gauge(x, y) != 0.5 for x in sp.points() for y in sp.points()
                         if m_functional(sp, inst.S, inst.T, x, y) > 0)
    ok = alpha_bad == 0 and implication_bad == 0 and gauge_bad == 0 and weak_passes > 0
    acceptance(6, "adapters agree with the certificates they replace", ok,
               f"gap d/2 -> alpha 1/2 mismatches {alpha_bad}; weak => alpha-duality on "
               f"{weak_passes}/{maps_checked} passing maps, {implication_bad} exceptions; "
               f"gauge t/2 -> alpha 1/2 mismatches {gauge_bad}")
    assert ok


# ---- 7 --------------------------------------------------------------------

CLI_CASES = [
    (["verify", "halving.prob"], 0),
    (["verify", "identity.prob"], 1),
    (["verify", "alpha_one.prob"], 2),
    (["verify", "shift.prob"], 1),
    (["verify", "pair.prob"], 0),
    (["verify", "pair_rational.prob"], 0),
    (["solve", "halving.prob", "--x0", "4"], 0),
    (["solve", "halving.prob", "--x0", "0"], 0),
    (["solve", "shift.prob", "--x0", "a"], 2),
    (["solve", "shift.prob", "--x0", "a", "--unchecked"], 3),
    (["solve", "grid_halving.prob", "--x0", "1"], 0),
    (["solve", "grid_halving.prob", "--x0", "1", "--mode", "slack", "--seed", "7"], 0),
    (["solve", "pair.prob", "--x0", "0"], 0),
    (["endpoint", "halving.prob"], 0),
    (["endpoint", "shift.prob"], 1),
    (["endpoint", "identity.prob"], 2),
    (["endpoint", "pair_rational.prob"], 0),
    (["bounds", "--gamma", "0.75", "--n", "1"], 0),
    (["bounds", "--gamma", "0.5", "--n", "2", "--m", "3"], 0),
    (["bounds", "--gamma", "1", "--n", "1"], 64),
    (["verify", "no_such_file.prob"], 65),
]


def _cli(args):
    argv = [str(PROBLEMS / a) if a.endswith(".prob") else a for a in args]
    return subprocess.run([sys.executable, "-m", "commonfix", *argv],
                          capture_output=True, text=True)


def test_criterion_7_cli_end_to_end(acceptance, tmp_path):
    wrong = [(" ".join(args), expected, proc.returncode)
             for args, expected in CLI_CASES
             for proc in [_cli(args)] if proc.returncode != expected]
    trace = tmp_path / "halving_trace.csv"
    proc = _cli(["solve", "halving.prob", "--x0", "4", "--trace", str(trace)])
    with open(trace, newline="") as fh:
        points = [row["point"] for row in csv.DictReader(fh)]
    bounds = _cli(["bounds", "--gamma", "0.75", "--n", "1"]).stdout.splitlines()[1].split()
    ok = not wrong and proc.returncode == 0 and points == ["4", "2", "1", "0"] \
        and float(bounds[-1]) == 18.0
    acceptance(7, "CLI end to end", ok,
               f"{len(CLI_CASES) - len(wrong)}/{len(CLI_CASES)} exit codes as documented"
               + (f" (wrong: {wrong})" if wrong else "")
               + f"; halving trace {','.join(points)}")
    assert ok
