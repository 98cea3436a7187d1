"""Acceptance criteria 1-9 at full sample counts.

Each test records one ``criterion N: PASS|FAIL`` line; the lines are repeated
in the pytest terminal summary.  Run alone with
``pytest -v tests/test_acceptance.py``.
"""

from __future__ import annotations

import os
import subprocess
import sys
import time

from drwitt import harness as H
from drwitt.conductor import asw_best_form, h1_crosscheck_detail, is_certified, swan
from drwitt.filtration import fil_level, fil_level_witt, fil_member_witt, goodness_decompose, r_section, r_section_witt
from drwitt.forms import from_witt, to_witt
from drwitt.laurent import TowerSpec
from drwitt.parser import evaluate
from drwitt.sampling import GridPoint, random_form, random_witt, restrict_level, rng_for
from drwitt.witt import teichmuller

from conftest import ring_elem

SEED = "acceptance"
GRID = H.default_grid()  # p in {3,5}, r in {1,2}, depth in {1,2}, m in {1,2,3}


def _run(laws, samples, grid=GRID):
    suite = H.LawSuite.named("all", seed=SEED, samples=samples, grid=grid, laws=laws)
    return H.run_suite(suite)


def _law_summary(report):
    bad = [e for e in report["laws"] if e["status"] == "fail"]
    checked = sum(e["checked"] for e in report["laws"])
    if bad:
        cex = bad[0]["counterexample"]
        return False, f"{bad[0]['id']} failed at {cex['config']}: {cex['inputs']}"
    return True, f"{len(report['laws'])} laws, {checked} checks"


def _line(n, title, ok, detail):
    return f"criterion {n} [{title}]: {'PASS' if ok else 'FAIL'} ({detail})"


def test_criterion_1_witt_oracle(record_criterion):
    laws = ["witt.tables-ghost", "witt.add-intertwine", "witt.mul-intertwine",
            "witt.neg-intertwine", "witt.roundtrip"]
    ok, worst, details = True, 0.0, []
    for pt in GRID:
        start = time.perf_counter()
        report = _run(laws, 1000, [pt])
        elapsed = time.perf_counter() - start
        worst = max(worst, elapsed)
        good, detail = _law_summary(report)
        if not good:
            ok = False
            details.append(detail)
    in_time = worst < 60.0
    detail = f"24 configs x 1000 pairs, slowest config {worst:.1f}s"
    if details:
        detail += "; " + details[0]
    record_criterion(_line(1, "Witt oracle equivalence", ok and in_time, detail))
    assert ok and in_time


def test_criterion_2_classical_m1(record_criterion):
    grid = [pt for pt in GRID if pt.m == 1]
    report = _run(["m1.add", "m1.wedge", "m1.d", "m1.leibniz", "m1.dd"], 1000, grid)
    ok, detail = _law_summary(report)
    record_criterion(_line(2, "m = 1 classical oracle", ok, f"{len(grid)} configs x 1000; {detail}"))
    assert ok


def test_criterion_3_identity_ledger(record_criterion):
    laws = ["id.FV", "id.FdV", "id.Vd", "id.projection", "id.R-commute", "id.F-teich", "id.dlog-add"]
    report = _run(laws, 500)
    ok, detail = _law_summary(report)
    record_criterion(_line(3, "identity ledger", ok, f"500 samples per law and config; {detail}"))
    assert ok


def _goodness_checks(pt, n, idx):
    """All goodness statements for one sample; returns a failure description or None."""
    tower, m, p = pt.tower(), pt.m, pt.p
    rng = rng_for(SEED, "goodness", pt.label(), n, idx)
    q = rng.randint(0, tower.depth)
    x = restrict_level(random_form(rng, tower, m, q), n)
    if fil_level(x.R()) > n // p:
        return f"R does not map fil_{n} into fil_{n // p}: {x}"
    y = restrict_level(random_form(rng, tower, m - 1, q), n // p)
    s = r_section(y)
    if s.R() != y or fil_level(s) > n:
        return f"section fails on {y}"
    yw = to_witt(restrict_level(from_witt(random_witt(rng, tower, m - 1)), n // p))
    sw = r_section_witt(yw)
    if sw.R() != yw or not fil_member_witt(sw, n):
        return f"Witt section fails on {yw}"
    k = x - r_section(x.R())
    if k.R():
        return f"kernel element not killed by R: {k}"
    a, b = goodness_decompose(k)
    rebuilt = a.Vn(m - 1)
    if q >= 1:
        rebuilt = rebuilt + b.Vn(m - 1).d()
    if rebuilt != k or fil_level(a) > n or fil_level(b) > n:
        return f"decomposition fails on {k}"
    return None


def test_criterion_4_goodness(record_criterion):
    failures, checks = [], 0
    for pt in GRID:
        if pt.m not in (2, 3):
            continue
        for n in range(0, 13):
            for idx in range(12):
                checks += 1
                err = _goodness_checks(pt, n, idx)
                if err:
                    failures.append(f"{pt.label()} n={n}: {err}")
    ok = not failures
    detail = f"n in [0, 12], m in {{2, 3}}, {checks} samples"
    if failures:
        detail += "; " + failures[0]
    record_criterion(_line(4, "filtration goodness", ok, detail))
    assert ok


def test_criterion_5_brylinski(record_criterion):
    report = _run(["fil.brylinski", "fil.member-witt"], 1000)
    ok, detail = _law_summary(report)
    record_criterion(_line(5, "Brylinski cross-check", ok, f"1000 Witt vectors per config; {detail}"))
    assert ok


def test_criterion_6_cartier(record_criterion):
    laws = ["cartier.CF-R", "cartier.C-dV", "cartier.sections", "cartier.fil-equivalence", "cartier.m1-inverse"]
    report = _run(laws, 1000)
    ok, detail = _law_summary(report)
    record_criterion(_line(6, "Cartier suite", ok, f"1000 samples per law and config; {detail}"))
    assert ok


def test_criterion_7_conductor_table(record_criterion):
    start = time.perf_counter()
    failures = []
    for p in (3, 5):
        tower = TowerSpec(p)
        for n in range(1, 13):
            sw_n = swan(evaluate(f"T(t^-{n})", tower, 1)).sw
            if n % p and sw_n != n:
                failures.append(f"p={p}: sw(t^-{n}) = {sw_n}")
            sw_pn = swan(evaluate(f"T(t^-{p * n})", tower, 1)).sw
            if sw_pn != sw_n:
                failures.append(f"p={p}: sw(t^-{p * n}) = {sw_pn} != {sw_n}")
        for m in (1, 2, 3):
            for i in range(m):
                for n in range(1, 13):
                    a = teichmuller(ring_elem(f"t^-{n}", p), m - i)
                    for _ in range(i):
                        a = a.V()
                    sw = swan(from_witt(a)).sw
                    if sw != max(0, fil_level_witt(asw_best_form(a))):
                        failures.append(f"p={p} m={m}: sw(V^{i}[t^-{n}]) = {sw}")
            pt = GridPoint(p, 1, 1, m)
            for idx in range(500):
                a = random_witt(rng_for(SEED, "table", pt.label(), idx), tower, m)
                res = h1_crosscheck_detail(a)
                if res.sw_forms != res.sw_coords:
                    failures.append(f"{pt.label()}: {a} gives {res.sw_forms} vs {res.sw_coords}")
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 120.0
    detail = f"tables n <= 12, 500 random vectors per (p, m), {elapsed:.1f}s"
    if failures:
        detail += "; " + failures[0]
    record_criterion(_line(7, "conductor table", ok, detail))
    assert ok


def test_criterion_8_refined_swan(record_criterion):
    failures = []
    report = _run(["sw.certificate", "sw.rsw-nonzero"], 500)
    good, detail = _law_summary(report)
    if not good:
        failures.append(detail)
    compared = 0
    for pt in GRID:
        if pt.depth != 1:
            continue
        tower = pt.tower()
        for idx in range(500):
            a = random_witt(rng_for(SEED, "rsw", pt.label(), idx), tower, pt.m)
            rep = swan(from_witt(a))
            if rep.sw == 0:
                continue
            if not is_certified(rep) or not rep.rsw:
                failures.append(f"{pt.label()}: uncertified or zero rsw for {a}")
                continue
            best = from_witt(asw_best_form(a))
            coord = best.d().Fn(pt.m - 1).scale(-1).drop_outer_at_least(-rep.rsw_modulus)
            compared += 1
            if coord != rep.rsw:
                failures.append(f"{pt.label()}: rsw {rep.rsw} != {coord}")
    t2 = TowerSpec(2, 1, 2)
    showcase = [("T(u*t^-2)", 2, "T(t^-2)*d(T(u))"), ("T(u*t^-3)*dlog(u)", 3, "T(u*t^-3)*dlog(t)*dlog(u)")]
    for src, sw, rsw in showcase:
        rep = swan(evaluate(src, t2, 1))
        if rep.sw != sw or rep.rsw != evaluate(rsw, t2, 1):
            failures.append(f"showcase {src}: sw {rep.sw}, rsw {rep.rsw}")
    ok = not failures
    text = f"certified reports over the grid, {compared} H^1 rsw comparisons, depth-2 showcase at p = 2"
    if failures:
        text += "; " + failures[0]
    record_criterion(_line(8, "refined Swan", ok, text))
    assert ok


def _verify_bytes(hash_seed):
    env = dict(os.environ, PYTHONHASHSEED=str(hash_seed))
    cmd = [sys.executable, "-m", "drwitt", "verify", "--suite", "goodness", "--seed", "7", "--samples", "200"]
    proc = subprocess.run(cmd, capture_output=True, env=env, check=False)
    return proc.returncode, proc.stdout


def test_criterion_9_determinism(record_criterion):
    code1, out1 = _verify_bytes(1)
    code2, out2 = _verify_bytes(2)
    suite = H.LawSuite.named("conductor", seed=3, samples=5)
    same_api = H.report_bytes(H.run_suite(suite)) == H.report_bytes(H.run_suite(suite))
    ok = code1 == code2 == 0 and out1 == out2 and bool(out1) and same_api
    detail = f"verify --suite goodness --seed 7 --samples 200 twice: {len(out1)} bytes, exit {code1}/{code2}"
    record_criterion(_line(9, "determinism", ok, detail))
    assert ok
