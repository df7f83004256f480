"""Acceptance gate: the eleven headline guarantees, one pass line each.

Each test prints `[criterion NN] PASS — ...` on success; with ``pytest -v``
the test name doubles as the pass/fail line.  Suites run over the full
switching-inequivalence corpus (5 vertices / 8 edges, 35330 classes), so
this module takes a couple of minutes end to end.
"""

import time
from fractions import Fraction
from math import ceil

import pytest
from bruteforce import has_integer_k_flow, has_zk_flow

from signedflow.core import FlowAssignment, FlowKind, check_flow
from signedflow.corpus import (
    g_family,
    g_family_circular_witness,
    signed_petersen,
    w5_all_signatures,
)
from signedflow.solve import find_nz_k_flow, find_nz_zk_flow, flow_numbers
from signedflow.structure import three_edge_coloring
from signedflow.transform import normalize_circular_flow
from signedflow.verify_suites import flow_parity_ok, run_suite


def test_criterion_01_petersen_six_flow_yes_five_flow_no(petersen):
    start = time.monotonic()
    fa = find_nz_k_flow(petersen, 6)
    assert fa is not None
    assert check_flow(petersen, fa, FlowKind.integer(6)).ok
    assert find_nz_k_flow(petersen, 5) is None
    elapsed = time.monotonic() - start
    assert elapsed < 300, f"k=5 nonexistence took {elapsed:.0f}s (budget 300s)"
    print(f"[criterion 01] PASS — 6-flow verified, 5-flow exhausted in {elapsed:.1f}s")


def test_criterion_02_loop_family_circular_3_but_no_integer_3():
    for t in (1, 2, 3):
        start = time.monotonic()
        g = g_family(t)
        w = g_family_circular_witness(t)
        assert check_flow(g, w, FlowKind.circular(Fraction(3))).ok
        loops = [i for i, e in enumerate(g.edges) if e.u == e.v]
        assert all(w.values[i] == Fraction(3, 2) for i in loops)
        assert find_nz_k_flow(g, 3) is None
        assert find_nz_zk_flow(g, 3) is None
        elapsed = time.monotonic() - start
        assert elapsed < 60, f"t={t} took {elapsed:.0f}s (budget 60s)"
    print("[criterion 02] PASS — t=1..3: circular 3-flow witness verified, "
          "no 3-flow, no Z3-flow")


def test_criterion_03_six_flow_suite(corpus_full):
    report = run_suite("six-flow", corpus_full)
    assert report.failures == [], report.failures[:3]
    assert report.checked > 0
    print(f"[criterion 03] PASS — {report.checked} admissible barbell-free "
          f"graphs all admit a 6-flow")


def test_criterion_04_modular_integer_equivalence(corpus_full):
    report = run_suite("mod-int-equiv", corpus_full)
    assert report.failures == [], report.failures[:3]
    witness = None
    for g in w5_all_signatures():
        if find_nz_zk_flow(g, 4) is not None and find_nz_k_flow(g, 4) is None:
            witness = g
            break
    assert witness is not None, "no wheel signature separates Z4 from 4-flow"
    print(f"[criterion 04] PASS — k in (3,5,6,7): {report.checked} checks agree; "
          f"a wheel signature has a Z4-flow but no 4-flow")


def test_criterion_05_conversion_suite(corpus_full):
    report = run_suite("conversion", corpus_full)
    assert report.failures == [], report.failures[:3]
    assert report.notes.get("invariant-aborts", 0) == 0
    print(f"[criterion 05] PASS — {report.checked} modulo-k flows (k=3,5,7) "
          f"converted with congruence, 0 aborts")


def test_criterion_06_two_flow_sum_suite(corpus_full):
    report = run_suite("two-flow-sum", corpus_full)
    assert report.failures == [], report.failures[:3]
    print(f"[criterion 06] PASS — {report.checked} positive k-flows (k<=6) "
          f"split into k-1 nonnegative 2-flows")


def test_criterion_07_eulerian_decomposition_suite(corpus_full):
    report = run_suite("eulerian-decomp", corpus_full)
    assert report.failures == [], report.failures[:3]
    assert report.checked > 0
    print(f"[criterion 07] PASS — {report.checked} eulerian graphs partition "
          f"into {report.notes.get('balanced-circuits', 0)} balanced circuits "
          f"and {report.notes.get('short-barbells', 0)} short barbells")


@pytest.fixture(scope="module")
def phi_report(corpus_full):
    # shared by criteria 08 and 09; the heaviest suite in the gate
    return run_suite("phi-equality", corpus_full)


def test_criterion_08_phi_equality_and_gap_distribution(phi_report):
    report = phi_report
    assert report.failures == [], report.failures[:3]
    gaps = {k: v for k, v in report.notes.items() if k.startswith("barbell-gap=")}
    numbers = flow_numbers(g_family(1))
    assert numbers.phi_i == 4
    assert ceil(numbers.phi_c) == 3
    print(f"[criterion 08] PASS — ceil(phi_c)=phi_i on every barbell-free graph; "
          f"recorded gap distribution {gaps}; loop family t=1 gives 3 < 4")


def test_criterion_09_normalization_terminal_structure(phi_report):
    # structure violations surface as failures inside the phi-equality
    # suite, which normalizes every circular witness it computes
    report = phi_report
    assert report.failures == [], report.failures[:3]
    assert report.notes.get("residual-empty", 0) > 0
    g = g_family(1)
    w = g_family_circular_witness(1)
    state = normalize_circular_flow(g, w, 2, 1)
    loops = {i for i, e in enumerate(g.edges) if e.u == e.v}
    assert set(state.off_grid) == loops == {5, 6}
    assert all(e.sign < 0 for i, e in enumerate(g.edges) if i in loops)
    print(f"[criterion 09] PASS — all normalizations terminate with legal "
          f"residue ({report.notes.get('residual-empty', 0)} empty, "
          f"{report.notes.get('residual-nonempty', 0)} nonempty); "
          f"loop family residue = the two loops")


def test_criterion_10_solver_matches_bruteforce_and_parity(corpus_4_6):
    disagreements = []
    integer_flows = 0
    for g in corpus_4_6:
        for k in (2, 3, 4):
            fa = find_nz_k_flow(g, k)
            if (fa is not None) != has_integer_k_flow(g, k):
                disagreements.append((g, "integer", k))
            if fa is not None:
                integer_flows += 1
                assert flow_parity_ok(g, fa)
            zk = find_nz_zk_flow(g, k)
            if (zk is not None) != has_zk_flow(g, k):
                disagreements.append((g, "modulo", k))
    assert disagreements == []
    assert integer_flows > 0
    print(f"[criterion 10] PASS — {len(corpus_4_6)} graphs x k=2,3,4 agree with "
          f"brute force; parity held on {integer_flows} integer flows "
          f"(and is asserted inside every suite)")


def test_criterion_11_cubic_z4_iff_three_edge_colorable(corpus_full, petersen):
    report = run_suite("cubic-z4", corpus_full + [petersen])
    assert report.failures == [], report.failures[:3]
    assert find_nz_zk_flow(petersen, 4) is None
    assert three_edge_coloring(petersen) is None
    print(f"[criterion 11] PASS — {report.checked} cubic graphs: Z4-flow iff "
          f"3-edge-colorable; Petersen signature refuses both")
