"""Acceptance criteria; each test prints one PASS/FAIL line (visible even without -s)."""
import json
import time

import numpy as np
import pytest

from infotypes import circuits as cc
from infotypes import theorems as th
from infotypes.bases import x_basis, y_basis, z_basis
from infotypes.circuits import Isometry
from infotypes.cli import main
from infotypes.core import basis_ket, density, random_ket, reduced_density, schmidt_decomposition
from infotypes.fixtures import split_information_state
from infotypes.information import (
    absence_residual,
    all_information_present,
    build_graph,
    classify,
    commutant_dimension,
    is_connected,
    is_perfectly_absent,
    is_perfectly_present,
    maximal_entanglement_residual,
)
from infotypes.instances import basis_pair, no_cloning_instance, run_sweep

from oracles import B6_AB_PRODUCT_DISTANCE, RANK_ZY

TOL = 1e-10
B6_SHAPE = (2, 2, 2)


@pytest.fixture
def report(capsys):
    def emit(n, ok, text):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {text}")
        assert ok, text
    return emit


def test_criterion_1_teleportation_exact(report):
    start = time.perf_counter()
    rng = np.random.default_rng(1)
    worst = 1.0
    for bits in (1, 2):
        for d in (2, 3, 5):
            c = cc.teleport_circuit(bits, d)
            for _ in range(100):
                worst = min(worst, cc.teleport_fidelity(c, random_ket(d, rng)))
    elapsed = time.perf_counter() - start
    report(1, worst >= 1 - TOL and elapsed < 5.0,
           f"teleportation min fidelity {worst:.15f}, {elapsed:.2f} s (limit 5 s)")


def test_criterion_2_correction_removal_split(report):
    c = cc.one_bit_teleport(2, drop_correction=True)
    psi, shape = cc.channel_ket(c), cc.channel_ket_shape(c)
    out = [c.output_factor + 1]
    z_ok = is_perfectly_present(psi, shape, z_basis(2), TOL, target=out)
    x_ok = is_perfectly_absent(psi, shape, x_basis(), TOL, target=out)
    report(2, z_ok and x_ok, f"without the last correction: Z present {z_ok}, X absent {x_ok}")


def test_criterion_3_interferometer(report):
    _, h0 = cc.exit_probabilities(cc.interferometer(0.0))
    g1, h1 = cc.exit_probabilities(cc.interferometer(1.0))
    ends = abs(h0 - 1) <= 1e-12 and abs(g1 - 0.5) <= 1e-12 and abs(h1 - 0.5) <= 1e-12
    psi = cc.interferometer_channel_ket(1.0)
    env = is_perfectly_present(psi, (2, 2, 2), z_basis(2), TOL, target=[1])
    part = is_perfectly_absent(psi, (2, 2, 2), x_basis(), TOL, target=[2])
    r = th.check_exclusion(psi, (2, 2, 2), z_basis(2), x_basis(), TOL, 0, 1, 2)
    ok = ends and env and part and r.status == "pass"
    report(3, ok, f"Pr[h](0)={h0:.15f} Pr[g](1)={g1:.15f} Pr[h](1)={h1:.15f}; "
                  f"which-way in env {env}, coherence absent {part}, exclusion {r.status}")


def test_criterion_4_split_state_properties(report):
    psi = split_information_state()
    checks = {}
    for name, t in (("b", 1), ("c", 2)):
        checks[f"X present in {name}"] = classify(psi, B6_SHAPE, x_basis(), TOL, target=[t]) == "present"
        checks[f"Y absent from {name}"] = classify(psi, B6_SHAPE, y_basis(), TOL, target=[t]) == "absent"
        checks[f"Z absent from {name}"] = classify(psi, B6_SHAPE, z_basis(2), TOL, target=[t]) == "absent"
    checks["all information in bc"] = all_information_present(psi, B6_SHAPE, TOL, target=[1, 2])
    checks["maximally entangled a|bc"] = maximal_entanglement_residual(psi, B6_SHAPE, target=[1, 2]) <= TOL
    s, _, _ = schmidt_decomposition(psi, B6_SHAPE[:1] + (4,))
    checks["equal Schmidt coefficients"] = abs(s[0] - s[1]) <= TOL and len(s[s > TOL]) == 2
    rho_ab = reduced_density(psi, B6_SHAPE, [0, 1])
    A, B = reduced_density(psi, B6_SHAPE, [0]), reduced_density(psi, B6_SHAPE, [1])
    dist = np.linalg.norm(rho_ab - np.kron(A, B))
    checks["rho_ab not a product"] = dist > TOL and abs(dist - B6_AB_PRODUCT_DISTANCE) <= TOL
    failed = [k for k, v in checks.items() if not v]
    report(4, not failed, f"{len(checks) - len(failed)}/{len(checks)} split-state properties"
                          + (f"; failed: {failed}" if failed else ""))


def test_criterion_5_graph_commutant(report):
    start = time.perf_counter()
    total = agree = disconnected = 0
    for d in (2, 3, 4, 5):
        rng = np.random.default_rng(100 + d)
        for _ in range(200):
            V, W = basis_pair(d, rng)
            conn = is_connected(build_graph(V, W))
            trivial = commutant_dimension([V, W]) == 1
            total += 1
            agree += conn == trivial
            disconnected += not conn
    elapsed = time.perf_counter() - start
    report(5, agree == total and elapsed < 30.0,
           f"graph/commutant agree on {agree}/{total} pairs ({disconnected} disconnected), "
           f"{elapsed:.2f} s (limit 30 s)")


@pytest.mark.parametrize("theorem", sorted(th.CHECKERS))
def test_criterion_6_theorem_sweeps(report, theorem):
    parts = []
    ok = True
    for d in (2, 3):
        s = run_sweep(theorem, d, 50, seed=6).summary()
        ok &= s["pass"] == 50 and s["fail"] == 0 and s["vacuous"] == 0
        parts.append(f"d={d} pass {s['pass']} vacuous {s['vacuous']} fail {s['fail']}")
    report(6, ok, f"{theorem}: " + "; ".join(parts))


def test_criterion_7_basis_count(report):
    psi = split_information_state()
    rho_ab = reduced_density(psi, B6_SHAPE, [0, 1])
    zy = [z_basis(2), y_basis()]
    absent = all(absence_residual(rho_ab, (2, 2), v) <= TOL for v in zy)
    r = th.check_absence_general(rho_ab, (2, 2), zy, TOL)
    rank = r.details["operator_space_rank"]
    nonproduct = r.violations[0][1]
    two_insufficient = absent and rank == RANK_ZY and r.vacuous and nonproduct > TOL
    rng = np.random.default_rng(7)
    fam = [z_basis(2), x_basis(), y_basis()]
    passes = 0
    for _ in range(50):
        rho = np.kron(density(random_ket(2, rng)), density(random_ket(3, rng)))
        passes += th.check_absence_general(rho, (2, 3), fam, TOL).status == "pass"
    report(7, two_insufficient and passes == 50,
           f"{{Z,Y}} absent {absent}, rank {rank} of 4, rho_ab product distance {nonproduct:.3f}; "
           f"{{Z,X,Y}} gives product on {passes}/50 product states")


def test_criterion_8_generalized_no_cloning(report):
    rng = np.random.default_rng(8)
    worst = 0.0
    statuses = []
    for k in range(20):
        d = (2, 3, 4)[k % 3]
        r = th.check_generalized_no_cloning(no_cloning_instance(d, rng)["inst"])
        statuses.append(r.status)
        worst = max(worst, dict(r.violations)["M|a> = (U|a>) (x) |gamma_1> on a basis of G_a"])
    copier = np.zeros((4, 2), dtype=complex)
    copier[0, 0] = copier[3, 1] = 1
    plus = (basis_ket(2, 0) + basis_ket(2, 1)) / np.sqrt(2)
    naive = th.check_generalized_no_cloning(th.CloningInstance(Isometry(copier), (basis_ket(2, 0), plus), (2, 2)))
    first_failed = next(h for h in naive.hypotheses if not h.holds)
    rejected = naive.vacuous and first_failed.description == "every image M|alpha_j> is a product state"
    ok = worst <= 1e-8 and statuses.count("pass") == 20 and rejected
    report(8, ok, f"recovered-U residual max {worst:.2e} over {statuses.count('pass')}/20 instances; "
                  f"naive copier rejected at the product hypothesis {rejected}")


def test_criterion_9_determinism(report, capsys):
    argvs = [
        ["check", "presence", "--dim", "3", "--trials", "10", "--seed", "9", "--format", "structured"],
        ["check", "no-cloning", "--dim", "3", "--trials", "10", "--seed", "9", "--jobs", "4",
         "--format", "structured"],
        ["teleport", "--bits", "2", "--dim", "3", "--seed", "9", "--drop-correction", "--format", "structured"],
        ["analyze", "--fixture", "teleport2", "--format", "structured"],
    ]
    same = 0
    for argv in argvs:
        outs = []
        for _ in range(2):
            main(argv)
            outs.append(capsys.readouterr().out)
        same += outs[0] == outs[1] and len(outs[0]) > 0
    sweeps = [json.dumps([r.to_document() for r in run_sweep(t, 2, 10, seed=9).reports], sort_keys=True)
              for t in ("truncation", "truncation", "absence-general", "absence-general")]
    sweep_same = sweeps[0] == sweeps[1] and sweeps[2] == sweeps[3]
    report(9, same == len(argvs) and sweep_same,
           f"{same}/{len(argvs)} CLI reports byte-identical, sweep documents identical {sweep_same}")
