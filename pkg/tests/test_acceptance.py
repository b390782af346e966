"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest -v -s tests/test_acceptance.py`` to see the per-criterion
lines and timings.  Every tolerance is pinned here; nothing is deferred to
later calibration.
"""

import json
import time

import numpy as np
import pytest
import scipy.linalg

from unidisc.arc import arc_brute_force, discriminating_state, theta
from unidisc.compiler import ExactMatrix, LocalLayer, compile_word
from unidisc.core import (UnitaryOperator, identity_operator, phase_distance,
                          random_hermitian, random_unitary)
from unidisc.engine import (build_protocol, identify, identity_vs_other,
                            multi_discriminate)
from unidisc.exceptions import (CompileFailed, NotSingleRunDiscriminable,
                                SynthesisFailed)
from unidisc.io import (dumps_artifact, matrix_to_json, protocol_to_json,
                        scheme_to_json)
from unidisc.locality import (IMPRIMITIVE, PRODUCT_LOCAL, SWAP_LOCAL,
                              canonical_xx_operator, classify, embedded_pauli,
                              extract_canonical_xx, swap_operator, xx_generator)
from unidisc.sequential import evaluate_scheme, find_sequential_scheme, \
    required_runs
from conftest import (CNOT_MAT, CZ_MAT, SX, SY, SZ, haar_two_qudit,
                      product_operator, swap_type_operator)


def _report(num, label, t0):
    print(f"ACCEPTANCE {num}: PASS - {label} ({time.time() - t0:.2f}s)")


def test_criterion_01_theta_matches_brute_force():
    t0 = time.time()
    rng = np.random.default_rng(2024)
    for _ in range(200):
        m = int(rng.integers(2, 7))
        phases = rng.uniform(0.0, 2 * np.pi, size=m)
        op = UnitaryOperator(np.diag(np.exp(1j * phases)), (m,))
        assert abs(theta(op).theta - arc_brute_force(phases)) < 1e-12
    elapsed = time.time() - t0
    assert elapsed < 1.0
    _report(1, "theta vs exhaustive arc oracle, 200 instances", t0)


def _pair_with_arc(seed, wide):
    """(U, V) with Theta(U^dag V) >= pi (wide) or < pi - 1e-3 (narrow)."""
    rng = np.random.default_rng(seed)
    d = int(rng.integers(2, 5))
    if wide:
        if d >= 3 and seed % 2 == 0:
            # strict interior: three roughly balanced phases
            base = np.array([0.0, 2 * np.pi / 3, 4 * np.pi / 3])
            phases = base + rng.uniform(-0.2, 0.2, size=3)
            phases = np.concatenate([phases, rng.uniform(0, 2 * np.pi, d - 3)])
        else:
            phases = np.concatenate([[0.0, np.pi],
                                     rng.uniform(0.0, np.pi, d - 2)])
    else:
        phases = rng.uniform(0.0, np.pi - 2e-3, size=d)
        phases[0] = 0.0
    u = random_unitary(d, 3 * seed + 1)
    r = random_unitary(d, 3 * seed + 2)
    w = r.matrix @ np.diag(np.exp(1j * phases)) @ r.matrix.conj().T
    v = UnitaryOperator(u.matrix @ w, (d,), tol=1e-8)
    return u, v


def test_criterion_02_single_run_certificates_and_refusals():
    t0 = time.time()
    for seed in range(100):
        u, v = _pair_with_arc(seed, wide=True)
        psi = discriminating_state(u, v)
        w = u.matrix.conj().T @ v.matrix
        assert abs(np.vdot(psi.amplitudes, w @ psi.amplitudes)) <= 1e-9
    for seed in range(100):
        u, v = _pair_with_arc(1000 + seed, wide=False)
        with pytest.raises(NotSingleRunDiscriminable):
            discriminating_state(u, v)
    elapsed = time.time() - t0
    assert elapsed < 5.0
    _report(2, "100 wide-arc certificates <= 1e-9 and 100 refusals", t0)


def _criterion3_schemes():
    eye = identity_operator((2,))
    artifacts = []
    results = []
    for k in range(2, 6):
        v = UnitaryOperator(np.diag([1.0, np.exp(1j * np.pi / k)]), (2,))
        n = required_runs(eye, v)
        scheme = find_sequential_scheme(eye, v, seed=k)
        overlap = evaluate_scheme(scheme, eye, v)
        results.append((k, n, len(scheme.aux_ops), overlap))
        artifacts.append(dumps_artifact(scheme_to_json(scheme, seed=k)))
    return results, artifacts


def test_criterion_03_run_budget():
    t0 = time.time()
    results, artifacts = _criterion3_schemes()
    for k, n, used, overlap in results:
        assert n == k - 1
        assert used == k - 1
        assert overlap <= 1e-6
    assert time.time() - t0 < 4 * 60.0
    test_criterion_03_run_budget.artifacts = artifacts
    _report(3, "required_runs = k-1 and certified schemes for k = 2..5", t0)


def test_criterion_04_classification_oracle():
    t0 = time.time()
    for d in (2, 3):
        for k in range(100):
            gen_a = random_unitary(d, 7 * k + 1)
            gen_b = random_unitary(d, 7 * k + 2)
            prod = UnitaryOperator(np.kron(gen_a.matrix, gen_b.matrix), (d, d))
            got = classify(prod)
            assert got.kind == PRODUCT_LOCAL
            assert phase_distance(got.factors[0], gen_a) <= 1e-6
            assert phase_distance(got.factors[1], gen_b) <= 1e-6

            sw = UnitaryOperator(prod.matrix @ swap_operator(d).matrix, (d, d))
            got = classify(sw)
            assert got.kind == SWAP_LOCAL
            assert phase_distance(got.factors[0], gen_a) <= 1e-6
            assert phase_distance(got.factors[1], gen_b) <= 1e-6

            haar = haar_two_qudit(d, 7 * k + 3)
            assert classify(haar).kind == IMPRIMITIVE
    elapsed = time.time() - t0
    assert elapsed < 30.0
    _report(4, "100% classification, 100 instances/class at d = 2 and 3", t0)


def test_criterion_05_canonical_form_roundtrip_and_facts():
    t0 = time.time()
    for d in (2, 3, 4):
        rng = np.random.default_rng(d)
        g = np.kron(xx_generator(d), xx_generator(d))
        g_unit = g / np.linalg.norm(g)
        for _ in range(50):
            x = rng.uniform(-np.pi, np.pi)
            ext = extract_canonical_xx(canonical_xx_operator(d, x))
            assert ext is not None
            assert abs(np.mod(ext.x - x + np.pi, 2 * np.pi) - np.pi) < 1e-8
        for _ in range(50):
            x = rng.uniform(-np.pi, np.pi)
            h = random_hermitian(d * d, int(rng.integers(1 << 30)))
            h -= g_unit * np.trace(g_unit.conj().T @ h).real
            h *= 1e-3 / np.linalg.norm(h)
            op = UnitaryOperator(scipy.linalg.expm(1j * (x * g + h)),
                                 (d, d), tol=1e-8)
            assert extract_canonical_xx(op) is None

    # conjugation-inversion fact, both directions, 100 instances
    a = np.kron(embedded_pauli(SZ, 3), np.eye(3))
    for k in range(100):
        b = random_hermitian(9, 5000 + k)
        b_anti = (b - a @ b @ a.conj().T) / 2.0
        u = scipy.linalg.expm(1j * b_anti)
        assert np.linalg.norm(a @ u @ a.conj().T - u.conj().T) < 1e-9
        if np.linalg.norm(b + a @ b @ a.conj().T) > 1e-6:
            u_bad = scipy.linalg.expm(1j * b)
            assert np.linalg.norm(a @ u_bad @ a.conj().T - u_bad.conj().T) > 1e-8

    # anticommuting-structure fact, 100 instances over d <= 5
    for k in range(100):
        d = 2 + k % 4
        a1, a2 = embedded_pauli(SZ, d), embedded_pauli(SY, d)
        b = random_hermitian(d, 6000 + k)
        for _ in range(60):
            b = (b - a1 @ b @ a1.conj().T) / 2.0
            b = (b - a2 @ b @ a2.conj().T) / 2.0
        assert np.linalg.norm(b + a1 @ b @ a1.conj().T) < 1e-10
        assert np.linalg.norm(b + a2 @ b @ a2.conj().T) < 1e-10
        want = b[0, 1].real * embedded_pauli(SX, d)
        want[2:, 2:] = 0.0
        assert np.linalg.norm(b - want) < 1e-8
    _report(5, "canonical-form roundtrip/rejection and conjugation facts", t0)


def _word_artifact(word):
    payload = {"boxes": word.box_uses, "error": word.achieved_error,
               "items": [matrix_to_json(it.a) + matrix_to_json(it.b)
                         if isinstance(it, LocalLayer) else it.direction
                         for it in word.items]}
    return dumps_artifact(payload)


def _criterion6_words():
    cnot = UnitaryOperator(CNOT_MAT, (2, 2))
    w_cz = compile_word(cnot, ExactMatrix(CZ_MAT), max_boxes=1, seed=6)
    target = scipy.linalg.expm(1j * 0.3 * np.kron(SX, SX))
    w_xx = compile_word(cnot, ExactMatrix(target), max_boxes=2, seed=6)
    w_dag = compile_word(cnot, ExactMatrix(CNOT_MAT.conj().T), max_boxes=2,
                         seed=6)
    return w_cz, w_xx, w_dag


def test_criterion_06_compiler_milestones():
    t0 = time.time()
    w_cz, w_xx, w_dag = _criterion6_words()
    assert w_cz.box_uses == 1 and w_cz.achieved_error <= 1e-8
    assert w_xx.box_uses <= 2 and w_xx.achieved_error <= 1e-6
    assert w_dag.achieved_error <= 1e-10
    elapsed = time.time() - t0
    assert elapsed < 3 * 120.0
    test_criterion_06_compiler_milestones.artifacts = [
        _word_artifact(w) for w in (w_cz, w_xx, w_dag)]
    _report(6, "CZ@1 box <= 1e-8, XX(0.3) <= 1e-6, CNOT^dag <= 1e-10", t0)


_FAMILIES = {
    "product-product": lambda s: (product_operator(2, 2 * s + 1),
                                  product_operator(2, 2 * s + 7001)),
    "product-swap": lambda s: (product_operator(2, 2 * s + 1),
                               swap_type_operator(2, 2 * s + 8001)),
    "swap-swap": lambda s: (swap_type_operator(2, 2 * s + 1),
                            swap_type_operator(2, 2 * s + 9001)),
    "product-imprimitive": lambda s: (product_operator(2, 2 * s + 1),
                                      haar_two_qudit(2, 2 * s + 10001)),
    "imprimitive-imprimitive": lambda s: (haar_two_qudit(2, 2 * s + 11001),
                                          haar_two_qudit(2, 2 * s + 12001)),
}


def _criterion7_protocols(n_seeds=20):
    artifacts = []
    failures = {name: 0 for name in _FAMILIES}
    for name, gen in _FAMILIES.items():
        for s in range(n_seeds):
            u, v = gen(s)
            try:
                proto = build_protocol(u, v, seed=s)
            except (CompileFailed, SynthesisFailed) as exc:
                # honest certified failure: only allowed for the
                # imprimitive pair family, and it must report its best error
                assert name == "imprimitive-imprimitive", (name, s, exc)
                assert (getattr(exc, "best_error", None) is not None
                        or getattr(exc, "best_overlap", None) is not None)
                failures[name] += 1
                artifacts.append(dumps_artifact({"family": name, "seed": s,
                                                 "failed": True}))
                continue
            report = proto.certificate
            assert report.passed, (name, s)
            assert report.overlap <= 1e-5, (name, s)
            assert report.schmidt_second_max <= 1e-5, (name, s)
            artifacts.append(dumps_artifact(protocol_to_json(proto, seed=s)))
    return failures, artifacts


def test_criterion_07_end_to_end_families():
    t0 = time.time()
    failures, artifacts = _criterion7_protocols()
    assert failures["imprimitive-imprimitive"] <= 2   # at most 10% of seeds
    for name in set(failures) - {"imprimitive-imprimitive"}:
        assert failures[name] == 0
    elapsed = time.time() - t0
    assert elapsed < 30 * 60.0
    test_criterion_07_end_to_end_families.artifacts = artifacts
    _report(7, f"20 seeds x 5 families, failures={failures}"
               f" in {elapsed:.0f}s", t0)


def test_criterion_08_identity_vs_other_entry():
    t0 = time.time()
    makers = [lambda s: product_operator(2, s + 31),
              lambda s: swap_type_operator(2, s + 37),
              lambda s: haar_two_qudit(2, s + 41)]
    for s in range(20):
        w = makers[s % 3](s)
        proto = identity_vs_other(w, seed=s)
        assert proto.case_label == "IDENTITY_VS_OTHER"
        report = proto.certificate
        assert report.passed
        assert report.overlap <= 1e-5
        assert report.schmidt_second_max <= 1e-5
    _report(8, "20 identity-vs-W protocols across mixed classes", t0)


def test_criterion_09_multi_hypothesis_example():
    t0 = time.time()
    eye4 = identity_operator((2, 2))
    ops = [eye4, swap_operator(2),
           UnitaryOperator(np.kron(SZ, np.eye(2)), (2, 2))]
    tree = multi_discriminate(ops)
    for truth, op in enumerate(ops):
        outcome = identify(tree, op)
        assert set(outcome) == {truth}
    elapsed = time.time() - t0
    assert elapsed < 10.0
    _report(9, "m = 3 elimination tree identifies 3/3 ground truths", t0)


def test_criterion_10_determinism_byte_identical():
    t0 = time.time()
    _, arts3 = _criterion3_schemes()
    assert arts3 == test_criterion_03_run_budget.artifacts
    arts6 = [_word_artifact(w) for w in _criterion6_words()]
    assert arts6 == test_criterion_06_compiler_milestones.artifacts
    _, arts7 = _criterion7_protocols()
    assert arts7 == test_criterion_07_end_to_end_families.artifacts
    _report(10, "criteria 3, 6, 7 reproduce byte-identical artifacts", t0)
