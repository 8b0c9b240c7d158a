import json

import numpy as np
import pytest

from infotypes.bases import OrthonormalBasis
from infotypes.information import build_graph, commutant_dimension, is_connected, mutually_unbiased
from infotypes.instances import (
    GENERATORS,
    basis_pair,
    mub_partner,
    run_sweep,
    spanning_family,
    trial_seeds,
)
from infotypes.bases import decomposition_projectors, spans_operator_space


def test_trial_seeds_are_reproducible():
    assert trial_seeds(3, 5) == trial_seeds(3, 5)
    assert trial_seeds(3, 5)[:2] == trial_seeds(3, 2)
    assert trial_seeds(3, 5) != trial_seeds(4, 5)


def test_sweep_independent_of_jobs():
    a = run_sweep("presence", 2, 8, seed=5, jobs=1)
    b = run_sweep("presence", 2, 8, seed=5, jobs=4)
    da = json.dumps([r.to_document() for r in a.reports], sort_keys=True)
    db = json.dumps([r.to_document() for r in b.reports], sort_keys=True)
    assert da == db


def test_sweep_summary_counts():
    res = run_sweep("exclusion", 3, 6, seed=0)
    s = res.summary()
    assert s["pass"] + s["fail"] + s["vacuous"] == 6 and s["pass"] == 6


def test_unknown_theorem():
    with pytest.raises(KeyError):
        run_sweep("cloning", 2, 1)


def test_mub_partner():
    rng = np.random.default_rng(0)
    V = OrthonormalBasis(np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))[0])
    assert mutually_unbiased(V, mub_partner(V, rng))


@pytest.mark.parametrize("d", [2, 3, 4, 6])
def test_spanning_family(d):
    fam = spanning_family(d, np.random.default_rng(d))
    assert spans_operator_space(decomposition_projectors(fam))


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_structured_pairs_disconnected(d):
    rng = np.random.default_rng(d)
    for _ in range(5):
        V, W = basis_pair(d, rng, structured=True)
        assert not is_connected(build_graph(V, W)) and commutant_dimension([V, W]) > 1


def test_every_generator_builds():
    rng = np.random.default_rng(0)
    for name, gen in GENERATORS.items():
        assert isinstance(gen(2, rng), dict), name
