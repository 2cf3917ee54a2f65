import numpy as np
import pytest

from postselect_ft.gadgets import GadgetConfig, build_bell_prep, build_plus_prep, build_teleported_cnot, run_exact
from postselect_ft.montecarlo import sample_pauli_frame, within_envelope


def test_noiseless_bell_prep_is_exact():
    g = build_bell_prep(GadgetConfig())
    mc = sample_pauli_frame(g, 5000, seed=1)
    assert mc.accepted == 5000
    assert mc.distribution().probs[0] == 1


def test_same_seed_same_counts():
    g = build_bell_prep(GadgetConfig(eta=0.05))
    a = sample_pauli_frame(g, 30000, seed=4, chunk=4096)
    b = sample_pauli_frame(g, 30000, seed=4, chunk=4096, workers=3)
    assert a.accepted == b.accepted
    assert np.array_equal(a.counts, b.counts)
    c = sample_pauli_frame(g, 30000, seed=5, chunk=4096)
    assert not np.array_equal(a.counts, c.counts)


@pytest.mark.parametrize("build, eta", [
    (build_plus_prep, 0.1),
    (build_bell_prep, 0.05),
    (build_teleported_cnot, 0.05),
])
def test_sampler_within_envelope(build, eta):
    for split in ("symmetric", "adversarial"):
        g = build(GadgetConfig(eta=eta, split=split))
        exact = run_exact(g)
        mc = sample_pauli_frame(g, 200_000, seed=11)
        rep = within_envelope(mc, exact.accept_probability, exact.output)
        assert rep["accept_ok"] and rep["cells_ok"] and rep["tv_ok"] and rep["retries_ok"], rep


def test_zero_accepted_is_flagged():
    g = build_teleported_cnot(GadgetConfig())
    mc = sample_pauli_frame(g, 3, seed=0)
    if mc.accepted == 0:
        assert mc.distribution() is None
        assert mc.expected_retries == float("inf")
        rep = within_envelope(mc, 1 / 16, run_exact(g).output)
        assert rep["tv"] is None and not rep["tv_ok"]


def test_shots_validated():
    with pytest.raises(ValueError):
        sample_pauli_frame(build_plus_prep(GadgetConfig()), 0, seed=0)


def test_envelope_sparse_cells_use_exact_tails():
    from postselect_ft.distributions import make_distribution
    from postselect_ft.montecarlo import MonteCarloResult

    exact = make_distribution(2, {"00": 1 - 2e-6, "10": 1e-6, "01": 1e-6})
    # 3 hits where 0.2 are expected: about 6 normal sigmas, but p ~ 1e-3
    mc = MonteCarloResult(200_000, 200_000, np.array([199_997, 3, 0, 0]), 2)
    assert within_envelope(mc, 1.0, exact)["cells_ok"]
    mc = MonteCarloResult(200_000, 200_000, np.array([199_980, 20, 0, 0]), 2)
    assert not within_envelope(mc, 1.0, exact)["cells_ok"]
    # a cell the exact law forbids must stay empty
    mc = MonteCarloResult(200_000, 200_000, np.array([199_999, 0, 0, 1]), 2)
    assert not within_envelope(mc, 1.0, exact)["cells_ok"]
