"""Session-wide fixtures for the Monte-Carlo suites.

The heavy reconstruction experiments are shared between the module tests
and the acceptance suite so each cell is computed exactly once per run.
"""

import time

import numpy as np
import pytest

from lrhankel import (
    ExponentialModel,
    MaskSpec,
    add_noise,
    data_consistency,
    dehankelize,
    hankelize,
    make_mask,
    rlne,
    synthesize,
    undersample,
    uniform_mask,
)
from lrhankel.bench import ExperimentSpec, reconstruct_with, run_grid
from lrhankel.hankel import default_shape

ACCEPT_SEED = 20240501
TRIALS = 50

#: wall-clock seconds of the heavy session fixtures, keyed by fixture name
FIXTURE_TIMES: dict = {}


def _timed_grid(name: str, spec: ExperimentSpec):
    t0 = time.perf_counter()
    result = run_grid(spec)
    FIXTURE_TIMES[name] = time.perf_counter() - t0
    return result


def xupdate_dense_gap(n_instances: int, n: int = 16, seed: int = 5) -> float:
    """Worst relative gap between the closed-form elementwise x-update and a
    dense solve of (lam U'U + beta R'R) x = lam U'y + beta R'(M)."""
    rng = np.random.default_rng(seed)
    shape = default_shape(n)
    n1, n2 = shape.n1, shape.n2
    lift = np.zeros((n1 * n2, n))
    for k in range(n):
        e = np.zeros(n)
        e[k] = 1.0
        lift[:, k] = hankelize(e, shape).ravel().real
    inv = np.zeros((n, n1 * n2))
    for k in range(n1 * n2):
        E = np.zeros(n1 * n2)
        E[k] = 1.0
        inv[:, k] = dehankelize(E.reshape(n1, n2)).real

    worst = 0.0
    for trial in range(n_instances):
        lam, beta = 10 ** rng.uniform(0, 3), 10 ** rng.uniform(-1, 1)
        mask = uniform_mask(MaskSpec(n, 0.5, "uniform_random", trial))
        y = rng.normal(size=mask.m) + 1j * rng.normal(size=mask.m)
        M = rng.normal(size=(n1, n2)) + 1j * rng.normal(size=(n1, n2))
        sel = np.zeros((mask.m, n))
        sel[np.arange(mask.m), mask.zero_based] = 1.0
        A = lam * sel.T @ sel + beta * inv @ lift
        rhs = lam * sel.T @ y + beta * inv @ M.ravel()
        expected = np.linalg.solve(A, rhs)
        got = data_consistency(dehankelize(M), y, mask, lam / beta)
        worst = max(worst, np.linalg.norm(got - expected) / np.linalg.norm(expected))
    return worst

# five-peak reference model with a 10x amplitude spread (weakest peak is
# roughly twenty times lower in the spectrum than the strongest)
WEAKPEAK_MODEL = ExponentialModel.from_arrays(
    amplitudes=[0.100, 0.300, 0.500, 0.700, 1.000],
    phases=[0.0, 0.0, 0.0, 0.0, 0.0],
    dampings=[50.0, 75.0, 100.0, 125.0, 150.0],
    frequencies=[0.1655, 0.3349, 0.5004, 0.6698, 0.8353],
)

# five-peak reference model with randomized amplitudes/phases/dampings
CASE_MODEL = ExponentialModel.from_arrays(
    amplitudes=[0.5145, 0.6623, 0.7253, 0.7825, 0.9872],
    phases=[2 * np.pi / 5, 4 * np.pi / 5, 6 * np.pi / 5, 8 * np.pi / 5, 0.0],
    dampings=[26.47, 35.63, 48.78, 61.51, 81.50],
    frequencies=[0.1532, 0.3135, 0.4716, 0.6124, 0.7831],
)


@pytest.fixture(scope="session")
def grid_lrhmf_25():
    """LRHMF + zero-fill at 25% sampling for J = 1, 5, 10 (50 trials)."""
    spec = ExperimentSpec(
        methods=("lrhmf", "zero_fill"), j_values=(1, 5, 10), rates=(0.25,),
        trials=TRIALS, noise_sigma=0.05, base_seed=ACCEPT_SEED,
    )
    return _timed_grid("grid_lrhmf_25", spec)


@pytest.fixture(scope="session")
def grid_lrhmf_15():
    """LRHMF + zero-fill at 15% sampling for J = 5 (50 trials)."""
    spec = ExperimentSpec(
        methods=("lrhmf", "zero_fill"), j_values=(5,), rates=(0.15,),
        trials=TRIALS, noise_sigma=0.05, base_seed=ACCEPT_SEED,
    )
    return _timed_grid("grid_lrhmf_15", spec)


@pytest.fixture(scope="session")
def grid_lrhm_25():
    """LRHM at 25% sampling for J = 1, 5 (50 trials)."""
    spec = ExperimentSpec(
        methods=("lrhm",), j_values=(1, 5), rates=(0.25,),
        trials=TRIALS, noise_sigma=0.05, base_seed=ACCEPT_SEED,
    )
    return _timed_grid("grid_lrhm_25", spec)


@pytest.fixture(scope="session")
def damped_comparison():
    """Paired RLNEs of lrhm/lrhmf/cs on heavily damped single exponentials
    (damping 10, 25% sampling, noise 0.05, 50 trials)."""
    out = {"lrhm": [], "lrhmf": [], "cs": []}
    for t in range(TRIALS):
        ss = np.random.SeedSequence([ACCEPT_SEED, 99, t])
        s_model, s_mask, s_noise = ss.spawn(3)
        rng = np.random.default_rng(s_model)
        model = ExponentialModel.from_arrays(
            amplitudes=[1.0],
            phases=[rng.uniform(0, 2 * np.pi)],
            dampings=[10.0],
            frequencies=[rng.uniform(0, 1)],
        )
        x = synthesize(model, 255)
        mask = make_mask(MaskSpec(255, 0.25, "poisson_gap", int(s_mask.generate_state(1)[0])))
        y = undersample(add_noise(x, 0.05, int(s_noise.generate_state(1)[0])), mask)
        for method in out:
            res = reconstruct_with(method, y, mask, noise_sigma=0.05)
            out[method].append(rlne(res.x_hat, x))
    return {k: np.array(v) for k, v in out.items()}


@pytest.fixture(scope="session")
def weakpeak_runs():
    """LRHMF and zero-fill reconstructions of the five-peak reference model
    at 25% Poisson-gap sampling with noise 0.05 (50 trials)."""
    x = synthesize(WEAKPEAK_MODEL, 255)
    runs = []
    for t in range(TRIALS):
        ss = np.random.SeedSequence([ACCEPT_SEED, 7, t])
        s_mask, s_noise = ss.spawn(2)
        mask = make_mask(MaskSpec(255, 0.25, "poisson_gap", int(s_mask.generate_state(1)[0])))
        y = undersample(add_noise(x, 0.05, int(s_noise.generate_state(1)[0])), mask)
        lr = reconstruct_with("lrhmf", y, mask)
        zf = reconstruct_with("zero_fill", y, mask)
        runs.append({"lrhmf": lr.x_hat, "zero_fill": zf.x_hat})
    return {"x": x, "runs": runs}
