import math

import numpy as np
import pytest

from lrhankel import (
    ExponentialModel,
    HankelShape,
    PeakSet,
    detect_peaks,
    esprit,
    hankel_diagnostics,
    match_peaks,
    parameter_errors,
    peak_correlation,
    pearson,
    rlne,
    spectrum,
    synthesize,
)
from lrhankel.metrics import WINDOW_W_DEFAULT
from tests.conftest import WEAKPEAK_MODEL


class TestRlne:
    def test_exact_reconstruction(self):
        x = np.array([1.0 + 1j, 2.0])
        assert rlne(x, x) == 0.0

    def test_zero_estimate(self):
        x = np.array([3.0, 4.0j])
        assert rlne(np.zeros(2), x) == 1.0

    def test_by_hand(self):
        x = np.array([3.0, 4.0j])
        x_hat = np.array([3.0, 0.0])
        assert abs(rlne(x_hat, x) - 0.8) < 1e-15

    def test_zero_reference_rejected(self):
        with pytest.raises(ValueError):
            rlne(np.ones(3), np.zeros(3))

    def test_algebraic_identity(self):
        rng = np.random.default_rng(0)
        x = rng.normal(size=16) + 1j * rng.normal(size=16)
        x_hat = rng.normal(size=16) + 1j * rng.normal(size=16)
        nx = np.linalg.norm(x)
        lhs = rlne(x_hat, x) ** 2
        rhs = 1 - 2 * np.real(np.vdot(x, x_hat)) / nx**2 + np.linalg.norm(x_hat) ** 2 / nx**2
        assert abs(lhs - rhs) < 1e-12


class TestPearson:
    def test_identical(self):
        a = np.array([1.0, 2.0, 5.0])
        assert abs(pearson(a, a) - 1.0) < 1e-12

    def test_negated(self):
        a = np.array([1.0, 2.0, 5.0])
        assert abs(pearson(a, -a) + 1.0) < 1e-12

    def test_affine_relation(self):
        assert abs(pearson(np.array([1.0, 2, 3]), np.array([2.0, 4, 6])) - 1.0) < 1e-12

    def test_affine_invariance(self):
        rng = np.random.default_rng(1)
        a = rng.normal(size=30)
        b = rng.normal(size=30)
        r = pearson(a, b)
        assert abs(pearson(3.2 * a + 1.1, b) - r) < 1e-12
        assert abs(pearson(-2.0 * a + 0.5, b) + r) < 1e-12

    def test_constant_rejected(self):
        with pytest.raises(ValueError):
            pearson(np.ones(5), np.arange(5.0))


class TestSpectrum:
    def test_constant_vector_energy_in_first_bin(self):
        s = spectrum(np.ones(16, dtype=complex))
        assert abs(s[0]) == 16.0
        assert np.max(np.abs(s[1:])) < 1e-12

    def test_on_grid_frequency_bin(self):
        model = ExponentialModel.from_arrays([1.0], [0.0], [1e9], [0.25])
        s = spectrum(synthesize(model, 256))
        assert np.argmax(np.abs(s)) == 64

    def test_parseval(self):
        rng = np.random.default_rng(2)
        x = rng.normal(size=100) + 1j * rng.normal(size=100)
        s = spectrum(x)
        assert abs(np.linalg.norm(s) ** 2 - 100 * np.linalg.norm(x) ** 2) < 1e-8


class TestHankelDiagnostics:
    def test_zero_signal(self):
        sv, nuc = hankel_diagnostics(np.zeros(15, dtype=complex))
        assert np.all(sv == 0) and nuc == 0.0

    def test_rank_one_for_single_exponential(self):
        model = ExponentialModel.from_arrays([1.0], [0.3], [60.0], [0.4])
        sv, _ = hankel_diagnostics(synthesize(model, 255))
        assert np.count_nonzero(sv > 1e-10 * sv[0]) == 1

    def test_nuclear_norm_against_eigendecomposition(self):
        # independent oracle: trace norm via eigenvalues of X^H X
        from lrhankel import hankelize

        rng = np.random.default_rng(3)
        for n in (8, 17, 32):
            x = rng.normal(size=n) + 1j * rng.normal(size=n)
            sv, nuc = hankel_diagnostics(x)
            X = hankelize(x)
            ev = np.linalg.eigvalsh(X.conj().T @ X)
            assert abs(nuc - np.sum(np.sqrt(np.maximum(ev, 0)))) < 1e-8

    def test_global_phase_invariance(self):
        rng = np.random.default_rng(4)
        x = rng.normal(size=40) + 1j * rng.normal(size=40)
        sv1, _ = hankel_diagnostics(x)
        sv2, _ = hankel_diagnostics(x * np.exp(1j * 1.234))
        assert np.max(np.abs(sv1 - sv2)) < 1e-12 * sv1[0]


class TestEsprit:
    def test_single_component_exact(self):
        model = ExponentialModel.from_arrays([1.0], [0.0], [50.0], [0.25])
        est = esprit(synthesize(model, 255), 1)
        assert abs(est.frequencies[0] - 0.25) < 1e-8
        assert abs(est.dampings[0] - 50.0) / 50.0 < 1e-6
        assert abs(est.amplitudes[0] - 1.0) < 1e-6

    def test_zero_frequency(self):
        model = ExponentialModel.from_arrays([0.8], [1.0], [40.0], [0.0])
        est = esprit(synthesize(model, 255), 1)
        assert min(est.frequencies[0], 1 - est.frequencies[0]) < 1e-8

    def test_close_frequencies_resolved(self):
        model = ExponentialModel.from_arrays(
            [1.0, 0.7], [0.0, 1.0], [80.0, 60.0], [0.2, 0.21]
        )
        est = esprit(synthesize(model, 255), 2)
        assert np.max(np.abs(est.frequencies - np.array([0.2, 0.21]))) < 1e-6

    def test_inverse_of_synthesize_on_random_models(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            j = int(rng.integers(1, 11))
            while True:
                freqs = np.sort(rng.uniform(0, 1, j))
                gaps = np.diff(np.concatenate([freqs, [freqs[0] + 1]]))
                if j == 1 or gaps.min() > 4 / 255:
                    break
            model = ExponentialModel.from_arrays(
                rng.uniform(0.05, 1, j), rng.uniform(0, 2 * np.pi, j),
                rng.uniform(10, 179.2, j), freqs,
            )
            est = esprit(synthesize(model, 255), j)
            assert np.max(np.abs(est.amplitudes - model.amplitudes) / model.amplitudes) < 1e-6
            assert np.max(np.abs(est.dampings - model.dampings) / model.dampings) < 1e-6
            dp = np.abs(est.phases - model.phases)
            assert np.max(np.minimum(dp, 2 * np.pi - dp)) < 1e-6
            df = np.abs(est.frequencies - model.frequencies)
            assert np.max(np.minimum(df, 1 - df)) < 1e-6

    def test_model_order_errors(self):
        model = ExponentialModel.from_arrays([1.0], [0.0], [50.0], [0.25])
        x = synthesize(model, 255)
        with pytest.raises(ValueError):
            esprit(x, 0)
        with pytest.raises(ValueError):
            esprit(x, 128)
        with pytest.raises(ValueError):
            esprit(x, 3)  # rank-deficient subspace for a rank-1 signal

    def test_undamped_pole_reported_as_infinite_damping(self):
        model = ExponentialModel.from_arrays([1.0], [0.2], [1e12], [0.3])
        est = esprit(synthesize(model, 255), 1)
        assert est.dampings[0] > 1e6 or math.isinf(est.dampings[0])


class TestPeaks:
    def test_single_on_grid_peak(self):
        model = ExponentialModel.from_arrays([1.0], [0.0], [1e9], [64 / 256])
        peaks = detect_peaks(spectrum(synthesize(model, 256)), floor=1.0)
        assert list(peaks.bins) == [64]
        assert abs(peaks.frequencies[0] - 0.25) < 1e-3

    def test_zero_spectrum_empty(self):
        peaks = detect_peaks(np.zeros(64, dtype=complex), floor=1.0)
        assert len(peaks) == 0

    def test_reference_model_peaks(self):
        s = spectrum(synthesize(WEAKPEAK_MODEL, 255))
        floor = 3 * 0.05 * math.sqrt(255)
        peaks = detect_peaks(s, floor)
        expected = [round(f * 255) for f in WEAKPEAK_MODEL.frequencies.tolist()]
        assert list(peaks.bins) == expected

    def test_match_identical_sets(self):
        s = spectrum(synthesize(WEAKPEAK_MODEL, 255))
        peaks = detect_peaks(s, 1.0)
        matching = match_peaks(peaks, peaks)
        assert len(matching.pairs) == len(peaks)
        assert all(d == 0 for _, _, d in matching.pairs)
        assert matching.missing == ()

    def test_empty_reconstruction_all_missing(self):
        truth = PeakSet(64, np.array([10, 30]), np.array([1.0, 2.0]), np.array([0.15, 0.47]))
        empty = PeakSet(64, np.array([], dtype=int), np.array([]), np.array([]))
        matching = match_peaks(empty, truth)
        assert matching.pairs == ()
        assert matching.missing == (0, 1)

    def test_boundary_of_matching_radius(self):
        truth = PeakSet(255, np.array([104]), np.array([1.0]), np.array([104 / 255]))
        recon = PeakSet(255, np.array([100]), np.array([1.0]), np.array([100 / 255]))
        miss = match_peaks(recon, truth, d_max=3.0)
        assert miss.missing == (0,)
        hit = match_peaks(recon, truth, d_max=4.0)
        assert hit.missing == () and hit.pairs[0][2] == 4.0

    def test_detected_truth_peaks_never_missing_against_self(self):
        s = spectrum(synthesize(WEAKPEAK_MODEL, 255))
        peaks = detect_peaks(s, 2.0)
        assert match_peaks(peaks, peaks).missing == ()


class TestPeakCorrelation:
    def test_perfect_reconstruction(self):
        s = spectrum(synthesize(WEAKPEAK_MODEL, 255))
        peaks = detect_peaks(s, 2.0)
        corr = peak_correlation(s, s, peaks, WINDOW_W_DEFAULT)
        assert np.allclose(corr, 1.0)

    def test_scale_invariance(self):
        s = spectrum(synthesize(WEAKPEAK_MODEL, 255))
        peaks = detect_peaks(s, 2.0)
        corr = peak_correlation(2.0 * s, s, peaks, WINDOW_W_DEFAULT)
        assert np.allclose(corr, 1.0)

    def test_reconstruction_beats_zero_fill_on_weakest_peak(self, weakpeak_runs):
        x = weakpeak_runs["x"]
        s_truth = spectrum(x)
        truth_peaks = detect_peaks(s_truth, 2.0)
        weakest = int(np.argmin(truth_peaks.magnitudes))
        lr, zf = [], []
        for run in weakpeak_runs["runs"]:
            lr.append(peak_correlation(spectrum(run["lrhmf"]), s_truth, truth_peaks)[weakest])
            zf.append(peak_correlation(spectrum(run["zero_fill"]), s_truth, truth_peaks)[weakest])
        assert np.mean(lr) > np.mean(zf)


class TestParameterErrors:
    def test_exact_estimate(self):
        model = ExponentialModel.from_arrays(
            [1.0, 0.5], [0.1, 2.0], [50.0, 80.0], [0.2, 0.6]
        )
        err = parameter_errors(model, model)
        assert np.all(err.as_array() == 0)

    def test_phase_wrap(self):
        truth = ExponentialModel.from_arrays([1.0], [2 * np.pi - 0.1], [50.0], [0.2])
        est = ExponentialModel.from_arrays([1.0], [0.1], [50.0], [0.2])
        err = parameter_errors(est, truth)
        assert abs(err.phase[0] - 0.2) < 1e-12

    def test_frequency_wrap(self):
        truth = ExponentialModel.from_arrays([1.0], [0.0], [50.0], [0.01])
        est = ExponentialModel.from_arrays([1.0], [0.0], [50.0], [0.99])
        err = parameter_errors(est, truth)
        assert abs(err.frequency[0] - 0.02) < 1e-12

    def test_matching_by_nearest_frequency(self):
        truth = ExponentialModel.from_arrays(
            [1.0, 0.5], [0.0, 0.0], [50.0, 60.0], [0.2, 0.7]
        )
        est = ExponentialModel.from_arrays(
            [0.48, 1.1], [0.0, 0.0], [61.0, 49.0], [0.71, 0.19]
        )
        err = parameter_errors(est, truth)
        assert np.allclose(err.amplitude, [0.1, 0.02])
        assert np.allclose(err.damping, [1.0, 1.0])

    def test_component_count_mismatch(self):
        a = ExponentialModel.from_arrays([1.0], [0.0], [50.0], [0.2])
        b = ExponentialModel.from_arrays([1.0, 1.0], [0.0, 0.0], [50.0, 60.0], [0.2, 0.4])
        with pytest.raises(ValueError):
            parameter_errors(a, b)
