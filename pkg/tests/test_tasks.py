"""Experiment drivers: metrics, recall, patches, classification."""

import numpy as np
import pytest

from intesn import data_io, synthetic
from intesn.tasks import (
    ClassifyConfig,
    PatchesConfig,
    RecallConfig,
    decoded_information,
    nrmse,
    run_classify,
    run_patches,
    run_recall,
    spearman_rho,
)
from intesn.tasks.classify import fit_model as classify_fit_model, model_predict
from intesn.tasks.recall import large_multiplier


def channel_information_oracle(p: float, d: int) -> float:
    """Exact enumeration of the symmetric-channel joint distribution."""
    total = 0.0
    for x in range(d):
        for y in range(d):
            pxy = (p if x == y else (1.0 - p) / (d - 1)) / d
            if pxy > 0:
                total += pxy * np.log2(pxy / (1.0 / d * 1.0 / d))
    return total


class TestMetrics:
    def test_perfect_channel_sixteen_delays(self):
        assert decoded_information([1.0] * 16, 27) == pytest.approx(16 * np.log2(27), abs=1e-9)
        assert decoded_information([1.0] * 16, 27) == pytest.approx(76.078, abs=1e-3)

    def test_chance_gives_zero(self):
        assert decoded_information([1 / 27], 27) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("p", [0.2, 0.5, 0.9])
    def test_matches_enumeration_oracle(self, p):
        assert decoded_information([p], 27) == pytest.approx(channel_information_oracle(p, 27), abs=1e-9)

    def test_half_accuracy_value(self):
        # log2(27) + 0.5 log2 0.5 + 0.5 log2(0.5/26) = 1.4047...
        assert decoded_information([0.5], 27) == pytest.approx(1.4047, abs=1e-3)

    def test_monotone_above_chance(self):
        values = [decoded_information([p], 27) for p in np.linspace(1 / 27, 1.0, 20)]
        assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))

    def test_nrmse_basics(self):
        truth = np.sin(np.arange(50) / 3.0)
        assert nrmse(truth, truth) == 0.0
        assert nrmse(np.full(50, truth.mean()), truth) == pytest.approx(1.0)
        assert nrmse(truth + 0.3, truth) == pytest.approx(0.3 / truth.std())

    def test_nrmse_zero_variance_rejected(self):
        with pytest.raises(ValueError, match="variance"):
            nrmse(np.ones(5), np.ones(5))

    def test_spearman_perfectly_decreasing(self):
        assert spearman_rho(np.arange(10.0), -np.arange(10.0)) == pytest.approx(-1.0)


class TestRecall:
    def test_result_shape(self):
        cfg = RecallConfig(engine="intesn", n=100, seeds=[0, 1], train_len=800, washout=100, test_len=800)
        result = run_recall(cfg)
        run = result.runs[0]
        assert run.metrics["accuracy"]._array().shape == (2, 16)
        assert run.metrics["accuracy"].index == list(range(16))
        assert "decoded_information_bits_mean" in run.aggregates

    def test_deterministic(self):
        cfg = RecallConfig(engine="intesn", n=100, seeds=[3], train_len=600, washout=100, test_len=600)
        a = run_recall(cfg).to_dict()
        b = run_recall(cfg).to_dict()
        assert a == b

    def test_shuffled_control_near_chance(self):
        cfg = RecallConfig(
            engine="intesn", n=100, seeds=[0, 1], train_len=2000, washout=500,
            test_len=2000, shuffled_control=True,
        )
        acc = run_recall(cfg).runs[0].metrics["accuracy"].mean()
        assert abs(acc.mean() - 1 / 27) < 0.02

    def test_accuracy_trend_negative(self):
        cfg = RecallConfig(engine="intesn", n=200, seeds=[0], train_len=2000, washout=500, test_len=2000)
        acc = run_recall(cfg).runs[0].metrics["accuracy"].mean()
        assert spearman_rho(np.arange(16.0), acc) < 0

    def test_large_multiplier_bit_budget(self):
        assert large_multiplier(3) == 10  # 3 bits per neuron
        assert large_multiplier(7) == 8  # 4 bits per neuron
        assert large_multiplier(11) == 6  # 5 bits per neuron
        cfg = RecallConfig(engine="intesn-large", n=100, seeds=[0])
        assert cfg.effective_n == 1000

    def test_invalid_configs(self):
        with pytest.raises(ValueError, match="n=0"):
            RecallConfig(n=0)
        with pytest.raises(ValueError, match="delay"):
            RecallConfig(max_delay=600, washout=500, train_len=1000)
        with pytest.raises(ValueError, match="engine"):
            RecallConfig(engine="quantum")

    def test_parallel_seeds_match_serial(self):
        cfg = RecallConfig(engine="intesn", n=80, seeds=[0, 1, 2], train_len=600, washout=100, test_len=600)
        assert run_recall(cfg, jobs=3).to_dict() == run_recall(cfg, jobs=1).to_dict()


class TestPatches:
    def test_two_by_two_decode_accuracy(self):
        # dot(state, base_i)/n estimates value_i; Monte-Carlo verified within
        # +-0.05 at n=10000 for a single stored image
        pixels = np.array([[1.0, 0.0], [1.0, 0.0]]).reshape(2, 2, 1)
        img = data_io.ImagePatch(width=2, height=2, channels=1, pixels=pixels)
        result = run_patches([img], PatchesConfig(n=10000, kappa=3, seeds=[0], keep_images=True))
        run = result.runs[0]
        assert run.metrics["mse"].mean()[0] < 0.05**2
        recon = np.asarray(run.images[0]["reconstructed"]).reshape(-1)
        assert np.abs(recon - np.array([1.0, 0.0, 1.0, 0.0])).max() <= 0.05

    def test_error_grows_with_delay(self):
        rng = np.random.default_rng(0)
        images = [
            data_io.ImagePatch(width=4, height=4, channels=1, pixels=rng.random((4, 4, 1)))
            for _ in range(3)
        ]
        result = run_patches(images, PatchesConfig(n=4000, kappa=3, seeds=list(range(5)), keep_images=False))
        mse = result.runs[0].metrics["mse"].mean()
        assert mse[0] < mse[1] < mse[2]

    def test_shape_mismatch_rejected(self):
        a = data_io.ImagePatch(width=2, height=2, channels=1, pixels=np.zeros((2, 2, 1)))
        b = data_io.ImagePatch(width=3, height=1, channels=1, pixels=np.zeros((1, 3, 1)))
        with pytest.raises(ValueError, match="disagree"):
            run_patches([a, b], PatchesConfig(n=100, kappa=3, seeds=[0]))

    def test_pixel_budget(self):
        big = data_io.ImagePatch(width=80, height=80, channels=1, pixels=np.zeros((80, 80, 1)))
        with pytest.raises(ValueError, match="budget"):
            run_patches([big], PatchesConfig(n=100, kappa=3, seeds=[0]))

    def test_bundled_patches_load(self):
        import importlib.resources

        root = importlib.resources.files("intesn.data").joinpath("patches")
        names = sorted(p.name for p in root.iterdir() if p.name.endswith(".ppm"))
        assert len(names) == 3
        for name in names:
            patch = data_io.load_ppm(str(root.joinpath(name)))
            assert (patch.width, patch.height) == (16, 16)


class TestClassify:
    def test_separable_both_engines(self):
        ds = synthetic.separable_two_class(seed=0)
        for engine in ("intesn", "esn"):
            cfg = ClassifyConfig(engine=engine, n=200, seeds=[0, 1])
            acc = run_classify(ds, cfg).runs[0].aggregates["accuracy_mean"]
            assert acc == 1.0

    def test_shuffled_control_near_chance(self):
        # per-seed label shuffles on a many-class set; coarse 2-class controls
        # snap to 0/1 because ridge still finds the true cluster direction
        ds = synthetic.stand_in("swedish_leaf", seed=0)
        cfg = ClassifyConfig(engine="intesn", n=200, seeds=list(range(5)), shuffled_control=True)
        acc = run_classify(ds, cfg).runs[0].aggregates["accuracy_mean"]
        assert abs(acc - 1 / 15) < 0.05

    def test_large_at_least_same_n_on_noisy_suite(self):
        ds = synthetic.noisy_two_class(seed=0)
        accs = {}
        for engine in ("intesn", "intesn-large"):
            cfg = ClassifyConfig(engine=engine, seeds=list(range(5)))
            accs[engine] = run_classify(ds, cfg, jobs=2).runs[0].aggregates["accuracy_mean"]
        assert accs["intesn-large"] >= accs["intesn"]

    def test_unseen_test_class_rejected(self):
        ds = synthetic.separable_two_class(seed=0, n_train=10, n_test=10)
        broken = data_io.TimeSeriesDataset(
            name="broken", variables=1, classes=3,
            train=ds.train, test=[(ds.test[0][0], 2)], label_names=["0", "1", "2"],
        )
        with pytest.raises(ValueError, match="test split but not in training"):
            run_classify(broken, ClassifyConfig(engine="intesn", n=100, seeds=[0]))

    def test_multivariate_stand_in(self):
        ds = synthetic.stand_in("character_trajectories", seed=0)
        cfg = ClassifyConfig(engine="intesn", n=300, seeds=[0])
        acc = run_classify(ds, cfg).runs[0].aggregates["accuracy_mean"]
        assert acc > 1.0 / ds.classes + 0.2  # far above chance on the easy stand-in

    def test_model_round_trip_predictions(self, tmp_path):
        ds = synthetic.separable_two_class(seed=1, n_train=20, n_test=10)
        cfg = ClassifyConfig(engine="intesn", n=150, seeds=[0])
        model = classify_fit_model(ds, cfg, seed=0)
        path = str(tmp_path / "c.model")
        data_io.save_model(model, path)
        loaded = data_io.load_model(path)
        for series, _ in ds.test:
            assert model_predict(loaded, series) == model_predict(model, series)

    def test_esn_model_round_trip(self, tmp_path):
        ds = synthetic.separable_two_class(seed=2, n_train=16, n_test=8)
        cfg = ClassifyConfig(engine="esn", n=64, seeds=[0])
        model = classify_fit_model(ds, cfg, seed=0)
        path = str(tmp_path / "e.model")
        data_io.save_model(model, path)
        loaded = data_io.load_model(path)
        for series, _ in ds.test:
            assert model_predict(loaded, series) == model_predict(model, series)
