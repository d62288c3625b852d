import json
import math

import numpy as np
import pytest

from regslep import rng
from regslep.csvio import read_csv
from regslep.experiment import (
    ExperimentConfig,
    emit_reports,
    generate_truth,
    run_experiment,
    sample_rhs,
)
from regslep.operators import forward_values


def test_truth_without_noise():
    assert np.array_equal(generate_truth(101, 5, 0.0), 1.0 / np.arange(1, 102))


def test_truth_is_deterministic():
    a = generate_truth(101, 42)
    assert np.array_equal(a, generate_truth(101, 42))
    assert not np.array_equal(a, generate_truth(101, 43))


def _splitmix_word(seed, stream, counter):
    # pure-integer reference implementation
    mask, golden = 2**64 - 1, 0x9E3779B97F4A7C15

    def mix(z):
        z &= mask
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
        return z ^ (z >> 31)

    return mix(mix(seed + (stream + 1) * golden) + (counter + 1) * golden)


def test_generator_matches_integer_reference():
    for seed, stream, c in [(0, 0, 0), (12345, 1, 7), (2**64 - 1, 0, 3)]:
        assert int(rng.random_words(seed, stream, [c])[0]) == _splitmix_word(seed, stream, c)
    assert int(rng.random_words(0, 0, [0])[0]) == 12035550249420947055
    assert rng.normals(0, 0, 2).tolist() == [-0.2788749225862037, -0.8810646738621364]


def test_truth_mean_monte_carlo():
    seeds = np.arange(100_000, dtype=np.uint64)
    F = generate_truth(101, seeds)
    k = np.arange(1, 102)
    mean = F.mean(axis=0)
    sem = (1.0 / k) / math.sqrt(seeds.size)
    assert np.all(np.abs(mean - 1.0 / k) < 3.5 * sem)


def test_normals_moments_and_streams():
    z = rng.normals(7, rng.COEFFICIENT_NOISE, 200_001)
    assert z.shape == (200_001,)
    assert abs(z.mean()) < 0.01 and abs(z.std() - 1) < 0.01
    other = rng.normals(7, rng.DATA_NOISE, 10)
    assert not np.allclose(z[:10], other)
    # each draw is independent of how many are requested
    assert np.array_equal(rng.normals(7, 0, 5), z[:5])
    u = rng.uniforms(3, 0, np.arange(10_000))
    assert u.min() > 0 and u.max() <= 1


def test_rhs_without_noise(identity_instance):
    F = generate_truth(101, 1)
    G = sample_rhs(identity_instance, F, 0.0, 1)
    assert np.array_equal(G.samples, forward_values(identity_instance.operator, F, identity_instance.region.nodes))


def test_rhs_noise_variance(identity_instance):
    F = generate_truth(101, 2)
    exact = sample_rhs(identity_instance, F, 0.0, 2).samples
    noisy = sample_rhs(identity_instance, F, 0.01, 2).samples
    assert np.var(noisy - exact) == pytest.approx(1e-4, rel=0.2)


def test_ill_posed_data_smaller_than_field(ill_posed_instance):
    F = generate_truth(101, 0, 0.0)
    x = np.linspace(0, 2 * math.pi, 401)
    field = F @ ill_posed_instance.operator.u_basis.evaluate(x)
    G = sample_rhs(ill_posed_instance, F, 0.01, 0).samples
    assert np.abs(G).max() < np.abs(field).max()


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(scales=())
    with pytest.raises(ValueError):
        ExperimentConfig(scales=(3, 2))
    with pytest.raises(ValueError):
        ExperimentConfig(eval_count=1)
    with pytest.raises(ValueError):
        ExperimentConfig(noise_data_amp=-1)
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict({"sed": 1})
    cfg = ExperimentConfig(seed=9)
    assert ExperimentConfig.from_dict(cfg.to_dict()) == cfg
    assert cfg.digest == ExperimentConfig(seed=9).digest != ExperimentConfig(seed=8).digest


def test_rejects_coupled_problem():
    cfg = ExperimentConfig(problem={"problem": "coupled", "L": 1, "n_theta": 4, "n_phi": 8})
    with pytest.raises(ValueError):
        run_experiment(cfg)


def test_noiseless_identity_rms_decreases_then_stagnates(identity_system):
    cfg = ExperimentConfig(noise_coeff_std=0.0, noise_data_amp=0.0)
    rep = run_experiment(cfg, identity_system)
    rms = np.array(rep.rms)
    assert np.all(np.diff(rms[:6]) < 0)
    assert rms[5] == rms[6]


def test_identity_noise_scale_six_order(identity_system):
    rep = run_experiment(ExperimentConfig(seed=0), identity_system)
    assert 1e-4 < rep.rms[5] < 1e-2
    assert rep.metadata["eval_points_in_region"] == 201


def test_ill_posed_noise_scale_six_order(ill_posed_system, identity_system):
    cfg = ExperimentConfig(problem={"problem": "ill_posed"}, seed=0)
    ill = run_experiment(cfg, ill_posed_system)
    ident = run_experiment(ExperimentConfig(seed=0), identity_system)
    assert 1e-2 < ill.rms[5] < 1.0
    assert ill.rms[5] > ident.rms[5]


def test_emit_reports(tmp_path, identity_system):
    cfg = ExperimentConfig(seed=4, scales=(2, 6, 7))
    files = emit_reports(run_experiment(cfg, identity_system), tmp_path / "a")
    again = emit_reports(run_experiment(cfg), tmp_path / "b")
    assert [f.name for f in files] == [
        "spectrum.csv", "solution_2.csv", "solution_6.csv", "solution_7.csv", "errors.csv", "config.json"
    ]
    for f, g in zip(files, again):
        assert f.read_bytes() == g.read_bytes()
    header, rows = read_csv(tmp_path / "a" / "errors.csv")
    assert header == ["J", "rms"] and len(rows) == 3
    header, rows = read_csv(tmp_path / "a" / "solution_6.csv")
    assert header == ["x", "truth", "approx"] and len(rows) == 401
    assert (tmp_path / "a" / "solution_6.csv").read_text().split("\n", 1)[1] == (
        tmp_path / "a" / "solution_7.csv"
    ).read_text().split("\n", 1)[1]
    echo = json.loads((tmp_path / "a" / "config.json").read_text())
    assert echo["config"]["seed"] == 4 and echo["metadata"]["config_hash"] == cfg.digest


def test_emit_reports_unwritable(tmp_path, identity_system):
    rep = run_experiment(ExperimentConfig(scales=(1,)), identity_system)
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError, match="cannot create"):
        emit_reports(rep, blocker / "sub")


def test_sphere_experiment_runs():
    cfg = ExperimentConfig(
        problem={"problem": "downward", "L": 3, "n_theta": 12, "n_phi": 24},
        eval_count=9,
        scales=(1, 4),
    )
    rep = run_experiment(cfg)
    assert rep.points.shape == (162, 2)
    assert all(r >= 0 for r in rep.rms)
