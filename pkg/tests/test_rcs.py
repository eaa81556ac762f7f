"""Pipeline orchestration: exact slice, decoding sweeps, degree probe."""

import dataclasses

import numpy as np
import pytest

from rcskit.circuit import ScrambledCircuit, brickwork_circuit, probability, scramble
from rcskit.errors import PipelineFailure, ValidationError
from rcskit.haar import make_rng
from rcskit.rcs import (
    PipelineConfig,
    PipelineReport,
    corruption_sweep,
    default_probe_max_degree,
    degree_probe_report,
    minimal_degree_probe,
    probe_theta_grid,
    random_exact_rational,
    run_pipeline,
)


def outputs(report: PipelineReport) -> dict:
    d = dataclasses.asdict(report)
    d.pop("runtime_ms")
    return d


def test_config_validation():
    good = dict(n_qubits=2, m_gates=1, theta_count=5, seed=0)
    PipelineConfig(**good)
    with pytest.raises(ValidationError):
        PipelineConfig(**{**good, "theta_count": 4})  # k1+k2 = 4 needs > 4
    with pytest.raises(ValidationError):
        PipelineConfig(**{**good, "mode": "magic"})
    with pytest.raises(ValidationError):
        PipelineConfig(**{**good, "theta_range": (0.0, 0.9)})
    with pytest.raises(ValidationError):
        PipelineConfig(**{**good, "m_gates": 2})  # exact mode, multi gate
    with pytest.raises(ValidationError):
        PipelineConfig(**{**good, "corrupt_count": 1, "theta_count": 9})
    with pytest.raises(ValidationError):
        PipelineConfig(**{**good, "degree_bound": (-1, 2)})
    PipelineConfig(**{**good, "m_gates": 2, "mode": "float-least-squares"})


def test_exact_pipeline_recovers_direct_probability():
    for seed in range(10):
        cfg = PipelineConfig(n_qubits=2, m_gates=1, theta_count=5, seed=seed)
        rep = run_pipeline(cfg)
        assert rep.abs_error <= 1e-10
        assert rep.heldout_max_residual == 0.0
        assert rep.fitted_degree[0] <= 2 and rep.fitted_degree[1] <= 2
        assert rep.corruptions_planted == () and rep.corruptions_detected == ()


def test_exact_pipeline_single_gate_on_three_qubits():
    cfg = PipelineConfig(n_qubits=3, m_gates=1, theta_count=6, seed=5)
    rep = run_pipeline(cfg)
    assert rep.abs_error <= 1e-10


def test_bw_pipeline_finds_planted_corruptions():
    for seed in range(5):
        cfg = PipelineConfig(
            n_qubits=2,
            m_gates=1,
            theta_count=11,
            seed=seed,
            corrupt_count=3,
            mode="bw-decode",
        )
        rep = run_pipeline(cfg)
        assert rep.abs_error <= 1e-10
        assert rep.corruptions_detected == rep.corruptions_planted
        assert len(rep.corruptions_planted) == 3


def test_bw_without_corruption_matches_exact_fit():
    fit_cfg = PipelineConfig(n_qubits=2, m_gates=1, theta_count=7, seed=8)
    bw_cfg = dataclasses.replace(fit_cfg, mode="bw-decode")
    assert outputs(run_pipeline(fit_cfg)) == outputs(run_pipeline(bw_cfg))


def test_pipeline_determinism():
    cfg = PipelineConfig(
        n_qubits=2, m_gates=1, theta_count=9, seed=13, corrupt_count=2, mode="bw-decode"
    )
    assert outputs(run_pipeline(cfg)) == outputs(run_pipeline(cfg))
    other = dataclasses.replace(cfg, seed=14)
    assert outputs(run_pipeline(other)) != outputs(run_pipeline(cfg))


def test_pipeline_sample_rows():
    rows: list = []
    cfg = PipelineConfig(
        n_qubits=2, m_gates=1, theta_count=9, seed=3, corrupt_count=2, mode="bw-decode"
    )
    rep = run_pipeline(cfg, sample_rows=rows)
    assert len(rows) == 9
    thetas = [r[0] for r in rows]
    assert thetas == sorted(thetas) and len(set(thetas)) == 9
    assert all(0.05 <= th <= 0.95 for th in thetas)
    flagged = tuple(i for i, r in enumerate(rows) if r[2])
    assert flagged == rep.corruptions_planted


def test_float_pipeline_reports_residuals():
    cfg = PipelineConfig(
        n_qubits=3,
        m_gates=4,
        theta_count=41,
        seed=7,
        degree_bound=(6, 6),
        mode="float-least-squares",
    )
    rep = run_pipeline(cfg)
    # the (6,6) model is only an approximation for m=4; residuals are honest
    assert 0.0 < rep.heldout_max_residual < 0.5
    assert rep.abs_error < 0.5
    assert outputs(run_pipeline(cfg)) == outputs(rep)


def test_pipeline_failure_carries_stage():
    # a (0,0) bound cannot represent the true (2,2) rational: decode must fail
    cfg = PipelineConfig(
        n_qubits=2,
        m_gates=1,
        theta_count=11,
        seed=2,
        corrupt_count=1,
        degree_bound=(0, 0),
        mode="bw-decode",
    )
    with pytest.raises(PipelineFailure) as info:
        run_pipeline(cfg)
    assert info.value.stage == "decode"
    fit_cfg = dataclasses.replace(cfg, corrupt_count=0, mode="exact-fit")
    with pytest.raises(PipelineFailure) as info:
        run_pipeline(fit_cfg)
    assert info.value.stage == "fit"


# -- corruption sweep -------------------------------------------------------------


def test_sweep_single_gate_real_circuit():
    cfg = PipelineConfig(
        n_qubits=2, m_gates=1, theta_count=13, seed=6, mode="bw-decode"
    )
    reports = corruption_sweep(cfg, [0, 1, 2])
    for t, rep in zip([0, 1, 2], reports):
        assert rep.abs_error <= 1e-10
        assert len(rep.corruptions_planted) == t
        assert rep.corruptions_detected == rep.corruptions_planted


def test_sweep_synthetic_for_multi_gate():
    cfg = PipelineConfig(
        n_qubits=3,
        m_gates=3,
        theta_count=19,
        seed=9,
        degree_bound=(6, 6),
        mode="float-least-squares",
    )
    reports = corruption_sweep(cfg, [0, 1, 3])
    for t, rep in zip([0, 1, 3], reports):
        assert rep.abs_error == 0.0  # generator-side truth, exact decode
        assert rep.heldout_max_residual == 0.0
        assert len(rep.corruptions_planted) == t
        assert rep.corruptions_detected == rep.corruptions_planted


def test_sweep_budget_overflow_rejected():
    cfg = PipelineConfig(
        n_qubits=3,
        m_gates=3,
        theta_count=19,
        seed=9,
        degree_bound=(6, 6),
        mode="float-least-squares",
    )
    with pytest.raises(ValidationError):
        corruption_sweep(cfg, [4])  # 19 <= 6+6+8
    with pytest.raises(ValidationError):
        corruption_sweep(cfg, [-1])


def test_random_exact_rational_finite_at_one():
    rng = make_rng(17)
    for _ in range(20):
        f = random_exact_rational(rng, 4, 4)
        assert f.num.degree <= 4 and f.den.degree <= 4
        f(1)  # must not raise


# -- degree probe -------------------------------------------------------------------


def test_probe_grid_validation():
    with pytest.raises(ValidationError):
        probe_theta_grid(2)
    with pytest.raises(ValidationError):
        probe_theta_grid(10, 0.5, 0.5)
    grid = probe_theta_grid(11, 0.1, 0.9)
    assert len(grid) == 11 and grid[0] == 0.1 and grid[-1] == 0.9


def test_probe_constant_function_returns_degree_zero():
    # identity pencils make the deformation theta-independent: p0 is constant
    ident = ScrambledCircuit(brickwork_circuit(2, 2, 30), 0, (np.eye(4),) * 2)
    d, resid = minimal_degree_probe(ident, 5, probe_theta_grid(30))
    assert d == 0 and resid <= 1e-6


def test_probe_single_gate_low_degree():
    sc = scramble(brickwork_circuit(2, 1, 31), 32)
    d, resid = minimal_degree_probe(sc, 10, probe_theta_grid(60))
    assert d <= 2 and resid <= 1e-6


def test_probe_sentinel_when_degree_insufficient():
    sc = scramble(brickwork_circuit(3, 3, 33), 34)
    d, resid = minimal_degree_probe(sc, 1, probe_theta_grid(30))
    assert d == 2  # sentinel max_degree + 1
    assert resid > 1e-6


def test_probe_point_budget_guard():
    sc = scramble(brickwork_circuit(2, 1, 35), 36)
    with pytest.raises(ValidationError):
        minimal_degree_probe(sc, 10, probe_theta_grid(20))  # needs 42 points


def test_probe_best_so_far_is_monotone():
    sc = scramble(brickwork_circuit(3, 2, 37), 38)
    rep = degree_probe_report(sc, 12, probe_theta_grid(60))
    best = [row[2] for row in rep.table]
    assert all(b2 <= b1 + 1e-12 for b1, b2 in zip(best, best[1:]))
    raw = [row[1] for row in rep.table]
    assert all(b <= r for r, b in zip(raw, best))


def test_probe_report_fields_and_accuracy():
    sc = scramble(brickwork_circuit(3, 2, 39), 40)
    rep = degree_probe_report(sc, 30, probe_theta_grid(130, 0.05, 0.98))
    assert not rep.saturated
    assert rep.heldout_residual <= 1e-6
    assert rep.abs_error <= 1e-3
    assert abs(rep.direct_p0 - probability(sc.base, "000")) == 0.0
    data = rep.to_jsonable()
    assert data["chosen_degree"] == rep.chosen_degree
    assert len(data["table"]) == 31


def test_probe_determinism():
    sc = scramble(brickwork_circuit(3, 2, 41), 42)
    grid = probe_theta_grid(60)
    assert minimal_degree_probe(sc, 8, grid) == minimal_degree_probe(sc, 8, grid)


def test_default_probe_cap():
    assert default_probe_max_degree(1) == 54
    assert default_probe_max_degree(2) == 108
    assert default_probe_max_degree(3) == 120
