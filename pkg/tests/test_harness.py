import numpy as np
import pytest

from pullstream.harness import (
    PRESETS,
    SweepParameter,
    SweepSpec,
    compare,
    figure_preset,
    preset_seeds,
    relative_gain,
    run_point,
    sweep,
)
from pullstream.params import SchemeSpec, SystemParams
from pullstream.sim import SimConfig

DESK = SystemParams(N=100, n=40, v=10)
PF = SchemeSpec("pf", "latest", "useful")


class TestCompare:
    def test_identical(self):
        e = compare([0.1, 0.5], [0.1, 0.5])
        assert e.mae == 0.0 and e.max_abs_error == 0.0

    def test_hand_values(self):
        e = compare([0.1, 0.5], [0.2, 0.5])
        assert e.mae == pytest.approx(0.05) and e.max_abs_error == pytest.approx(0.1)
        assert e.residuals.size == 2

    def test_symmetric(self):
        rng = np.random.default_rng(0)
        a, b = rng.random(40), rng.random(40)
        assert compare(a, b).mae == compare(b, a).mae
        assert compare(a, b).max_abs_error == compare(b, a).max_abs_error

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            compare([0.1, 0.2], [0.1])


class TestSweep:
    def test_single_neighbor_value_equals_base(self):
        base = SimConfig(DESK, PF)
        [r] = sweep(SweepSpec("neighbor_count", [10], base))
        assert np.array_equal(r.model.values, run_point(DESK, PF).model.values)

    def test_reply_number_is_monotone(self):
        reports = sweep(SweepSpec(SweepParameter.REPLY_NUMBER, [1, 2, 3], SimConfig(DESK, PF)))
        playout = [r.playout_probability for r in reports]
        assert playout == sorted(playout)
        assert reports[1].spec.reply_mode.value == "multi" and reports[1].params.U == 2

    def test_split_point_endpoints(self):
        base = SimConfig(DESK, SchemeSpec("pushpull"))
        reports = sweep(SweepSpec("split_point", [1, 40], base))
        assert [r.convergence["d"] for r in reports] == [1, 40]
        assert reports[0].playout_probability < reports[1].playout_probability

    def test_target_sweep_moves_delay_only(self):
        reports = sweep(SweepSpec("playout_delay_target", [0.2, 0.5], SimConfig(DESK, PF)))
        assert np.array_equal(reports[0].model.values, reports[1].model.values)
        assert reports[0].playout_delay < reports[1].playout_delay

    def test_rejects_invalid_point(self):
        with pytest.raises(ValueError):
            SweepSpec("neighbor_count", [200], SimConfig(DESK, PF))
        with pytest.raises(ValueError):
            SweepSpec("playout_delay_target", [1.5], SimConfig(DESK, PF))
        with pytest.raises(ValueError):
            SweepSpec("neighbor_count", [], SimConfig(DESK, PF))

    def test_parallel_matches_serial(self):
        spec = SweepSpec("neighbor_count", [4, 8], SimConfig(DESK, PF))
        a, b = sweep(spec), sweep(spec, workers=2)
        assert all(np.array_equal(x.model.values, y.model.values) for x, y in zip(a, b))


class TestRunPoint:
    def test_model_and_sim(self):
        params = SystemParams(N=30, n=10, v=4)
        r = run_point(params, PF, seeds=(1, 2), slots=80, warmup=20)
        assert r.errors is not None and r.errors.residuals.size == 10
        assert r.empirical.sample_count == 2 * 30 * 60
        assert r.config_echo()["seeds"] == [1, 2]

    def test_model_only_has_no_errors(self):
        r = run_point(DESK, PF)
        assert r.errors is None and r.empirical is None
        assert "seeds" not in r.config_echo()

    def test_sim_only_reports_empirical_playout(self):
        r = run_point(SystemParams(N=30, n=10, v=4), PF, model=False, seeds=(3,), slots=60, warmup=10)
        assert r.model is None and r.playout_probability == r.sim_playout_probability


class TestPresets:
    @pytest.mark.parametrize(
        "name, count",
        [("fig3", 9), ("fig4a", 6), ("fig4b", 6 * 14), ("fig5", 6), ("fig6", 6 * 6), ("fig7a", 40), ("fig7b", 2)],
    )
    def test_model_report_counts(self, name, count):
        reports = figure_preset(name, simulate_runs=False)
        assert len(reports) == count
        assert all(r.model is not None for r in reports)

    def test_simulated_preset(self):
        reports = figure_preset("fig7b", replications=2, slots=120, warmup=40)
        assert all(r.empirical is not None and r.errors is not None for r in reports)
        assert reports[0].seeds == preset_seeds("fig7b", 2)

    def test_push_pull_gain(self):
        assert relative_gain(figure_preset("fig7b", simulate_runs=False)) >= 0.10

    def test_unknown(self):
        with pytest.raises(ValueError, match="fig3"):
            figure_preset("fig9")

    def test_seeds_are_disjoint_across_presets(self):
        seen = [set(preset_seeds(p)) for p in PRESETS]
        assert sum(len(s) for s in seen) == len(set().union(*seen))
