import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sarymsakov.construct import gallery, r_matrix, random_in_class
from sarymsakov.matrix import StochasticMatrix
from sarymsakov.simulate import (
    PoolClassViolation,
    ScheduleSpec,
    dobrushin,
    rank_one_defect,
    simulate,
    bounded_gap_schedule,
)

CYCLE3 = StochasticMatrix(np.eye(3)[[1, 2, 0]])
UNIFORM3 = StochasticMatrix(np.full((3, 3), 1 / 3))


def random_stoch(rng, n):
    w = rng.random((n, n)) * (rng.random((n, n)) < 0.6)
    w[np.arange(n), rng.integers(n, size=n)] += rng.random(n) + 0.1
    return w / w.sum(axis=1, keepdims=True)


class TestMetrics:
    def test_defect(self):
        assert rank_one_defect(UNIFORM3) == 0
        assert rank_one_defect(np.eye(3)) == 1
        c = np.array([0.2, 0.5, 0.3])
        assert rank_one_defect(np.outer(np.ones(4), c)) == 0

    def test_dobrushin(self):
        assert dobrushin(np.eye(3)) == 1
        assert dobrushin(UNIFORM3) == pytest.approx(0, abs=1e-15)
        m = random_in_class("scrambling", 4, seed=5)
        assert 0 < dobrushin(m) < 1

    def test_dobrushin_below_one_iff_scrambling(self, rng):
        from sarymsakov.classes import is_scrambling
        from sarymsakov.matrix import pattern_of
        for _ in range(200):
            m = StochasticMatrix(random_stoch(rng, 4))
            assert (dobrushin(m) < 1) == is_scrambling(pattern_of(m))

    @settings(max_examples=200)
    @given(st.integers(2, 7), st.integers(0, 2**32 - 1))
    def test_submultiplicative(self, n, seed):
        rng = np.random.default_rng(seed)
        p, q = random_stoch(rng, n), random_stoch(rng, n)
        assert dobrushin(q @ p) <= dobrushin(q) * dobrushin(p) + 1e-12
        assert rank_one_defect(q @ p) <= dobrushin(q) * rank_one_defect(p) + 1e-12


class TestSchedule:
    def test_gap_one(self):
        assert set(bounded_gap_schedule(4, [2], 1, 50, 0)) == {2}

    @pytest.mark.parametrize("gap", [2, 3, 5])
    @pytest.mark.parametrize("seed", range(5))
    def test_windows(self, gap, seed):
        seq = bounded_gap_schedule(5, [1, 3], gap, 300, seed)
        for i in range(len(seq) - gap + 1):
            assert {1, 3} & set(seq[i:i + gap])

    def test_t3_steps9(self):
        seq = bounded_gap_schedule(3, [0], 3, 9, 1)
        assert len(seq) == 9 and all(0 in seq[i:i + 3] for i in range(7))

    def test_all_marked(self):
        seq = bounded_gap_schedule(3, [0, 1, 2], 2, 100, 4)
        assert len(seq) == 100 and set(seq) <= {0, 1, 2}

    def test_deterministic(self):
        assert bounded_gap_schedule(4, [0], 3, 100, 9) == bounded_gap_schedule(4, [0], 3, 100, 9)

    @pytest.mark.parametrize("args", [(3, [], 2), (3, [3], 2), (3, [0], 0)])
    def test_bad_arguments(self, args):
        with pytest.raises(ValueError):
            bounded_gap_schedule(*args, 10, 0)


class TestSimulate:
    def test_scrambling_constant_decays_geometrically(self):
        m = random_in_class("scrambling", 4, seed=8)
        tau = dobrushin(m)
        r = simulate(ScheduleSpec([m], mode="custom", sequence=[0], steps=2000))
        assert r.converged and r.final_defect <= 1e-10
        prev = 1.0
        for _, d in r.defect_trace:
            assert d <= tau * prev + 1e-12
            prev = d

    def test_limit_row(self):
        m = random_in_class("scrambling", 4, seed=8)
        r = simulate(ScheduleSpec([m], mode="custom", sequence=[0], steps=2000))
        c = np.array(r.limit_row)
        assert (c >= 0).all() and abs(c.sum() - 1) < 1e-10
        np.testing.assert_allclose(c @ m.entries, c, atol=1e-9)

    def test_three_cycle_never_converges(self):
        r = simulate(ScheduleSpec([CYCLE3], mode="custom", sequence=[0], steps=300))
        assert not r.converged and r.limit_row is None
        assert all(d == 1.0 for _, d in r.defect_trace)

    @pytest.mark.parametrize("gap", [2, 3, 5])
    def test_bounded_gap(self, gap):
        s = random_in_class("sarymsakov", 3, seed=gap)
        r = simulate(ScheduleSpec([r_matrix(3), s], [1], gap=gap, steps=500, seed=gap))
        assert r.converged and r.final_defect <= 1e-10

    def test_pool_check(self):
        with pytest.raises(PoolClassViolation):
            simulate(ScheduleSpec([r_matrix(3)], [0], gap=2, steps=10))
        # ({1,2},{3}) maps to {1},{2}: disjoint and shrinking
        not_w = StochasticMatrix([[1, 0, 0], [1, 0, 0], [0, 1, 0]])
        with pytest.raises(PoolClassViolation):
            simulate(ScheduleSpec([not_w, UNIFORM3], [1], gap=2, steps=10))

    def test_patsym_alternation(self):
        mats = list(gallery("patsym_pair").matrices)
        for seq in ([0, 1], [1, 0]):
            r = simulate(ScheduleSpec(mats, mode="custom", sequence=seq, steps=10_000), report_every=1)
            assert not r.converged
            tail = [d for _, d in r.defect_trace[-100:]]
            assert min(tail) > 0.1

    def test_row_sum_drift(self, rng):
        pool = [StochasticMatrix(random_stoch(rng, 6)) for _ in range(4)]
        spec = ScheduleSpec(pool, mode="iid", steps=10_000, seed=1)
        prod = np.eye(6)
        for i in spec.indices():
            prod = pool[i].entries @ prod
        assert np.abs(prod.sum(axis=1) - 1).max() <= 1e-8

    def test_renormalise(self, caplog):
        with caplog.at_level("INFO"):
            simulate(ScheduleSpec([CYCLE3], mode="custom", sequence=[0], steps=50),
                     tolerance=1e-300, renormalize_every=10)
        assert "renormalised" in caplog.text

    def test_report_every(self):
        r = simulate(ScheduleSpec([CYCLE3], mode="custom", sequence=[0], steps=100), report_every=25)
        assert [s for s, _ in r.defect_trace] == [25, 50, 75, 100]

    def test_trace_csv(self):
        r = simulate(ScheduleSpec([CYCLE3], mode="custom", sequence=[0], steps=2))
        assert r.trace_csv() == "step,defect\n1,1.0\n2,1.0\n"

    def test_deterministic(self):
        s = random_in_class("sarymsakov", 3, seed=0)
        spec = ScheduleSpec([r_matrix(3), s], [1], gap=3, steps=200, seed=4)
        assert simulate(spec) == simulate(spec)

    def test_from_dict(self):
        spec = ScheduleSpec.from_dict({"mode": "iid", "steps": 5, "seed": 2}, [UNIFORM3])
        assert spec.indices() == [0] * 5
        with pytest.raises(ValueError):
            ScheduleSpec.from_dict({"bogus": 1}, [UNIFORM3])
