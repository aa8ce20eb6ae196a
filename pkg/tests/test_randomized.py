import json
import math
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats

from parking import laws
from parking import randomized as rz
from parking.enumerators import count_pf, enumerate_pf
from parking.errors import InputError, NoFeasibleFirst
from parking.pfcore import (
    ParkingFunction, displacement, is_parking_function, lucky_count, segment_decomposition,
    unattempted_spots,
)
from parking.rng import RandomSource
from parking.sampling import (
    circular_empty_spots, displacements, linear_holes, lucky_counts, repeats, sample_pf,
    sample_pf_batch, sample_pf_stream,
)

from conftest import parking_functions


def circular_park(prefs, n):
    """Reference: park on the (n + 1)-cycle one car at a time."""
    taken = [False] * (n + 2)
    for p in prefs:
        s = p
        while taken[s]:
            s = s % (n + 1) + 1
        taken[s] = True
    return tuple(not taken[k] for k in range(1, n + 2))


class TestRandomSource:
    def test_golden_stream(self):
        # fixed by the PCG64 + SeedSequence specification; identical on every platform
        assert [int(x) for x in RandomSource(0).raw(3)] == [
            17394127715520444142, 5835390491061343638, 13324868866364183597]
        assert RandomSource(0).integers(10, 8).tolist() == [2, 8, 7, 7, 3, 5, 4, 7]
        assert [int(x) for x in RandomSource(12345, worker=2).raw(2)] == [
            2607249216531960581, 3895362212411196112]

    def test_spawn_is_deterministic_and_distinct(self):
        a, b = RandomSource(9).spawn(1), RandomSource(9).spawn(1)
        assert a.raw(4).tolist() == b.raw(4).tolist()
        assert RandomSource(9).spawn(2).raw(4).tolist() != RandomSource(9).spawn(1).raw(4).tolist()

    def test_rejection_is_unbiased(self):
        # with bound 3 * 2^61 plain modulo reduction would put mass 3/4 below 2^62
        bound = 3 << 61
        x = RandomSource(3).integers(bound, 200_000)
        assert x.min() >= 0 and x.max() < bound
        assert abs((x < (1 << 62)).mean() - 2 / 3) < 0.005
        with pytest.raises(ValueError):
            RandomSource(3).integers((1 << 63) + 1, 1)

    def test_small_bounds_uniform(self):
        x = RandomSource(4).integers(7, 70_000)
        assert stats.chisquare(np.bincount(x, minlength=7)).pvalue > 1e-3

    def test_per_element_bounds(self):
        b = np.array([1, 2, 3, 1000])
        x = RandomSource(5).integers(b, 4)
        assert all(0 <= v < c for v, c in zip(x, b))

    def test_bad_seed(self):
        with pytest.raises(ValueError):
            RandomSource(-1)


class TestSamplerPieces:
    def test_circular_empty_spots_against_reference(self):
        for n in range(1, 6):
            for m in range(0, n + 1):
                seqs = list(product(range(1, n + 2), repeat=m))
                got = circular_empty_spots(np.array(seqs, dtype=np.int64).reshape(len(seqs), m), n)
                for row, prefs in zip(got, seqs):
                    assert tuple(row) == circular_park(prefs, n)
                    assert row.sum() == n - m + 1

    @given(parking_functions(max_n=15))
    def test_vectorized_statistics(self, pf):
        arr = np.array([pf.prefs], dtype=np.int64).reshape(1, pf.m)
        holes = np.flatnonzero(linear_holes(arr, pf.n)[0]) + 1
        assert tuple(holes.tolist()) == unattempted_spots(pf)
        assert displacements(arr, pf.n)[0] == displacement(pf)
        assert lucky_counts(arr, pf.n)[0] == lucky_count(pf)
        assert repeats(arr)[0] == sum(a == b for a, b in zip(pf.prefs, pf.prefs[1:]))

    def test_samples_are_parking_functions(self):
        rng = RandomSource(11)
        for m, n in [(1, 1), (3, 5), (7, 7), (10, 30), (50, 60)]:
            for row in sample_pf_batch(m, n, 200, rng):
                assert is_parking_function(tuple(int(v) for v in row), m, n)

    def test_empty(self):
        assert sample_pf(0, 4, RandomSource(1)) == ParkingFunction(0, 4, ())

    def test_one_car_two_spots(self):
        x = sample_pf_batch(1, 2, 40_000, RandomSource(2))[:, 0]
        p = (x == 1).mean()
        assert abs(p - 0.5) <= 3 * math.sqrt(0.25 / x.size)

    def test_stream_matches_single_batch(self):
        a = np.concatenate(list(sample_pf_stream(3, 5, 1000, RandomSource(8), batch=1000)))
        b = sample_pf_batch(3, 5, 1000, RandomSource(8))
        assert (a == b).all()

    def test_reject_bad_sizes(self):
        with pytest.raises(InputError):
            sample_pf_batch(3, 2, 1, RandomSource(0))


def small_supports():
    out = []
    for n in range(1, 10):
        for m in range(1, n + 1):
            if (n + 1) ** m <= 10**4:
                out.append((m, n))
    # the sampler costs O(n) per draw; larger n with tiny m is left to the CLI
    return out + [(1, 99), (2, 30)]


class TestUniformity:
    def test_pf35(self):
        r = rz.uniformity_check(3, 5, 100_000, RandomSource(1))
        assert len(r.counts) == 108
        assert r.passed

    @pytest.mark.slow
    @pytest.mark.parametrize("m,n", small_supports())
    def test_exactness(self, m, n):
        r = rz.uniformity_check(m, n, 10**6, RandomSource(2024, worker=1000 * m + n))
        assert r.passed, r.statistics

    def test_single_support_point(self):
        r = rz.uniformity_check(1, 1, 100, RandomSource(1))
        assert r.passed and r.statistics["pValue"] == 1.0


class TestShuffle:
    def test_example(self):
        rest = (2, 7, 2, 9, 10, 1, 8)
        assert rz.max_first_preference(rest, 10) == 6
        w = rz.shuffle_decompose(rest, 10)
        assert w.k == 6
        assert w.alpha.prefs == (2, 2, 1) and (w.alpha.m, w.alpha.n) == (3, 5)
        assert w.beta.prefs == (1, 3, 4, 2) and (w.beta.m, w.beta.n) == (4, 4)
        assert w.recompose() == rest

    def test_single_car(self):
        assert rz.max_first_preference((), 3) == 3

    def test_infeasible(self):
        assert rz.max_first_preference((3, 3), 3) is None
        with pytest.raises(NoFeasibleFirst):
            rz.shuffle_decompose((3, 3), 3)

    def test_against_brute_force(self):
        for n in range(1, 6):
            for m in range(1, n + 1):
                for rest in product(range(1, n + 1), repeat=m - 1):
                    k = rz.max_first_preference(rest, n)
                    assert k == rz.max_first_preference_brute(rest, n)
                    feasible = [j for j in range(1, n + 1) if is_parking_function((j, *rest), m, n)]
                    if k is None:
                        assert feasible == []
                        with pytest.raises(NoFeasibleFirst):
                            rz.shuffle_decompose(rest, n)
                    else:
                        assert feasible == list(range(1, k + 1)) and k >= n - m + 1
                        w = rz.shuffle_decompose(rest, n)
                        assert w.recompose() == rest and k not in rest

    def test_recompose_pf34_tails(self):
        for pf in enumerate_pf(3, 4):
            assert rz.shuffle_decompose(pf.prefs[1:], 4).recompose() == pf.prefs[1:]

    def test_coordinates_reproduce_displacement(self):
        for m in range(1, 5):
            for n in range(m, 7):
                for pf in enumerate_pf(m, n):
                    c = rz.shuffle_coordinates(pf)
                    assert rz.disp_from_coordinates(c) == displacement(pf)
                    assert 1 <= c.j <= c.i + (n - m + 1)
                    if m == n:
                        assert rz.first_car_extra(c) == max(c.i + 1 - c.j, 0)

    def test_first_car_term_is_not_max_form_with_free_spots(self):
        c = rz.shuffle_coordinates(ParkingFunction(2, 3, (1, 2)))
        assert (c.i, c.j) == (1, 1)
        assert rz.first_car_extra(c) == 0 != max(c.i + 1 - c.j, 0)


class TestFirstCoordinateLaw:
    def test_examples(self):
        assert rz.pmf_first_coordinate(2, 2) == (Fraction(2, 3), Fraction(1, 3))
        assert rz.pmf_first_coordinate(2, 3) == (Fraction(3, 8), Fraction(3, 8), Fraction(2, 8))
        assert rz.pmf_first_coordinate(1, 5) == (Fraction(1, 5),) * 5

    def test_shape_and_endpoints(self):
        for n in range(1, 40):
            for m in range(1, n + 1):
                pmf = rz.pmf_first_coordinate(m, n)
                assert sum(pmf) == 1
                assert set(pmf[: n - m + 1]) == {laws.plateau_value(m, n)}
                assert all(a >= b for a, b in zip(pmf, pmf[1:]))
                assert pmf[-1] == laws.right_end_value(m, n)

    def test_tail_classes_add_up(self):
        for m, n in [(3, 5), (5, 5), (4, 9)]:
            pmf = rz.pmf_first_coordinate(m, n)
            for j in range(1, n + 1):
                assert pmf[j - 1] == sum(laws.tail_class_probability(m, n, k)
                                         for k in range(max(j, n - m + 1), n + 1))

    def test_moments(self):
        assert rz.moment_first(2, 2, 1) == Fraction(4, 3)
        for n in range(1, 8):
            assert rz.moment_first(1, n, 1) == Fraction(n + 1, 2)

    def test_asymptotic_remainder_shrinks(self):
        errs = [abs(float(rz.moment_first(n // 2, n, 1)) / rz.moment_first_asymptotic(n // 2, n, 1) - 1)
                for n in (100, 200, 400)]
        assert errs[1] < errs[0] / 2 and errs[2] < errs[1] / 2

    def test_asymptotic_m_equals_n_second_moment(self):
        n = 200
        rel = float(rz.moment_first(n, n, 2)) / rz.moment_first_asymptotic(n, n, 2) - 1
        assert abs(rel) < 0.01

    def test_bad_order(self):
        with pytest.raises(InputError):
            rz.moment_first(2, 2, 0)
        with pytest.raises(InputError):
            rz.moment_first_asymptotic(5, 5, 3)


class TestBorel:
    def test_first_point(self):
        for mu in (0.0, 0.3, 1.0):
            assert math.isclose(rz.borel_pmf(mu, 1), math.exp(-mu))

    def test_total_mass(self):
        assert abs(math.fsum(rz.borel_pmf(0.5, j) for j in range(1, 400)) - 1) < 1e-9
        for mu in (0.1, 0.5, 0.9, 0.99):
            assert abs(rz.borel_tail(mu, 1) - 1) < 1e-12
            assert abs(rz.borel_tail(mu, 2) - (1 - math.exp(-mu))) < 1e-9

    def test_tail_consistency(self):
        for mu in (0.3, 0.8, 1.0):
            for j in (2, 3, 7):
                head = math.fsum(rz.borel_pmf(mu, i) for i in range(1, j))
                assert abs(rz.borel_tail(mu, j) - (1 - head)) < 1e-9

    def test_critical_tail(self):
        assert rz.borel_tail(1.0, 1) == 1.0

    def test_domain(self):
        with pytest.raises(InputError):
            rz.borel_pmf(1.5, 1)
        with pytest.raises(InputError):
            rz.borel_tail(0.5, 0)


class TestBoundary:
    def test_right_end(self):
        m, n = 80, 100
        exact = n * float(rz.pmf_first_coordinate(m, n)[-1])
        assert abs(exact / math.exp(-m / n) - 1) < 0.05
        assert math.isclose(rz.boundary_laws(m, n, 0).right_end, math.exp(-m / n))

    def test_plateau_exact(self):
        m, n = 30, 50
        assert rz.pmf_first_coordinate(m, n)[0] * (n - m + 1) * (n + 1) / (n - m + 2) == 1

    def test_near_end(self):
        m, n = 400, 500
        pmf = rz.pmf_first_coordinate(m, n)
        for j in range(4):
            exact = n * float(pmf[n - j - 1])
            assert abs(exact / rz.boundary_laws(m, n, j).right_end - 1) < 0.05

    def test_poisson_ratio(self):
        m, n = 500, 1000
        base = laws.tail_class_probability(m, n, n - m + 1)
        for t in range(4):
            exact = float(laws.tail_class_probability(m, n, n - m + 1 + t) / base)
            assert abs(exact / rz.boundary_laws(m, n, t).poisson_ratio - 1) < 0.1


class TestDisplacementMoments:
    def test_q_function(self):
        assert rz.q_function(0, 3, 2) == Fraction(17, 9)
        assert rz.q_function(4, 7, 0) == 1
        ratio = float(rz.q_function(0, 101, 100)) / math.sqrt(math.pi * 100 / 2)
        assert abs(ratio - 1) < 0.1

    def test_examples(self):
        d = rz.disp_moments_exact(2, 2)
        assert d.mean == Fraction(1, 3) and d.second_moment == Fraction(1, 3)
        assert rz.disp_moments_exact(0, 4).mean == 0

    def test_against_brute_force(self):
        for n in range(0, 6):
            for m in range(0, n + 1):
                d = [displacement(p) for p in enumerate_pf(m, n)]
                got = rz.disp_moments_exact(m, n)
                assert got.mean == Fraction(sum(d), len(d))
                assert got.second_moment == Fraction(sum(v * v for v in d), len(d))
                if m:
                    assert got.mean == Fraction(n * (n + 1), 2) - m * rz.moment_first(m, n, 1) - Fraction(
                        (n + 1) * (n - m), 2)

    def test_asymptotic_mean(self):
        n = 400
        for m in (200, 400):
            exact = float(rz.disp_moments_exact(m, n).mean)
            assert abs(exact / rz.disp_moments_asymptotic(m, n)[0] - 1) < 0.02


class TestCovariance:
    def test_two(self):
        c = rz.covariance_checks(2)
        assert (c.var_first, c.cov_first_two, c.var_disp) == (Fraction(2, 9), Fraction(-1, 9), Fraction(2, 9))
        assert c.identity_holds

    def test_one(self):
        c = rz.covariance_checks(1)
        assert c.var_first == c.cov_first_two == c.var_disp == 0

    def test_identity_up_to_six(self):
        for n in range(1, 7):
            assert rz.covariance_checks(n).identity_holds

    def test_monte_carlo_needs_rng(self):
        with pytest.raises(InputError):
            rz.covariance_checks(10)

    @pytest.mark.slow
    def test_monte_carlo_500(self):
        c = rz.covariance_checks(500, RandomSource(2))
        assert c.report.passed, [x.to_dict() for x in c.report.checks]
        assert c.identity_holds


class TestHoles:
    def test_examples(self):
        assert rz.expected_holes(1, 2) == (Fraction(3, 2),)
        assert rz.expected_holes(3, 5) == (2, 4)
        assert len(rz.expected_holes(4, 9)) == 5

    def test_estimator_small(self):
        mean, se = rz.hole_estimator(3, 5, RandomSource(6), 50_000)
        assert np.all(np.abs(mean - np.array([2.0, 4.0])) <= 3 * se)

    def test_classical_has_no_holes(self):
        mean, se = rz.hole_estimator(4, 4, RandomSource(6), 10)
        assert mean.size == 0


class TestEnsembles:
    def test_two_two(self):
        a, b = rz.ensemble_pattern_dist(2, 2)
        assert a[(1,)] == b[(1,)] == Fraction(1, 3)

    def test_single_car(self):
        a, b = rz.ensemble_pattern_dist(1, 5)
        assert a == b == {(): 1}

    def test_equal_up_to_four(self):
        for n in range(1, 5):
            for m in range(1, n + 1):
                a, b = rz.ensemble_pattern_dist(m, n)
                assert a == b

    def test_repeats_small(self):
        r = rz.repeats_checks(20, 40, RandomSource(3), 20_000)
        assert set(r.references["pmf"]) == {"0", "1", "2", "3", "4"}
        assert sum(r.counts.values()) <= 20_000


class TestLucky:
    def test_moments(self):
        assert rz.lucky_mean(2, 2) == Fraction(5, 3)
        for n in range(1, 6):
            for m in range(1, n + 1):
                ls = [lucky_count(p) for p in enumerate_pf(m, n)]
                mean = Fraction(sum(ls), len(ls))
                assert rz.lucky_mean(m, n) == mean
                assert rz.lucky_variance(m, n) == Fraction(sum(v * v for v in ls), len(ls)) - mean**2

    def test_empty_report(self):
        r = rz.lucky_clt_check(30, 60, RandomSource(0), 0)
        assert r.checks == [] and r.passed is None and r.verdicts == {}

    def test_small_run(self):
        r = rz.lucky_clt_check(100, 200, RandomSource(1), 5000)
        assert r.statistics["ksContinuityCorrected"] < r.statistics["ksRaw"]


class TestReports:
    def test_json_and_recomputable_verdicts(self):
        r = rz.repeats_checks(10, 20, RandomSource(4), 5000)
        doc = json.loads(r.to_json())
        assert doc["sampleCount"] == 5000 and doc["seed"]["seed"] == "4"
        for c in doc["checks"]:
            s, t = c["statistic"], c["threshold"]
            expect = {"lt": s < t, "ge": s >= t, "abs_le": abs(s) <= t}[c["rule"]]
            assert c["passed"] == expect == doc["verdicts"][c["name"]]

    def test_bit_for_bit_reproducible(self):
        a = rz.lucky_clt_check(50, 100, RandomSource(77), 3000).to_json()
        b = rz.lucky_clt_check(50, 100, RandomSource(77), 3000).to_json()
        assert a == b
        c = rz.holes_check(5, 9, RandomSource(5), 2000).to_json()
        assert c == rz.holes_check(5, 9, RandomSource(5), 2000).to_json()

    def test_csv(self):
        r = rz.uniformity_check(2, 2, 300, RandomSource(1))
        lines = r.counts_csv().splitlines()
        assert lines[0] == "value,count,frequency,reference"
        assert len(lines) == 4
        assert sum(int(line.split(",")[1]) for line in lines[1:]) == 300


class TestExcursion:
    def test_empty_segment(self, worked_pf_tree_by_tree):
        assert rz.excursion_profile(worked_pf_tree_by_tree, 1, 8) == [0.0] * 9

    @given(parking_functions(max_n=12, min_m=1))
    def test_endpoints(self, pf):
        for i, seg in enumerate(segment_decomposition(pf).segments):
            prof = rz.excursion_profile(pf, i, 10)
            assert prof[0] == 0.0 and abs(prof[-1]) < 1e-12

    def test_nonnegative_on_lattice_pf33(self):
        for pf in enumerate_pf(3, 3):
            assert min(rz.excursion_profile(pf, 0, 3)) >= 0

    def test_gap_scale(self):
        pf = ParkingFunction.of((1, 1, 2))
        prof = rz.excursion_profile(pf, 0, 4, scale="gap")
        assert math.isclose(prof[-1], -1 / 2)

    def test_errors_and_csv(self):
        pf = ParkingFunction.of((1, 1, 2))
        with pytest.raises(InputError):
            rz.excursion_profile(pf, 1, 3)
        with pytest.raises(InputError):
            rz.excursion_profile(pf, 0, 3, scale="other")
        assert rz.excursion_csv(pf, 0, 3).splitlines()[0] == "x,profile"
