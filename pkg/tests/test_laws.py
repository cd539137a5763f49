import math
from fractions import Fraction

import pytest

from sgverify import (
    CyclicGroup,
    DiscreteDistribution,
    EnumerationCapError,
    IndependentSequence,
    IntegerAdditive,
    RealVectorGroup,
    ScalarLaw,
    TorusGroup,
    derive_seed,
    enumerate_outcomes,
    exact_functional_law,
    mc_tail_agreement,
    monte_carlo_law,
    path_trace,
    sequence_from_config,
    sequence_to_config,
)
from sgverify.corpus import CorpusSpec, generate_corpus
from sgverify.levy import UniformBoxSampler

F = Fraction


def rademacher():
    return DiscreteDistribution.of([(1, F(1, 2)), (-1, F(1, 2))])


def rademacher_seq(n):
    return IndependentSequence.build(IntegerAdditive(), [rademacher()] * n)


def test_path_trace_on_the_line():
    seq = rademacher_seq(2)
    trace = path_trace(seq, (1, -1))
    assert trace.products == (1, 0)
    assert trace.peaks == (1, 1)
    assert trace.steps == (1, 1)
    assert trace.step_peaks == (1, 1)
    trace = path_trace(seq, (1, 1))
    assert trace.peaks[-1] == 2
    assert trace.step_peaks[-1] == 1


def test_path_trace_cyclic_wraparound():
    cyc = CyclicGroup(6)
    var = DiscreteDistribution.point_mass(4)
    seq = IndependentSequence.build(cyc, [var, var])
    trace = path_trace(seq, (4, 4))
    assert trace.products == (4, 2)
    assert trace.peaks == (2, 2)


def test_path_trace_length_mismatch():
    with pytest.raises(ValueError):
        path_trace(rademacher_seq(2), (1,))


def test_exact_walk_peak_law_n2_and_n3():
    law = rademacher_seq(2).walk_peak_law
    assert list(zip(law.values, law.probs)) == [(1, F(1, 2)), (2, F(1, 2))]
    law3 = rademacher_seq(3).walk_peak_law
    assert list(zip(law3.values, law3.probs)) == [
        (1, F(1, 2)),
        (2, F(1, 4)),
        (3, F(1, 4)),
    ]


def test_step_peak_law_is_constant_for_unit_steps():
    law = rademacher_seq(2).step_peak_law
    assert list(zip(law.values, law.probs)) == [(1, F(1))]


def test_walk_peak_moments():
    law = rademacher_seq(2).walk_peak_law
    assert law.mean() == F(3, 2)
    assert law.moment(2) == F(5, 2)
    assert law.moment_root(2) == pytest.approx(math.sqrt(2.5))


def test_single_variable_peak_equals_magnitude_law():
    seq = IndependentSequence.build(IntegerAdditive(), [rademacher()])
    assert seq.walk_peak_law.values == seq.magnitude_laws[0].values
    assert seq.walk_peak_law.probs == seq.magnitude_laws[0].probs


def test_law_mass_exact():
    corpus = generate_corpus(CorpusSpec(count=40, seed=3))
    for seq in corpus:
        law = seq.walk_peak_law
        assert sum(law.probs) == 1
        assert law.is_rational


def test_step_peak_law_matches_enumeration():
    corpus = generate_corpus(CorpusSpec(count=25, seed=9))
    for seq in corpus:
        direct = seq.step_peak_law
        enumerated = exact_functional_law(seq, "step_peak")
        assert direct.values == enumerated.values
        assert direct.probs == enumerated.probs


def test_pathwise_running_max_monotone_and_step_bound():
    # running peaks are nondecreasing and the step peak never beats twice the walk peak
    corpus = generate_corpus(CorpusSpec(count=30, seed=4))
    for seq in corpus:
        for outcome, _ in enumerate_outcomes(seq):
            trace = path_trace(seq, outcome)
            assert all(a <= b for a, b in zip(trace.peaks, trace.peaks[1:]))
            assert all(
                a <= b for a, b in zip(trace.step_peaks, trace.step_peaks[1:])
            )
            assert trace.step_peaks[-1] <= 2 * trace.peaks[-1]


def test_magnitude_law_ignores_basepoint():
    cyc = CyclicGroup(6)
    var = DiscreteDistribution.of([(1, F(1, 3)), (3, F(2, 3))])
    for z0 in (0, 2, 5):
        seq = IndependentSequence.build(cyc, [var], z0=z0, z1=z0)
        law = seq.magnitude_laws[0]
        assert list(zip(law.values, law.probs)) == [(1, F(1, 3)), (3, F(2, 3))]


def test_enumeration_cap():
    var = DiscreteDistribution.uniform([0, 1, 2])
    seq = IndependentSequence.build(IntegerAdditive(), [var] * 5)
    with pytest.raises(EnumerationCapError):
        list(enumerate_outcomes(seq, cap=100))


def test_exact_law_rejects_samplers():
    sampler = UniformBoxSampler(TorusGroup(1), 0.5)
    seq = IndependentSequence.build(TorusGroup(1), [sampler])
    with pytest.raises(ValueError):
        exact_functional_law(seq, "walk_peak")


def test_monte_carlo_matches_exact_within_3se():
    seq = rademacher_seq(2)
    emp = monte_carlo_law(seq, "walk_peak", trials=100_000, seed=42)
    se = math.sqrt(0.25 / 100_000)
    assert abs(float(emp.tail(F(3, 2))) - 0.5) <= 3 * se


def test_monte_carlo_chunk_and_order_invariance():
    seq = rademacher_seq(3)
    a = monte_carlo_law(seq, "walk_peak", trials=4000, seed=5, chunk_size=13)
    b = monte_carlo_law(seq, "walk_peak", trials=4000, seed=5, chunk_size=4000)
    assert a.values == b.values and a.probs == b.probs


def test_point_mass_monte_carlo_is_exact():
    var = DiscreteDistribution.point_mass(3)
    seq = IndependentSequence.build(IntegerAdditive(), [var, var])
    emp = monte_carlo_law(seq, "walk_peak", trials=500, seed=1)
    exact = seq.walk_peak_law
    assert emp.values == exact.values
    assert emp.probs == (F(1),)


def test_torus_walk_respects_diameter():
    tor = TorusGroup(1)
    steps = [UniformBoxSampler(tor, 0.5)] * 10
    seq = IndependentSequence.build(tor, steps)
    law = monte_carlo_law(seq, "walk_peak", trials=2000, seed=8)
    assert law.max_value <= 0.5


def test_mc_agreement_helper_on_small_corpus():
    corpus = generate_corpus(CorpusSpec(count=20, seed=6))
    checks = 0
    misses = 0
    for i, seq in enumerate(corpus):
        for rec in mc_tail_agreement(seq, trials=20_000, seed=derive_seed(6, i)):
            checks += 1
            if rec["z"] > 3.0:
                misses += 1
    assert misses <= max(1, checks // 100)


def test_scalar_law_tail_queries():
    law = ScalarLaw.from_pairs([(0, F(1, 4)), (2, F(1, 2)), (5, F(1, 4))])
    assert law.tail(-1) == 1
    assert law.tail(0) == F(3, 4)
    assert law.tail(2) == F(1, 4)
    assert law.prob_ge(2) == F(3, 4)
    assert law.prob_le(2) == F(3, 4)
    assert law.tail(5) == 0


def test_tail_function_is_a_nonincreasing_right_continuous_step():
    law = ScalarLaw.from_pairs([(1, F(1, 3)), (2, F(1, 3)), (4, F(1, 3))])
    grid = [F(k, 4) for k in range(-2, 20)]
    tails = [law.tail(x) for x in grid]
    assert all(a >= b for a, b in zip(tails, tails[1:]))
    for v in law.values:
        # constant immediately to the right of each step point
        assert law.tail(v) == law.tail(v + F(1, 1000))
        # and a genuine drop across it
        assert law.tail(v - F(1, 1000)) > law.tail(v)


def test_scalar_law_rejects_bad_input():
    with pytest.raises(ValueError):
        ScalarLaw.from_pairs([(-1, F(1))])
    with pytest.raises(ValueError):
        ScalarLaw.from_pairs([(1, F(1, 2))])
    with pytest.raises(ValueError):
        DiscreteDistribution.of([(1, F(1, 2)), (1, F(1, 2))])


def test_sequence_config_round_trip():
    corpus = generate_corpus(CorpusSpec(count=15, seed=12))
    for seq in corpus:
        config = sequence_to_config(seq)
        back = sequence_from_config(config)
        assert sequence_to_config(back) == config
        assert back.walk_peak_law.values == seq.walk_peak_law.values


def test_sequence_config_rejects_unknown_keys():
    config = sequence_to_config(rademacher_seq(1))
    config["surprise"] = 1
    with pytest.raises(ValueError):
        sequence_from_config(config)


def test_default_basepoints():
    seq = rademacher_seq(2)
    assert seq.z0 == 0 and seq.z1 == 0
    pos = sequence_from_config(
        {"instance": "posreal", "variables": [{"atoms": [["1/2", "1"]]}]}
    )
    assert pos.z0 == F(1, 2)  # no identity: first atom is the default


def test_real_vector_sequence():
    real = RealVectorGroup(1)
    var = DiscreteDistribution.of([((1.0,), F(1, 2)), ((-1.0,), F(1, 2))])
    seq = IndependentSequence.build(real, [var, var])
    law = seq.walk_peak_law
    assert law.values == (1.0, 2.0)
