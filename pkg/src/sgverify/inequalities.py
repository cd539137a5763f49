"""Checkers for the maximal, tail, and moment inequalities, plus estimators
for the universal constants they involve.

Every checker evaluates both sides of one inequality on a given sequence and
returns a report.  With exact laws and rational parameters the slack is an
exact Fraction and a negative value is a hard counterexample (these are
theorems; a violation is an implementation bug).  Checkers built around
truncations compare walks from the identity, the frame in which truncation
is defined; sequences on identity-free carriers are completed first and the
report carries a note.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .laws import (
    STEP_PEAK,
    WALK_PEAK,
    IndependentSequence,
    ScalarLaw,
    enumerate_outcomes,
    monte_carlo_law,
    sequence_to_config,
)
from .rearrange import (
    excess_tail_moment,
    pow_value,
    rearrangement_at,
    tail_sum_inverse,
    tail_sum_inverse_law,
    truncate,
    truncate_upper,
)
from .reports import (
    FLOAT_SLACK_TOL,
    ConstantEstimate,
    InequalityReport,
    RatioReport,
    Uncertain,
    is_rational_number,
    make_report,
)
from .rng import derive_seed
from .semigroups import adjoin_identity


# ---------------------------------------------------------------------------
# parameters and law plumbing


@dataclass(frozen=True)
class HJParameters:
    """Block sizes n_1..n_k, thresholds t_1..t_k, and the shift s."""

    block_sizes: tuple
    thresholds: tuple
    shift: object

    def __post_init__(self):
        if len(self.block_sizes) != len(self.thresholds):
            raise ValueError("need one threshold per block")
        if not self.block_sizes:
            raise ValueError("need at least one block")
        for n_i in self.block_sizes:
            if not isinstance(n_i, int) or n_i < 1:
                raise ValueError(f"block sizes must be positive integers, got {n_i}")
        for t_i in self.thresholds:
            if t_i < 0:
                raise ValueError("thresholds must be nonnegative")
        if self.shift < 0:
            raise ValueError("shift must be nonnegative")

    @property
    def k(self) -> int:
        return len(self.block_sizes)

    @property
    def total_size(self) -> int:
        return sum(self.block_sizes)

    def validate_for(self, n: int):
        if self.total_size > n + 1:
            raise ValueError(
                f"block sizes sum to {self.total_size}, above n+1 = {n + 1}"
            )

    def to_params(self) -> dict:
        return {
            "block_sizes": list(self.block_sizes),
            "thresholds": list(self.thresholds),
            "shift": self.shift,
        }


def _mc_engine_info(trials: int, seed: int) -> dict:
    return {"kind": "mc", "trials": trials, "seed": seed}


def _peak_laws(seq: IndependentSequence, engine: str, trials: int, seed: int):
    """(walk-peak law, step-peak law, engine info) for the chosen engine."""
    if engine == "exact":
        return seq.walk_peak_law, seq.step_peak_law, {"kind": "exact"}
    if engine == "mc":
        walk = monte_carlo_law(seq, WALK_PEAK, trials=trials, seed=seed)
        step = monte_carlo_law(
            seq, STEP_PEAK, trials=trials, seed=derive_seed(seed, "step-peak")
        )
        return walk, step, _mc_engine_info(trials, seed)
    raise ValueError(f"unknown engine {engine!r} (use 'exact' or 'mc')")


def _tail(law: ScalarLaw, x):
    """Tail value; wrapped with its binomial variance for empirical laws."""
    t = law.tail(x)
    if law.is_empirical:
        p = float(t)
        return Uncertain(p, p * (1.0 - p) / law.trials)
    return t


def _separated_basepoints_note(seq: IndependentSequence) -> str | None:
    """The block bound observes the walk from its own start; with separated
    basepoints and thresholds below their distance it can fail."""
    if seq.z0 == seq.z1:
        return None
    return "basepoints differ; the block bound presumes a common basepoint"


def _stay(law: ScalarLaw, x):
    t = law.prob_le(x)
    if law.is_empirical:
        p = float(t)
        return Uncertain(p, p * (1.0 - p) / law.trials)
    return t


def _is_zero(value) -> bool:
    return value.value == 0 if isinstance(value, Uncertain) else value == 0


def _chain_report(name, params, links, engine=None, note=None, tol=None):
    """Report for a chain q_0 <= q_1 <= ... <= q_m; slack is the worst link."""
    values = [v for _, v in links]
    slack = min(b - a for a, b in zip(values, values[1:]))
    rational = all(is_rational_number(v) for v in values)
    if rational:
        holds = slack >= 0
        arithmetic = "rational"
    else:
        slack = float(slack)
        holds = slack >= -(FLOAT_SLACK_TOL if tol is None else tol)
        arithmetic = "float"
    engine = dict(engine or {"kind": "exact"})
    engine["arithmetic"] = arithmetic
    return InequalityReport(
        name=name,
        params=params,
        lhs=values[0],
        rhs=values[-1],
        slack=slack,
        holds=holds,
        engine=engine,
        components=dict(links),
        note=note,
    )


def _identity_frame(seq: IndependentSequence):
    """The sequence viewed from the identity (truncation frame).

    Completes the instance when it has no identity and resets both
    basepoints to the identity; returns (sequence, note or None).
    """
    inst = seq.instance
    if inst.has_identity:
        e = inst.identity
        if seq.z0 == e and seq.z1 == e:
            return seq, None
        return seq.with_basepoints(e, e), "basepoints reset to the identity"
    completed = adjoin_identity(inst)
    rebased = IndependentSequence.build(
        completed,
        seq.variables,
        z0=completed.identity,
        z1=completed.identity,
        label=seq.label,
    )
    return rebased, f"instance completed to {completed.name}"


# ---------------------------------------------------------------------------
# the block maximal inequality and its single-threshold consequence


def tight_block_set(walk_law: ScalarLaw, params: HJParameters) -> frozenset:
    """Blocks whose plain tail-power factor beats the factorial-ratio factor:
    {i : P(peak <= t_i)^(n_i - [i==1]) <= 1/n_i!} (1-based indices)."""
    out = []
    for i, (n_i, t_i) in enumerate(zip(params.block_sizes, params.thresholds), start=1):
        exponent = n_i - (1 if i == 1 else 0)
        stay = walk_law.prob_le(t_i)
        if stay**exponent <= Fraction(1, math.factorial(n_i)):
            out.append(i)
    return frozenset(out)


def check_hj(
    seq: IndependentSequence,
    params: HJParameters,
    engine: str = "exact",
    trials: int = 100_000,
    seed: int = 0,
) -> InequalityReport:
    """Hoffmann-Jorgensen block inequality for the walk peak.

    P(peak > (2*n_1 - 1)*t_1 + 2*sum_{i>=2} n_i*t_i + (sum_i n_i - 1)*s)
    is bounded by P(step peak > s) plus a product of per-block tail factors;
    blocks in the tight set contribute P(peak > t_i)^n_i, the others
    (1/n_i!) * (P(peak > t_i)/P(peak <= t_i))^n_i, and the leading factor
    P(peak <= t_1) appears only when block 1 is not tight.
    """
    params.validate_for(seq.n)
    walk, step, engine_info = _peak_laws(seq, engine, trials, seed)
    sizes, thresholds = params.block_sizes, params.thresholds
    threshold = (
        (2 * sizes[0] - 1) * thresholds[0]
        + 2 * sum(n_i * t_i for n_i, t_i in zip(sizes[1:], thresholds[1:]))
        + (params.total_size - 1) * params.shift
    )
    tight = tight_block_set(walk, params)
    report_params = params.to_params() | {"tight_blocks": sorted(tight)}

    lhs = _tail(walk, threshold)
    product = 1
    degenerate = None
    for i, (n_i, t_i) in enumerate(zip(sizes, thresholds), start=1):
        if i in tight:
            product = product * _tail(walk, t_i) ** n_i
        else:
            stay = _stay(walk, t_i)
            if _is_zero(stay):
                degenerate = f"zero stay probability at threshold {t_i}"
                break
            ratio = _tail(walk, t_i) / stay
            product = product * ratio**n_i * Fraction(1, math.factorial(n_i))
    if degenerate is None and 1 not in tight:
        product = _stay(walk, thresholds[0]) * product

    if degenerate is not None:
        return make_report(
            "hj",
            report_params,
            lhs,
            math.inf,
            engine=engine_info,
            degenerate=degenerate,
        )
    rhs = _tail(step, params.shift) + product
    return make_report(
        "hj",
        report_params,
        lhs,
        rhs,
        engine=engine_info,
        components={"threshold": threshold},
        note=_separated_basepoints_note(seq),
    )


def check_hj_simple(
    seq: IndependentSequence,
    repeats: int,
    t,
    engine: str = "exact",
    trials: int = 100_000,
    seed: int = 0,
) -> InequalityReport:
    """Single-threshold consequence of the block inequality:

    P(peak > (3K-1)t) <= (1/K!) * (P(peak > t)/P(peak <= t))^K
                          + P(step peak > t)   for every K >= 1, t > 0.
    """
    if not isinstance(repeats, int) or repeats < 1:
        raise ValueError("repeat count must be a positive integer")
    if t <= 0:
        raise ValueError("threshold must be positive")
    walk, step, engine_info = _peak_laws(seq, engine, trials, seed)
    params = {"repeats": repeats, "t": t}
    lhs = _tail(walk, (3 * repeats - 1) * t)
    stay = _stay(walk, t)
    if _is_zero(stay):
        return make_report(
            "hj-simple",
            params,
            lhs,
            math.inf,
            engine=engine_info,
            degenerate=f"zero stay probability at threshold {t}",
        )
    ratio = _tail(walk, t) / stay
    rhs = ratio**repeats * Fraction(1, math.factorial(repeats)) + _tail(step, t)
    return make_report(
        "hj-simple",
        params,
        lhs,
        rhs,
        engine=engine_info,
        note=_separated_basepoints_note(seq),
    )


# ---------------------------------------------------------------------------
# minimal/maximal partial-product inequalities


def check_mogulskii(seq: IndependentSequence, m: int, a, b):
    """Mogulskii-Ottaviani-Skorohod inequalities over window indices m..n.

    (1) P(min_k d(z1, z0*s_k) <= a) * min_k P(d(s_k, s_n) <= b)
            <= P(d(z1, z0*s_n) <= a + b)
    (2) P(max_k d(z1, z0*s_k) >= a) * min_k P(d(s_k, s_n) <= b)
            <= P(d(z1, z0*s_n) >= a - b)

    Returns the pair of reports, computed exactly in a single enumeration.
    """
    n = seq.n
    if not 1 <= m <= n:
        raise ValueError(f"window start must be in 1..{n}, got {m}")
    if a < 0 or b < 0:
        raise ValueError("radii must be nonnegative")
    inst = seq.instance
    z0, z1 = seq.z0, seq.z1
    p_min_le = 0
    p_max_ge = 0
    p_end_le = 0
    p_end_ge = 0
    window = n - m + 1
    stay = [0] * window
    for outcome, prob in enumerate_outcomes(seq):
        products = []
        cur = None
        for x in outcome:
            cur = x if cur is None else inst.compose(cur, x)
            products.append(cur)
        shifted = [inst.distance(z1, inst.compose(z0, products[k])) for k in range(m - 1, n)]
        if min(shifted) <= a:
            p_min_le += prob
        if max(shifted) >= a:
            p_max_ge += prob
        end = shifted[-1]
        if end <= a + b:
            p_end_le += prob
        if end >= a - b:
            p_end_ge += prob
        for j, k in enumerate(range(m - 1, n)):
            if inst.distance(products[k], products[-1]) <= b:
                stay[j] += prob
    min_stay = min(stay)
    params = {"m": m, "a": a, "b": b}
    first = make_report(
        "mogulskii-min",
        params,
        p_min_le * min_stay,
        p_end_le,
        components={"reach_prob": p_min_le, "stay_prob": min_stay},
    )
    second = make_report(
        "mogulskii-max",
        params,
        p_max_ge * min_stay,
        p_end_ge,
        components={"reach_prob": p_max_ge, "stay_prob": min_stay},
    )
    return first, second


# ---------------------------------------------------------------------------
# step-peak sandwiches


def check_step_quantile_chain(seq: IndependentSequence, t) -> InequalityReport:
    """Chain linking the aggregate step quantile and the step-peak
    rearrangement: agg(2t) <= agg(t/(1-t)) <= peak*(t) <= agg(t), t in (0,1)."""
    if not 0 < t < 1:
        raise ValueError("t must lie in (0, 1)")
    mags = seq.magnitude_laws
    links = [
        ("agg_quantile_2t", tail_sum_inverse(mags, 2 * t)),
        ("agg_quantile_shifted", tail_sum_inverse(mags, t / (1 - t))),
        ("step_peak_quantile", rearrangement_at(seq.step_peak_law, t)),
        ("agg_quantile_t", tail_sum_inverse(mags, t)),
    ]
    return _chain_report("step-quantile-chain", {"t": t}, links)


def check_step_moment_sandwich(seq: IndependentSequence, t, p) -> InequalityReport:
    """Two-sided bound for E[step peak^p] via the aggregate quantile L and the
    excess tail moment R: (t*L^p + R)/(1+t) <= E[peak^p] <= L^p + R."""
    if t <= 0:
        raise ValueError("t must be positive")
    if p <= 0:
        raise ValueError("moment order must be positive")
    mags = seq.magnitude_laws
    cut = tail_sum_inverse(mags, t)
    extra = excess_tail_moment(mags, t, p)
    cut_p = pow_value(cut, p)
    links = [
        ("lower", (t * cut_p + extra) / (1 + t)),
        ("step_peak_moment", seq.step_peak_law.moment(p)),
        ("upper", cut_p + extra),
    ]
    return _chain_report("step-moment-sandwich", {"t": t, "p": p}, links)


# ---------------------------------------------------------------------------
# walk-peak quantile comparison (log-ratio constant)


def check_walk_quantile_ratio(seq: IndependentSequence, t, s) -> RatioReport:
    """Constant required by the quantile comparison

        peak*(t) <= c * log(1/t)/max(log(1/s), log log(4/t))
                      * (peak*(s) + step_peak*(t/2)),  0 < t <= s <= 1/2.

    Reports the per-instance required c (ratio form); never asserted.
    """
    if not 0 < t <= s or s > Fraction(1, 2):
        raise ValueError("need 0 < t <= s <= 1/2")
    walk = seq.walk_peak_law
    step = seq.step_peak_law
    peak_t = rearrangement_at(walk, t)
    peak_s = rearrangement_at(walk, s)
    step_half = rearrangement_at(step, t / 2)
    params = {"t": t, "s": s}
    components = {
        "walk_quantile_t": peak_t,
        "walk_quantile_s": peak_s,
        "step_quantile_half_t": step_half,
    }
    denom_sum = peak_s + step_half
    if denom_sum == 0:
        if peak_t == 0:
            return RatioReport("walk-quantile-ratio", params, 0.0, components)
        return RatioReport(
            "walk-quantile-ratio",
            params,
            math.inf,
            components,
            degenerate="zero denominator with a nonzero quantile",
        )
    numer = float(peak_t) * max(math.log(1 / float(s)), math.log(math.log(4 / float(t))))
    denom = math.log(1 / float(t)) * float(denom_sum)
    return RatioReport("walk-quantile-ratio", params, numer / denom, components)


# ---------------------------------------------------------------------------
# truncation-based comparisons (identity frame)


def _capped_walk_law(frame_seq: IndependentSequence, cut) -> ScalarLaw:
    """Walk-peak law after replacing large steps by the identity."""
    inst = frame_seq.instance
    capped = [truncate(var, cut, inst) for var in frame_seq.variables]
    return frame_seq.with_variables(capped).walk_peak_law


def check_moment_vs_quantile(seq: IndependentSequence, p):
    """The two approximation ratios comparing E[peak^p]^(1/p) with
    peak*(e^-p/4) + E[agg^p]^(1/p), plain and with large steps removed.

    Returns (plain ratio report, truncated ratio report); ratios are
    recorded for corpus aggregation, not asserted.
    """
    if p <= 0:
        raise ValueError("moment order must be positive")
    frame, note = _identity_frame(seq)
    mags = frame.magnitude_laws
    walk = frame.walk_peak_law
    agg_root = tail_sum_inverse_law(mags).moment_root(p)
    walk_root = walk.moment_root(p)
    quarter = math.exp(-float(p)) / 4
    eighth = math.exp(-float(p)) / 8
    params = {"p": p}

    def ratio_report(name, quantile, extra):
        denom = float(quantile) + float(agg_root)
        components = {
            "walk_moment_root": walk_root,
            "quantile_term": quantile,
            "agg_moment_root": agg_root,
        } | extra
        if denom == 0:
            return RatioReport(
                name,
                params,
                1.0,
                components,
                degenerate="identically zero walk",
                note=note,
            )
        return RatioReport(name, params, float(walk_root) / denom, components, note=note)

    plain = ratio_report("moment-vs-quantile", rearrangement_at(walk, quarter), {})
    cut = tail_sum_inverse(mags, eighth)
    capped_quantile = rearrangement_at(_capped_walk_law(frame, cut), quarter)
    truncated = ratio_report(
        "moment-vs-quantile-truncated", capped_quantile, {"cutoff": cut}
    )
    return plain, truncated


def check_truncated_quantile_shift(
    seq: IndependentSequence, p, eta=None
) -> InequalityReport:
    """Removing steps above the aggregate quantile at r = e^-p/8 shifts walk
    quantiles by at most r:  capped_peak*(eta) <= peak*(eta - r), eta >= r."""
    if p <= 0:
        raise ValueError("moment order must be positive")
    r = math.exp(-float(p)) / 8
    if eta is None:
        eta = math.exp(-float(p)) / 4
    if not r <= eta <= 1:
        raise ValueError(f"eta must lie in [{r}, 1]")
    frame, note = _identity_frame(seq)
    mags = frame.magnitude_laws
    cut = tail_sum_inverse(mags, r)
    lhs = rearrangement_at(_capped_walk_law(frame, cut), eta)
    rhs = rearrangement_at(frame.walk_peak_law, eta - r)
    return make_report(
        "truncated-quantile-shift",
        {"p": p, "eta": eta},
        lhs,
        rhs,
        components={"cutoff": cut, "shift": r},
        note=note,
    )


def check_walk_moment_bound(seq: IndependentSequence, p) -> InequalityReport:
    """Moment bound for the walk peak by the step peak and one quantile:

        E[peak^p] <= 2^(1+2p) * (E[step peak^p] + peak*(2^(-1-2p))^p).
    """
    if p <= 0:
        raise ValueError("moment order must be positive")
    walk = seq.walk_peak_law
    step = seq.step_peak_law
    if isinstance(p, int):
        level = Fraction(1, 2 ** (1 + 2 * p))
        scale = 2 ** (1 + 2 * p)
    else:
        level = 2.0 ** (-1.0 - 2.0 * p)
        scale = 2.0 ** (1.0 + 2.0 * p)
    quantile = rearrangement_at(walk, level)
    lhs = walk.moment(p)
    rhs = scale * (step.moment(p) + pow_value(quantile, p))
    return make_report(
        "walk-moment-bound",
        {"p": p},
        lhs,
        rhs,
        components={"quantile_level": level, "walk_quantile": quantile},
    )


def check_spike_moment_bound(seq: IndependentSequence, r, p) -> InequalityReport:
    """Keeping only steps above the aggregate quantile at r, the walk peak's
    p-th moment root is at most 2 * e^(2^p * r / p) * E[agg^p]^(1/p)."""
    if not 0 < r < 1:
        raise ValueError("r must lie in (0, 1)")
    if p <= 0:
        raise ValueError("moment order must be positive")
    frame, note = _identity_frame(seq)
    inst = frame.instance
    mags = frame.magnitude_laws
    cut = tail_sum_inverse(mags, r)
    spiked = [truncate_upper(var, cut, inst) for var in frame.variables]
    spike_walk = frame.with_variables(spiked).walk_peak_law
    lhs = spike_walk.moment_root(p)
    rhs = 2.0 * math.exp(2.0 ** float(p) * float(r) / float(p)) * tail_sum_inverse_law(
        mags
    ).moment_root(p)
    return make_report(
        "spike-moment-bound",
        {"r": r, "p": p},
        lhs,
        rhs,
        components={"cutoff": cut},
        note=note,
    )


# ---------------------------------------------------------------------------
# moment growth in the order (universal constants c, c')


def moment_growth_factor(p, q, eps) -> float:
    return float(q) / max(float(p), math.log(float(eps) + float(q)))


def moment_growth_multiplier(p0, eps) -> float:
    """Factor turning a constant for the first growth bound into one for the
    second: 8^(1/p0) * e + max(1, log(eps + p0)/p0)."""
    p0 = float(p0)
    return 8.0 ** (1.0 / p0) * math.e + max(1.0, math.log(float(eps) + p0) / p0)


def _validate_growth_params(p0, p, q, eps, second: bool):
    if p0 <= 0:
        raise ValueError("threshold p0 must be positive")
    if not q >= p >= p0:
        raise ValueError("need q >= p >= p0")
    if not -q < eps <= math.log(16):
        raise ValueError("need eps in (-q, log 16]")
    if second and eps < min(1.0, math.e - float(p0)):
        raise ValueError(
            "second growth bound needs eps >= min(1, e - p0); "
            f"got eps = {eps} with p0 = {p0}"
        )


def moment_growth_components(seq: IndependentSequence, p, q) -> dict:
    walk = seq.walk_peak_law
    step = seq.step_peak_law
    return {
        "walk_root_q": walk.moment_root(q),
        "walk_root_p": walk.moment_root(p),
        "step_quantile": rearrangement_at(step, math.exp(-float(q)) / 8),
        "step_root_q": step.moment_root(q),
    }


def required_moment_growth_constant(seq: IndependentSequence, p0, p, q, eps):
    """Per-instance constant required by the first growth bound; None when the
    instance is degenerate (both sides identically zero)."""
    _validate_growth_params(p0, p, q, eps, second=False)
    parts = moment_growth_components(seq, p, q)
    factor = moment_growth_factor(p, q, eps)
    denom = factor * (
        float(parts["walk_root_p"]) + float(parts["step_quantile"])
    ) + float(parts["step_root_q"])
    if denom == 0:
        return None, parts
    return float(parts["walk_root_q"]) / denom, parts


def check_moment_growth(seq: IndependentSequence, p0, p, q, eps, c, cprime=None):
    """The two moment-growth bounds with explicit constants:

    (1) E[peak^q]^(1/q) <= c * q/max(p, log(eps+q))
            * (E[peak^p]^(1/p) + step_peak*(e^-q/8)) + c * E[step^q]^(1/q)
    (2) E[peak^q]^(1/q) <= c' * q/max(p, log(eps+q))
            * (E[peak^p]^(1/p) + E[step^q]^(1/q)),   eps >= min(1, e - p0).

    When `cprime` is omitted it is derived from c by the standard multiplier.
    Returns (first report, second report).
    """
    _validate_growth_params(p0, p, q, eps, second=True)
    if cprime is None:
        cprime = float(c) * moment_growth_multiplier(p0, eps)
    parts = moment_growth_components(seq, p, q)
    factor = moment_growth_factor(p, q, eps)
    lhs = float(parts["walk_root_q"])
    rhs1 = float(c) * factor * (
        float(parts["walk_root_p"]) + float(parts["step_quantile"])
    ) + float(c) * float(parts["step_root_q"])
    rhs2 = (
        float(cprime)
        * factor
        * (float(parts["walk_root_p"]) + float(parts["step_root_q"]))
    )
    base_params = {"p0": p0, "p": p, "q": q, "eps": eps}
    first = make_report(
        "moment-growth",
        base_params | {"c": c},
        lhs,
        rhs1,
        components=parts,
    )
    second = make_report(
        "moment-growth-combined",
        base_params | {"cprime": cprime},
        lhs,
        rhs2,
        components=parts,
    )
    return first, second


# ---------------------------------------------------------------------------
# corpus estimators


DEFAULT_PQ_GRID = ((1, 1), (1, 2), (2, 4), (1, 8))
DEFAULT_T_GRID = (Fraction(1, 100), Fraction(1, 20), Fraction(1, 10))
DEFAULT_S_GRID = (Fraction(1, 20), Fraction(1, 10), Fraction(1, 4), Fraction(1, 2))


def estimate_quantile_ratio_constant(
    corpus,
    t_grid=DEFAULT_T_GRID,
    s_grid=DEFAULT_S_GRID,
    seed: int | None = None,
) -> ConstantEstimate:
    """Supremal required constant for the walk-quantile comparison over a
    corpus and a (t, s) grid; monotone under corpus inclusion."""
    best = -1.0
    witness: dict = {}
    skipped = 0
    grid = [(t, s) for t in t_grid for s in s_grid if t <= s]
    for index, seq in enumerate(corpus):
        for t, s in grid:
            rep = check_walk_quantile_ratio(seq, t, s)
            if rep.degenerate:
                skipped += 1
                continue
            if rep.ratio > best:
                best = rep.ratio
                witness = {
                    "corpus_index": index,
                    "sequence": sequence_to_config(seq),
                    "params": rep.params,
                    "ratio": rep.ratio,
                }
    return ConstantEstimate(
        name="walk-quantile-ratio-constant",
        value=best,
        witness=witness,
        corpus_size=len(corpus),
        grid_size=len(grid),
        seed=seed,
        skipped_degenerate=skipped,
    )


def estimate_moment_growth_constant(
    corpus,
    p0=1,
    eps=math.log(16),
    pq_grid=DEFAULT_PQ_GRID,
    seed: int | None = None,
) -> ConstantEstimate:
    """Supremal required constant for the first moment-growth bound over a
    corpus and a (p, q) grid; monotone under corpus inclusion."""
    best = -1.0
    witness: dict = {}
    skipped = 0
    for index, seq in enumerate(corpus):
        for p, q in pq_grid:
            required, _ = required_moment_growth_constant(seq, p0, p, q, eps)
            if required is None:
                skipped += 1
                continue
            if required > best:
                best = required
                witness = {
                    "corpus_index": index,
                    "sequence": sequence_to_config(seq),
                    "params": {"p0": p0, "p": p, "q": q, "eps": eps},
                    "ratio": required,
                }
    return ConstantEstimate(
        name="moment-growth-constant",
        value=best,
        witness=witness,
        corpus_size=len(corpus),
        grid_size=len(tuple(pq_grid)),
        seed=seed,
        skipped_degenerate=skipped,
    )


def sweep_moment_vs_quantile(corpus, p_grid=(1, 2), seed: int | None = None) -> dict:
    """Record the range of the two approximation ratios over a corpus.

    Both ratios stay bounded and positive; the extremes are reported with
    witnesses but no bound is asserted (no numeric constants exist to pin).
    """
    stats = {
        "moment-vs-quantile": {"min": math.inf, "max": -math.inf},
        "moment-vs-quantile-truncated": {"min": math.inf, "max": -math.inf},
    }
    witnesses: dict = {}
    degenerate = 0
    for index, seq in enumerate(corpus):
        for p in p_grid:
            for rep in check_moment_vs_quantile(seq, p):
                if rep.degenerate:
                    degenerate += 1
                    continue
                entry = stats[rep.name]
                if rep.ratio > entry["max"]:
                    entry["max"] = rep.ratio
                    witnesses[f"{rep.name}-max"] = {
                        "corpus_index": index,
                        "params": rep.params,
                        "ratio": rep.ratio,
                    }
                if rep.ratio < entry["min"]:
                    entry["min"] = rep.ratio
                    witnesses[f"{rep.name}-min"] = {
                        "corpus_index": index,
                        "params": rep.params,
                        "ratio": rep.ratio,
                    }
    return {
        "ratios": stats,
        "witnesses": witnesses,
        "corpus_size": len(corpus),
        "p_grid": list(p_grid),
        "seed": seed,
        "skipped_degenerate": degenerate,
    }
