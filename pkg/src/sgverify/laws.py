"""Independent step sequences and the laws of their path statistics.

Two engines produce the law of any path functional:

* exact enumeration over the product of finite supports, carrying Fraction
  probabilities so downstream inequality checks certify at zero tolerance;
* seeded Monte Carlo, where trial t's randomness is a pure function of
  (seed, t), making results independent of execution order and chunking.

The statistics of a path x_1..x_n with basepoints z0, z1 are the partial
products s_j = x_1...x_j, the running peak distance max_{i<=j} d(z1, z0*s_i),
the step magnitudes d(z0, z0*x_j), and their running maximum.
"""

from __future__ import annotations

import itertools
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .rng import uniform_block
from .semigroups import MetricSemigroup, parse_instance

DEFAULT_ENUMERATION_CAP = 10_000_000

WALK_PEAK = "walk_peak"
STEP_PEAK = "step_peak"
END_DISTANCE = "end_distance"


def is_rational(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


class EnumerationCapError(ValueError):
    """Joint support is too large for exact enumeration."""


# ---------------------------------------------------------------------------
# distributions over semigroup elements


@dataclass(frozen=True)
class DiscreteDistribution:
    """Finitely supported law on a carrier: ((element, probability), ...).

    Probabilities are Fractions (exact mode) or floats; they must be positive
    and sum to one (exactly when rational, else within 1e-12).
    """

    atoms: tuple

    @staticmethod
    def of(
        pairs: Iterable[tuple],
        instance: MetricSemigroup | None = None,
        merge: bool = False,
    ) -> "DiscreteDistribution":
        merged: dict = {}
        for element, prob in pairs:
            if instance is not None:
                instance.require_element(element)
            if prob < 0:
                raise ValueError(f"negative probability {prob} for atom {element!r}")
            if element in merged:
                if not merge:
                    raise ValueError(f"duplicate atom {element!r}")
                merged[element] = merged[element] + prob
            else:
                merged[element] = prob
        atoms = tuple((e, p) for e, p in merged.items() if p > 0)
        if not atoms:
            raise ValueError("distribution needs at least one atom")
        total = sum(p for _, p in atoms)
        if all(is_rational(p) for _, p in atoms):
            if total != 1:
                raise ValueError(f"probabilities sum to {total}, not 1")
        elif abs(total - 1) > 1e-12:
            raise ValueError(f"probabilities sum to {total}, not 1")
        return DiscreteDistribution(atoms)

    @staticmethod
    def point_mass(element) -> "DiscreteDistribution":
        return DiscreteDistribution(((element, Fraction(1)),))

    @staticmethod
    def uniform(elements: Sequence) -> "DiscreteDistribution":
        n = len(elements)
        return DiscreteDistribution.of([(e, Fraction(1, n)) for e in elements])

    @property
    def support(self) -> tuple:
        return tuple(e for e, _ in self.atoms)

    @property
    def is_rational(self) -> bool:
        return all(is_rational(p) for _, p in self.atoms)

    def prob_of(self, element):
        for e, p in self.atoms:
            if e == element:
                return p
        return 0


class Sampler:
    """Draws one element from a fixed number of uniforms (duck-typed).

    Implementations provide ``width`` (uniforms consumed per draw) and
    ``draw(u)`` mapping a length-`width` float sequence to an element.
    """

    width: int = 1

    def draw(self, u: Sequence[float]):
        raise NotImplementedError


def _variable_is_discrete(var) -> bool:
    return isinstance(var, DiscreteDistribution)


# ---------------------------------------------------------------------------
# scalar laws on [0, oo)


@dataclass(frozen=True)
class ScalarLaw:
    """A law on [0, oo): sorted distinct values with positive weights.

    ``kind`` is "exact" for enumerated/analytic laws and "empirical" for
    Monte Carlo output, which keeps (trials, seed) provenance and represents
    the empirical measure exactly as counts/trials.
    """

    values: tuple
    probs: tuple
    kind: str = "exact"
    trials: int | None = None
    seed: int | None = None

    def __post_init__(self):
        if not self.values:
            raise ValueError("scalar law needs at least one value")
        if any(v < 0 for v in self.values):
            raise ValueError("scalar law values must be nonnegative")
        suffix = [0] * (len(self.values) + 1)
        for i in range(len(self.values) - 1, -1, -1):
            suffix[i] = suffix[i + 1] + self.probs[i]
        object.__setattr__(self, "_suffix", tuple(suffix))

    @staticmethod
    def from_pairs(
        pairs: Iterable[tuple],
        kind: str = "exact",
        trials: int | None = None,
        seed: int | None = None,
    ) -> "ScalarLaw":
        merged: dict = {}
        for v, p in pairs:
            if p < 0:
                raise ValueError(f"negative probability {p}")
            merged[v] = merged.get(v, 0) + p
        items = sorted((v, p) for v, p in merged.items() if p > 0)
        values = tuple(v for v, _ in items)
        probs = tuple(p for _, p in items)
        total = sum(probs)
        if all(is_rational(p) for p in probs):
            if total != 1:
                raise ValueError(f"law mass is {total}, not 1")
        elif abs(total - 1) > 1e-9:
            raise ValueError(f"law mass is {total}, not 1")
        return ScalarLaw(values, probs, kind=kind, trials=trials, seed=seed)

    @staticmethod
    def from_counts(counts: dict, trials: int, seed: int | None) -> "ScalarLaw":
        pairs = [(v, Fraction(c, trials)) for v, c in counts.items()]
        return ScalarLaw.from_pairs(pairs, kind="empirical", trials=trials, seed=seed)

    @staticmethod
    def point_mass(value) -> "ScalarLaw":
        return ScalarLaw((value,), (Fraction(1),))

    @property
    def is_rational(self) -> bool:
        return all(is_rational(v) for v in self.values) and all(
            is_rational(p) for p in self.probs
        )

    @property
    def is_empirical(self) -> bool:
        return self.kind == "empirical"

    @property
    def max_value(self):
        return self.values[-1]

    def tail(self, x):
        """P(X > x)."""
        return self._suffix[bisect_right(self.values, x)]

    def prob_ge(self, x):
        """P(X >= x)."""
        return self._suffix[bisect_left(self.values, x)]

    def prob_le(self, x):
        """P(X <= x)."""
        return self._suffix[0] - self.tail(x)

    def se_tail(self, x) -> float:
        """Binomial standard error of the empirical tail at x."""
        if self.trials is None:
            raise ValueError("standard errors need an empirical law with trials")
        p = float(self.tail(x))
        return math.sqrt(p * (1.0 - p) / self.trials)

    def moment(self, p):
        """E[X^p]; exact (Fraction) when p is a positive int on a rational law."""
        if p <= 0:
            raise ValueError("moment order must be positive")
        if isinstance(p, int) and not isinstance(p, bool) and self.is_rational:
            return sum(prob * v**p for v, prob in zip(self.values, self.probs))
        return sum(
            float(prob) * float(v) ** float(p)
            for v, prob in zip(self.values, self.probs)
        )

    def moment_root(self, p):
        """E[X^p]^(1/p); kept exact for p == 1, float otherwise."""
        m = self.moment(p)
        if p == 1:
            return m
        return float(m) ** (1.0 / float(p))

    def mean(self):
        return self.moment(1)

    def scale(self, factor) -> "ScalarLaw":
        if factor <= 0:
            raise ValueError("scale factor must be positive")
        return ScalarLaw(
            tuple(v * factor for v in self.values),
            self.probs,
            kind=self.kind,
            trials=self.trials,
            seed=self.seed,
        )

    def quantile_grid(self) -> tuple:
        return self.values

    def to_jsonable(self) -> dict:
        def num(x):
            if isinstance(x, Fraction):
                return str(x)
            return x

        out = {
            "kind": self.kind,
            "atoms": [[num(v), num(p)] for v, p in zip(self.values, self.probs)],
        }
        if self.kind == "empirical":
            out["trials"] = self.trials
            out["seed"] = self.seed
        return out


# ---------------------------------------------------------------------------
# sequences and path statistics


@dataclass(frozen=True)
class PathTrace:
    """Per-index path statistics for one outcome."""

    products: tuple
    peaks: tuple  # running max of d(z1, z0 * s_j)
    steps: tuple  # step magnitudes d(z0, z0 * x_j)
    step_peaks: tuple  # running max of step magnitudes


@dataclass(eq=False)
class IndependentSequence:
    """A finite sequence of independent steps on one instance.

    Variables are `DiscreteDistribution`s (exact + Monte Carlo engines) or
    `Sampler`s (Monte Carlo only).  Basepoints default to the identity on
    monoids and to the first atom of the first variable otherwise.
    """

    instance: MetricSemigroup
    variables: tuple
    z0: object
    z1: object
    label: str = ""

    @staticmethod
    def build(
        instance: MetricSemigroup,
        variables: Sequence,
        z0=None,
        z1=None,
        label: str = "",
    ) -> "IndependentSequence":
        variables = tuple(variables)
        if not variables:
            raise ValueError("sequence needs at least one variable")
        for var in variables:
            if _variable_is_discrete(var):
                for e, _ in var.atoms:
                    instance.require_element(e)
            elif not hasattr(var, "draw"):
                raise TypeError(f"variable {var!r} is neither discrete nor a sampler")
        if z0 is None or z1 is None:
            if instance.has_identity:
                default = instance.identity
            elif _variable_is_discrete(variables[0]):
                default = variables[0].atoms[0][0]
            else:
                raise ValueError("cannot default basepoints without identity or atoms")
            z0 = default if z0 is None else z0
            z1 = default if z1 is None else z1
        instance.require_element(z0)
        instance.require_element(z1)
        return IndependentSequence(instance, variables, z0, z1, label)

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def is_exact(self) -> bool:
        return all(_variable_is_discrete(v) for v in self.variables)

    @property
    def outcome_count(self) -> int:
        if not self.is_exact:
            raise ValueError("sequence has sampler-backed variables")
        return math.prod(len(v.atoms) for v in self.variables)

    def with_basepoints(self, z0, z1) -> "IndependentSequence":
        return IndependentSequence.build(
            self.instance, self.variables, z0, z1, self.label
        )

    def with_variables(self, variables: Sequence) -> "IndependentSequence":
        return IndependentSequence.build(
            self.instance, variables, self.z0, self.z1, self.label
        )

    @cached_property
    def magnitude_laws(self) -> tuple:
        """Law of each step's magnitude d(z0, z0 * x); basepoint-independent."""
        laws = []
        for var in self.variables:
            if not _variable_is_discrete(var):
                raise ValueError("magnitude laws need discrete variables")
            pairs = [
                (self.instance.distance(self.z0, self.instance.compose(self.z0, e)), p)
                for e, p in var.atoms
            ]
            laws.append(ScalarLaw.from_pairs(pairs))
        return tuple(laws)

    @cached_property
    def walk_peak_law(self) -> ScalarLaw:
        return exact_functional_law(self, WALK_PEAK)

    @cached_property
    def step_peak_law(self) -> ScalarLaw:
        """Law of the running maximum of step magnitudes (independent product)."""
        grid = sorted({v for law in self.magnitude_laws for v in law.values})
        pairs = []
        prev_cdf = 0
        for y in grid:
            cdf = math.prod(law.prob_le(y) for law in self.magnitude_laws)
            mass = cdf - prev_cdf
            if mass > 0:
                pairs.append((y, mass))
            prev_cdf = cdf
        return ScalarLaw.from_pairs(pairs)

    @cached_property
    def end_distance_law(self) -> ScalarLaw:
        return exact_functional_law(self, END_DISTANCE)


def path_trace(seq: IndependentSequence, outcome: Sequence) -> PathTrace:
    """All four path statistics for one outcome; validates elements."""
    if len(outcome) != seq.n:
        raise ValueError(f"outcome length {len(outcome)} != sequence length {seq.n}")
    for x in outcome:
        seq.instance.require_element(x)
    return _trace_unchecked(seq, outcome)


def _trace_unchecked(seq: IndependentSequence, outcome: Sequence) -> PathTrace:
    inst = seq.instance
    products = []
    peaks = []
    steps = []
    step_peaks = []
    cur = None
    shifted = seq.z0
    peak = None
    step_peak = None
    for x in outcome:
        cur = x if cur is None else inst.compose(cur, x)
        products.append(cur)
        shifted = inst.compose(shifted, x)
        dist = inst.distance(seq.z1, shifted)
        peak = dist if peak is None else max(peak, dist)
        peaks.append(peak)
        mag = inst.distance(seq.z0, inst.compose(seq.z0, x))
        steps.append(mag)
        step_peak = mag if step_peak is None else max(step_peak, mag)
        step_peaks.append(step_peak)
    return PathTrace(tuple(products), tuple(peaks), tuple(steps), tuple(step_peaks))


def _statistic_fn(seq: IndependentSequence, statistic) -> Callable:
    inst = seq.instance
    z0, z1 = seq.z0, seq.z1
    if statistic == WALK_PEAK:

        def walk_peak(outcome):
            cur = z0
            best = None
            for x in outcome:
                cur = inst.compose(cur, x)
                dist = inst.distance(z1, cur)
                if best is None or dist > best:
                    best = dist
            return best

        return walk_peak
    if statistic == STEP_PEAK:

        def step_peak(outcome):
            best = None
            for x in outcome:
                mag = inst.distance(z0, inst.compose(z0, x))
                if best is None or mag > best:
                    best = mag
            return best

        return step_peak
    if statistic == END_DISTANCE:

        def end_distance(outcome):
            cur = z0
            for x in outcome:
                cur = inst.compose(cur, x)
            return inst.distance(z1, cur)

        return end_distance
    if callable(statistic):
        return statistic
    raise ValueError(f"unknown statistic {statistic!r}")


def enumerate_outcomes(
    seq: IndependentSequence, cap: int = DEFAULT_ENUMERATION_CAP
) -> Iterator[tuple]:
    """Yield (outcome, probability) over the joint support."""
    if not seq.is_exact:
        raise ValueError("exact enumeration needs finitely supported variables")
    count = seq.outcome_count
    if count > cap:
        raise EnumerationCapError(f"{count} joint outcomes exceed the cap {cap}")
    supports = [var.atoms for var in seq.variables]
    for combo in itertools.product(*supports):
        outcome = tuple(e for e, _ in combo)
        prob = math.prod((p for _, p in combo), start=Fraction(1))
        yield outcome, prob


def exact_functional_law(
    seq: IndependentSequence,
    statistic,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> ScalarLaw:
    """Law of a nonnegative path functional under the product measure."""
    fn = _statistic_fn(seq, statistic)
    masses: dict = {}
    for outcome, prob in enumerate_outcomes(seq, cap):
        v = fn(outcome)
        masses[v] = masses.get(v, 0) + prob
    return ScalarLaw.from_pairs(masses.items())


# ---------------------------------------------------------------------------
# Monte Carlo engine


def _variable_drawers(seq: IndependentSequence):
    """Per-variable (width, kind, payload) used by the trial loop."""
    drawers = []
    for var in seq.variables:
        if _variable_is_discrete(var):
            atoms = [e for e, _ in var.atoms]
            cum = np.cumsum([float(p) for _, p in var.atoms])
            cum[-1] = 1.0
            drawers.append((1, "discrete", (atoms, cum)))
        else:
            drawers.append((var.width, "sampler", var))
    return drawers


def _mc_discrete_counts(seq, statistic, trials, seed, chunk_size) -> dict:
    """Trial loop specialized to all-discrete variables and named statistics."""
    inst = seq.instance
    z0, z1 = seq.z0, seq.z1
    compose = inst.compose
    distance = inst.distance
    atom_lists = [[e for e, _ in var.atoms] for var in seq.variables]
    cums = []
    for var in seq.variables:
        cum = np.cumsum([float(p) for _, p in var.atoms])
        cum[-1] = 1.0
        cums.append(cum)
    mag_lists = None
    if statistic == STEP_PEAK:
        mag_lists = [
            [distance(z0, compose(z0, e)) for e in atoms] for atoms in atom_lists
        ]
    n = seq.n
    var_range = range(n)
    counts: dict = {}
    done = 0
    while done < trials:
        batch = min(chunk_size, trials - done)
        u = uniform_block(seed, n, done, batch)
        cols = [
            np.searchsorted(cums[j], u[:, j], side="right").tolist() for j in var_range
        ]
        if statistic == WALK_PEAK:
            for row in range(batch):
                cur = z0
                best = None
                for j in var_range:
                    cur = compose(cur, atom_lists[j][cols[j][row]])
                    d = distance(z1, cur)
                    if best is None or d > best:
                        best = d
                counts[best] = counts.get(best, 0) + 1
        elif statistic == STEP_PEAK:
            for row in range(batch):
                best = None
                for j in var_range:
                    m = mag_lists[j][cols[j][row]]
                    if best is None or m > best:
                        best = m
                counts[best] = counts.get(best, 0) + 1
        else:  # END_DISTANCE
            for row in range(batch):
                cur = z0
                for j in var_range:
                    cur = compose(cur, atom_lists[j][cols[j][row]])
                d = distance(z1, cur)
                counts[d] = counts.get(d, 0) + 1
        done += batch
    return counts


def monte_carlo_law(
    seq: IndependentSequence,
    statistic=WALK_PEAK,
    trials: int = 10_000,
    seed: int = 0,
    chunk_size: int = 8192,
) -> ScalarLaw:
    """Empirical law of a path functional from seeded Monte Carlo.

    Trial t consumes a fixed window of a counter-based uniform stream keyed
    by `seed`, so the law is reproducible and independent of chunking.  On
    exact carriers the sampled functional values stay exact (Fraction/int)
    and the empirical measure is represented as counts/trials.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if seq.is_exact and statistic in (WALK_PEAK, STEP_PEAK, END_DISTANCE):
        counts = _mc_discrete_counts(seq, statistic, trials, seed, chunk_size)
        return ScalarLaw.from_counts(counts, trials, seed)
    fn = _statistic_fn(seq, statistic)
    drawers = _variable_drawers(seq)
    width = sum(w for w, _, _ in drawers)
    counts = {}
    done = 0
    while done < trials:
        batch = min(chunk_size, trials - done)
        u = uniform_block(seed, width, done, batch)
        index_cols = []
        col = 0
        for w, kind, payload in drawers:
            if kind == "discrete":
                _, cum = payload
                index_cols.append(np.searchsorted(cum, u[:, col], side="right"))
            else:
                index_cols.append(None)
            col += w
        for row in range(batch):
            outcome = []
            col = 0
            for (w, kind, payload), idx in zip(drawers, index_cols):
                if kind == "discrete":
                    atoms, _ = payload
                    outcome.append(atoms[min(int(idx[row]), len(atoms) - 1)])
                else:
                    outcome.append(payload.draw(u[row, col : col + w]))
                col += w
            v = fn(outcome)
            counts[v] = counts.get(v, 0) + 1
        done += batch
    return ScalarLaw.from_counts(counts, trials, seed)


def mc_tail_agreement(
    seq: IndependentSequence,
    statistic=WALK_PEAK,
    trials: int = 100_000,
    seed: int = 0,
) -> list[dict]:
    """Compare empirical and exact tails at every exact quantile-grid point.

    Returns one record per grid value with the exact tail, empirical tail,
    binomial standard error (from the exact tail), and |z|; deterministic
    points (tail 0 or 1) require exact agreement and report z = 0 or inf.
    """
    exact = exact_functional_law(seq, statistic)
    empirical = monte_carlo_law(seq, statistic, trials=trials, seed=seed)
    records = []
    for x in exact.quantile_grid():
        p = exact.tail(x)
        p_hat = empirical.tail(x)
        se = math.sqrt(float(p) * (1.0 - float(p)) / trials)
        diff = abs(float(p_hat - p))
        if se == 0.0:
            z = 0.0 if p_hat == p else math.inf
        else:
            z = diff / se
        records.append(
            {"x": x, "exact": p, "empirical": p_hat, "se": se, "z": z}
        )
    return records


# ---------------------------------------------------------------------------
# JSON configuration round-trip


def _prob_to_json(p):
    if isinstance(p, Fraction):
        return str(p)
    if isinstance(p, int):
        return str(Fraction(p))
    return float(p)


def _prob_from_json(j):
    if isinstance(j, str):
        return Fraction(j)
    if isinstance(j, bool):
        raise ValueError("probability cannot be a boolean")
    if isinstance(j, int):
        return Fraction(j)
    if isinstance(j, float):
        return j
    raise ValueError(f"cannot parse probability {j!r}")


def sequence_to_config(seq: IndependentSequence) -> dict:
    """Serializable description: instance spec, atoms with exact probabilities,
    and basepoints.  Sampler-backed variables cannot be serialized."""
    inst = seq.instance
    variables = []
    for var in seq.variables:
        if not _variable_is_discrete(var):
            raise ValueError("cannot serialize sampler-backed variables")
        variables.append(
            {
                "atoms": [
                    [inst.element_to_json(e), _prob_to_json(p)] for e, p in var.atoms
                ]
            }
        )
    return {
        "instance": inst.spec,
        "variables": variables,
        "z0": inst.element_to_json(seq.z0),
        "z1": inst.element_to_json(seq.z1),
    }


def sequence_engine_defaults(config: dict) -> dict:
    """Optional engine preferences carried by a sequence config file."""
    return {
        "engine": config.get("engine"),
        "trials": config.get("trials"),
        "seed": config.get("seed"),
    }


def sequence_from_config(config: dict) -> IndependentSequence:
    """Inverse of `sequence_to_config`; rejects unknown keys.

    Engine preferences (engine/trials/seed) may ride along in the same file;
    they do not affect the sequence itself (see `sequence_engine_defaults`).
    """
    allowed = {"instance", "variables", "z0", "z1", "label", "engine", "trials", "seed"}
    unknown = set(config) - allowed
    if unknown:
        raise ValueError(f"unknown sequence config keys: {sorted(unknown)}")
    if "instance" not in config or "variables" not in config:
        raise ValueError("sequence config needs 'instance' and 'variables'")
    if config.get("engine") not in (None, "exact", "mc"):
        raise ValueError(f"unknown engine {config['engine']!r}")
    inst = parse_instance(config["instance"])
    variables = []
    for entry in config["variables"]:
        extra = set(entry) - {"atoms"}
        if extra:
            raise ValueError(f"unknown variable config keys: {sorted(extra)}")
        atoms = [
            (inst.element_from_json(e), _prob_from_json(p)) for e, p in entry["atoms"]
        ]
        variables.append(DiscreteDistribution.of(atoms, instance=inst))
    z0 = inst.element_from_json(config["z0"]) if "z0" in config else None
    z1 = inst.element_from_json(config["z1"]) if "z1" in config else None
    return IndependentSequence.build(
        inst, variables, z0=z0, z1=z1, label=config.get("label", "")
    )
