"""Exact density ladders from balls-in-urns occupancy counts.

For a down-closed family A the simplex maximum of its pattern equals the
uniform-point value, which is a plain probability: throw r balls into s
urns uniformly and ask whether the sorted occupancy vector lands in A.
Walking a dominance-respecting enumeration of the compositions of r into
r parts therefore yields a ladder of exact values from 0 to 1 whose steps
are single occupancy probabilities.

Two independent routes to every count are kept apart deliberately: the
enumeration route sums multinomial weights over ordered occupancy vectors,
while the closed-form route multiplies a ball-assignment factor by an
urn-arrangement factor.  Tests compare them against each other and against
brute-force function enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

from .dominance import Composition, DownSet, linear_extension, pattern_of
from .simplex import OptResult, OptimizerConfig, certify_max_upper, maximize

from .patterns import eval_uniform_exact, lagrange_polynomial


@lru_cache(maxsize=None)
def _profile_weight_buckets(r: int, s: int) -> dict[Composition, int]:
    """Number of functions [r] -> [s] per sorted fiber-size vector.

    Enumerates ordered occupancy vectors depth-first, accumulating the
    multinomial weight r!/prod(e_i!) that counts the functions realizing
    each vector, and buckets the weights by sorted vector.
    """
    buckets: dict[Composition, int] = {}
    rf = factorial(r)

    def rec(slot: int, remaining: int, denom: int, prefix: tuple[int, ...]) -> None:
        if slot == s - 1:
            full = prefix + (remaining,)
            key = tuple(sorted(full, reverse=True))
            weight = rf // (denom * factorial(remaining))
            buckets[key] = buckets.get(key, 0) + weight
            return
        for e in range(remaining + 1):
            rec(slot + 1, remaining - e, denom * factorial(e), prefix + (e,))

    rec(0, r, 1, ())
    return buckets


def uniform_value_exact(a: DownSet) -> Fraction:
    """Probability that the sorted occupancy of r balls in s urns lies in a.

    Computed by the enumeration route (multinomial weights of ordered
    occupancy vectors); equals the uniform-point value of the pattern's
    polynomial.
    """
    buckets = _profile_weight_buckets(a.r, a.s)
    hits = sum(buckets.get(c, 0) for c in a.members)
    return Fraction(hits, a.s**a.r)


def occupancy_count(rr: Composition, s: int) -> int:
    """Closed form: functions [r] -> [s] with sorted fiber sizes rr.

    The first factor places the balls for one fixed assignment of counts to
    urns; the second counts the distinct ways to assign the multiset of
    counts to the s labeled urns.
    """
    if len(rr) > s:
        raise ValueError(f"composition {rr} has more than s={s} parts")
    if any(v < 0 for v in rr):
        raise ValueError(f"composition {rr} has a negative part")
    padded = tuple(rr) + (0,) * (s - len(rr))
    if list(padded) != sorted(padded, reverse=True):
        raise ValueError(f"composition {rr} is not sorted non-increasing")
    r = sum(padded)
    balls = factorial(r)
    for v in padded:
        balls //= factorial(v)
    counts: dict[int, int] = {}
    for v in padded:
        counts[v] = counts.get(v, 0) + 1
    urns = factorial(s)
    for mult in counts.values():
        urns //= factorial(mult)
    return balls * urns


def urn_probability_exact(rr: Composition, s: int | None = None) -> Fraction:
    """Exact probability of sorted occupancy rr for r balls in s urns.

    s defaults to r, the square case used by the ladder; shorter tuples are
    padded with zeros.
    """
    r = sum(rr)
    if s is None:
        s = r
    return Fraction(occupancy_count(rr, s), s**r)


@dataclass(frozen=True)
class LadderEntry:
    index: int
    composition: Composition | None  # None for the empty starting rung
    value: Fraction
    step: Fraction

    def __post_init__(self) -> None:
        if not 0 <= self.value <= 1:
            raise ValueError(f"ladder value {self.value} outside [0, 1]")
        if self.step < 0:
            raise ValueError(f"ladder step {self.step} is negative")


def ladder(r: int) -> tuple[LadderEntry, ...]:
    """Exact value ladder over the prefixes of the dominance enumeration.

    Entry 0 is the empty family with value 0; entry i adds the i-th
    composition, and the final value is exactly 1.
    """
    order = linear_extension(r)
    buckets = _profile_weight_buckets(r, r)
    denom = r**r
    entries = [LadderEntry(0, None, Fraction(0), Fraction(0))]
    acc = 0
    for i, comp in enumerate(order, start=1):
        w = buckets.get(comp, 0)
        acc += w
        entries.append(
            LadderEntry(i, comp, Fraction(acc, denom), Fraction(w, denom))
        )
    if entries[-1].value != 1:
        raise AssertionError("ladder must end at exactly 1")
    return tuple(entries)


def max_step(r: int) -> tuple[Fraction, Composition]:
    """Largest ladder step and its composition; ties to the lowest index."""
    best: tuple[Fraction, Composition] | None = None
    for e in ladder(r)[1:]:
        if best is None or e.step > best[0]:
            assert e.composition is not None
            best = (e.step, e.composition)
    assert best is not None
    return best


def monte_carlo_urns(
    r: int, trials: int, seed: int = 0
) -> dict[Composition, float]:
    """Empirical frequencies of sorted occupancy vectors, seeded.

    Every composition of r into r parts appears as a key, unseen ones with
    frequency 0.  Identical seeds give identical output.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    throws = rng.integers(0, r, size=(trials, r))
    offsets = np.arange(trials, dtype=np.int64)[:, None] * r
    flat = (throws + offsets).ravel()
    occ = np.bincount(flat, minlength=trials * r).reshape(trials, r)
    occ = -np.sort(-occ, axis=1)
    uniq, counts = np.unique(occ, axis=0, return_counts=True)
    freq = {comp: 0.0 for comp in linear_extension(r)}
    for row, c in zip(uniq, counts):
        freq[tuple(int(v) for v in row)] = c / trials
    return freq


@dataclass(frozen=True)
class LemmaReport:
    """Cross-check that a down-closed pattern peaks at the uniform point."""

    down_set: DownSet
    uniform_value: Fraction
    opt_value: float
    kkt_residual: float
    lower_ok: bool
    upper_ok: bool
    grid_bound: float | None
    point: tuple[float, ...]

    @property
    def passed(self) -> bool:
        return self.lower_ok and self.upper_ok


def _default_resolution(m: int) -> int:
    # denser grids in low dimension, where they are cheap and the additive
    # Lipschitz term would otherwise drown the bound
    return {1: 800, 2: 800, 3: 200}.get(m, 60)


def verify_lemma(
    a: DownSet,
    opt: OptimizerConfig | None = None,
    grid_resolution: int | None = None,
) -> LemmaReport:
    """Optimize the pattern of a and compare with the exact uniform value.

    The optimizer value must land in [u - 1e-9, u + 1e-6]; the lower side
    is unconditional because the uniform point is always among the starts.
    For s <= 4 a grid sweep additionally certifies an upper bound >= u.
    """
    u = uniform_value_exact(a)
    p = pattern_of(a)
    res: OptResult = maximize(p, opt)
    lower_ok = res.value >= float(u) - 1e-9
    upper_ok = res.value <= float(u) + 1e-6
    grid_bound = None
    if a.s <= 4:
        grid_bound = certify_max_upper(p, grid_resolution or _default_resolution(a.s))
        upper_ok = upper_ok and grid_bound >= float(u) - 1e-9
    return LemmaReport(
        down_set=a,
        uniform_value=u,
        opt_value=res.value,
        kkt_residual=res.kkt_residual,
        lower_ok=lower_ok,
        upper_ok=upper_ok,
        grid_bound=grid_bound,
        point=tuple(float(v) for v in res.point),
    )


def uniform_value_via_polynomial(a: DownSet) -> Fraction:
    """Second route to the uniform value, through the pattern polynomial."""
    return eval_uniform_exact(lagrange_polynomial(pattern_of(a)), a.s)
