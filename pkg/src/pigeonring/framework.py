"""The featurize/box/bound filtering-instance abstraction.

A filtering instance binds a selection function f to a ring of box
values: featurize extracts features, box_eval scores the i-th pair of
feature subbags, and bound maps the query threshold to the ring bound
n.  ``check_completeness`` / ``check_tightness`` verify the instance's
contract by enumerating a finite toy universe; they are sound but
cannot prove anything beyond the supplied universe.
"""

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .ring import AT_MOST, BoxSequence, ThresholdSpec, find_prefix_viable_starts


@dataclass(frozen=True)
class FilterInstance:
    featurize: Callable
    box_eval: Callable          # (x_feats, q_feats, i) -> number
    box_count: Callable         # (q, tau) -> m
    bound: Callable             # tau -> n
    direction: str = AT_MOST
    # (q, tau, m) -> ThresholdSpec; default: fixed quota with n = bound(tau)
    threshold_builder: Callable | None = None

    def spec_for(self, q, tau, m) -> ThresholdSpec:
        if self.threshold_builder is not None:
            return self.threshold_builder(q, tau, m)
        return ThresholdSpec.fixed(self.bound(tau), self.direction)


@dataclass(frozen=True)
class ToyUniverse:
    """A finite object universe with a reference selection function."""

    objects: tuple
    f: Callable = field(compare=False)


def evaluate_boxes(inst: FilterInstance, x, q, tau) -> BoxSequence:
    m = inst.box_count(q, tau)
    xf = inst.featurize(x)
    qf = inst.featurize(q)
    return BoxSequence(tuple(inst.box_eval(xf, qf, i) for i in range(m)))


def is_candidate(inst: FilterInstance, x, q, tau, l) -> bool:
    b = evaluate_boxes(inst, x, q, tau)
    spec = inst.spec_for(q, tau, b.m)
    return bool(find_prefix_viable_starts(b, spec, l))


def _pair_table(inst: FilterInstance, universe: ToyUniverse, tau):
    """(f value, box sum, x, q) for every ordered pair."""
    rows = []
    for x in universe.objects:
        for q in universe.objects:
            s = evaluate_boxes(inst, x, q, tau).total()
            rows.append((universe.f(x, q), s, x, q))
    return rows


def check_completeness(inst: FilterInstance, universe: ToyUniverse, tau=None) -> list:
    """Violations of the completeness conditions over all pairs.

    Condition 1: the box sum never exceeds bound(f(x, q)) (at-most
    direction; reversed for at-least).  Condition 2: no pair with a
    smaller f value may have a box sum beyond the bound of a pair with
    a larger f value.  The quadruple condition is checked by sorting
    on f and scanning a running extreme of the box sums.
    """
    at_most = inst.direction == AT_MOST
    rows = _pair_table(inst, universe, tau)
    violations = []
    for fv, s, x, q in rows:
        bound = inst.bound(fv)
        bad = s > bound if at_most else s < bound
        if bad:
            violations.append(("condition-1", x, q, fv, s))
    rows.sort(key=lambda r: r[0])
    # worst box sum seen among pairs with strictly smaller f
    worst = None
    i = 0
    n = len(rows)
    while i < n:
        j = i
        while j < n and rows[j][0] == rows[i][0]:
            j += 1
        if worst is not None:
            bound = inst.bound(rows[i][0])
            bad = worst[1] > bound if at_most else worst[1] < bound
            if bad:
                violations.append(("condition-2", worst[2], worst[3], rows[i][0]))
        for r in rows[i:j]:
            if worst is None or (r[1] > worst[1] if at_most else r[1] < worst[1]):
                worst = r
        i = j
    return violations


def check_tightness(inst: FilterInstance, universe: ToyUniverse, tau=None) -> list:
    """Violations of the tightness conditions over all pairs.

    On top of condition 1, no pair with a smaller f value may carry a
    bound that already covers the box sum of a pair with a larger f
    value (otherwise the bound cannot separate the two f levels).
    """
    at_most = inst.direction == AT_MOST
    rows = _pair_table(inst, universe, tau)
    violations = []
    for fv, s, x, q in rows:
        bound = inst.bound(fv)
        bad = s > bound if at_most else s < bound
        if bad:
            violations.append(("condition-1", x, q, fv, s))
    rows.sort(key=lambda r: r[0])
    best_bound = None  # most permissive bound among strictly smaller f
    i = 0
    n = len(rows)
    while i < n:
        j = i
        while j < n and rows[j][0] == rows[i][0]:
            j += 1
        if best_bound is not None:
            for fv, s, x, q in rows[i:j]:
                covered = best_bound[0] >= s if at_most else best_bound[0] <= s
                if covered:
                    violations.append(("condition-2", best_bound[1], best_bound[2], x, q))
        for fv, s, x, q in rows[i:j]:
            b = inst.bound(fv)
            if best_bound is None or (b > best_bound[0] if at_most else b < best_bound[0]):
                best_bound = (b, x, q)
        i = j
    return violations
