"""Merge operators over profiles of knowledge bases.

Three operators pick constraint models by minimising an aggregate of
Hamming distances to the KBs (sum, worst case, sorted-vector
lexicographic).  Each of those also has a second, forgetting-based
construction that searches over per-KB sets of forgotten variables; the
two constructions are provably equivalent and the tests hold them to it.
The last two operators, f1 and f2, forget one *shared* variable set from
every KB, minimal by cardinality (f1) or by set inclusion (f2).

All searches run over switch-closures of truth tables, which is exactly
the model characterisation of forgetting; the syntactic ``forget`` in
:mod:`beliefmerge.forgetting` is the operator the closure is validated
against.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Callable, Iterator, Sequence

from .formula import FALSE, Formula, TRUE, variables
from .semantics import (
    DEFAULT_VOCAB_CAP,
    ModelSet,
    _assignment_space,
    _iter_masks,
    to_dnf,
    truth_vector,
    vocabulary_union,
)


class InconsistentKBError(Exception):
    """A knowledge base in a profile has no models."""

    def __init__(self, index: int):
        super().__init__(f"knowledge base #{index + 1} is inconsistent")
        self.index = index


@dataclass(frozen=True)
class Profile:
    """An ordered multiset of consistent KBs plus one integrity constraint.

    Repetition is meaningful: majority-sensitive operators react to it.
    Every KB must be consistent (checked here); the constraint may be
    inconsistent, in which case merging degenerates to ``false``.
    """

    kbs: tuple[Formula, ...]
    constraint: Formula = TRUE
    extra_vars: tuple[str, ...] = ()
    # derived once at construction; identical for equal profiles
    vocabulary: tuple[str, ...] = field(init=False, compare=False, repr=False)
    kb_variables: tuple[tuple[str, ...], ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "kbs", tuple(self.kbs))
        object.__setattr__(self, "extra_vars", tuple(self.extra_vars))
        if not self.kbs:
            raise ValueError("a profile needs at least one knowledge base")
        kb_variables = tuple(variables(kb) for kb in self.kbs)
        for index, (kb, names) in enumerate(zip(self.kbs, kb_variables)):
            if not truth_vector(kb, names):
                raise InconsistentKBError(index)
        object.__setattr__(self, "kb_variables", kb_variables)
        merged = set(self.extra_vars).union(variables(self.constraint), *kb_variables)
        object.__setattr__(self, "vocabulary", tuple(sorted(merged)))


@dataclass(frozen=True)
class MergeResult:
    """Winning models of one merge, their canonical DNF, and the operator's
    evidence: the minimal aggregate ``k``, the minimal sorted distance
    tuple, or the family of forgotten-variable sets."""

    operator: str
    model_set: ModelSet
    formula: Formula
    k: int | None = None
    distance_tuple: tuple[int, ...] | None = None
    forgetting_family: tuple[tuple[str, ...], ...] | None = None
    degenerate_constraint: bool = False


def _result(tag: str, vocab: tuple[str, ...], masks, **evidence) -> MergeResult:
    model_set = ModelSet(vocab, frozenset(masks))
    return MergeResult(tag, model_set, to_dnf(model_set), **evidence)


def _degenerate(tag: str, vocab: tuple[str, ...], **evidence) -> MergeResult:
    return MergeResult(tag, ModelSet(vocab, frozenset()), FALSE,
                       degenerate_constraint=True, **evidence)


# ---------------------------------------------------------------------------
# distance-minimising forms

def _model_merge(profile: Profile, aggregate, cap: int):
    """Constraint models minimising ``aggregate`` of per-KB distances."""
    vocab = profile.vocabulary
    mu_vector = truth_vector(profile.constraint, vocab, cap)
    if not mu_vector:
        return vocab, None, None
    # repeated KBs share one mask list; positions map back to the multiset
    distinct: dict[Formula, int] = {}
    mask_lists: list[list[int]] = []
    for kb in profile.kbs:
        if kb not in distinct:
            distinct[kb] = len(mask_lists)
            mask_lists.append(list(_iter_masks(truth_vector(kb, vocab, cap))))
    positions = [distinct[kb] for kb in profile.kbs]
    best_key = None
    winners: list[int] = []
    for mask in _iter_masks(mu_vector):
        nearest = [min((mask ^ m).bit_count() for m in masks)
                   for masks in mask_lists]
        key = aggregate(tuple(nearest[j] for j in positions))
        if best_key is None or key < best_key:
            best_key, winners = key, [mask]
        elif key == best_key:
            winners.append(mask)
    return vocab, winners, best_key


def merge_sigma(profile: Profile, cap: int = DEFAULT_VOCAB_CAP) -> MergeResult:
    """Keep the constraint models with the least summed distance to the KBs."""
    vocab, winners, best = _model_merge(profile, sum, cap)
    if winners is None:
        return _degenerate("sigma", vocab)
    return _result("sigma", vocab, winners, k=best)


def merge_max(profile: Profile, cap: int = DEFAULT_VOCAB_CAP) -> MergeResult:
    """Keep the constraint models with the least worst-case distance."""
    vocab, winners, best = _model_merge(profile, max, cap)
    if winners is None:
        return _degenerate("max", vocab)
    return _result("max", vocab, winners, k=best)


def merge_gmax(profile: Profile, cap: int = DEFAULT_VOCAB_CAP) -> MergeResult:
    """Keep the constraint models whose descending-sorted distance vectors
    are lexicographically least."""
    vocab, winners, best = _model_merge(
        profile, lambda vec: tuple(sorted(vec, reverse=True)), cap)
    if winners is None:
        return _degenerate("gmax", vocab)
    return _result("gmax", vocab, winners, distance_tuple=best)


# ---------------------------------------------------------------------------
# forgetting-based forms

class _ClosureTable:
    """Per-KB truth tables and their switch-closures, memoised per forgotten
    set.  Closing a table under flips of V is the model-level form of
    forgetting V."""

    def __init__(self, profile: Profile, vocab: tuple[str, ...], cap: int):
        self.space, self.patterns = _assignment_space(vocab)
        n = len(vocab)
        self.weights = {name: 1 << (n - 1 - j) for j, name in enumerate(vocab)}
        first_index: dict[Formula, int] = {}
        base_by_formula: dict[Formula, int] = {}
        for i, kb in enumerate(profile.kbs):
            if kb not in base_by_formula:
                base_by_formula[kb] = truth_vector(kb, vocab, cap)
                first_index[kb] = i
        self.base = [base_by_formula[kb] for kb in profile.kbs]
        self.kb_vars = list(profile.kb_variables)
        self._keys = [first_index[kb] for kb in profile.kbs]
        self._cache: dict[tuple[int, tuple[str, ...]], int] = {}

    def closed(self, index: int, names: tuple[str, ...]) -> int:
        """Truth table of KB ``index`` closed under flips of ``names``."""
        if not names:
            return self.base[index]
        key = (self._keys[index], names)
        cached = self._cache.get(key)
        if cached is None:
            prev = self.closed(index, names[:-1])
            name = names[-1]
            weight = self.weights[name]
            high = self.patterns[name]
            low = self.space ^ high
            cached = prev | ((prev & high) >> weight) | ((prev & low) << weight)
            self._cache[key] = cached
        return cached

    def closed_shared(self, index: int, names: tuple[str, ...]) -> int:
        """Closure under a set shared across the profile; variables foreign
        to this KB are flip-free already and are dropped."""
        own = set(self.kb_vars[index])
        return self.closed(index, tuple(v for v in names if v in own))


def _prepare(profile: Profile, cap: int):
    vocab = profile.vocabulary
    mu_vector = truth_vector(profile.constraint, vocab, cap)
    return vocab, mu_vector


def _selection_union(table: _ClosureTable, mu_vector: int,
                     counts: Sequence[int]) -> int:
    """Union over all per-KB choices of ``counts[i]`` forgotten variables of
    the conjunction of closures with the constraint.  Counts beyond a KB's
    own variable count saturate at forgetting everything it has."""
    choices = []
    for i, count in enumerate(counts):
        own = table.kb_vars[i]
        choices.append(list(combinations(own, min(count, len(own)))))
    union = 0
    for selection in product(*choices):
        vector = mu_vector
        for i, names in enumerate(selection):
            vector &= table.closed(i, names)
            if not vector:
                break
        union |= vector
    return union


def _compositions(total: int, caps: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """All tuples with sum ``total`` and 0 <= c_i <= caps[i], lexicographic."""
    if not caps:
        if total == 0:
            yield ()
        return
    rest = caps[1:]
    rest_total = sum(rest)
    for first in range(max(0, total - rest_total), min(caps[0], total) + 1):
        for tail in _compositions(total - first, rest):
            yield (first, *tail)


def _descending_tuples(length: int, bound: int) -> Iterator[tuple[int, ...]]:
    """Non-increasing tuples over 0..bound in ascending lexicographic order."""
    if length == 0:
        yield ()
        return
    for first in range(bound + 1):
        for tail in _descending_tuples(length - 1, first):
            yield (first, *tail)


def merge_sigma_forget(profile: Profile, cap: int = DEFAULT_VOCAB_CAP) -> MergeResult:
    """Sum merge rebuilt from forgetting: raise the total number of
    variables forgotten across the KBs until some split of that total makes
    the forgotten KBs jointly consistent with the constraint."""
    vocab, mu_vector = _prepare(profile, cap)
    if not mu_vector:
        return _degenerate("sigma-forget", vocab)
    table = _ClosureTable(profile, vocab, cap)
    sizes = [len(v) for v in table.kb_vars]
    for k in range(sum(sizes) + 1):
        union = 0
        for counts in _compositions(k, sizes):
            union |= _selection_union(table, mu_vector, counts)
        if union:
            return _result("sigma-forget", vocab, _iter_masks(union), k=k)
    raise AssertionError("unreachable: forgetting every variable always succeeds")


def merge_max_forget(profile: Profile, cap: int = DEFAULT_VOCAB_CAP) -> MergeResult:
    """Worst-case merge rebuilt from forgetting: every KB forgets the same
    number of variables, the least number that restores joint consistency."""
    vocab, mu_vector = _prepare(profile, cap)
    if not mu_vector:
        return _degenerate("max-forget", vocab)
    table = _ClosureTable(profile, vocab, cap)
    bound = max(len(v) for v in table.kb_vars)
    for k in range(bound + 1):
        union = _selection_union(table, mu_vector, (k,) * len(profile.kbs))
        if union:
            return _result("max-forget", vocab, _iter_masks(union), k=k)
    raise AssertionError("unreachable: forgetting every variable always succeeds")


def merge_gmax_forget(profile: Profile, cap: int = DEFAULT_VOCAB_CAP) -> MergeResult:
    """Leximax merge rebuilt from forgetting: per-KB forget counts are drawn
    from the permutations of one descending tuple, and tuples are tried in
    ascending lexicographic order until the disjunction is consistent."""
    vocab, mu_vector = _prepare(profile, cap)
    if not mu_vector:
        return _degenerate("gmax-forget", vocab)
    table = _ClosureTable(profile, vocab, cap)
    bound = max(len(v) for v in table.kb_vars)
    for tup in _descending_tuples(len(profile.kbs), bound):
        union = 0
        for counts in sorted(set(permutations(tup))):
            union |= _selection_union(table, mu_vector, counts)
        if union:
            return _result("gmax-forget", vocab, _iter_masks(union),
                           distance_tuple=tup)
    raise AssertionError("unreachable: forgetting every variable always succeeds")


# ---------------------------------------------------------------------------
# shared-forgetting-set operators

def _family_merge(profile: Profile, tag: str, by_inclusion: bool,
                  cap: int) -> MergeResult:
    vocab, mu_vector = _prepare(profile, cap)
    if not mu_vector:
        return _degenerate(tag, vocab, forgetting_family=())
    table = _ClosureTable(profile, vocab, cap)
    pool = vocabulary_union(*profile.kbs)
    family: list[tuple[str, ...]] = []
    union = 0
    for size in range(len(pool) + 1):
        for candidate in combinations(pool, size):
            if by_inclusion and any(set(found) <= set(candidate) for found in family):
                continue  # strict superset of a success cannot be minimal
            vector = mu_vector
            for i in range(len(profile.kbs)):
                vector &= table.closed_shared(i, candidate)
                if not vector:
                    break
            if vector:
                family.append(candidate)
                union |= vector
        if family and not by_inclusion:
            break  # cardinality-minimal: stop at the first populated size
    return _result(tag, vocab, _iter_masks(union),
                   forgetting_family=tuple(family))


def merge_f1(profile: Profile, cap: int = DEFAULT_VOCAB_CAP) -> MergeResult:
    """Forget one shared variable set of minimal cardinality from every KB;
    the result is the disjunction over all such sets of the forgotten KBs
    conjoined with the constraint."""
    return _family_merge(profile, "f1", by_inclusion=False, cap=cap)


def merge_f2(profile: Profile, cap: int = DEFAULT_VOCAB_CAP) -> MergeResult:
    """As f1, but the shared forgotten sets are minimal by set inclusion."""
    return _family_merge(profile, "f2", by_inclusion=True, cap=cap)


OPERATORS: dict[str, Callable[..., MergeResult]] = {
    "sigma": merge_sigma,
    "max": merge_max,
    "gmax": merge_gmax,
    "f1": merge_f1,
    "f2": merge_f2,
}

FORGETTING_FORMS: dict[str, Callable[..., MergeResult]] = {
    "sigma": merge_sigma_forget,
    "max": merge_max_forget,
    "gmax": merge_gmax_forget,
}
