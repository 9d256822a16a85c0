"""Executable rationality postulates for merge operators.

Each postulate is a boolean check over one concrete instance (profile
groups, constraints, possibly a literal); conditionals with a false
antecedent count as satisfied.  ``check_randomized`` drives seeded random
instances built to the postulate's preconditions and reports violations in
a replayable serialisation.

Two quantifiers are necessarily truncated: the majority property searches
its existential repetition count up to ``MAJORITY_BOUND`` and majority
independence samples n from ``MI_SAMPLES``, so clean runs of those two are
reported as ``bounded-pass`` rather than ``pass``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from itertools import permutations
from typing import Callable, Mapping, Sequence

from .formula import (
    And,
    Atom,
    Constant,
    FALSE,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    TRUE,
    conj,
    disj,
    fold_constants,
    format_formula,
    parse,
    variables,
)
from .merging import MergeResult, OPERATORS, Profile
from .profile_io import parse_profile_parts
from .semantics import (
    DEFAULT_VOCAB_CAP,
    entails,
    equivalent,
    is_consistent,
    models,
    truth_vector,
    vocabulary_union,
)


class PostulateId(Enum):
    IC0 = "IC0"
    IC1 = "IC1"
    IC2 = "IC2"
    IC3 = "IC3"
    IC4 = "IC4"
    IC5 = "IC5"
    IC6 = "IC6"
    IC7 = "IC7"
    IC8 = "IC8"
    MAJ = "Maj"
    MI = "MI"
    A1 = "A1"
    A2 = "A2"


MAJORITY_BOUND = 8
MI_SAMPLES = (2, 3)

MergeOperator = Callable[..., MergeResult]


@dataclass(frozen=True)
class PostulateInstance:
    """The objects one postulate quantifies over.

    ``groups`` holds the KB groups in the postulate's own order (a single
    group for IC0-IC2/IC7/IC8/A2, two groups for the union-shaped
    postulates, the distinguished subgroup first for A1).  ``constraints``
    holds one constraint, or two for IC3/IC7/IC8.
    """

    groups: tuple[tuple[Formula, ...], ...]
    constraints: tuple[Formula, ...]
    literal: Formula | None = None


def _merge(operator: MergeOperator, kbs: Sequence[Formula], constraint: Formula,
           cap: int) -> MergeResult:
    return operator(Profile(tuple(kbs), constraint), cap=cap)


def _negated(literal: Formula) -> Formula:
    if isinstance(literal, Not):
        return literal.child
    return Not(literal)


def _groups_equivalent(first: Sequence[Formula], second: Sequence[Formula],
                       cap: int) -> bool:
    """Is there a bijection matching the groups KB-by-KB up to equivalence?"""
    if len(first) != len(second):
        return False
    for perm in permutations(range(len(second))):
        if all(equivalent(a, second[j], cap=cap) for a, j in zip(first, perm)):
            return True
    return False


# ---------------------------------------------------------------------------
# the individual checks

def _check_ic0(op, inst, cap):
    (group,), (mu,) = inst.groups, inst.constraints
    return entails(_merge(op, group, mu, cap).formula, mu, cap=cap)


def _check_ic1(op, inst, cap):
    (group,), (mu,) = inst.groups, inst.constraints
    if not is_consistent(mu, cap=cap):
        return True
    return len(_merge(op, group, mu, cap).model_set) > 0


def _check_ic2(op, inst, cap):
    (group,), (mu,) = inst.groups, inst.constraints
    whole = conj([*group, mu])
    if not is_consistent(whole, cap=cap):
        return True
    return equivalent(_merge(op, group, mu, cap).formula, whole, cap=cap)


def _check_ic3(op, inst, cap):
    (g1, g2), (mu1, mu2) = inst.groups, inst.constraints
    if not (_groups_equivalent(g1, g2, cap) and equivalent(mu1, mu2, cap=cap)):
        return True
    return equivalent(_merge(op, g1, mu1, cap).formula,
                      _merge(op, g2, mu2, cap).formula, cap=cap)


def _check_ic4(op, inst, cap):
    (pair,), (mu,) = inst.groups, inst.constraints
    phi, psi = pair
    if not (entails(phi, mu, cap=cap) and entails(psi, mu, cap=cap)):
        return True
    merged = _merge(op, (phi, psi), mu, cap).formula
    if not is_consistent(conj([merged, phi]), cap=cap):
        return True
    return is_consistent(conj([merged, psi]), cap=cap)


def _check_ic5(op, inst, cap):
    (g1, g2), (mu,) = inst.groups, inst.constraints
    both = conj([_merge(op, g1, mu, cap).formula, _merge(op, g2, mu, cap).formula])
    return entails(both, _merge(op, g1 + g2, mu, cap).formula, cap=cap)


def _check_ic6(op, inst, cap):
    (g1, g2), (mu,) = inst.groups, inst.constraints
    both = conj([_merge(op, g1, mu, cap).formula, _merge(op, g2, mu, cap).formula])
    if not is_consistent(both, cap=cap):
        return True
    return entails(_merge(op, g1 + g2, mu, cap).formula, both, cap=cap)


def _check_ic7(op, inst, cap):
    (group,), (mu1, mu2) = inst.groups, inst.constraints
    narrowed = conj([_merge(op, group, mu1, cap).formula, mu2])
    return entails(narrowed, _merge(op, group, conj([mu1, mu2]), cap).formula, cap=cap)


def _check_ic8(op, inst, cap):
    (group,), (mu1, mu2) = inst.groups, inst.constraints
    narrowed = conj([_merge(op, group, mu1, cap).formula, mu2])
    if not is_consistent(narrowed, cap=cap):
        return True
    return entails(_merge(op, group, conj([mu1, mu2]), cap).formula, narrowed, cap=cap)


def _check_maj(op, inst, cap):
    (g1, g2), (mu,) = inst.groups, inst.constraints
    target = _merge(op, g2, mu, cap).formula
    for n in range(1, MAJORITY_BOUND + 1):
        if entails(_merge(op, g1 + g2 * n, mu, cap).formula, target, cap=cap):
            return True
    return False


def _check_mi(op, inst, cap):
    (g1, g2), (mu,) = inst.groups, inst.constraints
    base = _merge(op, g1 + g2, mu, cap).formula
    return all(equivalent(_merge(op, g1 + g2 * n, mu, cap).formula, base, cap=cap)
               for n in MI_SAMPLES)


def _check_a1(op, inst, cap):
    (special, rest), (mu,) = inst.groups, inst.constraints
    literal = inst.literal
    if literal is None or not special:
        return True
    if any(not entails(kb, literal, cap=cap) for kb in special):
        return True
    if set(variables(literal)) & set(vocabulary_union(*rest)):
        return True
    if not is_consistent(conj([literal, mu]), cap=cap):
        return True
    merged = _merge(op, special + rest, mu, cap).formula
    return entails(merged, conj([literal, mu]), cap=cap)


def _check_a2(op, inst, cap):
    (group,), (mu,) = inst.groups, inst.constraints
    literal = inst.literal
    if literal is None:
        return True
    opposite = _negated(literal)
    if not (any(entails(kb, literal, cap=cap) for kb in group)
            and any(entails(kb, opposite, cap=cap) for kb in group)):
        return True
    merged = _merge(op, group, mu, cap).formula
    return not entails(merged, literal, cap=cap) and not entails(merged, opposite, cap=cap)


_CHECKS: Mapping[PostulateId, Callable] = {
    PostulateId.IC0: _check_ic0,
    PostulateId.IC1: _check_ic1,
    PostulateId.IC2: _check_ic2,
    PostulateId.IC3: _check_ic3,
    PostulateId.IC4: _check_ic4,
    PostulateId.IC5: _check_ic5,
    PostulateId.IC6: _check_ic6,
    PostulateId.IC7: _check_ic7,
    PostulateId.IC8: _check_ic8,
    PostulateId.MAJ: _check_maj,
    PostulateId.MI: _check_mi,
    PostulateId.A1: _check_a1,
    PostulateId.A2: _check_a2,
}


def check(postulate: PostulateId, operator: MergeOperator,
          instance: PostulateInstance, cap: int = DEFAULT_VOCAB_CAP) -> bool:
    """Truth of one postulate on one instance, via the semantics oracle."""
    return _CHECKS[postulate](operator, instance, cap)


# ---------------------------------------------------------------------------
# claimed verdicts

_P = PostulateId
_ALL_IC = (_P.IC0, _P.IC1, _P.IC2, _P.IC3, _P.IC4, _P.IC5, _P.IC6, _P.IC7, _P.IC8)

CLAIMED_PASS: dict[str, frozenset[PostulateId]] = {
    "sigma": frozenset((*_ALL_IC, _P.MAJ)),
    "max": frozenset((_P.IC0, _P.IC1, _P.IC2, _P.IC3, _P.IC4, _P.IC5,
                      _P.IC7, _P.IC8, _P.MI)),
    "gmax": frozenset(_ALL_IC),
    "f1": frozenset((_P.IC0, _P.IC1, _P.IC2, _P.IC3, _P.IC4,
                     _P.IC7, _P.IC8, _P.MI, _P.A1, _P.A2)),
    "f2": frozenset((_P.IC0, _P.IC1, _P.IC2, _P.IC3, _P.IC4,
                     _P.IC7, _P.MI, _P.A1, _P.A2)),
}

# cells where a counterexample is the interesting outcome
EXPECTED_FAIL: dict[str, frozenset[PostulateId]] = {
    "max": frozenset((_P.IC6, _P.MAJ)),
    "f1": frozenset((_P.IC5, _P.IC6)),
    "f2": frozenset((_P.IC8,)),
}


# ---------------------------------------------------------------------------
# random instance generation

VAR_POOL = ("p", "q", "r", "s", "t", "u", "v", "w")


@dataclass(frozen=True)
class GeneratorBounds:
    max_vars: int = 4
    max_kbs: int = 3
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.max_vars <= len(VAR_POOL):
            raise ValueError(f"max_vars must be in 1..{len(VAR_POOL)}")
        if self.max_kbs < 1:
            raise ValueError("max_kbs must be at least 1")


def _trial_rng(seed: int, trial: int) -> random.Random:
    # string seeding is deterministic across processes, unlike hash()
    return random.Random(f"{seed}:{trial}")


def _random_term(rng: random.Random, names: Sequence[str]) -> Formula:
    chosen = rng.sample(names, rng.randint(1, len(names)))
    return conj([Atom(n) if rng.random() < 0.5 else Not(Atom(n)) for n in chosen])


def random_dnf(rng: random.Random, names: Sequence[str]) -> Formula:
    """Random DNF over ``names``; consistent by construction, since each
    term conjoins literals over distinct variables."""
    return disj([_random_term(rng, names) for _ in range(rng.randint(1, 3))])


def random_formula(rng: random.Random, names: Sequence[str], depth: int = 3) -> Formula:
    """Random formula tree over all connectives, for parser and property
    exercises; not guaranteed consistent."""
    if depth == 0 or rng.random() < 0.3:
        if rng.random() < 0.08:
            return TRUE if rng.random() < 0.5 else FALSE
        return Atom(rng.choice(list(names)))
    kind = rng.choice(("not", "and", "or", "implies", "iff"))
    if kind == "not":
        return Not(random_formula(rng, names, depth - 1))
    if kind in ("and", "or"):
        parts = tuple(random_formula(rng, names, depth - 1)
                      for _ in range(rng.randint(2, 3)))
        return And(parts) if kind == "and" else Or(parts)
    lhs = random_formula(rng, names, depth - 1)
    rhs = random_formula(rng, names, depth - 1)
    return Implies(lhs, rhs) if kind == "implies" else Iff(lhs, rhs)


def random_consistent_formula(rng: random.Random, names: Sequence[str],
                              depth: int = 3) -> Formula:
    """Rejection-sampled consistent formula; falls back to a DNF, which is
    consistent by construction, if rejection drags on."""
    for _ in range(50):
        candidate = random_formula(rng, names, depth)
        if truth_vector(candidate, variables(candidate)):
            return candidate
    return random_dnf(rng, names)


def generate_instance(bounds: GeneratorBounds,
                      seed: int | random.Random = 0) -> PostulateInstance:
    """Generic random instance: two groups of consistent KBs (random DNFs)
    and two consistent constraints.  Deterministic for a fixed seed."""
    rng = seed if isinstance(seed, random.Random) else random.Random(f"{seed}:instance")
    names = VAR_POOL[:bounds.max_vars]
    groups = tuple(
        tuple(random_dnf(rng, names) for _ in range(rng.randint(1, bounds.max_kbs)))
        for _ in range(2))
    constraints = tuple(random_consistent_formula(rng, names) for _ in range(2))
    return PostulateInstance(groups, constraints)


def equivalent_rewrite(formula: Formula, rng: random.Random) -> Formula:
    """Random syntax-only rewrite preserving logical equivalence: double
    negation, child reversal, material-implication and biconditional
    unfolding, and both directions of negation pushing."""
    rewritten = _rewrite_structure(formula, rng)
    if rng.random() < 0.2:
        rewritten = Not(Not(rewritten))
    return rewritten


def _rewrite_structure(formula: Formula, rng: random.Random) -> Formula:
    roll = rng.random()
    if isinstance(formula, (Atom, Constant)):
        return formula
    if isinstance(formula, Not):
        child = formula.child
        if isinstance(child, And) and roll < 0.5:
            return Or(tuple(Not(_rewrite_structure(c, rng)) for c in child.children))
        if isinstance(child, Or) and roll < 0.5:
            return And(tuple(Not(_rewrite_structure(c, rng)) for c in child.children))
        return Not(_rewrite_structure(child, rng))
    if isinstance(formula, And):
        parts = [_rewrite_structure(c, rng) for c in formula.children]
        if roll < 0.5:
            parts.reverse()
        return And(tuple(parts))
    if isinstance(formula, Or):
        parts = [_rewrite_structure(c, rng) for c in formula.children]
        if roll < 0.5:
            parts.reverse()
        return Or(tuple(parts))
    if isinstance(formula, Implies):
        lhs = _rewrite_structure(formula.lhs, rng)
        rhs = _rewrite_structure(formula.rhs, rng)
        if roll < 0.5:
            return Or((Not(lhs), rhs))
        return Implies(lhs, rhs)
    if isinstance(formula, Iff):
        lhs = _rewrite_structure(formula.lhs, rng)
        rhs = _rewrite_structure(formula.rhs, rng)
        if roll < 0.5:
            return And((Implies(lhs, rhs), Implies(rhs, lhs)))
        return Iff(lhs, rhs)
    return formula


def instance_for(postulate: PostulateId, bounds: GeneratorBounds,
                 rng: random.Random, cap: int = DEFAULT_VOCAB_CAP) -> PostulateInstance:
    """Random instance shaped to the postulate's preconditions."""
    names = VAR_POOL[:bounds.max_vars]
    base = generate_instance(bounds, rng)
    if postulate in (PostulateId.IC0, PostulateId.IC1):
        return PostulateInstance(base.groups[:1], base.constraints[:1])
    if postulate == PostulateId.IC2:
        group, mu = base.groups[0], base.constraints[0]
        for _ in range(25):  # bias toward a live antecedent
            if is_consistent(conj([*group, mu]), cap=cap):
                break
            group = tuple(random_dnf(rng, names) for _ in range(len(group)))
        return PostulateInstance((group,), (mu,))
    if postulate == PostulateId.IC3:
        group, mu = base.groups[0], base.constraints[0]
        order = rng.sample(range(len(group)), len(group))
        twin = tuple(equivalent_rewrite(group[j], rng) for j in order)
        return PostulateInstance((group, twin), (mu, equivalent_rewrite(mu, rng)))
    if postulate == PostulateId.IC4:
        mu = base.constraints[0]
        pair = []
        for _ in range(2):
            for _ in range(50):
                candidate = fold_constants(conj([random_dnf(rng, names), mu]))
                if is_consistent(candidate, cap=cap):
                    pair.append(candidate)
                    break
            else:
                pair.append(mu)  # mu itself is a consistent KB entailing mu
        return PostulateInstance(((pair[0], pair[1]),), (mu,))
    if postulate in (PostulateId.IC5, PostulateId.IC6, PostulateId.MAJ, PostulateId.MI):
        return PostulateInstance(base.groups, base.constraints[:1])
    if postulate in (PostulateId.IC7, PostulateId.IC8):
        return PostulateInstance(base.groups[:1], base.constraints)
    if postulate == PostulateId.A1:
        return _a1_instance(bounds, rng, names)
    if postulate == PostulateId.A2:
        return _a2_instance(bounds, rng, names)
    raise ValueError(f"no generator for {postulate}")


def _fresh_literal(rng: random.Random, names: Sequence[str]) -> tuple[Formula, tuple[str, ...]]:
    """A literal on the last pool variable, kept out of everything else so
    that it is genuinely uncontested outside the constructed KBs."""
    if len(names) < 2:
        raise ValueError("literal-property instances need at least 2 variables")
    body = tuple(names[:-1])
    atom = Atom(names[-1])
    literal = atom if rng.random() < 0.5 else Not(atom)
    return literal, body


def _a1_instance(bounds, rng, names) -> PostulateInstance:
    literal, body = _fresh_literal(rng, names)
    total = rng.randint(1, bounds.max_kbs)
    supporters = rng.randint(1, total)
    special = tuple(fold_constants(conj([random_dnf(rng, body), literal]))
                    for _ in range(supporters))
    rest = tuple(random_dnf(rng, body) for _ in range(total - supporters))
    mu = random_consistent_formula(rng, body)
    return PostulateInstance((special, rest), (mu,), literal)


def _a2_instance(bounds, rng, names) -> PostulateInstance:
    if bounds.max_kbs < 2:
        raise ValueError("contested-literal instances need at least 2 KBs")
    literal, body = _fresh_literal(rng, names)
    kbs = [fold_constants(conj([random_dnf(rng, body), literal])),
           fold_constants(conj([random_dnf(rng, body), _negated(literal)]))]
    kbs.extend(random_dnf(rng, body) for _ in range(rng.randint(0, bounds.max_kbs - 2)))
    rng.shuffle(kbs)
    mu = random_consistent_formula(rng, body)
    return PostulateInstance((tuple(kbs),), (mu,), literal)


# ---------------------------------------------------------------------------
# randomized suites, serialisation, replay

@dataclass
class CheckReport:
    """Outcome of one randomized cell.  ``verdict`` is ``fail`` exactly when
    violations were recorded; clean Maj/MI cells are ``bounded-pass``
    because their quantifiers are truncated."""

    postulate: PostulateId
    operator: str
    trials: int
    violations: tuple[dict, ...]
    verdict: str

    def __post_init__(self):
        expected = "fail" if self.violations else (
            "bounded-pass" if self.postulate in (PostulateId.MAJ, PostulateId.MI)
            else "pass")
        if self.verdict != expected:
            raise ValueError(f"verdict {self.verdict!r} contradicts the violations")


def check_randomized(postulate: PostulateId, operator: str, trials: int,
                     bounds: GeneratorBounds,
                     cap: int = DEFAULT_VOCAB_CAP) -> CheckReport:
    """Run ``trials`` seeded random instances of one postulate against one
    operator.  Deterministic for fixed bounds; trial i draws its randomness
    from (seed, i) alone."""
    op = OPERATORS[operator]
    violations = []
    for trial in range(trials):
        rng = _trial_rng(bounds.seed, trial)
        instance = instance_for(postulate, bounds, rng, cap)
        if not check(postulate, op, instance, cap=cap):
            violations.append(serialize_violation(postulate, operator, trial,
                                                  instance, cap=cap))
    verdict = "fail" if violations else (
        "bounded-pass" if postulate in (PostulateId.MAJ, PostulateId.MI) else "pass")
    return CheckReport(postulate, operator, trials, tuple(violations), verdict)


def _group_text(kbs: Sequence[Formula], constraint: Formula) -> str:
    lines = [f"constraint: {format_formula(constraint)}"]
    lines.extend(f"kb: {format_formula(kb)}" for kb in kbs)
    return "\n".join(lines) + "\n"


def _sides(postulate: PostulateId, operator: MergeOperator,
           inst: PostulateInstance, cap: int) -> tuple[Formula, Formula]:
    """The two formulas whose comparison decides the postulate; stored with
    violations as evidence."""
    P = PostulateId
    groups, cons = inst.groups, inst.constraints
    if postulate in (P.IC0, P.IC1):
        return _merge(operator, groups[0], cons[0], cap).formula, cons[0]
    if postulate == P.IC2:
        return _merge(operator, groups[0], cons[0], cap).formula, conj([*groups[0], cons[0]])
    if postulate == P.IC3:
        return (_merge(operator, groups[0], cons[0], cap).formula,
                _merge(operator, groups[1], cons[1], cap).formula)
    if postulate == P.IC4:
        merged = _merge(operator, groups[0], cons[0], cap).formula
        return conj([merged, groups[0][0]]), conj([merged, groups[0][1]])
    if postulate in (P.IC5, P.IC6):
        both = conj([_merge(operator, groups[0], cons[0], cap).formula,
                     _merge(operator, groups[1], cons[0], cap).formula])
        joint = _merge(operator, groups[0] + groups[1], cons[0], cap).formula
        return (both, joint) if postulate == P.IC5 else (joint, both)
    if postulate in (P.IC7, P.IC8):
        narrowed = conj([_merge(operator, groups[0], cons[0], cap).formula, cons[1]])
        joint = _merge(operator, groups[0], conj([cons[0], cons[1]]), cap).formula
        return (narrowed, joint) if postulate == P.IC7 else (joint, narrowed)
    if postulate == P.MAJ:
        return (_merge(operator, groups[0] + groups[1] * MAJORITY_BOUND, cons[0], cap).formula,
                _merge(operator, groups[1], cons[0], cap).formula)
    if postulate == P.MI:
        return (_merge(operator, groups[0] + groups[1] * MI_SAMPLES[0], cons[0], cap).formula,
                _merge(operator, groups[0] + groups[1], cons[0], cap).formula)
    if postulate == P.A1:
        assert inst.literal is not None
        return (_merge(operator, groups[0] + groups[1], cons[0], cap).formula,
                conj([inst.literal, cons[0]]))
    if postulate == P.A2:
        assert inst.literal is not None
        return _merge(operator, groups[0], cons[0], cap).formula, inst.literal
    raise ValueError(f"no sides for {postulate}")


def serialize_violation(postulate: PostulateId, operator: str, trial: int,
                        instance: PostulateInstance,
                        cap: int = DEFAULT_VOCAB_CAP) -> dict:
    """JSON-friendly record of a violating instance: each KB group in the
    profile file format, both evaluated sides as model lists."""
    lhs, rhs = _sides(postulate, OPERATORS[operator], instance, cap)
    vocab = vocabulary_union(lhs, rhs)
    return {
        "postulate": postulate.value,
        "operator": operator,
        "trial": trial,
        "profiles": [_group_text(group, instance.constraints[min(i, len(instance.constraints) - 1)])
                     for i, group in enumerate(instance.groups)],
        "constraints": [format_formula(c) for c in instance.constraints],
        "literal": None if instance.literal is None else format_formula(instance.literal),
        "vocabulary": list(vocab),
        "lhs_models": models(lhs, vocab, cap).bitstrings(),
        "rhs_models": models(rhs, vocab, cap).bitstrings(),
    }


def instance_from_record(record: Mapping) -> PostulateInstance:
    """Rebuild the instance a violation record serialised."""
    groups = []
    for text in record["profiles"]:
        kbs, _constraint, _extra = parse_profile_parts(text)
        groups.append(kbs)
    constraints = tuple(parse(text) for text in record["constraints"])
    literal = parse(record["literal"]) if record.get("literal") else None
    return PostulateInstance(tuple(groups), constraints, literal)


def replay_violation(record: Mapping, cap: int = DEFAULT_VOCAB_CAP) -> bool:
    """Re-evaluate a stored violation from its serialisation; True means it
    still violates."""
    instance = instance_from_record(record)
    operator = OPERATORS[record["operator"]]
    return not check(PostulateId(record["postulate"]), operator, instance, cap=cap)
