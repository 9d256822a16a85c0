import random
from itertools import product

import pytest

from beliefmerge import (
    FALSE,
    InconsistentFormulaError,
    Interpretation,
    ModelSet,
    TRUE,
    UnknownVariableError,
    VocabularyCapError,
    dalal,
    distance_to_formula,
    entails,
    equivalent,
    evaluate,
    formula_distance,
    is_consistent,
    models,
    parse,
    to_dnf,
    vocabulary_union,
)
from beliefmerge.postulates import VAR_POOL, random_formula


def interp(**assignment):
    return Interpretation.from_assignment(assignment)


class TestInterpretation:
    def test_mask_round_trip(self):
        vocab = ("p", "q", "r")
        for mask in range(8):
            i = Interpretation.from_mask(vocab, mask)
            assert i.mask == mask
            assert len(i.bits) == 3

    def test_value_and_switch(self):
        i = interp(p=1, q=0)
        assert i.value("p") == 1 and i.value("q") == 0
        assert i.switched("q").bits == (1, 1)
        with pytest.raises(UnknownVariableError):
            i.value("z")

    def test_validation(self):
        with pytest.raises(ValueError):
            Interpretation(("q", "p"), (0, 1))  # unsorted vocabulary
        with pytest.raises(ValueError):
            Interpretation(("p",), (0, 1))


class TestEvaluate:
    def test_basic(self):
        assert evaluate(parse("p & q"), interp(p=1, q=1)) is True
        assert evaluate(FALSE, interp(p=0)) is False

    def test_co_owners_constraint(self):
        # two projects built and no rent increase breaks the constraint
        mu = parse("((S & T) | (S & P) | (T & P)) -> I")
        assert evaluate(mu, interp(S=1, T=1, P=1, I=0)) is False
        assert evaluate(mu, interp(S=1, T=1, P=1, I=1)) is True
        assert evaluate(mu, interp(S=0, T=0, P=1, I=0)) is True

    def test_unknown_variable(self):
        with pytest.raises(UnknownVariableError):
            evaluate(parse("p & z"), interp(p=1))


class TestModels:
    def test_counting(self):
        assert len(models(TRUE, ("p",))) == 2
        assert len(models(parse("S & T & P"), ("I", "P", "S", "T"))) == 2
        assert len(models(parse("p & !p"), ("p",))) == 0

    def test_enumeration_order_is_binary_ascending(self):
        got = [i.mask for i in models(TRUE, ("p", "q"))]
        assert got == [0, 1, 2, 3]

    def test_against_per_assignment_evaluation(self):
        # the truth-table engine versus the one-assignment recursion
        rng = random.Random("models-vs-evaluate")
        for _ in range(150):
            names = VAR_POOL[: rng.randint(1, 4)]
            formula = random_formula(rng, names, depth=3)
            vocab = vocabulary_union(formula, extra=names)
            by_table = {i.mask for i in models(formula, vocab)}
            by_eval = {m for m in range(1 << len(vocab))
                       if evaluate(formula, Interpretation.from_mask(vocab, m))}
            assert by_table == by_eval

    def test_vocabulary_extension_projects_back(self):
        rng = random.Random("models-extend")
        for _ in range(80):
            names = VAR_POOL[: rng.randint(1, 3)]
            formula = random_formula(rng, names, depth=3)
            vocab = vocabulary_union(formula, extra=names)
            wide = tuple(sorted((*vocab, "zz")))
            narrow = models(formula, vocab)
            extended = models(formula, wide)
            assert len(extended) == 2 * len(narrow)
            j = wide.index("zz")
            shift = len(wide) - 1 - j
            projected = set()
            for mask in extended.masks:
                low = mask & ((1 << shift) - 1)
                projected.add(((mask >> (shift + 1)) << shift) | low)
            assert projected == set(narrow.masks)

    def test_cap(self):
        with pytest.raises(VocabularyCapError):
            models(TRUE, ("a", "b", "c", "d"), cap=3)

    def test_unknown_variable(self):
        with pytest.raises(UnknownVariableError):
            models(parse("p"), ("q",))


class TestDalal:
    def test_cases(self):
        a = interp(I=1, P=1, S=1, T=1)
        b = interp(I=0, P=0, S=0, T=0)
        assert dalal(a, a) == 0
        assert dalal(a, b) == 4
        assert dalal(interp(p=1, q=1, r=1), interp(p=0, q=1, r=1)) == 1

    def test_vocabulary_mismatch(self):
        with pytest.raises(ValueError):
            dalal(interp(p=1), interp(q=1))

    def test_metric_axioms_exhaustively(self):
        vocab = ("a", "b", "c", "d")
        points = [Interpretation.from_mask(vocab, m) for m in range(16)]
        for x, y in product(points, repeat=2):
            assert dalal(x, y) == dalal(y, x)
            assert (dalal(x, y) == 0) == (x == y)
        for x, y, z in product(points, repeat=3):
            assert dalal(x, z) <= dalal(x, y) + dalal(y, z)


class TestDistanceToFormula:
    def test_zero_iff_model(self):
        rng = random.Random("dist-zero")
        for _ in range(100):
            names = VAR_POOL[: rng.randint(1, 4)]
            formula = random_formula(rng, names, depth=3)
            vocab = vocabulary_union(formula, extra=names)
            sat = models(formula, vocab)
            if not sat.masks:
                continue
            for mask in range(1 << len(vocab)):
                i = Interpretation.from_mask(vocab, mask)
                assert (distance_to_formula(i, formula) == 0) == (i in sat)

    def test_hand_values(self):
        allfalse = interp(S=0, T=0, P=0, I=0)
        assert distance_to_formula(allfalse, parse("S & T & P")) == 3
        assert distance_to_formula(allfalse, parse("T & P & !I")) == 2

    def test_inconsistent_formula_rejected(self):
        with pytest.raises(InconsistentFormulaError):
            distance_to_formula(interp(p=0), parse("p & !p"))


class TestEntailment:
    def test_cases(self):
        assert equivalent(parse("p -> q"), parse("!p | q"))
        assert entails(parse("p & q"), parse("p"))
        assert not entails(parse("p"), parse("p & q"))
        # vacuous extra variables do not matter
        assert equivalent(parse("p"), parse("p & (q | !q)"))

    def test_consistency(self):
        assert is_consistent(parse("p | !p"))
        assert not is_consistent(parse("p & !p"))


class TestFormulaDistance:
    def test_cases(self):
        assert formula_distance(parse("p"), parse("!p")) == 1
        assert formula_distance(parse("p & q"), parse("!p & !q")) == 2
        assert formula_distance(parse("p"), parse("p | q")) == 0

    def test_inconsistent_operand_rejected(self):
        with pytest.raises(InconsistentFormulaError):
            formula_distance(parse("p & !p"), parse("p"))


class TestToDnf:
    def test_fixed_points(self):
        assert to_dnf(ModelSet(("p",), frozenset())) == FALSE
        single = models(parse("p & !q"), ("p", "q"))
        assert to_dnf(single) == parse("p & !q")
        both = models(TRUE, ("p",))
        assert to_dnf(both) == parse("!p | p")

    def test_empty_vocabulary(self):
        assert to_dnf(ModelSet((), frozenset({0}))) == TRUE

    def test_equivalence_on_random_formulas(self):
        rng = random.Random("dnf")
        for _ in range(150):
            names = VAR_POOL[: rng.randint(1, 4)]
            formula = random_formula(rng, names, depth=3)
            vocab = vocabulary_union(formula, extra=names)
            assert equivalent(formula, to_dnf(models(formula, vocab)))


class TestModelSet:
    def test_membership_and_bitstrings(self):
        ms = models(parse("p | q"), ("p", "q"))
        assert interp(p=1, q=0) in ms
        assert interp(p=0, q=0) not in ms
        assert ms.bitstrings() == ["01", "10", "11"]
