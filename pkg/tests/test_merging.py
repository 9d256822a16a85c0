import random

import pytest

from beliefmerge import (
    FALSE,
    FORGETTING_FORMS,
    InconsistentKBError,
    OPERATORS,
    Profile,
    TRUE,
    conj,
    distance_to_formula,
    entails,
    equivalent,
    merge_f1,
    merge_f2,
    merge_gmax,
    merge_gmax_forget,
    merge_max,
    merge_max_forget,
    merge_sigma,
    merge_sigma_forget,
    models,
    parse,
    to_dnf,
)
from beliefmerge.postulates import VAR_POOL, random_consistent_formula, random_dnf


class TestProfile:
    def test_vocabulary_covers_constraint_and_extras(self):
        prof = Profile((parse("p"),), parse("q"), extra_vars=("z",))
        assert prof.vocabulary == ("p", "q", "z")

    def test_inconsistent_kb_rejected(self):
        with pytest.raises(InconsistentKBError) as info:
            Profile((parse("p"), parse("q & !q")))
        assert info.value.index == 1

    def test_needs_a_kb(self):
        with pytest.raises(ValueError):
            Profile(())

    def test_inconsistent_constraint_is_allowed(self):
        Profile((parse("p"),), parse("q & !q"))  # degenerate, but constructible


class TestCoOwners:
    def test_sigma(self, co_owners):
        result = merge_sigma(co_owners)
        assert equivalent(result.formula, parse("S & T & P & I"))
        assert result.k == 5

    def test_max_matches_a_hand_oracle(self, co_owners):
        result = merge_max(co_owners)
        vocab = co_owners.vocabulary
        scored = {}
        for omega in models(co_owners.constraint, vocab):
            scored[omega.mask] = max(distance_to_formula(omega, kb)
                                     for kb in co_owners.kbs)
        best = min(scored.values())
        oracle = {m for m, score in scored.items() if score == best}
        assert result.model_set.masks == oracle
        assert result.k == best == 2

    def test_gmax(self, co_owners):
        result = merge_gmax(co_owners)
        assert equivalent(result.formula, parse("!S & !I & ((!T & P) | (T & !P))"))
        assert result.distance_tuple == (2, 2, 1, 1)

    def test_f1_and_f2(self, co_owners):
        constrained_quiet = conj([parse("!I"), co_owners.constraint])
        for op in (merge_f1, merge_f2):
            result = op(co_owners)
            assert equivalent(result.formula, constrained_quiet)
            assert result.forgetting_family == (("P", "S", "T"),)

    def test_gmax_worst_entry_matches_max_k(self, co_owners):
        assert max(merge_gmax(co_owners).distance_tuple) == merge_max(co_owners).k


class TestSplitVote:
    def test_f1(self, split_vote):
        result = merge_f1(split_vote)
        assert result.forgetting_family == (("p",),)
        assert equivalent(result.formula, parse("!q & !r & !s"))

    def test_f2(self, split_vote):
        result = merge_f2(split_vote)
        assert result.forgetting_family == (("p",), ("q", "r"))
        assert equivalent(result.formula, parse("(!q & !r & !s) | (!p & !s)"))

    def test_f1_strictly_stronger_than_f2(self, split_vote):
        f1 = merge_f1(split_vote).formula
        f2 = merge_f2(split_vote).formula
        assert entails(f1, f2)
        assert not equivalent(f1, f2)


class TestSmallProfiles:
    def test_jointly_consistent_profiles_conjoin(self):
        prof = Profile((parse("p"), parse("p | q")), parse("q | !q"))
        expected = conj([*prof.kbs, prof.constraint])
        for tag, op in OPERATORS.items():
            assert equivalent(op(prof).formula, expected), tag

    def test_flat_contradiction(self):
        prof = Profile((parse("p"), parse("!p")))
        assert equivalent(merge_sigma(prof).formula, TRUE)
        assert merge_sigma(prof).k == 1
        assert equivalent(merge_max(prof).formula, TRUE)
        f1 = merge_f1(prof)
        assert f1.forgetting_family == (("p",),)
        assert equivalent(f1.formula, TRUE)
        forget_form = merge_sigma_forget(prof)
        assert forget_form.k == 1
        assert equivalent(forget_form.formula, TRUE)

    def test_single_kb(self):
        prof = Profile((parse("p & q"),))
        for tag, op in OPERATORS.items():
            assert equivalent(op(prof).formula, parse("p & q")), tag

    def test_degenerate_constraint(self):
        prof = Profile((parse("p"),), parse("q & !q"))
        for tag, op in OPERATORS.items():
            result = op(prof)
            assert result.degenerate_constraint, tag
            assert result.formula == FALSE
            assert len(result.model_set) == 0
        assert merge_f1(prof).forgetting_family == ()

    def test_sigma_is_majority_sensitive_where_f_operators_are_not(self):
        base = (parse("p"), parse("!p"))
        doubled = (parse("p"), parse("!p"), parse("!p"))
        assert equivalent(merge_sigma(Profile(base)).formula, TRUE)
        assert equivalent(merge_sigma(Profile(doubled)).formula, parse("!p"))
        for op in (merge_f1, merge_f2):
            assert equivalent(op(Profile(base)).formula, op(Profile(doubled)).formula)
            assert (op(Profile(base)).forgetting_family
                    == op(Profile(doubled)).forgetting_family)


class TestResultInvariants:
    def test_result_entails_constraint_and_dnf_matches_models(self):
        rng = random.Random("merge-invariants")
        for _ in range(40):
            names = VAR_POOL[: rng.randint(1, 4)]
            kbs = tuple(random_dnf(rng, names) for _ in range(rng.randint(1, 3)))
            mu = random_consistent_formula(rng, names)
            prof = Profile(kbs, mu)
            mu_masks = models(mu, prof.vocabulary).masks
            for tag, op in OPERATORS.items():
                result = op(prof)
                assert result.model_set.masks <= mu_masks, tag
                assert result.model_set.masks, tag  # consistent constraint
                assert to_dnf(result.model_set) == result.formula, tag

    def test_sigma_k_matches_an_independent_sum(self):
        rng = random.Random("sigma-k")
        for _ in range(40):
            names = VAR_POOL[: rng.randint(1, 4)]
            kbs = tuple(random_dnf(rng, names) for _ in range(rng.randint(1, 3)))
            mu = random_consistent_formula(rng, names)
            prof = Profile(kbs, mu)
            best = min(sum(distance_to_formula(omega, kb) for kb in kbs)
                       for omega in models(mu, prof.vocabulary))
            assert merge_sigma(prof).k == best

    def test_f_family_members_restore_consistency(self):
        from beliefmerge import forget

        rng = random.Random("fs-invariant")
        for _ in range(30):
            names = VAR_POOL[: rng.randint(2, 4)]
            kbs = tuple(random_dnf(rng, names) for _ in range(rng.randint(1, 3)))
            mu = random_consistent_formula(rng, names)
            prof = Profile(kbs, mu)
            r1, r2 = merge_f1(prof), merge_f2(prof)
            cards = {len(v) for v in r1.forgetting_family}
            assert len(cards) == 1  # cardinality-minimal family is uniform
            family2 = [set(v) for v in r2.forgetting_family]
            assert not any(a < b for a in family2 for b in family2)  # antichain
            assert set(r1.forgetting_family) <= set(r2.forgetting_family)
            assert entails(r1.formula, r2.formula)
            for family in (r1.forgetting_family, r2.forgetting_family):
                for chosen in family:
                    merged = conj([*(forget(kb, chosen) for kb in kbs), mu])
                    assert models(merged, prof.vocabulary).masks

    def test_all_kbs_agreeing_on_a_literal_keeps_it_out_of_the_family(self):
        rng = random.Random("agreed-literal")
        for _ in range(30):
            body = VAR_POOL[1:4]
            lit = parse("p") if rng.random() < 0.5 else parse("!p")
            kbs = tuple(conj([random_dnf(rng, body), lit])
                        for _ in range(rng.randint(1, 3)))
            mu = random_consistent_formula(rng, body)
            prof = Profile(kbs, mu)
            for result in (merge_f1(prof), merge_f2(prof)):
                assert all("p" not in chosen for chosen in result.forgetting_family)


class TestForgettingForms:
    def test_agree_on_the_co_owners_profile(self, co_owners):
        assert (merge_sigma_forget(co_owners).model_set.masks
                == merge_sigma(co_owners).model_set.masks)
        assert merge_sigma_forget(co_owners).k == 5
        assert (merge_max_forget(co_owners).model_set.masks
                == merge_max(co_owners).model_set.masks)
        assert merge_max_forget(co_owners).k == 2
        gm = merge_gmax_forget(co_owners)
        assert gm.model_set.masks == merge_gmax(co_owners).model_set.masks
        assert gm.distance_tuple == (2, 2, 1, 1)

    def test_agree_on_random_profiles(self):
        rng = random.Random("forms")
        for _ in range(60):
            names = VAR_POOL[: rng.randint(2, 4)]
            kbs = tuple(random_dnf(rng, names) for _ in range(rng.randint(1, 3)))
            mu = random_consistent_formula(rng, names)
            prof = Profile(kbs, mu)
            for tag, forget_form in FORGETTING_FORMS.items():
                base = OPERATORS[tag](prof)
                other = forget_form(prof)
                assert base.model_set.masks == other.model_set.masks, tag
                assert base.k == other.k, tag
                assert base.distance_tuple == other.distance_tuple, tag

    def test_degenerate_constraint(self):
        prof = Profile((parse("p"),), parse("q & !q"))
        for forget_form in FORGETTING_FORMS.values():
            result = forget_form(prof)
            assert result.degenerate_constraint
            assert result.formula == FALSE
