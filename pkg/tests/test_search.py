import json
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gmk.axioms import SCHEMES, THEOREMS, resolve_system
from gmk.formula import parse_formula, variables
from gmk.frames import FRAME_PROPERTIES, check_filter, close_under, frame_properties
from gmk.search import (
    Counterexample, Exhausted, FuzzConfig, ModelSpace, SearchBounds, SearchError, enumerate_crisp_models,
    enumerate_valued_models, find_countermodel, fuzz_axiom_soundness, fuzz_schemes, random_formula,
    random_frame_model, random_model, search_result_to_json,
)
from gmk.semantics import KripkeModel, chain_collapse, evaluate, model_from_json, uniform_chain
from helpers import formulas

CR = parse_formula("[](0 | q) -> []0 | <>q")


class TestEnumeration:
    @pytest.mark.parametrize("n,k,vars,count", [(1, 2, ["p"], 4), (2, 2, [], 16), (2, 3, ["p"], 144), (2, 3, ["p", "q"], 1296)])
    def test_counts(self, n, k, vars, count):
        models = list(enumerate_crisp_models(n, k, vars))
        assert len(models) == count == ModelSpace(n, k, vars).size
        assert all(m.is_crisp for m in models)

    def test_all_distinct(self):
        models = list(enumerate_crisp_models(2, 3, ["p"]))
        keys = {json.dumps(m.to_json(), sort_keys=True) for m in models}
        assert len(keys) == len(models)

    def test_valued_count(self):
        assert len(list(enumerate_valued_models(1, 3, ["p"]))) == 9

    def test_documented_order(self):
        space = ModelSpace(2, 3, ["p"])
        assert space.model_at(0) == KripkeModel(["w1", "w2"])
        # last valuation digit is the fastest, and it is p at w2
        assert space.model_at(1).value("p", "w2") == F(1, 2)
        # the relation digits change only after all valuations
        assert space.model_at(9).edges() == {("w2", "w2")}

    def test_bad_space(self):
        with pytest.raises(SearchError):
            ModelSpace(0, 2, [])
        with pytest.raises(SearchError):
            SearchBounds(1, 1)


class TestFindCountermodel:
    def test_t_box(self):
        f = parse_formula("[]p -> p")
        res = find_countermodel(f, SearchBounds(2, 2, crisp=True))
        assert isinstance(res, Counterexample)
        assert evaluate(res.model, res.world, f) == res.value == 0
        assert res.model.is_crisp and len(res.model.worlds) <= 2
        # the reference two-world refutation is also in the space
        m = KripkeModel.crisp(["u", "w"], [("u", "w")], {"p": {"w": 1}})
        assert evaluate(m, "u", f) == 0

    def test_cr_valued(self):
        res = find_countermodel(CR, SearchBounds(2, 3, crisp=False))
        assert isinstance(res, Counterexample)
        assert not res.model.is_crisp
        assert evaluate(res.model, res.world, CR) == res.value == F(1, 2)

    def test_cr_crisp_exhausted(self):
        res = find_countermodel(CR, SearchBounds(3, 4, crisp=True))
        assert isinstance(res, Exhausted)
        assert res.models_checked == 2 * 4 + 16 * 16 + 512 * 64

    def test_variable_budget(self):
        with pytest.raises(SearchError):
            find_countermodel(parse_formula("p & q & r & s"), SearchBounds(1, 2, variable_budget=3))

    def test_report_never_claims_validity(self):
        doc = search_result_to_json(CR, find_countermodel(CR, SearchBounds(1, 2)))
        assert doc["outcome"] == "exhausted" and "NOT" in doc["note"]
        assert "valid" not in doc["outcome"]

    def test_counterexample_report_reloads(self):
        res = find_countermodel(CR, SearchBounds(2, 3, crisp=False))
        doc = json.loads(json.dumps(search_result_to_json(CR, res)))
        m = model_from_json(doc["model"])
        assert str(evaluate(m, doc["world"], CR)) == doc["value"]

    @settings(max_examples=60, deadline=None)
    @given(formulas(("p", "q"), max_leaves=6))
    def test_oracle_agreement(self, f):
        # brute force over the same bounded space
        bounds = SearchBounds(2, 2, crisp=True)
        res = find_countermodel(f, bounds)
        vars = variables(f)
        brute = [(m, w) for n in (1, 2) for m in enumerate_crisp_models(n, 2, vars)
                 for w in m.worlds if evaluate(m, w, f) != 1]
        assert isinstance(res, Exhausted) == (not brute)
        if brute:
            assert evaluate(res.model, res.world, f) == res.value < 1
            assert (res.model, res.world) == brute[0]

    def test_jobs_do_not_change_answer(self):
        f = parse_formula("<>p -> []<>p")
        one = find_countermodel(f, SearchBounds(3, 3), jobs=1)
        four = find_countermodel(f, SearchBounds(3, 3), jobs=4)
        assert one == four

    def test_chain_completeness(self):
        # a refutation with arbitrary rationals collapses onto the n*v+2 chain
        m = KripkeModel(["u", "w"], {("u", "w"): "3/11"}, {"q": {"w": "7/10"}})
        assert evaluate(m, "u", CR) < 1
        m2, _ = chain_collapse(m)
        assert evaluate(m2, "u", CR) < 1
        k = 2 * 1 + 2
        res = find_countermodel(CR, SearchBounds(2, k, crisp=False))
        assert isinstance(res, Counterexample)


class TestRandom:
    def test_random_model_deterministic(self):
        a = random_model(3, 4, True, ["p", "q"], seed=11)
        assert a == random_model(3, 4, True, ["p", "q"], seed=11)
        assert a.is_crisp

    def test_two_valued(self):
        m = random_model(3, 2, False, ["p"], seed=3)
        assert m.occurring_values() <= {0, 1}

    def test_random_formula_bounds(self):
        rng = random.Random(0)
        for _ in range(200):
            f = random_formula(rng, 3, ["p", "q"])
            assert set(variables(f)) <= {"p", "q"}

    @pytest.mark.parametrize("prop", sorted(FRAME_PROPERTIES))
    def test_frame_filter_respected(self, prop):
        rng = random.Random(prop)
        for _ in range(50):
            rel, _, _ = random_frame_model(rng, 4, 4, ["p"], [prop])
            n = len(rel)
            edges = {(a, b) for a in range(n) for b in range(n) if rel[a][b]}
            assert frame_properties(range(n), edges)[prop]


class TestFrames:
    @settings(max_examples=100)
    @given(st.integers(1, 4), st.data())
    def test_close_under(self, n, data):
        pairs = [(a, b) for a in range(n) for b in range(n)]
        edges = data.draw(st.sets(st.sampled_from(pairs)))
        props = data.draw(st.sets(st.sampled_from(sorted(FRAME_PROPERTIES))))
        out = close_under(range(n), edges, props, random.Random(0))
        assert edges <= out
        got = frame_properties(range(n), out)
        assert all(got[p] for p in props)

    def test_predicates(self):
        w = ["a", "b"]
        assert frame_properties(w, {("a", "a"), ("b", "b")}) == {
            "reflexive": True, "transitive": True, "symmetric": True, "euclidean": True, "serial": True}
        assert frame_properties(w, {("a", "b")}) == {
            "reflexive": False, "transitive": True, "symmetric": False, "euclidean": False, "serial": False}

    def test_unknown_filter(self):
        with pytest.raises(ValueError):
            check_filter(["shiny"])


SMALL = FuzzConfig(max_worlds=3, max_chain=4, max_vars=2, max_depth=2)


class TestFuzz:
    def test_gkc_clean(self):
        rep = fuzz_axiom_soundness(resolve_system("GKc"), iters=1500, seed=1)
        assert rep["violations"] == []
        assert sum(rep["instances_per_scheme"].values()) == 1500

    def test_extension_requires_filter(self):
        with pytest.raises(SearchError):
            fuzz_axiom_soundness(resolve_system("GKc", {"T"}), frame_filter=(), iters=10, seed=0)

    def test_t_without_filter_violates(self):
        rep = fuzz_axiom_soundness(resolve_system("GKc", {"T"}), frame_filter=(), iters=1000, seed=0,
                                   strict=False)
        names = {v["scheme"] for v in rep["violations"]}
        assert "T_box" in names and names <= {"T_box", "T_dia"}
        v = next(v for v in rep["violations"] if v["scheme"] == "T_box")
        m = model_from_json(v["model"])
        assert str(evaluate(m, v["world"], parse_formula(v["instance"]))) == v["value"]

    def test_deterministic_across_jobs(self):
        reg = resolve_system("GKc", {"T"})
        a = fuzz_axiom_soundness(reg, frame_filter=(), iters=300, seed=5, strict=False, jobs=1)
        b = fuzz_axiom_soundness(reg, frame_filter=(), iters=300, seed=5, strict=False, jobs=3)
        assert json.dumps(a) == json.dumps(b)

    def test_theorems_clean(self):
        rep = fuzz_schemes(THEOREMS, (), iters=500, seed=2, config=SMALL)
        assert rep["violations"] == []

    def test_empty_schemes(self):
        with pytest.raises(SearchError):
            fuzz_schemes({}, iters=1)

    def test_valued_cr_would_fail(self):
        # sanity check on the harness: Cr is not valid once R may be 1/2
        m = KripkeModel(["u", "w"], {("u", "w"): "1/2"}, {"q": {"w": "1/2"}})
        assert evaluate(m, "u", CR) == F(1, 2)
        assert uniform_chain(3)[1] == F(1, 2)
