import random

import pytest

from corpus import class_config, random_formula
from rbb.semantics import (
    MAX_VALIDATION_WORLDS,
    AppSemanticsUndefined,
    UnknownReason,
    UnknownSymbol,
    UnknownWorld,
    check_rc,
    ensure_in_language,
    extension,
    make_model,
    model_from_doc,
    model_to_doc,
    reflexive_worlds,
    satisfies,
    successors,
    validate_model,
)
from rbb.syntax import (
    SIGMA,
    App,
    Adequate,
    Believes,
    Eq,
    ForAll,
    Letter,
    Not,
    Or,
    Supports,
    atom_term,
    free_reasons,
    is_free_for,
    substitute,
    term_name,
)
from rbb.theory import TheoryConfig

BASE = TheoryConfig.from_name("RBB", ("r", "s"), ("p", "q"))
QUANT = TheoryConfig.from_name("QRBB", ("r", "s"), ("p", "q"))

P, Q = Letter("p"), Letter("q")
R, S = atom_term("r"), atom_term("s")


def tiny():
    """Two worlds, one believed reason; rich enough for every connective."""
    return make_model(
        ["w0", "w1"],
        {"r": [("w0", "w1"), ("w1", "w1")], "s": [("w0", "w0")]},
        {"w0": [["w1"], ["w0", "w1"]], "w1": []},
        {"w0": [], "w1": ["p"]},
    )


# -- an independent recursive evaluator -------------------------------------


def holds(model, w, f, cfg):
    """Direct transcription of the satisfaction clauses, sets not bitmasks."""
    if isinstance(f, Letter):
        return f.name in model.valuation[w]
    if isinstance(f, Not):
        return not holds(model, w, f.sub, cfg)
    if isinstance(f, Or):
        return holds(model, w, f.left, cfg) or holds(model, w, f.right, cfg)
    if isinstance(f, Supports):
        succ = successors(model, term_name(f.reason), w)
        return all(holds(model, v, f.sub, cfg) for v in succ)
    if isinstance(f, Adequate):
        return w in successors(model, term_name(f.reason), w)
    if isinstance(f, Believes):
        truth_set = frozenset(
            v for v in model.worlds if holds(model, v, f.sub, cfg)
        )
        return truth_set in model.neighborhoods[w]
    if isinstance(f, Eq):
        return term_name(f.left) == term_name(f.right)
    assert isinstance(f, ForAll)
    for name in cfg.reasons:
        if not is_free_for(name, f.var, f.sub):
            continue
        if not holds(model, w, substitute(f.sub, f.var, name), cfg):
            return False
    return True


def test_engine_agrees_with_the_recursive_oracle(
    base_corpus, sigma_corpus, sigma_plus_corpus
):
    rng = random.Random(31)
    jobs = [
        (base_corpus, "QRBB"),
        (sigma_corpus, "QRBBs"),
        (sigma_plus_corpus, "QRBBs+"),
    ]
    for corpus, quant_name in jobs:
        for cfg, model in corpus[:40]:
            qcfg = TheoryConfig.from_name(
                quant_name, cfg.basic_reasons, cfg.letters
            )
            for _ in range(8):
                f = random_formula(rng, qcfg, depth=3)
                ext = extension(model, f, qcfg)
                for w in model.worlds:
                    assert (w in ext) == holds(model, w, f, qcfg), (f, w)


def test_satisfies_is_extension_membership():
    m = tiny()
    for f in (P, Believes(P), Supports(R, P), Adequate(S), Not(Q)):
        ext = extension(m, f, BASE)
        for w in m.worlds:
            assert satisfies(m, w, f, BASE) == (w in ext)


# -- hand-checked clauses ---------------------------------------------------


def test_support_is_truth_in_all_successors():
    m = tiny()
    assert satisfies(m, "w0", Supports(R, P), BASE)
    assert not satisfies(m, "w0", Supports(S, P), BASE)
    # empty successor set supports anything
    assert satisfies(m, "w1", Supports(S, Q), BASE)


def test_adequacy_is_reflexivity():
    m = tiny()
    assert satisfies(m, "w0", Adequate(S), BASE)
    assert not satisfies(m, "w0", Adequate(R), BASE)
    assert satisfies(m, "w1", Adequate(R), BASE)


def test_belief_is_family_membership():
    m = tiny()
    assert satisfies(m, "w0", Believes(P), BASE)
    assert not satisfies(m, "w1", Believes(P), BASE)
    # the whole world set is in N(w0)
    assert satisfies(m, "w0", Believes(Or(P, Not(P))), BASE)


def test_quantifier_ranges_over_declared_reasons():
    m = tiny()
    t = atom_term("t")
    every = ForAll("t", Supports(t, Or(P, Not(P))))
    assert satisfies(m, "w0", every, QUANT)
    some_adequate = Not(ForAll("t", Not(Adequate(t))))
    assert satisfies(m, "w0", some_adequate, QUANT)
    assert satisfies(m, "w0", Eq(R, R), QUANT)
    assert not satisfies(m, "w0", Eq(R, S), QUANT)


def test_quantifier_skips_capture_blocked_substituents():
    m = tiny()
    # substituting s for t under a binder on s would capture, so the
    # conjunction effectively ranges over r alone
    body = ForAll("s", Or(Not(Adequate(atom_term("t"))), Adequate(S)))
    f = ForAll("t", body)
    expected = all(
        holds(m, "w0", substitute(body, "t", name), QUANT)
        for name in QUANT.reasons
        if is_free_for(name, "t", body)
    )
    assert satisfies(m, "w0", f, QUANT) == expected
    assert not is_free_for("s", "t", body)


# -- language checks --------------------------------------------------------


def test_undeclared_symbols_are_refused():
    with pytest.raises(UnknownSymbol):
        ensure_in_language(Letter("z"), BASE)
    with pytest.raises(UnknownSymbol):
        ensure_in_language(Adequate(atom_term("z")), BASE)
    # bound occurrences are fine
    ensure_in_language(ForAll("z", Adequate(atom_term("z"))), QUANT)


def test_quantifiers_are_not_propositional_language():
    with pytest.raises(UnknownSymbol):
        ensure_in_language(ForAll("t", P), BASE)
    with pytest.raises(UnknownSymbol):
        ensure_in_language(Eq(R, S), BASE)


def test_app_terms_have_no_semantics():
    app_cfg = TheoryConfig.from_name("RBB+App", ("r", "s"), ("p",))
    with pytest.raises(AppSemanticsUndefined):
        ensure_in_language(P, app_cfg)
    with pytest.raises(AppSemanticsUndefined):
        ensure_in_language(Supports(App(R, S), P), BASE)


def test_evaluation_requires_declared_relations():
    m = make_model(["w0"], {"r": []})
    with pytest.raises(UnknownReason):
        satisfies(m, "w0", Adequate(S), BASE)
    with pytest.raises(UnknownWorld):
        satisfies(m, "nowhere", P, BASE)


# -- construction and serialization -----------------------------------------


def test_make_model_normalizes_and_validates():
    with pytest.raises(ValueError):
        make_model([], {})
    with pytest.raises(ValueError):
        make_model(["w0", "w0"], {})
    with pytest.raises(ValueError):
        make_model(["w0"], {"r": [("w0", "w9")]})
    with pytest.raises(ValueError):
        make_model(["w0"], {}, {"w9": []})
    m = make_model(["w0", "w1"], {"r": []})
    assert m.neighborhoods["w1"] == frozenset()
    assert m.valuation["w1"] == frozenset()


def test_model_equality_ignores_input_order():
    a = make_model(
        ["w0", "w1"],
        {"r": [("w0", "w1"), ("w1", "w0")]},
        {"w0": [["w0", "w1"], ["w1"]]},
        {"w0": ["p", "q"]},
    )
    b = make_model(
        ["w0", "w1"],
        {"r": [("w1", "w0"), ("w0", "w1")]},
        {"w0": [["w1"], ["w1", "w0"]]},
        {"w0": ["q", "p"]},
    )
    assert a == b and hash(a) == hash(b)


def test_doc_round_trip_preserves_the_model(base_corpus):
    for cfg, model in base_corpus[:30]:
        doc = model_to_doc(model, model.worlds[0])
        back, point = model_from_doc(doc)
        assert back == model
        assert point == model.worlds[0]
    doc = model_to_doc(tiny())
    back, point = model_from_doc(doc)
    assert back == tiny() and point is None


def test_doc_with_unknown_point_is_refused():
    doc = model_to_doc(tiny(), "w0")
    doc["point"] = "w9"
    with pytest.raises(UnknownWorld):
        model_from_doc(doc)


def test_successors_and_reflexive_worlds():
    m = tiny()
    assert successors(m, "r", "w0") == {"w1"}
    assert reflexive_worlds(m, "r") == {"w1"}
    assert reflexive_worlds(m, "s") == {"w0"}


# -- frame-property validation ----------------------------------------------


def test_validation_accepts_the_corpus(base_corpus, sigma_plus_corpus):
    for cfg, model in base_corpus[:20] + sigma_plus_corpus[:20]:
        assert validate_model(model, cfg).ok


def test_d_violation_detected():
    m = make_model(
        ["w0", "w1"],
        {"r": [], "s": []},
        {"w0": [["w0"], ["w1"]]},
    )
    report = validate_model(m, BASE)
    assert any(v.prop == "d" for v in report.violations)


def test_rb_violation_detected():
    # r-degree believed but a superset of r(w0) is missing
    m = make_model(
        ["w0", "w1"],
        {"r": [("w0", "w0")], "s": []},
        {"w0": [["w0"]]},
    )
    report = validate_model(m, BASE)
    assert any(v.prop == "rb" for v in report.violations)


def _sigma_model(families, srow=None, rrow=()):
    pairs = srow if srow is not None else [("w0", "w0"), ("w1", "w1")]
    return make_model(
        ["w0", "w1"],
        {"r": list(rrow), "sigma": pairs},
        families,
        {},
    )


SIGMA_CFG = TheoryConfig.from_name("RBBs", ("r",), ("p",))


def test_mb_violation_detected():
    m = _sigma_model({"w0": [], "w1": []})
    report = validate_model(m, SIGMA_CFG)
    assert any(v.prop == "mb" for v in report.violations)


def test_ma_violation_detected():
    # r believed, sigma adequate at w0, but w0 not in r(w0)
    m = _sigma_model(
        {"w0": [["w0", "w1"], ["w1"]], "w1": [["w0", "w1"]]},
        rrow=[("w0", "w1"), ("w1", "w1")],
    )
    report = validate_model(m, SIGMA_CFG)
    assert any(v.prop == "ma" for v in report.violations)


def test_mr_violation_detected():
    # r believed with r(w0) = {w0}, but sigma(w0) = {w0, w1} is not covered
    m = _sigma_model(
        {"w0": [["w0", "w1"], ["w0"]], "w1": [["w0", "w1"]]},
        srow=[("w0", "w0"), ("w0", "w1"), ("w1", "w1")],
        rrow=[("w0", "w0"), ("w1", "w1")],
    )
    report = validate_model(m, SIGMA_CFG)
    assert any(v.prop == "mr" for v in report.violations)


def test_mt_violation_detected():
    plus = TheoryConfig.from_name("RBBs+", ("r",), ("p",))
    m = _sigma_model(
        {"w0": [["w0", "w1"], ["w1"]], "w1": [["w0", "w1"]]},
        rrow=[("w0", "w1"), ("w1", "w1")],
    )
    report = validate_model(m, plus)
    assert any(v.prop == "mt" for v in report.violations)


def test_validation_caps_world_count():
    worlds = [f"w{i}" for i in range(MAX_VALIDATION_WORLDS + 1)]
    m = make_model(worlds, {"r": []})
    with pytest.raises(ValueError):
        validate_model(m, TheoryConfig.from_name("RBB", ("r",), ("p",)))


def test_rc_clean_on_validated_models(base_corpus):
    for cfg, model in base_corpus[:40]:
        assert check_rc(model).ok


def test_rc_reports_disjoint_believed_reasons():
    # both degrees believed yet the successor sets are disjoint; such a
    # model never validates, which is the point of the derived check
    m = make_model(
        ["w0", "w1"],
        {"r": [("w0", "w0")], "s": [("w0", "w1"), ("w1", "w1")]},
        {"w0": [["w0"], ["w1"]]},
    )
    assert not validate_model(m, BASE).ok
    assert any(v.prop == "rc" for v in check_rc(m).violations)
