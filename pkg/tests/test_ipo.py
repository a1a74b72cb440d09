"""Label derivation: frozen tables, generic-engine agreement, application."""

import pytest

from ipobisim.ipo import (
    TAU,
    Config,
    Label,
    LabelDomainError,
    NotEnabledError,
    UnsupportedConfig,
    apply_label,
    argument_pool,
    complete_labels,
    format_label,
    label_to_json,
    labels_generic,
    labels_table,
    plug_label,
    probe_values,
)
from ipobisim.terms import (
    App,
    K,
    Kp,
    Meta,
    S,
    Spp,
    enumerate_terms,
    format_term,
    parse_term,
)

FIN = Config("clstar", "second", "lazy", "finite")
REACT2 = Config("clstar", "second", "lazy", "reactive_only", arg_pool=2)
CBV = Config("clstar", "second", "cbv", "reactive_only")


def fmts(labels):
    return sorted(format_label(l) for l in labels)


# --------------------------------------------------------------------------
# configuration validation
# --------------------------------------------------------------------------


def test_config_rejects_second_order_off_clstar():
    with pytest.raises(UnsupportedConfig):
        Config("lambda", "second", "lazy", "reactive_only")
    with pytest.raises(UnsupportedConfig):
        Config("cl", "second", "lazy", "reactive_only")


def test_config_rejects_finite_outside_second_lazy_clstar():
    with pytest.raises(UnsupportedConfig):
        Config("clstar", "second", "cbv", "finite")
    with pytest.raises(UnsupportedConfig):
        Config("clstar", "first", "lazy", "finite")
    with pytest.raises(UnsupportedConfig):
        Config("cl", "first", "lazy", "finite")


def test_complete_labels_truth_table():
    assert complete_labels(FIN)
    assert complete_labels(CBV)
    assert complete_labels(Config("clstar", "second", "cbv", "all_ipo"))
    assert not complete_labels(REACT2)
    assert not complete_labels(Config("clstar", "second", "lazy", "all_ipo"))
    assert not complete_labels(Config("cl", "first", "lazy"))
    assert not complete_labels(Config("lambda", "first", "cbv"))


# --------------------------------------------------------------------------
# frozen second-order tables
# --------------------------------------------------------------------------


def test_finite_bare_metavariable_row():
    assert fmts(labels_table(Meta("x"), FIN)) == [
        "[_{?x:=K'(?z1)}] ?y1",
        "[_{?x:=K}] ?y1",
        "[_{?x:=S''(?z1,?z2)}] ?y1",
        "[_{?x:=S'(?z1)}] ?y1",
        "[_{?x:=S}] ?y1",
    ]


def test_finite_head_stuck_row_substitutes_only():
    state = App(Meta("x"), K)
    assert fmts(labels_table(state, FIN)) == [
        "[_{?x:=K'(?z1)}]",
        "[_{?x:=K}]",
        "[_{?x:=S''(?z1,?z2)}]",
        "[_{?x:=S'(?z1)}]",
        "[_{?x:=S}]",
    ]


def test_finite_value_and_reducible_rows():
    assert fmts(labels_table(K, FIN)) == ["[_] ?y1"]
    assert fmts(labels_table(Spp(K, K), FIN)) == ["[_] ?y1"]
    assert labels_table(App(K, K), FIN) == [TAU]


def test_finite_row_never_exceeds_five_labels():
    for t in enumerate_terms(4, ("x", "y"), "clstar"):
        assert len(labels_table(t, FIN)) <= 5


def test_reactive_bare_metavariable_adds_inner_overlap():
    got = fmts(labels_table(Meta("x"), REACT2))
    assert got == [
        "[_{?x:=K ?y1}]",
        "[_{?x:=K'(?z1) ?y1}]",
        "[_{?x:=K'(?z1)}] ?y1",
        "[_{?x:=K}] ?y1",
        "[_{?x:=S ?y1}]",
        "[_{?x:=S''(?z1,?z2) ?y1}]",
        "[_{?x:=S''(?z1,?z2)}] ?y1",
        "[_{?x:=S'(?z1) ?y1}]",
        "[_{?x:=S'(?z1)}] ?y1",
        "[_{?x:=S}] ?y1",
    ]


def test_reactive_head_stuck_argument_vectors_up_to_bound():
    state = App(Meta("x"), K)
    got = fmts(labels_table(state, REACT2))
    assert len(got) == 15  # 5 bare + 5 with ?y1 + 5 with ?y1 ?y2
    assert "[_{?x:=S''(?z1,?z2) ?y1 ?y2}]" in got
    assert "[_{?x:=K ?y1}]" in got
    assert "[_{?x:=K}]" in got
    assert not any("?y3" in f for f in got)


def test_cbv_bare_metavariable_row():
    got = fmts(labels_table(Meta("x"), CBV))
    assert len(got) == 10
    assert "[_{?x:=K}] ?y1" in got
    assert "K [_]" in got
    assert "S''(?z1,?z2) [_]" in got


def test_cbv_value_row():
    got = fmts(labels_table(Spp(K, K), CBV))
    assert got == [
        "K [_]",
        "K'(?z1) [_]",
        "S [_]",
        "S''(?z1,?z2) [_]",
        "S'(?z1) [_]",
        "[_] ?y1",
    ]


def test_cbv_critical_variable_row():
    state = App(Meta("x"), K)  # stuck application: x is critical
    assert fmts(labels_table(state, CBV)) == [
        "[_{?x:=K'(?z1)}]",
        "[_{?x:=K}]",
        "[_{?x:=S''(?z1,?z2)}]",
        "[_{?x:=S'(?z1)}]",
        "[_{?x:=S}]",
    ]


def test_cbv_reducible_row_and_domain_error():
    assert labels_table(App(K, App(K, K)), CBV) == [TAU]
    with pytest.raises(LabelDomainError):
        labels_table(Kp(App(Meta("x"), Meta("y"))), CBV)


def test_fresh_names_skip_state_collisions():
    got = fmts(labels_table(Meta("y1"), FIN))
    assert "[_{?y1:=K}] ?y2" in got
    got = fmts(labels_table(Meta("z1"), FIN))
    assert "[_{?z1:=K'(?z2)}] ?y1" in got
    assert "[_{?z1:=S''(?z2,?z3)}] ?y1" in got


def test_probe_values_are_the_five_head_shapes():
    assert [format_term(p) for p in probe_values(set())] == [
        "K",
        "S",
        "K'(?z1)",
        "S'(?z1)",
        "S''(?z1,?z2)",
    ]


# --------------------------------------------------------------------------
# generic engine
# --------------------------------------------------------------------------


def test_generic_rejects_unsupported_configs():
    with pytest.raises(UnsupportedConfig):
        labels_generic(K, CBV)
    with pytest.raises(UnsupportedConfig):
        labels_generic(K, Config("cl", "first", "lazy"))


def test_generic_root_overlap_example():
    state = App(Meta("x"), K)
    by_fmt = {format_label(l): l for l in labels_generic(state, FIN)}
    assert sorted(by_fmt) == [
        "[_{?x:=K'(?z1)}]",
        "[_{?x:=K}]",
        "[_{?x:=S''(?z1,?z2)}]",
        "[_{?x:=S'(?z1)}]",
        "[_{?x:=S}]",
    ]
    tgt = apply_label(state, by_fmt["[_{?x:=K}]"], FIN)
    assert tgt == Kp(K)
    tgt = apply_label(state, by_fmt["[_{?x:=K'(?z1)}]"], FIN)
    assert tgt == Meta("z1")
    tgt = apply_label(state, by_fmt["[_{?x:=S''(?z1,?z2)}]"], FIN)
    assert tgt == App(App(Meta("z1"), K), App(Meta("z2"), K))


def test_generic_tau_arises_as_empty_restriction():
    assert labels_generic(App(K, K), FIN) == [TAU]
    assert labels_generic(App(Kp(Meta("w")), K), FIN) == [TAU]


def test_generic_agrees_with_finite_table():
    for t in enumerate_terms(4, ("x", "y"), "clstar"):
        assert fmts(labels_generic(t, FIN)) == fmts(labels_table(t, FIN)), (
            format_term(t)
        )


def test_generic_agrees_with_reactive_table():
    for t in enumerate_terms(4, ("x", "y"), "clstar"):
        assert fmts(labels_generic(t, REACT2)) == fmts(
            labels_table(t, REACT2)
        ), format_term(t)


def test_generic_agrees_on_colliding_names():
    tricky = [
        Meta("y1"),
        Meta("z1"),
        App(Meta("y1"), Meta("z1")),
        App(App(Meta("x"), Meta("y1")), Meta("y2")),
        Kp(Meta("y1")),
        App(Meta("z2"), Kp(Meta("z1"))),
    ]
    for t in tricky:
        assert fmts(labels_generic(t, FIN)) == fmts(labels_table(t, FIN))
        assert fmts(labels_generic(t, REACT2)) == fmts(labels_table(t, REACT2))


def test_all_ipo_extends_reactive_and_is_superset():
    allcfg = Config("clstar", "second", "lazy", "all_ipo", arg_pool=2)
    react = set(fmts(labels_table(Meta("x"), REACT2)))
    full = set(fmts(labels_table(Meta("x"), allcfg)))
    assert react < full
    assert "K [_]" in full
    assert "K ?y1 [_]" in full


# --------------------------------------------------------------------------
# first-order tables
# --------------------------------------------------------------------------


def test_first_order_cl_lazy_saturating_vectors():
    cfg = Config("cl", "first", "lazy", arg_pool=2)
    assert [format_term(p) for p in argument_pool(cfg)] == [
        "K",
        "S",
        "K K",
        "K S",
        "S K",
        "S S",
    ]
    assert len(labels_table(K, cfg)) == 36  # K needs two arguments
    assert len(labels_table(App(S, K), cfg)) == 36  # S K needs two more
    assert len(labels_table(App(App(S, K), K), cfg)) == 6  # one more
    assert labels_table(parse_term("K K K", "cl"), cfg) == [TAU]
    assert labels_table(Meta("x"), cfg) == []


def test_first_order_cl_lazy_label_format():
    cfg = Config("cl", "first", "lazy", arg_pool=2)
    assert labels_table(parse_term("S K K K", "cl"), cfg) == [TAU]
    labels = labels_table(App(S, K), cfg)
    assert format_label(labels[0]) == "[_] K K"
    assert format_label(labels[1]) == "[_] K S"
    one_more = labels_table(App(App(S, K), K), cfg)
    assert [format_label(l) for l in one_more] == [
        "[_] K",
        "[_] S",
        "[_] (K K)",
        "[_] (K S)",
        "[_] (S K)",
        "[_] (S S)",
    ]


def test_first_order_clstar_cbv_left_probes():
    cfg = Config("clstar", "first", "cbv", arg_pool=1)
    got = fmts(labels_table(K, cfg))
    assert got == ["K [_]", "S [_]", "[_] K", "[_] S"]
    assert labels_table(App(K, K), cfg) == [TAU]


def test_first_order_lambda_tables():
    lazy = Config("lambda", "first", "lazy", arg_pool=2)
    ident = parse_term("\\x.x", "lambda")
    assert fmts(labels_table(ident, lazy)) == ["[_] (\\x.x)"]
    assert labels_table(parse_term("(\\x.x) (\\x.x)", "lambda"), lazy) == [TAU]
    assert labels_table(parse_term("y (\\x.x)", "lambda"), lazy) == []
    cbv = Config("lambda", "first", "cbv", arg_pool=2)
    got = fmts(labels_table(ident, cbv))
    assert "[_] (\\x.x)" in got
    assert "(\\x.\\y.x) [_]" not in got  # pool bound 2 excludes size-3 bodies
    assert any(f.endswith("[_]") for f in got)


def test_first_order_cl_cbv_has_argument_and_left_families():
    cfg = Config("cl", "first", "cbv", arg_pool=1)
    got = fmts(labels_table(K, cfg))
    assert "[_] K K" in got  # value saturation
    assert "K [_] K" in got  # left probe with trailing value
    assert "K K [_]" in got
    assert "S K [_] K" in got
    assert labels_table(App(App(K, K), K), cfg)[0] is TAU


# --------------------------------------------------------------------------
# applying labels
# --------------------------------------------------------------------------


def test_apply_label_frozen_examples():
    by_fmt = {format_label(l): l for l in labels_table(Meta("x"), FIN)}
    out = apply_label(Meta("x"), by_fmt["[_{?x:=K}] ?y1"], FIN)
    assert out == Kp(Meta("y1"))

    out = apply_label(Spp(K, K), labels_table(Spp(K, K), FIN)[0], FIN)
    assert out == App(App(K, Meta("y1")), App(K, Meta("y1")))

    assert apply_label(App(K, K), TAU, FIN) == Kp(K)


def test_apply_label_not_enabled():
    with pytest.raises(NotEnabledError):
        apply_label(K, TAU, FIN)
    with pytest.raises(NotEnabledError):
        apply_label(Meta("x"), TAU, FIN)


def test_plug_label_composition_order():
    label = Label(subst=(("x", K),), left=S, args=(Meta("y1"),))
    plugged = plug_label(Meta("x"), label, FIN)
    assert format_term(plugged) == "S K ?y1"


def test_every_emitted_label_is_enabled():
    for cfg in (FIN, REACT2, CBV):
        for t in enumerate_terms(3, ("x",), "clstar"):
            try:
                labels = labels_table(t, cfg)
            except LabelDomainError:
                continue
            for l in labels:
                apply_label(t, l, cfg)  # must not raise


def test_labels_deterministic():
    for cfg in (FIN, REACT2, CBV):
        for t in enumerate_terms(3, ("x", "y"), "clstar"):
            try:
                a = labels_table(t, cfg)
                b = labels_table(t, cfg)
            except LabelDomainError:
                continue
            assert a == b


# --------------------------------------------------------------------------
# serialization
# --------------------------------------------------------------------------


def test_label_json_shapes():
    assert label_to_json(TAU) == "tau"
    by_fmt = {format_label(l): l for l in labels_table(Meta("x"), FIN)}
    j = label_to_json(by_fmt["[_{?x:=K'(?z1)}] ?y1"])
    assert j == {
        "subst": {"x": "K'(?z1)"},
        "left": None,
        "args": ["?y1"],
    }
    j = label_to_json(Label(left=K, args=(S,)))
    assert j == {"subst": {}, "left": "K", "args": ["S"]}


def test_tau_formats_as_bare_hole():
    assert format_label(TAU) == "[_]"
    assert TAU.is_tau
    assert not Label(args=(K,)).is_tau
