import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hopfcyc.catalog import FIXTURES, ODD_COCYCLE, fixture_text
from hopfcyc.cli import (ParseError, SessionError, cmd_cohomology, cmd_transport, cmd_verify, format_session, main,
                         parse_session)
from hopfcyc.cyclichom import parse_chain

SL2_HEAD = """[lie]
name = sl2
basis = X Y Z
[Y,X] = X
[Z,X] = Y
[Z,Y] = Z
"""

SPLIT = """
[matched_pair]
g1 = X Y
g2 = Z

[hopf]
f_generators = d1
"""

MODULE = """
[module]
type = truncated_symmetric
degree = 1
character = X:0 Y:0 Z:0
"""


# -- parsing and printing ----------------------------------------------------------


def test_parse_sl2_split():
    spec = parse_session(fixture_text("sl2-split"))
    assert spec.basis == ("X", "Y", "Z")
    assert spec.g1 == ("X", "Y") and spec.g2 == ("Z",)
    assert dict(spec.brackets)[("Z", "X")] == (("Y", Fraction(1)),)
    assert spec.module.character == (("X", 0), ("Y", 0), ("Z", 0))


def test_rationals_are_exact():
    spec = parse_session(SL2_HEAD.replace("[Y,X] = X", "[Y,X] = 3/6*X - 2/4*Y + X"))
    assert dict(spec.brackets)[("Y", "X")] == (("X", Fraction(3, 2)), ("Y", Fraction(-1, 2)))


@pytest.mark.parametrize("name", FIXTURES)
def test_fixtures_round_trip(name):
    spec = parse_session(fixture_text(name))
    text = format_session(spec)
    assert parse_session(text) == spec
    assert format_session(parse_session(text)) == text


NAMES = ["A", "B", "C", "D", "E"]
LABELS = ["m0", "m1", "m2"]


@st.composite
def session_texts(draw):
    basis = draw(st.lists(st.sampled_from(NAMES), min_size=1, max_size=4, unique=True))
    rat = st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(bool)

    def comb(names):
        terms = draw(st.lists(st.tuples(rat, st.sampled_from(names)), min_size=1, max_size=3))
        return " + ".join(f"{c.numerator}/{c.denominator}*{n}" for c, n in terms).replace("+ -", "- ")

    lines = ["[lie]", f"name = {draw(st.sampled_from(['g', 'sl2', 'h']))}", "basis = " + " ".join(basis)]
    pairs = [(a, b) for i, a in enumerate(basis) for b in basis[i + 1:]]
    for a, b in draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []:
        lines.append(f"[{a},{b}] = {comb(basis)}")
    if len(basis) >= 2 and draw(st.booleans()):
        k = draw(st.integers(1, len(basis) - 1))
        lines += ["[matched_pair]", "g1 = " + " ".join(basis[:k]), "g2 = " + " ".join(basis[k:])]
        lines += ["[hopf]", "f_generators = " + " ".join(f"d{i + 1}" for i in range(len(basis) - k))]
    kind = draw(st.sampled_from(["truncated_symmetric", "trivial", "table", None]))
    if kind:
        lines += ["[module]", f"type = {kind}", f"degree = {draw(st.integers(0, 3))}"]
        if draw(st.booleans()):
            lines.append("character = " + " ".join(f"{n}:{draw(st.integers(-2, 2))}" for n in basis))
        if kind == "table":
            lines.append("labels = " + " ".join(LABELS))
            for g, lab in draw(st.lists(st.tuples(st.sampled_from(basis), st.sampled_from(LABELS)),
                                        max_size=3, unique=True)):
                lines.append(f"act {g}: {lab} -> {comb(LABELS)}")
            for lab in draw(st.lists(st.sampled_from(LABELS), max_size=2, unique=True)):
                lines.append(f"coact {lab}: {draw(st.sampled_from(basis))} ⊗ {draw(st.sampled_from(LABELS))}")
        if draw(st.booleans()):
            lines.append("perturb Y: RX -> RX + 1/2*1_M")
    lines.append("[run]")
    if draw(st.booleans()):
        lines.append("checks = " + " ".join(draw(st.lists(st.sampled_from(["jacobi", "yd:M", "lie-ayd:g1"]),
                                                          min_size=1, max_size=3))))
    if draw(st.booleans()):
        lines.append(f"expect_dims = {draw(st.integers(0, 3))} {draw(st.integers(0, 3))}")
    if draw(st.booleans()):
        lines.append(f"relative = {basis[0]}")
    if draw(st.booleans()):
        lines += ["component 1,0 = 1_M ⊗ d1", "expect = -1_M ⊗ d1"]
    return "\n".join(lines) + "\n"


@given(session_texts())
def test_round_trip_property(text):
    spec = parse_session(text)
    printed = format_session(spec)
    assert parse_session(printed) == spec
    assert format_session(parse_session(printed)) == printed


@pytest.mark.parametrize("text, line, column", [
    (SL2_HEAD + "[Q,X] = X\n", 7, 1),
    (SL2_HEAD + "[Y,Z] = 2*W\n", 7, 11),
    ("basis = X\n", 1, 1),
    ("[lie]\nbasis = X\n[bogus]\n", 3, 2),
    (SL2_HEAD + "[run]\nexpect_dims = 1\n", 8, 15),
    (SL2_HEAD + "[module]\ntype = exotic\n", 8, 8),
    (SL2_HEAD + "[module]\ntype = table\nlabels = a b\nact X: c -> a\n", 10, 8),
    (SL2_HEAD + "[module]\ntype = table\nlabels = a b\nact Q: a -> b\n", 10, 5),
    (SL2_HEAD + "[lie]\n", 7, 1),
])
def test_parse_errors_carry_positions(text, line, column):
    with pytest.raises(ParseError) as err:
        parse_session(text)
    assert (err.value.line, err.value.column) == (line, column)
    assert f"line {line}, column {column}" in str(err.value)


def test_unresolved_name_is_named():
    with pytest.raises(ParseError, match="'W'"):
        parse_session(SL2_HEAD + "[Y,Z] = 2*W\n")


# -- verify ------------------------------------------------------------------------


def test_schwarzian_fixture_passes():
    rep = cmd_verify(parse_session(fixture_text("schwarzian-sayd")))
    assert len(rep) > 0
    assert rep.passed, rep.render()


@pytest.mark.parametrize("name, failing", [("sl2-split", "g1/lie-ayd"), ("gl2-split", "g1/lie-stability")])
def test_split_fixtures_fail_only_on_g1(name, failing):
    rep = cmd_verify(parse_session(fixture_text(name)))
    assert {r.check_id for r in rep.failures()} == {failing}
    assert all(r.ok for r in rep if r.check_id.startswith(("g/", "jacobi", "matched", "mutual")))


def test_schwarzian_fixture_covers_yd_pairs():
    rep = cmd_verify(parse_session(fixture_text("schwarzian-sayd")))
    yd = rep.by_id("M/yd")
    assert len(yd) == 12 and all(r.ok for r in yd)
    assert rep.by_id("M_delta/ayd") and rep.by_id("M_delta/stability")


def test_perturbed_action_fails_with_witness():
    text = SL2_HEAD + SPLIT + MODULE + "perturb Y: RX -> RX + 1_M\n[run]\nchecks = yd:M ayd:M_delta stability:M_delta\n"
    rep = cmd_verify(parse_session(text))
    assert not rep.passed
    assert ("M/yd", ("RX", "Y")) in {(r.check_id, r.witness) for r in rep.failures()}


def test_empty_check_list_passes():
    rep = cmd_verify(parse_session(SL2_HEAD + "[run]\n"))
    assert len(rep) == 0 and rep.passed


def test_g1_restriction_fails_ayd():
    rep = cmd_verify(parse_session(SL2_HEAD + SPLIT + MODULE + "[run]\nchecks = lie-ayd:g1\n"))
    bad = rep.first_failure()
    assert bad.check_id == "g1/lie-ayd" and bad.witness == ("1_M", "X")


def test_unknown_check_is_an_error():
    with pytest.raises(SessionError, match="unknown check"):
        cmd_verify(parse_session(SL2_HEAD + "[run]\nchecks = nonsense\n"))


def test_seeded_hopf_axioms_are_deterministic():
    spec = parse_session(SL2_HEAD + SPLIT + "[run]\nchecks = hopf-axioms\n")
    a, b = cmd_verify(spec).to_jsonl(), cmd_verify(spec).to_jsonl()
    assert a == b and cmd_verify(spec).passed


# -- cohomology ----------------------------------------------------------------------


def test_sl2_truncated_cohomology():
    rep = cmd_cohomology(parse_session(fixture_text("sl2-truncated")))
    assert rep.passed, rep.render()
    hp0, hp1 = rep.by_id("HP^0")[0], rep.by_id("HP^1")[0]
    assert (hp0.lhs, hp1.lhs) == ("1", "1")
    assert hp0.rhs == "1_M"
    assert hp1.rhs == "2*θ^X⊗RZ - θ^Y⊗RY + θ^X∧θ^Y∧θ^Z⊗1_M"
    assert [r.lhs for r in rep if r.check_id.startswith("E1^")] == ["0 0 0 0", "1 0 0 1"]


def test_wrong_expected_dims_fail():
    text = fixture_text("sl2-truncated").replace("expect_dims = 1 1", "expect_dims = 2 1")
    rep = cmd_cohomology(parse_session(text))
    assert [r.check_id for r in rep.failures()] == ["HP^0"]


def test_trivial_module_cohomology():
    rep = cmd_cohomology(parse_session(SL2_HEAD + "[module]\ntype = trivial\n[run]\nexpect_dims = 1 1\n"))
    assert rep.passed


def test_abelian_cohomology():
    text = "[lie]\nname = a\nbasis = A\n[module]\ntype = trivial\n[run]\nexpect_dims = 1 1\n"
    assert cmd_cohomology(parse_session(text)).passed


def test_degree_two_truncation_bound():
    text = fixture_text("sl2-truncated").replace("degree = 1", "degree = 2")
    rep = cmd_cohomology(parse_session(text))
    assert rep.passed
    assert rep.by_id("E1:bound")[0].lhs == "2 2"


def test_non_sayd_module_is_refused():
    text = SL2_HEAD + "[module]\ntype = table\nlabels = a b\nact X: a -> b\n[run]\n"
    with pytest.raises(SessionError, match="not SAYD"):
        cmd_cohomology(parse_session(text))


# -- transport ----------------------------------------------------------------------


def test_odd_transport_fixture():
    res = cmd_transport(parse_session(fixture_text("odd-cocycle")))
    assert res.report.passed, res.report.render()
    M = _schwarzian_M_delta()
    assert res.cocycle == parse_chain(ODD_COCYCLE, M).scale(-1)


def test_even_transport_fixture():
    res = cmd_transport(parse_session(fixture_text("even-cocycle")))
    assert res.report.passed, res.report.render()
    assert len(res.cocycle) == 16


def test_zero_transport():
    res = cmd_transport(parse_session(SL2_HEAD + SPLIT + MODULE + "[run]\n"))
    assert res.report.passed and not res.cocycle and res.text == "0"


def test_non_cocycle_reports_boundary():
    res = cmd_transport(parse_session(SL2_HEAD + SPLIT + MODULE + "[run]\ncomponent 1,0 = 1_M ⊗ d1\n"))
    bad = res.report.first_failure()
    assert bad.check_id == "tot:b"
    assert bad.lhs == "-RX ⊗ d1 ⊗ X - RY ⊗ d1 ⊗ Y"


def _schwarzian_M_delta():
    from hopfcyc.catalog import schwarzian
    return schwarzian().M_delta


# -- command line --------------------------------------------------------------------


def test_main_exit_codes(tmp_path, capsys):
    assert main(["verify", "schwarzian-sayd"]) == 0
    bad = tmp_path / "bad.txt"
    bad.write_text(SL2_HEAD + SPLIT + MODULE + "perturb Y: RX -> RX + 1_M\n[run]\nchecks = yd:M\n", encoding="utf-8")
    assert main(["verify", str(bad)]) == 1
    assert "RX, Y" in capsys.readouterr().out
    broken = tmp_path / "broken.txt"
    broken.write_text("[lie]\nbasis = X\n[X,Q] = X\n", encoding="utf-8")
    assert main(["verify", str(broken)]) == 2
    assert "line 3" in capsys.readouterr().err
    assert main(["verify", "no-such-fixture"]) == 2


def test_report_schema(tmp_path):
    out = tmp_path / "rep.jsonl"
    assert main(["verify", "schwarzian-sayd", "--report", str(out)]) == 0
    records = [json.loads(line) for line in out.read_text(encoding="utf-8").splitlines()]
    assert records
    for rec in records:
        assert set(rec) == {"check_id", "status", "witness", "lhs", "rhs"}
        assert rec["status"] in ("pass", "fail")
        assert isinstance(rec["witness"], list)
    assert out.read_text(encoding="utf-8") == _rerun_report(tmp_path)


def _rerun_report(tmp_path):
    again = tmp_path / "again.jsonl"
    main(["verify", "schwarzian-sayd", "--report", str(again)])
    return again.read_text(encoding="utf-8")


def test_fixture_listing(capsys):
    assert main(["fixtures", "list"]) == 0
    assert capsys.readouterr().out.split() == list(FIXTURES)
    assert main(["fixtures", "show", "odd-cocycle"]) == 0
    assert "component 1,0" in capsys.readouterr().out


def test_transport_prints_cocycle(capsys):
    assert main(["transport", "odd-cocycle"]) == 0
    assert capsys.readouterr().out.strip().endswith("-1_M ⊗ d1 - RX ⊗ d1*X - RY ⊗ d1*Y - RY ⊗ X - 2*RZ ⊗ Y")


def test_cohomology_command(capsys):
    assert main(["cohomology", "sl2-truncated"]) == 0
    assert "HP^0: 1" in capsys.readouterr().out
