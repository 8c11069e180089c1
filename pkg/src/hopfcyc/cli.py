"""Declarative session format and the ``hopfcyc`` command line.

A session file has the sections ``[lie]``, ``[matched_pair]``, ``[hopf]``,
``[module]`` and ``[run]``; ``#`` starts a comment::

    [lie]
    name = sl2
    basis = X Y Z
    [Y,X] = X
    [Z,X] = Y
    [Z,Y] = Z

    [matched_pair]
    g1 = X Y
    g2 = Z

    [hopf]
    f_generators = d1

    [module]
    type = truncated_symmetric     # or: trivial, table
    degree = 1
    character = X:0 Y:0 Z:0        # omitted: the trace of ad
    perturb Y: RX -> RX + 1_M      # replaces one entry of the lifted H action

    [run]
    checks = yd:M ayd:M_delta stability:M_delta
    relative = Y
    expect_dims = 1 1
    component 1,0 = 1_M ⊗ d1
    expect = -1_M ⊗ d1 - ...

A ``table`` module lists ``labels = a b`` and lines ``act X: a -> 2*b`` and
``coact a: X ⊗ b - 1/2*Y ⊗ a``. Rationals are integers or ``p/q``.

Report records (``--report``) are JSON lines with the keys ``check_id``,
``status`` (``pass``/``fail``), ``witness`` (list of strings), ``lhs`` and ``rhs``.
"""

from __future__ import annotations

import argparse
import random
import re
import sys
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Callable, Sequence

from .catalog import FIXTURES, fixture_text
from .cyclichom import BicocyclicComplex, CyclicComplex, parse_bichain, parse_chain
from .exactnum import LinComb, format_rational, parse_rational
from .hopfalg import (MutualActions, bicrossed_build, check_coaction_u, check_hopf_axioms, check_lie_hopf,
                      check_mutual_pair, compute_modular_pair, lie_hopf_from_matched_pair)
from .liealg import (LieAlgebra, LieModuleComodule, MatchedPair, check_lie_ayd, check_lie_comodule,
                     check_lie_stability, check_matched_ayd_conditions, check_module_relations, check_sayd_lie,
                     check_unimodular_stability, truncated_symmetric_module, verify_jacobi, verify_matched_pair)
from .liecohomology import (fold_e1, jara_stefan_filtration, periodic_cohomology, relative_subcomplex,
                            spectral_e1)
from .reports import Report
from .saydmod import (FDModule, check_aux47, check_ayd_doublecrossed_u, check_ayd_hopf, check_comodule_bicrossed,
                      check_factor_stability, check_module_bicrossed, check_sayd_hopf, check_stability_hopf, check_yd,
                      lift_lie_to_hopf, twist_by_mpi)

SECTIONS = ("lie", "matched_pair", "hopf", "module", "run")
MODULE_TYPES = ("truncated_symmetric", "trivial", "table")

Terms = tuple[tuple[str, Fraction], ...]


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


# -- session data --------------------------------------------------------------


@dataclass(frozen=True)
class ModuleSpec:
    type: str = "truncated_symmetric"
    degree: int = 1
    character: Terms | None = None
    labels: tuple[str, ...] = ()
    act: tuple[tuple[str, str, Terms], ...] = ()
    coact: tuple[tuple[str, tuple[tuple[tuple[str, str], Fraction], ...]], ...] = ()
    perturb: tuple[tuple[str, str, Terms], ...] = ()


@dataclass(frozen=True)
class RunSpec:
    checks: tuple[str, ...] = ()
    relative: tuple[str, ...] = ()
    expect_dims: tuple[int, int] | None = None
    components: tuple[tuple[tuple[int, int], str], ...] = ()
    expect: str | None = None


@dataclass(frozen=True)
class SessionSpec:
    name: str = "g"
    basis: tuple[str, ...] = ()
    brackets: tuple[tuple[tuple[str, str], Terms], ...] = ()
    g1: tuple[str, ...] = ()
    g2: tuple[str, ...] = ()
    f_generators: tuple[str, ...] = ()
    module: ModuleSpec | None = None
    run: RunSpec = field(default_factory=RunSpec)


# -- parsing -------------------------------------------------------------------

_TERM_RE = re.compile(r"\s*([+-]?)\s*(?:(\d+(?:/\d+)?)\s*\*\s*)?([^+\-]+?)\s*(?=[+-]|$)")
_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_.^]*$")


def _terms(text: str, line: int, col: int) -> list[tuple[Fraction, str]]:
    """``2*a - 1/2*b ⊗ c`` as ``[(2, 'a'), (-1/2, 'b ⊗ c')]``; ``0`` is empty. A bare rational is a body ``1``."""
    s = text.strip()
    if s == "0":
        return []
    if not s:
        raise ParseError("empty linear combination", line, col)
    out, pos = [], 0
    for m in _TERM_RE.finditer(s):
        if m.start() != pos or not m.group(0).strip():
            break
        sign, coeff, body = m.groups()
        if pos and not sign:
            raise ParseError(f"missing operator before {body!r}", line, col + m.start())
        c = parse_rational(coeff) if coeff else Fraction(1)
        body = body.strip()
        if re.fullmatch(r"\d+(/\d+)?", body) and not coeff:
            c, body = parse_rational(body), "1"
        out.append((-c if sign == "-" else c, body))
        pos = m.end()
    if pos != len(s):
        raise ParseError(f"cannot read {s[pos:]!r}", line, col + pos)
    return out


def _lincomb(text: str, names: Sequence[str], line: int, col: int) -> Terms:
    acc: dict[str, Fraction] = {}
    for c, body in _terms(text, line, col):
        if body not in names:
            raise ParseError(f"unresolved name {body!r}", line, col + max(text.find(body), 0))
        acc[body] = acc.get(body, Fraction(0)) + c
    return tuple((n, acc[n]) for n in names if acc.get(n))


def _names(text: str, line: int, col: int) -> tuple[str, ...]:
    out = tuple(text.split())
    for n in out:
        if not _NAME_RE.match(n):
            raise ParseError(f"invalid name {n!r}", line, col + text.find(n))
    if len(set(out)) != len(out):
        raise ParseError("repeated name", line, col)
    return out


def parse_session(text: str) -> SessionSpec:
    """Parse a session file; errors carry 1-based line and column numbers."""
    section = None
    fields: dict[str, object] = {}
    mod: dict[str, object] = {}
    run: dict[str, object] = {}
    components: list = []
    seen: set[str] = set()
    pending: list[tuple] = []  # resolved once every name is known

    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        head = re.fullmatch(r"\[([a-z_]+)\]", body)
        if head:
            section = head.group(1)
            if section not in SECTIONS:
                raise ParseError(f"unknown section [{section}]", ln, indent + 2)
            if section in seen:
                raise ParseError(f"repeated section [{section}]", ln, indent + 1)
            seen.add(section)
            continue
        if section is None:
            raise ParseError("content before the first section", ln, indent + 1)
        key, eq, value = body.partition("=")
        if section == "module" and re.match(r"(act|coact|perturb)\s", body):
            key, _, value = body.partition(":")
            eq = ":"
        if not eq:
            raise ParseError("expected 'key = value'", ln, indent + 1)
        key = key.strip()
        vcol = indent + len(body) - len(value.lstrip()) + 1
        value = value.strip()

        if section == "lie":
            br = re.fullmatch(r"\[\s*(\S+?)\s*,\s*(\S+?)\s*\]", key)
            if br:
                pending.append(("bracket", (br.group(1), br.group(2)), value, ln, vcol))
                continue
            if key == "name":
                fields["name"] = value
            elif key == "basis":
                fields["basis"] = _names(value, ln, vcol)
            else:
                raise ParseError(f"unknown key {key!r} in [lie]", ln, indent + 1)
        elif section == "matched_pair":
            if key not in ("g1", "g2"):
                raise ParseError(f"unknown key {key!r} in [matched_pair]", ln, indent + 1)
            fields[key] = _names(value, ln, vcol)
        elif section == "hopf":
            if key != "f_generators":
                raise ParseError(f"unknown key {key!r} in [hopf]", ln, indent + 1)
            fields["f_generators"] = _names(value, ln, vcol)
        elif section == "module":
            verb = key.split()[0] if key else ""
            if key == "type":
                if value not in MODULE_TYPES:
                    raise ParseError(f"unknown module type {value!r}", ln, vcol)
                mod["type"] = value
            elif key == "degree":
                if not value.isdigit():
                    raise ParseError("degree must be a non-negative integer", ln, vcol)
                mod["degree"] = int(value)
            elif key == "character":
                pending.append(("character", None, value, ln, vcol))
            elif key == "labels":
                mod["labels"] = _names(value, ln, vcol)
            elif verb in ("act", "perturb"):
                gen = key[len(verb):].strip()
                lab, arrow, img = value.partition("->")
                if not arrow:
                    raise ParseError("expected 'label -> image'", ln, vcol)
                lcol = vcol + len(lab) - len(lab.lstrip())
                gcol = indent + body.index(gen, len(verb)) + 1 if gen else vcol
                pending.append((verb, (gen, lab.strip(), lcol, gcol), img.strip(), ln, vcol + len(lab) + 2))
            elif verb == "coact":
                pending.append(("coact", key[len(verb):].strip(), value, ln, vcol))
            else:
                raise ParseError(f"unknown key {key!r} in [module]", ln, indent + 1)
        else:
            cm = re.fullmatch(r"component\s+(\d+)\s*,\s*(\d+)", key)
            if cm:
                components.append(((int(cm.group(1)), int(cm.group(2))), value))
            elif key == "checks":
                run["checks"] = tuple(value.split())
            elif key == "relative":
                run["relative"] = _names(value, ln, vcol)
            elif key == "expect_dims":
                parts = value.split()
                if len(parts) != 2 or not all(p.isdigit() for p in parts):
                    raise ParseError("expect_dims takes two integers", ln, vcol)
                run["expect_dims"] = (int(parts[0]), int(parts[1]))
            elif key == "expect":
                run["expect"] = value
            else:
                raise ParseError(f"unknown key {key!r} in [run]", ln, indent + 1)

    basis = fields.get("basis", ())
    mod_labels = mod.get("labels", ())
    character = None
    brackets: list = []
    acts: list = []
    coacts: list = []
    perturbs: list = []
    for kind, what, value, ln, col in pending:
        if kind == "bracket":
            for n in what:
                if n not in basis:
                    raise ParseError(f"unresolved name {n!r}", ln, 1)
            brackets.append((what, _lincomb(value, basis, ln, col)))
        elif kind == "character":
            vals: dict[str, Fraction] = {}
            for tok in value.split():
                n, colon, q = tok.partition(":")
                if not colon or n not in basis:
                    raise ParseError(f"bad character entry {tok!r}", ln, col + value.find(tok))
                try:
                    vals[n] = parse_rational(q)
                except ValueError as exc:
                    raise ParseError(str(exc), ln, col + value.find(tok)) from None
            character = tuple((n, vals[n]) for n in basis if n in vals)
        elif kind == "act":
            gen, lab, lcol, gcol = what
            if gen not in basis:
                raise ParseError(f"unresolved generator {gen!r}", ln, gcol)
            if lab not in mod_labels:
                raise ParseError(f"unresolved label {lab!r}", ln, lcol)
            acts.append((gen, lab, _lincomb(value, mod_labels, ln, col)))
        elif kind == "perturb":
            perturbs.append((what[0], what[1], tuple((b, c) for c, b in _terms(value, ln, col))))
        else:
            if what not in mod_labels:
                raise ParseError(f"unresolved label {what!r}", ln, col)
            acc: dict[tuple[str, str], Fraction] = {}
            for c, body in _terms(value, ln, col):
                x, sep, m = (s.strip() for s in body.partition("⊗"))
                if not sep or x not in basis or m not in mod_labels:
                    raise ParseError(f"bad coaction term {body!r}", ln, col + max(value.find(body), 0))
                acc[(x, m)] = acc.get((x, m), Fraction(0)) + c
            coacts.append((what, tuple((k, acc[k]) for k in sorted(acc, key=lambda k: (basis.index(k[0]), mod_labels.index(k[1]))) if acc[k])))

    for k in ("g1", "g2"):
        for n in fields.get(k, ()):
            if n not in basis:
                raise ParseError(f"unresolved name {n!r} in [matched_pair]", 1, 1)
    module = None
    if "module" in seen:
        module = ModuleSpec(type=mod.get("type", "truncated_symmetric"), degree=mod.get("degree", 1),
                            character=character, labels=tuple(mod_labels), act=tuple(acts),
                            coact=tuple(coacts), perturb=tuple(perturbs))
    runspec = RunSpec(checks=run.get("checks", ()), relative=run.get("relative", ()),
                      expect_dims=run.get("expect_dims"), components=tuple(components), expect=run.get("expect"))
    for n in runspec.relative:
        if n not in basis:
            raise ParseError(f"unresolved name {n!r} in [run] relative", 1, 1)
    return SessionSpec(name=fields.get("name", "g"), basis=tuple(basis), brackets=tuple(brackets),
                       g1=fields.get("g1", ()), g2=fields.get("g2", ()), f_generators=fields.get("f_generators", ()),
                       module=module, run=runspec)


# -- printing ------------------------------------------------------------------


def _fmt_terms(terms: Sequence[tuple[str, Fraction]]) -> str:
    if not terms:
        return "0"
    parts = []
    for name, c in terms:
        mag = abs(c)
        t = name if mag == 1 and name != "1" else (format_rational(mag) if name == "1" else f"{format_rational(mag)}*{name}")
        parts.append(("-" if c < 0 else "") + t if not parts else ("- " if c < 0 else "+ ") + t)
    return " ".join(parts)


def format_session(spec: SessionSpec) -> str:
    """Canonical text; ``parse_session(format_session(s)) == s``."""
    out = ["[lie]", f"name = {spec.name}", f"basis = {' '.join(spec.basis)}"]
    out += [f"[{a},{b}] = {_fmt_terms(t)}" for (a, b), t in spec.brackets]
    if spec.g1 or spec.g2:
        out += ["", "[matched_pair]", f"g1 = {' '.join(spec.g1)}", f"g2 = {' '.join(spec.g2)}"]
    if spec.f_generators:
        out += ["", "[hopf]", f"f_generators = {' '.join(spec.f_generators)}"]
    m = spec.module
    if m is not None:
        out += ["", "[module]", f"type = {m.type}", f"degree = {m.degree}"]
        if m.character is not None:
            out.append("character = " + " ".join(f"{n}:{format_rational(c)}" for n, c in m.character))
        if m.labels:
            out.append(f"labels = {' '.join(m.labels)}")
        out += [f"act {g}: {lab} -> {_fmt_terms(t)}" for g, lab, t in m.act]
        out += [f"coact {lab}: {_fmt_terms([(f'{x} ⊗ {k}', c) for (x, k), c in t])}" for lab, t in m.coact]
        out += [f"perturb {g}: {lab} -> {_fmt_terms(t)}" for g, lab, t in m.perturb]
    r = spec.run
    out += ["", "[run]"]
    if r.checks:
        out.append(f"checks = {' '.join(r.checks)}")
    if r.relative:
        out.append(f"relative = {' '.join(r.relative)}")
    if r.expect_dims is not None:
        out.append(f"expect_dims = {r.expect_dims[0]} {r.expect_dims[1]}")
    out += [f"component {p},{q} = {t}" for (p, q), t in r.components]
    if r.expect is not None:
        out.append(f"expect = {r.expect}")
    return "\n".join(out) + "\n"


# -- building objects ----------------------------------------------------------


class SessionError(ValueError):
    """A session that parses but cannot be built or run."""


class Session:
    """Lazily built algebras and modules described by a SessionSpec."""

    def __init__(self, spec: SessionSpec):
        self.spec = spec

    @cached_property
    def g(self) -> LieAlgebra:
        s = self.spec
        if not s.basis:
            raise SessionError("[lie] basis is missing")
        return LieAlgebra(list(s.basis), {k: dict(t) for k, t in s.brackets}, name=s.name)

    @cached_property
    def mp(self) -> MatchedPair:
        if not (self.spec.g1 and self.spec.g2):
            raise SessionError("[matched_pair] g1 and g2 are required")
        return MatchedPair.from_splitting(self.g, list(self.spec.g1), list(self.spec.g2))

    @cached_property
    def hs(self):
        return lie_hopf_from_matched_pair(self.mp, list(self.spec.f_generators) or None)

    @cached_property
    def H(self):
        return bicrossed_build(self.hs)

    @cached_property
    def pair(self):
        return compute_modular_pair(self.hs)

    @cached_property
    def lie_module(self) -> LieModuleComodule:
        m = self.spec.module
        if m is None:
            raise SessionError("[module] is missing")
        if m.type == "truncated_symmetric":
            char = None if m.character is None else dict(m.character)
            return truncated_symmetric_module(self.g, m.degree, character=char, name="M")
        if m.type == "trivial":
            return LieModuleComodule(self.g, ["1"], None, {}, name="C")
        act: dict[str, dict[str, dict[str, Fraction]]] = {}
        for gen, lab, t in m.act:
            act.setdefault(gen, {})[lab] = dict(t)
        coact = {lab: dict(t) for lab, t in m.coact}
        return LieModuleComodule(self.g, list(m.labels), act, coact, name="M")

    def restricted(self, target: str) -> LieModuleComodule:
        if target == "g":
            return self.lie_module
        if target in ("g1", "g2"):
            return self.lie_module.restrict(getattr(self.mp, target), name=f"M|{target}")
        raise SessionError(f"unknown Lie target {target!r}; use g, g1 or g2")

    @cached_property
    def M(self) -> FDModule:
        M = lift_lie_to_hopf(self.lie_module, self.mp, self.H, name="M")
        for gen, lab, t in self.spec.module.perturb:
            if gen not in self.H.generator_names or lab not in M.labels:
                raise SessionError(f"perturbation {gen}: {lab} does not resolve")
            M = M.perturbed_action(gen, lab, dict(t))
        return M

    @cached_property
    def M_delta(self) -> FDModule:
        return twist_by_mpi(self.M, self.pair, name="M_delta")

    def hopf_module(self, target: str) -> FDModule:
        if target == "M":
            return self.M
        if target == "M_delta":
            return self.M_delta
        raise SessionError(f"unknown module target {target!r}; use M or M_delta")


# -- commands ------------------------------------------------------------------

CheckFn = Callable[[Session, str, "RunOptions"], Report]


@dataclass(frozen=True)
class RunOptions:
    max_degree: int = 3
    seed: int = 0


def _algebra_target(sess: Session, target: str) -> LieAlgebra:
    if target == "g":
        return sess.g
    if target in ("g1", "g2"):
        return getattr(sess.mp, target)
    raise SessionError(f"unknown algebra target {target!r}")


def _hopf_axioms(sess: Session, target: str, opts: RunOptions) -> Report:
    rng = random.Random(opts.seed)
    H = sess.H
    deg = min(opts.max_degree, 2)
    elems = [H.random_element(rng, deg) for _ in range(4)]
    pairs = [(H.random_element(rng, deg), H.random_element(rng, deg)) for _ in range(3)]
    return check_hopf_axioms(H, elems, pairs)


CHECKS: dict[str, tuple[str, CheckFn]] = {
    "jacobi": ("g", lambda s, t, o: verify_jacobi(_algebra_target(s, t))),
    "matched-pair": ("g", lambda s, t, o: verify_matched_pair(s.mp)),
    "mutual": ("g", lambda s, t, o: check_mutual_pair(MutualActions(s.mp), min(o.max_degree, 2))),
    "lie-hopf": ("g", lambda s, t, o: check_lie_hopf(s.hs)),
    "coaction-u": ("g", lambda s, t, o: check_coaction_u(s.hs, o.max_degree)),
    "hopf-axioms": ("g", _hopf_axioms),
    "lie-module": ("g", lambda s, t, o: check_module_relations(s.restricted(t))),
    "lie-comodule": ("g", lambda s, t, o: check_lie_comodule(s.restricted(t))),
    "lie-ayd": ("g", lambda s, t, o: check_lie_ayd(s.restricted(t))),
    "lie-stability": ("g", lambda s, t, o: check_lie_stability(s.restricted(t))),
    "unimodular-stability": ("g", lambda s, t, o: check_unimodular_stability(s.restricted(t))),
    "lie-sayd": ("g", lambda s, t, o: check_sayd_lie(s.restricted(t))),
    "matched-ayd": ("g", lambda s, t, o: check_matched_ayd_conditions(s.lie_module, s.mp)),
    "ayd-u": ("g", lambda s, t, o: check_ayd_doublecrossed_u(s.lie_module, s.mp)),
    "mpi-stability": ("g", lambda s, t, o: check_aux47(s.lie_module, s.mp, s.H, s.pair)),
    "module": ("M_delta", lambda s, t, o: check_module_bicrossed(s.hopf_module(t))),
    "comodule": ("M_delta", lambda s, t, o: check_comodule_bicrossed(s.hopf_module(t))),
    "yd": ("M", lambda s, t, o: check_yd(s.hopf_module(t))),
    "ayd": ("M_delta", lambda s, t, o: check_ayd_hopf(s.hopf_module(t))),
    "stability": ("M_delta", lambda s, t, o: check_stability_hopf(s.hopf_module(t))),
    "sayd": ("M_delta", lambda s, t, o: check_sayd_hopf(s.hopf_module(t))),
    "factor-stability": ("M_delta", lambda s, t, o: check_factor_stability(s.hopf_module(t))),
}


def _check_target(token: str) -> tuple[str, str]:
    name, _, target = token.partition(":")
    if name not in CHECKS:
        raise SessionError(f"unknown check {name!r}; known: {', '.join(CHECKS)}")
    return name, target or CHECKS[name][0]


def cmd_verify(spec: SessionSpec, opts: RunOptions = RunOptions()) -> Report:
    """Run every requested checker; check ids are prefixed with the target."""
    sess = Session(spec)
    rep = Report("verify")
    for token in spec.run.checks:
        name, target = _check_target(token)
        sub = CHECKS[name][1](sess, target, opts)
        for r in sub:
            rep.results.append(replace(r, check_id=f"{target}/{r.check_id}"))
    return rep


def cmd_cohomology(spec: SessionSpec, opts: RunOptions = RunOptions()) -> Report:
    """Periodic cohomology of the perturbed Koszul complex, its representatives and the E1 table."""
    sess = Session(spec)
    M = sess.lie_module
    gate = check_sayd_lie(M)
    if not gate.passed:
        bad = gate.first_failure()
        raise SessionError(f"module is not SAYD over {sess.g.name}: {bad.line()}")
    cx = relative_subcomplex(sess.g, spec.run.relative, M)
    hp = periodic_cohomology(cx)
    rep = Report("cohomology")
    rep.add("complex:dims", True, lhs=" ".join(map(str, cx.dims())))
    for parity in (0, 1):
        reps = "; ".join(cx.fmt(v) for v in hp.representatives[parity])
        ok = spec.run.expect_dims is None or hp.dims[parity] == spec.run.expect_dims[parity]
        rhs = "" if spec.run.expect_dims is None else str(spec.run.expect_dims[parity])
        rep.add(f"HP^{parity}", ok, lhs=str(hp.dims[parity]), rhs=rhs if not ok else reps)
    filt = jara_stefan_filtration(M)
    table = spectral_e1(cx, filt)
    for j in sorted(table):
        rep.add(f"E1^{j},*", True, lhs=" ".join(map(str, table[j])))
    # the spectral sequence converges to HP, so E1 bounds it from above
    folded = fold_e1(table)
    bound = folded[0] >= hp.dims[0] and folded[1] >= hp.dims[1]
    rep.add("E1:bound", bound, lhs=f"{folded[0]} {folded[1]}", rhs=f"{hp.dims[0]} {hp.dims[1]}")
    return rep


@dataclass
class TransportResult:
    report: Report
    cocycle: LinComb
    text: str


def cmd_transport(spec: SessionSpec, opts: RunOptions = RunOptions()) -> TransportResult:
    """AW then Ψ on a Tot element, with closedness checks before and after."""
    sess = Session(spec)
    M = sess.M_delta
    Z = BicocyclicComplex(M)
    C = CyclicComplex(M)
    x = LinComb()
    for bideg, text in spec.run.components:
        try:
            x += parse_bichain(text, M, bideg)
        except (ValueError, KeyError) as exc:
            raise SessionError(f"component {bideg[0]},{bideg[1]}: {exc}") from None
    rep = Report("transport")
    bt, Bt = Z.tot_b(x), Z.tot_B(x)
    rep.add("tot:b", not bt, lhs=Z.fmt(bt), rhs="0")
    rep.add("tot:B", not Bt, lhs=Z.fmt(Bt), rhs="0")
    aw = Z.aw_map(x)
    rep.add("aw", True, lhs=Z.fmt(aw))
    y = Z.psi_map(aw)
    text = C.fmt(y)
    rep.add("psi", True, lhs=text)
    b, B = C.hochschild_b(y), C.connes_B(y)
    rep.add("cyclic:b", not b, lhs=C.fmt(b), rhs="0")
    rep.add("cyclic:B", not B, lhs=C.fmt(B), rhs="0")
    if spec.run.expect is not None:
        try:
            want = parse_chain(spec.run.expect, M)
        except (ValueError, KeyError) as exc:
            raise SessionError(f"expect: {exc}") from None
        rep.add("expect", y == want, lhs=text, rhs=C.fmt(want))
    return TransportResult(rep, y, text)


# -- entry point ---------------------------------------------------------------


def load_session(source: str) -> SessionSpec:
    """A file path, or the name of a built-in fixture."""
    path = Path(source)
    if path.exists():
        text = path.read_text(encoding="utf-8")
    elif source in FIXTURES:
        text = fixture_text(source)
    else:
        raise FileNotFoundError(f"no such file or fixture: {source}")
    return parse_session(text)


def _emit(rep: Report, report_path: str | None, verbose: bool) -> int:
    print(rep.render(verbose=verbose))
    if report_path:
        Path(report_path).write_text(rep.to_jsonl(), encoding="utf-8")
    return 0 if rep.passed else 1


def main(argv: Sequence[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="hopfcyc", description="Exact Hopf-cyclic computations")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("verify", "cohomology", "transport"):
        p = sub.add_parser(name)
        p.add_argument("session", help="session file or built-in fixture name")
        p.add_argument("--report", help="write JSON-lines check records to this path")
        p.add_argument("--max-degree", type=int, default=3)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("-v", "--verbose", action="store_true", help="list passing checks too")
    fx = sub.add_parser("fixtures")
    fx.add_argument("action", choices=["list", "show"])
    fx.add_argument("name", nargs="?")
    args = ap.parse_args(argv)

    if args.command == "fixtures":
        if args.action == "list":
            print("\n".join(FIXTURES))
            return 0
        if args.name not in FIXTURES:
            print(f"error: unknown fixture {args.name!r}", file=sys.stderr)
            return 2
        print(fixture_text(args.name), end="")
        return 0

    try:
        spec = load_session(args.session)
        opts = RunOptions(args.max_degree, args.seed)
        if args.command == "verify":
            return _emit(cmd_verify(spec, opts), args.report, args.verbose)
        if args.command == "cohomology":
            rep = cmd_cohomology(spec, opts)
            code = _emit(rep, args.report, False)
            for r in rep:
                print(f"{r.check_id}: {r.lhs}" + (f"  [{r.rhs}]" if r.rhs else ""))
            return code
        res = cmd_transport(spec, opts)
        code = _emit(res.report, args.report, args.verbose)
        print(res.text)
        return code
    except (ParseError, SessionError, FileNotFoundError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
