"""Finite-dimensional modules and comodules over ``H = F ▸◂ U`` and their (S)AYD/YD checks.

Module elements are ``LinComb`` objects keyed by basis index. Elements of
``H ⊗ M`` are keyed by ``(h_key, m_index)`` with ``h_key = (f_exps, u_exps)``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .exactnum import LinComb
from .hopfalg import BicrossedHopf, EnvelopingAlgebra, Exps, ModularPair, MutualActions, _add, _exp_factorial, _unit
from .liealg import LieModuleComodule, MatchedPair, format_terms
from .reports import Report


class FDModule:
    """Right H-module and left H-comodule on a labelled basis.

    ``action`` maps an H generator name (an F generator or a basis element of g1)
    to ``{label: {label: coeff}}``. ``coaction`` maps a label to
    ``{(h_key, label): coeff}``. A monomial ``f ▸◂ u`` acts as ``(m·f)·u``
    with the letters of u acting left to right.
    """

    def __init__(self, H: BicrossedHopf, labels: Sequence[str],
                 action: Mapping[str, Mapping[str, Mapping[str, object]]],
                 coaction: Mapping[str, Mapping[tuple, object]] | None = None, name: str = ""):
        self.H = H
        self.name = name
        self.labels: tuple[str, ...] = tuple(labels)
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("repeated module labels")
        self.index = {l: i for i, l in enumerate(self.labels)}
        names = H.generator_names
        self._gen_act: dict[str, list[LinComb]] = {n: [LinComb() for _ in self.labels] for n in names}
        for gen, table in action.items():
            if gen not in self._gen_act:
                raise KeyError(f"unknown H generator {gen!r}")
            for lab, img in table.items():
                self._gen_act[gen][self._m(lab)] = LinComb((self._m(k), Fraction(v)) for k, v in img.items())
        self._coact: list[LinComb] = [LinComb.basis((H.unit_key, i)) for i in range(len(self.labels))]
        for lab, img in (coaction or {}).items():
            self._coact[self._m(lab)] = LinComb(((hk, self._m(k)), Fraction(v)) for (hk, k), v in img.items())
        self._act_cache: dict[tuple[int, tuple[Exps, Exps]], LinComb] = {}

    def _m(self, label: str) -> int:
        try:
            return self.index[label]
        except KeyError:
            raise KeyError(f"unknown module basis label {label!r}") from None

    @property
    def dim(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"FDModule({self.name or '?'}, labels={list(self.labels)})"

    # tables -------------------------------------------------------------------
    def action_table(self) -> dict[str, dict[str, dict[str, Fraction]]]:
        out = {}
        for gen, rows in self._gen_act.items():
            tab = {self.labels[m]: {self.labels[k]: c for k, c in sorted(img.items())} for m, img in enumerate(rows) if img}
            if tab:
                out[gen] = tab
        return out

    def coaction_table(self) -> dict[str, dict[tuple, Fraction]]:
        return {self.labels[m]: {(hk, self.labels[k]): c for (hk, k), c in img.items()} for m, img in enumerate(self._coact)}

    def with_tables(self, action=None, coaction=None, name: str = "") -> "FDModule":
        return FDModule(self.H, self.labels, self.action_table() if action is None else action,
                        self.coaction_table() if coaction is None else coaction, name=name or self.name)

    def perturbed_action(self, gen: str, label: str, image: Mapping[str, object], name: str = "") -> "FDModule":
        """Copy with one action entry ``label ◁ gen`` replaced."""
        act = self.action_table()
        act.setdefault(gen, {})[label] = dict(image)
        return self.with_tables(action=act, name=name or f"{self.name} ({label}◁{gen} changed)")

    # linear operations ----------------------------------------------------------
    def vec(self, spec: str | Mapping[str, object]) -> LinComb:
        if isinstance(spec, str):
            return LinComb.basis(self._m(spec))
        return LinComb((self._m(k), Fraction(v)) for k, v in spec.items())

    def act_gen(self, v: Mapping[int, Fraction], gen: str) -> LinComb:
        rows = self._gen_act[gen]
        out = LinComb()
        for m, c in v.items():
            out.add_scaled(rows[m], c)
        return out

    def _act_basis(self, m: int, key: tuple[Exps, Exps]) -> LinComb:
        ck = (m, key)
        hit = self._act_cache.get(ck)
        if hit is None:
            f, u = key
            cur = LinComb.basis(m)
            for i, e in enumerate(f):
                for _ in range(e):
                    cur = self.act_gen(cur, self.H.F.names[i])
            for i, e in enumerate(u):
                for _ in range(e):
                    cur = self.act_gen(cur, self.H.U.names[i])
            hit = cur
            self._act_cache[ck] = hit
        return hit

    def act(self, v: Mapping[int, Fraction], h: Mapping) -> LinComb:
        out = LinComb()
        for m, c in v.items():
            for k, d in h.items():
                out.add_scaled(self._act_basis(m, k), c * d)
        return out

    def coact(self, v: Mapping[int, Fraction]) -> LinComb:
        out = LinComb()
        for m, c in v.items():
            out.add_scaled(self._coact[m], c)
        return out

    def f_coaction(self, v: Mapping[int, Fraction]) -> LinComb:
        """``(π_F ⊗ Id)▼`` keyed by ``(f_exps, m)``."""
        out = LinComb()
        for ((f, u), k), c in self.coact(v).items():
            if not any(u):
                out.add_term((f, k), c)
        return out

    def u_coaction(self, v: Mapping[int, Fraction]) -> LinComb:
        """``(π_U ⊗ Id)▼`` keyed by ``(u_exps, m)``."""
        out = LinComb()
        for ((f, u), k), c in self.coact(v).items():
            if not any(f):
                out.add_term((u, k), c)
        return out

    # formatting -------------------------------------------------------------------
    def fmt(self, v: Mapping[int, Fraction]) -> str:
        return format_terms(v, lambda m: self.labels[m])

    def fmt_hm(self, t: Mapping) -> str:
        H = self.H
        return format_terms(t, lambda k: f"{H.fmt_basis(k[0])} ⊗ {self.labels[k[1]]}",
                            sort_key=lambda k: (k[1], H.sort_key(k[0])))

    @classmethod
    def from_factors(cls, H: BicrossedHopf, labels: Sequence[str],
                     u_action: Mapping[str, Mapping[str, Mapping[str, object]]],
                     f_action: Mapping[str, Mapping[str, Mapping[str, object]]],
                     u_coaction: Mapping[str, Mapping[tuple[Exps, str], object]],
                     f_coaction: Mapping[str, Mapping[tuple[Exps, str], object]], name: str = "") -> "FDModule":
        """Assemble ``m ↦ m^⟨-1⟩ ▸◂ m^⟨0⟩[-1] ⊗ m^⟨0⟩[0]`` from the two factor coactions."""
        action = dict(u_action)
        action.update(f_action)
        idx = {l: i for i, l in enumerate(labels)}
        uco: list[LinComb] = []
        for lab in labels:
            if lab in u_coaction:
                uco.append(LinComb(((u, idx[k]), Fraction(c)) for (u, k), c in u_coaction[lab].items()))
            else:
                uco.append(LinComb.basis((H.U.zero_exps, idx[lab])))
        coaction: dict[str, dict[tuple, Fraction]] = {}
        for lab in labels:
            fimg = f_coaction.get(lab, {(H.F.zero_exps, lab): 1})
            row = LinComb()
            for (f, k), c in fimg.items():
                for (u, k2), d in uco[idx[k]].items():
                    row.add_term(((f, u), labels[k2]), Fraction(c) * d)
            coaction[lab] = dict(row)
        return cls(H, labels, action, coaction, name=name)


# ---------------------------------------------------------------------------
# checkers


def check_module_bicrossed(M: FDModule) -> Report:
    """U-module relations, commutativity of the F-action and ``(m·X)·f = (m·f)·X + m·(X▷f)``."""
    H = M.H
    U, F, g = H.U, H.F, H.U.g
    rep = Report("module over the bicrossed product")
    for m in range(M.dim):
        e = LinComb.basis(m)
        for i in range(g.dim):
            for j in range(i + 1, g.dim):
                lhs = M.act_gen(M.act_gen(e, g.basis[i]), g.basis[j]) - M.act_gen(M.act_gen(e, g.basis[j]), g.basis[i])
                rhs = M.act(e, H.from_u(U.embed(g.bracket_basis(i, j))))
                rep.add("u-module", lhs == rhs, (M.labels[m], g.basis[i], g.basis[j]), M.fmt(lhs), M.fmt(rhs))
        for a in range(F.n):
            for b in range(a + 1, F.n):
                lhs = M.act_gen(M.act_gen(e, F.names[a]), F.names[b])
                rhs = M.act_gen(M.act_gen(e, F.names[b]), F.names[a])
                rep.add("f-module", lhs == rhs, (M.labels[m], F.names[a], F.names[b]), M.fmt(lhs), M.fmt(rhs))
        for i in range(g.dim):
            X = g.basis[i]
            for a in range(F.n):
                fn = F.names[a]
                lhs = M.act_gen(M.act_gen(e, X), fn)
                rhs = M.act_gen(M.act_gen(e, fn), X)
                rhs.add_scaled(M.act(e, H.from_f(H.hs.act_gen(i, _unit(F.n, a)))))
                rep.add("aux-25", lhs == rhs, (M.labels[m], X, fn), M.fmt(lhs), M.fmt(rhs))
    return rep


def check_comodule_bicrossed(M: FDModule) -> Report:
    """Coassociativity/counit of the H-coaction and the factor compatibility

    ``(m^⟨0⟩[-1])⁽⁰⁾ ⊗ m^⟨-1⟩ (m^⟨0⟩[-1])⁽¹⁾ ⊗ m^⟨0⟩[0] = m[-1] ⊗ m[0]^⟨-1⟩ ⊗ m[0]^⟨0⟩``.
    """
    H = M.H
    U, F = H.U, H.F
    hs = H.hs
    rep = Report("comodule over the bicrossed product")
    render = lambda k: f"{U.fmt_mono(k[0])} ⊗ {F.fmt_mono(k[1])} ⊗ {M.labels[k[2]]}"
    for m in range(M.dim):
        e = LinComb.basis(m)
        co = M.coact(e)
        left, right = LinComb(), LinComb()
        for (h, k), c in co.items():
            for (h2, k2), d in M._coact[k].items():
                left.add_term((h, h2, k2), c * d)
            for (h1, h2), d in H.coproduct_basis(h).items():
                right.add_term((h1, h2, k), c * d)
        rep.add("h-comodule", left == right, (M.labels[m],),
                format_terms(left, lambda t: f"{H.fmt_basis(t[0])} ⊗ {H.fmt_basis(t[1])} ⊗ {M.labels[t[2]]}"),
                format_terms(right, lambda t: f"{H.fmt_basis(t[0])} ⊗ {H.fmt_basis(t[1])} ⊗ {M.labels[t[2]]}"))
        cnt = LinComb()
        for (h, k), c in co.items():
            cnt.add_term(k, c * H.counit(LinComb.basis(h)))
        rep.add("h-comodule-counit", cnt == e, (M.labels[m],), M.fmt(cnt), M.labels[m])
        # the H-coaction is assembled from its two projections
        assembled = LinComb()
        for (f, k), c in M.f_coaction(e).items():
            for (u, k2), d in M.u_coaction(LinComb.basis(k)).items():
                assembled.add_term(((f, u), k2), c * d)
        rep.add("auxy12", assembled == co, (M.labels[m],), M.fmt_hm(assembled), M.fmt_hm(co))
        lhs = LinComb()
        for (f, k), c in M.f_coaction(e).items():
            for (u, k2), d in M.u_coaction(LinComb.basis(k)).items():
                for (u0, u1), x in hs.coact_mono(u).items():
                    lhs.add_term((u0, _add(f, u1), k2), c * d * x)
        rhs = LinComb()
        for (u, k), c in M.u_coaction(e).items():
            for (f, k2), d in M.f_coaction(LinComb.basis(k)).items():
                rhs.add_term((u, f, k2), c * d)
        rep.add("aux-27", lhs == rhs, (M.labels[m],), format_terms(lhs, render), format_terms(rhs, render))
    return rep


def _yd_sides(M: FDModule, m: int, h: LinComb) -> tuple[LinComb, LinComb]:
    H = M.H
    e = LinComb.basis(m)
    lhs, rhs = LinComb(), LinComb()
    for (h1, h2), c in H.coproduct(h).items():
        for (a, k), d in M.coact(M._act_basis(m, h1)).items():
            for p, x in H.mul_basis(h2, a).items():
                lhs.add_term((p, k), c * d * x)
        for (a, k), d in M.coact(e).items():
            prod = H.mul_basis(a, h1)
            acted = M._act_basis(k, h2)
            for p, x in prod.items():
                for k2, y in acted.items():
                    rhs.add_term((p, k2), c * d * x * y)
    return lhs, rhs


def check_yd(M: FDModule, elements: Sequence[tuple[str, LinComb]] | None = None) -> Report:
    """``h(2)(m·h(1))⟨-1⟩ ⊗ (m·h(1))⟨0⟩ = m⟨-1⟩h(1) ⊗ m⟨0⟩·h(2)`` on generators (or given elements)."""
    H = M.H
    rep = Report("YD condition")
    items = elements if elements is not None else [(n, H.gen(n)) for n in H.U.names + H.F.names]
    for m in range(M.dim):
        for name, h in items:
            lhs, rhs = _yd_sides(M, m, h)
            rep.add("yd", lhs == rhs, (M.labels[m], name), M.fmt_hm(lhs), M.fmt_hm(rhs))
    return rep


def check_ayd_hopf(M: FDModule, elements: Sequence[tuple[str, LinComb]] | None = None) -> Report:
    """``▼(m·h) = S(h(3)) m⟨-1⟩ h(1) ⊗ m⟨0⟩·h(2)``."""
    H = M.H
    rep = Report("AYD condition")
    items = elements if elements is not None else [(n, H.gen(n)) for n in H.U.names + H.F.names]
    for m in range(M.dim):
        e = LinComb.basis(m)
        co = M.coact(e)
        for name, h in items:
            lhs = M.coact(M.act(e, h))
            rhs = LinComb()
            for (h1, h23), c in H.coproduct(h).items():
                for (h2, h3), d in H.coproduct_basis(h23).items():
                    s3 = H.antipode_basis(h3)
                    for (a, k), x in co.items():
                        left = H.mul(H.mul(s3, LinComb.basis(a)), LinComb.basis(h1))
                        acted = M._act_basis(k, h2)
                        for p, y in left.items():
                            for k2, z in acted.items():
                                rhs.add_term((p, k2), c * d * x * y * z)
            rep.add("ayd", lhs == rhs, (M.labels[m], name), M.fmt_hm(lhs), M.fmt_hm(rhs))
    return rep


def stability_value(M: FDModule, v: Mapping[int, Fraction]) -> LinComb:
    """``m⟨0⟩·m⟨-1⟩``."""
    out = LinComb()
    for (h, k), c in M.coact(v).items():
        out.add_scaled(M._act_basis(k, h), c)
    return out


def check_stability_hopf(M: FDModule) -> Report:
    rep = Report("stability")
    for m in range(M.dim):
        val = stability_value(M, LinComb.basis(m))
        rep.add("stability", val == LinComb.basis(m), (M.labels[m],), M.fmt(val), M.labels[m])
    return rep


def check_sayd_hopf(M: FDModule) -> Report:
    rep = Report(f"SAYD over the bicrossed product: {M.name}")
    rep.extend(check_module_bicrossed(M)).extend(check_comodule_bicrossed(M))
    rep.extend(check_ayd_hopf(M)).extend(check_stability_hopf(M))
    return rep


# ---------------------------------------------------------------------------
# twisting


def character_value(H: BicrossedHopf, delta: Mapping[str, Fraction], key: tuple[Exps, Exps]) -> Fraction:
    """``δ(f ▸◂ u) = ε(f) δ(u)`` with δ multiplicative on U."""
    f, u = key
    if any(f):
        return Fraction(0)
    val = Fraction(1)
    for name, e in zip(H.U.names, u):
        if e:
            val *= Fraction(delta.get(name, 0)) ** e
    return val


def twist_by_mpi(M: FDModule, mp: ModularPair, name: str = "") -> FDModule:
    """``m·_δ h = (m·h(1)) δ(h(2))`` and ``m ↦ m⟨-1⟩σ ⊗ m⟨0⟩``."""
    H = M.H
    act: dict[str, dict[str, dict[str, Fraction]]] = {}
    for gen in H.generator_names:
        h = H.gen(gen)
        tab = {}
        for m in range(M.dim):
            img = LinComb()
            for (h1, h2), c in H.coproduct(h).items():
                d = character_value(H, mp.delta, h2)
                if d:
                    img.add_scaled(M._act_basis(m, h1), c * d)
            if img:
                tab[M.labels[m]] = {M.labels[k]: c for k, c in img.items()}
        if tab:
            act[gen] = tab
    sigma = H.from_f(mp.sigma)
    coact = {}
    for m in range(M.dim):
        row = LinComb()
        for (h, k), c in M._coact[m].items():
            for p, d in H.mul(LinComb.basis(h), sigma).items():
                row.add_term((p, M.labels[k]), c * d)
        coact[M.labels[m]] = dict(row)
    return FDModule(H, M.labels, act, coact, name=name or f"{M.name}_δ")


def inverse_character(H: BicrossedHopf, delta: Mapping[str, Fraction]) -> dict[str, Fraction]:
    """``δ ∘ S`` on the generators of U."""
    out = {}
    for name in H.U.names:
        s = H.antipode(H.gen(name))
        out[name] = sum((c * character_value(H, delta, k) for k, c in s.items()), Fraction(0))
    return out


# ---------------------------------------------------------------------------
# lifting Lie data to H


def _iterate_bound(M: LieModuleComodule) -> int:
    return M.dim + 1


def lift_u_coaction(M: LieModuleComodule, U: EnvelopingAlgebra) -> list[LinComb]:
    """``m ↦ Σ_n (1/n!) m[-n]⋯m[-1] ⊗ m[0]`` for a locally conilpotent coaction.

    ``M`` must live over the Lie algebra of ``U``. Returns, per basis element,
    a ``LinComb`` keyed by ``(u_exps, m)``.
    """
    g = U.g
    out: list[LinComb] = []
    for m in range(M.dim):
        total = LinComb.basis((U.zero_exps, m))
        level = LinComb.basis((U.zero_exps, m))
        n = 0
        while level:
            n += 1
            if n > _iterate_bound(M):
                raise ValueError(f"coaction is not locally conilpotent at {M.labels[m]!r}")
            nxt = LinComb()
            for (u, k), c in level.items():
                for (a, k2), d in M.coaction_image(k).items():
                    for w, e in U.mul_mono(u, _unit(g.dim, a)).items():
                        nxt.add_term((w, k2), c * d * e)
            level = nxt
            total.add_scaled(level, Fraction(1, _factorial(n)))
        out.append(total)
    return out


def _factorial(n: int) -> int:
    r = 1
    for k in range(2, n + 1):
        r *= k
    return r


def lift_f_coaction(M: LieModuleComodule, n_f: int, zero_f: Exps) -> list[LinComb]:
    """``m ↦ Σ_e δ^e/e! ⊗ m·ζ^e`` from a nilpotent right action of g2 (basis order of g2)."""
    g2 = M.g
    r = g2.dim
    out: list[LinComb] = []
    for m in range(M.dim):
        total = LinComb()
        frontier = {zero_f: LinComb.basis(m)}
        seen = 0
        while frontier:
            seen += 1
            if seen > _iterate_bound(M) + 1:
                raise ValueError(f"g2-action is not nilpotent at {M.labels[m]!r}")
            nxt: dict[Exps, LinComb] = {}
            for e, vec in frontier.items():
                for k, c in vec.items():
                    total.add_term((e, k), Fraction(c, _exp_factorial(e)))
                # extend in PBW order: only append letters ≥ the last used one
                last = max((i for i in range(r) if e[i]), default=0)
                for i in range(last, r):
                    img = M.act(vec, i)
                    if img:
                        e2 = _add(e, _unit(r, i))
                        nxt.setdefault(e2, LinComb()).add_scaled(img)
            frontier = {e: v for e, v in nxt.items() if v}
        out.append(total)
    return out


def lift_lie_to_hopf(M: LieModuleComodule, mp: MatchedPair, H: BicrossedHopf, name: str = "") -> FDModule:
    """H-module and H-comodule from an AYD module over ``g1 ⋈ g2``.

    * U acts through the g1-action;
    * F acts by ``m·δ_k = ⟨δ_k, m⟨-1⟩⟩ m⟨0⟩`` (the ζ_k-component of the g2-coaction);
    * the U-coaction lifts the g1-coaction, the F-coaction dualizes the g2-action;
    * the H-coaction is ``m^⟨-1⟩ ▸◂ m^⟨0⟩[-1] ⊗ m^⟨0⟩[0]``.
    """
    g1, g2 = mp.g1, mp.g2
    if tuple(H.U.names) != g1.basis:
        raise ValueError("H must be built over g1")
    if H.F.n != g2.dim:
        raise ValueError("F needs one generator per basis element of g2")
    M1 = M.restrict(g1)
    M2 = M.restrict(g2)
    labels = M.labels
    u_action = {x: tab for x, tab in M1.action_table().items()}
    f_action: dict[str, dict[str, dict[str, Fraction]]] = {}
    for k, fname in enumerate(H.F.names):
        tab = {}
        for m in range(M.dim):
            img = M2.theta(LinComb.basis(m), k)
            if img:
                tab[labels[m]] = {labels[j]: c for j, c in img.items()}
        if tab:
            f_action[fname] = tab
    uco = lift_u_coaction(M1, H.U)
    fco = lift_f_coaction(M2, H.F.n, H.F.zero_exps)
    u_coaction = {labels[m]: {(u, labels[k]): c for (u, k), c in uco[m].items()} for m in range(M.dim)}
    f_coaction = {labels[m]: {(f, labels[k]): c for (f, k), c in fco[m].items()} for m in range(M.dim)}
    return FDModule.from_factors(H, labels, u_action, f_action, u_coaction, f_coaction, name=name or M.name)


# ---------------------------------------------------------------------------
# U(g1)/U(g2)-level conditions


def check_ayd_doublecrossed_u(M: LieModuleComodule, mp: MatchedPair, max_degree: int = 1) -> Report:
    """The four conditions relating lifted coactions to the mutual actions.

    * ``auxy3``: ``(m·u)⟨-1⟩ ⊗ (m·u)⟨0⟩ = m⟨-1⟩◁u(1) ⊗ m⟨0⟩·u(2)``
    * ``auxy4``: ``m⟨-1⟩▷u ⊗ m⟨0⟩ = u ⊗ m``
    * ``auxy5``: ``(m·v)[-1] ⊗ (m·v)[0] = S(v(2))▷m[-1] ⊗ m[0]·v(1)``
    * ``auxy6``: ``v◁m[-1] ⊗ m[0] = v ⊗ m``

    for PBW monomials u ∈ U(g1), v ∈ U(g2) up to ``max_degree``.
    """
    ma = MutualActions(mp)
    U1, U2 = ma.U1, ma.U2
    M1, M2 = M.restrict(mp.g1), M.restrict(mp.g2)
    co1 = lift_u_coaction(M1, U1)
    co2 = lift_u_coaction(M2, U2)
    rep = Report("AYD over U(g1) ⋈ U(g2)")

    def act_u(Mx: LieModuleComodule, vec: LinComb, e: Exps) -> LinComb:
        cur = vec
        for i, k in enumerate(e):
            for _ in range(k):
                cur = Mx.act(cur, i)
        return cur

    def lifted(co: list[LinComb], vec: Mapping[int, Fraction]) -> LinComb:
        out = LinComb()
        for m, c in vec.items():
            out.add_scaled(co[m], c)
        return out

    f1 = lambda t: format_terms(t, lambda k: f"{U1.fmt_mono(k[0])} ⊗ {M.labels[k[1]]}")
    f2 = lambda t: format_terms(t, lambda k: f"{U2.fmt_mono(k[0])} ⊗ {M.labels[k[1]]}")
    for m in range(M.dim):
        e = LinComb.basis(m)
        for u in U1.monomials(max_degree):
            lhs = lifted(co2, act_u(M1, e, u))
            rhs = LinComb()
            for (u1, u2), c in U1.coproduct_mono(u).items():
                for (v, k), d in co2[m].items():
                    for w, x in ma.right(LinComb.basis(v), LinComb.basis(u1)).items():
                        for k2, y in act_u(M1, LinComb.basis(k), u2).items():
                            rhs.add_term((w, k2), c * d * x * y)
            rep.add("auxy3", lhs == rhs, (M.labels[m], U1.fmt_mono(u)), f2(lhs), f2(rhs))
            lhs = LinComb()
            for (v, k), d in co2[m].items():
                for w, x in ma.left(LinComb.basis(v), LinComb.basis(u)).items():
                    lhs.add_term((w, k), d * x)
            rhs = LinComb.basis((u, m))
            rep.add("auxy4", lhs == rhs, (M.labels[m], U1.fmt_mono(u)), f1(lhs), f1(rhs))
        for v in U2.monomials(max_degree):
            lhs = lifted(co1, act_u(M2, e, v))
            rhs = LinComb()
            for (v1, v2), c in U2.coproduct_mono(v).items():
                sv2 = U2.antipode_mono(v2)
                for (u, k), d in co1[m].items():
                    for w, x in ma.left(sv2, LinComb.basis(u)).items():
                        for k2, y in act_u(M2, LinComb.basis(k), v1).items():
                            rhs.add_term((w, k2), c * d * x * y)
            rep.add("auxy5", lhs == rhs, (M.labels[m], U2.fmt_mono(v)), f1(lhs), f1(rhs))
            lhs = LinComb()
            for (u, k), d in co1[m].items():
                for w, x in ma.right(LinComb.basis(v), LinComb.basis(u)).items():
                    lhs.add_term((w, k), d * x)
            rhs = LinComb.basis((v, m))
            rep.add("auxy6", lhs == rhs, (M.labels[m], U2.fmt_mono(v)), f2(lhs), f2(rhs))
    return rep


def aux47_value(M: LieModuleComodule, mp: MatchedPair, H: BicrossedHopf, pair: ModularPair, v: Mapping[int, Fraction]) -> LinComb:
    """``m[0] δ(m[-1]) σ`` with the U(g1)-lift of the g1-coaction; σ must be scalar."""
    if any(any(f) for f in pair.sigma):
        raise ValueError("σ is not a scalar; the formula needs σ ∈ ℂ")
    s = pair.sigma.get(H.F.zero_exps, Fraction(0))
    co = lift_u_coaction(M.restrict(mp.g1), H.U)
    out = LinComb()
    for m, c in v.items():
        for (u, k), d in co[m].items():
            out.add_term(k, c * d * character_value(H, pair.delta, (H.F.zero_exps, u)) * s)
    return out


def check_aux47(M: LieModuleComodule, mp: MatchedPair, H: BicrossedHopf, pair: ModularPair) -> Report:
    rep = Report("twisted stability criterion m[0]δ(m[-1])σ = m")
    for m in range(M.dim):
        val = aux47_value(M, mp, H, pair, LinComb.basis(m))
        rep.add("aux-47", val == LinComb.basis(m), (M.labels[m],), M.fmt(val), M.labels[m])
    return rep


def check_factor_stability(M: FDModule) -> Report:
    """Stability over U and over F separately (``m[0]·m[-1] = m`` and ``m^⟨0⟩·m^⟨-1⟩ = m``)."""
    H = M.H
    rep = Report("stability over U and over F")
    for m in range(M.dim):
        e = LinComb.basis(m)
        val = LinComb()
        for (u, k), c in M.u_coaction(e).items():
            val.add_scaled(M._act_basis(k, (H.F.zero_exps, u)), c)
        rep.add("u-stability", val == e, (M.labels[m],), M.fmt(val), M.labels[m])
        val = LinComb()
        for (f, k), c in M.f_coaction(e).items():
            val.add_scaled(M._act_basis(k, (f, H.U.zero_exps)), c)
        rep.add("f-stability", val == e, (M.labels[m],), M.fmt(val), M.labels[m])
    return rep
