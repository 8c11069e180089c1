"""Enveloping algebras in PBW form, polynomial Hopf algebras and bicrossed products ``F ▸◂ U``.

Elements are ``LinComb`` objects:

* ``U(g)``: keys are exponent tuples over the ordered basis of g (PBW monomials);
* ``F``: keys are exponent tuples over the polynomial generators;
* ``H = F ▸◂ U``: keys are pairs ``(f_exps, u_exps)`` standing for ``f ▸◂ u``.

Tensor products use tuples of such keys.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from math import factorial
from typing import Mapping, Sequence

from .exactnum import LinComb, format_rational
from .liealg import LieAlgebra, MatchedPair, double_crossed_sum, format_terms
from .reports import Report

Exps = tuple[int, ...]

# Type aliases naming the three element kinds.
PBWElement = LinComb
PolyElement = LinComb
BicrossedElement = LinComb


def _unit(n: int, i: int) -> Exps:
    return tuple(1 if k == i else 0 for k in range(n))


def _add(a: Exps, b: Exps) -> Exps:
    return tuple(x + y for x, y in zip(a, b))


def _sub(a: Exps, b: Exps) -> Exps:
    return tuple(x - y for x, y in zip(a, b))


def _exps_upto(n: int, max_degree: int) -> list[Exps]:
    out: list[Exps] = []

    def rec(prefix: Exps, left: int) -> None:
        if len(prefix) == n:
            out.append(prefix)
            return
        for e in range(left + 1):
            rec(prefix + (e,), left - e)

    rec((), max_degree)
    return sorted(out, key=lambda e: (sum(e), tuple(-x for x in e)))


def _sub_exps(e: Exps) -> list[Exps]:
    return list(product(*(range(k + 1) for k in e)))


def _binom_weight(e: Exps, a: Exps) -> int:
    w = 1
    for x, y in zip(e, a):
        w *= factorial(x) // (factorial(y) * factorial(x - y))
    return w


def _exp_factorial(e: Exps) -> int:
    w = 1
    for x in e:
        w *= factorial(x)
    return w


def format_monomial(names: Sequence[str], e: Exps, sep: str = "*") -> str:
    parts = [n + (f"^{k}" if k > 1 else "") for n, k in zip(names, e) if k]
    return sep.join(parts) if parts else "1"


# ---------------------------------------------------------------------------
# U(g)


class EnvelopingAlgebra:
    """``U(g)`` with the PBW basis ordered by the declared basis of g."""

    def __init__(self, g: LieAlgebra):
        self.g = g
        self.n = g.dim
        self.zero_exps: Exps = (0,) * self.n
        self._mul_gen: dict[tuple[Exps, int], LinComb] = {}
        self._mul_mono: dict[tuple[Exps, Exps], LinComb] = {}
        self._antipode: dict[Exps, LinComb] = {}

    @property
    def names(self) -> tuple[str, ...]:
        return self.g.basis

    def one(self) -> LinComb:
        return LinComb.basis(self.zero_exps)

    def gen(self, name: str | int) -> LinComb:
        i = name if isinstance(name, int) else self.g._idx(name)
        return LinComb.basis(_unit(self.n, i))

    def embed(self, v: Mapping[int, Fraction]) -> LinComb:
        """Lie algebra vector as a degree-one element."""
        return LinComb((_unit(self.n, i), c) for i, c in v.items())

    def mul_gen(self, e: Exps, i: int) -> LinComb:
        """``x^e · x_i`` in PBW form."""
        key = (e, i)
        hit = self._mul_gen.get(key)
        if hit is not None:
            return hit
        j = max((k for k in range(self.n) if e[k]), default=-1)
        if j <= i:
            out = LinComb.basis(_add(e, _unit(self.n, i)))
        else:
            # x^{e'} x_j x_i = (x^{e'} x_i) x_j + x^{e'} [x_j, x_i]
            ep = _sub(e, _unit(self.n, j))
            out = LinComb()
            for a, c in self.mul_gen(ep, i).items():
                out.add_scaled(self.mul_gen(a, j), c)
            for k, c in self.g.bracket_basis(j, i).items():
                out.add_scaled(self.mul_gen(ep, k), c)
        self._mul_gen[key] = out
        return out

    def mul_mono(self, e: Exps, f: Exps) -> LinComb:
        key = (e, f)
        hit = self._mul_mono.get(key)
        if hit is not None:
            return hit
        cur = LinComb.basis(e)
        for i, k in enumerate(f):
            for _ in range(k):
                nxt = LinComb()
                for a, c in cur.items():
                    nxt.add_scaled(self.mul_gen(a, i), c)
                cur = nxt
        self._mul_mono[key] = cur
        return cur

    def mul(self, a: Mapping[Exps, Fraction], b: Mapping[Exps, Fraction]) -> LinComb:
        out = LinComb()
        for e, c in a.items():
            for f, d in b.items():
                out.add_scaled(self.mul_mono(e, f), c * d)
        return out

    def word(self, letters: Sequence[int]) -> LinComb:
        cur = self.one()
        for i in letters:
            nxt = LinComb()
            for a, c in cur.items():
                nxt.add_scaled(self.mul_gen(a, i), c)
            cur = nxt
        return cur

    def coproduct_mono(self, e: Exps) -> LinComb:
        return LinComb(((a, _sub(e, a)), _binom_weight(e, a)) for a in _sub_exps(e))

    def coproduct(self, a: Mapping[Exps, Fraction]) -> LinComb:
        """Generators primitive, extended multiplicatively (binomial on PBW monomials)."""
        out = LinComb()
        for e, c in a.items():
            out.add_scaled(self.coproduct_mono(e), c)
        return out

    def counit(self, a: Mapping[Exps, Fraction]) -> Fraction:
        return Fraction(a.get(self.zero_exps, 0))

    def antipode_mono(self, e: Exps) -> LinComb:
        hit = self._antipode.get(e)
        if hit is None:
            letters = [i for i in range(self.n) for _ in range(e[i])]
            hit = self.word(letters[::-1]).scale((-1) ** len(letters))
            self._antipode[e] = hit
        return hit

    def antipode(self, a: Mapping[Exps, Fraction]) -> LinComb:
        out = LinComb()
        for e, c in a.items():
            out.add_scaled(self.antipode_mono(e), c)
        return out

    def monomials(self, max_degree: int) -> list[Exps]:
        return _exps_upto(self.n, max_degree)

    def fmt_mono(self, e: Exps) -> str:
        return format_monomial(self.names, e)

    def fmt(self, a: Mapping[Exps, Fraction]) -> str:
        return format_terms(a, self.fmt_mono, sort_key=_deg_desc)


def _deg_desc(e: Exps):
    return (-sum(e), tuple(-x for x in e))


def pbw_multiply(a: PBWElement, b: PBWElement, g: LieAlgebra | EnvelopingAlgebra) -> PBWElement:
    U = g if isinstance(g, EnvelopingAlgebra) else EnvelopingAlgebra(g)
    return U.mul(a, b)


def pbw_coproduct(u: PBWElement, g: LieAlgebra | EnvelopingAlgebra) -> LinComb:
    U = g if isinstance(g, EnvelopingAlgebra) else EnvelopingAlgebra(g)
    return U.coproduct(u)


def pbw_antipode(u: PBWElement, g: LieAlgebra | EnvelopingAlgebra) -> PBWElement:
    U = g if isinstance(g, EnvelopingAlgebra) else EnvelopingAlgebra(g)
    return U.antipode(u)


# ---------------------------------------------------------------------------
# mutual actions of U(g2) and U(g1)


class MutualActions:
    """``v ▷ u`` and ``v ◁ u`` read off ``i2(v) i1(u)`` in ``U(g1 ⋈ g2)`` (g1 before g2)."""

    def __init__(self, mp: MatchedPair):
        self.mp = mp
        self.a = double_crossed_sum(mp)
        self.Ua = EnvelopingAlgebra(self.a)
        self.U1 = EnvelopingAlgebra(mp.g1)
        self.U2 = EnvelopingAlgebra(mp.g2)
        self.n1 = mp.g1.dim
        self._cache: dict[tuple[Exps, Exps], tuple[LinComb, LinComb, LinComb]] = {}

    def psi_mono(self, v: Exps, u: Exps) -> LinComb:
        """``v u = Σ u' v'`` returned as ``{(u', v'): c}``."""
        return self._split(v, u)[0]

    def _split(self, v: Exps, u: Exps) -> tuple[LinComb, LinComb, LinComb]:
        key = (v, u)
        hit = self._cache.get(key)
        if hit is None:
            prod = self.Ua.mul_mono((0,) * self.n1 + v, u + (0,) * len(v))
            psi, left, right = LinComb(), LinComb(), LinComb()
            z1, z2 = (0,) * self.n1, (0,) * len(v)
            for e, c in prod.items():
                a, b = e[:self.n1], e[self.n1:]
                psi.add_term((a, b), c)
                if b == z2:
                    left.add_term(a, c)
                if a == z1:
                    right.add_term(b, c)
            hit = (psi, left, right)
            self._cache[key] = hit
        return hit

    def left(self, v: Mapping[Exps, Fraction], u: Mapping[Exps, Fraction]) -> LinComb:
        out = LinComb()
        for ve, c in v.items():
            for ue, d in u.items():
                out.add_scaled(self._split(ve, ue)[1], c * d)
        return out

    def right(self, v: Mapping[Exps, Fraction], u: Mapping[Exps, Fraction]) -> LinComb:
        out = LinComb()
        for ve, c in v.items():
            for ue, d in u.items():
                out.add_scaled(self._split(ve, ue)[2], c * d)
        return out


def mutual_actions_via_straightening(mp: MatchedPair | MutualActions, v: PBWElement, u: PBWElement) -> tuple[PBWElement, PBWElement]:
    ma = mp if isinstance(mp, MutualActions) else MutualActions(mp)
    return ma.left(v, u), ma.right(v, u)


def check_mutual_pair(ma: MutualActions, max_degree: int = 2) -> Report:
    """Mutual pair identities on all PBW monomial pairs up to a degree."""
    rep = Report("mutual pair identities")
    U1, U2 = ma.U1, ma.U2
    mons1, mons2 = U1.monomials(max_degree), U2.monomials(max_degree)
    one1, one2 = U1.one(), U2.one()

    def tens_fmt(a, b):
        return lambda k: f"{a.fmt_mono(k[0])} ⊗ {b.fmt_mono(k[1])}"

    for v in mons2:
        V = LinComb.basis(v)
        lhs = ma.left(V, one1)
        rhs = one1.scale(U2.counit(V))
        rep.add("mutual-2:unit", lhs == rhs, (U2.fmt_mono(v),), U1.fmt(lhs), U1.fmt(rhs))
        for u in mons1:
            W = LinComb.basis(u)
            dv, du = U2.coproduct_mono(v), U1.coproduct_mono(u)
            lhs, rhs = LinComb(), LinComb()
            for (v1, v2), c in dv.items():
                for (u1, u2), d in du.items():
                    r = ma.right(LinComb.basis(v1), LinComb.basis(u1))
                    l = ma.left(LinComb.basis(v2), LinComb.basis(u2))
                    for a, x in r.items():
                        for b, y in l.items():
                            lhs.add_term((a, b), c * d * x * y)
                    r = ma.right(LinComb.basis(v2), LinComb.basis(u2))
                    l = ma.left(LinComb.basis(v1), LinComb.basis(u1))
                    for a, x in r.items():
                        for b, y in l.items():
                            rhs.add_term((a, b), c * d * x * y)
            f = tens_fmt(U2, U1)
            rep.add("mutual-3", lhs == rhs, (U2.fmt_mono(v), U1.fmt_mono(u)),
                    format_terms(lhs, f), format_terms(rhs, f))
    for u in mons1:
        U = LinComb.basis(u)
        lhs = ma.right(one2, U)
        rhs = one2.scale(U1.counit(U))
        rep.add("mutual-1:unit", lhs == rhs, (U1.fmt_mono(u),), U2.fmt(lhs), U2.fmt(rhs))
    # v ▷ (u1 u2) = (v(1) ▷ u1(1)) ((v(2) ◁ u1(2)) ▷ u2)
    small1 = U1.monomials(1)
    for v in mons2:
        for u1 in mons1:
            for u2 in small1:
                V = LinComb.basis(v)
                lhs = ma.left(V, U1.mul_mono(u1, u2))
                rhs = LinComb()
                for (v1, v2), c in U2.coproduct_mono(v).items():
                    for (a1, a2), d in U1.coproduct_mono(u1).items():
                        p = ma.left(LinComb.basis(v1), LinComb.basis(a1))
                        q = ma.left(ma.right(LinComb.basis(v2), LinComb.basis(a2)), LinComb.basis(u2))
                        rhs.add_scaled(U1.mul(p, q), c * d)
                rep.add("mutual-1", lhs == rhs, (U2.fmt_mono(v), U1.fmt_mono(u1), U1.fmt_mono(u2)), U1.fmt(lhs), U1.fmt(rhs))
    # (v1 v2) ◁ u = (v1 ◁ (v2(1) ▷ u(1))) (v2(2) ◁ u(2))
    small2 = U2.monomials(1)
    for v1 in small2:
        for v2 in mons2:
            for u in mons1:
                lhs = ma.right(U2.mul_mono(v1, v2), LinComb.basis(u))
                rhs = LinComb()
                for (b1, b2), c in U2.coproduct_mono(v2).items():
                    for (a1, a2), d in U1.coproduct_mono(u).items():
                        p = ma.right(LinComb.basis(v1), ma.left(LinComb.basis(b1), LinComb.basis(a1)))
                        q = ma.right(LinComb.basis(b2), LinComb.basis(a2))
                        rhs.add_scaled(U2.mul(p, q), c * d)
                rep.add("mutual-2", lhs == rhs, (U2.fmt_mono(v1), U2.fmt_mono(v2), U1.fmt_mono(u)), U2.fmt(lhs), U2.fmt(rhs))
    return rep


# ---------------------------------------------------------------------------
# polynomial Hopf algebras F


class PolyHopf:
    """Commutative polynomial Hopf algebra on named generators.

    Each generator has ``Δ(x) = x ⊗ 1 + 1 ⊗ x + (terms in the other generators)``;
    the antipode is solved from ``m(S ⊗ Id)Δ = ηε`` recursively.
    """

    def __init__(self, generators: Sequence[str], coproducts: Mapping[str, Mapping[tuple[Exps, Exps], object]] | None = None,
                 name: str = "F"):
        self.name = name
        self.names: tuple[str, ...] = tuple(generators)
        if len(set(self.names)) != len(self.names):
            raise ValueError("repeated generator names")
        self.n = len(self.names)
        self.index = {g: i for i, g in enumerate(self.names)}
        self.zero_exps: Exps = (0,) * self.n
        self._gen_coproduct: list[LinComb] = []
        for i, g in enumerate(self.names):
            if coproducts and g in coproducts:
                cp = LinComb((k, Fraction(v)) for k, v in coproducts[g].items())
            else:
                u = _unit(self.n, i)
                cp = LinComb({(u, self.zero_exps): 1, (self.zero_exps, u): 1})
            self._gen_coproduct.append(cp)
        self._coproduct: dict[Exps, LinComb] = {}
        self._antipode: dict[Exps, LinComb] = {}
        self._antipode_busy: set[int] = set()

    def _idx(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r} of {self.name}") from None

    def one(self) -> LinComb:
        return LinComb.basis(self.zero_exps)

    def gen(self, name: str | int) -> LinComb:
        i = name if isinstance(name, int) else self._idx(name)
        return LinComb.basis(_unit(self.n, i))

    def mul(self, a: Mapping[Exps, Fraction], b: Mapping[Exps, Fraction]) -> LinComb:
        out = LinComb()
        for e, c in a.items():
            for f, d in b.items():
                out.add_term(_add(e, f), c * d)
        return out

    def power(self, a: Mapping[Exps, Fraction], k: int) -> LinComb:
        out = self.one()
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def counit(self, a: Mapping[Exps, Fraction]) -> Fraction:
        return Fraction(a.get(self.zero_exps, 0))

    def generator_coproduct(self, i: int) -> LinComb:
        return self._gen_coproduct[i]

    def _tmul(self, a: LinComb, b: LinComb) -> LinComb:
        out = LinComb()
        for (x1, x2), c in a.items():
            for (y1, y2), d in b.items():
                out.add_term((_add(x1, y1), _add(x2, y2)), c * d)
        return out

    def coproduct_mono(self, e: Exps) -> LinComb:
        hit = self._coproduct.get(e)
        if hit is None:
            if not any(e):
                hit = LinComb.basis((self.zero_exps, self.zero_exps))
            else:
                i = max(k for k in range(self.n) if e[k])
                hit = self._tmul(self.coproduct_mono(_sub(e, _unit(self.n, i))), self._gen_coproduct[i])
            self._coproduct[e] = hit
        return hit

    def coproduct(self, a: Mapping[Exps, Fraction]) -> LinComb:
        out = LinComb()
        for e, c in a.items():
            out.add_scaled(self.coproduct_mono(e), c)
        return out

    def _gen_antipode(self, i: int) -> LinComb:
        key = _unit(self.n, i)
        hit = self._antipode.get(key)
        if hit is not None:
            return hit
        if i in self._antipode_busy:
            raise ValueError(f"coproduct of {self.names[i]} is not triangular; antipode undetermined")
        self._antipode_busy.add(i)
        out = LinComb()
        for (a, b), c in self._gen_coproduct[i].items():
            if a == key and b == self.zero_exps:
                continue
            out.add_scaled(self.mul(self.antipode_mono(a), LinComb.basis(b)), -c)
        self._antipode_busy.discard(i)
        self._antipode[key] = out
        return out

    def antipode_mono(self, e: Exps) -> LinComb:
        hit = self._antipode.get(e)
        if hit is None:
            out = self.one()
            for i, k in enumerate(e):
                if k:
                    out = self.mul(out, self.power(self._gen_antipode(i), k))
            hit = out
            self._antipode[e] = hit
        return hit

    def antipode(self, a: Mapping[Exps, Fraction]) -> LinComb:
        out = LinComb()
        for e, c in a.items():
            out.add_scaled(self.antipode_mono(e), c)
        return out

    def monomials(self, max_degree: int) -> list[Exps]:
        return _exps_upto(self.n, max_degree)

    def fmt_mono(self, e: Exps) -> str:
        return format_monomial(self.names, e)

    def fmt(self, a: Mapping[Exps, Fraction]) -> str:
        return format_terms(a, self.fmt_mono, sort_key=_deg_desc)


# ---------------------------------------------------------------------------
# Lie-Hopf data: U(g1)-action on F and F-coaction on U(g1)


@dataclass(frozen=True)
class ModularPair:
    delta: dict[str, Fraction]
    sigma: LinComb

    def is_trivial_sigma(self, F: PolyHopf) -> bool:
        return self.sigma == F.one()


class HopfStructure:
    """A Lie algebra g acting on F by derivations plus an F-coaction on g.

    ``action[(X, x)]`` is ``X ▷ x`` for a Lie generator X and F generator x;
    ``coaction[X]`` is ``▽(X) ∈ g ⊗ F`` as ``{(Y, f_exps): c}``.
    """

    def __init__(self, g: LieAlgebra, F: PolyHopf,
                 action: Mapping[tuple[str, str], Mapping[Exps, object]],
                 coaction: Mapping[str, Mapping[tuple[str, Exps], object]] | None = None):
        self.g = g
        self.U = EnvelopingAlgebra(g)
        self.F = F
        n = g.dim
        self._gen_action: dict[tuple[int, int], LinComb] = {}
        for (x, f), val in action.items():
            self._gen_action[(g._idx(x), F._idx(f))] = LinComb((k, Fraction(v)) for k, v in val.items())
        self._gen_coaction: list[LinComb] = []
        for i, x in enumerate(g.basis):
            if coaction and x in coaction:
                img = LinComb(((_unit(n, g._idx(y)), f), Fraction(v)) for (y, f), v in coaction[x].items())
            else:
                img = LinComb.basis((_unit(n, i), F.zero_exps))
            self._gen_coaction.append(img)
        self._act_gen_cache: dict[tuple[int, Exps], LinComb] = {}
        self._act_cache: dict[tuple[Exps, Exps], LinComb] = {}
        self._coact_cache: dict[Exps, LinComb] = {}

    # tables ----------------------------------------------------------------
    def action_table(self) -> dict[tuple[str, str], LinComb]:
        return {(self.g.basis[i], self.F.names[k]): v for (i, k), v in sorted(self._gen_action.items()) if v}

    def coaction_table(self) -> dict[str, LinComb]:
        return {self.g.basis[i]: v for i, v in enumerate(self._gen_coaction)}

    # action U ⊗ F -> F ---------------------------------------------------------
    def act_gen(self, i: int, f: Exps) -> LinComb:
        """``X_i ▷ x^f`` by the Leibniz rule."""
        key = (i, f)
        hit = self._act_gen_cache.get(key)
        if hit is None:
            hit = LinComb()
            for k, e in enumerate(f):
                if not e:
                    continue
                base = LinComb.basis(_sub(f, _unit(self.F.n, k)))
                img = self._gen_action.get((i, k))
                if img:
                    hit.add_scaled(self.F.mul(base, img), e)
            self._act_gen_cache[key] = hit
        return hit

    def act_mono(self, u: Exps, f: Exps) -> LinComb:
        """``x^u ▷ x^f``, the rightmost letter acting first."""
        key = (u, f)
        hit = self._act_cache.get(key)
        if hit is None:
            cur = LinComb.basis(f)
            letters = [i for i in range(self.U.n) for _ in range(u[i])]
            for i in reversed(letters):
                nxt = LinComb()
                for e, c in cur.items():
                    nxt.add_scaled(self.act_gen(i, e), c)
                cur = nxt
            hit = cur
            self._act_cache[key] = hit
        return hit

    def act(self, u: Mapping[Exps, Fraction], f: Mapping[Exps, Fraction]) -> LinComb:
        out = LinComb()
        for ue, c in u.items():
            for fe, d in f.items():
                out.add_scaled(self.act_mono(ue, fe), c * d)
        return out

    # coaction U -> U ⊗ F ------------------------------------------------------
    def coact_mono(self, u: Exps) -> LinComb:
        """``▽(x_i v) = x_i⁽⁰⁾ v⁽⁰⁾ ⊗ x_i⁽¹⁾ v⁽¹⁾ + v⁽⁰⁾ ⊗ x_i ▷ v⁽¹⁾`` for the first letter ``x_i``."""
        hit = self._coact_cache.get(u)
        if hit is not None:
            return hit
        if not any(u):
            hit = LinComb.basis((u, self.F.zero_exps))
        else:
            i = min(k for k in range(self.U.n) if u[k])
            v = _sub(u, _unit(self.U.n, i))
            cv = self.coact_mono(v)
            hit = LinComb()
            for (xe, xf), c in self._gen_coaction[i].items():
                for (ve, vf), d in cv.items():
                    for w, e in self.U.mul_mono(xe, ve).items():
                        hit.add_term((w, _add(xf, vf)), c * d * e)
            for (ve, vf), d in cv.items():
                for w, e in self.act_gen(i, vf).items():
                    hit.add_term((ve, w), d * e)
        self._coact_cache[u] = hit
        return hit

    def coact(self, u: Mapping[Exps, Fraction]) -> LinComb:
        out = LinComb()
        for e, c in u.items():
            out.add_scaled(self.coact_mono(e), c)
        return out

    def fmt_uf(self, t: Mapping[tuple[Exps, Exps], Fraction]) -> str:
        return format_terms(t, lambda k: f"{self.U.fmt_mono(k[0])} ⊗ {self.F.fmt_mono(k[1])}",
                            sort_key=lambda k: (_deg_desc(k[0]), _deg_desc(k[1])))

    # modular pair -------------------------------------------------------------
    def modular_pair(self) -> ModularPair:
        return compute_modular_pair(self)


def extend_coaction_mp4(hs: HopfStructure, u: PBWElement) -> LinComb:
    return hs.coact(u)


def polyhopf_build(generators: Sequence[str], coproducts: Mapping[str, Mapping[tuple[Exps, Exps], object]] | None,
                   g: LieAlgebra, u_action: Mapping[tuple[str, str], Mapping[Exps, object]],
                   coaction: Mapping[str, Mapping[tuple[str, Exps], object]] | None = None,
                   name: str = "F") -> tuple[HopfStructure, Report]:
    """Assemble ``F`` with its derivation action and run the Lie-Hopf checks on generators."""
    F = PolyHopf(generators, coproducts, name=name)
    hs = HopfStructure(g, F, u_action, coaction)
    return hs, check_lie_hopf(hs)


def compute_modular_pair(hs: HopfStructure) -> ModularPair:
    """δ = trace of ad on g, σ = determinant of the coaction matrix ``▽(X_j) = Σ_i X_i ⊗ f_ij``."""
    g, F = hs.g, hs.F
    n = g.dim
    delta = {g.basis[i]: v for i, v in g.ad_trace().items()}
    mat = [[LinComb() for _ in range(n)] for _ in range(n)]
    for j in range(n):
        for (ue, fe), c in hs._gen_coaction[j].items():
            i = ue.index(1)
            mat[i][j].add_term(fe, c)
    sigma = LinComb()
    for perm in permutations(range(n)):
        sign = 1
        for a in range(n):
            for b in range(a + 1, n):
                if perm[a] > perm[b]:
                    sign = -sign
        term = F.one()
        for r in range(n):
            term = F.mul(term, mat[r][perm[r]])
            if not term:
                break
        sigma.add_scaled(term, sign)
    return ModularPair(delta, sigma)


def check_lie_hopf(hs: HopfStructure) -> Report:
    """Lie-Hopf axioms on generators.

    * ``lie-hopf:module``: ``X▷(Y▷x) − Y▷(X▷x) = [X,Y]▷x``;
    * ``lie-hopf:counit``: ``ε(X▷x) = 0``;
    * ``lie-hopf:coproduct``: ``Δ(X▷x) = X⁽⁰⁾▷x(1) ⊗ X⁽¹⁾x(2) + x(1) ⊗ X▷x(2)``;
    * ``lie-hopf:coaction``: ▽ coassociative and counital on g;
    * ``lie-hopf:structure``: ▽ is a Lie map into ``g ⊗ F`` with the bracket
      ``[X⊗f, Y⊗g] = [X,Y]⊗fg + Y⊗ε(f)X▷g − X⊗ε(g)Y▷f``.
    """
    g, F = hs.g, hs.F
    rep = Report("Lie-Hopf axioms")
    n = g.dim
    ff = lambda t: format_terms(t, lambda k: f"{F.fmt_mono(k[0])} ⊗ {F.fmt_mono(k[1])}")
    gfmt = lambda t: format_terms(t, lambda k: f"{g.basis[k[0]]} ⊗ {F.fmt_mono(k[1])}")

    def gen_coact(i: int) -> LinComb:
        return LinComb(((ue.index(1), fe), c) for (ue, fe), c in hs._gen_coaction[i].items())

    for i in range(n):
        img = gen_coact(i)
        if any(sum(ue) != 1 for ue, _ in hs._gen_coaction[i]):
            rep.add("lie-hopf:coaction", False, (g.basis[i],), "coaction leaves g", "")
            return rep
    for k in range(F.n):
        x = _unit(F.n, k)
        for i in range(n):
            for j in range(i + 1, n):
                lhs = hs.act(hs.U.gen(i), hs.act_gen(j, x)) - hs.act(hs.U.gen(j), hs.act_gen(i, x))
                rhs = hs.act(hs.U.embed(g.bracket_basis(i, j)), LinComb.basis(x))
                rep.add("lie-hopf:module", lhs == rhs, (g.basis[i], g.basis[j], F.names[k]), F.fmt(lhs), F.fmt(rhs))
        for i in range(n):
            val = F.counit(hs.act_gen(i, x))
            rep.add("lie-hopf:counit", val == 0, (g.basis[i], F.names[k]), format_rational(val), "0")
        for i in range(n):
            lhs = F.coproduct(hs.act_gen(i, x))
            rhs = LinComb()
            for (a, b), c in F.coproduct_mono(x).items():
                for (j, fe), d in gen_coact(i).items():
                    for a2, e in hs.act_gen(j, a).items():
                        rhs.add_term((a2, _add(fe, b)), c * d * e)
                for b2, e in hs.act_gen(i, b).items():
                    rhs.add_term((a, b2), c * e)
            rep.add("lie-hopf:coproduct", lhs == rhs, (g.basis[i], F.names[k]), ff(lhs), ff(rhs))
    for i in range(n):
        img = gen_coact(i)
        lhs = LinComb()
        for (j, fe), c in img.items():
            for (k2, fe2), d in gen_coact(j).items():
                lhs.add_term((k2, fe2, fe), c * d)
        rhs = LinComb()
        for (j, fe), c in img.items():
            for (a, b), d in F.coproduct_mono(fe).items():
                rhs.add_term((j, a, b), c * d)
        fm = lambda t: format_terms(t, lambda k: f"{g.basis[k[0]]} ⊗ {F.fmt_mono(k[1])} ⊗ {F.fmt_mono(k[2])}")
        rep.add("lie-hopf:coaction", lhs == rhs, (g.basis[i],), fm(lhs), fm(rhs))
        cnt = LinComb()
        for (j, fe), c in img.items():
            if not any(fe):
                cnt.add_term(j, c)
        rep.add("lie-hopf:coaction-counit", cnt == LinComb.basis(i), (g.basis[i],), g.fmt(cnt), g.basis[i])

    def gf_bracket(a: LinComb, b: LinComb) -> LinComb:
        out = LinComb()
        for (x, f), c in a.items():
            for (y, h), d in b.items():
                for z, e in g.bracket_basis(x, y).items():
                    out.add_term((z, _add(f, h)), c * d * e)
                ef = F.counit(LinComb.basis(f))
                if ef:
                    for w, e in hs.act_gen(x, h).items():
                        out.add_term((y, w), c * d * ef * e)
                eh = F.counit(LinComb.basis(h))
                if eh:
                    for w, e in hs.act_gen(y, f).items():
                        out.add_term((x, w), -c * d * eh * e)
        return out

    for i in range(n):
        for j in range(i + 1, n):
            lhs = LinComb()
            for z, c in g.bracket_basis(i, j).items():
                lhs.add_scaled(gen_coact(z), c)
            rhs = gf_bracket(gen_coact(i), gen_coact(j))
            rep.add("lie-hopf:structure", lhs == rhs, (g.basis[i], g.basis[j]), gfmt(lhs), gfmt(rhs))
    return rep


def lie_hopf_from_matched_pair(mp: MatchedPair, f_names: Sequence[str] | None = None, degree_bound: int = 6,
                               name: str = "F") -> HopfStructure:
    """``F = R(g2)`` in dual PBW coordinates δ_k (``⟨δ^e, ζ^{e'}⟩ = e! δ_{e,e'}``).

    ``Δ(δ_k)(v ⊗ w) = δ_k(vw)``, ``(X ▷ f)(v) = f(v ◁ X)`` and
    ``▽(X) = Σ_e ζ^e ▷ X ⊗ δ^e / e!``. Every series is computed up to
    ``degree_bound`` and must vanish one degree beyond it, otherwise F is not
    polynomial in these coordinates within the bound and ``ValueError`` is raised.
    """
    g1, g2 = mp.g1, mp.g2
    r = g2.dim
    names = tuple(f_names) if f_names else tuple(f"d{k + 1}" for k in range(r))
    if len(names) != r:
        raise ValueError("one F generator per basis element of g2 is needed")
    ma = MutualActions(mp)
    U2 = ma.U2
    top = degree_bound + 1
    all2 = U2.monomials(top)

    def coeff_of_unit(v: LinComb, k: int) -> Fraction:
        return Fraction(v.get(_unit(r, k), 0))

    coproducts: dict[str, dict[tuple[Exps, Exps], Fraction]] = {}
    for k in range(r):
        cp: dict[tuple[Exps, Exps], Fraction] = {}
        for a in all2:
            for b in all2:
                d = sum(a) + sum(b)
                if d > top:
                    continue
                c = coeff_of_unit(U2.mul_mono(a, b), k)
                if c:
                    if d == top:
                        raise ValueError(f"Δ({names[k]}) does not terminate below degree {top}")
                    cp[(a, b)] = c / (_exp_factorial(a) * _exp_factorial(b))
        coproducts[names[k]] = cp
    F = PolyHopf(names, coproducts, name=name)
    action: dict[tuple[str, str], dict[Exps, Fraction]] = {}
    for i, x in enumerate(g1.basis):
        X = LinComb.basis(_unit(g1.dim, i))
        for k in range(r):
            img: dict[Exps, Fraction] = {}
            for b in all2:
                c = coeff_of_unit(ma.right(LinComb.basis(b), X), k)
                if c:
                    if sum(b) == top:
                        raise ValueError(f"{x} ▷ {names[k]} does not terminate below degree {top}")
                    img[b] = c / _exp_factorial(b)
            if img:
                action[(x, names[k])] = img
    coaction: dict[str, dict[tuple[str, Exps], Fraction]] = {}
    for i, x in enumerate(g1.basis):
        X = LinComb.basis(_unit(g1.dim, i))
        img2: dict[tuple[str, Exps], Fraction] = {}
        for e in all2:
            val = ma.left(LinComb.basis(e), X)
            for ue, c in val.items():
                if sum(ue) != 1:
                    raise ValueError("g2 ▷ g1 must preserve g1")
                if sum(e) == top:
                    raise ValueError(f"▽({x}) does not terminate below degree {top}")
                key = (g1.basis[ue.index(1)], e)
                img2[key] = img2.get(key, 0) + c / _exp_factorial(e)
        coaction[x] = {k: v for k, v in img2.items() if v}
    return HopfStructure(g1, F, action, coaction)


# ---------------------------------------------------------------------------
# H = F ▸◂ U


class BicrossedHopf:
    """Bicrossed product with

    * product ``(f▸◂u)(g▸◂v) = f (u(1)▷g) ▸◂ u(2) v``,
    * coproduct ``Δ(f▸◂u) = f(1)▸◂u(1)⁽⁰⁾ ⊗ f(2)u(1)⁽¹⁾▸◂u(2)``,
    * antipode ``S(f▸◂u) = (1▸◂S(u⁽⁰⁾))(S(f u⁽¹⁾)▸◂1)``.
    """

    def __init__(self, hs: HopfStructure):
        self.hs = hs
        self.U = hs.U
        self.F = hs.F
        self.unit_key = (self.F.zero_exps, self.U.zero_exps)
        self._mul_cache: dict[tuple[tuple[Exps, Exps], tuple[Exps, Exps]], LinComb] = {}
        self._cop_cache: dict[tuple[Exps, Exps], LinComb] = {}
        self._s_cache: dict[tuple[Exps, Exps], LinComb] = {}
        self._sinv_cache: dict[tuple[Exps, Exps], LinComb] = {}

    # constructors ------------------------------------------------------------
    def one(self) -> LinComb:
        return LinComb.basis(self.unit_key)

    def from_f(self, f: Mapping[Exps, Fraction]) -> LinComb:
        return LinComb(((e, self.U.zero_exps), c) for e, c in f.items())

    def from_u(self, u: Mapping[Exps, Fraction]) -> LinComb:
        return LinComb(((self.F.zero_exps, e), c) for e, c in u.items())

    def gen(self, name: str) -> LinComb:
        if name in self.F.index:
            return self.from_f(self.F.gen(name))
        if name in self.U.g.index:
            return self.from_u(self.U.gen(name))
        raise KeyError(f"unknown generator {name!r}")

    @property
    def generator_names(self) -> tuple[str, ...]:
        return self.F.names + self.U.names

    def generators(self) -> list[LinComb]:
        return [self.gen(n) for n in self.generator_names]

    # structure maps ------------------------------------------------------------
    def mul_basis(self, a: tuple[Exps, Exps], b: tuple[Exps, Exps]) -> LinComb:
        key = (a, b)
        hit = self._mul_cache.get(key)
        if hit is None:
            (f, u), (g, v) = a, b
            hit = LinComb()
            for (u1, u2), c in self.U.coproduct_mono(u).items():
                acted = self.hs.act_mono(u1, g)
                if not acted:
                    continue
                prod_u = self.U.mul_mono(u2, v)
                for ge, d in acted.items():
                    fg = _add(f, ge)
                    for w, e in prod_u.items():
                        hit.add_term((fg, w), c * d * e)
            self._mul_cache[key] = hit
        return hit

    def mul(self, a: Mapping, b: Mapping) -> LinComb:
        out = LinComb()
        for ka, c in a.items():
            for kb, d in b.items():
                out.add_scaled(self.mul_basis(ka, kb), c * d)
        return out

    def mul_many(self, *elems: Mapping) -> LinComb:
        out = self.one()
        for e in elems:
            out = self.mul(out, e)
        return out

    def counit(self, a: Mapping) -> Fraction:
        return Fraction(a.get(self.unit_key, 0))

    def coproduct_basis(self, k: tuple[Exps, Exps]) -> LinComb:
        hit = self._cop_cache.get(k)
        if hit is None:
            f, u = k
            hit = LinComb()
            df = self.F.coproduct_mono(f)
            for (u1, u2), c in self.U.coproduct_mono(u).items():
                for (u10, u11), d in self.hs.coact_mono(u1).items():
                    for (f1, f2), e in df.items():
                        hit.add_term(((f1, u10), (_add(f2, u11), u2)), c * d * e)
            self._cop_cache[k] = hit
        return hit

    def coproduct(self, a: Mapping) -> LinComb:
        out = LinComb()
        for k, c in a.items():
            out.add_scaled(self.coproduct_basis(k), c)
        return out

    def antipode_basis(self, k: tuple[Exps, Exps]) -> LinComb:
        hit = self._s_cache.get(k)
        if hit is None:
            f, u = k
            hit = LinComb()
            for (u0, u1), c in self.hs.coact_mono(u).items():
                left = self.from_u(self.U.antipode_mono(u0))
                right = self.from_f(self.F.antipode_mono(_add(f, u1)))
                hit.add_scaled(self.mul(left, right), c)
            self._s_cache[k] = hit
        return hit

    def antipode(self, a: Mapping) -> LinComb:
        out = LinComb()
        for k, c in a.items():
            out.add_scaled(self.antipode_basis(k), c)
        return out

    def antipode_inverse_basis(self, k: tuple[Exps, Exps]) -> LinComb:
        """``S⁻¹`` from ``h(2) S⁻¹(h(1)) = ε(h)1``; the term ``h ⊗ 1`` isolates ``S⁻¹(h)``."""
        hit = self._sinv_cache.get(k)
        if hit is None:
            hit = LinComb()
            if k == self.unit_key:
                hit.add_term(self.unit_key, 1)
            else:
                for (k1, k2), c in self.coproduct_basis(k).items():
                    if k1 == k and k2 == self.unit_key:
                        if c != 1:
                            raise ValueError(f"coproduct of {self.fmt_basis(k)} has h ⊗ 1 with coefficient {c}")
                        continue
                    hit.add_scaled(self.mul(LinComb.basis(k2), self.antipode_inverse_basis(k1)), -c)
            self._sinv_cache[k] = hit
        return hit

    def antipode_inverse(self, a: Mapping) -> LinComb:
        out = LinComb()
        for k, c in a.items():
            out.add_scaled(self.antipode_inverse_basis(k), c)
        return out

    def act_on_f(self, a: Mapping, f: Mapping) -> LinComb:
        """``(g ▸◂ u) ▷ f = g (u ▷ f)``."""
        out = LinComb()
        for (g, u), c in a.items():
            for fe, d in f.items():
                for w, e in self.hs.act_mono(u, fe).items():
                    out.add_term(_add(g, w), c * d * e)
        return out

    def project_f(self, a: Mapping) -> LinComb:
        """``f ▸◂ u ↦ f ε(u)``."""
        out = LinComb()
        for (f, u), c in a.items():
            if not any(u):
                out.add_term(f, c)
        return out

    def project_u(self, a: Mapping) -> LinComb:
        """``f ▸◂ u ↦ ε(f) u``."""
        out = LinComb()
        for (f, u), c in a.items():
            if not any(f):
                out.add_term(u, c)
        return out

    # formatting ----------------------------------------------------------------
    def fmt_basis(self, k: tuple[Exps, Exps]) -> str:
        f, u = k
        fs = self.F.fmt_mono(f)
        us = self.U.fmt_mono(u)
        if fs == "1":
            return us
        if us == "1":
            return fs
        return f"{fs}*{us}"

    @staticmethod
    def sort_key(k: tuple[Exps, Exps]):
        f, u = k
        return (-(sum(f) + sum(u)), tuple(-x for x in f), tuple(-x for x in u))

    def fmt(self, a: Mapping) -> str:
        return format_terms(a, self.fmt_basis, sort_key=self.sort_key)

    def fmt_tensor(self, t: Mapping) -> str:
        return format_terms(t, lambda key: " ⊗ ".join(self.fmt_basis(k) for k in key),
                            sort_key=lambda key: tuple(self.sort_key(k) for k in key))

    def random_element(self, rng, max_degree: int = 2, terms: int = 3, coeff_range: int = 3) -> LinComb:
        fm = self.F.monomials(max_degree)
        um = self.U.monomials(max_degree)
        keys = [(f, u) for f in fm for u in um if sum(f) + sum(u) <= max_degree]
        out = LinComb()
        for _ in range(terms):
            out.add_term(rng.choice(keys), Fraction(rng.randint(-coeff_range, coeff_range)))
        return out


def bicrossed_build(hs: HopfStructure, check: bool = True) -> BicrossedHopf:
    if check:
        rep = check_lie_hopf(hs)
        bad = rep.first_failure()
        if bad is not None:
            raise ValueError(f"matched pair of Hopf algebras fails: {bad.line()}")
    return BicrossedHopf(hs)


def check_hopf_axioms(H: BicrossedHopf, elements: Sequence[LinComb], pairs: Sequence[tuple[LinComb, LinComb]] = ()) -> Report:
    """Coassociativity, counit, antipode on the given elements and ``Δ(ab) = Δ(a)Δ(b)`` on the pairs."""
    rep = Report("Hopf algebra axioms")
    for x in elements:
        w = (H.fmt(x),)
        d = H.coproduct(x)
        left = LinComb()
        right = LinComb()
        for (a, b), c in d.items():
            for (a1, a2), e in H.coproduct_basis(a).items():
                left.add_term((a1, a2, b), c * e)
            for (b1, b2), e in H.coproduct_basis(b).items():
                right.add_term((a, b1, b2), c * e)
        rep.add("coassociativity", left == right, w, H.fmt_tensor(left), H.fmt_tensor(right))
        cl, cr = LinComb(), LinComb()
        for (a, b), c in d.items():
            cl.add_scaled(LinComb.basis(b), c * H.counit(LinComb.basis(a)))
            cr.add_scaled(LinComb.basis(a), c * H.counit(LinComb.basis(b)))
        rep.add("counit", cl == x and cr == x, w, H.fmt(cl), H.fmt(cr))
        sl, sr = LinComb(), LinComb()
        for (a, b), c in d.items():
            sl.add_scaled(H.mul(H.antipode_basis(a), LinComb.basis(b)), c)
            sr.add_scaled(H.mul(LinComb.basis(a), H.antipode_basis(b)), c)
        target = H.one().scale(H.counit(x))
        rep.add("antipode", sl == target and sr == target, w, H.fmt(sl), H.fmt(sr))
    for x, y in pairs:
        lhs = H.coproduct(H.mul(x, y))
        dx, dy = H.coproduct(x), H.coproduct(y)
        rhs = LinComb()
        for (a1, a2), c in dx.items():
            for (b1, b2), d in dy.items():
                p1 = H.mul_basis(a1, b1)
                p2 = H.mul_basis(a2, b2)
                for k1, e1 in p1.items():
                    for k2, e2 in p2.items():
                        rhs.add_term((k1, k2), c * d * e1 * e2)
        rep.add("bialgebra", lhs == rhs, (H.fmt(x), H.fmt(y)), H.fmt_tensor(lhs), H.fmt_tensor(rhs))
    return rep


def check_coaction_u(hs: HopfStructure, max_degree: int = 3) -> Report:
    """``(▽ ⊗ Id)▽ = (Id ⊗ Δ)▽`` and counitality on U-monomials."""
    rep = Report("F-coaction on U")
    F = hs.F
    for u in hs.U.monomials(max_degree):
        c1 = hs.coact_mono(u)
        left, right = LinComb(), LinComb()
        for (a, f), c in c1.items():
            for (a2, f2), d in hs.coact_mono(a).items():
                left.add_term((a2, f2, f), c * d)
            for (g1, g2), d in F.coproduct_mono(f).items():
                right.add_term((a, g1, g2), c * d)
        fm = lambda t: format_terms(t, lambda k: f"{hs.U.fmt_mono(k[0])} ⊗ {F.fmt_mono(k[1])} ⊗ {F.fmt_mono(k[2])}")
        rep.add("coaction-u", left == right, (hs.U.fmt_mono(u),), fm(left), fm(right))
        cnt = LinComb()
        for (a, f), c in c1.items():
            cnt.add_term(a, c * F.counit(LinComb.basis(f)))
        rep.add("coaction-u-counit", cnt == LinComb.basis(u), (hs.U.fmt_mono(u),), hs.U.fmt(cnt), hs.U.fmt_mono(u))
    return rep
