"""Finite-dimensional Lie algebras, matched pairs and Lie-level module/comodule checks.

Vectors in a Lie algebra are ``LinComb`` objects keyed by basis index. Module
elements are ``LinComb`` objects keyed by module basis index, and elements of
``g ⊗ M`` are keyed by ``(g_index, m_index)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .exactnum import LinComb, format_rational
from .reports import Report


def format_terms(lc: Mapping, render_key, sort_key=None) -> str:
    """Canonical text ``c1*k1 + c2*k2 - ...``; a unit coefficient is omitted."""
    if not lc:
        return "0"
    items = sorted(lc.items(), key=(lambda kc: sort_key(kc[0])) if sort_key else (lambda kc: kc[0]))
    parts: list[str] = []
    for key, c in items:
        body = render_key(key)
        mag = abs(c)
        if body == "1":
            term = format_rational(mag)
        elif mag == 1:
            term = body
        else:
            term = f"{format_rational(mag)}*{body}"
        if not parts:
            parts.append(term if c > 0 else f"-{term}")
        else:
            parts.append(f"+ {term}" if c > 0 else f"- {term}")
    return " ".join(parts)


class LieAlgebra:
    """Structure constants ``[X_i, X_j] = sum_k c[i][j][k] X_k`` over an ordered named basis."""

    def __init__(self, basis: Sequence[str], brackets: Mapping[tuple[str, str], Mapping[str, object]] | None = None,
                 name: str = "", complete: bool = True):
        self.name = name
        self.basis: tuple[str, ...] = tuple(basis)
        if len(set(self.basis)) != len(self.basis):
            raise ValueError(f"repeated basis names in {self.basis}")
        self.index = {n: i for i, n in enumerate(self.basis)}
        self._c: dict[tuple[int, int], LinComb] = {}
        for (a, b), val in (brackets or {}).items():
            i, j = self._idx(a), self._idx(b)
            self._c[(i, j)] = LinComb((self._idx(k), Fraction(v)) for k, v in val.items())
        if complete:
            for (i, j), val in list(self._c.items()):
                if (j, i) not in self._c:
                    self._c[(j, i)] = -val
        self._c = {k: v for k, v in self._c.items() if v}

    @classmethod
    def from_constants(cls, basis: Sequence[str], constants: Mapping[tuple[int, int, int], object], name: str = "") -> "LieAlgebra":
        """Build from raw ``c[i][j][k]`` with no antisymmetric completion."""
        g = cls(basis, name=name)
        for (i, j, k), v in constants.items():
            g._c.setdefault((i, j), LinComb()).add_term(k, Fraction(v))
        g._c = {k: v for k, v in g._c.items() if v}
        return g

    def _idx(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise KeyError(f"unknown basis element {name!r} of {self.name or 'Lie algebra'}") from None

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __repr__(self) -> str:
        return f"LieAlgebra({self.name or '?'}, basis={list(self.basis)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, LieAlgebra) and self.basis == other.basis and self._c == other._c

    def __hash__(self) -> int:
        return hash(self.basis)

    def constant(self, i: int, j: int, k: int) -> Fraction:
        return self._c.get((i, j), {}).get(k, Fraction(0))

    def structure_table(self) -> dict[tuple[str, str], dict[str, Fraction]]:
        return {(self.basis[i], self.basis[j]): {self.basis[k]: c for k, c in v.items()}
                for (i, j), v in sorted(self._c.items())}

    def bracket_basis(self, i: int, j: int) -> LinComb:
        return self._c.get((i, j), LinComb())

    def bracket(self, u: Mapping[int, Fraction], v: Mapping[int, Fraction]) -> LinComb:
        out = LinComb()
        for i, a in u.items():
            for j, b in v.items():
                val = self._c.get((i, j))
                if val:
                    out.add_scaled(val, a * b)
        return out

    def vec(self, spec: str | Mapping[str, object]) -> LinComb:
        if isinstance(spec, str):
            return LinComb.basis(self._idx(spec))
        return LinComb((self._idx(k), Fraction(v)) for k, v in spec.items())

    def fmt(self, v: Mapping[int, Fraction]) -> str:
        return format_terms(v, lambda i: self.basis[i])

    def ad_trace(self) -> dict[int, Fraction]:
        """``δ(X_i) = tr(ad X_i)``."""
        return {i: sum((self.constant(i, k, k) for k in range(self.dim)), Fraction(0)) for i in range(self.dim)}

    def is_subalgebra(self, names: Iterable[str]) -> bool:
        idx = {self._idx(n) for n in names}
        return all(set(self.bracket_basis(i, j)) <= idx for i in idx for j in idx)

    def subalgebra(self, names: Sequence[str], name: str = "") -> "LieAlgebra":
        if not self.is_subalgebra(names):
            raise ValueError(f"{list(names)} does not span a subalgebra")
        br = {}
        for a in names:
            for b in names:
                val = self.bracket_basis(self.index[a], self.index[b])
                if val:
                    br[(a, b)] = {self.basis[k]: c for k, c in val.items()}
        return LieAlgebra(names, br, name=name, complete=False)


@dataclass(frozen=True)
class TraceCharacter:
    """A character given by its values on basis elements."""

    values: dict[str, Fraction]

    @classmethod
    def of(cls, g: LieAlgebra) -> "TraceCharacter":
        return cls({g.basis[i]: v for i, v in g.ad_trace().items()})

    def __call__(self, name: str) -> Fraction:
        return self.values.get(name, Fraction(0))

    def on_derived(self, g: LieAlgebra) -> bool:
        """``δ([g, g]) = 0``."""
        for i in range(g.dim):
            for j in range(g.dim):
                val = sum((c * self(g.basis[k]) for k, c in g.bracket_basis(i, j).items()), Fraction(0))
                if val:
                    return False
        return True


def verify_jacobi(g: LieAlgebra) -> Report:
    rep = Report(f"Jacobi identity for {g.name or 'g'}")
    n = g.dim
    asym_ok = True
    for i in range(n):
        for j in range(i, n):
            lhs = g.bracket_basis(i, j)
            rhs = -g.bracket_basis(j, i)
            if lhs != rhs:
                asym_ok = False
                rep.add("antisymmetry", False, (g.basis[i], g.basis[j]),
                        f"[{g.basis[i]},{g.basis[j]}] = {g.fmt(lhs)}", f"-[{g.basis[j]},{g.basis[i]}] = {g.fmt(rhs)}")
    if asym_ok:
        rep.add("antisymmetry", True)
    else:
        # Jacobi is only meaningful on antisymmetric constants
        return rep
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                a, b, c = (LinComb.basis(t) for t in (i, j, k))
                total = g.bracket(g.bracket(a, b), c) + g.bracket(g.bracket(b, c), a) + g.bracket(g.bracket(c, a), b)
                rep.add("jacobi", not total, (g.basis[i], g.basis[j], g.basis[k]), g.fmt(total), "0")
    return rep


# ---------------------------------------------------------------------------
# matched pairs


class MatchedPair:
    """Mutual actions ``ζ ▷ X ∈ g1`` and ``ζ ◁ X ∈ g2`` for ζ in g2, X in g1."""

    def __init__(self, g1: LieAlgebra, g2: LieAlgebra,
                 act_left: Mapping[tuple[str, str], Mapping[str, object]],
                 act_right: Mapping[tuple[str, str], Mapping[str, object]]):
        self.g1 = g1
        self.g2 = g2
        if set(g1.basis) & set(g2.basis):
            raise ValueError("g1 and g2 must use disjoint basis names")
        self._left: dict[tuple[int, int], LinComb] = {}
        self._right: dict[tuple[int, int], LinComb] = {}
        for (z, x), val in act_left.items():
            if z not in g2.index or x not in g1.index or not set(val) <= set(g1.index):
                raise ValueError(f"left action entry ({z}, {x}) does not match the algebras")
            self._left[(g2.index[z], g1.index[x])] = g1.vec(val)
        for (z, x), val in act_right.items():
            if z not in g2.index or x not in g1.index or not set(val) <= set(g2.index):
                raise ValueError(f"right action entry ({z}, {x}) does not match the algebras")
            self._right[(g2.index[z], g1.index[x])] = g2.vec(val)

    @classmethod
    def from_splitting(cls, g: LieAlgebra, g1_names: Sequence[str], g2_names: Sequence[str]) -> "MatchedPair":
        """Read ``[ζ, X] = ζ▷X + ζ◁X`` off a vector space splitting ``g = g1 ⊕ g2``."""
        if sorted(g1_names) + sorted(g2_names) and set(g1_names) | set(g2_names) != set(g.basis):
            raise ValueError("the two summands must cover the basis")
        if set(g1_names) & set(g2_names):
            raise ValueError("summands overlap")
        g1 = g.subalgebra(g1_names, name=f"{g.name}_1")
        g2 = g.subalgebra(g2_names, name=f"{g.name}_2")
        left, right = {}, {}
        for z in g2_names:
            for x in g1_names:
                br = g.bracket_basis(g.index[z], g.index[x])
                left[(z, x)] = {g.basis[k]: c for k, c in br.items() if g.basis[k] in g1.index}
                right[(z, x)] = {g.basis[k]: c for k, c in br.items() if g.basis[k] in g2.index}
        return cls(g1, g2, left, right)

    def left(self, zeta: Mapping[int, Fraction], x: Mapping[int, Fraction]) -> LinComb:
        out = LinComb()
        for i, a in zeta.items():
            for j, b in x.items():
                val = self._left.get((i, j))
                if val:
                    out.add_scaled(val, a * b)
        return out

    def right(self, zeta: Mapping[int, Fraction], x: Mapping[int, Fraction]) -> LinComb:
        out = LinComb()
        for i, a in zeta.items():
            for j, b in x.items():
                val = self._right.get((i, j))
                if val:
                    out.add_scaled(val, a * b)
        return out

    def left_table(self) -> dict[tuple[str, str], dict[str, Fraction]]:
        return {(self.g2.basis[i], self.g1.basis[j]): {self.g1.basis[k]: c for k, c in v.items()}
                for (i, j), v in sorted(self._left.items()) if v}

    def right_table(self) -> dict[tuple[str, str], dict[str, Fraction]]:
        return {(self.g2.basis[i], self.g1.basis[j]): {self.g2.basis[k]: c for k, c in v.items()}
                for (i, j), v in sorted(self._right.items()) if v}


def verify_matched_pair(mp: MatchedPair) -> Report:
    g1, g2 = mp.g1, mp.g2
    rep = Report("matched pair axioms")
    B1 = [LinComb.basis(i) for i in range(g1.dim)]
    B2 = [LinComb.basis(i) for i in range(g2.dim)]
    n1, n2 = g1.basis, g2.basis
    L, R = mp.left, mp.right
    for a, b in product(range(g2.dim), repeat=2):
        for x in range(g1.dim):
            z, w, X = B2[a], B2[b], B1[x]
            lhs = L(g2.bracket(z, w), X)
            rhs = L(z, L(w, X)) - L(w, L(z, X))
            rep.add("mp-L-1", lhs == rhs, (n2[a], n2[b], n1[x]), g1.fmt(lhs), g1.fmt(rhs))
    for a in range(g2.dim):
        for x, y in product(range(g1.dim), repeat=2):
            z, X, Y = B2[a], B1[x], B1[y]
            lhs = R(z, g1.bracket(X, Y))
            rhs = R(R(z, X), Y) - R(R(z, Y), X)
            rep.add("mp-L-2", lhs == rhs, (n2[a], n1[x], n1[y]), g2.fmt(lhs), g2.fmt(rhs))
    for a in range(g2.dim):
        for x, y in product(range(g1.dim), repeat=2):
            z, X, Y = B2[a], B1[x], B1[y]
            lhs = L(z, g1.bracket(X, Y))
            rhs = (g1.bracket(L(z, X), Y) + g1.bracket(X, L(z, Y))
                   + L(R(z, X), Y) - L(R(z, Y), X))
            rep.add("mp-L-3", lhs == rhs, (n2[a], n1[x], n1[y]), g1.fmt(lhs), g1.fmt(rhs))
    for a, b in product(range(g2.dim), repeat=2):
        for x in range(g1.dim):
            z, w, X = B2[a], B2[b], B1[x]
            lhs = R(g2.bracket(z, w), X)
            rhs = (g2.bracket(R(z, X), w) + g2.bracket(z, R(w, X))
                   + R(z, L(w, X)) - R(w, L(z, X)))
            rep.add("mp-L-4", lhs == rhs, (n2[a], n2[b], n1[x]), g2.fmt(lhs), g2.fmt(rhs))
    return rep


def double_crossed_sum(mp: MatchedPair, name: str = "") -> LieAlgebra:
    """``g1 ⋈ g2`` on the basis of g1 followed by g2.

    ``[X⊕ζ, Z⊕ξ] = ([X,Z] + ζ▷Z − ξ▷X) ⊕ ([ζ,ξ] + ζ◁Z − ξ◁X)``.
    """
    g1, g2 = mp.g1, mp.g2
    basis = list(g1.basis) + list(g2.basis)
    off = g1.dim

    def embed(v1: LinComb, v2: LinComb) -> dict[str, Fraction]:
        out = {g1.basis[i]: c for i, c in v1.items()}
        out.update({g2.basis[i]: c for i, c in v2.items()})
        return out

    br: dict[tuple[str, str], dict[str, Fraction]] = {}
    for a in range(len(basis)):
        for b in range(len(basis)):
            if a < off:
                X, zeta = LinComb.basis(a), LinComb()
            else:
                X, zeta = LinComb(), LinComb.basis(a - off)
            if b < off:
                Z, xi = LinComb.basis(b), LinComb()
            else:
                Z, xi = LinComb(), LinComb.basis(b - off)
            part1 = g1.bracket(X, Z) + mp.left(zeta, Z) - mp.left(xi, X)
            part2 = g2.bracket(zeta, xi) + mp.right(zeta, Z) - mp.right(xi, X)
            val = embed(part1, part2)
            if val:
                br[(basis[a], basis[b])] = val
    return LieAlgebra(basis, br, name=name or f"{g1.name}⋈{g2.name}", complete=False)


# ---------------------------------------------------------------------------
# modules and comodules over Lie algebras


class LieModuleComodule:
    """Right g-module with an optional left g-coaction ``m ↦ m[-1] ⊗ m[0]``.

    ``action`` maps a generator name to a table ``label -> {label: coeff}`` giving
    ``m ◁ X``; missing entries are zero. ``coaction`` maps a label to
    ``{(generator, label): coeff}``.
    """

    def __init__(self, g: LieAlgebra, labels: Sequence[str],
                 action: Mapping[str, Mapping[str, Mapping[str, object]]] | None = None,
                 coaction: Mapping[str, Mapping[tuple[str, str], object]] | None = None,
                 name: str = ""):
        self.g = g
        self.name = name
        self.labels: tuple[str, ...] = tuple(labels)
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("repeated module labels")
        self.index = {l: i for i, l in enumerate(self.labels)}
        self._act: list[list[LinComb]] = [[LinComb() for _ in self.labels] for _ in range(g.dim)]
        for gen, table in (action or {}).items():
            gi = g._idx(gen)
            for lab, img in table.items():
                self._act[gi][self._m(lab)] = LinComb((self._m(k), Fraction(v)) for k, v in img.items())
        self.has_coaction = coaction is not None
        self._coact: list[LinComb] = [LinComb() for _ in self.labels]
        for lab, img in (coaction or {}).items():
            self._coact[self._m(lab)] = LinComb(((g._idx(x), self._m(k)), Fraction(v)) for (x, k), v in img.items())

    def _m(self, label: str) -> int:
        try:
            return self.index[label]
        except KeyError:
            raise KeyError(f"unknown module basis label {label!r}") from None

    @property
    def dim(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"LieModuleComodule({self.name or '?'}, dim={self.dim}, over {self.g.name or '?'})"

    # raw access -----------------------------------------------------------
    def action_image(self, gen: int, m: int) -> LinComb:
        return self._act[gen][m]

    def coaction_image(self, m: int) -> LinComb:
        return self._coact[m]

    def action_table(self) -> dict[str, dict[str, dict[str, Fraction]]]:
        out = {}
        for gi, rows in enumerate(self._act):
            tab = {self.labels[m]: {self.labels[k]: c for k, c in sorted(img.items())} for m, img in enumerate(rows) if img}
            if tab:
                out[self.g.basis[gi]] = tab
        return out

    def coaction_table(self) -> dict[str, dict[tuple[str, str], Fraction]]:
        return {self.labels[m]: {(self.g.basis[x], self.labels[k]): c for (x, k), c in sorted(img.items())}
                for m, img in enumerate(self._coact) if img}

    # linear operations -----------------------------------------------------
    def vec(self, spec: str | Mapping[str, object]) -> LinComb:
        if isinstance(spec, str):
            return LinComb.basis(self._m(spec))
        return LinComb((self._m(k), Fraction(v)) for k, v in spec.items())

    def act(self, v: Mapping[int, Fraction], gen: int) -> LinComb:
        out = LinComb()
        for m, c in v.items():
            out.add_scaled(self._act[gen][m], c)
        return out

    def act_by(self, v: Mapping[int, Fraction], x: Mapping[int, Fraction]) -> LinComb:
        out = LinComb()
        for gi, a in x.items():
            out.add_scaled(self.act(v, gi), a)
        return out

    def coact(self, v: Mapping[int, Fraction]) -> LinComb:
        out = LinComb()
        for m, c in v.items():
            out.add_scaled(self._coact[m], c)
        return out

    def theta(self, v: Mapping[int, Fraction], k: int) -> LinComb:
        """Action of the dual basis vector θ^k of S(g*) read off the coaction."""
        out = LinComb()
        for (x, m), c in self.coact(v).items():
            if x == k:
                out.add_term(m, c)
        return out

    def fmt(self, v: Mapping[int, Fraction]) -> str:
        return format_terms(v, lambda m: self.labels[m])

    def fmt_gm(self, v: Mapping[tuple[int, int], Fraction], g: LieAlgebra | None = None) -> str:
        g = g or self.g
        return format_terms(v, lambda k: f"{g.basis[k[0]]} ⊗ {self.labels[k[1]]}")

    # derived modules -------------------------------------------------------
    def with_coaction(self, coaction: Mapping[str, Mapping[tuple[str, str], object]] | None, name: str = "") -> "LieModuleComodule":
        return LieModuleComodule(self.g, self.labels, self.action_table(), coaction, name=name or self.name)

    def restrict(self, sub: LieAlgebra, name: str = "") -> "LieModuleComodule":
        """Restrict action and project the coaction onto a subalgebra spanned by basis names."""
        keep = set(sub.basis)
        act = {gen: tab for gen, tab in self.action_table().items() if gen in keep}
        coact = None
        if self.has_coaction:
            coact = {}
            for lab, img in self.coaction_table().items():
                part = {(x, k): c for (x, k), c in img.items() if x in keep}
                if part:
                    coact[lab] = part
        return LieModuleComodule(sub, self.labels, act, coact, name=name or self.name)

    def twisted(self, character: Mapping[str, object], name: str = "") -> "LieModuleComodule":
        """``m ◁_β X = m ◁ X + β(X) m``."""
        act = {gen: {lab: dict(img) for lab, img in tab.items()} for gen, tab in self.action_table().items()}
        for gen, val in character.items():
            val = Fraction(val)
            if not val:
                continue
            tab = act.setdefault(gen, {})
            for lab in self.labels:
                row = tab.setdefault(lab, {})
                row[lab] = row.get(lab, 0) + val
        coact = self.coaction_table() if self.has_coaction else None
        return LieModuleComodule(self.g, self.labels, act, coact, name=name or self.name)


# -- truncated symmetric algebra -------------------------------------------


def _monomials(n: int, max_degree: int) -> list[tuple[int, ...]]:
    out = []
    for d in range(max_degree + 1):
        def rec(prefix: tuple[int, ...], left: int, pos: int):
            if pos == n - 1:
                out.append(prefix + (left,))
                return
            for e in range(left, -1, -1):
                rec(prefix + (e,), left - e, pos + 1)
        if n == 0:
            if d == 0:
                out.append(())
            continue
        rec((), d, 0)
    return out


def symmetric_label(g: LieAlgebra, exps: Sequence[int]) -> str:
    if not any(exps):
        return "1_M"
    parts = []
    for name, e in zip(g.basis, exps):
        if e:
            parts.append(f"R{name}" + (f"^{e}" if e > 1 else ""))
    return ".".join(parts)


def coadjoint_action_build(g: LieAlgebra, truncation_degree: int, character: Mapping[str, object] | None = None,
                           name: str = "") -> LieModuleComodule:
    """Right g-action ``m ◁ X = −L_X(m) + δ(X) m`` on S(g*) truncated above ``truncation_degree``.

    ``(L_X θ^j)(V) = −θ^j([X, V])`` extended as a derivation; δ defaults to the
    trace of the adjoint representation.
    """
    if truncation_degree < 0:
        raise ValueError("truncation degree must be nonnegative")
    n = g.dim
    mons = _monomials(n, truncation_degree)
    labels = [symmetric_label(g, e) for e in mons]
    pos = {e: i for i, e in enumerate(mons)}
    delta = TraceCharacter.of(g).values if character is None else {k: Fraction(v) for k, v in character.items()}
    action: dict[str, dict[str, dict[str, Fraction]]] = {}
    for xi, xname in enumerate(g.basis):
        tab: dict[str, dict[str, Fraction]] = {}
        for e in mons:
            img = LinComb()
            for j in range(n):
                if not e[j]:
                    continue
                # −L_X θ^j = Σ_k c[X,k][j] θ^k
                for k in range(n):
                    c = g.constant(xi, k, j)
                    if c:
                        f = list(e)
                        f[j] -= 1
                        f[k] += 1
                        img.add_term(pos[tuple(f)], e[j] * c)
            d = delta.get(xname, 0)
            if d:
                img.add_term(pos[e], d)
            if img:
                tab[labels[pos[e]]] = {labels[k]: c for k, c in img.items()}
        if tab:
            action[xname] = tab
    return LieModuleComodule(g, labels, action, None, name=name or f"S({g.name}*)[{truncation_degree}]")


def koszul_coaction_build(g: LieAlgebra, truncation_degree: int) -> dict[str, dict[tuple[str, str], Fraction]]:
    """``m ↦ Σ_i X_i ⊗ m θ^i`` on the truncated symmetric algebra, products past the truncation dropped."""
    n = g.dim
    mons = _monomials(n, truncation_degree)
    out: dict[str, dict[tuple[str, str], Fraction]] = {}
    for e in mons:
        if sum(e) + 1 > truncation_degree:
            continue
        img = {}
        for i in range(n):
            f = list(e)
            f[i] += 1
            img[(g.basis[i], symmetric_label(g, f))] = Fraction(1)
        out[symmetric_label(g, e)] = img
    return out


def truncated_symmetric_module(g: LieAlgebra, truncation_degree: int, character: Mapping[str, object] | None = None,
                               name: str = "") -> LieModuleComodule:
    """Coadjoint action plus Koszul coaction on the truncated S(g*)."""
    base = coadjoint_action_build(g, truncation_degree, character, name)
    return base.with_coaction(koszul_coaction_build(g, truncation_degree))


# -- checkers -----------------------------------------------------------------


def _iter_coaction_twice(M: LieModuleComodule, m: int) -> LinComb:
    """``m[-2] ⊗ m[-1] ⊗ m[0]`` keyed by ``(a, b, m'')``."""
    out = LinComb()
    for (a, m1), c in M.coaction_image(m).items():
        for (b, m2), d in M.coaction_image(m1).items():
            out.add_term((a, b, m2), c * d)
    return out


def check_lie_comodule(M: LieModuleComodule) -> Report:
    """``m[-2] ∧ m[-1] ⊗ m[0] = 0``."""
    rep = Report("Lie comodule")
    g = M.g
    for m in range(M.dim):
        t = _iter_coaction_twice(M, m)
        wedge = LinComb()
        for (a, b, k), c in t.items():
            wedge.add_term((a, b, k), c)
            wedge.add_term((b, a, k), -c)
        render = lambda key: f"{g.basis[key[0]]} ∧ {g.basis[key[1]]} ⊗ {M.labels[key[2]]}"
        half = LinComb({k: c for k, c in wedge.items() if k[0] < k[1]})
        rep.add("g-comod", not wedge, (M.labels[m],), format_terms(half, render), "0")
    return rep


def _ayd_sides(M: LieModuleComodule, m: int, x: int) -> tuple[LinComb, LinComb]:
    g = M.g
    lhs = M.coact(M.action_image(x, m))
    rhs = LinComb()
    X = LinComb.basis(x)
    for (a, k), c in M.coaction_image(m).items():
        for k2, d in M.action_image(x, k).items():
            rhs.add_term((a, k2), c * d)
        for b, e in g.bracket(LinComb.basis(a), X).items():
            rhs.add_term((b, k), c * e)
    return lhs, rhs


def check_lie_ayd(M: LieModuleComodule) -> Report:
    """``▼(m·X) = m[-1] ⊗ m[0]·X + [m[-1], X] ⊗ m[0]``."""
    rep = Report("Lie AYD condition")
    for m in range(M.dim):
        for x in range(M.g.dim):
            lhs, rhs = _ayd_sides(M, m, x)
            rep.add("lie-ayd", lhs == rhs, (M.labels[m], M.g.basis[x]), M.fmt_gm(lhs), M.fmt_gm(rhs))
    return rep


def ayd_defect(M: LieModuleComodule, label: str, gen: str) -> LinComb:
    """``rhs − lhs`` of the Lie AYD condition at a basis pair."""
    lhs, rhs = _ayd_sides(M, M.index[label], M.g.index[gen])
    return rhs - lhs


def stability_value(M: LieModuleComodule, v: Mapping[int, Fraction]) -> LinComb:
    """``m[0] · m[-1]``."""
    out = LinComb()
    for (a, k), c in M.coact(v).items():
        out.add_scaled(M.action_image(a, k), c)
    return out


def check_lie_stability(M: LieModuleComodule) -> Report:
    rep = Report("Lie stability")
    for m in range(M.dim):
        val = stability_value(M, LinComb.basis(m))
        rep.add("lie-stability", not val, (M.labels[m],), M.fmt(val), "0")
    return rep


def check_unimodular_stability(M: LieModuleComodule) -> Report:
    """``Σ_k (m·X_k)·θ^k = 0``."""
    rep = Report("unimodular stability")
    for m in range(M.dim):
        val = LinComb()
        for k in range(M.g.dim):
            val.add_scaled(M.theta(M.action_image(k, m), k))
        rep.add("unimodular-stability", not val, (M.labels[m],), M.fmt(val), "0")
    return rep


def check_sayd_lie(M: LieModuleComodule) -> Report:
    rep = Report(f"SAYD over {M.g.name or 'g'}")
    rep.extend(check_module_relations(M)).extend(check_lie_comodule(M)).extend(check_lie_ayd(M)).extend(check_lie_stability(M))
    rep.extend(check_unimodular_stability(M))
    return rep


def check_module_relations(M: LieModuleComodule) -> Report:
    """``(m◁X)◁Y − (m◁Y)◁X = m◁[X,Y]``."""
    rep = Report("Lie module relations")
    g = M.g
    for m in range(M.dim):
        v = LinComb.basis(m)
        for x in range(g.dim):
            for y in range(x + 1, g.dim):
                lhs = M.act(M.act(v, x), y) - M.act(M.act(v, y), x)
                rhs = M.act_by(v, g.bracket_basis(x, y))
                rep.add("module", lhs == rhs, (M.labels[m], g.basis[x], g.basis[y]), M.fmt(lhs), M.fmt(rhs))
    return rep


# -- double crossed sums --------------------------------------------------------


@dataclass
class SplitCoaction:
    g1_part: LieModuleComodule
    g2_part: LieModuleComodule
    report: Report


def split_coaction(M: LieModuleComodule, mp: MatchedPair) -> SplitCoaction:
    """Project an ``a = g1 ⋈ g2`` coaction onto each summand and check their compatibility.

    Compatibility: ``m[-1] ⊗ m[0]⟨-1⟩ ⊗ m[0]⟨0⟩ = m⟨0⟩[-1] ⊗ m⟨-1⟩ ⊗ m⟨0⟩[0]``
    where ``[ ]`` is the g1 part and ``⟨ ⟩`` the g2 part.
    """
    g1, g2 = mp.g1, mp.g2
    if set(M.g.basis) != set(g1.basis) | set(g2.basis):
        raise ValueError("module must live over the double crossed sum of the pair")
    M1 = M.restrict(g1)
    M2 = M.restrict(g2)
    rep = Report("split coaction compatibility")
    for m in range(M.dim):
        lhs = LinComb()
        for (a, k), c in M1.coaction_image(m).items():
            for (b, k2), d in M2.coaction_image(k).items():
                lhs.add_term((a, b, k2), c * d)
        rhs = LinComb()
        for (b, k), c in M2.coaction_image(m).items():
            for (a, k2), d in M1.coaction_image(k).items():
                rhs.add_term((a, b, k2), c * d)
        render = lambda key: f"{g1.basis[key[0]]} ⊗ {g2.basis[key[1]]} ⊗ {M.labels[key[2]]}"
        rep.add("split-comodule", lhs == rhs, (M.labels[m],), format_terms(lhs, render), format_terms(rhs, render))
    rep.extend(check_lie_comodule(M1)).extend(check_lie_comodule(M2))
    return SplitCoaction(M1, M2, rep)


def recombine_coactions(M1: LieModuleComodule, M2: LieModuleComodule, a: LieAlgebra) -> dict[str, dict[tuple[str, str], Fraction]]:
    """``m ↦ m[-1] ⊗ m[0] + m⟨-1⟩ ⊗ m⟨0⟩`` as a coaction table over ``a``."""
    out: dict[str, dict[tuple[str, str], Fraction]] = {}
    for part in (M1, M2):
        for lab, img in part.coaction_table().items():
            row = out.setdefault(lab, {})
            for key, c in img.items():
                row[key] = row.get(key, 0) + c
    return {lab: {k: c for k, c in row.items() if c} for lab, row in out.items() if any(row.values())}


def check_matched_ayd_conditions(M: LieModuleComodule, mp: MatchedPair) -> Report:
    """Sufficient conditions for AYD over ``g1 ⋈ g2`` from the two summands.

    Runs AYD over each summand and the four cross conditions

    1. ``(m·X)⟨-1⟩ ⊗ (m·X)⟨0⟩ = m⟨-1⟩◁X ⊗ m⟨0⟩ + m⟨-1⟩ ⊗ m⟨0⟩·X``
    2. ``m⟨-1⟩▷X ⊗ m⟨0⟩ = 0``
    3. ``(m·Y)[-1] ⊗ (m·Y)[0] = −Y▷m[-1] ⊗ m[0] + m[-1] ⊗ m[0]·Y``
    4. ``Y◁m[-1] ⊗ m[0] = 0``

    It also reports the two mixed component equations (ids ``ayd-a:g1`` and
    ``ayd-a:g2``) which, together with 1 and 3, are equivalent to AYD over ``a``
    without assuming AYD over each summand.
    """
    g1, g2 = mp.g1, mp.g2
    split = split_coaction(M, mp)
    M1, M2 = split.g1_part, split.g2_part
    rep = Report("AYD over a double crossed sum")
    rep.extend(check_lie_ayd(M1)).extend(check_lie_ayd(M2))
    a_idx = M.g.index
    f1 = lambda v: M1.fmt_gm(v, g1)
    f2 = lambda v: M2.fmt_gm(v, g2)
    for m in range(M.dim):
        for x in range(g1.dim):
            X = LinComb.basis(x)
            mx = M.act(LinComb.basis(m), a_idx[g1.basis[x]])
            # 1
            lhs = M2.coact(mx)
            rhs = LinComb()
            for (z, k), c in M2.coaction_image(m).items():
                for z2, d in mp.right(LinComb.basis(z), X).items():
                    rhs.add_term((z2, k), c * d)
                for k2, d in M.action_image(a_idx[g1.basis[x]], k).items():
                    rhs.add_term((z, k2), c * d)
            rep.add("prop-ax2-1", lhs == rhs, (M.labels[m], g1.basis[x]), f2(lhs), f2(rhs))
            # 2
            val = LinComb()
            for (z, k), c in M2.coaction_image(m).items():
                for y, d in mp.left(LinComb.basis(z), X).items():
                    val.add_term((y, k), c * d)
            rep.add("prop-ax2-2", not val, (M.labels[m], g1.basis[x]), f1(val), "0")
            # mixed g1 component of AYD over a
            lhs = M1.coact(mx)
            rhs = LinComb()
            for (a, k), c in M1.coaction_image(m).items():
                for b, d in g1.bracket(LinComb.basis(a), X).items():
                    rhs.add_term((b, k), c * d)
                for k2, d in M.action_image(a_idx[g1.basis[x]], k).items():
                    rhs.add_term((a, k2), c * d)
            rhs.add_scaled(val)
            rep.add("ayd-a:g1", lhs == rhs, (M.labels[m], g1.basis[x]), f1(lhs), f1(rhs))
        for y in range(g2.dim):
            Yv = LinComb.basis(y)
            my = M.act(LinComb.basis(m), a_idx[g2.basis[y]])
            # 3
            lhs = M1.coact(my)
            rhs = LinComb()
            for (a, k), c in M1.coaction_image(m).items():
                for b, d in mp.left(Yv, LinComb.basis(a)).items():
                    rhs.add_term((b, k), -c * d)
                for k2, d in M.action_image(a_idx[g2.basis[y]], k).items():
                    rhs.add_term((a, k2), c * d)
            rep.add("prop-ax2-3", lhs == rhs, (M.labels[m], g2.basis[y]), f1(lhs), f1(rhs))
            # 4
            val = LinComb()
            for (a, k), c in M1.coaction_image(m).items():
                for z, d in mp.right(Yv, LinComb.basis(a)).items():
                    val.add_term((z, k), c * d)
            rep.add("prop-ax2-4", not val, (M.labels[m], g2.basis[y]), f2(val), "0")
            # mixed g2 component of AYD over a
            lhs = M2.coact(my)
            rhs = LinComb()
            for (z, k), c in M2.coaction_image(m).items():
                for w, d in g2.bracket(LinComb.basis(z), Yv).items():
                    rhs.add_term((w, k), c * d)
                for k2, d in M.action_image(a_idx[g2.basis[y]], k).items():
                    rhs.add_term((z, k2), c * d)
            rhs.add_scaled(val, -1)
            rep.add("ayd-a:g2", lhs == rhs, (M.labels[m], g2.basis[y]), f2(lhs), f2(rhs))
    return rep
