"""Hopf-cyclic cocyclic module ``C(H, M)``, the bicocyclic module ``M ⊗ F^p ⊗ U^q`` and transport maps.

Chains are ``LinComb`` objects.

* ``C^q(H, M) = M ⊗ H^{⊗q}``: key ``(m, (h1, ..., hq))`` with ``h = (f_exps, u_exps)``.
* ``M ⊗ F^{⊗p} ⊗ U^{⊗q}``: key ``(m, (f1, ..., fp), (u1, ..., uq))``.

Every operator acts key by key, so a combination of mixed (bi)degrees (a
total-complex element) is handled componentwise.
"""

from __future__ import annotations

import re
from itertools import product
from fractions import Fraction
from typing import Callable, Hashable, Mapping, Sequence

from .exactnum import LinComb, parse_rational
from .hopfalg import BicrossedHopf, Exps, ModularPair, _add
from .liealg import format_terms
from .saydmod import FDModule

Key = Hashable
KeyMap = Callable[[Key], LinComb]


def _linear(fn: KeyMap, x: Mapping) -> LinComb:
    out = LinComb()
    for k, c in x.items():
        out.add_scaled(fn(k), c)
    return out


def _cached(fn: KeyMap) -> KeyMap:
    cache: dict = {}

    def wrapped(k):
        hit = cache.get(k)
        if hit is None:
            hit = fn(k)
            cache[k] = hit
        return hit
    return wrapped


class CocyclicOps:
    """Alternating sums built from faces, degeneracies and the cyclic operator of one direction.

    ``face(i, key)``, ``degeneracy(j, key)`` and ``tau(key)`` act on basis keys and
    ``degree(key)`` reads the degree in this direction.
    """

    def __init__(self, name: str, degree: Callable[[Key], int], face, degeneracy, tau, extra=None):
        self.name = name
        self.degree = degree
        self._face = face
        self._degeneracy = degeneracy
        self._tau = _cached(tau)
        self._extra = extra

    def _check(self, op: str, i: int, lo: int, hi: int, k: Key) -> None:
        if not lo <= i <= hi:
            raise IndexError(f"{self.name} {op} index {i} out of range [{lo}, {hi}] in degree {self.degree(k)}")

    def face(self, i: int, x: Mapping) -> LinComb:
        def one(k):
            self._check("face", i, 0, self.degree(k) + 1, k)
            return self._face(i, k)
        return _linear(one, x)

    def degeneracy(self, j: int, x: Mapping) -> LinComb:
        def one(k):
            self._check("degeneracy", j, 0, self.degree(k) - 1, k)
            return self._degeneracy(j, k)
        return _linear(one, x)

    def tau(self, x: Mapping) -> LinComb:
        return _linear(self._tau, x)

    def tau_power(self, x: Mapping, n: int) -> LinComb:
        out = LinComb(x)
        for _ in range(n):
            out = self.tau(out)
        return out

    def b(self, x: Mapping) -> LinComb:
        def one(k):
            out = LinComb()
            for i in range(self.degree(k) + 2):
                out.add_scaled(self._face(i, k), -1 if i % 2 else 1)
            return out
        return _linear(one, x)

    def extra_degeneracy(self, x: Mapping) -> LinComb:
        """``σ₋₁ = σ_{q-1} τ`` on degree ``q ≥ 1``; degree-0 keys map to zero."""
        def one(k):
            q = self.degree(k)
            if q == 0:
                return LinComb()
            if self._extra is not None:
                return self._extra(k)
            return _linear(lambda t: self._degeneracy(q - 1, t), self._tau(k))
        return _linear(one, x)

    def norm(self, x: Mapping) -> LinComb:
        """``N = Σ_i (-1)^{qi} τ^i`` on each degree-q key."""
        def one(k):
            q = self.degree(k)
            out = LinComb()
            cur = LinComb.basis(k)
            for i in range(q + 1):
                out.add_scaled(cur, -1 if (q * i) % 2 else 1)
                cur = self.tau(cur)
            return out
        return _linear(one, x)

    def B(self, x: Mapping) -> LinComb:
        """``(Σ_{i=0}^{q-1} (-1)^{(q-1)i} τ^i) σ_{q-1} τ``: Connes' boundary on normalized chains."""
        return self.norm(self.extra_degeneracy(x))

    def B_full(self, x: Mapping) -> LinComb:
        """``N σ₋₁ (Id - λ)`` with ``λ = (-1)^q τ``; agrees with ``B`` on normalized chains."""
        def one(k):
            lam = self.tau(LinComb.basis(k)).scale(-1 if self.degree(k) % 2 else 1)
            return LinComb.basis(k) - lam
        return self.B(_linear(one, x))

    def lam(self, x: Mapping) -> LinComb:
        return _linear(lambda k: self.tau(LinComb.basis(k)).scale(-1 if self.degree(k) % 2 else 1), x)


# ---------------------------------------------------------------------------
# tensor-power helpers on H, F and U


def _accumulate_product(out: LinComb, slots: Sequence, coeff: Fraction) -> None:
    """``out += coeff * (slot_1 ⊗ ... ⊗ slot_n)`` with keys the tuple of slot keys."""
    for combo in product(*slots):
        c = coeff
        for _, d in combo:
            c *= d
        out.add_term(tuple(k for k, _ in combo), c)


class _HTensors:
    def __init__(self, H: BicrossedHopf):
        self.H = H
        self.F = H.F
        self.U = H.U
        self.hs = H.hs
        self.iter_cop = _cached(self._iter_cop)
        self.f_iter_cop = _cached(self._f_iter_cop)
        self.u_iter_cop = _cached(self._u_iter_cop)

    # H
    def _iter_cop(self, arg) -> LinComb:
        k, n = arg
        if n == 0:
            return LinComb({(): Fraction(1)}) if k == self.H.unit_key else LinComb()
        if n == 1:
            return LinComb.basis((k,))
        out = LinComb()
        for (k1, k2), c in self.H.coproduct_basis(k).items():
            for rest, d in self.iter_cop((k2, n - 1)).items():
                out.add_term((k1,) + rest, c * d)
        return out

    def h_diag(self, h: Mapping, keys: tuple) -> LinComb:
        """``h · (k1 ⊗ ... ⊗ kn) = h(1)k1 ⊗ ... ⊗ h(n)kn``."""
        out = LinComb()
        for hk, c in h.items():
            for parts, d in self.iter_cop((hk, len(keys))).items():
                slots = [self.H.mul_basis(p, k).items() for p, k in zip(parts, keys)]
                _accumulate_product(out, slots, c * d)
        return out

    # F
    def _f_iter_cop(self, arg) -> LinComb:
        f, n = arg
        if n == 0:
            return LinComb({(): Fraction(1)}) if not any(f) else LinComb()
        if n == 1:
            return LinComb.basis((f,))
        out = LinComb()
        for (f1, f2), c in self.F.coproduct_mono(f).items():
            for rest, d in self.f_iter_cop((f2, n - 1)).items():
                out.add_term((f1,) + rest, c * d)
        return out

    def f_diag(self, g: Exps, fs: tuple) -> LinComb:
        """Left multiplication of ``g ∈ F`` on ``F^{⊗p}`` through the iterated coproduct."""
        out = LinComb()
        for parts, c in self.f_iter_cop((g, len(fs))).items():
            out.add_term(tuple(_add(p, f) for p, f in zip(parts, fs)), c)
        return out

    # U
    def _u_iter_cop(self, arg) -> LinComb:
        u, n = arg
        if n == 0:
            return LinComb({(): Fraction(1)}) if not any(u) else LinComb()
        if n == 1:
            return LinComb.basis((u,))
        out = LinComb()
        for (u1, u2), c in self.U.coproduct_mono(u).items():
            for rest, d in self.u_iter_cop((u2, n - 1)).items():
                out.add_term((u1,) + rest, c * d)
        return out

    def u_diag_mul(self, u: Exps, us: tuple) -> LinComb:
        """Left multiplication of ``u ∈ U`` on ``U^{⊗q}`` through the iterated coproduct."""
        out = LinComb()
        for parts, c in self.u_iter_cop((u, len(us))).items():
            cur = LinComb({(): c})
            for p, v in zip(parts, us):
                prod = self.U.mul_mono(p, v)
                nxt = LinComb()
                for t, e in cur.items():
                    for w, g in prod.items():
                        nxt.add_term(t + (w,), e * g)
                cur = nxt
            out.add_scaled(cur)
        return out

    def h_on_f_diag(self, h: Mapping, fs: tuple) -> LinComb:
        """``h ▷ (f1 ⊗ ... ⊗ fp) = h(1)▷f1 ⊗ ... ⊗ h(p)▷fp`` with ``(g ▸◂ u) ▷ f = g (u ▷ f)``."""
        out = LinComb()
        for hk, c in h.items():
            for parts, d in self.iter_cop((hk, len(fs))).items():
                slots = [self.H.act_on_f(LinComb.basis(p), LinComb.basis(f)).items() for p, f in zip(parts, fs)]
                _accumulate_product(out, slots, c * d)
        return out

    def h_on_u_diag(self, h: Mapping, us: tuple) -> LinComb:
        """``h · (u1 ⊗ ... ⊗ uq)`` on classes in ``U = H / H F⁺``: ``(g ▸◂ v) · w = ε(g) v w``."""
        out = LinComb()
        for hk, c in h.items():
            for parts, d in self.iter_cop((hk, len(us))).items():
                if any(any(p[0]) for p in parts):
                    continue
                slots = [self.U.mul_mono(p[1], u).items() for p, u in zip(parts, us)]
                _accumulate_product(out, slots, c * d)
        return out

    def u_diag_act(self, u: Exps, fs: tuple) -> LinComb:
        """``u ▷ (f1 ⊗ ... ⊗ fp) = u(1)▷f1 ⊗ ... ⊗ u(p)▷fp``."""
        out = LinComb()
        for parts, c in self.u_iter_cop((u, len(fs))).items():
            cur = LinComb({(): c})
            for p, f in zip(parts, fs):
                img = self.hs.act_mono(p, f)
                nxt = LinComb()
                for t, e in cur.items():
                    for w, g in img.items():
                        nxt.add_term(t + (w,), e * g)
                cur = nxt
            out.add_scaled(cur)
        return out

    def u_left_coaction(self, us: tuple) -> LinComb:
        """``ũ ↦ ũ^⟨-1⟩ ⊗ ũ^⟨0⟩`` with ``u^⟨-1⟩ = S(u⁽¹⁾) ∈ F``, keyed ``(f, (u0_1, ..., u0_q))``."""
        out = LinComb({(self.F.zero_exps, ()): Fraction(1)})
        for u in us:
            nxt = LinComb()
            for (u0, u1), c in self.hs.coact_mono(u).items():
                s = self.F.antipode_mono(u1)
                for (f, rest), d in out.items():
                    for sf, e in s.items():
                        nxt.add_term((_add(f, sf), rest + (u0,)), c * d * e)
            out = nxt
        return out

    def u_coaction_iter(self, u: Exps, n: int) -> LinComb:
        """``u ↦ u⁽⁰⁾ ⊗ u⁽¹⁾ ⊗ ... ⊗ u⁽ⁿ⁾`` with ``u⁽¹⁾ ⊗ ... ⊗ u⁽ⁿ⁾ = Δ^{(n)}(u⁽¹⁾)``, keyed ``(u0, (f1..fn))``."""
        out = LinComb()
        for (u0, u1), c in self.hs.coact_mono(u).items():
            for parts, d in self.f_iter_cop((u1, n)).items():
                out.add_term((u0, parts), c * d)
        return out


# ---------------------------------------------------------------------------
# C(H, M)


class CyclicComplex:
    """The cocyclic module ``C^q(H, M) = M ⊗ H^{⊗q}`` for a right-left SAYD module ``M``.

    * ``∂_0`` inserts ``1`` first, ``∂_i`` applies Δ to ``h^i``, ``∂_{q+1}`` appends ``m⟨-1⟩``;
    * ``σ_j`` applies ε to ``h^{j+1}``;
    * ``τ(m ⊗ h¹ ⊗ ... ⊗ h^q) = m⟨0⟩h¹(1) ⊗ S(h¹(2))·(h² ⊗ ... ⊗ h^q ⊗ m⟨-1⟩)``.
    """

    def __init__(self, M: FDModule):
        self.M = M
        self.H = M.H
        self.T = _HTensors(M.H)
        self.ops = CocyclicOps("C(H,M)", lambda k: len(k[1]), self._face, self._degeneracy, self._tau, self._extra)

    # basis-level maps -------------------------------------------------------
    def _face(self, i: int, k: Key) -> LinComb:
        m, hs = k
        q = len(hs)
        if i == 0:
            return LinComb.basis((m, (self.H.unit_key,) + hs))
        if i <= q:
            out = LinComb()
            for (a, b), c in self.H.coproduct_basis(hs[i - 1]).items():
                out.add_term((m, hs[:i - 1] + (a, b) + hs[i:]), c)
            return out
        out = LinComb()
        for (h, m0), c in self.M.coact(LinComb.basis(m)).items():
            out.add_term((m0, hs + (h,)), c)
        return out

    def _degeneracy(self, j: int, k: Key) -> LinComb:
        m, hs = k
        if hs[j] != self.H.unit_key:
            return LinComb()
        return LinComb.basis((m, hs[:j] + hs[j + 1:]))

    def _tau(self, k: Key) -> LinComb:
        m, hs = k
        if not hs:
            return LinComb.basis(k)
        out = LinComb()
        coact = self.M.coact(LinComb.basis(m))
        for (h1, h2), c in self.H.coproduct_basis(hs[0]).items():
            sh2 = self.H.antipode_basis(h2)
            for (mh, m0), d in coact.items():
                mm = self.M._act_basis(m0, h1)
                if not mm:
                    continue
                for t, e in self.T.h_diag(sh2, hs[1:] + (mh,)).items():
                    for mk, g in mm.items():
                        out.add_term((mk, t), c * d * e * g)
        return out

    def _extra(self, k: Key) -> LinComb:
        """``σ₋₁(m ⊗ h¹ ⊗ ... ⊗ h^{q}) = m·h¹(1) ⊗ S(h¹(2))·(h² ⊗ ... ⊗ h^q)``."""
        m, hs = k
        out = LinComb()
        for (h1, h2), c in self.H.coproduct_basis(hs[0]).items():
            mm = self.M._act_basis(m, h1)
            if not mm:
                continue
            for t, e in self.T.h_diag(self.H.antipode_basis(h2), hs[1:]).items():
                for mk, g in mm.items():
                    out.add_term((mk, t), c * e * g)
        return out

    # public operators -----------------------------------------------------------
    def face(self, i: int, x: Mapping) -> LinComb:
        return self.ops.face(i, x)

    def degeneracy(self, j: int, x: Mapping) -> LinComb:
        return self.ops.degeneracy(j, x)

    def cyclic_tau(self, x: Mapping) -> LinComb:
        return self.ops.tau(x)

    def hochschild_b(self, x: Mapping) -> LinComb:
        return self.ops.b(x)

    def connes_B(self, x: Mapping) -> LinComb:
        return self.ops.B(x)

    def connes_B_full(self, x: Mapping) -> LinComb:
        return self.ops.B_full(x)

    def extra_degeneracy(self, x: Mapping) -> LinComb:
        return self.ops.extra_degeneracy(x)

    def extra_degeneracy_via_tau(self, x: Mapping) -> LinComb:
        """``σ_{q-1} τ`` computed from the two operators separately."""
        def one(k):
            q = len(k[1])
            if q == 0:
                return LinComb()
            return self.degeneracy(q - 1, self.cyclic_tau(LinComb.basis(k)))
        return _linear(one, x)

    # elements ----------------------------------------------------------------------
    def element(self, text: str) -> LinComb:
        return parse_chain(text, self.M)

    def fmt(self, x: Mapping) -> str:
        return format_chain(x, self.M)


# ---------------------------------------------------------------------------
# M ⊗ F^{⊗p} ⊗ U^{⊗q}


class BicocyclicComplex:
    """The bicocyclic module ``M_δ ⊗ F^{⊗p} ⊗ U^{⊗q}`` with its F-direction and U-direction operators.

    F-direction (changes ``p``):

    * ``∂_{p+1}(m ⊗ f̃ ⊗ ũ) = m⟨0⟩ ⊗ f̃ ⊗ (ũ^⟨-1⟩ m⟨-1⟩ ▷ 1_F) ⊗ ũ^⟨0⟩``;
    * ``τ(m ⊗ f̃ ⊗ ũ) = m⟨0⟩f¹(1) ⊗ S(f¹(2))·(f² ⊗ ... ⊗ f^p ⊗ ũ^⟨-1⟩ m⟨-1⟩ ▷ 1_F) ⊗ ũ^⟨0⟩``.

    U-direction (changes ``q``):

    * ``∂_{q+1}(m ⊗ f̃ ⊗ ũ) = m⟨0⟩ ⊗ f̃ ⊗ ũ ⊗ w̄(m⟨-1⟩)`` with ``w̄(f ▸◂ u) = ε(f)u``;
    * ``τ(m ⊗ f̃ ⊗ ũ) = m⟨0⟩u¹(2) ⊗ S⁻¹(u¹(1)) ▷ f̃ ⊗ S(u¹(3))·(u² ⊗ ... ⊗ u^q ⊗ w̄(m⟨-1⟩))``.

    Here ``h ▷ 1_F = f ε(u)`` for ``h = f ▸◂ u`` and ``u^⟨-1⟩ = S(u⁽¹⁾)``.
    """

    def __init__(self, M: FDModule):
        self.M = M
        self.H = M.H
        self.F = M.H.F
        self.U = M.H.U
        self.T = _HTensors(M.H)
        self.horizontal = CocyclicOps("F-direction", lambda k: len(k[1]), self._f_face, self._f_degeneracy, self._f_tau)
        self.vertical = CocyclicOps("U-direction", lambda k: len(k[2]), self._u_face, self._u_degeneracy, self._u_tau)

    @staticmethod
    def bidegree(k: Key) -> tuple[int, int]:
        return len(k[1]), len(k[2])

    def _coact(self, m: int) -> LinComb:
        return self.M.coact(LinComb.basis(m))

    # F-direction -----------------------------------------------------------------
    def _f_face(self, i: int, k: Key) -> LinComb:
        m, fs, us = k
        p = len(fs)
        if i == 0:
            return LinComb.basis((m, (self.F.zero_exps,) + fs, us))
        if i <= p:
            out = LinComb()
            for (a, b), c in self.F.coproduct_mono(fs[i - 1]).items():
                out.add_term((m, fs[:i - 1] + (a, b) + fs[i:], us), c)
            return out
        out = LinComb()
        for (fu, u0s), c in self.T.u_left_coaction(us).items():
            for ((g, v), m0), d in self._coact(m).items():
                if any(v):
                    continue
                out.add_term((m0, fs + (_add(fu, g),), u0s), c * d)
        return out

    def _f_degeneracy(self, j: int, k: Key) -> LinComb:
        m, fs, us = k
        if any(fs[j]):
            return LinComb()
        return LinComb.basis((m, fs[:j] + fs[j + 1:], us))

    def _f_tau(self, k: Key) -> LinComb:
        m, fs, us = k
        if not fs:
            return LinComb.basis(k)
        out = LinComb()
        zero_u = self.U.zero_exps
        for (fu, u0s), c in self.T.u_left_coaction(us).items():
            for ((g, v), m0), d in self._coact(m).items():
                if any(v):
                    continue
                tail = fs[1:] + (_add(fu, g),)
                for (f1, f2), e in self.F.coproduct_mono(fs[0]).items():
                    mm = self.M._act_basis(m0, (f1, zero_u))
                    if not mm:
                        continue
                    for s, sc in self.F.antipode_mono(f2).items():
                        for t, tc in self.T.f_diag(s, tail).items():
                            for mk, mc in mm.items():
                                out.add_term((mk, t, u0s), c * d * e * sc * tc * mc)
        return out

    # U-direction -------------------------------------------------------------------
    def _u_face(self, i: int, k: Key) -> LinComb:
        m, fs, us = k
        q = len(us)
        if i == 0:
            return LinComb.basis((m, fs, (self.U.zero_exps,) + us))
        if i <= q:
            out = LinComb()
            for (a, b), c in self.U.coproduct_mono(us[i - 1]).items():
                out.add_term((m, fs, us[:i - 1] + (a, b) + us[i:]), c)
            return out
        out = LinComb()
        for ((g, v), m0), c in self._coact(m).items():
            if any(g):
                continue
            out.add_term((m0, fs, us + (v,)), c)
        return out

    def _u_degeneracy(self, j: int, k: Key) -> LinComb:
        m, fs, us = k
        if any(us[j]):
            return LinComb()
        return LinComb.basis((m, fs, us[:j] + us[j + 1:]))

    def _u_tau(self, k: Key) -> LinComb:
        m, fs, us = k
        if not us:
            return LinComb.basis(k)
        H, T = self.H, self.T
        out = LinComb()
        for ((g, v), m0), c in self._coact(m).items():
            if any(g):
                continue
            tail = us[1:] + (v,)
            for (h1, h2, h3, h4, h5), d in T.iter_cop(((self.F.zero_exps, us[0]), 5)).items():
                # m⟨0⟩ · h4 S⁻¹(h3 ▷ 1_F)
                x3 = H.from_f(self.F.antipode(H.project_f(LinComb.basis(h3))))
                mm = self.M.act(LinComb.basis(m0), H.mul(LinComb.basis(h4), x3))
                if not mm:
                    continue
                # S(S⁻¹(h2) ▷ 1_F) acts on the F-factors
                y2 = self.F.antipode(H.project_f(H.antipode_inverse_basis(h2)))
                if not y2:
                    continue
                acted = T.h_on_f_diag(H.antipode_inverse_basis(h1), fs)
                if not acted:
                    continue
                moved = T.h_on_u_diag(H.antipode_basis(h5), tail)
                if not moved:
                    continue
                shifted = LinComb()
                for ye, yc in y2.items():
                    for ft, fc in acted.items():
                        shifted.add_scaled(T.f_diag(ye, ft), yc * fc)
                for ft, fc in shifted.items():
                    for ut, uc in moved.items():
                        for mk, mc in mm.items():
                            out.add_term((mk, ft, ut), c * d * fc * uc * mc)
        return out

    # total complex -------------------------------------------------------------------
    def tot_b(self, x: Mapping) -> LinComb:
        """``b_T = b_U + (-1)^q b_F`` on each bidegree-(p, q) component."""
        def one(k):
            sign = -1 if len(k[2]) % 2 else 1
            return self.vertical.b(LinComb.basis(k)) + self.horizontal.b(LinComb.basis(k)).scale(sign)
        return _linear(one, x)

    def tot_B(self, x: Mapping) -> LinComb:
        """``B_T = B_U + (-1)^q B_F`` on each bidegree-(p, q) component."""
        def one(k):
            sign = -1 if len(k[2]) % 2 else 1
            return self.vertical.B_full(LinComb.basis(k)) + self.horizontal.B_full(LinComb.basis(k)).scale(sign)
        return _linear(one, x)

    def aw_map(self, x: Mapping) -> LinComb:
        """Alexander-Whitney: ``(-1)^{p+q} (F-face ∂_0)^q (last U-face)^p`` into bidegree ``(p+q, p+q)``."""
        def one(k):
            p, q = self.bidegree(k)
            cur = LinComb.basis(k)
            for _ in range(p):
                cur = _linear(lambda t: self._u_face(len(t[2]) + 1, t), cur)
            for _ in range(q):
                cur = _linear(lambda t: self._f_face(0, t), cur)
            return cur.scale(-1 if (p + q) % 2 else 1)
        return _linear(one, x)

    def psi_map(self, x: Mapping) -> LinComb:
        """``m ⊗ f̃ ⊗ ũ ↦ m ⊗ f¹▸◂u¹⁽⁰⁾ ⊗ f²u¹⁽¹⁾▸◂u²⁽⁰⁾ ⊗ ... ⊗ f^n u¹⁽ⁿ⁻¹⁾⋯u^{n-1}⁽¹⁾▸◂u^n`` on the diagonal."""
        def one(k):
            m, fs, us = k
            n = len(fs)
            if len(us) != n:
                raise ValueError(f"Ψ needs a diagonal bidegree, got {(n, len(us))}")
            # slots[j] collects the F-part landing in slot j; u_parts holds the U-parts
            cur = LinComb({(tuple(fs), ()): Fraction(1)})
            for j, u in enumerate(us):
                nxt = LinComb()
                for (u0, parts), c in self.T.u_coaction_iter(u, n - j - 1).items():
                    for (slots, u0s), d in cur.items():
                        new = list(slots)
                        for off, f in enumerate(parts):
                            new[j + 1 + off] = _add(new[j + 1 + off], f)
                        nxt.add_term((tuple(new), u0s + (u0,)), c * d)
                cur = nxt
            out = LinComb()
            for (slots, u0s), c in cur.items():
                out.add_term((m, tuple(zip(slots, u0s))), c)
            return out
        return _linear(one, x)

    # elements -------------------------------------------------------------------------
    def element(self, text: str, bidegree: tuple[int, int]) -> LinComb:
        return parse_bichain(text, self.M, bidegree)

    def fmt(self, x: Mapping) -> str:
        return format_bichain(x, self.M)


def components(x: Mapping) -> dict[tuple[int, int], LinComb]:
    """Split a total-complex element by bidegree."""
    out: dict[tuple[int, int], LinComb] = {}
    for k, c in x.items():
        out.setdefault((len(k[1]), len(k[2])), LinComb()).add_term(k, c)
    return out


# ---------------------------------------------------------------------------
# weights and ad Y


def untwisted_action(M_delta: FDModule, pair: ModularPair, gen: str, v: Mapping) -> LinComb:
    """``m·X`` in the untwisted module: ``m·_δ X - δ(X) m`` for a primitive generator X."""
    return M_delta.act_gen(v, gen) - LinComb(v).scale(Fraction(pair.delta.get(gen, 0)))


class WeightGrading:
    """Weights on module labels and H generators; ``ãd`` of a primitive generator of U."""

    def __init__(self, M: FDModule, weights: Mapping[str, int], pair: ModularPair, gen: str = "Y"):
        self.M = M
        self.H = M.H
        self.pair = pair
        self.gen = gen
        missing = [n for n in list(M.labels) + list(self.H.generator_names) if n not in weights]
        if missing:
            raise KeyError(f"weights missing for {missing}")
        self.weights = {k: Fraction(v) for k, v in weights.items()}
        self._ad_h = _cached(self._ad_h_key)

    def _f_weight(self, f: Exps) -> Fraction:
        return sum((e * self.weights[n] for n, e in zip(self.H.F.names, f)), Fraction(0))

    def _u_weight(self, u: Exps) -> Fraction:
        return sum((e * self.weights[n] for n, e in zip(self.H.U.names, u)), Fraction(0))

    def key_weight(self, k: Key) -> Fraction:
        m = k[0]
        w = self.weights[self.M.labels[m]]
        if len(k) == 2:
            for f, u in k[1]:
                w += self._f_weight(f) + self._u_weight(u)
        else:
            w += sum((self._f_weight(f) for f in k[1]), Fraction(0))
            w += sum((self._u_weight(u) for u in k[2]), Fraction(0))
        return w

    def weight(self, x: Mapping) -> dict[Fraction, LinComb]:
        out: dict[Fraction, LinComb] = {}
        for k, c in x.items():
            out.setdefault(self.key_weight(k), LinComb()).add_term(k, c)
        return out

    def homogeneous_weight(self, x: Mapping) -> Fraction | None:
        parts = self.weight(x)
        if len(parts) == 1:
            return next(iter(parts))
        return Fraction(0) if not parts else None

    # ad of the generator ------------------------------------------------------------
    def _ad_h_key(self, k) -> LinComb:
        y = self.H.gen(self.gen)
        b = LinComb.basis(k)
        return self.H.mul(y, b) - self.H.mul(b, y)

    def _ad_f(self, f: Exps) -> LinComb:
        return self.H.hs.act(self.H.U.gen(self.gen), LinComb.basis(f))

    def _ad_u(self, u: Exps) -> LinComb:
        y = self.H.U.gen(self.gen)
        b = LinComb.basis(u)
        return self.H.U.mul(y, b) - self.H.U.mul(b, y)

    @staticmethod
    def _derivation(factors: tuple, ad) -> LinComb:
        out = LinComb()
        for i, f in enumerate(factors):
            for w, c in ad(f).items():
                out.add_term(factors[:i] + (w,) + factors[i + 1:], c)
        return out

    def _module_part(self, m: int) -> LinComb:
        return untwisted_action(self.M, self.pair, self.gen, LinComb.basis(m))

    def ad_tilde(self, x: Mapping) -> LinComb:
        """``m ⊗ t ↦ m ⊗ ad(t) - (m·Y) ⊗ t`` with ad a derivation over the tensor factors."""
        def one(k):
            out = LinComb()
            m = k[0]
            if len(k) == 2:
                for t, c in self._derivation(k[1], self._ad_h).items():
                    out.add_term((m, t), c)
                for mk, c in self._module_part(m).items():
                    out.add_term((mk, k[1]), -c)
            else:
                for t, c in self._derivation(k[1], self._ad_f).items():
                    out.add_term((m, t, k[2]), c)
                for t, c in self._derivation(k[2], self._ad_u).items():
                    out.add_term((m, k[1], t), c)
                for mk, c in self._module_part(m).items():
                    out.add_term((mk, k[1], k[2]), -c)
            return out
        return _linear(one, x)

    def weight_operator(self, x: Mapping) -> LinComb:
        out = LinComb()
        for k, c in x.items():
            out.add_term(k, c * self.key_weight(k))
        return out


# ---------------------------------------------------------------------------
# text syntax: ``c*m ⊗ h1 ⊗ h2 + ...``

_TERM_SPLIT = re.compile(r"\s*([+-])\s*")


def _split_terms(text: str) -> list[tuple[int, str]]:
    text = text.strip()
    if not text or text == "0":
        return []
    parts = _TERM_SPLIT.split(text)
    out: list[tuple[int, str]] = []
    sign = 1
    if parts[0] == "":
        parts = parts[1:]
    else:
        parts = ["+"] + parts
    for i in range(0, len(parts), 2):
        sign = -1 if parts[i] == "-" else 1
        body = parts[i + 1].strip()
        if not body:
            raise ValueError(f"empty term in {text!r}")
        out.append((sign, body))
    return out


def _split_coeff(body: str) -> tuple[Fraction, list[str]]:
    factors = [f.strip() for f in re.split(r"⊗|\(x\)", body)]
    first = factors[0]
    coeff = Fraction(1)
    m = re.match(r"^(\d+(?:/\d+)?)\s*\*\s*(.+)$", first)
    if m:
        coeff = parse_rational(m.group(1))
        factors[0] = m.group(2).strip()
    return coeff, factors


def parse_word(H: BicrossedHopf, text: str) -> LinComb:
    """A product of H generators such as ``d1^2*X*Y`` normalized in H; ``1`` is the unit."""
    text = text.strip()
    if text == "1":
        return H.one()
    out = H.one()
    for tok in text.split("*"):
        tok = tok.strip()
        name, _, power = tok.partition("^")
        name = name.strip()
        e = int(power) if power else 1
        if name == "1":
            continue
        if name not in H.generator_names:
            raise ValueError(f"unknown H generator {name!r} in {text!r}")
        g = H.gen(name)
        for _ in range(e):
            out = H.mul(out, g)
    return out


def _parse_f(H: BicrossedHopf, text: str) -> LinComb:
    out = LinComb()
    for k, c in parse_word(H, text).items():
        if any(k[1]):
            raise ValueError(f"{text!r} is not an element of F")
        out.add_term(k[0], c)
    return out


def _parse_u(H: BicrossedHopf, text: str) -> LinComb:
    out = LinComb()
    for k, c in parse_word(H, text).items():
        if any(k[0]):
            raise ValueError(f"{text!r} is not an element of U")
        out.add_term(k[1], c)
    return out


def _product_terms(factors: Sequence[LinComb]) -> LinComb:
    cur = LinComb({(): Fraction(1)})
    for f in factors:
        nxt = LinComb()
        for t, c in cur.items():
            for k, d in f.items():
                nxt.add_term(t + (k,), c * d)
        cur = nxt
    return cur


def _module_label(M: FDModule, text: str) -> int:
    text = text.strip()
    if text in M.index:
        return M.index[text]
    raise ValueError(f"unknown module basis label {text!r}")


def parse_chain(text: str, M: FDModule) -> LinComb:
    """Parse ``c*m ⊗ h1 ⊗ ... ⊗ hq + ...`` into ``C^q(H, M)``."""
    out = LinComb()
    for sign, body in _split_terms(text):
        coeff, factors = _split_coeff(body)
        m = _module_label(M, factors[0])
        for t, c in _product_terms([parse_word(M.H, f) for f in factors[1:]]).items():
            out.add_term((m, t), sign * coeff * c)
    return out


def parse_bichain(text: str, M: FDModule, bidegree: tuple[int, int]) -> LinComb:
    """Parse ``c*m ⊗ f1 ⊗ ... ⊗ fp ⊗ u1 ⊗ ... ⊗ uq + ...`` at the given bidegree."""
    p, q = bidegree
    out = LinComb()
    for sign, body in _split_terms(text):
        coeff, factors = _split_coeff(body)
        if len(factors) != 1 + p + q:
            raise ValueError(f"term {body!r} has {len(factors) - 1} tensor factors, expected {p + q}")
        m = _module_label(M, factors[0])
        fpart = _product_terms([_parse_f(M.H, f) for f in factors[1:1 + p]])
        upart = _product_terms([_parse_u(M.H, f) for f in factors[1 + p:]])
        for ft, c in fpart.items():
            for ut, d in upart.items():
                out.add_term((m, ft, ut), sign * coeff * c * d)
    return out


def format_chain(x: Mapping, M: FDModule) -> str:
    H = M.H
    return format_terms(x, lambda k: " ⊗ ".join([M.labels[k[0]]] + [H.fmt_basis(h) for h in k[1]]),
                        sort_key=lambda k: (len(k[1]), k[0], tuple(H.sort_key(h) for h in k[1])))


def format_bichain(x: Mapping, M: FDModule) -> str:
    H = M.H
    return format_terms(
        x,
        lambda k: " ⊗ ".join([M.labels[k[0]]] + [H.F.fmt_mono(f) for f in k[1]] + [H.U.fmt_mono(u) for u in k[2]]),
        sort_key=lambda k: (len(k[1]) + len(k[2]), len(k[1]), k[0],
                            tuple(H.sort_key((f, H.U.zero_exps)) for f in k[1]),
                            tuple(H.sort_key((H.F.zero_exps, u)) for u in k[2])))
