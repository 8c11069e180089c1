"""Chevalley–Eilenberg and perturbed Koszul complexes with exact cohomology.

Cochains of ``W^n(g, M) = Λ^n g* ⊗ M`` are ``LinComb`` objects keyed by
``(I, m)`` where ``I`` is a strictly increasing tuple of basis indices of g
(the form ``θ^{I_0}∧…∧θ^{I_{n-1}}``) and ``m`` indexes the basis of M.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .exactnum import LinComb, SparseRationalMatrix, column_space_basis, kernel_basis, rank, solve
from .liealg import LieAlgebra, LieModuleComodule

Form = tuple[int, ...]


def _sort_sign(seq: Sequence[int]) -> tuple[int, Form] | None:
    """Sign of the permutation sorting ``seq`` and the sorted tuple; ``None`` on a repeat."""
    if len(set(seq)) != len(seq):
        return None
    arr = list(seq)
    sign = 1
    for i in range(len(arr)):
        for j in range(len(arr) - 1 - i):
            if arr[j] > arr[j + 1]:
                arr[j], arr[j + 1] = arr[j + 1], arr[j]
                sign = -sign
    return sign, tuple(arr)


def iota(k: int, v: Mapping[tuple[Form, int], Fraction]) -> LinComb:
    """Contraction with ``X_k`` into the first slot."""
    out = LinComb()
    for (I, m), c in v.items():
        if k in I:
            pos = I.index(k)
            out.add_term((I[:pos] + I[pos + 1:], m), -c if pos % 2 else c)
    return out


def ce_apply(g: LieAlgebra, M: LieModuleComodule, v: Mapping[tuple[Form, int], Fraction]) -> LinComb:
    """``dα(X_0..X_q) = Σ_{i<j}(-1)^{i+j} α([X_i,X_j], …) + Σ_i (-1)^{i+1} α(…X̂_i…)·X_i``."""
    n_g = g.dim
    out = LinComb()
    for (I, m), c in v.items():
        n = len(I)
        # read off the coefficient of θ^J for every (n+1)-subset J
        for J in combinations(range(n_g), n + 1):
            val = LinComb()
            for a in range(n + 1):
                for b in range(a + 1, n + 1):
                    br = g.bracket_basis(J[a], J[b])
                    if not br:
                        continue
                    rest = J[:a] + J[a + 1:b] + J[b + 1:]
                    for k, ck in br.items():
                        srt = _sort_sign((k,) + rest)
                        if srt and srt[1] == I:
                            sgn = srt[0] * (-1 if (a + b) % 2 else 1)
                            val.add_term(m, sgn * ck)
            for a in range(n + 1):
                rest = J[:a] + J[a + 1:]
                if rest == I:
                    sgn = 1 if a % 2 else -1
                    val.add_scaled(M.action_image(J[a], m), sgn)
            for mm, d in val.items():
                out.add_term((J, mm), c * d)
    return out


def koszul_apply(g: LieAlgebra, M: LieModuleComodule, v: Mapping[tuple[Form, int], Fraction]) -> LinComb:
    """``α ⊗ m ↦ Σ_i ι_{X_i}(α) ⊗ m·θ^i`` with ``m·θ^i`` read from the coaction."""
    out = LinComb()
    for k in range(g.dim):
        for (I, m), c in iota(k, v).items():
            for mm, d in M.theta(LinComb.basis(m), k).items():
                out.add_term((I, mm), c * d)
    return out


@dataclass
class PerturbedKoszulComplex:
    """``W(g, h, M)`` with a basis per degree given as vectors in ``Λ^n g* ⊗ M``."""

    g: LieAlgebra
    h: tuple[str, ...]
    M: LieModuleComodule
    full_keys: list[list[tuple[Form, int]]]
    basis: list[list[LinComb]]

    @property
    def top(self) -> int:
        return self.g.dim

    def dims(self) -> list[int]:
        return [len(b) for b in self.basis]

    def full_index(self, n: int) -> dict[tuple[Form, int], int]:
        return {k: i for i, k in enumerate(self.full_keys[n])}

    def is_relative(self) -> bool:
        return bool(self.h)

    def coordinates(self, n: int, v: Mapping[tuple[Form, int], Fraction]) -> tuple[Fraction, ...]:
        """Coordinates of a degree-n cochain in the stored basis; ``ValueError`` if outside the subcomplex."""
        idx = self.full_index(n)
        if not self.h:
            out = [Fraction(0)] * len(self.full_keys[n])
            for k, c in v.items():
                out[idx[k]] = c
            return tuple(out)
        B = _basis_matrix(self.basis[n], idx)
        rhs = [Fraction(0)] * len(idx)
        for k, c in v.items():
            rhs[idx[k]] = c
        x = solve(B, rhs)
        if x is None:
            raise ValueError(f"cochain is not in the relative subcomplex in degree {n}")
        return x

    def vector(self, n: int, coords: Sequence[Fraction]) -> LinComb:
        out = LinComb()
        for b, c in zip(self.basis[n], coords):
            if c:
                out.add_scaled(b, c)
        return out

    def _operator_matrix(self, n: int, target: int, fn) -> SparseRationalMatrix:
        rows = len(self.basis[target]) if 0 <= target <= self.top else 0
        cols = []
        for b in self.basis[n]:
            img = fn(b)
            if rows == 0:
                cols.append([])
                continue
            cols.append(list(self.coordinates(target, img)))
        if not cols:
            return SparseRationalMatrix(rows, 0)
        return SparseRationalMatrix.from_columns(cols, rows)

    def ce(self, v: Mapping) -> LinComb:
        return ce_apply(self.g, self.M, v)

    def koszul(self, v: Mapping) -> LinComb:
        return koszul_apply(self.g, self.M, v)

    def total(self, v: Mapping) -> LinComb:
        return self.ce(v) + self.koszul(v)

    # formatting -----------------------------------------------------------
    def fmt(self, v: Mapping[tuple[Form, int], Fraction]) -> str:
        from .liealg import format_terms

        def render(key):
            I, m = key
            if not I:
                return self.M.labels[m]
            return "∧".join(f"θ^{self.g.basis[i]}" for i in I) + f"⊗{self.M.labels[m]}"

        return format_terms(v, render, sort_key=lambda k: (len(k[0]), k[0], k[1]))

    def element(self, terms: Mapping[tuple[Sequence[str], str], object]) -> LinComb:
        """Cochain from ``{(form_names, label): coeff}``; form names may come in any order."""
        out = LinComb()
        for (names, label), c in terms.items():
            idx = [self.g._idx(x) for x in names]
            srt = _sort_sign(idx)
            if srt is None:
                continue
            out.add_term((srt[1], self.M._m(label)), srt[0] * Fraction(c))
        return out


def _basis_matrix(vectors: Sequence[Mapping], idx: Mapping) -> SparseRationalMatrix:
    entries = {}
    for j, v in enumerate(vectors):
        for k, c in v.items():
            entries[(idx[k], j)] = c
    return SparseRationalMatrix(len(idx), len(vectors), entries)


def _full_keys(g: LieAlgebra, M: LieModuleComodule, n: int) -> list[tuple[Form, int]]:
    return [(I, m) for I in combinations(range(g.dim), n) for m in range(M.dim)]


def relative_subcomplex(g: LieAlgebra, h: Sequence[str], M: LieModuleComodule) -> PerturbedKoszulComplex:
    """``{f : ι(Y)f = 0, ι(Y)d_CE f = 0 for Y ∈ h}`` computed as a kernel in each degree."""
    h = tuple(h)
    if h and not g.is_subalgebra(h):
        raise ValueError(f"{list(h)} does not span a subalgebra")
    keys = [_full_keys(g, M, n) for n in range(g.dim + 1)]
    if not h:
        basis = [[LinComb.basis(k) for k in ks] for ks in keys]
        return PerturbedKoszulComplex(g, h, M, keys, basis)
    basis = []
    for n in range(g.dim + 1):
        idx_lo = {k: i for i, k in enumerate(keys[n - 1])} if n >= 1 else {}
        idx_hi = {k: i for i, k in enumerate(keys[n])}
        rows: dict[tuple[int, int], Fraction] = {}
        nrows = 0
        for y in h:
            yi = g._idx(y)
            for j, k in enumerate(keys[n]):
                e = LinComb.basis(k)
                for kk, c in iota(yi, e).items():
                    rows[(nrows + idx_lo[kk], j)] = c
                for kk, c in iota(yi, ce_apply(g, M, e)).items():
                    rows[(nrows + len(idx_lo) + idx_hi[kk], j)] = c
            nrows += len(idx_lo) + len(idx_hi)
        mat = SparseRationalMatrix(nrows, len(keys[n]), rows)
        vecs = kernel_basis(mat)
        basis.append([LinComb((keys[n][i], c) for i, c in enumerate(v) if c) for v in vecs])
    cx = PerturbedKoszulComplex(g, h, M, keys, basis)
    for n in range(g.dim + 1):
        for b in basis[n]:
            if n >= 1:
                cx.coordinates(n - 1, cx.koszul(b))
            if n < g.dim:
                cx.coordinates(n + 1, cx.ce(b))
    return cx


def perturbed_koszul_complex(g: LieAlgebra, M: LieModuleComodule) -> PerturbedKoszulComplex:
    return relative_subcomplex(g, (), M)


def ce_differential(cx: PerturbedKoszulComplex, n: int) -> SparseRationalMatrix:
    """Matrix of ``d_CE: W^n → W^{n+1}`` in the stored bases."""
    if not 0 <= n <= cx.top:
        raise IndexError(f"degree {n} out of range")
    return cx._operator_matrix(n, n + 1, cx.ce)


def koszul_differential(cx: PerturbedKoszulComplex, n: int) -> SparseRationalMatrix:
    """Matrix of ``d_K: W^n → W^{n-1}`` in the stored bases."""
    if not 0 <= n <= cx.top:
        raise IndexError(f"degree {n} out of range")
    return cx._operator_matrix(n, n - 1, cx.koszul)


def _zero_matrix_check(m: SparseRationalMatrix, what: str) -> None:
    if not m.is_zero():
        (i, j), c = next(iter(sorted(m.entries.items())))
        raise ValueError(f"{what} is not zero: entry ({i}, {j}) = {c}")


def check_differentials(cx: PerturbedKoszulComplex) -> dict[str, bool]:
    """``d_CE² = 0``, ``d_K² = 0`` and ``d_CE d_K + d_K d_CE = 0`` as matrix identities."""
    top = cx.top
    ok_ce = all((ce_differential(cx, n + 1) @ ce_differential(cx, n)).is_zero() for n in range(top - 1))
    ok_k = all((koszul_differential(cx, n - 1) @ koszul_differential(cx, n)).is_zero() for n in range(2, top + 1))
    ok_mix = True
    for n in range(top + 1):
        acc = None
        if n + 1 <= top:
            acc = koszul_differential(cx, n + 1) @ ce_differential(cx, n)
        if n >= 1:
            term = ce_differential(cx, n - 1) @ koszul_differential(cx, n)
            acc = term if acc is None else acc + term
        if acc is not None and not acc.is_zero():
            ok_mix = False
    return {"d_CE^2": ok_ce, "d_K^2": ok_k, "anticommute": ok_mix}


# ---------------------------------------------------------------------------
# cohomology


def _parity_degrees(cx: PerturbedKoszulComplex, parity: int) -> list[int]:
    return [n for n in range(cx.top + 1) if n % 2 == parity]


def _offsets(cx: PerturbedKoszulComplex, degrees: Sequence[int]) -> dict[int, int]:
    out, pos = {}, 0
    for n in degrees:
        out[n] = pos
        pos += len(cx.basis[n])
    return out


def _total_matrix(cx: PerturbedKoszulComplex, parity: int) -> SparseRationalMatrix:
    """``d_CE + d_K`` from the parity-``parity`` part to the other part."""
    src = _parity_degrees(cx, parity)
    dst = _parity_degrees(cx, 1 - parity)
    so, do = _offsets(cx, src), _offsets(cx, dst)
    nrows = sum(len(cx.basis[n]) for n in dst)
    ncols = sum(len(cx.basis[n]) for n in src)
    entries: dict[tuple[int, int], Fraction] = {}
    for n in src:
        for target, mat in ((n + 1, ce_differential(cx, n) if n < cx.top else None),
                            (n - 1, koszul_differential(cx, n) if n >= 1 else None)):
            if mat is None or target not in do:
                continue
            for (i, j), c in mat.entries.items():
                key = (do[target] + i, so[n] + j)
                entries[key] = entries.get(key, Fraction(0)) + c
    return SparseRationalMatrix(nrows, ncols, {k: v for k, v in entries.items() if v})


def _stack(cx: PerturbedKoszulComplex, parity: int, v: Mapping) -> list[Fraction]:
    degs = _parity_degrees(cx, parity)
    parts: dict[int, LinComb] = {n: LinComb() for n in degs}
    for (I, m), c in v.items():
        if len(I) % 2 != parity:
            raise ValueError("cochain has the wrong parity")
        parts[len(I)].add_term((I, m), c)
    out: list[Fraction] = []
    for n in degs:
        out.extend(cx.coordinates(n, parts[n]))
    return out


def _unstack(cx: PerturbedKoszulComplex, parity: int, coords: Sequence[Fraction]) -> LinComb:
    out = LinComb()
    pos = 0
    for n in _parity_degrees(cx, parity):
        k = len(cx.basis[n])
        out.add_scaled(cx.vector(n, coords[pos:pos + k]))
        pos += k
    return out


@dataclass
class PeriodicCohomology:
    dims: tuple[int, int]
    representatives: tuple[list[LinComb], list[LinComb]]


def periodic_cohomology(cx: PerturbedKoszulComplex) -> PeriodicCohomology:
    """ℤ/2-graded cohomology of ``(W, d_CE + d_K)`` with representatives chosen deterministically."""
    D0, D1 = _total_matrix(cx, 0), _total_matrix(cx, 1)
    _zero_matrix_check(D1 @ D0, "(d_CE + d_K)² on even cochains")
    _zero_matrix_check(D0 @ D1, "(d_CE + d_K)² on odd cochains")
    dims, reps = [], []
    for parity, (D, Dprev) in enumerate(((D0, D1), (D1, D0))):
        ker = kernel_basis(D)
        img = column_space_basis(Dprev)
        chosen: list[tuple[Fraction, ...]] = []
        base_rank = len(img)
        for v in ker:
            trial = img + chosen + [v]
            if _rank_of(trial, D.cols) > base_rank + len(chosen):
                chosen.append(v)
        dims.append(len(chosen))
        reps.append([_unstack(cx, parity, v) for v in chosen])
    return PeriodicCohomology((dims[0], dims[1]), (reps[0], reps[1]))


def _rank_of(vectors: Sequence[Sequence[Fraction]], length: int) -> int:
    if not vectors:
        return 0
    return rank(SparseRationalMatrix.from_columns([list(v) for v in vectors], length))


def _parity_of(v: Mapping) -> int:
    pars = {len(I) % 2 for (I, _m) in v}
    if len(pars) > 1:
        raise ValueError("cochain mixes parities")
    return pars.pop() if pars else 0


def is_periodic_cocycle(cx: PerturbedKoszulComplex, v: Mapping) -> bool:
    return not cx.total(v)


def is_periodic_coboundary(cx: PerturbedKoszulComplex, v: Mapping) -> bool:
    """Whether ``v`` lies in the image of ``d_CE + d_K`` (exact rank test)."""
    p = _parity_of(v)
    D = _total_matrix(cx, 1 - p)
    return solve(D, _stack(cx, p, v)) is not None


def ce_cohomology(cx: PerturbedKoszulComplex) -> list[int]:
    """Dimensions of the d_CE cohomology in degrees ``0..dim g``."""
    top = cx.top
    ranks = [rank(ce_differential(cx, n)) if n < top else 0 for n in range(top + 1)]
    dims = []
    for n in range(top + 1):
        prev = ranks[n - 1] if n >= 1 else 0
        dims.append(len(cx.basis[n]) - ranks[n] - prev)
    return dims


def lie_cohomology(g: LieAlgebra, M: LieModuleComodule, h: Sequence[str] = ()) -> list[int]:
    return ce_cohomology(relative_subcomplex(g, h, M.with_coaction(None)))


# ---------------------------------------------------------------------------
# Jara–Stefan filtration and E1


@dataclass
class Filtration:
    """``F_0M ⊆ F_1M ⊆ … ⊆ F_pM = M`` as spanning vectors in module coordinates."""

    M: LieModuleComodule
    steps: list[list[tuple[Fraction, ...]]]

    def dims(self) -> list[int]:
        return [len(s) for s in self.steps]

    def contains(self, j: int, v: Sequence[Fraction]) -> bool:
        base = self.steps[j]
        return _rank_of(base + [tuple(v)], self.M.dim) == len(base)


def _coaction_matrix(M: LieModuleComodule) -> tuple[SparseRationalMatrix, dict]:
    idx = {(x, m): x * M.dim + m for x in range(M.g.dim) for m in range(M.dim)}
    entries = {}
    for m in range(M.dim):
        for key, c in M.coaction_image(m).items():
            entries[(idx[key], m)] = c
    return SparseRationalMatrix(len(idx), M.dim, entries), idx


def jara_stefan_filtration(M: LieModuleComodule) -> Filtration:
    """``F_0M = M^co``, ``F_{p+1}M = {m : m[-1] ⊗ m[0] ∈ g ⊗ F_pM}``."""
    C, idx = _coaction_matrix(M)
    n = M.dim
    steps: list[list[tuple[Fraction, ...]]] = []
    current: list[tuple[Fraction, ...]] = []
    while True:
        # unknowns: x ∈ M and y ∈ g ⊗ F_p with C x = Σ y
        cols = [list(C.column(j)) for j in range(n)]
        for x in range(M.g.dim):
            for v in current:
                col = [Fraction(0)] * C.rows
                for m, c in enumerate(v):
                    if c:
                        col[idx[(x, m)]] = -c
                cols.append(col)
        mat = SparseRationalMatrix.from_columns(cols, C.rows)
        ker = [tuple(v[:n]) for v in kernel_basis(mat)]
        nxt = column_space_basis(SparseRationalMatrix.from_columns([list(v) for v in ker], n)) if ker else []
        if len(nxt) == len(current):
            if len(nxt) != n:
                raise ValueError("coaction is not locally conilpotent; the filtration stops short of M")
            break
        steps.append([tuple(v) for v in nxt])
        current = [tuple(v) for v in nxt]
        if len(current) == n:
            break
    return Filtration(M, steps)


def _express(vectors: Sequence[Sequence[Fraction]], v: Sequence[Fraction], length: int) -> tuple[Fraction, ...] | None:
    if not vectors:
        return () if not any(v) else None
    return solve(SparseRationalMatrix.from_columns([list(x) for x in vectors], length), list(v))


def quotient_module(M: LieModuleComodule, lower: Sequence[Sequence[Fraction]],
                    upper: Sequence[Sequence[Fraction]], name: str = "") -> LieModuleComodule:
    """``upper / lower`` with the induced action and zero coaction."""
    n = M.dim
    lower = [tuple(v) for v in lower]
    reps: list[tuple[Fraction, ...]] = []
    for v in upper:
        if _rank_of(lower + reps + [tuple(v)], n) > len(lower) + len(reps):
            reps.append(tuple(v))
    labels = []
    for v in reps:
        lc = LinComb((i, c) for i, c in enumerate(v) if c)
        labels.append(M.fmt(lc))
    full = lower + reps
    action: dict[str, dict[str, dict[str, Fraction]]] = {}
    for gi, gname in enumerate(M.g.basis):
        tab = {}
        for r, v in zip(labels, reps):
            img = M.act(LinComb((i, c) for i, c in enumerate(v) if c), gi)
            vec = [Fraction(img.get(i, 0)) for i in range(n)]
            x = _express(full, vec, n)
            if x is None:
                raise ValueError(f"{M.fmt(img)} leaves the filtration step")
            q = {labels[k]: c for k, c in enumerate(x[len(lower):]) if c}
            if q:
                tab[r] = q
        if tab:
            action[gname] = tab
    return LieModuleComodule(M.g, labels, action, None, name=name)


def check_filtration_respected(M: LieModuleComodule, filt: Filtration) -> None:
    """Every step is stable under the g-action and under ``m ↦ m·θ^k``; raises otherwise."""
    n = M.dim
    for j, step in enumerate(filt.steps):
        for v in step:
            lc = LinComb((i, c) for i, c in enumerate(v) if c)
            images = [(f"·{x}", M.act(lc, gi)) for gi, x in enumerate(M.g.basis)]
            images += [(f"·θ^{x}", M.theta(lc, k)) for k, x in enumerate(M.g.basis)]
            for what, img in images:
                vec = [Fraction(img.get(i, 0)) for i in range(n)]
                if not filt.contains(j, vec):
                    raise ValueError(f"F_{j} not preserved: ({M.fmt(lc)}){what} = {M.fmt(img)}")


def spectral_e1(cx: PerturbedKoszulComplex, filt: Filtration) -> dict[int, list[int]]:
    """``E_1^{j,i} = H^{i+j}(W(g, h, F_jM/F_{j-1}M))`` as ``{j: [dims in CE degree 0..dim g]}``."""
    M = cx.M
    check_filtration_respected(M, filt)
    table: dict[int, list[int]] = {}
    prev: list[tuple[Fraction, ...]] = []
    for j, step in enumerate(filt.steps):
        Q = quotient_module(M, prev, step, name=f"F_{j}/F_{j - 1}")
        table[j] = ce_cohomology(relative_subcomplex(cx.g, cx.h, Q)) if Q.dim else [0] * (cx.top + 1)
        prev = step
    return table


def fold_e1(table: Mapping[int, Sequence[int]]) -> tuple[int, int]:
    """Total even/odd dimensions of an E1 table."""
    even = sum(d for row in table.values() for n, d in enumerate(row) if n % 2 == 0)
    odd = sum(d for row in table.values() for n, d in enumerate(row) if n % 2 == 1)
    return even, odd
