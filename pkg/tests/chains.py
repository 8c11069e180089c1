"""Random chains and the cocyclic identity battery shared by the cyclic tests."""

import random
from fractions import Fraction

from hopfcyc.exactnum import LinComb


def random_h_key(rng: random.Random, H, max_degree: int, normalized: bool = False):
    while True:
        f = tuple(rng.randint(0, 2) for _ in range(H.F.n))
        u = tuple(rng.randint(0, 1) for _ in range(H.U.n))
        if sum(f) + sum(u) > max_degree:
            continue
        if normalized and (f, u) == H.unit_key:
            continue
        return f, u


def random_chain(rng: random.Random, M, q: int, terms: int = 3, normalized: bool = False) -> LinComb:
    """Element of ``M ⊗ H^{⊗q}``; factors of degree ≤ 1 at q = 3 keep the expansion small."""
    max_degree = 2 if q < 3 else 1
    x = LinComb()
    for _ in range(terms):
        hs = tuple(random_h_key(rng, M.H, max_degree, normalized) for _ in range(q))
        x.add_term((rng.randrange(M.dim), hs), Fraction(rng.randint(-3, 3)))
    return x


def random_bichain(rng: random.Random, M, p: int, q: int, terms: int = 3, normalized: bool = False) -> LinComb:
    """Element of ``M ⊗ F^{⊗p} ⊗ U^{⊗q}``."""
    H = M.H
    x = LinComb()
    for _ in range(terms):
        fs = tuple(tuple(rng.randint(1 if normalized else 0, 2) for _ in range(H.F.n)) for _ in range(p))
        us = []
        for _ in range(q):
            u = tuple(rng.randint(0, 1) for _ in range(H.U.n))
            if normalized and not any(u):
                u = (1,) + u[1:]
            us.append(u)
        x.add_term((rng.randrange(M.dim), fs, tuple(us)), Fraction(rng.randint(-3, 3)))
    return x


def cocyclic_failures(ops, x, q: int) -> list[str]:
    """Names of the cocyclic identities that fail on the degree-q element x."""
    bad = []
    if ops.tau_power(x, q + 1) != x:
        bad.append("τ^{q+1}")
    for j in range(q + 2):
        for i in range(j):
            if ops.face(j, ops.face(i, x)) != ops.face(i, ops.face(j - 1, x)):
                bad.append(f"∂{j}∂{i}")
    for i in range(1, q + 2):
        if ops.tau(ops.face(i, x)) != ops.face(i - 1, ops.tau(x)):
            bad.append(f"τ∂{i}")
    if ops.tau(ops.face(0, x)) != ops.face(q + 1, x):
        bad.append("τ∂0")
    if q >= 1:
        for i in range(1, q):
            if ops.tau(ops.degeneracy(i, x)) != ops.degeneracy(i - 1, ops.tau(x)):
                bad.append(f"τσ{i}")
        if ops.tau(ops.degeneracy(0, x)) != ops.degeneracy(q - 1, ops.tau(ops.tau(x))):
            bad.append("τσ0")
        for i in range(q + 1):
            for j in range(q):
                lhs = ops.degeneracy(j, ops.face(i, x))
                if i < j:
                    rhs = ops.face(i, ops.degeneracy(j - 1, x))
                elif i in (j, j + 1):
                    rhs = x
                else:
                    rhs = ops.face(i - 1, ops.degeneracy(j, x))
                if lhs != rhs:
                    bad.append(f"σ{j}∂{i}")
        for i in range(q - 1):
            for j in range(i + 1, q):
                if ops.degeneracy(i, ops.degeneracy(j, x)) != ops.degeneracy(j - 1, ops.degeneracy(i, x)):
                    bad.append(f"σ{i}σ{j}")
    return bad


def mixed_failures(ops, x) -> list[str]:
    bad = []
    if ops.b(ops.b(x)):
        bad.append("b²")
    Bx = ops.B_full(x)
    if ops.B_full(Bx):
        bad.append("B²")
    if ops.b(Bx) + ops.B_full(ops.b(x)):
        bad.append("bB+Bb")
    return bad
