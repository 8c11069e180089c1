"""Ready-made algebras, modules and cocycles used by the fixtures and tests."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cache
from importlib import resources

from .hopfalg import (BicrossedHopf, HopfStructure, ModularPair, bicrossed_build, compute_modular_pair,
                      lie_hopf_from_matched_pair)
from .liealg import LieAlgebra, LieModuleComodule, MatchedPair, truncated_symmetric_module
from .saydmod import FDModule, lift_lie_to_hopf, twist_by_mpi

SL2_BRACKETS = {("Y", "X"): {"X": 1}, ("Z", "X"): {"Y": 1}, ("Z", "Y"): {"Z": 1}}

# Weights of the untwisted ad Y action on generators and module labels.
SCHWARZIAN_WEIGHTS = {"Y": 0, "X": 1, "d1": 1, "1_M": 0, "RX": -1, "RY": 0, "RZ": 1}

ODD_F_PART = "1_M ⊗ d1"
ODD_U_PART = "RY ⊗ X + 2*RZ ⊗ Y"
ODD_COCYCLE = "1_M ⊗ d1 + RY ⊗ X + RX ⊗ d1*X + RY ⊗ d1*Y + 2*RZ ⊗ Y"

EVEN_U_PART = ("1_M ⊗ X ⊗ Y - 1_M ⊗ Y ⊗ X - RX ⊗ X*Y ⊗ X - RX ⊗ Y ⊗ X^2 + RY ⊗ X*Y ⊗ Y"
               " + RY ⊗ X ⊗ Y^2 - RY ⊗ Y ⊗ X")
EVEN_MIXED_PART = ("-RX ⊗ d1 ⊗ X*Y^2 + 2/3*RX ⊗ d1^2 ⊗ Y^3 + 1/3*RY ⊗ d1 ⊗ Y^3 - 1/4*RX ⊗ d1^2 ⊗ Y^2"
                   " - 1/2*RY ⊗ d1 ⊗ Y^2")
EVEN_COCYCLE = ("1_M ⊗ X ⊗ Y - 1_M ⊗ Y ⊗ X + 1_M ⊗ Y ⊗ d1*Y - RX ⊗ X*Y ⊗ X - RX ⊗ Y^2 ⊗ d1*X"
                " - RX ⊗ Y ⊗ X^2 + RY ⊗ X*Y ⊗ Y + RY ⊗ Y^2 ⊗ d1*Y + RY ⊗ X ⊗ Y^2 + RY ⊗ Y ⊗ d1*Y^2"
                " - RY ⊗ Y ⊗ X - RX ⊗ X*Y^2 ⊗ d1 - 1/3*RX ⊗ Y^3 ⊗ d1^2 + 1/3*RY ⊗ Y^3 ⊗ d1"
                " - 1/4*RX ⊗ Y^2 ⊗ d1^2 - 1/2*RY ⊗ Y^2 ⊗ d1")


def sl2() -> LieAlgebra:
    return LieAlgebra(["X", "Y", "Z"], SL2_BRACKETS, name="sl2")


def sl2_split() -> MatchedPair:
    return MatchedPair.from_splitting(sl2(), ["X", "Y"], ["Z"])


def gl2_brackets() -> dict[tuple[str, str], dict[str, int]]:
    """``[Y^i_j, Y^k_l] = δ^k_j Y^i_l − δ^i_l Y^k_j`` on the basis ``Yij``."""
    pairs = [(i, j) for i in (1, 2) for j in (1, 2)]
    out: dict[tuple[str, str], dict[str, int]] = {}
    for (i, j), (k, l) in itertools.combinations(pairs, 2):
        img: dict[str, int] = {}
        if k == j:
            img[f"Y{i}{l}"] = img.get(f"Y{i}{l}", 0) + 1
        if i == l:
            img[f"Y{k}{j}"] = img.get(f"Y{k}{j}", 0) - 1
        img = {n: c for n, c in img.items() if c}
        if img:
            out[(f"Y{i}{j}", f"Y{k}{l}")] = img
    return out


def gl2() -> LieAlgebra:
    return LieAlgebra(["Y11", "Y12", "Y21", "Y22"], gl2_brackets(), name="gl2")


def gl2_split() -> MatchedPair:
    return MatchedPair.from_splitting(gl2(), ["Y11", "Y12"], ["Y21", "Y22"])


@dataclass(frozen=True)
class Schwarzian:
    """The sl2 split, its bicrossed product H and the lifted modules over it."""

    g: LieAlgebra
    mp: MatchedPair
    hs: HopfStructure
    H: BicrossedHopf
    lie_module: LieModuleComodule
    M: FDModule
    pair: ModularPair
    M_delta: FDModule
    C_delta: FDModule


@cache
def schwarzian() -> Schwarzian:
    g = sl2()
    mp = MatchedPair.from_splitting(g, ["X", "Y"], ["Z"])
    hs = lie_hopf_from_matched_pair(mp, ["d1"])
    H = bicrossed_build(hs)
    lie_module = truncated_symmetric_module(g, 1, character={}, name="S(sl2*)_2")
    M = lift_lie_to_hopf(lie_module, mp, H, name="M")
    pair = compute_modular_pair(hs)
    M_delta = twist_by_mpi(M, pair, name="M_delta")
    C_delta = twist_by_mpi(FDModule(H, ["1"], {}, None, name="C"), pair, name="C_delta")
    return Schwarzian(g, mp, hs, H, lie_module, M, pair, M_delta, C_delta)


FIXTURES = ("sl2-split", "gl2-split", "schwarzian-sayd", "sl2-truncated", "odd-cocycle", "even-cocycle")


def fixture_text(name: str) -> str:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}")
    return resources.files("hopfcyc").joinpath("fixtures", f"{name}.txt").read_text(encoding="utf-8")
