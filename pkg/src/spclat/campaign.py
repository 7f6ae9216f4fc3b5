"""Seeded random instances for the support-formula property campaigns.

Each instance fixes a lattice-ordered group (``Z``, ``Z^2`` with the
product order, or ``Z^2`` with the cone spanned by ``(1,0)`` and
``(1,1)``), a window of at most three positive elements, a small Zariski
lattice, a random presentation ``F``, a larger saturated set ``B2`` and a
translation vector.  All randomness comes from ``random.Random(seed)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

from . import balmer
from .dlat import DistLattice
from .oag import ArchSemilattice, OrderedAbelianGroup, arch, try_join
from .oracle import distributive_lattices

GROUPS = {
    "Z": ((1,), ((1,),)),
    "Z2": ((2,), ((1, 0), (0, 1))),
    "Z2_skew": ((2,), ((1, 0), (1, 1))),
}


# differences inside saturated sets reach about 10 in each coordinate
CAMPAIGN_BOUND = 32


@lru_cache(maxsize=None)
def group(name: str) -> OrderedAbelianGroup:
    (rank,), cone = GROUPS[name]
    return OrderedAbelianGroup(rank, (), cone, CAMPAIGN_BOUND)


@dataclass(frozen=True)
class Instance:
    seed: int
    group: OrderedAbelianGroup
    arch: ArchSemilattice
    zar: DistLattice
    F: balmer.FilteredPresentation
    B2: balmer.SaturatedSet
    offset: tuple


def _point(rng: random.Random, A: OrderedAbelianGroup, radius: int = 3) -> tuple:
    return tuple(rng.randint(-radius, radius) for _ in range(A.dim))


def _positive(rng: random.Random, A: OrderedAbelianGroup) -> tuple:
    while True:
        x = A.sum(A.scale(rng.randint(0, 2), g) for g in A.generators)
        if any(x):
            return x


def random_instance(seed: int) -> Instance:
    rng = random.Random(seed)
    A = group(rng.choice(sorted(GROUPS)))
    W = arch(A, [_positive(rng, A) for _ in range(rng.randint(1, 3))])
    zar = rng.choice(distributive_lattices(5))
    B = balmer.saturate(A, [_point(rng, A) for _ in range(rng.randint(1, 4))])
    F = balmer.FilteredPresentation.from_mapping(B, zar, {b: rng.choice(zar.elements) for b in B})
    B2 = balmer.saturate(A, list(B) + [_point(rng, A) for _ in range(rng.randint(1, 3))])
    return Instance(seed, A, W, zar, F, B2, _point(rng, A))


def well_definedness_failures(inst: Instance) -> list[str]:
    s = balmer.day_support(inst.F, inst.arch)
    out = []
    if balmer.day_support(balmer.extend_presentation(inst.F, inst.B2), inst.arch) != s:
        out.append(f"seed {inst.seed}: support changes under extension")
    if balmer.day_support(balmer.shift(inst.F, inst.offset), inst.arch) != s:
        out.append(f"seed {inst.seed}: support changes under shift")
    return out


def theta_law_failures(inst: Instance) -> list[str]:
    A, W, B = inst.group, inst.arch, inst.B2
    image = balmer.arch_free(W).lattice
    out = []
    for a in B:
        whole = balmer.theta(B, a, W)
        if whole not in image:
            out.append(f"seed {inst.seed}: Theta(B, {A.fmt(a)}) outside the free image")
        pieces = frozenset(W.labels)
        for b in B:
            small = balmer.SaturatedSet(A, (a, b, try_join(A, a, b)))
            pieces &= balmer.theta(small, a, W)
        if pieces != whole:
            out.append(f"seed {inst.seed}: intersection law fails at {A.fmt(a)}")
    return out
