"""Stratum invariants: twisted supports, stable level subsets, flag data.

For an element x = w tau with tau of length zero, the twisted support is the
set of letters of a reduced word of w closed under the node map
Ad(tau) . sigma.  A stratum is basic exactly when that closure generates a
finite group.  Basic strata carry a finite flag datum: the closure together
with the largest subset of the level that x sigma-conjugates into itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from ekor_atlas.admissible import (
    AdmissibleSet,
    is_left_minimal,
    kw_elements,
    parahoric_label,
)
from ekor_atlas.affine import ExtAffineElement, ExtendedAffineWeylGroup, GroupError
from ekor_atlas.coxeter import DiagramMap, format_finite_type


@dataclass(frozen=True)
class SigmaSupport:
    """Letters of a reduced word and their closure under the twist."""

    raw: frozenset[int]
    closure: frozenset[int]
    twist: DiagramMap


def support_twist(group: ExtendedAffineWeylGroup, x: ExtAffineElement) -> DiagramMap:
    """Node map s -> tau sigma(s) tau^-1 for the length-zero part tau of x."""
    omega = group.omega_part(x)
    return omega.diagram_map.compose(group.sigma_diagram)


def sigma_support(group: ExtendedAffineWeylGroup,
                  x: ExtAffineElement) -> SigmaSupport:
    rd = group.reduced_word(x)
    twist = rd.omega.diagram_map.compose(group.sigma_diagram)
    raw = frozenset(rd.word)
    return SigmaSupport(raw, twist.orbit_closure(raw), twist)


def is_basic(group: ExtendedAffineWeylGroup, supp: SigmaSupport) -> bool:
    """Basic means the closed support still generates a finite group."""
    return group.affine_coxeter.is_finite_parabolic(supp.closure)


def is_basic_element(group: ExtendedAffineWeylGroup, x: ExtAffineElement) -> bool:
    return is_basic(group, sigma_support(group, x))


def stable_level_subset(group: ExtendedAffineWeylGroup, x: ExtAffineElement,
                        nodes: Iterable[int]) -> frozenset[int]:
    """Largest subset I of the level with x sigma(I) x^-1 = I.

    Greatest fixed point: repeatedly drop nodes whose twisted conjugate by x
    is not a simple reflection inside the current set.
    """
    label = parahoric_label(group, nodes)
    xinv = group.inv(x)
    cur = label
    while True:
        kept = set()
        for i in cur:
            s = group.simple_reflections[group.sigma_diagram(i)]
            node = group.reflection_node(group.mult(group.mult(x, s), xinv))
            if node is not None and node in cur:
                kept.add(i)
        nxt = frozenset(kept)
        if nxt == cur:
            return cur
        cur = nxt


def twist_orbits(twist: DiagramMap, nodes: frozenset[int]) -> list[frozenset[int]]:
    """Orbits of the node map on a stable node set."""
    remaining = set(nodes)
    orbits = []
    while remaining:
        start = min(remaining)
        orbit = {start}
        cur = twist(start)
        while cur != start:
            if cur not in remaining:
                raise GroupError("node set is not stable under the twist")
            orbit.add(cur)
            cur = twist(cur)
        remaining -= orbit
        orbits.append(frozenset(orbit))
    return sorted(orbits, key=min)


def is_sigma_coxeter(group: ExtendedAffineWeylGroup, x: ExtAffineElement) -> bool:
    """Reduced word uses exactly one letter from each twist orbit of its closure."""
    rd = group.reduced_word(x)
    supp = sigma_support(group, x)
    counts: dict[int, int] = {}
    for letter in rd.word:
        counts[letter] = counts.get(letter, 0) + 1
    for orbit in twist_orbits(supp.twist, supp.closure):
        if sum(counts.get(i, 0) for i in orbit) != 1:
            return False
    return True


@dataclass(frozen=True)
class DLDatum:
    """Finite flag datum of a basic stratum."""

    ambient_nodes: frozenset[int]
    parabolic_nodes: frozenset[int]
    ambient_type: str
    dimension: int
    frobenius_nodes: tuple[int, ...]
    sigma_coxeter: bool
    stabilizes_parabolic: bool


def dl_datum(group: ExtendedAffineWeylGroup, x: ExtAffineElement,
             nodes: Iterable[int]) -> DLDatum:
    label = parahoric_label(group, nodes)
    if not is_left_minimal(group, x, label):
        raise GroupError("element is not minimal in its level coset")
    supp = sigma_support(group, x)
    if not is_basic(group, supp):
        raise GroupError("stratum is not basic, no finite flag datum exists")
    iset = stable_level_subset(group, x, label)
    ambient = supp.closure | iset
    if not group.affine_coxeter.is_finite_parabolic(ambient):
        raise GroupError("flag datum is not finite")
    label_type = format_finite_type(group.affine_coxeter.finite_type(ambient))
    return DLDatum(
        ambient_nodes=ambient,
        parabolic_nodes=iset,
        ambient_type=label_type,
        dimension=group.length(x),
        frobenius_nodes=supp.twist.images,
        sigma_coxeter=is_sigma_coxeter(group, x),
        stabilizes_parabolic=all(supp.twist(i) in iset for i in iset),
    )


@dataclass(frozen=True)
class StratumRecord:
    """One stratum at a fixed level: the element and all its invariants."""

    element: ExtAffineElement
    word: tuple[int, ...]
    length: int
    level: tuple[int, ...]
    basic: bool
    support: SigmaSupport
    stable_subset: frozenset[int]
    newton: tuple[Fraction, ...]
    datum: Optional[DLDatum]


def stratum_report(adm: AdmissibleSet,
                   nodes: Iterable[int]) -> tuple[StratumRecord, ...]:
    """Classify every stratum of the admissible set at the given level."""
    group = adm.group
    label = parahoric_label(group, nodes)
    records = []
    for x in kw_elements(adm, label):
        supp = sigma_support(group, x)
        basic = is_basic(group, supp)
        records.append(StratumRecord(
            element=x,
            word=group.reduced_word(x).word,
            length=group.length(x),
            level=tuple(sorted(label)),
            basic=basic,
            support=supp,
            stable_subset=stable_level_subset(group, x, label),
            newton=group.newton_vector(x),
            datum=dl_datum(group, x, label) if basic else None,
        ))
    return tuple(records)


def record_to_json(group: ExtendedAffineWeylGroup, rec: StratumRecord) -> dict:
    dl = None
    if rec.datum is not None:
        dl = {
            "ambient": sorted(rec.datum.ambient_nodes),
            "parabolic": sorted(rec.datum.parabolic_nodes),
            "type": rec.datum.ambient_type,
            "dim": rec.datum.dimension,
            "frobenius": list(rec.datum.frobenius_nodes),
            "sigma_coxeter": rec.datum.sigma_coxeter,
            "stabilizes_parabolic": rec.datum.stabilizes_parabolic,
        }
    return {
        "w": group.element_to_json(rec.element),
        "word": list(rec.word),
        "length": rec.length,
        "level": list(rec.level),
        "basic": rec.basic,
        "supp_sigma": {
            "raw": sorted(rec.support.raw),
            "closure": sorted(rec.support.closure),
        },
        "i_set": sorted(rec.stable_subset),
        "newton": [str(c) for c in rec.newton],
        "dl": dl,
    }
