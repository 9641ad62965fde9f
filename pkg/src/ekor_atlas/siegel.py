"""Symplectic similitude contexts on 2g letters.

The cocharacter lattice is the sublattice of Z^(2g) with constant pair sums
x_i + x_(2g+1-i); simple roots are x_i - x_(i+1) and the extra affine
reflection is the swap of the outer pair shifted by the highest coroot.  The
minuscule cocharacter is (1,...,1,0,...,0).

This module also carries the closed-form side of the two comparison modes:
closed supports and canonical stable subsets indexed by a defect c, and the
parameterization of basic strata at maximal level by minimal coset
representatives of small hyperoctahedral groups.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from ekor_atlas.admissible import (
    AdmissibleSet,
    admissible_set,
    kw_elements,
    parahoric_label,
)
from ekor_atlas.affine import (
    ExtAffineElement,
    ExtendedAffineWeylGroup,
    GroupError,
    OmegaElement,
)
from ekor_atlas.coxeter import format_finite_type
from ekor_atlas.ekor import StratumRecord, stratum_report
from ekor_atlas.rootdata import RootDatum


def siegel_datum(g: int) -> RootDatum:
    """Root datum of the similitude group on 2g letters, split form."""
    if g < 1:
        raise GroupError("g must be at least 1")
    d = 2 * g

    def e(*idx):
        v = [0] * d
        for i in idx:
            v[i] += 1
        return tuple(v)

    def e_minus(i, j):
        v = [0] * d
        v[i] = 1
        v[j] = -1
        return tuple(v)

    def perm_matrix(*swaps):
        perm = list(range(d))
        for a, b in swaps:
            perm[a], perm[b] = perm[b], perm[a]
        return tuple(tuple(int(perm[c] == r) for c in range(d))
                     for r in range(d))

    basis = [e_minus(i, d - 1 - i) for i in range(g)]
    basis.append(e(*range(g, d)))
    roots = [e_minus(i, i + 1) for i in range(g)]
    coroots = []
    weyl = []
    for i in range(g - 1):
        v = [0] * d
        v[i] = 1
        v[i + 1] = -1
        v[d - 2 - i] = 1
        v[d - 1 - i] = -1
        coroots.append(tuple(v))
        weyl.append(perm_matrix((i, i + 1), (d - 2 - i, d - 1 - i)))
    coroots.append(e_minus(g - 1, g))
    weyl.append(perm_matrix((g - 1, g)))
    return RootDatum(dim=d, basis=tuple(basis), simple_roots=tuple(roots),
                     simple_coroots=tuple(coroots), ambient_weyl=tuple(weyl))


@dataclass
class SiegelContext:
    """A genus together with its group, cocharacter and named levels."""

    g: int
    datum: RootDatum
    group: ExtendedAffineWeylGroup
    mu: tuple[int, ...]
    tau: OmegaElement
    iwahori: frozenset[int]
    hyperspecial: frozenset[int]
    _min_reps: Optional[tuple[ExtAffineElement, ...]] = field(default=None, repr=False)

    def adm(self) -> AdmissibleSet:
        return admissible_set(self.group, self.mu)

    def kw(self, nodes: Iterable[int]) -> tuple[ExtAffineElement, ...]:
        return kw_elements(self.adm(), nodes)

    def report(self, nodes: Iterable[int]) -> tuple[StratumRecord, ...]:
        return stratum_report(self.adm(), nodes)

    def level_nodes(self, spec: str) -> frozenset[int]:
        """Parse a level name: iwahori, hyperspecial, or comma separated nodes."""
        text = spec.strip().lower()
        if text == "iwahori":
            return self.iwahori
        if text == "hyperspecial":
            return self.hyperspecial
        try:
            nodes = frozenset(int(p) for p in text.split(",") if p.strip() != "")
        except ValueError:
            raise GroupError(f"cannot parse level {spec!r}") from None
        return parahoric_label(self.group, nodes)

    # ------------------------------------------------ minimal coset reps

    def finite_elements(self) -> tuple[ExtAffineElement, ...]:
        return self.group.parabolic_subgroup_elements(self.hyperspecial)

    def min_reps(self) -> tuple[ExtAffineElement, ...]:
        """Minimal representatives of the finite Weyl group modulo its
        permutation part: no left descent among the first g-1 nodes."""
        if self._min_reps is None:
            group = self.group
            left = frozenset(range(1, self.g))
            out = []
            for w in self.finite_elements():
                lw = group.length(w)
                if all(group.length(group.mult(group.simple_reflections[i], w)) > lw
                       for i in left):
                    out.append(w)
            self._min_reps = tuple(sorted(out, key=group.sort_key))
        return self._min_reps

    def embedded_min_reps(self, c: int) -> tuple[ExtAffineElement, ...]:
        """Minimal representatives of the rank-c analogue, relettered to the
        last c finite nodes, checked against the support description."""
        if c < 0:
            return ()
        if c == 0:
            return (self.group.identity,)
        g = self.g
        group = self.group
        window = frozenset(range(g - c + 1, g + 1))
        left = frozenset(range(g - c + 1, g))
        out = []
        for w in group.parabolic_subgroup_elements(window):
            lw = group.length(w)
            if all(group.length(group.mult(group.simple_reflections[i], w)) > lw
                   for i in left):
                out.append(w)
        out = tuple(sorted(out, key=group.sort_key))
        by_support = tuple(w for w in self.min_reps()
                           if set(group.reduced_word(w).word) <= window)
        if out != by_support:
            raise GroupError("relettered representatives disagree with the support description")
        return out

    # ---------------------------------------------------- closed forms

    def superspecial_index(self, raw_support: Iterable[int]) -> Optional[int]:
        """Least c with both s_c and s_(g-c) missing from the raw support.

        Defined exactly when the twisted support closure stays finite; the
        closure is symmetric under i -> g - i, so finiteness means some
        mirror pair of nodes is omitted.
        """
        raw = frozenset(raw_support)
        for c in range(self.g // 2 + 1):
            if raw.isdisjoint({c, self.g - c}):
                return c
        return None

    def closed_support(self, c: int) -> frozenset[int]:
        """Support closure of any basic stratum of defect c at maximal level."""
        if c == 0:
            return frozenset()
        g = self.g
        return frozenset(range(c)) | frozenset(range(g - c + 1, g + 1))

    def closed_stable_subset(self, c: int) -> frozenset[int]:
        """Stable level subset of the canonical defect-c stratum."""
        g = self.g
        if c == 0:
            return frozenset(range(1, g))
        return frozenset(range(c + 1, g - c))

    def canonical_basic_element(self, c: int) -> ExtAffineElement:
        """tau times the sign flips s_g s_(g-1) ... s_(g-c+1)."""
        group = self.group
        x = self.tau.element
        for i in range(self.g, self.g - c, -1):
            x = group.mult(x, group.simple_reflections[i])
        return x

    # ------------------------------------------------------- basic strata

    def eo_strata(self) -> tuple["EOStratum", ...]:
        """Predicted basic strata at maximal level, labeled by defect."""
        group = self.group
        out = []
        for c in range(self.g // 2 + 1):
            smaller = set(self.embedded_min_reps(c - 1))
            for w in self.embedded_min_reps(c):
                if w in smaller:
                    continue
                word = group.reduced_word(w).word
                label = f"c{c}:" + ("-".join(f"s{i}" for i in word) or "e")
                out.append(EOStratum(
                    label=label,
                    defect=c,
                    weyl_word=word,
                    element=group.mult(self.tau.element, w),
                    dimension=group.length(w),
                ))
        labels = [s.label for s in out]
        if len(set(labels)) != len(labels):
            raise GroupError("stratum labels collide")
        return tuple(sorted(out, key=lambda s: (s.dimension, s.label)))

    def compare(self, mode: str) -> "ComparisonReport":
        if mode == "gortz-yu":
            return self._compare_iwahori()
        if mode == "hoeve":
            return self._compare_hyperspecial()
        raise GroupError(f"unknown comparison mode {mode!r}")

    def _compare_iwahori(self) -> "ComparisonReport":
        """Engine basicness against the omitted-mirror-pair criterion."""
        report = self.report(self.iwahori)
        predicted = 0
        labels = []
        for rec in report:
            index = self.superspecial_index(rec.support.raw)
            if (index is not None) != rec.basic:
                raise GroupError(
                    f"basic flags disagree at word {rec.word}: "
                    f"closure says {rec.basic}, index says {index is not None}")
            if rec.basic:
                predicted += 1
                labels.append(f"c{index}:len{rec.length}:"
                              + ("-".join(f"s{i}" for i in rec.word) or "e"))
        basic = sum(1 for rec in report if rec.basic)
        return ComparisonReport(mode="gortz-yu", g=self.g,
                                level=tuple(sorted(self.iwahori)),
                                strata=len(report), basic=basic,
                                expected=predicted, labels=tuple(labels))

    def _compare_hyperspecial(self) -> "ComparisonReport":
        """Engine basic strata against the coset-representative prediction."""
        report = self.report(self.hyperspecial)
        basic = [rec for rec in report if rec.basic]
        strata = self.eo_strata()
        got = {rec.element for rec in basic}
        want = {s.element for s in strata}
        if got != want:
            raise GroupError("basic strata differ from the predicted representatives")
        expected = 2 ** (self.g // 2)
        if len(strata) != expected:
            raise GroupError(
                f"expected {expected} basic strata, found {len(strata)}")
        by_element = {rec.element: rec for rec in basic}
        for s in strata:
            rec = by_element[s.element]
            c = self.superspecial_index(rec.support.raw)
            if c != s.defect:
                raise GroupError(f"defect mismatch at {s.label}")
            if rec.support.closure != self.closed_support(c):
                raise GroupError(f"support closure mismatch at {s.label}")
            if rec.length != s.dimension:
                raise GroupError(f"dimension mismatch at {s.label}")
        for c in range(self.g // 2 + 1):
            x = self.canonical_basic_element(c)
            rec = by_element.get(x)
            if rec is None:
                raise GroupError(f"canonical defect-{c} stratum is not basic")
            if rec.stable_subset != self.closed_stable_subset(c):
                raise GroupError(f"stable subset mismatch at defect {c}")
        return ComparisonReport(mode="hoeve", g=self.g,
                                level=tuple(sorted(self.hyperspecial)),
                                strata=len(report), basic=len(basic),
                                expected=expected,
                                labels=tuple(s.label for s in strata))


@dataclass(frozen=True)
class EOStratum:
    """A predicted basic stratum at maximal level."""

    label: str
    defect: int
    weyl_word: tuple[int, ...]
    element: ExtAffineElement
    dimension: int


@dataclass(frozen=True)
class ComparisonReport:
    """Outcome of one comparison mode; construction already hard-checked."""

    mode: str
    g: int
    level: tuple[int, ...]
    strata: int
    basic: int
    expected: int
    labels: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "g": self.g,
            "level": list(self.level),
            "strata": self.strata,
            "basic": self.basic,
            "expected": self.expected,
            "labels": list(self.labels),
            "ok": self.basic == self.expected,
        }


_CONTEXTS: dict[int, SiegelContext] = {}


def siegel_context(g: int) -> SiegelContext:
    got = _CONTEXTS.get(g)
    if got is not None:
        return got
    datum = siegel_datum(g)
    group = ExtendedAffineWeylGroup(datum)
    mu = (1,) * g + (0,) * g
    tau = group.length_zero_element(mu)
    ctx = SiegelContext(
        g=g,
        datum=datum,
        group=group,
        mu=mu,
        tau=tau,
        iwahori=frozenset(),
        hyperspecial=frozenset(range(1, g + 1)),
    )
    _check_context(ctx)
    _CONTEXTS[g] = ctx
    return ctx


def _check_context(ctx: SiegelContext) -> None:
    """Construction-time facts: generator shapes, diagram, class map."""
    g, d = ctx.g, 2 * ctx.g
    group = ctx.group

    fin = format_finite_type(ctx.datum.finite_coxeter.finite_type(
        frozenset(range(g))))
    if fin != ("A1" if g == 1 else f"C{g}"):
        raise GroupError(f"unexpected finite diagram {fin}")
    comps = group.affine_coxeter.affine_components()
    want_family = ("A~", 1) if g == 1 else ("C~", g)
    if len(comps) != 1 or comps[0][1] != want_family:
        raise GroupError("unexpected affine diagram")

    swaps = {0: (0, d - 1), g: (g - 1, g)}
    for i in range(1, g):
        swaps[i] = (i - 1, i, d - 1 - i, d - i)
    for i in range(g + 1):
        data = group.element_to_json(group.simple_reflections[i])
        perm = list(range(d))
        s = swaps[i]
        perm[s[0]], perm[s[1]] = perm[s[1]], perm[s[0]]
        if len(s) == 4:
            perm[s[2]], perm[s[3]] = perm[s[3]], perm[s[2]]
        want_t = [0] * d
        if i == 0:
            want_t[0], want_t[d - 1] = -1, 1
        if data["w"] != perm or data["t"] != want_t:
            raise GroupError(f"reflection {i} has unexpected shape")

    tau_data = group.element_to_json(ctx.tau.element)
    if tau_data["t"] != [0] * g + [1] * g:
        raise GroupError("length-zero element has unexpected translation")
    if tau_data["w"] != [(j + g) % d for j in range(d)]:
        raise GroupError("length-zero element has unexpected finite part")
    if ctx.tau.node_images != tuple(g - i for i in range(g + 1)):
        raise GroupError("length-zero element acts unexpectedly on nodes")

    kappa = group.kottwitz(group.translation(ctx.mu))
    if kappa.moduli != () or len(kappa.free) != 1 or abs(kappa.free[0]) != 1:
        raise GroupError("class of mu should generate a free rank-one quotient")
    if kappa != group.kottwitz(ctx.tau.element):
        raise GroupError("mu and its length-zero part fall in different classes")
