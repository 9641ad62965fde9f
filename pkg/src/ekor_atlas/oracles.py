"""Slow independent recomputations used to validate the fast paths.

Everything here is deliberately naive: breadth-first enumeration in a
reflection representation, subword generation, exhaustive subset scans.
The fast code must agree with these on small inputs.
"""

from __future__ import annotations

import random
from typing import Iterable, Optional, Sequence

from ekor_atlas.affine import ExtAffineElement, ExtendedAffineWeylGroup
from ekor_atlas.coxeter import INFINITE_BOND, CoxeterMatrix
from ekor_atlas.lattice import identity_matrix, mat_mul

DEFAULT_CAP = 10 ** 6


class OracleError(RuntimeError):
    pass


def _reflection_generators(mat: CoxeterMatrix, nodes: Sequence[int]):
    """Integer reflection representation with pairing products 4cos^2(pi/m).

    s_i sends a_j to a_j - p(i,j) a_i where p(i,i) = 2 and off the diagonal
    p is 0, 1x1, 1x2, 1x3 or 2x2 for bonds 2, 3, 4, 6 and infinity, the
    asymmetric weight going to the larger index.
    """
    weights = {2: (0, 0), 3: (1, 1), 4: (1, 2), 6: (1, 3), INFINITE_BOND: (2, 2)}
    n = len(nodes)
    pairing = [[0] * n for _ in range(n)]
    for a in range(n):
        pairing[a][a] = 2
        for b in range(a + 1, n):
            m = mat.bond(nodes[a], nodes[b])
            if m not in weights:
                raise OracleError(f"no integer representation for bond {m}")
            lo, hi = weights[m]
            pairing[a][b] = lo
            pairing[b][a] = hi
    gens = []
    for i in range(n):
        rows = []
        for r in range(n):
            row = [int(r == ccol) for ccol in range(n)]
            if r == i:
                row = [row[ccol] - pairing[i][ccol] for ccol in range(n)]
            rows.append(tuple(row))
        gens.append(tuple(rows))
    return gens


def coxeter_bfs_sizes(mat: CoxeterMatrix, nodes: Optional[Iterable[int]] = None,
                      cap: int = DEFAULT_CAP) -> Optional[list[int]]:
    """Element counts by length, or None once the cap is passed."""
    picked = sorted(mat.nodes() if nodes is None else nodes)
    gens = _reflection_generators(mat, picked)
    ident = identity_matrix(len(picked))
    seen = {ident}
    frontier = [ident]
    sizes = [1]
    while frontier:
        nxt = []
        for m in frontier:
            for gmat in gens:
                p = mat_mul(m, gmat)
                if p not in seen:
                    seen.add(p)
                    nxt.append(p)
                    if len(seen) > cap:
                        return None
        if nxt:
            sizes.append(len(nxt))
        frontier = nxt
    return sizes


def coxeter_group_size(mat: CoxeterMatrix, nodes: Optional[Iterable[int]] = None,
                       cap: int = DEFAULT_CAP) -> Optional[int]:
    sizes = coxeter_bfs_sizes(mat, nodes, cap)
    return None if sizes is None else sum(sizes)


def cayley_ball(group: ExtendedAffineWeylGroup, radius: int,
                omegas: Optional[Sequence[ExtAffineElement]] = None):
    """Word distance from the set of length-zero seeds, by blind search."""
    seeds = [group.identity] if omegas is None else list(omegas)
    dist = {x: 0 for x in seeds}
    frontier = seeds
    for r in range(1, radius + 1):
        nxt = []
        for x in frontier:
            for s in group.simple_reflections:
                y = group.mult(x, s)
                if y not in dist:
                    dist[y] = r
                    nxt.append(y)
        frontier = nxt
    return dist


def subword_products(group: ExtendedAffineWeylGroup,
                     y: ExtAffineElement) -> frozenset[ExtAffineElement]:
    """All products of subwords of one reduced word of y, times its
    length-zero part."""
    rd = group.reduced_word(y)
    acc = {group.identity}
    for letter in rd.word:
        s = group.simple_reflections[letter]
        acc |= {group.mult(x, s) for x in acc}
    return frozenset(group.mult(x, rd.omega.element) for x in acc)


def bruhat_leq_subword(group: ExtendedAffineWeylGroup, x: ExtAffineElement,
                       y: ExtAffineElement,
                       cache: Optional[dict] = None) -> bool:
    if cache is None:
        cache = {}
    got = cache.get(y)
    if got is None:
        got = cache[y] = subword_products(group, y)
    return x in got


def right_greedy_word(group: ExtendedAffineWeylGroup, x: ExtAffineElement):
    """Reduced word built by stripping right descents, plus the leftover
    length-zero factor on the left: x = omega * word."""
    word = []
    y = x
    while True:
        ly = group.length(y)
        for i in range(group.num_nodes):
            if group.length(group.mult(y, group.simple_reflections[i])) < ly:
                word.append(i)
                y = group.mult(y, group.simple_reflections[i])
                break
        else:
            break
    return group.omega_of(y), tuple(reversed(word))


def admissible_by_right_words(group: ExtendedAffineWeylGroup,
                              maxima: Sequence[ExtAffineElement]):
    """Admissible set recomputed from right-greedy words, with the
    length-zero factor glued on the left instead of the right."""
    out = set()
    for top in maxima:
        omega, word = right_greedy_word(group, top)
        acc = {group.identity}
        for letter in word:
            s = group.simple_reflections[letter]
            acc |= {group.mult(x, s) for x in acc}
        out |= {group.mult(omega.element, x) for x in acc}
    return frozenset(out)


def brute_stable_subset(group: ExtendedAffineWeylGroup, x: ExtAffineElement,
                        label: frozenset[int]) -> frozenset[int]:
    """Union of all subsets J of the level with x sigma(J) x^-1 = J exactly."""
    nodes = sorted(label)
    xinv = group.inv(x)
    best: set[int] = set()
    for mask in range(1 << len(nodes)):
        sub = frozenset(nodes[i] for i in range(len(nodes)) if mask >> i & 1)
        images = set()
        ok = True
        for i in sub:
            s = group.simple_reflections[group.sigma_diagram(i)]
            node = group.reflection_node(group.mult(group.mult(x, s), xinv))
            if node is None or node not in sub:
                ok = False
                break
            images.add(node)
        if ok and images == set(sub):
            best |= sub
    return frozenset(best)


def twisted_power(group: ExtendedAffineWeylGroup, x: ExtAffineElement,
                  m: int) -> ExtAffineElement:
    """x sigma(x) sigma^2(x) ... sigma^(m-1)(x)."""
    out = group.identity
    cur = x
    for _ in range(m):
        out = group.mult(out, cur)
        cur = group.sigma(cur)
    return out


def straight_by_definition(group: ExtendedAffineWeylGroup, x: ExtAffineElement,
                           powers: int = 8) -> bool:
    lx = group.length(x)
    return all(group.length(twisted_power(group, x, m)) == m * lx
               for m in range(1, powers + 1))


def twisted_conjugates(group: ExtendedAffineWeylGroup, x: ExtAffineElement,
                       conjugator_radius: int) -> frozenset[ExtAffineElement]:
    """All g x sigma(g)^-1 over conjugators from a word ball."""
    ball = cayley_ball(group, conjugator_radius)
    out = set()
    for gelt in ball:
        out.add(group.mult(group.mult(gelt, x),
                           group.inv(group.sigma(gelt))))
    return frozenset(out)


def random_element(rng: random.Random, group: ExtendedAffineWeylGroup,
                   letters: int,
                   omegas: Sequence[ExtAffineElement]) -> ExtAffineElement:
    x = rng.choice(list(omegas))
    for _ in range(letters):
        x = group.mult(x, group.simple_reflections[
            rng.randrange(group.num_nodes)])
    return x


def random_descent_word(rng: random.Random, group: ExtendedAffineWeylGroup,
                        x: ExtAffineElement):
    """Reduced word by stripping a random left descent each step."""
    word = []
    y = x
    while True:
        choices = group.descents(y)
        if not choices:
            break
        i = rng.choice(choices)
        word.append(i)
        y = group.mult(group.simple_reflections[i], y)
    return tuple(word), group.omega_of(y)
