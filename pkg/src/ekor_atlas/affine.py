"""Extended affine Weyl groups.

Elements are pairs (translation, finite part) with the product rule
``(l1, w1) (l2, w2) = (l1 + w1 l2, w1 w2)``.  The finite Weyl group is
enumerated once and interned, so the finite part of an element is just an
index into that table; translations are kept in lattice coordinates.

The alcove convention follows the generators: the extra reflection of each
affine component is ``t^(-theta_coroot) s_theta``, the reflection through the
wall where the highest root takes the value -1.  The matching closed-form
length is

    l(t^l w) = sum_{a > 0, w^-1 a > 0} |<l, a>|
             + sum_{a > 0, w^-1 a < 0} |<l, a> + 1|

which the test suite cross-checks against breadth-first word distance.

Group objects memoise lengths, reduced words and Bruhat comparisons.  The
caches are only ever extended with values that any thread would recompute
identically, so concurrent readers are safe.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from ekor_atlas.coxeter import (
    INFINITE_BOND,
    CoxeterMatrix,
    DiagramMap,
)
from ekor_atlas.lattice import (
    AbelianQuotient,
    Pi1Class,
    fraction_matrix_inverse,
    identity_matrix,
    mat_mul,
    mat_vec,
    row_mat,
    solve_linear,
    vec_add,
    vec_dot,
    vec_neg,
)
from ekor_atlas.rootdata import RootDatum, RootDatumError


class GroupError(ValueError):
    """Invalid element construction or cross-context operation."""


@dataclass(frozen=True)
class ExtAffineElement:
    """Element of an extended affine Weyl group.

    ``trans`` is the translation in lattice coordinates, ``w`` the index of
    the finite part in the group's interned Weyl table.
    """

    trans: tuple[int, ...]
    w: int
    group: "ExtendedAffineWeylGroup" = field(compare=False, hash=False, repr=False)

    def __mul__(self, other: "ExtAffineElement") -> "ExtAffineElement":
        return self.group.mult(self, other)

    def inverse(self) -> "ExtAffineElement":
        return self.group.inv(self)

    def length(self) -> int:
        return self.group.length(self)

    def is_identity(self) -> bool:
        return self.w == 0 and not any(self.trans)

    def translation_ambient(self) -> tuple[int, ...]:
        return self.group.datum.from_lattice(self.trans)


@dataclass(frozen=True)
class OmegaElement:
    """A length-zero element together with its conjugation action on nodes."""

    element: ExtAffineElement
    node_images: tuple[int, ...]

    @property
    def diagram_map(self) -> DiagramMap:
        return DiagramMap(self.element.group.affine_coxeter, self.node_images)


@dataclass(frozen=True)
class ReducedDecomposition:
    """A reduced word in node letters and the residual length-zero factor."""

    word: tuple[int, ...]
    omega: OmegaElement


class ExtendedAffineWeylGroup:
    """Extended affine Weyl group of a root datum, with exact invariants."""

    def __init__(self, datum: RootDatum):
        self.datum = datum
        self.rank = datum.rank
        self._enumerate_finite()
        self._build_generators()
        self._build_affine_matrix()
        self._build_sigma()
        self._build_pi1()
        self._length: dict = {}
        self._wsign: dict[int, tuple[bool, ...]] = {}
        self._rd: dict = {}
        self._omega: dict = {}
        self._bruhat: dict = {}
        self._parabolic: dict = {}
        self._adm_cache: dict = {}
        self.identity = ExtAffineElement((0,) * self.rank, 0, self)

    # ------------------------------------------------------- finite table

    def _enumerate_finite(self):
        datum = self.datum
        ident = identity_matrix(self.rank)
        self._wmats = [ident]
        self._wambient = [identity_matrix(datum.dim)]
        self._windex = {ident: 0}
        self._wwords = [()]
        self._wlength = [0]
        frontier = [0]
        while frontier:
            nxt = []
            for idx in frontier:
                for i in range(datum.nsimple):
                    m = mat_mul(self._wmats[idx], datum.reflections_lattice[i])
                    if m not in self._windex:
                        self._windex[m] = len(self._wmats)
                        self._wmats.append(m)
                        self._wambient.append(
                            mat_mul(self._wambient[idx], datum.reflections_ambient[i]))
                        self._wwords.append(self._wwords[idx] + (i + 1,))
                        self._wlength.append(self._wlength[idx] + 1)
                        nxt.append(self._windex[m])
            frontier = nxt
        self.finite_order = len(self._wmats)
        self._wmul_cache: dict[tuple[int, int], int] = {}
        self._winv_cache: dict[int, int] = {}

    def wmul(self, i: int, j: int) -> int:
        key = (i, j)
        got = self._wmul_cache.get(key)
        if got is None:
            got = self._windex[mat_mul(self._wmats[i], self._wmats[j])]
            self._wmul_cache[key] = got
        return got

    def winv(self, i: int) -> int:
        got = self._winv_cache.get(i)
        if got is None:
            inv = fraction_matrix_inverse(self._wmats[i])
            m = tuple(tuple(int(v) for v in row) for row in inv)
            got = self._windex[m]
            self._winv_cache[i] = got
        return got

    def weyl_index(self, matrix) -> int:
        """Index of a lattice matrix in the finite table; validates membership."""
        try:
            return self._windex[tuple(tuple(int(v) for v in row) for row in matrix)]
        except KeyError:
            raise GroupError("matrix is not an element of the finite Weyl group") from None

    def act(self, widx: int, v: Sequence) -> tuple:
        return mat_vec(self._wmats[widx], v)

    def finite_word(self, widx: int) -> tuple[int, ...]:
        return self._wwords[widx]

    def reflection_node(self, x: "ExtAffineElement") -> Optional[int]:
        """Node index if x is one of the simple reflections, else None."""
        return self._node_of_reflection.get(x)

    def finite_length(self, widx: int) -> int:
        return self._wlength[widx]

    def ambient_matrix(self, widx: int):
        return self._wambient[widx]

    # -------------------------------------------------------- generators

    def _build_generators(self):
        datum = self.datum
        ncomp = len(datum.components)
        r = datum.nsimple
        self.num_nodes = r + ncomp
        # node layout: 0 = affine node of the first component, 1..r the
        # finite nodes (shifted root indices), r+j the affine node of
        # component j for j >= 1
        self.affine_node_of_component = tuple(
            0 if j == 0 else r + j for j in range(ncomp))
        gens: dict[int, ExtAffineElement] = {}
        for i in range(r):
            widx = self._windex[datum.reflections_lattice[i]]
            gens[i + 1] = ExtAffineElement((0,) * self.rank, widx, self)
        for j, comp in enumerate(datum.components):
            theta_vals = datum.theta[j]
            theta_cov = datum.theta_coroot[j]
            mat = datum._reflection_lattice(theta_vals, theta_cov)
            widx = self.weyl_index(mat)
            node = self.affine_node_of_component[j]
            gens[node] = ExtAffineElement(vec_neg(theta_cov), widx, self)
        self.simple_reflections = tuple(gens[i] for i in range(self.num_nodes))
        self._node_of_reflection = {gens[i]: i for i in range(self.num_nodes)}
        self.finite_nodes = frozenset(range(1, r + 1))

    def _build_affine_matrix(self):
        n = self.num_nodes
        rows = [[1] * n for _ in range(n)]
        for a in range(n):
            for b in range(a + 1, n):
                m = self._product_order(self.simple_reflections[a],
                                        self.simple_reflections[b])
                rows[a][b] = rows[b][a] = m
        self.affine_coxeter = CoxeterMatrix(rows)
        self.affine_coxeter.affine_components()  # validates the diagram
        fin = self.datum.finite_coxeter
        for i in range(1, self.datum.nsimple + 1):
            for j in range(1, self.datum.nsimple + 1):
                if self.affine_coxeter.rows[i][j] != fin.rows[i - 1][j - 1]:
                    raise GroupError("generator orders disagree with the Cartan pairings")

    def _product_order(self, x: ExtAffineElement, y: ExtAffineElement,
                       cap: int = 6) -> int:
        p = self.mult(x, y)
        acc = p
        for m in range(1, cap + 1):
            if acc.is_identity():
                return m
            acc = self.mult(acc, p)
        return INFINITE_BOND

    def _build_sigma(self):
        datum = self.datum
        r = datum.nsimple
        images = [0] * self.num_nodes
        for i in range(r):
            images[i + 1] = datum.frobenius_nodes[i] + 1
        comp_image = []
        for comp in datum.components:
            probe = min(comp)
            target = datum.frobenius_nodes[probe]
            comp_image.append(next(j for j, c in enumerate(datum.components)
                                   if target in c))
        for j, comp in enumerate(datum.components):
            images[self.affine_node_of_component[j]] = \
                self.affine_node_of_component[comp_image[j]]
        self.sigma_diagram = DiagramMap(self.affine_coxeter, tuple(images))
        inv = fraction_matrix_inverse(datum.frobenius_lattice)
        self._sigma_inv_lattice = tuple(tuple(int(v) for v in row) for row in inv)

    def _build_pi1(self):
        coroots = list(self.datum.coroots_lattice)
        self.pi1_gamma0 = AbelianQuotient(self.rank, coroots)
        sig = self.datum.frobenius_lattice
        extra = [tuple(sig[i][j] - int(i == j) for i in range(self.rank))
                 for j in range(self.rank)]
        self.pi1_gamma = AbelianQuotient(self.rank, coroots + extra)

    # --------------------------------------------------------- group law

    def _check(self, x: ExtAffineElement):
        if x.group is not self:
            raise GroupError("element belongs to a different group context")

    def mult(self, x: ExtAffineElement, y: ExtAffineElement) -> ExtAffineElement:
        self._check(x)
        self._check(y)
        return ExtAffineElement(vec_add(x.trans, self.act(x.w, y.trans)),
                                self.wmul(x.w, y.w), self)

    def inv(self, x: ExtAffineElement) -> ExtAffineElement:
        self._check(x)
        wi = self.winv(x.w)
        return ExtAffineElement(vec_neg(self.act(wi, x.trans)), wi, self)

    def translation(self, mu_ambient: Sequence[int]) -> ExtAffineElement:
        return ExtAffineElement(self.datum.to_lattice(mu_ambient), 0, self)

    def from_parts(self, trans_lattice: Sequence[int], widx: int) -> ExtAffineElement:
        return ExtAffineElement(tuple(trans_lattice), widx, self)

    def sigma(self, x: ExtAffineElement) -> ExtAffineElement:
        """Apply the Frobenius automorphism to a group element."""
        self._check(x)
        datum = self.datum
        trans = mat_vec(datum.frobenius_lattice, x.trans)
        m = mat_mul(mat_mul(datum.frobenius_lattice, self._wmats[x.w]),
                    self._sigma_inv_lattice)
        return ExtAffineElement(trans, self.weyl_index(m), self)

    # ------------------------------------------------------------ length

    def _signs(self, widx: int) -> tuple[bool, ...]:
        got = self._wsign.get(widx)
        if got is None:
            mat = self._wmats[widx]
            datum = self.datum
            got = tuple(datum.root_sign(row_mat(vals, mat)) > 0
                        for vals in datum.positive_roots)
            self._wsign[widx] = got
        return got

    def length(self, x: ExtAffineElement) -> int:
        self._check(x)
        key = (x.trans, x.w)
        got = self._length.get(key)
        if got is None:
            signs = self._signs(x.w)
            total = 0
            for vals, positive in zip(self.datum.positive_roots, signs):
                pairing = vec_dot(x.trans, vals)
                total += abs(pairing) if positive else abs(pairing + 1)
            self._length[key] = got = total
        return got

    def descents(self, x: ExtAffineElement) -> list[int]:
        lx = self.length(x)
        return [i for i in range(self.num_nodes)
                if self.length(self.mult(self.simple_reflections[i], x)) < lx]

    def first_descent(self, x: ExtAffineElement) -> Optional[int]:
        lx = self.length(x)
        for i in range(self.num_nodes):
            if self.length(self.mult(self.simple_reflections[i], x)) < lx:
                return i
        return None

    def reduced_word(self, x: ExtAffineElement) -> ReducedDecomposition:
        """Greedy reduced word: repeatedly strip the least left descent."""
        self._check(x)
        key = (x.trans, x.w)
        got = self._rd.get(key)
        if got is None:
            word = []
            y = x
            while True:
                i = self.first_descent(y)
                if i is None:
                    break
                word.append(i)
                y = self.mult(self.simple_reflections[i], y)
            got = ReducedDecomposition(tuple(word), self.omega_of(y))
            self._rd[key] = got
        return got

    def evaluate_word(self, word: Iterable[int],
                      omega: Optional[OmegaElement] = None) -> ExtAffineElement:
        out = self.identity
        for i in word:
            out = self.mult(out, self.simple_reflections[i])
        if omega is not None:
            out = self.mult(out, omega.element)
        return out

    def omega_of(self, x: ExtAffineElement) -> OmegaElement:
        """Wrap a length-zero element with its node permutation."""
        self._check(x)
        if self.length(x) != 0:
            raise GroupError("element has positive length")
        key = (x.trans, x.w)
        got = self._omega.get(key)
        if got is None:
            xinv = self.inv(x)
            images = []
            for i in range(self.num_nodes):
                z = self.mult(self.mult(x, self.simple_reflections[i]), xinv)
                node = self._node_of_reflection.get(z)
                if node is None:
                    raise GroupError("conjugation does not permute the simple reflections")
                images.append(node)
            got = OmegaElement(x, tuple(images))
            self._omega[key] = got
        return got

    def omega_part(self, x: ExtAffineElement) -> OmegaElement:
        return self.reduced_word(x).omega

    # ------------------------------------------------------- Bruhat order

    def same_coset(self, x: ExtAffineElement, y: ExtAffineElement) -> bool:
        """Same coset of the plain affine Weyl group (equal length-zero parts)."""
        diff = self.pi1_gamma0.class_of(x.trans) + (-self.pi1_gamma0.class_of(y.trans))
        return diff.is_zero()

    def bruhat_leq(self, x: ExtAffineElement, y: ExtAffineElement) -> bool:
        self._check(x)
        self._check(y)
        if not self.same_coset(x, y):
            return False
        return self._bruhat_rec(x, y)

    def _bruhat_rec(self, x: ExtAffineElement, y: ExtAffineElement) -> bool:
        if x == y:
            return True
        lx = self.length(x)
        ly = self.length(y)
        if lx >= ly:
            return False
        key = (x.trans, x.w, y.trans, y.w)
        got = self._bruhat.get(key)
        if got is None:
            i = self.first_descent(y)
            s = self.simple_reflections[i]
            sy = self.mult(s, y)
            sx = self.mult(s, x)
            if self.length(sx) < lx:
                got = self._bruhat_rec(sx, sy)
            else:
                got = self._bruhat_rec(x, sy)
            self._bruhat[key] = got
        return got

    # --------------------------------------------- Kottwitz and Newton maps

    def kottwitz(self, x: ExtAffineElement) -> Pi1Class:
        """Class of the translation part in the Frobenius coinvariants."""
        self._check(x)
        return self.pi1_gamma.class_of(x.trans)

    def kottwitz_gamma0(self, x: ExtAffineElement) -> Pi1Class:
        self._check(x)
        return self.pi1_gamma0.class_of(x.trans)

    def _newton_parts(self, x: ExtAffineElement):
        """Smallest n with (x sigma)^n a translation, and that translation."""
        A = mat_mul(self._wmats[x.w], self.datum.frobenius_lattice)
        ident = identity_matrix(self.rank)
        apow = A
        trans = x.trans
        n = 1
        while apow != ident:
            trans = vec_add(x.trans, mat_vec(A, trans))
            apow = mat_mul(apow, A)
            n += 1
            if n > 100000:
                raise GroupError("twisted linear part does not have finite order")
        return n, trans

    def dominantize_lattice(self, v: Sequence):
        """Dominant representative of a lattice vector and the element applied."""
        vals = self.datum.root_values
        refl = self.datum.reflections_lattice
        cur = tuple(Fraction(t) for t in v)
        widx = 0
        while True:
            for i in range(self.datum.nsimple):
                if vec_dot(cur, vals[i]) < 0:
                    cur = mat_vec(refl[i], cur)
                    widx = self.wmul(self._windex[refl[i]], widx)
                    break
            else:
                return cur, widx

    def dominantize(self, ambient: Sequence):
        """Public wrapper in ambient coordinates; returns (vector, element)."""
        v = self.datum.to_lattice(ambient, integral=False)
        dom, widx = self.dominantize_lattice(v)
        elt = ExtAffineElement((0,) * self.rank, widx, self)
        return self.datum.from_lattice(dom), elt

    def newton_lattice(self, x: ExtAffineElement) -> tuple[Fraction, ...]:
        n, trans = self._newton_parts(x)
        nu = tuple(Fraction(t, n) for t in trans)
        dom, _ = self.dominantize_lattice(nu)
        return dom

    def newton_vector(self, x: ExtAffineElement) -> tuple[Fraction, ...]:
        """Dominant Newton point of the element, in ambient coordinates."""
        self._check(x)
        return tuple(self.datum.from_lattice(self.newton_lattice(x)))

    def is_sigma_straight(self, x: ExtAffineElement) -> bool:
        """Length equals the pairing of the Newton point with 2*rho."""
        self._check(x)
        nu = self.newton_lattice(x)
        return vec_dot(nu, self.datum.two_rho) == self.length(x)

    def newton_leq(self, nu1_ambient: Sequence, nu2_ambient: Sequence) -> bool:
        """Dominance order: nu2 - nu1 a nonnegative rational coroot sum."""
        v1 = self.datum.to_lattice(nu1_ambient, integral=False)
        v2 = self.datum.to_lattice(nu2_ambient, integral=False)
        delta = tuple(b - a for a, b in zip(v1, v2))
        coeffs = solve_linear(list(self.datum.coroots_lattice), delta)
        if coeffs is None:
            return False
        check = [sum(coeffs[i] * self.datum.coroots_lattice[i][j]
                     for i in range(self.datum.nsimple))
                 for j in range(self.rank)]
        if any(Fraction(c) != Fraction(d) for c, d in zip(check, delta)):
            return False
        return all(c >= 0 for c in coeffs)

    def is_dominant(self, ambient: Sequence) -> bool:
        v = self.datum.to_lattice(ambient, integral=False)
        return all(vec_dot(v, vals) >= 0 for vals in self.datum.root_values)

    def galois_average(self, mu_ambient: Sequence) -> tuple[Fraction, ...]:
        """Average of a dominant vector over the Frobenius orbit, ambient."""
        v = self.datum.to_lattice(mu_ambient, integral=False)
        order = self.datum.frobenius_order
        acc = (Fraction(0),) * self.rank
        cur = tuple(Fraction(t) for t in v)
        for _ in range(order):
            acc = vec_add(acc, cur)
            cur = mat_vec(self.datum.frobenius_lattice, cur)
        avg = tuple(a / order for a in acc)
        dom, _ = self.dominantize_lattice(avg)
        if dom != avg:
            raise GroupError("galois average of a dominant vector must stay dominant")
        return tuple(self.datum.from_lattice(avg))

    def length_zero_element(self, mu_ambient: Sequence[int]) -> OmegaElement:
        """The unique length-zero element in the coset attached to mu.

        mu must be a dominant lattice vector; the result is the residual
        length-zero factor of the translation by mu, hence the only
        length-zero element whose translation class agrees with mu.
        """
        mu = self.datum.to_lattice(mu_ambient)
        if not self.is_dominant(mu_ambient):
            raise GroupError(f"{tuple(mu_ambient)} is not dominant")
        x = ExtAffineElement(mu, 0, self)
        omega = self.reduced_word(x).omega
        want = self.pi1_gamma0.class_of(mu)
        have = self.pi1_gamma0.class_of(omega.element.trans)
        if (want + (-have)).is_zero() is False:
            raise GroupError("no length-zero element in the required class")
        return omega

    # ------------------------------------------------- parabolic subgroups

    def parabolic_subgroup_elements(self, nodes: Iterable[int]) -> tuple[ExtAffineElement, ...]:
        """All elements of the standard parabolic on the given nodes.

        The node set must generate a finite group, which is checked against
        the affine diagram first.
        """
        key = frozenset(nodes)
        got = self._parabolic.get(key)
        if got is None:
            if not self.affine_coxeter.is_finite_parabolic(key):
                raise GroupError(f"parabolic on {sorted(key)} is infinite")
            seen = {self.identity}
            frontier = [self.identity]
            while frontier:
                nxt = []
                for x in frontier:
                    for i in sorted(key):
                        y = self.mult(x, self.simple_reflections[i])
                        if y not in seen:
                            seen.add(y)
                            nxt.append(y)
                frontier = nxt
            got = tuple(sorted(seen, key=self.sort_key))
            self._parabolic[key] = got
        return got

    # ----------------------------------------------------- canonical order

    def sort_key(self, x: ExtAffineElement):
        rd = self.reduced_word(x)
        return (self.length(x), rd.word, rd.omega.element.trans)

    # ------------------------------------------------------- serialization

    def element_to_json(self, x: ExtAffineElement) -> dict:
        self._check(x)
        amb = self.ambient_matrix(x.w)
        d = self.datum.dim
        one_line = []
        for j in range(d):
            col = [amb[i][j] for i in range(d)]
            ones = [i for i, v in enumerate(col) if v == 1]
            if len(ones) == 1 and sum(abs(v) for v in col) == 1:
                one_line.append(ones[0])
            else:
                one_line = None
                break
        w_json = one_line if one_line is not None else {"rows": [list(r) for r in amb]}
        return {"t": list(self.datum.from_lattice(x.trans)), "w": w_json}

    def element_from_json(self, data: dict) -> ExtAffineElement:
        trans = self.datum.to_lattice(data["t"])
        w = data["w"]
        d = self.datum.dim
        if isinstance(w, dict):
            amb = tuple(tuple(int(v) for v in row) for row in w["rows"])
        else:
            if sorted(w) != list(range(d)):
                raise GroupError(f"{w} is not a permutation of 0..{d - 1}")
            amb = tuple(tuple(int(w[j] == i) for j in range(d)) for i in range(d))
        cols = []
        for j in range(self.rank):
            image = mat_vec(amb, self.datum.basis[j])
            try:
                cols.append(self.datum.to_lattice(image))
            except RootDatumError as exc:
                raise GroupError(f"matrix does not preserve the lattice: {exc}") from exc
        mat = tuple(tuple(cols[j][i] for j in range(self.rank))
                    for i in range(self.rank))
        return ExtAffineElement(trans, self.weyl_index(mat), self)


def element_label(group: ExtendedAffineWeylGroup, x: ExtAffineElement) -> str:
    """Short product form: reduced word letters, then tau for the
    length-zero factor."""
    rd = group.reduced_word(x)
    parts = [f"s{i}" for i in rd.word]
    if not rd.omega.element.is_identity():
        parts.append("tau")
    return ".".join(parts) if parts else "e"


def build_extended_affine_weyl(datum: RootDatum) -> ExtendedAffineWeylGroup:
    return ExtendedAffineWeylGroup(datum)
