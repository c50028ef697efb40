"""Algorithms on finitely generated subgroups of GL(r, Z).

Element order via cyclotomic spectrum, group finiteness with explicit
certificates through the mod-3 congruence reduction (whose kernel is
torsion-free), and the finite-orbit sublattice: the set of vectors of
Z^r whose orbit under the generated group is finite.

Words over a generating set are tuples of signed 1-based indices; ``+i``
is the i-th generator, ``-i`` its inverse.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .intlinalg import (
    IntMatrix,
    Lattice,
    Vec,
    charpoly,
    cyclotomic_orders,
    kernel_lattice,
    lcm_all,
)

GenWord = tuple[int, ...]


@dataclass(frozen=True)
class MatGroupGens:
    """A finitely generated subgroup of GL(r, Z), given by generators."""

    rank: int
    gens: tuple[IntMatrix, ...]
    labels: tuple[str, ...] = field(compare=False, default=())

    def __post_init__(self):
        if not self.gens:
            raise ValueError("at least one generator required")
        for g in self.gens:
            if g.nrows != self.rank or g.ncols != self.rank:
                raise ValueError("generator size != rank")
            if not g.is_unimodular:
                raise ValueError(f"non-unimodular generator, det={g.det()}")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"g{i+1}" for i in range(len(self.gens))))
        elif len(self.labels) != len(self.gens):
            raise ValueError("one label per generator required")

    def word_to_matrix(self, word: GenWord) -> IntMatrix:
        out = IntMatrix.identity(self.rank)
        for letter in word:
            g = self.gens[abs(letter) - 1]
            out = out @ (g if letter > 0 else g.inverse_unimodular())
        return out

    def render_word(self, word: GenWord) -> str:
        if not word:
            return "1"
        return "*".join(
            self.labels[abs(l) - 1] + ("" if l > 0 else "^-1") for l in word
        )


def matrix_order(m: IntMatrix) -> int | None:
    """The multiplicative order of a unimodular matrix, or None if infinite.

    Finite order forces the characteristic polynomial to be a product of
    cyclotomics; the candidate order is the lcm of their indices, and the
    true order is its minimal divisor n with M^n = I.

    >>> matrix_order(IntMatrix.from_rows([[0, -1], [1, 0]]))
    4
    >>> matrix_order(IntMatrix.from_rows([[1, 1], [0, 1]])) is None
    True
    """
    if not m.is_unimodular:
        raise ValueError("matrix_order requires a unimodular matrix")
    n = m.nrows
    if n == 0:
        return 1
    factors = cyclotomic_orders(charpoly(m), n)
    if not factors.all_cyclotomic:
        return None
    big = lcm_all(factors.orders | {1})
    if (m ** big) != IntMatrix.identity(n):
        return None  # non-semisimple (unipotent part present)
    from .intlinalg import _divisors

    for d in _divisors(big):
        if (m ** d) == IntMatrix.identity(n):
            return d
    raise AssertionError("unreachable: big itself divides big")


@dataclass(frozen=True)
class GroupFinite:
    """Finiteness certificate: the closure of the mod-3 image, verified
    to lift injectively, has this many elements."""

    order: int


@dataclass(frozen=True)
class GroupInfinite:
    """Infiniteness certificate: a nontrivial element of the mod-3
    congruence kernel, hence of infinite order."""

    witness_word: GenWord
    witness_matrix: IntMatrix


FinitenessCert = GroupFinite | GroupInfinite


def _inverse_word(word: GenWord) -> GenWord:
    return tuple(-l for l in reversed(word))


def group_is_finite(group: MatGroupGens) -> FinitenessCert:
    """Decide finiteness of the generated group, with a certificate.

    Enumerates the image under entry-wise reduction mod 3 (a finite
    group), keeping one integer preimage per image element.  Every
    Schreier element  g * rep(x) * rep(g.x)^-1  lies in the congruence
    kernel; if all are the identity the reduction is injective and the
    group is finite of the image's order, otherwise the first nontrivial
    one is an infinite-order witness.
    """
    r = group.rank
    identity = IntMatrix.identity(r)
    step: list[tuple[int, IntMatrix, IntMatrix]] = []
    for i, g in enumerate(group.gens):
        ginv = g.inverse_unimodular()
        step.append((i + 1, g, ginv))
        step.append((-(i + 1), ginv, g))

    # rep: image key -> (preimage matrix, its inverse, word)
    rep = {identity.mod(3): (identity, identity, ())}
    queue = deque([identity.mod(3)])
    while queue:
        key = queue.popleft()
        mat, matinv, word = rep[key]
        for letter, g, ginv in step:
            prod = g @ mat
            prod_key = prod.mod(3)
            known = rep.get(prod_key)
            if known is None:
                rep[prod_key] = (prod, matinv @ ginv, (letter,) + word)
                queue.append(prod_key)
            else:
                schreier = prod @ known[1]
                if not schreier.is_identity:
                    witness_word = (letter,) + word + _inverse_word(known[2])
                    return GroupInfinite(witness_word, schreier)
    return GroupFinite(len(rep))


def single_finite_orbit_space(m: IntMatrix) -> Lattice:
    """The pure sublattice of vectors with finite orbit under <M>.

    Equals ker(M^L - I) where L is the lcm of the cyclotomic orders that
    divide charpoly(M) (L = 1 when there are none).
    """
    if not m.is_unimodular:
        raise ValueError("requires a unimodular matrix")
    n = m.nrows
    if n == 0:
        return Lattice.zero(0)
    factors = cyclotomic_orders(charpoly(m), n)
    big = lcm_all(factors.orders | {1})
    return kernel_lattice((m ** big) - IntMatrix.identity(n))


def restrict_to_lattice(m: IntMatrix, lat: Lattice) -> IntMatrix | None:
    """The action of M on a lattice, written in the lattice's basis.

    Returns None if the lattice is not carried into itself.  The result
    acts on coordinate vectors with the same ``A @ v^T`` convention as
    the ambient action.
    """
    rows = []
    for b in lat.basis:
        coords = lat.coordinates(m.apply(b))
        if coords is None:
            return None
        rows.append(coords)
    if not rows:
        return IntMatrix.identity(0)
    return IntMatrix.from_rows(rows).transpose()


@dataclass(frozen=True)
class FiniteOrbitCert:
    """The finite-orbit sublattice with its supporting evidence.

    ``lattice`` is invariant under every generator; the induced action on
    it generates a finite group of order ``induced_finiteness.order``;
    each entry of ``infinite_order_witnesses`` is a (word, matrix) pair
    that acted with infinite order on the candidate lattice current at
    its discovery step (the matrix is written in that candidate's basis).
    """

    lattice: Lattice
    induced_finiteness: GroupFinite
    infinite_order_witnesses: tuple[tuple[GenWord, IntMatrix], ...] = ()
    induced_gens: tuple[IntMatrix, ...] = field(default=(), repr=False)


def _shrink_to_invariant(lat: Lattice, group: MatGroupGens) -> Lattice:
    pairs = [(g, g.inverse_unimodular()) for g in group.gens]
    while True:
        nxt = lat
        for g, ginv in pairs:
            if nxt.rank == 0:
                return nxt
            nxt = nxt.intersect(nxt.image_under(g)).intersect(nxt.image_under(ginv))
        if nxt == lat:
            return nxt
        lat = nxt


def finite_orbit_sublattice(group: MatGroupGens) -> FiniteOrbitCert:
    """The set of vectors of Z^r whose orbit under the group is finite.

    Exact algorithm: intersect the single-generator finite-orbit spaces,
    shrink to the largest sublattice invariant under all generators and
    inverses, then certify finiteness of the induced action; an
    infinite-order witness cuts the candidate down by its own
    finite-orbit space (a strict rank drop, since the witness lives in
    the torsion-free congruence kernel) and the loop repeats.
    """
    r = group.rank
    cand = Lattice.full(r)
    for g in group.gens:
        cand = cand.intersect(single_finite_orbit_space(g))
    witnesses: list[tuple[GenWord, IntMatrix]] = []
    while True:
        cand = _shrink_to_invariant(cand, group)
        if cand.rank == 0:
            return FiniteOrbitCert(cand, GroupFinite(1), tuple(witnesses), ())
        induced = []
        for g in group.gens:
            a = restrict_to_lattice(g, cand)
            assert a is not None, "candidate lattice must be invariant here"
            induced.append(a)
        induced_group = MatGroupGens(cand.rank, tuple(induced), group.labels)
        cert = group_is_finite(induced_group)
        if isinstance(cert, GroupFinite):
            return FiniteOrbitCert(cand, cert, tuple(witnesses), tuple(induced))
        witnesses.append((cert.witness_word, cert.witness_matrix))
        fixed = single_finite_orbit_space(cert.witness_matrix)
        ambient_rows = [cand.member_from_coords(c) for c in fixed.basis]
        smaller = Lattice.from_rows(r, ambient_rows)
        assert smaller.rank < cand.rank, "witness must cut the rank down"
        cand = smaller


@dataclass(frozen=True)
class FiniteOrbit:
    vectors: frozenset[Vec]

    @property
    def size(self) -> int:
        return len(self.vectors)


@dataclass(frozen=True)
class OrbitCapExceeded:
    cap: int


OrbitResult = FiniteOrbit | OrbitCapExceeded


def orbit_bfs(group: MatGroupGens, start: Vec, cap: int = 10_000) -> OrbitResult:
    """Breadth-first closure of {start} under generators and inverses.

    Returns the exact orbit when its size stays within ``cap``;
    deterministic order: generator index, generator before inverse, FIFO.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    start = tuple(start)
    maps = []
    for g in group.gens:
        maps.append(g)
        maps.append(g.inverse_unimodular())
    appliers = [_row_applier(m) for m in maps]
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for apply_m in appliers:
            w = apply_m(v)
            if w not in seen:
                if len(seen) >= cap:
                    return OrbitCapExceeded(cap)
                seen.add(w)
                queue.append(w)
    return FiniteOrbit(frozenset(seen))


def _row_applier(m: IntMatrix):
    """A fast closure computing v |-> M v^T on tuples.

    Compiles the matrix's rows into one tuple expression; orbit
    enumeration is the hot loop of the whole package and the compiled
    form is an order of magnitude faster than a generic sum.  The source
    is built from integer entries only.
    """
    terms = []
    for row in m.rows:
        parts = []
        for j, c in enumerate(row):
            if c == 1:
                parts.append(f"v[{j}]")
            elif c == -1:
                parts.append(f"-v[{j}]")
            elif c:
                parts.append(f"{c}*v[{j}]")
        terms.append("+".join(parts).replace("+-", "-") if parts else "0")
    src = "lambda v: (" + ", ".join(terms) + (",)" if len(terms) == 1 else ")")
    return eval(src)  # noqa: S307 - source built from int literals above
