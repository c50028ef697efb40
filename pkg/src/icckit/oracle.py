"""Brute-force ground truth on materialized split extensions.

Builds the split extension determined by the action assignment, with
exact normal forms for elements, and measures conjugacy-class growth:
a class reported Closed is the complete class, computed exactly; a class
still growing at the radius cap is evidence (not proof) of infinitude.

Element encoding: a pair ``(k, q)``.  Abelian kernels use integer tuples
(free coordinates first, then torsion residues), free kernels reduced
words, finite kernels permutations.  Quotient elements use the catalog
normal form: exponent tuples, reduced words, permutations, or tuples of
those for products.  Multiplication is
``(k1, q1) (k2, q2) = (k1 * theta(q1)(k2), q1 q2)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .catalog import (
    FgAbelianDesc,
    FiniteGroupDesc,
    FreeDesc,
    GroupDesc,
    ProductDesc,
    generator_count,
    perm_compose,
    perm_identity,
    perm_inverse,
)
from .extension import AbelianKernel, ExtensionSpec, UnsupportedExtensionError
from .intlinalg import IntMatrix
from .matgroup import MatGroupGens, OrbitCapExceeded, OrbitResult, orbit_bfs
from .words import FreeAut, Word, word_inverse, word_mul


class _AbelianKernelPart:
    """Z^rank x Z/d...; the action matrices move the free coordinates and
    fix the torsion coordinates."""

    def __init__(self, kernel: AbelianKernel):
        self.rank = kernel.rank
        self.divisors = kernel.divisors

    def _wrap(self, free, tors):
        return tuple(free) + tuple(t % d for t, d in zip(tors, self.divisors))

    @property
    def identity(self):
        return (0,) * (self.rank + len(self.divisors))

    def mul(self, a, b):
        return self._wrap(
            (x + y for x, y in zip(a[: self.rank], b[: self.rank])),
            (x + y for x, y in zip(a[self.rank:], b[self.rank:])),
        )

    def inv(self, a):
        return self._wrap((-x for x in a[: self.rank]), (-x for x in a[self.rank:]))

    def act(self, mat: IntMatrix, a):
        return mat.apply(a[: self.rank]) + a[self.rank:]

    def generators(self):
        out = []
        n = self.rank + len(self.divisors)
        for i in range(n):
            v = [0] * n
            v[i] = 1
            label = f"e{i+1}" if i < self.rank else f"u{i - self.rank + 1}"
            out.append((label, self._wrap(v[: self.rank], v[self.rank:])))
        return out


class _FreeKernelPart:
    def __init__(self, kernel: FreeDesc):
        self.rank = kernel.rank
        self.names = kernel.names

    identity: Word = ()

    def mul(self, a, b):
        return word_mul(a, b)

    def inv(self, a):
        return word_inverse(a)

    def act(self, aut: FreeAut, a):
        return aut.apply(a)

    def generators(self):
        return [(self.names[i], (i + 1,)) for i in range(self.rank)]


class _FiniteKernelPart:
    def __init__(self, kernel: FiniteGroupDesc):
        self.desc = kernel

    @property
    def identity(self):
        return perm_identity(self.desc.degree)

    def mul(self, a, b):
        return perm_compose(a, b)

    def inv(self, a):
        return perm_inverse(a)

    def act(self, _action, a):
        return a

    def generators(self):
        return list(zip(self.desc.labels, self.desc.generators))


class _QuotientPart:
    """Normal forms and generator-word decomposition for one catalog atom
    or a product of atoms."""

    def __init__(self, desc: GroupDesc):
        self.desc = desc
        if isinstance(desc, ProductDesc):
            self.parts = [_QuotientPart(f) for f in desc.factors]
        else:
            self.parts = None

    @property
    def identity(self):
        d = self.desc
        if isinstance(d, FgAbelianDesc):
            return (0,) * d.gen_count
        if isinstance(d, FreeDesc):
            return ()
        if isinstance(d, FiniteGroupDesc):
            return perm_identity(d.degree)
        return tuple(p.identity for p in self.parts)

    def mul(self, a, b):
        d = self.desc
        if isinstance(d, FgAbelianDesc):
            free = tuple(x + y for x, y in zip(a[: d.rank], b[: d.rank]))
            tors = tuple((x + y) % m for x, y, m in zip(a[d.rank:], b[d.rank:], d.divisors))
            return free + tors
        if isinstance(d, FreeDesc):
            return word_mul(a, b)
        if isinstance(d, FiniteGroupDesc):
            return perm_compose(a, b)
        return tuple(p.mul(x, y) for p, x, y in zip(self.parts, a, b))

    def inv(self, a):
        d = self.desc
        if isinstance(d, FgAbelianDesc):
            free = tuple(-x for x in a[: d.rank])
            tors = tuple((-x) % m for x, m in zip(a[d.rank:], d.divisors))
            return free + tors
        if isinstance(d, FreeDesc):
            return word_inverse(a)
        if isinstance(d, FiniteGroupDesc):
            return perm_inverse(a)
        return tuple(p.inv(x) for p, x in zip(self.parts, a))

    def generators(self):
        d = self.desc
        if isinstance(d, FgAbelianDesc):
            out = []
            for i in range(d.gen_count):
                v = [0] * d.gen_count
                v[i] = 1
                out.append((d.gen_labels[i], tuple(v)))
            return out
        if isinstance(d, FreeDesc):
            return [(d.names[i], (i + 1,)) for i in range(d.rank)]
        if isinstance(d, FiniteGroupDesc):
            return list(zip(d.labels, d.generators))
        out = []
        for i, p in enumerate(self.parts):
            for label, g in p.generators():
                out.append((label, self._embed(i, g)))
        return out

    def _embed(self, index, value):
        return tuple(
            value if i == index else p.identity for i, p in enumerate(self.parts)
        )

    def exponent_pairs(self, a):
        """(generator index, exponent) pairs whose ordered product is a."""
        d = self.desc
        if isinstance(d, FgAbelianDesc):
            return [(i, e) for i, e in enumerate(a) if e]
        if isinstance(d, FreeDesc):
            return [(abs(l) - 1, 1 if l > 0 else -1) for l in a]
        if isinstance(d, FiniteGroupDesc):
            return [(l - 1, 1) for l in d.word_of(a)]
        out = []
        offset = 0
        for p, comp in zip(self.parts, a):
            out.extend((i + offset, e) for i, e in p.exponent_pairs(comp))
            offset += generator_count(p.desc)
        return out


class ConcreteGroup:
    """A split extension with exact element arithmetic."""

    def __init__(self, spec: ExtensionSpec):
        self.spec = spec
        kernel = spec.kernel
        if isinstance(kernel, AbelianKernel):
            self.kernel_part = _AbelianKernelPart(kernel)
        elif isinstance(kernel, FreeDesc):
            self.kernel_part = _FreeKernelPart(kernel)
        elif isinstance(kernel, FiniteGroupDesc):
            self.kernel_part = _FiniteKernelPart(kernel)
        else:
            raise UnsupportedExtensionError("kernel outside the oracle's catalog")
        self.quotient_part = _QuotientPart(spec.quotient)
        self._theta_cache: dict = {}
        self._action_id = (
            IntMatrix.identity(kernel.rank)
            if isinstance(kernel, AbelianKernel)
            else FreeAut.identity(kernel.rank)
            if isinstance(kernel, FreeDesc)
            else None
        )
        self._action_pows: dict = {}

    @property
    def identity(self):
        return (self.kernel_part.identity, self.quotient_part.identity)

    def theta(self, q):
        """The action of a quotient element on the kernel."""
        if self._action_id is None:
            return None  # finite kernel: trivial action
        cached = self._theta_cache.get(q)
        if cached is not None:
            return cached
        action = self._action_id
        for i, e in self.quotient_part.exponent_pairs(q):
            action = self._compose(action, self._gen_power(i, e))
        self._theta_cache[q] = action
        return action

    def _compose(self, a, b):
        return a @ b if isinstance(a, IntMatrix) else a.compose(b)

    def _gen_power(self, i, e):
        key = (i, e)
        cached = self._action_pows.get(key)
        if cached is None:
            base = self.spec.actions[i]
            cached = base ** e if isinstance(base, IntMatrix) else base.power(e)
            self._action_pows[key] = cached
        return cached

    def act(self, q, k):
        if self._action_id is None:
            return k
        return self.kernel_part.act(self.theta(q), k)

    def mul(self, a, b):
        (k1, q1), (k2, q2) = a, b
        return (
            self.kernel_part.mul(k1, self.act(q1, k2)),
            self.quotient_part.mul(q1, q2),
        )

    def inv(self, a):
        k, q = a
        qi = self.quotient_part.inv(q)
        return (self.act(qi, self.kernel_part.inv(k)), qi)

    def conjugate(self, g, x):
        """x^g = g^-1 x g."""
        return self.mul(self.mul(self.inv(g), x), g)

    def kernel_element(self, k):
        return (k, self.quotient_part.identity)

    def lift(self, q):
        return (self.kernel_part.identity, q)

    def quotient_element_from_word(self, word):
        gens = self.quotient_part.generators()
        q = self.quotient_part.identity
        for letter in word:
            _, g = gens[abs(letter) - 1]
            q = self.quotient_part.mul(q, g if letter > 0 else self.quotient_part.inv(g))
        return q

    def ball_generators(self):
        """Kernel generators, quotient generator lifts (zero kernel part),
        and nothing else; inverses are handled by the ball walker."""
        out = [(label, self.kernel_element(k)) for label, k in self.kernel_part.generators()]
        out.extend((label, self.lift(q)) for label, q in self.quotient_part.generators())
        return out

    def sample_nontrivial(self, count: int = 20):
        """Deterministic mixed sample: kernel generators, quotient lifts,
        inverses, and short products of those."""
        base = []
        for _, g in self.ball_generators():
            base.append(g)
            base.append(self.inv(g))

        def emit():
            yield from base
            for a, b in itertools.product(base, repeat=2):
                yield self.mul(a, b)
            for a, b, c in itertools.product(base, repeat=3):
                yield self.mul(self.mul(a, b), c)

        seen = set()
        out = []
        for cand in emit():
            if cand == self.identity or cand in seen:
                continue
            seen.add(cand)
            out.append(cand)
            if len(out) >= count:
                break
        return out


def materialize(spec: ExtensionSpec) -> ConcreteGroup:
    """The split extension realizing the given action assignment."""
    return ConcreteGroup(spec)


@dataclass(frozen=True)
class GrowthCurve:
    """Cumulative conjugacy-class ball sizes per conjugation radius.

    ``closed_at`` is the smallest radius at which the ball equals the
    full class (certified by one further round adding nothing); None
    while the ball is still growing.  ``cap_hit`` marks a run stopped by
    the set-size safety cap.
    """

    sizes: tuple[int, ...]
    closed_at: int | None
    cap_hit: bool = False

    @property
    def is_closed(self) -> bool:
        return self.closed_at is not None

    @property
    def final_size(self) -> int:
        return self.sizes[-1]

    def csv_rows(self):
        rows = ["radius,size,status"]
        for r, s in enumerate(self.sizes):
            if self.closed_at is not None and r >= self.closed_at:
                status = "closed"
            else:
                status = "growing"
            rows.append(f"{r},{s},{status}")
        return rows


def conjugacy_ball(group: ConcreteGroup, element, radius: int, cap: int = 5000) -> GrowthCurve:
    """Iteratively conjugate by all ball generators and inverses.

    Closed means a full extra round added nothing, so the returned size
    is the exact class size.  Deterministic: generator order as listed,
    inverse directly after each generator, FIFO frontier.
    """
    if radius < 1:
        raise ValueError("radius must be >= 1")
    conjugators = []
    for _, g in group.ball_generators():
        conjugators.append(g)
        conjugators.append(group.inv(g))
    seen = {element}
    frontier = [element]
    sizes = [1]
    closed_at = None
    for rnd in range(1, radius + 1):
        new = []
        for x in frontier:
            for g in conjugators:
                y = group.conjugate(g, x)
                if y not in seen:
                    seen.add(y)
                    new.append(y)
        sizes.append(len(seen))
        if not new:
            closed_at = rnd - 1
            break
        if len(seen) > cap:
            return GrowthCurve(tuple(sizes), None, cap_hit=True)
        frontier = new
    return GrowthCurve(tuple(sizes), closed_at)


@dataclass(frozen=True)
class ExactClass:
    elements: frozenset

    @property
    def size(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class ClassCapExceeded:
    cap: int


def exact_abelian_class(group: ConcreteGroup, k, cap: int = 10_000):
    """The exact class of a kernel element of an abelian-kernel group:
    its orbit under the action (independent of any ball radius)."""
    if not isinstance(group.kernel_part, _AbelianKernelPart):
        raise ValueError("exact_abelian_class needs an abelian kernel")
    part = group.kernel_part
    free, tors = k[: part.rank], k[part.rank:]
    actions = [a for a in group.spec.actions]
    if not actions or part.rank == 0:
        return ExactClass(frozenset({k}))
    gens = MatGroupGens(part.rank, tuple(actions))
    result: OrbitResult = orbit_bfs(gens, free, cap)
    if isinstance(result, OrbitCapExceeded):
        return ClassCapExceeded(cap)
    return ExactClass(frozenset(v + tors for v in result.vectors))


def _witness_element(group: ConcreteGroup, witness):
    """The concrete group element a verdict witness talks about."""
    from .analyzer import (
        KernelTorsionWitness,
        KernelVectorWitness,
        QuotientLiftWitness,
        TrivialGroupWitness,
    )

    if isinstance(witness, KernelVectorWitness):
        part = group.kernel_part
        pad = (0,) * (len(part.identity) - len(witness.vector))
        return group.kernel_element(tuple(witness.vector) + pad)
    if isinstance(witness, KernelTorsionWitness):
        part = group.kernel_part
        if isinstance(part, _AbelianKernelPart):
            unit = [0] * (part.rank + len(part.divisors))
            unit[part.rank] = 1
            return group.kernel_element(tuple(unit))
        if isinstance(part, _FiniteKernelPart):
            return group.kernel_element(part.desc.elements[1])
        raise ValueError("torsion witness in a torsion-free kernel")
    if isinstance(witness, QuotientLiftWitness):
        q = group.quotient_element_from_word(witness.word)
        if witness.conjugator is not None:
            return (word_inverse(witness.conjugator), q)
        return group.lift(q)
    if isinstance(witness, TrivialGroupWitness):
        return group.identity
    raise TypeError(f"unknown witness {witness!r}")


def crosscheck(spec: ExtensionSpec, report, radius: int = 6, cap: int = 5000,
               samples: int = 20, orbit_cap: int = 10_000):
    """Compare a verdict against the materialized split extension.

    Negative verdicts: the witness's class must close (and, for abelian
    kernels, agree with the exact orbit).  Positive verdicts: none of the
    sampled nontrivial elements may close its class within the radius and
    cap.  Unknown verdicts only gather evidence.

    Returns ``(summary_dict, growth_curve)`` where the curve belongs to
    the witness (negative case) or the first sample.
    """
    from .analyzer import KernelTorsionWitness, KernelVectorWitness, TrivialGroupWitness

    group = materialize(spec)
    summary = {"radius": radius, "cap": cap}

    if report.verdict == "not_icc":
        element = _witness_element(group, report.witness)
        curve = conjugacy_ball(group, element, radius, cap)
        check = {"kind": "witness-ball", "closed_at": curve.closed_at, "size": curve.final_size}
        consistent = curve.is_closed
        if isinstance(report.witness, TrivialGroupWitness):
            consistent = True
        elif isinstance(report.witness, KernelVectorWitness) and isinstance(
            group.kernel_part, _AbelianKernelPart
        ):
            exact = exact_abelian_class(group, element[0], orbit_cap)
            expected = frozenset(group.kernel_element(v)[0] for v in report.witness.orbit)
            check["kind"] = "witness-exact-class"
            check["exact_size"] = exact.size if isinstance(exact, ExactClass) else None
            consistent = (
                isinstance(exact, ExactClass)
                and exact.elements == expected
                and curve.is_closed
                and curve.final_size == exact.size
            )
        elif isinstance(report.witness, KernelTorsionWitness):
            consistent = curve.is_closed and curve.final_size <= report.witness.class_bound
        summary.update(
            {"mode": "witness", "witness_check": check,
             "samples_checked": 0, "finite_classes_found": 0,
             "consistent": bool(consistent)}
        )
        return summary, curve

    elements = group.sample_nontrivial(samples)
    curves = [conjugacy_ball(group, e, radius, cap) for e in elements]
    closed = sum(1 for c in curves if c.is_closed)
    consistent = closed == 0 if report.verdict == "icc" else True
    summary.update(
        {"mode": "samples", "witness_check": None,
         "samples_checked": len(elements), "finite_classes_found": closed,
         "consistent": bool(consistent)}
    )
    first = curves[0] if curves else conjugacy_ball(group, group.identity, radius, cap)
    return summary, first
