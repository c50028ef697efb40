"""Validated extension data: kernel, quotient, and the action assignment.

An extension is described by a kernel (abelian of finite rank with an
optional torsion chain, free, or finite), a quotient from the catalog,
and one action per quotient generator: a unimodular integer matrix for
abelian kernels, a free-group automorphism for free kernels.  The
assignment must extend to a homomorphism from the quotient, which is
checked exactly for finite and abelian (and product) quotients.

Only the action homomorphism matters for the verdicts downstream, so one
validated spec covers every extension (split or not) inducing the same
action; the oracle materializes the split representative.
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
    generator_labels,
    group_is_trivial,
    make_product,
)
from .intlinalg import IntMatrix
from .words import FreeAut


class ExtensionValidationError(ValueError):
    """The description is malformed or the actions violate the quotient's
    relations."""


class UnsupportedExtensionError(ValueError):
    """Structurally valid but outside the supported catalog."""


@dataclass(frozen=True)
class AbelianKernel:
    """Z^rank x Z/d1 x ... as a kernel; actions are matrices on Z^rank."""

    rank: int
    divisors: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rank < 0:
            raise ExtensionValidationError("negative kernel rank")
        for d in self.divisors:
            if d < 2:
                raise ExtensionValidationError("torsion divisors must be >= 2")
        for a, b in zip(self.divisors, self.divisors[1:]):
            if b % a:
                raise ExtensionValidationError(f"bad divisor chain: {a} does not divide {b}")

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.divisors


KernelDesc = AbelianKernel | FreeDesc | FiniteGroupDesc


@dataclass(frozen=True)
class ExtensionSpec:
    """A validated extension; build through :func:`make_extension`."""

    kernel: KernelDesc
    quotient: GroupDesc
    actions: tuple  # IntMatrix per quotient generator, or FreeAut, or ()

    @property
    def kernel_kind(self) -> str:
        if isinstance(self.kernel, AbelianKernel):
            return "abelian"
        if isinstance(self.kernel, FreeDesc):
            return "free"
        return "finite"


def _normalize_kernel(kernel, actions):
    """Fold catalog synonyms into the analyzer's kernel classes."""
    if isinstance(kernel, FgAbelianDesc):
        kernel = AbelianKernel(kernel.rank, kernel.divisors)
    if isinstance(kernel, FreeDesc) and kernel.rank == 1:
        # F_1 is Z: each automorphism is +-identity, acting as a 1x1 matrix.
        mats = []
        for a in actions:
            if not isinstance(a, FreeAut) or a.rank != 1:
                raise ExtensionValidationError("rank-1 free kernel expects rank-1 automorphisms")
            mats.append(IntMatrix.from_rows([[1 if a.images[0] == (1,) else -1]]))
        return AbelianKernel(1), tuple(mats)
    return kernel, tuple(actions)


def _normalize_quotient(q: GroupDesc) -> GroupDesc:
    if isinstance(q, FreeDesc) and q.rank == 1:
        return FgAbelianDesc(1, (), q.names)
    if isinstance(q, ProductDesc):
        return make_product([_normalize_quotient(f) for f in q.factors])
    return q


class _MatrixAlgebra:
    """Action-algebra hooks for abelian kernels."""

    def __init__(self, rank):
        self.rank = rank

    def validate(self, a):
        if not isinstance(a, IntMatrix):
            raise ExtensionValidationError("abelian kernel expects matrix actions")
        if a.nrows != self.rank or a.ncols != self.rank:
            raise ExtensionValidationError(
                f"action matrix is {a.nrows}x{a.ncols}, kernel rank is {self.rank}"
            )
        if not a.is_unimodular:
            raise ExtensionValidationError(f"non-unimodular matrix, det={a.det()}")

    def identity(self):
        return IntMatrix.identity(self.rank)

    def compose(self, a, b):
        return a @ b

    def power(self, a, n):
        return a ** n

    def equal(self, a, b):
        return a == b


class _AutAlgebra:
    """Action-algebra hooks for free kernels."""

    def __init__(self, rank):
        self.rank = rank

    def validate(self, a):
        if not isinstance(a, FreeAut):
            raise ExtensionValidationError("free kernel expects automorphism actions")
        if a.rank != self.rank:
            raise ExtensionValidationError("automorphism rank != kernel rank")

    def identity(self):
        return FreeAut.identity(self.rank)

    def compose(self, a, b):
        return a.compose(b)

    def power(self, a, n):
        return a.power(n)

    def equal(self, a, b):
        return a.images == b.images


def _validate_relations(quotient, actions, alg):
    """Check that generator images satisfy the quotient's relations.

    Finite quotients: theta extends iff theta(e) * theta(g) = theta(e g)
    across the element table.  Abelian quotients: images commute and
    torsion generators have the divisor's order.  Products additionally
    need cross-factor commutation; free factors impose nothing.
    """
    if isinstance(quotient, FiniteGroupDesc):
        from .catalog import perm_compose

        theta = {}
        for e, w in zip(quotient.elements, quotient.element_words):
            a = alg.identity()
            for letter in w:
                a = alg.compose(a, actions[letter - 1])
            theta[e] = a
        for e in quotient.elements:
            for i, g in enumerate(quotient.generators):
                lhs = alg.compose(theta[e], actions[i])
                if not alg.equal(lhs, theta[perm_compose(e, g)]):
                    raise ExtensionValidationError(
                        "relation violation: actions do not extend to the finite quotient"
                    )
    elif isinstance(quotient, FgAbelianDesc):
        for a, b in itertools.combinations(actions, 2):
            if not alg.equal(alg.compose(a, b), alg.compose(b, a)):
                raise ExtensionValidationError("relation violation: abelian quotient, non-commuting actions")
        for d, a in zip(quotient.divisors, actions[quotient.rank:]):
            if not alg.equal(alg.power(a, d), alg.identity()):
                raise ExtensionValidationError(
                    f"relation violation: torsion generator of order {d} maps to an action whose order does not divide {d}"
                )
    elif isinstance(quotient, FreeDesc):
        pass
    elif isinstance(quotient, ProductDesc):
        offset = 0
        slices = []
        for f in quotient.factors:
            n = generator_count(f)
            slices.append((f, actions[offset:offset + n]))
            offset += n
        for f, acts in slices:
            _validate_relations(f, acts, alg)
        for (_, acts1), (_, acts2) in itertools.combinations(slices, 2):
            for a in acts1:
                for b in acts2:
                    if not alg.equal(alg.compose(a, b), alg.compose(b, a)):
                        raise ExtensionValidationError(
                            "relation violation: actions of distinct product factors must commute"
                        )
    else:
        raise UnsupportedExtensionError(f"unsupported quotient class: {type(quotient).__name__}")


def make_extension(kernel, quotient, actions=()) -> ExtensionSpec:
    """Validate and normalize an extension description.

    Raises :class:`ExtensionValidationError` on malformed data or
    relation violations, :class:`UnsupportedExtensionError` on
    combinations outside the catalog.
    """
    quotient = _normalize_quotient(quotient)
    kernel, actions = _normalize_kernel(kernel, tuple(actions))
    ngens = generator_count(quotient)

    if isinstance(kernel, FiniteGroupDesc):
        if actions:
            raise UnsupportedExtensionError(
                "actions on finite kernels are not supported; omit the action lines"
            )
        return ExtensionSpec(kernel, quotient, ())

    if isinstance(kernel, AbelianKernel):
        if not actions:
            # Identity default; torsion-only kernels need no action data.
            actions = tuple(IntMatrix.identity(kernel.rank) for _ in range(ngens))
        if len(actions) != ngens:
            raise ExtensionValidationError(
                f"expected {ngens} actions (one per quotient generator), got {len(actions)}"
            )
        alg = _MatrixAlgebra(kernel.rank)
        for a in actions:
            alg.validate(a)
        _validate_relations(quotient, actions, alg)
        return ExtensionSpec(kernel, quotient, actions)

    if isinstance(kernel, FreeDesc):
        if not actions:
            actions = tuple(FreeAut.identity(kernel.rank) for _ in range(ngens))
        if len(actions) != ngens:
            raise ExtensionValidationError(
                f"expected {ngens} actions (one per quotient generator), got {len(actions)}"
            )
        alg = _AutAlgebra(kernel.rank)
        for a in actions:
            alg.validate(a)
        _validate_relations(quotient, actions, alg)
        return ExtensionSpec(kernel, quotient, actions)

    raise UnsupportedExtensionError(f"unsupported kernel class: {type(kernel).__name__}")


def quotient_generator_labels(spec: ExtensionSpec) -> tuple[str, ...]:
    return generator_labels(spec.quotient)
