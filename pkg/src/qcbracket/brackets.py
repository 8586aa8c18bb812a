"""The four dynamical brackets and their identity residuals.

Four candidate brackets act on mixed observables:

* ``poisson``      {A,B} on the classical pair only, operator products taken
                   in written order,
* ``commutator``   [A,B]/(i*hbar),
* ``aleksandrov``  commutator plus the symmetrized classical part
                   ([A,B]/(i*hbar) + ({A,B} - {B,A})/2),
* ``normal_order`` commutator plus a classical part that Poisson-brackets the
                   x,k coefficient functions and concatenates the q,p words
                   without reordering.

Residual functionals (Jacobi, Leibniz, the sector-factorization axioms, the
classical limit) return the full residual observable so that violation
magnitudes are inspectable exactly, not just as booleans.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .algebra import (
    HbarSeries,
    Observable,
    QCMonomial,
    divide_by_i_hbar,
    hbar_zero,
    partial_k,
    partial_x,
    symbol_poisson,
)


class InvalidSectorError(ValueError):
    """An input violated a purity requirement (classical-only or quantum-only)."""


class BracketKind(enum.Enum):
    POISSON = "poisson"
    COMMUTATOR = "commutator"
    ALEKSANDROV = "aleksandrov"
    NORMAL_ORDER = "normal_order"

    @classmethod
    def from_name(cls, name: str) -> "BracketKind":
        """Resolve a command-line spelling, e.g. 'normal' or 'normal-order'."""
        key = name.strip().lower().replace("-", "_")
        if key == "normal":
            key = "normal_order"
        for kind in cls:
            if kind.value == key:
                return kind
        raise ValueError(f"unknown bracket kind {name!r}")


MIXED_KINDS = (BracketKind.ALEKSANDROV, BracketKind.NORMAL_ORDER)


@dataclass(frozen=True)
class ResidualReport:
    """One identity check: the inputs, the bracket used, and the exact residual."""

    inputs: tuple[Observable, ...]
    kind: BracketKind
    residual: Observable
    is_zero: bool

    @classmethod
    def build(cls, kind: BracketKind, inputs: Iterable[Observable],
              residual: Observable) -> "ResidualReport":
        return cls(tuple(inputs), kind, residual, not residual)


def quantum_bracket(a: Observable, b: Observable) -> Observable:
    """(A,B)_q = (AB - BA)/(i*hbar)."""
    return divide_by_i_hbar(a * b - b * a)


def ordered_poisson(a: Observable, b: Observable) -> Observable:
    """{A,B} on the classical pair, with operator products in written order.

    dA/dx * dB/dk - dA/dk * dB/dx.  On purely classical inputs this is the
    ordinary Poisson bracket; on mixed inputs the written-order products make
    it non-antisymmetric, which is why the symmetrized combination below
    exists.
    """
    return partial_x(a) * partial_k(b) - partial_k(a) * partial_x(b)


def aleksandrov_bracket(a: Observable, b: Observable) -> Observable:
    """Commutator part plus the explicitly symmetrized classical part."""
    sym = ordered_poisson(a, b) - ordered_poisson(b, a)
    return quantum_bracket(a, b) + Fraction(1, 2) * sym


def normal_bracket_classical(a: Observable, b: Observable) -> Observable:
    """Classical part of the normal-ordered bracket.

    For terms a_nm(x,k) q^n p^m and b_rt(x,k) q^r p^t the contribution is
    {a_nm, b_rt} q^(n+r) p^(m+t): the x,k coefficients are Poisson-bracketed
    and the quantum words concatenate with no reordering, so no hbar is
    generated.  On classical monomials {x^n1 k^m1, x^n2 k^m2} collapses to
    (n1*m2 - m1*n2) x^(n1+n2-1) k^(m1+m2-1).
    """
    acc: dict[QCMonomial, HbarSeries] = {}
    for m1, c1 in a.terms.items():
        if m1.n_x == 0 and m1.n_k == 0:
            continue
        for m2, c2 in b.terms.items():
            weight = m1.n_x * m2.n_k - m1.n_k * m2.n_x
            if weight == 0:
                continue
            mono = QCMonomial(
                m1.n_x + m2.n_x - 1,
                m1.n_k + m2.n_k - 1,
                m1.n_q + m2.n_q,
                m1.n_p + m2.n_p,
            )
            term = (c1 * c2) * weight
            prev = acc.get(mono)
            acc[mono] = term if prev is None else prev + term
    return Observable(acc)


def normal_bracket(a: Observable, b: Observable) -> Observable:
    """Normal-ordered bracket: quantum part plus the coefficient-Poisson part."""
    return quantum_bracket(a, b) + normal_bracket_classical(a, b)


_DISPATCH = {
    BracketKind.POISSON: ordered_poisson,
    BracketKind.COMMUTATOR: quantum_bracket,
    BracketKind.ALEKSANDROV: aleksandrov_bracket,
    BracketKind.NORMAL_ORDER: normal_bracket,
}


def bracket(kind: BracketKind, a: Observable, b: Observable) -> Observable:
    """Evaluate the bracket of the chosen kind."""
    return _DISPATCH[kind](a, b)


def jacobi_residual(kind: BracketKind, a: Observable, b: Observable,
                    c: Observable) -> ResidualReport:
    """((A,B),C) + ((B,C),A) + ((C,A),B); zero exactly when Jacobi holds."""
    fn = _DISPATCH[kind]
    residual = fn(fn(a, b), c) + fn(fn(b, c), a) + fn(fn(c, a), b)
    return ResidualReport.build(kind, (a, b, c), residual)


def leibniz_residual(kind: BracketKind, a: Observable, b: Observable,
                     c: Observable) -> ResidualReport:
    """(AB,C) - (A,C)B - A(B,C), operator products in written order."""
    fn = _DISPATCH[kind]
    residual = fn(a * b, c) - fn(a, c) * b - a * fn(b, c)
    return ResidualReport.build(kind, (a, b, c), residual)


def axiom_residuals(kind: BracketKind, c: Observable, q: Observable,
                    c2: Observable, q2: Observable) -> tuple[ResidualReport, ResidualReport]:
    """Residuals of the two sector-factorization axioms.

    With C, C' purely classical and Q, Q' purely quantum:

        (CQ, C') - {C, C'} Q
        (CQ, Q') - ([Q, Q']/(i*hbar)) C

    Mixed inputs are rejected rather than silently projected.
    """
    for label, obs in (("C", c), ("C'", c2)):
        if not obs.is_classical():
            raise InvalidSectorError(f"{label} must be purely classical")
    for label, obs in (("Q", q), ("Q'", q2)):
        if not obs.is_quantum():
            raise InvalidSectorError(f"{label} must be purely quantum")
    cq = c * q
    first = bracket(kind, cq, c2) - ordered_poisson(c, c2) * q
    second = bracket(kind, cq, q2) - quantum_bracket(q, q2) * c
    return (
        ResidualReport.build(kind, (c, q, c2), first),
        ResidualReport.build(kind, (c, q, q2), second),
    )


def classical_limit_residual(kind: BracketKind, a: Observable,
                             b: Observable) -> ResidualReport:
    """hbar -> 0 of the bracket minus the symbol-level Poisson bracket.

    Any admissible bracket must collapse to the full commutative Poisson
    bracket in the classical limit.  The commutator kind only reproduces the
    q,p half, so it is checked on quantum-only inputs.
    """
    if kind not in (BracketKind.ALEKSANDROV, BracketKind.NORMAL_ORDER,
                    BracketKind.COMMUTATOR):
        raise ValueError(f"classical limit is not defined for kind {kind.value!r}")
    if kind is BracketKind.COMMUTATOR:
        if not (a.is_quantum() and b.is_quantum()):
            raise InvalidSectorError(
                "commutator classical limit requires quantum-only inputs")
    residual = hbar_zero(bracket(kind, a, b)) - symbol_poisson(
        hbar_zero(a), hbar_zero(b))
    return ResidualReport.build(kind, (a, b), residual)
