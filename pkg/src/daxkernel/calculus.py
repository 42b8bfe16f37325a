"""Core dax formulas: basepoint rebasing, translation, and image enumeration.

All outputs live in the reduced ring (no identity term).  Reduction happens
eagerly at each formula boundary; intermediate pairing values stay
unreduced because the derivation rules are exact only before reduction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ModeError, SpecMismatchError
from .groups import Word, inv, mul, render_word
from . import ring as R
from .ring import RingElem
from .pairing import (
    PairingTable,
    SphereClass,
    lambda_flip,
    lambda_word,
    rebase_table,
)

ARCS = "arcs"
CIRCLES = "circles"


@dataclass(frozen=True)
class DaxContext:
    """A pairing table together with the scene mode and circle class."""

    table: PairingTable
    s_class: Word
    mode: str

    def __post_init__(self):
        if self.mode not in (ARCS, CIRCLES):
            raise ModeError(f"unknown mode {self.mode!r}")
        if self.s_class.spec != self.table.spec:
            raise SpecMismatchError("circle class over a different spec")
        if self.mode == ARCS and not self.s_class.is_identity:
            raise ModeError("arcs mode carries no circle class")

    @property
    def d(self) -> int:
        return self.table.dimension

    @property
    def spec(self):
        return self.table.spec


def arcs_context(table: PairingTable) -> DaxContext:
    return DaxContext(table, table.spec.identity(), ARCS)


def circles_context(table: PairingTable, s_class: Word) -> DaxContext:
    return DaxContext(table, s_class, CIRCLES)


def rebase_context(ctx: DaxContext, g: Word) -> DaxContext:
    """Context for the basepoint arc moved to g*u."""
    return DaxContext(rebase_table(ctx.table, g), ctx.s_class, ctx.mode)


def dax_rebase(a: SphereClass, ctx: DaxContext) -> RingElem:
    """Dax value over the scene's arc:  base value + red(lambda(a, u))."""
    return R.gr_add(a.base_dax, R.gr_bar_reduce(a.lambda_u))


def dax_translate(g: Word, a: SphereClass, ctx: DaxContext) -> RingElem:
    """Base dax of the translated class g*a:

        dax(g a) = g dax(a) g^-1 - red(lambda(g a, g)) + red(lambda(g, g a))
    """
    lam = R.left_mul(g, lambda_word(ctx.table, a, g))  # lambda(g a, g)
    out = R.gr_conj(g, a.base_dax)
    out = R.gr_add(out, R.gr_neg(R.gr_bar_reduce(lam)))
    out = R.gr_add(out, R.gr_bar_reduce(lambda_flip(lam, ctx.d)))
    return out


def dax_u_general(g: Word, a: SphereClass, ctx: DaxContext) -> RingElem:
    """Dax value over the arc for a translated class, valid for any class:

        dax_u(g a) = g dax_u(a) g^-1 + red(lambda(g a, u))
                     - red(lambda(g a, g u)) + red(lambda(g, g a))
    """
    lam_g = R.left_mul(g, lambda_word(ctx.table, a, g))   # lambda(g a, g)
    lam_u = R.left_mul(g, a.lambda_u)                     # lambda(g a, u)
    lam_gu = R.gr_add(lam_g, R.right_mul(lam_u, inv(g)))  # lambda(g a, g u)
    out = R.gr_conj(g, dax_rebase(a, ctx))
    out = R.gr_add(out, R.gr_bar_reduce(lam_u))
    out = R.gr_add(out, R.gr_neg(R.gr_bar_reduce(lam_gu)))
    out = R.gr_add(out, R.gr_bar_reduce(lambda_flip(lam_g, ctx.d)))
    return out


def dax_u_embedded(g: Word, a: SphereClass, ctx: DaxContext) -> RingElem:
    """Shortcut for classes with an embedded representative:

        dax_u(g a) = red(lambda(g a, u)) - red(lambda(g a, g)) + red(lambda(g, g a))

    Used as an independent cross-check of ``dax_u_general``.
    """
    if not a.embedded:
        raise ModeError(f"class {a.name!r} has no embedded representative")
    lam_g = R.left_mul(g, lambda_word(ctx.table, a, g))
    lam_u = R.left_mul(g, a.lambda_u)
    out = R.gr_bar_reduce(lam_u)
    out = R.gr_add(out, R.gr_neg(R.gr_bar_reduce(lam_g)))
    out = R.gr_add(out, R.gr_bar_reduce(lambda_flip(lam_g, ctx.d)))
    return out


def dax_boundary_sphere(g: Word, ctx: DaxContext) -> RingElem:
    """Dax value of the translated boundary sphere of the removed ball:

        dax_u(g Phi) = red( (-1)^(d-1) g^-1  -  g s^-1 )

    Closed form; no table lookup.  Circles mode only.
    """
    if ctx.mode != CIRCLES:
        raise ModeError("the boundary sphere exists only in circles mode")
    sign = 1 if (ctx.d - 1) % 2 == 0 else -1
    val = R.gr_add(R.monomial(inv(g), sign),
                   R.monomial(mul(g, inv(ctx.s_class)), -1))
    return R.gr_bar_reduce(val)


def dax_image(ctx: DaxContext, enumeration) -> list[RingElem]:
    """Dax values of all translated generators over the enumeration window.

    Zero values are dropped and duplicates removed; the order is the
    deterministic enumeration order (classes first, then boundary spheres
    in circles mode).
    """
    out: list[RingElem] = []
    seen = set()

    def push(val: RingElem):
        if val.is_zero:
            return
        if val not in seen:
            seen.add(val)
            out.append(val)

    for g in enumeration:
        for a in ctx.table.classes:
            push(dax_u_general(g, a, ctx))
    if ctx.mode == CIRCLES:
        for g in enumeration:
            push(dax_boundary_sphere(g, ctx))
    return out


def translated_class(ctx: DaxContext, h: Word, a: SphereClass) -> SphereClass:
    """The class h*a as a derived SphereClass with shifted rows.

    base dax via the translation formula; pairing rows pick up a left factor.
    """
    rows = tuple((gen, R.left_mul(h, row)) for gen, row in a.lambda_gen)
    name = a.name if h.is_identity else f"({render_word(h)})*{a.name}"
    return SphereClass(
        name=name,
        embedded=a.embedded and h.is_identity,
        base_dax=dax_translate(h, a, ctx),
        lambda_u=R.left_mul(h, a.lambda_u),
        lambda_gen=rows,
    )
