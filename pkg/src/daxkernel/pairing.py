"""The equivariant intersection pairing, stored on generators and extended.

A sphere class ``a`` carries three kinds of stored data: its base dax value
(zero when the class has an embedded representative), its pairing against
the basepoint arc, and its pairing against each group generator.  Every
other evaluation is derived from the structural rules

    lambda(a, 1)      = 0
    lambda(a, g*k)    = lambda(a, g) + lambda(a, k) * bar(g)
    lambda(a, g^-1)   = -lambda(a, g) * g
    lambda(g1*a1 + g2*a2, k) = g1*lambda(a1, k) + g2*lambda(a2, k)
    lambda(k, a)      = (-1)^(d-1) * bar(lambda(a, k))

The derivation rule makes lambda(a, -) a crossed homomorphism, so stored
rows must vanish on the group's defining relators (commutators of commuting
generators, and g^m for finite cyclic generators).  That consistency is
checked when a table is built; geometric pairings always satisfy it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PairingDataError, SpecMismatchError
from .groups import GroupSpec, Word, inv, mul
from . import ring as R
from .ring import RingElem


@dataclass(frozen=True)
class SphereClass:
    """A generator of the sphere-class module, with its stored pairing rows."""

    name: str
    embedded: bool
    base_dax: RingElem
    lambda_u: RingElem
    lambda_gen: tuple[tuple[str, RingElem], ...]

    def lambda_of(self, gen: str) -> RingElem:
        for name, row in self.lambda_gen:
            if name == gen:
                return row
        raise PairingDataError(f"class {self.name!r} has no pairing row for generator {gen!r}")


def sphere_class(spec: GroupSpec, name: str, embedded: bool, base_dax: RingElem,
                 lambda_u: RingElem, lambda_gen: dict[str, RingElem]) -> SphereClass:
    """Build a SphereClass with rows in generator declaration order.

    Missing rows default to zero.
    """
    rows = tuple((g, lambda_gen.get(g, R.zero(spec))) for g in spec.generators)
    return SphereClass(name, embedded, base_dax, lambda_u, rows)


@dataclass(frozen=True)
class PairingTable:
    """Pairing data of all sphere-class generators for one scene.

    ``u_class`` records the group image of the basepoint arc; the stored
    ``lambda_u`` rows are the authoritative pairing values (the arc class
    need not come from the group at all).
    """

    spec: GroupSpec
    dimension: int
    classes: tuple[SphereClass, ...]
    u_class: Word

    def __post_init__(self):
        if self.dimension < 3:
            raise PairingDataError("ambient dimension must be >= 3")
        if self.u_class.spec != self.spec:
            raise SpecMismatchError("basepoint arc word over a different spec")
        seen = set()
        for a in self.classes:
            if a.name in seen:
                raise PairingDataError(f"duplicate sphere class name {a.name!r}")
            seen.add(a.name)
            for elem in (a.base_dax, a.lambda_u, *(row for _, row in a.lambda_gen)):
                if elem.spec != self.spec:
                    raise SpecMismatchError(
                        f"class {a.name!r} carries data over a different spec")
            if tuple(g for g, _ in a.lambda_gen) != self.spec.generators:
                raise PairingDataError(
                    f"class {a.name!r} rows do not cover the generators in order")
            if not R.is_reduced(a.base_dax):
                raise PairingDataError(
                    f"class {a.name!r}: base dax value must have no identity term")
            if a.embedded and not a.base_dax.is_zero:
                raise PairingDataError(
                    f"class {a.name!r} is embedded, so its base dax value must vanish")
            _check_row_consistency(self.spec, a)

    def by_name(self, name: str) -> SphereClass:
        for a in self.classes:
            if a.name == name:
                return a
        raise PairingDataError(f"no sphere class named {name!r}")


def _relators(spec: GroupSpec) -> list[tuple[str, list[tuple[str, int]]]]:
    rels = []
    gens = spec.generators
    for i, g in enumerate(gens):
        for h in gens[i + 1:]:
            if spec.commute(g, h):
                rels.append((f"[{g},{h}]", [(g, 1), (h, 1), (g, -1), (h, -1)]))
    for fac in spec.factors:
        if fac.order:
            g = fac.gens[0]
            rels.append((f"{g}^{fac.order}", [(g, fac.order)]))
    return rels


def _check_row_consistency(spec: GroupSpec, a: SphereClass):
    for label, letters in _relators(spec):
        val = _lambda_raw(spec, a, letters)
        if not val.is_zero:
            raise PairingDataError(
                f"class {a.name!r}: pairing rows violate the derivation rule on"
                f" relator {label} (value {val})")


def _lambda_letter(spec: GroupSpec, a: SphereClass, gen: str, exp: int) -> RingElem:
    """lambda(a, gen^exp) from the stored row via the derivation rule."""
    row = a.lambda_of(gen)
    if exp == 0 or row.is_zero:
        return R.zero(spec)
    g = spec.word([(gen, 1)])
    gbar = inv(g)
    if exp > 0:
        # lambda(a, g^n) = lambda(a, g) * (1 + gbar + ... + gbar^(n-1))
        acc = {}
        w = spec.identity()
        for _ in range(exp):
            acc[w] = acc.get(w, 0) + 1
            w = mul(w, gbar)
        return R.gr_mul(row, R.from_terms(spec, acc))
    pos = _lambda_letter(spec, a, gen, -exp)
    power = spec.word([(gen, -exp)])
    return R.gr_neg(R.right_mul(pos, power))


def _lambda_raw(spec: GroupSpec, a: SphereClass, letters) -> RingElem:
    # lambda(a, l1 l2 ... ln) = sum_i lambda(a, li) * bar(l1 ... l(i-1))
    acc = R.zero(spec)
    prefix = spec.identity()
    for gen, exp in letters:
        piece = _lambda_letter(spec, a, gen, exp)
        if not piece.is_zero:
            acc = R.gr_add(acc, R.right_mul(piece, inv(prefix)))
        prefix = mul(prefix, spec.word([(gen, exp)]))
    return acc


def lambda_letters(spec: GroupSpec, a: SphereClass, letters) -> RingElem:
    """Derivation-rule evaluation on a raw letter sequence (need not be reduced)."""
    return _lambda_raw(spec, a, letters)


def lambda_word(table: PairingTable, a: SphereClass, k: Word) -> RingElem:
    """lambda(a, k) for a group element k, derived from the stored rows."""
    if k.spec != table.spec:
        raise SpecMismatchError("word over a different spec")
    return _lambda_raw(table.spec, a, k.letters)


def lambda_arc(table: PairingTable, a: SphereClass, g: Word, use_u: bool) -> RingElem:
    """lambda(a, g*k) where k is the basepoint arc if use_u, else the trivial arc."""
    val = lambda_word(table, a, g)
    if use_u and not a.lambda_u.is_zero:
        val = R.gr_add(val, R.right_mul(a.lambda_u, inv(g)))
    return val


def lambda_linear(table: PairingTable, coeffs, k: Word, use_u: bool) -> RingElem:
    """lambda(sum g_i a_i, k*arc): group-ring linearity in the first slot."""
    acc = R.zero(table.spec)
    for g, a in coeffs:
        acc = R.gr_add(acc, R.left_mul(g, lambda_arc(table, a, k, use_u)))
    return acc


def lambda_flip(v: RingElem, d: int) -> RingElem:
    """lambda with the slots exchanged: (-1)^(d-1) * bar(value)."""
    if d < 3:
        raise PairingDataError("ambient dimension must be >= 3")
    flipped = R.gr_involute(v)
    return flipped if (d - 1) % 2 == 0 else R.gr_neg(flipped)


def lambdabar_conj_shift(table: PairingTable, a: SphereClass, g: Word,
                         k_is_u: bool) -> RingElem:
    """Reduced pairing of the translated class against the translated arc.

    Evaluates  red(lambda(g a, g))  +  g * red(lambda(a, k)) * g^-1,
    which equals the direct reduction of lambda(g a, g*k).
    """
    first = R.gr_bar_reduce(R.left_mul(g, lambda_word(table, a, g)))
    second = a.lambda_u if k_is_u else R.zero(table.spec)
    return R.gr_add(first, R.gr_conj(g, R.gr_bar_reduce(second)))


def rebase_table(table: PairingTable, g: Word) -> PairingTable:
    """The table for the basepoint arc moved to g*u.

    Only the arc rows change: lambda(a, g*u) = lambda(a, g) + lambda(a, u)*bar(g).
    """
    new_classes = []
    for a in table.classes:
        new_u = lambda_arc(table, a, g, use_u=True)
        new_classes.append(SphereClass(a.name, a.embedded, a.base_dax, new_u, a.lambda_gen))
    return PairingTable(table.spec, table.dimension, tuple(new_classes),
                        mul(g, table.u_class))
