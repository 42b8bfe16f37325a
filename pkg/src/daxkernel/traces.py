"""Dax values of homotopy traces, the concordance fold, and universality.

A knot is recorded only by a chosen homotopy trace to the basepoint: the
ordered list of signed double-point loops.  The invariant of the trace is
the signed sum of its loops with identity loops discarded, read modulo a
relation set (and, for circles in dimension three, modulo the centralizer
orbit).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SceneError
from .groups import Word, inv, word_key
from . import ring as R
from .ring import RingElem
from . import snf
from .quotient import OrbitAction, QuotientSolver, RelationSet, centralizer_orbit_reduce


@dataclass(frozen=True)
class HomotopyTrace:
    """Ordered signed double-point loops of a generic homotopy."""

    events: tuple[tuple[int, Word], ...]

    def __post_init__(self):
        for sign, _ in self.events:
            if sign not in (1, -1):
                raise SceneError("trace event signs must be +1 or -1")


@dataclass(frozen=True)
class KnotRecord:
    name: str
    trace: HomotopyTrace


def concat_traces(t1: HomotopyTrace, t2: HomotopyTrace) -> HomotopyTrace:
    return HomotopyTrace(t1.events + t2.events)


def eval_dax_trace(t: HomotopyTrace, spec) -> RingElem:
    """Signed sum of the double-point loops, identity loops discarded."""
    acc: dict[Word, int] = {}
    for sign, loop in t.events:
        acc[loop] = acc.get(loop, 0) + sign
    return R.gr_bar_reduce(R.from_terms(spec, acc))


def mu2_reduce(v: RingElem) -> RingElem:
    """Canonical form modulo g^-1 - g: fold each term onto min(g, g^-1).

    Models the sheet-choice ambiguity of an immersed concordance; any
    consistent representative choice would do.
    """
    acc: dict[Word, int] = {}
    for w, c in v.items():
        wi = inv(w)
        target = w if word_key(w) <= word_key(wi) else wi
        acc[target] = acc.get(target, 0) + c
    return R.from_terms(v.spec, acc)


@dataclass
class KnotDax:
    """Dax data of one knot relative to a relation set."""

    name: str
    value: RingElem              # raw trace sum, reduced
    residue: RingElem            # canonical representative mod relations
    free_coords: tuple[int, ...]
    torsion_coords: tuple[int, ...]
    orbit_complete: bool = True
    orbit_size: int = 1


def dax_of_knot(k: KnotRecord, rs: RelationSet,
                action: OrbitAction | None = None,
                solver: QuotientSolver | None = None) -> KnotDax:
    """Coordinates of the knot's Dax class in the windowed quotient.

    With orbit action data (circles, dimension three) the value is first
    moved to its canonical orbit representative.
    """
    solver = solver or QuotientSolver(rs)
    value = eval_dax_trace(k.trace, rs.spec)
    residue = solver.canonical_residue(value)
    complete, size = True, 1
    if action is not None and action.centralizer:
        orbit = centralizer_orbit_reduce(value, rs, action.centralizer,
                                         dict(action.whisker), action.s_class)
        residue = orbit.representative
        complete, size = orbit.complete, orbit.size
    free, tors = solver.coords(residue)
    return KnotDax(k.name, value, residue, free, tors, complete, size)


# ---------------------------------------------------------------------------
# universality of the trace invariant among type <= 1 invariants
# ---------------------------------------------------------------------------

@dataclass
class Witness:
    """Certificate that the supplied values are not of type <= 1.

    ``combination`` maps knot names to integers y_K with
    sum y_K * DaxCoords(K) = 0 (mod ``modulus`` when set) while
    sum y_K * (values difference) is not.
    """

    combination: dict[str, int]
    modulus: int | None
    detail: str


def universality_witness(knots: list[KnotRecord], values: dict[str, tuple[int, ...]],
                         rs: RelationSet, action: OrbitAction | None = None):
    """Solve v(K) = v(base) + w(Dax(K)) for an integer-linear w.

    ``values`` maps knot names to integer vectors.  Returns
    (w_map, base_value) on success, where w_map gives the value of w on each
    window generator; returns a Witness when no such w exists.
    """
    if not knots:
        raise SceneError("universality check needs at least one knot")
    dim = None
    for k in knots:
        if k.name not in values:
            raise SceneError(f"no value supplied for knot {k.name!r}")
        v = values[k.name]
        if dim is None:
            dim = len(v)
        elif len(v) != dim:
            raise SceneError("all values must have the same length")

    solver = QuotientSolver(rs)
    data = [dax_of_knot(k, rs, action, solver) for k in knots]
    q = len(data[0].free_coords)
    # unknowns: w on the free quotient coordinates, plus the base value;
    # torsion coordinates force w = 0 there (values are torsion free), so a
    # knot pair differing only in torsion must have equal values.
    rows = [list(d.free_coords) + [1] for d in data]
    solutions = []
    for out in range(dim):
        b = [values[d.name][out] for d in data]
        x, failure = snf.solve_integer(rows, b)
        if failure is not None:
            combo = {d.name: y for d, y in zip(data, failure.combination) if y}
            kind = ("inconsistent integer combination" if failure.modulus is None
                    else f"inconsistency modulo {failure.modulus}")
            return Witness(combo, failure.modulus,
                           f"output coordinate {out}: {kind}")
        solutions.append(x)

    base_value = tuple(sol[q] for sol in solutions)
    # the target is torsion free, so w vanishes on torsion coordinates and is
    # determined by the free part of each generator's class
    w_map = {}
    for g in solver.generators:
        gen_free, _ = solver.coords(R.monomial(g))
        w_map[str(R.monomial(g))] = tuple(
            sum(sol[j] * gen_free[j] for j in range(q)) for sol in solutions)
    return w_map, base_value
