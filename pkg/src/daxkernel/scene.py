"""Scene files, presets, and canonical serialization.

A scene is the full input to a computation: ambient dimension, mode,
group, basepoint classes, sphere-class pairing data, whisker table, knots.
Scene files use a TOML-compatible key/value subset (documented in the
README); emission is canonical, so emit -> parse -> emit is the identity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

from .errors import GroupParseError, SceneError
from .groups import (
    GroupSpec,
    Word,
    inv,
    parse_group_spec,
    parse_word,
    render_group_spec,
    render_word,
    word_key,
)
from . import ring as R
from .ring import RingElem, parse_ring, render_ring
from .pairing import PairingTable, SphereClass, lambda_letters, sphere_class
from .calculus import ARCS, CIRCLES, DaxContext
from .traces import HomotopyTrace, KnotRecord

PRESET_NAMES = (
    "disk_d",
    "solid_torus_arcs",
    "solid_torus_circles",
    "s1_x_sphere",
    "aspherical",
    "three_mfd",
    "product_DkY",
)


@dataclass(frozen=True)
class ManifoldScene:
    dimension: int
    mode: str
    group: GroupSpec
    u_class: Word
    s_class: Word
    sphere_generators: tuple[SphereClass, ...] = ()
    whisker: tuple[tuple[Word, RingElem], ...] = ()
    window: int | None = None
    preset: str | None = None
    notes: tuple[str, ...] = ()
    knots: tuple[KnotRecord, ...] = ()

    def __post_init__(self):
        if self.mode not in (ARCS, CIRCLES):
            raise SceneError(f"mode must be 'arcs' or 'circles', got {self.mode!r}")
        if self.dimension < 3:
            raise SceneError("dimension must be >= 3")
        if self.mode == ARCS and not self.s_class.is_identity:
            raise SceneError("arcs scenes carry no circle class")
        if self.window is not None and self.window < 1:
            raise SceneError("window must be >= 1")
        if self.whisker and self.mode != CIRCLES:
            raise SceneError("whisker tables only make sense in circles mode")

    def table(self) -> PairingTable:
        return PairingTable(self.group, self.dimension, self.sphere_generators,
                            self.u_class)

    def context(self) -> DaxContext:
        return DaxContext(self.table(), self.s_class, self.mode)

    def whisker_map(self) -> dict[Word, RingElem]:
        return dict(self.whisker)


# ---------------------------------------------------------------------------
# construction helpers
# ---------------------------------------------------------------------------

def _class_from_fields(spec: GroupSpec, u_class: Word, fields: dict) -> SphereClass:
    name = fields.get("name")
    if not name:
        raise SceneError("sphere generator needs a name")
    embedded = bool(fields.get("embedded", False))
    base_dax = parse_ring(fields.get("base_dax", "0"), spec)
    lambda_gen = {g: parse_ring(v, spec)
                  for g, v in (fields.get("lambda_gen") or {}).items()}
    for g in lambda_gen:
        spec.factor_of(g)
    if "lambda_u" in fields and fields["lambda_u"] is not None:
        lambda_u = parse_ring(fields["lambda_u"], spec)
        probe = sphere_class(spec, name, embedded, base_dax, lambda_u, lambda_gen)
    else:
        # derive the arc row from the group image of the basepoint arc
        probe = sphere_class(spec, name, embedded, base_dax, R.zero(spec), lambda_gen)
        lambda_u = lambda_letters(spec, probe, u_class.letters)
        probe = SphereClass(name, embedded, base_dax, lambda_u, probe.lambda_gen)
    return probe


def make_scene(dimension: int, mode: str, group: str | GroupSpec,
               u: str | Word = "1", s: str | Word = "1",
               sphere_generators: list[dict] | tuple = (),
               whisker: dict | None = None, window: int | None = None,
               preset: str | None = None, notes=(), knots=()) -> ManifoldScene:
    spec = parse_group_spec(group) if isinstance(group, str) else group
    u_class = parse_word(u, spec) if isinstance(u, str) else u
    s_class = parse_word(s, spec) if isinstance(s, str) else s
    classes = tuple(
        c if isinstance(c, SphereClass) else _class_from_fields(spec, u_class, c)
        for c in sphere_generators)
    wh = []
    for k, v in (whisker or {}).items():
        kw = parse_word(k, spec) if isinstance(k, str) else k
        vr = parse_ring(v, spec) if isinstance(v, str) else v
        wh.append((kw, vr))
    wh.sort(key=lambda kv: word_key(kv[0]))
    knot_records = []
    for k in knots:
        if isinstance(k, KnotRecord):
            knot_records.append(k)
            continue
        events = []
        for sign, loop in k.get("trace", []):
            sgn = 1 if sign in (1, "+", "+1") else -1 if sign in (-1, "-", "-1") else None
            if sgn is None:
                raise SceneError(f"bad trace sign {sign!r} in knot {k.get('name')!r}")
            events.append((sgn, parse_word(loop, spec)))
        knot_records.append(KnotRecord(k["name"], HomotopyTrace(tuple(events))))
    return ManifoldScene(dimension, mode, spec, u_class, s_class, classes,
                         tuple(wh), window, preset, tuple(notes),
                         tuple(knot_records))


# ---------------------------------------------------------------------------
# presets: the worked examples with their pairing data filled in
# ---------------------------------------------------------------------------

def _phi_rows(spec: GroupSpec) -> dict[str, str]:
    """Pairing rows of the removed-ball boundary sphere: 1 - g^-1 per generator."""
    rows = {}
    for g in spec.generators:
        rows[g] = f"1 - {g}^-1"
    return rows


def preset_expand(name: str, params: dict | None = None) -> ManifoldScene:
    """Expand a named preset into a fully explicit scene."""
    p = dict(params or {})

    def take_int(key, default=None):
        if key not in p:
            if default is None:
                raise SceneError(f"preset {name!r} needs parameter {key}")
            return default
        v = p.pop(key)
        try:
            return int(v)
        except (TypeError, ValueError):
            raise SceneError(f"parameter {key} must be an integer") from None

    def take(key, default=None):
        return p.pop(key, default)

    if name == "disk_d":
        d = take_int("d", 5)
        scene = make_scene(d, ARCS, "1", preset=name,
                           notes=("simply connected: embedded and immersed arcs"
                                  " agree through the first interesting degree",))
    elif name == "solid_torus_arcs":
        d = take_int("d", 5)
        scene = make_scene(d, ARCS, "Z<t>", preset=name,
                           notes=("aspherical interior: no sphere classes, the"
                                  " target stays the free module on the window",))
    elif name == "solid_torus_circles":
        d = take_int("d", 5)
        k0 = take_int("k0")
        scene = make_scene(d, CIRCLES, "Z<t>", u=f"t^{k0}" if k0 else "1",
                           s=f"t^{k0}" if k0 else "1", preset=name)
    elif name == "s1_x_sphere":
        d = take_int("d", 5)
        w0 = take_int("w0")
        if d < 4:
            raise SceneError("s1_x_sphere needs dimension >= 4")
        notes = ()
        if d == 4:
            notes = ("dimension 4: the embedding-space group is the displayed"
                     " quotient plus one extra free summand from immersions",)
        # the arc is the circle minus the ball, so its group image is the
        # circle class itself; the sphere row lambda(i2, u) follows by the
        # derivation rule from lambda(i2, t) = 1
        scene = make_scene(
            d, CIRCLES, "Z<t>",
            u=f"t^{w0}" if w0 else "1",
            s=f"t^{w0}" if w0 else "1",
            sphere_generators=[{
                "name": "i2",
                "embedded": True,
                "lambda_gen": {"t": "1"},
            }],
            preset=name, notes=notes)
    elif name == "aspherical":
        group = take("group")
        if group is None:
            raise SceneError("preset 'aspherical' needs parameter group")
        d = take_int("d", 5)
        mode = take("mode", ARCS)
        s = take("s", "1")
        u = take("u", "1")
        scene = make_scene(d, mode, group, u=u, s=s, preset=name)
    elif name == "three_mfd":
        group = take("group")
        if group is None:
            raise SceneError("preset 'three_mfd' needs parameter group")
        mode = take("mode", ARCS)
        s = take("s", "1")
        u = take("u", "1")
        spheres = list(take("spheres", []) or [])
        phi = take("phi", "none")
        spec = parse_group_spec(group)
        if phi not in ("none", "boundary_arc", "circle"):
            raise SceneError("phi must be one of none, boundary_arc, circle")
        if phi != "none":
            s_word = parse_word(s, spec) if isinstance(s, str) else s
            lam_u = ("0" if phi == "boundary_arc"
                     else render_ring(R.gr_add(R.one(spec),
                                               R.monomial(inv(s_word), -1))))
            spheres.append({
                "name": "phi",
                "embedded": True,
                "lambda_gen": _phi_rows(spec),
                "lambda_u": lam_u,
            })
        for entry in spheres:
            entry.setdefault("embedded", True)
        scene = make_scene(3, mode, group, u=u, s=s, sphere_generators=spheres,
                           whisker=take("whisker", {}) or {}, preset=name)
    elif name == "product_DkY":
        group = take("group")
        if group is None:
            raise SceneError("preset 'product_DkY' needs parameter group")
        d = take_int("d", 5)
        spheres = take("spheres", {}) or {}
        gens = [{
            "name": nm,
            "embedded": False,
            "base_dax": val,
            "lambda_u": "0",
        } for nm, val in sorted(spheres.items())]
        scene = make_scene(d, ARCS, group, sphere_generators=gens, preset=name,
                           notes=("product with a disk factor: all pairing rows"
                                  " vanish, relations are conjugated base values",))
    else:
        raise SceneError(f"unknown preset {name!r}; known: {', '.join(PRESET_NAMES)}")

    if "window" in p:
        scene = replace(scene, window=take_int("window"))
    if p:
        raise SceneError(f"unused preset parameters: {', '.join(sorted(p))}")
    return scene


# ---------------------------------------------------------------------------
# scene file format (TOML-compatible subset)
# ---------------------------------------------------------------------------

def scene_to_dict(scene: ManifoldScene) -> dict:
    out: dict = {
        "dimension": scene.dimension,
        "mode": scene.mode,
        "group": render_group_spec(scene.group),
        "u": render_word(scene.u_class),
    }
    if scene.mode == CIRCLES:
        out["s"] = render_word(scene.s_class)
    if scene.window is not None:
        out["window"] = scene.window
    if scene.preset:
        out["preset"] = scene.preset
    if scene.notes:
        out["notes"] = list(scene.notes)
    if scene.sphere_generators:
        out["sphere_generators"] = [{
            "name": a.name,
            "embedded": a.embedded,
            "base_dax": render_ring(a.base_dax),
            "lambda_u": render_ring(a.lambda_u),
            "lambda_gen": {g: render_ring(row) for g, row in a.lambda_gen
                           if not row.is_zero},
        } for a in scene.sphere_generators]
    if scene.whisker:
        out["whisker"] = {render_word(k): render_ring(v) for k, v in scene.whisker}
    if scene.knots:
        out["knots"] = [{
            "name": k.name,
            "trace": [["+" if s > 0 else "-", render_word(w)]
                      for s, w in k.trace.events],
        } for k in scene.knots]
    return out


def scene_from_dict(data: dict) -> ManifoldScene:
    known = {"dimension", "mode", "group", "u", "s", "window", "preset", "notes",
             "sphere_generators", "whisker", "knots"}
    unknown = set(data) - known
    if unknown:
        raise SceneError(f"unknown scene keys: {', '.join(sorted(unknown))}")
    for key in ("dimension", "mode", "group"):
        if key not in data:
            raise SceneError(f"scene is missing required key {key!r}")
    return make_scene(
        dimension=data["dimension"],
        mode=data["mode"],
        group=data["group"],
        u=data.get("u", "1"),
        s=data.get("s", "1"),
        sphere_generators=data.get("sphere_generators", ()),
        whisker=data.get("whisker", {}),
        window=data.get("window"),
        preset=data.get("preset"),
        notes=tuple(data.get("notes", ())),
        knots=data.get("knots", ()),
    )


def dumps_scene(scene: ManifoldScene) -> str:
    return _dump_toml(scene_to_dict(scene))


def loads_scene(text: str) -> ManifoldScene:
    return scene_from_dict(_parse_toml(text))


def load_scene_file(path) -> ManifoldScene:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SceneError(f"cannot read scene file {path}: {exc}") from None
    try:
        return loads_scene(text)
    except GroupParseError as exc:
        raise SceneError(f"bad literal in scene file {path}: {exc}") from None


# -- writer ------------------------------------------------------------------

def _quote(s: str) -> str:
    out = s.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{out}"'


def _inline_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        return _quote(v)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_inline_value(x) for x in v) + "]"
    if isinstance(v, dict):
        inner = ", ".join(f"{_key(k)} = {_inline_value(x)}" for k, x in v.items())
        return "{" + inner + "}"
    raise SceneError(f"cannot serialize value {v!r}")


_BARE_KEY = re.compile(r"^[A-Za-z0-9_-]+$")


def _key(k: str) -> str:
    return k if _BARE_KEY.match(k) else _quote(k)


def _dump_toml(data: dict) -> str:
    lines = []
    tables = {}
    arrays = {}
    for k, v in data.items():
        if isinstance(v, dict):
            tables[k] = v
        elif isinstance(v, list) and v and all(isinstance(x, dict) for x in v):
            arrays[k] = v
        else:
            lines.append(f"{_key(k)} = {_inline_value(v)}")
    for name, table in tables.items():
        lines.append("")
        lines.append(f"[{name}]")
        for k, v in table.items():
            lines.append(f"{_key(k)} = {_inline_value(v)}")
    for name, entries in arrays.items():
        for entry in entries:
            lines.append("")
            lines.append(f"[[{name}]]")
            for k, v in entry.items():
                lines.append(f"{_key(k)} = {_inline_value(v)}")
    return "\n".join(lines) + "\n"


# -- reader ------------------------------------------------------------------

def _strip_comment(line: str) -> str:
    out = []
    in_str = False
    for ch in line:
        if ch == '"' and (not out or out[-1] != "\\"):
            in_str = not in_str
        if ch == "#" and not in_str:
            break
        out.append(ch)
    return "".join(out)


def _parse_scalar(text: str, i: int):
    n = len(text)
    while i < n and text[i] in " \t":
        i += 1
    if i >= n:
        raise SceneError("scene file: missing value")
    ch = text[i]
    if ch == '"':
        i += 1
        buf = []
        while i < n:
            c = text[i]
            if c == "\\" and i + 1 < n:
                nxt = text[i + 1]
                buf.append({"n": "\n", "t": "\t", '"': '"', "\\": "\\"}.get(nxt, nxt))
                i += 2
                continue
            if c == '"':
                return "".join(buf), i + 1
            buf.append(c)
            i += 1
        raise SceneError("scene file: unterminated string")
    if ch == "[":
        items = []
        i += 1
        while True:
            while i < n and text[i] in " \t,":
                i += 1
            if i < n and text[i] == "]":
                return items, i + 1
            val, i = _parse_scalar(text, i)
            items.append(val)
    if ch == "{":
        table = {}
        i += 1
        while True:
            while i < n and text[i] in " \t,":
                i += 1
            if i < n and text[i] == "}":
                return table, i + 1
            key, i = _parse_key(text, i)
            while i < n and text[i] in " \t":
                i += 1
            if i >= n or text[i] != "=":
                raise SceneError("scene file: expected '=' in inline table")
            val, i = _parse_scalar(text, i + 1)
            table[key] = val
    if text.startswith("true", i):
        return True, i + 4
    if text.startswith("false", i):
        return False, i + 5
    m = re.match(r"[+-]?\d+", text[i:])
    if m:
        return int(m.group(0)), i + m.end()
    raise SceneError(f"scene file: cannot parse value near {text[i:i+20]!r}")


def _parse_key(text: str, i: int):
    n = len(text)
    while i < n and text[i] in " \t":
        i += 1
    if i < n and text[i] == '"':
        return _parse_scalar(text, i)
    m = re.match(r"[A-Za-z0-9_-]+", text[i:])
    if not m:
        raise SceneError(f"scene file: bad key near {text[i:i+20]!r}")
    return m.group(0), i + m.end()


def _parse_toml(text: str) -> dict:
    root: dict = {}
    target = root
    lines = text.splitlines()
    idx = 0
    while idx < len(lines):
        line = _strip_comment(lines[idx]).strip()
        idx += 1
        if not line:
            continue
        if line.startswith("[["):
            if not line.endswith("]]"):
                raise SceneError(f"scene file: bad section {line!r}")
            name = line[2:-2].strip()
            target = {}
            root.setdefault(name, []).append(target)
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise SceneError(f"scene file: bad section {line!r}")
            name = line[1:-1].strip()
            target = root.setdefault(name, {})
            continue
        key, i = _parse_key(line, 0)
        while i < len(line) and line[i] in " \t":
            i += 1
        if i >= len(line) or line[i] != "=":
            raise SceneError(f"scene file: expected '=' in line {line!r}")
        value_text = line[i + 1:]
        # allow arrays to span lines: join until brackets balance
        while _open_brackets(value_text) > 0 and idx < len(lines):
            value_text += " " + _strip_comment(lines[idx]).strip()
            idx += 1
        val, j = _parse_scalar(value_text, 0)
        rest = value_text[j:].strip()
        if rest:
            raise SceneError(f"scene file: trailing input {rest!r}")
        target[key] = val
    return root


def _open_brackets(s: str) -> int:
    depth = 0
    in_str = False
    prev = ""
    for ch in s:
        if ch == '"' and prev != "\\":
            in_str = not in_str
        elif not in_str:
            if ch in "[{":
                depth += 1
            elif ch in "]}":
                depth -= 1
        prev = ch
    return depth
