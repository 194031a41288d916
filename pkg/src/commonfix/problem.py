"""Problem files: a line-oriented ``key = value`` format with four sections.

::

    # comments start with '#'
    [space]
    mode = matrix            # or: grid
    labels = 0 1 2 4         # matrix mode, optional (default 0 .. n-1)
    row = 0 1 3 7            # one 'row' line per matrix row
    # grid mode instead: origin = 0, step = 0.25, count = 5

    [map S]
    family = halving         # identity | halving | shift | affine
    divisor = 2              # family parameters as key = value

    [map T]
    4 -> 2                   # or explicit images, one line per point
    2 -> 1
    1 -> 0
    0 -> 0                   # (or: same-as = S)

    [contraction]
    kind = alpha-const       # alpha-const | alpha-from-gap | phi-linear | phi-rational
    alpha = 0.5
    alpha-usc = true         # declared, not verified

Points are named by label (matrix mode) or coordinate (grid mode). Map
families are resolved into explicit images when the file is loaded.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from . import maps
from .contraction import (
    AlphaOracle,
    CompactlyPositiveGap,
    ContractionSpec,
    Gauge,
    alpha_from_compact_gap,
)
from .maps import MultiMap
from .metric import DomainError, MetricSpace, validate_metric

__all__ = ["ProblemError", "ProblemFile", "parse_problem", "load_problem", "render_problem"]

KINDS = ("alpha-const", "alpha-from-gap", "phi-linear", "phi-rational")
GAP_FAMILIES = ("linear", "rational")
FAMILIES = ("identity", "halving", "shift", "affine")
_SECTION = re.compile(r"^\[\s*(space|map\s+[ST]|contraction)\s*\]$")


class ProblemError(Exception):
    """Problem text that does not parse or validate; ``errors`` is ``[(line, message)]``."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(
            f"line {ln}: {msg}" if ln else msg for ln, msg in self.errors))


@dataclass
class ProblemFile:
    space: MetricSpace
    S: MultiMap
    T: MultiMap
    kind: str
    params: dict = field(default_factory=dict)
    alpha_usc: bool = False
    phi_usc: bool = False

    def spec(self) -> ContractionSpec:
        """Materialize the declared contraction certificate."""
        p = self.params
        flags = dict(alpha_usc=self.alpha_usc, phi_usc=self.phi_usc)
        if self.kind == "alpha-const":
            return ContractionSpec("constant-alpha", alpha=AlphaOracle.constant(p["alpha"]), **flags)
        if self.kind == "alpha-from-gap":
            make = getattr(CompactlyPositiveGap, p["gap"])
            gap = make(self.space, p["c"])
            return ContractionSpec("alpha-duality", alpha=alpha_from_compact_gap(gap, self.space),
                                   gap=gap, **flags)
        if self.kind == "phi-linear":
            return ContractionSpec("phi-duality", phi=Gauge.linear(p["c"]), **flags)
        return ContractionSpec("phi-duality", phi=Gauge.rational(p["c"]), **flags)


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _number(value: str, key: str, ln: int, errors, integer: bool = False):
    try:
        return int(value) if integer else float(value)
    except ValueError:
        errors.append((ln, f"{key}: expected {'an integer' if integer else 'a number'}, got {value!r}"))
        return None


def _boolean(value: str, key: str, ln: int, errors):
    v = value.lower()
    if v in ("true", "yes", "1"):
        return True
    if v in ("false", "no", "0"):
        return False
    errors.append((ln, f"{key}: expected true or false, got {value!r}"))
    return None


def _sections(text: str):
    sections: dict[str, list[tuple[int, str]]] = {}
    heads: dict[str, int] = {}
    errors = []
    current = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        m = _SECTION.match(line)
        if m:
            current = " ".join(m.group(1).split())
            if current in sections:
                errors.append((ln, f"duplicate section [{current}]"))
            sections.setdefault(current, [])
            heads[current] = ln
            continue
        if line.startswith("["):
            errors.append((ln, f"unknown section {line}"))
            current = None
            continue
        if current is None:
            errors.append((ln, f"content outside any section: {line!r}"))
            continue
        sections[current].append((ln, line))
    return sections, heads, errors


def _key_values(lines, errors, repeat=("row",)):
    kv: dict[str, tuple[int, str]] = {}
    multi: dict[str, list[tuple[int, str]]] = {k: [] for k in repeat}
    other = []
    for ln, line in lines:
        if "->" in line:
            other.append((ln, line))
            continue
        if "=" not in line:
            errors.append((ln, f"expected 'key = value', got {line!r}"))
            continue
        key, value = (s.strip() for s in line.split("=", 1))
        if key in multi:
            multi[key].append((ln, value))
        elif key in kv:
            errors.append((ln, f"duplicate key {key!r}"))
        else:
            kv[key] = (ln, value)
    return kv, multi, other


def _parse_space(lines, head, errors) -> Optional[MetricSpace]:
    kv, multi, other = _key_values(lines, errors)
    for ln, line in other:
        errors.append((ln, f"unexpected line in [space]: {line!r}"))
    if "mode" not in kv:
        errors.append((head, "[space] needs 'mode = matrix' or 'mode = grid'"))
        return None
    ln, mode = kv.pop("mode")
    try:
        if mode == "grid":
            vals = {}
            for key, integer in (("origin", False), ("step", False), ("count", True)):
                if key not in kv:
                    errors.append((head, f"grid space needs {key!r}"))
                    return None
                kln, raw = kv.pop(key)
                vals[key] = _number(raw, key, kln, errors, integer)
            if None in vals.values():
                return None
            space = MetricSpace.grid(vals["origin"], vals["step"], vals["count"])
        elif mode == "matrix":
            rows = []
            for rln, raw in multi["row"]:
                row = [_number(tok, "row", rln, errors) for tok in raw.split()]
                rows.append(row)
            if not rows:
                errors.append((head, "matrix space needs at least one 'row' line"))
                return None
            if any(None in r for r in rows):
                return None
            labels = None
            if "labels" in kv:
                labels = kv.pop("labels")[1].split()
            space = MetricSpace.from_matrix(rows, labels=labels, validate=False)
            report = validate_metric(space)
            if not report.valid:
                errors.append((multi["row"][0][0], f"not a metric: {report.violation}"))
                return None
        else:
            errors.append((ln, f"unknown space mode {mode!r}"))
            return None
    except DomainError as exc:
        errors.append((head, str(exc)))
        return None
    for key, (kln, _) in kv.items():
        errors.append((kln, f"unknown [space] key {key!r}"))
    return space


def _parse_map(name, lines, head, space, errors, resolved) -> Optional[MultiMap]:
    kv, _, explicit = _key_values(lines, errors, repeat=())
    if "same-as" in kv:
        ln, other = kv.pop("same-as")
        if other not in resolved or resolved[other] is None:
            errors.append((ln, f"same-as refers to undefined map {other!r}"))
            return None
        return MultiMap(space, resolved[other].images, name)
    if "family" in kv:
        if explicit:
            errors.append((explicit[0][0], "explicit images and 'family' cannot be combined"))
            return None
        ln, family = kv.pop("family")
        if family not in FAMILIES:
            errors.append((ln, f"unknown map family {family!r}"))
            return None
        params = {}
        spec = {"identity": {}, "halving": {"divisor": float}, "shift": {"offset": int},
                "affine": {"target": float, "factor": float, "width": int}}[family]
        for key, (kln, raw) in kv.items():
            if key not in spec:
                errors.append((kln, f"unknown parameter {key!r} for family {family}"))
                continue
            v = _number(raw, key, kln, errors, spec[key] is int)
            if v is not None:
                params[key] = v
        try:
            made = getattr(maps, family)(space, **params)
        except (DomainError, TypeError) as exc:
            errors.append((ln, f"map {name}: {exc}"))
            return None
        return MultiMap(space, made.images, name)
    for key, (kln, _) in kv.items():
        errors.append((kln, f"unknown [map {name}] key {key!r}"))
    images: dict[int, tuple[int, list[int]]] = {}
    ok = True
    for ln, line in explicit:
        lhs, rhs = (s.strip() for s in line.split("->", 1))
        try:
            x = space.lookup(lhs)
            ys = [space.lookup(tok) for tok in rhs.split()]
        except DomainError as exc:
            errors.append((ln, f"map {name}: {exc}"))
            ok = False
            continue
        if not ys:
            errors.append((ln, f"map {name}: empty image for {lhs}"))
            ok = False
            continue
        if x in images:
            errors.append((ln, f"map {name}: point {lhs} assigned twice"))
            ok = False
            continue
        images[x] = (ln, ys)
    if not ok:
        return None
    missing = [space.label(x) for x in space.points() if x not in images]
    if missing:
        errors.append((head, f"map {name}: no image for point(s) {' '.join(missing)}"))
        return None
    return MultiMap(space, [images[x][1] for x in space.points()], name)


def _parse_contraction(lines, head, errors):
    kv, _, other = _key_values(lines, errors, repeat=())
    for ln, line in other:
        errors.append((ln, f"unexpected line in [contraction]: {line!r}"))
    flags = {}
    for key in ("alpha-usc", "phi-usc"):
        if key in kv:
            ln, raw = kv.pop(key)
            flags[key.replace("-", "_")] = bool(_boolean(raw, key, ln, errors))
    if "kind" not in kv:
        errors.append((head, "[contraction] needs 'kind'"))
        return None
    ln, kind = kv.pop("kind")
    if kind not in KINDS:
        errors.append((ln, f"unknown contraction kind {kind!r}"))
        return None
    params = {}
    wanted = {"alpha-const": {"alpha": None}, "alpha-from-gap": {"gap": "linear", "c": None},
              "phi-linear": {"c": None}, "phi-rational": {"c": 1.0}}[kind]
    for key, (kln, raw) in kv.items():
        if key not in wanted:
            errors.append((kln, f"unknown parameter {key!r} for kind {kind}"))
            continue
        if key == "gap":
            if raw not in GAP_FAMILIES:
                errors.append((kln, f"unknown gap family {raw!r}"))
                continue
            params[key] = raw
        else:
            v = _number(raw, key, kln, errors)
            if v is not None:
                params[key] = v
    for key, default in wanted.items():
        if key not in params:
            if default is None:
                errors.append((head, f"kind {kind} needs {key!r}"))
                return None
            params[key] = default
    return kind, params, flags


def parse_problem(text: str) -> ProblemFile:
    """Parse and validate problem text, raising :class:`ProblemError` on any defect."""
    if not text.strip():
        raise ProblemError([(0, "empty problem file")])
    sections, heads, errors = _sections(text)
    for required in ("space", "map S", "map T", "contraction"):
        if required not in sections:
            errors.append((0, f"missing section [{required}]"))
    if errors:
        raise ProblemError(errors)
    space = _parse_space(sections["space"], heads["space"], errors)
    if space is None:
        raise ProblemError(errors)
    resolved: dict[str, Optional[MultiMap]] = {}
    for name in ("S", "T"):
        key = f"map {name}"
        resolved[name] = _parse_map(name, sections[key], heads[key], space, errors, resolved)
    contraction = _parse_contraction(sections["contraction"], heads["contraction"], errors)
    if errors or contraction is None:
        raise ProblemError(errors or [(heads["contraction"], "invalid [contraction]")])
    kind, params, flags = contraction
    return ProblemFile(space, resolved["S"], resolved["T"], kind, params, **flags)


def load_problem(path) -> ProblemFile:
    with open(path, encoding="utf-8") as fh:
        return parse_problem(fh.read())


def _fmt(v: float) -> str:
    return repr(float(v))


def render_problem(problem: ProblemFile) -> str:
    """Render a problem in explicit form; parsing the result gives an equal problem."""
    space = problem.space
    out = ["[space]"]
    if space.mode == "grid":
        origin, step, count = space.grid_spec
        out += ["mode = grid", f"origin = {_fmt(origin)}", f"step = {_fmt(step)}", f"count = {count}"]
    else:
        out += ["mode = matrix", "labels = " + " ".join(space.labels)]
        out += ["row = " + " ".join(_fmt(v) for v in row) for row in space.matrix]
    for name, mp in (("S", problem.S), ("T", problem.T)):
        out += ["", f"[map {name}]"]
        out += [f"{space.label(x)} -> " + " ".join(space.label(y) for y in img)
                for x, img in enumerate(mp.images)]
    out += ["", "[contraction]", f"kind = {problem.kind}"]
    for key, value in problem.params.items():
        out.append(f"{key} = {value if isinstance(value, str) else _fmt(value)}")
    out.append(f"alpha-usc = {str(problem.alpha_usc).lower()}")
    out.append(f"phi-usc = {str(problem.phi_usc).lower()}")
    return "\n".join(out) + "\n"
