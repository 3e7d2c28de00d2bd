"""Text formats: surface files, radii files, region files.

All three are line-based with `#` comments.  Serialization is canonical
(ids sorted, floats via repr) so parse -> serialize -> parse is a
fixpoint.  Angle literals of the form pi*<p>/<q> denote exact rational
multiples of pi and are converted to float once at parse time.
"""

from __future__ import annotations

import math
import os
import re
from importlib import resources
from pathlib import Path

from .surface import CellularSurface

_PI_LITERAL = re.compile(r"^pi\*(\d+)/(\d+)$")


class ParseError(ValueError):
    """Malformed input file; message carries file-relative line numbers."""


def _angle_value(token: str, where: str) -> float:
    m = _PI_LITERAL.match(token)
    if m:
        p, q = int(m.group(1)), int(m.group(2))
        if q == 0:
            raise ParseError(f"{where}: zero denominator in {token!r}")
        return math.pi * p / q
    try:
        return float(token)
    except ValueError:
        raise ParseError(f"{where}: bad angle literal {token!r}") from None


def _lines(text: str):
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield n, line


def parse_surface(text: str) -> tuple[CellularSurface, dict[int, float]]:
    name = ""
    vertices: list[int] = []
    edges: dict[int, tuple[int, int]] = {}
    weights: dict[int, float] = {}
    faces: dict[int, list[tuple[int, int]]] = {}
    for n, line in _lines(text):
        where = f"line {n}"
        parts = line.split()
        kind = parts[0]
        if kind == "surface":
            if len(parts) != 2:
                raise ParseError(f"{where}: expected 'surface <name>'")
            name = parts[1]
        elif kind == "vertex":
            if len(parts) != 2:
                raise ParseError(f"{where}: expected 'vertex <id>'")
            vertices.append(_int(parts[1], where))
        elif kind == "edge":
            if len(parts) < 5 or parts[2] != ":":
                raise ParseError(f"{where}: expected 'edge <id> : <v1> <v2> [theta=...]'")
            e = _int(parts[1], where)
            if e in edges:
                raise ParseError(f"{where}: duplicate edge id {e}")
            edges[e] = (_int(parts[3], where), _int(parts[4], where))
            weights[e] = 0.0
            for extra in parts[5:]:
                if extra.startswith("theta="):
                    weights[e] = _angle_value(extra[len("theta="):], where)
                else:
                    raise ParseError(f"{where}: unknown edge attribute {extra!r}")
        elif kind == "face":
            if len(parts) < 3 or parts[2] != ":":
                raise ParseError(f"{where}: expected 'face <id> : <signed edges>'")
            f = _int(parts[1], where)
            if f in faces:
                raise ParseError(f"{where}: duplicate face id {f}")
            darts = []
            for tok in parts[3:]:
                if tok.startswith("+"):
                    darts.append((_int(tok[1:], where), 1))
                elif tok.startswith("-"):
                    darts.append((_int(tok[1:], where), -1))
                else:
                    raise ParseError(f"{where}: face entries need a +/- sign, got {tok!r}")
            faces[f] = darts
        else:
            raise ParseError(f"{where}: unknown directive {kind!r}")
    for f, darts in faces.items():
        for e, _ in darts:
            if e not in edges:
                raise ParseError(f"face {f} references unknown edge {e}")
    return CellularSurface(vertices, edges, faces, name=name), weights


def serialize_surface(surface: CellularSurface, weights: dict[int, float]) -> str:
    out = [f"surface {surface.name or 'unnamed'}"]
    for v in surface.vertices:
        out.append(f"vertex {v}")
    for e in sorted(surface.edges):
        a, b = surface.edges[e]
        t = weights.get(e, 0.0)
        line = f"edge {e} : {a} {b}"
        if t != 0.0:
            line += f" theta={t!r}"
        out.append(line)
    for f in sorted(surface.faces):
        darts = " ".join(f"{'+' if s > 0 else '-'}{e}" for e, s in surface.faces[f])
        out.append(f"face {f} : {darts}")
    return "\n".join(out) + "\n"


def parse_radii(text: str) -> tuple[str, float, dict[int, float]]:
    name = ""
    residual = math.nan
    radii: dict[int, float] = {}
    saw_header = False
    for n, line in _lines(text):
        where = f"line {n}"
        parts = line.split()
        if parts[0] == "radii":
            if len(parts) != 5 or parts[1] != "for" or parts[3] != "residual":
                raise ParseError(f"{where}: expected 'radii for <name> residual <value>'")
            name = parts[2]
            residual = _float(parts[4], where)
            saw_header = True
        elif parts[0] == "radius":
            if len(parts) != 3:
                raise ParseError(f"{where}: expected 'radius <vertex> <value>'")
            v = _int(parts[1], where)
            r = _float(parts[2], where)
            if r <= 0.0:
                raise ParseError(f"{where}: radius must be positive, got {r!r}")
            radii[v] = r
        else:
            raise ParseError(f"{where}: unknown directive {parts[0]!r}")
    if not saw_header:
        raise ParseError("missing 'radii for <name> residual <value>' header")
    return name, residual, radii


def serialize_radii(name: str, residual: float, radii: dict[int, float]) -> str:
    out = [f"radii for {name} residual {residual!r}"]
    for v in sorted(radii):
        out.append(f"radius {v} {radii[v]!r}")
    return "\n".join(out) + "\n"


def parse_region(text: str) -> tuple[int, list[tuple[float, float]]]:
    face = None
    corners: list[tuple[float, float]] = []
    for n, line in _lines(text):
        where = f"line {n}"
        parts = line.split()
        if parts[0] == "region":
            if len(parts) != 4 or parts[1] != "for" or parts[2] != "face":
                raise ParseError(f"{where}: expected 'region for face <id>'")
            face = _int(parts[3], where)
        elif parts[0] == "corner":
            if len(parts) != 3:
                raise ParseError(f"{where}: expected 'corner <x> <y>'")
            corners.append((_float(parts[1], where), _float(parts[2], where)))
        else:
            raise ParseError(f"{where}: unknown directive {parts[0]!r}")
    if face is None:
        raise ParseError("missing 'region for face <id>' header")
    if len(corners) < 3:
        raise ParseError("a region needs at least 3 corners")
    return face, corners


def serialize_region(face: int, corners: list[tuple[float, float]]) -> str:
    out = [f"region for face {face}"]
    for x, y in corners:
        out.append(f"corner {x!r} {y!r}")
    return "\n".join(out) + "\n"


def _int(tok: str, where: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"{where}: expected integer, got {tok!r}") from None


def _float(tok: str, where: str) -> float:
    try:
        return float(tok)
    except ValueError:
        raise ParseError(f"{where}: expected number, got {tok!r}") from None


def write_text_atomic(path: str | Path, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never see a
    half-written file."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def bundled_path(name: str) -> Path:
    """Path of a data file shipped with the package."""
    return Path(str(resources.files("circlepat").joinpath("data", name)))


def load_bundled_surface(name: str) -> tuple[CellularSurface, dict[int, float]]:
    return parse_surface(bundled_path(name).read_text())
