"""Text format round-trips and error reporting."""

import math

import pytest

from circlepat.files import (
    ParseError,
    bundled_path,
    load_bundled_surface,
    parse_radii,
    parse_region,
    parse_surface,
    serialize_radii,
    serialize_region,
    serialize_surface,
    write_text_atomic,
)

BUNDLED = [
    "genus2_regular.surface",
    "genus2_quad.surface",
    "genus2_pocket.surface",
    "genus2_mixed.surface",
]


@pytest.mark.parametrize("name", BUNDLED)
def test_surface_serialize_is_fixpoint(name):
    text = bundled_path(name).read_text()
    surface, weights = parse_surface(text)
    once = serialize_surface(surface, weights)
    again = serialize_surface(*parse_surface(once))
    assert once == again


def test_surface_parse_basics(regular):
    surface, weights = regular
    assert surface.name == "genus2-regular"
    assert len(surface.vertices) == 6
    assert all(t == 0.0 for t in weights.values())


def test_pi_literal_is_exact():
    text = "surface t\nvertex 0\nvertex 1\nedge 0 : 0 1 theta=pi*1/2\n"
    _, weights = parse_surface(text)
    assert weights[0] == math.pi / 2  # exact, not a decimal approximation
    text = text.replace("pi*1/2", "pi*3/7")
    _, weights = parse_surface(text)
    assert weights[0] == math.pi * 3 / 7


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError, match="line 3"):
        parse_surface("surface t\nvertex 0\nedge 0 0 1\n")
    with pytest.raises(ParseError, match="line 2"):
        parse_surface("surface t\nvertex x\n")
    with pytest.raises(ParseError, match="line 4"):
        parse_surface("surface t\nvertex 0\nvertex 1\nedge 0 : 0 1 theta=pi*1/0\n")
    with pytest.raises(ParseError, match="duplicate edge"):
        parse_surface("surface t\nvertex 0\nedge 0 : 0 0\nedge 0 : 0 0\n")
    with pytest.raises(ParseError, match="unknown edge"):
        parse_surface("surface t\nvertex 0\nface 0 : +1 +2 +3\n")
    with pytest.raises(ParseError, match="sign"):
        parse_surface("surface t\nvertex 0\nedge 0 : 0 0\nface 0 : 0 0 0\n")


def test_comments_and_blank_lines_ignored():
    text = "# header\n\nsurface t\nvertex 0  # trailing\nvertex 1\nedge 0 : 0 1\n"
    surface, _ = parse_surface(text)
    assert surface.vertices == [0, 1]


def test_radii_roundtrip():
    text = serialize_radii("demo", 1.5e-12, {0: 0.25, 3: 1.75})
    name, residual, radii = parse_radii(text)
    assert name == "demo"
    assert residual == 1.5e-12
    assert radii == {0: 0.25, 3: 1.75}
    assert serialize_radii(name, residual, radii) == text


def test_radii_parse_errors():
    with pytest.raises(ParseError, match="header"):
        parse_radii("radius 0 1.0\n")
    with pytest.raises(ParseError, match="positive"):
        parse_radii("radii for t residual 0.0\nradius 0 -1.0\n")
    with pytest.raises(ParseError, match="line 2"):
        parse_radii("radii for t residual 0.0\nradius 0 abc\n")


def test_region_roundtrip():
    face, corners = parse_region(bundled_path("square.region").read_text())
    assert face == 1
    assert len(corners) == 4
    text = serialize_region(face, corners)
    assert parse_region(text) == (face, corners)


def test_region_parse_errors():
    with pytest.raises(ParseError, match="header"):
        parse_region("corner 0 0\ncorner 1 0\ncorner 0 1\n")
    with pytest.raises(ParseError, match="3 corners"):
        parse_region("region for face 0\ncorner 0 0\ncorner 1 0\n")


def test_write_text_atomic(tmp_path):
    target = tmp_path / "out.txt"
    write_text_atomic(target, "first\n")
    write_text_atomic(target, "second\n")
    assert target.read_text() == "second\n"
    assert list(tmp_path.iterdir()) == [target]  # no temp file left behind


def test_load_bundled_unknown_name():
    with pytest.raises(OSError):
        load_bundled_surface("no_such_instance.surface")
