import json

import pytest

from psts import io
from psts.constructions import ag, bose, catalog, convolve, pappus, single_line, veblen, weave
from psts.core import InvalidStructure
from psts.groups import AbelianGroup

CORPUS = [
    lambda: weave(3, ag(2)),
    lambda: pappus(),
    lambda: bose(2),
    lambda: catalog("grassmannian(5)"),
    lambda: convolve(veblen(), AbelianGroup((2, 2)), (1, 0)),
    lambda: catalog("miter"),
]


@pytest.mark.parametrize("make", CORPUS)
@pytest.mark.parametrize("fmt", ["json", "text"])
def test_round_trip(make, fmt):
    s = make()
    text = io.dumps(s, fmt)
    back = io.loads(text, fmt)
    assert back == s and back.points == s.points and back.name == s.name
    assert io.dumps(back, fmt) == text


def test_json_schema():
    doc = json.loads(io.to_json(veblen()))
    assert set(doc) == {"name", "points", "lines"}
    assert all(L == sorted(L) for L in doc["lines"])
    assert json.loads(io.to_json(veblen(), indent=2)) == doc


def test_text_single_line():
    s = io.from_text("a b c\n")
    assert s == single_line() and s.points == ("a", "b", "c")


def test_text_comments_and_directives():
    s = io.from_text("# header\n@name tiny\n@points x y z w\nx y z  # the line\n\n")
    assert s.name == "tiny" and s.v == 4 and s.b == 1


def test_json_duplicate_label():
    with pytest.raises(io.FormatError, match="duplicate"):
        io.from_json('{"name": "", "points": ["a", "a", "b"], "lines": []}')


@pytest.mark.parametrize("text,where", [
    ("a b c\nd e\n", (2, 1)),
    ("a b c\n  a b b\n", (2, 3)),
    ("@points a b c\na b q\n", (2, 5)),
    ("@points a b a\n", (1, 13)),
    ("a b c\n@colour red\n", (2, 1)),
])
def test_text_errors_have_positions(text, where):
    with pytest.raises(io.FormatError) as e:
        io.from_text(text)
    assert (e.value.line, e.value.col) == where


def test_json_syntax_error_position():
    with pytest.raises(io.FormatError) as e:
        io.from_json('{"points": ["a",\n ]}')
    assert e.value.line == 2


@pytest.mark.parametrize("doc", [
    "[]",
    '{"points": "abc", "lines": []}',
    '{"points": ["a","b","c"], "lines": [[0, 1]]}',
    '{"points": ["a","b","c"], "lines": [[0, 1, "2"]]}',
    '{"points": ["a","b","c"], "lines": [], "extra": 1}',
])
def test_json_shape_errors(doc):
    with pytest.raises(io.FormatError):
        io.from_json(doc)


def test_non_psts_rejected_with_report():
    with pytest.raises(InvalidStructure) as e:
        io.from_text("a b c\na b d\n")
    assert e.value.violations
    with pytest.raises(InvalidStructure):
        io.from_json('{"points": ["a","b","c"], "lines": [[0, 1, 7]]}')


def test_text_refuses_unwritable_labels():
    s = io.from_json('{"points": ["a b","c","d"], "lines": [[0, 1, 2]]}')
    with pytest.raises(ValueError):
        io.to_text(s)


def test_files(tmp_path):
    s = weave(3, veblen())
    for suffix in (".json", ".txt"):
        path = tmp_path / f"w{suffix}"
        io.save(s, str(path))
        assert io.load(str(path)) == s
    assert path.read_text().startswith("@name")


def test_dot_modes():
    s = veblen()
    clique = io.export_dot(s)
    assert clique.count(" -- ") == 3 * s.b
    assert clique == io.export_dot(s)
    node = io.export_dot(s, "line-node")
    assert node.count(" -- ") == 3 * s.b and node.count("[shape=point]") == s.b
    with pytest.raises(ValueError):
        io.export_dot(s, "bogus")
