"""Net file parsing and serialization."""

import pytest

from petrisep import Mode, NetFormatError, format_instance, load_instance, parse_instance

from conftest import two_place_instance

EXAMPLE = """\
# two places, three transitions
places p1 p2
transition t pre 2 1 post 1 2
transition u pre 1 2 post 0 4
transition v pre 1 0 post 2 1

init 3 1
target 0 4
mode reach
"""


def test_parse_running_example():
    inst = parse_instance(EXAMPLE)
    assert inst == two_place_instance()
    assert inst.mode is Mode.REACH


def test_format_parse_round_trip():
    inst = two_place_instance(Mode.COVER)
    assert parse_instance(format_instance(inst)) == inst


def test_load_instance(tmp_path):
    path = tmp_path / "example.net"
    path.write_text(EXAMPLE)
    assert load_instance(str(path)) == two_place_instance()


def test_comments_and_blank_lines_are_ignored():
    text = "\n# header\nplaces p\n\ntransition t pre 0 post 1\ninit 0\ntarget 2\n"
    inst = parse_instance(text)
    assert inst.mode is Mode.REACH  # mode line is optional
    assert inst.net.places == ("p",)


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("transition t pre 0 post 1\n", "places"),
        ("places p\ninit 0\ntarget 0\nmode fly\n", "mode"),
        ("places p p\ninit 0 0\ntarget 0 0\n", "duplicate"),
        ("places p\ntransition t pre 0 post\ninit 0\ntarget 0\n", "transition"),
        ("places p\ntransition t pre 0 post 1 2\ninit 0\ntarget 0\n", "transition"),
        ("places p\ninit 0 0\ntarget 0\n", "init"),
        ("places p\ninit -1\ntarget 0\n", "negative"),
        ("places p\ninit 0\n", "target"),
        ("places p\ntransition t pre x post 1\ninit 0\ntarget 0\n", "integer"),
    ],
)
def test_malformed_inputs_are_rejected(text, fragment):
    with pytest.raises(NetFormatError) as exc:
        parse_instance(text)
    assert fragment in str(exc.value).lower()


def test_error_carries_line_number():
    text = "places p\ntransition t pre 0 post 1 junk\ninit 0\ntarget 0\n"
    with pytest.raises(NetFormatError) as exc:
        parse_instance(text)
    assert exc.value.line == 2
    assert "line 2" in str(exc.value)


def test_unknown_directive_rejected():
    with pytest.raises(NetFormatError):
        parse_instance("places p\nfoo bar\ninit 0\ntarget 0\n")
