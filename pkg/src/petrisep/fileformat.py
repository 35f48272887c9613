"""Line-oriented text format for verification instances.

Grammar (one directive per line, '#' starts a full-line comment):

    places <name> ... <name>
    transition <name> pre <int> ... <int> post <int> ... <int>
    init <int> ... <int>
    target <int> ... <int>
    mode reach|cover

`places` must appear before any directive that needs the arity. `mode` is
optional and defaults to reach. Parse errors carry the offending line number.
"""

from __future__ import annotations

from typing import Optional

from .net import Instance, Mode, PetriNet, StructureError, Transition


class NetFormatError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _parse_ints(tokens: list[str], lineno: int, what: str) -> tuple[int, ...]:
    out = []
    for tok in tokens:
        try:
            out.append(int(tok))
        except ValueError:
            raise NetFormatError(f"{what}: {tok!r} is not an integer", lineno)
    return tuple(out)


def parse_instance(text: str) -> Instance:
    places: Optional[tuple[str, ...]] = None
    transitions: list[Transition] = []
    tnames: set[str] = set()
    m_init = None
    m_final = None
    mode = Mode.REACH
    saw_mode = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        head = tokens[0]

        if head == "places":
            if places is not None:
                raise NetFormatError("duplicate places directive", lineno)
            names = tokens[1:]
            if not names:
                raise NetFormatError("places directive needs at least one name", lineno)
            if len(set(names)) != len(names):
                raise NetFormatError("duplicate place name", lineno)
            places = tuple(names)

        elif head == "transition":
            if places is None:
                raise NetFormatError("transition before places directive", lineno)
            n = len(places)
            if len(tokens) != 4 + 2 * n or tokens[2] != "pre" or tokens[3 + n] != "post":
                raise NetFormatError(
                    f"expected: transition <name> pre <{n} ints> post <{n} ints>",
                    lineno,
                )
            name = tokens[1]
            if name in tnames:
                raise NetFormatError(f"duplicate transition name {name!r}", lineno)
            pre = _parse_ints(tokens[3 : 3 + n], lineno, "pre")
            post = _parse_ints(tokens[4 + n : 4 + 2 * n], lineno, "post")
            try:
                transitions.append(Transition(name, pre, post))
            except StructureError as exc:
                raise NetFormatError(str(exc), lineno)
            tnames.add(name)

        elif head in ("init", "target"):
            if places is None:
                raise NetFormatError(f"{head} before places directive", lineno)
            if (head == "init" and m_init is not None) or (
                head == "target" and m_final is not None
            ):
                raise NetFormatError(f"duplicate {head} directive", lineno)
            vals = _parse_ints(tokens[1:], lineno, head)
            if len(vals) != len(places):
                raise NetFormatError(
                    f"{head} has {len(vals)} entries, expected {len(places)}", lineno
                )
            if any(v < 0 for v in vals):
                raise NetFormatError(f"{head} marking must be non-negative", lineno)
            if head == "init":
                m_init = vals
            else:
                m_final = vals

        elif head == "mode":
            if saw_mode:
                raise NetFormatError("duplicate mode directive", lineno)
            if len(tokens) != 2 or tokens[1] not in ("reach", "cover"):
                raise NetFormatError("mode must be 'reach' or 'cover'", lineno)
            mode = Mode(tokens[1])
            saw_mode = True

        else:
            raise NetFormatError(f"unknown directive {head!r}", lineno)

    if places is None:
        raise NetFormatError("missing places directive")
    if m_init is None:
        raise NetFormatError("missing init directive")
    if m_final is None:
        raise NetFormatError("missing target directive")

    net = PetriNet(places, tuple(transitions))
    return Instance(net, m_init, m_final, mode)


def format_instance(inst: Instance) -> str:
    """Serialize an instance; parse_instance(format_instance(i)) == i."""
    lines = ["places " + " ".join(inst.net.places)]
    for t in inst.net.transitions:
        lines.append(
            f"transition {t.name} pre "
            + " ".join(map(str, t.pre))
            + " post "
            + " ".join(map(str, t.post))
        )
    lines.append("init " + " ".join(map(str, inst.m_init)))
    lines.append("target " + " ".join(map(str, inst.m_final)))
    lines.append(f"mode {inst.mode.value}")
    return "\n".join(lines) + "\n"


def load_instance(path: str) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_instance(fh.read())
