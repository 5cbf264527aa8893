"""Eventually periodic point specs such as ``0,1,(3)*`` or ``(1|in),(0|w^2+1)*``.

A spec is a comma list of entries followed by a required periodic tail
``(...)*``. Plain entries are naturals; Gamma entries are written ``n|label``
(optionally in parentheses) where label is ``in``, ``out`` or an ordinal.
"""

from dataclasses import dataclass
from typing import List, Tuple, Union

from .errors import OrdinalSyntaxError, PointSpecError
from .ordinal import Label, format_label, parse_label

GammaEntry = Tuple[int, Label]
Entry = Union[int, GammaEntry]


@dataclass(frozen=True)
class PointSpec:
    """prefix followed by period repeated forever."""

    prefix: Tuple[Entry, ...]
    period: Tuple[Entry, ...]

    def __post_init__(self) -> None:
        if not self.period:
            raise ValueError("the periodic tail must be non-empty")

    def coordinate(self, k: int) -> Entry:
        if k < len(self.prefix):
            return self.prefix[k]
        return self.period[(k - len(self.prefix)) % len(self.period)]

    def take(self, n: int) -> Tuple[Entry, ...]:
        return tuple(self.coordinate(k) for k in range(n))

    @property
    def is_gamma(self) -> bool:
        return isinstance(self.period[0], tuple)


def _split_top_level(text: str, start: int) -> List[Tuple[str, int]]:
    """Split on commas outside parentheses, keeping each item's offset."""
    items = []
    depth = 0
    item_start = start
    for index in range(start, len(text)):
        char = text[index]
        if char == "(":
            depth += 1
        elif char == ")":
            depth -= 1
            if depth < 0:
                raise PointSpecError("unbalanced ')'", text, index)
        elif char == "," and depth == 0:
            items.append((text[item_start:index], item_start))
            item_start = index + 1
    if depth != 0:
        raise PointSpecError("unbalanced '('", text, len(text))
    items.append((text[item_start:], item_start))
    return items


def _wrapped(item: str) -> bool:
    """True if the whole item is enclosed by one pair of parentheses."""
    if not (item.startswith("(") and item.endswith(")")):
        return False
    depth = 0
    for index, char in enumerate(item):
        depth += char == "("
        depth -= char == ")"
        if depth == 0 and index < len(item) - 1:
            return False
    return True


def _parse_entry(text: str, item: str, offset: int) -> Entry:
    stripped = item.strip()
    offset += len(item) - len(item.lstrip())
    if _wrapped(stripped):
        stripped = stripped[1:-1].strip()
        offset += 1
    if not stripped:
        raise PointSpecError("empty entry", text, offset)
    if "|" in stripped:
        pointer, label_text = stripped.split("|", 1)
        if not pointer.strip().isdigit():
            raise PointSpecError("Gamma entry needs a natural before '|'", text, offset)
        try:
            label = parse_label(label_text)
        except OrdinalSyntaxError as error:
            raise PointSpecError(f"bad label ({error})", text, offset + len(pointer) + 1) from error
        return int(pointer), label
    if not stripped.isdigit():
        raise PointSpecError(f"expected a natural, got {stripped!r}", text, offset)
    return int(stripped)


def parse_point_spec(text: str) -> PointSpec:
    items = _split_top_level(text, 0)
    tail_text, tail_offset = items[-1]
    tail = tail_text.strip()
    if not tail.endswith("*") or not _wrapped(tail[:-1].rstrip()):
        raise PointSpecError("a periodic tail '(...)*' is required", text, tail_offset)
    body = tail[:-1].rstrip()[1:-1]
    body_offset = tail_offset + tail_text.index("(") + 1
    prefix = tuple(_parse_entry(text, item, offset) for item, offset in items[:-1])
    period = tuple(_parse_entry(text, item, offset) for item, offset in _split_top_level(text[:body_offset] + body, body_offset))
    kinds = {isinstance(entry, tuple) for entry in prefix + period}
    if len(kinds) > 1:
        raise PointSpecError("cannot mix plain and Gamma entries", text, 0)
    return PointSpec(prefix=prefix, period=period)


def _format_entry(entry: Entry) -> str:
    if isinstance(entry, tuple):
        pointer, label = entry
        return f"({pointer}|{format_label(label)})"
    return str(entry)


def format_point_spec(spec: PointSpec) -> str:
    head = [_format_entry(entry) for entry in spec.prefix]
    if spec.is_gamma:
        tail = "(" + ",".join(f"{p}|{format_label(label)}" for p, label in spec.period) + ")*"
    else:
        tail = "(" + ",".join(str(entry) for entry in spec.period) + ")*"
    return ",".join(head + [tail])
