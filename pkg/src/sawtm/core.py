"""Shared domain types: lattice mode, rectangles, boundary signatures, count series."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence


class LatticeMode(enum.Enum):
    SAP = "sap"
    SAW = "saw"


class LinkLabel(enum.IntEnum):
    """Per-slot link label. The integer values double as the packed byte codes."""

    EMPTY = 0
    OPEN = 1
    CLOSE = 2
    FREE = 3


class Segment(enum.Enum):
    LEFT_CUT = "left"
    CURRENT_ROW = "row"
    RIGHT_CUT = "right"


class SignatureError(ValueError):
    """Raised for an invalid link structure (unbalanced, crossing, bad FREE use)."""


@dataclass(frozen=True)
class Rect:
    """Bounding box measured in edges: ``w + 1`` vertex columns, ``h + 1`` vertex rows."""

    w: int
    h: int

    def __post_init__(self) -> None:
        if self.w < 0 or self.h < 0:
            raise ValueError(f"negative rectangle size {self.w}x{self.h}")

    def transpose(self) -> Rect:
        return Rect(self.h, self.w)

    def min_length(self, mode: LatticeMode) -> int:
        if mode is LatticeMode.SAP:
            return 2 * (self.w + self.h)
        return self.w + self.h

    def validate_for(self, mode: LatticeMode) -> None:
        if mode is LatticeMode.SAP and (self.w < 1 or self.h < 1):
            raise ValueError(f"SAP rectangles need w, h >= 1, got {self.w}x{self.h}")


@dataclass(frozen=True)
class Touch:
    top: bool = False
    bottom: bool = False
    left: bool = False
    right: bool = False

    @property
    def bits(self) -> int:
        return self.top | self.bottom << 1 | self.left << 2 | self.right << 3

    @classmethod
    def from_bits(cls, bits: int) -> Touch:
        return cls(bool(bits & 1), bool(bits & 2), bool(bits & 4), bool(bits & 8))

    @property
    def all(self) -> bool:
        return self.bits == 0b1111


TOUCH_ALL = 0b1111


@dataclass(frozen=True)
class CrossingSlot:
    """One occupied edge crossing the sweep boundary.

    ``index`` is a row for cut segments and a column for ``CURRENT_ROW``.
    ``horizontal`` separates the current row's kink edge from the vertical
    edge sharing its column index.
    """

    segment: Segment
    index: int
    label: LinkLabel
    horizontal: bool = True


def check_labels(labels: Sequence[int], mode: LatticeMode | None = None,
                 endpoints_placed: int | None = None) -> None:
    """Validate a label sequence (EMPTY entries allowed and ignored)."""
    depth = 0
    free = 0
    for lab in labels:
        if lab == LinkLabel.OPEN:
            depth += 1
        elif lab == LinkLabel.CLOSE:
            depth -= 1
            if depth < 0:
                raise SignatureError("unbalanced: CLOSE without matching OPEN")
        elif lab == LinkLabel.FREE:
            free += 1
        elif lab != LinkLabel.EMPTY:
            raise SignatureError(f"unknown label code {lab!r}")
    if depth:
        raise SignatureError("unbalanced: unmatched OPEN")
    if free and mode is LatticeMode.SAP:
        raise SignatureError("FREE label in SAP mode")
    if free > 2:
        raise SignatureError("more than two FREE ends")
    if endpoints_placed is not None and free > endpoints_placed:
        raise SignatureError(f"{free} FREE ends but only {endpoints_placed} endpoints placed")


def partner_index(labels: Sequence[int], i: int) -> int:
    """Index of the slot matched to slot ``i`` under the non-crossing pairing."""
    lab = labels[i]
    if lab == LinkLabel.OPEN:
        depth = 0
        for j in range(i + 1, len(labels)):
            c = labels[j]
            if c == LinkLabel.OPEN:
                depth += 1
            elif c == LinkLabel.CLOSE:
                if depth == 0:
                    return j
                depth -= 1
    elif lab == LinkLabel.CLOSE:
        depth = 0
        for j in range(i - 1, -1, -1):
            c = labels[j]
            if c == LinkLabel.CLOSE:
                depth += 1
            elif c == LinkLabel.OPEN:
                if depth == 0:
                    return j
                depth -= 1
    else:
        raise SignatureError(f"slot {i} has label {LinkLabel(lab).name}; no partner")
    raise SignatureError(f"slot {i} is unmatched")


@dataclass(frozen=True)
class BoundarySignature:
    slots: tuple[CrossingSlot, ...] = ()
    touch: Touch = field(default_factory=Touch)
    endpoints_placed: int = 0

    @property
    def labels(self) -> tuple[LinkLabel, ...]:
        return tuple(s.label for s in self.slots)

    @property
    def label_string(self) -> str:
        return "".join("_()*"[s.label] for s in self.slots)

    def pack(self) -> bytes:
        """Canonical byte form: equal signatures give equal bytes and vice versa."""
        out = bytearray([self.touch.bits | self.endpoints_placed << 4, len(self.slots)])
        seg_code = {Segment.LEFT_CUT: 0, Segment.CURRENT_ROW: 1, Segment.RIGHT_CUT: 2}
        for s in self.slots:
            out.append(seg_code[s.segment] | s.horizontal << 2 | s.label << 3)
            out += s.index.to_bytes(2, "big")
        return bytes(out)

    @classmethod
    def unpack(cls, data: bytes) -> BoundarySignature:
        segs = (Segment.LEFT_CUT, Segment.CURRENT_ROW, Segment.RIGHT_CUT)
        flags, n = data[0], data[1]
        slots = []
        for j in range(n):
            b = data[2 + 3 * j]
            idx = int.from_bytes(data[3 + 3 * j:5 + 3 * j], "big")
            slots.append(CrossingSlot(segs[b & 3], idx, LinkLabel(b >> 3), bool(b >> 2 & 1)))
        return cls(tuple(slots), Touch.from_bits(flags & 15), flags >> 4)


def encode_signature(slots: Iterable[CrossingSlot], touch: Touch = Touch(),
                     endpoints_placed: int = 0,
                     mode: LatticeMode = LatticeMode.SAP) -> BoundarySignature:
    """Build a validated signature from occupied slots in boundary order."""
    slots = tuple(s for s in slots if s.label != LinkLabel.EMPTY)
    if not 0 <= endpoints_placed <= 2:
        raise SignatureError(f"endpoints_placed must be 0..2, got {endpoints_placed}")
    if mode is LatticeMode.SAP and endpoints_placed:
        raise SignatureError("endpoints are a SAW-only notion")
    check_labels([s.label for s in slots], mode, endpoints_placed)
    return BoundarySignature(slots, touch, endpoints_placed)


def signature_from_string(labels: str, touch: Touch = Touch(), endpoints_placed: int = 0,
                          mode: LatticeMode = LatticeMode.SAP) -> BoundarySignature:
    """Convenience constructor: ``"()(())"`` etc., slots laid on consecutive rows of a left cut."""
    code = {"(": LinkLabel.OPEN, ")": LinkLabel.CLOSE, "*": LinkLabel.FREE}
    try:
        slots = [CrossingSlot(Segment.LEFT_CUT, r, code[c]) for r, c in enumerate(labels)]
    except KeyError as exc:
        raise SignatureError(f"bad label character {exc.args[0]!r}") from None
    return encode_signature(slots, touch, endpoints_placed, mode)


def match_partner(sig: BoundarySignature, i: int) -> int:
    if not 0 <= i < len(sig.slots):
        raise SignatureError(f"slot {i} absent (signature has {len(sig.slots)} slots)")
    return partner_index(sig.labels, i)


class CountSeries:
    """Exact integer coefficients indexed by length ``0..nmax``."""

    __slots__ = ("counts",)

    def __init__(self, nmax: int, counts: Iterable[int] | dict[int, int] = ()) -> None:
        self.counts = [0] * (nmax + 1)
        items = counts.items() if isinstance(counts, dict) else enumerate(counts)
        for n, c in items:
            if n > nmax:
                if c:
                    raise ValueError(f"length {n} exceeds nmax={nmax}")
                continue
            self.counts[n] += c

    @property
    def nmax(self) -> int:
        return len(self.counts) - 1

    def __getitem__(self, n: int) -> int:
        return self.counts[n] if 0 <= n < len(self.counts) else 0

    def __iter__(self) -> Iterator[int]:
        return iter(self.counts)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, CountSeries):
            return self.counts == other.counts
        return NotImplemented

    def __repr__(self) -> str:
        return f"CountSeries({self.nmax}, {self.nonzero()})"

    def nonzero(self) -> dict[int, int]:
        return {n: c for n, c in enumerate(self.counts) if c}

    def copy(self) -> CountSeries:
        return CountSeries(self.nmax, self.counts)

    def add_(self, other: Iterable[int] | CountSeries, sign: int = 1) -> CountSeries:
        counts = self.counts
        for n, c in enumerate(other):
            if c:
                counts[n] += sign * c
        return self

    def scaled(self, factor: int) -> CountSeries:
        return CountSeries(self.nmax, [factor * c for c in self.counts])

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.counts)


def merge_series(a: CountSeries, b: CountSeries, sign: int = 1) -> CountSeries:
    if a.nmax != b.nmax:
        raise ValueError(f"nmax mismatch: {a.nmax} vs {b.nmax}")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return a.copy().add_(b, sign)
