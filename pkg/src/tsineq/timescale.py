"""Finitely described time scales: unions of closed intervals and points.

A time scale here is a finite, ordered union of disjoint segments, each
either a closed dense interval ``[lo, hi]`` with ``lo < hi`` or a single
scattered point.  The forward/backward jump operators sigma and rho, the
graininess mu, and point classification all derive from the segment
structure; membership tests are exact (scattered points compare with
``==``, dense intervals with closed-interval comparisons, and rational
endpoints are kept as :class:`fractions.Fraction` so no floating fuzz is
introduced).

The convention at the extremes is ``sigma(max) = max`` and
``rho(min) = min`` (the jump of an empty set clamps to the scale edge).

Descriptor grammar (used by the CLI and fixtures)::

    R[a,b]          closed real interval
    Z[a,b]          integers a..b
    Q(q)[m,n]       quantum points q^m .. q^n with q > 1
    U(d;d;...)      union of descriptors and/or bare numbers (bare
                    numbers are scattered points)

Numbers may be integers, decimals, or rationals like ``3/4``; they parse
exactly.
"""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

from .errors import EndpointNotInScale, ParseError, PointNotInScale, ValidationError

Number = Union[int, float, Fraction]

_MAX_DISCRETE_POINTS = 100_001


def _as_exact(text: str) -> Number:
    """Parse a numeric literal exactly (Fraction for anything rational)."""
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad number {text!r}: {exc}") from exc
    if value.denominator == 1:
        return int(value)
    return value


@dataclass(frozen=True)
class ScalePoint:
    """A scale point together with its jump classification."""

    value: Number
    right_scattered: bool
    left_scattered: bool

    @property
    def right_dense(self) -> bool:
        return not self.right_scattered

    @property
    def left_dense(self) -> bool:
        return not self.left_scattered

    @property
    def classification(self) -> str:
        if self.right_scattered and self.left_scattered:
            return "isolated"
        if not self.right_scattered and not self.left_scattered:
            return "dense"
        left = "left-scattered" if self.left_scattered else "left-dense"
        right = "right-scattered" if self.right_scattered else "right-dense"
        return f"{left} {right}"


class TimeScale:
    """Immutable union of disjoint dense intervals and scattered points."""

    __slots__ = ("segments", "label", "_los", "_his")

    def __init__(self, segments: Iterable[tuple[Number, Number]], label: str | None = None):
        segs = sorted(((lo, hi) for lo, hi in segments), key=lambda s: s[0])
        if not segs:
            raise ValidationError("a time scale needs at least one segment")
        for lo, hi in segs:
            if hi < lo:
                raise ValidationError(f"segment [{lo}, {hi}] has hi < lo")
        merged: list[tuple[Number, Number]] = [segs[0]]
        for lo, hi in segs[1:]:
            plo, phi = merged[-1]
            if lo <= phi:  # touching or overlapping: take the union
                if hi > phi:
                    merged[-1] = (plo, hi)
            else:
                merged.append((lo, hi))
        self.segments = tuple(merged)
        self.label = label if label is not None else format_descriptor(self.segments)
        self._los = [s[0] for s in self.segments]
        self._his = [s[1] for s in self.segments]

    # -- constructors -------------------------------------------------------

    @classmethod
    def reals(cls, a: Number, b: Number) -> "TimeScale":
        if not a < b:
            raise ValidationError("R[a,b] needs a < b")
        return cls([(a, b)], label=f"R[{a},{b}]")

    @classmethod
    def integers(cls, a: int, b: int) -> "TimeScale":
        if a != int(a) or b != int(b):
            raise ValidationError("Z[a,b] needs integer endpoints")
        a, b = int(a), int(b)
        if b < a:
            raise ValidationError("Z[a,b] needs a <= b")
        if b - a + 1 > _MAX_DISCRETE_POINTS:
            raise ValidationError("integer window too large")
        return cls([(k, k) for k in range(a, b + 1)], label=f"Z[{a},{b}]")

    @classmethod
    def qscale(cls, q: Number, m: int, n: int) -> "TimeScale":
        if not q > 1:
            raise ValidationError("quantum scale needs q > 1")
        if n < m:
            raise ValidationError("Q(q)[m,n] needs m <= n")
        if n - m + 1 > _MAX_DISCRETE_POINTS:
            raise ValidationError("quantum window too large")
        q = Fraction(q) if not isinstance(q, (int, Fraction)) else q
        pts = [q ** k for k in range(m, n + 1)]
        pts = [int(p) if isinstance(p, Fraction) and p.denominator == 1 else p for p in pts]
        return cls([(p, p) for p in pts], label=f"Q({q})[{m},{n}]")

    @classmethod
    def from_points(cls, points: Sequence[Number], label: str | None = None) -> "TimeScale":
        return cls([(p, p) for p in points], label=label)

    @classmethod
    def union(cls, *scales: "TimeScale", label: str | None = None) -> "TimeScale":
        segs: list[tuple[Number, Number]] = []
        for s in scales:
            segs.extend(s.segments)
        if label is None:
            label = "U(" + ";".join(s.label for s in scales) + ")"
        return cls(segs, label=label)

    # -- basic queries -------------------------------------------------------

    @property
    def min(self) -> Number:
        return self.segments[0][0]

    @property
    def max(self) -> Number:
        return self.segments[-1][1]

    def _segment_index(self, t: Number) -> int:
        """Index of the segment containing t, or -1."""
        i = bisect.bisect_right(self._los, t) - 1
        if i >= 0 and self._los[i] <= t <= self._his[i]:
            return i
        return -1

    def contains(self, t: Number) -> bool:
        return self._segment_index(t) >= 0

    def _require(self, t: Number) -> int:
        i = self._segment_index(t)
        if i < 0:
            raise PointNotInScale(f"{t} is not a point of {self.label}")
        return i

    def sigma(self, t: Number) -> Number:
        """Forward jump: the nearest strictly greater scale point, clamped at max."""
        i = self._require(t)
        lo, hi = self.segments[i]
        if t < hi:
            return t  # interior of a dense interval: right-dense
        if i + 1 < len(self.segments):
            return self.segments[i + 1][0]
        return t

    def rho(self, t: Number) -> Number:
        """Backward jump: the nearest strictly smaller scale point, clamped at min."""
        i = self._require(t)
        lo, hi = self.segments[i]
        if t > lo:
            return t
        if i > 0:
            return self.segments[i - 1][1]
        return t

    def mu(self, t: Number) -> Number:
        """Graininess mu(t) = sigma(t) - t >= 0."""
        return self.sigma(t) - t

    def classify(self, t: Number) -> ScalePoint:
        return ScalePoint(
            value=t,
            right_scattered=self.sigma(t) > t,
            left_scattered=self.rho(t) < t,
        )

    # -- structure within a window -------------------------------------------

    def measure_atoms(self, a: Number, b: Number) -> list[tuple]:
        """Decompose [a, b) into integration atoms.

        Returns ordered atoms ``("pt", t, mu)`` for right-scattered points
        of [a, b) and ``("iv", lo, hi)`` for maximal dense pieces.  The
        delta integral over [a, b] is the sum of ``mu * f(t)`` over the
        point atoms plus classical integrals over the interval atoms.
        """
        if not self.contains(a):
            raise EndpointNotInScale(f"{a} is not a point of {self.label}")
        if not self.contains(b):
            raise EndpointNotInScale(f"{b} is not a point of {self.label}")
        if b < a:
            raise ValidationError(f"window endpoints out of order: {a} > {b}")
        atoms: list[tuple] = []
        if a == b:
            return atoms
        for i, (lo, hi) in enumerate(self.segments):
            if hi < a or lo > b:
                continue
            if lo < hi:
                plo = max(lo, a)
                phi = min(hi, b)
                if plo < phi:
                    atoms.append(("iv", plo, phi))
            # right edge of the segment (or the point itself) may be a
            # right-scattered atom of [a, b)
            if a <= hi < b:
                nxt = self.segments[i + 1][0] if i + 1 < len(self.segments) else hi
                if nxt > hi:
                    atoms.append(("pt", hi, nxt - hi))
        return atoms

    def scattered_in(self, lo: Number, hi: Number, open_interval: bool = False) -> list[Number]:
        """Scattered (isolated-looking) scale points within [lo, hi] or (lo, hi)."""
        out = []
        for slo, shi in self.segments:
            if slo == shi and lo <= slo <= hi:
                out.append(slo)
        if open_interval:
            out = [p for p in out if lo < p < hi]
        return out

    def notable_points(self, lo: Number, hi: Number) -> list[Number]:
        """Scattered points and dense-segment endpoints within [lo, hi]."""
        out = set()
        for slo, shi in self.segments:
            for p in (slo, shi):
                if lo <= p <= hi:
                    out.add(p)
        return sorted(out)

    def dense_pieces(self, a: Number, b: Number) -> list[tuple[Number, Number]]:
        return [(lo, hi) for kind, lo, hi in self.measure_atoms(a, b) if kind == "iv"]

    def is_discrete_window(self, a: Number, b: Number) -> bool:
        """True when [a, b) carries no dense part (pure scattered sums)."""
        return not self.dense_pieces(a, b)

    # -- dunder --------------------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, TimeScale) and self.segments == other.segments

    def __hash__(self) -> int:
        return hash(self.segments)

    def __repr__(self) -> str:
        return f"TimeScale({self.label})"


# ---------------------------------------------------------------------------
# descriptor grammar
# ---------------------------------------------------------------------------

_R_RE = re.compile(r"^R\[([^,\]]+),([^,\]]+)\]$")
_Z_RE = re.compile(r"^Z\[([^,\]]+),([^,\]]+)\]$")
_Q_RE = re.compile(r"^Q\(([^)]+)\)\[([^,\]]+),([^,\]]+)\]$")


def _split_union(body: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == ";" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_timescale(text: str) -> TimeScale:
    """Parse a scale descriptor; see the module docstring for the grammar."""
    text = text.strip().replace(" ", "")
    if not text:
        raise ParseError("empty scale descriptor")
    if text.startswith("U(") and text.endswith(")"):
        parts = _split_union(text[2:-1])
        return TimeScale.union(*(parse_timescale(p) for p in parts), label=text)
    m = _R_RE.match(text)
    if m:
        return TimeScale.reals(_as_exact(m.group(1)), _as_exact(m.group(2)))
    m = _Z_RE.match(text)
    if m:
        a, b = _as_exact(m.group(1)), _as_exact(m.group(2))
        if not isinstance(a, int) or not isinstance(b, int):
            raise ParseError(f"Z window endpoints must be integers in {text!r}")
        return TimeScale.integers(a, b)
    m = _Q_RE.match(text)
    if m:
        q = _as_exact(m.group(1))
        mm, nn = _as_exact(m.group(2)), _as_exact(m.group(3))
        if not isinstance(mm, int) or not isinstance(nn, int):
            raise ParseError(f"Q exponents must be integers in {text!r}")
        return TimeScale.qscale(q, mm, nn)
    # bare number: a single scattered point
    try:
        value = _as_exact(text)
    except ParseError:
        raise ParseError(f"unrecognized scale descriptor {text!r}") from None
    return TimeScale([(value, value)], label=text)


def format_descriptor(segments: Sequence[tuple[Number, Number]]) -> str:
    parts = []
    for lo, hi in segments:
        if lo == hi:
            parts.append(str(lo))
        else:
            parts.append(f"R[{lo},{hi}]")
    if len(parts) == 1:
        return parts[0]
    return "U(" + ";".join(parts) + ")"
