"""
Ribbon presentation records and their normal forms.

A ribbon presentation is a collection of disjoint base disks joined by
1-handles whose interiors may pass through base interiors.  In ambient
dimension two and above the presentation is pinned down, up to re-choosing
base interiors, by a finite record: the number of bases, and for each
handle its two attachment bases together with the ordered sequence of
signed base crossings along its core.  ``RibbonData`` is that record, and
every computation in this package is a function of it.

This module owns the record itself: the ``ribbon 1`` text format,
structural validation, free reduction of crossing words, genus bookkeeping
via the Euler characteristic, and a canonical form that quotients out base
relabelling, handle order, handle orientation, and cancelling crossing
pairs.  Serialized canonical forms are the state identity used by the
equivalence search.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import factorial, prod
from typing import NamedTuple

__all__ = [
    "SignedLetter",
    "Handle",
    "RibbonData",
    "Diagnostic",
    "RibbonFormatError",
    "parse_ribbon",
    "serialize",
    "validate",
    "is_valid",
    "component_count",
    "genus",
    "is_sphere_knot",
    "free_reduce_word",
    "free_reduce",
    "reverse_flip",
    "reversed_handle",
    "canonical_form",
    "canonical_bytes",
]


class SignedLetter(NamedTuple):
    """One signed crossing of a handle through a base interior.

    ``sign`` is +1 when the handle passes in the direction of the base's
    normal vector and -1 otherwise.
    """

    base: int
    sign: int


def _as_letters(word) -> tuple[SignedLetter, ...]:
    return tuple(SignedLetter(int(b), int(s)) for b, s in word)


@dataclass(frozen=True)
class Handle:
    """A 1-handle: its attachment bases and the crossing word read start to end."""

    start: int
    end: int
    word: tuple[SignedLetter, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "word", _as_letters(self.word))


@dataclass(frozen=True)
class RibbonData:
    """The combinatorial record of a ribbon presentation.

    ``dim`` is the ambient knot dimension; it is carried as metadata,
    validated to be at least 2, and does not influence any computation.
    Bases are numbered 1..base_count.  All values are immutable; operations
    on them are pure functions, so sharing across threads is safe.
    """

    dim: int
    base_count: int
    handles: tuple[Handle, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "handles", tuple(self.handles))


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    message: str
    location: str


class RibbonFormatError(ValueError):
    """Raised on malformed input text, with the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


# ---------------------------------------------------------------------------
# file format


def parse_ribbon(text: str | bytes) -> RibbonData:
    """Parse the ``ribbon 1`` text format.

    Lines hold whitespace-separated tokens; ``#`` starts a comment running
    to the end of the line.  The header lines ``ribbon 1``, ``dim <n>`` and
    ``bases <k>`` are followed by zero or more ``handle <s> <e> : ...``
    lines whose trailing integers encode signed crossings (``-2`` is a
    negative crossing of base 2).  No normalization is performed; the
    returned record is exactly what was written.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    rows: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if tokens:
            rows.append((lineno, tokens))

    if not rows:
        raise RibbonFormatError("malformed header, expected 'ribbon 1'", 1)

    def intval(token: str, lineno: int) -> int:
        try:
            return int(token, 10)
        except ValueError:
            raise RibbonFormatError(f"non-integer token '{token}'", lineno) from None

    lineno, tokens = rows[0]
    if tokens != ["ribbon", "1"]:
        raise RibbonFormatError("malformed header, expected 'ribbon 1'", lineno)

    if len(rows) < 2 or rows[1][1][0] != "dim" or len(rows[1][1]) != 2:
        raise RibbonFormatError("expected 'dim <n>'", rows[1][0] if len(rows) > 1 else lineno)
    lineno, tokens = rows[1]
    dim = intval(tokens[1], lineno)
    if dim < 2:
        raise RibbonFormatError("dim must be >= 2", lineno)

    if len(rows) < 3 or rows[2][1][0] != "bases" or len(rows[2][1]) != 2:
        raise RibbonFormatError("expected 'bases <k>'", rows[2][0] if len(rows) > 2 else lineno)
    lineno, tokens = rows[2]
    base_count = intval(tokens[1], lineno)
    if base_count < 1:
        raise RibbonFormatError("bases must be >= 1", lineno)

    handles = []
    for lineno, tokens in rows[3:]:
        if tokens[0] != "handle":
            raise RibbonFormatError(f"expected 'handle', got '{tokens[0]}'", lineno)
        if len(tokens) < 4 or tokens[3] != ":":
            raise RibbonFormatError("expected 'handle <start> <end> : ...'", lineno)
        start = intval(tokens[1], lineno)
        end = intval(tokens[2], lineno)
        for v in (start, end):
            if not 1 <= v <= base_count:
                raise RibbonFormatError(f"base index {v} out of range", lineno)
        word = []
        for token in tokens[4:]:
            v = intval(token, lineno)
            if v == 0:
                raise RibbonFormatError("crossing letter must be nonzero", lineno)
            if not 1 <= abs(v) <= base_count:
                raise RibbonFormatError(f"base index {abs(v)} out of range", lineno)
            word.append(SignedLetter(abs(v), 1 if v > 0 else -1))
        handles.append(Handle(start, end, tuple(word)))

    return RibbonData(dim, base_count, tuple(handles))


def serialize(data: RibbonData) -> str:
    """Deterministic text form: fixed field order, single spaces, one
    newline-terminated line per handle in stored order.  Round-trips
    through :func:`parse_ribbon` unchanged."""
    lines = ["ribbon 1", f"dim {data.dim}", f"bases {data.base_count}"]
    for h in data.handles:
        line = f"handle {h.start} {h.end} :"
        if h.word:
            line += " " + " ".join(str(l.sign * l.base) for l in h.word)
        lines.append(line)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# validation and basic topology


def validate(data: RibbonData) -> list[Diagnostic]:
    """Return one diagnostic per violated structural invariant (empty when
    the record is well formed)."""
    diags = []

    def err(message, location):
        diags.append(Diagnostic("error", message, location))

    if data.dim < 2:
        err("dim must be >= 2", "dim")
    if data.base_count < 1:
        err("bases must be >= 1", "bases")
    for i, h in enumerate(data.handles, start=1):
        where = f"handle {i}"
        if not 1 <= h.start <= data.base_count:
            err(f"start base {h.start} out of range 1..{data.base_count}", where)
        if not 1 <= h.end <= data.base_count:
            err(f"end base {h.end} out of range 1..{data.base_count}", where)
        for j, letter in enumerate(h.word):
            if letter.sign not in (1, -1):
                err(f"letter {j} has sign {letter.sign}, expected +1 or -1", where)
            if not 1 <= letter.base <= data.base_count:
                err(f"letter {j} base {letter.base} out of range 1..{data.base_count}", where)
    return diags


def is_valid(data: RibbonData) -> bool:
    return not validate(data)


def component_count(data: RibbonData) -> int:
    """Number of link components: connected components of the graph whose
    vertices are bases and whose edges are handle end attachments.
    Crossings do not join components; a handle passing through a base meets
    only its interior."""
    parent = list(range(data.base_count + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for h in data.handles:
        a, b = find(h.start), find(h.end)
        if a != b:
            parent[a] = b
    return len({find(b) for b in range(1, data.base_count + 1)})


def genus(data: RibbonData) -> int:
    """Genus of the presented surface: handles minus bases plus one.

    Requires a single component; a knotted sphere has genus 0.
    """
    if component_count(data) != 1:
        raise ValueError("not a knot presentation")
    return len(data.handles) - data.base_count + 1


def is_sphere_knot(data: RibbonData) -> bool:
    """True when the data is connected with exactly one fewer handle than
    bases, the Euler-characteristic condition for a knotted sphere."""
    return component_count(data) == 1 and len(data.handles) == data.base_count - 1


# ---------------------------------------------------------------------------
# word reduction and orientation


def free_reduce_word(word) -> tuple[SignedLetter, ...]:
    """Delete adjacent cancelling pairs until none remain.

    The result is the unique freely reduced form, independent of the order
    in which cancellations are performed.
    """
    out: list[SignedLetter] = []
    for letter in _as_letters(word):
        if out and out[-1].base == letter.base and out[-1].sign == -letter.sign:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def free_reduce(data: RibbonData) -> RibbonData:
    handles = tuple(Handle(h.start, h.end, free_reduce_word(h.word)) for h in data.handles)
    return RibbonData(data.dim, data.base_count, handles)


def reverse_flip(word) -> tuple[SignedLetter, ...]:
    """The crossing word as seen when traversing the handle backwards:
    reversed order, flipped signs."""
    return tuple(SignedLetter(l.base, -l.sign) for l in reversed(_as_letters(word)))


def reversed_handle(h: Handle) -> Handle:
    return Handle(h.end, h.start, reverse_flip(h.word))


# ---------------------------------------------------------------------------
# canonical form

_EXACT_RELABEL_LIMIT = 8
_CELL_PERM_BUDGET = 40320


def _oriented(triple):
    s, w, e = triple
    rev = (e, tuple((b, -sg) for b, sg in reversed(w)), s)
    return triple if triple <= rev else rev


def _relabel_key(handle_triples, perm):
    out = []
    for s, w, e in handle_triples:
        out.append(
            _oriented((perm[s], tuple((perm[b], sg) for b, sg in w), perm[e]))
        )
    out.sort()
    return tuple(out)


def _relabel_perms(base_count, handle_triples):
    if base_count <= _EXACT_RELABEL_LIMIT:
        for p in itertools.permutations(range(1, base_count + 1)):
            yield (0,) + p
        return

    # Partition bases by relabel- and reversal-invariant statistics and
    # search exactly inside cells when that stays affordable.  Beyond the
    # budget, the in-cell order falls back to the stored numbering, which
    # is deterministic but not relabel-invariant (documented caveat; search
    # states stay well under this size).
    end_deg = [0] * (base_count + 1)
    word_deg = [0] * (base_count + 1)
    for s, w, e in handle_triples:
        end_deg[s] += 1
        end_deg[e] += 1
        for b, _ in w:
            word_deg[b] += 1
    cells: dict[tuple[int, int], list[int]] = {}
    for b in range(1, base_count + 1):
        cells.setdefault((end_deg[b], word_deg[b]), []).append(b)
    ordered = [cells[sig] for sig in sorted(cells)]
    if prod(factorial(len(cell)) for cell in ordered) <= _CELL_PERM_BUDGET:
        for combo in itertools.product(*(itertools.permutations(c) for c in ordered)):
            perm = [0] * (base_count + 1)
            pos = 1
            for cell in combo:
                for b in cell:
                    perm[b] = pos
                    pos += 1
            yield tuple(perm)
    else:
        perm = [0] * (base_count + 1)
        pos = 1
        for cell in ordered:
            for b in cell:
                perm[b] = pos
                pos += 1
        yield tuple(perm)


@lru_cache(maxsize=1 << 15)
def _canonical_reduced(data: RibbonData) -> RibbonData:
    triples = tuple((h.start, tuple(h.word), h.end) for h in data.handles)
    best = None
    for perm in _relabel_perms(data.base_count, triples):
        key = _relabel_key(triples, perm)
        if best is None or key < best:
            best = key
    handles = tuple(Handle(s, e, w) for s, w, e in best) if best else ()
    return RibbonData(data.dim, data.base_count, handles)


def canonical_form(data: RibbonData) -> RibbonData:
    """The least equivalent encoding under free reduction, handle
    reversal, handle reordering, and base relabelling.

    Words are freely reduced, each handle takes the lexicographically
    smaller of its two orientations, handles are sorted, and the base
    relabelling minimizing the overall encoding is applied (exhaustively
    for up to 8 bases).  Idempotent; equal inputs up to the listed
    symmetries share one canonical form.
    """
    return _canonical_reduced(free_reduce(data))


def canonical_bytes(data: RibbonData) -> bytes:
    """Serialized canonical form; the comparison and hash key used by the
    search layer."""
    return serialize(canonical_form(data)).encode("ascii")
