"""
Elementary moves on ribbon presentation records.

The move set generates stable equivalence (stabilize/destabilize, handle
slides, crossing reroutes, free cancellation, handle reversal) plus the one
weak stabilization (attach or remove a trivial handle, which changes the
genus by one).  Every move preserves coloring counts over every finite
quandle; trivial handles additionally shift ``handles - bases`` by one.

Word conventions, fixed once here and relied on everywhere else:

* Sliding an end of handle ``h`` along ``a`` traverses ``a`` from the side
  the end sits on.  Let ``w`` be ``a``'s word as traversed.  Sliding the
  END appends ``w``; sliding the START prepends ``reverse_flip(w)``.
* Rerouting the crossing ``(b, s)`` of a word through handle ``v`` (whose
  traversal runs from ``b`` to ``b'`` with word ``w``) replaces the letter
  by ``w + [(b', s)] + reverse_flip(w)``.

Scripts are plain sequences of moves replayed left to right on the stored
handle/base numbering; see ``parse_script`` for the one-move-per-line text
format.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from .ribbon import (
    Handle,
    RibbonData,
    SignedLetter,
    canonical_form,
    free_reduce_word,
    reverse_flip,
    reversed_handle,
    serialize,
)

__all__ = [
    "Move",
    "MoveError",
    "ScriptFormatError",
    "Stab",
    "Destab",
    "CancelInsert",
    "CancelDelete",
    "Slide",
    "CrossSlide",
    "TrivialHandle",
    "RemoveTrivialHandle",
    "ReverseHandle",
    "MoveScript",
    "parse_script",
    "serialize_script",
    "apply_move",
    "apply_script",
    "apply_stabilize",
    "apply_destabilize",
    "apply_cancel_insert",
    "apply_cancel_delete",
    "apply_slide",
    "apply_cross_slide",
    "apply_trivial_handle",
    "remove_trivial_handle",
    "reverse_handle",
    "enumerate_moves",
]


class MoveError(ValueError):
    """A move whose preconditions fail on the given data."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message if index is None else f"move {index}: {message}")
        self.script_index = index


class ScriptFormatError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Stab:
    base: int


@dataclass(frozen=True)
class Destab:
    base: int


@dataclass(frozen=True)
class CancelInsert:
    handle: int
    position: int
    base: int
    sign: int


@dataclass(frozen=True)
class CancelDelete:
    handle: int
    position: int


@dataclass(frozen=True)
class Slide:
    handle: int
    which: str  # "start" | "end"
    along: int
    direction: str  # "fwd" | "rev"

    def __post_init__(self):
        if self.which not in ("start", "end"):
            raise ValueError(f"slide end must be 'start' or 'end', got {self.which!r}")
        if self.direction not in ("fwd", "rev"):
            raise ValueError(f"direction must be 'fwd' or 'rev', got {self.direction!r}")


@dataclass(frozen=True)
class CrossSlide:
    handle: int
    position: int
    via: int
    direction: str

    def __post_init__(self):
        if self.direction not in ("fwd", "rev"):
            raise ValueError(f"direction must be 'fwd' or 'rev', got {self.direction!r}")


@dataclass(frozen=True)
class TrivialHandle:
    base: int


@dataclass(frozen=True)
class RemoveTrivialHandle:
    handle: int


@dataclass(frozen=True)
class ReverseHandle:
    handle: int


Move = Union[
    Stab,
    Destab,
    CancelInsert,
    CancelDelete,
    Slide,
    CrossSlide,
    TrivialHandle,
    RemoveTrivialHandle,
    ReverseHandle,
]


# ---------------------------------------------------------------------------
# application


def _check_base(data: RibbonData, base: int):
    if not 1 <= base <= data.base_count:
        raise MoveError(f"base {base} out of range 1..{data.base_count}")


def _get_handle(data: RibbonData, index: int) -> Handle:
    if not 1 <= index <= len(data.handles):
        raise MoveError(f"handle {index} out of range 1..{len(data.handles)}")
    return data.handles[index - 1]


def _replace_handle(data: RibbonData, index: int, new: Handle) -> RibbonData:
    handles = data.handles[: index - 1] + (new,) + data.handles[index:]
    return RibbonData(data.dim, data.base_count, handles)


def _traversal(data: RibbonData, index: int, direction: str):
    """(near, far, word-as-traversed) for walking a handle fwd or rev."""
    h = _get_handle(data, index)
    if direction == "fwd":
        return h.start, h.end, h.word
    return h.end, h.start, reverse_flip(h.word)


def apply_stabilize(data: RibbonData, target: int) -> RibbonData:
    """Add a fresh base joined to ``target`` by an empty-word handle."""
    _check_base(data, target)
    new_base = data.base_count + 1
    handles = data.handles + (Handle(new_base, target, ()),)
    return RibbonData(data.dim, new_base, handles)


def apply_destabilize(data: RibbonData, base: int) -> RibbonData:
    """Remove a base of degree one whose handle crosses nothing, together
    with that handle.  Remaining bases are renumbered order-preservingly."""
    _check_base(data, base)
    incident = [
        (i, h)
        for i, h in enumerate(data.handles, start=1)
        if h.start == base or h.end == base
    ]
    degree = sum((h.start == base) + (h.end == base) for _, h in incident)
    if degree != 1:
        raise MoveError(f"destab {base}: degree != 1")
    index, handle = incident[0]
    if handle.word:
        raise MoveError(f"destab {base}: handle word not empty")
    other = handle.end if handle.start == base else handle.start
    if other == base:
        raise MoveError(f"destab {base}: degree != 1")
    for h in data.handles:
        if any(l.base == base for l in h.word):
            raise MoveError(f"destab {base}: base occurs in handle words")

    def remap(b):
        return b if b < base else b - 1

    handles = []
    for i, h in enumerate(data.handles, start=1):
        if i == index:
            continue
        word = tuple(SignedLetter(remap(l.base), l.sign) for l in h.word)
        handles.append(Handle(remap(h.start), remap(h.end), word))
    return RibbonData(data.dim, data.base_count - 1, tuple(handles))


def apply_cancel_insert(data: RibbonData, handle: int, position: int, base: int, sign: int) -> RibbonData:
    h = _get_handle(data, handle)
    _check_base(data, base)
    if sign not in (1, -1):
        raise MoveError(f"sign must be +1 or -1, got {sign}")
    if not 0 <= position <= len(h.word):
        raise MoveError(f"insert position {position} out of range 0..{len(h.word)}")
    pair = (SignedLetter(base, sign), SignedLetter(base, -sign))
    word = h.word[:position] + pair + h.word[position:]
    return _replace_handle(data, handle, Handle(h.start, h.end, word))


def apply_cancel_delete(data: RibbonData, handle: int, position: int) -> RibbonData:
    h = _get_handle(data, handle)
    if not 0 <= position <= len(h.word) - 2:
        raise MoveError(f"delete position {position} out of range 0..{len(h.word) - 2}")
    a, b = h.word[position], h.word[position + 1]
    if a.base != b.base or a.sign != -b.sign:
        raise MoveError(f"letters at position {position} do not cancel")
    word = h.word[:position] + h.word[position + 2 :]
    return _replace_handle(data, handle, Handle(h.start, h.end, word))


def apply_slide(data: RibbonData, handle: int, which: str, along: int, direction: str) -> RibbonData:
    """Slide one end of ``handle`` along ``along`` to its far base,
    composing the traversed crossing word into the slid handle."""
    if which not in ("start", "end"):
        raise MoveError(f"slide end must be 'start' or 'end', got {which!r}")
    if direction not in ("fwd", "rev"):
        raise MoveError(f"direction must be 'fwd' or 'rev', got {direction!r}")
    if handle == along:
        raise MoveError("cannot slide a handle along itself")
    h = _get_handle(data, handle)
    near, far, w = _traversal(data, along, direction)
    attached = h.start if which == "start" else h.end
    if attached != near:
        raise MoveError(
            f"slide: {which} of handle {handle} is on base {attached}, "
            f"not on the traversal start {near}"
        )
    if which == "end":
        new = Handle(h.start, far, h.word + w)
    else:
        new = Handle(far, h.end, reverse_flip(w) + h.word)
    return _replace_handle(data, handle, new)


def apply_cross_slide(data: RibbonData, handle: int, position: int, via: int, direction: str) -> RibbonData:
    """Reroute one crossing of ``handle`` through ``via``: the letter at
    ``position`` (which must cross the base where the chosen traversal of
    ``via`` begins) is pushed along ``via`` to its far base."""
    if direction not in ("fwd", "rev"):
        raise MoveError(f"direction must be 'fwd' or 'rev', got {direction!r}")
    if via == handle:
        raise MoveError("cannot cross-slide a handle through itself")
    h = _get_handle(data, handle)
    if not 0 <= position < len(h.word):
        raise MoveError(f"position {position} out of range 0..{len(h.word) - 1}")
    near, far, w = _traversal(data, via, direction)
    letter = h.word[position]
    if letter.base != near:
        raise MoveError(
            f"cross-slide: letter crosses base {letter.base}, "
            f"but the traversal of handle {via} starts at {near}"
        )
    replacement = w + (SignedLetter(far, letter.sign),) + reverse_flip(w)
    word = h.word[:position] + replacement + h.word[position + 1 :]
    return _replace_handle(data, handle, Handle(h.start, h.end, word))


def apply_trivial_handle(data: RibbonData, base: int) -> RibbonData:
    """Attach a trivial handle (both ends on ``base``, crossing nothing).
    Raises the genus by one; the weak-stabilization move."""
    _check_base(data, base)
    handles = data.handles + (Handle(base, base, ()),)
    return RibbonData(data.dim, data.base_count, handles)


def remove_trivial_handle(data: RibbonData, handle: int) -> RibbonData:
    h = _get_handle(data, handle)
    if h.start != h.end or h.word:
        raise MoveError(f"handle {handle} is not a trivial handle")
    handles = data.handles[: handle - 1] + data.handles[handle:]
    return RibbonData(data.dim, data.base_count, handles)


def reverse_handle(data: RibbonData, handle: int) -> RibbonData:
    h = _get_handle(data, handle)
    return _replace_handle(data, handle, reversed_handle(h))


_APPLY = {
    Stab: lambda d, m: apply_stabilize(d, m.base),
    Destab: lambda d, m: apply_destabilize(d, m.base),
    CancelInsert: lambda d, m: apply_cancel_insert(d, m.handle, m.position, m.base, m.sign),
    CancelDelete: lambda d, m: apply_cancel_delete(d, m.handle, m.position),
    Slide: lambda d, m: apply_slide(d, m.handle, m.which, m.along, m.direction),
    CrossSlide: lambda d, m: apply_cross_slide(d, m.handle, m.position, m.via, m.direction),
    TrivialHandle: lambda d, m: apply_trivial_handle(d, m.base),
    RemoveTrivialHandle: lambda d, m: remove_trivial_handle(d, m.handle),
    ReverseHandle: lambda d, m: reverse_handle(d, m.handle),
}


def apply_move(data: RibbonData, move: Move) -> RibbonData:
    try:
        fn = _APPLY[type(move)]
    except KeyError:
        raise MoveError(f"unknown move {move!r}") from None
    return fn(data, move)


# ---------------------------------------------------------------------------
# scripts


@dataclass(frozen=True)
class MoveScript:
    """A replayable sequence of moves; an equivalence certificate."""

    moves: tuple[Move, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "moves", tuple(self.moves))

    def __len__(self) -> int:
        return len(self.moves)

    def __iter__(self) -> Iterator[Move]:
        return iter(self.moves)

    @property
    def weak_count(self) -> int:
        """Trivial handles attached minus trivial handles removed."""
        added = sum(isinstance(m, TrivialHandle) for m in self.moves)
        removed = sum(isinstance(m, RemoveTrivialHandle) for m in self.moves)
        return added - removed


def apply_script(data: RibbonData, script: MoveScript) -> RibbonData:
    """Left-to-right composition, failing fast with the index of the first
    inapplicable move."""
    for i, move in enumerate(script):
        try:
            data = apply_move(data, move)
        except MoveError as exc:
            raise MoveError(str(exc), index=i) from exc
    return data


def _move_line(move: Move) -> str:
    if isinstance(move, Stab):
        return f"stab {move.base}"
    if isinstance(move, Destab):
        return f"destab {move.base}"
    if isinstance(move, CancelInsert):
        return f"ins {move.handle} {move.position} {move.sign * move.base}"
    if isinstance(move, CancelDelete):
        return f"del {move.handle} {move.position}"
    if isinstance(move, Slide):
        return f"slide {move.handle} {move.which} {move.along} {move.direction}"
    if isinstance(move, CrossSlide):
        return f"xslide {move.handle} {move.position} {move.via} {move.direction}"
    if isinstance(move, TrivialHandle):
        return f"trivh {move.base}"
    if isinstance(move, RemoveTrivialHandle):
        return f"untrivh {move.handle}"
    if isinstance(move, ReverseHandle):
        return f"revh {move.handle}"
    raise MoveError(f"unknown move {move!r}")


def serialize_script(script: MoveScript) -> str:
    lines = [_move_line(m) for m in script]
    return "\n".join(lines) + "\n" if lines else ""


def parse_script(text: str | bytes) -> MoveScript:
    """One move per line; handles are 1-indexed in stored order, positions
    0-indexed, ``#`` comments allowed."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    moves: list[Move] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue

        def intval(token):
            try:
                return int(token, 10)
            except ValueError:
                raise ScriptFormatError(f"non-integer token '{token}'", lineno) from None

        def need(n):
            if len(tokens) != n:
                raise ScriptFormatError(f"'{tokens[0]}' takes {n - 1} arguments", lineno)

        kind = tokens[0]
        if kind == "stab":
            need(2)
            moves.append(Stab(intval(tokens[1])))
        elif kind == "destab":
            need(2)
            moves.append(Destab(intval(tokens[1])))
        elif kind == "ins":
            need(4)
            v = intval(tokens[3])
            if v == 0:
                raise ScriptFormatError("insert letter must be nonzero", lineno)
            moves.append(CancelInsert(intval(tokens[1]), intval(tokens[2]), abs(v), 1 if v > 0 else -1))
        elif kind == "del":
            need(3)
            moves.append(CancelDelete(intval(tokens[1]), intval(tokens[2])))
        elif kind == "slide":
            need(5)
            if tokens[2] not in ("start", "end") or tokens[4] not in ("fwd", "rev"):
                raise ScriptFormatError("expected 'slide <handle> start|end <along> fwd|rev'", lineno)
            moves.append(Slide(intval(tokens[1]), tokens[2], intval(tokens[3]), tokens[4]))
        elif kind == "xslide":
            need(5)
            if tokens[4] not in ("fwd", "rev"):
                raise ScriptFormatError("expected 'xslide <handle> <pos> <via> fwd|rev'", lineno)
            moves.append(CrossSlide(intval(tokens[1]), intval(tokens[2]), intval(tokens[3]), tokens[4]))
        elif kind == "trivh":
            need(2)
            moves.append(TrivialHandle(intval(tokens[1])))
        elif kind == "untrivh":
            need(2)
            moves.append(RemoveTrivialHandle(intval(tokens[1])))
        elif kind == "revh":
            need(2)
            moves.append(ReverseHandle(intval(tokens[1])))
        else:
            raise ScriptFormatError(f"unknown move '{kind}'", lineno)
    return MoveScript(tuple(moves))


# ---------------------------------------------------------------------------
# neighbor enumeration


def _destab_target(data: RibbonData, base: int):
    incident = []
    for i, h in enumerate(data.handles, start=1):
        if h.start == base or h.end == base:
            incident.append((i, h))
            if len(incident) > 1:
                return None
    if len(incident) != 1:
        return None
    _, h = incident[0]
    if h.word or h.start == h.end:
        return None
    if any(l.base == base for g in data.handles for l in g.word):
        return None
    return incident[0][0]


def enumerate_moves(data: RibbonData, weak_budget: int):
    """All canonical successors of a canonical state, as (move, state)
    pairs with duplicates removed.

    Includes every applicable destabilization, trivial-handle removal and
    slide, the crossing reroutes that do not lengthen the freely reduced
    word, a stabilization per base, and (only when ``weak_budget`` is
    positive) a trivial handle per base.  Free insertions are never
    enumerated: states are kept freely reduced, and insertions arise
    implicitly through slides followed by reduction.  Order is fixed, so
    the result is deterministic.
    """
    results: list[tuple[Move, RibbonData]] = []
    seen: set[str] = set()

    def push(move, new_data):
        state = canonical_form(new_data)
        key = serialize(state)
        if key not in seen:
            seen.add(key)
            results.append((move, state))

    n_handles = len(data.handles)

    for base in range(1, data.base_count + 1):
        if _destab_target(data, base) is not None:
            push(Destab(base), apply_destabilize(data, base))

    for i, h in enumerate(data.handles, start=1):
        if h.start == h.end and not h.word:
            push(RemoveTrivialHandle(i), remove_trivial_handle(data, i))

    for slider in range(1, n_handles + 1):
        h = data.handles[slider - 1]
        for which, attached in (("start", h.start), ("end", h.end)):
            for along in range(1, n_handles + 1):
                if along == slider:
                    continue
                for direction in ("fwd", "rev"):
                    near, _, _ = _traversal(data, along, direction)
                    if attached == near:
                        push(
                            Slide(slider, which, along, direction),
                            apply_slide(data, slider, which, along, direction),
                        )

    for idx in range(1, n_handles + 1):
        word = data.handles[idx - 1].word
        if not word:
            continue
        for via in range(1, n_handles + 1):
            if via == idx:
                continue
            for direction in ("fwd", "rev"):
                near, far, w = _traversal(data, via, direction)
                rf = reverse_flip(w)
                for pos, letter in enumerate(word):
                    if letter.base != near:
                        continue
                    spliced = (
                        word[:pos] + w + (SignedLetter(far, letter.sign),) + rf + word[pos + 1 :]
                    )
                    if len(free_reduce_word(spliced)) <= len(word):
                        push(
                            CrossSlide(idx, pos, via, direction),
                            apply_cross_slide(data, idx, pos, via, direction),
                        )

    for base in range(1, data.base_count + 1):
        push(Stab(base), apply_stabilize(data, base))

    if weak_budget > 0:
        for base in range(1, data.base_count + 1):
            push(TrivialHandle(base), apply_trivial_handle(data, base))

    return results
