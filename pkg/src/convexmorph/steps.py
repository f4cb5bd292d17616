"""Unidirectional morph steps and the sequences that chain them.

A morph step moves every vertex along one axis only: the other coordinate
is pinned, so the step is a linear interpolation whose fixed-axis values
agree exactly between its two endpoint drawings.  A morph sequence strings
steps together, optionally interleaved with discrete graph edits (edge or
vertex insertions and removals at frozen coordinates), and is the unit the
verifier certifies and the step-count bounds are measured on.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple, Union

from .plane_graph import Drawing, PreconditionViolated


class Direction(enum.Enum):
    """Axis a step moves along. The other coordinate stays put."""

    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"

    @property
    def moving_axis(self) -> int:
        return 0 if self is Direction.HORIZONTAL else 1

    @property
    def fixed_axis(self) -> int:
        return 1 if self is Direction.HORIZONTAL else 0


def _same_drawing(a: Drawing, b: Drawing) -> bool:
    return a.graph == b.graph and a.coords == b.coords


@dataclass(frozen=True)
class MorphStep:
    """One linear move of a drawing along a single axis.

    Both endpoints draw the same plane graph and agree exactly on the
    fixed-axis coordinate of every vertex.  provenance is a free-form
    note describing which operation emitted the step.
    """

    direction: Direction
    start: Drawing
    end: Drawing
    provenance: str = ""

    def __post_init__(self):
        if self.start.graph != self.end.graph:
            raise PreconditionViolated("step endpoints draw different graphs")
        if self.start.float_mode != self.end.float_mode:
            raise PreconditionViolated("step endpoints mix numeric modes")
        ax = self.direction.fixed_axis
        for v, p in self.start.coords.items():
            if p[ax] != self.end.coords[v][ax]:
                raise PreconditionViolated(
                    f"vertex {v} moves on the fixed axis of a "
                    f"{self.direction.value} step")

    def at(self, t) -> Drawing:
        """Drawing at parameter t of the straight-line interpolation."""
        if t == 0:
            return self.start
        if t == 1:
            return self.end
        tt = float(t) if self.start.float_mode else Fraction(t)
        s = 1 - tt
        mov = self.direction.moving_axis
        coords = {}
        for v, p in self.start.coords.items():
            q = self.end.coords[v]
            val = s * p[mov] + tt * q[mov]
            coords[v] = (val, p[1]) if mov == 0 else (p[0], val)
        return self.start.with_coords(coords)

    def is_identity(self) -> bool:
        return self.start.coords == self.end.coords

    def reversed(self) -> "MorphStep":
        return MorphStep(self.direction, self.end, self.start, self.provenance)

    def merged_with(self, other: "MorphStep") -> "MorphStep":
        """Compose two consecutive moves along the same axis into one step."""
        if self.direction is not other.direction:
            raise PreconditionViolated("cannot merge steps across directions")
        if not _same_drawing(self.end, other.start):
            raise PreconditionViolated("merged steps do not chain")
        notes = [s for s in (self.provenance, other.provenance) if s]
        return MorphStep(self.direction, self.start, other.end,
                         "; ".join(dict.fromkeys(notes)))


@dataclass(frozen=True)
class GraphEdit:
    """A discrete change of the graph with every shared vertex frozen."""

    start: Drawing
    end: Drawing
    label: str = ""

    def __post_init__(self):
        if self.start.float_mode != self.end.float_mode:
            raise PreconditionViolated("edit endpoints mix numeric modes")
        for v in self.start.coords.keys() & self.end.coords.keys():
            if self.start.coords[v] != self.end.coords[v]:
                raise PreconditionViolated(
                    f"vertex {v} moves during a graph edit")

    @property
    def added_vertices(self) -> Tuple[int, ...]:
        return tuple(sorted(self.end.coords.keys() - self.start.coords.keys()))

    @property
    def removed_vertices(self) -> Tuple[int, ...]:
        return tuple(sorted(self.start.coords.keys() - self.end.coords.keys()))

    @property
    def added_edges(self) -> Tuple[Tuple[int, int], ...]:
        return tuple(sorted(set(self.end.graph.edges())
                            - set(self.start.graph.edges())))

    @property
    def removed_edges(self) -> Tuple[Tuple[int, int], ...]:
        return tuple(sorted(set(self.start.graph.edges())
                            - set(self.end.graph.edges())))


Event = Union[MorphStep, GraphEdit]


@dataclass(frozen=True)
class MorphSequence:
    """Chained steps and edits: each event starts where the last one ended."""

    initial: Drawing
    events: Tuple[Event, ...] = ()

    def __post_init__(self):
        cur = self.initial
        for i, ev in enumerate(self.events):
            if not _same_drawing(ev.start, cur):
                raise PreconditionViolated(f"event {i} does not chain")
            cur = ev.end

    @property
    def final(self) -> Drawing:
        return self.events[-1].end if self.events else self.initial

    @property
    def steps(self) -> Tuple[MorphStep, ...]:
        return tuple(e for e in self.events if isinstance(e, MorphStep))

    @property
    def edits(self) -> Tuple[GraphEdit, ...]:
        return tuple(e for e in self.events if isinstance(e, GraphEdit))

    @property
    def step_count(self) -> int:
        return sum(1 for e in self.events if isinstance(e, MorphStep))


class SequenceBuilder:
    """Accumulates events, dropping identity moves and merging consecutive
    moves along the same axis into a single step."""

    def __init__(self, start: Drawing):
        self._initial = start
        self._events: List[Event] = []

    @property
    def current(self) -> Drawing:
        return self._events[-1].end if self._events else self._initial

    def move(self, direction: Direction, end: Drawing,
             provenance: str = "") -> None:
        step = MorphStep(direction, self.current, end, provenance)
        if step.is_identity():
            return
        last = self._events[-1] if self._events else None
        if isinstance(last, MorphStep) and last.direction is direction:
            merged = last.merged_with(step)
            if merged.is_identity():
                self._events.pop()
            else:
                self._events[-1] = merged
        else:
            self._events.append(step)

    def edit(self, end: Drawing, label: str = "") -> None:
        self._events.append(GraphEdit(self.current, end, label))

    def absorb(self, seq: MorphSequence) -> None:
        """Replay another sequence, merging steps across the seam."""
        if not _same_drawing(seq.initial, self.current):
            raise PreconditionViolated("absorbed sequence does not chain")
        for ev in seq.events:
            if isinstance(ev, MorphStep):
                self.move(ev.direction, ev.end, ev.provenance)
            else:
                self.edit(ev.end, ev.label)

    def build(self) -> MorphSequence:
        return MorphSequence(self._initial, tuple(self._events))
