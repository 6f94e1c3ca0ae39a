"""
Value types of the continuation engine.

Paths are chains of legs parametrized by arclength: straight segments between
waypoints, optionally followed by full circles (monodromy loops) or arcs
(pole vaulting). Trajectories record every accepted step.
"""

import cmath
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from psent.app.config import Settings, settings as default_settings
from psent.app.core.errors import PreconditionError


class ContinuationSettings(BaseModel):
    """
    Numerical knobs of a continuation run.

    Built from the application `Settings` with optional overrides:

    .. code-block:: python

        cs = ContinuationSettings.from_settings(rel_tol=1e-11)
    """

    model_config = ConfigDict(frozen=True)

    rel_tol: float = 1e-9
    abs_tol: float = 1e-9
    blowup_threshold: float = 1e6
    min_step_factor: float = 1e-13
    max_steps: int = 200000
    chart_handoff_radius: float = 1e3
    lateral_offset: float = 1e-2
    vault_radius_factor: float = 0.5
    branch_fit_tol: float = 1e-3
    series_order: int = 24
    threads: int = 4

    @classmethod
    def from_settings(cls, source: Optional[Settings] = None, **overrides) -> "ContinuationSettings":
        source = source or default_settings
        values = {name: getattr(source, name) for name in cls.model_fields}
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    @field_validator("rel_tol", "abs_tol", "blowup_threshold", "chart_handoff_radius",
                     "lateral_offset", "vault_radius_factor", "branch_fit_tol")
    @classmethod
    def validate_positive(cls, v):
        if not v > 0:
            raise ValueError("must be strictly positive")
        return v

    @field_validator("min_step_factor")
    @classmethod
    def validate_min_step_factor(cls, v):
        if not 0 < v < 1:
            raise ValueError("min_step_factor must lie in (0, 1) so the minimal step stays below the path length")
        return v

    @field_validator("max_steps", "series_order", "threads")
    @classmethod
    def validate_positive_int(cls, v):
        if v < 1:
            raise ValueError("must be a positive integer")
        return v

    def min_step(self, length: float) -> float:
        return self.min_step_factor * length


# ----------------------------------------------------------------------
# legs and paths
# ----------------------------------------------------------------------

class Leg(ABC):
    """ A smooth piece of path, z(s) for 0 <= s <= length. """

    length: float

    @abstractmethod
    def point(self, s: float) -> complex:
        ...

    @abstractmethod
    def tangent(self, s: float) -> complex:
        """ dz/ds. """
        ...

    @property
    def end(self) -> complex:
        return self.point(self.length)


@dataclass(frozen=True)
class SegmentLeg(Leg):
    start: complex
    stop: complex

    def __post_init__(self):
        if self.start == self.stop:
            raise PreconditionError("consecutive waypoints must differ")

    @property
    def length(self) -> float:
        return abs(self.stop - self.start)

    @property
    def direction(self) -> complex:
        return (self.stop - self.start) / self.length

    def point(self, s: float) -> complex:
        return self.stop if s >= self.length else self.start + s * self.direction

    def tangent(self, s: float) -> complex:
        return self.direction


@dataclass(frozen=True)
class ArcLeg(Leg):
    """ Circular arc about `center` starting at angle `theta0`; positive sweep is counterclockwise. """

    center: complex
    radius: float
    theta0: float
    sweep: float

    def __post_init__(self):
        if self.radius <= 0 or self.sweep == 0:
            raise PreconditionError("arcs need a positive radius and a nonzero sweep")

    @property
    def length(self) -> float:
        return self.radius * abs(self.sweep)

    def _theta(self, s: float) -> float:
        return self.theta0 + math.copysign(s / self.radius, self.sweep)

    def point(self, s: float) -> complex:
        return self.center + self.radius * cmath.exp(1j * self._theta(s))

    def tangent(self, s: float) -> complex:
        return 1j * math.copysign(1.0, self.sweep) * cmath.exp(1j * self._theta(s))


@dataclass(frozen=True)
class LoopSpec:
    """ Circle about `center`; `turns` full loops, negative for clockwise. """

    center: complex
    radius: float
    turns: int = 1

    def __post_init__(self):
        if self.radius <= 0 or self.turns == 0:
            raise PreconditionError("loops need a positive radius and a nonzero number of turns")


@dataclass(frozen=True)
class PathSpec:
    """
    Piecewise-linear path through `waypoints`, optionally ending with loops.

    Without a loop at least two waypoints are needed; with a loop one
    waypoint (the start) suffices. If the last waypoint is off the circle a
    radial segment joins it to the nearest circle point.
    """

    waypoints: Tuple[complex, ...]
    loop: Optional[LoopSpec] = None
    extra_legs: Tuple[Leg, ...] = field(default_factory=tuple)

    def __post_init__(self):
        points = tuple(complex(w) for w in self.waypoints)
        object.__setattr__(self, "waypoints", points)
        needed = 1 if (self.loop or self.extra_legs) else 2
        if len(points) < needed:
            raise PreconditionError(f"a path needs at least {needed} waypoint(s)")
        for a, b in zip(points, points[1:]):
            if a == b:
                raise PreconditionError("consecutive waypoints must differ")

    @classmethod
    def segment(cls, start, stop) -> "PathSpec":
        return cls((start, stop))

    @classmethod
    def arc(cls, center: complex, start: complex, sweep: float) -> "PathSpec":
        """ Arc about `center` from `start` sweeping `sweep` radians. """
        offset = complex(start) - complex(center)
        leg = ArcLeg(complex(center), abs(offset), cmath.phase(offset), sweep)
        return cls((complex(start),), extra_legs=(leg,))

    @classmethod
    def ray(cls, start: complex, angle: float, length: float) -> "PathSpec":
        return cls((start, start + length * cmath.exp(1j * angle)))

    @property
    def start(self) -> complex:
        return self.waypoints[0]

    def legs(self) -> List[Leg]:
        legs: List[Leg] = [SegmentLeg(a, b) for a, b in zip(self.waypoints, self.waypoints[1:])]
        legs.extend(self.extra_legs)
        if self.loop is not None:
            last = legs[-1].end if legs else self.waypoints[-1]
            offset = last - self.loop.center
            if offset == 0:
                raise PreconditionError("the path cannot end at the loop center")
            entry = self.loop.center + self.loop.radius * offset / abs(offset)
            if abs(entry - last) > 1e-15 * max(1.0, abs(last)):
                legs.append(SegmentLeg(last, entry))
            legs.append(ArcLeg(self.loop.center, self.loop.radius, cmath.phase(offset),
                               2 * math.pi * self.loop.turns))
        return legs

    def length(self) -> float:
        return sum(leg.length for leg in self.legs())


# ----------------------------------------------------------------------
# trajectories
# ----------------------------------------------------------------------

class Termination(str, Enum):
    COMPLETED = "completed"
    SINGULARITY = "singularity-encounter"
    STEP_COLLAPSE = "step-collapse"
    MAX_STEPS = "max-steps"


@dataclass(frozen=True)
class Sample:
    """ One accepted state; `h` and `err` are the step that produced it (zero for the start). """

    z: complex
    y: complex
    yp: complex
    h: float = 0.0
    err: float = 0.0

    @property
    def state(self) -> Tuple[complex, complex, complex]:
        return self.z, self.y, self.yp


@dataclass(frozen=True)
class Trajectory:
    samples: Tuple[Sample, ...]
    termination: Termination

    @property
    def last(self) -> Sample:
        return self.samples[-1]

    @property
    def accepted_steps(self) -> int:
        return len(self.samples) - 1

    def arrays(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        z = np.array([s.z for s in self.samples], dtype=complex)
        y = np.array([s.y for s in self.samples], dtype=complex)
        yp = np.array([s.yp for s in self.samples], dtype=complex)
        return z, y, yp

    def peak_index(self) -> int:
        return int(np.argmax([abs(s.y) for s in self.samples]))

    def growth_tail(self, ratio: float = 1e-3, limit: int = 60) -> List[Sample]:
        """
        Samples leading up to the largest |y| along which |y| grows.

        Keeps at most `limit` samples and none below `ratio` times the peak.
        """
        peak = self.peak_index()
        tail = [self.samples[peak]]
        for s in reversed(self.samples[:peak]):
            if abs(s.y) >= abs(tail[0].y) or abs(s.y) < ratio * abs(self.samples[peak].y):
                break
            tail.insert(0, s)
            if len(tail) >= limit:
                break
        return tail

    def concat(self, other: "Trajectory") -> "Trajectory":
        return Trajectory(self.samples + other.samples[1:], other.termination)


def states_close(a: Sequence[complex], b: Sequence[complex]) -> float:
    """ max(|y_a - y_b|, |y'_a - y'_b|) relative to max(1, |y_a|, |y'_a|). """
    scale = max(1.0, abs(a[0]), abs(a[1]))
    return max(abs(a[0] - b[0]), abs(a[1] - b[1])) / scale
