"""Configuration-space geometry for point robots in a Euclidean box.

Obstacles are closed sets: a configuration lying on an obstacle boundary is in
collision, and so is a segment that merely touches one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

Configuration = tuple[float, ...]


class InvalidInputError(ValueError):
    """Raised on malformed arguments (dimension mismatch, bad parameters)."""


class UnsatisfiableScenarioError(RuntimeError):
    """Raised when rejection sampling cannot find free configurations."""


def as_config(q: Sequence[float]) -> Configuration:
    return tuple(float(v) for v in q)


@dataclass(frozen=True)
class Obstacle:
    """Axis-aligned box (``lo``/``hi``) or ball (``center``/``radius``)."""

    kind: str
    lo: Configuration | None = None
    hi: Configuration | None = None
    center: Configuration | None = None
    radius: float | None = None

    @classmethod
    def box(cls, lo: Sequence[float], hi: Sequence[float]) -> "Obstacle":
        lo, hi = as_config(lo), as_config(hi)
        if len(lo) != len(hi):
            raise InvalidInputError("box corners differ in dimension")
        if any(a >= b for a, b in zip(lo, hi)):
            raise InvalidInputError(f"box requires lo < hi on every axis, got {lo} / {hi}")
        return cls("box", lo=lo, hi=hi)

    @classmethod
    def ball(cls, center: Sequence[float], radius: float) -> "Obstacle":
        if not radius > 0:
            raise InvalidInputError(f"ball radius must be positive, got {radius}")
        return cls("ball", center=as_config(center), radius=float(radius))

    @property
    def dimension(self) -> int:
        return len(self.lo) if self.kind == "box" else len(self.center)


@dataclass(frozen=True)
class GoalRegion:
    center: Configuration
    radius: float = 0.0

    def __post_init__(self):
        if self.radius < 0:
            raise InvalidInputError("goal radius must be >= 0")


@dataclass(frozen=True)
class Scenario:
    """A motion-planning problem: bounds, obstacles, start and goal region.

    Construction validates every invariant; obstacle arrays used by the
    vectorised collision tests are precomputed once.
    """

    dimension: int
    bounds: tuple[Configuration, Configuration]
    obstacles: tuple[Obstacle, ...]
    x_init: Configuration
    goal: GoalRegion
    name: str = "scenario"
    _box_lo: np.ndarray = field(init=False, repr=False, compare=False)
    _box_hi: np.ndarray = field(init=False, repr=False, compare=False)
    _ball_c: np.ndarray = field(init=False, repr=False, compare=False)
    _ball_r2: np.ndarray = field(init=False, repr=False, compare=False)
    _lo: np.ndarray = field(init=False, repr=False, compare=False)
    _hi: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        d = self.dimension
        if d < 1:
            raise InvalidInputError("dimension must be >= 1")
        lo, hi = (as_config(b) for b in self.bounds)
        if len(lo) != d or len(hi) != d or any(a >= b for a, b in zip(lo, hi)):
            raise InvalidInputError(f"bounds must be {d}-dimensional with lo < hi")
        object.__setattr__(self, "bounds", (lo, hi))
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        object.__setattr__(self, "x_init", as_config(self.x_init))
        for ob in self.obstacles:
            if ob.dimension != d:
                raise InvalidInputError("obstacle dimension does not match scenario")
        boxes = [ob for ob in self.obstacles if ob.kind == "box"]
        balls = [ob for ob in self.obstacles if ob.kind == "ball"]
        if len(boxes) + len(balls) != len(self.obstacles):
            bad = {ob.kind for ob in self.obstacles} - {"box", "ball"}
            raise InvalidInputError(f"unknown obstacle kind(s): {sorted(bad)}")
        object.__setattr__(self, "_lo", np.array(lo))
        object.__setattr__(self, "_hi", np.array(hi))
        object.__setattr__(self, "_box_lo", np.array([b.lo for b in boxes]).reshape(-1, d))
        object.__setattr__(self, "_box_hi", np.array([b.hi for b in boxes]).reshape(-1, d))
        object.__setattr__(self, "_ball_c", np.array([b.center for b in balls]).reshape(-1, d))
        object.__setattr__(self, "_ball_r2", np.array([b.radius**2 for b in balls]))

        if len(self.x_init) != d or not is_free(self, self.x_init):
            raise InvalidInputError("x_init must be collision-free and inside bounds")
        if len(self.goal.center) != d or not is_free(self, self.goal.center):
            raise InvalidInputError("goal.center must be collision-free and inside bounds")

    @property
    def volume(self) -> float:
        return float(np.prod(self._hi - self._lo))


def _check_dim(scenario: Scenario, *qs) -> None:
    for q in qs:
        if len(q) != scenario.dimension:
            raise InvalidInputError(
                f"configuration has {len(q)} coordinates, scenario is {scenario.dimension}-D"
            )


def is_free(scenario: Scenario, q: Sequence[float]) -> bool:
    _check_dim(scenario, q)
    p = np.asarray(q, dtype=float)
    if not (np.all(np.isfinite(p)) and np.all(p >= scenario._lo) and np.all(p <= scenario._hi)):
        return False
    if len(scenario._box_lo):
        inside = np.all((p >= scenario._box_lo) & (p <= scenario._box_hi), axis=1)
        if inside.any():
            return False
    if len(scenario._ball_c):
        d2 = np.sum((scenario._ball_c - p) ** 2, axis=1)
        if np.any(d2 <= scenario._ball_r2):
            return False
    return True


def free_mask(scenario: Scenario, pts: np.ndarray) -> np.ndarray:
    """Vectorised :func:`is_free` over an ``(N, d)`` array."""
    pts = np.asarray(pts, dtype=float)
    ok = np.all((pts >= scenario._lo) & (pts <= scenario._hi), axis=1)
    for lo, hi in zip(scenario._box_lo, scenario._box_hi):
        ok &= ~np.all((pts >= lo) & (pts <= hi), axis=1)
    for c, r2 in zip(scenario._ball_c, scenario._ball_r2):
        ok &= np.sum((pts - c) ** 2, axis=1) > r2
    return ok


def sample_free(scenario: Scenario, count: int, rng: np.random.Generator,
                max_attempts: int | None = None) -> list[Configuration]:
    """Draw ``count`` collision-free configurations by rejection sampling.

    Candidates are drawn one at a time (``d`` uniforms each), so the stream
    consumed for a prefix does not depend on how many points are requested
    later.
    """
    if count < 0:
        raise InvalidInputError("count must be >= 0")
    cap = 10_000 * count if max_attempts is None else max_attempts
    lo, span = scenario._lo, scenario._hi - scenario._lo
    out: list[Configuration] = []
    attempts = 0
    while len(out) < count:
        if attempts >= cap:
            raise UnsatisfiableScenarioError(
                f"{attempts} rejection-sampling attempts yielded only {len(out)}/{count} free points"
            )
        attempts += 1
        q = lo + span * rng.random(scenario.dimension)
        if is_free(scenario, q):
            out.append(tuple(q.tolist()))
    return out


def _segment_hits_box(a: np.ndarray, d: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> bool:
    # slab method on the closed parameter interval [0, 1]
    t0, t1 = 0.0, 1.0
    for k in range(len(a)):
        if d[k] == 0.0:
            if a[k] < lo[k] or a[k] > hi[k]:
                return False
            continue
        ta = (lo[k] - a[k]) / d[k]
        tb = (hi[k] - a[k]) / d[k]
        if ta > tb:
            ta, tb = tb, ta
        if ta > t0:
            t0 = ta
        if tb < t1:
            t1 = tb
        if t0 > t1:
            return False
    return True


def _segment_hits_ball(a: np.ndarray, d: np.ndarray, c: np.ndarray, r2: float) -> bool:
    dd = float(d @ d)
    t = 0.0 if dd == 0.0 else min(1.0, max(0.0, float((c - a) @ d) / dd))
    closest = a + t * d - c
    return float(closest @ closest) <= r2


def collision_free(scenario: Scenario, a: Sequence[float], b: Sequence[float],
                   counters=None, edge: tuple[int, int] | None = None) -> bool:
    """Exact test that the closed segment ``ab`` lies in free space.

    When ``counters`` is given the call is recorded as one local-planner
    invocation (on ``edge`` if node indices are supplied).
    """
    _check_dim(scenario, a, b)
    if counters is not None:
        counters.record_lp(edge)
    pa = np.asarray(a, dtype=float)
    pb = np.asarray(b, dtype=float)
    lo, hi = scenario._lo, scenario._hi
    # bounds form a convex box, so checking the endpoints suffices
    if np.any(pa < lo) or np.any(pa > hi) or np.any(pb < lo) or np.any(pb > hi):
        return False
    d = pb - pa
    if len(scenario._box_lo):
        # cheap AABB reject before the per-box slab test
        seg_lo = np.minimum(pa, pb)
        seg_hi = np.maximum(pa, pb)
        cand = np.all((scenario._box_lo <= seg_hi) & (scenario._box_hi >= seg_lo), axis=1)
        for i in np.flatnonzero(cand):
            if _segment_hits_box(pa, d, scenario._box_lo[i], scenario._box_hi[i]):
                return False
    for c, r2 in zip(scenario._ball_c, scenario._ball_r2):
        if _segment_hits_ball(pa, d, c, r2):
            return False
    return True


def in_goal(scenario: Scenario, q: Sequence[float]) -> bool:
    return math.dist(q, scenario.goal.center) <= scenario.goal.radius


def free_space_measure(scenario: Scenario, mode: str = "bounds", samples: int = 0,
                       rng: np.random.Generator | None = None) -> float:
    """Lebesgue measure of free space.

    ``mode="bounds"`` returns the bounding-box volume, an upper bound.
    ``mode="monte_carlo"`` scales it by the fraction of uniform draws that
    are free.
    """
    if mode == "bounds":
        return scenario.volume
    if mode != "monte_carlo":
        raise InvalidInputError(f"unknown measure mode {mode!r}")
    if samples < 1:
        raise InvalidInputError("monte_carlo mode needs samples >= 1")
    rng = np.random.default_rng() if rng is None else rng
    hits = 0
    chunk = 200_000
    done = 0
    span = scenario._hi - scenario._lo
    while done < samples:
        m = min(chunk, samples - done)
        pts = scenario._lo + span * rng.random((m, scenario.dimension))
        hits += int(free_mask(scenario, pts).sum())
        done += m
    return scenario.volume * hits / samples
