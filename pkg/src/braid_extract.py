"""From a spherical braid to a braid word: pole choice, stereographic projection, crossing sweep.

Sign convention: at a crossing of the strands in positions i and i+1, the
letter is sigma_i when the strand arriving from the left has the smaller v
coordinate (it passes behind), and sigma_i^-1 otherwise. For the pole +z the
(u, v) axes are x and y.
"""

import functools
import math
import sys
from dataclasses import dataclass

import numpy as np

from src.braid_core import is_pure, make_word, permutation_of
from src.errors import DegenerateCrossing, MalformedInput, NoClearPole, NotPureResult, PoleCollision, TripleCrossing
from src.spherical_braid import trace

NORTH_POLE = np.array([0.0, 0.0, 1.0])
GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))
POLE_COLLISION = 1e-6
TIE_TOLERANCE = 1e-9
MAX_REFINEMENTS = 8
RETRY_ANGLE = 0.25


@dataclass(frozen=True, eq=False)
class PlanarStrands:
    """Projected strands: ``uv`` has shape (3, samples, 2); ``depth`` is -radius per sample."""

    times: np.ndarray
    uv: np.ndarray
    depth: np.ndarray
    pole: np.ndarray
    frame_angle: float = 0.0


@dataclass(frozen=True)
class CrossingEvent:
    time: float
    position: int
    sign: int


@dataclass(frozen=True, eq=False)
class BraidExtraction:
    """A braid word together with the projection that produced it."""

    word: object
    pole: np.ndarray
    clearance: float
    samples: int
    attempts: int
    frame_angle: float
    events: tuple = ()
    trace_step: float = 0.05


def fibonacci_directions(count):
    """Quasi-uniform unit vectors on the sphere."""
    points = []
    for i in range(count):
        z = 1.0 - 2.0 * (i + 0.5) / count
        r = math.sqrt(max(0.0, 1.0 - z * z))
        phi = i * GOLDEN_ANGLE
        points.append(np.array([r * math.cos(phi), r * math.sin(phi), z]))
    return points


def _unit_samples(sb):
    flat = sb.strands.reshape(-1, 3)
    return flat / np.linalg.norm(flat, axis=1, keepdims=True)


def pole_clearance(sb, pole):
    """Smallest angle between the pole and any normalized strand sample."""
    cosines = _unit_samples(sb) @ np.asarray(pole, dtype=float)
    return float(math.acos(min(1.0, float(np.max(cosines)))))


def sample_spacing(sb):
    """Largest angle any strand direction turns through between two consecutive samples."""
    unit = sb.strands / np.linalg.norm(sb.strands, axis=2, keepdims=True)
    if unit.shape[1] < 2:
        return 0.0
    cosines = np.sum(unit[:, 1:, :] * unit[:, :-1, :], axis=2)
    return float(math.acos(float(np.clip(np.min(cosines), -1.0, 1.0))))


def choose_pole(sb, candidates=64, min_clearance=1e-4):
    """Pick the candidate direction farthest from every strand; the north pole wins ties."""
    if candidates < 1:
        raise MalformedInput(f"Pole candidates must be at least 1, got {candidates}")
    best, best_clearance = None, -1.0
    for direction in [NORTH_POLE] + fibonacci_directions(candidates - 1):
        clearance = pole_clearance(sb, direction)
        if clearance > best_clearance:
            best, best_clearance = direction, clearance
    if best_clearance < min_clearance:
        raise NoClearPole(f"Best pole clearance {best_clearance:.3g} rad is below {min_clearance:.3g}")
    return best.copy()


def tangent_basis(pole, frame_angle=0.0):
    """Orthonormal (e_u, e_v) in the tangent plane of the pole, rotated by frame_angle."""
    p = np.asarray(pole, dtype=float)
    p = p / np.linalg.norm(p)
    e_u = np.array([1.0, 0.0, 0.0]) - p[0] * p
    if np.linalg.norm(e_u) < 1e-6:
        e_u = np.array([0.0, 1.0, 0.0]) - p[1] * p
    e_u /= np.linalg.norm(e_u)
    e_v = np.cross(p, e_u)
    c, s = math.cos(frame_angle), math.sin(frame_angle)
    return c * e_u + s * e_v, -s * e_u + c * e_v


def stereographic(direction, pole, e_u, e_v):
    d = np.asarray(direction, dtype=float)
    scale = 1.0 - float(np.dot(d, pole))
    return np.array([np.dot(d, e_u), np.dot(d, e_v)]) / scale


def project(sb, pole, frame_angle=0.0):
    """Stereographically project every sample direction from the pole."""
    p = np.asarray(pole, dtype=float)
    p = p / np.linalg.norm(p)
    if pole_clearance(sb, p) < POLE_COLLISION:
        raise PoleCollision(f"A strand passes within {POLE_COLLISION} rad of the pole {p.tolist()}")
    e_u, e_v = tangent_basis(p, frame_angle)
    unit = sb.strands / np.linalg.norm(sb.strands, axis=2, keepdims=True)
    scale = 1.0 - unit @ p
    uv = np.stack([unit @ e_u / scale, unit @ e_v / scale], axis=-1)
    depth = -np.linalg.norm(sb.strands, axis=2).mean(axis=0)
    return PlanarStrands(sb.times.copy(), uv, depth, p, frame_angle)


def _comes_before(uv_k, a, b):
    du = uv_k[a, 0] - uv_k[b, 0]
    if abs(du) > TIE_TOLERANCE:
        return du < 0
    if uv_k[a, 1] != uv_k[b, 1]:
        return uv_k[a, 1] < uv_k[b, 1]
    return a < b


def _order_at(ps, k):
    """Left-to-right order of the strands at sample k; u ties are broken by v, then by index."""
    uv_k = ps.uv[:, k, :]

    def compare(a, b):
        return -1 if _comes_before(uv_k, a, b) else 1

    return sorted(range(3), key=functools.cmp_to_key(compare))


def _crossing_fraction(f0, f1):
    """Where the linear interpolant from f0 to f1 vanishes."""
    if abs(f0) <= TIE_TOLERANCE:
        return 0.0
    if abs(f1) <= TIE_TOLERANCE:
        return 1.0
    return min(1.0, max(0.0, f0 / (f0 - f1)))


def _interval_events(ps, k):
    here, there = ps.uv[:, k, :], ps.uv[:, k + 1, :]
    found = []
    for a, b in ((0, 1), (0, 2), (1, 2)):
        if _comes_before(here, a, b) != _comes_before(there, a, b):
            s = _crossing_fraction(here[a, 0] - here[b, 0], there[a, 0] - there[b, 0])
            found.append((s, a, b))
    return sorted(found)


def crossing_events(ps):
    """Sweep the samples in time and return the crossing events in order."""
    order = _order_at(ps, 0)
    events = []
    for k in range(len(ps.times) - 1):
        dt = ps.times[k + 1] - ps.times[k]
        for s, a, b in _interval_events(ps, k):
            point = (1.0 - s) * ps.uv[:, k, :] + s * ps.uv[:, k + 1, :]
            pa, pb = order.index(a), order.index(b)
            third = 3 - a - b
            if abs(pa - pb) != 1 or abs(point[third, 0] - point[a, 0]) <= TIE_TOLERANCE:
                raise TripleCrossing(f"All three strands share u near t={ps.times[k] + s * dt:.6f}")
            left, right = (a, b) if pa < pb else (b, a)
            dv = point[left, 1] - point[right, 1]
            if abs(dv) < TIE_TOLERANCE:
                raise DegenerateCrossing(f"Strands {left + 1} and {right + 1} meet at t={ps.times[k] + s * dt:.6f}")
            position = min(pa, pb)
            events.append(CrossingEvent(float(ps.times[k] + s * dt), position + 1, 1 if dv < 0 else -1))
            order[position], order[position + 1] = order[position + 1], order[position]
        if order != _order_at(ps, k + 1):
            raise TripleCrossing(f"Crossing sweep lost the strand order between samples {k} and {k + 1}")
    return events, order


def _sweep(ps):
    start = _order_at(ps, 0)
    events, end = crossing_events(ps)
    word = make_word(3, [(e.position, e.sign) for e in events])
    net = tuple(start.index(strand) + 1 for strand in end)
    if permutation_of(word).images != net:
        raise NotPureResult(f"Word permutation {permutation_of(word)} does not match the strand order {net}")
    return word, events


def extract_word(ps):
    """Read the braid word off the crossings of the projected strands."""
    return _sweep(ps)[0]


def refine_for_pole(path, sb, pole, max_step, closure_tolerance=1e-9):
    """Re-trace until the pole clears every strand by more than the sample spacing.

    Returns the braid and the step it was traced with. Between two samples a
    strand moves by about the spacing, so it cannot reach the pole ray unseen
    once the clearance exceeds the spacing.
    """
    step = max_step
    for _ in range(MAX_REFINEMENTS + 1):
        clearance = pole_clearance(sb, pole)
        if clearance < POLE_COLLISION:
            break
        if clearance > sample_spacing(sb):
            return sb, step
        step = min(step, clearance) / 2.0
        print(f"  WARNING: pole clearance {clearance:.3g} rad is within the sample spacing, "
              f"re-tracing with step {step:.3g}", file=sys.stderr)
        sb = trace(path, step, closure_tolerance)
    raise PoleCollision(f"Pole {np.asarray(pole).tolist()} stays within the sample spacing of a strand "
                        f"(clearance {pole_clearance(sb, pole):.3g} rad)")


def extract_braid(path, max_step=0.05, pole_candidates=64, min_clearance=1e-4, retries=8, seed=0,
                  closure_tolerance=1e-9):
    """Run trace, pole choice, projection and sweep, retrying degenerate projections."""
    sb = trace(path, max_step, closure_tolerance)
    pole = choose_pole(sb, pole_candidates, min_clearance)
    sb, step = refine_for_pole(path, sb, pole, max_step, closure_tolerance)
    rng = np.random.default_rng(seed)
    frame_angle = 0.0
    for attempt in range(retries + 1):
        try:
            ps = project(sb, pole, frame_angle)
            word, events = _sweep(ps)
            break
        except (DegenerateCrossing, TripleCrossing) as e:
            if attempt == retries:
                raise
            print(f"  WARNING: {e}, retrying projection (attempt {attempt + 1}/{retries})", file=sys.stderr)
            frame_angle = float(rng.uniform(-RETRY_ANGLE, RETRY_ANGLE))
    if not is_pure(word):
        raise NotPureResult(f"Closed path produced the non-pure word {word}")
    return BraidExtraction(word, pole, pole_clearance(sb, pole), sb.sample_count, attempt + 1, frame_angle,
                           tuple(events), step)


def braid_of_path(path, **options):
    """Return the pure braid word of a closed rotation path."""
    return extract_braid(path, **options).word


def planar_to_json(ps):
    return {
        "times": ps.times.tolist(),
        "uv": ps.uv.tolist(),
        "depth": ps.depth.tolist(),
        "pole": ps.pole.tolist(),
        "frame_angle": ps.frame_angle,
    }
