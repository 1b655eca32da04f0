"""Spherical braids traced by a rotating triangle, and the way back to a rotation path.

Strand i at time t sits at (1 - t/2) * omega(t) x0_i, so the three points move
on a sphere that shrinks from radius 1 to 1/2. Reconstruction reads a rotation
off the triangle frame of every sample.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation

from src.errors import DegenerateTriangle, MalformedInput, NotAnchored, NotClosed
from src.rotation_path import RotationPath, Segment, closure_error, is_closed, segment_matrix

SQRT3_2 = math.sqrt(3.0) / 2.0
BASE_POINTS = np.array([[1.0, 0.0, 0.0], [-0.5, SQRT3_2, 0.0], [-0.5, -SQRT3_2, 0.0]])
COLLINEAR_AREA = 1e-9


@dataclass(frozen=True, eq=False)
class SphericalBraid:
    """Sample times in [0, 1] and the three strands as an array of shape (3, samples, 3)."""

    times: np.ndarray
    strands: np.ndarray

    @property
    def sample_count(self):
        return len(self.times)

    def triple(self, k):
        return self.strands[:, k, :]


@dataclass(frozen=True, eq=False)
class TriangleFrame:
    e1: np.ndarray
    e2: np.ndarray
    e3: np.ndarray

    @property
    def matrix(self):
        """The frame as the columns of a rotation matrix."""
        return np.column_stack([self.e1, self.e2, self.e3])


def base_points():
    return BASE_POINTS.copy()


def radius(t):
    return 1.0 - t / 2.0


def _sample_times(path, max_step):
    times = []
    bounds = path.boundaries
    for k, seg in enumerate(path.segments):
        steps = int(math.floor(abs(seg.angle) / max_step)) + 1
        times.extend(bounds[k] + (bounds[k + 1] - bounds[k]) * j / steps for j in range(steps))
    times.append(1.0)
    return np.array(times)


def trace(path, max_step=0.05, closure_tolerance=1e-9):
    """Sample the spherical braid of a closed path with rotation steps below max_step."""
    if max_step <= 0:
        raise MalformedInput(f"Trace step must be positive, got {max_step}")
    if not is_closed(path, closure_tolerance):
        raise NotClosed(f"Path ends {closure_error(path):.3g} away from the identity")
    if not path.segments:
        times = np.array([0.0, 1.0])
        rotations = [np.eye(3), np.eye(3)]
    else:
        times = _sample_times(path, max_step)
        rotations = []
        bounds = path.boundaries
        k = 0
        for t in times:
            while k < len(path.segments) - 1 and t >= bounds[k + 1]:
                k += 1
            seg = path.segments[k]
            fraction = min(max((t - bounds[k]) / (bounds[k + 1] - bounds[k]), 0.0), 1.0)
            rotations.append(segment_matrix(seg.axis, seg.angle * fraction) @ path.prefix_matrices[k])
    strands = np.empty((3, len(times), 3))
    for k, (t, rot) in enumerate(zip(times, rotations)):
        strands[:, k, :] = radius(t) * (rot @ BASE_POINTS.T).T
    return SphericalBraid(times, strands)


def frame_of_triangle(points):
    """Return the right-handed frame of a triangle: e1 towards vertex 1, e3 along its normal."""
    pts = np.asarray(points, dtype=float)
    unit = pts / np.linalg.norm(pts, axis=1, keepdims=True)
    normal = np.cross(unit[1] - unit[0], unit[2] - unit[0])
    if np.linalg.norm(normal) / 2.0 < COLLINEAR_AREA:
        raise DegenerateTriangle(f"Strand points {pts.tolist()} are collinear")
    lever = pts[0] - pts.mean(axis=0)
    e1 = lever / np.linalg.norm(lever)
    raw_normal = np.cross(pts[1] - pts[0], pts[2] - pts[0])
    e3 = raw_normal - np.dot(raw_normal, e1) * e1
    e3 /= np.linalg.norm(e3)
    return TriangleFrame(e1, np.cross(e3, e1), e3)


def _check_anchored(sb, tolerance):
    start_error = np.max(np.abs(sb.triple(0) - BASE_POINTS))
    end_error = np.max(np.abs(sb.triple(sb.sample_count - 1) - BASE_POINTS / 2.0))
    if sb.times[0] != 0.0 or sb.times[-1] != 1.0 or max(start_error, end_error) > tolerance:
        raise NotAnchored(
            f"Spherical braid must run from the base triangle to half of it "
            f"(start error {start_error:.3g}, end error {end_error:.3g})"
        )


def reconstruct_path(sb, anchor_tolerance=1e-6):
    """Recover a rotation path whose value at every sample time carries the base frame to the sample's frame."""
    _check_anchored(sb, anchor_tolerance)
    frames = [frame_of_triangle(sb.triple(k)).matrix for k in range(sb.sample_count)]
    segments = []
    for before, after in zip(frames, frames[1:]):
        rotvec = Rotation.from_matrix(after @ before.T).as_rotvec()
        angle = float(np.linalg.norm(rotvec))
        axis = tuple(rotvec / angle) if angle > 1e-15 else (0.0, 0.0, 1.0)
        segments.append(Segment(axis, angle if angle > 1e-15 else 0.0))
    durations = tuple(float(d) for d in np.diff(sb.times))
    return RotationPath(tuple(segments), durations)


def min_separation(sb):
    """Smallest angle between two strands over all samples."""
    unit = sb.strands / np.linalg.norm(sb.strands, axis=2, keepdims=True)
    smallest = math.pi
    for a, b in ((0, 1), (0, 2), (1, 2)):
        cosines = np.clip(np.sum(unit[a] * unit[b], axis=1), -1.0, 1.0)
        smallest = min(smallest, float(np.min(np.arccos(cosines))))
    return smallest


def perturb_strand(sb, strand, amplitude, seed):
    """Push one strand sideways by a bump that vanishes at both ends, keeping its radius."""
    if strand not in (1, 2, 3):
        raise MalformedInput(f"Strand must be 1, 2 or 3, got {strand}")
    rng = np.random.default_rng(seed)
    push = rng.normal(size=3)
    strands = sb.strands.copy()
    for k, t in enumerate(sb.times):
        point = strands[strand - 1, k]
        length = np.linalg.norm(point)
        direction = point / length
        sideways = push - np.dot(push, direction) * direction
        moved = direction + amplitude * math.sin(math.pi * t) ** 2 * sideways
        strands[strand - 1, k] = length * moved / np.linalg.norm(moved)
    return SphericalBraid(sb.times.copy(), strands)


def braid_to_json(sb):
    return {"times": sb.times.tolist(), "strands": sb.strands.tolist()}
