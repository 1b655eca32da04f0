"""Closed paths in SO(3) built from constant-axis segments, and their quaternion lift.

A path executes its segments in order over t in [0, 1]. Segment k rotates by
``angle`` about ``axis`` during its share ``durations[k]`` of the parameter
interval; rotation_at composes completed segments with later ones on the
left. The quaternion lift uses its own arithmetic (no scipy) so that it stays
an independent check on the braid route.
"""

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation

from src.errors import (
    MalformedInput,
    NotClosed,
    NotNormalizable,
    NumericalAmbiguity,
    OutOfRange,
    SparseSampling,
    ZeroAxis,
)
from src.sphere_quotient import HomotopyClass

ZERO_ANGLE_WEIGHT = 1e-3
DEFAULT_AXIS = (0.0, 0.0, 1.0)


@dataclass(frozen=True)
class Segment:
    axis: tuple
    angle: float


@dataclass(frozen=True)
class RotationPath:
    """A piecewise-geodesic path; ``durations`` is None for the default allocation."""

    segments: tuple = ()
    durations: tuple = None

    def __len__(self):
        return len(self.segments)

    @functools.cached_property
    def shares(self):
        """Parameter share of each segment, summing to 1."""
        if self.durations is not None:
            return np.asarray(self.durations, dtype=float)
        return default_durations([s.angle for s in self.segments])

    @functools.cached_property
    def boundaries(self):
        bounds = np.concatenate([[0.0], np.cumsum(self.shares)])
        bounds[-1] = 1.0
        return bounds

    @functools.cached_property
    def prefix_matrices(self):
        """prefix_matrices[k] is the rotation after the first k segments."""
        mats = [np.eye(3)]
        for seg in self.segments:
            mats.append(segment_matrix(seg.axis, seg.angle) @ mats[-1])
        return mats


def default_durations(angles):
    """Shares proportional to |angle|; zero-angle segments weigh ZERO_ANGLE_WEIGHT."""
    if not angles:
        return np.zeros(0)
    weights = np.array([abs(a) if abs(a) > 1e-12 else ZERO_ANGLE_WEIGHT for a in angles], dtype=float)
    return weights / weights.sum()


def _unit_axis(axis, angle):
    vec = np.asarray(axis, dtype=float)
    if vec.shape != (3,) or not np.all(np.isfinite(vec)):
        raise MalformedInput(f"Segment axis must be three finite numbers, got {axis!r}")
    norm = float(np.linalg.norm(vec))
    if norm <= 1e-9:
        if abs(angle) > 0.0:
            raise ZeroAxis(f"Segment with angle {angle} has a zero axis {list(vec)}")
        return DEFAULT_AXIS
    return tuple(float(c) for c in vec / norm)


def _check_durations(durations, count):
    values = np.asarray(durations, dtype=float)
    if values.shape != (count,) or not np.all(np.isfinite(values)) or np.any(values <= 0):
        raise MalformedInput(f"Durations must be {count} positive numbers")
    if abs(values.sum() - 1.0) > 1e-9:
        raise MalformedInput(f"Durations must sum to 1, got {values.sum()}")
    return tuple(float(v) for v in values)


def path_from_segments(segments, durations=None):
    """Build a path from (axis, angle) pairs or {"axis": ..., "angle": ...} dicts."""
    built = []
    for seg in segments:
        if isinstance(seg, dict):
            axis, angle = seg.get("axis"), seg.get("angle")
        else:
            axis, angle = seg
        if isinstance(angle, bool) or not isinstance(angle, (int, float)) or not math.isfinite(angle):
            raise MalformedInput(f"Segment angle must be a finite number, got {angle!r}")
        built.append(Segment(_unit_axis(axis, float(angle)), float(angle)))
    if durations is not None:
        durations = _check_durations(durations, len(built))
    return RotationPath(tuple(built), durations)


def constant_path():
    return RotationPath()


def segment_matrix(axis, angle):
    return Rotation.from_rotvec(np.asarray(axis, dtype=float) * angle).as_matrix()


def _locate(path, t):
    """Return the segment index containing t and the completed fraction of it."""
    bounds = path.boundaries
    k = int(np.searchsorted(bounds, t, side="right")) - 1
    k = min(max(k, 0), len(path.segments) - 1)
    fraction = (t - bounds[k]) / (bounds[k + 1] - bounds[k])
    return k, min(max(fraction, 0.0), 1.0)


def rotation_at(path, t):
    """Return the 3x3 rotation reached at parameter t."""
    if not 0.0 <= t <= 1.0:
        raise OutOfRange(f"Path parameter must lie in [0, 1], got {t}")
    if not path.segments:
        return np.eye(3)
    k, fraction = _locate(path, t)
    seg = path.segments[k]
    return segment_matrix(seg.axis, seg.angle * fraction) @ path.prefix_matrices[k]


def closure_error(path):
    return float(np.max(np.abs(rotation_at(path, 1.0) - np.eye(3))))


def is_closed(path, tol=1e-9):
    return closure_error(path) < tol


def compose_paths(first, second):
    """Run ``first`` then ``second``; explicit durations are halved into [0, 1/2] and [1/2, 1]."""
    segments = first.segments + second.segments
    if first.durations is None and second.durations is None:
        return RotationPath(segments)
    halves = [share / 2 for share in first.shares] + [share / 2 for share in second.shares]
    return RotationPath(segments, tuple(halves))


def reverse_path(path):
    segments = tuple(Segment(s.axis, -s.angle) for s in reversed(path.segments))
    durations = None if path.durations is None else tuple(reversed(path.durations))
    return RotationPath(segments, durations)


def subdivide(path, index):
    """Split segment ``index`` into two halves with the same axis."""
    if not 0 <= index < len(path.segments):
        raise OutOfRange(f"Segment index {index} outside 0..{len(path.segments) - 1}")
    seg = path.segments[index]
    half = Segment(seg.axis, seg.angle / 2)
    segments = path.segments[:index] + (half, half) + path.segments[index + 1 :]
    durations = None
    if path.durations is not None:
        share = path.durations[index] / 2
        durations = path.durations[:index] + (share, share) + path.durations[index + 1 :]
    return RotationPath(segments, durations)


# ---------------------------------------------------------------------------
# quaternions, (w, x, y, z)
# ---------------------------------------------------------------------------

IDENTITY_QUATERNION = np.array([1.0, 0.0, 0.0, 0.0])


def quaternion_multiply(q1, q2):
    """Hamilton product q1 * q2."""
    w1, x1, y1, z1 = q1
    w2, x2, y2, z2 = q2
    return np.array(
        [
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        ]
    )


def quaternion_conjugate(q):
    return np.array([q[0], -q[1], -q[2], -q[3]])


def axis_angle_quaternion(axis, angle):
    half = angle / 2.0
    return np.concatenate([[math.cos(half)], math.sin(half) * np.asarray(axis, dtype=float)])


def quaternion_from_matrix(matrix):
    """Convert an orthonormal matrix to a unit quaternion with w >= 0."""
    m = np.asarray(matrix, dtype=float)
    if m.shape != (3, 3) or not np.all(np.isfinite(m)):
        raise NotNormalizable("Orientation matrix must be 3x3 and finite")
    if np.max(np.abs(m.T @ m - np.eye(3))) > 1e-6 or np.linalg.det(m) < 0:
        raise NotNormalizable("Orientation matrix is not a rotation")
    trace = m[0, 0] + m[1, 1] + m[2, 2]
    if trace > 0:
        s = 2.0 * math.sqrt(trace + 1.0)
        q = [s / 4, (m[2, 1] - m[1, 2]) / s, (m[0, 2] - m[2, 0]) / s, (m[1, 0] - m[0, 1]) / s]
    elif m[0, 0] > m[1, 1] and m[0, 0] > m[2, 2]:
        s = 2.0 * math.sqrt(1.0 + m[0, 0] - m[1, 1] - m[2, 2])
        q = [(m[2, 1] - m[1, 2]) / s, s / 4, (m[0, 1] + m[1, 0]) / s, (m[0, 2] + m[2, 0]) / s]
    elif m[1, 1] > m[2, 2]:
        s = 2.0 * math.sqrt(1.0 + m[1, 1] - m[0, 0] - m[2, 2])
        q = [(m[0, 2] - m[2, 0]) / s, (m[0, 1] + m[1, 0]) / s, s / 4, (m[1, 2] + m[2, 1]) / s]
    else:
        s = 2.0 * math.sqrt(1.0 + m[2, 2] - m[0, 0] - m[1, 1])
        q = [(m[1, 0] - m[0, 1]) / s, (m[0, 2] + m[2, 0]) / s, (m[1, 2] + m[2, 1]) / s, s / 4]
    q = np.array(q)
    q /= np.linalg.norm(q)
    return q if q[0] >= 0 else -q


def _normalized_quaternion(q):
    q = np.asarray(q, dtype=float)
    if q.shape != (4,) or not np.all(np.isfinite(q)):
        raise NotNormalizable(f"Quaternion must be four finite numbers, got {q!r}")
    norm = np.linalg.norm(q)
    if norm < 1e-9:
        raise NotNormalizable("Quaternion has zero norm")
    return q / norm


def lift_quaternion(path):
    """Product of the half-angle quaternions, later segments on the left."""
    q = IDENTITY_QUATERNION.copy()
    for seg in path.segments:
        q = quaternion_multiply(axis_angle_quaternion(seg.axis, seg.angle), q)
    return q


def lift_class(path, closure_tolerance=1e-9, pole_tolerance=1e-6):
    """Classify a closed path by the endpoint of its lift to the unit quaternions."""
    if not is_closed(path, closure_tolerance):
        raise NotClosed(f"Path ends {closure_error(path):.3g} away from the identity")
    q = lift_quaternion(path)
    if np.max(np.abs(q - IDENTITY_QUATERNION)) < pole_tolerance:
        return HomotopyClass.TRIVIAL
    if np.max(np.abs(q + IDENTITY_QUATERNION)) < pole_tolerance:
        return HomotopyClass.NONTRIVIAL
    raise NumericalAmbiguity(f"Lifted endpoint {q.tolist()} is near neither +1 nor -1")


def _sample_quaternion(sample):
    arr = np.asarray(sample, dtype=float)
    if arr.shape == (3, 3):
        return quaternion_from_matrix(arr)
    return _normalized_quaternion(arr)


def ingest_samples(samples):
    """Turn orientation samples into a path relative to the first sample.

    Samples are unit quaternions (w, x, y, z) or 3x3 rotation matrices taken at
    equal time steps. Each step becomes one segment; the quaternion sign is
    continued from step to step.
    """
    if len(samples) < 2:
        raise MalformedInput(f"Need at least 2 orientation samples, got {len(samples)}")
    quats = [_sample_quaternion(s) for s in samples]
    start_inverse = quaternion_conjugate(quats[0])
    previous = IDENTITY_QUATERNION
    segments = []
    for k, q in enumerate(quats[1:], 1):
        current = quaternion_multiply(q, start_inverse)
        if np.dot(current, previous) < 0:
            current = -current
        delta = quaternion_multiply(current, quaternion_conjugate(previous))
        sin_half = float(np.linalg.norm(delta[1:]))
        angle = 2.0 * math.atan2(sin_half, max(float(delta[0]), 0.0))
        if angle > math.pi / 2:
            raise SparseSampling(f"Samples {k - 1} and {k} are {angle:.3f} rad apart (limit pi/2)")
        axis = tuple(delta[1:] / sin_half) if sin_half > 1e-15 else DEFAULT_AXIS
        segments.append(Segment(axis, angle if sin_half > 1e-15 else 0.0))
        previous = current
    share = 1.0 / len(segments)
    return RotationPath(tuple(segments), tuple([share] * len(segments)))


def path_to_json(path):
    doc = {
        "format": "segments",
        "segments": [{"axis": list(s.axis), "angle": s.angle} for s in path.segments],
    }
    if path.durations is not None:
        doc["durations"] = list(path.durations)
    return doc


def path_from_json(obj):
    """Load a path from the segments or samples JSON form."""
    if not isinstance(obj, dict):
        raise MalformedInput("Path JSON must be an object")
    fmt = obj.get("format")
    if fmt == "segments":
        if not isinstance(obj.get("segments"), list):
            raise MalformedInput("Path JSON with format 'segments' needs a 'segments' list")
        return path_from_segments(obj["segments"], obj.get("durations"))
    if fmt == "samples":
        samples = obj.get("quaternions", obj.get("matrices"))
        if not isinstance(samples, list):
            raise MalformedInput("Path JSON with format 'samples' needs 'quaternions' or 'matrices'")
        return ingest_samples(samples)
    raise MalformedInput(f"Unknown path format {fmt!r} (expected 'segments' or 'samples')")
