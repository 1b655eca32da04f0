"""Tests for rotation paths and the quaternion lift."""

import math

import jsonschema
import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from src.classifier import random_closed_path
from src.config import load_schema
from src.errors import MalformedInput, NotClosed, NotNormalizable, OutOfRange, SparseSampling, ZeroAxis
from src.rotation_path import (
    RotationPath,
    Segment,
    axis_angle_quaternion,
    closure_error,
    compose_paths,
    constant_path,
    default_durations,
    ingest_samples,
    is_closed,
    lift_class,
    lift_quaternion,
    path_from_json,
    path_from_segments,
    path_to_json,
    quaternion_from_matrix,
    quaternion_multiply,
    reverse_path,
    rotation_at,
    subdivide,
)
from src.sphere_quotient import HomotopyClass

TWO_PI = 2.0 * math.pi
Z = (0.0, 0.0, 1.0)
X = (1.0, 0.0, 0.0)
Y = (0.0, 1.0, 0.0)


def z_turn_quaternions(count):
    return [[math.cos(math.pi * k / (count - 1)), 0.0, 0.0, math.sin(math.pi * k / (count - 1))] for k in range(count)]


class TestPathFromSegments:
    """Tests for building paths from axis-angle segments."""

    def test_full_turn(self):
        """Verify that one segment (z, 2 pi) keeps its axis and angle."""
        path = path_from_segments([(Z, TWO_PI)])
        assert path.segments == (Segment(Z, TWO_PI),)

    def test_axis_normalised(self):
        """Verify that axes are scaled to unit length."""
        path = path_from_segments([((0.0, 0.0, 5.0), 1.0)])
        assert np.allclose(path.segments[0].axis, Z)

    def test_empty_sequence(self):
        """Verify that no segments give the constant path."""
        assert path_from_segments([]) == constant_path()

    def test_zero_axis(self):
        """Verify that a zero axis with a nonzero angle raises ZeroAxis."""
        with pytest.raises(ZeroAxis):
            path_from_segments([((0.0, 0.0, 0.0), 1.0)])

    def test_zero_axis_zero_angle(self):
        """Verify that a zero axis is allowed for padding segments with angle 0."""
        path = path_from_segments([((0.0, 0.0, 0.0), 0.0)])
        assert path.segments[0].angle == 0.0

    def test_dict_segments(self):
        """Verify that JSON-style segment dicts are accepted."""
        path = path_from_segments([{"axis": [1, 0, 0], "angle": 1.5}])
        assert path.segments[0] == Segment(X, 1.5)

    def test_bad_angle(self):
        """Verify that a non-numeric angle raises MalformedInput."""
        with pytest.raises(MalformedInput):
            path_from_segments([(Z, "half")])

    def test_durations_must_sum_to_one(self):
        """Verify that explicit durations are checked."""
        with pytest.raises(MalformedInput):
            path_from_segments([(Z, 1.0), (X, 1.0)], durations=[0.5, 0.6])

    def test_default_durations(self):
        """Verify shares proportional to |angle| with a small weight for zero angles."""
        shares = default_durations([1.0, -3.0, 0.0])
        assert shares == pytest.approx(np.array([1.0, 3.0, 1e-3]) / 4.001)


class TestRotationAt:
    """Tests for evaluating a path at a parameter."""

    def test_quarter_turn(self):
        """Verify that (z, 2 pi) at t = 0.25 maps x to y."""
        rot = rotation_at(path_from_segments([(Z, TWO_PI)]), 0.25)
        assert rot @ np.array(X) == pytest.approx(np.array(Y), abs=1e-12)

    def test_start_is_identity(self):
        """Verify that every path starts at the identity."""
        path = random_closed_path(3, 2, wiggle=True)
        assert np.allclose(rotation_at(path, 0.0), np.eye(3), atol=1e-12)

    def test_full_turn_end(self):
        """Verify that (z, 2 pi) at t = 1 is the identity rotation."""
        assert np.allclose(rotation_at(path_from_segments([(Z, TWO_PI)]), 1.0), np.eye(3), atol=1e-12)

    def test_later_segments_on_the_left(self):
        """Verify that the second segment is applied after the first."""
        path = path_from_segments([(Z, math.pi / 2), (X, math.pi / 2)], durations=[0.5, 0.5])
        expected = Rotation.from_rotvec(np.array(X) * math.pi / 2) * Rotation.from_rotvec(np.array(Z) * math.pi / 2)
        assert np.allclose(rotation_at(path, 1.0), expected.as_matrix(), atol=1e-12)

    def test_out_of_range(self):
        """Verify that t outside [0, 1] raises OutOfRange."""
        with pytest.raises(OutOfRange):
            rotation_at(constant_path(), 1.5)

    def test_constant_path(self):
        """Verify that the constant path stays at the identity."""
        assert np.array_equal(rotation_at(constant_path(), 0.7), np.eye(3))


class TestIsClosed:
    """Tests for the closure check."""

    def test_full_turn(self):
        """Verify that (z, 2 pi) is closed."""
        assert is_closed(path_from_segments([(Z, TWO_PI)]))

    def test_half_turn(self):
        """Verify that (z, pi) is not closed."""
        assert not is_closed(path_from_segments([(Z, math.pi)]))
        assert closure_error(path_from_segments([(Z, math.pi)])) == pytest.approx(2.0)

    def test_two_full_turns(self):
        """Verify that (x, 2 pi) then (y, 2 pi) is closed."""
        assert is_closed(path_from_segments([(X, TWO_PI), (Y, TWO_PI)]))


class TestLiftClass:
    """Tests for the quaternion double-cover classification."""

    def test_single_turn(self):
        """Verify that one full turn lifts to -1."""
        path = path_from_segments([(Z, TWO_PI)])
        assert lift_quaternion(path) == pytest.approx(np.array([-1.0, 0.0, 0.0, 0.0]), abs=1e-12)
        assert lift_class(path) is HomotopyClass.NONTRIVIAL

    def test_double_turn(self):
        """Verify that a 4 pi turn is trivial."""
        assert lift_class(path_from_segments([(Z, 2 * TWO_PI)])) is HomotopyClass.TRIVIAL

    def test_two_nontrivial_loops(self):
        """Verify that (z, 2 pi) then (x, 2 pi) is trivial."""
        assert lift_class(path_from_segments([(Z, TWO_PI), (X, TWO_PI)])) is HomotopyClass.TRIVIAL

    def test_constant_path(self):
        """Verify that the constant path is trivial."""
        assert lift_class(constant_path()) is HomotopyClass.TRIVIAL

    def test_not_closed(self):
        """Verify that an open path raises NotClosed."""
        with pytest.raises(NotClosed):
            lift_class(path_from_segments([(Z, math.pi)]))

    def test_half_angle_quaternion(self):
        """Verify the half-angle quaternion of a quarter turn."""
        q = axis_angle_quaternion(Z, math.pi / 2)
        assert q == pytest.approx([math.cos(math.pi / 4), 0.0, 0.0, math.sin(math.pi / 4)])

    def test_hamilton_product(self):
        """Verify i * j = k."""
        assert quaternion_multiply([0, 1, 0, 0], [0, 0, 1, 0]) == pytest.approx([0, 0, 0, 1])


class TestPathAlgebra:
    """Tests for composing, reversing and subdividing paths."""

    def test_compose_keeps_order(self):
        """Verify that composed segments run first path first."""
        first = path_from_segments([(Z, TWO_PI)])
        second = path_from_segments([(X, TWO_PI)])
        assert compose_paths(first, second).segments == first.segments + second.segments

    def test_compose_explicit_durations(self):
        """Verify that explicit durations are halved into the two halves of [0, 1]."""
        first = path_from_segments([(Z, TWO_PI)], durations=[1.0])
        second = path_from_segments([(X, 1.0), (X, -1.0)], durations=[0.25, 0.75])
        assert compose_paths(first, second).durations == (0.5, 0.125, 0.375)

    def test_reverse(self):
        """Verify that reversal flips the order and the angles."""
        path = path_from_segments([(Z, 1.0), (X, 2.0)])
        assert reverse_path(path).segments == (Segment(X, -2.0), Segment(Z, -1.0))

    def test_subdivide(self):
        """Verify that subdivision halves one segment."""
        path = subdivide(path_from_segments([(Z, TWO_PI)]), 0)
        assert path.segments == (Segment(Z, math.pi), Segment(Z, math.pi))

    def test_subdivide_out_of_range(self):
        """Verify that subdividing a missing segment raises OutOfRange."""
        with pytest.raises(OutOfRange):
            subdivide(constant_path(), 0)


class TestQuaternionFromMatrix:
    """Tests for the matrix to quaternion conversion."""

    def test_identity(self):
        """Verify that the identity matrix gives the identity quaternion."""
        assert quaternion_from_matrix(np.eye(3)) == pytest.approx([1.0, 0.0, 0.0, 0.0])

    def test_half_turn(self):
        """Verify the quaternion of a half turn about x."""
        m = np.diag([1.0, -1.0, -1.0])
        assert quaternion_from_matrix(m) == pytest.approx([0.0, 1.0, 0.0, 0.0], abs=1e-12)

    def test_reflection_rejected(self):
        """Verify that a reflection raises NotNormalizable."""
        with pytest.raises(NotNormalizable):
            quaternion_from_matrix(np.diag([1.0, 1.0, -1.0]))

    @pytest.mark.parametrize("seed", range(30))
    def test_matches_scipy(self, seed):
        """Verify agreement with scipy up to the sign of the quaternion."""
        rot = Rotation.from_rotvec(np.random.default_rng(seed).uniform(-3.0, 3.0, size=3))
        x, y, z, w = rot.as_quat()
        expected = np.array([w, x, y, z])
        q = quaternion_from_matrix(rot.as_matrix())
        assert min(np.max(np.abs(q - expected)), np.max(np.abs(q + expected))) < 1e-9


class TestIngestSamples:
    """Tests for turning orientation samples into a path."""

    def test_repeated_identity(self):
        """Verify that repeated identity samples give a trivial constant path."""
        path = ingest_samples([[1.0, 0.0, 0.0, 0.0]] * 5)
        assert all(seg.angle == 0.0 for seg in path.segments)
        assert lift_class(path) is HomotopyClass.TRIVIAL

    def test_uniform_z_turn(self):
        """Verify that 100 samples of a 2 pi z-turn lift to the nontrivial class."""
        path = ingest_samples(z_turn_quaternions(100))
        assert len(path) == 99
        assert sum(seg.angle for seg in path.segments) == pytest.approx(TWO_PI)
        assert lift_class(path) is HomotopyClass.NONTRIVIAL

    def test_matrix_samples(self):
        """Verify that rotation matrices are accepted as samples."""
        matrices = [Rotation.from_rotvec([0.0, 0.0, TWO_PI * k / 99]).as_matrix() for k in range(100)]
        assert lift_class(ingest_samples(matrices)) is HomotopyClass.NONTRIVIAL

    def test_sign_continuation(self):
        """Verify that flipped quaternion signs do not change the path."""
        quats = z_turn_quaternions(100)
        flipped = [[-c for c in q] if k % 3 == 1 else q for k, q in enumerate(quats)]
        assert lift_class(ingest_samples(flipped)) is HomotopyClass.NONTRIVIAL

    def test_relative_to_first_sample(self):
        """Verify that the motion is taken relative to the first sample."""
        offset = Rotation.from_rotvec([0.3, -0.2, 0.9])
        matrices = [(Rotation.from_rotvec([0.0, 0.0, TWO_PI * k / 99]) * offset).as_matrix() for k in range(100)]
        path = ingest_samples(matrices)
        assert np.allclose(rotation_at(path, 0.0), np.eye(3))
        assert lift_class(path) is HomotopyClass.NONTRIVIAL

    def test_sparse_sampling(self):
        """Verify that a half-turn step raises SparseSampling."""
        with pytest.raises(SparseSampling):
            ingest_samples([[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0]])

    def test_too_few_samples(self):
        """Verify that a single sample is rejected."""
        with pytest.raises(MalformedInput):
            ingest_samples([[1.0, 0.0, 0.0, 0.0]])

    def test_zero_quaternion(self):
        """Verify that a zero quaternion raises NotNormalizable."""
        with pytest.raises(NotNormalizable):
            ingest_samples([[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0]])


class TestPathJson:
    """Tests for the path JSON formats."""

    def test_segments_form(self):
        """Verify that the segments form loads and matches the schema."""
        document = {"format": "segments", "segments": [{"axis": [0, 0, 1], "angle": TWO_PI}]}
        jsonschema.validate(instance=document, schema=load_schema("path"))
        assert lift_class(path_from_json(document)) is HomotopyClass.NONTRIVIAL

    def test_samples_form(self):
        """Verify that the samples form loads through ingest_samples."""
        document = {"format": "samples", "quaternions": z_turn_quaternions(50)}
        jsonschema.validate(instance=document, schema=load_schema("path"))
        assert lift_class(path_from_json(document)) is HomotopyClass.NONTRIVIAL

    def test_dump_and_load(self):
        """Verify that a dumped path with durations loads back unchanged."""
        path = path_from_segments([(Z, 1.0), (Z, -1.0)], durations=[0.25, 0.75])
        document = path_to_json(path)
        jsonschema.validate(instance=document, schema=load_schema("path"))
        assert path_from_json(document) == path

    def test_unknown_format(self):
        """Verify that an unknown format raises MalformedInput."""
        with pytest.raises(MalformedInput):
            path_from_json({"format": "spline"})


class TestLiftProperties:
    """Property checks for the quaternion lift."""

    @pytest.mark.parametrize("seed", range(100))
    def test_homomorphism(self, seed):
        """Verify that the class of a composite is the sum of the classes."""
        rng = np.random.default_rng(seed)
        first = random_closed_path(seed, int(rng.integers(0, 4)), wiggle=True)
        second = random_closed_path(10_000 + seed, int(rng.integers(0, 4)), wiggle=True)
        assert lift_class(compose_paths(first, second)) is lift_class(first) + lift_class(second)

    @pytest.mark.parametrize("seed", range(50))
    def test_subdivision_invariant(self, seed):
        """Verify that splitting any segment never changes the class."""
        rng = np.random.default_rng(seed)
        path = random_closed_path(seed, int(rng.integers(1, 4)), wiggle=True)
        index = int(rng.integers(0, len(path)))
        assert lift_class(subdivide(path, index)) is lift_class(path)

    @pytest.mark.parametrize("seed", range(50))
    def test_reversal_invariant(self, seed):
        """Verify that a reversed path has the same class."""
        path = random_closed_path(seed, seed % 4, wiggle=True)
        assert lift_class(reverse_path(path)) is lift_class(path)

    @pytest.mark.parametrize("k", range(7))
    def test_full_turn_count(self, k):
        """Verify that k full turns about random axes have class k mod 2."""
        assert lift_class(random_closed_path(k, k)) is HomotopyClass.from_parity(k)

    def test_explicit_durations_do_not_matter(self):
        """Verify that reparametrising a path keeps its class."""
        path = RotationPath((Segment(Z, TWO_PI), Segment(X, TWO_PI)), (0.9, 0.1))
        assert lift_class(path) is HomotopyClass.TRIVIAL
