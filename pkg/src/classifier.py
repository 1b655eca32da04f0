"""Two independent classifications of closed rotation paths, and test-path generation."""

import functools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from src.braid_core import exponent_sum
from src.braid_extract import extract_braid
from src.errors import Disagreement, MalformedInput
from src.rotation_path import RotationPath, Segment, lift_class
from src.sphere_quotient import sphere_class, z2_class

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ClassifierSettings:
    """Numerical settings shared by both routes."""

    theta_max: float = 0.05
    closure_tolerance: float = 1e-9
    lift_tolerance: float = 1e-6
    pole_candidates: int = 64
    min_pole_clearance: float = 1e-4
    projection_retries: int = 8
    seed: int = 0

    @classmethod
    def from_config(cls, config):
        return cls(
            theta_max=config["theta_max"],
            closure_tolerance=config["closure_tolerance"],
            lift_tolerance=config["lift_tolerance"],
            pole_candidates=config["pole_candidates"],
            min_pole_clearance=config["min_pole_clearance"],
            projection_retries=config["projection_retries"],
            seed=config["seed"],
        )

    def extraction_options(self):
        return {
            "max_step": self.theta_max,
            "pole_candidates": self.pole_candidates,
            "min_clearance": self.min_pole_clearance,
            "retries": self.projection_retries,
            "seed": self.seed,
            "closure_tolerance": self.closure_tolerance,
        }


def _lift(path, settings):
    return lift_class(path, settings.closure_tolerance, settings.lift_tolerance)


def classify_via_braid(path, settings=None):
    """Classify a closed path by the Z_2 class of its braid word modulo R."""
    settings = settings or ClassifierSettings()
    return z2_class(extract_braid(path, **settings.extraction_options()).word)


def build_report(extraction, braid_class, lifted):
    """Assemble the JSON classification report."""
    word = extraction.word
    return {
        "class": braid_class.value,
        "braid_word": list(word.signed),
        "exponent_sum": exponent_sum(word),
        "exponent_sum_mod4": exponent_sum(word) % 4,
        "sphere_class": sphere_class(word).to_json(),
        "lift_class": lifted.value,
        "agreement": braid_class is lifted,
        "pole": [float(c) for c in extraction.pole],
        "samples": extraction.samples,
        "projection_attempts": extraction.attempts,
    }


def classify(path, settings=None):
    """Classify by both routes; raise Disagreement with the full report if they differ."""
    settings = settings or ClassifierSettings()
    lifted = _lift(path, settings)
    extraction = extract_braid(path, **settings.extraction_options())
    report = build_report(extraction, z2_class(extraction.word), lifted)
    if not report["agreement"]:
        raise Disagreement(
            f"Braid route says {report['class']} but the quaternion lift says {report['lift_class']}",
            diagnostics=report,
        )
    return report


def classify_many(paths, settings=None, jobs=1):
    """Classify independent paths, in parallel when jobs > 1; results keep the input order."""
    settings = settings or ClassifierSettings()
    task = functools.partial(classify, settings=settings)
    if jobs <= 1 or len(paths) <= 1:
        return [task(p) for p in paths]
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(task, paths))


def _random_axis(rng):
    axis = rng.normal(size=3)
    while np.linalg.norm(axis) < 1e-6:
        axis = rng.normal(size=3)
    return tuple(float(c) for c in axis / np.linalg.norm(axis))


def full_turns(axis, turns=1):
    """A single segment turning ``turns`` times 2 pi about the axis."""
    vec = np.asarray(axis, dtype=float)
    return RotationPath((Segment(tuple(float(c) for c in vec / np.linalg.norm(vec)), TWO_PI * turns),))


def random_closed_path(seed, k_turns, wiggle=False):
    """Concatenate k full turns about random axes, optionally with out-and-back excursions.

    Each turn goes either way round. With ``wiggle`` an excursion (axis, phi)
    followed by (axis, -phi) is placed before every turn and at the end.
    """
    if k_turns < 0:
        raise MalformedInput(f"Number of full turns must be non-negative, got {k_turns}")
    rng = np.random.default_rng(seed)
    segments = []

    def excursion():
        axis = _random_axis(rng)
        phi = float(rng.uniform(0.3, 2.5))
        segments.extend([Segment(axis, phi), Segment(axis, -phi)])

    for _ in range(k_turns):
        if wiggle:
            excursion()
        direction = 1.0 if rng.random() < 0.5 else -1.0
        segments.append(Segment(_random_axis(rng), direction * TWO_PI))
    if wiggle:
        excursion()
    return RotationPath(tuple(segments))
