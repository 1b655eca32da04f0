"""CLI entrypoint for classifying rotation paths through spherical braids."""

import argparse
import json
import os
import sys

from src.braid_core import format_word, parse_word, word_to_json
from src.braid_extract import extract_braid, planar_to_json, project
from src.classifier import ClassifierSettings, classify_many, full_turns, random_closed_path
from src.config import load_config, merge_cli_overrides, validate_config, validate_document
from src.diagram import render_ascii, render_svg
from src.errors import (
    EXIT_DISAGREEMENT,
    EXIT_INCONCLUSIVE,
    EXIT_INPUT_ERROR,
    ClassifierError,
    Disagreement,
    MalformedInput,
)
from src.rotation_path import path_from_json, path_to_json
from src.sphere_quotient import (
    Certificate,
    SearchBudget,
    canonical_rep,
    certificate_from_json,
    certificate_to_json,
    certify_equal_mod_R,
    replay,
    sphere_class,
    verify_flip_formulas,
    verify_full_twist_factorisation,
    verify_lemma1,
    verify_prop1,
    verify_prop1p,
    verify_single_generator,
    z2_class,
)
from src.spherical_braid import trace


def _load_settings(args):
    """Read the YAML config (defaults when the file is absent), apply CLI overrides, validate."""
    config = load_config(args.config) if os.path.exists(args.config) else {}
    cli_overrides = {
        "seed": getattr(args, "seed", None),
        "theta_max": getattr(args, "theta_max", None),
        "budget": getattr(args, "budget", None),
        "jobs": getattr(args, "jobs", None),
    }
    config = merge_cli_overrides(config, cli_overrides)
    return validate_config(config)


def _budget(config):
    search = config["search"]
    return SearchBudget(search["max_states"], search["length_slack"], search["quick_depth"])


def _read_json(path, schema):
    try:
        with open(path, "r", encoding="utf-8") as f:
            document = json.load(f)
    except OSError as e:
        raise MalformedInput(f"Cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise MalformedInput(f"{path} is not valid JSON: {e}") from e
    return validate_document(document, schema)


def _write_output(text, output):
    if output:
        with open(output, "w", encoding="utf-8") as f:
            f.write(text)
        print(f"  Written to {output}", file=sys.stderr)
    else:
        sys.stdout.write(text)


def classify_command(args):
    """Classify one or more path files by both routes."""
    config = _load_settings(args)
    settings = ClassifierSettings.from_config(config)

    print(f"Phase 1: Loading {len(args.input)} path file(s)...", file=sys.stderr)
    paths = []
    for name in args.input:
        path = path_from_json(_read_json(name, "path"))
        print(f"  {name}: {len(path)} segment(s)", file=sys.stderr)
        paths.append(path)

    print("Phase 2: Classifying via spherical braid and quaternion lift...", file=sys.stderr)
    reports = classify_many(paths, settings, config["jobs"])
    for name, report in zip(args.input, reports):
        report["input"] = name
        word = " ".join(str(v) for v in report["braid_word"]) or "(empty)"
        print(f"  {name}: {report['class']} (word: {word}, lift: {report['lift_class']})", file=sys.stderr)

    output = reports[0] if len(reports) == 1 else reports
    print(json.dumps(output, indent=2))
    print("\nClassification complete!", file=sys.stderr)


def extract_command(args):
    """Print the braid word of a closed path."""
    config = _load_settings(args)
    settings = ClassifierSettings.from_config(config)
    path = path_from_json(_read_json(args.input, "path"))

    print("Phase 1: Tracing spherical braid and extracting crossings...", file=sys.stderr)
    extraction = extract_braid(path, **settings.extraction_options())
    print(f"  Samples: {extraction.samples}", file=sys.stderr)
    print(f"  Pole: {[round(float(c), 6) for c in extraction.pole]} (clearance {extraction.clearance:.4f} rad)",
          file=sys.stderr)
    print(f"  Word: {format_word(extraction.word) or '(empty)'}", file=sys.stderr)

    if args.debug_planar:
        sb = trace(path, extraction.trace_step, settings.closure_tolerance)
        planar = project(sb, extraction.pole, extraction.frame_angle)
        print(json.dumps(planar_to_json(planar)), file=sys.stderr)

    print(json.dumps(word_to_json(extraction.word)))


def reduce_command(args):
    """Print the B_3/R class of a word, its canonical representative and optionally a certificate."""
    config = _load_settings(args)
    word = parse_word(args.word, 3)
    cls = sphere_class(word)
    canonical = canonical_rep(cls)
    print(f"Phase 1: Class {cls}, canonical representative '{format_word(canonical)}'", file=sys.stderr)

    output = {
        "word": word_to_json(word),
        "sphere_class": cls.to_json(),
        "canonical": word_to_json(canonical),
    }
    if cls.perm.is_identity:
        output["class"] = z2_class(word).value

    if args.certificate:
        print("Phase 2: Searching for a certificate...", file=sys.stderr)
        result = certify_equal_mod_R(word, canonical, _budget(config))
        if not isinstance(result, Certificate):
            print(f"  WARNING: no certificate ({result.reason})", file=sys.stderr)
            print(json.dumps(output, indent=2))
            sys.exit(EXIT_INCONCLUSIVE)
        print(f"  Found {len(result)} move(s), replay verified", file=sys.stderr)
        output["certificate"] = certificate_to_json(result)

    print(json.dumps(output, indent=2))


def _lemma_checks():
    checks = verify_flip_formulas()
    checks.append({"identity": "d = a12 a13 a23", "verified": verify_full_twist_factorisation()})
    checks.append({"identity": "r2, r3 conjugate to r1", "verified": verify_single_generator()})
    return checks


def verify_command(args):
    """Run one verification suite and exit non-zero unless every identity holds."""
    config = _load_settings(args)
    budget = _budget(config)

    print(f"Phase 1: Verifying {args.target}...", file=sys.stderr)
    if args.target == "lemma1":
        report = verify_lemma1(3, general=False)
        report["checks"] = _lemma_checks()
        report["ok"] = report["ok"] and all(c["verified"] for c in report["checks"])
    elif args.target == "lemma1p":
        report = verify_lemma1(args.n, general=True)
    elif args.target == "prop1":
        report = verify_prop1(budget)
    else:
        report = verify_prop1p(args.n, budget)

    for entry in report["identities"]:
        status = "ok" if entry["verified"] else entry.get("status", "FAILED")
        print(f"  [{status}] {entry['identity']}", file=sys.stderr)
    print(f"  {report['passed']}/{report['total']} identities verified", file=sys.stderr)
    print(json.dumps(report, indent=2))

    if report["ok"]:
        return
    if report.get("inconclusive") or any(e.get("status") == "inconclusive" for e in report["identities"]):
        sys.exit(EXIT_INCONCLUSIVE)
    sys.exit(EXIT_DISAGREEMENT)


def verify_cert_command(args):
    """Replay a certificate file move by move."""
    _load_settings(args)
    certificate = certificate_from_json(_read_json(args.input, "certificate"))
    print(f"Phase 1: Replaying {len(certificate)} move(s)...", file=sys.stderr)
    trail = replay(certificate)
    print(f"  Reached '{format_word(trail[-1])}' as claimed", file=sys.stderr)
    print(json.dumps({"valid": True, "moves": len(certificate), "start": word_to_json(certificate.start),
                      "end": word_to_json(certificate.end)}, indent=2))


def _parse_axis(text):
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError as e:
        raise MalformedInput(f"Axis must look like x,y,z, got {text!r}") from e
    if len(values) != 3 or not any(values):
        raise MalformedInput(f"Axis must be three numbers, not all zero, got {text!r}")
    return values


def gen_command(args):
    """Write a closed test path."""
    config = _load_settings(args)
    if args.turns < 0:
        raise MalformedInput(f"--turns must be non-negative, got {args.turns}")
    if args.axis:
        path = full_turns(_parse_axis(args.axis), args.turns)
        print(f"Phase 1: {args.turns} full turn(s) about {args.axis}", file=sys.stderr)
    else:
        path = random_closed_path(config["seed"], args.turns, args.wiggle)
        print(f"Phase 1: {args.turns} random full turn(s), seed {config['seed']}, wiggle {args.wiggle}",
              file=sys.stderr)
    _write_output(json.dumps(path_to_json(path), indent=2) + "\n", args.output)


def diagram_command(args):
    """Render a braid word as text or SVG."""
    _load_settings(args)
    word = parse_word(args.word, args.n)
    text = render_svg(word) if args.format == "svg" else render_ascii(word)
    _write_output(text, args.output)


def build_parser():
    parser = argparse.ArgumentParser(description="Classify closed paths in SO(3) through spherical braids")
    subparsers = parser.add_subparsers(dest="command")

    def add_common(sub):
        sub.add_argument("--config", default="config.yaml", help="Path to config file (default: config.yaml)")
        sub.add_argument("--seed", type=int, help="Seed for every random choice")

    classify_parser = subparsers.add_parser("classify", help="Classify closed rotation paths")
    add_common(classify_parser)
    classify_parser.add_argument("--input", action="append", required=True, help="Path JSON file (repeatable)")
    classify_parser.add_argument("--theta-max", type=float, help="Largest rotation step between samples (rad)")
    classify_parser.add_argument("--jobs", type=int, help="Worker processes for several inputs")

    extract_parser = subparsers.add_parser("extract", help="Print the braid word of a closed path")
    add_common(extract_parser)
    extract_parser.add_argument("--input", required=True, help="Path JSON file")
    extract_parser.add_argument("--theta-max", type=float, help="Largest rotation step between samples (rad)")
    extract_parser.add_argument("--debug-planar", action="store_true", help="Dump the projected strands to stderr")

    reduce_parser = subparsers.add_parser("reduce", help="Reduce a B_3 word modulo the flips")
    add_common(reduce_parser)
    reduce_parser.add_argument("word", help='Signed generator indices, e.g. "1 2 -1"')
    reduce_parser.add_argument("--certificate", action="store_true", help="Also print a certificate")
    reduce_parser.add_argument("--budget", type=int, help="Maximum search states")

    verify_parser = subparsers.add_parser("verify", help="Run a verification suite")
    add_common(verify_parser)
    verify_parser.add_argument("target", choices=["lemma1", "lemma1p", "prop1", "prop1p"])
    verify_parser.add_argument("--n", type=int, default=3, help="Strand count (lemma1p: 3-7, prop1p: 3 or 4)")
    verify_parser.add_argument("--budget", type=int, help="Maximum search states")

    cert_parser = subparsers.add_parser("verify-cert", help="Replay a certificate file")
    add_common(cert_parser)
    cert_parser.add_argument("--input", required=True, help="Certificate JSON file")

    gen_parser = subparsers.add_parser("gen", help="Generate a closed test path")
    add_common(gen_parser)
    gen_parser.add_argument("--turns", type=int, required=True, help="Number of full turns")
    gen_parser.add_argument("--axis", help="Fixed axis x,y,z (default: random axes)")
    gen_parser.add_argument("--wiggle", action="store_true", help="Add out-and-back excursions")
    gen_parser.add_argument("--output", help="Output file (default: stdout)")

    diagram_parser = subparsers.add_parser("diagram", help="Draw a braid word")
    add_common(diagram_parser)
    diagram_parser.add_argument("word", help='Signed generator indices, e.g. "1 2 2 1"')
    diagram_parser.add_argument("--n", type=int, default=3, help="Strand count (default: 3)")
    diagram_parser.add_argument("--format", choices=["ascii", "svg"], default="ascii")
    diagram_parser.add_argument("--output", help="Output file (default: stdout)")

    return parser


COMMANDS = {
    "classify": classify_command,
    "extract": extract_command,
    "reduce": reduce_command,
    "verify": verify_command,
    "verify-cert": verify_cert_command,
    "gen": gen_command,
    "diagram": diagram_command,
}


def main():
    parser = build_parser()
    args = parser.parse_args()

    if not args.command:
        parser.print_help()
        sys.exit(EXIT_INPUT_ERROR)

    try:
        COMMANDS[args.command](args)
    except Disagreement as e:
        print(f"ERROR: {e}", file=sys.stderr)
        print(json.dumps(e.diagnostics, indent=2), file=sys.stderr)
        sys.exit(e.exit_code)
    except ClassifierError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        sys.exit(e.exit_code)


if __name__ == "__main__":
    main()
