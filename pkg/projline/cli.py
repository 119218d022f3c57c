import argparse
import itertools
import json
import logging
import sys

from projline.abstract_line import build_coordinate_model, dumps_line, load_line, verify_axioms
from projline.bundles import affine_cocycle, gf3_all_permutations, gf3_projectivity_count, gf3_unique_structure
from projline.coordinate_line import CoordinateLine, parse_arrow, parse_point
from projline.errors import ProjLineError, UsageError
from projline.fundamental import transport_projectivity, uniqueness_census
from projline.logger import setup_logging
from projline.moebius import cayley_table, enumerate_pgl
from projline.punctured import affine_combine, vector_add, vector_scale
from projline.scalars import FieldContext, Scalar
from projline.utils import load_config, seed_everything


def _common_arguments():
    parent = argparse.ArgumentParser(add_help=False)
    field = parent.add_mutually_exclusive_group()
    field.add_argument(
        "-p",
        "--prime",
        type=int,
        required=False,
        default=None,
        help="Work over GF(p)",
    )
    field.add_argument(
        "--rational",
        action="store_true",
        help="Work over the rationals (formula-based operations only)",
    )
    parent.add_argument(
        "--json",
        action="store_true",
        help="Print machine-readable JSON instead of text",
    )
    parent.add_argument(
        "--seed",
        type=int,
        required=False,
        default=None,
        help="Seed for every sampled choice (defaults to sampling.seed of the config)",
    )
    parent.add_argument(
        "--config",
        type=str,
        required=False,
        default=None,
        help="YAML file overriding the built-in bounds and defaults",
    )
    parent.add_argument(
        "--verbose",
        action="store_true",
        help="Log progress information to stderr",
    )
    parent.add_argument(
        "--log-file",
        type=str,
        required=False,
        default=None,
        help="Also write the log to this file",
    )
    parent.add_argument(
        "--progress",
        action="store_true",
        help="Show progress bars on long exhaustive loops",
    )
    return parent


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    common = _common_arguments()
    parser = _Parser(prog="projline", description="Exact computations on abstract projective lines")
    commands = parser.add_subparsers(dest="command", parser_class=_Parser)
    commands.required = True

    sub = commands.add_parser("build-model", parents=[common], help="Write the coordinate model P(GF(p)^2) as a structure file")
    sub.add_argument("-o", "--output", type=str, required=False, default=None, help="Output path (default: stdout)")

    sub = commands.add_parser("verify", parents=[common], help="Check a structure file against the axioms")
    sub.add_argument("file", nargs="?", default=None, help="Structure file; the coordinate model of -p when omitted")
    sub.add_argument("--early-exit", action="store_true", help="Stop at the first violation")

    sub = commands.add_parser("crossratio", parents=[common], help="Cross ratio (A,B;C,D) of four points")
    sub.add_argument("points", nargs=4, metavar="POINT", help="Points as a1:a2 or x")

    sub = commands.add_parser("compose", parents=[common], help="Composite of two arrows, first f then g")
    sub.add_argument("f", help="Arrow as lambda@A or C|A>B")
    sub.add_argument("g", help="Arrow as lambda@A or C|A>B")

    sub = commands.add_parser("find-projectivity", parents=[common], help="The projectivity carrying one triple to another")
    sub.add_argument("src", help="Source structure file")
    sub.add_argument("dst", help="Target structure file")
    sub.add_argument("--triple", type=str, required=True, help="A,B,C in the source")
    sub.add_argument("--to", type=str, required=True, help="A',B',C' in the target")

    sub = commands.add_parser("census", parents=[common], help="Count functorial extensions of a triple assignment")
    sub.add_argument("--triple", type=str, required=False, default=None, help="A,B,C (sampled when omitted)")
    sub.add_argument("--to", type=str, required=False, default=None, help="A',B',C' (sampled when omitted)")
    sub.add_argument("--samples", type=int, required=False, default=None, help="Number of sampled triple pairs")

    sub = commands.add_parser("pgl", parents=[common], help="Enumerate PGL(2,p)")
    shown = sub.add_mutually_exclusive_group()
    shown.add_argument("--count", action="store_true", help="Print the group order (default)")
    shown.add_argument("--list", action="store_true", help="Print every element as a11,a12;a21,a22")
    shown.add_argument("--cayley", action="store_true", help="Print the Cayley table as element indices")

    sub = commands.add_parser("affine", parents=[common], help="Affine combination on the line punctured at A")
    sub.add_argument("--puncture", type=str, required=True, help="The removed point A")
    sub.add_argument("--combine", type=str, required=True, help="w1:P1,w2:P2,... with weights summing to 1")
    sub.add_argument("--aux", type=str, required=False, default=None, help="Auxiliary B,C for the chart")

    sub = commands.add_parser("vec", parents=[common], help="Vector operations on the line punctured at A with zero B")
    sub.add_argument("--puncture", type=str, required=True, help="The removed point A")
    sub.add_argument("--zero", type=str, required=True, help="The zero vector B")
    operation = sub.add_mutually_exclusive_group(required=True)
    operation.add_argument("--add", nargs=2, metavar=("X", "Y"), help="Sum X + Y")
    operation.add_argument("--scale", nargs=2, metavar=("LAMBDA", "X"), help="Multiple LAMBDA * X")
    sub.add_argument("--aux", type=str, required=False, default=None, help="Auxiliary basis point C")

    sub = commands.add_parser("cocycle", parents=[common], help="Affine-bundle cocycle between two sections")
    sub.add_argument("--base", type=str, required=True, help="The common point A")
    sub.add_argument("--from", dest="source", type=str, required=True, help="B,C")
    sub.add_argument("--to", type=str, required=True, help="B',C'")

    commands.add_parser("gf3-demo", parents=[common], help="The 4-point line over GF(3): uniqueness search and projectivities")
    return parser


def _field(args) -> FieldContext:
    if args.rational:
        return FieldContext.rational()
    if args.prime is None:
        raise UsageError("Choose a field with -p PRIME or --rational.")
    return FieldContext.prime(args.prime)


def _prime(args, default=None) -> int:
    if args.rational:
        raise UsageError(f"'{args.command}' works over prime fields only.")
    if args.prime is None:
        if default is None:
            raise UsageError("Choose a prime with -p PRIME.")
        return default
    return args.prime


def _split(text: str, size: int):
    parts = [part.strip() for part in text.split(",")]
    if len(parts) != size:
        raise UsageError(f"Expected {size} comma-separated entries, got '{text}'.")
    return parts


def _emit(args, text: str, payload):
    if args.json:
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    else:
        print(text)


def cmd_build_model(args, config):
    line = build_coordinate_model(_prime(args), bound=config["bounds"]["model_max_prime"])
    text = dumps_line(line)
    if args.output is None:
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text)
        logging.info(f"Wrote {args.output}")
    return 0


def cmd_verify(args, config):
    if args.file is not None:
        line = load_line(args.file)
    else:
        line = build_coordinate_model(_prime(args), bound=config["bounds"]["model_max_prime"])
    report = verify_axioms(
        line,
        max_violations=config["verify"]["max_violations"],
        witnesses_per_axiom=config["verify"]["witnesses_per_axiom"],
        early_exit=args.early_exit or config["verify"]["early_exit"],
        associativity_bound=config["bounds"]["associativity_max_prime"],
        bound=config["bounds"]["verify_max_prime"],
        progress=args.progress or config["progress"],
    )
    text = "\n".join([report.summary()] + [f"  {v}" for v in report.violations])
    payload = {
        "passed": report.passed,
        "groups": list(report.groups),
        "skipped": list(report.skipped),
        "violations": [
            {"axiom": v.axiom, "law": v.law, "witness": [str(w) for w in v.witness]} for v in report.violations
        ],
    }
    _emit(args, text, payload)
    return 0 if report.passed else 1


def cmd_crossratio(args, config):
    ctx = _field(args)
    A, B, C, D = (parse_point(ctx, text) for text in args.points)
    value = CoordinateLine(ctx).cross_ratio(A, B, C, D)
    _emit(args, str(value), {"cross_ratio": str(value)})
    return 0


def cmd_compose(args, config):
    ctx = _field(args)
    line = CoordinateLine(ctx)

    def read(text):
        return parse_arrow(text, lambda P: parse_point(ctx, P), lambda s: Scalar.from_string(ctx, s))

    composite = line.compose(read(args.f), read(args.g))
    _emit(args, str(composite), {"composite": str(composite)})
    return 0


def cmd_find_projectivity(args, config):
    src, dst = load_line(args.src), load_line(args.dst)
    phi = transport_projectivity(src, dst, _split(args.triple, 3), _split(args.to, 3))
    _emit(args, str(phi), {"map": phi.mapping})
    return 0


def cmd_census(args, config):
    bounds = config["bounds"]
    p = _prime(args, default=bounds["census_default_prime"])
    line = build_coordinate_model(p, bound=bounds["model_max_prime"])
    progress = args.progress or config["progress"]

    if args.triple is not None or args.to is not None:
        if args.triple is None or args.to is None:
            raise UsageError("--triple and --to go together.")
        pairs = [(tuple(_split(args.triple, 3)), tuple(_split(args.to, 3)))]
    else:
        rng = seed_everything(config["sampling"]["seed"] if args.seed is None else args.seed)
        triples = list(itertools.permutations(line.points, 3))
        samples = config["sampling"]["census_samples"] if args.samples is None else args.samples
        picks = rng.integers(len(triples), size=(samples, 2))
        pairs = [(triples[i], triples[j]) for i, j in picks]

    counts = [
        uniqueness_census(line, line, t, t2, bound=bounds["census_max_prime"], progress=progress) for t, t2 in pairs
    ]
    if len(pairs) == 1 and args.triple is not None:
        text = str(counts[0])
    else:
        text = "\n".join(f"{','.join(t)} -> {','.join(t2)}: {n}" for (t, t2), n in zip(pairs, counts))
    payload = {"counts": [{"triple": list(t), "to": list(t2), "count": n} for (t, t2), n in zip(pairs, counts)]}
    _emit(args, text, payload)
    return 0


def cmd_pgl(args, config):
    p = _prime(args)
    bounds = config["bounds"]
    if args.cayley:
        table = cayley_table(p, bound=bounds["cayley_max_prime"])
        _emit(args, "\n".join(" ".join(str(int(x)) for x in row) for row in table), {"cayley": table.tolist()})
        return 0
    elements = enumerate_pgl(p, bound=bounds["pgl_max_prime"])
    if args.list:
        _emit(args, "\n".join(str(g) for g in elements), {"elements": [str(g) for g in elements]})
    else:
        _emit(args, str(len(elements)), {"count": len(elements)})
    return 0


def cmd_affine(args, config):
    ctx = _field(args)
    line = CoordinateLine(ctx)
    terms = []
    for term in args.combine.split(","):
        if ":" not in term:
            raise UsageError(f"Cannot read a weighted point from '{term}'; expected w:P.")
        weight, point = term.split(":", 1)
        terms.append((Scalar.from_string(ctx, weight), parse_point(ctx, point)))
    auxiliary = None if args.aux is None else tuple(parse_point(ctx, P) for P in _split(args.aux, 2))
    result = affine_combine(line, parse_point(ctx, args.puncture), terms, auxiliary=auxiliary)
    _emit(args, str(result), {"point": str(result)})
    return 0


def cmd_vec(args, config):
    ctx = _field(args)
    line = CoordinateLine(ctx)
    A, B = parse_point(ctx, args.puncture), parse_point(ctx, args.zero)
    auxiliary = None if args.aux is None else parse_point(ctx, args.aux)
    if args.add is not None:
        X, Y = (parse_point(ctx, P) for P in args.add)
        result = vector_add(line, A, B, X, Y, auxiliary=auxiliary)
    else:
        lam, X = args.scale
        result = vector_scale(line, A, B, Scalar.from_string(ctx, lam), parse_point(ctx, X), auxiliary=auxiliary)
    _emit(args, str(result), {"point": str(result)})
    return 0


def cmd_cocycle(args, config):
    ctx = _field(args)
    line = CoordinateLine(ctx)
    A = parse_point(ctx, args.base)
    section = tuple(parse_point(ctx, P) for P in _split(args.source, 2))
    section2 = tuple(parse_point(ctx, P) for P in _split(args.to, 2))
    g = affine_cocycle(line, A, section, section2)
    v0, v1 = g.values()
    _emit(args, f"t={g.t} s={g.s}", {"t": str(g.t), "s": str(g.s), "values": [str(v0), str(v1)]})
    return 0


def cmd_gf3_demo(args, config):
    line, certificate = gf3_unique_structure(progress=args.progress or config["progress"])
    count = gf3_projectivity_count()
    every = gf3_all_permutations()
    order = len(enumerate_pgl(3))
    text = "\n".join(
        [
            f"points: {' '.join(line.points)}",
            f"structure search: {certificate}",
            f"functorial bijections: {count} of 24 (all permutations: {every})",
            f"|PGL(2,3)| = {order}",
        ]
    )
    payload = {
        "points": list(line.points),
        "candidates": certificate.candidates,
        "distinct_tables": certificate.distinct_tables,
        "passing": certificate.passing,
        "unique": certificate.unique,
        "projectivities": count,
        "all_permutations": every,
        "pgl_order": order,
    }
    _emit(args, text, payload)
    return 0 if certificate.unique and every else 1


COMMANDS = {
    "build-model": cmd_build_model,
    "verify": cmd_verify,
    "crossratio": cmd_crossratio,
    "compose": cmd_compose,
    "find-projectivity": cmd_find_projectivity,
    "census": cmd_census,
    "pgl": cmd_pgl,
    "affine": cmd_affine,
    "vec": cmd_vec,
    "cocycle": cmd_cocycle,
    "gf3-demo": cmd_gf3_demo,
}


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        setup_logging(args.log_file, logging.INFO if args.verbose else logging.WARNING)
        config = load_config(args.config)
        if args.seed is not None:
            config["sampling"]["seed"] = args.seed
        return COMMANDS[args.command](args, config)
    except UsageError as e:
        print(f"UsageError: {e}", file=sys.stderr)
        return 2
    except ProjLineError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except (OSError, KeyError) as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())
