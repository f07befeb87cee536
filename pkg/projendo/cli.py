"""Command line interface: one subcommand per operation, JSON documents in and out.

Results go to stdout (or ``--output``) as canonical JSON; logs go to stderr. Precondition violations exit with
status 2 and internal invariant violations with status 1, printing ``{"error": code, "detail": message}``.
"""
import argparse
import json
import logging
import os
import sys
from typing import Any
from typing import Callable
from typing import Dict
from typing import List
from typing import NoReturn
from typing import Optional
from typing import Sequence

from projendo.__about__ import __version__
from projendo.acceptance import run_acceptance
from projendo.chow import SYMBOLIC_DEGREE
from projendo.chow import ChowRing
from projendo.chow import TwistSpec
from projendo.chow import c2_twist_expand
from projendo.chow import pullback_twist_constraint
from projendo.chow import ramification_class
from projendo.chow import run_chow_checks
from projendo.chow import solve_twist_degree
from projendo.compute_options import ComputeOptions
from projendo.constants import DEFAULT_SEED
from projendo.constants import LOG_LEVEL_ENV_VAR
from projendo.exceptions import ERRORS_BY_CODE
from projendo.exceptions import InvalidParameterError
from projendo.exceptions import MALFORMED
from projendo.exceptions import ProjendoError
from projendo.exceptions import SchemaError
from projendo.fields import rational_to_json
from projendo.git_diagnostics import fixed_maps
from projendo.git_diagnostics import one_param_limit
from projendo.git_diagnostics import pair_fixed_maps
from projendo.git_diagnostics import pair_torus_weight_analysis
from projendo.hom_counting import brute_force_homs
from projendo.hom_counting import builtin_group_data
from projendo.hom_counting import builtin_perm_group
from projendo.hom_counting import count_homs
from projendo.hom_counting import formula_terms
from projendo.invariants import FiniteMatrixGroup
from projendo.invariants import cube_rotation_group
from projendo.invariants import equivariant_construction
from projendo.invariants import invariant_basis
from projendo.invariants import signed_swap_group
from projendo.invariants import smooth_invariant_search
from projendo.linear_algebra import FieldMatrix
from projendo.projective_maps import ProjectiveMap
from projendo.projective_maps import branch_form
from projendo.projective_maps import classify_orbit
from projendo.projective_maps import components_from_json
from projendo.projective_maps import ramification_form
from projendo.projective_maps import squarefree_factorization
from projendo.resultants import certify_components

logger = logging.getLogger(__name__)

BUILTIN_GROUPS: Dict[str, Callable[[], FiniteMatrixGroup]] = {
    "signed-swap": signed_swap_group,
    "cube-rotation": cube_rotation_group,
}


class _Parser(argparse.ArgumentParser):
    """An argument parser whose usage errors become :class:`InvalidParameterError`."""

    def error(self, message: str) -> NoReturn:
        raise InvalidParameterError(message)


def _load_json(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except OSError as e:
        message = f"Cannot read {path}: {e.strerror}"
        raise InvalidParameterError(message) from e
    except json.JSONDecodeError as e:
        raise SchemaError(MALFORMED(path, str(e))) from e


def _load_group(args: argparse.Namespace, options: ComputeOptions) -> FiniteMatrixGroup:
    if args.builtin:
        return BUILTIN_GROUPS[args.builtin]()
    if not args.group:
        message = "Pass --group <file> or --builtin <name>"
        raise InvalidParameterError(message)
    return FiniteMatrixGroup.from_json(_load_json(args.group), options)


def _int_list(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        message = f"expected comma separated integers, got {text!r}"
        raise argparse.ArgumentTypeError(message) from None


def _degree(text: str) -> Any:
    if text == SYMBOLIC_DEGREE:
        return text
    try:
        return int(text)
    except ValueError:
        message = f"expected an integer or {SYMBOLIC_DEGREE!r}, got {text!r}"
        raise argparse.ArgumentTypeError(message) from None


def _equivariant(args: argparse.Namespace, options: ComputeOptions) -> Any:
    group = _load_group(args, options)
    return equivariant_construction(group, args.degree, seed=args.seed, budget=args.budget, options=options).to_json()


def _invariants(args: argparse.Namespace, options: ComputeOptions) -> Any:
    group = _load_group(args, options)
    if args.smooth:
        form = smooth_invariant_search(group, args.degree, seed=args.seed, budget=args.budget, options=options)
        return {"degree": args.degree, "smooth_invariant": form.to_json()}
    return invariant_basis(group, args.degree).to_json()


def _classify(args: argparse.Namespace, options: ComputeOptions) -> Any:
    return classify_orbit(ProjectiveMap.from_json(_load_json(args.map)), options).to_json()


def _ramification(args: argparse.Namespace, options: ComputeOptions) -> Any:
    form = ramification_form(ProjectiveMap.from_json(_load_json(args.map)), options)
    result = {"form": form.to_json()}
    if form.degree > 0:
        result["factorization"] = squarefree_factorization(form).to_json()
    return result


def _branch(args: argparse.Namespace, options: ComputeOptions) -> Any:
    return {"form": branch_form(ProjectiveMap.from_json(_load_json(args.map)), options).to_json()}


def _regular(args: argparse.Namespace, options: ComputeOptions) -> Any:
    return certify_components(components_from_json(_load_json(args.map)), options).to_json()


def _fixed_maps(args: argparse.Namespace, options: ComputeOptions) -> Any:
    g = FieldMatrix.from_json(_load_json(args.matrix))
    if args.pair_with:
        h = FieldMatrix.from_json(_load_json(args.pair_with))
        return pair_fixed_maps(g, h, args.degree, options).to_json()
    return fixed_maps(g, args.degree, options).to_json()


def _torus_check(args: argparse.Namespace, options: ComputeOptions) -> Any:
    components = components_from_json(_load_json(args.map))
    target = args.target_weights if args.target_weights is not None else args.weights
    return pair_torus_weight_analysis(args.weights, target, components).to_json()


def _limit(args: argparse.Namespace, options: ComputeOptions) -> Any:
    return one_param_limit(components_from_json(_load_json(args.map)), args.c, args.b, options).to_json()


def _count_homs(args: argparse.Namespace, options: ComputeOptions) -> Any:
    data = builtin_group_data(args.family, args.n)
    count = int(count_homs(data, args.genus).numerator)
    if not args.oracle and not args.verbose:
        return count
    result: Dict[str, Any] = {"group": data.to_json(), "genus": args.genus, "count": count}
    if args.verbose:
        result["terms"] = [[d, rational_to_json(term)] for d, term in formula_terms(data, args.genus)]
    if args.oracle:
        oracle = brute_force_homs(builtin_perm_group(args.family, args.n), args.genus, options)
        result.update(oracle=oracle, agree=count == oracle)
    return result


def _chow(args: argparse.Namespace, options: ComputeOptions) -> Any:
    ring_sign = -1 if args.corrupt_relation else 1
    if args.check:
        results = run_chow_checks(relation_sign=ring_sign)
        passed = all(r.passed for r in results)
        return {"passed": passed, "checks": [r.to_json() for r in results]}, 0 if passed else 1
    ring = ChowRing(symbolic=args.k == SYMBOLIC_DEGREE, relation_sign=ring_sign)
    if args.expand == "c2-twist":
        cls = c2_twist_expand(TwistSpec(args.k), ring)
    elif args.expand == "twist-degree":
        cls = solve_twist_degree(args.k, ring)
    elif args.expand == "ramification":
        cls = ramification_class(args.k, ring)
    else:
        L, relation = pullback_twist_constraint(args.k, ring)
        return {"k": args.k, "L": L.to_json(), "relation": relation.to_json()}
    return {"k": args.k, "expansion": args.expand, "result": cls.to_json()}


def _selftest(args: argparse.Namespace, options: ComputeOptions) -> Any:
    report = run_acceptance(seed=args.seed, options=options, relation_sign=-1 if args.corrupt_relation else 1)
    return report.to_json(), 0 if report.passed else 1


def _add_map(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--map", required=True, help="map JSON file, '-' for stdin")


def _add_group(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--group", help="group JSON file with 'generators'")
    source.add_argument("--builtin", choices=sorted(BUILTIN_GROUPS), help="a built-in group")
    parser.add_argument("--degree", type=int, required=True, help="degree m of the invariant forms")


def _error_codes_epilog() -> str:
    codes = ", ".join(f"{code} ({error.EXIT_STATUS})" for code, error in sorted(ERRORS_BY_CODE.items()))
    return f'On failure {{"error": code, "detail": message}} is printed. Codes (exit status): {codes}.'


def _common_flags(on_subcommand: bool) -> argparse.ArgumentParser:
    """Return a parent parser with the flags accepted both before and after the subcommand.

    On a subcommand the flags default to ``SUPPRESS`` so that an absent flag keeps the value given before it.
    """

    def default(value: Any) -> Any:
        return argparse.SUPPRESS if on_subcommand else value

    common = _Parser(add_help=False)
    common.add_argument(
        "--seed", type=int, default=default(DEFAULT_SEED), help="seed of randomized searches (default 0)"
    )
    common.add_argument("--output", default=default(None), help="write the result to this file instead of stdout")
    common.add_argument("--verbose", action="store_true", default=default(False), help="log at DEBUG level on stderr")
    common.add_argument("--cap", type=int, default=default(None), help="override the group enumeration cap")
    common.add_argument("--budget", type=int, default=default(None), help="override the smooth invariant search budget")
    return common


def build_parser() -> argparse.ArgumentParser:
    """Return the parser of the ``projendo`` command."""
    parser = _Parser(
        prog="projendo",
        description="Exact computations with endomorphisms of projective spaces.",
        epilog=_error_codes_epilog(),
        parents=[_common_flags(on_subcommand=False)],
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = _common_flags(on_subcommand=True)
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_command(name: str, text: str) -> argparse.ArgumentParser:
        return commands.add_parser(name, help=text, parents=[common])

    equivariant = add_command("equivariant", "build a group-equivariant endomorphism")
    _add_group(equivariant)
    equivariant.set_defaults(handler=_equivariant)

    invariants = add_command("invariants", "invariant forms of a finite group")
    _add_group(invariants)
    invariants.add_argument("--smooth", action="store_true", help="search a smooth invariant instead of a basis")
    invariants.set_defaults(handler=_invariants)

    for name, handler, text in (
        ("classify", _classify, "orbit type of a P^1 map"),
        ("ramification", _ramification, "ramification form of a P^1 map"),
        ("branch", _branch, "branch form of a P^1 map"),
        ("regular", _regular, "decide whether a tuple of forms has a common zero"),
    ):
        sub = add_command(name, text)
        _add_map(sub)
        sub.set_defaults(handler=handler)

    fixed = add_command("fixed-maps", "maps fixed by a matrix, eigenspace by eigenspace")
    fixed.add_argument("--matrix", required=True, help="matrix JSON file")
    fixed.add_argument("--degree", type=int, required=True)
    fixed.add_argument("--pair-with", help="target matrix JSON file for the two-sided action")
    fixed.set_defaults(handler=_fixed_maps)

    torus = add_command("torus-check", "weights of a map under a diagonal subgroup")
    _add_map(torus)
    torus.add_argument("--weights", type=_int_list, required=True, help="source exponents, e.g. 0,1")
    torus.add_argument("--target-weights", type=_int_list, help="target exponents; defaults to --weights")
    torus.set_defaults(handler=_torus_check)

    limit = add_command("limit", "one-parameter limit of a P^1 map")
    _add_map(limit)
    limit.add_argument("-c", type=int, required=True, help="source exponent c")
    limit.add_argument("-b", type=int, required=True, help="target exponent b")
    limit.set_defaults(handler=_limit)

    homs = add_command("count-homs", "count homomorphisms from a surface group")
    homs.add_argument("--family", required=True, help="cyclic, dihedral, A4, S4, A5, S3, C<n> or D<n>")
    homs.add_argument("-n", type=int, help="parameter of the cyclic and dihedral families")
    homs.add_argument("--genus", type=int, required=True)
    homs.add_argument("--oracle", action="store_true", help="also count by exhaustive enumeration")
    homs.set_defaults(handler=_count_homs)

    chow = add_command("chow", "Chern class identities of projectivized rank-2 bundles")
    action = chow.add_mutually_exclusive_group(required=True)
    action.add_argument("--check", choices=["all"], help="run every identity")
    action.add_argument("--expand", choices=["c2-twist", "twist-degree", "ramification", "pullback"])
    chow.add_argument("-k", type=_degree, default=1, help="fiber degree, an integer or 'k'")
    chow.add_argument("--corrupt-relation", action="store_true", help="flip the sign of the rank-2 relation")
    chow.set_defaults(handler=_chow)

    selftest = add_command("selftest", "run the acceptance suite")
    selftest.add_argument("--corrupt-relation", action="store_true", help="flip the sign of the rank-2 relation")
    selftest.set_defaults(handler=_selftest)
    return parser


def configure_logging(verbose: bool) -> None:
    """Log to stderr at DEBUG when verbose, otherwise at the level named by ``PROJENDO_LOG_LEVEL`` or WARNING."""
    level = logging.DEBUG if verbose else os.environ.get(LOG_LEVEL_ENV_VAR, "WARNING").upper()
    if not isinstance(logging.getLevelName(level), int):
        level = logging.WARNING
    logging.basicConfig(stream=sys.stderr, level=level, format="%(name)s:%(levelname)s:%(message)s", force=True)


def _options(args: argparse.Namespace) -> ComputeOptions:
    overrides = {"enumeration_cap": args.cap, "search_budget": args.budget}
    return ComputeOptions(**{name: value for name, value in overrides.items() if value is not None})


def _emit(document: Any, output: Optional[str]) -> None:
    text = json.dumps(document, sort_keys=True, indent=2) + "\n"
    if output:
        with open(output, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse the arguments, run the subcommand and write its result.

    Args:
        argv (Optional[Sequence[str]]): The arguments without the program name; ``sys.argv[1:]`` by default.

    Returns:
        int: The exit status.

    """
    try:
        args = build_parser().parse_args(argv)
        configure_logging(args.verbose)
        result = args.handler(args, _options(args))
        status = 0
        if isinstance(result, tuple):
            result, status = result
        _emit(result, args.output)
        return status
    except ProjendoError as e:
        logger.debug("%s failed", type(e).__name__, exc_info=True)
        _emit({"error": e.ERROR_CODE, "detail": str(e)}, None)
        return e.EXIT_STATUS


def main() -> None:
    """Entry point of the ``projendo`` console script."""
    sys.exit(run())
