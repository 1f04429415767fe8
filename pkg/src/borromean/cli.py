"""Command line interface.

Data goes to stdout or to the files named by --csv/--json. Failures print a
single JSON object on stderr and exit with the code of the error kind:
2 invalid arguments, 3 inadmissible inputs, 4 I/O, 5 checkpoint, 6 oracle
disagreement.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from typing import Callable, Iterable, Sequence

from . import chebotarev, density
from .arith import is_prime, sieve_primes
from .errors import BorromeanError, InadmissiblePairError, InvalidArgumentError
from .redei import admissible_pair, oracle_check, redei_symbol

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INADMISSIBLE = 3
EXIT_IO = 4
EXIT_CHECKPOINT = 5
EXIT_ORACLE = 6

PAIR_FIELDS = ["x", "pi_x", "pi_1mod4", "ordered_linked", "ratio", "abs_dev_from_0.125"]
TRIPLE_FIELDS = [
    "x", "unordered_distinct", "linked", "borromean",
    "ratio_all", "ratio_linked", "abs_dev_from_0.0078125",
]
BOUND_FIELDS = ["x", "label", "main_term", "error_bound", "empirical", "within_bound"]
RHO_FIELDS = ["x", "pi_x", "rho", "ratio", "abs_dev_from_0.0625"]
ESUM_FIELDS = ["x", "pi_x", "pi_1mod4", "E", "abs_E_over_pi_sq"]


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: D102
        self.print_usage(sys.stderr)
        _report("invalid-argument", EXIT_INVALID, message)
        sys.exit(EXIT_INVALID)


def _report(kind: str, code: int, message: str) -> None:
    print(json.dumps({"error": kind, "code": code, "message": message}), file=sys.stderr)


# --- formatting -----------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".10g")
    return str(value)


def _json_value(value):
    if isinstance(value, float):
        return float(format(value, ".10g"))
    return value


def render_csv(fields: Sequence[str], rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([_fmt(row[f]) for f in fields])
    return buf.getvalue()


def render_json(fields: Sequence[str], rows: Iterable[dict]) -> str:
    data = [{f: _json_value(row[f]) for f in fields} for row in rows]
    return json.dumps(data, indent=1) + "\n"


def _emit(args: argparse.Namespace, fields: Sequence[str], rows: list[dict]) -> None:
    wrote = False
    for path, render in ((args.csv, render_csv), (args.json, render_json)):
        if path is None:
            continue
        text = render(fields, rows)
        if path == "-":
            sys.stdout.write(text)
        else:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        wrote = True
    if not wrote:
        sys.stdout.write(render_csv(fields, rows))


def pair_row(c: density.PairCounts) -> dict:
    return {
        "x": c.x, "pi_x": c.pi_x, "pi_1mod4": c.pi_x_1mod4,
        "ordered_linked": c.ordered_linked, "ratio": c.ratio,
        "abs_dev_from_0.125": c.deviation,
    }


def triple_row(c: density.TripleCounts) -> dict:
    return {
        "x": c.x, "unordered_distinct": c.unordered_distinct,
        "linked": c.linked_unordered, "borromean": c.borromean_unordered,
        "ratio_all": c.ratio_all, "ratio_linked": c.ratio_linked,
        "abs_dev_from_0.0078125": c.deviation,
    }


def bound_row(r: chebotarev.BoundReport) -> dict:
    return {
        "x": r.x, "label": r.label, "main_term": r.main_term,
        "error_bound": r.error_bound, "empirical": r.empirical,
        "within_bound": r.within_bound,
    }


# --- argument helpers -----------------------------------------------------


def parse_grid(max_x: int | None, grid: str | None) -> list[int]:
    """``--grid`` is either a step (500 -> 500, 1000, ..., max_x) or a comma list."""
    if grid is None:
        if max_x is None:
            raise InvalidArgumentError("--max-x or --grid is required")
        cutoffs = [max_x]
    elif "," in grid:
        try:
            cutoffs = [int(v) for v in grid.split(",") if v.strip()]
        except ValueError:
            raise InvalidArgumentError(f"bad cutoff list {grid!r}") from None
        if max_x is not None and cutoffs[-1] != max_x:
            cutoffs = [c for c in cutoffs if c < max_x] + [max_x]
    else:
        try:
            step = int(grid)
        except ValueError:
            raise InvalidArgumentError(f"bad grid step {grid!r}") from None
        if max_x is None:
            raise InvalidArgumentError("a grid step needs --max-x")
        if step < 1:
            raise InvalidArgumentError(f"grid step must be positive, got {step}")
        cutoffs = list(range(step, max_x + 1, step))
        if not cutoffs or cutoffs[-1] != max_x:
            cutoffs.append(max_x)
    if any(c < 2 for c in cutoffs):
        raise InvalidArgumentError(f"cutoffs must be >= 2: {cutoffs}")
    if any(b <= a for a, b in zip(cutoffs, cutoffs[1:])):
        raise InvalidArgumentError(f"grid must be strictly increasing: {cutoffs}")
    return cutoffs


def _prime_arg(value: str) -> int:
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{value!r} is not an integer") from None
    if not is_prime(n):
        raise argparse.ArgumentTypeError(f"{n} is not prime")
    return n


def _positive(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return n


# --- commands -------------------------------------------------------------


def cmd_symbol(args: argparse.Namespace) -> int:
    p1, p2, p3 = args.p1, args.p2, args.p3
    if len({p1, p2, p3}) != 3:
        raise InadmissiblePairError(f"primes not distinct: ({p1}, {p2}, {p3})")
    pair = admissible_pair(p1, p2)
    value = redei_symbol(pair, p3)
    used = pair if pair.sol.z % p3 else admissible_pair(p1, p2, avoid=p3)
    print(f"[{p1},{p2},{p3}] = {value:+d}")
    print(f"solution {used.sol}")
    print(f"borromean {'true' if value == -1 else 'false'}")
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    print(admissible_pair(args.p1, args.p2).sol)
    return EXIT_OK


def _sweep_command(mode: str, args: argparse.Namespace) -> int:
    grid = parse_grid(args.max_x, args.grid)
    rows = density.sweep(grid, mode, checkpoint=args.checkpoint, workers=args.threads)
    if mode == "pairs":
        _emit(args, PAIR_FIELDS, [pair_row(r) for r in rows])
    else:
        _emit(args, TRIPLE_FIELDS, [triple_row(r) for r in rows])
    return EXIT_OK


def cmd_pairs(args: argparse.Namespace) -> int:
    return _sweep_command("pairs", args)


def cmd_triples(args: argparse.Namespace) -> int:
    return _sweep_command("triples", args)


def cmd_sweep(args: argparse.Namespace) -> int:
    return _sweep_command(args.mode, args)


def cmd_rho(args: argparse.Namespace) -> int:
    pair = admissible_pair(args.p1, args.p2)
    grid = parse_grid(args.max_x, args.grid)
    pl = sieve_primes(grid[-1])
    rows = []
    for x in grid:
        rho = density.rho_count(pair, x)
        pi_x = pl.pi(x)
        ratio = rho / pi_x if pi_x else 0.0
        rows.append({
            "x": x, "pi_x": pi_x, "rho": rho, "ratio": ratio,
            "abs_dev_from_0.0625": abs(ratio - density.RHO_DENSITY),
        })
    _emit(args, RHO_FIELDS, rows)
    return EXIT_OK


def cmd_bound(args: argparse.Namespace) -> int:
    pair = admissible_pair(args.p1, args.p2)
    grid = parse_grid(args.max_x, args.grid)
    rows = []
    for x in grid:
        for label in chebotarev.LABELS:
            rows.append(bound_row(chebotarev.check_bound(pair, x, label)))
    _emit(args, BOUND_FIELDS, rows)
    for row in rows:
        if not row["within_bound"]:
            logging.warning("bound violated at x=%s for %s", row["x"], row["label"])
    return EXIT_OK


def cmd_esum(args: argparse.Namespace) -> int:
    grid = parse_grid(args.max_x, args.grid)
    pl = sieve_primes(grid[-1])
    ones = pl.one_mod_four()
    rows = []
    for x in grid:
        e = density.character_sum_E(x)
        pi_x = pl.pi(x)
        rows.append({
            "x": x, "pi_x": pi_x, "pi_1mod4": int((ones < x).sum()), "E": e,
            "abs_E_over_pi_sq": abs(e) / pi_x**2 if pi_x else 0.0,
        })
    _emit(args, ESUM_FIELDS, rows)
    return EXIT_OK


def cmd_oracle_check(args: argparse.Namespace) -> int:
    result = oracle_check(args.max)
    print(f"checked={result.checked} degenerate={result.degenerate} "
          f"disagreements={len(result.disagreements)}")
    if result.disagreements:
        for p1, p2, p3 in result.disagreements:
            print(f"disagree {p1} {p2} {p3}")
        _report("oracle-disagreement", EXIT_ORACLE,
                f"{len(result.disagreements)} disagreement(s) below {args.max}")
        return EXIT_ORACLE
    return EXIT_OK


# --- parser ---------------------------------------------------------------


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--csv", metavar="PATH", help="write CSV here ('-' for stdout)")
    p.add_argument("--json", metavar="PATH", help="write JSON here ('-' for stdout)")


def _add_grid(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-x", type=int, help="largest cutoff x (primes are < x)")
    p.add_argument("--grid", help="cutoff step, or comma-separated cutoffs")


def _add_sweep_opts(p: argparse.ArgumentParser) -> None:
    _add_grid(p)
    _add_output(p)
    p.add_argument("--threads", type=_positive, default=1, help="worker processes")
    p.add_argument("--checkpoint", metavar="PATH", help="resumable checkpoint file")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="borromean", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("symbol", help="Redei symbol [p1,p2,p3]")
    for name in ("p1", "p2", "p3"):
        p.add_argument(name, type=_prime_arg)
    p.set_defaults(func=cmd_symbol)

    p = sub.add_parser("solve", help="normalized solution of x^2 - p1 y^2 - p2 z^2 = 0")
    p.add_argument("p1", type=_prime_arg)
    p.add_argument("p2", type=_prime_arg)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("pairs", help="linked pair counts (target 1/8)")
    _add_sweep_opts(p)
    p.set_defaults(func=cmd_pairs)

    p = sub.add_parser("triples", help="Borromean triple counts (target 1/128)")
    _add_sweep_opts(p)
    p.set_defaults(func=cmd_triples)

    p = sub.add_parser("sweep", help="pairs or triples sweep over a grid")
    p.add_argument("--mode", choices=density.MODES, required=True)
    _add_sweep_opts(p)
    p.set_defaults(func=cmd_sweep)

    for name, func, helptext in (
        ("rho", cmd_rho, "per-pair Borromean third primes (target 1/16)"),
        ("bound", cmd_bound, "split counts against the GRH Chebotarev bound"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("p1", type=_prime_arg)
        p.add_argument("p2", type=_prime_arg)
        _add_grid(p)
        _add_output(p)
        p.set_defaults(func=func)

    p = sub.add_parser("esum", help="character sum E(x)")
    _add_grid(p)
    _add_output(p)
    p.set_defaults(func=cmd_esum)

    p = sub.add_parser("oracle-check", help="cross-check the symbol against the quartic oracle")
    p.add_argument("--max", type=int, required=True, help="all primes below this bound")
    p.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    func: Callable[[argparse.Namespace], int] = args.func
    try:
        return func(args)
    except BorromeanError as exc:
        _report(exc.kind, exc.exit_code, str(exc))
        return exc.exit_code
    except OSError as exc:
        _report("io", EXIT_IO, str(exc))
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
