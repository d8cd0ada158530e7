import argparse
import json
import os
import sys
from dataclasses import dataclass

from aybe_core import BUILTINS, CLASSICAL_BUILTINS, AybeCore
from closedforms import ORACLE_PAIRS
from errors import AybeError, HypothesisFailed
from exact_kernel import parse_rational
from ybe_checks import LAWS


@dataclass(frozen=True)
class CommandConfig:
    """Parsed flags of one invocation. Rationals stay as "p/q" strings until the core parses them."""
    subcommand: str
    n: int = None
    d: int = None
    v: str = None
    y1: str = None
    y2: str = None
    seed: int = 0
    samples: int = 10
    format: str = "json"
    law: str = None
    v0: str = "1"
    builtin: str = None
    which: str = None
    orders: int = None
    printed: bool = False


class Aybe:
    """CLI wrapper for AybeCore."""

    def __init__(self):
        self.core = AybeCore(status_callback=self._print_status)

    def _print_status(self, message):
        print(f"[*] {message}", file=sys.stderr)

    def construct(self, config):
        return self.core.construct(config.n, config.d, config.v, config.y1, config.y2)

    def verify(self, config):
        handle = self.core.handle(config.n, config.d, config.builtin)
        return self.core.verify(handle, config.law, config.seed, config.samples, config.v0)

    def expand(self, config):
        handle = self.core.handle(config.n, config.d, config.builtin)
        return self.core.expand(handle, config.y1, config.y2)

    def oracle(self, config):
        which = "r31_printed" if config.printed and config.which == "r31" else config.which
        return self.core.oracle(which, config.seed, config.samples)

    def symmetries(self, config):
        handle = self.core.handle(config.n, config.d, config.builtin, classical=True)
        return self.core.symmetries(handle, config.seed, config.samples)

    def jmatrix(self, config):
        return self.core.jmatrix(config.n, config.d)


def _default_seed():
    return int(os.environ.get("YBE_SEED", "0"))


def _rational_arg(text):
    """argparse type: accept "p/q" or an integer, reject decimals."""
    try:
        parse_rational(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))
    return text.strip()


def _add_pair_options(parser, required=True):
    parser.add_argument("--n", type=int, required=required, help="Matrix size n")
    parser.add_argument("--d", type=int, required=required, help="Second entry of the coprime pair, 0 < d < n")


def _add_sampling_options(parser):
    """Add shared seed/sample/format options to a parser."""
    parser.add_argument("--seed", type=int, default=_default_seed(),
                        help="Sampler seed [default: $YBE_SEED or 0]")
    parser.add_argument("--samples", type=int, default=10,
                        help="Number of sample points [default: 10]")
    parser.add_argument("--format", choices=["json", "text"], default="json",
                        help="Output format [default: json]")


def _build_config(args):
    """Build the CommandConfig for a subcommand from parsed args."""
    return CommandConfig(
        subcommand=args.command,
        n=getattr(args, "n", None),
        d=getattr(args, "d", None),
        v=getattr(args, "v", None),
        y1=getattr(args, "y1", None),
        y2=getattr(args, "y2", None),
        seed=getattr(args, "seed", 0),
        samples=getattr(args, "samples", 10),
        format=getattr(args, "format", "json"),
        law=getattr(args, "law", None),
        v0=getattr(args, "v0", "1"),
        builtin=getattr(args, "builtin", None),
        which=getattr(args, "which", None),
        orders=getattr(args, "orders", None),
        printed=getattr(args, "printed", False),
    )


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="aybe.py",
        description="Exact construction and verification of rational AYBE solutions r_(n,d)",
        epilog="Examples:\n"
               "  aybe.py construct --n 2 --d 1 --v 1 --y1 0 --y2 1\n"
               "  aybe.py verify --n 3 --d 2 --law aybe --samples 25 --seed 7\n"
               "  aybe.py verify --n 2 --d 1 --law qybe --v0 1 --samples 10 --seed 7\n"
               "  aybe.py verify --builtin yang2 --law conds --v0 1\n"
               "  aybe.py expand --n 3 --d 1 --y1 0 --y2 1 --orders 3\n"
               "  aybe.py oracle --which r31 --samples 10 --seed 3\n"
               "  aybe.py jmatrix --n 5 --d 2\n"
               "  aybe.py symmetries --builtin c21\n",
        formatter_class=argparse.RawDescriptionHelpFormatter
    )
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    construct_parser = subparsers.add_parser("construct", help="Evaluate r_(n,d)(v; y1, y2)")
    _add_pair_options(construct_parser)
    construct_parser.add_argument("--v", type=_rational_arg, required=True, help="Spectral parameter v (p/q)")
    construct_parser.add_argument("--y1", type=_rational_arg, required=True, help="Spectral parameter y1 (p/q)")
    construct_parser.add_argument("--y2", type=_rational_arg, required=True, help="Spectral parameter y2 (p/q)")
    _add_sampling_options(construct_parser)

    verify_parser = subparsers.add_parser("verify", help="Check an identity at seeded sample points")
    _add_pair_options(verify_parser, required=False)
    verify_parser.add_argument("--builtin", choices=BUILTINS, help="Check a closed form instead of r_(n,d)")
    verify_parser.add_argument("--law", choices=LAWS, required=True, help="Identity to check")
    verify_parser.add_argument("--v0", type=_rational_arg, default="1",
                               help="Fixed v for the QYBE descent [default: 1]")
    _add_sampling_options(verify_parser)

    expand_parser = subparsers.add_parser("expand", help="Laurent coefficients in v at fixed (y1, y2)")
    _add_pair_options(expand_parser, required=False)
    expand_parser.add_argument("--builtin", choices=BUILTINS, help="Expand a closed form instead of r_(n,d)")
    expand_parser.add_argument("--y1", type=_rational_arg, required=True, help="Spectral parameter y1 (p/q)")
    expand_parser.add_argument("--y2", type=_rational_arg, required=True, help="Spectral parameter y2 (p/q)")
    expand_parser.add_argument("--orders", type=int, help="Highest order K to report [default: actual degree]")
    _add_sampling_options(expand_parser)

    oracle_parser = subparsers.add_parser("oracle", help="Compare the construction with a closed form")
    oracle_parser.add_argument("--which", choices=sorted(k for k in ORACLE_PAIRS if k != "r31_printed"),
                               required=True, help="Closed form to compare against")
    oracle_parser.add_argument("--printed", action="store_true",
                               help="Use the r31 display as printed, without the erratum")
    _add_sampling_options(oracle_parser)

    jmatrix_parser = subparsers.add_parser("jmatrix", help="Print the nilpotent matrix J(n-d, d)")
    _add_pair_options(jmatrix_parser)
    _add_sampling_options(jmatrix_parser)

    symmetries_parser = subparsers.add_parser("symmetries", help="Infinitesimal symmetries of pr2(r0)")
    _add_pair_options(symmetries_parser, required=False)
    symmetries_parser.add_argument("--builtin", choices=BUILTINS + CLASSICAL_BUILTINS,
                                   help="Use a closed form instead of r_(n,d)")
    _add_sampling_options(symmetries_parser)
    return parser


# ============== OUTPUT ==============

def _dump(payload):
    return json.dumps(payload, sort_keys=True, ensure_ascii=False)


def _render_verify(report):
    lines = [f"{report['solution']}  seed={report['seed']}"]
    for rec in report["checks"]:
        point = " ".join(f"{k}={v}" for k, v in rec["point"].items())
        lines.append(f"  {rec['law']:<10} {point:<40} {'ok' if rec['residual_zero'] else 'FAIL'}")
    if "conditions" in report:
        lines.append("  conditions: " + " ".join(f"({k})={'yes' if v else 'no'}"
                                                for k, v in sorted(report["conditions"].items())))
        lines.append(f"  symmetry_dim: {report['symmetry_dim']}")
    return "\n".join(lines)


def _render_expand(laurent, orders):
    top = laurent.max_order if orders is None else orders
    blocks = []
    for k in range(-1, top + 1):
        blocks.append(f"order {k}:\n{laurent.coefficient(k).to_text()}")
    return "\n".join(blocks)


def _render_oracle(report):
    lines = [f"{report['oracle']} vs r({report['n']},{report['d']})  seed={report['seed']}"]
    for erratum in report["errata"]:
        lines.append(f"  erratum {erratum['term']}: {erratum['printed']} -> {erratum['corrected']}")
    for entry in report["points"]:
        point = " ".join(f"{k}={v}" for k, v in entry["point"].items())
        lines.append(f"  {point:<30} {'equal' if entry['equal'] else 'DIFFERENT'}")
    return "\n".join(lines)


def _render_symmetries(report):
    lines = [f"{report['solution']}: symmetry dimension {report['symmetry_dim']}"]
    for a in report["basis"]:
        lines.append("  [" + "; ".join(" ".join(row) for row in a) + "]")
    return "\n".join(lines)


def _render_jmatrix(j):
    return "\n".join(" ".join(str(int(x)) for x in row) for row in j.matrix.rows()) + f"\nsplit={j.split}"


def _report_failure(failing):
    print(f"First failing point: {failing!r}", file=sys.stderr)
    if failing.residual is not None:
        print(f"Residual: {_dump(failing.residual.to_json())}", file=sys.stderr)


# ============== MAIN ==============

def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code
    if not args.command:
        parser.print_help()
        return 2

    config = _build_config(args)
    aybe = Aybe()
    text = config.format == "text"

    try:
        if config.subcommand == "construct":
            r = aybe.construct(config)
            print(r.to_text() if text else _dump(r.to_json()))

        elif config.subcommand == "verify":
            report, passed, failing = aybe.verify(config)
            print(_render_verify(report) if text else _dump(report))
            if not passed:
                if failing is not None:
                    _report_failure(failing)
                return 1

        elif config.subcommand == "expand":
            laurent = aybe.expand(config)
            print(_render_expand(laurent, config.orders) if text else _dump(laurent.to_json(config.orders)))

        elif config.subcommand == "oracle":
            report = aybe.oracle(config)
            print(_render_oracle(report) if text else _dump(report))
            if not report["equal"]:
                return 1

        elif config.subcommand == "jmatrix":
            j = aybe.jmatrix(config)
            print(_render_jmatrix(j) if text else _dump(j.to_json()))

        elif config.subcommand == "symmetries":
            report = aybe.symmetries(config)
            print(_render_symmetries(report) if text else _dump(report))

    except HypothesisFailed as e:
        print(f"Error: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2
    except AybeError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
