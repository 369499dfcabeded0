import sys
import argparse
import logging

from .cli import commands
from .api.common import ConfigError, NumericalError
from .version import __version__

def _add_common(parser, help_msg):
    parser._optionals.title = "Arguments"

    parser.add_argument(
        "-c",
        "--config",
        metavar="PATH",
        help="Path to a JSON configuration file (flat object)."
    )

    parser.add_argument(
        "--phi",
        metavar="FLOAT",
        type=float,
        help="Phase per site in units of pi (default: 0.3)."
    )

    parser.add_argument(
        "--xi",
        metavar="FLOAT",
        type=float,
        help="Chirality gamma_l / gamma_r in [0, 1] (default: 0.4)."
    )

    parser.add_argument(
        "--gamma-1d",
        metavar="FLOAT",
        type=float,
        help="Mean decay rate, the energy unit (default: 1)."
    )

    parser.add_argument(
        "--kmin",
        metavar="FLOAT",
        type=float,
        help="Lower end of the K grid in units of pi (default: 0.005)."
    )

    parser.add_argument(
        "--kmax",
        metavar="FLOAT",
        type=float,
        help="Upper end of the K grid in units of pi (default: 1.995)."
    )

    parser.add_argument(
        "--kn",
        metavar="INT",
        type=int,
        help="Number of K grid points (default: 400)."
    )

    parser.add_argument(
        "--window",
        metavar="FLOAT",
        type=float,
        help=("Half-width of the excluded window around singular K, in "
              "units of pi (default: 0.002).")
    )

    parser.add_argument(
        "--jobs",
        metavar="INT",
        type=int,
        help=("Number of parallel workers; falls back to WQED_JOBS "
              "(default: 1).")
    )

    parser.add_argument(
        "--format",
        choices=["csv", "json"],
        help="Output format (default: csv)."
    )

    parser.add_argument(
        "--out-dir",
        metavar="PATH",
        help="Path to the output directory (default: '.')."
    )

    parser.add_argument(
        "--oracle-n",
        metavar="INT",
        type=int,
        help="Truncation size of the dense oracle (default: 400)."
    )

    parser.add_argument(
        "--emit-antibound",
        action="store_true",
        default=None,
        help="Include antibound states in the spectrum table."
    )

    parser.add_argument(
        "--strict",
        action="store_true",
        default=None,
        help="Fail instead of dropping states that fail the residual gate."
    )

    parser.add_argument(
        "--verbose",
        action="store_true",
        help="Log progress to stderr."
    )

    parser.add_argument(
        "-h",
        "--help",
        action="help",
        default=argparse.SUPPRESS,
        help=help_msg
    )

def main(argv=None):
    parser = argparse.ArgumentParser(add_help=False)

    help_msg = "Show this help message and exit."

    parser.add_argument(
        "-v",
        "--version",
        action="version",
        version=f"%(prog)s {__version__}",
        help="Show the version and exit."
    )

    parser.add_argument(
        "-h",
        "--help",
        action="help",
        default=argparse.SUPPRESS,
        help=help_msg
    )

    subparsers = parser.add_subparsers(
        dest="command",
        metavar="COMMAND",
        help="Name of the command."
    )

    subparsers.required = True

    sweep_parser = subparsers.add_parser(
        "sweep",
        add_help=False,
        help=("Sweep K and write the two-photon spectrum "
              "('spectrum.csv') and the continuum ('continuum.csv')."),
        description=("Sweep the center-of-mass momentum K, solve for "
                     "every bound, antibound and resonance state, link "
                     "them into branches and write 'spectrum.csv' and "
                     "'continuum.csv'.")
    )

    _add_common(sweep_parser, help_msg)

    ep_parser = subparsers.add_parser(
        "ep",
        add_help=False,
        help=("Locate the exceptional point for each phase and write "
              "'ep_curve.csv'."),
        description=("For each phase, find the ratio gamma_l / gamma_r "
                     "at which the two resonance branches exchange "
                     "connectivity, and the K where they meet.")
    )

    _add_common(ep_parser, help_msg)

    ep_parser.add_argument(
        "--phis",
        metavar="FLOAT",
        type=float,
        nargs="+",
        help="Phases in units of pi (default: 0.15 to 0.4)."
    )

    ep_parser.add_argument(
        "--ratio-lo",
        metavar="FLOAT",
        type=float,
        help="Lower end of the ratio bracket (default: 0.02)."
    )

    ep_parser.add_argument(
        "--ratio-hi",
        metavar="FLOAT",
        type=float,
        help="Upper end of the ratio bracket (default: 0.9)."
    )

    verify_parser = subparsers.add_parser(
        "verify",
        add_help=False,
        help="Run the oracle suite and print a pass/fail table.",
        description=("Cross-check the solver against dense "
                     "diagonalization, the banded inverse, the "
                     "single-excitation dispersion and the closed-form "
                     "edge shift. Exit code 1 names the failing checks.")
    )

    _add_common(verify_parser, help_msg)

    verify_parser.add_argument(
        "--corrupt-dt1",
        action="store_true",
        help="Perturb the dt1 coupling in the residual check (debug)."
    )

    asymptotes_parser = subparsers.add_parser(
        "asymptotes",
        add_help=False,
        help="Write the closed-form asymptotes ('asymptotes.csv').",
        description=("Evaluate the K -> 0 resonance pair and the "
                     "branches near the coupling divergences on the "
                     "sweep grid.")
    )

    _add_common(asymptotes_parser, help_msg)

    chiral_parser = subparsers.add_parser(
        "chiral",
        add_help=False,
        help=("Write the closed-form branch of the fully chiral chain "
              "('spectrum.csv')."),
        description=("Write the single bound-state branch of the chain "
                     "with gamma_l = 0; --xi is ignored.")
    )

    _add_common(chiral_parser, help_msg)

    args = parser.parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s"
    )
    delattr(args, "verbose")
    command = args.command
    delattr(args, "command")
    try:
        code = commands[command](**vars(args))
    except ConfigError as e:
        print(f"{parser.prog}: error: {e}", file=sys.stderr)
        code = 2
    except NumericalError as e:
        print(f"{parser.prog}: numerical failure: {e}", file=sys.stderr)
        code = 3
    sys.exit(code)

if __name__ == "__main__":
    main()
