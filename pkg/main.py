#!/usr/bin/env python3
"""
rsld-lab - resolution with reduction over lists and priority goals
Entry point for the command line
"""
import argparse
import sys
from pathlib import Path

# Add the project root to the Python path
sys.path.insert(0, str(Path(__file__).parent))

try:
    from src.commands import handlers
    from src.core.errors import InvalidInstance, ParseError, RsldError, RuleError
    from src.engine.loop_check import VARIANTS
    from src.lab.catalogue import CATALOGUE
    from src.utils.config import config
    from src.utils.log import get_logger, setup_logging
except ImportError as e:
    print(f"Error importing required modules: {e}", file=sys.stderr)
    print("Please install the required dependencies:", file=sys.stderr)
    print("pip install -r requirements.txt", file=sys.stderr)
    sys.exit(1)

logger = get_logger('main')

USAGE_ERRORS = (ParseError, RuleError, InvalidInstance)
MODES = ('sld', 'rsld', 'psld', 'prsld')


class UsageParser(argparse.ArgumentParser):
    """argparse with the usage exit code 64"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(handlers.EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _program_arguments(parser):
    parser.add_argument('--program', '-p', help='program file (.lp)')
    parser.add_argument('--example', '-e', choices=sorted(CATALOGUE), help='worked example to load')
    parser.add_argument('--goal', '-g', help='goal, e.g. "q, p(x,x)" or "s[1], p(a)[2]"')
    parser.add_argument('--mode', '-m', choices=MODES, help='derivation mode')
    parser.add_argument('--rule', '-r', help='selection rule or scheduling rule')


def build_parser() -> argparse.ArgumentParser:
    parser = UsageParser(
        prog='rsld',
        description='SLD, RSLD, p-SLD and p-RSLD derivations with reduction, loop checks and property checks',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  rsld run --example odd-even-loop --max-steps 50
  rsld run -p programs/loop.lp -g p --loop-check evrl
  rsld tree -p programs/pred_special.lp -g "q(x,x1) | t(x1,x)" -m psld -r pred-special:s --depth 10
  rsld reduce -g "p(x,y), p(x,a)" --protect x
  rsld check spec-independence --rule center --seed 7

Exit codes: 0 refuted / check passed, 1 failed, 2 bound exceeded or inconclusive,
3 pruned, 4 check failed, 64 usage error
        """
    )
    parser.add_argument('--verbose', '-v', action='store_true', help='debug logging')
    parser.add_argument('--quiet', '-q', action='store_true', help='errors only')
    parser.add_argument('--color', choices=('auto', 'always', 'never'), help='colour output')
    subparsers = parser.add_subparsers(dest='command', metavar='command', parser_class=UsageParser)

    run = subparsers.add_parser('run', help='run one derivation')
    _program_arguments(run)
    run.add_argument('--reduce', action='store_true', help='reduce in sld and psld too')
    run.add_argument('--exhaustive', action='store_true', help='exhaustive instead of greedy reduction')
    run.add_argument('--no-advancement', action='store_true', help='keep priorities of eliminating atoms')
    run.add_argument('--loop-check', choices=VARIANTS + ('off',), help='equality loop check')
    run.add_argument('--max-steps', type=int, help='step bound')
    run.add_argument('--trace', choices=('text', 'json'), help='trace format')
    run.set_defaults(handler=handlers.cmd_run)

    tree = subparsers.add_parser('tree', help='build a bounded derivation tree')
    _program_arguments(tree)
    tree.add_argument('--depth', '-d', type=int, help='depth bound')
    tree.add_argument('--loop-check', choices=VARIANTS + ('off',), default='off', help='prune by loop check')
    tree.add_argument('--no-advancement', action='store_true', help='keep priorities of eliminating atoms')
    tree.add_argument('--budget', type=int, help='node budget')
    tree.add_argument('--dot', metavar='FILE', help='also write the tree as Graphviz DOT')
    tree.set_defaults(handler=handlers.cmd_tree)

    reduce = subparsers.add_parser('reduce', help='reduce one goal')
    reduce.add_argument('--goal', '-g', required=True, help='goal; priorities select priority reduction')
    reduce.add_argument('--protect', help='comma separated protected variables')
    reduce.add_argument('--exhaustive', action='store_true', help='exhaustive instead of greedy reduction')
    reduce.add_argument('--no-advancement', action='store_true', help='keep priorities of eliminating atoms')
    reduce.set_defaults(handler=handlers.cmd_reduce)

    check = subparsers.add_parser('check', help='run a property check')
    check.add_argument('name', choices=sorted(handlers.CHECKS), help='property to check')
    check.add_argument('--rule', '-r', help='scheduling rule')
    check.add_argument('--trials', '-n', type=int, help='number of random trials')
    check.add_argument('--seed', '-s', type=int, help='seed (default RSLD_SEED or configured seed)')
    check.add_argument('--workers', '-w', type=int, help='parallel trial workers')
    check.add_argument('--budget', type=int, help='search node budget')
    check.add_argument('--instance', metavar='FILE', help='JSON instance instead of random trials')
    check.add_argument('--program', '-p', help='program for the instance')
    check.add_argument('--goal', '-g', help='goal for the instance')
    check.add_argument('--json', action='store_true', help='print reports as JSON')
    check.set_defaults(handler=handlers.cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(config.get('log_level', 'WARNING'), args.verbose, args.quiet)
    if args.command is None:
        parser.print_help()
        return handlers.EXIT_USAGE
    try:
        return args.handler(args)
    except USAGE_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return handlers.EXIT_USAGE
    except RsldError as e:
        print(f"error: {e}", file=sys.stderr)
        return handlers.EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
