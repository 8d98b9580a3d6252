import argparse

from core.sbm.params import Mode

TREE_DISTRIBUTIONS = ['plain', 'regular', 'd2', 'd3', 'd4']
TREE_ADVERSARIES = ['none', 'cutting', 'opp-path', 'asym']
MODES = [mode.value for mode in Mode]


def _tree_arguments(parser: argparse.ArgumentParser):
    parser.add_argument('--k', type=float, required=True, help="Mean (or exact, for regular trees) offspring")
    parser.add_argument('--eps', type=float, required=True, help="Edge flip probability")
    parser.add_argument('--depth', type=int, required=True, help="Tree depth R")
    parser.add_argument('--dist', choices=TREE_DISTRIBUTIONS, default='plain', help="Tree law")
    parser.add_argument('--adversary', choices=TREE_ADVERSARIES, default='none')
    parser.add_argument('--asym', type=float, default=0.0, help="Asymmetry for the asym adversary")
    parser.add_argument('--sign', type=int, choices=[1, -1], default=1, help="Thinned spin for the asym adversary")
    parser.add_argument('--mode', choices=MODES, default=Mode.ASSORTATIVE.value)
    parser.add_argument('--trials', type=int, default=100)
    parser.add_argument('--seed', type=int, required=True)
    parser.add_argument('--out', default='-', help="CSV path, stdout when omitted")


def build_parser() -> argparse.ArgumentParser:
    """Top-level parser with one sub-command per tool."""
    parser = argparse.ArgumentParser(prog='sbm', description="Semirandom block model and broadcast tree toolkit")
    parser.add_argument('--config', default='config.yaml', help="Path to the YAML configuration")
    commands = parser.add_subparsers(dest='command', required=True)

    gen = commands.add_parser('gen', help="Sample a two-community block model graph")
    gen.add_argument('--n', type=int, required=True)
    gen.add_argument('--a', type=float, required=True)
    gen.add_argument('--b', type=float, required=True)
    gen.add_argument('--seed', type=int, required=True)
    gen.add_argument('--mode', choices=MODES, default=Mode.ASSORTATIVE.value)
    gen.add_argument('--out', required=True, metavar='PREFIX')

    adversary = commands.add_parser('adversary', help="Mark a graph and run the cutting adversary")
    adversary.add_argument('--in', dest='source', required=True, metavar='PREFIX')
    adversary.add_argument('--seed', type=int, required=True)
    adversary.add_argument('--mode', choices=MODES, default=None, help="Overrides the mode in PREFIX.params")
    adversary.add_argument('--out', required=True, metavar='PREFIX')

    _tree_arguments(commands.add_parser('tree-sim', help="Sample trees and report their shape"))

    recover = commands.add_parser('tree-recover', help="Root recovery success rate")
    _tree_arguments(recover)
    recover.add_argument('--algo', choices=['maj', 'recmaj', 'map'], default='maj')

    sdp = commands.add_parser('sdp', help="Recover communities with the SDP relaxation")
    sdp.add_argument('--in', dest='source', required=True, metavar='PREFIX')
    sdp.add_argument('--lambda', dest='lambda_rule', default='model', help="model, fixed or a number")
    sdp.add_argument('--tol', type=float, default=None)
    sdp.add_argument('--max-iter', type=int, default=None)
    sdp.add_argument('--change-budget', default='none',
                     help="none, delete-cross, independent:P or subset:F")
    sdp.add_argument('--seed', type=int, default=0)
    sdp.add_argument('--out', default='-')

    thresholds = commands.add_parser('thresholds', help="Threshold report for one or more k")
    thresholds.add_argument('--k', type=float, nargs='+', required=True)
    thresholds.add_argument('--eps', type=float, default=None)
    thresholds.add_argument('--model', choices=['regular', 'poisson'], default='regular')
    thresholds.add_argument('--out', default='-')

    experiment = commands.add_parser('experiment', help="Run a declarative experiment file")
    experiment.add_argument('--spec', required=True, metavar='FILE')
    experiment.add_argument('--out', default=None, metavar='DIR')

    commands.add_parser('serve', help="Start the HTTP service")
    return parser
