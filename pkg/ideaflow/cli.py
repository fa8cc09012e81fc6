"""
Command-line interface.

Exit codes: 0 success, 2 input, usage or configuration error, 3 when the
word graph holds no correlated pair.
"""

import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from .bench import DEFAULT_LEVELS, UCR_METHODS, synth_bench, ucr_bench, write_synth_bench, write_ucr_bench
from .config import VARIANTS, RunConfig, SynthConfig
from .evaluation import evaluate_run
from .exceptions import EmptyTensorError, FormatError, IdeaFlowError
from .flow import track_idea_flows
from .graph import build_graph, read_graph, write_graph
from .ingest import DEMO_RARE_THRESHOLD, build_group_series, demo_corpus, load_stopwords, write_corpus
from .models import FlowReport
from .render import write_svg
from .series import read_series_csv, write_series_csv
from .synth import generate_graph, generate_ground_truth, read_truth, write_truth
from .tensor import build_tensor
from .ucr import UcrArchiveClient
from .version import __version__

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_EMPTY = 3


def _write_json(path: Optional[str], data: Dict[str, Any]) -> None:
    text = json.dumps(data, indent=2) + '\n'
    if path is None or path == '-':
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding='utf-8')


def _read_report(path: str) -> FlowReport:
    try:
        return FlowReport.from_dict(json.loads(Path(path).read_text(encoding='utf-8')))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise FormatError(f"Cannot read flow report: {e}", source=path)


def _floats(text: str) -> List[float]:
    return [float(v) for v in text.split(',') if v.strip()]


def _names(text: str) -> List[str]:
    return [v.strip() for v in text.split(',') if v.strip()]


def cmd_ingest(args: argparse.Namespace, run: RunConfig) -> int:
    stopwords = load_stopwords(run.stopwords)
    a, b, report = build_group_series(args.corpus, run.ingest(stopwords))
    write_series_csv(args.out, a, b)
    _write_json(args.report or f"{args.out}.report.json", {
        'version': __version__,
        'config': run.to_dict(),
        'ingest': report.to_dict()
    })
    logger.info("Wrote %s", args.out)
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace, run: RunConfig) -> int:
    start = time.perf_counter()
    if args.graph:
        graph = read_graph(args.graph)
    elif args.series:
        a, b = read_series_csv(args.series)
        graph = build_graph(a, b, run.dtw(), run.bcc(), workers=run.workers)
    else:
        raise FormatError("No input given", suggestion="Pass a series CSV or --graph <json>")
    if args.graph_out:
        write_graph(args.graph_out, graph, {'config': run.to_dict()})
    if not graph.edges:
        logger.error("no correlated pairs")
        return EXIT_EMPTY
    if args.tensor_dump:
        Path(args.tensor_dump).write_text(build_tensor(graph, run.variant).dump_text(), encoding='utf-8')

    metadata: Dict[str, Any] = {'version': __version__, 'config': run.to_dict()}
    report = track_idea_flows(graph, run.flow(), metadata)
    if args.record_runtime:
        report.metadata['runtime_seconds'] = time.perf_counter() - start
    _write_json(args.out, report.to_dict())
    return EXIT_OK


def cmd_synth(args: argparse.Namespace, run: RunConfig) -> int:
    cfg = SynthConfig(noise_level=args.noise_level, T=args.T, tau_max=run.tau_max, seed=run.seed)
    truth = generate_ground_truth(cfg)
    graph = generate_graph(truth, cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    truth.report.metadata['config'] = run.to_dict()
    write_graph(out / 'graph.json', graph, {'config': run.to_dict(), 'synth_config': cfg.to_dict()})
    write_truth(out / 'truth.json', truth)
    logger.info("Wrote %s and %s", out / 'graph.json', out / 'truth.json')
    return EXIT_OK


def cmd_synth_bench(args: argparse.Namespace, run: RunConfig) -> int:
    variants = _names(args.variants)
    levels = _floats(args.levels)
    runs = synth_bench(levels, args.repeats, variants, run.seed, run,
                       SynthConfig(T=args.T), workers=run.workers)
    write_synth_bench(args.out, runs, run, {'levels': levels, 'repeats': args.repeats, 'variants': variants})
    return EXIT_OK


def _dataset_paths(args: argparse.Namespace) -> List[Path]:
    root = Path(args.data_dir)
    client = UcrArchiveClient(args.archive_url) if args.fetch else None
    paths = []
    for entry in args.datasets:
        path = Path(entry)
        if not path.exists():
            path = root / entry
        if not path.exists() and client is not None:
            path = client.fetch(entry, root)
        paths.append(path)
    return paths


def cmd_ucr_bench(args: argparse.Namespace, run: RunConfig) -> int:
    table = ucr_bench(_dataset_paths(args), _names(args.methods), args.runs, run.seed, run, args.max_series)
    write_ucr_bench(args.out, table, run)
    return EXIT_OK


def cmd_render(args: argparse.Namespace, run: RunConfig) -> int:
    write_svg(args.out, _read_report(args.report))
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace, run: RunConfig) -> int:
    report = _read_report(args.report)
    truth = read_truth(args.truth)
    metrics = evaluate_run(report, truth)
    _write_json(args.out, {'version': __version__, 'config': run.to_dict(), 'metrics': metrics.to_dict()})
    return EXIT_OK


def cmd_demo_corpus(args: argparse.Namespace, run: RunConfig) -> int:
    write_corpus(args.out, demo_corpus(run.seed))
    logger.info("Wrote %s; its words are too sparse for the default rare-word threshold", args.out)
    print(f"ideaflow ingest {args.out} --out series.csv --rare-threshold {DEMO_RARE_THRESHOLD}")
    return EXIT_OK


def _run_options() -> argparse.ArgumentParser:
    """Flags shared by every subcommand; unset flags keep RunConfig defaults"""
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group('run configuration')
    group.add_argument('--tau-max', type=int, help='Maximum lead-lag offset (default 6)')
    group.add_argument('--variant', choices=VARIANTS, help='Tensor encoding (default x3)')
    group.add_argument('--rank', type=int, help='Word-level PARAFAC rank (default k_a + k_b)')
    group.add_argument('--rank-seg', type=int, help='Segmentation PARAFAC rank (default 4)')
    group.add_argument('--k-a', type=int, help='Ideas in group A (default 2)')
    group.add_argument('--k-b', type=int, help='Ideas in group B (default 2)')
    group.add_argument('--k-t', type=int, help='Time clusters per idea pair (default 4)')
    group.add_argument('--threshold', type=float, help='Segment correlation threshold (default 0.5)')
    group.add_argument('--theta-local', type=float, help='Local cointegration posterior threshold (default 0.7)')
    group.add_argument('--theta-global', type=float, help='Global evidence threshold (default 0)')
    group.add_argument('--rho-stay', type=float, help='Regime self-transition probability (default 0.95)')
    group.add_argument('--seed', type=int, help='Random seed (default 0)')
    group.add_argument('--restarts', type=int, help='k-means restarts (default 10)')
    group.add_argument('--bin-width', dest='bin_width_days', type=float, help='Bin width in days (default 2)')
    group.add_argument('--rare-threshold', type=float, help='Minimum mean daily count per word (default 5)')
    group.add_argument('--stopwords', help='Stopword file (default: bundled English list)')
    group.add_argument('--workers', type=int, help='Worker processes (default 1)')
    group.add_argument('-v', '--verbose', action='store_true', help='Debug logging')
    return parent


def build_parser() -> argparse.ArgumentParser:
    parent = _run_options()
    parser = argparse.ArgumentParser(prog='ideaflow', description='Lead-lag idea flows between two groups')
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('ingest', parents=[parent], help='Corpus JSON lines to word series CSV')
    p.add_argument('corpus')
    p.add_argument('--out', required=True)
    p.add_argument('--report', help='Ingest report path (default <out>.report.json)')
    p.set_defaults(handler=cmd_ingest)

    p = sub.add_parser('analyze', parents=[parent], help='Word series CSV to flow report JSON')
    p.add_argument('series', nargs='?')
    p.add_argument('--graph', help='Analyze a serialized word graph instead of a series CSV')
    p.add_argument('--graph-out', help='Also write the built word graph')
    p.add_argument('--tensor-dump', help='Write the tensor as "i j k l value" lines')
    p.add_argument('--record-runtime', action='store_true', help='Embed wall-clock runtime in the report')
    p.add_argument('--out', default='-')
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser('synth', parents=[parent], help='Write one synthetic graph and its ground truth')
    p.add_argument('--noise-level', type=float, default=0.0)
    p.add_argument('--T', type=int, default=200)
    p.add_argument('--out', required=True, help='Output directory')
    p.set_defaults(handler=cmd_synth)

    p = sub.add_parser('synth-bench', parents=[parent], help='Noise sweep over synthetic datasets')
    p.add_argument('--levels', default=','.join(str(v) for v in DEFAULT_LEVELS))
    p.add_argument('--repeats', type=int, default=50)
    p.add_argument('--variants', default='x3')
    p.add_argument('--T', type=int, default=200)
    p.add_argument('--out', required=True, help='Output directory')
    p.set_defaults(handler=cmd_synth_bench)

    p = sub.add_parser('ucr-bench', parents=[parent], help='NMI table over UCR datasets')
    p.add_argument('datasets', nargs='+', help='Dataset directories or names under --data-dir')
    p.add_argument('--data-dir', default='data/ucr')
    p.add_argument('--methods', default=','.join(UCR_METHODS))
    p.add_argument('--runs', type=int, default=100)
    p.add_argument('--max-series', type=int, help='Stratified cap on series for pairwise methods')
    p.add_argument('--fetch', action='store_true', help='Download missing datasets')
    p.add_argument('--archive-url', default=UcrArchiveClient().base_url)
    p.add_argument('--out', required=True, help='Output directory')
    p.set_defaults(handler=cmd_ucr_bench)

    p = sub.add_parser('render', parents=[parent], help='Flow report JSON to SVG stripe diagram')
    p.add_argument('report')
    p.add_argument('--out', required=True)
    p.set_defaults(handler=cmd_render)

    p = sub.add_parser('evaluate', parents=[parent], help='Score a flow report against ground truth')
    p.add_argument('report')
    p.add_argument('truth')
    p.add_argument('--out', default='-')
    p.set_defaults(handler=cmd_evaluate)

    p = sub.add_parser('demo-corpus', parents=[parent], help='Write the bundled demo corpus')
    p.add_argument('--out', required=True)
    p.set_defaults(handler=cmd_demo_corpus)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format='%(levelname)s %(name)s: %(message)s',
        stream=sys.stderr
    )

    try:
        run = RunConfig.from_args(args)
        return args.handler(args, run)
    except EmptyTensorError as e:
        print(f"ideaflow: {e}", file=sys.stderr)
        return EXIT_EMPTY
    except IdeaFlowError as e:
        print(f"ideaflow: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == '__main__':
    sys.exit(main())
