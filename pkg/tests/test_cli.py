"""
Command-line entry points and exit codes
"""

import json

import numpy as np
import pytest

from ideaflow.cli import EXIT_EMPTY, EXIT_INPUT, EXIT_OK, main
from ideaflow.config import SynthConfig
from ideaflow.graph import read_graph, write_graph
from ideaflow.ingest import DEMO_RARE_THRESHOLD
from ideaflow.models import AugmentedBipartiteGraph
from ideaflow.synth import generate_graph, generate_ground_truth, write_truth

SMALL = SynthConfig(ideas_per_group=(2, 2), words_per_idea=(3, 4), T=50,
                    period_length=(10, 15), periods_per_flow=(1, 1), seed=1)


@pytest.fixture
def synth_files(tmp_path):
    truth = generate_ground_truth(SMALL)
    graph_path = tmp_path / 'graph.json'
    truth_path = tmp_path / 'truth.json'
    write_graph(graph_path, generate_graph(truth, SMALL))
    write_truth(truth_path, truth)
    return graph_path, truth_path


def test_analyze_evaluate_render(tmp_path, synth_files):
    """A planted graph runs through analysis, scoring and drawing"""
    graph_path, truth_path = synth_files
    report_path = tmp_path / 'report.json'
    metrics_path = tmp_path / 'metrics.json'
    svg_path = tmp_path / 'flows.svg'

    assert main(['analyze', '--graph', str(graph_path), '--out', str(report_path), '--seed', '2']) == EXIT_OK
    report = json.loads(report_path.read_text())
    assert report['T'] == 50
    assert report['config']['seed'] == 2
    assert 'leadership' in report

    assert main(['evaluate', str(report_path), str(truth_path), '--out', str(metrics_path)]) == EXIT_OK
    metrics = json.loads(metrics_path.read_text())['metrics']
    assert 0.0 <= metrics['flowleadtime_f1'] <= metrics['flow_f1'] <= 1.0

    assert main(['render', str(report_path), '--out', str(svg_path)]) == EXIT_OK
    assert svg_path.read_text().count('id="stripe-') == 4


def test_analyze_output_is_deterministic(tmp_path, synth_files):
    """Without --record-runtime two runs write identical bytes"""
    graph_path, _ = synth_files
    first, second = tmp_path / 'first.json', tmp_path / 'second.json'

    assert main(['analyze', '--graph', str(graph_path), '--out', str(first)]) == EXIT_OK
    assert main(['analyze', '--graph', str(graph_path), '--out', str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    assert 'runtime_seconds' not in json.loads(first.read_text())


def test_analyze_exit_codes(tmp_path, synth_files):
    """Edgeless graphs exit 3; bad settings and missing files exit 2"""
    graph_path, _ = synth_files
    empty = tmp_path / 'empty.json'
    write_graph(empty, AugmentedBipartiteGraph(2, 2, 10, 2))

    assert main(['analyze', '--graph', str(empty), '--out', str(tmp_path / 'r.json')]) == EXIT_EMPTY
    assert main(['analyze', '--graph', str(graph_path), '--threshold', '2']) == EXIT_INPUT
    assert main(['analyze', '--graph', str(tmp_path / 'missing.json')]) == EXIT_INPUT
    assert main(['analyze']) == EXIT_INPUT


def test_synth_infeasible_exits_with_input_error(tmp_path):
    """Periods longer than T cannot be planted"""
    assert main(['synth', '--T', '12', '--out', str(tmp_path / 'synth')]) == EXIT_INPUT


def test_demo_corpus_ingest_analyze_render(tmp_path, capsys):
    """The demo corpus runs through ingest, analysis and drawing with the advertised threshold"""
    corpus = tmp_path / 'demo.jsonl'
    series = tmp_path / 'series.csv'
    report_path = tmp_path / 'report.json'
    svg_path = tmp_path / 'flows.svg'

    assert main(['demo-corpus', '--out', str(corpus)]) == EXIT_OK
    command = capsys.readouterr().out.split()
    assert command[:2] == ['ideaflow', 'ingest']
    threshold = command[command.index('--rare-threshold') + 1]
    assert float(threshold) == DEMO_RARE_THRESHOLD

    assert main(['ingest', str(corpus), '--out', str(series)]) == EXIT_INPUT
    assert main(['ingest', str(corpus), '--out', str(series), '--rare-threshold', threshold]) == EXIT_OK
    header = series.read_text().splitlines()[0]
    assert header.startswith('word,group,t0,t1')
    ingest_report = json.loads((tmp_path / 'series.csv.report.json').read_text())
    assert ingest_report['ingest']['invalid_lines'] == 0

    assert main(['analyze', str(series), '--out', str(report_path)]) == EXIT_OK
    report = json.loads(report_path.read_text())
    correlated = sum(s['c_bar'] for flow in report['flows'] for s in flow['segments'])
    assert len(report['ideas']) == 4
    assert correlated >= 1

    assert main(['render', str(report_path), '--out', str(svg_path)]) == EXIT_OK
    svg = svg_path.read_text()
    assert svg.count('id="stripe-') == len(report['ideas'])
    assert svg.count('id="link-') == correlated


def test_analyze_tensor_dump(tmp_path, synth_files):
    """--tensor-dump writes one sorted entry line per stored tensor cell"""
    graph_path, _ = synth_files
    dump = tmp_path / 'tensor.txt'

    assert main(['analyze', '--graph', str(graph_path), '--out', str(tmp_path / 'r.json'),
                 '--tensor-dump', str(dump)]) == EXIT_OK
    lines = dump.read_text().splitlines()
    coords = [tuple(int(v) for v in line.split()[:4]) for line in lines]
    graph = read_graph(graph_path)

    assert len(lines) == int(graph.dense_c().sum())
    assert coords == sorted(coords)
    assert all(0 <= l <= 2 * graph.tau_max for _, _, _, l in coords)


def test_ucr_bench_command(tmp_path):
    """ucr-bench writes its NMI tables"""
    rng = np.random.default_rng(0)
    toy = tmp_path / 'Toy'
    toy.mkdir()
    rows = [
        '\t'.join([str(label)] + [f"{v:.5f}" for v in level + rng.normal(scale=0.1, size=12)])
        for label, level in ((1, 0.0), (1, 0.0), (2, 4.0), (2, 4.0))
    ]
    (toy / 'Toy_TRAIN.tsv').write_text('\n'.join(rows) + '\n')
    out = tmp_path / 'out'

    assert main(['ucr-bench', str(toy), '--methods', 'B1', '--runs', '2', '--out', str(out)]) == EXIT_OK
    results = json.loads((out / 'ucr_nmi.json').read_text())['results']
    assert results[0]['method'] == 'B1'
    assert results[0]['status'] == 'ok'
    assert (out / 'ucr_nmi.csv').exists()
