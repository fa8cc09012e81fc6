"""
SVG stripe diagrams
"""

from ideaflow.models import FlowReport, FlowSegment, IdeaCluster, IdeaFlow
from ideaflow.render import draw_report, render_svg, write_svg


def _report():
    return FlowReport(
        T=10,
        tau_max=3,
        ideas_a=(IdeaCluster('A', 0, (0, 1), ('budget', 'deficit')),),
        ideas_b=(IdeaCluster('B', 0, (0,), ('debt',)),),
        flows=(IdeaFlow(0, 0, (FlowSegment(0, 3, 0, None), FlowSegment(4, 9, 1, 2.0))),),
        hotness={'A:0': [0, 0, 0, 0, 2, 2, 1, 1, 1, 0], 'B:0': [0, 0, 0, 0, 1, 1, 1, 1, 1, 0]}
    )


def test_svg_marks_stripes_and_links():
    """One stripe per idea, one link per correlated segment"""
    svg = render_svg(_report())

    assert svg.lstrip().startswith('<?xml')
    assert svg.count('id="stripe-') == 2
    assert 'id="stripe-A-0"' in svg
    assert svg.count('id="link-') == 1
    assert 'id="link-0-0-1"' in svg
    assert 'budget, deficit' in svg


def test_svg_is_deterministic(tmp_path):
    """Identical reports render to identical bytes"""
    path = tmp_path / 'flows.svg'
    write_svg(path, _report())

    assert path.read_text(encoding='utf-8') == render_svg(_report())


def test_empty_hotness_still_draws():
    """Reports without hotness fall back to thin stripes"""
    report = FlowReport(T=5, tau_max=1, ideas_a=(IdeaCluster('A', 0, (0,)),),
                        ideas_b=(IdeaCluster('B', 0, (0,)),), flows=())
    fig = draw_report(report)

    assert len(fig.axes) == 1
    assert render_svg(report).count('id="link-') == 0
