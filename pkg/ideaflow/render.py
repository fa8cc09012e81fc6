"""
Static stripe diagram of a flow report.

Every idea is a horizontal stripe whose width follows its hotness; every
correlated segment is a vertical link between the stripes of its idea
pair at the segment midpoint, annotated with the lead-lag time.
"""

import io
import logging
from pathlib import Path
from typing import Dict, Tuple, Union

import matplotlib
from matplotlib.figure import Figure
import numpy as np

from .models import FlowReport, idea_key

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

PALETTE = (
    '#1f77b4', '#ff7f0e', '#2ca02c', '#d62728', '#9467bd',
    '#8c564b', '#e377c2', '#7f7f7f', '#bcbd22', '#17becf'
)
MIN_HALF_WIDTH = 0.03
MAX_HALF_WIDTH = 0.4

_RC = {
    'svg.hashsalt': 'ideaflow',
    'svg.fonttype': 'none',
    'path.simplify': False
}


def _stripe_rows(report: FlowReport) -> Dict[str, Tuple[float, str]]:
    """Vertical position and color of every idea stripe"""
    rows = {}
    ideas = list(report.ideas_a) + list(report.ideas_b)
    for n, idea in enumerate(ideas):
        y = float(len(ideas) - n) + (0.5 if idea.group == 'A' else 0.0)
        rows[idea_key(idea.group, idea.idea_id)] = (y, PALETTE[n % len(PALETTE)])
    return rows


def _label(idea) -> str:
    words = ', '.join(idea.top_words[:3])
    return f"{idea.group}{idea.idea_id}: {words}" if words else f"{idea.group}{idea.idea_id}"


def draw_report(report: FlowReport) -> Figure:
    """Build the stripe figure; gids mark stripes (stripe-*) and links (link-*)"""
    rows = _stripe_rows(report)
    t = np.arange(report.T)
    peak = max((max(v) for v in report.hotness.values() if v), default=0)

    fig = Figure(figsize=(10, 1 + 0.6 * max(len(rows), 1)))
    ax = fig.add_subplot(1, 1, 1)

    for idea in list(report.ideas_a) + list(report.ideas_b):
        key = idea_key(idea.group, idea.idea_id)
        y, color = rows[key]
        hot = np.asarray(report.hotness.get(key, [0] * report.T), dtype=np.float64)
        half = MIN_HALF_WIDTH + (MAX_HALF_WIDTH - MIN_HALF_WIDTH) * (hot / peak if peak else hot)
        stripe = ax.fill_between(t, y - half, y + half, color=color, alpha=0.8, linewidth=0)
        stripe.set_gid(f"stripe-{idea.group}-{idea.idea_id}")
        ax.text(-1, y, _label(idea), ha='right', va='center', fontsize=8)

    for flow in report.flows:
        y_a, _ = rows[idea_key('A', flow.idea_a)]
        y_b, _ = rows[idea_key('B', flow.idea_b)]
        for n, segment in enumerate(flow.segments):
            if segment.c_bar != 1:
                continue
            mid = (segment.k_start + segment.k_end) / 2.0
            (link,) = ax.plot([mid, mid], [y_a, y_b], color='#333333', linewidth=1.0)
            link.set_gid(f"link-{flow.idea_a}-{flow.idea_b}-{n}")
            ax.text(mid + 0.3, (y_a + y_b) / 2.0, f"{segment.dt_bar:+.1f}", fontsize=7)

    ax.set_xlim(-0.5, report.T - 0.5)
    ax.set_yticks([])
    ax.set_xlabel('time point')
    for side in ('left', 'right', 'top'):
        ax.spines[side].set_visible(False)
    fig.subplots_adjust(left=0.25, right=0.98)
    return fig


def render_svg(report: FlowReport) -> str:
    """SVG text of the stripe diagram; identical reports give identical bytes"""
    with matplotlib.rc_context(_RC):
        fig = draw_report(report)
        buffer = io.BytesIO()
        fig.savefig(buffer, format='svg', metadata={'Date': None})
    return buffer.getvalue().decode('utf-8')


def write_svg(path: PathLike, report: FlowReport) -> None:
    Path(path).write_text(render_svg(report), encoding='utf-8')
    logger.info("Wrote %s", path)
