"""
Corpus ingest: tokenize grouped, timestamped documents and bin word counts
into per-group term-frequency series.
"""

import json
import logging
import math
import re
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from .config import SECONDS_PER_DAY, IngestConfig
from .exceptions import EmptyGroupError, FormatError, InvalidInputError
from .models import GROUPS, GroupSeries, TimeSeries, WordSeries

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

_WORD = re.compile(r"[^\W_]+")

DEMO_START = 1356998400
DEMO_BINS = 30
DEMO_BIN_WIDTH = 2 * SECONDS_PER_DAY
DEMO_RARE_THRESHOLD = 0.25
DEMO_ECHO_BINS = 2


@dataclass(frozen=True)
class CorpusDoc:
    """One document: epoch-second timestamp, group and text"""
    ts: int
    group: str
    text: str

    def to_dict(self) -> Dict[str, Any]:
        return {'ts': self.ts, 'group': self.group, 'text': self.text}


@dataclass
class IngestReport:
    """Counts of one ingest run"""
    lines_read: int = 0
    invalid_lines: int = 0
    docs: Dict[str, int] = field(default_factory=lambda: {g: 0 for g in GROUPS})
    out_of_range: int = 0
    t_start: Optional[int] = None
    t_end: Optional[int] = None
    T: int = 0
    vocabulary: Dict[str, int] = field(default_factory=lambda: {g: 0 for g in GROUPS})
    rare_dropped: Dict[str, int] = field(default_factory=lambda: {g: 0 for g in GROUPS})
    token_occurrences: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def load_stopwords(path: Optional[PathLike] = None) -> frozenset:
    """
    Stopword set from a one-word-per-line file.

    Args:
        path: Stopword file; the bundled English list when omitted
    """
    if path is None:
        text = resources.files('ideaflow').joinpath('data/stopwords_en.txt').read_text(encoding='utf-8')
    else:
        try:
            text = Path(path).read_text(encoding='utf-8')
        except (OSError, UnicodeDecodeError) as e:
            raise FormatError(f"Cannot read stopword file: {e}", source=str(path))
    return frozenset(w.strip().lower() for w in text.splitlines() if w.strip() and not w.startswith('#'))


def tokenize(text: str, cfg: IngestConfig = IngestConfig()) -> List[str]:
    """Lowercase, split on non-alphanumerics, drop stopwords and short tokens"""
    if cfg.lowercase:
        text = text.lower()
    tokens = _WORD.findall(text) if cfg.strip_punctuation else text.split()
    return [t for t in tokens if len(t) >= cfg.min_token_length and t not in cfg.stopwords]


def _parse_doc(line: bytes) -> CorpusDoc:
    data = json.loads(line.decode('utf-8'))
    ts, group, text = data['ts'], data['group'], data['text']
    if isinstance(ts, bool) or not isinstance(ts, int):
        raise ValueError(f"timestamp {ts!r} is not an integer")
    if group not in GROUPS:
        raise ValueError(f"unknown group {group!r}")
    if not isinstance(text, str):
        raise ValueError("text is not a string")
    return CorpusDoc(ts, group, text)


def read_corpus(path: PathLike, report: Optional[IngestReport] = None) -> List[CorpusDoc]:
    """
    Read a JSON-lines corpus of {ts, group, text} objects.

    Undecodable or malformed lines are logged, counted and skipped.

    Raises:
        FormatError: if the file cannot be opened
    """
    report = report if report is not None else IngestReport()
    try:
        raw = Path(path).read_bytes()
    except OSError as e:
        raise FormatError(f"Cannot read corpus: {e}", source=str(path))

    docs = []
    for n, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            continue
        report.lines_read += 1
        try:
            docs.append(_parse_doc(line))
        except (UnicodeDecodeError, json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
            report.invalid_lines += 1
            logger.warning("%s:%d: skipping document (%s)", path, n, e)
    return docs


def _time_range(docs: Sequence[CorpusDoc], cfg: IngestConfig) -> Tuple[int, int]:
    t_start = cfg.t_start if cfg.t_start is not None else min(d.ts for d in docs)
    t_end = cfg.t_end if cfg.t_end is not None else max(d.ts for d in docs) + 1
    if t_start >= t_end:
        raise InvalidInputError(f"Empty time range [{t_start}, {t_end})")
    return t_start, t_end


def tokenize_filter(
    docs: Iterable[CorpusDoc],
    cfg: IngestConfig = IngestConfig(),
    t_start: Optional[int] = None,
    t_end: Optional[int] = None,
    report: Optional[IngestReport] = None
) -> pd.DataFrame:
    """
    Token stream of the documents inside [t_start, t_end).

    Tokens averaging fewer than rare_threshold occurrences per day within
    their group are removed.

    Returns:
        DataFrame with columns token, group, ts sorted by (group, ts, token)
    """
    report = report if report is not None else IngestReport()
    docs = list(docs)
    columns = ['token', 'group', 'ts']
    if not docs:
        return pd.DataFrame(columns=columns)
    if t_start is None or t_end is None:
        t_start, t_end = _time_range(docs, cfg)

    rows = []
    for doc in docs:
        if not t_start <= doc.ts < t_end:
            report.out_of_range += 1
            continue
        report.docs[doc.group] += 1
        rows.extend((token, doc.group, doc.ts) for token in tokenize(doc.text, cfg))

    stream = pd.DataFrame(rows, columns=columns)
    if stream.empty:
        return stream

    days = (t_end - t_start) / SECONDS_PER_DAY
    totals = stream.groupby(['group', 'token']).size()
    rare = totals[totals / days < cfg.rare_threshold]
    for group in GROUPS:
        report.rare_dropped[group] = int((rare.index.get_level_values('group') == group).sum())

    keep = ~stream.set_index(['group', 'token']).index.isin(rare.index)
    stream = stream[keep].sort_values(['group', 'ts', 'token'], kind='mergesort').reset_index(drop=True)
    report.token_occurrences = int(len(stream))
    return stream


def bin_counts(
    stream: pd.DataFrame,
    cfg: IngestConfig,
    t_start: int,
    t_end: int
) -> Tuple[GroupSeries, GroupSeries]:
    """
    Count tokens per half-open bin [t_start + n * width, t_start + (n + 1) * width).

    Tokens of each group are ordered by descending total count, then
    lexicographically; that order fixes their tensor indices.
    """
    if t_start >= t_end:
        raise InvalidInputError(f"Empty time range [{t_start}, {t_end})")
    T = math.ceil((t_end - t_start) / cfg.bin_width)
    if T < 2:
        raise InvalidInputError(
            f"Time range covers {T} bin(s); at least 2 are needed",
            suggestion="Use a narrower --bin-width"
        )

    groups = {}
    for group in GROUPS:
        sub = stream[stream['group'] == group]
        if sub.empty:
            groups[group] = GroupSeries(group, ())
            continue
        bins = (sub['ts'].to_numpy(dtype=np.int64) - t_start) // cfg.bin_width
        counts = (
            pd.DataFrame({'token': sub['token'].to_numpy(), 'bin': bins})
            .groupby(['token', 'bin']).size()
            .unstack('bin', fill_value=0)
            .reindex(columns=range(T), fill_value=0)
        )
        totals = counts.sum(axis=1)
        order = sorted(counts.index, key=lambda token: (-int(totals[token]), token))
        groups[group] = GroupSeries(group, tuple(
            WordSeries(token, group, TimeSeries(counts.loc[token].to_numpy(dtype=np.float64)))
            for token in order
        ))
    return groups['A'], groups['B']


def build_group_series(path: PathLike, cfg: IngestConfig = IngestConfig()) -> Tuple[GroupSeries, GroupSeries, IngestReport]:
    """
    Corpus file to per-group word series.

    Raises:
        FormatError: if the corpus cannot be read
        EmptyGroupError: if a group has no documents or no surviving words
    """
    cfg.validate()
    report = IngestReport()
    docs = read_corpus(path, report)
    for group in GROUPS:
        if not any(d.group == group for d in docs):
            raise EmptyGroupError(f"Corpus has no documents for group {group}", source=str(path))

    t_start, t_end = _time_range(docs, cfg)
    stream = tokenize_filter(docs, cfg, t_start, t_end, report)
    a, b = bin_counts(stream, cfg, t_start, t_end)
    for group in (a, b):
        if not group.words:
            raise EmptyGroupError(
                f"No words of group {group.group} survive filtering",
                suggestion="Lower --rare-threshold",
                source=str(path)
            )

    report.t_start, report.t_end = t_start, t_end
    report.T = a.T
    report.vocabulary = {'A': len(a), 'B': len(b)}
    logger.info("Ingested %d documents into T=%d bins: %d words in A, %d in B",
                sum(report.docs.values()), report.T, len(a), len(b))
    return a, b, report


_DEMO_TOPICS = {
    'A': (
        ('immigration', 'border', 'visa', 'reform', 'citizenship'),
        ('budget', 'deficit', 'spending', 'taxes', 'sequester'),
        ('healthcare', 'insurance', 'exchange', 'premiums', 'enrollment'),
    ),
    'B': (
        ('amnesty', 'border', 'security', 'illegal', 'enforcement'),
        ('debt', 'spending', 'ceiling', 'cuts', 'shutdown'),
        ('obamacare', 'repeal', 'mandate', 'premiums', 'website'),
    )
}
_DEMO_FILLER = ('today', 'vote', 'house', 'senate', 'bill', 'floor', 'committee', 'hearing')
_DEMO_PEAKS = (7.0, 14.0, 21.0)


def demo_corpus(seed: int = 0) -> List[CorpusDoc]:
    """
    Deterministic two-group demo corpus of about 200 documents.

    Each group discusses three topics whose daily intensity is a Gaussian
    bump; group B echoes group A's topics two bins later.
    """
    rng = np.random.default_rng(seed)
    docs = []
    for b in range(DEMO_BINS):
        for group, delay in (('A', 0), ('B', DEMO_ECHO_BINS)):
            for topic, words in enumerate(_DEMO_TOPICS[group]):
                intensity = math.exp(-0.5 * ((b - delay - _DEMO_PEAKS[topic]) / 2.5) ** 2)
                for _ in range(int(round(3.5 * intensity))):
                    extra = rng.choice(words, size=2).tolist()
                    filler = rng.choice(_DEMO_FILLER, size=2).tolist()
                    text = f"The {' '.join(words)} {' '.join(extra)} of {' and '.join(filler)}!"
                    ts = DEMO_START + b * DEMO_BIN_WIDTH + int(rng.integers(DEMO_BIN_WIDTH))
                    docs.append(CorpusDoc(ts, group, text))
            filler = rng.choice(_DEMO_FILLER, size=3).tolist()
            ts = DEMO_START + b * DEMO_BIN_WIDTH + int(rng.integers(DEMO_BIN_WIDTH))
            docs.append(CorpusDoc(ts, group, f"In the {' '.join(filler)} today."))
    docs.sort(key=lambda d: (d.ts, d.group, d.text))
    return docs


def write_corpus(path: PathLike, docs: Iterable[CorpusDoc]) -> None:
    """Write documents as JSON lines"""
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        for doc in docs:
            f.write(json.dumps(doc.to_dict(), ensure_ascii=False) + '\n')
