"""
UCR time series archive: text-format loader and download client
"""

import io
import logging
import math
import re
import zipfile
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
import requests

from .exceptions import ArchiveError, FormatError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

DEFAULT_ARCHIVE_URL = "https://www.timeseriesclassification.com/aeon-toolkit"
SPLITS = ('TRAIN', 'TEST')


@dataclass(frozen=True, eq=False)
class UcrDataset:
    """Labelled equal-length series; labels are remapped to 1..K"""
    name: str
    values: np.ndarray
    labels: np.ndarray

    @property
    def N(self) -> int:
        return int(self.values.shape[0])

    @property
    def T(self) -> int:
        return int(self.values.shape[1])

    @property
    def K(self) -> int:
        return int(np.unique(self.labels).size)

    def subset(self, indices) -> 'UcrDataset':
        indices = np.asarray(indices, dtype=np.int64)
        return UcrDataset(self.name, self.values[indices], self.labels[indices])


def _separator(line: str) -> Optional[str]:
    if '\t' in line:
        return '\t'
    if ',' in line:
        return ','
    return None


def _parse_file(path: Path) -> Tuple[List[float], List[List[float]]]:
    source = str(path)
    try:
        text = path.read_text(encoding='utf-8')
    except (OSError, UnicodeDecodeError) as e:
        raise FormatError(f"Cannot read UCR file: {e}", source=source)

    lines = [(n, line.strip()) for n, line in enumerate(text.splitlines(), start=1) if line.strip()]
    if not lines:
        raise FormatError("UCR file holds no series", source=source)

    sep = _separator(lines[0][1])
    labels, rows = [], []
    width = None
    for n, line in lines:
        fields = line.split(sep) if sep else line.split()
        try:
            numbers = [float(f) for f in fields]
        except ValueError:
            raise FormatError("Non-numeric field", source=source, line=n)
        if len(numbers) < 3:
            raise FormatError("Row needs a label and at least two values", source=source, line=n)
        if width is None:
            width = len(numbers)
        elif len(numbers) != width:
            raise FormatError(
                f"Ragged row: {len(numbers) - 1} values, expected {width - 1}",
                source=source,
                line=n
            )
        if not all(math.isfinite(v) for v in numbers):
            raise FormatError("Non-finite value", source=source, line=n)
        labels.append(numbers[0])
        rows.append(numbers[1:])
    return labels, rows


def _split_files(directory: Path) -> List[Path]:
    files = []
    for split in SPLITS:
        matches = sorted(p for p in directory.iterdir() if p.is_file() and re.search(rf"_{split}(\.\w+)?$", p.name))
        files.extend(matches[:1])
    return files


def load_ucr(path: PathLike) -> UcrDataset:
    """
    Load a UCR dataset from one split file or a dataset directory.

    A directory contributes its `*_TRAIN*` and `*_TEST*` files, merged in
    that order. Each line is a class label followed by the series values,
    separated by tabs, commas or whitespace (detected per file).

    Raises:
        FormatError: on empty files, ragged rows or mismatched splits
    """
    path = Path(path)
    if path.is_dir():
        files = _split_files(path)
        name = path.name
        if not files:
            raise FormatError("No TRAIN or TEST split files found", source=str(path))
    else:
        files = [path]
        name = re.sub(r"_(TRAIN|TEST)$", "", path.stem)

    labels: List[float] = []
    rows: List[List[float]] = []
    for f in files:
        file_labels, file_rows = _parse_file(f)
        if rows and len(file_rows[0]) != len(rows[0]):
            raise FormatError(
                f"Split length {len(file_rows[0])} differs from {len(rows[0])}",
                source=str(f),
                line=1
            )
        labels.extend(file_labels)
        rows.extend(file_rows)

    raw = np.rint(np.array(labels)).astype(np.int64)
    _, remapped = np.unique(raw, return_inverse=True)
    dataset = UcrDataset(name=name, values=np.array(rows, dtype=np.float64), labels=remapped.reshape(-1) + 1)
    logger.info("Loaded %s: N=%d T=%d K=%d", name, dataset.N, dataset.T, dataset.K)
    return dataset


def stratified_subset(dataset: UcrDataset, max_series: Optional[int]) -> UcrDataset:
    """
    Deterministic class-stratified cap on the number of series.

    Each class keeps its first series in file order, with quotas
    proportional to class size (largest remainder, at least one each).
    """
    if max_series is None or dataset.N <= max_series:
        return dataset
    classes, counts = np.unique(dataset.labels, return_counts=True)
    quotas = counts * max_series / dataset.N
    take = np.maximum(np.floor(quotas).astype(np.int64), 1)
    order = np.argsort(-(quotas - np.floor(quotas)), kind='stable')
    for c in order:
        if take.sum() >= max_series:
            break
        if take[c] < counts[c]:
            take[c] += 1
    keep = []
    for c, n in zip(classes, take):
        keep.extend(np.flatnonzero(dataset.labels == c)[:n].tolist())
    return dataset.subset(sorted(keep))


class UcrArchiveClient:
    """Client for downloading datasets from the UCR/UEA archive"""

    def __init__(self, base_url: str = DEFAULT_ARCHIVE_URL, timeout: float = 60.0):
        """
        Initialize the archive client

        Args:
            base_url: Archive root serving `{name}.zip`
            timeout: Request timeout in seconds
        """
        self.base_url = base_url.rstrip('/')
        self.timeout = timeout

    def _make_request(self, url: str) -> bytes:
        """Internal method to fetch a file with error handling"""
        try:
            response = requests.get(url, timeout=self.timeout)

            if response.status_code == 404:
                raise ArchiveError(
                    "Dataset not found",
                    status_code=404,
                    suggestion="Check the dataset name against the archive's dataset list",
                    url=url
                )

            if not response.ok:
                raise ArchiveError(
                    f"Request failed with status {response.status_code}",
                    status_code=response.status_code,
                    details=response.reason or None,
                    url=url
                )

            return response.content
        except requests.RequestException as e:
            raise ArchiveError(f"Network error: {str(e)}", url=url)

    def fetch(self, name: str, dest_dir: PathLike) -> Path:
        """
        Download and unpack one dataset.

        Args:
            name: Dataset name, e.g. "Coffee"
            dest_dir: Directory receiving `<name>/<name>_TRAIN.*` and `_TEST.*`

        Returns:
            Path of the dataset directory

        Example:
            client = UcrArchiveClient()
            load_ucr(client.fetch("Coffee", "data/ucr"))
        """
        target = Path(dest_dir) / name
        if target.is_dir() and len(_split_files(target)) == len(SPLITS):
            logger.info("Using cached %s", target)
            return target

        url = f"{self.base_url}/{name}.zip"
        logger.info("Downloading %s", url)
        payload = self._make_request(url)

        try:
            archive = zipfile.ZipFile(io.BytesIO(payload))
        except zipfile.BadZipFile as e:
            raise FormatError(f"Archive is not a zip file: {e}", source=url)

        target.mkdir(parents=True, exist_ok=True)
        extracted = 0
        for member in archive.namelist():
            filename = Path(member).name
            if re.fullmatch(rf"{re.escape(name)}_({'|'.join(SPLITS)})\.(txt|tsv|csv)", filename):
                (target / filename).write_bytes(archive.read(member))
                extracted += 1
        if not extracted:
            raise FormatError(f"Archive holds no {name}_TRAIN/_TEST files", source=url)
        return target
