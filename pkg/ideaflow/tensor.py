"""
Sparse 4-order tensor encodings of the word graph and greedy PARAFAC.

The residual of the greedy factorization is never materialized: every
contraction is taken against the stored entries and corrected with the
already extracted rank-1 terms.
"""

import logging
from dataclasses import dataclass
from typing import Tuple, List, Sequence, Optional, Union, Iterable

import numpy as np

from .config import MAX_RANK, VARIANTS
from .exceptions import (
    ConfigurationError,
    DimensionError,
    EmptySelectionError,
    EmptyTensorError,
    InvalidInputError
)
from .models import AugmentedBipartiteGraph

logger = logging.getLogger(__name__)

Shape4 = Tuple[int, int, int, int]
Seed = Union[None, int, np.random.Generator]

CHUNK = 1 << 16
# Components whose weight (or remaining residual) falls below this share of
# ||X|| are treated as exhausted.
_VANISH = 1e-10


@dataclass(frozen=True, eq=False)
class SparseTensor4:
    """Coordinate-format 4-order tensor with lexicographically sorted entries"""
    shape: Shape4
    coords: np.ndarray
    values: np.ndarray

    @classmethod
    def from_entries(
        cls,
        shape: Sequence[int],
        coords: Union[np.ndarray, Sequence[Sequence[int]]],
        values: Union[np.ndarray, Sequence[float]]
    ) -> 'SparseTensor4':
        """
        Build a tensor from unsorted entries.

        Raises:
            DimensionError: if a coordinate lies outside the shape
            InvalidInputError: on duplicate coordinates
        """
        shape = tuple(int(d) for d in shape)
        if len(shape) != 4:
            raise DimensionError(f"Expected a 4-order shape, got {shape}")
        coords = np.asarray(coords, dtype=np.int64).reshape(-1, 4)
        values = np.asarray(values, dtype=np.float64).reshape(-1)
        if coords.shape[0] != values.size:
            raise DimensionError(f"{coords.shape[0]} coordinates for {values.size} values")
        if coords.size and (np.any(coords < 0) or np.any(coords >= np.array(shape))):
            raise DimensionError(f"Coordinate outside tensor shape {shape}")

        order = np.lexsort(coords.T[::-1])
        coords = coords[order]
        values = values[order]
        if coords.shape[0] > 1 and np.any(np.all(coords[1:] == coords[:-1], axis=1)):
            raise InvalidInputError("Duplicate tensor coordinates")

        coords.setflags(write=False)
        values.setflags(write=False)
        return cls(shape=shape, coords=coords, values=values)

    @classmethod
    def from_dense(cls, array: np.ndarray) -> 'SparseTensor4':
        array = np.asarray(array, dtype=np.float64)
        coords = np.argwhere(array != 0)
        return cls.from_entries(array.shape, coords, array[tuple(coords.T)])

    @property
    def nnz(self) -> int:
        return int(self.values.size)

    def norm(self) -> float:
        return float(np.sqrt(self.values @ self.values))

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.shape)
        dense[tuple(self.coords.T)] = self.values
        return dense

    def dump_text(self) -> str:
        """One `i j k l value` line per entry, sorted"""
        lines = [
            f"{i} {j} {k} {l} {format(v, '.17g')}"
            for (i, j, k, l), v in zip(self.coords.tolist(), self.values.tolist())
        ]
        return "\n".join(lines) + ("\n" if lines else "")


@dataclass(frozen=True, eq=False)
class FactorSet:
    """Rank-q CP factors; factor matrix n has shape (shape[n], q)"""
    lambdas: np.ndarray
    factors: Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]

    @property
    def rank(self) -> int:
        return int(self.lambdas.size)

    @property
    def shape(self) -> Shape4:
        return tuple(f.shape[0] for f in self.factors)

    def truncated(self, q: int) -> 'FactorSet':
        return FactorSet(self.lambdas[:q], tuple(f[:, :q] for f in self.factors))

    def to_dense(self) -> np.ndarray:
        return np.einsum('m,im,jm,km,lm->ijkl', self.lambdas, *self.factors)

    @classmethod
    def from_components(cls, shape: Shape4, lambdas: List[float],
                        components: List[List[np.ndarray]]) -> 'FactorSet':
        if not components:
            return cls(np.zeros(0), tuple(np.zeros((d, 0)) for d in shape))
        factors = tuple(np.column_stack([c[n] for c in components]) for n in range(4))
        return cls(np.array(lambdas, dtype=np.float64), factors)


def build_tensor(graph: AugmentedBipartiteGraph, variant: str = 'x3') -> SparseTensor4:
    """
    Encode the graph as X1, X2 or X3.

    X3 stores a one at (i, j, k, dt_k + tau_max) for every correlated
    cell; X2 stores it at (i, j, k, k + dt_k), dropping offsets that leave
    [0, T); X1 stores dt_k at (i, j, k, 0) for correlated cells and the
    sentinel 2 * (T + tau_max) for every other cell.
    """
    if variant not in VARIANTS:
        raise ConfigurationError(f"Unknown tensor variant '{variant}'",
                                 suggestion=f"Use one of {', '.join(VARIANTS)}")
    n_a, n_b, T = graph.dims
    tau = graph.tau_max

    if variant == 'x1':
        c = graph.dense_c()
        dt = graph.dense_dt()
        sentinel = 2 * (T + tau)
        coords = np.indices((n_a, n_b, T)).reshape(3, -1).T
        coords = np.column_stack([coords, np.zeros(coords.shape[0], dtype=np.int64)])
        values = np.where(c == 1, dt, sentinel).reshape(-1).astype(np.float64)
        return SparseTensor4.from_entries((n_a, n_b, T, 1), coords, values)

    blocks = []
    for edge in graph.edges:
        k = np.flatnonzero(edge.c == 1)
        l = edge.dt[k] + tau if variant == 'x3' else k + edge.dt[k]
        keep = (l >= 0) & (l < (2 * tau + 1 if variant == 'x3' else T))
        k, l = k[keep], l[keep]
        blocks.append(np.column_stack([
            np.full(k.size, edge.i), np.full(k.size, edge.j), k, l
        ]))

    coords = np.vstack(blocks) if blocks else np.zeros((0, 4), dtype=np.int64)
    d4 = 2 * tau + 1 if variant == 'x3' else T
    return SparseTensor4.from_entries((n_a, n_b, T, d4), coords, np.ones(coords.shape[0]))


def _gather_product(t: SparseTensor4, vectors: Sequence[np.ndarray], skip: int) -> np.ndarray:
    weights = t.values.copy()
    for m in range(4):
        if m != skip:
            weights *= vectors[m][t.coords[:, m]]
    return weights


def _residual_contract(
    t: SparseTensor4,
    vectors: Sequence[np.ndarray],
    mode: int,
    lambdas: List[float],
    components: List[List[np.ndarray]]
) -> np.ndarray:
    """Contract (X - sum of extracted terms) with vectors on every mode but one"""
    g = np.bincount(t.coords[:, mode], weights=_gather_product(t, vectors, mode),
                    minlength=t.shape[mode])
    for lam, comp in zip(lambdas, components):
        scale = lam
        for m in range(4):
            if m != mode:
                scale *= comp[m] @ vectors[m]
        g -= scale * comp[mode]
    return g


def _fit_rank_one(
    t: SparseTensor4,
    vectors: List[np.ndarray],
    lambdas: List[float],
    components: List[List[np.ndarray]],
    iters: int,
    tol: float
) -> float:
    lam_prev: Optional[float] = None
    lam = 0.0
    for _ in range(iters):
        for n in range(4):
            g = _residual_contract(t, vectors, n, lambdas, components)
            lam = float(np.linalg.norm(g))
            if lam == 0.0:
                return 0.0
            vectors[n] = g / lam
        if lam_prev is not None and abs(lam - lam_prev) <= tol * lam:
            break
        lam_prev = lam
    return lam


def greedy_parafac(
    t: SparseTensor4,
    q: int,
    iters: int = 200,
    tol: float = 1e-6,
    seed: Seed = None
) -> FactorSet:
    """
    Rank-q CP approximation by successive rank-1 ALS fits with deflation.

    Each component starts from four uniform random vectors drawn in mode
    order from `numpy.random.default_rng(seed)` and normalized; ALS sweeps
    the modes in order until the relative change of the weight drops to
    `tol` or `iters` sweeps pass. Extraction stops early once a weight or
    the residual vanishes relative to ||X||.

    Raises:
        ConfigurationError: if q lies outside [1, 1024]
        EmptyTensorError: if the tensor has no entries
    """
    if not 1 <= q <= MAX_RANK:
        raise ConfigurationError(f"Rank q must lie in [1, {MAX_RANK}], got {q}")
    if t.nnz == 0:
        raise EmptyTensorError("Cannot factorize an empty tensor",
                               suggestion="No correlated pairs were found; relax the cointegration thresholds")

    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    norm_x = t.norm()
    lambdas: List[float] = []
    components: List[List[np.ndarray]] = []

    for m in range(q):
        if norm_x == 0.0:
            break
        vectors = []
        for d in t.shape:
            v = rng.uniform(size=d)
            vectors.append(v / np.linalg.norm(v))
        lam = _fit_rank_one(t, vectors, lambdas, components, iters, tol)
        if lam <= _VANISH * norm_x:
            break
        lambdas.append(lam)
        components.append(vectors)
        residual = residual_norm(t, FactorSet.from_components(t.shape, lambdas, components))
        logger.debug("component %d: lambda=%.6g residual=%.6g", m, lam, residual)
        if residual <= _VANISH * norm_x:
            break

    return FactorSet.from_components(t.shape, lambdas, components)


def _chunks(n: int) -> Iterable[slice]:
    for start in range(0, n, CHUNK):
        yield slice(start, min(start + CHUNK, n))


def residual_norm(t: SparseTensor4, f: FactorSet) -> float:
    """
    Frobenius norm of X minus the reconstruction, without densifying.

    ||X - R||^2 splits into the squared error on the stored entries plus
    the reconstruction mass off them, ||R||^2 - sum of R^2 on the entries.

    Raises:
        DimensionError: if the factor shapes disagree with the tensor
    """
    if f.shape != t.shape:
        raise DimensionError(f"Factor shape {f.shape} does not match tensor shape {t.shape}")
    if f.rank == 0:
        return t.norm()

    on_support_error = 0.0
    on_support_recon = 0.0
    for part in _chunks(t.nnz):
        coords = t.coords[part]
        gathered = np.ones((coords.shape[0], f.rank))
        for n in range(4):
            gathered *= f.factors[n][coords[:, n]]
        recon = gathered @ f.lambdas
        diff = t.values[part] - recon
        on_support_error += float(diff @ diff)
        on_support_recon += float(recon @ recon)

    gram = np.ones((f.rank, f.rank))
    for factor in f.factors:
        gram *= factor.T @ factor
    recon_total = float(f.lambdas @ gram @ f.lambdas)

    off_support = recon_total - on_support_recon
    if off_support < 64 * np.finfo(float).eps * max(recon_total, 1.0):
        off_support = 0.0
    return float(np.sqrt(on_support_error + off_support))


def subtensor(
    t: SparseTensor4,
    rows_a: Iterable[int],
    rows_b: Iterable[int]
) -> SparseTensor4:
    """
    Restrict the first two modes to the selected indices, reindexed densely.

    Raises:
        EmptySelectionError: if either index set is empty
        DimensionError: if an index is out of range
    """
    rows_a = sorted(set(int(i) for i in rows_a))
    rows_b = sorted(set(int(j) for j in rows_b))
    if not rows_a or not rows_b:
        raise EmptySelectionError("Sub-tensor selection is empty")
    if rows_a[0] < 0 or rows_a[-1] >= t.shape[0] or rows_b[0] < 0 or rows_b[-1] >= t.shape[1]:
        raise DimensionError(f"Selection outside tensor shape {t.shape}")

    map_a = np.full(t.shape[0], -1, dtype=np.int64)
    map_a[rows_a] = np.arange(len(rows_a))
    map_b = np.full(t.shape[1], -1, dtype=np.int64)
    map_b[rows_b] = np.arange(len(rows_b))

    new_a = map_a[t.coords[:, 0]]
    new_b = map_b[t.coords[:, 1]]
    keep = (new_a >= 0) & (new_b >= 0)
    coords = np.column_stack([new_a[keep], new_b[keep], t.coords[keep, 2], t.coords[keep, 3]])
    shape = (len(rows_a), len(rows_b), t.shape[2], t.shape[3])
    return SparseTensor4.from_entries(shape, coords, t.values[keep])
