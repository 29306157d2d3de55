"""Discretized Born forward operator and its singular-value analysis.

The measurement model is s(x_tx, x_rx) = integral of
exp(-jk R(x_tx, p)) * exp(-jk R(x_rx, p)) * gamma(p) du over the scene
segment.  Discretizing both domains with quadrature weights folded
symmetrically into the matrix (entry *= sqrt(w_row * w_col)) makes the
discrete singular values approximate the continuous operator's, so the
Hilbert-Schmidt sum rule sum(sigma^2) = V_A * V_B holds at quadrature
accuracy.

A monostatic array of N transceivers yields N rows (x_tx = x_rx); a
multistatic array yields the full Tx x Rx product, N^2 rows for N = 200.
For that tall case singular values come from the eigen-decomposition of the
n_scene x n_scene Gram matrix, which for product-form rows factorizes into
an elementwise product of two one-way Gram matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import Aperture, SceneSegment, WaveContext

MONOSTATIC = "monostatic"
MULTISTATIC = "multistatic"


@dataclass(frozen=True)
class ArrayLayout:
    """Element positions of a mono- or multistatic array on an aperture.

    Attributes
    ----------
    architecture : str
        'monostatic' (transceivers; measurement set {(x_i, x_i)}) or
        'multistatic' (measurement set = full Tx x Rx product).
    tx_positions, rx_positions : np.ndarray
        Element positions in meters, all within [a1, a2].
    aperture : Aperture
    tx_weight, rx_weight : float
        Per-element quadrature weights (meters of aperture represented by
        one element).  Uniform layouts use length / n.
    """

    architecture: str
    tx_positions: np.ndarray
    rx_positions: np.ndarray
    aperture: Aperture
    tx_weight: float
    rx_weight: float

    def __post_init__(self):
        if self.architecture not in (MONOSTATIC, MULTISTATIC):
            raise ValueError(f"unknown architecture {self.architecture!r}")
        tx = np.atleast_1d(np.asarray(self.tx_positions, dtype=float))
        rx = np.atleast_1d(np.asarray(self.rx_positions, dtype=float))
        object.__setattr__(self, "tx_positions", tx)
        object.__setattr__(self, "rx_positions", rx)
        if tx.size == 0 or rx.size == 0:
            raise ValueError("array must have at least one element")
        lo, hi = self.aperture.a1, self.aperture.a2
        for name, pos in (("tx", tx), ("rx", rx)):
            if pos.min() < lo - 1e-12 or pos.max() > hi + 1e-12:
                raise ValueError(f"{name} positions fall outside the aperture [{lo}, {hi}]")
        if self.architecture == MONOSTATIC and not np.array_equal(tx, rx):
            raise ValueError("monostatic layout requires identical tx and rx positions")
        if self.tx_weight <= 0.0 or self.rx_weight <= 0.0:
            raise ValueError("element quadrature weights must be positive")

    @classmethod
    def uniform(cls, aperture: Aperture, n: int, architecture: str) -> "ArrayLayout":
        """n elements at the midpoints of n equal cells tiling the aperture.

        The midpoint grid keeps every element weight equal to length/n, so
        the discrete measurement measure sums exactly to the aperture length.
        """
        if n < 1:
            raise ValueError("need at least one element")
        pitch = aperture.length / n
        pos = aperture.a1 + (np.arange(n) + 0.5) * pitch
        return cls(architecture, pos, pos.copy(), aperture, pitch, pitch)

    @property
    def n_measurements(self) -> int:
        if self.architecture == MONOSTATIC:
            return self.tx_positions.size
        return self.tx_positions.size * self.rx_positions.size


@dataclass(eq=False)
class DiscreteOperator:
    """Weighted forward matrix plus the grids and weights that produced it.

    matrix[m, c] = xi(pair_m, p_c) * sqrt(row_weights[m] * col_weights[c]),
    with |xi| = 1.  Rows are measurement pairs (mono: (x_i, x_i); multi:
    row-major over Tx x Rx), columns are scene samples at the midpoint grid
    scene_u.
    """

    matrix: np.ndarray
    row_weights: np.ndarray
    col_weights: np.ndarray
    scene_u: np.ndarray
    scene_points: np.ndarray
    pair_positions: np.ndarray
    array: ArrayLayout
    scene: SceneSegment
    wave: WaveContext
    # one-way factors (weighted) for full-product multistatic rows; lets the
    # Gram and off-grid adjoint avoid touching all N^2 rows
    tx_factor: np.ndarray | None = field(default=None, repr=False)
    rx_factor: np.ndarray | None = field(default=None, repr=False)

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def forward(self, gamma: np.ndarray) -> np.ndarray:
        """Physical measurement vector s for scene reflectivity samples."""
        gamma = np.asarray(gamma)
        s_w = self.matrix @ (np.sqrt(self.col_weights) * gamma)
        return s_w / np.sqrt(self.row_weights)

    def weight_data(self, data: np.ndarray) -> np.ndarray:
        """Physical measurement values -> weighted coordinates."""
        return np.sqrt(self.row_weights) * np.asarray(data)


def _one_way_phases(positions: np.ndarray, points: np.ndarray, z_plane: float, k: float) -> np.ndarray:
    """exp(-jk R) from each of n positions to each of m scene points; (n, m)."""
    dx = positions[:, None] - points[None, :, 0]
    dz = z_plane - points[None, :, 1]
    return np.exp(-1j * k * np.hypot(dx, dz))


def build_operator(
    scene: SceneSegment, array: ArrayLayout, wave: WaveContext, n_scene: int = 400
) -> DiscreteOperator:
    """Assemble the weighted forward matrix on a midpoint scene grid.

    Parameters
    ----------
    scene : SceneSegment
    array : ArrayLayout
    wave : WaveContext
    n_scene : int
        Number of scene samples (midpoints of n_scene equal cells), >= 2.

    Returns
    -------
    DiscreteOperator
    """
    if n_scene < 2:
        raise ValueError("need n_scene >= 2")
    du = scene.length / n_scene
    scene_u = -scene.half_length + (np.arange(n_scene) + 0.5) * du
    points = scene.points(scene_u)
    z_plane = array.aperture.z_plane
    if points[:, 1].min() <= z_plane:
        raise ValueError("scene touches or crosses the aperture plane")

    k = wave.k
    col_w = np.full(n_scene, du)
    e_tx = _one_way_phases(array.tx_positions, points, z_plane, k)

    if array.architecture == MONOSTATIC:
        matrix = e_tx * e_tx
        row_w = np.full(array.tx_positions.size, array.tx_weight)
        pairs = np.stack([array.tx_positions, array.tx_positions], axis=-1)
        tx_f = rx_f = None
    else:
        e_rx = _one_way_phases(array.rx_positions, points, z_plane, k)
        n_tx, n_rx = e_tx.shape[0], e_rx.shape[0]
        matrix = (e_tx[:, None, :] * e_rx[None, :, :]).reshape(n_tx * n_rx, n_scene)
        row_w = np.full(n_tx * n_rx, array.tx_weight * array.rx_weight)
        pairs = np.stack(
            [
                np.repeat(array.tx_positions, n_rx),
                np.tile(array.rx_positions, n_tx),
            ],
            axis=-1,
        )
        tx_f = e_tx * math.sqrt(array.tx_weight)
        rx_f = e_rx * math.sqrt(array.rx_weight)

    matrix *= np.sqrt(row_w)[:, None]
    matrix *= np.sqrt(col_w)[None, :]
    return DiscreteOperator(
        matrix=matrix,
        row_weights=row_w,
        col_weights=col_w,
        scene_u=scene_u,
        scene_points=points,
        pair_positions=pairs,
        array=array,
        scene=scene,
        wave=wave,
        tx_factor=tx_f,
        rx_factor=rx_f,
    )


@dataclass(frozen=True)
class SvdSpectrum:
    """Singular values (non-increasing) and right singular vectors.

    right_vectors holds the scene-side vectors in weighted coordinates as
    columns; measurement-side vectors are reconstructed on demand (see
    left_vectors).  hs_norm_sq is the squared Frobenius norm of the weighted
    matrix, against which the sum rule sum(sigma^2) is validated.
    """

    singular_values: np.ndarray
    right_vectors: np.ndarray | None
    hs_norm_sq: float

    def __post_init__(self):
        s = np.asarray(self.singular_values, dtype=float)
        object.__setattr__(self, "singular_values", s)
        if s.size == 0:
            raise ValueError("empty spectrum")
        slack = 1e-12 * max(s[0], 1.0)
        if np.any(np.diff(s) > slack):
            raise ValueError("singular values must be non-increasing")
        if s[-1] < -slack:
            raise ValueError("singular values must be non-negative")
        if self.hs_norm_sq > 0.0:
            rel = abs(float(np.sum(s * s)) - self.hs_norm_sq) / self.hs_norm_sq
            if rel > 1e-10:
                raise ValueError(f"sum rule violated: relative error {rel:.3e}")


def svd(op: DiscreteOperator) -> SvdSpectrum:
    """Singular-value decomposition of the weighted operator.

    Matrices with many more rows than columns (the multistatic case) are
    handled through the n_scene x n_scene Gram matrix, whose eigenvalues are
    the squared singular values; for full-product rows the Gram itself is
    the elementwise product of the one-way Tx and Rx Gram matrices, so the
    N^2 rows never enter a matrix product.
    """
    m = op.matrix
    hs = float(np.vdot(m, m).real)
    try:
        if m.shape[0] > 4 * m.shape[1]:
            if op.tx_factor is not None:
                g_tx = op.tx_factor.conj().T @ op.tx_factor
                g_rx = op.rx_factor.conj().T @ op.rx_factor
                root_w = np.sqrt(op.col_weights)
                gram = g_tx * g_rx * root_w[:, None] * root_w[None, :]
            else:
                gram = m.conj().T @ m
            gram = 0.5 * (gram + gram.conj().T)
            evals, evecs = np.linalg.eigh(gram)
            order = np.argsort(evals)[::-1]
            sigma = np.sqrt(np.clip(evals[order], 0.0, None))
            vectors = evecs[:, order]
        else:
            _, sigma, vh = np.linalg.svd(m, full_matrices=False)
            vectors = vh.conj().T
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"SVD of {m.shape} operator failed: {exc}") from exc
    # trace(gram) and the Frobenius norm agree to rounding; reconcile so the
    # stored sum rule is exact for downstream checks
    return SvdSpectrum(singular_values=sigma, right_vectors=vectors, hs_norm_sq=hs)


def left_vectors(op: DiscreteOperator, spectrum: SvdSpectrum, count: int) -> np.ndarray:
    """First `count` measurement-side singular vectors, columns, on demand."""
    if spectrum.right_vectors is None:
        raise ValueError("spectrum carries no singular vectors")
    sig = spectrum.singular_values[:count]
    if np.any(sig <= 0.0):
        raise ValueError("cannot reconstruct left vectors for zero singular values")
    return (op.matrix @ spectrum.right_vectors[:, :count]) / sig


def sigma_bar(spectrum: SvdSpectrum) -> float:
    """Normalized sum of singular values, sum(sigma_i / sigma_1)."""
    s = spectrum.singular_values
    if s[0] <= 0.0:
        raise ValueError("all-zero spectrum")
    return float(np.sum(s / s[0]))


def sigma_bar_sq(spectrum: SvdSpectrum) -> float:
    """Normalized sum of squared singular values, sum(sigma_i^2) / sigma_1^2."""
    s = spectrum.singular_values
    if s[0] <= 0.0:
        raise ValueError("all-zero spectrum")
    return float(np.sum((s / s[0]) ** 2))


def dof_knee(spectrum: SvdSpectrum, drop_db: float = -10.0) -> int:
    """1-based index where the normalized spectrum first drops below drop_db.

    Returns the full spectrum length if no value falls below the threshold.
    """
    s = spectrum.singular_values
    if s[0] <= 0.0:
        raise ValueError("all-zero spectrum")
    threshold = s[0] * 10.0 ** (drop_db / 20.0)
    below = np.nonzero(s < threshold)[0]
    if below.size == 0:
        return int(s.size)
    return int(below[0]) + 1


def adjoint_to_points(
    op: DiscreteOperator, vectors: np.ndarray, points: np.ndarray, chunk: int = 8
) -> np.ndarray:
    """Adjoint of the weighted operator evaluated at arbitrary scene points.

    For each weighted measurement-space column v of `vectors` computes
    g(q) = sum_m conj(xi(pair_m, q)) * sqrt(row_weight_m) * v[m], the
    continuous adjoint image sampled at `points`.  Used to evaluate singular
    vectors and adjoint images on refined grids.

    Parameters
    ----------
    vectors : (n_rows,) or (n_rows, b) array
    points : (m, 2) scene points
    chunk : int
        Vectors processed per pass in the factored multistatic path, bounds
        the (n_points, N, chunk) temporary.

    Returns
    -------
    (m,) or (m, b) complex array
    """
    single = vectors.ndim == 1
    v = vectors[:, None] if single else vectors
    points = np.asarray(points, dtype=float)
    z_plane = op.array.aperture.z_plane
    k = op.wave.k

    if op.tx_factor is not None:
        n_tx = op.array.tx_positions.size
        n_rx = op.array.rx_positions.size
        et = _one_way_phases(op.array.tx_positions, points, z_plane, k).conj() \
            * math.sqrt(op.array.tx_weight)
        er = _one_way_phases(op.array.rx_positions, points, z_plane, k).conj() \
            * math.sqrt(op.array.rx_weight)
        out = np.empty((points.shape[0], v.shape[1]), dtype=complex)
        for j0 in range(0, v.shape[1], chunk):
            vv = v[:, j0:j0 + chunk].reshape(n_tx, n_rx, -1)
            # g(q, b) = sum_ij et[i, q] er[j, q] vv[i, j, b]
            t = np.einsum("iq,ijb->qjb", et, vv)
            out[:, j0:j0 + chunk] = np.einsum("qjb,jq->qb", t, er)
    else:
        kern = _one_way_phases(op.pair_positions[:, 0], points, z_plane, k) \
            * _one_way_phases(op.pair_positions[:, 1], points, z_plane, k)
        kern *= np.sqrt(op.row_weights)[:, None]
        out = kern.conj().T @ v
    return out[:, 0] if single else out
