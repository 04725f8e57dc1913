"""Color-space principal component analysis over the pixel cloud.

Pixels are treated as points in [0,1]^3 RGB; the basis diagonalizes their
population covariance. Maps project each pixel onto a component or measure
its distance from the component's line through the mean.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import AnalysisMap, RasterImage, make_map, normalize_map
from .params import PcaParams

_ZERO_VARIANCE = 1e-12


@dataclass(frozen=True)
class PcaBasis:
    mean: np.ndarray         # (3,) RGB in [0,1]
    components: np.ndarray   # (3,3), rows are unit vectors, strongest first
    eigenvalues: np.ndarray  # (3,) descending, >= 0
    degenerate: bool = False

    def __post_init__(self):
        self.mean.setflags(write=False)
        self.components.setflags(write=False)
        self.eigenvalues.setflags(write=False)


def pca_basis(img: RasterImage) -> PcaBasis:
    """Mean, orthonormal axes and descending eigenvalues of the pixel cloud.

    An image whose pixels are all identical has zero covariance; it yields
    the canonical axes with zero eigenvalues and the degenerate flag set.
    """
    x = img.pixels.reshape(-1, 3).astype(np.float64) / 255.0
    mean = x.mean(axis=0)
    centered = x - mean
    cov = centered.T @ centered / x.shape[0]
    if float(np.trace(cov)) < _ZERO_VARIANCE:
        return PcaBasis(mean=mean, components=np.eye(3),
                        eigenvalues=np.zeros(3), degenerate=True)
    evals, evecs = np.linalg.eigh(cov)
    order = np.argsort(evals)[::-1]
    evals = np.clip(evals[order], 0.0, None)
    comps = evecs[:, order].T.copy()
    for k in range(3):
        j = int(np.argmax(np.abs(comps[k])))
        if comps[k, j] < 0:
            comps[k] = -comps[k]
    return PcaBasis(mean=mean, components=comps, eigenvalues=evals)


def pca_map(img: RasterImage, basis: PcaBasis, params: PcaParams | None = None) -> AnalysisMap:
    p = params or PcaParams()
    x = img.pixels.reshape(-1, 3).astype(np.float64) / 255.0
    centered = x - basis.mean
    v = basis.components[p.component - 1]
    proj = centered @ v
    if p.mode == "projection":
        lo, hi = float(proj.min()), float(proj.max())
        if hi - lo < _ZERO_VARIANCE:
            values = np.full(proj.shape, 0.5)  # zero-variance projection
        else:
            values = (proj - lo) / (hi - lo)
    else:
        residual = centered - np.outer(proj, v)
        dist = np.linalg.norm(residual, axis=1)
        if float(dist.max()) < _ZERO_VARIANCE:
            values = np.zeros_like(dist)  # the whole cloud sits on the line
        else:
            values = normalize_map(dist, mode="global_max")
    plane = values.reshape(img.height, img.width)
    return make_map(plane, p.kind, p.digest())
