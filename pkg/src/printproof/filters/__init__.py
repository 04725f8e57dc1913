from .ela import ela_map
from .lga import lga_map
from .noise import noise_map
from .params import ElaParams, LgaParams, NoiseParams, PcaParams
from .pca import PcaBasis, pca_basis, pca_map

__all__ = [
    "ElaParams", "LgaParams", "NoiseParams", "PcaParams",
    "PcaBasis", "ela_map", "lga_map", "noise_map", "pca_basis", "pca_map",
]
