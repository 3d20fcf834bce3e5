"""imjet: inertial-manifold graphs, Taylor jets along them, and smooth
extended inertial forms for Galerkin-truncated semilinear parabolic systems."""

__version__ = "0.1.0"

from ._kernels import BACKEND as KERNEL_BACKEND

__all__ = ["KERNEL_BACKEND", "__version__"]
