import hypothesis
import numpy as np
import pytest
import scipy.sparse.linalg as sla

from prolate_superres.basis import BasisConfig, build_basis
from prolate_superres.imaging import double_gaussian_object

hypothesis.settings.register_profile("default", max_examples=25, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.load_profile("default")


def sinc_nystrom(c, n):
    """Plain symmetrized sinc-kernel matrix W^1/2 K W^1/2 and its GL rule.

    Independent of the parity-split solver used by build_basis.
    """
    x, w = np.polynomial.legendre.leggauss(n) if n <= 1024 else _scipy_gl(n)
    sw = np.sqrt(w)
    d = np.subtract.outer(x, x)
    safe = np.where(d == 0, 1.0, d)
    K = np.where(d == 0, c / np.pi, np.sin(c * d) / (np.pi * safe))
    return x, w, sw[:, None] * K * sw[None, :]


def _scipy_gl(n):
    from scipy.special import roots_legendre

    return roots_legendre(n)


def oracle_eigenvalues(c, n, top):
    """Largest ``top`` eigenvalues of the plain Nystrom matrix, descending."""
    _, _, M = sinc_nystrom(c, n)
    if top <= 8 and n > 1024:
        vals = sla.eigsh(M, k=top, which="LA", tol=1e-15)[0]
    else:
        vals = np.linalg.eigvalsh(M)[-top:]
    return np.sort(vals)[::-1]


@pytest.fixture(scope="session")
def basis():
    return build_basis(BasisConfig(c=1.0, grid_size=512, num_modes=8))


@pytest.fixture(scope="session")
def basis6():
    return build_basis(BasisConfig(c=1.0, grid_size=512, num_modes=6))


@pytest.fixture(scope="session")
def dg_object(basis6):
    return double_gaussian_object(basis6, 0.5, 0.1)
