"""Global numerical settings.

Rank decisions cut singular values below ``tol * max(sigma_max, 1)``, so a
matrix that is numerically zero has rank zero; residual checks compare
against ``tol`` on quantities of order one.  ``QCORR_TOL`` and ``QCORR_SEED`` override the
defaults at import time.
"""
import os

import numpy as np

DEFAULT_TOL = 1e-9
DEFAULT_SEED = 20240601

TOL = float(os.environ.get("QCORR_TOL", DEFAULT_TOL))
SEED = int(os.environ.get("QCORR_SEED", DEFAULT_SEED))


def get_tol(tol=None):
    return TOL if tol is None else float(tol)


def rng(seed=None):
    """A fresh generator; the same seed always reproduces the same draws."""
    return np.random.default_rng(SEED if seed is None else seed)
