"""
Shared fixtures and random-instance factories.

Instances are built from orthogonal similarity transforms of block-diagonal
matrices so eigenvalue locations (and hence arc clearance) are controlled and
eigenvector matrices stay well conditioned.
"""
import math

import numpy as np
import pytest
from scipy.linalg import block_diag

from bandnorm.models.schemas import DescriptorPair, QuadratureConfig, StateSpace


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def quad_cfg():
    return QuadratureConfig(rel_tol=1e-12, abs_tol=1e-14)


def orthogonal(rng, n):
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


def random_radius(rng, inside=True):
    if inside:
        return rng.uniform(0.2, 0.7)
    return rng.uniform(1.5, 2.5)


def block_diagonal(rng, n, inside_fraction=1.0):
    """Real n x n block-diagonal matrix of 2x2 rotation-scalings and 1x1 reals."""
    A = np.zeros((n, n))
    i = 0
    while i < n:
        inside = rng.uniform() < inside_fraction
        r = random_radius(rng, inside)
        if i + 1 < n and rng.uniform() < 0.5:
            phi = rng.uniform(0.2, math.pi - 0.2)
            c, s = r * math.cos(phi), r * math.sin(phi)
            A[i:i + 2, i:i + 2] = [[c, -s], [s, c]]
            i += 2
        else:
            A[i, i] = r if rng.uniform() < 0.5 else -r
            i += 1
    return A


def random_state_space(rng, n, m=1, p=1, inside_fraction=1.0, feedthrough=False):
    V = orthogonal(rng, n)
    A = V @ block_diagonal(rng, n, inside_fraction) @ V.T
    B = rng.standard_normal((n, m))
    C = rng.standard_normal((p, n))
    D = rng.standard_normal((p, m)) if feedthrough else np.zeros((p, m))
    return StateSpace(A=A, B=B, C=C, D=D)


def random_pencil(rng, n, kind="regular", inside_fraction=0.5):
    """
    Random real regular pencil (E, A) = U (E0, A0) V^T with n >= 3.

    kind:
        "regular"      E invertible
        "singular_e"   E has a zero block paired with an identity block of A
        "nilpotent"    A has a nilpotent block (eigenvalue 0)
        "both"         E and A both singular
    """
    k = {"regular": 0, "singular_e": max(1, n // 3), "nilpotent": max(2, n // 2), "both": 2}[kind]
    r = n - k
    S = np.diag(rng.uniform(0.5, 2.0, r))
    F = S @ block_diagonal(rng, r, inside_fraction)
    if kind == "regular":
        E0, A0 = S, F
    elif kind == "singular_e":
        E0, A0 = block_diag(S, np.zeros((k, k))), block_diag(F, np.eye(k))
    elif kind == "nilpotent":
        E0, A0 = block_diag(S, np.eye(k)), block_diag(F, np.diag(np.ones(k - 1), 1))
    else:
        E0, A0 = block_diag(S, np.diag([1.0, 0.0])), block_diag(F, np.diag([0.0, 1.0]))
    U = orthogonal(rng, n)
    Vt = orthogonal(rng, n)
    return DescriptorPair(E=U @ E0 @ Vt, A=U @ A0 @ Vt)


def random_band(rng, low=-math.pi + 0.05, high=math.pi - 0.05):
    a, b = sorted(rng.uniform(low, high, 2))
    return a, b


def relative_error(value, reference):
    value = np.asarray(value)
    reference = np.asarray(reference)
    return float(np.max(np.abs(value - reference)) / max(float(np.max(np.abs(reference))), 1e-300))
