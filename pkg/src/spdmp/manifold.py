"""Affine-invariant geometry of the SPD cone.

Every matrix function here goes through a symmetric eigendecomposition,
``A = U diag(w) U^T``, so inputs are validated once and results are exactly
symmetric by construction.  Matrices are plain ``numpy`` arrays; nothing is
mutated in place.
"""
from functools import lru_cache

import numpy as np

from .errors import AsymmetryError, DefinitenessError, DimensionMismatch, InvalidDimension

SYM_RTOL = 1e-12
PD_RTOL = 1e-10

MANDEL_CONVENTION = "diag-then-upper-colmajor-sqrt2"


def symmetrize(A):
    A = np.asarray(A, dtype=float)
    return 0.5 * (A + A.T)


def _as_square(A, name="matrix"):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise InvalidDimension(f"{name} must be a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise DefinitenessError(f"{name} has non-finite entries")
    return A


def check_symmetric(S, name="matrix"):
    """Validate symmetry and return ``S`` as a float array."""
    S = _as_square(S, name)
    scale = max(1.0, float(np.linalg.norm(S)))
    asym = float(np.max(np.abs(S - S.T)))
    if asym > SYM_RTOL * scale:
        raise AsymmetryError(f"{name} is not symmetric (max |A - A^T| = {asym:.3e})")
    return S


def _same_dim(*mats):
    m = mats[0].shape[0]
    for M in mats[1:]:
        if M.shape[0] != m:
            raise DimensionMismatch(f"dimension mismatch: {m} vs {M.shape[0]}")


def eigh_spd(A, name="matrix"):
    """Eigendecomposition of an SPD matrix with the relative definiteness floor.

    Raises
    ------
    DefinitenessError
        If the smallest eigenvalue is not above ``PD_RTOL * max eigenvalue``.
    """
    A = check_symmetric(A, name)
    w, U = np.linalg.eigh(symmetrize(A))
    if w[-1] <= 0.0 or w[0] <= PD_RTOL * w[-1]:
        raise DefinitenessError(
            f"{name} is not positive definite (min eigenvalue {w[0]:.3e}, max {w[-1]:.3e})",
            min_eigenvalue=float(w[0]),
        )
    return w, U


def is_spd(A):
    try:
        eigh_spd(A)
    except (DefinitenessError, AsymmetryError, InvalidDimension):
        return False
    return True


def _reconstruct(U, w):
    return symmetrize((U * w) @ U.T)


def _sqrt_pair(A, name="matrix"):
    w, U = eigh_spd(A, name)
    s = np.sqrt(w)
    return _reconstruct(U, s), _reconstruct(U, 1.0 / s)


def spd_sqrt(A):
    """Unique SPD square root of ``A``."""
    return _sqrt_pair(A)[0]


def spd_inv_sqrt(A):
    """Inverse of the SPD square root, ``A^{-1/2}``."""
    return _sqrt_pair(A)[1]


def logm_spd(A):
    """Principal matrix logarithm of an SPD matrix."""
    w, U = eigh_spd(A)
    return _reconstruct(U, np.log(w))


def expm_sym(S):
    """Matrix exponential of a symmetric matrix."""
    S = check_symmetric(S)
    w, U = np.linalg.eigh(symmetrize(S))
    return _reconstruct(U, np.exp(w))


def _congruence(B, M):
    return symmetrize(B @ M @ B)


def log_map(base, Q):
    """Riemannian logarithm: tangent vector at ``base`` pointing to ``Q``.

    ``base^{1/2} logm(base^{-1/2} Q base^{-1/2}) base^{1/2}``
    """
    base = _as_square(base, "base")
    Q = _as_square(Q, "Q")
    _same_dim(base, Q)
    check_symmetric(Q, "Q")
    root, inv_root = _sqrt_pair(base, "base")
    inner = _congruence(inv_root, Q)
    return _congruence(root, logm_spd(inner))


def exp_map(base, delta):
    """Riemannian exponential: follow the geodesic from ``base`` along ``delta``."""
    base = _as_square(base, "base")
    delta = _as_square(delta, "delta")
    _same_dim(base, delta)
    check_symmetric(delta, "delta")
    root, inv_root = _sqrt_pair(base, "base")
    inner = _congruence(inv_root, delta)
    return _congruence(root, expm_sym(inner))


def transport_matrix(src, dst):
    """``C = (dst src^{-1})^{1/2}``, evaluated through symmetric factors only."""
    src = _as_square(src, "src")
    dst = _as_square(dst, "dst")
    _same_dim(src, dst)
    root, inv_root = _sqrt_pair(src, "src")
    inner = _congruence(inv_root, dst)
    return root @ spd_sqrt(inner) @ inv_root


def parallel_transport(src, dst, V):
    """Carry the tangent vector ``V`` from ``T_src`` to ``T_dst`` along the geodesic."""
    V = check_symmetric(_as_square(V, "V"), "V")
    C = transport_matrix(src, dst)
    _same_dim(C, V)
    return symmetrize(C @ V @ C.T)


def geodesic(A, B, t):
    """Point at fraction ``t`` of the geodesic from ``A`` to ``B``."""
    if t == 0:
        return np.array(A, dtype=float)
    if t == 1:
        return np.array(B, dtype=float)
    return exp_map(A, t * log_map(A, B))


def inner_product(base, V, W):
    """Affine-invariant inner product ``tr(base^-1 V base^-1 W)``."""
    Binv = np.linalg.inv(base)
    return float(np.trace(Binv @ V @ Binv @ W))


@lru_cache(maxsize=None)
def _mandel_indices(m):
    upper = [(i, j) for j in range(m) for i in range(j)]
    upper.reverse()
    rows = np.array(list(range(m)) + [i for i, _ in upper], dtype=int)
    cols = np.array(list(range(m)) + [j for _, j in upper], dtype=int)
    scale = np.ones(rows.size)
    scale[m:] = np.sqrt(2.0)
    for a in (rows, cols, scale):
        a.setflags(write=False)
    return rows, cols, scale


def mandel_dim(m):
    return m * (m + 1) // 2


def matrix_dim(n):
    """Inverse of :func:`mandel_dim`; raises if ``n`` is not triangular."""
    n = int(n)
    m = int(round((np.sqrt(8 * n + 1) - 1) / 2))
    if n < 1 or mandel_dim(m) != n:
        raise InvalidDimension(f"vector length {n} is not m(m+1)/2 for an integer m")
    return m


def mandel_vec(S):
    """Isometric vectorization of a symmetric matrix.

    Diagonal entries first, then off-diagonal entries scaled by ``sqrt(2)``.
    For ``m = 3`` the order is ``(S11, S22, S33, S23, S13, S12)``.
    """
    S = check_symmetric(_as_square(S, "S"), "S")
    rows, cols, scale = _mandel_indices(S.shape[0])
    return S[rows, cols] * scale


def mandel_mat(v):
    """Inverse of :func:`mandel_vec`."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise InvalidDimension(f"expected a 1-D vector, got shape {v.shape}")
    m = matrix_dim(v.size)
    rows, cols, scale = _mandel_indices(m)
    S = np.zeros((m, m))
    vals = v / scale
    S[rows, cols] = vals
    S[cols, rows] = vals
    return S
