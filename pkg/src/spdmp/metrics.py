"""Distances between SPD matrices used to score reproductions."""
import numpy as np

from .errors import DefinitenessError, DimensionMismatch
from .manifold import check_symmetric, eigh_spd, log_map, logm_spd, _as_square


def _pair(A, B):
    A = check_symmetric(_as_square(A, "A"), "A")
    B = check_symmetric(_as_square(B, "B"), "B")
    if A.shape != B.shape:
        raise DimensionMismatch(f"shapes differ: {A.shape} vs {B.shape}")
    return A, B


def log_euclidean_dist(A, B):
    """Frobenius distance between matrix logarithms, ``||logm(A) - logm(B)||_F``."""
    A, B = _pair(A, B)
    return float(np.linalg.norm(logm_spd(A) - logm_spd(B)))


def _logdet(A, name):
    # eigenvalue floor check first so Cholesky never sees a near-singular matrix
    eigh_spd(A, name)
    try:
        L = np.linalg.cholesky(A)
    except np.linalg.LinAlgError as exc:
        raise DefinitenessError(f"{name}: Cholesky factorization failed") from exc
    return 2.0 * float(np.sum(np.log(np.diag(L))))


def jbld_dist(A, B):
    """Jensen-Bregman LogDet distance.

    ``sqrt(logdet((A + B) / 2) - (logdet(A) + logdet(B)) / 2)``, with the
    radicand clamped at zero to absorb round-off for near-identical inputs.
    """
    A, B = _pair(A, B)
    value = _logdet(0.5 * (A + B), "(A+B)/2") - 0.5 * (_logdet(A, "A") + _logdet(B, "B"))
    return float(np.sqrt(max(value, 0.0)))


def _affine_invariant_dist(A, B):
    # test utility only; not part of the public metric set
    Delta = log_map(A, B)
    Ainv = np.linalg.inv(A)
    return float(np.sqrt(max(np.trace(Ainv @ Delta @ Ainv @ Delta), 0.0)))


METRICS = {
    "log-euclidean": log_euclidean_dist,
    "jbld": jbld_dist,
}


def distance_series(seq_a, seq_b, metric="log-euclidean"):
    """Pairwise distances between two equal-length sequences of SPD matrices."""
    if len(seq_a) != len(seq_b):
        raise DimensionMismatch(f"sequence lengths differ: {len(seq_a)} vs {len(seq_b)}")
    fn = METRICS[metric]
    return np.array([fn(a, b) for a, b in zip(seq_a, seq_b)])
