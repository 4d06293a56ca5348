"""Dense complex linear-algebra kernels shared by the rest of the package.

Conventions: state vectors are 1-D complex128 arrays, operators are 2-D
arrays, and composite systems use row-major Kronecker order (the first
factor is the slow index). Rank decisions use a relative singular-value
cutoff; everything else is an absolute tolerance defaulting to 1e-9.
All functions are pure and never mutate their arguments.
"""

from __future__ import annotations

from math import prod

import numpy as np
import scipy.sparse
from scipy.optimize import linprog

DEFAULT_TOL = 1e-9

# HiGHS default feasibility tolerances (1e-7) are looser than the 1e-9
# constraint satisfaction promised to callers; pin them at their minimum.
_LP_OPTIONS = {
    "primal_feasibility_tolerance": 1e-10,
    "dual_feasibility_tolerance": 1e-10,
}


def tensor(*factors: np.ndarray) -> np.ndarray:
    """Kronecker product of matrices (or vectors), first factor slowest."""
    if not factors:
        raise ValueError("tensor() needs at least one factor")
    out = np.asarray(factors[0], dtype=complex)
    for f in factors[1:]:
        out = np.kron(out, np.asarray(f, dtype=complex))
    return out


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(a).conj().T


def permute_factors(v: np.ndarray, dims, perm) -> np.ndarray:
    """Reorder the tensor factors of a state vector.

    ``dims`` are the factor dimensions of ``v`` in its current order and
    ``perm[i]`` names the old factor that moves to position ``i``.
    """
    v = np.asarray(v)
    dims = tuple(int(x) for x in dims)
    if v.size != prod(dims):
        raise ValueError(f"vector of size {v.size} does not factor as {dims}")
    return v.reshape(dims).transpose(perm).reshape(-1)


def partial_trace(rho: np.ndarray, dims, keep) -> np.ndarray:
    """Trace out all factors not listed in ``keep``.

    Parameters
    ----------
    rho : square matrix on the composite space described by ``dims``.
    dims : factor dimensions, slow index first.
    keep : int or iterable of factor indices to retain (original order).
    """
    rho = np.asarray(rho, dtype=complex)
    dims = tuple(int(x) for x in dims)
    total = prod(dims)
    if rho.shape != (total, total):
        raise ValueError(f"matrix shape {rho.shape} does not match factor dims {dims}")
    if isinstance(keep, (int, np.integer)):
        keep = (int(keep),)
    keep = sorted(set(int(x) for x in keep))
    if any(x < 0 or x >= len(dims) for x in keep):
        raise ValueError(f"keep indices {keep} out of range for {len(dims)} factors")
    nfac = len(dims)
    t = rho.reshape(dims + dims)
    dropped = [ax for ax in range(nfac) if ax not in keep]
    for removed, ax in enumerate(dropped):
        a = ax - removed
        t = np.trace(t, axis1=a, axis2=a + nfac - removed)
    kept_dim = prod(dims[i] for i in keep) if keep else 1
    return t.reshape(kept_dim, kept_dim)


def matrix_rank(a: np.ndarray, tol: float = DEFAULT_TOL) -> int:
    """Rank with a relative cutoff: singular values > tol * sigma_max count."""
    s = np.linalg.svd(np.asarray(a, dtype=complex), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def nullspace(a: np.ndarray, tol: float = DEFAULT_TOL):
    """Right nullspace of a matrix.

    Returns ``(dimension, basis)`` where ``basis`` rows are orthonormal
    vectors spanning the subspace of x with ``a @ x ~ 0``; the dimension
    counts singular values at or below ``tol * sigma_max`` (columns beyond
    the row count included).
    """
    a = np.asarray(a, dtype=complex)
    m, n = a.shape
    _, s, vh = np.linalg.svd(a, full_matrices=(m < n))
    if s.size == 0 or s[0] == 0.0:
        rank = 0
    else:
        rank = int(np.sum(s > tol * s[0]))
    return n - rank, vh[rank:].conj()


def lstsq(a: np.ndarray, b: np.ndarray):
    """Minimum-norm least-squares solution of ``a @ x = b``.

    Returns ``(x, residual)`` with residual the 2-norm of ``a @ x - b``.
    Among all minimizers, x has minimum norm (and is therefore orthogonal
    to the nullspace of ``a``).
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"{a.shape[0]} rows vs right-hand side of length {b.shape[0]}")
    x, _, _, _ = np.linalg.lstsq(a, b, rcond=None)
    residual = float(np.linalg.norm(a @ x - b))
    return x, residual


def hermitian_coords(h: np.ndarray) -> np.ndarray:
    """Real coordinates of a Hermitian matrix.

    The map is a real-linear isometry onto R^(n^2) (diagonal, then scaled
    real and imaginary parts of the upper triangle), so real-linear rank
    and inner products of Hermitian families are preserved.
    """
    h = np.asarray(h, dtype=complex)
    n = h.shape[0]
    iu = np.triu_indices(n, k=1)
    return np.concatenate(
        [np.diag(h).real, np.sqrt(2.0) * h[iu].real, np.sqrt(2.0) * h[iu].imag]
    )


def lp_feasible(a_eq, b_eq, lower_bounds, maximize_min_of=None, feasibility_tol=1e-10):
    """Feasibility (and optional max-min) solve for ``A p = b, p >= lb``.

    Parameters
    ----------
    a_eq : equality constraint matrix (dense or scipy sparse).
    b_eq : equality right-hand side.
    lower_bounds : per-variable lower bounds (no upper bounds).
    maximize_min_of : optional iterable of variable indices; when given,
        the solver maximizes ``min(p[i] for i in maximize_min_of)``.
    feasibility_tol : allowed constraint slack; callers with floating-point
        right-hand sides can widen it from the 1e-10 floor.

    Returns ``(feasible, point)``; infeasibility is a result, not an error.
    """
    sparse_in = scipy.sparse.issparse(a_eq)
    if not sparse_in:
        a_eq = np.atleast_2d(np.asarray(a_eq, dtype=float))
    b_eq = np.asarray(b_eq, dtype=float).ravel()
    lb = np.asarray(lower_bounds, dtype=float).ravel()
    m, n = a_eq.shape
    if b_eq.size != m or lb.size != n:
        raise ValueError("inconsistent LP shapes")
    options = dict(_LP_OPTIONS)
    options["primal_feasibility_tolerance"] = max(1e-10, float(feasibility_tol))

    idx = list(maximize_min_of) if maximize_min_of is not None else []
    if not idx:
        c = np.zeros(n)
        res = linprog(
            c,
            A_eq=a_eq,
            b_eq=b_eq,
            bounds=[(float(v), None) for v in lb],
            method="highs",
            options=options,
        )
        point = res.x
    else:
        # auxiliary variable t with t <= p[i] for the designated subset,
        # maximized; the subset variables keep their lower bounds
        c = np.zeros(n + 1)
        c[-1] = -1.0
        if sparse_in:
            a_eq2 = scipy.sparse.hstack(
                [a_eq, scipy.sparse.csr_matrix((m, 1))], format="csr"
            )
        else:
            a_eq2 = np.hstack([a_eq, np.zeros((m, 1))])
        a_ub = np.zeros((len(idx), n + 1))
        for r, j in enumerate(idx):
            a_ub[r, j] = -1.0
            a_ub[r, -1] = 1.0
        bounds = [(float(v), None) for v in lb] + [(None, None)]
        res = linprog(
            c,
            A_ub=a_ub,
            b_ub=np.zeros(len(idx)),
            A_eq=a_eq2,
            b_eq=b_eq,
            bounds=bounds,
            method="highs",
            options=options,
        )
        point = res.x[:-1] if res.x is not None else None

    if res.status == 0:
        return True, np.asarray(point, dtype=float)
    if res.status == 2:
        return False, None
    raise RuntimeError(f"LP solver failed (status {res.status}): {res.message}")
