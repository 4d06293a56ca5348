"""Mutually unbiased bases for prime dimensions and basis-set validation.

A basis set is k orthonormal bases of a d-dimensional complex space. The
retrodiction game is winnable whenever the set is non-degenerate (the d*k
rank-one projectors span a k(d-1)+1 dimensional real space) and the pairwise
outcome statistics admit a classical joint model. d+1 mutually unbiased
bases satisfy both; this module generates them for prime d and checks the
conditions numerically for any supplied set.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
import scipy.sparse

from . import qmath
from .serialize import complex_to_pairs, pairs_to_complex, read_json, write_json

SUPPORTED_GEN_DIMS = (2, 3, 5, 7)
MAX_VALIDATE_DIM = 16

# beyond this many LP variables the classical-model solve falls back to
# direct verification of the uniform candidate (d**k grows fast)
_LP_VAR_GUARD = 200_000


class UnsupportedDimension(ValueError):
    """Basis generation asked for a dimension outside the supported set."""


class FormatError(ValueError):
    """A basis-set file does not match the expected JSON layout."""


@dataclass
class Basis:
    """One orthonormal basis: ``vectors[i]`` is the i-th basis vector."""

    label: int
    vectors: np.ndarray  # shape (d, d), complex

    def __post_init__(self):
        self.vectors = np.asarray(self.vectors, dtype=complex)
        if self.vectors.ndim != 2 or self.vectors.shape[0] != self.vectors.shape[1]:
            raise ValueError("a basis must be a square array of vectors")


@dataclass
class BasisSet:
    dim: int
    bases: tuple

    def __post_init__(self):
        self.bases = tuple(self.bases)
        if not self.bases:
            raise ValueError("a basis set needs at least one basis")
        for basis in self.bases:
            if basis.vectors.shape != (self.dim, self.dim):
                raise ValueError("all bases must share the set dimension")

    @property
    def k(self) -> int:
        return len(self.bases)

    def vector(self, b: int, i: int) -> np.ndarray:
        return self.bases[b].vectors[i]


@dataclass
class ValidationReport:
    orthonormal: bool
    unbiased: bool
    nondegenerate: bool
    span_rank: int
    classical_model: bool
    worst_violation: float

    def to_dict(self) -> dict:
        return {
            "orthonormal": self.orthonormal,
            "unbiased": self.unbiased,
            "nondegenerate": self.nondegenerate,
            "span_rank": self.span_rank,
            "classical_model": self.classical_model,
            "worst_violation": self.worst_violation,
        }


def gen_mub(d: int) -> BasisSet:
    """Generate d+1 mutually unbiased bases for prime d.

    For odd prime d the construction is the computational basis plus the d
    quadratic-phase bases with components omega**(a*s*s + i*s) / sqrt(d),
    omega = exp(2*pi*1j/d). For d = 2 those phases degenerate, so the three
    Pauli eigenbases (of Z, X and XZ) are used instead.
    """
    if d not in SUPPORTED_GEN_DIMS:
        raise UnsupportedDimension(
            f"unsupported dimension {d}; supported: {SUPPORTED_GEN_DIMS}"
        )
    if d == 2:
        s = 1.0 / np.sqrt(2.0)
        mats = [
            np.eye(2, dtype=complex),
            np.array([[s, s], [s, -s]], dtype=complex),
            np.array([[s, 1j * s], [s, -1j * s]], dtype=complex),
        ]
        return BasisSet(dim=2, bases=tuple(Basis(b, m) for b, m in enumerate(mats)))

    omega = np.exp(2j * np.pi / d)
    s = np.arange(d)
    mats = [np.eye(d, dtype=complex)]
    for a in range(d):
        vecs = np.empty((d, d), dtype=complex)
        for i in range(d):
            vecs[i] = omega ** ((a * s * s + i * s) % d) / np.sqrt(d)
        mats.append(vecs)
    return BasisSet(dim=d, bases=tuple(Basis(b, m) for b, m in enumerate(mats)))


def check_orthonormal(bs: BasisSet, tol: float = qmath.DEFAULT_TOL):
    """Max-norm deviation of every per-basis Gram matrix from the identity."""
    worst = 0.0
    eye = np.eye(bs.dim)
    for basis in bs.bases:
        gram = basis.vectors.conj() @ basis.vectors.T
        worst = max(worst, float(np.max(np.abs(gram - eye))))
    return worst <= tol, worst


def check_unbiased(bs: BasisSet, tol: float = qmath.DEFAULT_TOL):
    """Worst deviation of cross-basis squared overlaps from 1/d."""
    d = bs.dim
    worst = 0.0
    for a, b in combinations(range(bs.k), 2):
        ov = np.abs(bs.bases[a].vectors.conj() @ bs.bases[b].vectors.T) ** 2
        worst = max(worst, float(np.max(np.abs(ov - 1.0 / d))))
    return worst <= tol, worst


def check_nondegenerate(bs: BasisSet, tol: float = qmath.DEFAULT_TOL):
    """Real-linear rank of the k*d rank-one projectors; ok iff k(d-1)+1."""
    d, k = bs.dim, bs.k
    coords = np.empty((k * d, d * d))
    for b, basis in enumerate(bs.bases):
        for i in range(d):
            v = basis.vectors[i]
            coords[b * d + i] = qmath.hermitian_coords(np.outer(v, v.conj()))
    rank = qmath.matrix_rank(coords, tol)
    return rank == k * (d - 1) + 1, rank


def pairwise_joint(bs: BasisSet, a: int, b: int) -> np.ndarray:
    """Joint outcome table for two bases measured on the shared source.

    Entry (i, j) is |<Phi_b(i)|Phi_a(j)>|^2 / d; rows and columns both sum
    to 1/d, the whole table to 1.
    """
    if a == b:
        raise ValueError("pairwise_joint needs two distinct bases")
    if not (0 <= a < bs.k and 0 <= b < bs.k):
        raise ValueError(f"basis index out of range (k={bs.k})")
    ov = bs.bases[b].vectors.conj() @ bs.bases[a].vectors.T
    return np.abs(ov) ** 2 / bs.dim


def check_classical_model(bs: BasisSet, tol: float = qmath.DEFAULT_TOL):
    """Feasibility of a joint distribution reproducing all pairwise tables.

    Solves the LP over d**k nonnegative variables q(j_1..j_k) whose pairwise
    marginals match :func:`pairwise_joint` and whose total mass is 1.
    Returns ``(feasible, witness)``; the witness is the flat distribution
    array (C-order over the k outcome indices) or None when infeasible.
    For sets too large for the LP the uniform distribution is tested
    directly and accepted only if every pairwise table is flat.
    """
    d, k = bs.dim, bs.k
    nvar = d**k
    if nvar > _LP_VAR_GUARD:
        flat = True
        for a, b in combinations(range(k), 2):
            if np.max(np.abs(pairwise_joint(bs, a, b) - 1.0 / d**2)) > tol:
                flat = False
                break
        if flat:
            return True, np.full(nvar, 1.0 / nvar)
        raise ValueError(
            f"classical-model LP with {nvar} variables exceeds the supported size"
        )

    shape = (d,) * k
    flat_index = np.arange(nvar).reshape(shape)
    rows = []
    cols = []
    rhs = []
    row = 0
    for a, b in combinations(range(k), 2):
        # P(var_a = alpha, var_b = beta) must equal the Born-rule table
        table = pairwise_joint(bs, b, a)
        for alpha in range(d):
            for beta in range(d):
                sl = [slice(None)] * k
                sl[a] = alpha
                sl[b] = beta
                members = flat_index[tuple(sl)].ravel()
                rows.extend([row] * members.size)
                cols.extend(members.tolist())
                rhs.append(float(table[alpha, beta]))
                row += 1
    rows.extend([row] * nvar)
    cols.extend(range(nvar))
    rhs.append(1.0)
    row += 1
    data = np.ones(len(rows))
    a_eq = scipy.sparse.csr_matrix((data, (rows, cols)), shape=(row, nvar))
    # floating-point marginals need slack; absorbed by the solver
    feasible, point = qmath.lp_feasible(
        a_eq, np.array(rhs), np.zeros(nvar), feasibility_tol=max(tol, 1e-9)
    )
    return feasible, point


def validate(bs: BasisSet, tol: float = qmath.DEFAULT_TOL) -> ValidationReport:
    """Run all structural checks and collect them into one report."""
    if bs.dim > MAX_VALIDATE_DIM:
        raise UnsupportedDimension(f"validation supports d <= {MAX_VALIDATE_DIM}")
    orth_ok, orth_worst = check_orthonormal(bs, tol)
    unb_ok, unb_worst = check_unbiased(bs, max(tol, 1e-10))
    nondeg_ok, rank = check_nondegenerate(bs, tol)
    classical_ok, _ = check_classical_model(bs, max(tol, 1e-9))
    return ValidationReport(
        orthonormal=orth_ok,
        unbiased=unb_ok,
        nondegenerate=nondeg_ok,
        span_rank=rank,
        classical_model=bool(classical_ok),
        worst_violation=max(orth_worst, unb_worst),
    )


def save_basis_set(bs: BasisSet, path) -> None:
    write_json(
        path,
        {
            "dim": bs.dim,
            "bases": [complex_to_pairs(basis.vectors) for basis in bs.bases],
        },
    )


def load_basis_set(path) -> BasisSet:
    data = read_json(path)
    try:
        dim = int(data["dim"])
        raw = data["bases"]
        bases = []
        for b, entry in enumerate(raw):
            vecs = pairs_to_complex(entry)
            if vecs.shape != (dim, dim):
                raise ValueError(f"basis {b} has shape {vecs.shape}, expected {(dim, dim)}")
            bases.append(Basis(label=b, vectors=vecs))
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise FormatError(f"bad basis-set file {path}: {exc}") from exc
    return BasisSet(dim=dim, bases=tuple(bases))
