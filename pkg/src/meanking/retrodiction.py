"""Alice's side of the retrodiction game.

She prepares a maximally entangled pair, receives Bob's post-measurement
system back, and measures a POVM whose outcomes are guessing functions:
assignments x with one outcome x(b) for every basis b. The POVM elements
are weighted projectors onto safe vectors eta_x, fixed by the condition

    <eta_x | phi_hat_b(i)> = delta(x(b), i)   for all b, i,

where phi_hat_b(i) is Alice's (unnormalized) conditional state after Bob
measured outcome i in basis b. A measurement supported on safe vectors
never produces a wrong guess; the weights come from an LP enforcing POVM
completeness with every weight strictly positive (a maximal strategy).

All indices in this module are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import qmath
from .bases import Basis, BasisSet
from .serialize import complex_to_pairs, pairs_to_complex, read_json, write_json

MAX_PRODUCT_DIM = 4096  # densest object handled: operators on d**(2n)


class ResidualTooLarge(RuntimeError):
    """The safe-vector system is inconsistent for this basis set."""


class NotMaximal(RuntimeError):
    """POVM weights exist but some guessing function gets weight zero."""


class Infeasible(RuntimeError):
    """No nonnegative weights satisfy the completeness condition."""


def enumerate_guessing_functions(d: int, k: int | None = None):
    """All k-tuples with entries in 0..d-1, first slot slowest."""
    if k is None:
        k = d + 1
    return product(range(d), repeat=k)


def guessing_index(x, d: int) -> int:
    """Position of x in the enumeration order (base-d digits)."""
    idx = 0
    for v in x:
        idx = idx * d + int(v)
    return idx


def omega(d: int) -> np.ndarray:
    """The standard maximally entangled state (1/sqrt(d)) sum_i |ii>."""
    if d < 2:
        raise ValueError("entangled pair needs dimension >= 2")
    v = np.zeros(d * d, dtype=complex)
    v[np.arange(d) * (d + 1)] = 1.0 / np.sqrt(d)
    return v


def phi_hat(bs: BasisSet, b: int, i: int, omega_vec: np.ndarray | None = None) -> np.ndarray:
    """Alice's unnormalized conditional state (1 x |phi><phi|) Omega.

    Its squared norm is 1/d for the standard maximally entangled source.
    """
    d = bs.dim
    if not (0 <= b < bs.k and 0 <= i < d):
        raise IndexError(f"basis {b} / outcome {i} out of range")
    if omega_vec is None:
        omega_vec = omega(d)
    phi = bs.vector(b, i)
    proj = np.outer(phi, phi.conj())
    return (omega_vec.reshape(d, d) @ proj.T).reshape(-1)


@dataclass
class SafeVector:
    x: tuple
    eta: np.ndarray
    residual: float


def solve_safe_vector(
    bs: BasisSet,
    x,
    omega_vec: np.ndarray | None = None,
    residual_tol: float = 1e-8,
) -> SafeVector:
    """Minimum-norm solution of the safe-vector conditions for one x.

    Stacks the k*d complex constraints <eta|phi_hat_b(i)> = delta(x(b), i)
    and solves by least squares (in the conjugated unknown, which makes the
    system linear). A residual above ``residual_tol`` means the basis set
    admits no safe vector for this guessing function, which contradicts
    non-degeneracy plus a classical model and therefore flags bad input.
    """
    d, k = bs.dim, bs.k
    x = tuple(int(v) for v in x)
    if len(x) != k or any(v < 0 or v >= d for v in x):
        raise ValueError(f"guessing function {x} invalid for k={k}, d={d}")
    a = np.empty((k * d, d * d), dtype=complex)
    rhs = np.zeros(k * d, dtype=complex)
    for b in range(k):
        for i in range(d):
            a[b * d + i] = phi_hat(bs, b, i, omega_vec)
            if x[b] == i:
                rhs[b * d + i] = 1.0
    y, residual = qmath.lstsq(a, rhs)
    if residual > residual_tol:
        raise ResidualTooLarge(
            f"safe vector for x={x} has residual {residual:.3e} > {residual_tol:.1e}"
        )
    return SafeVector(x=x, eta=y.conj(), residual=residual)


def decomposition_triple(x, b_prime: int, b_tilde: int, j_prime: int, j_tilde: int):
    """The three guessing functions with eta_x = eta_u + eta_v - eta_w.

    u agrees with x except u(b') = j', v except v(b~) = j~, and w differs
    in both slots. Requires b' != b~, j' != x(b') and j~ != x(b~).
    """
    x = tuple(int(v) for v in x)
    if b_prime == b_tilde:
        raise ValueError("the two bases must differ")
    if not (0 <= b_prime < len(x) and 0 <= b_tilde < len(x)):
        raise ValueError("basis index out of range")
    if j_prime == x[b_prime]:
        raise ValueError("j' must differ from x(b')")
    if j_tilde == x[b_tilde]:
        raise ValueError("j~ must differ from x(b~)")
    u = list(x)
    v = list(x)
    w = list(x)
    u[b_prime] = j_prime
    v[b_tilde] = j_tilde
    w[b_prime] = j_prime
    w[b_tilde] = j_tilde
    return tuple(u), tuple(v), tuple(w)


def solve_povm_weights(safe_vectors, positivity_tol: float = 1e-9) -> np.ndarray:
    """Weights p(x) >= 0 with sum_x p(x) |eta_x><eta_x| = identity.

    The operator equation is expressed in real Hermitian coordinates,
    rank-reduced by SVD (the stack is highly redundant), and handed to the
    LP with objective "maximize the smallest weight". Raises
    :class:`Infeasible` when no nonnegative solution exists and
    :class:`NotMaximal` when solutions exist but force some weight to zero.
    """
    etas = np.asarray([sv.eta for sv in safe_vectors])
    nx, dim2 = etas.shape
    coords = np.empty((dim2 * dim2, nx))
    for j in range(nx):
        coords[:, j] = qmath.hermitian_coords(np.outer(etas[j], etas[j].conj()))
    target = qmath.hermitian_coords(np.eye(dim2))

    u, s, _ = np.linalg.svd(coords, full_matrices=False)
    rank = int(np.sum(s > 1e-12 * s[0]))
    basis = u[:, :rank]
    reduced = basis.T @ coords
    rhs = basis.T @ target
    if np.linalg.norm(basis @ rhs - target) > 1e-8:
        raise Infeasible("identity lies outside the span of the safe-vector projectors")

    feasible, point = qmath.lp_feasible(reduced, rhs, np.zeros(nx), maximize_min_of=range(nx))
    if not feasible:
        raise Infeasible("no nonnegative weights complete the POVM")
    if float(point.min()) <= positivity_tol:
        raise NotMaximal(
            f"completeness forces a weight down to {point.min():.3e}; strategy not maximal"
        )
    return point


@dataclass
class Strategy:
    """A maximal strategy: source state, safe vectors and POVM weights."""

    basis_set: BasisSet
    omega: np.ndarray
    safe_vectors: tuple
    weights: np.ndarray
    completeness_residual: float
    _index: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.safe_vectors = tuple(self.safe_vectors)
        self.weights = np.asarray(self.weights, dtype=float)
        self._index = {sv.x: pos for pos, sv in enumerate(self.safe_vectors)}

    @property
    def d(self) -> int:
        return self.basis_set.dim

    @property
    def guessing_functions(self):
        return tuple(sv.x for sv in self.safe_vectors)

    @property
    def etas(self) -> np.ndarray:
        return np.asarray([sv.eta for sv in self.safe_vectors])

    def safe_vector(self, x) -> SafeVector:
        return self.safe_vectors[self._index[tuple(x)]]

    def weight(self, x) -> float:
        return float(self.weights[self._index[tuple(x)]])


def build_strategy(bs: BasisSet, residual_tol: float = 1e-8) -> Strategy:
    """Solve every safe vector and the weight LP for a full basis set."""
    d = bs.dim
    svs = [solve_safe_vector(bs, x, residual_tol=residual_tol)
           for x in enumerate_guessing_functions(d, bs.k)]
    weights = solve_povm_weights(svs)
    etas = np.asarray([sv.eta for sv in svs])
    total = (etas.T * weights) @ etas.conj()
    residual = float(np.max(np.abs(total - np.eye(d * d))))
    if residual > 1e-8:
        raise Infeasible(f"POVM completeness residual {residual:.3e} after solve")
    return Strategy(
        basis_set=bs,
        omega=omega(d),
        safe_vectors=tuple(svs),
        weights=weights,
        completeness_residual=residual,
    )


def _interleaved_to_grouped_axes(n: int):
    return list(range(0, 2 * n, 2)) + list(range(1, 2 * n, 2))


@dataclass
class ProductStrategy:
    """n independent runs of a base strategy, viewed as one big game.

    Safe product vectors and weights are exposed through indexed accessors
    rather than materialized tables; ``safe_vector`` returns the natural
    pair-interleaved order (A1 B1 A2 B2 ...) while ``safe_vector_grouped``
    regroups to (A1..An B1..Bn), the layout the attack analysis uses.
    """

    base: Strategy
    n: int

    def __post_init__(self):
        d = self.base.d
        if self.n < 1:
            raise ValueError("block length must be >= 1")
        if d ** (2 * self.n) > MAX_PRODUCT_DIM:
            raise ValueError(
                f"d**(2n) = {d ** (2 * self.n)} exceeds the dense budget {MAX_PRODUCT_DIM}"
            )

    @property
    def d(self) -> int:
        return self.base.d

    def guessing_tuples(self):
        return product(self.base.guessing_functions, repeat=self.n)

    def weight(self, xs) -> float:
        w = 1.0
        for x in xs:
            w *= self.base.weight(x)
        return w

    def safe_vector(self, xs) -> np.ndarray:
        return qmath.tensor(*[self.base.safe_vector(x).eta for x in xs])

    def safe_vector_grouped(self, xs) -> np.ndarray:
        v = self.safe_vector(xs)
        if self.n == 1:
            return v
        return qmath.permute_factors(
            v, (self.d, self.d) * self.n, _interleaved_to_grouped_axes(self.n)
        )


def tensor_strategy(s: Strategy, n: int) -> ProductStrategy:
    return ProductStrategy(base=s, n=n)


def save_strategy(s: Strategy, path) -> None:
    entries = [
        {
            "x": [int(v) for v in sv.x],
            "eta": complex_to_pairs(sv.eta),
            "p": float(s.weights[pos]),
            "residual": float(sv.residual),
        }
        for pos, sv in enumerate(s.safe_vectors)
    ]
    write_json(
        path,
        {
            "dim": s.basis_set.dim,
            "bases": [complex_to_pairs(b.vectors) for b in s.basis_set.bases],
            "omega": complex_to_pairs(s.omega),
            "entries": entries,
        },
    )


def load_strategy(path) -> Strategy:
    data = read_json(path)
    dim = int(data["dim"])
    bs = BasisSet(
        dim=dim,
        bases=tuple(
            Basis(label=b, vectors=pairs_to_complex(entry))
            for b, entry in enumerate(data["bases"])
        ),
    )
    omega_vec = pairs_to_complex(data["omega"])
    svs = []
    weights = []
    for entry in data["entries"]:
        svs.append(
            SafeVector(
                x=tuple(int(v) for v in entry["x"]),
                eta=pairs_to_complex(entry["eta"]),
                residual=float(entry["residual"]),
            )
        )
        weights.append(float(entry["p"]))
    weights = np.asarray(weights)
    etas = np.asarray([sv.eta for sv in svs])
    total = (etas.T * weights) @ etas.conj()
    residual = float(np.max(np.abs(total - np.eye(dim * dim))))
    if residual > 1e-8:
        raise Infeasible(f"stored strategy violates completeness by {residual:.3e}")
    return Strategy(
        basis_set=bs,
        omega=omega_vec,
        safe_vectors=tuple(svs),
        weights=weights,
        completeness_residual=residual,
    )
