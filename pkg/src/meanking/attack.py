"""Coherent eavesdropping on the two-way protocol.

Eve gets the strongest position the protocol leaves open: she supplies the
source as an arbitrary pure state Psi on A x B x E (A and B the d**n
dimensional block spaces, E her ancilla) and applies an arbitrary Kraus
channel to B x E while Bob's system travels back to Alice. Her effective
final system is (branch register) x E, i.e. she also keeps which Kraus
branch fired.

The analysis works with two equivalent computations of Alice's conditional
state: the direct pipeline (project Bob's factor, apply the feedback
channel, trace out Eve) and the operator form, where the source is expanded
in the maximally entangled basis generated by shift/clock unitaries and the
channel collapses into operators E_(l,k) acting on A x B with

    rho_A(b, i) = sum_(l,k)  E_(l,k) |phi_hat><phi_hat| E_(l,k)^dagger.

An attack is undetectable iff every E_(l,k) is a multiple of the identity,
and then Eve's final state cannot depend on (b, i): zero detection implies
zero leakage. Detection probability and leakage are computed by exact
enumeration, never by sampling.

Subsystem order is always A x B x E, row-major. All indices 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

import numpy as np
import scipy.linalg

from . import qmath
from .bases import BasisSet
from .retrodiction import Strategy, omega, tensor_strategy
from .serialize import complex_to_pairs, pairs_to_complex, read_json, write_json

MAX_ATTACK_DIM = 4096  # bound on d**(2n) * d_eve
_PROB_FLOOR = 1e-14  # below this an outcome cannot be conditioned on
_LEAKAGE_SKIP = 1e-12


class ZeroProbabilityOutcome(RuntimeError):
    """Conditioning on an outcome the attacked source never produces."""


@dataclass
class WeylOperator:
    """Generalized Pauli unitary X^m Z^l on a d-dimensional space."""

    d: int
    m: int
    l: int
    matrix: np.ndarray


def weyl(d: int, m: int, l: int) -> WeylOperator:
    """Shift/clock unitary: X cycles |j> -> |j+1>, Z phases |j> by omega^j."""
    if not (0 <= m < d and 0 <= l < d):
        raise ValueError(f"powers ({m},{l}) out of range for d={d}")
    x = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    z = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    mat = np.linalg.matrix_power(x, m) @ np.linalg.matrix_power(z, l)
    return WeylOperator(d=d, m=m, l=l, matrix=mat)


def weyl_block(d: int, mvec, lvec) -> np.ndarray:
    """Tensor product of per-slot shift/clock unitaries on d**n dimensions."""
    mats = [weyl(d, int(m), int(l)).matrix for m, l in zip(mvec, lvec)]
    return qmath.tensor(*mats)


def entangled_basis_vector(d: int, n: int, m_flat: int, l_flat: int) -> np.ndarray:
    """(1 x U) Omega for the Weyl label given as flat base-d integers."""
    dd = d**n
    mvec = np.unravel_index(m_flat, (d,) * n)
    lvec = np.unravel_index(l_flat, (d,) * n)
    u = weyl_block(d, mvec, lvec)
    return (omega(dd).reshape(dd, dd) @ u.T).reshape(-1)


@dataclass
class AttackModel:
    """Eve's source state plus feedback channel, validated on construction."""

    d: int
    n: int
    d_eve: int
    psi_abe: np.ndarray
    kraus: tuple

    def __post_init__(self):
        self.psi_abe = np.asarray(self.psi_abe, dtype=complex).reshape(-1)
        self.kraus = tuple(np.asarray(v, dtype=complex) for v in self.kraus)
        dd = self.block_dim
        if dd * dd * self.d_eve > MAX_ATTACK_DIM:
            raise ValueError(
                f"attack dimension {dd * dd * self.d_eve} exceeds budget {MAX_ATTACK_DIM}"
            )
        if self.psi_abe.size != dd * dd * self.d_eve:
            raise ValueError(
                f"source state has {self.psi_abe.size} entries, expected {dd * dd * self.d_eve}"
            )
        norm = float(np.linalg.norm(self.psi_abe))
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"source state norm {norm} is not 1")
        comp = np.zeros((dd * self.d_eve, dd * self.d_eve), dtype=complex)
        for v in self.kraus:
            if v.shape != (dd * self.d_eve, dd * self.d_eve):
                raise ValueError("Kraus operators must be square on B x E")
            comp += qmath.dagger(v) @ v
        dev = float(np.max(np.abs(comp - np.eye(dd * self.d_eve))))
        if dev > 1e-9:
            raise ValueError(f"feedback channel not trace preserving (deviation {dev:.3e})")

    @property
    def block_dim(self) -> int:
        return self.d**self.n


def _as_tuple(v, n: int, bound: int, name: str):
    if isinstance(v, (int, np.integer)):
        v = (int(v),)
    t = tuple(int(x) for x in v)
    if len(t) != n or any(x < 0 or x >= bound for x in t):
        raise IndexError(f"{name} {t} invalid for n={n}, range 0..{bound - 1}")
    return t


def phi_product(bs: BasisSet, bvec, ivec, n: int) -> np.ndarray:
    """Bob's returned eigenstate for a block of basis choices and outcomes."""
    bvec = _as_tuple(bvec, n, bs.k, "bases")
    ivec = _as_tuple(ivec, n, bs.dim, "outcomes")
    return qmath.tensor(*[bs.vector(b, i) for b, i in zip(bvec, ivec)])


def phi_hat_product(bs: BasisSet, bvec, ivec, n: int) -> np.ndarray:
    """Alice's unnormalized conditional block state on A x B."""
    dd = bs.dim**n
    phi = phi_product(bs, bvec, ivec, n)
    return np.kron(phi.conj(), phi) / np.sqrt(dd)


def _projected_raw(am: AttackModel, bs: BasisSet, bvec, ivec):
    """Unnormalized source state after Bob's projection, as (A, B, E) tensor."""
    dd = am.block_dim
    phi = phi_product(bs, bvec, ivec, am.n)
    psi = am.psi_abe.reshape(dd, dd, am.d_eve)
    amp = np.einsum("b,abe->ae", phi.conj(), psi)
    out = np.einsum("ae,b->abe", amp, phi)
    prob = float(np.sum(np.abs(amp) ** 2))
    return out, prob


def bob_projected_state(am: AttackModel, bs: BasisSet, bvec, ivec):
    """Normalized post-measurement state on A x B x E and its probability."""
    out, prob = _projected_raw(am, bs, bvec, ivec)
    if prob <= _PROB_FLOOR:
        raise ZeroProbabilityOutcome(f"outcome (b={bvec}, i={ivec}) has probability {prob:.3e}")
    return out.reshape(-1) / np.sqrt(prob), prob


def bob_projected_state_bell_form(am: AttackModel, bs: BasisSet, bvec, ivec):
    """Second route to the projected state, via the entangled-basis expansion.

    Rebuilds sum_beta (U_hat_beta^T x 1 x 1) phi_hat x e_beta from the
    source coefficients; used to cross-check :func:`bob_projected_state`.
    """
    dd = am.block_dim
    coeffs = decompose_source(am.psi_abe, am.d, am.n, am.d_eve)
    u_hats = _u_hat_operators(coeffs, am.d, am.n)
    hat = phi_hat_product(bs, bvec, ivec, am.n).reshape(dd, dd)
    out = np.empty((dd, dd, am.d_eve), dtype=complex)
    for beta in range(am.d_eve):
        out[:, :, beta] = u_hats[beta].T @ hat
    prob = float(np.linalg.norm(out) ** 2)
    if prob <= _PROB_FLOOR:
        raise ZeroProbabilityOutcome(f"outcome (b={bvec}, i={ivec}) has probability {prob:.3e}")
    return out.reshape(-1) / np.sqrt(prob), prob


def decompose_source(psi: np.ndarray, d: int, n: int, d_eve: int) -> np.ndarray:
    """Source coefficients in the maximally entangled basis on A x B.

    Returns c[m, l, beta] with flat base-d Weyl labels; the squared
    magnitudes sum to 1 and resynthesizing reproduces psi exactly.
    """
    dd = d**n
    psi = np.asarray(psi, dtype=complex).reshape(dd * dd, d_eve)
    coeffs = np.empty((dd, dd, d_eve), dtype=complex)
    for m_flat in range(dd):
        for l_flat in range(dd):
            bell = entangled_basis_vector(d, n, m_flat, l_flat)
            coeffs[m_flat, l_flat] = bell.conj() @ psi
    return coeffs


def source_from_coefficients(coeffs: np.ndarray, d: int, n: int) -> np.ndarray:
    """Resynthesize a source state from entangled-basis coefficients."""
    dd = d**n
    d_eve = coeffs.shape[2]
    psi = np.zeros((dd * dd, d_eve), dtype=complex)
    for m_flat in range(dd):
        for l_flat in range(dd):
            bell = entangled_basis_vector(d, n, m_flat, l_flat)
            psi += np.outer(bell, coeffs[m_flat, l_flat])
    return psi.reshape(-1)


def _u_hat_operators(coeffs: np.ndarray, d: int, n: int):
    """Per-ancilla-component operators U_hat_beta absorbing the expansion."""
    dd = d**n
    d_eve = coeffs.shape[2]
    u_hats = [np.zeros((dd, dd), dtype=complex) for _ in range(d_eve)]
    for m_flat in range(dd):
        mvec = np.unravel_index(m_flat, (d,) * n)
        for l_flat in range(dd):
            lvec = np.unravel_index(l_flat, (d,) * n)
            u = weyl_block(d, mvec, lvec)
            for beta in range(d_eve):
                c = coeffs[m_flat, l_flat, beta]
                if c != 0:
                    u_hats[beta] += c * u
    return u_hats


def apply_feedback(am: AttackModel, state: np.ndarray) -> np.ndarray:
    """Kraus action of the feedback channel on B x E, identity on A."""
    dd = am.block_dim
    s = np.asarray(state, dtype=complex).reshape(dd, dd * am.d_eve)
    dim = dd * dd * am.d_eve
    rho = np.zeros((dim, dim), dtype=complex)
    for v in am.kraus:
        w = (s @ v.T).reshape(-1)
        rho += np.outer(w, w.conj())
    return rho


def _branch_vectors(am: AttackModel, bs: BasisSet, bvec, ivec):
    """Per-Kraus-branch unnormalized vectors (1 x V_l) applied after projection."""
    out, prob = _projected_raw(am, bs, bvec, ivec)
    dd = am.block_dim
    s = out.reshape(dd, dd * am.d_eve)
    return [(s @ v.T).reshape(dd * dd, am.d_eve) for v in am.kraus], prob


def alice_state_unnormalized(am: AttackModel, bs: BasisSet, bvec, ivec):
    """Alice's conditional state on A x B before normalization.

    The trace equals the outcome probability; returns ``(rho, prob)``.
    """
    branches, prob = _branch_vectors(am, bs, bvec, ivec)
    dd = am.block_dim
    rho = np.zeros((dd * dd, dd * dd), dtype=complex)
    for w in branches:
        rho += w @ w.conj().T
    return rho, prob


def alice_state(am: AttackModel, bs: BasisSet, bvec, ivec) -> np.ndarray:
    """Normalized state Alice measures, conditioned on Bob's (b, i)."""
    rho, prob = alice_state_unnormalized(am, bs, bvec, ivec)
    if prob <= _PROB_FLOOR:
        raise ZeroProbabilityOutcome(f"outcome (b={bvec}, i={ivec}) has probability {prob:.3e}")
    return rho / prob


def build_E_operators(am: AttackModel) -> np.ndarray:
    """Operator form of the attack: E[l, k] acting on A x B.

    E_(l,k) = sum_beta U_hat_beta^T x M_(l,k,beta), with M the B-block of
    Kraus operator V_l mapping Eve's component beta to k. Reconstructs
    Alice's unnormalized state as sum E |phi_hat><phi_hat| E^dagger.
    """
    dd = am.block_dim
    coeffs = decompose_source(am.psi_abe, am.d, am.n, am.d_eve)
    u_hats = _u_hat_operators(coeffs, am.d, am.n)
    ops = np.zeros((len(am.kraus), am.d_eve, dd * dd, dd * dd), dtype=complex)
    for l, v in enumerate(am.kraus):
        vr = v.reshape(dd, am.d_eve, dd, am.d_eve)
        for k in range(am.d_eve):
            for beta in range(am.d_eve):
                ops[l, k] += np.kron(u_hats[beta].T, vr[:, k, :, beta])
    return ops


def reconstruct_alice_state(am: AttackModel, bs: BasisSet, bvec, ivec,
                            ops: np.ndarray | None = None) -> np.ndarray:
    """Alice's unnormalized state from the E_(l,k) operators (cross-check)."""
    if ops is None:
        ops = build_E_operators(am)
    hat = phi_hat_product(bs, bvec, ivec, am.n)
    dim = hat.size
    rho = np.zeros((dim, dim), dtype=complex)
    for l in range(ops.shape[0]):
        for k in range(ops.shape[1]):
            w = ops[l, k] @ hat
            rho += np.outer(w, w.conj())
    return rho


def scalar_deviation(op: np.ndarray) -> float:
    """Distance of an operator from the scalar line (Frobenius norm)."""
    dim = op.shape[0]
    return float(np.linalg.norm(op - (np.trace(op) / dim) * np.eye(dim)))


def eve_final_state(am: AttackModel, bs: BasisSet, bvec, ivec) -> np.ndarray:
    """Eve's normalized final state on (branch register) x E.

    Block l holds the ancilla state produced when Kraus branch l fired;
    the branch register is the slow index.
    """
    branches, _ = _branch_vectors(am, bs, bvec, ivec)
    blocks = [w.T @ w.conj() for w in branches]
    rho = scipy.linalg.block_diag(*blocks)
    prob = float(np.trace(rho).real)
    if prob <= _PROB_FLOOR:
        raise ZeroProbabilityOutcome(f"outcome (b={bvec}, i={ivec}) has probability {prob:.3e}")
    return rho / prob


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """(1/2) ||rho - sigma||_1 for Hermitian matrices."""
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(rho - sigma))))


def _outcome_grid(bs: BasisSet, n: int):
    return product(product(range(bs.k), repeat=n), product(range(bs.dim), repeat=n))


def leakage(am: AttackModel, bs: BasisSet) -> float:
    """Worst-case distinguishability of Eve's conditional final states.

    Maximum trace distance between her states for any two outcomes (b, i)
    of nonnegligible probability; zero means the transcript taught her
    nothing about the key.
    """
    states = []
    for bvec, ivec in _outcome_grid(bs, am.n):
        branches, _ = _branch_vectors(am, bs, bvec, ivec)
        blocks = [w.T @ w.conj() for w in branches]
        rho = scipy.linalg.block_diag(*blocks)
        prob = float(np.trace(rho).real)
        if prob <= _LEAKAGE_SKIP:
            continue
        states.append(rho / prob)
    worst = 0.0
    for r1, r2 in combinations(states, 2):
        worst = max(worst, trace_distance(r1, r2))
    return worst


def _product_tables(strategy: Strategy, n: int):
    """Grouped safe product vectors, their weights and per-slot guess values."""
    ps = tensor_strategy(strategy, n)
    etas = []
    weights = []
    for xs in ps.guessing_tuples():
        etas.append(ps.safe_vector_grouped(xs))
        weights.append(ps.weight(xs))
    xvals = np.asarray(strategy.guessing_functions, dtype=int)
    return np.asarray(etas), np.asarray(weights), xvals


def _correct_mask(xvals: np.ndarray, bvec, ivec) -> np.ndarray:
    """Indicator over product guessing functions of x_l(b_l) = i_l for all l."""
    mask = np.ones(1)
    for b, i in zip(bvec, ivec):
        mask = np.kron(mask, (xvals[:, b] == i).astype(float))
    return mask


def guess_probability(strategy: Strategy, am: AttackModel, xvec, bvec, ivec) -> float:
    """Probability that Alice announces the digits x(b), given Bob saw (b, i).

    Aggregates the Born weights of every guessing function sharing those
    digits; without an attack this is 1 when x(b) = i and 0 otherwise.
    """
    n = am.n
    bvec = _as_tuple(bvec, n, strategy.basis_set.k, "bases")
    ivec = _as_tuple(ivec, n, strategy.d, "outcomes")
    if isinstance(xvec[0], (int, np.integer)):
        xvec = (tuple(xvec),)
    xvec = tuple(tuple(int(v) for v in x) for x in xvec)
    etas, weights, xvals = _product_tables(strategy, n)
    rho = alice_state(am, strategy.basis_set, bvec, ivec)
    born = weights * np.einsum("xi,ij,xj->x", etas.conj(), rho, etas).real
    target = tuple(x[b] for x, b in zip(xvec, bvec))
    mask = _correct_mask(xvals, bvec, target)
    return float(born @ mask)


def detection_probability(strategy: Strategy, am: AttackModel) -> float:
    """Average probability that Alice's inferred digits disagree with Bob's.

    Exact enumeration over uniform basis blocks and Born-rule outcomes; no
    sampling is involved.
    """
    bs = strategy.basis_set
    if bs.dim != am.d:
        raise ValueError("strategy and attack dimensions differ")
    n = am.n
    etas, weights, xvals = _product_tables(strategy, n)
    total = 0.0
    nbases = bs.k**n
    for bvec in product(range(bs.k), repeat=n):
        for ivec in product(range(bs.dim), repeat=n):
            rho_raw, prob = alice_state_unnormalized(am, bs, bvec, ivec)
            if prob <= _PROB_FLOOR:
                continue
            born = weights * np.einsum("xi,ij,xj->x", etas.conj(), rho_raw, etas).real
            correct = float(born @ _correct_mask(xvals, bvec, ivec))
            total += prob - correct
    return total / nbases


@dataclass
class AttackReport:
    detection_probability: float
    leakage: float
    per_outcome: list

    def to_dict(self) -> dict:
        return {
            "detection_probability": self.detection_probability,
            "leakage": self.leakage,
            "per_outcome": self.per_outcome,
        }


def evaluate_attack(strategy: Strategy, am: AttackModel) -> AttackReport:
    """Detection probability, leakage and the per-outcome error table."""
    bs = strategy.basis_set
    n = am.n
    etas, weights, xvals = _product_tables(strategy, n)
    table = []
    total = 0.0
    for bvec, ivec in _outcome_grid(bs, n):
        rho_raw, prob = alice_state_unnormalized(am, bs, bvec, ivec)
        if prob <= _PROB_FLOOR:
            continue
        born = weights * np.einsum("xi,ij,xj->x", etas.conj(), rho_raw, etas).real
        correct = float(born @ _correct_mask(xvals, bvec, ivec))
        total += prob - correct
        table.append(
            {
                # 1-based labels in the human-facing table
                "b": [b + 1 for b in bvec],
                "i": [i + 1 for i in ivec],
                "prob": prob,
                "guess_error": max(0.0, 1.0 - correct / prob),
            }
        )
    return AttackReport(
        detection_probability=total / bs.k**n,
        leakage=leakage(am, bs),
        per_outcome=table,
    )


# ---------------------------------------------------------------------------
# canned attacks and generators
# ---------------------------------------------------------------------------


def identity_attack(d: int, n: int = 1) -> AttackModel:
    """No eavesdropping: honest source, trivial feedback channel."""
    dd = d**n
    return AttackModel(d=d, n=n, d_eve=1, psi_abe=omega(dd), kraus=(np.eye(dd),))


def intercept_resend(bs: BasisSet, bstar: int, n: int = 1) -> AttackModel:
    """Measure the returning system in basis ``bstar`` and resend the outcome.

    One Kraus branch per measurement result, so the branch register records
    what Eve learned; the source is untouched.
    """
    if not (0 <= bstar < bs.k):
        raise ValueError(f"basis {bstar} out of range")
    dd = bs.dim**n
    ops = []
    for jvec in product(range(bs.dim), repeat=n):
        phi = phi_product(bs, (bstar,) * n, jvec, n)
        ops.append(np.outer(phi, phi.conj()))
    return AttackModel(d=bs.dim, n=n, d_eve=1, psi_abe=omega(dd), kraus=tuple(ops))


def source_replace(d: int, eps: float, n: int = 1) -> AttackModel:
    """Rotate the source by ``eps`` toward an orthogonal product state."""
    dd = d**n
    psi = np.cos(eps) * omega(dd)
    psi[1] += np.sin(eps)  # |0...0> x |0...1>, orthogonal to the entangled state
    return AttackModel(d=d, n=n, d_eve=1, psi_abe=psi, kraus=(np.eye(dd),))


def probe_entangle(d: int, theta: float, n: int = 1, d_eve: int = 2) -> AttackModel:
    """Couple a probe to the outgoing system by a controlled rotation.

    The source becomes (1_A x C) (Omega x e_0) with C rotating Eve's qubit
    by j*theta conditioned on Bob's computational index j; the feedback
    channel stays trivial.
    """
    if d_eve < 2:
        raise ValueError("the probe needs at least a qubit ancilla")
    dd = d**n
    psi = np.zeros((dd, dd, d_eve), dtype=complex)
    om = omega(dd).reshape(dd, dd)
    for j in range(dd):
        rot = np.zeros(d_eve, dtype=complex)
        rot[0] = np.cos(j * theta)
        rot[1] = np.sin(j * theta)
        psi[:, j, :] = np.outer(om[:, j], rot)
    return AttackModel(
        d=d, n=n, d_eve=d_eve, psi_abe=psi.reshape(-1), kraus=(np.eye(dd * d_eve),)
    )


def eve_local_attack(d: int, kraus_e, eve_state=None, n: int = 1) -> AttackModel:
    """Attack whose channel touches only Eve's ancilla (scalar form).

    The source is the honest entangled state paired with an arbitrary
    ancilla state; such attacks are undetectable and leak nothing.
    """
    kraus_e = [np.asarray(w, dtype=complex) for w in kraus_e]
    d_eve = kraus_e[0].shape[0]
    dd = d**n
    chi = np.zeros(d_eve, dtype=complex) if eve_state is None else np.asarray(eve_state, dtype=complex)
    if eve_state is None:
        chi[0] = 1.0
    chi = chi / np.linalg.norm(chi)
    psi = np.kron(omega(dd), chi)
    ops = tuple(np.kron(np.eye(dd), w) for w in kraus_e)
    return AttackModel(d=d, n=n, d_eve=d_eve, psi_abe=psi, kraus=ops)


def random_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_channel(dim: int, n_kraus: int, rng: np.random.Generator):
    """Random trace-preserving Kraus family on a ``dim``-dimensional space."""
    raw = [
        rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        for _ in range(n_kraus)
    ]
    gram = sum(qmath.dagger(g) @ g for g in raw)
    vals, vecs = np.linalg.eigh(gram)
    inv_sqrt = vecs @ np.diag(vals**-0.5) @ vecs.conj().T
    return [g @ inv_sqrt for g in raw]


def random_attack(d: int, n: int, d_eve: int, n_kraus: int, rng: np.random.Generator) -> AttackModel:
    dd = d**n
    return AttackModel(
        d=d,
        n=n,
        d_eve=d_eve,
        psi_abe=random_state(dd * dd * d_eve, rng),
        kraus=tuple(random_channel(dd * d_eve, n_kraus, rng)),
    )


def scalarized_attack(am: AttackModel) -> AttackModel:
    """Project an attack onto its undetectable part.

    Keeps only the honest component of the source and the 1_B x W part of
    every Kraus operator, renormalized back to a valid channel; the result
    is always of scalar form.
    """
    dd = am.block_dim
    coeffs = decompose_source(am.psi_abe, am.d, am.n, am.d_eve)
    chi = coeffs[0, 0]
    if np.linalg.norm(chi) < 1e-9:
        chi = None  # no honest component; fall back to a fresh ancilla
    ws = []
    for v in am.kraus:
        vr = v.reshape(dd, am.d_eve, dd, am.d_eve)
        ws.append(np.einsum("aiaj->ij", vr) / dd)
    gram = sum(w.conj().T @ w for w in ws)
    vals, vecs = np.linalg.eigh(gram)
    if vals.min() < 1e-12:
        ws = [np.eye(am.d_eve)]
    else:
        inv_sqrt = vecs @ np.diag(vals**-0.5) @ vecs.conj().T
        ws = [w @ inv_sqrt for w in ws]
    return eve_local_attack(am.d, ws, eve_state=chi, n=am.n)


def save_attack(am: AttackModel, path) -> None:
    write_json(
        path,
        {
            "d": am.d,
            "n": am.n,
            "d_E": am.d_eve,
            "psi_abe": complex_to_pairs(am.psi_abe),
            "kraus": [complex_to_pairs(v) for v in am.kraus],
        },
    )


def load_attack(path) -> AttackModel:
    data = read_json(path)
    return AttackModel(
        d=int(data["d"]),
        n=int(data["n"]),
        d_eve=int(data["d_E"]),
        psi_abe=pairs_to_complex(data["psi_abe"]),
        kraus=tuple(pairs_to_complex(v) for v in data["kraus"]),
    )
