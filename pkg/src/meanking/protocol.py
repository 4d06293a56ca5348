"""The two-way key distribution protocol, simulated round by round.

Each block runs n retrodiction instances: Bob measures a uniformly random
basis on his half of the pair, returns the eigenstate, Alice measures her
POVM and later, once Bob announces his bases, infers his outcomes from her
guessing functions. Agreement on randomly selected test positions is the
eavesdropping check; the remaining positions become the raw key.

Randomness is counter based (Philox) with one stream per block, spawned
from the config seed, plus a dedicated stream for test selection, so runs
are reproducible and order independent. In-memory records carry 1-based
labels; transcript files use 0-based indices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import ceil

import numpy as np

from . import attack as attack_mod
from .retrodiction import Strategy, phi_hat
from .serialize import canonical_dumps

_DIGITS = "123456789ABCDEFG"


class ProtocolError(RuntimeError):
    """A sampled distribution failed to normalize; the attack model is broken."""


@dataclass(frozen=True)
class ProtocolConfig:
    d: int
    n: int
    rounds: int
    test_fraction: float
    seed: int

    def __post_init__(self):
        if self.rounds < 1:
            raise ValueError("need at least one block")
        if not 0.0 <= self.test_fraction <= 1.0:
            raise ValueError("test_fraction must lie in [0, 1]")

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "n": self.n,
            "rounds": self.rounds,
            "test_fraction": self.test_fraction,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class RoundRecord:
    """One retrodiction instance, 1-based: basis b, outcomes i and i' = x(b)."""

    b: int
    i: int
    x: tuple
    i_prime: int


@dataclass
class Transcript:
    config: ProtocolConfig
    records: list
    test_indices: tuple = field(default_factory=tuple)
    accepted: bool = False


@dataclass(frozen=True)
class KeyPair:
    alice_key: str
    bob_key: str


def _block_rng(seed: int, index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(index,))
    return np.random.Generator(np.random.Philox(ss))


def _normalized(dist: np.ndarray, what: str) -> np.ndarray:
    total = float(dist.sum())
    if abs(total - 1.0) > 1e-6 or np.any(dist < -1e-12):
        raise ProtocolError(f"{what} distribution sums to {total:.8f}")
    return np.clip(dist, 0.0, None) / total


def _honest_tables(strategy: Strategy):
    """Born-rule tables for the attack-free path, one per (basis, outcome)."""
    bs = strategy.basis_set
    d, k = bs.dim, bs.k
    etas = strategy.etas
    weights = strategy.weights
    born = np.empty((k, d))
    povm = np.empty((k, d, len(weights)))
    for b in range(k):
        for i in range(d):
            hat = phi_hat(bs, b, i)
            born[b, i] = float(np.linalg.norm(hat) ** 2)
            amps = etas.conj() @ hat
            povm[b, i] = weights * d * np.abs(amps) ** 2
        born[b] = _normalized(born[b], f"outcome (basis {b + 1})")
        for i in range(d):
            povm[b, i] = _normalized(povm[b, i], f"measurement (basis {b + 1})")
    return born, povm


def run_protocol(cfg: ProtocolConfig, strategy: Strategy, attack=None) -> Transcript:
    """Execute ``cfg.rounds`` blocks of n instances, with an optional attack.

    Bob's basis choices are uniform; his outcomes and Alice's measurement
    results follow the Born rule for the (possibly attacked) states. The
    result is deterministic given the config. Bob's bases reach Alice's
    records only through i' = x(b), evaluated after her outcomes are fixed.
    """
    bs = strategy.basis_set
    d, k = bs.dim, bs.k
    if cfg.d != d:
        raise ValueError(f"config dimension {cfg.d} vs strategy dimension {d}")
    if attack is not None and (attack.d != d or attack.n != cfg.n):
        raise ValueError("attack model does not match the protocol block shape")

    xs = strategy.guessing_functions
    records = []
    if attack is None:
        born, povm = _honest_tables(strategy)
        nx = len(xs)
        for blk in range(cfg.rounds):
            rng = _block_rng(cfg.seed, blk)
            for _ in range(cfg.n):
                b = int(rng.integers(k))
                i = int(rng.choice(d, p=born[b]))
                x = xs[int(rng.choice(nx, p=povm[b, i]))]
                records.append(
                    RoundRecord(b=b + 1, i=i + 1, x=tuple(v + 1 for v in x), i_prime=x[b] + 1)
                )
    else:
        records = _run_attacked(cfg, strategy, attack)

    transcript = Transcript(config=cfg, records=records)
    accepted, _ = sift_and_test(transcript)
    transcript.accepted = accepted
    return transcript


def _run_attacked(cfg: ProtocolConfig, strategy: Strategy, am) -> list:
    """Block-level simulation against an attack model (n small)."""
    bs = strategy.basis_set
    d, k, n = bs.dim, bs.k, cfg.n
    etas, weights, _ = attack_mod._product_tables(strategy, n)
    xs = strategy.guessing_functions
    nx = len(xs)
    outcome_cache: dict = {}
    povm_cache: dict = {}

    def outcome_dist(bvec):
        if bvec not in outcome_cache:
            probs = np.empty(d**n)
            for flat in range(d**n):
                ivec = tuple(int(v) for v in np.unravel_index(flat, (d,) * n))
                _, probs[flat] = attack_mod._projected_raw(am, bs, bvec, ivec)
            outcome_cache[bvec] = _normalized(probs, f"Bob outcomes (b={bvec})")
        return outcome_cache[bvec]

    def povm_dist(bvec, ivec):
        key = (bvec, ivec)
        if key not in povm_cache:
            rho = attack_mod.alice_state(am, bs, bvec, ivec)
            born = weights * np.einsum("xi,ij,xj->x", etas.conj(), rho, etas).real
            povm_cache[key] = _normalized(born, f"measurement (b={bvec}, i={ivec})")
        return povm_cache[key]

    records = []
    for blk in range(cfg.rounds):
        rng = _block_rng(cfg.seed, blk)
        bvec = tuple(int(v) for v in rng.integers(k, size=n))
        iflat = int(rng.choice(d**n, p=outcome_dist(bvec)))
        ivec = tuple(int(v) for v in np.unravel_index(iflat, (d,) * n))
        yflat = int(rng.choice(nx**n, p=povm_dist(bvec, ivec)))
        ydigits = np.unravel_index(yflat, (nx,) * n)
        for b, i, y in zip(bvec, ivec, ydigits):
            x = xs[int(y)]
            records.append(
                RoundRecord(b=b + 1, i=i + 1, x=tuple(v + 1 for v in x), i_prime=x[b] + 1)
            )
    return records


def _test_indices(cfg: ProtocolConfig, total: int) -> tuple:
    count = ceil(cfg.test_fraction * total)
    if count == 0:
        return ()
    rng = _block_rng(cfg.seed, cfg.rounds)  # stream disjoint from every block
    picked = rng.choice(total, size=count, replace=False)
    return tuple(sorted(int(v) for v in picked))


def sift_and_test(transcript: Transcript):
    """Select test positions, check them, and build keys from the rest.

    Returns ``(accepted, KeyPair)``; accepted iff every tested position has
    i = i'. Selection depends only on the config, so the function is a pure
    recomputation and also fills in ``test_indices`` if still empty.
    """
    records = transcript.records
    tests = _test_indices(transcript.config, len(records))
    transcript.test_indices = tests
    accepted = all(records[t].i == records[t].i_prime for t in tests)
    test_set = set(tests)
    alice = []
    bob = []
    for pos, rec in enumerate(records):
        if pos in test_set:
            continue
        alice.append(_DIGITS[rec.i_prime - 1])
        bob.append(_DIGITS[rec.i - 1])
    return accepted, KeyPair(alice_key="".join(alice), bob_key="".join(bob))


def agreement_rate(transcript: Transcript) -> float:
    """Fraction of instances where Alice's inferred digit matches Bob's."""
    records = transcript.records
    if not records:
        return 1.0
    hits = sum(1 for rec in records if rec.i == rec.i_prime)
    return hits / len(records)


def save_transcript(transcript: Transcript, path) -> None:
    """JSON-lines dump: a header line, then one 0-based record per instance."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(
            canonical_dumps(
                {
                    "format": "meanking-transcript-v1",
                    "config": transcript.config.to_dict(),
                    "test_indices": list(transcript.test_indices),
                    "accepted": transcript.accepted,
                }
            )
        )
        fh.write("\n")
        for rec in transcript.records:
            fh.write(
                canonical_dumps(
                    {
                        "b": rec.b - 1,
                        "i": rec.i - 1,
                        "x": [v - 1 for v in rec.x],
                        "i_prime": rec.i_prime - 1,
                    }
                )
            )
            fh.write("\n")


def load_transcript(path) -> Transcript:
    with open(path, "r", encoding="utf-8") as fh:
        header = json.loads(fh.readline())
        cfg = ProtocolConfig(**header["config"])
        records = []
        for line in fh:
            if not line.strip():
                continue
            raw = json.loads(line)
            records.append(
                RoundRecord(
                    b=raw["b"] + 1,
                    i=raw["i"] + 1,
                    x=tuple(v + 1 for v in raw["x"]),
                    i_prime=raw["i_prime"] + 1,
                )
            )
    return Transcript(
        config=cfg,
        records=records,
        test_indices=tuple(header["test_indices"]),
        accepted=bool(header["accepted"]),
    )
