"""Random transmission matrices (the code) and experiment configuration."""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

MODES = ("suboptimal", "bipartize", "bayes")
STRICTNESS = ("sufficient", "necessary")


@dataclass(frozen=True)
class ExperimentConfig:
    n_users: int
    n_rounds: int
    design_p: float
    epsilon: float
    seed: int
    k_active: int = 2
    mode: str = "suboptimal"
    strictness: str = "sufficient"

    def __post_init__(self):
        if self.n_users < 3:
            raise ValueError(f"need at least 3 users, got {self.n_users}")
        if self.n_rounds < 1:
            raise ValueError(f"need at least 1 round, got {self.n_rounds}")
        if not (0.0 < self.design_p < 1.0):
            raise ValueError(f"design probability must lie strictly inside (0,1), got {self.design_p}")
        if self.epsilon <= 0.0:
            raise ValueError(f"typicality slack must be positive, got {self.epsilon}")
        if self.k_active != 2:
            raise ValueError("the decoder handles exactly 2 active users")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.strictness not in STRICTNESS:
            raise ValueError(f"strictness must be one of {STRICTNESS}, got {self.strictness!r}")


@dataclass(frozen=True)
class TransmissionMatrix:
    bits: np.ndarray  # N x T, uint8
    design_p: float

    def __post_init__(self):
        bits = np.ascontiguousarray(np.asarray(self.bits, dtype=np.uint8))
        object.__setattr__(self, "bits", bits)
        if bits.ndim != 2:
            raise ValueError("transmission matrix must be 2-D")

    @property
    def n_users(self) -> int:
        return self.bits.shape[0]

    @property
    def n_rounds(self) -> int:
        return self.bits.shape[1]

    def row(self, user: int) -> np.ndarray:
        """Codeword of a 1-based user id."""
        return self.bits[user - 1]


def generate(cfg: ExperimentConfig, rng: np.random.Generator) -> TransmissionMatrix:
    """Draw the N x T matrix entrywise iid Bernoulli(p), row-major order."""
    return TransmissionMatrix(bits=bernoulli_matrix(cfg.n_users, cfg.n_rounds, cfg.design_p, rng), design_p=cfg.design_p)


def bernoulli_matrix(n: int, t: int, p: float, rng: np.random.Generator) -> np.ndarray:
    if p == 0.0:
        return np.zeros((n, t), dtype=np.uint8)
    if p == 1.0:
        return np.ones((n, t), dtype=np.uint8)
    return (rng.random((n, t)) < p).astype(np.uint8)


_HEADER = struct.Struct("<4sIIdq")
_MAGIC = b"PMX1"


def dump_matrix(x: TransmissionMatrix, path, seed: int = 0) -> None:
    """Debug dump: little-endian header (N, T, p, seed) + bits packed LSB-first."""
    packed = np.packbits(x.bits.reshape(-1), bitorder="little")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(_MAGIC, x.n_users, x.n_rounds, x.design_p, seed))
        fh.write(packed.tobytes())


def load_matrix(path) -> tuple[TransmissionMatrix, int]:
    with open(path, "rb") as fh:
        magic, n, t, p, seed = _HEADER.unpack(fh.read(_HEADER.size))
        if magic != _MAGIC:
            raise ValueError("not a transmission-matrix dump")
        packed = np.frombuffer(fh.read(), dtype=np.uint8)
    bits = np.unpackbits(packed, count=n * t, bitorder="little").reshape(n, t)
    return TransmissionMatrix(bits=bits, design_p=p), seed
