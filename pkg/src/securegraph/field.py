"""Exact linear algebra over prime fields.

Matrices are plain ``numpy`` int64 arrays with entries reduced into ``[0, q)``.
Randomness is always drawn from an explicitly passed ``numpy.random.Generator``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Largest admissible modulus. Products of two residues stay below 2**52, so a
# matrix product accumulating up to 2**11 terms fits in int64 without overflow.
MAX_MODULUS = 1 << 26
MAX_INNER_DIM = 1 << 11


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def next_prime_at_least(n: int) -> int:
    """Smallest prime ``p >= n``."""
    if n < 2:
        raise ValueError(f"expected n >= 2, got {n}")
    while not is_prime(n):
        n += 1
    return n


@dataclass(frozen=True)
class PrimeField:
    q: int

    def __post_init__(self):
        if not is_prime(self.q):
            raise ValueError(f"field modulus {self.q} is not prime")
        if self.q > MAX_MODULUS:
            raise ValueError(f"field modulus {self.q} exceeds MAX_MODULUS={MAX_MODULUS}")

    def __repr__(self):
        return f"GF({self.q})"

    # -- scalars -----------------------------------------------------------

    def inv(self, a: int) -> int:
        a = int(a) % self.q
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, self.q - 2, self.q)

    # -- matrices ----------------------------------------------------------

    def array(self, data, cols: int | None = None) -> np.ndarray:
        m = np.array(data, dtype=np.int64)
        if m.ndim == 1:
            m = m.reshape(-1, cols) if cols is not None else m.reshape(1, -1)
        if m.size == 0 and cols is not None:
            m = m.reshape(0, cols)
        return np.mod(m, self.q)

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        return np.zeros((rows, cols), dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if a.shape[-1] > MAX_INNER_DIM:
            raise ValueError("inner dimension too large for exact int64 product")
        return np.mod(a @ b, self.q)

    def _rref(self, m: np.ndarray) -> tuple[np.ndarray, list[int]]:
        """Reduced row echelon form and pivot columns."""
        m = np.mod(np.array(m, dtype=np.int64), self.q)
        rows, cols = m.shape
        pivots: list[int] = []
        r = 0
        for c in range(cols):
            if r == rows:
                break
            nz = np.nonzero(m[r:, c])[0]
            if nz.size == 0:
                continue
            p = r + int(nz[0])
            if p != r:
                m[[r, p]] = m[[p, r]]
            m[r] = np.mod(m[r] * self.inv(m[r, c]), self.q)
            factors = m[:, c].copy()
            factors[r] = 0
            m = np.mod(m - np.outer(factors, m[r]), self.q)
            pivots.append(c)
            r += 1
        return m, pivots

    def rank(self, m: np.ndarray) -> int:
        m = np.asarray(m)
        if m.size == 0:
            return 0
        return len(self._rref(m)[1])

    def solve_right(self, a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
        """Some ``X`` with ``a @ X == b``, or None if inconsistent."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if a.shape[0] != b.shape[0]:
            raise ValueError(f"row mismatch: {a.shape} vs {b.shape}")
        n = a.shape[1]
        if a.shape[0] == 0:
            return self.zeros(n, b.shape[1]) if not np.any(b % self.q) else None
        reduced, pivots = self._rref(np.hstack([a, b]))
        if any(p >= n for p in pivots):
            return None
        x = self.zeros(n, b.shape[1])
        for i, p in enumerate(pivots):
            x[p] = reduced[i, n:]
        return x

    def solve_left(self, m: np.ndarray, target: np.ndarray) -> np.ndarray | None:
        """Some ``D`` with ``D @ m == target``, or None if a target row lies
        outside the row space of ``m``."""
        m = np.asarray(m, dtype=np.int64)
        target = np.asarray(target, dtype=np.int64)
        if m.shape[1] != target.shape[1]:
            raise ValueError(f"column mismatch: {m.shape} vs {target.shape}")
        x = self.solve_right(m.T, target.T)
        return None if x is None else np.ascontiguousarray(x.T)

    def inverse(self, m: np.ndarray) -> np.ndarray:
        m = np.asarray(m, dtype=np.int64)
        if m.shape[0] != m.shape[1]:
            raise ValueError("inverse of a non-square matrix")
        d = self.solve_left(m, self.eye(m.shape[0]))
        if d is None:
            raise ZeroDivisionError("singular matrix")
        return d

    def sample(self, rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
        """i.i.d. uniform matrix; identical generator state gives identical output."""
        return rng.integers(0, self.q, size=(rows, cols), dtype=np.int64)


def sample_matrix(field: PrimeField, rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    return field.sample(rows, cols, rng)
