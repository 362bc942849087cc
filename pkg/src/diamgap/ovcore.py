"""Binary-vector instances, planted generators, and the brute-force solver.

An instance is a set of n binary vectors of dimension d together with a
tuple-size parameter k.  A tuple of k vectors (repetition allowed) is
*orthogonal* when the coordinate-wise AND of the tuple is the all-zeros
vector.  Everything downstream keys off two instance classes:

* *no-instances*: no tuple of at most k vectors is orthogonal;
* *planted instances*: an orthogonal k-tuple of pairwise-distinct vectors
  exists, but no (k-1)-tuple is orthogonal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

__all__ = [
    "OvInstance",
    "OvWitness",
    "GenerationFailed",
    "NoCommonCoordinate",
    "solve_kov_bruteforce",
    "common_one_coordinate",
    "generate_no_instance",
    "generate_yes_instance",
    "write_instance",
    "read_instance",
]


class GenerationFailed(RuntimeError):
    """Raised when a generator cannot produce a conforming instance."""


class NoCommonCoordinate(LookupError):
    """Raised when a set of vectors shares no all-ones coordinate."""


@dataclass(frozen=True)
class OvInstance:
    """A set of binary vectors with the tuple-size parameter k.

    Parameters
    ----------
    k : int
        Tuple size, at least 2.
    d : int
        Vector dimension, at least 1.
    vectors : tuple of tuple of int
        The n vectors, each a length-d tuple of bits.  Vector indices
        0..n-1 are the canonical identities used by every other module.
    """

    k: int
    d: int
    vectors: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ValueError("k must be at least 2")
        if self.d < 1:
            raise ValueError("d must be at least 1")
        if len(self.vectors) < 1:
            raise ValueError("need at least one vector")
        for vec in self.vectors:
            if len(vec) != self.d:
                raise ValueError("vector length does not match d")
            if any(b not in (0, 1) for b in vec):
                raise ValueError("vectors must be 0/1 valued")

    @property
    def n(self) -> int:
        return len(self.vectors)

    def to_array(self) -> np.ndarray:
        """Return the vectors as an (n, d) uint8 array."""
        return np.array(self.vectors, dtype=np.uint8)


@dataclass(frozen=True)
class OvWitness:
    """Indices of a tuple whose AND-product is all zeros."""

    indices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.indices)


def _and_product(inst: OvInstance, indices) -> tuple[int, ...]:
    out = [1] * inst.d
    for i in indices:
        vec = inst.vectors[i]
        for c in range(inst.d):
            if out[c] and not vec[c]:
                out[c] = 0
    return tuple(out)


def solve_kov_bruteforce(inst: OvInstance, j: int) -> OvWitness | None:
    """Search exhaustively for a size-j orthogonal tuple.

    Because repetition is allowed, a j-tuple with all-zeros AND exists
    iff some set of at most j *distinct* vectors has all-zeros AND, so
    the scan runs over distinct index subsets of size 1..j in
    lexicographic order and pads the first hit up to length j by
    repeating its last index.  Returns ``None`` when no tuple exists.
    """
    if not 1 <= j <= inst.k:
        raise ValueError("j must satisfy 1 <= j <= k")
    n = inst.n
    for r in range(1, j + 1):
        for combo in itertools.combinations(range(n), r):
            if any(_and_product(inst, combo)):
                continue
            padded = combo + (combo[-1],) * (j - r)
            return OvWitness(indices=padded)
    return None


def common_one_coordinate(inst: OvInstance, indices) -> int:
    """Return the smallest 1-indexed coordinate where all vectors are 1.

    The referenced vectors must share at least one all-ones coordinate;
    otherwise the tuple is orthogonal and :class:`NoCommonCoordinate` is
    raised.  An empty index list vacuously returns coordinate 1.
    """
    for c in range(inst.d):
        if all(inst.vectors[i][c] for i in indices):
            return c + 1
    raise NoCommonCoordinate(f"vectors {tuple(indices)} are orthogonal")


def _sample_dense(rng: np.random.Generator, count: int, d: int, density: float):
    if count <= 0:
        return []
    bits = (rng.random((count, d)) < density).astype(np.uint8)
    return [tuple(int(b) for b in row) for row in bits]


def generate_no_instance(
    k: int,
    d: int,
    n: int,
    seed: int,
    density: float = 0.8,
    max_tries: int = 500,
) -> OvInstance:
    """Sample an instance with no orthogonal tuple of size at most k.

    Draws n-1 dense random vectors (each bit 1 with probability
    ``density``), appends the all-ones vector, and rejects until the
    brute-force solver finds no j-orthogonal tuple for any j <= k.
    Deterministic in (k, d, n, seed).
    """
    rng = np.random.default_rng(seed)
    all_ones = tuple([1] * d)
    for _ in range(max_tries):
        vectors = _sample_dense(rng, n - 1, d, density)
        vectors.append(all_ones)
        inst = OvInstance(k=k, d=d, vectors=tuple(vectors))
        if all(solve_kov_bruteforce(inst, j) is None for j in range(1, k + 1)):
            return inst
    raise GenerationFailed(
        f"no conforming instance after {max_tries} tries (k={k}, d={d}, n={n})"
    )


def _planted_vectors(k: int, d: int) -> list[tuple[int, ...]]:
    planted = []
    for i in range(k):
        vec = [1] * d
        vec[i] = 0
        if i == k - 1:
            # The AND of the plant must be zero on every coordinate, so the
            # last vector also covers the coordinates beyond k when d > k.
            for c in range(k, d):
                vec[c] = 0
        planted.append(tuple(vec))
    return planted


def generate_yes_instance(
    k: int,
    d: int,
    n: int,
    seed: int,
    density: float = 0.8,
    max_tries: int = 500,
) -> tuple[OvInstance, OvWitness]:
    """Build an instance with a planted orthogonal k-tuple and no smaller one.

    Requires d >= k and n >= k.  The plant is k "one-hole" vectors
    (all-ones except a zero at coordinate i; the last one also zeroes
    any coordinates beyond k).  When n > k the pads are the all-ones
    vector plus dense random vectors, re-sampled until the instance has
    no (k-1)-orthogonal tuple.  Vector order and coordinate order are
    shuffled under the seed, so different seeds give genuinely
    different instances even when there are no random pads; the
    returned witness points at the shuffled plant positions.
    """
    if d < k:
        raise GenerationFailed(f"planted instances need d >= k (got d={d}, k={k})")
    if n < k:
        raise GenerationFailed(f"planted instances need n >= k (got n={n}, k={k})")
    rng = np.random.default_rng(seed)
    planted = _planted_vectors(k, d)
    all_ones = tuple([1] * d)
    for _ in range(max_tries):
        pads = []
        if n > k:
            pads.append(all_ones)
            pads.extend(_sample_dense(rng, n - k - 1, d, density))
        cols = rng.permutation(d)
        vectors = [tuple(vec[c] for c in cols) for vec in planted + pads]
        rows = rng.permutation(n)
        witness = OvWitness(indices=tuple(int(p) for p in np.argsort(rows)[:k]))
        inst = OvInstance(k=k, d=d, vectors=tuple(vectors[i] for i in rows))
        if solve_kov_bruteforce(inst, k - 1) is not None:
            continue
        if any(_and_product(inst, witness.indices)):
            raise GenerationFailed("planted tuple is not orthogonal (internal bug)")
        return inst, witness
    raise GenerationFailed(
        f"no conforming planted instance after {max_tries} tries "
        f"(k={k}, d={d}, n={n})"
    )


def write_instance(inst: OvInstance, path) -> None:
    """Write the text format: a "k d n" header, then one 0/1 row per vector."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{inst.k} {inst.d} {inst.n}\n")
        for vec in inst.vectors:
            fh.write("".join(str(b) for b in vec) + "\n")


def read_instance(path) -> OvInstance:
    """Parse the text format written by :func:`write_instance`."""
    with open(path, "r", encoding="ascii") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise ValueError("empty instance file")
    head = lines[0].split()
    if len(head) != 3:
        raise ValueError("header must be 'k d n'")
    try:
        k, d, n = (int(x) for x in head)
    except ValueError as exc:
        raise ValueError("non-integer header field") from exc
    rows = lines[1:]
    if len(rows) != n:
        raise ValueError(f"expected {n} vector rows, found {len(rows)}")
    vectors = []
    for row in rows:
        if len(row) != d or set(row) - {"0", "1"}:
            raise ValueError(f"bad vector row: {row!r}")
        vectors.append(tuple(int(ch) for ch in row))
    return OvInstance(k=k, d=d, vectors=tuple(vectors))
