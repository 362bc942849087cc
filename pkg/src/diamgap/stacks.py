"""Vector stacks and the coordinate-array satisfaction predicate.

A *stack* is an ordered tuple of vector indices, bottom first.  A
*coordinate array* is a tuple of k-1 coordinates, each in 1..d.  The
predicate `satisfies` relates the two: a stack S = (a_1, ..., a_s) with
s <= k-1 satisfies x when there is a chain of position sets
[k-1] = I_1 > I_2 > ... > I_s (each dropping one element, |I_h| = k-h)
such that vector a_h has a 1 at coordinate x[i] for every i in I_h.

`satisfies` uses an O(s*k) criterion; `satisfies_bruteforce` searches
chains literally and exists as the test oracle for it.
"""

from __future__ import annotations

from .ovcore import NoCommonCoordinate, OvInstance, OvWitness, common_one_coordinate

__all__ = [
    "Stack",
    "CoordArray",
    "StackTooLong",
    "satisfies",
    "satisfies_bruteforce",
    "common_coord_array",
    "concat",
    "popped",
    "push",
    "substack",
    "split_pair_satisfies",
    "stack_to_text",
    "coords_to_text",
]

# A stack stores indices into one instance's vector list, never bit-vectors:
# vector identity matters downstream and indices keep encodings compact.
Stack = tuple[int, ...]
CoordArray = tuple[int, ...]


class StackTooLong(ValueError):
    """The satisfaction relation is only defined for stacks of <= k-1 vectors."""


def _check_coords(coords: CoordArray, inst: OvInstance) -> None:
    if len(coords) != inst.k - 1:
        raise ValueError(f"coordinate array must have length {inst.k - 1}")
    for c in coords:
        if not 1 <= c <= inst.d:
            raise ValueError(f"coordinate {c} outside 1..{inst.d}")


def satisfies(stack: Stack, coords: CoordArray, inst: OvInstance) -> bool:
    """Decide satisfaction via the union-of-complements criterion.

    With J_h = {positions i : vector a_h has a 1 at coordinate x[i]},
    the stack satisfies x iff for every h the positions failed so far
    (the union of the complements of J_1..J_h) number at most h-1.
    Equivalent to the chain definition; `satisfies_bruteforce` checks
    that equivalence exhaustively in the test suite.
    """
    _check_coords(coords, inst)
    if len(stack) > inst.k - 1:
        raise StackTooLong(f"stack of {len(stack)} vectors, limit {inst.k - 1}")
    bad = 0  # bitmask of positions some vector so far has missed
    for h, idx in enumerate(stack, start=1):
        vec = inst.vectors[idx]
        for i, c in enumerate(coords):
            if not vec[c - 1]:
                bad |= 1 << i
        if bad.bit_count() > h - 1:
            return False
    return True


def satisfies_bruteforce(stack: Stack, coords: CoordArray, inst: OvInstance) -> bool:
    """Literal existential search over all nested position-set chains.

    Exponential in k; used only as the oracle for `satisfies`.
    """
    _check_coords(coords, inst)
    s = len(stack)
    if s > inst.k - 1:
        raise StackTooLong(f"stack of {s} vectors, limit {inst.k - 1}")
    if s == 0:
        return True

    def level_ok(h: int, positions: frozenset[int]) -> bool:
        vec = inst.vectors[stack[h - 1]]
        return all(vec[coords[i] - 1] == 1 for i in positions)

    def descend(h: int, positions: frozenset[int]) -> bool:
        if not level_ok(h, positions):
            return False
        if h == s:
            return True
        return any(descend(h + 1, positions - {e}) for e in positions)

    return descend(1, frozenset(range(inst.k - 1)))


def concat(s: Stack, t: Stack) -> Stack:
    """The stack (a_1, ..., a_s, b_1, ..., b_t)."""
    return tuple(s) + tuple(t)


def popped(s: Stack) -> Stack:
    """The stack with its top (last) vector removed."""
    if not s:
        raise ValueError("cannot pop an empty stack")
    return tuple(s[:-1])


def push(s: Stack, idx: int) -> Stack:
    """The stack with one vector appended on top."""
    return tuple(s) + (idx,)


def substack(s: Stack, upto: int) -> Stack:
    """The bottom prefix of the first `upto` vectors."""
    if not 0 <= upto <= len(s):
        raise ValueError("prefix length out of range")
    return tuple(s[:upto])


def common_coord_array(s: Stack, t: Stack, inst: OvInstance) -> CoordArray:
    """Build a coordinate array satisfied by both stacks at once.

    Entry x[l] is the smallest coordinate shared (all-ones) by the
    bottom k-l vectors of `s` together with the bottom l vectors of
    `t`; prefix indices beyond a stack's length are skipped, which is
    the same as padding the short stack with all-ones vectors.  Raises
    NoCommonCoordinate when some referenced tuple is orthogonal, i.e.
    when the non-orthogonality precondition fails upstream.
    """
    k = inst.k
    if len(s) > k - 1 or len(t) > k - 1:
        raise StackTooLong("inputs must have at most k-1 vectors")
    coords = []
    for ell in range(1, k):
        refs = list(s[: k - ell]) + list(t[:ell])
        coords.append(common_one_coordinate(inst, refs))
    return tuple(coords)


def split_pair_satisfies(
    j: int, witness: OvWitness, coords: CoordArray, inst: OvInstance
) -> bool:
    """Whether the length-j prefix stack and the reversed suffix stack of a
    k-tuple both satisfy the same coordinate array.

    For an orthogonal tuple this is false for every x and every split
    point j in 0..k; the test suite quantifies over all of them.  A
    side longer than k-1 vectors (j = 0 or j = k) is outside the
    satisfaction relation's domain and counts as non-satisfying, which
    is the only reading under which the all-j claim is well-formed.
    """
    idx = witness.indices
    k = inst.k
    if len(idx) != k:
        raise ValueError(f"witness must have exactly {k} indices")
    if not 0 <= j <= k:
        raise ValueError("split point must be in 0..k")
    left: Stack = tuple(idx[:j])
    right: Stack = tuple(reversed(idx[j:]))

    def side_ok(stack: Stack) -> bool:
        if len(stack) > k - 1:
            return False
        return satisfies(stack, coords, inst)

    return side_ok(left) and side_ok(right)


def stack_to_text(s: Stack) -> str:
    """Canonical text encoding: comma-separated vector indices."""
    return ",".join(str(i) for i in s)


def coords_to_text(x: CoordArray) -> str:
    """Canonical text encoding: comma-separated 1-indexed coordinates."""
    return ",".join(str(c) for c in x)
