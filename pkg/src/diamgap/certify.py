"""Bounded search over configurations with symbolic edge constraints.

Explicit search over constrained configurations is hopeless: each edge
carries 2k'+1 coordinate arrays, so the branching factor of a node
insertion is the array count raised to 2k'+1.  But validity only ever
*tests* slots against node stacks, and each test touches exactly one
slot.  The search therefore keeps one bitmask per slot over a fixed
array universe: the set of concrete arrays still consistent with every
validity check the slot has been obligated to since its edge appeared.
A symbolic state (stack profile + masks) stands for exactly the
concrete configurations obtained by picking any array from each slot
mask, and a state dies when some mask empties.

Because slots are independent, depth-d reachability of a concrete
configuration equals membership in some depth-d symbolic state's
expansion — `reachable_sets` exposes that expansion for cross-checking
against explicit search on small universes.

`endpoint_separation` runs the search between the two one-node
configurations built from a common-zero witness tuple and reports
whether the second is reachable within a depth budget.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .configs import Configuration, EdgeConstraint, k_prime
from .ovcore import OvInstance, OvWitness
from .stacks import CoordArray, Stack, satisfies

__all__ = [
    "BudgetExceeded",
    "SearchCertificate",
    "bounded_search",
    "endpoint_separation",
    "reachable_sets",
    "full_universe",
]

DEFAULT_STATE_CAP = 50_000_000

# A symbolic state is (stacks, edges): stacks in order position (root
# first), edges aligned with non-root positions, each edge a tuple of
# 2k'+1 mask ints laid out root-group, leaf-group, shared.
SymbolicState = tuple[tuple[Stack, ...], tuple[tuple[int, ...], ...]]


class BudgetExceeded(RuntimeError):
    """State cap hit before the search finished; carries the partial
    certificate so callers can report instead of guessing."""

    def __init__(self, message: str, certificate: "SearchCertificate"):
        super().__init__(message)
        self.certificate = certificate


@dataclass
class SearchCertificate:
    reached: bool
    first_depth: int | None
    depth_budget: int
    frontier_sizes: list[int]
    states_seen: int
    dedup_hits: int
    dominated: int
    universe_size: int
    state_cap: int = DEFAULT_STATE_CAP

    def as_dict(self) -> dict:
        return {
            "reached": self.reached,
            "first_depth": self.first_depth,
            "depth_budget": self.depth_budget,
            "frontier_sizes": list(self.frontier_sizes),
            "states_seen": self.states_seen,
            "dedup_hits": self.dedup_hits,
            "dominated": self.dominated,
            "universe_size": self.universe_size,
            "state_cap": self.state_cap,
        }


def full_universe(inst: OvInstance) -> list[CoordArray]:
    """All coordinate arrays of length k-1, lexicographic."""
    return [
        tuple(c + 1 for c in combo)
        for combo in itertools.product(range(inst.d), repeat=inst.k - 1)
    ]


class _Engine:
    def __init__(
        self,
        inst: OvInstance,
        universe: list[CoordArray] | None,
        sanity_checks: bool,
    ):
        self.inst = inst
        self.k = inst.k
        self.kp = k_prime(inst.k)
        self.universe = full_universe(inst) if universe is None else list(universe)
        self.full_mask = (1 << len(self.universe)) - 1
        self._sat_cache: dict[Stack, int] = {}
        self.sanity_checks = sanity_checks

    def sat_mask(self, stack: Stack) -> int:
        got = self._sat_cache.get(stack)
        if got is None:
            got = 0
            for i, arr in enumerate(self.universe):
                if satisfies(stack, arr, self.inst):
                    got |= 1 << i
            self._sat_cache[stack] = got
        return got

    def reduce(self, stacks: tuple[Stack, ...], edges) -> SymbolicState | None:
        """Apply the root bound and every obligation to the masks;
        None when the state is dead.  Idempotent, so it is safe (and
        necessary, since positions shift) to rerun after every
        half-step."""
        if 2 * len(stacks[0]) < self.k - 2:
            return None
        t = len(stacks)
        if t == 1:
            return (stacks, ())
        kp = self.kp
        new = [list(e) for e in edges]
        for p in range(1, t + 1):
            if p < t and p > kp:
                return None  # no slot row for this position
            mask = self.sat_mask(stacks[p - 1])
            if p == 1:
                slots = [(e, j) for e in range(t - 1) for j in range(kp)]
                slots += [(e, 2 * kp) for e in range(t - 1)]
            else:
                e = p - 2
                slots = [(e, kp + j) for j in range(kp)]
                slots.append((e, 2 * kp))
            slots += [(later - 2, kp + p - 1) for later in range(p + 1, t + 1)]
            for e, s in slots:
                m = new[e][s] & mask
                if m == 0:
                    return None
                new[e][s] = m
        return (stacks, tuple(tuple(e) for e in new))

    def insertions(self, state: SymbolicState) -> Iterator[SymbolicState]:
        stacks, edges = state
        t = len(stacks)
        full_edge = (self.full_mask,) * (2 * self.kp + 1)
        for p in range(t):
            for v in range(self.inst.n):
                new_stacks = stacks[:p] + (stacks[p] + (v,),) + stacks[p + 1 :]
                got = self.reduce(new_stacks, edges)
                if got is not None:
                    yield got
        # node attach, largest then second-largest position
        got = self.reduce(stacks + ((),), edges + (full_edge,))
        if got is not None:
            yield got
        if t >= 2:
            got = self.reduce(
                stacks[:-1] + ((), stacks[-1]),
                edges[:-1] + (full_edge, edges[-1]),
            )
            if got is not None:
                yield got

    def deletions(self, state: SymbolicState) -> Iterator[SymbolicState]:
        stacks, edges = state
        t = len(stacks)
        for p in range(t):
            if stacks[p]:
                new_stacks = stacks[:p] + (stacks[p][:-1],) + stacks[p + 1 :]
                got = self.reduce(new_stacks, edges)
                if got is not None:
                    yield got
        for p in (t - 1, t - 2):
            if p >= 1 and not stacks[p]:
                got = self.reduce(
                    stacks[:p] + stacks[p + 1 :], edges[: p - 1] + edges[p:]
                )
                if got is not None:
                    yield got

    def flip(self, state: SymbolicState) -> SymbolicState | None:
        stacks, edges = state
        if len(stacks) != 2 or len(stacks[0]) != len(stacks[1]):
            return None
        kp = self.kp
        e = edges[0]
        swapped = e[kp : 2 * kp] + e[:kp] + (e[2 * kp],)
        return self.reduce((stacks[1], stacks[0]), (swapped,))

    def successors(self, state: SymbolicState) -> Iterator[SymbolicState]:
        t0 = len(state[0])
        for mid in self.insertions(state):
            variants = [mid]
            flipped = self.flip(mid)
            if flipped is not None:
                variants.append(flipped)
            for var in variants:
                for end in self.deletions(var):
                    if t0 < 2 and len(end[0]) < 2:
                        continue  # neither endpoint has two nodes
                    yield end


def _dominates(a: tuple, b: tuple) -> bool:
    """Slot-wise mask containment b subseteq a (same skeleton assumed)."""
    for ea, eb in zip(a, b):
        for ma, mb in zip(ea, eb):
            if mb & ~ma:
                return False
    return True


def _run(
    inst: OvInstance,
    source_stack: Stack,
    target_stack: Stack,
    depth_budget: int,
    universe: list[CoordArray] | None,
    state_cap: int,
    sanity_checks: bool,
    stop_on_target: bool,
    collect: list[tuple[SymbolicState, int]] | None,
) -> SearchCertificate:
    k = inst.k
    if len(source_stack) != k - 1 or len(target_stack) != k - 1:
        raise ValueError(f"endpoint stacks must have length {k - 1}")
    eng = _Engine(inst, universe, sanity_checks)
    start: SymbolicState = ((tuple(source_stack),), ())
    target: SymbolicState = ((tuple(target_stack),), ())

    cert = SearchCertificate(
        reached=False,
        first_depth=None,
        depth_budget=depth_budget,
        frontier_sizes=[],
        states_seen=0,
        dedup_hits=0,
        dominated=0,
        universe_size=len(eng.universe),
        state_cap=state_cap,
    )

    best_depth: dict[SymbolicState, int] = {}
    by_skeleton: dict[tuple, list[tuple[tuple, int]]] = {}

    def admit(state: SymbolicState, depth: int) -> bool:
        """Record a state; False when an equal or dominating state is
        already known at the same or smaller depth."""
        prev = best_depth.get(state)
        if prev is not None and prev <= depth:
            cert.dedup_hits += 1
            return False
        skel = state[0]
        bucket = by_skeleton.setdefault(skel, [])
        for masks, d0 in bucket:
            if d0 <= depth and _dominates(masks, state[1]):
                cert.dominated += 1
                return False
        best_depth[state] = depth
        bucket.append((state[1], depth))
        cert.states_seen += 1
        if cert.states_seen > state_cap:
            raise BudgetExceeded(
                f"state cap {state_cap} exceeded at depth {depth}", cert
            )
        if collect is not None:
            collect.append((state, depth))
        if state == target and (cert.first_depth is None or depth < cert.first_depth):
            cert.reached = True
            cert.first_depth = depth
        return True

    def close_flips(states: list[SymbolicState], depth: int) -> list[SymbolicState]:
        out = list(states)
        queue = list(states)
        while queue:
            st = queue.pop()
            fl = eng.flip(st)
            if fl is not None and admit(fl, depth):
                out.append(fl)
                queue.append(fl)
        return out

    frontier = []
    if admit(start, 0):
        frontier.append(start)
    frontier = close_flips(frontier, 0)
    cert.frontier_sizes.append(len(frontier))
    if cert.reached and stop_on_target:
        return cert

    for depth in range(1, depth_budget + 1):
        nxt: list[SymbolicState] = []
        for state in frontier:
            for succ in eng.successors(state):
                if admit(succ, depth):
                    nxt.append(succ)
        nxt = close_flips(nxt, depth)
        if sanity_checks:
            _assert_prefix_containment(source_stack, nxt, depth, k)
        cert.frontier_sizes.append(len(nxt))
        if cert.reached and stop_on_target:
            return cert
        if not nxt:
            break
        frontier = nxt
    return cert


def _assert_prefix_containment(
    source_stack: Stack, states: list[SymbolicState], depth: int, k: int
) -> None:
    """Up to depth k-2, each state retains the bottom of the source
    stack on some node: at most `depth` vector pops have happened, and
    they only ever shave tops."""
    if depth > k - 2:
        return
    keep = tuple(source_stack[: k - 1 - depth])
    for stacks, _ in states:
        if not any(s[: len(keep)] == keep for s in stacks):
            raise AssertionError(
                f"state at depth {depth} lost the protected bottom prefix {keep}"
            )


def bounded_search(
    inst: OvInstance,
    source_stack: Stack,
    target_stack: Stack,
    depth_budget: int,
    universe: list[CoordArray] | None = None,
    state_cap: int = DEFAULT_STATE_CAP,
    sanity_checks: bool = False,
) -> SearchCertificate:
    """Can the one-node configuration on `target_stack` be reached from
    the one on `source_stack` within `depth_budget` operations?"""
    return _run(
        inst,
        tuple(source_stack),
        tuple(target_stack),
        depth_budget,
        universe,
        state_cap,
        sanity_checks,
        stop_on_target=True,
        collect=None,
    )


def endpoint_separation(
    inst: OvInstance,
    witness: OvWitness,
    depth_budget: int | None = None,
    universe: list[CoordArray] | None = None,
    state_cap: int = DEFAULT_STATE_CAP,
    sanity_checks: bool = False,
) -> SearchCertificate:
    """Bounded search between the two endpoint configurations built
    from a common-zero witness tuple (default budget 2k-2, one short of
    the separation the construction promises)."""
    k = inst.k
    idx = witness.indices
    if len(idx) != k:
        raise ValueError(f"witness must have {k} entries")
    if depth_budget is None:
        depth_budget = 2 * k - 2
    source = tuple(idx[: k - 1])
    target = tuple(reversed(idx[1:]))
    return bounded_search(
        inst,
        source,
        target,
        depth_budget,
        universe=universe,
        state_cap=state_cap,
        sanity_checks=sanity_checks,
    )


def _expand(state: SymbolicState, universe: list[CoordArray], kp: int) -> Iterator[Configuration]:
    """All concrete canonical configurations a symbolic state stands
    for: every per-slot choice of a still-allowed array."""
    stacks, edges = state
    t = len(stacks)
    order = tuple(range(1, t + 1))
    slot_choices = []
    for e in edges:
        for mask in e:
            slot_choices.append(
                [universe[i] for i in range(len(universe)) if mask >> i & 1]
            )
    width = 2 * kp + 1
    for pick in itertools.product(*slot_choices):
        constraints = tuple(
            EdgeConstraint(
                pick[i * width : i * width + kp],
                pick[i * width + kp : i * width + 2 * kp],
                pick[i * width + 2 * kp],
            )
            for i in range(t - 1)
        )
        yield Configuration(order, stacks, constraints)


def reachable_sets(
    inst: OvInstance,
    source_stack: Stack,
    depth_budget: int,
    universe: list[CoordArray],
    state_cap: int = DEFAULT_STATE_CAP,
) -> list[set[Configuration]]:
    """Concrete canonical configurations first reached at each depth,
    expanded from the symbolic search over a (small!) fixed universe.
    Index d of the result holds exactly the configurations whose
    minimum operation distance from the source is d."""
    collected: list[tuple[SymbolicState, int]] = []
    kp = k_prime(inst.k)
    # target is irrelevant here; search the whole ball
    dummy_target = tuple(reversed(tuple(source_stack)))
    _run(
        inst,
        tuple(source_stack),
        dummy_target,
        depth_budget,
        universe,
        state_cap,
        sanity_checks=False,
        stop_on_target=False,
        collect=collected,
    )
    first: dict[Configuration, int] = {}
    for state, depth in sorted(collected, key=lambda sd: sd[1]):
        for config in _expand(state, universe, kp):
            if config not in first:
                first[config] = depth
    out: list[set[Configuration]] = [set() for _ in range(depth_budget + 1)]
    for config, depth in first.items():
        out[depth].add(config)
    return out
