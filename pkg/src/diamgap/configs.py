"""Star configurations of vector stacks and the operations between them.

A configuration is a star of labeled nodes (root = center), each node
carrying a stack of vector indices, each root-leaf edge carrying an
edge constraint of 2k'+1 coordinate arrays (k' = floor(k/2)+1): k'
arrays read against each endpoint plus one shared array.  Validity =
every node satisfies its required constraint slots and the root stack
holds at least (k-2)/2 vectors (checked as 2*|S_root| >= k-2, no
rounding).

Operations come in insertion/deletion halves (vector push/pop, node
attach/detach at the largest or second-largest order position) plus a
flip that swaps the two nodes of a two-node configuration.  A full
operation is an insertion, an optional flip, then a deletion, with
every intermediate required to be valid; an optional trailing flip
rides along as a zero-cost equivalence move.

`connecting_path` constructs, for any two valid size-k configurations
over an instance with no k-wise common-zero tuple, a path of at most k
full operations between them: drain one configuration to a common
two-node middle (its edge constraint built by `bridge_constraint`) and
splice on the reversed inverse of the other side's drain.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, replace
from typing import Iterator, Literal, Mapping, NamedTuple, Union

from .ovcore import GenerationFailed, NoCommonCoordinate, OvInstance
from .stacks import CoordArray, Stack, common_coord_array, satisfies

__all__ = [
    "k_prime",
    "EdgeConstraint",
    "Configuration",
    "SlotRef",
    "VecIns",
    "VecDel",
    "NodeIns",
    "NodeDel",
    "FullOp",
    "IllegalHalfOp",
    "InvalidIntermediate",
    "PathConstructionFailed",
    "required_arrays",
    "resolve_slot",
    "is_valid",
    "apply_full_op",
    "apply_ops",
    "inverse_full_op",
    "canonicalize",
    "apply_permutation",
    "permute_op",
    "equivalent",
    "bridge_constraint",
    "connecting_path",
    "random_valid_configuration",
    "enumerate_valid_configurations",
    "count_vertices_bound",
]


def k_prime(k: int) -> int:
    return k // 2 + 1


class IllegalHalfOp(ValueError):
    """A half-operation's structural precondition is broken."""


class InvalidIntermediate(RuntimeError):
    """Some intermediate configuration of a full operation is invalid,
    i.e. the attempted move is not an edge."""


class PathConstructionFailed(RuntimeError):
    """The constructive path builder hit an invalid step; this signals a
    genuine counterexample and must never be swallowed."""


@dataclass(frozen=True)
class EdgeConstraint:
    """2k'+1 coordinate arrays on one root-leaf edge.

    root_arrays[i-1] is the i-th array read against the root endpoint,
    leaf_arrays likewise for the leaf, star is shared by both.
    """

    root_arrays: tuple[CoordArray, ...]
    leaf_arrays: tuple[CoordArray, ...]
    star: CoordArray

    def __post_init__(self) -> None:
        if len(self.root_arrays) != len(self.leaf_arrays):
            raise ValueError("endpoint array groups must have equal length")

    def flipped(self) -> "EdgeConstraint":
        """The same constraint with endpoint roles exchanged (arrays
        stay attached to their node when a flip swaps root and leaf)."""
        return EdgeConstraint(self.leaf_arrays, self.root_arrays, self.star)


@dataclass(frozen=True)
class Configuration:
    """Star of labeled nodes: order[0] is the root, order fixes the
    total node order, stacks and (for non-root nodes) edge constraints
    align with it."""

    order: tuple[int, ...]
    stacks: tuple[Stack, ...]
    constraints: tuple[EdgeConstraint, ...]

    def __post_init__(self) -> None:
        if not self.order:
            raise ValueError("a configuration has at least one node")
        if len(set(self.order)) != len(self.order):
            raise ValueError("node labels must be distinct")
        if any(not isinstance(v, int) or v < 1 for v in self.order):
            raise ValueError("node labels are positive integers")
        if len(self.stacks) != len(self.order):
            raise ValueError("one stack per node")
        if len(self.constraints) != len(self.order) - 1:
            raise ValueError("one edge constraint per non-root node")

    @property
    def root(self) -> int:
        return self.order[0]

    @property
    def num_nodes(self) -> int:
        return len(self.order)

    @property
    def size(self) -> int:
        return len(self.order) + sum(len(s) for s in self.stacks)

    def position(self, label: int) -> int:
        """1-based position of a node in the order."""
        try:
            return self.order.index(label) + 1
        except ValueError:
            raise KeyError(f"no node labeled {label}") from None

    def stack_of(self, label: int) -> Stack:
        return self.stacks[self.position(label) - 1]

    def constraint_for(self, label: int) -> EdgeConstraint:
        pos = self.position(label)
        if pos == 1:
            raise KeyError("the root has no incident constraint slot of its own")
        return self.constraints[pos - 2]


class SlotRef(NamedTuple):
    """One constraint slot: the edge is named by its leaf node; side is
    which array group; index is 1-based within the group (0 for the
    shared array)."""

    leaf: int
    side: Literal["root", "leaf", "star"]
    index: int


def required_arrays(config: Configuration, label: int) -> frozenset[SlotRef]:
    """Constraint slots the given node's stack must satisfy.

    Two sources: every slot on the node's own side of each incident
    edge (plus the shared array), and, for each node later in the
    order, the leaf-side slot indexed by this node's position.
    """
    pos = config.position(label)
    refs: set[SlotRef] = set()
    if pos == 1:
        for i, leaf in enumerate(config.order[1:]):
            width = len(config.constraints[i].root_arrays)
            refs.update(SlotRef(leaf, "root", j) for j in range(1, width + 1))
            refs.add(SlotRef(leaf, "star", 0))
    else:
        width = len(config.constraints[pos - 2].leaf_arrays)
        refs.update(SlotRef(label, "leaf", j) for j in range(1, width + 1))
        refs.add(SlotRef(label, "star", 0))
    for later in config.order[pos:]:
        refs.add(SlotRef(later, "leaf", pos))
    return frozenset(refs)


def resolve_slot(config: Configuration, ref: SlotRef) -> CoordArray:
    constraint = config.constraint_for(ref.leaf)
    if ref.side == "star":
        return constraint.star
    group = constraint.root_arrays if ref.side == "root" else constraint.leaf_arrays
    if not 1 <= ref.index <= len(group):
        raise IndexError(f"slot index {ref.index} outside 1..{len(group)}")
    return group[ref.index - 1]


def is_valid(config: Configuration, inst: OvInstance) -> bool:
    """Root-stack size bound plus every required slot satisfied."""
    k = inst.k
    limit = 2 * k_prime(k)
    if any(not 1 <= v <= limit for v in config.order):
        return False
    if 2 * len(config.stacks[0]) < k - 2:
        return False
    for label in config.order:
        stack = config.stack_of(label)
        for ref in required_arrays(config, label):
            try:
                arr = resolve_slot(config, ref)
            except IndexError:
                return False  # more nodes than the slot table supports
            if not satisfies(stack, arr, inst):
                return False
    return True


# --- half operations -------------------------------------------------


@dataclass(frozen=True)
class VecIns:
    node: int
    vector: int


@dataclass(frozen=True)
class VecDel:
    node: int


@dataclass(frozen=True)
class NodeIns:
    label: int
    constraint: EdgeConstraint
    placement: Literal["largest", "second_largest"] = "largest"


@dataclass(frozen=True)
class NodeDel:
    label: int


Insertion = Union[VecIns, NodeIns]
Deletion = Union[VecDel, NodeDel]


@dataclass(frozen=True)
class FullOp:
    """Insertion, optional flip, deletion, optional trailing flip (the
    trailing flip is a zero-cost equivalence move bundled into the
    step)."""

    insertion: Insertion
    mid_flip: bool
    deletion: Deletion
    trailing_flip: bool = False


def _apply_insertion(config: Configuration, ins: Insertion, kp: int) -> Configuration:
    if isinstance(ins, VecIns):
        pos = _position_or_illegal(config, ins.node)
        stacks = list(config.stacks)
        stacks[pos - 1] = stacks[pos - 1] + (ins.vector,)
        return replace(config, stacks=tuple(stacks))
    if not 1 <= ins.label <= 2 * kp:
        raise IllegalHalfOp(f"label {ins.label} outside 1..{2 * kp}")
    if ins.label in config.order:
        raise IllegalHalfOp(f"label {ins.label} already in use")
    t = config.num_nodes
    if ins.placement == "largest":
        order = config.order + (ins.label,)
        stacks = config.stacks + ((),)
        constraints = config.constraints + (ins.constraint,)
    elif ins.placement == "second_largest":
        if t < 2:
            raise IllegalHalfOp("second-largest insertion would displace the root")
        order = config.order[:-1] + (ins.label,) + config.order[-1:]
        stacks = config.stacks[:-1] + ((),) + config.stacks[-1:]
        constraints = (
            config.constraints[: t - 2] + (ins.constraint,) + config.constraints[t - 2 :]
        )
    else:
        raise IllegalHalfOp(f"unknown placement {ins.placement!r}")
    return Configuration(order, stacks, constraints)


def _apply_deletion(config: Configuration, dele: Deletion) -> Configuration:
    if isinstance(dele, VecDel):
        pos = _position_or_illegal(config, dele.node)
        if not config.stacks[pos - 1]:
            raise IllegalHalfOp(f"node {dele.node} has an empty stack")
        stacks = list(config.stacks)
        stacks[pos - 1] = stacks[pos - 1][:-1]
        return replace(config, stacks=tuple(stacks))
    pos = _position_or_illegal(config, dele.label)
    t = config.num_nodes
    if pos == 1:
        raise IllegalHalfOp("cannot delete the root")
    if pos not in (t, t - 1):
        raise IllegalHalfOp("node deletion must target the largest or second-largest node")
    if config.stacks[pos - 1]:
        raise IllegalHalfOp("node deletion requires an empty stack")
    order = config.order[: pos - 1] + config.order[pos:]
    stacks = config.stacks[: pos - 1] + config.stacks[pos:]
    constraints = config.constraints[: pos - 2] + config.constraints[pos - 1 :]
    return Configuration(order, stacks, constraints)


def _apply_flip(config: Configuration) -> Configuration:
    if config.num_nodes != 2:
        raise IllegalHalfOp("flip requires exactly two nodes")
    if len(config.stacks[0]) != len(config.stacks[1]):
        raise IllegalHalfOp("flip requires equal stack sizes")
    return Configuration(
        order=(config.order[1], config.order[0]),
        stacks=(config.stacks[1], config.stacks[0]),
        constraints=(config.constraints[0].flipped(),),
    )


def _position_or_illegal(config: Configuration, label: int) -> int:
    try:
        return config.position(label)
    except KeyError as exc:
        raise IllegalHalfOp(str(exc)) from None


def apply_full_op(config: Configuration, op: FullOp, inst: OvInstance) -> Configuration:
    """Apply a full operation, validating every intermediate.

    The caller supplies a valid starting configuration; structural
    problems raise IllegalHalfOp, an invalid intermediate (the move is
    not an edge) raises InvalidIntermediate.  At least one of the two
    endpoints must have two or more nodes.
    """
    kp = k_prime(inst.k)
    mid = _apply_insertion(config, op.insertion, kp)
    if not is_valid(mid, inst):
        raise InvalidIntermediate("insertion mid-state invalid")
    cur = mid
    if op.mid_flip:
        cur = _apply_flip(cur)
        if not is_valid(cur, inst):
            raise InvalidIntermediate("flipped mid-state invalid")
    end = _apply_deletion(cur, op.deletion)
    if not is_valid(end, inst):
        raise InvalidIntermediate("end state invalid")
    if config.num_nodes < 2 and end.num_nodes < 2:
        raise InvalidIntermediate("neither endpoint has two nodes")
    if op.trailing_flip:
        end = _apply_flip(end)
        if not is_valid(end, inst):
            raise InvalidIntermediate("trailing flip result invalid")
    return end


def apply_ops(
    config: Configuration, ops: list[FullOp], inst: OvInstance
) -> Configuration:
    for op in ops:
        config = apply_full_op(config, op, inst)
    return config


def inverse_full_op(config: Configuration, op: FullOp, result: Configuration) -> FullOp:
    """The full operation mapping `result` back to `config`.

    Defined for ops without a trailing flip: run the insertion (and
    flip) forward to recover the mid-state, then swap the roles of the
    two halves.
    """
    if op.trailing_flip:
        raise ValueError("inverse is defined for operations without a trailing flip")
    kp = k_prime(config.size)  # op was valid from config, so size == k
    mid = _apply_insertion(config, op.insertion, kp)
    if op.mid_flip:
        mid = _apply_flip(mid)
    if _apply_deletion(mid, op.deletion) != result:
        raise ValueError("operation does not map the given configuration to the result")

    if isinstance(op.deletion, VecDel):
        new_ins: Insertion = VecIns(op.deletion.node, mid.stack_of(op.deletion.node)[-1])
    else:
        pos = mid.position(op.deletion.label)
        placement = "largest" if pos == mid.num_nodes else "second_largest"
        new_ins = NodeIns(op.deletion.label, mid.constraint_for(op.deletion.label), placement)
    if isinstance(op.insertion, VecIns):
        new_del: Deletion = VecDel(op.insertion.node)
    else:
        new_del = NodeDel(op.insertion.label)
    return FullOp(new_ins, op.mid_flip, new_del, False)


# --- relabeling ------------------------------------------------------


def canonicalize(config: Configuration) -> tuple[Configuration, dict[int, int]]:
    """Relabel nodes to 1..t in order position; returns the canonical
    form and the applied label map.  Two configurations are equivalent
    exactly when their canonical forms are equal."""
    perm = {old: i + 1 for i, old in enumerate(config.order)}
    canon = Configuration(
        tuple(range(1, config.num_nodes + 1)), config.stacks, config.constraints
    )
    return canon, perm


def apply_permutation(config: Configuration, perm: Mapping[int, int]) -> Configuration:
    """Relabel nodes; stacks, order positions, and constraints follow
    their node."""
    try:
        order = tuple(perm[v] for v in config.order)
    except KeyError as exc:
        raise ValueError(f"permutation undefined on label {exc}") from None
    return Configuration(order, config.stacks, config.constraints)


def permute_op(op: FullOp, perm: Mapping[int, int]) -> FullOp:
    """Rewrite an operation's node references under a relabeling."""

    def map_label(v: int) -> int:
        return perm.get(v, v)

    ins: Insertion
    if isinstance(op.insertion, VecIns):
        ins = VecIns(map_label(op.insertion.node), op.insertion.vector)
    else:
        ins = replace(op.insertion, label=map_label(op.insertion.label))
    dele: Deletion
    if isinstance(op.deletion, VecDel):
        dele = VecDel(map_label(op.deletion.node))
    else:
        dele = NodeDel(map_label(op.deletion.label))
    return FullOp(ins, op.mid_flip, dele, op.trailing_flip)


def equivalent(a: Configuration, b: Configuration) -> bool:
    return canonicalize(a)[0] == canonicalize(b)[0]


# --- the constructive path -------------------------------------------


def bridge_constraint(
    config: Configuration, other: Configuration, inst: OvInstance
) -> EdgeConstraint:
    """Edge constraint for a fresh edge joining the two roots.

    Root side reads against `config`'s root, leaf side against
    `other`'s root.  Slot i pairs one root's full stack with the other
    configuration's i-th node stack (empty beyond its node count), so
    every slot is satisfied by all the stacks that will ever be
    obligated to it while the two sides drain.
    """
    kp = k_prime(inst.k)

    def side(primary: Configuration, secondary: Configuration) -> tuple[CoordArray, ...]:
        arrays = []
        for i in range(1, kp + 1):
            partner = secondary.stacks[i - 1] if i <= secondary.num_nodes else ()
            arrays.append(common_coord_array(primary.stacks[0], partner, inst))
        return tuple(arrays)

    constraint = EdgeConstraint(
        root_arrays=side(config, other),
        leaf_arrays=side(other, config),
        star=common_coord_array(config.stacks[0], other.stacks[0], inst),
    )
    for arrays, stack in (
        (constraint.root_arrays, config.stacks[0]),
        (constraint.leaf_arrays, other.stacks[0]),
    ):
        for arr in arrays + (constraint.star,):
            if not satisfies(stack, arr, inst):
                raise RuntimeError("bridge constraint failed its own post-check")
    return constraint


def _drain_ops(
    start: Configuration, other: Configuration, constraint: EdgeConstraint, k: int
) -> list[FullOp]:
    """Full ops taking `start` to the two-node middle: attach a node for
    `other`'s root and fill it bottom-up while draining `start` down to
    its root's bottom vectors."""
    half = k // 2
    low = (k - 2) // 2
    keep_root = (k - 1) // 2  # ceil((k-2)/2)
    fresh = other.order[0]
    insertions: list[Insertion] = [NodeIns(fresh, constraint, "largest")]
    insertions += [VecIns(fresh, other.stacks[0][i]) for i in range(low)]
    deletions: list[Deletion] = []
    for pos in range(start.num_nodes, 1, -1):
        node = start.order[pos - 1]
        deletions += [VecDel(node)] * len(start.stacks[pos - 1])
        deletions.append(NodeDel(node))
    deletions += [VecDel(start.order[0])] * (len(start.stacks[0]) - keep_root)
    if len(insertions) != half or len(deletions) != half:
        raise PathConstructionFailed(
            f"drain bookkeeping off: {len(insertions)} insertions, "
            f"{len(deletions)} deletions, expected {half}"
        )
    return [FullOp(ins, False, dele, False) for ins, dele in zip(insertions, deletions)]


def connecting_path(
    config: Configuration, other: Configuration, inst: OvInstance
) -> list[FullOp]:
    """A path of at most k full operations from `config` to a
    configuration equivalent to `other`.

    Requires both inputs valid with size k and an instance where every
    k-tuple of vectors shares a one-coordinate.  Construction failure
    raises PathConstructionFailed: it would be a counterexample, so it
    aborts loudly rather than degrade.
    """
    k = inst.k
    if config.size != k or other.size != k:
        raise ValueError(f"both configurations must have size {k}")
    if not is_valid(config, inst) or not is_valid(other, inst):
        raise ValueError("both configurations must be valid")
    kp = k_prime(k)

    free = [v for v in range(1, 2 * kp + 1) if v not in config.order]
    if len(free) < other.num_nodes:
        raise PathConstructionFailed("not enough labels to separate the two sides")
    relabel = {old: free[i] for i, old in enumerate(other.order)}
    target = apply_permutation(other, relabel)

    try:
        bridge = bridge_constraint(config, target, inst)
    except NoCommonCoordinate as exc:
        raise PathConstructionFailed(f"bridge constraint unavailable: {exc}") from exc

    side_a = _drain_ops(config, target, bridge, k)
    side_b = _drain_ops(target, config, bridge.flipped(), k)

    if k % 2 == 0:
        side_a[-1] = replace(side_a[-1], trailing_flip=True)
        forward = side_a
    else:
        low = (k - 2) // 2
        join = FullOp(
            VecIns(target.order[0], target.stacks[0][low]),
            True,
            VecDel(config.order[0]),
            False,
        )
        forward = side_a + [join]

    try:
        states = [target]
        for op in side_b:
            states.append(apply_full_op(states[-1], op, inst))
        back = [
            inverse_full_op(states[i], side_b[i], states[i + 1])
            for i in range(len(side_b))
        ]
        ops = forward + back[::-1]

        cur = config
        for op in ops:
            cur = apply_full_op(cur, op, inst)
    except (IllegalHalfOp, InvalidIntermediate) as exc:
        raise PathConstructionFailed(f"path step rejected: {exc}") from exc
    if cur != target:
        raise PathConstructionFailed("path did not land on the relabeled goal")
    if len(ops) > k:
        raise PathConstructionFailed(f"path uses {len(ops)} > {k} operations")
    return ops


# --- sampling and counting -------------------------------------------


def _shapes(k: int) -> list[tuple[int, ...]]:
    """All stack-size profiles (root first) of size-k configurations
    meeting the root bound."""
    min_root = (k - 1) // 2  # smallest integer with 2*r >= k-2
    out: list[tuple[int, ...]] = []
    for t in range(1, k + 1):
        budget = k - t
        if budget < min_root:
            break
        for rest in _compositions(budget - min_root, t):
            sizes = (min_root + rest[0],) + rest[1:]
            out.append(sizes)
    return out


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _recipe_constraints(
    order: tuple[int, ...], stacks: tuple[Stack, ...], inst: OvInstance
) -> tuple[EdgeConstraint, ...]:
    """Fill every slot with a common coordinate array of exactly the
    stacks obligated to it."""
    kp = k_prime(inst.k)
    out = []
    for pos in range(2, len(order) + 1):
        leaf_stack = stacks[pos - 1]
        roots = tuple(
            common_coord_array(stacks[0], (), inst) for _ in range(kp)
        )
        leaves = []
        for j in range(1, kp + 1):
            partner = stacks[j - 1] if j < pos and j <= len(order) else ()
            leaves.append(common_coord_array(leaf_stack, partner, inst))
        star = common_coord_array(stacks[0], leaf_stack, inst)
        out.append(EdgeConstraint(roots, tuple(leaves), star))
    return tuple(out)


def random_valid_configuration(
    inst: OvInstance, k: int, seed: int, max_tries: int = 200
) -> Configuration:
    """Random valid size-k configuration over an instance with no
    k-wise common-zero tuple."""
    if k != inst.k:
        raise ValueError(f"instance is for k={inst.k}, asked for k={k}")
    rng = random.Random(seed)
    shapes = _shapes(k)
    kp = k_prime(k)
    for _ in range(max_tries):
        sizes = rng.choice(shapes)
        labels = rng.sample(range(1, 2 * kp + 1), len(sizes))
        stacks = tuple(
            tuple(rng.randrange(inst.n) for _ in range(sz)) for sz in sizes
        )
        try:
            constraints = _recipe_constraints(tuple(labels), stacks, inst)
        except NoCommonCoordinate:
            continue
        candidate = Configuration(tuple(labels), stacks, constraints)
        if is_valid(candidate, inst):
            return candidate
    raise GenerationFailed(f"no valid configuration found in {max_tries} tries")


def enumerate_valid_configurations(
    inst: OvInstance,
    k: int,
    universe: list[CoordArray] | None = None,
    canonical_only: bool = False,
) -> Iterator[Configuration]:
    """Exhaustively yield valid size-k configurations.

    With a universe, constraint slots range over that array list only;
    otherwise over all of [d]^(k-1).  Intended for micro instances —
    the space is astronomically large in general.
    """
    if k != inst.k:
        raise ValueError(f"instance is for k={inst.k}, asked for k={k}")
    kp = k_prime(k)
    if universe is None:
        universe = [
            tuple(c + 1 for c in combo)
            for combo in itertools.product(range(inst.d), repeat=k - 1)
        ]
    labels_pool = range(1, 2 * kp + 1)
    for sizes in _shapes(k):
        t = len(sizes)
        label_choices = (
            [tuple(range(1, t + 1))] if canonical_only else itertools.permutations(labels_pool, t)
        )
        for order in label_choices:
            for flat in itertools.product(range(inst.n), repeat=k - t):
                stacks = []
                at = 0
                for sz in sizes:
                    stacks.append(tuple(flat[at : at + sz]))
                    at += sz
                slot_count = (t - 1) * (2 * kp + 1)
                for fill in itertools.product(universe, repeat=slot_count):
                    constraints = tuple(
                        EdgeConstraint(
                            fill[e * (2 * kp + 1) : e * (2 * kp + 1) + kp],
                            fill[e * (2 * kp + 1) + kp : e * (2 * kp + 1) + 2 * kp],
                            fill[e * (2 * kp + 1) + 2 * kp],
                        )
                        for e in range(t - 1)
                    )
                    candidate = Configuration(tuple(order), tuple(stacks), constraints)
                    if is_valid(candidate, inst):
                        yield candidate


def count_vertices_bound(inst: OvInstance, k: int, exact_limit: int = 500_000) -> dict:
    """Accounting record for the size-k configuration count.

    total_bound = (shapes x label orders) x stack fillings x array
    fillings, with the slot count capped by (k'-1)(2k'+1).  When the
    bound itself is small the exact valid count is enumerated for
    comparison (micro instances only).
    """
    if k != inst.k:
        raise ValueError(f"instance is for k={inst.k}, asked for k={k}")
    kp = k_prime(k)
    slot_exponent = (kp - 1) * (2 * kp + 1)
    shape_orders = 0
    for sizes in _shapes(k):
        t = len(sizes)
        arrangements = 1
        for i in range(t):
            arrangements *= 2 * kp - i
        shape_orders += arrangements
    stack_bound = inst.n ** (k - 1)
    arrays_per_slot = inst.d ** (k - 1)
    array_bound = arrays_per_slot**slot_exponent
    total = shape_orders * stack_bound * array_bound
    exact = None
    if total <= exact_limit:
        exact = sum(1 for _ in enumerate_valid_configurations(inst, k))
    return {
        "k": k,
        "k_prime": kp,
        "slot_exponent": slot_exponent,
        "shape_orders": shape_orders,
        "stack_fillings_bound": stack_bound,
        "array_fillings_bound": array_bound,
        "total_bound": total,
        "exact_count": exact,
    }
