"""Solution-sets, set-level search spaces and their neighbourhoods.

A :class:`SolutionSet` is an immutable snapshot of distinct bit strings
together with their objective vectors. Replacement keeps the slot of the
replaced member, so the objective arrays of a set and its neighbour differ
in exactly one row. Enumeration walks members in lexicographic order of
their bit strings and bits in increasing index order.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator

import numpy as np

from .errors import ExhaustedNeighborhood, InfeasibleCardinality, InvalidParams
from .landscape import RhoMnkInstance, as_bits, bits_to_str, evaluate_incremental, evaluate_many
from .pareto import _filter_tuples, hypervolume

# rejection draws before falling back to enumerating the valid moves
_MAX_REJECTIONS = 64


@dataclass(frozen=True, eq=False)
class SolutionSet:
    """Distinct solutions (rows of ``members``) with cached objectives."""

    members: np.ndarray
    objectives: np.ndarray

    def __post_init__(self):
        members = np.array(self.members, dtype=np.uint8, ndmin=2)
        objectives = np.array(self.objectives, dtype=np.float64, ndmin=2)
        if members.shape[0] != objectives.shape[0]:
            raise InvalidParams("members and objectives must have the same number of rows")
        if len({row.tobytes() for row in members}) != members.shape[0]:
            raise InvalidParams("solution-set members must be distinct")
        members.setflags(write=False)
        objectives.setflags(write=False)
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "objectives", objectives)

    @classmethod
    def from_solutions(cls, instance: RhoMnkInstance, solutions) -> "SolutionSet":
        rows = [as_bits(s, instance.n) for s in solutions]
        members = np.array(rows, dtype=np.uint8).reshape(len(rows), instance.n)
        return cls(members, evaluate_many(instance, members))

    def __len__(self) -> int:
        return self.members.shape[0]

    def keys(self) -> frozenset:
        """Members as a frozenset of bytes; the identity of the set."""
        return frozenset(row.tobytes() for row in self.members)

    def __eq__(self, other):
        if not isinstance(other, SolutionSet):
            return NotImplemented
        return self.keys() == other.keys()

    def __hash__(self):
        return hash(self.keys())

    def as_strings(self) -> list[str]:
        return sorted(bits_to_str(row) for row in self.members)

    def canonical_order(self) -> np.ndarray:
        """Member indices sorted lexicographically by bit string."""
        return np.array(sorted(range(len(self)), key=lambda j: self.members[j].tobytes()), dtype=int)

    def fitness(self, ref=None) -> float:
        """Hypervolume of the cached objective vectors (reference 0 by default)."""
        return hypervolume(self.objectives, ref)

    def replace(self, index: int, bits: np.ndarray, objective: np.ndarray) -> "SolutionSet":
        members = self.members.copy()
        objectives = self.objectives.copy()
        members[index] = bits
        objectives[index] = objective
        return SolutionSet(members, objectives)


class SearchSpaceKind(Enum):
    FIXED_SIZE = "fixed-size"
    BOUNDED = "bounded"
    MUTUALLY_NONDOMINATED = "mutually-nondominated"
    BOUNDED_NONDOMINATED = "bounded-nondominated"
    UNRESTRICTED = "unrestricted"


@dataclass(frozen=True)
class SearchSpace:
    """A set-level search space: a variant plus its size bound where relevant."""

    kind: SearchSpaceKind
    mu: int | None = None

    def __post_init__(self):
        kind = SearchSpaceKind(self.kind)
        object.__setattr__(self, "kind", kind)
        sized = kind in (
            SearchSpaceKind.FIXED_SIZE,
            SearchSpaceKind.BOUNDED,
            SearchSpaceKind.BOUNDED_NONDOMINATED,
        )
        if sized and (self.mu is None or self.mu < 1):
            raise InvalidParams(f"{kind.value} search space needs mu >= 1")


def _mutually_nondominated(objectives: np.ndarray) -> bool:
    pts = [tuple(r) for r in objectives.tolist()]
    for a in range(len(pts)):
        for b in range(len(pts)):
            if a != b:
                pa, pb = pts[a], pts[b]
                if all(x >= y for x, y in zip(pa, pb)) and any(x > y for x, y in zip(pa, pb)):
                    return False
    return True


def member_of(space: SearchSpace, solution_set: SolutionSet) -> bool:
    """Whether ``solution_set`` satisfies the cardinality and dominance rules of ``space``."""
    size = len(solution_set)
    kind = space.kind
    if kind is SearchSpaceKind.UNRESTRICTED:
        return True
    if kind is SearchSpaceKind.FIXED_SIZE:
        return size == space.mu
    if kind is SearchSpaceKind.BOUNDED:
        return size <= space.mu
    nondom = _mutually_nondominated(solution_set.objectives)
    if kind is SearchSpaceKind.MUTUALLY_NONDOMINATED:
        return nondom
    return nondom and size <= space.mu


def random_set(instance: RhoMnkInstance, mu: int, rng) -> SolutionSet:
    """``mu`` distinct uniform bit strings, stored in lexicographic order."""
    rng = np.random.default_rng(rng)
    n = instance.n
    if mu < 1:
        raise InfeasibleCardinality(f"mu must be >= 1, got {mu}")
    if n < 63 and mu > 2**n:
        raise InfeasibleCardinality(f"cannot pick {mu} distinct strings of length {n}")
    if n <= 16:
        codes = rng.choice(2**n, size=mu, replace=False)
        members = ((codes[:, None] >> np.arange(n - 1, -1, -1)) & 1).astype(np.uint8)
    else:
        rows: dict[bytes, np.ndarray] = {}
        while len(rows) < mu:
            cand = rng.integers(0, 2, size=n, dtype=np.uint8)
            rows.setdefault(cand.tobytes(), cand)
        members = np.array(list(rows.values()), dtype=np.uint8)
    members = members[np.lexsort(members.T[::-1])]
    return SolutionSet(members, evaluate_many(instance, members))


def valid_replacement_moves(solution_set: SolutionSet) -> list[tuple[int, int]]:
    """Every non-colliding ``(member index, bit)`` move in enumeration order."""
    keys = solution_set.keys()
    moves = []
    for j in solution_set.canonical_order():
        row = solution_set.members[j]
        for b in range(row.shape[0]):
            flipped = row.copy()
            flipped[b] ^= 1
            if flipped.tobytes() not in keys:
                moves.append((int(j), b))
    return moves


def draw_replacement_move(solution_set: SolutionSet, rng, keys=None) -> tuple[int, int]:
    """Uniformly random non-colliding ``(member index, bit)`` move.

    Rejection sampling over the ``|A| * n`` grid; after repeated collisions
    the valid moves are enumerated and one is drawn directly.
    """
    size, n = solution_set.members.shape
    if size == 0:
        raise ExhaustedNeighborhood("the empty set has no replacement neighbours")
    if keys is None:
        keys = solution_set.keys()
    for _ in range(_MAX_REJECTIONS):
        j = int(rng.integers(size))
        b = int(rng.integers(n))
        flipped = solution_set.members[j].copy()
        flipped[b] ^= 1
        if flipped.tobytes() not in keys:
            return j, b
    moves = valid_replacement_moves(solution_set)
    if not moves:
        raise ExhaustedNeighborhood("every replacement collides with an existing member")
    return moves[int(rng.integers(len(moves)))]


def apply_move(instance: RhoMnkInstance, solution_set: SolutionSet, j: int, b: int) -> SolutionSet:
    old = solution_set.members[j]
    flipped = old.copy()
    flipped[b] ^= 1
    obj = evaluate_incremental(instance, old, b, solution_set.objectives[j])
    return solution_set.replace(j, flipped, obj)


def sample_replacement_neighbor(instance: RhoMnkInstance, solution_set: SolutionSet, rng) -> SolutionSet:
    """Replace a random member by one of its random Hamming-1 neighbours.

    Candidates already in the set are rejected and redrawn.
    """
    rng = np.random.default_rng(rng)
    j, b = draw_replacement_move(solution_set, rng)
    return apply_move(instance, solution_set, j, b)


def enumerate_replacement_neighbors(
    instance: RhoMnkInstance, solution_set: SolutionSet
) -> Iterator[SolutionSet]:
    for j, b in valid_replacement_moves(solution_set):
        yield apply_move(instance, solution_set, j, b)


def insertion_neighbors(
    instance: RhoMnkInstance, solution_set: SolutionSet, space: SearchSpace | None = None
) -> Iterator[SolutionSet]:
    """``A | {s'}`` for every Hamming-1 neighbour ``s'`` of a member, each set once."""
    keys = set(solution_set.keys())
    seen: set[bytes] = set()
    for j in solution_set.canonical_order():
        row = solution_set.members[j]
        for b in range(instance.n):
            flipped = row.copy()
            flipped[b] ^= 1
            key = flipped.tobytes()
            if key in keys or key in seen:
                continue
            seen.add(key)
            obj = evaluate_incremental(instance, row, b, solution_set.objectives[j])
            cand = SolutionSet(
                np.vstack([solution_set.members, flipped]),
                np.vstack([solution_set.objectives, obj]),
            )
            if space is None or member_of(space, cand):
                yield cand


def deletion_neighbors(
    solution_set: SolutionSet, space: SearchSpace | None = None
) -> Iterator[SolutionSet]:
    """``A \\ {s}`` for every member ``s``."""
    for j in solution_set.canonical_order():
        keep = np.arange(len(solution_set)) != j
        cand = SolutionSet(
            solution_set.members[keep].reshape(-1, solution_set.members.shape[1]),
            solution_set.objectives[keep].reshape(-1, solution_set.objectives.shape[1]),
        )
        if space is None or member_of(space, cand):
            yield cand


def nondominated_members(solution_set: SolutionSet) -> SolutionSet:
    """Members whose objective vector is not dominated within the set.

    Members sharing an objective vector are all kept; they are distinct
    solutions.
    """
    front = set(_filter_tuples([tuple(r) for r in solution_set.objectives.tolist()]))
    keep = [j for j, r in enumerate(solution_set.objectives.tolist()) if tuple(r) in front]
    return SolutionSet(
        solution_set.members[keep].reshape(len(keep), -1),
        solution_set.objectives[keep].reshape(len(keep), -1),
    )
