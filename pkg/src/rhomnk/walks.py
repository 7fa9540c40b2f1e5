"""Random walks, autocorrelation analysis and set-level adaptive walks.

Both walks move in the replacement neighbourhood of fixed-size
solution-sets and use the hypervolume (reference point 0) as set fitness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ExhaustedNeighborhood, InvalidParams, UndefinedLength, ZeroVariance
from .landscape import RhoMnkInstance, _flip_eval
from .pareto import _contribution, _filter_tuples, _hv_sweep, _scaled, _shift_of
from .setspace import SolutionSet, nondominated_members, random_set

DEFAULT_BUDGET = 1_000_000


@dataclass(frozen=True, eq=False)
class WalkRecord:
    """Trace of a walk.

    ``fitness_series[0]`` is the hypervolume of the starting set, so the
    series has ``steps_taken + 1`` entries. ``certified`` is true when an
    adaptive walk stopped on a verified local optimum (always true for
    random walks, which have no stopping rule).
    """

    fitness_series: np.ndarray
    steps_taken: int
    final_set: SolutionSet
    nondominated_count: int
    evaluations_used: int
    certified: bool = True

    @property
    def final_fitness(self) -> float:
        return float(self.fitness_series[-1])

    @property
    def nondominated_solutions(self) -> SolutionSet:
        return nondominated_members(self.final_set)


@dataclass(frozen=True)
class AutocorrelationResult:
    r: np.ndarray  # r[0] is the lag-1 estimate
    tau: float | None
    series_length: int


def _weakly_dominated_by_any(p: tuple, others) -> bool:
    for q in others:
        if all(qi >= pi for qi, pi in zip(q, p)):
            return True
    return False


class _WalkState:
    """Mutable working copy of a solution-set used inside walk loops.

    The hypervolume is tracked exactly: objective vectors are held as
    integers in units of ``2**-shift`` and a replacement updates the total
    by the exclusive contributions of the outgoing and incoming points.
    Rounding the exact total gives the same double as recomputing the
    hypervolume of the whole set.
    """

    def __init__(self, instance: RhoMnkInstance, start: SolutionSet):
        self.instance = instance
        self.members = [row.copy() for row in start.members]
        self.vectors = [row.copy() for row in start.objectives]
        self.objs = [tuple(v) for v in start.objectives.tolist()]
        self.keys = {row.tobytes() for row in self.members}
        self.m = start.objectives.shape[1]
        self.shift = max(_shift_of(p) for p in self.objs)
        self.exact = [_scaled(p, self.shift) for p in self.objs]
        self.total = _hv_sweep(_filter_tuples(self.exact))
        self._pending = None

    def propose(self, j: int, b: int):
        """Flipped string, its key and objective vector, or ``None`` on collision."""
        flipped = self.members[j].copy()
        flipped[b] ^= 1
        key = flipped.tobytes()
        if key in self.keys:
            return None
        vec = _flip_eval(self.instance, self.members[j], b, self.vectors[j])
        return flipped, key, vec

    def _rescale(self, shift: int) -> None:
        if shift > self.shift:
            d = shift - self.shift
            self.exact = [tuple(c << d for c in p) for p in self.exact]
            self.total <<= self.m * d
            self.shift = shift

    def _to_float(self, total) -> float:
        return total / (1 << (self.m * self.shift))

    @property
    def fitness(self) -> float:
        return self._to_float(self.total)

    def fitness_with(self, j: int, vec) -> float:
        """Hypervolume after replacing member ``j``'s vector by ``vec``."""
        point = tuple(vec.tolist())
        self._rescale(_shift_of(point))
        new = _scaled(point, self.shift)
        others = self.exact[:j] + self.exact[j + 1 :]
        total = self.total - _contribution(self.exact[j], others) + _contribution(new, others)
        self._pending = (j, point, total)
        return self._to_float(total)

    def commit(self, j: int, flipped, key, vec) -> None:
        point = tuple(vec.tolist())
        if self._pending is None or self._pending[:2] != (j, point):
            self.fitness_with(j, vec)
        total = self._pending[2]
        self._pending = None
        self.keys.discard(self.members[j].tobytes())
        self.keys.add(key)
        self.members[j] = flipped
        self.vectors[j] = vec
        self.objs[j] = point
        self.exact[j] = _scaled(point, self.shift)
        self.total = total

    def valid_moves(self) -> list[tuple[int, int]]:
        order = sorted(range(len(self.members)), key=lambda j: self.members[j].tobytes())
        n = self.instance.n
        moves = []
        for j in order:
            for b in range(n):
                flipped = self.members[j].copy()
                flipped[b] ^= 1
                if flipped.tobytes() not in self.keys:
                    moves.append((j, b))
        return moves

    def snapshot(self) -> SolutionSet:
        return SolutionSet(np.array(self.members), np.array(self.vectors))


def random_walk(instance: RhoMnkInstance, mu: int, length: int, rng) -> WalkRecord:
    """Unconditional walk of ``length`` random replacement moves from a random set."""
    if length < 1:
        raise InvalidParams(f"walk length must be >= 1, got {length}")
    rng = np.random.default_rng(rng)
    start = random_set(instance, mu, rng)
    state = _WalkState(instance, start)
    size, n = len(state.members), instance.n
    series = np.empty(length + 1)
    series[0] = state.fitness
    for t in range(1, length + 1):
        for _ in range(64):
            j = int(rng.integers(size))
            b = int(rng.integers(n))
            proposal = state.propose(j, b)
            if proposal is not None:
                break
        else:
            moves = state.valid_moves()
            if not moves:
                raise ExhaustedNeighborhood("every replacement collides with an existing member")
            j, b = moves[int(rng.integers(len(moves)))]
            proposal = state.propose(j, b)
        series[t] = state.fitness_with(j, proposal[2])
        state.commit(j, *proposal)
    final = state.snapshot()
    return WalkRecord(
        fitness_series=series,
        steps_taken=length,
        final_set=final,
        nondominated_count=nondominated_count(final),
        evaluations_used=length + 1,
    )


def correlation_length(r1: float) -> float:
    """Autocorrelation length ``-1 / ln r(1)``, assuming exponential decay."""
    if not 0.0 < r1 < 1.0:
        raise UndefinedLength(f"r(1)={r1!r} is outside (0, 1)")
    return -1.0 / math.log(r1)


def autocorrelation(series, k_max: int) -> AutocorrelationResult:
    """Sample autocorrelation ``r(1..k_max)`` of ``series`` and its correlation length.

    Both sums are normalised by the same total squared deviation over the
    whole series. ``tau`` is ``None`` when ``r(1)`` is not in (0, 1).
    """
    x = np.asarray(series, dtype=float)
    length = x.shape[0]
    if k_max < 1 or length < k_max + 2:
        raise InvalidParams(f"need at least k_max + 2 = {k_max + 2} values, got {length}")
    if np.ptp(x) == 0.0:
        raise ZeroVariance("autocorrelation of a constant series is undefined")
    d = x - x.mean()
    denom = float(d @ d)
    r = np.array([float(d[: length - k] @ d[k:]) / denom for k in range(1, k_max + 1)])
    try:
        tau = correlation_length(r[0])
    except UndefinedLength:
        tau = None
    return AutocorrelationResult(r=r, tau=tau, series_length=length)


def adaptive_walk(
    instance: RhoMnkInstance, mu: int, rng, budget: int = DEFAULT_BUDGET
) -> WalkRecord:
    """First-improvement hill climbing on solution-sets.

    Each round visits the ``(member, bit)`` moves in a fresh random order and
    accepts the first whose hypervolume is strictly larger. A round that
    finds nothing certifies a local optimum. ``budget`` caps the number of
    set evaluations (the start set counts as one); running out yields
    ``certified=False``.
    """
    rng = np.random.default_rng(rng)
    start = random_set(instance, mu, rng)
    state = _WalkState(instance, start)
    size, n = len(state.members), instance.n
    current = state.fitness
    series = [current]
    evaluations = 1
    certified = False

    while True:
        # members weakly dominated by another member do not shape the front
        redundant = [
            _weakly_dominated_by_any(p, state.objs[:j] + state.objs[j + 1 :])
            for j, p in enumerate(state.objs)
        ]
        improved = False
        out_of_budget = False
        for code in rng.permutation(size * n).tolist():
            j, b = divmod(code, n)
            proposal = state.propose(j, b)
            if proposal is None:
                continue
            if evaluations >= budget:
                out_of_budget = True
                break
            evaluations += 1
            vec = proposal[2]
            if redundant[j]:
                others = state.objs[:j] + state.objs[j + 1 :]
                if _weakly_dominated_by_any(tuple(vec.tolist()), others):
                    # front, hence hypervolume, unchanged
                    continue
            value = state.fitness_with(j, vec)
            if value > current:
                state.commit(j, *proposal)
                current = value
                series.append(value)
                improved = True
                break
        if out_of_budget:
            break
        if not improved:
            certified = True
            break

    final = state.snapshot()
    return WalkRecord(
        fitness_series=np.array(series),
        steps_taken=len(series) - 1,
        final_set=final,
        nondominated_count=nondominated_count(final),
        evaluations_used=evaluations,
        certified=certified,
    )


def local_optimum_check(instance: RhoMnkInstance, solution_set: SolutionSet, mu: int | None = None) -> bool:
    """True iff no replacement neighbour has strictly larger hypervolume."""
    if mu is not None and len(solution_set) != mu:
        raise InvalidParams(f"expected a set of size {mu}, got {len(solution_set)}")
    state = _WalkState(instance, solution_set)
    current = state.fitness
    for j, b in state.valid_moves():
        proposal = state.propose(j, b)
        if state.fitness_with(j, proposal[2]) > current:
            return False
    return True


def nondominated_count(solution_set: SolutionSet) -> int:
    """Number of members whose objective vector no other member dominates."""
    return len(nondominated_members(solution_set))
