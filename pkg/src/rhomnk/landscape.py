"""rho-MNK landscapes: generation, evaluation and the text instance format.

Every bit ``i`` owns a component table with ``2**(k+1)`` rows and ``m``
columns. The row used for a solution ``x`` packs the bit pattern
``(x[i], x[links[i][0]], ..., x[links[i][k-1]])`` most-significant-first,
so ``x[i]`` carries weight ``2**k``. Objective ``j`` is the mean over bits of
``tables[i, row_i, j]``. All objectives share one epistasis structure.

Randomness comes from numpy's PCG64 seeded through a ``SeedSequence``;
the instance seed spawns two child streams, the first for the links and
the second for the tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .copula import CorrelationMatrix, sample_correlated_uniform_many, validate
from .errors import IndexOutOfRange, InvalidParams, LengthMismatch, MalformedFile

FORMAT_VERSION = 1


@dataclass(frozen=True)
class InstanceParams:
    n: int
    m: int
    k: int
    rho: float
    seed: int = 0

    def validate(self) -> None:
        if self.n < 1:
            raise InvalidParams(f"n must be >= 1, got {self.n}")
        if self.m < 1:
            raise InvalidParams(f"m must be >= 1, got {self.m}")
        if not 0 <= self.k <= self.n - 1:
            raise InvalidParams(f"k must lie in [0, n-1] = [0, {self.n - 1}], got {self.k}")
        if not 0 <= self.seed < 2**64:
            raise InvalidParams(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        validate(CorrelationMatrix(self.m, self.rho))


@dataclass(frozen=True, eq=False)
class RhoMnkInstance:
    """An immutable landscape.

    ``links`` has shape ``(n, k)``; ``tables`` has shape ``(n, 2**(k+1), m)``.
    The arrays are made read-only on construction.
    """

    params: InstanceParams
    links: np.ndarray
    tables: np.ndarray
    # derived lookup structures, see __post_init__
    _deps: np.ndarray = field(init=False, repr=False)
    _weights: np.ndarray = field(init=False, repr=False)
    _affected: tuple = field(init=False, repr=False)

    def __post_init__(self):
        p = self.params
        links = np.asarray(self.links, dtype=np.int64).reshape(p.n, p.k)
        tables = np.asarray(self.tables, dtype=np.float64).reshape(p.n, 2 ** (p.k + 1), p.m)
        links.setflags(write=False)
        tables.setflags(write=False)
        deps = np.column_stack([np.arange(p.n), links]) if p.k else np.arange(p.n)[:, None]
        weights = 1 << np.arange(p.k, -1, -1)
        # for each bit b: the components reading b and the row-index bit it sets
        affected = []
        for b in range(p.n):
            comps, pos = np.nonzero(deps == b)
            affected.append((comps, weights[pos]))
        object.__setattr__(self, "links", links)
        object.__setattr__(self, "tables", tables)
        object.__setattr__(self, "_deps", deps)
        object.__setattr__(self, "_weights", weights)
        object.__setattr__(self, "_affected", tuple(affected))

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def m(self) -> int:
        return self.params.m

    @property
    def k(self) -> int:
        return self.params.k

    def row_indices(self, bits: np.ndarray) -> np.ndarray:
        """Row index into each component table; works on ``(n,)`` or ``(count, n)``."""
        return bits[..., self._deps] @ self._weights

    def __eq__(self, other):
        if not isinstance(other, RhoMnkInstance):
            return NotImplemented
        return (
            self.params == other.params
            and np.array_equal(self.links, other.links)
            and np.array_equal(self.tables, other.tables)
        )

    __hash__ = None


def _partial_fisher_yates(pool: list[int], k: int, rng: np.random.Generator) -> list[int]:
    pool = list(pool)
    size = len(pool)
    for j in range(k):
        swap = j + int(rng.integers(size - j))
        pool[j], pool[swap] = pool[swap], pool[j]
    return pool[:k]


def generate(params: InstanceParams) -> RhoMnkInstance:
    """Draw a landscape fully determined by ``params.seed``.

    Links for bit ``i`` are the first ``k`` entries of a partial
    Fisher-Yates shuffle of ``[0..n-1] \\ {i}``, bits processed in order.
    Table rows are then drawn bit by bit, row by row, each as one
    correlated uniform vector.
    """
    params.validate()
    links_ss, tables_ss = np.random.SeedSequence(params.seed).spawn(2)
    links_rng = np.random.Generator(np.random.PCG64(links_ss))
    tables_rng = np.random.Generator(np.random.PCG64(tables_ss))

    n, k, m = params.n, params.k, params.m
    links = np.empty((n, k), dtype=np.int64)
    for i in range(n):
        pool = [j for j in range(n) if j != i]
        links[i] = _partial_fisher_yates(pool, k, links_rng)

    rows = n * 2 ** (k + 1)
    draws = sample_correlated_uniform_many(CorrelationMatrix(m, params.rho), rows, tables_rng)
    tables = draws.reshape(n, 2 ** (k + 1), m)
    return RhoMnkInstance(params, links, tables)


def as_bits(solution, n: int | None = None) -> np.ndarray:
    """Coerce a solution (``"0110"``, list of ints, array) to a uint8 array."""
    if isinstance(solution, str):
        if solution.strip("01"):
            raise InvalidParams(f"bit string may only contain 0 and 1: {solution!r}")
        bits = np.frombuffer(solution.encode(), dtype=np.uint8) - ord("0")
    else:
        bits = np.asarray(solution)
        if bits.ndim != 1:
            raise InvalidParams("a solution is a one-dimensional bit vector")
        if bits.size and (bits.min() < 0 or bits.max() > 1):
            raise InvalidParams("solution entries must be 0 or 1")
        bits = bits.astype(np.uint8)
    if n is not None and bits.shape[0] != n:
        raise LengthMismatch(f"solution has length {bits.shape[0]}, instance expects {n}")
    return bits


def bits_to_str(bits) -> str:
    return "".join("1" if b else "0" for b in bits)


def evaluate(instance: RhoMnkInstance, solution) -> np.ndarray:
    """Objective vector of ``solution``: per-objective mean of its components."""
    bits = as_bits(solution, instance.n)
    # shares evaluate_many's reduction so both paths agree bit for bit
    return evaluate_many(instance, bits[None, :])[0]


def evaluate_many(instance: RhoMnkInstance, solutions: np.ndarray) -> np.ndarray:
    """Vectorised :func:`evaluate` over a ``(count, n)`` array, result ``(count, m)``."""
    solutions = np.asarray(solutions, dtype=np.uint8)
    if solutions.ndim != 2 or solutions.shape[1] != instance.n:
        raise LengthMismatch(f"expected shape (count, {instance.n}), got {solutions.shape}")
    rows = instance.row_indices(solutions)
    return instance.tables[np.arange(instance.n), rows].sum(axis=1) / instance.n


def evaluate_incremental(
    instance: RhoMnkInstance, solution, flipped_bit: int, previous: np.ndarray
) -> np.ndarray:
    """Objectives after flipping ``flipped_bit`` of ``solution``.

    ``solution`` is the string *before* the flip and ``previous`` its
    objective vector. Only the components that read the flipped bit are
    looked up again.
    """
    bits = as_bits(solution, instance.n)
    if not 0 <= flipped_bit < instance.n:
        raise IndexOutOfRange(f"bit {flipped_bit} outside [0, {instance.n})")
    return _flip_eval(instance, bits, flipped_bit, np.asarray(previous, dtype=float))


def _flip_eval(instance, bits, flipped_bit, previous):
    # unchecked core of evaluate_incremental, used inside walks
    comps, weight = instance._affected[flipped_bit]
    old = bits[instance._deps[comps]] @ instance._weights
    t = instance.tables
    delta = (t[comps, old ^ weight] - t[comps, old]).sum(axis=0)
    return previous + delta / instance.n


# -- text format ------------------------------------------------------------


def save_instance(instance: RhoMnkInstance, destination) -> None:
    """Write the line-oriented text format; reals use 17 significant digits."""
    p = instance.params
    lines = [f"rhomnk {FORMAT_VERSION} {p.n} {p.m} {p.k} {float(p.rho)!r} {p.seed}"]
    for i in range(p.n):
        lines.append(" ".join(["links", str(i), *map(str, instance.links[i])]))
    for i in range(p.n):
        for row in range(2 ** (p.k + 1)):
            vals = " ".join(f"{v:.17g}" for v in instance.tables[i, row])
            lines.append(f"y {i} {row} {vals}")
    Path(destination).write_text("\n".join(lines) + "\n")


def _parse_int(tok, line, pos):
    try:
        return int(tok)
    except ValueError:
        raise MalformedFile(f"expected an integer, got {tok!r}", line, pos) from None


def _parse_float(tok, line, pos):
    try:
        return float(tok)
    except ValueError:
        raise MalformedFile(f"expected a real number, got {tok!r}", line, pos) from None


def load_instance(source) -> RhoMnkInstance:
    """Parse a file written by :func:`save_instance`."""
    text = Path(source).read_text()
    lines = text.splitlines()
    if not lines:
        raise MalformedFile("empty file", 1)

    head = lines[0].split()
    if len(head) != 7 or head[0] != "rhomnk":
        raise MalformedFile("header must be 'rhomnk <version> n m k rho seed'", 1)
    version = _parse_int(head[1], 1, 1)
    if version != FORMAT_VERSION:
        raise MalformedFile(f"unsupported format version {version}", 1, 1)
    n, m, k = (_parse_int(head[j], 1, j) for j in (2, 3, 4))
    rho = _parse_float(head[5], 1, 5)
    seed = _parse_int(head[6], 1, 6)
    params = InstanceParams(n, m, k, rho, seed)
    try:
        params.validate()
    except (InvalidParams, ValueError) as exc:
        raise MalformedFile(str(exc), 1) from None

    n_rows = 2 ** (k + 1)
    expected = 1 + n + n * n_rows
    if len(lines) < expected:
        raise MalformedFile(
            f"truncated: expected {expected} lines, found {len(lines)}", len(lines) + 1
        )
    if any(s.strip() for s in lines[expected:]):
        raise MalformedFile("unexpected content after the last table row", expected + 1)

    links = np.empty((n, k), dtype=np.int64)
    for i in range(n):
        lineno = 2 + i
        tok = lines[lineno - 1].split()
        if len(tok) != k + 2 or tok[0] != "links":
            raise MalformedFile(f"expected 'links {i}' followed by {k} indices", lineno)
        if _parse_int(tok[1], lineno, 1) != i:
            raise MalformedFile(f"expected links for bit {i}", lineno, 1)
        row = [_parse_int(t, lineno, 2 + j) for j, t in enumerate(tok[2:])]
        for j, v in enumerate(row):
            if not 0 <= v < n:
                raise MalformedFile(f"link {v} outside [0, {n})", lineno, 2 + j)
            if v == i:
                raise MalformedFile(f"bit {i} links to itself", lineno, 2 + j)
            if v in row[:j]:
                raise MalformedFile(f"duplicate link {v}", lineno, 2 + j)
        links[i] = row

    tables = np.empty((n, n_rows, m))
    lineno = 2 + n
    for i in range(n):
        for r in range(n_rows):
            tok = lines[lineno - 1].split()
            if len(tok) != m + 3 or tok[0] != "y":
                raise MalformedFile(f"expected 'y {i} {r}' followed by {m} values", lineno)
            if _parse_int(tok[1], lineno, 1) != i or _parse_int(tok[2], lineno, 2) != r:
                raise MalformedFile(f"expected table entry for bit {i}, row {r}", lineno, 1)
            for j in range(m):
                v = _parse_float(tok[3 + j], lineno, 3 + j)
                if not 0.0 <= v < 1.0:
                    raise MalformedFile(f"table value {v!r} outside [0, 1)", lineno, 3 + j)
                tables[i, r, j] = v
            lineno += 1
    return RhoMnkInstance(params, links, tables)
