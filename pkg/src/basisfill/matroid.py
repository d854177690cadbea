"""Matroid independence oracles over a shared integer ground set.

Elements are dense non-negative ids into the ground set; identity is
positional, so two ids carrying equal payloads (parallel vectors, parallel
edges) remain distinct elements. Element sets are handled as sorted
duplicate-free tuples of ids.

Three oracle kinds are provided:

* linear   -- columns of a matrix over a prime field GF(p), p < 2**16;
              independence by exact modular Gaussian elimination
              (``basisfill.kernel``).
* graphic  -- edges of a connected multigraph; independence is acyclicity,
              checked with union-find.
* uniform  -- every set of size <= k is independent.

Oracles are immutable after construction and safe for concurrent
read-only queries. The optional memo cache only stores query results
keyed by the sorted id tuple; correctness never depends on it.
"""

from __future__ import annotations

from array import array
from typing import Iterable, Sequence

from .errors import InfeasibleError, InputError, OracleViolationError
from .kernel import gf_columns_independent, gf_rank_columns

ElementSet = tuple[int, ...]

_DEFAULT_CACHE = 1 << 17


def element_set(elems: Iterable[int]) -> ElementSet:
    """Normalize an iterable of ids into a sorted duplicate-free tuple."""
    return tuple(sorted(set(elems)))


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class MatroidOracle:
    """Answers independence queries; subclasses implement ``_indep``."""

    kind = "abstract"

    def __init__(self, ground_size: int, rank_n: int, cache_size: int = _DEFAULT_CACHE):
        if ground_size < 1:
            raise InputError("ground set must be non-empty")
        self.ground_size = ground_size
        self.rank_n = rank_n
        self._cache_size = cache_size
        self._cache: dict[ElementSet, bool] = {}

    def _indep(self, elems: ElementSet) -> bool:
        raise NotImplementedError

    def _check_ids(self, elems: ElementSet) -> None:
        if elems and (elems[0] < 0 or elems[-1] >= self.ground_size):
            bad = [e for e in elems if e < 0 or e >= self.ground_size]
            raise InputError(f"element ids {bad} out of range [0, {self.ground_size})")

    def is_independent(self, elems: Iterable[int]) -> bool:
        key = element_set(elems)
        self._check_ids(key)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        result = self._indep(key)
        if self._cache_size:
            if len(self._cache) >= self._cache_size:
                self._cache.clear()
            self._cache[key] = result
        return result

    def rank(self, elems: Iterable[int]) -> int:
        """Size of a maximal independent subset, built greedily by id."""
        key = element_set(elems)
        self._check_ids(key)
        picked: list[int] = []
        for e in key:
            picked.append(e)
            if not self.is_independent(picked):
                picked.pop()
        return len(picked)

    def augment(self, bigger: Iterable[int], smaller: Iterable[int]) -> int:
        """Lowest-id element of ``bigger`` extending ``smaller`` independently.

        Both arguments must be independent with |bigger| > |smaller|;
        failure to find an element then means the oracle is not a matroid.
        """
        a = element_set(bigger)
        b = element_set(smaller)
        if len(a) <= len(b):
            raise InputError("augment requires |A| > |B|")
        if not self.is_independent(a) or not self.is_independent(b):
            raise InputError("augment requires independent arguments")
        b_set = set(b)
        for e in a:
            if e not in b_set and self.is_independent(b + (e,)):
                return e
        raise OracleViolationError(
            "augmentation failed on independent sets of sizes "
            f"{len(a)} > {len(b)}; oracle violates the matroid axioms"
        )

    def extend_independent(
        self, base: Iterable[int], pool: Iterable[int], target_size: int
    ) -> ElementSet:
        """Grow ``base`` to ``target_size`` using lowest-id picks from ``pool``."""
        cur = list(element_set(base))
        if not self.is_independent(cur):
            raise InputError("extend_independent requires an independent base")
        if target_size < len(cur):
            raise InputError("target_size below |base|")
        pool_ids = element_set(pool)
        taken = set(cur)
        while len(cur) < target_size:
            for e in pool_ids:
                if e not in taken and self.is_independent(cur + [e]):
                    cur.append(e)
                    taken.add(e)
                    break
            else:
                raise InfeasibleError(
                    f"cannot extend to size {target_size}; stuck at {len(cur)}"
                )
        return element_set(cur)


class LinearOracle(MatroidOracle):
    """Column vectors over GF(p); element id = column index."""

    kind = "linear"

    def __init__(
        self,
        p: int,
        vectors: Sequence[Sequence[int]],
        cache_size: int = _DEFAULT_CACHE,
    ):
        if not is_prime(p) or p >= 1 << 16:
            raise InputError(f"p must be a prime below 2**16, got {p}")
        if not vectors:
            raise InputError("linear oracle needs at least one vector")
        n = len(vectors[0])
        for idx, v in enumerate(vectors):
            if len(v) != n:
                raise InputError(f"vector {idx} has length {len(v)}, expected {n}")
        self.p = p
        self.vectors: tuple[tuple[int, ...], ...] = tuple(
            tuple(x % p for x in v) for v in vectors
        )
        # Row-major n x |E| ground matrix; element id selects a column.
        self._flat = array(
            "i", [self.vectors[c][r] for r in range(n) for c in range(len(vectors))]
        )
        super().__init__(len(vectors), n, cache_size)
        if gf_rank_columns(self._flat, n, len(vectors), range(len(vectors)), p) != n:
            raise InputError("ground set does not span: rank below vector length")

    def _indep(self, elems: ElementSet) -> bool:
        return gf_columns_independent(
            self._flat, self.rank_n, self.ground_size, elems, self.p
        )

    def rank(self, elems: Iterable[int]) -> int:
        key = element_set(elems)
        self._check_ids(key)
        return gf_rank_columns(self._flat, self.rank_n, self.ground_size, key, self.p)


class GraphicOracle(MatroidOracle):
    """Edges of a connected multigraph; element id = edge index."""

    kind = "graphic"

    def __init__(
        self,
        vertices: int,
        edges: Sequence[tuple[int, int]],
        cache_size: int = _DEFAULT_CACHE,
    ):
        if vertices < 2:
            raise InputError("graphic oracle needs at least 2 vertices")
        for idx, (u, v) in enumerate(edges):
            if not (0 <= u < vertices and 0 <= v < vertices):
                raise InputError(f"edge {idx} endpoint out of range")
            if u == v:
                raise InputError(f"edge {idx} is a loop")
        self.vertices = vertices
        self.edges: tuple[tuple[int, int], ...] = tuple(
            (min(u, v), max(u, v)) for u, v in edges
        )
        super().__init__(len(edges), vertices - 1, cache_size)
        if self._forest_size(range(len(edges))) != vertices - 1:
            raise InputError("graph is not connected")

    def _forest_size(self, elems: Iterable[int]) -> int:
        parent = list(range(self.vertices))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        merges = 0
        for e in elems:
            u, v = self.edges[e]
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                merges += 1
        return merges

    def _indep(self, elems: ElementSet) -> bool:
        return self._forest_size(elems) == len(elems)

    def rank(self, elems: Iterable[int]) -> int:
        key = element_set(elems)
        self._check_ids(key)
        return self._forest_size(key)


class UniformOracle(MatroidOracle):
    """Every set of at most k elements is independent."""

    kind = "uniform"

    def __init__(self, k: int, ground_size: int, cache_size: int = 0):
        if k < 0 or k > ground_size:
            raise InputError("need 0 <= k <= ground size")
        self.k = k
        super().__init__(ground_size, k, cache_size)

    def _indep(self, elems: ElementSet) -> bool:
        return len(elems) <= self.k

    def rank(self, elems: Iterable[int]) -> int:
        key = element_set(elems)
        self._check_ids(key)
        return min(len(key), self.k)
