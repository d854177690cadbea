"""Problem instances: a matroid plus an f x n grid of bases.

Conventions:
  * rows are indexed i in [0, f), columns j in [0, n);
  * ``bases[i][j]`` is the basis attached to cell (i, j), stored as a
    sorted id tuple over the shared ground set;
  * epsilon is an exact ``Fraction`` and the full-row target is
    t = f - ceil(epsilon * n / 2).

Generators deduplicate equal payloads (vectors, edges) into a single
ground-set id so that "element appears in the table" is well defined
across cells. All randomness comes from ``random.Random(seed)``, so a
(parameters, seed) pair always produces identical serialized bytes.

File format (canonical JSON: UTF-8, sorted keys, compact separators,
single trailing LF):

  {"matroid": {"kind": "linear", "p": 2, "vectors": [[...], ...]}
             | {"kind": "graphic", "vertices": m, "edges": [[u, v], ...]}
             | {"kind": "uniform", "k": K, "ground": M},
   "n": int, "f": int, "epsilon": "num/den",
   "bases": [[ [id x n] x n ] x f ]}
"""

from __future__ import annotations

import json
import math
import random
from array import array
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, SchemaError
from .kernel import gf_columns_independent
from .matroid import (
    ElementSet,
    GraphicOracle,
    LinearOracle,
    MatroidOracle,
    UniformOracle,
    element_set,
    is_prime,
)


def canonical_json(data) -> bytes:
    """Serialize to the package's canonical JSON byte form."""
    return (json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n").encode(
        "utf-8"
    )


def parse_epsilon(text: str) -> Fraction:
    try:
        num, den = text.split("/")
        eps = Fraction(int(num), int(den))
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"epsilon must be 'num/den', got {text!r}") from exc
    if not 0 < eps < 1:
        raise SchemaError(f"epsilon must lie in (0, 1), got {eps}")
    return eps


def format_epsilon(eps: Fraction) -> str:
    return f"{eps.numerator}/{eps.denominator}"


@dataclass
class Instance:
    matroid: MatroidOracle
    n: int
    f: int
    epsilon: Fraction
    bases: tuple[tuple[ElementSet, ...], ...]

    @property
    def regime_flag(self) -> bool:
        """True when f is small enough for the solver's guarantees to apply."""
        return self.f <= math.floor((1 - self.epsilon) * self.n / 2)

    @property
    def target_full_rows(self) -> int:
        """t = f - ceil(epsilon*n/2); may be <= 0 on tiny instances."""
        return self.f - math.ceil(self.epsilon * self.n / 2)

    def validate(self) -> None:
        if self.n != self.matroid.rank_n:
            raise SchemaError(
                f"rank mismatch: n={self.n} but matroid rank is {self.matroid.rank_n}"
            )
        if self.f < 1:
            raise SchemaError("need at least one row")
        if not 0 < self.epsilon < 1:
            raise SchemaError("epsilon must lie in (0, 1)")
        if len(self.bases) != self.f:
            raise SchemaError(f"expected {self.f} basis rows, got {len(self.bases)}")
        for i, row in enumerate(self.bases):
            if len(row) != self.n:
                raise SchemaError(f"row {i} has {len(row)} cells, expected {self.n}")
            for j, cell in enumerate(row):
                if len(cell) != self.n:
                    raise SchemaError(
                        f"cell ({i},{j}) has {len(cell)} elements, expected {self.n}"
                    )
                if not self.matroid.is_independent(cell):
                    raise SchemaError(f"cell ({i},{j}) is not a basis: dependent set")

    def to_data(self) -> dict:
        if isinstance(self.matroid, LinearOracle):
            mat = {
                "kind": "linear",
                "p": self.matroid.p,
                "vectors": [list(v) for v in self.matroid.vectors],
            }
        elif isinstance(self.matroid, GraphicOracle):
            mat = {
                "kind": "graphic",
                "vertices": self.matroid.vertices,
                "edges": [list(e) for e in self.matroid.edges],
            }
        elif isinstance(self.matroid, UniformOracle):
            mat = {
                "kind": "uniform",
                "k": self.matroid.k,
                "ground": self.matroid.ground_size,
            }
        else:
            raise InputError(f"cannot serialize oracle kind {self.matroid.kind!r}")
        return {
            "matroid": mat,
            "n": self.n,
            "f": self.f,
            "epsilon": format_epsilon(self.epsilon),
            "bases": [[list(cell) for cell in row] for row in self.bases],
        }


def oracle_from_data(mat) -> MatroidOracle:
    if not isinstance(mat, dict) or "kind" not in mat:
        raise SchemaError("matroid section must be an object with a 'kind'")
    kind = mat["kind"]
    try:
        if kind == "linear":
            return LinearOracle(mat["p"], mat["vectors"])
        if kind == "graphic":
            return GraphicOracle(mat["vertices"], [tuple(e) for e in mat["edges"]])
        if kind == "uniform":
            return UniformOracle(mat["k"], mat["ground"])
    except (KeyError, TypeError, InputError) as exc:
        raise SchemaError(f"bad matroid section: {exc}") from exc
    raise SchemaError(f"unknown matroid kind {kind!r}")


def instance_from_data(data) -> Instance:
    if not isinstance(data, dict):
        raise SchemaError("instance file must contain a JSON object")
    for key in ("matroid", "n", "f", "epsilon", "bases"):
        if key not in data:
            raise SchemaError(f"missing key {key!r}")
    matroid = oracle_from_data(data["matroid"])
    n, f = data["n"], data["f"]
    if not isinstance(n, int) or not isinstance(f, int):
        raise SchemaError("n and f must be integers")
    eps = parse_epsilon(data["epsilon"])
    rows = data["bases"]
    if not isinstance(rows, list):
        raise SchemaError("bases must be a list of rows")
    bases = []
    for i, row in enumerate(rows):
        if not isinstance(row, list):
            raise SchemaError(f"bases row {i} must be a list")
        cells = []
        for j, cell in enumerate(row):
            if not isinstance(cell, list) or not all(isinstance(e, int) for e in cell):
                raise SchemaError(f"cell ({i},{j}) must be a list of integer ids")
            norm = element_set(cell)
            if len(norm) != len(cell):
                raise SchemaError(f"cell ({i},{j}) contains duplicate ids")
            if norm and norm[-1] >= matroid.ground_size:
                raise SchemaError(f"cell ({i},{j}) references an unknown element id")
            cells.append(norm)
        bases.append(tuple(cells))
    inst = Instance(matroid, n, f, eps, tuple(bases))
    inst.validate()
    return inst


def save(instance: Instance, path: str) -> None:
    with open(path, "wb") as fh:
        fh.write(canonical_json(instance.to_data()))


def load(path: str) -> Instance:
    with open(path, "rb") as fh:
        raw = fh.read()
    if not raw.strip():
        raise SchemaError(f"{path}: empty instance file")
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON: {exc}") from exc
    return instance_from_data(data)


# ---------------------------------------------------------------------------
# Generators


class _GroundBuilder:
    """Assigns dense ids to payloads in first-encounter order."""

    def __init__(self):
        self.ids: dict = {}
        self.payloads: list = []

    def get(self, payload) -> int:
        eid = self.ids.get(payload)
        if eid is None:
            eid = len(self.payloads)
            self.ids[payload] = eid
            self.payloads.append(payload)
        return eid


def _random_invertible_columns(
    rng: random.Random, p: int, n: int
) -> list[tuple[int, ...]]:
    """Uniformly random ordered basis of GF(p)^n by rejection sampling."""
    while True:
        cols = [tuple(rng.randrange(p) for _ in range(n)) for _ in range(n)]
        flat = array("i", [cols[c][r] for r in range(n) for c in range(n)])
        if gf_columns_independent(flat, n, n, range(n), p):
            return cols


def _validate_gen_params(p: int, n: int, f: int, epsilon: Fraction) -> None:
    if not is_prime(p) or p >= 1 << 16:
        raise InputError(f"p must be a prime below 2**16, got {p}")
    if n < 1:
        raise InputError("n must be >= 1")
    if f < 1:
        raise InputError("f must be >= 1")
    if not 0 < epsilon < 1:
        raise InputError("epsilon must lie in (0, 1)")


def gen_linear_random(
    p: int, n: int, f: int, seed: int, epsilon: Fraction = Fraction(1, 5)
) -> Instance:
    """f x n grid of independently random ordered bases of GF(p)^n."""
    _validate_gen_params(p, n, f, epsilon)
    rng = random.Random(seed)
    ground = _GroundBuilder()
    bases = []
    for _ in range(f):
        row = []
        for _ in range(n):
            cols = _random_invertible_columns(rng, p, n)
            row.append(element_set(ground.get(v) for v in cols))
        bases.append(tuple(row))
    matroid = LinearOracle(p, ground.payloads)
    inst = Instance(matroid, n, f, epsilon, tuple(bases))
    inst.validate()
    return inst


def gen_rota(p: int, n: int, seed: int, epsilon: Fraction = Fraction(1, 5)) -> Instance:
    """Column-constant grid: every row sees the same basis in column j.

    The row count is the regime bound floor((1-epsilon)*n/2), clamped to
    at least one row so tiny ranks still produce an instance.
    """
    f = max(1, math.floor((1 - epsilon) * n / 2))
    _validate_gen_params(p, n, f, epsilon)
    rng = random.Random(seed)
    ground = _GroundBuilder()
    column_bases = []
    for _ in range(n):
        cols = _random_invertible_columns(rng, p, n)
        column_bases.append(element_set(ground.get(v) for v in cols))
    bases = tuple(tuple(column_bases) for _ in range(f))
    matroid = LinearOracle(p, ground.payloads)
    inst = Instance(matroid, n, f, epsilon, bases)
    inst.validate()
    return inst


def gen_graphic(
    m: int, f: int, seed: int, epsilon: Fraction = Fraction(1, 5)
) -> Instance:
    """Spanning trees of the complete graph K_m as bases; n = m - 1.

    Each basis is the minimum spanning tree under fresh random edge
    weights, which samples a random spanning tree deterministically per
    seed.
    """
    if m < 2:
        raise InputError("need at least 2 vertices")
    if f < 1:
        raise InputError("f must be >= 1")
    if not 0 < epsilon < 1:
        raise InputError("epsilon must lie in (0, 1)")
    rng = random.Random(seed)
    edges = [(u, v) for u in range(m) for v in range(u + 1, m)]
    matroid = GraphicOracle(m, edges)
    n = m - 1
    bases = []
    for _ in range(f):
        row = []
        for _ in range(n):
            order = sorted(range(len(edges)), key=lambda e: (rng.random(), e))
            tree = []
            for e in order:
                if matroid.is_independent(tree + [e]):
                    tree.append(e)
                    if len(tree) == n:
                        break
            row.append(element_set(tree))
        bases.append(tuple(row))
    inst = Instance(matroid, n, f, epsilon, tuple(bases))
    inst.validate()
    return inst


def gen_uniform(
    ground: int, n: int, f: int, seed: int, epsilon: Fraction = Fraction(1, 5)
) -> Instance:
    """Random n-subsets of a size-``ground`` set under the uniform matroid."""
    if n < 1 or f < 1:
        raise InputError("n and f must be >= 1")
    if ground < n:
        raise InputError("ground size must be >= n")
    if not 0 < epsilon < 1:
        raise InputError("epsilon must lie in (0, 1)")
    rng = random.Random(seed)
    matroid = UniformOracle(n, ground)
    bases = tuple(
        tuple(element_set(rng.sample(range(ground), n)) for _ in range(n))
        for _ in range(f)
    )
    inst = Instance(matroid, n, f, epsilon, tuple(bases))
    inst.validate()
    return inst


GENERATORS = {
    "linear": gen_linear_random,
    "rota": gen_rota,
    "graphic": gen_graphic,
    "uniform": gen_uniform,
}
