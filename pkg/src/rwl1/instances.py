"""Benchmark instance generation: random matrices from six distributions,
planted k-sparse solutions, and a JSON file format for round-tripping.

Everything is driven by a single SplitMix64 stream per instance, so an
instance is a pure function of (distribution, m, n, k, seed).  Draw order
is fixed: the matrix entries row by row, then the support via a
Fisher-Yates prefix, then the nonzero values (magnitude, then sign).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix, as_vector, count_nonzeros
from .rng import SplitMix64

__all__ = [
    "DistributionSpec",
    "Sampler",
    "ProblemInstance",
    "InstanceParseError",
    "InstanceValidationError",
    "make_instance",
    "save_instance",
    "load_instance",
]

# name -> (parameter names, defaults from the benchmark protocol)
DISTRIBUTIONS = {
    "normal": (("mu", "sigma"), (0.0, 1.0)),
    "poisson": (("lam",), (2.0,)),
    "exponential": (("mean",), (5.0,)),
    "f": (("d1", "d2"), (1.0, 6.0)),
    "gamma": (("shape", "scale"), (5.0, 10.0)),
    "uniform": (("high",), (10.0,)),
}

MIN_NONZERO = 0.1  # planted entries are bounded away from zero by this margin
SUPPORT_TOL = 1e-6


class InstanceParseError(ValueError):
    """Malformed instance file: bad JSON or a missing/mistyped field."""


class InstanceValidationError(ValueError):
    """Structurally valid file whose contents violate an instance invariant."""


@dataclass(frozen=True)
class DistributionSpec:
    """One of the six matrix-entry distributions, with its parameters."""

    name: str
    params: tuple[float, ...]

    def __post_init__(self):
        if self.name not in DISTRIBUTIONS:
            raise ValueError(f"unknown distribution {self.name!r}")
        names, _ = DISTRIBUTIONS[self.name]
        object.__setattr__(self, "params", tuple(float(v) for v in self.params))
        if len(self.params) != len(names):
            raise ValueError(f"{self.name} takes parameters {names}, got {self.params}")
        self._validate()

    def _validate(self):
        p = dict(zip(DISTRIBUTIONS[self.name][0], self.params))
        if self.name == "normal" and p["sigma"] <= 0:
            raise ValueError(f"sigma must be > 0, got {p['sigma']}")
        if self.name == "poisson" and not 0 < p["lam"] <= 700:
            # above ~700 the product-method acceptance bound exp(-lam)
            # underflows to zero and the sampler would return garbage
            raise ValueError(f"lam must be in (0, 700], got {p['lam']}")
        if self.name == "exponential" and p["mean"] <= 0:
            raise ValueError(f"mean must be > 0, got {p['mean']}")
        if self.name == "f":
            if p["d1"] < 1 or p["d2"] < 1 or p["d1"] != int(p["d1"]) or p["d2"] != int(p["d2"]):
                raise ValueError(f"f-distribution degrees must be integers >= 1, got {self.params}")
        if self.name == "gamma" and (p["shape"] <= 0 or p["scale"] <= 0):
            raise ValueError(f"gamma shape and scale must be > 0, got {self.params}")
        if self.name == "uniform" and p["high"] <= 0:
            raise ValueError(f"uniform bound must be > 0, got {p['high']}")

    @classmethod
    def default(cls, name: str) -> "DistributionSpec":
        return cls(name, DISTRIBUTIONS[name][1])

    @property
    def label(self) -> str:
        return self.name

    def to_json(self) -> dict:
        names, _ = DISTRIBUTIONS[self.name]
        return {"name": self.name, **dict(zip(names, self.params))}

    @classmethod
    def from_json(cls, obj: dict) -> "DistributionSpec":
        if not isinstance(obj, dict) or "name" not in obj:
            raise InstanceParseError("dist must be an object with a 'name' field")
        name = obj["name"]
        if name not in DISTRIBUTIONS:
            raise InstanceParseError(f"unknown distribution {name!r} in dist field")
        names, _ = DISTRIBUTIONS[name]
        try:
            params = tuple(float(obj[k]) for k in names)
        except KeyError as exc:
            raise InstanceParseError(f"dist field missing parameter {exc.args[0]!r}") from exc
        try:
            return cls(name, params)
        except ValueError as exc:
            raise InstanceParseError(str(exc)) from exc


class Sampler:
    """Distribution sampling on top of one SplitMix64 stream.

    Normal pairs come from Box-Muller with the second variate cached, the
    exponential from inversion, Poisson from Knuth's product method, gamma
    from Marsaglia-Tsang (with the power boost below shape 1), and the
    F-distribution as a ratio of scaled chi-square draws.
    """

    def __init__(self, rng: SplitMix64):
        self.rng = rng
        self._gauss_cache: float | None = None

    def standard_normal(self) -> float:
        if self._gauss_cache is not None:
            g = self._gauss_cache
            self._gauss_cache = None
            return g
        u1 = self.rng.next_unit()
        u2 = self.rng.next_unit()
        r = math.sqrt(-2.0 * math.log(u1))
        self._gauss_cache = r * math.sin(2.0 * math.pi * u2)
        return r * math.cos(2.0 * math.pi * u2)

    def normal(self, mu: float, sigma: float) -> float:
        return mu + sigma * self.standard_normal()

    def exponential(self, mean: float) -> float:
        return -mean * math.log(1.0 - self.rng.next_unit())

    def poisson(self, lam: float) -> float:
        limit = math.exp(-lam)
        k = 0
        prod = self.rng.next_unit()
        while prod > limit:
            k += 1
            prod *= self.rng.next_unit()
        return float(k)

    def gamma(self, shape: float, scale: float) -> float:
        if shape < 1.0:
            boost = self.rng.next_unit() ** (1.0 / shape)
            return self.gamma(shape + 1.0, scale) * boost
        d = shape - 1.0 / 3.0
        c = 1.0 / math.sqrt(9.0 * d)
        while True:
            z = self.standard_normal()
            v = (1.0 + c * z) ** 3
            if v <= 0.0:
                continue
            u = self.rng.next_unit()
            if u < 1.0 - 0.0331 * z**4:
                return d * v * scale
            if math.log(u) < 0.5 * z * z + d * (1.0 - v + math.log(v)):
                return d * v * scale

    def f(self, d1: float, d2: float) -> float:
        g1 = self.gamma(d1 / 2.0, 2.0)
        g2 = self.gamma(d2 / 2.0, 2.0)
        return (g1 / d1) / (g2 / d2)

    def uniform(self, high: float) -> float:
        return high * self.rng.next_unit()

    def draw(self, dist: DistributionSpec) -> float:
        return getattr(self, dist.name)(*dist.params)


@dataclass(frozen=True)
class ProblemInstance:
    """One generated benchmark problem: b = A x_true with ||x_true||_0 = k."""

    a: np.ndarray
    b: np.ndarray
    x_true: np.ndarray
    k: int
    dist: DistributionSpec
    seed: int

    @property
    def m(self) -> int:
        return self.a.shape[0]

    @property
    def n(self) -> int:
        return self.a.shape[1]

    def __eq__(self, other):
        if not isinstance(other, ProblemInstance):
            return NotImplemented
        return (
            self.k == other.k
            and self.dist == other.dist
            and self.seed == other.seed
            and np.array_equal(self.a, other.a)
            and np.array_equal(self.b, other.b)
            and np.array_equal(self.x_true, other.x_true)
        )


def _draw_support(rng: SplitMix64, n: int, k: int) -> list[int]:
    """Uniform k-subset of range(n) via a Fisher-Yates prefix, returned sorted."""
    idx = list(range(n))
    for i in range(k):
        j = i + rng.next_below(n - i)
        idx[i], idx[j] = idx[j], idx[i]
    return sorted(idx[:k])


def make_instance(dist: DistributionSpec, m: int, n: int, k: int, seed: int) -> ProblemInstance:
    """Generate one instance deterministically from the seed."""
    if not 1 <= k <= m:
        raise ValueError(f"need 1 <= k <= m, got k={k}, m={m}")
    if m >= n:
        raise ValueError(f"need m < n, got m={m}, n={n}")
    rng = SplitMix64(seed)
    sampler = Sampler(rng)
    a = np.empty((m, n))
    for i in range(m):
        for j in range(n):
            a[i, j] = sampler.draw(dist)
    support = _draw_support(rng, n, k)
    x_true = np.zeros(n)
    for idx in support:
        magnitude = MIN_NONZERO + abs(sampler.standard_normal())
        sign = 1.0 if rng.next_unit() < 0.5 else -1.0
        x_true[idx] = sign * magnitude
    return ProblemInstance(a=a, b=a @ x_true, x_true=x_true, k=k, dist=dist, seed=seed)


def save_instance(inst: ProblemInstance, path) -> None:
    doc = {
        "m": inst.m,
        "n": inst.n,
        "k": inst.k,
        "dist": inst.dist.to_json(),
        "seed": inst.seed,
        "A": inst.a.reshape(-1).tolist(),
        "b": inst.b.tolist(),
        "x_true": inst.x_true.tolist(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def load_instance(path) -> ProblemInstance:
    """Load and validate an instance file; raises InstanceParseError /
    InstanceValidationError with field context on bad input."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InstanceParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise InstanceParseError("instance file must contain a JSON object")
    for fld in ("m", "n", "k", "dist", "seed", "A", "b", "x_true"):
        if fld not in doc:
            raise InstanceParseError(f"missing field {fld!r}")
    try:
        m, n, k, seed = int(doc["m"]), int(doc["n"]), int(doc["k"]), int(doc["seed"])
    except (TypeError, ValueError) as exc:
        raise InstanceParseError(f"m, n, k, seed must be integers: {exc}") from exc
    dist = DistributionSpec.from_json(doc["dist"])
    try:
        flat = as_vector([float(v) for v in doc["A"]])
        b = as_vector([float(v) for v in doc["b"]])
        x_true = as_vector([float(v) for v in doc["x_true"]])
    except (TypeError, ValueError) as exc:
        raise InstanceParseError(f"A, b, x_true must be arrays of finite reals: {exc}") from exc
    if flat.shape[0] != m * n:
        raise InstanceParseError(f"field 'A' has {flat.shape[0]} entries, expected m*n = {m * n}")
    if b.shape[0] != m:
        raise InstanceParseError(f"field 'b' has length {b.shape[0]}, expected m = {m}")
    if x_true.shape[0] != n:
        raise InstanceParseError(f"field 'x_true' has length {x_true.shape[0]}, expected n = {n}")
    a = as_matrix(flat.reshape(m, n))
    nnz = count_nonzeros(x_true, SUPPORT_TOL)
    if nnz != k:
        raise InstanceValidationError(f"x_true has {nnz} nonzeros, expected k = {k}")
    if not np.allclose(a @ x_true, b, rtol=0.0, atol=1e-9 * max(1.0, float(np.max(np.abs(b)) if b.size else 1.0))):
        raise InstanceValidationError("b does not equal A @ x_true")
    return ProblemInstance(a=a, b=b, x_true=x_true, k=k, dist=dist, seed=seed)
