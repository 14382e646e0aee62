"""Problem models: stochastic weights, objectives, and the surrogate weight.

Two built-in models share the 3-objective evaluation (mu(x), v(x), c(x)):

* dominating set on a graph, where c(x) counts dominated nodes and a
  solution is feasible iff c(x) equals the node count, and
* the uniform-constraint model over plain item sets, where c(x) = |x|_1.

Under normally distributed element weights, minimizing the weight bound
held with confidence alpha is equivalent to minimizing the surrogate
w_hat(x) = mu(x) + K_alpha * sqrt(v(x)), with K_alpha the standard normal
alpha-quantile.  Everything here is pure and reentrant after construction.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .archive import Objective3
from .graph import Graph, count_dominated

#: Tail probabilities used throughout the benchmark tables.
DEFAULT_BETAS: tuple[float, ...] = (0.2, 0.1, 0.01, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12, 1e-14)

DOMINATING_SET = "dominating_set"
UNIFORM = "uniform"


@dataclass(frozen=True)
class StochasticWeights:
    """Per-element expected weights and variances.

    mu[i] and var[i] are stored as float64; the generators below produce
    integer values (exactly representable), the degree-based mu is fractional
    by construction.  Subset sums stay within the exact-integer range of
    float64 for every supported instance size.
    """

    mu: np.ndarray
    var: np.ndarray

    def __post_init__(self) -> None:
        if len(self.mu) != len(self.var):
            raise ValueError("mu and var must have equal length")
        if (self.mu < 0).any() or (self.var < 0).any():
            raise ValueError("weights must be non-negative")

    @property
    def n(self) -> int:
        return len(self.mu)


@dataclass(frozen=True)
class ProblemInstance:
    """A problem model: kind, weights, and the constraint bound B."""

    kind: str
    weights: StochasticWeights
    graph: Graph | None
    B: int

    @classmethod
    def dominating_set(cls, graph: Graph, weights: StochasticWeights) -> "ProblemInstance":
        if weights.n != graph.n:
            raise ValueError(f"weights for {weights.n} elements, graph has {graph.n} nodes")
        return cls(kind=DOMINATING_SET, weights=weights, graph=graph, B=graph.n)

    @classmethod
    def uniform(cls, weights: StochasticWeights) -> "ProblemInstance":
        return cls(kind=UNIFORM, weights=weights, graph=None, B=weights.n)

    @property
    def n(self) -> int:
        return self.weights.n


def evaluate(inst: ProblemInstance, x: np.ndarray) -> Objective3:
    """Objective vector (mu(x), v(x), c(x)) of bit vector x.  Pure."""
    x = np.asarray(x, dtype=np.float64)
    if len(x) != inst.n:
        raise ValueError(f"solution length {len(x)} != instance size {inst.n}")
    mu = float(inst.weights.mu @ x)
    var = float(inst.weights.var @ x)
    if inst.kind == DOMINATING_SET:
        c = count_dominated(inst.graph, x)
    else:
        c = int(round(float(x.sum())))
    return Objective3(mu, var, c)


# Acklam's rational approximation of the standard normal quantile
# (absolute error < 1.15e-9 before refinement).
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_SQRT_2 = math.sqrt(2.0)


def _normal_cdf(x: float) -> float:
    # erfc keeps full relative precision in the lower tail (x <= 0).
    return 0.5 * math.erfc(-x / _SQRT_2)


def _quantile_lower_half(p: float) -> float:
    """Quantile for p in (0, 0.5]: rational approximation plus one Halley step."""
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        x = ((((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5])
             / ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0))
    else:
        q = p - 0.5
        r = q * q
        x = ((((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
             / (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0))
    if x * x < 1416.0:  # exp() stays finite; beyond this the raw estimate stands
        e = _normal_cdf(x) - p
        u = e * _SQRT_2PI * math.exp(0.5 * x * x)
        x -= u / (1.0 + 0.5 * x * u)
    return x


def normal_quantile(p: float) -> float:
    """Inverse standard normal CDF, absolute error below 1e-9 on (0, 1)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"probability must lie strictly in (0, 1), got {p}")
    if p <= 0.5:
        return _quantile_lower_half(p)
    # 1 - p is exact for p in [0.5, 1) (Sterbenz), so symmetry loses nothing.
    return -_quantile_lower_half(1.0 - p)


@dataclass(frozen=True)
class ConfidenceLevel:
    """Confidence alpha = 1 - beta with the cached normal quantile K_alpha."""

    beta: float
    alpha: float
    k_alpha: float

    @classmethod
    def from_beta(cls, beta: float) -> "ConfidenceLevel":
        if not 0.0 < beta <= 0.5:
            raise ValueError(f"beta must lie in (0, 1/2], got {beta}")
        alpha = 1.0 - beta
        return cls(beta=beta, alpha=alpha, k_alpha=normal_quantile(alpha))


def surrogate_weight(weights: StochasticWeights, x: np.ndarray, level: ConfidenceLevel) -> float:
    """w_hat(x) = mu(x) + K_alpha * sqrt(v(x))."""
    x = np.asarray(x, dtype=np.float64)
    if len(x) != weights.n:
        raise ValueError(f"solution length {len(x)} != weight count {weights.n}")
    return float(weights.mu @ x) + level.k_alpha * math.sqrt(float(weights.var @ x))


def surrogate_of(obj: Objective3, level: ConfidenceLevel) -> float:
    """Surrogate weight from an already-evaluated objective vector."""
    return obj.mu + level.k_alpha * math.sqrt(obj.var)


def gen_uniform_weights(n: int, rng: np.random.Generator) -> StochasticWeights:
    """Integer weights mu[i] ~ U{n..2n}, var[i] ~ U{n^2..2n^2}, i.i.d.

    Values are drawn from rng in index order (mu[0], var[0], mu[1], var[1],
    ...), so a seed alone reconstructs the instance.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    mu = np.empty(n, dtype=np.float64)
    var = np.empty(n, dtype=np.float64)
    n2 = n * n
    for i in range(n):
        mu[i] = rng.integers(n, 2 * n + 1)
        var[i] = rng.integers(n2, 2 * n2 + 1)
    return StochasticWeights(mu=mu, var=var)


def gen_degree_weights(g: Graph, rng: np.random.Generator) -> StochasticWeights:
    """Degree-based mu(u) = (n + deg(u))^5 / n^4; variances as in the uniform setting.

    Variances are drawn from rng in index order (var[0], var[1], ...).
    """
    n = g.n
    mu = (n + g.degrees).astype(np.float64) ** 5 / float(n) ** 4
    var = np.empty(n, dtype=np.float64)
    n2 = n * n
    for i in range(n):
        var[i] = rng.integers(n2, 2 * n2 + 1)
    return StochasticWeights(mu=mu, var=var)


def save_instance(
    inst: ProblemInstance,
    csv_path: str | Path,
    *,
    seed: int | None = None,
    graph_file: str | None = None,
) -> None:
    """Write the per-element weight table plus a JSON sidecar header.

    The CSV holds ``node,mu,var`` rows; the header (same stem, ``.json``)
    records kind, n, B, and the provenance the caller supplies.  Floats are
    written with repr so the round trip is bit-exact.
    """
    csv_path = Path(csv_path)
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["node", "mu", "var"])
        for i in range(inst.n):
            writer.writerow([i, repr(float(inst.weights.mu[i])), repr(float(inst.weights.var[i]))])
    header = {"kind": inst.kind, "n": inst.n, "B": inst.B, "seed": seed, "graph_file": graph_file}
    with open(csv_path.with_suffix(".json"), "w") as fh:
        json.dump(header, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_instance(csv_path: str | Path, graph: Graph | None = None) -> tuple[ProblemInstance, dict]:
    """Read an instance written by save_instance; domset instances need the graph."""
    csv_path = Path(csv_path)
    with open(csv_path.with_suffix(".json")) as fh:
        header = json.load(fh)
    mu: list[float] = []
    var: list[float] = []
    with open(csv_path, newline="") as fh:
        for row in csv.DictReader(fh):
            mu.append(float(row["mu"]))
            var.append(float(row["var"]))
    weights = StochasticWeights(mu=np.array(mu), var=np.array(var))
    if header["kind"] == DOMINATING_SET:
        if graph is None:
            raise ValueError("dominating-set instances need the graph to load")
        return ProblemInstance.dominating_set(graph, weights), header
    return ProblemInstance.uniform(weights), header
