"""Exact finite-n law of the edge and p-star densities of a uniform digraph.

Both densities depend only on the out-degree vector (d_1, .., d_n):

    E = sum_i d_i,   S = sum_i d_i^p,   e = E / n^2,   s = S / n^(p+1)

and the rows are i.i.d. Binomial(n, 1/2).  A dynamic program over rows with
state (E, S) therefore gives the exact joint law.  Layers are kept as
probabilities (each row multiplies by the binomial pmf, i.e. an exact 2^-n
rescaling of the counts), which avoids overflow for every n the memory
budget admits.  When 2^-(n^2) would underflow the DP switches to log space.
"""

from __future__ import annotations

import math
import os
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import gammaln, logsumexp

from .curve import _check_p
from .errors import DomainError, EmptyWindowError, ResourceError
from .scalar import LOG2

MEMORY_BUDGET = 2 * 1024**3
DEFAULT_N_MAX = {2: 16, 3: 12}
_LINEAR_LIMIT = 1000  # n^2 above this: 2^-(n^2) leaves the double range

CACHE_MAGIC = b"DPSTARFL"
CACHE_VERSION = 1
_HEADER = struct.Struct("<8sIqqq")  # magic, version, n, p, record count
_RECORD = np.dtype([("E", "<i8"), ("S", "<i8"), ("logw", "<f8")])


@dataclass(frozen=True)
class FiniteLaw:
    """Sparse table of log digraph counts keyed by (E, S), sorted by E then S."""

    n: int
    p: int
    E: np.ndarray
    S: np.ndarray
    logw: np.ndarray

    def __len__(self) -> int:
        return len(self.logw)

    def log_total(self) -> float:
        return float(logsumexp(self.logw))

    def as_dict(self) -> dict[tuple[int, int], float]:
        return {(int(a), int(b)): float(w) for a, b, w in zip(self.E, self.S, self.logw)}

    def e_values(self) -> np.ndarray:
        return self.E / self.n**2

    def s_values(self) -> np.ndarray:
        return self.S / self.n ** (self.p + 1)


@dataclass(frozen=True)
class ConditionalRowLaw:
    """Law of one out-degree d in {0..n} given the window event."""

    n: int
    probabilities: np.ndarray

    def rates(self) -> np.ndarray:
        return np.arange(self.n + 1) / self.n


def default_n_max(p: int, budget: int = MEMORY_BUDGET) -> int:
    p = _check_p(p)
    if p in DEFAULT_N_MAX:
        return DEFAULT_N_MAX[p]
    n = 1
    while _layer_bytes(n + 1, p) * 2 <= budget:
        n += 1
    return n


def default_delta(n: int) -> float:
    return max(0.05, 2.0 / n)


def _layer_shape(k: int, n: int, p: int) -> tuple[int, int]:
    return k * n + 1, k * n**p + 1


def _layer_bytes(n: int, p: int) -> int:
    rows, cols = _layer_shape(n, n, p)
    return rows * cols * 8


def _check_size(n: int, p: int, n_max: int | None, budget: int) -> tuple[int, int]:
    p = _check_p(p)
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    limit = default_n_max(p, budget) if n_max is None else int(n_max)
    if n > limit:
        raise DomainError(f"n={n} exceeds n_max={limit} for p={p}")
    if 2 * _layer_bytes(n, p) > budget:
        raise ResourceError(
            f"DP layers for n={n}, p={p} need {2 * _layer_bytes(n, p)} bytes > budget {budget}")
    return n, p


def _binomial_pmf(n: int) -> np.ndarray:
    return np.array([math.comb(n, d) for d in range(n + 1)], dtype=float) / 2.0**n


def _log_binomial(n: int) -> np.ndarray:
    d = np.arange(n + 1)
    return gammaln(n + 1) - gammaln(d + 1) - gammaln(n - d + 1)


def _forward_linear(n: int, p: int) -> np.ndarray:
    pmf = _binomial_pmf(n)
    layer = np.ones((1, 1))
    for k in range(1, n + 1):
        nxt = np.zeros(_layer_shape(k, n, p))
        r, c = layer.shape
        for d in range(n + 1):
            dp = d**p
            nxt[d:d + r, dp:dp + c] += pmf[d] * layer
        layer = nxt
    return layer


def _forward_log(n: int, p: int) -> np.ndarray:
    logc = _log_binomial(n)
    layer = np.zeros((1, 1))
    for k in range(1, n + 1):
        nxt = np.full(_layer_shape(k, n, p), -np.inf)
        r, c = layer.shape
        for d in range(n + 1):
            dp = d**p
            view = nxt[d:d + r, dp:dp + c]
            np.logaddexp(view, logc[d] + layer, out=view)
        layer = nxt
    return layer


def _sparse_law(n: int, p: int, logtable: np.ndarray) -> FiniteLaw:
    E, S = np.nonzero(np.isfinite(logtable))
    # np.nonzero is row-major, so the triples are already sorted by (E, S)
    return FiniteLaw(n=n, p=p, E=E.astype(np.int64), S=S.astype(np.int64),
                     logw=logtable[E, S].astype(float))


def _compute_law(n: int, p: int) -> FiniteLaw:
    if n * n <= _LINEAR_LIMIT:
        with np.errstate(divide="ignore"):
            logtable = np.log(_forward_linear(n, p)) + n * n * LOG2
    else:
        logtable = _forward_log(n, p)
    return _sparse_law(n, p, logtable)


def cache_path(cache_dir: str | os.PathLike, n: int, p: int) -> Path:
    return Path(cache_dir) / f"law_n{n}_p{p}.v{CACHE_VERSION}.bin"


def save_law(law: FiniteLaw, path: str | os.PathLike) -> None:
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(_HEADER.pack(CACHE_MAGIC, CACHE_VERSION, law.n, law.p, len(law)))
        rec = np.empty(len(law), dtype=_RECORD)
        rec["E"], rec["S"], rec["logw"] = law.E, law.S, law.logw
        fh.write(rec.tobytes())
    os.replace(tmp, path)


def load_law(path: str | os.PathLike) -> FiniteLaw:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise ValueError(f"{path}: truncated header")
    magic, version, n, p, count = _HEADER.unpack_from(raw)
    if magic != CACHE_MAGIC or version != CACHE_VERSION:
        raise ValueError(f"{path}: not a version-{CACHE_VERSION} law cache")
    body = raw[_HEADER.size:]
    if len(body) != _RECORD.itemsize * count:
        raise ValueError(f"{path}: expected {count} records")
    rec = np.frombuffer(body, dtype=_RECORD, count=count)
    return FiniteLaw(n=int(n), p=int(p), E=rec["E"].astype(np.int64),
                     S=rec["S"].astype(np.int64), logw=rec["logw"].astype(float))


def exact_joint_law(n: int, p: int, n_max: int | None = None,
                    memory_budget: int = MEMORY_BUDGET,
                    cache_dir: str | os.PathLike | None = None) -> FiniteLaw:
    """Exact law of (E, S) over all 2^(n^2) digraphs on n nodes."""
    n, p = _check_size(n, p, n_max, memory_budget)
    if cache_dir is not None:
        path = cache_path(cache_dir, n, p)
        if path.exists():
            law = load_law(path)
            if law.n == n and law.p == p:
                return law
    law = _compute_law(n, p)
    if cache_dir is not None:
        Path(cache_dir).mkdir(parents=True, exist_ok=True)
        save_law(law, cache_path(cache_dir, n, p))
    return law


def _window_range(lo: float, hi: float, scale: int, top: int) -> tuple[int, int]:
    # integers k in [0, top] with lo < k / scale < hi
    first = max(math.floor(lo * scale), 0)
    last = min(math.ceil(hi * scale), top)
    while first <= last and not first / scale > lo:
        first += 1
    while last >= first and not last / scale < hi:
        last -= 1
    return first, last


def _window(n: int, p: int, e: float, s: float, delta: float):
    if not delta > 0.0:
        raise DomainError(f"delta must be positive, got {delta!r}")
    E = _window_range(e - delta, e + delta, n * n, n * n)
    S = _window_range(s - delta, s + delta, n ** (p + 1), n ** (p + 1))
    return E, S


def window_log_prob(law: FiniteLaw, e: float, s: float, delta: float) -> float:
    """psi_n^delta(e, s) = (1/n^2) log P(|e(X) - e| < delta, |s(X) - s| < delta)."""
    (e0, e1), (s0, s1) = _window(law.n, law.p, e, s, delta)
    mask = (law.E >= e0) & (law.E <= e1) & (law.S >= s0) & (law.S <= s1)
    if not mask.any():
        return -math.inf
    return float(logsumexp(law.logw[mask])) / law.n**2 - LOG2


def _completion_tables(n: int, p: int, e: float, s: float, delta: float,
                       keep: bool, budget: int) -> list[np.ndarray]:
    """G_k(E, S): probability that k further rows take partial sums (E, S) into the window.

    G_k lives on the states reachable after n - k rows.  Returns [G_0 .. G_n]
    when ``keep`` is set, otherwise [G_{n-1}, G_n].
    """
    if n * n > _LINEAR_LIMIT:
        raise ResourceError(f"n={n} is beyond the linear-space completion tables")
    (e0, e1), (s0, s1) = _window(n, p, e, s, delta)
    if e0 > e1 or s0 > s1:
        raise EmptyWindowError(f"window around (e, s)=({e}, {s}) with delta={delta} is empty")
    if keep:
        need = sum(np.prod(_layer_shape(k, n, p)) for k in range(n + 1)) * 8
        if need > budget:
            raise ResourceError(f"completion tables need {need} bytes > budget {budget}")
    pmf = _binomial_pmf(n)
    g = np.zeros(_layer_shape(n, n, p))
    g[e0:e1 + 1, s0:s1 + 1] = 1.0
    tables = [g]
    prev_last = g
    for k in range(1, n + 1):
        r, c = _layer_shape(n - k, n, p)
        cur = np.zeros((r, c))
        for d in range(n + 1):
            dp = d**p
            cur += pmf[d] * g[d:d + r, dp:dp + c]
        prev_last, g = g, cur
        if keep:
            tables.append(g)
    if g[0, 0] <= 0.0:
        raise EmptyWindowError(
            f"no out-degree vector reaches the window around (e, s)=({e}, {s}), delta={delta}")
    return tables if keep else [prev_last, g]


def conditional_row_law(n: int, p: int, e: float, s: float, delta: float,
                        n_max: int | None = None,
                        memory_budget: int = MEMORY_BUDGET) -> ConditionalRowLaw:
    """Exact law of d_1 given e(X), s(X) in the open delta-window around (e, s)."""
    n, p = _check_size(n, p, n_max, memory_budget)
    g_rest, _ = _completion_tables(n, p, e, s, delta, keep=False, budget=memory_budget)
    d = np.arange(n + 1)
    w = _binomial_pmf(n) * g_rest[d, d**p]
    return ConditionalRowLaw(n=n, probabilities=w / w.sum())


def sample_conditioned(n: int, p: int, e: float, s: float, delta: float, seed: int,
                       count: int, n_max: int | None = None,
                       memory_budget: int = MEMORY_BUDGET) -> np.ndarray:
    """``count`` i.i.d. exact draws of (d_1, .., d_n) from the conditioned law.

    Rows are drawn in order from their exact conditionals given the rows
    already drawn; one ``numpy`` generator seeded by ``seed`` drives all draws.
    """
    if isinstance(count, bool) or int(count) != count or count < 1:
        raise DomainError(f"count must be a positive integer, got {count!r}")
    n, p = _check_size(n, p, n_max, memory_budget)
    tables = _completion_tables(n, p, e, s, delta, keep=True, budget=memory_budget)
    rng = np.random.default_rng(seed)
    pmf = _binomial_pmf(n)
    d = np.arange(n + 1)
    dp = d**p
    E = np.zeros(count, dtype=np.int64)
    S = np.zeros(count, dtype=np.int64)
    out = np.empty((count, n), dtype=np.int64)
    for i in range(n):
        g = tables[n - 1 - i]
        w = pmf[None, :] * g[E[:, None] + d[None, :], S[:, None] + dp[None, :]]
        cdf = np.cumsum(w, axis=1)
        u = rng.random(count) * cdf[:, -1]
        pick = np.minimum((cdf <= u[:, None]).sum(axis=1), n)
        out[:, i] = pick
        E += pick
        S += dp[pick]
    return out
