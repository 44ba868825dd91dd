"""Closed-form constructors and simulators for two worked models.

*Arithmetic system*: independent indicators with p_i = 2 a i for
i = 1..n, which has the closed moments lam = a n (n + 1) and
theta = 2 a (2n + 1)/3.  Used to exercise the independent-case bounds at
scales (n up to 1e12) where the sequence must never be materialised.

*Random orientations on the n-cube*: every one of the n 2^(n-1) edges of
{0,1}^n is oriented by an independent fair coin, and W counts the vertices
with exactly k edges pointing outward.  The 2^n indicators are
Bern(2^-n C(n,k)), pairwise dependent only across edges, giving the
closed-form Chen-Stein coefficients

    lam = C(n, k)
    b1  = 2^-n (n + 1) C(n, k)^2       (neighbourhoods include the vertex itself)
    b2  = n 2^(2-n) C(n-1, k) C(n-1, k-1)
    b3  = 0   (edges outside a vertex's neighbourhood are irrelevant to it)

with index-set size m = 2^n.  A direct Monte Carlo simulator (n <= 20)
validates the closed-form mean and the k <-> n-k symmetry; at simulable
sizes the entropy-certificate hypothesis a(lam) <= 1/2 generally fails, so
the simulator deliberately does not "check" the bound itself.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bounds import (
    EntropyBoundReport,
    MomentSummary,
    best_independent_bound,
    entropy_bound_general,
    entropy_bound_independent,
    entropy_bound_independent_sharp,
)
from .chenstein import ChenSteinCoefficients
from .logspace import LogScalar

__all__ = [
    "arithmetic_moments",
    "hypercube_coefficients",
    "hypercube_symmetry_pair",
    "hypercube_monte_carlo",
    "MonteCarloResult",
    "Example1Case",
    "Table1Row",
    "reproduce_example1",
    "reproduce_table1",
]

_LN2 = math.log(2.0)

# Replicates per RNG chunk.  Fixed as part of the determinism contract: each
# chunk draws from SeedSequence(master_seed, chunk_index), so results are
# bit-identical no matter how many threads process the chunks.
_MC_CHUNK = 4096

MC_MAX_DIMENSION = 20


def arithmetic_moments(a: float, n: int) -> MomentSummary:
    """Closed-form moments of the system p_i = 2 a i, i = 1..n.

    lam = a n (n+1) and sum p_i^2 = theta lam with theta = 2 a (2n+1)/3.
    Requires 2 a n <= 1 so the largest p_i is a probability.  The products
    use exact integer factors, so nothing is lost to summation order even at
    n = 1e12.
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not a > 0.0:
        raise ValueError(f"a must be > 0, got {a}")
    if 2.0 * a * n > 1.0 + 1e-15:
        raise ValueError(f"2 a n = {2.0 * a * n} exceeds 1; p_n is not a probability")
    lam = a * (n * (n + 1))
    theta = 2.0 * a * (2 * n + 1) / 3.0
    return MomentSummary(lam=lam, sum_p_squared=theta * lam, m=n)


def hypercube_coefficients(n: int, k: int) -> ChenSteinCoefficients:
    """Closed-form Chen-Stein coefficients of the n-cube orientation model.

    Exact big-integer binomials feed the log-domain scalars, so n = 100
    (lam^2 ~ 1e50 against 2^-100) is routine.  The empty-binomial convention
    C(n-1, -1) = C(n-1, n) = 0 makes the k = 0 and k = n rows well defined
    with b2 = 0.
    """
    n, k = int(n), int(k)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in 0..n, got k={k}, n={n}")
    c_nk = math.comb(n, k)
    lam = LogScalar.from_float(c_nk)
    b1 = LogScalar.from_float((n + 1) * c_nk * c_nk) * LogScalar.from_log(-n * _LN2)
    if k == 0 or k == n:
        b2 = LogScalar.zero()
    else:
        b2 = LogScalar.from_float(
            n * math.comb(n - 1, k) * math.comb(n - 1, k - 1)
        ) * LogScalar.from_log((2 - n) * _LN2)
    return ChenSteinCoefficients(
        b1=b1, b2=b2, b3=LogScalar.zero(), lam=lam, log2_m=float(n)
    )


def hypercube_symmetry_pair(n: int, k: int):
    """Coefficients for (n, k) and (n, n-k); identical by C(n,k) = C(n,n-k)."""
    return hypercube_coefficients(n, k), hypercube_coefficients(n, n - k)


@dataclass(frozen=True)
class MonteCarloResult:
    """Empirical summary of simulated orientation counts."""

    n: int
    k: int
    replicates: int
    master_seed: int
    counts: np.ndarray = field(compare=False)
    mean_w: float
    mean_std_err: float
    pmf: np.ndarray = field(compare=False)
    entropy_plugin: float
    entropy_jackknife_se: float
    lam_closed_form: float
    note: str = field(default="", compare=False)


def _edge_tables(n: int):
    # For dimension d, canonical edge endpoints are vertices with bit d = 0;
    # the edge index is the vertex index with bit d squeezed out.
    size = 1 << n
    v = np.arange(size, dtype=np.int64)
    eidx = np.empty((n, size), dtype=np.int64)
    vbit = np.empty((n, size), dtype=np.uint8)
    for d in range(n):
        low = v & ((1 << d) - 1)
        high = v >> (d + 1)
        eidx[d] = low | (high << d)
        vbit[d] = ((v >> d) & 1).astype(np.uint8)
    return eidx, vbit


def _mc_chunk_counts(n, k, eidx, vbit, chunk_size, seed_seq):
    rng = np.random.default_rng(seed_seq)
    size = 1 << n
    bits = rng.integers(0, 2, size=(chunk_size, n, 1 << (n - 1)), dtype=np.uint8)
    outdeg = np.zeros((chunk_size, size), dtype=np.int16)
    for d in range(n):
        # Orientation bit XOR endpoint bit = "points outward from this vertex".
        outdeg += bits[:, d, eidx[d]] ^ vbit[d][np.newaxis, :]
    w = np.count_nonzero(outdeg == k, axis=1)
    return np.bincount(w, minlength=size + 1).astype(np.int64)


def hypercube_monte_carlo(
    n: int,
    k: int,
    replicates: int,
    master_seed: int,
    threads: int = 1,
) -> MonteCarloResult:
    """Simulate the orientation count W and summarise it empirically.

    Each replicate orients all n 2^(n-1) edges independently and counts the
    vertices with exactly k outward edges.  Replicates are processed in
    fixed-size chunks whose RNG streams derive from (master_seed,
    chunk_index), so the result is bit-identical for any ``threads`` value.
    Returns the empirical mean with its standard error, the empirical pmf,
    and the plug-in entropy with a jackknife standard error (plug-in bias is
    not quantified).
    """
    n, k = int(n), int(k)
    if not 1 <= n <= MC_MAX_DIMENSION:
        raise ValueError(
            f"simulation materialises 2^n vertices; need 1 <= n <= "
            f"{MC_MAX_DIMENSION}, got {n}"
        )
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in 0..n, got k={k}, n={n}")
    if replicates < 1:
        raise ValueError(f"replicates must be >= 1, got {replicates}")
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")

    eidx, vbit = _edge_tables(n)
    n_chunks = (replicates + _MC_CHUNK - 1) // _MC_CHUNK
    sizes = [
        min(_MC_CHUNK, replicates - i * _MC_CHUNK) for i in range(n_chunks)
    ]
    seqs = [
        np.random.SeedSequence(entropy=master_seed, spawn_key=(i,))
        for i in range(n_chunks)
    ]

    def run(i):
        return _mc_chunk_counts(n, k, eidx, vbit, sizes[i], seqs[i])

    if threads == 1:
        partials = [run(i) for i in range(n_chunks)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(run, range(n_chunks)))
    counts = np.sum(partials, axis=0)

    total = int(counts.sum())
    support = np.arange(counts.size, dtype=np.float64)
    mean = float(np.dot(support, counts)) / total
    var = float(np.dot((support - mean) ** 2, counts)) / max(total - 1, 1)
    mean_se = math.sqrt(var / total)
    pmf = counts / total

    entropy, jack_se = _plugin_entropy_jackknife(counts)
    return MonteCarloResult(
        n=n,
        k=k,
        replicates=replicates,
        master_seed=int(master_seed),
        counts=counts,
        mean_w=mean,
        mean_std_err=mean_se,
        pmf=pmf,
        entropy_plugin=entropy,
        entropy_jackknife_se=jack_se,
        lam_closed_form=float(math.comb(n, k)),
        note=(
            "simulation validates the closed-form mean and symmetry; the "
            "entropy-bound hypothesis a(lambda) <= 1/2 generally fails at "
            "simulable sizes, so no certificate is checked here"
        ),
    )


def _plugin_entropy_jackknife(counts: np.ndarray):
    """Plug-in entropy of a count vector and its leave-one-out jackknife SE.

    Deleting one observation of value w only changes the w count, so the
    n distinct leave-one-out entropies are computed from the count sums in
    O(support) rather than O(replicates).
    """
    total = int(counts.sum())
    nz = counts[counts > 0].astype(np.float64)
    h_plugin = math.log(total) - float(np.dot(nz, np.log(nz))) / total
    if total < 2:
        return h_plugin, 0.0

    s_full = float(np.dot(nz, np.log(nz)))
    c = nz
    s_wo = s_full - c * np.log(c) + np.where(c > 1, (c - 1) * np.log(np.maximum(c - 1, 1)), 0.0)
    h_wo = math.log(total - 1) - s_wo / (total - 1)
    h_bar = float(np.dot(c, h_wo)) / total
    var_jack = (total - 1) / total * float(np.dot(c, (h_wo - h_bar) ** 2))
    return h_plugin, math.sqrt(var_jack)


# ---------------------------------------------------------------------------
# Reference reproductions: published figures are carried alongside the
# recomputed ones so reports can print them side by side.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Example1Case:
    """One parameterisation of the arithmetic system with reference figures."""

    a: float
    n: int
    moments: MomentSummary
    corollary: EntropyBoundReport
    proposition: EntropyBoundReport
    best: EntropyBoundReport
    reference: dict = field(compare=False)


_EXAMPLE1_REFERENCE = (
    {
        "h_poisson_nats": 8.327,
        "corollary_epsilon_nats": 0.588,
        "proposition_epsilon_nats": 0.205,
        "point_estimate_nats": 8.224,
        "relative_error": 0.012,
    },
    {
        "h_poisson_nats": 12.932,
        "point_estimate_nats": 12.932,
        "relative_error": 0.0004,
        "note": (
            "the published 0.04% relative error is not reproduced by direct "
            "evaluation of these bound formulas (recomputation gives about "
            "1%); both figures are reported without reconciliation"
        ),
    },
)


def reproduce_example1() -> list:
    """Run both arithmetic-system cases through the independent bounds."""
    cases = []
    for (a, n), ref in zip(((1e-10, 10**8), (1e-14, 10**12)), _EXAMPLE1_REFERENCE):
        moments = arithmetic_moments(a, n)
        cases.append(
            Example1Case(
                a=a,
                n=n,
                moments=moments,
                corollary=entropy_bound_independent(moments),
                proposition=entropy_bound_independent_sharp(moments),
                best=best_independent_bound(moments),
                reference=dict(ref),
            )
        )
    return cases


@dataclass(frozen=True)
class Table1Row:
    """One (n, k) row of the orientation-model benchmark."""

    n: int
    k: int
    lam: float
    entropy_nats: float
    relative_error: float
    report: EntropyBoundReport = field(compare=False)
    reference_lambda: float = field(compare=False, default=math.nan)
    reference_entropy_nats: float = field(compare=False, default=math.nan)
    reference_relative_error: float = field(compare=False, default=math.nan)
    reference_format: str = field(compare=False, default="fraction")


# (n, k, lambda, H in nats, relative error, display format of the source).
_TABLE1_REFERENCE = (
    (30, 27, 4.060e3, 5.573, 0.16e-2, "percent"),
    (30, 26, 2.741e4, 6.528, 0.94e-2, "percent"),
    (30, 25, 1.425e5, 7.353, 4.33e-2, "percent"),
    (50, 48, 1.225e3, 4.974, 1.5e-9, "fraction"),
    (50, 44, 1.589e7, 9.710, 1.0e-5, "fraction"),
    (50, 40, 1.027e10, 12.945, 4.8e-3, "fraction"),
    (100, 95, 7.529e7, 10.487, 1.6e-19, "fraction"),
    (100, 85, 2.533e17, 21.456, 2.6e-10, "fraction"),
    (100, 75, 2.425e23, 28.342, 1.9e-4, "fraction"),
    (100, 70, 2.937e25, 30.740, 2.1e-2, "percent"),
)


def reproduce_table1() -> list:
    """Recompute all ten benchmark rows of the orientation model.

    Every row satisfies the certificate hypotheses; a ConditionViolated here
    would mean the closed forms are wrong, so it is allowed to propagate.
    """
    rows = []
    for n, k, ref_lam, ref_h, ref_rel, ref_fmt in _TABLE1_REFERENCE:
        coeffs = hypercube_coefficients(n, k)
        report = entropy_bound_general(coeffs)
        rows.append(
            Table1Row(
                n=n,
                k=k,
                lam=coeffs.lam.to_float(),
                entropy_nats=report.h_poisson.nats,
                relative_error=report.relative_error,
                report=report,
                reference_lambda=ref_lam,
                reference_entropy_nats=ref_h,
                reference_relative_error=ref_rel,
                reference_format=ref_fmt,
            )
        )
    return rows
