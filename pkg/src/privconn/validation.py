"""Empirical checks of the privacy and accuracy claims, plus a
reconstruction demo.

Four audits:

  * audit_sensitivity exhausts every graph on up to 5 nodes and verifies
    that editing at most A edges never moves lambda2 by more than 2A.
  * audit_dp samples the release mechanism on adjacent graph pairs,
    histograms both output laws, and searches for an event whose
    probabilities break the (epsilon, delta) inequality by more than
    sampling noise explains. Run with scale_factor < 1 it doubles as a
    negative control: a deliberately under-scaled mechanism must fail.
  * audit_concentration measures how often the estimated contraction
    factor strays from the truth at each time in a grid and compares
    against the certified tail bound.
  * audit_expectations Monte-Carlo checks the closed-form means used by
    the planning operations (draw, its inverse square root, the rate
    error at t = 1).

The attack side shows why the noise is needed: enumerate_consistent_graphs
lists every graph consistent with partial edge knowledge and a published
connectivity value; exact_value_attack reports which edges that pins
down; attack_under_noise repeats the enumeration against a private
release, where the candidate set swells back to near-uselessness.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .consensus_analysis import RateErrorQuery, concentration_bound, expected_rate_error
from .graph_core import Graph, spectrum
from .privacy_mechanism import BoundedLaplaceDist, PrivacyParams, solve_scale_b
from .property_bounds import expected_inv_sqrt_lambda2, expected_lambda2

__all__ = [
    "AuditReport",
    "AttackResult",
    "NoisyAttackResult",
    "audit_sensitivity",
    "audit_dp",
    "audit_concentration",
    "audit_expectations",
    "enumerate_consistent_graphs",
    "exact_value_attack",
    "attack_under_noise",
]

# The sensitivity audit compares every graph against every neighbor, so it
# is kept one node smaller than the plain enumerations.
_MAX_SENSITIVITY_N = 5
_MAX_ENUMERATION_N = 6
# Cap on 2^k candidate completions in the attack enumerations.
_MAX_UNKNOWN_SLOTS = 20


@dataclass(frozen=True)
class AuditReport:
    """Outcome of one audit: the worst margin found and how hard it looked.

    worst_violation is signed slack against the claimed inequality;
    negative means the claim held with room to spare, positive means it
    was broken beyond what sampling noise explains. trials records the
    per-unit sampling effort (draws per graph, draws per grid point, or
    pairs compared for the exhaustive scan).
    """

    audit_name: str
    trials: int
    worst_violation: float
    passed: bool
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "audit_name": self.audit_name,
            "trials": self.trials,
            "worst_violation": self.worst_violation,
            "passed": self.passed,
            "details": self.details,
        }


def _edge_slots(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))


def _all_lambda2(n: int) -> tuple[list[tuple[int, int]], np.ndarray]:
    """lambda2 for every graph on n labelled nodes, indexed by edge bitmask."""
    slots = _edge_slots(n)
    m = len(slots)
    count = 1 << m
    bits = (np.arange(count, dtype=np.int64)[:, None] >> np.arange(m)) & 1
    L = np.zeros((count, n, n))
    for j, (u, v) in enumerate(slots):
        w = bits[:, j].astype(float)
        L[:, u, v] -= w
        L[:, v, u] -= w
        L[:, u, u] += w
        L[:, v, v] += w
    vals = np.linalg.eigvalsh(L)
    return slots, vals[:, 1]


def _mask_edges(mask: int, slots: list[tuple[int, int]]) -> list[list[int]]:
    return [list(slots[j]) for j in range(len(slots)) if (mask >> j) & 1]


def audit_sensitivity(n: int, A: int = 1, slack: float = 1e-9) -> AuditReport:
    """Exhaustively confirm |lambda2(G) - lambda2(G')| <= 2A over all
    pairs of n-node graphs differing in at most A edges.

    The observed maximum is reported alongside the bound; it is tight
    (complete versus complete-minus-an-edge realizes exactly 2A = 2 for
    A = 1), so passing means the bound holds up to the roundoff slack,
    not that it is loose.
    """
    if not 2 <= n <= _MAX_SENSITIVITY_N:
        raise ValueError(f"exhaustive sensitivity audit supports 2 <= n <= {_MAX_SENSITIVITY_N}")
    if A < 1:
        raise ValueError(f"adjacency radius must be >= 1, got {A}")
    slots, lam2 = _all_lambda2(n)
    m = len(slots)
    bound = 2.0 * A
    idx = np.arange(1 << m)
    observed = 0.0
    worst = (0, 0)
    compared = 0
    if A >= m:
        # every pair is adjacent; the extreme gap is empty vs complete
        observed = float(np.ptp(lam2))
        worst = (int(np.argmin(lam2)), int(np.argmax(lam2)))
        compared = (1 << m) * ((1 << m) - 1) // 2
    else:
        for k in range(1, A + 1):
            for flips in itertools.combinations(range(m), k):
                xor = 0
                for j in flips:
                    xor |= 1 << j
                diffs = np.abs(lam2[idx] - lam2[idx ^ xor])
                compared += diffs.size
                j_max = int(np.argmax(diffs))
                if diffs[j_max] > observed:
                    observed = float(diffs[j_max])
                    worst = (j_max, j_max ^ xor)
    violation = observed - bound
    return AuditReport(
        audit_name="sensitivity",
        trials=compared,
        worst_violation=violation,
        passed=violation <= slack,
        details={
            "n": n,
            "A": A,
            "bound": bound,
            "observed_max": observed,
            "graphs_scanned": 1 << m,
            "worst_pair_edges": [
                _mask_edges(worst[0], slots),
                _mask_edges(worst[1], slots),
            ],
        },
    )


def _lambda2_of_edges(n: int, edges: frozenset) -> float:
    # the certified path also snaps -1e-16 style roundoff back into [0, n],
    # which the sampler's domain check insists on
    return spectrum(Graph(n=n, edges=frozenset(edges))).lambda2


def _adjacent_pairs(n: int, A: int, pairs: int, rng: np.random.Generator):
    """Deterministic pairs first, then seeded random (graph, A-flip) pairs.

    The identical pair calibrates the detector: no event may separate a
    distribution from itself. The complete / complete-minus-edge pair
    realizes the full sensitivity and is where an under-scaled mechanism
    actually leaks; random pairs alone would miss it most runs. The
    empty / one-edge pair exercises the mechanism centered on the support
    boundary.
    """
    slots = _edge_slots(n)
    m = len(slots)
    full = frozenset(slots)
    yield full, full
    yield full, full - {slots[0]}
    yield frozenset(), frozenset({slots[0]})
    for _ in range(pairs):
        bits = rng.integers(0, 2, size=m).astype(bool)
        edges = frozenset(s for s, keep in zip(slots, bits) if keep)
        flips = rng.choice(m, size=min(A, m), replace=False)
        edges2 = edges.symmetric_difference(slots[int(j)] for j in flips)
        yield edges, edges2


def _distinguish(p_hat: np.ndarray, q_hat: np.ndarray, eps: float, delta: float, trials: int) -> float:
    """Violation score for the best histogram event separating p from q.

    Greedy optimal event: the bins where p already beats e^eps q. The
    score subtracts delta and three standard errors, so positive means
    the privacy inequality fails beyond what sampling noise explains.
    """
    sel = p_hat > math.exp(eps) * q_hat
    P = float(p_hat[sel].sum())
    Q = float(q_hat[sel].sum())
    sigma = math.sqrt(
        P * (1.0 - P) / trials + math.exp(2.0 * eps) * Q * (1.0 - Q) / trials
    )
    return P - math.exp(eps) * Q - delta - 3.0 * sigma


def audit_dp(
    n: int,
    params: PrivacyParams,
    pairs: int = 20,
    samples_per_graph: int = 200_000,
    bins: int = 50,
    seed: int = 0,
    scale_factor: float = 1.0,
) -> AuditReport:
    """Sample the mechanism on adjacent graph pairs and hunt for a
    distinguishing event.

    For each pair the release law is estimated with samples_per_graph
    draws per graph on a `bins`-bin histogram over [0, n], and the best
    separating event is scored in both directions. scale_factor
    multiplies the solved scale: 1.0 audits the mechanism as shipped,
    values below 1 build the negative control the audit is expected to
    catch.
    """
    if not 2 <= n <= _MAX_ENUMERATION_N:
        raise ValueError(f"audit supports 2 <= n <= {_MAX_ENUMERATION_N}")
    if samples_per_graph < 100_000:
        raise ValueError("need at least 1e5 samples per graph to resolve the histograms")
    if pairs < 0:
        raise ValueError(f"extra random pair count must be >= 0, got {pairs}")
    if bins < 2:
        raise ValueError(f"need at least 2 histogram bins, got {bins}")
    if scale_factor <= 0.0:
        raise ValueError(f"scale factor must be positive, got {scale_factor}")
    b = solve_scale_b(params, float(n)) * scale_factor
    root = np.random.SeedSequence(seed)
    pair_rng = np.random.default_rng(root.spawn(1)[0])
    per_pair = []
    worst = -math.inf
    edges = np.linspace(0.0, float(n), bins + 1)
    for edges_g, edges_h in _adjacent_pairs(n, params.A, pairs, pair_rng):
        c_g = _lambda2_of_edges(n, edges_g)
        c_h = _lambda2_of_edges(n, edges_h)
        sample_rngs = [np.random.default_rng(s) for s in root.spawn(2)]
        hists = []
        for center, rng in zip((c_g, c_h), sample_rngs):
            dist = BoundedLaplaceDist(center=center, scale_b=b, domain_upper_n=float(n))
            draws = dist.sample(rng, size=samples_per_graph)
            counts, _ = np.histogram(draws, bins=edges)
            hists.append(counts / samples_per_graph)
        fwd = _distinguish(hists[0], hists[1], params.epsilon, params.delta, samples_per_graph)
        rev = _distinguish(hists[1], hists[0], params.epsilon, params.delta, samples_per_graph)
        worst = max(worst, fwd, rev)
        per_pair.append(
            {
                "lambda2_pair": [c_g, c_h],
                "violation_forward": fwd,
                "violation_reverse": rev,
            }
        )
    return AuditReport(
        audit_name="dp_distinguisher",
        trials=samples_per_graph,
        worst_violation=worst,
        passed=worst <= 0.0,
        details={
            "n": n,
            "epsilon": params.epsilon,
            "delta": params.delta,
            "A": params.A,
            "b": b,
            "scale_factor": scale_factor,
            "bins": bins,
            "pairs": per_pair,
        },
    )


def audit_concentration(
    lambda2: float,
    b: float,
    n: float,
    t_grid,
    a: float,
    trials: int = 10_000,
    seed: int = 0,
) -> AuditReport:
    """Measure the rate-error tail against its certified bound on a time grid.

    At each time t the empirical exceedance frequency
    P(|exp(-X t) - exp(-lambda2 t)| >= a) over fresh draws of X is
    compared with the Markov bound; the violation subtracts three
    binomial standard errors, so positive means the certificate is wrong,
    not unlucky. details carries the full curve, including the certified
    success floor 1 - bound (negative where the bound is vacuous;
    reported as computed).
    """
    if trials < 10_000:
        raise ValueError("need at least 1e4 draws per grid point")
    if a <= 0.0:
        raise ValueError(f"deviation threshold must be positive, got {a}")
    t_arr = np.asarray(t_grid, dtype=float)
    if t_arr.ndim != 1 or t_arr.size == 0:
        raise ValueError("t_grid must be a nonempty 1-d sequence of times")
    if (t_arr <= 0.0).any():
        raise ValueError("all grid times must be strictly positive")
    dist = BoundedLaplaceDist(center=lambda2, scale_b=b, domain_upper_n=float(n))
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    rows = []
    worst = -math.inf
    for t in t_arr:
        draws = dist.sample(rng, size=trials)
        gaps = np.abs(np.exp(-draws * t) - math.exp(-lambda2 * t))
        p_hat = float((gaps >= a).mean())
        bound = concentration_bound(RateErrorQuery(t=float(t), a=a), lambda2, b, float(n)).bound
        sigma = math.sqrt(p_hat * (1.0 - p_hat) / trials)
        violation = p_hat - bound - 3.0 * sigma
        worst = max(worst, violation)
        rows.append(
            {
                "t": float(t),
                "bound": bound,
                "empirical": p_hat,
                "std_error": sigma,
                "success_floor": 1.0 - bound,
            }
        )
    return AuditReport(
        audit_name="concentration",
        trials=trials,
        worst_violation=worst,
        passed=worst <= 0.0,
        details={
            "lambda2": lambda2,
            "b": b,
            "n": float(n),
            "a": a,
            "grid": rows,
        },
    )


def audit_expectations(
    lambda2: float,
    b: float,
    n: float,
    trials: int = 1_000_000,
    seed: int = 0,
) -> AuditReport:
    """Monte-Carlo check of the closed-form means the planner relies on.

    One batch of draws feeds three comparisons: the mean draw, the mean
    inverse square root, and the mean absolute rate error at t = 1, each
    against its closed form with a three-standard-error allowance.
    """
    if trials < 1_000_000:
        raise ValueError("need at least 1e6 draws to resolve the means")
    dist = BoundedLaplaceDist(center=lambda2, scale_b=b, domain_upper_n=float(n))
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    draws = dist.sample(rng, size=trials)
    t_probe = 1.0
    quantities = [
        ("mean_draw", draws, expected_lambda2(lambda2, b, float(n))),
        ("mean_inv_sqrt", 1.0 / np.sqrt(draws), expected_inv_sqrt_lambda2(lambda2, b, float(n))),
        (
            "mean_rate_error_at_t1",
            np.abs(np.exp(-draws * t_probe) - math.exp(-lambda2 * t_probe)),
            float(expected_rate_error(t_probe, lambda2, b, float(n))),
        ),
    ]
    rows = []
    worst = -math.inf
    for name, samples, closed in quantities:
        mc = float(samples.mean())
        se = float(samples.std(ddof=1)) / math.sqrt(trials)
        violation = abs(mc - closed) - 3.0 * se
        worst = max(worst, violation)
        rows.append(
            {
                "quantity": name,
                "closed_form": closed,
                "monte_carlo": mc,
                "std_error": se,
                "violation": violation,
            }
        )
    return AuditReport(
        audit_name="expectations",
        trials=trials,
        worst_violation=worst,
        passed=worst <= 0.0,
        details={"lambda2": lambda2, "b": b, "n": float(n), "quantities": rows},
    )


def _normalize_known(n: int, edges) -> frozenset:
    out = set()
    for u, v in edges:
        u, v = int(u), int(v)
        if u == v or not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"bad edge ({u}, {v}) for n = {n}")
        out.add((min(u, v), max(u, v)))
    return frozenset(out)


def _enumerate_completions(
    n: int, known_present: frozenset, known_absent: frozenset
) -> tuple[list[tuple[int, int]], np.ndarray]:
    """lambda2 of every graph that agrees with the adversary's knowledge.

    Returns the unknown slots and an array indexed by completion bitmask.
    """
    slots = _edge_slots(n)
    unknown = [s for s in slots if s not in known_present and s not in known_absent]
    k = len(unknown)
    if k > _MAX_UNKNOWN_SLOTS:
        raise ValueError(
            f"{k} unknown edge slots means 2^{k} candidates; cap is 2^{_MAX_UNKNOWN_SLOTS}"
        )
    count = 1 << k
    bits = (np.arange(count, dtype=np.int64)[:, None] >> np.arange(max(k, 1))) & 1
    L = np.zeros((n, n))
    for u, v in known_present:
        L[u, v] -= 1.0
        L[v, u] -= 1.0
        L[u, u] += 1.0
        L[v, v] += 1.0
    Ls = np.broadcast_to(L, (count, n, n)).copy()
    for j, (u, v) in enumerate(unknown):
        w = bits[:, j].astype(float)
        Ls[:, u, v] -= w
        Ls[:, v, u] -= w
        Ls[:, u, u] += w
        Ls[:, v, v] += w
    return unknown, np.linalg.eigvalsh(Ls)[:, 1]


def _consistent_masks(
    n: int, known_present, known_absent, lambda2_observed: float, tol: float
) -> tuple[list[tuple[int, int]], frozenset, np.ndarray, int]:
    if not 2 <= n <= _MAX_ENUMERATION_N:
        raise ValueError(f"enumeration supports 2 <= n <= {_MAX_ENUMERATION_N}")
    if not tol > 0.0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    kp = _normalize_known(n, known_present)
    ka = _normalize_known(n, known_absent)
    if kp & ka:
        raise ValueError(f"edges claimed both present and absent: {sorted(kp & ka)}")
    unknown, lam2 = _enumerate_completions(n, kp, ka)
    sel = np.flatnonzero(np.abs(lam2 - lambda2_observed) <= tol)
    return unknown, kp, sel, int(lam2.size)


def enumerate_consistent_graphs(
    n: int,
    known_present=(),
    known_absent=(),
    lambda2_observed: float = 0.0,
    tol: float = 1e-6,
) -> list[Graph]:
    """Every n-node graph matching the edge knowledge whose connectivity
    lies within tol of the observed value.

    The candidate list depends only on the knowledge sets, not on the
    order their edges were given in; tol = inf drops the value constraint
    and returns the whole knowledge-consistent family.
    """
    unknown, kp, sel, _ = _consistent_masks(n, known_present, known_absent, lambda2_observed, tol)
    out = []
    for mask in sel:
        extra = {unknown[j] for j in range(len(unknown)) if (int(mask) >> j) & 1}
        out.append(Graph(n=n, edges=frozenset(kp | extra)))
    return out


@dataclass(frozen=True)
class AttackResult:
    """What an adversary with partial knowledge learns from an exact value."""

    n: int
    value: float
    tol: float
    candidate_count: int
    inferred_present: tuple
    inferred_absent: tuple
    edge_frequencies: dict
    candidates: tuple

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "value": self.value,
            "tol": self.tol,
            "candidate_count": self.candidate_count,
            "inferred_present": [list(e) for e in self.inferred_present],
            "inferred_absent": [list(e) for e in self.inferred_absent],
            "edge_frequencies": {f"{u}-{v}": f for (u, v), f in self.edge_frequencies.items()},
            "candidate_edge_sets": [[list(e) for e in sorted(c)] for c in self.candidates],
        }


def exact_value_attack(
    n: int,
    value: float,
    known_present=(),
    known_absent=(),
    tol: float = 1e-6,
) -> AttackResult:
    """Enumerate every graph consistent with partial edge knowledge and an
    exactly published connectivity value, and summarize the disclosure.

    Any unknown edge slot present in every candidate (or in none) has
    been disclosed to the adversary outright; the remaining slots get a
    candidate frequency. An empty candidate set means the claimed value
    contradicts the claimed knowledge.
    """
    unknown, kp, sel, _ = _consistent_masks(n, known_present, known_absent, value, tol)
    candidates = []
    for mask in sel:
        extra = {unknown[j] for j in range(len(unknown)) if (int(mask) >> j) & 1}
        candidates.append(frozenset(kp | extra))
    freqs = {}
    for j, slot in enumerate(unknown):
        hits = sum(1 for mask in sel if (int(mask) >> j) & 1)
        freqs[slot] = hits / len(sel) if len(sel) else math.nan
    inferred_present = tuple(s for s in unknown if freqs.get(s) == 1.0)
    inferred_absent = tuple(s for s in unknown if freqs.get(s) == 0.0)
    return AttackResult(
        n=n,
        value=value,
        tol=tol,
        candidate_count=len(candidates),
        inferred_present=inferred_present,
        inferred_absent=inferred_absent if len(sel) else (),
        edge_frequencies=freqs,
        candidates=tuple(candidates),
    )


@dataclass(frozen=True)
class NoisyAttackResult:
    """The same enumeration run against a private release instead."""

    n: int
    release_value: float
    window_halfwidth: float
    plausible_count: int
    knowledge_consistent_count: int
    inferred_present: tuple
    inferred_absent: tuple

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "release_value": self.release_value,
            "window_halfwidth": self.window_halfwidth,
            "plausible_count": self.plausible_count,
            "knowledge_consistent_count": self.knowledge_consistent_count,
            "inferred_present": [list(e) for e in self.inferred_present],
            "inferred_absent": [list(e) for e in self.inferred_absent],
        }


def attack_under_noise(
    n: int,
    release_value: float,
    b: float,
    coverage: float = 0.9,
    known_present=(),
    known_absent=(),
) -> NoisyAttackResult:
    """Rerun the consistency attack against a noisy release.

    The adversary cannot rule out any graph whose exact value lies within
    the noise window w = b * log(1/(1 - coverage)) of the release (the
    untruncated Laplace puts at least `coverage` of its mass within w of
    its center; truncation only concentrates it further). Whatever edges
    are still common to every window graph remain disclosed; with a
    properly scaled mechanism that set is typically empty.
    """
    if not (0.0 < coverage < 1.0):
        raise ValueError(f"coverage must lie in (0, 1), got {coverage}")
    if b <= 0.0:
        raise ValueError(f"scale must be positive, got {b}")
    w = b * math.log(1.0 / (1.0 - coverage))
    unknown, _, sel, total = _consistent_masks(n, known_present, known_absent, release_value, w)
    inferred_present = []
    inferred_absent = []
    for j, slot in enumerate(unknown):
        hits = sum(1 for mask in sel if (int(mask) >> j) & 1)
        if len(sel) and hits == len(sel):
            inferred_present.append(slot)
        elif len(sel) and hits == 0:
            inferred_absent.append(slot)
    return NoisyAttackResult(
        n=n,
        release_value=release_value,
        window_halfwidth=w,
        plausible_count=int(sel.size),
        knowledge_consistent_count=total,
        inferred_present=tuple(inferred_present),
        inferred_absent=tuple(inferred_absent),
    )
