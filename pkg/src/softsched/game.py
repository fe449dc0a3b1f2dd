"""Link-vs-component matrix game: payoff build, fictitious play, exact oracle, schedules.

The scheduling problem is cast as a zero-sum game. Rows are links, columns
are components; the entry is 1/r_i when link i belongs to component j. A
mixed column strategy y is a recipe for how often to fire each component,
and (Hy)_i is the fraction of link i's demand served per slot, so the game
value v = max_y min_i (Hy)_i makes 1/v the minimal fractional schedule
length. Fictitious play approximates the equilibrium with certified
lower/upper bounds on v; a small exact solver provides an independent
cross-check, and the schedule extractor turns y into integer slot counts.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .components import Component
from .conflict import ConflictGraph
from .topology import RateVector

DEFAULT_ORACLE_LIMIT = 12

_FEAS_TOL = 1e-10   # slack when testing vertex candidates for feasibility
_DET_TOL = 1e-12    # singularity filter for candidate basis systems


class UnsupportedSizeError(ValueError):
    """Raised when the exact solver is asked for more columns than its limit."""


@dataclass(eq=False)
class PayoffMatrix:
    """I x J matrix with h[i, j] = 1/r_i if link i is in component j, else 0."""

    h: np.ndarray

    def __post_init__(self):
        self.h = np.asarray(self.h, dtype=float)
        if self.h.ndim != 2 or 0 in self.h.shape:
            raise ValueError(f"payoff matrix must be a nonempty 2-d array, got {self.h.shape}")
        if (self.h < 0).any():
            raise ValueError("payoff entries must be nonnegative")
        if not (self.h > 0).any(axis=1).all():
            raise ValueError("every link (row) needs at least one component containing it")
        if not (self.h > 0).any(axis=0).all():
            raise ValueError("every component (column) must contain at least one link")

    @property
    def n_links(self) -> int:
        return self.h.shape[0]

    @property
    def n_components(self) -> int:
        return self.h.shape[1]


@dataclass(frozen=True)
class SolverConfig:
    delta: float = 1e-3
    max_iterations: int = 1_000_000

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be at least 1, got {self.max_iterations}")


@dataclass
class FpState:
    """Fictitious-play bookkeeping.

    x_acc accumulates the columns picked by the component player (including
    the arbitrary initial pick), y_acc the rows picked by the link player.
    After k iterations row_counts sums to k and col_counts to k + 1.
    """

    x_acc: np.ndarray
    y_acc: np.ndarray
    row_counts: np.ndarray
    col_counts: np.ndarray
    k: int
    last_row: int
    last_col: int


@dataclass
class GameSolution:
    """Mixed strategies plus a certified bracket on the game value."""

    x: np.ndarray
    y: np.ndarray
    value_lower: float
    value_upper: float
    iterations: int
    converged: bool
    state: FpState | None = None
    bounds_log: list[tuple[float, float]] | None = None


def build_payoff(components: list[Component], r: RateVector) -> PayoffMatrix:
    """Assemble the payoff matrix for the given components and link rates."""
    if not components:
        raise ValueError("need at least one component")
    zero_rated = [i for i, rate in enumerate(r.rates) if rate == 0]
    if zero_rated:
        raise ValueError(f"links {zero_rated} have rate 0; payoff entries 1/r are undefined")
    n_links = len(r)
    h = np.zeros((n_links, len(components)))
    for j, comp in enumerate(components):
        for i in comp.members:
            if not 0 <= i < n_links:
                raise ValueError(f"component {j} references link {i} outside 0..{n_links - 1}")
            h[i, j] = 1.0 / r[i]
    uncovered = [i for i in range(n_links) if not h[i].any()]
    if uncovered:
        raise ValueError(f"links {uncovered} are not covered by any component")
    return PayoffMatrix(h)


def fp_solve(H: PayoffMatrix, cfg: SolverConfig | None = None,
             log_bounds: bool = False) -> GameSolution:
    """Solve the game by fictitious play.

    The component player opens with column 0. Each iteration the link player
    best-responds to the accumulated column payoffs (argmin, lowest index on
    ties) and the component player to the accumulated row payoffs (argmax,
    lowest index on ties). Each accumulator, divided by its own pick count,
    is a one-player payoff profile, so its worst entry bounds the game
    value: min(x_acc) / (k + 1) from below and max(y_acc) / k from above.
    The solve stops once the bound gap is within delta, which means the
    returned empirical strategies themselves certify the bracket:
    min(H @ y) equals value_lower and max(x @ H) equals value_upper.

    Hitting max_iterations is not an error: the solution comes back with
    converged=False and the bounds still valid.
    """
    cfg = cfg or SolverConfig()
    rows = [np.ascontiguousarray(row) for row in H.h]
    cols = [np.ascontiguousarray(col) for col in H.h.T]
    n_links, n_comps = H.h.shape

    x_acc = cols[0].copy()
    col_counts = np.zeros(n_comps, dtype=np.int64)
    col_counts[0] = 1
    y_acc = np.zeros(n_comps)
    row_counts = np.zeros(n_links, dtype=np.int64)
    log: list[tuple[float, float]] | None = [] if log_bounds else None

    k = 0
    converged = False
    i_next = x_acc.argmin()
    while k < cfg.max_iterations:
        k += 1
        i_k = i_next
        row_counts[i_k] += 1
        y_acc += rows[i_k]
        j_k = y_acc.argmax()
        upper = y_acc[j_k] / k
        col_counts[j_k] += 1
        x_acc += cols[j_k]
        i_next = x_acc.argmin()
        lower = x_acc[i_next] / (k + 1)
        if log is not None:
            log.append((float(lower), float(upper)))
        if upper - lower <= cfg.delta:
            converged = True
            break

    state = FpState(x_acc, y_acc, row_counts, col_counts, k, int(i_k), int(j_k))
    return GameSolution(
        x=row_counts / k,
        y=col_counts / (k + 1),
        value_lower=float(lower),
        value_upper=float(upper),
        iterations=k,
        converged=converged,
        state=state,
        bounds_log=log,
    )


def lp_oracle(H: PayoffMatrix, limit: int = DEFAULT_ORACLE_LIMIT) -> tuple[float, np.ndarray]:
    """Exact game value and optimal component strategy, independent of fictitious play.

    Solves max t s.t. Hy >= t*1, sum(y) = 1, y >= 0 by enumerating candidate
    vertices: every support K of y paired with an equal-sized set T of tight
    rows gives a square linear system; feasible solutions are polytope
    vertices and the optimum is their best value. Among optimal vertices the
    lexicographically smallest y is returned, making the result canonical.

    Exponential in the matrix size, hence the column limit.
    """
    if H.n_components > limit:
        raise UnsupportedSizeError(
            f"{H.n_components} components exceed the exact-solver limit of {limit}"
        )
    h = H.h
    n_links, n_comps = h.shape
    candidates: list[tuple[float, np.ndarray]] = []

    for s in range(1, min(n_links, n_comps) + 1):
        supports = np.array(list(itertools.combinations(range(n_comps), s)))
        rhs = np.zeros(s + 1)
        rhs[s] = 1.0
        for tight in itertools.combinations(range(n_links), s):
            # One system per support: rows `tight` of H restricted to the
            # support equal t, and the support sums to one.
            systems = np.zeros((len(supports), s + 1, s + 1))
            systems[:, :s, :s] = h[np.asarray(tight)][:, supports].transpose(1, 0, 2)
            systems[:, :s, s] = -1.0
            systems[:, s, :s] = 1.0
            solvable = np.abs(np.linalg.det(systems)) > _DET_TOL
            if not solvable.any():
                continue
            solutions = np.linalg.solve(systems[solvable], rhs)
            y_support = solutions[:, :s]
            t = solutions[:, s]
            left = h[:, supports[solvable]].transpose(1, 0, 2)  # (n_sys, I, s)
            row_values = np.einsum("nis,ns->ni", left, y_support)
            feasible = (y_support >= -_FEAS_TOL).all(axis=1) & (
                row_values >= t[:, None] - _FEAS_TOL
            ).all(axis=1)
            for support, y_s, value in zip(
                supports[solvable][feasible], y_support[feasible], t[feasible]
            ):
                y = np.zeros(n_comps)
                y[support] = y_s
                candidates.append((float(value), y))

    if not candidates:
        raise RuntimeError("no feasible vertex found; payoff matrix is malformed")
    best = max(value for value, _ in candidates)
    optimal = [y for value, y in candidates if value >= best - 1e-12]
    y = min(optimal, key=tuple)
    # scrub the feasibility slack so callers get a clean probability vector
    y = np.clip(y, 0.0, None)
    return best, y / y.sum()


def supported_rates(H: PayoffMatrix, y: np.ndarray) -> np.ndarray:
    """Per-link served fraction (Hy)_i: supported rate over required rate."""
    y = np.asarray(y, dtype=float)
    if y.shape != (H.n_components,):
        raise ValueError(f"strategy length {y.shape} does not match {H.n_components} components")
    return H.h @ y


def bottleneck(H: PayoffMatrix, y: np.ndarray) -> int:
    """Index of the link with the least supported rate under y, lowest on ties."""
    return int(np.argmin(supported_rates(H, y)))


@dataclass(frozen=True)
class Schedule:
    """Slot-by-slot component assignment with per-link service counts."""

    slots: tuple[int, ...]
    served: tuple[int, ...]
    components: tuple[Component, ...]

    @property
    def length(self) -> int:
        return len(self.slots)


@dataclass(frozen=True)
class ScheduleCheck:
    ok: bool
    violation: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def extract_schedule(components: list[Component], r: RateVector, y: np.ndarray,
                     value_lower: float, g: ConflictGraph) -> Schedule:
    """Round the mixed strategy y into a feasible integer slot schedule.

    The fractional optimum needs 1/value slots, so the target length is
    ceil(1/value_lower) (minus a hair of tolerance against roundoff).
    Largest-remainder apportionment splits that many slots across components
    in proportion to y; a repair loop then adds slots of whichever component
    covers the most still-underserved links until every link meets its rate,
    and a trim pass drops slots that turned out to be unnecessary, scanning
    components from the highest index down. Slots are listed grouped by
    ascending component index.
    """
    if not value_lower > 0:
        raise ValueError(f"value_lower must be positive, got {value_lower}")
    y = np.asarray(y, dtype=float)
    if y.shape != (len(components),):
        raise ValueError(f"strategy length {y.shape} does not match {len(components)} components")
    n_links = len(r)

    target = math.ceil(1.0 / value_lower - 1e-9)
    quotas = y * target
    counts = np.floor(quotas).astype(int)
    leftover = target - int(counts.sum())
    by_remainder = np.argsort(-(quotas - counts), kind="stable")  # ties: lower index
    for j in by_remainder[:leftover]:
        counts[j] += 1

    served = np.zeros(n_links, dtype=int)
    for j, comp in enumerate(components):
        if counts[j]:
            served[list(comp.members)] += counts[j]

    rates = np.asarray(r.rates)
    while (served < rates).any():
        under = served < rates
        coverage = [sum(under[i] for i in comp.members) for comp in components]
        j = int(np.argmax(coverage))
        if coverage[j] == 0:
            missing = int(np.flatnonzero(under)[0])
            raise ValueError(f"no component covers underserved link {missing}")
        counts[j] += 1
        served[list(components[j].members)] += 1

    for j in range(len(components) - 1, -1, -1):
        members = list(components[j].members)
        while counts[j] and (served[members] - 1 >= rates[members]).all():
            counts[j] -= 1
            served[members] -= 1

    slots = tuple(j for j in range(len(components)) for _ in range(counts[j]))
    return Schedule(slots, tuple(int(v) for v in served), tuple(components))


def verify_schedule(s: Schedule, g: ConflictGraph, r: RateVector) -> ScheduleCheck:
    """Independent feasibility check: slots conflict-free and demands met."""
    served = np.zeros(len(r), dtype=int)
    for slot_idx, comp_idx in enumerate(s.slots):
        members = s.components[comp_idx].members
        for a_pos, a in enumerate(members):
            for b in members[a_pos + 1:]:
                if g.adjacency[a, b]:
                    return ScheduleCheck(
                        False, f"slot {slot_idx} activates conflicting links {a} and {b}"
                    )
        served[list(members)] += 1
    for i in range(len(r)):
        if served[i] < r[i]:
            return ScheduleCheck(
                False, f"link {i} served {int(served[i])} times but requires {r[i]}"
            )
    return ScheduleCheck(True)
