"""Brute-force certification of optimized capacities by ensemble exhaustion.

The search space is the product of a pure-state grid (an a-grid paired with a
coherence sign, or a complex phase grid when ``restrict_real_b`` is off) and a
probability simplex discretized in steps of 1/prob_grid, for every ensemble
size up to ``n_states``. Per-state channel outputs and output entropies are
precomputed once, so each candidate ensemble costs a handful of vectorized
flops.

When the full product enumeration fits the evaluation budget it runs in a
single exhaustive pass. Otherwise the pass runs coarse-to-fine: an exhaustive
sweep over a strided a-subgrid, then exhaustive sweeps over neighborhoods of
the incumbent ensemble while the stride halves down to 1. Every candidate is
a genuine ensemble, so in either mode the returned value is a lower bound on
the true capacity; the refinement rounds contain the incumbent, so the value
never decreases across rounds. Iteration order is deterministic and ties keep
the first ensemble encountered.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np

from .channels import Channel, MixedChannelPair, apply_channel
from .errors import BudgetExceededError, DomainError
from .states import Ensemble, QubitState, binary_entropy, von_neumann_entropy

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10 ** 8

# Elements per vectorized block (combination rows x probability columns).
_CHUNK_ELEMENTS = 1_000_000

# Refinement rounds probe +-2 steps of the halved stride around every
# incumbent state, which spans the previous round's full cell.
_REFINE_SPAN = 2


@dataclass(frozen=True)
class OracleConfig:
    """Search-space discretization; n_states is the Caratheodory cap."""

    n_states: int = 2
    a_grid: int = 51
    phase_grid: int = 2
    prob_grid: int = 10
    restrict_real_b: bool = True

    def __post_init__(self):
        object.__setattr__(self, "n_states", int(self.n_states))
        if not 1 <= self.n_states <= 4:
            raise DomainError(f"n_states must lie in [1, 4], got {self.n_states}")
        for name in ("a_grid", "phase_grid", "prob_grid"):
            value = int(getattr(self, name))
            object.__setattr__(self, name, value)
            if value < 2:
                raise DomainError(f"{name} must be >= 2, got {value}")


def _grid_states(config: OracleConfig):
    """Pure grid states as parallel arrays (a, b, index into the a-grid)."""
    avals = np.linspace(0.0, 1.0, config.a_grid)
    if config.restrict_real_b:
        phases = (1.0 + 0j, -1.0 + 0j)
    else:
        phases = tuple(
            np.exp(2j * np.pi * k / config.phase_grid) for k in range(config.phase_grid)
        )
    a_out, b_out, idx_out = [], [], []
    for i, a in enumerate(avals):
        mag = math.sqrt(max(a * (1.0 - a), 0.0))
        for phase in phases if mag > 0.0 else phases[:1]:
            a_out.append(a)
            b_out.append(mag * phase)
            idx_out.append(i)
    return (
        np.array(a_out),
        np.array(b_out, dtype=complex),
        np.array(idx_out, dtype=np.int64),
    )


def _channel_table(channel: Channel, a, b):
    """Per-state output population, coherence, and output entropy."""
    n = a.shape[0]
    u = np.empty(n)
    v = np.empty(n, dtype=complex)
    s = np.empty(n)
    for j in range(n):
        out = apply_channel(channel, QubitState(a[j], b[j]))
        u[j] = out.a
        v[j] = out.b
        s[j] = von_neumann_entropy(out.to_herm2())
    return u, v, s


def _compositions(total: int, parts: int) -> np.ndarray:
    """Ordered positive integer compositions of ``total`` into ``parts`` parts."""
    if parts == 1:
        return np.array([[total]], dtype=np.int64)
    rows = []
    for cuts in itertools.combinations(range(1, total), parts - 1):
        prev = 0
        row = []
        for cut in cuts:
            row.append(cut - prev)
            prev = cut
        row.append(total - prev)
        rows.append(row)
    return np.array(rows, dtype=np.int64)


def _search_pass(tables, state_ids, n, probs, comps, best):
    """Exhaustive max over distinct sorted n-subsets of state_ids x compositions.

    ``tables`` holds one (u, v, s) triple per scored channel; an ensemble's
    score is the minimum chi across channels. ``best`` is the running
    (value, state id tuple, composition tuple) and ties keep the incumbent.
    """
    ids = np.asarray(state_ids, dtype=np.int64)
    m = ids.shape[0]
    if m < n:
        return best
    p_count = probs.shape[0]
    chunk = max(1, _CHUNK_ELEMENTS // p_count)
    combo_iter = itertools.combinations(range(m), n)
    while True:
        block = list(itertools.islice(combo_iter, chunk))
        if not block:
            break
        members = ids[np.array(block, dtype=np.int64)]  # (C, n)
        score = None
        for u, v, s, has_imag in tables:
            mean_u = u[members] @ probs.T  # (C, P)
            mean_re = v.real[members] @ probs.T
            radicand = (2.0 * mean_u - 1.0) ** 2 + 4.0 * mean_re ** 2
            if has_imag:
                mean_im = v.imag[members] @ probs.T
                radicand += 4.0 * mean_im ** 2
            r = np.sqrt(radicand)
            np.minimum(r, 1.0, out=r)
            chi = binary_entropy(0.5 * (1.0 - r)) - s[members] @ probs.T
            score = chi if score is None else np.minimum(score, chi)
        flat = int(np.argmax(score))
        value = float(score.flat[flat])
        if value > best[0]:
            row, col = divmod(flat, p_count)
            best = (
                value,
                tuple(int(x) for x in members[row]),
                tuple(int(k) for k in comps[col]),
            )
    return best


def _subgrid_indices(a_grid: int, stride: int):
    idx = list(range(0, a_grid, stride))
    if idx[-1] != a_grid - 1:
        idx.append(a_grid - 1)
    return idx


def _total_states(config: OracleConfig) -> int:
    # The endpoints a = 0 and a = 1 carry a single state each.
    if config.restrict_real_b:
        return 2 * config.a_grid - 2
    return config.phase_grid * (config.a_grid - 2) + 2


def _states_for_points(config: OracleConfig, points: int) -> int:
    """Upper bound on grid states covering ``points`` a-grid points."""
    per_point = 2 if config.restrict_real_b else config.phase_grid
    return min(per_point * points, _total_states(config))


def _stride_schedule(config: OracleConfig, n: int, p_count: int, slice_budget: float):
    """Smallest starting stride whose full subgrid pass fits the budget slice,
    then halving strides down to 1. Empty schedule means a single full pass fits."""
    if math.comb(_total_states(config), n) * p_count <= slice_budget:
        return []
    stride = 1
    while stride < config.a_grid:
        stride += 1
        points = len(_subgrid_indices(config.a_grid, stride))
        if math.comb(_states_for_points(config, points), n) * p_count <= slice_budget:
            break
    schedule = [stride]
    while schedule[-1] > 1:
        schedule.append((schedule[-1] + 1) // 2)
    return schedule


def _plan(config: OracleConfig, budget: float):
    """Per-size pass plans and the total planned evaluation count (upper bound)."""
    slice_budget = budget / 8.0
    plans = []
    total = 0.0
    for n in range(1, config.n_states + 1):
        p_count = math.comb(config.prob_grid - 1, n - 1)
        schedule = _stride_schedule(config, n, p_count, slice_budget)
        if not schedule:
            cost = math.comb(_total_states(config), n) * p_count
        else:
            first_points = len(_subgrid_indices(config.a_grid, schedule[0]))
            refine_states = _states_for_points(config, (2 * _REFINE_SPAN + 1) * n)
            cost = math.comb(_states_for_points(config, first_points), n) * p_count
            cost += (len(schedule) - 1) * math.comb(refine_states, n) * p_count
        plans.append((n, schedule))
        total += cost
    return plans, total


def plan_search_size(config: OracleConfig, budget: float = DEFAULT_BUDGET) -> int:
    """Planned evaluation count for the given configuration (per channel set)."""
    _, total = _plan(config, budget)
    return int(total)


def _search(channels, config: OracleConfig, budget: float):
    a, b, a_index = _grid_states(config)
    tables = []
    for channel in channels:
        u, v, s = _channel_table(channel, a, b)
        tables.append((u, v, s, bool(np.any(v.imag != 0.0))))

    plans, total = _plan(config, budget)
    if total > budget:
        raise BudgetExceededError(
            f"planned {total:.3g} evaluations exceed the budget {budget:.3g}"
        )
    log.info(
        "oracle search: %d grid states, %d planned evaluations", a.shape[0], int(total)
    )

    all_ids = np.arange(a.shape[0], dtype=np.int64)
    best = (-math.inf, None, None)
    for n, schedule in plans:
        comps = _compositions(config.prob_grid, n)
        probs = comps.astype(float) / config.prob_grid
        if not schedule:
            best = _search_pass(tables, all_ids, n, probs, comps, best)
            continue
        incumbent = (-math.inf, None, None)
        for round_no, stride in enumerate(schedule):
            if round_no == 0:
                keep = set(_subgrid_indices(config.a_grid, stride))
            else:
                keep = set()
                for sid in incumbent[1]:
                    center = int(a_index[sid])
                    for k in range(-_REFINE_SPAN, _REFINE_SPAN + 1):
                        candidate = center + k * stride
                        if 0 <= candidate < config.a_grid:
                            keep.add(candidate)
            ids = all_ids[np.isin(a_index, sorted(keep))]
            incumbent = _search_pass(tables, ids, n, probs, comps, incumbent)
            if incumbent[1] is None:
                break
        if incumbent[0] > best[0]:
            best = incumbent

    value, state_ids, comp = best
    if state_ids is None:
        raise DomainError("search space is empty for the given configuration")
    entries = tuple(
        (k / config.prob_grid, QubitState(a[sid], b[sid]))
        for sid, k in zip(state_ids, comp)
    )
    return value, Ensemble(entries)


def oracle_capacity(channel: Channel, config: OracleConfig, budget: float = DEFAULT_BUDGET):
    """Maximal Holevo chi over all grid ensembles, with the argmax ensemble.

    Always a lower bound on the channel capacity; on nested grids a finer full
    enumeration never returns less than a coarser one.
    """
    return _search([channel], config, budget)


def oracle_minimax(pair: MixedChannelPair, config: OracleConfig, budget: float = DEFAULT_BUDGET):
    """Exhaustive sup-min of the two branch Holevo quantities over grid ensembles."""
    if pair.weight1 == 1.0:
        return _search([pair.ch1], config, budget)
    if pair.weight1 == 0.0:
        return _search([pair.ch2], config, budget)
    return _search([pair.ch1, pair.ch2], config, budget)
