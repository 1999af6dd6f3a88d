"""JIT-compiled inner loop of the local search.

One chunk call advances the search by up to ``n_steps`` moves, mutating the
state arrays in place so the Python driver can interleave wall-clock checks
and trace sampling between chunks without perturbing the trajectory. All
randomness comes from numba's own MT19937 stream, seeded once per run via
:func:`seed_kernel_rng`, which keeps runs bit-reproducible for a fixed seed
regardless of chunk boundaries.

Acceptor kinds: 0=tabu, 1=simulated annealing, 2=late acceptance,
3=strategic oscillation (must match ``acceptors.TABU`` etc.).
"""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def seed_kernel_rng(seed):
    np.random.seed(seed)


@njit(cache=True, inline="always")
def _lex_less(a, b, perm):
    for k in range(4):
        x = a[perm[k]]
        y = b[perm[k]]
        if x < y:
            return True
        if x > y:
            return False
    return False


@njit(cache=True, inline="always")
def _lex_leq(a, b, perm):
    return not _lex_less(b, a, perm)


@njit(cache=True)
def run_chunk(n_steps, p_change, cand_k,
              ap_of, load, count,
              blk, demands, caps, rank,
              acceptor_kind, perm, wcomp,
              cur, best, best_ap,
              sa_start_temp, sa_decay, sa_virtual_rate, sa_use_virtual,
              sa_wall_elapsed,
              la_ring, la_state_i, la_state_f,
              tabu_until, tabu_tenure,
              so_factors, so_period,
              steps_done, target, use_target):
    """Advance the search by up to ``n_steps``; returns steps executed.

    ``la_state_i`` = [ring position]; ``la_state_f`` = [current scalar].
    ``tabu_until[ue]`` is the step index until which the UE stays tabu.
    ``cur``/``best`` are int64[4] score vectors (unassigned, blockers,
    overload, aps_used).
    """
    n_ue = ap_of.shape[0]
    n_ap = load.shape[0]
    list_len = la_ring.shape[0]
    executed = 0

    for _ in range(n_steps):
        executed += 1
        steps_done[0] += 1

        # ---- sample a move -------------------------------------------------
        kind = 0  # 0 = change, 1 = swap, -1 = no-op
        ue = 0
        new_ap = 0
        ue_b = 0
        if np.random.random() < p_change:
            ue = np.random.randint(0, n_ue)
            k_lim = cand_k if cand_k < n_ap else n_ap
            idx = np.random.randint(0, k_lim)
            new_ap = rank[ue, idx]
            if new_ap == ap_of[ue]:
                idx = (idx + 1) % k_lim
                new_ap = rank[ue, idx]
            if new_ap == ap_of[ue]:
                kind = -1
        else:
            kind = 1
            ue = np.random.randint(0, n_ue)
            ue_b = np.random.randint(0, n_ue)
            if ue == ue_b or ap_of[ue] < 0 or ap_of[ue_b] < 0 \
                    or ap_of[ue] == ap_of[ue_b]:
                kind = -1

        d0 = np.int64(0)
        d1 = np.int64(0)
        d2 = np.int64(0)
        d3 = np.int64(0)
        if kind == 0:
            old = ap_of[ue]
            dem = demands[ue]
            d1 = blk[ue, new_ap]
            ov_new = load[new_ap] + dem - caps[new_ap]
            ov_new_before = load[new_ap] - caps[new_ap]
            d2 = (ov_new if ov_new > 0 else 0) - (ov_new_before if ov_new_before > 0 else 0)
            d3 = np.int64(1) if count[new_ap] == 0 else np.int64(0)
            if old >= 0:
                d1 -= blk[ue, old]
                ov_old_after = load[old] - dem - caps[old]
                ov_old_before = load[old] - caps[old]
                d2 += (ov_old_after if ov_old_after > 0 else 0) \
                    - (ov_old_before if ov_old_before > 0 else 0)
                if count[old] == 1:
                    d3 -= 1
            else:
                d0 = np.int64(-1)
        elif kind == 1:
            ap_a = ap_of[ue]
            ap_b = ap_of[ue_b]
            dem_a = demands[ue]
            dem_b = demands[ue_b]
            d1 = blk[ue, ap_b] + blk[ue_b, ap_a] - blk[ue, ap_a] - blk[ue_b, ap_b]
            ov_a_after = load[ap_a] + dem_b - dem_a - caps[ap_a]
            ov_a_before = load[ap_a] - caps[ap_a]
            ov_b_after = load[ap_b] + dem_a - dem_b - caps[ap_b]
            ov_b_before = load[ap_b] - caps[ap_b]
            d2 = ((ov_a_after if ov_a_after > 0 else 0)
                  - (ov_a_before if ov_a_before > 0 else 0)
                  + (ov_b_after if ov_b_after > 0 else 0)
                  - (ov_b_before if ov_b_before > 0 else 0))

        # ---- decide --------------------------------------------------------
        accept = False
        scalar_delta = (wcomp[0] * d0 + wcomp[1] * d1
                        + wcomp[2] * d2 + wcomp[3] * d3)
        if kind >= 0:
            if acceptor_kind == 0:  # tabu
                tabu = tabu_until[ue] >= steps_done[0] \
                    or (kind == 1 and tabu_until[ue_b] >= steps_done[0])
                if not tabu:
                    accept = True
                else:
                    cand0 = cur[0] + d0
                    cand1 = cur[1] + d1
                    cand2 = cur[2] + d2
                    cand3 = cur[3] + d3
                    cand = np.empty(4, dtype=np.int64)
                    cand[0] = cand0
                    cand[1] = cand1
                    cand[2] = cand2
                    cand[3] = cand3
                    accept = _lex_less(cand, best, perm)
            elif acceptor_kind == 1:  # simulated annealing
                if scalar_delta <= 0.0:
                    accept = True
                else:
                    if sa_use_virtual:
                        elapsed = steps_done[0] / sa_virtual_rate
                    else:
                        elapsed = sa_wall_elapsed
                    temp = sa_start_temp * sa_decay ** elapsed
                    if temp > 0.0:
                        accept = np.random.random() < math.exp(-scalar_delta / temp)
            elif acceptor_kind == 2:  # late acceptance
                cand_scalar = la_state_f[0] + scalar_delta
                accept = (cand_scalar <= la_state_f[0]
                          or cand_scalar <= la_ring[la_state_i[0]])
            else:  # strategic oscillation
                factor = so_factors[((steps_done[0] - 1) // so_period) % so_factors.shape[0]]
                wd = (wcomp[0] * d0 + wcomp[1] * d1
                      + wcomp[2] * factor * d2 + wcomp[3] * d3)
                accept = wd <= 0.0

        # ---- apply ---------------------------------------------------------
        if accept:
            if kind == 0:
                old = ap_of[ue]
                dem = demands[ue]
                if old >= 0:
                    load[old] -= dem
                    count[old] -= 1
                load[new_ap] += dem
                count[new_ap] += 1
                ap_of[ue] = new_ap
            else:
                ap_a = ap_of[ue]
                ap_b = ap_of[ue_b]
                dem_a = demands[ue]
                dem_b = demands[ue_b]
                load[ap_a] += dem_b - dem_a
                load[ap_b] += dem_a - dem_b
                ap_of[ue] = ap_b
                ap_of[ue_b] = ap_a
            cur[0] += d0
            cur[1] += d1
            cur[2] += d2
            cur[3] += d3
            la_state_f[0] += scalar_delta
            if acceptor_kind == 0:
                tabu_until[ue] = steps_done[0] + tabu_tenure
                if kind == 1:
                    tabu_until[ue_b] = steps_done[0] + tabu_tenure
            if _lex_less(cur, best, perm):
                best[0] = cur[0]
                best[1] = cur[1]
                best[2] = cur[2]
                best[3] = cur[3]
                for i in range(n_ue):
                    best_ap[i] = ap_of[i]
                if use_target and _lex_leq(best, target, perm):
                    la_ring[la_state_i[0]] = la_state_f[0]
                    la_state_i[0] = (la_state_i[0] + 1) % list_len
                    return executed

        # late-acceptance buffer records the post-decision score every step
        la_ring[la_state_i[0]] = la_state_f[0]
        la_state_i[0] = (la_state_i[0] + 1) % list_len

    return executed
