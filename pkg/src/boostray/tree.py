"""Regression trees built by exact greedy split search on gradients/hessians.

The builder grows one tree level at a time.  A single compiled pass per
level walks every feature column in pre-sorted order and keeps running
gradient/hessian sums per active node, so the cost of a level is
O(n_rows x n_features) regardless of how many nodes it holds.  Candidate
thresholds are midpoints between consecutive distinct values within a
node; a row whose value equals a threshold routes right.  Ties in gain
break toward the lowest feature index, then the lowest threshold, which
makes the result independent of how many worker threads scan features.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

# The portable scheduler keeps split search reproducible under any thread
# count and avoids probing optional TBB/OpenMP layers at import.
os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")

from numba import njit, prange

from .errors import DomainError, ShapeError

LEAF = -1


def leaf_weight(G: float, H: float, lambda_: float) -> float:
    """Closed-form weight minimizing G*w + 0.5*(H + lambda)*w^2."""
    denom = H + lambda_
    if denom <= 0.0:
        raise DomainError(f"H + lambda must be positive, got {denom}")
    return -G / denom


def split_gain(
    GL: float, HL: float, GR: float, HR: float, lambda_: float, gamma: float
) -> float:
    """Objective reduction from splitting a node into (L, R), minus gamma."""
    if HL + lambda_ <= 0.0 or HR + lambda_ <= 0.0 or HL + HR + lambda_ <= 0.0:
        raise DomainError("every hessian sum plus lambda must be positive")
    G = GL + GR
    H = HL + HR
    return 0.5 * (
        GL * GL / (HL + lambda_) + GR * GR / (HR + lambda_) - G * G / (H + lambda_)
    ) - gamma


@dataclass(frozen=True)
class RegressionTree:
    """Flat-array binary tree: node 0 is the root, LEAF marks leaves.

    ``weight`` is meaningful for leaves, ``gain`` for internal nodes; the
    arrays are kept rectangular so trees serialize as a plain node list.
    """

    feature: np.ndarray    # int32, LEAF for leaves
    threshold: np.ndarray  # float64
    left: np.ndarray       # int32, LEAF for leaves
    right: np.ndarray      # int32, LEAF for leaves
    weight: np.ndarray     # float64
    gain: np.ndarray       # float64

    def __post_init__(self):
        for arr in (self.feature, self.threshold, self.left, self.right,
                    self.weight, self.gain):
            arr.flags.writeable = False

    @property
    def n_nodes(self) -> int:
        return self.feature.shape[0]

    @property
    def n_leaves(self) -> int:
        return int(np.sum(self.feature == LEAF))

    def leaf_for_rows(self, X: np.ndarray) -> np.ndarray:
        """Leaf index reached by each row (value < threshold goes left)."""
        n = X.shape[0]
        idx = np.zeros(n, dtype=np.int32)
        active = np.flatnonzero(self.feature[idx] != LEAF)
        while active.size:
            node = idx[active]
            go_left = X[active, self.feature[node]] < self.threshold[node]
            idx[active] = np.where(go_left, self.left[node], self.right[node])
            active = active[self.feature[idx[active]] != LEAF]
        return idx

    def predict(self, X: np.ndarray) -> np.ndarray:
        """Leaf weight reached by each row (unscaled score)."""
        return self.weight[self.leaf_for_rows(X)]

    def depth(self) -> int:
        depths = np.zeros(self.n_nodes, dtype=np.int64)
        deepest = 0
        for i in range(self.n_nodes):
            if self.feature[i] != LEAF:
                depths[self.left[i]] = depths[i] + 1
                depths[self.right[i]] = depths[i] + 1
            else:
                deepest = max(deepest, int(depths[i]))
        return deepest

    def validate(self, n_features: int, max_depth: int | None = None) -> None:
        """Structural check: proper binary tree, all nodes reachable, depth bound."""
        n = self.n_nodes
        if n < 1:
            raise ShapeError("tree has no nodes")
        seen = np.zeros(n, dtype=bool)
        stack = [(0, 0)]
        deepest = 0
        while stack:
            node, d = stack.pop()
            if node < 0 or node >= n:
                raise ShapeError(f"child index {node} out of range")
            if seen[node]:
                raise ShapeError(f"node {node} reached twice; not a tree")
            seen[node] = True
            deepest = max(deepest, d)
            f = int(self.feature[node])
            if f == LEAF:
                continue
            if f < 0 or f >= n_features:
                raise ShapeError(f"split feature {f} out of range [0, {n_features})")
            stack.append((int(self.left[node]), d + 1))
            stack.append((int(self.right[node]), d + 1))
        if not seen.all():
            raise ShapeError("tree contains unreachable nodes")
        if max_depth is not None and deepest > max_depth:
            raise ShapeError(f"tree depth {deepest} exceeds max_depth {max_depth}")


def presort_columns(X: np.ndarray) -> np.ndarray:
    """Per-feature row orderings for the exact-greedy scan.

    Returns a (n_features, n_rows) int32 array; row f lists the row ids in
    ascending order of feature f (stable, so equal values keep row order).
    """
    order = np.argsort(X, axis=0, kind="stable")
    return np.ascontiguousarray(order.T.astype(np.int32))


def _dd_sum(values: np.ndarray) -> tuple[float, float]:
    """TwoSum-cascade sum of a vector, as a double-double (hi, lo) pair."""
    hi = 0.0
    lo = 0.0
    for x in values:
        x = float(x)
        s = hi + x
        bv = s - hi
        lo += (hi - (s - bv)) + (x - bv)
        hi = s
    return hi, lo


def _dd_sub(a: tuple[float, float], b: tuple[float, float]) -> tuple[float, float]:
    """Double-double difference a - b, renormalized."""
    s = a[0] - b[0]
    bb = s - a[0]
    err = (a[0] - (s - bb)) - (b[0] + bb)
    lo = err + (a[1] - b[1])
    hi = s + lo
    lo = lo - (hi - s)
    return hi, lo


@njit(cache=True, inline="always", error_model="numpy")
def _dd_diff(a_hi, a_lo, b_hi, b_lo):
    """Double-double difference, collapsed to one float."""
    s = a_hi - b_hi
    bb = s - a_hi
    err = (a_hi - (s - bb)) - (b_hi + bb)
    return s + (err + (a_lo - b_lo))


@njit(cache=True, parallel=True, error_model="numpy")
def _scan_level(Xt, sorted_cols, g, h, node_of_row,
                tot_g_hi, tot_g_lo, tot_h_hi, tot_h_lo, lam, gamma,
                out_gain, out_thr, out_gl_hi, out_gl_lo, out_hl_hi, out_hl_lo):
    """One exact-greedy pass over every feature for all nodes of a level.

    Each feature is scanned independently (safe to parallelize: thread f
    only writes out_*[f]); within a feature, rows arrive in ascending
    value order and per-node running sums produce every candidate split.

    All row sums are carried in double-double precision (TwoSum cascade).
    That makes candidate gains a function of the row SET rather than the
    accumulation order, so structurally tied candidates (two features
    inducing the same or mirrored partitions) compute bit-identical gains
    and ties genuinely break on the lowest feature index.
    """
    d, n = Xt.shape
    n_nodes = tot_g_hi.shape[0]
    for f in prange(d):
        run_g_hi = np.zeros(n_nodes)
        run_g_lo = np.zeros(n_nodes)
        run_h_hi = np.zeros(n_nodes)
        run_h_lo = np.zeros(n_nodes)
        prev_val = np.full(n_nodes, np.nan)
        best_gain = np.full(n_nodes, -np.inf)
        best_thr = np.zeros(n_nodes)
        best_gl_hi = np.zeros(n_nodes)
        best_gl_lo = np.zeros(n_nodes)
        best_hl_hi = np.zeros(n_nodes)
        best_hl_lo = np.zeros(n_nodes)
        for i in range(n):
            r = sorted_cols[f, i]
            nd = node_of_row[r]
            if nd < 0:
                continue
            v = Xt[f, r]
            pv = prev_val[nd]
            if v > pv:  # false on the node's first row (pv is nan)
                t = 0.5 * (pv + v)
                # Guard against the midpoint rounding onto an endpoint:
                # accept only if the predicate (value < t) reproduces the
                # scanned partition exactly.
                if pv < t and t <= v:
                    GL = run_g_hi[nd] + run_g_lo[nd]
                    HL = run_h_hi[nd] + run_h_lo[nd]
                    GR = _dd_diff(tot_g_hi[nd], tot_g_lo[nd],
                                  run_g_hi[nd], run_g_lo[nd])
                    HR = _dd_diff(tot_h_hi[nd], tot_h_lo[nd],
                                  run_h_hi[nd], run_h_lo[nd])
                    parent_g = tot_g_hi[nd] + tot_g_lo[nd]
                    parent_h = tot_h_hi[nd] + tot_h_lo[nd]
                    gain = 0.5 * (
                        GL * GL / (HL + lam)
                        + GR * GR / (HR + lam)
                        - parent_g * parent_g / (parent_h + lam)
                    ) - gamma
                    if gain > best_gain[nd]:
                        best_gain[nd] = gain
                        best_thr[nd] = t
                        best_gl_hi[nd] = run_g_hi[nd]
                        best_gl_lo[nd] = run_g_lo[nd]
                        best_hl_hi[nd] = run_h_hi[nd]
                        best_hl_lo[nd] = run_h_lo[nd]
            # TwoSum: hi + x exactly = s + err
            a = run_g_hi[nd]
            x = g[r]
            s = a + x
            bv = s - a
            run_g_hi[nd] = s
            run_g_lo[nd] += (a - (s - bv)) + (x - bv)
            a = run_h_hi[nd]
            x = h[r]
            s = a + x
            bv = s - a
            run_h_hi[nd] = s
            run_h_lo[nd] += (a - (s - bv)) + (x - bv)
            prev_val[nd] = v
        out_gain[f, :] = best_gain
        out_thr[f, :] = best_thr
        out_gl_hi[f, :] = best_gl_hi
        out_gl_lo[f, :] = best_gl_lo
        out_hl_hi[f, :] = best_hl_hi
        out_hl_lo[f, :] = best_hl_lo


class TreeGrower:
    """Reusable exact-greedy builder bound to one feature matrix.

    Holds the transposed matrix and pre-sorted column orders so that
    training can grow many trees without re-sorting.
    """

    def __init__(self, X: np.ndarray, sorted_cols: np.ndarray | None = None):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2:
            raise ShapeError(f"feature matrix must be 2-D, got {X.ndim}-D")
        self.X = np.ascontiguousarray(X)
        self.Xt = np.ascontiguousarray(X.T)
        if sorted_cols is None:
            sorted_cols = presort_columns(X)
        self.sorted_cols = np.ascontiguousarray(sorted_cols, dtype=np.int32)
        if self.sorted_cols.shape != (X.shape[1], X.shape[0]):
            raise ShapeError(
                f"sorted_cols shape {self.sorted_cols.shape} does not match "
                f"(n_features={X.shape[1]}, n_rows={X.shape[0]})"
            )

    def grow(self, row_set: np.ndarray, g: np.ndarray, h: np.ndarray, params):
        """Build one tree; returns (tree, per-row unscaled leaf score).

        Rows outside ``row_set`` get score 0 and never influence splits.
        """
        n, d = self.X.shape
        g = np.asarray(g, dtype=np.float64)
        h = np.asarray(h, dtype=np.float64)
        if g.shape != (n,) or h.shape != (n,):
            raise ShapeError("g and h must be 1-D with one entry per row")
        row_set = np.asarray(row_set, dtype=np.int64)
        if row_set.size == 0:
            raise ShapeError("row_set must not be empty")

        lam = params.lambda_
        gamma = params.gamma
        min_gain = params.min_gain_eps
        mcw = params.min_child_weight

        # node bookkeeping: parallel lists indexed by tree-node id
        feature = [LEAF]
        threshold = [0.0]
        left = [LEAF]
        right = [LEAF]
        weight = [0.0]
        gain = [0.0]

        node_of_row = np.full(n, -1, dtype=np.int32)
        node_of_row[row_set] = 0
        row_score = np.zeros(n, dtype=np.float64)

        # active slots at the current level -> tree-node ids and G/H totals
        # (totals carried as double-double pairs, matching the scan kernel)
        slot_nodes = [0]
        tot_g = [_dd_sum(g[row_set])]
        tot_h = [_dd_sum(h[row_set])]

        for depth in range(params.max_depth):
            n_slots = len(slot_nodes)
            tg_hi = np.array([t[0] for t in tot_g])
            tg_lo = np.array([t[1] for t in tot_g])
            th_hi = np.array([t[0] for t in tot_h])
            th_lo = np.array([t[1] for t in tot_h])
            scan_gain = np.empty((d, n_slots))
            scan_thr = np.empty((d, n_slots))
            scan_gl_hi = np.empty((d, n_slots))
            scan_gl_lo = np.empty((d, n_slots))
            scan_hl_hi = np.empty((d, n_slots))
            scan_hl_lo = np.empty((d, n_slots))
            _scan_level(self.Xt, self.sorted_cols, g, h, node_of_row,
                        tg_hi, tg_lo, th_hi, th_lo, lam, gamma,
                        scan_gain, scan_thr, scan_gl_hi, scan_gl_lo,
                        scan_hl_hi, scan_hl_lo)

            # lowest feature index wins ties: argmax returns the first max
            best_f = np.argmax(scan_gain, axis=0)
            slots = np.arange(n_slots)
            best_gain = scan_gain[best_f, slots]
            best_thr = scan_thr[best_f, slots]

            next_nodes: list[int] = []
            next_tot_g: list[tuple[float, float]] = []
            next_tot_h: list[tuple[float, float]] = []
            # remap[s] = slot of the left child on the next level, -1 if s
            # finalizes as a leaf; the right child sits at remap[s] + 1
            remap = np.full(n_slots, -1, dtype=np.int32)
            split_feat = np.zeros(n_slots, dtype=np.int64)
            split_thr = np.zeros(n_slots, dtype=np.float64)

            for s in range(n_slots):
                node = slot_nodes[s]
                fbest = int(best_f[s])
                gl = (float(scan_gl_hi[fbest, s]), float(scan_gl_lo[fbest, s]))
                hl = (float(scan_hl_hi[fbest, s]), float(scan_hl_lo[fbest, s]))
                hl_sum = hl[0] + hl[1]
                hr = _dd_sub(tot_h[s], hl)
                hr_sum = hr[0] + hr[1]
                executable = (
                    np.isfinite(best_gain[s])
                    and best_gain[s] > min_gain
                    and hl_sum >= mcw
                    and hr_sum >= mcw
                )
                if not executable:
                    weight[node] = leaf_weight(
                        tot_g[s][0] + tot_g[s][1], tot_h[s][0] + tot_h[s][1], lam
                    )
                    continue
                feature[node] = fbest
                threshold[node] = float(best_thr[s])
                gain[node] = float(best_gain[s])
                left[node] = len(feature)
                right[node] = len(feature) + 1
                for _ in range(2):
                    feature.append(LEAF)
                    threshold.append(0.0)
                    left.append(LEAF)
                    right.append(LEAF)
                    weight.append(0.0)
                    gain.append(0.0)
                remap[s] = len(next_nodes)
                split_feat[s] = fbest
                split_thr[s] = best_thr[s]
                next_nodes.extend((left[node], right[node]))
                next_tot_g.extend((gl, _dd_sub(tot_g[s], gl)))
                next_tot_h.extend((hl, hr))

            # route rows: executed nodes send rows to a child slot, finished
            # leaves record their weight and drop out of the active set
            active_rows = np.flatnonzero(node_of_row >= 0)
            slots_of_rows = node_of_row[active_rows]
            for s in range(n_slots):
                rows = active_rows[slots_of_rows == s]
                if remap[s] < 0:
                    row_score[rows] = weight[slot_nodes[s]]
                    node_of_row[rows] = -1
                else:
                    go_left = self.X[rows, split_feat[s]] < split_thr[s]
                    node_of_row[rows] = np.where(go_left, remap[s], remap[s] + 1)
            if not next_nodes:
                break
            slot_nodes = next_nodes
            tot_g = next_tot_g
            tot_h = next_tot_h

        # anything still active hit the depth limit: finalize as leaves
        active_rows = np.flatnonzero(node_of_row >= 0)
        if active_rows.size:
            slots_of_rows = node_of_row[active_rows]
            for s, node in enumerate(slot_nodes):
                rows = active_rows[slots_of_rows == s]
                w = leaf_weight(tot_g[s][0] + tot_g[s][1],
                                tot_h[s][0] + tot_h[s][1], lam)
                weight[node] = w
                row_score[rows] = w

        tree = RegressionTree(
            feature=np.array(feature, dtype=np.int32),
            threshold=np.array(threshold, dtype=np.float64),
            left=np.array(left, dtype=np.int32),
            right=np.array(right, dtype=np.int32),
            weight=np.array(weight, dtype=np.float64),
            gain=np.array(gain, dtype=np.float64),
        )
        return tree, row_score


def build_tree(features, row_set, g, h, params, sorted_columns=None) -> RegressionTree:
    """Grow a single regression tree on the given rows.

    ``sorted_columns`` is the output of :func:`presort_columns`; pass it
    when building many trees over the same matrix.
    """
    grower = TreeGrower(np.asarray(features), sorted_columns)
    tree, _ = grower.grow(np.asarray(row_set), g, h, params)
    return tree
