//! The orbit tree of simple-loop values and Fibonacci growth.
//!
//! A vertex of the trivalent tree is a triple `(a, b, c)`; its three
//! complementary regions carry the values `P = ab`, `Q = bc`, `R = ca`.
//! Crossing an edge applies one involution, which keeps two regions and
//! replaces the third: `I_c` replaces `P`, `I_a` replaces `Q`, `I_b`
//! replaces `R`. With `f = log(value)` every crossing satisfies
//!
//! ```text
//! f(new) = f(x) + f(y) − 2·log(pivot/(pivot − 1))
//! ```
//!
//! where `x, y` are the kept regions, so the defect is below `log 4` as
//! long as the pivot exceeds 2.
//!
//! Values grow doubly exponentially with depth, so vertices store the
//! logarithms of their coordinates.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::charvar::{simple_length, GeometricPoint, ParamTriple};
use crate::error::{Error, Result};
use crate::mcg::{reduce_to_domain, Involution};
use crate::par::Execution;
use crate::tolerance::Tolerances;

/// Index into `(P, Q, R) = (ab, bc, ca)` of the region replaced by `i`.
pub fn replaced_slot(i: Involution) -> usize {
    match i {
        Involution::Ic => 0,
        Involution::Ia => 1,
        Involution::Ib => 2,
    }
}

/// The two regions kept by `i`, in slot order.
pub fn kept_slots(i: Involution) -> [usize; 2] {
    match i {
        Involution::Ic => [1, 2],
        Involution::Ia => [0, 2],
        Involution::Ib => [0, 1],
    }
}

/// `log(x − 1)` from `log x`, for `x > 1`.
fn log_pred(lx: f64) -> f64 {
    if lx > LN_2 {
        lx + (-(-lx).exp()).ln_1p()
    } else {
        lx.exp_m1().ln()
    }
}

fn log_involution(i: Involution, l: [f64; 3]) -> [f64; 3] {
    let k = i.pivot_index();
    let lm = log_pred(l[k]);
    let mut out = l.map(|x| x + lm);
    out[k] = l[k] - lm;
    out
}

fn fvals_of(l: [f64; 3]) -> [f64; 3] {
    [l[0] + l[1], l[1] + l[2], l[2] + l[0]]
}

/// The edge the binary subtree hangs from, named by its involution; the
/// two regions it keeps are the invariant pair `X, Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StartEdge(pub Involution);

impl Default for StartEdge {
    fn default() -> Self {
        StartEdge(Involution::Ia)
    }
}

impl StartEdge {
    pub fn invariant_pair(self) -> [usize; 2] {
        kept_slots(self.0)
    }

    pub fn third_slot(self) -> usize {
        replaced_slot(self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeNode {
    /// `(log a, log b, log c)`.
    pub log_coords: [f64; 3],
    /// `(log ab, log bc, log ca)`.
    pub fvals: [f64; 3],
    /// Normalized comparison value of the region created here (`1` at the
    /// root, where it refers to the third region of the start edge).
    pub fe: f64,
    pub depth: usize,
    /// The involution that led here, absent at the root.
    pub via: Option<Involution>,
    /// Pivot of `via`, read from the parent.
    pub pivot: Option<f64>,
    pub children: Vec<TreeNode>,
}

impl TreeNode {
    /// The coordinates; may overflow to infinity deep in the tree.
    pub fn triple(&self) -> ParamTriple {
        let [a, b, c] = self.log_coords.map(f64::exp);
        ParamTriple::new(a, b, c)
    }

    /// `(ab, bc, ca)`; may overflow to infinity deep in the tree.
    pub fn values(&self) -> [f64; 3] {
        self.fvals.map(f64::exp)
    }

    /// Slot of the region created at this node.
    pub fn created_slot(&self, start: StartEdge) -> usize {
        self.via.map_or(start.third_slot(), replaced_slot)
    }

    pub fn count(&self) -> usize {
        1 + self.children.iter().map(TreeNode::count).sum::<usize>()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitTree {
    pub start: StartEdge,
    pub depth: usize,
    pub root: TreeNode,
}

// below this many remaining levels, subtrees are built sequentially
const SEQUENTIAL_CUTOFF: usize = 8;

#[allow(clippy::too_many_arguments)]
fn grow(
    l: [f64; 3],
    fe: [f64; 3],
    via: Option<Involution>,
    pivot: Option<f64>,
    excluded: Involution,
    depth: usize,
    remaining: usize,
    exec: Execution,
) -> TreeNode {
    let fvals = fvals_of(l);
    let created = via.map_or(0, replaced_slot);
    let mut node = TreeNode {
        log_coords: l,
        fvals,
        fe: if via.is_some() { fe[created] } else { 1.0 },
        depth,
        via,
        pivot,
        children: Vec::new(),
    };
    if remaining == 0 {
        return node;
    }
    let moves: Vec<Involution> = Involution::ALL.into_iter().filter(|&i| i != excluded).collect();
    let child = |i: Involution, e: Execution| {
        let nl = log_involution(i, l);
        let s = replaced_slot(i);
        let [x, y] = kept_slots(i);
        let mut nfe = fe;
        nfe[s] = fe[x] + fe[y];
        grow(
            nl,
            nfe,
            Some(i),
            Some(l[i.pivot_index()].exp()),
            i,
            depth + 1,
            remaining - 1,
            e,
        )
    };
    node.children = if remaining > SEQUENTIAL_CUTOFF && exec.is_parallel() {
        let (a, b) = exec.join(|| child(moves[0], exec), || child(moves[1], exec));
        vec![a, b]
    } else {
        moves.iter().map(|&i| child(i, Execution::Sequential)).collect()
    };
    node
}

/// The binary subtree on one side of `start`, to the given depth.
/// Children of a vertex come from the two involutions other than the one
/// that created it; at the root the start edge's own involution is left out.
pub fn expand_tree(
    root: &GeometricPoint,
    start: StartEdge,
    depth: usize,
    exec: Execution,
) -> Result<OrbitTree> {
    let l = root.coords().map(f64::ln);
    let root = grow(l, [1.0; 3], None, None, start.0, 0, depth, exec);
    Ok(OrbitTree { start, depth, root })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeMode {
    /// `F = 1` on the three root regions.
    #[default]
    Normalized,
    /// `F(X) = log x₀`, `F(Y) = log y₀`, `F(Z₀) = F(X) + F(Y)`.
    RootSum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub mode: FeMode,
    pub nodes_checked: usize,
    pub defect_max: f64,
    pub defect_bound: f64,
    pub bowditch_ok: bool,
    /// Minimum over the root regions of `f`.
    pub m: f64,
    /// Smallest `f(z) − ((m − δ)F(z) + δ)` over all regions visited.
    pub lower_bound_min_slack: f64,
    pub lower_bound_ok: bool,
    /// Largest relative residual of the transfer identity.
    pub transfer_residual_max: f64,
}

#[derive(Debug, Clone, Copy)]
struct Acc {
    checked: usize,
    defect_max: f64,
    bowditch_ok: bool,
    slack_min: f64,
    transfer_max: f64,
}

impl Acc {
    fn empty() -> Self {
        Acc {
            checked: 0,
            defect_max: f64::NEG_INFINITY,
            bowditch_ok: true,
            slack_min: f64::INFINITY,
            transfer_max: 0.0,
        }
    }

    fn merge(self, o: Acc) -> Acc {
        Acc {
            checked: self.checked + o.checked,
            defect_max: self.defect_max.max(o.defect_max),
            bowditch_ok: self.bowditch_ok && o.bowditch_ok,
            slack_min: self.slack_min.min(o.slack_min),
            transfer_max: self.transfer_max.max(o.transfer_max),
        }
    }
}

fn walk(node: &TreeNode, parent: &TreeNode, fe: [f64; 3], m: f64, exec: Execution, remaining: usize) -> Acc {
    let defect_bound = 4f64.ln();
    let i = node.via.expect("non-root node has a move");
    let s = replaced_slot(i);
    let [x, y] = kept_slots(i);
    let mut fe = fe;
    fe[s] = fe[x] + fe[y];

    let (fx, fy, fz) = (parent.fvals[x], parent.fvals[y], node.fvals[s]);
    let defect = fx + fy - fz;
    let scale = fx.abs().max(fy.abs()).max(1.0);
    let lpiv = parent.log_coords[i.pivot_index()];
    let predicted = fx + fy - 2.0 * (lpiv - log_pred(lpiv));
    let mut acc = Acc {
        checked: 1,
        defect_max: defect,
        bowditch_ok: defect <= defect_bound + 1e-12 * scale,
        slack_min: fz - ((m - defect_bound) * fe[s] + defect_bound),
        transfer_max: (fz - predicted).abs() / fz.abs().max(1.0),
    };
    let sub = |c: &TreeNode, e: Execution| walk(c, node, fe, m, e, remaining.saturating_sub(1));
    let rest = match node.children.as_slice() {
        [a, b] if remaining > SEQUENTIAL_CUTOFF && exec.is_parallel() => {
            let (ra, rb) = exec.join(|| sub(a, exec), || sub(b, exec));
            ra.merge(rb)
        }
        cs => cs
            .iter()
            .map(|c| sub(c, Execution::Sequential))
            .fold(Acc::empty(), Acc::merge),
    };
    acc = acc.merge(rest);
    acc
}

/// Checks `f(z) ≥ f(x) + f(y) − log 4` at every created region, the
/// transfer identity, and `f(z) ≥ (m − log 4)·F(z) + log 4` for every
/// region, root regions included.
pub fn bowditch_check(tree: &OrbitTree, mode: FeMode, exec: Execution) -> GrowthReport {
    let defect_bound = 4f64.ln();
    let root = &tree.root;
    let f = root.fvals;
    let m = f.iter().copied().fold(f64::INFINITY, f64::min);
    let [x, y] = tree.start.invariant_pair();
    let z = tree.start.third_slot();
    let mut fe = [1.0; 3];
    if mode == FeMode::RootSum {
        fe[x] = f[x];
        fe[y] = f[y];
        fe[z] = f[x] + f[y];
    }
    let root_slack = (0..3)
        .map(|k| f[k] - ((m - defect_bound) * fe[k] + defect_bound))
        .fold(f64::INFINITY, f64::min);
    let acc = root
        .children
        .iter()
        .map(|c| walk(c, root, fe, m, exec, tree.depth))
        .fold(Acc::empty(), Acc::merge);
    let slack = root_slack.min(acc.slack_min);
    GrowthReport {
        mode,
        nodes_checked: acc.checked,
        defect_max: if acc.checked == 0 { 0.0 } else { acc.defect_max },
        defect_bound,
        bowditch_ok: acc.bowditch_ok,
        m,
        lower_bound_min_slack: slack,
        lower_bound_ok: slack >= -1e-12 * m.abs().max(1.0),
        transfer_residual_max: acc.transfer_max,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusRow {
    /// The region value, `2 + 2cosh(length/2)`.
    pub value: f64,
    /// `log(value)`.
    pub f: f64,
    /// Length of the simple closed geodesic.
    pub length: f64,
    pub multiplicity: usize,
    pub depth_first_seen: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Census {
    /// The root after reduction to the closure of the fundamental domain.
    pub root: ParamTriple,
    pub max_f: f64,
    pub rows: Vec<CensusRow>,
}

impl Census {
    /// Number of regions with `f ≤ L`.
    pub fn count(&self) -> usize {
        self.rows.iter().map(|r| r.multiplicity).sum()
    }
}

/// Every region of the full tree with `f ≤ max_f`, grouped by value.
///
/// The root is first reduced into the closure of the fundamental domain.
/// From there, created values strictly increase along every path away
/// from the root vertex, so a branch is cut as soon as it creates a value
/// above `max_f`.
pub fn length_census(root: &GeometricPoint, max_f: f64, tol: &Tolerances) -> Result<Census> {
    if !(max_f.is_finite() && max_f > 4f64.ln()) {
        return Err(Error::InvalidArgument(format!(
            "census bound {max_f} must exceed log 4"
        )));
    }
    let trace = reduce_to_domain(root, 10_000, tol)?;
    let start = trace.end;
    let l0 = start.coords().map(f64::ln);
    let mut found: Vec<(f64, usize)> = fvals_of(l0)
        .into_iter()
        .filter(|&f| f <= max_f)
        .map(|f| (f, 0))
        .collect();

    let mut frontier: Vec<([f64; 3], Option<Involution>)> = vec![(l0, None)];
    let mut depth = 0;
    while !frontier.is_empty() {
        depth += 1;
        let mut next = Vec::new();
        for (l, back) in frontier {
            for i in Involution::ALL.into_iter().filter(|&i| Some(i) != back) {
                let nl = log_involution(i, l);
                let fz = fvals_of(nl)[replaced_slot(i)];
                if fz <= max_f {
                    found.push((fz, depth));
                    next.push((nl, Some(i)));
                }
            }
        }
        frontier = next;
    }

    found.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut rows: Vec<CensusRow> = Vec::new();
    for (f, d) in found {
        match rows.last_mut() {
            Some(r) if (f - r.f).abs() <= 1e-9 * f.abs().max(1.0) => {
                r.multiplicity += 1;
                r.depth_first_seen = r.depth_first_seen.min(d);
            }
            _ => {
                let value = f.exp();
                rows.push(CensusRow {
                    value,
                    f,
                    length: simple_length(value)?,
                    multiplicity: 1,
                    depth_first_seen: d,
                });
            }
        }
    }
    Ok(Census {
        root: start,
        max_f,
        rows,
    })
}
