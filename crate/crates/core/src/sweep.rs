//! Carrying one knot to another across a chain of solid cells.
//!
//! The sweep visits the solids in order. At each solid whose boundary holds
//! knot cells that are not in the target, it tries the exchange across that
//! solid. The exchange is taken only when it is legal and brings the knot
//! strictly closer to the target (fewer cells in the symmetric difference).
//! Otherwise a bounded breadth-first search over moves carried by the
//! neighbouring solids looks for a short detour that unlocks such an
//! exchange.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::engine::move_at;
use crate::error::{Error, Result};
use crate::knot::KnotDiagram;
use crate::lattice::LatticeCell;
use crate::moves::{exchange, FaceBoundaryMove, MoveSequence, Step};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepOptions {
    /// Coordinate used to order solids (0-based).
    pub axis: usize,
    /// Maximum number of auxiliary moves before the unlocking exchange.
    pub local_depth: usize,
    /// Maximum number of diagrams visited by one local search.
    pub local_state_budget: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            axis: 0,
            local_depth: 8,
            local_state_budget: 4096,
        }
    }
}

/// Sorts solids by their coordinate along `axis`, then by cell order.
pub fn order_solids(
    solids: impl IntoIterator<Item = LatticeCell>,
    axis: usize,
) -> Vec<LatticeCell> {
    let mut v: Vec<LatticeCell> = solids.into_iter().collect();
    v.sort_by_key(|c| (c.coord(axis), *c));
    v.dedup();
    v
}

fn distance(a: &BTreeSet<LatticeCell>, b: &BTreeSet<LatticeCell>) -> usize {
    a.symmetric_difference(b).count()
}

fn move_in(d: &KnotDiagram, carrier: &LatticeCell) -> Option<FaceBoundaryMove> {
    let closure = d.closure();
    move_at(carrier, d.dim(), |c| closure.contains(c))
}

/// Solids of the chain sharing a facet with `f`, including `f` itself.
fn star(f: &LatticeCell, solids: &[LatticeCell]) -> Vec<LatticeCell> {
    let k = f.dim();
    let mut out: Vec<LatticeCell> = solids
        .iter()
        .filter(|s| *s == f || f.intersection(s).is_some_and(|c| c.dim() + 1 == k))
        .copied()
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Breadth-first search from `start` over moves carried by `star`, for a
/// path after which the exchange across `f` is legal and ends closer to the
/// target than `bound`.
fn unlock(
    start: &KnotDiagram,
    f: &LatticeCell,
    star: &[LatticeCell],
    target: &BTreeSet<LatticeCell>,
    bound: usize,
    opts: &SweepOptions,
) -> Option<(Vec<FaceBoundaryMove>, KnotDiagram)> {
    struct Node {
        diagram: KnotDiagram,
        parent: Option<(usize, FaceBoundaryMove)>,
        depth: usize,
    }
    let mut nodes = vec![Node {
        diagram: start.clone(),
        parent: None,
        depth: 0,
    }];
    let mut seen: HashMap<BTreeSet<LatticeCell>, usize> = HashMap::new();
    seen.insert(start.cells().clone(), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let depth = nodes[i].depth;
        if depth > 0 {
            if let Some(mv) = move_in(&nodes[i].diagram, f) {
                let out = exchange(&nodes[i].diagram, &mv);
                if distance(out.cells(), target) < bound {
                    let mut path = vec![mv];
                    let mut j = i;
                    while let Some((p, m)) = &nodes[j].parent {
                        path.push(m.clone());
                        j = *p;
                    }
                    path.reverse();
                    return Some((path, out));
                }
            }
        }
        if depth == opts.local_depth {
            continue;
        }
        for carrier in star {
            if nodes.len() >= opts.local_state_budget {
                break;
            }
            let Some(mv) = move_in(&nodes[i].diagram, carrier) else {
                continue;
            };
            let child = exchange(&nodes[i].diagram, &mv);
            if seen.contains_key(child.cells()) {
                continue;
            }
            seen.insert(child.cells().clone(), nodes.len());
            queue.push_back(nodes.len());
            nodes.push(Node {
                diagram: child,
                parent: Some((i, mv)),
                depth: depth + 1,
            });
        }
    }
    None
}

/// Carries `d` to `target` across the ordered chain `solids`.
///
/// Returns the certificate, or [`Error::Stuck`] naming the solid where the
/// local search failed. A pass that ends away from the target reports the
/// index `solids.len()`.
pub fn sweep(
    d: &KnotDiagram,
    solids: &[LatticeCell],
    target: &KnotDiagram,
    opts: &SweepOptions,
) -> Result<MoveSequence> {
    if d.ctx() != target.ctx() || d.dim() != target.dim() {
        return Err(Error::InvalidArgument(
            "source and target live in different lattices".into(),
        ));
    }
    for (name, x) in [("source", d), ("target", target)] {
        if !x.is_valid() {
            return Err(Error::InvalidArgument(format!(
                "{name} is not a knot: {}",
                x.report()
            )));
        }
    }
    let k = d.dim();
    if let Some(s) = solids
        .iter()
        .find(|s| s.dim() != k + 1 || s.ambient_dim() != d.ctx().ambient_dim)
    {
        return Err(Error::InvalidArgument(format!(
            "solid [{s}] is not a {}-cell of Z^{}",
            k + 1,
            d.ctx().ambient_dim
        )));
    }

    let goal = target.cells();
    let mut cur = d.clone();
    let mut steps = Vec::new();
    for (i, f) in solids.iter().enumerate() {
        let touching: Vec<LatticeCell> = f
            .boundary_cells()?
            .into_iter()
            .filter(|c| cur.cells().contains(c))
            .collect();
        if touching.iter().all(|c| goal.contains(c)) {
            continue;
        }
        let bound = distance(cur.cells(), goal);
        if let Some(mv) = move_in(&cur, f) {
            let out = exchange(&cur, &mv);
            if distance(out.cells(), goal) < bound {
                steps.push(Step::Exchange(mv));
                cur = out;
                continue;
            }
        }
        let nearby = star(f, solids);
        match unlock(&cur, f, &nearby, goal, bound, opts) {
            Some((path, out)) => {
                steps.extend(path.into_iter().map(Step::Exchange));
                cur = out;
            }
            None => {
                return Err(Error::Stuck {
                    index: i,
                    diagnostic: format!(
                        "no exchange across [{f}] gets closer to the target within {} auxiliary moves ({} cells differ)",
                        opts.local_depth, bound
                    ),
                })
            }
        }
    }
    if cur.cells() != goal {
        return Err(Error::Stuck {
            index: solids.len(),
            diagnostic: format!(
                "pass ended with {} cells differing from the target",
                distance(cur.cells(), goal)
            ),
        });
    }
    Ok(MoveSequence::from_run(d.clone(), steps, &cur))
}
