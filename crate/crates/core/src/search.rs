//! Bounded search over the M2 move graph, certificate replay, and seeded
//! random walks.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::engine::{enumerate_face_moves, MoveEngine};
use crate::error::{Error, Result};
use crate::knot::KnotDiagram;
use crate::lattice::LatticeCell;
use crate::moves::{exchange, FaceBoundaryMove, MoveSequence, ReplayError, Step};

/// Exact identity of a diagram, optionally up to integer translation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    pub scale: u32,
    pub ambient: usize,
    pub dim: usize,
    /// Sorted cells, translated so the componentwise minimum anchor is the
    /// origin when normalized.
    pub cells: Box<[LatticeCell]>,
}

impl CanonicalKey {
    /// Hex SHA-256 of the key's text form.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("{} {} {}\n", self.dim, self.ambient, self.scale));
        for c in self.cells.iter() {
            h.update(format!("{c}\n"));
        }
        hex::encode(h.finalize())
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CanonicalKey({} cells, {})",
            self.cells.len(),
            &self.digest()[..12]
        )
    }
}

/// Componentwise minimum anchor of the diagram's cells.
pub fn min_corner(d: &KnotDiagram) -> Vec<i64> {
    let n = d.ctx().ambient_dim;
    let mut lo = vec![i64::MAX; n];
    for c in d.cells() {
        for (i, l) in lo.iter_mut().enumerate() {
            *l = (*l).min(c.coord(i));
        }
    }
    if d.is_empty() {
        lo.fill(0);
    }
    lo
}

pub fn canonical_key(d: &KnotDiagram, normalize_translation: bool) -> CanonicalKey {
    let cells: Box<[LatticeCell]> = if normalize_translation {
        let offset: Vec<i64> = min_corner(d).iter().map(|x| -x).collect();
        d.cells()
            .iter()
            .map(|c| {
                c.translate(&offset)
                    .expect("moving toward the origin cannot overflow")
            })
            .collect()
    } else {
        d.cells().iter().copied().collect()
    };
    CanonicalKey {
        scale: d.ctx().scale,
        ambient: d.ctx().ambient_dim,
        dim: d.dim(),
        cells,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Longest certificate considered.
    pub max_moves: usize,
    /// Most diagrams stored across both search directions.
    pub max_states: usize,
    /// Identify diagrams that differ by an integer translation.
    pub normalize: bool,
    /// Revalidate every generated diagram. Off by default: moves found by
    /// enumeration from a valid knot always give a valid knot. Use
    /// [`replay`] to recheck a returned certificate.
    pub validate_states: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            max_moves: 12,
            max_states: 100_000,
            normalize: false,
            validate_states: false,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Diagrams stored.
    pub states: usize,
    /// Diagrams whose moves were enumerated.
    pub expanded: usize,
    pub forward_depth: usize,
    pub backward_depth: usize,
    /// Generated diagrams that failed validation (always 0 for a correct
    /// move generator).
    pub rejected: usize,
}

/// The search ended without a certificate. This is inconclusive: a longer
/// certificate, or one at a finer scale, may exist.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("no certificate found ({reason}); {} states, {} expanded, depths {}+{}", stats.states, stats.expanded, stats.forward_depth, stats.backward_depth)]
pub struct NotFound {
    pub reason: String,
    pub stats: SearchStats,
}

#[derive(Clone, Debug)]
pub struct Found {
    pub certificate: MoveSequence,
    /// Translation taking the requested target to the certificate's end
    /// (all zeros unless translations are normalized).
    pub offset: Vec<i64>,
    pub stats: SearchStats,
}

struct Node {
    diagram: KnotDiagram,
    parent: Option<(usize, FaceBoundaryMove)>,
}

struct Side {
    nodes: Vec<Node>,
    index: HashMap<CanonicalKey, usize>,
    frontier: Vec<usize>,
    depth: usize,
}

impl Side {
    fn new(d: &KnotDiagram, normalize: bool) -> Self {
        let mut index = HashMap::new();
        index.insert(canonical_key(d, normalize), 0);
        Self {
            nodes: vec![Node {
                diagram: d.clone(),
                parent: None,
            }],
            index,
            frontier: vec![0],
            depth: 0,
        }
    }

    /// Moves from the root to node `i`.
    fn path(&self, mut i: usize) -> Vec<FaceBoundaryMove> {
        let mut out = Vec::new();
        while let Some((p, m)) = &self.nodes[i].parent {
            out.push(m.clone());
            i = *p;
        }
        out.reverse();
        out
    }
}

/// A meeting point: a forward node and a backward node with equal keys.
struct Meet {
    forward: usize,
    backward: usize,
}

/// Shortest M2 certificate from `source` to `target` within the bounds.
///
/// The search runs breadth-first from both ends, always growing the smaller
/// frontier by one full layer, so the first layer that meets gives the
/// shortest length. Among the meets of that layer the lexicographically
/// least move list is returned. Moves are involutions, so the backward half
/// is replayed with inverted moves.
pub fn bfs_search(
    source: &KnotDiagram,
    target: &KnotDiagram,
    opts: &SearchOptions,
) -> Result<Found, NotFound> {
    let fail = |reason: &str, stats: SearchStats| NotFound {
        reason: reason.into(),
        stats,
    };
    let mut stats = SearchStats::default();
    if source.ctx() != target.ctx() || source.dim() != target.dim() {
        return Err(fail("source and target live in different lattices", stats));
    }
    if !source.is_valid() || !target.is_valid() {
        return Err(fail("source or target is not a valid knot", stats));
    }
    let norm = opts.normalize;
    let mut fwd = Side::new(source, norm);
    let mut bwd = Side::new(target, norm);
    stats.states = 2;
    if let Some(&b) = bwd.index.get(&canonical_key(source, norm)) {
        return Ok(finish(
            &fwd,
            &bwd,
            Meet {
                forward: 0,
                backward: b,
            },
            source,
            target,
            stats,
        ));
    }

    while fwd.depth + bwd.depth < opts.max_moves {
        let forward = fwd.frontier.len() <= bwd.frontier.len();
        let (grow, other) = if forward {
            (&mut fwd, &bwd)
        } else {
            (&mut bwd, &fwd)
        };
        if grow.frontier.is_empty() {
            return Err(fail("move graph exhausted", stats));
        }
        // children of the final layer are only checked against the other side
        let store = grow.depth + 1 + other.depth < opts.max_moves;
        let mut meets: Vec<(usize, usize)> = Vec::new();
        let mut next = Vec::new();
        let mut over_budget = false;
        let frontier = std::mem::take(&mut grow.frontier);
        for &i in &frontier {
            stats.expanded += 1;
            let moves = enumerate_face_moves(&grow.nodes[i].diagram);
            for mv in moves {
                let child = exchange(&grow.nodes[i].diagram, &mv);
                if opts.validate_states && !child.is_valid() {
                    stats.rejected += 1;
                    continue;
                }
                let key = canonical_key(&child, norm);
                if grow.index.contains_key(&key) {
                    continue;
                }
                if let Some(&j) = other.index.get(&key) {
                    // record the meet with a temporary node on this side
                    grow.nodes.push(Node {
                        diagram: child,
                        parent: Some((i, mv)),
                    });
                    let id = grow.nodes.len() - 1;
                    grow.index.insert(key, id);
                    meets.push((id, j));
                    continue;
                }
                if !store || over_budget {
                    continue;
                }
                if stats.states >= opts.max_states {
                    over_budget = true;
                    continue;
                }
                grow.nodes.push(Node {
                    diagram: child,
                    parent: Some((i, mv)),
                });
                let id = grow.nodes.len() - 1;
                grow.index.insert(key, id);
                next.push(id);
                stats.states += 1;
            }
        }
        grow.depth += 1;
        grow.frontier = next;
        stats.forward_depth = fwd.depth;
        stats.backward_depth = bwd.depth;
        if !meets.is_empty() {
            let meet = best_meet(&fwd, &bwd, &meets, forward);
            return Ok(finish(&fwd, &bwd, meet, source, target, stats));
        }
        if over_budget {
            return Err(fail("state budget exhausted", stats));
        }
    }
    Err(fail("move budget exhausted", stats))
}

/// All meets of one layer have the same total length; pick the least path.
fn best_meet(fwd: &Side, bwd: &Side, meets: &[(usize, usize)], forward: bool) -> Meet {
    meets
        .iter()
        .map(|&(a, b)| {
            if forward {
                Meet {
                    forward: a,
                    backward: b,
                }
            } else {
                Meet {
                    forward: b,
                    backward: a,
                }
            }
        })
        .min_by_key(|m| {
            let mut p = fwd.path(m.forward);
            let mut back = bwd.path(m.backward);
            back.reverse();
            p.extend(back.into_iter().map(|mv| mv.invert()));
            p
        })
        .expect("nonempty")
}

fn finish(
    fwd: &Side,
    bwd: &Side,
    meet: Meet,
    source: &KnotDiagram,
    target: &KnotDiagram,
    stats: SearchStats,
) -> Found {
    let f = &fwd.nodes[meet.forward].diagram;
    let b = &bwd.nodes[meet.backward].diagram;
    // b is f translated by `shift` (zero without normalization)
    let shift: Vec<i64> = min_corner(b)
        .iter()
        .zip(min_corner(f))
        .map(|(x, y)| x - y)
        .collect();
    let back: Vec<i64> = shift.iter().map(|x| -x).collect();
    let mut steps: Vec<Step> = fwd
        .path(meet.forward)
        .into_iter()
        .map(Step::Exchange)
        .collect();
    let mut tail = bwd.path(meet.backward);
    tail.reverse();
    for mv in tail {
        let mv = mv
            .invert()
            .translated(&back)
            .expect("translate within bounds");
        steps.push(Step::Exchange(mv));
    }
    let end = target.translate(&back).expect("translate within bounds");
    Found {
        certificate: MoveSequence::from_run(source.clone(), steps, &end),
        offset: back,
        stats,
    }
}

/// Replays a certificate, reporting the failing step.
pub fn replay_checked(seq: &MoveSequence) -> Result<KnotDiagram, ReplayError> {
    seq.replay()
}

pub fn replay(seq: &MoveSequence) -> bool {
    seq.replay().is_ok()
}

/// Applies `steps` uniformly chosen legal moves with a ChaCha8 generator
/// seeded by `seed`.
pub fn random_walk(
    d: &KnotDiagram,
    steps: usize,
    seed: u64,
) -> Result<(KnotDiagram, MoveSequence)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut engine = MoveEngine::new(d)?;
    let mut taken = Vec::with_capacity(steps);
    for i in 0..steps {
        let count = engine.move_count();
        if count == 0 {
            return Err(Error::Structure(format!("no legal move after {i} steps")));
        }
        let mv = engine
            .nth_move(rng.gen_range(0..count))
            .expect("index below count")
            .clone();
        engine.apply(&mv)?;
        taken.push(Step::Exchange(mv));
    }
    let end = engine.diagram();
    let seq = MoveSequence::from_run(d.clone(), taken, &end);
    Ok((end, seq))
}
