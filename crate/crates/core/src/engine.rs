//! Move enumeration with incremental updates.
//!
//! For a valid knot, a well-formed move that passes the contact clause
//! always yields a valid knot: the knot meets the carrier exactly in the
//! closed disk A, so it meets the closure of B only along the common
//! boundary circle of A and B, and swapping one disk for the other keeps
//! the sphere embedded. Enumeration from a valid diagram therefore only
//! evaluates the contact clause, which depends on the cells near the
//! carrier. [`MoveEngine`] keeps per-face incidence counts so each
//! applied move only re-examines carriers around it.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::knot::{CellComplex, KnotDiagram};
use crate::lattice::{LatticeCell, LatticeContext};
use crate::moves::{check_contact, check_move, FaceBoundaryMove};

/// The move with the given carrier, if the knot answers `in_knot` for
/// closure membership and the move passes the structural and contact checks.
pub(crate) fn move_at(
    carrier: &LatticeCell,
    k: usize,
    in_knot: impl Fn(&LatticeCell) -> bool,
) -> Option<FaceBoundaryMove> {
    let facets = carrier.boundary_cells().ok()?;
    let removed: Vec<LatticeCell> = facets.iter().filter(|f| in_knot(f)).copied().collect();
    if removed.is_empty() || removed.len() == facets.len() {
        return None;
    }
    check_contact(carrier, &removed, k, in_knot).ok()?;
    FaceBoundaryMove::new(*carrier, removed).ok()
}

/// Every carrier that contains a cell of `d`, in cell order.
fn candidate_carriers(d: &KnotDiagram) -> BTreeSet<LatticeCell> {
    let k = d.dim();
    d.cells()
        .iter()
        .flat_map(|c| c.cofaces(k + 1).unwrap_or_default())
        .collect()
}

/// All legal M2 moves of `d`, ordered by carrier.
///
/// Each carrier admits at most one move, since the removed disk must be the
/// whole intersection of the knot with the carrier boundary.
pub fn enumerate_face_moves(d: &KnotDiagram) -> Vec<FaceBoundaryMove> {
    if d.is_valid() {
        let closure = d.closure();
        let k = d.dim();
        candidate_carriers(d)
            .iter()
            .filter_map(|f| move_at(f, k, |c| closure.contains(c)))
            .collect()
    } else {
        // no shortcut without a valid start: check every candidate in full
        let k = d.dim();
        candidate_carriers(d)
            .iter()
            .filter_map(|f| {
                let facets = f.boundary_cells().ok()?;
                let removed: Vec<LatticeCell> = facets
                    .into_iter()
                    .filter(|c| d.cells().contains(c))
                    .collect();
                let mv = FaceBoundaryMove::new(*f, removed).ok()?;
                debug_assert_eq!(mv.carrier().dim(), k + 1);
                check_move(d, &mv).ok().map(|_| mv)
            })
            .collect()
    }
}

/// Incremental state for long walks over the move graph of a valid knot.
#[derive(Clone, Debug)]
pub struct MoveEngine {
    ctx: LatticeContext,
    dim: usize,
    cells: HashSet<LatticeCell>,
    /// Number of knot cells containing each face of dimension below k.
    faces: HashMap<LatticeCell, u32>,
    legal: BTreeMap<LatticeCell, FaceBoundaryMove>,
}

impl MoveEngine {
    pub fn new(d: &KnotDiagram) -> Result<Self> {
        if !d.is_valid() {
            return Err(Error::InvalidArgument(format!(
                "move engine needs a valid knot: {}",
                d.report()
            )));
        }
        let mut engine = Self {
            ctx: *d.ctx(),
            dim: d.dim(),
            cells: HashSet::with_capacity(d.len()),
            faces: HashMap::new(),
            legal: BTreeMap::new(),
        };
        for c in d.cells() {
            engine.insert(c);
        }
        for f in candidate_carriers(d) {
            engine.refresh(&f);
        }
        Ok(engine)
    }

    fn insert(&mut self, c: &LatticeCell) {
        self.cells.insert(*c);
        for f in c.faces() {
            if f.dim() < self.dim {
                *self.faces.entry(f).or_default() += 1;
            }
        }
    }

    fn remove(&mut self, c: &LatticeCell) {
        self.cells.remove(c);
        for f in c.faces() {
            if f.dim() < self.dim {
                if let Some(n) = self.faces.get_mut(&f) {
                    *n -= 1;
                    if *n == 0 {
                        self.faces.remove(&f);
                    }
                }
            }
        }
    }

    fn in_closure(&self, f: &LatticeCell) -> bool {
        if f.dim() == self.dim {
            self.cells.contains(f)
        } else {
            self.faces.contains_key(f)
        }
    }

    fn refresh(&mut self, carrier: &LatticeCell) {
        match move_at(carrier, self.dim, |c| self.in_closure(c)) {
            Some(mv) => {
                self.legal.insert(*carrier, mv);
            }
            None => {
                self.legal.remove(carrier);
            }
        }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Number of legal moves.
    pub fn move_count(&self) -> usize {
        self.legal.len()
    }

    /// Legal moves in carrier order, matching [`enumerate_face_moves`].
    pub fn moves(&self) -> impl Iterator<Item = &FaceBoundaryMove> {
        self.legal.values()
    }

    pub fn nth_move(&self, i: usize) -> Option<&FaceBoundaryMove> {
        self.legal.values().nth(i)
    }

    pub fn move_for(&self, carrier: &LatticeCell) -> Option<&FaceBoundaryMove> {
        self.legal.get(carrier)
    }

    /// Applies a move from the current legal set.
    pub fn apply(&mut self, mv: &FaceBoundaryMove) -> Result<()> {
        if self.legal.get(mv.carrier()) != Some(mv) {
            return Err(Error::IllegalMove(format!(
                "no legal move with carrier [{}] and this removed disk",
                mv.carrier()
            )));
        }
        for c in mv.removed() {
            self.remove(c);
        }
        for c in mv.inserted() {
            self.insert(c);
        }
        // a carrier's verdict depends only on faces of its closure, and every
        // changed face lies in the applied carrier, so carriers sharing a
        // vertex with it cover all that can change
        let k1 = self.dim + 1;
        let mut touched = BTreeSet::new();
        for v in mv.carrier().vertices() {
            touched.extend(v.cofaces(k1)?);
        }
        for f in touched {
            self.refresh(&f);
        }
        Ok(())
    }

    /// Snapshot of the current cells as a diagram.
    pub fn diagram(&self) -> KnotDiagram {
        let cells: BTreeSet<LatticeCell> = self.cells.iter().copied().collect();
        KnotDiagram::from_complex(CellComplex::from_set(self.ctx, self.dim, cells))
    }
}
