//! The two cubulated moves: global subdivision (M1) and face-boundary
//! exchange (M2), plus replayable move sequences.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::format;
use crate::knot::{KnotDiagram, KnotReport};
use crate::lattice::LatticeCell;

/// An M2 move: replace the disk `removed` of the carrier's boundary by the
/// complementary disk `inserted`.
///
/// Both cell lists are kept sorted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceBoundaryMove {
    carrier: LatticeCell,
    removed: Vec<LatticeCell>,
    inserted: Vec<LatticeCell>,
}

impl FaceBoundaryMove {
    /// The move removing `removed` from the boundary of `carrier`; the
    /// inserted cells are the rest of that boundary.
    pub fn new(
        carrier: LatticeCell,
        removed: impl IntoIterator<Item = LatticeCell>,
    ) -> Result<Self> {
        let boundary: BTreeSet<LatticeCell> = boundary_of(&carrier)?;
        let removed: BTreeSet<LatticeCell> = removed.into_iter().collect();
        if let Some(c) = removed.iter().find(|c| !boundary.contains(c)) {
            return Err(Error::MalformedMove(format!(
                "[{c}] is not a facet of the carrier [{carrier}]"
            )));
        }
        let inserted: Vec<LatticeCell> = boundary.difference(&removed).copied().collect();
        Self::checked(carrier, removed.into_iter().collect(), inserted)
    }

    /// Rebuilds a move from all three parts, checking that they partition the
    /// carrier boundary into two disks.
    pub fn from_parts(
        carrier: LatticeCell,
        removed: impl IntoIterator<Item = LatticeCell>,
        inserted: impl IntoIterator<Item = LatticeCell>,
    ) -> Result<Self> {
        let boundary = boundary_of(&carrier)?;
        let mut r: Vec<LatticeCell> = removed.into_iter().collect();
        let mut i: Vec<LatticeCell> = inserted.into_iter().collect();
        r.sort();
        i.sort();
        let mut all: Vec<LatticeCell> = r.iter().chain(&i).copied().collect();
        all.sort();
        let whole: Vec<LatticeCell> = boundary.into_iter().collect();
        if all != whole {
            return Err(Error::MalformedMove(format!(
                "removed and inserted cells do not partition the boundary of [{carrier}]"
            )));
        }
        Self::checked(carrier, r, i)
    }

    fn checked(
        carrier: LatticeCell,
        removed: Vec<LatticeCell>,
        inserted: Vec<LatticeCell>,
    ) -> Result<Self> {
        if !is_disk(&removed) {
            return Err(Error::MalformedMove(format!(
                "removed cells in [{carrier}] do not form a disk"
            )));
        }
        if !is_disk(&inserted) {
            return Err(Error::MalformedMove(format!(
                "inserted cells in [{carrier}] do not form a disk"
            )));
        }
        Ok(Self {
            carrier,
            removed,
            inserted,
        })
    }

    pub fn carrier(&self) -> &LatticeCell {
        &self.carrier
    }

    pub fn removed(&self) -> &[LatticeCell] {
        &self.removed
    }

    pub fn inserted(&self) -> &[LatticeCell] {
        &self.inserted
    }

    /// Same carrier, removed and inserted swapped.
    pub fn invert(&self) -> Self {
        Self {
            carrier: self.carrier,
            removed: self.inserted.clone(),
            inserted: self.removed.clone(),
        }
    }

    pub fn translated(&self, offset: &[i64]) -> Result<Self> {
        let t = |v: &[LatticeCell]| -> Result<Vec<LatticeCell>> {
            v.iter().map(|c| c.translate(offset)).collect()
        };
        Ok(Self {
            carrier: self.carrier.translate(offset)?,
            removed: t(&self.removed)?,
            inserted: t(&self.inserted)?,
        })
    }

    /// Change in cell count when the move is applied.
    pub fn delta(&self) -> isize {
        self.inserted.len() as isize - self.removed.len() as isize
    }
}

impl fmt::Display for FaceBoundaryMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[LatticeCell]| {
            v.iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join("; ")
        };
        write!(
            f,
            "{} | removed: {} | inserted: {}",
            self.carrier,
            join(&self.removed),
            join(&self.inserted)
        )
    }
}

impl fmt::Debug for FaceBoundaryMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M2({self})")
    }
}

fn boundary_of(carrier: &LatticeCell) -> Result<BTreeSet<LatticeCell>> {
    if carrier.dim() < 2 {
        return Err(Error::MalformedMove(format!(
            "carrier [{carrier}] must have dimension at least 2"
        )));
    }
    Ok(carrier.boundary_cells()?.into_iter().collect())
}

/// True when the k-cells form a combinatorial disk: nonempty, connected
/// through shared (k-1)-faces, no (k-1)-face in more than two cells, and
/// Euler characteristic 1.
pub(crate) fn is_disk(cells: &[LatticeCell]) -> bool {
    if cells.is_empty() {
        return false;
    }
    if cells[0].dim() == 0 {
        return cells.len() == 1;
    }
    // (ridge, owners) pairs; the sets involved are tiny
    let mut ridges: Vec<(LatticeCell, usize, usize)> = Vec::new();
    for (i, c) in cells.iter().enumerate() {
        for r in c.boundary_cells().expect("dim >= 1") {
            match ridges.iter_mut().find(|(x, _, _)| *x == r) {
                Some(entry) if entry.2 == usize::MAX => entry.2 = i,
                Some(_) => return false,
                None => ridges.push((r, i, usize::MAX)),
            }
        }
    }
    let mut seen = vec![false; cells.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for &(_, a, b) in &ridges {
            let j = if a == i {
                b
            } else if b == i {
                a
            } else {
                continue;
            };
            if j != usize::MAX && !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return false;
    }
    closure_euler(cells) == 1
}

/// Euler characteristic of the closure of `cells`.
fn closure_euler(cells: &[LatticeCell]) -> i64 {
    let sign = |f: &LatticeCell| if f.dim().is_multiple_of(2) { 1 } else { -1 };
    let n = cells[0].ambient_dim();
    let lo: Vec<i64> = (0..n)
        .map(|i| cells.iter().map(|c| c.coord(i)).min().unwrap_or(0))
        .collect();
    let in_unit_box = cells.iter().all(|c| {
        (0..n).all(|i| {
            let (a, b) = c.bounds(i);
            a >= lo[i] && b <= lo[i] + 1
        })
    });
    if !in_unit_box {
        let mut faces: Vec<LatticeCell> = cells.iter().flat_map(|c| c.faces()).collect();
        faces.sort_unstable();
        faces.dedup();
        return faces.iter().map(sign).sum();
    }
    // faces of a unit box: one base-3 digit per axis (low, high, spanned)
    let mut seen = [false; 3usize.pow(crate::lattice::MAX_DIM as u32)];
    let mut chi = 0;
    for c in cells {
        for f in c.faces() {
            let code = (0..n).fold(0usize, |acc, i| {
                let digit = if f.has_axis(i) {
                    2
                } else {
                    (f.coord(i) - lo[i]) as usize
                };
                3 * acc + digit
            });
            if !seen[code] {
                seen[code] = true;
                chi += sign(&f);
            }
        }
    }
    chi
}

/// Why a move was refused.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IllegalReason {
    /// The move does not fit the diagram (wrong dimension or ambient space).
    Shape(String),
    /// Clause (a): the knot meets the closed carrier in more or less than
    /// the closure of the removed disk.
    Contact(String),
    /// Clause (b): the exchanged diagram is not a valid knot.
    Result(KnotReport),
}

impl fmt::Display for IllegalReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IllegalReason::Shape(s) => write!(f, "shape: {s}"),
            IllegalReason::Contact(s) => write!(f, "clause (a): {s}"),
            IllegalReason::Result(r) => write!(f, "clause (b): result is not a knot: {r}"),
        }
    }
}

pub(crate) fn check_shape(d: &KnotDiagram, mv: &FaceBoundaryMove) -> Result<(), IllegalReason> {
    let c = mv.carrier();
    if c.ambient_dim() != d.ctx().ambient_dim || c.dim() != d.dim() + 1 {
        return Err(IllegalReason::Shape(format!(
            "carrier [{c}] is not a {}-cell of Z^{}",
            d.dim() + 1,
            d.ctx().ambient_dim
        )));
    }
    Ok(())
}

/// Clause (a): for every face of the closed carrier of dimension at most k,
/// membership in the knot closure must agree with membership in the closure
/// of `removed`. `in_knot` answers closure membership for the knot.
pub(crate) fn check_contact(
    carrier: &LatticeCell,
    removed: &[LatticeCell],
    k: usize,
    in_knot: impl Fn(&LatticeCell) -> bool,
) -> Result<(), String> {
    for f in carrier.faces() {
        if f.dim() > k {
            continue;
        }
        let in_a = removed.iter().any(|a| a.contains(&f));
        let in_k = in_knot(&f);
        if in_a != in_k {
            return Err(if in_k {
                format!("knot meets the carrier in [{f}] outside the removed disk")
            } else {
                format!("face [{f}] of the removed disk is not in the knot")
            });
        }
    }
    Ok(())
}

/// The diagram `(d \ A) ∪ B`, with no legality check.
pub(crate) fn exchange(d: &KnotDiagram, mv: &FaceBoundaryMove) -> KnotDiagram {
    let mut cells = d.cells().clone();
    for c in mv.removed() {
        cells.remove(c);
    }
    cells.extend(mv.inserted().iter().copied());
    d.with_cells(cells)
}

/// Checks both legality clauses, returning the first failure.
pub fn check_move(d: &KnotDiagram, mv: &FaceBoundaryMove) -> Result<(), IllegalReason> {
    check_move_with_result(d, mv).map(|_| ())
}

fn check_move_with_result(
    d: &KnotDiagram,
    mv: &FaceBoundaryMove,
) -> Result<KnotDiagram, IllegalReason> {
    check_shape(d, mv)?;
    let closure = d.closure();
    check_contact(mv.carrier(), mv.removed(), d.dim(), |f| closure.contains(f))
        .map_err(IllegalReason::Contact)?;
    let out = exchange(d, mv);
    if !out.is_valid() {
        return Err(IllegalReason::Result(out.report().clone()));
    }
    Ok(out)
}

pub fn is_legal(d: &KnotDiagram, mv: &FaceBoundaryMove) -> bool {
    check_move(d, mv).is_ok()
}

/// Applies a legal move, returning the revalidated diagram.
pub fn apply_move(d: &KnotDiagram, mv: &FaceBoundaryMove) -> Result<KnotDiagram> {
    check_move_with_result(d, mv).map_err(|r| Error::IllegalMove(r.to_string()))
}

/// M1: subdivides every cell into `m^k` cells and multiplies the scale by `m`.
pub fn subdivide_knot(d: &KnotDiagram, m: u32) -> Result<KnotDiagram> {
    let ctx = d.ctx().subdivided(m)?;
    let mut cells = BTreeSet::new();
    for c in d.cells() {
        cells.extend(c.subdivide(m)?);
    }
    Ok(KnotDiagram::from_complex(
        crate::knot::CellComplex::from_set(ctx, d.dim(), cells),
    ))
}

/// One step of a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Subdivide(u32),
    Exchange(FaceBoundaryMove),
}

impl Step {
    /// Applies the step with full legality checking.
    pub fn apply(&self, d: &KnotDiagram) -> Result<KnotDiagram> {
        match self {
            Step::Subdivide(m) => subdivide_knot(d, *m),
            Step::Exchange(mv) => apply_move(d, mv),
        }
    }

    pub fn translated(&self, offset: &[i64]) -> Result<Self> {
        Ok(match self {
            Step::Subdivide(m) => Step::Subdivide(*m),
            Step::Exchange(mv) => Step::Exchange(mv.translated(offset)?),
        })
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Subdivide(m) => write!(f, "m1 {m}"),
            Step::Exchange(mv) => write!(f, "m2 {mv}"),
        }
    }
}

/// A replayable certificate: a start diagram, its steps, and the digest of
/// the diagram the steps should end at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveSequence {
    pub initial: KnotDiagram,
    pub steps: Vec<Step>,
    pub final_digest: String,
}

impl MoveSequence {
    pub fn empty(d: &KnotDiagram) -> Self {
        Self {
            final_digest: format::digest(d),
            initial: d.clone(),
            steps: Vec::new(),
        }
    }

    /// A certificate whose steps are known to take `initial` to `end`.
    pub fn from_run(initial: KnotDiagram, steps: Vec<Step>, end: &KnotDiagram) -> Self {
        Self {
            initial,
            steps,
            final_digest: format::digest(end),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn initial_digest(&self) -> String {
        format::digest(&self.initial)
    }

    /// Appends `next`, which must start where `self` ends.
    pub fn then(mut self, next: MoveSequence) -> Result<Self> {
        let start = next.initial_digest();
        if start != self.final_digest {
            return Err(Error::Structure(format!(
                "cannot concatenate certificates: end digest {} differs from start digest {}",
                self.final_digest, start
            )));
        }
        self.steps.extend(next.steps);
        self.final_digest = next.final_digest;
        Ok(self)
    }

    /// The removed and inserted cells of every exchange step.
    pub fn exchanges(&self) -> impl Iterator<Item = &FaceBoundaryMove> {
        self.steps.iter().filter_map(|s| match s {
            Step::Exchange(mv) => Some(mv),
            Step::Subdivide(_) => None,
        })
    }

    /// Replays every step with legality and validity re-checked, returning
    /// the end diagram.
    pub fn replay(&self) -> Result<KnotDiagram, ReplayError> {
        self.replay_with(|_, _| {})
    }

    /// Like [`replay`](Self::replay), calling `visit(i, d)` on the start
    /// diagram (`i = 0`) and after every step `i`.
    pub fn replay_with(
        &self,
        mut visit: impl FnMut(usize, &KnotDiagram),
    ) -> Result<KnotDiagram, ReplayError> {
        if !self.initial.is_valid() {
            return Err(ReplayError {
                step: None,
                reason: format!("initial diagram is not a knot: {}", self.initial.report()),
            });
        }
        let mut d = self.initial.clone();
        visit(0, &d);
        for (i, step) in self.steps.iter().enumerate() {
            d = step.apply(&d).map_err(|e| ReplayError {
                step: Some(i),
                reason: e.to_string(),
            })?;
            if !d.is_valid() {
                return Err(ReplayError {
                    step: Some(i),
                    reason: format!("intermediate diagram is not a knot: {}", d.report()),
                });
            }
            visit(i + 1, &d);
        }
        let got = format::digest(&d);
        if got != self.final_digest {
            return Err(ReplayError {
                step: None,
                reason: format!(
                    "final digest mismatch: expected {}, got {got}",
                    self.final_digest
                ),
            });
        }
        Ok(d)
    }
}

/// A failed replay: the 0-based index of the offending step, or `None` when
/// the failure is not tied to one step (invalid start, digest mismatch).
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("replay failed{}: {reason}", step.map(|s| format!(" at step {s}")).unwrap_or_default())]
pub struct ReplayError {
    pub step: Option<usize>,
    pub reason: String,
}
