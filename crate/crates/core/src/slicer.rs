//! Level-set slicing of cubulated 3-complexes in `Z^5`.
//!
//! The last coordinate is the level. A 3-cell is vertical when it spans the
//! level axis and horizontal otherwise. The slice at a non-integer level `t`
//! is made of the vertical cells spanning `[floor(t), floor(t) + 1]`, with the
//! level coordinate dropped. The horizontal 3-cells at an integer level `n`
//! form the level solid that carries the slice below `n` to the slice above.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::knot::{CellComplex, KnotDiagram};
use crate::lattice::{LatticeCell, LatticeContext};
use crate::moves::MoveSequence;
use crate::sweep::{order_solids, sweep, SweepOptions};

/// The level coordinate of `Z^5` (0-based).
pub const LEVEL_AXIS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CellOrientation {
    Horizontal,
    Vertical,
}

/// Vertical iff the cell spans the last coordinate.
pub fn cell_orientation(c: &LatticeCell) -> CellOrientation {
    let n = c.ambient_dim();
    if n > 0 && c.has_axis(n - 1) {
        CellOrientation::Vertical
    } else {
        CellOrientation::Horizontal
    }
}

/// Which adjacent slabs a square of a level solid bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SquareType {
    /// Only the slab below.
    TMinus,
    /// Only the slab above.
    TPlus,
    TBoth,
    /// Neither: a face of horizontal cells only.
    TNone,
}

/// Horizontal solid and skin at an integer level, projected to `Z^4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelSolid {
    pub level: i64,
    pub solid: BTreeSet<LatticeCell>,
    pub skin: BTreeSet<LatticeCell>,
}

/// A 3-complex in `Z^5` read as a cylinder between two 2-knots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlicedComplex {
    complex: CellComplex,
    level_range: (i64, i64),
}

impl SlicedComplex {
    /// Wraps a complex, taking the level range from its vertical cells.
    pub fn new(complex: CellComplex) -> Result<Self> {
        check_cylinder_shape(&complex)?;
        let levels: Vec<i64> = complex
            .iter()
            .filter(|c| cell_orientation(c) == CellOrientation::Vertical)
            .map(|c| c.coord(LEVEL_AXIS))
            .collect();
        let (Some(&lo), Some(&hi)) = (levels.iter().min(), levels.iter().max()) else {
            return Err(Error::Structure("complex has no vertical cells".into()));
        };
        Ok(Self {
            complex,
            level_range: (lo, hi + 1),
        })
    }

    /// Wraps a complex with an explicit level range `[m1, m2]`, `m1 < m2`.
    pub fn with_range(complex: CellComplex, m1: i64, m2: i64) -> Result<Self> {
        check_cylinder_shape(&complex)?;
        if m1 >= m2 {
            return Err(Error::InvalidArgument(format!(
                "level range [{m1}, {m2}] is empty"
            )));
        }
        Ok(Self {
            complex,
            level_range: (m1, m2),
        })
    }

    pub fn complex(&self) -> &CellComplex {
        &self.complex
    }

    pub fn level_range(&self) -> (i64, i64) {
        self.level_range
    }

    fn ctx4(&self) -> Result<LatticeContext> {
        LatticeContext::new(4, self.complex.ctx().scale)
    }

    fn check_level(&self, n: i64, lo: i64, hi: i64) -> Result<()> {
        if n < lo || n > hi {
            return Err(Error::LevelOutOfRange {
                level: n,
                min: lo,
                max: hi,
            });
        }
        Ok(())
    }

    /// Squares of the slab `[n, n + 1]`, projected to `Z^4`.
    fn slab_squares(&self, n: i64) -> BTreeSet<LatticeCell> {
        self.complex
            .iter()
            .filter(|c| {
                cell_orientation(c) == CellOrientation::Vertical && c.coord(LEVEL_AXIS) == n
            })
            .map(|c| c.drop_coordinate(LEVEL_AXIS).expect("ambient 5"))
            .collect()
    }

    /// The slice on the slab `[n, n + 1]` after clamping `n` into the range.
    fn slab_knot(&self, n: i64, t: f64) -> Result<KnotDiagram> {
        let (m1, m2) = self.level_range;
        let n = n.clamp(m1, m2 - 1);
        let complex = CellComplex::new(self.ctx4()?, 2, self.slab_squares(n))?;
        let d = KnotDiagram::new(complex)?;
        if !d.is_valid() {
            return Err(Error::InvalidSlice {
                level: t,
                detail: d.report().to_string(),
            });
        }
        Ok(d)
    }

    /// The knot `p^-1(t)` for a non-integer `t`. Levels outside the range
    /// give the end knots.
    pub fn slice_at(&self, t: f64) -> Result<KnotDiagram> {
        if !t.is_finite() || t.fract() == 0.0 {
            return Err(Error::InvalidArgument(format!(
                "slice level must be a non-integer, got {t}"
            )));
        }
        self.slab_knot(t.floor() as i64, t)
    }

    /// Checks that every slab of the range slices to a valid knot.
    pub fn validate(&self) -> Result<()> {
        let (m1, m2) = self.level_range;
        for n in m1..m2 {
            self.slab_knot(n, n as f64 + 0.5)?;
        }
        Ok(())
    }

    pub fn level_solid(&self, n: i64) -> Result<LevelSolid> {
        let (m1, m2) = self.level_range;
        self.check_level(n, m1, m2)?;
        let mut solid = BTreeSet::new();
        let mut skin = BTreeSet::new();
        for c in self.complex.iter() {
            let a = c.coord(LEVEL_AXIS);
            match cell_orientation(c) {
                CellOrientation::Horizontal if a == n => {
                    let p = c.drop_coordinate(LEVEL_AXIS)?;
                    skin.extend(p.faces_of_dim(2));
                    solid.insert(p);
                }
                CellOrientation::Vertical if a == n || a + 1 == n => {
                    let face = c.facet(LEVEL_AXIS, a + 1 == n);
                    skin.insert(face.drop_coordinate(LEVEL_AXIS)?);
                }
                _ => {}
            }
        }
        Ok(LevelSolid {
            level: n,
            solid,
            skin,
        })
    }

    pub fn classify_square_types(&self, n: i64) -> Result<BTreeMap<LatticeCell, SquareType>> {
        let level = self.level_solid(n)?;
        let below = self.slab_squares(n - 1);
        let above = self.slab_squares(n);
        Ok(level
            .skin
            .into_iter()
            .map(|s| {
                let t = match (below.contains(&s), above.contains(&s)) {
                    (true, true) => SquareType::TBoth,
                    (true, false) => SquareType::TMinus,
                    (false, true) => SquareType::TPlus,
                    (false, false) => SquareType::TNone,
                };
                (s, t)
            })
            .collect())
    }

    /// Certificate carrying the slice below level `n` to the slice above.
    pub fn carry_level(&self, n: i64, opts: &SweepOptions) -> Result<MoveSequence> {
        let (m1, m2) = self.level_range;
        self.check_level(n, m1 + 1, m2 - 1)?;
        let lower = self.slab_knot(n - 1, n as f64 - 0.5)?;
        let upper = self.slab_knot(n, n as f64 + 0.5)?;
        if lower == upper {
            return Ok(MoveSequence::empty(&lower));
        }
        let solid = self.level_solid(n)?.solid;
        if solid.is_empty() {
            return Err(Error::Structure(format!(
                "slices around level {n} differ but the level holds no solid"
            )));
        }

        let components = solid_components(&solid);
        let mut seq = MoveSequence::empty(&lower);
        let mut cur = lower.clone();
        let mut targets = Vec::with_capacity(components.len());
        for comp in &components {
            let faces: BTreeSet<LatticeCell> = comp
                .iter()
                .flat_map(|c| c.boundary_cells().expect("cube"))
                .collect();
            let mut cells: BTreeSet<LatticeCell> =
                cur.cells().difference(&faces).copied().collect();
            cells.extend(faces.intersection(upper.cells()).copied());
            let next = KnotDiagram::new(CellComplex::new(*cur.ctx(), 2, cells)?)?;
            if !next.is_valid() {
                targets.clear();
                break;
            }
            targets.push(next.clone());
            cur = next;
        }
        if targets.len() == components.len() && cur == upper {
            // one sweep per component, shared squares stay fixed
            let mut cur = lower;
            for (comp, target) in components.iter().zip(targets) {
                if target == cur {
                    continue;
                }
                let chain = order_solids(comp.iter().copied(), opts.axis);
                let part = sweep(&cur, &chain, &target, opts)?;
                seq = seq.then(part)?;
                cur = target;
            }
        } else {
            let chain = order_solids(solid.iter().copied(), opts.axis);
            seq = sweep(&lower, &chain, &upper, opts)?;
        }
        if seq.final_digest != crate::format::digest(&upper) {
            return Err(Error::Structure(format!(
                "level {n} certificate does not end at the slice above"
            )));
        }
        Ok(seq)
    }

    /// Concatenated certificate from the lower end knot to the upper one.
    pub fn carry_full(&self, opts: &SweepOptions) -> Result<MoveSequence> {
        let (m1, m2) = self.level_range;
        let start = self.slab_knot(m1, m1 as f64 + 0.5)?;
        let mut seq = MoveSequence::empty(&start);
        for n in m1 + 1..m2 {
            let part = self.carry_level(n, opts)?;
            seq = seq.then(part).map_err(|e| {
                Error::Structure(format!("level {n} does not continue level {}: {e}", n - 1))
            })?;
        }
        Ok(seq)
    }
}

fn check_cylinder_shape(c: &CellComplex) -> Result<()> {
    if c.ctx().ambient_dim != 5 || c.dim() != 3 {
        return Err(Error::InvalidArgument(format!(
            "a cylinder is a 3-complex in Z^5, got a {}-complex in Z^{}",
            c.dim(),
            c.ctx().ambient_dim
        )));
    }
    Ok(())
}

/// Groups cubes into components connected through shared squares, ordered
/// by their least cube.
fn solid_components(solid: &BTreeSet<LatticeCell>) -> Vec<Vec<LatticeCell>> {
    let cubes: Vec<LatticeCell> = solid.iter().copied().collect();
    let mut parent: Vec<usize> = (0..cubes.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut by_face: BTreeMap<LatticeCell, usize> = BTreeMap::new();
    for (i, c) in cubes.iter().enumerate() {
        for f in c.boundary_cells().expect("cube") {
            if let Some(&j) = by_face.get(&f) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            } else {
                by_face.insert(f, i);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<LatticeCell>> = BTreeMap::new();
    for (i, c) in cubes.iter().enumerate() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(*c);
    }
    groups.into_values().collect()
}

/// Assembles cylinders slab by slab.
#[derive(Debug)]
pub struct CylinderBuilder {
    start: i64,
    level: i64,
    scale: u32,
    cells: BTreeSet<LatticeCell>,
    error: Option<Error>,
}

impl CylinderBuilder {
    pub fn new(start: i64) -> Self {
        Self {
            start,
            level: start,
            scale: 1,
            cells: BTreeSet::new(),
            error: None,
        }
    }

    fn record<T>(&mut self, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.error.get_or_insert(e);
                None
            }
        }
    }

    /// Adds `knot x [level, level + 1]` and moves up one level.
    pub fn slab(mut self, knot: &KnotDiagram) -> Self {
        self.scale = knot.ctx().scale;
        for s in knot.cells() {
            if let Some(c) = self.record(s.lift(self.level, true)) {
                self.cells.insert(c);
            }
        }
        self.level += 1;
        self
    }

    /// Adds horizontal cubes of `Z^4` at the current level.
    pub fn solid(mut self, cubes: impl IntoIterator<Item = LatticeCell>) -> Self {
        for q in cubes {
            if let Some(c) = self.record(q.lift(self.level, false)) {
                self.cells.insert(c);
            }
        }
        self
    }

    pub fn build(self) -> Result<SlicedComplex> {
        if let Some(e) = self.error {
            return Err(e);
        }
        let complex = CellComplex::new(LatticeContext::new(5, self.scale)?, 3, self.cells)?;
        SlicedComplex::with_range(complex, self.start, self.level)
    }
}
