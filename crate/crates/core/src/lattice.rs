//! Cells of the canonical cubulation of `Z^n`.
//!
//! A k-cell is stored as its minimal corner (the anchor) together with the set
//! of axes along which it extends by one lattice unit. Every face, coface and
//! incidence query reduces to integer arithmetic on that pair.
//!
//! Axes are 0-based in the Rust API. Text formats and `Display` use 1-based
//! axes, matching the usual `x_1 .. x_n` coordinate naming.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};

/// Largest ambient dimension a [`LatticeCell`] can live in.
pub const MAX_DIM: usize = 6;

/// An axis-aligned unit cell of the cubulation, anchored at its minimal corner.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct LatticeCell {
    anchor: [i32; MAX_DIM],
    ambient: u8,
    axes: u8,
}

/// Ambient dimension and subdivision scale shared by every cell of a complex.
///
/// A complex at scale `s` lives in `(1/s) Z^n`; anchors are stored in units
/// of `1/s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LatticeContext {
    pub ambient_dim: usize,
    pub scale: u32,
}

impl LatticeContext {
    pub fn new(ambient_dim: usize, scale: u32) -> Result<Self> {
        if ambient_dim == 0 || ambient_dim > MAX_DIM {
            return Err(Error::InvalidArgument(format!(
                "ambient dimension {ambient_dim} not in 1..={MAX_DIM}"
            )));
        }
        if scale == 0 {
            return Err(Error::InvalidArgument("scale must be at least 1".into()));
        }
        Ok(Self { ambient_dim, scale })
    }

    /// Context after an M1 subdivision by `m`.
    pub fn subdivided(&self, m: u32) -> Result<Self> {
        let scale = self
            .scale
            .checked_mul(m)
            .ok_or_else(|| Error::Overflow(format!("scale {} * {m}", self.scale)))?;
        Ok(Self { scale, ..*self })
    }
}

/// Largest common face of two cells of equal dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Adjacency {
    Disjoint,
    /// The closed cells meet in a common face of dimension `dim`.
    SharedFace {
        dim: usize,
    },
    Equal,
}

impl Adjacency {
    /// True when the two k-cells share a (k-1)-face.
    pub fn is_facet_of(&self, k: usize) -> bool {
        matches!(self, Adjacency::SharedFace { dim } if *dim + 1 == k)
    }
}

fn to_coord(v: i64) -> Result<i32> {
    i32::try_from(v).map_err(|_| Error::Overflow(format!("coordinate {v} out of range")))
}

impl LatticeCell {
    /// Builds a cell from its anchor and a strictly ascending list of 0-based axes.
    pub fn new(anchor: &[i64], axes: &[usize]) -> Result<Self> {
        let ambient = anchor.len();
        if ambient == 0 || ambient > MAX_DIM {
            return Err(Error::InvalidArgument(format!(
                "ambient dimension {ambient} not in 1..={MAX_DIM}"
            )));
        }
        let mut mask = 0u8;
        let mut prev: Option<usize> = None;
        for &a in axes {
            if a >= ambient {
                return Err(Error::InvalidArgument(format!(
                    "axis {} exceeds ambient dimension {ambient}",
                    a + 1
                )));
            }
            if prev.is_some_and(|p| p >= a) {
                return Err(Error::InvalidArgument(
                    "axes must be strictly ascending".into(),
                ));
            }
            prev = Some(a);
            mask |= 1 << a;
        }
        let mut coords = [0i32; MAX_DIM];
        for (i, &v) in anchor.iter().enumerate() {
            coords[i] = to_coord(v)?;
        }
        Self::from_parts(coords, ambient, mask)
    }

    /// A 0-cell.
    pub fn vertex(point: &[i64]) -> Result<Self> {
        Self::new(point, &[])
    }

    fn from_parts(anchor: [i32; MAX_DIM], ambient: usize, axes: u8) -> Result<Self> {
        for (a, &x) in anchor.iter().enumerate().take(ambient) {
            if axes & (1 << a) != 0 && x == i32::MAX {
                return Err(Error::Overflow(format!(
                    "cell extent along axis {} leaves the coordinate range",
                    a + 1
                )));
            }
        }
        Ok(Self {
            anchor,
            ambient: ambient as u8,
            axes,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient as usize
    }

    pub fn dim(&self) -> usize {
        self.axes.count_ones() as usize
    }

    pub fn anchor(&self) -> &[i32] {
        &self.anchor[..self.ambient as usize]
    }

    pub fn coord(&self, i: usize) -> i64 {
        i64::from(self.anchor[i])
    }

    /// Bitmask of the spanned axes (bit `a` set iff axis `a` is spanned).
    pub fn axis_mask(&self) -> u8 {
        self.axes
    }

    pub fn has_axis(&self, axis: usize) -> bool {
        axis < MAX_DIM && self.axes & (1 << axis) != 0
    }

    /// Spanned axes, ascending, 0-based.
    pub fn axes(&self) -> impl Iterator<Item = usize> + Clone + '_ {
        let mask = self.axes;
        (0..self.ambient as usize).filter(move |a| mask & (1 << a) != 0)
    }

    /// Closed interval `[lo, hi]` covered along coordinate `i`.
    pub fn bounds(&self, i: usize) -> (i64, i64) {
        let lo = self.coord(i);
        (lo, lo + i64::from(self.has_axis(i)))
    }

    fn with(&self, anchor: [i32; MAX_DIM], axes: u8) -> Self {
        Self {
            anchor,
            ambient: self.ambient,
            axes,
        }
    }

    /// The facet obtained by dropping `axis` at offset 0 (`upper = false`) or 1.
    ///
    /// Panics if `axis` is not spanned by the cell.
    pub fn facet(&self, axis: usize, upper: bool) -> Self {
        assert!(self.has_axis(axis), "axis {axis} is not spanned");
        let mut anchor = self.anchor;
        if upper {
            // cannot overflow: construction guarantees anchor < i32::MAX on spanned axes
            anchor[axis] += 1;
        }
        self.with(anchor, self.axes & !(1 << axis))
    }

    /// The 2k facets, in order: for each spanned axis ascending, offset 0 then 1.
    pub fn boundary_cells(&self) -> Result<Vec<Self>> {
        Ok(self
            .boundary_with_signs()?
            .into_iter()
            .map(|(c, _)| c)
            .collect())
    }

    /// Facets with their incidence coefficients in the oriented cubical
    /// boundary: dropping the i-th spanned axis at offset `d` carries sign
    /// `(-1)^i` for `d = 1` and `-(-1)^i` for `d = 0`.
    pub fn boundary_with_signs(&self) -> Result<Vec<(Self, i8)>> {
        if self.dim() == 0 {
            return Err(Error::VertexHasNoBoundary);
        }
        let mut out = Vec::with_capacity(2 * self.dim());
        for (i, axis) in self.axes().enumerate() {
            let sign: i8 = if i % 2 == 0 { 1 } else { -1 };
            out.push((self.facet(axis, false), -sign));
            out.push((self.facet(axis, true), sign));
        }
        Ok(out)
    }

    /// Incidence coefficient of `facet` in the boundary of `self`, or 0.
    pub fn incidence(&self, facet: &Self) -> i8 {
        if facet.dim() + 1 != self.dim() || !self.contains(facet) {
            return 0;
        }
        let dropped = self.axes & !facet.axes;
        let axis = dropped.trailing_zeros() as usize;
        let position = self.axes().position(|a| a == axis).unwrap_or(0);
        let sign: i8 = if position % 2 == 0 { 1 } else { -1 };
        if facet.anchor[axis] == self.anchor[axis] {
            -sign
        } else {
            sign
        }
    }

    /// Every face of the closed cell, including the cell itself (3^k cells).
    pub fn faces(&self) -> Vec<Self> {
        let axes: Vec<usize> = self.axes().collect();
        let mut out = Vec::with_capacity(3usize.pow(axes.len() as u32));
        // each spanned axis is kept, dropped low, or dropped high
        let total = 3usize.pow(axes.len() as u32);
        for code in 0..total {
            let mut c = code;
            let mut anchor = self.anchor;
            let mut mask = self.axes;
            for &a in &axes {
                match c % 3 {
                    0 => {}
                    1 => mask &= !(1 << a),
                    _ => {
                        mask &= !(1 << a);
                        anchor[a] += 1;
                    }
                }
                c /= 3;
            }
            out.push(self.with(anchor, mask));
        }
        out
    }

    /// Faces of exactly dimension `j`.
    pub fn faces_of_dim(&self, j: usize) -> Vec<Self> {
        self.faces().into_iter().filter(|f| f.dim() == j).collect()
    }

    pub fn vertices(&self) -> Vec<Self> {
        self.faces_of_dim(0)
    }

    /// Point-set containment of closed cells.
    pub fn contains(&self, other: &Self) -> bool {
        if self.ambient != other.ambient {
            return false;
        }
        (0..self.ambient_dim()).all(|i| {
            let (lo, hi) = self.bounds(i);
            let (olo, ohi) = other.bounds(i);
            lo <= olo && ohi <= hi
        })
    }

    /// Intersection of the two closed cells, which is again a cell when nonempty.
    pub fn intersection(&self, other: &Self) -> Option<Self> {
        if self.ambient != other.ambient {
            return None;
        }
        let mut anchor = [0i32; MAX_DIM];
        let mut mask = 0u8;
        for (i, slot) in anchor.iter_mut().enumerate().take(self.ambient_dim()) {
            let (lo, hi) = self.bounds(i);
            let (olo, ohi) = other.bounds(i);
            let a = lo.max(olo);
            let b = hi.min(ohi);
            if a > b {
                return None;
            }
            *slot = a as i32;
            if b > a {
                mask |= 1 << i;
            }
        }
        Some(self.with(anchor, mask))
    }

    /// All j-cells of the full cubulation having `self` as a face.
    ///
    /// There are `C(n-k, j-k) * 2^(j-k)` of them.
    pub fn cofaces(&self, j: usize) -> Result<Vec<Self>> {
        let k = self.dim();
        let n = self.ambient_dim();
        if j <= k || j > n {
            return Err(Error::InvalidArgument(format!(
                "coface dimension {j} must satisfy {k} < j <= {n}"
            )));
        }
        let free: Vec<usize> = (0..n).filter(|a| !self.has_axis(*a)).collect();
        let extra = j - k;
        let mut out = Vec::new();
        for subset in 0u32..(1 << free.len()) {
            if subset.count_ones() as usize != extra {
                continue;
            }
            let chosen: Vec<usize> = free
                .iter()
                .enumerate()
                .filter(|(i, _)| subset & (1 << i) != 0)
                .map(|(_, &a)| a)
                .collect();
            for shifts in 0u32..(1 << extra) {
                let mut anchor = self.anchor;
                let mut mask = self.axes;
                for (i, &a) in chosen.iter().enumerate() {
                    if shifts & (1 << i) != 0 {
                        anchor[a] = anchor[a].checked_sub(1).ok_or_else(|| {
                            Error::Overflow(format!(
                                "coface below coordinate range on axis {}",
                                a + 1
                            ))
                        })?;
                    }
                    mask |= 1 << a;
                }
                out.push(Self::from_parts(anchor, n, mask)?);
            }
        }
        Ok(out)
    }

    /// The `m^k` cells of the lattice refined by `m` that tile this cell.
    pub fn subdivide(&self, m: u32) -> Result<Vec<Self>> {
        if m < 2 {
            return Err(Error::InvalidArgument(format!(
                "subdivision factor must be at least 2, got {m}"
            )));
        }
        let mut base = self.anchor;
        for (i, b) in base.iter_mut().enumerate().take(self.ambient_dim()) {
            *b = to_coord(self.coord(i) * i64::from(m))?;
        }
        let axes: Vec<usize> = self.axes().collect();
        let count = (m as usize).pow(axes.len() as u32);
        let mut out = Vec::with_capacity(count);
        for code in 0..count {
            let mut c = code;
            let mut anchor = base;
            for &a in &axes {
                let off = (c % m as usize) as i64;
                anchor[a] = to_coord(i64::from(base[a]) + off)?;
                c /= m as usize;
            }
            out.push(Self::from_parts(anchor, self.ambient_dim(), self.axes)?);
        }
        Ok(out)
    }

    pub fn translate(&self, offset: &[i64]) -> Result<Self> {
        if offset.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                found: offset.len(),
            });
        }
        let mut anchor = self.anchor;
        for (i, &d) in offset.iter().enumerate() {
            anchor[i] = to_coord(self.coord(i) + d)?;
        }
        Self::from_parts(anchor, self.ambient_dim(), self.axes)
    }

    /// Projects out coordinate `coord`, removing it from the axes if spanned.
    pub fn drop_coordinate(&self, coord: usize) -> Result<Self> {
        let n = self.ambient_dim();
        if coord >= n || n == 1 {
            return Err(Error::InvalidArgument(format!(
                "cannot drop coordinate {} of a cell in dimension {n}",
                coord + 1
            )));
        }
        let mut anchor = [0i32; MAX_DIM];
        let mut mask = 0u8;
        let mut j = 0;
        for i in 0..n {
            if i == coord {
                continue;
            }
            anchor[j] = self.anchor[i];
            if self.has_axis(i) {
                mask |= 1 << j;
            }
            j += 1;
        }
        Ok(Self {
            anchor,
            ambient: (n - 1) as u8,
            axes: mask,
        })
    }

    /// Appends a coordinate at `level`; the new axis is spanned when `spanning`.
    pub fn lift(&self, level: i64, spanning: bool) -> Result<Self> {
        let n = self.ambient_dim();
        if n >= MAX_DIM {
            return Err(Error::InvalidArgument(format!(
                "cannot lift beyond dimension {MAX_DIM}"
            )));
        }
        let mut anchor = self.anchor;
        anchor[n] = to_coord(level)?;
        let mask = if spanning {
            self.axes | (1 << n)
        } else {
            self.axes
        };
        Self::from_parts(anchor, n + 1, mask)
    }
}

impl Hash for LatticeCell {
    fn hash<H: Hasher>(&self, state: &mut H) {
        // one write instead of one per field keeps SipHash cheap
        let mut buf = [0u8; 4 * MAX_DIM + 2];
        for (chunk, x) in buf.chunks_exact_mut(4).zip(self.anchor) {
            chunk.copy_from_slice(&x.to_le_bytes());
        }
        buf[4 * MAX_DIM] = self.ambient;
        buf[4 * MAX_DIM + 1] = self.axes;
        state.write(&buf);
    }
}

impl Ord for LatticeCell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ambient
            .cmp(&other.ambient)
            .then_with(|| self.anchor().cmp(other.anchor()))
            .then_with(|| self.axes().cmp(other.axes()))
    }
}

impl PartialOrd for LatticeCell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LatticeCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.anchor().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(" :")?;
        for a in self.axes() {
            write!(f, " {}", a + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for LatticeCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cell({self})")
    }
}

pub fn boundary_cells(cell: &LatticeCell) -> Result<Vec<LatticeCell>> {
    cell.boundary_cells()
}

pub fn cofaces(cell: &LatticeCell, j: usize, ctx: &LatticeContext) -> Result<Vec<LatticeCell>> {
    if cell.ambient_dim() != ctx.ambient_dim {
        return Err(Error::DimensionMismatch {
            expected: ctx.ambient_dim,
            found: cell.ambient_dim(),
        });
    }
    cell.cofaces(j)
}

pub fn subdivide_cell(cell: &LatticeCell, m: u32) -> Result<Vec<LatticeCell>> {
    cell.subdivide(m)
}

pub fn cells_adjacent(a: &LatticeCell, b: &LatticeCell) -> Result<Adjacency> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: a.ambient_dim(),
            found: b.ambient_dim(),
        });
    }
    if a == b {
        return Ok(Adjacency::Equal);
    }
    Ok(match a.intersection(b) {
        None => Adjacency::Disjoint,
        Some(c) => Adjacency::SharedFace { dim: c.dim() },
    })
}
