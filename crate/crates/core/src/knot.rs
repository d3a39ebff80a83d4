//! Cubical complexes and cubical knots.
//!
//! A [`KnotDiagram`] is a set of k-cells in `Z^(k+2)`: closed polygons made of
//! lattice edges in `Z^3`, or closed surfaces made of lattice squares in `Z^4`.
//! Validation certifies that the cells form an embedded sphere:
//!
//! * every (k-1)-face lies in exactly two cells,
//! * for surfaces, the link of every vertex is a single cycle,
//! * the cells are connected through shared (k-1)-faces,
//! * for surfaces, `chi = 2` and a coherent orientation exists.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::lattice::{LatticeCell, LatticeContext};

/// A finite set of k-cells sharing one lattice context.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CellComplex {
    ctx: LatticeContext,
    dim: usize,
    cells: BTreeSet<LatticeCell>,
}

impl CellComplex {
    /// Builds a complex, rejecting duplicates and cells of the wrong shape.
    pub fn new(
        ctx: LatticeContext,
        dim: usize,
        cells: impl IntoIterator<Item = LatticeCell>,
    ) -> Result<Self> {
        if dim > ctx.ambient_dim {
            return Err(Error::InvalidArgument(format!(
                "cell dimension {dim} exceeds ambient dimension {}",
                ctx.ambient_dim
            )));
        }
        let mut set = BTreeSet::new();
        for c in cells {
            check_shape(&ctx, dim, &c)?;
            if !set.insert(c) {
                return Err(Error::DuplicateCell(c));
            }
        }
        Ok(Self {
            ctx,
            dim,
            cells: set,
        })
    }

    /// Builds a complex from a set that already satisfies the shape invariants.
    pub(crate) fn from_set(ctx: LatticeContext, dim: usize, cells: BTreeSet<LatticeCell>) -> Self {
        debug_assert!(cells.iter().all(|c| check_shape(&ctx, dim, c).is_ok()));
        Self { ctx, dim, cells }
    }

    pub fn ctx(&self) -> &LatticeContext {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cells(&self) -> &BTreeSet<LatticeCell> {
        &self.cells
    }

    pub fn into_cells(self) -> BTreeSet<LatticeCell> {
        self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, c: &LatticeCell) -> bool {
        self.cells.contains(c)
    }

    pub fn iter(&self) -> impl Iterator<Item = &LatticeCell> {
        self.cells.iter()
    }

    /// All faces of all cells, grouped by dimension.
    pub fn closure(&self) -> Closure {
        let mut by_dim = vec![BTreeSet::new(); self.dim + 1];
        for c in &self.cells {
            for f in c.faces() {
                by_dim[f.dim()].insert(f);
            }
        }
        Closure { by_dim }
    }

    /// `V - E + F - ...` over the closure.
    pub fn euler_characteristic(&self) -> i64 {
        self.closure().euler_characteristic()
    }
}

impl fmt::Debug for CellComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CellComplex")
            .field("ambient_dim", &self.ctx.ambient_dim)
            .field("scale", &self.ctx.scale)
            .field("dim", &self.dim)
            .field("cells", &self.cells.len())
            .finish()
    }
}

fn check_shape(ctx: &LatticeContext, dim: usize, c: &LatticeCell) -> Result<()> {
    if c.ambient_dim() != ctx.ambient_dim {
        return Err(Error::DimensionMismatch {
            expected: ctx.ambient_dim,
            found: c.ambient_dim(),
        });
    }
    if c.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: c.dim(),
        });
    }
    Ok(())
}

/// Closure of a complex: every face of every cell, by dimension.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Closure {
    by_dim: Vec<BTreeSet<LatticeCell>>,
}

impl Closure {
    pub fn of_dim(&self, j: usize) -> &BTreeSet<LatticeCell> {
        static EMPTY: BTreeSet<LatticeCell> = BTreeSet::new();
        self.by_dim.get(j).unwrap_or(&EMPTY)
    }

    pub fn contains(&self, c: &LatticeCell) -> bool {
        self.by_dim.get(c.dim()).is_some_and(|s| s.contains(c))
    }

    /// Number of faces per dimension, starting at vertices.
    pub fn counts(&self) -> Vec<usize> {
        self.by_dim.iter().map(BTreeSet::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim
            .iter()
            .enumerate()
            .map(|(d, s)| {
                if d % 2 == 0 {
                    s.len() as i64
                } else {
                    -(s.len() as i64)
                }
            })
            .sum()
    }
}

/// Closed-surface checks for a 2-complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceReport {
    /// Every edge lies in exactly two squares.
    pub edge_closed: bool,
    /// The link of every vertex is one cycle.
    pub vertex_regular: bool,
    /// The squares are connected through shared edges.
    pub connected: bool,
    pub components: usize,
    /// Edges whose square count differs from two, with that count.
    pub bad_edges: Vec<(LatticeCell, usize)>,
    pub bad_vertices: Vec<LatticeCell>,
}

impl SurfaceReport {
    pub fn is_valid(&self) -> bool {
        self.edge_closed && self.vertex_regular && self.connected
    }
}

/// Maps each (k-1)-face to the top cells containing it.
fn ridge_incidence(c: &CellComplex) -> HashMap<LatticeCell, Vec<LatticeCell>> {
    let mut map: HashMap<LatticeCell, Vec<LatticeCell>> = HashMap::new();
    if c.dim == 0 {
        return map;
    }
    for cell in &c.cells {
        for f in cell.boundary_cells().expect("dim >= 1") {
            map.entry(f).or_default().push(*cell);
        }
    }
    map
}

fn count_components(c: &CellComplex, ridges: &HashMap<LatticeCell, Vec<LatticeCell>>) -> usize {
    let index: HashMap<LatticeCell, usize> =
        c.cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let mut parent: Vec<usize> = (0..index.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for cells in ridges.values() {
        for pair in cells.windows(2) {
            let a = find(&mut parent, index[&pair[0]]);
            let b = find(&mut parent, index[&pair[1]]);
            if a != b {
                parent[a] = b;
            }
        }
    }
    (0..parent.len())
        .filter(|&i| find(&mut parent, i) == i)
        .count()
}

/// True when the squares of `squares` around vertex `v` form a single cycle
/// glued along edges through `v`.
pub(crate) fn link_is_cycle(v: &LatticeCell, squares: &[LatticeCell]) -> bool {
    if squares.is_empty() {
        return false;
    }
    // (edge, first square, second square) for the edges through v
    let mut by_edge: Vec<(LatticeCell, usize, usize)> = Vec::with_capacity(2 * squares.len());
    for (i, s) in squares.iter().enumerate() {
        for a in s.axes() {
            let e = s.facet(a, v.coord(a) != s.coord(a));
            if e.dim() != 1 || !e.contains(v) {
                continue;
            }
            match by_edge.iter_mut().find(|(x, _, _)| *x == e) {
                Some(entry) if entry.2 == usize::MAX => entry.2 = i,
                Some(_) => return false,
                None => by_edge.push((e, i, usize::MAX)),
            }
        }
    }
    let mut adj = vec![Vec::new(); squares.len()];
    for &(_, p, q) in &by_edge {
        if q == usize::MAX {
            return false;
        }
        adj[p].push(q);
        adj[q].push(p);
    }
    let mut seen = vec![false; squares.len()];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut reached = 1;
    while let Some(i) = stack.pop() {
        for &j in &adj[i] {
            if !seen[j] {
                seen[j] = true;
                reached += 1;
                stack.push(j);
            }
        }
    }
    reached == squares.len()
}

pub fn validate_closed_surface(c: &CellComplex) -> SurfaceReport {
    if c.dim != 2 {
        return SurfaceReport {
            edge_closed: false,
            vertex_regular: false,
            connected: false,
            components: 0,
            bad_edges: Vec::new(),
            bad_vertices: Vec::new(),
        };
    }
    surface_report(c, &ridge_incidence(c))
}

fn surface_report(
    c: &CellComplex,
    ridges: &HashMap<LatticeCell, Vec<LatticeCell>>,
) -> SurfaceReport {
    let mut bad_edges: Vec<(LatticeCell, usize)> = ridges
        .iter()
        .filter(|(_, v)| v.len() != 2)
        .map(|(e, v)| (*e, v.len()))
        .collect();
    bad_edges.sort();

    let mut at_vertex: HashMap<LatticeCell, Vec<LatticeCell>> = HashMap::new();
    for s in &c.cells {
        for v in s.vertices() {
            at_vertex.entry(v).or_default().push(*s);
        }
    }
    let mut bad_vertices: Vec<LatticeCell> = at_vertex
        .iter()
        .filter(|(v, sq)| !link_is_cycle(v, sq))
        .map(|(v, _)| *v)
        .collect();
    bad_vertices.sort();

    let components = count_components(c, ridges);
    SurfaceReport {
        edge_closed: bad_edges.is_empty(),
        vertex_regular: bad_vertices.is_empty(),
        connected: components == 1,
        components,
        bad_edges,
        bad_vertices,
    }
}

pub fn euler_characteristic(c: &CellComplex) -> i64 {
    c.euler_characteristic()
}

/// A coherent orientation of the top cells: a sign per cell such that every
/// (k-1)-face shared by two cells receives opposite induced orientations.
///
/// Components are explored in cell order, except that the component of
/// `root` (when given) is explored from `root`. Returns `None` when no
/// coherent assignment exists. Faces lying in other than two cells impose no
/// constraint.
pub fn orientation_from(
    c: &CellComplex,
    root: Option<&LatticeCell>,
) -> Option<BTreeMap<LatticeCell, i8>> {
    if c.dim == 0 {
        return Some(c.cells.iter().map(|v| (*v, 1)).collect());
    }
    orientation_with(c, &ridge_incidence(c), root)
}

fn orientation_with(
    c: &CellComplex,
    ridges: &HashMap<LatticeCell, Vec<LatticeCell>>,
    root: Option<&LatticeCell>,
) -> Option<BTreeMap<LatticeCell, i8>> {
    let mut sign: HashMap<LatticeCell, i8> = HashMap::with_capacity(c.len());
    let starts = root
        .filter(|r| c.contains(r))
        .into_iter()
        .chain(c.cells.iter());
    let mut queue = VecDeque::new();
    for start in starts {
        if sign.contains_key(start) {
            continue;
        }
        sign.insert(*start, 1);
        queue.push_back(*start);
        while let Some(s) = queue.pop_front() {
            let es = sign[&s];
            for (ridge, sigma) in s.boundary_with_signs().expect("dim >= 1") {
                let cells = &ridges[&ridge];
                if cells.len() != 2 {
                    continue;
                }
                let t = if cells[0] == s { cells[1] } else { cells[0] };
                let tau = t.incidence(&ridge);
                // es * sigma + et * tau = 0
                let want = -es * sigma * tau;
                match sign.get(&t) {
                    Some(&et) if et != want => return None,
                    Some(_) => {}
                    None => {
                        sign.insert(t, want);
                        queue.push_back(t);
                    }
                }
            }
        }
    }
    Some(sign.into_iter().collect())
}

pub fn is_orientable(c: &CellComplex) -> bool {
    orientation_from(c, None).is_some()
}

/// Outcome of [`validate_knot`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnotReport {
    pub dim: usize,
    /// Every (k-1)-face lies in exactly two cells.
    pub closed: bool,
    pub vertex_regular: bool,
    pub connected: bool,
    pub euler_characteristic: i64,
    pub orientable: bool,
    /// Human-readable reasons, empty iff the diagram is a sphere.
    pub failures: Vec<String>,
}

impl KnotReport {
    pub fn is_sphere(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for KnotReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_sphere() {
            write!(
                f,
                "valid {}-knot (χ={})",
                self.dim, self.euler_characteristic
            )
        } else {
            write!(f, "{}", self.failures.join("; "))
        }
    }
}

fn knot_report(c: &CellComplex) -> KnotReport {
    let dim = c.dim;
    let mut failures = Vec::new();
    let shape_ok = matches!((dim, c.ctx.ambient_dim), (1, 3) | (2, 4));
    if !shape_ok {
        failures.push(format!(
            "{dim}-complex in Z^{} is not a knot shape (expected edges in Z^3 or squares in Z^4)",
            c.ctx.ambient_dim
        ));
    }
    if c.is_empty() {
        failures.push("empty complex".into());
    }
    let chi = {
        let mut faces: HashSet<LatticeCell> = HashSet::with_capacity(4 * c.len());
        faces.extend(c.cells.iter().flat_map(|x| x.faces()));
        faces
            .iter()
            .map(|f| if f.dim() % 2 == 0 { 1i64 } else { -1 })
            .sum::<i64>()
    };
    let (closed, vertex_regular, connected, orientable) = match dim {
        2 => {
            let ridges = ridge_incidence(c);
            let s = surface_report(c, &ridges);
            if !s.edge_closed {
                let (e, n) = s.bad_edges[0];
                failures.push(format!(
                    "not edge-closed: {} edge(s) outside exactly two squares, e.g. [{e}] in {n}",
                    s.bad_edges.len()
                ));
            }
            if !s.vertex_regular {
                failures.push(format!(
                    "not vertex-regular: link at [{}] is not a single cycle",
                    s.bad_vertices[0]
                ));
            }
            if !s.connected && !c.is_empty() {
                failures.push(format!("disconnected: {} components", s.components));
            }
            if chi != 2 {
                failures.push(format!("χ={chi}, expected 2"));
            }
            let orientable = orientation_with(c, &ridges, None).is_some();
            if !orientable {
                failures.push("not orientable".into());
            }
            (s.edge_closed, s.vertex_regular, s.connected, orientable)
        }
        1 => {
            let ridges = ridge_incidence(c);
            let bad = ridges.iter().filter(|(_, v)| v.len() != 2).count();
            let components = count_components(c, &ridges);
            if bad > 0 {
                failures.push(format!("{bad} vertex(es) not of degree 2"));
            }
            if components != 1 && !c.is_empty() {
                failures.push(format!("disconnected: {components} components"));
            }
            (bad == 0, bad == 0, components == 1, true)
        }
        _ => {
            failures.push(format!("cells of dimension {dim} cannot form a knot"));
            (false, false, false, false)
        }
    };
    KnotReport {
        dim,
        closed,
        vertex_regular,
        connected,
        euler_characteristic: chi,
        orientable,
        failures,
    }
}

/// A cubical knot candidate: edges in `Z^3` or squares in `Z^4`.
///
/// The validation report and closure are computed once on first use.
#[derive(Clone)]
pub struct KnotDiagram {
    complex: CellComplex,
    report: OnceLock<KnotReport>,
    closure: OnceLock<Closure>,
}

impl KnotDiagram {
    pub fn new(complex: CellComplex) -> Result<Self> {
        match (complex.dim, complex.ctx.ambient_dim) {
            (1, 3) | (2, 4) => Ok(Self::from_complex(complex)),
            (k, n) => Err(Error::InvalidArgument(format!(
                "a knot diagram needs k = n - 2 with n in {{3, 4}}, got k = {k}, n = {n}"
            ))),
        }
    }

    /// Convenience constructor from a list of cells at the given scale.
    pub fn from_cells(scale: u32, cells: impl IntoIterator<Item = LatticeCell>) -> Result<Self> {
        let cells: Vec<LatticeCell> = cells.into_iter().collect();
        let first = cells
            .first()
            .ok_or_else(|| Error::InvalidArgument("no cells given".into()))?;
        let ctx = LatticeContext::new(first.ambient_dim(), scale)?;
        let dim = first.dim();
        Self::new(CellComplex::new(ctx, dim, cells)?)
    }

    pub(crate) fn from_complex(complex: CellComplex) -> Self {
        Self {
            complex,
            report: OnceLock::new(),
            closure: OnceLock::new(),
        }
    }

    pub(crate) fn with_cells(&self, cells: BTreeSet<LatticeCell>) -> Self {
        Self::from_complex(CellComplex::from_set(
            self.complex.ctx,
            self.complex.dim,
            cells,
        ))
    }

    pub fn complex(&self) -> &CellComplex {
        &self.complex
    }

    pub fn cells(&self) -> &BTreeSet<LatticeCell> {
        &self.complex.cells
    }

    pub fn ctx(&self) -> &LatticeContext {
        &self.complex.ctx
    }

    pub fn dim(&self) -> usize {
        self.complex.dim
    }

    pub fn len(&self) -> usize {
        self.complex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.complex.is_empty()
    }

    pub fn report(&self) -> &KnotReport {
        self.report.get_or_init(|| knot_report(&self.complex))
    }

    pub fn is_valid(&self) -> bool {
        self.report().is_sphere()
    }

    pub fn closure(&self) -> &Closure {
        self.closure.get_or_init(|| self.complex.closure())
    }

    pub fn translate(&self, offset: &[i64]) -> Result<Self> {
        let cells = self
            .cells()
            .iter()
            .map(|c| c.translate(offset))
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(self.with_cells(cells))
    }
}

impl PartialEq for KnotDiagram {
    fn eq(&self, other: &Self) -> bool {
        self.complex == other.complex
    }
}

impl Eq for KnotDiagram {}

impl fmt::Debug for KnotDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KnotDiagram")
            .field("complex", &self.complex)
            .finish()
    }
}

pub fn validate_knot(d: &KnotDiagram) -> &KnotReport {
    d.report()
}

/// Every top-dimensional cell of the cubulation whose closed point set meets
/// the knot.
///
/// A closed top cell meets a closed knot cell in a common face, which always
/// contains a lattice vertex, so the cofaces of the knot's vertices suffice.
pub fn build_neighborhood(d: &KnotDiagram) -> BTreeSet<LatticeCell> {
    let n = d.ctx().ambient_dim;
    let mut out = BTreeSet::new();
    for v in d.closure().of_dim(0) {
        out.extend(v.cofaces(n).expect("vertex cofaces of top dimension"));
    }
    out
}

/// How a top cell of the cubulation meets a knot.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IntersectionClass {
    Empty,
    Vertex,
    /// A single lattice edge (and its endpoints), no full square. For 1-knots
    /// this is a single knot edge.
    Edge,
    /// One top-dimensional knot cell and its faces.
    OneSquare,
    /// Two top-dimensional knot cells sharing a (k-1)-face.
    TwoAdjacentSquares,
    /// Three top-dimensional knot cells, pairwise sharing (k-1)-faces.
    ThreeChainedSquares,
    /// Anything else; carries the knot faces found inside the cell.
    Other(Vec<LatticeCell>),
}

impl IntersectionClass {
    pub fn is_tubular(&self) -> bool {
        !matches!(self, IntersectionClass::Empty | IntersectionClass::Other(_))
    }
}

/// Classifies the intersection of the closed top cell `q` with the knot.
pub fn classify_intersection(q: &LatticeCell, d: &KnotDiagram) -> IntersectionClass {
    let k = d.dim();
    let closure = d.closure();
    let inside: Vec<LatticeCell> = q
        .faces()
        .into_iter()
        .filter(|f| f.dim() <= k && closure.contains(f))
        .collect();
    if inside.is_empty() {
        return IntersectionClass::Empty;
    }
    let top: Vec<LatticeCell> = inside.iter().filter(|f| f.dim() == k).copied().collect();
    let mut witness = inside.clone();
    witness.sort();

    // the intersection must be exactly the closure of its top cells, or a
    // single lower-dimensional face with its own closure
    let generators: Vec<LatticeCell> = if top.is_empty() {
        let max_dim = inside.iter().map(LatticeCell::dim).max().unwrap_or(0);
        inside
            .iter()
            .filter(|f| f.dim() == max_dim)
            .copied()
            .collect()
    } else {
        top.clone()
    };
    let generated: BTreeSet<LatticeCell> = generators.iter().flat_map(|g| g.faces()).collect();
    let found: BTreeSet<LatticeCell> = inside.iter().copied().collect();
    if generated != found {
        return IntersectionClass::Other(witness);
    }

    if top.is_empty() {
        return match (generators.len(), generators[0].dim()) {
            (1, 0) => IntersectionClass::Vertex,
            (1, 1) => IntersectionClass::Edge,
            _ => IntersectionClass::Other(witness),
        };
    }
    if k == 1 {
        return match top.len() {
            1 => IntersectionClass::Edge,
            2 => IntersectionClass::TwoAdjacentSquares,
            _ => IntersectionClass::Other(witness),
        };
    }
    let facet_pair =
        |a: &LatticeCell, b: &LatticeCell| a.intersection(b).is_some_and(|c| c.dim() + 1 == k);
    match top.len() {
        1 => IntersectionClass::OneSquare,
        2 if facet_pair(&top[0], &top[1]) => IntersectionClass::TwoAdjacentSquares,
        3 if facet_pair(&top[0], &top[1])
            && facet_pair(&top[1], &top[2])
            && facet_pair(&top[0], &top[2]) =>
        {
            IntersectionClass::ThreeChainedSquares
        }
        _ => IntersectionClass::Other(witness),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TubularReport {
    pub tubular: bool,
    pub offending: Vec<(LatticeCell, IntersectionClass)>,
}

/// Checks that every cell of the neighborhood meets the knot in one of the
/// allowed configurations.
pub fn is_tubular(d: &KnotDiagram) -> TubularReport {
    let offending: Vec<(LatticeCell, IntersectionClass)> = build_neighborhood(d)
        .into_iter()
        .map(|q| {
            let class = classify_intersection(&q, d);
            (q, class)
        })
        .filter(|(_, class)| !class.is_tubular())
        .collect();
    TubularReport {
        tubular: offending.is_empty(),
        offending,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn sq(anchor: &[i64], axes: &[usize]) -> LatticeCell {
        LatticeCell::new(anchor, axes).unwrap()
    }

    #[test]
    fn cube_boundary_is_a_valid_sphere() {
        let s = fixtures::sphere();
        let surface = validate_closed_surface(s.complex());
        assert!(surface.is_valid());
        assert_eq!(s.complex().euler_characteristic(), 2);
        assert!(s.report().is_sphere());
        assert!(s.report().orientable);
    }

    #[test]
    fn single_square_is_not_edge_closed() {
        let c = CellComplex::new(
            LatticeContext::new(4, 1).unwrap(),
            2,
            [sq(&[0, 0, 0, 0], &[0, 1])],
        )
        .unwrap();
        let r = validate_closed_surface(&c);
        assert!(!r.edge_closed);
        assert_eq!(r.bad_edges.len(), 4);
        assert!(r.bad_edges.iter().all(|(_, n)| *n == 1));
    }

    #[test]
    fn disjoint_spheres_fail_only_connectivity() {
        let a = fixtures::sphere();
        let b = a.translate(&[5, 0, 0, 0]).unwrap();
        let cells = a.cells().iter().chain(b.cells()).copied();
        let c = CellComplex::new(*a.ctx(), 2, cells).unwrap();
        let r = validate_closed_surface(&c);
        assert!(r.edge_closed && r.vertex_regular);
        assert!(!r.connected);
        assert_eq!(r.components, 2);
    }

    #[test]
    fn pinched_spheres_fail_vertex_regularity() {
        let d = fixtures::pinched_spheres();
        let r = validate_closed_surface(d.complex());
        assert!(r.edge_closed);
        assert!(!r.vertex_regular);
        assert_eq!(
            r.bad_vertices,
            vec![LatticeCell::vertex(&[1, 1, 1, 0]).unwrap()]
        );
        assert!(!d.is_valid());
    }

    #[test]
    fn square_loop_is_a_valid_one_knot() {
        let d = fixtures::square_loop();
        assert_eq!(d.len(), 4);
        assert!(d.is_valid(), "{}", d.report());
        assert_eq!(d.complex().euler_characteristic(), 0);
    }

    #[test]
    fn duplicate_cells_rejected() {
        let c = sq(&[0, 0, 0, 0], &[0, 1]);
        let err = CellComplex::new(LatticeContext::new(4, 1).unwrap(), 2, [c, c]).unwrap_err();
        assert_eq!(err, Error::DuplicateCell(c));
    }

    #[test]
    fn wrong_shape_rejected() {
        let ctx = LatticeContext::new(4, 1).unwrap();
        let c = CellComplex::new(ctx, 1, [sq(&[0, 0, 0, 0], &[0])]).unwrap();
        assert!(KnotDiagram::new(c).is_err());
    }

    #[test]
    fn orientation_verdict_is_root_independent() {
        for d in [
            fixtures::sphere(),
            fixtures::torus(),
            fixtures::box_sphere([2, 1, 3]),
        ] {
            let base = orientation_from(d.complex(), None).is_some();
            for root in d.cells() {
                assert_eq!(orientation_from(d.complex(), Some(root)).is_some(), base);
            }
        }
    }

    #[test]
    fn orientation_satisfies_shared_edge_rule() {
        let d = fixtures::sphere();
        let map = orientation_from(d.complex(), None).unwrap();
        for (s, sigma) in map.iter() {
            for (e, inc) in s.boundary_with_signs().unwrap() {
                let other = d
                    .cells()
                    .iter()
                    .find(|t| *t != s && t.contains(&e))
                    .unwrap();
                assert_eq!(sigma * inc + map[other] * other.incidence(&e), 0);
            }
        }
    }

    #[test]
    fn empty_neighborhood_for_empty_complex() {
        let c = CellComplex::new(LatticeContext::new(4, 1).unwrap(), 2, []).unwrap();
        let d = KnotDiagram::new(c).unwrap();
        assert!(build_neighborhood(&d).is_empty());
        assert!(!d.is_valid());
    }

    #[test]
    fn single_square_neighborhood() {
        let square = sq(&[0, 0, 0, 0], &[1, 2]);
        let c = CellComplex::new(LatticeContext::new(4, 1).unwrap(), 2, [square]).unwrap();
        let d = KnotDiagram::new(c).unwrap();
        let nb = build_neighborhood(&d);
        // hypercubes containing the whole square: its 4 cofaces
        let containing: BTreeSet<LatticeCell> =
            nb.iter().filter(|q| q.contains(&square)).copied().collect();
        let cofaces: BTreeSet<LatticeCell> = square.cofaces(4).unwrap().into_iter().collect();
        assert_eq!(containing, cofaces);
        assert_eq!(containing.len(), 4);
        for q in &containing {
            assert_eq!(classify_intersection(q, &d), IntersectionClass::OneSquare);
        }
        // brute force over a window: closed 4-cubes meeting the closed square
        let mut brute = BTreeSet::new();
        for x in -2..=2 {
            for y in -2..=2 {
                for z in -2..=2 {
                    for w in -2..=2 {
                        let q = sq(&[x, y, z, w], &[0, 1, 2, 3]);
                        if q.intersection(&square).is_some() {
                            brute.insert(q);
                        }
                    }
                }
            }
        }
        assert_eq!(nb, brute);
        assert_eq!(nb.len(), 2 * 3 * 3 * 2);
    }

    #[test]
    fn classify_examples() {
        let d = fixtures::sphere();
        // 4-cube beside the bottom face in the fourth direction
        let q = sq(&[0, 0, 0, 0], &[0, 1, 2, 3]);
        // contains the whole cube boundary
        assert!(matches!(
            classify_intersection(&q, &d),
            IntersectionClass::Other(_)
        ));
        let corner = sq(&[1, 1, 1, 0], &[0, 1, 2, 3]);
        assert_eq!(
            classify_intersection(&corner, &d),
            IntersectionClass::Vertex
        );
        let far = sq(&[5, 5, 5, 5], &[0, 1, 2, 3]);
        assert_eq!(classify_intersection(&far, &d), IntersectionClass::Empty);
        let edge = sq(&[1, 1, 0, 0], &[0, 1, 2, 3]);
        assert_eq!(classify_intersection(&edge, &d), IntersectionClass::Edge);
    }

    #[test]
    fn two_squares_sharing_a_vertex_are_rejected() {
        // squares meeting only at the origin inside one 4-cube
        let a = sq(&[0, 0, 0, 0], &[0, 1]);
        let b = sq(&[0, 0, 0, 0], &[2, 3]);
        let c = CellComplex::new(LatticeContext::new(4, 1).unwrap(), 2, [a, b]).unwrap();
        let d = KnotDiagram::new(c).unwrap();
        let q = sq(&[0, 0, 0, 0], &[0, 1, 2, 3]);
        match classify_intersection(&q, &d) {
            IntersectionClass::Other(w) => {
                assert!(w.contains(&a) && w.contains(&b));
            }
            other => panic!("expected Other, got {other:?}"),
        }
    }

    #[test]
    fn middle_of_a_flat_face_is_one_square() {
        let d = fixtures::box_sphere([3, 3, 1]);
        let d = d.translate(&[-1, -1, 0, 0]).unwrap();
        let q = sq(&[0, 0, 1, 0], &[0, 1, 2, 3]);
        assert_eq!(classify_intersection(&q, &d), IntersectionClass::OneSquare);
    }

    #[test]
    fn square_plus_stray_vertex_is_other() {
        let a = sq(&[0, 0, 0, 0], &[0, 1]);
        let b = sq(&[1, 1, 1, 1], &[0, 1]);
        let c = CellComplex::new(LatticeContext::new(4, 1).unwrap(), 2, [a, b]).unwrap();
        let d = KnotDiagram::new(c).unwrap();
        let q = sq(&[0, 0, 0, 0], &[0, 1, 2, 3]);
        match classify_intersection(&q, &d) {
            IntersectionClass::Other(w) => {
                assert!(w.contains(&a));
                assert!(w.contains(&LatticeCell::vertex(&[1, 1, 1, 1]).unwrap()));
            }
            other => panic!("expected Other, got {other:?}"),
        }
    }

    #[test]
    fn neighborhood_empty_iff_classified_empty() {
        let d = fixtures::sphere();
        let nb = build_neighborhood(&d);
        for q in &nb {
            assert_ne!(classify_intersection(q, &d), IntersectionClass::Empty);
        }
        for x in -2..=2 {
            for w in -2..=2 {
                let q = sq(&[x, 0, 0, w], &[0, 1, 2, 3]);
                let empty = classify_intersection(&q, &d) == IntersectionClass::Empty;
                assert_eq!(empty, !nb.contains(&q));
            }
        }
    }
}
