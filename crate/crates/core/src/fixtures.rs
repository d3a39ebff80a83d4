//! Built-in diagrams and cylinders used by tests and the `gen` command.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Result;
use crate::knot::{CellComplex, KnotDiagram};
use crate::lattice::{LatticeCell, LatticeContext};
use crate::slicer::{CylinderBuilder, SlicedComplex};

fn cell(anchor: &[i64], axes: &[usize]) -> LatticeCell {
    LatticeCell::new(anchor, axes).expect("fixture cell")
}

/// Unit 3-cube `[0,1]^3 x {0}` in `Z^4`, translated by `origin`.
pub fn unit_cube(origin: [i64; 4]) -> LatticeCell {
    cell(&origin, &[0, 1, 2])
}

/// Mod-2 boundary of a set of (k+1)-cells: the k-cells lying in an odd
/// number of them.
pub fn solid_boundary(solids: impl IntoIterator<Item = LatticeCell>) -> Result<KnotDiagram> {
    let mut count: BTreeMap<LatticeCell, usize> = BTreeMap::new();
    let mut ambient = None;
    for s in solids {
        ambient.get_or_insert(s.ambient_dim());
        for f in s.boundary_cells()? {
            *count.entry(f).or_default() += 1;
        }
    }
    let cells: BTreeSet<LatticeCell> = count
        .into_iter()
        .filter(|(_, n)| n % 2 == 1)
        .map(|(c, _)| c)
        .collect();
    let ambient = ambient.unwrap_or(4);
    let dim = cells
        .iter()
        .next()
        .map_or(ambient.saturating_sub(2), LatticeCell::dim);
    let ctx = LatticeContext::new(ambient, 1)?;
    KnotDiagram::new(CellComplex::new(ctx, dim, cells)?)
}

/// The six-square boundary of the unit cube at the origin of `Z^4`.
pub fn sphere() -> KnotDiagram {
    cube_sphere([0; 4])
}

pub fn cube_sphere(origin: [i64; 4]) -> KnotDiagram {
    solid_boundary([unit_cube(origin)]).expect("cube boundary")
}

/// Boundary of an `a x b x c` box of unit cubes in the first three coordinates.
pub fn box_sphere(size: [i64; 3]) -> KnotDiagram {
    let mut cubes = Vec::new();
    for x in 0..size[0] {
        for y in 0..size[1] {
            for z in 0..size[2] {
                cubes.push(unit_cube([x, y, z, 0]));
            }
        }
    }
    solid_boundary(cubes).expect("box boundary")
}

/// Boundary of the 3 x 3 x 1 block with the centre column removed: a torus.
pub fn torus() -> KnotDiagram {
    let mut cubes = Vec::new();
    for x in 0..3 {
        for y in 0..3 {
            if (x, y) != (1, 1) {
                cubes.push(unit_cube([x, y, 0, 0]));
            }
        }
    }
    solid_boundary(cubes).expect("torus boundary")
}

/// Two unit-cube boundaries touching in the single vertex `(1,1,1,0)`.
pub fn pinched_spheres() -> KnotDiagram {
    solid_boundary([unit_cube([0, 0, 0, 0]), unit_cube([1, 1, 1, 0])]).expect("pinched")
}

/// The four edges of the unit square in `Z^3`: the smallest 1-knot.
pub fn square_loop() -> KnotDiagram {
    solid_boundary([cell(&[0, 0, 0], &[0, 1])]).expect("square loop")
}

/// `S x [0, levels]` over the unit-cube sphere.
pub fn product_cylinder(levels: usize) -> SlicedComplex {
    let s = sphere();
    let mut b = CylinderBuilder::new(0);
    for _ in 0..levels {
        b = b.slab(&s);
    }
    b.build().expect("product cylinder")
}

/// Moves the unit-cube sphere one unit along the first axis at level 1,
/// through the solid made of the source and target cubes: slab `[0,1]`
/// carries the source, `[1,2]` the target.
pub fn shift_cylinder() -> SlicedComplex {
    CylinderBuilder::new(0)
        .slab(&sphere())
        .solid([unit_cube([0, 0, 0, 0]), unit_cube([1, 0, 0, 0])])
        .slab(&cube_sphere([1, 0, 0, 0]))
        .build()
        .expect("shift cylinder")
}

/// Two consecutive unit shifts: `[0,1]` source, level 1 collar, `[1,2]`
/// shifted once, level 2 collar, `[2,3]` shifted twice.
pub fn double_shift_cylinder() -> SlicedComplex {
    CylinderBuilder::new(0)
        .slab(&sphere())
        .solid([unit_cube([0, 0, 0, 0]), unit_cube([1, 0, 0, 0])])
        .slab(&cube_sphere([1, 0, 0, 0]))
        .solid([unit_cube([1, 0, 0, 0]), unit_cube([2, 0, 0, 0])])
        .slab(&cube_sphere([2, 0, 0, 0]))
        .build()
        .expect("double shift cylinder")
}

/// A 2 x 2 x 2 box sphere that grows a bump on two opposite faces at level 1.
/// The unchanged squares form a band shared by both slices, so the level
/// solid has two components joined through it.
pub fn two_bump_cylinder() -> SlicedComplex {
    let base = box_sphere([2, 2, 2]);
    let bump_low = unit_cube([0, 0, -1, 0]);
    let bump_high = unit_cube([1, 1, 2, 0]);
    let mut cubes = Vec::new();
    for x in 0..2 {
        for y in 0..2 {
            for z in 0..2 {
                cubes.push(unit_cube([x, y, z, 0]));
            }
        }
    }
    cubes.push(bump_low);
    cubes.push(bump_high);
    let grown = solid_boundary(cubes).expect("grown box");
    CylinderBuilder::new(0)
        .slab(&base)
        .solid([bump_low, bump_high])
        .slab(&grown)
        .build()
        .expect("two bump cylinder")
}

/// A cylinder whose only slab is two spheres pinched at a vertex.
pub fn pinched_cylinder() -> SlicedComplex {
    CylinderBuilder::new(0)
        .slab(&pinched_spheres())
        .build()
        .expect("pinched cylinder")
}
