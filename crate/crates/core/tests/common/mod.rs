//! Brute-force reference implementations shared by the integration tests.
//! Nothing here calls the library's face, closure or move code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use cubeknot::{validate_knot, KnotDiagram, LatticeCell};

pub fn cell(anchor: &[i64], axes: &[usize]) -> LatticeCell {
    LatticeCell::new(anchor, axes).unwrap()
}

fn anchor_of(c: &LatticeCell) -> Vec<i64> {
    (0..c.ambient_dim()).map(|i| c.coord(i)).collect()
}

fn axes_of(c: &LatticeCell) -> Vec<usize> {
    (0..c.ambient_dim()).filter(|&i| c.has_axis(i)).collect()
}

/// All faces of a closed cell, itself included, by choosing for each spanned
/// axis whether to keep it or pin it at its low or high end.
pub fn faces(c: &LatticeCell) -> Vec<LatticeCell> {
    let anchor = anchor_of(c);
    let axes = axes_of(c);
    let mut out = Vec::new();
    let total = 3usize.pow(axes.len() as u32);
    for code in 0..total {
        let mut a = anchor.clone();
        let mut keep = Vec::new();
        let mut x = code;
        for &ax in &axes {
            match x % 3 {
                0 => keep.push(ax),
                1 => {}
                _ => a[ax] += 1,
            }
            x /= 3;
        }
        out.push(cell(&a, &keep));
    }
    out
}

pub fn facets(c: &LatticeCell) -> Vec<LatticeCell> {
    let anchor = anchor_of(c);
    let axes = axes_of(c);
    let mut out = Vec::new();
    for &ax in &axes {
        let rest: Vec<usize> = axes.iter().copied().filter(|&b| b != ax).collect();
        for off in 0..2 {
            let mut a = anchor.clone();
            a[ax] += off;
            out.push(cell(&a, &rest));
        }
    }
    out
}

pub fn closure(cells: &BTreeSet<LatticeCell>) -> BTreeSet<LatticeCell> {
    cells.iter().flat_map(faces).collect()
}

pub fn euler(cells: &BTreeSet<LatticeCell>) -> i64 {
    closure(cells)
        .iter()
        .map(|f| {
            if axes_of(f).len().is_multiple_of(2) {
                1
            } else {
                -1
            }
        })
        .sum()
}

/// Connected through shared facets, no facet in three cells, and `chi = 1`.
pub fn is_disk(cells: &[LatticeCell]) -> bool {
    if cells.is_empty() {
        return false;
    }
    let mut by_ridge: BTreeMap<LatticeCell, Vec<usize>> = BTreeMap::new();
    for (i, c) in cells.iter().enumerate() {
        for r in facets(c) {
            by_ridge.entry(r).or_default().push(i);
        }
    }
    if by_ridge.values().any(|v| v.len() > 2) {
        return false;
    }
    let mut seen = vec![false; cells.len()];
    let mut todo = vec![0];
    seen[0] = true;
    while let Some(i) = todo.pop() {
        for r in facets(&cells[i]) {
            for &j in &by_ridge[&r] {
                if !seen[j] {
                    seen[j] = true;
                    todo.push(j);
                }
            }
        }
    }
    seen.iter().all(|s| *s) && euler(&cells.iter().copied().collect()) == 1
}

/// Every (k+1)-cell in the bounding window, every nonempty proper subset A
/// of its boundary: keep (carrier, A) when A and its complement are disks,
/// the knot meets the closed carrier exactly in the closure of A, and the
/// exchanged diagram validates.
pub fn brute_force_moves(d: &KnotDiagram) -> BTreeSet<(LatticeCell, Vec<LatticeCell>)> {
    let n = d.ctx().ambient_dim;
    let k = d.dim();
    let knot_closure = closure(d.cells());
    let mut lo = vec![i64::MAX; n];
    let mut hi = vec![i64::MIN; n];
    for v in &knot_closure {
        for i in 0..n {
            lo[i] = lo[i].min(v.coord(i));
            hi[i] = hi[i].max(v.coord(i));
        }
    }
    let axis_sets: Vec<Vec<usize>> = (0u32..(1 << n))
        .filter(|m| m.count_ones() as usize == k + 1)
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
        .collect();
    let mut out = BTreeSet::new();
    let mut anchor = lo.iter().map(|x| x - 1).collect::<Vec<_>>();
    loop {
        for axes in &axis_sets {
            let carrier = cell(&anchor, axes);
            let fs = facets(&carrier);
            let carrier_faces: Vec<LatticeCell> = faces(&carrier)
                .into_iter()
                .filter(|f| axes_of(f).len() <= k)
                .collect();
            for mask in 1u32..(1 << fs.len()) - 1 {
                let a: Vec<LatticeCell> = (0..fs.len())
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| fs[i])
                    .collect();
                let b: Vec<LatticeCell> = (0..fs.len())
                    .filter(|i| mask & (1 << i) == 0)
                    .map(|i| fs[i])
                    .collect();
                let a_closure: BTreeSet<LatticeCell> = a.iter().flat_map(faces).collect();
                let contact_ok = carrier_faces
                    .iter()
                    .all(|f| knot_closure.contains(f) == a_closure.contains(f));
                if !contact_ok || !is_disk(&a) || !is_disk(&b) {
                    continue;
                }
                let mut cells = d.cells().clone();
                for c in &a {
                    cells.remove(c);
                }
                cells.extend(b.iter().copied());
                let result = KnotDiagram::from_cells(d.ctx().scale, cells).unwrap();
                if validate_knot(&result).is_sphere() {
                    let mut a = a;
                    a.sort();
                    out.insert((carrier, a));
                }
            }
        }
        // odometer over the window [lo - 1, hi]
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            anchor[i] += 1;
            if anchor[i] <= hi[i] {
                break;
            }
            anchor[i] = lo[i] - 1;
            i += 1;
        }
    }
}

/// Plain breadth-first distance between two diagrams, exploring every
/// diagram reachable in at most `max` moves from `from`.
pub fn plain_bfs_distance(from: &KnotDiagram, to: &KnotDiagram, max: usize) -> Option<usize> {
    let mut seen: BTreeSet<BTreeSet<LatticeCell>> = BTreeSet::new();
    seen.insert(from.cells().clone());
    let mut layer = vec![from.clone()];
    for depth in 0..=max {
        if layer.iter().any(|d| d.cells() == to.cells()) {
            return Some(depth);
        }
        let mut next = Vec::new();
        for d in &layer {
            for (carrier, a) in brute_force_moves(d) {
                let mut cells = d.cells().clone();
                for f in facets(&carrier) {
                    if a.contains(&f) {
                        cells.remove(&f);
                    } else {
                        cells.insert(f);
                    }
                }
                if seen.insert(cells.clone()) {
                    next.push(KnotDiagram::from_cells(d.ctx().scale, cells).unwrap());
                }
            }
        }
        layer = next;
    }
    None
}
