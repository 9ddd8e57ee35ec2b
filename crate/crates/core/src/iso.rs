//! Isomorphism search between finite truncated complexes.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::morphism::SSetMorphism;
use crate::sset::{CellRef, FinSSet, NormalSimplex};

/// Search for a simplicial isomorphism commuting with faces and
/// degeneracies up to the common truncation. Returns the
/// lexicographically least isomorphism (in the canonical cell order of
/// the left complex, candidates ordered by right-hand cell index), or
/// `None` if the complexes are not isomorphic. Complexes of different
/// truncations are never isomorphic as truncated objects.
pub fn iso_check(x: &Arc<FinSSet>, y: &Arc<FinSSet>) -> Option<SSetMorphism> {
    if x.truncation() != y.truncation() {
        return None;
    }
    let trunc = x.truncation();
    for k in 0..=trunc {
        if x.cell_count(k) != y.cell_count(k) {
            return None;
        }
    }

    // Invariant refinement on the disjoint union, so signatures are
    // comparable across the two complexes.
    let sig_x = refine_signatures(x, y);
    let (sig_left, sig_right) = sig_x;

    let mut assignment: Vec<Vec<usize>> = (0..=trunc)
        .map(|k| vec![usize::MAX; x.cell_count(k)])
        .collect();
    let mut used: Vec<Vec<bool>> = (0..=trunc).map(|k| vec![false; y.cell_count(k)]).collect();
    let order: Vec<CellRef> = x.all_cells().collect();

    fn compatible(
        x: &FinSSet,
        y: &FinSSet,
        assignment: &[Vec<usize>],
        cell: CellRef,
        candidate: usize,
    ) -> bool {
        if cell.dim == 0 {
            return true;
        }
        let target = CellRef {
            dim: cell.dim,
            index: candidate,
        };
        for (i, face) in x.face_table(cell).iter().enumerate() {
            let mapped_cell = assignment[face.cell.dim][face.cell.index];
            let image = NormalSimplex {
                degeneracies: face.degeneracies.clone(),
                cell: CellRef {
                    dim: face.cell.dim,
                    index: mapped_cell,
                },
            };
            if y.face(target, i) != &image {
                return false;
            }
        }
        true
    }

    fn search(
        x: &FinSSet,
        y: &FinSSet,
        order: &[CellRef],
        pos: usize,
        sig_left: &[Vec<usize>],
        sig_right: &[Vec<usize>],
        assignment: &mut Vec<Vec<usize>>,
        used: &mut Vec<Vec<bool>>,
    ) -> bool {
        let Some(&cell) = order.get(pos) else {
            return true;
        };
        for candidate in 0..y.cell_count(cell.dim) {
            if used[cell.dim][candidate]
                || sig_left[cell.dim][cell.index] != sig_right[cell.dim][candidate]
            {
                continue;
            }
            if !compatible(x, y, assignment, cell, candidate) {
                continue;
            }
            assignment[cell.dim][cell.index] = candidate;
            used[cell.dim][candidate] = true;
            if search(x, y, order, pos + 1, sig_left, sig_right, assignment, used) {
                return true;
            }
            assignment[cell.dim][cell.index] = usize::MAX;
            used[cell.dim][candidate] = false;
        }
        false
    }

    if !search(
        x,
        y,
        &order,
        0,
        &sig_left,
        &sig_right,
        &mut assignment,
        &mut used,
    ) {
        return None;
    }

    let images = (0..=trunc)
        .map(|k| {
            (0..x.cell_count(k))
                .map(|i| {
                    NormalSimplex::nondegenerate(CellRef {
                        dim: k,
                        index: assignment[k][i],
                    })
                })
                .collect()
        })
        .collect();
    let morphism =
        SSetMorphism::new(x.clone(), y.clone(), images).expect("search produces a valid map");
    debug_assert!(morphism.validate().is_ok());
    debug_assert!(morphism.is_isomorphism());
    Some(morphism)
}

/// Two rounds of degree-sequence style refinement: a cell's signature is
/// rebuilt from its face words and the signatures of its face cells.
fn refine_signatures(x: &FinSSet, y: &FinSSet) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let trunc = x.truncation();
    let mut left: Vec<Vec<usize>> = (0..=trunc).map(|k| vec![k; x.cell_count(k)]).collect();
    let mut right: Vec<Vec<usize>> = (0..=trunc).map(|k| vec![k; y.cell_count(k)]).collect();
    for _round in 0..2 {
        // joint relabeling so ids mean the same thing on both sides
        let mut table: BTreeMap<(usize, Vec<(usize, Vec<usize>, usize)>), usize> = BTreeMap::new();
        let next = |key: (usize, Vec<(usize, Vec<usize>, usize)>),
                    table: &mut BTreeMap<(usize, Vec<(usize, Vec<usize>, usize)>), usize>| {
            let id = table.len();
            *table.entry(key).or_insert(id)
        };
        let describe = |complex: &FinSSet, sig: &[Vec<usize>], cell: CellRef| {
            let mut faces: Vec<(usize, Vec<usize>, usize)> = complex
                .face_table(cell)
                .iter()
                .enumerate()
                .map(|(i, f)| (i, f.degeneracies.clone(), sig[f.cell.dim][f.cell.index]))
                .collect();
            faces.sort();
            (sig[cell.dim][cell.index], faces)
        };
        let mut new_left: Vec<Vec<usize>> = (0..=trunc)
            .map(|k| vec![0usize; x.cell_count(k)])
            .collect();
        let mut new_right: Vec<Vec<usize>> = (0..=trunc)
            .map(|k| vec![0usize; y.cell_count(k)])
            .collect();
        for cell in x.all_cells() {
            let key = describe(x, &left, cell);
            new_left[cell.dim][cell.index] = next(key, &mut table);
        }
        for cell in y.all_cells() {
            let key = describe(y, &right, cell);
            new_right[cell.dim][cell.index] = next(key, &mut table);
        }
        left = new_left;
        right = new_right;
    }
    (left, right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Result;
    use crate::sset::{standard_complex, StandardKind};
    use alloc::string::String;

    #[test]
    fn identity_iso_on_simplex() {
        let x = Arc::new(standard_complex(StandardKind::Simplex, 2, 2).unwrap());
        let iso = iso_check(&x, &x).expect("isomorphic to itself");
        assert!(iso.is_isomorphism());
        // lexicographically least iso on equal complexes is the identity
        for cell in x.all_cells() {
            assert_eq!(iso.image_of_cell(cell).cell, cell);
        }
    }

    fn graph_complex(edges: &[(usize, usize)], vertices: usize) -> Result<Arc<FinSSet>> {
        let mut names = vec![Vec::new(); 2];
        let mut faces = vec![Vec::new(); 2];
        for v in 0..vertices {
            names[0].push(alloc::format!("v{v}"));
            faces[0].push(Vec::new());
        }
        for (t, (a, b)) in edges.iter().enumerate() {
            names[1].push(alloc::format!("e{t}"));
            faces[1].push(vec![
                NormalSimplex::nondegenerate(CellRef { dim: 0, index: *b }),
                NormalSimplex::nondegenerate(CellRef { dim: 0, index: *a }),
            ]);
        }
        Ok(Arc::new(FinSSet::from_parts(1, names, faces, None)?))
    }

    #[test]
    fn same_counts_different_structure() {
        // a wedge of two edges vs a doubled edge plus an isolated vertex
        let wedge = graph_complex(&[(0, 1), (1, 2)], 3).unwrap();
        let doubled = graph_complex(&[(0, 1), (0, 1)], 3).unwrap();
        assert_eq!(wedge.cell_counts(), doubled.cell_counts());
        assert!(iso_check(&wedge, &doubled).is_none());
    }

    #[test]
    fn relabeled_graph_found() {
        let a = graph_complex(&[(0, 1), (1, 2)], 3).unwrap();
        let b = graph_complex(&[(1, 2), (0, 1)], 3).unwrap();
        let iso = iso_check(&a, &b).expect("relabelled wedge is isomorphic");
        iso.validate().unwrap();
    }

    #[test]
    fn different_truncation_is_never_isomorphic() {
        let x = Arc::new(standard_complex(StandardKind::Simplex, 1, 1).unwrap());
        let y = Arc::new(standard_complex(StandardKind::Simplex, 1, 2).unwrap());
        assert!(iso_check(&x, &y).is_none());
        let _ = String::new();
    }
}
