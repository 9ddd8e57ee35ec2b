//! Simplicial morphisms between finite truncated complexes.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::monotone::word_to_epi;
use crate::sset::{CellRef, FinSSet, NormalSimplex};

/// A simplicial map, stored by its values on nondegenerate source cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SSetMorphism {
    source: Arc<FinSSet>,
    target: Arc<FinSSet>,
    /// `assignment[k][c]` is the image of cell `c` of dimension `k`, a
    /// normal simplex of the target of the same dimension.
    assignment: Vec<Vec<NormalSimplex>>,
}

impl SSetMorphism {
    pub fn new(
        source: Arc<FinSSet>,
        target: Arc<FinSSet>,
        assignment: Vec<Vec<NormalSimplex>>,
    ) -> Result<Self> {
        if assignment.len() != source.truncation() + 1 {
            return Err(Error::Malformed("assignment must cover 0..=truncation".into()));
        }
        for k in 0..=source.truncation() {
            if assignment[k].len() != source.cell_count(k) {
                return Err(Error::Malformed(format!("assignment size mismatch at dim {k}")));
            }
            for ns in &assignment[k] {
                if ns.dim() != k || !target.contains(ns.cell) {
                    return Err(Error::Malformed(format!("bad image at dim {k}")));
                }
            }
        }
        Ok(SSetMorphism {
            source,
            target,
            assignment,
        })
    }

    pub fn identity(complex: Arc<FinSSet>) -> Self {
        let assignment = (0..=complex.truncation())
            .map(|k| {
                complex
                    .cells(k)
                    .map(NormalSimplex::nondegenerate)
                    .collect()
            })
            .collect();
        SSetMorphism {
            source: complex.clone(),
            target: complex,
            assignment,
        }
    }

    /// The unique map to the point.
    pub fn terminal(source: Arc<FinSSet>) -> Self {
        let target = Arc::new(FinSSet::point(source.truncation()));
        let vertex = CellRef { dim: 0, index: 0 };
        let assignment = (0..=source.truncation())
            .map(|k| {
                source
                    .cells(k)
                    .map(|_| NormalSimplex {
                        degeneracies: (0..k).rev().collect(),
                        cell: vertex,
                    })
                    .collect()
            })
            .collect();
        SSetMorphism {
            source,
            target,
            assignment,
        }
    }

    pub fn source(&self) -> &Arc<FinSSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinSSet> {
        &self.target
    }

    pub fn assignment(&self) -> &Vec<Vec<NormalSimplex>> {
        &self.assignment
    }

    pub fn image_of_cell(&self, cell: CellRef) -> &NormalSimplex {
        &self.assignment[cell.dim][cell.index]
    }

    /// Image of an arbitrary simplex: `F(s_w c) = s_w F(c)`.
    pub fn apply(&self, ns: &NormalSimplex) -> NormalSimplex {
        let image = self.image_of_cell(ns.cell);
        if ns.is_nondegenerate() {
            image.clone()
        } else {
            let epi = word_to_epi(&ns.degeneracies, ns.cell.dim);
            self.target.act(image, &epi)
        }
    }

    /// Check commutation with all face operators, dimensionwise.
    pub fn validate(&self) -> Result<()> {
        for k in 1..=self.source.truncation() {
            for cell in self.source.cells(k) {
                let image = self.image_of_cell(cell);
                for i in 0..=k {
                    let lhs = self.target.face_op(image, i);
                    let rhs = self.apply(self.source.face(cell, i));
                    if lhs != rhs {
                        return Err(Error::Malformed(format!(
                            "morphism does not commute with d_{i} on cell {}",
                            self.source.cell_name(cell)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Composition `other . self` (apply `self` first).
    pub fn then(&self, other: &SSetMorphism) -> Result<SSetMorphism> {
        if self.target.as_ref() != other.source.as_ref() {
            return Err(Error::Malformed("composition targets do not match".into()));
        }
        let assignment = self
            .assignment
            .iter()
            .map(|level| level.iter().map(|ns| other.apply(ns)).collect())
            .collect();
        SSetMorphism::new(self.source.clone(), other.target.clone(), assignment)
    }

    /// Is the map levelwise injective on simplices (degenerate included)?
    pub fn is_levelwise_injective(&self) -> bool {
        for k in 0..=self.source.truncation() {
            let mut seen = alloc::collections::BTreeSet::new();
            for ns in self.source.level(k) {
                if !seen.insert(self.apply(&ns)) {
                    return false;
                }
            }
        }
        true
    }

    /// Is the map an isomorphism of truncated complexes? True when it is
    /// a levelwise bijection on nondegenerate cells.
    pub fn is_isomorphism(&self) -> bool {
        for k in 0..=self.source.truncation() {
            if self.source.cell_count(k) != self.target.cell_count(k) {
                return false;
            }
            let mut hit = alloc::vec![false; self.target.cell_count(k)];
            for cell in self.source.cells(k) {
                let image = self.image_of_cell(cell);
                if !image.is_nondegenerate() || hit[image.cell.index] {
                    return false;
                }
                hit[image.cell.index] = true;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{standard_complex, StandardKind};

    #[test]
    fn identity_validates() {
        let x = Arc::new(standard_complex(StandardKind::Simplex, 2, 3).unwrap());
        let id = SSetMorphism::identity(x);
        id.validate().unwrap();
        assert!(id.is_isomorphism());
        assert!(id.is_levelwise_injective());
    }

    #[test]
    fn terminal_validates() {
        let x = Arc::new(standard_complex(StandardKind::Boundary, 2, 3).unwrap());
        let t = SSetMorphism::terminal(x);
        t.validate().unwrap();
        assert!(!t.is_isomorphism());
    }
}
