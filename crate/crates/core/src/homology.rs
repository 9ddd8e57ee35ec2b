//! Normalized integral chains and Smith-normal-form homology.
//!
//! Boundary matrices are built over the nondegenerate cells: a face that
//! normalizes to a degeneracy contributes nothing. All arithmetic is
//! arbitrary precision.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::sset::FinSSet;

/// A dense integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: BigInt) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn add_to(&mut self, r: usize, c: usize, value: i64) {
        let cell = &mut self.entries[r * self.cols + c];
        *cell += value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Matrix product, used by the exactness check d.d = 0.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let cur = out.get(r, c).clone();
                        out.set(r, c, cur + a * b);
                    }
                }
            }
        }
        out
    }
}

/// Rank and the invariant factors greater than one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithSummary {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

/// Diagonalize by unimodular row and column operations, selecting the
/// smallest-magnitude nonzero pivot each round.
pub fn smith_normal_form(matrix: &IntMatrix) -> SmithSummary {
    let mut m = matrix.clone();
    let mut diagonal: Vec<BigInt> = Vec::new();
    let mut top = 0usize;
    while top < m.rows && top < m.cols {
        // find the smallest nonzero entry in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for r in top..m.rows {
            for c in top..m.cols {
                if m.get(r, c).is_zero() {
                    continue;
                }
                match pivot {
                    None => pivot = Some((r, c)),
                    Some((pr, pc)) => {
                        if m.get(r, c).abs() < m.get(pr, pc).abs() {
                            pivot = Some((r, c));
                        }
                    }
                }
            }
        }
        let Some((pr, pc)) = pivot else {
            break;
        };
        swap_rows(&mut m, top, pr);
        swap_cols(&mut m, top, pc);
        // clear the pivot row and column; restart on remainder growth
        loop {
            let mut dirty = false;
            for r in top + 1..m.rows {
                if m.get(r, top).is_zero() {
                    continue;
                }
                let q = div_nearest(m.get(r, top), m.get(top, top));
                if !q.is_zero() {
                    row_axpy(&mut m, r, top, &q, top);
                }
                if !m.get(r, top).is_zero() {
                    // remainder smaller in magnitude than the pivot
                    swap_rows(&mut m, top, r);
                    dirty = true;
                }
            }
            for c in top + 1..m.cols {
                if m.get(top, c).is_zero() {
                    continue;
                }
                let q = div_nearest(m.get(top, c), m.get(top, top));
                if !q.is_zero() {
                    col_axpy(&mut m, c, top, &q, top);
                }
                if !m.get(top, c).is_zero() {
                    swap_cols(&mut m, top, c);
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        // divisibility: fold in any entry the pivot does not divide
        let mut offender = None;
        'scan: for r in top + 1..m.rows {
            for c in top + 1..m.cols {
                if !(m.get(r, c) % m.get(top, top)).is_zero() {
                    offender = Some(r);
                    break 'scan;
                }
            }
        }
        if let Some(r) = offender {
            let one = BigInt::one();
            row_axpy(&mut m, top, r, &(-one), top);
            continue;
        }
        let mut d = m.get(top, top).clone();
        if d.is_negative() {
            d = -d;
        }
        diagonal.push(d);
        top += 1;
    }
    let torsion = diagonal
        .iter()
        .filter(|d| **d > BigInt::one())
        .cloned()
        .collect();
    SmithSummary {
        rank: diagonal.len(),
        torsion,
    }
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for c in 0..m.cols {
        let x = m.get(a, c).clone();
        let y = m.get(b, c).clone();
        m.set(a, c, y);
        m.set(b, c, x);
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for r in 0..m.rows {
        let x = m.get(r, a).clone();
        let y = m.get(r, b).clone();
        m.set(r, a, y);
        m.set(r, b, x);
    }
}

/// row[r] -= q * row[src], from column `from` on.
fn row_axpy(m: &mut IntMatrix, r: usize, src: usize, q: &BigInt, from: usize) {
    for c in from..m.cols {
        let delta = q * m.get(src, c);
        let cur = m.get(r, c).clone();
        m.set(r, c, cur - delta);
    }
}

fn col_axpy(m: &mut IntMatrix, c: usize, src: usize, q: &BigInt, from: usize) {
    for r in from..m.rows {
        let delta = q * m.get(r, src);
        let cur = m.get(r, c).clone();
        m.set(r, c, cur - delta);
    }
}

/// Division rounded to nearest, so remainders shrink in magnitude.
fn div_nearest(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = (a / b, a % b);
    if r.abs() * 2 > b.abs() {
        if (a.is_negative()) == (b.is_negative()) {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

/// Normalized boundary matrices of a complex: one matrix per degree
/// `1..=truncation`, columns indexed by k-cells, rows by (k-1)-cells.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    pub boundaries: Vec<IntMatrix>,
}

pub fn chain_complex(x: &FinSSet) -> ChainComplex {
    let trunc = x.truncation();
    let mut boundaries = Vec::with_capacity(trunc);
    for k in 1..=trunc {
        let mut m = IntMatrix::zero(x.cell_count(k - 1), x.cell_count(k));
        for cell in x.cells(k) {
            for (i, face) in x.face_table(cell).iter().enumerate() {
                if face.is_nondegenerate() {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    m.add_to(face.cell.index, cell.index, sign);
                }
            }
        }
        boundaries.push(m);
    }
    ChainComplex { boundaries }
}

impl ChainComplex {
    /// Exact check that consecutive boundaries compose to zero.
    pub fn boundary_squared_is_zero(&self) -> bool {
        self.boundaries
            .windows(2)
            .all(|w| w[0].mul(&w[1]).is_zero())
    }
}

/// Homology of one degree; `known` is false at and beyond the truncation
/// edge, where missing higher cells make the answer meaningless.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeReport {
    pub degree: usize,
    pub known: bool,
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyGroups {
    pub truncation: usize,
    pub degrees: Vec<DegreeReport>,
}

impl HomologyGroups {
    pub fn degree(&self, k: usize) -> &DegreeReport {
        &self.degrees[k]
    }

    /// Render one degree like `Z^2 + Z/3` or `0`.
    pub fn describe(&self, k: usize) -> String {
        let report = &self.degrees[k];
        if !report.known {
            return String::from("unknown (truncated)");
        }
        let mut parts: Vec<String> = Vec::new();
        if report.betti > 0 {
            if report.betti == 1 {
                parts.push(String::from("Z"));
            } else {
                parts.push(alloc::format!("Z^{}", report.betti));
            }
        }
        for t in &report.torsion {
            parts.push(alloc::format!("Z/{t}"));
        }
        if parts.is_empty() {
            String::from("0")
        } else {
            parts.join(" + ")
        }
    }
}

/// Homology in all degrees up to the truncation, with degrees at the edge
/// reported unknown rather than guessed.
pub fn homology(x: &FinSSet) -> HomologyGroups {
    let chain = chain_complex(x);
    homology_of_chain(x, &chain)
}

pub fn homology_of_chain(x: &FinSSet, chain: &ChainComplex) -> HomologyGroups {
    let trunc = x.truncation();
    let summaries: Vec<SmithSummary> = chain.boundaries.iter().map(smith_normal_form).collect();
    let mut degrees = Vec::with_capacity(trunc + 1);
    for k in 0..=trunc {
        let known = k + 1 <= trunc;
        if !known {
            degrees.push(DegreeReport {
                degree: k,
                known: false,
                betti: 0,
                torsion: Vec::new(),
            });
            continue;
        }
        let rank_in = if k == 0 { 0 } else { summaries[k - 1].rank };
        let rank_out = summaries[k].rank;
        let betti = x.cell_count(k) - rank_in - rank_out;
        degrees.push(DegreeReport {
            degree: k,
            known: true,
            betti,
            torsion: summaries[k].torsion.clone(),
        });
    }
    HomologyGroups {
        truncation: trunc,
        degrees,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{standard_complex, StandardKind};
    use crate::thick::{materialize, ThickRegion};

    fn betti(groups: &HomologyGroups, k: usize) -> (bool, usize) {
        let d = groups.degree(k);
        (d.known, d.betti)
    }

    #[test]
    fn interval_boundary_matrix() {
        let d1 = standard_complex(StandardKind::Simplex, 1, 1).unwrap();
        let chain = chain_complex(&d1);
        let m = &chain.boundaries[0];
        // d(edge 0-1) = vertex 1 - vertex 0
        assert_eq!(*m.get(0, 0), BigInt::from(-1));
        assert_eq!(*m.get(1, 0), BigInt::from(1));
    }

    #[test]
    fn thick_interval_chain_column() {
        // d(0-1-0) hits both 1-cells once with positive sign; the middle
        // face is degenerate and contributes nothing
        let full = materialize(ThickRegion::Full(1), 2).unwrap();
        let chain = chain_complex(&full.complex);
        let m = &chain.boundaries[1];
        let col0: Vec<i64> = (0..2)
            .map(|r| i64::try_from(m.get(r, 0).clone()).unwrap())
            .collect();
        assert_eq!(col0.iter().map(|v| v.abs()).sum::<i64>(), 2);
        assert!(chain.boundary_squared_is_zero());
    }

    #[test]
    fn sphere_homology() {
        let b3 = standard_complex(StandardKind::Boundary, 3, 3).unwrap();
        let groups = homology(&b3);
        assert_eq!(betti(&groups, 0), (true, 1));
        assert_eq!(betti(&groups, 1), (true, 0));
        assert_eq!(betti(&groups, 2), (true, 1));
        assert!(groups.degree(2).torsion.is_empty());
    }

    #[test]
    fn thick_interval_skeleta_are_spheres() {
        for k in 1..=4usize {
            let full = materialize(ThickRegion::Full(1), k + 1).unwrap();
            let sk = full.complex.skeleton(k);
            let groups = homology(&sk);
            assert_eq!(betti(&groups, 0), (true, 1), "k={k}");
            for j in 1..k {
                assert_eq!(betti(&groups, j), (true, 0), "k={k} j={j}");
            }
            assert_eq!(betti(&groups, k), (true, 1), "k={k}");
        }
    }

    #[test]
    fn smith_with_torsion() {
        // projective-plane style matrix [[2]]
        let mut m = IntMatrix::zero(1, 1);
        m.set(0, 0, BigInt::from(2));
        let s = smith_normal_form(&m);
        assert_eq!(s.rank, 1);
        assert_eq!(s.torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn smith_known_shape() {
        let mut m = IntMatrix::zero(2, 2);
        m.set(0, 0, BigInt::from(2));
        m.set(0, 1, BigInt::from(4));
        m.set(1, 0, BigInt::from(4));
        m.set(1, 1, BigInt::from(4));
        let s = smith_normal_form(&m);
        assert_eq!(s.rank, 2);
        // d1 divides d2 and d1 * d2 = |det| = 8
        assert_eq!(s.torsion, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn truncation_edge_is_unknown() {
        let d1 = standard_complex(StandardKind::Simplex, 1, 1).unwrap();
        let groups = homology(&d1);
        assert!(!groups.degree(1).known);
        assert_eq!(groups.describe(1), "unknown (truncated)");
    }
}
