//! Thick simplices: the 0-coskeleta of the standard simplices, their
//! boundaries and horns by membership predicate, materialization to
//! finite complexes, the thickening coend, and the product-of-thick
//! identification with its prism subcomplex.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::colimit::{product, Product};
use crate::error::{Error, Result};
use crate::monotone::{word_from_epi, word_to_epi, MonotoneMap};
use crate::morphism::SSetMorphism;
use crate::sset::{CellRef, FinSSet, NormalSimplex, SubcomplexMask};

/// A k-simplex of the thick n-simplex: an arbitrary vertex sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ThickSimplex {
    pub ambient_n: usize,
    pub seq: Vec<usize>,
}

impl ThickSimplex {
    pub fn new(ambient_n: usize, seq: Vec<usize>) -> Result<Self> {
        if seq.is_empty() || seq.iter().any(|&v| v > ambient_n) {
            return Err(Error::Malformed("vertex sequence out of range".into()));
        }
        Ok(ThickSimplex { ambient_n, seq })
    }

    pub fn dim(&self) -> usize {
        self.seq.len() - 1
    }

    /// Nondegenerate means no equal adjacent entries.
    pub fn is_nondegenerate(&self) -> bool {
        self.seq.windows(2).all(|w| w[0] != w[1])
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.seq.iter().copied().collect()
    }

    pub fn is_monotone(&self) -> bool {
        self.seq.windows(2).all(|w| w[0] <= w[1])
    }
}

/// Regions of a thick simplex cut out by support predicates, together
/// with the two union-with-the-standard-simplex sources used by the
/// expansion certificates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThickRegion {
    Full(usize),
    Boundary(usize),
    Horn(usize, usize),
    HornUnionSimplex(usize, usize),
    BoundaryUnionSimplex(usize),
}

impl ThickRegion {
    pub fn ambient_n(&self) -> usize {
        match *self {
            ThickRegion::Full(n)
            | ThickRegion::Boundary(n)
            | ThickRegion::Horn(n, _)
            | ThickRegion::HornUnionSimplex(n, _)
            | ThickRegion::BoundaryUnionSimplex(n) => n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ThickRegion::Horn(n, i) | ThickRegion::HornUnionSimplex(n, i) => {
                if n == 0 || i > n {
                    return Err(Error::InvalidHorn { n, index: i });
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// Is the simplex in the region? Ambient dimensions must match.
pub fn thick_membership(s: &ThickSimplex, region: &ThickRegion) -> Result<bool> {
    region.validate()?;
    let n = region.ambient_n();
    if s.ambient_n != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: s.ambient_n,
        });
    }
    let support = s.support();
    let full: BTreeSet<usize> = (0..=n).collect();
    let proper = support != full;
    Ok(match *region {
        ThickRegion::Full(_) => true,
        ThickRegion::Boundary(_) => proper,
        ThickRegion::Horn(_, i) => {
            let mut complement = full.clone();
            complement.remove(&i);
            proper && support != complement
        }
        ThickRegion::BoundaryUnionSimplex(_) => proper || s.is_monotone(),
        ThickRegion::HornUnionSimplex(_, i) => {
            let mut complement = full.clone();
            complement.remove(&i);
            (proper && support != complement) || s.is_monotone()
        }
    })
}

/// All nondegenerate k-simplices of the thick n-simplex, in
/// lexicographic order. There are `(n+1) n^k` of them for `k >= 1`.
pub fn thick_enumerate(n: usize, k: usize) -> Vec<ThickSimplex> {
    if n == 0 {
        return if k == 0 {
            vec![ThickSimplex {
                ambient_n: 0,
                seq: vec![0],
            }]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    let mut seq = Vec::with_capacity(k + 1);
    fn rec(n: usize, k: usize, seq: &mut Vec<usize>, out: &mut Vec<ThickSimplex>) {
        if seq.len() == k + 1 {
            out.push(ThickSimplex {
                ambient_n: n,
                seq: seq.clone(),
            });
            return;
        }
        for v in 0..=n {
            if seq.last() != Some(&v) {
                seq.push(v);
                rec(n, k, seq, out);
                seq.pop();
            }
        }
    }
    rec(n, k, &mut seq, &mut out);
    out
}

/// Expected nondegenerate count `(n+1) n^k` (with the degenerate cases
/// for `n = 0`).
pub fn thick_count(n: usize, k: usize) -> u128 {
    if k == 0 {
        return (n + 1) as u128;
    }
    if n == 0 {
        return 0;
    }
    (n + 1) as u128 * (n as u128).pow(k as u32)
}

/// Collapse equal adjacent entries and return the degeneracy word of the
/// collapse together with the reduced sequence.
pub fn thick_normal(seq: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut base = Vec::with_capacity(seq.len());
    let mut epi_values = Vec::with_capacity(seq.len());
    for &v in seq {
        if base.last() != Some(&v) {
            base.push(v);
        }
        epi_values.push(base.len() - 1);
    }
    let epi = MonotoneMap::new(epi_values, base.len() - 1).expect("collapse is monotone");
    (word_from_epi(&epi), base)
}

/// A materialized thick region: the complex plus sequence lookups.
pub struct Materialized {
    pub region: ThickRegion,
    pub complex: Arc<FinSSet>,
    seqs: Vec<Vec<Vec<usize>>>,
    index: Vec<BTreeMap<Vec<usize>, usize>>,
}

impl Materialized {
    pub fn cell_of_seq(&self, seq: &[usize]) -> Option<CellRef> {
        let dim = seq.len() - 1;
        if dim >= self.index.len() {
            return None;
        }
        self.index[dim]
            .get(seq)
            .map(|&index| CellRef { dim, index })
    }

    pub fn seq_of_cell(&self, cell: CellRef) -> &[usize] {
        &self.seqs[cell.dim][cell.index]
    }

    /// Full vertex sequence of an arbitrary simplex (degenerate allowed).
    pub fn seq_of_simplex(&self, ns: &NormalSimplex) -> Vec<usize> {
        let base = self.seq_of_cell(ns.cell);
        let epi = word_to_epi(&ns.degeneracies, ns.cell.dim);
        epi.values().iter().map(|&v| base[v]).collect()
    }

    /// Normal form of an arbitrary vertex sequence in this complex.
    pub fn normal_of_seq(&self, seq: &[usize]) -> Option<NormalSimplex> {
        let (word, base) = thick_normal(seq);
        self.cell_of_seq(&base).map(|cell| NormalSimplex {
            degeneracies: word,
            cell,
        })
    }
}

pub fn seq_name(seq: &[usize]) -> String {
    crate::sset::vertex_tuple_name(seq)
}

/// Build the finite complex of a thick region up to a truncation. Cells
/// of dimension k are the nondegenerate sequences passing the membership
/// predicate; faces delete an entry and renormalize.
pub fn materialize(region: ThickRegion, truncation: usize) -> Result<Materialized> {
    region.validate()?;
    let n = region.ambient_n();
    let mut seqs: Vec<Vec<Vec<usize>>> = Vec::with_capacity(truncation + 1);
    let mut index: Vec<BTreeMap<Vec<usize>, usize>> = Vec::with_capacity(truncation + 1);
    let mut names: Vec<Vec<String>> = vec![Vec::new(); truncation + 1];
    for k in 0..=truncation {
        let mut level = Vec::new();
        let mut level_index = BTreeMap::new();
        for s in thick_enumerate(n, k) {
            if thick_membership(&s, &region)? {
                level_index.insert(s.seq.clone(), level.len());
                names[k].push(seq_name(&s.seq));
                level.push(s.seq);
            }
        }
        seqs.push(level);
        index.push(level_index);
    }
    let mut faces: Vec<Vec<Vec<NormalSimplex>>> = vec![Vec::new(); truncation + 1];
    for k in 0..=truncation {
        for seq in &seqs[k] {
            if k == 0 {
                faces[0].push(Vec::new());
                continue;
            }
            let entry = (0..=k)
                .map(|i| {
                    let mut f = seq.clone();
                    f.remove(i);
                    let (word, base) = thick_normal(&f);
                    let cell = CellRef {
                        dim: base.len() - 1,
                        index: index[base.len() - 1][&base],
                    };
                    NormalSimplex {
                        degeneracies: word,
                        cell,
                    }
                })
                .collect();
            faces[k].push(entry);
        }
    }
    let coskeletal = match region {
        ThickRegion::Full(_) => Some(0),
        _ => None,
    };
    let complex = Arc::new(FinSSet::from_parts(truncation, names, faces, coskeletal)?);
    Ok(Materialized {
        region,
        complex,
        seqs,
        index,
    })
}

/// A canonical coend class: a nondegenerate base cell together with a
/// vertex-surjective pattern sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CoendCell {
    pub base: CellRef,
    pub seq: Vec<usize>,
}

/// Reduce an arbitrary pair (simplex of X, pattern sequence) to the
/// canonical coend representative, by pushing degeneracies of the base
/// into the pattern and restricting the base to the pattern's support.
pub fn canonicalize_pair(
    x: &FinSSet,
    mut base: NormalSimplex,
    mut seq: Vec<usize>,
) -> (CellRef, Vec<usize>) {
    loop {
        if !base.is_nondegenerate() {
            let epi = word_to_epi(&base.degeneracies, base.cell.dim);
            for v in seq.iter_mut() {
                *v = epi.apply(*v);
            }
            base = NormalSimplex::nondegenerate(base.cell);
            continue;
        }
        let support: BTreeSet<usize> = seq.iter().copied().collect();
        if support.len() == base.dim() + 1 {
            return (base.cell, seq);
        }
        let sorted: Vec<usize> = support.into_iter().collect();
        let mono = MonotoneMap::new(sorted.clone(), base.dim()).expect("support inclusion");
        let restricted = x.act(&base, &mono);
        for v in seq.iter_mut() {
            *v = sorted.binary_search(v).expect("value in support");
        }
        base = restricted;
    }
}

/// The thickening coend applied to a complex, with the unit inclusion.
pub struct Thickening {
    pub complex: Arc<FinSSet>,
    pub unit: SSetMorphism,
    cells: Vec<Vec<CoendCell>>,
    index: Vec<BTreeMap<CoendCell, usize>>,
}

impl Thickening {
    pub fn cell_data(&self, cell: CellRef) -> &CoendCell {
        &self.cells[cell.dim][cell.index]
    }

    /// Normal form of an arbitrary canonical pair in the thickened
    /// complex (the pattern may contain adjacent repeats).
    pub fn normal_of_pair(&self, base: CellRef, seq: &[usize]) -> NormalSimplex {
        let (word, reduced) = thick_normal(seq);
        let key = CoendCell {
            base,
            seq: reduced.clone(),
        };
        let dim = reduced.len() - 1;
        NormalSimplex {
            degeneracies: word,
            cell: CellRef {
                dim,
                index: self.index[dim][&key],
            },
        }
    }
}

/// Surjective sequences onto `0..=m` of length `len`, without equal
/// adjacent entries, in lexicographic order.
fn surjective_patterns(m: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut seq = Vec::with_capacity(len);
    fn rec(m: usize, len: usize, seen: usize, seq: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if seq.len() == len {
            if seen == m + 1 {
                out.push(seq.clone());
            }
            return;
        }
        let remaining = len - seq.len();
        if (m + 1 - seen) > remaining {
            return;
        }
        for v in 0..=m {
            if seq.last() == Some(&v) {
                continue;
            }
            let new_seen = seen + usize::from(v >= seen && v == seen);
            // values must appear with all smaller values first to avoid
            // double counting? No: patterns are arbitrary surjections.
            let _ = new_seen;
            seq.push(v);
            let seen_now = count_distinct_prefix(seq, m);
            rec(m, len, seen_now, seq, out);
            seq.pop();
        }
    }
    fn count_distinct_prefix(seq: &[usize], m: usize) -> usize {
        let mut seen = vec![false; m + 1];
        let mut count = 0;
        for &v in seq {
            if !seen[v] {
                seen[v] = true;
                count += 1;
            }
        }
        count
    }
    rec(m, len, 0, &mut seq, &mut out);
    out
}

/// Apply the thickening functor `X x_Delta Thick` to a complex. Cells of
/// the result are canonical coend classes; the unit embeds `X` by the
/// identity pattern.
pub fn thicken(x: &Arc<FinSSet>) -> Result<Thickening> {
    let trunc = x.truncation();
    let mut cells: Vec<Vec<CoendCell>> = Vec::with_capacity(trunc + 1);
    let mut index: Vec<BTreeMap<CoendCell, usize>> = Vec::with_capacity(trunc + 1);
    let mut names: Vec<Vec<String>> = vec![Vec::new(); trunc + 1];
    for k in 0..=trunc {
        let mut level = Vec::new();
        let mut level_index = BTreeMap::new();
        for m in 0..=k.min(trunc) {
            let patterns = surjective_patterns(m, k + 1);
            for base in x.cells(m) {
                for pattern in &patterns {
                    let cell = CoendCell {
                        base,
                        seq: pattern.clone(),
                    };
                    level_index.insert(cell.clone(), level.len());
                    names[k].push(format!(
                        "{}[{}]",
                        x.cell_name(base),
                        seq_name(pattern)
                    ));
                    level.push(cell);
                }
            }
        }
        cells.push(level);
        index.push(level_index);
    }
    let mut faces: Vec<Vec<Vec<NormalSimplex>>> = vec![Vec::new(); trunc + 1];
    for k in 0..=trunc {
        for cell in &cells[k] {
            if k == 0 {
                faces[0].push(Vec::new());
                continue;
            }
            let entry = (0..=k)
                .map(|i| {
                    let mut pattern = cell.seq.clone();
                    pattern.remove(i);
                    let (base, seq) = canonicalize_pair(
                        x,
                        NormalSimplex::nondegenerate(cell.base),
                        pattern,
                    );
                    let (word, reduced) = thick_normal(&seq);
                    let key = CoendCell {
                        base,
                        seq: reduced.clone(),
                    };
                    let dim = reduced.len() - 1;
                    NormalSimplex {
                        degeneracies: word,
                        cell: CellRef {
                            dim,
                            index: index[dim][&key],
                        },
                    }
                })
                .collect();
            faces[k].push(entry);
        }
    }
    let complex = Arc::new(FinSSet::from_parts(trunc, names, faces, None)?);
    let unit_assignment = (0..=trunc)
        .map(|k| {
            x.cells(k)
                .map(|base| {
                    let key = CoendCell {
                        base,
                        seq: (0..=k).collect(),
                    };
                    NormalSimplex::nondegenerate(CellRef {
                        dim: k,
                        index: index[k][&key],
                    })
                })
                .collect()
        })
        .collect();
    let unit = SSetMorphism::new(x.clone(), complex.clone(), unit_assignment)?;
    Ok(Thickening {
        complex,
        unit,
        cells,
        index,
    })
}

/// The identification of a product of thick simplices with a single
/// thick simplex on the vertex pairs.
pub struct ProductVertexIso {
    pub product: Product,
    pub left: Materialized,
    pub right: Materialized,
    pub target: Materialized,
    pub morphism: SSetMorphism,
}

/// Pair vertices lexicographically: `(i, j) -> i (n+1) + j`.
pub fn pair_vertex(i: usize, j: usize, n: usize) -> usize {
    i * (n + 1) + j
}

pub fn unpair_vertex(v: usize, n: usize) -> (usize, usize) {
    (v / (n + 1), v % (n + 1))
}

/// Build the isomorphism `Thick(m) x Thick(n) -> Thick(mn + m + n)`
/// induced by the vertex pairing, verified levelwise up to the
/// truncation.
pub fn product_vertex_iso(m: usize, n: usize, truncation: usize) -> Result<ProductVertexIso> {
    let left = materialize(ThickRegion::Full(m), truncation)?;
    let right = materialize(ThickRegion::Full(n), truncation)?;
    let target = materialize(ThickRegion::Full(m * n + m + n), truncation)?;
    let prod = product(&left.complex, &right.complex)?;
    let mut assignment: Vec<Vec<NormalSimplex>> = Vec::with_capacity(truncation + 1);
    for k in 0..=truncation {
        let mut level = Vec::new();
        for cell in prod.complex.cells(k) {
            let ls = prod.proj_left.image_of_cell(cell);
            let rs = prod.proj_right.image_of_cell(cell);
            let lseq = left.seq_of_simplex(ls);
            let rseq = right.seq_of_simplex(rs);
            let zipped: Vec<usize> = lseq
                .iter()
                .zip(rseq.iter())
                .map(|(&a, &b)| pair_vertex(a, b, n))
                .collect();
            let image = target
                .normal_of_seq(&zipped)
                .expect("pair sequence lies in the full thick simplex");
            level.push(image);
        }
        assignment.push(level);
    }
    let morphism = SSetMorphism::new(prod.complex.clone(), target.complex.clone(), assignment)?;
    morphism.validate()?;
    if !morphism.is_isomorphism() {
        return Err(Error::Malformed(
            "vertex pairing did not induce an isomorphism".into(),
        ));
    }
    Ok(ProductVertexIso {
        product: prod,
        left,
        right,
        target,
        morphism,
    })
}

/// The thickened prism inside the thick simplex on the vertex pairs: the
/// subcomplex of simplices whose vertex pairs lie on a common maximal
/// monotone chain of the grid poset.
pub struct PrismRegion {
    pub m: usize,
    pub n: usize,
    pub ambient: Materialized,
    pub mask: SubcomplexMask,
}

pub fn prism_chain_test(seq: &[usize], n: usize) -> bool {
    let support: BTreeSet<usize> = seq.iter().copied().collect();
    let pairs: Vec<(usize, usize)> = support.iter().map(|&v| unpair_vertex(v, n)).collect();
    pairs.windows(2).all(|w| {
        let (a, b) = (w[0], w[1]);
        (a.0 <= b.0 && a.1 <= b.1) || (b.0 <= a.0 && b.1 <= a.1)
    })
}

pub fn prism_region(m: usize, n: usize, truncation: usize) -> Result<PrismRegion> {
    let ambient = materialize(ThickRegion::Full(m * n + m + n), truncation)?;
    let mask = SubcomplexMask::from_predicate(&ambient.complex, |cell| {
        prism_chain_test(ambient.seq_of_cell(cell), n)
    });
    Ok(PrismRegion {
        m,
        n,
        ambient,
        mask,
    })
}

/// Number of maximal monotone chains of the grid poset `{0..m} x {0..n}`,
/// counted directly by dynamic programming.
pub fn maximal_chain_count(m: usize, n: usize) -> u128 {
    let mut table = vec![vec![0u128; n + 1]; m + 1];
    table[m][n] = 1;
    for i in (0..=m).rev() {
        for j in (0..=n).rev() {
            if i == m && j == n {
                continue;
            }
            let mut total = 0;
            if i < m {
                total += table[i + 1][j];
            }
            if j < n {
                total += table[i][j + 1];
            }
            table[i][j] = total;
        }
    }
    table[0][0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::iso_check;
    use crate::sset::{standard_complex, StandardKind};

    #[test]
    fn enumerate_counts() {
        assert_eq!(
            thick_enumerate(1, 2)
                .iter()
                .map(|s| s.seq.clone())
                .collect::<Vec<_>>(),
            vec![vec![0, 1, 0], vec![1, 0, 1]]
        );
        assert_eq!(thick_enumerate(2, 1).len(), 6);
        assert!(thick_enumerate(0, 3).is_empty());
        for n in 0..=5usize {
            for k in 0..=8usize {
                assert_eq!(thick_enumerate(n, k).len() as u128, thick_count(n, k));
            }
        }
    }

    #[test]
    fn membership_examples() {
        let s = ThickSimplex::new(2, vec![0, 1, 0]).unwrap();
        assert!(thick_membership(&s, &ThickRegion::Boundary(2)).unwrap());
        let s = ThickSimplex::new(2, vec![0, 2, 0]).unwrap();
        assert!(!thick_membership(&s, &ThickRegion::Horn(2, 1)).unwrap());
        let s = ThickSimplex::new(2, vec![0, 1, 2, 1]).unwrap();
        assert!(!thick_membership(&s, &ThickRegion::Boundary(2)).unwrap());
    }

    #[test]
    fn membership_ambient_mismatch() {
        let s = ThickSimplex::new(3, vec![0, 1]).unwrap();
        assert!(thick_membership(&s, &ThickRegion::Boundary(2)).is_err());
    }

    #[test]
    fn materialize_counts() {
        let full1 = materialize(ThickRegion::Full(1), 3).unwrap();
        assert_eq!(full1.complex.cell_counts(), vec![2, 2, 2, 2]);
        assert_eq!(full1.complex.coskeletal_bound(), Some(0));
        full1.complex.validate().unwrap();

        let boundary2 = materialize(ThickRegion::Boundary(2), 2).unwrap();
        assert_eq!(boundary2.complex.cell_counts(), vec![3, 6, 6]);
        boundary2.complex.validate().unwrap();

        let horn21 = materialize(ThickRegion::Horn(2, 1), 1).unwrap();
        assert_eq!(horn21.complex.cell_counts(), vec![3, 4]);
        horn21.complex.validate().unwrap();
    }

    #[test]
    fn thicken_point_is_point() {
        let pt = Arc::new(standard_complex(StandardKind::Simplex, 0, 2).unwrap());
        let th = thicken(&pt).unwrap();
        assert_eq!(th.complex.cell_counts(), vec![1, 0, 0]);
        th.unit.validate().unwrap();
    }

    #[test]
    fn thicken_interval_is_thick_interval() {
        let d1 = Arc::new(standard_complex(StandardKind::Simplex, 1, 3).unwrap());
        let th = thicken(&d1).unwrap();
        th.complex.validate().unwrap();
        th.unit.validate().unwrap();
        assert!(th.unit.is_levelwise_injective());
        let full = materialize(ThickRegion::Full(1), 3).unwrap();
        assert_eq!(th.complex.cell_counts(), full.complex.cell_counts());
        assert!(iso_check(&th.complex, &full.complex).is_some());
    }

    #[test]
    fn thicken_boundary_counts() {
        let b2 = Arc::new(standard_complex(StandardKind::Boundary, 2, 2).unwrap());
        let th = thicken(&b2).unwrap();
        th.complex.validate().unwrap();
        assert_eq!(th.complex.cell_counts(), vec![3, 6, 6]);
        let mat = materialize(ThickRegion::Boundary(2), 2).unwrap();
        assert!(iso_check(&th.complex, &mat.complex).is_some());
    }

    #[test]
    fn product_iso_small() {
        let iso = product_vertex_iso(1, 1, 2).unwrap();
        for k in 0..=2usize {
            assert_eq!(iso.product.complex.level_size(k), 4usize.pow(k as u32 + 1));
            assert_eq!(iso.target.complex.level_size(k), 4usize.pow(k as u32 + 1));
        }
        let unit = product_vertex_iso(0, 2, 2).unwrap();
        assert_eq!(
            unit.product.complex.cell_counts(),
            unit.target.complex.cell_counts()
        );
    }

    #[test]
    fn prism_counts() {
        assert_eq!(maximal_chain_count(1, 1), 2);
        assert_eq!(maximal_chain_count(2, 1), 3);
        assert_eq!(maximal_chain_count(2, 2), 6);
        let region = prism_region(1, 1, 1).unwrap();
        // the edge between (0,1) and (1,0) is not on any monotone chain
        let v01 = pair_vertex(0, 1, 1);
        let v10 = pair_vertex(1, 0, 1);
        let edge = region.ambient.cell_of_seq(&[v01, v10]).unwrap();
        assert!(!region.mask.contains(edge));
        region.mask.validate_closed(&region.ambient.complex).unwrap();
    }
}
