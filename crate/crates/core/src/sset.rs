//! Finite truncated simplicial sets in Eilenberg-Zilber normal form.
//!
//! A complex stores only its nondegenerate cells, one face table entry per
//! cell and face index. Every simplex is the value of a unique degeneracy
//! word on a unique nondegenerate cell, so the simplicial action of an
//! arbitrary simplex-category arrow is computed by factoring the arrow and
//! walking the face table.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::monotone::{word_from_epi, word_to_epi, MonotoneMap};

/// Reference to a nondegenerate cell of a fixed complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct CellRef {
    pub dim: usize,
    pub index: usize,
}

/// A simplex in Eilenberg-Zilber normal form: a strictly decreasing
/// degeneracy word applied (right to left) to a nondegenerate cell.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct NormalSimplex {
    pub degeneracies: Vec<usize>,
    pub cell: CellRef,
}

impl NormalSimplex {
    pub fn nondegenerate(cell: CellRef) -> Self {
        NormalSimplex {
            degeneracies: Vec::new(),
            cell,
        }
    }

    pub fn dim(&self) -> usize {
        self.cell.dim + self.degeneracies.len()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.degeneracies.is_empty()
    }
}

/// Standard complex kinds accepted by [`standard_complex`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardKind {
    Simplex,
    Boundary,
    Horn(usize),
}

/// A finite simplicial set truncated at a fixed dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinSSet {
    truncation: usize,
    names: Vec<Vec<String>>,
    /// `faces[k][c][i]` is the normal form of the i-th face of cell c of
    /// dimension k; `faces[0]` entries are empty.
    faces: Vec<Vec<Vec<NormalSimplex>>>,
    coskeletal_bound: Option<usize>,
}

impl FinSSet {
    /// Assemble a complex from raw tables, checking structural sanity
    /// (name uniqueness, in-range references, strictly decreasing words,
    /// face dimensions). Simplicial identities are checked separately by
    /// [`FinSSet::validate`].
    pub fn from_parts(
        truncation: usize,
        names: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<NormalSimplex>>>,
        coskeletal_bound: Option<usize>,
    ) -> Result<Self> {
        if names.len() != truncation + 1 || faces.len() != truncation + 1 {
            return Err(Error::Malformed("tables must cover 0..=truncation".into()));
        }
        let mut seen = BTreeSet::new();
        for level in &names {
            for name in level {
                if !seen.insert(name.clone()) {
                    return Err(Error::Malformed(format!("duplicate cell name {name}")));
                }
            }
        }
        let complex = FinSSet {
            truncation,
            names,
            faces,
            coskeletal_bound,
        };
        for k in 0..=truncation {
            if complex.faces[k].len() != complex.names[k].len() {
                return Err(Error::Malformed(format!("face table size mismatch at dim {k}")));
            }
            for (c, entry) in complex.faces[k].iter().enumerate() {
                if k == 0 {
                    if !entry.is_empty() {
                        return Err(Error::Malformed("vertices have no faces".into()));
                    }
                    continue;
                }
                if entry.len() != k + 1 {
                    return Err(Error::Malformed(format!(
                        "cell {} of dim {k} must have {} faces",
                        complex.names[k][c],
                        k + 1
                    )));
                }
                for ns in entry {
                    if ns.dim() != k - 1 || !complex.contains(ns.cell) {
                        return Err(Error::Malformed(format!(
                            "bad face reference on cell {}",
                            complex.names[k][c]
                        )));
                    }
                    if !ns.degeneracies.windows(2).all(|w| w[0] > w[1]) {
                        return Err(Error::Malformed("degeneracy word not strictly decreasing".into()));
                    }
                }
            }
        }
        Ok(complex)
    }

    /// The empty complex at a given truncation.
    pub fn empty(truncation: usize) -> Self {
        FinSSet {
            truncation,
            names: vec![Vec::new(); truncation + 1],
            faces: vec![Vec::new(); truncation + 1],
            coskeletal_bound: None,
        }
    }

    /// One vertex and nothing else: the terminal complex.
    pub fn point(truncation: usize) -> Self {
        let mut names = vec![Vec::new(); truncation + 1];
        names[0].push("pt".to_string());
        let mut faces = vec![Vec::new(); truncation + 1];
        faces[0].push(Vec::new());
        FinSSet {
            truncation,
            names,
            faces,
            coskeletal_bound: Some(0),
        }
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn coskeletal_bound(&self) -> Option<usize> {
        self.coskeletal_bound
    }

    pub fn set_coskeletal_bound(&mut self, bound: Option<usize>) {
        self.coskeletal_bound = bound;
    }

    pub fn cell_count(&self, dim: usize) -> usize {
        if dim <= self.truncation {
            self.names[dim].len()
        } else {
            0
        }
    }

    /// Counts of nondegenerate cells per dimension, `0..=truncation`.
    pub fn cell_counts(&self) -> Vec<usize> {
        self.names.iter().map(Vec::len).collect()
    }

    pub fn total_cells(&self) -> usize {
        self.names.iter().map(Vec::len).sum()
    }

    pub fn contains(&self, cell: CellRef) -> bool {
        cell.dim <= self.truncation && cell.index < self.names[cell.dim].len()
    }

    pub fn cell_name(&self, cell: CellRef) -> &str {
        &self.names[cell.dim][cell.index]
    }

    pub fn cell_by_name(&self, name: &str) -> Option<CellRef> {
        for (dim, level) in self.names.iter().enumerate() {
            if let Some(index) = level.iter().position(|n| n == name) {
                return Some(CellRef { dim, index });
            }
        }
        None
    }

    pub fn cells(&self, dim: usize) -> impl Iterator<Item = CellRef> + '_ {
        let count = self.cell_count(dim);
        (0..count).map(move |index| CellRef { dim, index })
    }

    pub fn all_cells(&self) -> impl Iterator<Item = CellRef> + '_ {
        (0..=self.truncation).flat_map(|dim| self.cells(dim))
    }

    pub fn face(&self, cell: CellRef, i: usize) -> &NormalSimplex {
        &self.faces[cell.dim][cell.index][i]
    }

    pub fn face_table(&self, cell: CellRef) -> &[NormalSimplex] {
        &self.faces[cell.dim][cell.index]
    }

    /// Readable rendering of a normal simplex, e.g. `s2s0(0-1)`.
    pub fn display_simplex(&self, ns: &NormalSimplex) -> String {
        let name = self.cell_name(ns.cell);
        if ns.is_nondegenerate() {
            name.to_string()
        } else {
            let mut out = String::new();
            for j in &ns.degeneracies {
                out.push('s');
                out.push_str(&j.to_string());
            }
            format!("{out}({name})")
        }
    }

    /// The simplicial action: normal form of `x . f`.
    ///
    /// `f` must target the dimension of `x`; the result has the dimension
    /// of `f`'s source.
    pub fn act(&self, x: &NormalSimplex, f: &MonotoneMap) -> NormalSimplex {
        assert_eq!(
            f.target_dim(),
            x.dim(),
            "arrow target must match simplex dimension"
        );
        let g = word_to_epi(&x.degeneracies, x.cell.dim);
        let h = g.compose(f).expect("dimensions agree");
        let (epi, mono) = h.epi_mono_factor();
        let restricted = self.restrict(x.cell, &mono);
        if epi.is_identity() {
            restricted
        } else {
            let ge = word_to_epi(&restricted.degeneracies, restricted.cell.dim);
            let total = ge.compose(&epi).expect("dimensions agree");
            NormalSimplex {
                degeneracies: word_from_epi(&total),
                cell: restricted.cell,
            }
        }
    }

    /// Restrict a nondegenerate cell along an injective arrow by walking
    /// the stored face table, one missing vertex at a time.
    fn restrict(&self, cell: CellRef, mono: &MonotoneMap) -> NormalSimplex {
        debug_assert!(mono.is_injective());
        debug_assert_eq!(mono.target_dim(), cell.dim);
        if mono.is_identity() {
            return NormalSimplex::nondegenerate(cell);
        }
        let p = mono.missing_values()[0];
        let face = self.face(cell, p).clone();
        let shifted: Vec<usize> = mono
            .values()
            .iter()
            .map(|&v| if v < p { v } else { v - 1 })
            .collect();
        let rest = MonotoneMap::new(shifted, cell.dim - 1).expect("still injective");
        self.act(&face, &rest)
    }

    /// Face operator `d_i` on an arbitrary simplex.
    pub fn face_op(&self, x: &NormalSimplex, i: usize) -> NormalSimplex {
        self.act(x, &MonotoneMap::coface(x.dim(), i))
    }

    /// Degeneracy operator `s_j` on an arbitrary simplex.
    pub fn degeneracy_op(&self, x: &NormalSimplex, j: usize) -> NormalSimplex {
        self.act(x, &MonotoneMap::codegeneracy(x.dim(), j))
    }

    /// Number of simplices (degenerate included) at a level.
    pub fn level_size(&self, k: usize) -> usize {
        (0..=k.min(self.truncation))
            .map(|j| self.cell_count(j) * count_epis(k, j))
            .sum()
    }

    /// All simplices at a level in canonical order: by base cell
    /// (dimension, then index), then degeneracy word.
    pub fn level(&self, k: usize) -> Vec<NormalSimplex> {
        let mut out = Vec::with_capacity(self.level_size(k));
        for j in 0..=k.min(self.truncation) {
            let words = decreasing_words(k - j, k);
            for index in 0..self.cell_count(j) {
                for word in &words {
                    out.push(NormalSimplex {
                        degeneracies: word.clone(),
                        cell: CellRef { dim: j, index },
                    });
                }
            }
        }
        out
    }

    /// Check the simplicial identities `d_i d_j = d_{j-1} d_i` (i < j) on
    /// every cell up to the truncation.
    pub fn validate(&self) -> Result<()> {
        for k in 2..=self.truncation {
            for cell in self.cells(k) {
                for j in 1..=k {
                    for i in 0..j {
                        let a = self.face_op(self.face(cell, j), i);
                        let b = self.face_op(self.face(cell, i), j - 1);
                        if a != b {
                            return Err(Error::Malformed(format!(
                                "simplicial identity fails on cell {} at (i,j)=({i},{j})",
                                self.cell_name(cell)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Drop all cells above dimension `k`, keeping the truncation index.
    /// The resulting complex genuinely has no cells there, which is
    /// different from being unspecified.
    pub fn skeleton(&self, k: usize) -> FinSSet {
        let mut names = self.names.clone();
        let mut faces = self.faces.clone();
        for dim in (k + 1)..=self.truncation {
            names[dim].clear();
            faces[dim].clear();
        }
        FinSSet {
            truncation: self.truncation,
            names,
            faces,
            coskeletal_bound: None,
        }
    }

    /// Forget cells above a smaller truncation.
    pub fn truncate(&self, new_truncation: usize) -> FinSSet {
        assert!(new_truncation <= self.truncation);
        FinSSet {
            truncation: new_truncation,
            names: self.names[..=new_truncation].to_vec(),
            faces: self.faces[..=new_truncation].to_vec(),
            coskeletal_bound: self.coskeletal_bound,
        }
    }

    /// Rename every cell to `prefix{dim}_{index}`.
    pub fn with_canonical_names(&self, prefix: &str) -> FinSSet {
        let names = (0..=self.truncation)
            .map(|k| {
                (0..self.cell_count(k))
                    .map(|i| format!("{prefix}{k}_{i}"))
                    .collect()
            })
            .collect();
        FinSSet {
            truncation: self.truncation,
            names,
            faces: self.faces.clone(),
            coskeletal_bound: self.coskeletal_bound,
        }
    }
}

/// Number of surjective monotone maps `[k] -> [j]`.
fn count_epis(k: usize, j: usize) -> usize {
    // C(k, j): choose which of the k adjacent steps are strict.
    let mut num: u128 = 1;
    let r = (k - j).min(j);
    for t in 0..r {
        num = num * (k - t) as u128 / (t + 1) as u128;
    }
    num as usize
}

/// Strictly decreasing words of a given length with entries `< bound`.
fn decreasing_words(len: usize, bound: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>, len: usize, max_next: usize) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let need = len - cur.len();
        for j in (need - 1..=max_next).rev() {
            cur.push(j);
            rec(out, cur, len, j.saturating_sub(1));
            cur.pop();
        }
    }
    if len == 0 {
        out.push(Vec::new());
    } else {
        rec(&mut out, &mut cur, len, bound - 1);
    }
    // canonical order: lexicographic on the word vectors
    out.sort();
    out
}

/// Build the standard simplex, boundary or horn on `[n]`, truncated at
/// `truncation`. Cells are the strictly increasing vertex tuples admitted
/// by the kind, named like `0-2-3`.
pub fn standard_complex(kind: StandardKind, n: usize, truncation: usize) -> Result<FinSSet> {
    if let StandardKind::Horn(i) = kind {
        if n == 0 || i > n {
            return Err(Error::InvalidHorn { n, index: i });
        }
    }
    let keep = |subset: &[usize]| -> bool {
        match kind {
            StandardKind::Simplex => true,
            StandardKind::Boundary => subset.len() < n + 1,
            StandardKind::Horn(i) => {
                if subset.len() == n + 1 {
                    return false;
                }
                !(subset.len() == n && !subset.contains(&i))
            }
        }
    };
    let mut names: Vec<Vec<String>> = vec![Vec::new(); truncation + 1];
    let mut faces: Vec<Vec<Vec<NormalSimplex>>> = vec![Vec::new(); truncation + 1];
    let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut subsets_at: Vec<Vec<Vec<usize>>> = Vec::new();
    for k in 0..=truncation.min(n) {
        let mut level = Vec::new();
        enumerate_subsets(n, k + 1, &mut level);
        level.retain(|s| keep(s));
        for (idx, subset) in level.iter().enumerate() {
            index.insert(subset.clone(), idx);
            names[k].push(vertex_tuple_name(subset));
            if k == 0 {
                faces[k].push(Vec::new());
            } else {
                let entry = (0..=k)
                    .map(|i| {
                        let mut f = subset.clone();
                        f.remove(i);
                        let fi = index[&f];
                        NormalSimplex::nondegenerate(CellRef {
                            dim: k - 1,
                            index: fi,
                        })
                    })
                    .collect();
                faces[k].push(entry);
            }
        }
        subsets_at.push(level);
    }
    let coskeletal_bound = match kind {
        StandardKind::Simplex => Some(n),
        _ => None,
    };
    FinSSet::from_parts(truncation, names, faces, coskeletal_bound)
}

pub fn vertex_tuple_name(vertices: &[usize]) -> String {
    let mut out = String::new();
    for (t, v) in vertices.iter().enumerate() {
        if t > 0 {
            out.push('-');
        }
        out.push_str(&v.to_string());
    }
    out
}

fn enumerate_subsets(n: usize, size: usize, out: &mut Vec<Vec<usize>>) {
    fn rec(n: usize, size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            if n + 1 - v < size - cur.len() {
                break;
            }
            cur.push(v);
            rec(n, size, v + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, size, 0, &mut Vec::new(), out);
}

/// A face-closed selection of nondegenerate cells of a fixed owner
/// complex, stored per dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubcomplexMask {
    selected: Vec<Vec<bool>>,
}

impl SubcomplexMask {
    pub fn empty(owner: &FinSSet) -> Self {
        SubcomplexMask {
            selected: (0..=owner.truncation())
                .map(|k| vec![false; owner.cell_count(k)])
                .collect(),
        }
    }

    pub fn full(owner: &FinSSet) -> Self {
        SubcomplexMask {
            selected: (0..=owner.truncation())
                .map(|k| vec![true; owner.cell_count(k)])
                .collect(),
        }
    }

    pub fn from_predicate(owner: &FinSSet, pred: impl Fn(CellRef) -> bool) -> Self {
        SubcomplexMask {
            selected: (0..=owner.truncation())
                .map(|k| owner.cells(k).map(&pred).collect())
                .collect(),
        }
    }

    pub fn contains(&self, cell: CellRef) -> bool {
        self.selected[cell.dim][cell.index]
    }

    pub fn insert(&mut self, cell: CellRef) {
        self.selected[cell.dim][cell.index] = true;
    }

    pub fn remove(&mut self, cell: CellRef) {
        self.selected[cell.dim][cell.index] = false;
    }

    pub fn count(&self) -> usize {
        self.selected
            .iter()
            .map(|level| level.iter().filter(|&&b| b).count())
            .sum()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.selected
            .iter()
            .map(|level| level.iter().filter(|&&b| b).count())
            .collect()
    }

    pub fn iter_selected<'a>(&'a self, owner: &'a FinSSet) -> impl Iterator<Item = CellRef> + 'a {
        owner.all_cells().filter(move |&c| self.contains(c))
    }

    /// Closure under faces: every face of a selected cell must resolve to
    /// a selected cell (possibly as a degeneracy).
    pub fn validate_closed(&self, owner: &FinSSet) -> Result<()> {
        for cell in owner.all_cells() {
            if !self.contains(cell) || cell.dim == 0 {
                continue;
            }
            for ns in owner.face_table(cell) {
                if !self.contains(ns.cell) {
                    return Err(Error::Malformed(format!(
                        "mask not closed: face {} of {} unselected",
                        owner.display_simplex(ns),
                        owner.cell_name(cell)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Extract the selected subcomplex as a free-standing complex, with a
    /// cell map back into the owner.
    pub fn extract(&self, owner: &FinSSet) -> (FinSSet, Vec<Vec<usize>>) {
        let trunc = owner.truncation();
        let mut new_index: Vec<Vec<Option<usize>>> = Vec::with_capacity(trunc + 1);
        let mut owner_cell: Vec<Vec<usize>> = Vec::with_capacity(trunc + 1);
        let mut names: Vec<Vec<String>> = vec![Vec::new(); trunc + 1];
        for k in 0..=trunc {
            let mut level_index = vec![None; owner.cell_count(k)];
            let mut level_cells = Vec::new();
            for cell in owner.cells(k) {
                if self.contains(cell) {
                    level_index[cell.index] = Some(level_cells.len());
                    names[k].push(owner.cell_name(cell).to_string());
                    level_cells.push(cell.index);
                }
            }
            new_index.push(level_index);
            owner_cell.push(level_cells);
        }
        let mut faces: Vec<Vec<Vec<NormalSimplex>>> = vec![Vec::new(); trunc + 1];
        for k in 0..=trunc {
            for &oi in &owner_cell[k] {
                if k == 0 {
                    faces[0].push(Vec::new());
                    continue;
                }
                let entry = owner
                    .face_table(CellRef { dim: k, index: oi })
                    .iter()
                    .map(|ns| NormalSimplex {
                        degeneracies: ns.degeneracies.clone(),
                        cell: CellRef {
                            dim: ns.cell.dim,
                            index: new_index[ns.cell.dim][ns.cell.index]
                                .expect("mask closed under faces"),
                        },
                    })
                    .collect();
                faces[k].push(entry);
            }
        }
        let complex = FinSSet::from_parts(trunc, names, faces, owner.coskeletal_bound())
            .expect("extracted subcomplex is well formed");
        (complex, owner_cell)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn delta(n: usize, trunc: usize) -> FinSSet {
        standard_complex(StandardKind::Simplex, n, trunc).unwrap()
    }

    #[test]
    fn standard_counts() {
        assert_eq!(delta(2, 2).cell_counts(), vec![3, 3, 1]);
        assert_eq!(
            standard_complex(StandardKind::Horn(1), 2, 2).unwrap().cell_counts(),
            vec![3, 2, 0]
        );
        assert_eq!(
            standard_complex(StandardKind::Boundary, 3, 3).unwrap().cell_counts(),
            vec![4, 6, 4, 0]
        );
    }

    #[test]
    fn horn_errors() {
        assert!(standard_complex(StandardKind::Horn(0), 0, 1).is_err());
        assert!(standard_complex(StandardKind::Horn(3), 2, 2).is_err());
    }

    #[test]
    fn face_then_degeneracy_is_identity() {
        // d_1 s_0 = id on a 1-cell
        let x = delta(2, 2);
        let e = NormalSimplex::nondegenerate(CellRef { dim: 1, index: 0 });
        let degenerate = x.degeneracy_op(&e, 0);
        assert_eq!(degenerate.degeneracies, vec![0]);
        let back = x.face_op(&degenerate, 1);
        assert_eq!(back, e);
    }

    #[test]
    fn face_past_degeneracy() {
        // d_2 s_0 e = s_0 d_1 e
        let x = delta(2, 2);
        let e = NormalSimplex::nondegenerate(CellRef { dim: 1, index: 0 });
        let lhs = x.face_op(&x.degeneracy_op(&e, 0), 2);
        let rhs = x.degeneracy_op(&x.face_op(&e, 1), 0);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn vertex_by_double_face() {
        // restricting the top cell of the 2-simplex to its last vertex
        let x = delta(2, 2);
        let top = NormalSimplex::nondegenerate(CellRef { dim: 2, index: 0 });
        let f = MonotoneMap::new(vec![2], 2).unwrap();
        let v = x.act(&top, &f);
        assert_eq!(x.cell_name(v.cell), "2");
        assert!(v.is_nondegenerate());
    }

    #[test]
    fn act_idempotent_on_identity() {
        let x = delta(2, 3);
        for k in 0..=3usize {
            for ns in x.level(k) {
                let same = x.act(&ns, &MonotoneMap::identity(k));
                assert_eq!(same, ns);
            }
        }
    }

    #[test]
    fn level_sizes_match_enumeration() {
        let x = delta(2, 3);
        for k in 0..=3usize {
            assert_eq!(x.level(k).len(), x.level_size(k));
        }
        // levels of the standard 2-simplex: (k+2 choose 2) weakly
        // increasing tuples of length k+1 from {0,1,2}
        assert_eq!(x.level_size(0), 3);
        assert_eq!(x.level_size(1), 6);
        assert_eq!(x.level_size(2), 10);
        assert_eq!(x.level_size(3), 15);
    }

    #[test]
    fn validates() {
        for n in 0..4usize {
            delta(n, n + 1).validate().unwrap();
        }
        standard_complex(StandardKind::Boundary, 3, 4)
            .unwrap()
            .validate()
            .unwrap();
        standard_complex(StandardKind::Horn(2), 3, 4)
            .unwrap()
            .validate()
            .unwrap();
    }

    #[test]
    fn empty_complex_is_legal() {
        let e = FinSSet::empty(3);
        e.validate().unwrap();
        assert_eq!(e.total_cells(), 0);
        assert_eq!(e.level_size(2), 0);
    }

    #[test]
    fn skeleton_drops_cells() {
        let x = delta(2, 2);
        let sk1 = x.skeleton(1);
        assert_eq!(sk1.cell_counts(), vec![3, 3, 0]);
        sk1.validate().unwrap();
    }

    #[test]
    fn mask_extract_roundtrip() {
        let x = delta(2, 2);
        let mask = SubcomplexMask::from_predicate(&x, |c| c.dim < 2);
        mask.validate_closed(&x).unwrap();
        let (sub, _) = mask.extract(&x);
        assert_eq!(sub.cell_counts(), vec![3, 3, 0]);
        sub.validate().unwrap();
    }
}
