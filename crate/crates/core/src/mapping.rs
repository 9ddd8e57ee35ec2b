//! Enumeration of simplicial maps, lifting problems, and the
//! surjectivity reports defining quasicategories, Kan complexes and
//! trivial fibrations at a fixed truncation.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::morphism::SSetMorphism;
use crate::sset::{standard_complex, CellRef, FinSSet, NormalSimplex, StandardKind, SubcomplexMask};

/// Enumerate all simplicial maps `S -> X` in canonical order.
///
/// If `X` carries a coskeletal bound `c`, assignments are searched only in
/// dimensions `<= c` and extended uniquely above (the coskeleton
/// adjunction); otherwise all dimensions up to the truncation of `S` are
/// searched. `X` must be specified at least as far as `S`.
pub fn enumerate_maps(s: &Arc<FinSSet>, x: &Arc<FinSSet>) -> Result<Vec<SSetMorphism>> {
    if x.truncation() < s.truncation() {
        return Err(Error::TruncationInsufficient {
            needed: s.truncation(),
            available: x.truncation(),
        });
    }
    let search_limit = match x.coskeletal_bound() {
        Some(c) => c.min(s.truncation()),
        None => s.truncation(),
    };
    let levels: Vec<Vec<NormalSimplex>> = (0..=s.truncation()).map(|k| x.level(k)).collect();

    let mut out = Vec::new();
    let mut assignment: Vec<Vec<NormalSimplex>> = (0..=s.truncation())
        .map(|k| Vec::with_capacity(s.cell_count(k)))
        .collect();
    search_maps(
        s,
        x,
        &levels,
        search_limit,
        0,
        0,
        &mut assignment,
        &mut out,
    )?;
    Ok(out)
}

/// Does the partial assignment commute with faces at this cell?
fn faces_compatible(
    s: &FinSSet,
    x: &FinSSet,
    assignment: &[Vec<NormalSimplex>],
    cell: CellRef,
    image: &NormalSimplex,
) -> bool {
    if cell.dim == 0 {
        return true;
    }
    for (i, face) in s.face_table(cell).iter().enumerate() {
        let mapped_face = apply_partial(x, assignment, face);
        if x.face_op(image, i) != mapped_face {
            return false;
        }
    }
    true
}

fn apply_partial(x: &FinSSet, assignment: &[Vec<NormalSimplex>], ns: &NormalSimplex) -> NormalSimplex {
    let image = &assignment[ns.cell.dim][ns.cell.index];
    if ns.is_nondegenerate() {
        image.clone()
    } else {
        let epi = crate::monotone::word_to_epi(&ns.degeneracies, ns.cell.dim);
        x.act(image, &epi)
    }
}

#[allow(clippy::too_many_arguments)]
fn search_maps(
    s: &Arc<FinSSet>,
    x: &Arc<FinSSet>,
    levels: &[Vec<NormalSimplex>],
    search_limit: usize,
    dim: usize,
    index: usize,
    assignment: &mut Vec<Vec<NormalSimplex>>,
    out: &mut Vec<SSetMorphism>,
) -> Result<()> {
    if dim > search_limit || (dim == search_limit && index == s.cell_count(dim)) {
        // extend uniquely through the remaining dimensions
        let mut full = assignment.clone();
        for k in (search_limit + 1)..=s.truncation() {
            for cell in s.cells(k) {
                let mut matches = levels[k].iter().filter(|candidate| {
                    (0..=k).all(|i| {
                        x.face_op(candidate, i) == apply_partial(x, &full, s.face(cell, i))
                    })
                });
                let Some(first) = matches.next() else {
                    return Err(Error::CoskeletalViolation {
                        dim: k,
                        fillers: 0,
                    });
                };
                if matches.next().is_some() {
                    return Err(Error::CoskeletalViolation {
                        dim: k,
                        fillers: 2,
                    });
                }
                full[k].push(first.clone());
            }
        }
        out.push(SSetMorphism::new(s.clone(), x.clone(), full)?);
        return Ok(());
    }
    if index == s.cell_count(dim) {
        return search_maps(s, x, levels, search_limit, dim + 1, 0, assignment, out);
    }
    let cell = CellRef { dim, index };
    for candidate in &levels[dim] {
        if faces_compatible(s, x, assignment, cell, candidate) {
            assignment[dim].push(candidate.clone());
            search_maps(s, x, levels, search_limit, dim, index + 1, assignment, out)?;
            assignment[dim].pop();
        }
    }
    Ok(())
}

/// Enumerate maps by brute force over every dimension, ignoring any
/// declared coskeletal bound. Used to cross-validate the shortcut.
pub fn enumerate_maps_brute(s: &Arc<FinSSet>, x: &Arc<FinSSet>) -> Result<Vec<SSetMorphism>> {
    let mut stripped = (**x).clone();
    stripped.set_coskeletal_bound(None);
    let stripped = Arc::new(stripped);
    let maps = enumerate_maps(s, &stripped)?;
    maps.into_iter()
        .map(|m| SSetMorphism::new(s.clone(), x.clone(), m.assignment().clone()))
        .collect()
}

/// A cofibration to lift against.
#[derive(Debug, Clone)]
pub enum InclusionSpec {
    /// The boundary inclusion into the standard n-simplex.
    Boundary(usize),
    /// The horn inclusion into the standard n-simplex.
    Horn(usize, usize),
    /// An arbitrary subcomplex inclusion.
    Custom {
        ambient: Arc<FinSSet>,
        source: SubcomplexMask,
    },
}

/// A realized inclusion: source, total complex, and the inclusion map.
pub struct Inclusion {
    pub source: Arc<FinSSet>,
    pub total: Arc<FinSSet>,
    pub include: SSetMorphism,
    /// For each source cell, the corresponding total cell.
    pub cell_in_total: Vec<Vec<CellRef>>,
}

impl InclusionSpec {
    pub fn realize(&self, truncation: usize) -> Result<Inclusion> {
        match self {
            InclusionSpec::Boundary(n) => {
                let total = Arc::new(standard_complex(StandardKind::Simplex, *n, truncation)?);
                let source = Arc::new(standard_complex(StandardKind::Boundary, *n, truncation)?);
                inclusion_by_name(source, total)
            }
            InclusionSpec::Horn(n, i) => {
                let total = Arc::new(standard_complex(StandardKind::Simplex, *n, truncation)?);
                let source = Arc::new(standard_complex(StandardKind::Horn(*i), *n, truncation)?);
                inclusion_by_name(source, total)
            }
            InclusionSpec::Custom { ambient, source } => {
                source.validate_closed(ambient)?;
                let (sub, owner_cells) = source.extract(ambient);
                let source_arc = Arc::new(sub);
                let cell_in_total: Vec<Vec<CellRef>> = owner_cells
                    .iter()
                    .enumerate()
                    .map(|(dim, level)| {
                        level.iter().map(|&index| CellRef { dim, index }).collect()
                    })
                    .collect();
                let assignment = cell_in_total
                    .iter()
                    .map(|level| {
                        level
                            .iter()
                            .map(|&c| NormalSimplex::nondegenerate(c))
                            .collect()
                    })
                    .collect();
                let include =
                    SSetMorphism::new(source_arc.clone(), ambient.clone(), assignment)?;
                Ok(Inclusion {
                    source: source_arc,
                    total: ambient.clone(),
                    include,
                    cell_in_total,
                })
            }
        }
    }
}

fn inclusion_by_name(source: Arc<FinSSet>, total: Arc<FinSSet>) -> Result<Inclusion> {
    let mut cell_in_total = Vec::new();
    let mut assignment = Vec::new();
    for k in 0..=source.truncation() {
        let mut level = Vec::new();
        let mut images = Vec::new();
        for cell in source.cells(k) {
            let target = total
                .cell_by_name(source.cell_name(cell))
                .ok_or_else(|| Error::Malformed(format!("missing cell {}", source.cell_name(cell))))?;
            level.push(target);
            images.push(NormalSimplex::nondegenerate(target));
        }
        cell_in_total.push(level);
        assignment.push(images);
    }
    let include = SSetMorphism::new(source.clone(), total.clone(), assignment)?;
    Ok(Inclusion {
        source,
        total,
        include,
        cell_in_total,
    })
}

/// A commuting square against `f`, asking for a diagonal.
pub struct LiftingProblem<'a> {
    pub inclusion: &'a Inclusion,
    pub f: &'a SSetMorphism,
    pub top: SSetMorphism,
    pub bottom: SSetMorphism,
}

impl<'a> LiftingProblem<'a> {
    pub fn validate(&self) -> Result<()> {
        let via_top = self.top.then(self.f)?;
        let via_incl = self.inclusion.include.then(&self.bottom)?;
        if via_top != via_incl {
            return Err(Error::Malformed("lifting square does not commute".into()));
        }
        Ok(())
    }
}

/// Search a diagonal filler for a commuting square; returns the canonical
/// lift if one exists.
pub fn lifting_check(problem: &LiftingProblem<'_>) -> Result<Option<SSetMorphism>> {
    problem.validate()?;
    let total = &problem.inclusion.total;
    let x = problem.f.source();
    // forced values on cells in the image of the inclusion
    let mut forced: Vec<Vec<Option<NormalSimplex>>> = (0..=total.truncation())
        .map(|k| vec![None; total.cell_count(k)])
        .collect();
    for k in 0..=problem.inclusion.source.truncation() {
        for cell in problem.inclusion.source.cells(k) {
            let in_total = problem.inclusion.cell_in_total[k][cell.index];
            forced[in_total.dim][in_total.index] =
                Some(problem.top.image_of_cell(cell).clone());
        }
    }
    let levels: Vec<Vec<NormalSimplex>> = (0..=total.truncation()).map(|k| x.level(k)).collect();
    let mut assignment: Vec<Vec<NormalSimplex>> = (0..=total.truncation())
        .map(|k| Vec::with_capacity(total.cell_count(k)))
        .collect();
    let found = search_lift(problem, &levels, &forced, 0, 0, &mut assignment);
    if found {
        Ok(Some(SSetMorphism::new(
            total.clone(),
            x.clone(),
            assignment,
        )?))
    } else {
        Ok(None)
    }
}

fn search_lift(
    problem: &LiftingProblem<'_>,
    levels: &[Vec<NormalSimplex>],
    forced: &[Vec<Option<NormalSimplex>>],
    dim: usize,
    index: usize,
    assignment: &mut Vec<Vec<NormalSimplex>>,
) -> bool {
    let total = &problem.inclusion.total;
    let x = problem.f.source();
    if dim > total.truncation() {
        return true;
    }
    if index == total.cell_count(dim) {
        return search_lift(problem, levels, forced, dim + 1, 0, assignment);
    }
    let cell = CellRef { dim, index };
    let try_candidate = |candidate: &NormalSimplex, assignment: &mut Vec<Vec<NormalSimplex>>| {
        // projection through f must match the given bottom map
        if problem.f.apply(candidate) != *problem.bottom.image_of_cell(cell) {
            return None;
        }
        if !faces_compatible(total, x, assignment, cell, candidate) {
            return None;
        }
        assignment[dim].push(candidate.clone());
        Some(())
    };
    match &forced[dim][index] {
        Some(value) => {
            if try_candidate(value, assignment).is_some() {
                if search_lift(problem, levels, forced, dim, index + 1, assignment) {
                    return true;
                }
                assignment[dim].pop();
            }
            false
        }
        None => {
            for candidate in &levels[dim] {
                if try_candidate(candidate, assignment).is_some() {
                    if search_lift(problem, levels, forced, dim, index + 1, assignment) {
                        return true;
                    }
                    assignment[dim].pop();
                }
            }
            false
        }
    }
}

/// Which family of inclusions a report ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    InnerHorns,
    AllHorns,
    Boundaries,
}

impl Family {
    pub fn label(&self) -> &'static str {
        match self {
            Family::InnerHorns => "inner_horns",
            Family::AllHorns => "all_horns",
            Family::Boundaries => "boundaries",
        }
    }

    fn rows(&self, max_dim: usize) -> Vec<(usize, Option<usize>)> {
        let mut out = Vec::new();
        match self {
            Family::InnerHorns => {
                for n in 2..=max_dim {
                    for i in 1..n {
                        out.push((n, Some(i)));
                    }
                }
            }
            Family::AllHorns => {
                for n in 1..=max_dim {
                    for i in 0..=n {
                        out.push((n, Some(i)));
                    }
                }
            }
            Family::Boundaries => {
                for n in 0..=max_dim {
                    out.push((n, None));
                }
            }
        }
        out
    }
}

/// One unsolvable square, kept for the report.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub n: usize,
    pub i: Option<usize>,
    /// Images of the source cells under the top map, rendered in the
    /// codomain's cell names.
    pub top_description: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct ReportRow {
    pub n: usize,
    pub i: Option<usize>,
    pub squares: usize,
    pub surjective: bool,
    pub counterexample: Option<Counterexample>,
}

/// Per-dimension surjectivity results of the induced maps `<i|f>`.
#[derive(Debug, Clone)]
pub struct FibrationReport {
    pub family: Family,
    pub max_dim: usize,
    pub rows: Vec<ReportRow>,
}

impl FibrationReport {
    pub fn all_surjective(&self) -> bool {
        self.rows.iter().all(|r| r.surjective)
    }
}

/// Exhaustively test surjectivity of `<i|f>` for every inclusion in the
/// family up to `max_dim`, by enumerating the fiber-product elements
/// (squares) and solving each lifting problem.
pub fn fibration_report(f: &SSetMorphism, family: Family, max_dim: usize) -> Result<FibrationReport> {
    let x = f.source();
    let y = f.target();
    if max_dim > x.truncation() || max_dim > y.truncation() {
        return Err(Error::TruncationInsufficient {
            needed: max_dim,
            available: x.truncation().min(y.truncation()),
        });
    }
    let mut rows = Vec::new();
    for (n, i) in family.rows(max_dim) {
        let spec = match i {
            Some(i) => InclusionSpec::Horn(n, i),
            None => InclusionSpec::Boundary(n),
        };
        let inclusion = spec.realize(x.truncation())?;
        let bottoms = enumerate_maps(&inclusion.total, y)?;
        let mut squares = 0usize;
        let mut counterexample = None;
        'rows: for bottom in &bottoms {
            let restricted = inclusion.include.then(bottom)?;
            let tops = enumerate_maps(&inclusion.source, x)?;
            for top in tops {
                if top.then(f)? != restricted {
                    continue;
                }
                squares += 1;
                let problem = LiftingProblem {
                    inclusion: &inclusion,
                    f,
                    top: top.clone(),
                    bottom: bottom.clone(),
                };
                if lifting_check(&problem)?.is_none() {
                    let top_description = (0..=inclusion.source.truncation())
                        .flat_map(|k| {
                            inclusion.source.cells(k).map(|c| {
                                format!(
                                    "{} -> {}",
                                    inclusion.source.cell_name(c),
                                    x.display_simplex(top.image_of_cell(c))
                                )
                            })
                        })
                        .collect();
                    counterexample = Some(Counterexample {
                        n,
                        i,
                        top_description,
                    });
                    break 'rows;
                }
            }
        }
        rows.push(ReportRow {
            n,
            i,
            squares,
            surjective: counterexample.is_none(),
            counterexample,
        });
    }
    Ok(FibrationReport {
        family,
        max_dim,
        rows,
    })
}

/// Inner-horn filling report for `X` (against the point).
pub fn quasicategory_report(x: &Arc<FinSSet>, max_dim: usize) -> Result<FibrationReport> {
    fibration_report(&SSetMorphism::terminal(x.clone()), Family::InnerHorns, max_dim)
}

/// All-horn filling report for `X` (against the point).
pub fn kan_report(x: &Arc<FinSSet>, max_dim: usize) -> Result<FibrationReport> {
    fibration_report(&SSetMorphism::terminal(x.clone()), Family::AllHorns, max_dim)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(x: FinSSet) -> Arc<FinSSet> {
        Arc::new(x)
    }

    #[test]
    fn yoneda_count() {
        // Map(Delta^1, Delta^2) has one element per 1-simplex
        let d1 = arc(standard_complex(StandardKind::Simplex, 1, 2).unwrap());
        let d2 = arc(standard_complex(StandardKind::Simplex, 2, 2).unwrap());
        let maps = enumerate_maps(&d1, &d2).unwrap();
        assert_eq!(maps.len(), d2.level_size(1));
        assert_eq!(maps.len(), 6);
        for m in &maps {
            m.validate().unwrap();
        }
    }

    #[test]
    fn empty_source_has_one_map() {
        let e = arc(FinSSet::empty(2));
        let d2 = arc(standard_complex(StandardKind::Simplex, 2, 2).unwrap());
        assert_eq!(enumerate_maps(&e, &d2).unwrap().len(), 1);
    }

    #[test]
    fn poset_nerve_fills_inner_horns() {
        let d2 = arc(standard_complex(StandardKind::Simplex, 2, 3).unwrap());
        let report = quasicategory_report(&d2, 3).unwrap();
        assert!(report.all_surjective());
    }

    #[test]
    fn interval_fails_outer_horn() {
        let d1 = arc(standard_complex(StandardKind::Simplex, 1, 2).unwrap());
        let report = kan_report(&d1, 2).unwrap();
        assert!(!report.all_surjective());
        let failing: Vec<_> = report
            .rows
            .iter()
            .filter(|r| !r.surjective)
            .map(|r| (r.n, r.i))
            .collect();
        assert!(failing.contains(&(2, Some(0))));
    }

    #[test]
    fn point_boundary_lift_solvable() {
        // mu_0 against any nonempty complex
        let d1 = arc(standard_complex(StandardKind::Simplex, 1, 1).unwrap());
        let report = fibration_report(
            &SSetMorphism::terminal(d1.clone()),
            Family::Boundaries,
            0,
        )
        .unwrap();
        assert!(report.all_surjective());
    }
}
