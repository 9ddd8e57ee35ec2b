//! The mapping complex out of the thick simplices, its image in the base
//! complex, and desk-scale verification of the idempotence and fibrancy
//! statements about them.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::colimit::from_levels;
use crate::error::{Error, Result};
use crate::iso::iso_check;
use crate::mapping::{enumerate_maps, fibration_report, Family, FibrationReport};
use crate::monotone::MonotoneMap;
use crate::morphism::SSetMorphism;
use crate::sset::{CellRef, FinSSet, NormalSimplex, SubcomplexMask};
use crate::thick::{materialize, Materialized, ThickRegion};

/// The complex whose n-simplices are the maps out of the thick n-simplex,
/// with faces and degeneracies by precomposition.
pub struct GTildeComplex {
    pub base: Arc<FinSSet>,
    pub complex: Arc<FinSSet>,
    /// All maps per level, in canonical order.
    pub levels: Vec<Vec<SSetMorphism>>,
    /// Normal form of every level element in `complex`.
    nf: Vec<Vec<NormalSimplex>>,
    /// The unit: restrict along the inclusion of the spine simplex.
    pub unit: SSetMorphism,
}

impl GTildeComplex {
    pub fn level_counts(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    /// Level element of a nondegenerate cell.
    pub fn map_of_cell(&self, cell: CellRef) -> &SSetMorphism {
        let element = self.nf[cell.dim]
            .iter()
            .position(|ns| ns.is_nondegenerate() && ns.cell == cell)
            .expect("cell comes from a level element");
        &self.levels[cell.dim][element]
    }
}

/// The morphism of thick simplices induced by a vertex map.
fn induced_thick_map(
    f: &MonotoneMap,
    source: &Materialized,
    target: &Materialized,
) -> SSetMorphism {
    let assignment = (0..=source.complex.truncation())
        .map(|k| {
            source
                .complex
                .cells(k)
                .map(|cell| {
                    let seq = source.seq_of_cell(cell);
                    let mapped: Vec<usize> = seq.iter().map(|&v| f.apply(v)).collect();
                    target
                        .normal_of_seq(&mapped)
                        .expect("image lies in the full thick simplex")
                })
                .collect()
        })
        .collect();
    SSetMorphism::new(
        source.complex.clone(),
        target.complex.clone(),
        assignment,
    )
    .expect("vertex maps induce simplicial maps")
}

/// Compute the mapping complex out of the thick simplices up to level D.
///
/// The base must carry a coskeletal bound `c` and be specified up to
/// `max(c + 1, D)`.
pub fn gtilde(base: &Arc<FinSSet>, levels_to: usize) -> Result<GTildeComplex> {
    let c = base
        .coskeletal_bound()
        .ok_or(Error::MissingCoskeletalBound)?;
    let source_trunc = (c + 1).max(levels_to);
    if base.truncation() < source_trunc {
        return Err(Error::TruncationInsufficient {
            needed: source_trunc,
            available: base.truncation(),
        });
    }
    let thicks: Vec<Materialized> = (0..=levels_to)
        .map(|n| materialize(ThickRegion::Full(n), source_trunc))
        .collect::<Result<_>>()?;
    let mut levels: Vec<Vec<SSetMorphism>> = Vec::with_capacity(levels_to + 1);
    let mut level_index: Vec<BTreeMap<Vec<Vec<NormalSimplex>>, usize>> = Vec::new();
    for n in 0..=levels_to {
        let maps = enumerate_maps(&thicks[n].complex, base)?;
        let index = maps
            .iter()
            .enumerate()
            .map(|(t, m)| (m.assignment().clone(), t))
            .collect();
        levels.push(maps);
        level_index.push(index);
    }
    let sizes: Vec<usize> = levels.iter().map(Vec::len).collect();

    let face = |k: usize, e: usize, i: usize| -> usize {
        let incl = induced_thick_map(&MonotoneMap::coface(k, i), &thicks[k - 1], &thicks[k]);
        let composed = incl.then(&levels[k][e]).expect("composable");
        level_index[k - 1][composed.assignment()]
    };
    let deg = |k: usize, e: usize, j: usize| -> usize {
        let collapse =
            induced_thick_map(&MonotoneMap::codegeneracy(k, j), &thicks[k + 1], &thicks[k]);
        let composed = collapse.then(&levels[k][e]).expect("composable");
        level_index[k + 1][composed.assignment()]
    };
    let namer = |k: usize, e: usize| -> String { format!("m{k}_{e}") };

    let (mut complex, nf) = from_levels(levels_to, &sizes, face, deg, namer)?;
    complex.set_coskeletal_bound(Some(c));
    let complex = Arc::new(complex);

    // the unit evaluates a map at the spine simplex (0, 1, ..., n)
    let unit_assignment: Vec<Vec<NormalSimplex>> = (0..=levels_to)
        .map(|n| {
            let spine: Vec<usize> = (0..=n).collect();
            let spine_cell = thicks[n]
                .cell_of_seq(&spine)
                .expect("the spine is a thick cell");
            (0..sizes[n])
                .filter(|&e| nf[n][e].is_nondegenerate())
                .map(|e| levels[n][e].image_of_cell(spine_cell).clone())
                .collect()
        })
        .collect();
    let unit = SSetMorphism::new(complex.clone(), base.clone(), unit_assignment)?;

    Ok(GTildeComplex {
        base: base.clone(),
        complex,
        levels,
        nf,
        unit,
    })
}

/// The image of the unit: the subcomplex of simplices that extend to the
/// thick simplex.
pub struct GammaComplex {
    pub mask: SubcomplexMask,
    pub complex: Arc<FinSSet>,
    pub inclusion: SSetMorphism,
    pub surjection: SSetMorphism,
    pub gtilde: GTildeComplex,
}

pub fn gamma(base: &Arc<FinSSet>, levels_to: usize) -> Result<GammaComplex> {
    let gt = gtilde(base, levels_to)?;
    let truncated_base = Arc::new(base.truncate(levels_to));
    // image subcomplex of the unit: the base of every unit value is hit
    let mut mask = SubcomplexMask::empty(&truncated_base);
    for k in 0..=levels_to {
        for cell in gt.complex.cells(k) {
            mask.insert(gt.unit.image_of_cell(cell).cell);
        }
    }
    mask.validate_closed(&truncated_base)?;
    let (sub, owner_cells) = mask.extract(&truncated_base);
    let complex = Arc::new(sub);
    // index of each owner cell inside the extracted subcomplex
    let mut into_sub: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); levels_to + 1];
    for (dim, level) in owner_cells.iter().enumerate() {
        for (sub_index, &owner_index) in level.iter().enumerate() {
            into_sub[dim].insert(owner_index, sub_index);
        }
    }
    let inclusion_assignment = (0..=levels_to)
        .map(|k| {
            complex
                .cells(k)
                .map(|cell| {
                    NormalSimplex::nondegenerate(CellRef {
                        dim: k,
                        index: owner_cells[k][cell.index],
                    })
                })
                .collect()
        })
        .collect();
    let inclusion = SSetMorphism::new(complex.clone(), base.clone(), inclusion_assignment)?;
    let surjection_assignment = (0..=levels_to)
        .map(|k| {
            gt.complex
                .cells(k)
                .map(|cell| {
                    let value = gt.unit.image_of_cell(cell);
                    NormalSimplex {
                        degeneracies: value.degeneracies.clone(),
                        cell: CellRef {
                            dim: value.cell.dim,
                            index: into_sub[value.cell.dim][&value.cell.index],
                        },
                    }
                })
                .collect()
        })
        .collect();
    let surjection = SSetMorphism::new(gt.complex.clone(), complex.clone(), surjection_assignment)?;
    Ok(GammaComplex {
        mask,
        complex,
        inclusion,
        surjection,
        gtilde: gt,
    })
}

/// Report for the idempotence statement: level counts of the three
/// complexes and whether the two comparison isomorphisms exist.
#[derive(Debug, Clone)]
pub struct Prop4Report {
    pub levels_to: usize,
    pub gtilde_counts: Vec<usize>,
    pub gtilde_gtilde_counts: Vec<usize>,
    pub gtilde_gamma_counts: Vec<usize>,
    pub iso_double: bool,
    pub iso_gamma: bool,
    pub pass: bool,
}

impl Prop4Report {
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("levels: 0..={}\n", self.levels_to));
        out.push_str(&format!("gtilde-levels: {:?}\n", self.gtilde_counts));
        out.push_str(&format!(
            "gtilde-gtilde-levels: {:?}\n",
            self.gtilde_gtilde_counts
        ));
        out.push_str(&format!(
            "gtilde-gamma-levels: {:?}\n",
            self.gtilde_gamma_counts
        ));
        out.push_str(&format!("iso gtilde(gtilde(X)) = gtilde(X): {}\n", self.iso_double));
        out.push_str(&format!("iso gtilde(gamma(X)) = gtilde(X): {}\n", self.iso_gamma));
        out.push_str(if self.pass { "RESULT: PASS\n" } else { "RESULT: FAIL\n" });
        out
    }
}

/// Check the two isomorphisms levelwise up to `levels_to`.
pub fn prop4_check(base: &Arc<FinSSet>, levels_to: usize) -> Result<Prop4Report> {
    let c = base
        .coskeletal_bound()
        .ok_or(Error::MissingCoskeletalBound)?;
    let inner_levels = (c + 1).max(levels_to);
    let gt = gtilde(base, inner_levels)?;
    let gm = gamma(base, inner_levels)?;
    let double = gtilde(&gt.complex, levels_to)?;
    let via_gamma = gtilde(&gm.complex, levels_to)?;
    let reference = Arc::new(gt.complex.truncate(levels_to));
    let iso_double = iso_check(&double.complex, &reference).is_some();
    let iso_gamma = iso_check(&via_gamma.complex, &reference).is_some();
    let gtilde_counts: Vec<usize> = (0..=levels_to).map(|n| gt.levels[n].len()).collect();
    let gtilde_gtilde_counts = double.level_counts();
    let gtilde_gamma_counts = via_gamma.level_counts();
    let counts_match = gtilde_counts == gtilde_gtilde_counts && gtilde_counts == gtilde_gamma_counts;
    let pass = iso_double && iso_gamma && counts_match;
    Ok(Prop4Report {
        levels_to,
        gtilde_counts,
        gtilde_gtilde_counts,
        gtilde_gamma_counts,
        iso_double,
        iso_gamma,
        pass,
    })
}

/// Report for the fibrancy statement.
#[derive(Debug, Clone)]
pub struct Theorem5Report {
    pub max_dim: usize,
    pub precondition_quasicategory: bool,
    pub gtilde_kan: Option<FibrationReport>,
    pub gamma_kan: Option<FibrationReport>,
    pub trivial_fibration: Option<FibrationReport>,
    pub pass: bool,
}

impl Theorem5Report {
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("max-dim: {}\n", self.max_dim));
        out.push_str(&format!(
            "precondition (quasicategory): {}\n",
            if self.precondition_quasicategory {
                "PASS"
            } else {
                "FAIL"
            }
        ));
        let verdict = |report: &Option<FibrationReport>| match report {
            None => "skipped",
            Some(r) if r.all_surjective() => "PASS",
            Some(_) => "FAIL",
        };
        out.push_str(&format!("gtilde all-horn filling: {}\n", verdict(&self.gtilde_kan)));
        out.push_str(&format!("gamma all-horn filling: {}\n", verdict(&self.gamma_kan)));
        out.push_str(&format!(
            "gtilde -> gamma boundary lifting: {}\n",
            verdict(&self.trivial_fibration)
        ));
        out.push_str(if self.pass { "RESULT: PASS\n" } else { "RESULT: FAIL\n" });
        out
    }
}

/// Run the all-horn reports on the mapping complex and its image, and the
/// boundary-lifting report on the surjection between them.
pub fn theorem5_check(base: &Arc<FinSSet>, max_dim: usize) -> Result<Theorem5Report> {
    let pre = crate::mapping::quasicategory_report(base, max_dim.min(base.truncation()))?;
    if !pre.all_surjective() {
        return Ok(Theorem5Report {
            max_dim,
            precondition_quasicategory: false,
            gtilde_kan: None,
            gamma_kan: None,
            trivial_fibration: None,
            pass: false,
        });
    }
    let gm = gamma(base, max_dim)?;
    let gtilde_kan = fibration_report(
        &SSetMorphism::terminal(gm.gtilde.complex.clone()),
        Family::AllHorns,
        max_dim,
    )?;
    let gamma_kan = fibration_report(
        &SSetMorphism::terminal(gm.complex.clone()),
        Family::AllHorns,
        max_dim,
    )?;
    let trivial_fibration = fibration_report(&gm.surjection, Family::Boundaries, max_dim)?;
    let pass = gtilde_kan.all_surjective()
        && gamma_kan.all_surjective()
        && trivial_fibration.all_surjective();
    Ok(Theorem5Report {
        max_dim,
        precondition_quasicategory: true,
        gtilde_kan: Some(gtilde_kan),
        gamma_kan: Some(gamma_kan),
        trivial_fibration: Some(trivial_fibration),
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nerve::{nerve_cyclic, nerve_contractible_groupoid};
    use crate::sset::{standard_complex, StandardKind};

    #[test]
    fn gtilde_of_thick_interval() {
        let full = materialize(ThickRegion::Full(1), 3).unwrap();
        let gt = gtilde(&full.complex, 2).unwrap();
        // (n+1)^{k+1} maps with n = 1
        assert_eq!(gt.level_counts(), vec![2, 4, 8]);
        gt.complex.validate().unwrap();
        gt.unit.validate().unwrap();
    }

    #[test]
    fn gtilde_of_poset_nerve_is_constant() {
        let d2 = Arc::new(standard_complex(StandardKind::Simplex, 2, 3).unwrap());
        let gt = gtilde(&d2, 2).unwrap();
        assert_eq!(gt.level_counts(), vec![3, 3, 3]);
    }

    #[test]
    fn gtilde_of_cyclic_group() {
        let x = nerve_cyclic(2, 3).unwrap();
        let gt = gtilde(&x, 2).unwrap();
        assert_eq!(gt.level_counts(), vec![1, 2, 4]);
    }

    #[test]
    fn gamma_of_poset_nerve_is_vertices() {
        let d2 = Arc::new(standard_complex(StandardKind::Simplex, 2, 3).unwrap());
        let gm = gamma(&d2, 3).unwrap();
        assert_eq!(gm.complex.cell_counts(), vec![3, 0, 0, 0]);
        gm.inclusion.validate().unwrap();
        gm.surjection.validate().unwrap();
    }

    #[test]
    fn gamma_of_group_nerve_is_everything() {
        let x = nerve_cyclic(2, 3).unwrap();
        let gm = gamma(&x, 3).unwrap();
        assert_eq!(gm.complex.cell_counts(), x.cell_counts());
    }

    #[test]
    fn gamma_of_parallel_pair_is_vertices() {
        let x = crate::nerve::nerve(&crate::nerve::parallel_pair_category(), 3).unwrap();
        let gm = gamma(&x, 3).unwrap();
        assert_eq!(gm.complex.cell_counts(), vec![2, 0, 0, 0]);
    }

    #[test]
    fn prop4_on_small_corpus() {
        let d1 = materialize(ThickRegion::Full(1), 3).unwrap();
        let report = prop4_check(&d1.complex, 2).unwrap();
        assert!(report.pass, "{}", report.render());
        assert_eq!(report.gtilde_counts, vec![2, 4, 8]);

        let x = nerve_cyclic(2, 3).unwrap();
        let report = prop4_check(&x, 2).unwrap();
        assert!(report.pass, "{}", report.render());
        assert_eq!(report.gtilde_counts, vec![1, 2, 4]);
    }

    #[test]
    fn theorem5_on_contractible_groupoid() {
        let x = nerve_contractible_groupoid(2, 3).unwrap();
        let report = theorem5_check(&x, 2).unwrap();
        assert!(report.pass, "{}", report.render());
    }
}
