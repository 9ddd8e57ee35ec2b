//! Colimits and limits computed levelwise: dimensionwise pushouts and
//! binary products, plus the shared machinery that turns a levelwise
//! presentation (sets of simplices with face and degeneracy actions) back
//! into a complex in Eilenberg-Zilber normal form.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::monotone::{word_from_epi, word_to_epi, MonotoneMap};
use crate::morphism::SSetMorphism;
use crate::sset::{CellRef, FinSSet, NormalSimplex};

/// Rebuild a complex from a levelwise presentation.
///
/// `sizes[k]` is the number of simplices at level `k`; `face(k, e, i)` and
/// `deg(k, e, j)` give the actions as indices into the neighbouring
/// levels. Returns the complex together with the normal form of every
/// level element.
pub fn from_levels(
    truncation: usize,
    sizes: &[usize],
    mut face: impl FnMut(usize, usize, usize) -> usize,
    mut deg: impl FnMut(usize, usize, usize) -> usize,
    mut namer: impl FnMut(usize, usize) -> String,
) -> Result<(FinSSet, Vec<Vec<NormalSimplex>>)> {
    assert_eq!(sizes.len(), truncation + 1);
    // locate degenerate elements and one degeneracy expression for each
    let mut deg_source: Vec<Vec<Option<(usize, usize)>>> = (0..=truncation)
        .map(|k| vec![None; sizes[k]])
        .collect();
    for k in 0..truncation {
        for e in 0..sizes[k] {
            for j in 0..=k {
                let target = deg(k, e, j);
                if deg_source[k + 1][target].is_none() {
                    deg_source[k + 1][target] = Some((j, e));
                }
            }
        }
    }
    let mut names: Vec<Vec<String>> = vec![Vec::new(); truncation + 1];
    let mut used_names: BTreeMap<String, usize> = BTreeMap::new();
    let mut nf: Vec<Vec<NormalSimplex>> = Vec::with_capacity(truncation + 1);
    for k in 0..=truncation {
        let mut level_nf = Vec::with_capacity(sizes[k]);
        for e in 0..sizes[k] {
            match deg_source[k][e] {
                None => {
                    let index = names[k].len();
                    let mut name = namer(k, e);
                    if let Some(count) = used_names.get_mut(&name) {
                        *count += 1;
                        name = format!("{name}~{count}");
                    }
                    used_names.insert(name.clone(), 1);
                    names[k].push(name);
                    level_nf.push(NormalSimplex::nondegenerate(CellRef { dim: k, index }));
                }
                Some((j, sub)) => {
                    let below: &NormalSimplex = &nf[k - 1][sub];
                    let epi = word_to_epi(&below.degeneracies, below.cell.dim);
                    let total = epi
                        .compose(&MonotoneMap::codegeneracy(k - 1, j))
                        .expect("dimensions agree");
                    level_nf.push(NormalSimplex {
                        degeneracies: word_from_epi(&total),
                        cell: below.cell,
                    });
                }
            }
        }
        nf.push(level_nf);
    }
    let mut faces: Vec<Vec<Vec<NormalSimplex>>> = vec![Vec::new(); truncation + 1];
    for k in 0..=truncation {
        for e in 0..sizes[k] {
            if !nf[k][e].is_nondegenerate() {
                continue;
            }
            if k == 0 {
                faces[0].push(Vec::new());
            } else {
                let entry = (0..=k).map(|i| nf[k - 1][face(k, e, i)].clone()).collect();
                faces[k].push(entry);
            }
        }
    }
    let complex = FinSSet::from_parts(truncation, names, faces, None)?;
    Ok((complex, nf))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Result of a dimensionwise pushout, with the two structure maps and a
/// representative simplex for every cell of the result.
pub struct Pushout {
    pub complex: Arc<FinSSet>,
    pub from_left: SSetMorphism,
    pub from_right: SSetMorphism,
    reps: Vec<Vec<(Side, NormalSimplex)>>,
}

impl Pushout {
    /// The induced map out of the pushout for a commuting cocone.
    pub fn induced(&self, u: &SSetMorphism, v: &SSetMorphism) -> Result<SSetMorphism> {
        if u.target().as_ref() != v.target().as_ref() {
            return Err(Error::Malformed("cocone legs must share a target".into()));
        }
        let assignment = self
            .reps
            .iter()
            .map(|level| {
                level
                    .iter()
                    .map(|(side, ns)| match side {
                        Side::Left => u.apply(ns),
                        Side::Right => v.apply(ns),
                    })
                    .collect()
            })
            .collect();
        SSetMorphism::new(self.complex.clone(), u.target().clone(), assignment)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        // keep the smaller index as representative for determinism
        if ra < rb {
            self.parent[rb] = ra;
        } else if rb < ra {
            self.parent[ra] = rb;
        }
    }
}

fn level_index(complex: &FinSSet, k: usize) -> (Vec<NormalSimplex>, BTreeMap<NormalSimplex, usize>)
{
    let level = complex.level(k);
    let map = level
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, ns)| (ns, i))
        .collect();
    (level, map)
}

/// Dimensionwise pushout of `f: A -> S` and `g: A -> T` along their
/// common source.
pub fn pushout(f: &SSetMorphism, g: &SSetMorphism) -> Result<Pushout> {
    if f.source().as_ref() != g.source().as_ref() {
        return Err(Error::Malformed("pushout legs must share a source".into()));
    }
    let s = f.target().clone();
    let t = g.target().clone();
    let a = f.source();
    if s.truncation() != t.truncation() {
        return Err(Error::TruncationMismatch {
            left: s.truncation(),
            right: t.truncation(),
        });
    }
    if a.truncation() != s.truncation() {
        return Err(Error::TruncationMismatch {
            left: a.truncation(),
            right: s.truncation(),
        });
    }
    let trunc = s.truncation();

    let mut s_levels = Vec::new();
    let mut t_levels = Vec::new();
    let mut classes: Vec<Vec<usize>> = Vec::new(); // per level: element -> class id
    let mut class_members: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut sizes = Vec::new();
    for k in 0..=trunc {
        let (sl, sm) = level_index(&s, k);
        let (tl, tm) = level_index(&t, k);
        let sn = sl.len();
        let total = sn + tl.len();
        let mut uf = UnionFind::new(total);
        for ans in a.level(k) {
            let fa = f.apply(&ans);
            let ga = g.apply(&ans);
            uf.union(sm[&fa], sn + tm[&ga]);
        }
        let mut root_of = vec![0usize; total];
        let mut class_id: BTreeMap<usize, usize> = BTreeMap::new();
        for e in 0..total {
            root_of[e] = uf.find(e);
        }
        let mut member_lists: Vec<Vec<usize>> = Vec::new();
        let mut element_class = vec![0usize; total];
        for (e, &root) in root_of.iter().enumerate() {
            let id = *class_id.entry(root).or_insert_with(|| {
                member_lists.push(Vec::new());
                member_lists.len() - 1
            });
            element_class[e] = id;
            member_lists[id].push(e);
        }
        sizes.push(member_lists.len());
        classes.push(element_class);
        class_members.push(member_lists);
        s_levels.push(sl);
        t_levels.push(tl);
    }

    let decode = |k: usize, e: usize| -> (Side, &NormalSimplex) {
        let sn = s_levels[k].len();
        if e < sn {
            (Side::Left, &s_levels[k][e])
        } else {
            (Side::Right, &t_levels[k][e - sn])
        }
    };
    let level_maps: Vec<(BTreeMap<NormalSimplex, usize>, BTreeMap<NormalSimplex, usize>)> = (0
        ..=trunc)
        .map(|k| {
            let sm = s_levels[k]
                .iter()
                .cloned()
                .enumerate()
                .map(|(i, ns)| (ns, i))
                .collect();
            let tm = t_levels[k]
                .iter()
                .cloned()
                .enumerate()
                .map(|(i, ns)| (ns, i))
                .collect();
            (sm, tm)
        })
        .collect();
    let encode = |k: usize, side: Side, ns: &NormalSimplex| -> usize {
        match side {
            Side::Left => level_maps[k].0[ns],
            Side::Right => s_levels[k].len() + level_maps[k].1[ns],
        }
    };

    let face = |k: usize, class: usize, i: usize| -> usize {
        let e = class_members[k][class][0];
        let (side, ns) = decode(k, e);
        let image = match side {
            Side::Left => s.face_op(ns, i),
            Side::Right => t.face_op(ns, i),
        };
        classes[k - 1][encode(k - 1, side, &image)]
    };
    let deg = |k: usize, class: usize, j: usize| -> usize {
        let e = class_members[k][class][0];
        let (side, ns) = decode(k, e);
        let image = match side {
            Side::Left => s.degeneracy_op(ns, j),
            Side::Right => t.degeneracy_op(ns, j),
        };
        classes[k + 1][encode(k + 1, side, &image)]
    };
    let namer = |k: usize, class: usize| -> String {
        // prefer a nondegenerate left-hand cell name, then right-hand
        for &e in &class_members[k][class] {
            let (side, ns) = decode(k, e);
            if side == Side::Left && ns.is_nondegenerate() {
                return s.cell_name(ns.cell).to_string();
            }
        }
        for &e in &class_members[k][class] {
            let (side, ns) = decode(k, e);
            if side == Side::Right && ns.is_nondegenerate() {
                return format!("t:{}", t.cell_name(ns.cell));
            }
        }
        format!("q{k}_{class}")
    };

    let (complex, nf) = from_levels(trunc, &sizes, face, deg, namer)?;
    let complex = Arc::new(complex);

    let assign = |side: Side, from: &Arc<FinSSet>| -> Result<SSetMorphism> {
        let assignment = (0..=trunc)
            .map(|k| {
                from.cells(k)
                    .map(|cell| {
                        let e = encode(k, side, &NormalSimplex::nondegenerate(cell));
                        nf[k][classes[k][e]].clone()
                    })
                    .collect()
            })
            .collect();
        SSetMorphism::new(from.clone(), complex.clone(), assignment)
    };
    let from_left = assign(Side::Left, &s)?;
    let from_right = assign(Side::Right, &t)?;

    let reps = (0..=trunc)
        .map(|k| {
            (0..sizes[k])
                .filter(|&class| nf[k][class].is_nondegenerate())
                .map(|class| {
                    let (side, ns) = decode(k, class_members[k][class][0]);
                    (side, ns.clone())
                })
                .collect()
        })
        .collect();

    Ok(Pushout {
        complex,
        from_left,
        from_right,
        reps,
    })
}

/// Result of a binary product, with projections and pairing support.
pub struct Product {
    pub complex: Arc<FinSSet>,
    pub proj_left: SSetMorphism,
    pub proj_right: SSetMorphism,
    left_index: Vec<BTreeMap<NormalSimplex, usize>>,
    right_index: Vec<BTreeMap<NormalSimplex, usize>>,
    right_sizes: Vec<usize>,
    nf: Vec<Vec<NormalSimplex>>,
}

impl Product {
    /// Normal form of the pair of two equal-dimension simplices.
    pub fn pair_normal_form(&self, left: &NormalSimplex, right: &NormalSimplex) -> NormalSimplex {
        let k = left.dim();
        assert_eq!(k, right.dim());
        let e = self.left_index[k][left] * self.right_sizes[k] + self.right_index[k][right];
        self.nf[k][e].clone()
    }

    /// The pairing `<u, v>: W -> X x Y` of a commuting cone.
    pub fn pair(&self, u: &SSetMorphism, v: &SSetMorphism) -> Result<SSetMorphism> {
        if u.source().as_ref() != v.source().as_ref() {
            return Err(Error::Malformed("cone legs must share a source".into()));
        }
        let assignment = (0..=u.source().truncation())
            .map(|k| {
                u.source()
                    .cells(k)
                    .map(|cell| {
                        self.pair_normal_form(u.image_of_cell(cell), v.image_of_cell(cell))
                    })
                    .collect()
            })
            .collect();
        SSetMorphism::new(u.source().clone(), self.complex.clone(), assignment)
    }
}

/// Dimensionwise product of two complexes of equal truncation.
pub fn product(x: &Arc<FinSSet>, y: &Arc<FinSSet>) -> Result<Product> {
    if x.truncation() != y.truncation() {
        return Err(Error::TruncationMismatch {
            left: x.truncation(),
            right: y.truncation(),
        });
    }
    let trunc = x.truncation();
    let mut x_levels = Vec::new();
    let mut y_levels = Vec::new();
    let mut x_index = Vec::new();
    let mut y_index = Vec::new();
    let mut sizes = Vec::new();
    for k in 0..=trunc {
        let (xl, xm) = level_index(x, k);
        let (yl, ym) = level_index(y, k);
        sizes.push(xl.len() * yl.len());
        x_levels.push(xl);
        y_levels.push(yl);
        x_index.push(xm);
        y_index.push(ym);
    }
    let right_sizes: Vec<usize> = y_levels.iter().map(Vec::len).collect();

    let face = |k: usize, e: usize, i: usize| -> usize {
        let (xi, yi) = (e / right_sizes[k], e % right_sizes[k]);
        let fx = x.face_op(&x_levels[k][xi], i);
        let fy = y.face_op(&y_levels[k][yi], i);
        x_index[k - 1][&fx] * right_sizes[k - 1] + y_index[k - 1][&fy]
    };
    let deg = |k: usize, e: usize, j: usize| -> usize {
        let (xi, yi) = (e / right_sizes[k], e % right_sizes[k]);
        let dx = x.degeneracy_op(&x_levels[k][xi], j);
        let dy = y.degeneracy_op(&y_levels[k][yi], j);
        x_index[k + 1][&dx] * right_sizes[k + 1] + y_index[k + 1][&dy]
    };
    let namer = |k: usize, e: usize| -> String {
        let (xi, yi) = (e / right_sizes[k], e % right_sizes[k]);
        format!(
            "({},{})",
            x.display_simplex(&x_levels[k][xi]),
            y.display_simplex(&y_levels[k][yi])
        )
    };
    let (complex, nf) = from_levels(trunc, &sizes, face, deg, namer)?;
    let complex = Arc::new(complex);

    let mut proj_left_assignment = vec![Vec::new(); trunc + 1];
    let mut proj_right_assignment = vec![Vec::new(); trunc + 1];
    for k in 0..=trunc {
        for e in 0..sizes[k] {
            if nf[k][e].is_nondegenerate() {
                let (xi, yi) = (e / right_sizes[k], e % right_sizes[k]);
                proj_left_assignment[k].push(x_levels[k][xi].clone());
                proj_right_assignment[k].push(y_levels[k][yi].clone());
            }
        }
    }
    let proj_left = SSetMorphism::new(complex.clone(), x.clone(), proj_left_assignment)?;
    let proj_right = SSetMorphism::new(complex.clone(), y.clone(), proj_right_assignment)?;

    Ok(Product {
        complex,
        proj_left,
        proj_right,
        left_index: x_index,
        right_index: y_index,
        right_sizes,
        nf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{standard_complex, StandardKind};

    fn arc(x: FinSSet) -> Arc<FinSSet> {
        Arc::new(x)
    }

    #[test]
    fn product_interval_point() {
        let d1 = arc(standard_complex(StandardKind::Simplex, 1, 2).unwrap());
        let pt = arc(FinSSet::point(2));
        let p = product(&d1, &pt).unwrap();
        assert_eq!(p.complex.cell_counts(), vec![2, 1, 0]);
        p.complex.validate().unwrap();
        p.proj_left.validate().unwrap();
        p.proj_right.validate().unwrap();
    }

    #[test]
    fn product_square() {
        let d1 = arc(standard_complex(StandardKind::Simplex, 1, 2).unwrap());
        let p = product(&d1, &d1).unwrap();
        assert_eq!(p.complex.cell_counts(), vec![4, 5, 2]);
        p.complex.validate().unwrap();
    }

    #[test]
    fn product_prism_three_cells() {
        let d1 = arc(standard_complex(StandardKind::Simplex, 1, 3).unwrap());
        let d2 = arc(standard_complex(StandardKind::Simplex, 2, 3).unwrap());
        let p = product(&d1, &d2).unwrap();
        assert_eq!(p.complex.cell_count(3), 3);
        p.complex.validate().unwrap();
    }

    #[test]
    fn pushout_fills_horn() {
        // glue the 2-simplex to the horn along the identity: get the simplex back
        let horn = arc(standard_complex(StandardKind::Horn(0), 2, 2).unwrap());
        let simplex = arc(standard_complex(StandardKind::Simplex, 2, 2).unwrap());
        let id = SSetMorphism::identity(horn.clone());
        let incl = crate::mapping::enumerate_maps(&horn, &simplex)
            .unwrap()
            .into_iter()
            .find(|m| m.is_levelwise_injective())
            .expect("inclusion exists");
        let po = pushout(&id, &incl).unwrap();
        assert_eq!(po.complex.cell_counts(), vec![3, 3, 1]);
        po.complex.validate().unwrap();
        po.from_left.validate().unwrap();
        po.from_right.validate().unwrap();
    }

    #[test]
    fn pushout_circle() {
        // two intervals glued along both endpoints
        let two_points = {
            let mut names = vec![Vec::new(); 2];
            names[0].push("a".into());
            names[0].push("b".into());
            let mut faces = vec![Vec::new(); 2];
            faces[0].push(Vec::new());
            faces[0].push(Vec::new());
            arc(FinSSet::from_parts(1, names, faces, None).unwrap())
        };
        let d1 = arc(standard_complex(StandardKind::Simplex, 1, 1).unwrap());
        let endpoints = SSetMorphism::new(
            two_points.clone(),
            d1.clone(),
            vec![
                vec![
                    NormalSimplex::nondegenerate(CellRef { dim: 0, index: 0 }),
                    NormalSimplex::nondegenerate(CellRef { dim: 0, index: 1 }),
                ],
                Vec::new(),
            ],
        )
        .unwrap();
        let po = pushout(&endpoints, &endpoints).unwrap();
        assert_eq!(po.complex.cell_counts(), vec![2, 2]);
        po.complex.validate().unwrap();
    }
}
