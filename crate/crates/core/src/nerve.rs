//! Nerves of small finite categories, for the mapping and fibration test
//! corpus: cyclic groups, contractible groupoids, and a non-invertible
//! non-poset example.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::monotone::{word_from_epi, MonotoneMap};
use crate::sset::{CellRef, FinSSet, NormalSimplex};

/// A finite category presented by object count, arrows, and a full
/// composition table.
#[derive(Debug, Clone)]
pub struct FinCategory {
    pub objects: usize,
    pub arrows: Vec<Arrow>,
    pub identity: Vec<usize>,
    /// `compose[g][f]` is `g . f`, defined when `src(g) == tgt(f)`.
    compose: BTreeMap<(usize, usize), usize>,
}

#[derive(Debug, Clone)]
pub struct Arrow {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

impl FinCategory {
    pub fn new(
        objects: usize,
        arrows: Vec<Arrow>,
        identity: Vec<usize>,
        compose: BTreeMap<(usize, usize), usize>,
    ) -> Result<Self> {
        let cat = FinCategory {
            objects,
            arrows,
            identity,
            compose,
        };
        cat.validate()?;
        Ok(cat)
    }

    fn validate(&self) -> Result<()> {
        if self.identity.len() != self.objects {
            return Err(Error::Malformed("one identity per object required".into()));
        }
        for (o, &id) in self.identity.iter().enumerate() {
            let arrow = &self.arrows[id];
            if arrow.src != o || arrow.tgt != o {
                return Err(Error::Malformed("identity endpoints wrong".into()));
            }
        }
        for (g, arrow_g) in self.arrows.iter().enumerate() {
            for (f, arrow_f) in self.arrows.iter().enumerate() {
                let defined = self.compose.contains_key(&(g, f));
                if defined != (arrow_g.src == arrow_f.tgt) {
                    return Err(Error::Malformed("composition table domain wrong".into()));
                }
                if let Some(&gf) = self.compose.get(&(g, f)) {
                    if self.arrows[gf].src != arrow_f.src || self.arrows[gf].tgt != arrow_g.tgt {
                        return Err(Error::Malformed("composite endpoints wrong".into()));
                    }
                }
            }
        }
        // identity laws and associativity, by finite enumeration
        for (f, arrow_f) in self.arrows.iter().enumerate() {
            if self.compose[&(self.identity[arrow_f.tgt], f)] != f
                || self.compose[&(f, self.identity[arrow_f.src])] != f
            {
                return Err(Error::Malformed("identity law fails".into()));
            }
        }
        for (h, ah) in self.arrows.iter().enumerate() {
            for (g, ag) in self.arrows.iter().enumerate() {
                if ah.src != ag.tgt {
                    continue;
                }
                for (f, af) in self.arrows.iter().enumerate() {
                    if ag.src != af.tgt {
                        continue;
                    }
                    let left = self.compose[&(self.compose[&(h, g)], f)];
                    let right = self.compose[&(h, self.compose[&(g, f)])];
                    if left != right {
                        return Err(Error::Malformed("associativity fails".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_identity(&self, arrow: usize) -> bool {
        self.identity[self.arrows[arrow].src] == arrow && self.arrows[arrow].src == self.arrows[arrow].tgt
    }

    pub fn compose(&self, g: usize, f: usize) -> usize {
        self.compose[&(g, f)]
    }
}

/// Composable chains of non-identity arrows, by length.
fn nondegenerate_chains(cat: &FinCategory, len: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return (0..cat.objects).map(|_| Vec::new()).collect();
    }
    let mut out = Vec::new();
    let mut chain = Vec::with_capacity(len);
    fn rec(cat: &FinCategory, len: usize, chain: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if chain.len() == len {
            out.push(chain.clone());
            return;
        }
        for (f, arrow) in cat.arrows.iter().enumerate() {
            if cat.is_identity(f) {
                continue;
            }
            if let Some(&last) = chain.last() {
                if cat.arrows[last].tgt != arrow.src {
                    continue;
                }
            }
            chain.push(f);
            rec(cat, len, chain, out);
            chain.pop();
        }
    }
    rec(cat, len, &mut chain, &mut out);
    out
}

fn chain_name(cat: &FinCategory, objects_only: Option<usize>, chain: &[usize]) -> String {
    if let Some(o) = objects_only {
        return format!("o{o}");
    }
    let mut out = String::new();
    for (t, &f) in chain.iter().enumerate() {
        if t > 0 {
            out.push('*');
        }
        out.push_str(&cat.arrows[f].name);
    }
    out
}

/// The nerve of a finite category, truncated; nondegenerate k-cells are
/// the identity-free composable chains of length k. Nerves of categories
/// are 2-coskeletal, and the complex is marked as such.
pub fn nerve(cat: &FinCategory, truncation: usize) -> Result<Arc<FinSSet>> {
    let mut chains: Vec<Vec<Vec<usize>>> = Vec::with_capacity(truncation + 1);
    let mut index: Vec<BTreeMap<Vec<usize>, usize>> = Vec::with_capacity(truncation + 1);
    let mut names: Vec<Vec<String>> = vec![Vec::new(); truncation + 1];
    // dimension 0: objects
    let mut level0: Vec<Vec<usize>> = Vec::new();
    let mut index0 = BTreeMap::new();
    for o in 0..cat.objects {
        index0.insert(vec![usize::MAX, o], level0.len());
        names[0].push(format!("o{o}"));
        level0.push(vec![usize::MAX, o]); // sentinel encoding: object o
    }
    chains.push(level0);
    index.push(index0);
    for k in 1..=truncation {
        let mut level = Vec::new();
        let mut level_index = BTreeMap::new();
        for chain in nondegenerate_chains(cat, k) {
            level_index.insert(chain.clone(), level.len());
            names[k].push(chain_name(cat, None, &chain));
            level.push(chain);
        }
        chains.push(level);
        index.push(level_index);
    }

    // normal form of a nonempty chain that may contain identities: the
    // chain factors through the surjection collapsing identity slots
    let normal_of_chain = |chain: &[usize], index: &[BTreeMap<Vec<usize>, usize>]| -> NormalSimplex {
        let mut reduced: Vec<usize> = Vec::with_capacity(chain.len());
        let mut epi_values = vec![0usize];
        for &f in chain {
            if cat.is_identity(f) {
                epi_values.push(*epi_values.last().unwrap());
            } else {
                reduced.push(f);
                epi_values.push(epi_values.last().unwrap() + 1);
            }
        }
        let epi = MonotoneMap::new(epi_values, reduced.len()).expect("collapse is monotone");
        let degeneracies = word_from_epi(&epi);
        let cell = if reduced.is_empty() {
            CellRef {
                dim: 0,
                index: cat.arrows[chain[0]].src,
            }
        } else {
            CellRef {
                dim: reduced.len(),
                index: index[reduced.len()][&reduced],
            }
        };
        NormalSimplex { degeneracies, cell }
    };

    let mut faces: Vec<Vec<Vec<NormalSimplex>>> = vec![Vec::new(); truncation + 1];
    faces[0] = vec![Vec::new(); cat.objects];
    for k in 1..=truncation {
        for chain in &chains[k] {
            let entry = (0..=k)
                .map(|i| {
                    if k == 1 {
                        // endpoints: d_0 is the target, d_1 the source
                        let arrow = &cat.arrows[chain[0]];
                        let o = if i == 0 { arrow.tgt } else { arrow.src };
                        return NormalSimplex::nondegenerate(CellRef { dim: 0, index: o });
                    }
                    let new_chain: Vec<usize> = if i == 0 {
                        chain[1..].to_vec()
                    } else if i == k {
                        chain[..k - 1].to_vec()
                    } else {
                        let mut c = Vec::with_capacity(k - 1);
                        c.extend_from_slice(&chain[..i - 1]);
                        c.push(cat.compose(chain[i], chain[i - 1]));
                        c.extend_from_slice(&chain[i + 1..]);
                        c
                    };
                    normal_of_chain(&new_chain, &index)
                })
                .collect();
            faces[k].push(entry);
        }
    }
    let complex = FinSSet::from_parts(truncation, names, faces, Some(2))?;
    complex.validate()?;
    Ok(Arc::new(complex))
}

/// The cyclic group of order q as a one-object groupoid.
pub fn cyclic_group_category(q: usize) -> FinCategory {
    assert!(q >= 1);
    let arrows = (0..q)
        .map(|g| Arrow {
            name: format!("g{g}"),
            src: 0,
            tgt: 0,
        })
        .collect();
    let mut compose = BTreeMap::new();
    for g in 0..q {
        for f in 0..q {
            compose.insert((g, f), (g + f) % q);
        }
    }
    FinCategory::new(1, arrows, vec![0], compose).expect("cyclic group is a category")
}

/// The contractible groupoid on a set of objects: exactly one arrow
/// between any ordered pair.
pub fn contractible_groupoid_category(objects: usize) -> FinCategory {
    assert!(objects >= 1);
    let mut arrows = Vec::new();
    let mut arrow_index = BTreeMap::new();
    for src in 0..objects {
        for tgt in 0..objects {
            arrow_index.insert((src, tgt), arrows.len());
            arrows.push(Arrow {
                name: if src == tgt {
                    format!("id{src}")
                } else {
                    format!("a{src}{tgt}")
                },
                src,
                tgt,
            });
        }
    }
    let identity = (0..objects).map(|o| arrow_index[&(o, o)]).collect();
    let mut compose = BTreeMap::new();
    for (g, ag) in arrows.iter().enumerate() {
        for (f, af) in arrows.iter().enumerate() {
            if ag.src == af.tgt {
                compose.insert((g, f), arrow_index[&(af.src, ag.tgt)]);
            }
        }
    }
    FinCategory::new(objects, arrows, identity, compose)
        .expect("contractible groupoid is a category")
}

/// Two objects with one parallel pair of non-invertible arrows: a
/// quasicategory nerve that is neither a poset nerve nor a groupoid
/// nerve.
pub fn parallel_pair_category() -> FinCategory {
    let arrows = vec![
        Arrow {
            name: "ida".to_string(),
            src: 0,
            tgt: 0,
        },
        Arrow {
            name: "idb".to_string(),
            src: 1,
            tgt: 1,
        },
        Arrow {
            name: "f".to_string(),
            src: 0,
            tgt: 1,
        },
        Arrow {
            name: "g".to_string(),
            src: 0,
            tgt: 1,
        },
    ];
    let mut compose = BTreeMap::new();
    let id = [0usize, 1usize];
    for (g, ag) in arrows.iter().enumerate() {
        for (f, af) in arrows.iter().enumerate() {
            if ag.src != af.tgt {
                continue;
            }
            let gf = if g == id[ag.src] {
                f
            } else if f == id[af.src] {
                g
            } else {
                unreachable!("no composable non-identity pairs in the parallel pair")
            };
            compose.insert((g, f), gf);
        }
    }
    FinCategory::new(2, arrows, vec![0, 1], compose).expect("parallel pair is a category")
}

/// Nerve of the cyclic group of order q.
pub fn nerve_cyclic(q: usize, truncation: usize) -> Result<Arc<FinSSet>> {
    nerve(&cyclic_group_category(q), truncation)
}

/// Nerve of the contractible groupoid on a number of objects.
pub fn nerve_contractible_groupoid(objects: usize, truncation: usize) -> Result<Arc<FinSSet>> {
    nerve(&contractible_groupoid_category(objects), truncation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::iso_check;
    use crate::thick::{materialize, ThickRegion};

    #[test]
    fn cyclic_counts() {
        let n2 = nerve_cyclic(2, 3).unwrap();
        assert_eq!(n2.cell_counts(), vec![1, 1, 1, 1]);
        let n3 = nerve_cyclic(3, 3).unwrap();
        assert_eq!(n3.cell_counts(), vec![1, 2, 4, 8]);
        n3.validate().unwrap();
    }

    #[test]
    fn contractible_groupoid_is_thick_interval() {
        let g = nerve_contractible_groupoid(2, 2).unwrap();
        assert_eq!(g.cell_counts(), vec![2, 2, 2]);
        let full = materialize(ThickRegion::Full(1), 2).unwrap();
        let iso = iso_check(&g, &full.complex);
        assert!(iso.is_some());
    }

    #[test]
    fn parallel_pair_counts() {
        let c = parallel_pair_category();
        let x = nerve(&c, 3).unwrap();
        assert_eq!(x.cell_counts(), vec![2, 2, 0, 0]);
        x.validate().unwrap();
    }
}
