//! Finite ordered sets, their irreducibles, the Dedekind-MacNeille
//! completion and a completion-free join-distributivity test.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::bits::{BitMatrix, BitSet};
use crate::context::FormalContext;
use crate::distributivity::join_distributive_by_arrows;
use crate::error::{Error, Result};
use crate::lattice::{ConceptLattice, LatticeOptions};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    /// `up[x] = {y : x ≤ y}`.
    up: BitMatrix,
    /// `down[x] = {y : y ≤ x}`.
    down: BitMatrix,
}

/// JSON form: element names and any mix of cover and comparability pairs
/// `[a, b]` meaning `a ≤ b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetFile {
    pub elements: Vec<String>,
    pub relation: Vec<(String, String)>,
}

impl Poset {
    /// Reflexive-transitive closure of `pairs` (`(a, b)` read as `a ≤ b`).
    pub fn from_relation(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Poset> {
        let n = names.len();
        let mut seen = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if seen.insert(name.as_str(), i).is_some() {
                return Err(Error::DuplicateName {
                    kind: "element",
                    name: name.clone(),
                });
            }
        }
        let mut up: BitMatrix = (0..n).map(|i| BitSet::from_indices(n, [i])).collect();
        for &(a, b) in pairs {
            for &i in &[a, b] {
                if i >= n {
                    return Err(Error::IndexOutOfRange {
                        kind: "element",
                        index: i,
                        size: n,
                    });
                }
            }
            up[a].insert(b);
        }
        // Warshall on bit rows
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        for a in 0..n {
            for b in up[a].iter() {
                if a != b && up[b].contains(a) {
                    return Err(Error::Cycle(names[a].clone(), names[b].clone()));
                }
            }
        }
        let down = transpose(&up);
        Ok(Poset { names, up, down })
    }

    pub fn from_named_relation(names: Vec<String>, pairs: &[(String, String)]) -> Result<Poset> {
        let index: HashMap<&str, usize> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let lookup = |s: &String| {
            index
                .get(s.as_str())
                .copied()
                .ok_or_else(|| Error::UnknownElement(s.clone()))
        };
        let idx = pairs
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Poset::from_relation(names, &idx)
    }

    pub fn from_json(text: &str) -> Result<Poset> {
        let f: PosetFile = serde_json::from_str(text)?;
        Poset::from_named_relation(f.elements, &f.relation)
    }

    /// Cover pairs only, so the file stays small.
    pub fn to_file(&self) -> PosetFile {
        PosetFile {
            elements: self.names.clone(),
            relation: self
                .covers()
                .into_iter()
                .map(|(a, b)| (self.names[a].clone(), self.names[b].clone()))
                .collect(),
        }
    }

    /// The order of a lattice; elements are named by concept index.
    pub fn from_lattice(lat: &ConceptLattice) -> Poset {
        Poset::from_relation(
            (0..lat.size()).map(|i| format!("c{i}")).collect(),
            &lat.covers(),
        )
        .expect("a lattice order has no cycles")
    }

    /// The order of `lat` restricted to `keep`, in the given order.
    pub fn sub_order(lat: &ConceptLattice, keep: &[usize]) -> Poset {
        let mut pairs = Vec::new();
        for (i, &x) in keep.iter().enumerate() {
            for (j, &y) in keep.iter().enumerate() {
                if i != j && lat.leq(x, y) {
                    pairs.push((i, j));
                }
            }
        }
        Poset::from_relation(keep.iter().map(|x| format!("c{x}")).collect(), &pairs)
            .expect("a lattice order has no cycles")
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    pub fn up_set(&self, x: usize) -> &BitSet {
        &self.up[x]
    }

    pub fn down_set(&self, x: usize) -> &BitSet {
        &self.down[x]
    }

    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.size();
        let mut out = Vec::new();
        for x in 0..n {
            let mut strict = self.up[x].clone();
            strict.remove(x);
            let mut covers = strict.clone();
            for z in strict.iter() {
                let mut above = self.up[z].clone();
                above.remove(z);
                covers.difference_with(&above);
            }
            out.extend(covers.iter().map(|y| (x, y)));
        }
        out
    }

    pub fn is_cover(&self, x: usize, y: usize) -> bool {
        x != y
            && self.leq(x, y)
            && (0..self.size()).all(|z| z == x || z == y || !(self.leq(x, z) && self.leq(z, y)))
    }

    /// `x` is join-reducible iff it is the supremum of `↓x ∖ {x}`, i.e.
    /// every common upper bound of its strict down-set lies above `x`. For
    /// a unique minimal element the strict down-set is empty and the test
    /// asks whether `x` is below everything, so a least element is
    /// reducible (supremum of the empty set) while several minimal
    /// elements are all irreducible. Meet-irreducibility is dual.
    pub fn irreducibles(&self) -> (BitSet, BitSet) {
        let n = self.size();
        let reducible = |x: usize, below: &BitMatrix, above: &BitMatrix| {
            let mut bounds = BitSet::full(n);
            for s in below[x].iter().filter(|&s| s != x) {
                bounds.intersect_with(&above[s]);
            }
            bounds.is_subset(&above[x])
        };
        let join = BitSet::from_indices(n, (0..n).filter(|&x| !reducible(x, &self.down, &self.up)));
        let meet = BitSet::from_indices(n, (0..n).filter(|&x| !reducible(x, &self.up, &self.down)));
        (join, meet)
    }

    /// `m(x)`: meet-irreducibles above or equal to `x`.
    pub fn m_values(&self) -> Vec<usize> {
        let (_, meet) = self.irreducibles();
        (0..self.size())
            .map(|x| self.up[x].intersection_count(&meet))
            .collect()
    }

    /// `j(x)`: join-irreducibles below or equal to `x`.
    pub fn j_values(&self) -> Vec<usize> {
        let (join, _) = self.irreducibles();
        (0..self.size())
            .map(|x| self.down[x].intersection_count(&join))
            .collect()
    }

    /// The context `(P, P, ≤)`.
    pub fn order_context(&self) -> FormalContext {
        FormalContext::new(self.names.clone(), self.names.clone(), self.up.clone())
            .expect("names were checked at construction")
    }

    /// The context `(J, M, ≤)` on the irreducibles; its concept lattice is
    /// the completion.
    pub fn irreducible_context(&self) -> FormalContext {
        let (join, meet) = self.irreducibles();
        let js: Vec<usize> = join.iter().collect();
        let ms: Vec<usize> = meet.iter().collect();
        let rows = js
            .iter()
            .map(|&j| {
                BitSet::from_indices(
                    ms.len(),
                    ms.iter()
                        .enumerate()
                        .filter(|(_, &m)| self.leq(j, m))
                        .map(|(k, _)| k),
                )
            })
            .collect();
        FormalContext::new(
            js.iter().map(|&j| self.names[j].clone()).collect(),
            ms.iter().map(|&m| self.names[m].clone()).collect(),
            rows,
        )
        .expect("names were checked at construction")
    }

    pub fn dm_completion(&self) -> DmCompletion {
        self.dm_completion_with(&LatticeOptions::default())
            .expect("unbounded build cannot hit a capacity limit")
    }

    /// `𝔅(P, P, ≤)` with `ι(x) = (↓x, ↑x)`.
    pub fn dm_completion_with(&self, opts: &LatticeOptions) -> Result<DmCompletion> {
        let ctx = self.order_context();
        let lattice = ConceptLattice::from_context_with(&ctx, opts)?;
        let iota: Vec<usize> = (0..self.size())
            .map(|x| {
                let i = lattice
                    .index_of_extent(&self.down[x])
                    .expect("principal down-sets are extents");
                assert_eq!(lattice.concept(i).intent, self.up[x]);
                i
            })
            .collect();
        let mut image = BitSet::new(lattice.size());
        for &i in &iota {
            assert!(!image.contains(i), "ι is injective");
            image.insert(i);
        }
        let added = (0..lattice.size())
            .filter(|&i| !image.contains(i))
            .collect();
        Ok(DmCompletion {
            lattice,
            context: ctx,
            iota,
            added,
        })
    }

    /// Join-distributivity of the completion, decided on the arrows of
    /// `(J, M, ≤)` without building the completion.
    pub fn is_join_distributive(&self) -> bool {
        join_distributive_by_arrows(&self.irreducible_context())
    }

    pub fn is_meet_distributive(&self) -> bool {
        join_distributive_by_arrows(&self.irreducible_context().transpose())
    }
}

fn transpose(rows: &BitMatrix) -> BitMatrix {
    let n = rows.len();
    let mut out = vec![BitSet::new(n); n];
    for (i, r) in rows.iter().enumerate() {
        for j in r.iter() {
            out[j].insert(i);
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct DmCompletion {
    pub lattice: ConceptLattice,
    /// `(P, P, ≤)`.
    pub context: FormalContext,
    /// `iota[x]` is the concept index of `(↓x, ↑x)`.
    pub iota: Vec<usize>,
    /// Concepts outside the image of `iota`, ascending.
    pub added: Vec<usize>,
}

impl DmCompletion {
    /// `x ≤ y` in the poset iff `ι(x) ≤ ι(y)`.
    pub fn is_order_embedding(&self, p: &Poset) -> bool {
        let n = p.size();
        (0..n).all(|x| (0..n).all(|y| p.leq(x, y) == self.lattice.leq(self.iota[x], self.iota[y])))
    }

    pub fn to_json(&self, p: &Poset) -> DmDump {
        DmDump {
            lattice: self.lattice.to_dump(Some(&self.context)),
            iota: p
                .names()
                .iter()
                .cloned()
                .zip(self.iota.iter().copied())
                .collect(),
            added: self.added.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DmDump {
    pub lattice: crate::lattice::LatticeDump,
    pub iota: Vec<(String, usize)>,
    pub added: Vec<usize>,
}
