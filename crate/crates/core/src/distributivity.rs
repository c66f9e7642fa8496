//! Distributivity, join-/meet-distributivity, modularity and the
//! forbidden-sublattice searches.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::BitSet;
use crate::context::FormalContext;
use crate::error::{Error, Result};
use crate::lattice::{ConceptLattice, LatticeElementStats};

/// Independent characterizations of join-distributivity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Every covering pair has a unit meet-rise.
    Rises,
    /// Every covering pair `x ≺ y` is separated by exactly one
    /// meet-irreducible `z` with `x ≤ z`, `y ≰ z`.
    UniqueMeetIrreducible,
    /// `r(x) = |{m ∈ M(L) : m ≱ x}|` is a rank function.
    Rank,
    /// Every interval `[x, x^⊤]` is Boolean.
    BooleanInterval,
    /// In a context of the lattice, every object down-arrows at most one
    /// irreducible attribute up to equal extents.
    Arrows,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Rises,
        Method::UniqueMeetIrreducible,
        Method::Rank,
        Method::BooleanInterval,
        Method::Arrows,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Rises => "rises",
            Method::UniqueMeetIrreducible => "unique_meet_irreducible",
            Method::Rank => "rank",
            Method::BooleanInterval => "boolean_interval",
            Method::Arrows => "arrows",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Intervals with more atoms than this are not checked for being Boolean.
pub const BOOLEAN_ATOM_LIMIT: usize = 20;

/// Default size bound for triple scans.
pub const BRUTE_FORCE_BOUND: usize = 200;

/// Default size bound for the generic sublattice search.
pub const SEARCH_BOUND: usize = 500;

// ---- semimodularity ---------------------------------------------------------------

/// For all `x, y`: `x ∧ y ≺ y` implies `x ≺ x ∨ y`, checked over all pairs.
pub fn is_semimodular_pairwise(lat: &ConceptLattice) -> bool {
    let n = lat.size();
    (0..n).into_par_iter().all(|x| {
        (0..n).all(|y| {
            let m = lat.meet(x, y);
            !lat.is_cover(m, y) || lat.is_cover(x, lat.join(x, y))
        })
    })
}

/// Semimodularity through the covering form: whenever two distinct
/// elements cover a common element, their join covers both. Equivalent to
/// the pairwise form in finite lattices and linear in the cover count.
pub fn is_semimodular(lat: &ConceptLattice) -> bool {
    (0..lat.size()).into_par_iter().all(|c| {
        let ups = lat.upper_covers(c);
        ups.iter().enumerate().all(|(i, &a)| {
            ups[i + 1..].iter().all(|&b| {
                let j = lat.join(a, b);
                lat.is_cover(a, j) && lat.is_cover(b, j)
            })
        })
    })
}

pub fn is_dually_semimodular(lat: &ConceptLattice) -> bool {
    (0..lat.size()).into_par_iter().all(|c| {
        let downs = lat.lower_covers(c);
        downs.iter().enumerate().all(|(i, &a)| {
            downs[i + 1..].iter().all(|&b| {
                let m = lat.meet(a, b);
                lat.is_cover(m, a) && lat.is_cover(m, b)
            })
        })
    })
}

/// The modular law `x ≤ z ⇒ x ∨ (y ∧ z) = (x ∨ y) ∧ z` over all triples.
pub fn is_modular_direct(lat: &ConceptLattice, bound: usize) -> Result<bool> {
    let n = lat.size();
    if n > bound {
        return Err(Error::Capacity {
            what: "lattice size for the modular-law scan",
            limit: bound,
            reached: n,
        });
    }
    let t = OpTables::new(lat);
    Ok((0..n).into_par_iter().all(|x| {
        (0..n).all(|z| {
            !lat.leq(x, z) || (0..n).all(|y| t.join(x, t.meet(y, z)) == t.meet(t.join(x, y), z))
        })
    }))
}

/// Count of ordered triples with `x ∨ (y ∧ z) ≠ (x ∨ y) ∧ (x ∨ z)`.
pub fn count_distributivity_violations(lat: &ConceptLattice, bound: usize) -> Result<u64> {
    let n = lat.size();
    if n > bound {
        return Err(Error::Capacity {
            what: "lattice size for the distributive-law count",
            limit: bound,
            reached: n,
        });
    }
    let t = OpTables::new(lat);
    Ok((0..n)
        .into_par_iter()
        .map(|x| {
            let mut c = 0u64;
            for y in 0..n {
                for z in 0..n {
                    if t.join(x, t.meet(y, z)) != t.meet(t.join(x, y), t.join(x, z)) {
                        c += 1;
                    }
                }
            }
            c
        })
        .sum())
}

/// Dense join and meet tables for triple scans.
struct OpTables {
    n: usize,
    join: Vec<u32>,
    meet: Vec<u32>,
}

impl OpTables {
    fn new(lat: &ConceptLattice) -> Self {
        let n = lat.size();
        let rows: Vec<(Vec<u32>, Vec<u32>)> = (0..n)
            .into_par_iter()
            .map(|x| {
                (
                    (0..n).map(|y| lat.join(x, y) as u32).collect(),
                    (0..n).map(|y| lat.meet(x, y) as u32).collect(),
                )
            })
            .collect();
        let mut join = Vec::with_capacity(n * n);
        let mut meet = Vec::with_capacity(n * n);
        for (j, m) in rows {
            join.extend(j);
            meet.extend(m);
        }
        OpTables { n, join, meet }
    }

    #[inline]
    fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.n + y] as usize
    }

    #[inline]
    fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.n + y] as usize
    }
}

// ---- join-distributivity ---------------------------------------------------------

/// Join-distributivity by the chosen method. `ctx` must be a context of
/// `lat` (any context whose concept lattice it is, with the same extents)
/// for [`Method::Arrows`].
pub fn is_join_distributive(
    lat: &ConceptLattice,
    method: Method,
    ctx: Option<&FormalContext>,
) -> Result<bool> {
    let stats = lat.element_stats();
    match method {
        Method::Rises => Ok(jd_rises(lat, &stats)),
        Method::UniqueMeetIrreducible => Ok(jd_unique_meet_irreducible(lat)),
        Method::Rank => Ok(jd_rank(lat, &stats)),
        Method::BooleanInterval => jd_boolean_intervals(lat, BOOLEAN_ATOM_LIMIT),
        Method::Arrows => {
            let ctx = ctx.ok_or(Error::MissingContext("arrows"))?;
            Ok(join_distributive_by_arrows(ctx))
        }
    }
}

/// Meet-distributivity: the join version on the order dual. The context,
/// if given, is transposed accordingly.
pub fn is_meet_distributive(
    lat: &ConceptLattice,
    method: Method,
    ctx: Option<&FormalContext>,
) -> Result<bool> {
    let t = ctx.map(FormalContext::transpose);
    is_join_distributive(&lat.dual(), method, t.as_ref())
}

fn jd_rises(lat: &ConceptLattice, stats: &LatticeElementStats) -> bool {
    lat.covers()
        .par_iter()
        .all(|&(x, y)| stats.m[x] - stats.m[y] == 1)
}

fn jd_unique_meet_irreducible(lat: &ConceptLattice) -> bool {
    let mis: Vec<usize> = lat.meet_irreducibles().iter().collect();
    lat.covers().par_iter().all(|&(x, y)| {
        mis.iter()
            .filter(|&&z| lat.leq(x, z) && !lat.leq(y, z))
            .take(2)
            .count()
            == 1
    })
}

fn jd_rank(lat: &ConceptLattice, stats: &LatticeElementStats) -> bool {
    let r = &stats.rank_candidate;
    r[lat.bottom()] == 0 && lat.covers().iter().all(|&(x, y)| r[y] == r[x] + 1)
}

fn jd_boolean_intervals(lat: &ConceptLattice, atom_limit: usize) -> Result<bool> {
    let results: Vec<Result<bool>> = (0..lat.size())
        .into_par_iter()
        .map(|x| upper_interval_is_boolean(lat, x, atom_limit))
        .collect();
    let mut all = true;
    for r in results {
        all &= r?;
    }
    Ok(all)
}

/// `[x, x^⊤]` is Boolean iff it has exactly `2^k` elements, `k` the number
/// of upper covers of `x`, and the joins of the `2^k` sets of covers are
/// pairwise distinct. (Distinct joins inside a `2^k`-element interval make
/// the join map a bijection whose inverse is "covers below", so the order
/// is that of the subset lattice.)
pub fn upper_interval_is_boolean(
    lat: &ConceptLattice,
    x: usize,
    atom_limit: usize,
) -> Result<bool> {
    let atoms = lat.upper_covers(x);
    let k = atoms.len();
    if k > atom_limit {
        return Err(Error::Capacity {
            what: "upper covers of an element for the Boolean-interval check",
            limit: atom_limit,
            reached: k,
        });
    }
    let top = lat.cover_join(x);
    let expected = 1usize << k;

    // count the interval by walking up from x, giving up once it is too big
    let mut seen = BitSet::new(lat.size());
    seen.insert(x);
    let mut stack = vec![x];
    let mut size = 1;
    while let Some(z) = stack.pop() {
        for &w in lat.upper_covers(z) {
            if !seen.contains(w) && lat.leq(w, top) {
                seen.insert(w);
                size += 1;
                if size > expected {
                    return Ok(false);
                }
                stack.push(w);
            }
        }
    }
    if size != expected {
        return Ok(false);
    }

    let mut joins = vec![x; expected];
    let mut hit = BitSet::new(lat.size());
    hit.insert(x);
    for s in 1..expected {
        let low = s.trailing_zeros() as usize;
        let j = lat.join(joins[s & (s - 1)], atoms[low]);
        if hit.contains(j) {
            return Ok(false);
        }
        hit.insert(j);
        joins[s] = j;
    }
    Ok(true)
}

/// For every object `g` and irreducible attributes `m`, `n`: `g ↙ m` and
/// `g ↙ n` imply `m' = n'`.
pub fn join_distributive_by_arrows(ctx: &FormalContext) -> bool {
    let arrows = ctx.arrows();
    let irreducible = ctx.irreducible_attributes();
    let cols = ctx.cols();
    arrows.down.iter().all(|row| {
        let mut hits = row.iter().filter(|&m| irreducible.contains(m));
        match hits.next() {
            None => true,
            Some(first) => hits.all(|m| cols[m] == cols[first]),
        }
    })
}

/// Meet-distributivity of the lattice of `ctx` through the arrows of the
/// transposed context.
pub fn meet_distributive_by_arrows(ctx: &FormalContext) -> bool {
    join_distributive_by_arrows(&ctx.transpose())
}

/// All covering meet-rises and join-rises are unit. With `bound` set, the
/// answer is cross-checked against the distributive-law count and the
/// M3/N5 searches for lattices up to that size.
pub fn is_distributive(lat: &ConceptLattice, bound: Option<usize>) -> Result<bool> {
    let stats = lat.element_stats();
    let by_rises = lat
        .covers()
        .iter()
        .all(|&(x, y)| stats.m[x] - stats.m[y] == 1 && stats.j[y] - stats.j[x] == 1);
    if let Some(bound) = bound {
        if lat.size() <= bound {
            let violations = count_distributivity_violations(lat, bound)?;
            let forbidden = find_sublattice(lat, Pattern::M3, bound)?.is_some()
                || find_sublattice(lat, Pattern::N5, bound)?.is_some();
            if by_rises != (violations == 0) || by_rises == forbidden {
                return Err(Error::CheckerDisagreement(format!(
                    "rises say distributive={by_rises}, {violations} violating triples, \
                     forbidden sublattice found={forbidden}"
                )));
            }
        }
    }
    Ok(by_rises)
}

// ---- sublattice patterns -------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pattern {
    M3,
    N5,
    S7,
    /// The order dual of S7.
    S7Dual,
}

struct PatternShape {
    roles: &'static [&'static str],
    /// Covering pairs `(lower, upper)` between role positions.
    covers: &'static [(usize, usize)],
    /// Positions in the order the search visits them.
    visit: &'static [usize],
}

impl Pattern {
    pub const ALL: [Pattern; 4] = [Pattern::M3, Pattern::N5, Pattern::S7, Pattern::S7Dual];

    fn shape(self) -> PatternShape {
        match self {
            Pattern::M3 => PatternShape {
                roles: &["bottom", "a", "b", "c", "top"],
                covers: &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)],
                visit: &[1, 2, 4, 0, 3],
            },
            Pattern::N5 => PatternShape {
                roles: &["bottom", "a", "c", "b", "top"],
                covers: &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)],
                visit: &[1, 3, 4, 0, 2],
            },
            Pattern::S7 => PatternShape {
                roles: &["a∨b", "a", "b", "x", "â", "b̂", "a∧b"],
                covers: &[
                    (6, 4),
                    (6, 5),
                    (4, 1),
                    (4, 3),
                    (5, 3),
                    (5, 2),
                    (1, 0),
                    (3, 0),
                    (2, 0),
                ],
                visit: &[1, 2, 0, 6, 3, 4, 5],
            },
            Pattern::S7Dual => PatternShape {
                roles: &["bottom", "a", "b", "x", "â", "b̂", "top"],
                covers: &[
                    (0, 1),
                    (0, 3),
                    (0, 2),
                    (1, 4),
                    (3, 4),
                    (3, 5),
                    (2, 5),
                    (4, 6),
                    (5, 6),
                ],
                visit: &[1, 2, 6, 0, 3, 4, 5],
            },
        }
    }

    pub fn size(self) -> usize {
        self.shape().roles.len()
    }

    pub fn role_names(self) -> &'static [&'static str] {
        self.shape().roles
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pattern::M3 => "M3",
            Pattern::N5 => "N5",
            Pattern::S7 => "S7",
            Pattern::S7Dual => "S7-dual",
        })
    }
}

/// Order, join and meet tables of a pattern, indexed by role position.
struct PatternTables {
    leq: Vec<Vec<bool>>,
    join: Vec<Vec<usize>>,
    meet: Vec<Vec<usize>>,
}

impl PatternTables {
    fn new(p: Pattern) -> Self {
        let shape = p.shape();
        let n = shape.roles.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in shape.covers {
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if leq[i][k] && leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
        let bound = |i: usize, j: usize, upper: bool| {
            let cands: Vec<usize> = (0..n)
                .filter(|&z| {
                    if upper {
                        leq[i][z] && leq[j][z]
                    } else {
                        leq[z][i] && leq[z][j]
                    }
                })
                .collect();
            *cands
                .iter()
                .find(|&&z| {
                    cands
                        .iter()
                        .all(|&w| if upper { leq[z][w] } else { leq[w][z] })
                })
                .expect("patterns are lattices")
        };
        let join = (0..n)
            .map(|i| (0..n).map(|j| bound(i, j, true)).collect())
            .collect();
        let meet = (0..n)
            .map(|i| (0..n).map(|j| bound(i, j, false)).collect())
            .collect();
        PatternTables { leq, join, meet }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SublatticeWitness {
    pub pattern: Pattern,
    /// Lattice indices in role order.
    pub elements: Vec<usize>,
    /// Role name to lattice index.
    pub role_map: Vec<(String, usize)>,
}

impl SublatticeWitness {
    fn new(pattern: Pattern, elements: Vec<usize>) -> Self {
        let role_map = pattern
            .role_names()
            .iter()
            .zip(&elements)
            .map(|(r, &e)| (r.to_string(), e))
            .collect();
        SublatticeWitness {
            pattern,
            elements,
            role_map,
        }
    }

    pub fn element(&self, role: &str) -> Option<usize> {
        self.role_map
            .iter()
            .find(|(r, _)| r == role)
            .map(|&(_, e)| e)
    }
}

/// Independent check: the elements are distinct, their order is exactly the
/// pattern's, and joins and meets of any two of them land on the element
/// the pattern prescribes.
pub fn verify_witness(lat: &ConceptLattice, w: &SublatticeWitness) -> bool {
    let t = PatternTables::new(w.pattern);
    let e = &w.elements;
    let n = t.leq.len();
    if e.len() != n || e.iter().any(|&x| x >= lat.size()) {
        return false;
    }
    for i in 0..n {
        for j in 0..n {
            if (i != j && e[i] == e[j])
                || lat.leq(e[i], e[j]) != t.leq[i][j]
                || lat.join(e[i], e[j]) != e[t.join[i][j]]
                || lat.meet(e[i], e[j]) != e[t.meet[i][j]]
            {
                return false;
            }
        }
    }
    true
}

/// Exhaustive search for a sublattice isomorphic to `pattern`. Roles are
/// assigned depth-first; a role that is the join or meet of two assigned
/// roles is computed instead of searched, and every candidate must relate
/// to the assigned elements exactly as the roles do.
pub fn find_sublattice(
    lat: &ConceptLattice,
    pattern: Pattern,
    bound: usize,
) -> Result<Option<SublatticeWitness>> {
    if lat.size() > bound {
        return Err(Error::Capacity {
            what: "lattice size for the sublattice search",
            limit: bound,
            reached: lat.size(),
        });
    }
    lat.up_sets();
    let shape = pattern.shape();
    let t = PatternTables::new(pattern);
    let mut assigned = vec![usize::MAX; shape.roles.len()];
    Ok(search_roles(lat, pattern, &shape, &t, 0, &mut assigned)
        .then(|| SublatticeWitness::new(pattern, assigned)))
}

fn search_roles(
    lat: &ConceptLattice,
    pattern: Pattern,
    shape: &PatternShape,
    t: &PatternTables,
    depth: usize,
    assigned: &mut [usize],
) -> bool {
    let Some(&role) = shape.visit.get(depth) else {
        return verify_witness(lat, &SublatticeWitness::new(pattern, assigned.to_vec()));
    };
    let done = &shape.visit[..depth];
    let fits = |z: usize, assigned: &[usize]| {
        done.iter().all(|&s| {
            assigned[s] != z
                && lat.leq(z, assigned[s]) == t.leq[role][s]
                && lat.leq(assigned[s], z) == t.leq[s][role]
        })
    };
    let derived = done.iter().enumerate().find_map(|(i, &s1)| {
        done[i + 1..].iter().find_map(|&s2| {
            if t.join[s1][s2] == role {
                Some(lat.join(assigned[s1], assigned[s2]))
            } else if t.meet[s1][s2] == role {
                Some(lat.meet(assigned[s1], assigned[s2]))
            } else {
                None
            }
        })
    });
    if let Some(z) = derived {
        if !fits(z, assigned) {
            return false;
        }
        assigned[role] = z;
        let ok = search_roles(lat, pattern, shape, t, depth + 1, assigned);
        if !ok {
            assigned[role] = usize::MAX;
        }
        return ok;
    }
    for z in 0..lat.size() {
        if fits(z, assigned) {
            assigned[role] = z;
            if search_roles(lat, pattern, shape, t, depth + 1, assigned) {
                return true;
            }
            assigned[role] = usize::MAX;
        }
    }
    false
}

/// Builds an S7 inside a join-distributive lattice that is not
/// meet-distributive. Dual semimodularity fails, so there are incomparable
/// `a`, `b` covered by `a ∨ b` with `a ∧ b ⊀ a`. Gradedness gives `â` and
/// `b̂` covering `a ∧ b` below `a` and `b`; with `x = â ∨ b̂` the seven
/// elements `a∨b, a, b, x, â, b̂, a∧b` form the sublattice.
pub fn s7_witness_constructive(lat: &ConceptLattice) -> Result<SublatticeWitness> {
    let stats = lat.element_stats();
    if !jd_rises(lat, &stats) {
        return Err(Error::Precondition(
            "lattice is not join-distributive".into(),
        ));
    }
    let dual = lat.dual();
    if jd_rises(&dual, &dual.element_stats()) {
        return Err(Error::Precondition("lattice is meet-distributive".into()));
    }
    for top in 0..lat.size() {
        let downs = lat.lower_covers(top);
        for (i, &p) in downs.iter().enumerate() {
            for &q in &downs[i + 1..] {
                let bottom = lat.meet(p, q);
                let (a, b) = if !lat.is_cover(bottom, p) {
                    (p, q)
                } else if !lat.is_cover(bottom, q) {
                    (q, p)
                } else {
                    continue;
                };
                let below = |target: usize| {
                    lat.upper_covers(bottom)
                        .iter()
                        .copied()
                        .find(|&z| lat.lt(z, target))
                };
                let (Some(a_hat), Some(b_hat)) = (below(a), below(b)) else {
                    return Err(Error::CheckerDisagreement(format!(
                        "no element covering {bottom} below {a} and {b} in a graded interval"
                    )));
                };
                let x = lat.join(a_hat, b_hat);
                let w =
                    SublatticeWitness::new(Pattern::S7, vec![top, a, b, x, a_hat, b_hat, bottom]);
                if !verify_witness(lat, &w) {
                    return Err(Error::CheckerDisagreement(format!(
                        "constructed elements {:?} do not form S7",
                        w.elements
                    )));
                }
                return Ok(w);
            }
        }
    }
    Err(Error::CheckerDisagreement(
        "lattice is not meet-distributive yet dually semimodular".into(),
    ))
}

// ---- verdict --------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    /// Triple scans (modular law, distributive-law count) up to this size.
    pub brute_force_bound: usize,
    /// Generic sublattice search up to this size.
    pub search_bound: usize,
    pub boolean_atom_limit: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            brute_force_bound: BRUTE_FORCE_BOUND,
            search_bound: SEARCH_BOUND,
            boolean_atom_limit: BOOLEAN_ATOM_LIMIT,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributivityVerdict {
    pub distributive: bool,
    pub join_distributive: bool,
    pub meet_distributive: bool,
    pub modular: bool,
    pub semimodular: bool,
    pub dually_semimodular: bool,
    /// `join/<method>` and `meet/<method>` results, plus the cross-checks
    /// that were run.
    pub method_agreement: BTreeMap<String, bool>,
    pub witness: Option<SublatticeWitness>,
    pub notes: Vec<String>,
}

/// Runs every applicable checker and fails with
/// [`Error::CheckerDisagreement`] if two of them disagree.
pub fn verdict(
    lat: &ConceptLattice,
    ctx: Option<&FormalContext>,
    opts: &CheckOptions,
) -> Result<DistributivityVerdict> {
    let mut notes = vec![
        "join- and meet-distributivity are decided by equivalent characterizations; \
         the definition through modular sublattices is not evaluated directly"
            .to_string(),
    ];
    let n = lat.size();
    let standard;
    let ctx = match ctx {
        Some(c) => c,
        None => {
            notes.push("arrow method applied to the standard context".into());
            standard = lat.standard_context();
            &standard
        }
    };
    let transposed = ctx.transpose();
    let dual = lat.dual();
    let mut agreement = BTreeMap::new();

    let mut side = |name: &str, l: &ConceptLattice, c: &FormalContext| -> Result<bool> {
        let stats = l.element_stats();
        let mut values = vec![
            (Method::Rises, jd_rises(l, &stats)),
            (Method::UniqueMeetIrreducible, jd_unique_meet_irreducible(l)),
            (Method::Rank, jd_rank(l, &stats)),
        ];
        match jd_boolean_intervals(l, opts.boolean_atom_limit) {
            Ok(v) => values.push((Method::BooleanInterval, v)),
            Err(e) if e.is_resource_error() => {
                notes.push(format!("{name}/boolean_interval skipped: {e}"))
            }
            Err(e) => return Err(e),
        }
        values.push((Method::Arrows, join_distributive_by_arrows(c)));
        let first = values[0].1;
        for (m, v) in &values {
            agreement.insert(format!("{name}/{m}"), *v);
        }
        if values.iter().any(|(_, v)| *v != first) {
            return Err(Error::CheckerDisagreement(format!(
                "{name}-distributivity methods disagree: {values:?}"
            )));
        }
        Ok(first)
    };
    let join_distributive = side("join", lat, ctx)?;
    let meet_distributive = side("meet", &dual, &transposed)?;

    let semimodular = is_semimodular(lat);
    let dually_semimodular = is_dually_semimodular(lat);
    let mut modular = semimodular && dually_semimodular;
    if n <= opts.brute_force_bound {
        let direct = is_modular_direct(lat, opts.brute_force_bound)?;
        agreement.insert("modular/direct".into(), direct);
        if direct != modular {
            return Err(Error::CheckerDisagreement(format!(
                "modular law says {direct}, semimodularity on both sides says {modular}"
            )));
        }
        modular = direct;
    } else {
        notes.push("modularity taken as semimodular and dually semimodular".into());
    }

    let distributive = join_distributive && meet_distributive;
    if n <= opts.brute_force_bound {
        let violations = count_distributivity_violations(lat, opts.brute_force_bound)?;
        agreement.insert("distributive/violation_count".into(), violations == 0);
        if (violations == 0) != distributive {
            return Err(Error::CheckerDisagreement(format!(
                "{violations} distributive-law violations but rises say distributive={distributive}"
            )));
        }
    }

    let mut witness = None;
    if !distributive {
        if join_distributive {
            witness = Some(s7_witness_constructive(lat)?);
        } else if meet_distributive {
            let w = s7_witness_constructive(&dual)?;
            witness = Some(SublatticeWitness::new(Pattern::S7Dual, w.elements));
        }
    }
    if n <= opts.search_bound {
        let m3 = find_sublattice(lat, Pattern::M3, opts.search_bound)?;
        let n5 = find_sublattice(lat, Pattern::N5, opts.search_bound)?;
        let forbidden = m3.is_some() || n5.is_some();
        agreement.insert("distributive/no_m3_n5".into(), !forbidden);
        if forbidden == distributive {
            return Err(Error::CheckerDisagreement(format!(
                "M3/N5 search found a witness={forbidden} but distributive={distributive}"
            )));
        }
        if witness.is_none() {
            witness = m3.or(n5);
        }
    }
    if let Some(w) = &witness {
        if !verify_witness(lat, w) {
            return Err(Error::CheckerDisagreement(format!(
                "{} witness {:?} fails verification",
                w.pattern, w.elements
            )));
        }
    }

    Ok(DistributivityVerdict {
        distributive,
        join_distributive,
        meet_distributive,
        modular,
        semimodular,
        dually_semimodular,
        method_agreement: agreement,
        witness,
        notes,
    })
}
