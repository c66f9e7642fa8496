//! Concept enumeration and the concept lattice.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering as AtomicOrdering};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::{BitMatrix, BitSet};
use crate::context::FormalContext;
use crate::error::{Error, Result};

/// A formal concept `(A, B)` with `A' = B` and `B' = A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Concept {
    pub extent: BitSet,
    pub intent: BitSet,
}

impl Concept {
    /// Lectic order of the intents.
    pub fn lectic_cmp(&self, other: &Concept) -> Ordering {
        self.intent.lectic_cmp(&other.intent)
    }
}

/// Lattices up to this many elements get their covers from the order
/// matrix; larger ones use neighbour counting.
pub const MATRIX_COVER_LIMIT: usize = 2048;

/// Default budget for the lazily built order matrix.
pub const DEFAULT_MEMORY_BUDGET: u64 = 2 << 30;

/// Recursion depth down to which the enumerator forks parallel tasks.
const PARALLEL_DEPTH: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CoverMethod {
    #[default]
    Auto,
    OrderMatrix,
    Neighbours,
}

#[derive(Clone, Copy, Debug)]
pub struct LatticeOptions {
    /// Stop with a capacity error once more concepts than this are found.
    pub max_concepts: Option<usize>,
    /// Upper bound in bytes for the stored order matrix.
    pub memory_budget: u64,
    pub cover_method: CoverMethod,
}

impl Default for LatticeOptions {
    fn default() -> Self {
        LatticeOptions {
            max_concepts: None,
            memory_budget: DEFAULT_MEMORY_BUDGET,
            cover_method: CoverMethod::Auto,
        }
    }
}

// ---- enumeration ------------------------------------------------------------

/// All concepts of `ctx`, sorted lectically by intent.
pub fn enumerate_concepts(ctx: &FormalContext) -> Vec<Concept> {
    enumerate_concepts_limited(ctx, None).expect("no limit given")
}

/// Close-by-One over attributes. Shallow branches run on the rayon pool;
/// the result is sorted, so it does not depend on the number of threads.
pub fn enumerate_concepts_limited(
    ctx: &FormalContext,
    limit: Option<usize>,
) -> Result<Vec<Concept>> {
    let extent = BitSet::full(ctx.n_objects());
    let intent = ctx.intent_of(&extent);
    let root = Concept { extent, intent };
    let state = CboState {
        ctx,
        limit: limit.unwrap_or(usize::MAX),
        found: AtomicUsize::new(1),
        stop: AtomicBool::new(false),
    };
    if state.limit == 0 {
        return Err(Error::Capacity {
            what: "concepts",
            limit: 0,
            reached: 1,
        });
    }
    let mut out = state.descend(root, 0, 0);
    if state.stop.load(AtomicOrdering::Relaxed) {
        return Err(Error::Capacity {
            what: "concepts",
            limit: state.limit,
            reached: state.found.load(AtomicOrdering::Relaxed),
        });
    }
    out.par_sort_unstable_by(|a, b| a.lectic_cmp(b));
    Ok(out)
}

struct CboState<'a> {
    ctx: &'a FormalContext,
    limit: usize,
    found: AtomicUsize,
    stop: AtomicBool,
}

impl CboState<'_> {
    fn descend(&self, c: Concept, start: usize, depth: usize) -> Vec<Concept> {
        let kids = self.children(&c, start);
        let mut out = vec![c];
        if self.stop.load(AtomicOrdering::Relaxed) {
            return out;
        }
        if depth < PARALLEL_DEPTH && kids.len() > 1 {
            let nested: Vec<Vec<Concept>> = kids
                .into_par_iter()
                .map(|(k, next)| self.descend(k, next, depth + 1))
                .collect();
            out.extend(nested.into_iter().flatten());
        } else {
            for (k, next) in kids {
                out.extend(self.descend(k, next, depth + 1));
            }
        }
        out
    }

    fn children(&self, c: &Concept, start: usize) -> Vec<(Concept, usize)> {
        let cols = self.ctx.cols();
        let m = cols.len();
        let mut kids = Vec::new();
        for j in start..m {
            if c.intent.contains(j) {
                continue;
            }
            let extent = c.extent.intersection(&cols[j]);
            // canonicity: the closure must not add an attribute before j
            let canonical = (0..j)
                .filter(|&k| !c.intent.contains(k))
                .all(|k| !extent.is_subset(&cols[k]));
            if !canonical {
                continue;
            }
            let mut intent = c.intent.clone();
            intent.insert(j);
            for k in j + 1..m {
                if !intent.contains(k) && extent.is_subset(&cols[k]) {
                    intent.insert(k);
                }
            }
            let n = self.found.fetch_add(1, AtomicOrdering::Relaxed) + 1;
            if n > self.limit {
                self.stop.store(true, AtomicOrdering::Relaxed);
                return kids;
            }
            kids.push((Concept { extent, intent }, j + 1));
        }
        kids
    }
}

/// Ganter's NextClosure: intents in lectic order, one closure per step.
/// Slow but simple; used as a reference for the main enumerator.
pub fn next_closure_concepts(ctx: &FormalContext) -> Vec<Concept> {
    let m = ctx.n_attributes();
    let close = |b: &BitSet| {
        let extent = ctx.extent_of(b);
        let intent = ctx.intent_of(&extent);
        Concept { extent, intent }
    };
    let mut current = close(&BitSet::new(m));
    let mut out = vec![current.clone()];
    'outer: loop {
        for i in (0..m).rev() {
            if current.intent.contains(i) {
                continue;
            }
            let mut candidate = BitSet::from_indices(m, current.intent.iter().filter(|&k| k < i));
            candidate.insert(i);
            let next = close(&candidate);
            if next.intent.prefix_eq(&current.intent, i) {
                current = next;
                out.push(current.clone());
                continue 'outer;
            }
        }
        break;
    }
    out
}

// ---- the lattice ----------------------------------------------------------------

/// The concept lattice of a context, with concepts indexed in lectic intent
/// order.
#[derive(Clone, Debug)]
pub struct ConceptLattice {
    concepts: Vec<Concept>,
    n_objects: usize,
    n_attributes: usize,
    upper_covers: Vec<Vec<usize>>,
    lower_covers: Vec<Vec<usize>>,
    bottom: usize,
    top: usize,
    join_irreducible: BitSet,
    meet_irreducible: BitSet,
    extent_index: HashMap<BitSet, usize>,
    intent_index: HashMap<BitSet, usize>,
    memory_budget: u64,
    up_sets: OnceLock<Option<BitMatrix>>,
}

impl ConceptLattice {
    pub fn from_context(ctx: &FormalContext) -> ConceptLattice {
        ConceptLattice::from_context_with(ctx, &LatticeOptions::default())
            .expect("unbounded build cannot hit a capacity limit")
    }

    pub fn from_context_with(ctx: &FormalContext, opts: &LatticeOptions) -> Result<ConceptLattice> {
        let concepts = enumerate_concepts_limited(ctx, opts.max_concepts)?;
        let method = match opts.cover_method {
            CoverMethod::Auto if concepts.len() <= MATRIX_COVER_LIMIT => CoverMethod::OrderMatrix,
            CoverMethod::Auto => CoverMethod::Neighbours,
            m => m,
        };
        let mut lat = ConceptLattice::index(concepts, ctx.n_objects(), ctx.n_attributes(), opts)?;
        let upper = match method {
            CoverMethod::OrderMatrix => lat.covers_from_matrix(),
            _ => lat.covers_from_neighbours(ctx),
        };
        lat.set_covers(upper);
        Ok(lat)
    }

    /// Build from a complete concept set. Covers come from the order matrix.
    pub fn from_concepts(
        mut concepts: Vec<Concept>,
        n_objects: usize,
        n_attributes: usize,
    ) -> Result<ConceptLattice> {
        concepts.sort_by(|a, b| a.lectic_cmp(b));
        let mut lat = ConceptLattice::index(
            concepts,
            n_objects,
            n_attributes,
            &LatticeOptions::default(),
        )?;
        let upper = lat.covers_from_matrix();
        lat.set_covers(upper);
        Ok(lat)
    }

    fn index(
        concepts: Vec<Concept>,
        n_objects: usize,
        n_attributes: usize,
        opts: &LatticeOptions,
    ) -> Result<ConceptLattice> {
        if concepts.is_empty() {
            return Err(Error::InvalidLattice("no concepts".into()));
        }
        let mut extent_index = HashMap::with_capacity(concepts.len());
        let mut intent_index = HashMap::with_capacity(concepts.len());
        for (i, c) in concepts.iter().enumerate() {
            if c.extent.len() != n_objects || c.intent.len() != n_attributes {
                return Err(Error::InvalidLattice(format!(
                    "concept {i} has the wrong universe size"
                )));
            }
            if extent_index.insert(c.extent.clone(), i).is_some()
                || intent_index.insert(c.intent.clone(), i).is_some()
            {
                return Err(Error::InvalidLattice(format!("duplicate concept {i}")));
            }
        }
        let largest = (0..concepts.len())
            .max_by_key(|&i| concepts[i].extent.count())
            .unwrap();
        let smallest = (0..concepts.len())
            .min_by_key(|&i| concepts[i].extent.count())
            .unwrap();
        if !concepts
            .iter()
            .all(|c| c.extent.is_subset(&concepts[largest].extent))
        {
            return Err(Error::InvalidLattice("no top element".into()));
        }
        if !concepts
            .iter()
            .all(|c| concepts[smallest].extent.is_subset(&c.extent))
        {
            return Err(Error::InvalidLattice("no bottom element".into()));
        }
        let n = concepts.len();
        Ok(ConceptLattice {
            concepts,
            n_objects,
            n_attributes,
            upper_covers: vec![Vec::new(); n],
            lower_covers: vec![Vec::new(); n],
            bottom: smallest,
            top: largest,
            join_irreducible: BitSet::new(n),
            meet_irreducible: BitSet::new(n),
            extent_index,
            intent_index,
            memory_budget: opts.memory_budget,
            up_sets: OnceLock::new(),
        })
    }

    /// `covers_up[x] = strict_up[x] ∖ ⋃ { strict_up[z] : z ∈ strict_up[x] }`.
    fn covers_from_matrix(&self) -> Vec<Vec<usize>> {
        let n = self.size();
        let strict_up: BitMatrix = (0..n)
            .into_par_iter()
            .map(|x| {
                let ext = &self.concepts[x].extent;
                BitSet::from_indices(
                    n,
                    (0..n).filter(|&y| y != x && ext.is_subset(&self.concepts[y].extent)),
                )
            })
            .collect();
        (0..n)
            .into_par_iter()
            .map(|x| {
                let mut covers = strict_up[x].clone();
                for z in strict_up[x].iter() {
                    covers.difference_with(&strict_up[z]);
                }
                covers.to_vec()
            })
            .collect()
    }

    /// Neighbour counting on the smaller side of the context.
    fn covers_from_neighbours(&self, ctx: &FormalContext) -> Vec<Vec<usize>> {
        let n = self.size();
        if ctx.n_objects() <= ctx.n_attributes() {
            (0..n)
                .into_par_iter()
                .map(|x| {
                    let c = &self.concepts[x];
                    let mut ups: Vec<usize> = neighbour_sets(&c.extent, &c.intent, ctx.rows())
                        .iter()
                        .map(|e| self.extent_index[e])
                        .collect();
                    ups.sort_unstable();
                    ups
                })
                .collect()
        } else {
            let lower: Vec<Vec<usize>> = (0..n)
                .into_par_iter()
                .map(|x| {
                    let c = &self.concepts[x];
                    neighbour_sets(&c.intent, &c.extent, ctx.cols())
                        .iter()
                        .map(|d| self.intent_index[d])
                        .collect()
                })
                .collect();
            let mut upper = vec![Vec::new(); n];
            for (x, ls) in lower.iter().enumerate() {
                for &l in ls {
                    upper[l].push(x);
                }
            }
            upper
        }
    }

    fn set_covers(&mut self, upper: Vec<Vec<usize>>) {
        let n = self.size();
        let mut lower = vec![Vec::new(); n];
        for (x, ups) in upper.iter().enumerate() {
            for &y in ups {
                lower[y].push(x);
            }
        }
        for l in &mut lower {
            l.sort_unstable();
        }
        self.join_irreducible = BitSet::from_indices(n, (0..n).filter(|&x| lower[x].len() == 1));
        self.meet_irreducible = BitSet::from_indices(n, (0..n).filter(|&x| upper[x].len() == 1));
        self.upper_covers = upper;
        self.lower_covers = lower;
    }

    // ---- accessors --------------------------------------------------------

    pub fn size(&self) -> usize {
        self.concepts.len()
    }

    pub fn concepts(&self) -> &[Concept] {
        &self.concepts
    }

    pub fn concept(&self, x: usize) -> &Concept {
        &self.concepts[x]
    }

    pub fn n_objects(&self) -> usize {
        self.n_objects
    }

    pub fn n_attributes(&self) -> usize {
        self.n_attributes
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper_covers[x]
    }

    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower_covers[x]
    }

    /// Covering pairs `(lower, upper)`, ordered by lower then upper index.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.upper_covers
            .iter()
            .enumerate()
            .flat_map(|(x, ups)| ups.iter().map(move |&y| (x, y)))
            .collect()
    }

    pub fn cover_count(&self) -> usize {
        self.upper_covers.iter().map(Vec::len).sum()
    }

    pub fn is_cover(&self, x: usize, y: usize) -> bool {
        self.upper_covers[x].binary_search(&y).is_ok()
    }

    pub fn join_irreducibles(&self) -> &BitSet {
        &self.join_irreducible
    }

    pub fn meet_irreducibles(&self) -> &BitSet {
        &self.meet_irreducible
    }

    /// `(join-irreducible, meet-irreducible)` flags.
    pub fn irreducibles(&self) -> (&BitSet, &BitSet) {
        (&self.join_irreducible, &self.meet_irreducible)
    }

    pub fn atoms(&self) -> &[usize] {
        &self.upper_covers[self.bottom]
    }

    pub fn coatoms(&self) -> &[usize] {
        &self.lower_covers[self.top]
    }

    pub fn index_of_extent(&self, extent: &BitSet) -> Option<usize> {
        self.extent_index.get(extent).copied()
    }

    pub fn index_of_intent(&self, intent: &BitSet) -> Option<usize> {
        self.intent_index.get(intent).copied()
    }

    // ---- order --------------------------------------------------------------

    /// Up-set rows `{y : x ≤ y}`, built on first use when `|L|²` bits fit
    /// the memory budget.
    pub fn up_sets(&self) -> Option<&BitMatrix> {
        self.up_sets
            .get_or_init(|| {
                let n = self.size() as u64;
                if n * n / 8 > self.memory_budget {
                    return None;
                }
                Some(self.compute_up_sets())
            })
            .as_ref()
    }

    fn compute_up_sets(&self) -> BitMatrix {
        let n = self.size();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| std::cmp::Reverse(self.concepts[x].extent.count()));
        let mut up = vec![BitSet::new(n); n];
        for &x in &order {
            let mut row = BitSet::new(n);
            row.insert(x);
            for &y in &self.upper_covers[x] {
                row.union_with(&up[y]);
            }
            up[x] = row;
        }
        up
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        match self.up_sets.get() {
            Some(Some(up)) => up[x].contains(y),
            _ => self.concepts[x].extent.is_subset(&self.concepts[y].extent),
        }
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        let intent = self.concepts[x]
            .intent
            .intersection(&self.concepts[y].intent);
        self.intent_index[&intent]
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        let extent = self.concepts[x]
            .extent
            .intersection(&self.concepts[y].extent);
        self.extent_index[&extent]
    }

    pub fn join_all<I: IntoIterator<Item = usize>>(&self, xs: I) -> usize {
        xs.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn meet_all<I: IntoIterator<Item = usize>>(&self, xs: I) -> usize {
        xs.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// Elements sorted so that every element comes after all elements below it.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.size()).collect();
        order.sort_by_key(|&x| (self.concepts[x].extent.count(), x));
        order
    }

    /// `[x, y]`; fails unless `x ≤ y`.
    pub fn interval(&self, x: usize, y: usize) -> Result<Interval> {
        if !self.leq(x, y) {
            return Err(Error::NotComparable(x, y));
        }
        let elements = (0..self.size())
            .filter(|&z| self.leq(x, z) && self.leq(z, y))
            .collect();
        Ok(Interval {
            bottom: x,
            top: y,
            elements,
        })
    }

    /// `x^⊤`, the join of the upper covers of `x` (`x` itself at the top).
    pub fn cover_join(&self, x: usize) -> usize {
        self.upper_covers[x]
            .iter()
            .fold(x, |acc, &y| self.join(acc, y))
    }

    /// `[x, x^⊤]`.
    pub fn upper_interval(&self, x: usize) -> Interval {
        self.interval(x, self.cover_join(x))
            .expect("x lies below the join of its covers")
    }

    // ---- derived structures ---------------------------------------------------

    /// The order dual, keeping indices: extents and intents swap roles.
    pub fn dual(&self) -> ConceptLattice {
        let concepts = self
            .concepts
            .iter()
            .map(|c| Concept {
                extent: c.intent.clone(),
                intent: c.extent.clone(),
            })
            .collect();
        ConceptLattice {
            concepts,
            n_objects: self.n_attributes,
            n_attributes: self.n_objects,
            upper_covers: self.lower_covers.clone(),
            lower_covers: self.upper_covers.clone(),
            bottom: self.top,
            top: self.bottom,
            join_irreducible: self.meet_irreducible.clone(),
            meet_irreducible: self.join_irreducible.clone(),
            extent_index: self.intent_index.clone(),
            intent_index: self.extent_index.clone(),
            memory_budget: self.memory_budget,
            up_sets: OnceLock::new(),
        }
    }

    /// Join-irreducibles against meet-irreducibles, incident when `j ≤ m`.
    /// Names are the concept indices prefixed with `j` and `m`.
    pub fn standard_context(&self) -> FormalContext {
        let js: Vec<usize> = self.join_irreducible.iter().collect();
        let ms: Vec<usize> = self.meet_irreducible.iter().collect();
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
            js.iter().map(|j| format!("j{j}")).collect(),
            ms.iter().map(|m| format!("m{m}")).collect(),
            rows,
        )
        .expect("indices are distinct")
    }

    /// One pass over the elements in a linear extension.
    pub fn element_stats(&self) -> LatticeElementStats {
        let n = self.size();
        // Each join-irreducible c is the object concept of any object in
        // ext(c) ∖ ext(lower cover); c ≤ x iff that object lies in ext(x).
        let mut j_objects = BitSet::new(self.n_objects);
        for c in self.join_irreducible.iter() {
            let lower = self.lower_covers[c][0];
            let g = self.concepts[c]
                .extent
                .difference(&self.concepts[lower].extent)
                .first()
                .expect("a cover strictly grows the extent");
            j_objects.insert(g);
        }
        let mut m_attributes = BitSet::new(self.n_attributes);
        for c in self.meet_irreducible.iter() {
            let upper = self.upper_covers[c][0];
            let m = self.concepts[c]
                .intent
                .difference(&self.concepts[upper].intent)
                .first()
                .expect("a cover strictly shrinks the intent");
            m_attributes.insert(m);
        }
        let j: Vec<usize> = self
            .concepts
            .iter()
            .map(|c| c.extent.intersection_count(&j_objects))
            .collect();
        let m: Vec<usize> = self
            .concepts
            .iter()
            .map(|c| c.intent.intersection_count(&m_attributes))
            .collect();
        let mut height = vec![0; n];
        for x in self.linear_extension() {
            height[x] = self.lower_covers[x]
                .iter()
                .map(|&l| height[l] + 1)
                .max()
                .unwrap_or(0);
        }
        let total_m = self.meet_irreducible.count();
        let rank_candidate = m.iter().map(|&v| total_m - v).collect();
        LatticeElementStats {
            j,
            m,
            height,
            rank_candidate,
        }
    }

    /// Order isomorphism onto `other`, if any: `map[x]` is the image of `x`.
    pub fn find_isomorphism(&self, other: &ConceptLattice) -> Option<Vec<usize>> {
        if self.size() != other.size() || self.cover_count() != other.cover_count() {
            return None;
        }
        let sa = self.element_stats();
        let sb = other.element_stats();
        let key = |lat: &ConceptLattice, s: &LatticeElementStats, x: usize| {
            (
                s.height[x],
                s.j[x],
                s.m[x],
                lat.lower_covers[x].len(),
                lat.upper_covers[x].len(),
            )
        };
        let mut ka: Vec<_> = (0..self.size()).map(|x| key(self, &sa, x)).collect();
        let mut kb: Vec<_> = (0..other.size()).map(|x| key(other, &sb, x)).collect();
        let order: Vec<usize> = {
            let mut o: Vec<usize> = (0..self.size()).collect();
            o.sort_by_key(|&x| (sa.height[x], x));
            o
        };
        let keys_a = ka.clone();
        ka.sort_unstable();
        kb.sort_unstable();
        if ka != kb {
            return None;
        }
        let kb: Vec<_> = (0..other.size()).map(|x| key(other, &sb, x)).collect();
        let mut map = vec![usize::MAX; self.size()];
        let mut used = vec![false; other.size()];
        if self.extend_iso(other, &order, 0, &keys_a, &kb, &mut map, &mut used) {
            Some(map)
        } else {
            None
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn extend_iso<K: PartialEq>(
        &self,
        other: &ConceptLattice,
        order: &[usize],
        pos: usize,
        keys_a: &[K],
        keys_b: &[K],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        let Some(&x) = order.get(pos) else {
            return true;
        };
        for y in 0..other.size() {
            if used[y] || keys_a[x] != keys_b[y] {
                continue;
            }
            // lower covers of x are already mapped (smaller height)
            let mut images: Vec<usize> = self.lower_covers[x].iter().map(|&l| map[l]).collect();
            images.sort_unstable();
            if images != other.lower_covers[y] {
                continue;
            }
            map[x] = y;
            used[y] = true;
            if self.extend_iso(other, order, pos + 1, keys_a, keys_b, map, used) {
                return true;
            }
            used[y] = false;
            map[x] = usize::MAX;
        }
        false
    }

    pub fn is_isomorphic(&self, other: &ConceptLattice) -> bool {
        self.find_isomorphism(other).is_some()
    }

    /// Serializable form; names are taken from `ctx` when given.
    pub fn to_dump(&self, ctx: Option<&FormalContext>) -> LatticeDump {
        LatticeDump {
            objects: ctx.map(|c| c.objects().to_vec()).unwrap_or_default(),
            attributes: ctx.map(|c| c.attributes().to_vec()).unwrap_or_default(),
            n_objects: self.n_objects,
            n_attributes: self.n_attributes,
            bottom: self.bottom,
            top: self.top,
            concepts: self
                .concepts
                .iter()
                .map(|c| ConceptDump {
                    extent: c.extent.to_vec(),
                    intent: c.intent.to_vec(),
                })
                .collect(),
            covers: self.covers(),
        }
    }

    /// Rebuild from a dump, checking that the stored covers are right.
    pub fn from_dump(dump: &LatticeDump) -> Result<ConceptLattice> {
        let mut concepts = Vec::with_capacity(dump.concepts.len());
        for c in &dump.concepts {
            for &g in &c.extent {
                if g >= dump.n_objects {
                    return Err(Error::IndexOutOfRange {
                        kind: "object",
                        index: g,
                        size: dump.n_objects,
                    });
                }
            }
            for &m in &c.intent {
                if m >= dump.n_attributes {
                    return Err(Error::IndexOutOfRange {
                        kind: "attribute",
                        index: m,
                        size: dump.n_attributes,
                    });
                }
            }
            concepts.push(Concept {
                extent: BitSet::from_indices(dump.n_objects, c.extent.iter().copied()),
                intent: BitSet::from_indices(dump.n_attributes, c.intent.iter().copied()),
            });
        }
        let lat = ConceptLattice::from_concepts(concepts, dump.n_objects, dump.n_attributes)?;
        if lat.covers() != dump.covers {
            return Err(Error::InvalidLattice(
                "stored covers differ from the recomputed ones".into(),
            ));
        }
        Ok(lat)
    }
}

/// Neighbours of a concept seen from one side. `own` is the concept's set
/// on the side indexing `lines`, `other` its derivation, and `lines[k]` is
/// `k'`. Each `k` outside `own` generates the candidate `(own + k)''`; a
/// candidate is a neighbour iff every element it adds generates it.
fn neighbour_sets(own: &BitSet, other: &BitSet, lines: &[BitSet]) -> Vec<BitSet> {
    let mut counts: HashMap<BitSet, usize> = HashMap::new();
    let outside = own.complement();
    for k in outside.iter() {
        let derived = other.intersection(&lines[k]);
        let mut closed = own.clone();
        for i in outside.iter() {
            if derived.is_subset(&lines[i]) {
                closed.insert(i);
            }
        }
        *counts.entry(closed).or_insert(0) += 1;
    }
    let own_count = own.count();
    counts
        .into_iter()
        .filter(|(set, n)| set.count() - own_count == *n)
        .map(|(set, _)| set)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub bottom: usize,
    pub top: usize,
    /// Members in index order.
    pub elements: Vec<usize>,
}

impl Interval {
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    /// Order restricted to the interval, rows and columns in `elements` order.
    pub fn order(&self, lat: &ConceptLattice) -> BitMatrix {
        self.elements
            .iter()
            .map(|&x| {
                BitSet::from_indices(
                    self.elements.len(),
                    self.elements
                        .iter()
                        .enumerate()
                        .filter(|(_, &y)| lat.leq(x, y))
                        .map(|(k, _)| k),
                )
            })
            .collect()
    }
}

/// Per-element counts used by the rise computations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeElementStats {
    /// Join-irreducibles below or equal.
    pub j: Vec<usize>,
    /// Meet-irreducibles above or equal.
    pub m: Vec<usize>,
    /// Size of the longest chain strictly below.
    pub height: Vec<usize>,
    /// Meet-irreducibles not above.
    pub rank_candidate: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptDump {
    pub extent: Vec<usize>,
    pub intent: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDump {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub objects: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub attributes: Vec<String>,
    pub n_objects: usize,
    pub n_attributes: usize,
    pub bottom: usize,
    pub top: usize,
    pub concepts: Vec<ConceptDump>,
    pub covers: Vec<(usize, usize)>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn lat(ctx: &FormalContext) -> ConceptLattice {
        ConceptLattice::from_context(ctx)
    }

    #[test]
    fn enumerators_agree_on_reference_contexts() {
        for (name, ctx) in catalog::reference_contexts() {
            assert_eq!(
                enumerate_concepts(&ctx),
                next_closure_concepts(&ctx),
                "{name}"
            );
        }
        assert_eq!(enumerate_concepts(&FormalContext::empty()).len(), 1);
    }

    #[test]
    fn concept_limit_reports_progress() {
        let ctx = catalog::contranominal(6);
        let err = enumerate_concepts_limited(&ctx, Some(10)).unwrap_err();
        match err {
            Error::Capacity { limit, reached, .. } => {
                assert_eq!(limit, 10);
                assert!(reached > 10);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            enumerate_concepts_limited(&ctx, Some(64)).unwrap().len(),
            64
        );
    }

    #[test]
    fn boolean_lattice_shape() {
        let l = lat(&catalog::contranominal(3));
        assert_eq!(l.size(), 8);
        assert_eq!(l.cover_count(), 12);
        assert_eq!(l.join_irreducibles().count(), 3);
        assert_eq!(l.meet_irreducibles().count(), 3);
        assert_eq!(l.atoms(), l.join_irreducibles().to_vec().as_slice());
        let std = l.standard_context();
        assert_eq!(std.n_objects(), 3);
        for g in 0..3 {
            assert_eq!(std.rows()[g].count(), 2, "each atom lies below two coatoms");
        }
        for x in 0..8 {
            let iv = l.upper_interval(x);
            assert_eq!(iv.size(), 1 << l.upper_covers(x).len());
        }
    }

    #[test]
    fn single_concept_lattice() {
        let l = lat(&FormalContext::empty());
        assert_eq!(l.size(), 1);
        assert_eq!(l.cover_count(), 0);
        assert_eq!(l.bottom(), l.top());
        let s = l.element_stats();
        assert_eq!(s.height, vec![0]);
    }

    #[test]
    fn chains() {
        let l = lat(&catalog::chain(5));
        assert_eq!(l.size(), 5);
        assert_eq!(l.join_irreducibles().count(), 4);
        let std = lat(&catalog::chain(3)).standard_context();
        assert_eq!(std.n_objects(), 2);
        assert_eq!(std.n_attributes(), 2);
        // irreducibles 1, 2 against 0, 1: only 1 ≤ 1 holds
        let counts: Vec<usize> = std.rows().iter().map(BitSet::count).collect();
        let mut sorted = counts.clone();
        sorted.sort();
        assert_eq!(sorted, vec![0, 1]);
    }

    #[test]
    fn s7_counts_and_j_values() {
        let l = lat(&catalog::s7());
        assert_eq!(l.size(), 7);
        assert_eq!(l.join_irreducibles().count(), 4);
        assert_eq!(l.meet_irreducibles().count(), 3);
        let s = l.element_stats();
        assert_eq!(s.j[l.top()], 4);
        assert_eq!(s.m[l.bottom()], 3);
        // along every maximal chain j reads 0, 1, 2, 4
        fn walk(l: &ConceptLattice, s: &LatticeElementStats, x: usize, path: &mut Vec<usize>) {
            path.push(s.j[x]);
            if x == l.top() {
                assert_eq!(path, &vec![0, 1, 2, 4]);
            }
            for &y in l.upper_covers(x) {
                walk(l, s, y, path);
            }
            path.pop();
        }
        walk(&l, &s, l.bottom(), &mut Vec::new());
        let round = lat(&l.standard_context());
        assert!(round.is_isomorphic(&l));
    }

    #[test]
    fn n5_heights() {
        let l = lat(&catalog::n5());
        let s = l.element_stats();
        let mut h = s.height.clone();
        h.sort();
        assert_eq!(h, vec![0, 1, 1, 2, 3]);
        assert_eq!(s.height[l.top()], 3);
    }

    #[test]
    fn m3_joins_and_intervals() {
        let l = lat(&catalog::m3());
        let atoms = l.atoms().to_vec();
        assert_eq!(atoms.len(), 3);
        assert_eq!(l.join(atoms[0], atoms[1]), l.top());
        assert_eq!(l.meet(atoms[0], atoms[2]), l.bottom());
        assert_eq!(l.cover_join(l.bottom()), l.top());
        assert_eq!(l.upper_interval(l.bottom()).size(), 5);
        assert_eq!(l.interval(l.bottom(), l.top()).unwrap().size(), 5);
        assert!(matches!(
            l.interval(l.top(), l.bottom()),
            Err(Error::NotComparable(..))
        ));
        for x in 0..5 {
            assert_eq!(l.join(x, l.bottom()), x);
            for y in 0..5 {
                assert_eq!(l.meet(x, y) == x, l.leq(x, y));
            }
        }
    }

    #[test]
    fn cover_methods_agree() {
        let ctx = catalog::m3_m3().direct_sum(&catalog::s7());
        let a = ConceptLattice::from_context_with(
            &ctx,
            &LatticeOptions {
                cover_method: CoverMethod::OrderMatrix,
                ..Default::default()
            },
        )
        .unwrap();
        for c in [ctx.clone(), ctx.transpose()] {
            let b = ConceptLattice::from_context_with(
                &c,
                &LatticeOptions {
                    cover_method: CoverMethod::Neighbours,
                    ..Default::default()
                },
            )
            .unwrap();
            assert_eq!(a.size(), b.size());
            assert_eq!(a.cover_count(), b.cover_count());
        }
        let b = ConceptLattice::from_context_with(
            &ctx,
            &LatticeOptions {
                cover_method: CoverMethod::Neighbours,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(a.covers(), b.covers());
    }

    #[test]
    fn order_without_matrix() {
        let l = ConceptLattice::from_context_with(
            &catalog::m3_m3(),
            &LatticeOptions {
                memory_budget: 0,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(l.up_sets().is_none());
        assert!(l.leq(l.bottom(), l.top()));
        let full = lat(&catalog::m3_m3());
        let up = full.up_sets().unwrap();
        for x in 0..l.size() {
            for y in 0..l.size() {
                assert_eq!(up[x].contains(y), l.leq(x, y));
            }
        }
    }

    #[test]
    fn product_with_chain_is_isomorphic_to_direct_sum() {
        let a = lat(&catalog::chain(4).direct_sum(&catalog::chain(2)));
        assert_eq!(a.size(), 8);
        let b = lat(&catalog::chain(2).direct_sum(&catalog::chain(4)));
        assert!(a.is_isomorphic(&b));
        assert!(!a.is_isomorphic(&lat(&catalog::contranominal(3))));
    }

    #[test]
    fn dual_swaps_everything() {
        let l = lat(&catalog::s7());
        let d = l.dual();
        assert_eq!(d.bottom(), l.top());
        assert_eq!(d.join_irreducibles(), l.meet_irreducibles());
        for x in 0..7 {
            for y in 0..7 {
                assert_eq!(d.leq(x, y), l.leq(y, x));
                assert_eq!(d.join(x, y), l.meet(x, y));
            }
        }
        assert!(d.is_isomorphic(&lat(&catalog::s7_dual())));
    }

    #[test]
    fn dump_round_trip() {
        let ctx = catalog::n5();
        let l = lat(&ctx);
        let dump = l.to_dump(Some(&ctx));
        let text = serde_json::to_string(&dump).unwrap();
        let back: LatticeDump = serde_json::from_str(&text).unwrap();
        assert_eq!(back, dump);
        let rebuilt = ConceptLattice::from_dump(&back).unwrap();
        assert_eq!(rebuilt.covers(), l.covers());
        let mut broken = dump.clone();
        broken.covers.pop();
        assert!(ConceptLattice::from_dump(&broken).is_err());
    }

    #[test]
    fn incomplete_concept_sets_are_rejected() {
        let mut cs = enumerate_concepts(&catalog::m3());
        let dup = cs[1].clone();
        cs.push(dup);
        assert!(ConceptLattice::from_concepts(cs, 3, 3).is_err());
        let mut cs = enumerate_concepts(&catalog::m3());
        cs.retain(|c| !c.extent.is_full());
        assert!(ConceptLattice::from_concepts(cs, 3, 3).is_err());
    }
}
