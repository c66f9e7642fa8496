use std::collections::BTreeMap;

use proptest::prelude::*;

use fca_rises::catalog;
use fca_rises::distributivity::{
    count_distributivity_violations, find_sublattice, is_distributive, is_dually_semimodular,
    is_join_distributive, is_meet_distributive, is_modular_direct, is_semimodular,
    is_semimodular_pairwise, s7_witness_constructive, verify_witness,
};
use fca_rises::lattice::{next_closure_concepts, LatticeDump};
use fca_rises::random::{random_poset, random_small_lattice, rng};
use fca_rises::{BitSet, ConceptLattice, FormalContext, Method, Pattern, Poset, RiseReport, Side};

fn context(max_g: usize, max_m: usize) -> impl Strategy<Value = FormalContext> {
    (0..=max_g, 0..=max_m).prop_flat_map(|(g, m)| {
        prop::collection::vec(prop::collection::vec(any::<bool>(), m), g).prop_map(move |cells| {
            let rows = cells
                .iter()
                .map(|r| BitSet::from_bools(r))
                .collect::<Vec<_>>();
            FormalContext::new(
                (0..g).map(|i| format!("g{i}")).collect(),
                (0..m).map(|i| format!("m{i}")).collect(),
                rows,
            )
            .unwrap()
        })
    })
}

fn subset(n: usize) -> impl Strategy<Value = BitSet> {
    prop::collection::vec(any::<bool>(), n).prop_map(|b| BitSet::from_bools(&b))
}

fn context_and_sets() -> impl Strategy<Value = (FormalContext, BitSet, BitSet)> {
    context(12, 12).prop_flat_map(|c| {
        let g = c.n_objects();
        (Just(c), subset(g), subset(g))
    })
}

fn cover_multiset(lat: &ConceptLattice) -> BTreeMap<(usize, usize), usize> {
    let mut out = BTreeMap::new();
    for x in 0..lat.size() {
        *out.entry((lat.lower_covers(x).len(), lat.upper_covers(x).len()))
            .or_default() += 1;
    }
    out
}

fn brute_force_extents(ctx: &FormalContext) -> Vec<BitSet> {
    let g = ctx.n_objects();
    let mut out: Vec<BitSet> = (0..1u32 << g)
        .map(|mask| {
            let s = BitSet::from_indices(g, (0..g).filter(|i| mask >> i & 1 == 1));
            ctx.closure(Side::Objects, &s).unwrap()
        })
        .collect();
    out.sort_by(|a, b| a.lectic_cmp(b));
    out.dedup();
    out
}

fn small_lattice() -> impl Strategy<Value = (FormalContext, ConceptLattice)> {
    (any::<u64>(), 4usize..=30).prop_map(|(seed, max)| random_small_lattice(&mut rng(seed), max))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn derive_is_antitone((ctx, s, t) in context_and_sets()) {
        let u = s.union(&t);
        let ds = ctx.derive(Side::Objects, &s).unwrap();
        let du = ctx.derive(Side::Objects, &u).unwrap();
        prop_assert!(du.is_subset(&ds));
    }

    #[test]
    fn closure_is_a_closure_operator((ctx, s, t) in context_and_sets()) {
        let u = s.union(&t);
        let cs = ctx.closure(Side::Objects, &s).unwrap();
        let cu = ctx.closure(Side::Objects, &u).unwrap();
        prop_assert!(s.is_subset(&cs));
        prop_assert!(cs.is_subset(&cu));
        prop_assert_eq!(ctx.closure(Side::Objects, &cs).unwrap(), cs);
    }

    #[test]
    fn reduction_keeps_the_lattice(ctx in context(8, 8)) {
        let red = ctx.reduce();
        prop_assert!(red.context.is_reduced());
        let a = ConceptLattice::from_context(&ctx);
        let b = ConceptLattice::from_context(&red.context);
        prop_assert_eq!(a.size(), b.size());
        prop_assert_eq!(cover_multiset(&a), cover_multiset(&b));
        prop_assert!(a.is_isomorphic(&b));
    }

    #[test]
    fn arrows_avoid_incidence(ctx in context(10, 10)) {
        let arrows = ctx.arrows();
        for g in 0..ctx.n_objects() {
            for m in 0..ctx.n_attributes() {
                if ctx.incident(g, m) {
                    prop_assert!(!arrows.is_down(g, m) && !arrows.is_up(g, m));
                }
            }
        }
    }

    #[test]
    fn irreducible_counts_on_reduced_contexts(ctx in context(8, 8)) {
        let ctx = ctx.reduce().context;
        let lat = ConceptLattice::from_context(&ctx);
        let stats = lat.element_stats();
        for (x, c) in lat.concepts().iter().enumerate() {
            prop_assert_eq!(stats.j[x], c.extent.count());
            prop_assert_eq!(stats.m[x], c.intent.count());
        }
    }

    #[test]
    fn covers_generate_the_order(ctx in context(7, 7)) {
        let lat = ConceptLattice::from_context(&ctx);
        let n = lat.size();
        // reflexive-transitive closure of the covers, walked downwards in
        // a linear extension
        let mut up: Vec<BitSet> = (0..n).map(|x| BitSet::from_indices(n, [x])).collect();
        for &x in lat.linear_extension().iter().rev() {
            for &y in lat.upper_covers(x) {
                let above = up[y].clone();
                up[x].union_with(&above);
            }
        }
        for x in 0..n {
            for y in 0..n {
                let by_extent = lat.concept(x).extent.is_subset(&lat.concept(y).extent);
                prop_assert_eq!(up[x].contains(y), by_extent);
                prop_assert_eq!(lat.leq(x, y), by_extent);
            }
        }
    }

    #[test]
    fn enumeration_matches_brute_force(ctx in context(5, 5)) {
        let lat = ConceptLattice::from_context(&ctx);
        let mut extents: Vec<BitSet> = lat.concepts().iter().map(|c| c.extent.clone()).collect();
        extents.sort_by(|a, b| a.lectic_cmp(b));
        prop_assert_eq!(extents, brute_force_extents(&ctx));
    }

    #[test]
    fn enumeration_matches_next_closure(ctx in context(9, 9)) {
        let lat = ConceptLattice::from_context(&ctx);
        prop_assert_eq!(lat.concepts(), &next_closure_concepts(&ctx)[..]);
    }

    #[test]
    fn lattice_axioms(ctx in context(7, 7), picks in prop::collection::vec(any::<prop::sample::Index>(), 3)) {
        let lat = ConceptLattice::from_context(&ctx);
        let n = lat.size();
        let (x, y, z) = (picks[0].index(n), picks[1].index(n), picks[2].index(n));
        prop_assert_eq!(lat.join(x, lat.meet(x, y)), x);
        prop_assert_eq!(lat.meet(x, lat.join(x, y)), x);
        prop_assert_eq!(lat.join(lat.join(x, y), z), lat.join(x, lat.join(y, z)));
        prop_assert_eq!(lat.meet(lat.meet(x, y), z), lat.meet(x, lat.meet(y, z)));
        prop_assert_eq!(lat.join(x, y), lat.join(y, x));
        prop_assert!(lat.leq(x, lat.join(x, y)) && lat.leq(lat.meet(x, y), x));
    }

    #[test]
    fn dump_round_trips(ctx in context(6, 6)) {
        let lat = ConceptLattice::from_context(&ctx);
        let dump = lat.to_dump(Some(&ctx));
        let text = serde_json::to_string(&dump).unwrap();
        let back: LatticeDump = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &dump);
        let again = ConceptLattice::from_dump(&back).unwrap();
        prop_assert_eq!(again.concepts(), lat.concepts());
        prop_assert_eq!(again.covers(), lat.covers());
    }

    #[test]
    fn rises_telescope(ctx in context(8, 8), walk in prop::collection::vec(any::<prop::sample::Index>(), 16)) {
        let lat = ConceptLattice::from_context(&ctx);
        let stats = lat.element_stats();
        let (j, m) = lat.irreducibles();
        let (mut dj, mut dm) = (0, 0);
        let mut x = lat.bottom();
        let mut steps = walk.iter().cycle();
        while x != lat.top() {
            let ups = lat.upper_covers(x);
            let y = ups[steps.next().unwrap().index(ups.len())];
            dj += stats.j[y] - stats.j[x];
            dm += stats.m[x] - stats.m[y];
            x = y;
        }
        prop_assert_eq!(dj, j.count());
        prop_assert_eq!(dm, m.count());
    }

    #[test]
    fn rise_report_invariants(ctx in context(8, 8)) {
        let lat = ConceptLattice::from_context(&ctx);
        let r = RiseReport::from_lattice(&lat);
        prop_assert_eq!(r.per_cover_rises.len(), r.cover_count);
        prop_assert!(r.nur_join_rel.value() <= 1.0 && r.nur_meet_rel.value() <= 1.0);
        prop_assert_eq!(r.by_height_join.iter().map(|b| b.total).sum::<usize>(), r.cover_count);
        prop_assert_eq!(r.by_height_meet.iter().map(|b| b.total).sum::<usize>(), r.cover_count);
        prop_assert_eq!(r.by_height_join.iter().map(|b| b.nonunit).sum::<usize>(), r.nur_join_abs);
        prop_assert_eq!(r.by_height_meet.iter().map(|b| b.nonunit).sum::<usize>(), r.nur_meet_abs);
        prop_assert!(r.per_cover_rises.iter().all(|c| c.delta_j >= 1 && c.delta_m >= 1));
    }

    #[test]
    fn transpose_swaps_rises(ctx in context(8, 8)) {
        let a = RiseReport::from_lattice(&ConceptLattice::from_context(&ctx));
        let b = RiseReport::from_lattice(&ConceptLattice::from_context(&ctx.transpose()));
        prop_assert_eq!(a.lattice_size, b.lattice_size);
        prop_assert_eq!(a.cover_count, b.cover_count);
        prop_assert_eq!(a.nur_join_abs, b.nur_meet_abs);
        prop_assert_eq!(a.nur_meet_abs, b.nur_join_abs);
        prop_assert_eq!(a.atoms_nonunit_meet, b.coatoms_nonunit_join);
        prop_assert_eq!(a.coatoms_nonunit_join, b.atoms_nonunit_meet);
    }

    #[test]
    fn join_checkers_agree(ctx in context(8, 8)) {
        let ctx = ctx.reduce().context;
        let lat = ConceptLattice::from_context(&ctx);
        let r = RiseReport::from_lattice(&lat);
        let jd: Vec<bool> = Method::ALL.iter()
            .map(|&m| is_join_distributive(&lat, m, Some(&ctx)).unwrap())
            .collect();
        let md: Vec<bool> = Method::ALL.iter()
            .map(|&m| is_meet_distributive(&lat, m, Some(&ctx)).unwrap())
            .collect();
        prop_assert!(jd.iter().all(|&v| v == jd[0]), "join methods {:?}", jd);
        prop_assert!(md.iter().all(|&v| v == md[0]), "meet methods {:?}", md);
        prop_assert_eq!(r.nur_meet_abs == 0, jd[0]);
        prop_assert_eq!(r.nur_join_abs == 0, md[0]);
        prop_assert_eq!(jd[0] && md[0], is_distributive(&lat, None).unwrap());
    }

    #[test]
    fn join_distributivity_is_dual((_, lat) in small_lattice()) {
        let dual = lat.dual();
        for m in [Method::Rises, Method::UniqueMeetIrreducible, Method::Rank, Method::BooleanInterval] {
            prop_assert_eq!(
                is_join_distributive(&lat, m, None).unwrap(),
                is_meet_distributive(&dual, m, None).unwrap()
            );
        }
    }

    #[test]
    fn modular_iff_both_semimodular((_, lat) in small_lattice()) {
        let modular = is_modular_direct(&lat, 200).unwrap();
        prop_assert_eq!(is_semimodular(&lat), is_semimodular_pairwise(&lat));
        prop_assert_eq!(modular, is_semimodular(&lat) && is_dually_semimodular(&lat));
    }

    #[test]
    fn s7_characterises_one_sided((_, lat) in small_lattice()) {
        let jd = is_join_distributive(&lat, Method::Rises, None).unwrap();
        let md = is_meet_distributive(&lat, Method::Rises, None).unwrap();
        let found = find_sublattice(&lat, Pattern::S7, 500).unwrap();
        if let Some(w) = &found {
            prop_assert!(verify_witness(&lat, w));
        }
        prop_assert_eq!(jd && !md, jd && found.is_some());
        if jd && !md {
            let w = s7_witness_constructive(&lat).unwrap();
            prop_assert!(verify_witness(&lat, &w));
        } else {
            prop_assert!(s7_witness_constructive(&lat).is_err());
        }
    }

    #[test]
    fn distributivity_oracles_agree((_, lat) in (any::<u64>(), 4usize..=20)
        .prop_map(|(seed, max)| random_small_lattice(&mut rng(seed), max)))
    {
        let d = is_distributive(&lat, None).unwrap();
        let jd = is_join_distributive(&lat, Method::Rises, None).unwrap();
        let md = is_meet_distributive(&lat, Method::Rises, None).unwrap();
        let forbidden = find_sublattice(&lat, Pattern::M3, 500).unwrap().is_some()
            || find_sublattice(&lat, Pattern::N5, 500).unwrap().is_some();
        prop_assert_eq!(d, jd && md);
        prop_assert_eq!(d, count_distributivity_violations(&lat, 200).unwrap() == 0);
        prop_assert_eq!(d, !forbidden);
    }

    #[test]
    fn poset_completion_properties(seed in any::<u64>(), n in 0usize..=12, p in prop::sample::select(vec![0.1, 0.3, 0.5])) {
        let poset = random_poset(&mut rng(seed), n, p);
        let dm = poset.dm_completion();
        let lat = &dm.lattice;
        prop_assert!(dm.is_order_embedding(&poset));

        let (_, meet) = poset.irreducibles();
        let mut image: Vec<usize> = meet.iter().map(|x| dm.iota[x]).collect();
        image.sort_unstable();
        prop_assert_eq!(image, lat.meet_irreducibles().to_vec());

        let stats = lat.element_stats();
        let m = poset.m_values();
        for x in 0..n {
            prop_assert_eq!(m[x], stats.m[dm.iota[x]]);
        }
        for (x, y) in poset.covers() {
            if m[x] - m[y] == 1 {
                prop_assert!(lat.is_cover(dm.iota[x], dm.iota[y]));
            }
        }

        let round = ConceptLattice::from_context(&lat.standard_context());
        prop_assert!(round.is_isomorphic(lat));

        prop_assert_eq!(poset.is_join_distributive(), is_join_distributive(lat, Method::Rises, None).unwrap());
        prop_assert_eq!(poset.is_meet_distributive(), is_meet_distributive(lat, Method::Rises, None).unwrap());
    }

    #[test]
    fn poset_json_round_trips(seed in any::<u64>(), n in 0usize..=10) {
        let poset = random_poset(&mut rng(seed), n, 0.3);
        let text = serde_json::to_string(&poset.to_file()).unwrap();
        let back = Poset::from_json(&text).unwrap();
        prop_assert_eq!(back.names(), poset.names());
        for a in 0..n {
            prop_assert_eq!(back.up_set(a), poset.up_set(a));
        }
    }
}

#[test]
fn reference_contexts_have_irreducible_counts() {
    for (_, ctx) in catalog::reference_contexts() {
        let lat = ConceptLattice::from_context(&ctx);
        let stats = lat.element_stats();
        for (x, c) in lat.concepts().iter().enumerate() {
            assert_eq!(stats.j[x], c.extent.count());
            assert_eq!(stats.m[x], c.intent.count());
        }
    }
}

#[test]
fn lattice_poset_completes_to_itself() {
    for (_, ctx) in catalog::reference_contexts() {
        let lat = ConceptLattice::from_context(&ctx);
        let dm = Poset::from_lattice(&lat).dm_completion();
        assert!(dm.added.is_empty());
        assert!(dm.lattice.is_isomorphic(&lat));
    }
}
