use proptest::prelude::*;

use ixlab_core::formulas::{binomial, ExactInt, ParamSet};
use ixlab_core::search::{for_each_closed_pair, PruneSwitches, SearchRequest, StrategyRegistry, Witness};
use ixlab_core::verify::{
    covering_number, dual, is_cross_t_intersecting, is_maximal_cross_pair, is_nontrivial, is_r_wise_t_intersecting,
    min_covers, PairParams,
};
use ixlab_core::{enumerate_k_subsets, family_intersection, restrict, Family, SetMask};

fn k_sets(n: u32, k: u32) -> Vec<u64> {
    (0u64..1 << n).filter(|m| m.count_ones() == k).collect()
}

/// A k-uniform family over `[n]`, `n <= 7`, chosen by the bits of `pick`.
fn family(n: u32, k: u32, pick: u64) -> Family {
    let all = k_sets(n, k);
    Family::new(n, k, all.iter().enumerate().filter(|(i, _)| pick >> i & 1 == 1).map(|(_, &m)| m)).unwrap()
}

fn any_family() -> impl Strategy<Value = Family> {
    (3u32..=7)
        .prop_flat_map(|n| (Just(n), 1..n, any::<u64>()))
        .prop_map(|(n, k, pick)| family(n, k, pick))
}

/// Families that tend to be r-wise t-intersecting: random subfamilies of the
/// k-subsets of a small frame.
fn dense_family() -> impl Strategy<Value = (Family, usize, u32)> {
    (5u32..=8, 2u32..=4, 0u32..=2, any::<u64>(), 2usize..=4, 1u32..=3).prop_map(|(n, k, extra, pick, r, t)| {
        let frame = (1u64 << (k + extra).min(n)) - 1;
        let pool: Vec<u64> = k_sets(n, k).into_iter().filter(|&m| m & frame == m).collect();
        let ms = pool.iter().enumerate().filter(|(i, _)| pick >> (i % 64) & 1 == 1).map(|(_, &m)| m);
        (Family::new(n, k, ms).unwrap(), r, t.min(k))
    })
}

fn any_set(n: u32) -> impl Strategy<Value = SetMask> {
    (0u64..1 << n).prop_map(move |b| SetMask::new(n, b).unwrap())
}

fn rwise(n: i64, k: i64, t: i64, r: i64) -> SearchRequest {
    SearchRequest::new(ParamSet::Rwise { n, k, t, r })
}

fn optimum(req: &SearchRequest) -> ExactInt {
    StrategyRegistry::builtin().get("rwise").unwrap().run(req).unwrap().optimum
}

#[test]
fn k_subset_counts_match_binomial() {
    for n in 0..=12u32 {
        for k in 0..=n {
            let f = enumerate_k_subsets(n, k).unwrap();
            assert_eq!(ExactInt::from(f.len()), binomial(n as i64, k as i64), "n={n} k={k}");
        }
    }
}

proptest! {
    #[test]
    fn restrict_composes(f in any_family(), a in 0u64..128, b in 0u64..128) {
        let n = f.universe();
        let mask = (1u64 << n) - 1;
        let (a, b) = (SetMask::new(n, a & mask).unwrap(), SetMask::new(n, b & mask).unwrap());
        let twice = restrict(&restrict(&f, &a).unwrap(), &b).unwrap();
        prop_assert_eq!(twice, restrict(&f, &a.union(&b)).unwrap());
    }

    #[test]
    fn intersection_lies_in_every_member(f in any_family()) {
        let i = family_intersection(&f);
        prop_assert!(f.iter().all(|m| i.is_subset_of(&m)));
        if f.is_empty() {
            prop_assert_eq!(i, SetMask::full(f.universe()));
        }
    }

    #[test]
    fn text_round_trip(f in any_family()) {
        prop_assert_eq!(Family::parse_text(&f.to_text()).unwrap(), f);
    }

    #[test]
    fn dual_is_antitone_and_closes(f in any_family(), extra in any::<u64>(), k_out in 1u32..=4, t in 1u32..=2) {
        let n = f.universe();
        let k_out = k_out.min(n);
        let bigger = f.union_with(&family(n, f.k(), extra)).unwrap();
        let (d_small, d_big) = (dual(&f, k_out, t).unwrap(), dual(&bigger, k_out, t).unwrap());
        prop_assert!(d_big.is_subfamily_of(&d_small));
        prop_assert!(f.is_subfamily_of(&dual(&d_small, f.k(), t).unwrap()));
    }

    #[test]
    fn cover_number_t_iff_in_a_star(f in any_family(), t in 1u32..=3) {
        prop_assume!(!f.is_empty() && t <= f.k());
        let res = covering_number(&f, t).unwrap();
        prop_assert!(res.certificate.certifies(&f));
        prop_assert_eq!(res.tau == t, f.intersection().len() >= t);
        prop_assert!(res.tau <= f.union().len());
        let covers = min_covers(&f, t).unwrap();
        prop_assert!(!covers.is_empty());
        prop_assert!(covers.iter().all(|c| c.len() == res.tau && f.iter().all(|m| m.meet_size(&c) >= t)));
    }

    #[test]
    fn cover_certificate_is_minimal(f in any_family(), t in 1u32..=2, s in any_set(7)) {
        prop_assume!(!f.is_empty() && t <= f.k());
        let n = f.universe();
        let s = SetMask::new(n, s.bits() & ((1u64 << n) - 1)).unwrap();
        let tau = covering_number(&f, t).unwrap().tau;
        if f.iter().all(|m| m.meet_size(&s) >= t) {
            prop_assert!(s.len() >= tau);
        }
    }

    #[test]
    fn nontrivial_rwise_is_pairwise_t_plus_r_minus_2((f, r, t) in dense_family()) {
        if is_r_wise_t_intersecting(&f, r, t) && is_nontrivial(&f, t) {
            prop_assert!(is_r_wise_t_intersecting(&f, 2, t + r as u32 - 2));
        }
    }

    #[test]
    fn rwise_is_monotone_in_r((f, r, t) in dense_family()) {
        if is_r_wise_t_intersecting(&f, r + 1, t) {
            prop_assert!(is_r_wise_t_intersecting(&f, r, t));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn search_optimum_is_monotone(n in 4i64..=6, k in 2i64..=3, t in 1i64..=2, r in 2i64..=3, nt in any::<bool>()) {
        prop_assume!(k < n && t <= k);
        let mut req = rwise(n, k, t, r);
        req.require_nontrivial = nt;
        let base = optimum(&req);
        let mut more_r = rwise(n, k, t, r + 1);
        more_r.require_nontrivial = nt;
        prop_assert!(optimum(&more_r) <= base);
        // raising t relaxes non-triviality, so compare without it
        if t < k {
            prop_assert!(optimum(&rwise_trivial(n, k, t + 1, r)) <= optimum(&rwise_trivial(n, k, t, r)));
        }
    }

    #[test]
    fn pruning_never_changes_results(n in 4i64..=6, k in 2i64..=3, t in 1i64..=2, r in 2i64..=3, nt in any::<bool>()) {
        prop_assume!(k < n && t <= k);
        let reg = StrategyRegistry::builtin();
        let s = reg.get("rwise").unwrap();
        let mut req = rwise(n, k, t, r);
        req.require_nontrivial = nt;
        let full = s.run(&req).unwrap();
        for off in 0..4 {
            let mut p = PruneSwitches::default();
            match off {
                0 => p.bound = false,
                1 => p.pairwise = false,
                2 => p.rwise = false,
                _ => p.triviality = false,
            }
            req.prunes = p;
            let rep = s.run(&req).unwrap();
            prop_assert_eq!(&rep.optimum, &full.optimum);
            prop_assert_eq!(&rep.witnesses, &full.witnesses);
            prop_assert!(rep.nodes_explored >= full.nodes_explored);
        }
    }

    #[test]
    fn witnesses_pass_verifiers(n in 4i64..=6, k in 2i64..=3, t in 1i64..=2, r in 2i64..=3) {
        prop_assume!(k < n && t <= k);
        let rep = StrategyRegistry::builtin().get("rwise").unwrap().run(&rwise(n, k, t, r)).unwrap();
        for w in &rep.witnesses {
            let Witness::Family(f) = w else { unreachable!() };
            prop_assert!(is_r_wise_t_intersecting(f, r as usize, t as u32));
            prop_assert!(is_nontrivial(f, t as u32));
            prop_assert_eq!(ExactInt::from(f.len()), rep.optimum.clone());
        }
    }

    #[test]
    fn relaxation_bounds_the_search(n in 4i64..=6, k in 2i64..=3, t in 1i64..=2, r in 2i64..=3) {
        prop_assume!(k < n && t <= k);
        let reg = StrategyRegistry::builtin();
        let req = rwise(n, k, t, r);
        let exact = reg.get("rwise").unwrap().run(&req).unwrap().optimum;
        let relaxed = reg.get("rwise-relaxed").unwrap().run(&req).unwrap().optimum;
        prop_assert!(relaxed >= exact);
    }

    #[test]
    fn closed_pairs_are_maximal(n in 3u32..=5, k1 in 1u32..=3, k2 in 1u32..=3, t in 1u32..=2) {
        prop_assume!(k1 <= n && k2 <= n && t <= k1.min(k2));
        let mut bad = 0;
        let mut pairs = 0;
        for_each_closed_pair(n, k1, k2, t, u64::MAX, |f, g| {
            pairs += 1;
            let p = PairParams::new(t, f.clone(), g.clone()).unwrap();
            if !is_cross_t_intersecting(&p) || !is_maximal_cross_pair(&p).unwrap() {
                bad += 1;
            }
        }).unwrap();
        prop_assert!(pairs > 0);
        prop_assert_eq!(bad, 0);
    }
}

fn rwise_trivial(n: i64, k: i64, t: i64, r: i64) -> SearchRequest {
    let mut req = rwise(n, k, t, r);
    req.require_nontrivial = false;
    req
}
