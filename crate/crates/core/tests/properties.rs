use proptest::prelude::*;

use pvmech::cost::{format_rational, parse_rational, ratio, CostValue};
use pvmech::envelope::solve_randomized;
use pvmech::generators::{random_instance, random_submodular_table, RandomParams};
use pvmech::instance::{cost_randomized, is_truthful, AdditiveCostMatrix, Instance, Skeleton};
use pvmech::io::InstanceFile;
use pvmech::mincut::{solve_deterministic, solve_deterministic_unclosed};
use pvmech::oracle::{
    brute_force_deterministic_opt, count_truthful_recursive, enumerate_truthful_deterministic, EnumerationBudget,
};
use pvmech::submodular::{chain_cost, interpret_marginals, uncross, ChainDistribution, MarginalProfile};
use pvmech::{OutcomeSpace, ReportingRelation};

fn instance() -> impl Strategy<Value = Instance> {
    (any::<u64>(), 1usize..=5, 1usize..=4, 0.0f64..0.7, prop::bool::ANY, 0u8..3).prop_map(
        |(seed, n, m, density, close, inf)| {
            let mut p = RandomParams::new(n, m);
            p.edge_density = density;
            p.close = close;
            p.infinity_rate = 0.1 * inf as f64;
            random_instance(seed, &p).unwrap()
        },
    )
}

fn profile() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(n, m)| {
        prop::collection::vec(prop::collection::vec(0u32..6, m), n).prop_map(|rows| {
            rows.into_iter()
                .map(|mut row| {
                    if row.iter().all(|&x| x == 0) {
                        row[0] = 1;
                    }
                    let s: u32 = row.iter().sum();
                    row.iter().map(|&x| x as f64 / s as f64).collect()
                })
                .collect()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn min_cut_matches_enumeration(inst in instance()) {
        let sol = solve_deterministic(&inst).unwrap();
        let brute = brute_force_deterministic_opt(&inst, EnumerationBudget::default()).unwrap();
        prop_assert_eq!(&sol.cost, &brute.cost);
        prop_assert_eq!(sol.cost, solve_deterministic_unclosed(&inst).unwrap().cost);
    }

    #[test]
    fn lotteries_never_cost_more(inst in instance()) {
        let det = solve_deterministic(&inst).unwrap();
        let rand = solve_randomized(&inst).unwrap();
        prop_assert!(rand.cost <= det.cost);
        if let Some(mech) = &rand.mechanism {
            prop_assert!(is_truthful(mech, &inst).is_truthful());
            prop_assert_eq!(cost_randomized(mech, &inst), rand.cost);
        }
    }

    #[test]
    fn shifting_a_row_shifts_the_optimum(inst in instance(), shift in 0i64..6, who in 0usize..5) {
        let i = who % inst.n();
        let delta = CostValue::from_int(shift);
        let mut rows = inst.costs().rows().to_vec();
        for c in &mut rows[i] {
            if c.is_finite() {
                *c = c.clone() + &delta;
            }
        }
        let shifted = inst.with_costs(AdditiveCostMatrix::new(rows)).unwrap();
        let before = solve_deterministic(&inst).unwrap().cost;
        let after = solve_deterministic(&shifted).unwrap().cost;
        if before.is_finite() {
            prop_assert_eq!(after, before + &delta);
        } else {
            prop_assert!(after.is_infinite());
        }
    }

    #[test]
    fn instance_json_round_trips(inst in instance()) {
        let text = InstanceFile::plain(inst.clone()).to_string_pretty();
        prop_assert_eq!(InstanceFile::parse(&text).unwrap().instance, inst);
    }

    #[test]
    fn rationals_round_trip(a in -10_000i64..10_000, b in 1i64..500) {
        let r = ratio(a, b);
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn lattice_counts_agree(n in 1usize..=5, m in 1usize..=4, pairs in prop::collection::vec((0usize..5, 0usize..5), 0..6)) {
        let pairs: Vec<_> = pairs.into_iter().map(|(a, b)| (a % n, b % n)).collect();
        let skeleton = Skeleton::new(OutcomeSpace::ladder(m), ReportingRelation::reflexive_with(n, pairs));
        let listed = enumerate_truthful_deterministic(&skeleton, EnumerationBudget::default()).unwrap().count();
        prop_assert_eq!(listed as u128, count_truthful_recursive(&skeleton));
    }

    #[test]
    fn interpretation_is_a_chain_with_the_given_marginals(rows in profile()) {
        let m = rows[0].len();
        let chain = interpret_marginals(&MarginalProfile::new(rows.clone()).unwrap());
        prop_assert!(chain.is_chain());
        prop_assert!(chain.len() <= rows.len() * m);
        for (got, want) in chain.marginals(m).iter().flatten().zip(rows.iter().flatten()) {
            prop_assert!((got - want).abs() <= 1e-12);
        }
    }

    #[test]
    fn uncrossing_keeps_marginals_and_never_raises_submodular_cost(
        seed in any::<u64>(),
        points in prop::collection::vec((prop::collection::vec(0usize..3, 3), 1u32..5), 1..6),
    ) {
        let oracle = random_submodular_table(seed, 3, 3, 10).unwrap();
        let total: u32 = points.iter().map(|(_, w)| w).sum();
        let dist = ChainDistribution {
            support: points.into_iter().map(|(p, w)| (p, w as f64 / total as f64)).collect(),
        };
        let out = uncross(&dist).unwrap();
        prop_assert!(out.chain.is_chain());
        for (a, b) in out.chain.marginals(3).iter().flatten().zip(dist.marginals(3).iter().flatten()) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
        prop_assert!(chain_cost(&out.chain, &oracle) <= chain_cost(&dist, &oracle) + 1e-9);
        prop_assert!(out.potentials.windows(2).all(|w| w[1] >= w[0] - 1e-12));
    }
}
