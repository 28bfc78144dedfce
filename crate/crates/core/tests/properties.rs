use fastsort::exact::{solve_bruteforce, solve_dp};
use fastsort::rank::{kendall_tau, majority_tournament, total_kendall_tau, Profile, TieRule};
use fastsort::sorts::{self, partition};
use fastsort::tournament::{gen_transitive, gen_uniform, pair_count};
use fastsort::{
    backward_count, backward_edges, is_locally_minimal, Algorithm, Ordering, PivotRule, Tournament,
};
use proptest::prelude::*;

fn tournament(max_n: usize) -> impl Strategy<Value = Tournament> {
    (1..=max_n, any::<u64>()).prop_map(|(n, seed)| gen_uniform(n, seed).unwrap())
}

fn tournament_and_order(max_n: usize) -> impl Strategy<Value = (Tournament, Ordering)> {
    tournament(max_n).prop_flat_map(|t| {
        let n = t.n();
        (Just(t), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|(t, v)| (t, Ordering::new(v).unwrap()))
    })
}

const PIVOTS: [PivotRule; 2] = [PivotRule::Random, PivotRule::MinImbalance];

proptest! {
    #[test]
    fn cost_bounds_and_reversal((t, o) in tournament_and_order(20)) {
        let m = pair_count(t.n()) as u64;
        let c = backward_count(&t, &o).unwrap();
        prop_assert!(c <= m);
        prop_assert_eq!(c + backward_count(&t, &o.reversed()).unwrap(), m);
        let edges = backward_edges(&t, &o).unwrap();
        prop_assert_eq!(edges.len() as u64, c);
        let pos: Vec<usize> = {
            let mut p = vec![0; t.n()];
            for (i, &v) in o.as_slice().iter().enumerate() { p[v] = i; }
            p
        };
        for (from, to) in edges {
            prop_assert!(t.beats(from, to));
            prop_assert!(pos[from] > pos[to]);
        }
    }

    #[test]
    fn text_roundtrip(t in tournament(30)) {
        prop_assert_eq!(Tournament::parse(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn heuristics_return_permutations_deterministically(t in tournament(40), seed in any::<u64>()) {
        for algo in Algorithm::ALL {
            for pivot in PIVOTS {
                let a = sorts::run(algo, &t, seed, pivot);
                let b = sorts::run(algo, &t, seed, pivot);
                prop_assert_eq!(&a, &b);
                prop_assert!(Ordering::new(a.ordering.as_slice().to_vec()).is_ok());
                prop_assert_eq!(a.ordering.len(), t.n());
                prop_assert_eq!(a.cost, backward_count(&t, &a.ordering).unwrap());
            }
        }
    }

    #[test]
    fn insertion_and_bubble_are_locally_minimal(t in tournament(25), seed in any::<u64>()) {
        let ins = sorts::pseudo_insertion_sort(&t, seed);
        prop_assert!(is_locally_minimal(&t, &ins.ordering).unwrap());
        let bub = sorts::pseudo_bubble_sort(&t, seed);
        prop_assert!(is_locally_minimal(&t, &bub.ordering).unwrap());
        prop_assert!(bub.work <= pair_count(t.n()) as u64);
    }

    #[test]
    fn heuristics_never_beat_the_optimum(t in tournament(9), seed in any::<u64>()) {
        let opt = solve_dp(&t).unwrap();
        prop_assert!(is_locally_minimal(&t, &opt.optimal_ordering).unwrap());
        for algo in Algorithm::ALL {
            for pivot in PIVOTS {
                prop_assert!(sorts::run(algo, &t, seed, pivot).cost >= opt.optimal_cost);
            }
        }
    }

    #[test]
    fn dp_agrees_with_bruteforce(t in tournament(7)) {
        prop_assert_eq!(solve_dp(&t).unwrap(), solve_bruteforce(&t).unwrap());
    }

    #[test]
    fn transitive_is_recovered(n in 1usize..60, seed in any::<u64>()) {
        let t = gen_transitive(n).unwrap();
        for algo in Algorithm::ALL {
            for pivot in PIVOTS {
                let r = sorts::run(algo, &t, seed, pivot);
                prop_assert_eq!(r.cost, 0);
            }
        }
    }

    #[test]
    fn partition_respects_pivot(t in tournament(30), pick in any::<prop::sample::Index>()) {
        let group: Vec<usize> = (0..t.n()).collect();
        let pivot = group[pick.index(group.len())];
        let (before, after) = partition(&t, &group, pivot);
        prop_assert_eq!(before.len() + after.len() + 1, t.n());
        prop_assert!(before.iter().all(|&u| t.beats(u, pivot)));
        prop_assert!(after.iter().all(|&u| t.beats(pivot, u)));
    }

    #[test]
    fn majority_lower_bounds_total_kendall(
        k in 2usize..=7,
        ballots in 0usize..4,
        seed in any::<u64>(),
        order_seed in any::<u64>(),
    ) {
        let count = 2 * ballots + 1;
        let names: Vec<String> = (0..k).map(|c| format!("c{c}")).collect();
        let rows: Vec<Vec<String>> = (0..count)
            .map(|b| {
                let o = sorts::pseudo_insertion_sort(&gen_uniform(k, seed ^ b as u64).unwrap(), seed.wrapping_add(b as u64)).ordering;
                o.as_slice().iter().map(|&v| names[v].clone()).collect()
            })
            .collect();
        let p = Profile::from_names(&rows).unwrap();
        let t = majority_tournament(&p, TieRule::Error).unwrap();
        let o = sorts::pseudo_quick_sort(&gen_uniform(k, order_seed).unwrap(), order_seed, PivotRule::Random).ordering;
        prop_assert!(total_kendall_tau(&p, &o).unwrap() >= backward_count(&t, &o).unwrap());
    }

    #[test]
    fn kendall_is_single_ballot_cost((t, o) in tournament_and_order(9), seed in any::<u64>()) {
        let n = t.n();
        let ballot_order = sorts::pseudo_bubble_sort(&t, seed).ordering;
        let names: Vec<String> = ballot_order.as_slice().iter().map(|v| format!("v{v}")).collect();
        let p = Profile::from_names(&[names]).unwrap();
        let single = majority_tournament(&p, TieRule::Error).unwrap();
        // ids in the profile follow ballot order, so map `o` into that id space
        let mapped: Vec<usize> = o.as_slice().iter().map(|v| p.id(&format!("v{v}")).unwrap()).collect();
        let mapped = Ordering::new(mapped).unwrap();
        prop_assert_eq!(mapped.len(), n);
        prop_assert_eq!(kendall_tau(&mapped, &p.ballots()[0]).unwrap(), backward_count(&single, &mapped).unwrap());
    }
}
