mod common;

use common::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use sparsol::bounds::*;
use sparsol::linalg::*;
use sparsol::period::*;
use sparsol::solver::*;
use sparsol::sparsify::*;
use sparsol::{Exec, Instance, Solution};

fn rows(t: std::ops::RangeInclusive<usize>, d: usize, lo: i64, hi: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(lo..=hi, d), t)
        .prop_filter("nonzero generators", |r| r.iter().all(|g| g.iter().any(|&v| v != 0)))
}

fn knapsack(t: std::ops::RangeInclusive<usize>, max: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(1..=max, t)
}

fn subset_mask(t: usize, mask: u32) -> Vec<usize> {
    (0..t).filter(|i| mask >> i & 1 == 1).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn gram_determinant_is_sum_of_squared_minors(r in rows(1..=5, 2, -6, 6)) {
        let w = IntMatrix::from_rows(&r);
        let cols = independent_columns(&w);
        prop_assert_eq!(cols.len(), brute_rank(&r));
        if !cols.is_empty() {
            let v = w.select_columns(&cols);
            let sub: Vec<Vec<i64>> = r.iter().map(|row| cols.iter().map(|&c| row[c]).collect()).collect();
            let sum: i128 = subsets_of_size(r.len(), cols.len())
                .iter()
                .map(|s| {
                    let m: Vec<Vec<i128>> = s.iter().map(|&i| sub[i].iter().map(|&v| i128::from(v)).collect()).collect();
                    leibniz(&m).pow(2)
                })
                .sum();
            prop_assert_eq!(gram_determinant(&v).unwrap(), BigInt::from(sum));
        }
        let x = Instance::new(2, r.clone()).unwrap();
        prop_assert_eq!(height(&x).unwrap().h_squared, cauchy_binet_height_squared(&r));
    }

    #[test]
    fn height_ignores_the_choice_of_spanning_columns(r in rows(2..=5, 2, -5, 5), a in -3i64..=3, b in -3i64..=3) {
        let base = lattice_height(&IntMatrix::from_rows(&r)).unwrap();
        // swap columns and append an integer combination of them
        let extended: Vec<Vec<i64>> = r.iter().map(|g| vec![g[1], g[0], a * g[0] + b * g[1]]).collect();
        let other = lattice_height(&IntMatrix::from_rows(&extended)).unwrap();
        prop_assert_eq!(base, other);
    }

    #[test]
    fn height_is_monotone_under_subsets(r in rows(1..=6, 2, -6, 6), mask in 1u32..64) {
        let x = Instance::new(2, r.clone()).unwrap();
        let idx = subset_mask(r.len(), mask);
        prop_assume!(!idx.is_empty());
        let y = x.subset(&idx).unwrap();
        prop_assert!(height(&y).unwrap().h_squared <= height(&x).unwrap().h_squared);
    }

    #[test]
    fn floor_log2_sqrt_shifts_by_one_under_four(p in 1i64..1_000_000, q in 1i64..1000) {
        let v = BigRational::new(p.into(), q.into());
        let f = floor_log2_sqrt(&v).unwrap();
        prop_assert_eq!(floor_log2_sqrt(&(&v * BigRational::from_integer(4.into()))).unwrap(), f + 1);
        // away from exact powers of four the float oracle is reliable
        let x = p as f64 / q as f64;
        let e = 0.5 * x.log2();
        if (e - e.round()).abs() > 1e-9 {
            prop_assert_eq!(float_floor_log2_sqrt(&v), f);
        }
    }

    #[test]
    fn ternary_kernel_is_canonical(r in rows(1..=6, 2, -4, 4)) {
        let x = Instance::new(2, r.clone()).unwrap();
        let canonical = all_ternary_relations(&r)
            .into_iter()
            .filter(|y| y.iter().find(|&&v| v != 0) == Some(&1))
            .min();
        prop_assert_eq!(ternary_kernel(&x, None).map(|y| y.0), canonical);
    }

    #[test]
    fn siegel_condition_guarantees_a_kernel(r in rows(1..=6, 2, -5, 5), mask in 1u32..64) {
        let x = Instance::new(2, r.clone()).unwrap();
        let coeffs: Vec<u64> = (0..r.len()).map(|i| u64::from(mask >> i & 1)).collect();
        let sol = Solution::new(coeffs);
        if siegel_condition(&x, &sol).unwrap() {
            prop_assert!(ternary_kernel(&x, Some(&sol.support())).is_some());
        }
    }

    #[test]
    fn sparsify_keeps_the_solution_and_meets_the_bound(r in rows(1..=6, 2, 0, 5), c in prop::collection::vec(0u64..4, 6)) {
        let x = Instance::new(2, r.clone()).unwrap();
        let sol = Solution::new(c[..r.len()].to_vec());
        let rhs: Vec<i64> = x.combine(&sol.coeffs).unwrap().iter().map(|&v| v as i64).collect();
        let (fin, trace) = sparsify(&x, &rhs, &sol).unwrap();
        fin.verify(&x, &rhs).unwrap();
        let mut size = sol.support_size();
        for step in &trace.steps {
            let after = Solution::new(step.coeffs_after.clone());
            prop_assert!(after.support_size() < size);
            after.verify(&x, &rhs).unwrap();
            size = after.support_size();
        }
        if sol.support_size() > 0 {
            prop_assert!(fin.support_size() as i64 <= bound_rank_height(&x).unwrap());
        }
    }

    #[test]
    fn knapsack_sparsify_meets_the_bound(v in knapsack(1..=7, 40), c in prop::collection::vec(0u64..4, 7)) {
        let x = Instance::knapsack(&v).unwrap();
        let sol = Solution::new(c[..v.len()].to_vec());
        let rhs = [x.combine(&sol.coeffs).unwrap()[0] as i64];
        let values = x.positive_knapsack().unwrap();
        if knapsack_condition(&values, &sol) {
            prop_assert!(knapsack_reduce_once(&x, &rhs, &sol).unwrap().is_some());
        }
        let (fin, _) = knapsack_sparsify(&x, &rhs, &sol).unwrap();
        fin.verify(&x, &rhs).unwrap();
        prop_assert!(fin.support_size() as u64 <= bound_knapsack_positive(&x).unwrap());
        prop_assert!(!knapsack_condition(&values, &fin));
    }

    #[test]
    fn sweep_agrees_with_pointwise_and_brute_m0(v in knapsack(1..=4, 12), hi in 0i64..40) {
        let x = Instance::knapsack(&v).unwrap();
        let s = m0_sweep_with(&x, hi, Exec::Sequential).unwrap();
        for p in &s.points {
            let b = [p.at as i64];
            prop_assert_eq!(p.m0, m0(&x, &b).unwrap());
            prop_assert_eq!(p.m0, brute_m0(x.generators(), &b));
        }
    }

    #[test]
    fn two_dimensional_m0_matches_enumeration(r in rows(1..=4, 2, 0, 3), b0 in 0i64..6, b1 in 0i64..6) {
        let x = Instance::new(2, r).unwrap();
        let table = m0_table(&x, &[5, 5], Exec::Sequential).unwrap();
        prop_assert_eq!(table.get(&[b0 as u64, b1 as u64]), brute_m0(x.generators(), &[b0, b1]));
        prop_assert_eq!(m0(&x, &[b0, b1]).unwrap(), brute_m0(x.generators(), &[b0, b1]));
        if let Some(w) = min_support_solution(&x, &[b0, b1]).unwrap() {
            w.verify(&x, &[b0, b1]).unwrap();
            prop_assert_eq!(Some(w.support_size()), table.get(&[b0 as u64, b1 as u64]));
        }
    }

    #[test]
    fn m0_respects_every_bound(r in rows(1..=5, 2, 0, 6)) {
        let x = Instance::new(2, r).unwrap();
        let worst = M0_box_with(&x, &[14, 14], Exec::Sequential).unwrap() as i64;
        prop_assert!(worst <= bound_rank_height(&x).unwrap());
        prop_assert!(worst as u64 <= bound_norm(&x));
    }

    #[test]
    fn frobenius_matches_naive_gaps(v in prop::collection::vec(1u64..=20, 1..=4)) {
        prop_assert_eq!(frobenius(&v).unwrap().frobenius, naive_frobenius(&v));
        let f = frobenius(&v).unwrap();
        if let Some(n) = f.frobenius {
            prop_assert_eq!(n % f.g, 0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn m0_is_l_periodic_beyond_the_threshold(v in knapsack(1..=4, 30)) {
        let x = Instance::knapsack(&v).unwrap();
        let l = lcm_period(&x).unwrap();
        let check = verify_period_with(&x, 2 * l, Exec::Sequential).unwrap();
        prop_assert!(check.holds, "first counterexample {:?}", check.first_counterexample);
    }

    #[test]
    fn residue_classes_are_non_increasing(v in knapsack(1..=4, 30)) {
        let x = Instance::knapsack(&v).unwrap();
        let l = lcm_period(&x).unwrap() as i64;
        let n0 = n0_threshold(&x).unwrap();
        let k0 = (n0 - l).div_euclid(l).max(0);
        let hi = ((k0 + 4) * l) as u64;
        let table = m0_table(&x, &[hi], Exec::Sequential).unwrap();
        for j in 0..l {
            let seq: Vec<usize> = (k0..k0 + 4)
                .map(|k| k * l + j)
                .filter(|&b| b > n0 - l && b > 0)
                .filter_map(|b| table.at(b as usize))
                .collect();
            prop_assert!(seq.windows(2).all(|w| w[1] <= w[0]), "residue {} gives {:?}", j, seq);
        }
    }

    #[test]
    fn minimal_period_versus_lcm(v in knapsack(1..=4, 30)) {
        let x = Instance::knapsack(&v).unwrap();
        let l = lcm_period(&x).unwrap();
        let p = minimal_eventual_period_with(&x, Exec::Sequential).unwrap();
        prop_assert_eq!(l % p, 0);
        prop_assert_eq!(p, unit_locus_period_with(&x, Exec::Sequential).unwrap());
        let mut distinct: Vec<u64> = v.iter().map(|&a| a as u64).collect();
        distinct.sort_unstable();
        distinct.dedup();
        if divisibility_free(&distinct) {
            prop_assert_eq!(p, l);
        }
    }

    #[test]
    fn eventual_bound_holds_and_is_sharp(v in knapsack(1..=4, 30)) {
        let x = Instance::knapsack(&v).unwrap();
        match eventual_bound_with(&x, Exec::Sequential) {
            Ok(e) => prop_assert!(e.holds && e.sharp),
            Err(sparsol::Error::NotCoprime(g)) => prop_assert!(g > 1),
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn exact_knapsack_maximum_respects_the_log_bound(v in knapsack(1..=4, 30)) {
        let x = Instance::knapsack(&v).unwrap();
        let m = M0_knapsack_exact_with(&x, Exec::Sequential).unwrap();
        prop_assert!(m.value as u64 <= bound_knapsack_positive(&x).unwrap());
        prop_assert!(m.value as i64 <= bound_rank_height(&x).unwrap());
        prop_assert!(m.value as u64 <= bound_norm(&x));
    }
}

#[cfg(feature = "parallel")]
proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn strategies_give_identical_results(v in knapsack(1..=5, 25), r in rows(1..=5, 2, 0, 4)) {
        let x = Instance::knapsack(&v).unwrap();
        prop_assert_eq!(
            period_report_with(&x, 60, Exec::Sequential).unwrap(),
            period_report_with(&x, 60, Exec::Parallel).unwrap()
        );
        let y = Instance::new(2, r).unwrap();
        prop_assert_eq!(
            m0_table(&y, &[9, 9], Exec::Sequential).unwrap(),
            m0_table(&y, &[9, 9], Exec::Parallel).unwrap()
        );
        let b = y.generator(0).to_vec();
        prop_assert_eq!(
            dilation_sequence_with(&y, &b, 5, Exec::Sequential).unwrap(),
            dilation_sequence_with(&y, &b, 5, Exec::Parallel).unwrap()
        );
    }
}
