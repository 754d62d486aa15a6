use nilcpa_core::eqn::{
    self, free_two_generator_ratio, grid_residual, has_property_f, pair_residual, ratio_bound, solve_grid, solve_pair,
    PairPolicy, PropertyF,
};
use nilcpa_core::exact::{unit_vector, Rational, Subspace};
use nilcpa_core::freelie::mobius;
use nilcpa_core::liealg::catalog::catalog;
use nilcpa_core::build_free_nilpotent;
use num_traits::Zero;
use proptest::prelude::*;

const TWO_GENERATED: [&str; 10] =
    ["h3", "n3", "n4", "n5", "n6", "n7", "g_6_14", "F_2_3_hall", "F_2_4", "F_2_5"];

fn swap_blocks(s: &[Rational], n: usize) -> Vec<Rational> {
    s[2 * n..].iter().chain(&s[n..2 * n]).chain(&s[..n]).cloned().collect()
}

fn vector(entries: &[i64]) -> Vec<Rational> {
    entries.iter().map(|&x| Rational::from(x)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn swapping_the_pair_swaps_u_and_w(name in prop::sample::select(TWO_GENERATED.to_vec()), seed in 0u64..1000) {
        let t = catalog(name).unwrap().table;
        let n = t.dim();
        let gens = eqn::canonical_generators(&t);
        // perturb the canonical pair by commutator elements and a unimodular change
        let comm: Vec<Vec<Rational>> = t.commutator().basis_vectors().map(<[Rational]>::to_vec).collect();
        let mut x = gens[0].clone();
        let mut y = gens[1].clone();
        for (k, c) in comm.iter().enumerate() {
            let a = Rational::from(((seed >> k) & 3) as i64 - 1);
            for q in 0..n {
                x[q] += &(&a * &c[q]);
                y[q] -= &c[q];
            }
        }
        for q in 0..n {
            let xq = x[q].clone();
            y[q] += &(&Rational::from((seed % 5) as i64) * &xq);
        }
        let forward = solve_pair(&t, &x, &y).unwrap();
        let backward = solve_pair(&t, &y, &x).unwrap();
        let swapped = Subspace::span(3 * n, forward.solution.basis_vectors().map(|s| swap_blocks(s, n))).unwrap();
        prop_assert_eq!(swapped, backward.solution);
        for s in forward.solution.basis_vectors() {
            let (u, v, w) = forward.split(s);
            let (a, b) = pair_residual(&t, &x, &y, &u, &v, &w).unwrap();
            prop_assert!(a.iter().chain(&b).all(Zero::is_zero));
        }
    }

    #[test]
    fn free_two_generator_solution_dimension_is_pair_independent(c in 3usize..=6, seed in 0u64..100) {
        let t = build_free_nilpotent(2, c).unwrap().table;
        let policy = PairPolicy { random_pairs: 3, seed, ..PairPolicy::default() };
        let report = has_property_f(&t, &policy).unwrap();
        prop_assert_eq!(report.verdict, PropertyF::TrueForTestedPairs);
        let dims: Vec<usize> = report.pairs.iter().map(|p| p.solution_dim).collect();
        prop_assert!(dims.windows(2).all(|w| w[0] == w[1]), "{:?}", dims);
    }
}

#[test]
fn property_f_implies_ratio_bound() {
    for name in TWO_GENERATED {
        let t = catalog(name).unwrap().table;
        let bound = ratio_bound(&t).unwrap();
        let report = has_property_f(&t, &PairPolicy::default()).unwrap_or_else(|e| panic!("{name}: {e}"));
        if report.verdict != PropertyF::False {
            assert!(bound.z_ratio >= Rational::new(1, 3), "{name}");
        }
        if let Some(w) = &report.witness {
            let (a, b) = pair_residual(&t, &w.x, &w.y, &w.u, &w.v, &w.w).unwrap();
            assert!(a.iter().chain(&b).all(Zero::is_zero), "{name}");
            let z = t.center();
            let central = [&w.u, &w.v, &w.w].iter().all(|v| z.contains_vector(v).unwrap());
            assert!(!central, "{name}");
        }
    }
}

#[test]
fn expected_property_f_verdicts() {
    let expect = [
        ("h3", true),
        ("F_2_3_hall", true),
        ("n4", false),
        ("n5", false),
        ("n6", false),
        ("g_6_14", false),
    ];
    for (name, holds) in expect {
        let entry = catalog(name).unwrap();
        let policy = PairPolicy {
            transitive: matches!(entry.free_nilpotent, Some((2, _))),
            ..PairPolicy::default()
        };
        let report = has_property_f(&entry.table, &policy).unwrap();
        assert_eq!(report.verdict != PropertyF::False, holds, "{name}");
    }
}

/// Witt numbers by direct Möbius inversion.
fn witt(g: i64, m: i64) -> i64 {
    let mut s = 0;
    for d in 1..=m {
        if m % d == 0 {
            s += mobius(d as u64) * g.pow((m / d) as u32);
        }
    }
    s / m
}

#[test]
fn two_generator_ratio() {
    for n in 3..=10 {
        let top = witt(2, n);
        let total: i64 = (1..=n).map(|m| witt(2, m)).sum();
        let z = free_two_generator_ratio(n as usize);
        assert_eq!(z, Rational::new(top, total), "n={n}");
        assert!(z > Rational::new(1, 3), "n={n}");
        let t = build_free_nilpotent(2, n as usize).unwrap().table;
        assert_eq!(t.invariants().z_ratio, z);
    }
}

#[test]
fn grid_solutions_satisfy_the_equations() {
    for (g, c) in [(3, 2), (3, 3)] {
        let t = build_free_nilpotent(g, c).unwrap().table;
        let gens: Vec<Vec<Rational>> = (0..g).map(|k| unit_vector(t.dim(), k)).collect();
        let system = solve_grid(&t, &gens).unwrap();
        let z = t.center();
        assert!(system.solution.contains(&system.central_assignments(&z)).unwrap());
        for s in system.solution.basis_vectors() {
            for i in 0..g {
                for j in 0..g {
                    for k in 0..g {
                        let r = grid_residual(&t, &system, s, (i, j, k)).unwrap();
                        assert!(r.iter().all(Zero::is_zero));
                    }
                }
            }
        }
        assert!(system.equals_central_assignments(&z), "F({g},{c})");
    }
}

#[test]
fn grid_with_sheared_generators() {
    let t = build_free_nilpotent(3, 3).unwrap().table;
    let n = t.dim();
    let mut gens: Vec<Vec<Rational>> = (0..3).map(|k| unit_vector(n, k)).collect();
    gens[0] = gens[0].iter().zip(&gens[1]).map(|(a, b)| a + b).collect();
    gens[2][5] = Rational::from(2);
    let system = solve_grid(&t, &gens).unwrap();
    assert!(system.equals_central_assignments(&t.center()));
    assert!(solve_grid(&t, &gens[..2]).is_err());
    assert!(solve_grid(&t, &[gens[0].clone(), gens[0].clone(), vector(&[0; 14])]).is_err());
}
