use std::collections::BTreeMap;

use nilcpa_core::exact::{unit_vector, Rational};
use nilcpa_core::freelie::{build_free_nilpotent, is_lyndon, lyndon_words, witt_dimension, Bracketing};
use num_bigint::BigUint;
use num_traits::Zero;
use proptest::prelude::*;

/// Counts primitive necklaces by rotating every word.
fn brute_force_lyndon_count(g: usize, m: usize) -> usize {
    let mut count = 0;
    let mut word = vec![1usize; m];
    loop {
        let smaller_than_rotations = (1..m).all(|r| {
            let rotated: Vec<usize> = word[r..].iter().chain(&word[..r]).copied().collect();
            word < rotated
        });
        if smaller_than_rotations {
            count += 1;
        }
        let mut pos = m;
        loop {
            if pos == 0 {
                return count;
            }
            pos -= 1;
            if word[pos] < g {
                word[pos] += 1;
                word[pos + 1..].iter_mut().for_each(|x| *x = 1);
                break;
            }
        }
    }
}

#[test]
fn witt_dimensions_match_brute_force_counts() {
    for g in 1..=3usize {
        for m in 1..=7usize {
            let expected = brute_force_lyndon_count(g, m);
            let w = witt_dimension(g as u64, m as u64);
            assert_eq!(w.per_degree[m - 1], BigUint::from(expected), "g={g} m={m}");
            let words = lyndon_words(g, m).into_iter().filter(|w| w.len() == m).count();
            assert_eq!(words, expected, "g={g} m={m}");
        }
    }
}

#[test]
fn known_cumulative_dimensions() {
    let two: Vec<u64> = witt_dimension(2, 10)
        .cumulative()
        .iter()
        .map(|x| x.to_string().parse().unwrap())
        .collect();
    assert_eq!(two, vec![2, 3, 5, 8, 14, 23, 41, 71, 127, 226]);
    let three = witt_dimension(3, 4);
    assert_eq!(three.per_degree, [3u32, 3, 8, 18].map(BigUint::from).to_vec());
}

type NcPoly = BTreeMap<Vec<usize>, Rational>;

fn expand(b: &Bracketing, cap: usize) -> NcPoly {
    match b {
        Bracketing::Letter(a) => BTreeMap::from([(vec![*a], Rational::from(1))]),
        Bracketing::Bracket(l, r) => commutator(&expand(l, cap), &expand(r, cap), cap),
    }
}

fn commutator(a: &NcPoly, b: &NcPoly, cap: usize) -> NcPoly {
    let mut out = NcPoly::new();
    for (u, x) in a {
        for (v, y) in b {
            if u.len() + v.len() > cap {
                continue;
            }
            let uv: Vec<usize> = u.iter().chain(v).copied().collect();
            let vu: Vec<usize> = v.iter().chain(u).copied().collect();
            *out.entry(uv).or_insert_with(Rational::zero) += x * y;
            *out.entry(vu).or_insert_with(Rational::zero) -= x * y;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Compares every structure constant with the commutator of the
/// corresponding Lie polynomials in the free associative algebra.
fn check_against_tensor_algebra(g: usize, c: usize) {
    let p = build_free_nilpotent(g, c).unwrap();
    let images: Vec<NcPoly> = p.basis.iter().map(|e| expand(&e.bracketing, c)).collect();
    for i in 0..p.dim() {
        assert!(is_lyndon(&p.basis[i].word));
        for j in 0..p.dim() {
            let lhs = commutator(&images[i], &images[j], c);
            let mut rhs = NcPoly::new();
            for (k, x) in p.table.bracket_basis(i, j) {
                for (w, y) in &images[*k] {
                    *rhs.entry(w.clone()).or_insert_with(Rational::zero) += x * y;
                }
            }
            rhs.retain(|_, c| !c.is_zero());
            assert_eq!(lhs, rhs, "F({g},{c}) [{}, {}]", p.basis[i].label(), p.basis[j].label());
        }
    }
}

#[test]
fn structure_constants_agree_with_tensor_algebra() {
    for c in 1..=6 {
        check_against_tensor_algebra(2, c);
    }
    for c in 1..=3 {
        check_against_tensor_algebra(3, c);
    }
}

#[test]
fn jacobi_and_grading_on_generated_algebras() {
    let cases: Vec<(usize, usize)> = (1..=10).map(|c| (2, c)).chain((1..=4).map(|c| (3, c))).collect();
    for (g, c) in cases {
        let p = build_free_nilpotent(g, c).unwrap();
        let expected: u64 = witt_dimension(g as u64, c as u64).total().to_string().parse().unwrap();
        assert_eq!(p.dim() as u64, expected);
        p.table.validate().unwrap_or_else(|e| panic!("F({g},{c}): {e}"));
        for i in 0..p.dim() {
            for j in 0..p.dim() {
                let v = p.table.bracket_basis(i, j);
                assert_eq!(p.table.bracket_basis(j, i), &v.iter().map(|(k, x)| (*k, -x)).collect::<Vec<_>>());
                let d = p.degree(i) + p.degree(j);
                if d > c {
                    assert!(v.is_empty());
                }
                for (k, _) in v {
                    assert_eq!(p.degree(*k), d, "F({g},{c}) grading");
                }
            }
        }
        let series = p.table.series();
        assert_eq!(series.nilpotency_class, Some(c));
        assert_eq!(series.center.dim(), p.center_indices().len(), "F({g},{c}) center");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_elements_satisfy_jacobi(
        coeffs in prop::collection::vec(-3i64..=3, 3 * 14),
    ) {
        let p = build_free_nilpotent(3, 3).unwrap();
        let t = &p.table;
        let n = t.dim();
        let v = |k: usize| -> Vec<Rational> { coeffs[k * n..(k + 1) * n].iter().map(|&x| Rational::from(x)).collect() };
        let (x, y, z) = (v(0), v(1), v(2));
        let a = t.bracket(&x, &t.bracket(&y, &z).unwrap()).unwrap();
        let b = t.bracket(&y, &t.bracket(&z, &x).unwrap()).unwrap();
        let c = t.bracket(&z, &t.bracket(&x, &y).unwrap()).unwrap();
        for k in 0..n {
            prop_assert!((&(&a[k] + &b[k]) + &c[k]).is_zero());
        }
    }

    #[test]
    fn brackets_of_generators_span_the_next_degree(c in 2usize..=5) {
        let p = build_free_nilpotent(2, c).unwrap();
        let n = p.dim();
        let gens: Vec<Vec<Rational>> = p.generator_indices().map(|i| unit_vector(n, i)).collect();
        let commutator = p.table.commutator();
        prop_assert_eq!(commutator.dim(), n - gens.len());
    }
}
