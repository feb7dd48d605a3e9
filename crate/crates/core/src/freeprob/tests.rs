use super::*;
use crate::exact::ratio_to_f64;

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn q(p: u64, d: u64) -> BigRational {
    BigRational::new(BigUint::from(p).into(), BigUint::from(d).into())
}

#[test]
fn catalan_and_moments() {
    assert_eq!(catalan(0), big(1));
    assert_eq!(catalan(3), big(5));
    assert_eq!(catalan(5), big(42));
    assert_eq!(gaussian_moment(4), big(3));
    assert_eq!(semicircle_moment(4), big(2));
    for n in [1, 3, 5, 7] {
        assert_eq!(gaussian_moment(n), big(0));
        assert_eq!(semicircle_moment(n), big(0));
    }
}

#[test]
fn integration_oracle() {
    for m in 0..=6u32 {
        let num = semicircle_moment_numeric(2 * m);
        let want = semicircle_moment(2 * m as u64);
        assert!((num - ratio_to_f64(&BigRational::from_integer(want.into()))).abs() < 1e-8, "m = {m}: {num}");
        assert!(semicircle_moment_numeric(2 * m + 1).abs() < 1e-8);
    }
    assert!((integrate(semicircle_density, -2.0, 2.0, 1e-12) - 1.0).abs() < 1e-6);
    assert!((semicircle_cdf(0.0) - 0.5).abs() < 1e-15);
    assert!((semicircle_cdf(1.0) - integrate(semicircle_density, -2.0, 1.0, 1e-12)).abs() < 1e-6);
}

#[test]
fn partitions() {
    assert_eq!(count_pair_partitions(2).unwrap(), 1);
    assert_eq!(count_noncrossing_pair_partitions(2).unwrap(), 1);
    assert_eq!(count_pair_partitions(6).unwrap(), 15);
    assert_eq!(count_noncrossing_pair_partitions(6).unwrap(), 5);
    assert_eq!(count_pair_partitions(10).unwrap(), 945);
    assert_eq!(count_noncrossing_pair_partitions(10).unwrap(), 42);
    for m in 0..=7u64 {
        assert_eq!(big(count_noncrossing_pair_partitions(2 * m as usize).unwrap()), catalan(m));
        assert_eq!(big(count_pair_partitions(2 * m as usize).unwrap()), double_factorial_odd(m));
    }
    assert!(matches!(count_pair_partitions(16), Err(crate::Error::Resource(_))));
    assert!(count_pair_partitions(3).is_err());
}

#[test]
fn lattice_walks() {
    for d in 1..=3 {
        assert_eq!(zd_walk_return(d, 0).unwrap(), q(1, 1));
        assert_eq!(zd_walk_return(d, 1).unwrap(), q(0, 1));
    }
    assert_eq!(zd_walk_return(1, 2).unwrap(), q(1, 2));
    for t in 1..=10u64 {
        let closed = BigRational::new(binomial(2 * t, t).into(), BigUint::from(4u64).pow(t as u32).into());
        assert_eq!(zd_walk_return(1, 2 * t as usize).unwrap(), closed);
    }
    // Z²: (C(2t, t) / 4^t)²
    for t in 1..=6u64 {
        let one = BigRational::new(binomial(2 * t, t).into(), BigUint::from(4u64).pow(t as u32).into());
        assert_eq!(zd_walk_return(2, 2 * t as usize).unwrap(), &one * &one);
    }
    assert!(zd_walk_return(4, 2).is_err());
    assert!(zd_walk_return(1, 25).is_err());
}

/// Closed walks by explicit enumeration of reduced words.
fn tree_walks_brute(dim: usize, t: usize) -> u128 {
    fn go(word: &mut Vec<(usize, bool)>, dim: usize, left: usize) -> u128 {
        if left == 0 {
            return word.is_empty() as u128;
        }
        if word.len() > left {
            return 0;
        }
        let mut total = 0;
        for g in 0..dim {
            for inv in [false, true] {
                if word.last() == Some(&(g, !inv)) {
                    let top = word.pop().unwrap();
                    total += go(word, dim, left - 1);
                    word.push(top);
                } else {
                    word.push((g, inv));
                    total += go(word, dim, left - 1);
                    word.pop();
                }
            }
        }
        total
    }
    go(&mut Vec::new(), dim, t)
}

#[test]
fn tree_walks() {
    for d in 1..=3 {
        assert_eq!(free_walk_return(d, 0).unwrap(), q(1, 1));
    }
    assert_eq!(free_walk_return(1, 2).unwrap(), q(1, 2));
    assert_eq!(free_walk_return(2, 2).unwrap(), q(1, 4));
    for t in 0..=14 {
        assert_eq!(free_walk_return(1, t).unwrap(), zd_walk_return(1, t).unwrap());
    }
    for d in 1..=3 {
        for t in 0..=8 {
            assert_eq!(free_walk_closed_count(d, t), tree_walks_brute(d, t), "D = {d}, t = {t}");
        }
    }
    // returns to the root split Dyck paths: Σ_j j/(2t−j) C(2t−j, t) d^j (d−1)^(t−j)
    let deg = 4u128;
    for t in 1..=8u64 {
        let mut total = BigUint::zero();
        for j in 1..=t {
            let ballot = binomial(2 * t - j, t) * BigUint::from(j) / BigUint::from(2 * t - j);
            total += ballot * BigUint::from(deg).pow(j as u32) * BigUint::from(deg - 1).pow((t - j) as u32);
        }
        assert_eq!(BigUint::from(free_walk_closed_count(2, 2 * t as usize)), total, "t = {t}");
    }
}

#[test]
fn wigner_normalization() {
    let mean: f64 = (0..200).map(|k| normalized_trace_square(&goe_sample(50, 1, k).unwrap())).sum::<f64>() / 200.0;
    assert!((mean - 1.0).abs() < 0.05);
    let g = gue_sample(20, 2, 0).unwrap();
    assert_eq!(g.adjoint(), g);
    let o = goe_sample(20, 2, 0).unwrap();
    assert_eq!(o.adjoint(), o);
    assert!(goe_sample(1, 0, 0).is_err());
}

#[test]
fn entry_variance_profile() {
    let draws = 10_000;
    for (ens, diag_var, off_var) in [(WignerEnsemble::Goe, 2.0 / 11.0, 1.0 / 11.0), (WignerEnsemble::Gue, 0.1, 0.1)] {
        let (mean, sq) = entry_variances(ens, 10, draws, 3).unwrap();
        for i in 0..10 {
            for j in 0..10 {
                let want = if i == j { diag_var } else { off_var };
                let se = ((sq[i][j] - mean[i][j] * mean[i][j]) / draws as f64).sqrt();
                assert!((mean[i][j] - want).abs() <= 4.0 * se, "{ens:?} ({i},{j})");
            }
        }
    }
}

#[test]
fn wigner_law() {
    let gue = wigner_samples(WignerEnsemble::Gue, 200, 50, 1).unwrap();
    assert!(spectral_ks_to_semicircle(&gue).unwrap() <= 0.05);
    let goe = wigner_samples(WignerEnsemble::Goe, 200, 50, 1).unwrap();
    assert!(spectral_ks_to_semicircle(&goe).unwrap() <= 0.06);
    let signs: Vec<f64> = (0..20).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
    assert!(spectral_ks_to_semicircle(&[CMatrix::diag(&signs)]).unwrap() > 0.2);
    let b = gue_sample(200, 9, 0).unwrap();
    assert!(mixed_moment_abab(&gue[0], &b).abs() < 0.1);
}

#[test]
fn large_spectrum_matches_jacobi() {
    let a = gue_sample(8, 5, 0).unwrap();
    let small = hermitian_eigen(&a).unwrap().values;
    let big = SymmetricEigen::new(to_nalgebra(&a)).eigenvalues;
    let mut big: Vec<f64> = big.iter().copied().collect();
    big.sort_by(f64::total_cmp);
    for (x, y) in small.iter().zip(&big) {
        assert!((x - y).abs() < 1e-10);
    }
}

#[test]
fn fock_identities() {
    assert!((fock_free_moments(1, 2, &parse_pattern("a2").unwrap()).unwrap() - 1.0).abs() < 1e-12);
    assert!(fock_free_moments(2, 4, &parse_pattern("abab").unwrap()).unwrap().abs() < 1e-12);
    assert!((fock_free_moments(2, 4, &parse_pattern("ab²a").unwrap()).unwrap() - 1.0).abs() < 1e-12);
    assert!((fock_free_moments(1, 4, &parse_pattern("a4").unwrap()).unwrap() - 2.0).abs() < 1e-12);
    assert!(matches!(fock_free_moments(2, 3, &[0, 1, 1, 0]), Err(crate::Error::Truncation(_))));
    assert!(fock_free_moments(1, 4, &[0, 1]).is_err());
    assert!(parse_pattern("aB").is_err());
}

#[test]
fn free_clt() {
    let m = free_clt_moments(1, 4, 4).unwrap();
    assert!((m.moments[4] - 2.0).abs() < 1e-12 && m.hankel_psd);
    let m = free_clt_moments(5, 6, 6).unwrap();
    assert!((m.moments[6] - 5.0).abs() < 1e-12);
    for n in 1..=4 {
        let m = free_clt_moments(n, 8, 8).unwrap();
        for (k, v) in m.moments.iter().enumerate() {
            let want = ratio_to_f64(&BigRational::from_integer(semicircle_moment(k as u64).into()));
            assert!((v - want).abs() < 1e-12, "n = {n}, k = {k}");
        }
    }
    assert!(free_clt_moments(2, 6, 5).is_err());
}
