use super::*;
use rand::RngCore;
use crate::linalg::{random_density, random_pure_state, random_unitary};
use crate::rng::{stream_rng, Stream};

fn ket0() -> DensityOperator {
    bloch([0.0, 0.0, 1.0]).unwrap()
}

fn ket1() -> DensityOperator {
    bloch([0.0, 0.0, -1.0]).unwrap()
}

fn plus() -> DensityOperator {
    bloch([1.0, 0.0, 0.0]).unwrap()
}

fn random_bloch(rng: &mut impl rand::RngCore) -> [f64; 3] {
    use rand::Rng;
    loop {
        let v = [rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0];
        if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            return v;
        }
    }
}

fn half(a: DensityOperator, b: DensityOperator) -> Ensemble {
    Ensemble::new(vec![0.5, 0.5], vec![a, b]).unwrap()
}

#[test]
fn bloch_examples() {
    assert!(bloch([0.0; 3]).unwrap().matrix().max_abs_diff(&CMatrix::identity(2).scale_re(0.5)) < 1e-15);
    assert!(ket0().matrix().max_abs_diff(&CMatrix::diag(&[1.0, 0.0])) < 1e-15);
    assert!(plus().matrix().max_abs_diff(&CMatrix::from_real(&[&[0.5, 0.5], &[0.5, 0.5]])) < 1e-15);
    assert!(matches!(bloch([1.0, 1.0, 0.0]), Err(crate::Error::Domain(_))));
    let mut rng = stream_rng(1, Stream::Quantum);
    for _ in 0..200 {
        let r = random_bloch(&mut rng);
        let back = bloch_inverse(&bloch(r).unwrap()).unwrap();
        assert!(r.iter().zip(back).all(|(a, b)| (a - b).abs() < 1e-10));
        DensityOperator::new(bloch(r).unwrap().matrix().clone()).unwrap();
    }
}

#[test]
fn distances() {
    assert_eq!(trace_distance(&plus(), &plus()).unwrap(), 0.0);
    assert!((trace_distance(&ket0(), &ket1()).unwrap() - 1.0).abs() < 1e-12);
    let d = trace_distance(&bloch([0.0, 0.0, 0.6]).unwrap(), &bloch([0.0, 0.0, -0.2]).unwrap()).unwrap();
    assert!((d - 0.4).abs() < 1e-12);
    assert!((fidelity(&plus(), &plus()).unwrap() - 1.0).abs() < 1e-9);
    assert!(angle_distance(&ket0(), &ket0()).unwrap() < 1e-4);
    assert!(fidelity(&ket0(), &ket1()).unwrap() < 1e-9);
    assert!((angle_distance(&ket0(), &ket1()).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
    assert!(trace_distance(&ket0(), &DensityOperator::maximally_mixed(3)).is_err());
}

#[test]
fn bloch_law_and_fidelity_bounds() {
    let mut rng = stream_rng(2, Stream::Quantum);
    for _ in 0..2000 {
        let (r1, r2) = (random_bloch(&mut rng), random_bloch(&mut rng));
        let (a, b) = (bloch(r1).unwrap(), bloch(r2).unwrap());
        let law = ((r1[0] - r2[0]).powi(2) + (r1[1] - r2[1]).powi(2) + (r1[2] - r2[2]).powi(2)).sqrt() / 2.0;
        let d = trace_distance(&a, &b).unwrap();
        assert!((d - law).abs() < 1e-9);
        // qubit closed form: F² = Tr ρσ + 2 sqrt(det ρ det σ)
        let det = |r: [f64; 3]| (1.0 - r.iter().map(|x| x * x).sum::<f64>()) / 4.0;
        let tr = (1.0 + r1.iter().zip(&r2).map(|(x, y)| x * y).sum::<f64>()) / 2.0;
        let f_oracle = (tr + 2.0 * (det(r1) * det(r2)).max(0.0).sqrt()).sqrt();
        let f = fidelity(&a, &b).unwrap();
        assert!((f - f_oracle).abs() < 1e-7, "{f} vs {f_oracle}");
        assert!(1.0 - f <= d + 1e-9);
        assert!(d <= (1.0 - f * f).max(0.0).sqrt() + 1e-9);
    }
}

#[test]
fn entropies() {
    assert!((von_neumann_entropy(&DensityOperator::maximally_mixed(2)) - 1.0).abs() < 1e-12);
    assert!(von_neumann_entropy(&plus()) < 1e-12);
    let r = DensityOperator::new(CMatrix::diag(&[0.25, 0.75])).unwrap();
    assert!((von_neumann_entropy(&r) - 0.811278).abs() < 1e-6);
    assert_eq!(umegaki_relative_entropy(&r, &r).unwrap(), 0.0);
    assert_eq!(umegaki_relative_entropy(&ket0(), &ket1()).unwrap(), f64::INFINITY);
    // KL((1/2,1/2) || (1/4,3/4))
    let kl = 0.5 * (0.5f64 / 0.25).log2() + 0.5 * (0.5f64 / 0.75).log2();
    let u = umegaki_relative_entropy(&DensityOperator::maximally_mixed(2), &r).unwrap();
    assert!((u - kl).abs() < 1e-12 && (u - 0.207519).abs() < 1e-6);
}

#[test]
fn entropy_properties() {
    let mut rng = stream_rng(3, Stream::Quantum);
    for _ in 0..100 {
        let d = 2 + (rng.next_u32() % 3) as usize;
        let rho = DensityOperator::new(random_density(&mut rng, d, d)).unwrap();
        let s = von_neumann_entropy(&rho);
        assert!(s >= 0.0 && s <= (d as f64).log2() + 1e-12);
        let u = random_unitary(&mut rng, d);
        let rot = DensityOperator::new(&(&u * rho.matrix()) * &u.adjoint()).unwrap();
        assert!((von_neumann_entropy(&rot) - s).abs() < 1e-9);
        let sigma = DensityOperator::new(random_density(&mut rng, d, d)).unwrap();
        assert!(umegaki_relative_entropy(&rho, &sigma).unwrap() >= 0.0);
        let e = Ensemble::new(vec![0.3, 0.7], vec![rho.clone(), sigma]).unwrap();
        assert!(holevo_chi(&e) >= 0.0);
        let pure = DensityOperator::pure(&random_pure_state(&mut rng, d)).unwrap();
        assert!(von_neumann_entropy(&pure) < 1e-9);
    }
}

#[test]
fn subadditivity() {
    let mut rng = stream_rng(4, Stream::Quantum);
    for _ in 0..100 {
        let rank = 1 + (rng.next_u32() % 4) as usize;
        let rho = DensityOperator::new(random_density(&mut rng, 4, rank)).unwrap();
        let m = rho.matrix();
        let mut a = CMatrix::zeros(2);
        let mut b = CMatrix::zeros(2);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    a[(i, j)] += m[(2 * i + k, 2 * j + k)];
                    b[(i, j)] += m[(2 * k + i, 2 * k + j)];
                }
            }
        }
        let (sa, sb) = (von_neumann_entropy(&DensityOperator::new(a).unwrap()), von_neumann_entropy(&DensityOperator::new(b).unwrap()));
        assert!(von_neumann_entropy(&rho) <= sa + sb + 1e-9);
    }
}

#[test]
fn holevo_examples() {
    assert!((holevo_chi(&half(ket0(), ket1())) - 1.0).abs() < 1e-12);
    assert!(holevo_chi(&half(plus(), plus())) < 1e-12);
    let lp = (1.0 + std::f64::consts::FRAC_1_SQRT_2) / 2.0;
    let oracle = crate::coding::binary_entropy(lp);
    let chi = holevo_chi(&half(ket0(), plus()));
    assert!((chi - oracle).abs() < 1e-10 && (chi - 0.600876).abs() < 1e-4);
}

#[test]
fn accessible_examples() {
    let a = accessible_information(&half(ket0(), ket1()), 64).unwrap();
    assert!((a.value - 1.0).abs() < 1e-3);
    assert!(accessible_information(&half(plus(), plus()), 64).unwrap().value < 1e-12);
    let g = accessible_information(&half(ket0(), plus()), 256).unwrap();
    assert!(g.value <= g.chi + 1e-9 && g.chi - g.value >= 0.1);
    // optimum for two equiprobable pure states: 1 - h((1 + sin θ)/2), θ the Bloch angle
    let oracle = 1.0 - crate::coding::binary_entropy((1.0 + std::f64::consts::FRAC_PI_2.sin() * std::f64::consts::FRAC_1_SQRT_2) / 2.0);
    assert!((g.value - oracle).abs() < 1e-6, "{} vs {oracle}", g.value);
    assert!(accessible_information(&half(ket0(), plus()), 8).is_err());
}

#[test]
fn holevo_monotone_under_channels() {
    let mut rng = stream_rng(5, Stream::Quantum);
    for _ in 0..100 {
        let states: Vec<DensityOperator> = (0..3).map(|_| DensityOperator::new(random_density(&mut rng, 2, 2)).unwrap()).collect();
        let e = Ensemble::new(vec![0.2, 0.3, 0.5], states).unwrap();
        let cols = crate::linalg::random_isometry_columns(&mut rng, 4, 2);
        let ops: Vec<CMatrix> = (0..2)
            .map(|blk| {
                let mut v = CMatrix::zeros(2);
                for i in 0..2 {
                    for j in 0..2 {
                        v[(i, j)] = cols[j][2 * blk + i];
                    }
                }
                v
            })
            .collect();
        let ch = KrausChannel::new(ops).unwrap();
        assert!(holevo_chi(&ch.apply_ensemble(&e).unwrap()) <= holevo_chi(&e) + 1e-9);
    }
}

#[test]
fn channels_and_measurements() {
    let mut rng = stream_rng(6, Stream::Quantum);
    let rho = DensityOperator::new(random_density(&mut rng, 2, 2)).unwrap();
    assert!(apply_channel(&KrausChannel::identity(2), &rho).unwrap().matrix().max_abs_diff(rho.matrix()) < 1e-15);
    let dep = apply_channel(&KrausChannel::depolarizing_qubit(), &rho).unwrap();
    assert!(dep.matrix().max_abs_diff(&CMatrix::identity(2).scale_re(0.5)) < 1e-12);
    let p = opu_probabilities(&Opu::computational(2), &bloch([0.0, 0.0, 0.3]).unwrap()).unwrap();
    assert!((p.weights()[0] - 0.65).abs() < 1e-12 && (p.weights()[1] - 0.35).abs() < 1e-12);
    assert!(matches!(KrausChannel::new(vec![CMatrix::pauli_x().scale_re(0.5)]), Err(crate::Error::Validation(_))));
    assert!(Opu::new(vec![CMatrix::identity(2), CMatrix::pauli_z()]).is_err());
}

#[test]
fn schatten() {
    let r = DensityOperator::new(CMatrix::diag(&[0.75, 0.25])).unwrap();
    let e = schatten_decomposition(&r).unwrap();
    assert!((e.weights()[0] - 0.75).abs() < 1e-12);
    assert!(e.states()[0].matrix().max_abs_diff(&CMatrix::diag(&[1.0, 0.0])) < 1e-12);
    let x = schatten_decomposition(&bloch([0.6, 0.0, 0.0]).unwrap()).unwrap();
    assert!((x.weights()[0] - 0.8).abs() < 1e-12 && (x.weights()[1] - 0.2).abs() < 1e-12);
    assert!(x.states()[0].matrix().max_abs_diff(plus().matrix()) < 1e-10);
    let mut rng = stream_rng(7, Stream::Quantum);
    for d in 2..=5 {
        let rho = DensityOperator::new(random_density(&mut rng, d, d)).unwrap();
        let e = schatten_decomposition(&rho).unwrap();
        assert!(e.mean().matrix().max_abs_diff(rho.matrix()) < 1e-8);
        assert!(e.weights().windows(2).all(|w| w[0] >= w[1]));
        for i in 0..d {
            for j in i + 1..d {
                assert!((e.states()[i].matrix() * e.states()[j].matrix()).frobenius() < 1e-9);
            }
        }
    }
}

#[test]
fn conditional_expectation() {
    let basis = two_qubit_basis();
    let alice = alice_algebra();
    let mut rng = stream_rng(8, Stream::Quantum);
    for _ in 0..100 {
        let coeffs: Vec<Vec<C64>> = (0..4).map(|_| (0..4).map(|_| c(crate::rng::gaussian(&mut rng), crate::rng::gaussian(&mut rng))).collect()).collect();
        let mut a = CMatrix::zeros(4);
        let mut expected = CMatrix::zeros(4);
        for i in 0..4 {
            for j in 0..4 {
                a = &a + &basis[i][j].scale(coeffs[i][j]);
            }
            expected = &expected + &basis[i][3].scale(coeffs[i][3]);
        }
        let ce = ConditionalExpectation::new(&alice).unwrap();
        let ea = ce.apply(&a);
        assert!(ea.max_abs_diff(&expected) < 1e-12);
        assert!(ce.apply(&ea).max_abs_diff(&ea) < 1e-12);
        let arr: [[C64; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| coeffs[i][j]));
        assert!((epr_posterior(&arr).unwrap() - coeffs[3][3]).norm() < 1e-12);
    }
    let id = CMatrix::identity(4);
    assert!(conditional_expectation_hs(&alice, &id).unwrap().max_abs_diff(&id) < 1e-12);
    let dup = vec![CMatrix::pauli_x(), CMatrix::pauli_x().scale_re(2.0)];
    assert!(matches!(ConditionalExpectation::new(&dup), Err(crate::Error::Validation(_))));
}

#[test]
fn singlet_moments() {
    let t = bell_moment_table();
    for i in 0..6 {
        assert!(t.first[i].unwrap().abs() < 1e-12);
        for j in 0..6 {
            let want = match (i < 3, j < 3) {
                (true, true) | (false, false) => (i == j) as i32 as f64,
                _ => -((i % 3 == j % 3) as i32 as f64),
            };
            assert!((t.second(i, j).unwrap() - want).abs() < 1e-10, "({i},{j})");
        }
    }
}

#[test]
fn singlet_axis_table_has_classical_witness() {
    // a uniform on {±1}³, b = −a
    let law: Vec<(Vec<i8>, f64)> = (0..8)
        .map(|k| {
            let a: Vec<i8> = (0..3).map(|i| if k >> i & 1 == 1 { -1 } else { 1 }).collect();
            let mut x = a.clone();
            x.extend(a.iter().map(|v| -v));
            (x, 0.125)
        })
        .collect();
    let oracle = MomentTable::of_law(&BELL_LABELS, &law);
    let t = bell_moment_table();
    for i in 0..6 {
        for j in 0..6 {
            assert!((oracle.second(i, j).unwrap() - t.second(i, j).unwrap()).abs() < 1e-12);
        }
    }
    let f = classical_model_infeasibility(&t).unwrap();
    assert!(f.verified);
    assert!(f.feasible);
}

#[test]
fn infeasible_tables_carry_certificates() {
    for t in [chsh_moment_table(), frustrated_moment_table()] {
        let f = classical_model_infeasibility(&t).unwrap();
        assert!(!f.feasible && f.verified, "{:?}", t.labels);
    }
    let chsh = chsh_moment_table();
    let s = chsh.second(0, 2).unwrap() - chsh.second(0, 3).unwrap() + chsh.second(1, 2).unwrap() + chsh.second(1, 3).unwrap();
    assert!((s.abs() - 2.0 * 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn feasible_controls() {
    let zero = MomentTable {
        labels: BELL_LABELS.iter().map(|s| s.to_string()).collect(),
        first: vec![Some(0.0); 6],
        second: (0..6).map(|i| (0..6).map(|j| Some((i == j) as i32 as f64)).collect()).collect(),
    };
    for t in [zero, perfectly_correlated_table()] {
        let f = classical_model_infeasibility(&t).unwrap();
        assert!(f.feasible && f.verified);
    }
}

#[test]
fn json_inputs() {
    let e = Ensemble::parse_json(
        r#"{"weights":[0.5,0.5],"states":[{"dim":2,"entries":[[[1,0],[0,0]],[[0,0],[0,0]]]},{"dim":2,"entries":[[[0,0],[0,0]],[[0,0],[1,0]]]}]}"#,
    )
    .unwrap();
    assert!((holevo_chi(&e) - 1.0).abs() < 1e-12);
    assert!(Ensemble::parse_json(r#"{"weights":[1.0],"states":[{"dim":2,"entries":[[[2,0],[0,0]],[[0,0],[0,0]]]}]}"#).is_err());
    assert!(Ensemble::parse_json("{not json").is_err());
}
