use rayon::prelude::*;
use serde::Serialize;

use super::{bloch_inverse, holevo_chi, Ensemble};
use crate::coding::{binary_entropy, entropy_of};
use crate::error::{ensure, Result};

#[derive(Clone, Debug, Serialize)]
pub struct AccessibleInfo {
    pub value: f64,
    pub direction: [f64; 3],
    pub chi: f64,
    pub evaluations: usize,
}

/// `n` roughly equidistributed unit vectors.
pub fn fibonacci_sphere(n: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - (2 * k + 1) as f64 / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * k as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

fn unit(v: [f64; 3]) -> Option<[f64; 3]> {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    (n > 1e-12).then(|| [v[0] / n, v[1] / n, v[2] / n])
}

fn spherical(v: [f64; 3]) -> (f64, f64) {
    (v[2].clamp(-1.0, 1.0).acos(), v[1].atan2(v[0]))
}

fn from_spherical(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

/// Mutual information of the two-outcome projective measurement along `n`.
fn mutual_information(weights: &[f64], blochs: &[[f64; 3]], n: [f64; 3]) -> f64 {
    let mut plus = 0.0;
    let mut cond = 0.0;
    for (w, r) in weights.iter().zip(blochs) {
        let p = ((1.0 + n[0] * r[0] + n[1] * r[1] + n[2] * r[2]) / 2.0).clamp(0.0, 1.0);
        plus += w * p;
        cond += w * binary_entropy(p);
    }
    (entropy_of(&[plus, 1.0 - plus]) - cond).max(0.0)
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Best rank-one projective qubit measurement over a Fibonacci grid, the ensemble's own axes,
/// and one golden-section pass in each spherical coordinate.
pub fn accessible_information(e: &Ensemble, grid: usize) -> Result<AccessibleInfo> {
    ensure!(e.dim() == 2, Usage, "accessible information search needs a qubit ensemble");
    ensure!(grid >= 16, Usage, "grid resolution {grid} below 16");
    let blochs: Vec<[f64; 3]> = e.states().iter().map(bloch_inverse).collect::<Result<_>>()?;
    let w = e.weights();
    let mut candidates = fibonacci_sphere(grid);
    for (i, a) in blochs.iter().enumerate() {
        candidates.extend(unit(*a));
        for b in &blochs[i + 1..] {
            candidates.extend(unit([a[0] - b[0], a[1] - b[1], a[2] - b[2]]));
        }
    }
    candidates.push([0.0, 0.0, 1.0]);
    let scored: Vec<(f64, [f64; 3])> =
        candidates.par_iter().map(|&n| (mutual_information(w, &blochs, n), n)).collect();
    let mut evaluations = scored.len();
    let mut order: Vec<usize> = (0..scored.len()).collect();
    order.sort_by(|&a, &b| scored[b].0.total_cmp(&scored[a].0).then(a.cmp(&b)));
    let (mut best, mut dir) = scored[order[0]];
    let window = 2.0 * (4.0 * std::f64::consts::PI / grid as f64).sqrt();
    for &k in order.iter().take(3) {
        let (theta0, phi0) = spherical(scored[k].1);
        let (theta, ft) = golden_max(|t| mutual_information(w, &blochs, from_spherical(t, phi0)), theta0 - window, theta0 + window, 40);
        let (phi, fp) = golden_max(|p| mutual_information(w, &blochs, from_spherical(theta, p)), phi0 - window, phi0 + window, 40);
        evaluations += 2 * 42;
        for (v, n) in [(ft, from_spherical(theta, phi0)), (fp, from_spherical(theta, phi))] {
            if v > best {
                best = v;
                dir = n;
            }
        }
    }
    Ok(AccessibleInfo { value: best, direction: dir, chi: holevo_chi(e), evaluations })
}
