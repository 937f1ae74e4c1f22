//! Small numeric helpers shared by the float paths.

use num_complex::Complex64;
use num_traits::Zero;

/// All complex roots of `sum coeffs[k] z^k` (Aberth iteration followed by
/// Newton polishing), sorted by real part and then by imaginary part.
pub fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let c: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    if n == 1 {
        return vec![-c[0]];
    }
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::zero();
        let mut dp = Complex64::zero();
        for a in c.iter().rev() {
            dp = dp * z + p;
            p = p * z + a;
        }
        (p, dp)
    };
    // Cauchy bound for the initial circle
    let radius = 1.0 + c[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(radius * 0.5, th)
        })
        .collect();
    for _ in 0..500 {
        let mut delta_max: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.is_zero() {
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * sum);
            z[i] -= w;
            delta_max = delta_max.max(w.norm() / (1.0 + z[i].norm()));
        }
        if delta_max < 1e-15 {
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 3..6 {
            let (p, dp) = eval(*r);
            if dp.is_zero() {
                break;
            }
            *r -= p / dp;
        }
    }
    sort_complex(&mut z);
    z
}

/// Deterministic order: real part, then imaginary part (ties within 1e-9).
pub fn sort_complex(v: &mut [Complex64]) {
    v.sort_by(|a, b| {
        if (a.re - b.re).abs() > 1e-9 {
            a.re.total_cmp(&b.re)
        } else {
            a.im.total_cmp(&b.im)
        }
    });
}
