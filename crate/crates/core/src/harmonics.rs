//! Evaluation of `Re Σ_{k=1..K} c_k e^{i k θ}` by phasor rotation.

use std::f64::consts::TAU;

use num_complex::Complex64;

/// The rotating phasor is re-seeded from the exact angle this often to bound
/// rounding drift.
const RESEED_EVERY: usize = 32;

#[inline]
fn phasor(k: usize, phase_turns: f64) -> Complex64 {
    Complex64::cis(TAU * (k as f64 * phase_turns).rem_euclid(1.0))
}

/// `Σ_{k=1..K} a_k cos(2π k u)` for real coefficients `a[k-1]`.
pub(crate) fn cosine_sum(a: &[f64], phase_turns: f64) -> f64 {
    let step = phasor(1, phase_turns);
    let mut rot = step;
    let mut acc = 0.0;
    for (i, &ak) in a.iter().enumerate() {
        let k = i + 1;
        if k % RESEED_EVERY == 0 {
            rot = phasor(k, phase_turns);
        }
        acc += ak * rot.re;
        rot *= step;
    }
    acc
}

/// `Re Σ_{k=1..K} c_k e^{i 2π k u}` for complex coefficients `c[k-1]`.
pub(crate) fn phasor_sum(c: &[Complex64], phase_turns: f64) -> f64 {
    let step = phasor(1, phase_turns);
    let mut rot = step;
    let mut acc = 0.0;
    for (i, ck) in c.iter().enumerate() {
        let k = i + 1;
        if k % RESEED_EVERY == 0 {
            rot = phasor(k, phase_turns);
        }
        acc += ck.re * rot.re - ck.im * rot.im;
        rot *= step;
    }
    acc
}
