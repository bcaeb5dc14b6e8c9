//! Brute-force counterparts of the closed forms: quadrature of the
//! trigonometric Fourier integrals and dense time-domain sampling.
//!
//! Nothing here calls into the closed-form coefficient code. The coefficient
//! integrals are evaluated directly in time,
//!
//! ```text
//! a_k = 2 f_c ∫_{-1/(2f_c)}^{1/(2f_c)} g(cos(2π f_c t)) cos(2π k f_c t) dt
//! ```
//!
//! with composite Gauss-Legendre panels aligned to the kinks of `g∘cos` at
//! `t = ±1/(4f_c)`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, ModelError, Result};
use crate::quadrature::GaussLegendre;
use crate::rectifier::RectifierKind;
use crate::signal::envelope;

/// Default per-panel Gauss-Legendre order.
pub const DEFAULT_ORDER: usize = 20;

/// Default sample count per period for extrema scans.
pub const DEFAULT_SAMPLES: usize = 1 << 16;

/// Golden-section refinement stops once the bracket is this fraction of a period.
const REFINE_TOL_TURNS: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureOptions {
    pub order: usize,
    /// Multiplies the default panel count per segment.
    pub panel_factor: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions {
            order: DEFAULT_ORDER,
            panel_factor: 1,
        }
    }
}

/// Quarter-period segments `[-1/2, -1/4, 1/4, 1/2] / f_c`.
fn carrier_breakpoints(fc: f64) -> [f64; 4] {
    [-0.5 / fc, -0.25 / fc, 0.25 / fc, 0.5 / fc]
}

/// Panels per quarter period so that each panel spans about one oscillation
/// of the `k`-th harmonic.
fn panels_for(k: usize, factor: usize) -> usize {
    (2 + k / 4) * factor.max(1)
}

fn trig_integral(
    kind: RectifierKind,
    k: usize,
    fc: f64,
    opts: QuadratureOptions,
    basis: fn(f64) -> f64,
) -> f64 {
    let rule = GaussLegendre::new(opts.order);
    let base = panels_for(k, opts.panel_factor);
    let integral = rule.integrate_piecewise(
        &carrier_breakpoints(fc),
        // the middle segment spans half a period
        |seg| if seg == 1 { 2 * base } else { base },
        |t| kind.apply((TAU * fc * t).cos()) * basis(TAU * k as f64 * fc * t),
    );
    2.0 * fc * integral
}

/// Cosine coefficient `a_k` by quadrature.
pub fn quad_coefficient(kind: RectifierKind, k: usize, fc: f64) -> f64 {
    quad_coefficient_with(kind, k, fc, QuadratureOptions::default())
}

pub fn quad_coefficient_with(
    kind: RectifierKind,
    k: usize,
    fc: f64,
    opts: QuadratureOptions,
) -> f64 {
    trig_integral(kind, k, fc, opts, f64::cos)
}

/// Sine coefficient `b_k` by quadrature.
pub fn quad_b_coefficient(kind: RectifierKind, k: usize, fc: f64) -> f64 {
    quad_b_coefficient_with(kind, k, fc, QuadratureOptions::default())
}

pub fn quad_b_coefficient_with(
    kind: RectifierKind,
    k: usize,
    fc: f64,
    opts: QuadratureOptions,
) -> f64 {
    if k == 0 {
        return 0.0;
    }
    trig_integral(kind, k, fc, opts, f64::sin)
}

fn check_multisine_args(fc: f64, df: f64) -> Result<()> {
    require_positive("fc", fc)?;
    if !(df.is_finite() && df >= 0.0 && df < 2.0 * fc) {
        return Err(ModelError::param(
            "df",
            format!("must satisfy 0 <= df < 2 fc, got df = {df}, fc = {fc}"),
        ));
    }
    Ok(())
}

/// Two-tone `a_0` by quadrature: the trigonometric `a_0` integral over the
/// carrier period centred on the envelope peak, applied to the two-tone
/// waveform with its envelope normalised to unit peak,
/// `2 f_c ∫ g(U(t) cos(2π f_c t) / 2) dt`.
pub fn quad_multisine_a0(kind: RectifierKind, fc: f64, df: f64) -> Result<f64> {
    check_multisine_args(fc, df)?;
    let rule = GaussLegendre::new(DEFAULT_ORDER);
    let mut breaks = carrier_breakpoints(fc).to_vec();
    // envelope sign changes at ±1/(2Δf) when they fall inside the window
    if df > fc {
        let z = 0.5 / df;
        breaks.extend([-z, z]);
        breaks.sort_by(f64::total_cmp);
    }
    let integral = rule.integrate_piecewise(
        &breaks,
        |_| 4,
        |t| kind.apply(envelope(1.0, 2, df, t) / 2.0 * (TAU * fc * t).cos()),
    );
    Ok(2.0 * fc * integral)
}

/// Twice the mean of `g(x(t))` over one full envelope period `T = 2/Δf` of the
/// unit-amplitude two-tone waveform, `(2/T) ∫_0^T g(x(t)) dt`.
///
/// This is the long-run DC coefficient of the rectified two-tone signal. It
/// differs from [`quad_multisine_a0`], which integrates over the carrier
/// period at the envelope peak only.
pub fn envelope_average_a0(kind: RectifierKind, fc: f64, df: f64) -> Result<f64> {
    check_multisine_args(fc, df)?;
    if df == 0.0 {
        return Err(ModelError::param("df", "envelope period is unbounded for df = 0"));
    }
    let period = 2.0 / df;
    let mut breaks = vec![0.0, period];
    // carrier zeros (2m+1)/(4 f_c) and envelope zeros (2m+1)/(2 Δf)
    let carrier_zeros = (period * fc * 2.0).ceil() as usize + 1;
    breaks.extend(
        (0..carrier_zeros)
            .map(|m| (2 * m + 1) as f64 / (4.0 * fc))
            .filter(|&t| t < period),
    );
    breaks.extend([0.5 / df, 1.5 / df].into_iter().filter(|&t| t < period));
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * period);
    let rule = GaussLegendre::new(DEFAULT_ORDER);
    let integral = rule.integrate_piecewise(&breaks, |_| 1, |t| {
        kind.apply(envelope(1.0, 2, df, t) * (TAU * fc * t).cos())
    });
    Ok(2.0 / period * integral)
}

/// Statistics of a function sampled over one period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    pub mean: f64,
    pub max: f64,
    pub min: f64,
    pub peak_to_peak: f64,
    pub argmax_t: f64,
    pub argmin_t: f64,
}

impl SampleStats {
    /// Statistics of `samples` taken at `t_j = j period / n`.
    pub fn from_samples(samples: &[f64], period: f64) -> Result<Self> {
        let n = samples.len();
        if n < 2 {
            return Err(ModelError::param("n", "at least 2 samples are required"));
        }
        require_positive("period", period)?;
        let mut sum = 0.0;
        let (mut imax, mut imin) = (0, 0);
        for (j, &v) in samples.iter().enumerate() {
            sum += v;
            if v > samples[imax] {
                imax = j;
            }
            if v < samples[imin] {
                imin = j;
            }
        }
        let (max, min) = (samples[imax], samples[imin]);
        Ok(SampleStats {
            mean: sum / n as f64,
            max,
            min,
            peak_to_peak: max - min,
            argmax_t: imax as f64 * period / n as f64,
            argmin_t: imin as f64 * period / n as f64,
        })
    }
}

/// Samples `f` at `n` uniform points over `[0, period)`.
pub fn sample_stats<F: Fn(f64) -> f64>(f: F, period: f64, n: usize) -> Result<SampleStats> {
    if n < 2 {
        return Err(ModelError::param("n", "at least 2 samples are required"));
    }
    require_positive("period", period)?;
    let samples: Vec<f64> = (0..n).map(|j| f(j as f64 * period / n as f64)).collect();
    SampleStats::from_samples(&samples, period)
}

/// Sampled statistics with golden-section refinement of both extrema.
pub fn refined_stats<F: Fn(f64) -> f64>(f: F, period: f64, n: usize) -> Result<SampleStats> {
    let coarse = sample_stats(&f, period, n)?;
    Ok(refine_extrema(coarse, f, period, n))
}

/// Refines the sampled extrema of `coarse` within one sample spacing of the
/// discrete argmax/argmin. The mean is left untouched.
pub fn refine_extrema<F: Fn(f64) -> f64>(coarse: SampleStats, f: F, period: f64, n: usize) -> SampleStats {
    let step = 1.0 / n as f64;
    let at = |u: f64| f(u * period);
    let umax = coarse.argmax_t / period;
    let (u_hi, v_hi) = golden_max(at, umax - step, umax + step);
    let umin = coarse.argmin_t / period;
    let (u_lo, v_lo) = golden_max(|u| -at(u), umin - step, umin + step);
    let v_lo = -v_lo;

    let mut out = coarse;
    if v_hi > out.max {
        out.max = v_hi;
        out.argmax_t = u_hi.rem_euclid(1.0) * period;
    }
    if v_lo < out.min {
        out.min = v_lo;
        out.argmin_t = u_lo.rem_euclid(1.0) * period;
    }
    out.peak_to_peak = out.max - out.min;
    out
}

/// Golden-section search for a maximum of `g` on `[lo, hi]`.
fn golden_max<G: Fn(f64) -> f64>(g: G, mut lo: f64, mut hi: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut g1 = g(x1);
    let mut g2 = g(x2);
    for _ in 0..200 {
        if hi - lo <= REFINE_TOL_TURNS {
            break;
        }
        if g1 < g2 {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + INV_PHI * (hi - lo);
            g2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - INV_PHI * (hi - lo);
            g1 = g(x1);
        }
    }
    if g1 >= g2 {
        (x1, g1)
    } else {
        (x2, g2)
    }
}
