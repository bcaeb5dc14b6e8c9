//! Parallel RC low-pass filter at the rectifier output.
//!
//! The filter sets both the input-side amplification `δ = sqrt(R_L/(1+ω_c²τ²))`
//! of the matched rectifier and the per-harmonic response
//! `H(f) = R_L/(1 + j2πfτ)` applied to the rectified series. All quantities
//! are model reals; no dimensional bookkeeping is attempted.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{require_non_negative, require_positive, ModelError, Result};
use crate::harmonics::phasor_sum;
use crate::rectifier::{build_series, fourier_coefficient, FourierSeries, RectifierKind};
use crate::signal::turns;

/// Load resistance `R_L` in parallel with capacitance `C_L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RcFilter {
    load_r: f64,
    cap_c: f64,
}

impl RcFilter {
    /// `C_L = 0` is allowed and gives the unfiltered limit `τ = 0`.
    pub fn new(load_r: f64, cap_c: f64) -> Result<Self> {
        require_positive("load_r", load_r)?;
        require_non_negative("cap_c", cap_c)?;
        Ok(RcFilter { load_r, cap_c })
    }

    /// Filter with a given cut-off; `f_cut = ∞` maps to `C_L = 0`.
    pub fn from_cutoff(load_r: f64, f_cut: f64) -> Result<Self> {
        require_positive("load_r", load_r)?;
        if f_cut == f64::INFINITY {
            return Ok(RcFilter { load_r, cap_c: 0.0 });
        }
        require_positive("f_cut", f_cut)?;
        RcFilter::new(load_r, 1.0 / (TAU * f_cut * load_r))
    }

    pub fn from_tau(load_r: f64, tau: f64) -> Result<Self> {
        require_positive("load_r", load_r)?;
        require_non_negative("tau", tau)?;
        RcFilter::new(load_r, tau / load_r)
    }

    pub fn load_r(&self) -> f64 {
        self.load_r
    }

    pub fn cap_c(&self) -> f64 {
        self.cap_c
    }

    pub fn tau(&self) -> f64 {
        self.load_r * self.cap_c
    }

    /// `1/(2πτ)`, infinite for `τ = 0`.
    pub fn f_cut(&self) -> f64 {
        let tau = self.tau();
        if tau == 0.0 {
            f64::INFINITY
        } else {
            1.0 / (TAU * tau)
        }
    }
}

/// Magnitude and phase of `H(f)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transfer {
    pub magnitude: f64,
    pub phase: f64,
}

/// `sqrt(R_L / (1 + ω_c²τ²))`.
pub fn amplification_delta(filter: &RcFilter, fc: f64) -> f64 {
    let wt = TAU * fc * filter.tau();
    (filter.load_r / (1.0 + wt * wt)).sqrt()
}

pub fn transfer(filter: &RcFilter, f: f64) -> Transfer {
    let x = TAU * f * filter.tau();
    Transfer {
        magnitude: filter.load_r / (1.0 + x * x).sqrt(),
        phase: (-x).atan(),
    }
}

/// Rectifier series passed through the RC filter.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredSeries {
    base: FourierSeries,
    filter: RcFilter,
    gains: Vec<f64>,
    phases: Vec<f64>,
    // |H_k| d_k e^{i(φ_k + ∠H_k)} = |H_k| a_k e^{i∠H_k}
    phasors: Vec<Complex64>,
}

pub fn filtered_series(series: &FourierSeries, filter: &RcFilter) -> FilteredSeries {
    let fc = series.fundamental_fc();
    let (gains, phases): (Vec<f64>, Vec<f64>) = (1..=series.truncation())
        .map(|k| {
            let h = transfer(filter, k as f64 * fc);
            (h.magnitude, h.phase)
        })
        .unzip();
    let phasors = series
        .ak()
        .iter()
        .zip(gains.iter().zip(&phases))
        .map(|(&a, (&g, &p))| Complex64::from_polar(g * a, p))
        .collect();
    FilteredSeries {
        base: series.clone(),
        filter: *filter,
        gains,
        phases,
        phasors,
    }
}

impl FilteredSeries {
    pub fn base(&self) -> &FourierSeries {
        &self.base
    }

    pub fn filter(&self) -> &RcFilter {
        &self.filter
    }

    /// `|H(k f_c)|` for `k = 1..K`.
    pub fn gains(&self) -> &[f64] {
        &self.gains
    }

    /// `∠H(k f_c)` for `k = 1..K`.
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn period(&self) -> f64 {
        self.base.period()
    }

    /// DC term `scale a_0 R_L / 2`.
    pub fn dc_level(&self) -> f64 {
        self.base.scale() * self.filter.load_r * (self.base.a0() / 2.0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let u = turns(self.base.fundamental_fc(), t);
        self.base.scale()
            * (self.base.a0() * self.filter.load_r / 2.0 + phasor_sum(&self.phasors, u))
    }

    /// Samples `v_o` at `t_j = j T / n`, `j = 0..n`, by an inverse FFT of the
    /// harmonic phasors. Harmonics at or above `n` fold onto their alias, so
    /// the samples are exact for any `n`.
    pub fn sample_period(&self, n: usize) -> Result<Vec<f64>> {
        if n < 2 {
            return Err(ModelError::param("n", "at least 2 samples are required"));
        }
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for (i, c) in self.phasors.iter().enumerate() {
            buf[(i + 1) % n] += c;
        }
        FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
        let scale = self.base.scale();
        let dc = self.base.a0() * self.filter.load_r / 2.0;
        Ok(buf.iter().map(|z| scale * (dc + z.re)).collect())
    }
}

pub fn eval_filtered(fs: &FilteredSeries, t: f64) -> f64 {
    fs.eval(t)
}

/// Rectifier output series for amplitude `A`, filtered by `filter`.
pub fn output_series(
    kind: RectifierKind,
    filter: &RcFilter,
    amplitude: f64,
    fc: f64,
    truncation: usize,
) -> Result<FilteredSeries> {
    require_positive("fc", fc)?;
    let scale = amplification_delta(filter, fc) * amplitude;
    let series = build_series(kind, truncation, scale, fc)?;
    Ok(filtered_series(&series, filter))
}

/// `V_DC = δ A R_L a_0 / 2`.
pub fn dc_voltage(kind: RectifierKind, filter: &RcFilter, amplitude: f64, fc: f64) -> f64 {
    let a0 = fourier_coefficient(kind, 0);
    amplification_delta(filter, fc) * amplitude * filter.load_r * (a0 / 2.0)
}

/// Aligned-phase ripple peak
/// `ρ = δ A R_L (a_0/2 + Σ a_k / sqrt(1 + (2πk f_c τ)²))`.
///
/// Exact as the output maximum only at `τ = 0`; for `τ > 0` the harmonics do
/// not share a common peak instant and `ρ` is an estimate.
pub fn ripple_peak(
    kind: RectifierKind,
    filter: &RcFilter,
    amplitude: f64,
    fc: f64,
    truncation: usize,
) -> f64 {
    let wt = TAU * fc * filter.tau();
    let sum = aligned_sum(kind, truncation, |k| {
        let x = k as f64 * wt;
        (1.0 + x * x).sqrt()
    });
    amplification_delta(filter, fc) * amplitude * filter.load_r * sum
}

/// Ripple peak of the unfiltered limit, `A R_L sqrt(R_L) (a_0/2 + Σ a_k)`.
pub fn max_ripple(kind: RectifierKind, amplitude: f64, load_r: f64, truncation: usize) -> f64 {
    let sum = aligned_sum(kind, truncation, |_| 1.0);
    load_r.sqrt() * amplitude * load_r * sum
}

/// `a_0/2 + Σ_{k=1..K} d_k cos(φ_k) / attenuation(k)`; `d_k cos φ_k = a_k`.
fn aligned_sum(kind: RectifierKind, truncation: usize, attenuation: impl Fn(usize) -> f64) -> f64 {
    let mut sum = fourier_coefficient(kind, 0) / 2.0;
    for k in 1..=truncation {
        let a = fourier_coefficient(kind, k);
        if a != 0.0 {
            sum += a / attenuation(k);
        }
    }
    sum
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DcLimits {
    /// `τ → ∞`
    pub low: f64,
    /// `τ → 0`: `A R_L sqrt(R_L) a_0 / 2`
    pub high: f64,
}

pub fn dc_limits(kind: RectifierKind, load_r: f64, amplitude: f64) -> DcLimits {
    let a0 = fourier_coefficient(kind, 0);
    DcLimits {
        low: 0.0,
        high: load_r.sqrt() * amplitude * load_r * (a0 / 2.0),
    }
}

/// Fraction of the unfiltered DC voltage retained, `1/sqrt(1 + (f_c/f_cut)²)`.
pub fn dc_fraction(filter: &RcFilter, fc: f64) -> f64 {
    amplification_delta(filter, fc) / filter.load_r.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rectifier::{tail_bound, RectifierKind::*, DEFAULT_TRUNCATION};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};

    const FC: f64 = 915e6;

    fn complex_transfer(filter: &RcFilter, f: f64) -> Complex64 {
        Complex64::new(filter.load_r(), 0.0) / Complex64::new(1.0, TAU * f * filter.tau())
    }

    #[test]
    fn filter_construction() {
        let f = RcFilter::new(2.0, 0.0).unwrap();
        assert_eq!(f.tau(), 0.0);
        assert_eq!(f.f_cut(), f64::INFINITY);
        let f = RcFilter::from_cutoff(2.0, 1e9).unwrap();
        assert_abs_diff_eq!(f.f_cut() * f.tau(), 1.0 / TAU, epsilon = 1e-15);
        assert_abs_diff_eq!(f.f_cut(), 1e9, epsilon = 1e-3);
        assert_eq!(RcFilter::from_cutoff(2.0, f64::INFINITY).unwrap().cap_c(), 0.0);
        assert!(RcFilter::new(0.0, 1e-12).is_err());
        assert!(RcFilter::new(2.0, -1e-12).is_err());
        assert!(RcFilter::from_cutoff(2.0, 0.0).is_err());
        let f = RcFilter::new(50.0, 3e-12).unwrap();
        assert_eq!(f.tau(), 50.0 * 3e-12);
    }

    #[test]
    fn delta_examples() {
        let f = RcFilter::new(2.0, 0.0).unwrap();
        assert_abs_diff_eq!(amplification_delta(&f, FC), SQRT_2, epsilon = 1e-15);

        let f = RcFilter::from_cutoff(2.0, 1e9).unwrap();
        let d = amplification_delta(&f, FC);
        assert_abs_diff_eq!(d, (2.0f64 / 1.837_225).sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(d, 1.043_36, epsilon = 1e-5);
        let h = complex_transfer(&f, FC).norm();
        // δ² (1 + ω²τ²) = R_L and |H(f_c)| = R_L / sqrt(1 + ω²τ²)
        assert_abs_diff_eq!(d * d * (2.0 / h).powi(2), 2.0, epsilon = 1e-12);

        let f = RcFilter::from_tau(2.0, 1e3 / (TAU * FC)).unwrap();
        assert_abs_diff_eq!(amplification_delta(&f, FC), SQRT_2 * 1e-3, epsilon = 1e-9);
    }

    #[test]
    fn transfer_examples() {
        let f = RcFilter::from_cutoff(2.0, 1e9).unwrap();
        let dc = transfer(&f, 0.0);
        assert_eq!(dc.magnitude, 2.0);
        assert_eq!(dc.phase, 0.0);

        let cut = transfer(&f, f.f_cut());
        assert_abs_diff_eq!(cut.magnitude, SQRT_2, epsilon = 1e-12);
        assert_abs_diff_eq!(cut.phase, -FRAC_PI_4, epsilon = 1e-12);

        let h = transfer(&f, FC);
        let z = complex_transfer(&f, FC);
        assert_abs_diff_eq!(h.magnitude, z.norm(), epsilon = 1e-12);
        assert_abs_diff_eq!(h.phase, z.arg(), epsilon = 1e-12);
        assert_abs_diff_eq!(h.magnitude, 1.475_532_645, epsilon = 1e-9);
        assert_abs_diff_eq!(h.phase, -0.741_040_855, epsilon = 1e-9);
    }

    #[test]
    fn unfiltered_series_is_scaled_rectifier_output() {
        let f = RcFilter::new(2.0, 0.0).unwrap();
        let s = build_series(FullWave, DEFAULT_TRUNCATION, 1.0, FC).unwrap();
        let fs = filtered_series(&s, &f);
        assert!(fs.gains().iter().all(|&g| g == 2.0));
        assert!(fs.phases().iter().all(|&p| p == 0.0));
        for i in 0..2000 {
            let t = i as f64 / (2000.0 * FC);
            assert_abs_diff_eq!(fs.eval(t), 2.0 * s.eval(t), epsilon = 1e-12);
        }
    }

    #[test]
    fn heavy_filter_attenuates_all_harmonics() {
        let f = RcFilter::new(2.0, 1.0).unwrap();
        let s = build_series(FullWave, 16, 1.0, FC).unwrap();
        let fs = filtered_series(&s, &f);
        assert!(fs.gains().iter().all(|&g| g < 1e-6 * 2.0));
    }

    #[test]
    fn gains_match_transfer() {
        let f = RcFilter::from_cutoff(2.0, 1e9).unwrap();
        let s = build_series(FullWave, 4, 1.0, FC).unwrap();
        let fs = filtered_series(&s, &f);
        for k in 1..=4 {
            let x = 0.915 * k as f64;
            assert_abs_diff_eq!(fs.gains()[k - 1], 2.0 / (1.0 + x * x).sqrt(), epsilon = 1e-12);
            assert_eq!(fs.gains()[k - 1], transfer(&f, k as f64 * FC).magnitude);
        }
        assert!(fs.gains().windows(2).all(|w| w[1] < w[0]));
        assert!(fs.phases().iter().all(|&p| p <= 0.0 && p > -PI / 2.0));
    }

    #[test]
    fn filtered_output_at_origin_unfiltered() {
        let f = RcFilter::new(2.0, 0.0).unwrap();
        let fs = output_series(FullWave, &f, 1.0, FC, DEFAULT_TRUNCATION).unwrap();
        let tol = 2.0 * SQRT_2 * tail_bound(FullWave, DEFAULT_TRUNCATION);
        assert!((fs.eval(0.0) - 2.0 * SQRT_2).abs() <= tol);
        assert_abs_diff_eq!(fs.eval(0.0), 2.828_43, epsilon = 4.0 / (PI * 256.0) * 2.0 * SQRT_2);
    }

    #[test]
    fn zero_scale_output_vanishes() {
        let f = RcFilter::from_cutoff(2.0, 1e9).unwrap();
        let s = build_series(HalfWave, 32, 0.0, FC).unwrap();
        let fs = filtered_series(&s, &f);
        for t in [0.0, 1e-10, 3e-10] {
            assert_eq!(fs.eval(t), 0.0);
        }
    }

    #[test]
    fn fft_samples_match_direct_evaluation() {
        let f = RcFilter::from_cutoff(2.0, 1e9).unwrap();
        let fs = output_series(FullWave, &f, 1.0, FC, DEFAULT_TRUNCATION).unwrap();
        for n in [64usize, 1000, 4096] {
            let samples = fs.sample_period(n).unwrap();
            for (j, v) in samples.iter().enumerate().step_by(7) {
                let t = j as f64 * fs.period() / n as f64;
                assert_abs_diff_eq!(*v, fs.eval(t), epsilon = 1e-12);
            }
        }
        assert!(fs.sample_period(1).is_err());
    }

    #[test]
    fn dc_voltage_examples() {
        let f0 = RcFilter::new(2.0, 0.0).unwrap();
        let v = dc_voltage(FullWave, &f0, 1.0, FC);
        assert_abs_diff_eq!(v, 4.0 * SQRT_2 / PI, epsilon = 1e-15);
        assert_abs_diff_eq!(v, 1.800_63, epsilon = 1e-5);

        let big = RcFilter::new(2.0, 1.0).unwrap();
        assert!(dc_voltage(HalfWave, &big, 1.0, FC) < 1e-9);

        for f in [f0, RcFilter::from_cutoff(2.0, 1e9).unwrap(), big] {
            assert_eq!(dc_voltage(FullWave, &f, 1.3, FC), 2.0 * dc_voltage(HalfWave, &f, 1.3, FC));
        }
    }

    #[test]
    fn ripple_formulas() {
        let f0 = RcFilter::new(2.0, 0.0).unwrap();
        for kind in RectifierKind::ALL {
            assert_eq!(ripple_peak(kind, &f0, 1.0, FC, 256), max_ripple(kind, 1.0, 2.0, 256));
            let rho = max_ripple(kind, 1.0, 2.0, 256);
            assert!((rho - 2.0 * SQRT_2).abs() <= 4.0 / (PI * 256.0) * 2.0 * SQRT_2);
        }
        assert_eq!(max_ripple(FullWave, 0.0, 2.0, 256), 0.0);

        let big = RcFilter::from_tau(2.0, 1e-3).unwrap();
        let rho = ripple_peak(FullWave, &big, 1.0, FC, 256);
        let vdc = dc_voltage(FullWave, &big, 1.0, FC);
        assert!((rho - vdc).abs() / vdc < 1e-6);
    }

    #[test]
    fn dc_limit_examples() {
        let l = dc_limits(FullWave, 2.0, 1.0);
        assert_eq!(l.low, 0.0);
        assert_abs_diff_eq!(l.high, 1.800_63, epsilon = 1e-5);
        let h = dc_limits(HalfWave, 2.0, 1.0);
        assert_abs_diff_eq!(h.high, 0.900_32, epsilon = 1e-5);
        assert_eq!(l.high, 2.0 * h.high);
        assert_eq!(dc_limits(HalfWave, 2.0, 0.0).high, 0.0);
        // τ = 0 reaches the upper limit exactly
        let f0 = RcFilter::new(2.0, 0.0).unwrap();
        assert_eq!(dc_voltage(FullWave, &f0, 1.0, FC), l.high);
    }

    #[test]
    fn dc_voltage_increasing_in_cutoff() {
        let high = dc_limits(FullWave, 2.0, 1.0).high;
        let mut prev = 0.0;
        for i in 0..60 {
            let fcut = 1e7 * 10f64.powf(i as f64 / 10.0);
            let f = RcFilter::from_cutoff(2.0, fcut).unwrap();
            let v = dc_voltage(FullWave, &f, 1.0, FC);
            assert!(v > prev && v <= high);
            prev = v;
        }
    }

    proptest! {
        #[test]
        fn sampled_mean_equals_dc(
            load_r in 0.5f64..500.0,
            log_fcut in 7.0f64..11.0,
            amplitude in 0.1f64..5.0,
            kind_idx in 0usize..2,
        ) {
            let f = RcFilter::from_cutoff(load_r, 10f64.powf(log_fcut)).unwrap();
            let kind = RectifierKind::ALL[kind_idx];
            let fs = output_series(kind, &f, amplitude, FC, 128).unwrap();
            let samples = fs.sample_period(512).unwrap();
            let mean = samples.iter().sum::<f64>() / samples.len() as f64;
            let vdc = dc_voltage(kind, &f, amplitude, FC);
            prop_assert!((mean - vdc).abs() <= 1e-12 * vdc);
            prop_assert_eq!(fs.dc_level(), vdc);
        }

        #[test]
        fn triangle_bound_holds(log_fcut in 8.0f64..11.0) {
            let f = RcFilter::from_cutoff(2.0, 10f64.powf(log_fcut)).unwrap();
            let fs = output_series(FullWave, &f, 1.0, FC, 64).unwrap();
            let wt = TAU * FC * f.tau();
            let bound = amplification_delta(&f, FC) * 2.0 * (2.0 / PI
                + (1..=64).map(|k| {
                    fourier_coefficient(FullWave, k).abs() / (1.0 + (k as f64 * wt).powi(2)).sqrt()
                }).sum::<f64>());
            let max = fs.sample_period(4096).unwrap().into_iter().fold(f64::MIN, f64::max);
            prop_assert!(max <= bound + 1e-12);
        }
    }
}
