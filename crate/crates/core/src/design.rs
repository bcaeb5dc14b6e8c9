//! Cut-off sweeps and capacitance selection under a ripple budget.
//!
//! Raising the time constant lowers the ripple and the DC voltage together,
//! so the best design for a budget is the smallest `τ` whose ripple fits.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{require_positive, ModelError, Result};
use crate::filter::{dc_limits, dc_voltage, output_series, ripple_peak, DcLimits, RcFilter};
use crate::oracle::{refine_extrema, SampleStats, DEFAULT_SAMPLES};
use crate::rectifier::{RectifierKind, DEFAULT_TRUNCATION};

/// Bisection bracket on `τ` in seconds.
pub const TAU_BRACKET: (f64, f64) = (1e-15, 1e-3);
/// Relative width of the final `τ` bracket.
pub const TAU_REL_TOL: f64 = 1e-12;
pub const MAX_BISECTIONS: usize = 200;

/// Fixed operating conditions shared by sweeps, traces and designs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub kind: RectifierKind,
    pub amplitude: f64,
    pub carrier_fc: f64,
    pub load_r: f64,
    pub truncation: usize,
    /// Samples per carrier period for extrema scans.
    pub samples: usize,
}

impl Scenario {
    /// `A = 1 V`, `f_c = 915 MHz`, `R_L = 2 Ω`, `K = 256`.
    pub fn new(kind: RectifierKind) -> Self {
        Scenario {
            kind,
            amplitude: 1.0,
            carrier_fc: 915e6,
            load_r: 2.0,
            truncation: DEFAULT_TRUNCATION,
            samples: DEFAULT_SAMPLES,
        }
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("amplitude", self.amplitude)?;
        require_positive("carrier_fc", self.carrier_fc)?;
        require_positive("load_r", self.load_r)?;
        if self.truncation == 0 {
            return Err(ModelError::param("truncation", "must be at least 1"));
        }
        if self.samples < 2 {
            return Err(ModelError::param("samples", "must be at least 2"));
        }
        Ok(())
    }

    pub fn filter_for_tau(&self, tau: f64) -> Result<RcFilter> {
        RcFilter::from_tau(self.load_r, tau)
    }

    pub fn filter_for_cutoff(&self, f_cut: f64) -> Result<RcFilter> {
        RcFilter::from_cutoff(self.load_r, f_cut)
    }

    pub fn dc_limits(&self) -> DcLimits {
        dc_limits(self.kind, self.load_r, self.amplitude)
    }

    pub fn dc_voltage(&self, filter: &RcFilter) -> f64 {
        dc_voltage(self.kind, filter, self.amplitude, self.carrier_fc)
    }

    /// Aligned-phase ripple estimate relative to the DC level, `ρ - V_DC`.
    pub fn analytic_ripple(&self, filter: &RcFilter) -> f64 {
        ripple_peak(self.kind, filter, self.amplitude, self.carrier_fc, self.truncation)
            - self.dc_voltage(filter)
    }

    /// Sampled statistics of `v_o` over one carrier period with refined extrema.
    pub fn output_stats(&self, filter: &RcFilter) -> Result<SampleStats> {
        let fs = output_series(self.kind, filter, self.amplitude, self.carrier_fc, self.truncation)?;
        let samples = fs.sample_period(self.samples)?;
        let coarse = SampleStats::from_samples(&samples, fs.period())?;
        Ok(refine_extrema(coarse, |t| fs.eval(t), fs.period(), self.samples))
    }

    pub fn ripple(&self, filter: &RcFilter, metric: RippleMetric) -> Result<f64> {
        match metric {
            RippleMetric::SampledPtp => Ok(self.output_stats(filter)?.peak_to_peak),
            RippleMetric::Analytic => Ok(self.analytic_ripple(filter)),
        }
    }

    pub fn evaluate(&self, filter: &RcFilter) -> Result<SweepRow> {
        let stats = self.output_stats(filter)?;
        Ok(SweepRow {
            f_cut: filter.f_cut(),
            tau: filter.tau(),
            cap_c: filter.cap_c(),
            v_dc: self.dc_voltage(filter),
            ripple_analytic: self.analytic_ripple(filter),
            ripple_sampled: stats.peak_to_peak,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Spacing {
    Linear,
    Log,
}

/// `points` grid values between `min` and `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Grid {
    pub fn new(min: f64, max: f64, points: usize, spacing: Spacing) -> Result<Self> {
        let g = Grid {
            min,
            max,
            points,
            spacing,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(ModelError::InvalidRange(format!(
                "need finite min < max, got {}..{}",
                self.min, self.max
            )));
        }
        if self.spacing == Spacing::Log && self.min <= 0.0 {
            return Err(ModelError::InvalidRange(format!(
                "log spacing needs min > 0, got {}",
                self.min
            )));
        }
        if self.points < 2 {
            return Err(ModelError::InvalidRange(format!(
                "need at least 2 points, got {}",
                self.points
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    return self.max;
                }
                let s = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.min + s * (self.max - self.min),
                    Spacing::Log => self.min * (self.max / self.min).powf(s),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub f_cut: f64,
    pub tau: f64,
    pub cap_c: f64,
    pub v_dc: f64,
    /// `ρ - V_DC`
    pub ripple_analytic: f64,
    /// Peak-to-peak of the sampled output.
    pub ripple_sampled: f64,
}

/// One row per cut-off frequency, ascending. Rows are computed in parallel.
pub fn sweep_cutoff(scenario: &Scenario, grid: &Grid) -> Result<Vec<SweepRow>> {
    scenario.validate()?;
    grid.validate()?;
    if grid.min <= 0.0 {
        return Err(ModelError::InvalidRange(format!(
            "cut-off frequencies must be > 0, got min {}",
            grid.min
        )));
    }
    grid.values()
        .par_iter()
        .map(|&fcut| scenario.evaluate(&scenario.filter_for_cutoff(fcut)?))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RippleMetric {
    /// Peak-to-peak of the sampled filter output.
    SampledPtp,
    /// Aligned-phase estimate `ρ - V_DC`.
    Analytic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignResult {
    pub chosen_c: f64,
    pub chosen_tau: f64,
    pub achieved_v_dc: f64,
    pub achieved_ripple: f64,
    pub budget: f64,
    pub metric: RippleMetric,
    pub feasible: bool,
}

/// Smallest `τ` (largest `V_DC`) whose ripple metric fits `budget`.
///
/// Bisects on `ln τ` over [`TAU_BRACKET`] and returns the feasible end of the
/// final bracket. `τ = 0` is returned when the unfiltered output already fits.
pub fn optimize_capacitance(
    scenario: &Scenario,
    budget: f64,
    metric: RippleMetric,
) -> Result<DesignResult> {
    scenario.validate()?;
    require_positive("ripple_budget", budget)?;
    let ripple_at = |tau: f64| -> Result<f64> { scenario.ripple(&scenario.filter_for_tau(tau)?, metric) };
    let finish = |tau: f64, ripple: f64| -> Result<DesignResult> {
        let filter = scenario.filter_for_tau(tau)?;
        Ok(DesignResult {
            chosen_c: filter.cap_c(),
            chosen_tau: tau,
            achieved_v_dc: scenario.dc_voltage(&filter),
            achieved_ripple: ripple,
            budget,
            metric,
            feasible: ripple <= budget * (1.0 + 1e-6),
        })
    };

    let r0 = ripple_at(0.0)?;
    if r0 <= budget {
        return finish(0.0, r0);
    }
    let (mut lo, mut hi) = (TAU_BRACKET.0.ln(), TAU_BRACKET.1.ln());
    let r_lo = ripple_at(lo.exp())?;
    if r_lo <= budget {
        return finish(lo.exp(), r_lo);
    }
    let mut r_hi = ripple_at(hi.exp())?;
    if r_hi > budget {
        return finish(hi.exp(), r_hi);
    }
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= TAU_REL_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let r = ripple_at(mid.exp())?;
        if r <= budget {
            hi = mid;
            r_hi = r;
        } else {
            lo = mid;
        }
    }
    finish(hi.exp(), r_hi)
}

/// Uniform time grid, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl TimeGrid {
    pub fn new(start: f64, stop: f64, points: usize) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && start < stop) || points < 2 {
            return Err(ModelError::InvalidRange(format!(
                "time grid needs start < stop and >= 2 points, got {start}..{stop} x {points}"
            )));
        }
        Ok(TimeGrid {
            start,
            stop,
            points,
        })
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points).map(move |i| {
            if i + 1 == self.points {
                self.stop
            } else {
                self.start + step * i as f64
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub t: f64,
    /// Rectifier input `δA cos(2π f_c t)`.
    pub v_in: f64,
    /// Rectifier output series `v_out(t)`.
    pub v_out: f64,
    /// Filter output `v_o(t)`.
    pub v_o: f64,
}

/// Filter output over `grid` for the filter with cut-off `f_cut`
/// (`f_cut = ∞` is the unfiltered case).
pub fn fig3_trace(scenario: &Scenario, f_cut: f64, grid: &TimeGrid) -> Result<Vec<TracePoint>> {
    scenario.validate()?;
    let filter = scenario.filter_for_cutoff(f_cut)?;
    let fs = output_series(scenario.kind, &filter, scenario.amplitude, scenario.carrier_fc, scenario.truncation)?;
    let scale = fs.base().scale();
    Ok(grid
        .values()
        .map(|t| TracePoint {
            t,
            v_in: scale * (std::f64::consts::TAU * crate::signal::turns(scenario.carrier_fc, t)).cos(),
            v_out: fs.base().eval(t),
            v_o: fs.eval(t),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{PI, SQRT_2};

    use RectifierKind::{FullWave, HalfWave};

    fn quick(kind: RectifierKind) -> Scenario {
        Scenario {
            samples: 1 << 12,
            ..Scenario::new(kind)
        }
    }

    #[test]
    fn grid_values() {
        let g = Grid::new(1.0, 1000.0, 4, Spacing::Log).unwrap();
        let v = g.values();
        assert_abs_diff_eq!(v[1], 10.0, epsilon = 1e-12);
        assert_eq!(v[3], 1000.0);
        let g = Grid::new(0.0, 1.0, 3, Spacing::Linear).unwrap();
        assert_eq!(g.values(), vec![0.0, 0.5, 1.0]);
        assert!(Grid::new(2.0, 1.0, 3, Spacing::Linear).is_err());
        assert!(Grid::new(0.0, 1.0, 3, Spacing::Log).is_err());
        assert!(Grid::new(0.0, 1.0, 1, Spacing::Linear).is_err());
    }

    #[test]
    fn sweep_saturates_and_doubles() {
        let grid = Grid::new(1e8, 1e11, 50, Spacing::Log).unwrap();
        let full = sweep_cutoff(&quick(FullWave), &grid).unwrap();
        let half = sweep_cutoff(&quick(HalfWave), &grid).unwrap();
        assert_eq!(full.len(), 50);
        let high = 4.0 * SQRT_2 / PI;
        assert!((full[49].v_dc - high).abs() < 0.01 * high);
        for w in full.windows(2) {
            assert!(w[1].f_cut > w[0].f_cut && w[1].v_dc > w[0].v_dc);
        }
        for (f, h) in full.iter().zip(&half) {
            assert_eq!(f.v_dc, 2.0 * h.v_dc);
            assert!(f.v_dc <= high && f.ripple_sampled >= 0.0);
        }
    }

    #[test]
    fn two_point_sweep() {
        let grid = Grid::new(5e8, 1e9, 2, Spacing::Linear).unwrap();
        let rows = sweep_cutoff(&quick(FullWave), &grid).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[1].v_dc > rows[0].v_dc);
        let bad = Grid { min: -1.0, ..grid };
        assert!(sweep_cutoff(&quick(FullWave), &bad).is_err());
    }

    #[test]
    fn unconstrained_budget_picks_zero_capacitance() {
        let s = quick(FullWave);
        let r = optimize_capacitance(&s, 10.0, RippleMetric::SampledPtp).unwrap();
        assert_eq!(r.chosen_c, 0.0);
        assert_eq!(r.achieved_v_dc, s.dc_limits().high);
        assert!(r.feasible);
        let r = optimize_capacitance(&s, 10.0, RippleMetric::Analytic).unwrap();
        assert_eq!(r.chosen_tau, 0.0);
        assert!(optimize_capacitance(&s, 0.0, RippleMetric::Analytic).is_err());
    }

    #[test]
    fn budget_is_met_at_the_boundary() {
        let s = quick(FullWave);
        for metric in [RippleMetric::SampledPtp, RippleMetric::Analytic] {
            let r = optimize_capacitance(&s, 0.1, metric).unwrap();
            assert!(r.feasible);
            let again = s.ripple(&s.filter_for_tau(r.chosen_tau).unwrap(), metric).unwrap();
            assert!((again - 0.1).abs() < 1e-6 * 0.1, "{metric:?}: {again}");
        }
    }

    #[test]
    fn tiny_budget_still_has_dc() {
        let s = quick(FullWave);
        let r = optimize_capacitance(&s, 1e-6, RippleMetric::SampledPtp).unwrap();
        assert!(r.feasible);
        assert!(r.achieved_v_dc > 0.0 && r.achieved_v_dc < 0.01 * s.dc_limits().high);
        assert!(r.chosen_tau > 1e-9);
    }

    #[test]
    fn trace_properties() {
        let s = Scenario::new(FullWave);
        let period = 1.0 / s.carrier_fc;
        let grid = TimeGrid::new(0.0, period, 1001).unwrap();
        let t0 = fig3_trace(&s, f64::INFINITY, &grid).unwrap();
        for p in &t0 {
            assert_abs_diff_eq!(p.v_o, s.load_r * p.v_out, epsilon = 1e-12);
        }
        let mean = |tr: &[TracePoint]| tr[..1000].iter().map(|p| p.v_o).sum::<f64>() / 1000.0;
        let ptp = |tr: &[TracePoint]| {
            let max = tr.iter().map(|p| p.v_o).fold(f64::MIN, f64::max);
            let min = tr.iter().map(|p| p.v_o).fold(f64::MAX, f64::min);
            max - min
        };
        let t1 = fig3_trace(&s, 1e9, &grid).unwrap();
        let t5 = fig3_trace(&s, 5e9, &grid).unwrap();
        assert!(mean(&t5) > mean(&t1));
        assert!(ptp(&t5) > ptp(&t1));
        let vdc = s.dc_voltage(&s.filter_for_cutoff(1e9).unwrap());
        assert!((mean(&t1) - vdc).abs() < 1e-6);
        assert!(TimeGrid::new(1.0, 0.0, 10).is_err());
    }
}
