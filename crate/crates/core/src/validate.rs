//! Oracle-agreement checks run by `rectenna validate`.
//!
//! Each check compares a closed form against its brute-force counterpart and
//! reports the worst deviation next to the tolerance it must meet.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::filter::{dc_voltage, filtered_series, max_ripple, output_series, ripple_peak, RcFilter};
use crate::oracle::{
    quad_b_coefficient, quad_coefficient, quad_coefficient_with, quad_multisine_a0, refined_stats,
    sample_stats, QuadratureOptions,
};
use crate::rectifier::{build_series, fourier_coefficient, multisine_a0, tail_bound, RectifierKind};

pub const MAX_HARMONIC: usize = 64;
const FC: f64 = 915e6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: impl Into<String>, max_error: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            max_error,
            tolerance,
            // NaN fails
            passed: max_error <= tolerance,
        }
    }
}

fn worst(errors: impl Iterator<Item = f64>) -> f64 {
    errors.fold(0.0, |acc, e| if e.is_nan() || acc.is_nan() { f64::NAN } else { acc.max(e) })
}

fn filters() -> Vec<RcFilter> {
    let mut v = vec![RcFilter::new(2.0, 0.0).unwrap()];
    v.extend(
        [1e8, 1e9, 5e9, 1e11]
            .into_iter()
            .map(|f| RcFilter::from_cutoff(2.0, f).unwrap()),
    );
    v.push(RcFilter::from_cutoff(2000.0, 3e9).unwrap());
    v
}

pub fn run_all() -> Vec<Check> {
    let kinds = RectifierKind::ALL;
    let mut out = Vec::new();

    out.push(Check::new(
        "a_k closed form vs quadrature (k <= 64, both kinds)",
        worst(kinds.iter().flat_map(|&kind| {
            (0..=MAX_HARMONIC)
                .map(move |k| (fourier_coefficient(kind, k) - quad_coefficient(kind, k, FC)).abs())
        })),
        1e-8,
    ));

    out.push(Check::new(
        "b_k quadrature vanishes (k <= 64, both kinds)",
        worst(kinds.iter().flat_map(|&kind| {
            (0..=MAX_HARMONIC).map(move |k| quad_b_coefficient(kind, k, FC).abs())
        })),
        1e-9,
    ));

    out.push(Check::new(
        "quadrature independent of carrier frequency",
        worst(kinds.iter().flat_map(|&kind| {
            (0..=MAX_HARMONIC)
                .map(move |k| (quad_coefficient(kind, k, 1.0) - quad_coefficient(kind, k, FC)).abs())
        })),
        1e-12,
    ));

    let fine = QuadratureOptions {
        panel_factor: 2,
        ..Default::default()
    };
    out.push(Check::new(
        "quadrature converged under panel doubling",
        worst(kinds.iter().flat_map(|&kind| {
            (0..=MAX_HARMONIC).map(move |k| {
                (quad_coefficient(kind, k, FC) - quad_coefficient_with(kind, k, FC, fine)).abs()
            })
        })),
        1e-10,
    ));

    out.push(Check::new(
        "full-wave a_k is twice half-wave a_k (k != 1)",
        worst((0..=1024).filter(|&k| k != 1).map(|k| {
            (fourier_coefficient(RectifierKind::FullWave, k)
                - 2.0 * fourier_coefficient(RectifierKind::HalfWave, k))
            .abs()
        })),
        0.0,
    ));

    for kind in kinds {
        for k_trunc in [64usize, 256, 1024] {
            let s = build_series(kind, k_trunc, 1.0, FC).unwrap();
            let err = worst((0..1000).map(|i| {
                let t = i as f64 / (1000.0 * FC);
                (s.eval(t) - kind.apply((2.0 * PI * FC * t).cos())).abs()
            }));
            out.push(Check::new(
                format!("{kind}-wave series sup error <= tail bound (K = {k_trunc})"),
                err,
                tail_bound(kind, k_trunc) + 1e-12,
            ));
        }
    }

    out.push(Check::new(
        "V_DC equals sampled mean of v_o (relative)",
        worst(kinds.iter().flat_map(|&kind| {
            filters().into_iter().map(move |f| {
                let fs = output_series(kind, &f, 1.0, FC, 256).unwrap();
                let mean = sample_stats(|t| fs.eval(t), fs.period(), 4096).unwrap().mean;
                let v = dc_voltage(kind, &f, 1.0, FC);
                (mean - v).abs() / v
            })
        })),
        1e-9,
    ));

    out.push(Check::new(
        "unfiltered v_o equals R_L v_out pointwise",
        worst(kinds.iter().flat_map(|&kind| {
            let f = RcFilter::new(2.0, 0.0).unwrap();
            let s = build_series(kind, 256, 2f64.sqrt(), FC).unwrap();
            let fs = filtered_series(&s, &f);
            (0..1000).map(move |i| {
                let t = i as f64 / (1000.0 * FC);
                (fs.eval(t) - 2.0 * s.eval(t)).abs()
            })
        })),
        1e-12,
    ));

    out.push(Check::new(
        "ripple peak at tau = 0 equals maximum ripple",
        worst(kinds.iter().map(|&kind| {
            let f = RcFilter::new(2.0, 0.0).unwrap();
            (ripple_peak(kind, &f, 1.0, FC, 256) - max_ripple(kind, 1.0, 2.0, 256)).abs()
        })),
        0.0,
    ));

    out.push(Check::new(
        "sampled maximum at tau = 0 vs A R_L^(3/2)",
        worst(kinds.iter().map(|&kind| {
            let f = RcFilter::new(2.0, 0.0).unwrap();
            let fs = output_series(kind, &f, 1.0, FC, 256).unwrap();
            let s = refined_stats(|t| fs.eval(t), fs.period(), 1 << 16).unwrap();
            (s.max - 2f64.powf(1.5)).abs()
        })),
        4.0 / (PI * 256.0) * 2f64.powf(1.5),
    ));

    out.push(Check::new(
        "two-tone a_0 closed form vs quadrature",
        worst(kinds.iter().flat_map(|&kind| {
            [0.0, 0.01, 0.05, 0.1, 0.5].into_iter().map(move |r| {
                (multisine_a0(kind, FC, r * FC).unwrap() - quad_multisine_a0(kind, FC, r * FC).unwrap())
                    .abs()
            })
        })),
        1e-8,
    ));

    out
}
