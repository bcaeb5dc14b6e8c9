//! Shared fixtures for the benchmarks.

use rectenna_core::{output_series, FilteredSeries, RcFilter, RectifierKind, Scenario};

pub const FC: f64 = 915e6;

pub fn scenario(samples: usize) -> Scenario {
    Scenario {
        samples,
        ..Scenario::new(RectifierKind::FullWave)
    }
}

pub fn filtered(truncation: usize, f_cut: f64) -> FilteredSeries {
    let f = RcFilter::from_cutoff(2.0, f_cut).expect("valid cutoff");
    output_series(RectifierKind::FullWave, &f, 1.0, FC, truncation).expect("valid series")
}
