//! Fourier-series model of an RF energy-harvesting rectenna.
//!
//! A carrier `A cos(2π f_c t)` reaches an ideal rectifier through a matched
//! network whose passive gain `δ` depends on the RC load. The rectified
//! waveform is expanded in closed form as a cosine series, passed through the
//! RC low-pass filter harmonic by harmonic, and reduced to a DC voltage and a
//! ripple figure. The [`oracle`] module re-derives the same quantities by
//! quadrature and dense sampling, and [`design`] picks the filter time
//! constant for a ripple budget.
//!
//! ```
//! use rectenna_core::{dc_voltage, RcFilter, RectifierKind};
//!
//! let filter = RcFilter::from_cutoff(2.0, 1e9).unwrap();
//! let v = dc_voltage(RectifierKind::FullWave, &filter, 1.0, 915e6);
//! assert!(v > 0.0 && v < 4.0 * 2f64.sqrt() / std::f64::consts::PI);
//! ```

pub mod design;
pub mod error;
pub mod filter;
mod harmonics;
pub mod oracle;
pub mod quadrature;
pub mod rectifier;
pub mod signal;
pub mod validate;

pub use design::{
    fig3_trace, optimize_capacitance, sweep_cutoff, DesignResult, Grid, RippleMetric, Scenario,
    Spacing, SweepRow, TimeGrid, TracePoint,
};
pub use error::{ModelError, Result};
pub use filter::{
    amplification_delta, dc_limits, dc_voltage, eval_filtered, filtered_series, max_ripple,
    output_series, ripple_peak, transfer, DcLimits, FilteredSeries, RcFilter, Transfer,
};
pub use oracle::{
    quad_b_coefficient, quad_coefficient, quad_multisine_a0, refined_stats, sample_stats,
    SampleStats,
};
pub use rectifier::{
    build_series, eval_series, fourier_coefficient, multisine_a0, rectify, tail_bound,
    FourierSeries, RectifierKind, DEFAULT_TRUNCATION,
};
pub use signal::{
    eval_multisine, eval_multisine_envelope, eval_received, eval_sinewave, Channel, MultisineSpec,
    ToneSpec,
};
