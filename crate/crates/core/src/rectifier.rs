//! Ideal diode nonlinearities and the closed-form Fourier series of the
//! rectified carrier.
//!
//! For a unit cosine input the rectified output is even, so every sine
//! coefficient vanishes and the series is a pure cosine series
//!
//! ```text
//! g(cos(2π f_c t)) = a_0/2 + Σ_{k>=1} a_k cos(2π k f_c t)
//! ```
//!
//! with `a_k = c cos(πk/2) / (π(1-k^2))` for `k != 1`, where `c = 4` for the
//! full-wave rectifier and `c = 2` for the half-wave rectifier.

use std::f64::consts::{FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, ModelError, Result};
use crate::harmonics::cosine_sum;
use crate::signal::turns;

/// Default number of harmonics kept in a truncated series.
pub const DEFAULT_TRUNCATION: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RectifierKind {
    /// `g(x) = |x|`
    FullWave,
    /// `g(x) = max(0, x)`
    HalfWave,
}

impl RectifierKind {
    pub const ALL: [RectifierKind; 2] = [RectifierKind::FullWave, RectifierKind::HalfWave];

    #[inline]
    pub fn apply(self, v: f64) -> f64 {
        match self {
            RectifierKind::FullWave => v.abs(),
            RectifierKind::HalfWave => v.max(0.0),
        }
    }

    /// Numerator of the `k != 1` coefficient formula.
    fn numerator(self) -> f64 {
        match self {
            RectifierKind::FullWave => 4.0,
            RectifierKind::HalfWave => 2.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RectifierKind::FullWave => "full",
            RectifierKind::HalfWave => "half",
        }
    }
}

impl std::fmt::Display for RectifierKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for RectifierKind {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "full" | "full-wave" | "fullwave" => Ok(RectifierKind::FullWave),
            "half" | "half-wave" | "halfwave" => Ok(RectifierKind::HalfWave),
            other => Err(ModelError::param(
                "kind",
                format!("expected `full` or `half`, got `{other}`"),
            )),
        }
    }
}

pub fn rectify(kind: RectifierKind, v: f64) -> f64 {
    kind.apply(v)
}

/// `cos(πk/2)` selected exactly from `k mod 4`.
#[inline]
fn cos_half_pi(k: usize) -> f64 {
    match k % 4 {
        0 => 1.0,
        2 => -1.0,
        _ => 0.0,
    }
}

/// Closed-form cosine coefficient `a_k` of the rectified unit cosine.
pub fn fourier_coefficient(kind: RectifierKind, k: usize) -> f64 {
    match k {
        0 => kind.numerator() / PI,
        1 => match kind {
            RectifierKind::FullWave => 0.0,
            RectifierKind::HalfWave => 0.5,
        },
        _ if k % 2 == 1 => 0.0,
        _ => {
            let kf = k as f64;
            kind.numerator() * cos_half_pi(k) / (PI * (1.0 - kf * kf))
        }
    }
}

/// Exact tail `Σ_{k>K} |a_k|` of the coefficient magnitudes.
///
/// Only even harmonics contribute past `k = 1`, and
/// `Σ_{even k >= m} 1/(k^2-1)` telescopes to `1/(2(m-1))`.
pub fn tail_bound(kind: RectifierKind, truncation: usize) -> f64 {
    let first_even = if truncation.is_multiple_of(2) {
        truncation + 2
    } else {
        truncation + 1
    };
    kind.numerator() / (2.0 * PI * (first_even - 1) as f64)
}

/// Truncated Fourier series of the rectifier output `δA g(cos(2π f_c t))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierSeries {
    kind: RectifierKind,
    a0: f64,
    ak: Vec<f64>,
    scale: f64,
    fundamental_fc: f64,
}

impl FourierSeries {
    pub fn kind(&self) -> RectifierKind {
        self.kind
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    /// Coefficients `a_1..a_K`.
    pub fn ak(&self) -> &[f64] {
        &self.ak
    }

    /// `a_k` for `k = 0..=K`; zero past the truncation.
    pub fn coefficient(&self, k: usize) -> f64 {
        match k {
            0 => self.a0,
            _ => self.ak.get(k - 1).copied().unwrap_or(0.0),
        }
    }

    /// Sine coefficients vanish identically.
    pub fn b_coefficient(&self, _k: usize) -> f64 {
        0.0
    }

    /// Harmonic magnitude `d_k = |a_k|`.
    pub fn magnitude(&self, k: usize) -> f64 {
        self.coefficient(k).abs()
    }

    /// Harmonic phase: `0` when `a_k > 0`, `π` otherwise.
    pub fn phase(&self, k: usize) -> f64 {
        if self.coefficient(k) > 0.0 {
            0.0
        } else {
            PI
        }
    }

    pub fn truncation(&self) -> usize {
        self.ak.len()
    }

    /// The `δA` prefactor.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn fundamental_fc(&self) -> f64 {
        self.fundamental_fc
    }

    pub fn period(&self) -> f64 {
        1.0 / self.fundamental_fc
    }

    /// Mean value `scale a_0 / 2`.
    pub fn dc_level(&self) -> f64 {
        self.scale * (self.a0 / 2.0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let u = turns(self.fundamental_fc, t);
        self.scale * (self.a0 / 2.0 + cosine_sum(&self.ak, u))
    }
}

/// Builds the series truncated at `K` harmonics with prefactor `scale = δA`.
pub fn build_series(
    kind: RectifierKind,
    truncation: usize,
    scale: f64,
    fc: f64,
) -> Result<FourierSeries> {
    if truncation == 0 {
        return Err(ModelError::param("truncation", "must be at least 1"));
    }
    if !scale.is_finite() {
        return Err(ModelError::param("scale", "must be finite"));
    }
    require_positive("fc", fc)?;
    Ok(FourierSeries {
        kind,
        a0: fourier_coefficient(kind, 0),
        ak: (1..=truncation).map(|k| fourier_coefficient(kind, k)).collect(),
        scale,
        fundamental_fc: fc,
    })
}

pub fn eval_series(series: &FourierSeries, t: f64) -> f64 {
    series.eval(t)
}

/// Closed-form DC coefficient `a_0` of the rectified two-tone multisine.
///
/// The coefficient describes one carrier period centred on the envelope peak,
/// with the envelope normalised to unit peak. It reduces to the single-tone
/// `a_0` at `Δf = 0`.
pub fn multisine_a0(kind: RectifierKind, fc: f64, df: f64) -> Result<f64> {
    require_positive("fc", fc)?;
    if !(df.is_finite() && df >= 0.0) {
        return Err(ModelError::param("df", format!("must be finite and >= 0, got {df}")));
    }
    if df >= 2.0 * fc {
        return Err(ModelError::param(
            "df",
            format!("must be below 2 fc = {} Hz, got {df}", 2.0 * fc),
        ));
    }
    let angle = FRAC_PI_4 * df / fc;
    let den = PI * (4.0 * fc * fc - df * df);
    Ok(match kind {
        RectifierKind::FullWave => 8.0 * fc * (2.0 * fc - df * angle.sin()) * angle.cos() / den,
        RectifierKind::HalfWave => 8.0 * fc * fc * angle.cos() / den,
    })
}
