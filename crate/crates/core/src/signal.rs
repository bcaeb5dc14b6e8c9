//! Source waveforms: a single carrier tone and the unmodulated N-tone
//! multisine with zero phase arrangement.
//!
//! The multisine is written in envelope form, `x(t) = U(t) cos(2π f_c t)` with
//! `U(t) = A sin(Nπ Δf t) / sin(π Δf t)`. The envelope is periodic with
//! fundamental period `2/Δf`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{require_non_negative, require_positive, ModelError, Result};

/// Below this magnitude of `sin(π Δf t)` the envelope is evaluated through its
/// removable-singularity limit.
const SINGULARITY_GUARD: f64 = 1e-12;

/// Carrier phase in turns, reduced to `[0, 1)`.
#[inline]
pub(crate) fn turns(freq: f64, t: f64) -> f64 {
    (freq * t).rem_euclid(1.0)
}

/// A single sinewave `A cos(2π f_c t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToneSpec {
    pub amplitude: f64,
    pub carrier_fc: f64,
}

impl ToneSpec {
    pub fn new(amplitude: f64, carrier_fc: f64) -> Result<Self> {
        require_positive("amplitude", amplitude)?;
        require_positive("carrier_fc", carrier_fc)?;
        Ok(ToneSpec {
            amplitude,
            carrier_fc,
        })
    }

    pub fn period(&self) -> f64 {
        1.0 / self.carrier_fc
    }
}

/// Flat-fading channel with a fixed gain and phase shift.
///
/// The model analysis uses the ideal channel (`gain = 1`, `phase = 0`); other
/// values are applied deterministically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Channel {
    pub gain: f64,
    pub phase: f64,
}

impl Default for Channel {
    fn default() -> Self {
        Channel {
            gain: 1.0,
            phase: 0.0,
        }
    }
}

/// Unmodulated N-tone multisine with tone spacing `Δf` around the carrier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultisineSpec {
    pub amplitude: f64,
    pub carrier_fc: f64,
    pub tone_count: u32,
    pub spacing_df: f64,
}

impl MultisineSpec {
    /// Validates `N >= 1`, `Δf >= 0` and `f_c > N Δf`.
    pub fn new(amplitude: f64, carrier_fc: f64, tone_count: u32, spacing_df: f64) -> Result<Self> {
        require_positive("amplitude", amplitude)?;
        require_positive("carrier_fc", carrier_fc)?;
        require_non_negative("spacing_df", spacing_df)?;
        if tone_count == 0 {
            return Err(ModelError::param("tone_count", "must be at least 1"));
        }
        if carrier_fc <= f64::from(tone_count) * spacing_df {
            return Err(ModelError::param(
                "spacing_df",
                format!(
                    "carrier {carrier_fc} Hz must exceed tone_count x spacing = {} Hz",
                    f64::from(tone_count) * spacing_df
                ),
            ));
        }
        Ok(MultisineSpec {
            amplitude,
            carrier_fc,
            tone_count,
            spacing_df,
        })
    }

    /// Fundamental envelope period `2/Δf`; `None` when `Δf = 0` (constant envelope).
    pub fn envelope_period(&self) -> Option<f64> {
        (self.spacing_df > 0.0).then(|| 2.0 / self.spacing_df)
    }

    /// Envelope fundamental frequency `Δf/2`.
    pub fn envelope_fundamental(&self) -> f64 {
        self.spacing_df / 2.0
    }

    /// Single tone of amplitude `N A`, the small-spacing limit of the multisine.
    pub fn small_spacing_tone(&self) -> ToneSpec {
        ToneSpec {
            amplitude: f64::from(self.tone_count) * self.amplitude,
            carrier_fc: self.carrier_fc,
        }
    }
}

/// `A cos(2π f_c t)`.
pub fn eval_sinewave(spec: &ToneSpec, t: f64) -> f64 {
    spec.amplitude * (TAU * turns(spec.carrier_fc, t)).cos()
}

/// `|h| A cos(2π f_c t + θ)`.
pub fn eval_received(spec: &ToneSpec, channel: &Channel, t: f64) -> f64 {
    channel.gain.abs() * spec.amplitude * (TAU * turns(spec.carrier_fc, t) + channel.phase).cos()
}

/// Envelope `A sin(Nπ Δf t)/sin(π Δf t)` without parameter validation.
pub(crate) fn envelope(amplitude: f64, tone_count: u32, spacing_df: f64, t: f64) -> f64 {
    let n = f64::from(tone_count);
    if tone_count == 1 {
        return amplitude;
    }
    if spacing_df == 0.0 {
        return n * amplitude;
    }
    // Reduce Δf t to its offset r from the nearest integer m so both sines are
    // evaluated at a small argument: sin(Nπ(m+r))/sin(π(m+r)) = (-1)^{m(N-1)} sin(Nπr)/sin(πr).
    let y = spacing_df * t;
    let m = y.round();
    let x = PI * (y - m);
    let sign = if (m.abs() % 2.0 == 1.0) && tone_count.is_multiple_of(2) {
        -1.0
    } else {
        1.0
    };
    let den = x.sin();
    if den.abs() < SINGULARITY_GUARD {
        // L'Hopital: N cos(N x) / cos(x)
        sign * n * amplitude * (n * x).cos() / x.cos()
    } else {
        sign * amplitude * (n * x).sin() / den
    }
}

/// Multisine envelope `U(t)`.
pub fn eval_multisine_envelope(spec: &MultisineSpec, t: f64) -> f64 {
    envelope(spec.amplitude, spec.tone_count, spec.spacing_df, t)
}

/// Multisine waveform `U(t) cos(2π f_c t)`.
pub fn eval_multisine(spec: &MultisineSpec, t: f64) -> f64 {
    eval_multisine_envelope(spec, t) * (TAU * turns(spec.carrier_fc, t)).cos()
}
