//! Waveguide-fed antenna array channel model.
//!
//! Users sit on the ground plane; `N` radiating elements are pinched onto a
//! dielectric waveguide that runs along the x-axis at height `d`. A user's
//! effective channel is the inner product of its free-space steering vector
//! with the in-waveguide propagation vector: element `n` contributes an
//! amplitude `√η / D` decaying with the exact 3-D distance `D`, a free-space
//! phase `−(2π/λ)·D`, and a guided phase `−(2π/λ_g)·|x_n − x_feed|`.
//!
//! All operations here are pure functions of their inputs and safe to call
//! concurrently.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("scenario parameter `{0}` must be strictly positive and finite")]
    NonPositive(&'static str),
    #[error("user position ({x}, {y}) outside the {dx} m x {dy} m region")]
    UserOutsideRegion { x: f64, y: f64, dx: f64, dy: f64 },
    #[error("antenna positions must be finite and strictly ascending")]
    UnorderedLayout,
    #[error("antenna position {0} outside the waveguide span [0, {1}]")]
    AntennaOutsideSpan(f64, f64),
    #[error("cannot place {n} antennas with spacing {spacing} m on a {span} m waveguide")]
    SpanTooSmall { n: usize, spacing: f64, span: f64 },
}

/// Immutable physical setup: region size, carrier, waveguide geometry, noise.
///
/// The feed point sits at `feed_x` on the waveguide axis; the guided phase of
/// element `n` accrues over `|x_n − feed_x|` at the guided wavelength
/// `λ_g = λ / η_eff`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scenario {
    /// Region side length along the waveguide axis, `D_x` (m).
    pub region_x: f64,
    /// Region side length across the waveguide axis, `D_y` (m).
    pub region_y: f64,
    /// Carrier frequency `f_c` (Hz).
    pub carrier_freq: f64,
    /// Effective refractive index of the waveguide, `η_eff`.
    pub refractive_index: f64,
    /// Waveguide height above the user plane, `d` (m).
    pub waveguide_height: f64,
    /// x-coordinate of the waveguide feed point (m).
    pub feed_x: f64,
    /// Noise power `σ²` (W).
    pub noise_power: f64,
    /// Number of antennas on the waveguide, `N`.
    pub num_antennas: usize,
    /// Number of users, `M`.
    pub num_users: usize,
}

impl Scenario {
    /// Free-space wavelength `λ = c / f_c` (m).
    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_freq
    }

    /// Guided wavelength `λ_g = λ / η_eff` (m).
    pub fn guided_wavelength(&self) -> f64 {
        self.wavelength() / self.refractive_index
    }

    /// Path-loss constant `η = λ² / (16π²) = c² / (16π² f_c²)` (m²).
    pub fn eta(&self) -> f64 {
        let lambda = self.wavelength();
        lambda * lambda / (16.0 * std::f64::consts::PI * std::f64::consts::PI)
    }

    /// Checks the physical invariants, returning `self` on success.
    pub fn validated(self) -> Result<Self, ModelError> {
        let positive = [
            (self.region_x, "region_x"),
            (self.region_y, "region_y"),
            (self.carrier_freq, "carrier_freq"),
            (self.refractive_index, "refractive_index"),
            (self.waveguide_height, "waveguide_height"),
            (self.noise_power, "noise_power"),
        ];
        for (v, name) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(ModelError::NonPositive(name));
            }
        }
        if !self.feed_x.is_finite() {
            return Err(ModelError::NonPositive("feed_x"));
        }
        if self.num_antennas == 0 {
            return Err(ModelError::NonPositive("num_antennas"));
        }
        if self.num_users == 0 {
            return Err(ModelError::NonPositive("num_users"));
        }
        Ok(self)
    }
}

/// Position of a user in the plane (the user z-coordinate is 0 by model).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UserPosition {
    pub x: f64,
    pub y: f64,
}

impl UserPosition {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Checks `0 ≤ x ≤ D_x`, `0 ≤ y ≤ D_y`.
    pub fn check_in_region(&self, scenario: &Scenario) -> Result<(), ModelError> {
        if self.x < 0.0 || self.x > scenario.region_x || self.y < 0.0 || self.y > scenario.region_y
        {
            return Err(ModelError::UserOutsideRegion {
                x: self.x,
                y: self.y,
                dx: scenario.region_x,
                dy: scenario.region_y,
            });
        }
        Ok(())
    }
}

/// Ordered x-coordinates of the antennas on the waveguide (y = 0, z = d).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AntennaLayout {
    positions: Vec<f64>,
}

impl AntennaLayout {
    /// Builds a layout from strictly ascending finite positions.
    pub fn new(positions: Vec<f64>) -> Result<Self, ModelError> {
        if positions.is_empty() || positions.iter().any(|x| !x.is_finite()) {
            return Err(ModelError::UnorderedLayout);
        }
        if positions.windows(2).any(|w| w[1] <= w[0]) {
            return Err(ModelError::UnorderedLayout);
        }
        Ok(Self { positions })
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Smallest gap between consecutive antennas; `+∞` for a single antenna.
    pub fn min_gap(&self) -> f64 {
        self.positions
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// Checks consecutive gaps ≥ `spacing` and positions within `[0, span]`.
    pub fn check_feasible(&self, spacing: f64, span: f64) -> Result<(), ModelError> {
        for &x in &self.positions {
            if x < 0.0 || x > span {
                return Err(ModelError::AntennaOutsideSpan(x, span));
            }
        }
        if self.len() > 1 && self.min_gap() < spacing {
            return Err(ModelError::SpanTooSmall {
                n: self.len(),
                spacing,
                span,
            });
        }
        Ok(())
    }
}

/// Effective complex channel gain of one user, with its per-antenna summands.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelGain {
    /// `g = Σ_n conj(h[n]) · h_w[n]`.
    pub value: Complex64,
    /// The summands of `value`, one per antenna.
    pub per_antenna_terms: Vec<Complex64>,
}

impl ChannelGain {
    /// Squared magnitude `|g|²`.
    pub fn gain_sq(&self) -> f64 {
        self.value.norm_sqr()
    }
}

fn user_antenna_distance(user: &UserPosition, antenna_x: f64, height: f64) -> f64 {
    let dx = user.x - antenna_x;
    (dx * dx + user.y * user.y + height * height).sqrt()
}

/// Free-space steering vector: element `n` is
/// `√η · exp(−j·(2π/λ)·D_n) / D_n` with `D_n` the exact 3-D distance.
pub fn free_space_vector(
    scenario: &Scenario,
    user: &UserPosition,
    layout: &AntennaLayout,
) -> Vec<Complex64> {
    let sqrt_eta = scenario.eta().sqrt();
    let wavenumber = 2.0 * std::f64::consts::PI / scenario.wavelength();
    layout
        .positions()
        .iter()
        .map(|&xn| {
            let dist = user_antenna_distance(user, xn, scenario.waveguide_height);
            Complex64::from_polar(sqrt_eta / dist, -wavenumber * dist)
        })
        .collect()
}

/// In-waveguide propagation vector: element `n` is
/// `exp(−j·(2π/λ_g)·|x_feed − x_n|)`; unit magnitude for every element.
pub fn waveguide_vector(scenario: &Scenario, layout: &AntennaLayout) -> Vec<Complex64> {
    let guided_wavenumber = 2.0 * std::f64::consts::PI / scenario.guided_wavelength();
    layout
        .positions()
        .iter()
        .map(|&xn| Complex64::from_polar(1.0, -guided_wavenumber * (scenario.feed_x - xn).abs()))
        .collect()
}

/// Effective gain `g = h^H · h_w = Σ_n conj(h[n]) · h_w[n]`.
pub fn effective_gain(
    scenario: &Scenario,
    user: &UserPosition,
    layout: &AntennaLayout,
) -> ChannelGain {
    let free = free_space_vector(scenario, user, layout);
    let guided = waveguide_vector(scenario, layout);
    let terms: Vec<Complex64> = free
        .iter()
        .zip(&guided)
        .map(|(h, w)| h.conj() * w)
        .collect();
    let value = terms.iter().sum();
    ChannelGain {
        value,
        per_antenna_terms: terms,
    }
}

/// Analytic gradient `∂|g|²/∂x_n` for every antenna (units 1/m).
///
/// Each summand of `g` is `a_n·e^{jφ_n}` with `a_n = √η / D_n` and
/// `φ_n = (2π/λ)·D_n − (2π/λ_g)·|x_n − x_feed|`, so
/// `∂|g|²/∂x_n = 2·Re( conj(g) · (a_n' + j·a_n·φ_n') · e^{jφ_n} )`.
/// At `x_n = feed_x` the guided-phase term uses the subgradient convention
/// `sign(0) := +1`.
pub fn gain_sq_gradient(
    scenario: &Scenario,
    user: &UserPosition,
    layout: &AntennaLayout,
) -> Vec<f64> {
    let gain = effective_gain(scenario, user, layout);
    let g_conj = gain.value.conj();
    let sqrt_eta = scenario.eta().sqrt();
    let wavenumber = 2.0 * std::f64::consts::PI / scenario.wavelength();
    let guided_wavenumber = 2.0 * std::f64::consts::PI / scenario.guided_wavelength();

    layout
        .positions()
        .iter()
        .zip(&gain.per_antenna_terms)
        .map(|(&xn, &term)| {
            let dist = user_antenna_distance(user, xn, scenario.waveguide_height);
            let dist_dx = (xn - user.x) / dist;
            let amp = sqrt_eta / dist;
            let amp_dx = -sqrt_eta * dist_dx / (dist * dist);
            let sign = if xn - scenario.feed_x >= 0.0 { 1.0 } else { -1.0 };
            let phase_dx = wavenumber * dist_dx - guided_wavenumber * sign;
            // term = a·e^{jφ}; d(term)/dx = (a'/a + j·φ')·term
            let dterm = term * Complex64::new(amp_dx / amp, phase_dx);
            2.0 * (g_conj * dterm).re
        })
        .collect()
}

/// Convenience: effective gains for a set of users over one layout.
pub fn user_gains(
    scenario: &Scenario,
    users: &[UserPosition],
    layout: &AntennaLayout,
) -> Vec<ChannelGain> {
    users
        .iter()
        .map(|u| effective_gain(scenario, u, layout))
        .collect()
}

/// Convenience: `∂|g_m|²/∂x` for every user.
pub fn user_gain_sq_gradients(
    scenario: &Scenario,
    users: &[UserPosition],
    layout: &AntennaLayout,
) -> Vec<Vec<f64>> {
    users
        .iter()
        .map(|u| gain_sq_gradient(scenario, u, layout))
        .collect()
}
