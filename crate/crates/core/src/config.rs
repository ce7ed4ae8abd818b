//! Static description of an array family: element counts, subarray division,
//! spacings, dislocation budget and operating frequency.
//!
//! All lengths are expressed in wavelengths at the design frequency. The
//! aperture side follows the closed form `L_a = N * (M * d + delta_s)`.

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Which placement degrees of freedom a structure carries.
///
/// * `Uniform` — periodic reference array, no free coordinates.
/// * `Dsue` — dislocated subarrays, uniform elements.
/// * `Usre` — uniform subarrays, random (offset) elements.
/// * `Dsre` — dislocated subarrays and random elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StructureKind {
    Uniform,
    Dsue,
    Usre,
    Dsre,
}

impl StructureKind {
    /// Subarrays may translate inside their grid cells.
    pub fn has_dislocations(self) -> bool {
        matches!(self, StructureKind::Dsue | StructureKind::Dsre)
    }

    /// Elements may leave the uniform lattice (offsets shared by every subarray).
    pub fn has_element_offsets(self) -> bool {
        matches!(self, StructureKind::Usre | StructureKind::Dsre)
    }

    /// All four kinds, in comparison-table order.
    pub fn all() -> [StructureKind; 4] {
        [
            StructureKind::Uniform,
            StructureKind::Dsue,
            StructureKind::Usre,
            StructureKind::Dsre,
        ]
    }

    pub fn name(self) -> &'static str {
        match self {
            StructureKind::Uniform => "uniform",
            StructureKind::Dsue => "dsue",
            StructureKind::Usre => "usre",
            StructureKind::Dsre => "dsre",
        }
    }
}

/// Array family description. Lengths in wavelengths at `frequency_hz`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrayConfig {
    /// Elements per subarray side (`M`); a subarray holds `M x M` elements.
    pub elements_per_subarray_side: usize,
    /// Subarrays per array side (`N`); the array holds `N x N` subarrays.
    pub subarrays_per_side: usize,
    /// Uniform pitch of the within-subarray reference lattice (`d`, wavelengths).
    pub element_spacing: f64,
    /// Per-subarray dislocation span (`delta_s`, wavelengths).
    pub dislocation_budget: f64,
    /// Design frequency (Hz).
    pub frequency_hz: f64,
    /// Placement degrees of freedom.
    pub structure: StructureKind,
}

impl ArrayConfig {
    pub fn new(
        elements_per_subarray_side: usize,
        subarrays_per_side: usize,
        element_spacing: f64,
        dislocation_budget: f64,
        frequency_hz: f64,
        structure: StructureKind,
    ) -> Result<Self, ConfigError> {
        let config = Self {
            elements_per_subarray_side,
            subarrays_per_side,
            element_spacing,
            dislocation_budget,
            frequency_hz,
            structure,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.elements_per_subarray_side < 1 {
            return Err(ConfigError::ZeroElementsPerSide);
        }
        if self.subarrays_per_side < 1 {
            return Err(ConfigError::ZeroSubarraysPerSide);
        }
        if !(self.element_spacing >= 0.5) {
            return Err(ConfigError::SpacingBelowHalfWavelength(self.element_spacing));
        }
        if !(self.dislocation_budget >= 0.0) {
            return Err(ConfigError::NegativeDislocationBudget(self.dislocation_budget));
        }
        if !(self.frequency_hz > 0.0) {
            return Err(ConfigError::NonPositiveFrequency(self.frequency_hz));
        }
        Ok(())
    }

    /// Design wavelength in meters.
    pub fn wavelength_m(&self) -> f64 {
        SPEED_OF_LIGHT / self.frequency_hz
    }

    /// Subarray footprint side `L' = M * d` (wavelengths).
    pub fn subarray_size(&self) -> f64 {
        self.elements_per_subarray_side as f64 * self.element_spacing
    }

    /// Grid cell side `L = M * d + delta_s` (wavelengths).
    pub fn grid_cell(&self) -> f64 {
        self.subarray_size() + self.dislocation_budget
    }

    /// Aperture side `L_a = N * (M * d + delta_s)` (wavelengths).
    pub fn aperture(&self) -> f64 {
        self.subarrays_per_side as f64 * self.grid_cell()
    }

    /// Elements along one array side, `M * N`.
    pub fn elements_per_side(&self) -> usize {
        self.elements_per_subarray_side * self.subarrays_per_side
    }

    /// Total element count `(M * N)^2`.
    pub fn element_count(&self) -> usize {
        self.elements_per_side() * self.elements_per_side()
    }

    pub fn subarray_count(&self) -> usize {
        self.subarrays_per_side * self.subarrays_per_side
    }

    pub fn elements_per_subarray(&self) -> usize {
        self.elements_per_subarray_side * self.elements_per_subarray_side
    }

    /// Free design coordinates for this structure: `2 N^2` dislocation
    /// coordinates (if dislocated) plus `2 M^2` shared element offsets
    /// (if randomized).
    pub fn design_len(&self) -> usize {
        let mut len = 0;
        if self.structure.has_dislocations() {
            len += 2 * self.subarray_count();
        }
        if self.structure.has_element_offsets() {
            len += 2 * self.elements_per_subarray();
        }
        len
    }

    /// Per-axis dislocation bound `delta_s / 2`.
    pub fn dislocation_bound(&self) -> f64 {
        self.dislocation_budget / 2.0
    }

    /// Per-axis element offset bound `d / 2`: each element stays inside its
    /// own `d x d` lattice cell, which keeps the zero-offset layout feasible
    /// as a repair fallback.
    pub fn offset_bound(&self) -> f64 {
        self.element_spacing / 2.0
    }
}

/// Split a fixed aperture among a subarray division so that the dislocation
/// span stays proportional to the element spacing.
///
/// Returns `(d, delta_s)` with `delta_s / d = k_ratio` and
/// `N * (M * d + delta_s) = aperture` exactly, so different divisions of the
/// same element count share one aperture.
pub fn scale_division(
    aperture: f64,
    division: (usize, usize),
    k_ratio: f64,
) -> Result<(f64, f64), ConfigError> {
    let (m, n) = division;
    if m < 1 {
        return Err(ConfigError::ZeroElementsPerSide);
    }
    if n < 1 {
        return Err(ConfigError::ZeroSubarraysPerSide);
    }
    if !(aperture > 0.0) {
        return Err(ConfigError::NonPositiveScale {
            name: "aperture",
            value: aperture,
        });
    }
    if !(k_ratio >= 0.0) {
        return Err(ConfigError::NonPositiveScale {
            name: "k_ratio",
            value: k_ratio,
        });
    }
    let d = aperture / (n as f64 * (m as f64 + k_ratio));
    Ok((d, k_ratio * d))
}
