//! Concrete array realizations: subarray grid, dislocations and shared
//! within-subarray element offsets, plus the flat optimizer encoding.
//!
//! Coordinates are wavelengths at the design frequency. The aperture square
//! spans `[0, L_a] x [0, L_a]`. Ordering is frozen for reproducible exports:
//! subarrays row-major over `(row, col)`, elements row-major within each
//! subarray, with `col` mapping to `x` and `row` mapping to `y`.

use rand::Rng;

use crate::config::ArrayConfig;
use crate::error::GeometryError;

/// Flat search-space encoding of the free coordinates of a geometry.
///
/// Layout: for dislocated structures, `2 N^2` coordinates as `(dx, dy)` pairs
/// per subarray in row-major order, then for randomized-element structures
/// `2 M^2` coordinates as `(dx, dy)` pairs per element cell in row-major
/// order. Uniform arrays encode as the empty vector.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignVector(pub Vec<f64>);

impl DesignVector {
    /// The all-zero design: the uniform reference layout of the structure.
    pub fn zeros(config: &ArrayConfig) -> Self {
        DesignVector(vec![0.0; config.design_len()])
    }

    /// Draw each coordinate uniformly within its per-axis bound.
    pub fn random(config: &ArrayConfig, rng: &mut impl Rng) -> Self {
        let coords = coordinate_bounds(config)
            .into_iter()
            .map(|b| if b > 0.0 { rng.gen_range(-b..=b) } else { 0.0 })
            .collect();
        DesignVector(coords)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Per-coordinate symmetric bounds matching the [`DesignVector`] layout:
/// `delta_s / 2` for dislocation coordinates, `d / 2` for element offsets.
pub fn coordinate_bounds(config: &ArrayConfig) -> Vec<f64> {
    let mut bounds = Vec::with_capacity(config.design_len());
    if config.structure.has_dislocations() {
        bounds.extend(std::iter::repeat(config.dislocation_bound()).take(2 * config.subarray_count()));
    }
    if config.structure.has_element_offsets() {
        bounds.extend(std::iter::repeat(config.offset_bound()).take(2 * config.elements_per_subarray()));
    }
    bounds
}

/// A concrete array realization.
///
/// Immutable after construction; safe to share across worker threads.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayGeometry {
    config: ArrayConfig,
    /// Grid cell centers, `N^2` entries, row-major.
    grid_centers: Vec<[f64; 2]>,
    /// Per-subarray dislocation, `N^2` entries; zero for Uniform/USRE.
    dislocations: Vec<[f64; 2]>,
    /// Uniform element lattice relative to the subarray center, `M^2` entries.
    element_reference: Vec<[f64; 2]>,
    /// Per-element offsets shared by every subarray, `M^2` entries; zero for
    /// Uniform/DSUE. The sharing is what licenses the factored array factor.
    element_offsets: Vec<[f64; 2]>,
}

/// Build a geometry from a design vector.
///
/// The design is taken verbatim (possibly outside the constraint bounds);
/// feasibility is the business of `check_constraints` / `repair`.
pub fn build_geometry(config: &ArrayConfig, design: &DesignVector) -> Result<ArrayGeometry, GeometryError> {
    config.validate()?;
    let expected = config.design_len();
    if design.len() != expected {
        return Err(GeometryError::LengthMismatch {
            expected,
            got: design.len(),
        });
    }
    if let Some(index) = design.0.iter().position(|c| !c.is_finite()) {
        return Err(GeometryError::NonFinite { index });
    }

    let n = config.subarrays_per_side;
    let m = config.elements_per_subarray_side;
    let cell = config.grid_cell();
    let d = config.element_spacing;

    let mut grid_centers = Vec::with_capacity(n * n);
    for row in 0..n {
        for col in 0..n {
            grid_centers.push([(col as f64 + 0.5) * cell, (row as f64 + 0.5) * cell]);
        }
    }

    let mut cursor = design.0.iter().copied();
    let mut dislocations = vec![[0.0, 0.0]; n * n];
    if config.structure.has_dislocations() {
        for slot in dislocations.iter_mut() {
            *slot = [cursor.next().unwrap(), cursor.next().unwrap()];
        }
    }

    // Element m' sits at the center of its own d x d lattice cell; the M
    // cells tile the subarray footprint L' = M * d exactly.
    let half_span = (m as f64 - 1.0) / 2.0;
    let mut element_reference = Vec::with_capacity(m * m);
    for row in 0..m {
        for col in 0..m {
            element_reference.push([(col as f64 - half_span) * d, (row as f64 - half_span) * d]);
        }
    }

    let mut element_offsets = vec![[0.0, 0.0]; m * m];
    if config.structure.has_element_offsets() {
        for slot in element_offsets.iter_mut() {
            *slot = [cursor.next().unwrap(), cursor.next().unwrap()];
        }
    }

    Ok(ArrayGeometry {
        config: *config,
        grid_centers,
        dislocations,
        element_reference,
        element_offsets,
    })
}

impl ArrayGeometry {
    pub fn config(&self) -> &ArrayConfig {
        &self.config
    }

    pub fn grid_centers(&self) -> &[[f64; 2]] {
        &self.grid_centers
    }

    pub fn dislocations(&self) -> &[[f64; 2]] {
        &self.dislocations
    }

    pub fn element_reference(&self) -> &[[f64; 2]] {
        &self.element_reference
    }

    pub fn element_offsets(&self) -> &[[f64; 2]] {
        &self.element_offsets
    }

    /// Absolute subarray positions `s = grid center + dislocation`, `N^2` entries.
    pub fn subarray_positions(&self) -> Vec<[f64; 2]> {
        self.grid_centers
            .iter()
            .zip(&self.dislocations)
            .map(|(c, t)| [c[0] + t[0], c[1] + t[1]])
            .collect()
    }

    /// Element positions relative to the subarray center,
    /// `e = reference + offset`, `M^2` entries (shared by all subarrays).
    pub fn element_positions(&self) -> Vec<[f64; 2]> {
        self.element_reference
            .iter()
            .zip(&self.element_offsets)
            .map(|(r, o)| [r[0] + o[0], r[1] + o[1]])
            .collect()
    }

    /// Absolute positions of all `(M N)^2` elements, subarray-major then
    /// element-minor, both row-major.
    pub fn flatten_positions(&self) -> Vec<[f64; 2]> {
        let subarrays = self.subarray_positions();
        let elements = self.element_positions();
        let mut out = Vec::with_capacity(subarrays.len() * elements.len());
        for s in &subarrays {
            for e in &elements {
                out.push([s[0] + e[0], s[1] + e[1]]);
            }
        }
        out
    }

    /// Recover the design vector; exact inverse of [`build_geometry`].
    pub fn encode(&self) -> DesignVector {
        let mut coords = Vec::with_capacity(self.config.design_len());
        if self.config.structure.has_dislocations() {
            for t in &self.dislocations {
                coords.push(t[0]);
                coords.push(t[1]);
            }
        }
        if self.config.structure.has_element_offsets() {
            for o in &self.element_offsets {
                coords.push(o[0]);
                coords.push(o[1]);
            }
        }
        DesignVector(coords)
    }

    /// Replace dislocations/offsets wholesale (crate-internal, used by repair).
    pub(crate) fn with_parts(&self, dislocations: Vec<[f64; 2]>, element_offsets: Vec<[f64; 2]>) -> Self {
        ArrayGeometry {
            config: self.config,
            grid_centers: self.grid_centers.clone(),
            dislocations,
            element_reference: self.element_reference.clone(),
            element_offsets,
        }
    }
}

/// Draw a random design and repair it to feasibility.
pub fn random_feasible_geometry(
    config: &ArrayConfig,
    rng: &mut impl Rng,
) -> Result<ArrayGeometry, GeometryError> {
    let design = DesignVector::random(config, rng);
    let geometry = build_geometry(config, &design)?;
    Ok(crate::constraints::repair(&geometry, rng)?)
}
