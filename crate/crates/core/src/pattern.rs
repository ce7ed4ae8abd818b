//! Array-factor evaluation over direction space and peak-sidelobe extraction.
//!
//! Directions are direction cosines `u = sin(theta) cos(phi)`,
//! `v = sin(theta) sin(phi)`; the visible region is the closed unit disk.
//! With unit excitation the array factor is the plain phase sum
//! `AF = sum exp(j k [x (u - u0) + y (v - v0)])` over element positions in
//! wavelengths, so steering appears as a rigid shift in u–v space. When all
//! subarrays share one element layout the sum factors into the subarray
//! position factor times the subarray factor, which is what the sampler uses.
//!
//! Magnitudes are stored linearly; dB conversion happens at reporting only.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ArrayConfig;
use crate::error::PatternError;
use crate::geometry::ArrayGeometry;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Floor applied when converting zero magnitudes to dB.
pub const DB_FLOOR: f64 = -300.0;

/// Main-lobe steering direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Steering {
    theta: f64,
    phi: f64,
    u0: f64,
    v0: f64,
}

impl Steering {
    /// Angles in radians; `theta` must lie in `[0, pi/2]`.
    pub fn new(theta: f64, phi: f64) -> Result<Self, PatternError> {
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
            return Err(PatternError::InvalidSteering { theta });
        }
        Ok(Steering {
            theta,
            phi,
            u0: theta.sin() * phi.cos(),
            v0: theta.sin() * phi.sin(),
        })
    }

    pub fn from_degrees(theta_deg: f64, phi_deg: f64) -> Result<Self, PatternError> {
        Steering::new(theta_deg.to_radians(), phi_deg.to_radians())
    }

    pub fn broadside() -> Self {
        Steering { theta: 0.0, phi: 0.0, u0: 0.0, v0: 0.0 }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn theta_deg(&self) -> f64 {
        self.theta.to_degrees()
    }

    pub fn phi_deg(&self) -> f64 {
        self.phi.to_degrees()
    }

    pub fn u0(&self) -> f64 {
        self.u0
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }
}

/// Uniform-lattice direction samples (pitch `du`, nodes at integer multiples,
/// so halving the pitch yields a superset of the samples).
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionGrid {
    du: f64,
    samples: Vec<[f64; 2]>,
}

impl DirectionGrid {
    /// Lattice covering the closed unit disk.
    pub fn disk(du: f64) -> Result<Self, PatternError> {
        Self::build(du, false)
    }

    /// Lattice cut along the u axis (`v = 0`), for effectively linear arrays.
    pub fn u_axis(du: f64) -> Result<Self, PatternError> {
        Self::build(du, true)
    }

    fn build(du: f64, axis_only: bool) -> Result<Self, PatternError> {
        if !(du > 0.0) || !du.is_finite() {
            return Err(PatternError::InvalidResolution(du));
        }
        let n = (1.0 / du).floor() as i64 + 1;
        let mut samples = Vec::new();
        let vs: Vec<i64> = if axis_only { vec![0] } else { (-n..=n).collect() };
        for &j in &vs {
            let v = j as f64 * du;
            for i in -n..=n {
                let u = i as f64 * du;
                if u * u + v * v <= 1.0 {
                    samples.push([u, v]);
                }
            }
        }
        Ok(DirectionGrid { du, samples })
    }

    pub fn du(&self) -> f64 {
        self.du
    }

    pub fn samples(&self) -> &[[f64; 2]] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Default reporting pitch `lambda / (8 L_a)`: at least ~8 samples across a
/// beamwidth so the sidelobe maximum is not aliased.
pub fn default_grid_du(config: &ArrayConfig) -> f64 {
    1.0 / (8.0 * config.aperture())
}

/// Coarser optimization-time pitch `lambda / (4 L_a)`.
pub fn coarse_grid_du(config: &ArrayConfig) -> f64 {
    1.0 / (4.0 * config.aperture())
}

/// Main-lobe mask radius `2 lambda / L_a` around the steering direction,
/// covering the main lobe of the uniform square aperture out to its second
/// axial null. Reproducible, unlike peak-walking heuristics.
pub fn default_mask_radius(config: &ArrayConfig) -> f64 {
    2.0 / config.aperture()
}

// ── evaluators ──────────────────────────────────────────────────────────────

fn phase_sum(points: &[[f64; 2]], k: f64, du: f64, dv: f64) -> Complex64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for p in points {
        let (sin, cos) = (k * (p[0] * du + p[1] * dv)).sin_cos();
        re += cos;
        im += sin;
    }
    Complex64::new(re, im)
}

/// Evaluates the array factor at a steering-shifted direction `(du, dv)`.
trait AfEval: Sync {
    fn af_shifted(&self, du: f64, dv: f64) -> Complex64;
}

/// Factored form: subarray position factor times subarray factor.
struct FactoredAf {
    subarrays: Vec<[f64; 2]>,
    elements: Vec<[f64; 2]>,
    k: f64,
}

impl FactoredAf {
    fn new(geometry: &ArrayGeometry, freq_scale: f64) -> Self {
        FactoredAf {
            subarrays: geometry.subarray_positions(),
            elements: geometry.element_positions(),
            k: TWO_PI * freq_scale,
        }
    }
}

impl AfEval for FactoredAf {
    fn af_shifted(&self, du: f64, dv: f64) -> Complex64 {
        phase_sum(&self.subarrays, self.k, du, dv) * phase_sum(&self.elements, self.k, du, dv)
    }
}

/// Direct form: one phase term per element.
struct DirectAf {
    positions: Vec<[f64; 2]>,
    k: f64,
}

impl AfEval for DirectAf {
    fn af_shifted(&self, du: f64, dv: f64) -> Complex64 {
        phase_sum(&self.positions, self.k, du, dv)
    }
}

/// Array factor via the element-by-element sum. Directions outside the unit
/// disk are permitted (useful for testing); they are simply not visible.
pub fn af_direct(geometry: &ArrayGeometry, steering: &Steering, u: f64, v: f64) -> Complex64 {
    af_positions(&geometry.flatten_positions(), steering, u, v)
}

/// Array factor of an explicit element-position list (wavelength units).
pub fn af_positions(positions: &[[f64; 2]], steering: &Steering, u: f64, v: f64) -> Complex64 {
    phase_sum(positions, TWO_PI, u - steering.u0, v - steering.v0)
}

/// Array factor via the subarray-position/subarray factorization; equals
/// [`af_direct`] to round-off because all subarrays share one element layout.
pub fn af_factored(geometry: &ArrayGeometry, steering: &Steering, u: f64, v: f64) -> Complex64 {
    FactoredAf::new(geometry, 1.0).af_shifted(u - steering.u0, v - steering.v0)
}

// ── sampled patterns ────────────────────────────────────────────────────────

/// Sampled array-factor magnitudes with steering metadata and main-lobe mask.
#[derive(Debug, Clone)]
pub struct PatternGrid {
    pub du: f64,
    pub samples: Vec<[f64; 2]>,
    pub steering: Steering,
    /// Linear |AF| per sample.
    pub magnitudes: Vec<f64>,
    /// |AF| evaluated exactly at the steering direction (the element count at
    /// unit excitation), so normalization is grid-independent.
    pub main_peak: f64,
    pub mask_radius: f64,
}

fn on_lattice(du: f64, u0: f64, v0: f64) -> bool {
    let near = |x: f64| ((x / du).round() * du - x).abs() < 1e-12;
    near(u0) && near(v0)
}

fn sample_impl<E: AfEval>(
    eval: &E,
    grid: &DirectionGrid,
    steering: &Steering,
    mask_radius: f64,
) -> PatternGrid {
    let (u0, v0) = (steering.u0, steering.v0);
    let mut samples = grid.samples.clone();
    let mut magnitudes: Vec<f64> = samples
        .par_iter()
        .map(|s| eval.af_shifted(s[0] - u0, s[1] - v0).norm())
        .collect();
    let main_peak = eval.af_shifted(0.0, 0.0).norm();
    if !on_lattice(grid.du, u0, v0) {
        samples.push([u0, v0]);
        magnitudes.push(main_peak);
    }
    PatternGrid {
        du: grid.du,
        samples,
        steering: *steering,
        magnitudes,
        main_peak,
        mask_radius,
    }
}

/// Sample the factored array factor over a grid with the default mask.
pub fn sample_pattern(
    geometry: &ArrayGeometry,
    steering: &Steering,
    grid: &DirectionGrid,
) -> PatternGrid {
    sample_impl(
        &FactoredAf::new(geometry, 1.0),
        grid,
        steering,
        default_mask_radius(geometry.config()),
    )
}

/// Sample the pattern of an explicit position list with an explicit mask.
pub fn sample_pattern_positions(
    positions: &[[f64; 2]],
    steering: &Steering,
    grid: &DirectionGrid,
    mask_radius: f64,
) -> PatternGrid {
    let eval = DirectAf { positions: positions.to_vec(), k: TWO_PI };
    sample_impl(&eval, grid, steering, mask_radius)
}

// ── peak sidelobe extraction ────────────────────────────────────────────────

/// Peak sidelobe: level and u–v location of the unmasked maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SidelobePeak {
    pub psll_db: f64,
    /// Peak |AF| / AF_main, the linear ratio the optimizer minimizes.
    pub linear_ratio: f64,
    pub u: f64,
    pub v: f64,
}

fn to_db(ratio: f64) -> f64 {
    if ratio > 0.0 {
        (20.0 * ratio.log10()).max(DB_FLOOR)
    } else {
        DB_FLOOR
    }
}

/// Reduce to the largest magnitude, ties to the lowest sample index so the
/// result does not depend on work splitting.
fn max_sample(
    a: Option<(f64, usize)>,
    b: Option<(f64, usize)>,
) -> Option<(f64, usize)> {
    match (a, b) {
        (Some(x), Some(y)) => {
            if x.0 > y.0 || (x.0 == y.0 && x.1 < y.1) {
                Some(x)
            } else {
                Some(y)
            }
        }
        (x, None) => x,
        (None, y) => y,
    }
}

fn masked(s: [f64; 2], u0: f64, v0: f64, mask_radius: f64) -> bool {
    let d2 = (s[0] - u0).powi(2) + (s[1] - v0).powi(2);
    d2 <= mask_radius * mask_radius
}

/// Peak sidelobe of an already-sampled pattern (lattice samples only).
pub fn psll(pattern: &PatternGrid) -> Result<SidelobePeak, PatternError> {
    let (u0, v0) = (pattern.steering.u0, pattern.steering.v0);
    let best = pattern
        .samples
        .par_iter()
        .zip(pattern.magnitudes.par_iter())
        .enumerate()
        .map(|(i, (s, &m))| {
            if masked(*s, u0, v0, pattern.mask_radius) {
                None
            } else {
                Some((m, i))
            }
        })
        .reduce(|| None, max_sample);
    let (value, index) = best.ok_or(PatternError::EmptySidelobeRegion)?;
    let ratio = value / pattern.main_peak;
    Ok(SidelobePeak {
        psll_db: to_db(ratio),
        linear_ratio: ratio,
        u: pattern.samples[index][0],
        v: pattern.samples[index][1],
    })
}

fn peak_over_grid<E: AfEval>(
    eval: &E,
    grid: &DirectionGrid,
    steering: &Steering,
    mask_radius: f64,
) -> Result<(SidelobePeak, f64), PatternError> {
    if grid.is_empty() {
        return Err(PatternError::EmptyGrid);
    }
    let (u0, v0) = (steering.u0, steering.v0);
    let main_peak = eval.af_shifted(0.0, 0.0).norm();
    let best = grid
        .samples
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            if masked(*s, u0, v0, mask_radius) {
                None
            } else {
                Some((eval.af_shifted(s[0] - u0, s[1] - v0).norm(), i))
            }
        })
        .reduce(|| None, max_sample);
    let (value, index) = best.ok_or(PatternError::EmptySidelobeRegion)?;
    let ratio = value / main_peak;
    let s = grid.samples[index];
    Ok((
        SidelobePeak { psll_db: to_db(ratio), linear_ratio: ratio, u: s[0], v: s[1] },
        main_peak,
    ))
}

/// One local refinement pass: a 3x3 sub-lattice at a quarter of the grid
/// pitch around the lattice argmax, sharpening the reported level at bounded
/// cost.
fn refine_peak<E: AfEval>(
    eval: &E,
    steering: &Steering,
    mask_radius: f64,
    du: f64,
    base: SidelobePeak,
    main_peak: f64,
) -> SidelobePeak {
    let (u0, v0) = (steering.u0, steering.v0);
    let mut best = base;
    let step = du / 4.0;
    for i in -1i32..=1 {
        for j in -1i32..=1 {
            if i == 0 && j == 0 {
                continue;
            }
            let u = base.u + i as f64 * step;
            let v = base.v + j as f64 * step;
            if u * u + v * v > 1.0 || masked([u, v], u0, v0, mask_radius) {
                continue;
            }
            let ratio = eval.af_shifted(u - u0, v - v0).norm() / main_peak;
            if ratio > best.linear_ratio {
                best = SidelobePeak { psll_db: to_db(ratio), linear_ratio: ratio, u, v };
            }
        }
    }
    best
}

/// Peak sidelobe ratio of a geometry over a grid, lattice samples only; this
/// is the optimizer's objective path.
pub fn peak_sidelobe_ratio(
    geometry: &ArrayGeometry,
    steering: &Steering,
    grid: &DirectionGrid,
    mask_radius: f64,
) -> Result<SidelobePeak, PatternError> {
    let eval = FactoredAf::new(geometry, 1.0);
    Ok(peak_over_grid(&eval, grid, steering, mask_radius)?.0)
}

/// Reporting metadata for one peak-sidelobe measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsllReport {
    pub psll_db: f64,
    pub peak_u: f64,
    pub peak_v: f64,
    pub mask_radius: f64,
    pub grid_du: f64,
    pub steering_theta_deg: f64,
    pub steering_phi_deg: f64,
}

fn report_impl<E: AfEval>(
    eval: &E,
    steering: &Steering,
    grid: &DirectionGrid,
    mask_radius: f64,
) -> Result<PsllReport, PatternError> {
    let (base, main_peak) = peak_over_grid(eval, grid, steering, mask_radius)?;
    let peak = refine_peak(eval, steering, mask_radius, grid.du, base, main_peak);
    Ok(PsllReport {
        psll_db: peak.psll_db,
        peak_u: peak.u,
        peak_v: peak.v,
        mask_radius,
        grid_du: grid.du,
        steering_theta_deg: steering.theta_deg(),
        steering_phi_deg: steering.phi_deg(),
    })
}

/// Refined peak-sidelobe report with the default mask.
pub fn psll_report(
    geometry: &ArrayGeometry,
    steering: &Steering,
    grid: &DirectionGrid,
) -> Result<PsllReport, PatternError> {
    let eval = FactoredAf::new(geometry, 1.0);
    report_impl(&eval, steering, grid, default_mask_radius(geometry.config()))
}

/// Refined peak-sidelobe report for an explicit position list.
pub fn psll_report_positions(
    positions: &[[f64; 2]],
    steering: &Steering,
    grid: &DirectionGrid,
    mask_radius: f64,
) -> Result<PsllReport, PatternError> {
    let eval = DirectAf { positions: positions.to_vec(), k: TWO_PI };
    report_impl(&eval, steering, grid, mask_radius)
}

/// Peak sidelobe level per steering over the full visible region.
pub fn scan_sweep(
    geometry: &ArrayGeometry,
    steerings: &[Steering],
    grid: &DirectionGrid,
) -> Result<Vec<(Steering, f64)>, PatternError> {
    let eval = FactoredAf::new(geometry, 1.0);
    let mask = default_mask_radius(geometry.config());
    steerings
        .iter()
        .map(|s| Ok((*s, report_impl(&eval, s, grid, mask)?.psll_db)))
        .collect()
}

/// Peak sidelobe level per frequency, with geometry coordinates held fixed in
/// meters: wavelength-relative coordinates rescale by `f / f_design`, and the
/// mask tracks the aperture measured in wavelengths at each frequency.
pub fn frequency_sweep(
    geometry: &ArrayGeometry,
    frequencies_hz: &[f64],
    steering: &Steering,
    grid: &DirectionGrid,
) -> Result<Vec<(f64, f64)>, PatternError> {
    let f_design = geometry.config().frequency_hz;
    let aperture = geometry.config().aperture();
    frequencies_hz
        .iter()
        .map(|&f| {
            if !(f > 0.0) {
                return Err(PatternError::InvalidFrequency(f));
            }
            let scale = f / f_design;
            let eval = FactoredAf::new(geometry, scale);
            let mask = 2.0 / (aperture * scale);
            Ok((f, report_impl(&eval, steering, grid, mask)?.psll_db))
        })
        .collect()
}
