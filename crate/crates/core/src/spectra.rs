//! Spectral measures of radial functionals and the transition-matrix model.
//!
//! To each parameter `u` with `|u| <= 1` belongs a probability measure on
//! `[-1, 1]` whose moments against the radial polynomials reproduce the
//! length power function: `int p_n dmu_u = u^n`. For `0 < |u| < 1` the
//! measure has density
//!
//! ```text
//! (1/u - u)/(2 pi) * sqrt(s^2 - t^2) / ((1 - t^2)(c(u) - t))
//! ```
//!
//! on `s = 2 sqrt(r (1-r))`, `c(u) = r/u + (1-r) u`, plus a point mass at
//! `c(u)` once `|u|` exceeds `sqrt(r/(1-r))`. At `u = 0` it degenerates to
//! the Kesten measure with density `(1/(2 pi r)) sqrt(s^2 - t^2)/(1 - t^2)`,
//! and at `|u| = 1` to a single unit atom at `+-1`.
//!
//! Integration substitutes `t = s sin(theta)`, which absorbs the square-root
//! edge factor, and runs Gauss-Legendre panels graded toward `+-pi/2`; the
//! near-pole factor `c - s sin(theta)` is evaluated through its gap form so
//! the critical parameter `|u| = sqrt(r/(1-r))`, where the pole touches the
//! edge, stays accurate.
//!
//! The same `h_1` action, compressed to the normalized sphere indicators,
//! gives a symmetric tridiagonal matrix whose eigenvalue distribution
//! (weighted by spectral weights at the identity vector) converges to the
//! Kesten measure; [`spectral_histogram_distance`] quantifies that.

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::linalg;
use crate::quad::{gauss_legendre, graded_panel_boundaries, pairwise_sum};
use crate::radial::{p_eval, spectrum_edge, RadialElement};
use crate::words::{sphere_size, Rank};

/// Default Gauss-Legendre node count per quadrature panel.
pub const DEFAULT_QUADRATURE_NODES: usize = 512;

/// Tolerance for deciding atom presence at the critical parameter; the atom
/// mass vanishes analytically on the boundary, so both branches agree there.
pub const ATOM_BOUNDARY_TOLERANCE: f64 = 1e-12;

const PANEL_DEPTH: usize = 4;
const PANEL_RATIO: f64 = 4.0;

/// The spherical parameter `c(u) = r/u + (1-r) u`.
///
/// Odd in `u`, invariant under `u -> r/((1-r) u)`, and minimal over `(0, 1]`
/// at `u = sqrt(r/(1-r))` where it touches the spectral edge.
pub fn c_map(rank: Rank, u: f64) -> Result<f64> {
    if u == 0.0 || !u.is_finite() {
        return Err(Error::domain(
            "parameter map is undefined at u = 0; use the Kesten construction",
        ));
    }
    let r = rank.r_f64();
    Ok(r / u + (1.0 - r) * u)
}

/// Parameter above which the measure carries an atom: `sqrt(r/(1-r))`.
pub fn critical_parameter(rank: Rank) -> f64 {
    let r = rank.r_f64();
    (r / (1.0 - r)).sqrt()
}

/// Closed-form descriptor of the continuous part, in the angle variable
/// `t = s sin(theta)`.
#[derive(Clone, Copy, PartialEq, Debug)]
enum Kernel {
    /// `s^2 cos^2(theta) / (2 pi r G(theta))`.
    Kesten,
    /// `K s^2 cos^2(theta) / (G(theta) (c - s sin(theta)))`, the pole factor
    /// evaluated as `c_gap + s (1 - sin(theta))`.
    Haagerup { constant: f64, c_gap: f64 },
    /// The simplification when the computed gap closes (`c_gap <= 0`), where
    /// `c = s` exactly: `K s (1 + sin(theta)) / G(theta)`.
    Critical { constant: f64 },
}

/// A spectral measure: an optional continuous part on `[-s, s]` described in
/// closed form, plus finitely many point masses.
#[derive(Clone, Debug)]
pub struct SpectralMeasure {
    rank: Rank,
    u: f64,
    s: f64,
    kernel: Option<Kernel>,
    atoms: Vec<(f64, f64)>,
}

/// Stable `1 - s sin(theta)`: rewritten through `cos^2/(1 + sin)` where the
/// direct difference would cancel.
fn one_minus_s_sin(s: f64, sin_t: f64, cos_t: f64) -> f64 {
    if sin_t > 0.0 {
        (1.0 - s) + s * cos_t * cos_t / (1.0 + sin_t)
    } else {
        1.0 - s * sin_t
    }
}

fn one_plus_s_sin(s: f64, sin_t: f64, cos_t: f64) -> f64 {
    if sin_t < 0.0 {
        (1.0 - s) + s * cos_t * cos_t / (1.0 - sin_t)
    } else {
        1.0 + s * sin_t
    }
}

impl SpectralMeasure {
    /// The Kesten measure, the `u = 0` member of the family.
    pub fn kesten(rank: Rank) -> SpectralMeasure {
        SpectralMeasure {
            rank,
            u: 0.0,
            s: spectrum_edge(rank),
            kernel: Some(Kernel::Kesten),
            atoms: Vec::new(),
        }
    }

    /// The measure at parameter `u`, `|u| <= 1`; `u = 0` yields the Kesten
    /// measure and `|u| = 1` the pure atom at the matching sign.
    pub fn haagerup(rank: Rank, u: f64) -> Result<SpectralMeasure> {
        if !u.is_finite() || u.abs() > 1.0 {
            return Err(Error::domain(format!(
                "parameter u = {u} outside [-1, 1]"
            )));
        }
        if u == 0.0 {
            return Ok(SpectralMeasure::kesten(rank));
        }
        let s = spectrum_edge(rank);
        if u.abs() == 1.0 {
            return Ok(SpectralMeasure {
                rank,
                u,
                s,
                kernel: None,
                atoms: vec![(u.signum(), 1.0)],
            });
        }
        let u_abs = u.abs();
        let c_abs = c_map(rank, u_abs)?;
        let constant = (1.0 / u_abs - u_abs) / (2.0 * std::f64::consts::PI);
        let c_gap = c_abs - s;
        let kernel = if c_gap <= 0.0 {
            Kernel::Critical { constant }
        } else {
            Kernel::Haagerup { constant, c_gap }
        };
        let mut atoms = Vec::new();
        if u_abs > critical_parameter(rank) + ATOM_BOUNDARY_TOLERANCE {
            let location = c_map(rank, u)?;
            let mass = (1.0 - c_map(rank, u * u)?) / (1.0 - location * location);
            atoms.push((location, mass));
        }
        Ok(SpectralMeasure {
            rank,
            u,
            s,
            kernel: Some(kernel),
            atoms,
        })
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn parameter(&self) -> f64 {
        self.u
    }

    /// Half-width of the continuous support.
    pub fn support_edge(&self) -> f64 {
        self.s
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn has_continuous_part(&self) -> bool {
        self.kernel.is_some()
    }

    /// The integrand in the angle variable, density times `dt/dtheta`, for
    /// the unsigned parameter `|u|`; mirroring for `u < 0` happens at
    /// integration time by reflecting the evaluation point.
    fn theta_kernel(&self, theta: f64) -> f64 {
        let Some(kernel) = self.kernel else {
            return 0.0;
        };
        let (sin_t, cos_t) = theta.sin_cos();
        let s = self.s;
        let g = one_minus_s_sin(s, sin_t, cos_t) * one_plus_s_sin(s, sin_t, cos_t);
        match kernel {
            Kernel::Kesten => {
                let r = self.rank.r_f64();
                s * s * cos_t * cos_t / (2.0 * std::f64::consts::PI * r * g)
            }
            Kernel::Haagerup { constant, c_gap } => {
                let pole = if sin_t > 0.0 {
                    c_gap + s * cos_t * cos_t / (1.0 + sin_t)
                } else {
                    c_gap + s * (1.0 - sin_t)
                };
                constant * s * s * cos_t * cos_t / (g * pole)
            }
            Kernel::Critical { constant } => constant * s * (1.0 + sin_t) / g,
        }
    }

    /// Plain-form density of the continuous part at `t`; zero off the open
    /// support. Mirror symmetry `density_{-u}(t) = density_u(-t)` is exact.
    pub fn density(&self, t: f64) -> f64 {
        if self.kernel.is_none() || t.abs() >= self.s || !t.is_finite() {
            return 0.0;
        }
        let s = self.s;
        let edge = (s * s - t * t).sqrt();
        let base = edge / (1.0 - t * t);
        match self.kernel.expect("checked above") {
            Kernel::Kesten => base / (2.0 * std::f64::consts::PI * self.rank.r_f64()),
            Kernel::Haagerup { constant, c_gap } => {
                let t_signed = if self.u < 0.0 { -t } else { t };
                constant * base / (c_gap + s - t_signed)
            }
            Kernel::Critical { constant } => {
                let t_signed = if self.u < 0.0 { -t } else { t };
                constant * base / (s - t_signed)
            }
        }
    }

    /// Integrates `f` against the measure: graded-panel Gauss-Legendre for
    /// the continuous part in the angle variable, plus the atom masses.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, nodes: usize) -> Result<f64> {
        if nodes == 0 {
            return Err(Error::domain("node count must be at least 1"));
        }
        let mut pieces: Vec<f64> = Vec::with_capacity(2);
        if self.kernel.is_some() {
            let rule = gauss_legendre(nodes)?;
            let cuts =
                graded_panel_boundaries(std::f64::consts::FRAC_PI_2, PANEL_DEPTH, PANEL_RATIO);
            let sign = if self.u < 0.0 { -1.0 } else { 1.0 };
            let panel_sums: Vec<f64> = cuts
                .windows(2)
                .map(|pair| {
                    rule.integrate(pair[0], pair[1], |theta| {
                        self.theta_kernel(theta) * f(sign * self.s * theta.sin())
                    })
                })
                .collect();
            pieces.push(pairwise_sum(&panel_sums));
        }
        for &(location, mass) in &self.atoms {
            pieces.push(mass * f(location));
        }
        let total = pairwise_sum(&pieces);
        if !total.is_finite() {
            return Err(Error::numeric(
                "integrand produced non-finite values on the quadrature nodes",
            ));
        }
        Ok(total)
    }

    /// Total mass; `1` up to quadrature error for every valid parameter.
    pub fn total_mass(&self, nodes: usize) -> Result<f64> {
        self.integrate(|_| 1.0, nodes)
    }

    /// `int p_n dmu`.
    pub fn moment(&self, n: usize, nodes: usize) -> Result<f64> {
        let rank = self.rank;
        self.integrate(|t| p_eval(rank, n, t), nodes)
    }
}

/// Convenience wrapper: `int p_n dmu_u`, which the moment identity pins to
/// `u^n` (with `0^0 = 1`).
pub fn moment(rank: Rank, u: f64, n: usize, nodes: usize) -> Result<f64> {
    SpectralMeasure::haagerup(rank, u)?.moment(n, nodes)
}

/// Kesten distribution function `F(t) = mu_0([-s, t])`, by quadrature over
/// the clipped panel layout.
pub fn kesten_cdf(rank: Rank, t: f64, nodes: usize) -> Result<f64> {
    if nodes == 0 {
        return Err(Error::domain("node count must be at least 1"));
    }
    let measure = SpectralMeasure::kesten(rank);
    let s = measure.support_edge();
    let theta_max = (t / s).clamp(-1.0, 1.0).asin();
    let half = std::f64::consts::FRAC_PI_2;
    if theta_max <= -half {
        return Ok(0.0);
    }
    let rule = gauss_legendre(nodes)?;
    let mut cuts: Vec<f64> = graded_panel_boundaries(half, PANEL_DEPTH, PANEL_RATIO)
        .into_iter()
        .filter(|&b| b < theta_max)
        .collect();
    cuts.push(theta_max);
    let panel_sums: Vec<f64> = cuts
        .windows(2)
        .map(|pair| rule.integrate(pair[0], pair[1], |theta| measure.theta_kernel(theta)))
        .collect();
    Ok(pairwise_sum(&panel_sums))
}

// ------------------------------------------------------------------------
// Truncated transition matrix
// ------------------------------------------------------------------------

/// A symmetric tridiagonal matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct JacobiMatrix {
    diagonal: Vec<f64>,
    offdiagonal: Vec<f64>,
}

impl JacobiMatrix {
    pub fn new(diagonal: Vec<f64>, offdiagonal: Vec<f64>) -> Result<JacobiMatrix> {
        if diagonal.is_empty() {
            return Err(Error::domain("matrix must have at least one row"));
        }
        if offdiagonal.len() + 1 != diagonal.len() {
            return Err(Error::domain(format!(
                "off-diagonal length {} does not match dimension {}",
                offdiagonal.len(),
                diagonal.len()
            )));
        }
        if diagonal
            .iter()
            .chain(offdiagonal.iter())
            .any(|v| !v.is_finite())
        {
            return Err(Error::numeric("matrix entries must be finite"));
        }
        Ok(JacobiMatrix {
            diagonal,
            offdiagonal,
        })
    }

    pub fn dimension(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn offdiagonal(&self) -> &[f64] {
        &self.offdiagonal
    }
}

/// Compression of the `h_1` action to the first `n` normalized sphere
/// indicators. Each entry is computed from the exact rational action on
/// indicator elements and converted once at the end; nothing is hard-coded.
pub fn radial_jacobi_matrix(rank: Rank, n: usize) -> Result<JacobiMatrix> {
    if n < 2 {
        return Err(Error::domain("truncation dimension must be at least 2"));
    }
    let mut diagonal = Vec::with_capacity(n);
    let mut offdiagonal = Vec::with_capacity(n - 1);
    for k in 0..n {
        let size_k = BigRational::from_integer(sphere_size(rank, k).into());
        // Exact action on the indicator 1_{G_k} = |G_k| h_k.
        let image = RadialElement::h(rank, k).scale(&size_k).mul_h1();
        let diag = image.coeff(k).to_f64().ok_or_else(|| {
            Error::numeric("diagonal entry does not fit in floating point")
        })?;
        diagonal.push(diag);
        if k + 1 < n {
            let size_up = BigRational::from_integer(sphere_size(rank, k + 1).into());
            // Coefficient on 1_{G_{k+1}} is coeff(k+1)/|G_{k+1}|; the change
            // to the normalized basis multiplies by sqrt(|G_{k+1}|/|G_k|).
            // Squaring keeps the arithmetic exact until a single sqrt.
            let coeff = image.coeff(k + 1) / &size_up;
            let entry_sq = &coeff * &coeff * &size_up / &size_k;
            let entry = entry_sq
                .to_f64()
                .ok_or_else(|| Error::numeric("entry does not fit in floating point"))?
                .sqrt();
            offdiagonal.push(entry);
        }
    }
    JacobiMatrix::new(diagonal, offdiagonal)
}

/// All eigenvalues, ascending, by Sturm-sequence bisection.
pub fn tridiag_eigenvalues(matrix: &JacobiMatrix) -> Result<Vec<f64>> {
    linalg::tridiagonal_eigenvalues(&matrix.diagonal, &matrix.offdiagonal)
}

/// Spectral weights of the truncation at the first basis vector: for each
/// eigenvalue, `1 / sum_i q_i(lambda)^2` with `q_i` the orthonormal
/// three-term recurrence. These are the masses the truncated matrix assigns
/// to its eigenvalues when viewed from the identity vector, and they are
/// the Gauss weights of the underlying measure.
pub fn christoffel_weights(matrix: &JacobiMatrix, eigenvalues: &[f64]) -> Vec<f64> {
    let a = &matrix.diagonal;
    let b = &matrix.offdiagonal;
    eigenvalues
        .iter()
        .map(|&lambda| {
            let mut prev = 0.0f64;
            let mut cur = 1.0f64;
            let mut sum_sq = 1.0f64;
            for i in 0..b.len() {
                let next = ((lambda - a[i]) * cur - if i > 0 { b[i - 1] * prev } else { 0.0 })
                    / b[i];
                prev = cur;
                cur = next;
                sum_sq += cur * cur;
            }
            1.0 / sum_sq
        })
        .collect()
}

/// Sup distance, over `bins + 1` equispaced edges spanning the continuous
/// support, between a weighted empirical distribution (ascending points
/// with probability weights) and the Kesten distribution function.
pub fn weighted_cdf_distance(
    rank: Rank,
    points: &[f64],
    weights: &[f64],
    bins: usize,
    nodes: usize,
) -> Result<f64> {
    if bins == 0 {
        return Err(Error::domain("bin count must be at least 1"));
    }
    if points.len() != weights.len() {
        return Err(Error::domain("points and weights differ in length"));
    }
    let s = spectrum_edge(rank);
    let mut distance = 0.0f64;
    let mut cursor = 0usize;
    let mut empirical = 0.0f64;
    for j in 0..=bins {
        let edge = -s + 2.0 * s * j as f64 / bins as f64;
        while cursor < points.len() && points[cursor] <= edge {
            empirical += weights[cursor];
            cursor += 1;
        }
        let reference = kesten_cdf(rank, edge, nodes)?;
        distance = distance.max((empirical - reference).abs());
    }
    Ok(distance)
}

/// The distance above for the weighted spectral distribution of the
/// order-`n` truncation, weights taken at the identity vector.
pub fn spectral_histogram_distance(
    rank: Rank,
    n: usize,
    bins: usize,
    nodes: usize,
) -> Result<f64> {
    if n < 100 {
        return Err(Error::domain("truncation dimension must be at least 100"));
    }
    let matrix = radial_jacobi_matrix(rank, n)?;
    let eigenvalues = tridiag_eigenvalues(&matrix)?;
    let weights = christoffel_weights(&matrix, &eigenvalues);
    weighted_cdf_distance(rank, &eigenvalues, &weights, bins, nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_algebra::elementary_radial;
    use crate::words::DEFAULT_ENUMERATION_CAP as CAP;

    const NODES: usize = 512;

    fn rank(l: usize) -> Rank {
        Rank::new(l).unwrap()
    }

    #[test]
    fn parameter_map_matches_closed_values() {
        assert_eq!(c_map(rank(2), 1.0).unwrap(), 1.0);
        assert!((c_map(rank(2), 0.8).unwrap() - 0.9125).abs() < 1e-15);
        let crit = critical_parameter(rank(2));
        assert!((crit - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((c_map(rank(2), crit).unwrap() - 3.0f64.sqrt() / 2.0).abs() < 1e-15);
        assert!(c_map(rank(2), 0.0).is_err());
        // Oddness is exact in floating point.
        for u in [0.3, 0.577, 0.9, 1.0] {
            assert_eq!(c_map(rank(2), -u).unwrap(), -c_map(rank(2), u).unwrap());
        }
        // Composition symmetry u -> r/((1-r) u).
        let r = rank(2).r_f64();
        for u in [0.2, 0.5, 0.9] {
            let partner = r / ((1.0 - r) * u);
            let a = c_map(rank(2), u).unwrap();
            let b = c_map(rank(2), partner).unwrap();
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn atom_presence_follows_the_critical_parameter() {
        let with_atom = SpectralMeasure::haagerup(rank(2), 0.8).unwrap();
        assert_eq!(with_atom.atoms().len(), 1);
        let (location, mass) = with_atom.atoms()[0];
        assert!((location - 0.9125).abs() < 1e-15);
        assert!((mass - 92.0 / 119.0).abs() < 1e-12);

        let without = SpectralMeasure::haagerup(rank(2), 0.3).unwrap();
        assert!(without.atoms().is_empty());

        // Exactly at the boundary no atom is attached, and nothing is lost:
        // the formula mass vanishes there.
        let boundary = SpectralMeasure::haagerup(rank(2), critical_parameter(rank(2))).unwrap();
        assert!(boundary.atoms().is_empty());
        assert!((boundary.total_mass(NODES).unwrap() - 1.0).abs() <= 1e-8);

        let negative = SpectralMeasure::haagerup(rank(2), -0.8).unwrap();
        assert!((negative.atoms()[0].0 + 0.9125).abs() < 1e-15);
        assert!((negative.atoms()[0].1 - mass).abs() < 1e-15);
    }

    #[test]
    fn unit_parameter_is_a_pure_atom() {
        for sign in [1.0, -1.0] {
            let measure = SpectralMeasure::haagerup(rank(2), sign).unwrap();
            assert!(!measure.has_continuous_part());
            assert_eq!(measure.atoms(), &[(sign, 1.0)]);
            let mean = measure.integrate(|t| t, NODES).unwrap();
            assert_eq!(mean, sign);
        }
    }

    #[test]
    fn out_of_range_parameters_are_rejected() {
        assert!(SpectralMeasure::haagerup(rank(2), 1.0 + 1e-9).is_err());
        assert!(SpectralMeasure::haagerup(rank(2), f64::NAN).is_err());
        assert!(SpectralMeasure::haagerup(rank(2), f64::INFINITY).is_err());
    }

    #[test]
    fn kesten_moments_match_exact_traces() {
        let kesten = SpectralMeasure::kesten(rank(2));
        assert!(kesten.atoms().is_empty());
        assert!((kesten.total_mass(NODES).unwrap() - 1.0).abs() <= 1e-8);
        let mean = kesten.integrate(|t| t, NODES).unwrap();
        assert!(mean.abs() <= 1e-8);
        // int t^2 dmu_0 = trace(h_1 h_1) = r.
        let second = kesten.integrate(|t| t * t, NODES).unwrap();
        assert!((second - 0.25).abs() <= 1e-8);
    }

    #[test]
    fn moments_reproduce_parameter_powers() {
        for l in [2, 3] {
            let crit = critical_parameter(rank(l));
            for u in [0.3, -0.3, crit, -crit, 0.8, 0.95] {
                for n in 0..=10 {
                    let value = moment(rank(l), u, n, NODES).unwrap();
                    let expected = u.powi(n as i32);
                    assert!(
                        (value - expected).abs() <= 1e-8,
                        "l={l} u={u} n={n}: {value} vs {expected}"
                    );
                }
            }
        }
        let spot = moment(rank(2), 0.3, 4, NODES).unwrap();
        assert!((spot - 0.0081).abs() <= 1e-8);
    }

    #[test]
    fn density_mirrors_under_parameter_negation() {
        let plus = SpectralMeasure::haagerup(rank(2), 0.4).unwrap();
        let minus = SpectralMeasure::haagerup(rank(2), -0.4).unwrap();
        for t in [-0.8, -0.5, -0.1, 0.0, 0.3, 0.7, 0.86] {
            assert_eq!(plus.density(t), minus.density(-t));
        }
        assert_eq!(plus.density(2.0), 0.0);
        assert!(plus.density(0.0) > 0.0);
    }

    #[test]
    fn non_finite_integrands_are_reported() {
        let kesten = SpectralMeasure::kesten(rank(2));
        let err = kesten.integrate(|_| f64::NAN, NODES).unwrap_err();
        assert!(matches!(err, Error::Numeric(_)));
    }

    #[test]
    fn transition_entries_match_closed_forms_and_the_convolution_oracle() {
        let matrix = radial_jacobi_matrix(rank(2), 10).unwrap();
        assert!(matrix.diagonal().iter().all(|&d| d == 0.0));
        let r = rank(2).r_f64();
        assert!((matrix.offdiagonal()[0] - r.sqrt()).abs() <= 1e-14);
        for k in 1..9 {
            assert!((matrix.offdiagonal()[k] - (r * (1.0 - r)).sqrt()).abs() <= 1e-14);
        }

        let one = radial_jacobi_matrix(rank(1), 3).unwrap();
        assert!((one.offdiagonal()[0] - 0.5f64.sqrt()).abs() <= 1e-14);
        assert!((one.offdiagonal()[1] - 0.5).abs() <= 1e-14);

        // Brute-force oracle: convolve h_1 against the indicator of G_k and
        // read the normalized component on G_{k+1}.
        for l in [2usize, 3] {
            let rk = rank(l);
            let matrix = radial_jacobi_matrix(rk, 4).unwrap();
            let h1 = elementary_radial(rk, 1, CAP).unwrap();
            for k in 0..3usize {
                let size_k = BigRational::from_integer(sphere_size(rk, k).into());
                let size_up = BigRational::from_integer(sphere_size(rk, k + 1).into());
                let indicator = elementary_radial(rk, k, CAP).unwrap().scale(&size_k);
                let image = h1.convolve(&indicator).unwrap().radialize();
                let coeff = image.coeff(k + 1) / &size_up;
                let oracle = (&coeff * &coeff * &size_up / &size_k)
                    .to_f64()
                    .unwrap()
                    .sqrt();
                assert!(
                    (matrix.offdiagonal()[k] - oracle).abs() <= 1e-14,
                    "l={l} k={k}"
                );
            }
        }
    }

    #[test]
    fn small_truncations_have_known_spectra() {
        let pair = JacobiMatrix::new(vec![0.0, 0.0], vec![0.3]).unwrap();
        let eig = tridiag_eigenvalues(&pair).unwrap();
        assert!((eig[0] + 0.3).abs() < 1e-12);
        assert!((eig[1] - 0.3).abs() < 1e-12);
        let single = JacobiMatrix::new(vec![0.0], vec![]).unwrap();
        assert_eq!(tridiag_eigenvalues(&single).unwrap(), vec![0.0]);
        assert!(JacobiMatrix::new(vec![0.0], vec![1.0]).is_err());
        assert!(JacobiMatrix::new(vec![f64::NAN], vec![]).is_err());
        assert!(radial_jacobi_matrix(rank(2), 1).is_err());
    }

    #[test]
    fn truncated_spectrum_stays_inside_the_edge_band() {
        let matrix = radial_jacobi_matrix(rank(2), 500).unwrap();
        let eig = tridiag_eigenvalues(&matrix).unwrap();
        let edge = spectrum_edge(rank(2));
        assert_eq!(eig.len(), 500);
        assert!(eig.first().unwrap() >= &(-edge - 1e-10));
        assert!(eig.last().unwrap() <= &(edge + 1e-10));
        assert!(eig.last().unwrap() >= &0.86);
    }

    #[test]
    fn spectral_weights_form_a_probability_vector() {
        let matrix = radial_jacobi_matrix(rank(2), 120).unwrap();
        let eig = tridiag_eigenvalues(&matrix).unwrap();
        let weights = christoffel_weights(&matrix, &eig);
        assert!(weights.iter().all(|&w| w > 0.0));
        let total: f64 = weights.iter().sum();
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn weighted_spectrum_tracks_the_kesten_distribution() {
        let distance = spectral_histogram_distance(rank(2), 200, 40, NODES).unwrap();
        assert!(distance <= 0.05, "distance {distance}");
        assert!(spectral_histogram_distance(rank(2), 50, 40, NODES).is_err());
    }

    #[test]
    fn kesten_cdf_is_monotone_and_normalized() {
        let s = spectrum_edge(rank(2));
        assert_eq!(kesten_cdf(rank(2), -s - 0.1, NODES).unwrap(), 0.0);
        let full = kesten_cdf(rank(2), s, NODES).unwrap();
        assert!((full - 1.0).abs() <= 1e-8);
        let mut prev = 0.0;
        for j in 0..=20 {
            let t = -s + 2.0 * s * j as f64 / 20.0;
            let value = kesten_cdf(rank(2), t, NODES).unwrap();
            assert!(value + 1e-12 >= prev);
            prev = value;
        }
        // Midpoint is one half by symmetry.
        assert!((kesten_cdf(rank(2), 0.0, NODES).unwrap() - 0.5).abs() <= 1e-8);
    }
}
