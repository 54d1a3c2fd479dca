//! The radial subalgebra and its polynomial calculus.
//!
//! Radial elements are rational combinations of the sphere averages `h_n`.
//! The single relation
//!
//! ```text
//! h_1 h_n = r h_{n-1} + (1 - r) h_{n+1}      (n >= 1, r = 1/(2l))
//! ```
//!
//! makes the radial subalgebra a polynomial algebra in `h_1`: there is a
//! unique degree-`n` rational polynomial `p_n` with `h_n = p_n(h_1)`,
//! obtained from `p_0 = 1`, `p_1 = t` and `t p_n = r p_{n-1} + (1-r) p_{n+1}`.
//! The same family arises as the coefficients of the generating function
//!
//! ```text
//! sum p_n(t) z^n = (1 - r - r t z) / (1 - r - t z + r z^2),
//! ```
//!
//! which [`genfun_coeffs`] expands by formal power-series division as an
//! independent route to the same polynomials.
//!
//! Evaluating `p_n` at a parameter `c` gives the spherical function
//! `g -> p_{|g|}(c)`. Which functional-analytic properties the pair `(c, r)`
//! enjoys is decided by [`classify_parameter`]; positive definiteness can be
//! certified concretely on any finite ball through the Gram matrix
//! `M[g,h] = phi(g^-1 h)` and its minimum eigenvalue.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::group_algebra::{
    bigint_to_number, elementary_radial, number_to_bigint, AlgebraElement, Sign,
};
use crate::linalg;
use crate::words::{ball, Rank, Word};

/// Half-width of the principal spectral interval, `2 sqrt(r (1 - r))`.
pub fn spectrum_edge(rank: Rank) -> f64 {
    let r = rank.r_f64();
    2.0 * (r * (1.0 - r)).sqrt()
}

// ------------------------------------------------------------------------
// Exact polynomials
// ------------------------------------------------------------------------

/// A polynomial with exact rational coefficients, stored low degree first
/// with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

impl RationalPoly {
    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    pub fn constant(value: BigRational) -> Self {
        RationalPoly::from_coeffs(vec![value])
    }

    pub fn one() -> Self {
        RationalPoly::constant(BigRational::one())
    }

    /// The monomial `t`.
    pub fn t() -> Self {
        RationalPoly::from_coeffs(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &RationalPoly) -> RationalPoly {
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len().max(other.coeffs.len())];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k] += c;
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            coeffs[k] += c;
        }
        RationalPoly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &RationalPoly) -> RationalPoly {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, factor: &BigRational) -> RationalPoly {
        if factor.is_zero() {
            return RationalPoly::zero();
        }
        RationalPoly {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn mul(&self, other: &RationalPoly) -> RationalPoly {
        if self.is_zero() || other.is_zero() {
            return RationalPoly::zero();
        }
        let mut coeffs =
            vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        RationalPoly::from_coeffs(coeffs)
    }

    /// Multiplication by the monomial `t`.
    pub fn shift_up(&self) -> RationalPoly {
        if self.is_zero() {
            return RationalPoly::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(BigRational::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        RationalPoly { coeffs }
    }

    /// Horner evaluation in floating point.
    pub fn eval_f64(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    pub fn eval_rational(&self, t: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }
}

/// The polynomials `p_0, ..., p_n` from the three-term recurrence, exact.
pub fn p_polys(rank: Rank, n: usize) -> Vec<RationalPoly> {
    let r = rank.r();
    let one_minus_r = rank.one_minus_r();
    let mut polys = Vec::with_capacity(n + 1);
    polys.push(RationalPoly::one());
    if n >= 1 {
        polys.push(RationalPoly::t());
    }
    for k in 1..n {
        // p_{k+1} = (t p_k - r p_{k-1}) / (1 - r)
        let next = polys[k]
            .shift_up()
            .sub(&polys[k - 1].scale(&r))
            .scale(&one_minus_r.recip());
        polys.push(next);
    }
    polys
}

pub fn p_poly(rank: Rank, n: usize) -> RationalPoly {
    p_polys(rank, n).pop().expect("vector is nonempty")
}

/// Expands the generating function
/// `(1 - r - r t z) / (1 - r - t z + r z^2)` as a power series in `z` with
/// polynomial coefficients, by long division of formal series. This route
/// never touches the three-term recurrence for the `p_n`, so comparing it
/// against [`p_polys`] is a genuine cross-check.
pub fn genfun_coeffs(rank: Rank, n_max: usize) -> Vec<RationalPoly> {
    let r = rank.r();
    let one_minus_r = RationalPoly::constant(rank.one_minus_r());
    // Numerator: (1 - r) - r t z.
    let numerator = [
        one_minus_r.clone(),
        RationalPoly::t().scale(&-r.clone()),
    ];
    // Denominator: (1 - r) - t z + r z^2.
    let denominator = [
        one_minus_r,
        RationalPoly::t().scale(&-BigRational::one()),
        RationalPoly::constant(r.clone()),
    ];
    let lead = rank.one_minus_r().recip();
    let mut series: Vec<RationalPoly> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        // q_n = (num_n - sum_{k=1..2} den_k q_{n-k}) / den_0
        let mut acc = if n < numerator.len() {
            numerator[n].clone()
        } else {
            RationalPoly::zero()
        };
        for k in 1..denominator.len() {
            if k <= n {
                acc = acc.sub(&denominator[k].mul(&series[n - k]));
            }
        }
        series.push(acc.scale(&lead));
    }
    series
}

/// Evaluates `p_n` at a real point through the recurrence, never through
/// expanded coefficients; this is cheaper and numerically tame on `[-1, 1]`.
pub fn p_eval(rank: Rank, n: usize, t: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let r = rank.r_f64();
    let mut prev = 1.0;
    let mut cur = t;
    for _ in 1..n {
        (prev, cur) = (cur, (t * cur - r * prev) / (1.0 - r));
    }
    cur
}

/// Recurrence evaluation at a complex parameter.
pub fn p_eval_complex(rank: Rank, n: usize, c: Complex64) -> Complex64 {
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let r = rank.r_f64();
    let mut prev = Complex64::new(1.0, 0.0);
    let mut cur = c;
    for _ in 1..n {
        (prev, cur) = (cur, (c * cur - r * prev) / (1.0 - r));
    }
    cur
}

/// The spherical function at parameter `c` evaluated on a word: it depends
/// on the word only through its length.
pub fn spherical_value(rank: Rank, c: f64, g: &Word) -> Result<f64> {
    if g.l() != rank.l() {
        return Err(Error::RankMismatch {
            lhs: rank.l(),
            rhs: g.l(),
        });
    }
    Ok(p_eval(rank, g.len(), c))
}

/// Residual of the eigenfunction identity
/// `r p_{n-1}(c) + (1-r) p_{n+1}(c) - c p_n(c)`, evaluated in floating
/// point. Small residuals certify that the float evaluation path is
/// self-consistent at the given order.
pub fn spherical_eigen_residual(rank: Rank, c: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("eigen residual needs n >= 1"));
    }
    let r = rank.r_f64();
    let lo = p_eval(rank, n - 1, c);
    let mid = p_eval(rank, n, c);
    let hi = p_eval(rank, n + 1, c);
    Ok((r * lo + (1.0 - r) * hi - c * mid).abs())
}

// ------------------------------------------------------------------------
// Radial elements
// ------------------------------------------------------------------------

/// A rational combination of the sphere averages `h_n`, stored as the
/// coefficient vector indexed by `n` with trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RadialElement {
    l: usize,
    coeffs: Vec<BigRational>,
}

impl RadialElement {
    pub fn zero(rank: Rank) -> Self {
        RadialElement {
            l: rank.l(),
            coeffs: Vec::new(),
        }
    }

    /// The basis vector `h_n`.
    pub fn h(rank: Rank, n: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); n + 1];
        coeffs[n] = BigRational::one();
        RadialElement {
            l: rank.l(),
            coeffs,
        }
    }

    pub fn from_coeffs(rank: Rank, mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RadialElement {
            l: rank.l(),
            coeffs,
        }
    }

    pub fn rank(&self) -> Rank {
        Rank::new(self.l).expect("stored rank is valid")
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> BigRational {
        self.coeffs.get(n).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Largest `n` with a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check_rank(&self, other: &RadialElement) -> Result<()> {
        if self.l != other.l {
            return Err(Error::RankMismatch {
                lhs: self.l,
                rhs: other.l,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &RadialElement) -> Result<RadialElement> {
        self.check_rank(other)?;
        let mut coeffs =
            vec![BigRational::zero(); self.coeffs.len().max(other.coeffs.len())];
        for (n, c) in self.coeffs.iter().enumerate() {
            coeffs[n] += c;
        }
        for (n, c) in other.coeffs.iter().enumerate() {
            coeffs[n] += c;
        }
        Ok(RadialElement::from_coeffs(self.rank(), coeffs))
    }

    pub fn sub(&self, other: &RadialElement) -> Result<RadialElement> {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, factor: &BigRational) -> RadialElement {
        if factor.is_zero() {
            return RadialElement {
                l: self.l,
                coeffs: Vec::new(),
            };
        }
        RadialElement {
            l: self.l,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Exact multiplication by `h_1`, the one place the defining recurrence
    /// is encoded: `h_1 h_0 = h_1` and
    /// `h_1 h_n = r h_{n-1} + (1-r) h_{n+1}` for `n >= 1`. Everything else
    /// in the calculus (general products, the transition matrix) is derived
    /// from this action.
    pub fn mul_h1(&self) -> RadialElement {
        let rank = self.rank();
        let r = rank.r();
        let one_minus_r = rank.one_minus_r();
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + 1];
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if n == 0 {
                coeffs[1] += c;
            } else {
                coeffs[n - 1] += c * &r;
                coeffs[n + 1] += c * &one_minus_r;
            }
        }
        RadialElement::from_coeffs(rank, coeffs)
    }

    /// Writes the element out as a full algebra element, expanding each
    /// `h_n` over its sphere. Subject to the enumeration cap.
    pub fn embed(&self, cap: u64) -> Result<AlgebraElement> {
        let rank = self.rank();
        let mut out = AlgebraElement::zero(rank);
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out = out.add(&elementary_radial(rank, n, cap)?.scale(c))?;
        }
        Ok(out)
    }

    /// Evaluates the associated radial function at parameter `c`: the sum of
    /// `coeff(n) * p_n(c)`.
    pub fn eval_spherical(&self, c: f64) -> f64 {
        let rank = self.rank();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, q)| q.to_f64().unwrap_or(f64::NAN) * p_eval(rank, n, c))
            .sum()
    }

    pub fn to_json_string(&self) -> String {
        let repr = RadialRepr {
            l: self.l as u64,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| CoeffRepr {
                    num: bigint_to_number(c.numer()),
                    den: bigint_to_number(c.denom()),
                })
                .collect(),
        };
        serde_json::to_string(&repr).expect("radial serialization cannot fail")
    }

    pub fn from_json_str(text: &str) -> Result<RadialElement> {
        let repr: RadialRepr = serde_json::from_str(text)
            .map_err(|e| Error::parse(format!("bad radial JSON: {e}")))?;
        let rank = Rank::new(repr.l as usize)?;
        let mut coeffs = Vec::with_capacity(repr.coeffs.len());
        for (n, c) in repr.coeffs.iter().enumerate() {
            let num = number_to_bigint(&c.num, "num")?;
            let den = number_to_bigint(&c.den, "den")?;
            if den.is_zero() {
                return Err(Error::parse(format!("zero denominator at index {n}")));
            }
            coeffs.push(BigRational::new(num, den));
        }
        Ok(RadialElement::from_coeffs(rank, coeffs))
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct CoeffRepr {
    num: serde_json::Number,
    den: serde_json::Number,
}

#[derive(serde::Serialize, serde::Deserialize)]
struct RadialRepr {
    l: u64,
    coeffs: Vec<CoeffRepr>,
}

/// The product `h_m h_n` expanded in the basis, exactly. Computed by
/// driving the recurrence as an operator identity: with `A_k = h_k h_n`,
/// `A_0 = h_n`, `A_1 = h_1 h_n`, and
/// `A_{k+1} = (h_1 A_k - r A_{k-1}) / (1 - r)`.
pub fn linearize(rank: Rank, m: usize, n: usize) -> RadialElement {
    let mut prev = RadialElement::h(rank, n);
    if m == 0 {
        return prev;
    }
    let mut cur = prev.mul_h1();
    let r = rank.r();
    let inv = rank.one_minus_r().recip();
    for _ in 2..=m {
        let next = cur
            .mul_h1()
            .sub(&prev.scale(&r))
            .expect("ranks agree")
            .scale(&inv);
        prev = cur;
        cur = next;
    }
    cur
}

/// Expands an arbitrary polynomial in the `p_n` basis by repeated leading
/// term elimination; the change of basis is exact because the `p_n` have
/// full degree ladder.
pub fn poly_in_p_basis(rank: Rank, poly: &RationalPoly) -> Vec<BigRational> {
    let Some(degree) = poly.degree() else {
        return Vec::new();
    };
    let basis = p_polys(rank, degree);
    let mut rest = poly.clone();
    let mut coeffs = vec![BigRational::zero(); degree + 1];
    for d in (0..=degree).rev() {
        let lead = rest.coeff(d);
        if !lead.is_zero() {
            let factor = lead / basis[d].leading().expect("p_d has degree d");
            rest = rest.sub(&basis[d].scale(&factor));
            coeffs[d] = factor;
        }
    }
    debug_assert!(rest.is_zero());
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    coeffs
}

// ------------------------------------------------------------------------
// Parameter classification
// ------------------------------------------------------------------------

/// Which unitary series, if any, the real parameter belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Series {
    /// `|c| <= 2 sqrt(r (1-r))`: the parameter sits in the collapsed
    /// spectral interval.
    Principal,
    /// `2 sqrt(r (1-r)) < |c| < 1`.
    Complementary,
    /// `c = +1` or `c = -1`: the two one-dimensional characters.
    Residual(Sign),
    /// Everything else: no bounded *-representation carries the functional.
    Unbounded,
}

impl std::fmt::Display for Series {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Series::Principal => write!(f, "principal"),
            Series::Complementary => write!(f, "complementary"),
            Series::Residual(sign) => write!(f, "residual({sign})"),
            Series::Unbounded => write!(f, "unbounded"),
        }
    }
}

/// Full classification of a complex spherical parameter.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct ParameterClass {
    pub c: Complex64,
    /// The radial functional extends boundedly to the summable completion.
    pub l1_bounded: bool,
    /// It extends to the reduced C*-completion.
    pub cstar_bounded: bool,
    /// The spherical function is positive definite.
    pub positive_definite: bool,
    pub series: Series,
}

/// Value of the ellipse functional `x^2 + y^2/(1-2r)^2` whose unit sublevel
/// set is the region of summable spherical parameters. At `l = 1` the
/// ellipse degenerates to the segment `[-1, 1]`; off-axis points get
/// infinity so the comparison logic stays uniform.
pub fn ellipse_value(rank: Rank, c: Complex64) -> f64 {
    let flat = 1.0 - 2.0 * rank.r_f64();
    if flat == 0.0 {
        if c.im == 0.0 {
            return c.re * c.re;
        }
        return f64::INFINITY;
    }
    c.re * c.re + (c.im / flat) * (c.im / flat)
}

pub fn classify_parameter(rank: Rank, c: Complex64) -> Result<ParameterClass> {
    if !c.re.is_finite() || !c.im.is_finite() {
        return Err(Error::domain("parameter must be finite"));
    }
    let l1_bounded = ellipse_value(rank, c) <= 1.0;
    let on_axis = c.im == 0.0;
    let cstar_bounded = on_axis && c.re.abs() <= 1.0;
    // Positive definiteness holds on exactly the same real interval.
    let positive_definite = cstar_bounded;
    let series = if !on_axis {
        Series::Unbounded
    } else if c.re == 1.0 {
        Series::Residual(Sign::Plus)
    } else if c.re == -1.0 {
        Series::Residual(Sign::Minus)
    } else if c.re.abs() <= spectrum_edge(rank) {
        Series::Principal
    } else if c.re.abs() < 1.0 {
        Series::Complementary
    } else {
        Series::Unbounded
    };
    Ok(ParameterClass {
        c,
        l1_bounded,
        cstar_bounded,
        positive_definite,
        series,
    })
}

/// `max |p_n(c)|` over `0 <= n <= n_max`, by the complex recurrence.
pub fn sup_pn_witness(rank: Rank, c: Complex64, n_max: usize) -> f64 {
    let r = rank.r_f64();
    let mut sup = 1.0f64;
    if n_max == 0 {
        return sup;
    }
    let mut prev = Complex64::new(1.0, 0.0);
    let mut cur = c;
    sup = sup.max(cur.norm());
    for _ in 1..n_max {
        (prev, cur) = (cur, (c * cur - r * prev) / (1.0 - r));
        sup = sup.max(cur.norm());
    }
    sup
}

/// Outcome of the growth-based boundedness probe.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GrowthClass {
    Bounded,
    Unbounded,
    /// The parameter sits within `1e-9` of the ellipse boundary, where a
    /// finite probe cannot tell the two sides apart; no guess is made.
    Boundary,
}

impl std::fmt::Display for GrowthClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GrowthClass::Bounded => write!(f, "bounded"),
            GrowthClass::Unbounded => write!(f, "unbounded"),
            GrowthClass::Boundary => write!(f, "boundary, undecided"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct GrowthWitness {
    pub class: GrowthClass,
    /// `max |p_n(c)|` over the head window `n <= 64`.
    pub sup_head: f64,
    /// `max |p_n(c)|` over the tail window `65 <= n <= 128`.
    pub sup_tail: f64,
}

const GROWTH_WINDOW: usize = 64;
const GROWTH_FACTOR: f64 = 1.1;
const ELLIPSE_BOUNDARY_BAND: f64 = 1e-9;

/// Probes summability by comparing sup norms over two dyadic windows:
/// outside the ellipse the values grow geometrically, so the tail window
/// exceeding the head by a fixed factor is a robust witness. Within the
/// boundary band the probe declines to decide.
pub fn l1_growth_witness(rank: Rank, c: Complex64) -> Result<GrowthWitness> {
    if !c.re.is_finite() || !c.im.is_finite() {
        return Err(Error::domain("parameter must be finite"));
    }
    let r = rank.r_f64();
    let mut sup_head = 1.0f64;
    let mut sup_tail = 0.0f64;
    let mut prev = Complex64::new(1.0, 0.0);
    let mut cur = c;
    for n in 1..=2 * GROWTH_WINDOW {
        let norm = cur.norm();
        if n <= GROWTH_WINDOW {
            sup_head = sup_head.max(norm);
        } else {
            sup_tail = sup_tail.max(norm);
        }
        (prev, cur) = (cur, (c * cur - r * prev) / (1.0 - r));
    }
    let class = if (ellipse_value(rank, c) - 1.0).abs() <= ELLIPSE_BOUNDARY_BAND {
        GrowthClass::Boundary
    } else if sup_tail >= GROWTH_FACTOR * sup_head {
        GrowthClass::Unbounded
    } else {
        GrowthClass::Bounded
    };
    Ok(GrowthWitness {
        class,
        sup_head,
        sup_tail,
    })
}

// ------------------------------------------------------------------------
// Positive definiteness on balls
// ------------------------------------------------------------------------

/// Result of a Gram positivity check. The minimum eigenvalue is the
/// quantitative certificate; `positive` compares it against `-tolerance`.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct GramReport {
    pub dimension: usize,
    pub min_eigenvalue: f64,
    pub tolerance: f64,
    pub positive: bool,
}

/// Default Gram tolerance, proportional to the matrix dimension.
pub fn default_gram_tolerance(dimension: usize) -> f64 {
    1e-10 * dimension as f64
}

/// Tests positive definiteness of a length-type function on the ball of the
/// given radius: assembles `M[g,h] = phi(g^-1 h)` over the ball and runs a
/// full symmetric eigendecomposition. A true positive-definite function
/// cannot dip below zero beyond rounding; a genuinely indefinite one shows a
/// clearly negative eigenvalue that grows with the radius.
pub fn is_positive_definite_on_ball<F>(
    rank: Rank,
    phi: F,
    radius: usize,
    cap: u64,
    tolerance: Option<f64>,
) -> Result<GramReport>
where
    F: Fn(&Word) -> f64,
{
    let words = ball(rank, radius, cap)?;
    let dim = words.len();
    let mut gram = vec![0.0f64; dim * dim];
    for (i, g) in words.iter().enumerate() {
        let g_inv = g.inverse();
        for (j, h) in words.iter().enumerate() {
            let value = phi(&g_inv.multiply(h)?);
            if !value.is_finite() {
                return Err(Error::numeric(format!(
                    "non-finite Gram entry at ({i}, {j})"
                )));
            }
            gram[i * dim + j] = value;
        }
    }
    let eigenvalues = linalg::symmetric_eigenvalues(&mut gram, dim)?;
    let min_eigenvalue = eigenvalues.first().copied().unwrap_or(0.0);
    let tolerance = tolerance.unwrap_or_else(|| default_gram_tolerance(dim));
    if tolerance <= 0.0 {
        return Err(Error::domain("tolerance must be positive"));
    }
    Ok(GramReport {
        dimension: dim,
        min_eigenvalue,
        tolerance,
        positive: min_eigenvalue >= -tolerance,
    })
}

/// The spherical function at `c` as a closure over words.
pub fn spherical_function(rank: Rank, c: f64) -> impl Fn(&Word) -> f64 {
    move |g| p_eval(rank, g.len(), c)
}

/// The length power function `g -> u^|g|`.
pub fn power_function(u: f64) -> impl Fn(&Word) -> f64 {
    move |g| u.powi(g.len() as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::DEFAULT_ENUMERATION_CAP as CAP;
    use num_bigint::BigInt;
    use num_traits::Signed;

    fn rank(l: usize) -> Rank {
        Rank::new(l).unwrap()
    }

    fn q(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn low_degree_polynomials_are_explicit() {
        // At l = 2: p_2 = (t^2 - r)/(1 - r) = (4 t^2 - 1)/3.
        let p2 = p_poly(rank(2), 2);
        assert_eq!(p2.coeff(0), q(-1, 3));
        assert_eq!(p2.coeff(1), q(0, 1));
        assert_eq!(p2.coeff(2), q(4, 3));
        assert_eq!(p_poly(rank(2), 0), RationalPoly::one());
        assert_eq!(p_poly(rank(2), 1), RationalPoly::t());
    }

    #[test]
    fn generating_function_matches_recurrence_polynomials() {
        for l in 1..=3 {
            let series = genfun_coeffs(rank(l), 12);
            let direct = p_polys(rank(l), 12);
            assert_eq!(series, direct);
        }
    }

    #[test]
    fn recurrence_evaluation_matches_exact_polynomials() {
        for l in [1, 2, 3] {
            for n in 0..=9 {
                let poly = p_poly(rank(l), n);
                for t in [-1.0, -0.4, 0.0, 0.3, 0.87, 1.0] {
                    let direct = p_eval(rank(l), n, t);
                    let horner = poly.eval_f64(t);
                    assert!((direct - horner).abs() <= 1e-12,
                        "l={l} n={n} t={t}: {direct} vs {horner}");
                }
            }
        }
    }

    #[test]
    fn endpoint_values_are_signs() {
        for n in 0..=10 {
            assert!((p_eval(rank(2), n, 1.0) - 1.0).abs() < 1e-12);
            let expected = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((p_eval(rank(2), n, -1.0) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn eigen_residual_is_tiny_for_bounded_parameters() {
        for l in [1, 2, 3] {
            for c in [-1.0, -0.9125, -0.3, 0.0, 0.5, 0.9125, 1.0] {
                for n in 1..=40 {
                    let res = spherical_eigen_residual(rank(l), c, n).unwrap();
                    assert!(res <= 1e-12, "l={l} c={c} n={n}: residual {res}");
                }
            }
        }
        assert!(spherical_eigen_residual(rank(2), 0.5, 0).is_err());
    }

    #[test]
    fn mul_h1_encodes_the_recurrence() {
        let image = RadialElement::h(rank(2), 3).mul_h1();
        assert_eq!(image.coeff(2), q(1, 4));
        assert_eq!(image.coeff(4), q(3, 4));
        assert_eq!(image.coeff(3), q(0, 1));
        let from_zero = RadialElement::h(rank(2), 0).mul_h1();
        assert_eq!(from_zero, RadialElement::h(rank(2), 1));
    }

    #[test]
    fn linearize_agrees_with_brute_force_convolution() {
        for l in [2, 3] {
            for m in 0..=3 {
                for n in 0..=3 {
                    let structural = linearize(rank(l), m, n);
                    let brute = elementary_radial(rank(l), m, CAP)
                        .unwrap()
                        .convolve(&elementary_radial(rank(l), n, CAP).unwrap())
                        .unwrap()
                        .radialize();
                    assert_eq!(structural, brute, "l={l} m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn linearize_agrees_with_polynomial_expansion() {
        // Third route: expand p_m p_n in the p basis and compare.
        for (m, n) in [(2, 2), (3, 4), (1, 5), (4, 4)] {
            let structural = linearize(rank(2), m, n);
            let product = p_poly(rank(2), m).mul(&p_poly(rank(2), n));
            let coeffs = poly_in_p_basis(rank(2), &product);
            let expanded = RadialElement::from_coeffs(rank(2), coeffs);
            assert_eq!(structural, expanded, "m={m} n={n}");
        }
    }

    #[test]
    fn linearize_coefficients_sum_to_one() {
        // Each h_k has total mass one under the trace pairing with the
        // constant function, so structure coefficients are a probability
        // vector whenever m, n >= 0.
        let expansion = linearize(rank(2), 4, 6);
        let total: BigRational = expansion.coeffs().iter().sum();
        assert_eq!(total, q(1, 1));
        assert!(expansion.coeffs().iter().all(|c| !c.is_negative()));
    }

    #[test]
    fn embed_inverts_radialize() {
        let elem = RadialElement::from_coeffs(
            rank(2),
            vec![q(1, 2), q(0, 1), q(-3, 7)],
        );
        let embedded = elem.embed(CAP).unwrap();
        assert_eq!(embedded.radialize(), elem);
    }

    #[test]
    fn classification_of_sample_parameters() {
        let c = |x: f64| Complex64::new(x, 0.0);
        let at = |x| classify_parameter(rank(2), c(x)).unwrap();
        assert_eq!(at(0.9).series, Series::Complementary);
        assert!(at(0.9).positive_definite && at(0.9).l1_bounded);
        assert_eq!(at(0.5).series, Series::Principal);
        assert_eq!(at(1.0).series, Series::Residual(Sign::Plus));
        assert_eq!(at(-1.0).series, Series::Residual(Sign::Minus));
        assert_eq!(at(1.2).series, Series::Unbounded);
        assert!(!at(1.2).l1_bounded && !at(1.2).cstar_bounded);
        // The spectral edge itself is principal.
        let edge = spectrum_edge(rank(2));
        assert_eq!(at(edge).series, Series::Principal);

        // A purely imaginary parameter on the ellipse boundary: summable but
        // carried by no bounded representation.
        let i_half = classify_parameter(rank(2), Complex64::new(0.0, 0.5)).unwrap();
        assert!(i_half.l1_bounded);
        assert!(!i_half.cstar_bounded && !i_half.positive_definite);
        assert_eq!(i_half.series, Series::Unbounded);

        // At l = 1 the ellipse collapses to the segment.
        let seg = classify_parameter(rank(1), Complex64::new(0.3, 0.0)).unwrap();
        assert!(seg.l1_bounded);
        assert_eq!(seg.series, Series::Principal);
        let off = classify_parameter(rank(1), Complex64::new(0.3, 1e-12)).unwrap();
        assert!(!off.l1_bounded);
        assert!(classify_parameter(rank(1), c(1.0)).unwrap().l1_bounded);
        assert_eq!(
            classify_parameter(rank(1), c(1.0)).unwrap().series,
            Series::Residual(Sign::Plus)
        );
    }

    #[test]
    fn implication_chain_on_a_grid() {
        for x in [-1.5, -1.0, -0.7, 0.0, 0.5, 0.87, 1.0, 1.1] {
            for y in [-0.6, 0.0, 0.2, 0.51] {
                let class = classify_parameter(rank(2), Complex64::new(x, y)).unwrap();
                if class.positive_definite {
                    assert!(class.cstar_bounded);
                }
                if class.cstar_bounded {
                    assert!(class.l1_bounded);
                }
                if matches!(class.series, Series::Residual(_)) {
                    assert!(x.abs() == 1.0 && y == 0.0);
                }
            }
        }
    }

    #[test]
    fn growth_witness_separates_inside_from_outside() {
        let inside = l1_growth_witness(rank(2), Complex64::new(0.4, 0.1)).unwrap();
        assert_eq!(inside.class, GrowthClass::Bounded);
        let outside = l1_growth_witness(rank(2), Complex64::new(1.1, 0.0)).unwrap();
        assert_eq!(outside.class, GrowthClass::Unbounded);
        assert!(outside.sup_tail > outside.sup_head);
        let complex_out = l1_growth_witness(rank(2), Complex64::new(0.8, 0.4)).unwrap();
        assert_eq!(complex_out.class, GrowthClass::Unbounded);
        // Within the band of the ellipse no verdict is given.
        let boundary = l1_growth_witness(rank(2), Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(boundary.class, GrowthClass::Boundary);
        assert_eq!(boundary.class.to_string(), "boundary, undecided");
        let near = l1_growth_witness(rank(2), Complex64::new((1.0f64 + 5e-10).sqrt(), 0.0))
            .unwrap();
        assert_eq!(near.class, GrowthClass::Boundary);
    }

    #[test]
    fn sup_witness_stabilizes_inside_the_interval() {
        let small = sup_pn_witness(rank(2), Complex64::new(0.5, 0.0), 32);
        let large = sup_pn_witness(rank(2), Complex64::new(0.5, 0.0), 128);
        assert!((small - large).abs() < 1e-9);
        assert!(large <= 1.0 + 1e-12);
    }

    #[test]
    fn gram_certifies_positive_definiteness_on_small_balls() {
        let report = is_positive_definite_on_ball(
            rank(2),
            spherical_function(rank(2), 0.9),
            2,
            CAP,
            None,
        )
        .unwrap();
        assert_eq!(report.dimension, 17);
        assert!(report.positive, "min eig {}", report.min_eigenvalue);

        let report = is_positive_definite_on_ball(
            rank(2),
            spherical_function(rank(2), 1.2),
            2,
            CAP,
            None,
        )
        .unwrap();
        assert!(!report.positive);
        assert!(report.min_eigenvalue < -1e-6);
    }

    #[test]
    fn gram_rejects_non_finite_functions() {
        let err = is_positive_definite_on_ball(
            rank(2),
            |g: &Word| if g.len() > 1 { f64::NAN } else { 1.0 },
            2,
            CAP,
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Numeric(_)));
    }
}
