//! An executable model of the primitive ideal space of the radial
//! C*-algebra.
//!
//! The space is the quotient of `[-1, 1]` that collapses the spectral
//! interval `sigma_r = [-s, s]` (`s = 2 sqrt(r (1-r))`) to a single point
//! `Bot`, keeps every parameter in `(-1, 1) \ sigma_r` as its own point
//! `Sph(t)`, and ends in the two characters `CharPlus`, `CharMinus` at
//! `+-1`. Its closure operator is completely explicit: the closure of a set
//! of `Sph` points is the image of the euclidean closure of the parameters,
//! together with `Bot`; `Bot` and the characters are closed points. That
//! makes the topology T0 but not T1, with `Bot` a generic point below every
//! `Sph(t)`.
//!
//! Sets are represented exactly: three flags plus a canonical list of
//! parameter intervals with open/closed endpoints. All set operations are
//! exact on this representation, so the Kuratowski laws can be asserted
//! with equality rather than tolerance.
//!
//! The continuity checker at the bottom implements the function-theoretic
//! face of the same fact: a function on the space is continuous iff it
//! respects specialization and lifts to a continuous function on `[-1, 1]`,
//! and those two checks force constancy.

use rand::Rng;

use crate::error::{Error, Result};
use crate::radial::spectrum_edge;
use crate::words::Rank;

/// Tolerance for membership of the collapsed interval in [`quotient`]; the
/// set model itself compares parameters exactly.
pub const QUOTIENT_EDGE_TOLERANCE: f64 = 1e-12;

/// A point of the primitive ideal space.
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum PrimPoint {
    /// The collapsed class of the spectral interval.
    Bot,
    /// The character at `+1`.
    CharPlus,
    /// The character at `-1`.
    CharMinus,
    /// The spherical point at parameter `t`, `s < |t| < 1`.
    Sph(f64),
}

impl std::fmt::Display for PrimPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PrimPoint::Bot => write!(f, "bot"),
            PrimPoint::CharPlus => write!(f, "char+"),
            PrimPoint::CharMinus => write!(f, "char-"),
            PrimPoint::Sph(t) => write!(f, "point:{t}"),
        }
    }
}

/// The class of `t` in the quotient: the collapsed interval (with edge
/// tolerance), a character at exactly `+-1`, or the spherical point.
pub fn quotient(rank: Rank, t: f64) -> Result<PrimPoint> {
    if !t.is_finite() || t.abs() > 1.0 {
        return Err(Error::domain(format!("parameter {t} outside [-1, 1]")));
    }
    if t.abs() <= spectrum_edge(rank) + QUOTIENT_EDGE_TOLERANCE {
        return Ok(PrimPoint::Bot);
    }
    if t == 1.0 {
        return Ok(PrimPoint::CharPlus);
    }
    if t == -1.0 {
        return Ok(PrimPoint::CharMinus);
    }
    Ok(PrimPoint::Sph(t))
}

/// Whether `t` is a legal spherical parameter, `s < |t| < 1`, exactly.
fn legal_parameter(rank: Rank, t: f64) -> bool {
    t.is_finite() && t.abs() > spectrum_edge(rank) && t.abs() < 1.0
}

/// One maximal run of parameters, endpoints flagged open or closed. A
/// degenerate interval (`lo == hi`, both closed) is an isolated point.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn point(t: f64) -> Interval {
        Interval {
            lo: t,
            hi: t,
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    fn maybe(lo: f64, lo_closed: bool, hi: f64, hi_closed: bool) -> Option<Interval> {
        if lo < hi || (lo == hi && lo_closed && hi_closed) {
            Some(Interval {
                lo,
                hi,
                lo_closed,
                hi_closed,
            })
        } else {
            None
        }
    }

    pub fn contains(&self, t: f64) -> bool {
        (self.lo < t || (self.lo == t && self.lo_closed))
            && (t < self.hi || (t == self.hi && self.hi_closed))
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_point() {
            write!(f, "point:{}", self.lo)
        } else {
            write!(
                f,
                "interval:{}{},{}{}",
                if self.lo_closed { '[' } else { '(' },
                self.lo,
                self.hi,
                if self.hi_closed { ']' } else { ')' }
            )
        }
    }
}

/// A subset of the space: point flags plus canonical parameter pieces.
#[derive(Clone, PartialEq, Debug)]
pub struct PrimSet {
    l: usize,
    bot: bool,
    char_plus: bool,
    char_minus: bool,
    pieces: Vec<Interval>,
}

impl PrimSet {
    pub fn empty(rank: Rank) -> PrimSet {
        PrimSet {
            l: rank.l(),
            bot: false,
            char_plus: false,
            char_minus: false,
            pieces: Vec::new(),
        }
    }

    /// Builds a set from raw parts, validating every piece against the
    /// legal parameter region and canonicalizing.
    pub fn from_parts(
        rank: Rank,
        bot: bool,
        char_plus: bool,
        char_minus: bool,
        pieces: Vec<Interval>,
    ) -> Result<PrimSet> {
        let s = spectrum_edge(rank);
        for piece in &pieces {
            if !piece.lo.is_finite() || !piece.hi.is_finite() || piece.lo > piece.hi {
                return Err(Error::domain(format!("malformed interval {piece}")));
            }
            if piece.is_point() {
                if !(piece.lo_closed && piece.hi_closed) || !legal_parameter(rank, piece.lo) {
                    return Err(Error::domain(format!(
                        "parameter point {} outside the legal region",
                        piece.lo
                    )));
                }
                continue;
            }
            let in_left = piece.lo >= -1.0 && piece.hi <= -s;
            let in_right = piece.lo >= s && piece.hi <= 1.0;
            if !(in_left || in_right) {
                return Err(Error::domain(format!(
                    "interval {piece} leaves the legal region"
                )));
            }
            if (piece.lo_closed && !legal_parameter(rank, piece.lo))
                || (piece.hi_closed && !legal_parameter(rank, piece.hi))
            {
                return Err(Error::domain(format!(
                    "interval {piece} closed at an illegal endpoint"
                )));
            }
        }
        let mut set = PrimSet {
            l: rank.l(),
            bot,
            char_plus,
            char_minus,
            pieces,
        };
        set.canonicalize();
        Ok(set)
    }

    pub fn singleton(rank: Rank, point: PrimPoint) -> Result<PrimSet> {
        let mut set = PrimSet::empty(rank);
        match point {
            PrimPoint::Bot => set.bot = true,
            PrimPoint::CharPlus => set.char_plus = true,
            PrimPoint::CharMinus => set.char_minus = true,
            PrimPoint::Sph(t) => {
                if !legal_parameter(rank, t) {
                    return Err(Error::domain(format!(
                        "parameter point {t} outside the legal region"
                    )));
                }
                set.pieces.push(Interval::point(t));
            }
        }
        Ok(set)
    }

    pub fn rank(&self) -> Rank {
        Rank::new(self.l).expect("stored rank is valid")
    }

    pub fn has_bot(&self) -> bool {
        self.bot
    }

    pub fn has_char_plus(&self) -> bool {
        self.char_plus
    }

    pub fn has_char_minus(&self) -> bool {
        self.char_minus
    }

    pub fn pieces(&self) -> &[Interval] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        !self.bot && !self.char_plus && !self.char_minus && self.pieces.is_empty()
    }

    fn canonicalize(&mut self) {
        self.pieces.sort_by(|a, b| {
            a.lo.total_cmp(&b.lo)
                .then_with(|| b.lo_closed.cmp(&a.lo_closed))
                .then_with(|| a.hi.total_cmp(&b.hi))
        });
        let mut merged: Vec<Interval> = Vec::with_capacity(self.pieces.len());
        for piece in self.pieces.drain(..) {
            if let Some(last) = merged.last_mut() {
                let touches = piece.lo < last.hi
                    || (piece.lo == last.hi && (last.hi_closed || piece.lo_closed));
                if touches {
                    if piece.hi > last.hi {
                        last.hi = piece.hi;
                        last.hi_closed = piece.hi_closed;
                    } else if piece.hi == last.hi {
                        last.hi_closed |= piece.hi_closed;
                    }
                    continue;
                }
            }
            merged.push(piece);
        }
        self.pieces = merged;
    }

    fn check_rank(&self, other: &PrimSet) -> Result<()> {
        if self.l != other.l {
            return Err(Error::RankMismatch {
                lhs: self.l,
                rhs: other.l,
            });
        }
        Ok(())
    }

    pub fn union(&self, other: &PrimSet) -> Result<PrimSet> {
        self.check_rank(other)?;
        let mut out = self.clone();
        out.bot |= other.bot;
        out.char_plus |= other.char_plus;
        out.char_minus |= other.char_minus;
        out.pieces.extend(other.pieces.iter().copied());
        out.canonicalize();
        Ok(out)
    }

    pub fn contains_point(&self, point: PrimPoint) -> bool {
        match point {
            PrimPoint::Bot => self.bot,
            PrimPoint::CharPlus => self.char_plus,
            PrimPoint::CharMinus => self.char_minus,
            PrimPoint::Sph(t) => self.pieces.iter().any(|p| p.contains(t)),
        }
    }

    pub fn is_subset_of(&self, other: &PrimSet) -> Result<bool> {
        Ok(&self.union(other)? == other)
    }

    /// The closure: any parameter piece pulls in `Bot`, and every euclidean
    /// limit of parameters joins the set through its quotient class (interior
    /// endpoints become closed, `+-s` feeds `Bot`, `+-1` the characters).
    pub fn closure(&self) -> PrimSet {
        let rank = self.rank();
        let mut out = self.clone();
        if !out.pieces.is_empty() {
            out.bot = true;
        }
        for piece in &mut out.pieces {
            for (value, closed) in [
                (piece.lo, &mut piece.lo_closed),
                (piece.hi, &mut piece.hi_closed),
            ] {
                match quotient(rank, value).expect("validated endpoint") {
                    PrimPoint::Sph(_) => *closed = true,
                    PrimPoint::Bot => out.bot = true,
                    PrimPoint::CharPlus => out.char_plus = true,
                    PrimPoint::CharMinus => out.char_minus = true,
                }
            }
        }
        out.canonicalize();
        out
    }

    /// Complement within the whole space.
    pub fn complement(&self) -> PrimSet {
        let s = spectrum_edge(self.rank());
        let mut pieces = Vec::new();
        for (window_lo, window_hi) in [(-1.0, -s), (s, 1.0)] {
            let mut cursor = window_lo;
            let mut cursor_closed = false;
            for piece in self
                .pieces
                .iter()
                .filter(|p| p.lo >= window_lo && p.hi <= window_hi)
            {
                pieces.extend(Interval::maybe(
                    cursor,
                    cursor_closed,
                    piece.lo,
                    !piece.lo_closed,
                ));
                cursor = piece.hi;
                cursor_closed = !piece.hi_closed;
            }
            pieces.extend(Interval::maybe(cursor, cursor_closed, window_hi, false));
        }
        let mut out = PrimSet {
            l: self.l,
            bot: !self.bot,
            char_plus: !self.char_plus,
            char_minus: !self.char_minus,
            pieces,
        };
        out.canonicalize();
        out
    }

    pub fn is_closed(&self) -> bool {
        self.closure() == *self
    }

    pub fn is_open(&self) -> bool {
        self.complement().is_closed()
    }
}

impl std::fmt::Display for PrimSet {
    /// Canonical rendering in the set mini-language: pieces ascending, then
    /// the flags `bot`, `char+`, `char-`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        let mut sep = |f: &mut std::fmt::Formatter<'_>| -> std::fmt::Result {
            if first {
                first = false;
                Ok(())
            } else {
                write!(f, ",")
            }
        };
        for piece in &self.pieces {
            sep(f)?;
            write!(f, "{piece}")?;
        }
        if self.bot {
            sep(f)?;
            write!(f, "bot")?;
        }
        if self.char_plus {
            sep(f)?;
            write!(f, "char+")?;
        }
        if self.char_minus {
            sep(f)?;
            write!(f, "char-")?;
        }
        Ok(())
    }
}

/// Splits on commas that are not nested inside interval brackets.
fn split_top_level(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

fn parse_float(text: &str) -> Result<f64> {
    text.trim()
        .parse::<f64>()
        .map_err(|_| Error::parse(format!("invalid number '{}'", text.trim())))
}

/// Parses the set mini-language: comma-separated `bot`, `char+`, `char-`,
/// `point:V`, `interval:(a,b]` (brackets giving the endpoint flags). The
/// empty string is the empty set.
pub fn parse_set_spec(rank: Rank, text: &str) -> Result<PrimSet> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(PrimSet::empty(rank));
    }
    let mut bot = false;
    let mut char_plus = false;
    let mut char_minus = false;
    let mut pieces = Vec::new();
    for token in split_top_level(text) {
        let token = token.trim();
        if token == "bot" {
            bot = true;
        } else if token == "char+" {
            char_plus = true;
        } else if token == "char-" {
            char_minus = true;
        } else if let Some(value) = token.strip_prefix("point:") {
            pieces.push(Interval::point(parse_float(value)?));
        } else if let Some(body) = token.strip_prefix("interval:") {
            let body = body.trim();
            let mut chars = body.chars();
            let open = chars.next();
            let close = body.chars().last();
            let lo_closed = match open {
                Some('[') => true,
                Some('(') => false,
                _ => return Err(Error::parse(format!("malformed interval '{token}'"))),
            };
            let hi_closed = match close {
                Some(']') => true,
                Some(')') => false,
                _ => return Err(Error::parse(format!("malformed interval '{token}'"))),
            };
            let inner = &body[1..body.len() - 1];
            let endpoints: Vec<&str> = inner.split(',').collect();
            if endpoints.len() != 2 {
                return Err(Error::parse(format!("malformed interval '{token}'")));
            }
            pieces.push(Interval {
                lo: parse_float(endpoints[0])?,
                hi: parse_float(endpoints[1])?,
                lo_closed,
                hi_closed,
            });
        } else {
            return Err(Error::parse(format!("unknown set token '{token}'")));
        }
    }
    PrimSet::from_parts(rank, bot, char_plus, char_minus, pieces)
}

/// `q` lies in the closure of `{p}`.
pub fn specializes(rank: Rank, p: PrimPoint, q: PrimPoint) -> Result<bool> {
    Ok(PrimSet::singleton(rank, p)?.closure().contains_point(q))
}

/// Two parameters in `[-1, 1]` induce the same primitive ideal iff their
/// quotient classes coincide.
pub fn same_primitive_ideal(rank: Rank, c1: f64, c2: f64) -> Result<bool> {
    Ok(quotient(rank, c1)? == quotient(rank, c2)?)
}

/// The spectrum of the `h_1` image in the representation at `c`: always the
/// full interval, plus `c` itself as an isolated point when it falls
/// outside.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct H1Spectrum {
    pub lo: f64,
    pub hi: f64,
    pub isolated: Option<f64>,
}

pub fn h1_spectrum_in_rep(rank: Rank, c: f64) -> Result<H1Spectrum> {
    if !c.is_finite() || c.abs() > 1.0 {
        return Err(Error::domain(format!("parameter {c} outside [-1, 1]")));
    }
    let s = spectrum_edge(rank);
    let isolated = if c.abs() <= s + QUOTIENT_EDGE_TOLERANCE {
        None
    } else {
        Some(c)
    };
    Ok(H1Spectrum {
        lo: -s,
        hi: s,
        isolated,
    })
}

// ------------------------------------------------------------------------
// Continuity checker
// ------------------------------------------------------------------------

/// A scalar function on one parameter interval.
#[derive(Clone, PartialEq, Debug)]
pub enum PieceFun {
    Const(f64),
    /// `t -> intercept + slope * t`.
    Affine { intercept: f64, slope: f64 },
    /// At least two values, equispaced over the piece, linearly
    /// interpolated.
    Samples(Vec<f64>),
}

/// One piece of a function descriptor, on `[lo, hi]` within a legal window.
#[derive(Clone, PartialEq, Debug)]
pub struct DescriptorPiece {
    pub lo: f64,
    pub hi: f64,
    pub fun: PieceFun,
}

impl DescriptorPiece {
    fn eval(&self, t: f64) -> f64 {
        match &self.fun {
            PieceFun::Const(v) => *v,
            PieceFun::Affine { intercept, slope } => intercept + slope * t,
            PieceFun::Samples(values) => {
                if t <= self.lo {
                    return values[0];
                }
                if t >= self.hi {
                    return *values.last().expect("validated nonempty");
                }
                let span = (values.len() - 1) as f64;
                let position = (t - self.lo) / (self.hi - self.lo) * span;
                let index = (position.floor() as usize).min(values.len() - 2);
                let frac = position - index as f64;
                values[index] + (values[index + 1] - values[index]) * frac
            }
        }
    }

    /// Points at which the specialization check compares against the value
    /// at `Bot`: for sampled pieces every sample, otherwise endpoints and
    /// midpoint (exact for the affine family).
    fn probe_values(&self) -> Vec<(f64, f64)> {
        match &self.fun {
            PieceFun::Samples(values) => {
                let span = (values.len() - 1) as f64;
                values
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| {
                        (self.lo + (self.hi - self.lo) * i as f64 / span, v)
                    })
                    .collect()
            }
            _ => [self.lo, 0.5 * (self.lo + self.hi), self.hi]
                .into_iter()
                .map(|t| (t, self.eval(t)))
                .collect(),
        }
    }
}

/// A function on the space: values at the three special points plus a
/// piecewise description over the parameter region. Pieces must tile
/// `(-1, -s)` and `(s, 1)` exactly.
#[derive(Clone, PartialEq, Debug)]
pub struct ContinuityDescriptor {
    pub value_at_bot: f64,
    pub value_at_plus: f64,
    pub value_at_minus: f64,
    pub pieces: Vec<DescriptorPiece>,
}

/// Why a descriptor fails to be continuous.
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum Certificate {
    /// A spherical value differs from the value at `Bot`, although `Bot`
    /// lies in the closure of that point.
    SpecializationMismatch { parameter: f64, value: f64, bot_value: f64 },
    /// The lift to `[-1, 1]` jumps at a parameter.
    LiftJump { location: f64, left: f64, right: f64 },
}

impl std::fmt::Display for Certificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Certificate::SpecializationMismatch {
                parameter,
                value,
                bot_value,
            } => write!(
                f,
                "specialization mismatch at point:{parameter} (value {value}, bot {bot_value})"
            ),
            Certificate::LiftJump {
                location,
                left,
                right,
            } => write!(f, "lift jump at {location} ({left} vs {right})"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct ContinuityReport {
    pub continuous: bool,
    pub certificate: Option<Certificate>,
}

fn validate_descriptor(rank: Rank, descriptor: &ContinuityDescriptor) -> Result<()> {
    let s = spectrum_edge(rank);
    for value in [
        descriptor.value_at_bot,
        descriptor.value_at_plus,
        descriptor.value_at_minus,
    ] {
        if !value.is_finite() {
            return Err(Error::domain("descriptor values must be finite"));
        }
    }
    let mut cursor = -1.0f64;
    for piece in &descriptor.pieces {
        if piece.lo != cursor {
            return Err(Error::domain(format!(
                "descriptor pieces leave a gap at {cursor}"
            )));
        }
        // NaN bounds fail here too: the comparison below is false for them.
        if piece.lo.partial_cmp(&piece.hi) != Some(std::cmp::Ordering::Less) {
            return Err(Error::domain("descriptor piece is empty"));
        }
        let in_left = piece.lo >= -1.0 && piece.hi <= -s;
        let in_right = piece.lo >= s && piece.hi <= 1.0;
        if !(in_left || in_right) {
            return Err(Error::domain(format!(
                "descriptor piece [{}, {}] leaves the legal windows",
                piece.lo, piece.hi
            )));
        }
        match &piece.fun {
            PieceFun::Const(v) => {
                if !v.is_finite() {
                    return Err(Error::domain("descriptor values must be finite"));
                }
            }
            PieceFun::Affine { intercept, slope } => {
                if !intercept.is_finite() || !slope.is_finite() {
                    return Err(Error::domain("descriptor values must be finite"));
                }
            }
            PieceFun::Samples(values) => {
                if values.len() < 2 || values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::domain(
                        "sampled piece needs at least two finite values",
                    ));
                }
            }
        }
        cursor = if piece.hi == -s { s } else { piece.hi };
    }
    if cursor != 1.0 {
        return Err(Error::domain(format!(
            "descriptor pieces stop at {cursor} instead of 1"
        )));
    }
    Ok(())
}

/// Decides whether the descriptor defines a continuous function on the
/// space. Two checks run, in order: every spherical value must agree with
/// the value at `Bot` (specialization: `Bot` lies in every `Sph` closure),
/// and the lift to `[-1, 1]` must be continuous (piece junctions, the
/// collapsed-interval edges, and the endpoints `+-1`). Constancy is never
/// assumed; it is what the two checks jointly enforce.
pub fn is_continuous_function(
    rank: Rank,
    descriptor: &ContinuityDescriptor,
) -> Result<ContinuityReport> {
    validate_descriptor(rank, descriptor)?;
    let bot = descriptor.value_at_bot;
    for piece in &descriptor.pieces {
        for (parameter, value) in piece.probe_values() {
            if value != bot {
                return Ok(ContinuityReport {
                    continuous: false,
                    certificate: Some(Certificate::SpecializationMismatch {
                        parameter,
                        value,
                        bot_value: bot,
                    }),
                });
            }
        }
    }
    let s = spectrum_edge(rank);
    let jump = |location: f64, left: f64, right: f64| -> Option<Certificate> {
        if left != right {
            Some(Certificate::LiftJump {
                location,
                left,
                right,
            })
        } else {
            None
        }
    };
    let mut previous = descriptor.value_at_minus;
    let mut previous_location = -1.0f64;
    for piece in &descriptor.pieces {
        // Entering the piece: compare with whatever the lift approaches from
        // the left (the previous piece's limit, a character, or the value
        // across the collapsed interval).
        let incoming = if piece.lo == s && previous_location == -s {
            bot
        } else {
            previous
        };
        if piece.lo == s && previous_location == -s {
            // The collapsed interval also has to join the left side.
            if let Some(certificate) = jump(-s, previous, bot) {
                return Ok(ContinuityReport {
                    continuous: false,
                    certificate: Some(certificate),
                });
            }
        }
        if let Some(certificate) = jump(piece.lo, incoming, piece.eval(piece.lo)) {
            return Ok(ContinuityReport {
                continuous: false,
                certificate: Some(certificate),
            });
        }
        previous = piece.eval(piece.hi);
        previous_location = piece.hi;
    }
    if let Some(certificate) = jump(1.0, previous, descriptor.value_at_plus) {
        return Ok(ContinuityReport {
            continuous: false,
            certificate: Some(certificate),
        });
    }
    Ok(ContinuityReport {
        continuous: true,
        certificate: None,
    })
}

// ------------------------------------------------------------------------
// Randomized instances for property suites
// ------------------------------------------------------------------------

/// A pseudo-random set, kept clear of the representation's exact-equality
/// fringes (margins around `+-s` and `+-1`).
pub fn random_prim_set<R: Rng>(rank: Rank, rng: &mut R) -> PrimSet {
    let s = spectrum_edge(rank);
    let margin = 0.01;
    let mut pieces = Vec::new();
    let piece_count = rng.gen_range(0..=3);
    for _ in 0..piece_count {
        let (window_lo, window_hi) = if rng.gen_bool(0.5) {
            (-1.0 + margin, -s - margin)
        } else {
            (s + margin, 1.0 - margin)
        };
        if rng.gen_bool(0.3) {
            pieces.push(Interval::point(rng.gen_range(window_lo..window_hi)));
        } else {
            let a = rng.gen_range(window_lo..window_hi);
            let b = rng.gen_range(window_lo..window_hi);
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            if lo == hi {
                pieces.push(Interval::point(lo));
            } else {
                pieces.push(Interval {
                    lo,
                    hi,
                    lo_closed: rng.gen_bool(0.5),
                    hi_closed: rng.gen_bool(0.5),
                });
            }
        }
    }
    PrimSet::from_parts(
        rank,
        rng.gen_bool(0.5),
        rng.gen_bool(0.5),
        rng.gen_bool(0.5),
        pieces,
    )
    .expect("generated pieces are legal")
}

/// A pseudo-random function descriptor together with the ground truth of
/// whether it is constant. Roughly half are constant; the rest perturb one
/// ingredient (a character value, the value at `Bot`, a slope, a sample).
pub fn random_descriptor<R: Rng>(
    rank: Rank,
    rng: &mut R,
) -> (ContinuityDescriptor, bool) {
    let s = spectrum_edge(rank);
    let base = (rng.gen_range(-4i32..=4) as f64) / 2.0;
    let mut pieces = Vec::new();
    for (window_lo, window_hi) in [(-1.0, -s), (s, 1.0)] {
        let split_count = rng.gen_range(1..=3usize);
        let mut cuts = vec![window_lo];
        for _ in 1..split_count {
            cuts.push(rng.gen_range(window_lo + 0.01..window_hi - 0.01));
        }
        cuts.push(window_hi);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        for pair in cuts.windows(2) {
            let fun = match rng.gen_range(0..3) {
                0 => PieceFun::Const(base),
                1 => PieceFun::Affine {
                    intercept: base,
                    slope: 0.0,
                },
                _ => PieceFun::Samples(vec![base; rng.gen_range(2..=5)]),
            };
            pieces.push(DescriptorPiece {
                lo: pair[0],
                hi: pair[1],
                fun,
            });
        }
    }
    let mut descriptor = ContinuityDescriptor {
        value_at_bot: base,
        value_at_plus: base,
        value_at_minus: base,
        pieces,
    };
    let constant = rng.gen_bool(0.5);
    if !constant {
        let bump = if rng.gen_bool(0.5) { 0.25 } else { -1.0 };
        match rng.gen_range(0..5) {
            0 => descriptor.value_at_plus += bump,
            1 => descriptor.value_at_minus += bump,
            2 => descriptor.value_at_bot += bump,
            3 => {
                let index = rng.gen_range(0..descriptor.pieces.len());
                descriptor.pieces[index].fun = PieceFun::Affine {
                    intercept: base,
                    slope: bump,
                };
            }
            _ => {
                let index = rng.gen_range(0..descriptor.pieces.len());
                let mut values = vec![base; 4];
                values[rng.gen_range(1..3)] += bump;
                descriptor.pieces[index].fun = PieceFun::Samples(values);
            }
        }
    }
    (descriptor, constant)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rank(l: usize) -> Rank {
        Rank::new(l).unwrap()
    }

    fn parse(text: &str) -> PrimSet {
        parse_set_spec(rank(2), text).unwrap()
    }

    #[test]
    fn quotient_collapses_the_spectral_interval() {
        assert_eq!(quotient(rank(2), 0.5).unwrap(), PrimPoint::Bot);
        assert_eq!(quotient(rank(2), 1.0).unwrap(), PrimPoint::CharPlus);
        assert_eq!(quotient(rank(2), -1.0).unwrap(), PrimPoint::CharMinus);
        assert_eq!(quotient(rank(2), 0.9).unwrap(), PrimPoint::Sph(0.9));
        let s = spectrum_edge(rank(2));
        assert_eq!(quotient(rank(2), s + 5e-13).unwrap(), PrimPoint::Bot);
        assert!(matches!(
            quotient(rank(2), s + 1e-6).unwrap(),
            PrimPoint::Sph(_)
        ));
        assert!(quotient(rank(2), 1.0 + 1e-9).is_err());
        assert!(quotient(rank(2), f64::NAN).is_err());
    }

    #[test]
    fn closure_of_a_spherical_point_adds_bot() {
        let single = PrimSet::singleton(rank(2), PrimPoint::Sph(0.9)).unwrap();
        let closed = single.closure();
        assert_eq!(closed, parse("point:0.9,bot"));
        assert_eq!(closed.to_string(), "point:0.9,bot");
        assert!(!single.is_closed());
        assert!(closed.is_closed());
    }

    #[test]
    fn characters_and_bot_are_closed_points() {
        for point in [PrimPoint::Bot, PrimPoint::CharPlus, PrimPoint::CharMinus] {
            let single = PrimSet::singleton(rank(2), point).unwrap();
            assert_eq!(single.closure(), single);
            assert!(single.is_closed());
        }
    }

    #[test]
    fn closure_of_open_interval_adds_endpoint_images() {
        let s = spectrum_edge(rank(2));
        let set = PrimSet::from_parts(
            rank(2),
            false,
            false,
            false,
            vec![Interval {
                lo: s,
                hi: 1.0,
                lo_closed: false,
                hi_closed: false,
            }],
        )
        .unwrap();
        let closed = set.closure();
        assert!(closed.has_bot() && closed.has_char_plus() && !closed.has_char_minus());
        assert_eq!(closed.pieces(), set.pieces());

        let interior = parse("interval:(0.87,0.95)");
        let closed = interior.closure();
        assert_eq!(closed, parse("interval:[0.87,0.95],bot"));
    }

    #[test]
    fn closure_satisfies_the_kuratowski_laws_on_random_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!(PrimSet::empty(rank(2)).closure().is_empty());
        for _ in 0..250 {
            let a = random_prim_set(rank(2), &mut rng);
            let b = random_prim_set(rank(2), &mut rng);
            let ca = a.closure();
            assert!(a.is_subset_of(&ca).unwrap());
            assert_eq!(ca.closure(), ca);
            assert_eq!(
                a.union(&b).unwrap().closure(),
                ca.union(&b.closure()).unwrap()
            );
        }
    }

    #[test]
    fn complement_involutes_and_detects_open_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let set = random_prim_set(rank(2), &mut rng);
            assert_eq!(set.complement().complement(), set);
        }
        // A relatively open parameter interval with no flags is open.
        assert!(parse("interval:(0.87,0.95)").is_open());
        assert!(!parse("interval:(0.87,0.95)").is_closed());
        assert!(!parse("interval:[0.87,0.95]").is_open());
        // The whole space and the empty set are clopen.
        assert!(PrimSet::empty(rank(2)).is_open());
        assert!(PrimSet::empty(rank(2)).is_closed());
        let whole = PrimSet::empty(rank(2)).complement();
        assert!(whole.is_open() && whole.is_closed());
    }

    #[test]
    fn specialization_order_is_sph_above_bot() {
        let sph = PrimPoint::Sph(0.9);
        assert!(specializes(rank(2), sph, PrimPoint::Bot).unwrap());
        assert!(!specializes(rank(2), PrimPoint::Bot, sph).unwrap());
        assert!(specializes(rank(2), sph, sph).unwrap());
        assert!(!specializes(rank(2), sph, PrimPoint::Sph(0.95)).unwrap());
        assert!(specializes(rank(2), PrimPoint::CharPlus, PrimPoint::CharPlus).unwrap());
        assert!(!specializes(rank(2), PrimPoint::CharPlus, PrimPoint::Bot).unwrap());
    }

    #[test]
    fn t0_holds_and_t1_fails_exactly_at_spherical_points() {
        let points = [
            PrimPoint::Bot,
            PrimPoint::CharPlus,
            PrimPoint::CharMinus,
            PrimPoint::Sph(0.9),
            PrimPoint::Sph(-0.95),
        ];
        for (i, &p) in points.iter().enumerate() {
            let closure_p = PrimSet::singleton(rank(2), p).unwrap().closure();
            for (j, &q) in points.iter().enumerate() {
                let closure_q = PrimSet::singleton(rank(2), q).unwrap().closure();
                if i != j {
                    assert_ne!(closure_p, closure_q, "closures of {p} and {q}");
                }
            }
            let t1 = PrimSet::singleton(rank(2), p).unwrap().is_closed();
            assert_eq!(t1, !matches!(p, PrimPoint::Sph(_)));
        }
    }

    #[test]
    fn ideal_identification_follows_the_quotient() {
        assert!(same_primitive_ideal(rank(2), 0.1, 0.2).unwrap());
        assert!(!same_primitive_ideal(rank(2), 0.9, 0.95).unwrap());
        assert!(same_primitive_ideal(rank(2), 0.9, 0.9).unwrap());
        assert!(same_primitive_ideal(rank(2), 1.0, 1.0).unwrap());
        assert!(!same_primitive_ideal(rank(2), 1.0, 0.9).unwrap());
        assert!(same_primitive_ideal(rank(2), 1.5, 0.0).is_err());
    }

    #[test]
    fn spectrum_map_separates_exactly_like_the_quotient() {
        let s = spectrum_edge(rank(2));
        let spectrum = h1_spectrum_in_rep(rank(2), 0.9).unwrap();
        assert_eq!(spectrum.isolated, Some(0.9));
        assert_eq!((spectrum.lo, spectrum.hi), (-s, s));
        assert_eq!(h1_spectrum_in_rep(rank(2), 0.0).unwrap().isolated, None);
        assert_eq!(
            h1_spectrum_in_rep(rank(2), -1.0).unwrap().isolated,
            Some(-1.0)
        );
        let samples = [-1.0, -0.95, -0.9, -0.3, 0.0, 0.5, 0.87, 0.9, 0.95, 1.0];
        for &a in &samples {
            for &b in &samples {
                let by_ideal = same_primitive_ideal(rank(2), a, b).unwrap();
                let by_spectrum = h1_spectrum_in_rep(rank(2), a).unwrap()
                    == h1_spectrum_in_rep(rank(2), b).unwrap();
                assert_eq!(by_ideal, by_spectrum, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn set_language_round_trips_and_canonicalizes() {
        let set = parse("interval:(0.87,0.95],char+");
        assert_eq!(set.to_string(), "interval:(0.87,0.95],char+");
        assert_eq!(parse(&set.to_string()), set);
        // A point at an open end joins the interval.
        assert_eq!(
            parse("point:0.9,interval:(0.87,0.9)").to_string(),
            "interval:(0.87,0.9]"
        );
        // Overlap merges, flags deduplicate, order is canonical.
        assert_eq!(
            parse("bot,interval:(0.9,0.95),interval:(0.88,0.92],bot").to_string(),
            "interval:(0.88,0.95),bot"
        );
        assert_eq!(parse("").to_string(), "");
        assert_eq!(
            parse("char-,point:-0.9,bot").to_string(),
            "point:-0.9,bot,char-"
        );
    }

    #[test]
    fn malformed_sets_are_rejected() {
        assert!(parse_set_spec(rank(2), "point:0.5").is_err());
        assert!(parse_set_spec(rank(2), "interval:(0.5,0.9)").is_err());
        assert!(parse_set_spec(rank(2), "interval:[0.9,0.87]").is_err());
        assert!(parse_set_spec(rank(2), "interval:[0.9,1.0]").is_err());
        assert!(parse_set_spec(rank(2), "interval:(0.9,1.0)").is_ok());
        assert!(parse_set_spec(rank(2), "nonsense").is_err());
        assert!(parse_set_spec(rank(2), "point:abc").is_err());
        assert!(parse_set_spec(rank(2), "interval:0.9,0.95").is_err());
        let s = spectrum_edge(rank(2));
        assert!(parse_set_spec(rank(2), &format!("interval:[{s},0.9)")).is_err());
        assert!(parse_set_spec(rank(2), &format!("interval:({s},0.9)")).is_ok());
    }

    #[test]
    fn constant_descriptors_are_continuous() {
        let s = spectrum_edge(rank(2));
        let descriptor = ContinuityDescriptor {
            value_at_bot: 3.7,
            value_at_plus: 3.7,
            value_at_minus: 3.7,
            pieces: vec![
                DescriptorPiece {
                    lo: -1.0,
                    hi: -s,
                    fun: PieceFun::Const(3.7),
                },
                DescriptorPiece {
                    lo: s,
                    hi: 1.0,
                    fun: PieceFun::Const(3.7),
                },
            ],
        };
        let report = is_continuous_function(rank(2), &descriptor).unwrap();
        assert!(report.continuous);
        assert!(report.certificate.is_none());
    }

    #[test]
    fn the_parameter_function_fails_specialization() {
        let s = spectrum_edge(rank(2));
        let descriptor = ContinuityDescriptor {
            value_at_bot: 0.0,
            value_at_plus: 1.0,
            value_at_minus: -1.0,
            pieces: vec![
                DescriptorPiece {
                    lo: -1.0,
                    hi: -s,
                    fun: PieceFun::Affine {
                        intercept: 0.0,
                        slope: 1.0,
                    },
                },
                DescriptorPiece {
                    lo: s,
                    hi: 1.0,
                    fun: PieceFun::Affine {
                        intercept: 0.0,
                        slope: 1.0,
                    },
                },
            ],
        };
        let report = is_continuous_function(rank(2), &descriptor).unwrap();
        assert!(!report.continuous);
        assert!(matches!(
            report.certificate,
            Some(Certificate::SpecializationMismatch { .. })
        ));
    }

    #[test]
    fn a_character_bump_fails_lift_continuity() {
        let s = spectrum_edge(rank(2));
        let descriptor = ContinuityDescriptor {
            value_at_bot: 0.0,
            value_at_plus: 1.0,
            value_at_minus: 0.0,
            pieces: vec![
                DescriptorPiece {
                    lo: -1.0,
                    hi: -s,
                    fun: PieceFun::Const(0.0),
                },
                DescriptorPiece {
                    lo: s,
                    hi: 1.0,
                    fun: PieceFun::Const(0.0),
                },
            ],
        };
        let report = is_continuous_function(rank(2), &descriptor).unwrap();
        assert!(!report.continuous);
        match report.certificate {
            Some(Certificate::LiftJump { location, .. }) => assert_eq!(location, 1.0),
            other => panic!("expected a lift jump, got {other:?}"),
        }
    }

    #[test]
    fn malformed_descriptors_are_domain_errors() {
        let s = spectrum_edge(rank(2));
        let gap = ContinuityDescriptor {
            value_at_bot: 0.0,
            value_at_plus: 0.0,
            value_at_minus: 0.0,
            pieces: vec![DescriptorPiece {
                lo: s,
                hi: 1.0,
                fun: PieceFun::Const(0.0),
            }],
        };
        assert!(is_continuous_function(rank(2), &gap).is_err());
        let short_samples = ContinuityDescriptor {
            value_at_bot: 0.0,
            value_at_plus: 0.0,
            value_at_minus: 0.0,
            pieces: vec![
                DescriptorPiece {
                    lo: -1.0,
                    hi: -s,
                    fun: PieceFun::Samples(vec![0.0]),
                },
                DescriptorPiece {
                    lo: s,
                    hi: 1.0,
                    fun: PieceFun::Const(0.0),
                },
            ],
        };
        assert!(is_continuous_function(rank(2), &short_samples).is_err());
    }

    #[test]
    fn random_descriptors_are_continuous_exactly_when_constant() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..250 {
            let (descriptor, constant) = random_descriptor(rank(2), &mut rng);
            let report = is_continuous_function(rank(2), &descriptor).unwrap();
            assert_eq!(report.continuous, constant, "descriptor {descriptor:?}");
            assert_eq!(report.certificate.is_none(), constant);
        }
    }
}
