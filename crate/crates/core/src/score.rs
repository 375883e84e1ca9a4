//! Discrimination score functions of the support pair `(a, b)` =
//! (positive graphs containing g, negative graphs containing g).

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};

/// A real score extended with `±∞`. Never NaN; `-0.0` is normalized to `0.0`.
#[derive(Debug, Clone, Copy)]
pub struct ExtendedScore(f64);

impl ExtendedScore {
    pub const INFINITY: ExtendedScore = ExtendedScore(f64::INFINITY);
    pub const NEG_INFINITY: ExtendedScore = ExtendedScore(f64::NEG_INFINITY);
    pub const ZERO: ExtendedScore = ExtendedScore(0.0);

    pub fn try_new(v: f64) -> Option<Self> {
        if v.is_nan() {
            None
        } else if v == 0.0 {
            Some(ExtendedScore(0.0))
        } else {
            Some(ExtendedScore(v))
        }
    }

    /// Panics on NaN.
    pub fn new(v: f64) -> Self {
        Self::try_new(v).expect("score must not be NaN")
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    /// Approximate equality: identical infinities, or finite values within
    /// `tol` absolutely or relative to the larger magnitude.
    pub fn approx_eq(self, other: ExtendedScore, tol: f64) -> bool {
        if self.0 == other.0 {
            return true;
        }
        if !self.is_finite() || !other.is_finite() {
            return false;
        }
        let d = libm::fabs(self.0 - other.0);
        d <= tol || d <= tol * libm::fmax(libm::fabs(self.0), libm::fabs(other.0))
    }
}

impl PartialEq for ExtendedScore {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl Eq for ExtendedScore {}

impl PartialOrd for ExtendedScore {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedScore {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl From<f64> for ExtendedScore {
    fn from(v: f64) -> Self {
        ExtendedScore::new(v)
    }
}

impl fmt::Display for ExtendedScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == f64::INFINITY {
            f.write_str("inf")
        } else if self.0 == f64::NEG_INFINITY {
            f.write_str("-inf")
        } else {
            fmt::Display::fmt(&self.0, f)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScoreKind {
    Confidence,
    FrequencyRatio,
    GTest,
    HsicLinear,
}

impl ScoreKind {
    pub const ALL: [ScoreKind; 4] =
        [ScoreKind::Confidence, ScoreKind::FrequencyRatio, ScoreKind::GTest, ScoreKind::HsicLinear];

    /// Command-line name.
    pub fn name(self) -> &'static str {
        match self {
            ScoreKind::Confidence => "conf",
            ScoreKind::FrequencyRatio => "ratio",
            ScoreKind::GTest => "gtest",
            ScoreKind::HsicLinear => "hsic",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    /// Whether some admissible support pair scores `+∞`.
    pub fn can_be_infinite(self) -> bool {
        matches!(self, ScoreKind::FrequencyRatio | ScoreKind::GTest)
    }

    /// Default φ threshold used with the φ-probability measure.
    pub fn default_phi(self) -> f64 {
        match self {
            ScoreKind::HsicLinear => 0.03,
            ScoreKind::GTest => 200.0,
            ScoreKind::FrequencyRatio => 1.0,
            ScoreKind::Confidence => 0.5,
        }
    }
}

/// Score function plus optional capping at `1/cap_epsilon` (0 disables).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreFunctionSpec {
    pub kind: ScoreKind,
    pub cap_epsilon: f64,
}

impl ScoreFunctionSpec {
    pub fn new(kind: ScoreKind, cap_epsilon: f64) -> Result<Self> {
        if !cap_epsilon.is_finite() || cap_epsilon < 0.0 {
            return Err(Error::Config(format!("cap_epsilon must be a finite value >= 0, got {cap_epsilon}")));
        }
        Ok(ScoreFunctionSpec { kind, cap_epsilon })
    }

    pub fn uncapped(kind: ScoreKind) -> Self {
        ScoreFunctionSpec { kind, cap_epsilon: 0.0 }
    }

    #[inline]
    fn cap(&self, s: f64) -> f64 {
        if self.cap_epsilon > 0.0 {
            let c = 1.0 / self.cap_epsilon;
            if s > c {
                return c;
            }
        }
        s
    }
}

fn check_counts(a: usize, b: usize, n_pos: usize, n_neg: usize) -> Result<()> {
    if n_pos == 0 || n_neg == 0 || a > n_pos || b > n_neg {
        return Err(Error::Contract(format!(
            "score arguments out of range: a={a}, b={b}, n_pos={n_pos}, n_neg={n_neg}"
        )));
    }
    Ok(())
}

/// `2·x·ln(num/den)` with `x = 0 ↦ 0` and `den = 0 ↦ +∞`.
fn g_term(x: f64, num: f64, den: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if den == 0.0 {
        f64::INFINITY
    } else {
        2.0 * x * libm::log(num / den)
    }
}

/// Uncapped score; counts are assumed valid.
pub(crate) fn raw_score(kind: ScoreKind, a: usize, b: usize, n_pos: usize, n_neg: usize) -> f64 {
    let (a, b, np, nn) = (a as f64, b as f64, n_pos as f64, n_neg as f64);
    match kind {
        ScoreKind::Confidence => {
            if a + b == 0.0 {
                0.0
            } else {
                a / (a + b)
            }
        }
        ScoreKind::FrequencyRatio => {
            if a == 0.0 && b == 0.0 {
                0.0
            } else if a == 0.0 || b == 0.0 {
                f64::INFINITY
            } else {
                libm::fabs(libm::log((a * nn) / (b * np)))
            }
        }
        ScoreKind::GTest => g_term(a, a * nn, b * np) + g_term(np - a, nn * (np - a), np * (nn - b)),
        ScoreKind::HsicLinear => {
            let n = np + nn;
            let d = a * nn - b * np;
            (d * d) / ((n - 1.0) * (n - 1.0) * n * n)
        }
    }
}

/// `f(a, b; n_pos, n_neg)` with capping applied when enabled.
pub fn eval_score(spec: &ScoreFunctionSpec, a: usize, b: usize, n_pos: usize, n_neg: usize) -> Result<ExtendedScore> {
    check_counts(a, b, n_pos, n_neg)?;
    Ok(ExtendedScore::new(spec.cap(raw_score(spec.kind, a, b, n_pos, n_neg))))
}

/// Maximum score over every support pair dominated by `(a, b)`.
///
/// Any supergraph of g has, in every world, supports `a' ≤ a` and `b' ≤ b`,
/// so this bounds the per-world score of all supergraphs.
pub fn upper_envelope(
    spec: &ScoreFunctionSpec,
    a: usize,
    b: usize,
    n_pos: usize,
    n_neg: usize,
) -> Result<ExtendedScore> {
    check_counts(a, b, n_pos, n_neg)?;
    let mut best = f64::NEG_INFINITY;
    for x in 0..=a {
        for y in 0..=b {
            let s = raw_score(spec.kind, x, y, n_pos, n_neg);
            if s > best {
                best = s;
            }
        }
    }
    Ok(ExtendedScore::new(spec.cap(best)))
}

/// Dense `(n_pos+1) × (n_neg+1)` table of scores indexed by support pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    n_pos: usize,
    n_neg: usize,
    cells: Vec<ExtendedScore>,
}

impl ScoreTable {
    /// Table of `eval_score` over every admissible support pair.
    pub fn scores(spec: &ScoreFunctionSpec, n_pos: usize, n_neg: usize) -> Result<Self> {
        check_counts(0, 0, n_pos, n_neg)?;
        let mut cells = Vec::with_capacity((n_pos + 1) * (n_neg + 1));
        for a in 0..=n_pos {
            for b in 0..=n_neg {
                cells.push(ExtendedScore::new(spec.cap(raw_score(spec.kind, a, b, n_pos, n_neg))));
            }
        }
        Ok(ScoreTable { n_pos, n_neg, cells })
    }

    /// Table of `upper_envelope` built with the running-max recurrence
    /// `t[a][b] = max(f(a,b), t[a-1][b], t[a][b-1])`.
    pub fn envelope(spec: &ScoreFunctionSpec, n_pos: usize, n_neg: usize) -> Result<Self> {
        let mut t = Self::scores(spec, n_pos, n_neg)?;
        let w = n_neg + 1;
        for a in 0..=n_pos {
            for b in 0..=n_neg {
                let mut m = t.cells[a * w + b];
                if a > 0 {
                    m = m.max(t.cells[(a - 1) * w + b]);
                }
                if b > 0 {
                    m = m.max(t.cells[a * w + b - 1]);
                }
                t.cells[a * w + b] = m;
            }
        }
        Ok(t)
    }

    pub fn n_pos(&self) -> usize {
        self.n_pos
    }

    pub fn n_neg(&self) -> usize {
        self.n_neg
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> ExtendedScore {
        self.cells[a * (self.n_neg + 1) + b]
    }
}

/// Precomputed envelope for a fixed score function and class sizes.
pub fn envelope_table(spec: &ScoreFunctionSpec, n_pos: usize, n_neg: usize) -> Result<ScoreTable> {
    ScoreTable::envelope(spec, n_pos, n_neg)
}
