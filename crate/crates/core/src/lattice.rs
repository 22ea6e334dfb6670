//! The rank-two Néron-Severi lattice of an elliptic K3 with a section and the
//! algebraic Mukai lattice `Z ⊕ NS ⊕ Z` built on top of it.
//!
//! Curve classes are written `a·s + b·f` where `s` is the section and `f` the
//! fiber, with Gram matrix `[[-2, 1], [1, 0]]`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};

/// A curve class `a·s + b·f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct CurveClass {
    pub a: i64,
    pub b: i64,
}

impl CurveClass {
    pub const ZERO: CurveClass = CurveClass { a: 0, b: 0 };
    pub const SECTION: CurveClass = CurveClass { a: 1, b: 0 };
    pub const FIBER: CurveClass = CurveClass { a: 0, b: 1 };

    pub const fn new(a: i64, b: i64) -> Self {
        Self { a, b }
    }

    /// Truncation weight `a + b`.
    pub const fn weight(self) -> i64 {
        self.a + self.b
    }

    pub const fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Intersection form through the Gram matrix.
    pub const fn dot(self, other: CurveClass) -> i64 {
        -2 * self.a * other.a + self.a * other.b + self.b * other.a
    }

    /// `β² = 2ab − 2a²`.
    pub const fn square(self) -> i64 {
        self.dot(self)
    }

    /// Arithmetic genus `h` with `β² = 2h − 2`.
    pub const fn genus(self) -> i64 {
        self.square() / 2 + 1
    }

    /// Membership in the cone spanned by `s` and `f`.
    pub const fn is_effective(self) -> bool {
        self.a >= 0 && self.b >= 0 && !self.is_zero()
    }

    pub fn divisibility(self) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::Domain("divisibility of the zero class".into()));
        }
        Ok(self.a.gcd(&self.b))
    }

    pub const fn scale(self, k: i64) -> Self {
        Self::new(self.a * k, self.b * k)
    }

    pub const fn add(self, other: CurveClass) -> Self {
        Self::new(self.a + other.a, self.b + other.b)
    }

    pub const fn neg(self) -> Self {
        Self::new(-self.a, -self.b)
    }

    /// Exact quotient by `k`, if `k` divides both coordinates.
    pub fn div_exact(self, k: i64) -> Option<Self> {
        (k != 0 && self.a % k == 0 && self.b % k == 0).then(|| Self::new(self.a / k, self.b / k))
    }
}

// Ordered by (weight, a); this is the canonical output order everywhere.
impl Ord for CurveClass {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.weight(), self.a).cmp(&(other.weight(), other.a))
    }
}

impl PartialOrd for CurveClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.a, self.b)
    }
}

impl FromStr for CurveClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| Error::Parameter(format!("curve class {s:?} is not of the form \"a,b\"")))?;
        Ok(Self::new(parse_int(a)?, parse_int(b)?))
    }
}

fn parse_int(s: &str) -> Result<i64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parameter(format!("{s:?} is not an integer")))
}

/// All effective classes of weight `1..=y_max`, ordered by `(a + b, a)`.
pub fn enumerate_effective(y_max: i64) -> Vec<CurveClass> {
    let mut out = Vec::new();
    for w in 1..=y_max {
        for a in 0..=w {
            out.push(CurveClass::new(a, w - a));
        }
    }
    out
}

/// A Mukai vector `(r, β, n)` in `Z ⊕ NS ⊕ Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MukaiVector {
    pub r: i64,
    pub beta: CurveClass,
    pub n: i64,
}

impl MukaiVector {
    pub const fn new(r: i64, beta: CurveClass, n: i64) -> Self {
        Self { r, beta, n }
    }

    pub const fn is_zero(self) -> bool {
        self.r == 0 && self.beta.is_zero() && self.n == 0
    }

    /// `(v, v) = β² − 2rn`, always even.
    pub const fn square(self) -> i64 {
        mukai_pairing(self, self)
    }

    /// Largest `k` dividing every coordinate `(r, a, b, n)`.
    pub fn divisibility(self) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::Domain("divisibility of the zero Mukai vector".into()));
        }
        Ok(self.r.gcd(&self.beta.a).gcd(&self.beta.b).gcd(&self.n))
    }

    pub fn div_exact(self, k: i64) -> Option<Self> {
        let beta = self.beta.div_exact(k)?;
        (self.r % k == 0 && self.n % k == 0).then(|| Self::new(self.r / k, beta, self.n / k))
    }

    pub const fn neg(self) -> Self {
        Self::new(-self.r, self.beta.neg(), -self.n)
    }

    pub const fn add(self, other: Self) -> Self {
        Self::new(self.r + other.r, self.beta.add(other.beta), self.n + other.n)
    }

    pub const fn scale(self, k: i64) -> Self {
        Self::new(self.r * k, self.beta.scale(k), self.n * k)
    }
}

impl fmt::Display for MukaiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{};{}", self.r, self.beta, self.n)
    }
}

impl FromStr for MukaiVector {
    type Err = Error;

    /// Parses `"r;a,b;n"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(';').collect();
        let [r, beta, n] = parts.as_slice() else {
            return Err(Error::Parameter(format!(
                "Mukai vector {s:?} is not of the form \"r;a,b;n\""
            )));
        };
        Ok(Self::new(parse_int(r)?, beta.parse()?, parse_int(n)?))
    }
}

/// `(v₁, v₂) = β₁·β₂ − r₁n₂ − r₂n₁`.
pub const fn mukai_pairing(v1: MukaiVector, v2: MukaiVector) -> i64 {
    v1.beta.dot(v2.beta) - v1.r * v2.n - v2.r * v1.n
}

/// Generators of the isometries acting on the algebraic Mukai lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HodgeIsometry {
    /// `(r, β, n) ↦ (n, β, r)`.
    Swap,
    /// `(r, β, n) ↦ (r, −β, n)`.
    SignH2,
    /// `(r, β, n) ↦ (−r, β, −n)`.
    NegateRn,
    /// `x ↦ x + (x, w)·w`, defined when `(w, w) = −2`.
    Reflection(MukaiVector),
    /// Applies the listed isometries left to right.
    Composition(Vec<HodgeIsometry>),
}

impl HodgeIsometry {
    pub fn apply(&self, v: MukaiVector) -> Result<MukaiVector> {
        let image = match self {
            HodgeIsometry::Swap => MukaiVector::new(v.n, v.beta, v.r),
            HodgeIsometry::SignH2 => MukaiVector::new(v.r, v.beta.neg(), v.n),
            HodgeIsometry::NegateRn => MukaiVector::new(-v.r, v.beta, -v.n),
            HodgeIsometry::Reflection(w) => {
                if w.square() != -2 {
                    return Err(Error::Domain(format!(
                        "reflection vector {w} has square {}, expected -2",
                        w.square()
                    )));
                }
                v.add(w.scale(mukai_pairing(v, *w)))
            }
            HodgeIsometry::Composition(steps) => {
                return steps.iter().try_fold(v, |acc, g| g.apply(acc));
            }
        };
        assert_eq!(image.square(), v.square(), "isometry failed to preserve the pairing");
        Ok(image)
    }

    /// Swap, sign and negation generators plus reflections in three `(−2)`-vectors.
    pub fn generators() -> Vec<HodgeIsometry> {
        vec![
            HodgeIsometry::Swap,
            HodgeIsometry::SignH2,
            HodgeIsometry::NegateRn,
            HodgeIsometry::Reflection(MukaiVector::new(1, CurveClass::new(1, 2), 2)),
            HodgeIsometry::Reflection(MukaiVector::new(0, CurveClass::SECTION, 0)),
            HodgeIsometry::Reflection(MukaiVector::new(1, CurveClass::ZERO, 1)),
        ]
    }
}

pub fn apply_isometry(g: &HodgeIsometry, v: MukaiVector) -> Result<MukaiVector> {
    g.apply(v)
}
