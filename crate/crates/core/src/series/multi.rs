//! Series in `y^β z^n` truncated by class weight and a `z`-window.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{binomial, int, Rational};
use crate::error::{Error, Result};
use crate::lattice::CurveClass;

/// Truncation parameters shared by every [`MultiSeries`] operand.
///
/// Terms of class weight above `y_max` or with `z`-exponent outside
/// `[z_lo, z_hi]` are discarded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Truncation {
    pub y_max: i64,
    pub z_lo: i64,
    pub z_hi: i64,
}

impl Truncation {
    pub fn new(y_max: i64, z_lo: i64, z_hi: i64) -> Result<Self> {
        if y_max < 0 {
            return Err(Error::Parameter(format!("y_max must be >= 0, got {y_max}")));
        }
        if z_lo > z_hi {
            return Err(Error::Parameter(format!("empty z-window [{z_lo}, {z_hi}]")));
        }
        Ok(Self { y_max, z_lo, z_hi })
    }

    /// Symmetric window `[-z, z]`.
    pub fn symmetric(y_max: i64, z: i64) -> Result<Self> {
        Self::new(y_max, -z, z)
    }

    pub fn keeps(&self, class: CurveClass, z: i64) -> bool {
        class.weight() <= self.y_max && (self.z_lo..=self.z_hi).contains(&z)
    }

    pub fn z_width(&self) -> usize {
        (self.z_hi - self.z_lo + 1) as usize
    }

    fn intersect(&self, other: &Truncation) -> Result<Truncation> {
        if self.y_max != other.y_max {
            return Err(Error::Parameter(format!(
                "mismatched y_max: {} vs {}",
                self.y_max, other.y_max
            )));
        }
        let (lo, hi) = (self.z_lo.max(other.z_lo), self.z_hi.min(other.z_hi));
        if lo > hi {
            return Err(Error::Parameter(format!(
                "disjoint z-windows [{}, {}] and [{}, {}]",
                self.z_lo, self.z_hi, other.z_lo, other.z_hi
            )));
        }
        Ok(Truncation { y_max: self.y_max, z_lo: lo, z_hi: hi })
    }
}

/// Sparse truncated series `Σ c(β, n) y^β z^n`.
///
/// The zero class carries the constant term and any pure-`z` terms. Zero
/// coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiSeries {
    trunc: Truncation,
    coeffs: BTreeMap<(CurveClass, i64), Rational>,
}

impl MultiSeries {
    pub fn zero(trunc: Truncation) -> Self {
        Self { trunc, coeffs: BTreeMap::new() }
    }

    pub fn one(trunc: Truncation) -> Self {
        Self::monomial(trunc, CurveClass::ZERO, 0, int(1))
    }

    /// `coeff · y^class z^z`, or zero if the monomial is truncated away.
    pub fn monomial(trunc: Truncation, class: CurveClass, z: i64, coeff: Rational) -> Self {
        let mut s = Self::zero(trunc);
        s.add_term(class, z, coeff);
        s
    }

    pub fn from_terms<I>(trunc: Truncation, terms: I) -> Self
    where
        I: IntoIterator<Item = (CurveClass, i64, Rational)>,
    {
        let mut s = Self::zero(trunc);
        for (class, z, c) in terms {
            s.add_term(class, z, c);
        }
        s
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    pub fn coeff(&self, class: CurveClass, z: i64) -> Rational {
        self.coeffs.get(&(class, z)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (CurveClass, i64, &Rational)> {
        self.coeffs.iter().map(|(&(c, z), v)| (c, z, v))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The zero series stores no terms.
    pub fn is_zero(&self) -> bool {
        self.is_empty()
    }

    /// Adds `c · y^class z^z` in place, respecting truncation.
    pub fn add_term(&mut self, class: CurveClass, z: i64, c: Rational) {
        if c.is_zero() || !self.trunc.keeps(class, z) {
            return;
        }
        let slot = self.coeffs.entry((class, z)).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&(class, z));
        }
    }

    pub fn add(&self, other: &MultiSeries) -> Result<MultiSeries> {
        let trunc = self.trunc.intersect(&other.trunc)?;
        let mut out = MultiSeries::zero(trunc);
        for (c, z, v) in self.terms().chain(other.terms()) {
            out.add_term(c, z, v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiSeries {
        self.scale(&-int(1))
    }

    pub fn scale(&self, k: &Rational) -> MultiSeries {
        let mut out = MultiSeries::zero(self.trunc);
        for (c, z, v) in self.terms() {
            out.add_term(c, z, v * k);
        }
        out
    }

    /// Same coefficients under a narrower window (and possibly lower `y_max`).
    pub fn restrict(&self, trunc: Truncation) -> MultiSeries {
        let mut out = MultiSeries::zero(trunc);
        for (c, z, v) in self.terms() {
            out.add_term(c, z, v.clone());
        }
        out
    }

    /// Part of class weight exactly `w`.
    pub fn weight_part(&self, w: i64) -> MultiSeries {
        Self::from_terms(
            self.trunc,
            self.terms().filter(|(c, _, _)| c.weight() == w).map(|(c, z, v)| (c, z, v.clone())),
        )
    }

    /// Multiplies every coefficient by the weight of its class.
    fn weight_derivative(&self) -> MultiSeries {
        Self::from_terms(
            self.trunc,
            self.terms().map(|(c, z, v)| (c, z, v * int(c.weight()))),
        )
    }

    /// Truncated product. Terms are grouped by class and the `z`-parts of each
    /// class pair are convolved as dense vectors over the common window.
    pub fn mul(&self, other: &MultiSeries) -> Result<MultiSeries> {
        let trunc = self.trunc.intersect(&other.trunc)?;
        let lhs = ClassBlocks::new(self);
        let rhs = ClassBlocks::new(other);
        let mut out = MultiSeries::zero(trunc);
        for (ca, za, va) in &lhs.blocks {
            for (cb, zb, vb) in &rhs.blocks {
                let class = ca.add(*cb);
                if class.weight() > trunc.y_max {
                    // rhs is sorted by weight
                    break;
                }
                let base = za + zb;
                let mut acc = vec![Rational::zero(); va.len() + vb.len() - 1];
                for (i, x) in va.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in vb.iter().enumerate() {
                        if !y.is_zero() {
                            acc[i + j] += x * y;
                        }
                    }
                }
                for (k, v) in acc.into_iter().enumerate() {
                    out.add_term(class, base + k as i64, v);
                }
            }
        }
        Ok(out)
    }

    fn check_positive_weight(&self, what: &str) -> Result<()> {
        if let Some((c, z, _)) = self.terms().find(|(c, _, _)| c.weight() <= 0) {
            return Err(Error::Divergence(format!(
                "{what} of a series with a term y^({c}) z^{z} that carries no curve class"
            )));
        }
        Ok(())
    }

    fn check_window_has_zero(&self) -> Result<()> {
        if !(self.trunc.z_lo..=self.trunc.z_hi).contains(&0) {
            return Err(Error::Parameter(format!(
                "z-window [{}, {}] does not contain 0",
                self.trunc.z_lo, self.trunc.z_hi
            )));
        }
        Ok(())
    }

    /// `Σ_k a^k / k!`, for `a` whose terms all carry a nonzero class.
    ///
    /// Solved weight by weight from `w·E_w = Σ_j j·A_j·E_{w−j}`, the graded
    /// form of `D exp(a) = exp(a)·Da`.
    pub fn exp(&self) -> Result<MultiSeries> {
        self.check_positive_weight("exp")?;
        self.check_window_has_zero()?;
        let y_max = self.trunc.y_max;
        let da: Vec<MultiSeries> = (0..=y_max).map(|j| self.weight_part(j).weight_derivative()).collect();
        let mut parts = vec![MultiSeries::one(self.trunc)];
        for w in 1..=y_max {
            let mut acc = MultiSeries::zero(self.trunc);
            for j in 1..=w {
                if da[j as usize].is_zero() || parts[(w - j) as usize].is_zero() {
                    continue;
                }
                acc = acc.add(&da[j as usize].mul(&parts[(w - j) as usize])?)?;
            }
            parts.push(acc.scale(&Rational::new(BigInt::one(), BigInt::from(w))));
        }
        parts.into_iter().try_fold(MultiSeries::zero(self.trunc), |acc, p| acc.add(&p))
    }

    /// Inverse of [`exp`](Self::exp), for series with constant term 1 and no
    /// other class-free terms.
    pub fn log(&self) -> Result<MultiSeries> {
        self.check_window_has_zero()?;
        if self.coeff(CurveClass::ZERO, 0) != int(1) {
            return Err(Error::Domain("log requires constant term 1".into()));
        }
        if let Some((_, z, _)) = self.terms().find(|(c, z, _)| c.is_zero() && *z != 0) {
            return Err(Error::Domain(format!("log of a series with a pure z^{z} term")));
        }
        let y_max = self.trunc.y_max;
        let b: Vec<MultiSeries> = (0..=y_max).map(|j| self.weight_part(j)).collect();
        // dl[j] = j·L_j
        let mut dl: Vec<MultiSeries> = vec![MultiSeries::zero(self.trunc)];
        for w in 1..=y_max {
            let mut acc = b[w as usize].weight_derivative();
            for j in 1..w {
                if dl[j as usize].is_zero() || b[(w - j) as usize].is_zero() {
                    continue;
                }
                acc = acc.sub(&dl[j as usize].mul(&b[(w - j) as usize])?)?;
            }
            dl.push(acc);
        }
        let mut out = MultiSeries::zero(self.trunc);
        for (w, part) in dl.iter().enumerate().skip(1) {
            out = out.add(&part.scale(&Rational::new(BigInt::one(), BigInt::from(w as i64))))?;
        }
        Ok(out)
    }

    /// Terms whose coefficient is not an integer.
    pub fn non_integral_terms(&self) -> Vec<(CurveClass, i64, Rational)> {
        self.terms().filter(|(_, _, v)| !v.is_integer()).map(|(c, z, v)| (c, z, v.clone())).collect()
    }

    /// Keys where the two series differ, over the union of their supports.
    pub fn differences(&self, other: &MultiSeries) -> Vec<(CurveClass, i64, Rational, Rational)> {
        let mut keys: Vec<(CurveClass, i64)> = self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .filter_map(|(c, z)| {
                let (x, y) = (self.coeff(c, z), other.coeff(c, z));
                (x != y).then_some((c, z, x, y))
            })
            .collect()
    }
}

impl fmt::Display for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (c, z, v)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({v}) y^({c}) z^{z}")?;
        }
        Ok(())
    }
}

/// Per-class dense `z`-vectors, classes sorted by weight.
struct ClassBlocks {
    blocks: Vec<(CurveClass, i64, Vec<Rational>)>,
}

impl ClassBlocks {
    fn new(s: &MultiSeries) -> Self {
        let mut grouped: BTreeMap<CurveClass, BTreeMap<i64, &Rational>> = BTreeMap::new();
        for (c, z, v) in s.terms() {
            grouped.entry(c).or_default().insert(z, v);
        }
        let blocks = grouped
            .into_iter()
            .map(|(c, zs)| {
                let lo = *zs.keys().next().unwrap();
                let hi = *zs.keys().next_back().unwrap();
                let mut dense = vec![Rational::zero(); (hi - lo + 1) as usize];
                for (z, v) in zs {
                    dense[(z - lo) as usize] = v.clone();
                }
                (c, lo, dense)
            })
            .collect();
        Self { blocks }
    }
}

/// `(1 + sign·y^class z^z_exp)^exponent` expanded by the binomial series and
/// truncated.
pub fn pow_binomial(
    trunc: Truncation,
    class: CurveClass,
    z_exp: i64,
    sign: i64,
    exponent: &BigInt,
) -> Result<MultiSeries> {
    if class.is_zero() || class.weight() <= 0 {
        return Err(Error::Domain(format!(
            "binomial factor needs a class of positive weight, got ({class})"
        )));
    }
    if sign != 1 && sign != -1 {
        return Err(Error::Domain(format!("sign must be +1 or -1, got {sign}")));
    }
    let mut out = MultiSeries::one(trunc);
    let k_max = trunc.y_max / class.weight();
    for k in 1..=k_max {
        let c = binomial(exponent, k as u64);
        if c.is_zero() {
            break;
        }
        let signed = if sign < 0 && k % 2 == 1 { -c } else { c };
        out.add_term(class.scale(k), z_exp * k, Rational::from_integer(signed));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    fn t(y: i64, z: i64) -> Truncation {
        Truncation::symmetric(y, z).unwrap()
    }

    const F: CurveClass = CurveClass::FIBER;

    #[test]
    fn difference_of_squares() {
        let tr = t(4, 4);
        let a = MultiSeries::from_terms(tr, [(CurveClass::ZERO, 0, int(1)), (F, 1, int(1))]);
        let b = MultiSeries::from_terms(tr, [(CurveClass::ZERO, 0, int(1)), (F, 1, int(-1))]);
        let expected = MultiSeries::from_terms(tr, [(CurveClass::ZERO, 0, int(1)), (F.scale(2), 2, int(-1))]);
        assert_eq!(a.mul(&b).unwrap(), expected);
        assert_eq!(a.mul(&MultiSeries::one(tr)).unwrap(), a);
    }

    #[test]
    fn geometric_inverse_pair() {
        let tr = t(5, 0);
        let geometric = MultiSeries::from_terms(tr, (0..=5).map(|k| (F.scale(k), 0, int(1))));
        let one_minus = MultiSeries::from_terms(tr, [(CurveClass::ZERO, 0, int(1)), (F, 0, int(-1))]);
        assert_eq!(geometric.mul(&one_minus).unwrap(), MultiSeries::one(tr));
    }

    #[test]
    fn mismatched_y_max() {
        let a = MultiSeries::one(t(3, 2));
        let b = MultiSeries::one(t(4, 2));
        assert!(matches!(a.mul(&b), Err(Error::Parameter(_))));
    }

    #[test]
    fn exp_examples() {
        let tr = t(6, 3);
        assert_eq!(MultiSeries::zero(tr).exp().unwrap(), MultiSeries::one(tr));
        let e = MultiSeries::monomial(tr, F, 0, int(1)).exp().unwrap();
        let mut fact = 1i64;
        for k in 0..=6 {
            if k > 0 {
                fact *= k;
            }
            assert_eq!(e.coeff(F.scale(k), 0), rat(1, fact));
        }
        assert_eq!(e.len(), 7);
    }

    #[test]
    fn exp_rejects_class_free_terms() {
        let tr = t(3, 3);
        let pure_z = MultiSeries::monomial(tr, CurveClass::ZERO, 1, int(1));
        assert!(matches!(pure_z.exp(), Err(Error::Divergence(_))));
        assert!(matches!(MultiSeries::one(tr).exp(), Err(Error::Divergence(_))));
    }

    #[test]
    fn log_examples() {
        let tr = t(4, 4);
        assert!(MultiSeries::one(tr).log().unwrap().is_zero());
        let two = MultiSeries::one(tr).scale(&int(2));
        assert!(matches!(two.log(), Err(Error::Domain(_))));
        let a = MultiSeries::monomial(tr, CurveClass::SECTION, -1, int(2));
        assert_eq!(a.exp().unwrap().log().unwrap(), a);
        let b = MultiSeries::from_terms(tr, [(CurveClass::ZERO, 0, int(1)), (CurveClass::new(1, 1), 1, int(1))]);
        assert_eq!(b.log().unwrap().exp().unwrap(), b);
    }

    #[test]
    fn log_of_inverse_cube() {
        // Oracle: expand (Σ x^k)^3 by repeated multiplication.
        let tr = t(6, 6);
        let geometric = MultiSeries::from_terms(tr, (0..=6).map(|k| (F.scale(k), k, int(1))));
        let cube = geometric.mul(&geometric).unwrap().mul(&geometric).unwrap();
        assert_eq!(cube.coeff(F.scale(2), 2), int(6));
        let expected = MultiSeries::from_terms(tr, (1..=6).map(|k| (F.scale(k), k, rat(3, k))));
        assert_eq!(cube.log().unwrap(), expected);
    }

    #[test]
    fn pow_binomial_examples() {
        let tr = t(8, 8);
        let p = pow_binomial(tr, F, 1, -1, &BigInt::from(-24)).unwrap();
        // Oracle: 24-fold product of the geometric series.
        let geometric = MultiSeries::from_terms(tr, (0..=8).map(|k| (F.scale(k), k, int(1))));
        let mut oracle = MultiSeries::one(tr);
        for _ in 0..24 {
            oracle = oracle.mul(&geometric).unwrap();
        }
        assert_eq!(p, oracle);
        assert_eq!(p.coeff(F.scale(3), 3), int(2600));

        let q = pow_binomial(tr, CurveClass::new(1, 1), 1, 1, &BigInt::zero()).unwrap();
        assert_eq!(q, MultiSeries::one(tr));
        let r = pow_binomial(tr, F, -2, -1, &BigInt::one()).unwrap();
        assert_eq!(r, MultiSeries::from_terms(tr, [(CurveClass::ZERO, 0, int(1)), (F, -2, int(-1))]));
        assert!(matches!(
            pow_binomial(tr, CurveClass::ZERO, 1, 1, &BigInt::one()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn windows_truncate() {
        let tr = Truncation::new(3, -1, 2).unwrap();
        let s = MultiSeries::from_terms(tr, [(F, 3, int(1)), (F, -2, int(1)), (F.scale(4), 0, int(1)), (F, 2, int(5))]);
        assert_eq!(s.len(), 1);
        assert!(Truncation::new(1, 2, 1).is_err());
    }
}
