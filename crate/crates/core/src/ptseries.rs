//! Stable pair generating series of a local K3 surface and the identities
//! relating them.
//!
//! Two independent routes build the same series: [`pt_main`] exponentiates a
//! sum of `J`-weighted monomials, [`pt_borcherds`] multiplies binomial
//! factors whose exponents use only `χ(Hilb)`. The signed variant carries an
//! extra `(−1)^{n−1}` per monomial and is a conditional object: it is the
//! reduced series only if the expected product formula for reduced invariants
//! holds.
//!
//! All series are computed on a padded `z`-window. Factors `y^β z^{−n}` only
//! occur with `n ≤ β²/2`, and for classes in the cone the positive parts of
//! `β²/2` add up under sums of classes, so no monomial of weight `≤ y_max`
//! has `z`-exponent below `−B` with `B = max ⌊β²/2⌋⁺`. Dropping terms above
//! `z_max + B` therefore never disturbs coefficients in `[−z_max, z_max]`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::invariants::{conjectural_j, hilb_euler, n_from_j};
use crate::lattice::{enumerate_effective, CurveClass, MukaiVector};
use crate::modular::inv_delta;
use crate::series::{
    format_rational, int, pow_binomial, LaurentPoly, MultiSeries, QZSeries, Rational, Truncation,
};

/// Truncation and sign convention for a stable pair series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PTParams {
    pub y_max: i64,
    pub z_max: i64,
    /// `true` selects the `(−1)^{n−1}` reduced-invariant convention.
    pub signed: bool,
}

impl PTParams {
    pub fn new(y_max: i64, z_max: i64, signed: bool) -> Result<Self> {
        if y_max < 0 {
            return Err(Error::Parameter(format!("y_max must be >= 0, got {y_max}")));
        }
        if z_max < 1 {
            return Err(Error::Parameter(format!("z_max must be >= 1, got {z_max}")));
        }
        Ok(Self { y_max, z_max, signed })
    }

    /// `B`, the largest negative `z`-shift any retained monomial can carry.
    pub fn negative_shift_bound(&self) -> i64 {
        negative_shift_bound(self.y_max)
    }

    /// Window used during computation, `[−z_max − B, z_max + B]`.
    pub fn internal_truncation(&self) -> Truncation {
        let pad = self.z_max + self.negative_shift_bound();
        Truncation::symmetric(self.y_max, pad).expect("valid params")
    }

    /// Window of reported coefficients, `[−z_max, z_max]`.
    pub fn report_truncation(&self) -> Truncation {
        Truncation::symmetric(self.y_max, self.z_max).expect("valid params")
    }
}

pub fn negative_shift_bound(y_max: i64) -> i64 {
    enumerate_effective(y_max)
        .into_iter()
        .map(|c| (c.square() / 2).max(0))
        .max()
        .unwrap_or(0)
}

fn sign_factor(signed: bool, n_abs: i64) -> i64 {
    // (−1)^{n−1}
    if signed && n_abs % 2 == 0 {
        -1
    } else {
        1
    }
}

/// Largest value of `r(r + n)` for which some `J(r, β, r + n)` can be nonzero:
/// a divisor `k` of `β` needs `r(r + n) ≤ β²/2 + k²`.
fn rn_bound(beta: CurveClass) -> i64 {
    let d = beta.divisibility().expect("effective class");
    beta.square() / 2 + d * d
}

/// Exponent series `Σ ±(n + 2r)·J(r, β, r + n)·y^β z^{±n}` of the main formula.
pub fn pt_main_exponent(params: &PTParams) -> Result<MultiSeries> {
    let trunc = params.internal_truncation();
    let mut a = MultiSeries::zero(trunc);
    for beta in enumerate_effective(params.y_max) {
        let bound = rn_bound(beta);
        // r = 0: only the z^n, n > 0 monomials
        for n in 1..=trunc.z_hi {
            let j = conjectural_j(MukaiVector::new(0, beta, n))?;
            a.add_term(beta, n, j * int(n * sign_factor(params.signed, n)));
        }
        let mut r = 1;
        while r * r <= bound {
            let mut n = 0;
            while r * (r + n) <= bound && n <= trunc.z_hi {
                let j = conjectural_j(MukaiVector::new(r, beta, r + n))?;
                let weight = j * int((n + 2 * r) * sign_factor(params.signed, n));
                if n > 0 {
                    a.add_term(beta, -n, weight.clone());
                }
                a.add_term(beta, n, weight);
                n += 1;
            }
            r += 1;
        }
    }
    Ok(a)
}

fn ensure_integral(series: &MultiSeries, what: &str) -> Result<()> {
    let bad = series.non_integral_terms();
    if bad.is_empty() {
        return Ok(());
    }
    Err(Error::Consistency {
        message: format!("{what} has {} non-integral coefficients", bad.len()),
        offending: bad
            .iter()
            .map(|(c, z, v)| format!("y^({c}) z^{z}: {}", format_rational(v)))
            .collect(),
    })
}

/// The main product formula on the padded window.
pub fn pt_main_padded(params: &PTParams) -> Result<MultiSeries> {
    pt_main_exponent(params)?.exp()
}

/// `PT^χ(X)` (or its signed counterpart) from the exponential product over
/// `J`, reported on `[−z_max, z_max]`. Every coefficient is checked to be an
/// integer.
pub fn pt_main(params: &PTParams) -> Result<MultiSeries> {
    let out = pt_main_padded(params)?.restrict(params.report_truncation());
    ensure_integral(&out, "pt_main")?;
    Ok(out)
}

/// `PT^χ(X)²`, squared on the padded window and then reported.
pub fn pt_main_squared(params: &PTParams) -> Result<MultiSeries> {
    let padded = pt_main_padded(params)?;
    Ok(padded.mul(&padded)?.restrict(params.report_truncation()))
}

/// Integer exponent of the factor `(1 ∓ y^β z^m)` in the Borcherds-type
/// product: `Σ_r (|m| + 2r)·χ(Hilb^{β²/2 − r(|m| + r) + 1})`, with `r ≥ 0`
/// for `m ≥ 0` and `r > 0` for `m < 0`.
pub fn borcherds_exponent(beta: CurveClass, m: i64) -> BigInt {
    let n = m.abs();
    let base = beta.square() / 2 + 1;
    let mut total = BigInt::zero();
    let mut r = if m >= 0 { 0 } else { 1 };
    loop {
        let hilb_index = base - r * (n + r);
        if hilb_index < 0 {
            break;
        }
        total += hilb_euler(hilb_index) * (n + 2 * r);
        r += 1;
    }
    total
}

/// The Borcherds-type product on the padded window.
pub fn pt_borcherds_padded(params: &PTParams) -> Result<MultiSeries> {
    let trunc = params.internal_truncation();
    let mut acc = MultiSeries::one(trunc);
    for beta in enumerate_effective(params.y_max) {
        for m in trunc.z_lo..=trunc.z_hi {
            let e = borcherds_exponent(beta, m);
            if e.is_zero() {
                continue;
            }
            let factor = if params.signed {
                // (1 + (−1)^{m−1} y^β z^m)^e
                pow_binomial(trunc, beta, m, sign_factor(true, m.abs()), &e)?
            } else {
                // (1 − y^β z^m)^{−e}
                pow_binomial(trunc, beta, m, -1, &-e)?
            };
            acc = acc.mul(&factor)?;
        }
    }
    Ok(acc)
}

/// `PT^χ(X)` (or its signed counterpart) from the Borcherds-type product,
/// reported on `[−z_max, z_max]`.
pub fn pt_borcherds(params: &PTParams) -> Result<MultiSeries> {
    Ok(pt_borcherds_padded(params)?.restrict(params.report_truncation()))
}

fn epsilon(m: i64) -> i64 {
    m.signum()
}

fn in_s(r: i64, n: i64) -> bool {
    (r * n > 0) || (r == 0 && n > 0) || (r > 0 && n == 0)
}

/// `PT^χ(X̄)` for `X̄ = S × P¹` as
/// `∏_{β > 0, (r, n) ∈ 𝕊} exp((n + 2r)·N(r, β, n)·y^β z^n)^{ε(r + n)}`.
pub fn pt_xbar(params: &PTParams) -> Result<MultiSeries> {
    if params.signed {
        return Err(Error::Parameter("pt_xbar is only defined for the unsigned series".into()));
    }
    let trunc = params.internal_truncation();
    let mut a = MultiSeries::zero(trunc);
    for beta in enumerate_effective(params.y_max) {
        let bound = rn_bound(beta);
        let r_max = (0..).take_while(|r| r * r <= bound.max(0)).last().unwrap_or(0);
        for r in -r_max..=r_max {
            for n in trunc.z_lo..=trunc.z_hi {
                if !in_s(r, n) {
                    continue;
                }
                if r != 0 && r.abs() * (r.abs() + n.abs()) > bound {
                    continue;
                }
                let eps = epsilon(r + n);
                assert_ne!(eps, 0, "(r, n) in S never has r + n = 0");
                let value = n_from_j(r, beta, n)? * int((n + 2 * r) * eps);
                a.add_term(beta, n, value);
            }
        }
    }
    let out = a.exp()?.restrict(params.report_truncation());
    ensure_integral(&out, "pt_xbar")?;
    Ok(out)
}

/// `χ(P_n(X, h))` for an irreducible class with `β² = 2h − 2`:
/// `Σ_{r ≥ 0} (n + 2r)·χ(Hilb^{h − r(r + n)})` for `n ≥ 0` and
/// `Σ_{r > 0} (|n| + 2r)·χ(Hilb^{h − r(r + |n|)})` for `n < 0`.
pub fn ky_pairs_euler(h: i64, n: i64) -> BigInt {
    let m = n.abs();
    let mut total = BigInt::zero();
    let mut r = if n >= 0 { 0 } else { 1 };
    while h - r * (r + m) >= 0 {
        total += hilb_euler(h - r * (r + m)) * (m + 2 * r);
        r += 1;
    }
    total
}

/// One coefficient where two sides of an identity disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KyMismatch {
    pub q_exp: i64,
    pub z_exp: i64,
    pub expected: Rational,
    pub found: Rational,
}

/// Compares `(z − 2 + z⁻¹)·Σ χ(P_n(X, h)) z^n q^{h−1}` with `1/Δ`.
pub fn ky_identity_check(q_max: i64, z_window: i64) -> Result<Vec<KyMismatch>> {
    ky_identity_check_with(q_max, z_window, ky_pairs_euler)
}

/// [`ky_identity_check`] with the pair Euler characteristics supplied by the
/// caller. Only coefficients with `|z-exponent| ≤ z_window − 1` are compared,
/// where the truncated left side is fully determined.
pub fn ky_identity_check_with<F>(q_max: i64, z_window: i64, pairs: F) -> Result<Vec<KyMismatch>>
where
    F: Fn(i64, i64) -> BigInt,
{
    if q_max < -1 {
        return Err(Error::Parameter(format!("q_max must be >= -1, got {q_max}")));
    }
    if z_window < 1 {
        return Err(Error::Parameter(format!(
            "z_window {z_window} determines no coefficient; need >= 1"
        )));
    }
    let lhs = pairs_series(q_max, z_window, &pairs).mul_z_poly(&LaurentPoly::kernel());
    let rhs = inv_delta(q_max)?;
    let inner = z_window - 1;
    let mut mismatches = Vec::new();
    for m in -1..=q_max {
        let found = lhs.coeff(m);
        let expected = rhs.coeff(m);
        for z in -inner..=inner {
            let (e, f) = (expected.coeff(z), found.coeff(z));
            if e != f {
                mismatches.push(KyMismatch { q_exp: m, z_exp: z, expected: e, found: f });
            }
        }
    }
    Ok(mismatches)
}

/// `Σ_{h, |n| ≤ z_window} pairs(h, n) z^n q^{h−1}`.
pub fn pairs_series<F>(q_max: i64, z_window: i64, pairs: &F) -> QZSeries
where
    F: Fn(i64, i64) -> BigInt,
{
    QZSeries::from_rows(
        -1,
        q_max,
        (0..=q_max + 1).map(|h| {
            let row = LaurentPoly::from_terms(
                (-z_window..=z_window).map(|n| (n, Rational::from_integer(pairs(h, n)))),
            );
            (h - 1, row)
        }),
    )
}

/// BPS numbers `r_{g,h}` with a record of which `(g, h)` were determined.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BPSTable {
    entries: BTreeMap<(i64, i64), Rational>,
    /// For each `h`, the largest `g` determined; `None` means every `g`.
    coverage: BTreeMap<i64, Option<i64>>,
}

impl BPSTable {
    pub fn get(&self, g: i64, h: i64) -> Rational {
        self.entries.get(&(g, h)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero entries keyed by `(g, h)`.
    pub fn entries(&self) -> &BTreeMap<(i64, i64), Rational> {
        &self.entries
    }

    pub fn coverage(&self) -> &BTreeMap<i64, Option<i64>> {
        &self.coverage
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn covers(&self, g: i64, h: i64) -> bool {
        match self.coverage.get(&h) {
            Some(None) => g >= 0,
            Some(Some(limit)) => (0..=*limit).contains(&g),
            None => false,
        }
    }

    fn insert_row(&mut self, h: i64, values: &[Rational], limit: Option<i64>) {
        for (g, v) in values.iter().enumerate() {
            if !v.is_zero() {
                self.entries.insert((g as i64, h), v.clone());
            }
        }
        self.coverage.insert(h, limit);
    }

    /// Entries that differ where both tables are determined.
    pub fn compare_on_overlap(&self, other: &BPSTable) -> Vec<(i64, i64, Rational, Rational)> {
        let mut out = Vec::new();
        for (&h, &limit) in &self.coverage {
            let Some(&other_limit) = other.coverage.get(&h) else {
                continue;
            };
            let top = match (limit, other_limit) {
                (Some(a), Some(b)) => a.min(b),
                (Some(a), None) | (None, Some(a)) => a,
                (None, None) => {
                    let keys = self.entries.keys().chain(other.entries.keys());
                    keys.filter(|k| k.1 == h).map(|k| k.0).max().unwrap_or(0)
                }
            };
            for g in 0..=top {
                let (a, b) = (self.get(g, h), other.get(g, h));
                if a != b {
                    out.push((g, h, a, b));
                }
            }
        }
        out
    }
}

/// Coefficients `c_g` with `p = Σ_g c_g (z − 2 + z⁻¹)^g`, by elimination from
/// the top `z`-degree down.
pub fn decompose_kernel_basis(p: &LaurentPoly) -> Result<Vec<Rational>> {
    if !p.is_palindromic() {
        return Err(Error::Domain(format!("{p} is not palindromic")));
    }
    let top = p.max_deg().unwrap_or(0).max(0);
    let kernel = LaurentPoly::kernel();
    let powers: Vec<LaurentPoly> =
        (0..=top).scan(LaurentPoly::one(), |acc, _| {
            let cur = acc.clone();
            *acc = acc.mul(&kernel);
            Some(cur)
        }).collect();
    let mut rest = p.clone();
    let mut c = vec![Rational::zero(); (top + 1) as usize];
    for g in (0..=top).rev() {
        let lead = rest.coeff(g);
        if !lead.is_zero() {
            rest = rest.sub(&powers[g as usize].scale(&lead));
            c[g as usize] = lead;
        }
    }
    debug_assert!(rest.is_zero());
    Ok(c)
}

fn signed_gv(c: &[Rational]) -> Vec<Rational> {
    c.iter()
        .enumerate()
        .map(|(g, v)| if g % 2 == 1 { -v.clone() } else { v.clone() })
        .collect()
}

/// Reads `r_{g,h}` off `1/Δ` by rewriting each `q^{h−1}` row in the basis
/// `(z − 2 + z⁻¹)^g` and applying the sign `(−1)^g`.
pub fn bps_extract(source: &QZSeries, q_max: i64) -> Result<BPSTable> {
    let mut table = BPSTable::default();
    for m in source.q_min()..=q_max.min(source.q_max()) {
        let row = source.coeff(m);
        let h = m + 1;
        if h < 0 {
            if !row.is_zero() {
                return Err(Error::Domain(format!("nonzero row at q^{m}, below q^-1")));
            }
            continue;
        }
        let c = decompose_kernel_basis(&row)?;
        table.insert_row(h, &signed_gv(&c), None);
    }
    Ok(table)
}

/// Exponents `E(β, m)` of a product `∏ (1 − y^β z^m)^{−E}` (unsigned) or
/// `∏ (1 + (−1)^{m−1} y^β z^m)^{E}` (signed), recovered from the logarithm by
/// removing multiple-cover contributions in increasing class weight.
///
/// `pt` must be a padded series (`z_lo ≤ −B`); exponents are returned on
/// `[z_lo, z_hi − B]`, where they are unaffected by truncation.
pub fn gv_exponents(pt: &MultiSeries, signed: bool) -> Result<BTreeMap<CurveClass, LaurentPoly>> {
    let trunc = pt.truncation();
    let b = negative_shift_bound(trunc.y_max);
    if trunc.z_lo > -b {
        return Err(Error::Parameter(format!(
            "series window starts at z^{}, above the lowest attainable exponent -{b}",
            trunc.z_lo
        )));
    }
    let (lo, hi) = (trunc.z_lo, trunc.z_hi - b);
    let log = pt.log()?;
    let mut exps: BTreeMap<CurveClass, LaurentPoly> = BTreeMap::new();
    for beta in enumerate_effective(trunc.y_max) {
        let mut row = LaurentPoly::zero();
        for p in lo..=hi {
            let mut e = log.coeff(beta, p);
            if signed && p.abs() % 2 == 0 {
                e = -e;
            }
            let d = beta.divisibility()?;
            for k in 2..=d {
                if p % k != 0 || d % k != 0 {
                    continue;
                }
                let base = beta.div_exact(k).expect("k divides beta");
                e -= exps[&base].coeff(p / k) / int(k);
            }
            row.add_term(p, e);
        }
        exps.insert(beta, row);
    }
    for (beta, row) in &exps {
        if row.terms().any(|(_, v)| !v.is_integer()) {
            return Err(Error::Consistency {
                message: format!("non-integral product exponent for class {beta}"),
                offending: row
                    .terms()
                    .filter(|(_, v)| !v.is_integer())
                    .map(|(z, v)| format!("y^({beta}) z^{z}: {}", format_rational(v)))
                    .collect(),
            });
        }
    }
    Ok(exps)
}

/// Gopakumar-Vafa numbers of a stable pair series.
///
/// Each class's exponent row is multiplied by `z − 2 + z⁻¹` and decomposed in
/// the basis `(z − 2 + z⁻¹)^g`; the result must depend on `β` only through
/// `β²`, otherwise a consistency error lists the disagreeing classes.
pub fn gv_extract(pt: &MultiSeries, signed: bool) -> Result<BPSTable> {
    let trunc = pt.truncation();
    let b = negative_shift_bound(trunc.y_max);
    let exps = gv_exponents(pt, signed)?;
    // kernel·E is known on [z_lo + 1, z_hi − B − 1]
    let inner = (-(trunc.z_lo + 1)).min(trunc.z_hi - b - 1);
    let mut by_h: BTreeMap<i64, Vec<(CurveClass, Vec<Rational>)>> = BTreeMap::new();
    for (beta, row) in &exps {
        let h = beta.genus();
        let p = row.mul(&LaurentPoly::kernel()).restrict(-inner, inner);
        if h < 0 {
            if !row.is_zero() {
                return Err(Error::Consistency {
                    message: format!("class {beta} with square {} has nonzero exponents", beta.square()),
                    offending: row.terms().map(|(z, v)| format!("y^({beta}) z^{z}: {}", format_rational(v))).collect(),
                });
            }
            continue;
        }
        if inner < h {
            return Err(Error::Parameter(format!(
                "z-window too small to resolve class {beta} (h = {h}); need z_max >= {}",
                h + 1
            )));
        }
        let c = decompose_kernel_basis(&p).map_err(|e| Error::Consistency {
            message: format!("class {beta}: {e}"),
            offending: vec![beta.to_string()],
        })?;
        let mut values = signed_gv(&c);
        values.resize((inner + 1) as usize, Rational::zero());
        by_h.entry(h).or_default().push((*beta, values));
    }
    let mut table = BPSTable::default();
    for (h, rows) in by_h {
        let (first_class, first) = &rows[0];
        let disagree: BTreeSet<String> = rows
            .iter()
            .filter(|(_, v)| v != first)
            .map(|(c, _)| format!("{c} vs {first_class}"))
            .collect();
        if !disagree.is_empty() {
            return Err(Error::Consistency {
                message: format!("BPS numbers for h = {h} depend on more than the square of the class"),
                offending: disagree.into_iter().collect(),
            });
        }
        table.insert_row(h, first, Some(inner));
    }
    Ok(table)
}
