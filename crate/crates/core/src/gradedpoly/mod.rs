//! Exact rational arithmetic and sparse multivariate polynomials.
//!
//! Polynomials are stored as a map from exponent vectors to nonzero
//! [`Rational`] coefficients. Monomials are ordered graded-lex with the
//! variable order fixed by the caller, so every basis produced here is
//! deterministic and matrices built from it are reproducible.

mod parse;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::linalg::SparseVec;

pub use parse::{parse_poly, parse_rational};

/// Exact rational number, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Shorthand for an integer-valued [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown variable `{name}` at position {position}")]
    UnknownVariable { name: String, position: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("point is not in the chart x{chart} != 0")]
    PointNotInChart { chart: usize },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("invalid rational `{0}`")]
    InvalidRational(String),
}

/// Exponent vector of a monomial. The length is the number of variables of
/// the ambient ring.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Derivative with respect to variable `i`: returns the multiplier and
    /// the new monomial, or `None` when the exponent is zero.
    pub fn derivative(&self, i: usize) -> Option<(u32, Monomial)> {
        let e = self.0[i];
        if e == 0 {
            return None;
        }
        let mut m = self.0.clone();
        m[i] -= 1;
        Some((e, Monomial(m)))
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::one();
        for (e, x) in self.0.iter().zip(point) {
            if *e > 0 {
                acc *= num_traits::pow(x.clone(), *e as usize);
            }
        }
        acc
    }
}

impl Ord for Monomial {
    /// Graded-lex: lower total degree first; within a degree the monomial
    /// with the larger exponent in the earliest variable comes first, so
    /// degree one sorts as `x0, x1, x2, ...`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Positive rational weights, one per local coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector(Vec<Rational>);

impl WeightVector {
    pub fn new(weights: Vec<Rational>) -> Option<Self> {
        if weights.iter().all(|w| w.is_positive()) {
            Some(WeightVector(weights))
        } else {
            None
        }
    }

    pub fn weights(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().fold(Rational::zero(), |a, w| a + w)
    }

    pub fn max(&self) -> Rational {
        self.0.iter().max().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn min(&self) -> Rational {
        self.0.iter().min().cloned().unwrap_or_else(Rational::zero)
    }
}

/// Weighted degree `sum w_i * nu_i` of a monomial.
pub fn weighted_degree(m: &Monomial, w: &WeightVector) -> Result<Rational, PolyError> {
    if m.nvars() != w.len() {
        return Err(PolyError::LengthMismatch {
            expected: w.len(),
            got: m.nvars(),
        });
    }
    Ok(m.0
        .iter()
        .zip(&w.0)
        .fold(Rational::zero(), |acc, (e, wi)| acc + wi * rat(*e as i64)))
}

/// Sparse polynomial with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::term(c, Monomial::one(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(Rational::one(), Monomial::var(nvars, i))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { nvars, terms }
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(Rational::one(), m)
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial length");
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Rational)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// The common degree of all terms, `None` for zero or inhomogeneous input.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(k, a)| (k.mul(m), a.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if let Some((e, dm)) = m.derivative(i) {
                out.add_term(dm, c * rat(e as i64));
            }
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::LengthMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .fold(Rational::zero(), |acc, (m, c)| acc + c * m.eval(point)))
    }

    /// Substitutes `x_i -> images[i]`, where every image lives in a ring with
    /// `target_nvars` variables.
    pub fn substitute(&self, images: &[Poly], target_nvars: usize) -> Poly {
        assert_eq!(images.len(), self.nvars);
        let mut powers: Vec<Vec<Poly>> = vec![vec![Poly::one(target_nvars)]; self.nvars];
        let mut out = Poly::zero(target_nvars);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target_nvars, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                if e > 0 {
                    t = &t * &powers[i][e as usize];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Splits the polynomial into its weighted-homogeneous parts, keyed by
    /// weighted degree.
    pub fn weighted_parts(&self, w: &WeightVector) -> Result<BTreeMap<Rational, Poly>, PolyError> {
        let mut parts: BTreeMap<Rational, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let wd = weighted_degree(m, w)?;
            parts
                .entry(wd)
                .or_insert_with(|| Poly::zero(self.nvars))
                .add_term(m.clone(), c.clone());
        }
        Ok(parts)
    }

    /// Terms of weighted degree strictly below `bound`.
    pub fn weighted_truncation(&self, w: &WeightVector, bound: &Rational) -> Result<Poly, PolyError> {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if &weighted_degree(m, w)? < bound {
                out.add_term(m.clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// Common denominator of the coefficients.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Renders the polynomial in the input grammar using `names`.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut ordered: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        ordered.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then_with(|| a.0.cmp(b.0)));
        for (idx, (m, c)) in ordered.into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(format_rational(&abs));
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[i].clone()),
                    _ => factors.push(format!("{}^{}", names[i], e)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    /// Renders with the default names `x0, x1, ...`.
    pub fn render_default(&self) -> String {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        self.render(&names)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_default())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch");
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

/// All monomials of total degree `degree` in `nvars` variables, in
/// graded-lex order. Empty for negative degree.
pub fn monomial_basis(nvars: usize, degree: i64) -> Vec<Monomial> {
    assert!(nvars >= 1, "nvars must be positive");
    if degree < 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fill_basis(&mut out, &mut cur, 0, degree as u32);
    out
}

fn fill_basis(out: &mut Vec<Monomial>, cur: &mut [u32], pos: usize, remaining: u32) {
    if pos + 1 == cur.len() {
        cur[pos] = remaining;
        out.push(Monomial(cur.to_vec()));
        return;
    }
    for e in (0..=remaining).rev() {
        cur[pos] = e;
        fill_basis(out, cur, pos + 1, remaining - e);
    }
    cur[pos] = 0;
}

/// Position lookup for the monomial basis of one graded piece `C[x]_m`.
#[derive(Clone, Debug)]
pub struct MonomialIndex {
    nvars: usize,
    degree: i64,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialIndex {
    pub fn new(nvars: usize, degree: i64) -> Self {
        let basis = monomial_basis(nvars, degree);
        let index = basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        MonomialIndex {
            nvars,
            degree,
            basis,
            index,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn monomial(&self, i: usize) -> &Monomial {
        &self.basis[i]
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of a polynomial in this basis; `None` if a term has the
    /// wrong degree.
    pub fn to_sparse(&self, p: &Poly) -> Option<SparseVec> {
        let mut v: SparseVec = p
            .terms()
            .map(|(m, c)| self.position(m).map(|i| (i, c.clone())))
            .collect::<Option<_>>()?;
        v.sort_by_key(|(i, _)| *i);
        Some(v)
    }

    pub fn to_poly(&self, v: &SparseVec) -> Poly {
        Poly::from_terms(
            self.nvars,
            v.iter().map(|(i, c)| (self.basis[*i].clone(), c.clone())),
        )
    }
}

/// `C(n, k)` as u64.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of monomials of degree `degree` in `nvars` variables.
pub fn monomial_count(nvars: usize, degree: i64) -> usize {
    if degree < 0 {
        return 0;
    }
    binomial(degree as u64 + nvars as u64 - 1, nvars as u64 - 1) as usize
}

/// Local polynomial of the homogeneous `g` at `point` in the affine chart
/// `x_chart = 1`, translated so that the point becomes the origin.
///
/// The result lives in the `nvars - 1` remaining variables, in their
/// original order.
pub fn dehomogenize_shift(g: &Poly, chart: usize, point: &[Rational]) -> Result<Poly, PolyError> {
    let nvars = g.nvars();
    if point.len() != nvars {
        return Err(PolyError::LengthMismatch {
            expected: nvars,
            got: point.len(),
        });
    }
    if !g.is_homogeneous() {
        return Err(PolyError::NotHomogeneous);
    }
    let scale = &point[chart];
    if scale.is_zero() {
        return Err(PolyError::PointNotInChart { chart });
    }
    let local_nvars = nvars - 1;
    let mut images = Vec::with_capacity(nvars);
    let mut slot = 0;
    for (i, coord) in point.iter().enumerate() {
        if i == chart {
            images.push(Poly::one(local_nvars));
        } else {
            let shift = Poly::constant(local_nvars, coord / scale);
            images.push(&Poly::var(local_nvars, slot) + &shift);
            slot += 1;
        }
    }
    Ok(g.substitute(&images, local_nvars))
}

/// Coefficients of `((1 - t^g) / (1 - t))^nvars`, the Hilbert series of a
/// complete intersection of `nvars` forms of degree `g` in `nvars`
/// variables.
pub fn hilbert_ci_coeffs(nvars: usize, gen_degree: usize) -> Vec<u64> {
    assert!(nvars >= 1 && gen_degree >= 1);
    let mut coeffs = vec![1u64];
    for _ in 0..nvars {
        let mut next = vec![0u64; coeffs.len() + gen_degree - 1];
        for (i, c) in coeffs.iter().enumerate() {
            for slot in &mut next[i..i + gen_degree] {
                *slot += c;
            }
        }
        coeffs = next;
    }
    coeffs
}

/// Integer value of a rational that is known to be integral.
pub fn rational_to_i64(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.numer().to_i64()
    } else {
        None
    }
}

/// `floor(r)` as an integer.
pub fn floor_i64(r: &Rational) -> i64 {
    r.floor().numer().to_i64().expect("floor out of range")
}
