//! Polynomial differential forms on affine space and the operators
//! `d`, `∧`, `ι_ξ` and `L_ξ` for the scaled Euler field
//! `ξ = (1/d) Σ x_i ∂_i`.
//!
//! A `j`-form is a sparse map from index sets (bitmasks, indices read in
//! ascending order) to polynomial coefficients. The grading puts both
//! `x_i` and `dx_i` in degree one.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::gradedpoly::{rat, Poly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExteriorError {
    #[error("forms live on different spaces ({0} vs {1} variables)")]
    NvarsMismatch(usize, usize),
    #[error("form is not graded")]
    NotGraded,
    #[error("cannot add nonzero forms of degrees {0} and {1}")]
    DegreeMismatch(u32, u32),
}

/// Index subset stored as a bitmask over `0..nvars`.
pub type IndexSet = u32;

/// The Euler-type vector field `(1/d) Σ x_i ∂_i`, so that `ξ f = f` for `f`
/// homogeneous of degree `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EulerField {
    d: u32,
}

impl EulerField {
    pub fn new(d: u32) -> Self {
        assert!(d >= 1, "Euler field needs d >= 1");
        EulerField { d }
    }

    pub fn degree(&self) -> u32 {
        self.d
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    nvars: usize,
    jdegree: u32,
    terms: BTreeMap<IndexSet, Poly>,
}

/// `(-1)^{#{(a, b) : a in lhs, b in rhs, a > b}}`, the sign of sorting the
/// concatenation of two disjoint ascending index lists.
fn shuffle_sign(lhs: IndexSet, rhs: IndexSet) -> i64 {
    let mut inversions = 0u32;
    let mut r = rhs;
    while r != 0 {
        let b = r.trailing_zeros();
        inversions += (lhs >> (b + 1)).count_ones();
        r &= r - 1;
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

impl Form {
    pub fn zero(nvars: usize, jdegree: u32) -> Self {
        assert!(nvars <= 32);
        Form {
            nvars,
            jdegree,
            terms: BTreeMap::new(),
        }
    }

    /// The 0-form given by a polynomial.
    pub fn function(p: Poly) -> Self {
        let mut f = Form::zero(p.nvars(), 0);
        f.add_term(0, p);
        f
    }

    /// `coeff * dx_I` for an explicit index list (any order; sign applied).
    pub fn monomial_form(coeff: Poly, indices: &[usize]) -> Self {
        let nvars = coeff.nvars();
        let mut form = Form::function(coeff);
        for &i in indices {
            form = form.wedge(&Form::dx(nvars, i)).expect("same space");
        }
        form
    }

    pub fn dx(nvars: usize, i: usize) -> Self {
        let mut f = Form::zero(nvars, 1);
        f.add_term(1 << i, Poly::one(nvars));
        f
    }

    /// `p · dx_0 ∧ ⋯ ∧ dx_n`.
    pub fn top(p: Poly) -> Self {
        let nvars = p.nvars();
        let mut f = Form::zero(nvars, nvars as u32);
        f.add_term(full_set(nvars), p);
        f
    }

    pub fn omega0(nvars: usize) -> Self {
        Form::top(Poly::one(nvars))
    }

    /// `η₀ = (1/d) Σ (-1)^i x_i dx_0 ∧ ⋯ ∧ dx_i^ ∧ ⋯ ∧ dx_n`.
    pub fn eta0(nvars: usize, d: u32) -> Self {
        let mut f = Form::zero(nvars, nvars as u32 - 1);
        let inv_d = Rational::new(1.into(), (d as i64).into());
        for i in 0..nvars {
            let sign = if i % 2 == 0 { inv_d.clone() } else { -inv_d.clone() };
            f.add_term(full_set(nvars) & !(1 << i), Poly::var(nvars, i).scale(&sign));
        }
        f
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn jdegree(&self) -> u32 {
        self.jdegree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IndexSet, &Poly)> {
        self.terms.iter()
    }

    /// Coefficient of `dx_0 ∧ ⋯ ∧ dx_n` for a top form.
    pub fn top_coefficient(&self) -> Poly {
        self.terms
            .get(&full_set(self.nvars))
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.nvars))
    }

    fn add_term(&mut self, set: IndexSet, p: Poly) {
        debug_assert_eq!(set.count_ones(), self.jdegree);
        if p.is_zero() {
            return;
        }
        let entry = self.terms.entry(set).or_insert_with(|| Poly::zero(self.nvars));
        *entry = &*entry + &p;
        if entry.is_zero() {
            self.terms.remove(&set);
        }
    }

    /// Total degree `deg(coefficient) + j`, when all terms agree.
    pub fn graded_degree(&self) -> Option<u32> {
        let mut degree = None;
        for p in self.terms.values() {
            let k = p.homogeneous_degree()? + self.jdegree;
            match degree {
                None => degree = Some(k),
                Some(prev) if prev != k => return None,
                _ => {}
            }
        }
        degree
    }

    pub fn add(&self, other: &Form) -> Result<Form, ExteriorError> {
        self.check_space(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.jdegree != other.jdegree {
            return Err(ExteriorError::DegreeMismatch(self.jdegree, other.jdegree));
        }
        let mut out = self.clone();
        for (s, p) in &other.terms {
            out.add_term(*s, p.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Form) -> Result<Form, ExteriorError> {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Form {
        let mut out = Form::zero(self.nvars, self.jdegree);
        if c.is_zero() {
            return out;
        }
        for (s, p) in &self.terms {
            out.add_term(*s, p.scale(c));
        }
        out
    }

    pub fn mul_poly(&self, g: &Poly) -> Form {
        let mut out = Form::zero(self.nvars, self.jdegree);
        for (s, p) in &self.terms {
            out.add_term(*s, p * g);
        }
        out
    }

    fn check_space(&self, other: &Form) -> Result<(), ExteriorError> {
        if self.nvars != other.nvars {
            Err(ExteriorError::NvarsMismatch(self.nvars, other.nvars))
        } else {
            Ok(())
        }
    }

    pub fn wedge(&self, other: &Form) -> Result<Form, ExteriorError> {
        self.check_space(other)?;
        let mut out = Form::zero(self.nvars, self.jdegree + other.jdegree);
        for (a, pa) in &self.terms {
            for (b, pb) in &other.terms {
                if a & b != 0 {
                    continue;
                }
                let prod = pa * pb;
                let signed = if shuffle_sign(*a, *b) < 0 { -&prod } else { prod };
                out.add_term(a | b, signed);
            }
        }
        Ok(out)
    }

    /// Exterior derivative.
    pub fn exterior_d(&self) -> Form {
        let mut out = Form::zero(self.nvars, self.jdegree + 1);
        for (set, p) in &self.terms {
            for c in 0..self.nvars {
                if set & (1 << c) != 0 {
                    continue;
                }
                let dp = p.derivative(c);
                if dp.is_zero() {
                    continue;
                }
                let before = (set & ((1u32 << c) - 1)).count_ones();
                let signed = if before % 2 == 1 { -&dp } else { dp };
                out.add_term(set | (1 << c), signed);
            }
        }
        out
    }

    /// Interior product with the Euler field.
    pub fn iota_euler(&self, xi: EulerField) -> Form {
        if self.jdegree == 0 {
            return Form::zero(self.nvars, 0);
        }
        let inv_d = Rational::new(1.into(), (xi.d as i64).into());
        let mut out = Form::zero(self.nvars, self.jdegree - 1);
        for (set, p) in &self.terms {
            let mut rest = *set;
            let mut position = 0;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let c = if position % 2 == 0 { inv_d.clone() } else { -inv_d.clone() };
                out.add_term(set & !(1 << i), (p * &Poly::var(self.nvars, i)).scale(&c));
                position += 1;
            }
        }
        out
    }

    /// Lie derivative along the Euler field, computed through Cartan's
    /// formula `ι_ξ d + d ι_ξ`. On a graded form of degree `k` this is
    /// multiplication by `k/d`.
    pub fn lie_euler(&self, xi: EulerField) -> Result<Form, ExteriorError> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let k = self.graded_degree().ok_or(ExteriorError::NotGraded)?;
        let lie = self
            .exterior_d()
            .iota_euler(xi)
            .add(&self.iota_euler(xi).exterior_d())?;
        debug_assert_eq!(
            lie,
            self.scale(&Rational::new((k as i64).into(), (xi.d as i64).into()))
        );
        Ok(lie)
    }
}

/// `df` as a 1-form.
pub fn differential(f: &Poly) -> Form {
    Form::function(f.clone()).exterior_d()
}

fn full_set(nvars: usize) -> IndexSet {
    if nvars == 32 {
        u32::MAX
    } else {
        (1u32 << nvars) - 1
    }
}
