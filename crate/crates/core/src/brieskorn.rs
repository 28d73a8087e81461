//! Graded pieces of the Brieskorn module `H_f = Ω^{n+1} / df ∧ dΩ^{n-1}`
//! of a reduced homogeneous polynomial, its torsion-free quotient `H̄_f`,
//! and what they compute: the pole-order filtration on `H^n(U)`, Milnor
//! fiber eigenspaces and the Briançon–Skoda test.
//!
//! A top form `P·ω₀` of degree `k` is identified with its coefficient
//! `P ∈ C[x]_{k-n-1}`. Expanding `df ∧ d(g dx_I)` for `|I| = n - 1`, with
//! `{a, b}` the complement of `I`, gives `±(f_a ∂_b g - f_b ∂_a g) ω₀`, so
//! the relations in degree `k` are spanned by those polynomials with
//! `deg g = k - d - n + 1`.
//!
//! `H̄_{f,k}` is the image of `H_{f,k}` under a high enough power of `t = f`.
//! No effective bound on the torsion order is known, so the power is found
//! by watching the rank of `f^N : H_{f,k} -> H_{f,k+Nd}`; every answer
//! carries the rank trace that certified it.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exterior::{differential, EulerField, Form};
use crate::gradedpoly::{rat, Monomial, MonomialIndex, Poly, Rational};
use crate::jacobian;
use crate::linalg::{IntRow, SparseVec, Subspace};
use crate::{Error, Result};

/// A reduced homogeneous polynomial `f` of degree `d >= 1` in `n + 1 >= 3`
/// variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypersurface {
    f: Poly,
    d: u32,
}

impl Hypersurface {
    /// Validates homogeneity, the variable count and reducedness.
    pub fn new(f: Poly) -> Result<Self> {
        let hs = Self::new_unchecked_reduced(f)?;
        if !is_squarefree(&hs.f) {
            return Err(Error::NotReduced);
        }
        Ok(hs)
    }

    /// Like [`Hypersurface::new`] without the reducedness test.
    pub fn new_unchecked_reduced(f: Poly) -> Result<Self> {
        if f.nvars() < 3 {
            return Err(Error::TooFewVariables(f.nvars()));
        }
        let d = match f.degree() {
            None | Some(0) => return Err(Error::Degenerate),
            Some(d) => d,
        };
        if f.homogeneous_degree() != Some(d) {
            return Err(Error::NotHomogeneous);
        }
        Ok(Hypersurface { f, d })
    }

    pub fn poly(&self) -> &Poly {
        &self.f
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    /// `n`, the dimension of the ambient projective space.
    pub fn n(&self) -> usize {
        self.f.nvars() - 1
    }

    pub fn nvars(&self) -> usize {
        self.f.nvars()
    }
}

/// Reducedness through generic lines: if `f = g² h` then every restriction
/// `f(a + t b)` has a repeated root, while for reduced `f` a generic line
/// meets the hypersurface in `d` distinct points.
pub fn is_squarefree(f: &Poly) -> bool {
    let Some(d) = f.homogeneous_degree() else {
        return false;
    };
    let nvars = f.nvars();
    let mut seed: i64 = 17;
    let mut next = move || {
        seed = (seed * 1103515245 + 12345) % 2147483648;
        seed % 23 - 11
    };
    for _ in 0..12 {
        let images: Vec<Poly> = (0..nvars)
            .map(|_| {
                let a = next();
                let b = next();
                Poly::from_terms(
                    1,
                    [
                        (Monomial::new(vec![0]), rat(a)),
                        (Monomial::new(vec![1]), rat(b)),
                    ],
                )
            })
            .collect();
        let restricted = f.substitute(&images, 1);
        let coeffs = univariate_coeffs(&restricted);
        if coeffs.len() != d as usize + 1 {
            continue;
        }
        let derivative: Vec<Rational> = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * rat(i as i64))
            .collect();
        if univariate_gcd(coeffs, derivative).len() == 1 {
            return true;
        }
    }
    false
}

fn univariate_coeffs(p: &Poly) -> Vec<Rational> {
    let deg = p.degree().map_or(0, |d| d as usize);
    let mut out = vec![Rational::zero(); deg + 1];
    for (m, c) in p.terms() {
        out[m.exponents()[0] as usize] = c.clone();
    }
    trim(&mut out);
    out
}

fn trim(v: &mut Vec<Rational>) {
    while v.len() > 1 && v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

/// Euclid over `Q[t]`; coefficient vectors are little-endian.
fn univariate_gcd(mut a: Vec<Rational>, mut b: Vec<Rational>) -> Vec<Rational> {
    trim(&mut a);
    trim(&mut b);
    while !(b.len() == 1 && b[0].is_zero()) && !b.is_empty() {
        let mut r = a.clone();
        let lead = b.last().unwrap().clone();
        while r.len() >= b.len() && !(r.len() == 1 && r[0].is_zero()) {
            let shift = r.len() - b.len();
            let factor = r.last().unwrap() / &lead;
            for (i, bc) in b.iter().enumerate() {
                let delta = &factor * bc;
                r[i + shift] -= delta;
            }
            r.pop();
            if r.is_empty() {
                r.push(Rational::zero());
            }
            trim(&mut r);
        }
        a = b;
        b = r;
    }
    a
}

/// When to trust that the rank of `f^N` has settled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizationPolicy {
    /// Number of consecutive equal ranks required.
    pub window: usize,
    /// The final target degree `k + N d` must reach at least this.
    pub min_target_degree: i64,
    pub max_power: u32,
}

impl StabilizationPolicy {
    /// `window = max(2, n)`, `min_target_degree = (n+1) d`, `max_power = 20`.
    pub fn default_for(n: usize, d: u32) -> Self {
        StabilizationPolicy {
            window: n.max(2),
            min_target_degree: (n as i64 + 1) * d as i64,
            max_power: 20,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.window < 2 || (self.max_power as usize) < self.window {
            return Err(Error::Invalid(format!(
                "stabilization policy needs window >= 2 and max_power >= window, got {self:?}"
            )));
        }
        Ok(())
    }
}

/// The graded piece `H_{f,k}`: ambient monomials of `C[x]_{k-n-1}` and the
/// relation subspace `(df ∧ dΩ^{n-1})_k`.
#[derive(Debug)]
pub struct BrieskornSlice {
    k: i64,
    ambient: MonomialIndex,
    relations: Subspace,
}

impl BrieskornSlice {
    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn ambient(&self) -> &MonomialIndex {
        &self.ambient
    }

    pub fn relations(&self) -> &Subspace {
        &self.relations
    }

    pub fn dim(&self) -> usize {
        self.ambient.len() - self.relations.dim()
    }

    /// Canonical representative of the class of `P·ω₀`.
    pub fn reduce(&self, p: &Poly) -> SparseVec {
        let v = self
            .ambient
            .to_sparse(p)
            .expect("polynomial degree does not match the slice");
        self.relations.reduce(&v)
    }

    /// Monomials whose classes form a basis of `H_{f,k}`.
    pub fn standard_monomials(&self) -> Vec<Monomial> {
        self.relations
            .complement_indices()
            .into_iter()
            .map(|i| self.ambient.monomial(i).clone())
            .collect()
    }
}

/// Ranks of `f^j` on a subspace of `H_{f,k}` for `j = 0..=power`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HbarCertificate {
    pub k: i64,
    pub dim: usize,
    /// Power of `f` at which the rank was accepted.
    pub power: u32,
    pub landing_degree: i64,
    pub trace: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoleFiltrationReport {
    /// `dims[q] = dim P^{n-q} H^n(U)` for `q = 0..=n`.
    pub dims: Vec<usize>,
    pub h_n: usize,
    pub certificates: Vec<HbarCertificate>,
    pub nondecreasing: bool,
    pub constant_from_n_minus_1: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MilnorEigenspace {
    pub i: i64,
    pub dim: usize,
    /// Same quantity computed one period lower.
    pub cross_check: usize,
    pub agrees: bool,
    pub certificate: HbarCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrianconSkoda {
    pub holds: bool,
    /// Smallest `k` with `f^k ω₀ ∈ df ∧ dΩ^{n-1}`.
    pub witness_power: Option<u32>,
    pub certificate: HbarCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop16Check {
    pub k: i64,
    pub hf_dim: usize,
    pub image_of_f: usize,
    pub jacobian_dim: usize,
    pub holds: bool,
}

/// The Brieskorn module of one hypersurface with a write-once cache of its
/// graded slices.
pub struct BrieskornModule {
    hs: Hypersurface,
    /// Partial derivatives of an integer multiple of `f`.
    int_partials: Vec<Vec<(Monomial, BigInt)>>,
    cache: Mutex<HashMap<i64, Arc<OnceLock<Arc<BrieskornSlice>>>>>,
}

impl BrieskornModule {
    pub fn new(hs: Hypersurface) -> Self {
        let lcm = hs.poly().denominator_lcm();
        let scaled = hs.poly().scale(&Rational::from_integer(lcm));
        let int_partials = (0..hs.nvars())
            .map(|i| {
                scaled
                    .derivative(i)
                    .terms()
                    .map(|(m, c)| (m.clone(), c.to_integer()))
                    .collect()
            })
            .collect();
        BrieskornModule {
            hs,
            int_partials,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn from_poly(f: Poly) -> Result<Self> {
        Ok(Self::new(Hypersurface::new(f)?))
    }

    pub fn hypersurface(&self) -> &Hypersurface {
        &self.hs
    }

    pub fn n(&self) -> usize {
        self.hs.n()
    }

    pub fn d(&self) -> u32 {
        self.hs.degree()
    }

    pub fn default_policy(&self) -> StabilizationPolicy {
        StabilizationPolicy::default_for(self.n(), self.d())
    }

    /// The slice `H_{f,k}`, built once per degree.
    pub fn slice(&self, k: i64) -> Arc<BrieskornSlice> {
        let cell = {
            let mut cache = self.cache.lock().expect("slice cache poisoned");
            cache.entry(k).or_default().clone()
        };
        cell.get_or_init(|| Arc::new(self.build_slice(k))).clone()
    }

    /// Builds the slices for several degrees in parallel.
    pub fn prefetch(&self, degrees: &[i64]) {
        degrees.par_iter().for_each(|&k| {
            self.slice(k);
        });
    }

    fn build_slice(&self, k: i64) -> BrieskornSlice {
        let nvars = self.hs.nvars();
        let n = self.n() as i64;
        let ambient = MonomialIndex::new(nvars, k - n - 1);
        let g_degree = k - self.d() as i64 - n + 1;
        let mut rows: Vec<IntRow> = Vec::new();
        for g in crate::gradedpoly::monomial_basis(nvars, g_degree) {
            let dg: Vec<Option<(u32, Monomial)>> = (0..nvars).map(|i| g.derivative(i)).collect();
            for a in 0..nvars {
                for b in a + 1..nvars {
                    let mut acc: HashMap<usize, BigInt> = HashMap::new();
                    if let Some((e, m)) = &dg[b] {
                        for (fm, c) in &self.int_partials[a] {
                            let pos = ambient.position(&fm.mul(m)).expect("degree");
                            *acc.entry(pos).or_insert_with(BigInt::zero) += c * BigInt::from(*e);
                        }
                    }
                    if let Some((e, m)) = &dg[a] {
                        for (fm, c) in &self.int_partials[b] {
                            let pos = ambient.position(&fm.mul(m)).expect("degree");
                            *acc.entry(pos).or_insert_with(BigInt::zero) -= c * BigInt::from(*e);
                        }
                    }
                    let mut row: IntRow = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
                    if row.is_empty() {
                        continue;
                    }
                    row.sort_by_key(|(i, _)| *i);
                    rows.push(row);
                }
            }
        }
        let relations = Subspace::from_int_rows(ambient.len(), rows);
        BrieskornSlice {
            k,
            ambient,
            relations,
        }
    }

    pub fn relation_space(&self, k: i64) -> Subspace {
        self.slice(k).relations.clone()
    }

    pub fn hf_dim(&self, k: i64) -> usize {
        if k < self.n() as i64 + 1 {
            return 0;
        }
        self.slice(k).dim()
    }

    /// Multiplies reduced classes at degree `k` by `f` and reduces them at
    /// degree `k + d`, returning a basis of the image.
    fn push_forward(&self, k: i64, basis: &[SparseVec]) -> Vec<SparseVec> {
        let src = self.slice(k);
        let dst = self.slice(k + self.d() as i64);
        let images: Vec<SparseVec> = basis
            .iter()
            .map(|v| dst.reduce(&(self.hs.poly() * &src.ambient.to_poly(v))))
            .collect();
        Subspace::span(dst.ambient.len(), images).basis().to_vec()
    }

    fn initial_basis(&self, k: i64, polys: &[Poly]) -> Vec<SparseVec> {
        if k < self.n() as i64 + 1 {
            return Vec::new();
        }
        let s = self.slice(k);
        let reduced = polys.iter().map(|p| s.reduce(p)).collect();
        Subspace::span(s.ambient.len(), reduced).basis().to_vec()
    }

    /// Rank of `f^N : H_{f,k} -> H_{f,k+Nd}`.
    pub fn f_power_image_dim(&self, k: i64, power: u32) -> usize {
        let mut basis = self.full_basis(k);
        let mut degree = k;
        for _ in 0..power {
            if basis.is_empty() {
                break;
            }
            basis = self.push_forward(degree, &basis);
            degree += self.d() as i64;
        }
        basis.len()
    }

    fn full_basis(&self, k: i64) -> Vec<SparseVec> {
        if k < self.n() as i64 + 1 {
            return Vec::new();
        }
        let s = self.slice(k);
        s.relations
            .complement_indices()
            .into_iter()
            .map(|i| vec![(i, Rational::one())])
            .collect()
    }

    /// Image of the classes of `polys·ω₀` (all of degree `k`) in `H̄_{f,k}`:
    /// the rank after `f`-powers have settled under `policy`.
    pub fn stabilized_image(
        &self,
        k: i64,
        polys: &[Poly],
        policy: &StabilizationPolicy,
    ) -> Result<HbarCertificate> {
        self.stabilize(k, self.initial_basis(k, polys), policy)
    }

    fn stabilize(
        &self,
        k: i64,
        mut basis: Vec<SparseVec>,
        policy: &StabilizationPolicy,
    ) -> Result<HbarCertificate> {
        policy.validate()?;
        let d = self.d() as i64;
        let mut trace = vec![basis.len()];
        let mut power = 0u32;
        loop {
            let current = basis.len();
            // rank zero is final: f^N kills everything from then on
            let settled = current == 0
                || (trace.len() >= policy.window
                    && k + power as i64 * d >= policy.min_target_degree
                    && trace[trace.len() - policy.window..].iter().all(|&r| r == current));
            if settled {
                return Ok(HbarCertificate {
                    k,
                    dim: current,
                    power,
                    landing_degree: k + power as i64 * d,
                    trace,
                });
            }
            if power >= policy.max_power {
                return Err(Error::NoStabilization {
                    k,
                    max_power: policy.max_power,
                    trace,
                });
            }
            basis = self.push_forward(k + power as i64 * d, &basis);
            power += 1;
            trace.push(basis.len());
        }
    }

    /// `dim H̄_{f,k}` with its certificate.
    pub fn hbar(&self, k: i64, policy: &StabilizationPolicy) -> Result<HbarCertificate> {
        if k < 0 {
            return Err(Error::Invalid(format!("negative degree {k}")));
        }
        self.stabilize(k, self.full_basis(k), policy)
    }

    pub fn hbar_dim(&self, k: i64, policy: &StabilizationPolicy) -> Result<usize> {
        Ok(self.hbar(k, policy)?.dim)
    }

    /// `dim P^{n-q} H^n(U) = dim H̄_{f,(q+1)d}` for `q = 0..=n`.
    pub fn pole_filtration_dims(&self, policy: &StabilizationPolicy) -> Result<PoleFiltrationReport> {
        let n = self.n();
        let d = self.d() as i64;
        let certificates = (0..=n)
            .map(|q| self.hbar((q as i64 + 1) * d, policy))
            .collect::<Result<Vec<_>>>()?;
        let dims: Vec<usize> = certificates.iter().map(|c| c.dim).collect();
        let nondecreasing = dims.windows(2).all(|w| w[0] <= w[1]);
        let constant_from_n_minus_1 = dims[n - 1] == dims[n];
        Ok(PoleFiltrationReport {
            h_n: dims[n],
            dims,
            certificates,
            nondecreasing,
            constant_from_n_minus_1,
        })
    }

    /// `H^n(F)_{e(i/d)} = H̄_{f,(n+2)d-i}`, cross-checked one period lower.
    pub fn milnor_eigenspace(&self, i: i64, policy: &StabilizationPolicy) -> Result<MilnorEigenspace> {
        let d = self.d();
        if i < 0 || i >= d as i64 {
            return Err(Error::EigenIndexOutOfRange { i, d });
        }
        let n = self.n() as i64;
        let certificate = self.hbar((n + 2) * d as i64 - i, policy)?;
        let cross_check = self.hbar_dim((n + 1) * d as i64 - i, policy)?;
        Ok(MilnorEigenspace {
            i,
            dim: certificate.dim,
            cross_check,
            agrees: certificate.dim == cross_check,
            certificate,
        })
    }

    pub fn milnor_eigenspace_dim(&self, i: i64, policy: &StabilizationPolicy) -> Result<usize> {
        let e = self.milnor_eigenspace(i, policy)?;
        if !e.agrees {
            return Err(Error::MilnorMismatch {
                i,
                first: e.dim,
                second: e.cross_check,
            });
        }
        Ok(e.dim)
    }

    /// Whether `[ω₀] = 0` in `H̄_{f,n+1}`.
    pub fn briancon_skoda(&self, policy: &StabilizationPolicy) -> Result<BrianconSkoda> {
        let certificate = self.hbar(self.n() as i64 + 1, policy)?;
        let holds = certificate.dim == 0;
        let witness_power = holds
            .then(|| certificate.trace.iter().position(|&r| r == 0))
            .flatten()
            .map(|p| p as u32);
        Ok(BrianconSkoda {
            holds,
            witness_power,
            certificate,
        })
    }

    /// `H_f / f H_f = R` in degree `k`:
    /// `dim H_{f,k} - rank(f : H_{f,k-d} -> H_{f,k}) = dim R_{k-n-1}`.
    pub fn coker_check_prop16(&self, k: i64) -> Prop16Check {
        let hf = self.hf_dim(k);
        let image = self.f_power_image_dim(k - self.d() as i64, 1);
        let jac = jacobian::jacobian_dim(self.hs.poly(), k - self.n() as i64 - 1);
        Prop16Check {
            k,
            hf_dim: hf,
            image_of_f: image,
            jacobian_dim: jac,
            holds: hf >= image && hf - image == jac,
        }
    }
}

pub fn relation_space(f: &Poly, k: i64) -> Result<Subspace> {
    Ok(BrieskornModule::new(Hypersurface::new_unchecked_reduced(f.clone())?).relation_space(k))
}

pub fn hf_dim(f: &Poly, k: i64) -> Result<usize> {
    Ok(BrieskornModule::new(Hypersurface::new_unchecked_reduced(f.clone())?).hf_dim(k))
}

pub fn f_power_image_dim(f: &Poly, k: i64, power: u32) -> Result<usize> {
    Ok(BrieskornModule::from_poly(f.clone())?.f_power_image_dim(k, power))
}

pub fn hbar_dim(f: &Poly, k: i64, policy: &StabilizationPolicy) -> Result<usize> {
    BrieskornModule::from_poly(f.clone())?.hbar_dim(k, policy)
}

pub fn pole_filtration_dims(f: &Poly, policy: &StabilizationPolicy) -> Result<PoleFiltrationReport> {
    BrieskornModule::from_poly(f.clone())?.pole_filtration_dims(policy)
}

pub fn milnor_eigenspace_dim(f: &Poly, i: i64, policy: &StabilizationPolicy) -> Result<usize> {
    BrieskornModule::from_poly(f.clone())?.milnor_eigenspace_dim(i, policy)
}

pub fn briancon_skoda(f: &Poly, policy: &StabilizationPolicy) -> Result<BrianconSkoda> {
    BrieskornModule::from_poly(f.clone())?.briancon_skoda(policy)
}

pub fn coker_check_prop16(f: &Poly, k: i64) -> Result<Prop16Check> {
    Ok(BrieskornModule::from_poly(f.clone())?.coker_check_prop16(k))
}

/// For `ω = P·ω₀` homogeneous of degree `k`, checks `df ∧ ι_ξ ω = f ω` and
/// `d(ι_ξ ω) = (k/d) ω` as forms, the two identities behind
/// `∇_{∂t}(f ω) = (k/d) ω`.
pub fn gauss_manin_identity_check(f: &Poly, p: &Poly) -> bool {
    let Some(d) = f.homogeneous_degree() else {
        return false;
    };
    if d == 0 || p.is_zero() {
        return f.is_homogeneous() && p.is_zero();
    }
    let Some(deg_p) = p.homogeneous_degree() else {
        return false;
    };
    let xi = EulerField::new(d);
    let omega = Form::top(p.clone());
    let eta = omega.iota_euler(xi);
    let k = deg_p as i64 + p.nvars() as i64;
    let first = differential(f).wedge(&eta).ok() == Some(omega.mul_poly(f));
    let second = eta.exterior_d() == omega.scale(&Rational::new(k.into(), (d as i64).into()));
    first && second
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradedpoly::parse_poly;

    const XYZ: [&str; 3] = ["x", "y", "z"];

    fn module(s: &str) -> BrieskornModule {
        BrieskornModule::from_poly(parse_poly(s, &XYZ).unwrap()).unwrap()
    }

    /// Row-reduces the spanning set `{f_a ∂_b g - f_b ∂_a g}` directly with
    /// polynomial arithmetic, independent of the integer row builder.
    fn relation_rank_oracle(f: &Poly, k: i64) -> usize {
        let nvars = f.nvars();
        let n = nvars as i64 - 1;
        let d = f.homogeneous_degree().unwrap() as i64;
        let idx = MonomialIndex::new(nvars, k - n - 1);
        let mut vecs = Vec::new();
        for g in crate::gradedpoly::monomial_basis(nvars, k - d - n + 1) {
            let g = Poly::monomial(g);
            for a in 0..nvars {
                for b in a + 1..nvars {
                    let r = &(&f.derivative(a) * &g.derivative(b)) - &(&f.derivative(b) * &g.derivative(a));
                    vecs.push(idx.to_sparse(&r).unwrap());
                }
            }
        }
        crate::linalg::rank(&crate::linalg::ExactMatrix::from_sparse_rows(idx.len(), vecs))
    }

    #[test]
    fn rejects_bad_input() {
        let p = |s: &str| parse_poly(s, &XYZ).unwrap();
        assert_eq!(Hypersurface::new(p("x^2*y")), Err(Error::NotReduced));
        assert_eq!(Hypersurface::new(p("x^2 + y")), Err(Error::NotHomogeneous));
        assert_eq!(Hypersurface::new(p("3")), Err(Error::Degenerate));
        assert_eq!(
            Hypersurface::new(parse_poly("x^2 + y^2", &["x", "y"]).unwrap()),
            Err(Error::TooFewVariables(2))
        );
        assert!(Hypersurface::new(p("x*y*z")).is_ok());
        assert!(Hypersurface::new(p("(x + y)^2*z + x^3")).is_ok());
        assert_eq!(Hypersurface::new(p("(x + y - z)^2*(x - 2*z)")), Err(Error::NotReduced));
    }

    #[test]
    fn relations_below_range_are_zero() {
        let m = module("x^3 + y^2*z");
        assert_eq!(m.relation_space(3).dim(), 0);
        assert_eq!(m.hf_dim(3), 1);
        assert_eq!(m.hf_dim(2), 0);
        assert_eq!(m.hf_dim(-4), 0);
    }

    #[test]
    fn fermat_cubic_relations_match_oracle() {
        let m = module("x^3 + y^3 + z^3");
        let f = m.hypersurface().poly().clone();
        for k in 3..=9 {
            assert_eq!(m.relation_space(k).dim(), relation_rank_oracle(&f, k), "k = {k}");
        }
        // H_f is free with Poincare series t^3 (1+t)^3 / (1 - t^3)
        assert_eq!(m.hf_dim(6), 10 - relation_rank_oracle(&f, 6));
        assert_eq!(m.hf_dim(6), 2);
    }

    #[test]
    fn f_power_ranks() {
        let m = module("x^3 + y^3 + z^3");
        assert_eq!(m.f_power_image_dim(6, 0), m.hf_dim(6));
        let trace: Vec<usize> = (0..4).map(|p| m.f_power_image_dim(4, p)).collect();
        assert!(trace.windows(2).all(|w| w[0] >= w[1]));
        let cusp = module("x^3 + y^2*z");
        let policy = cusp.default_policy();
        assert_eq!(cusp.hbar_dim(3, &policy).unwrap(), 0);
    }

    #[test]
    fn fermat_cubic_hbar_and_poles() {
        let m = module("x^3 + y^3 + z^3");
        let policy = m.default_policy();
        assert_eq!(m.hbar_dim(0, &policy).unwrap(), 0);
        let dims: Vec<usize> = [3, 6, 9].iter().map(|&k| m.hbar_dim(k, &policy).unwrap()).collect();
        assert_eq!(dims, vec![1, 2, 2]);
        let report = m.pole_filtration_dims(&policy).unwrap();
        assert_eq!(report.dims, vec![1, 2, 2]);
        assert!(report.nondecreasing && report.constant_from_n_minus_1);
    }

    #[test]
    fn milnor_fermat_cubic() {
        let m = module("x^3 + y^3 + z^3");
        let policy = m.default_policy();
        let total: usize = (0..3).map(|i| m.milnor_eigenspace_dim(i, &policy).unwrap()).sum();
        assert_eq!(total, 8);
        assert_eq!(
            m.milnor_eigenspace(3, &policy),
            Err(Error::EigenIndexOutOfRange { i: 3, d: 3 })
        );
        assert!(m.milnor_eigenspace(-1, &policy).is_err());
    }

    #[test]
    fn briancon_skoda_plane_cubics() {
        let cusp = module("x^3 + y^2*z");
        let bs = cusp.briancon_skoda(&cusp.default_policy()).unwrap();
        assert!(bs.holds);
        assert!(bs.witness_power.unwrap() >= 1);
        let fermat = module("x^3 + y^3 + z^3");
        let bs = fermat.briancon_skoda(&fermat.default_policy()).unwrap();
        assert!(!bs.holds);
        assert_eq!(bs.witness_power, None);
    }

    #[test]
    fn prop16_small_degrees() {
        let m = module("x^3 + y^3 + z^3");
        let expected = [1, 3, 3, 1, 0, 0, 0];
        for (k, want) in (3..=9).zip(expected) {
            let c = m.coker_check_prop16(k);
            assert!(c.holds, "{c:?}");
            assert_eq!(c.jacobian_dim, want);
        }
        let c = m.coker_check_prop16(3);
        assert_eq!((c.hf_dim, c.image_of_f), (1, 0));
    }

    #[test]
    fn cusp_cokernel_settles_at_tjurina() {
        let m = module("x^3 + y^2*z");
        for k in 8..=14 {
            let c = m.coker_check_prop16(k);
            assert!(c.holds, "{c:?}");
            assert_eq!(c.hf_dim - c.image_of_f, 2);
        }
    }

    #[test]
    fn gauss_manin_identities() {
        let f = parse_poly("x^3 + y^2*z", &XYZ).unwrap();
        assert!(gauss_manin_identity_check(&f, &Poly::one(3)));
        assert!(gauss_manin_identity_check(&f, &Poly::var(3, 0)));
        assert!(gauss_manin_identity_check(&f, &parse_poly("x^2*y^3*z", &XYZ).unwrap()));
        let g = parse_poly("x^3 + y^3 + z^3", &XYZ).unwrap();
        assert!(gauss_manin_identity_check(&g, &parse_poly("2*x*y - z^2", &XYZ).unwrap()));
    }

    #[test]
    fn slice_cache_is_shared() {
        let m = module("x^3 + y^3 + z^3");
        m.prefetch(&[6, 9, 12]);
        let a = m.slice(9);
        let b = m.slice(9);
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn squarefree_gcd() {
        // (t - 1)^2 (t + 2) and its derivative share (t - 1)
        let p = vec![rat(2), rat(-3), rat(0), rat(1)];
        let dp = vec![rat(-3), rat(0), rat(3)];
        assert_eq!(univariate_gcd(p, dp).len(), 2);
    }
}
