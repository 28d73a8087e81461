//! Local data at weighted-homogeneous isolated singular points and the
//! global ideals `J^(q) ⊂ C[x]` whose images give the Hodge filtration.
//!
//! At a singular point with local equation `h` whose lowest weighted part
//! `h₁` (weights `w`, weighted degree 1) has an isolated singularity, put
//! `ρ(y^ν) = Σ w_i (ν_i + 1)` and let `O^{≥β}` be spanned by monomials with
//! `ρ ≥ β`. The local ideal is
//!
//! ```text
//! 𝒥^(q) = Σ_{k ≤ min(k₀, q)} Σ_{|γ| ≤ q-k} O · h^{q+1} ∂^γ (O^{≥k+1} h^{-k-1})
//! ```
//!
//! with `k₀ = ⌊n - α⌋ - 1` and `α = Σ w_i`. It contains `O^{≥q+1}`, so it is
//! determined by jets of weighted degree below `q + 1 - α`, and that is how
//! it is stored.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};

use crate::brieskorn::{BrieskornModule, HbarCertificate, StabilizationPolicy};
use crate::gradedpoly::{
    dehomogenize_shift, floor_i64, format_rational, rat, rational_to_i64, weighted_degree,
    Monomial, MonomialIndex, Poly, PolyError, Rational, WeightVector,
};
use crate::jacobian;
use crate::linalg::{kernel_basis, ExactMatrix, SparseVec, Subspace};
use crate::{Error, Result};

/// A validated local chart at a singular point.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedChart {
    pub point: Vec<Rational>,
    pub chart: usize,
    pub weights: WeightVector,
    /// `f` with `x_chart = 1`, translated to the origin.
    pub local_equation: Poly,
    /// Weighted-degree-1 part of the local equation.
    pub principal_part: Poly,
    /// The local equation has terms of weighted degree above 1.
    pub semi_weighted: bool,
    pub milnor_number: u64,
    pub alpha: Rational,
}

fn point_label(point: &[Rational]) -> String {
    let coords: Vec<String> = point.iter().map(format_rational).collect();
    format!("({})", coords.join(":"))
}

/// Monomials in `w.len()` variables of weighted degree `< bound`
/// (`<= bound` when `inclusive`).
pub fn monomials_below(w: &WeightVector, bound: &Rational, inclusive: bool) -> Vec<Monomial> {
    fn rec(
        w: &[Rational],
        i: usize,
        remaining: &Rational,
        inclusive: bool,
        exps: &mut Vec<u32>,
        out: &mut Vec<Monomial>,
    ) {
        if i == w.len() {
            out.push(Monomial::new(exps.clone()));
            return;
        }
        let mut e = 0u32;
        let mut left = remaining.clone();
        while if inclusive { !left.is_negative() } else { left.is_positive() } {
            exps.push(e);
            rec(w, i + 1, &left, inclusive, exps, out);
            exps.pop();
            e += 1;
            left -= &w[i];
        }
    }
    let mut out = Vec::new();
    rec(w.weights(), 0, bound, inclusive, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Whether the ideal `(∂h₁)` of a weighted-homogeneous `h₁` of degree 1
/// contains every monomial of weighted degree above the socle degree
/// `Σ (1 - 2 w_i)`, which is equivalent to an isolated singularity at 0.
fn isolated_weighted(h1: &Poly, w: &WeightVector) -> Result<bool> {
    let s: Rational = w.weights().iter().map(|wi| Rational::one() - wi * rat(2)).sum();
    let upper = &s + &w.max();
    let mut by_degree: BTreeMap<Rational, Vec<Monomial>> = BTreeMap::new();
    for m in monomials_below(w, &upper, true) {
        let wd = weighted_degree(&m, w)?;
        if wd > s {
            by_degree.entry(wd).or_default().push(m);
        }
    }
    let partials: Vec<Poly> = (0..h1.nvars()).map(|i| h1.derivative(i)).collect();
    for (delta, targets) in by_degree {
        let index: HashMap<Monomial, usize> =
            targets.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows: Vec<SparseVec> = Vec::new();
        for (i, p) in partials.iter().enumerate() {
            let cofactor_degree = &delta - (Rational::one() - &w.weights()[i]);
            if cofactor_degree.is_negative() {
                continue;
            }
            for u in monomials_below(w, &cofactor_degree, true) {
                if weighted_degree(&u, w)? != cofactor_degree {
                    continue;
                }
                let prod = p.mul_monomial(&u);
                let mut row: SparseVec = Vec::new();
                for (m, c) in prod.terms() {
                    match index.get(m) {
                        Some(&j) => row.push((j, c.clone())),
                        None => return Ok(false),
                    }
                }
                row.sort_by_key(|(j, _)| *j);
                rows.push(row);
            }
        }
        if Subspace::span(targets.len(), rows).dim() < targets.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Validates a chart: the point is a singular point of `V(f)`, the local
/// equation has no terms of weighted degree below 1, and its degree-1 part
/// is an isolated weighted-homogeneous singularity.
pub fn build_chart(
    f: &Poly,
    point: &[Rational],
    chart: usize,
    weights: WeightVector,
) -> Result<WeightedChart> {
    let nvars = f.nvars();
    if point.len() != nvars {
        return Err(PolyError::LengthMismatch {
            expected: nvars,
            got: point.len(),
        }
        .into());
    }
    if chart >= nvars || point[chart].is_zero() {
        return Err(PolyError::PointNotInChart { chart }.into());
    }
    if weights.len() != nvars - 1 {
        return Err(PolyError::LengthMismatch {
            expected: nvars - 1,
            got: weights.len(),
        }
        .into());
    }
    let label = point_label(point);
    if !f.eval(point)?.is_zero() {
        return Err(Error::PointNotOnHypersurface(label));
    }
    for i in 0..nvars {
        if !f.derivative(i).eval(point)?.is_zero() {
            return Err(Error::SmoothPoint(label));
        }
    }
    let h = dehomogenize_shift(f, chart, point)?;
    let parts = h.weighted_parts(&weights)?;
    let (lowest, h1) = parts
        .iter()
        .next()
        .ok_or_else(|| Error::ChartValidation(format!("local equation vanishes at {label}")))?;
    if lowest != &Rational::one() {
        return Err(Error::ChartValidation(format!(
            "lowest weighted degree of the local equation at {label} is {}, expected 1",
            format_rational(lowest)
        )));
    }
    let euler = (0..h1.nvars()).fold(Poly::zero(h1.nvars()), |acc, i| {
        let t = &h1.derivative(i) * &Poly::var(h1.nvars(), i);
        &acc + &t.scale(&weights.weights()[i])
    });
    if &euler != h1 || !isolated_weighted(h1, &weights)? {
        return Err(Error::ChartValidation(format!(
            "weighted-degree-1 part at {label} does not have an isolated singularity"
        )));
    }
    let mu: Rational = weights
        .weights()
        .iter()
        .map(|wi| wi.recip() - Rational::one())
        .product();
    let milnor_number = rational_to_i64(&mu)
        .filter(|m| *m > 0)
        .ok_or_else(|| Error::ChartValidation(format!("non-integral Milnor number at {label}")))?
        as u64;
    Ok(WeightedChart {
        point: point.to_vec(),
        chart,
        alpha: weights.sum(),
        principal_part: h1.clone(),
        semi_weighted: parts.len() > 1,
        local_equation: h,
        weights,
        milnor_number,
    })
}

/// Whether the supplied charts can account for all singular points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartCoverage {
    pub global_tjurina: u64,
    pub milnor_sum: u64,
    /// Local Tjurina numbers are at most the Milnor numbers, so a larger
    /// global total means some singular point has no chart.
    pub possibly_incomplete: bool,
}

pub fn chart_coverage(f: &Poly, charts: &[WeightedChart]) -> Result<ChartCoverage> {
    let tau = jacobian::global_tjurina(f)?.tau as u64;
    let milnor_sum = charts.iter().map(|c| c.milnor_number).sum();
    Ok(ChartCoverage {
        global_tjurina: tau,
        milnor_sum,
        possibly_incomplete: tau > milnor_sum,
    })
}

/// `α_Y`, the minimum of the local `α`; `None` stands for `+∞` (smooth).
pub fn alpha_y(f: &Poly, charts: &[WeightedChart]) -> Result<Option<Rational>> {
    if jacobian::smoothness_test(f) {
        return Ok(None);
    }
    if charts.is_empty() {
        return Err(Error::MissingCharts);
    }
    Ok(charts.iter().map(|c| c.alpha.clone()).min())
}

/// Minimal monomial generators of `O^{≥β}`.
pub fn monomial_ideal_geq(w: &WeightVector, beta: &Rational) -> Vec<Monomial> {
    let t = beta - w.sum();
    if !t.is_positive() {
        return vec![Monomial::one(w.len())];
    }
    let wd = |m: &Monomial| weighted_degree(m, w).expect("weights match");
    monomials_below(w, &(&t + &w.max()), false)
        .into_iter()
        .filter(|m| {
            wd(m) >= t
                && (0..w.len()).all(|i| match m.derivative(i) {
                    Some((_, lower)) => wd(&lower) < t,
                    None => true,
                })
        })
        .collect()
}

/// `Σ_e A_e h^{-e}`, keyed by pole order.
type PoleSum = BTreeMap<u32, Poly>;

fn derive_pole_sum(s: &PoleSum, h: &Poly, i: usize) -> PoleSum {
    let hi = h.derivative(i);
    let mut out: PoleSum = BTreeMap::new();
    let mut add = |e: u32, p: Poly| {
        if p.is_zero() {
            return;
        }
        let slot = out.entry(e).or_insert_with(|| Poly::zero(h.nvars()));
        *slot = &*slot + &p;
    };
    for (&e, a) in s {
        add(e, a.derivative(i));
        add(e + 1, (&(a * &hi)).scale(&-rat(e as i64)));
    }
    out.retain(|_, p| !p.is_zero());
    out
}

/// Local ideal `𝒥^(q)` modulo `O^{≥q+1}`: the span of its jets of weighted
/// degree below `threshold = q + 1 - α`.
#[derive(Clone, Debug)]
pub struct LocalIdealJets {
    pub q: u32,
    pub threshold: Rational,
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    pub space: Subspace,
}

impl LocalIdealJets {
    /// `dim O / 𝒥^(q)`.
    pub fn colength(&self) -> usize {
        self.space.codim()
    }

    /// Coordinates of the jet of `g` below the threshold.
    pub fn jet(&self, g: &Poly, w: &WeightVector) -> Result<SparseVec> {
        let mut v = Vec::new();
        for (m, c) in g.weighted_truncation(w, &self.threshold)?.terms() {
            v.push((self.index[m], c.clone()));
        }
        v.sort_by_key(|(i, _)| *i);
        Ok(v)
    }

    /// Canonical representative of `g` modulo `𝒥^(q)`.
    pub fn residual(&self, g: &Poly, w: &WeightVector) -> Result<SparseVec> {
        Ok(self.space.reduce(&self.jet(g, w)?))
    }

    pub fn contains(&self, g: &Poly, w: &WeightVector) -> Result<bool> {
        Ok(self.residual(g, w)?.is_empty())
    }
}

pub fn local_jq_jets(chart: &WeightedChart, q: u32) -> Result<LocalIdealJets> {
    let w = &chart.weights;
    let h = &chart.local_equation;
    let n = w.len() as i64;
    let threshold = rat(q as i64 + 1) - &chart.alpha;
    let monomials = if threshold.is_positive() {
        monomials_below(w, &threshold, false)
    } else {
        Vec::new()
    };
    let index: HashMap<Monomial, usize> =
        monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut jets = LocalIdealJets {
        q,
        threshold: threshold.clone(),
        monomials,
        index,
        space: Subspace::zero(0),
    };
    jets.space = Subspace::zero(jets.monomials.len());
    if jets.monomials.is_empty() {
        return Ok(jets);
    }
    let k0 = floor_i64(&(rat(n) - &chart.alpha)) - 1;
    let mut vectors: Vec<SparseVec> = Vec::new();
    for k in 0..=k0.min(q as i64) {
        let k = k as u32;
        for m in monomial_ideal_geq(w, &rat(k as i64 + 1)) {
            // all derivatives up to order q - k of m h^{-k-1}
            let mut layer: Vec<PoleSum> = vec![BTreeMap::from([(k + 1, Poly::monomial(m.clone()))])];
            let mut seen: Vec<Monomial> = vec![Monomial::one(w.len())];
            for j in 0..=(q - k) {
                for s in &layer {
                    // h^{k+1+j} ∂^γ(m h^{-k-1}) is a polynomial
                    let top = k + 1 + j;
                    let mut numerator = Poly::zero(w.len());
                    for (&e, a) in s {
                        numerator = &numerator + &(a * &h.pow(top - e));
                    }
                    let mut generator = numerator.weighted_truncation(w, &threshold)?;
                    for _ in 0..(q - k - j) {
                        generator = (&generator * h).weighted_truncation(w, &threshold)?;
                    }
                    if generator.is_zero() {
                        continue;
                    }
                    for u in &jets.monomials {
                        let prod = generator.mul_monomial(u).weighted_truncation(w, &threshold)?;
                        if !prod.is_zero() {
                            vectors.push(jets.jet(&prod, w)?);
                        }
                    }
                }
                if j == q - k {
                    break;
                }
                let mut next_layer = Vec::new();
                let mut next_seen = Vec::new();
                for (s, gamma) in layer.iter().zip(&seen) {
                    // ∂^γ with γ nondecreasing in the variable index
                    let last = (0..w.len()).rev().find(|&i| gamma.exponents()[i] > 0).unwrap_or(0);
                    for i in last..w.len() {
                        next_layer.push(derive_pole_sum(s, h, i));
                        next_seen.push(gamma.mul(&Monomial::var(w.len(), i)));
                    }
                }
                layer = next_layer;
                seen = next_seen;
            }
        }
    }
    jets.space = Subspace::span(jets.monomials.len(), vectors);
    Ok(jets)
}

/// `J^(q)_D` in the degree `D = (q+1) d - n - 1`: forms whose local
/// expansion lies in `𝒥^(q)` at every chart.
#[derive(Clone, Debug)]
pub struct GlobalIdealPiece {
    pub q: u32,
    pub degree: i64,
    pub ambient_dim: usize,
    pub basis: Vec<Poly>,
}

impl GlobalIdealPiece {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn global_jq(f: &Poly, charts: &[WeightedChart], q: u32) -> Result<GlobalIdealPiece> {
    let nvars = f.nvars();
    let d = f.homogeneous_degree().ok_or(Error::NotHomogeneous)? as i64;
    let degree = (q as i64 + 1) * d - nvars as i64;
    let ambient = MonomialIndex::new(nvars, degree);
    let local: Vec<LocalIdealJets> = charts
        .iter()
        .map(|c| local_jq_jets(c, q))
        .collect::<Result<_>>()?;
    let offsets: Vec<usize> = local
        .iter()
        .scan(0, |acc, l| {
            let o = *acc;
            *acc += l.monomials.len();
            Some(o)
        })
        .collect();
    let total: usize = local.iter().map(|l| l.monomials.len()).sum();
    let mut columns: Vec<SparseVec> = Vec::with_capacity(ambient.len());
    for m in ambient.basis() {
        let g = Poly::monomial(m.clone());
        let mut col = Vec::new();
        for ((chart, jets), off) in charts.iter().zip(&local).zip(&offsets) {
            let lg = dehomogenize_shift(&g, chart.chart, &chart.point)?;
            col.extend(jets.residual(&lg, &chart.weights)?.into_iter().map(|(i, c)| (i + off, c)));
        }
        columns.push(col);
    }
    let basis = if total == 0 {
        ambient.basis().iter().cloned().map(Poly::monomial).collect()
    } else {
        let map = ExactMatrix::from_columns(total, &columns);
        kernel_basis(&map).basis().iter().map(|v| ambient.to_poly(v)).collect()
    };
    Ok(GlobalIdealPiece {
        q,
        degree,
        ambient_dim: ambient.len(),
        basis,
    })
}

pub fn global_jq_dim(f: &Poly, charts: &[WeightedChart], q: u32) -> Result<usize> {
    Ok(global_jq(f, charts, q)?.dim())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeEntry {
    pub q: u32,
    /// `dim J^(q)_{(q+1)d-n-1}`.
    pub jq_dim: usize,
    /// `dim F^{n-q} H^n(U)`.
    pub hodge_dim: usize,
    /// `dim P^{n-q} H^n(U)`.
    pub pole_dim: usize,
    pub hodge_certificate: HbarCertificate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HodgeReport {
    pub alpha: Option<Rational>,
    pub entries: Vec<HodgeEntry>,
    /// `F ⊂ P` everywhere, with equality whenever `q <= α_Y - 1`.
    pub invariants_hold: bool,
}

/// `dim F^{n-q} H^n(U)` for `q = 0..=q_max`, as the image of `J^(q)` in
/// `H̄_{f,(q+1)d}`, next to the pole-order dimensions.
pub fn hodge_filtration_dims(
    module: &BrieskornModule,
    charts: &[WeightedChart],
    q_max: u32,
    policy: &StabilizationPolicy,
) -> Result<HodgeReport> {
    let f = module.hypersurface().poly();
    let alpha = alpha_y(f, charts)?;
    let d = module.d() as i64;
    let mut entries = Vec::new();
    let mut ok = true;
    for q in 0..=q_max {
        let k = (q as i64 + 1) * d;
        let piece = global_jq(f, charts, q)?;
        let cert = module.stabilized_image(k, &piece.basis, policy)?;
        let pole_dim = module.hbar_dim(k, policy)?;
        let forced_equal = match &alpha {
            None => true,
            Some(a) => rat(q as i64) <= a - Rational::one(),
        };
        ok &= cert.dim <= pole_dim && (!forced_equal || cert.dim == pole_dim);
        entries.push(HodgeEntry {
            q,
            jq_dim: piece.dim(),
            hodge_dim: cert.dim,
            pole_dim,
            hodge_certificate: cert,
        });
    }
    Ok(HodgeReport {
        alpha,
        entries,
        invariants_hold: ok,
    })
}
