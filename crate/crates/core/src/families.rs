//! One-parameter families `f_s = Σ s^i f_i` of homogeneous polynomials and
//! the action of `∂_s` on the graded pieces of the pole-order filtration.
//!
//! Differentiating `m ω₀ / f_s^q` gives `-q (∂_s f) m ω₀ / f_s^{q+1}`, which
//! induces
//!
//! ```text
//! Gr_P^{n-q+1} = H̄_{qd} / f H̄_{(q-1)d}  ->  H̄_{(q+1)d} / f H̄_{qd} = Gr_P^{n-q}
//! ```
//!
//! whenever the pole-order dimensions do not jump along the family.
//! `H̄_k` is realised as `f^N H_{f,k} ⊂ H_{f,k+Nd}` for a certified power `N`.

use num_traits::{One, Zero};

use crate::brieskorn::{BrieskornModule, Hypersurface, StabilizationPolicy};
use crate::gradedpoly::{monomial_basis, rat, Monomial, MonomialIndex, Poly, Rational};
use crate::jacobian;
use crate::linalg::{kernel_basis, ExactMatrix, SparseVec, Subspace};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    /// `coeffs[i]` multiplies `s^i`.
    coeffs: Vec<Poly>,
    d: u32,
}

impl Family {
    pub fn new(coeffs: Vec<Poly>) -> Result<Self> {
        let first = coeffs.first().ok_or(Error::BadFamily)?;
        let d = first.homogeneous_degree().ok_or(Error::BadFamily)?;
        let nvars = first.nvars();
        for c in &coeffs {
            if c.nvars() != nvars || !(c.is_zero() || c.homogeneous_degree() == Some(d)) {
                return Err(Error::BadFamily);
            }
        }
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last().is_some_and(Poly::is_zero) {
            coeffs.pop();
        }
        Ok(Family { coeffs, d })
    }

    /// `f₀ + s g`.
    pub fn pencil(f0: Poly, g: Poly) -> Result<Self> {
        Self::new(vec![f0, g])
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn nvars(&self) -> usize {
        self.coeffs[0].nvars()
    }

    pub fn coefficients(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn specialize(&self, s: &Rational) -> Poly {
        let mut acc = Poly::zero(self.nvars());
        let mut power = Rational::one();
        for c in &self.coeffs {
            acc = &acc + &c.scale(&power);
            power *= s;
        }
        acc
    }

    /// `∂_s f_s` at `s`.
    pub fn xi_f(&self, s: &Rational) -> Poly {
        let mut acc = Poly::zero(self.nvars());
        let mut power = Rational::one();
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            acc = &acc + &c.scale(&(&power * rat(i as i64)));
            power *= s;
        }
        acc
    }

    pub fn fiber(&self, s: &Rational) -> Result<BrieskornModule> {
        let f = self.specialize(s);
        if f.is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(BrieskornModule::new(Hypersurface::new(f)?))
    }
}

pub fn default_samples() -> Vec<Rational> {
    [0, 1, -1, 2].into_iter().map(rat).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleConstancy {
    pub samples: Vec<Rational>,
    /// Pole-order dimensions of each sampled fiber.
    pub dims: Vec<Vec<usize>>,
    pub constant: bool,
}

pub fn pole_constancy_check(
    family: &Family,
    samples: &[Rational],
    policy: Option<&StabilizationPolicy>,
) -> Result<PoleConstancy> {
    let mut dims = Vec::new();
    for s in samples {
        let m = family.fiber(s)?;
        let p = policy.copied().unwrap_or_else(|| m.default_policy());
        dims.push(m.pole_filtration_dims(&p)?.dims);
    }
    let constant = dims.windows(2).all(|w| w[0] == w[1]);
    Ok(PoleConstancy {
        samples: samples.to_vec(),
        dims,
        constant,
    })
}

/// A graded piece `H̄_k / f H̄_{k-d}` realised inside `H_{f,L}`.
struct GradedPiece {
    landing: i64,
    power: u32,
    /// Image of `f^{N+1} H_{f,k-d}`.
    lower: Subspace,
    /// Monomials of `C[x]_{k-n-1}` whose classes form a basis.
    basis: Vec<Monomial>,
    /// Their reduced images modulo `lower`.
    basis_vectors: Vec<SparseVec>,
}

fn f_power_image(module: &BrieskornModule, p: &Poly, power: u32) -> SparseVec {
    let f = module.hypersurface().poly();
    let mut q = p.clone();
    for _ in 0..power {
        q = &q * f;
    }
    let k = q.homogeneous_degree().map_or(0, |e| e as i64) + module.hypersurface().nvars() as i64;
    module.slice(k).reduce(&q)
}

fn graded_piece(module: &BrieskornModule, k: i64, power: u32) -> GradedPiece {
    let n = module.n() as i64;
    let d = module.d() as i64;
    let landing = k + power as i64 * d;
    let slice = module.slice(landing);
    let ambient_dim = slice.ambient().len();
    let lower_vectors: Vec<SparseVec> = monomial_basis(n as usize + 1, k - d - n - 1)
        .into_iter()
        .map(|m| f_power_image(module, &Poly::monomial(m), power + 1))
        .collect();
    let lower = Subspace::span(ambient_dim, lower_vectors);
    let mut chosen = lower.clone();
    let mut basis = Vec::new();
    let mut basis_vectors = Vec::new();
    if k >= n + 1 {
        for m in monomial_basis(n as usize + 1, k - n - 1) {
            let v = lower.reduce(&f_power_image(module, &Poly::monomial(m.clone()), power));
            if !chosen.contains(&v) {
                chosen = chosen.sum(&Subspace::span(ambient_dim, vec![v.clone()]));
                basis.push(m);
                basis_vectors.push(v);
            }
        }
    }
    GradedPiece {
        landing,
        power,
        lower,
        basis,
        basis_vectors,
    }
}

impl GradedPiece {
    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn coordinates(&self, module: &BrieskornModule, p: &Poly) -> Result<Option<Vec<Rational>>> {
        let v = self.lower.reduce(&f_power_image(module, p, self.power));
        if self.basis.is_empty() {
            return Ok(v.is_empty().then(Vec::new));
        }
        let ambient = module.slice(self.landing).ambient().len();
        let m = ExactMatrix::from_columns(ambient, &self.basis_vectors);
        let dense = crate::linalg::dense_from_sparse(&v, ambient);
        Ok(m.solve(&dense)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NablaMatrix {
    pub q: u32,
    pub s0: Rational,
    /// Monomials `m` standing for `m ω₀ / f^q`.
    pub source_basis: Vec<Monomial>,
    /// Monomials `m` standing for `m ω₀ / f^{q+1}`.
    pub target_basis: Vec<Monomial>,
    /// `target_dim × source_dim`.
    pub matrix: ExactMatrix,
    /// Powers of `f` used for the source and target pieces.
    pub powers: (u32, u32),
    /// The matrix is unchanged with one more power of `f`.
    pub power_independent: bool,
    /// Representatives of zero in the source map to zero in the target.
    pub well_defined: bool,
}

fn nabla_at_powers(
    module: &BrieskornModule,
    xi: &Poly,
    q: u32,
    source_power: u32,
    target_power: u32,
) -> Result<(GradedPiece, GradedPiece, ExactMatrix, bool)> {
    let d = module.d() as i64;
    let n = module.n() as i64;
    let source = graded_piece(module, q as i64 * d, source_power);
    let target = graded_piece(module, (q as i64 + 1) * d, target_power);
    let factor = -rat(q as i64);
    let mut columns = Vec::new();
    for m in &source.basis {
        let image = (xi * &Poly::monomial(m.clone())).scale(&factor);
        let coords = target
            .coordinates(module, &image)?
            .ok_or_else(|| Error::Invalid("connection image outside the target piece".into()))?;
        columns.push(crate::linalg::sparse_from_dense(&coords));
    }
    let matrix = ExactMatrix::from_columns(target.dim(), &columns);
    // elements of C[x]_{qd-n-1} that are zero in the source piece
    let src_idx = MonomialIndex::new(module.hypersurface().nvars(), q as i64 * d - n - 1);
    let src_ambient = module.slice(source.landing).ambient().len();
    let images: Vec<SparseVec> = src_idx
        .basis()
        .iter()
        .map(|m| source.lower.reduce(&f_power_image(module, &Poly::monomial(m.clone()), source.power)))
        .collect();
    let map = ExactMatrix::from_columns(src_ambient, &images);
    let mut well_defined = true;
    for v in kernel_basis(&map).basis() {
        let p = (xi * &src_idx.to_poly(v)).scale(&factor);
        let r = target.lower.reduce(&f_power_image(module, &p, target.power));
        if !r.is_empty() {
            well_defined = false;
            break;
        }
    }
    Ok((source, target, matrix, well_defined))
}

/// Matrix of the graded connection `Gr_P^{n-q+1} -> Gr_P^{n-q}` at `s0`.
/// Refuses when the pole-order dimensions vary over `samples`.
pub fn grp_nabla_matrix(
    family: &Family,
    s0: &Rational,
    q: u32,
    samples: &[Rational],
    policy: Option<&StabilizationPolicy>,
) -> Result<NablaMatrix> {
    let mut all = samples.to_vec();
    if !all.contains(s0) {
        all.push(s0.clone());
    }
    if !pole_constancy_check(family, &all, policy)?.constant {
        return Err(Error::PoleDimsNotConstant);
    }
    let module = family.fiber(s0)?;
    let policy = policy.copied().unwrap_or_else(|| module.default_policy());
    let d = module.d() as i64;
    let xi = family.xi_f(s0);
    let power_for = |k: i64| -> Result<u32> {
        if k < 0 {
            return Ok(0);
        }
        Ok(module.hbar(k, &policy)?.power)
    };
    let qd = q as i64 * d;
    let sp = power_for(qd)?.max(power_for(qd - d)?);
    let tp = power_for(qd + d)?.max(power_for(qd)?);
    let (source, target, matrix, well_defined) = nabla_at_powers(&module, &xi, q, sp, tp)?;
    let (_, _, again, wd_again) = nabla_at_powers(&module, &xi, q, sp + 1, tp + 1)?;
    let power_independent = again == matrix;
    Ok(NablaMatrix {
        q,
        s0: s0.clone(),
        source_basis: source.basis,
        target_basis: target.basis,
        matrix,
        powers: (sp, tp),
        power_independent,
        well_defined: well_defined && wd_again,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TjurinaScan {
    pub samples: Vec<Rational>,
    /// `None` for fibers with non-isolated singularities.
    pub tau: Vec<Option<u64>>,
    pub generic: Option<u64>,
    /// Samples whose Tjurina number exceeds the generic value.
    pub jumps: Vec<Rational>,
}

pub fn tjurina_scan(family: &Family, samples: &[Rational]) -> TjurinaScan {
    let tau: Vec<Option<u64>> = samples
        .iter()
        .map(|s| {
            jacobian::global_tjurina(&family.specialize(s))
                .ok()
                .map(|c| c.tau as u64)
        })
        .collect();
    let generic = tau.iter().flatten().min().copied();
    let jumps = samples
        .iter()
        .zip(&tau)
        .filter(|(_, t)| match (t, generic) {
            (Some(t), Some(g)) => *t > g,
            (None, Some(_)) => true,
            _ => false,
        })
        .map(|(s, _)| s.clone())
        .collect();
    TjurinaScan {
        samples: samples.to_vec(),
        tau,
        generic,
        jumps,
    }
}

impl NablaMatrix {
    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn entry(&self, i: usize, j: usize) -> Rational {
        self.matrix.get(i, j)
    }

    pub fn has_nonzero_entry(&self) -> bool {
        (0..self.matrix.rows()).any(|i| (0..self.matrix.cols()).any(|j| !self.entry(i, j).is_zero()))
    }
}
