//! Graded pieces of the Jacobian ring `R = C[x] / (∂_0 f, ..., ∂_n f)`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use crate::gradedpoly::{hilbert_ci_coeffs, monomial_basis, Monomial, MonomialIndex, Poly, Rational};
use crate::linalg::{echelon_int, IntRow, Subspace};
use crate::{Error, Result};

/// `C[x]_k` together with the degree-`k` part of the Jacobian ideal.
#[derive(Debug, Clone)]
pub struct JacobianSlice {
    pub ambient: MonomialIndex,
    pub ideal: Subspace,
}

impl JacobianSlice {
    pub fn dim(&self) -> usize {
        self.ambient.len() - self.ideal.dim()
    }
}

fn integer_partials(f: &Poly) -> Vec<Vec<(Monomial, BigInt)>> {
    let scaled = f.scale(&Rational::from_integer(f.denominator_lcm()));
    (0..f.nvars())
        .map(|i| {
            scaled
                .derivative(i)
                .terms()
                .map(|(m, c)| (m.clone(), c.to_integer()))
                .collect()
        })
        .collect()
}

fn ideal_rows(f: &Poly, ambient: &MonomialIndex) -> Vec<IntRow> {
    let Some(d) = f.homogeneous_degree() else {
        return Vec::new();
    };
    let partials = integer_partials(f);
    let mut rows = Vec::new();
    for m in monomial_basis(f.nvars(), ambient.degree() - d as i64 + 1) {
        for p in &partials {
            let mut acc: HashMap<usize, BigInt> = HashMap::new();
            for (pm, c) in p {
                let pos = ambient.position(&pm.mul(&m)).expect("degree");
                *acc.entry(pos).or_insert_with(BigInt::zero) += c;
            }
            let mut row: IntRow = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            if !row.is_empty() {
                row.sort_by_key(|(i, _)| *i);
                rows.push(row);
            }
        }
    }
    rows
}

/// The slice `R_k` with an explicit basis of the ideal part.
pub fn jacobian_slice(f: &Poly, k: i64) -> JacobianSlice {
    let ambient = MonomialIndex::new(f.nvars(), k);
    let ideal = Subspace::from_int_rows(ambient.len(), ideal_rows(f, &ambient));
    JacobianSlice { ambient, ideal }
}

/// `dim R_k`; zero for negative `k`.
pub fn jacobian_dim(f: &Poly, k: i64) -> usize {
    if k < 0 {
        return 0;
    }
    let ambient = MonomialIndex::new(f.nvars(), k);
    let rank = echelon_int(ambient.len(), ideal_rows(f, &ambient)).len();
    ambient.len() - rank
}

/// `[dim R_0, ..., dim R_{k_max}]`.
pub fn jacobian_dims(f: &Poly, k_max: i64) -> Vec<usize> {
    (0..=k_max).map(|k| jacobian_dim(f, k)).collect()
}

/// Degree in which `R` vanishes exactly when `V(f)` is smooth: one past the
/// socle degree `(n+1)(d-2)` of a complete intersection of `n+1` forms of
/// degree `d-1`.
pub fn smoothness_degree(f: &Poly) -> Option<i64> {
    let d = f.homogeneous_degree()? as i64;
    Some(f.nvars() as i64 * (d - 2) + 1)
}

/// Whether `V(f)` is smooth. Exact: the partials have no common projective
/// zero iff `R` is Artinian, and then `R` is a complete intersection whose
/// top degree is `(n+1)(d-2)`.
pub fn smoothness_test(f: &Poly) -> bool {
    match smoothness_degree(f) {
        Some(k) => jacobian_dim(f, k) == 0,
        None => false,
    }
}

/// Primitive Hodge numbers `h^{n-1-q, q}` of a smooth degree-`d`
/// hypersurface in `P^n`, `q = 0..n-1`, read off the Jacobian ring of a
/// Fermat polynomial in degrees `(q+1)d - n - 1`.
pub fn smooth_hodge_numbers(n: usize, d: u32) -> Vec<u64> {
    if d < 2 {
        return vec![0; n];
    }
    let coeffs = hilbert_ci_coeffs(n + 1, d as usize - 1);
    (0..n)
        .map(|q| {
            let k = (q as i64 + 1) * d as i64 - n as i64 - 1;
            if k < 0 {
                0
            } else {
                coeffs.get(k as usize).copied().unwrap_or(0)
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TjurinaCertificate {
    pub tau: usize,
    /// First degree inspected.
    pub start_degree: i64,
    /// `dim R_k` for `k = start_degree, start_degree + 1, ...`.
    pub dims: Vec<usize>,
}

/// Total Tjurina number `τ(V(f)) = dim R_k` for `k` large. The value is
/// accepted once it repeats over `n + 2` consecutive degrees starting from
/// the smoothness degree; a Hilbert function that keeps moving means the
/// singular locus has positive dimension.
pub fn global_tjurina(f: &Poly) -> Result<TjurinaCertificate> {
    let d = f.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    let start = smoothness_degree(f).ok_or(Error::NotHomogeneous)?.max(0);
    let run = f.nvars() + 1;
    let cap = start + (3 * run as i64).max(2 * d as i64 + run as i64);
    let mut dims = Vec::new();
    for k in start..=cap {
        dims.push(jacobian_dim(f, k));
        if dims.len() >= run {
            let tail = &dims[dims.len() - run..];
            if tail.iter().all(|&x| x == tail[0]) {
                return Ok(TjurinaCertificate {
                    tau: tail[0],
                    start_degree: start,
                    dims,
                });
            }
        }
    }
    Err(Error::NonIsolated { max_degree: cap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradedpoly::parse_poly;

    const XYZ: [&str; 3] = ["x", "y", "z"];
    const XYZT: [&str; 4] = ["x", "y", "z", "t"];

    fn p3(s: &str) -> Poly {
        parse_poly(s, &XYZ).unwrap()
    }

    #[test]
    fn fermat_cubic_ring() {
        assert_eq!(jacobian_dims(&p3("x^3 + y^3 + z^3"), 5), vec![1, 3, 3, 1, 0, 0]);
    }

    #[test]
    fn fermat_quartic_surface_middle() {
        let f = parse_poly("x^4 + y^4 + z^4 + t^4", &XYZT).unwrap();
        assert_eq!(jacobian_dim(&f, 4), 19);
        let r = hilbert_ci_coeffs(4, 3);
        assert_eq!(r, vec![1, 4, 10, 16, 19, 16, 10, 4, 1]);
        assert_eq!(jacobian_dims(&f, 8).iter().map(|&x| x as u64).collect::<Vec<_>>(), r);
    }

    #[test]
    fn jacobian_slice_matches_dim() {
        let f = p3("x^2*y^2 + x*z^3 + y*z^3");
        for k in 0..9 {
            assert_eq!(jacobian_slice(&f, k).dim(), jacobian_dim(&f, k));
        }
        assert_eq!(jacobian_dim(&f, -1), 0);
    }

    #[test]
    fn smoothness() {
        assert!(smoothness_test(&p3("x^3 + y^3 + z^3")));
        assert!(smoothness_test(&p3("x^2 + y^2 + z^2")));
        assert!(!smoothness_test(&p3("x^3 + y^2*z")));
        assert!(!smoothness_test(&p3("x*y*z")));
        assert!(!smoothness_test(&p3("x^2*y^2 + x*z^3 + y*z^3")));
        assert!(smoothness_test(&parse_poly("x^4 + y^4 + z^4 + t^4", &XYZT).unwrap()));
    }

    #[test]
    fn tjurina_numbers() {
        assert_eq!(global_tjurina(&p3("x^3 + y^2*z")).unwrap().tau, 2);
        assert_eq!(global_tjurina(&p3("x^2*y^2 + x*z^3 + y*z^3")).unwrap().tau, 4);
        assert_eq!(global_tjurina(&p3("x^3 + y^3 + z^3")).unwrap().tau, 0);
        // three nodes
        assert_eq!(global_tjurina(&p3("x*y*z")).unwrap().tau, 3);
        // a double line is not an isolated singularity
        assert!(matches!(
            global_tjurina(&p3("x^2*y")),
            Err(Error::NonIsolated { .. })
        ));
    }

    #[test]
    fn tjurina_drops_off_the_quasihomogeneous_member() {
        let f0 = p3("x^4*z + y^5");
        let f1 = p3("x^4*z + y^5 + x^2*y^3");
        let t0 = global_tjurina(&f0).unwrap().tau;
        let t1 = global_tjurina(&f1).unwrap().tau;
        assert_eq!(t0, 12);
        assert!(t1 < t0);
    }

    #[test]
    fn hodge_numbers_of_smooth_hypersurfaces() {
        assert_eq!(smooth_hodge_numbers(2, 3), vec![1, 1]);
        assert_eq!(smooth_hodge_numbers(3, 4), vec![1, 19, 1]);
        assert_eq!(smooth_hodge_numbers(2, 2), vec![0, 0]);
        assert_eq!(smooth_hodge_numbers(2, 4), vec![3, 3]);
        assert_eq!(smooth_hodge_numbers(3, 3), vec![0, 6, 0]);
    }
}
