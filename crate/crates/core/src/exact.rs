//! Exact arithmetic over the Gaussian rationals `ℚ(i)`.
//!
//! Every finite `f64` is a dyadic rational, so floating-point elements embed
//! exactly. Used for certificates that must hold with no rounding.

use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::algebra::AlgebraElement;
use crate::groupoid::{ArrowId, FiniteGroupoid};

pub type GaussRational = Complex<BigRational>;

pub fn exact_from_f64(z: Complex64) -> GaussRational {
    let conv = |x: f64| BigRational::from_float(x).expect("finite coefficient");
    Complex::new(conv(z.re), conv(z.im))
}

pub fn exact_to_f64(z: &GaussRational) -> Complex64 {
    let conv = |x: &BigRational| x.to_f64().unwrap_or(f64::NAN);
    Complex64::new(conv(&z.re), conv(&z.im))
}

fn gzero() -> GaussRational {
    Complex::new(BigRational::zero(), BigRational::zero())
}

fn gone() -> GaussRational {
    Complex::new(BigRational::one(), BigRational::zero())
}

/// An element of `C_c(𝒢)` with Gaussian-rational coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactElement {
    groupoid: Arc<FiniteGroupoid>,
    coeffs: Vec<GaussRational>,
}

impl ExactElement {
    pub fn from_element(f: &AlgebraElement) -> Self {
        ExactElement {
            groupoid: f.groupoid().clone(),
            coeffs: f.coeffs().iter().map(|&z| exact_from_f64(z)).collect(),
        }
    }

    pub fn zero(g: &Arc<FiniteGroupoid>) -> Self {
        ExactElement {
            groupoid: g.clone(),
            coeffs: vec![gzero(); g.num_arrows()],
        }
    }

    pub fn one(g: &Arc<FiniteGroupoid>) -> Self {
        let mut e = Self::zero(g);
        for x in g.units() {
            e.coeffs[g.unit_arrow(x).0] = gone();
        }
        e
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn coeff(&self, a: ArrowId) -> &GaussRational {
        &self.coeffs[a.0]
    }

    pub(crate) fn set(&mut self, a: ArrowId, v: GaussRational) {
        self.coeffs[a.0] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Nearest double-precision element.
    pub fn to_element(&self) -> AlgebraElement {
        AlgebraElement::from_dense(&self.groupoid, self.coeffs.iter().map(exact_to_f64).collect())
            .expect("same arrow count")
    }

    /// Exact convolution, same formula and order as [`crate::algebra::convolve`].
    pub fn convolve(&self, other: &ExactElement) -> ExactElement {
        assert!(
            Arc::ptr_eq(&self.groupoid, &other.groupoid) || *self.groupoid == *other.groupoid,
            "groupoid mismatch"
        );
        let g = &self.groupoid;
        let coeffs = g
            .arrows()
            .map(|gamma| {
                let mut acc = gzero();
                for &alpha in g.source_fibre(g.source(gamma)) {
                    let a = &self.coeffs[g.mul(gamma, g.inverse(alpha)).0];
                    let b = &other.coeffs[alpha.0];
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect();
        ExactElement {
            groupoid: g.clone(),
            coeffs,
        }
    }

    pub fn sub(&self, other: &ExactElement) -> ExactElement {
        ExactElement {
            groupoid: self.groupoid.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Solves `A x = b` exactly by Gaussian elimination. Returns `None` when `A`
/// is singular.
pub fn solve_exact(mut a: Vec<Vec<GaussRational>>, mut b: Vec<GaussRational>) -> Option<Vec<GaussRational>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = gone() / a[col][col].clone();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] * &inv;
            let (top, bottom) = a.split_at_mut(r);
            for (x, p) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *x -= &factor * p;
            }
            let delta = &factor * &b[col];
            b[r] -= delta;
        }
    }
    let mut x = vec![gzero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc -= &a[r][c] * &x[c];
        }
        x[r] = acc / a[r][r].clone();
    }
    Some(x)
}

/// Exact Gaussian rational from a small integer pair, for tests and fixtures.
pub fn gauss_int(re: i64, im: i64) -> GaussRational {
    Complex::new(
        BigRational::from_integer(BigInt::from(re)),
        BigRational::from_integer(BigInt::from(im)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_embedding_is_exact() {
        for x in [0.1, -3.75, 1e-300, 123456.789] {
            let z = exact_from_f64(Complex64::new(x, -x));
            assert_eq!(exact_to_f64(&z), Complex64::new(x, -x));
        }
    }

    #[test]
    fn solves_small_systems() {
        let a = vec![
            vec![gauss_int(0, 0), gauss_int(1, 1)],
            vec![gauss_int(2, 0), gauss_int(0, -1)],
        ];
        let x = solve_exact(a.clone(), vec![gauss_int(1, 0), gauss_int(0, 0)]).unwrap();
        // Check A x = b exactly.
        let r0 = &a[0][0] * &x[0] + &a[0][1] * &x[1];
        let r1 = &a[1][0] * &x[0] + &a[1][1] * &x[1];
        assert_eq!(r0, gauss_int(1, 0));
        assert!(r1.is_zero());
        let sing = vec![
            vec![gauss_int(1, 0), gauss_int(1, 0)],
            vec![gauss_int(1, 0), gauss_int(1, 0)],
        ];
        assert!(solve_exact(sing, vec![gauss_int(1, 0), gauss_int(0, 0)]).is_none());
    }
}
