//! Fibrewise invertibility: the unitized invertibility test over all regular
//! representations, and the four-condition check for invertibility modulo
//! the open part of a boundary decomposition.
//!
//! A fibre counts as invertible when its smallest singular value exceeds
//! [`INVERTIBILITY_CUT`]. Fibres within a factor [`NEAR_BAND`] of the cut are
//! listed separately in the report.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{regular_representation, AlgebraElement, FibreMatrix};
use crate::error::{Error, Result};
use crate::exact::{exact_from_f64, solve_exact, ExactElement, GaussRational};
use crate::groupoid::{FiniteGroupoid, UnitId};
use crate::linalg::{smallest_singular_value, spectral_norm, CMatrix};
use crate::section::{quotient_restrict, symbol, BoundaryDecomposition};

pub const INVERTIBILITY_CUT: f64 = 1e-10;
pub const NEAR_BAND: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Test `f` itself.
    Plain,
    /// Test `1 + f`.
    Unitized,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitVerdict {
    pub unit: String,
    pub sigma_min: f64,
    pub invertible: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conditions {
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
    pub c4: bool,
}

impl Conditions {
    pub fn all_agree(&self) -> bool {
        self.c1 == self.c2 && self.c2 == self.c3 && self.c3 == self.c4
    }
}

/// Report shared by [`exel_invertibility`] and [`main_theorem_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvertibilityReport {
    pub per_unit: Vec<UnitVerdict>,
    pub verdict: bool,
    /// `max ‖λ_x(·)⁻¹‖` over the tested units; absent unless every fibre is
    /// invertible. A finite maximum at this scale, so no uniform-boundedness
    /// question arises.
    pub sup_inverse_norm: Option<f64>,
    pub conditions: Option<Conditions>,
    /// Units whose smallest singular value lies within the near-threshold band.
    pub near_threshold: Vec<String>,
    /// Set when there is nothing to test (empty boundary).
    pub degenerate: bool,
    pub notes: Vec<String>,
}

fn unitized_matrix(f: &AlgebraElement, x: UnitId, mode: Mode) -> FibreMatrix {
    let mut m = regular_representation(f, x).expect("own unit");
    if mode == Mode::Unitized {
        let n = m.dim();
        m.matrix += CMatrix::identity(n, n);
    }
    m
}

fn verdicts(g: &FiniteGroupoid, mats: &[FibreMatrix]) -> (Vec<UnitVerdict>, Vec<String>) {
    let mut near = Vec::new();
    let per_unit = mats
        .iter()
        .map(|m| {
            let sigma_min = smallest_singular_value(&m.matrix);
            let label = g.unit_label(m.unit).to_string();
            if sigma_min > INVERTIBILITY_CUT / NEAR_BAND && sigma_min < INVERTIBILITY_CUT * NEAR_BAND {
                near.push(label.clone());
            }
            UnitVerdict {
                unit: label,
                sigma_min,
                invertible: sigma_min > INVERTIBILITY_CUT,
            }
        })
        .collect();
    (per_unit, near)
}

/// Report on `f` (or `1 + f`): invertible iff every `λ_x` image is, since
/// `⊕_x λ_x` is faithful on a finite groupoid.
pub fn exel_invertibility(f: &AlgebraElement, mode: Mode) -> InvertibilityReport {
    let g = f.groupoid();
    let mats: Vec<FibreMatrix> = g.units().map(|x| unitized_matrix(f, x, mode)).collect();
    let (per_unit, near_threshold) = verdicts(g, &mats);
    let verdict = per_unit.iter().all(|u| u.invertible);
    let sup_inverse_norm = verdict.then(|| per_unit.iter().map(|u| 1.0 / u.sigma_min).fold(0.0, f64::max));
    InvertibilityReport {
        per_unit,
        verdict,
        sup_inverse_norm,
        conditions: None,
        near_threshold,
        degenerate: g.num_units() == 0,
        notes: vec![],
    }
}

/// The inverse of `f` (or `1 + f`) in `C_c(𝒢)`, read back from the inverted
/// fibre matrices: `h(γ) = λ_{s(γ)}(·)⁻¹[γ, s(γ)]`.
pub fn invert(f: &AlgebraElement, mode: Mode) -> Result<AlgebraElement> {
    let g = f.groupoid();
    let report = exel_invertibility(f, mode);
    if !report.verdict {
        return Err(Error::SingularFibre(
            report
                .per_unit
                .into_iter()
                .filter(|u| !u.invertible)
                .map(|u| u.unit)
                .collect(),
        ));
    }
    let mut coeffs = vec![num_complex::Complex64::new(0.0, 0.0); g.num_arrows()];
    for x in g.units() {
        let m = unitized_matrix(f, x, mode);
        let inv = m
            .matrix
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::SingularFibre(vec![g.unit_label(x).to_string()]))?;
        let col = m.position(g.unit_arrow(x)).expect("identity in own fibre");
        for (row, &gamma) in m.fibre.iter().enumerate() {
            coeffs[gamma.0] = inv[(row, col)];
        }
    }
    AlgebraElement::from_dense(g, coeffs)
}

/// Condition (1) certificate: `h` with `f∗h − 1` and `h∗f − 1` supported in
/// `𝒢(X)`, with exact coefficients.
#[derive(Debug, Clone)]
pub struct QuotientInverse {
    /// Canonical lift: the exact inverse of the quotient image, zero on `𝒢(X)`.
    pub lift: ExactElement,
}

/// Solves `q(f) ∗ h = 1` in `C_c(𝒢(∂X))` exactly, fibre by fibre, then
/// checks `h ∗ q(f) = 1` exactly. Returns the lift to `𝒢`.
pub fn quotient_inverse(f: &AlgebraElement, d: &BoundaryDecomposition) -> Result<Option<QuotientInverse>> {
    let q = quotient_restrict(f, d)?;
    let qg = q.groupoid().clone();
    let qe = ExactElement::from_element(&q);
    let mut h = ExactElement::zero(&qg);
    for w in qg.units() {
        // (q∗h)(γ) = Σ_{α ∈ s⁻¹(w)} q(γα⁻¹) h(α) for γ ∈ s⁻¹(w).
        let fib = qg.source_fibre(w);
        let a: Vec<Vec<GaussRational>> = fib
            .iter()
            .map(|&gamma| {
                fib.iter()
                    .map(|&alpha| qe.coeff(qg.compose(gamma, qg.inverse(alpha)).unwrap()).clone())
                    .collect()
            })
            .collect();
        let rhs: Vec<GaussRational> = fib
            .iter()
            .map(|&gamma| {
                let v = if gamma == qg.unit_arrow(w) { 1.0 } else { 0.0 };
                exact_from_f64(num_complex::Complex64::new(v, 0.0))
            })
            .collect();
        let Some(sol) = solve_exact(a, rhs) else {
            return Ok(None);
        };
        for (&alpha, v) in fib.iter().zip(sol) {
            h.set(alpha, v);
        }
    }
    let one = ExactElement::one(&qg);
    if !qe.convolve(&h).sub(&one).is_zero() || !h.convolve(&qe).sub(&one).is_zero() {
        return Ok(None);
    }
    let g = d.groupoid();
    let mut lift = ExactElement::zero(g);
    for (i, &a) in d.arrow_embedding().iter().enumerate() {
        lift.set(a, h.coeff(crate::groupoid::ArrowId(i)).clone());
    }
    Ok(Some(QuotientInverse { lift }))
}

/// Exact restriction to `𝒢(∂X)` of an exact element over `𝒢`.
pub fn quotient_restrict_exact(f: &ExactElement, d: &BoundaryDecomposition) -> ExactElement {
    let qg = d.boundary_groupoid();
    let mut out = ExactElement::zero(qg);
    for (i, &a) in d.arrow_embedding().iter().enumerate() {
        out.set(crate::groupoid::ArrowId(i), f.coeff(a).clone());
    }
    out
}

/// Four-condition report for `f` relative to `d`:
///
/// 1. `f` is invertible modulo `C_c(𝒢(X))` (exact solve in the quotient);
/// 2. the symbol section is invertible with bounded inverses (LU inverses);
/// 3. every limit operator `λ_ω(f)`, `ω ∈ ∂X`, is invertible, with the sup of
///    inverse norms reported (singular values);
/// 4. every limit operator is invertible.
///
/// (3) and (4) coincide on a finite boundary: the sup is a finite maximum.
pub fn main_theorem_check(
    f: &AlgebraElement,
    d: &BoundaryDecomposition,
) -> Result<(InvertibilityReport, Option<QuotientInverse>)> {
    let g: &Arc<FiniteGroupoid> = d.groupoid();
    let certificate = quotient_inverse(f, d)?;
    let c1 = certificate.is_some();

    let section = symbol(f, d)?;
    let inverse_norms: Option<Vec<f64>> = section
        .fibres()
        .iter()
        .map(|m| {
            let n = m.dim();
            let inv = m.matrix.clone().try_inverse()?;
            let residual = spectral_norm(&(&m.matrix * &inv - CMatrix::identity(n, n))).ok()?;
            let norm = spectral_norm(&inv).ok()?;
            (residual <= 1e-6 && norm.is_finite() && norm < 1.0 / INVERTIBILITY_CUT).then_some(norm)
        })
        .collect();
    let c2 = inverse_norms.is_some();

    let (per_unit, near_threshold) = verdicts(g, section.fibres());
    let c4 = per_unit.iter().all(|u| u.invertible);
    let sup = per_unit.iter().map(|u| 1.0 / u.sigma_min).fold(0.0, f64::max);
    let c3 = c4 && sup.is_finite();
    let degenerate = d.boundary().is_empty();
    let mut notes = vec!["conditions (3) and (4) coincide: the boundary is finite".to_string()];
    if degenerate {
        notes.push("empty boundary: all conditions hold vacuously".into());
    }
    if !near_threshold.is_empty() {
        notes.push("some boundary fibres sit near the invertibility cut".into());
    }
    let conditions = Conditions { c1, c2, c3, c4 };
    if !conditions.all_agree() {
        notes.push("conditions disagree".into());
    }
    Ok((
        InvertibilityReport {
            per_unit,
            verdict: c4,
            sup_inverse_norm: c3.then_some(sup),
            conditions: Some(conditions),
            near_threshold,
            degenerate,
            notes,
        },
        certificate,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::convolve;
    use crate::groupoid::{disjoint_union, pair_groupoid, ArrowId, GroupSpec};
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn one_is_invertible_with_inverse_one() {
        let g = Arc::new(pair_groupoid(3));
        let one = AlgebraElement::one(&g);
        let r = exel_invertibility(&one, Mode::Plain);
        assert!(r.verdict);
        assert!((r.sup_inverse_norm.unwrap() - 1.0).abs() < 1e-12);
        let inv = invert(&one, Mode::Plain).unwrap();
        for a in g.arrows() {
            assert!((inv.coeff(a) - one.coeff(a)).norm() < 1e-14);
        }
    }

    #[test]
    fn nilpotent_matrix_unit() {
        let g = Arc::new(pair_groupoid(2));
        let n = AlgebraElement::delta(&g, g.arrow_by_label("(1,2)").unwrap());
        assert!(!exel_invertibility(&n, Mode::Plain).verdict);
        assert!(matches!(invert(&n, Mode::Plain), Err(Error::SingularFibre(_))));
        let r = exel_invertibility(&n, Mode::Unitized);
        assert!(r.verdict);
        let inv = invert(&n, Mode::Unitized).unwrap();
        let want = AlgebraElement::one(&g).sub(&n).unwrap();
        assert_eq!(inv, want);
        let prod = convolve(&AlgebraElement::one(&g).add(&n).unwrap(), &inv).unwrap();
        assert_eq!(prod, AlgebraElement::one(&g));
    }

    #[test]
    fn singular_cyclic_element() {
        let g = Arc::new(GroupSpec::cyclic(2).as_groupoid());
        let f = AlgebraElement::from_dense(&g, vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let r = exel_invertibility(&f, Mode::Plain);
        assert!(!r.verdict && r.sup_inverse_norm.is_none());
        assert!(r.per_unit[0].sigma_min < 1e-14);
    }

    #[test]
    fn near_threshold_fibres_are_listed() {
        let g = Arc::new(GroupSpec::cyclic(2).as_groupoid());
        let f = AlgebraElement::from_dense(&g, vec![c(1.0, 0.0), c(1.0 - 2e-10, 0.0)]).unwrap();
        let r = exel_invertibility(&f, Mode::Plain);
        assert_eq!(r.near_threshold, vec!["0".to_string()]);
    }

    fn blocks() -> Arc<FiniteGroupoid> {
        Arc::new(disjoint_union(&[
            &pair_groupoid(2),
            &GroupSpec::cyclic(2).as_groupoid(),
        ]))
    }

    #[test]
    fn empty_boundary_is_degenerate_and_true() {
        let g = blocks();
        let d = BoundaryDecomposition::new(&g, &[]).unwrap();
        let f = AlgebraElement::zero(&g);
        let (r, cert) = main_theorem_check(&f, &d).unwrap();
        assert!(r.degenerate);
        assert_eq!(
            r.conditions,
            Some(Conditions {
                c1: true,
                c2: true,
                c3: true,
                c4: true
            })
        );
        assert!(cert.is_some());
    }

    #[test]
    fn one_passes_all_conditions() {
        let g = blocks();
        let d = BoundaryDecomposition::new(&g, &[UnitId(2)]).unwrap();
        let (r, _) = main_theorem_check(&AlgebraElement::one(&g), &d).unwrap();
        assert_eq!(
            r.conditions,
            Some(Conditions {
                c1: true,
                c2: true,
                c3: true,
                c4: true
            })
        );
        assert!((r.sup_inverse_norm.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn singular_boundary_block_fails_all_conditions() {
        let g = blocks();
        let d = BoundaryDecomposition::new(&g, &[UnitId(2)]).unwrap();
        // Invertible on the open block, δ_e + δ_g on the ℤ/2 boundary block.
        let f = AlgebraElement::from_pairs(
            &g,
            [
                (ArrowId(0), c(2.0, 0.0)),
                (ArrowId(1), c(3.0, 0.0)),
                (ArrowId(4), c(1.0, 0.0)),
                (ArrowId(5), c(1.0, 0.0)),
            ],
        )
        .unwrap();
        let (r, cert) = main_theorem_check(&f, &d).unwrap();
        assert_eq!(
            r.conditions,
            Some(Conditions {
                c1: false,
                c2: false,
                c3: false,
                c4: false
            })
        );
        assert!(cert.is_none());
    }

    #[test]
    fn certificate_is_exact() {
        let g = blocks();
        let d = BoundaryDecomposition::new(&g, &[UnitId(2)]).unwrap();
        let f = AlgebraElement::from_pairs(
            &g,
            [
                (ArrowId(2), c(5.0, 1.0)),
                (ArrowId(4), c(0.3, 0.7)),
                (ArrowId(5), c(-1.1, 0.2)),
            ],
        )
        .unwrap();
        let (r, cert) = main_theorem_check(&f, &d).unwrap();
        assert!(r.conditions.unwrap().all_agree() && r.verdict);
        let h = cert.unwrap().lift;
        let fe = ExactElement::from_element(&f);
        let one = ExactElement::one(&g);
        assert!(quotient_restrict_exact(&fe.convolve(&h).sub(&one), &d).is_zero());
        assert!(quotient_restrict_exact(&h.convolve(&fe).sub(&one), &d).is_zero());
        // The lift vanishes on 𝒢(X).
        for a in g.arrows().filter(|&a| d.in_open_part(a)) {
            assert!(num_traits::Zero::is_zero(h.coeff(a)));
        }
    }
}
