//! Reduced crossed products `C(X) ⋊_r G` for finite actions, realised on
//! `ℓ²(G)` through the covariant pair `M_ω × ρ`:
//! `M_ω(f)δ_γ = f(γω)δ_γ`, `ρ(γ')δ_γ = δ_{γ'γ}`.
//!
//! An element `F` of `C_c(X ⋊ G)` corresponds to `Σ_γ F_γ u_γ` with
//! `F_γ(x) = F(x, γ)`.

use num_complex::Complex64;

use crate::algebra::{regular_representation, AlgebraElement};
use crate::error::{Error, Result};
use crate::groupoid::{transformation_groupoid, ActionSpec, UnitId};
use crate::linalg::CMatrix;

fn check(a: &ActionSpec, f: &AlgebraElement, omega: usize) -> Result<()> {
    if omega >= a.num_points() {
        return Err(Error::UnknownPoint(omega.to_string()));
    }
    let g = f.groupoid();
    if g.num_arrows() != a.group().order() * a.num_points() || **g != transformation_groupoid(a) {
        return Err(Error::GroupoidMismatch);
    }
    Ok(())
}

/// `(M_ω × ρ)(Σ_γ F_γ u_γ)` as a `|G|×|G|` matrix, rows and columns in group
/// element order. Entry `(g, h)` is `F(gω, gh⁻¹)`.
pub fn crossed_product_rep(a: &ActionSpec, f: &AlgebraElement, omega: usize) -> Result<CMatrix> {
    check(a, f, omega)?;
    let grp = a.group();
    let n = grp.order();
    let mut out = CMatrix::zeros(n, n);
    for gamma in 0..n {
        // M_ω(F_γ) ρ(γ): column h maps to row γh with weight F_γ(γhω).
        for h in 0..n {
            let row = grp.mul(gamma, h);
            let x = a.act(row, omega);
            out[(row, h)] += f.coeff(a.arrow(x, gamma));
        }
    }
    Ok(out)
}

/// `V_ω λ_ω(F) V_ω*` for the fibre bijection `V_ω: (γω, γ) ↦ γ` from the
/// source fibre over `ω` onto `G`.
pub fn conjugated_regular_rep(a: &ActionSpec, f: &AlgebraElement, omega: usize) -> Result<CMatrix> {
    check(a, f, omega)?;
    let grp = a.group();
    let n = grp.order();
    let lam = regular_representation(f, UnitId(omega))?;
    // Position in the fibre of the arrow (γω, γ), for each γ.
    let pos: Vec<usize> = (0..n)
        .map(|gamma| {
            lam.position(a.arrow(a.act(gamma, omega), gamma))
                .expect("arrow lies in the fibre")
        })
        .collect();
    Ok(CMatrix::from_fn(n, n, |g, h| lam.matrix[(pos[g], pos[h])]))
}

/// Largest entrywise difference between the two realisations.
pub fn crossed_product_defect(a: &ActionSpec, f: &AlgebraElement, omega: usize) -> Result<f64> {
    let m = crossed_product_rep(a, f, omega)?;
    let v = conjugated_regular_rep(a, f, omega)?;
    Ok((m - v).iter().map(|z: &Complex64| z.norm()).fold(0.0, f64::max))
}
