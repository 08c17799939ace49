//! Defects of candidate approximate invariant means.
//!
//! A family assigns each unit `x` a nonnegative weight function `m_x`
//! supported on the source fibre `s⁻¹(x)`. Two defects are reported per
//! family: `d₁ = max_x |1 − ‖m_x‖₁|` and
//! `d₂ = max_γ ‖m_{s(γ)} − γ·m_{r(γ)}‖₁`, where `γ·m` is the push-forward of
//! `m` along right translation `α ↦ αγ`, a bijection
//! `s⁻¹(r(γ)) → s⁻¹(s(γ))`. A sequence certifies amenability only
//! asymptotically, so nothing here decides it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupoid::{ArrowId, FiniteGroupoid, UnitId};

const NORM_SLACK: f64 = 1e-12;

/// Per-unit weights `m_x`, stored as `(arrow, weight)` lists.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanFamily {
    weights: Vec<Vec<(ArrowId, f64)>>,
}

impl MeanFamily {
    /// Checks nonnegativity and `‖m_x‖₁ ≤ 1`; support is checked against a
    /// groupoid by [`mean_defect`].
    pub fn new(weights: Vec<Vec<(ArrowId, f64)>>) -> Result<Self> {
        for (x, w) in weights.iter().enumerate() {
            if w.iter().any(|&(_, v)| !v.is_finite() || v < 0.0) {
                return Err(Error::InvalidMean(format!(
                    "unit {x} has a negative or non-finite weight"
                )));
            }
            let total: f64 = w.iter().map(|&(_, v)| v).sum();
            if total > 1.0 + NORM_SLACK {
                return Err(Error::InvalidMean(format!("unit {x} has total mass {total} > 1")));
            }
        }
        Ok(MeanFamily { weights })
    }

    /// Uniform probability on every source fibre.
    pub fn uniform(g: &FiniteGroupoid) -> Self {
        let weights = g
            .units()
            .map(|x| {
                let fib = g.source_fibre(x);
                let w = 1.0 / fib.len() as f64;
                fib.iter().map(|&a| (a, w)).collect()
            })
            .collect();
        MeanFamily { weights }
    }

    /// Point mass at every identity arrow.
    pub fn identity_point_masses(g: &FiniteGroupoid) -> Self {
        MeanFamily {
            weights: g.units().map(|x| vec![(g.unit_arrow(x), 1.0)]).collect(),
        }
    }

    pub fn weights(&self, x: UnitId) -> &[(ArrowId, f64)] {
        self.weights.get(x.0).map(Vec::as_slice).unwrap_or(&[])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Defects {
    /// `max_x |1 − ‖m_x‖₁|`
    pub mass: f64,
    /// `max_γ ‖m_{s(γ)} − γ·m_{r(γ)}‖₁`
    pub invariance: f64,
}

/// Mean defects for each family of a sequence, in order.
pub fn mean_defect(g: &FiniteGroupoid, means: &[MeanFamily]) -> Result<Vec<Defects>> {
    means.iter().map(|m| family_defect(g, m)).collect()
}

fn family_defect(g: &FiniteGroupoid, m: &MeanFamily) -> Result<Defects> {
    if m.weights.len() > g.num_units() {
        return Err(Error::InvalidMean(format!(
            "{} weight lists for {} units",
            m.weights.len(),
            g.num_units()
        )));
    }
    // Densify per unit, checking support.
    let mut dense = vec![vec![0.0; g.num_arrows()]; g.num_units()];
    for x in g.units() {
        for &(a, w) in m.weights(x) {
            if a.0 >= g.num_arrows() || g.source(a) != x {
                return Err(Error::SupportViolation {
                    unit: g.unit_label(x).to_string(),
                    arrow: if a.0 < g.num_arrows() {
                        g.arrow_label(a).to_string()
                    } else {
                        a.to_string()
                    },
                });
            }
            dense[x.0][a.0] += w;
        }
    }
    let mass = g
        .units()
        .map(|x| (1.0 - dense[x.0].iter().sum::<f64>()).abs())
        .fold(0.0, f64::max);
    let invariance = g
        .arrows()
        .map(|gamma| {
            let (s, r) = (g.source(gamma), g.range(gamma));
            let gamma_inv = g.inverse(gamma);
            // Compare on s⁻¹(s(γ)): (γ·m_r)(β) = m_r(βγ⁻¹).
            g.source_fibre(s)
                .iter()
                .map(|&beta| (dense[s.0][beta.0] - dense[r.0][g.mul(beta, gamma_inv).0]).abs())
                .sum::<f64>()
        })
        .fold(0.0, f64::max);
    Ok(Defects { mass, invariance })
}
