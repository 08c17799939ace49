//! Operator sections over the unit space, equivariance and propagation, and
//! the symbol morphism attached to a boundary decomposition.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_complex::Complex64;

use crate::algebra::{regular_representation, AlgebraElement, FibreMatrix};
use crate::error::{Error, Result};
use crate::groupoid::{reduction, ArrowId, FiniteGroupoid, InvariantSubset, Reduction, UnitId};
use crate::linalg::{spectral_norm, CMatrix};

/// A choice of fibre matrix `φ(x)` on `ℓ²(s⁻¹(x))` for each unit `x` of a
/// domain. Sections produced by [`symbol`] are defined on the boundary only.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSection {
    groupoid: Arc<FiniteGroupoid>,
    fibres: Vec<FibreMatrix>,
}

impl OperatorSection {
    /// Checks that each matrix is indexed by its unit's source fibre.
    pub fn new(groupoid: Arc<FiniteGroupoid>, fibres: Vec<FibreMatrix>) -> Result<Self> {
        for f in &fibres {
            if f.unit.0 >= groupoid.num_units() {
                return Err(Error::UnknownUnit(f.unit.to_string()));
            }
            let want = groupoid.source_fibre(f.unit);
            if f.fibre != want || f.matrix.nrows() != want.len() || f.matrix.ncols() != want.len() {
                return Err(Error::Format(format!(
                    "fibre matrix at unit {} does not match its source fibre",
                    groupoid.unit_label(f.unit)
                )));
            }
            if f.matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::Format("fibre matrix has non-finite entries".into()));
            }
        }
        Ok(OperatorSection { groupoid, fibres })
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn fibres(&self) -> &[FibreMatrix] {
        &self.fibres
    }

    pub fn at(&self, x: UnitId) -> Option<&FibreMatrix> {
        self.fibres.iter().find(|f| f.unit == x)
    }

    pub fn at_mut(&mut self, x: UnitId) -> Option<&mut FibreMatrix> {
        self.fibres.iter_mut().find(|f| f.unit == x)
    }

    /// The constant identity section over every unit.
    pub fn identity(g: &Arc<FiniteGroupoid>) -> Self {
        lambda_section(&AlgebraElement::one(g))
    }

    /// The zero section over every unit.
    pub fn zero(g: &Arc<FiniteGroupoid>) -> Self {
        lambda_section(&AlgebraElement::zero(g))
    }

    /// Largest fibre norm.
    pub fn norm(&self) -> f64 {
        self.fibres
            .iter()
            .map(|f| spectral_norm(&f.matrix).expect("square"))
            .fold(0.0, f64::max)
    }
}

/// `x ↦ λ_x(f)` over every unit.
pub fn lambda_section(f: &AlgebraElement) -> OperatorSection {
    let g = f.groupoid();
    OperatorSection {
        groupoid: g.clone(),
        fibres: g
            .units()
            .map(|x| regular_representation(f, x).expect("own unit"))
            .collect(),
    }
}

/// `R_γ* φ(s(γ)) R_γ` as a matrix on `ℓ²(s⁻¹(r(γ)))`, where
/// `R_γ δ_α = δ_{αγ}`. Entry `(α'', α')` is `φ(s(γ))[α''γ, α'γ]`.
pub fn conjugate_by_translation(g: &FiniteGroupoid, gamma: ArrowId, at_source: &FibreMatrix) -> CMatrix {
    let fib = g.source_fibre(g.range(gamma));
    let pos: Vec<usize> = fib
        .iter()
        .map(|&a| {
            at_source
                .position(g.mul(a, gamma))
                .expect("translate lies in s⁻¹(s(γ))")
        })
        .collect();
    CMatrix::from_fn(fib.len(), fib.len(), |i, j| at_source.matrix[(pos[i], pos[j])])
}

/// `max_γ ‖φ(r(γ)) − R_γ* φ(s(γ)) R_γ‖` over arrows with both endpoints in
/// the section's domain; zero exactly for equivariant sections.
pub fn equivariance_defect(s: &OperatorSection) -> f64 {
    let g = &s.groupoid;
    g.arrows()
        .filter_map(|gamma| {
            let at_range = s.at(g.range(gamma))?;
            let at_source = s.at(g.source(gamma))?;
            let moved = conjugate_by_translation(g, gamma, at_source);
            Some(spectral_norm(&(&at_range.matrix - moved)).expect("square"))
        })
        .fold(0.0, f64::max)
}

/// The smallest arrow set `K` such that every nonzero entry `(γ'', γ')` of
/// every fibre has `γ''γ'⁻¹ ∈ K`, ascending.
pub fn propagation(s: &OperatorSection) -> Vec<ArrowId> {
    let g = &s.groupoid;
    let mut k = BTreeSet::new();
    for f in &s.fibres {
        for (i, &row) in f.fibre.iter().enumerate() {
            for (j, &col) in f.fibre.iter().enumerate() {
                if f.matrix[(i, j)] != Complex64::new(0.0, 0.0) {
                    k.insert(g.mul(row, g.inverse(col)));
                }
            }
        }
    }
    k.into_iter().collect()
}

/// A split of the unit space into an invariant open part `X` and its
/// invariant complement, the boundary `∂X`, with the reduction `𝒢(∂X)`.
#[derive(Debug, Clone)]
pub struct BoundaryDecomposition {
    groupoid: Arc<FiniteGroupoid>,
    open: InvariantSubset,
    boundary: InvariantSubset,
    reduced: Arc<FiniteGroupoid>,
    embedding: Reduction,
}

impl BoundaryDecomposition {
    pub fn new(g: &Arc<FiniteGroupoid>, boundary_units: &[UnitId]) -> Result<Self> {
        let boundary = InvariantSubset::new(g, boundary_units)?;
        let open = boundary.complement();
        // Complements of invariant sets are invariant; re-check anyway.
        let open = InvariantSubset::new(g, &open.units())?;
        let embedding = reduction(g, &boundary);
        Ok(BoundaryDecomposition {
            groupoid: g.clone(),
            open,
            boundary,
            reduced: Arc::new(embedding.groupoid.clone()),
            embedding,
        })
    }

    pub fn from_labels(g: &Arc<FiniteGroupoid>, labels: &[&str]) -> Result<Self> {
        let units = labels.iter().map(|l| g.unit_by_label(l)).collect::<Result<Vec<_>>>()?;
        Self::new(g, &units)
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn open(&self) -> &InvariantSubset {
        &self.open
    }

    pub fn boundary(&self) -> &InvariantSubset {
        &self.boundary
    }

    /// `𝒢(∂X)`.
    pub fn boundary_groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.reduced
    }

    /// Ambient arrow behind each arrow of `𝒢(∂X)`.
    pub fn arrow_embedding(&self) -> &[ArrowId] {
        &self.embedding.arrow_map
    }

    /// Ambient unit behind each unit of `𝒢(∂X)`.
    pub fn unit_embedding(&self) -> &[UnitId] {
        &self.embedding.unit_map
    }

    /// Whether an ambient arrow lies in `𝒢(X)`.
    pub fn in_open_part(&self, a: ArrowId) -> bool {
        self.open.contains(self.groupoid.source(a))
    }

    fn check(&self, f: &AlgebraElement) -> Result<()> {
        if Arc::ptr_eq(f.groupoid(), &self.groupoid) || **f.groupoid() == *self.groupoid {
            Ok(())
        } else {
            Err(Error::GroupoidMismatch)
        }
    }
}

/// Restriction `C_c(𝒢) → C_c(𝒢(∂X))`; a ∗-homomorphism with kernel
/// `C_c(𝒢(X))`.
pub fn quotient_restrict(f: &AlgebraElement, d: &BoundaryDecomposition) -> Result<AlgebraElement> {
    d.check(f)?;
    AlgebraElement::from_dense(&d.reduced, d.embedding.arrow_map.iter().map(|&a| f.coeff(a)).collect())
}

/// The symbol: `ω ↦ λ_ω(f)` for `ω ∈ ∂X`, fibres of the ambient groupoid.
pub fn symbol(f: &AlgebraElement, d: &BoundaryDecomposition) -> Result<OperatorSection> {
    d.check(f)?;
    let fibres = d
        .boundary
        .units()
        .into_iter()
        .map(|w| regular_representation(f, w))
        .collect::<Result<Vec<_>>>()?;
    Ok(OperatorSection {
        groupoid: d.groupoid.clone(),
        fibres,
    })
}
