//! The convolution ∗-algebra `C_c(𝒢)` of a finite groupoid with counting
//! measures, its regular representations and the reduced norm.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::groupoid::{ArrowId, FiniteGroupoid, UnitId};
use crate::linalg::{spectral_norm, CMatrix};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A complex function on the arrows of a groupoid (absent arrows are zero).
#[derive(Debug, Clone)]
pub struct AlgebraElement {
    groupoid: Arc<FiniteGroupoid>,
    coeffs: Vec<Complex64>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        same_groupoid(&self.groupoid, &other.groupoid) && self.coeffs == other.coeffs
    }
}

fn same_groupoid(a: &Arc<FiniteGroupoid>, b: &Arc<FiniteGroupoid>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl AlgebraElement {
    pub fn zero(g: &Arc<FiniteGroupoid>) -> Self {
        AlgebraElement {
            groupoid: g.clone(),
            coeffs: vec![ZERO; g.num_arrows()],
        }
    }

    /// The unit `1`: the indicator of the identity arrows.
    pub fn one(g: &Arc<FiniteGroupoid>) -> Self {
        let mut f = Self::zero(g);
        for x in g.units() {
            f.coeffs[g.unit_arrow(x).0] = ONE;
        }
        f
    }

    pub fn delta(g: &Arc<FiniteGroupoid>, a: ArrowId) -> Self {
        let mut f = Self::zero(g);
        f.coeffs[a.0] = ONE;
        f
    }

    /// Builds an element from a dense coefficient vector in arrow order.
    pub fn from_dense(g: &Arc<FiniteGroupoid>, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != g.num_arrows() {
            return Err(Error::Format(format!(
                "expected {} coefficients, got {}",
                g.num_arrows(),
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Format("coefficients must be finite".into()));
        }
        Ok(AlgebraElement {
            groupoid: g.clone(),
            coeffs,
        })
    }

    pub fn from_pairs(g: &Arc<FiniteGroupoid>, pairs: impl IntoIterator<Item = (ArrowId, Complex64)>) -> Result<Self> {
        let mut f = Self::zero(g);
        for (a, z) in pairs {
            if a.0 >= g.num_arrows() {
                return Err(Error::UnknownArrow(a.to_string()));
            }
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::Format("coefficients must be finite".into()));
            }
            f.coeffs[a.0] += z;
        }
        Ok(f)
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn coeff(&self, a: ArrowId) -> Complex64 {
        self.coeffs[a.0]
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Arrows with a nonzero coefficient, ascending.
    pub fn support(&self) -> Vec<ArrowId> {
        self.groupoid.arrows().filter(|a| self.coeffs[a.0] != ZERO).collect()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        AlgebraElement {
            groupoid: self.groupoid.clone(),
            coeffs: self.coeffs.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(AlgebraElement {
            groupoid: self.groupoid.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-ONE))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if same_groupoid(&self.groupoid, &other.groupoid) {
            Ok(())
        } else {
            Err(Error::GroupoidMismatch)
        }
    }
}

/// `(f∗g)(γ) = Σ_{α ∈ s⁻¹(s(γ))} f(γα⁻¹) g(α)`, summed in fibre order.
pub fn convolve(f: &AlgebraElement, g: &AlgebraElement) -> Result<AlgebraElement> {
    f.check_same(g)?;
    let gr = &f.groupoid;
    let coeffs = gr
        .arrows()
        .map(|gamma| {
            let mut acc = ZERO;
            for &alpha in gr.source_fibre(gr.source(gamma)) {
                acc += f.coeffs[gr.mul(gamma, gr.inverse(alpha)).0] * g.coeffs[alpha.0];
            }
            acc
        })
        .collect();
    Ok(AlgebraElement {
        groupoid: gr.clone(),
        coeffs,
    })
}

/// `f*(γ) = conj(f(γ⁻¹))`.
pub fn involution(f: &AlgebraElement) -> AlgebraElement {
    let gr = &f.groupoid;
    AlgebraElement {
        groupoid: gr.clone(),
        coeffs: gr.arrows().map(|a| f.coeffs[gr.inverse(a).0].conj()).collect(),
    }
}

/// `‖f‖_I = max(sup_x Σ_{s⁻¹(x)} |f|, sup_x Σ_{s⁻¹(x)} |f*|)`.
pub fn i_norm(f: &AlgebraElement) -> f64 {
    let gr = &f.groupoid;
    let fibre_sup = |h: &dyn Fn(ArrowId) -> f64| {
        gr.units()
            .map(|x| gr.source_fibre(x).iter().map(|&a| h(a)).sum::<f64>())
            .fold(0.0, f64::max)
    };
    let direct = fibre_sup(&|a| f.coeffs[a.0].norm());
    let adjoint = fibre_sup(&|a| f.coeffs[gr.inverse(a).0].norm());
    direct.max(adjoint)
}

/// `λ_x(f)` as a matrix on `ℓ²(s⁻¹(x))`, rows and columns in fibre order.
#[derive(Debug, Clone, PartialEq)]
pub struct FibreMatrix {
    pub unit: UnitId,
    pub fibre: Vec<ArrowId>,
    pub matrix: CMatrix,
}

impl FibreMatrix {
    pub fn dim(&self) -> usize {
        self.fibre.len()
    }

    pub fn position(&self, a: ArrowId) -> Option<usize> {
        self.fibre.iter().position(|&b| b == a)
    }
}

/// Matrix entry `(γ'', γ') = f(γ''·γ'⁻¹)` over `γ', γ'' ∈ s⁻¹(x)`.
pub fn regular_representation(f: &AlgebraElement, x: UnitId) -> Result<FibreMatrix> {
    let gr = &f.groupoid;
    if x.0 >= gr.num_units() {
        return Err(Error::UnknownUnit(x.to_string()));
    }
    let fibre = gr.source_fibre(x).to_vec();
    let matrix = CMatrix::from_fn(fibre.len(), fibre.len(), |i, j| {
        f.coeffs[gr.mul(fibre[i], gr.inverse(fibre[j])).0]
    });
    Ok(FibreMatrix { unit: x, fibre, matrix })
}

/// `‖f‖_r = max_x ‖λ_x(f)‖` over every unit.
pub fn reduced_norm(f: &AlgebraElement) -> f64 {
    f.groupoid
        .units()
        .map(|x| {
            let m = regular_representation(f, x).expect("unit of own groupoid");
            spectral_norm(&m.matrix).expect("fibre matrices are square")
        })
        .fold(0.0, f64::max)
}
