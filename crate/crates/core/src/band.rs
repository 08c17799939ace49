//! Band operators on `ℓ²(ℤ)` with structured diagonals, and their limit
//! operators along declared directions.
//!
//! Diagonal `m` holds `d_m(n) = T_{n+m, n}`, so `T δ_n = Σ_m d_m(n) δ_{n+m}`
//! and the bilateral shift `V δ_n = δ_{n+1}` is `d₁ ≡ 1`.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{BandMatrix, CMatrix};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub type SampleFn = Arc<dyn Fn(i64) -> Complex64 + Send + Sync>;

/// The coefficient function `n ↦ d_m(n)` of one diagonal.
#[derive(Clone)]
pub enum CoefficientSequence {
    FiniteSupport(BTreeMap<i64, Complex64>),
    /// `d(n) = values[n mod p]`, `p = values.len() ≥ 1`.
    Periodic(Vec<Complex64>),
    /// `values[n + window]` on `[−window, window]`, `left` below and `right`
    /// above.
    EventuallyConstant {
        window: i64,
        values: Vec<Complex64>,
        left: Complex64,
        right: Complex64,
    },
    /// A callback trusted only on `|n| ≤ window`.
    Sampled {
        f: SampleFn,
        window: i64,
    },
}

impl fmt::Debug for CoefficientSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::FiniteSupport(t) => f.debug_tuple("FiniteSupport").field(t).finish(),
            Self::Periodic(v) => f.debug_tuple("Periodic").field(v).finish(),
            Self::EventuallyConstant {
                window,
                values,
                left,
                right,
            } => f
                .debug_struct("EventuallyConstant")
                .field("window", window)
                .field("values", values)
                .field("left", left)
                .field("right", right)
                .finish(),
            Self::Sampled { window, .. } => f
                .debug_struct("Sampled")
                .field("window", window)
                .finish_non_exhaustive(),
        }
    }
}

/// Structural equality; sampled sequences are equal only when they share a
/// callback.
impl PartialEq for CoefficientSequence {
    fn eq(&self, other: &Self) -> bool {
        use CoefficientSequence::*;
        match (self, other) {
            (FiniteSupport(a), FiniteSupport(b)) => a == b,
            (Periodic(a), Periodic(b)) => a == b,
            (
                EventuallyConstant {
                    window: w1,
                    values: v1,
                    left: l1,
                    right: r1,
                },
                EventuallyConstant {
                    window: w2,
                    values: v2,
                    left: l2,
                    right: r2,
                },
            ) => w1 == w2 && v1 == v2 && l1 == l2 && r1 == r2,
            (Sampled { f: f1, window: w1 }, Sampled { f: f2, window: w2 }) => Arc::ptr_eq(f1, f2) && w1 == w2,
            _ => false,
        }
    }
}

impl CoefficientSequence {
    pub fn constant(c: Complex64) -> Self {
        Self::Periodic(vec![c])
    }

    pub fn finite(entries: impl IntoIterator<Item = (i64, Complex64)>) -> Self {
        let mut t = BTreeMap::new();
        for (n, v) in entries {
            *t.entry(n).or_insert(ZERO) += v;
        }
        t.retain(|_, v| *v != ZERO);
        Self::FiniteSupport(t)
    }

    pub fn periodic(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSequence(
                "periodic sequence needs at least one value".into(),
            ));
        }
        Ok(Self::Periodic(values))
    }

    pub fn eventually_constant(window: i64, values: Vec<Complex64>, left: Complex64, right: Complex64) -> Result<Self> {
        if window < 0 || values.len() as i64 != 2 * window + 1 {
            return Err(Error::InvalidSequence(format!(
                "window {window} needs {} values, got {}",
                2 * window + 1,
                values.len()
            )));
        }
        Ok(Self::EventuallyConstant {
            window,
            values,
            left,
            right,
        })
    }

    /// `left` on `n < 0`, `right` on `n ≥ 0`.
    pub fn step(left: Complex64, right: Complex64) -> Self {
        Self::EventuallyConstant {
            window: 0,
            values: vec![right],
            left,
            right,
        }
    }

    pub fn sampled(f: impl Fn(i64) -> Complex64 + Send + Sync + 'static, window: i64) -> Result<Self> {
        if window < 0 {
            return Err(Error::InvalidSequence("negative sample window".into()));
        }
        Ok(Self::Sampled { f: Arc::new(f), window })
    }

    pub fn at(&self, n: i64) -> Complex64 {
        match self {
            Self::FiniteSupport(t) => t.get(&n).copied().unwrap_or(ZERO),
            Self::Periodic(v) => v[n.rem_euclid(v.len() as i64) as usize],
            Self::EventuallyConstant {
                window,
                values,
                left,
                right,
            } => {
                if n < -window {
                    *left
                } else if n > *window {
                    *right
                } else {
                    values[(n + window) as usize]
                }
            }
            Self::Sampled { f, .. } => f(n),
        }
    }

    /// `n ↦ self(n + g)`.
    pub fn shift(&self, g: i64) -> Self {
        match self {
            Self::FiniteSupport(t) => Self::FiniteSupport(t.iter().map(|(&n, &v)| (n - g, v)).collect()),
            Self::Periodic(v) => {
                let p = v.len() as i64;
                Self::Periodic((0..p).map(|i| v[(i + g).rem_euclid(p) as usize]).collect())
            }
            Self::EventuallyConstant {
                window, left, right, ..
            } => {
                let w = window + g.abs();
                Self::EventuallyConstant {
                    window: w,
                    values: (-w..=w).map(|n| self.at(n + g)).collect(),
                    left: *left,
                    right: *right,
                }
            }
            Self::Sampled { f, window } => {
                let f = f.clone();
                Self::Sampled {
                    f: Arc::new(move |n| f(n + g)),
                    window: (window - g.abs()).max(0),
                }
            }
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            Self::FiniteSupport(t) => Self::FiniteSupport(t.iter().map(|(&n, v)| (n, v.conj())).collect()),
            Self::Periodic(v) => Self::Periodic(v.iter().map(Complex64::conj).collect()),
            Self::EventuallyConstant {
                window,
                values,
                left,
                right,
            } => Self::EventuallyConstant {
                window: *window,
                values: values.iter().map(Complex64::conj).collect(),
                left: left.conj(),
                right: right.conj(),
            },
            Self::Sampled { f, window } => {
                let f = f.clone();
                Self::Sampled {
                    f: Arc::new(move |n| f(n).conj()),
                    window: *window,
                }
            }
        }
    }

    /// Pointwise sum, when the result stays in a structured class: finite
    /// support plus anything but a nonconstant periodic or sampled sequence,
    /// two periodic sequences, or two eventually constant ones.
    pub fn add(&self, other: &Self) -> Result<Self> {
        use CoefficientSequence::*;
        // Window beyond which the sequence is constant on each side.
        let tail_window = |s: &Self| -> Option<i64> {
            match s {
                FiniteSupport(t) => Some(t.keys().map(|n| n.abs()).max().unwrap_or(0)),
                Periodic(v) if v.iter().all(|&x| x == v[0]) => Some(0),
                EventuallyConstant { window, .. } => Some(*window),
                _ => None,
            }
        };
        match (self, other) {
            (FiniteSupport(a), FiniteSupport(b)) => Ok(Self::finite(a.iter().chain(b).map(|(&n, &v)| (n, v)))),
            (Periodic(a), Periodic(b)) => {
                let p = lcm(a.len(), b.len());
                Ok(Periodic((0..p).map(|i| a[i % a.len()] + b[i % b.len()]).collect()))
            }
            _ => match (tail_window(self), tail_window(other)) {
                (Some(w1), Some(w2)) => {
                    let w = w1.max(w2);
                    let sum = |n: i64| self.at(n) + other.at(n);
                    Ok(EventuallyConstant {
                        window: w,
                        values: (-w..=w).map(sum).collect(),
                        left: sum(-w - 1),
                        right: sum(w + 1),
                    })
                }
                _ => Err(Error::InvalidSequence(
                    "sum of these sequence classes has no structured representation".into(),
                )),
            },
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Self::FiniteSupport(t) => t.values().all(|v| *v == ZERO),
            Self::Periodic(v) => v.iter().all(|v| *v == ZERO),
            Self::EventuallyConstant {
                values, left, right, ..
            } => *left == ZERO && *right == ZERO && values.iter().all(|v| *v == ZERO),
            Self::Sampled { .. } => false,
        }
    }
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// A band operator of width `w`: `d_m` is stored for `|m| ≤ w` and absent
/// diagonals are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct BandOperatorZ {
    width: usize,
    diagonals: BTreeMap<i64, CoefficientSequence>,
}

impl BandOperatorZ {
    pub fn new(width: usize, diagonals: impl IntoIterator<Item = (i64, CoefficientSequence)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (m, d) in diagonals {
            if m.unsigned_abs() as usize > width {
                return Err(Error::InvalidBand(format!("diagonal {m} exceeds width {width}")));
            }
            if map.insert(m, d).is_some() {
                return Err(Error::InvalidBand(format!("diagonal {m} given twice")));
            }
        }
        Ok(BandOperatorZ { width, diagonals: map })
    }

    pub fn identity() -> Self {
        Self::new(0, [(0, CoefficientSequence::constant(Complex64::new(1.0, 0.0)))]).unwrap()
    }

    /// The bilateral shift `δ_n ↦ δ_{n+1}`.
    pub fn shift() -> Self {
        Self::new(1, [(1, CoefficientSequence::constant(Complex64::new(1.0, 0.0)))]).unwrap()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn diagonals(&self) -> &BTreeMap<i64, CoefficientSequence> {
        &self.diagonals
    }

    pub fn diagonal(&self, m: i64) -> Option<&CoefficientSequence> {
        self.diagonals.get(&m)
    }

    /// `T_{x,y} = d_{x−y}(y)`.
    pub fn entry(&self, x: i64, y: i64) -> Complex64 {
        self.diagonals.get(&(x - y)).map_or(ZERO, |d| d.at(y))
    }

    /// `U_g T U_g*`, i.e. entries `(x, y) ↦ T_{g+x, g+y}`.
    pub fn shift_conjugate(&self, g: i64) -> Self {
        BandOperatorZ {
            width: self.width,
            diagonals: self.diagonals.iter().map(|(&m, d)| (m, d.shift(g))).collect(),
        }
    }

    /// `d*_m(n) = conj d_{−m}(n + m)`.
    pub fn adjoint(&self) -> Self {
        BandOperatorZ {
            width: self.width,
            diagonals: self.diagonals.iter().map(|(&m, d)| (-m, d.shift(-m).conj())).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut diagonals = self.diagonals.clone();
        for (&m, d) in &other.diagonals {
            let sum = match diagonals.get(&m) {
                Some(e) => e.add(d)?,
                None => d.clone(),
            };
            diagonals.insert(m, sum);
        }
        Ok(BandOperatorZ {
            width: self.width.max(other.width),
            diagonals,
        })
    }

    /// Diagonals that are not identically zero, for comparisons.
    fn nonzero_diagonals(&self) -> impl Iterator<Item = (&i64, &CoefficientSequence)> {
        self.diagonals.iter().filter(|(_, d)| !d.is_zero())
    }

    /// The `(2n+1)`-square block on indices `[−n, n]`.
    pub fn finite_section(&self, n: usize) -> CMatrix {
        let n = n as i64;
        let size = (2 * n + 1) as usize;
        CMatrix::from_fn(size, size, |i, j| self.entry(i as i64 - n, j as i64 - n))
    }

    /// The block with rows `rows.0..rows.1` and columns `cols.0..cols.1`
    /// (half-open), in banded storage.
    pub fn band_block(&self, rows: (i64, i64), cols: (i64, i64)) -> BandMatrix {
        let w = self.width as i64;
        // Index offset: entry (r, c) is T_{rows.0 + r, cols.0 + c}; nonzero
        // when |(rows.0 + r) − (cols.0 + c)| ≤ w.
        let shift = cols.0 - rows.0;
        let lower = (w + shift).max(0) as usize;
        let upper = (w - shift).max(0) as usize;
        BandMatrix::from_fn(
            (rows.1 - rows.0).max(0) as usize,
            (cols.1 - cols.0).max(0) as usize,
            lower,
            upper,
            |r, c| self.entry(rows.0 + r as i64, cols.0 + c as i64),
        )
    }

    /// Equal after dropping identically zero diagonals.
    pub fn same_operator(&self, other: &Self) -> bool {
        self.nonzero_diagonals().eq(other.nonzero_diagonals())
    }
}

/// A boundary point of `ℤ`, approached along a declared sequence.
#[derive(Clone)]
pub enum DirectionSpec {
    PlusInfinity,
    MinusInfinity,
    Subsequence(Subsequence),
}

#[derive(Clone)]
pub enum Subsequence {
    /// `n_k = start + k·step`, `step ≠ 0`.
    Arithmetic { start: i64, step: i64 },
    /// `n_k = f(k)`; `|n_k|` must be strictly increasing.
    Custom(Arc<dyn Fn(u64) -> i64 + Send + Sync>),
}

impl fmt::Debug for DirectionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PlusInfinity => write!(f, "+inf"),
            Self::MinusInfinity => write!(f, "-inf"),
            Self::Subsequence(Subsequence::Arithmetic { start, step }) => write!(f, "{start}+{step}k"),
            Self::Subsequence(Subsequence::Custom(_)) => write!(f, "custom"),
        }
    }
}

impl DirectionSpec {
    pub fn arithmetic(start: i64, step: i64) -> Result<Self> {
        if step == 0 {
            return Err(Error::InvalidDirection("step must be nonzero".into()));
        }
        Ok(Self::Subsequence(Subsequence::Arithmetic { start, step }))
    }

    pub fn custom(f: impl Fn(u64) -> i64 + Send + Sync + 'static) -> Self {
        Self::Subsequence(Subsequence::Custom(Arc::new(f)))
    }

    /// The `k`-th site of the direction.
    pub fn site(&self, k: u64) -> i64 {
        match self {
            Self::PlusInfinity => k as i64,
            Self::MinusInfinity => -(k as i64),
            Self::Subsequence(Subsequence::Arithmetic { start, step }) => start + k as i64 * step,
            Self::Subsequence(Subsequence::Custom(f)) => f(k),
        }
    }

    /// `+1` or `−1` when the direction eventually stays on one side of a
    /// known tail, `None` for custom sequences.
    fn side(&self) -> Option<i64> {
        match self {
            Self::PlusInfinity => Some(1),
            Self::MinusInfinity => Some(-1),
            Self::Subsequence(Subsequence::Arithmetic { step, .. }) => Some(step.signum()),
            Self::Subsequence(Subsequence::Custom(_)) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitConfig {
    /// Cauchy tolerance for probed limits.
    pub tolerance: f64,
    /// Increasing probe depths `k`.
    pub depths: Vec<u64>,
}

impl Default for LimitConfig {
    fn default() -> Self {
        LimitConfig {
            tolerance: 1e-9,
            depths: (4..=14).map(|e| 1u64 << e).collect(),
        }
    }
}

/// A translation-invariant band operator: `d_m ≡ c_m`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LaurentOperator {
    coeffs: BTreeMap<i64, Complex64>,
}

impl LaurentOperator {
    pub fn new(coeffs: impl IntoIterator<Item = (i64, Complex64)>) -> Self {
        LaurentOperator {
            coeffs: normalize(coeffs),
        }
    }

    pub fn coeff(&self, m: i64) -> Complex64 {
        self.coeffs.get(&m).copied().unwrap_or(ZERO)
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, Complex64> {
        &self.coeffs
    }

    pub fn width(&self) -> usize {
        self.coeffs.keys().map(|m| m.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// `c′_m = conj c_{−m}`.
    pub fn adjoint(&self) -> Self {
        Self::new(self.coeffs.iter().map(|(&m, c)| (-m, c.conj())))
    }

    pub fn to_band(&self) -> BandOperatorZ {
        BandOperatorZ::new(
            self.width(),
            self.coeffs.iter().map(|(&m, &c)| (m, CoefficientSequence::constant(c))),
        )
        .expect("width covers all diagonals")
    }
}

fn normalize(coeffs: impl IntoIterator<Item = (i64, Complex64)>) -> BTreeMap<i64, Complex64> {
    let mut map = BTreeMap::new();
    for (m, c) in coeffs {
        *map.entry(m).or_insert(ZERO) += c;
    }
    map.retain(|_, c| *c != ZERO);
    map
}

/// Probes `d` at the direction's sites; sampled sequences only inside their
/// window.
fn probes(d: &CoefficientSequence, dir: &DirectionSpec, cfg: &LimitConfig) -> Vec<(i64, Complex64)> {
    cfg.depths
        .iter()
        .map(|&k| dir.site(k))
        .filter(|&n| match d {
            CoefficientSequence::Sampled { window, .. } => n.abs() <= *window,
            _ => true,
        })
        .map(|n| (n, d.at(n)))
        .collect()
}

fn check_direction(dir: &DirectionSpec, cfg: &LimitConfig) -> Result<()> {
    if cfg.depths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidDirection("probe depths must increase".into()));
    }
    if let DirectionSpec::Subsequence(Subsequence::Custom(_)) = dir {
        let sites: Vec<i64> = cfg.depths.iter().map(|&k| dir.site(k)).collect();
        if sites.windows(2).any(|w| w[0].abs() >= w[1].abs()) {
            return Err(Error::InvalidDirection(
                "custom subsequence is not strictly increasing in absolute value".into(),
            ));
        }
    }
    Ok(())
}

/// Limit of one diagonal along `dir`.
fn diagonal_limit(m: i64, d: &CoefficientSequence, dir: &DirectionSpec, cfg: &LimitConfig) -> Result<Complex64> {
    let fail = || Error::NotConvergent {
        diagonal: m,
        probes: probes(d, dir, cfg),
    };
    match (d, dir.side()) {
        (CoefficientSequence::FiniteSupport(_), _) => Ok(ZERO),
        (CoefficientSequence::EventuallyConstant { left, right, .. }, Some(side)) => {
            Ok(if side > 0 { *right } else { *left })
        }
        (CoefficientSequence::Periodic(v), Some(_)) => {
            // Residues visited by the tail of the direction.
            let p = v.len() as i64;
            let (start, step) = match dir {
                DirectionSpec::PlusInfinity => (0, 1),
                DirectionSpec::MinusInfinity => (0, -1),
                DirectionSpec::Subsequence(Subsequence::Arithmetic { start, step }) => (*start, *step),
                DirectionSpec::Subsequence(Subsequence::Custom(_)) => unreachable!(),
            };
            let first = v[start.rem_euclid(p) as usize];
            if (0..p).all(|k| v[(start + k * step).rem_euclid(p) as usize] == first) {
                Ok(first)
            } else {
                Err(fail())
            }
        }
        _ => {
            let pr = probes(d, dir, cfg);
            if pr.len() < 3 {
                return Err(fail());
            }
            let last = &pr[pr.len() - 3..];
            let close = |a: Complex64, b: Complex64| (a - b).norm() <= cfg.tolerance;
            if close(last[0].1, last[1].1) && close(last[1].1, last[2].1) && close(last[0].1, last[2].1) {
                Ok(last[2].1)
            } else {
                Err(fail())
            }
        }
    }
}

/// The limit operator of `t` along `dir`: the Laurent operator whose `m`-th
/// diagonal is the limit of `d_m` along the direction. Exact for finite,
/// periodic and eventually constant diagonals along `±∞` and arithmetic
/// subsequences; a three-probe Cauchy test otherwise.
pub fn limit_operator(t: &BandOperatorZ, dir: &DirectionSpec, cfg: &LimitConfig) -> Result<LaurentOperator> {
    check_direction(dir, cfg)?;
    let mut coeffs = Vec::with_capacity(t.diagonals.len());
    for (&m, d) in &t.diagonals {
        coeffs.push((m, diagonal_limit(m, d, dir, cfg)?));
    }
    Ok(LaurentOperator::new(coeffs))
}

/// The trigonometric polynomial `θ ↦ Σ_m c_m e^{imθ}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LaurentSymbol {
    coeffs: BTreeMap<i64, Complex64>,
}

impl LaurentSymbol {
    pub fn new(coeffs: impl IntoIterator<Item = (i64, Complex64)>) -> Self {
        LaurentSymbol {
            coeffs: normalize(coeffs),
        }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new([(0, c)])
    }

    /// `e^{ikθ}`.
    pub fn monomial(k: i64) -> Self {
        Self::new([(k, Complex64::new(1.0, 0.0))])
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, Complex64> {
        &self.coeffs
    }

    pub fn coeff(&self, m: i64) -> Complex64 {
        self.coeffs.get(&m).copied().unwrap_or(ZERO)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.keys().map(|m| m.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(&m, &c)| c * Complex64::from_polar(1.0, m as f64 * theta))
            .sum()
    }

    /// Samples at `θ_j = 2πj/n`.
    pub fn samples(&self, n: usize) -> Vec<(f64, Complex64)> {
        (0..n)
            .map(|j| {
                let t = TAU * j as f64 / n as f64;
                (t, self.eval(t))
            })
            .collect()
    }

    /// `Σ |m·c_m|`, a Lipschitz constant of `θ ↦ s(θ)`.
    pub fn lipschitz_bound(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|(&m, c)| m.unsigned_abs() as f64 * c.norm())
            .sum()
    }

    pub fn product(&self, other: &Self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .flat_map(|(&m, &a)| other.coeffs.iter().map(move |(&k, &b)| (m + k, a * b))),
        )
    }

    /// Symbol of the adjoint operator, `θ ↦ conj s(θ)`.
    pub fn adjoint(&self) -> Self {
        Self::new(self.coeffs.iter().map(|(&m, c)| (-m, c.conj())))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|(&m, &a)| (m, a * c)))
    }
}

pub fn laurent_symbol(l: &LaurentOperator) -> LaurentSymbol {
    LaurentSymbol {
        coeffs: l.coeffs.clone(),
    }
}

#[derive(Serialize, Deserialize)]
struct SymbolRepr {
    coeffs: Vec<(i64, f64, f64)>,
}

impl Serialize for LaurentOperator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        laurent_symbol(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentOperator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(LaurentOperator {
            coeffs: LaurentSymbol::deserialize(d)?.coeffs,
        })
    }
}

impl Serialize for LaurentSymbol {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SymbolRepr {
            coeffs: self.coeffs.iter().map(|(&m, c)| (m, c.re, c.im)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentSymbol {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = SymbolRepr::deserialize(d)?;
        Ok(Self::new(
            r.coeffs.into_iter().map(|(m, re, im)| (m, Complex64::new(re, im))),
        ))
    }
}
