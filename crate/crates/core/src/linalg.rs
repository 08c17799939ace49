//! Dense and banded complex linear algebra used by the rest of the crate.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Largest dimension handled by a full singular value decomposition in
/// [`spectral_norm`].
pub const FULL_SVD_MAX_DIM: usize = 64;
const POWER_REL_TOL: f64 = 1e-12;
const POWER_MAX_ITER: usize = 100_000;

/// Largest singular value of a square matrix.
pub fn spectral_norm(m: &CMatrix) -> Result<f64> {
    if m.nrows() != m.ncols() {
        return Err(Error::NonSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.nrows() == 0 {
        return Ok(0.0);
    }
    if m.nrows() <= FULL_SVD_MAX_DIM {
        return Ok(m.clone().singular_values().max());
    }
    power_norm(m)
}

/// Power iteration on `M*M`.
fn power_norm(m: &CMatrix) -> Result<f64> {
    let n = m.ncols();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut v = nalgebra::DVector::<Complex64>::from_fn(n, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let norm = v.norm();
    if norm == 0.0 {
        return Ok(0.0);
    }
    v /= Complex64::from(norm);
    let mh = m.adjoint();
    let mut prev = 0.0;
    for _ in 0..POWER_MAX_ITER {
        let w = &mh * (m * &v);
        let lambda = w.norm();
        if lambda == 0.0 {
            return Ok(0.0);
        }
        v = w / Complex64::from(lambda);
        if (lambda - prev).abs() <= POWER_REL_TOL * lambda {
            return Ok(lambda.sqrt());
        }
        prev = lambda;
    }
    Err(Error::NoConvergence(POWER_MAX_ITER))
}

/// Smallest singular value of a square matrix (full decomposition).
pub fn smallest_singular_value(m: &CMatrix) -> f64 {
    if m.nrows() == 0 {
        return f64::INFINITY;
    }
    m.clone().singular_values().min()
}

/// A rectangular matrix whose nonzeros satisfy `-lower <= col - row <= upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    rows: usize,
    cols: usize,
    lower: usize,
    upper: usize,
    /// Row-major, `data[r * width + (c + lower - r)]`.
    data: Vec<Complex64>,
}

impl BandMatrix {
    pub fn zeros(rows: usize, cols: usize, lower: usize, upper: usize) -> Self {
        BandMatrix {
            rows,
            cols,
            lower,
            upper,
            data: vec![Complex64::new(0.0, 0.0); rows * (lower + upper + 1)],
        }
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        lower: usize,
        upper: usize,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Self {
        let mut m = Self::zeros(rows, cols, lower, upper);
        for r in 0..rows {
            for c in r.saturating_sub(lower)..(r + upper + 1).min(cols) {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    fn width(&self) -> usize {
        self.lower + self.upper + 1
    }

    fn in_band(&self, r: usize, c: usize) -> bool {
        c + self.lower >= r && c <= r + self.upper
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        if r < self.rows && c < self.cols && self.in_band(r, c) {
            self.data[r * self.width() + c + self.lower - r]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        assert!(
            r < self.rows && c < self.cols && self.in_band(r, c),
            "({r},{c}) outside band"
        );
        let w = self.width();
        self.data[r * w + c + self.lower - r] = v;
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn to_dense(&self) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c))
    }

    pub fn adjoint(&self) -> BandMatrix {
        let mut t = BandMatrix::zeros(self.cols, self.rows, self.upper, self.lower);
        for r in 0..self.rows {
            for c in r.saturating_sub(self.lower)..(r + self.upper + 1).min(self.cols) {
                t.set(c, r, self.get(r, c).conj());
            }
        }
        t
    }

    /// Upper-triangular factor of a QR decomposition by Givens rotations.
    /// Requires `rows >= cols`. The factor is `cols × cols` with upper
    /// bandwidth `lower + upper`.
    pub fn qr_r_factor(&self) -> UpperBand {
        assert!(self.rows >= self.cols, "QR factor needs a tall matrix");
        let n = self.cols;
        let bw = self.lower + self.upper;
        // Working row r covers columns [r - lower, r + bw] (fill-in included).
        let span = self.lower + bw + 1;
        let mut work = vec![Complex64::new(0.0, 0.0); self.rows * span];
        let pos = |r: usize, c: usize| r * span + c + self.lower - r;
        for r in 0..self.rows {
            for c in r.saturating_sub(self.lower)..(r + self.upper + 1).min(n) {
                work[pos(r, c)] = self.get(r, c);
            }
        }
        for j in 0..n {
            let last_col = (j + bw).min(n - 1);
            for i in j + 1..(j + self.lower + 1).min(self.rows) {
                let b = work[pos(i, j)];
                if b == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let a = work[pos(j, j)];
                let (c, s) = givens(a, b);
                for k in j..=last_col {
                    let x = work[pos(j, k)];
                    let y = work[pos(i, k)];
                    work[pos(j, k)] = x * c + s * y;
                    work[pos(i, k)] = y * c - s.conj() * x;
                }
                work[pos(i, j)] = Complex64::new(0.0, 0.0);
            }
        }
        let mut r_factor = UpperBand::zeros(n, bw);
        for r in 0..n {
            for c in r..(r + bw + 1).min(n) {
                r_factor.data[r * (bw + 1) + c - r] = work[pos(r, c)];
            }
        }
        r_factor
    }
}

/// Rotation `[[c, s], [-s̄, c]]` with real `c` sending `(a, b)` to `(·, 0)`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let (na, nb) = (a.norm(), b.norm());
    if na == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let r = na.hypot(nb);
    (na / r, (a / na) * b.conj() / r)
}

/// Square upper-triangular band matrix.
#[derive(Debug, Clone)]
pub struct UpperBand {
    n: usize,
    bw: usize,
    data: Vec<Complex64>,
}

impl UpperBand {
    fn zeros(n: usize, bw: usize) -> Self {
        UpperBand {
            n,
            bw,
            data: vec![Complex64::new(0.0, 0.0); n * (bw + 1)],
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        if c >= r && c <= r + self.bw && c < self.n {
            self.data[r * (self.bw + 1) + c - r]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }
}

/// Working storage for bulge chasing: one subdiagonal and `b + 1`
/// superdiagonals.
struct ChaseBand {
    hi: usize,
    data: Vec<Complex64>,
}

impl ChaseBand {
    fn from_upper(r: &UpperBand) -> Self {
        let hi = r.bw + 1;
        let mut w = ChaseBand {
            hi,
            data: vec![Complex64::new(0.0, 0.0); r.n * (hi + 2)],
        };
        for i in 0..r.n {
            for j in i..(i + r.bw + 1).min(r.n) {
                *w.at(i, j) = r.get(i, j);
            }
        }
        w
    }

    fn at(&mut self, r: usize, c: usize) -> &mut Complex64 {
        debug_assert!(c + 1 >= r && c <= r + self.hi);
        &mut self.data[r * (self.hi + 2) + c + 1 - r]
    }

    /// Columns `p = q − 1` and `q` mixed so that entry `(row, q)` vanishes;
    /// rows `rows` are updated.
    fn rotate_columns(&mut self, row: usize, q: usize, rows: std::ops::RangeInclusive<usize>) {
        let p = q - 1;
        let (a, b) = (*self.at(row, p), *self.at(row, q));
        if b == Complex64::new(0.0, 0.0) {
            return;
        }
        let (c, s) = givens(a, b);
        for r in rows {
            let (x, y) = (*self.at(r, p), *self.at(r, q));
            *self.at(r, p) = x * c + y * s;
            *self.at(r, q) = y * c - x * s.conj();
        }
        *self.at(row, q) = Complex64::new(0.0, 0.0);
    }

    /// Rows `p = q − 1` and `q` mixed so that entry `(q, col)` vanishes;
    /// columns `cols` are updated.
    fn rotate_rows(&mut self, q: usize, col: usize, cols: std::ops::RangeInclusive<usize>) -> bool {
        let p = q - 1;
        let (a, b) = (*self.at(p, col), *self.at(q, col));
        if b == Complex64::new(0.0, 0.0) {
            return false;
        }
        let (c, s) = givens(a, b);
        for k in cols {
            let (x, y) = (*self.at(p, k), *self.at(q, k));
            *self.at(p, k) = x * c + s * y;
            *self.at(q, k) = y * c - s.conj() * x;
        }
        *self.at(q, col) = Complex64::new(0.0, 0.0);
        true
    }
}

/// Reduces an upper band matrix to bidiagonal form by unitary rotations
/// and returns the moduli of the diagonal and superdiagonal, which have the
/// same singular values.
pub fn bidiagonalize(r: &UpperBand) -> (Vec<f64>, Vec<f64>) {
    let n = r.n;
    let mut w = ChaseBand::from_upper(r);
    for d in (2..=r.bw).rev() {
        for i in 0..n.saturating_sub(d) {
            // Zero (i, i + d), then chase the bulge down the band.
            let (mut row, mut col) = (i, i + d);
            loop {
                w.rotate_columns(row, col, row..=col.min(n - 1));
                let bulge = w.rotate_rows(col, col - 1, col - 1..=(col + d).min(n - 1));
                if !bulge || col + d > n - 1 {
                    break;
                }
                // The row rotation left a fill-in at (col − 1, col + d).
                row = col - 1;
                col += d;
            }
        }
    }
    let d = (0..n).map(|i| w.at(i, i).norm()).collect();
    let e = (0..n.saturating_sub(1)).map(|i| w.at(i, i + 1).norm()).collect();
    (d, e)
}

/// Number of singular values of the bidiagonal `(d, e)` strictly below `t`,
/// from the inertia of the Golub–Kahan tridiagonal (eigenvalues `±σ`).
pub fn bidiagonal_count_below(d: &[f64], e: &[f64], t: f64) -> usize {
    let n = d.len();
    if n == 0 || t <= 0.0 {
        return 0;
    }
    let off = |k: usize| if k.is_multiple_of(2) { d[k / 2] } else { e[k / 2] };
    let scale = d.iter().chain(e).fold(0.0f64, |m, x| m.max(*x)).max(f64::MIN_POSITIVE);
    let pivmin = f64::MIN_POSITIVE.sqrt() * scale;
    let mut negatives = 0;
    let mut q = -t;
    if q < 0.0 {
        negatives += 1;
    }
    for k in 1..2 * n {
        let b = off(k - 1);
        if q.abs() < pivmin {
            q = -pivmin;
        }
        q = -t - b * b / q;
        if q < 0.0 {
            negatives += 1;
        }
    }
    negatives - n
}

/// The `k`-th smallest singular value (0-based) of the bidiagonal `(d, e)`
/// by bisection.
pub fn bidiagonal_singular_value(d: &[f64], e: &[f64], k: usize) -> f64 {
    let mut hi = d
        .iter()
        .chain(e)
        .map(|x| 2.0 * x)
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut lo = 0.0;
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
        if bidiagonal_count_below(d, e, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Bidiagonal form of a tall band matrix.
fn band_bidiagonal(a: &BandMatrix) -> (Vec<f64>, Vec<f64>) {
    bidiagonalize(&a.qr_r_factor())
}

/// The `k` smallest singular values of a tall band matrix (ascending), plus
/// the largest.
///
/// Reduces to the banded triangular QR factor, then to bidiagonal form by
/// bulge chasing, and bisects the Golub–Kahan tridiagonal. Values are
/// accurate to about `ε·σ_max`.
pub fn band_extreme_singular_values(a: &BandMatrix, k: usize) -> (Vec<f64>, f64) {
    let (d, e) = band_bidiagonal(a);
    let n = d.len();
    if n == 0 {
        return (vec![], 0.0);
    }
    let vals = (0..k.min(n)).map(|i| bidiagonal_singular_value(&d, &e, i)).collect();
    (vals, bidiagonal_singular_value(&d, &e, n - 1))
}

/// Number of singular values of a tall band matrix below `rel_tol · σ_max`,
/// together with the smallest singular values (one more than the count, when
/// available) and `σ_max`.
pub fn band_small_singular_count(a: &BandMatrix, rel_tol: f64) -> (usize, Vec<f64>, f64) {
    let (d, e) = band_bidiagonal(a);
    let n = d.len();
    if n == 0 {
        return (0, vec![], 0.0);
    }
    let sigma_max = bidiagonal_singular_value(&d, &e, n - 1);
    let count = bidiagonal_count_below(&d, &e, rel_tol * sigma_max);
    let vals = (0..(count + 1).min(n))
        .map(|i| bidiagonal_singular_value(&d, &e, i))
        .collect();
    (count, vals, sigma_max)
}
