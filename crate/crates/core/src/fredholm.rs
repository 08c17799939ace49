//! Fredholm certification and index of band operators on `ℓ²(ℤ)` from the
//! symbols of their limit operators at `±∞`, with finite-section and
//! truncation oracles.
//!
//! Orientation: `index(T) = wind(f₋) − wind(f₊)`, where `f±` are the symbols
//! of the limit operators at `±∞` and windings are counted counterclockwise.
//! Equivalently, the `−∞` symbol is traversed clockwise. The bilateral shift
//! gets index 0; the shift on `n ≥ 0` glued to the identity on `n < 0` gets
//! index −1.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::band::{laurent_symbol, limit_operator, BandOperatorZ, DirectionSpec, LaurentSymbol, LimitConfig};
use crate::error::{Error, Result};
use crate::linalg::{band_extreme_singular_values, band_small_singular_count};

pub const DEFAULT_SAMPLES: usize = 1 << 14;
pub const DEFAULT_THRESHOLD: f64 = 1e-6;
pub const DEFAULT_RANK_TOL: f64 = 1e-8;
pub const ORIENTATION: &str =
    "index = -wind_cw(minus) - wind_ccw(plus) = wind_ccw(minus) - wind_ccw(plus); the minus-infinity symbol is traversed clockwise";

/// Sampled minimum of `|s|` with a certified lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinModulus {
    /// Smallest `|s|` found, after refinement around the best sample.
    pub min: f64,
    /// Where it was found.
    pub theta: f64,
    /// `min_j |s(θ_j)| − L·π/N` with `L = Σ|m·c_m|`; `|s| ≥ lower_bound`
    /// everywhere on the circle.
    pub lower_bound: f64,
    pub samples: usize,
}

/// Minimum modulus of `s` over `N` equispaced samples, refined by a
/// golden-section pass on the two cells around the best sample.
pub fn symbol_min_modulus(s: &LaurentSymbol, n: usize) -> MinModulus {
    let n = n.max(16);
    let (mut best_j, mut best) = (0, f64::INFINITY);
    for j in 0..n {
        let v = s.eval(TAU * j as f64 / n as f64).norm();
        if v < best {
            best = v;
            best_j = j;
        }
    }
    let h = TAU / n as f64;
    let center = h * best_j as f64;
    let f = |t: f64| s.eval(t).norm();
    let (mut a, mut b) = (center - h, center + h);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut x1, mut x2) = (b - g * (b - a), a + g * (b - a));
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    let (refined_t, refined) = if f1 < f2 { (x1, f1) } else { (x2, f2) };
    let (theta, min) = if refined < best {
        (refined_t.rem_euclid(TAU), refined)
    } else {
        (center, best)
    };
    MinModulus {
        min,
        theta,
        lower_bound: best - s.lipschitz_bound() * PI / n as f64,
        samples: n,
    }
}

/// Winding number of `s` about 0 over one counterclockwise circuit, with the
/// default threshold.
pub fn winding_number(s: &LaurentSymbol, n: usize) -> Result<i64> {
    winding_number_with_threshold(s, n, DEFAULT_THRESHOLD)
}

/// Accumulates the argument increments between consecutive samples. Fails
/// when `|s|` comes within `threshold` of zero or any increment reaches `π/2`.
pub fn winding_number_with_threshold(s: &LaurentSymbol, n: usize, threshold: f64) -> Result<i64> {
    let n = n.max(16);
    let m = symbol_min_modulus(s, n);
    if m.min <= threshold {
        return Err(Error::NearZeroSymbol { min_modulus: m.min });
    }
    let vals: Vec<_> = (0..n).map(|j| s.eval(TAU * j as f64 / n as f64)).collect();
    let mut total = 0.0;
    for j in 0..n {
        let jump = (vals[(j + 1) % n] / vals[j]).arg();
        if jump.abs() >= PI / 2.0 {
            return Err(Error::StepTooCoarse { step: j, jump });
        }
        total += jump;
    }
    Ok((total / TAU).round() as i64)
}

/// Index of the Toeplitz operator on `ℓ²(ℕ)` with symbol `s`: `−wind(s)`.
pub fn toeplitz_index(s: &LaurentSymbol) -> Result<i64> {
    Ok(-winding_number(s, sample_count_for(s))?)
}

/// Enough samples for the step check to pass on well-separated symbols.
fn sample_count_for(s: &LaurentSymbol) -> usize {
    DEFAULT_SAMPLES.max((64 * s.degree()).next_power_of_two())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FredholmConfig {
    pub samples: usize,
    /// Cap for adaptive doubling of `samples` on inconclusive symbols.
    pub max_samples: usize,
    pub threshold: f64,
    /// Finite-section half-widths `n` (sections are `(2n+1)`-square).
    pub sizes: Vec<usize>,
    #[serde(skip)]
    pub limit: LimitConfig,
}

impl Default for FredholmConfig {
    fn default() -> Self {
        FredholmConfig {
            samples: DEFAULT_SAMPLES,
            max_samples: 1 << 20,
            threshold: DEFAULT_THRESHOLD,
            sizes: vec![50, 100, 200],
            limit: LimitConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certification {
    /// The certified lower bound exceeds the threshold.
    Certified,
    /// A sample lies at or below the threshold.
    Refuted,
    /// Sampled values clear the threshold but the lower bound does not.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pair<T> {
    pub plus: T,
    pub minus: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionEvidence {
    pub n: usize,
    pub sigma_min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FredholmReport {
    pub fredholm: bool,
    pub certification: Pair<Certification>,
    pub symbols: Pair<LaurentSymbol>,
    pub min_modulus: Pair<MinModulus>,
    pub windings: Pair<Option<i64>>,
    pub index: Option<i64>,
    pub orientation: String,
    pub evidence: Vec<SectionEvidence>,
    pub notes: Vec<String>,
}

fn certify(s: &LaurentSymbol, cfg: &FredholmConfig) -> (Certification, MinModulus) {
    let mut n = cfg.samples.max(16);
    loop {
        let m = symbol_min_modulus(s, n);
        let c = if m.min <= cfg.threshold {
            Certification::Refuted
        } else if m.lower_bound > cfg.threshold {
            Certification::Certified
        } else {
            Certification::Inconclusive
        };
        if c != Certification::Inconclusive || n >= cfg.max_samples {
            return (c, m);
        }
        n *= 2;
    }
}

/// Smallest singular value of the `(2n+1)`-square finite section.
pub fn section_sigma_min(t: &BandOperatorZ, n: usize) -> f64 {
    let n = n as i64;
    let block = t.band_block((-n, n + 1), (-n, n + 1));
    band_extreme_singular_values(&block, 1).0[0]
}

/// Fredholm report from the limit operators at `±∞`.
///
/// `T` is Fredholm iff both limit symbols vanish nowhere; finite sections
/// are reported as evidence only.
pub fn fredholm_report(t: &BandOperatorZ, cfg: &FredholmConfig) -> Result<FredholmReport> {
    let plus = laurent_symbol(&limit_operator(t, &DirectionSpec::PlusInfinity, &cfg.limit)?);
    let minus = laurent_symbol(&limit_operator(t, &DirectionSpec::MinusInfinity, &cfg.limit)?);
    let (cp, mp) = certify(&plus, cfg);
    let (cm, mm) = certify(&minus, cfg);
    let fredholm = cp == Certification::Certified && cm == Certification::Certified;
    let mut notes = Vec::new();
    let wind = |s: &LaurentSymbol, m: &MinModulus, notes: &mut Vec<String>, name: &str| -> Option<i64> {
        if !fredholm {
            return None;
        }
        let mut n = m.samples.max(sample_count_for(s));
        loop {
            match winding_number_with_threshold(s, n, cfg.threshold) {
                Ok(w) => return Some(w),
                Err(Error::StepTooCoarse { .. }) if n < cfg.max_samples => n *= 2,
                Err(e) => {
                    notes.push(format!("{name} winding: {e}"));
                    return None;
                }
            }
        }
    };
    let wp = wind(&plus, &mp, &mut notes, "plus");
    let wm = wind(&minus, &mm, &mut notes, "minus");
    let index = match (wp, wm) {
        (Some(p), Some(m)) => Some(m - p),
        _ => None,
    };
    for (name, c, m) in [("plus", cp, &mp), ("minus", cm, &mm)] {
        match c {
            Certification::Refuted => notes.push(format!(
                "{name} symbol has |s| = {:.3e} at theta = {:.6}",
                m.min, m.theta
            )),
            Certification::Inconclusive => notes.push(format!(
                "{name} symbol: sampled minimum {:.3e} but certified bound only {:.3e}",
                m.min, m.lower_bound
            )),
            Certification::Certified => {}
        }
    }
    let evidence = cfg
        .sizes
        .iter()
        .map(|&n| SectionEvidence {
            n,
            sigma_min: section_sigma_min(t, n),
        })
        .collect();
    Ok(FredholmReport {
        fredholm,
        certification: Pair { plus: cp, minus: cm },
        symbols: Pair { plus, minus },
        min_modulus: Pair { plus: mp, minus: mm },
        windings: Pair { plus: wp, minus: wm },
        index,
        orientation: ORIENTATION.to_string(),
        evidence,
        notes,
    })
}

/// Input to [`truncation_kernel_oracle`].
#[derive(Debug, Clone, Copy)]
pub enum TruncationInput<'a> {
    /// A band operator on `ℓ²(ℤ)`, truncated to columns `[−n, n]`.
    Band(&'a BandOperatorZ),
    /// The Toeplitz operator on `ℓ²(ℕ)` with this symbol, truncated to
    /// columns `[0, n)`.
    Toeplitz(&'a LaurentSymbol),
}

/// Estimated `(dim ker, dim coker)`.
///
/// Restricts the operator (and its adjoint) to the truncated columns,
/// keeping every row those columns reach, and counts singular values below
/// `rank_tol · σ_max`. For `x` supported in the window this gives
/// `‖T P x‖ = ‖T x‖`, so near-zero singular values come from genuine
/// near-kernel vectors and not from truncation edges. Intended for
/// `n ≤ 2000`.
pub fn truncation_kernel_oracle(input: TruncationInput<'_>, n: usize, rank_tol: f64) -> (usize, usize) {
    let count = |t: &BandOperatorZ, cols: (i64, i64), rows: (i64, i64)| {
        band_small_singular_count(&t.band_block(rows, cols), rank_tol).0
    };
    let n = n as i64;
    match input {
        TruncationInput::Band(t) => {
            let w = t.width() as i64;
            let (cols, rows) = ((-n, n + 1), (-n - w, n + w + 1));
            (count(t, cols, rows), count(&t.adjoint(), cols, rows))
        }
        TruncationInput::Toeplitz(s) => {
            let w = s.degree() as i64;
            let (cols, rows) = ((0, n), (0, n + w));
            let t = crate::band::LaurentOperator::new(s.coeffs().iter().map(|(&m, &c)| (m, c))).to_band();
            let ta = t.adjoint();
            (count(&t, cols, rows), count(&ta, cols, rows))
        }
    }
}

/// `theta,re,im` rows for `N` equispaced samples.
pub fn symbol_trace_csv(s: &LaurentSymbol, n: usize) -> String {
    let mut out = String::from("theta,re,im\n");
    for (t, v) in s.samples(n) {
        writeln!(out, "{t},{},{}", v.re, v.im).unwrap();
    }
    out
}

/// `n,sigma_min` rows.
pub fn section_trace_csv(evidence: &[SectionEvidence]) -> String {
    let mut out = String::from("n,sigma_min\n");
    for e in evidence {
        writeln!(out, "{},{}", e.n, e.sigma_min).unwrap();
    }
    out
}
