//! Truncated fractional power series over `𝔽_q` and Smith normal form over
//! the discrete valuation rings they model.
//!
//! The elementary divisors produced here are the oracle for every closed
//! d-jump formula in [`crate::jumps`]: the cokernel of
//! `Lie 𝒢 ⊗ O_{K(d)} → Lie 𝒢(d)` is computed by brute force from explicit
//! bases (see [`induced`]).

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;

use crate::arith::Rational;
use crate::fq::{FieldError, Fq};

pub mod induced;
mod series;

pub use induced::{
    build_induced_lie_matrix, induced_closed_exponents, induced_elementary_divisors, InducedLieParams,
    PrecisionPolicy, Twist,
};
pub use series::TruncSeries;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DvrError {
    DenominatorMismatch { left: u64, right: u64 },
    ShapeMismatch,
    NotDivisible,
    NotAUnit,
    /// A candidate pivot is zero to known precision while the matrix is not
    /// yet reduced; retry with more precision.
    PrecisionExhausted { step: usize },
    /// A block of exact zeros remains: the cokernel has a free part.
    NotInjective { rank: usize },
    /// The declared base grain does not divide the pivot exponents.
    GrainMismatch { exponent: u64, grain: u64 },
    InvalidGrain,
    Unsupported(String),
    Field(FieldError),
}

impl fmt::Display for DvrError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DvrError::DenominatorMismatch { left, right } => {
                write!(f, "series denominators differ ({left} vs {right})")
            }
            DvrError::ShapeMismatch => write!(f, "matrix shape mismatch"),
            DvrError::NotDivisible => write!(f, "series is not divisible by the requested power"),
            DvrError::NotAUnit => write!(f, "series is not a unit"),
            DvrError::PrecisionExhausted { step } => {
                write!(f, "precision exhausted at elimination step {step}")
            }
            DvrError::NotInjective { rank } => {
                write!(f, "matrix is not injective (rank {rank}); cokernel has a free part")
            }
            DvrError::GrainMismatch { exponent, grain } => {
                write!(f, "pivot exponent {exponent} is not a multiple of the base grain {grain}")
            }
            DvrError::InvalidGrain => write!(f, "base grain must be a positive multiple of 1/N"),
            DvrError::Unsupported(msg) => write!(f, "unsupported input: {msg}"),
            DvrError::Field(e) => write!(f, "{e}"),
        }
    }
}

impl From<FieldError> for DvrError {
    fn from(e: FieldError) -> Self {
        DvrError::Field(e)
    }
}

/// Matrix over `𝔽_q[[t^{1/N}]]`, row-major. Entry `(i, j)` is coordinate `i`
/// of the image of source basis vector `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DvrMatrix {
    rows: usize,
    cols: usize,
    den: u64,
    working_prec: u64,
    entries: Vec<TruncSeries>,
}

impl DvrMatrix {
    pub fn zeros(rows: usize, cols: usize, den: u64, working_prec: u64) -> Self {
        DvrMatrix {
            rows,
            cols,
            den,
            working_prec,
            entries: (0..rows * cols).map(|_| TruncSeries::zero(den)).collect(),
        }
    }

    pub fn identity(n: usize, den: u64, working_prec: u64) -> Self {
        let mut m = Self::zeros(n, n, den, working_prec);
        for i in 0..n {
            m.set(i, i, TruncSeries::one(den)).unwrap();
        }
        m
    }

    pub fn from_entries(
        rows: usize,
        cols: usize,
        den: u64,
        working_prec: u64,
        entries: Vec<TruncSeries>,
    ) -> Result<Self, DvrError> {
        if entries.len() != rows * cols {
            return Err(DvrError::ShapeMismatch);
        }
        if let Some(bad) = entries.iter().find(|s| s.den() != den) {
            return Err(DvrError::DenominatorMismatch {
                left: den,
                right: bad.den(),
            });
        }
        Ok(DvrMatrix {
            rows,
            cols,
            den,
            working_prec,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn working_precision(&self) -> u64 {
        self.working_prec
    }

    pub fn get(&self, i: usize, j: usize) -> &TruncSeries {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: TruncSeries) -> Result<(), DvrError> {
        if value.den() != self.den {
            return Err(DvrError::DenominatorMismatch {
                left: self.den,
                right: value.den(),
            });
        }
        self.entries[i * self.cols + j] = value;
        Ok(())
    }

    pub fn mul(&self, field: &Fq, other: &DvrMatrix) -> Result<DvrMatrix, DvrError> {
        if self.cols != other.rows {
            return Err(DvrError::ShapeMismatch);
        }
        let wp = self.working_prec.min(other.working_prec);
        let mut out = DvrMatrix::zeros(self.rows, other.cols, self.den, wp);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = TruncSeries::zero(self.den);
                for k in 0..self.cols {
                    acc = acc.add(field, &self.get(i, k).mul(field, other.get(k, j))?)?;
                }
                out.set(i, j, acc)?;
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// One line per entry: `row col v/N c_v,c_{v+1},…` listing coefficients
    /// from the valuation up to the precision (or the last stored term of an
    /// exact entry). Zero entries print `- ` in place of the exponent and
    /// `exact` or `prec=M/N` in place of the coefficients.
    pub fn debug_dump(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let s = self.get(i, j);
                match s.valuation() {
                    None => {
                        let tail = match s.precision() {
                            None => String::from("exact"),
                            Some(p) => alloc::format!("prec={}/{}", p, self.den),
                        };
                        let _ = writeln!(out, "{i} {j} - {tail}");
                    }
                    Some(v) => {
                        let last = s
                            .precision()
                            .map(|p| p - 1)
                            .unwrap_or_else(|| s.terms().last().map(|t| t.0).unwrap_or(v));
                        let coeffs: Vec<String> =
                            (v..=last).map(|n| alloc::format!("{}", s.coeff(n).0)).collect();
                        let _ = writeln!(out, "{i} {j} {v}/{} {}", self.den, coeffs.join(","));
                    }
                }
            }
        }
        out
    }
}

/// Elementary divisors of a DVR matrix, in units of the base uniformizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryDivisors {
    /// Non-decreasing exponents `a_i` with `coker ≅ ⊕ O/(π^{a_i})`.
    pub exponents: Vec<u64>,
    /// Valuation of the base uniformizer.
    pub grain: Rational,
    /// `false` when some pivot tied with the precision bound of an entry whose
    /// valuation was not known.
    pub certified: bool,
}

impl ElementaryDivisors {
    /// Exponents as valuations `a_i · grain`.
    pub fn as_valuations(&self) -> Vec<Rational> {
        self.exponents
            .iter()
            .map(|&a| self.grain * Rational::from_integer(a as i64))
            .collect()
    }

    /// Length of the cokernel.
    pub fn length(&self) -> u64 {
        self.exponents.iter().sum()
    }
}

/// Smith normal form over the DVR whose uniformizer has valuation
/// `base_grain`.
///
/// Repeatedly selects an entry of minimal valuation (lexicographically first
/// `(row, col)` on ties), normalizes its unit part, and clears its row and
/// column. Zero-to-precision entries count with their precision as a lower
/// bound; if such an entry is strictly below every known valuation the
/// elimination stops with [`DvrError::PrecisionExhausted`].
pub fn snf_over_dvr(m: &DvrMatrix, field: &Fq, base_grain: Rational) -> Result<ElementaryDivisors, DvrError> {
    let grain_num = base_grain * Rational::from_integer(m.den as i64);
    if *base_grain.numer() <= 0 || !grain_num.is_integer() {
        return Err(DvrError::InvalidGrain);
    }
    let grain = grain_num.to_integer() as u64;
    let mut a = m.clone();
    let n = a.rows.min(a.cols);
    let mut pivots = Vec::with_capacity(n);
    let mut certified = true;

    for k in 0..n {
        let mut best_known: Option<(u64, usize, usize)> = None;
        let mut best_unknown: Option<u64> = None;
        for i in k..a.rows {
            for j in k..a.cols {
                let s = a.get(i, j);
                match s.valuation() {
                    Some(v) => {
                        if best_known.is_none_or(|(bv, _, _)| v < bv) {
                            best_known = Some((v, i, j));
                        }
                    }
                    None => {
                        if let Some(p) = s.precision() {
                            best_unknown = Some(best_unknown.map_or(p, |b: u64| b.min(p)));
                        }
                    }
                }
            }
        }
        let (v, pi, pj) = match (best_known, best_unknown) {
            (None, None) => return Err(DvrError::NotInjective { rank: k }),
            (None, Some(_)) => return Err(DvrError::PrecisionExhausted { step: k }),
            (Some((v, _, _)), Some(u)) if u < v => {
                return Err(DvrError::PrecisionExhausted { step: k })
            }
            (Some(best), u) => {
                if u == Some(best.0) {
                    certified = false;
                }
                best
            }
        };
        a.swap_rows(k, pi);
        a.swap_cols(k, pj);

        // Normalize the pivot to exactly t^v.
        let unit = a.get(k, k).shift_down(v)?;
        let inv = unit.unit_inverse(field, a.working_prec)?;
        for j in k + 1..a.cols {
            let scaled = a.get(k, j).mul(field, &inv)?;
            a.set(k, j, scaled)?;
        }
        a.set(k, k, TruncSeries::monomial(a.den, crate::fq::FqElem::ONE, v))?;

        // Clear column k below the pivot with row operations.
        for i in k + 1..a.rows {
            let entry = a.get(i, k);
            if entry.is_exact_zero() {
                continue;
            }
            let factor = entry.shift_down(v)?;
            for j in k + 1..a.cols {
                let upd = a.get(i, j).sub(field, &factor.mul(field, a.get(k, j))?)?;
                a.set(i, j, upd)?;
            }
            a.set(i, k, TruncSeries::zero(a.den))?;
        }
        // Column k is now the pivot alone, so the column operations clearing
        // row k touch nothing else.
        for j in k + 1..a.cols {
            a.set(k, j, TruncSeries::zero(a.den))?;
        }
        if v % grain != 0 {
            return Err(DvrError::GrainMismatch { exponent: v, grain });
        }
        pivots.push(v / grain);
    }
    pivots.sort_unstable();
    Ok(ElementaryDivisors {
        exponents: pivots,
        grain: base_grain,
        certified,
    })
}
