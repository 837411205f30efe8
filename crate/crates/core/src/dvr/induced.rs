//! Explicit Lie-algebra map of an induced torus `Res_{L/K} G_m` under the
//! tame base change `K ⊂ K(d)`, with `K = 𝔽_q((t))`, `K(d) = K(t^{1/d})`.
//!
//! `L` is the compositum of the unramified extension of degree `f` with
//! `K(X)`, `X^e = t`. With `g = gcd(e, d)`, `e = g·e'`, `d = g·d'`,
//!
//! ```text
//! L ⊗_K K(d) = ∏_{ζ ∈ μ_g} K(d)(w_ζ)^{⊕f},   w_ζ^{e'} = ζ^a·π_d,   X ↦ ζ^b·w_ζ^{d'}
//! ```
//!
//! where `a·d' + b·e' = 1` and `π_d = t^{1/d}`. The source basis is
//! `ω'_j·π_L^i` with `π_L = X·w(X)` for a unit `w` and `ω'` an `O_K`-twist of
//! the unramified basis; the target basis is `ω_j·w_ζ^l`. Every entry is a
//! polynomial in `π_d`, so the matrix itself is exact; precision only enters
//! through unit inverses during elimination.

use alloc::vec;
use alloc::vec::Vec;

use super::{snf_over_dvr, DvrError, DvrMatrix, ElementaryDivisors, TruncSeries};
use crate::arith::{ext_gcd, gcd, lcm, Rational};
use crate::fq::{FieldError, Fq, FqElem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InducedLieParams {
    pub e: u64,
    pub f: u64,
    pub d: u64,
    pub q: u64,
}

/// Optional change of presentation; the elementary divisors do not depend
/// on it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Twist {
    /// `c_1, c_2, …` in the unit `w(X) = 1 + c_1 X + c_2 X² + …`.
    pub uniformizer_unit: Vec<FqElem>,
    /// `f × f` matrix of polynomials in `t` (coefficient lists) expressing the
    /// twisted unramified basis in the standard one. Must be invertible mod `t`.
    pub unramified_basis: Option<Vec<Vec<Vec<FqElem>>>>,
}

/// Precision policy for the oracle: the initial working precision, in units
/// of `π_d`, is `factor · (largest expected exponent) + offset`; it doubles on
/// [`DvrError::PrecisionExhausted`] at most `max_doublings` times.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub factor: u64,
    pub offset: u64,
    pub max_doublings: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            factor: 2,
            offset: 1,
            max_doublings: 8,
        }
    }
}

impl InducedLieParams {
    /// Largest d-jump the closed formula predicts, `⌊d(e−1)/e⌋`.
    pub fn largest_expected_exponent(&self) -> u64 {
        self.d * (self.e - 1) / self.e
    }

    pub fn grain(&self) -> u64 {
        self.e * self.d
    }

    pub fn base_grain(&self) -> Rational {
        Rational::new(1, self.d as i64)
    }

    fn validate(&self) -> Result<Fq, DvrError> {
        if self.e == 0 || self.f == 0 || self.d == 0 {
            return Err(DvrError::Unsupported("e, f and d must be positive".into()));
        }
        let field = Fq::new(self.q)?;
        let p = field.characteristic();
        if self.e.is_multiple_of(p) {
            return Err(DvrError::Unsupported(alloc::format!(
                "wild ramification: p = {p} divides e = {}",
                self.e
            )));
        }
        if self.d.is_multiple_of(p) {
            return Err(DvrError::Unsupported(alloc::format!(
                "p = {p} divides d = {}",
                self.d
            )));
        }
        let m = lcm(self.e, self.d);
        if !(self.q - 1).is_multiple_of(m) {
            return Err(DvrError::Field(FieldError::NoRootOfUnity {
                order: m,
                q: self.q,
            }));
        }
        Ok(field)
    }
}

fn poly_mul(field: &Fq, a: &[FqElem], b: &[FqElem]) -> Vec<FqElem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![FqElem::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = field.add(out[i + j], field.mul(x, y));
        }
    }
    out
}

fn invertible_mod_t(field: &Fq, basis: &[Vec<Vec<FqElem>>], f: usize) -> bool {
    let mut m: Vec<Vec<FqElem>> = (0..f)
        .map(|i| {
            (0..f)
                .map(|j| basis[i][j].first().copied().unwrap_or(FqElem::ZERO))
                .collect()
        })
        .collect();
    for col in 0..f {
        let Some(piv) = (col..f).find(|&r| !m[r][col].is_zero()) else {
            return false;
        };
        m.swap(col, piv);
        let inv = field.inv(m[col][col]).unwrap();
        for r in col + 1..f {
            let factor = field.mul(m[r][col], inv);
            for c in col..f {
                let sub = field.mul(factor, m[col][c]);
                m[r][c] = field.sub(m[r][c], sub);
            }
        }
    }
    true
}

/// Builds the matrix of `O_L ⊗_{O_K} O_{K(d)} → O_{L ⊗_K K(d)}` over
/// `O_{K(d)}`, stored with grain `N = e·d`. `working_prec` is in units of
/// `π_d = t^{1/d}`.
pub fn build_induced_lie_matrix(
    params: InducedLieParams,
    twist: &Twist,
    working_prec: u64,
) -> Result<(Fq, DvrMatrix), DvrError> {
    let field = params.validate()?;
    let InducedLieParams { e, f, d, .. } = params;
    let (fu, eu) = (f as usize, e as usize);
    let g = gcd(e, d);
    let (e1, d1) = (e / g, d / g);
    let (_, a, b) = ext_gcd(d1 as i64, e1 as i64);
    let zeta = field.primitive_root_of_unity(g)?;
    let den = params.grain();

    let unramified: Vec<Vec<Vec<FqElem>>> = match &twist.unramified_basis {
        Some(basis) => {
            if basis.len() != fu || basis.iter().any(|row| row.len() != fu) {
                return Err(DvrError::ShapeMismatch);
            }
            if !invertible_mod_t(&field, basis, fu) {
                return Err(DvrError::Unsupported(
                    "unramified basis twist is not invertible mod t".into(),
                ));
            }
            basis.clone()
        }
        None => (0..fu)
            .map(|i| {
                (0..fu)
                    .map(|j| if i == j { vec![FqElem::ONE] } else { Vec::new() })
                    .collect()
            })
            .collect(),
    };

    // w(X) and its powers.
    let mut unit = vec![FqElem::ONE];
    unit.extend(twist.uniformizer_unit.iter().copied());
    let mut pi_powers: Vec<Vec<FqElem>> = Vec::with_capacity(eu);
    let mut w_pow = vec![FqElem::ONE];
    for i in 0..eu {
        let mut xi = vec![FqElem::ZERO; i];
        xi.extend(w_pow.iter().copied());
        pi_powers.push(xi);
        w_pow = poly_mul(&field, &w_pow, &unit);
    }

    let n = eu * fu;
    let mut entries: Vec<Vec<(u64, FqElem)>> = vec![Vec::new(); n * n];
    let zeta_pow = |s: u64, k: i64| -> FqElem {
        let exp = (s as i64 * k).rem_euclid(g as i64) as u64;
        field.pow(zeta, exp)
    };
    for (i, pi_pow) in pi_powers.iter().enumerate() {
        for jp in 0..fu {
            let col = i * fu + jp;
            for (j, row_polys) in unramified.iter().enumerate() {
                // A_{j,j'}(X^e) · π_L^i as a polynomial in X.
                let a_poly = &row_polys[jp];
                let mut a_in_x = vec![FqElem::ZERO; a_poly.len().saturating_sub(1) * eu + 1];
                for (k, &c) in a_poly.iter().enumerate() {
                    a_in_x[k * eu] = c;
                }
                if a_poly.is_empty() {
                    continue;
                }
                let poly = poly_mul(&field, &a_in_x, pi_pow);
                for (nx, &c) in poly.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let m = d1 * nx as u64;
                    let (l, k) = (m % e1, m / e1);
                    for s in 0..g {
                        let factor = zeta_pow(s, b * nx as i64 + a * k as i64);
                        let row = ((s * e1 + l) as usize) * fu + j;
                        entries[row * n + col].push((k * e, field.mul(c, factor)));
                    }
                }
            }
        }
    }
    let series: Vec<TruncSeries> = entries
        .into_iter()
        .map(|terms| TruncSeries::from_terms(&field, den, terms, None))
        .collect();
    let matrix = DvrMatrix::from_entries(n, n, den, working_prec * e, series)?;
    Ok((field, matrix))
}

/// Builds the matrix and runs [`snf_over_dvr`] over `O_{K(d)}`, doubling the
/// working precision whenever it is exhausted.
pub fn induced_elementary_divisors(
    params: InducedLieParams,
    twist: &Twist,
    policy: PrecisionPolicy,
) -> Result<ElementaryDivisors, DvrError> {
    let mut prec = policy.factor * params.largest_expected_exponent() + policy.offset;
    let mut attempts = 0;
    loop {
        let (field, m) = build_induced_lie_matrix(params, twist, prec)?;
        match snf_over_dvr(&m, &field, params.base_grain()) {
            Err(DvrError::PrecisionExhausted { .. }) if attempts < policy.max_doublings => {
                attempts += 1;
                prec *= 2;
            }
            other => return other,
        }
    }
}

/// The closed formula for the tame case: `{⌊dν/e⌋ : ν = 0..e−1}`, each `f`
/// times, sorted. For `d ≡ 1 mod e` this is `{ν(d−1)/e}`.
pub fn induced_closed_exponents(e: u64, f: u64, d: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (0..e)
        .flat_map(|nu| core::iter::repeat_n(d * nu / e, f as usize))
        .collect();
    out.sort_unstable();
    out
}
