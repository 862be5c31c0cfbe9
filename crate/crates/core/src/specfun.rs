//! Scalar special functions and combinatorial kernels.
//!
//! Everything here works on integer shape parameters only: the outage
//! expressions never need a non-integer gamma shape, and restricting to
//! integers keeps the incomplete gamma function a finite sum or a rapidly
//! converging series.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Truncation control for infinite Poisson-weighted series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTolerance {
    rel_tol: f64,
    max_terms: usize,
}

impl SeriesTolerance {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0) || !rel_tol.is_finite() {
            return Err(Error::domain(format!("rel_tol must be positive, got {rel_tol}")));
        }
        if max_terms == 0 {
            return Err(Error::domain("max_terms must be at least 1"));
        }
        Ok(Self { rel_tol, max_terms })
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }
}

impl Default for SeriesTolerance {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            max_terms: 10_000,
        }
    }
}

const FACTORIAL_TABLE_LEN: usize = 171;

fn factorial_table() -> &'static [f64; FACTORIAL_TABLE_LEN] {
    static TABLE: OnceLock<[f64; FACTORIAL_TABLE_LEN]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [1.0; FACTORIAL_TABLE_LEN];
        for n in 1..FACTORIAL_TABLE_LEN {
            t[n] = t[n - 1] * n as f64;
        }
        t
    })
}

/// `n!` as a double; infinite beyond 170.
pub fn factorial(n: u64) -> f64 {
    if (n as usize) < FACTORIAL_TABLE_LEN {
        factorial_table()[n as usize]
    } else {
        f64::INFINITY
    }
}

/// `ln(n!)`, exact table below 171 and Stirling's series above.
pub fn ln_factorial(n: u64) -> f64 {
    if (n as usize) < FACTORIAL_TABLE_LEN {
        return factorial_table()[n as usize].ln();
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    x * x.ln() - x
        + 0.5 * (2.0 * std::f64::consts::PI * x).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0))
}

/// Binomial coefficient as a double.
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

/// Exact binomial coefficient; `None` on overflow.
pub fn binomial_exact(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc.checked_mul((n - i) as u128)? / (i + 1) as u128;
    }
    Some(acc)
}

/// Zero-order Bessel function of the first kind.
pub fn bessel_j0(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!("bessel_j0 needs a finite argument, got {x}")));
    }
    let ax = x.abs();
    if ax < 8.0 {
        return Ok(j0_series(ax));
    }
    Ok(j0_miller(ax))
}

fn j0_series(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * k);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Backward recurrence normalised with `J0 + 2 (J2 + J4 + ...) = 1`.
fn j0_miller(x: f64) -> f64 {
    let start = (x + 15.0 * x.cbrt() + 30.0).ceil() as usize;
    let start = start + start % 2;
    let mut above = 0.0; // J_{n+1}
    let mut here = 1e-30; // J_n
    let mut even_sum = 2.0 * here; // start is even
    for n in (1..=start).rev() {
        let below = 2.0 * n as f64 / x * here - above;
        above = here;
        here = below;
        let idx = n - 1;
        if idx > 0 && idx % 2 == 0 {
            even_sum += 2.0 * here;
        }
        if here.abs() > 1e250 {
            here *= 1e-250;
            above *= 1e-250;
            even_sum *= 1e-250;
        }
    }
    here / (here + even_sum)
}

/// Returns `(P, Q)` for integer shape `k >= 1` and `x > 0`.
fn gamma_pair(k: u32, x: f64) -> (f64, f64) {
    let kf = k as f64;
    if x < kf + 1.0 {
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut n = kf;
        loop {
            n += 1.0;
            term *= x / n;
            sum += term;
            if term <= sum * 1e-17 {
                break;
            }
        }
        let p = (-x + kf * x.ln() - ln_factorial(k as u64)).exp() * sum;
        let p = p.min(1.0);
        (p, 1.0 - p)
    } else {
        // x > k - 1, so the terms x^j/j! grow with j up to j = k - 1; sum downward
        // from the largest one.
        let top = (k - 1) as u64;
        let mut term = (-x + top as f64 * x.ln() - ln_factorial(top)).exp();
        let mut q = term;
        let mut j = top;
        while j > 0 {
            term *= j as f64 / x;
            q += term;
            j -= 1;
        }
        let q = q.min(1.0);
        (1.0 - q, q)
    }
}

fn check_gamma_args(k: u32, x: f64) -> Result<()> {
    if k == 0 {
        return Err(Error::domain("incomplete gamma shape must be at least 1"));
    }
    if !(x >= 0.0) {
        return Err(Error::domain(format!(
            "incomplete gamma argument must be >= 0, got {x}"
        )));
    }
    Ok(())
}

/// Regularized lower incomplete gamma `P(k, x) = (1/(k-1)!) ∫₀ˣ t^{k-1} e^{-t} dt`.
pub fn regularized_lower_gamma(k: u32, x: f64) -> Result<f64> {
    check_gamma_args(k, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    Ok(gamma_pair(k, x).0)
}

/// Complement `Q(k, x) = 1 - P(k, x)`, accurate in the far tail.
pub fn regularized_upper_gamma(k: u32, x: f64) -> Result<f64> {
    check_gamma_args(k, x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok(gamma_pair(k, x).1)
}

/// Cached evaluator of the non-central chi-square CDF for a fixed
/// half-degrees-of-freedom `d` and half-argument `beta`.
///
/// Evaluates `Σ_k e^{-δ} δ^k / k! · P(d + k, β)` for many `δ`; the gamma
/// values `P(d + k, β)` only depend on `k` and are computed once.
#[derive(Debug, Clone)]
pub struct NcChi2Kernel {
    d: u32,
    beta: f64,
    tol: SeriesTolerance,
    ladder: Vec<f64>,
}

impl NcChi2Kernel {
    pub fn new(d: u32, beta: f64, tol: SeriesTolerance) -> Result<Self> {
        if d == 0 {
            return Err(Error::domain("half degrees of freedom must be at least 1"));
        }
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(Error::domain(format!(
                "half argument must be finite and >= 0, got {beta}"
            )));
        }
        Ok(Self {
            d,
            beta,
            tol,
            ladder: Vec::new(),
        })
    }

    fn gamma_at(&mut self, k: usize) -> f64 {
        while self.ladder.len() <= k {
            let shape = self.d + self.ladder.len() as u32;
            let v = if self.beta == 0.0 {
                0.0
            } else {
                gamma_pair(shape, self.beta).0
            };
            self.ladder.push(v);
        }
        self.ladder[k]
    }

    /// CDF at half-noncentrality `delta`.
    pub fn cdf(&mut self, delta: f64) -> Result<f64> {
        if !(delta >= 0.0) || !delta.is_finite() {
            return Err(Error::domain(format!(
                "half noncentrality must be finite and >= 0, got {delta}"
            )));
        }
        if self.beta == 0.0 {
            return Ok(0.0);
        }
        if delta == 0.0 {
            return Ok(self.gamma_at(0));
        }

        if delta >= 700.0 {
            return self.cdf_from_mode(delta);
        }

        let mut weight = (-delta).exp();
        let mut sum = 0.0;
        let mut consumed = 0.0;
        let mut k = 0usize;
        loop {
            if k >= self.tol.max_terms {
                return Err(Error::Convergence { partial: sum, terms: k });
            }
            let g = self.gamma_at(k);
            sum += weight * g;
            consumed += weight;

            let next_weight = weight * delta / (k + 1) as f64;
            let ratio = delta / (k + 2) as f64;
            let tail_mass = if ratio < 1.0 {
                next_weight / (1.0 - ratio)
            } else {
                (1.0 - consumed).max(0.0)
            };
            // P(d + k, β) is nonincreasing in k, so the next value bounds the rest.
            let residual = tail_mass * self.gamma_at(k + 1);
            if residual <= self.tol.rel_tol * sum {
                return Ok(sum.clamp(0.0, 1.0));
            }
            weight = next_weight;
            k += 1;
        }
    }

    /// Large `δ`: e^{-δ} underflows, so sum outward from the Poisson mode.
    fn cdf_from_mode(&mut self, delta: f64) -> Result<f64> {
        let mode = delta.floor() as usize;
        let w_mode = ln_poisson_large(mode, delta).exp();
        let mut sum = 0.0;
        let mut terms = 0usize;

        let mut weight = w_mode;
        let mut k = mode;
        loop {
            if terms >= self.tol.max_terms {
                return Err(Error::Convergence { partial: sum, terms });
            }
            sum += weight * self.gamma_at(k);
            terms += 1;
            let next_weight = weight * delta / (k + 1) as f64;
            let ratio = delta / (k + 2) as f64;
            if ratio < 1.0 {
                let residual = next_weight / (1.0 - ratio) * self.gamma_at(k + 1);
                if residual <= self.tol.rel_tol * sum || next_weight == 0.0 {
                    break;
                }
            }
            weight = next_weight;
            k += 1;
        }

        // below the mode the weights shrink by k/δ per step and P(d + k, β)
        // never exceeds P(d, β)
        let g_max = self.gamma_at(0);
        let mut weight = w_mode;
        let mut k = mode;
        while k > 0 {
            if terms >= self.tol.max_terms {
                return Err(Error::Convergence { partial: sum, terms });
            }
            weight *= k as f64 / delta;
            k -= 1;
            let g = self.gamma_at(k);
            sum += weight * g;
            terms += 1;
            let ratio = k as f64 / delta;
            let residual = weight * ratio / (1.0 - ratio) * g_max;
            if residual <= self.tol.rel_tol * sum || residual < f64::MIN_POSITIVE {
                break;
            }
        }
        Ok(sum.clamp(0.0, 1.0))
    }
}

/// `ln(e^{-δ} δ^k / k!)` for large `k`, arranged so the large terms cancel
/// analytically instead of in floating point.
fn ln_poisson_large(k: usize, delta: f64) -> f64 {
    let kf = k as f64;
    let gap = delta - kf;
    let inv = 1.0 / kf;
    let stirling_tail = inv * (1.0 / 12.0 - inv * inv * (1.0 / 360.0 - inv * inv / 1260.0));
    kf * (gap / kf).ln_1p() - gap - 0.5 * (2.0 * std::f64::consts::PI * kf).ln() - stirling_tail
}

/// CDF of the non-central chi-square law with `2d` degrees of freedom and
/// noncentrality `2δ`, evaluated at `2β`.
pub fn noncentral_chi2_cdf(d: u32, delta: f64, beta: f64, tol: SeriesTolerance) -> Result<f64> {
    NcChi2Kernel::new(d, beta, tol)?.cdf(delta)
}

/// Largest polynomial degree `k (n_r - 1)` accepted by [`expansion_coeffs`].
pub const MAX_EXPANSION_DEGREE: u32 = 64;

/// Coefficients `a_m` of `(Σ_{l<n_r} x^l / l!)^k`, lowest order first.
pub fn expansion_coeffs(n_r: u32, k: u32) -> Result<Vec<f64>> {
    if n_r == 0 {
        return Err(Error::domain("n_r must be at least 1"));
    }
    let degree = k as u64 * (n_r as u64 - 1);
    if degree > MAX_EXPANSION_DEGREE as u64 {
        return Err(Error::Capability(format!(
            "expansion degree {degree} exceeds the supported {MAX_EXPANSION_DEGREE}"
        )));
    }
    let base: Vec<f64> = (0..n_r as u64).map(|l| 1.0 / factorial(l)).collect();
    let mut coeffs = vec![1.0];
    for _ in 0..k {
        let mut next = vec![0.0; coeffs.len() + base.len() - 1];
        for (i, a) in coeffs.iter().enumerate() {
            for (j, b) in base.iter().enumerate() {
                next[i + j] += a * b;
            }
        }
        coeffs = next;
    }
    Ok(coeffs)
}

/// Both sides of `C(m+k, n+k) = Σ_{i=0}^{min(k, m-n)} C(k, i) C(m, i+n)`.
pub fn lemma1_identity(m: u64, n: u64, k: u64) -> Result<(u128, u128)> {
    if m == 0 || n == 0 || k == 0 {
        return Err(Error::domain("m, n and k must be positive"));
    }
    if m < n {
        return Err(Error::domain(format!("need m >= n, got m = {m}, n = {n}")));
    }
    let overflow = || Error::Capability(format!("binomials overflow for ({m}, {n}, {k})"));
    let lhs = binomial_exact(m + k, n + k).ok_or_else(overflow)?;
    let mut rhs: u128 = 0;
    for i in 0..=k.min(m - n) {
        let term = binomial_exact(k, i)
            .and_then(|a| binomial_exact(m, i + n).and_then(|b| a.checked_mul(b)))
            .ok_or_else(overflow)?;
        rhs = rhs.checked_add(term).ok_or_else(overflow)?;
    }
    Ok((lhs, rhs))
}
