//! Fixed and adaptive Gauss–Legendre rules on finite intervals.

use gauss_quad::GaussLegendre;

use crate::error::{Error, Result};

/// Number of nodes per panel in the composite rules.
pub const PANEL_NODES: usize = 16;

/// Where a graded composite rule concentrates its panels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grading {
    /// Panels halve in width towards the lower limit.
    TowardStart,
    /// Panels halve in width towards the upper limit.
    TowardEnd,
}

/// Composite Gauss–Legendre rule with geometrically graded panels.
///
/// `total_nodes` are split into panels of [`PANEL_NODES`] nodes; consecutive
/// panels differ in width by a factor of two, so features near the graded
/// end at scales down to `(b - a) / 2^(panels - 1)` are resolved.
#[derive(Debug, Clone)]
pub struct GradedRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GradedRule {
    pub fn new(a: f64, b: f64, total_nodes: usize, grading: Grading) -> Result<Self> {
        if total_nodes < PANEL_NODES {
            return Err(Error::domain(format!(
                "composite rule needs at least {PANEL_NODES} nodes, got {total_nodes}"
            )));
        }
        if !(b > a) || !a.is_finite() || !b.is_finite() {
            return Err(Error::domain(format!("invalid interval [{a}, {b}]")));
        }
        let panels = total_nodes / PANEL_NODES;
        let per_panel = total_nodes / panels;
        let rule = GaussLegendre::new(per_panel).expect("degree >= 2");

        // breakpoints as fractions of the interval, graded toward 0
        let mut cuts = Vec::with_capacity(panels + 1);
        cuts.push(0.0);
        for i in (0..panels).rev() {
            cuts.push(0.5f64.powi(i as i32));
        }

        let mut nodes = Vec::with_capacity(panels * per_panel);
        let mut weights = Vec::with_capacity(panels * per_panel);
        for w in cuts.windows(2) {
            let (lo, hi) = match grading {
                Grading::TowardStart => (a + (b - a) * w[0], a + (b - a) * w[1]),
                Grading::TowardEnd => (b - (b - a) * w[1], b - (b - a) * w[0]),
            };
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            for &(x, wt) in rule.as_node_weight_pairs() {
                nodes.push(mid + half * x);
                weights.push(half * wt);
            }
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.pairs().map(|(x, w)| w * f(x)).sum()
    }

    /// Like [`integrate`](Self::integrate) for fallible integrands.
    pub fn try_integrate<F: FnMut(f64) -> Result<f64>>(&self, mut f: F) -> Result<f64> {
        let mut acc = 0.0;
        for (x, w) in self.pairs() {
            acc += w * f(x)?;
        }
        Ok(acc)
    }
}

const ADAPTIVE_DEGREE: usize = 12;
const ADAPTIVE_MAX_DEPTH: u32 = 40;

/// Adaptive bisection driven by a 12-point Gauss–Legendre rule: a panel is
/// accepted when the two half-panel estimates agree with the whole-panel
/// estimate to within the local share of `abs_tol`. Panels still unresolved
/// at the depth limit are kept, and their error estimates must add up to
/// less than `abs_tol`.
pub fn adaptive<F: FnMut(f64) -> Result<f64>>(a: f64, b: f64, abs_tol: f64, mut f: F) -> Result<f64> {
    if !(b >= a) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(format!("invalid interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(0.0);
    }
    let rule = GaussLegendre::new(ADAPTIVE_DEGREE).expect("degree >= 2");
    let whole = panel(&rule, a, b, &mut f)?;
    let mut leftover = 0.0;
    let v = recurse(&rule, a, b, whole, abs_tol, 0, &mut leftover, &mut f)?;
    if leftover > abs_tol {
        return Err(Error::Accuracy(format!(
            "adaptive quadrature on [{a}, {b}] left an error estimate of {leftover:e}, above {abs_tol:e}"
        )));
    }
    Ok(v)
}

fn panel<F: FnMut(f64) -> Result<f64>>(rule: &GaussLegendre, a: f64, b: f64, f: &mut F) -> Result<f64> {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    let mut acc = 0.0;
    for &(x, w) in rule.as_node_weight_pairs() {
        acc += w * f(mid + half * x)?;
    }
    if !acc.is_finite() {
        return Err(Error::Accuracy(format!("integrand is not finite on [{a}, {b}]")));
    }
    Ok(acc * half)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: FnMut(f64) -> Result<f64>>(
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    leftover: &mut f64,
    f: &mut F,
) -> Result<f64> {
    let mid = 0.5 * (a + b);
    let left = panel(rule, a, mid, f)?;
    let right = panel(rule, mid, b, f)?;
    let refined = left + right;
    let diff = (refined - whole).abs();
    if diff <= tol || diff <= 4.0 * f64::EPSILON * refined.abs() {
        return Ok(refined);
    }
    if depth >= ADAPTIVE_MAX_DEPTH {
        *leftover += diff;
        return Ok(refined);
    }
    Ok(recurse(rule, a, mid, left, 0.5 * tol, depth + 1, leftover, f)?
        + recurse(rule, mid, b, right, 0.5 * tol, depth + 1, leftover, f)?)
}
