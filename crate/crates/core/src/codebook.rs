//! Beamforming codebooks, selection rules and the RVQ tradeoff-factor law.
//!
//! Perfect beamforming is a virtual codebook: the matched filter `h/‖h‖`
//! computed from whatever channel is being served, so the same selection
//! entry point covers all three schemes.

use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::{ChannelMatrix, RngStream};
use crate::error::{Error, Result};
use crate::quadrature::{self, GradedRule, Grading};

const UNIT_NORM_TOL: f64 = 1e-12;
const IMPORT_NORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CodebookKind {
    Rvq,
    Tas,
    Pbf,
}

impl CodebookKind {
    pub fn tag(&self) -> &'static str {
        match self {
            CodebookKind::Rvq => "RVQ",
            CodebookKind::Tas => "TAS",
            CodebookKind::Pbf => "PBF",
        }
    }
}

impl FromStr for CodebookKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "RVQ" => Ok(CodebookKind::Rvq),
            "TAS" => Ok(CodebookKind::Tas),
            "PBF" => Ok(CodebookKind::Pbf),
            other => Err(Error::Format(format!("unknown codebook tag {other:?}"))),
        }
    }
}

/// Unit-norm beamforming vectors of length `n_t`, stored back to back.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    kind: CodebookKind,
    n_t: usize,
    vectors: Vec<Complex64>,
}

impl Codebook {
    /// Validates and wraps explicit vectors.
    pub fn from_vectors(kind: CodebookKind, n_t: usize, vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        if kind == CodebookKind::Pbf {
            return Err(Error::domain("the PBF codebook is virtual and has no stored vectors"));
        }
        if n_t == 0 || vectors.is_empty() {
            return Err(Error::domain("a codebook needs n_t >= 1 and at least one vector"));
        }
        let mut flat = Vec::with_capacity(vectors.len() * n_t);
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != n_t {
                return Err(Error::domain(format!(
                    "vector {i} has length {}, expected {n_t}",
                    v.len()
                )));
            }
            let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if (norm - 1.0).abs() > UNIT_NORM_TOL {
                return Err(Error::domain(format!("vector {i} has squared norm {norm}")));
            }
            flat.extend_from_slice(v);
        }
        Ok(Self {
            kind,
            n_t,
            vectors: flat,
        })
    }

    /// Standard basis of `C^{n_t}`.
    pub fn tas(n_t: usize) -> Result<Self> {
        if n_t == 0 {
            return Err(Error::domain("n_t must be positive"));
        }
        let mut vectors = vec![Complex64::new(0.0, 0.0); n_t * n_t];
        for i in 0..n_t {
            vectors[i * n_t + i] = Complex64::new(1.0, 0.0);
        }
        Ok(Self {
            kind: CodebookKind::Tas,
            n_t,
            vectors,
        })
    }

    /// The matched-filter beamformer.
    pub fn pbf(n_t: usize) -> Result<Self> {
        if n_t == 0 {
            return Err(Error::domain("n_t must be positive"));
        }
        Ok(Self {
            kind: CodebookKind::Pbf,
            n_t,
            vectors: Vec::new(),
        })
    }

    pub fn kind(&self) -> CodebookKind {
        self.kind
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    /// Number of codewords; the virtual PBF codebook counts as one.
    pub fn cardinality(&self) -> usize {
        match self.kind {
            CodebookKind::Pbf => 1,
            _ => self.vectors.len() / self.n_t,
        }
    }

    /// Stored codeword `i`; `None` for the virtual PBF codebook.
    pub fn vector(&self, i: usize) -> Option<&[Complex64]> {
        if self.kind == CodebookKind::Pbf || i >= self.cardinality() {
            return None;
        }
        Some(&self.vectors[i * self.n_t..(i + 1) * self.n_t])
    }

    pub(crate) fn flat(&self) -> &[Complex64] {
        &self.vectors
    }

    /// Text form: a `TAG n_t N` header, then one vector per line as
    /// space-separated `re,im` pairs.
    pub fn to_text(&self) -> Result<String> {
        if self.kind == CodebookKind::Pbf {
            return Err(Error::domain("the PBF codebook has no stored vectors to export"));
        }
        let mut out = format!("{} {} {}\n", self.kind.tag(), self.n_t, self.cardinality());
        for i in 0..self.cardinality() {
            let line: Vec<String> = self
                .vector(i)
                .expect("index in range")
                .iter()
                .map(|z| format!("{},{}", z.re, z.im))
                .collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        Ok(out)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Format("empty file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Format(format!("bad header {header:?}")));
        }
        let kind: CodebookKind = fields[0].parse()?;
        if kind == CodebookKind::Pbf {
            return Err(Error::Format("PBF codebooks are not stored".into()));
        }
        let n_t: usize = fields[1]
            .parse()
            .map_err(|_| Error::Format(format!("bad n_t {:?}", fields[1])))?;
        let n: usize = fields[2]
            .parse()
            .map_err(|_| Error::Format(format!("bad cardinality {:?}", fields[2])))?;

        let mut vectors = Vec::with_capacity(n);
        for (row, line) in lines.enumerate() {
            let mut v = Vec::with_capacity(n_t);
            for pair in line.split_whitespace() {
                let (re, im) = pair
                    .split_once(',')
                    .ok_or_else(|| Error::Format(format!("line {}: entry {pair:?} is not re,im", row + 2)))?;
                let parse = |s: &str| {
                    s.parse::<f64>()
                        .map_err(|_| Error::Format(format!("line {}: bad number {s:?}", row + 2)))
                };
                v.push(Complex64::new(parse(re)?, parse(im)?));
            }
            let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if (norm - 1.0).abs() > IMPORT_NORM_TOL {
                return Err(Error::Format(format!("line {}: squared norm {norm} is not 1", row + 2)));
            }
            if (norm - 1.0).abs() > UNIT_NORM_TOL {
                let s = norm.sqrt();
                v.iter_mut().for_each(|z| *z /= s);
            }
            vectors.push(v);
        }
        if vectors.len() != n {
            return Err(Error::Format(format!(
                "header announces {n} vectors, found {}",
                vectors.len()
            )));
        }
        Self::from_vectors(kind, n_t, vectors).map_err(|e| Error::Format(e.to_string()))
    }
}

/// `n` independent isotropic unit vectors (normalised `CN(0, I)` draws).
pub fn rvq_generate(rng: &mut RngStream, n: usize, n_t: usize) -> Result<Codebook> {
    if n == 0 || n_t == 0 {
        return Err(Error::domain("RVQ needs n >= 1 and n_t >= 1"));
    }
    let mut vectors = vec![Complex64::new(0.0, 0.0); n * n_t];
    fill_rvq(rng, n_t, &mut vectors);
    Ok(Codebook {
        kind: CodebookKind::Rvq,
        n_t,
        vectors,
    })
}

pub(crate) fn fill_rvq(rng: &mut RngStream, n_t: usize, out: &mut [Complex64]) {
    rng.fill_complex_normal(out);
    for v in out.chunks_mut(n_t) {
        let s = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= s);
    }
}

/// `|⟨h, p⟩|²` with `⟨a, b⟩ = Σ a_i conj(b_i)`.
pub(crate) fn projection_gain(h: &[Complex64], p: &[Complex64]) -> f64 {
    h.iter().zip(p).map(|(a, b)| a * b.conj()).sum::<Complex64>().norm_sqr()
}

/// Index and gain of the codeword in the flat `vectors` buffer that best
/// matches `h`; ties go to the lowest index.
pub(crate) fn best_codeword(h: &[Complex64], vectors: &[Complex64]) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, p) in vectors.chunks(h.len()).enumerate() {
        let g = projection_gain(h, p);
        if g > best.1 {
            best = (i, g);
        }
    }
    best
}

/// Result of a beam and/or user selection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionOutcome {
    pub beam_index: usize,
    pub user_index: usize,
    pub gain: f64,
    /// Captured channel-power fraction `ν` (RVQ only).
    pub tradeoff: Option<f64>,
}

/// Picks the codeword maximising `|⟨h, p⟩|²` for a MISO channel.
pub fn select_beamformer(h: &ChannelMatrix, cb: &Codebook) -> Result<SelectionOutcome> {
    if !h.is_miso() {
        return Err(Error::domain("beam selection needs a MISO channel (n_r = 1)"));
    }
    if h.n_t() != cb.n_t() {
        return Err(Error::domain(format!(
            "channel has {} transmit antennas, codebook has {}",
            h.n_t(),
            cb.n_t()
        )));
    }
    let norm = h.norm_sqr();
    let outcome = match cb.kind() {
        CodebookKind::Pbf => SelectionOutcome {
            beam_index: 0,
            user_index: 0,
            gain: norm,
            tradeoff: None,
        },
        CodebookKind::Tas => {
            let (i, g) = best_codeword(h.entries(), &cb.vectors);
            SelectionOutcome {
                beam_index: i,
                user_index: 0,
                gain: g,
                tradeoff: None,
            }
        }
        CodebookKind::Rvq => {
            let (i, g) = best_codeword(h.entries(), &cb.vectors);
            SelectionOutcome {
                beam_index: i,
                user_index: 0,
                gain: g,
                tradeoff: Some(if norm > 0.0 { (g / norm).min(1.0) } else { 0.0 }),
            }
        }
    };
    Ok(outcome)
}

/// Joint transmit-antenna and user choice maximising `‖h_i^(k)‖²`.
pub fn select_user_antenna(channels: &[ChannelMatrix]) -> Result<SelectionOutcome> {
    let first = channels
        .first()
        .ok_or_else(|| Error::domain("no users to select from"))?;
    let (n_t, n_r) = (first.n_t(), first.n_r());
    let mut best = SelectionOutcome {
        beam_index: 0,
        user_index: 0,
        gain: f64::NEG_INFINITY,
        tradeoff: None,
    };
    for (k, h) in channels.iter().enumerate() {
        if h.n_t() != n_t || h.n_r() != n_r {
            return Err(Error::domain(format!("user {k} has mismatched channel dimensions")));
        }
        for i in 0..n_t {
            let g = h.row_norm_sqr(i);
            if g > best.gain {
                best = SelectionOutcome {
                    beam_index: i,
                    user_index: k,
                    gain: g,
                    tradeoff: None,
                };
            }
        }
    }
    Ok(best)
}

/// User with the strongest MISO channel `‖h^(k)‖²`.
pub fn select_user_maxnorm(channels: &[ChannelMatrix]) -> Result<SelectionOutcome> {
    if channels.is_empty() {
        return Err(Error::domain("no users to select from"));
    }
    let mut best = SelectionOutcome {
        beam_index: 0,
        user_index: 0,
        gain: f64::NEG_INFINITY,
        tradeoff: None,
    };
    for (k, h) in channels.iter().enumerate() {
        if !h.is_miso() {
            return Err(Error::domain(format!("user {k} is not a MISO channel")));
        }
        let g = h.norm_sqr();
        if g > best.gain {
            best.user_index = k;
            best.gain = g;
        }
    }
    Ok(best)
}

/// Density of the tradeoff factor `ν` for an RVQ codebook of `n` vectors.
pub fn nu_pdf(nu: f64, n: usize, n_t: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&nu) {
        return Err(Error::domain(format!("nu must lie in [0, 1], got {nu}")));
    }
    if n == 0 {
        return Err(Error::domain("codebook size must be at least 1"));
    }
    if n_t < 2 {
        return Err(Error::domain("for n_t = 1 the tradeoff factor is a point mass at 1"));
    }
    Ok(nu_density(nu, n, n_t))
}

fn nu_density(nu: f64, n: usize, n_t: usize) -> f64 {
    let tail = 1.0 - nu;
    let m = (n_t - 1) as i32;
    n as f64 * m as f64 * (1.0 - tail.powi(m)).powi(n as i32 - 1) * tail.powi(m - 1)
}

/// Law of `ν`: a density on `[0, 1]`, or a point mass at 1 when `n_t = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NuDistribution {
    PointMassAtOne,
    Rvq { n: usize, n_t: usize },
}

impl NuDistribution {
    pub fn for_codebook(n: usize, n_t: usize) -> Result<Self> {
        if n == 0 || n_t == 0 {
            return Err(Error::domain("codebook size and n_t must be positive"));
        }
        Ok(if n_t == 1 {
            NuDistribution::PointMassAtOne
        } else {
            NuDistribution::Rvq { n, n_t }
        })
    }

    pub fn cdf(&self, nu: f64) -> f64 {
        match *self {
            NuDistribution::PointMassAtOne => {
                if nu >= 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            NuDistribution::Rvq { n, n_t } => {
                let nu = nu.clamp(0.0, 1.0);
                (1.0 - (1.0 - nu).powi(n_t as i32 - 1)).powi(n as i32)
            }
        }
    }

    /// `E[f(ν)]` by adaptive quadrature.
    pub fn expect<F: FnMut(f64) -> Result<f64>>(&self, abs_tol: f64, mut f: F) -> Result<f64> {
        match *self {
            NuDistribution::PointMassAtOne => f(1.0),
            NuDistribution::Rvq { n, n_t } => {
                quadrature::adaptive(0.0, 1.0, abs_tol, |nu| Ok(f(nu)? * nu_density(nu, n, n_t)))
            }
        }
    }

    /// `E[f(ν)]` by a fixed composite rule graded toward `ν = 1`.
    pub fn expect_fixed<F: FnMut(f64) -> Result<f64>>(&self, nodes: usize, mut f: F) -> Result<f64> {
        match *self {
            NuDistribution::PointMassAtOne => f(1.0),
            NuDistribution::Rvq { n, n_t } => {
                let rule = GradedRule::new(0.0, 1.0, nodes, Grading::TowardEnd)?;
                rule.try_integrate(|nu| Ok(f(nu)? * nu_density(nu, n, n_t)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::draw_channel;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rvq_vectors_are_unit_norm() {
        let mut rng = RngStream::new(1, 0);
        let cb = rvq_generate(&mut rng, 64, 4).unwrap();
        assert_eq!(cb.cardinality(), 64);
        for i in 0..64 {
            let n: f64 = cb.vector(i).unwrap().iter().map(|z| z.norm_sqr()).sum();
            assert!((n - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn single_antenna_rvq_is_unit_modulus() {
        let mut rng = RngStream::new(2, 0);
        let cb = rvq_generate(&mut rng, 5, 1).unwrap();
        for i in 0..5 {
            assert!((cb.vector(i).unwrap()[0].norm() - 1.0).abs() < 1e-12);
        }
        let h = ChannelMatrix::vector(vec![c(0.3, -1.1)]).unwrap();
        let s = select_beamformer(&h, &cb).unwrap();
        assert!((s.tradeoff.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tas_selection_on_single_entry() {
        let h = ChannelMatrix::vector(vec![c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let s = select_beamformer(&h, &Codebook::tas(4).unwrap()).unwrap();
        assert_eq!(s.beam_index, 0);
        assert_eq!(s.gain, 4.0);
    }

    #[test]
    fn matched_codeword_wins_with_unit_tradeoff() {
        let mut rng = RngStream::new(3, 0);
        let h = draw_channel(&mut rng, 4, 1).unwrap();
        let norm = h.norm_sqr().sqrt();
        let matched: Vec<Complex64> = h.entries().iter().map(|z| z / norm).collect();
        let mut vectors: Vec<Vec<Complex64>> = (0..5)
            .map(|_| {
                let v = rvq_generate(&mut rng, 1, 4).unwrap();
                v.vector(0).unwrap().to_vec()
            })
            .collect();
        vectors.insert(3, matched);
        let cb = Codebook::from_vectors(CodebookKind::Rvq, 4, vectors).unwrap();
        let s = select_beamformer(&h, &cb).unwrap();
        assert_eq!(s.beam_index, 3);
        assert!((s.tradeoff.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn selection_equals_exhaustive_scan() {
        let mut rng = RngStream::new(4, 0);
        for _ in 0..200 {
            let h = draw_channel(&mut rng, 4, 1).unwrap();
            let cb = rvq_generate(&mut rng, 8, 4).unwrap();
            let s = select_beamformer(&h, &cb).unwrap();
            let gains: Vec<f64> = (0..8)
                .map(|i| {
                    let p = cb.vector(i).unwrap();
                    let ip: Complex64 = h.entries().iter().zip(p).map(|(a, b)| a * b.conj()).sum();
                    ip.norm_sqr()
                })
                .collect();
            let max = gains.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let first = gains.iter().position(|&g| g == max).unwrap();
            assert_eq!(s.beam_index, first);
            assert_eq!(s.gain, max);
        }
    }

    #[test]
    fn selection_rejects_mismatch() {
        let h = ChannelMatrix::vector(vec![c(1.0, 0.0); 3]).unwrap();
        assert!(select_beamformer(&h, &Codebook::tas(4).unwrap()).is_err());
        let mimo = ChannelMatrix::zeros(4, 2);
        assert!(select_beamformer(&mimo, &Codebook::tas(4).unwrap()).is_err());
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let h = ChannelMatrix::vector(vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)]).unwrap();
        let s = select_beamformer(&h, &Codebook::tas(3).unwrap()).unwrap();
        assert_eq!(s.beam_index, 0);
        let users = vec![h.clone(), h.clone()];
        assert_eq!(select_user_maxnorm(&users).unwrap().user_index, 0);
    }

    #[test]
    fn user_antenna_selection_examples() {
        let mut rng = RngStream::new(6, 0);
        let h = draw_channel(&mut rng, 4, 1).unwrap();
        let tas = select_beamformer(&h, &Codebook::tas(4).unwrap()).unwrap();
        let joint = select_user_antenna(std::slice::from_ref(&h)).unwrap();
        assert_eq!((joint.beam_index, joint.gain), (tas.beam_index, tas.gain));

        let small = |v: f64| vec![c(v, 0.0), c(0.0, v)];
        let mut u0 = Vec::new();
        let mut u1 = Vec::new();
        for i in 0..3 {
            u0.extend(small(0.5 + 0.1 * i as f64));
            u1.extend(if i == 2 {
                vec![c(3.0, 0.0), c(0.0, 0.0)]
            } else {
                small(1.0)
            });
        }
        let users = vec![
            ChannelMatrix::new(3, 2, u0).unwrap(),
            ChannelMatrix::new(3, 2, u1).unwrap(),
        ];
        let s = select_user_antenna(&users).unwrap();
        assert_eq!((s.beam_index, s.user_index, s.gain), (2, 1, 9.0));
        assert!(select_user_antenna(&[]).is_err());
    }

    #[test]
    fn user_antenna_equals_exhaustive_scan() {
        let mut rng = RngStream::new(8, 0);
        for _ in 0..100 {
            let users: Vec<_> = (0..2).map(|_| draw_channel(&mut rng, 4, 2).unwrap()).collect();
            let s = select_user_antenna(&users).unwrap();
            let mut best = (0, 0, f64::NEG_INFINITY);
            for (k, user) in users.iter().enumerate() {
                for i in 0..4 {
                    let g: f64 = (0..2).map(|j| user.get(i, j).norm_sqr()).sum();
                    if g > best.2 {
                        best = (i, k, g);
                    }
                }
            }
            assert_eq!((s.beam_index, s.user_index, s.gain), best);
        }
    }

    #[test]
    fn maxnorm_examples() {
        let one = vec![ChannelMatrix::vector(vec![c(0.1, 0.2)]).unwrap()];
        assert_eq!(select_user_maxnorm(&one).unwrap().user_index, 0);
        let two = vec![
            ChannelMatrix::vector(vec![c(1.0, 0.0)]).unwrap(),
            ChannelMatrix::vector(vec![c(2.5f64.sqrt(), 0.0)]).unwrap(),
        ];
        let s = select_user_maxnorm(&two).unwrap();
        assert_eq!(s.user_index, 1);
        assert!((s.gain - 2.5).abs() < 1e-12);
        let mut rng = RngStream::new(9, 0);
        let four: Vec<_> = (0..4).map(|_| draw_channel(&mut rng, 3, 1).unwrap()).collect();
        let norms: Vec<f64> = four.iter().map(|h| h.norm_sqr()).collect();
        let want = (0..4).fold(0, |b, k| if norms[k] > norms[b] { k } else { b });
        assert_eq!(select_user_maxnorm(&four).unwrap().user_index, want);
        assert!(select_user_maxnorm(&[]).is_err());
    }

    #[test]
    fn nu_pdf_examples() {
        for nu in [0.0, 0.3, 0.99, 1.0] {
            assert_eq!(nu_pdf(nu, 1, 2).unwrap(), 1.0);
        }
        let mass = quadrature::adaptive(0.0, 1.0, 1e-13, |nu| nu_pdf(nu, 8, 4)).unwrap();
        assert!((mass - 1.0).abs() < 1e-10);
        assert!(nu_pdf(1.1, 8, 4).is_err());
        assert!(nu_pdf(0.5, 8, 1).is_err());
    }

    #[test]
    fn nu_distribution_expectations_agree() {
        let d = NuDistribution::for_codebook(256, 4).unwrap();
        let a = d.expect(1e-13, |nu| Ok(nu * nu)).unwrap();
        let b = d.expect_fixed(128, |nu| Ok(nu * nu)).unwrap();
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        let p = NuDistribution::for_codebook(8, 1).unwrap();
        assert_eq!(p, NuDistribution::PointMassAtOne);
        assert_eq!(p.expect(1e-12, |nu| Ok(3.0 * nu)).unwrap(), 3.0);
        assert_eq!(d.cdf(1.0), 1.0);
        assert_eq!(d.cdf(0.0), 0.0);
    }

    #[test]
    fn text_round_trip_and_errors() {
        let mut rng = RngStream::new(10, 0);
        let cb = rvq_generate(&mut rng, 3, 2).unwrap();
        let text = cb.to_text().unwrap();
        assert!(text.starts_with("RVQ 2 3\n"));
        assert_eq!(Codebook::from_text(&text).unwrap(), cb);

        let tas = Codebook::tas(3).unwrap();
        assert_eq!(Codebook::from_text(&tas.to_text().unwrap()).unwrap(), tas);

        assert!(Codebook::from_text("").is_err());
        assert!(Codebook::from_text("XYZ 2 1\n1,0 0,0\n").is_err());
        assert!(Codebook::from_text("RVQ 2 2\n1,0 0,0\n").is_err());
        assert!(Codebook::from_text("RVQ 2 1\n1,0 1,0\n").is_err());
        assert!(Codebook::from_text("RVQ 2 1\n1;0 0,0\n").is_err());
        assert!(Codebook::pbf(2).unwrap().to_text().is_err());
    }
}
