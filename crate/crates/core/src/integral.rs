//! Sublevel-set integrals `∫_{Φ<-t} |z^{f0}|² e^{-2φ₀} (-ψ)^k` for `k = 0, 1`.
//!
//! Everything is computed in log coordinates `u_j = -log|z_j|` on the unit
//! polydisc, where `{sΦ_a < -t}` is the shifted orthant `u_j > t/(s a_j)`
//! and the measure contributes `e^{-2 Σ u_j}`. The angular factor `(2π)^n`
//! is dropped throughout; it cancels in every ratio.

use std::thread;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrability::jumping_number;
use crate::integrability::{JumpingQuery, Numerator};
use crate::lattice::lp::{lp_solve, LinearProgram, LpOutcome};
use crate::lattice::{Exponent, Rational};
use crate::toric::{relative_type, DiagonalZhouWeight, ReferencePair, ToricWeight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    MonteCarlo,
}

/// `ratio(t) = sigma + coeff/t` exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactRatio {
    pub sigma: Rational,
    pub coeff: Rational,
}

impl ExactRatio {
    pub fn at(&self, t: &Rational) -> Rational {
        &self.sigma + &self.coeff / t
    }
}

/// `mass(t) = coeff·e^{-2·rate·t}` exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactMass {
    pub coeff: Rational,
    pub rate: Rational,
}

impl ExactMass {
    pub fn log_at(&self, t: f64) -> f64 {
        self.coeff.to_f64().ln() - 2.0 * self.rate.to_f64() * t
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SublevelIntegral {
    pub t: f64,
    pub mass: f64,
    pub log_mass: f64,
    pub moment: f64,
    /// `moment / (t·mass)`
    pub ratio: f64,
    pub method: Method,
    /// Standard error of `ratio`; zero for closed forms.
    pub stderr: f64,
    pub stderr_mass_rel: f64,
    pub exact_ratio: Option<ExactRatio>,
    pub exact_mass: Option<ExactMass>,
}

fn single_piece(w: &ToricWeight, what: &str) -> Result<Exponent> {
    if w.pieces().len() != 1 {
        return Err(Error::Precondition(format!(
            "{what} has {} pieces; the closed form needs a single piece, use the Monte Carlo path",
            w.pieces().len()
        )));
    }
    Ok(w.scaled_pieces().remove(0))
}

fn check_dims(f0: &Exponent, phi0: &ToricWeight, phi: &DiagonalZhouWeight, psi: &ToricWeight) -> Result<()> {
    let n = phi.dim();
    f0.check_dim(n, "integral numerator")?;
    if phi0.dim() != n || psi.dim() != n {
        return Err(Error::dim_mismatch("integral inputs", phi0.dim().max(psi.dim()), n));
    }
    Ok(())
}

/// Exact sublevel integrals for single-piece `φ₀` and `ψ`.
pub fn sublevel_closed_form(
    f0: &Exponent,
    phi0: &ToricWeight,
    phi: &DiagonalZhouWeight,
    psi: &ToricWeight,
    t: &Rational,
) -> Result<SublevelIntegral> {
    check_dims(f0, phi0, phi, psi)?;
    if !t.is_positive() {
        return Err(Error::validation("sublevel integrals need t > 0"));
    }
    let b0 = single_piece(phi0, "twist")?;
    let bpsi = single_piece(psi, "psi")?;
    let n = phi.dim();
    let two = Rational::from_integer(2);
    let mut rates = Vec::with_capacity(n);
    for j in 0..n {
        let c = &f0[j] + Rational::one() - &b0[j];
        if !c.is_positive() {
            return Err(Error::Domain(format!(
                "reference density is not integrable along axis {}",
                j + 1
            )));
        }
        rates.push(c);
    }
    // u_j > t·shift_j with shift_j = 1/(s a_j)
    let shifts: Vec<Rational> = phi.a().iter().map(|a| (phi.scale() * a).recip()).collect();
    let coeff_mass: Rational = rates.iter().map(|c| (&two * c).recip()).product();
    let rate: Rational = rates.iter().zip(&shifts).map(|(c, s)| c * s).sum();
    let sigma: Rational = bpsi.iter().zip(&shifts).map(|(b, s)| b * s).sum();
    let coeff_ratio: Rational = bpsi.iter().zip(&rates).map(|(b, c)| b / (&two * c)).sum();
    let exact_ratio = ExactRatio {
        sigma,
        coeff: coeff_ratio,
    };
    let exact_mass = ExactMass {
        coeff: coeff_mass,
        rate,
    };
    let tf = t.to_f64();
    let log_mass = exact_mass.log_at(tf);
    let mass = log_mass.exp();
    let ratio = exact_ratio.at(t).to_f64();
    Ok(SublevelIntegral {
        t: tf,
        mass,
        log_mass,
        moment: ratio * tf * mass,
        ratio,
        method: Method::ClosedForm,
        stderr: 0.0,
        stderr_mass_rel: 0.0,
        exact_ratio: Some(exact_ratio),
        exact_mass: Some(exact_mass),
    })
}

/// Sampling configuration; results depend only on `(seed, samples)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    /// Worker threads; `None` reads `PLURIVAL_THREADS`, then the machine.
    pub workers: Option<usize>,
}

pub const MIN_SAMPLES: u64 = 10_000;
pub const MIN_ESS: f64 = 100.0;
/// Samples are split into this many independent streams regardless of
/// the number of workers, which keeps output independent of scheduling.
const BLOCKS: u64 = 64;

pub fn worker_count(requested: Option<usize>) -> usize {
    let from_env = std::env::var("PLURIVAL_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0);
    let machine = thread::available_parallelism().map_or(1, |n| n.get());
    let cap = from_env.unwrap_or(machine);
    requested.unwrap_or(cap).clamp(1, cap.max(1))
}

/// Compensated (Neumaier) summation.
#[derive(Clone, Copy, Default, Debug)]
struct Sum {
    s: f64,
    c: f64,
}

impl Sum {
    fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    fn value(&self) -> f64 {
        self.s + self.c
    }
}

#[derive(Clone, Copy, Default, Debug)]
struct Moments {
    w: Sum,
    w2: Sum,
    m: Sum,
    m2: Sum,
    wm: Sum,
}

impl Moments {
    fn merge(&mut self, o: &Moments) {
        self.w.add(o.w.value());
        self.w2.add(o.w2.value());
        self.m.add(o.m.value());
        self.m2.add(o.m2.value());
        self.wm.add(o.wm.value());
    }
}

struct Sampler {
    n: usize,
    shift: Vec<f64>,
    rate: Vec<f64>,
    linear: Vec<f64>,
    twist: Vec<Vec<f64>>,
    psi: Vec<Vec<f64>>,
    /// `log` of the importance weight's upper bound.
    log_bound: f64,
}

fn min_dot(pieces: &[Vec<f64>], u: &[f64]) -> f64 {
    pieces
        .iter()
        .map(|p| p.iter().zip(u).map(|(a, b)| a * b).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

impl Sampler {
    /// `(w', w'·h_ψ)` for one proposal draw; `w'` is the weight divided by
    /// its upper bound, so it lies in `(0, 1]`.
    fn draw(&self, rng: &mut ChaCha8Rng, u: &mut [f64]) -> (f64, f64) {
        let mut log_f = 0.0;
        let mut log_q = 0.0;
        for j in 0..self.n {
            let uniform: f64 = 1.0 - rng.gen::<f64>();
            let x = -uniform.ln() / (2.0 * self.rate[j]);
            u[j] = self.shift[j] + x;
            log_f -= 2.0 * self.linear[j] * u[j];
            log_q += (2.0 * self.rate[j]).ln() - 2.0 * self.rate[j] * x;
        }
        if !self.twist.is_empty() {
            log_f += 2.0 * min_dot(&self.twist, u);
        }
        let w = (log_f - log_q - self.log_bound).exp();
        let h = if self.psi.is_empty() { 0.0 } else { min_dot(&self.psi, u) };
        (w, w * h)
    }
}

/// Per-axis rates `λ = γ+1 - c₀Σμ_iβ_i` maximizing `min_j λ_j` over convex
/// combinations of twist pieces. Since `h₀ <= c₀<Σμβ, u>`, the importance
/// weight is bounded whenever every `λ_j > 0`.
fn proposal_rates(f0: &Exponent, phi0: &ToricWeight) -> Result<Vec<Rational>> {
    let n = f0.dim();
    let base: Vec<Rational> = f0.iter().map(|g| g + Rational::one()).collect();
    if phi0.is_zero() {
        return Ok(base);
    }
    let pieces = phi0.scaled_pieces();
    let k = pieces.len();
    // variables: μ_1..μ_k, τ; maximize τ s.t. base_j - Σ μ_i β_ij - τ >= 0
    let mut obj = vec![Rational::zero(); k + 1];
    obj[k] = Rational::one();
    let mut lp = LinearProgram::maximize(obj);
    let mut sum_row = vec![Rational::one(); k + 1];
    sum_row[k] = Rational::zero();
    lp.push_eq(sum_row, Rational::one());
    for j in 0..n {
        let mut row: Vec<Rational> = pieces.iter().map(|p| -&p[j]).collect();
        row.push(-Rational::one());
        lp.push_geq(row, -&base[j]);
    }
    let best = match lp_solve(&lp)? {
        LpOutcome::Optimal(o) => o,
        // τ >= 0 is a variable bound, so a nonpositive optimum is infeasible here
        _ => {
            return Err(Error::Domain(
                "reference density is not integrable; no bounded proposal exists".into(),
            ))
        }
    };
    if !best.value.is_positive() {
        return Err(Error::Domain(
            "reference density is not integrable; no bounded proposal exists".into(),
        ));
    }
    Ok((0..n)
        .map(|j| {
            let used: Rational = pieces
                .iter()
                .zip(&best.point)
                .map(|(p, m)| &p[j] * m)
                .sum();
            &base[j] - used
        })
        .collect())
}

/// Importance-sampled sublevel integrals for general toric `φ₀` and `ψ`.
pub fn sublevel_monte_carlo(
    f0: &Exponent,
    phi0: &ToricWeight,
    phi: &DiagonalZhouWeight,
    psi: &ToricWeight,
    t: &Rational,
    cfg: &McConfig,
) -> Result<SublevelIntegral> {
    check_dims(f0, phi0, phi, psi)?;
    if !t.is_positive() {
        return Err(Error::validation("sublevel integrals need t > 0"));
    }
    if cfg.samples < MIN_SAMPLES {
        return Err(Error::validation(format!(
            "Monte Carlo needs at least {MIN_SAMPLES} samples, got {}",
            cfg.samples
        )));
    }
    let n = phi.dim();
    let rates = proposal_rates(f0, phi0)?;
    let tf = t.to_f64();
    let shift: Vec<f64> = phi
        .a()
        .iter()
        .map(|a| tf / (phi.scale() * a).to_f64())
        .collect();
    let rate: Vec<f64> = rates.iter().map(Rational::to_f64).collect();
    let to_rows = |w: &ToricWeight| -> Vec<Vec<f64>> {
        if w.is_zero() {
            return Vec::new();
        }
        w.scaled_pieces()
            .iter()
            .map(|p| p.iter().map(Rational::to_f64).collect())
            .collect()
    };
    let log_bound = -2.0 * rate.iter().zip(&shift).map(|(r, s)| r * s).sum::<f64>()
        - rate.iter().map(|r| (2.0 * r).ln()).sum::<f64>();
    let sampler = Sampler {
        n,
        shift,
        rate,
        linear: f0.iter().map(|g| g.to_f64() + 1.0).collect(),
        twist: to_rows(phi0),
        psi: to_rows(psi),
        log_bound,
    };

    let blocks = BLOCKS.min(cfg.samples);
    let workers = worker_count(cfg.workers).min(blocks as usize);
    let per_block = |b: u64| -> u64 {
        let base = cfg.samples / blocks;
        base + u64::from(b < cfg.samples % blocks)
    };
    let mut results = vec![Moments::default(); blocks as usize];
    thread::scope(|scope| {
        let chunks: Vec<&mut [Moments]> = {
            let size = (blocks as usize).div_ceil(workers);
            results.chunks_mut(size).collect()
        };
        let size = (blocks as usize).div_ceil(workers);
        for (k, chunk) in chunks.into_iter().enumerate() {
            let sampler = &sampler;
            let per_block = &per_block;
            scope.spawn(move || {
                let mut u = vec![0.0; sampler.n];
                for (i, slot) in chunk.iter_mut().enumerate() {
                    let b = (k * size + i) as u64;
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                    rng.set_stream(b);
                    let mut m = Moments::default();
                    for _ in 0..per_block(b) {
                        let (w, wm) = sampler.draw(&mut rng, &mut u);
                        m.w.add(w);
                        m.w2.add(w * w);
                        m.m.add(wm);
                        m.m2.add(wm * wm);
                        m.wm.add(w * wm);
                    }
                    *slot = m;
                }
            });
        }
    });
    let mut total = Moments::default();
    for r in &results {
        total.merge(r);
    }

    let nf = cfg.samples as f64;
    let sw = total.w.value();
    let sw2 = total.w2.value();
    let ess = if sw2 > 0.0 { sw * sw / sw2 } else { 0.0 };
    if ess < MIN_ESS {
        return Err(Error::Diagnostic(format!(
            "effective sample size {ess:.1} < {MIN_ESS}; retune the proposal (fewer pieces or larger samples)"
        )));
    }
    let mean_w = sw / nf;
    let mean_m = total.m.value() / nf;
    let var_w = (sw2 / nf - mean_w * mean_w).max(0.0);
    let var_m = (total.m2.value() / nf - mean_m * mean_m).max(0.0);
    let cov = total.wm.value() / nf - mean_w * mean_m;
    let r = mean_m / mean_w;
    let var_r = (var_m - 2.0 * r * cov + r * r * var_w).max(0.0) / (nf * mean_w * mean_w);
    let log_mass = log_bound + mean_w.ln();
    let mass = log_mass.exp();
    Ok(SublevelIntegral {
        t: tf,
        mass,
        log_mass,
        moment: mass * r,
        ratio: r / tf,
        method: Method::MonteCarlo,
        stderr: var_r.sqrt() / tf,
        stderr_mass_rel: (var_w / nf).sqrt() / mean_w,
        exact_ratio: None,
        exact_mass: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "backend", rename_all = "snake_case")]
pub enum Backend {
    ClosedForm,
    MonteCarlo(McConfig),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioSeries {
    pub t: Vec<f64>,
    pub mass: Vec<f64>,
    pub moment: Vec<f64>,
    pub ratio: Vec<f64>,
    pub stderr: Vec<f64>,
    /// Fitted `a + b/t`.
    pub limit: f64,
    pub coeff: f64,
    pub limit_stderr: f64,
    pub sigma: Rational,
    pub exact: Option<ExactRatio>,
    /// Running min and max of the ratio over the second half of the grid.
    pub tail_min: f64,
    pub tail_max: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Weighted least squares fit of `y = a + b x`, returning `(a, b, se(a))`.
fn fit_line(x: &[f64], y: &[f64], se: &[f64]) -> (f64, f64, f64) {
    let weights: Vec<f64> = se
        .iter()
        .map(|s| if *s > 0.0 { 1.0 / (s * s) } else { 1.0 })
        .collect();
    let (mut sw, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 0..x.len() {
        let w = weights[i];
        sw += w;
        sx += w * x[i];
        sy += w * y[i];
        sxx += w * x[i] * x[i];
        sxy += w * x[i] * y[i];
    }
    let det = sw * sxx - sx * sx;
    if det.abs() < f64::MIN_POSITIVE || x.len() < 2 {
        return (sy / sw, 0.0, 0.0);
    }
    let a = (sxx * sy - sx * sxy) / det;
    let b = (sw * sxy - sx * sy) / det;
    let var_a = if se.iter().all(|s| *s > 0.0) { sxx / det } else { 0.0 };
    (a, b, var_a.sqrt())
}

/// Ratios `moment/(t·mass)` along a grid, with the extrapolated limit
/// compared to `σ(ψ, Φ)`.
pub fn ratio_convergence(
    psi: &ToricWeight,
    phi: &DiagonalZhouWeight,
    reference: &ReferencePair,
    t_grid: &[Rational],
    backend: &Backend,
) -> Result<RatioSeries> {
    if t_grid.len() < 2 || t_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::validation("t grid must be strictly increasing with at least two nodes"));
    }
    let sigma = relative_type(psi, phi)?;
    let mut points = Vec::with_capacity(t_grid.len());
    for t in t_grid {
        let r = match backend {
            Backend::ClosedForm => {
                sublevel_closed_form(reference.f0(), reference.phi0(), phi, psi, t)?
            }
            Backend::MonteCarlo(cfg) => {
                sublevel_monte_carlo(reference.f0(), reference.phi0(), phi, psi, t, cfg)?
            }
        };
        points.push(r);
    }
    let t: Vec<f64> = points.iter().map(|p| p.t).collect();
    let mass: Vec<f64> = points.iter().map(|p| p.mass).collect();
    let moment: Vec<f64> = points.iter().map(|p| p.moment).collect();
    let ratio: Vec<f64> = points.iter().map(|p| p.ratio).collect();
    let stderr: Vec<f64> = points.iter().map(|p| p.stderr).collect();
    if ratio.iter().any(|r| !r.is_finite()) {
        return Err(Error::Diagnostic("non-finite ratio on the grid".into()));
    }
    let x: Vec<f64> = t.iter().map(|v| 1.0 / v).collect();
    let (limit, coeff, limit_stderr) = fit_line(&x, &ratio, &stderr);
    let exact = points[0].exact_ratio.clone();
    let half = ratio.len() / 2;
    let tail = &ratio[half..];
    let tail_min = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    let tail_max = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sig = sigma.to_f64();
    let tolerance = match backend {
        Backend::ClosedForm => 1e-9,
        Backend::MonteCarlo(_) => 3.0 * limit_stderr,
    };
    let band = coeff.abs() / t.last().expect("nonempty") + tolerance;
    let bracket = tail_min - band <= sig && sig <= tail_max + band;
    let exact_ok = exact.as_ref().is_none_or(|e| e.sigma == sigma);
    let passed = (limit - sig).abs() <= tolerance && bracket && exact_ok;
    Ok(RatioSeries {
        t,
        mass,
        moment,
        ratio,
        stderr,
        limit,
        coeff,
        limit_stderr,
        sigma,
        exact,
        tail_min,
        tail_max,
        tolerance,
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MassReport {
    pub t: Vec<f64>,
    pub log_mass: Vec<f64>,
    /// `-log(mass)/(2t)`
    pub neg_log_mass_over_2t: Vec<f64>,
    /// `e^{2t}·mass`
    pub e2t_mass: Vec<f64>,
    /// `a` in the fit `a + b/t` through the last two nodes.
    pub limit: f64,
    pub exact: ExactMass,
    /// The weight's scale equals the reference's jumping number against `Φ_a`.
    pub threshold_normalized: bool,
    /// `Some` only in threshold-normalized mode.
    pub e2t_mass_constant: Option<bool>,
    pub lower_bound_ok: Option<bool>,
    pub limit_ok: Option<bool>,
}

impl MassReport {
    pub fn passed(&self) -> bool {
        !self.threshold_normalized
            || (self.e2t_mass_constant == Some(true)
                && self.lower_bound_ok == Some(true)
                && self.limit_ok == Some(true))
    }
}

/// Mass of `{φ < -t}` against the reference density along a grid.
pub fn mass_asymptotics(
    reference: &ReferencePair,
    phi: &DiagonalZhouWeight,
    t_grid: &[Rational],
) -> Result<MassReport> {
    if t_grid.len() < 2 || t_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::validation("t grid must be strictly increasing with at least two nodes"));
    }
    let zero = ToricWeight::zero(phi.dim());
    let mut exact = None;
    let mut t = Vec::new();
    let mut log_mass = Vec::new();
    for node in t_grid {
        let r = sublevel_closed_form(reference.f0(), reference.phi0(), phi, &zero, node)?;
        exact = r.exact_mass.clone();
        t.push(r.t);
        log_mass.push(r.log_mass);
    }
    let exact = exact.expect("grid is nonempty");
    let neg: Vec<f64> = t.iter().zip(&log_mass).map(|(t, l)| -l / (2.0 * t)).collect();
    let e2t: Vec<f64> = t.iter().zip(&log_mass).map(|(t, l)| (2.0 * t + l).exp()).collect();
    let k = t.len();
    let (t1, t2) = (t[k - 2], t[k - 1]);
    let (y1, y2) = (neg[k - 2], neg[k - 1]);
    let b = (y1 - y2) / (1.0 / t1 - 1.0 / t2);
    let limit = y2 - b / t2;

    let unit = DiagonalZhouWeight::new(phi.a().to_vec())?;
    let threshold = jumping_number(&JumpingQuery::new(
        Numerator::Monomial(reference.f0().clone()),
        reference.twist().cloned(),
        unit.as_weight(),
    )?)?;
    let normalized = phi.scale() == &threshold;
    let (constant, lower, limit_ok) = if normalized {
        let constant = exact.rate == Rational::one();
        let floor = exact.coeff.to_f64();
        let lower = e2t.iter().all(|v| *v >= floor * (1.0 - 1e-12));
        (Some(constant), Some(lower), Some((limit - 1.0).abs() <= 1e-6))
    } else {
        (None, None, None)
    };
    Ok(MassReport {
        t,
        log_mass,
        neg_log_mass_over_2t: neg,
        e2t_mass: e2t,
        limit,
        exact,
        threshold_normalized: normalized,
        e2t_mass_constant: constant,
        lower_bound_ok: lower,
        limit_ok,
    })
}

/// `lo, lo·r, lo·r², ...` up to `hi` for integer ratio `r >= 2`.
pub fn geometric_grid(lo: &Rational, hi: &Rational, ratio: i64) -> Vec<Rational> {
    let mut out = Vec::new();
    let mut t = lo.clone();
    let r = Rational::from_integer(ratio.max(2));
    while &t <= hi {
        out.push(t.clone());
        t *= &r;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::q;
    use crate::toric::zhou_weight_for;

    fn phi22() -> DiagonalZhouWeight {
        DiagonalZhouWeight::from_ints(&[2, 2]).unwrap()
    }

    #[test]
    fn closed_form_ratio() {
        let z = Exponent::zero(2);
        let r = sublevel_closed_form(
            &z,
            &ToricWeight::zero(2),
            &phi22(),
            &ToricWeight::coordinate(2, 0),
            &q(10, 1),
        )
        .unwrap();
        let e = r.exact_ratio.clone().unwrap();
        assert_eq!(e.sigma, q(1, 2));
        assert_eq!(e.at(&q(10, 1)), q(11, 20));
        assert!((r.ratio - 0.55).abs() < 1e-15);
        let zero = sublevel_closed_form(&z, &ToricWeight::zero(2), &phi22(), &ToricWeight::zero(2), &q(3, 1)).unwrap();
        assert_eq!(zero.moment, 0.0);
        assert_eq!(zero.ratio, 0.0);
        let multi = ToricWeight::max_norm(2);
        assert!(matches!(
            sublevel_closed_form(&z, &ToricWeight::zero(2), &phi22(), &multi, &q(3, 1)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn monte_carlo_matches_closed_form() {
        let z = Exponent::zero(2);
        let psi = ToricWeight::coordinate(2, 0);
        let cfg = McConfig {
            samples: 200_000,
            seed: 7,
            workers: Some(4),
        };
        let mc = sublevel_monte_carlo(&z, &ToricWeight::zero(2), &phi22(), &psi, &q(10, 1), &cfg).unwrap();
        assert!((mc.ratio - 0.55).abs() <= 3.0 * mc.stderr, "{} ± {}", mc.ratio, mc.stderr);
        let again = sublevel_monte_carlo(
            &z,
            &ToricWeight::zero(2),
            &phi22(),
            &psi,
            &q(10, 1),
            &McConfig { workers: Some(1), ..cfg },
        )
        .unwrap();
        assert_eq!(mc.ratio.to_bits(), again.ratio.to_bits());
        assert!(sublevel_monte_carlo(&z, &ToricWeight::zero(2), &phi22(), &psi, &q(1, 1), &McConfig { samples: 10, ..cfg }).is_err());
    }

    #[test]
    fn convergence_series() {
        let grid = geometric_grid(&q(1, 1), &q(32, 1), 2);
        let r = ReferencePair::trivial(2);
        let s = ratio_convergence(&ToricWeight::coordinate(2, 0), &phi22(), &r, &grid, &Backend::ClosedForm).unwrap();
        assert!(s.passed && (s.limit - 0.5).abs() < 1e-12);
        let s = ratio_convergence(&ToricWeight::from_ints(&[&[1, 1]], q(1, 1)).unwrap(), &phi22(), &r, &grid, &Backend::ClosedForm).unwrap();
        assert!(s.passed && s.sigma == q(1, 1));
        let s = ratio_convergence(&phi22().as_weight(), &phi22(), &r, &grid, &Backend::ClosedForm);
        assert!(s.is_err(), "multi-piece psi needs Monte Carlo");
    }

    #[test]
    fn mass_examples() {
        let grid = geometric_grid(&q(1, 1), &q(32, 1), 2);
        let rep = mass_asymptotics(&ReferencePair::trivial(2), &phi22(), &grid).unwrap();
        assert_eq!(rep.exact, ExactMass { coeff: q(1, 4), rate: q(1, 1) });
        assert!(rep.passed() && rep.threshold_normalized);
        let r = ReferencePair::new(Exponent::from_ints(&[1, 0]).unwrap(), ToricWeight::zero(2)).unwrap();
        let phi = zhou_weight_for(&r, &[q(2, 1), q(2, 1)]).unwrap();
        assert_eq!(phi.scale(), &q(3, 2));
        let rep = mass_asymptotics(&r, &phi, &grid).unwrap();
        assert!(rep.passed());
        assert!((rep.limit - 1.0).abs() < 1e-9);
        // sub-threshold scaling: e^{2t}·mass decays
        let sub = phi22().with_scale(q(9, 10));
        let rep = mass_asymptotics(&ReferencePair::trivial(2), &sub, &grid).unwrap();
        assert!(!rep.threshold_normalized);
        assert!(rep.e2t_mass.windows(2).all(|w| w[1] < w[0]));
    }
}
