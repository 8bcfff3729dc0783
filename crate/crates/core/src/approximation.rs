//! Approximation of diagonal Zhou weights on the unit polydisc by
//! normalized logarithms of monomials from multiplier ideals.
//!
//! Competitor families are restricted to monomials `z^α`, each of sup-norm
//! one on the polydisc. Grid points are given by moduli `|z_j| ∈ (0, 1)`.

use std::thread;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::integral::worker_count;
use crate::integrability::multiplier_ideal;
use crate::lattice::{Exponent, MonomialIdeal, Rational};
use crate::toric::{relative_type, DiagonalZhouWeight, ToricWeight};

pub const MONOMIAL_RESTRICTION: &str =
    "competitors restricted to monomials z^α on the unit polydisc";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproximantFamily {
    pub m: u32,
    pub weight: DiagonalZhouWeight,
    /// Minimal generators of `I(mΦ)`.
    pub monomials: MonomialIdeal,
    /// `(1/m)·log max |z^α|` over the generators.
    pub realized: ToricWeight,
}

impl ApproximantFamily {
    /// `σ(φ̂_m, Φ)` through the relative-type LP.
    pub fn sigma(&self) -> Result<Rational> {
        relative_type(&self.realized, &self.weight)
    }

    /// `min Σ α_j/(m a_j)` over the generators, read off directly.
    pub fn sigma_direct(&self) -> Rational {
        let m = Rational::from_integer(i64::from(self.m));
        self.monomials
            .exponents()
            .iter()
            .map(|alpha| {
                alpha
                    .iter()
                    .zip(self.weight.a())
                    .map(|(x, a)| x / (a * &m))
                    .sum::<Rational>()
            })
            .reduce(Rational::min)
            .expect("a proper ideal has generators")
    }

    /// `φ̂_m(z)` from moduli.
    pub fn eval_abs(&self, z_abs: &[f64]) -> f64 {
        self.realized.eval_abs(z_abs)
    }
}

fn check_unit_scale(phi: &DiagonalZhouWeight) -> Result<()> {
    if phi.scale() != &Rational::one() {
        return Err(Error::validation("approximation needs a weight of scale 1"));
    }
    Ok(())
}

pub fn approximant(m: u32, phi: &DiagonalZhouWeight) -> Result<ApproximantFamily> {
    if m == 0 {
        return Err(Error::validation("approximation order m must be >= 1"));
    }
    check_unit_scale(phi)?;
    let mr = Rational::from_integer(i64::from(m));
    let monomials = multiplier_ideal(&phi.as_weight(), &mr)?;
    let realized = ToricWeight::new(monomials.exponents(), mr.recip())?;
    Ok(ApproximantFamily {
        m,
        weight: phi.clone(),
        monomials,
        realized,
    })
}

fn check_grid(z_grid: &[Vec<f64>], n: usize) -> Result<()> {
    if z_grid.is_empty() {
        return Err(Error::validation("empty grid"));
    }
    for z in z_grid {
        if z.len() != n {
            return Err(Error::dim_mismatch("grid point", z.len(), n));
        }
        if z.iter().any(|x| !(x.is_finite() && *x > 0.0 && *x < 1.0)) {
            return Err(Error::validation(
                "grid points need 0 < |z_j| < 1 (off the axes, inside the polydisc)",
            ));
        }
    }
    Ok(())
}

/// Product grid `{lo + k(hi-lo)/(count-1)}^n` of moduli.
pub fn product_grid(n: usize, lo: f64, hi: f64, count: usize) -> Result<Vec<Vec<f64>>> {
    if count == 0 || !(0.0 < lo && lo <= hi && hi < 1.0) {
        return Err(Error::validation("grid needs 0 < lo <= hi < 1 and count >= 1"));
    }
    let axis: Vec<f64> = if count == 1 {
        vec![lo]
    } else {
        (0..count)
            .map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64)
            .collect()
    };
    let total = count
        .checked_pow(n as u32)
        .filter(|t| *t <= 1_000_000)
        .ok_or(Error::Capacity {
            what: "product grid points".into(),
            limit: 1_000_000,
            requested: usize::MAX,
        })?;
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; n];
    loop {
        out.push(idx.iter().map(|&k| axis[k]).collect());
        let mut j = 0;
        while j < n {
            idx[j] += 1;
            if idx[j] < count {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
        if j == n {
            return Ok(out);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub m: u32,
    pub sigma_m: Rational,
    pub sigma_direct: Rational,
    /// `σ_m > 1 - 1/m`
    pub lower_ok: bool,
    /// `σ_m <= 1 + (1 + max a)/m`
    pub upper_ok: bool,
    /// `Φ <= φ̂_m + O(1)`
    pub dominates: bool,
    /// `I((m+1)Φ) ⊆ I(mΦ)`
    pub nested: bool,
    pub sup_gap: f64,
    pub min_gap: f64,
}

impl ConvergenceRow {
    pub fn bound_ok(&self) -> bool {
        self.sigma_m == self.sigma_direct && self.lower_ok && self.upper_ok && self.dominates
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub note: &'static str,
    pub rows: Vec<ConvergenceRow>,
    /// `max_m m·sup_gap`
    pub fitted_c: f64,
    /// `max_grid -Φ(z)`, which bounds `m·gap` for every `m`.
    pub grid_c: f64,
    pub gap_monotone: bool,
}

impl ConvergenceReport {
    pub fn passed(&self) -> bool {
        self.fitted_c.is_finite()
            && self.fitted_c <= self.grid_c * (1.0 + 1e-12) + 1e-12
            && self
                .rows
                .iter()
                .all(|r| r.bound_ok() && r.nested && r.min_gap >= -1e-12)
    }
}

fn convergence_row(phi: &DiagonalZhouWeight, m: u32, z_grid: &[Vec<f64>]) -> Result<ConvergenceRow> {
    let fam = approximant(m, phi)?;
    let next = approximant(m + 1, phi)?;
    let mr = Rational::from_integer(i64::from(m));
    let sigma_m = fam.sigma()?;
    let sigma_direct = fam.sigma_direct();
    let one = Rational::one();
    let lower_ok = sigma_m > &one - mr.recip();
    let upper_ok = sigma_m <= &one + (&one + phi.max_a()) / &mr;
    let dominates = phi.as_weight().germ_le(&fam.realized)?;
    let nested = next.monomials.is_subset_of(&fam.monomials);
    let mut sup_gap = f64::NEG_INFINITY;
    let mut min_gap = f64::INFINITY;
    for z in z_grid {
        let gap = fam.eval_abs(z) - phi.eval_abs(z);
        sup_gap = sup_gap.max(gap);
        min_gap = min_gap.min(gap);
    }
    Ok(ConvergenceRow {
        m,
        sigma_m,
        sigma_direct,
        lower_ok,
        upper_ok,
        dominates,
        nested,
        sup_gap,
        min_gap,
    })
}

/// `σ_m` bounds, germ domination, nesting and the envelope gap `φ̂_m - Φ`
/// over a grid, computed in parallel over `m`.
pub fn pointwise_convergence(
    phi: &DiagonalZhouWeight,
    z_grid: &[Vec<f64>],
    ms: &[u32],
) -> Result<ConvergenceReport> {
    check_unit_scale(phi)?;
    check_grid(z_grid, phi.dim())?;
    if ms.is_empty() || ms.contains(&0) {
        return Err(Error::validation("m-list must be nonempty with m >= 1"));
    }
    let workers = worker_count(None).min(ms.len());
    let size = ms.len().div_ceil(workers);
    let mut slots: Vec<Option<Result<ConvergenceRow>>> = vec![None; ms.len()];
    thread::scope(|scope| {
        for (chunk_ms, chunk_out) in ms.chunks(size).zip(slots.chunks_mut(size)) {
            scope.spawn(move || {
                for (m, out) in chunk_ms.iter().zip(chunk_out.iter_mut()) {
                    *out = Some(convergence_row(phi, *m, z_grid));
                }
            });
        }
    });
    let rows = slots
        .into_iter()
        .map(|s| s.expect("every slot is filled"))
        .collect::<Result<Vec<_>>>()?;
    let fitted_c = rows
        .iter()
        .map(|r| f64::from(r.m) * r.sup_gap)
        .fold(0.0, f64::max);
    let grid_c = z_grid
        .iter()
        .map(|z| -phi.eval_abs(z))
        .fold(0.0, f64::max);
    let mut sorted: Vec<&ConvergenceRow> = rows.iter().collect();
    sorted.sort_by_key(|r| r.m);
    let gap_monotone = sorted.windows(2).all(|w| w[1].sup_gap <= w[0].sup_gap);
    Ok(ConvergenceReport {
        note: MONOMIAL_RESTRICTION,
        rows,
        fitted_c,
        grid_c,
        gap_monotone,
    })
}

const MAX_COMPOSITIONS: u64 = 2_000_000;

fn exact_logs(z_abs: &[f64]) -> Result<Vec<Rational>> {
    z_abs
        .iter()
        .map(|x| {
            Rational::from_f64_exact(x.ln())
                .ok_or_else(|| Error::validation("non-finite log modulus"))
        })
        .collect()
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| {
        acc.saturating_mul(n - i) / (i + 1)
    })
}

/// `max_{|α| = m} (1/m) Σ α_j log|z_j|` over all compositions of `m`,
/// evaluated exactly in rationals on the floating-point logs.
pub fn green_approximant(m: u32, z_abs: &[f64]) -> Result<f64> {
    if m == 0 {
        return Err(Error::validation("approximation order m must be >= 1"));
    }
    let n = z_abs.len();
    if n == 0 {
        return Err(Error::validation("empty point"));
    }
    check_grid(&[z_abs.to_vec()], n)?;
    let count = binomial(u64::from(m) + n as u64 - 1, n as u64 - 1);
    if count > MAX_COMPOSITIONS {
        return Err(Error::Capacity {
            what: "compositions of m".into(),
            limit: MAX_COMPOSITIONS as usize,
            requested: count.min(usize::MAX as u64) as usize,
        });
    }
    let logs = exact_logs(z_abs)?;
    let mr = Rational::from_integer(i64::from(m));
    let mut best: Option<Rational> = None;
    let mut alpha = vec![0u32; n];
    enumerate_degree(&mut alpha, 0, m, &mut |a| {
        let v: Rational = a
            .iter()
            .zip(&logs)
            .map(|(x, l)| Rational::from_integer(i64::from(*x)) / &mr * l)
            .sum();
        best = Some(match best.take() {
            Some(b) => b.max(v),
            None => v,
        });
    });
    Ok(best.expect("at least one composition").to_f64())
}

/// `Φ_a(z) >= (max a)·max_j log|z_j|`, exact in rationals on the grid.
pub fn green_comparison(phi: &DiagonalZhouWeight, z_grid: &[Vec<f64>]) -> Result<bool> {
    check_grid(z_grid, phi.dim())?;
    let big_n = phi.max_a() * phi.scale();
    for z in z_grid {
        let logs = exact_logs(z)?;
        let lhs = logs
            .iter()
            .zip(phi.a())
            .map(|(l, a)| l * a * phi.scale())
            .reduce(Rational::max)
            .expect("nonempty");
        let rhs = &big_n * logs.iter().cloned().reduce(Rational::max).expect("nonempty");
        if lhs < rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnvelopeReport {
    pub note: &'static str,
    pub max_degree: u32,
    /// Largest `sup_α log|z^α|/σ(log|z^α|,Φ) - Φ(z)` over the grid, per degree
    /// bound `1..=max_degree`; never positive.
    pub excess_by_degree: Vec<f64>,
    /// Largest `Φ(z) - sup` over the grid, per degree bound.
    pub gap_by_degree: Vec<f64>,
    pub bounded_by_phi: bool,
    pub gap_within_bound: bool,
}

/// Monomial candidates `z^α` with `1 <= |α| <= max_degree` normalized by
/// their Zhou numbers never exceed `Φ`, and approach it.
pub fn envelope_identity_check(
    phi: &DiagonalZhouWeight,
    z_grid: &[Vec<f64>],
    max_degree: u32,
) -> Result<EnvelopeReport> {
    check_grid(z_grid, phi.dim())?;
    if max_degree == 0 {
        return Err(Error::validation("max_degree must be >= 1"));
    }
    let n = phi.dim();
    let mut by_degree: Vec<Vec<(Exponent, Rational)>> = Vec::new();
    for d in 1..=max_degree {
        let mut level = Vec::new();
        let mut alpha = vec![0u32; n];
        enumerate_degree(&mut alpha, 0, d, &mut |a| level.push(a.to_vec()));
        let mut rows = Vec::with_capacity(level.len());
        for a in level {
            let e = Exponent::from_u32(&a);
            let sigma = relative_type(&ToricWeight::monomial(e.clone()), phi)?;
            rows.push((e, sigma));
        }
        by_degree.push(rows);
    }
    let mut excess_by_degree = vec![f64::NEG_INFINITY; max_degree as usize];
    let mut gap_by_degree = vec![0.0f64; max_degree as usize];
    let mut bounded = true;
    for z in z_grid {
        let logs = exact_logs(z)?;
        let phi_z = logs
            .iter()
            .zip(phi.a())
            .map(|(l, a)| l * a * phi.scale())
            .reduce(Rational::max)
            .expect("nonempty");
        let mut best: Option<Rational> = None;
        for (d, rows) in by_degree.iter().enumerate() {
            for (e, sigma) in rows {
                let v = e.dot(&logs) / sigma;
                if v > phi_z {
                    bounded = false;
                }
                best = Some(match best {
                    Some(b) => b.max(v),
                    None => v,
                });
            }
            let b = best.clone().expect("degree levels are nonempty");
            excess_by_degree[d] = excess_by_degree[d].max((&b - &phi_z).to_f64());
            gap_by_degree[d] = gap_by_degree[d].max((&phi_z - &b).to_f64());
        }
    }
    let scale = gap_by_degree[0];
    let gap_within_bound = gap_by_degree
        .iter()
        .enumerate()
        .all(|(d, g)| *g <= scale / (d + 1) as f64 + 1e-12 || *g <= 1e-12);
    Ok(EnvelopeReport {
        note: MONOMIAL_RESTRICTION,
        max_degree,
        excess_by_degree,
        gap_by_degree,
        bounded_by_phi: bounded,
        gap_within_bound,
    })
}

fn enumerate_degree(alpha: &mut [u32], j: usize, left: u32, f: &mut dyn FnMut(&[u32])) {
    let n = alpha.len();
    if j == n - 1 {
        alpha[j] = left;
        f(alpha);
        return;
    }
    for k in 0..=left {
        alpha[j] = k;
        enumerate_degree(alpha, j + 1, left - k, f);
    }
    alpha[j] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::q;

    fn phi22() -> DiagonalZhouWeight {
        DiagonalZhouWeight::from_ints(&[2, 2]).unwrap()
    }

    #[test]
    fn approximant_examples() {
        let f = approximant(3, &phi22()).unwrap();
        assert!(f.monomials.generators().iter().all(|g| g.iter().sum::<u32>() == 5));
        assert_eq!(f.monomials.generators().len(), 6);
        assert_eq!(f.sigma().unwrap(), q(5, 6));
        let f = approximant(1, &phi22()).unwrap();
        assert_eq!(f.monomials, MonomialIdeal::maximal(2));
        assert_eq!(f.sigma().unwrap(), q(1, 2));
        assert!(approximant(0, &phi22()).is_err());
    }

    #[test]
    fn diagonal_gap() {
        let z = vec![vec![0.5, 0.5]];
        let rep = pointwise_convergence(&phi22(), &z, &[1, 2, 5, 16]).unwrap();
        for r in &rep.rows {
            let want = std::f64::consts::LN_2 / f64::from(r.m);
            assert!((r.sup_gap - want).abs() < 1e-12, "m={} gap={}", r.m, r.sup_gap);
        }
        assert!(rep.passed() && rep.gap_monotone);
        let r = 0.3f64;
        let rep = pointwise_convergence(&phi22(), &[vec![r, r]], &[4]).unwrap();
        assert!((rep.rows[0].sup_gap - (1.0 / r).ln() / 4.0).abs() < 1e-12);
        assert!(pointwise_convergence(&phi22(), &[vec![0.0, 0.5]], &[1]).is_err());
    }

    #[test]
    fn green_identity() {
        for m in [1, 2, 7, 64] {
            assert_eq!(green_approximant(m, &[0.5, 0.25]).unwrap(), 0.5f64.ln());
            assert_eq!(green_approximant(m, &[0.3, 0.3]).unwrap(), 0.3f64.ln());
            assert_eq!(green_approximant(m, &[0.2, 0.7, 0.4]).unwrap(), 0.7f64.ln());
        }
        let grid = product_grid(2, 0.1, 0.9, 9).unwrap();
        assert!(green_comparison(&DiagonalZhouWeight::from_ints(&[3, 3, 3]).unwrap(), &product_grid(3, 0.2, 0.8, 4).unwrap()).unwrap());
        assert!(green_comparison(&phi22(), &grid).unwrap());
    }

    #[test]
    fn envelope_examples() {
        let rep = envelope_identity_check(&phi22(), &[vec![0.5, 0.5], vec![0.5, 0.25]], 8).unwrap();
        assert!(rep.bounded_by_phi && rep.gap_within_bound);
        assert!(rep.gap_by_degree.iter().all(|g| *g == 0.0));
    }
}
