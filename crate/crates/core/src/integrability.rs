//! Integrability thresholds of toric densities.
//!
//! In log coordinates the density `|z^γ|² e^{-2φ₀} e^{-2cφ}` (against
//! Lebesgue measure) becomes `exp(-2 M_c(u))` times angular factors, with
//! `M_c(u) = <γ+1, u> - h_{φ₀}(u) - c·h_φ(u)` homogeneous piecewise linear.
//! It is integrable near the origin iff `M_c > 0` on the nonzero orthant,
//! i.e. iff its minimum on the standard simplex is positive.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::lp::{lp_solve, LinearProgram, LpOutcome};
use crate::lattice::{Exponent, MonomialIdeal, NewtonPolyhedron, Rational};
use crate::toric::{relative_type, DiagonalZhouWeight, ToricWeight};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Numerator {
    Monomial(Exponent),
    Ideal(MonomialIdeal),
}

impl Numerator {
    fn dim(&self) -> usize {
        match self {
            Numerator::Monomial(g) => g.dim(),
            Numerator::Ideal(i) => i.dim(),
        }
    }

    /// `|I|² = Σ|g_i|²` is integrable iff every term is.
    fn exponents(&self) -> Vec<Exponent> {
        match self {
            Numerator::Monomial(g) => vec![g.clone()],
            Numerator::Ideal(i) => i.exponents(),
        }
    }
}

/// `|numerator|² e^{-2·twist} e^{-2c·weight}` as a function of `c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JumpingQuery {
    pub numerator: Numerator,
    pub twist: Option<ToricWeight>,
    pub weight: ToricWeight,
}

impl JumpingQuery {
    pub fn new(
        numerator: Numerator,
        twist: Option<ToricWeight>,
        weight: ToricWeight,
    ) -> Result<JumpingQuery> {
        let n = weight.dim();
        if numerator.dim() != n {
            return Err(Error::dim_mismatch("jumping query numerator", numerator.dim(), n));
        }
        if let Some(t) = &twist {
            if t.dim() != n {
                return Err(Error::dim_mismatch("jumping query twist", t.dim(), n));
            }
        }
        if weight.is_zero() {
            return Err(Error::validation("jumping query weight must be nonzero"));
        }
        let twist = twist.filter(|t| !t.is_zero());
        Ok(JumpingQuery {
            numerator,
            twist,
            weight,
        })
    }

    pub fn monomial(g: Exponent, weight: ToricWeight) -> Result<JumpingQuery> {
        JumpingQuery::new(Numerator::Monomial(g), None, weight)
    }

    /// Log canonical threshold query `|1|² e^{-2cφ}`.
    pub fn lct(weight: ToricWeight) -> Result<JumpingQuery> {
        let n = weight.dim();
        JumpingQuery::monomial(Exponent::zero(n), weight)
    }

    pub fn dim(&self) -> usize {
        self.weight.dim()
    }
}

/// `M(u) = <linear, u> + Σ κ·h_w(u)`.
#[derive(Clone, Debug)]
pub(crate) struct Margin {
    pub linear: Vec<Rational>,
    pub terms: Vec<(Rational, ToricWeight)>,
}

impl Margin {
    /// `<γ+1, u> - h_{φ₀}(u)`.
    pub fn reference(gamma: &Exponent, twist: Option<&ToricWeight>) -> Margin {
        let linear = gamma.iter().map(|g| g + Rational::one()).collect();
        let mut terms = Vec::new();
        if let Some(t) = twist {
            terms.push((-Rational::one(), t.clone()));
        }
        Margin { linear, terms }
    }

    pub fn with_term(mut self, kappa: Rational, w: &ToricWeight) -> Margin {
        if !kappa.is_zero() && !w.is_zero() {
            self.terms.push((kappa, w.clone()));
        }
        self
    }

    pub fn eval(&self, u: &[Rational]) -> Rational {
        let lin: Rational = self.linear.iter().zip(u).map(|(a, b)| a * b).sum();
        self.terms
            .iter()
            .fold(lin, |acc, (k, w)| acc + k * w.h(u))
    }
}

pub(crate) enum Region<'a> {
    /// `u >= 0, Σ u = 1`
    Simplex,
    /// `u >= 0, h_φ(u) >= 1`
    Above(&'a ToricWeight),
}

pub(crate) struct MarginMin {
    pub value: Rational,
    pub point: Vec<Rational>,
}

/// Exact minimum of a margin over a region; `None` when it is unbounded below.
///
/// Terms with negative coefficient are convex and enter through epigraph
/// variables; terms with positive coefficient are concave and are handled by
/// enumerating one piece per term.
pub(crate) fn minimize_margin(m: &Margin, region: Region<'_>) -> Result<Option<MarginMin>> {
    let n = m.linear.len();
    let convex: Vec<&(Rational, ToricWeight)> =
        m.terms.iter().filter(|(k, _)| k.is_negative()).collect();
    let concave: Vec<&(Rational, ToricWeight)> =
        m.terms.iter().filter(|(k, _)| k.is_positive()).collect();
    let nv = n + convex.len();

    let mut base = LinearProgram::minimize(vec![Rational::zero(); nv]);
    for (k, (kappa, w)) in convex.iter().enumerate() {
        base.objective[n + k] = kappa.clone();
        for beta in w.pieces() {
            let mut row: Vec<Rational> = beta.iter().map(|b| b * w.scale()).collect();
            row.resize(nv, Rational::zero());
            row[n + k] = -Rational::one();
            base.push_geq(row, Rational::zero());
        }
    }
    match region {
        Region::Simplex => {
            let mut row = vec![Rational::one(); n];
            row.resize(nv, Rational::zero());
            base.push_eq(row, Rational::one());
        }
        Region::Above(phi) => {
            if phi.is_zero() {
                return Err(Error::validation("threshold region needs a nonzero weight"));
            }
            for beta in phi.pieces() {
                let mut row: Vec<Rational> = beta.iter().map(|b| b * phi.scale()).collect();
                row.resize(nv, Rational::zero());
                base.push_geq(row, Rational::one());
            }
        }
    }

    let counts: Vec<usize> = concave.iter().map(|(_, w)| w.pieces().len()).collect();
    let mut choice = vec![0usize; concave.len()];
    let mut best: Option<MarginMin> = None;
    loop {
        let mut lp = base.clone();
        for j in 0..n {
            let mut c = m.linear[j].clone();
            for (t, (kappa, w)) in concave.iter().enumerate() {
                let b = &w.pieces()[choice[t]][j];
                if !b.is_zero() {
                    c += &(kappa * w.scale() * b);
                }
            }
            lp.objective[j] = c;
        }
        match lp_solve(&lp)? {
            LpOutcome::Optimal(o) => {
                if best.as_ref().is_none_or(|b| o.value < b.value) {
                    best = Some(MarginMin {
                        value: o.value,
                        point: o.point[..n].to_vec(),
                    });
                }
            }
            LpOutcome::Unbounded { .. } => return Ok(None),
            LpOutcome::Infeasible { .. } => {
                return Err(Error::Verification {
                    check: "margin-lp".into(),
                    detail: "margin region is empty".into(),
                })
            }
        }
        // odometer over concave piece choices
        let mut k = 0;
        loop {
            if k == choice.len() {
                return Ok(best);
            }
            choice[k] += 1;
            if choice[k] < counts[k] {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Whether the margin is positive on the nonzero orthant.
pub(crate) fn margin_positive(m: &Margin) -> Result<bool> {
    Ok(minimize_margin(m, Region::Simplex)?.is_some_and(|r| r.value.is_positive()))
}

/// `min {M(u) : h_φ(u) >= 1}` after checking that `M > 0` on the orthant.
pub(crate) fn threshold_of(m: &Margin, weight: &ToricWeight) -> Result<MarginMin> {
    if !margin_positive(m)? {
        return Err(Error::Domain(
            "reference density is not integrable near the origin".into(),
        ));
    }
    minimize_margin(m, Region::Above(weight))?.ok_or_else(|| Error::Verification {
        check: "margin-lp".into(),
        detail: "positive margin cannot be unbounded below".into(),
    })
}

/// Decides integrability of `|z^γ|² e^{-2φ₀} e^{-2cφ}` near the origin.
/// The criterion is strict, so the answer at the threshold itself is `false`.
pub fn is_integrable(q: &JumpingQuery, c: &Rational) -> Result<bool> {
    for gamma in q.numerator.exponents() {
        let m = Margin::reference(&gamma, q.twist.as_ref()).with_term(-c, &q.weight);
        if !margin_positive(&m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The threshold `c* = sup{c : is_integrable(q, c)}`.
pub fn jumping_number(q: &JumpingQuery) -> Result<Rational> {
    Ok(jumping_number_detail(q)?.0)
}

/// Threshold together with the minimizing generator and LP point.
pub(crate) fn jumping_number_detail(q: &JumpingQuery) -> Result<(Rational, Exponent, Vec<Rational>)> {
    let mut best: Option<(Rational, Exponent, Vec<Rational>)> = None;
    for gamma in q.numerator.exponents() {
        let m = Margin::reference(&gamma, q.twist.as_ref());
        let r = threshold_of(&m, &q.weight)?;
        if best.as_ref().is_none_or(|b| r.value < b.0) {
            best = Some((r.value, gamma, r.point));
        }
    }
    Ok(best.expect("numerator is nonempty"))
}

/// `ν(z^g, Φ) = σ(log|z^g|, Φ)`.
pub fn zhou_valuation(g: &Exponent, phi: &DiagonalZhouWeight) -> Result<Rational> {
    if !g.is_integral() {
        return Err(Error::validation("valuations are taken on integer monomials"));
    }
    relative_type(&ToricWeight::monomial(g.clone()), phi)
}

/// `z^g ∈ I(tφ)`, decided by the LP threshold: `c^{z^g}(tφ) > 1`.
pub fn multiplier_membership(g: &[u32], phi: &ToricWeight, t: &Rational) -> Result<bool> {
    if t.is_negative() {
        return Err(Error::validation("multiplier ideals need t >= 0"));
    }
    if g.len() != phi.dim() {
        return Err(Error::dim_mismatch("multiplier membership", g.len(), phi.dim()));
    }
    if t.is_zero() || phi.is_zero() {
        return Ok(true);
    }
    let q = JumpingQuery::monomial(Exponent::from_u32(g), phi.scaled(t)?)?;
    Ok(jumping_number(&q)? > Rational::one())
}

/// Largest per-axis coordinate explored by `multiplier_ideal`.
pub const MAX_AXIS_CAP: u64 = 4096;
/// Largest number of prefixes `(α_1, ..., α_{n-1})` scanned.
pub const MAX_PREFIXES: u64 = 4_000_000;

/// Minimal generators of `I(tφ)` by staircase enumeration.
///
/// Membership uses the interior of the scaled Newton polyhedron
/// (`z^α ∈ I(tφ)` iff `α + 1` is interior to `t·Newton(φ)`), written as
/// strict facet inequalities.
pub fn multiplier_ideal(phi: &ToricWeight, t: &Rational) -> Result<MonomialIdeal> {
    if t.is_negative() {
        return Err(Error::validation("multiplier ideals need t >= 0"));
    }
    let n = phi.dim();
    if t.is_zero() || phi.is_zero() {
        return Ok(MonomialIdeal::unit(n));
    }
    let poly = NewtonPolyhedron::new(n, phi.scaled_pieces())?;
    let facets: Vec<(Vec<Rational>, Rational)> = poly
        .facets()
        .iter()
        .map(|f| (f.normal.clone(), t * &f.offset))
        .collect();

    let max_entry = phi
        .pieces()
        .iter()
        .flat_map(|p| p.iter().cloned())
        .fold(Rational::zero(), Rational::max);
    let bound = (t * phi.scale() * max_entry).ceil_i64().unwrap_or(i64::MAX);
    let cap = (bound as u64).saturating_add(n as u64 + 2);
    if cap > MAX_AXIS_CAP {
        return Err(Error::Capacity {
            what: format!("multiplier ideal enumeration on axis 1 of {n}"),
            limit: MAX_AXIS_CAP as usize,
            requested: cap as usize,
        });
    }
    let side = cap + 1;
    let prefix_count = side.checked_pow((n - 1) as u32).unwrap_or(u64::MAX);
    if prefix_count > MAX_PREFIXES {
        return Err(Error::Capacity {
            what: format!("multiplier ideal enumeration on axes 1..{} of {n}", n - 1),
            limit: MAX_PREFIXES as usize,
            requested: prefix_count.min(usize::MAX as u64) as usize,
        });
    }

    // Minimal last coordinate for every prefix; u64::MAX marks "never".
    let side = side as usize;
    let prefix_count = prefix_count as usize;
    let mut minimal = vec![u64::MAX; prefix_count];
    let mut prefix = vec![0u32; n - 1];
    for (idx, slot) in minimal.iter_mut().enumerate() {
        decode(idx, side, &mut prefix);
        *slot = minimal_last(&facets, &prefix, n);
    }

    let mut gens = Vec::new();
    for idx in 0..prefix_count {
        let m = minimal[idx];
        if m == u64::MAX {
            continue;
        }
        decode(idx, side, &mut prefix);
        let mut stride = 1usize;
        let mut is_min = true;
        for &p in prefix.iter() {
            if p > 0 && minimal[idx - stride] == m {
                is_min = false;
                break;
            }
            stride *= side;
        }
        if !is_min {
            continue;
        }
        if m > cap {
            return Err(Error::Capacity {
                what: format!("multiplier ideal enumeration on axis {n} of {n}"),
                limit: cap as usize,
                requested: m as usize,
            });
        }
        let mut g = prefix.clone();
        g.push(m as u32);
        gens.push(g);
    }
    // Prefixes on the outer faces of the box must be dominated by interior ones.
    Ok(MonomialIdeal::from_minimal(n, gens))
}

fn decode(mut idx: usize, side: usize, out: &mut [u32]) {
    for x in out.iter_mut() {
        *x = (idx % side) as u32;
        idx /= side;
    }
}

/// Smallest `α_n` with `(prefix, α_n) + 1` strictly inside every facet.
fn minimal_last(facets: &[(Vec<Rational>, Rational)], prefix: &[u32], n: usize) -> u64 {
    let mut need = Rational::zero();
    for (w, d) in facets {
        let partial: Rational = (0..n - 1)
            .map(|j| &w[j] * Rational::from(prefix[j] + 1))
            .sum();
        let wn = &w[n - 1];
        if wn.is_zero() {
            if partial <= *d {
                return u64::MAX;
            }
            continue;
        }
        // w_n (α_n + 1) > d - partial  ⟺  α_n > (d - partial)/w_n - 1
        let qf = (d - &partial) / wn - Rational::one();
        let lower = qf.floor() + Rational::one();
        if lower > need {
            need = lower;
        }
    }
    need.floor_i64().map_or(u64::MAX, |v| v as u64)
}

/// Exact check of the equality between the jumping number of an ideal and
/// the supremum of Zhou numbers over the diagonal family.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThmAReport {
    /// `c_o^I(φ)`
    pub jumping_number: Rational,
    /// `1 / c_o^I(φ)`
    pub sup_target: Rational,
    /// How `a*` was obtained: `analytic`, `lp_vertex` or `none`.
    pub candidate: String,
    pub a_star: Option<Vec<Rational>>,
    /// `σ(φ, s(a*)Φ_{a*})` with `s(a*)` the jumping number of `I` against `Φ_{a*}`.
    pub sigma_at_candidate: Option<Rational>,
    pub product: Option<Rational>,
    pub equality_at_candidate: bool,
    pub grid_resolution: u32,
    pub grid_points: usize,
    pub grid_max: Rational,
    pub grid_exceeds: bool,
    /// Set when no interior candidate exists and only the grid was searched.
    pub gap_flag: bool,
}

impl ThmAReport {
    pub fn passed(&self) -> bool {
        !self.grid_exceeds && (self.gap_flag || self.equality_at_candidate)
    }
}

/// `(b_j)` when `φ = c·log max_j |z_j|^{b_j}`, scale folded in.
fn diagonal_exponents(phi: &ToricWeight) -> Option<Vec<Rational>> {
    let n = phi.dim();
    if phi.pieces().len() != n {
        return None;
    }
    let mut b = vec![Rational::zero(); n];
    for p in phi.pieces() {
        let support: Vec<usize> = (0..n).filter(|&j| !p[j].is_zero()).collect();
        if support.len() != 1 || !b[support[0]].is_zero() {
            return None;
        }
        b[support[0]] = &p[support[0]] * phi.scale();
    }
    Some(b)
}

/// `σ(φ, s_I(a)·Φ_a)` at `w = 1/a`: `h_φ(w) / min_γ <γ+1, w>`.
fn sup_objective(phi: &ToricWeight, gens: &[Exponent], w: &[Rational]) -> Rational {
    let denom = gens
        .iter()
        .map(|g| g.iter().zip(w).map(|(x, y)| (x + Rational::one()) * y).sum::<Rational>())
        .min()
        .expect("nonempty");
    phi.h(w) / denom
}

fn simplex_grid(n: usize, res: u32, mut visit: impl FnMut(&[Rational])) {
    fn rec(
        n: usize,
        res: u32,
        left: u32,
        cur: &mut Vec<u32>,
        visit: &mut dyn FnMut(&[Rational]),
    ) {
        if cur.len() == n - 1 {
            if left >= 1 {
                cur.push(left);
                let w: Vec<Rational> = cur
                    .iter()
                    .map(|&k| Rational::new(i64::from(k), i64::from(res)))
                    .collect();
                visit(&w);
                cur.pop();
            }
            return;
        }
        for k in 1..left {
            cur.push(k);
            rec(n, res, left - k, cur, visit);
            cur.pop();
        }
    }
    if n == 1 {
        visit(&[Rational::one()]);
        return;
    }
    rec(n, res, res, &mut Vec::new(), &mut visit);
}

pub fn thm_a_check(ideal: &MonomialIdeal, phi: &ToricWeight, grid_resolution: u32) -> Result<ThmAReport> {
    if ideal.dim() != phi.dim() {
        return Err(Error::dim_mismatch("thmA", ideal.dim(), phi.dim()));
    }
    if grid_resolution == 0 {
        return Err(Error::validation("grid resolution must be positive"));
    }
    let n = phi.dim();
    let query = JumpingQuery::new(Numerator::Ideal(ideal.clone()), None, phi.clone())?;
    let (lhs, _, point) = jumping_number_detail(&query)?;
    let target = lhs.recip();
    let gens = ideal.exponents();

    let (candidate, a_star) = if let Some(b) = diagonal_exponents(phi) {
        let total: Rational = b.iter().map(Rational::recip).sum();
        let a: Vec<Rational> = b.iter().map(|x| x * &total).collect();
        ("analytic", Some(a))
    } else if point.iter().all(Rational::is_positive) {
        let total: Rational = point.iter().sum();
        let a: Vec<Rational> = point.iter().map(|x| &total / x).collect();
        ("lp_vertex", Some(a))
    } else {
        ("none", None)
    };

    let mut sigma_at = None;
    let mut product = None;
    let mut equality = false;
    if let Some(a) = &a_star {
        let zhou = DiagonalZhouWeight::new(a.clone())?;
        let s = jumping_number(&JumpingQuery::new(
            Numerator::Ideal(ideal.clone()),
            None,
            zhou.as_weight(),
        )?)?;
        let scaled = zhou.with_scale(s);
        let sigma = crate::toric::relative_type_general(phi, &scaled.as_weight())?;
        let prod = &lhs * &sigma;
        equality = prod == Rational::one();
        sigma_at = Some(sigma);
        product = Some(prod);
    }

    let mut grid_max = Rational::zero();
    let mut points = 0usize;
    simplex_grid(n, grid_resolution, |w| {
        points += 1;
        let v = sup_objective(phi, &gens, w);
        if v > grid_max {
            grid_max = v;
        }
    });
    let grid_exceeds = grid_max > target;
    Ok(ThmAReport {
        jumping_number: lhs,
        sup_target: target,
        candidate: candidate.into(),
        a_star,
        sigma_at_candidate: sigma_at,
        product,
        equality_at_candidate: equality,
        grid_resolution,
        grid_points: points,
        grid_max,
        grid_exceeds,
        gap_flag: candidate == "none",
    })
}

/// Outcome of comparing the valuative statement with the ideal inclusions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InclusionVerdict {
    /// `σ(u, Φ_a) <= σ(v, Φ_a)` for every diagonal Zhou weight.
    pub valuative: bool,
    /// A normalized direction where the valuative inequality fails.
    pub valuative_witness: Option<Vec<Rational>>,
    /// `I(tv) ⊆ I(tu)` for every `t` on the grid.
    pub inclusions: bool,
    /// First grid value of `t` where the inclusion fails.
    pub inclusion_witness: Option<Rational>,
    pub t_grid: Vec<Rational>,
    pub agree: bool,
}

/// Exact decision of `h_u <= h_v` on the simplex, with a direction witness.
fn valuative_order(u: &ToricWeight, v: &ToricWeight) -> Result<(bool, Option<Vec<Rational>>)> {
    let n = u.dim();
    for beta in v.pieces() {
        let linear: Vec<Rational> = beta.iter().map(|b| b * v.scale()).collect();
        let m = Margin {
            linear,
            terms: vec![(-Rational::one(), u.clone())],
        };
        let r = minimize_margin(&m, Region::Simplex)?.expect("simplex is compact");
        if r.value.is_negative() {
            // move into the open simplex keeping the strict violation
            let center = Rational::new(1, n as i64);
            let mut eps = Rational::new(1, 2);
            loop {
                let w: Vec<Rational> = r
                    .point
                    .iter()
                    .map(|x| (Rational::one() - &eps) * x + &eps * &center)
                    .collect();
                if m.eval(&w).is_negative() {
                    let a = w.iter().map(Rational::recip).collect();
                    return Ok((false, Some(a)));
                }
                eps = eps * Rational::new(1, 2);
            }
        }
    }
    Ok((true, None))
}

pub fn inclusion_equivalence(
    u: &ToricWeight,
    v: &ToricWeight,
    t_grid: &[Rational],
) -> Result<InclusionVerdict> {
    if u.dim() != v.dim() {
        return Err(Error::dim_mismatch("inclusion_equivalence", u.dim(), v.dim()));
    }
    let (valuative, valuative_witness) = valuative_order(u, v)?;
    let mut inclusion_witness = None;
    for t in t_grid {
        let iv = multiplier_ideal(v, t)?;
        let iu = multiplier_ideal(u, t)?;
        if !iv.is_subset_of(&iu) {
            inclusion_witness = Some(t.clone());
            break;
        }
    }
    let inclusions = inclusion_witness.is_none();
    Ok(InclusionVerdict {
        valuative,
        valuative_witness,
        inclusions,
        inclusion_witness,
        t_grid: t_grid.to_vec(),
        agree: valuative == inclusions,
    })
}

/// `k/den` for `k = 1 ..= t_max·den`.
pub fn uniform_t_grid(t_max: &Rational, den: i64) -> Vec<Rational> {
    let steps = (t_max * Rational::from_integer(den)).floor_i64().unwrap_or(0);
    (1..=steps).map(|k| Rational::new(k, den)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DivisionVerdict {
    pub componentwise: bool,
    pub valuative: bool,
    /// A direction `a` with `ν(z^f, Φ_a) < ν(z^g, Φ_a)`, if any.
    pub witness: Option<Vec<Rational>>,
}

impl DivisionVerdict {
    pub fn agree(&self) -> bool {
        self.componentwise == self.valuative
    }
}

/// Whether `z^g` divides `z^f`, decided componentwise and valuatively.
pub fn divides(f: &Exponent, g: &Exponent) -> Result<DivisionVerdict> {
    f.check_dim(g.dim(), "divides")?;
    if !f.is_integral() || !g.is_integral() {
        return Err(Error::validation("division is tested on integer monomials"));
    }
    let n = f.dim();
    let componentwise = f.dominates(g);
    let spread: Rational = f.iter().zip(g.iter()).map(|(a, b)| (a - b).abs()).sum();
    let eps = (Rational::from_integer(2) * spread + Rational::from_integer(2)).recip();
    let mut witness = None;
    for j in 0..n {
        let a: Vec<Rational> = if n == 1 {
            vec![Rational::one()]
        } else {
            let side = &eps / Rational::from_integer(n as i64 - 1);
            let w: Vec<Rational> = (0..n)
                .map(|k| if k == j { Rational::one() - &eps } else { side.clone() })
                .collect();
            w.iter().map(Rational::recip).collect()
        };
        let phi = DiagonalZhouWeight::new(a.clone())?;
        if zhou_valuation(f, &phi)? < zhou_valuation(g, &phi)? {
            witness = Some(a);
            break;
        }
    }
    Ok(DivisionVerdict {
        componentwise,
        valuative: witness.is_none(),
        witness,
    })
}

/// Membership of `z^f` in the integral closure of `I`, decided by Newton
/// polyhedron membership and by the valuative LP
/// `min_{w in simplex} <f,w> - min_γ <γ,w> >= 0`.
pub fn integral_closure_check(ideal: &MonomialIdeal, f: &Exponent) -> Result<(bool, bool)> {
    f.check_dim(ideal.dim(), "integral closure")?;
    let newton = ideal.newton().contains(f)?;
    let gens = ToricWeight::new(ideal.exponents(), Rational::one())?;
    let m = Margin {
        linear: f.coords().to_vec(),
        terms: vec![(-Rational::one(), gens)],
    };
    let r = minimize_margin(&m, Region::Simplex)?.expect("simplex is compact");
    Ok((newton, !r.value.is_negative()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::q;

    fn e(v: &[i64]) -> Exponent {
        Exponent::from_ints(v).unwrap()
    }

    fn w(pieces: &[&[i64]]) -> ToricWeight {
        ToricWeight::from_ints(pieces, Rational::one()).unwrap()
    }

    fn phi22() -> DiagonalZhouWeight {
        DiagonalZhouWeight::from_ints(&[2, 2]).unwrap()
    }

    #[test]
    fn integrability_examples() {
        let qy = JumpingQuery::monomial(e(&[1, 0]), phi22().as_weight()).unwrap();
        assert!(!is_integrable(&qy, &q(3, 2)).unwrap());
        assert!(is_integrable(&qy, &q(1499, 1000)).unwrap());
        assert_eq!(jumping_number(&qy).unwrap(), q(3, 2));
        let qy = JumpingQuery::lct(ToricWeight::coordinate(1, 0)).unwrap();
        assert!(is_integrable(&qy, &q(1, 2)).unwrap());
        let half = ToricWeight::new(vec![e(&[0, 1])], q(1, 2)).unwrap();
        let qy = JumpingQuery::new(Numerator::Monomial(e(&[0, 0])), Some(half), phi22().as_weight()).unwrap();
        assert_eq!(jumping_number(&qy).unwrap(), q(3, 4));
        assert!(!is_integrable(&qy, &q(1, 1)).unwrap());
    }

    #[test]
    fn jumping_number_examples() {
        let qy = JumpingQuery::lct(w(&[&[2, 0], &[0, 3]])).unwrap();
        assert_eq!(jumping_number(&qy).unwrap(), q(5, 6));
        for a in [[q(2, 1), q(2, 1)], [q(3, 1), q(3, 2)], [q(4, 1), q(4, 3)]] {
            let p = DiagonalZhouWeight::new(a.to_vec()).unwrap();
            assert_eq!(jumping_number(&JumpingQuery::lct(p.as_weight()).unwrap()).unwrap(), q(1, 1));
        }
    }

    #[test]
    fn valuations() {
        assert_eq!(zhou_valuation(&e(&[1, 0]), &phi22()).unwrap(), q(1, 2));
        assert_eq!(zhou_valuation(&e(&[0, 0]), &phi22()).unwrap(), q(0, 1));
        let p = DiagonalZhouWeight::new(vec![q(3, 1), q(3, 2)]).unwrap();
        assert_eq!(zhou_valuation(&e(&[2, 3]), &p).unwrap(), q(8, 3));
    }

    #[test]
    fn membership_examples() {
        let p = phi22().as_weight();
        assert!(!multiplier_membership(&[2, 2], &p, &q(3, 1)).unwrap());
        assert!(multiplier_membership(&[3, 2], &p, &q(3, 1)).unwrap());
        assert!(multiplier_membership(&[0, 0], &p, &q(0, 1)).unwrap());
    }

    #[test]
    fn multiplier_ideal_examples() {
        let p = phi22().as_weight();
        assert_eq!(multiplier_ideal(&p, &q(1, 1)).unwrap(), MonomialIdeal::maximal(2));
        assert_eq!(multiplier_ideal(&p, &q(1, 4)).unwrap(), MonomialIdeal::unit(2));
        let gens: Vec<Vec<u32>> = (0..=5).map(|k| vec![k, 5 - k]).collect();
        assert_eq!(multiplier_ideal(&p, &q(3, 1)).unwrap(), MonomialIdeal::new(2, gens).unwrap());
        // agrees with the LP membership inside the box
        let i = multiplier_ideal(&w(&[&[2, 0], &[1, 1], &[0, 3]]), &q(7, 3)).unwrap();
        for a in 0..10u32 {
            for b in 0..10u32 {
                let lp = multiplier_membership(&[a, b], &w(&[&[2, 0], &[1, 1], &[0, 3]]), &q(7, 3)).unwrap();
                assert_eq!(i.contains(&[a, b]), lp, "at ({a},{b})");
            }
        }
    }

    #[test]
    fn thm_a_examples() {
        let p = phi22().as_weight();
        let r = thm_a_check(&MonomialIdeal::maximal(2), &p, 100).unwrap();
        assert_eq!(r.jumping_number, q(3, 2));
        assert_eq!(r.sigma_at_candidate, Some(q(2, 3)));
        assert!(r.equality_at_candidate && !r.grid_exceeds);
        let i = MonomialIdeal::new(2, vec![vec![2, 0], vec![0, 3]]).unwrap();
        let r = thm_a_check(&i, &p, 100).unwrap();
        assert_eq!(r.product, Some(q(1, 1)));
        assert!(r.passed());
        let r = thm_a_check(&MonomialIdeal::unit(2), &w(&[&[2, 0], &[0, 3]]), 50).unwrap();
        assert_eq!(r.jumping_number, q(5, 6));
        assert!(r.passed());
    }

    #[test]
    fn inclusion_examples() {
        let grid = uniform_t_grid(&q(6, 1), 2);
        let u = w(&[&[1, 0]]);
        let v = w(&[&[1, 0], &[0, 1]]);
        let same = inclusion_equivalence(&u, &u, &grid).unwrap();
        assert!(same.valuative && same.inclusions);
        let r = inclusion_equivalence(&v, &u, &grid).unwrap();
        assert!(r.valuative && r.inclusions);
        let r = inclusion_equivalence(&u, &v, &grid).unwrap();
        assert!(!r.valuative && !r.inclusions);
        let r = inclusion_equivalence(&w(&[&[1, 1]]), &phi22().as_weight(), &grid).unwrap();
        assert!(r.agree);
        assert!(r.valuative_witness.is_some());
    }

    #[test]
    fn division_examples() {
        let d = divides(&e(&[2, 1]), &e(&[1, 1])).unwrap();
        assert!(d.componentwise && d.valuative);
        let d = divides(&e(&[2, 0]), &e(&[0, 1])).unwrap();
        assert!(!d.componentwise && !d.valuative);
        assert!(d.witness.is_some());
        assert!(divides(&e(&[3]), &e(&[3])).unwrap().valuative);
    }

    #[test]
    fn closure_examples() {
        let i = MonomialIdeal::new(2, vec![vec![2, 0], vec![0, 2]]).unwrap();
        assert_eq!(integral_closure_check(&i, &e(&[1, 1])).unwrap(), (true, true));
        assert_eq!(integral_closure_check(&i, &e(&[1, 0])).unwrap(), (false, false));
    }
}
