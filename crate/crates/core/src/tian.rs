//! Tian functions `Tn(t) = sup{c : |z^{f0}|² e^{-2φ₀} e^{2tψ} e^{-2cφ} integrable}`.
//!
//! For toric data `Tn(t) = min_{h_φ(u) >= 1} N(u) + t·h_ψ(u)` with
//! `N(u) = <f0+1, u> - h_{φ₀}(u)`, a minimum of affine functions of `t`,
//! hence concave and piecewise linear. Every LP optimum `u*` yields an exact
//! supporting line, and the breakpoints are found by intersecting those
//! lines recursively.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrability::{
    is_integrable, jumping_number, margin_positive, threshold_of, JumpingQuery, Margin, Numerator,
};
use crate::lattice::{Exponent, Rational};
use crate::toric::{lelong_number, weight_max, ReferencePair, ToricWeight};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TianQuery {
    pub f0: Exponent,
    pub phi0: Option<ToricWeight>,
    pub weight: ToricWeight,
    pub direction: ToricWeight,
}

impl TianQuery {
    pub fn new(
        f0: Exponent,
        phi0: Option<ToricWeight>,
        weight: ToricWeight,
        direction: ToricWeight,
    ) -> Result<TianQuery> {
        let n = weight.dim();
        f0.check_dim(n, "Tian numerator")?;
        if direction.dim() != n {
            return Err(Error::dim_mismatch("Tian direction", direction.dim(), n));
        }
        if let Some(p) = &phi0 {
            if p.dim() != n {
                return Err(Error::dim_mismatch("Tian twist", p.dim(), n));
            }
        }
        if weight.is_zero() {
            return Err(Error::validation("Tian weight must be nonzero"));
        }
        Ok(TianQuery {
            f0,
            phi0: phi0.filter(|p| !p.is_zero()),
            weight,
            direction,
        })
    }

    /// `Tn(t; f, v, φ₀) = sup{c : |f|^{2t} e^{-2cv - 2φ₀} integrable}` for a monomial `f`.
    pub fn monomial(f: Exponent, v: ToricWeight, phi0: Option<ToricWeight>) -> Result<TianQuery> {
        let n = v.dim();
        TianQuery::new(Exponent::zero(n), phi0, v, ToricWeight::monomial(f))
    }

    /// Uses the reference density of a Zhou weight.
    pub fn for_reference(
        reference: &ReferencePair,
        weight: ToricWeight,
        direction: ToricWeight,
    ) -> Result<TianQuery> {
        TianQuery::new(
            reference.f0().clone(),
            reference.twist().cloned(),
            weight,
            direction,
        )
    }

    pub fn dim(&self) -> usize {
        self.weight.dim()
    }

    fn base_margin(&self) -> Margin {
        Margin::reference(&self.f0, self.phi0.as_ref())
    }

    fn margin_at(&self, t: &Rational) -> Margin {
        self.base_margin().with_term(t.clone(), &self.direction)
    }

    /// Whether `|z^{f0}|² e^{-2φ₀} e^{2tψ}` is integrable.
    pub fn reference_integrable_at(&self, t: &Rational) -> Result<bool> {
        margin_positive(&self.margin_at(t))
    }

    /// `Tn(t)` by a single threshold LP.
    pub fn value(&self, t: &Rational) -> Result<Rational> {
        Ok(self.line_at(t)?.value_at(t))
    }

    /// The supporting line of `Tn` produced by the LP optimum at `t`.
    fn line_at(&self, t: &Rational) -> Result<Line> {
        let r = threshold_of(&self.margin_at(t), &self.weight).map_err(|e| match e {
            Error::Domain(_) => Error::Domain(format!(
                "reference density is not integrable at t = {t}"
            )),
            other => other,
        })?;
        let line = Line {
            intercept: self.base_margin().eval(&r.point),
            slope: self.direction.h(&r.point),
        };
        debug_assert_eq!(line.value_at(t), r.value);
        Ok(line)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Line {
    intercept: Rational,
    slope: Rational,
}

impl Line {
    fn value_at(&self, t: &Rational) -> Rational {
        &self.intercept + &self.slope * t
    }
}

/// Exact piecewise-linear `Tn` on `[t_lo, t_hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TianFunctionPL {
    /// `t_lo`, interior breakpoints, `t_hi`.
    pub knots: Vec<Rational>,
    pub values: Vec<Rational>,
    /// One slope per segment between consecutive knots.
    pub slopes: Vec<Rational>,
}

impl TianFunctionPL {
    pub fn t_lo(&self) -> &Rational {
        &self.knots[0]
    }

    pub fn t_hi(&self) -> &Rational {
        self.knots.last().expect("nonempty")
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.knots[1..self.knots.len() - 1]
    }

    pub fn value_at(&self, t: &Rational) -> Result<Rational> {
        if t < self.t_lo() || t > self.t_hi() {
            return Err(Error::validation(format!(
                "t = {t} outside [{}, {}]",
                self.t_lo(),
                self.t_hi()
            )));
        }
        let i = self.segment_index(t, false);
        Ok(&self.values[i] + &self.slopes[i] * (t - &self.knots[i]))
    }

    pub fn value_at_0(&self) -> Option<Rational> {
        self.value_at(&Rational::zero()).ok()
    }

    /// Index of the segment containing `t`; on a knot, the one to its right
    /// unless `left` is set.
    fn segment_index(&self, t: &Rational, left: bool) -> usize {
        let segs = self.slopes.len();
        for i in 0..segs {
            let inside = if left {
                t > &self.knots[i] && t <= &self.knots[i + 1]
            } else {
                t >= &self.knots[i] && t < &self.knots[i + 1]
            };
            if inside {
                return i;
            }
        }
        if left {
            0
        } else {
            segs - 1
        }
    }

    pub fn is_concave(&self) -> bool {
        self.slopes.windows(2).all(|w| w[0] >= w[1])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Computes `Tn` exactly on `[t_lo, t_hi]`.
pub fn tian_function(q: &TianQuery, t_lo: &Rational, t_hi: &Rational) -> Result<TianFunctionPL> {
    if t_lo >= t_hi {
        return Err(Error::validation(format!("empty range [{t_lo}, {t_hi}]")));
    }
    if !q.reference_integrable_at(t_lo)? {
        return Err(Error::Domain(format!(
            "reference density is not integrable at t = {t_lo}"
        )));
    }
    let lo = q.line_at(t_lo)?;
    let hi = q.line_at(t_hi)?;
    let mut breaks: Vec<(Rational, Rational)> = Vec::new();
    let mut stack = vec![(t_lo.clone(), lo.clone(), t_hi.clone(), hi.clone())];
    while let Some((a, la, b, lb)) = stack.pop() {
        if la.slope == lb.slope {
            continue;
        }
        let tm = (&lb.intercept - &la.intercept) / (&la.slope - &lb.slope);
        if tm <= a || tm >= b {
            continue;
        }
        let lm = q.line_at(&tm)?;
        let expected = la.value_at(&tm);
        if lm.value_at(&tm) == expected {
            breaks.push((tm, expected));
        } else {
            stack.push((tm.clone(), lm.clone(), b, lb));
            stack.push((a, la, tm, lm));
        }
    }
    breaks.sort();
    breaks.dedup();
    let mut knots = vec![t_lo.clone()];
    let mut values = vec![lo.value_at(t_lo)];
    for (t, v) in breaks {
        knots.push(t);
        values.push(v);
    }
    knots.push(t_hi.clone());
    values.push(hi.value_at(t_hi));
    let slopes = (0..knots.len() - 1)
        .map(|i| (&values[i + 1] - &values[i]) / (&knots[i + 1] - &knots[i]))
        .collect();
    Ok(TianFunctionPL {
        knots,
        values,
        slopes,
    })
}

/// Default sweep range.
pub fn default_range() -> (Rational, Rational) {
    (Rational::from_integer(-1), Rational::from_integer(4))
}

/// One-sided slope of `Tn` at `t = 0`.
pub fn derivative_at_zero(tn: &TianFunctionPL, side: Side) -> Result<Rational> {
    let zero = Rational::zero();
    if !(tn.t_lo() < &zero && &zero < tn.t_hi()) {
        return Err(Error::validation(format!(
            "0 is not interior to [{}, {}]",
            tn.t_lo(),
            tn.t_hi()
        )));
    }
    let i = tn.segment_index(&zero, side == Side::Left);
    Ok(tn.slopes[i].clone())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub b0: Rational,
    pub left_derivative: Rational,
    pub right_derivative: Rational,
    pub tn0: Rational,
    pub epsilon: Rational,
    /// Jumping numbers of the reference against `u` and `max{u, v/b}` for
    /// `b = b0/2`, `b0`, `b0 + ε`.
    pub jump_u: Rational,
    pub jump_half: Rational,
    pub jump_b0: Rational,
    pub jump_above: Rational,
    /// `ref·e^{-2 Tn(0) max{u, v/b}}` at `b = b0` (expected `false`) and `b0 + ε` (expected `true`).
    pub integrable_at_b0: bool,
    pub integrable_above: bool,
}

impl ThresholdReport {
    pub fn passed(&self) -> bool {
        self.jump_half == self.jump_u
            && self.jump_b0 == self.jump_u
            && self.jump_above > self.jump_u
            && !self.integrable_at_b0
            && self.integrable_above
    }
}

fn max_with_scaled(u: &ToricWeight, v: &ToricWeight, cu: &Rational, cv: &Rational) -> Result<ToricWeight> {
    weight_max(&u.scaled(cu)?, &v.scaled(cv)?)
}

/// The threshold `b0` for `max{u, v/b}`: the left derivative at `0` of the
/// Tian function with weight `u` and direction `v`.
pub fn threshold_b0(u: &ToricWeight, v: &ToricWeight, reference: &ReferencePair) -> Result<ThresholdReport> {
    if lelong_number(v).is_zero() {
        return Err(Error::Precondition(format!(
            "lelong-positive: direction {v} has zero Lelong number"
        )));
    }
    let q = TianQuery::for_reference(reference, u.clone(), v.clone())?;
    let mut t_lo = Rational::from_integer(-1);
    let mut tries = 0;
    while !q.reference_integrable_at(&t_lo)? {
        t_lo = t_lo * Rational::new(1, 2);
        tries += 1;
        if tries > 40 {
            return Err(Error::Domain("reference is not integrable for any t < 0 probed".into()));
        }
    }
    let t_hi = -&t_lo;
    let tn = tian_function(&q, &t_lo, &t_hi)?;
    let left = derivative_at_zero(&tn, Side::Left)?;
    let right = derivative_at_zero(&tn, Side::Right)?;
    for (side, s) in [("left", &left), ("right", &right)] {
        if !s.is_positive() {
            let i = tn.segment_index(&Rational::zero(), side == "left");
            return Err(Error::Precondition(format!(
                "strictly-increasing: Tn has slope {s} on the flat segment [{}, {}]",
                tn.knots[i],
                tn.knots[i + 1]
            )));
        }
    }
    let tn0 = tn.value_at_0().expect("0 is interior");
    let b0 = left.clone();
    let eps = Rational::new(1, 1000);
    let above = &b0 + &eps;
    let one = Rational::one();

    let query = |w: ToricWeight| {
        JumpingQuery::new(
            Numerator::Monomial(reference.f0().clone()),
            reference.twist().cloned(),
            w,
        )
    };
    let jump_u = jumping_number(&query(u.clone())?)?;
    let jump_at = |b: &Rational| -> Result<Rational> {
        jumping_number(&query(max_with_scaled(u, v, &one, &b.recip())?)?)
    };
    let jump_half = jump_at(&(&b0 * Rational::new(1, 2)))?;
    let jump_b0 = jump_at(&b0)?;
    let jump_above = jump_at(&above)?;
    let integrable_at = |b: &Rational| -> Result<bool> {
        let w = max_with_scaled(u, v, &tn0, &(&tn0 / b))?;
        is_integrable(&query(w)?, &one)
    };
    Ok(ThresholdReport {
        integrable_at_b0: integrable_at(&b0)?,
        integrable_above: integrable_at(&above)?,
        b0,
        left_derivative: left,
        right_derivative: right,
        tn0,
        epsilon: eps,
        jump_u,
        jump_half,
        jump_b0,
        jump_above,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::q;
    use crate::toric::DiagonalZhouWeight;

    fn w(pieces: &[&[i64]]) -> ToricWeight {
        ToricWeight::from_ints(pieces, Rational::one()).unwrap()
    }

    fn e(v: &[i64]) -> Exponent {
        Exponent::from_ints(v).unwrap()
    }

    #[test]
    fn linear_against_zhou_weight() {
        let phi = DiagonalZhouWeight::from_ints(&[2, 2]).unwrap().as_weight();
        let qy = TianQuery::monomial(e(&[1, 0]), phi, None).unwrap();
        let tn = tian_function(&qy, &q(0, 1), &q(4, 1)).unwrap();
        assert!(tn.breakpoints().is_empty());
        assert_eq!(tn.value_at(&q(0, 1)).unwrap(), q(1, 1));
        assert_eq!(tn.slopes, vec![q(1, 2)]);
        let full = tian_function(&qy, &q(-1, 2), &q(4, 1)).unwrap();
        assert_eq!(derivative_at_zero(&full, Side::Left).unwrap(), q(1, 2));
        assert_eq!(derivative_at_zero(&full, Side::Right).unwrap(), q(1, 2));
    }

    #[test]
    fn lct_weight_value_at_zero() {
        let qy = TianQuery::monomial(e(&[1, 0]), w(&[&[2, 0], &[0, 3]]), None).unwrap();
        let (lo, hi) = default_range();
        let tn = tian_function(&qy, &q(-1, 2), &hi).unwrap();
        assert_eq!(tn.value_at_0(), Some(q(5, 6)));
        assert!(tn.is_concave());
        assert!(tian_function(&qy, &lo, &hi).is_err());
    }

    #[test]
    fn kinked_tian_function() {
        let qy = TianQuery::monomial(e(&[1, 0]), w(&[&[2, 0], &[1, 1], &[0, 3]]), None).unwrap();
        let tn = tian_function(&qy, &q(-1, 2), &q(2, 1)).unwrap();
        assert_eq!(tn.breakpoints(), &[q(0, 1)]);
        assert_eq!(derivative_at_zero(&tn, Side::Left).unwrap(), q(2, 3));
        assert_eq!(derivative_at_zero(&tn, Side::Right).unwrap(), q(1, 2));
        for k in -4..=16 {
            let t = q(k, 8);
            assert_eq!(tn.value_at(&t).unwrap(), qy.value(&t).unwrap());
        }
        let other = TianQuery::monomial(e(&[0, 1]), w(&[&[1, 0], &[0, 2]]), None).unwrap();
        let tn = tian_function(&other, &q(-1, 2), &q(2, 1)).unwrap();
        assert!(derivative_at_zero(&tn, Side::Left).unwrap() >= derivative_at_zero(&tn, Side::Right).unwrap());
    }

    #[test]
    fn zero_must_be_interior() {
        let qy = TianQuery::monomial(e(&[1, 0]), w(&[&[2, 0], &[0, 2]]), None).unwrap();
        let tn = tian_function(&qy, &q(0, 1), &q(1, 1)).unwrap();
        assert!(derivative_at_zero(&tn, Side::Left).is_err());
    }

    #[test]
    fn threshold_examples() {
        let r = ReferencePair::trivial(2);
        let phi = DiagonalZhouWeight::from_ints(&[2, 2]).unwrap().as_weight();
        let rep = threshold_b0(&phi, &ToricWeight::coordinate(2, 0), &r).unwrap();
        assert_eq!(rep.b0, q(1, 2));
        assert!(rep.passed());
        let rep = threshold_b0(&phi, &phi, &r).unwrap();
        assert_eq!(rep.b0, q(1, 1));
        assert!(rep.passed());
        let p = DiagonalZhouWeight::new(vec![q(3, 1), q(3, 2)]).unwrap().as_weight();
        let rep = threshold_b0(&p, &ToricWeight::coordinate(2, 1), &r).unwrap();
        assert_eq!(rep.b0, q(2, 3));
        assert!(rep.passed());
        let kinked = w(&[&[2, 0], &[1, 1], &[0, 3]]);
        let rep = threshold_b0(&kinked, &ToricWeight::coordinate(2, 0), &r).unwrap();
        assert_eq!(rep.b0, q(2, 3));
        assert!(rep.passed());
    }

    #[test]
    fn flat_direction_is_rejected() {
        let r = ReferencePair::trivial(2);
        let phi = DiagonalZhouWeight::from_ints(&[2, 2]).unwrap().as_weight();
        assert!(matches!(
            threshold_b0(&phi, &ToricWeight::zero(2), &r),
            Err(Error::Precondition(_))
        ));
    }
}
