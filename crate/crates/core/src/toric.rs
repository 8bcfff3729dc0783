//! Toric plurisubharmonic germs `c·log max_β |z^β|` and their tropical algebra.
//!
//! In log coordinates `u_j = -log|z_j| >= 0` a weight is `-h(u)` with
//! `h(u) = c·min_β <β,u>`, a concave, homogeneous piecewise-linear function.
//! Every germ statement "up to O(1)" becomes an exact statement about the
//! Newton polyhedron of the scaled pieces.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrability::{jumping_number, JumpingQuery};
use crate::lattice::lp::{lp_solve, LinearProgram, LpOutcome};
use crate::lattice::{Exponent, NewtonPolyhedron, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ToricWeight {
    pieces: Vec<Exponent>,
    scale: Rational,
}

impl ToricWeight {
    /// Builds `scale·log max |z^β|`, reducing the pieces to the vertices of
    /// their Newton polyhedron.
    pub fn new(pieces: Vec<Exponent>, scale: Rational) -> Result<ToricWeight> {
        let Some(first) = pieces.first() else {
            return Err(Error::validation("toric weight needs at least one piece"));
        };
        let dim = first.dim();
        for p in &pieces {
            p.check_dim(dim, "toric weight piece")?;
        }
        if !scale.is_positive() {
            return Err(Error::validation(format!("weight scale must be positive, got {scale}")));
        }
        let poly = NewtonPolyhedron::new(dim, pieces)?;
        let mut pieces = poly.vertices().to_vec();
        let mut scale = scale;
        if pieces.len() == 1 && pieces[0].is_zero() {
            scale = Rational::one();
        }
        pieces.sort();
        Ok(ToricWeight { pieces, scale })
    }

    pub fn from_ints(pieces: &[&[i64]], scale: Rational) -> Result<ToricWeight> {
        let ps = pieces
            .iter()
            .map(|p| Exponent::from_ints(p))
            .collect::<Result<Vec<_>>>()?;
        ToricWeight::new(ps, scale)
    }

    /// `log|z^β|`
    pub fn monomial(beta: Exponent) -> ToricWeight {
        ToricWeight {
            pieces: vec![beta],
            scale: Rational::one(),
        }
    }

    /// The weight `0`, i.e. `log|z^0|`.
    pub fn zero(dim: usize) -> ToricWeight {
        ToricWeight::monomial(Exponent::zero(dim))
    }

    /// `log|z_j|`
    pub fn coordinate(dim: usize, j: usize) -> ToricWeight {
        ToricWeight::monomial(Exponent::unit(dim, j))
    }

    /// `log max_j |z_j|`, the pole of the Lelong number.
    pub fn max_norm(dim: usize) -> ToricWeight {
        ToricWeight {
            pieces: (0..dim).rev().map(|j| Exponent::unit(dim, j)).collect(),
            scale: Rational::one(),
        }
    }

    pub fn dim(&self) -> usize {
        self.pieces[0].dim()
    }

    pub fn pieces(&self) -> &[Exponent] {
        &self.pieces
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.len() == 1 && self.pieces[0].is_zero()
    }

    /// Pieces with the scale folded in.
    pub fn scaled_pieces(&self) -> Vec<Exponent> {
        self.pieces.iter().map(|p| p.scaled(&self.scale)).collect()
    }

    /// Same germ with scale folded into the pieces.
    pub fn normalized(&self) -> ToricWeight {
        ToricWeight {
            pieces: self.scaled_pieces(),
            scale: Rational::one(),
        }
    }

    /// `s·self` for `s >= 0`; `s = 0` gives the zero weight.
    pub fn scaled(&self, s: &Rational) -> Result<ToricWeight> {
        if s.is_negative() {
            return Err(Error::validation("weights can only be scaled by s >= 0"));
        }
        if s.is_zero() || self.is_zero() {
            return Ok(ToricWeight::zero(self.dim()));
        }
        Ok(ToricWeight {
            pieces: self.pieces.clone(),
            scale: &self.scale * s,
        })
    }

    /// `h(u) = c·min_β <β,u>`; the weight's value at `u` is `-h(u)`.
    pub fn h(&self, u: &[Rational]) -> Rational {
        let m = self.pieces.iter().map(|p| p.dot(u)).min().expect("nonempty");
        &self.scale * m
    }

    pub fn h_f64(&self, u: &[f64]) -> f64 {
        let m = self
            .pieces
            .iter()
            .map(|p| p.dot_f64(u))
            .fold(f64::INFINITY, f64::min);
        self.scale.to_f64() * m
    }

    /// Value at a point `z` of the punctured polydisc, given by `|z_j|`.
    pub fn eval_abs(&self, z_abs: &[f64]) -> f64 {
        let u: Vec<f64> = z_abs.iter().map(|x| -x.ln()).collect();
        -self.h_f64(&u)
    }

    /// `self <= other + O(1)` near the origin.
    pub fn germ_le(&self, other: &ToricWeight) -> Result<bool> {
        check_same_dim(self, other)?;
        let poly = NewtonPolyhedron::new(other.dim(), other.scaled_pieces())?;
        for p in self.scaled_pieces() {
            if !poly.contains(&p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality up to a bounded term: same reduced scaled vertex set.
    pub fn germ_eq(&self, other: &ToricWeight) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let mut a = self.scaled_pieces();
        let mut b = other.scaled_pieces();
        a.sort();
        b.sort();
        a == b
    }

    pub fn germ_cmp(&self, other: &ToricWeight) -> Result<GermOrder> {
        let le = self.germ_le(other)?;
        let ge = other.germ_le(self)?;
        Ok(GermOrder::from_flags(le, ge))
    }
}

fn check_same_dim(a: &ToricWeight, b: &ToricWeight) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::dim_mismatch("toric weights", a.dim(), b.dim()));
    }
    Ok(())
}

/// Order of germs under `<= + O(1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GermOrder {
    Equal,
    Less,
    Greater,
    Incomparable,
}

impl GermOrder {
    fn from_flags(le: bool, ge: bool) -> GermOrder {
        match (le, ge) {
            (true, true) => GermOrder::Equal,
            (true, false) => GermOrder::Less,
            (false, true) => GermOrder::Greater,
            (false, false) => GermOrder::Incomparable,
        }
    }
}

impl fmt::Display for ToricWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale != Rational::one() {
            write!(f, "{}*", self.scale)?;
        }
        let parts: Vec<String> = self.pieces.iter().map(|p| format!("|z^{p}|")).collect();
        if parts.len() == 1 {
            write!(f, "log{}", parts[0])
        } else {
            write!(f, "log max({})", parts.join(", "))
        }
    }
}

impl fmt::Debug for ToricWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Shorthand `2,0;0,3` for pieces, optionally prefixed by a scale: `3/2:2,0;0,3`.
impl FromStr for ToricWeight {
    type Err = Error;
    fn from_str(s: &str) -> Result<ToricWeight> {
        let s = s.trim();
        let (scale, body) = match s.split_once(':') {
            Some((c, rest)) => (c.parse::<Rational>()?, rest),
            None => (Rational::one(), s),
        };
        let pieces = body
            .split(';')
            .filter(|p| !p.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Exponent>>>()?;
        ToricWeight::new(pieces, scale)
    }
}

impl<'de> Deserialize<'de> for ToricWeight {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            pieces: Vec<Exponent>,
            #[serde(default = "Rational::one")]
            scale: Rational,
        }
        let raw = Raw::deserialize(d)?;
        ToricWeight::new(raw.pieces, raw.scale).map_err(serde::de::Error::custom)
    }
}

/// `s·Φ_a` with `Φ_a = log max_j |z_j|^{a_j}` and `Σ 1/a_j = 1`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DiagonalZhouWeight {
    a: Vec<Rational>,
    scale: Rational,
}

impl DiagonalZhouWeight {
    pub fn new(a: Vec<Rational>) -> Result<DiagonalZhouWeight> {
        validate_direction(&a)?;
        let total: Rational = a.iter().map(Rational::recip).sum();
        if total != Rational::one() {
            return Err(Error::validation(format!(
                "diagonal Zhou weight needs sum of 1/a_j = 1, got {total}"
            )));
        }
        Ok(DiagonalZhouWeight {
            a,
            scale: Rational::one(),
        })
    }

    pub fn from_ints(a: &[i64]) -> Result<DiagonalZhouWeight> {
        DiagonalZhouWeight::new(a.iter().map(|&x| Rational::from_integer(x)).collect())
    }

    pub(crate) fn with_scale(&self, scale: Rational) -> DiagonalZhouWeight {
        debug_assert!(scale.is_positive());
        DiagonalZhouWeight {
            a: self.a.clone(),
            scale,
        }
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[Rational] {
        &self.a
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn max_a(&self) -> Rational {
        self.a.iter().cloned().fold(Rational::zero(), Rational::max)
    }

    pub fn as_weight(&self) -> ToricWeight {
        let n = self.dim();
        let pieces = (0..n)
            .map(|j| Exponent::unit(n, j).scaled(&self.a[j]))
            .collect();
        ToricWeight::new(pieces, self.scale.clone()).expect("diagonal pieces are valid")
    }

    /// `h(u) = s·min_j a_j u_j`.
    pub fn h(&self, u: &[Rational]) -> Rational {
        let m = self
            .a
            .iter()
            .zip(u)
            .map(|(a, x)| a * x)
            .min()
            .expect("nonempty");
        &self.scale * m
    }

    pub fn eval_abs(&self, z_abs: &[f64]) -> f64 {
        let m = self
            .a
            .iter()
            .zip(z_abs)
            .map(|(a, z)| a.to_f64() * z.ln())
            .fold(f64::NEG_INFINITY, f64::max);
        self.scale.to_f64() * m
    }
}

impl fmt::Display for DiagonalZhouWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.a.iter().map(Rational::to_string).collect();
        if self.scale != Rational::one() {
            write!(f, "{}*", self.scale)?;
        }
        write!(f, "Phi_({})", parts.join(","))
    }
}

impl fmt::Debug for DiagonalZhouWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'de> Deserialize<'de> for DiagonalZhouWeight {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            a: Vec<Rational>,
            #[serde(default = "Rational::one")]
            scale: Rational,
        }
        let raw = Raw::deserialize(d)?;
        if !raw.scale.is_positive() {
            return Err(serde::de::Error::custom("scale must be positive"));
        }
        let phi = DiagonalZhouWeight::new(raw.a).map_err(serde::de::Error::custom)?;
        Ok(phi.with_scale(raw.scale))
    }
}

fn validate_direction(a: &[Rational]) -> Result<()> {
    if a.is_empty() {
        return Err(Error::validation("direction must have dimension >= 1"));
    }
    if let Some(bad) = a.iter().find(|x| !x.is_positive()) {
        return Err(Error::validation(format!(
            "direction entries must be positive, got {bad}"
        )));
    }
    Ok(())
}

/// Rescales a positive vector onto `Σ 1/a_j = 1` by `a_j ↦ a_j·Σ_k 1/a_k`.
pub fn project_direction(a: &[Rational]) -> Result<Vec<Rational>> {
    validate_direction(a)?;
    let total: Rational = a.iter().map(Rational::recip).sum();
    Ok(a.iter().map(|x| x * &total).collect())
}

/// The reference density `|z^{f0}|² e^{-2φ₀}` a Zhou weight is built against.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ReferencePair {
    f0: Exponent,
    phi0: ToricWeight,
}

impl ReferencePair {
    /// Checks that the reference density is integrable near the origin.
    pub fn new(f0: Exponent, phi0: ToricWeight) -> Result<ReferencePair> {
        f0.check_dim(phi0.dim(), "reference pair")?;
        if !f0.is_integral() {
            return Err(Error::validation("reference monomial must have integer exponents"));
        }
        if !phi0.is_zero() {
            let c = jumping_number(&JumpingQuery::monomial(f0.clone(), phi0.clone())?)?;
            if c <= Rational::one() {
                return Err(Error::Domain(format!(
                    "|z^{f0}|^2 e^(-2 phi0) is not integrable near the origin (threshold {c})"
                )));
            }
        }
        Ok(ReferencePair { f0, phi0 })
    }

    /// The reference `1`.
    pub fn trivial(dim: usize) -> ReferencePair {
        ReferencePair {
            f0: Exponent::zero(dim),
            phi0: ToricWeight::zero(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.f0.dim()
    }

    pub fn f0(&self) -> &Exponent {
        &self.f0
    }

    pub fn phi0(&self) -> &ToricWeight {
        &self.phi0
    }

    pub fn twist(&self) -> Option<&ToricWeight> {
        if self.phi0.is_zero() {
            None
        } else {
            Some(&self.phi0)
        }
    }
}

impl<'de> Deserialize<'de> for ReferencePair {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            f0: Exponent,
            phi0: Option<ToricWeight>,
        }
        let raw = Raw::deserialize(d)?;
        let phi0 = raw.phi0.unwrap_or_else(|| ToricWeight::zero(raw.f0.dim()));
        ReferencePair::new(raw.f0, phi0).map_err(serde::de::Error::custom)
    }
}

/// `w1 + w2`: Minkowski sum of the scaled pieces.
pub fn weight_sum(w1: &ToricWeight, w2: &ToricWeight) -> Result<ToricWeight> {
    check_same_dim(w1, w2)?;
    let a = w1.scaled_pieces();
    let b = w2.scaled_pieces();
    let mut pieces = Vec::with_capacity(a.len() * b.len());
    for x in &a {
        for y in &b {
            pieces.push(x.add(y));
        }
    }
    ToricWeight::new(pieces, Rational::one())
}

/// `max{w1, w2}`: union of the scaled pieces.
pub fn weight_max(w1: &ToricWeight, w2: &ToricWeight) -> Result<ToricWeight> {
    check_same_dim(w1, w2)?;
    let mut pieces = w1.scaled_pieces();
    pieces.extend(w2.scaled_pieces());
    ToricWeight::new(pieces, Rational::one())
}

/// `σ(ψ, sΦ_a) = (c/s)·min_β Σ_j β_j/a_j`.
pub fn relative_type(psi: &ToricWeight, phi: &DiagonalZhouWeight) -> Result<Rational> {
    if psi.dim() != phi.dim() {
        return Err(Error::dim_mismatch("relative type", psi.dim(), phi.dim()));
    }
    let inv: Vec<Rational> = phi.a().iter().map(Rational::recip).collect();
    let m = psi.pieces().iter().map(|b| b.dot(&inv)).min().expect("nonempty");
    Ok(psi.scale() * m / phi.scale())
}

/// `σ(ψ, φ)` for an arbitrary nonzero toric `φ`: the minimum of `h_ψ` on
/// `{h_φ >= 1}`, one LP per piece of `ψ`.
pub fn relative_type_general(psi: &ToricWeight, phi: &ToricWeight) -> Result<Rational> {
    check_same_dim(psi, phi)?;
    if phi.is_zero() {
        return Err(Error::validation("relative type against the zero weight is undefined"));
    }
    if psi.is_zero() {
        return Ok(Rational::zero());
    }
    let region: Vec<Vec<Rational>> = phi
        .pieces()
        .iter()
        .map(|b| b.scaled(phi.scale()).coords().to_vec())
        .collect();
    let mut best: Option<Rational> = None;
    for beta in psi.pieces() {
        let mut lp = LinearProgram::minimize(beta.coords().to_vec());
        for row in &region {
            lp.push_geq(row.clone(), Rational::one());
        }
        match lp_solve(&lp)? {
            LpOutcome::Optimal(o) => {
                let v = psi.scale() * o.value;
                best = Some(best.map_or(v.clone(), |b| b.min(v)));
            }
            other => {
                return Err(Error::Verification {
                    check: "relative-type-lp".into(),
                    detail: format!("unexpected LP status {}", other.status()),
                })
            }
        }
    }
    Ok(best.expect("nonempty"))
}

/// `ν(ψ, o) = c·min_β Σ_j β_j`.
pub fn lelong_number(psi: &ToricWeight) -> Rational {
    let m = psi.pieces().iter().map(Exponent::sum).min().expect("nonempty");
    psi.scale() * m
}

/// Kiselman number against the pole `log max_j |z_j|^{1/a_j}`: `c·min_β Σ a_j β_j`.
pub fn kiselman_number(psi: &ToricWeight, a: &[Rational]) -> Result<Rational> {
    validate_direction(a)?;
    if a.len() != psi.dim() {
        return Err(Error::dim_mismatch("Kiselman direction", a.len(), psi.dim()));
    }
    let m = psi.pieces().iter().map(|b| b.dot(a)).min().expect("nonempty");
    Ok(psi.scale() * m)
}

/// The diagonal Zhou weight related to `ref` in direction `a`: `s·Φ_a` with
/// `s` the jumping number of the reference against `Φ_a`.
pub fn zhou_weight_for(reference: &ReferencePair, a: &[Rational]) -> Result<DiagonalZhouWeight> {
    let phi = DiagonalZhouWeight::new(a.to_vec())?;
    if phi.dim() != reference.dim() {
        return Err(Error::dim_mismatch("zhou_weight_for", phi.dim(), reference.dim()));
    }
    let query = JumpingQuery::new(
        crate::integrability::Numerator::Monomial(reference.f0().clone()),
        reference.twist().cloned(),
        phi.as_weight(),
    )?;
    let s = jumping_number(&query)?;
    if !s.is_positive() {
        return Err(Error::Domain(format!("reference threshold {s} is not positive")));
    }
    Ok(phi.with_scale(s))
}

/// Orders two diagonal Zhou weights by their values on coordinate monomials.
pub fn compare_zhou(phi1: &DiagonalZhouWeight, phi2: &DiagonalZhouWeight) -> Result<GermOrder> {
    if phi1.dim() != phi2.dim() {
        return Err(Error::dim_mismatch("compare_zhou", phi1.dim(), phi2.dim()));
    }
    let n = phi1.dim();
    let mut le = true;
    let mut ge = true;
    for j in 0..n {
        let zj = ToricWeight::coordinate(n, j);
        // σ(log|z_j|, φ1) <= σ(log|z_j|, φ2) for all j  ⟺  φ1 <= φ2 + O(1)
        match relative_type(&zj, phi1)?.cmp(&relative_type(&zj, phi2)?) {
            Ordering::Less => ge = false,
            Ordering::Greater => le = false,
            Ordering::Equal => {}
        }
    }
    Ok(GermOrder::from_flags(le, ge))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::q;

    fn w(pieces: &[&[i64]]) -> ToricWeight {
        ToricWeight::from_ints(pieces, Rational::one()).unwrap()
    }

    fn phi(a: &[Rational]) -> DiagonalZhouWeight {
        DiagonalZhouWeight::new(a.to_vec()).unwrap()
    }

    #[test]
    fn sums() {
        let s = weight_sum(&w(&[&[1, 0]]), &w(&[&[0, 1]])).unwrap();
        assert_eq!(s.pieces(), &[Exponent::from_ints(&[1, 1]).unwrap()]);
        let s = weight_sum(&w(&[&[2, 0], &[0, 2]]), &w(&[&[1, 0]])).unwrap();
        assert!(s.germ_eq(&w(&[&[3, 0], &[1, 2]])));
        let base = w(&[&[2, 1], &[0, 3]]);
        assert!(weight_sum(&base, &ToricWeight::zero(2)).unwrap().germ_eq(&base));
    }

    #[test]
    fn maxima() {
        let m = weight_max(&w(&[&[1, 0]]), &w(&[&[0, 1]])).unwrap();
        assert!(m.germ_eq(&w(&[&[1, 0], &[0, 1]])));
        let m = weight_max(&w(&[&[2, 0]]), &w(&[&[1, 0]])).unwrap();
        assert!(m.germ_eq(&w(&[&[1, 0]])));
        let p = DiagonalZhouWeight::from_ints(&[2, 2]).unwrap().as_weight();
        let m = weight_max(&p, &w(&[&[1, 0]])).unwrap();
        assert!(m.germ_eq(&w(&[&[1, 0], &[0, 2]])));
    }

    #[test]
    fn relative_types() {
        let p22 = phi(&[q(2, 1), q(2, 1)]);
        assert_eq!(relative_type(&w(&[&[1, 1]]), &p22).unwrap(), q(1, 1));
        assert_eq!(relative_type(&p22.as_weight(), &p22).unwrap(), q(1, 1));
        assert_eq!(relative_type(&w(&[&[1, 0], &[0, 3]]), &p22).unwrap(), q(1, 2));
        let p = phi(&[q(3, 1), q(3, 2)]);
        assert_eq!(relative_type(&p.as_weight(), &p).unwrap(), q(1, 1));
        // general LP agrees with the closed form
        let psi = w(&[&[1, 0], &[0, 3]]);
        assert_eq!(relative_type_general(&psi, &p22.as_weight()).unwrap(), q(1, 2));
    }

    #[test]
    fn lelong_and_kiselman() {
        let ones = [q(1, 1), q(1, 1)];
        assert_eq!(kiselman_number(&w(&[&[2, 1]]), &ones).unwrap(), q(3, 1));
        assert_eq!(lelong_number(&w(&[&[2, 1]])), q(3, 1));
        let a = [q(1, 1), q(3, 1)];
        assert_eq!(kiselman_number(&w(&[&[1, 0], &[0, 1]]), &a).unwrap(), q(1, 1));
        assert_eq!(kiselman_number(&w(&[&[0, 1]]), &a).unwrap(), q(3, 1));
        assert!(kiselman_number(&w(&[&[0, 1]]), &[q(0, 1), q(1, 1)]).is_err());
    }

    #[test]
    fn zhou_weights_for_references() {
        let a = [q(2, 1), q(2, 1)];
        let z = zhou_weight_for(&ReferencePair::trivial(2), &a).unwrap();
        assert_eq!(z.scale(), &q(1, 1));
        let r = ReferencePair::new(Exponent::from_ints(&[1, 0]).unwrap(), ToricWeight::zero(2)).unwrap();
        assert_eq!(zhou_weight_for(&r, &a).unwrap().scale(), &q(3, 2));
        // e^{-2φ₀} = |z_1|^{-1}: threshold min u1/2 + u2 on {2u >= 1} = 3/4
        let half = ToricWeight::new(vec![Exponent::from_ints(&[1, 0]).unwrap()], q(1, 2)).unwrap();
        let r = ReferencePair::new(Exponent::zero(2), half).unwrap();
        assert_eq!(zhou_weight_for(&r, &a).unwrap().scale(), &q(3, 4));
        assert!(zhou_weight_for(&r, &[q(2, 1), q(3, 1)]).is_err());
    }

    #[test]
    fn non_integrable_reference_is_rejected() {
        let bad = ToricWeight::coordinate(2, 0);
        assert!(matches!(
            ReferencePair::new(Exponent::zero(2), bad),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn zhou_comparison() {
        let p = phi(&[q(2, 1), q(2, 1)]);
        let r = phi(&[q(3, 1), q(3, 2)]);
        assert_eq!(compare_zhou(&p, &p).unwrap(), GermOrder::Equal);
        assert_eq!(compare_zhou(&p, &r).unwrap(), GermOrder::Incomparable);
        assert_eq!(p.as_weight().germ_cmp(&r.as_weight()).unwrap(), GermOrder::Incomparable);
    }

    #[test]
    fn shorthand_and_json() {
        let x: ToricWeight = "3/2:2,0;0,2;4,4".parse().unwrap();
        assert_eq!(x.pieces().len(), 2);
        assert_eq!(x.scale(), &q(3, 2));
        let s = serde_json::to_string(&x).unwrap();
        let back: ToricWeight = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        let d: DiagonalZhouWeight = serde_json::from_str(r#"{"a":["2/1","2/1"]}"#).unwrap();
        assert_eq!(d, phi(&[q(2, 1), q(2, 1)]));
        assert!(serde_json::from_str::<DiagonalZhouWeight>(r#"{"a":["2/1","3/1"]}"#).is_err());
    }

    #[test]
    fn projection() {
        let a = project_direction(&[q(1, 1), q(1, 1)]).unwrap();
        assert_eq!(a, vec![q(2, 1), q(2, 1)]);
        assert!(DiagonalZhouWeight::new(a).is_ok());
    }
}
