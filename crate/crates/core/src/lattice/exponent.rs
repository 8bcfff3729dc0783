use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::rational::Rational;
use crate::error::{Error, Result};

/// A point of the nonnegative rational orthant: the exponent of a monomial
/// `z^α`, or one linear piece of a tropical function.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Exponent(Vec<Rational>);

impl Exponent {
    pub fn new(coords: Vec<Rational>) -> Result<Exponent> {
        if coords.is_empty() {
            return Err(Error::validation("exponent must have dimension >= 1"));
        }
        if let Some(bad) = coords.iter().find(|c| c.is_negative()) {
            return Err(Error::validation(format!(
                "exponent coordinates must be nonnegative, got {bad}"
            )));
        }
        Ok(Exponent(coords))
    }

    pub fn from_ints(coords: &[i64]) -> Result<Exponent> {
        Exponent::new(coords.iter().map(|&c| Rational::from_integer(c)).collect())
    }

    pub fn from_u32(coords: &[u32]) -> Exponent {
        assert!(!coords.is_empty());
        Exponent(coords.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn zero(dim: usize) -> Exponent {
        assert!(dim >= 1);
        Exponent(vec![Rational::zero(); dim])
    }

    pub fn unit(dim: usize, axis: usize) -> Exponent {
        let mut e = Exponent::zero(dim);
        e.0[axis] = Rational::one();
        e
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(Rational::is_integer)
    }

    /// Integer coordinates, if every coordinate is a (small) integer.
    pub fn to_u32(&self) -> Option<Vec<u32>> {
        self.0
            .iter()
            .map(|c| {
                if c.is_integer() {
                    c.floor_i64().and_then(|v| u32::try_from(v).ok())
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn dot(&self, u: &[Rational]) -> Rational {
        debug_assert_eq!(self.0.len(), u.len());
        self.0.iter().zip(u).map(|(a, b)| a * b).sum()
    }

    pub fn dot_f64(&self, u: &[f64]) -> f64 {
        self.0.iter().zip(u).map(|(a, b)| a.to_f64() * b).sum()
    }

    pub fn scaled(&self, c: &Rational) -> Exponent {
        Exponent(self.0.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        debug_assert_eq!(self.dim(), other.dim());
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise `self >= other`.
    pub fn dominates(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().sum()
    }

    pub(crate) fn check_dim(&self, dim: usize, what: &str) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::dim_mismatch(what, self.dim(), dim));
        }
        Ok(())
    }
}

impl Index<usize> for Exponent {
    type Output = Rational;
    fn index(&self, idx: usize) -> &Rational {
        &self.0[idx]
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Comma separated coordinates, e.g. `1,0` or `1/2,3`.
impl FromStr for Exponent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Exponent> {
        let coords = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .map(str::parse)
            .collect::<Result<Vec<Rational>>>()?;
        Exponent::new(coords)
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<Rational>::deserialize(d)?;
        Exponent::new(coords).map_err(serde::de::Error::custom)
    }
}
