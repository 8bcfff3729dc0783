use std::fmt;

use serde::{Deserialize, Serialize};

use super::exponent::Exponent;
use super::newton::NewtonPolyhedron;
use crate::error::{Error, Result};

/// A monomial ideal of `O_o`, given by its minimal generators.
///
/// Generators are kept componentwise-minimal and sorted, so two ideals are
/// equal exactly when their generator lists are.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MonomialIdeal {
    dim: usize,
    generators: Vec<Vec<u32>>,
}

fn dominates(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

impl MonomialIdeal {
    pub fn new(dim: usize, generators: Vec<Vec<u32>>) -> Result<MonomialIdeal> {
        if dim == 0 {
            return Err(Error::validation("ideal dimension must be >= 1"));
        }
        if generators.is_empty() {
            return Err(Error::validation("ideal needs at least one generator"));
        }
        for g in &generators {
            if g.len() != dim {
                return Err(Error::dim_mismatch("ideal generator", g.len(), dim));
            }
        }
        Ok(MonomialIdeal {
            dim,
            generators: reduce(generators),
        })
    }

    /// Builds an ideal from generators already known to be an antichain.
    pub(crate) fn from_minimal(dim: usize, mut generators: Vec<Vec<u32>>) -> MonomialIdeal {
        generators.sort();
        debug_assert!(!generators.is_empty());
        MonomialIdeal { dim, generators }
    }

    /// The unit ideal `O_o`.
    pub fn unit(dim: usize) -> MonomialIdeal {
        MonomialIdeal::from_minimal(dim, vec![vec![0; dim]])
    }

    /// The maximal ideal `(z_1, ..., z_n)`.
    pub fn maximal(dim: usize) -> MonomialIdeal {
        let gens = (0..dim)
            .map(|j| {
                let mut g = vec![0; dim];
                g[j] = 1;
                g
            })
            .collect();
        MonomialIdeal::from_minimal(dim, gens)
    }

    pub fn principal(g: &[u32]) -> Result<MonomialIdeal> {
        MonomialIdeal::new(g.len(), vec![g.to_vec()])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<u32>] {
        &self.generators
    }

    pub fn exponents(&self) -> Vec<Exponent> {
        self.generators.iter().map(|g| Exponent::from_u32(g)).collect()
    }

    pub fn is_unit(&self) -> bool {
        self.generators.len() == 1 && self.generators[0].iter().all(|&x| x == 0)
    }

    /// `z^alpha` lies in the ideal.
    pub fn contains(&self, alpha: &[u32]) -> bool {
        self.generators.iter().any(|g| dominates(alpha, g))
    }

    pub fn is_subset_of(&self, other: &MonomialIdeal) -> bool {
        self.dim == other.dim && self.generators.iter().all(|g| other.contains(g))
    }

    pub fn newton(&self) -> NewtonPolyhedron {
        NewtonPolyhedron::from_ideal(self)
    }

    /// Membership of `z^alpha` in the integral closure, which is the set of
    /// lattice points of the Newton polyhedron.
    pub fn integral_closure_contains(&self, alpha: &[u32]) -> Result<bool> {
        if alpha.len() != self.dim {
            return Err(Error::dim_mismatch("monomial", alpha.len(), self.dim));
        }
        self.newton().contains(&Exponent::from_u32(alpha))
    }
}

fn reduce(mut gens: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    gens.sort();
    gens.dedup();
    // A dominated generator sorts lexicographically after its dominator.
    let mut kept: Vec<Vec<u32>> = Vec::with_capacity(gens.len());
    for g in gens {
        if !kept.iter().any(|k| dominates(&g, k)) {
            kept.push(g);
        }
    }
    kept
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let parts: Vec<String> = g.iter().map(u32::to_string).collect();
            write!(f, "({})", parts.join(","))?;
        }
        write!(f, ">")
    }
}

impl fmt::Debug for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'de> Deserialize<'de> for MonomialIdeal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            dim: usize,
            generators: Vec<Vec<u32>>,
        }
        let raw = Raw::deserialize(d)?;
        MonomialIdeal::new(raw.dim, raw.generators).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_removes_dominated() {
        let i = MonomialIdeal::new(2, vec![vec![2, 1], vec![1, 1], vec![0, 3], vec![1, 1]]).unwrap();
        assert_eq!(i.generators(), &[vec![0, 3], vec![1, 1]]);
        assert!(i.contains(&[5, 1]));
        assert!(!i.contains(&[0, 2]));
    }

    #[test]
    fn json_round_trip() {
        let i = MonomialIdeal::new(2, vec![vec![2, 0], vec![0, 3]]).unwrap();
        let s = serde_json::to_string(&i).unwrap();
        assert_eq!(s, r#"{"dim":2,"generators":[[0,3],[2,0]]}"#);
        let back: MonomialIdeal = serde_json::from_str(&s).unwrap();
        assert_eq!(back, i);
        assert!(serde_json::from_str::<MonomialIdeal>(r#"{"dim":2,"generators":[[1]]}"#).is_err());
    }

    #[test]
    fn integral_closure() {
        let i = MonomialIdeal::new(2, vec![vec![2, 0], vec![0, 2]]).unwrap();
        assert!(!i.contains(&[1, 1]));
        assert!(i.integral_closure_contains(&[1, 1]).unwrap());
        assert!(!i.integral_closure_contains(&[1, 0]).unwrap());
    }
}
