//! Coweights: the values of the building's vector distance.

use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Flavor {
    GL,
    SL,
    PGL,
}

/// A weakly decreasing integer tuple. PGL coweights compare modulo (1, ..., 1).
#[derive(Clone, Debug, Eq, Hash, Serialize, Deserialize)]
pub struct Coweight {
    entries: Vec<i64>,
    flavor: Flavor,
}

impl PartialEq for Coweight {
    fn eq(&self, o: &Self) -> bool {
        if self.flavor == Flavor::PGL || o.flavor == Flavor::PGL {
            let n = self.entries.len();
            n == o.entries.len()
                && (n == 0 || {
                    let shift = self.entries[0] - o.entries[0];
                    self.entries.iter().zip(&o.entries).all(|(a, b)| a - b == shift)
                })
        } else {
            self.entries == o.entries
        }
    }
}

impl Coweight {
    pub fn new(entries: Vec<i64>, flavor: Flavor) -> Result<Self> {
        if entries.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!("{entries:?} is not dominant")));
        }
        if flavor == Flavor::SL && entries.iter().sum::<i64>() != 0 {
            return Err(Error::InvalidArgument(format!("{entries:?} does not sum to zero")));
        }
        Ok(Coweight { entries, flavor })
    }

    /// Sorts into dominant order.
    pub fn dominant(mut entries: Vec<i64>, flavor: Flavor) -> Self {
        entries.sort_unstable_by(|a, b| b.cmp(a));
        Coweight { entries, flavor }
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn total(&self) -> i64 {
        self.entries.iter().sum()
    }

    /// `-w0 mu`: negate and reverse.
    pub fn involution(&self) -> Coweight {
        Coweight {
            entries: self.entries.iter().rev().map(|x| -x).collect(),
            flavor: self.flavor,
        }
    }

    /// `<omega_i, mu>` with the trace removed, so the value lies in (1/n)Z.
    pub fn pair_fundamental(&self, i: usize) -> Rational64 {
        let n = self.n() as i64;
        if i == 0 || i as i64 >= n {
            return Rational64::from_integer(0);
        }
        let prefix: i64 = self.entries[..i].iter().sum();
        Rational64::new(n * prefix - i as i64 * self.total(), n)
    }

    /// `self - other` is a nonnegative combination of positive coroots
    /// (modulo the centre for PGL).
    pub fn dominates(&self, other: &Coweight) -> bool {
        if self.n() != other.n() {
            return false;
        }
        let pgl = self.flavor == Flavor::PGL || other.flavor == Flavor::PGL;
        if !pgl && self.total() != other.total() {
            return false;
        }
        (1..self.n()).all(|i| self.pair_fundamental(i) >= other.pair_fundamental(i))
    }

    pub fn add(&self, o: &Coweight) -> Coweight {
        Coweight::dominant(self.entries.iter().zip(&o.entries).map(|(a, b)| a + b).collect(), self.flavor)
    }
}

impl fmt::Display for Coweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gl(e: &[i64]) -> Coweight {
        Coweight::new(e.to_vec(), Flavor::GL).unwrap()
    }

    #[test]
    fn involution_examples() {
        assert_eq!(gl(&[1, -1]).involution(), gl(&[1, -1]));
        assert_eq!(gl(&[2, 0, 0]).involution(), gl(&[0, 0, -2]));
        assert_eq!(gl(&[0, 0, 0]).involution(), gl(&[0, 0, 0]));
    }

    #[test]
    fn pairings() {
        assert_eq!(gl(&[1, -1]).pair_fundamental(1), Rational64::from_integer(1));
        assert_eq!(gl(&[1, 0, 0]).pair_fundamental(1), Rational64::new(2, 3));
        assert_eq!(gl(&[1, 0, 0]).pair_fundamental(3), Rational64::from_integer(0));
        assert_eq!(gl(&[1, 0, 0]).to_string(), "(1, 0, 0)");
    }

    #[test]
    fn flavors() {
        assert!(Coweight::new(vec![0, 1], Flavor::GL).is_err());
        assert!(Coweight::new(vec![1, 0], Flavor::SL).is_err());
        let a = Coweight::new(vec![2, 1], Flavor::PGL).unwrap();
        assert_eq!(a, Coweight::new(vec![1, 0], Flavor::PGL).unwrap());
        assert!(gl(&[2, 0]).dominates(&gl(&[1, 1])));
        assert!(!gl(&[1, 1]).dominates(&gl(&[2, 0])));
    }

    proptest! {
        #[test]
        fn pairing_identity(mut v in proptest::collection::vec(-5i64..5, 2..6), i in 0usize..6) {
            v.sort_unstable_by(|a, b| b.cmp(a));
            let n = v.len();
            let i = i % (n + 1);
            let mu = Coweight::new(v, Flavor::GL).unwrap();
            prop_assert_eq!(mu.involution().pair_fundamental(n - i), mu.pair_fundamental(i));
            prop_assert_eq!(mu.involution().involution(), mu);
        }
    }
}
