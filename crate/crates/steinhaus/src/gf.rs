//! Exact arithmetic in the prime field GF(p) for odd p, with elements
//! identified with the canonical representatives {0, ..., p-1}.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::Error;

/// An odd prime modulus, validated at construction.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Prime(u64);

impl Prime {
    /// Accepts odd primes only; 2 is rejected because the permutation
    /// characterization divides by 2 mod p.
    pub fn new(p: u64) -> Result<Self, Error> {
        if p < 3 || p % 2 == 0 || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// The multiplicative inverse of 2, i.e. (p+1)/2.
    pub fn half(self) -> FpElement {
        FpElement {
            value: (self.0 + 1) / 2,
            modulus: self,
        }
    }

    pub fn element(self, value: i64) -> FpElement {
        FpElement::new(value, self)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Deterministic trial division; the moduli in play are tiny.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of GF(p) stored as its canonical representative in [0, p).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FpElement {
    value: u64,
    modulus: Prime,
}

/// Canonical representative of `v` modulo `m`, for any sign of `v`.
pub(crate) fn reduce(v: i64, m: u64) -> u64 {
    let m = m as i64;
    (v.rem_euclid(m)) as u64
}

impl FpElement {
    pub fn new(value: i64, p: Prime) -> Self {
        FpElement {
            value: reduce(value, p.get()),
            modulus: p,
        }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> Prime {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inverse(self) -> Result<Self, Error> {
        if self.value == 0 {
            return Err(Error::NotInvertible(self.modulus.get()));
        }
        let p = self.modulus.get() as i64;
        let (mut r0, mut r1) = (p, self.value as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Ok(FpElement::new(s0, self.modulus))
    }

    /// Square roots of `self`: `{r, p-r}` with the smaller root first,
    /// `{0}` for zero, empty for a non-residue. Found by direct scan;
    /// every modulus this crate targets is far below 10^4.
    pub fn square_roots(self) -> Vec<FpElement> {
        let p = self.modulus.get();
        if self.value == 0 {
            return vec![FpElement::new(0, self.modulus)];
        }
        for r in 1..=(p - 1) / 2 {
            if r * r % p == self.value {
                return vec![
                    FpElement::new(r as i64, self.modulus),
                    FpElement::new((p - r) as i64, self.modulus),
                ];
            }
        }
        Vec::new()
    }
}

impl fmt::Display for FpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FpElement {
    type Output = FpElement;
    fn add(self, rhs: FpElement) -> FpElement {
        assert_eq!(self.modulus, rhs.modulus, "mixed moduli");
        FpElement {
            value: (self.value + rhs.value) % self.modulus.get(),
            modulus: self.modulus,
        }
    }
}

impl Sub for FpElement {
    type Output = FpElement;
    fn sub(self, rhs: FpElement) -> FpElement {
        assert_eq!(self.modulus, rhs.modulus, "mixed moduli");
        let p = self.modulus.get();
        FpElement {
            value: (self.value + p - rhs.value) % p,
            modulus: self.modulus,
        }
    }
}

impl Mul for FpElement {
    type Output = FpElement;
    fn mul(self, rhs: FpElement) -> FpElement {
        assert_eq!(self.modulus, rhs.modulus, "mixed moduli");
        FpElement {
            value: self.value * rhs.value % self.modulus.get(),
            modulus: self.modulus,
        }
    }
}

impl Neg for FpElement {
    type Output = FpElement;
    fn neg(self) -> FpElement {
        let p = self.modulus.get();
        FpElement {
            value: (p - self.value) % p,
            modulus: self.modulus,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn prime_validation() {
        assert!(Prime::new(3).is_ok());
        assert!(Prime::new(31).is_ok());
        assert!(matches!(Prime::new(2), Err(Error::NotOddPrime(2))));
        assert!(matches!(Prime::new(9), Err(Error::NotOddPrime(9))));
        assert!(matches!(Prime::new(1), Err(Error::NotOddPrime(1))));
        assert!(matches!(Prime::new(0), Err(Error::NotOddPrime(0))));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(p(3).element(2).inverse().unwrap().value(), 2);
        assert_eq!(p(7).element(3).inverse().unwrap().value(), 5);
        assert!(matches!(
            p(5).element(0).inverse(),
            Err(Error::NotInvertible(5))
        ));
    }

    #[test]
    fn inverse_is_involutive() {
        for q in [3u64, 5, 7, 11, 13] {
            let pr = p(q);
            for a in 1..q {
                let e = pr.element(a as i64);
                let inv = e.inverse().unwrap();
                assert_eq!((e * inv).value(), 1);
                assert_eq!(inv.inverse().unwrap(), e);
            }
        }
    }

    #[test]
    fn sqrt_examples() {
        let roots = p(7).element(4).square_roots();
        assert_eq!(
            roots.iter().map(|r| r.value()).collect::<Vec<_>>(),
            vec![2, 5]
        );
        assert!(p(5).element(3).square_roots().is_empty());
        let zero = p(11).element(0).square_roots();
        assert_eq!(zero.len(), 1);
        assert_eq!(zero[0].value(), 0);
    }

    #[test]
    fn sqrt_exhaustive_small_primes() {
        // every returned root squares back; residues (with 0) number (p+1)/2
        for q in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97] {
            let pr = p(q);
            let mut with_roots = 0;
            for a in 0..q {
                let roots = pr.element(a as i64).square_roots();
                for r in &roots {
                    assert_eq!(r.value() * r.value() % q, a);
                }
                if !roots.is_empty() {
                    with_roots += 1;
                }
            }
            assert_eq!(with_roots, (q + 1) / 2);
        }
    }

    #[test]
    fn half_is_inverse_of_two() {
        for q in [3u64, 5, 7, 11] {
            let pr = p(q);
            assert_eq!((pr.half() * pr.element(2)).value(), 1);
        }
    }

    #[test]
    fn reduce_is_canonical() {
        assert_eq!(reduce(-1, 3), 2);
        assert_eq!(reduce(-7, 3), 2);
        assert_eq!(reduce(7, 3), 1);
        assert_eq!(reduce(0, 5), 0);
    }
}
