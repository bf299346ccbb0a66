//! Sums of squares: representability predicates and the constructive
//! denominator descent that turns a rational point on an integer sphere
//! into a lattice point of the same norm. All arithmetic here is exact
//! rational over arbitrary-precision integers.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::lattice::IntVec3;
use crate::partial_map::RationalPoint;

/// Ambient dimension for the representability question.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Dimension {
    Two,
    Three,
    FourPlus,
}

/// Whether n is a squared lattice distance in the given dimension:
/// a sum of that many integer squares. Dimension three uses the
/// classical excluded form 4^a (8b + 7); dimension two the condition
/// that primes 3 mod 4 divide n to an even power; four or more squares
/// always suffice.
pub fn is_squared_lattice_distance(n: u64, dim: Dimension) -> bool {
    match dim {
        Dimension::FourPlus => true,
        Dimension::Three => {
            let mut m = n;
            while m % 4 == 0 && m > 0 {
                m /= 4;
            }
            m % 8 != 7
        }
        Dimension::Two => {
            let mut m = n;
            let mut q = 2u64;
            while q * q <= m {
                if m % q == 0 {
                    let mut e = 0;
                    while m % q == 0 {
                        m /= q;
                        e += 1;
                    }
                    if q % 4 == 3 && e % 2 != 0 {
                        return false;
                    }
                }
                q += 1;
            }
            !(m % 4 == 3) // remaining factor is 1 or a prime
        }
    }
}

/// An explicit decomposition of n into k integer squares, by bounded
/// descending search. Entries come back in non-increasing order.
pub fn sum_of_squares_witness(n: u64, k: usize) -> Option<Vec<i64>> {
    fn go(n: u64, k: usize, cap: u64, out: &mut Vec<i64>) -> bool {
        if k == 0 {
            return n == 0;
        }
        let mut a = cap.min(n.isqrt());
        loop {
            // the remaining k squares of size <= a must reach n
            if (a * a) * (k as u64) >= n {
                out.push(a as i64);
                if go(n - a * a, k - 1, a, out) {
                    return true;
                }
                out.pop();
            } else {
                return false;
            }
            if a == 0 {
                return false;
            }
            a -= 1;
        }
    }
    let mut out = Vec::with_capacity(k);
    go(n, k, n.isqrt(), &mut out).then_some(out)
}

/// A rational point lying exactly on the sphere of squared radius n.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SphereRationalPoint {
    point: RationalPoint,
    n_value: u64,
}

impl SphereRationalPoint {
    /// Validates |num|^2 = n * den^2.
    pub fn new(point: RationalPoint, n_value: u64) -> Result<Self, Error> {
        let num = point.num();
        let den = point.den();
        let lhs: i128 = num
            .coords()
            .iter()
            .map(|&c| (c as i128) * (c as i128))
            .sum();
        let rhs = (n_value as i128) * (den as i128) * (den as i128);
        if lhs != rhs {
            return Err(Error::NotOnSphere {
                x: num.x,
                y: num.y,
                z: num.z,
                den,
                n: n_value,
            });
        }
        Ok(SphereRationalPoint { point, n_value })
    }

    pub fn point(&self) -> &RationalPoint {
        &self.point
    }

    pub fn n_value(&self) -> u64 {
        self.n_value
    }
}

/// Nearest integer with ties broken toward negative infinity.
fn nearest_down(q: &BigRational) -> BigInt {
    (q - BigRational::new(BigInt::one(), BigInt::from(2))).ceil().to_integer()
}

fn common_denominator(p: &[BigRational; 3]) -> BigInt {
    p.iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Denominator descent: from a rational point on the sphere of squared
/// radius n to an integer point of squared norm n.
///
/// Each round takes the nearest lattice point Z, draws the line through
/// the current point P and Z, and replaces P by the second intersection
/// of that line with the sphere. Because 0 < |P - Z|^2 <= 3/4, the line
/// is never tangent and the common denominator strictly decreases;
/// both facts are asserted every round. Returns the lattice point and
/// the trail of denominators, the last entry being 1.
pub fn descend_trace(start: &SphereRationalPoint) -> Result<(IntVec3, Vec<BigInt>), Error> {
    let n = BigRational::from_integer(BigInt::from(start.n_value));
    let den0 = BigInt::from(start.point.den());
    let mut p: [BigRational; 3] = {
        let c = start.point.num().coords();
        [
            BigRational::new(BigInt::from(c[0]), den0.clone()),
            BigRational::new(BigInt::from(c[1]), den0.clone()),
            BigRational::new(BigInt::from(c[2]), den0.clone()),
        ]
    };
    let mut trail = vec![common_denominator(&p)];
    while !trail.last().unwrap().is_one() {
        let z: Vec<BigInt> = p.iter().map(nearest_down).collect();
        let diff: Vec<BigRational> = z
            .iter()
            .zip(&p)
            .map(|(zi, pi)| BigRational::from_integer(zi.clone()) - pi)
            .collect();
        let dsq: BigRational = diff.iter().map(|d| d * d).sum();
        assert!(
            dsq.is_positive() && dsq <= BigRational::new(BigInt::from(3), BigInt::from(4)),
            "nearest-point bound violated: |P - Z|^2 = {dsq}"
        );
        let pd: BigRational = p.iter().zip(&diff).map(|(pi, di)| pi * di).sum();
        let t = -BigRational::from_integer(BigInt::from(2)) * &pd / &dsq;
        assert!(!t.is_zero(), "line PZ tangent to the sphere");
        for (pi, di) in p.iter_mut().zip(&diff) {
            *pi += &t * di;
        }
        let check: BigRational = p.iter().map(|q| q * q).sum();
        assert_eq!(check, n, "descent left the sphere");
        let den = common_denominator(&p);
        assert!(
            den < *trail.last().unwrap(),
            "denominator failed to decrease: {den}"
        );
        trail.push(den);
    }
    let v = IntVec3::new(
        int_coord(&p[0])?,
        int_coord(&p[1])?,
        int_coord(&p[2])?,
    );
    debug_assert_eq!(v.norm_sq() as u64, start.n_value);
    Ok((v, trail))
}

fn int_coord(q: &BigRational) -> Result<i64, Error> {
    i64::try_from(q.to_integer()).map_err(|_| Error::Overflow("extracting descent result"))
}

/// As `descend_trace`, returning only the lattice point.
pub fn descend(start: &SphereRationalPoint) -> Result<IntVec3, Error> {
    descend_trace(start).map(|(v, _)| v)
}

/// A seeded rational point on the sphere of squared radius n with
/// denominator above 1, produced by intersecting a random rational
/// line through an integer witness with the sphere. n = 0 yields the
/// origin, the only point of that sphere.
pub fn random_sphere_rational(n: u64, seed: u64) -> Result<SphereRationalPoint, Error> {
    if !is_squared_lattice_distance(n, Dimension::Three) {
        return Err(Error::NotRepresentable(n));
    }
    if n == 0 {
        return SphereRationalPoint::new(
            RationalPoint::new(IntVec3::new(0, 0, 0), 1)?,
            0,
        );
    }
    let w = sum_of_squares_witness(n, 3).expect("checked representable");
    let v = IntVec3::new(w[0], w[1], w[2]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let dir = IntVec3::new(
            rng.gen_range(-9..=9),
            rng.gen_range(-9..=9),
            rng.gen_range(-9..=9),
        );
        if dir.is_zero() {
            continue;
        }
        // second intersection of v + t * dir with the sphere
        let dd = dir.norm_sq();
        let vd = v.dot(dir);
        // t = -2 vd / dd; clear denominators: num = v * dd - 2 vd * dir, den = dd
        let num = v * dd - dir * (2 * vd);
        let pt = RationalPoint::new(num, dd)?.reduced();
        if pt.den() > 1 {
            return SphereRationalPoint::new(pt, n);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn representability_examples() {
        assert!(!is_squared_lattice_distance(7, Dimension::Three));
        assert!(is_squared_lattice_distance(6, Dimension::Three));
        assert_eq!(sum_of_squares_witness(6, 3).unwrap(), vec![2, 1, 1]);
        assert!(is_squared_lattice_distance(7, Dimension::FourPlus));
        assert_eq!(sum_of_squares_witness(7, 4).unwrap(), vec![2, 1, 1, 1]);
        // dimension two: 5 = 1 + 4, 3 and 21 = 3 * 7 excluded
        assert!(is_squared_lattice_distance(5, Dimension::Two));
        assert!(!is_squared_lattice_distance(3, Dimension::Two));
        assert!(!is_squared_lattice_distance(21, Dimension::Two));
        assert!(is_squared_lattice_distance(9, Dimension::Two));
    }

    #[test]
    fn criterion_matches_witness_search() {
        for n in 0..=10_000u64 {
            let by_form = is_squared_lattice_distance(n, Dimension::Three);
            let by_search = sum_of_squares_witness(n, 3).is_some();
            assert_eq!(by_form, by_search, "n = {n}");
            if n <= 500 {
                let two_form = is_squared_lattice_distance(n, Dimension::Two);
                let two_search = sum_of_squares_witness(n, 2).is_some();
                assert_eq!(two_form, two_search, "n = {n} (two squares)");
            }
        }
    }

    #[test]
    fn descend_examples() {
        // already integral
        let p = SphereRationalPoint::new(
            RationalPoint::new(IntVec3::new(1, 2, 3), 1).unwrap(),
            14,
        )
        .unwrap();
        assert_eq!(descend(&p).unwrap(), IntVec3::new(1, 2, 3));

        // (7/3, 2/3, 1/3) on the sphere of squared radius 6
        let p = SphereRationalPoint::new(
            RationalPoint::new(IntVec3::new(7, 2, 1), 3).unwrap(),
            6,
        )
        .unwrap();
        let (v, trail) = descend_trace(&p).unwrap();
        assert_eq!(v.norm_sq(), 6);
        assert!(trail.windows(2).all(|w| w[0] > w[1]));

        // not on the sphere
        assert!(matches!(
            SphereRationalPoint::new(
                RationalPoint::new(IntVec3::new(1, 1, 1), 3).unwrap(),
                6,
            ),
            Err(Error::NotOnSphere { .. })
        ));
    }

    #[test]
    fn random_start_roundtrip() {
        for n in [1u64, 2, 6, 14, 41, 99, 230, 998] {
            for seed in 0..5 {
                let start = random_sphere_rational(n, seed).unwrap();
                assert!(start.point().den() > 1);
                let (v, trail) = descend_trace(&start).unwrap();
                assert_eq!(v.norm_sq() as u64, n);
                assert!(trail.windows(2).all(|w| w[0] > w[1]));
            }
        }
    }

    #[test]
    fn zero_sphere_is_a_point() {
        let start = random_sphere_rational(0, 3).unwrap();
        assert_eq!(start.point().num(), IntVec3::new(0, 0, 0));
        assert_eq!(start.point().den(), 1);
        assert_eq!(descend(&start).unwrap(), IntVec3::new(0, 0, 0));
    }

    #[test]
    fn unrepresentable_rejected() {
        assert!(matches!(
            random_sphere_rational(7, 1),
            Err(Error::NotRepresentable(7))
        ));
    }

    #[test]
    fn deterministic_in_seed() {
        let a = random_sphere_rational(41, 9).unwrap();
        let b = random_sphere_rational(41, 9).unwrap();
        assert_eq!(a, b);
    }
}
