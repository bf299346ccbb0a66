//! Partial Steinhaus maps L : X_m -> X_m, the points (1/m)x + L(x) they
//! encode, and the associated value tables pi reduced through the
//! quotient/remainder decomposition.

use std::fmt;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::gf::{reduce, FpElement};
use crate::lattice::{decompose_unchecked, CubePoint, IntVec3, IsoVector};

/// A (possibly partially assigned) function L : X_m -> X_m, stored as
/// m^3 optional values in lexicographic cell order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartialMap {
    m: i64,
    entries: Vec<Option<IntVec3>>,
}

impl PartialMap {
    /// An entirely unassigned map. `m = 1` is admitted so that divisor
    /// restriction can land on the trivial cube.
    pub fn new(m: i64) -> Result<Self, Error> {
        if m < 1 {
            return Err(Error::InvalidModulus(m));
        }
        Ok(PartialMap {
            m,
            entries: vec![None; (m * m * m) as usize],
        })
    }

    /// A complete map built from a value function on cells.
    pub fn from_fn(m: i64, f: impl Fn(CubePoint) -> CubePoint) -> Result<Self, Error> {
        let mut map = PartialMap::new(m)?;
        for cell in CubePoint::all(m) {
            map.set(cell, f(cell))?;
        }
        Ok(map)
    }

    /// Builds from raw optional triples in lexicographic order,
    /// validating length and coordinate ranges.
    pub fn from_entries(m: i64, entries: Vec<Option<[i64; 3]>>) -> Result<Self, Error> {
        let mut map = PartialMap::new(m)?;
        if entries.len() != map.entries.len() {
            return Err(Error::OutOfRange {
                what: "entry count",
                value: entries.len() as i64,
                m: map.entries.len() as i64 + 1,
            });
        }
        for (i, e) in entries.into_iter().enumerate() {
            if let Some(c) = e {
                let cell = CubePoint::from_index(i, m)?;
                map.set(cell, CubePoint::new(c[0], c[1], c[2], m)?)?;
            }
        }
        Ok(map)
    }

    /// Uniformly random complete map, reproducible from the seed.
    pub fn random_complete(m: i64, seed: u64) -> Result<Self, Error> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut map = PartialMap::new(m)?;
        for i in 0..map.entries.len() {
            map.entries[i] = Some(IntVec3::new(
                rng.gen_range(0..m),
                rng.gen_range(0..m),
                rng.gen_range(0..m),
            ));
        }
        Ok(map)
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn cell_count(&self) -> usize {
        self.entries.len()
    }

    pub fn assigned_count(&self) -> usize {
        self.entries.iter().filter(|e| e.is_some()).count()
    }

    pub fn is_complete(&self) -> bool {
        self.entries.iter().all(|e| e.is_some())
    }

    pub fn set(&mut self, cell: CubePoint, value: CubePoint) -> Result<(), Error> {
        self.check_cell(cell)?;
        if value.m() != self.m {
            return Err(Error::ModulusMismatch {
                expected: self.m,
                got: value.m(),
            });
        }
        self.entries[cell.index()] = Some(value.vec());
        Ok(())
    }

    pub fn clear(&mut self, cell: CubePoint) -> Result<(), Error> {
        self.check_cell(cell)?;
        self.entries[cell.index()] = None;
        Ok(())
    }

    pub fn get(&self, cell: CubePoint) -> Option<CubePoint> {
        self.entries
            .get(cell.index())
            .copied()
            .flatten()
            .map(|v| CubePoint::from_vec(v, self.m).unwrap())
    }

    /// The assigned value at `cell`, or `IncompleteMap`.
    pub fn require(&self, cell: CubePoint) -> Result<IntVec3, Error> {
        let v = cell.vec();
        self.entries[cell.index()]
            .ok_or(Error::IncompleteMap(v.x, v.y, v.z))
    }

    pub fn entry_by_index(&self, idx: usize) -> Option<IntVec3> {
        self.entries.get(idx).copied().flatten()
    }

    pub fn cells(&self) -> impl Iterator<Item = CubePoint> {
        CubePoint::all(self.m)
    }

    /// The encoded point (1/m) x + L(x).
    pub fn point_at(&self, cell: CubePoint) -> Result<RationalPoint, Error> {
        let l = self.require(cell)?;
        RationalPoint::new(cell.vec() + l * self.m, self.m)
    }

    /// The full point set of a complete map.
    pub fn to_points(&self) -> Result<Vec<RationalPoint>, Error> {
        self.cells().map(|c| self.point_at(c)).collect()
    }

    fn check_cell(&self, cell: CubePoint) -> Result<(), Error> {
        if cell.m() != self.m {
            return Err(Error::ModulusMismatch {
                expected: self.m,
                got: cell.m(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for PartialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "map on X_{} with {}/{} cells assigned",
            self.m,
            self.assigned_count(),
            self.cell_count()
        )
    }
}

/// A point of R^3 with exact rational coordinates num / den. The
/// representation need not be reduced; equality is cross-multiplied.
#[derive(Clone, Copy, Eq, Debug)]
pub struct RationalPoint {
    num: IntVec3,
    den: i64,
}

impl RationalPoint {
    pub fn new(num: IntVec3, den: i64) -> Result<Self, Error> {
        if den < 1 {
            return Err(Error::NonPositiveDenominator(den));
        }
        Ok(RationalPoint { num, den })
    }

    pub fn num(&self) -> IntVec3 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    /// Reduce by the gcd of all four entries.
    pub fn reduced(&self) -> RationalPoint {
        let g = self
            .num
            .coords()
            .iter()
            .fold(self.den, |g, &c| g.gcd(&c));
        RationalPoint {
            num: IntVec3::new(self.num.x / g, self.num.y / g, self.num.z / g),
            den: self.den / g,
        }
    }

    /// The coset label x in X_m with self in (1/m) x + Z^3, or None if
    /// the point does not lie on the (1/m)-grid.
    pub fn coset(&self, m: i64) -> Option<CubePoint> {
        let mut coords = [0i64; 3];
        for (i, c) in self.num.coords().into_iter().enumerate() {
            let scaled = m.checked_mul(c)?;
            if scaled % self.den != 0 {
                return None;
            }
            coords[i] = (scaled / self.den).rem_euclid(m);
        }
        Some(CubePoint::new(coords[0], coords[1], coords[2], m).unwrap())
    }
}

impl PartialEq for RationalPoint {
    fn eq(&self, other: &Self) -> bool {
        // cross-multiplied componentwise comparison
        self.num
            .coords()
            .iter()
            .zip(other.num.coords())
            .all(|(&a, b)| {
                (a as i128) * (other.den as i128) == (b as i128) * (self.den as i128)
            })
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.num.coords();
        write!(f, "{a}/{d} {b}/{d} {c}/{d}", d = self.den)
    }
}

/// The value table of one map pi^lambda_x : GF(p) -> GF(p).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PiTable {
    lambda: IsoVector,
    x: CubePoint,
    values: Vec<FpElement>,
}

impl PiTable {
    pub fn lambda(&self) -> &IsoVector {
        &self.lambda
    }

    pub fn x(&self) -> CubePoint {
        self.x
    }

    pub fn values(&self) -> &[FpElement] {
        &self.values
    }

    pub fn value_at(&self, t: u64) -> FpElement {
        self.values[t as usize]
    }

    /// Exact multiset comparison against {0, ..., p-1}.
    pub fn is_permutation(&self) -> bool {
        self.first_collision().is_none()
    }

    /// The lexicographically first pair s < t with equal values.
    pub fn first_collision(&self) -> Option<(u64, u64)> {
        for s in 0..self.values.len() {
            for t in s + 1..self.values.len() {
                if self.values[s] == self.values[t] {
                    return Some((s as u64, t as u64));
                }
            }
        }
        None
    }
}

/// Evaluates pi^lambda_base(t) for an arbitrary integer base vector.
/// The index base + t*lambda is reduced through the quotient/remainder
/// decomposition inside the formula, which keeps the value well defined
/// for base vectors outside X_p.
pub(crate) fn pi_value(
    map: &PartialMap,
    lambda: &IsoVector,
    base: IntVec3,
    t: i64,
) -> Result<u64, Error> {
    let p = lambda.p().get();
    let pv = p as i64;
    let dec = decompose_unchecked(base + lambda.vec() * t, pv);
    let l = map.require(dec.y)?;
    let dot = lambda.vec().dot(l - dec.eps);
    let half = lambda.p().half().value() as i64;
    Ok(reduce(t * (lambda.d().value() as i64) % pv * half + dot, p))
}

/// The table of pi^lambda_x(t) = t d/2 + lambda . [L(y_t) - eps_t] for
/// t in GF(p), with y_t, eps_t from decomposing x + t lambda.
pub fn pi_table(map: &PartialMap, lambda: &IsoVector, x: CubePoint) -> Result<PiTable, Error> {
    let p = lambda.p();
    let pv = p.get() as i64;
    if map.m() != pv {
        return Err(Error::ModulusMismatch {
            expected: pv,
            got: map.m(),
        });
    }
    if x.m() != pv {
        return Err(Error::ModulusMismatch {
            expected: pv,
            got: x.m(),
        });
    }
    let values = (0..pv)
        .map(|t| Ok(FpElement::new(pi_value(map, lambda, x.vec(), t)? as i64, p)))
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(PiTable {
        lambda: *lambda,
        x,
        values,
    })
}

/// Replaces every raw integer value by its remainder in X_m; the shift
/// is a gauge move that does not affect validity.
pub fn normalize_map(m: i64, raw: impl Fn(CubePoint) -> IntVec3) -> Result<PartialMap, Error> {
    if m < 1 {
        return Err(Error::InvalidModulus(m));
    }
    let mut map = PartialMap::new(m)?;
    for cell in CubePoint::all(m) {
        let y = decompose_unchecked(raw(cell), m).y;
        map.set(cell, y)?;
    }
    Ok(map)
}

/// Restriction to a divisor m' of m: for each x' in X_{m'}, selects the
/// point of the m-set in the coset (1/m') x' + Z^3, namely the one at
/// cell (m/m') x', and renormalizes its value into X_{m'}. A valid map
/// restricts to a valid map.
pub fn restrict_map(map: &PartialMap, m_prime: i64) -> Result<PartialMap, Error> {
    let m = map.m();
    if m_prime < 1 || m % m_prime != 0 {
        return Err(Error::InvalidDivisor { m, m_prime });
    }
    let k = m / m_prime;
    let mut out = PartialMap::new(m_prime)?;
    for cell in CubePoint::all(m_prime) {
        let src = CubePoint::from_vec(cell.vec() * k, m)?;
        let value = map.require(src)?;
        out.set(cell, decompose_unchecked(value, m_prime).y)?;
    }
    Ok(out)
}
