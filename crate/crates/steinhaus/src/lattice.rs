//! Geometry of the discrete cube X_m inside Z^3: the quotient/remainder
//! decomposition, isotropic directions mod p, the projective conic
//! x^2 + y^2 + z^2 = 0, its affine representatives, and complement planes.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::error::Error;
use crate::gf::{FpElement, Prime};

/// A vector of Z^3.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct IntVec3 {
    pub x: i64,
    pub y: i64,
    pub z: i64,
}

impl IntVec3 {
    pub const fn new(x: i64, y: i64, z: i64) -> Self {
        IntVec3 { x, y, z }
    }

    pub fn coords(self) -> [i64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_coords(c: [i64; 3]) -> Self {
        IntVec3::new(c[0], c[1], c[2])
    }

    pub fn dot(self, other: IntVec3) -> i64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm_sq(self) -> i64 {
        self.dot(self)
    }

    pub fn is_zero(self) -> bool {
        self == IntVec3::default()
    }
}

impl Add for IntVec3 {
    type Output = IntVec3;
    fn add(self, o: IntVec3) -> IntVec3 {
        IntVec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for IntVec3 {
    type Output = IntVec3;
    fn sub(self, o: IntVec3) -> IntVec3 {
        IntVec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<i64> for IntVec3 {
    type Output = IntVec3;
    fn mul(self, k: i64) -> IntVec3 {
        IntVec3::new(self.x * k, self.y * k, self.z * k)
    }
}

impl fmt::Display for IntVec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// A point of the cube X_m = {0, ..., m-1}^3.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CubePoint {
    v: IntVec3,
    m: i64,
}

impl CubePoint {
    pub fn new(x: i64, y: i64, z: i64, m: i64) -> Result<Self, Error> {
        CubePoint::from_vec(IntVec3::new(x, y, z), m)
    }

    pub fn from_vec(v: IntVec3, m: i64) -> Result<Self, Error> {
        if m < 1 {
            return Err(Error::InvalidModulus(m));
        }
        for c in v.coords() {
            if c < 0 || c >= m {
                return Err(Error::OutOfRange {
                    what: "cube point",
                    value: c,
                    m,
                });
            }
        }
        Ok(CubePoint { v, m })
    }

    /// Reduce an arbitrary integer vector componentwise into X_m.
    pub fn reduce_vec(v: IntVec3, m: i64) -> Result<Self, Error> {
        if m < 1 {
            return Err(Error::InvalidModulus(m));
        }
        Ok(CubePoint {
            v: IntVec3::new(v.x.rem_euclid(m), v.y.rem_euclid(m), v.z.rem_euclid(m)),
            m,
        })
    }

    pub fn vec(self) -> IntVec3 {
        self.v
    }

    pub fn m(self) -> i64 {
        self.m
    }

    /// Lexicographic index a*m^2 + b*m + c.
    pub fn index(self) -> usize {
        ((self.v.x * self.m + self.v.y) * self.m + self.v.z) as usize
    }

    pub fn from_index(idx: usize, m: i64) -> Result<Self, Error> {
        let n = (m * m * m) as usize;
        if idx >= n {
            return Err(Error::OutOfRange {
                what: "cube index",
                value: idx as i64,
                m: n as i64,
            });
        }
        let i = idx as i64;
        CubePoint::new(i / (m * m), i / m % m, i % m, m)
    }

    /// All points of X_m in lexicographic order.
    pub fn all(m: i64) -> impl Iterator<Item = CubePoint> {
        (0..m * m * m).map(move |i| CubePoint::from_index(i as usize, m).unwrap())
    }
}

impl fmt::Display for CubePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

/// The unique splitting v = y + m * eps with y in X_m; eps is the
/// componentwise floor quotient and y the non-negative remainder.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Decomposition {
    pub y: CubePoint,
    pub eps: IntVec3,
    pub m: i64,
}

impl Decomposition {
    /// Reassemble the decomposed vector.
    pub fn reconstruct(&self) -> IntVec3 {
        self.y.vec() + self.eps * self.m
    }
}

pub fn decompose(v: IntVec3, m: i64) -> Result<Decomposition, Error> {
    if m <= 1 {
        return Err(Error::InvalidModulus(m));
    }
    Ok(decompose_unchecked(v, m))
}

/// As `decompose` but also defined for m = 1 (y = 0, eps = v).
pub(crate) fn decompose_unchecked(v: IntVec3, m: i64) -> Decomposition {
    let y = IntVec3::new(v.x.rem_euclid(m), v.y.rem_euclid(m), v.z.rem_euclid(m));
    let eps = IntVec3::new(
        (v.x - y.x) / m,
        (v.y - y.y) / m,
        (v.z - y.z) / m,
    );
    Decomposition {
        y: CubePoint { v: y, m },
        eps,
        m,
    }
}

/// A nonzero direction in X_p whose squared norm is divisible by p,
/// together with the invariant d defined by |lambda|^2 = d*p (mod p^2).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct IsoVector {
    lambda: CubePoint,
    d: FpElement,
}

impl IsoVector {
    pub fn new(lambda: CubePoint, p: Prime) -> Result<Self, Error> {
        let v = lambda.vec();
        let pv = p.get() as i64;
        if lambda.m() != pv || v.is_zero() || v.norm_sq() % pv != 0 {
            return Err(Error::NotIsotropic {
                x: v.x,
                y: v.y,
                z: v.z,
                p: p.get(),
            });
        }
        let d = FpElement::new(v.norm_sq() / pv, p);
        Ok(IsoVector { lambda, d })
    }

    pub fn from_coords(x: i64, y: i64, z: i64, p: Prime) -> Result<Self, Error> {
        IsoVector::new(CubePoint::new(x, y, z, p.get() as i64)?, p)
    }

    pub fn lambda(&self) -> CubePoint {
        self.lambda
    }

    pub fn vec(&self) -> IntVec3 {
        self.lambda.vec()
    }

    pub fn d(&self) -> FpElement {
        self.d
    }

    pub fn p(&self) -> Prime {
        self.d.modulus()
    }
}

impl fmt::Display for IsoVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} d={}", self.lambda, self.d)
    }
}

/// All of Lambda: the p^2 - 1 nonzero triples of X_p with norm divisible
/// by p, in lexicographic order.
pub fn enumerate_lambda(p: Prime) -> Vec<IsoVector> {
    let pv = p.get() as i64;
    CubePoint::all(pv)
        .filter(|c| !c.vec().is_zero() && c.vec().norm_sq() % pv == 0)
        .map(|c| IsoVector::new(c, p).unwrap())
        .collect()
}

/// A point of the projective plane over GF(p), normalized so that the
/// first nonzero coordinate is 1.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ProjectivePoint {
    coords: [FpElement; 3],
}

impl ProjectivePoint {
    /// Normalizes an arbitrary representative; `None` for the zero triple.
    pub fn new(raw: [FpElement; 3]) -> Option<Self> {
        let inv = raw.iter().find(|c| !c.is_zero())?.inverse().unwrap();
        Some(ProjectivePoint {
            coords: [raw[0] * inv, raw[1] * inv, raw[2] * inv],
        })
    }

    pub fn coords(&self) -> [FpElement; 3] {
        self.coords
    }

    pub fn values(&self) -> [u64; 3] {
        [
            self.coords[0].value(),
            self.coords[1].value(),
            self.coords[2].value(),
        ]
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.values();
        write!(f, "({a} : {b} : {c})")
    }
}

/// Brute-force enumeration of the projective solutions of
/// x^2 + y^2 + z^2 = 0 over GF(p); the independent check for the
/// line-sweep parametrization below.
fn conic_points_bruteforce(p: Prime) -> Vec<ProjectivePoint> {
    let pv = p.get() as i64;
    let mut set = BTreeSet::new();
    for c in CubePoint::all(pv) {
        let v = c.vec();
        if !v.is_zero() && v.norm_sq() % pv == 0 {
            let raw = [p.element(v.x), p.element(v.y), p.element(v.z)];
            set.insert(ProjectivePoint::new(raw).unwrap());
        }
    }
    set.into_iter().collect()
}

/// The p + 1 projective points of the conic x^2 + y^2 + z^2 = 0,
/// sorted and duplicate-free.
///
/// A base point (1, beta, gamma) is found by scanning beta upward until
/// -(1 + beta^2) is a square and taking the smaller root as gamma; the
/// remaining points come from sweeping the pencil of lines through the
/// base point. The sweep is cross-checked against brute-force
/// enumeration; a mismatch is a bug, not a recoverable condition.
pub fn conic_points(p: Prime) -> Vec<ProjectivePoint> {
    let (beta, gamma) = conic_base_point(p);
    let pv = p.get() as i64;
    let (b, g) = (beta as i64, gamma as i64);

    let mut set = BTreeSet::new();
    // vertical line: (alpha, -beta, gamma) with alpha = 1
    let mirror = [p.element(1), p.element(-b), p.element(g)];
    set.insert(ProjectivePoint::new(mirror).expect("nonzero"));
    for t in 0..pv {
        let raw = [
            p.element(t * t - 2 * b * t - 1),
            p.element(-b * t * t - 2 * t + b),
            p.element(g * (1 + t * t)),
        ];
        let pt = ProjectivePoint::new(raw)
            .expect("line sweep never produces the zero triple from a unit base point");
        set.insert(pt);
    }
    let points: Vec<_> = set.into_iter().collect();

    let brute = conic_points_bruteforce(p);
    assert_eq!(
        points, brute,
        "conic parametrization disagrees with brute force at p = {p}"
    );
    assert_eq!(points.len() as u64, p.get() + 1);
    points
}

/// First beta with -(1 + beta^2) a square mod p; gamma is the smaller
/// root. For p = 3 mod 4 this gamma is nonzero because -1 is a
/// non-residue, and for p = 1 mod 4 beta = 0 already works.
fn conic_base_point(p: Prime) -> (u64, u64) {
    for beta in 0..p.get() {
        let b = beta as i64;
        let target = p.element(-(1 + b * b));
        let roots = target.square_roots();
        if !roots.is_empty() {
            return (beta, roots[0].value());
        }
    }
    unreachable!("a base point exists for every odd prime by the pigeon-hole argument");
}

/// The representative set W: one vector of Lambda per conic point,
/// taking the normalized projective coordinates as a point of X_p.
pub fn build_w(p: Prime) -> Vec<IsoVector> {
    conic_points(p)
        .into_iter()
        .map(|pt| {
            let [a, b, c] = pt.values();
            IsoVector::from_coords(a as i64, b as i64, c as i64, p)
                .expect("conic points are nonzero isotropic vectors")
        })
        .collect()
}

/// A plane complementary to the line through lambda, realized inside X_p.
#[derive(Clone, Debug)]
pub struct ComplementPlane {
    lambda: IsoVector,
    basis: [IntVec3; 2],
    points: Vec<CubePoint>,
}

impl ComplementPlane {
    pub fn lambda(&self) -> &IsoVector {
        &self.lambda
    }

    pub fn basis(&self) -> [IntVec3; 2] {
        self.basis
    }

    pub fn points(&self) -> &[CubePoint] {
        &self.points
    }
}

/// Canonical complement: drop the first coordinate in which lambda is
/// nonzero and span the two remaining unit vectors. The p^2 points come
/// out in lexicographic order.
pub fn complement_plane(lambda: &IsoVector) -> ComplementPlane {
    let pv = lambda.p().get() as i64;
    let v = lambda.vec();
    let pivot = v
        .coords()
        .iter()
        .position(|&c| c % pv != 0)
        .expect("isotropic vectors are nonzero");
    let others: Vec<usize> = (0..3).filter(|&i| i != pivot).collect();

    let unit = |i: usize| {
        let mut c = [0i64; 3];
        c[i] = 1;
        IntVec3::from_coords(c)
    };
    let basis = [unit(others[0]), unit(others[1])];

    let mut points = Vec::with_capacity((pv * pv) as usize);
    for b in 0..pv {
        for c in 0..pv {
            let w = basis[0] * b + basis[1] * c;
            points.push(CubePoint::from_vec(w, pv).unwrap());
        }
    }
    points.sort();
    debug_assert_eq!(points.len(), (pv * pv) as usize);
    ComplementPlane {
        lambda: *lambda,
        basis,
        points,
    }
}
