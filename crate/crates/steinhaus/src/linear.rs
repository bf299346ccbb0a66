//! The affine construction: require every table of the representative
//! family to be an affine permutation t -> pi(0) + c t with a prescribed
//! nonzero slope. Differencing consecutive arguments turns that into a
//! linear system over GF(p) in the 3 p^3 coordinates of L, solved by
//! Gaussian elimination.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::gf::{reduce, Prime};
use crate::lattice::{build_w, complement_plane, decompose_unchecked, CubePoint, IsoVector};
use crate::partial_map::PartialMap;

/// Identifies the family member and difference step a row came from.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RowTag {
    pub lambda: IsoVector,
    pub x: CubePoint,
    pub t: u64,
}

/// One linear condition: coeffs . vars = constant over GF(p).
#[derive(Clone, Debug)]
pub struct Row {
    pub coeffs: Vec<u64>,
    pub constant: u64,
    pub tag: RowTag,
}

/// A dense linear system over GF(p). Variable 3 i + k is coordinate k
/// of the value at the cell with lexicographic index i.
#[derive(Clone, Debug)]
pub struct GFpLinearSystem {
    p: Prime,
    num_vars: usize,
    rows: Vec<Row>,
}

impl GFpLinearSystem {
    pub fn new(p: Prime, num_vars: usize) -> Self {
        GFpLinearSystem {
            p,
            num_vars,
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Row) {
        assert_eq!(row.coeffs.len(), self.num_vars);
        self.rows.push(row);
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    /// Whether an assignment of all variables satisfies every row.
    pub fn satisfied_by(&self, values: &[u64]) -> bool {
        assert_eq!(values.len(), self.num_vars);
        let p = self.p.get();
        self.rows.iter().all(|row| {
            let lhs = row
                .coeffs
                .iter()
                .zip(values)
                .fold(0u64, |acc, (c, v)| (acc + c * v) % p);
            lhs == row.constant
        })
    }

    /// Whether a complete map, flattened to variables, satisfies the
    /// system.
    pub fn satisfied_by_map(&self, map: &PartialMap) -> Result<bool, Error> {
        Ok(self.satisfied_by(&map_to_values(map)?))
    }
}

fn map_to_values(map: &PartialMap) -> Result<Vec<u64>, Error> {
    let mut values = Vec::with_capacity(3 * map.cell_count());
    for cell in map.cells() {
        let v = map.require(cell)?;
        values.extend_from_slice(&[v.x as u64, v.y as u64, v.z as u64]);
    }
    Ok(values)
}

/// Slope prescription: a nonzero c for each (representative, plane
/// point) pair; a map t -> v + c t is a permutation exactly when c is
/// nonzero, so any choice here is sound.
#[derive(Clone, Debug)]
pub struct AffineAnsatz {
    slopes: Vec<Vec<u64>>,
}

impl AffineAnsatz {
    /// All slopes 1, the published choice at p = 3.
    pub fn unit(p: Prime) -> Self {
        let w = (p.get() + 1) as usize;
        let plane = (p.get() * p.get()) as usize;
        AffineAnsatz {
            slopes: vec![vec![1; plane]; w],
        }
    }

    /// Independent uniform nonzero slopes.
    pub fn seeded(p: Prime, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = (p.get() + 1) as usize;
        let plane = (p.get() * p.get()) as usize;
        AffineAnsatz {
            slopes: (0..w)
                .map(|_| (0..plane).map(|_| rng.gen_range(1..p.get())).collect())
                .collect(),
        }
    }

    pub fn slope(&self, w_index: usize, x_index: usize) -> u64 {
        self.slopes[w_index][x_index]
    }
}

/// Builds the difference system: for each family member (lambda, x) and
/// each t < p - 1 the row
///   lambda . L(y_{t+1}) - lambda . L(y_t) = c - d/2 + lambda . (eps_{t+1} - eps_t),
/// giving (p+1) p^2 (p-1) rows in 3 p^3 variables.
pub fn build_system(p: Prime, ansatz: &AffineAnsatz) -> GFpLinearSystem {
    let pv = p.get() as i64;
    let num_vars = 3 * (pv * pv * pv) as usize;
    let mut system = GFpLinearSystem::new(p, num_vars);
    let half = p.half().value() as i64;
    for (wi, iso) in build_w(p).iter().enumerate() {
        let d = iso.d().value() as i64;
        for (xi, &x) in complement_plane(iso).points().iter().enumerate() {
            let c = ansatz.slope(wi, xi) as i64;
            let decs: Vec<_> = (0..pv)
                .map(|t| decompose_unchecked(x.vec() + iso.vec() * t, pv))
                .collect();
            for t in 0..pv - 1 {
                let mut coeffs = vec![0u64; num_vars];
                let (cur, next) = (&decs[t as usize], &decs[t as usize + 1]);
                let lam = iso.vec().coords();
                for k in 0..3 {
                    let vn = 3 * next.y.index() + k;
                    coeffs[vn] = (coeffs[vn] + lam[k] as u64) % p.get();
                    let vc = 3 * cur.y.index() + k;
                    coeffs[vc] = (coeffs[vc] + reduce(-lam[k], p.get())) % p.get();
                }
                let constant = reduce(
                    c - d * half + iso.vec().dot(next.eps - cur.eps),
                    p.get(),
                );
                system.push_row(Row {
                    coeffs,
                    constant,
                    tag: RowTag {
                        lambda: *iso,
                        x,
                        t: t as u64,
                    },
                });
            }
        }
    }
    system
}

/// Result of elimination: rank, kernel dimension, and sampled solution
/// vectors (empty when the system is inconsistent).
#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub rank: usize,
    pub kernel_dim: usize,
    pub samples: Vec<Vec<u64>>,
}

/// Row-reduces the system and samples up to `max_samples` distinct
/// solutions: the particular solution plus seeded combinations of the
/// kernel basis. When the whole solution space is no bigger than the
/// request it is enumerated instead.
pub fn solve(system: &GFpLinearSystem, max_samples: usize, seed: u64) -> SolveOutcome {
    let p = system.p().get();
    let n = system.num_vars();
    let mut mat: Vec<Vec<u64>> = system
        .rows()
        .iter()
        .map(|r| {
            let mut v = r.coeffs.clone();
            v.push(r.constant);
            v
        })
        .collect();

    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for col in 0..n {
        let Some(pr) = (rank..mat.len()).find(|&r| mat[r][col] != 0) else {
            continue;
        };
        mat.swap(rank, pr);
        let inv = mod_inv(mat[rank][col], p);
        for v in mat[rank].iter_mut() {
            *v = *v * inv % p;
        }
        let pivot_row = mat[rank].clone();
        for (r, row) in mat.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let f = row[col];
                for (a, b) in row.iter_mut().zip(&pivot_row) {
                    *a = (*a + (p - f) * b) % p;
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == mat.len() {
            break;
        }
    }
    let kernel_dim = n - rank;
    // inconsistent iff a zero row has nonzero constant
    let consistent = mat[rank.min(mat.len())..].iter().all(|r| r[n] == 0);
    if !consistent {
        return SolveOutcome {
            rank,
            kernel_dim,
            samples: Vec::new(),
        };
    }

    let free: Vec<usize> = {
        let pivot_set: HashSet<usize> = pivots.iter().copied().collect();
        (0..n).filter(|c| !pivot_set.contains(c)).collect()
    };
    // particular solution: free variables zero
    let mut particular = vec![0u64; n];
    for (r, &col) in pivots.iter().enumerate() {
        particular[col] = mat[r][n];
    }
    // kernel basis: one vector per free variable
    let basis: Vec<Vec<u64>> = free
        .iter()
        .map(|&fcol| {
            let mut v = vec![0u64; n];
            v[fcol] = 1;
            for (r, &col) in pivots.iter().enumerate() {
                v[col] = reduce(-(mat[r][fcol] as i64), p);
            }
            v
        })
        .collect();

    let space_size = checked_pow(p, kernel_dim);
    let mut samples = Vec::new();
    let mut seen = HashSet::new();
    let push = |coeffs: &[u64], samples: &mut Vec<Vec<u64>>| {
        let mut sol = particular.clone();
        for (c, b) in coeffs.iter().zip(&basis) {
            if *c != 0 {
                for (s, v) in sol.iter_mut().zip(b) {
                    *s = (*s + c * v) % p;
                }
            }
        }
        samples.push(sol);
    };
    match space_size {
        Some(total) if (total as usize as u128 == total) && total as usize <= max_samples => {
            // enumerate the whole space
            let mut coeffs = vec![0u64; kernel_dim];
            loop {
                push(&coeffs, &mut samples);
                let mut i = 0;
                while i < kernel_dim {
                    coeffs[i] += 1;
                    if coeffs[i] < p {
                        break;
                    }
                    coeffs[i] = 0;
                    i += 1;
                }
                if i == kernel_dim {
                    break;
                }
            }
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut attempts = 0usize;
            while samples.len() < max_samples && attempts < 20 * max_samples + 100 {
                attempts += 1;
                let coeffs: Vec<u64> =
                    (0..kernel_dim).map(|_| rng.gen_range(0..p)).collect();
                if seen.insert(coeffs.clone()) {
                    push(&coeffs, &mut samples);
                }
            }
        }
    }
    debug_assert!(samples.iter().all(|s| system.satisfied_by(s)));
    SolveOutcome {
        rank,
        kernel_dim,
        samples,
    }
}

/// As `solve`, assembling each sampled solution vector into a complete
/// map. The system must have one variable per value coordinate.
pub fn solve_and_sample(
    system: &GFpLinearSystem,
    max_samples: usize,
    seed: u64,
) -> Result<(SolveOutcome, Vec<PartialMap>), Error> {
    let pv = system.p().get() as i64;
    assert_eq!(
        system.num_vars(),
        3 * (pv * pv * pv) as usize,
        "system is not map-shaped"
    );
    let outcome = solve(system, max_samples, seed);
    let maps = outcome
        .samples
        .iter()
        .map(|sol| {
            PartialMap::from_fn(pv, |cell| {
                let i = 3 * cell.index();
                CubePoint::new(sol[i] as i64, sol[i + 1] as i64, sol[i + 2] as i64, pv)
                    .unwrap()
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((outcome, maps))
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // p is prime and a != 0
    let mut result = 1u64;
    let (mut base, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

fn checked_pow(p: u64, k: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..k {
        acc = acc.checked_mul(p as u128)?;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture::fixture_map;
    use crate::verify::{verify_bruteforce, verify_perms};

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn toy_row(p: Prime, coeffs: Vec<u64>, constant: u64) -> Row {
        let lambda = build_w(p)[0];
        Row {
            coeffs,
            constant,
            tag: RowTag {
                lambda,
                x: CubePoint::new(0, 0, 0, p.get() as i64).unwrap(),
                t: 0,
            },
        }
    }

    #[test]
    fn toy_system_enumeration() {
        // x0 + x1 = 1 over GF(3): three solutions
        let pr = p(3);
        let mut sys = GFpLinearSystem::new(pr, 2);
        sys.push_row(toy_row(pr, vec![1, 1], 1));
        let out = solve(&sys, 3, 0);
        assert_eq!(out.rank, 1);
        assert_eq!(out.kernel_dim, 1);
        assert_eq!(out.samples.len(), 3);
        let distinct: HashSet<_> = out.samples.iter().cloned().collect();
        assert_eq!(distinct.len(), 3);
        for s in &out.samples {
            assert!(sys.satisfied_by(s));
        }
    }

    #[test]
    fn toy_system_inconsistent() {
        let pr = p(3);
        let mut sys = GFpLinearSystem::new(pr, 1);
        sys.push_row(toy_row(pr, vec![1], 0));
        sys.push_row(toy_row(pr, vec![1], 1));
        let out = solve(&sys, 5, 0);
        assert!(out.samples.is_empty());
    }

    #[test]
    fn system_shape_p3_and_p5() {
        let sys = build_system(p(3), &AffineAnsatz::unit(p(3)));
        assert_eq!(sys.num_rows(), 72);
        assert_eq!(sys.num_vars(), 81);
        // each row touches at most 6 variables
        for row in sys.rows() {
            let touched = row.coeffs.iter().filter(|&&c| c != 0).count();
            assert!(touched <= 6, "row touches {touched} variables");
        }
        let sys = build_system(p(5), &AffineAnsatz::unit(p(5)));
        assert_eq!(sys.num_rows(), 600);
        assert_eq!(sys.num_vars(), 375);
    }

    #[test]
    fn fixture_satisfies_unit_system() {
        let sys = build_system(p(3), &AffineAnsatz::unit(p(3)));
        assert!(sys.satisfied_by_map(&fixture_map()).unwrap());
    }

    #[test]
    fn sampled_solutions_are_valid_maps() {
        let pr = p(3);
        let sys = build_system(pr, &AffineAnsatz::unit(pr));
        let (out, maps) = solve_and_sample(&sys, 5, 42).unwrap();
        assert!(!maps.is_empty());
        assert_eq!(out.rank + out.kernel_dim, 81);
        for map in &maps {
            assert!(sys.satisfied_by_map(map).unwrap());
            assert!(verify_perms(map).unwrap().is_valid());
            assert!(verify_bruteforce(map).unwrap().is_valid());
        }
    }

    #[test]
    fn random_slopes_stay_sound() {
        // any consistent slope choice produces valid maps
        let pr = p(3);
        for seed in 0..4 {
            let sys = build_system(pr, &AffineAnsatz::seeded(pr, seed));
            let (_, maps) = solve_and_sample(&sys, 2, seed).unwrap();
            for map in &maps {
                assert!(verify_perms(map).unwrap().is_valid(), "seed {seed}");
            }
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let pr = p(3);
        let sys = build_system(pr, &AffineAnsatz::unit(pr));
        let (_, a) = solve_and_sample(&sys, 4, 7).unwrap();
        let (_, b) = solve_and_sample(&sys, 4, 7).unwrap();
        assert_eq!(a, b);
    }
}
