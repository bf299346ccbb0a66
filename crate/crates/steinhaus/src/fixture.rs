//! The bundled 27-point witness: a 3-partial Steinhaus set whose 36
//! associated value tables are all (even) permutations. Stored verbatim
//! as numerator triples over the common denominator 3.

use crate::lattice::{CubePoint, IntVec3};
use crate::partial_map::{PartialMap, RationalPoint};

pub const FIXTURE_DEN: i64 = 3;

/// Numerators of the 27 points, row for row.
pub const FIXTURE_NUMERATORS: [[i64; 3]; 27] = [
    [3, 6, 6], [6, 6, 1], [3, 6, 5],
    [6, 1, 6], [0, 1, 1], [6, 1, 5],
    [3, 5, 6], [6, 5, 1], [3, 5, 5],
    [1, 6, 6], [7, 6, 1], [1, 6, 5],
    [7, 1, 6], [4, 1, 1], [7, 1, 5],
    [1, 5, 6], [7, 5, 1], [1, 5, 5],
    [2, 0, 0], [2, 0, 1], [2, 0, 2],
    [2, 1, 0], [2, 1, 1], [2, 1, 2],
    [2, 2, 0], [2, 2, 1], [2, 2, 2],
];

/// The point set, one `RationalPoint` per row.
pub fn fixture_points() -> Vec<RationalPoint> {
    FIXTURE_NUMERATORS
        .iter()
        .map(|&n| RationalPoint::new(IntVec3::from_coords(n), FIXTURE_DEN).unwrap())
        .collect()
}

/// The same data as a complete map on X_3: the coset of each point
/// identifies the cell, the integer part the value.
pub fn fixture_map() -> PartialMap {
    let mut map = PartialMap::new(3).expect("m = 3");
    for pt in fixture_points() {
        let cell = pt.coset(3).expect("fixture points lie on the 1/3 grid");
        let value = IntVec3::new(
            (pt.num().x - cell.vec().x) / 3,
            (pt.num().y - cell.vec().y) / 3,
            (pt.num().z - cell.vec().z) / 3,
        );
        map.set(cell, CubePoint::from_vec(value, 3).unwrap())
            .expect("fixture values lie in X_3");
    }
    assert!(map.is_complete(), "fixture covers every coset");
    map
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_shape() {
        assert_eq!(fixture_points().len(), 27);
        let map = fixture_map();
        assert!(map.is_complete());
        assert_eq!(
            map.get(CubePoint::new(0, 0, 0, 3).unwrap()).unwrap().vec(),
            IntVec3::new(1, 2, 2)
        );
        assert_eq!(
            map.get(CubePoint::new(0, 1, 1, 3).unwrap()).unwrap().vec(),
            IntVec3::new(0, 0, 0)
        );
    }

    #[test]
    fn fixture_points_match_map_points() {
        let map = fixture_map();
        let mut from_map = map.to_points().unwrap();
        let mut direct = fixture_points();
        let key = |q: &RationalPoint| q.num().coords();
        from_map.sort_by_key(key);
        direct.sort_by_key(key);
        assert_eq!(from_map, direct);
    }
}
