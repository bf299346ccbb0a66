//! File formats: the JSON map document and the plain-text point-set
//! format (one point per line, three rationals `a/b` separated by
//! single spaces, denominators positive).

use std::path::Path;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::lattice::IntVec3;
use crate::partial_map::{PartialMap, RationalPoint};

/// On-disk shape of a map: `m` plus m^3 entries in lexicographic cell
/// order. `null` marks an unassigned cell of a partial map.
#[derive(Serialize, Deserialize, Debug)]
pub struct MapDocument {
    pub m: i64,
    pub entries: Vec<Option<[i64; 3]>>,
}

impl MapDocument {
    pub fn from_map(map: &PartialMap) -> Self {
        MapDocument {
            m: map.m(),
            entries: (0..map.cell_count())
                .map(|i| map.entry_by_index(i).map(|v| v.coords()))
                .collect(),
        }
    }

    pub fn into_map(self) -> Result<PartialMap, Error> {
        PartialMap::from_entries(self.m, self.entries)
    }
}

pub fn write_map(path: &Path, map: &PartialMap) -> Result<(), Error> {
    let doc = MapDocument::from_map(map);
    let text = serde_json::to_string_pretty(&doc).map_err(|e| Error::Parse(e.to_string()))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

pub fn read_map(path: &Path) -> Result<PartialMap, Error> {
    let text = std::fs::read_to_string(path)?;
    let doc: MapDocument = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    doc.into_map()
}

pub fn write_points(path: &Path, points: &[RationalPoint]) -> Result<(), Error> {
    let mut out = String::new();
    for pt in points {
        out.push_str(&format_point(pt));
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn format_point(pt: &RationalPoint) -> String {
    let [a, b, c] = pt.num().coords();
    let d = pt.den();
    format!("{a}/{d} {b}/{d} {c}/{d}")
}

pub fn read_points(path: &Path) -> Result<Vec<RationalPoint>, Error> {
    let text = std::fs::read_to_string(path)?;
    parse_points(&text)
}

pub fn parse_points(text: &str) -> Result<Vec<RationalPoint>, Error> {
    let mut points = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        points.push(
            parse_point(line)
                .map_err(|msg| Error::Parse(format!("line {}: {msg}", lineno + 1)))?,
        );
    }
    Ok(points)
}

fn parse_point(line: &str) -> Result<RationalPoint, String> {
    let fracs: Vec<(i64, i64)> = line
        .split_whitespace()
        .map(parse_rational)
        .collect::<Result<_, _>>()?;
    if fracs.len() != 3 {
        return Err(format!("expected 3 rationals, found {}", fracs.len()));
    }
    // bring to the least common denominator
    let den = fracs
        .iter()
        .try_fold(1i64, |acc, &(_, d)| {
            let l = acc.lcm(&d);
            (l <= 1_000_000_000).then_some(l)
        })
        .ok_or("common denominator exceeds 10^9")?;
    let mut coords = [0i64; 3];
    for (i, &(n, d)) in fracs.iter().enumerate() {
        coords[i] = n
            .checked_mul(den / d)
            .ok_or("numerator overflows after scaling")?;
    }
    RationalPoint::new(IntVec3::from_coords(coords), den).map_err(|e| e.to_string())
}

fn parse_rational(token: &str) -> Result<(i64, i64), String> {
    let (num, den) = match token.split_once('/') {
        Some((n, d)) => (
            n.parse::<i64>().map_err(|_| format!("bad numerator in {token:?}"))?,
            d.parse::<i64>().map_err(|_| format!("bad denominator in {token:?}"))?,
        ),
        None => (
            token
                .parse::<i64>()
                .map_err(|_| format!("bad rational {token:?}"))?,
            1,
        ),
    };
    if den <= 0 {
        return Err(format!("denominator must be positive in {token:?}"));
    }
    Ok((num, den))
}
