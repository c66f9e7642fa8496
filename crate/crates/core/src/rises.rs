//! Join- and meet-rises over covering pairs and the statistics built on them.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{ConceptLattice, LatticeElementStats};

/// `(Δ_j, Δ_m)` for a comparable pair `x < y`.
pub fn rise(
    lat: &ConceptLattice,
    stats: &LatticeElementStats,
    x: usize,
    y: usize,
) -> Result<(usize, usize)> {
    if !lat.lt(x, y) {
        return Err(Error::NotComparable(x, y));
    }
    Ok((stats.j[y] - stats.j[x], stats.m[x] - stats.m[y]))
}

/// Exact fraction; `0/0` reads as zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction {
    pub count: usize,
    pub of: usize,
}

impl Fraction {
    pub fn new(count: usize, of: usize) -> Self {
        Fraction { count, of }
    }

    pub fn value(&self) -> f64 {
        if self.of == 0 {
            0.0
        } else {
            self.count as f64 / self.of as f64
        }
    }

    /// Hundredths, rounded half-up, in integer arithmetic.
    pub fn hundredths(&self) -> u64 {
        if self.of == 0 {
            return 0;
        }
        let (c, d) = (self.count as u64, self.of as u64);
        (200 * c + d) / (2 * d)
    }

    /// Two-decimal rendering, e.g. `0.48`.
    pub fn rounded(&self) -> String {
        let h = self.hundredths();
        format!("{}.{:02}", h / 100, h % 100)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.count, self.of)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverRise {
    pub lower: usize,
    pub upper: usize,
    pub delta_j: usize,
    pub delta_m: usize,
    pub lower_height: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightBucket {
    pub height: usize,
    pub nonunit: usize,
    pub total: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RiseReport {
    pub lattice_size: usize,
    pub cover_count: usize,
    pub nur_join_abs: usize,
    pub nur_meet_abs: usize,
    pub nur_join_rel: Fraction,
    pub nur_meet_rel: Fraction,
    pub per_cover_rises: Vec<CoverRise>,
    /// Keyed by the height of the lower element; heights without covers are
    /// left out.
    pub by_height_join: Vec<HeightBucket>,
    pub by_height_meet: Vec<HeightBucket>,
    pub atoms_nonunit_meet: Fraction,
    pub coatoms_nonunit_join: Fraction,
}

impl RiseReport {
    pub fn new(lat: &ConceptLattice, stats: &LatticeElementStats) -> RiseReport {
        let covers = lat.covers();
        let per_cover_rises: Vec<CoverRise> = covers
            .par_iter()
            .map(|&(x, y)| CoverRise {
                lower: x,
                upper: y,
                delta_j: stats.j[y] - stats.j[x],
                delta_m: stats.m[x] - stats.m[y],
                lower_height: stats.height[x],
            })
            .collect();
        let cover_count = per_cover_rises.len();
        let nur_join_abs = per_cover_rises.iter().filter(|r| r.delta_j != 1).count();
        let nur_meet_abs = per_cover_rises.iter().filter(|r| r.delta_m != 1).count();

        let max_height = per_cover_rises.iter().map(|r| r.lower_height).max();
        let bucket = |pick: fn(&CoverRise) -> usize| -> Vec<HeightBucket> {
            let Some(max) = max_height else {
                return Vec::new();
            };
            let mut b: Vec<HeightBucket> = (0..=max)
                .map(|height| HeightBucket {
                    height,
                    nonunit: 0,
                    total: 0,
                })
                .collect();
            for r in &per_cover_rises {
                let e = &mut b[r.lower_height];
                e.total += 1;
                if pick(r) != 1 {
                    e.nonunit += 1;
                }
            }
            b.retain(|e| e.total > 0);
            b
        };
        let by_height_join = bucket(|r| r.delta_j);
        let by_height_meet = bucket(|r| r.delta_m);

        let bottom = lat.bottom();
        let top = lat.top();
        let atoms = lat.atoms();
        let coatoms = lat.coatoms();
        let atoms_nonunit = per_cover_rises
            .iter()
            .filter(|r| r.lower == bottom && r.delta_m != 1)
            .count();
        let coatoms_nonunit = per_cover_rises
            .iter()
            .filter(|r| r.upper == top && r.delta_j != 1)
            .count();

        RiseReport {
            lattice_size: lat.size(),
            cover_count,
            nur_join_abs,
            nur_meet_abs,
            nur_join_rel: Fraction::new(nur_join_abs, cover_count),
            nur_meet_rel: Fraction::new(nur_meet_abs, cover_count),
            per_cover_rises,
            by_height_join,
            by_height_meet,
            atoms_nonunit_meet: Fraction::new(atoms_nonunit, atoms.len()),
            coatoms_nonunit_join: Fraction::new(coatoms_nonunit, coatoms.len()),
        }
    }

    pub fn from_lattice(lat: &ConceptLattice) -> RiseReport {
        RiseReport::new(lat, &lat.element_stats())
    }

    /// `((non-unit meet-rises at atoms, atoms), (non-unit join-rises at
    /// coatoms, coatoms))`.
    pub fn atom_coatom_summary(&self) -> ((usize, usize), (usize, usize)) {
        (
            (self.atoms_nonunit_meet.count, self.atoms_nonunit_meet.of),
            (
                self.coatoms_nonunit_join.count,
                self.coatoms_nonunit_join.of,
            ),
        )
    }

    pub fn covers_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["lower", "upper", "delta_j", "delta_m", "lower_height"])
            .unwrap();
        for r in &self.per_cover_rises {
            w.serialize((r.lower, r.upper, r.delta_j, r.delta_m, r.lower_height))
                .unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }

    /// One row per height: non-unit and total counts for both sides.
    pub fn by_height_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "height",
            "join_nonunit",
            "join_total",
            "meet_nonunit",
            "meet_total",
        ])
        .unwrap();
        for (j, m) in self.by_height_join.iter().zip(&self.by_height_meet) {
            debug_assert_eq!(j.height, m.height);
            w.serialize((j.height, j.nonunit, j.total, m.nonunit, m.total))
                .unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }
}

/// Header of [`summary_row`].
pub const SUMMARY_HEADER: [&str; 9] = [
    "dataset",
    "size",
    "covers",
    "nur_join_abs",
    "nur_join_rel",
    "nur_meet_abs",
    "nur_meet_rel",
    "atoms_nonunit_meet",
    "coatoms_nonunit_join",
];

pub fn summary_row(name: &str, r: &RiseReport) -> [String; 9] {
    [
        name.to_string(),
        r.lattice_size.to_string(),
        r.cover_count.to_string(),
        r.nur_join_abs.to_string(),
        r.nur_join_rel.rounded(),
        r.nur_meet_abs.to_string(),
        r.nur_meet_rel.rounded(),
        r.atoms_nonunit_meet.to_string(),
        r.coatoms_nonunit_join.to_string(),
    ]
}

pub fn summary_csv(rows: &[(String, RiseReport)]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SUMMARY_HEADER).unwrap();
    for (name, r) in rows {
        w.write_record(summary_row(name, r)).unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn report(ctx: &crate::FormalContext) -> (ConceptLattice, RiseReport) {
        let lat = ConceptLattice::from_context(ctx);
        let r = RiseReport::from_lattice(&lat);
        (lat, r)
    }

    #[test]
    fn rounding_is_half_up() {
        assert_eq!(Fraction::new(30, 62).rounded(), "0.48");
        assert_eq!(Fraction::new(1, 8).rounded(), "0.13");
        assert_eq!(Fraction::new(5, 18).rounded(), "0.28");
        assert_eq!(Fraction::new(0, 0).rounded(), "0.00");
        assert_eq!(Fraction::new(3, 3).rounded(), "1.00");
        assert_eq!(Fraction::new(1, 200).rounded(), "0.01");
        assert_eq!(Fraction::new(1, 201).rounded(), "0.00");
    }

    #[test]
    fn m3_rises() {
        let (lat, r) = report(&catalog::m3());
        assert_eq!(r.cover_count, 6);
        assert_eq!(r.nur_join_abs, 3);
        assert_eq!(r.nur_meet_abs, 3);
        assert_eq!(r.nur_join_rel.rounded(), "0.50");
        let stats = lat.element_stats();
        for &a in lat.atoms() {
            assert_eq!(rise(&lat, &stats, a, lat.top()).unwrap(), (2, 1));
        }
        assert!(rise(&lat, &stats, lat.top(), lat.bottom()).is_err());
    }

    #[test]
    fn n5_rises() {
        let (lat, r) = report(&catalog::n5());
        assert_eq!((r.nur_join_abs, r.nur_meet_abs), (1, 1));
        let stats = lat.element_stats();
        // the atom with no element between it and the top
        let lone = lat
            .atoms()
            .iter()
            .copied()
            .find(|&a| lat.is_cover(a, lat.top()))
            .unwrap();
        assert_eq!(rise(&lat, &stats, lone, lat.top()).unwrap().0, 2);
    }

    #[test]
    fn boolean_rises_are_unit() {
        let (_, r) = report(&catalog::contranominal(3));
        assert_eq!(r.cover_count, 12);
        assert!(r
            .per_cover_rises
            .iter()
            .all(|c| c.delta_j == 1 && c.delta_m == 1));
    }

    #[test]
    fn single_element_lattice() {
        let (_, r) = report(&crate::FormalContext::empty());
        assert_eq!(r.lattice_size, 1);
        assert_eq!(r.cover_count, 0);
        assert_eq!(r.nur_join_rel.value(), 0.0);
        assert!(r.by_height_join.is_empty());
        assert_eq!(r.atom_coatom_summary(), ((0, 0), (0, 0)));
    }

    #[test]
    fn csv_shapes() {
        let (_, r) = report(&catalog::n5());
        let covers = r.covers_csv();
        assert!(covers.starts_with("lower,upper,delta_j,delta_m,lower_height\n"));
        assert_eq!(covers.lines().count(), 1 + r.cover_count);
        let heights = r.by_height_csv();
        assert_eq!(heights.lines().count(), 1 + r.by_height_join.len());
        let summary = summary_csv(&[("n5".into(), r)]);
        assert_eq!(
            summary.lines().nth(1).unwrap(),
            "n5,5,5,1,0.20,1,0.20,1/2,1/2"
        );
    }
}
