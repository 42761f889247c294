//! Automated version of the visual comparison between contour plots: loops
//! around single roots, regions holding several roots, and contour spacing
//! of about a percent of the window.

use num_complex::Complex64;
use serde::Serialize;

use crate::fields::{contour_extract, ContourLevel, Polyline, ScalarField};

/// Accepted range for the median spacing as a fraction of the window.
pub const SPACING_RANGE: (f64, f64) = (0.002, 0.05);

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimilarityReport {
    pub levels: Vec<f64>,
    /// Closed curves at the lowest level holding exactly one root.
    pub single_root_loops: usize,
    /// Closed curves at the highest level holding two or more roots.
    pub merged_regions: usize,
    /// Median growth of the equivalent radius between consecutive levels,
    /// over the window's larger side.
    pub spacing_fraction: Option<f64>,
    pub circles_met: bool,
    pub merged_met: bool,
    pub spacing_met: bool,
}

impl SimilarityReport {
    pub fn all_met(&self) -> bool {
        self.circles_met && self.merged_met && self.spacing_met
    }
}

fn roots_inside(p: &Polyline, roots: &[Complex64]) -> usize {
    roots.iter().filter(|&&z| p.contains(z)).count()
}

/// Smallest closed curve of a level around `z`.
fn tightest(level: &ContourLevel, z: Complex64) -> Option<f64> {
    level
        .closed()
        .filter(|p| p.contains(z))
        .map(Polyline::area)
        .min_by(f64::total_cmp)
}

pub fn similarity_criteria(f: &ScalarField, roots: &[Complex64], levels: &[f64]) -> SimilarityReport {
    let contours = contour_extract(f, levels);
    let single_root_loops = contours
        .first()
        .map_or(0, |c| c.closed().filter(|p| roots_inside(p, roots) == 1).count());
    let merged_regions = contours
        .last()
        .map_or(0, |c| c.closed().filter(|p| roots_inside(p, roots) >= 2).count());

    let mut steps = Vec::new();
    for pair in contours.windows(2) {
        for &z in roots {
            if let (Some(a), Some(b)) = (tightest(&pair[0], z), tightest(&pair[1], z)) {
                let dr = (b / std::f64::consts::PI).sqrt() - (a / std::f64::consts::PI).sqrt();
                if dr > 0.0 {
                    steps.push(dr);
                }
            }
        }
    }
    steps.sort_by(f64::total_cmp);
    let spacing_fraction = (!steps.is_empty()).then(|| steps[steps.len() / 2] / f.spec.diameter());
    SimilarityReport {
        levels: levels.to_vec(),
        single_root_loops,
        merged_regions,
        spacing_fraction,
        circles_met: single_root_loops > 0,
        merged_met: merged_regions > 0,
        spacing_met: spacing_fraction.is_some_and(|s| s >= SPACING_RANGE.0 && s <= SPACING_RANGE.1),
    }
}
