//! Merge bands of the three representations of `E_k`: monomial coefficients,
//! coefficients in `u = lambda + 1/2`, and the companion matrix.

use serde::Serialize;

use super::merge::{merge_profile, MergeProfile};
use crate::companion::euclid_companion;
use crate::exact_poly::{Basis, EvalPrecision};
use crate::fields::{pseudospectrum_field, pseudozero_field, GridSpec, DEFAULT_NODE_BUDGET};
use crate::spectra::eigenvalues;
use crate::{Error, Result};

/// A range of `eps`, reported with its base-10 exponents.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
    pub log10_lo: f64,
    pub log10_hi: f64,
}

impl Band {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            log10_lo: lo.log10(),
            log10_hi: hi.log10(),
        }
    }

    /// Both ends inside `[10^lo_exp, 10^hi_exp]`.
    pub fn within_exponents(&self, lo_exp: f64, hi_exp: f64) -> bool {
        self.log10_lo >= lo_exp && self.log10_hi <= hi_exp
    }

    /// Both ends strictly above the other band's.
    pub fn above(&self, other: &Band) -> bool {
        self.lo > other.lo && self.hi > other.hi
    }
}

/// The merge band runs from the first `eps` at which the regions of two
/// roots join to the `eps` at which the root-carrying regions have dropped
/// to three quarters of the roots: separate circles and some merged regions
/// are both present in that range.
pub fn merge_band(p: &MergeProfile) -> Option<Band> {
    let lo = p.first()?;
    let hi = p.level_for_components(3 * p.roots / 4)?.max(lo);
    Some(Band::new(lo, hi))
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonRow {
    pub k: u32,
    pub grid: GridSpec,
    pub monomial: Band,
    pub shifted: Band,
    pub matrix: Band,
    /// Arithmetic used for the polynomial fields.
    pub polynomial_precision: String,
    /// `matrix.lo / monomial.lo`.
    pub matrix_over_monomial: f64,
    pub profiles: Vec<(String, MergeProfile)>,
}

impl ComparisonRow {
    pub fn strictly_ordered(&self) -> bool {
        self.matrix.above(&self.shifted) && self.shifted.above(&self.monomial)
    }
}

pub fn precision_label(p: EvalPrecision) -> String {
    match p {
        EvalPrecision::Binary64 => "binary64".into(),
        EvalPrecision::Extended(bits) => format!("extended-{bits}"),
    }
}

/// Merge bands at generation `k` on the grid `g`. Extended precision is used
/// for the polynomial fields from `k = 7` on.
pub fn conditioning_comparison(k: u32, g: &GridSpec) -> Result<ComparisonRow> {
    if !(2..=9).contains(&k) {
        return Err(Error::Precondition(format!("conditioning comparison supports 2 <= k <= 9, got {k}")));
    }
    let m = euclid_companion(k)?;
    let roots = eigenvalues(&m)?;
    let precision = EvalPrecision::auto(k);
    let budget = DEFAULT_NODE_BUDGET.max(g.len());
    let fields = [
        ("monomial", pseudozero_field(k, Basis::Monomial, g, precision, budget)?),
        ("shifted", pseudozero_field(k, Basis::Shifted, g, precision, budget)?),
        ("matrix", pseudospectrum_field(&m, g, budget)?),
    ];
    let mut bands = Vec::new();
    let mut profiles = Vec::new();
    for (name, f) in &fields {
        let p = merge_profile(f, &roots);
        if p.coincident > 0 {
            return Err(Error::Precondition(format!(
                "grid {}x{} too coarse: {} roots share nodes",
                g.nx, g.ny, p.coincident
            )));
        }
        bands.push(merge_band(&p).ok_or_else(|| Error::Precondition(format!("{name} regions never merge on this grid")))?);
        profiles.push((name.to_string(), p));
    }
    Ok(ComparisonRow {
        k,
        grid: *g,
        monomial: bands[0],
        shifted: bands[1],
        matrix: bands[2],
        polynomial_precision: precision_label(precision),
        matrix_over_monomial: bands[2].lo / bands[0].lo,
        profiles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn band_helpers() {
        let b = Band::new(1e-3, 1e-2);
        assert!((b.log10_lo + 3.0).abs() < 1e-12);
        assert!(b.within_exponents(-4.0, -1.0));
        assert!(!b.within_exponents(-2.5, -1.0));
        assert!(Band::new(1e-2, 1e-1).above(&b));
    }

    #[test]
    fn k4_monomial_is_worst() {
        // at this size the shifted basis still beats the matrix
        let g = GridSpec::figure_default().with_resolution(160, 160).unwrap();
        let row = conditioning_comparison(4, &g).unwrap();
        assert!(row.matrix.above(&row.monomial) && row.shifted.above(&row.monomial), "{row:?}");
        assert!(!row.strictly_ordered());
        assert!(conditioning_comparison(12, &g).is_err());
    }
}
