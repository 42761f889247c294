//! Pseudospectrum and pseudozero fields over rectangular grids in the complex
//! plane, and their level curves.

mod contour;
mod render;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use contour::{contour_extract, ContourLevel, Polyline};
pub use render::{contours_to_csv, field_to_csv, render_svg, FieldMetadata, SvgOptions};
pub(crate) use render::escape;

use crate::companion::CompanionMatrix;
use crate::exact_poly::{
    euclid_poly, shifted_euclid_poly, Basis, Binary64Evaluator, EvalPrecision, ExactPolynomial, ExtendedEvaluator,
};
use crate::spectra::HessenbergRows;
use crate::{Error, Result};

/// Default cap on grid nodes per field.
pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

/// Relative accuracy requested from [`sigma_min`].
const SIGMA_REL_TOL: f64 = 1e-10;
const SIGMA_MAX_ITER: usize = 300;

/// Rectangular grid `nx` by `ny`, nodes on the boundary included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(re: (f64, f64), im: (f64, f64), nx: usize, ny: usize) -> Result<Self> {
        let g = Self {
            re_min: re.0,
            re_max: re.1,
            im_min: im.0,
            im_max: im.1,
            nx,
            ny,
        };
        g.validate()?;
        Ok(g)
    }

    /// Window used for the `k = 6` figures: contains the circle of radius 1.118
    /// about `-1/2` with some margin.
    pub fn figure_default() -> Self {
        Self {
            re_min: -1.8,
            re_max: 0.8,
            im_min: -1.3,
            im_max: 1.3,
            nx: 400,
            ny: 400,
        }
    }

    /// Square of half-width `half` about `center`, `n` nodes per side.
    pub fn square(center: Complex64, half: f64, n: usize) -> Result<Self> {
        Self::new((center.re - half, center.re + half), (center.im - half, center.im + half), n, n)
    }

    /// Same window at a different resolution.
    pub fn with_resolution(self, nx: usize, ny: usize) -> Result<Self> {
        Self::new((self.re_min, self.re_max), (self.im_min, self.im_max), nx, ny)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.re_min, self.re_max, self.im_min, self.im_max].iter().all(|v| v.is_finite());
        if !finite || !(self.re_min < self.re_max) || !(self.im_min < self.im_max) {
            return Err(Error::InvalidArgument(format!(
                "grid window [{}, {}] x [{}, {}] is empty or not finite",
                self.re_min, self.re_max, self.im_min, self.im_max
            )));
        }
        if self.nx == 0 || self.ny == 0 {
            return Err(Error::InvalidArgument("grid needs at least one node per axis".into()));
        }
        Ok(())
    }

    pub fn check_budget(&self, budget: usize) -> Result<()> {
        let nodes = self.nx.saturating_mul(self.ny);
        if nodes > budget {
            return Err(Error::GridBudget { nodes, budget });
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dx(&self) -> f64 {
        if self.nx > 1 {
            (self.re_max - self.re_min) / (self.nx - 1) as f64
        } else {
            0.0
        }
    }

    pub fn dy(&self) -> f64 {
        if self.ny > 1 {
            (self.im_max - self.im_min) / (self.ny - 1) as f64
        } else {
            0.0
        }
    }

    pub fn x(&self, ix: usize) -> f64 {
        // measured from the center so symmetric windows give mirrored nodes exactly
        0.5 * (self.re_min + self.re_max) + (ix as f64 - 0.5 * (self.nx - 1) as f64) * self.dx()
    }

    pub fn y(&self, iy: usize) -> f64 {
        0.5 * (self.im_min + self.im_max) + (iy as f64 - 0.5 * (self.ny - 1) as f64) * self.dy()
    }

    /// Node `index = iy * nx + ix`.
    pub fn node(&self, index: usize) -> Complex64 {
        Complex64::new(self.x(index % self.nx), self.y(index / self.nx))
    }

    /// Index of the node closest to `z`, clamped to the grid.
    pub fn nearest(&self, z: Complex64) -> usize {
        let snap = |v: f64, lo: f64, h: f64, n: usize| -> usize {
            if n == 1 {
                0
            } else {
                ((v - lo) / h).round().clamp(0.0, (n - 1) as f64) as usize
            }
        };
        let ix = snap(z.re, self.re_min, self.dx(), self.nx);
        let iy = snap(z.im, self.im_min, self.dy(), self.ny);
        iy * self.nx + ix
    }

    /// Larger side of the window.
    pub fn diameter(&self) -> f64 {
        (self.re_max - self.re_min).max(self.im_max - self.im_min)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    Pseudospectrum,
    PseudozeroMonomial,
    PseudozeroShifted,
}

impl FieldKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FieldKind::Pseudospectrum => "pseudospectrum",
            FieldKind::PseudozeroMonomial => "pseudozero_monomial",
            FieldKind::PseudozeroShifted => "pseudozero_shifted",
        }
    }
}

impl std::fmt::Display for FieldKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Values at the nodes of a grid, row-major by imaginary part. Nodes where the
/// value could not be computed hold `NaN` and are listed in `invalid`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScalarField {
    pub spec: GridSpec,
    pub kind: FieldKind,
    pub k: u32,
    pub values: Vec<f64>,
    pub invalid: Vec<usize>,
}

impl ScalarField {
    fn from_results(spec: GridSpec, kind: FieldKind, k: u32, results: Vec<Option<f64>>) -> Self {
        let invalid = (0..results.len()).filter(|&i| results[i].is_none()).collect();
        let values = results.into_iter().map(|v| v.unwrap_or(f64::NAN)).collect();
        Self {
            spec,
            kind,
            k,
            values,
            invalid,
        }
    }

    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.spec.nx + ix]
    }

    /// Smallest valid value and its node.
    pub fn min(&self) -> Option<(usize, f64)> {
        self.values
            .iter()
            .copied()
            .enumerate()
            .filter(|(_, v)| v.is_finite())
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }

    pub fn max(&self) -> Option<f64> {
        self.values.iter().copied().filter(|v| v.is_finite()).max_by(f64::total_cmp)
    }
}

/// Smallest singular value of `zI - m`.
pub fn sigma_min(m: &CompanionMatrix, z: Complex64) -> f64 {
    crate::spectra::sigma_min(&HessenbergRows::from_companion(m), z, SIGMA_REL_TOL, SIGMA_MAX_ITER)
}

/// `sigma_min(zI - m)` at every node.
pub fn pseudospectrum_field(m: &CompanionMatrix, g: &GridSpec, budget: usize) -> Result<ScalarField> {
    g.validate()?;
    g.check_budget(budget)?;
    let rows = HessenbergRows::from_companion(m);
    let values: Vec<Option<f64>> = (0..g.len())
        .into_par_iter()
        .map(|i| {
            let s = crate::spectra::sigma_min(&rows, g.node(i), SIGMA_REL_TOL, SIGMA_MAX_ITER);
            s.is_finite().then_some(s)
        })
        .collect();
    Ok(ScalarField::from_results(*g, FieldKind::Pseudospectrum, m.k(), values))
}

enum Evaluator {
    Binary64(Binary64Evaluator),
    Extended(ExtendedEvaluator),
}

impl Evaluator {
    fn build<P: ExactPolynomial>(p: &P, precision: EvalPrecision) -> Result<Self> {
        Ok(match precision {
            EvalPrecision::Binary64 => Evaluator::Binary64(Binary64Evaluator::new(p)?),
            EvalPrecision::Extended(bits) => {
                if bits < 53 {
                    return Err(Error::InsufficientPrecision(format!(
                        "{bits} bits is below binary64"
                    )));
                }
                Evaluator::Extended(ExtendedEvaluator::new(p, bits))
            }
        })
    }

    /// `|p(z)| / sum |c_j| |z|^j`, `None` on overflow.
    fn ratio(&self, z: Complex64) -> Option<f64> {
        let r = match self {
            Evaluator::Binary64(e) => e.relative_residual(z).ok()?,
            Evaluator::Extended(e) => e.relative_residual(z),
        };
        r.is_finite().then_some(r)
    }
}

/// Coefficient-relative backward error of `E_k` at every node: in the
/// monomial basis `|E_k(z)| / B_k(|z|)`, in the shifted basis the same with
/// `u = z + 1/2` and the shifted coefficients.
pub fn pseudozero_field(
    k: u32,
    basis: Basis,
    g: &GridSpec,
    precision: EvalPrecision,
    budget: usize,
) -> Result<ScalarField> {
    g.validate()?;
    g.check_budget(budget)?;
    let (eval, shift, kind) = match basis {
        Basis::Monomial => (
            Evaluator::build(&euclid_poly(k)?, precision)?,
            0.0,
            FieldKind::PseudozeroMonomial,
        ),
        Basis::Shifted => (
            Evaluator::build(&shifted_euclid_poly(k)?, precision)?,
            0.5,
            FieldKind::PseudozeroShifted,
        ),
    };
    let values: Vec<Option<f64>> = (0..g.len())
        .into_par_iter()
        .map(|i| eval.ratio(g.node(i) + shift))
        .collect();
    Ok(ScalarField::from_results(*g, kind, k, values))
}

/// `count` values from `10^lo` to `10^hi`, equally spaced in the exponent.
pub fn log_levels(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![10f64.powf(lo)],
        _ => (0..count)
            .map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / (count - 1) as f64))
            .collect(),
    }
}
