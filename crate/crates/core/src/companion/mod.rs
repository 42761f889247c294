//! Height-1 companion matrices.
//!
//! `E_1 = [-1]`, `E_2` is one of four 2x2 seeds, and for `k >= 2`
//!
//! ```text
//!   E_{k+1} = [ T_k   c e_1 e_n^T ]      T_k = blockdiag([0], E_1, ..., E_{k-1})
//!             [ -1 J    E_k       ]            joined by -1 on the subdiagonal
//! ```
//!
//! where `J` places the `-1` on the subdiagonal between the two halves and `c`
//! is the corner entry. With all subdiagonal entries equal to `-1` (the default
//! seed) the corner is `+1`.
//!
//! Lawrence's construction for the Mandelbrot polynomials is provided as a
//! second family with the same storage.

mod io;

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use rug::Integer;
use serde::{Deserialize, Serialize};

pub use io::{export_matrix, import_matrix, MatrixFormat};

use crate::exact_poly::{euclid_poly, mandelbrot_poly, BigIntPoly};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Euclid,
    EuclidTilde,
    Mandelbrot,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Euclid => "euclid",
            Family::EuclidTilde => "euclid_tilde",
            Family::Mandelbrot => "mandelbrot",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclid" => Ok(Family::Euclid),
            "euclid_tilde" => Ok(Family::EuclidTilde),
            "mandelbrot" => Ok(Family::Mandelbrot),
            other => Err(Error::InvalidArgument(format!("unknown family `{other}`"))),
        }
    }
}

/// Square upper Hessenberg matrix with entries in {-1, 0, 1}, stored sparsely
/// with 0-based `(row, col)` keys in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompanionMatrix {
    n: usize,
    entries: BTreeMap<(usize, usize), i8>,
    family: Family,
    k: u32,
}

impl CompanionMatrix {
    /// Zero entries are dropped. Fails on entries outside {-1, 0, 1}, indices
    /// out of range, or anything below the first subdiagonal.
    pub fn from_entries(
        n: usize,
        entries: impl IntoIterator<Item = ((usize, usize), i8)>,
        family: Family,
        k: u32,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for ((i, j), v) in entries {
            if i >= n || j >= n {
                return Err(Error::InvalidArgument(format!(
                    "entry ({}, {}) outside a {n}x{n} matrix",
                    i + 1,
                    j + 1
                )));
            }
            if !(-1..=1).contains(&v) {
                return Err(Error::InvalidArgument(format!(
                    "entry ({}, {}) = {v} is not in {{-1, 0, 1}}",
                    i + 1,
                    j + 1
                )));
            }
            if j + 1 < i {
                return Err(Error::NotHessenberg { row: i + 1, col: j + 1 });
            }
            if v != 0 {
                map.insert((i, j), v);
            }
        }
        Ok(Self {
            n,
            entries: map,
            family,
            k,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// 0-based lookup.
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Nonzero entries, 0-based, in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), i8)> + '_ {
        self.entries.iter().map(|(&ij, &v)| (ij, v))
    }

    /// Entry `(i + 1, i)` for `i` in `0..n-1`.
    pub fn subdiagonal(&self) -> Vec<i8> {
        (1..self.n).map(|i| self.get(i, i - 1)).collect()
    }

    pub fn is_irreducible(&self) -> bool {
        self.subdiagonal().iter().all(|&s| s != 0)
    }

    /// Entry `(1, n)` in 1-based terms.
    pub fn corner(&self) -> i8 {
        if self.n == 0 {
            0
        } else {
            self.get(0, self.n - 1)
        }
    }

    pub fn height(&self) -> u32 {
        self.entries
            .values()
            .map(|v| v.unsigned_abs() as u32)
            .max()
            .unwrap_or(0)
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut a = vec![0.0; self.n * self.n];
        for (&(i, j), &v) in &self.entries {
            a[i * self.n + j] = f64::from(v);
        }
        a
    }

    pub fn to_dense_i64(&self) -> Vec<Vec<i64>> {
        let mut a = vec![vec![0i64; self.n]; self.n];
        for (&(i, j), &v) in &self.entries {
            a[i][j] = i64::from(v);
        }
        a
    }

    fn place(&self, into: &mut Vec<((usize, usize), i8)>, offset: usize) {
        into.extend(self.entries().map(|((i, j), v)| ((i + offset, j + offset), v)));
    }
}

/// Height `max |a_ij|` of an arbitrary dense integer matrix.
pub fn height_dense(rows: &[Vec<i64>]) -> u64 {
    rows.iter()
        .flatten()
        .map(|v| v.unsigned_abs())
        .max()
        .unwrap_or(0)
}

pub fn height(m: &CompanionMatrix) -> u32 {
    m.height()
}

/// The four 2x2 companion matrices of `x^2 + x + 1` with entries in {-1, 0, 1}
/// and a nonzero subdiagonal.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum E2Seed {
    /// `[[0, 1], [-1, -1]]`
    #[default]
    Standard,
    /// `[[0, -1], [1, -1]]`
    NegatedOffDiagonal,
    /// `[[-1, -1], [1, 0]]`
    SwappedDiagonal,
    /// `[[-1, 1], [-1, 0]]`
    SwappedNegated,
}

impl E2Seed {
    pub const ALL: [E2Seed; 4] = [
        E2Seed::Standard,
        E2Seed::NegatedOffDiagonal,
        E2Seed::SwappedDiagonal,
        E2Seed::SwappedNegated,
    ];

    pub fn matrix(self) -> [[i8; 2]; 2] {
        match self {
            E2Seed::Standard => [[0, 1], [-1, -1]],
            E2Seed::NegatedOffDiagonal => [[0, -1], [1, -1]],
            E2Seed::SwappedDiagonal => [[-1, -1], [1, 0]],
            E2Seed::SwappedNegated => [[-1, 1], [-1, 0]],
        }
    }

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&s| s == self).unwrap()
    }
}

impl std::str::FromStr for E2Seed {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "0" | "standard" => Ok(E2Seed::Standard),
            "1" | "negated_off_diagonal" => Ok(E2Seed::NegatedOffDiagonal),
            "2" | "swapped_diagonal" => Ok(E2Seed::SwappedDiagonal),
            "3" | "swapped_negated" => Ok(E2Seed::SwappedNegated),
            other => Err(Error::InvalidArgument(format!("unknown E2 seed `{other}`"))),
        }
    }
}

/// Knobs for the non-unique parts of the construction.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariantConfig {
    pub e2_seed: E2Seed,
    /// Order of the diagonal blocks of the top-level `T_{k-1}` inside `E_k`:
    /// index 0 is the `[0]` block and index `i >= 1` is `E_i`. `None` keeps
    /// the order `[0], E_1, ..., E_{k-2}`. Inner levels always use that order.
    pub block_order: Option<Vec<usize>>,
}

impl VariantConfig {
    pub fn with_seed(e2_seed: E2Seed) -> Self {
        Self {
            e2_seed,
            block_order: None,
        }
    }

    fn validate(&self, blocks: usize) -> Result<()> {
        if let Some(order) = &self.block_order {
            let mut seen = vec![false; blocks];
            if order.len() != blocks {
                return Err(Error::InvalidArgument(format!(
                    "block order has {} entries, expected {blocks}",
                    order.len()
                )));
            }
            for &b in order {
                if b >= blocks || std::mem::replace(&mut seen[b], true) {
                    return Err(Error::InvalidArgument(format!(
                        "block order {order:?} is not a permutation of 0..{blocks}"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn zero_block() -> CompanionMatrix {
    CompanionMatrix {
        n: 1,
        entries: BTreeMap::new(),
        family: Family::EuclidTilde,
        k: 1,
    }
}

/// Block diagonal with `-1` joining consecutive blocks on the subdiagonal.
fn assemble_tilde(blocks: &[&CompanionMatrix], k: u32) -> CompanionMatrix {
    let mut entries = Vec::new();
    let mut offset = 0;
    for (b, block) in blocks.iter().enumerate() {
        if b > 0 {
            entries.push(((offset, offset - 1), -1));
        }
        block.place(&mut entries, offset);
        offset += block.n;
    }
    CompanionMatrix::from_entries(offset, entries, Family::EuclidTilde, k)
        .expect("block assembly preserves Hessenberg form")
}

/// Corner value making the first-row expansion contribute `+1`: the minor of
/// the corner is triangular with diagonal `-s_i`, so `c = -prod(s_i)`.
fn corner_value(subdiagonal: impl Iterator<Item = i8>) -> i8 {
    -subdiagonal.product::<i8>()
}

fn assemble_next(tilde: &CompanionMatrix, prev: &CompanionMatrix, k_next: u32) -> CompanionMatrix {
    let half = tilde.n;
    let n = 2 * half;
    let mut entries = Vec::with_capacity(tilde.nnz() + prev.nnz() + 2);
    tilde.place(&mut entries, 0);
    prev.place(&mut entries, half);
    entries.push(((half, half - 1), -1));
    let subdiagonal = tilde
        .subdiagonal()
        .into_iter()
        .chain(std::iter::once(-1))
        .chain(prev.subdiagonal());
    entries.push(((0, n - 1), corner_value(subdiagonal)));
    CompanionMatrix::from_entries(n, entries, Family::Euclid, k_next)
        .expect("block assembly preserves Hessenberg form")
}

/// `E_1, ..., E_k` with inner levels in the default block order.
fn companion_chain(k: u32, seed: E2Seed) -> Vec<CompanionMatrix> {
    let mut chain = vec![CompanionMatrix {
        n: 1,
        entries: BTreeMap::from([((0, 0), -1)]),
        family: Family::Euclid,
        k: 1,
    }];
    if k >= 2 {
        let s = seed.matrix();
        let entries = (0..2).flat_map(|i| (0..2).map(move |j| ((i, j), s[i][j])));
        chain.push(CompanionMatrix::from_entries(2, entries, Family::Euclid, 2).unwrap());
    }
    let zero = zero_block();
    for next in 3..=k {
        let prev = next - 1;
        let mut blocks: Vec<&CompanionMatrix> = vec![&zero];
        blocks.extend(chain.iter().take(prev as usize - 1));
        let tilde = assemble_tilde(&blocks, prev);
        let m = assemble_next(&tilde, &chain[prev as usize - 1], next);
        chain.push(m);
    }
    chain
}

fn tilde_blocks<'a>(
    chain: &'a [CompanionMatrix],
    zero: &'a CompanionMatrix,
    k: u32,
    order: Option<&[usize]>,
) -> Vec<&'a CompanionMatrix> {
    let natural: Vec<&CompanionMatrix> = std::iter::once(zero)
        .chain(chain.iter().take(k as usize - 1))
        .collect();
    match order {
        Some(order) => order.iter().map(|&b| natural[b]).collect(),
        None => natural,
    }
}

/// `T_k = blockdiag([0], E_1, ..., E_{k-1})` with `-1` junctions; its
/// characteristic polynomial is `x E_1 ... E_{k-1} = E_k - 1`.
pub fn build_tilde(k: u32) -> Result<CompanionMatrix> {
    build_tilde_with(k, &VariantConfig::default())
}

/// As [`build_tilde`], with `cfg.block_order` (length `k`) permuting the blocks.
pub fn build_tilde_with(k: u32, cfg: &VariantConfig) -> Result<CompanionMatrix> {
    if k < 2 {
        return Err(Error::Precondition("the tilde matrix needs k >= 2".into()));
    }
    cfg.validate(k as usize)?;
    let chain = companion_chain(k - 1, cfg.e2_seed);
    let zero = zero_block();
    let blocks = tilde_blocks(&chain, &zero, k, cfg.block_order.as_deref());
    Ok(assemble_tilde(&blocks, k))
}

/// The height-1 companion matrix `E_k` of dimension `2^(k-1)`.
pub fn build_companion(k: u32, cfg: &VariantConfig) -> Result<CompanionMatrix> {
    if k == 0 {
        return Err(Error::Precondition("companion matrices start at k = 1".into()));
    }
    if k <= 2 {
        if cfg.block_order.as_ref().is_some_and(|o| o.len() > 1) {
            return Err(Error::InvalidArgument(format!(
                "E_{k} has no block structure to reorder"
            )));
        }
        return Ok(companion_chain(k, cfg.e2_seed).pop().unwrap());
    }
    cfg.validate(k as usize - 1)?;
    let chain = companion_chain(k - 1, cfg.e2_seed);
    let zero = zero_block();
    let blocks = tilde_blocks(&chain, &zero, k - 1, cfg.block_order.as_deref());
    let tilde = assemble_tilde(&blocks, k - 1);
    Ok(assemble_next(&tilde, chain.last().unwrap(), k))
}

/// Default-configuration shorthand.
pub fn euclid_companion(k: u32) -> Result<CompanionMatrix> {
    build_companion(k, &VariantConfig::default())
}

/// Lawrence's companion matrix for the Mandelbrot polynomial `p_n`:
/// `M_2 = [-1]` and
///
/// ```text
///   M_{n+1} = [ M_n      0   -e_1 e_d^T ]
///             [ -e_d^T   0    0         ]
///             [ 0      -e_1   M_n       ]
/// ```
///
/// of dimension `2^(n-1) - 1`.
pub fn build_mandelbrot_companion(n: u32) -> Result<CompanionMatrix> {
    if n < 2 {
        return Err(Error::Precondition("Mandelbrot companions start at n = 2".into()));
    }
    let mut m = CompanionMatrix {
        n: 1,
        entries: BTreeMap::from([((0, 0), -1)]),
        family: Family::Mandelbrot,
        k: 2,
    };
    for next in 3..=n {
        let d = m.n;
        let size = 2 * d + 1;
        let mut entries = Vec::with_capacity(2 * m.nnz() + 3);
        m.place(&mut entries, 0);
        m.place(&mut entries, d + 1);
        entries.push(((0, size - 1), -1));
        entries.push(((d, d - 1), -1));
        entries.push(((d + 1, d), -1));
        m = CompanionMatrix::from_entries(size, entries, Family::Mandelbrot, next)?;
    }
    Ok(m)
}

/// Exact `det(x I - m)` by the Hessenberg expansion
/// `D_i = sum_j (-1)^(i+j) b_{j,i} D_{j-1} prod_{l=j}^{i-1} b_{l+1,l}`,
/// which costs one big-integer multiply-add per stored entry.
pub fn det_charpoly_at(m: &CompanionMatrix, x: &Integer) -> Integer {
    let n = m.n;
    let mut columns: Vec<Vec<(usize, i8)>> = vec![Vec::new(); n];
    for ((i, j), v) in m.entries() {
        if i <= j {
            columns[j].push((i, v));
        }
    }
    // b_{l+1,l} = -a_{l+1,l}; prefix sign products and positions of zeros
    let sub: Vec<i8> = m.subdiagonal().iter().map(|s| -s).collect();
    let mut prefix_sign = vec![1i8; n];
    let mut last_zero = vec![None; n];
    for l in 1..n {
        let s = sub[l - 1];
        prefix_sign[l] = prefix_sign[l - 1] * if s == 0 { 1 } else { s };
        last_zero[l] = if s == 0 { Some(l - 1) } else { last_zero[l - 1] };
    }
    // product of b_{l+1,l} for l in j..i (0-based, rows j+1..=i)
    let sub_product = |j: usize, i: usize| -> i8 {
        if j == i {
            return 1;
        }
        if last_zero[i].is_some_and(|z| z >= j) {
            return 0;
        }
        prefix_sign[i] * prefix_sign[j]
    };

    let mut d: Vec<Integer> = Vec::with_capacity(n + 1);
    d.push(Integer::from(1));
    for i in 0..n {
        let mut acc = Integer::new();
        let mut diag_seen = false;
        for &(j, a) in &columns[i] {
            let b = if j == i {
                diag_seen = true;
                Integer::from(x - a)
            } else {
                Integer::from(-a)
            };
            let sign = sub_product(j, i) * if (i + j) % 2 == 0 { 1 } else { -1 };
            if sign == 0 {
                continue;
            }
            let term = b * &d[j];
            if sign > 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        if !diag_seen {
            acc += Integer::from(x * &d[i]);
        }
        d.push(acc);
    }
    d.pop().unwrap()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharpolyMismatch {
    pub point: String,
    pub det: String,
    pub poly: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharpolyVerification {
    pub verified: bool,
    pub points_checked: usize,
    pub first_mismatch: Option<CharpolyMismatch>,
}

impl CharpolyVerification {
    pub fn into_result(self) -> Result<()> {
        match self.first_mismatch {
            None => Ok(()),
            Some(m) => Err(Error::CharpolyMismatch {
                point: m.point,
                det: m.det,
                poly: m.poly,
            }),
        }
    }
}

/// Largest dimension accepted by [`verify_charpoly`].
pub const EXACT_VERIFY_MAX_DIM: usize = 512;

/// Compare `det(x I - m)` with `p(x)` at `deg p + 1` consecutive integers
/// centred on zero; agreement there proves `det(x I - m) = p` when `m` has
/// dimension `deg p`.
pub fn verify_charpoly_matrix(m: &CompanionMatrix, p: &BigIntPoly) -> Result<CharpolyVerification> {
    let deg = p.degree().unwrap_or(0);
    if m.n() != deg {
        return Err(Error::InvalidArgument(format!(
            "matrix dimension {} differs from polynomial degree {deg}",
            m.n()
        )));
    }
    let lo = -((deg / 2) as i64);
    let points: Vec<i64> = (lo..=lo + deg as i64).collect();
    let mut outcomes: Vec<Option<CharpolyMismatch>> = points
        .par_iter()
        .map(|&x| {
            let x = Integer::from(x);
            let det = det_charpoly_at(m, &x);
            let poly = p.eval_integer(&x);
            (det != poly).then(|| CharpolyMismatch {
                point: x.to_string(),
                det: det.to_string(),
                poly: poly.to_string(),
            })
        })
        .collect();
    let first_mismatch = outcomes.iter_mut().find_map(Option::take);
    Ok(CharpolyVerification {
        verified: first_mismatch.is_none(),
        points_checked: points.len(),
        first_mismatch,
    })
}

/// Exact proof that `det(x I - E_k) = E_k(x)` for the given variant.
pub fn verify_charpoly(k: u32, cfg: &VariantConfig) -> Result<CharpolyVerification> {
    if k == 0 || k > 10 {
        return Err(Error::Precondition(format!(
            "exact verification is limited to 1 <= k <= 10 (dimension <= {EXACT_VERIFY_MAX_DIM})"
        )));
    }
    let m = build_companion(k, cfg)?;
    verify_charpoly_matrix(&m, &euclid_poly(k)?)
}

/// Same check for Lawrence's Mandelbrot companions.
pub fn verify_mandelbrot_charpoly(n: u32) -> Result<CharpolyVerification> {
    if !(2..=10).contains(&n) {
        return Err(Error::Precondition("Mandelbrot verification needs 2 <= n <= 10".into()));
    }
    verify_charpoly_matrix(&build_mandelbrot_companion(n)?, &mandelbrot_poly(n)?)
}

/// The `(1, n)` entry of the default `E_k`; always `+1` since `deg E_k` is even.
pub fn corner_sign(k: u32) -> Result<i8> {
    if k < 2 {
        return Err(Error::Precondition("the corner entry is defined for k >= 2".into()));
    }
    Ok(euclid_companion(k)?.corner())
}
