//! LU factorization of `A - shift I` for a real upper Hessenberg `A`, with
//! partial pivoting between adjacent rows.
//!
//! Rows are stored sparsely. Elimination only ever combines the working row
//! with the next row of `A`, so the fill in row `j` of `U` is the union of the
//! patterns of rows `0..=j+1` of `A` right of column `j`. For the companion
//! matrices here that is the diagonal plus the corners of the enclosing
//! blocks, i.e. O(k) entries, and factor and solves cost O(n k).

use num_complex::Complex64;

use crate::companion::CompanionMatrix;
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Real upper Hessenberg matrix stored by rows, entries sorted by column.
#[derive(Clone, Debug)]
pub struct HessenbergRows {
    n: usize,
    rows: Vec<Vec<(usize, f64)>>,
    abs_sum: f64,
}

impl HessenbergRows {
    /// From a dense row-major matrix; entries below the subdiagonal are ignored.
    pub fn from_dense(a: &[f64], n: usize) -> Self {
        let rows: Vec<Vec<(usize, f64)>> = (0..n)
            .map(|i| {
                (i.saturating_sub(1)..n)
                    .filter(|&j| a[i * n + j] != 0.0)
                    .map(|j| (j, a[i * n + j]))
                    .collect()
            })
            .collect();
        Self::from_rows(n, rows)
    }

    pub fn from_companion(m: &CompanionMatrix) -> Self {
        let mut rows = vec![Vec::new(); m.n()];
        for ((i, j), v) in m.entries() {
            rows[i].push((j, f64::from(v)));
        }
        for r in &mut rows {
            r.sort_by_key(|&(j, _)| j);
        }
        Self::from_rows(m.n(), rows)
    }

    fn from_rows(n: usize, rows: Vec<Vec<(usize, f64)>>) -> Self {
        let abs_sum = rows.iter().flatten().map(|(_, v)| v.abs()).sum();
        Self { n, rows, abs_sum }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Row `i` of `A - shift I` from column `i - 1` on.
    fn shifted_row(&self, i: usize, shift: Complex64) -> Vec<(usize, Complex64)> {
        let mut out: Vec<(usize, Complex64)> = Vec::with_capacity(self.rows[i].len() + 1);
        let mut diagonal_seen = false;
        for &(j, v) in &self.rows[i] {
            if j == i {
                out.push((j, Complex64::new(v, 0.0) - shift));
                diagonal_seen = true;
            } else {
                if j > i && !diagonal_seen {
                    out.push((i, -shift));
                    diagonal_seen = true;
                }
                out.push((j, Complex64::new(v, 0.0)));
            }
        }
        if !diagonal_seen {
            out.push((i, -shift));
        }
        out
    }
}

fn leading(row: &[(usize, Complex64)], col: usize) -> Complex64 {
    match row.first() {
        Some(&(j, v)) if j == col => v,
        _ => ZERO,
    }
}

/// `a - m b` on sorted sparse rows, dropping column `drop`.
fn axpy(a: &[(usize, Complex64)], m: Complex64, b: &[(usize, Complex64)], drop: usize) -> Vec<(usize, Complex64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut p, mut q) = (0, 0);
    while p < a.len() || q < b.len() {
        let ja = a.get(p).map_or(usize::MAX, |e| e.0);
        let jb = b.get(q).map_or(usize::MAX, |e| e.0);
        let (j, v) = if ja < jb {
            p += 1;
            (ja, a[p - 1].1)
        } else if jb < ja {
            q += 1;
            (jb, -m * b[q - 1].1)
        } else {
            p += 1;
            q += 1;
            (ja, a[p - 1].1 - m * b[q - 1].1)
        };
        if j != drop {
            out.push((j, v));
        }
    }
    out
}

pub struct HessenbergLu {
    n: usize,
    /// Row `j` of `U`, starting with the diagonal.
    u: Vec<Vec<(usize, Complex64)>>,
    swapped: Vec<bool>,
    multipliers: Vec<Complex64>,
}

impl HessenbergLu {
    /// Factor `A - shift I`. An exactly zero pivot is replaced by `tiny` so
    /// solves stay finite.
    pub fn factor(a: &HessenbergRows, shift: Complex64, tiny: f64) -> Self {
        let n = a.n;
        let mut u = Vec::with_capacity(n);
        let mut swapped = vec![false; n.saturating_sub(1)];
        let mut multipliers = vec![ZERO; n.saturating_sub(1)];
        if n == 0 {
            return Self { n, u, swapped, multipliers };
        }
        let mut work = a.shifted_row(0, shift);
        for j in 0..n - 1 {
            let mut next = a.shifted_row(j + 1, shift);
            if leading(&next, j).norm_sqr() > leading(&work, j).norm_sqr() {
                std::mem::swap(&mut work, &mut next);
                swapped[j] = true;
            }
            if leading(&work, j) == ZERO {
                if work.first().map(|e| e.0) == Some(j) {
                    work[0].1 = Complex64::new(tiny, 0.0);
                } else {
                    work.insert(0, (j, Complex64::new(tiny, 0.0)));
                }
            }
            let m = leading(&next, j) / work[0].1;
            multipliers[j] = m;
            let reduced = if m == ZERO {
                next.into_iter().filter(|e| e.0 != j).collect()
            } else {
                axpy(&next, m, &work[1..], j)
            };
            u.push(work);
            work = reduced;
        }
        if leading(&work, n - 1) == ZERO {
            work = vec![(n - 1, Complex64::new(tiny, 0.0))];
        }
        u.push(work);
        Self { n, u, swapped, multipliers }
    }

    /// Solve `(A - shift I) x = b` in place.
    pub fn solve(&self, b: &mut [Complex64]) {
        let n = self.n;
        for j in 0..n.saturating_sub(1) {
            if self.swapped[j] {
                b.swap(j, j + 1);
            }
            let bj = b[j];
            b[j + 1] -= self.multipliers[j] * bj;
        }
        for i in (0..n).rev() {
            let row = &self.u[i];
            let mut s = b[i];
            for &(j, v) in &row[1..] {
                s -= v * b[j];
            }
            b[i] = s / row[0].1;
        }
    }

    /// Solve `(A - shift I)^H y = c` in place.
    pub fn solve_adjoint(&self, c: &mut [Complex64]) {
        let n = self.n;
        // U^H w = c by forward substitution; column i of U^H is row i of U
        for i in 0..n {
            let row = &self.u[i];
            c[i] /= row[0].1.conj();
            let ci = c[i];
            for &(j, v) in &row[1..] {
                c[j] -= v.conj() * ci;
            }
        }
        // y = G_0^H ... G_{n-2}^H w with G_j^H = P_j (I - conj(m_j) e_j e_{j+1}^T)
        for j in (0..n.saturating_sub(1)).rev() {
            let next = c[j + 1];
            c[j] -= self.multipliers[j].conj() * next;
            if self.swapped[j] {
                c.swap(j, j + 1);
            }
        }
    }
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(v: &mut [Complex64]) -> f64 {
    let s = norm(v);
    if s > 0.0 && s.is_finite() {
        for z in v.iter_mut() {
            *z /= s;
        }
    }
    s
}

fn start_vector(n: usize) -> Vec<Complex64> {
    // deterministic and unlikely to be orthogonal to any eigenvector
    (0..n)
        .map(|i| Complex64::new(1.0 + (i as f64 * 0.618_033_988_75).fract(), 0.0))
        .collect()
}

/// Unit right and left eigenvectors for an eigenvalue approximation `lambda`
/// by inverse iteration.
pub fn eigenvectors(a: &HessenbergRows, lambda: Complex64) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let n = a.n;
    let scale = a.abs_sum.max(1.0);
    let attempt = |shift: Complex64| -> Option<(Vec<Complex64>, Vec<Complex64>)> {
        let lu = HessenbergLu::factor(a, shift, f64::EPSILON * scale);
        let mut x = start_vector(n);
        let mut y = start_vector(n);
        for _ in 0..3 {
            lu.solve(&mut x);
            lu.solve_adjoint(&mut y);
            let (sx, sy) = (normalize(&mut x), normalize(&mut y));
            if !(sx.is_finite() && sy.is_finite() && sx > 0.0 && sy > 0.0) {
                return None;
            }
        }
        Some((x, y))
    };
    attempt(lambda)
        .or_else(|| {
            let nudge = f64::EPSILON.sqrt() * lambda.norm().max(1.0);
            attempt(lambda + Complex64::new(nudge, nudge))
        })
        .ok_or_else(|| Error::InverseIteration(lambda.to_string()))
}

/// Smallest singular value of `shift I - A` by inverse iteration on
/// `(A - shift I)^H (A - shift I)`, to a relative change below `rel_tol`.
pub fn sigma_min(a: &HessenbergRows, shift: Complex64, rel_tol: f64, max_iter: usize) -> f64 {
    let n = a.n;
    if n == 0 {
        return 0.0;
    }
    let lu = HessenbergLu::factor(a, shift, f64::MIN_POSITIVE.sqrt() * a.abs_sum.max(1.0));
    let mut v = start_vector(n);
    normalize(&mut v);
    let mut estimate = f64::INFINITY;
    for _ in 0..max_iter {
        lu.solve(&mut v);
        let w = normalize(&mut v);
        lu.solve_adjoint(&mut v);
        let z = normalize(&mut v);
        if !(w.is_finite() && z.is_finite()) || w == 0.0 {
            return 0.0;
        }
        // at a right singular vector both solves scale by 1/sigma
        let next = 1.0 / (w * z).sqrt();
        let converged = (estimate - next).abs() <= rel_tol * next;
        estimate = next;
        if converged {
            break;
        }
    }
    estimate
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hessenberg(n: usize, seed: u64) -> Vec<f64> {
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in i.saturating_sub(1)..n {
                a[i * n + j] = next();
            }
        }
        a
    }

    fn matvec(a: &[f64], n: usize, shift: Complex64, x: &[Complex64]) -> Vec<Complex64> {
        (0..n)
            .map(|i| (0..n).map(|j| a[i * n + j] * x[j]).sum::<Complex64>() - shift * x[i])
            .collect()
    }

    fn adjoint_matvec(a: &[f64], n: usize, shift: Complex64, y: &[Complex64]) -> Vec<Complex64> {
        (0..n)
            .map(|j| (0..n).map(|i| a[i * n + j] * y[i]).sum::<Complex64>() - shift.conj() * y[j])
            .collect()
    }

    fn check_solves(a: &[f64], n: usize, shift: Complex64) {
        let lu = HessenbergLu::factor(&HessenbergRows::from_dense(a, n), shift, 1e-300);
        let b: Vec<Complex64> = (0..n).map(|i| Complex64::new(i as f64, 1.0 - i as f64)).collect();
        let mut x = b.clone();
        lu.solve(&mut x);
        let r = matvec(a, n, shift, &x);
        assert!(r.iter().zip(&b).all(|(p, q)| (p - q).norm() < 1e-10));
        let mut y = b.clone();
        lu.solve_adjoint(&mut y);
        let r = adjoint_matvec(a, n, shift, &y);
        assert!(r.iter().zip(&b).all(|(p, q)| (p - q).norm() < 1e-10));
    }

    #[test]
    fn solves_and_adjoint_solves() {
        check_solves(&hessenberg(9, 3), 9, Complex64::new(0.3, -0.7));
        check_solves(&hessenberg(12, 8), 12, Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn solves_on_a_companion_matrix() {
        let m = crate::companion::euclid_companion(6).unwrap();
        check_solves(&m.to_dense(), m.n(), Complex64::new(0.2, 0.9));
        // zero shift puts zeros on several diagonal positions
        check_solves(&m.to_dense(), m.n(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn sigma_min_of_diagonal() {
        let a = vec![1.0, 0.0, 0.0, 0.0, 4.0, 0.0, 0.0, 0.0, -2.0];
        let s = sigma_min(&HessenbergRows::from_dense(&a, 3), Complex64::new(0.5, 0.0), 1e-14, 200);
        assert!((s - 0.5).abs() < 1e-12, "{s}");
    }
}
