//! Francis double-shift QR on a real upper Hessenberg matrix, eigenvalues only.
//!
//! The input is already Hessenberg, so there is no reduction step. Only the
//! active window `l..=nn` is updated, which is all that is needed when the
//! Schur vectors are not wanted.

use num_complex::Complex64;

use crate::{Error, Result};

/// Unit roundoff of binary64.
const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QrOptions {
    /// Total iteration budget is `budget_per_dim * n`.
    pub budget_per_dim: usize,
    pub balance: bool,
}

impl Default for QrOptions {
    fn default() -> Self {
        Self {
            budget_per_dim: 30,
            balance: false,
        }
    }
}

/// Row-major dense square matrix view used by the solver.
struct Dense<'a> {
    a: &'a mut [f64],
    n: usize,
}

impl Dense<'_> {
    #[inline(always)]
    fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    #[inline(always)]
    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
    }

    #[inline(always)]
    fn sub(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] -= v;
    }
}

/// Diagonal similarity by powers of two so rows and columns have comparable
/// norms (Parlett and Reinsch). Preserves Hessenberg form and eigenvalues.
pub fn balance(a: &mut [f64], n: usize) {
    const RADIX: f64 = 2.0;
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[j * n + i].abs();
                    r += a[i * n + j].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 0..n {
                        a[i * n + j] *= g;
                    }
                    for j in 0..n {
                        a[j * n + i] *= f;
                    }
                }
            }
        }
    }
}

/// All eigenvalues of the upper Hessenberg matrix `a` (row-major, overwritten),
/// in the order they deflate.
pub fn hessenberg_eigenvalues(a: &mut [f64], n: usize, opts: QrOptions) -> Result<Vec<Complex64>> {
    assert_eq!(a.len(), n * n);
    if opts.balance {
        balance(a, n);
    }
    let mut h = Dense { a, n };
    let mut wr = vec![0.0; n];
    let mut wi = vec![0.0; n];
    if n == 0 {
        return Ok(Vec::new());
    }

    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += h.get(i, j).abs();
        }
    }

    let budget = opts.budget_per_dim * n;
    let mut total_its = 0usize;
    let mut nn = n as isize - 1;
    let mut t = 0.0;

    while nn >= 0 {
        let mut its = 0;
        loop {
            let nu = nn as usize;
            // smallest l with a negligible subdiagonal h[l][l-1]
            let mut l = nu;
            while l >= 1 {
                let mut s = h.get(l - 1, l - 1).abs() + h.get(l, l).abs();
                if s == 0.0 {
                    s = anorm;
                }
                if h.get(l, l - 1).abs() <= UNIT_ROUNDOFF * s {
                    h.set(l, l - 1, 0.0);
                    break;
                }
                l -= 1;
            }

            let mut x = h.get(nu, nu);
            if l == nu {
                wr[nu] = x + t;
                wi[nu] = 0.0;
                nn -= 1;
                break;
            }
            let mut y = h.get(nu - 1, nu - 1);
            let mut w = h.get(nu, nu - 1) * h.get(nu - 1, nu);
            if l == nu - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    let z = p + z.copysign(p);
                    wr[nu - 1] = x + z;
                    wr[nu] = if z != 0.0 { x - w / z } else { x + z };
                    wi[nu - 1] = 0.0;
                    wi[nu] = 0.0;
                } else {
                    wr[nu - 1] = x + p;
                    wr[nu] = x + p;
                    wi[nu - 1] = -z;
                    wi[nu] = z;
                }
                nn -= 2;
                break;
            }

            if total_its >= budget {
                return Err(Error::NoConvergence {
                    iterations: total_its,
                    deflated: n - 1 - nu,
                    n,
                });
            }
            if its == 10 || its == 20 {
                // exceptional shift
                t += x;
                for i in 0..=nu {
                    h.sub(i, i, x);
                }
                let s = h.get(nu, nu - 1).abs() + h.get(nu - 1, nu - 2).abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            total_its += 1;

            // look for two consecutive small subdiagonal elements
            let mut m = nu - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = h.get(m, m);
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / h.get(m + 1, m) + h.get(m, m + 1);
                q = h.get(m + 1, m + 1) - z - rr - ss;
                r = h.get(m + 2, m + 1);
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = h.get(m, m - 1).abs() * (q.abs() + r.abs());
                let v = p.abs() * (h.get(m - 1, m - 1).abs() + z.abs() + h.get(m + 1, m + 1).abs());
                if u <= UNIT_ROUNDOFF * v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nu {
                h.set(i, i - 2, 0.0);
                if i != m + 2 {
                    h.set(i, i - 3, 0.0);
                }
            }

            // double-shift QR step on rows l..=nu, columns m..=nu
            let mut x = 0.0;
            for k in m..nu {
                if k != m {
                    p = h.get(k, k - 1);
                    q = h.get(k + 1, k - 1);
                    r = if k != nu - 1 { h.get(k + 2, k - 1) } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(p);
                if s == 0.0 {
                    continue;
                }
                if k == m {
                    if l != m {
                        let v = h.get(k, k - 1);
                        h.set(k, k - 1, -v);
                    }
                } else {
                    h.set(k, k - 1, -s * x);
                }
                p += s;
                let xx = p / s;
                let yy = q / s;
                let zz = r / s;
                q /= p;
                r /= p;
                let third = k != nu - 1;
                // row modification
                {
                    let (rk, rest) = h.a[k * n..].split_at_mut(n);
                    let (rk1, rest) = rest.split_at_mut(n);
                    if third {
                        let rk2 = &mut rest[..n];
                        for j in k..=nu {
                            let pp = rk[j] + q * rk1[j] + r * rk2[j];
                            rk2[j] -= pp * zz;
                            rk1[j] -= pp * yy;
                            rk[j] -= pp * xx;
                        }
                    } else {
                        for j in k..=nu {
                            let pp = rk[j] + q * rk1[j];
                            rk1[j] -= pp * yy;
                            rk[j] -= pp * xx;
                        }
                    }
                }
                // column modification
                let mmin = nu.min(k + 3);
                for i in l..=mmin {
                    let row = &mut h.a[i * n..(i + 1) * n];
                    let mut pp = xx * row[k] + yy * row[k + 1];
                    if third {
                        pp += zz * row[k + 2];
                        row[k + 2] -= pp * r;
                    }
                    row[k + 1] -= pp * q;
                    row[k] -= pp;
                }
            }
        }
    }

    Ok(wr
        .into_iter()
        .zip(wi)
        .map(|(re, im)| Complex64::new(re, im))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn one_by_one_and_two_by_two() {
        let mut a = vec![-1.0];
        assert_eq!(hessenberg_eigenvalues(&mut a, 1, QrOptions::default()).unwrap(), [Complex64::new(-1.0, 0.0)]);
        let mut a = vec![0.0, 1.0, -1.0, -1.0];
        let ev = sorted(hessenberg_eigenvalues(&mut a, 2, QrOptions::default()).unwrap());
        let h = 3f64.sqrt() / 2.0;
        assert!((ev[0] - Complex64::new(-0.5, -h)).norm() < 1e-15);
        assert!((ev[1] - Complex64::new(-0.5, h)).norm() < 1e-15);
    }

    #[test]
    fn companion_of_known_polynomial() {
        // roots 1, 2, 3, 4, 5 from the Frobenius companion (Hessenberg)
        let c = [-120.0, 274.0, -225.0, 85.0, -15.0];
        let n = 5;
        let mut a = vec![0.0; n * n];
        for i in 1..n {
            a[i * n + i - 1] = 1.0;
        }
        for (i, ci) in c.iter().enumerate() {
            a[i * n + n - 1] = -ci;
        }
        let ev = sorted(hessenberg_eigenvalues(&mut a, n, QrOptions::default()).unwrap());
        for (i, e) in ev.iter().enumerate() {
            assert!((e.re - (i + 1) as f64).abs() < 1e-9, "{e}");
            assert_eq!(e.im, 0.0);
        }
    }

    #[test]
    fn balancing_keeps_the_spectrum() {
        let n = 4;
        let mut a = vec![
            1.0, 1e4, 0.0, 2.0, //
            1e-4, 2.0, 3.0, 0.0, //
            0.0, 1.0, 3.0, 1e3, //
            0.0, 0.0, 1e-3, 4.0,
        ];
        let mut b = a.clone();
        let plain = sorted(hessenberg_eigenvalues(&mut a, n, QrOptions::default()).unwrap());
        let balanced = sorted(
            hessenberg_eigenvalues(&mut b, n, QrOptions { balance: true, ..Default::default() }).unwrap(),
        );
        for (x, y) in plain.iter().zip(&balanced) {
            assert!((x - y).norm() < 1e-9 * x.norm().max(1.0));
        }
    }

    #[test]
    fn budget_exhaustion_reported() {
        // cyclic shift, Hessenberg, with no iterations allowed
        let mut a = vec![0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0];
        let opts = QrOptions { budget_per_dim: 0, balance: false };
        let err = hessenberg_eigenvalues(&mut a, 3, opts).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { n: 3, .. }));
    }
}
