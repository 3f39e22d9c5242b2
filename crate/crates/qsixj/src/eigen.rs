//! The recurrence realized as a real symmetric tridiagonal eigenproblem
//! (definite regimes only: classical and root of unity), plus full-table
//! construction by any method.
//!
//! The solver is an implicit-shift QL iteration with Wilkinson shifts and
//! accumulated eigenvectors, deflating one eigenvalue at a time with an
//! iteration cap of 30 per eigenvalue.

use crate::admiss::FourValentSpace;
use crate::error::{Error, Result};
use crate::opcount;
use crate::par;
use crate::qnum::{QContext, Regime, SignedLog};
use crate::recur::{
    self, diag_factor, lambda_f64, norm_j, norm_l, seed_value, sup_factor, Method, TetColumn,
};
use crate::networks::NetValue;

/// Symmetrized tridiagonal form of the operator L in the j-basis.
///
/// `T = sgn · S L̄ S` with `S = diag(1/sqrt(|⟨j̄|j̄⟩|))` and `sgn = (-1)^σ`,
/// so the entries are real and the spectrum is exactly {λ(a,b,l)}.
#[derive(Clone, Debug)]
pub struct TriSystem {
    pub space: FourValentSpace,
    pub js: Vec<i64>,
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
    pub sigma_sign: i8,
    pub norms: Vec<SignedLog>,
}

/// Spectrum, orthonormal eigenvectors (as columns), and the eigenvalue → l
/// identification.
#[derive(Clone, Debug)]
pub struct EigenSolution {
    pub eigenvalues: Vec<f64>,
    /// `vectors[i]` is the orthonormal eigenvector for `eigenvalues[i]`.
    pub vectors: Vec<Vec<f64>>,
    pub l_assignment: Vec<i64>,
}

/// Full Tet table over (j, l), row-major in j.
#[derive(Clone, Debug)]
pub struct TetTable {
    pub space: FourValentSpace,
    pub js: Vec<i64>,
    pub ls: Vec<i64>,
    pub values: Vec<NetValue>,
    pub method: Method,
}

impl TetTable {
    pub fn value_at(&self, j: i64, l: i64) -> Option<&NetValue> {
        let jk = self.js.iter().position(|&x| x == j)?;
        let li = self.ls.iter().position(|&x| x == l)?;
        Some(&self.values[jk * self.ls.len() + li])
    }

    pub fn column(&self, l: i64) -> Option<TetColumn> {
        let li = self.ls.iter().position(|&x| x == l)?;
        let values = self
            .js
            .iter()
            .enumerate()
            .map(|(jk, _)| self.values[jk * self.ls.len() + li])
            .collect();
        Some(TetColumn {
            space: self.space,
            l,
            js: self.js.clone(),
            values,
            method: self.method,
        })
    }
}

/// Build the symmetric tridiagonal system for a non-empty space.
pub fn build_trisystem(ctx: &QContext, space: &FourValentSpace) -> Result<TriSystem> {
    match ctx.regime() {
        Regime::Classical | Regime::RootOfUnity(_) => {}
        other => {
            return Err(Error::UnsupportedRegime {
                op: "build_trisystem",
                regime: other.clone(),
            })
        }
    }
    if space.n == 0 {
        return Err(Error::EmptySpace);
    }
    let js: Vec<i64> = space.j_values().collect();
    let n = js.len();
    let mut norms = Vec::with_capacity(n);
    let mut diag = Vec::with_capacity(n);
    for &j in &js {
        norms.push(norm_j(ctx, space, j)?.as_sl());
        diag.push(diag_factor(ctx, space, j)?);
    }
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n.saturating_sub(1) {
        let ratio = ((norms[k + 1].logmag - norms[k].logmag) / 2.0).exp();
        off.push(sup_factor(ctx, space, js[k]) * ratio);
    }
    Ok(TriSystem {
        space: *space,
        js,
        diag,
        off,
        sigma_sign: space.sigma_sign(),
        norms,
    })
}

/// Full spectrum and orthonormal eigenvectors of a symmetric tridiagonal
/// matrix, ascending eigenvalue order. `vectors[k]` is the unit
/// eigenvector belonging to `eigenvalues[k]`.
pub fn solve_tridiagonal(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = diag.len();
    assert!(n >= 1, "empty system");
    assert_eq!(off.len(), n - 1, "off-diagonal length mismatch");
    let mut d = diag.to_vec();
    let mut e = vec![0.0f64; n];
    e[..n - 1].copy_from_slice(off);
    // z[row][col]; column `col` accumulates the eigenvector of d[col].
    let mut z = vec![vec![0.0f64; n]; n];
    for (k, row) in z.iter_mut().enumerate() {
        row[k] = 1.0;
    }

    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m < n - 1 {
                opcount::add(1);
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 30 {
                return Err(Error::NoConvergence {
                    block: l,
                    iterations: 30,
                });
            }
            // Wilkinson-style shift from the leading 2x2.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0f64;
            let mut c = 1.0f64;
            let mut p = 0.0f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                opcount::add(1);
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in z.iter_mut() {
                    f = row[i + 1];
                    row[i + 1] = s * row[i] + c * f;
                    row[i] = c * row[i] - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let vectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&col| (0..n).map(|row| z[row][col]).collect())
        .collect();
    Ok((eigenvalues, vectors))
}

/// Solve the system and identify each eigenvalue with an admissible l by
/// nearest-λ matching.
pub fn solve_system(ctx: &QContext, tri: &TriSystem) -> Result<EigenSolution> {
    let (eigenvalues, vectors) = solve_tridiagonal(&tri.diag, &tri.off)?;
    let ls: Vec<i64> = tri.space.l_values().collect();
    let targets: Vec<f64> = ls
        .iter()
        .map(|&l| lambda_f64(ctx, tri.space.a, tri.space.b, l))
        .collect::<Result<_>>()?;
    let mut claimed = vec![false; ls.len()];
    let mut l_assignment = Vec::with_capacity(eigenvalues.len());
    for &ev in &eigenvalues {
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        let mut second_d = f64::INFINITY;
        let mut second = usize::MAX;
        for (i, &t) in targets.iter().enumerate() {
            let dist = (ev - t).abs();
            if dist < best_d {
                second_d = best_d;
                second = best;
                best_d = dist;
                best = i;
            } else if dist < second_d {
                second_d = dist;
                second = i;
            }
        }
        let scale = ev.abs().max(1.0);
        if second != usize::MAX && (second_d - best_d) <= 1e-6 * scale {
            return Err(Error::AmbiguousEigenvalue {
                l1: ls[best],
                l2: ls[second],
                value: ev,
            });
        }
        if claimed[best] {
            return Err(Error::AmbiguousEigenvalue {
                l1: ls[best],
                l2: ls[best],
                value: ev,
            });
        }
        claimed[best] = true;
        l_assignment.push(ls[best]);
    }
    Ok(EigenSolution {
        eigenvalues,
        vectors,
        l_assignment,
    })
}

/// Full Tet table from the eigendecomposition.
///
/// Each eigenvector is mapped back through the norm diagonal, scaled so the
/// normalization condition holds, and sign-fixed by the single-term value
/// at jmin.
pub fn tet_table_eigen(ctx: &QContext, space: &FourValentSpace) -> Result<TetTable> {
    let js: Vec<i64> = space.j_values().collect();
    let ls: Vec<i64> = space.l_values().collect();
    if space.n == 0 {
        return Ok(TetTable {
            space: *space,
            js,
            ls,
            values: Vec::new(),
            method: Method::Eigen,
        });
    }
    let tri = build_trisystem(ctx, space)?;
    let sol = solve_system(ctx, &tri)?;
    let n = js.len();
    let mut values = vec![NetValue::real(SignedLog::zero()); n * n];
    for (i, &l) in sol.l_assignment.iter().enumerate() {
        let li = ls.iter().position(|&x| x == l).unwrap();
        let y = &sol.vectors[i];
        let seed = seed_value(ctx, space, l).as_sl();
        let ymax = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if y[0].abs() < 1e-12 * ymax {
            return Err(Error::SignFixFailed {
                l,
                magnitude: y[0].abs(),
            });
        }
        if seed.sign == 0 {
            return Err(Error::SignFixFailed { l, magnitude: 0.0 });
        }
        let flip = if (seed.sign as f64) * y[0] > 0.0 { 1i8 } else { -1 };
        let nl = norm_l(ctx, space, l)?.as_sl();
        for k in 0..n {
            let yk = y[k];
            let v = if yk == 0.0 {
                SignedLog::zero()
            } else {
                SignedLog::new(
                    flip * if yk > 0.0 { 1 } else { -1 },
                    yk.abs().ln() + (tri.norms[k].logmag + nl.logmag) / 2.0,
                )
            };
            values[k * n + li] = NetValue::real(v);
        }
    }
    Ok(TetTable {
        space: *space,
        js,
        ls,
        values,
        method: Method::Eigen,
    })
}

/// Full table by recurrence columns, fanned out over l.
pub fn tet_table_recur(ctx: &QContext, space: &FourValentSpace) -> Result<TetTable> {
    let ls: Vec<i64> = space.l_values().collect();
    let cols = par::map_collect(ls.clone(), |l| recur::tet_column_recur(ctx, space, l));
    assemble(space, ls, cols, Method::Recurrence)
}

/// Full table by per-entry oracle evaluation, fanned out over l.
pub fn tet_table_oracle(ctx: &QContext, space: &FourValentSpace) -> Result<TetTable> {
    let ls: Vec<i64> = space.l_values().collect();
    let cols = par::map_collect(ls.clone(), |l| Ok(recur::tet_column_oracle(ctx, space, l)));
    assemble(space, ls, cols, Method::Oracle)
}

fn assemble(
    space: &FourValentSpace,
    ls: Vec<i64>,
    cols: Vec<Result<TetColumn>>,
    method: Method,
) -> Result<TetTable> {
    let js: Vec<i64> = space.j_values().collect();
    let n = js.len();
    let mut values = vec![NetValue::real(SignedLog::zero()); n * ls.len()];
    for (li, col) in cols.into_iter().enumerate() {
        let col = col?;
        for (k, v) in col.values.into_iter().enumerate() {
            values[k * ls.len() + li] = v;
        }
    }
    Ok(TetTable {
        space: *space,
        js,
        ls,
        values,
        method,
    })
}
