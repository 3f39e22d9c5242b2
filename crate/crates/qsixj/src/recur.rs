//! Linear-time evaluation of a full Tet column over j at fixed l via the
//! three-term recurrence, seeded with the single-term value at jmin.
//!
//! The default mode propagates forward from jmin with periodic rescaling.
//! A two-sided mode (forward + backward, stitched at the entry of largest
//! magnitude, then renormalized through the normalization condition) is
//! available for deep classically-forbidden regions where forward
//! propagation alone loses accuracy.

use num_complex::Complex64;

use crate::admiss::FourValentSpace;
use crate::error::{Error, Result};
use crate::networks::{bubble, tet_oracle, theta, NetValue, TetArgs};
use crate::opcount;
use crate::qnum::{QContext, Regime, Scalar, SignedLog};

/// Which evaluation path produced a column or table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Oracle,
    Recurrence,
    Eigen,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::Recurrence => "recurrence",
            Method::Eigen => "eigen",
        }
    }
}

/// The vector Tet(a,b,c,d; j, l) over all admissible j at fixed l.
#[derive(Clone, Debug)]
pub struct TetColumn {
    pub space: FourValentSpace,
    pub l: i64,
    pub js: Vec<i64>,
    pub values: Vec<NetValue>,
    pub method: Method,
}

impl TetColumn {
    pub fn value_at(&self, j: i64) -> Option<&NetValue> {
        self.space.index_of_j(j).map(|k| &self.values[k])
    }
}

/// Largest mixed (relative-or-column-scaled) deviation between two columns
/// of the same space: for each entry, |x - y| divided by the larger of |y|
/// and the column's max magnitude. Stays in the log domain so columns with
/// entries beyond f64 range still compare cleanly.
pub fn max_mixed_deviation(x: &TetColumn, reference: &TetColumn) -> f64 {
    assert_eq!(x.js, reference.js, "columns over different spaces");
    match reference.values.first().map(|v| v.value) {
        Some(Scalar::Complex(_)) => {
            let col_max = reference
                .values
                .iter()
                .map(|v| v.as_complex().norm())
                .fold(0.0f64, f64::max);
            x.values
                .iter()
                .zip(&reference.values)
                .map(|(xv, yv)| {
                    let diff = (xv.as_complex() - yv.as_complex()).norm();
                    let denom = yv.as_complex().norm().max(col_max);
                    if denom == 0.0 {
                        diff
                    } else {
                        diff / denom
                    }
                })
                .fold(0.0f64, f64::max)
        }
        _ => {
            let col_log = reference
                .values
                .iter()
                .filter(|v| !v.is_zero())
                .map(|v| v.as_sl().logmag)
                .fold(f64::NEG_INFINITY, f64::max);
            x.values
                .iter()
                .zip(&reference.values)
                .map(|(xv, yv)| {
                    let diff = xv.as_sl() - yv.as_sl();
                    if diff.is_zero() {
                        return 0.0;
                    }
                    let denom_log = if yv.is_zero() {
                        col_log
                    } else {
                        yv.as_sl().logmag.max(col_log)
                    };
                    if denom_log == f64::NEG_INFINITY {
                        diff.logmag.exp()
                    } else {
                        (diff.logmag - denom_log).exp()
                    }
                })
                .fold(0.0f64, f64::max)
        }
    }
}

/// Recurrence mode for [`tet_column_recur_mode`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RecurMode {
    #[default]
    Forward,
    TwoSided,
}

/// Eigenvalue λ(a,b,l) of the squared-angular-momentum analog.
pub fn lambda_eig(ctx: &QContext, a: i64, b: i64, l: i64) -> Result<Scalar> {
    if (a + b + l) % 2 != 0 {
        return Err(Error::InvalidLabel {
            name: "l",
            value: l,
            reason: format!("a + b + l must be even, got {a} + {b} + {l}"),
        });
    }
    let x = (a - b + l) / 2;
    let y = (-a + b + l) / 2;
    let z = (a + b - l) / 2;
    let w = (a + b + l) / 2 + 2;
    if ctx.is_real() {
        Ok(Scalar::Real(SignedLog::from_f64(lambda_f64(ctx, a, b, l)?)))
    } else {
        let qi = |n| ctx.qint(n).to_complex();
        Ok(Scalar::Complex(
            (qi(x) * qi(y) - qi(z) * qi(w)) / qi(2),
        ))
    }
}

/// λ(a,b,l) as a plain float (real regimes).
pub fn lambda_f64(ctx: &QContext, a: i64, b: i64, l: i64) -> Result<f64> {
    if (a + b + l) % 2 != 0 {
        return Err(Error::InvalidLabel {
            name: "l",
            value: l,
            reason: format!("a + b + l must be even, got {a} + {b} + {l}"),
        });
    }
    if !ctx.is_real() {
        return Err(Error::UnsupportedRegime {
            op: "lambda_f64",
            regime: ctx.regime().clone(),
        });
    }
    let x = (a - b + l) / 2;
    let y = (-a + b + l) / 2;
    let z = (a + b - l) / 2;
    let w = (a + b + l) / 2 + 2;
    let qi = |n| ctx.qint_f64(n);
    Ok((qi(x) * qi(y) - qi(z) * qi(w)) / qi(2))
}

/// Norm ⟨j̄|j̄⟩ = θ(b,c,j) θ(a,d,j) / Δ_j of the horizontal basis vector.
pub fn norm_j(ctx: &QContext, space: &FourValentSpace, j: i64) -> Result<NetValue> {
    if !space.contains_j(j) {
        return Err(Error::InadmissibleIndex {
            name: "j",
            value: j,
            a: space.a,
            b: space.b,
            c: space.c,
            d: space.d,
        });
    }
    let t1 = theta(ctx, space.b, space.c, j);
    let t2 = theta(ctx, space.a, space.d, j);
    let dj = bubble(ctx, j);
    Ok(combine_norm(t1, t2, dj))
}

/// Norm ⟨l|l⟩ = θ(a,b,l) θ(c,d,l) / Δ_l of the vertical basis vector.
pub fn norm_l(ctx: &QContext, space: &FourValentSpace, l: i64) -> Result<NetValue> {
    if !space.contains_l(l) {
        return Err(Error::InadmissibleIndex {
            name: "l",
            value: l,
            a: space.a,
            b: space.b,
            c: space.c,
            d: space.d,
        });
    }
    let t1 = theta(ctx, space.a, space.b, l);
    let t2 = theta(ctx, space.c, space.d, l);
    let dl = bubble(ctx, l);
    Ok(combine_norm(t1, t2, dl))
}

fn combine_norm(t1: NetValue, t2: NetValue, delta: NetValue) -> NetValue {
    debug_assert!(!t1.exact_zero && !t2.exact_zero && !delta.exact_zero);
    match (t1.value, t2.value, delta.value) {
        (Scalar::Real(x), Scalar::Real(y), Scalar::Real(d)) => NetValue::real(x * y / d),
        _ => NetValue::complex(t1.as_complex() * t2.as_complex() / delta.as_complex()),
    }
}

/// Three-term recurrence coefficients for a column at fixed l, indexed by
/// position in the admissible j range.
///
/// Row k of the recurrence reads
/// `sub[k]·T[k-1] + (diag[k] - lambda_l)·T[k] + sup[k]·T[k+1] = 0`,
/// with terms outside the range exactly zero.
#[derive(Clone, Debug)]
pub struct RecurCoeffs {
    pub lambda_l: f64,
    pub js: Vec<i64>,
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
    pub norms: Vec<SignedLog>,
}

/// `L̄_{j,j+2}/⟨j+2|j+2⟩ = [(a+d-j)/2][(b+c-j)/2]`.
pub(crate) fn sup_factor(ctx: &QContext, space: &FourValentSpace, j: i64) -> f64 {
    ctx.qint_f64((space.a + space.d - j) / 2) * ctx.qint_f64((space.b + space.c - j) / 2)
}

/// `L̄_jj/⟨j|j⟩`, with the special cases L̄_00 = 0 and, at a root of unity,
/// the top edge j = r-2 where both λ factors carry an exact [r] = 0 zero
/// cancelling the [j+2] = [r] pole, so the limit is zero.
pub(crate) fn diag_factor(ctx: &QContext, space: &FourValentSpace, j: i64) -> Result<f64> {
    if j == 0 {
        return Ok(0.0);
    }
    if let Some(r) = ctx.root_order() {
        if j + 2 == r {
            return Ok(0.0);
        }
    }
    let la = lambda_f64(ctx, space.a, j, space.d)?;
    let lb = lambda_f64(ctx, space.b, j, space.c)?;
    Ok(-ctx.qint_f64(2) * la * lb / (ctx.qint_f64(j) * ctx.qint_f64(j + 2)))
}

/// Build the recurrence coefficients for a fixed l (real regimes).
pub fn build_coeffs(ctx: &QContext, space: &FourValentSpace, l: i64) -> Result<RecurCoeffs> {
    if !ctx.is_real() {
        return Err(Error::UnsupportedRegime {
            op: "build_coeffs",
            regime: ctx.regime().clone(),
        });
    }
    if !space.contains_l(l) {
        return Err(Error::InadmissibleIndex {
            name: "l",
            value: l,
            a: space.a,
            b: space.b,
            c: space.c,
            d: space.d,
        });
    }
    let lambda_l = lambda_f64(ctx, space.a, space.b, l)?;
    let js: Vec<i64> = space.j_values().collect();
    let n = js.len();
    let mut sub = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut sup = vec![0.0; n];
    let mut norms = Vec::with_capacity(n);
    for (k, &j) in js.iter().enumerate() {
        opcount::add(1);
        norms.push(norm_j(ctx, space, j)?.as_sl());
        diag[k] = diag_factor(ctx, space, j)?;
        sup[k] = sup_factor(ctx, space, j);
        if k > 0 {
            sub[k] = norms[k].ratio_f64(norms[k - 1]) * sup[k - 1];
        }
    }
    Ok(RecurCoeffs {
        lambda_l,
        js,
        sub,
        diag,
        sup,
        norms,
    })
}

/// Forward-mode recurrence column (the default).
pub fn tet_column_recur(ctx: &QContext, space: &FourValentSpace, l: i64) -> Result<TetColumn> {
    tet_column_recur_mode(ctx, space, l, RecurMode::Forward)
}

/// Recurrence column with an explicit propagation mode.
pub fn tet_column_recur_mode(
    ctx: &QContext,
    space: &FourValentSpace,
    l: i64,
    mode: RecurMode,
) -> Result<TetColumn> {
    if space.n == 0 {
        return Ok(TetColumn {
            space: *space,
            l,
            js: Vec::new(),
            values: Vec::new(),
            method: Method::Recurrence,
        });
    }
    if let Regime::ComplexQ(_) = ctx.regime() {
        return tet_column_recur_complex(ctx, space, l);
    }
    let coeffs = build_coeffs(ctx, space, l)?;
    let n = coeffs.js.len();
    let seed = seed_value(ctx, space, l);
    let seed_sl = seed.as_sl();

    let forward = propagate_forward(&coeffs, seed_sl);
    let values_sl = match mode {
        RecurMode::Forward => forward,
        RecurMode::TwoSided if n > 2 => two_sided(ctx, space, l, &coeffs, &forward, seed_sl)?,
        RecurMode::TwoSided => forward,
    };
    let values = values_sl
        .into_iter()
        .map(|v| NetValue {
            value: Scalar::Real(v),
            exact_zero: false,
            cancel_digits: seed.cancel_digits,
        })
        .collect();
    Ok(TetColumn {
        space: *space,
        l,
        js: coeffs.js,
        values,
        method: Method::Recurrence,
    })
}

/// The single-term value at jmin used to seed and sign-fix a column.
pub fn seed_value(ctx: &QContext, space: &FourValentSpace, l: i64) -> NetValue {
    tet_oracle(
        ctx,
        TetArgs::new(space.a, space.b, space.c, space.d, space.jmin, l),
    )
}

fn propagate_forward(coeffs: &RecurCoeffs, seed: SignedLog) -> Vec<SignedLog> {
    let n = coeffs.js.len();
    let mut out = Vec::with_capacity(n);
    out.push(seed);
    if n == 1 {
        return out;
    }
    // Scaled propagation: the stored pair (prev, cur) shares one log offset.
    let mut offset = if seed.is_zero() { 0.0 } else { seed.logmag };
    let mut prev = 0.0f64;
    let mut cur = seed.sign as f64;
    for k in 0..n - 1 {
        opcount::add(1);
        let next = -(coeffs.sub[k] * prev + (coeffs.diag[k] - coeffs.lambda_l) * cur)
            / coeffs.sup[k];
        prev = cur;
        cur = next;
        let mag = cur.abs().max(prev.abs());
        if mag > 1e100 || (mag > 0.0 && mag < 1e-100) {
            let s = mag.ln();
            let scale = (-s).exp();
            prev *= scale;
            cur *= scale;
            offset += s;
        }
        out.push(scaled_to_sl(cur, offset));
    }
    out
}

fn scaled_to_sl(v: f64, offset: f64) -> SignedLog {
    if v == 0.0 {
        SignedLog::zero()
    } else {
        SignedLog::new(if v > 0.0 { 1 } else { -1 }, v.abs().ln() + offset)
    }
}

fn two_sided(
    ctx: &QContext,
    space: &FourValentSpace,
    l: i64,
    coeffs: &RecurCoeffs,
    forward: &[SignedLog],
    seed: SignedLog,
) -> Result<Vec<SignedLog>> {
    let n = coeffs.js.len();
    // Backward pass with an arbitrary unit seed at jmax.
    let mut backward = vec![SignedLog::zero(); n];
    let mut offset = 0.0f64;
    let mut above = 0.0f64; // T[k+1] in current scaling
    let mut cur = 1.0f64;
    backward[n - 1] = SignedLog::one();
    for k in (1..n).rev() {
        opcount::add(1);
        let below = -((coeffs.diag[k] - coeffs.lambda_l) * cur + coeffs.sup[k] * above)
            / coeffs.sub[k];
        above = cur;
        cur = below;
        let mag = cur.abs().max(above.abs());
        if mag > 1e100 || (mag > 0.0 && mag < 1e-100) {
            let s = mag.ln();
            let scale = (-s).exp();
            above *= scale;
            cur *= scale;
            offset += s;
        }
        backward[k - 1] = scaled_to_sl(cur, offset);
    }
    // Stitch at the forward entry of maximal magnitude.
    let pivot = (0..n)
        .filter(|&k| forward[k].sign != 0)
        .max_by(|&i, &j| forward[i].logmag.total_cmp(&forward[j].logmag))
        .unwrap_or(0);
    if backward[pivot].is_zero() {
        return Ok(forward.to_vec());
    }
    let scale = forward[pivot] / backward[pivot];
    let mut stitched: Vec<SignedLog> = (0..n)
        .map(|k| {
            if k <= pivot {
                forward[k]
            } else {
                backward[k] * scale
            }
        })
        .collect();
    // Global renormalization through the normalization condition.
    let target = norm_l(ctx, space, l)?.as_sl();
    let mut sum = SignedLog::zero();
    for k in 0..n {
        sum = sum + stitched[k] * stitched[k] / coeffs.norms[k];
    }
    if !sum.is_zero() {
        let factor = (target / sum).sqrt_abs();
        for v in stitched.iter_mut() {
            *v = *v * factor;
        }
    }
    // Sign fixed by the seed at jmin.
    if seed.sign != 0 && stitched[0].sign != 0 && stitched[0].sign != seed.sign {
        for v in stitched.iter_mut() {
            *v = -*v;
        }
    }
    Ok(stitched)
}

fn tet_column_recur_complex(
    ctx: &QContext,
    space: &FourValentSpace,
    l: i64,
) -> Result<TetColumn> {
    if !space.contains_l(l) {
        return Err(Error::InadmissibleIndex {
            name: "l",
            value: l,
            a: space.a,
            b: space.b,
            c: space.c,
            d: space.d,
        });
    }
    let js: Vec<i64> = space.j_values().collect();
    let n = js.len();
    let lambda_l = lambda_eig(ctx, space.a, space.b, l)?.to_complex();
    let qi = |m| ctx.qint(m).to_complex();
    let supf = |j: i64| qi((space.a + space.d - j) / 2) * qi((space.b + space.c - j) / 2);
    let diagf = |j: i64| -> Result<Complex64> {
        if j == 0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let la = lambda_eig(ctx, space.a, j, space.d)?.to_complex();
        let lb = lambda_eig(ctx, space.b, j, space.c)?.to_complex();
        Ok(-qi(2) * la * lb / (qi(j) * qi(j + 2)))
    };
    let normc = |j: i64| -> Result<Complex64> { Ok(norm_j(ctx, space, j)?.as_complex()) };

    let seed = seed_value(ctx, space, l).as_complex();
    let mut values = Vec::with_capacity(n);
    values.push(seed);
    let mut prev = Complex64::new(0.0, 0.0);
    let mut cur = seed;
    for k in 0..n.saturating_sub(1) {
        opcount::add(1);
        let j = js[k];
        let sub = if k == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            normc(j)? / normc(js[k - 1])? * supf(js[k - 1])
        };
        let next = -(sub * prev + (diagf(j)? - lambda_l) * cur) / supf(j);
        prev = cur;
        cur = next;
        values.push(cur);
    }
    Ok(TetColumn {
        space: *space,
        l,
        js,
        values: values.into_iter().map(NetValue::complex).collect(),
        method: Method::Recurrence,
    })
}

/// Per-entry oracle evaluation of the same column, for comparison.
pub fn tet_column_oracle(ctx: &QContext, space: &FourValentSpace, l: i64) -> TetColumn {
    let js: Vec<i64> = space.j_values().collect();
    let values = js
        .iter()
        .map(|&j| tet_oracle(ctx, TetArgs::new(space.a, space.b, space.c, space.d, j, l)))
        .collect();
    TetColumn {
        space: *space,
        l,
        js,
        values,
        method: Method::Oracle,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admiss::make_space;

    fn close(x: f64, y: f64, tol: f64) -> bool {
        (x - y).abs() <= tol * y.abs().max(1.0)
    }

    #[test]
    fn lambda_examples() {
        let cl = QContext::classical();
        assert!(close(lambda_f64(&cl, 1, 1, 2).unwrap(), 0.5, 1e-12));
        assert!(close(lambda_f64(&cl, 1, 1, 0).unwrap(), -1.5, 1e-12));
        assert!(close(lambda_f64(&cl, 2, 2, 0).unwrap(), -4.0, 1e-12));
        assert!(lambda_f64(&cl, 1, 1, 1).is_err());
    }

    #[test]
    fn lambda_classical_closed_form() {
        let cl = QContext::classical();
        for a in 0..=10i64 {
            for b in 0..=10i64 {
                for l in 0..=20i64 {
                    if (a + b + l) % 2 != 0 {
                        continue;
                    }
                    let expect =
                        0.25 * (l * (l + 2) - a * (a + 2) - b * (b + 2)) as f64;
                    assert!(close(lambda_f64(&cl, a, b, l).unwrap(), expect, 1e-12));
                }
            }
        }
    }

    #[test]
    fn lambda_matches_tet_diag() {
        // Tet(a,a,b,b;l,2) = θ(a,b,l)/([a][b]) λ(a,b,l), here at a root of unity.
        let ctx = QContext::root_of_unity(5).unwrap();
        let lam = lambda_f64(&ctx, 1, 1, 2).unwrap();
        let tet = tet_oracle(&ctx, TetArgs::new(1, 1, 1, 1, 2, 2)).approx_f64();
        let th = theta(&ctx, 1, 1, 2).approx_f64();
        let expect = th / (ctx.qint_f64(1) * ctx.qint_f64(1)) * lam;
        assert!(close(tet, expect, 1e-11));
    }

    #[test]
    fn norm_examples() {
        let cl = QContext::classical();
        let space = make_space(&cl, 1, 1, 1, 1).unwrap();
        assert!(close(norm_j(&cl, &space, 0).unwrap().approx_f64(), 4.0, 1e-12));
        assert!(close(norm_j(&cl, &space, 2).unwrap().approx_f64(), 3.0, 1e-12));
        // σ = 2 even: both norms positive.
        assert_eq!(norm_j(&cl, &space, 0).unwrap().as_sl().sign, 1);
        assert_eq!(norm_l(&cl, &space, 2).unwrap().as_sl().sign, 1);
        assert!(norm_j(&cl, &space, 1).is_err());
    }

    #[test]
    fn coeff_examples() {
        let cl = QContext::classical();
        let space = make_space(&cl, 1, 1, 1, 1).unwrap();
        let coeffs = build_coeffs(&cl, &space, 0).unwrap();
        assert!(close(coeffs.lambda_l, -1.5, 1e-12));
        assert_eq!(coeffs.diag[0], 0.0);
        assert!(close(coeffs.diag[1], -1.0, 1e-12));
        assert!(close(coeffs.sup[0], 1.0, 1e-12));
    }

    #[test]
    fn column_matches_oracle_small() {
        let cl = QContext::classical();
        let space = make_space(&cl, 1, 1, 1, 1).unwrap();
        for l in space.l_values() {
            let rec = tet_column_recur(&cl, &space, l).unwrap();
            let ora = tet_column_oracle(&cl, &space, l);
            for (r, o) in rec.values.iter().zip(&ora.values) {
                assert!(close(r.approx_f64(), o.approx_f64(), 1e-12), "l={l}");
            }
        }
    }

    #[test]
    fn empty_and_single_spaces() {
        let cl = QContext::classical();
        let empty = make_space(&cl, 3, 1, 1, 0).unwrap();
        let col = tet_column_recur(&cl, &empty, 0).unwrap();
        assert!(col.values.is_empty());

        let single = make_space(&cl, 2, 0, 0, 2).unwrap();
        let col = tet_column_recur(&cl, &single, 2).unwrap();
        assert_eq!(col.values.len(), 1);
        let ora = tet_column_oracle(&cl, &single, 2);
        assert!(close(col.values[0].approx_f64(), ora.values[0].approx_f64(), 1e-12));
    }

    #[test]
    fn root_edge_column() {
        // Space containing j = r-2, exercising the cancelled [r] pole in the
        // diagonal coefficient.
        let ctx = QContext::root_of_unity(5).unwrap();
        let space = make_space(&ctx, 1, 2, 1, 2).unwrap();
        assert_eq!(space.j_values().collect::<Vec<_>>(), vec![1, 3]);
        for l in space.l_values() {
            let rec = tet_column_recur(&ctx, &space, l).unwrap();
            let ora = tet_column_oracle(&ctx, &space, l);
            for (r, o) in rec.values.iter().zip(&ora.values) {
                assert!(close(r.approx_f64(), o.approx_f64(), 1e-10), "l={l}");
            }
        }
    }
}
