//! Quantum integers, quantum factorials, and signed-log arithmetic.
//!
//! All spin labels in this crate are *twice-spins* (integers). The
//! deformation parameter lives in a [`QContext`], which also memoizes
//! quantum factorials. Real regimes (classical q = 1, real q > 0, and
//! q a primitive root of unity exp(iπ/r)) evaluate in [`SignedLog`]
//! arithmetic so that factorial ratios never overflow; the generic complex
//! regime evaluates in plain complex doubles and is only intended for
//! moderate twice-spins (roughly ≤ 80).

use std::f64::consts::PI;
use std::sync::RwLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::opcount;

/// Edge label in the twice-spin convention (2j for a spin-j irrep).
pub type TwiceSpin = i64;

/// The deformation parameter regime.
#[derive(Clone, Debug, PartialEq)]
pub enum Regime {
    /// q = 1.
    Classical,
    /// Real q > 0, q != 1.
    RealQ(f64),
    /// q = exp(iπ/r) for integer r >= 2.
    RootOfUnity(u32),
    /// Generic complex q != 0.
    ComplexQ(Complex64),
}

/// A real number stored as an exact sign and the natural log of its magnitude.
///
/// `sign == 0` means exactly zero, regardless of `logmag`.
#[derive(Clone, Copy, Debug)]
pub struct SignedLog {
    pub sign: i8,
    pub logmag: f64,
}

impl SignedLog {
    pub const fn zero() -> Self {
        SignedLog {
            sign: 0,
            logmag: f64::NEG_INFINITY,
        }
    }

    pub const fn one() -> Self {
        SignedLog {
            sign: 1,
            logmag: 0.0,
        }
    }

    pub fn new(sign: i8, logmag: f64) -> Self {
        debug_assert!(sign == -1 || sign == 0 || sign == 1);
        if sign == 0 {
            Self::zero()
        } else {
            SignedLog { sign, logmag }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::zero()
        } else {
            SignedLog {
                sign: if x > 0.0 { 1 } else { -1 },
                logmag: x.abs().ln(),
            }
        }
    }

    /// May overflow to ±inf for |logmag| beyond f64 range; the log form
    /// stays exact.
    pub fn to_f64(self) -> f64 {
        self.sign as f64 * self.logmag.exp()
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn abs(self) -> Self {
        SignedLog {
            sign: self.sign.abs(),
            logmag: self.logmag,
        }
    }

    /// Square root of the absolute value.
    pub fn sqrt_abs(self) -> Self {
        SignedLog {
            sign: self.sign.abs(),
            logmag: self.logmag / 2.0,
        }
    }

    pub fn recip(self) -> Self {
        debug_assert!(self.sign != 0, "reciprocal of exact zero");
        SignedLog {
            sign: self.sign,
            logmag: -self.logmag,
        }
    }

    /// Signed ratio of this value to `other` as a plain float.
    pub fn ratio_f64(self, other: Self) -> f64 {
        debug_assert!(other.sign != 0);
        if self.sign == 0 {
            return 0.0;
        }
        (self.sign * other.sign) as f64 * (self.logmag - other.logmag).exp()
    }
}

impl std::ops::Mul for SignedLog {
    type Output = SignedLog;
    fn mul(self, rhs: SignedLog) -> SignedLog {
        if self.sign == 0 || rhs.sign == 0 {
            SignedLog::zero()
        } else {
            SignedLog {
                sign: self.sign * rhs.sign,
                logmag: self.logmag + rhs.logmag,
            }
        }
    }
}

impl std::ops::Div for SignedLog {
    type Output = SignedLog;
    fn div(self, rhs: SignedLog) -> SignedLog {
        debug_assert!(rhs.sign != 0, "division by exact zero");
        if self.sign == 0 {
            SignedLog::zero()
        } else {
            SignedLog {
                sign: self.sign * rhs.sign,
                logmag: self.logmag - rhs.logmag,
            }
        }
    }
}

impl std::ops::Neg for SignedLog {
    type Output = SignedLog;
    fn neg(self) -> SignedLog {
        SignedLog {
            sign: -self.sign,
            logmag: self.logmag,
        }
    }
}

impl std::ops::Add for SignedLog {
    type Output = SignedLog;
    /// Log-sum-exp with sign handling. Exact cancellation of equal
    /// magnitudes with opposite signs yields exact zero.
    fn add(self, rhs: SignedLog) -> SignedLog {
        if self.sign == 0 {
            return rhs;
        }
        if rhs.sign == 0 {
            return self;
        }
        let (big, small) = if self.logmag >= rhs.logmag {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let d = small.logmag - big.logmag; // <= 0
        if self.sign == rhs.sign {
            SignedLog {
                sign: big.sign,
                logmag: big.logmag + d.exp().ln_1p(),
            }
        } else if d == 0.0 {
            SignedLog::zero()
        } else {
            SignedLog {
                sign: big.sign,
                logmag: big.logmag + (-d.exp_m1()).ln(),
            }
        }
    }
}

impl std::ops::Sub for SignedLog {
    type Output = SignedLog;
    fn sub(self, rhs: SignedLog) -> SignedLog {
        self + (-rhs)
    }
}

/// A regime-dependent scalar: signed-log real or plain complex.
#[derive(Clone, Copy, Debug)]
pub enum Scalar {
    Real(SignedLog),
    Complex(Complex64),
}

impl Scalar {
    pub fn to_complex(self) -> Complex64 {
        match self {
            Scalar::Real(s) => Complex64::new(s.to_f64(), 0.0),
            Scalar::Complex(z) => z,
        }
    }

    pub fn approx_f64(self) -> f64 {
        match self {
            Scalar::Real(s) => s.to_f64(),
            Scalar::Complex(z) => z.re,
        }
    }

    pub fn is_zero(self) -> bool {
        match self {
            Scalar::Real(s) => s.is_zero(),
            Scalar::Complex(z) => z == Complex64::new(0.0, 0.0),
        }
    }
}

/// Deformation parameter plus derived constants and the factorial memo.
///
/// Immutable after construction; the memo is behind an `RwLock` so one
/// context can be shared across data-parallel workers.
#[derive(Debug)]
pub struct QContext {
    regime: Regime,
    /// ln sin(π/r) for the root-of-unity regime, 0.0 otherwise.
    ln_sin_pi_r: f64,
    fact_real: RwLock<Vec<SignedLog>>,
    fact_complex: RwLock<Vec<Complex64>>,
}

impl QContext {
    pub fn classical() -> Self {
        Self::with_regime(Regime::Classical, 0.0)
    }

    pub fn real_q(q: f64) -> Result<Self> {
        if !(q > 0.0) || !q.is_finite() {
            return Err(Error::InvalidRegime(format!(
                "real q must be finite and positive, got {q}"
            )));
        }
        if q == 1.0 {
            return Err(Error::InvalidRegime(
                "real q = 1 is the classical regime; use QContext::classical()".into(),
            ));
        }
        Ok(Self::with_regime(Regime::RealQ(q), 0.0))
    }

    pub fn root_of_unity(r: u32) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidRegime(format!(
                "root-of-unity order must satisfy r >= 2, got {r}"
            )));
        }
        let ln_sin = (PI / r as f64).sin().ln();
        Ok(Self::with_regime(Regime::RootOfUnity(r), ln_sin))
    }

    pub fn complex_q(q: Complex64) -> Result<Self> {
        if q == Complex64::new(0.0, 0.0) || !q.re.is_finite() || !q.im.is_finite() {
            return Err(Error::InvalidRegime(format!(
                "complex q must be finite and nonzero, got {q}"
            )));
        }
        Ok(Self::with_regime(Regime::ComplexQ(q), 0.0))
    }

    fn with_regime(regime: Regime, ln_sin_pi_r: f64) -> Self {
        QContext {
            regime,
            ln_sin_pi_r,
            fact_real: RwLock::new(vec![SignedLog::one()]),
            fact_complex: RwLock::new(vec![Complex64::new(1.0, 0.0)]),
        }
    }

    pub fn regime(&self) -> &Regime {
        &self.regime
    }

    pub fn is_real(&self) -> bool {
        !matches!(self.regime, Regime::ComplexQ(_))
    }

    /// Root-of-unity order, if applicable.
    pub fn root_order(&self) -> Option<i64> {
        match self.regime {
            Regime::RootOfUnity(r) => Some(r as i64),
            _ => None,
        }
    }

    /// The quantum integer [n] as a regime-dependent scalar.
    pub fn qint(&self, n: i64) -> Scalar {
        match self.regime {
            Regime::ComplexQ(q) => {
                opcount::add(1);
                Scalar::Complex(qint_complex(q, n))
            }
            _ => Scalar::Real(self.qint_sl(n).expect("real regime")),
        }
    }

    /// The quantum integer [n] as a plain float. Real regimes only at the
    /// type level; large |n| in the RealQ regime may overflow (use
    /// [`QContext::qint_sl`] there).
    pub fn qint_f64(&self, n: i64) -> f64 {
        match self.regime {
            Regime::Classical => {
                opcount::add(1);
                n as f64
            }
            _ => self.qint_sl(n).expect("real regime").to_f64(),
        }
    }

    /// The quantum integer [n] in signed-log form.
    ///
    /// In the root-of-unity regime the zero test is exact: [n] = 0 iff
    /// n ≡ 0 (mod r).
    pub fn qint_sl(&self, n: i64) -> Result<SignedLog> {
        opcount::add(1);
        match self.regime {
            Regime::Classical => Ok(if n == 0 {
                SignedLog::zero()
            } else {
                SignedLog::new(n.signum() as i8, (n.abs() as f64).ln())
            }),
            Regime::RealQ(q) => {
                if n == 0 {
                    return Ok(SignedLog::zero());
                }
                // [n] is symmetric under q -> 1/q; reduce to p > 1.
                let p = if q > 1.0 { q } else { 1.0 / q };
                let lp = p.ln();
                let na = n.abs() as f64;
                let logmag =
                    (na - 1.0) * lp + (-(-2.0 * na * lp).exp_m1()).ln() - (-(-2.0 * lp).exp_m1()).ln();
                Ok(SignedLog::new(n.signum() as i8, logmag))
            }
            Regime::RootOfUnity(r) => {
                let r = r as i64;
                // sin(nπ/r) is 2r-periodic in n; reduce before touching π/r.
                let m = n.rem_euclid(2 * r);
                if m % r == 0 {
                    return Ok(SignedLog::zero());
                }
                let sign = if m < r { 1 } else { -1 };
                // sin(mπ/r) = sin((r-m)π/r); fold to the smaller argument so
                // [n] and [-n] come out with bit-identical magnitudes.
                let mm = (m % r).min(r - m % r);
                let logmag = ((mm as f64) * PI / r as f64).sin().ln() - self.ln_sin_pi_r;
                Ok(SignedLog::new(sign, logmag))
            }
            Regime::ComplexQ(_) => Err(Error::UnsupportedRegime {
                op: "qint_sl",
                regime: self.regime.clone(),
            }),
        }
    }

    /// Quantum factorial [n]! in signed-log form, memoized per context.
    pub fn qfact_sl(&self, n: i64) -> Result<SignedLog> {
        if n < 0 {
            return Err(Error::InvalidLabel {
                name: "n",
                value: n,
                reason: "quantum factorial requires n >= 0".into(),
            });
        }
        if !self.is_real() {
            return Err(Error::UnsupportedRegime {
                op: "qfact_sl",
                regime: self.regime.clone(),
            });
        }
        let n = n as usize;
        {
            let memo = self.fact_real.read().unwrap();
            if let Some(&v) = memo.get(n) {
                return Ok(v);
            }
        }
        let mut memo = self.fact_real.write().unwrap();
        while memo.len() <= n {
            let k = memo.len() as i64;
            let next = *memo.last().unwrap() * self.qint_sl(k)?;
            memo.push(next);
        }
        Ok(memo[n])
    }

    /// Quantum factorial [n]! as a complex double (ComplexQ regime).
    pub fn qfact_c(&self, n: i64) -> Result<Complex64> {
        if n < 0 {
            return Err(Error::InvalidLabel {
                name: "n",
                value: n,
                reason: "quantum factorial requires n >= 0".into(),
            });
        }
        let q = match self.regime {
            Regime::ComplexQ(q) => q,
            _ => {
                return Err(Error::UnsupportedRegime {
                    op: "qfact_c",
                    regime: self.regime.clone(),
                })
            }
        };
        let n = n as usize;
        {
            let memo = self.fact_complex.read().unwrap();
            if let Some(&v) = memo.get(n) {
                return Ok(v);
            }
        }
        let mut memo = self.fact_complex.write().unwrap();
        while memo.len() <= n {
            let k = memo.len() as i64;
            opcount::add(1);
            let next = *memo.last().unwrap() * qint_complex(q, k);
            memo.push(next);
        }
        Ok(memo[n])
    }

    /// Pre-populate the factorial memo (useful before sharing across threads
    /// when lock traffic matters).
    pub fn warm_factorials(&self, up_to: i64) -> Result<()> {
        if self.is_real() {
            self.qfact_sl(up_to).map(|_| ())
        } else {
            self.qfact_c(up_to).map(|_| ())
        }
    }
}

fn qint_complex(q: Complex64, n: i64) -> Complex64 {
    if n == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let qn = q.powi(n as i32);
    (qn - qn.inv()) / (q - q.inv())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl(sign: i8, logmag: f64) -> SignedLog {
        SignedLog::new(sign, logmag)
    }

    #[test]
    fn qint_classical() {
        let ctx = QContext::classical();
        assert_eq!(ctx.qint_f64(5), 5.0);
        assert_eq!(ctx.qint_f64(0), 0.0);
        assert_eq!(ctx.qint_f64(-7), -7.0);
    }

    #[test]
    fn qint_root_of_unity() {
        let ctx = QContext::root_of_unity(4).unwrap();
        assert!((ctx.qint_f64(2) - 2f64.sqrt()).abs() < 1e-12);
        let ctx5 = QContext::root_of_unity(5).unwrap();
        assert_eq!(ctx5.qint_f64(0), 0.0);
        assert!(ctx5.qint_sl(5).unwrap().is_zero());
    }

    #[test]
    fn qint_real_q() {
        let ctx = QContext::real_q(2.0).unwrap();
        assert!((ctx.qint_f64(3) - 5.25).abs() < 1e-12);
        let ctx_inv = QContext::real_q(0.5).unwrap();
        assert!((ctx_inv.qint_f64(3) - 5.25).abs() < 1e-12);
    }

    #[test]
    fn qint_sl_examples() {
        let ctx = QContext::classical();
        let v = ctx.qint_sl(3).unwrap();
        assert_eq!(v.sign, 1);
        assert!((v.logmag - 3f64.ln()).abs() < 1e-15);
        let neg = ctx.qint_sl(-2).unwrap();
        assert_eq!(neg.sign, -1);
        assert!((neg.logmag - 2f64.ln()).abs() < 1e-15);
        let ctx7 = QContext::root_of_unity(7).unwrap();
        assert_eq!(ctx7.qint_sl(7).unwrap().sign, 0);
    }

    #[test]
    fn qfact_examples() {
        let ctx = QContext::classical();
        let f0 = ctx.qfact_sl(0).unwrap();
        assert_eq!((f0.sign, f0.logmag), (1, 0.0));
        let f4 = ctx.qfact_sl(4).unwrap();
        assert!((f4.to_f64() - 24.0).abs() < 1e-12);
        let ctx3 = QContext::root_of_unity(3).unwrap();
        assert!(ctx3.qfact_sl(3).unwrap().is_zero());
        assert!(ctx.qfact_sl(-1).is_err());
    }

    #[test]
    fn qint_antisymmetry() {
        for ctx in [
            QContext::classical(),
            QContext::real_q(1.7).unwrap(),
            QContext::root_of_unity(9).unwrap(),
        ] {
            for n in -200..=200 {
                let a = ctx.qint_sl(n).unwrap();
                let b = ctx.qint_sl(-n).unwrap();
                assert_eq!(a.sign, -b.sign, "n={n}");
                if a.sign != 0 {
                    assert_eq!(a.logmag, b.logmag, "n={n}");
                }
            }
        }
        let ctx = QContext::complex_q(Complex64::new(0.3, 0.8)).unwrap();
        for n in -80..=80i64 {
            let a = ctx.qint(n).to_complex();
            let b = ctx.qint(-n).to_complex();
            assert!((a + b).norm() < 1e-10 * a.norm().max(1.0), "n={n}");
        }
    }

    #[test]
    fn classical_limit() {
        for q in [1.0 + 1e-8, 1.0 - 1e-8] {
            let ctx = QContext::real_q(q).unwrap();
            for n in -50..=50i64 {
                let v = ctx.qint_f64(n);
                assert!(
                    (v - n as f64).abs() <= 1e-5 * (n.abs().max(1) as f64),
                    "q={q} n={n} v={v}"
                );
            }
        }
    }

    #[test]
    fn root_positivity() {
        for r in 2..=1000u32 {
            let ctx = QContext::root_of_unity(r).unwrap();
            for n in 1..r as i64 {
                assert_eq!(ctx.qint_sl(n).unwrap().sign, 1, "r={r} n={n}");
            }
        }
    }

    #[test]
    fn signed_log_round_trip() {
        for &x in &[1.0, -2.5, 3.7e300, -1.2e-300, 24.0, -1e-10] {
            // Log-domain storage carries a relative error of about
            // |ln x| * eps, so ~1e-13 near the f64 range limits.
            let back = SignedLog::from_f64(SignedLog::from_f64(x).to_f64()).to_f64();
            assert!((back - x).abs() <= 1e-12 * x.abs(), "x={x}");
        }
        assert!(SignedLog::from_f64(0.0).is_zero());
    }

    #[test]
    fn fact_ratio_is_qint() {
        let ctx = QContext::root_of_unity(50).unwrap();
        for n in 1..=48i64 {
            let ratio = ctx.qfact_sl(n).unwrap() / ctx.qfact_sl(n - 1).unwrap();
            let qi = ctx.qint_sl(n).unwrap();
            assert_eq!(ratio.sign, qi.sign);
            assert!((ratio.logmag - qi.logmag).abs() <= 1e-12 * qi.logmag.abs().max(1.0));
        }
    }

    #[test]
    fn signed_log_add_cancellation() {
        let a = sl(1, 2.0);
        assert!((a + -a).is_zero());
        let b = sl(-1, 1.0);
        let s = a + b;
        let expect = 2f64.exp() - 1f64.exp();
        assert!((s.to_f64() - expect).abs() < 1e-12);
    }
}
