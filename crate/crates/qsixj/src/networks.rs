//! Closed-form evaluation of the bubble, θ, and Tet networks, and the
//! two 6j conventions built on them.
//!
//! The Tet evaluator sums the explicit single-sum formula with sign-aware
//! log-sum-exp accumulation and attaches a cancellation diagnostic
//! (decimal digits lost to alternating-sum cancellation) to each value.

use num_complex::Complex64;

use crate::admiss::triple_admissible;
use crate::error::{Error, Result};
use crate::opcount;
use crate::qnum::{QContext, Scalar, SignedLog, TwiceSpin};

/// A network value: regime-dependent scalar plus an exactness flag.
///
/// `exact_zero` is set iff an admissibility condition failed; a numeric
/// value that happens to underflow keeps `exact_zero == false`.
#[derive(Clone, Copy, Debug)]
pub struct NetValue {
    pub value: Scalar,
    pub exact_zero: bool,
    /// Decimal digits lost to cancellation in the alternating sum
    /// (log10 of max term over result). Zero for single-term sums.
    pub cancel_digits: f64,
}

impl NetValue {
    pub fn exact_zero(ctx: &QContext) -> Self {
        let value = if ctx.is_real() {
            Scalar::Real(SignedLog::zero())
        } else {
            Scalar::Complex(Complex64::new(0.0, 0.0))
        };
        NetValue {
            value,
            exact_zero: true,
            cancel_digits: 0.0,
        }
    }

    pub fn real(v: SignedLog) -> Self {
        NetValue {
            value: Scalar::Real(v),
            exact_zero: false,
            cancel_digits: 0.0,
        }
    }

    pub fn complex(z: Complex64) -> Self {
        NetValue {
            value: Scalar::Complex(z),
            exact_zero: false,
            cancel_digits: 0.0,
        }
    }

    pub fn approx_f64(&self) -> f64 {
        self.value.approx_f64()
    }

    /// Signed-log form; panics in the complex regime.
    pub fn as_sl(&self) -> SignedLog {
        match self.value {
            Scalar::Real(s) => s,
            Scalar::Complex(_) => panic!("real value expected"),
        }
    }

    pub fn as_complex(&self) -> Complex64 {
        self.value.to_complex()
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

/// Arguments of Tet(a,b,c,d;j,l) with the vertex pairing
/// (a,b,l), (c,d,l), (a,d,j), (c,b,j).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TetArgs {
    pub a: TwiceSpin,
    pub b: TwiceSpin,
    pub c: TwiceSpin,
    pub d: TwiceSpin,
    pub j: TwiceSpin,
    pub l: TwiceSpin,
}

impl TetArgs {
    pub fn new(a: TwiceSpin, b: TwiceSpin, c: TwiceSpin, d: TwiceSpin, j: TwiceSpin, l: TwiceSpin) -> Self {
        TetArgs { a, b, c, d, j, l }
    }

    pub fn vertex_triples(&self) -> [(TwiceSpin, TwiceSpin, TwiceSpin); 4] {
        [
            (self.a, self.b, self.l),
            (self.c, self.d, self.l),
            (self.a, self.d, self.j),
            (self.c, self.b, self.j),
        ]
    }

    pub fn admissible(&self, ctx: &QContext) -> bool {
        self.vertex_triples()
            .iter()
            .all(|&(x, y, z)| triple_admissible(ctx, x, y, z))
    }
}

fn parity_sign(n: i64) -> i8 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// The bubble (closed loop) value Δ_j = (-1)^j [j+1].
pub fn bubble(ctx: &QContext, j: TwiceSpin) -> NetValue {
    if j < 0 {
        return NetValue::exact_zero(ctx);
    }
    if let Some(r) = ctx.root_order() {
        if j > r - 2 {
            return NetValue::exact_zero(ctx);
        }
    }
    let sign = parity_sign(j);
    match ctx.qint(j + 1) {
        Scalar::Real(v) => NetValue::real(SignedLog::new(sign * v.sign, v.logmag)),
        Scalar::Complex(z) => NetValue::complex(z * sign as f64),
    }
}

/// The θ-network value for a trivalent vertex triple.
pub fn theta(ctx: &QContext, a: TwiceSpin, b: TwiceSpin, c: TwiceSpin) -> NetValue {
    if !triple_admissible(ctx, a, b, c) {
        return NetValue::exact_zero(ctx);
    }
    let s = (a + b + c) / 2;
    if ctx.is_real() {
        let f = |n| ctx.qfact_sl(n).expect("real regime, n >= 0");
        let num = f(s + 1) * f(s - a) * f(s - b) * f(s - c);
        let den = f(a) * f(b) * f(c);
        let v = num / den;
        NetValue::real(SignedLog::new(parity_sign(s) * v.sign, v.logmag))
    } else {
        let f = |n| ctx.qfact_c(n).expect("n >= 0");
        let num = f(s + 1) * f(s - a) * f(s - b) * f(s - c);
        let den = f(a) * f(b) * f(c);
        NetValue::complex(num / den * parity_sign(s) as f64)
    }
}

/// Bounds and index combinations of the explicit Tet sum.
struct TetSum {
    lower: [i64; 4],
    upper: [i64; 3],
    min_s: i64,
    max_s: i64,
}

impl TetSum {
    fn new(t: &TetArgs) -> Self {
        let TetArgs { a, b, c, d, j, l } = *t;
        let lower = [
            (a + d + j) / 2,
            (b + c + j) / 2,
            (a + b + l) / 2,
            (c + d + l) / 2,
        ];
        let upper = [
            (b + d + j + l) / 2,
            (a + c + j + l) / 2,
            (a + b + c + d) / 2,
        ];
        let min_s = *lower.iter().max().unwrap();
        let max_s = *upper.iter().min().unwrap();
        TetSum {
            lower,
            upper,
            min_s,
            max_s,
        }
    }
}

/// Explicit single-sum evaluation of the Tet-network (the oracle path).
///
/// Exact-zero when any vertex triple is inadmissible. An empty sum range
/// for admissible triples would be an internal inconsistency and panics.
pub fn tet_oracle(ctx: &QContext, t: TetArgs) -> NetValue {
    if !t.admissible(ctx) {
        return NetValue::exact_zero(ctx);
    }
    let sum = TetSum::new(&t);
    assert!(
        sum.min_s <= sum.max_s,
        "empty Tet sum range for admissible arguments {t:?}"
    );
    if ctx.is_real() {
        tet_sum_real(ctx, &t, &sum)
    } else {
        tet_sum_complex(ctx, &t, &sum)
    }
}

fn tet_sum_real(ctx: &QContext, t: &TetArgs, sum: &TetSum) -> NetValue {
    let f = |n| ctx.qfact_sl(n).expect("real regime, n >= 0");
    let mut interior = SignedLog::one();
    for &bj in &sum.upper {
        for &ai in &sum.lower {
            interior = interior * f(bj - ai);
        }
    }
    let exterior = f(t.a) * f(t.b) * f(t.c) * f(t.d) * f(t.j) * f(t.l);
    let prefactor = interior / exterior;

    let mut pos = SignedLog::zero();
    let mut neg = SignedLog::zero();
    let mut max_term = f64::NEG_INFINITY;
    for s in sum.min_s..=sum.max_s {
        opcount::add(1);
        let mut den = SignedLog::one();
        for &ai in &sum.lower {
            den = den * f(s - ai);
        }
        for &bj in &sum.upper {
            den = den * f(bj - s);
        }
        assert!(
            !den.is_zero(),
            "vanishing denominator factorial in Tet sum for {t:?} at S={s}"
        );
        let term = f(s + 1) / den;
        if term.is_zero() {
            continue;
        }
        max_term = max_term.max(term.logmag);
        if parity_sign(s) > 0 {
            pos = pos + term;
        } else {
            neg = neg + term;
        }
    }
    let total = pos - neg;
    let cancel = if total.is_zero() {
        if max_term == f64::NEG_INFINITY {
            0.0
        } else {
            f64::INFINITY
        }
    } else if sum.min_s == sum.max_s {
        0.0
    } else {
        ((max_term - total.logmag) / std::f64::consts::LN_10).max(0.0)
    };
    NetValue {
        value: Scalar::Real(prefactor * total),
        exact_zero: false,
        cancel_digits: cancel,
    }
}

fn tet_sum_complex(ctx: &QContext, t: &TetArgs, sum: &TetSum) -> NetValue {
    let f = |n| ctx.qfact_c(n).expect("n >= 0");
    let mut prefactor = Complex64::new(1.0, 0.0);
    for &bj in &sum.upper {
        for &ai in &sum.lower {
            prefactor *= f(bj - ai);
        }
    }
    prefactor /= f(t.a) * f(t.b) * f(t.c) * f(t.d) * f(t.j) * f(t.l);

    let mut total = Complex64::new(0.0, 0.0);
    let mut max_term: f64 = 0.0;
    for s in sum.min_s..=sum.max_s {
        opcount::add(1);
        let mut den = Complex64::new(1.0, 0.0);
        for &ai in &sum.lower {
            den *= f(s - ai);
        }
        for &bj in &sum.upper {
            den *= f(bj - s);
        }
        let term = f(s + 1) / den * parity_sign(s) as f64;
        max_term = max_term.max(term.norm());
        total += term;
    }
    let cancel = if sum.min_s == sum.max_s || max_term == 0.0 {
        0.0
    } else {
        (max_term / total.norm()).log10().max(0.0)
    };
    NetValue {
        value: Scalar::Complex(prefactor * total),
        exact_zero: false,
        cancel_digits: cancel,
    }
}

/// Kauffman-Lins 6j-symbol {a b j; c d l}_KL = Tet · Δ_j / (θ(a,d,j) θ(b,c,j)).
pub fn sixj_kl(
    ctx: &QContext,
    a: TwiceSpin,
    b: TwiceSpin,
    j: TwiceSpin,
    c: TwiceSpin,
    d: TwiceSpin,
    l: TwiceSpin,
) -> Result<NetValue> {
    let tet = tet_oracle(ctx, TetArgs::new(a, b, c, d, j, l));
    if tet.exact_zero {
        return Ok(NetValue::exact_zero(ctx));
    }
    let th1 = theta(ctx, a, d, j);
    let th2 = theta(ctx, b, c, j);
    if th1.exact_zero {
        return Err(Error::InadmissibleDenominator(a, d, j));
    }
    if th2.exact_zero {
        return Err(Error::InadmissibleDenominator(b, c, j));
    }
    let delta = bubble(ctx, j);
    let value = match (tet.value, delta.value, th1.value, th2.value) {
        (Scalar::Real(t), Scalar::Real(dl), Scalar::Real(x), Scalar::Real(y)) => {
            Scalar::Real(t * dl / (x * y))
        }
        _ => Scalar::Complex(tet.as_complex() * delta.as_complex() / (th1.as_complex() * th2.as_complex())),
    };
    Ok(NetValue {
        value,
        exact_zero: false,
        cancel_digits: tet.cancel_digits,
    })
}

/// Racah-Wigner 6j-symbol {j1/2 j2/2 j3/2; J1/2 J2/2 J3/2} from twice-spin
/// arguments, classical regime only.
///
/// Evaluated as Tet(J1,J2,j1,j2;J3,j3) over the square root of the absolute
/// value of the four θ-networks; the sign convention is fixed by agreement
/// with the brute-force Clebsch-Gordan contraction at q = 1.
pub fn sixj_rw(
    ctx: &QContext,
    j1: TwiceSpin,
    j2: TwiceSpin,
    j3: TwiceSpin,
    cj1: TwiceSpin,
    cj2: TwiceSpin,
    cj3: TwiceSpin,
) -> Result<NetValue> {
    if !matches!(ctx.regime(), crate::qnum::Regime::Classical) {
        return Err(Error::UnsupportedRegime {
            op: "sixj_rw",
            regime: ctx.regime().clone(),
        });
    }
    let tet = tet_oracle(ctx, TetArgs::new(cj1, cj2, j1, j2, cj3, j3));
    if tet.exact_zero {
        return Ok(NetValue::exact_zero(ctx));
    }
    let thetas = [
        theta(ctx, cj1, cj2, j3),
        theta(ctx, j1, j2, j3),
        theta(ctx, cj1, j2, cj3),
        theta(ctx, cj2, j1, cj3),
    ];
    let mut prod = SignedLog::one();
    for th in &thetas {
        debug_assert!(!th.exact_zero, "theta triple inadmissible while Tet is not");
        prod = prod * th.as_sl();
    }
    let value = tet.as_sl() / prod.sqrt_abs();
    Ok(NetValue {
        value: Scalar::Real(value),
        exact_zero: false,
        cancel_digits: tet.cancel_digits,
    })
}
