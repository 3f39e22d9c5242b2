//! Admissibility predicates, j/l ranges, and dimension counts for
//! trivalent vertices and four-valent boundary data.
//!
//! The dimension formulas are the source of truth here; the printed
//! inequality forms are re-derived from them and cross-checked in tests
//! against direct enumeration of admissible triples.

use crate::error::{Error, Result};
use crate::qnum::{QContext, TwiceSpin};

/// True iff the twice-spin triple (a,b,c) labels an admissible trivalent
/// vertex: triangle inequalities, even sum, and (at a root of unity) the
/// r-boundedness constraints.
pub fn triple_admissible(ctx: &QContext, a: TwiceSpin, b: TwiceSpin, c: TwiceSpin) -> bool {
    if a < 0 || b < 0 || c < 0 {
        return false;
    }
    if a > b + c || b > c + a || c > a + b {
        return false;
    }
    if (a + b + c) % 2 != 0 {
        return false;
    }
    if let Some(r) = ctx.root_order() {
        if a > r - 2 || b > r - 2 || c > r - 2 || a + b + c > 2 * r - 4 {
            return false;
        }
    }
    true
}

/// Validated four-valent boundary data with cached j/l ranges and the
/// space dimension n. Admissible values are `{jmin, jmin+2, ..., jmax}`
/// (and likewise for l); both sets have exactly `n` elements. `n == 0`
/// is a valid, empty space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FourValentSpace {
    pub a: TwiceSpin,
    pub b: TwiceSpin,
    pub c: TwiceSpin,
    pub d: TwiceSpin,
    pub jmin: i64,
    pub jmax: i64,
    pub lmin: i64,
    pub lmax: i64,
    pub n: usize,
}

impl FourValentSpace {
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn j_values(&self) -> impl Iterator<Item = i64> {
        let (lo, hi) = if self.n > 0 {
            (self.jmin, self.jmax)
        } else {
            (0, -1)
        };
        (lo..=hi).step_by(2)
    }

    pub fn l_values(&self) -> impl Iterator<Item = i64> {
        let (lo, hi) = if self.n > 0 {
            (self.lmin, self.lmax)
        } else {
            (0, -1)
        };
        (lo..=hi).step_by(2)
    }

    pub fn contains_j(&self, j: i64) -> bool {
        self.n > 0 && j >= self.jmin && j <= self.jmax && (j - self.jmin) % 2 == 0
    }

    pub fn contains_l(&self, l: i64) -> bool {
        self.n > 0 && l >= self.lmin && l <= self.lmax && (l - self.lmin) % 2 == 0
    }

    /// Position of an admissible j within the range.
    pub fn index_of_j(&self, j: i64) -> Option<usize> {
        self.contains_j(j).then(|| ((j - self.jmin) / 2) as usize)
    }

    /// σ = (a+b+c+d)/2; the common sign of all norms is (-1)^σ.
    pub fn sigma(&self) -> i64 {
        (self.a + self.b + self.c + self.d) / 2
    }

    pub fn sigma_sign(&self) -> i8 {
        if self.sigma() % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// Dimension of the four-valent space, from the closed-form count
/// (clamped at zero). Labels that are invalid in the regime give zero.
pub fn dimension(ctx: &QContext, a: TwiceSpin, b: TwiceSpin, c: TwiceSpin, d: TwiceSpin) -> i64 {
    if a < 0 || b < 0 || c < 0 || d < 0 {
        return 0;
    }
    if (a + b + c + d) % 2 != 0 {
        return 0;
    }
    let m = a.min(b).min(c).min(d);
    let big = a.max(b).max(c).max(d);
    let s = (a + b + c + d) / 2;
    let mut nbar = m.min(s - big) + 1;
    if let Some(r) = ctx.root_order() {
        if big > r - 2 {
            return 0;
        }
        nbar = nbar.min(r - 1 - big.max(s - m));
    }
    nbar.max(0)
}

/// Build the validated space with cached ranges and dimension.
pub fn make_space(
    ctx: &QContext,
    a: TwiceSpin,
    b: TwiceSpin,
    c: TwiceSpin,
    d: TwiceSpin,
) -> Result<FourValentSpace> {
    for (name, v) in [("a", a), ("b", b), ("c", c), ("d", d)] {
        if v < 0 {
            return Err(Error::InvalidLabel {
                name,
                value: v,
                reason: "twice-spin labels must be non-negative".into(),
            });
        }
        if let Some(r) = ctx.root_order() {
            if v > r - 2 {
                return Err(Error::InvalidLabel {
                    name,
                    value: v,
                    reason: format!("label exceeds the root-of-unity bound r - 2 = {}", r - 2),
                });
            }
        }
    }
    let jmin = (a - d).abs().max((b - c).abs());
    let lmin = (a - b).abs().max((c - d).abs());
    let mut jmax = (a + d).min(b + c);
    let mut lmax = (a + b).min(c + d);
    if let Some(r) = ctx.root_order() {
        jmax = jmax.min(r - 2).min(2 * r - 4 - (a + d).max(b + c));
        lmax = lmax.min(r - 2).min(2 * r - 4 - (a + b).max(c + d));
    }
    let n = dimension(ctx, a, b, c, d).max(0) as usize;
    Ok(FourValentSpace {
        a,
        b,
        c,
        d,
        jmin,
        jmax,
        lmin,
        lmax,
        n,
    })
}

/// Equivalent to `make_space(...).n > 0`, computed from the dimension
/// formulas directly.
pub fn nonzero_conditions(
    ctx: &QContext,
    a: TwiceSpin,
    b: TwiceSpin,
    c: TwiceSpin,
    d: TwiceSpin,
) -> bool {
    dimension(ctx, a, b, c, d) > 0
}
