//! Outward-rounded interval arithmetic and axis-aligned boxes.
//!
//! Every remainder and nonlinear-range bound in the crate ultimately rests on
//! these operations, so the contract is strict: for any points `x ∈ a`,
//! `y ∈ b`, the exact value `x ∘ y` lies in `op(a, b)`. Rounding is handled
//! portably by detecting whether a native floating operation was exact (TwoSum
//! residual for `+`, fused-multiply-add residual for `*` and `/`) and nudging
//! the affected endpoint outward by one ulp only when it was not. Exact
//! operations therefore stay exact, which the conversion algorithms rely on.
//!
//! Unbounded or NaN endpoints are rejected everywhere: the reachability
//! pipeline is defined on compact sets only.

use crate::error::{Error, Result};

/// Adds with a one-ulp downward nudge when the native sum was inexact.
pub(crate) fn add_down(a: f64, b: f64) -> f64 {
    let (s, err) = two_sum(a, b);
    if err < 0.0 {
        s.next_down()
    } else {
        s
    }
}

/// Adds with a one-ulp upward nudge when the native sum was inexact.
pub(crate) fn add_up(a: f64, b: f64) -> f64 {
    let (s, err) = two_sum(a, b);
    if err > 0.0 {
        s.next_up()
    } else {
        s
    }
}

pub(crate) fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

pub(crate) fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

pub(crate) fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    let r = a.mul_add(b, -p); // exact residual: a*b = p + r
    if r < 0.0 {
        p.next_down()
    } else {
        p
    }
}

pub(crate) fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    let r = a.mul_add(b, -p);
    if r > 0.0 {
        p.next_up()
    } else {
        p
    }
}

/// TwoSum: returns `(fl(a+b), err)` with `a + b = fl(a+b) + err` exactly
/// (valid when no intermediate overflows; overflow yields an infinite sum
/// which callers reject).
#[inline]
pub(crate) fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bv = s - a;
    let av = s - bv;
    let err = (b - bv) + (a - av);
    (s, err)
}

/// A closed interval `[lo, hi]` with finite endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const UNIT: Interval = Interval { lo: -1.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Interval> {
        if lo.is_finite() && hi.is_finite() && lo <= hi {
            Ok(Interval { lo, hi })
        } else {
            Err(Error::InvalidInterval { lo, hi })
        }
    }

    pub fn point(x: f64) -> Result<Interval> {
        Interval::new(x, x)
    }

    /// Symmetric interval `[-r, r]`; `r` must be non-negative.
    pub fn symmetric(r: f64) -> Result<Interval> {
        Interval::new(-r, r)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        sub_up(self.hi, self.lo)
    }

    pub fn mid(&self) -> f64 {
        let m = 0.5 * (self.lo + self.hi);
        if m.is_finite() {
            m
        } else {
            self.lo + 0.5 * (self.hi - self.lo)
        }
    }

    /// Radius measured from [`Interval::mid`], rounded up so that
    /// `[mid - rad, mid + rad] ⊇ self`.
    pub fn rad(&self) -> f64 {
        let m = self.mid();
        sub_up(self.hi, m).max(sub_up(m, self.lo)).max(0.0)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull_with(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    fn check(lo: f64, hi: f64) -> Result<Interval> {
        if lo.is_finite() && hi.is_finite() {
            debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
            Ok(Interval { lo, hi })
        } else {
            Err(Error::IntervalBlowup)
        }
    }

    pub fn add(&self, o: &Interval) -> Result<Interval> {
        Interval::check(add_down(self.lo, o.lo), add_up(self.hi, o.hi))
    }

    pub fn sub(&self, o: &Interval) -> Result<Interval> {
        Interval::check(sub_down(self.lo, o.hi), sub_up(self.hi, o.lo))
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    pub fn mul(&self, o: &Interval) -> Result<Interval> {
        let lo = mul_down(self.lo, o.lo)
            .min(mul_down(self.lo, o.hi))
            .min(mul_down(self.hi, o.lo))
            .min(mul_down(self.hi, o.hi));
        let hi = mul_up(self.lo, o.lo)
            .max(mul_up(self.lo, o.hi))
            .max(mul_up(self.hi, o.lo))
            .max(mul_up(self.hi, o.hi));
        Interval::check(lo, hi)
    }

    /// Scales by a scalar (sound in both directions).
    pub fn scale(&self, c: f64) -> Result<Interval> {
        self.mul(&Interval { lo: c, hi: c })
    }

    /// Division; the divisor interval must not contain zero.
    pub fn div(&self, o: &Interval) -> Result<Interval> {
        if o.lo <= 0.0 && o.hi >= 0.0 {
            return Err(Error::DivByZero);
        }
        let lo = div_dir(self.lo, o.lo, false)
            .min(div_dir(self.lo, o.hi, false))
            .min(div_dir(self.hi, o.lo, false))
            .min(div_dir(self.hi, o.hi, false));
        let hi = div_dir(self.lo, o.lo, true)
            .max(div_dir(self.lo, o.hi, true))
            .max(div_dir(self.hi, o.lo, true))
            .max(div_dir(self.hi, o.hi, true));
        Interval::check(lo, hi)
    }

    pub fn recip(&self) -> Result<Interval> {
        Interval { lo: 1.0, hi: 1.0 }.div(self)
    }

    /// `self^k` with the tight even-power form: an even power of an interval
    /// straddling zero starts at zero.
    pub fn pow(&self, k: u32) -> Result<Interval> {
        if k == 0 {
            return Ok(Interval { lo: 1.0, hi: 1.0 });
        }
        if k == 1 {
            return Ok(*self);
        }
        let abs_lo = if self.lo <= 0.0 && self.hi >= 0.0 {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        };
        let abs_hi = self.lo.abs().max(self.hi.abs());
        let p_lo = pow_nonneg_down(abs_lo, k);
        let p_hi = pow_nonneg_up(abs_hi, k);
        if k % 2 == 0 {
            Interval::check(p_lo, p_hi)
        } else {
            // odd powers are monotone; apply to the signed endpoints
            let lo = signed_pow(self.lo, k, false);
            let hi = signed_pow(self.hi, k, true);
            Interval::check(lo, hi)
        }
    }

    /// Sound enclosure of `sin` over the interval. Critical points `π/2 + kπ`
    /// are detected conservatively (a point within a few ulps of an endpoint
    /// counts as inside), so the result may be one ulp wider but never
    /// narrower than the exact image. Clamped to `[-1, 1]`.
    pub fn sin(&self) -> Interval {
        trig_range(self, 0.0)
    }

    /// Sound enclosure of `cos`; see [`Interval::sin`].
    pub fn cos(&self) -> Interval {
        // cos(x) = sin(x + π/2): shift the critical-point phase instead of
        // the (inexact) argument.
        trig_range(self, std::f64::consts::FRAC_PI_2)
    }

    pub fn exp(&self) -> Result<Interval> {
        let lo = self.lo.exp().next_down().max(0.0);
        let hi = self.hi.exp().next_up();
        Interval::check(lo, hi)
    }

    pub fn abs(&self) -> Interval {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            self.neg()
        } else {
            Interval {
                lo: 0.0,
                hi: self.hi.max(-self.lo),
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }
}

fn div_dir(a: f64, b: f64, up: bool) -> f64 {
    let q = a / b;
    let r = q.mul_add(b, -a); // exact: a/b = q - r/b
    if r == 0.0 {
        return q;
    }
    let true_above = (r < 0.0) == (b > 0.0); // r/b < 0  ⇒  true > q
    if up && true_above {
        q.next_up()
    } else if !up && !true_above {
        q.next_down()
    } else {
        q
    }
}

fn pow_nonneg_down(x: f64, k: u32) -> f64 {
    let mut r = x;
    for _ in 1..k {
        r = mul_down(r, x);
    }
    r
}

fn pow_nonneg_up(x: f64, k: u32) -> f64 {
    let mut r = x;
    for _ in 1..k {
        r = mul_up(r, x);
    }
    r
}

fn signed_pow(x: f64, k: u32, up: bool) -> f64 {
    if x >= 0.0 {
        if up {
            pow_nonneg_up(x, k)
        } else {
            pow_nonneg_down(x, k)
        }
    } else if up {
        -pow_nonneg_down(-x, k)
    } else {
        -pow_nonneg_up(-x, k)
    }
}

/// Range of `sin(x + phase)` for `x ∈ iv`, where `phase ∈ {0, π/2}`.
fn trig_range(iv: &Interval, phase: f64) -> Interval {
    use std::f64::consts::PI;
    let f = |x: f64| if phase == 0.0 { x.sin() } else { x.cos() };
    if iv.width() >= 2.0 * PI {
        return Interval { lo: -1.0, hi: 1.0 };
    }
    let mut lo = f(iv.lo).min(f(iv.hi)).next_down();
    let mut hi = f(iv.lo).max(f(iv.hi)).next_up();
    // Maxima of sin(x + phase) at x = π/2 − phase + 2kπ, minima at π away.
    // Scan k conservatively: a critical point within a few ulps of the
    // interval counts as inside (soundness over tightness).
    let slack = 4.0 * (iv.lo.abs().max(iv.hi.abs()).max(1.0)) * f64::EPSILON;
    let max_base = PI / 2.0 - phase;
    let k_lo = ((iv.lo - max_base) / (2.0 * PI)).floor() as i64 - 1;
    let k_hi = ((iv.hi - max_base) / (2.0 * PI)).ceil() as i64 + 1;
    for k in k_lo..=k_hi {
        let x_max = max_base + 2.0 * PI * (k as f64);
        if x_max >= iv.lo - slack && x_max <= iv.hi + slack {
            hi = 1.0;
        }
        let x_min = x_max + PI;
        for x in [x_min, x_min - 2.0 * PI] {
            if x >= iv.lo - slack && x <= iv.hi + slack {
                lo = -1.0;
            }
        }
    }
    Interval {
        lo: lo.max(-1.0),
        hi: hi.min(1.0),
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// A non-empty product of intervals; the domain and remainder type of the
/// Taylor-model pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalBox {
    dims: Vec<Interval>,
}

impl IntervalBox {
    pub fn new(dims: Vec<Interval>) -> Result<IntervalBox> {
        if dims.is_empty() {
            return Err(Error::Domain("empty box".into()));
        }
        Ok(IntervalBox { dims })
    }

    /// The standard normalized domain `[-1, 1]^n`.
    pub fn unit(n: usize) -> IntervalBox {
        IntervalBox {
            dims: vec![Interval::UNIT; n],
        }
    }

    pub fn origin(n: usize) -> IntervalBox {
        IntervalBox {
            dims: vec![Interval::ZERO; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[Interval] {
        &self.dims
    }

    pub fn get(&self, i: usize) -> Interval {
        self.dims[i]
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && self.dims.iter().zip(x).all(|(iv, &v)| iv.contains(v))
    }

    pub fn contains_box(&self, other: &IntervalBox) -> bool {
        other.dim() == self.dim()
            && self
                .dims
                .iter()
                .zip(&other.dims)
                .all(|(a, b)| a.contains_interval(b))
    }

    pub fn intersects(&self, other: &IntervalBox) -> bool {
        self.dims
            .iter()
            .zip(&other.dims)
            .all(|(a, b)| a.intersects(b))
    }

    pub fn hull_with(&self, other: &IntervalBox) -> IntervalBox {
        IntervalBox {
            dims: self
                .dims
                .iter()
                .zip(&other.dims)
                .map(|(a, b)| a.hull_with(b))
                .collect(),
        }
    }

    pub fn add(&self, other: &IntervalBox) -> Result<IntervalBox> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch(format!(
                "box add: {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        let dims = self
            .dims
            .iter()
            .zip(&other.dims)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(IntervalBox { dims })
    }

    pub fn center(&self) -> Vec<f64> {
        self.dims.iter().map(|iv| iv.mid()).collect()
    }

    pub fn radius(&self) -> Vec<f64> {
        self.dims.iter().map(|iv| iv.rad()).collect()
    }

    pub fn widths(&self) -> Vec<f64> {
        self.dims.iter().map(|iv| iv.width()).collect()
    }

    pub fn corners(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut out = Vec::with_capacity(1 << n);
        for mask in 0..(1usize << n) {
            out.push(
                (0..n)
                    .map(|i| {
                        if mask >> i & 1 == 0 {
                            self.dims[i].lo()
                        } else {
                            self.dims[i].hi()
                        }
                    })
                    .collect(),
            );
        }
        out
    }

    /// Splits into an exact uniform grid: `counts[i]` pieces along dimension
    /// `i`. Adjacent pieces share their cut endpoints, so the union of the
    /// returned boxes is exactly `self`.
    pub fn split(&self, counts: &[usize]) -> Result<Vec<IntervalBox>> {
        if counts.len() != self.dim() {
            return Err(Error::DimMismatch(format!(
                "split counts: {} vs dimension {}",
                counts.len(),
                self.dim()
            )));
        }
        if counts.iter().any(|&c| c == 0) {
            return Err(Error::Domain("split count must be >= 1".into()));
        }
        // Per-dimension cut points, shared between neighbors.
        let cuts: Vec<Vec<f64>> = self
            .dims
            .iter()
            .zip(counts)
            .map(|(iv, &c)| {
                let mut pts = Vec::with_capacity(c + 1);
                pts.push(iv.lo());
                for i in 1..c {
                    let t = iv.lo() + (iv.hi() - iv.lo()) * (i as f64) / (c as f64);
                    let prev = *pts.last().unwrap();
                    pts.push(t.clamp(prev, iv.hi()));
                }
                pts.push(iv.hi());
                pts
            })
            .collect();
        let total: usize = counts.iter().product();
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0usize; self.dim()];
        loop {
            let dims = idx
                .iter()
                .enumerate()
                .map(|(d, &i)| Interval {
                    lo: cuts[d][i],
                    hi: cuts[d][i + 1],
                })
                .collect();
            out.push(IntervalBox { dims });
            // odometer increment
            let mut d = self.dim();
            loop {
                if d == 0 {
                    return Ok(out);
                }
                d -= 1;
                idx[d] += 1;
                if idx[d] < counts[d] {
                    break;
                }
                idx[d] = 0;
            }
        }
    }
}

impl std::fmt::Display for IntervalBox {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, iv) in self.dims.iter().enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}
