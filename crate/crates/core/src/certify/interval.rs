//! Outward-rounded interval arithmetic on `f64`.
//!
//! Every operation rounds to nearest and then moves each bound one ulp
//! outward, which encloses the exact result without touching the FPU
//! rounding mode.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

fn widen(lo: f64, hi: f64) -> Interval {
    if lo.is_nan() || hi.is_nan() {
        return Interval::ENTIRE;
    }
    Interval {
        lo: lo.next_down(),
        hi: hi.next_up(),
    }
}

impl Interval {
    pub const ENTIRE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    /// `None` unless `lo <= hi` and neither is NaN.
    pub fn new(lo: f64, hi: f64) -> Option<Self> {
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// `[x - r, x + r]`, rounded outward.
    pub fn ball(x: f64, r: f64) -> Self {
        widen(x - r, x + r)
    }

    /// Smallest interval with `f64` bounds containing `q`.
    pub fn from_rational(q: &BigRational) -> Self {
        let approx = q.to_f64().unwrap_or(f64::NAN);
        if !approx.is_finite() {
            return if q.is_zero() {
                Interval::point(0.0)
            } else {
                Interval::ENTIRE
            };
        }
        let exact = |x: f64| BigRational::from_float(x).expect("finite float");
        let mut lo = approx;
        while exact(lo) > *q {
            lo = lo.next_down();
        }
        let mut hi = approx;
        while exact(hi) < *q {
            hi = hi.next_up();
        }
        Interval { lo, hi }
    }

    pub fn from_integer(n: &BigInt) -> Self {
        Self::from_rational(&BigRational::from_integer(n.clone()))
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn mid(&self) -> f64 {
        let m = 0.5 * self.lo + 0.5 * self.hi;
        if m.is_finite() {
            m
        } else {
            0.0
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        let below = !self.lo.is_finite()
            || BigRational::from_float(self.lo).is_some_and(|lo| lo <= *q);
        let above = !self.hi.is_finite()
            || BigRational::from_float(self.hi).is_some_and(|hi| *q <= hi);
        below && above
    }

    /// `self` lies in the interior of `outer`.
    pub fn strictly_inside(&self, outer: &Interval) -> bool {
        outer.lo < self.lo && self.hi < outer.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersection(&self, other: &Interval) -> Option<Interval> {
        Interval::new(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn sqr(&self) -> Interval {
        let (a, b) = (self.lo * self.lo, self.hi * self.hi);
        if self.contains(0.0) {
            Interval {
                lo: 0.0,
                hi: a.max(b).next_up(),
            }
        } else {
            widen(a.min(b), a.max(b))
        }
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        widen(self.lo + o.lo, self.hi + o.hi)
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        widen(self.lo - o.hi, self.hi - o.lo)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        // exact zeros stay exact so real data does not pick up imaginary fuzz
        if (self.lo == 0.0 && self.hi == 0.0) || (o.lo == 0.0 && o.hi == 0.0) {
            return Interval::point(0.0);
        }
        let p = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        if p.iter().any(|x| x.is_nan()) {
            return Interval::ENTIRE;
        }
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        widen(lo, hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

/// Rectangle in ℂ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComplexInterval {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexInterval {
    pub const ZERO: ComplexInterval = ComplexInterval {
        re: Interval { lo: 0.0, hi: 0.0 },
        im: Interval { lo: 0.0, hi: 0.0 },
    };

    pub fn new(re: Interval, im: Interval) -> Self {
        ComplexInterval { re, im }
    }

    pub fn point(z: Complex64) -> Self {
        ComplexInterval {
            re: Interval::point(z.re),
            im: Interval::point(z.im),
        }
    }

    pub fn real(x: Interval) -> Self {
        ComplexInterval {
            re: x,
            im: Interval::point(0.0),
        }
    }

    /// Square of half-width `r` around `z`.
    pub fn ball(z: Complex64, r: f64) -> Self {
        ComplexInterval {
            re: Interval::ball(z.re, r),
            im: Interval::ball(z.im, r),
        }
    }

    pub fn mid(&self) -> Complex64 {
        Complex64::new(self.re.mid(), self.im.mid())
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.re.contains(z.re) && self.im.contains(z.im)
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(Complex64::new(0.0, 0.0))
    }

    pub fn strictly_inside(&self, outer: &ComplexInterval) -> bool {
        self.re.strictly_inside(&outer.re) && self.im.strictly_inside(&outer.im)
    }

    pub fn intersects(&self, other: &ComplexInterval) -> bool {
        self.re.intersects(&other.re) && self.im.intersects(&other.im)
    }

    pub fn intersection(&self, other: &ComplexInterval) -> Option<ComplexInterval> {
        Some(ComplexInterval {
            re: self.re.intersection(&other.re)?,
            im: self.im.intersection(&other.im)?,
        })
    }

    pub fn hull_point(&self, z: Complex64) -> ComplexInterval {
        ComplexInterval {
            re: self.re.hull(&Interval::point(z.re)),
            im: self.im.hull(&Interval::point(z.im)),
        }
    }

    pub fn width(&self) -> f64 {
        self.re.width().max(self.im.width())
    }
}

impl Add for ComplexInterval {
    type Output = ComplexInterval;
    fn add(self, o: ComplexInterval) -> ComplexInterval {
        ComplexInterval {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

impl Sub for ComplexInterval {
    type Output = ComplexInterval;
    fn sub(self, o: ComplexInterval) -> ComplexInterval {
        ComplexInterval {
            re: self.re - o.re,
            im: self.im - o.im,
        }
    }
}

impl Neg for ComplexInterval {
    type Output = ComplexInterval;
    fn neg(self) -> ComplexInterval {
        ComplexInterval {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Mul for ComplexInterval {
    type Output = ComplexInterval;
    fn mul(self, o: ComplexInterval) -> ComplexInterval {
        ComplexInterval {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

/// One complex rectangle per coordinate.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ComplexBox(pub Vec<ComplexInterval>);

impl ComplexBox {
    pub fn around(center: &[Complex64], radius: f64) -> Self {
        ComplexBox(center.iter().map(|&z| ComplexInterval::ball(z, radius)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn mid(&self) -> Vec<Complex64> {
        self.0.iter().map(ComplexInterval::mid).collect()
    }

    pub fn intersects(&self, other: &ComplexBox) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(&other.0).all(|(a, b)| a.intersects(b))
    }

    pub fn contains(&self, z: &[Complex64]) -> bool {
        self.dim() == z.len() && self.0.iter().zip(z).all(|(a, &b)| a.contains(b))
    }

    pub fn width(&self) -> f64 {
        self.0.iter().map(ComplexInterval::width).fold(0.0, f64::max)
    }
}
