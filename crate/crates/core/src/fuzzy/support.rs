use serde::Serialize;

use super::{FuzzyError, KEY_DOMAIN};

/// Closed real interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, FuzzyError> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(FuzzyError::InvalidInterval(lo, hi));
        }
        Ok(Interval { lo, hi })
    }
}

/// `x ↦ scale·x + offset`. Any affine map is monotone; a negative scale
/// reverses the endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    pub scale: f64,
    pub offset: f64,
}

impl AffineMap {
    pub fn identity() -> Self {
        AffineMap {
            scale: 1.0,
            offset: 0.0,
        }
    }

    pub fn shift(offset: f64) -> Self {
        AffineMap { scale: 1.0, offset }
    }

    pub fn apply(&self, x: f64) -> f64 {
        self.scale * x + self.offset
    }

    pub fn image(&self, iv: Interval) -> Interval {
        let a = self.apply(iv.lo);
        let b = self.apply(iv.hi);
        Interval {
            lo: a.min(b),
            hi: a.max(b),
        }
    }
}

/// Integer cells `[lo, hi]` of the key grid plus their Hartley measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscreteSupport {
    pub image: Interval,
    pub lo: i64,
    pub hi: i64,
    pub cardinality: usize,
    pub bits: f64,
}

/// `log₂ |support|`.
pub fn hartley(cardinality: usize) -> Result<f64, FuzzyError> {
    if cardinality == 0 {
        return Err(FuzzyError::EmptySupport);
    }
    Ok((cardinality as f64).log2())
}

/// Information gained between two supports, `log₂(prev / cur)` bits.
pub fn hartley_drop(prev: usize, cur: usize) -> Result<f64, FuzzyError> {
    if prev == 0 || cur == 0 {
        return Err(FuzzyError::EmptySupport);
    }
    Ok((prev as f64 / cur as f64).log2())
}

pub fn one_bit_event(prev_support: usize, cur_support: usize) -> bool {
    cur_support * 2 <= prev_support
}

/// Pushes an α-cut interval through a monotone map and discretizes the
/// image outward (floor/ceil) onto the integer key grid.
pub fn propagate_interval(cut: Interval, map: AffineMap) -> Result<DiscreteSupport, FuzzyError> {
    let cut = Interval::new(cut.lo, cut.hi)?;
    let image = map.image(cut);
    let max = (KEY_DOMAIN - 1) as f64;
    let lo = image.lo.floor().max(0.0);
    let hi = image.hi.ceil().min(max);
    if lo > hi {
        return Err(FuzzyError::EmptySupport);
    }
    let cardinality = (hi - lo) as usize + 1;
    Ok(DiscreteSupport {
        image,
        lo: lo as i64,
        hi: hi as i64,
        cardinality,
        bits: hartley(cardinality)?,
    })
}
