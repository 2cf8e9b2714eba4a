//! Directed-rounding evaluation of `lg` and the binary entropy function.
//!
//! Values are carried as fixed-point integer enclosures `[lo, hi] * 2^-scale`
//! and only converted to dyadic rationals at the end, rounded outward.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{exact_log2, Rational};

/// Guard bits carried beyond the requested output precision.
const GUARD: u32 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
}

/// Fixed-point enclosure of a real number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: BigInt,
    pub hi: BigInt,
    pub scale: u32,
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

impl Enclosure {
    pub fn exact_int(v: i64, scale: u32) -> Self {
        let x = BigInt::from(v) << scale;
        Enclosure {
            lo: x.clone(),
            hi: x,
            scale,
        }
    }

    pub fn from_rational(r: &Rational, scale: u32) -> Self {
        let num = r.numer() << scale;
        Enclosure {
            lo: floor_div(&num, r.denom()),
            hi: ceil_div(&num, r.denom()),
            scale,
        }
    }

    pub fn add(&self, o: &Enclosure) -> Enclosure {
        debug_assert_eq!(self.scale, o.scale);
        Enclosure {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
            scale: self.scale,
        }
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure {
            lo: -&self.hi,
            hi: -&self.lo,
            scale: self.scale,
        }
    }

    /// Product with an exact nonnegative rational.
    pub fn scale_by(&self, r: &Rational) -> Enclosure {
        debug_assert!(!r.is_negative());
        Enclosure {
            lo: floor_div(&(&self.lo * r.numer()), r.denom()),
            hi: ceil_div(&(&self.hi * r.numer()), r.denom()),
            scale: self.scale,
        }
    }

    pub fn width(&self) -> BigInt {
        &self.hi - &self.lo
    }

    /// Outward-rounded dyadic bound with denominator `2^bits`.
    pub fn bound(&self, bits: u32, dir: Rounding) -> Rational {
        debug_assert!(bits <= self.scale);
        let shift = BigInt::one() << (self.scale - bits);
        let v = match dir {
            Rounding::Down => floor_div(&self.lo, &shift),
            Rounding::Up => ceil_div(&self.hi, &shift),
        };
        Rational::new(v, BigInt::one() << bits)
    }

    pub fn contains(&self, r: &Rational) -> bool {
        let lo = Rational::new(self.lo.clone(), BigInt::one() << self.scale);
        let hi = Rational::new(self.hi.clone(), BigInt::one() << self.scale);
        &lo <= r && r <= &hi
    }

    pub fn midpoint(&self) -> Rational {
        Rational::new(&self.lo + &self.hi, BigInt::one() << (self.scale + 1))
    }
}

/// `2 * atanh(z) = ln((1+z)/(1-z))` for rational `0 <= z <= 1/3`.
fn two_atanh(z: &Rational, scale: u32) -> Enclosure {
    if z.is_zero() {
        return Enclosure::exact_int(0, scale);
    }
    let one = BigInt::one() << scale;
    let zf = Enclosure::from_rational(z, scale);
    let z2_lo = (&zf.lo * &zf.lo) >> scale;
    let z2_hi = ceil_div(&(&zf.hi * &zf.hi), &one);
    let (mut p_lo, mut p_hi) = (zf.lo.clone(), zf.hi.clone());
    let (mut s_lo, mut s_hi) = (BigInt::zero(), BigInt::zero());
    let mut k = 0u64;
    loop {
        let d = BigInt::from(2 * k + 1);
        s_lo += floor_div(&p_lo, &d);
        s_hi += ceil_div(&p_hi, &d);
        p_lo = (&p_lo * &z2_lo) >> scale;
        p_hi = ceil_div(&(&p_hi * &z2_hi), &one);
        k += 1;
        // With z <= 1/3 the remaining tail is below 9/8 * p_hi.
        if p_hi <= BigInt::one() {
            s_hi += 2;
            break;
        }
    }
    Enclosure {
        lo: s_lo << 1,
        hi: s_hi << 1,
        scale,
    }
}

fn ln2(scale: u32) -> Enclosure {
    two_atanh(&Rational::new(BigInt::one(), BigInt::from(3)), scale)
}

/// Enclosure of `lg x` for rational `x > 0`.
pub fn lg_enclosure(x: &Rational, scale: u32) -> Result<Enclosure> {
    if !x.is_positive() {
        return Err(Error::Domain(format!("lg of nonpositive {x}")));
    }
    if let Some(e) = exact_log2(x) {
        return Ok(Enclosure::exact_int(e, scale));
    }
    // x = 2^e * y with 1 <= y < 2
    let mut e = x.numer().bits() as i64 - x.denom().bits() as i64;
    let pow = |k: i64| -> Rational {
        if k >= 0 {
            Rational::from_integer(BigInt::one() << k as u64)
        } else {
            Rational::new(BigInt::one(), BigInt::one() << (-k) as u64)
        }
    };
    let mut y = x / pow(e);
    if y < Rational::one() {
        e -= 1;
        y = x / pow(e);
    }
    debug_assert!(y >= Rational::one() && y < Rational::from_integer(2.into()));
    let z = (&y - Rational::one()) / (&y + Rational::one());
    let ln_y = two_atanh(&z, scale);
    let l2 = ln2(scale);
    let shifted = |v: &BigInt| v << scale;
    let frac = Enclosure {
        lo: if ln_y.lo.is_negative() {
            floor_div(&shifted(&ln_y.lo), &l2.lo)
        } else {
            floor_div(&shifted(&ln_y.lo), &l2.hi)
        },
        hi: ceil_div(&shifted(&ln_y.hi), &l2.lo),
        scale,
    };
    Ok(frac.add(&Enclosure::exact_int(e, scale)))
}

/// Dyadic bound on `lg x` with error at most `2^-bits`.
pub fn lg_bound(x: &Rational, bits: u32, dir: Rounding) -> Result<Rational> {
    if let Some(e) = exact_log2(x) {
        return Ok(Rational::from_integer(e.into()));
    }
    Ok(lg_enclosure(x, bits + 1 + GUARD)?.bound(bits + 1, dir))
}

/// Enclosure of the binary entropy `h(x) = -x lg x - (1-x) lg(1-x)`, with
/// `0 lg 0 = 0`.
pub fn entropy_enclosure(x: &Rational, scale: u32) -> Result<Enclosure> {
    let one = Rational::one();
    if x.is_negative() || x > &one {
        return Err(Error::Domain(format!("entropy outside [0,1]: {x}")));
    }
    let mut acc = Enclosure::exact_int(0, scale);
    for t in [x.clone(), &one - x] {
        if t.is_zero() {
            continue;
        }
        let term = lg_enclosure(&t, scale)?.scale_by(&t).neg();
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Dyadic bound on `h(x)` with error at most `2^-bits`.
pub fn entropy(x: &Rational, bits: u32, dir: Rounding) -> Result<Rational> {
    Ok(entropy_enclosure(x, bits + 1 + GUARD)?.bound(bits + 1, dir))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, to_f64};

    #[test]
    fn lg_matches_float() {
        for (p, q) in [(3, 1), (1, 3), (5, 7), (99, 100), (1, 100), (7, 2), (1234567, 1000)] {
            let x = rat(p, q);
            let e = lg_enclosure(&x, 100).unwrap();
            let f = (p as f64 / q as f64).log2();
            assert!((to_f64(&e.midpoint()) - f).abs() < 1e-14, "{p}/{q}");
            assert!(e.width() < BigInt::from(1u64 << 20));
            let lo = lg_bound(&x, 48, Rounding::Down).unwrap();
            let hi = lg_bound(&x, 48, Rounding::Up).unwrap();
            assert!(lo < hi);
            assert!(&hi - &lo <= rat(1, 1 << 47));
        }
        assert_eq!(lg_bound(&rat(4, 1), 48, Rounding::Up).unwrap(), rat(2, 1));
        assert_eq!(lg_bound(&rat(1, 2), 48, Rounding::Down).unwrap(), rat(-1, 1));
        assert!(lg_bound(&rat(0, 1), 48, Rounding::Up).is_err());
    }

    #[test]
    fn ln2_brackets_known_digits() {
        let e = ln2(128);
        // ln 2 = 0.693147180559945309417232121458176568...
        let approx = rat(693147180559945309, 1_000_000_000_000_000_000);
        let tol = rat(1, 1_000_000_000_000_000_000);
        let mid = e.midpoint();
        assert!((&mid - &approx).abs() <= tol);
    }

    #[test]
    fn entropy_values() {
        assert_eq!(entropy(&rat(1, 2), 48, Rounding::Up).unwrap(), rat(1, 1));
        assert_eq!(entropy(&rat(1, 2), 48, Rounding::Down).unwrap(), rat(1, 1));
        assert_eq!(entropy(&rat(0, 1), 48, Rounding::Up).unwrap(), rat(0, 1));
        assert_eq!(entropy(&rat(1, 1), 48, Rounding::Down).unwrap(), rat(0, 1));
        let h = to_f64(&entropy(&rat(1, 4), 48, Rounding::Up).unwrap());
        assert!((h - 0.8112781244591328).abs() < 1e-12);
        assert!(entropy(&rat(3, 2), 48, Rounding::Up).is_err());
    }

    #[test]
    fn entropy_bounds_are_ordered() {
        for j in 1..100 {
            let x = rat(j, 100);
            let lo = entropy(&x, 48, Rounding::Down).unwrap();
            let hi = entropy(&x, 48, Rounding::Up).unwrap();
            assert!(lo <= hi);
            assert!(&hi - &lo <= rat(1, 1 << 48));
        }
    }
}
