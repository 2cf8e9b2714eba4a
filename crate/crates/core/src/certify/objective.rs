//! The discrete bound `F_n` over the feasible sextuples `U_n` and the
//! continuous objective obtained after scaling by `n`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::certify::interval::{entropy_enclosure, lg_enclosure, Enclosure};
use crate::error::{Error, Result};
use crate::rational::{binomial, rat, Rational};

/// `C(n-u, k) * (m/(n-u))^k * 2^(n-k-u)`, with the power term equal to 1
/// when `k = 0`. Requires `k + u <= n`.
pub fn lemma3_bound(n: u64, m: u64, k: u64, u: u64) -> Rational {
    debug_assert!(k + u <= n);
    let free = n - u;
    let two = BigUint::one() << (n - k - u) as usize;
    if k == 0 {
        return Rational::from_integer(BigInt::from(two));
    }
    let num = binomial(free, k) * num_traits::pow(BigUint::from(m), k as usize) * two;
    let den = num_traits::pow(BigUint::from(free), k as usize);
    Rational::new(num.into(), den.into())
}

/// Membership in `U_n`.
pub fn in_u_n(n: u64, s: [u64; 6]) -> bool {
    let [m, k, u, mp, kp, up] = s;
    k + u <= n
        && k <= m
        && m <= n
        && mp <= n
        && kp + up <= n
        && kp <= mp
        && k <= up
        && kp <= u
        && 2 * (m + mp) <= 3 * n + 2 * (u + up)
}

/// `F_n`: the smaller of the two encodings' bounds.
pub fn f_n(n: u64, s: [u64; 6]) -> Rational {
    let [m, k, u, mp, kp, up] = s;
    let a = lemma3_bound(n, m, k, u);
    let b = lemma3_bound(n, mp, kp, up);
    if a <= b {
        a
    } else {
        b
    }
}

pub const MAX_FN_CUTOFF: usize = 24;

/// Exact maximum of `F_n` over `U_n` and a maximizing sextuple.
///
/// Loops over `(u, u')` first, then `k <= min(n-u, u')`, `k' <= min(n-u', u)`
/// and `m`; for fixed `(m, k, u, k', u')` the second bound is nondecreasing in
/// `m'`, so only the largest feasible `m'` is evaluated.
pub fn max_fn(n: usize) -> Result<(Rational, [u64; 6])> {
    if n > MAX_FN_CUTOFF {
        return Err(Error::Cutoff {
            what: "max_Fn",
            max: MAX_FN_CUTOFF,
            n,
        });
    }
    let nn = n as u64;
    // table[m][k][u] = lemma3_bound(n, m, k, u), zero where k + u > n.
    let idx = |m: u64, k: u64, u: u64| ((m * (nn + 1) + k) * (nn + 1) + u) as usize;
    let mut table = vec![Rational::zero(); ((nn + 1) * (nn + 1) * (nn + 1)) as usize];
    for m in 0..=nn {
        for k in 0..=m {
            for u in 0..=(nn - k) {
                table[idx(m, k, u)] = lemma3_bound(nn, m, k, u);
            }
        }
    }
    let mut best: Option<(Rational, [u64; 6])> = None;
    for u in 0..=nn {
        for up in 0..=nn {
            // m + m' <= floor((3n + 2u + 2u') / 2)
            let budget = (3 * nn + 2 * u + 2 * up) / 2;
            for k in 0..=(nn - u).min(up) {
                for kp in 0..=(nn - up).min(u) {
                    for m in k..=nn {
                        if m + kp > budget {
                            break;
                        }
                        let mp = nn.min(budget - m);
                        let a = &table[idx(m, k, u)];
                        let b = &table[idx(mp, kp, up)];
                        let f = if a <= b { a } else { b };
                        if best.as_ref().is_none_or(|(v, _)| f > v) {
                            best = Some((f.clone(), [m, k, u, mp, kp, up]));
                        }
                    }
                }
            }
        }
    }
    Ok(best.expect("U_n always contains (0,0,0,0,0,0)"))
}

/// A point of the continuous relaxation, in the order
/// `(mu, kappa, upsilon, mu', kappa', upsilon')`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledPoint {
    pub mu: Rational,
    pub kappa: Rational,
    pub upsilon: Rational,
    pub mu_rot: Rational,
    pub kappa_rot: Rational,
    pub upsilon_rot: Rational,
}

impl ScaledPoint {
    pub fn new(v: [Rational; 6]) -> Self {
        let [mu, kappa, upsilon, mu_rot, kappa_rot, upsilon_rot] = v;
        ScaledPoint {
            mu,
            kappa,
            upsilon,
            mu_rot,
            kappa_rot,
            upsilon_rot,
        }
    }

    /// Image of an integer sextuple under division by `n`.
    pub fn from_sextuple(n: u64, s: [u64; 6]) -> Self {
        let r = |x: u64| rat(x as i64, n as i64);
        ScaledPoint::new([r(s[0]), r(s[1]), r(s[2]), r(s[3]), r(s[4]), r(s[5])])
    }

    /// First violated constraint of the continuous problem, if any.
    pub fn violation(&self) -> Option<&'static str> {
        self.violation_with_zone(&rat(3, 2))
    }

    pub fn violation_with_zone(&self, zone: &Rational) -> Option<&'static str> {
        let one = Rational::one();
        let p = self;
        let all = [&p.mu, &p.kappa, &p.upsilon, &p.mu_rot, &p.kappa_rot, &p.upsilon_rot];
        if all.iter().any(|v| v.is_negative()) {
            return Some("nonnegativity");
        }
        if p.mu > one || p.mu_rot > one {
            return Some("mu <= 1");
        }
        if p.kappa > p.mu || p.kappa_rot > p.mu_rot {
            return Some("kappa <= mu");
        }
        if &p.kappa + &p.upsilon > one || &p.kappa_rot + &p.upsilon_rot > one {
            return Some("kappa + upsilon <= 1");
        }
        if p.kappa > p.upsilon_rot || p.kappa_rot > p.upsilon {
            return Some("kappa <= upsilon'");
        }
        if &p.mu + &p.mu_rot - &p.upsilon - &p.upsilon_rot > *zone {
            return Some("mu + mu' - upsilon - upsilon' <= zone constant");
        }
        None
    }
}

/// Enclosure of `(1-v) h(k/(1-v)) + k lg(m/(1-v)) + 1 - k - v`.
fn side_enclosure(mu: &Rational, kappa: &Rational, upsilon: &Rational, scale: u32) -> Result<Enclosure> {
    let one = Rational::one();
    let rest = &one - kappa - upsilon;
    let mut acc = Enclosure::from_rational(&rest, scale);
    if kappa.is_zero() {
        return Ok(acc);
    }
    let free = &one - upsilon;
    let ent = entropy_enclosure(&(kappa / &free), scale)?.scale_by(&free);
    let lg = lg_enclosure(&(mu / &free), scale)?;
    // kappa > 0; lg may be negative, so scale bounds separately.
    let lg_term = Enclosure {
        lo: Enclosure {
            lo: lg.lo.clone(),
            hi: lg.lo.clone(),
            scale,
        }
        .scale_by(kappa)
        .lo,
        hi: Enclosure {
            lo: lg.hi.clone(),
            hi: lg.hi.clone(),
            scale,
        }
        .scale_by(kappa)
        .hi,
        scale,
    };
    acc = acc.add(&ent).add(&lg_term);
    Ok(acc)
}

/// Value of the continuous objective with its error bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub value: Rational,
    pub error: Rational,
    pub forward: Rational,
    pub rotated: Rational,
}

/// `min` of the two right-hand sides of the continuous problem, evaluated to
/// absolute error at most `2^-30`.
pub fn evaluate_f(p: &ScaledPoint) -> Result<Evaluation> {
    if let Some(v) = p.violation() {
        return Err(Error::Domain(format!("infeasible point: {v}")));
    }
    let scale = 80;
    let a = side_enclosure(&p.mu, &p.kappa, &p.upsilon, scale)?;
    let b = side_enclosure(&p.mu_rot, &p.kappa_rot, &p.upsilon_rot, scale)?;
    let lo = if a.lo <= b.lo { a.lo.clone() } else { b.lo.clone() };
    let hi = if a.hi <= b.hi { a.hi.clone() } else { b.hi.clone() };
    let m = Enclosure { lo, hi, scale };
    let error = Rational::new(m.width() + 1, BigInt::one() << scale);
    debug_assert!(error < rat(1, 1 << 30));
    Ok(Evaluation {
        value: m.midpoint(),
        error,
        forward: a.midpoint(),
        rotated: b.midpoint(),
    })
}

/// Convenience for decimal inputs.
pub fn evaluate_f_at(v: [&str; 6]) -> Result<Evaluation> {
    let mut out = Vec::with_capacity(6);
    for s in v {
        out.push(crate::rational::parse(s)?);
    }
    let arr: [Rational; 6] = out.try_into().expect("six coordinates");
    evaluate_f(&ScaledPoint::new(arr))
}

pub fn two_pow(n: u64) -> Rational {
    Rational::from_integer(BigInt::one() << n as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, to_f64};

    #[test]
    fn lemma3_values() {
        assert_eq!(lemma3_bound(4, 0, 0, 0), int(16));
        // C(3,1) * (2/3) * 2^2 = 8
        assert_eq!(lemma3_bound(4, 2, 1, 1), int(8));
        // n - u = 0 forces k = 0
        assert_eq!(lemma3_bound(3, 0, 0, 3), int(1));
    }

    #[test]
    fn max_fn_at_least_two_pow_n() {
        for n in 1..=8 {
            let (v, s) = max_fn(n).unwrap();
            assert!(v >= two_pow(n as u64));
            assert!(in_u_n(n as u64, s));
            assert_eq!(f_n(n as u64, s), v);
        }
        assert!(max_fn(25).is_err());
    }

    #[test]
    fn zero_point_is_one() {
        let e = evaluate_f_at(["0.5", "0", "0", "0.7", "0", "0"]).unwrap();
        assert_eq!(e.value, int(1));
    }

    #[test]
    fn heuristic_point() {
        let e = evaluate_f_at(["0.96", "0.21", "0.21", "0.96", "0.21", "0.21"]).unwrap();
        assert!((to_f64(&e.value) - 1.299).abs() <= 0.001, "{}", to_f64(&e.value));
        assert!(e.error < rat(1, 1 << 30));
    }

    #[test]
    fn infeasible_rejected() {
        assert!(evaluate_f_at(["0.5", "0.6", "0", "0.5", "0", "0.6"]).is_err());
        assert!(evaluate_f_at(["1", "0", "0", "1", "0", "0"]).is_err());
    }
}
