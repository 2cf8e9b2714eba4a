//! The box-parametrized linear relaxation `Q`.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::certify::interval::{lg_bound, Rounding};
use crate::certify::lp::LinearProgram;
use crate::error::{Error, Result};
use crate::rational::{int, is_dyadic, rat, Rational};

/// Bounds on `l = mu/(1-upsilon)` and `l' = mu'/(1-upsilon')`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OptBox {
    pub l_lo: Rational,
    pub l_hi: Rational,
    pub lp_lo: Rational,
    pub lp_hi: Rational,
}

impl OptBox {
    pub fn new(l_lo: Rational, l_hi: Rational, lp_lo: Rational, lp_hi: Rational) -> Result<Self> {
        let b = OptBox {
            l_lo,
            l_hi,
            lp_lo,
            lp_hi,
        };
        b.check()?;
        Ok(b)
    }

    pub fn root() -> Self {
        OptBox {
            l_lo: int(0),
            l_hi: int(4),
            lp_lo: int(0),
            lp_hi: int(4),
        }
    }

    pub fn check(&self) -> Result<()> {
        let four = int(4);
        for (lo, hi) in [(&self.l_lo, &self.l_hi), (&self.lp_lo, &self.lp_hi)] {
            if lo.is_negative() || lo > hi || hi > &four {
                return Err(Error::Domain(format!("invalid box interval [{lo}, {hi}]")));
            }
            if !is_dyadic(lo) || !is_dyadic(hi) {
                return Err(Error::Domain(format!("box endpoints must be dyadic: [{lo}, {hi}]")));
            }
        }
        Ok(())
    }

    /// Children in the order (lo,lo), (lo,hi), (hi,lo), (hi,hi).
    pub fn split(&self) -> [OptBox; 4] {
        let two = int(2);
        let lm = (&self.l_lo + &self.l_hi) / &two;
        let pm = (&self.lp_lo + &self.lp_hi) / &two;
        let mk = |a: &Rational, b: &Rational, c: &Rational, d: &Rational| OptBox {
            l_lo: a.clone(),
            l_hi: b.clone(),
            lp_lo: c.clone(),
            lp_hi: d.clone(),
        };
        [
            mk(&self.l_lo, &lm, &self.lp_lo, &pm),
            mk(&self.l_lo, &lm, &pm, &self.lp_hi),
            mk(&lm, &self.l_hi, &self.lp_lo, &pm),
            mk(&lm, &self.l_hi, &pm, &self.lp_hi),
        ]
    }

    pub fn contains(&self, l: &Rational, lp: &Rational) -> bool {
        &self.l_lo <= l && l <= &self.l_hi && &self.lp_lo <= lp && lp <= &self.lp_hi
    }

    pub fn as_array(&self) -> [&Rational; 4] {
        [&self.l_lo, &self.l_hi, &self.lp_lo, &self.lp_hi]
    }
}

impl Serialize for OptBox {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.as_array().iter().map(|r| crate::rational::to_string(r)).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for OptBox {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v: Vec<String> = Vec::deserialize(d)?;
        if v.len() != 4 {
            return Err(D::Error::custom("box needs 4 endpoints"));
        }
        let mut r = Vec::with_capacity(4);
        for s in &v {
            r.push(crate::rational::parse(s).map_err(D::Error::custom)?);
        }
        let [a, b, c, e]: [Rational; 4] = r.try_into().expect("length checked");
        OptBox::new(a, b, c, e).map_err(D::Error::custom)
    }
}

/// Upper bound `h(x) <= slope * x + intercept` from the tangent at `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentLine {
    pub c: Rational,
    pub slope: Rational,
    pub intercept: Rational,
}

impl TangentLine {
    pub fn eval(&self, x: &Rational) -> Rational {
        &self.slope * x + &self.intercept
    }
}

/// Tangent of `h` at `c` with slope `lg((1-c)/c)` and intercept `-lg(1-c)`,
/// both rounded up.
pub fn tangent(c: &Rational, bits: u32) -> Result<TangentLine> {
    if !c.is_positive() || c >= &Rational::one() {
        return Err(Error::Domain(format!("tangent point {c} outside (0,1)")));
    }
    let one = Rational::one();
    let slope = lg_bound(&((&one - c) / c), bits, Rounding::Up)?;
    let intercept = -lg_bound(&(&one - c), bits, Rounding::Down)?;
    Ok(TangentLine {
        c: c.clone(),
        slope,
        intercept,
    })
}

/// `step, 2 step, ...` strictly below 1.
pub fn tangent_grid(step: &Rational) -> Result<Vec<Rational>> {
    if !step.is_positive() || step >= &Rational::one() {
        return Err(Error::Domain(format!("tangent step {step} outside (0,1)")));
    }
    let mut out = Vec::new();
    let mut c = step.clone();
    while c < Rational::one() {
        out.push(c.clone());
        c += step;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QConfig {
    pub tangent_cs: Vec<Rational>,
    pub precision_bits: u32,
    /// Right-hand side of `mu + mu' - upsilon - upsilon' <= zone`. Only 3/2
    /// yields a certifying run.
    pub zone: Rational,
}

impl Default for QConfig {
    fn default() -> Self {
        QConfig {
            tangent_cs: tangent_grid(&rat(1, 100)).expect("valid step"),
            precision_bits: 48,
            zone: rat(3, 2),
        }
    }
}

impl QConfig {
    pub fn is_certifying(&self) -> bool {
        self.zone == rat(3, 2)
    }

    pub fn tangents(&self) -> Result<Vec<TangentLine>> {
        self.tangent_cs
            .iter()
            .map(|c| tangent(c, self.precision_bits))
            .collect()
    }
}

pub const VARS: [&str; 9] = ["X", "y", "y'", "mu", "mu'", "kappa", "kappa'", "upsilon", "upsilon'"];
const X: usize = 0;
const Y: usize = 1;
const YP: usize = 2;
const MU: usize = 3;
const MUP: usize = 4;
const K: usize = 5;
const KP: usize = 6;
const U: usize = 7;
const UP: usize = 8;

/// Upper bound on `lg x`, or `None` when `x = 0` (then `kappa = 0` is forced).
fn lg_upper(x: &Rational, bits: u32) -> Result<Option<Rational>> {
    if x.is_zero() {
        return Ok(None);
    }
    lg_bound(x, bits, Rounding::Up).map(Some)
}

/// Builds `Q(box)` with precomputed tangents.
pub fn build_q(b: &OptBox, tangents: &[TangentLine], cfg: &QConfig) -> Result<LinearProgram> {
    b.check()?;
    let objective = (0..9).map(|i| if i == X { int(1) } else { int(0) }).collect();
    let mut lp = LinearProgram::new(VARS.iter().map(|s| s.to_string()).collect(), objective);
    let row = |terms: &[(usize, Rational)]| {
        let mut v = vec![Rational::zero(); 9];
        for (i, c) in terms {
            v[*i] += c;
        }
        v
    };
    let sides = [(Y, K, U, MU, &b.l_lo, &b.l_hi), (YP, KP, UP, MUP, &b.lp_lo, &b.lp_hi)];
    for &(y, k, u, _, _, hi) in &sides {
        // X <= y + kappa lg(l_hi) + 1 - kappa - upsilon
        match lg_upper(hi, cfg.precision_bits)? {
            Some(lg) => lp.push(row(&[(X, int(1)), (y, int(-1)), (k, int(1) - lg), (u, int(1))]), int(1)),
            // l_hi = 0 forces mu = 0 and hence kappa = 0; the lg term drops.
            None => lp.push(row(&[(X, int(1)), (y, int(-1)), (k, int(1)), (u, int(1))]), int(1)),
        }
    }
    for &(y, k, u, _, _, _) in &sides {
        for t in tangents {
            // y <= slope kappa + intercept (1 - upsilon)
            lp.push(
                row(&[(y, int(1)), (k, -t.slope.clone()), (u, t.intercept.clone())]),
                t.intercept.clone(),
            );
        }
    }
    for v in [MU, MUP, K, KP, U, UP] {
        lp.push(row(&[(v, int(-1))]), int(0));
    }
    for &(_, k, u, mu, _, _) in &sides {
        lp.push(row(&[(mu, int(1))]), int(1));
        lp.push(row(&[(k, int(1)), (mu, int(-1))]), int(0));
        lp.push(row(&[(k, int(1)), (u, int(1))]), int(1));
    }
    lp.push(row(&[(K, int(1)), (UP, int(-1))]), int(0));
    lp.push(row(&[(KP, int(1)), (U, int(-1))]), int(0));
    lp.push(
        row(&[(MU, int(1)), (MUP, int(1)), (U, int(-1)), (UP, int(-1))]),
        cfg.zone.clone(),
    );
    for &(_, _, u, mu, lo, hi) in &sides {
        // lo (1 - upsilon) <= mu <= hi (1 - upsilon)
        lp.push(row(&[(mu, int(-1)), (u, -lo.clone())]), -lo.clone());
        lp.push(row(&[(mu, int(1)), (u, hi.clone())]), hi.clone());
    }
    Ok(lp)
}

/// Number of rows of `Q` for a given number of tangents.
pub fn row_count(tangents: usize) -> usize {
    2 + 2 * tangents + 19
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::interval::entropy;
    use crate::certify::lp::LpOutcome;

    #[test]
    fn root_lg_terms_are_exact() {
        let cfg = QConfig::default();
        let t = cfg.tangents().unwrap();
        let lp = build_q(&OptBox::root(), &t, &cfg).unwrap();
        assert_eq!(lp.rows.len(), 219);
        assert_eq!(lp.rows.len(), row_count(99));
        // kappa coefficient is 1 - lg 4 = -1
        assert_eq!(lp.rows[0].coeffs[K], int(-1));
        assert_eq!(lp.rows[1].coeffs[KP], int(-1));
    }

    #[test]
    fn half_tangent() {
        let t = tangent(&rat(1, 2), 48).unwrap();
        assert_eq!(t.slope, int(0));
        assert_eq!(t.intercept, int(1));
        assert!(tangent(&int(0), 48).is_err());
        assert!(tangent(&int(1), 48).is_err());
    }

    #[test]
    fn grid() {
        let g = tangent_grid(&rat(1, 100)).unwrap();
        assert_eq!(g.len(), 99);
        assert_eq!(g[0], rat(1, 100));
        assert_eq!(g[98], rat(99, 100));
        assert_eq!(tangent_grid(&rat(1, 4)).unwrap().len(), 3);
    }

    #[test]
    fn tangents_dominate_entropy() {
        let cfg = QConfig::default();
        let ts = cfg.tangents().unwrap();
        // A lower bound on h above a tangent would be a certain violation.
        for j in 0..=200 {
            let x = rat(j, 200);
            let h = entropy(&x, 48, Rounding::Down).unwrap();
            for t in &ts {
                assert!(h <= t.eval(&x), "c={} x={x}", t.c);
            }
        }
    }

    #[test]
    fn split_partitions() {
        let kids = OptBox::root().split();
        assert_eq!(kids[0], OptBox::new(int(0), int(2), int(0), int(2)).unwrap());
        assert_eq!(kids[1], OptBox::new(int(0), int(2), int(2), int(4)).unwrap());
        assert_eq!(kids[2], OptBox::new(int(2), int(4), int(0), int(2)).unwrap());
        assert_eq!(kids[3], OptBox::new(int(2), int(4), int(2), int(4)).unwrap());
        assert!(OptBox::new(int(0), int(5), int(0), int(1)).is_err());
        assert!(OptBox::new(rat(1, 3), int(1), int(0), int(1)).is_err());
    }

    #[test]
    fn small_box_is_low() {
        let cfg = QConfig::default();
        let t = cfg.tangents().unwrap();
        let b = OptBox::new(int(0), rat(1, 2), int(0), rat(1, 2)).unwrap();
        let v = build_q(&b, &t, &cfg).unwrap().solve();
        match v {
            // max of h(x) - 3x + 1 is 1 + lg(9/8) = 1.1699..
            LpOutcome::Optimal { value, .. } => assert!(value < rat(12, 10), "{value}"),
            LpOutcome::Infeasible => {}
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn hinted_solve_is_exact() {
        let cfg = QConfig::default();
        let tangents = cfg.tangents().unwrap();
        let boxes = [
            OptBox::root(),
            OptBox::new(rat(0, 1), rat(1, 2), rat(0, 1), rat(1, 2)).unwrap(),
            OptBox::new(rat(1, 1), rat(2, 1), rat(3, 2), rat(7, 4)).unwrap(),
            OptBox::new(rat(0, 1), rat(0, 1), rat(3, 1), rat(4, 1)).unwrap(),
        ];
        for b in boxes {
            let lp = build_q(&b, &tangents, &cfg).unwrap();
            assert_eq!(
                lp.solve().value(),
                crate::certify::lp::solve_exact(&lp).value(),
                "{b:?}"
            );
        }
    }
}
