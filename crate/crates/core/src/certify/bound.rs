//! Recursive box bisection, certificates and their independent check.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::certify::lp::LpOutcome;
use crate::certify::problem::{build_q, OptBox, QConfig, TangentLine};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::rational::{rat, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeStatus {
    LeafPass,
    Split,
    /// Depth cap reached with the optimum still at or above the threshold.
    LeafFail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Success,
    Inconclusive,
}

/// Optimum of `Q` on a box; `None` for an infeasible box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Optimum(pub Option<Rational>);

impl Optimum {
    pub fn below(&self, threshold: &Rational) -> bool {
        self.0.as_ref().is_none_or(|v| v < threshold)
    }
}

impl Serialize for Optimum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match &self.0 {
            Some(v) => s.serialize_str(&crate::rational::to_string(v)),
            None => s.serialize_str("infeasible"),
        }
    }
}

impl<'de> Deserialize<'de> for Optimum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let s = String::deserialize(d)?;
        if s == "infeasible" {
            return Ok(Optimum(None));
        }
        crate::rational::parse(&s)
            .map(|v| Optimum(Some(v)))
            .map_err(D::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: usize,
    pub depth: usize,
    #[serde(rename = "box")]
    pub bx: OptBox,
    pub optimum: Optimum,
    pub status: NodeStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub nodes: usize,
    pub max_depth: usize,
}

/// Record of a `Bound(0,4,0,4)` run. Nodes are listed in preorder; each
/// split node is followed by the subtrees of its four children.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(with = "crate::rational::rational_string")]
    pub threshold: Rational,
    pub precision_bits: u32,
    #[serde(with = "rational_vec")]
    pub tangent_cs: Vec<Rational>,
    #[serde(with = "crate::rational::rational_string")]
    pub zone_constant: Rational,
    pub nodes: Vec<Node>,
    pub totals: Totals,
    pub verdict: Verdict,
}

mod rational_vec {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(crate::rational::to_string)
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        use serde::de::Error as _;
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| crate::rational::parse(s).map_err(D::Error::custom))
            .collect()
    }
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("certificate: {e}")))
    }

    pub fn config(&self) -> QConfig {
        QConfig {
            tangent_cs: self.tangent_cs.clone(),
            precision_bits: self.precision_bits,
            zone: self.zone_constant.clone(),
        }
    }

    pub fn leaves(&self) -> impl Iterator<Item = &Node> {
        self.nodes.iter().filter(|n| n.status != NodeStatus::Split)
    }
}

#[derive(Clone, Debug)]
pub struct BoundParams {
    pub threshold: Rational,
    pub depth_cap: usize,
    pub config: QConfig,
    pub exec: Exec,
}

impl Default for BoundParams {
    fn default() -> Self {
        BoundParams {
            threshold: rat(129915, 100000),
            depth_cap: 64,
            config: QConfig::default(),
            exec: Exec::Parallel,
        }
    }
}

/// Solves `Q` on one box.
pub fn solve_box(b: &OptBox, tangents: &[TangentLine], cfg: &QConfig) -> Result<Optimum> {
    match build_q(b, tangents, cfg)?.solve() {
        LpOutcome::Optimal { value, .. } => Ok(Optimum(Some(value))),
        LpOutcome::Infeasible => Ok(Optimum(None)),
        LpOutcome::Unbounded => Err(Error::Certificate(format!("Q unbounded on box {:?}", b.as_array()))),
    }
}

fn recurse(b: OptBox, depth: usize, p: &BoundParams, tangents: &[TangentLine]) -> Result<Vec<Node>> {
    let optimum = solve_box(&b, tangents, &p.config)?;
    let status = if optimum.below(&p.threshold) {
        NodeStatus::LeafPass
    } else if depth >= p.depth_cap {
        NodeStatus::LeafFail
    } else {
        NodeStatus::Split
    };
    let kids = (status == NodeStatus::Split).then(|| b.split());
    let mut out = vec![Node {
        id: 0,
        depth,
        bx: b,
        optimum,
        status,
    }];
    if let Some(kids) = kids {
        let subtrees = p.exec.map(kids.into(), |k| recurse(k, depth + 1, p, tangents));
        for t in subtrees {
            out.extend(t?);
        }
    }
    Ok(out)
}

/// Runs the bisection from `root`.
pub fn bound_recursive(root: OptBox, p: &BoundParams) -> Result<Certificate> {
    let tangents = p.config.tangents()?;
    let mut nodes = recurse(root, 0, p, &tangents)?;
    for (i, n) in nodes.iter_mut().enumerate() {
        n.id = i;
    }
    let max_depth = nodes.iter().map(|n| n.depth).max().unwrap_or(0);
    let verdict = if nodes.iter().all(|n| n.status != NodeStatus::LeafFail) {
        Verdict::Success
    } else {
        Verdict::Inconclusive
    };
    Ok(Certificate {
        threshold: p.threshold.clone(),
        precision_bits: p.config.precision_bits,
        tangent_cs: p.config.tangent_cs.clone(),
        zone_constant: p.config.zone.clone(),
        totals: Totals {
            nodes: nodes.len(),
            max_depth,
        },
        nodes,
        verdict,
    })
}

pub fn certify(p: &BoundParams) -> Result<Certificate> {
    bound_recursive(OptBox::root(), p)
}

/// Checks that the split tree covers the root box exactly and re-solves
/// every leaf. Returns the list of defects, empty iff the certificate holds.
pub fn verify_certificate(cert: &Certificate, exec: Exec) -> Result<Vec<String>> {
    let mut defects = Vec::new();
    let cfg = cert.config();
    if !cfg.is_certifying() {
        defects.push(format!("zone constant {} is not 3/2", cert.zone_constant));
    }
    if cert.verdict != Verdict::Success {
        defects.push("verdict is not success".to_string());
    }
    let tangents = cfg.tangents()?;

    // Structure: walk the preorder list, checking ids, depths and boxes.
    let mut stack = vec![(OptBox::root(), 0usize)];
    let mut idx = 0;
    let mut leaves = Vec::new();
    while let Some((expect, depth)) = stack.pop() {
        let Some(node) = cert.nodes.get(idx) else {
            defects.push(format!("missing node for box {:?} at depth {depth}", expect.as_array()));
            continue;
        };
        if node.id != idx {
            defects.push(format!("node {idx}: id {} out of sequence", node.id));
        }
        if node.bx != expect || node.depth != depth {
            defects.push(format!(
                "node {}: box or depth does not match its parent's split",
                node.id
            ));
        }
        match node.status {
            NodeStatus::Split => {
                for k in node.bx.split().into_iter().rev() {
                    stack.push((k, depth + 1));
                }
            }
            NodeStatus::LeafPass => leaves.push(idx),
            NodeStatus::LeafFail => defects.push(format!("node {}: failing leaf", node.id)),
        }
        idx += 1;
    }
    if idx < cert.nodes.len() {
        defects.push(format!("{} nodes beyond the tree", cert.nodes.len() - idx));
    }
    let max_depth = cert.nodes.iter().map(|n| n.depth).max().unwrap_or(0);
    if cert.totals.nodes != cert.nodes.len() || cert.totals.max_depth != max_depth {
        defects.push("totals do not match the node list".to_string());
    }

    let checks = exec.map(leaves, |i| {
        let node = &cert.nodes[i];
        let fresh = solve_box(&node.bx, &tangents, &cfg);
        (node.id, fresh, &node.optimum)
    });
    for (id, fresh, recorded) in checks {
        let fresh = fresh?;
        if !fresh.below(&cert.threshold) {
            defects.push(format!("node {id}: re-solved optimum is not below the threshold"));
        }
        if &fresh != recorded {
            defects.push(format!("node {id}: recorded optimum differs from re-solve"));
        }
    }
    Ok(defects)
}

/// What the certified threshold says about growth rates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentReport {
    #[serde(with = "crate::rational::rational_string")]
    pub alpha: Rational,
    /// `2^alpha`, for display only.
    pub growth_base: f64,
    pub growth_base_at_most_2461: bool,
    #[serde(with = "crate::rational::rational_string")]
    pub arrangement_exponent: Rational,
    pub arrangement_exponent_below_06496: bool,
    #[serde(with = "crate::rational::rational_string")]
    pub prior_exponent: Rational,
    pub improves_prior: bool,
}

/// `2^(p/q) <= a/b` for `p, q, a, b > 0`, decided exactly.
pub fn two_pow_at_most(alpha: &Rational, bound: &Rational) -> bool {
    let (p, q) = (alpha.numer(), alpha.denom());
    let q_u: u32 = q.try_into().expect("exponent denominator fits in u32");
    let p_u: u32 = p.try_into().expect("exponent numerator fits in u32");
    let lhs = (BigInt::one() << p_u) * Pow::pow(bound.denom(), q_u);
    let rhs = Pow::pow(bound.numer(), q_u);
    lhs <= rhs
}

pub fn exponent_report(cert: &Certificate) -> Result<ExponentReport> {
    if cert.verdict != Verdict::Success {
        return Err(Error::Certificate(
            "exponent report needs a successful certificate".into(),
        ));
    }
    if !cert.config().is_certifying() {
        return Err(Error::Certificate(
            "exploratory zone constant; not a certificate".into(),
        ));
    }
    exponent_report_for(&cert.threshold)
}

pub fn exponent_report_for(alpha: &Rational) -> Result<ExponentReport> {
    if alpha <= &Rational::zero() {
        return Err(Error::Domain("alpha must be positive".into()));
    }
    let half = alpha / Rational::from_integer(2.into());
    let prior = rat(6572, 10000);
    Ok(ExponentReport {
        alpha: alpha.clone(),
        growth_base: crate::rational::to_f64(alpha).exp2(),
        growth_base_at_most_2461: two_pow_at_most(alpha, &rat(2461, 1000)),
        arrangement_exponent_below_06496: half < rat(6496, 10000),
        improves_prior: half < prior,
        arrangement_exponent: half,
        prior_exponent: prior,
    })
}

impl fmt::Display for ExponentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = crate::rational::to_f64(&self.alpha);
        let h = crate::rational::to_f64(&self.arrangement_exponent);
        let mark = |b: bool| if b { "yes" } else { "NO" };
        writeln!(f, "alpha                      {a}")?;
        writeln!(f, "cutpaths  gamma_n <= n^6 * {:.6}^n", self.growth_base)?;
        writeln!(f, "          2^alpha <= 2.461: {}", mark(self.growth_base_at_most_2461))?;
        writeln!(f, "arrangements  B_n <= 2^({h} n^2) asymptotically")?;
        writeln!(
            f,
            "          alpha/2 < 0.6496: {}",
            mark(self.arrangement_exponent_below_06496)
        )?;
        write!(
            f,
            "prior bound   B_n <= 2^({} n^2): improved {}",
            crate::rational::to_f64(&self.prior_exponent),
            mark(self.improves_prior)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn exponent_arithmetic() {
        let r = exponent_report_for(&rat(129915, 100000)).unwrap();
        assert!(r.growth_base_at_most_2461);
        assert!(r.arrangement_exponent_below_06496);
        assert!(r.improves_prior);
        assert_eq!(r.arrangement_exponent, rat(129915, 200000));
        assert!((r.growth_base - 2.4606).abs() < 1e-3);
        // 2^1.3 = 2.4623 > 2.461
        assert!(!two_pow_at_most(&rat(13, 10), &rat(2461, 1000)));
        assert!(two_pow_at_most(&int(1), &int(2)));
    }

    #[test]
    fn coarse_run_and_tamper() {
        // A loose threshold keeps the tree tiny.
        let p = BoundParams {
            threshold: rat(14, 10),
            ..Default::default()
        };
        let cert = certify(&p).unwrap();
        assert_eq!(cert.verdict, Verdict::Success);
        assert!(verify_certificate(&cert, Exec::Sequential).unwrap().is_empty());
        let back = Certificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);

        let mut bad = cert.clone();
        let leaf = bad.nodes.iter().position(|n| n.status == NodeStatus::LeafPass).unwrap();
        bad.nodes[leaf].optimum = Optimum(Some(int(2)));
        assert!(!verify_certificate(&bad, Exec::Sequential).unwrap().is_empty());
    }

    #[test]
    fn depth_cap_is_inconclusive() {
        let p = BoundParams {
            threshold: int(1),
            depth_cap: 1,
            ..Default::default()
        };
        let cert = certify(&p).unwrap();
        assert_eq!(cert.verdict, Verdict::Inconclusive);
        assert!(exponent_report(&cert).is_err());
        assert!(!verify_certificate(&cert, Exec::Sequential).unwrap().is_empty());
    }
}
