//! Cutpath counting, enumeration, exit classification and the per-path
//! statistics `(m, k, u, m', k', u')`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arrangement::{PseudolineId, WiringDiagram};
use crate::certify::objective::{lemma3_bound, max_fn};
use crate::complex::{CellComplex, FaceId, SegmentId, NORTH};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Exact nonnegative cutpath count.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigCount(pub BigUint);

impl BigCount {
    pub fn one() -> Self {
        BigCount(BigUint::one())
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    /// Exact test of `count > (num / den)^exp`.
    pub fn exceeds_power(&self, num: u64, den: u64, exp: u32) -> bool {
        &self.0 * num_traits::pow(BigUint::from(den), exp as usize) > num_traits::pow(BigUint::from(num), exp as usize)
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for BigCount {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for BigCount {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map(BigCount).map_err(serde::de::Error::custom)
    }
}

/// Number of north-to-south paths of the dual DAG.
///
/// Faces are processed gap by gap; only the counts of the previous gap are
/// alive at any time.
pub fn count_cutpaths(c: &CellComplex) -> BigCount {
    let faces = c.faces();
    let mut prev: Vec<BigUint> = vec![BigUint::one()];
    for g in 1..=c.n() {
        let cur: Vec<BigUint> = c
            .gap_faces(g)
            .iter()
            .map(|&f| {
                let mut acc = BigUint::zero();
                for s in faces[f as usize].upper() {
                    let above = c.segment(s).above as usize;
                    acc += &prev[faces[above].rank as usize];
                }
                acc
            })
            .collect();
        prev = cur;
    }
    BigCount(prev.swap_remove(0))
}

/// A north-to-south path: `faces[i]` is left through `segments[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cutpath {
    pub faces: Vec<FaceId>,
    pub segments: Vec<SegmentId>,
}

impl Cutpath {
    /// Rebuilds the crossed segments from a face sequence, checking that it is
    /// a cutpath of `c`.
    pub fn from_faces(c: &CellComplex, faces: Vec<FaceId>) -> Result<Self> {
        if faces.len() != c.n() + 1 {
            return Err(Error::NotACutpath(format!(
                "expected {} faces, got {}",
                c.n() + 1,
                faces.len()
            )));
        }
        if faces[0] != NORTH || faces[c.n()] != c.south() {
            return Err(Error::NotACutpath("must run from north to south".into()));
        }
        let mut segments = Vec::with_capacity(c.n());
        for w in faces.windows(2) {
            let face = c.face(w[0])?;
            let s = face
                .lower()
                .find(|&s| c.segment(s).below as usize == w[1])
                .ok_or_else(|| Error::NotACutpath(format!("no dual edge {} -> {}", w[0], w[1])))?;
            segments.push(s);
        }
        Ok(Cutpath { faces, segments })
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }
}

/// Depth-first enumeration trying lower exits left to right; stops after
/// `limit` paths.
pub fn enumerate_cutpaths(c: &CellComplex, limit: usize) -> Vec<Cutpath> {
    let mut out = Vec::new();
    if limit == 0 {
        return out;
    }
    let south = c.south();
    let mut faces = vec![NORTH];
    let mut segs: Vec<SegmentId> = Vec::new();
    // Next untried exit for each face on the stack.
    let mut next: Vec<SegmentId> = vec![c.faces()[NORTH].lower().start];
    loop {
        let top = *faces.last().unwrap();
        if top == south {
            out.push(Cutpath {
                faces: faces.clone(),
                segments: segs.clone(),
            });
            if out.len() >= limit {
                return out;
            }
            faces.pop();
            next.pop();
            segs.pop();
            continue;
        }
        let depth = faces.len() - 1;
        let range = c.faces()[top].lower();
        if next[depth] < range.end {
            let s = next[depth];
            next[depth] += 1;
            let below = c.segment(s).below as usize;
            segs.push(s);
            faces.push(below);
            next.push(c.faces()[below].lower().start);
        } else {
            faces.pop();
            next.pop();
            if faces.is_empty() {
                return out;
            }
            segs.pop();
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExitClass {
    Unique,
    Left,
    Right,
    /// 1-based exit label, strictly between 1 and the exit count.
    Middle(usize),
}

fn exit_class(index: usize, d: usize) -> ExitClass {
    match index {
        _ if d == 1 => ExitClass::Unique,
        0 => ExitClass::Left,
        i if i + 1 == d => ExitClass::Right,
        i => ExitClass::Middle(i + 1),
    }
}

pub fn classify_exits(c: &CellComplex, f: FaceId) -> Result<Vec<(PseudolineId, ExitClass)>> {
    let face = c.face(f)?;
    let d = face.lower().len();
    Ok(face
        .lower()
        .enumerate()
        .map(|(i, s)| (c.segment(s).line, exit_class(i, d)))
        .collect())
}

/// The sextuple `(m, k, u, m', k', u')`; primed values come from the
/// half-turn rotated arrangement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CutpathStats {
    pub m: u64,
    pub k: u64,
    pub u: u64,
    pub m_rot: u64,
    pub k_rot: u64,
    pub u_rot: u64,
}

impl CutpathStats {
    pub fn as_array(&self) -> [u64; 6] {
        [self.m, self.k, self.u, self.m_rot, self.k_rot, self.u_rot]
    }

    /// Number of edges bounding the visited cells, as predicted from the
    /// statistics: `4n + m + m' - u - u'`.
    pub fn predicted_edge_sum(&self, n: u64) -> i64 {
        (4 * n + self.m + self.m_rot) as i64 - (self.u + self.u_rot) as i64
    }

    /// First violated structural invariant, if any.
    pub fn invariant_violation(&self, n: u64) -> Option<&'static str> {
        let s = self;
        if s.k > s.m || s.k_rot > s.m_rot {
            return Some("k <= m");
        }
        if s.k + s.u > n || s.k_rot + s.u_rot > n {
            return Some("k + u <= n");
        }
        if s.k > s.u_rot || s.k_rot > s.u {
            return Some("k <= u' and k' <= u");
        }
        if s.m > n || s.m_rot > n {
            return Some("m <= n");
        }
        if 2 * (s.m + s.m_rot) > 3 * n + 2 * (s.u + s.u_rot) {
            return Some("m + m' - u - u' <= 1.5n");
        }
        None
    }
}

/// Whether the last visited cell's middle exits count towards `m`. The last
/// cell in either direction has no exits on its far side, so both settings
/// give identical statistics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StatsConvention {
    pub include_terminal_cell: bool,
}

impl Default for StatsConvention {
    fn default() -> Self {
        StatsConvention {
            include_terminal_cell: true,
        }
    }
}

fn directional_stats(c: &CellComplex, faces: &[FaceId], conv: StatsConvention) -> Result<(u64, u64, u64)> {
    let (mut m, mut k, mut u) = (0, 0, 0);
    let visited = if conv.include_terminal_cell {
        faces.len()
    } else {
        faces.len() - 1
    };
    for (i, &f) in faces[..visited].iter().enumerate() {
        let face = c.face(f)?;
        let d = face.lower().len() as u64;
        if d >= 2 {
            m += d - 2;
        }
        let Some(&next) = faces.get(i + 1) else { continue };
        let taken = face
            .lower()
            .position(|s| c.segment(s).below as usize == next)
            .ok_or_else(|| Error::NotACutpath(format!("no dual edge {f} -> {next}")))?;
        match exit_class(taken, d as usize) {
            ExitClass::Unique => u += 1,
            ExitClass::Middle(_) => k += 1,
            _ => {}
        }
    }
    Ok((m, k, u))
}

/// An arrangement together with its complex and the complex of its half-turn
/// rotation, which supplies the south-to-north view of every cutpath.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub diagram: WiringDiagram,
    pub complex: CellComplex,
    pub rotated: CellComplex,
}

impl Analysis {
    pub fn new(d: &WiringDiagram) -> Self {
        Analysis {
            diagram: d.clone(),
            complex: CellComplex::build(d),
            rotated: CellComplex::build(&d.rotate180()),
        }
    }

    pub fn count(&self) -> BigCount {
        count_cutpaths(&self.complex)
    }

    /// The path as seen north-to-south in the rotated complex.
    pub fn rotate_path(&self, p: &Cutpath) -> Vec<FaceId> {
        p.faces
            .iter()
            .rev()
            .map(|&f| self.complex.rotated_face(f, &self.rotated))
            .collect()
    }

    pub fn stats(&self, p: &Cutpath) -> Result<CutpathStats> {
        self.stats_with(p, StatsConvention::default())
    }

    pub fn stats_with(&self, p: &Cutpath, conv: StatsConvention) -> Result<CutpathStats> {
        Cutpath::from_faces(&self.complex, p.faces.clone())?;
        let (m, k, u) = directional_stats(&self.complex, &p.faces, conv)?;
        let rot = self.rotate_path(p);
        let (m_rot, k_rot, u_rot) = directional_stats(&self.rotated, &rot, conv)?;
        Ok(CutpathStats {
            m,
            k,
            u,
            m_rot,
            k_rot,
            u_rot,
        })
    }

    /// Sum of face sizes over the cells a path visits.
    pub fn edge_sum(&self, p: &Cutpath) -> u64 {
        p.faces.iter().map(|&f| self.complex.faces()[f].size() as u64).sum()
    }

    /// Pseudoline appearing as a middle exit of two visited cells, if any.
    pub fn repeated_middle_exit(&self, p: &Cutpath) -> Option<PseudolineId> {
        repeated_middle(&self.complex, &p.faces)
    }

    /// Exhaustive check of the per-path lemmas; meant for `n <= 10`.
    pub fn verify_lemmas(&self) -> Result<LemmaReport> {
        verify_lemmas(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Face ids of a violating cutpath.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<FaceId>>,
}

impl Check {
    fn pass() -> Self {
        Check {
            passed: true,
            note: None,
            witness: None,
        }
    }

    fn fail(&mut self, note: String, witness: &Cutpath) {
        if self.passed {
            self.passed = false;
            self.note = Some(note);
            self.witness = Some(witness.faces.clone());
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaRow {
    pub sextuple: [u64; 6],
    pub size: u64,
    #[serde(with = "crate::rational::rational_string")]
    pub bound_forward: Rational,
    #[serde(with = "crate::rational::rational_string")]
    pub bound_rotated: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub n: usize,
    pub total_paths: BigCount,
    pub middle_exit_uniqueness: Check,
    pub edge_identity: Check,
    pub zone_edge_bound: Check,
    pub stats_invariants: Check,
    pub gamma_bounds: Check,
    pub gamma_partition: Check,
    pub total_vs_max_fn: Check,
    pub gamma_table: Vec<GammaRow>,
}

impl LemmaReport {
    pub fn all_passed(&self) -> bool {
        [
            &self.middle_exit_uniqueness,
            &self.edge_identity,
            &self.zone_edge_bound,
            &self.stats_invariants,
            &self.gamma_bounds,
            &self.gamma_partition,
            &self.total_vs_max_fn,
        ]
        .iter()
        .all(|c| c.passed)
    }
}

fn verify_lemmas(a: &Analysis) -> Result<LemmaReport> {
    let n = a.complex.n();
    if n > 10 {
        return Err(Error::Cutoff {
            what: "lemma verification",
            max: 10,
            n,
        });
    }
    let nn = n as u64;
    let paths = enumerate_cutpaths(&a.complex, usize::MAX);
    let total = a.count();

    let mut middle = Check::pass();
    let mut identity = Check::pass();
    let mut zone = Check::pass();
    if n < 2 {
        zone.note = Some("skipped: 5.5n - 5 is below the trivial path sum at n = 1".into());
    }
    let mut invariants = Check::pass();
    let mut groups: BTreeMap<CutpathStats, (u64, Cutpath)> = BTreeMap::new();

    for p in &paths {
        if let Some(l) = a.repeated_middle_exit(p) {
            middle.fail(format!("pseudoline {l} is a middle exit of two visited cells"), p);
        }
        let rot = Cutpath::from_faces(&a.rotated, a.rotate_path(p))?;
        if let Some(l) = repeated_middle(&a.rotated, &rot.faces) {
            middle.fail(
                format!("pseudoline {l} is a middle exit of two cells in the rotated view"),
                p,
            );
        }
        let st = a.stats(p)?;
        let sum = a.edge_sum(p) as i64;
        if sum != st.predicted_edge_sum(nn) {
            identity.fail(
                format!("edge sum {sum} != 4n+m+m'-u-u' = {}", st.predicted_edge_sum(nn)),
                p,
            );
        }
        // 2 * sum <= 11n - 10
        if n >= 2 && 2 * sum > 11 * nn as i64 - 10 {
            zone.fail(format!("edge sum {sum} exceeds 5.5n-5"), p);
        }
        if let Some(v) = st.invariant_violation(nn) {
            invariants.fail(format!("{v} fails for {:?}", st.as_array()), p);
        }
        groups.entry(st).or_insert_with(|| (0, p.clone())).0 += 1;
    }

    let mut bounds = Check::pass();
    let mut table = Vec::with_capacity(groups.len());
    let mut partition_sum = BigUint::zero();
    for (st, (size, witness)) in &groups {
        let fwd = lemma3_bound(nn, st.m, st.k, st.u);
        let rot = lemma3_bound(nn, st.m_rot, st.k_rot, st.u_rot);
        let sz = rational::int(*size as i64);
        if sz > fwd || sz > rot {
            bounds.fail(
                format!("|Gamma{:?}| = {size} exceeds a Lemma 3 bound", st.as_array()),
                witness,
            );
        }
        partition_sum += *size;
        table.push(GammaRow {
            sextuple: st.as_array(),
            size: *size,
            bound_forward: fwd,
            bound_rotated: rot,
        });
    }
    let mut partition = Check::pass();
    if partition_sum != total.0 || paths.len() as u64 != partition_sum.to_u64().unwrap_or(u64::MAX) {
        partition.passed = false;
        partition.note = Some(format!("groups sum to {partition_sum}, count is {total}"));
    }

    let mut lemma6 = Check::pass();
    let (max_f, _) = max_fn(n)?;
    let cap = max_f * rational::int(nn.pow(6) as i64);
    if rational::Rational::from_integer(total.0.clone().into()) > cap {
        lemma6.passed = false;
        lemma6.note = Some(format!(
            "count {total} exceeds n^6 max F_n = {}",
            rational::to_string(&cap)
        ));
    }

    Ok(LemmaReport {
        n,
        total_paths: total,
        middle_exit_uniqueness: middle,
        edge_identity: identity,
        zone_edge_bound: zone,
        stats_invariants: invariants,
        gamma_bounds: bounds,
        gamma_partition: partition,
        total_vs_max_fn: lemma6,
        gamma_table: table,
    })
}

fn repeated_middle(c: &CellComplex, faces: &[FaceId]) -> Option<PseudolineId> {
    let mut seen = std::collections::HashSet::new();
    for &f in faces {
        let lines: Vec<PseudolineId> = c.lower_lines(f).collect();
        if lines.len() > 2 {
            if let Some(&l) = lines[1..lines.len() - 1].iter().find(|&&l| !seen.insert(l)) {
                return Some(l);
            }
        }
    }
    None
}
