//! Wiring diagrams of marked simple pseudoline arrangements.
//!
//! Wires are numbered `1..=n` from top to bottom at the left edge and a swap
//! at gap `g` exchanges the pseudolines on wires `g` and `g + 1`. The
//! north-cell is the face above wire 1, the south-cell the face below wire n.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pseudoline label: the wire it occupies at the left edge (1-based).
pub type PseudolineId = u32;

/// A validated wiring diagram: a reduced word of the reversal permutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawDiagram", into = "RawDiagram")]
pub struct WiringDiagram {
    n: usize,
    swaps: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct RawDiagram {
    n: usize,
    swaps: Vec<u32>,
}

impl TryFrom<RawDiagram> for WiringDiagram {
    type Error = Error;
    fn try_from(raw: RawDiagram) -> Result<Self> {
        WiringDiagram::new(raw.n, raw.swaps)
    }
}

impl From<WiringDiagram> for RawDiagram {
    fn from(d: WiringDiagram) -> Self {
        RawDiagram { n: d.n, swaps: d.swaps }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoWires,
    SwapCount {
        expected: usize,
        found: usize,
    },
    /// `index` is 1-based.
    GapOutOfRange {
        index: usize,
        gap: u32,
        n: usize,
    },
    /// `index` is 1-based; the pair is reported as (upper, lower) before the swap.
    RepeatedPair {
        index: usize,
        pair: (PseudolineId, PseudolineId),
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoWires => write!(f, "a diagram needs at least one wire"),
            Violation::SwapCount { expected, found } => {
                let noun = if *expected == 1 { "swap" } else { "swaps" };
                write!(f, "expected {expected} {noun}, found {found}")
            }
            Violation::GapOutOfRange { index, gap, n } => {
                write!(f, "gap {gap} out of range [1,{}] at swap {index}", n.saturating_sub(1))
            }
            Violation::RepeatedPair { index, pair } => write!(
                f,
                "pair crosses twice at swap {index} (pseudolines {} and {})",
                pair.0, pair.1
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        let msgs: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", msgs.join("; "))
    }
}

/// Checks every diagram invariant by simulating the swaps once.
///
/// Out-of-range gaps are all reported; simulation stops at the first repeated
/// crossing since the wire contents are meaningless afterwards.
pub fn validate(n: usize, swaps: &[u32]) -> ValidationReport {
    let mut violations = Vec::new();
    if n == 0 {
        violations.push(Violation::NoWires);
        return ValidationReport { violations };
    }
    let expected = n * (n - 1) / 2;
    if swaps.len() != expected {
        violations.push(Violation::SwapCount {
            expected,
            found: swaps.len(),
        });
    }
    let mut in_range = true;
    for (i, &g) in swaps.iter().enumerate() {
        if g == 0 || g as usize >= n {
            in_range = false;
            violations.push(Violation::GapOutOfRange {
                index: i + 1,
                gap: g,
                n,
            });
        }
    }
    if in_range {
        let mut wires: Vec<PseudolineId> = (1..=n as u32).collect();
        for (i, &g) in swaps.iter().enumerate() {
            let (a, b) = (wires[g as usize - 1], wires[g as usize]);
            if a > b {
                violations.push(Violation::RepeatedPair {
                    index: i + 1,
                    pair: (a, b),
                });
                break;
            }
            wires.swap(g as usize - 1, g as usize);
        }
    }
    ValidationReport { violations }
}

impl WiringDiagram {
    pub fn new(n: usize, swaps: Vec<u32>) -> Result<Self> {
        let report = validate(n, &swaps);
        if report.is_ok() {
            Ok(WiringDiagram { n, swaps })
        } else {
            Err(Error::Invalid(report.to_string()))
        }
    }

    /// Caller guarantees validity; checked in debug builds.
    pub(crate) fn from_valid(n: usize, swaps: Vec<u32>) -> Self {
        debug_assert!(validate(n, &swaps).is_ok());
        WiringDiagram { n, swaps }
    }

    /// The single-wire diagram.
    pub fn single() -> Self {
        WiringDiagram {
            n: 1,
            swaps: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn swaps(&self) -> &[u32] {
        &self.swaps
    }

    pub fn into_swaps(self) -> Vec<u32> {
        self.swaps
    }

    /// Pseudoline pair crossing at each swap, `(upper, lower)` as seen just
    /// before the crossing.
    pub fn crossings(&self) -> Vec<(PseudolineId, PseudolineId)> {
        let mut wires: Vec<PseudolineId> = (1..=self.n as u32).collect();
        self.swaps
            .iter()
            .map(|&g| {
                let g = g as usize;
                let pair = (wires[g - 1], wires[g]);
                wires.swap(g - 1, g);
                pair
            })
            .collect()
    }

    /// Rotation of the plane by a half turn. North and south cells trade
    /// places; pseudoline labels are preserved.
    pub fn rotate180(&self) -> Self {
        let n = self.n as u32;
        let swaps = self.swaps.iter().rev().map(|&g| n - g).collect();
        WiringDiagram { n: self.n, swaps }
    }

    /// Exchanges the commuting swaps at positions `i` and `i + 1`.
    pub fn commutation_move(&self, i: usize) -> Result<Self> {
        if i + 1 >= self.swaps.len() {
            return Err(Error::Commutation {
                pos: i,
                reason: "position out of range",
            });
        }
        let (a, b) = (self.swaps[i], self.swaps[i + 1]);
        if a == b {
            return Err(Error::Commutation {
                pos: i,
                reason: "gaps equal",
            });
        }
        if a.abs_diff(b) == 1 {
            return Err(Error::Commutation {
                pos: i,
                reason: "gaps adjacent",
            });
        }
        let mut swaps = self.swaps.clone();
        swaps.swap(i, i + 1);
        Ok(WiringDiagram { n: self.n, swaps })
    }

    /// Positions `i` where `commutation_move(i)` is legal.
    pub fn legal_moves(&self) -> Vec<usize> {
        self.swaps
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0].abs_diff(w[1]) >= 2)
            .map(|(i, _)| i)
            .collect()
    }

    /// Canonical WD1 text.
    pub fn to_wd(&self) -> String {
        let mut out = format!("WD1 {}\n", self.n);
        for chunk in self.swaps.chunks(40) {
            let line: Vec<String> = chunk.iter().map(|g| g.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse_wd(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("missing header".into()))?;
        let mut head = header.split_whitespace();
        if head.next() != Some("WD1") {
            return Err(Error::Parse(format!("malformed header {header:?}")));
        }
        let n: usize = head
            .next()
            .and_then(|t| t.parse().ok())
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::Parse(format!("malformed header {header:?}")))?;
        if head.next().is_some() {
            return Err(Error::Parse(format!("malformed header {header:?}")));
        }
        let mut swaps = Vec::with_capacity(n * (n - 1) / 2);
        for line in lines {
            for tok in line.split_whitespace() {
                let g: u32 = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad gap token {tok:?}")))?;
                if g == 0 || g as usize >= n {
                    return Err(Error::Parse(format!(
                        "gap {g} out of range [1,{}]",
                        n.saturating_sub(1)
                    )));
                }
                swaps.push(g);
            }
        }
        let expected = n * (n - 1) / 2;
        if swaps.len() != expected {
            return Err(Error::Parse(format!(
                "wrong swap count: expected {expected}, found {}",
                swaps.len()
            )));
        }
        WiringDiagram::new(n, swaps)
    }
}

impl FromStr for WiringDiagram {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        WiringDiagram::parse_wd(s)
    }
}

impl fmt::Display for WiringDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_wd())
    }
}
