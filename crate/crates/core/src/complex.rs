//! Face structure and north-to-south dual DAG of a wiring diagram.
//!
//! Every face lives in one gap between two consecutive wires (gap 0 above wire
//! 1 is the north-cell, gap `n` below wire `n` the south-cell) and stretches
//! between two consecutive swaps at that gap. Segments are the pieces of wires
//! between consecutive crossings touching that wire, so a face's upper and
//! lower boundaries are contiguous runs of segments on the wires above and
//! below it. Segment ids are therefore numbered wire by wire, left to right.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::Range;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::arrangement::{PseudolineId, WiringDiagram};
use crate::error::{Error, Result};
use crate::rational::ratio_u64_string;

pub type FaceId = usize;
pub type SegmentId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Face {
    /// Gap index in `0..=n`.
    pub gap: u32,
    /// Position among the faces of the same gap, left to right.
    pub rank: u32,
    upper_start: u32,
    upper_len: u32,
    lower_start: u32,
    lower_len: u32,
}

impl Face {
    pub fn upper(&self) -> Range<SegmentId> {
        self.upper_start as usize..(self.upper_start + self.upper_len) as usize
    }

    pub fn lower(&self) -> Range<SegmentId> {
        self.lower_start as usize..(self.lower_start + self.lower_len) as usize
    }

    pub fn size(&self) -> usize {
        (self.upper_len + self.lower_len) as usize
    }

    /// Bounded faces sit between two swaps at their gap.
    pub fn is_bounded(&self, gap_faces: usize) -> bool {
        self.rank > 0 && (self.rank as usize) + 1 < gap_faces
    }
}

/// One dual edge: a wire piece oriented from the face above to the face below.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Segment {
    pub line: PseudolineId,
    pub above: u32,
    pub below: u32,
}

#[derive(Clone, Debug)]
pub struct CellComplex {
    n: usize,
    faces: Vec<Face>,
    segments: Vec<Segment>,
    /// `wire_offsets[w - 1]..wire_offsets[w]` are the segments on wire `w`.
    wire_offsets: Vec<u32>,
    /// `gap_offsets[g]..gap_offsets[g + 1]` index `gap_faces`.
    gap_offsets: Vec<u32>,
    gap_faces: Vec<u32>,
}

pub const NORTH: FaceId = 0;

impl CellComplex {
    /// Left-to-right sweep keeping the open face of each gap.
    pub fn build(d: &WiringDiagram) -> Self {
        let n = d.n();
        let swaps = d.swaps();
        let face_count = 1 + n + swaps.len();

        let mut per_wire = vec![1u32; n];
        let mut per_gap = vec![1u32; n + 1];
        for &g in swaps {
            per_wire[g as usize - 1] += 1;
            per_wire[g as usize] += 1;
            per_gap[g as usize] += 1;
        }
        let mut wire_offsets = Vec::with_capacity(n + 1);
        wire_offsets.push(0u32);
        for c in &per_wire {
            wire_offsets.push(wire_offsets.last().unwrap() + c);
        }
        let mut gap_offsets = Vec::with_capacity(n + 2);
        gap_offsets.push(0u32);
        for c in &per_gap {
            gap_offsets.push(gap_offsets.last().unwrap() + c);
        }
        let seg_count = *wire_offsets.last().unwrap() as usize;

        let blank = Segment {
            line: 0,
            above: 0,
            below: 0,
        };
        let mut segments = vec![blank; seg_count];
        let mut faces = Vec::with_capacity(face_count);
        let mut gap_faces = vec![0u32; face_count];
        let mut gap_fill: Vec<u32> = gap_offsets[..=n].to_vec();

        // Current segment id on each wire (index w - 1) and open face per gap.
        let mut seg: Vec<u32> = wire_offsets[..n].to_vec();
        let mut open: Vec<u32> = (0..=n as u32).collect();
        let mut occupant: Vec<PseudolineId> = (1..=n as u32).collect();

        let open_face =
            |faces: &mut Vec<Face>, gap_faces: &mut Vec<u32>, gap_fill: &mut Vec<u32>, seg: &[u32], g: usize| {
                let id = faces.len() as u32;
                let rank = gap_fill[g] - gap_offsets[g];
                gap_faces[gap_fill[g] as usize] = id;
                gap_fill[g] += 1;
                faces.push(Face {
                    gap: g as u32,
                    rank,
                    upper_start: if g >= 1 { seg[g - 1] } else { 0 },
                    upper_len: 0,
                    lower_start: if g < n { seg[g] } else { 0 },
                    lower_len: 0,
                });
                id
            };
        let close_face = |faces: &mut Vec<Face>, seg: &[u32], id: u32| {
            let f = &mut faces[id as usize];
            let g = f.gap as usize;
            if g >= 1 {
                f.upper_len = seg[g - 1] - f.upper_start + 1;
            }
            if g < n {
                f.lower_len = seg[g] - f.lower_start + 1;
            }
        };

        for g in 0..=n {
            open_face(&mut faces, &mut gap_faces, &mut gap_fill, &seg, g);
        }
        for w in 0..n {
            segments[seg[w] as usize] = Segment {
                line: occupant[w],
                above: w as u32,
                below: w as u32 + 1,
            };
        }

        for &g in swaps {
            let g = g as usize;
            close_face(&mut faces, &seg, open[g]);
            seg[g - 1] += 1;
            seg[g] += 1;
            occupant.swap(g - 1, g);
            let id = open_face(&mut faces, &mut gap_faces, &mut gap_fill, &seg, g);
            open[g] = id;
            segments[seg[g - 1] as usize] = Segment {
                line: occupant[g - 1],
                above: open[g - 1],
                below: id,
            };
            segments[seg[g] as usize] = Segment {
                line: occupant[g],
                above: id,
                below: open[g + 1],
            };
        }
        for &f in &open {
            close_face(&mut faces, &seg, f);
        }

        CellComplex {
            n,
            faces,
            segments,
            wire_offsets,
            gap_offsets,
            gap_faces,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn north(&self) -> FaceId {
        NORTH
    }

    pub fn south(&self) -> FaceId {
        self.n
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn face(&self, f: FaceId) -> Result<&Face> {
        self.faces.get(f).ok_or(Error::UnknownFace(f))
    }

    pub fn segment(&self, s: SegmentId) -> &Segment {
        &self.segments[s]
    }

    pub fn face_size(&self, f: FaceId) -> Result<usize> {
        Ok(self.face(f)?.size())
    }

    /// Segments on wire `w` (1-based), left to right.
    pub fn wire_segments(&self, w: usize) -> Range<SegmentId> {
        self.wire_offsets[w - 1] as usize..self.wire_offsets[w] as usize
    }

    /// Faces of gap `g`, left to right.
    pub fn gap_faces(&self, g: usize) -> &[u32] {
        &self.gap_faces[self.gap_offsets[g] as usize..self.gap_offsets[g + 1] as usize]
    }

    pub fn is_bounded(&self, f: FaceId) -> bool {
        let face = &self.faces[f];
        face.is_bounded(self.gap_faces(face.gap as usize).len())
    }

    pub fn upper_lines(&self, f: FaceId) -> impl Iterator<Item = PseudolineId> + '_ {
        self.faces[f].upper().map(move |s| self.segments[s].line)
    }

    pub fn lower_lines(&self, f: FaceId) -> impl Iterator<Item = PseudolineId> + '_ {
        self.faces[f].lower().map(move |s| self.segments[s].line)
    }

    /// Dual edges `(from, to)` in segment id order.
    pub fn dual_edges(&self) -> impl Iterator<Item = (FaceId, FaceId)> + '_ {
        self.segments.iter().map(|s| (s.above as usize, s.below as usize))
    }

    /// Face of `rotated` (the complex of the half-turn rotated diagram)
    /// corresponding to `f`.
    pub fn rotated_face(&self, f: FaceId, rotated: &CellComplex) -> FaceId {
        let face = &self.faces[f];
        let g = face.gap as usize;
        let width = self.gap_faces(g).len() as u32;
        rotated.gap_faces(self.n - g)[(width - 1 - face.rank) as usize] as usize
    }

    /// Faces sorted gap by gap, left to right within a gap. Every dual edge
    /// joins gap `g` to gap `g + 1`, so this is a topological order.
    pub fn topological_order(&self) -> Vec<FaceId> {
        let order: Vec<FaceId> = self.gap_faces.iter().map(|&f| f as usize).collect();
        debug_assert!(self.check_order(&order));
        order
    }

    /// True iff every dual edge goes forward in `order`.
    pub fn check_order(&self, order: &[FaceId]) -> bool {
        if order.len() != self.faces.len() {
            return false;
        }
        let mut pos = vec![usize::MAX; self.faces.len()];
        for (i, &f) in order.iter().enumerate() {
            if f >= pos.len() || pos[f] != usize::MAX {
                return false;
            }
            pos[f] = i;
        }
        self.dual_edges().all(|(a, b)| pos[a] < pos[b])
    }

    pub fn zone_complexity(&self, p: PseudolineId) -> Result<u64> {
        if p == 0 || p as usize > self.n {
            return Err(Error::UnknownPseudoline(p as usize));
        }
        let mut seen = std::collections::HashSet::new();
        let mut total = 0u64;
        for s in self.segments.iter().filter(|s| s.line == p) {
            for f in [s.above, s.below] {
                if seen.insert(f) {
                    total += self.faces[f as usize].size() as u64;
                }
            }
        }
        Ok(total)
    }

    pub fn zone_report(&self) -> ZoneReport {
        let mut per = vec![0u64; self.n];
        for (f, face) in self.faces.iter().enumerate() {
            let size = face.size() as u64;
            for p in self.upper_lines(f).chain(self.lower_lines(f)) {
                per[p as usize - 1] += size;
            }
        }
        ZoneReport::from_complexities(per)
    }

    /// Graphviz rendering of the dual DAG.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph dual {\n  rankdir=TB;\n");
        for (f, face) in self.faces.iter().enumerate() {
            let label = match f {
                NORTH => "N".to_string(),
                _ if f == self.south() => "S".to_string(),
                _ => format!("{f}"),
            };
            let extra = if f == NORTH || f == self.south() {
                ", shape=doublecircle"
            } else {
                ""
            };
            let _ = writeln!(
                out,
                "  f{f} [label=\"{label}\", gap={}, size={}{extra}];",
                face.gap,
                face.size()
            );
        }
        for s in &self.segments {
            let _ = writeln!(out, "  f{} -> f{} [label=\"{}\"];", s.above, s.below, s.line);
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZoneReport {
    pub n: usize,
    pub per_line: BTreeMap<PseudolineId, u64>,
    #[serde(with = "ratio_u64_string")]
    pub average: Ratio<u64>,
    pub max: u64,
}

impl ZoneReport {
    pub fn from_complexities(per: Vec<u64>) -> Self {
        let n = per.len();
        let sum: u64 = per.iter().sum();
        let max = per.iter().copied().max().unwrap_or(0);
        let average = Ratio::new(sum, n.max(1) as u64);
        let per_line = per.into_iter().enumerate().map(|(i, c)| (i as u32 + 1, c)).collect();
        ZoneReport {
            n,
            per_line,
            average,
            max,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wd(n: usize, s: &[u32]) -> WiringDiagram {
        WiringDiagram::new(n, s.to_vec()).unwrap()
    }

    #[test]
    fn single_wire() {
        let c = CellComplex::build(&WiringDiagram::single());
        assert_eq!(c.faces().len(), 2);
        assert_eq!(c.segments().len(), 1);
        assert_eq!(c.dual_edges().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(c.topological_order(), vec![0, 1]);
        assert_eq!(c.zone_complexity(1).unwrap(), 2);
    }

    #[test]
    fn two_lines() {
        let c = CellComplex::build(&wd(2, &[1]));
        assert_eq!(c.faces().len(), 4);
        assert_eq!(c.segments().len(), 4);
        // 0 north, 1 west, 2 south, 3 east
        let mut edges: Vec<_> = c.dual_edges().collect();
        edges.sort();
        assert_eq!(edges, vec![(0, 1), (0, 3), (1, 2), (3, 2)]);
        assert_eq!(c.face_size(NORTH).unwrap(), 2);
        assert!(c.faces().iter().all(|f| f.size() == 2));
        assert_eq!(c.zone_complexity(1).unwrap(), 8);
        assert_eq!(c.zone_complexity(2).unwrap(), 8);
        let order = c.topological_order();
        assert_eq!((order[0], order[3]), (NORTH, c.south()));
    }

    #[test]
    fn triangle() {
        let c = CellComplex::build(&wd(3, &[1, 2, 1]));
        assert_eq!(c.faces().len(), 7);
        assert_eq!(c.segments().len(), 9);
        assert_eq!(c.lower_lines(NORTH).collect::<Vec<_>>(), vec![1, 2, 3]);
        assert_eq!(c.face_size(NORTH).unwrap(), 3);
        let total: usize = c.faces().iter().map(Face::size).sum();
        assert_eq!(total, 18);
        let bounded: Vec<_> = (0..7).filter(|&f| c.is_bounded(f)).collect();
        assert_eq!(bounded.len(), 1);
        assert_eq!(c.face_size(bounded[0]).unwrap(), 3);
        assert!(matches!(c.face_size(7), Err(Error::UnknownFace(7))));
        assert!(c.zone_complexity(4).is_err());
    }

    #[test]
    fn zone_report_average() {
        let c = CellComplex::build(&wd(2, &[1]));
        let r = c.zone_report();
        assert_eq!(r.average, Ratio::from_integer(8));
        assert_eq!(r.max, 8);
        let js = serde_json::to_string(&r).unwrap();
        assert!(js.contains("\"average\":\"8/1\""), "{js}");
    }

    #[test]
    fn dot_mentions_every_edge() {
        let c = CellComplex::build(&wd(3, &[1, 2, 1]));
        let dot = c.to_dot();
        assert_eq!(dot.matches("->").count(), 9);
        assert!(dot.contains("label=\"N\""));
        assert!(dot.contains("label=\"S\""));
    }
}
