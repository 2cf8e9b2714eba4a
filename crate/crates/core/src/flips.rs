//! Triangle flips and greedy cutpath maximization.

use serde::{Deserialize, Serialize};

use crate::arrangement::WiringDiagram;
use crate::complex::CellComplex;
use crate::cutpath::{count_cutpaths, BigCount};
use crate::error::{Error, Result};
use crate::par::Exec;

/// Swaps at `positions` with gaps `g, g', g` (`|g - g'| = 1`) bounding a
/// triangular cell: no other swap at gaps `g - 1 ..= g + 1` lies between
/// the outer two.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TriangleSite {
    pub positions: [usize; 3],
    pub gaps: [u32; 3],
}

/// All triangle sites, ordered by their first position.
pub fn triangles(d: &WiringDiagram) -> Vec<TriangleSite> {
    let n = d.n();
    // Per gap: last swap there, and swaps at adjacent gaps seen since.
    let mut last: Vec<Option<usize>> = vec![None; n + 1];
    let mut adjacent = vec![0u32; n + 1];
    let mut adjacent_pos = vec![0usize; n + 1];
    let mut out = Vec::new();
    for (p, &g) in d.swaps().iter().enumerate() {
        let gi = g as usize;
        if let (Some(i), 1) = (last[gi], adjacent[gi]) {
            let j = adjacent_pos[gi];
            out.push(TriangleSite {
                positions: [i, j, p],
                gaps: [g, d.swaps()[j], g],
            });
        }
        last[gi] = Some(p);
        adjacent[gi] = 0;
        for h in [gi - 1, gi + 1] {
            if (1..n).contains(&h) {
                adjacent[h] += 1;
                adjacent_pos[h] = p;
            }
        }
    }
    out.sort();
    out
}

fn is_site(d: &WiringDiagram, t: &TriangleSite) -> bool {
    let s = d.swaps();
    let [i, j, k] = t.positions;
    let [g, h, g2] = t.gaps;
    if !(i < j && j < k && k < s.len()) || g != g2 || g.abs_diff(h) != 1 {
        return false;
    }
    if s[i] != g || s[j] != h || s[k] != g {
        return false;
    }
    (i + 1..k).all(|p| p == j || s[p].abs_diff(g) > 1)
}

/// Replaces `g, g', g` by `g', g, g'`. Swaps between the outer two are moved
/// out of the way first: those before the middle one to the left, the rest
/// to the right; both commute with `g`.
pub fn flip(d: &WiringDiagram, t: &TriangleSite) -> Result<WiringDiagram> {
    if !is_site(d, t) {
        return Err(Error::StaleSite(t.positions));
    }
    let s = d.swaps();
    let [i, j, k] = t.positions;
    let [g, h, _] = t.gaps;
    let mut out = Vec::with_capacity(s.len());
    out.extend_from_slice(&s[..i]);
    out.extend_from_slice(&s[i + 1..j]);
    out.extend([h, g, h]);
    out.extend_from_slice(&s[j + 1..k]);
    out.extend_from_slice(&s[k + 1..]);
    Ok(WiringDiagram::from_valid(d.n(), out))
}

/// Site of the flipped triangle in `flip(d, t)`.
pub fn image_site(t: &TriangleSite) -> TriangleSite {
    let [i, j, _] = t.positions;
    let [g, h, _] = t.gaps;
    let start = i + (j - i - 1);
    TriangleSite {
        positions: [start, start + 1, start + 2],
        gaps: [h, g, h],
    }
}

pub fn count(d: &WiringDiagram) -> BigCount {
    count_cutpaths(&CellComplex::build(d))
}

/// Every single-flip neighbour with its cutpath count.
pub fn flip_neighbors(d: &WiringDiagram, exec: Exec) -> Vec<(TriangleSite, BigCount)> {
    let sites = triangles(d);
    exec.map(sites, |t| {
        let e = flip(d, &t).expect("fresh site");
        (t, count(&e))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: usize,
    pub site: TriangleSite,
    pub count: BigCount,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyTrace {
    pub start_count: BigCount,
    pub steps: Vec<TraceStep>,
    /// Stopped by the step limit rather than at a local maximum.
    pub truncated: bool,
}

pub const DEFAULT_MAX_STEPS: usize = 1000;

/// Applies the best strictly improving flip until none exists or
/// `max_steps` flips were made. Ties go to the smallest site.
pub fn greedy_maximize(d: &WiringDiagram, max_steps: usize, exec: Exec) -> (WiringDiagram, GreedyTrace) {
    let mut cur = d.clone();
    let mut cur_count = count(&cur);
    let mut trace = GreedyTrace {
        start_count: cur_count.clone(),
        steps: Vec::new(),
        truncated: false,
    };
    loop {
        let best = flip_neighbors(&cur, exec)
            .into_iter()
            .filter(|(_, c)| *c > cur_count)
            .fold(None::<(TriangleSite, BigCount)>, |acc, (t, c)| match acc {
                Some((_, ref bc)) if *bc >= c => acc,
                _ => Some((t, c)),
            });
        let Some((site, c)) = best else { break };
        if trace.steps.len() == max_steps {
            trace.truncated = true;
            break;
        }
        cur = flip(&cur, &site).expect("fresh site");
        cur_count = c.clone();
        trace.steps.push(TraceStep {
            step: trace.steps.len() + 1,
            site,
            count: c,
        });
    }
    (cur, trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wd(n: usize, s: &[u32]) -> WiringDiagram {
        WiringDiagram::new(n, s.to_vec()).unwrap()
    }

    #[test]
    fn single_triangle() {
        let d = wd(3, &[1, 2, 1]);
        let ts = triangles(&d);
        assert_eq!(
            ts,
            vec![TriangleSite {
                positions: [0, 1, 2],
                gaps: [1, 2, 1]
            }]
        );
        let e = flip(&d, &ts[0]).unwrap();
        assert_eq!(e.swaps(), &[2, 1, 2]);
        assert_eq!(flip(&e, &image_site(&ts[0])).unwrap(), d);
        assert!(triangles(&wd(2, &[1])).is_empty());
        assert_eq!(count(&d), count(&e));
    }

    #[test]
    fn stale_site() {
        let d = wd(3, &[1, 2, 1]);
        let t = TriangleSite {
            positions: [0, 1, 2],
            gaps: [2, 1, 2],
        };
        assert_eq!(flip(&d, &t), Err(Error::StaleSite([0, 1, 2])));
    }

    #[test]
    fn exhaustive_small() {
        use crate::oracle::{canonical_form, enumerate_arrangements};
        for n in 1..=5 {
            for d in enumerate_arrangements(n, Exec::Sequential).unwrap() {
                let c = CellComplex::build(&d);
                let tri = (0..c.faces().len())
                    .filter(|&f| c.is_bounded(f) && c.face_size(f).unwrap() == 3)
                    .count();
                let sites = triangles(&d);
                assert_eq!(sites.len(), tri, "{d}");
                for t in sites {
                    let e = flip(&d, &t).unwrap();
                    assert!(triangles(&e).contains(&image_site(&t)));
                    let back = flip(&e, &image_site(&t)).unwrap();
                    assert_eq!(canonical_form(&back), canonical_form(&d));
                    assert_ne!(canonical_form(&e), canonical_form(&d));
                }
            }
        }
    }

    #[test]
    fn greedy_on_triangle_stops() {
        let (e, tr) = greedy_maximize(&wd(3, &[1, 2, 1]), DEFAULT_MAX_STEPS, Exec::Sequential);
        assert!(tr.steps.is_empty() && !tr.truncated);
        assert_eq!(e.swaps(), &[1, 2, 1]);
        let js = serde_json::to_value(&tr).unwrap();
        assert_eq!(js["start_count"], "4");
    }
}
