//! Exhaustive enumeration of marked arrangements for small `n`.
//!
//! Marked simple arrangements correspond to commutation classes of reduced
//! words of the reversal permutation. Each class is represented by its
//! lexicographically smallest word. A word is that representative exactly
//! when no letter can be commuted leftwards past a larger letter, so the
//! property can be checked as each letter is appended and the search prunes
//! non-canonical prefixes.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::Serialize;

use crate::arrangement::WiringDiagram;
use crate::complex::CellComplex;
use crate::cutpath::{count_cutpaths, BigCount};
use crate::error::{Error, Result};
use crate::par::Exec;

pub const ENUMERATION_CUTOFF: usize = 8;
pub const GAMMA_CUTOFF: usize = 7;
pub const SLOW_ORACLE_CUTOFF: usize = 5;

fn commute(a: u32, b: u32) -> bool {
    a.abs_diff(b) >= 2
}

/// Whether appending `a` keeps `word` the smallest word of its class.
fn canonical_append(word: &[u32], a: u32) -> bool {
    for &x in word.iter().rev() {
        if !commute(x, a) {
            return true;
        }
        if x > a {
            return false;
        }
    }
    true
}

/// Depth-first search state: `line[t]` is the pseudoline on track `t`.
struct Search {
    n: usize,
    line: Vec<u32>,
    word: Vec<u32>,
    total: usize,
}

impl Search {
    fn new(n: usize) -> Self {
        Search {
            n,
            line: (0..=n as u32).collect(),
            word: Vec::new(),
            total: n * (n - 1) / 2,
        }
    }

    /// Canonical letters that may follow the current word.
    fn moves(&self) -> impl Iterator<Item = u32> + '_ {
        (1..self.n as u32)
            .filter(|&g| self.line[g as usize] < self.line[g as usize + 1] && canonical_append(&self.word, g))
    }

    fn push(&mut self, g: u32) {
        self.line.swap(g as usize, g as usize + 1);
        self.word.push(g);
    }

    fn pop(&mut self) {
        let g = self.word.pop().expect("nonempty word");
        self.line.swap(g as usize, g as usize + 1);
    }

    fn run<F: FnMut(&[u32])>(&mut self, visit: &mut F) {
        if self.word.len() == self.total {
            visit(&self.word);
            return;
        }
        let moves: Vec<u32> = self.moves().collect();
        for g in moves {
            self.push(g);
            self.run(visit);
            self.pop();
        }
    }
}

/// Canonical prefixes of length `depth` (or complete words if shorter), in
/// lexicographic order.
fn prefixes(n: usize, depth: usize) -> Vec<Vec<u32>> {
    fn go(s: &mut Search, depth: usize, out: &mut Vec<Vec<u32>>) {
        if s.word.len() == depth || s.word.len() == s.total {
            out.push(s.word.clone());
            return;
        }
        let moves: Vec<u32> = s.moves().collect();
        for g in moves {
            s.push(g);
            go(s, depth, out);
            s.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Search::new(n), depth, &mut out);
    out
}

fn check_cutoff(what: &'static str, n: usize, max: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    if n > max {
        return Err(Error::Cutoff { what, max, n });
    }
    Ok(())
}

/// Calls `visit` on each canonical word of one subtree.
fn walk(n: usize, prefix: &[u32], visit: &mut dyn FnMut(&[u32])) {
    let mut s = Search::new(n);
    for &g in prefix {
        s.push(g);
    }
    s.run(&mut |w: &[u32]| visit(w));
}

const SPLIT_DEPTH: usize = 4;

/// One representative per marked arrangement, in lexicographic order.
pub fn enumerate_arrangements(n: usize, exec: Exec) -> Result<Vec<WiringDiagram>> {
    check_cutoff("enumerate_arrangements", n, ENUMERATION_CUTOFF)?;
    let parts = exec.map(prefixes(n, SPLIT_DEPTH), |p| {
        let mut out = Vec::new();
        walk(n, &p, &mut |w| out.push(WiringDiagram::from_valid(n, w.to_vec())));
        out
    });
    Ok(parts.into_iter().flatten().collect())
}

/// Number of marked arrangements, without materializing them.
pub fn count_arrangements(n: usize, exec: Exec) -> Result<u64> {
    check_cutoff("count_arrangements", n, ENUMERATION_CUTOFF)?;
    let parts = exec.map(prefixes(n, SPLIT_DEPTH), |p| {
        let mut c = 0u64;
        walk(n, &p, &mut |_| c += 1);
        c
    });
    Ok(parts.into_iter().sum())
}

/// Smallest word in the commutation class of `d`.
///
/// Repeatedly removes the smallest letter that can be commuted to the front.
pub fn canonical_form(d: &WiringDiagram) -> WiringDiagram {
    let mut rest: Vec<u32> = d.swaps().to_vec();
    let mut out = Vec::with_capacity(rest.len());
    while !rest.is_empty() {
        let mut best: Option<usize> = None;
        for (i, &a) in rest.iter().enumerate() {
            if rest[..i].iter().all(|&x| commute(x, a)) && best.is_none_or(|b| a < rest[b]) {
                best = Some(i);
            }
        }
        let i = best.expect("the first letter is always movable");
        out.push(rest.remove(i));
    }
    WiringDiagram::from_valid(d.n(), out)
}

/// Every word reachable from `word` by commutation moves.
pub fn commutation_class(word: &[u32]) -> BTreeSet<Vec<u32>> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([word.to_vec()]);
    seen.insert(word.to_vec());
    while let Some(w) = queue.pop_front() {
        for i in 0..w.len().saturating_sub(1) {
            if commute(w[i], w[i + 1]) {
                let mut v = w.clone();
                v.swap(i, i + 1);
                if seen.insert(v.clone()) {
                    queue.push_back(v);
                }
            }
        }
    }
    seen
}

/// All reduced words of the reversal permutation, in lexicographic order.
pub fn all_reduced_words(n: usize) -> Result<Vec<Vec<u32>>> {
    check_cutoff("all_reduced_words", n, SLOW_ORACLE_CUTOFF)?;
    fn go(line: &mut Vec<u32>, word: &mut Vec<u32>, total: usize, out: &mut Vec<Vec<u32>>) {
        if word.len() == total {
            out.push(word.clone());
            return;
        }
        for g in 1..line.len() - 1 {
            if line[g] < line[g + 1] {
                line.swap(g, g + 1);
                word.push(g as u32);
                go(line, word, total, out);
                word.pop();
                line.swap(g, g + 1);
            }
        }
    }
    let mut out = Vec::new();
    go(
        &mut (0..=n as u32).collect(),
        &mut Vec::new(),
        n * (n - 1) / 2,
        &mut out,
    );
    Ok(out)
}

/// Independent class enumeration: every reduced word, reduced to the
/// minimum of its breadth-first commutation class, deduplicated.
pub fn slow_class_representatives(n: usize) -> Result<Vec<Vec<u32>>> {
    let mut reps = BTreeSet::new();
    let mut done: HashSet<Vec<u32>> = HashSet::new();
    for w in all_reduced_words(n)? {
        if done.contains(&w) {
            continue;
        }
        let class = commutation_class(&w);
        reps.insert(class.first().expect("class contains w").clone());
        done.extend(class);
    }
    Ok(reps.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaResult {
    pub n: usize,
    pub classes: u64,
    pub gamma: BigCount,
    /// First maximizer in enumeration order.
    pub maximizer: WiringDiagram,
    pub maximizers: u64,
}

/// Maximum cutpath count over all marked arrangements of `n` lines.
pub fn gamma_exact(n: usize, exec: Exec) -> Result<GammaResult> {
    check_cutoff("gamma_exact", n, GAMMA_CUTOFF)?;
    type Part = (u64, Option<(BigCount, Vec<u32>, u64)>);
    let parts: Vec<Part> = exec.map(prefixes(n, SPLIT_DEPTH), |p| {
        let mut classes = 0u64;
        let mut best: Option<(BigCount, Vec<u32>, u64)> = None;
        walk(n, &p, &mut |w| {
            classes += 1;
            let c = count_cutpaths(&CellComplex::build(&WiringDiagram::from_valid(n, w.to_vec())));
            match &mut best {
                Some((bc, _, k)) if *bc == c => *k += 1,
                Some((bc, _, _)) if *bc > c => {}
                _ => best = Some((c, w.to_vec(), 1)),
            }
        });
        (classes, best)
    });
    let mut classes = 0;
    let mut best: Option<(BigCount, Vec<u32>, u64)> = None;
    for (c, b) in parts {
        classes += c;
        let Some((bc, w, k)) = b else { continue };
        match &mut best {
            Some((cur, _, kk)) if *cur == bc => *kk += k,
            Some((cur, _, _)) if *cur > bc => {}
            _ => best = Some((bc, w, k)),
        }
    }
    let (gamma, w, maximizers) = best.expect("at least one arrangement");
    Ok(GammaResult {
        n,
        classes,
        gamma,
        maximizer: WiringDiagram::from_valid(n, w),
        maximizers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts() {
        let expect = [1u64, 1, 2, 8, 62, 908];
        for (i, &e) in expect.iter().enumerate() {
            let n = i + 1;
            assert_eq!(count_arrangements(n, Exec::Sequential).unwrap(), e, "n={n}");
        }
        let three = enumerate_arrangements(3, Exec::Parallel).unwrap();
        assert_eq!(
            three.iter().map(|d| d.swaps().to_vec()).collect::<Vec<_>>(),
            vec![vec![1, 2, 1], vec![2, 1, 2]]
        );
        assert!(enumerate_arrangements(9, Exec::Sequential).is_err());
    }

    #[test]
    fn fast_matches_slow() {
        for n in 1..=5 {
            let fast: Vec<Vec<u32>> = enumerate_arrangements(n, Exec::Sequential)
                .unwrap()
                .into_iter()
                .map(|d| d.into_swaps())
                .collect();
            assert_eq!(fast, slow_class_representatives(n).unwrap(), "n={n}");
        }
    }

    #[test]
    fn canonical_form_is_class_minimum() {
        for w in all_reduced_words(5).unwrap() {
            let d = WiringDiagram::new(5, w.clone()).unwrap();
            let min = commutation_class(&w).into_iter().next().unwrap();
            assert_eq!(canonical_form(&d).swaps(), &min[..]);
        }
    }

    #[test]
    fn small_gamma() {
        assert_eq!(gamma_exact(2, Exec::Sequential).unwrap().gamma.to_u64(), Some(2));
        let g3 = gamma_exact(3, Exec::Sequential).unwrap();
        assert_eq!((g3.gamma.to_u64(), g3.maximizers), (Some(4), 2));
    }
}
