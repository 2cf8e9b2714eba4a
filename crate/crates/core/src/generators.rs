//! Arrangement families: odd-even sort, bubblesort, stacking and `A_i`.

use serde::{Deserialize, Serialize};

use crate::arrangement::WiringDiagram;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StackSide {
    Left,
    Right,
}

impl StackSide {
    /// Side used when adding the `j`-th copy (`j >= 2`): left for even `j`.
    pub fn alternating(j: usize) -> Self {
        if j.is_multiple_of(2) {
            StackSide::Left
        } else {
            StackSide::Right
        }
    }
}

/// `n` layers alternating between all odd gaps and all even gaps.
pub fn odd_even_arrangement(n: usize) -> WiringDiagram {
    assert!(n >= 1, "an arrangement needs at least one pseudoline");
    let mut swaps = Vec::with_capacity(n * (n - 1) / 2);
    for t in 1..=n {
        let first = if t % 2 == 1 { 1 } else { 2 };
        swaps.extend((first..n as u32).step_by(2));
    }
    WiringDiagram::from_valid(n, swaps)
}

/// Moves each of the `lower` bottom lines up through the `upper` top ones.
fn crossing_block(upper: usize, lower: usize, out: &mut Vec<u32>) {
    for r in 1..=lower {
        out.extend((r..upper + r).rev().map(|g| g as u32));
    }
}

/// Stacks `top` above `bottom` and adds the `n_top * n_bottom` missing
/// crossings before (`Left`) or after (`Right`) both copies.
///
/// "Above" refers to the part of the diagram without inter-copy crossings,
/// where `top` occupies tracks `1..=n_top`. So with `Left` the top copy
/// enters on the lowest tracks and climbs through the bottom copy first.
pub fn stack(bottom: &WiringDiagram, top: &WiringDiagram, side: StackSide) -> WiringDiagram {
    let (nt, nb) = (top.n(), bottom.n());
    let n = nt + nb;
    let mut swaps = Vec::with_capacity(n * (n - 1) / 2);
    let shifted = |d: &WiringDiagram, by: usize, out: &mut Vec<u32>| {
        out.extend(d.swaps().iter().map(|&g| g + by as u32));
    };
    if side == StackSide::Left {
        crossing_block(nb, nt, &mut swaps);
    }
    shifted(top, 0, &mut swaps);
    shifted(bottom, nt, &mut swaps);
    if side == StackSide::Right {
        crossing_block(nt, nb, &mut swaps);
    }
    WiringDiagram::from_valid(n, swaps)
}

/// `copies` copies of `base`, each new one stacked on top with alternating
/// sides starting from the left.
fn stack_copies(base: &WiringDiagram, copies: usize) -> WiringDiagram {
    let mut acc = base.clone();
    for j in 2..=copies {
        acc = stack(&acc, base, StackSide::alternating(j));
    }
    acc
}

/// `A_1` is the odd-even arrangement on 20 lines; `A_i` stacks `A_1` on top
/// of `A_{i-1}`.
pub fn build_ai(i: usize) -> WiringDiagram {
    assert!(i >= 1, "A_i is defined for i >= 1");
    stack_copies(&odd_even_arrangement(20), i)
}

pub fn bubblesort_arrangement(n: usize) -> WiringDiagram {
    assert!(n >= 1, "an arrangement needs at least one pseudoline");
    stack_copies(&WiringDiagram::single(), n)
}

/// `n / n_0` stacked copies of `base`, plus an odd-even arrangement on the
/// remaining `n mod n_0` lines.
pub fn stacked_lower_bound(n: usize, base: &WiringDiagram) -> WiringDiagram {
    assert!(n >= 1, "an arrangement needs at least one pseudoline");
    let (q, r) = (n / base.n(), n % base.n());
    if q == 0 {
        return odd_even_arrangement(n);
    }
    let acc = stack_copies(base, q);
    if r == 0 {
        return acc;
    }
    stack(&acc, &odd_even_arrangement(r), StackSide::alternating(q + 1))
}
