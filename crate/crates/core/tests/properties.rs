use cutpath::flips::{flip, image_site, triangles};
use cutpath::oracle::canonical_form;
use cutpath::{
    bubblesort_arrangement, build_ai, count_cutpaths, enumerate_cutpaths, odd_even_arrangement, stack,
    stacked_lower_bound, CellComplex, StackSide, WiringDiagram,
};
use proptest::prelude::*;

/// A reduced word of the reversal built by picking, at each step, one of the
/// swaps still available (`picks[i]` modulo their number).
fn diagram(n: usize, picks: &[usize]) -> WiringDiagram {
    let mut line: Vec<usize> = (0..=n).collect();
    let mut swaps = Vec::new();
    for step in 0..n * (n - 1) / 2 {
        let open: Vec<usize> = (1..n).filter(|&g| line[g] < line[g + 1]).collect();
        let g = open[picks.get(step).copied().unwrap_or(0) % open.len()];
        line.swap(g, g + 1);
        swaps.push(g as u32);
    }
    WiringDiagram::new(n, swaps).unwrap()
}

fn arb_diagram(max_n: usize) -> impl Strategy<Value = WiringDiagram> {
    (1..=max_n)
        .prop_flat_map(|n| proptest::collection::vec(any::<usize>(), n * (n - 1) / 2).prop_map(move |p| diagram(n, &p)))
}

fn count(d: &WiringDiagram) -> cutpath::BigCount {
    count_cutpaths(&CellComplex::build(d))
}

fn face_sizes(d: &WiringDiagram) -> Vec<usize> {
    let c = CellComplex::build(d);
    let mut v: Vec<usize> = c.faces().iter().map(|f| f.size()).collect();
    v.sort();
    v
}

proptest! {
    #[test]
    fn dp_matches_enumeration(d in arb_diagram(7)) {
        let c = CellComplex::build(&d);
        let paths = enumerate_cutpaths(&c, usize::MAX);
        prop_assert_eq!(count_cutpaths(&c).to_u64(), Some(paths.len() as u64));
    }

    #[test]
    fn wd_round_trip(d in arb_diagram(9)) {
        prop_assert_eq!(WiringDiagram::parse_wd(&d.to_wd()).unwrap(), d);
    }

    #[test]
    fn commutation_preserves_structure(d in arb_diagram(8), pick in any::<usize>()) {
        let moves = d.legal_moves();
        prop_assume!(!moves.is_empty());
        let e = d.commutation_move(moves[pick % moves.len()]).unwrap();
        prop_assert_eq!(count(&d), count(&e));
        prop_assert_eq!(face_sizes(&d), face_sizes(&e));
        prop_assert_eq!(CellComplex::build(&d).zone_report(), CellComplex::build(&e).zone_report());
        prop_assert_eq!(canonical_form(&d), canonical_form(&e));
    }

    #[test]
    fn rotation_preserves_count(d in arb_diagram(9)) {
        prop_assert_eq!(count(&d), count(&d.rotate180()));
        prop_assert_eq!(d.rotate180().rotate180(), d);
    }

    #[test]
    fn flips_are_involutions(d in arb_diagram(7), pick in any::<usize>()) {
        let sites = triangles(&d);
        prop_assert!(!sites.is_empty() || d.n() < 3);
        prop_assume!(!sites.is_empty());
        let t = sites[pick % sites.len()];
        let e = flip(&d, &t).unwrap();
        prop_assert_eq!(canonical_form(&flip(&e, &image_site(&t)).unwrap()), canonical_form(&d));
    }

    #[test]
    fn stacking_is_supermultiplicative(a in arb_diagram(4), b in arb_diagram(4), left in any::<bool>()) {
        let side = if left { StackSide::Left } else { StackSide::Right };
        let s = stack(&a, &b, side);
        prop_assert_eq!(s.n(), a.n() + b.n());
        prop_assert!(count(&s).0 >= count(&a).0 * count(&b).0);
    }
}

#[test]
fn bubblesort_counts_are_powers_of_two() {
    for n in 1..=8 {
        let c = CellComplex::build(&bubblesort_arrangement(n));
        assert_eq!(enumerate_cutpaths(&c, usize::MAX).len(), 1 << (n - 1), "n={n}");
    }
    for n in 9..=40 {
        assert_eq!(
            count(&bubblesort_arrangement(n)).0,
            num_bigint::BigUint::from(1u8) << (n - 1)
        );
    }
}

#[test]
fn stacked_lower_bound_beats_product() {
    let base = odd_even_arrangement(3);
    let per = count(&base).0;
    for n in 1..=10 {
        let d = stacked_lower_bound(n, &base);
        assert_eq!(d.n(), n);
        assert!(count(&d).0 >= num_traits::pow(per.clone(), n / 3), "n={n}");
    }
}

#[test]
fn ai_growth() {
    let mut prev: Option<(cutpath::BigCount, f64)> = None;
    for i in 1..=6 {
        let c = count(&build_ai(i));
        // At most about 2^130, well inside f64 range.
        let root = c.to_string().parse::<f64>().unwrap().powf(1.0 / (20 * i) as f64);
        if let Some((pc, pr)) = &prev {
            assert!(c > *pc);
            assert!(root >= *pr, "i={i}: {root} < {pr}");
        }
        prev = Some((c, root));
    }
}
