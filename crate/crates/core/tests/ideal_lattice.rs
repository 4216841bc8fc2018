//! Golden-corpus behavior of the closure operator, ideal enumeration,
//! characters, perfectness, and the normal-subgroup correspondence.

use bratteli_core::analysis::{
    characters, enumerate_ideals, is_perfect, largest_perfect, normal_subgroups,
    simplicity_report, CharacterCount, SubgroupLabel,
};
use bratteli_core::corpus::{b3, car, cgrow};
use bratteli_core::ideal::{self, closure, is_ideal_set, ClosureOptions, IdealSet, LevelSet};
use bratteli_core::{BratteliDiagram, Edge, PeriodicTail, VertexId};

fn opts() -> ClosureOptions {
    ClosureOptions::default()
}

fn close(d: &BratteliDiagram, vertices: &[(usize, usize)]) -> IdealSet {
    let seed = LevelSet::from_vertices(vertices.iter().map(|&(p, i)| VertexId::new(p, i)));
    closure(d, &seed, &opts()).expect("closure stabilizes on corpus diagrams")
}

#[test]
fn closure_of_empty_seed_is_empty() {
    for d in [car(), b3(), cgrow()] {
        let c = closure(&d, &LevelSet::empty(), &opts()).unwrap();
        assert!(c.is_empty_set());
    }
}

#[test]
fn car_any_vertex_generates_everything() {
    let d = car();
    for seed in [(0, 0), (1, 0), (3, 0)] {
        let c = close(&d, &[seed]);
        assert!(c.is_full(&d), "seed {seed:?}");
    }
}

#[test]
fn cgrow_m_column_is_an_ideal() {
    let d = cgrow();
    let m_col = close(&d, &[(2, 1)]);
    assert!(!m_col.is_full(&d));
    // every level contains exactly the M vertex
    for p in 0..6 {
        assert!(m_col.contains(p, 1), "level {p}");
        assert!(!m_col.contains(p, 0), "level {p}");
    }
    // the C vertex generates everything
    let full = close(&d, &[(1, 0)]);
    assert!(full.is_full(&d));
}

#[test]
fn cgrow_m_column_seeded_high_pulls_down() {
    let d = cgrow();
    let from_high = close(&d, &[(5, 1)]);
    let from_low = close(&d, &[(0, 1)]);
    assert_eq!(from_high, from_low);
}

#[test]
fn b3_columns_are_independent() {
    let d = b3();
    let col0 = close(&d, &[(1, 0)]);
    let col1 = close(&d, &[(1, 1)]);
    assert_ne!(col0, col1);
    for p in 0..4 {
        assert!(col0.contains(p, 0));
        assert!(!col0.contains(p, 1));
        assert!(!col0.contains(p, 2));
    }
    let joined = ideal::join(&d, &col0, &col1, &opts()).unwrap();
    assert!(!joined.is_full(&d));
    assert!(col0.subset_of(&joined, &d));
    assert!(col1.subset_of(&joined, &d));
}

#[test]
fn is_ideal_set_examples() {
    let d = b3();
    assert!(is_ideal_set(&d, &LevelSet::empty()).unwrap());
    assert!(is_ideal_set(&d, &LevelSet::full(&d)).unwrap());
    let col = close(&d, &[(0, 0)]);
    assert!(is_ideal_set(&d, col.as_level_set()).unwrap());
    // one column missing a single vertex fails directedness
    let mut broken = col.as_level_set().clone();
    let holed = broken.difference(
        &LevelSet::from_vertices([VertexId::new(2, 0)]),
        &d,
    );
    broken = holed;
    assert!(!is_ideal_set(&d, &broken).unwrap());
}

#[test]
fn closure_rejects_out_of_range_seed() {
    let d = car();
    let seed = LevelSet::from_vertices([VertexId::new(0, 5)]);
    assert!(closure(&d, &seed, &opts()).is_err());
}

#[test]
fn enumerate_car() {
    let d = car();
    let e = enumerate_ideals(&d, 1, 64, &opts()).unwrap();
    assert_eq!(e.ideals.len(), 2);
    assert!(e.complete);
    assert!(!e.hit_cap);
    assert!(e.ideals[0].is_empty_set());
    assert!(e.ideals[1].is_full(&d));
}

#[test]
fn enumerate_b3_gives_all_column_unions() {
    let d = b3();
    let e = enumerate_ideals(&d, 1, 64, &opts()).unwrap();
    assert_eq!(e.ideals.len(), 8);
    assert!(e.complete);
}

#[test]
fn enumerate_cgrow_gives_three() {
    let d = cgrow();
    let e = enumerate_ideals(&d, 1, 64, &opts()).unwrap();
    assert_eq!(e.ideals.len(), 3);
    assert!(e.complete);
}

#[test]
fn enumeration_is_canonically_ordered_and_deterministic() {
    let d = b3();
    let a = enumerate_ideals(&d, 1, 64, &opts()).unwrap();
    let b = enumerate_ideals(&d, 2, 64, &opts()).unwrap();
    assert_eq!(a.ideals, b.ideals);
    for w in a.ideals.windows(2) {
        assert_eq!(w[0].cmp_levelwise(&w[1]), std::cmp::Ordering::Less);
    }
}

#[test]
fn enumeration_cap_flags_incomplete() {
    let d = b3();
    let e = enumerate_ideals(&d, 1, 4, &opts()).unwrap();
    assert!(e.hit_cap);
    assert!(!e.complete);
    assert_eq!(e.ideals.len(), 4);
}

#[test]
fn characters_car_full_is_zero() {
    let d = car();
    let r = characters(&d, &IdealSet::full(&d)).unwrap();
    assert_eq!(r.count, CharacterCount::Finite(0));
}

#[test]
fn characters_cgrow_full_is_one_c_column() {
    let d = cgrow();
    let r = characters(&d, &IdealSet::full(&d)).unwrap();
    assert_eq!(r.count, CharacterCount::Finite(1));
    let w = &r.witnesses[0];
    assert_eq!(w.start, VertexId::new(0, 0));
    assert!(w.cycle_indices.iter().all(|&i| i == 0));
    // maximal path: extends back to level 0 through C vertices only
    assert!(w.prefix_indices.iter().all(|&i| i == 0));
}

#[test]
fn characters_b3_full_is_zero() {
    let d = b3();
    let r = characters(&d, &IdealSet::full(&d)).unwrap();
    assert_eq!(r.count, CharacterCount::Finite(0));
}

#[test]
fn characters_error_on_truncation() {
    let d = car().unroll(4).unwrap();
    assert!(characters(&d, &IdealSet::full(&d)).is_err());
}

#[test]
fn characters_of_m_column_is_zero() {
    let d = cgrow();
    let m_col = close(&d, &[(0, 1)]);
    let r = characters(&d, &m_col).unwrap();
    assert_eq!(r.count, CharacterCount::Finite(0));
}

#[test]
fn alternating_dim1_diagram_has_two_characters() {
    // two dimension-1 vertices swapped by the edges: two distinct maximal
    // infinite paths of 1s
    let d = BratteliDiagram::new(
        vec![vec![1, 1]],
        vec![vec![
            Edge { source: 0, target: 1, multiplicity: 1 },
            Edge { source: 1, target: 0, multiplicity: 1 },
        ]],
        Some(PeriodicTail { start_level: 0, period: 1 }),
    )
    .unwrap();
    assert!(d.validate().is_valid());
    let r = characters(&d, &IdealSet::full(&d)).unwrap();
    assert_eq!(r.count, CharacterCount::Finite(2));
}

#[test]
fn perfectness_golden() {
    let d = car();
    assert!(is_perfect(&d, &IdealSet::full(&d), &opts()).unwrap());
    assert!(is_perfect(&d, &IdealSet::empty(), &opts()).unwrap());

    let d = cgrow();
    assert!(!is_perfect(&d, &IdealSet::full(&d), &opts()).unwrap());
    let m_col = close(&d, &[(0, 1)]);
    assert!(is_perfect(&d, &m_col, &opts()).unwrap());
}

#[test]
fn largest_perfect_golden() {
    let d = cgrow();
    let lp = largest_perfect(&d, &IdealSet::full(&d), &opts()).unwrap();
    let m_col = close(&d, &[(0, 1)]);
    assert_eq!(lp, m_col);
    // idempotent on perfect ideals
    let again = largest_perfect(&d, &lp, &opts()).unwrap();
    assert_eq!(again, lp);

    let d = car();
    let lp = largest_perfect(&d, &IdealSet::full(&d), &opts()).unwrap();
    assert!(lp.is_full(&d));
}

#[test]
fn largest_perfect_of_all_ones_column_is_empty() {
    let d = BratteliDiagram::new(
        vec![vec![1]],
        vec![vec![Edge { source: 0, target: 0, multiplicity: 1 }]],
        Some(PeriodicTail { start_level: 0, period: 1 }),
    )
    .unwrap();
    let lp = largest_perfect(&d, &IdealSet::full(&d), &opts()).unwrap();
    assert!(lp.is_empty_set());
    assert!(!is_perfect(&d, &IdealSet::full(&d), &opts()).unwrap());
}

#[test]
fn normal_subgroups_golden() {
    let (ns, _) = normal_subgroups(&car(), 1, 64, &opts()).unwrap();
    assert_eq!(ns.len(), 2);
    assert_eq!(ns[0].label, SubgroupLabel::Trivial);
    assert_eq!(ns[1].label, SubgroupLabel::Full);

    let (ns, _) = normal_subgroups(&b3(), 1, 64, &opts()).unwrap();
    assert_eq!(ns.len(), 8);

    let (ns, _) = normal_subgroups(&cgrow(), 1, 64, &opts()).unwrap();
    assert_eq!(ns.len(), 2);
    assert_eq!(ns[0].label, SubgroupLabel::Trivial);
    assert_eq!(ns[1].label, SubgroupLabel::Proper);
}

#[test]
fn simplicity_golden() {
    let r = simplicity_report(&car(), 1, 64, &opts()).unwrap();
    assert!(r.condition_holds);
    assert!(r.conclusive);

    let r = simplicity_report(&b3(), 1, 64, &opts()).unwrap();
    assert!(!r.condition_holds);
    assert!(r.conclusive);
    assert_eq!(r.perfect_count, 8);

    let r = simplicity_report(&cgrow(), 1, 64, &opts()).unwrap();
    assert!(r.condition_holds);
    assert!(r.conclusive);
    assert_eq!(r.perfect_count, 2);
}

#[test]
fn quotient_b3_by_column_leaves_two_columns() {
    let d = b3();
    let col0 = close(&d, &[(0, 0)]);
    let q = ideal::quotient_diagram(&d, &col0).unwrap();
    assert!(q.validate().is_valid());
    assert_eq!(q.vertex_count(0).unwrap(), 2);
    let e = enumerate_ideals(&q, 2, 64, &opts()).unwrap();
    assert_eq!(e.ideals.len(), 4);
    // exactly two minimal nonzero ideals (the two remaining columns)
    let minimal: Vec<_> = e
        .ideals
        .iter()
        .filter(|i| !i.is_empty_set())
        .filter(|i| {
            e.ideals
                .iter()
                .filter(|j| !j.is_empty_set() && j != i)
                .all(|j| !j.subset_of(i, &q))
        })
        .collect();
    assert_eq!(minimal.len(), 2);
}

#[test]
fn quotient_by_empty_and_full() {
    let d = cgrow();
    let q = ideal::quotient_diagram(&d, &IdealSet::empty()).unwrap();
    assert_eq!(q, d);
    let q = ideal::quotient_diagram(&d, &IdealSet::full(&d)).unwrap();
    assert!(q.is_empty());
}

#[test]
fn restrict_golden() {
    let d = cgrow();
    let m_col = close(&d, &[(0, 1)]);
    let r = ideal::restrict_diagram(&d, &m_col).unwrap();
    assert_eq!(r.vertex_count(0).unwrap(), 1);
    // single column with multiplicity-2 edges
    assert_eq!(
        r.edge_block(0).unwrap(),
        &[Edge { source: 0, target: 0, multiplicity: 2 }]
    );
    let full = ideal::restrict_diagram(&d, &IdealSet::full(&d)).unwrap();
    assert_eq!(full, d);
    let empty = ideal::restrict_diagram(&d, &IdealSet::empty()).unwrap();
    assert!(empty.is_empty());
}

#[test]
fn truncated_closure_and_heredity_semantics() {
    // on a truncation the top level is free: ideals correspond to subsets of
    // the top blocks
    let d = car().unroll(4).unwrap();
    let e = enumerate_ideals(&d, 3, 64, &opts()).unwrap();
    assert_eq!(e.ideals.len(), 2);
    assert!(e.complete);

    let d3 = b3().unroll(3).unwrap();
    let e = enumerate_ideals(&d3, 2, 512, &opts()).unwrap();
    assert_eq!(e.ideals.len(), 8);
}

#[test]
fn largest_perfect_on_truncation() {
    let d = cgrow().unroll(5).unwrap();
    let lp = largest_perfect(&d, &IdealSet::full(&d), &opts()).unwrap();
    // the M column at every level (M has dimension 1 at level 0 but is
    // pulled in by heredity)
    for p in 0..5 {
        assert!(lp.contains(p, 1), "level {p}");
        assert!(!lp.contains(p, 0), "level {p}");
    }
}

#[test]
fn cross_check_fires_on_inconsistent_presentation() {
    // Vertex 1 has dimension 1 and no outgoing edge, which no valid unital
    // diagram allows. The character oracle sees no dimension-1 cycle, but the
    // closure of the dim>=2 part can never pull the stranded vertex in, so
    // the two perfectness criteria disagree and the diagnostic must fire.
    let d = BratteliDiagram::new(
        vec![vec![2, 1]],
        vec![vec![
            Edge { source: 0, target: 0, multiplicity: 2 },
            Edge { source: 0, target: 1, multiplicity: 1 },
        ]],
        Some(PeriodicTail { start_level: 0, period: 1 }),
    )
    .unwrap();
    assert!(!d.validate().is_valid());
    let err = is_perfect(&d, &IdealSet::full(&d), &opts()).unwrap_err();
    match err {
        bratteli_core::analysis::AnalysisError::CrossCheck(r) => {
            assert!(r.character_oracle);
            assert!(!r.closure_criterion);
        }
        other => panic!("expected a cross-check diagnostic, got {other:?}"),
    }
}
