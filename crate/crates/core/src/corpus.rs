//! Small standard diagrams used in documentation and tests.

use crate::diagram::{BratteliDiagram, Edge, PeriodicTail};
use alloc::vec;

/// The CAR diagram: a single column with dimensions `1, 2, 4, 8, …` and one
/// multiplicity-2 edge per step.
pub fn car() -> BratteliDiagram {
    BratteliDiagram::new(
        vec![vec![1], vec![2]],
        vec![
            vec![Edge { source: 0, target: 0, multiplicity: 2 }],
            vec![Edge { source: 0, target: 0, multiplicity: 2 }],
        ],
        Some(PeriodicTail { start_level: 1, period: 1 }),
    )
    .expect("static data")
}

/// Three parallel CAR columns, the diagram of `B ⊕ B ⊕ B` for `B` the CAR
/// algebra.
pub fn b3() -> BratteliDiagram {
    let block = |_p: usize| {
        (0..3)
            .map(|i| Edge { source: i, target: i, multiplicity: 2 })
            .collect::<alloc::vec::Vec<_>>()
    };
    BratteliDiagram::new(
        vec![vec![1, 1, 1], vec![2, 2, 2]],
        vec![block(0), block(1)],
        Some(PeriodicTail { start_level: 1, period: 1 }),
    )
    .expect("static data")
}

/// The `C ⊕ M` diagram: vertex 0 is a constant dimension-1 column, vertex 1 a
/// growing matrix column with `n_{p+1} = 2·n_p + 1` (edges `C→C` and `C→M` of
/// multiplicity 1, `M→M` of multiplicity 2).
pub fn cgrow() -> BratteliDiagram {
    BratteliDiagram::new(
        vec![vec![1, 1]],
        vec![vec![
            Edge { source: 0, target: 0, multiplicity: 1 },
            Edge { source: 0, target: 1, multiplicity: 1 },
            Edge { source: 1, target: 1, multiplicity: 2 },
        ]],
        Some(PeriodicTail { start_level: 0, period: 1 }),
    )
    .expect("static data")
}
