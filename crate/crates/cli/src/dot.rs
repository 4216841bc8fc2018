//! DOT export of a diagram window: ideal members filled, dimension-1
//! vertices drawn as double circles, multiplicities as edge labels.

use bratteli_core::{BratteliDiagram, IdealSet};

pub fn to_dot(d: &BratteliDiagram, s: Option<&IdealSet>) -> Result<String, String> {
    let depth = if d.is_periodic() {
        d.prefix_len() + 2 * d.period()
    } else {
        d.stored_levels()
    };
    let dims = d.dims_window(depth).map_err(|e| e.to_string())?;
    let mut out = String::new();
    out.push_str("digraph bratteli {\n");
    out.push_str("  rankdir=TB;\n");
    out.push_str("  node [fontsize=10];\n");
    if let Some(t) = d.periodic_tail() {
        out.push_str(&format!(
            "  // periodic from level {} with period {}; window shows {} levels\n",
            t.start_level, t.period, depth
        ));
    }
    for (p, level_dims) in dims.iter().enumerate() {
        out.push_str(&format!("  {{ rank=same;"));
        for (i, &dim) in level_dims.iter().enumerate() {
            let shape = if dim == 1 { "doublecircle" } else { "circle" };
            let filled = s.is_some_and(|s| s.contains(p, i));
            let style = if filled { ", style=filled, fillcolor=lightblue" } else { "" };
            out.push_str(&format!(
                " v{p}_{i} [label=\"{p}:{i}\\nd={dim}\", shape={shape}{style}];"
            ));
        }
        out.push_str(" }\n");
    }
    for p in 0..depth.saturating_sub(1) {
        let block = d.edge_block(p).expect("transition inside the window");
        for e in block {
            out.push_str(&format!(
                "  v{p}_{} -> v{}_{} [label=\"{}\"];\n",
                e.source,
                p + 1,
                e.target,
                e.multiplicity
            ));
        }
    }
    out.push_str("}\n");
    Ok(out)
}
