//! Graphviz export of the bipartite map.
//!
//! One black node per cycle of `σx` and one white node per cycle of `σy`,
//! fixed points included; edge `i` joins the cycles containing `i`.

use std::fmt::Write;

use dessin_core::dessin::Dessin;

pub fn export_dot(d: &Dessin) -> String {
    let n = d.degree();
    let owner = |cycles: &[Vec<usize>]| {
        let mut of = vec![0; n];
        for (k, c) in cycles.iter().enumerate() {
            for &p in c {
                of[p - 1] = k + 1;
            }
        }
        of
    };
    let black = d.sigma_x().all_cycles();
    let white = d.sigma_y().all_cycles();
    let (bo, wo) = (owner(&black), owner(&white));
    let mut out = String::new();
    let name = d.name().unwrap_or("dessin").replace('"', "'");
    writeln!(out, "graph \"{name}\" {{").unwrap();
    writeln!(out, "  node [shape=circle, label=\"\", width=0.2];").unwrap();
    for (k, c) in black.iter().enumerate() {
        writeln!(
            out,
            "  b{} [style=filled, fillcolor=black, tooltip=\"{:?}\"];",
            k + 1,
            c
        )
        .unwrap();
    }
    for (k, c) in white.iter().enumerate() {
        writeln!(
            out,
            "  w{} [style=filled, fillcolor=white, tooltip=\"{:?}\"];",
            k + 1,
            c
        )
        .unwrap();
    }
    for i in 1..=n {
        writeln!(out, "  b{} -- w{} [label=\"{i}\"];", bo[i - 1], wo[i - 1]).unwrap();
    }
    out.push_str("}\n");
    out
}
