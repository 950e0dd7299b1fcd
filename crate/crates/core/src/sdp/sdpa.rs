//! Writer for the sparse SDPA text format (`.dat-s`).
//!
//! The relaxation becomes the SDPA dual-form problem
//! `max ⟨F0, Y⟩ s.t. ⟨Fi, Y⟩ = ci, Y ⪰ 0` with `Y = diag(X, D)`: block 1 is
//! the matrix variable, block 2 a diagonal block holding one slack per
//! row-sum inequality followed by one surplus `s_ij = X_ij ≥ 0` per
//! off-diagonal pair `i < j`. Constraint order: block traces, row sums,
//! pairwise nonnegativity. Numbers use Rust's shortest round-trip format, so
//! output is byte-stable.

use std::fmt::Write as _;
use std::io::Write;

use crate::error::Result;
use crate::sdp::problem::{SdpProblem, Variant};

struct Entry {
    mat: usize,
    block: usize,
    i: usize,
    j: usize,
    value: f64,
}

/// Renders the problem as an SDPA sparse document.
pub fn to_sdpa_string(problem: &SdpProblem) -> String {
    let n = problem.dim();
    let rows: usize = problem.blocks().iter().map(|b| b.len()).sum();
    let pairs = n * n.saturating_sub(1) / 2;
    let diag_len = rows + pairs;

    let mut rhs = Vec::new();
    let mut entries = Vec::new();
    let cost = problem.cost();
    for i in 0..n {
        for j in i..n {
            let c = cost[(i, j)];
            if c != 0.0 {
                entries.push(Entry { mat: 0, block: 1, i, j, value: c });
            }
        }
    }
    let mut mat = 0;
    for b in problem.blocks() {
        mat += 1;
        rhs.push(problem.k() as f64);
        for i in b.clone() {
            entries.push(Entry { mat, block: 1, i, j: i, value: 1.0 });
        }
    }
    let mut slack = 0;
    for b in problem.blocks() {
        for i in b.clone() {
            mat += 1;
            rhs.push(1.0);
            for j in b.clone() {
                let (lo, hi) = (i.min(j), i.max(j));
                let value = if i == j { 1.0 } else { 0.5 };
                entries.push(Entry { mat, block: 1, i: lo, j: hi, value });
            }
            entries.push(Entry { mat, block: 2, i: slack, j: slack, value: 1.0 });
            slack += 1;
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            mat += 1;
            rhs.push(0.0);
            entries.push(Entry { mat, block: 1, i, j, value: 0.5 });
            entries.push(Entry { mat, block: 2, i: slack, j: slack, value: -1.0 });
            slack += 1;
        }
    }
    entries.sort_by_key(|e| (e.mat, e.block, e.i, e.j));

    let label = match problem.variant() {
        Variant::Clique => "densest k-disjoint-clique relaxation",
        Variant::Biclique => "densest k-disjoint-biclique relaxation",
    };
    let mut out = String::new();
    let _ = writeln!(out, "\"{label}, dim={n}, k={}", problem.k());
    let _ = writeln!(out, "{mat}");
    let _ = writeln!(out, "2");
    let _ = writeln!(out, "{n} -{diag_len}");
    let rhs_text: Vec<String> = rhs.iter().map(|v| format!("{v}")).collect();
    let _ = writeln!(out, "{}", rhs_text.join(" "));
    for e in &entries {
        let _ = writeln!(out, "{} {} {} {} {}", e.mat, e.block, e.i + 1, e.j + 1, e.value);
    }
    out
}

/// Writes [`to_sdpa_string`] to `dest`.
pub fn export_sdpa<W: Write>(problem: &SdpProblem, mut dest: W) -> Result<()> {
    dest.write_all(to_sdpa_string(problem).as_bytes())?;
    dest.flush()?;
    Ok(())
}
