//! Plain-text renderings of the library reports.

use std::fmt::Write;

use superharmonic::branching::{BranchingMode, BranchingReport};
use superharmonic::harmonics::{Check, DecompositionReport};

pub fn set(items: &[usize]) -> String {
    let inner: Vec<String> = items.iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", inner.join(", "))
}

pub fn checks(out: &mut String, checks: &[Check]) {
    for c in checks {
        let tag = if c.passed { "ok" } else { "FAIL" };
        writeln!(out, "  [{tag}] {}", c.name).unwrap();
    }
}

fn verdict(out: &mut String, verified: bool) {
    writeln!(
        out,
        "  {}",
        if verified { "verified" } else { "NOT VERIFIED" }
    )
    .unwrap();
}

pub fn decomposition(r: &DecompositionReport) -> String {
    let mut out = String::new();
    let rule = format!("{:?}", r.rule).to_lowercase();
    write!(
        out,
        "P_{} on {}, M = {}, {rule} rule",
        r.k, r.signature, r.superdimension
    )
    .unwrap();
    if !r.exceptional_indices.is_empty() {
        write!(out, ", I_M = {}", set(&r.exceptional_indices)).unwrap();
    }
    out.push('\n');
    let s = &r.index_sets;
    writeln!(
        out,
        "  index sets: J~ = {}, J0 = {}, J = {}",
        set(&s.tilde),
        set(&s.suppressed),
        set(&s.ordinary)
    )
    .unwrap();
    let summands: Vec<String> = r
        .summands
        .iter()
        .map(|s| format!("{} (dim {})", s.describe(), s.dim))
        .collect();
    writeln!(
        out,
        "  summands: {}",
        if summands.is_empty() {
            "none".into()
        } else {
            summands.join(" + ")
        }
    )
    .unwrap();
    if !r.suppressed.is_empty() {
        let sup: Vec<String> = r
            .suppressed
            .iter()
            .map(|s| {
                let tag = if s.absorbed {
                    "absorbed"
                } else {
                    "NOT absorbed"
                };
                format!("R^{} H_{} (dim {}, {tag})", s.r_power, s.degree, s.dim)
            })
            .collect();
        writeln!(out, "  suppressed: {}", sup.join(", ")).unwrap();
    }
    writeln!(
        out,
        "  dim P_{} = {}, sum of summands = {}, span = {}",
        r.k, r.ambient_dim, r.total_dim, r.span_dim
    )
    .unwrap();
    if let Some(w) = &r.failure_witness {
        writeln!(out, "  witness: {w}").unwrap();
    }
    for note in &r.notes {
        writeln!(out, "  note: {note}").unwrap();
    }
    verdict(&mut out, r.verified);
    out
}

pub fn branching(r: &BranchingReport) -> String {
    let mut out = String::new();
    let (lhs, mode) = match r.mode {
        BranchingMode::Classical => ("H", "classical"),
        BranchingMode::Harmonic => ("H", "harmonic"),
        BranchingMode::Generalized => ("H~", "generalized"),
    };
    writeln!(
        out,
        "{lhs}_{} on {} restricted to {}, {mode} branching",
        r.k, r.signature, r.hyperplane
    )
    .unwrap();
    if let Some(s) = &r.index_sets {
        writeln!(
            out,
            "  index sets: B~ = {}, B0 = {}, B = {}",
            set(&s.tilde),
            set(&s.suppressed),
            set(&s.ordinary)
        )
        .unwrap();
    }
    let summands: Vec<String> = r
        .summands
        .iter()
        .map(|s| format!("{} (dim {})", s.describe(), s.dim))
        .collect();
    writeln!(out, "  summands: {}", summands.join(" + ")).unwrap();
    writeln!(
        out,
        "  dim {lhs}_{} = {}, sum of summands = {}",
        r.k, r.lhs_dim, r.rhs_dim
    )
    .unwrap();
    checks(&mut out, &r.checks);
    for note in &r.notes {
        writeln!(out, "  note: {note}").unwrap();
    }
    verdict(&mut out, r.verified);
    out
}
