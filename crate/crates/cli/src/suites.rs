//! Verification suites behind `superharmonic verify`.
//!
//! Properties run in a fixed order and stop at the first failure, whose
//! witness is reported.

use std::fmt::Write;

use serde::Serialize;
use serde_json::json;
use superharmonic::branching::{
    branch_classical, branch_generalized, branch_harmonic, branch_harmonic_deep_check,
};
use superharmonic::ck::{ck_data, ck_extend, ck_extend_recursive};
use superharmonic::gtbasis::{verify_with, GtBuilder};
use superharmonic::harmonics::{
    exceptional_indices, fischer_decomposition, is_exceptional, verify_composition_series,
    SpaceKind,
};
use superharmonic::operators::{check_sl2, invariance_check, Sl2Relation};
use superharmonic::superpoly::{monomial_basis, monomial_count};
use superharmonic::{Poly, Rational, SuperSignature};

use crate::{Outcome, RunConfig, Suite};

/// Above this many monomials the osp(m−1|2n) stability check of the
/// branching suite is skipped.
const DEEP_CHECK_LIMIT: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyResult {
    pub suite: Suite,
    pub k: usize,
    pub property: String,
    pub status: Status,
    pub detail: Option<String>,
}

struct Runner {
    results: Vec<PropertyResult>,
    failed: bool,
}

impl Runner {
    fn record(
        &mut self,
        suite: Suite,
        k: usize,
        property: impl Into<String>,
        passed: bool,
        detail: Option<String>,
    ) {
        let status = if passed { Status::Pass } else { Status::Fail };
        self.failed |= !passed;
        self.results.push(PropertyResult {
            suite,
            k,
            property: property.into(),
            status,
            detail,
        });
    }

    fn skip(
        &mut self,
        suite: Suite,
        k: usize,
        property: impl Into<String>,
        why: impl Into<String>,
    ) {
        self.results.push(PropertyResult {
            suite,
            k,
            property: property.into(),
            status: Status::Skip,
            detail: Some(why.into()),
        });
    }
}

const ORDER: [Suite; 7] = [
    Suite::Sl2,
    Suite::Osp,
    Suite::Fischer,
    Suite::TheoremA,
    Suite::Ck,
    Suite::Branching,
    Suite::Gt,
];

pub fn run(cfg: &RunConfig, suite: Suite) -> Outcome {
    let suites: Vec<Suite> = if suite == Suite::All {
        ORDER.to_vec()
    } else {
        vec![suite]
    };
    let mut runner = Runner {
        results: Vec::new(),
        failed: false,
    };
    let builder = GtBuilder::<Rational>::new();
    'outer: for s in suites {
        for &k in &cfg.degrees {
            run_one(&mut runner, &builder, cfg.signature, k, s);
            if runner.failed {
                break 'outer;
            }
        }
    }
    let mut text = String::new();
    for r in &runner.results {
        let tag = match r.status {
            Status::Pass => "ok",
            Status::Fail => "FAIL",
            Status::Skip => "skip",
        };
        let suite = serde_json::to_value(r.suite).expect("serializes");
        write!(
            text,
            "[{tag}] {} k={} {}",
            suite.as_str().unwrap_or(""),
            r.k,
            r.property
        )
        .unwrap();
        if let Some(d) = &r.detail {
            write!(text, " ({d})").unwrap();
        }
        text.push('\n');
    }
    let passed = runner
        .results
        .iter()
        .filter(|r| r.status == Status::Pass)
        .count();
    let skipped = runner
        .results
        .iter()
        .filter(|r| r.status == Status::Skip)
        .count();
    let witness = runner
        .results
        .iter()
        .find(|r| r.status == Status::Fail)
        .cloned();
    if runner.failed {
        writeln!(text, "FAILED after {passed} passing properties").unwrap();
    } else {
        writeln!(text, "all {passed} properties verified, {skipped} skipped").unwrap();
    }
    Outcome {
        text,
        json: json!({
            "suite": suite,
            "degrees": cfg.degrees,
            "results": runner.results,
            "witness": witness,
        }),
        verified: !runner.failed,
    }
}

fn run_one(
    r: &mut Runner,
    builder: &GtBuilder<Rational>,
    sig: SuperSignature,
    k: usize,
    suite: Suite,
) {
    let big_m = sig.superdimension();
    match suite {
        Suite::Sl2 => {
            for rel in Sl2Relation::ALL {
                let v = check_sl2::<Rational>(sig, k, rel);
                r.record(
                    suite,
                    k,
                    rel.to_string(),
                    v.holds,
                    v.witness.map(|w| format!("fails on {w}")),
                );
            }
        }
        Suite::Osp => {
            let v = invariance_check::<Rational>(sig, k);
            let detail = v
                .witness
                .map(|(a, b, op, mono)| format!("L_{a}{b} against {op} on {mono}"));
            r.record(
                suite,
                k,
                format!("{} generators commute with Δ, R², 𝔼", v.generators),
                v.holds,
                detail,
            );
        }
        Suite::Fischer => {
            let rep = fischer_decomposition::<Rational>(sig, k);
            let parts: Vec<String> = rep.summands.iter().map(|s| s.describe()).collect();
            r.record(
                suite,
                k,
                format!(
                    "P_k = {}",
                    if parts.is_empty() {
                        "0".into()
                    } else {
                        parts.join(" + ")
                    }
                ),
                rep.verified,
                rep.failure_witness,
            );
        }
        Suite::TheoremA => {
            let rep = verify_composition_series::<Rational>(sig, k);
            for c in rep.checks {
                if sig.m() == 0 && rep.exceptional_degree {
                    let literal = if c.passed { "holds" } else { "fails" };
                    r.skip(
                        suite,
                        k,
                        c.name,
                        format!("stated for m >= 1; literally {literal} at m = 0"),
                    );
                } else {
                    r.record(suite, k, c.name, c.passed, None);
                }
            }
        }
        Suite::Ck => {
            if sig.m() == 0 {
                r.skip(suite, k, "CK round trip", "no commuting variable");
                return;
            }
            let mut witness = None;
            for mono in monomial_basis(&sig, k) {
                let q = Poly::monomial(sig, mono.clone());
                let d = ck_data(&q, k).expect("homogeneous");
                if ck_extend(&d) != q || ck_extend_recursive(&d) != q {
                    witness = Some(format!("fails on {mono}"));
                    break;
                }
            }
            r.record(
                suite,
                k,
                format!(
                    "CK round trip on {} monomials, both routes",
                    monomial_count(&sig, k)
                ),
                witness.is_none(),
                witness,
            );
        }
        Suite::Branching => {
            if sig.m() == 0 {
                r.skip(suite, k, "branching", "no commuting variable");
                return;
            }
            let rep = branch_harmonic::<Rational>(sig, k).expect("m >= 1");
            for c in &rep.checks {
                r.record(suite, k, format!("H_k: {}", c.name), c.passed, None);
            }
            if !is_exceptional(big_m - 1) {
                let classical = branch_classical::<Rational>(sig, k).expect("preconditions hold");
                r.record(
                    suite,
                    k,
                    "H_k: agrees with the classical law",
                    classical.verified && classical.summands == rep.summands,
                    None,
                );
            }
            if exceptional_indices(big_m).contains(&k) {
                let g = branch_generalized::<Rational>(sig, k).expect("preconditions hold");
                for c in &g.checks {
                    r.record(suite, k, format!("H~_k: {}", c.name), c.passed, None);
                }
            }
            if monomial_count(&sig, k) <= DEEP_CHECK_LIMIT {
                for c in branch_harmonic_deep_check::<Rational>(sig, k).expect("m >= 1") {
                    r.record(suite, k, c.name, c.passed, None);
                }
            } else {
                r.skip(
                    suite,
                    k,
                    "osp(m-1|2n) stability of CK images",
                    format!("dim P_k > {DEEP_CHECK_LIMIT}"),
                );
            }
        }
        Suite::Gt => {
            let mut targets = vec![SpaceKind::Harmonic];
            if exceptional_indices(big_m).contains(&k) {
                targets.push(SpaceKind::Generalized);
            }
            for t in targets {
                let v = verify_with(builder, sig, k, t);
                let mut detail = v.failure_witness.clone();
                if !v.direct_kernel.is_empty() && detail.is_none() {
                    detail = Some(format!(
                        "direct kernel bases at (n, degree) {:?}",
                        v.direct_kernel
                    ));
                }
                r.record(
                    suite,
                    k,
                    format!("GT basis of {}_k: {} elements", t.symbol(), v.size),
                    v.verified,
                    detail,
                );
            }
        }
        Suite::All => unreachable!("expanded by the caller"),
    }
}
