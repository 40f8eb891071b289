use serde_json::{json, Value};
use superharmonic::branching::{branch_generalized, branch_harmonic};
use superharmonic::gtbasis::{verify_with, GtBuilder};
use superharmonic::harmonics::{fischer_decomposition, SpaceKind};
use superharmonic::Rational;

use crate::{render, Outcome, RunConfig, UsageError};

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

pub fn fischer(cfg: &RunConfig) -> Outcome {
    let mut text = String::new();
    let mut reports = Vec::new();
    let mut verified = true;
    for &k in &cfg.degrees {
        let r = fischer_decomposition::<Rational>(cfg.signature, k);
        text.push_str(&render::decomposition(&r));
        verified &= r.verified;
        reports.push(to_json(&r));
    }
    Outcome {
        text,
        json: json!({ "reports": reports }),
        verified,
    }
}

pub fn branch(cfg: &RunConfig, generalized: bool) -> Result<Outcome, UsageError> {
    let mut text = String::new();
    let mut reports = Vec::new();
    let mut verified = true;
    for &k in &cfg.degrees {
        let r = if generalized {
            branch_generalized::<Rational>(cfg.signature, k)
        } else {
            branch_harmonic::<Rational>(cfg.signature, k)
        }
        .map_err(|e| UsageError(e.to_string()))?;
        text.push_str(&render::branching(&r));
        verified &= r.verified;
        reports.push(to_json(&r));
    }
    Ok(Outcome {
        text,
        json: json!({ "reports": reports }),
        verified,
    })
}

pub fn gt_basis(cfg: &RunConfig, target: SpaceKind) -> Outcome {
    let k = cfg.degrees[0];
    let builder = GtBuilder::<Rational>::new();
    let check = verify_with(&builder, cfg.signature, k, target);
    let basis = builder.basis(cfg.signature, k, check.target);
    let mut text = String::new();
    let mut elements = Vec::new();
    for e in basis.iter() {
        text.push_str(&format!("{}\t{}\n", e.label, e.polynomial));
        elements.push(json!({
            "label": to_json(&e.label),
            "label_text": e.label.to_string(),
            "polynomial": e.polynomial.to_string(),
        }));
    }
    if !check.verified {
        eprintln!(
            "basis failed verification: {}",
            check
                .failure_witness
                .as_deref()
                .unwrap_or("see --format json")
        );
    }
    for (n, d) in &check.direct_kernel {
        eprintln!(
            "note: degree {d} on R^{{0|{}}} taken as a direct kernel basis",
            2 * n
        );
    }
    Outcome {
        text,
        json: json!({
            "k": k,
            "requested_target": to_json(&target),
            "target": to_json(&check.target),
            "elements": elements,
            "verification": to_json(&check),
        }),
        verified: check.verified,
    }
}
