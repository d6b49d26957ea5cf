//! One JSON line per command.

use serde::Serialize;
use serde_json::{json, Value};
use spcalc_core::category::Category;
use spcalc_core::presheaf::{SmallPresheaf, Verdict, Witness};
use spcalc_core::Bounds;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Body {
    Certificate(Value),
    Witness(Value),
}

/// Field order is the wire order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub cmd: String,
    pub verdict: String,
    #[serde(flatten)]
    pub body: Body,
    pub bounds: Bounds,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
    /// Whether the command's property held; drives the exit code.
    #[serde(skip)]
    pub ok: bool,
}

impl Record {
    pub fn new(cmd: impl Into<String>, verdict: impl Into<String>, body: Body, bounds: &Bounds) -> Record {
        Record { cmd: cmd.into(), verdict: verdict.into(), body, bounds: *bounds, seed: bounds.seed, wall_ms: None, ok: true }
    }

    pub fn failing(mut self, failed: bool) -> Record {
        self.ok = !failed;
        self
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }

    /// The line without timing, for replay comparisons.
    pub fn payload(&self) -> String {
        Record { wall_ms: None, ..self.clone() }.to_line()
    }
}

pub fn sizes(v: &spcalc_core::base::BaseObject) -> Value {
    if v.sorts() == 1 {
        json!(v.size(0))
    } else {
        json!(v.sizes())
    }
}

pub fn presheaf(f: &SmallPresheaf) -> Value {
    let k = f.ambient();
    let support: Vec<String> = f.support().iter().map(|&a| k.object_name(a)).collect();
    let values: Vec<Value> = f.values().iter().map(sizes).collect();
    json!({ "ambient": k.name(), "support": support, "values": values })
}

pub fn witness(k: &Category, w: &Witness) -> Value {
    json!({
        "family": w.family,
        "decision": format!("{:?}", w.decision),
        "object": k.object_name(w.object),
        "value": w.value,
        "reason": w.reason,
    })
}

/// `(label, body)` for a smallness verdict on a presheaf over `k`.
pub fn verdict(k: &Category, v: &Verdict) -> (String, Body) {
    let body = match v {
        Verdict::Small { certificate, probes } => {
            let mut c = presheaf(certificate);
            c["probes"] = json!(probes.iter().map(|&a| k.object_name(a)).collect::<Vec<_>>());
            Body::Certificate(c)
        }
        Verdict::NotSmall { witness: w } => Body::Witness(witness(k, w)),
        Verdict::Unknown { bounds, reason } => Body::Witness(json!({ "reason": reason, "bounds": bounds })),
    };
    (v.label().to_string(), body)
}
