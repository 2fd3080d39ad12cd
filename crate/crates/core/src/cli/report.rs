use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::finab::{AbHom, FinAbGroup};
use crate::ringmod::{FinModule, ModHom};
use crate::sheafside::NamedCheck;

use super::document::{side_name, Kind};

/// One verdict. Failed checks always carry a witness.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

/// The outcome of one subcommand on one instance.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub kind: Kind,
    pub seed: u64,
    pub degree_cap: usize,
    pub holds: bool,
    /// Sorted by name.
    pub checks: Vec<CheckRecord>,
    pub data: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl Report {
    pub fn new(command: &str, kind: Kind, seed: u64, degree_cap: usize) -> Self {
        Report {
            command: command.to_string(),
            kind,
            seed,
            degree_cap,
            holds: true,
            checks: Vec::new(),
            data: BTreeMap::new(),
            timing_ms: None,
        }
    }

    /// Records a check; `witness` is evaluated only when it fails.
    pub fn check(&mut self, name: impl Into<String>, holds: bool, witness: impl FnOnce() -> Value) {
        self.checks.push(CheckRecord {
            name: name.into(),
            holds,
            witness: (!holds).then(witness),
        });
    }

    /// Records a list of named checks under a common prefix.
    pub fn named(&mut self, prefix: &str, checks: &[NamedCheck]) {
        for c in checks {
            let name = if prefix.is_empty() {
                c.name.clone()
            } else {
                format!("{prefix}/{}", c.name)
            };
            self.check(name, c.holds, || json!({ "location": c.name }));
        }
    }

    pub fn data(&mut self, key: &str, value: impl Serialize) {
        self.data.insert(
            key.to_string(),
            serde_json::to_value(value).expect("report data serializes"),
        );
    }

    /// Sorts checks and computes the overall verdict.
    pub fn finish(mut self) -> Self {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
        self.holds = self.checks.iter().all(|c| c.holds);
        self
    }

    pub fn to_structured(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "sheafdual {} ({}), seed {}, degree cap {}",
            self.command, self.kind, self.seed, self.degree_cap
        );
        for c in &self.checks {
            let _ = writeln!(out, "{} {}", if c.holds { "PASS" } else { "FAIL" }, c.name);
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "     witness: {w}");
            }
        }
        for (k, v) in &self.data {
            let _ = writeln!(out, "{k}: {v}");
        }
        let failed = self.checks.iter().filter(|c| !c.holds).count();
        let _ = writeln!(
            out,
            "result: {} ({} of {} checks failed)",
            if self.holds { "pass" } else { "fail" },
            failed,
            self.checks.len()
        );
        if let Some(t) = self.timing_ms {
            let _ = writeln!(out, "time: {t:.3} ms");
        }
        out
    }
}

pub fn group_value(g: &FinAbGroup) -> Value {
    json!(g.factors())
}

pub fn hom_value(f: &AbHom) -> Value {
    json!({
        "source": f.source().factors(),
        "target": f.target().factors(),
        "matrix": f.matrix().to_rows(),
    })
}

pub fn mod_hom_value(f: &ModHom) -> Value {
    hom_value(f.map())
}

pub fn module_value(m: &FinModule) -> Value {
    json!({
        "group": m.group().factors(),
        "order": m.order(),
        "side": side_name(m.side()),
    })
}
