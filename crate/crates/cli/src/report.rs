use mintwist::CheckItem;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub model: String,
    pub items: Vec<CheckItem>,
    /// Computed quantities that are not pass/fail (dimensions, matrices).
    #[serde(skip_serializing_if = "Map::is_empty")]
    pub data: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, model: &str) -> Self {
        Self { command: command.into(), model: model.into(), items: Vec::new(), data: Map::new() }
    }

    pub fn push(&mut self, item: CheckItem) {
        self.items.push(item);
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        self.data.insert(key.into(), serde_json::to_value(value).expect("serializable"));
    }

    pub fn pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn exit_code(&self) -> u8 {
        if self.pass() { 0 } else { 1 }
    }

    pub fn to_json(&self) -> String {
        // serde_json's map is ordered by key, so this is canonical.
        let value = serde_json::to_value(self).expect("serializable");
        serde_json::to_string(&value).expect("serializable")
    }

    pub fn to_human(&self) -> String {
        let mut out = format!("{} {}\n", self.command, self.model);
        let width = self.items.iter().map(|i| i.name.len()).max().unwrap_or(0);
        for i in &self.items {
            let tag = if i.pass { "PASS" } else { "FAIL" };
            out += &format!("  [{tag}] {:<width$}  residual {:.3e}  {}\n", i.name, i.residual, i.anchor);
        }
        for (k, v) in &self.data {
            match v {
                Value::Array(rows) if rows.first().is_some_and(|r| r.is_array() || r.is_object()) => {
                    out += &format!("  {k}:\n");
                    for row in rows {
                        out += &format!("    {row}\n");
                    }
                }
                _ => out += &format!("  {k}: {v}\n"),
            }
        }
        let passed = self.items.iter().filter(|i| i.pass).count();
        out += &format!("{} ({passed}/{} items)\n", if self.pass() { "PASS" } else { "FAIL" }, self.items.len());
        out
    }
}
