//! Result container and the CSV / JSON writers.
//!
//! Identical configurations must produce byte-identical files, so every
//! value written here is a pure function of the configuration (floats are
//! printed with the shortest round-trip representation, map keys are
//! sorted, and nothing time-dependent is serialized).

use serde_json::{json, Map, Value};

use crate::config::{ExperimentConfig, SCHEMA};

/// Rows plus an ordered summary for one experiment run.
#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    pub summary: Map<String, Value>,
}

impl ExperimentResult {
    /// CSV: header row, one row per trial, then the summary as trailing
    /// comment lines prefixed `#`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let mut first = true;
            for cell in row {
                if !first {
                    out.push(',');
                }
                out.push_str(&csv_cell(cell));
                first = false;
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "# schema={SCHEMA}\n# config={}\n",
            serde_json::to_string(&self.config).expect("config serializes")
        ));
        for (key, value) in &self.summary {
            out.push_str(&format!("# {key}={}\n", compact(value)));
        }
        out
    }

    /// JSON: `{schema, config, trials, summary}` with per-trial objects.
    pub fn to_json(&self) -> String {
        let trials: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (name, cell) in self.columns.iter().zip(row) {
                    obj.insert((*name).to_string(), cell.clone());
                }
                Value::Object(obj)
            })
            .collect();
        let doc = json!({
            "schema": SCHEMA,
            "config": self.config,
            "trials": trials,
            "summary": Value::Object(self.summary.clone()),
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("result serializes");
        text.push('\n');
        text
    }

    pub fn render(&self) -> String {
        match self.config.format {
            crate::config::OutputFormat::Csv => self.to_csv(),
            crate::config::OutputFormat::Json => self.to_json(),
        }
    }
}

fn compact(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        other => serde_json::to_string(other).expect("value serializes"),
    }
}

fn csv_cell(value: &Value) -> String {
    let raw = compact(value);
    if raw.contains(',') || raw.contains('"') || raw.contains('\n') {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ExperimentConfig, Kind};

    fn sample() -> ExperimentResult {
        let mut summary = Map::new();
        summary.insert("count".into(), json!(2));
        summary.insert("fraction".into(), json!(0.5));
        ExperimentResult {
            config: ExperimentConfig::new(Kind::Universality, 3).with_n(8),
            columns: vec!["trial", "seed", "pattern", "ok"],
            rows: vec![
                vec![json!(0), json!(11), json!("1,2,3"), json!(true)],
                vec![json!(1), json!(12), json!("2,1,3"), json!(false)],
            ],
            summary,
        }
    }

    #[test]
    fn csv_quotes_commas_and_appends_summary() {
        let text = sample().to_csv();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "trial,seed,pattern,ok");
        assert_eq!(lines.next().unwrap(), "0,11,\"1,2,3\",true");
        assert!(text.contains("# count=2"));
        assert!(text.contains("# fraction=0.5"));
        assert!(text.contains("# schema=explab/1"));
    }

    #[test]
    fn json_shape() {
        let text = sample().to_json();
        let doc: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(doc["schema"], "explab/1");
        assert_eq!(doc["trials"][1]["pattern"], "2,1,3");
        assert_eq!(doc["summary"]["count"], 2);
    }

    #[test]
    fn rendering_is_reproducible() {
        assert_eq!(sample().to_csv(), sample().to_csv());
        assert_eq!(sample().to_json(), sample().to_json());
    }
}
