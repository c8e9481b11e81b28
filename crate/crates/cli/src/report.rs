use std::time::Duration;

use serde_json::{Map, Value};

/// Command output: ordered `key: value` lines mirrored as a JSON object.
#[derive(Debug, Default)]
pub struct Report {
    /// Key, value, and whether the line is shown in text mode.
    fields: Vec<(String, Value, bool)>,
    /// Free-form text printed before the fields in text mode.
    body: Option<String>,
    elapsed: Option<Duration>,
    pub code: u8,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.push((key.to_string(), value.into(), true));
        self
    }

    /// A field that only appears in the JSON rendering.
    pub fn json_field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.push((key.to_string(), value.into(), false));
        self
    }

    pub fn body(mut self, text: String) -> Self {
        self.body = Some(text);
        self
    }

    pub fn code(mut self, code: u8) -> Self {
        self.code = code;
        self
    }

    pub fn elapsed(mut self, d: Duration) -> Self {
        self.elapsed = Some(d);
        self
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        if let Some(body) = &self.body {
            out.push_str(body);
            if !body.ends_with('\n') {
                out.push('\n');
            }
        }
        for (k, v, _) in self.fields.iter().filter(|f| f.2) {
            let shown = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k}: {shown}\n"));
        }
        if let Some(d) = self.elapsed {
            out.push_str(&format!("# time: {:.3}s\n", d.as_secs_f64()));
        }
        out
    }

    pub fn render_json(&self) -> String {
        let mut map = Map::new();
        if let Some(body) = &self.body {
            map.insert("output".into(), Value::String(body.clone()));
        }
        for (k, v, _) in &self.fields {
            map.insert(k.clone(), v.clone());
        }
        serde_json::to_string_pretty(&Value::Object(map)).expect("serializable report")
    }

    pub fn print(&self, json: bool) {
        if json {
            println!("{}", self.render_json());
        } else {
            print!("{}", self.render_text());
        }
    }
}
