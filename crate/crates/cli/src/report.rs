//! JSON summaries (schema 1). Floats carry 17 significant digits;
//! non-finite values become null.

use std::time::{SystemTime, UNIX_EPOCH};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(String, Json)>),
}

impl Json {
    pub fn obj() -> Self {
        Json::Obj(Vec::new())
    }

    /// Appends a field to an object.
    pub fn with(mut self, key: &str, value: impl Into<Json>) -> Self {
        if let Json::Obj(ref mut f) = self {
            f.push((key.to_string(), value.into()));
        }
        self
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        self.write(&mut s, 0);
        s.push('\n');
        s
    }

    fn write(&self, s: &mut String, depth: usize) {
        let pad = |s: &mut String, d: usize| s.push_str(&"  ".repeat(d));
        match self {
            Json::Null => s.push_str("null"),
            Json::Bool(b) => s.push_str(if *b { "true" } else { "false" }),
            Json::Int(k) => s.push_str(&k.to_string()),
            Json::Num(x) if x.is_finite() => s.push_str(&format!("{x:.16e}")),
            Json::Num(_) => s.push_str("null"),
            Json::Str(t) => s.push_str(&serde_json::to_string(t).expect("string")),
            Json::Arr(v) if v.is_empty() => s.push_str("[]"),
            Json::Arr(v) => {
                s.push_str("[\n");
                for (k, e) in v.iter().enumerate() {
                    pad(s, depth + 1);
                    e.write(s, depth + 1);
                    s.push_str(if k + 1 < v.len() { ",\n" } else { "\n" });
                }
                pad(s, depth);
                s.push(']');
            }
            Json::Obj(f) if f.is_empty() => s.push_str("{}"),
            Json::Obj(f) => {
                s.push_str("{\n");
                for (k, (key, e)) in f.iter().enumerate() {
                    pad(s, depth + 1);
                    s.push_str(&serde_json::to_string(key).expect("string"));
                    s.push_str(": ");
                    e.write(s, depth + 1);
                    s.push_str(if k + 1 < f.len() { ",\n" } else { "\n" });
                }
                pad(s, depth);
                s.push('}');
            }
        }
    }
}

impl From<f64> for Json {
    fn from(x: f64) -> Self {
        Json::Num(x)
    }
}

impl From<usize> for Json {
    fn from(x: usize) -> Self {
        Json::Int(x as i64)
    }
}

impl From<u64> for Json {
    fn from(x: u64) -> Self {
        Json::Int(x as i64)
    }
}

impl From<bool> for Json {
    fn from(x: bool) -> Self {
        Json::Bool(x)
    }
}

impl From<&str> for Json {
    fn from(x: &str) -> Self {
        Json::Str(x.to_string())
    }
}

impl From<String> for Json {
    fn from(x: String) -> Self {
        Json::Str(x)
    }
}

impl<T: Into<Json>> From<Option<T>> for Json {
    fn from(x: Option<T>) -> Self {
        x.map_or(Json::Null, Into::into)
    }
}

impl<T: Into<Json>> From<Vec<T>> for Json {
    fn from(v: Vec<T>) -> Self {
        Json::Arr(v.into_iter().map(Into::into).collect())
    }
}

/// Top-level summary with the schema version, command, echoed config and
/// a metadata block holding the only time-dependent field.
pub fn summary(command: &str, config: Json, results: Json) -> Json {
    let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    Json::obj()
        .with("schema", SCHEMA as usize)
        .with("command", command)
        .with("config", config)
        .with("results", results)
        .with("metadata", Json::obj().with("created_unix", now).with("version", env!("CARGO_PKG_VERSION")))
}
