use serde_json::Value;

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Real(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Missing,
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Real(v)
    }
}

impl From<i64> for Field {
    fn from(v: i64) -> Self {
        Field::Int(v)
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Text(v.to_owned())
    }
}

impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::Text(v)
    }
}

impl<T: Into<Field>> From<Option<T>> for Field {
    fn from(v: Option<T>) -> Self {
        v.map_or(Field::Missing, Into::into)
    }
}

impl Field {
    fn text(&self) -> String {
        match self {
            Field::Real(v) if *v == 0.0 || !v.is_finite() || (1e-4..1e15).contains(&v.abs()) => format!("{}", v + 0.0),
            Field::Real(v) => format!("{v:e}"),
            Field::Int(v) => v.to_string(),
            Field::Bool(v) => v.to_string(),
            Field::Text(s) => s.clone(),
            Field::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Real(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Field::Int(v) => Value::from(*v),
            Field::Bool(v) => Value::from(*v),
            Field::Text(s) => Value::from(s.as_str()),
            Field::Missing => Value::Null,
        }
    }
}

/// Ordered key/value report.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub fields: Vec<(String, Field)>,
}

impl Report {
    pub fn push(&mut self, key: impl Into<String>, value: impl Into<Field>) {
        self.fields.push((key.into(), value.into()));
    }

    pub fn get(&self, key: &str) -> Option<&Field> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    /// Number of `fail` entries.
    pub fn failures(&self) -> usize {
        self.fields.iter().filter(|(_, v)| matches!(v, Field::Text(s) if s == "fail")).count()
    }

    pub fn to_lines(&self) -> String {
        self.fields.iter().map(|(k, v)| format!("{k}={}\n", v.text())).collect()
    }

    /// Flat JSON object with keys in insertion order.
    pub fn to_json(&self) -> String {
        let body: Vec<String> = self
            .fields
            .iter()
            .map(|(k, v)| format!("{}:{}", Value::from(k.as_str()), v.json()))
            .collect();
        format!("{{{}}}", body.join(","))
    }
}
