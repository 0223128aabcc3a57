//! A small JSON Schema checker covering the keywords used in docs/schemas:
//! `$ref` into `$defs`, `type`, `properties`, `required`,
//! `additionalProperties: false`, `items`, `prefixItems`, `minItems`,
//! `maxItems`, `enum`, `const`, `oneOf`, `minimum` and `pattern`.

use regex::Regex;
use serde_json::Value;

pub struct Checker<'a> {
    root: &'a Value,
}

impl<'a> Checker<'a> {
    pub fn new(root: &'a Value) -> Self {
        Self { root }
    }

    pub fn check(&self, value: &Value) -> Result<(), String> {
        self.check_at(self.root, value, "$")
    }

    fn resolve(&self, reference: &str) -> Result<&'a Value, String> {
        let name = reference
            .strip_prefix("#/$defs/")
            .ok_or_else(|| format!("unsupported $ref {reference}"))?;
        self.root["$defs"]
            .get(name)
            .ok_or_else(|| format!("unknown definition {name}"))
    }

    fn check_at(&self, schema: &Value, value: &Value, path: &str) -> Result<(), String> {
        if let Some(r) = schema.get("$ref").and_then(Value::as_str) {
            return self.check_at(self.resolve(r)?, value, path);
        }
        if let Some(options) = schema.get("oneOf").and_then(Value::as_array) {
            let matching = options.iter().filter(|s| self.check_at(s, value, path).is_ok()).count();
            if matching != 1 {
                return Err(format!("{path}: {matching} oneOf branches match"));
            }
        }
        if let Some(c) = schema.get("const") {
            if c != value {
                return Err(format!("{path}: expected {c}, found {value}"));
            }
        }
        if let Some(options) = schema.get("enum").and_then(Value::as_array) {
            if !options.contains(value) {
                return Err(format!("{path}: {value} not in enum"));
            }
        }
        if let Some(t) = schema.get("type").and_then(Value::as_str) {
            let ok = match t {
                "object" => value.is_object(),
                "array" => value.is_array(),
                "string" => value.is_string(),
                "integer" => value
                    .as_number()
                    .is_some_and(|n| !n.to_string().contains(['.', 'e', 'E'])),
                "boolean" => value.is_boolean(),
                "null" => value.is_null(),
                other => return Err(format!("unsupported type {other}")),
            };
            if !ok {
                return Err(format!("{path}: expected {t}, found {value}"));
            }
        }
        if let Some(min) = schema.get("minimum").and_then(Value::as_i64) {
            let text = value.as_number().map(|n| n.to_string()).unwrap_or_default();
            let below = match text.parse::<i128>() {
                Ok(v) => v < i128::from(min),
                Err(_) => text.starts_with('-'),
            };
            if below {
                return Err(format!("{path}: {value} below minimum {min}"));
            }
        }
        if let Some(p) = schema.get("pattern").and_then(Value::as_str) {
            let s = value.as_str().unwrap_or_default();
            if !Regex::new(p).map_err(|e| e.to_string())?.is_match(s) {
                return Err(format!("{path}: {s:?} does not match {p}"));
            }
        }
        if let Some(obj) = value.as_object() {
            let props = schema.get("properties").and_then(Value::as_object);
            for req in schema.get("required").and_then(Value::as_array).into_iter().flatten() {
                let key = req.as_str().unwrap_or_default();
                if !obj.contains_key(key) {
                    return Err(format!("{path}: missing {key}"));
                }
            }
            for (k, v) in obj {
                match props.and_then(|p| p.get(k)) {
                    Some(s) => self.check_at(s, v, &format!("{path}.{k}"))?,
                    None if schema.get("additionalProperties") == Some(&Value::Bool(false)) => {
                        return Err(format!("{path}: unexpected key {k}"));
                    }
                    None => {}
                }
            }
        }
        if let Some(items) = value.as_array() {
            if let Some(n) = schema.get("minItems").and_then(Value::as_u64) {
                if (items.len() as u64) < n {
                    return Err(format!("{path}: fewer than {n} items"));
                }
            }
            if let Some(n) = schema.get("maxItems").and_then(Value::as_u64) {
                if items.len() as u64 > n {
                    return Err(format!("{path}: more than {n} items"));
                }
            }
            let prefix = schema.get("prefixItems").and_then(Value::as_array);
            for (i, item) in items.iter().enumerate() {
                let s = prefix.and_then(|p| p.get(i)).or_else(|| schema.get("items"));
                if let Some(s) = s {
                    self.check_at(s, item, &format!("{path}[{i}]"))?;
                }
            }
        }
        Ok(())
    }
}
