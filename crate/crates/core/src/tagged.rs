//! JSON representation `{"kind": "<variant>", ...fields}` for enums whose derived serde
//! code is externally tagged (`#[serde(remote = "Self")]`).
//!
//! Serde's own internally tagged enums buffer their content, which hides the location of
//! an invalid field. Here the object is reshaped to the externally tagged form and decoded
//! with path tracking, so errors read "at `spectrum[0].lambda`: ...".

use serde::de::Error as _;
use serde::ser::Error as _;
use serde_json::{Map, Value};

const TAG: &str = "kind";

/// Prepends `prefix` to the key path of `msg`, merging with a path it already carries.
pub(crate) fn prefix_path(prefix: &str, msg: &str) -> String {
    if prefix.is_empty() || prefix == "." {
        return msg.to_string();
    }
    if let Some((inner, rest)) = msg.strip_prefix("at `").and_then(|m| m.split_once("`: ")) {
        let sep = if inner.starts_with('[') { "" } else { "." };
        return format!("at `{prefix}{sep}{inner}`: {rest}");
    }
    format!("at `{prefix}`: {msg}")
}

/// Serializes with the derived externally tagged code, then moves the variant name into `kind`.
pub fn serialize<T, S, F>(value: &T, serializer: S, derived: F) -> Result<S::Ok, S::Error>
where
    S: serde::Serializer,
    F: FnOnce(&T, serde_json::value::Serializer) -> serde_json::Result<Value>,
{
    let external = derived(value, serde_json::value::Serializer).map_err(S::Error::custom)?;
    let (variant, body) = match external {
        Value::Object(map) if map.len() == 1 => map.into_iter().next().expect("one entry"),
        Value::String(variant) => (variant, Value::Object(Map::new())),
        other => return Err(S::Error::custom(format!("cannot tag {other}"))),
    };
    let mut fields = match body {
        Value::Object(fields) => fields,
        other => return Err(S::Error::custom(format!("variant `{variant}` is not a struct: {other}"))),
    };
    fields.insert(TAG.to_string(), Value::String(variant));
    serde::Serialize::serialize(&fields, serializer)
}

/// Reads `{"kind": ..., fields}` and decodes it with the derived externally tagged code.
pub fn deserialize<'de, T, D, F>(deserializer: D, derived: F) -> Result<T, D::Error>
where
    D: serde::Deserializer<'de>,
    F: for<'a> FnOnce(serde_path_to_error::Deserializer<'a, 'a, Value>) -> serde_json::Result<T>,
{
    let value: Value = serde::Deserialize::deserialize(deserializer)?;
    let Value::Object(mut fields) = value else {
        return Err(D::Error::custom(format!("expected an object with a `{TAG}` field")));
    };
    let variant = match fields.remove(TAG) {
        Some(Value::String(v)) => v,
        Some(other) => return Err(D::Error::custom(format!("`{TAG}` must be a string, found {other}"))),
        None => return Err(D::Error::missing_field(TAG)),
    };
    let mut external = Map::new();
    external.insert(variant.clone(), Value::Object(fields));
    let mut track = serde_path_to_error::Track::new();
    derived(serde_path_to_error::Deserializer::new(Value::Object(external), &mut track)).map_err(|e| {
        let path = track.path().to_string();
        let inner = path.strip_prefix(variant.as_str()).unwrap_or("").trim_start_matches('.');
        D::Error::custom(prefix_path(inner, &e.to_string()))
    })
}

/// Implements `Serialize` and `Deserialize` with the `kind` tag for an enum deriving them
/// under `#[serde(remote = "Self")]`.
macro_rules! kind_tagged {
    ($t:ty) => {
        impl serde::Serialize for $t {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                $crate::tagged::serialize(self, s, |v, ser| <$t>::serialize(v, ser))
            }
        }

        impl<'de> serde::Deserialize<'de> for $t {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                $crate::tagged::deserialize(d, |de| <$t>::deserialize(de))
            }
        }
    };
}
pub(crate) use kind_tagged;

#[cfg(test)]
mod tests {
    use super::*;
    use serde::{Deserialize, Serialize};

    #[derive(Debug, PartialEq, Serialize, Deserialize)]
    #[serde(remote = "Self", rename_all = "snake_case", deny_unknown_fields)]
    enum Shape {
        Circle { radius: f64 },
        Pair { first: Box<Shape>, second: Box<Shape> },
    }
    kind_tagged!(Shape);

    #[test]
    fn round_trips_with_the_kind_field() {
        let s = Shape::Pair {
            first: Box::new(Shape::Circle { radius: 1.0 }),
            second: Box::new(Shape::Circle { radius: 2.0 }),
        };
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains(r#""kind":"pair""#), "{text}");
        assert_eq!(serde_json::from_str::<Shape>(&text).unwrap(), s);
    }

    #[test]
    fn errors_carry_the_nested_path() {
        let e = serde_json::from_str::<Shape>(r#"{"kind": "pair", "first": {"kind": "circle", "radius": "x"}, "second": {"kind": "circle", "radius": 1}}"#)
            .unwrap_err()
            .to_string();
        assert!(e.starts_with("at `first.radius`:"), "{e}");
        let e =
            serde_json::from_str::<Shape>(r#"{"kind": "circle", "radius": 1, "colour": 2}"#).unwrap_err().to_string();
        assert!(e.contains("colour"), "{e}");
        let e = serde_json::from_str::<Shape>(r#"{"kind": "square"}"#).unwrap_err().to_string();
        assert!(e.contains("square"), "{e}");
        assert!(serde_json::from_str::<Shape>(r#"{"radius": 1}"#).unwrap_err().to_string().contains("kind"));
    }

    #[test]
    fn prefixes_merge() {
        assert_eq!(prefix_path("model", "at `spectrum[0].lambda`: bad"), "at `model.spectrum[0].lambda`: bad");
        assert_eq!(prefix_path("a", "at `[2]`: bad"), "at `a[2]`: bad");
        assert_eq!(prefix_path("a", "bad"), "at `a`: bad");
        assert_eq!(prefix_path("", "bad"), "bad");
    }
}
