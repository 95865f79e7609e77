use std::fmt;

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Numbers keyed by class name, kept in class-id order. Serialized as a JSON
/// object whose key order is the class order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ClassValues(Vec<(String, f64)>);

impl ClassValues {
    pub fn new(entries: Vec<(String, f64)>) -> Self {
        ClassValues(entries)
    }

    pub fn from_names<'a>(names: impl IntoIterator<Item = &'a String>, values: &[f64]) -> Self {
        ClassValues(
            names
                .into_iter()
                .cloned()
                .zip(values.iter().copied())
                .collect(),
        )
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|(n, _)| n.as_str())
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().map(|&(_, v)| v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(n, v)| (n.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values().sum()
    }
}

impl Serialize for ClassValues {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (name, value) in &self.0 {
            map.serialize_entry(name, value)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for ClassValues {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct OrderedVisitor;

        impl<'de> Visitor<'de> for OrderedVisitor {
            type Value = ClassValues;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object of class name to number")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<ClassValues, A::Error> {
                let mut entries: Vec<(String, f64)> = Vec::new();
                while let Some((name, value)) = access.next_entry::<String, f64>()? {
                    if entries.iter().any(|(n, _)| *n == name) {
                        return Err(serde::de::Error::custom(format!(
                            "duplicate class {name:?}"
                        )));
                    }
                    entries.push((name, value));
                }
                Ok(ClassValues(entries))
            }
        }

        deserializer.deserialize_map(OrderedVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keeps_document_order() {
        let v: ClassValues =
            serde_json::from_str(r#"{"straw": 1.5, "background": 0, "soil": 98.5}"#).unwrap();
        assert_eq!(
            v.names().collect::<Vec<_>>(),
            ["straw", "background", "soil"]
        );
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"straw":1.5,"background":0.0,"soil":98.5}"#
        );
        assert_eq!(v.get("soil"), Some(98.5));
        assert_eq!(v.get("stone"), None);
    }

    #[test]
    fn rejects_duplicates() {
        assert!(serde_json::from_str::<ClassValues>(r#"{"a": 1, "a": 2}"#).is_err());
    }
}
