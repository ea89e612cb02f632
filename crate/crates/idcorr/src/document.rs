//! Structured identity documents: an ordered key-value tree of string leaves.
//!
//! Entry order is preserved exactly as it appears in the source, because the
//! order in which a document presents its attributes is meaningful to the
//! name and address comparisons downstream.

use serde::de::{DeserializeSeed, Deserializer, Error as DeError, MapAccess, SeqAccess, Visitor};
use std::fmt;

use crate::dictionary::normalize_key;
use crate::error::{Error, Result};

/// Objects may nest this deep; anything deeper is rejected as pathological.
pub const MAX_DEPTH: usize = 32;

/// One node of a document tree: a string leaf or an ordered object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttributeNode {
    Leaf(String),
    Object(Vec<(String, AttributeNode)>),
}

impl AttributeNode {
    pub fn leaf(value: impl Into<String>) -> Self {
        AttributeNode::Leaf(value.into())
    }

    /// Builds an object node, enforcing that keys stay unique after
    /// normalization.
    pub fn object(entries: Vec<(String, AttributeNode)>) -> Result<Self> {
        let mut seen: Vec<(String, String)> = Vec::new();
        for (key, _) in &entries {
            let norm = normalize_key(key)?;
            if let Some((_, prev)) = seen.iter().find(|(n, _)| *n == norm) {
                return Err(Error::Structure {
                    message: format!("keys {prev:?} and {key:?} collide after normalization"),
                });
            }
            seen.push((norm, key.clone()));
        }
        Ok(AttributeNode::Object(entries))
    }

    pub fn is_object(&self) -> bool {
        matches!(self, AttributeNode::Object(_))
    }
}

/// A single identity document: an identifier plus its attribute tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityDocument {
    doc_id: String,
    root: AttributeNode,
}

/// One leaf of a flattened document: the key path from the root and the value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatLeaf<'a> {
    pub path: Vec<&'a str>,
    pub value: &'a str,
}

impl IdentityDocument {
    /// Wraps an already-built tree. The root must be an object and the id
    /// must be non-empty.
    pub fn new(doc_id: impl Into<String>, root: AttributeNode) -> Result<Self> {
        let doc_id = doc_id.into();
        if doc_id.is_empty() {
            return Err(Error::Structure {
                message: "doc_id must not be empty".into(),
            });
        }
        if !root.is_object() {
            return Err(Error::Structure {
                message: "document root must be an object".into(),
            });
        }
        Ok(IdentityDocument { doc_id, root })
    }

    /// Parses a UTF-8 JSON object into a document tree.
    ///
    /// Entry order matches the source. Numbers and booleans become string
    /// leaves with their source spelling. Arrays and nulls are rejected, as
    /// are keys that collide after normalization.
    pub fn parse(text: &str, doc_id: impl Into<String>) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_str(text);
        let root = NodeSeed { depth: 1 }
            .deserialize(&mut de)
            .map_err(|e| classify_json_error(e, text))?;
        de.end().map_err(|e| classify_json_error(e, text))?;
        Self::new(doc_id, root)
    }

    pub fn doc_id(&self) -> &str {
        &self.doc_id
    }

    pub fn root(&self) -> &AttributeNode {
        &self.root
    }

    /// Depth-first, source-order sequence of every leaf with its key path.
    pub fn flatten(&self) -> Vec<FlatLeaf<'_>> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        walk(&self.root, &mut path, &mut out);
        out
    }
}

fn walk<'a>(node: &'a AttributeNode, path: &mut Vec<&'a str>, out: &mut Vec<FlatLeaf<'a>>) {
    match node {
        AttributeNode::Leaf(value) => out.push(FlatLeaf {
            path: path.clone(),
            value,
        }),
        AttributeNode::Object(entries) => {
            for (key, child) in entries {
                path.push(key);
                walk(child, path, out);
                path.pop();
            }
        }
    }
}

/// An ordered collection of documents with unique ids. Input order is
/// significant: it is the tie-break order for majority voting.
#[derive(Debug, Clone)]
pub struct DocumentSet {
    documents: Vec<IdentityDocument>,
}

impl DocumentSet {
    pub fn new(documents: Vec<IdentityDocument>) -> Result<Self> {
        for (i, doc) in documents.iter().enumerate() {
            if documents[..i].iter().any(|d| d.doc_id == doc.doc_id) {
                return Err(Error::Structure {
                    message: format!("duplicate doc_id {:?} in document set", doc.doc_id),
                });
            }
        }
        Ok(DocumentSet { documents })
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &IdentityDocument> {
        self.documents.iter()
    }

    pub fn documents(&self) -> &[IdentityDocument] {
        &self.documents
    }
}

// With the arbitrary_precision feature, serde_json hands raw number text to
// the visitor as a single-entry map under this marker key.
const NUMBER_TOKEN: &str = "$serde_json::private::Number";

struct NodeSeed {
    depth: usize,
}

impl<'de> DeserializeSeed<'de> for NodeSeed {
    type Value = AttributeNode;

    fn deserialize<D>(self, deserializer: D) -> std::result::Result<Self::Value, D::Error>
    where
        D: Deserializer<'de>,
    {
        deserializer.deserialize_any(NodeVisitor { depth: self.depth })
    }
}

struct NodeVisitor {
    depth: usize,
}

impl<'de> Visitor<'de> for NodeVisitor {
    type Value = AttributeNode;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a string, number, boolean or object")
    }

    fn visit_str<E: DeError>(self, v: &str) -> std::result::Result<Self::Value, E> {
        Ok(AttributeNode::Leaf(v.to_owned()))
    }

    fn visit_string<E: DeError>(self, v: String) -> std::result::Result<Self::Value, E> {
        Ok(AttributeNode::Leaf(v))
    }

    fn visit_bool<E: DeError>(self, v: bool) -> std::result::Result<Self::Value, E> {
        Ok(AttributeNode::Leaf(v.to_string()))
    }

    fn visit_i64<E: DeError>(self, v: i64) -> std::result::Result<Self::Value, E> {
        Ok(AttributeNode::Leaf(v.to_string()))
    }

    fn visit_u64<E: DeError>(self, v: u64) -> std::result::Result<Self::Value, E> {
        Ok(AttributeNode::Leaf(v.to_string()))
    }

    fn visit_f64<E: DeError>(self, v: f64) -> std::result::Result<Self::Value, E> {
        Ok(AttributeNode::Leaf(v.to_string()))
    }

    fn visit_unit<E: DeError>(self) -> std::result::Result<Self::Value, E> {
        Err(E::custom("null values are not supported"))
    }

    fn visit_seq<A>(self, _seq: A) -> std::result::Result<Self::Value, A::Error>
    where
        A: SeqAccess<'de>,
    {
        Err(A::Error::custom("arrays are not supported"))
    }

    fn visit_map<A>(self, mut map: A) -> std::result::Result<Self::Value, A::Error>
    where
        A: MapAccess<'de>,
    {
        let first_key: Option<String> = map.next_key()?;
        let Some(first_key) = first_key else {
            return Ok(AttributeNode::Object(Vec::new()));
        };
        if first_key == NUMBER_TOKEN {
            let raw: String = map.next_value()?;
            return Ok(AttributeNode::Leaf(raw));
        }
        if self.depth > MAX_DEPTH {
            return Err(A::Error::custom(format!(
                "nesting depth exceeds the maximum of {MAX_DEPTH}"
            )));
        }

        let mut entries: Vec<(String, AttributeNode)> = Vec::new();
        let mut seen: Vec<(String, String)> = Vec::new();
        let mut key = first_key;
        loop {
            let norm = normalize_key(&key)
                .map_err(|_| A::Error::custom(format!("key {key:?} normalizes to nothing")))?;
            if let Some((_, prev)) = seen.iter().find(|(n, _)| *n == norm) {
                return Err(A::Error::custom(format!(
                    "keys {prev:?} and {key:?} collide after normalization"
                )));
            }
            seen.push((norm, key.clone()));

            let child = map.next_value_seed(NodeSeed {
                depth: self.depth + 1,
            })?;
            entries.push((key, child));

            match map.next_key()? {
                Some(next) => key = next,
                None => break,
            }
        }
        Ok(AttributeNode::Object(entries))
    }
}

fn classify_json_error(err: serde_json::Error, text: &str) -> Error {
    let offset = byte_offset(text, err.line(), err.column());
    match err.classify() {
        serde_json::error::Category::Data => Error::Structure {
            message: err.to_string(),
        },
        _ => Error::Parse {
            offset,
            message: err.to_string(),
        },
    }
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let mut start = 0;
    for (n, l) in text.split_inclusive('\n').enumerate() {
        if n + 1 == line {
            break;
        }
        start += l.len();
    }
    (start + column.saturating_sub(1)).min(text.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_single_leaf() {
        let doc = IdentityDocument::parse(r#"{"name":"A B"}"#, "d1").unwrap();
        let flat = doc.flatten();
        assert_eq!(flat.len(), 1);
        assert_eq!(flat[0].path, vec!["name"]);
        assert_eq!(flat[0].value, "A B");
    }

    #[test]
    fn parses_nested_object_in_order() {
        let doc =
            IdentityDocument::parse(r#"{"dob":{"day":"01","month":"02","year":"1990"}}"#, "d1")
                .unwrap();
        let flat = doc.flatten();
        let got: Vec<(Vec<&str>, &str)> =
            flat.into_iter().map(|l| (l.path, l.value)).collect();
        assert_eq!(
            got,
            vec![
                (vec!["dob", "day"], "01"),
                (vec!["dob", "month"], "02"),
                (vec!["dob", "year"], "1990"),
            ]
        );
    }

    #[test]
    fn rejects_colliding_keys() {
        let err = IdentityDocument::parse(r#"{"name":"X","Name":"Y"}"#, "d1").unwrap_err();
        assert!(matches!(err, Error::Structure { .. }), "{err}");
        assert!(err.to_string().contains("collide"), "{err}");
    }

    #[test]
    fn rejects_exact_duplicate_keys() {
        let err = IdentityDocument::parse(r#"{"name":"X","name":"Y"}"#, "d1").unwrap_err();
        assert!(matches!(err, Error::Structure { .. }), "{err}");
    }

    #[test]
    fn rejects_arrays_and_null() {
        let err = IdentityDocument::parse(r#"{"names":["a","b"]}"#, "d1").unwrap_err();
        assert!(matches!(err, Error::Structure { .. }), "{err}");
        let err = IdentityDocument::parse(r#"{"name":null}"#, "d1").unwrap_err();
        assert!(matches!(err, Error::Structure { .. }), "{err}");
    }

    #[test]
    fn rejects_non_object_root() {
        let err = IdentityDocument::parse(r#""just a string""#, "d1").unwrap_err();
        assert!(matches!(err, Error::Structure { .. }), "{err}");
    }

    #[test]
    fn malformed_input_reports_byte_offset() {
        let text = "{\"name\": }";
        let err = IdentityDocument::parse(text, "d1").unwrap_err();
        match err {
            Error::Parse { offset, .. } => assert_eq!(offset, 9),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn numbers_and_booleans_are_stringified_verbatim() {
        let doc =
            IdentityDocument::parse(r#"{"zip":10230,"rate":1.50,"ok":true}"#, "d1").unwrap();
        let flat = doc.flatten();
        let values: Vec<&str> = flat.iter().map(|l| l.value).collect();
        assert_eq!(values, vec!["10230", "1.50", "true"]);
    }

    #[test]
    fn empty_object_flattens_to_nothing() {
        let doc = IdentityDocument::parse("{}", "d1").unwrap();
        assert!(doc.flatten().is_empty());
    }

    #[test]
    fn rejects_excessive_nesting() {
        let mut text = String::new();
        for _ in 0..40 {
            text.push_str("{\"k\":");
        }
        text.push_str("\"v\"");
        text.push_str(&"}".repeat(40));
        let err = IdentityDocument::parse(&text, "d1").unwrap_err();
        assert!(err.to_string().contains("nesting depth"), "{err}");
    }

    #[test]
    fn accepts_nesting_at_the_limit() {
        let mut text = String::new();
        for _ in 0..MAX_DEPTH {
            text.push_str("{\"k\":");
        }
        text.push_str("\"v\"");
        text.push_str(&"}".repeat(MAX_DEPTH));
        let doc = IdentityDocument::parse(&text, "d1").unwrap();
        assert_eq!(doc.flatten().len(), 1);
    }

    #[test]
    fn document_set_rejects_duplicate_ids() {
        let a = IdentityDocument::parse("{}", "same").unwrap();
        let b = IdentityDocument::parse("{}", "same").unwrap();
        let err = DocumentSet::new(vec![a, b]).unwrap_err();
        assert!(err.to_string().contains("duplicate doc_id"), "{err}");
    }

    #[test]
    fn rejects_empty_doc_id() {
        let err = IdentityDocument::parse("{}", "").unwrap_err();
        assert!(matches!(err, Error::Structure { .. }), "{err}");
    }
}
