//! Machine-readable renderings of a score report.
//!
//! Output is byte-deterministic for a fixed input: scores are rounded to
//! four decimal places and every collection keeps a fixed order.

use serde::Serialize;

use crate::dictionary::SuperAttribute;
use crate::score::ScoreReport;

fn round4(x: f64) -> f64 {
    (x * 10000.0).round() / 10000.0
}

#[derive(Serialize)]
struct JsonReport<'a> {
    documents: Vec<JsonDocument<'a>>,
    set_summary: JsonSummary<'a>,
}

#[derive(Serialize)]
struct JsonDocument<'a> {
    id: &'a str,
    score: Option<f64>,
    attributes: JsonAttributes<'a>,
}

#[derive(Serialize)]
struct JsonAttributes<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<JsonCell<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dob: Option<JsonCell<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gender: Option<JsonCell<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    address: Option<JsonCell<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nic: Option<JsonCell<'a>>,
}

#[derive(Serialize)]
struct JsonCell<'a> {
    score: f64,
    details: &'a str,
}

#[derive(Serialize)]
struct JsonSummary<'a> {
    document_count: usize,
    mean_score: Option<f64>,
    warnings: &'a [String],
}

/// Renders a report as pretty-printed JSON with a trailing newline.
pub fn to_json(report: &ScoreReport) -> String {
    let cell = |doc: usize, attribute: SuperAttribute| {
        report.matrix.cell(doc, attribute).map(|c| JsonCell {
            score: round4(c.score),
            details: c.note.as_str(),
        })
    };
    let documents = report
        .documents
        .iter()
        .enumerate()
        .map(|(i, doc)| JsonDocument {
            id: &doc.doc_id,
            score: doc.score.map(round4),
            attributes: JsonAttributes {
                name: cell(i, SuperAttribute::Name),
                dob: cell(i, SuperAttribute::DateOfBirth),
                gender: cell(i, SuperAttribute::Gender),
                address: cell(i, SuperAttribute::Address),
                nic: cell(i, SuperAttribute::Nic),
            },
        })
        .collect();
    let defined: Vec<f64> = report.documents.iter().filter_map(|d| d.score).collect();
    let mean_score = if defined.is_empty() {
        None
    } else {
        Some(round4(crate::score::mean_of(&defined)))
    };
    let json = JsonReport {
        documents,
        set_summary: JsonSummary {
            document_count: report.documents.len(),
            mean_score,
            warnings: &report.warnings,
        },
    };
    let mut out = serde_json::to_string_pretty(&json).expect("report serialization is infallible");
    out.push('\n');
    out
}

fn csv_field(value: &str) -> String {
    if value.contains(',') || value.contains('"') || value.contains('\n') {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}

/// Renders a report as CSV: one row per defined attribute cell, then an
/// `overall` row per document.
pub fn to_csv(report: &ScoreReport) -> String {
    let mut out = String::from("doc_id,attribute,score,details\n");
    for (i, doc) in report.documents.iter().enumerate() {
        for (attribute, cell) in report.matrix.row(i) {
            out.push_str(&format!(
                "{},{},{:.4},{}\n",
                csv_field(&doc.doc_id),
                attribute,
                round4(cell.score),
                csv_field(&cell.note),
            ));
        }
        let score = match doc.score {
            Some(s) => format!("{:.4}", round4(s)),
            None => String::new(),
        };
        let used: Vec<&str> = doc.attributes_used.iter().map(|a| a.as_str()).collect();
        out.push_str(&format!(
            "{},overall,{},{}\n",
            csv_field(&doc.doc_id),
            score,
            csv_field(&used.join(" ")),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::AttributeDictionary;
    use crate::document::{DocumentSet, IdentityDocument};
    use crate::score::score_set;

    fn tiny_report() -> ScoreReport {
        let docs = DocumentSet::new(vec![
            IdentityDocument::parse(r#"{"full_name":"Kasun Silva","gender":"M"}"#, "a").unwrap(),
            IdentityDocument::parse(r#"{"full_name":"Kasun Silva","gender":"male"}"#, "b")
                .unwrap(),
        ])
        .unwrap();
        score_set(&docs, &AttributeDictionary::default()).unwrap()
    }

    #[test]
    fn json_schema_is_stable() {
        let json = to_json(&tiny_report());
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["documents"][0]["id"], "a");
        assert_eq!(value["documents"][0]["score"], 1.0);
        assert_eq!(value["documents"][0]["attributes"]["name"]["score"], 1.0);
        assert_eq!(value["set_summary"]["document_count"], 2);
        assert!(value["documents"][0]["attributes"].get("nic").is_none());
    }

    #[test]
    fn csv_lists_cells_and_overall_rows() {
        let csv = to_csv(&tiny_report());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "doc_id,attribute,score,details");
        assert!(lines.iter().any(|l| l.starts_with("a,name,1.0000,")));
        assert!(lines.iter().any(|l| l.starts_with("a,overall,1.0000,")));
        assert!(lines.iter().any(|l| l.starts_with("b,overall,1.0000,")));
    }

    #[test]
    fn rendering_is_byte_deterministic() {
        let a = tiny_report();
        let b = tiny_report();
        assert_eq!(to_json(&a), to_json(&b));
        assert_eq!(to_csv(&a), to_csv(&b));
    }

    #[test]
    fn csv_fields_with_commas_are_quoted() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
        assert_eq!(csv_field("plain"), "plain");
    }
}
