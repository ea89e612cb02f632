//! Orchestrates extraction and the four scoring paths into a score matrix
//! and per-document correlation scores.
//!
//! Every attribute weighs the same: a document's score is the plain mean of
//! its available attribute cells. An attribute carried by fewer than two
//! documents is absent for everyone, since correlation needs a counterpart.

use crate::dictionary::{AttributeDictionary, SuperAttribute};
use crate::document::DocumentSet;
use crate::error::{Error, Result};
use crate::extract::extract;
use crate::fields::{address_scores, dob_scores, gender_scores, nic_scores, ScoredColumn};
use crate::name::{build_profile, name_score, pairwise_name_score, NameProfile};

/// One defined cell of the score matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub score: f64,
    pub note: String,
}

/// Documents × super attributes grid of correlation scores.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    doc_ids: Vec<String>,
    cells: Vec<[Option<Cell>; 5]>,
}

impl ScoreMatrix {
    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn cell(&self, doc: usize, attribute: SuperAttribute) -> Option<&Cell> {
        let col = SuperAttribute::ALL
            .iter()
            .position(|a| *a == attribute)
            .expect("attribute is one of the five");
        self.cells.get(doc)?.get(col)?.as_ref()
    }

    /// All defined cells of one document, in attribute order.
    pub fn row(&self, doc: usize) -> impl Iterator<Item = (SuperAttribute, &Cell)> {
        SuperAttribute::ALL
            .into_iter()
            .filter_map(move |a| self.cell(doc, a).map(|c| (a, c)))
    }
}

/// A document's overall correlation score: the mean of its available
/// attribute cells, or undefined when it has none.
#[derive(Debug, Clone, PartialEq)]
pub struct DocumentScore {
    pub doc_id: String,
    pub score: Option<f64>,
    pub attributes_used: Vec<SuperAttribute>,
}

/// The full scoring output for one document set.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreReport {
    pub matrix: ScoreMatrix,
    pub documents: Vec<DocumentScore>,
    pub warnings: Vec<String>,
}

pub(crate) fn mean_of(scores: &[f64]) -> f64 {
    scores.iter().sum::<f64>() / scores.len() as f64
}

/// Scores a document set: extracts the five super attributes from every
/// document, scores each attribute column, and averages each document's
/// available cells into its correlation score.
pub fn score_set(docs: &DocumentSet, dict: &AttributeDictionary) -> Result<ScoreReport> {
    if docs.len() < 2 {
        return Err(Error::ScoreSet {
            message: format!(
                "correlation needs at least two documents, got {}",
                docs.len()
            ),
        });
    }

    let mut warnings = Vec::new();
    let mut profiles = Vec::with_capacity(docs.len());
    for doc in docs.iter() {
        let extraction = extract(doc, dict)?;
        warnings.extend(extraction.warnings);
        profiles.push(extraction.profile);
    }
    let doc_ids: Vec<String> = profiles.iter().map(|p| p.doc_id.clone()).collect();

    // name column
    let mut name_profiles: Vec<NameProfile> = Vec::new();
    let mut name_carriers: Vec<usize> = Vec::new();
    for (i, profile) in profiles.iter().enumerate() {
        if let Some(name) = &profile.name {
            let (built, mut notes) = build_profile(&profile.doc_id, name);
            warnings.append(&mut notes);
            if let Some(built) = built {
                name_profiles.push(built);
                name_carriers.push(i);
            }
        }
    }
    let mut name_column = ScoredColumn::absent(docs.len());
    if name_profiles.len() >= 2 {
        for (k, &i) in name_carriers.iter().enumerate() {
            let score = name_score(k, &name_profiles).expect("two or more carriers");
            let mut parts = Vec::new();
            for (other, counterpart) in name_profiles.iter().enumerate() {
                if other != k {
                    parts.push(format!(
                        "{:.4} vs {}",
                        pairwise_name_score(&name_profiles[k], counterpart),
                        counterpart.doc_id()
                    ));
                }
            }
            name_column.cells[i] = Some(score);
            name_column.notes[i] = Some(format!("mean of pairwise scores: {}", parts.join(", ")));
        }
    }

    let dob_column = dob_scores(&profiles.iter().map(|p| p.dob).collect::<Vec<_>>());
    let gender_column = gender_scores(
        &doc_ids,
        &profiles.iter().map(|p| p.gender.clone()).collect::<Vec<_>>(),
    );
    let address_column = address_scores(
        &doc_ids,
        &profiles.iter().map(|p| p.address.clone()).collect::<Vec<_>>(),
    );
    let nic_column = nic_scores(&profiles.iter().map(|p| p.nic.clone()).collect::<Vec<_>>());

    warnings.extend(gender_column.warnings.iter().cloned());
    warnings.extend(address_column.warnings.iter().cloned());

    let columns = [
        (SuperAttribute::Name, &name_column),
        (SuperAttribute::DateOfBirth, &dob_column),
        (SuperAttribute::Gender, &gender_column),
        (SuperAttribute::Address, &address_column),
        (SuperAttribute::Nic, &nic_column),
    ];

    let mut cells: Vec<[Option<Cell>; 5]> = Vec::with_capacity(docs.len());
    for i in 0..docs.len() {
        let mut row: [Option<Cell>; 5] = Default::default();
        for (slot, (_, column)) in row.iter_mut().zip(columns.iter()) {
            if let Some(score) = column.cells[i] {
                *slot = Some(Cell {
                    score,
                    note: column.notes[i].clone().unwrap_or_default(),
                });
            }
        }
        cells.push(row);
    }
    let matrix = ScoreMatrix {
        doc_ids: doc_ids.clone(),
        cells,
    };

    let mut documents = Vec::with_capacity(docs.len());
    for (i, doc_id) in doc_ids.iter().enumerate() {
        let mut used = Vec::new();
        let mut scores = Vec::new();
        for (attribute, cell) in matrix.row(i) {
            used.push(attribute);
            scores.push(cell.score);
        }
        let score = if scores.is_empty() {
            warnings.push(format!("{doc_id}: no scorable attributes; score undefined"));
            None
        } else {
            Some(mean_of(&scores))
        };
        documents.push(DocumentScore {
            doc_id: doc_id.clone(),
            score,
            attributes_used: used,
        });
    }

    Ok(ScoreReport {
        matrix,
        documents,
        warnings,
    })
}
