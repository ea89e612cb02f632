//! Candidate-based scoring for date of birth, gender and national
//! identification codes, plus the hierarchical address comparison.
//!
//! For the exact-match attributes a candidate value is chosen by majority
//! vote across the documents that carry the attribute (ties go to the
//! earliest document in input order) and each carrier scores 1 or 0 against
//! it. Addresses first gate on their hierarchical levels, widest first, and
//! whatever free text remains is compared with the same phonetic method the
//! name score uses.

use std::fmt;

use crate::countries::{country_key, country_table, fold_name, CountryKey};
use crate::dictionary::AddressLevel;
use crate::extract::{canonical_nic, AddressPartKind, AddressValue, DobValue};
use crate::name::{pairwise_name_score, NameProfile, NameUnit};

/// The plurality value of an attribute across a document set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate<T> {
    pub value: T,
    pub votes: usize,
}

/// Picks the value with the highest multiplicity; ties break to the value
/// whose first occurrence comes earliest.
pub fn majority_candidate<T: PartialEq + Clone>(values: &[T]) -> Option<Candidate<T>> {
    let mut best: Option<Candidate<T>> = None;
    for (idx, value) in values.iter().enumerate() {
        if values[..idx].contains(value) {
            continue;
        }
        let votes = values.iter().filter(|v| *v == value).count();
        if best.as_ref().is_none_or(|b| votes > b.votes) {
            best = Some(Candidate {
                value: value.clone(),
                votes,
            });
        }
    }
    best
}

/// A gender value classified against the two recognized target sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenderClass {
    Female,
    Male,
    Unclassified,
}

impl fmt::Display for GenderClass {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(match self {
            GenderClass::Female => "female",
            GenderClass::Male => "male",
            GenderClass::Unclassified => "unclassified",
        })
    }
}

/// Classifies a raw gender value: `f`/`female` and `m`/`male` after
/// lowercasing and trimming; anything else is unclassified.
pub fn classify_gender(raw: &str) -> GenderClass {
    match raw.trim().to_lowercase().as_str() {
        "f" | "female" => GenderClass::Female,
        "m" | "male" => GenderClass::Male,
        _ => GenderClass::Unclassified,
    }
}

/// One scored attribute column: a cell and a provenance note per document,
/// absent where the document does not carry the attribute (or fewer than two
/// documents do).
#[derive(Debug, Clone, Default)]
pub struct ScoredColumn {
    pub cells: Vec<Option<f64>>,
    pub notes: Vec<Option<String>>,
    pub warnings: Vec<String>,
}

impl ScoredColumn {
    pub(crate) fn absent(len: usize) -> ScoredColumn {
        ScoredColumn {
            cells: vec![None; len],
            notes: vec![None; len],
            warnings: Vec::new(),
        }
    }
}

fn candidate_column<T, K>(
    values: &[Option<T>],
    canon: impl Fn(&T) -> K,
    display: impl Fn(&K) -> String,
) -> ScoredColumn
where
    K: PartialEq + Clone,
{
    let mut column = ScoredColumn::absent(values.len());
    let keys: Vec<(usize, K)> = values
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.as_ref().map(|v| (i, canon(v))))
        .collect();
    if keys.len() < 2 {
        return column;
    }
    let votes_only: Vec<K> = keys.iter().map(|(_, k)| k.clone()).collect();
    let candidate = majority_candidate(&votes_only).expect("at least two carriers");
    for (i, key) in &keys {
        let matched = *key == candidate.value;
        column.cells[*i] = Some(if matched { 1.0 } else { 0.0 });
        column.notes[*i] = Some(format!(
            "{} candidate {} ({}/{} votes)",
            if matched { "matches" } else { "differs from" },
            display(&candidate.value),
            candidate.votes,
            keys.len(),
        ));
    }
    column
}

/// Scores each document's date of birth against the majority candidate.
pub fn dob_scores(dobs: &[Option<DobValue>]) -> ScoredColumn {
    candidate_column(dobs, |d| *d, |d| d.to_string())
}

/// Scores classified gender values against the majority class. Unclassified
/// values are treated as if the document did not carry the attribute.
pub fn gender_scores(doc_ids: &[String], genders: &[Option<String>]) -> ScoredColumn {
    let mut classified: Vec<Option<GenderClass>> = Vec::with_capacity(genders.len());
    let mut warnings = Vec::new();
    for (i, raw) in genders.iter().enumerate() {
        match raw {
            Some(value) => match classify_gender(value) {
                GenderClass::Unclassified => {
                    warnings.push(format!(
                        "{}: gender {value:?} is outside the recognized classes; treated as absent",
                        doc_ids[i]
                    ));
                    classified.push(None);
                }
                class => classified.push(Some(class)),
            },
            None => classified.push(None),
        }
    }
    let mut column = candidate_column(&classified, |c| *c, |c| c.to_string());
    column.warnings = warnings;
    column
}

/// Scores national identification codes by exact canonical equality
/// (uppercased, whitespace removed) against the majority candidate.
pub fn nic_scores(nics: &[Option<String>]) -> ScoredColumn {
    candidate_column(nics, |n| canonical_nic(n), |k| k.clone())
}

fn display_country(key: &CountryKey) -> String {
    match key {
        CountryKey::Iso(idx) => country_table()[*idx].name.clone(),
        CountryKey::Text(text) => text.clone(),
    }
}

/// Builds a phonetic profile from free address text; `None` when no token
/// carries letters.
fn line_profile(doc_id: &str, text: &str) -> Option<NameProfile> {
    let units: Vec<NameUnit> = text
        .split_whitespace()
        .filter_map(|token| NameUnit::segment(token).ok())
        .collect();
    if units.is_empty() {
        None
    } else {
        Some(NameProfile::new(doc_id, units).expect("units checked non-empty"))
    }
}

/// Mean pairwise line score for one carrier against its counterparts,
/// summed in doc-id order so document input order cannot perturb the value.
fn mean_line_score(own: &NameProfile, counterparts: &[&NameProfile]) -> f64 {
    let mut scored: Vec<(&str, f64)> = counterparts
        .iter()
        .map(|c| (c.doc_id(), pairwise_name_score(own, c)))
        .collect();
    scored.sort_by(|a, b| a.0.cmp(b.0));
    let sum: f64 = scored.iter().map(|(_, s)| s).sum();
    sum / scored.len() as f64
}

/// Scores addresses.
///
/// When every carrier is structured, the hierarchical levels present in all
/// of them gate the score (a mismatch with the level candidate scores 0),
/// and the remaining free text is compared phonetically. When any carrier is
/// a single undivided value, every address is rendered to one string and
/// compared phonetically.
pub fn address_scores(doc_ids: &[String], addresses: &[Option<AddressValue>]) -> ScoredColumn {
    let mut column = ScoredColumn::absent(addresses.len());
    let carriers: Vec<usize> = (0..addresses.len())
        .filter(|&i| addresses[i].is_some())
        .collect();
    if carriers.len() < 2 {
        return column;
    }
    let all_structured = carriers
        .iter()
        .all(|&i| matches!(addresses[i], Some(AddressValue::Structured(_))));

    if all_structured {
        structured_address_scores(doc_ids, addresses, &carriers, &mut column);
    } else {
        single_value_address_scores(doc_ids, addresses, &carriers, &mut column);
    }
    column
}

fn structured_address_scores(
    doc_ids: &[String],
    addresses: &[Option<AddressValue>],
    carriers: &[usize],
    column: &mut ScoredColumn,
) {
    let structured = |i: usize| match &addresses[i] {
        Some(AddressValue::Structured(s)) => s,
        _ => unreachable!("carriers are structured here"),
    };

    let mut failures: Vec<Option<String>> = vec![None; addresses.len()];
    let mut universal_levels = Vec::new();
    for level in AddressLevel::ALL {
        if !carriers.iter().all(|&i| structured(i).level(level).is_some()) {
            continue;
        }
        universal_levels.push(level);
        let keys: Vec<(usize, CountryKey)> = carriers
            .iter()
            .map(|&i| {
                let value = structured(i).level(level).expect("level is universal");
                let key = if level == AddressLevel::Country {
                    country_key(value)
                } else {
                    CountryKey::Text(fold_name(value))
                };
                (i, key)
            })
            .collect();
        let votes: Vec<CountryKey> = keys.iter().map(|(_, k)| k.clone()).collect();
        let candidate = majority_candidate(&votes).expect("at least two carriers");
        for (i, key) in &keys {
            if *key != candidate.value && failures[*i].is_none() {
                failures[*i] = Some(format!(
                    "{level} gate failed: {:?} differs from candidate {} ({}/{} votes)",
                    structured(*i).level(level).unwrap_or_default(),
                    display_country(&candidate.value),
                    candidate.votes,
                    keys.len(),
                ));
            }
        }
    }

    // whatever is not a universally shared level is free line text
    let line_profiles: Vec<Option<NameProfile>> = carriers
        .iter()
        .map(|&i| {
            let text: Vec<&str> = structured(i)
                .parts()
                .iter()
                .filter(|p| match p.kind {
                    AddressPartKind::Line => true,
                    AddressPartKind::Level(l) => !universal_levels.contains(&l),
                })
                .map(|p| p.value.as_str())
                .collect();
            line_profile(&doc_ids[i], &text.join(" "))
        })
        .collect();

    for (c, &i) in carriers.iter().enumerate() {
        if let Some(reason) = &failures[i] {
            column.cells[i] = Some(0.0);
            column.notes[i] = Some(reason.clone());
            continue;
        }
        let gates = if universal_levels.is_empty() {
            "no shared levels".to_string()
        } else {
            format!(
                "passed {} gate(s): {}",
                universal_levels.len(),
                universal_levels
                    .iter()
                    .map(|l| l.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        };
        let counterparts: Vec<&NameProfile> = carriers
            .iter()
            .enumerate()
            .filter(|(other, &j)| *other != c && j != i)
            .filter_map(|(other, _)| line_profiles[other].as_ref())
            .collect();
        match (&line_profiles[c], counterparts.is_empty()) {
            (Some(own), false) => {
                let mean = mean_line_score(own, &counterparts);
                column.cells[i] = Some(mean);
                column.notes[i] = Some(format!(
                    "{gates}; line similarity {mean:.4} over {} counterpart(s)",
                    counterparts.len()
                ));
            }
            _ => {
                column.cells[i] = Some(1.0);
                column.notes[i] = Some(format!("{gates}; no line text to compare"));
            }
        }
    }
}

fn single_value_address_scores(
    doc_ids: &[String],
    addresses: &[Option<AddressValue>],
    carriers: &[usize],
    column: &mut ScoredColumn,
) {
    let profiles: Vec<Option<NameProfile>> = carriers
        .iter()
        .map(|&i| {
            let rendered = addresses[i].as_ref().expect("carrier").rendered();
            line_profile(&doc_ids[i], &rendered)
        })
        .collect();
    let comparable: Vec<usize> = (0..carriers.len())
        .filter(|&c| profiles[c].is_some())
        .collect();
    for (c, &i) in carriers.iter().enumerate() {
        if profiles[c].is_none() {
            column.warnings.push(format!(
                "{}: address has no phonetically comparable text; treated as absent",
                doc_ids[i]
            ));
        }
    }
    if comparable.len() < 2 {
        return;
    }
    for &c in &comparable {
        let i = carriers[c];
        let own = profiles[c].as_ref().expect("comparable");
        let counterparts: Vec<&NameProfile> = comparable
            .iter()
            .filter(|&&other| other != c)
            .map(|&other| profiles[other].as_ref().expect("comparable"))
            .collect();
        let mean = mean_line_score(own, &counterparts);
        column.cells[i] = Some(mean);
        column.notes[i] = Some(format!(
            "single-value comparison; similarity {mean:.4} over {} counterpart(s)",
            counterparts.len()
        ));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::AttributeDictionary;
    use crate::document::IdentityDocument;
    use crate::extract::extract;

    #[test]
    fn majority_vote_spec_cases() {
        let values = vec!["1990-02-01", "1990-02-01", "1990-12-01"];
        let c = majority_candidate(&values).unwrap();
        assert_eq!(c.value, "1990-02-01");
        assert_eq!(c.votes, 2);

        let c = majority_candidate(&["A", "B"]).unwrap();
        assert_eq!(c.value, "A");

        let c = majority_candidate(&["X"]).unwrap();
        assert_eq!(c.value, "X");
        assert!(majority_candidate::<&str>(&[]).is_none());
    }

    #[test]
    fn dob_scores_against_plurality() {
        let d = |y, m, day| DobValue::new(y, m, day);
        let column = dob_scores(&[d(1990, 2, 1), d(1990, 2, 1), d(1991, 2, 1)]);
        assert_eq!(column.cells, vec![Some(1.0), Some(1.0), Some(0.0)]);

        let column = dob_scores(&[d(1990, 2, 1), None, d(1990, 2, 1)]);
        assert_eq!(column.cells, vec![Some(1.0), None, Some(1.0)]);

        // a single carrier leaves the attribute excluded for everyone
        let column = dob_scores(&[d(1990, 2, 1), None]);
        assert_eq!(column.cells, vec![None, None]);
    }

    #[test]
    fn gender_classification_spec_cases() {
        assert_eq!(classify_gender("FEMALE"), GenderClass::Female);
        assert_eq!(classify_gender("m"), GenderClass::Male);
        assert_eq!(classify_gender("non-binary"), GenderClass::Unclassified);
    }

    fn ids(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("doc{i}")).collect()
    }

    #[test]
    fn gender_scores_by_class() {
        let genders = vec![
            Some("Female".to_string()),
            Some("f".to_string()),
            Some("MALE".to_string()),
        ];
        let column = gender_scores(&ids(3), &genders);
        assert_eq!(column.cells, vec![Some(1.0), Some(1.0), Some(0.0)]);
    }

    #[test]
    fn unclassified_gender_is_absent_and_can_exclude_the_attribute() {
        let genders = vec![Some("Female".to_string()), Some("attack helicopter".to_string())];
        let column = gender_scores(&ids(2), &genders);
        assert_eq!(column.cells, vec![None, None]);
        assert_eq!(column.warnings.len(), 1);
    }

    #[test]
    fn nic_scores_canonicalize_before_comparing() {
        let nics = vec![
            Some("931234567V".to_string()),
            Some("931234567v".to_string()),
        ];
        let column = nic_scores(&nics);
        assert_eq!(column.cells, vec![Some(1.0), Some(1.0)]);

        let nics = vec![
            Some("931234567V".to_string()),
            Some("199312345678".to_string()),
        ];
        let column = nic_scores(&nics);
        assert_eq!(column.cells, vec![Some(1.0), Some(0.0)]);
    }

    fn addr(json: &str) -> Option<AddressValue> {
        let doc = IdentityDocument::parse(json, "t").unwrap();
        extract(&doc, &AttributeDictionary::default())
            .unwrap()
            .profile
            .address
    }

    #[test]
    fn identical_structured_addresses_score_one() {
        let a = addr(r#"{"country":"Sri Lanka","city":"Colombo","line1":"12 Galle Road"}"#);
        let b = addr(r#"{"country":"LK","city":"colombo","line1":"12 Galle Road"}"#);
        let column = address_scores(&ids(2), &[a, b]);
        assert_eq!(column.cells, vec![Some(1.0), Some(1.0)]);
    }

    #[test]
    fn country_gate_mismatch_scores_zero() {
        let a = addr(r#"{"country":"Sri Lanka","city":"Colombo"}"#);
        let b = addr(r#"{"country":"India","city":"Colombo"}"#);
        let c = addr(r#"{"country":"Sri Lanka","city":"Colombo"}"#);
        let column = address_scores(&ids(3), &[a, b, c]);
        assert_eq!(column.cells, vec![Some(1.0), Some(0.0), Some(1.0)]);
        assert!(column.notes[1].as_deref().unwrap().contains("country gate failed"));
    }

    #[test]
    fn single_value_address_compares_rendered_strings() {
        let a = addr(r#"{"address":"12 Galle Rd Colombo"}"#);
        let b = addr(r#"{"address":{"line1":"12 Galle Rd","city":"Colombo"}}"#);
        let column = address_scores(&ids(2), &[a, b]);
        assert_eq!(column.cells, vec![Some(1.0), Some(1.0)]);
    }

    #[test]
    fn levels_missing_somewhere_fold_into_line_text() {
        // city is universal, province is not; provinces join the free text
        let a = addr(r#"{"city":"Colombo","province":"Western","line1":"12 Galle Road"}"#);
        let b = addr(r#"{"city":"Colombo","line1":"Western 12 Galle Road"}"#);
        let column = address_scores(&ids(2), &[a, b]);
        assert_eq!(column.cells, vec![Some(1.0), Some(1.0)]);
    }

    #[test]
    fn letterless_single_addresses_are_excluded() {
        let a = addr(r#"{"address":"123 456"}"#);
        let b = addr(r#"{"address":"12 Galle Rd"}"#);
        let column = address_scores(&ids(2), &[a, b]);
        assert_eq!(column.cells, vec![None, None]);
        assert_eq!(column.warnings.len(), 1);
    }

    #[test]
    fn agreeing_carriers_all_score_one() {
        let dob = DobValue::new(1990, 2, 1);
        let column = dob_scores(&[dob, dob, dob, dob]);
        assert!(column.cells.iter().all(|c| *c == Some(1.0)));
    }

    #[test]
    fn permuting_input_order_does_not_change_binary_scores() {
        let nics: Vec<Option<String>> = ["a", "b", "a", "c", "a"]
            .iter()
            .map(|s| Some(s.to_string()))
            .collect();
        let base = nic_scores(&nics);
        let perm_idx = [4usize, 2, 0, 1, 3];
        let permuted: Vec<Option<String>> =
            perm_idx.iter().map(|&i| nics[i].clone()).collect();
        let permuted_scores = nic_scores(&permuted);
        for (new_pos, &old_pos) in perm_idx.iter().enumerate() {
            assert_eq!(permuted_scores.cells[new_pos], base.cells[old_pos]);
        }
    }

    #[test]
    fn majority_always_scores_one_when_strict() {
        // 3-vs-2 split: the three majority holders score 1, others 0
        let nics: Vec<Option<String>> = ["x", "y", "x", "y", "x"]
            .iter()
            .map(|s| Some(s.to_string()))
            .collect();
        let column = nic_scores(&nics);
        let zeros = column.cells.iter().filter(|c| **c == Some(0.0)).count();
        assert_eq!(zeros, 2);
        assert_eq!(column.cells[0], Some(1.0));
    }
}
