//! Pulls the five super attributes out of a document and normalizes their
//! values.
//!
//! Name segments are reordered by the canonical rank of the key they came
//! from, so a document storing `surname` + `other_names` and one storing
//! `last_name` + `first_name` produce comparable sequences. Keys that reach
//! the name attribute through an unrecognized child key keep their document
//! order, after every ranked segment.

use std::fmt;

use crate::dictionary::{AddressLevel, AttributeDictionary, DobPart, SuperAttribute};
use crate::document::IdentityDocument;
use crate::error::{Error, Result};

/// Where a name segment sorts: at its key's canonical rank, or after all
/// ranked segments in document order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SegmentRank {
    Canonical(usize),
    DocumentOrder,
}

/// One whitespace-free token of a name, tagged with the key it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NameSegment {
    pub text: String,
    pub source_key: String,
    pub rank: SegmentRank,
    pub is_initial: bool,
}

/// The extracted name of one document: ordered segments plus whether any
/// came from an initials key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NameValue {
    pub segments: Vec<NameSegment>,
    pub has_initials: bool,
}

/// A calendar-valid date of birth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DobValue {
    year: i32,
    month: u8,
    day: u8,
}

impl DobValue {
    pub fn new(year: i32, month: u8, day: u8) -> Option<DobValue> {
        if !(1..=9999).contains(&year) || !(1..=12).contains(&month) {
            return None;
        }
        if day < 1 || day > days_in_month(year, month) {
            return None;
        }
        Some(DobValue { year, month, day })
    }

    pub fn year(&self) -> i32 {
        self.year
    }

    pub fn month(&self) -> u8 {
        self.month
    }

    pub fn day(&self) -> u8 {
        self.day
    }
}

impl fmt::Display for DobValue {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "{:04}-{:02}-{:02}", self.year, self.month, self.day)
    }
}

fn days_in_month(year: i32, month: u8) -> u8 {
    match month {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 => {
            if year % 4 == 0 && (year % 100 != 0 || year % 400 == 0) {
                29
            } else {
                28
            }
        }
        _ => 0,
    }
}

/// One part of a structured address, in document order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AddressPart {
    pub kind: AddressPartKind,
    pub value: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AddressPartKind {
    Level(AddressLevel),
    Line,
}

/// A structured address: hierarchical levels plus free line text, kept in
/// the order the document presented them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredAddress {
    parts: Vec<AddressPart>,
}

impl StructuredAddress {
    pub fn parts(&self) -> &[AddressPart] {
        &self.parts
    }

    /// The value at a hierarchical level, if the document carries it.
    pub fn level(&self, level: AddressLevel) -> Option<&str> {
        self.parts.iter().find_map(|p| match p.kind {
            AddressPartKind::Level(l) if l == level => Some(p.value.as_str()),
            _ => None,
        })
    }

    pub fn lines(&self) -> impl Iterator<Item = &str> {
        self.parts.iter().filter_map(|p| match p.kind {
            AddressPartKind::Line => Some(p.value.as_str()),
            _ => None,
        })
    }

    /// Every part value joined by single spaces, in document order.
    pub fn rendered(&self) -> String {
        let values: Vec<&str> = self.parts.iter().map(|p| p.value.as_str()).collect();
        values.join(" ")
    }
}

/// An extracted address: structured parts, or one undivided string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AddressValue {
    Structured(StructuredAddress),
    SingleValue(String),
}

impl AddressValue {
    /// The address as one string, for single-value comparison.
    pub fn rendered(&self) -> String {
        match self {
            AddressValue::Structured(s) => s.rendered(),
            AddressValue::SingleValue(text) => text.clone(),
        }
    }
}

/// The values a document carries for each super attribute. A field is
/// absent when no key of that attribute matched (or its value was unusable).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractedProfile {
    pub doc_id: String,
    pub name: Option<NameValue>,
    pub dob: Option<DobValue>,
    pub gender: Option<String>,
    pub address: Option<AddressValue>,
    pub nic: Option<String>,
}

impl ExtractedProfile {
    pub fn has(&self, attribute: SuperAttribute) -> bool {
        match attribute {
            SuperAttribute::Name => self.name.is_some(),
            SuperAttribute::DateOfBirth => self.dob.is_some(),
            SuperAttribute::Gender => self.gender.is_some(),
            SuperAttribute::Address => self.address.is_some(),
            SuperAttribute::Nic => self.nic.is_some(),
        }
    }
}

/// Extraction output: the profile plus any non-fatal warnings.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub profile: ExtractedProfile,
    pub warnings: Vec<String>,
}

/// A raw name leaf before ordering: its value, the key that classified it,
/// and its position in the flattened document.
#[derive(Debug, Clone)]
pub struct NameLeaf {
    pub value: String,
    pub source_key: String,
    pub rank: SegmentRank,
    pub position: usize,
    pub is_initials: bool,
}

/// Splits raw name leaves into segments and sorts them by
/// `(rank, document position)`. Multi-word values become one segment per
/// token, keeping their in-value order; initials values split into single
/// letters. Returns `None` when no usable segment remains.
pub fn order_name_segments(leaves: &[NameLeaf]) -> Option<NameValue> {
    let mut segments: Vec<(SegmentRank, usize, NameSegment)> = Vec::new();
    for leaf in leaves {
        if leaf.is_initials {
            for chunk in leaf.value.split(|c: char| !c.is_alphabetic()) {
                for letter in chunk.chars() {
                    segments.push((
                        leaf.rank,
                        leaf.position,
                        NameSegment {
                            text: letter.to_string(),
                            source_key: leaf.source_key.clone(),
                            rank: leaf.rank,
                            is_initial: true,
                        },
                    ));
                }
            }
        } else {
            for token in leaf.value.split_whitespace() {
                segments.push((
                    leaf.rank,
                    leaf.position,
                    NameSegment {
                        text: token.to_string(),
                        source_key: leaf.source_key.clone(),
                        rank: leaf.rank,
                        is_initial: false,
                    },
                ));
            }
        }
    }
    if segments.is_empty() {
        return None;
    }
    segments.sort_by_key(|(rank, position, _)| (*rank, *position));
    let has_initials = segments.iter().any(|(_, _, s)| s.is_initial);
    Some(NameValue {
        segments: segments.into_iter().map(|(_, _, s)| s).collect(),
        has_initials,
    })
}

/// Parses a single-leaf date of birth. Accepted forms, tried in order:
/// `YYYY-MM-DD`, `DD/MM/YYYY`, `DD.MM.YYYY`, `DD Month YYYY`.
pub fn parse_dob(text: &str) -> Option<DobValue> {
    let text = text.trim();
    if let Some((y, m, d)) = split3(text, '-') {
        if let Some(dob) = numeric_dob(y, m, d, true) {
            return Some(dob);
        }
    }
    for sep in ['/', '.'] {
        if let Some((d, m, y)) = split3(text, sep) {
            if let Some(dob) = numeric_dob(y, m, d, false) {
                return Some(dob);
            }
        }
    }
    let words: Vec<&str> = text.split_whitespace().collect();
    if let [d, month_name, y] = words[..] {
        if let (Ok(day), Some(month), Ok(year)) =
            (d.parse(), month_number(month_name), y.parse())
        {
            return DobValue::new(year, month, day);
        }
    }
    None
}

fn split3(text: &str, sep: char) -> Option<(&str, &str, &str)> {
    let mut parts = text.split(sep);
    let a = parts.next()?;
    let b = parts.next()?;
    let c = parts.next()?;
    if parts.next().is_some() {
        return None;
    }
    Some((a, b, c))
}

fn numeric_dob(y: &str, m: &str, d: &str, year_first: bool) -> Option<DobValue> {
    // a 4-digit year disambiguates YYYY-MM-DD from DD/MM/YYYY input
    if year_first && y.len() < 3 {
        return None;
    }
    DobValue::new(y.trim().parse().ok()?, m.trim().parse().ok()?, d.trim().parse().ok()?)
}

fn month_number(name: &str) -> Option<u8> {
    const MONTHS: [&str; 12] = [
        "january", "february", "march", "april", "may", "june", "july", "august",
        "september", "october", "november", "december",
    ];
    let lower = name.to_lowercase();
    MONTHS
        .iter()
        .position(|m| **m == lower || (lower.len() == 3 && m.starts_with(&lower)))
        .map(|p| p as u8 + 1)
}

/// Canonical form used to compare national identification codes: uppercase
/// with all whitespace removed.
pub fn canonical_nic(raw: &str) -> String {
    raw.chars()
        .filter(|c| !c.is_whitespace())
        .flat_map(|c| c.to_uppercase())
        .collect()
}

/// Extracts the five super attributes from one document.
///
/// Non-fatal problems (an unparseable date, a letterless name) become
/// warnings with the field left absent. A document asserting two different
/// values for a scalar attribute is an error.
pub fn extract(doc: &IdentityDocument, dict: &AttributeDictionary) -> Result<Extraction> {
    let mut warnings = Vec::new();
    let mut name_leaves: Vec<NameLeaf> = Vec::new();
    let mut dob_single: Vec<(String, Option<DobValue>)> = Vec::new();
    let mut dob_children: Vec<(Vec<String>, DobPart, String)> = Vec::new();
    let mut genders: Vec<String> = Vec::new();
    let mut nics: Vec<String> = Vec::new();
    let mut address_parts: Vec<AddressPart> = Vec::new();
    let mut address_single: Vec<String> = Vec::new();

    for (position, leaf) in doc.flatten().into_iter().enumerate() {
        let path: Vec<String> = leaf
            .path
            .iter()
            .map(|k| crate::dictionary::normalize_key(k))
            .collect::<Result<_>>()?;
        let Some(m) = dict.classify_key(&path) else {
            continue;
        };
        let leaf_token = path.last().expect("flatten never yields empty paths");
        let matched_token = &path[path.len() - 1 - m.depth_above_leaf];
        let value = leaf.value.to_owned();
        match m.attribute {
            SuperAttribute::Name => {
                let (rank, source_key, is_initials) = if m.depth_above_leaf == 0 {
                    (
                        SegmentRank::Canonical(m.name_rank.expect("name match carries a rank")),
                        matched_token.clone(),
                        dict.is_initials_key(matched_token),
                    )
                } else {
                    // unrecognized child of a name object: document order
                    (SegmentRank::DocumentOrder, leaf_token.clone(), false)
                };
                name_leaves.push(NameLeaf {
                    value,
                    source_key,
                    rank,
                    position,
                    is_initials,
                });
            }
            SuperAttribute::DateOfBirth => {
                if m.depth_above_leaf == 0 {
                    let parsed = parse_dob(&value);
                    dob_single.push((value, parsed));
                } else if let Some(part) = dict.dob_part(leaf_token) {
                    let parent = path[..path.len() - 1].to_vec();
                    dob_children.push((parent, part, value));
                } else {
                    warnings.push(format!(
                        "{}: ignoring unrecognized date-of-birth child key {:?}",
                        doc.doc_id(),
                        leaf_token
                    ));
                }
            }
            SuperAttribute::Gender => genders.push(value),
            SuperAttribute::Nic => nics.push(value),
            SuperAttribute::Address => {
                if m.depth_above_leaf == 0 {
                    if let Some(level) = dict.address_level(matched_token) {
                        if address_parts
                            .iter()
                            .any(|p| p.kind == AddressPartKind::Level(level))
                        {
                            warnings.push(format!(
                                "{}: ignoring duplicate address level {:?}",
                                doc.doc_id(),
                                level.as_str()
                            ));
                        } else {
                            address_parts.push(AddressPart {
                                kind: AddressPartKind::Level(level),
                                value,
                            });
                        }
                    } else if matched_token == "address" {
                        address_single.push(value);
                    } else {
                        address_parts.push(AddressPart {
                            kind: AddressPartKind::Line,
                            value,
                        });
                    }
                } else {
                    // child of an address object with a key of its own:
                    // keep it as free line text in document order
                    address_parts.push(AddressPart {
                        kind: AddressPartKind::Line,
                        value,
                    });
                }
            }
        }
    }

    let name = assemble_name(doc.doc_id(), name_leaves, &mut warnings);
    let dob = assemble_dob(doc.doc_id(), dob_single, dob_children, &mut warnings)?;
    let gender = assemble_scalar(doc.doc_id(), "gender", genders, |v| {
        v.trim().to_lowercase()
    })?;
    let nic = assemble_scalar(doc.doc_id(), "nic", nics, canonical_nic)?;
    let address = assemble_address(address_parts, address_single);

    Ok(Extraction {
        profile: ExtractedProfile {
            doc_id: doc.doc_id().to_owned(),
            name,
            dob,
            gender,
            address,
            nic,
        },
        warnings,
    })
}

fn assemble_name(
    doc_id: &str,
    leaves: Vec<NameLeaf>,
    warnings: &mut Vec<String>,
) -> Option<NameValue> {
    if leaves.is_empty() {
        return None;
    }
    let name = order_name_segments(&leaves);
    if name.is_none() {
        warnings.push(format!("{doc_id}: name keys contained no usable segments"));
    }
    name
}

fn assemble_dob(
    doc_id: &str,
    singles: Vec<(String, Option<DobValue>)>,
    children: Vec<(Vec<String>, DobPart, String)>,
    warnings: &mut Vec<String>,
) -> Result<Option<DobValue>> {
    let mut values: Vec<DobValue> = Vec::new();

    for (raw, parsed) in singles {
        match parsed {
            Some(dob) => values.push(dob),
            None => warnings.push(format!("{doc_id}: unparseable date of birth {raw:?}")),
        }
    }

    type DobGroup = (Vec<String>, Vec<(DobPart, String)>);
    let mut groups: Vec<DobGroup> = Vec::new();
    for (parent, part, value) in children {
        match groups.iter_mut().find(|(p, _)| *p == parent) {
            Some((_, parts)) => parts.push((part, value)),
            None => groups.push((parent, vec![(part, value)])),
        }
    }
    for (parent, parts) in groups {
        let pick = |wanted: DobPart| {
            parts
                .iter()
                .find(|(p, _)| *p == wanted)
                .and_then(|(_, v)| v.trim().parse::<i64>().ok())
        };
        let assembled = match (pick(DobPart::Year), pick(DobPart::Month), pick(DobPart::Day)) {
            (Some(y), Some(m), Some(d)) => {
                let (Ok(y), Ok(m), Ok(d)) = (i32::try_from(y), u8::try_from(m), u8::try_from(d))
                else {
                    warnings.push(format!(
                        "{doc_id}: date-of-birth components out of range under {:?}",
                        parent.join(".")
                    ));
                    continue;
                };
                DobValue::new(y, m, d)
            }
            _ => None,
        };
        match assembled {
            Some(dob) => values.push(dob),
            None => warnings.push(format!(
                "{doc_id}: incomplete or invalid date of birth under {:?}",
                parent.join(".")
            )),
        }
    }

    let mut distinct = values.clone();
    distinct.sort_by_key(|d| (d.year(), d.month(), d.day()));
    distinct.dedup();
    match distinct.len() {
        0 => Ok(None),
        1 => Ok(Some(values[0])),
        _ => Err(Error::Extraction {
            doc_id: doc_id.to_owned(),
            message: format!(
                "conflicting dates of birth: {} vs {}",
                distinct[0], distinct[1]
            ),
        }),
    }
}

fn assemble_scalar(
    doc_id: &str,
    label: &str,
    values: Vec<String>,
    canon: impl Fn(&str) -> String,
) -> Result<Option<String>> {
    let Some(first) = values.first().cloned() else {
        return Ok(None);
    };
    let first_canon = canon(&first);
    for other in &values[1..] {
        if canon(other) != first_canon {
            return Err(Error::Extraction {
                doc_id: doc_id.to_owned(),
                message: format!("conflicting {label} values: {first:?} vs {other:?}"),
            });
        }
    }
    Ok(Some(first))
}

fn assemble_address(
    parts: Vec<AddressPart>,
    singles: Vec<String>,
) -> Option<AddressValue> {
    if !parts.is_empty() {
        // fold any bare address text in with the structured parts
        let mut all = parts;
        for text in singles {
            all.push(AddressPart {
                kind: AddressPartKind::Line,
                value: text,
            });
        }
        return Some(AddressValue::Structured(StructuredAddress { parts: all }));
    }
    let joined = singles.join(" ");
    if joined.trim().is_empty() {
        None
    } else {
        Some(AddressValue::SingleValue(joined))
    }
}
