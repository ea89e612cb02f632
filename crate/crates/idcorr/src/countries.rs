//! Bundled ISO 3166-1 reference table for country comparison.

use std::sync::OnceLock;
use unicode_normalization::UnicodeNormalization;

/// One ISO 3166-1 entry from the bundled table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountryEntry {
    pub name: String,
    pub alpha2: String,
    pub alpha3: String,
}

static TABLE: OnceLock<Vec<CountryEntry>> = OnceLock::new();

pub fn country_table() -> &'static [CountryEntry] {
    TABLE.get_or_init(|| {
        let raw = include_str!("../data/countries.csv");
        let mut rows = Vec::new();
        for line in raw.lines().skip(1) {
            if line.is_empty() {
                continue;
            }
            let fields = split_csv_line(line);
            assert_eq!(fields.len(), 3, "bad country row: {line}");
            rows.push(CountryEntry {
                name: fields[0].clone(),
                alpha2: fields[1].clone(),
                alpha3: fields[2].clone(),
            });
        }
        rows
    })
}

fn split_csv_line(line: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut cur = String::new();
    let mut in_quotes = false;
    for c in line.chars() {
        match c {
            '"' => in_quotes = !in_quotes,
            ',' if !in_quotes => fields.push(std::mem::take(&mut cur)),
            _ => cur.push(c),
        }
    }
    fields.push(cur);
    fields
}

/// Folds a name for comparison: diacritics stripped, lowercased,
/// punctuation treated as spaces, whitespace collapsed.
pub(crate) fn fold_name(value: &str) -> String {
    let mut out = String::new();
    let mut pending_space = false;
    for c in value.nfkd() {
        if c.is_alphanumeric() {
            if pending_space && !out.is_empty() {
                out.push(' ');
            }
            pending_space = false;
            out.extend(c.to_lowercase());
        } else if c.is_whitespace() || c.is_ascii_punctuation() {
            pending_space = true;
        }
        // anything else (combining marks left over from NFKD) is dropped
    }
    out
}

/// The canonical identity of a country value: an index into the bundled
/// table when the value resolves, otherwise its folded text.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CountryKey {
    Iso(usize),
    Text(String),
}

pub fn country_key(value: &str) -> CountryKey {
    let table = country_table();
    let code = value.trim().to_ascii_uppercase();
    if code.len() == 2 || code.len() == 3 {
        if let Some(idx) = table
            .iter()
            .position(|e| e.alpha2 == code || e.alpha3 == code)
        {
            return CountryKey::Iso(idx);
        }
    }
    let folded = fold_name(value);
    if let Some(idx) = table.iter().position(|e| fold_name(&e.name) == folded) {
        return CountryKey::Iso(idx);
    }
    CountryKey::Text(folded)
}

/// Whether two country values denote the same country, by folded-name
/// equality or by resolving both to the same ISO 3166-1 entry.
///
/// ```
/// assert!(idcorr::country_equivalent("Sri Lanka", "LK"));
/// assert!(!idcorr::country_equivalent("Sri Lanka", "India"));
/// ```
pub fn country_equivalent(a: &str, b: &str) -> bool {
    country_key(a) == country_key(b)
}
