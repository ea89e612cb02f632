//! The five super identity attributes and the key dictionary that maps raw
//! document keys onto them.
//!
//! The default dictionary carries the stock key sets for each attribute. A
//! JSON config file can override any of the five lists; absent fields keep
//! their defaults. For the name attribute the list order doubles as the
//! canonical concatenation rank of its segments.

use serde::Deserialize;
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

/// The five attribute classes shared by most identity documents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SuperAttribute {
    Name,
    DateOfBirth,
    Gender,
    Address,
    Nic,
}

impl SuperAttribute {
    pub const ALL: [SuperAttribute; 5] = [
        SuperAttribute::Name,
        SuperAttribute::DateOfBirth,
        SuperAttribute::Gender,
        SuperAttribute::Address,
        SuperAttribute::Nic,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SuperAttribute::Name => "name",
            SuperAttribute::DateOfBirth => "dob",
            SuperAttribute::Gender => "gender",
            SuperAttribute::Address => "address",
            SuperAttribute::Nic => "nic",
        }
    }
}

impl fmt::Display for SuperAttribute {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Lowercases a raw key, collapses runs of non-alphanumeric characters to a
/// single underscore and strips underscores at both ends.
///
/// ```
/// assert_eq!(idcorr::normalize_key("Date of Birth").unwrap(), "date_of_birth");
/// ```
pub fn normalize_key(raw: &str) -> Result<String> {
    let mut out = String::with_capacity(raw.len());
    for ch in raw.chars() {
        if ch.is_alphanumeric() {
            out.extend(ch.to_lowercase());
        } else if !out.is_empty() && !out.ends_with('_') {
            out.push('_');
        }
    }
    while out.ends_with('_') {
        out.pop();
    }
    if out.is_empty() {
        return Err(Error::KeyNormalization {
            raw: raw.to_owned(),
        });
    }
    Ok(out)
}

/// The hierarchical address levels, from widest to narrowest. Their order is
/// the gate order of the structured-address comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AddressLevel {
    Country,
    Province,
    State,
    Zipcode,
    City,
}

impl AddressLevel {
    pub const ALL: [AddressLevel; 5] = [
        AddressLevel::Country,
        AddressLevel::Province,
        AddressLevel::State,
        AddressLevel::Zipcode,
        AddressLevel::City,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            AddressLevel::Country => "country",
            AddressLevel::Province => "province",
            AddressLevel::State => "state",
            AddressLevel::Zipcode => "zipcode",
            AddressLevel::City => "city",
        }
    }

    fn from_token(token: &str) -> Option<AddressLevel> {
        AddressLevel::ALL.iter().copied().find(|l| l.as_str() == token)
    }
}

impl fmt::Display for AddressLevel {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The part of a date a child key of a date-of-birth object selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DobPart {
    Day,
    Month,
    Year,
}

const DEFAULT_NAME: &[&str] = &[
    "initials",
    "first_name",
    "middle_name",
    "name",
    "full_name",
    "surname",
    "other_names",
    "last_name",
];
const DEFAULT_DOB: &[&str] = &["date_of_birth", "dob", "birth_date"];
const DEFAULT_GENDER: &[&str] = &["gender", "sex"];
const DEFAULT_ADDRESS: &[&str] = &[
    "address", "line1", "line2", "city", "zipcode", "state", "province", "country",
];
const DEFAULT_NIC: &[&str] = &["nic"];

const DOB_DAY_CHILDREN: &[&str] = &["date", "day", "d"];
const DOB_MONTH_CHILDREN: &[&str] = &["month", "m"];
const DOB_YEAR_CHILDREN: &[&str] = &["year", "y"];

/// The key token that carries initials semantics inside the name list.
const INITIALS_TOKEN: &str = "initials";

/// Maps normalized key tokens to super attributes.
#[derive(Debug, Clone)]
pub struct AttributeDictionary {
    name_keys: Vec<String>,
    dob_keys: Vec<String>,
    gender_keys: Vec<String>,
    address_keys: Vec<String>,
    nic_keys: Vec<String>,
}

impl Default for AttributeDictionary {
    fn default() -> Self {
        AttributeDictionary {
            name_keys: DEFAULT_NAME.iter().map(|s| s.to_string()).collect(),
            dob_keys: DEFAULT_DOB.iter().map(|s| s.to_string()).collect(),
            gender_keys: DEFAULT_GENDER.iter().map(|s| s.to_string()).collect(),
            address_keys: DEFAULT_ADDRESS.iter().map(|s| s.to_string()).collect(),
            nic_keys: DEFAULT_NIC.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// How a key path classified: the super attribute it belongs to, plus the
/// canonical rank when the matched token is a name key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KeyMatch {
    pub attribute: SuperAttribute,
    /// 1-based position of the matched token in the name key list.
    pub name_rank: Option<usize>,
    /// How many path tokens above the leaf the match sits (0 = the leaf's
    /// own key matched).
    pub depth_above_leaf: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DictionaryConfig {
    name: Option<Vec<String>>,
    date_of_birth: Option<Vec<String>>,
    gender: Option<Vec<String>>,
    address: Option<Vec<String>>,
    nic: Option<Vec<String>>,
}

impl AttributeDictionary {
    /// Loads overrides from a JSON config. Fields: `name`, `date_of_birth`,
    /// `gender`, `address`, `nic`, each an ordered list of key tokens.
    /// Absent fields keep the defaults.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let config: DictionaryConfig =
            serde_json::from_str(text).map_err(|e| Error::Dictionary {
                message: e.to_string(),
            })?;
        let mut dict = AttributeDictionary::default();
        if let Some(keys) = config.name {
            dict.name_keys = normalize_list("name", keys)?;
        }
        if let Some(keys) = config.date_of_birth {
            dict.dob_keys = normalize_list("date_of_birth", keys)?;
        }
        if let Some(keys) = config.gender {
            dict.gender_keys = normalize_list("gender", keys)?;
        }
        if let Some(keys) = config.address {
            dict.address_keys = normalize_list("address", keys)?;
        }
        if let Some(keys) = config.nic {
            dict.nic_keys = normalize_list("nic", keys)?;
        }
        dict.validate()?;
        Ok(dict)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    fn validate(&self) -> Result<()> {
        let lists = [
            &self.name_keys,
            &self.dob_keys,
            &self.gender_keys,
            &self.address_keys,
            &self.nic_keys,
        ];
        let mut all: Vec<&str> = Vec::new();
        for list in lists {
            for token in list {
                if all.contains(&token.as_str()) {
                    return Err(Error::Dictionary {
                        message: format!("key token {token:?} appears under two attributes"),
                    });
                }
                all.push(token);
            }
        }
        Ok(())
    }

    /// Classifies a normalized key path. The deepest token is tried first,
    /// then each parent in turn, so `["dob", "day"]` lands on date-of-birth
    /// through its parent.
    pub fn classify_key(&self, path: &[String]) -> Option<KeyMatch> {
        for (above, token) in path.iter().rev().enumerate() {
            if let Some(rank) = self.name_rank(token) {
                return Some(KeyMatch {
                    attribute: SuperAttribute::Name,
                    name_rank: Some(rank),
                    depth_above_leaf: above,
                });
            }
            let attribute = if self.dob_keys.iter().any(|k| k == token) {
                Some(SuperAttribute::DateOfBirth)
            } else if self.gender_keys.iter().any(|k| k == token) {
                Some(SuperAttribute::Gender)
            } else if self.address_keys.iter().any(|k| k == token) {
                Some(SuperAttribute::Address)
            } else if self.nic_keys.iter().any(|k| k == token) {
                Some(SuperAttribute::Nic)
            } else {
                None
            };
            if let Some(attribute) = attribute {
                return Some(KeyMatch {
                    attribute,
                    name_rank: None,
                    depth_above_leaf: above,
                });
            }
        }
        None
    }

    /// 1-based canonical rank of a name key token, or `None` when the token
    /// is not a name key.
    pub fn name_rank(&self, token: &str) -> Option<usize> {
        self.name_keys.iter().position(|k| k == token).map(|p| p + 1)
    }

    /// Whether a name key token carries initials semantics.
    pub fn is_initials_key(&self, token: &str) -> bool {
        token == INITIALS_TOKEN && self.name_rank(token).is_some()
    }

    /// The address level a token selects, if it is a level key of this
    /// dictionary.
    pub fn address_level(&self, token: &str) -> Option<AddressLevel> {
        if self.address_keys.iter().any(|k| k == token) {
            AddressLevel::from_token(token)
        } else {
            None
        }
    }

    /// The date part a date-of-birth child key selects.
    pub fn dob_part(&self, token: &str) -> Option<DobPart> {
        if DOB_DAY_CHILDREN.contains(&token) {
            Some(DobPart::Day)
        } else if DOB_MONTH_CHILDREN.contains(&token) {
            Some(DobPart::Month)
        } else if DOB_YEAR_CHILDREN.contains(&token) {
            Some(DobPart::Year)
        } else {
            None
        }
    }

    pub fn name_keys(&self) -> &[String] {
        &self.name_keys
    }

    pub fn dob_keys(&self) -> &[String] {
        &self.dob_keys
    }

    pub fn gender_keys(&self) -> &[String] {
        &self.gender_keys
    }

    pub fn address_keys(&self) -> &[String] {
        &self.address_keys
    }

    pub fn nic_keys(&self) -> &[String] {
        &self.nic_keys
    }
}

fn normalize_list(field: &str, keys: Vec<String>) -> Result<Vec<String>> {
    if keys.is_empty() {
        return Err(Error::Dictionary {
            message: format!("attribute list {field:?} must not be empty"),
        });
    }
    keys.iter()
        .map(|k| {
            normalize_key(k).map_err(|_| Error::Dictionary {
                message: format!("key {k:?} in list {field:?} normalizes to nothing"),
            })
        })
        .collect()
}
