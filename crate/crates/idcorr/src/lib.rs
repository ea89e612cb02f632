//! Correlation scoring for structured personal identity documents.
//!
//! Given a set of key-value documents that are claimed to describe the same
//! person — an identity card, a passport, a birth certificate — this crate
//! extracts five super attributes (name, date of birth, gender, address,
//! national identification code), scores how strongly each document's
//! attributes agree with the rest of the set, and averages the attribute
//! scores into one normalized correlation score per document.
//!
//! Names tolerate the representation differences real documents show:
//! segments are matched phonetically (Soundex), reordered by the canonical
//! rank of the key they came from, and compared with normalized Levenshtein
//! similarity. Exact-valued attributes (date of birth, gender, NIC) score
//! against a majority-vote candidate. Addresses gate on their hierarchical
//! levels and compare the remaining free text phonetically.
//!
//! ```
//! use idcorr::{score_set, AttributeDictionary, DocumentSet, IdentityDocument};
//!
//! let docs = DocumentSet::new(vec![
//!     IdentityDocument::parse(
//!         r#"{"full_name": "Kasun Nuwan Silva", "nic": "901234567V"}"#,
//!         "national_id",
//!     )?,
//!     IdentityDocument::parse(
//!         r#"{"surname": "Silva", "other_names": "Kasun Nuwan", "nic": "901234567v"}"#,
//!         "passport",
//!     )?,
//! ])?;
//! let report = score_set(&docs, &AttributeDictionary::default())?;
//! assert_eq!(report.documents[0].doc_id, "national_id");
//! assert!(report.documents[0].score.unwrap() > 0.8);
//! # Ok::<(), idcorr::Error>(())
//! ```

pub mod analysis;
mod countries;
mod dictionary;
mod document;
mod error;
mod extract;
mod fields;
mod metrics;
mod name;
mod report;
mod score;

pub use analysis::{DistributionRow, ScoreDistribution};
pub use countries::{country_equivalent, country_table, CountryEntry};
pub use dictionary::{
    normalize_key, AddressLevel, AttributeDictionary, DobPart, KeyMatch, SuperAttribute,
};
pub use document::{AttributeNode, DocumentSet, FlatLeaf, IdentityDocument, MAX_DEPTH};
pub use error::{Error, Result};
pub use extract::{
    canonical_nic, extract, order_name_segments, parse_dob, AddressPart, AddressPartKind,
    AddressValue, DobValue, ExtractedProfile, Extraction, NameLeaf, NameSegment, NameValue,
    SegmentRank, StructuredAddress,
};
pub use fields::{
    address_scores, classify_gender, dob_scores, gender_scores, majority_candidate, nic_scores,
    Candidate, GenderClass, ScoredColumn,
};
pub use metrics::{
    levenshtein_distance, levenshtein_similarity, similarity, soundex, PhoneticCode,
    SimilarityMeasure,
};
pub use name::{
    align, build_profile, in_order_matches, name_score, order_similarity, pairwise_name_score,
    string_similarity, AlignedPair, MatchKind, NameProfile, NameUnit, SegmentAlignment,
};
pub use report::{to_csv, to_json};
pub use score::{score_set, Cell, DocumentScore, ScoreMatrix, ScoreReport};

// The guide's code blocks compile and run as doctests, so the book cannot
// drift from the API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/documents.md")]
    mod documents {}
    #[doc = include_str!("../../../book/src/name-correlation.md")]
    mod name_correlation {}
    #[doc = include_str!("../../../book/src/field-correlation.md")]
    mod field_correlation {}
    #[doc = include_str!("../../../book/src/scoring.md")]
    mod scoring {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
