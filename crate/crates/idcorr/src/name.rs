//! Pairwise name correlation.
//!
//! Each document's name becomes a profile of units: phonetically encoded
//! segments plus bare initials. Two profiles are aligned one-to-one (equal
//! Soundex codes first, then initials against first letters), and the
//! alignment yields two ratios over the union of units:
//!
//! * order similarity — the largest set of matched pairs that appear in the
//!   same relative order on both sides;
//! * string similarity — the summed Levenshtein similarity of the matched
//!   texts, with initial matches counting as full units.
//!
//! The pairwise score is the mean of the two, and a document's name score is
//! the mean of its pairwise scores against every other document that has a
//! name.

use crate::error::{Error, Result};
use crate::extract::NameValue;
use crate::metrics::{first_letter, levenshtein_similarity, soundex, PhoneticCode};

/// One comparable unit of a name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NameUnit {
    Segment { text: String, code: PhoneticCode },
    Initial(char),
}

impl NameUnit {
    /// A phonetically encoded segment. Fails when the text has no letters.
    pub fn segment(text: impl Into<String>) -> Result<NameUnit> {
        let text = text.into();
        let code = soundex(&text)?;
        Ok(NameUnit::Segment { text, code })
    }

    /// A single initial letter, folded to uppercase ASCII.
    pub fn initial(letter: char) -> Result<NameUnit> {
        let text = letter.to_string();
        let folded = first_letter(&text).ok_or(Error::Phonetic { word: text })?;
        Ok(NameUnit::Initial(folded))
    }

    pub fn is_initial(&self) -> bool {
        matches!(self, NameUnit::Initial(_))
    }
}

/// A document's name ready for comparison: its ordered units. Never empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NameProfile {
    doc_id: String,
    units: Vec<NameUnit>,
}

impl NameProfile {
    pub fn new(doc_id: impl Into<String>, units: Vec<NameUnit>) -> Result<NameProfile> {
        let doc_id = doc_id.into();
        if units.is_empty() {
            return Err(Error::ScoreSet {
                message: format!("name profile for {doc_id:?} has no units"),
            });
        }
        Ok(NameProfile { doc_id, units })
    }

    pub fn doc_id(&self) -> &str {
        &self.doc_id
    }

    pub fn units(&self) -> &[NameUnit] {
        &self.units
    }

    pub fn segment_count(&self) -> usize {
        self.units.iter().filter(|u| !u.is_initial()).count()
    }

    pub fn initial_count(&self) -> usize {
        self.units.iter().filter(|u| u.is_initial()).count()
    }
}

/// Builds a profile from an extracted name. Segments whose text has no
/// letters are skipped with a warning; `None` when nothing usable remains.
pub fn build_profile(doc_id: &str, name: &NameValue) -> (Option<NameProfile>, Vec<String>) {
    let mut units = Vec::new();
    let mut warnings = Vec::new();
    for segment in &name.segments {
        if segment.is_initial {
            match segment.text.chars().next().map(NameUnit::initial) {
                Some(Ok(unit)) => units.push(unit),
                _ => warnings.push(format!(
                    "{doc_id}: skipping unusable initial {:?}",
                    segment.text
                )),
            }
        } else {
            match NameUnit::segment(segment.text.clone()) {
                Ok(unit) => units.push(unit),
                Err(_) => warnings.push(format!(
                    "{doc_id}: skipping name segment {:?} with no letters",
                    segment.text
                )),
            }
        }
    }
    if units.is_empty() {
        (None, warnings)
    } else {
        (
            Some(NameProfile {
                doc_id: doc_id.to_owned(),
                units,
            }),
            warnings,
        )
    }
}

/// How two units matched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchKind {
    Phonetic,
    Initial,
}

/// A matched unit pair: positions into the two profiles' unit sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlignedPair {
    pub i: usize,
    pub j: usize,
    pub kind: MatchKind,
}

/// A one-to-one matching between the units of two profiles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentAlignment {
    pub pairs: Vec<AlignedPair>,
}

impl SegmentAlignment {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Aligns two profiles: segments pair greedily left-to-right on equal
/// phonetic codes, then leftover initials pair with leftover segments whose
/// first letter matches, then initials with equal initials.
pub fn align(p: &NameProfile, q: &NameProfile) -> SegmentAlignment {
    let (s, t, swapped) = orient(p, q);
    let mut pairs = align_oriented(s, t);
    if swapped {
        for pair in &mut pairs {
            std::mem::swap(&mut pair.i, &mut pair.j);
        }
    }
    pairs.sort_by_key(|p| p.i);
    SegmentAlignment { pairs }
}

/// Picks a deterministic driving side so that alignment and score are
/// identical whichever way a pair is presented.
fn orient<'a>(
    p: &'a NameProfile,
    q: &'a NameProfile,
) -> (&'a NameProfile, &'a NameProfile, bool) {
    match p.doc_id.cmp(&q.doc_id) {
        std::cmp::Ordering::Less => (p, q, false),
        std::cmp::Ordering::Greater => (q, p, true),
        std::cmp::Ordering::Equal => {
            let key = |profile: &NameProfile| {
                profile
                    .units
                    .iter()
                    .map(|u| match u {
                        NameUnit::Segment { text, .. } => text.clone(),
                        NameUnit::Initial(c) => c.to_string(),
                    })
                    .collect::<Vec<_>>()
            };
            if key(p) <= key(q) {
                (p, q, false)
            } else {
                (q, p, true)
            }
        }
    }
}

fn align_oriented(s: &NameProfile, t: &NameProfile) -> Vec<AlignedPair> {
    let mut s_used = vec![false; s.units.len()];
    let mut t_used = vec![false; t.units.len()];
    let mut pairs = Vec::new();

    // phonetic matches
    for (i, unit) in s.units.iter().enumerate() {
        let NameUnit::Segment { code, .. } = unit else {
            continue;
        };
        for (j, other) in t.units.iter().enumerate() {
            if t_used[j] {
                continue;
            }
            if matches!(other, NameUnit::Segment { code: c, .. } if c == code) {
                s_used[i] = true;
                t_used[j] = true;
                pairs.push(AlignedPair {
                    i,
                    j,
                    kind: MatchKind::Phonetic,
                });
                break;
            }
        }
    }

    // initials of s against first letters of t's segments, and vice versa
    for (i, unit) in s.units.iter().enumerate() {
        let NameUnit::Initial(letter) = unit else {
            continue;
        };
        if s_used[i] {
            continue;
        }
        for (j, other) in t.units.iter().enumerate() {
            if t_used[j] {
                continue;
            }
            let NameUnit::Segment { text, .. } = other else {
                continue;
            };
            if first_letter(text) == Some(*letter) {
                s_used[i] = true;
                t_used[j] = true;
                pairs.push(AlignedPair {
                    i,
                    j,
                    kind: MatchKind::Initial,
                });
                break;
            }
        }
    }
    for (j, unit) in t.units.iter().enumerate() {
        let NameUnit::Initial(letter) = unit else {
            continue;
        };
        if t_used[j] {
            continue;
        }
        for (i, other) in s.units.iter().enumerate() {
            if s_used[i] {
                continue;
            }
            let NameUnit::Segment { text, .. } = other else {
                continue;
            };
            if first_letter(text) == Some(*letter) {
                s_used[i] = true;
                t_used[j] = true;
                pairs.push(AlignedPair {
                    i,
                    j,
                    kind: MatchKind::Initial,
                });
                break;
            }
        }
    }

    // leftover initials against equal initials
    for (i, unit) in s.units.iter().enumerate() {
        let NameUnit::Initial(letter) = unit else {
            continue;
        };
        if s_used[i] {
            continue;
        }
        for (j, other) in t.units.iter().enumerate() {
            if t_used[j] {
                continue;
            }
            if matches!(other, NameUnit::Initial(c) if c == letter) {
                s_used[i] = true;
                t_used[j] = true;
                pairs.push(AlignedPair {
                    i,
                    j,
                    kind: MatchKind::Initial,
                });
                break;
            }
        }
    }

    pairs
}

/// The union size both ratios are normalized by: all units of both profiles,
/// counting each matched pair once.
fn union_count(a: &SegmentAlignment, p: &NameProfile, q: &NameProfile) -> usize {
    p.units.len() + q.units.len() - a.len()
}

/// The order-similarity numerator: the largest subset of matched pairs that
/// is strictly increasing on both sides.
pub fn in_order_matches(a: &SegmentAlignment) -> usize {
    let mut pairs: Vec<(usize, usize)> = a.pairs.iter().map(|p| (p.i, p.j)).collect();
    pairs.sort_unstable();
    // longest strictly increasing subsequence over j
    let mut tails: Vec<usize> = Vec::new();
    for (_, j) in pairs {
        match tails.binary_search(&j) {
            Ok(pos) | Err(pos) => {
                if pos == tails.len() {
                    tails.push(j);
                } else {
                    tails[pos] = j;
                }
            }
        }
    }
    tails.len()
}

/// Ratio of in-order matches to the union of units.
pub fn order_similarity(a: &SegmentAlignment, p: &NameProfile, q: &NameProfile) -> f64 {
    let union = union_count(a, p, q);
    if union == 0 {
        return 0.0;
    }
    in_order_matches(a) as f64 / union as f64
}

/// Summed Levenshtein similarity of matched texts (lowercased) over the
/// union of units; initial matches contribute a full unit.
pub fn string_similarity(a: &SegmentAlignment, p: &NameProfile, q: &NameProfile) -> f64 {
    let union = union_count(a, p, q);
    if union == 0 {
        return 0.0;
    }
    let text_of = |profile: &NameProfile, idx: usize| match &profile.units[idx] {
        NameUnit::Segment { text, .. } => text.to_lowercase(),
        NameUnit::Initial(c) => c.to_string(),
    };
    let mut sum = 0.0;
    for pair in &a.pairs {
        sum += match pair.kind {
            MatchKind::Initial => 1.0,
            MatchKind::Phonetic => {
                levenshtein_similarity(&text_of(p, pair.i), &text_of(q, pair.j))
            }
        };
    }
    sum / union as f64
}

/// The pairwise name score: the mean of order similarity and string
/// similarity. Exactly symmetric in its arguments.
pub fn pairwise_name_score(p: &NameProfile, q: &NameProfile) -> f64 {
    let (s, t, _) = orient(p, q);
    let pairs = align_oriented(s, t);
    let alignment = SegmentAlignment { pairs };
    let os = order_similarity(&alignment, s, t);
    let ss = string_similarity(&alignment, s, t);
    (os + ss) / 2.0
}

/// A document's name score: the mean of its pairwise scores against every
/// other profile. `None` when fewer than two documents carry a name.
pub fn name_score(k: usize, profiles: &[NameProfile]) -> Option<f64> {
    if profiles.len() < 2 || k >= profiles.len() {
        return None;
    }
    let mut sum = 0.0;
    for (i, other) in profiles.iter().enumerate() {
        if i != k {
            sum += pairwise_name_score(&profiles[k], other);
        }
    }
    Some(sum / (profiles.len() - 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn profile(doc_id: &str, segments: &[&str]) -> NameProfile {
        let units = segments
            .iter()
            .map(|s| NameUnit::segment(*s).unwrap())
            .collect();
        NameProfile::new(doc_id, units).unwrap()
    }

    fn profile_with_initials(doc_id: &str, initials: &[char], segments: &[&str]) -> NameProfile {
        let mut units: Vec<NameUnit> = initials
            .iter()
            .map(|c| NameUnit::initial(*c).unwrap())
            .collect();
        units.extend(segments.iter().map(|s| NameUnit::segment(*s).unwrap()));
        NameProfile::new(doc_id, units).unwrap()
    }

    #[test]
    fn profiles_carry_phonetic_codes() {
        let p = profile("a", &["Kasun", "Silva"]);
        let codes: Vec<&str> = p
            .units()
            .iter()
            .map(|u| match u {
                NameUnit::Segment { code, .. } => code.as_str(),
                NameUnit::Initial(_) => unreachable!(),
            })
            .collect();
        assert_eq!(codes, vec!["K250", "S410"]);
    }

    #[test]
    fn build_profile_splits_initials_and_skips_letterless_segments() {
        use crate::extract::{order_name_segments, NameLeaf, SegmentRank};
        let name = order_name_segments(&[
            NameLeaf {
                value: "H.W.".into(),
                source_key: "initials".into(),
                rank: SegmentRank::Canonical(1),
                position: 0,
                is_initials: true,
            },
            NameLeaf {
                value: "123".into(),
                source_key: "surname".into(),
                rank: SegmentRank::Canonical(6),
                position: 1,
                is_initials: false,
            },
        ])
        .unwrap();
        let (profile, warnings) = build_profile("d", &name);
        let profile = profile.unwrap();
        assert_eq!(
            profile.units(),
            &[NameUnit::Initial('H'), NameUnit::Initial('W')]
        );
        assert_eq!(warnings.len(), 1, "{warnings:?}");
    }

    #[test]
    fn aligns_reordered_segments_phonetically() {
        let a = align(&profile("a", &["Kasun", "Silva"]), &profile("b", &["Silva", "Kasun"]));
        assert_eq!(a.len(), 2);
        assert!(a.pairs.iter().all(|p| p.kind == MatchKind::Phonetic));
    }

    #[test]
    fn aligns_initials_to_first_letters() {
        let p = profile_with_initials("a", &['K', 'S'], &[]);
        let q = profile("b", &["Kasun", "Silva"]);
        let a = align(&p, &q);
        assert_eq!(a.len(), 2);
        assert!(a.pairs.iter().all(|p| p.kind == MatchKind::Initial));
    }

    #[test]
    fn unrelated_names_do_not_align() {
        let a = align(&profile("a", &["Perera"]), &profile("b", &["Fernando"]));
        assert!(a.is_empty());
    }

    #[test]
    fn order_similarity_spec_cases() {
        let p = profile("a", &["Kasun", "Nuwan", "Silva"]);
        let q = profile("b", &["Kasun", "Nuwan", "Silva"]);
        let a = align(&p, &q);
        assert_eq!(order_similarity(&a, &p, &q), 1.0);

        // both segments match but in swapped order: 1 in-order pair over 2
        let p = profile("a", &["Kasun", "Silva"]);
        let q = profile("b", &["Silva", "Kasun"]);
        let a = align(&p, &q);
        assert_eq!(in_order_matches(&a), 1);
        assert_eq!(order_similarity(&a, &p, &q), 0.5);

        let p = profile("a", &["Perera"]);
        let q = profile("b", &["Fernando"]);
        let a = align(&p, &q);
        assert_eq!(order_similarity(&a, &p, &q), 0.0);
    }

    #[test]
    fn string_similarity_spec_cases() {
        let p = profile("a", &["Kasun", "Silva"]);
        let q = profile("b", &["Kasun", "Silva"]);
        let a = align(&p, &q);
        assert_eq!(string_similarity(&a, &p, &q), 1.0);

        let p = profile("a", &["Kasun"]);
        let q = profile("b", &["Kasuni"]);
        let a = align(&p, &q);
        assert!((string_similarity(&a, &p, &q) - 5.0 / 6.0).abs() < 1e-12);

        let p = profile("a", &["Perera"]);
        let q = profile("b", &["Fernando"]);
        let a = align(&p, &q);
        assert_eq!(string_similarity(&a, &p, &q), 0.0);
    }

    #[test]
    fn pairwise_spec_cases() {
        assert_eq!(
            pairwise_name_score(&profile("a", &["Kasun", "Silva"]), &profile("b", &["Kasun", "Silva"])),
            1.0
        );
        let score = pairwise_name_score(&profile("a", &["Kasun"]), &profile("b", &["Kasuni"]));
        assert!((score - 11.0 / 12.0).abs() < 1e-12, "{score}");
        assert_eq!(
            pairwise_name_score(&profile("a", &["Perera"]), &profile("b", &["Fernando"])),
            0.0
        );
    }

    #[test]
    fn name_score_is_the_mean_of_pairwise_scores() {
        let profiles = vec![
            profile("a", &["Kasun", "Silva"]),
            profile("b", &["Kasun", "Silva"]),
            profile("c", &["Silva", "Kasun"]),
        ];
        // vs b: 1.0; vs c: OS 0.5, SS 1.0 -> 0.75
        assert_eq!(name_score(0, &profiles), Some(0.875));
        assert_eq!(name_score(0, &profiles[..1]), None);
    }

    #[test]
    fn identical_three_segment_profiles_score_one_for_all() {
        let profiles: Vec<NameProfile> = ["a", "b", "c"]
            .iter()
            .map(|id| profile(id, &["Ann", "Mary", "Jones"]))
            .collect();
        for k in 0..3 {
            assert_eq!(name_score(k, &profiles), Some(1.0));
        }
    }

    fn brute_force_in_order(pairs: &[(usize, usize)]) -> usize {
        let n = pairs.len();
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            let mut subset: Vec<(usize, usize)> = (0..n)
                .filter(|k| mask >> k & 1 == 1)
                .map(|k| pairs[k])
                .collect();
            subset.sort_unstable();
            let monotone = subset
                .windows(2)
                .all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1);
            if monotone {
                best = best.max(subset.len());
            }
        }
        best
    }

    fn word_pool() -> Vec<&'static str> {
        vec![
            "Kasun", "Kasuni", "Nuwan", "Silva", "Perera", "Fernando", "Ann", "Mary",
            "Jones", "Jayasinghe",
        ]
    }

    proptest! {
        #[test]
        fn pairwise_is_symmetric_and_bounded(
            left in proptest::collection::vec(0usize..10, 1..=6),
            right in proptest::collection::vec(0usize..10, 1..=6),
        ) {
            let pool = word_pool();
            let p = profile("a", &left.iter().map(|&i| pool[i]).collect::<Vec<_>>());
            let q = profile("b", &right.iter().map(|&i| pool[i]).collect::<Vec<_>>());
            let pq = pairwise_name_score(&p, &q);
            let qp = pairwise_name_score(&q, &p);
            prop_assert_eq!(pq.to_bits(), qp.to_bits());
            prop_assert!((0.0..=1.0).contains(&pq));
        }

        #[test]
        fn in_order_matches_agrees_with_brute_force(
            left in proptest::collection::vec(0usize..10, 1..=6),
            right in proptest::collection::vec(0usize..10, 1..=6),
        ) {
            let pool = word_pool();
            let p = profile("a", &left.iter().map(|&i| pool[i]).collect::<Vec<_>>());
            let q = profile("b", &right.iter().map(|&i| pool[i]).collect::<Vec<_>>());
            let a = align(&p, &q);
            let pairs: Vec<(usize, usize)> = a.pairs.iter().map(|p| (p.i, p.j)).collect();
            prop_assert_eq!(in_order_matches(&a), brute_force_in_order(&pairs));
        }

        #[test]
        fn identical_profiles_score_exactly_one(
            idx in proptest::collection::vec(0usize..10, 1..=6),
        ) {
            let pool = word_pool();
            let words: Vec<&str> = idx.iter().map(|&i| pool[i]).collect();
            let p = profile("a", &words);
            let q = profile("b", &words);
            prop_assert_eq!(pairwise_name_score(&p, &q), 1.0);
        }
    }
}
