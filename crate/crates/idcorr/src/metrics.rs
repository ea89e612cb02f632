//! Phonetic encoding and normalized string similarity.
//!
//! Soundex follows the classic American rules: the first letter is kept,
//! consonants map to six digit classes, adjacent equal digits collapse, and
//! `h`/`w` are transparent between consonants of the same class while vowels
//! split them apart. Letters outside ASCII are folded to their base letter
//! first, so `Pérez` encodes like `Perez`.
//!
//! Seven similarity measures are available for side-by-side comparison; the
//! scoring pipeline itself uses normalized Levenshtein similarity.

use std::collections::BTreeMap;
use std::fmt;
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

/// A Soundex code: one uppercase letter followed by three digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhoneticCode([u8; 4]);

impl PhoneticCode {
    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.0).expect("codes are ASCII")
    }
}

impl fmt::Display for PhoneticCode {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn digit(c: u8) -> Option<u8> {
    match c {
        b'B' | b'F' | b'P' | b'V' => Some(b'1'),
        b'C' | b'G' | b'J' | b'K' | b'Q' | b'S' | b'X' | b'Z' => Some(b'2'),
        b'D' | b'T' => Some(b'3'),
        b'L' => Some(b'4'),
        b'M' | b'N' => Some(b'5'),
        b'R' => Some(b'6'),
        _ => None,
    }
}

/// Strips diacritics and keeps uppercased ASCII letters only.
fn fold_letters(word: &str) -> Vec<u8> {
    word.nfkd()
        .filter(|c| c.is_ascii_alphabetic())
        .map(|c| c.to_ascii_uppercase() as u8)
        .collect()
}

/// The first letter of a word after diacritic folding, uppercased.
pub(crate) fn first_letter(text: &str) -> Option<char> {
    fold_letters(text).first().map(|&b| b as char)
}

/// Encodes a word with classic Soundex.
///
/// ```
/// use idcorr::soundex;
/// assert_eq!(soundex("Robert").unwrap().as_str(), "R163");
/// assert_eq!(soundex("Kasun").unwrap(), soundex("Kasuni").unwrap());
/// ```
pub fn soundex(word: &str) -> Result<PhoneticCode> {
    let letters = fold_letters(word);
    let Some((&first, rest)) = letters.split_first() else {
        return Err(Error::Phonetic {
            word: word.to_owned(),
        });
    };
    let mut code = [first, b'0', b'0', b'0'];
    let mut filled = 1;
    // The first letter's class takes part in adjacency collapsing, so
    // "Pfister" encodes as P236, not P123.
    let mut last = digit(first);
    for &c in rest {
        match digit(c) {
            Some(d) => {
                if last != Some(d) {
                    code[filled] = d;
                    filled += 1;
                    if filled == 4 {
                        break;
                    }
                }
                last = Some(d);
            }
            // h and w are transparent; vowels (and y) break adjacency
            None if c != b'H' && c != b'W' => last = None,
            None => {}
        }
    }
    Ok(PhoneticCode(code))
}

/// Unit-cost edit distance over Unicode scalar values.
pub fn levenshtein_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, &ca) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let sub = diag + usize::from(ca != cb);
            diag = row[j + 1];
            row[j + 1] = sub.min(diag + 1).min(row[j] + 1);
        }
    }
    row[b.len()]
}

/// Levenshtein similarity: `1 - distance / max(|a|, |b|)`. Two empty
/// strings are fully similar.
///
/// ```
/// let sim = idcorr::levenshtein_similarity("kitten", "sitting");
/// assert!((sim - (1.0 - 3.0 / 7.0)).abs() < 1e-12);
/// ```
pub fn levenshtein_similarity(a: &str, b: &str) -> f64 {
    let max = a.chars().count().max(b.chars().count());
    if max == 0 {
        return 1.0;
    }
    1.0 - levenshtein_distance(a, b) as f64 / max as f64
}

/// The seven normalized similarity measures available for comparison runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SimilarityMeasure {
    Cosine,
    Jaccard,
    JaroWinkler,
    MetricLcs,
    NormalizedLevenshtein,
    SorensenDice,
    TwoGram,
}

impl SimilarityMeasure {
    pub const ALL: [SimilarityMeasure; 7] = [
        SimilarityMeasure::Cosine,
        SimilarityMeasure::Jaccard,
        SimilarityMeasure::JaroWinkler,
        SimilarityMeasure::MetricLcs,
        SimilarityMeasure::NormalizedLevenshtein,
        SimilarityMeasure::SorensenDice,
        SimilarityMeasure::TwoGram,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SimilarityMeasure::Cosine => "cosine",
            SimilarityMeasure::Jaccard => "jaccard",
            SimilarityMeasure::JaroWinkler => "jaro_winkler",
            SimilarityMeasure::MetricLcs => "metric_lcs",
            SimilarityMeasure::NormalizedLevenshtein => "normalized_levenshtein",
            SimilarityMeasure::SorensenDice => "sorensen_dice",
            SimilarityMeasure::TwoGram => "two_gram",
        }
    }
}

impl fmt::Display for SimilarityMeasure {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Applies one of the seven measures. All results lie in `[0, 1]`, all
/// measures are symmetric, and equal strings always score 1.
pub fn similarity(measure: SimilarityMeasure, a: &str, b: &str) -> f64 {
    if a == b {
        return 1.0;
    }
    match measure {
        SimilarityMeasure::Cosine => cosine_bigrams(a, b),
        SimilarityMeasure::Jaccard => jaccard_bigrams(a, b),
        SimilarityMeasure::JaroWinkler => jaro_winkler(a, b),
        SimilarityMeasure::MetricLcs => metric_lcs(a, b),
        SimilarityMeasure::NormalizedLevenshtein => levenshtein_similarity(a, b),
        SimilarityMeasure::SorensenDice => sorensen_dice_bigrams(a, b),
        SimilarityMeasure::TwoGram => two_gram(a, b),
    }
}

type BigramProfile = BTreeMap<(char, char), usize>;

fn bigram_profile(s: &str) -> BigramProfile {
    let chars: Vec<char> = s.chars().collect();
    let mut profile = BigramProfile::new();
    for pair in chars.windows(2) {
        *profile.entry((pair[0], pair[1])).or_insert(0) += 1;
    }
    profile
}

fn cosine_bigrams(a: &str, b: &str) -> f64 {
    let pa = bigram_profile(a);
    let pb = bigram_profile(b);
    if pa.is_empty() || pb.is_empty() {
        return 0.0;
    }
    let dot: usize = pa
        .iter()
        .filter_map(|(g, ca)| pb.get(g).map(|cb| ca * cb))
        .sum();
    let na: usize = pa.values().map(|c| c * c).sum();
    let nb: usize = pb.values().map(|c| c * c).sum();
    (dot as f64 / (na as f64 * nb as f64).sqrt()).clamp(0.0, 1.0)
}

fn jaccard_bigrams(a: &str, b: &str) -> f64 {
    let pa = bigram_profile(a);
    let pb = bigram_profile(b);
    if pa.is_empty() || pb.is_empty() {
        return 0.0;
    }
    let shared = pa.keys().filter(|g| pb.contains_key(g)).count();
    let union = pa.len() + pb.len() - shared;
    shared as f64 / union as f64
}

fn sorensen_dice_bigrams(a: &str, b: &str) -> f64 {
    let pa = bigram_profile(a);
    let pb = bigram_profile(b);
    if pa.is_empty() || pb.is_empty() {
        return 0.0;
    }
    let shared = pa.keys().filter(|g| pb.contains_key(g)).count();
    2.0 * shared as f64 / (pa.len() + pb.len()) as f64
}

/// Normalized two-gram overlap: one minus the L1 distance between bigram
/// count profiles, scaled by the total mass of both profiles.
fn two_gram(a: &str, b: &str) -> f64 {
    let pa = bigram_profile(a);
    let pb = bigram_profile(b);
    let total: usize = pa.values().sum::<usize>() + pb.values().sum::<usize>();
    if total == 0 {
        return 0.0;
    }
    let mut l1 = 0usize;
    for (g, ca) in &pa {
        l1 += ca.abs_diff(pb.get(g).copied().unwrap_or(0));
    }
    for (g, cb) in &pb {
        if !pa.contains_key(g) {
            l1 += cb;
        }
    }
    1.0 - l1 as f64 / total as f64
}

fn lcs_length(a: &[char], b: &[char]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut row = vec![0usize; b.len() + 1];
    for &ca in a {
        let mut diag = 0;
        for (j, &cb) in b.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if ca == cb {
                diag + 1
            } else {
                up.max(row[j])
            };
            diag = up;
        }
    }
    row[b.len()]
}

fn metric_lcs(a: &str, b: &str) -> f64 {
    let ca: Vec<char> = a.chars().collect();
    let cb: Vec<char> = b.chars().collect();
    let max = ca.len().max(cb.len());
    if max == 0 {
        return 1.0;
    }
    lcs_length(&ca, &cb) as f64 / max as f64
}

fn jaro(a: &[char], b: &[char]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let window = (a.len().max(b.len()) / 2).saturating_sub(1);
    let mut a_used = vec![false; a.len()];
    let mut b_used = vec![false; b.len()];
    let mut matches = 0usize;
    for (i, &ca) in a.iter().enumerate() {
        let lo = i.saturating_sub(window);
        let hi = (i + window + 1).min(b.len());
        for j in lo..hi {
            if !b_used[j] && b[j] == ca {
                a_used[i] = true;
                b_used[j] = true;
                matches += 1;
                break;
            }
        }
    }
    if matches == 0 {
        return 0.0;
    }
    let mut transpositions = 0usize;
    let mut j = 0usize;
    for (i, &used) in a_used.iter().enumerate() {
        if !used {
            continue;
        }
        while !b_used[j] {
            j += 1;
        }
        if a[i] != b[j] {
            transpositions += 1;
        }
        j += 1;
    }
    let m = matches as f64;
    (m / a.len() as f64 + m / b.len() as f64 + (m - transpositions as f64 / 2.0) / m) / 3.0
}

fn jaro_winkler(a: &str, b: &str) -> f64 {
    let ca: Vec<char> = a.chars().collect();
    let cb: Vec<char> = b.chars().collect();
    let base = jaro(&ca, &cb);
    // prefix boost kicks in above the usual 0.7 threshold, scale 0.1,
    // at most four prefix characters
    if base <= 0.7 {
        return base;
    }
    let prefix = ca
        .iter()
        .zip(&cb)
        .take(4)
        .take_while(|(x, y)| x == y)
        .count();
    (base + prefix as f64 * 0.1 * (1.0 - base)).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn soundex_spec_cases() {
        assert_eq!(soundex("Kasun").unwrap().as_str(), "K250");
        assert_eq!(soundex("Kasuni").unwrap().as_str(), "K250");
        assert_eq!(soundex("A").unwrap().as_str(), "A000");
        assert_eq!(soundex("Ashcraft").unwrap().as_str(), "A261");
        assert_eq!(soundex("Pfister").unwrap().as_str(), "P236");
        assert_eq!(soundex("Tymczak").unwrap().as_str(), "T522");
        assert_eq!(soundex("Wachs").unwrap().as_str(), "W200");
    }

    #[test]
    fn soundex_strips_diacritics() {
        assert_eq!(
            soundex("Pérez").unwrap(),
            soundex("Perez").unwrap()
        );
        assert_eq!(soundex("Müller").unwrap().as_str(), "M460");
    }

    #[test]
    fn soundex_rejects_letterless_input() {
        assert!(soundex("1234").is_err());
        assert!(soundex("").is_err());
    }

    #[test]
    fn levenshtein_spec_cases() {
        assert_eq!(levenshtein_similarity("Silva", "Silva"), 1.0);
        assert!((levenshtein_similarity("kitten", "sitting") - 4.0 / 7.0).abs() < 1e-12);
        assert_eq!(levenshtein_similarity("", "abc"), 0.0);
        assert_eq!(levenshtein_similarity("", ""), 1.0);
    }

    #[test]
    fn jaccard_night_nacht() {
        let sim = similarity(SimilarityMeasure::Jaccard, "night", "nacht");
        assert!((sim - 1.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn metric_lcs_spec_case() {
        let sim = similarity(SimilarityMeasure::MetricLcs, "abc", "axc");
        assert!((sim - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn identity_scores_one_for_every_measure() {
        for m in SimilarityMeasure::ALL {
            assert_eq!(similarity(m, "silva", "silva"), 1.0, "{m}");
            assert_eq!(similarity(m, "", ""), 1.0, "{m}");
            assert_eq!(similarity(m, "x", "x"), 1.0, "{m}");
        }
    }

    #[test]
    fn jaro_winkler_known_value() {
        // jaro(martha, marhta) = 17/18, prefix 3 -> 0.9611...
        let sim = similarity(SimilarityMeasure::JaroWinkler, "martha", "marhta");
        assert!((sim - 0.9611111111111111).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn measures_are_symmetric_and_bounded(a in "[a-z]{0,10}", b in "[a-z]{0,10}") {
            for m in SimilarityMeasure::ALL {
                let ab = similarity(m, &a, &b);
                let ba = similarity(m, &b, &a);
                prop_assert_eq!(ab, ba, "{} not symmetric", m);
                prop_assert!((0.0..=1.0).contains(&ab), "{} out of range: {}", m, ab);
            }
        }

        #[test]
        fn soundex_shape_and_case(word in "[a-zA-Z]{1,12}") {
            let code = soundex(&word).unwrap();
            let s = code.as_str();
            prop_assert!(s.len() == 4);
            prop_assert!(s.as_bytes()[0].is_ascii_uppercase());
            prop_assert!(s.as_bytes()[1..].iter().all(|b| b.is_ascii_digit()));
            prop_assert_eq!(code, soundex(&word.to_lowercase()).unwrap());
        }

        #[test]
        fn levenshtein_similarity_one_iff_equal(a in "[a-c]{1,8}", b in "[a-c]{1,8}") {
            let sim = levenshtein_similarity(&a, &b);
            prop_assert_eq!(sim == 1.0, a == b);
        }

        #[test]
        fn levenshtein_distance_satisfies_the_triangle_inequality(
            a in "[a-d]{0,12}",
            b in "[a-d]{0,12}",
            c in "[a-d]{0,12}",
        ) {
            let ac = levenshtein_distance(&a, &c);
            let through_b = levenshtein_distance(&a, &b) + levenshtein_distance(&b, &c);
            prop_assert!(ac <= through_b, "d(a,c)={} > {}", ac, through_b);
        }
    }
}
