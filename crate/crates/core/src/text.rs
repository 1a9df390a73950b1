//! Term normalization, singularization and normalized edit similarity.

use alloc::string::String;
use alloc::vec::Vec;

use unicode_normalization::UnicodeNormalization;

/// Canonical form used for every description-set comparison: NFC,
/// whitespace collapsed to single spaces, optionally lowercased.
pub fn normalize_term(term: &str, case_fold: bool) -> String {
    let mut collapsed = String::with_capacity(term.len());
    for word in term.split_whitespace() {
        if !collapsed.is_empty() {
            collapsed.push(' ');
        }
        collapsed.push_str(word);
    }
    if case_fold {
        collapsed.to_lowercase().nfc().collect()
    } else {
        collapsed.nfc().collect()
    }
}

/// One entry of the singularization rule table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuffixRule {
    /// Words with this suffix are already singular.
    Keep(&'static str),
    /// Words with this suffix are kept when the suffix follows a vowel.
    KeepAfterVowel(&'static str),
    /// Replace the suffix, provided at least `min_stem` characters precede it.
    Replace {
        suffix: &'static str,
        with: &'static str,
        min_stem: usize,
    },
}

/// Words shorter than this are never changed ("gas", "bus", "has").
pub const MIN_SINGULARIZE_LEN: usize = 4;

/// Ordered rule table; the first rule whose suffix matches decides.
pub const SINGULAR_RULES: &[SuffixRule] = &[
    SuffixRule::Keep("ss"),
    SuffixRule::Keep("us"),
    SuffixRule::Keep("is"),
    SuffixRule::Replace {
        suffix: "ies",
        with: "y",
        min_stem: 2,
    },
    SuffixRule::Replace {
        suffix: "sses",
        with: "ss",
        min_stem: 1,
    },
    SuffixRule::Replace {
        suffix: "xes",
        with: "x",
        min_stem: 1,
    },
    SuffixRule::Replace {
        suffix: "zes",
        with: "z",
        min_stem: 1,
    },
    SuffixRule::Replace {
        suffix: "ches",
        with: "ch",
        min_stem: 1,
    },
    SuffixRule::Replace {
        suffix: "shes",
        with: "sh",
        min_stem: 1,
    },
    SuffixRule::KeepAfterVowel("as"),
    SuffixRule::Replace {
        suffix: "s",
        with: "",
        min_stem: 1,
    },
];

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

/// Singular form of a single word according to [`SINGULAR_RULES`].
pub fn singularize_word(word: &str) -> String {
    if word.chars().count() < MIN_SINGULARIZE_LEN {
        return String::from(word);
    }
    for rule in SINGULAR_RULES {
        match *rule {
            SuffixRule::Keep(suffix) if word.ends_with(suffix) => return String::from(word),
            SuffixRule::KeepAfterVowel(suffix) if word.ends_with(suffix) => {
                let stem = &word[..word.len() - suffix.len()];
                if stem.chars().next_back().is_some_and(is_vowel) {
                    return String::from(word);
                }
            }
            SuffixRule::Replace { suffix, with, min_stem } if word.ends_with(suffix) => {
                let stem = &word[..word.len() - suffix.len()];
                if stem.chars().count() >= min_stem {
                    let mut out = String::with_capacity(stem.len() + with.len());
                    out.push_str(stem);
                    out.push_str(with);
                    return out;
                }
            }
            _ => {}
        }
    }
    String::from(word)
}

/// Word-by-word singularization. Idempotent.
pub fn singularize(term: &str) -> String {
    let mut out = String::with_capacity(term.len());
    for word in term.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(&singularize_word(word));
    }
    out
}

/// Levenshtein distance over Unicode scalar values.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    levenshtein_chars(&a, &b)
}

pub(crate) fn levenshtein_chars(a: &[char], b: &[char]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = alloc::vec![0usize; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let substitution = prev[j] + usize::from(ca != cb);
            cur[j + 1] = substitution.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        core::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// `1 - levenshtein(a, b) / max(|a|, |b|)`; two empty strings score 1.
pub fn edit_similarity(a: &str, b: &str) -> f64 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    edit_similarity_chars(&a, &b)
}

pub(crate) fn edit_similarity_chars(a: &[char], b: &[char]) -> f64 {
    let longest = a.len().max(b.len());
    if longest == 0 {
        return 1.0;
    }
    1.0 - levenshtein_chars(a, b) as f64 / longest as f64
}
