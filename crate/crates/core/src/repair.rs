//! Grammar compression by recursive pairing.
//!
//! Each round finds the most frequent adjacent symbol pair in the working
//! sequence, makes a rule for it, and replaces its occurrences; when no
//! pair repeats, the leftover sequence is folded into a left-leaning chain
//! of pair rules. The result derives exactly the input, so this is the
//! standard way to obtain a grammar for a plain string.
//!
//! This is the straightforward rescan variant: each round walks the whole
//! sequence twice. Rounds shrink the sequence geometrically on repetitive
//! data, which is the kind of input grammar compression is for.

use std::collections::HashMap;

use crate::slp::{Rule, RuleId, Slp};

/// Compresses `text` into a grammar deriving exactly `text`.
/// Deterministic: ties between equally frequent pairs go to the smaller
/// `(left, right)` rule-id pair. Panics on empty input, which no grammar
/// can derive.
pub fn repair_compress(text: &[u8]) -> Slp {
    assert!(!text.is_empty(), "no grammar derives the empty string");
    let mut rules: Vec<Rule> = Vec::new();
    let mut terminal_ids: [Option<RuleId>; 256] = [None; 256];
    let mut seq: Vec<RuleId> = Vec::with_capacity(text.len());
    for &b in text {
        let id = *terminal_ids[b as usize].get_or_insert_with(|| {
            rules.push(Rule::Terminal(b));
            rules.len() - 1
        });
        seq.push(id);
    }

    while let Some(pair) = most_frequent_pair(&seq) {
        rules.push(Rule::Pair(pair.0, pair.1));
        replace_pair(&mut seq, pair, rules.len() - 1);
    }

    let root = binarize_sequence(&seq, &mut rules);
    // Replacements need frequency 2, so the sequence can never shrink to a
    // lone non-final rule; the root is always the newest rule.
    debug_assert_eq!(root, rules.len() - 1);
    Slp::new(rules).expect("pairing always yields a valid grammar")
}

/// Most frequent adjacent pair, or `None` when nothing occurs twice.
///
/// Occurrences are counted left to right without overlap, so `aaa` holds
/// one `aa`, matching what [`replace_pair`] would actually rewrite. Ties
/// prefer the smaller pair, keeping the whole construction deterministic.
fn most_frequent_pair(seq: &[RuleId]) -> Option<(RuleId, RuleId)> {
    // Value: (count, position of the last counted occurrence), the position
    // being what lets the next overlapping occurrence be skipped.
    let mut counts: HashMap<(RuleId, RuleId), (usize, usize)> = HashMap::new();
    for i in 1..seq.len() {
        let pair = (seq[i - 1], seq[i]);
        let entry = counts.entry(pair).or_insert((0, usize::MAX));
        if entry.0 > 0 && entry.1 + 1 == i {
            continue;
        }
        *entry = (entry.0 + 1, i);
    }
    counts
        .into_iter()
        .filter(|&(_, (count, _))| count >= 2)
        .map(|(pair, (count, _))| (pair, count))
        .max_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(&a.0)))
        .map(|(pair, _)| pair)
}

/// Rewrites every left-to-right occurrence of `pair` to `id` in place.
fn replace_pair(seq: &mut Vec<RuleId>, pair: (RuleId, RuleId), id: RuleId) {
    let mut out = 0usize;
    let mut i = 0usize;
    while i < seq.len() {
        if i + 1 < seq.len() && (seq[i], seq[i + 1]) == pair {
            seq[out] = id;
            i += 2;
        } else {
            seq[out] = seq[i];
            i += 1;
        }
        out += 1;
    }
    seq.truncate(out);
}

/// Folds a sequence of rule ids into a left-leaning chain of pair rules,
/// appending to `rules`; returns the rule deriving the concatenation.
/// A single-element sequence folds to itself with no new rules.
pub fn binarize_sequence(seq: &[RuleId], rules: &mut Vec<Rule>) -> RuleId {
    assert!(!seq.is_empty(), "cannot binarize an empty sequence");
    let mut acc = seq[0];
    for &s in &seq[1..] {
        rules.push(Rule::Pair(acc, s));
        acc = rules.len() - 1;
    }
    acc
}
