//! q-gram occurrence counting, on plain strings and on grammars.
//!
//! Four counters produce the same table by different routes. On plain text,
//! [`count_naive`] hashes every window and [`count_sa`] scans suffix-array
//! runs. On a grammar, [`count_slp`] first reduces the program to a weighted
//! text whose total size is independent of the derived length: each pair
//! rule long enough to span a q-gram contributes the block
//! `suffix(left, q-1) + prefix(right, q-1)`, weighted by how often that rule
//! occurs in the derivation tree. Windows that stay inside a block's first
//! `len - q + 1` positions are exactly the q-grams whose occurrences have
//! that rule as their topmost split, so summing weights over equal windows
//! reproduces the counts for the full derived string. The weighted text is
//! then counted by either plain-text strategy, lifted to respect weights.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::slp::{Rule, RuleTables, Slp};
use crate::suffix::SuffixIndex;

/// Occurrence counts keyed by q-gram, every count positive.
///
/// Keys are raw byte strings ordered lexicographically, so iteration and
/// the TSV rendering are deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreqTable {
    q: usize,
    counts: BTreeMap<Vec<u8>, u64>,
}

impl FreqTable {
    pub(crate) fn from_map(q: usize, counts: BTreeMap<Vec<u8>, u64>) -> FreqTable {
        debug_assert!(counts.iter().all(|(g, &c)| g.len() == q && c > 0));
        FreqTable { q, counts }
    }

    /// Builds a table from explicit entries; duplicate keys accumulate.
    /// Panics if a key's length differs from `q` or a count is zero, since
    /// such a table would break this type's invariants.
    pub fn from_pairs<K>(q: usize, pairs: impl IntoIterator<Item = (K, u64)>) -> FreqTable
    where
        K: Into<Vec<u8>>,
    {
        let mut counts: BTreeMap<Vec<u8>, u64> = BTreeMap::new();
        for (key, count) in pairs {
            let key = key.into();
            assert_eq!(key.len(), q, "q-gram key of wrong length");
            assert!(count > 0, "counts must be positive");
            *counts.entry(key).or_insert(0) += count;
        }
        FreqTable { q, counts }
    }

    /// The q this table was counted for.
    pub fn q(&self) -> usize {
        self.q
    }

    /// Count for `gram`, zero when absent.
    pub fn get(&self, gram: &[u8]) -> u64 {
        self.counts.get(gram).copied().unwrap_or(0)
    }

    /// Number of distinct q-grams.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Entries in lexicographic key order.
    pub fn iter(&self) -> impl Iterator<Item = (&[u8], u64)> + '_ {
        self.counts.iter().map(|(g, &c)| (g.as_slice(), c))
    }

    /// Sum of all counts. For a table counted from a string this equals
    /// `len - q + 1` (or zero when the string is shorter than q).
    pub fn total(&self) -> u128 {
        self.counts.values().map(|&c| u128::from(c)).sum()
    }

    /// Renders `<escaped-qgram>\t<count>` lines in key order.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (gram, count) in &self.counts {
            let _ = writeln!(out, "{}\t{count}", escape_qgram(gram));
        }
        out
    }
}

/// Occurrences aggregated per distinct q-gram, each identified by one
/// position where it occurs instead of by the bytes themselves.
///
/// Produced by the suffix-array counters, whose output would otherwise cost
/// q bytes per distinct q-gram. Entries follow suffix-array order, which is
/// the lexicographic order of the q-grams.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PositionFreqList {
    /// `(position, count)` pairs; positions are 0-based into the string the
    /// list was counted from.
    pub entries: Vec<(usize, u64)>,
}

/// A string whose positions carry occurrence multiplicities.
///
/// Position i stands for `w[i]` occurrences of the q-gram starting there;
/// zero-weight positions only provide context bytes for windows that start
/// earlier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedText {
    pub z: Vec<u8>,
    pub w: Vec<u64>,
}

impl WeightedText {
    /// Panics unless `z` and `w` have the same length, which is the type's
    /// one structural invariant.
    pub fn new(z: Vec<u8>, w: Vec<u64>) -> WeightedText {
        assert_eq!(z.len(), w.len(), "weight per byte");
        WeightedText { z, w }
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }
}

/// Which plain-text counting strategy runs under [`count_slp`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    /// Hash every window.
    Naive,
    /// Scan suffix-array runs.
    Sa,
}

/// Counts every q-gram of `text` by hashing the windows. O(q (|text|-q))
/// work; the baseline the compressed counters are measured against.
pub fn count_naive(text: &[u8], q: usize) -> Result<FreqTable> {
    if q == 0 {
        return Err(Error::QZero);
    }
    let mut counts: HashMap<&[u8], u64> = HashMap::new();
    if q <= text.len() {
        for win in text.windows(q) {
            *counts.entry(win).or_insert(0) += 1;
        }
    }
    Ok(FreqTable::from_map(
        q,
        counts.into_iter().map(|(g, c)| (g.to_vec(), c)).collect(),
    ))
}

/// Counts every q-gram of `text` in O(|text|) after suffix-array
/// construction: suffixes sharing a prefix of length q sit consecutively,
/// so each maximal run is one distinct q-gram.
pub fn count_sa(text: &[u8], q: usize) -> Result<PositionFreqList> {
    if q == 0 {
        return Err(Error::QZero);
    }
    let idx = SuffixIndex::build(text);
    let entries = scan_runs(text.len(), &idx.sa, &idx.lcp, q, |_| 1)?;
    Ok(PositionFreqList { entries })
}

/// Shared run scan over a suffix array. A run is a maximal range of
/// suffixes whose pairwise LCP stays at least q; the weights of run members
/// long enough to hold a q-gram are summed and reported against the run's
/// last member, whose suffix is always long enough whenever the sum is
/// positive.
fn scan_runs(
    n: usize,
    sa: &[usize],
    lcp: &[usize],
    q: usize,
    weight_at: impl Fn(usize) -> u64,
) -> Result<Vec<(usize, u64)>> {
    debug_assert!(q >= 1);
    let mut entries = Vec::new();
    let mut count: u64 = 0;
    for i in 0..=n {
        if (i == n || lcp[i] < q) && count > 0 {
            entries.push((sa[i - 1], count));
            count = 0;
        }
        if i < n && sa[i] + q <= n {
            count = count
                .checked_add(weight_at(sa[i]))
                .ok_or(Error::CountOverflow)?;
        }
    }
    Ok(entries)
}

/// Reduces a grammar to the weighted text whose weighted q-gram counts
/// equal the q-gram counts of the derived string.
///
/// Every pair rule deriving at least q bytes appends one block: the last
/// q-1 bytes derivable from its left child followed by the first q-1 from
/// its right child (fewer when a child is short). Windows starting in the
/// block's first `len - q + 1` positions cross the rule's split point, and
/// each stands for one occurrence per appearance of the rule in the
/// derivation tree; the trailing q-1 positions get weight zero so windows
/// never leak into the next block.
///
/// Output size is at most `2 (q-1) n` bytes for n rules, regardless of the
/// derived length. Requires q of at least 2: a 1-gram never crosses a
/// split, so the reduction has nothing to say about it (see [`count_slp`]
/// for how 1-grams are handled).
pub fn build_weighted_text(slp: &Slp, q: usize) -> Result<WeightedText> {
    match q {
        0 => return Err(Error::QZero),
        1 => return Err(Error::QTooSmall { q }),
        _ => {}
    }
    let tables = RuleTables::build(slp, q - 1)?;
    let mut z: Vec<u8> = Vec::new();
    let mut w: Vec<u64> = Vec::new();
    for (i, rule) in slp.rules().iter().enumerate() {
        let Rule::Pair(l, r) = *rule else { continue };
        if tables.len[i] < q as u64 {
            continue;
        }
        let block_len = tables.suf[l].len() + tables.pre[r].len();
        debug_assert!(q <= block_len && block_len <= 2 * (q - 1));
        z.extend_from_slice(&tables.suf[l]);
        z.extend_from_slice(&tables.pre[r]);
        w.resize(w.len() + (block_len - q + 1), tables.v_occ[i]);
        w.resize(w.len() + (q - 1), 0);
    }
    debug_assert_eq!(z.len(), w.len());
    Ok(WeightedText { z, w })
}

/// Weighted analogue of [`count_naive`]: each window contributes its start
/// position's weight.
pub fn count_weighted_naive(wt: &WeightedText, q: usize) -> Result<FreqTable> {
    if q == 0 {
        return Err(Error::QZero);
    }
    let mut counts: HashMap<&[u8], u64> = HashMap::new();
    for (i, win) in wt.z.windows(q).enumerate() {
        if wt.w[i] == 0 {
            continue;
        }
        let c = counts.entry(win).or_insert(0);
        *c = c.checked_add(wt.w[i]).ok_or(Error::CountOverflow)?;
    }
    Ok(FreqTable::from_map(
        q,
        counts.into_iter().map(|(g, c)| (g.to_vec(), c)).collect(),
    ))
}

/// Weighted analogue of [`count_sa`]: run members contribute their weights
/// instead of 1, and zero-weight runs are dropped.
pub fn count_weighted_sa(wt: &WeightedText, q: usize) -> Result<PositionFreqList> {
    if q == 0 {
        return Err(Error::QZero);
    }
    let idx = SuffixIndex::build(&wt.z);
    let entries = scan_runs(wt.z.len(), &idx.sa, &idx.lcp, q, |p| wt.w[p])?;
    Ok(PositionFreqList { entries })
}

/// Resolves a position-keyed count list into an explicit table by reading
/// q bytes of `text` at each reported position. Zero-count entries are
/// ignored; a position that does not fit in `text` is an error.
pub fn materialize(list: &PositionFreqList, text: &[u8], q: usize) -> Result<FreqTable> {
    if q == 0 {
        return Err(Error::QZero);
    }
    let mut counts: BTreeMap<Vec<u8>, u64> = BTreeMap::new();
    for &(pos, count) in &list.entries {
        if count == 0 {
            continue;
        }
        let end = pos
            .checked_add(q)
            .filter(|&e| e <= text.len())
            .ok_or(Error::PositionOutOfRange {
                pos,
                q,
                len: text.len(),
            })?;
        let c = counts.entry(text[pos..end].to_vec()).or_insert(0);
        *c = c.checked_add(count).ok_or(Error::CountOverflow)?;
    }
    Ok(FreqTable::from_map(q, counts))
}

/// Counts the q-grams of a grammar's derived string without deriving it.
///
/// For q of at least 2 this runs the weighted-text reduction and hands the
/// result to the chosen backend; the work is O(q n) plus counting a string
/// of at most `2 (q-1) n` bytes. A 1-gram occurs once per terminal in the
/// derivation tree, so q = 1 is answered directly from the occurrence
/// counts of terminal rules. A q longer than the derived string yields an
/// empty table.
pub fn count_slp(slp: &Slp, q: usize, backend: Backend) -> Result<FreqTable> {
    if q == 0 {
        return Err(Error::QZero);
    }
    if q as u64 > slp.text_len() {
        return Ok(FreqTable::from_map(q, BTreeMap::new()));
    }
    if q == 1 {
        let v_occ = crate::slp::v_occ(slp)?;
        let mut counts: BTreeMap<Vec<u8>, u64> = BTreeMap::new();
        for (i, rule) in slp.rules().iter().enumerate() {
            if let Rule::Terminal(b) = *rule {
                if v_occ[i] > 0 {
                    let c = counts.entry(vec![b]).or_insert(0);
                    *c = c.checked_add(v_occ[i]).ok_or(Error::CountOverflow)?;
                }
            }
        }
        return Ok(FreqTable::from_map(1, counts));
    }
    let wt = build_weighted_text(slp, q)?;
    match backend {
        Backend::Naive => count_weighted_naive(&wt, q),
        Backend::Sa => materialize(&count_weighted_sa(&wt, q)?, &wt.z, q),
    }
}

/// Escapes a q-gram for one TSV field: bytes in `0x21..=0x7E` except the
/// backslash stand for themselves, the backslash doubles, and everything
/// else (including space) becomes `\xHH` with uppercase hex.
pub fn escape_qgram(gram: &[u8]) -> String {
    let mut out = String::new();
    for &b in gram {
        match b {
            b'\\' => out.push_str("\\\\"),
            0x21..=0x7e => out.push(b as char),
            _ => {
                let _ = write!(out, "\\x{b:02X}");
            }
        }
    }
    out
}

/// Inverse of [`escape_qgram`]. Returns `None` for strings that no q-gram
/// escapes to (bad escape sequences or non-ASCII input); hex digits are
/// accepted in either case.
pub fn unescape_qgram(s: &str) -> Option<Vec<u8>> {
    let mut out = Vec::new();
    let mut bytes = s.bytes();
    while let Some(b) = bytes.next() {
        match b {
            b'\\' => match bytes.next()? {
                b'\\' => out.push(b'\\'),
                b'x' => {
                    let hi = (bytes.next()? as char).to_digit(16)?;
                    let lo = (bytes.next()? as char).to_digit(16)?;
                    out.push((hi * 16 + lo) as u8);
                }
                _ => return None,
            },
            0x21..=0x7e => out.push(b),
            _ => return None,
        }
    }
    Some(out)
}
