//! Suffix array and LCP array construction.
//!
//! Suffixes are compared as plain byte slices: a suffix that is a proper
//! prefix of another sorts first, and no sentinel appears in the result.
//! [`build_suffix_array`] runs the induced-sorting construction in O(n);
//! [`naive_suffix_index`] is the obviously-correct quadratic reference that
//! the fast path is tested against.

use crate::error::{Error, Result};

/// Suffix array and its LCP array, both 0-based.
///
/// `lcp[i]` is the length of the longest common prefix of the suffixes at
/// `sa[i - 1]` and `sa[i]`; `lcp[0]` is 0 by convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffixIndex {
    pub sa: Vec<usize>,
    pub lcp: Vec<usize>,
}

impl SuffixIndex {
    pub fn build(text: &[u8]) -> SuffixIndex {
        let sa = build_suffix_array(text);
        let lcp = build_lcp(text, &sa);
        SuffixIndex { sa, lcp }
    }
}

/// Inputs longer than this are rejected by [`naive_suffix_index`]; its
/// comparison sort degrades quadratically on repetitive data.
pub const NAIVE_INDEX_MAX: usize = 100_000;

/// Reference construction: sort suffix positions by byte-wise comparison
/// and scan neighbors for the LCP values.
pub fn naive_suffix_index(text: &[u8]) -> Result<SuffixIndex> {
    if text.len() > NAIVE_INDEX_MAX {
        return Err(Error::InputTooLarge {
            len: text.len(),
            max: NAIVE_INDEX_MAX,
        });
    }
    let mut sa: Vec<usize> = (0..text.len()).collect();
    sa.sort_by(|&a, &b| text[a..].cmp(&text[b..]));
    let mut lcp = vec![0usize; sa.len()];
    for i in 1..sa.len() {
        lcp[i] = common_prefix_len(&text[sa[i - 1]..], &text[sa[i]..]);
    }
    Ok(SuffixIndex { sa, lcp })
}

fn common_prefix_len(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Builds the suffix array in O(n) time by induced sorting.
///
/// Internally the text is lifted to `u32` values shifted up by one and a
/// zero sentinel is appended, which makes every suffix comparison strict;
/// the sentinel's entry is stripped before returning.
pub fn build_suffix_array(text: &[u8]) -> Vec<usize> {
    if text.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<u32> = Vec::with_capacity(text.len() + 1);
    s.extend(text.iter().map(|&b| u32::from(b) + 1));
    s.push(0);
    let sa = sais(&s, 257);
    debug_assert_eq!(sa[0], text.len());
    sa[1..].to_vec()
}

/// Longest-common-prefix array from text and suffix array, by Kasai's
/// rank-walk: processing positions in text order lets each step reuse all
/// but one byte of the previous comparison, so the total work is O(n).
pub fn build_lcp(text: &[u8], sa: &[usize]) -> Vec<usize> {
    let n = sa.len();
    let mut rank = vec![0usize; n];
    for (i, &p) in sa.iter().enumerate() {
        rank[p] = i;
    }
    let mut lcp = vec![0usize; n];
    let mut k = 0usize;
    for i in 0..n {
        let r = rank[i];
        if r == 0 {
            k = 0;
            continue;
        }
        let j = sa[r - 1];
        while i + k < n && j + k < n && text[i + k] == text[j + k] {
            k += 1;
        }
        lcp[r] = k;
        k = k.saturating_sub(1);
    }
    lcp
}

const EMPTY: usize = usize::MAX;

/// Induced-sorting suffix array over an integer alphabet.
///
/// Requires `s` to end with a unique smallest value and all values to be
/// below `sigma`. Recurses on the string of LMS-substring names until all
/// names are distinct; each level at most halves the problem.
fn sais(s: &[u32], sigma: usize) -> Vec<usize> {
    let n = s.len();
    if n == 1 {
        return vec![0];
    }

    // S-type means the suffix here sorts before the one starting next to
    // its right; runs of equal values inherit the type from the run's end.
    let mut is_s = vec![false; n];
    is_s[n - 1] = true;
    for i in (0..n - 1).rev() {
        is_s[i] = s[i] < s[i + 1] || (s[i] == s[i + 1] && is_s[i + 1]);
    }

    let mut bucket_sizes = vec![0usize; sigma];
    for &c in s {
        bucket_sizes[c as usize] += 1;
    }

    let is_lms = |i: usize| i > 0 && is_s[i] && !is_s[i - 1];
    let lms_positions: Vec<usize> = (1..n).filter(|&i| is_lms(i)).collect();

    // First induction: seeded with LMS positions in arbitrary order, it
    // leaves the LMS entries arranged by their LMS substrings.
    let sa = induce(s, &is_s, &bucket_sizes, lms_positions.iter().copied());

    // Name the LMS substrings in that order; equal neighbors share a name.
    let mut names = vec![0u32; n];
    let mut num_names = 0u32;
    let mut prev = EMPTY;
    for &p in &sa {
        if !is_lms(p) {
            continue;
        }
        if prev == EMPTY || !lms_substrings_equal(s, &is_s, prev, p) {
            num_names += 1;
        }
        names[p] = num_names - 1;
        prev = p;
    }

    let sorted_lms: Vec<usize> = if num_names as usize == lms_positions.len() {
        // All distinct: the first induction already sorted the LMS suffixes.
        sa.into_iter().filter(|&p| is_lms(p)).collect()
    } else {
        // The reduced string ends with the sentinel's name 0, which is
        // unique, so the recursion precondition holds.
        let reduced: Vec<u32> = lms_positions.iter().map(|&p| names[p]).collect();
        let sa1 = sais(&reduced, num_names as usize);
        sa1.into_iter().map(|r| lms_positions[r]).collect()
    };

    induce(s, &is_s, &bucket_sizes, sorted_lms.iter().copied())
}

/// One induced-sorting round: seed the LMS positions, sweep left-to-right
/// filling L-type entries from bucket heads, then right-to-left filling
/// S-type entries from bucket tails (which overwrites the seeds with their
/// final placement).
fn induce(
    s: &[u32],
    is_s: &[bool],
    bucket_sizes: &[usize],
    lms_in_order: impl DoubleEndedIterator<Item = usize>,
) -> Vec<usize> {
    let n = s.len();
    let mut sa = vec![EMPTY; n];

    // Seeds go to bucket tails; walking the given order backwards keeps its
    // first element frontmost within each bucket.
    let mut tails = bucket_tails(bucket_sizes);
    for p in lms_in_order.rev() {
        let c = s[p] as usize;
        tails[c] -= 1;
        sa[tails[c]] = p;
    }

    let mut heads = bucket_heads(bucket_sizes);
    for i in 0..n {
        let p = sa[i];
        if p == EMPTY || p == 0 {
            continue;
        }
        let j = p - 1;
        if !is_s[j] {
            let c = s[j] as usize;
            sa[heads[c]] = j;
            heads[c] += 1;
        }
    }

    let mut tails = bucket_tails(bucket_sizes);
    for i in (0..n).rev() {
        let p = sa[i];
        if p == EMPTY || p == 0 {
            continue;
        }
        let j = p - 1;
        if is_s[j] {
            let c = s[j] as usize;
            tails[c] -= 1;
            sa[tails[c]] = j;
        }
    }
    sa
}

/// Compares two LMS substrings (closed intervals from an LMS position up to
/// and including the next one). Equal means identical values and types all
/// the way, ending together; the sentinel stops every scan, so no bounds
/// checks are needed beyond it.
fn lms_substrings_equal(s: &[u32], is_s: &[bool], a: usize, b: usize) -> bool {
    if a == b {
        return true;
    }
    let mut i = 0;
    loop {
        let (pa, pb) = (a + i, b + i);
        if s[pa] != s[pb] || is_s[pa] != is_s[pb] {
            return false;
        }
        if i > 0 {
            let a_end = is_s[pa] && !is_s[pa - 1];
            let b_end = is_s[pb] && !is_s[pb - 1];
            if a_end || b_end {
                return a_end && b_end;
            }
        }
        i += 1;
    }
}

fn bucket_heads(sizes: &[usize]) -> Vec<usize> {
    let mut heads = Vec::with_capacity(sizes.len());
    let mut sum = 0;
    for &sz in sizes {
        heads.push(sum);
        sum += sz;
    }
    heads
}

fn bucket_tails(sizes: &[usize]) -> Vec<usize> {
    let mut tails = Vec::with_capacity(sizes.len());
    let mut sum = 0;
    for &sz in sizes {
        sum += sz;
        tails.push(sum);
    }
    tails
}
