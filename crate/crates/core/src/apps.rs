//! Applications of grammar q-gram counting: the spectrum kernel between two
//! strings and discovery of the q-gram that best separates two document
//! sets. Both run directly on grammars, so their cost scales with grammar
//! sizes rather than derived lengths.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::qgram::{self, Backend, FreqTable, WeightedText};
use crate::slp::Slp;
use crate::suffix::SuffixIndex;

/// q-gram spectrum kernel of two plain strings: the inner product of their
/// q-gram count vectors.
pub fn spectrum_kernel_plain(t1: &[u8], t2: &[u8], q: usize) -> Result<u128> {
    let a = qgram::count_naive(t1, q)?;
    let b = qgram::count_naive(t2, q)?;
    table_inner_product(&a, &b)
}

/// q-gram spectrum kernel of two grammars' derived strings, computed
/// without deriving either.
///
/// Both grammars are reduced to weighted texts, which are concatenated with
/// document tags; one suffix-array sweep then accumulates, per run of
/// suffixes sharing q bytes, each side's weighted count, and the kernel
/// adds their product. Blocks end in q-1 zero weights, so windows that
/// straddle the concatenation seam contribute nothing.
pub fn spectrum_kernel_slp(a: &Slp, b: &Slp, q: usize) -> Result<u128> {
    if q == 0 {
        return Err(Error::QZero);
    }
    if q == 1 {
        let ta = qgram::count_slp(a, 1, Backend::Naive)?;
        let tb = qgram::count_slp(b, 1, Backend::Naive)?;
        return table_inner_product(&ta, &tb);
    }
    let wa = qgram::build_weighted_text(a, q)?;
    let wb = qgram::build_weighted_text(b, q)?;
    let cat = concat_docs([wa, wb]);
    let idx = SuffixIndex::build(&cat.z);
    let n = cat.z.len();
    let mut kernel: u128 = 0;
    let (mut sum_a, mut sum_b): (u64, u64) = (0, 0);
    for i in 0..=n {
        if i == n || idx.lcp[i] < q {
            if sum_a > 0 && sum_b > 0 {
                kernel = kernel
                    .checked_add(u128::from(sum_a) * u128::from(sum_b))
                    .ok_or(Error::KernelOverflow)?;
            }
            sum_a = 0;
            sum_b = 0;
        }
        if i < n && idx.sa[i] + q <= n {
            let p = idx.sa[i];
            let sum = if cat.doc[p] == 0 { &mut sum_a } else { &mut sum_b };
            *sum = sum.checked_add(cat.w[p]).ok_or(Error::CountOverflow)?;
        }
    }
    Ok(kernel)
}

fn table_inner_product(a: &FreqTable, b: &FreqTable) -> Result<u128> {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut sum: u128 = 0;
    for (gram, c) in small.iter() {
        let d = large.get(gram);
        if d > 0 {
            sum = sum
                .checked_add(u128::from(c) * u128::from(d))
                .ok_or(Error::KernelOverflow)?;
        }
    }
    Ok(sum)
}

/// Weighted texts of several documents laid end to end, each position
/// tagged with its document index.
struct DocConcat {
    z: Vec<u8>,
    w: Vec<u64>,
    doc: Vec<u32>,
}

fn concat_docs(parts: impl IntoIterator<Item = WeightedText>) -> DocConcat {
    let mut cat = DocConcat {
        z: Vec::new(),
        w: Vec::new(),
        doc: Vec::new(),
    };
    for (d, part) in parts.into_iter().enumerate() {
        cat.z.extend_from_slice(&part.z);
        cat.w.extend_from_slice(&part.w);
        cat.doc.resize(cat.doc.len() + part.z.len(), d as u32);
    }
    cat
}

/// Whether a larger or a smaller score wins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Max,
    Min,
}

/// Winning q-gram of a discovery run, with the statistics it was scored on.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredPattern {
    pub qgram: Vec<u8>,
    /// Documents of each set containing the q-gram at least once.
    pub support1: usize,
    pub support2: usize,
    /// Total occurrences summed over each set.
    pub freq1: u64,
    pub freq2: u64,
    pub score: f64,
}

/// Support-rate difference `s1/m1 - s2/m2`: positive for q-grams typical of
/// the first set, negative for the second.
pub fn score_support_difference(s1: usize, s2: usize, m1: usize, m2: usize) -> f64 {
    s1 as f64 / m1 as f64 - s2 as f64 / m2 as f64
}

/// Chi-squared statistic of the 2x2 table (set membership against q-gram
/// presence), zero when a margin is empty so constant q-grams never win.
pub fn score_chi_square(s1: usize, s2: usize, m1: usize, m2: usize) -> f64 {
    let (a, b) = (s1 as f64, s2 as f64);
    let (c, d) = (m1 as f64 - a, m2 as f64 - b);
    let present = a + b;
    let absent = c + d;
    let denom = present * absent * (m1 as f64) * (m2 as f64);
    if denom == 0.0 {
        return 0.0;
    }
    let diff = a * d - b * c;
    (m1 + m2) as f64 * diff * diff / denom
}

/// Finds the q-gram optimizing `scorer` across two sets of grammars.
///
/// The scorer sees `(support1, support2, set1_size, set2_size)` and must be
/// a pure function of them; [`score_support_difference`] and
/// [`score_chi_square`] are the stock choices. Every q-gram occurring in
/// any document is a candidate. Ties keep the lexicographically smallest
/// q-gram, which falls out of scanning candidates in sorted order and
/// replacing the leader only on strict improvement.
///
/// All documents are reduced to one tagged weighted text, so a single
/// suffix-array sweep yields each candidate's supports and total counts per
/// set without expanding anything.
pub fn discover_optimal_qgram(
    set1: &[Slp],
    set2: &[Slp],
    q: usize,
    scorer: impl Fn(usize, usize, usize, usize) -> f64,
    objective: Objective,
) -> Result<ScoredPattern> {
    if set1.is_empty() || set2.is_empty() {
        return Err(Error::EmptySet);
    }
    if q == 0 {
        return Err(Error::QZero);
    }
    let (m1, m2) = (set1.len(), set2.len());
    if q == 1 {
        return discover_unigram(set1, set2, scorer, objective);
    }

    let mut parts = Vec::with_capacity(m1 + m2);
    for slp in set1.iter().chain(set2) {
        parts.push(qgram::build_weighted_text(slp, q)?);
    }
    let cat = concat_docs(parts);
    let idx = SuffixIndex::build(&cat.z);
    let n = cat.z.len();

    let mut best: Option<ScoredPattern> = None;
    // Positive-weight members of the current run, as (document, weight).
    let mut run: Vec<(u32, u64)> = Vec::new();
    for i in 0..=n {
        if (i == n || idx.lcp[i] < q) && !run.is_empty() {
            let (support1, support2, freq1, freq2) = run_stats(&mut run, m1)?;
            let score = scorer(support1, support2, m1, m2);
            if improves(&best, score, objective) {
                // The run's last suffix always has q bytes to give.
                let at = idx.sa[i - 1];
                best = Some(ScoredPattern {
                    qgram: cat.z[at..at + q].to_vec(),
                    support1,
                    support2,
                    freq1,
                    freq2,
                    score,
                });
            }
            run.clear();
        }
        if i < n && idx.sa[i] + q <= n {
            let p = idx.sa[i];
            if cat.w[p] > 0 {
                run.push((cat.doc[p], cat.w[p]));
            }
        }
    }
    best.ok_or(Error::NoQgram { q })
}

fn improves(best: &Option<ScoredPattern>, score: f64, objective: Objective) -> bool {
    match best {
        None => true,
        Some(b) => match objective {
            Objective::Max => score > b.score,
            Objective::Min => score < b.score,
        },
    }
}

/// Collapses a run's `(document, weight)` entries into per-set supports and
/// occurrence totals.
fn run_stats(run: &mut [(u32, u64)], m1: usize) -> Result<(usize, usize, u64, u64)> {
    run.sort_unstable_by_key(|&(d, _)| d);
    let (mut support1, mut support2) = (0usize, 0usize);
    let (mut freq1, mut freq2) = (0u64, 0u64);
    let mut prev = u32::MAX;
    for &(d, weight) in run.iter() {
        let in_set1 = (d as usize) < m1;
        if d != prev {
            if in_set1 {
                support1 += 1;
            } else {
                support2 += 1;
            }
            prev = d;
        }
        let freq = if in_set1 { &mut freq1 } else { &mut freq2 };
        *freq = freq.checked_add(weight).ok_or(Error::CountOverflow)?;
    }
    Ok((support1, support2, freq1, freq2))
}

/// q = 1 never crosses a rule split, so supports and totals come straight
/// from each document's terminal occurrence counts.
fn discover_unigram(
    set1: &[Slp],
    set2: &[Slp],
    scorer: impl Fn(usize, usize, usize, usize) -> f64,
    objective: Objective,
) -> Result<ScoredPattern> {
    let (m1, m2) = (set1.len(), set2.len());
    let mut stats: BTreeMap<u8, (usize, usize, u64, u64)> = BTreeMap::new();
    for (d, slp) in set1.iter().chain(set2).enumerate() {
        let table = qgram::count_slp(slp, 1, Backend::Naive)?;
        for (gram, count) in table.iter() {
            let e = stats.entry(gram[0]).or_default();
            if d < m1 {
                e.0 += 1;
                e.2 = e.2.checked_add(count).ok_or(Error::CountOverflow)?;
            } else {
                e.1 += 1;
                e.3 = e.3.checked_add(count).ok_or(Error::CountOverflow)?;
            }
        }
    }
    let mut best: Option<ScoredPattern> = None;
    for (&byte, &(support1, support2, freq1, freq2)) in &stats {
        let score = scorer(support1, support2, m1, m2);
        if improves(&best, score, objective) {
            best = Some(ScoredPattern {
                qgram: vec![byte],
                support1,
                support2,
                freq1,
                freq2,
                score,
            });
        }
    }
    best.ok_or(Error::NoQgram { q: 1 })
}

/// Count tables of the derived string for every length 1..=q_max, one
/// grammar-counting pass per length. Useful when a whole spectrum profile
/// is needed; costs O(q_max^2 n) overall.
pub fn all_lengths_frequencies(slp: &Slp, q_max: usize) -> Result<Vec<FreqTable>> {
    if q_max == 0 {
        return Err(Error::QZero);
    }
    (1..=q_max)
        .map(|q| qgram::count_slp(slp, q, Backend::Sa))
        .collect()
}
