//! Straight-line programs: grammars in Chomsky normal form that derive
//! exactly one string.
//!
//! A program is a list of rules. Rule `i` either emits a single byte or
//! concatenates the derivations of two strictly earlier rules, so the list
//! is its own topological order and the last rule is the root. The derived
//! string can be exponentially longer than the rule list; everything in this
//! module except [`Slp::expand`] works on the rules alone.
//!
//! Rule ids are 0-based in the API. The text format (and error messages that
//! quote rule numbers) use 1-based numbering, matching how the rules appear
//! in a file.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Index of a rule within its program.
pub type RuleId = usize;

/// Longest derived string this crate accepts, 2^63 - 1 bytes.
///
/// Keeping lengths below `i64::MAX` leaves headroom for sums of counts in
/// `u64` everywhere downstream: any occurrence count is bounded by the text
/// length, so no checked addition of two in-range values can wrap.
pub const MAX_TEXT_LEN: u64 = i64::MAX as u64;

/// One production of a straight-line program.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// Derives the single byte.
    Terminal(u8),
    /// Derives the left child's string followed by the right child's.
    /// Both ids point at strictly earlier rules; they may coincide.
    Pair(RuleId, RuleId),
}

/// A validated straight-line program together with the derived length of
/// every rule.
///
/// Construction checks the ordering constraint and computes lengths once;
/// all other operations rely on those invariants instead of re-checking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slp {
    rules: Vec<Rule>,
    lens: Vec<u64>,
}

impl Slp {
    /// Validates `rules` and computes per-rule derived lengths.
    ///
    /// Fails with [`Error::EmptyProgram`] for an empty list,
    /// [`Error::ForwardReference`] when a pair refers to itself or a later
    /// rule, and [`Error::LengthOverflow`] when any derived length exceeds
    /// [`MAX_TEXT_LEN`].
    pub fn new(rules: Vec<Rule>) -> Result<Self> {
        if rules.is_empty() {
            return Err(Error::EmptyProgram);
        }
        let mut lens: Vec<u64> = Vec::with_capacity(rules.len());
        for (i, rule) in rules.iter().enumerate() {
            let len = match *rule {
                Rule::Terminal(_) => 1,
                Rule::Pair(l, r) => {
                    if l >= i || r >= i {
                        return Err(Error::ForwardReference { rule: i + 1 });
                    }
                    lens[l]
                        .checked_add(lens[r])
                        .filter(|&s| s <= MAX_TEXT_LEN)
                        .ok_or(Error::LengthOverflow)?
                }
            };
            lens.push(len);
        }
        Ok(Slp { rules, lens })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Number of rules, often written n.
    pub fn num_rules(&self) -> usize {
        self.rules.len()
    }

    /// The root is always the last rule.
    pub fn root(&self) -> RuleId {
        self.rules.len() - 1
    }

    /// Derived length of every rule, indexed by rule id.
    pub fn lens(&self) -> &[u64] {
        &self.lens
    }

    /// Length of the string rule `id` derives.
    pub fn rule_len(&self, id: RuleId) -> u64 {
        self.lens[id]
    }

    /// Length of the derived string, often written |T|.
    pub fn text_len(&self) -> u64 {
        self.lens[self.root()]
    }

    /// Materializes the derived string, refusing once it would exceed
    /// `limit` bytes. The limit exists because a modest rule list can derive
    /// more bytes than any machine holds.
    pub fn expand(&self, limit: u64) -> Result<Vec<u8>> {
        self.expand_rule(self.root(), limit)
    }

    /// Materializes the string derived by rule `id`, subject to `limit`.
    pub fn expand_rule(&self, id: RuleId, limit: u64) -> Result<Vec<u8>> {
        let len = self.lens[id];
        if len > limit {
            return Err(Error::LimitExceeded { len, limit });
        }
        let mut out = Vec::with_capacity(len as usize);
        // Depth-first over an explicit stack; rule chains can be far deeper
        // than the call stack allows.
        let mut stack = vec![id];
        while let Some(i) = stack.pop() {
            match self.rules[i] {
                Rule::Terminal(b) => out.push(b),
                Rule::Pair(l, r) => {
                    stack.push(r);
                    stack.push(l);
                }
            }
        }
        debug_assert_eq!(out.len() as u64, len);
        Ok(out)
    }

    /// Renders the program in the line-oriented text format.
    ///
    /// Line 1 is `SLP <n>`; line i+1 describes rule i as either
    /// `T <byte>` or `N <l> <r>` with 1-based child ids. Every line ends
    /// with a single LF. [`Slp::from_str`] accepts exactly this shape.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "SLP {}", self.rules.len());
        for rule in &self.rules {
            let _ = match *rule {
                Rule::Terminal(b) => writeln!(out, "T {b}"),
                Rule::Pair(l, r) => writeln!(out, "N {} {}", l + 1, r + 1),
            };
        }
        out
    }
}

impl FromStr for Slp {
    type Err = Error;

    /// Parses the text format strictly: exact field counts, single spaces,
    /// plain decimal numbers, LF line endings including one after the last
    /// rule, and nothing after it. Rejecting sloppy input keeps the format
    /// round-trippable byte for byte.
    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text.split('\n');
        let header = lines.next().unwrap_or("");
        let n = header
            .strip_prefix("SLP ")
            .and_then(parse_decimal)
            .ok_or_else(|| Error::Format {
                line: 1,
                msg: "expected header `SLP <n>`".into(),
            })?;
        if n == 0 {
            return Err(Error::EmptyProgram);
        }
        let n: usize = n.try_into().map_err(|_| Error::Format {
            line: 1,
            msg: "rule count does not fit in memory".into(),
        })?;
        let mut rules = Vec::with_capacity(n.min(1 << 20));
        for rule_no in 1..=n {
            let line = lines.next().ok_or_else(|| Error::Format {
                line: rule_no + 1,
                msg: "file ends before the declared rule count".into(),
            })?;
            rules.push(parse_rule(line, rule_no)?);
        }
        match lines.next() {
            Some("") => {}
            Some(_) => {
                return Err(Error::Format {
                    line: n + 2,
                    msg: "content after the last rule".into(),
                })
            }
            None => {
                return Err(Error::Format {
                    line: n + 1,
                    msg: "missing newline after the last rule".into(),
                })
            }
        }
        if lines.next().is_some() {
            return Err(Error::Format {
                line: n + 2,
                msg: "content after the last rule".into(),
            });
        }
        Slp::new(rules)
    }
}

/// Parses one `T <byte>` or `N <l> <r>` line; `rule_no` is 1-based.
fn parse_rule(line: &str, rule_no: usize) -> Result<Rule> {
    let err = |msg: &str| Error::Format {
        line: rule_no + 1,
        msg: msg.into(),
    };
    let mut parts = line.split(' ');
    let rule = match parts.next() {
        Some("T") => {
            let b = parts
                .next()
                .and_then(parse_decimal)
                .filter(|&b| b <= 255)
                .ok_or_else(|| err("terminal byte must be a decimal in 0..=255"))?;
            Rule::Terminal(b as u8)
        }
        Some("N") => {
            let mut child = || {
                parts
                    .next()
                    .and_then(parse_decimal)
                    .filter(|&c| c >= 1)
                    .ok_or_else(|| err("pair children must be 1-based rule numbers"))
            };
            let l = child()?;
            let r = child()?;
            // 1-based in the file, 0-based in memory. Ordering is checked
            // by Slp::new, which reports the same 1-based rule number.
            Rule::Pair((l - 1) as RuleId, (r - 1) as RuleId)
        }
        _ => return Err(err("expected `T <byte>` or `N <l> <r>`")),
    };
    if parts.next().is_some() {
        return Err(err("unexpected extra field"));
    }
    Ok(rule)
}

/// Strict decimal: nonempty, ASCII digits only, no sign, fits in u64.
fn parse_decimal(s: &str) -> Option<u64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Counts how many times each rule's expansion occurs as a node of the
/// derivation tree: 1 for the root, and each pair rule passes its count to
/// both children. Unreferenced rules get 0. Runs once over the list.
pub fn v_occ(slp: &Slp) -> Result<Vec<u64>> {
    let n = slp.num_rules();
    let mut counts = vec![0u64; n];
    counts[n - 1] = 1;
    for i in (0..n).rev() {
        if let Rule::Pair(l, r) = slp.rules()[i] {
            let c = counts[i];
            counts[l] = counts[l].checked_add(c).ok_or(Error::CountOverflow)?;
            counts[r] = counts[r].checked_add(c).ok_or(Error::CountOverflow)?;
        }
    }
    Ok(counts)
}

/// Computes, for every rule, the first `k` bytes and the last `k` bytes of
/// its derivation (the whole derivation when it is shorter than `k`).
/// Returns `(prefixes, suffixes)`.
///
/// Children precede parents, so one forward pass suffices: a rule's prefix
/// is its left child's prefix, topped up from the right child when the left
/// side is short, and suffixes mirror that. Space is O(kn).
pub fn bounded_affixes(slp: &Slp, k: usize) -> (Vec<Vec<u8>>, Vec<Vec<u8>>) {
    let n = slp.num_rules();
    let mut pre: Vec<Vec<u8>> = Vec::with_capacity(n);
    let mut suf: Vec<Vec<u8>> = Vec::with_capacity(n);
    for rule in slp.rules() {
        let (p, s) = match *rule {
            Rule::Terminal(b) => {
                let v = if k == 0 { Vec::new() } else { vec![b] };
                (v.clone(), v)
            }
            Rule::Pair(l, r) => {
                let mut p = pre[l].clone();
                if p.len() < k {
                    let take = (k - p.len()).min(pre[r].len());
                    p.extend_from_slice(&pre[r][..take]);
                }
                let s = if suf[r].len() >= k {
                    suf[r].clone()
                } else {
                    let need = k - suf[r].len();
                    let skip = suf[l].len().saturating_sub(need);
                    let mut s = suf[l][skip..].to_vec();
                    s.extend_from_slice(&suf[r]);
                    s
                };
                (p, s)
            }
        };
        pre.push(p);
        suf.push(s);
    }
    (pre, suf)
}

/// Per-rule tables that the counting algorithms consume together: derived
/// lengths, derivation-tree occurrence counts, and affixes bounded by `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleTables {
    /// Affix bound the tables were built for.
    pub k: usize,
    /// Derived length per rule.
    pub len: Vec<u64>,
    /// Derivation-tree occurrence count per rule.
    pub v_occ: Vec<u64>,
    /// First `min(k, len)` bytes per rule.
    pub pre: Vec<Vec<u8>>,
    /// Last `min(k, len)` bytes per rule.
    pub suf: Vec<Vec<u8>>,
}

impl RuleTables {
    pub fn build(slp: &Slp, k: usize) -> Result<Self> {
        let v_occ = v_occ(slp)?;
        let (pre, suf) = bounded_affixes(slp, k);
        Ok(RuleTables {
            k,
            len: slp.lens().to_vec(),
            v_occ,
            pre,
            suf,
        })
    }
}

/// Builds the grammar of the i-th Fibonacci string: F_1 = `b`, F_2 = `a`,
/// F_i = F_{i-1} F_{i-2}. The derived length is the i-th Fibonacci number,
/// so this is the standard worst-case-compressible benchmark family.
///
/// Fails with [`Error::LengthOverflow`] once the length passes 2^63 - 1
/// (first at i = 93).
pub fn fibonacci_slp(i: usize) -> Result<Slp> {
    assert!(i >= 1, "Fibonacci strings are indexed from 1");
    let mut rules = vec![Rule::Terminal(b'b')];
    if i >= 2 {
        rules.push(Rule::Terminal(b'a'));
    }
    for j in 2..i {
        rules.push(Rule::Pair(j - 1, j - 2));
    }
    Slp::new(rules)
}

/// Generates a pseudo-random program: `alphabet_size` terminal rules (or
/// `n_rules` of them if that is smaller) followed by pair rules whose
/// children are drawn uniformly from all earlier rules.
///
/// Deterministic for a fixed `(seed, n_rules, alphabet_size)` triple. A
/// child pair whose combined length would pass [`MAX_TEXT_LEN`] is redrawn,
/// so the result always validates; terminals guarantee the redraw loop can
/// exit. Expect derived lengths around 2^(n_rules - alphabet_size); expand
/// with care.
pub fn random_slp(seed: u64, n_rules: usize, alphabet_size: usize) -> Slp {
    assert!(n_rules >= 1, "a program needs at least one rule");
    assert!(
        (1..=256).contains(&alphabet_size),
        "alphabet_size must be in 1..=256"
    );
    let mut rng = SplitMix64::new(seed);
    let n_terminals = alphabet_size.min(n_rules);
    let byte_for = |i: usize| {
        if alphabet_size <= 26 {
            b'a' + i as u8
        } else {
            i as u8
        }
    };
    let mut rules: Vec<Rule> = (0..n_terminals).map(|i| Rule::Terminal(byte_for(i))).collect();
    let mut lens: Vec<u64> = vec![1; n_terminals];
    for i in n_terminals..n_rules {
        loop {
            let l = rng.below(i as u64) as usize;
            let r = rng.below(i as u64) as usize;
            let Some(sum) = lens[l].checked_add(lens[r]).filter(|&s| s <= MAX_TEXT_LEN) else {
                continue;
            };
            rules.push(Rule::Pair(l, r));
            lens.push(sum);
            break;
        }
    }
    Slp::new(rules).expect("children precede parents by construction")
}
