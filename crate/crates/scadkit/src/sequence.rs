//! DNA sequence assignment with automatic complement propagation.
//!
//! Assigning a sequence to one strand fills every paired base on other
//! strands with the Watson-Crick complement. Pairing is positional: bases at
//! the same helix and offset with opposite directions pair, and the bases of
//! an insertion run pair antiparallel (first against last). `?` marks an
//! unassigned base; propagation only ever fills `?` or missing bases and
//! never overwrites a concrete one, so conflicting assignments are surfaced
//! by [`find_mismatches`] instead of being clobbered.

use std::collections::HashMap;

use thiserror::Error;

use crate::model::{Design, Domain};

/// Default scaffold sequence asset: 7249 bases, the length of M13mp18.
///
/// This build ships a deterministic stand-in with the correct length and
/// alphabet rather than the true M13mp18 genome; supply the real sequence
/// via [`assign_scaffold_sequence`] (or the CLI's `SCADKIT_M13_PATH`
/// override) when ordering physical DNA.
pub const M13_SEQUENCE: &str = include_str!("data/default_scaffold.txt");

/// Length of the M13mp18 scaffold.
pub const M13_LENGTH: usize = 7249;

#[derive(Debug, Error, PartialEq)]
pub enum SequenceError {
    #[error("illegal base {base:?} at position {index} (expected A, C, G, T, or ?)")]
    IllegalBase { index: usize, base: char },
    #[error("sequence length {got} exceeds strand base count {expected}")]
    TooLong { got: usize, expected: usize },
    #[error("strand index {0} does not exist")]
    StrandIndexOutOfRange(usize),
    #[error("design has no scaffold strand")]
    NoScaffold,
    #[error("design has {0} scaffold strands; exactly one is required")]
    MultipleScaffolds(usize),
    #[error("scaffold needs {needed} bases but the source sequence has only {available}")]
    ScaffoldTooLong { needed: usize, available: usize },
}

/// Watson-Crick complement of one base; `?` stays `?`.
pub fn complement_base(base: char) -> Option<char> {
    match base {
        'A' => Some('T'),
        'T' => Some('A'),
        'C' => Some('G'),
        'G' => Some('C'),
        '?' => Some('?'),
        _ => None,
    }
}

/// Reverse complement over the alphabet `A C G T ?`.
pub fn reverse_complement(seq: &str) -> Result<String, SequenceError> {
    let mut out = String::with_capacity(seq.len());
    let bases: Vec<char> = seq.chars().collect();
    for (index, &base) in bases.iter().enumerate().rev() {
        match complement_base(base) {
            Some(c) => out.push(c),
            None => return Err(SequenceError::IllegalBase { index, base }),
        }
    }
    Ok(out)
}

fn check_alphabet(seq: &str) -> Result<(), SequenceError> {
    for (index, base) in seq.chars().enumerate() {
        if complement_base(base).is_none() {
            return Err(SequenceError::IllegalBase { index, base });
        }
    }
    Ok(())
}

/// Address of one base on a helix: within-offset index `k` counts along the
/// strand's 5'→3' direction through an insertion run (0 everywhere else).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BaseKey {
    pub helix: usize,
    pub offset: i64,
    pub forward: bool,
    pub within: usize,
}

/// Map of every concretely assigned base position in a design.
#[derive(Debug, Clone, Default)]
pub struct BaseAssignment {
    bases: HashMap<BaseKey, char>,
}

impl BaseAssignment {
    /// Collects the bases of every sequenced strand. Loopout bases consume
    /// sequence but occupy no helix position.
    pub fn from_design(design: &Design) -> BaseAssignment {
        let mut bases = HashMap::new();
        for strand in &design.strands {
            let Some(seq) = &strand.sequence else {
                continue;
            };
            let chars: Vec<char> = seq.chars().collect();
            let mut cursor = 0usize;
            for domain in &strand.domains {
                match domain {
                    Domain::Loopout(l) => cursor += l.length,
                    Domain::Bound(b) => {
                        for (offset, count) in b.base_offsets() {
                            for within in 0..count {
                                if let Some(&c) = chars.get(cursor) {
                                    if c != '?' {
                                        bases.insert(
                                            BaseKey {
                                                helix: b.helix,
                                                offset,
                                                forward: b.forward,
                                                within,
                                            },
                                            c,
                                        );
                                    }
                                }
                                cursor += 1;
                            }
                        }
                    }
                }
            }
        }
        BaseAssignment { bases }
    }

    pub fn get(&self, key: &BaseKey) -> Option<char> {
        self.bases.get(key).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    /// Iterate over all assigned positions.
    pub fn iter(&self) -> impl Iterator<Item = (&BaseKey, &char)> {
        self.bases.iter()
    }
}

/// Base count of every covered `(helix, offset, direction)` position.
struct RunIndex {
    counts: HashMap<(usize, i64, bool), usize>,
}

impl RunIndex {
    fn build(design: &Design) -> RunIndex {
        let mut counts = HashMap::new();
        for strand in &design.strands {
            for domain in &strand.domains {
                if let Domain::Bound(b) = domain {
                    for offset in b.start..b.end {
                        counts.insert((b.helix, offset, b.forward), b.bases_at(offset));
                    }
                }
            }
        }
        RunIndex { counts }
    }

    fn get(&self, helix: usize, offset: i64, forward: bool) -> Option<usize> {
        self.counts.get(&(helix, offset, forward)).copied()
    }
}

/// Partner position of base `k` when a run of `n_self` bases pairs
/// antiparallel against a run of `n_partner` bases: positions satisfy
/// `k + partner == max(n_self, n_partner) - 1`, so equal runs pair first
/// against last and unequal runs leave the excess unpaired. The relation is
/// symmetric, which keeps complement filling and mismatch detection
/// consistent with each other.
fn partner_within(k: usize, n_self: usize, n_partner: usize) -> Option<usize> {
    let total = n_self.max(n_partner).checked_sub(1)?;
    let j = total.checked_sub(k)?;
    (j < n_partner).then_some(j)
}

/// Assigns `seq` to strand `strand_index` and propagates complements.
///
/// The sequence may be shorter than the strand; the tail is padded with `?`.
/// Every other strand that pairs with a concrete base anywhere in the design
/// gets the complement filled in at positions that are currently `?` or
/// missing. Propagation repeats until a fixed point, so a base can flow
/// through chains of paired strands. Concrete bases are never overwritten;
/// disagreements are left in place for [`find_mismatches`] to report.
pub fn assign_dna(
    design: &Design,
    strand_index: usize,
    seq: &str,
) -> Result<Design, SequenceError> {
    let strand = design
        .strands
        .get(strand_index)
        .ok_or(SequenceError::StrandIndexOutOfRange(strand_index))?;
    let seq = seq.to_ascii_uppercase();
    check_alphabet(&seq)?;
    let expected = strand.dna_length();
    let got = seq.chars().count();
    if got > expected {
        return Err(SequenceError::TooLong { got, expected });
    }
    let padded: String = seq
        .chars()
        .chain(std::iter::repeat('?'))
        .take(expected)
        .collect();

    let mut result = design.clone();
    // Keep pre-existing concrete bases on the target strand too: merge the
    // new sequence into the old, letting the new one win only over '?'.
    let merged = match &result.strands[strand_index].sequence {
        Some(old) if old.chars().count() == expected => old
            .chars()
            .zip(padded.chars())
            .map(|(o, n)| if o == '?' { n } else { o })
            .collect(),
        _ => padded,
    };
    result.strands[strand_index].sequence = Some(merged);
    propagate_complements(&mut result);
    Ok(result)
}

/// Fills `?`/missing bases from paired concrete bases until nothing changes.
fn propagate_complements(design: &mut Design) {
    loop {
        let assignment = BaseAssignment::from_design(design);
        if assignment.is_empty() {
            return;
        }
        let runs = RunIndex::build(design);
        let mut changed = false;
        for i in 0..design.strands.len() {
            if let Some(updated) = fill_strand(design, i, &assignment, &runs) {
                design.strands[i].sequence = Some(updated);
                changed = true;
            }
        }
        if !changed {
            return;
        }
    }
}

/// Returns the strand's sequence with newly fillable positions filled, or
/// `None` when nothing changed.
fn fill_strand(
    design: &Design,
    strand_index: usize,
    assignment: &BaseAssignment,
    runs: &RunIndex,
) -> Option<String> {
    let strand = &design.strands[strand_index];
    let length = strand.dna_length();
    let mut chars: Vec<char> = match &strand.sequence {
        Some(seq) => seq.chars().collect(),
        None => vec!['?'; length],
    };
    if chars.len() != length {
        // Malformed strand; validation reports it, propagation skips it.
        return None;
    }
    let mut changed = false;
    let mut cursor = 0usize;
    for domain in &strand.domains {
        match domain {
            Domain::Loopout(l) => cursor += l.length,
            Domain::Bound(b) => {
                for (offset, count) in b.base_offsets() {
                    let partner_count = runs.get(b.helix, offset, !b.forward).unwrap_or(0);
                    for within in 0..count {
                        if chars[cursor] == '?' {
                            if let Some(pk) = partner_within(within, count, partner_count) {
                                let partner = BaseKey {
                                    helix: b.helix,
                                    offset,
                                    forward: !b.forward,
                                    within: pk,
                                };
                                if let Some(base) = assignment.get(&partner) {
                                    if let Some(comp) = complement_base(base) {
                                        if comp != '?' {
                                            chars[cursor] = comp;
                                            changed = true;
                                        }
                                    }
                                }
                            }
                        }
                        cursor += 1;
                    }
                }
            }
        }
    }
    if strand.sequence.is_none() && !changed {
        // Don't materialize an all-'?' sequence on an untouched strand.
        return None;
    }
    changed.then(|| chars.into_iter().collect())
}

/// Assigns the default scaffold sequence to the single scaffold strand,
/// starting `rotation` bases into the (circular) source.
pub fn assign_m13(design: &Design, rotation: i64) -> Result<Design, SequenceError> {
    assign_scaffold_sequence(design, M13_SEQUENCE.trim(), rotation)
}

/// Assigns `source` (treated as circular) to the design's single scaffold
/// strand starting at `rotation`, then propagates complements.
pub fn assign_scaffold_sequence(
    design: &Design,
    source: &str,
    rotation: i64,
) -> Result<Design, SequenceError> {
    let scaffolds = design.scaffold_indices();
    let scaffold_index = match scaffolds.as_slice() {
        [] => return Err(SequenceError::NoScaffold),
        [one] => *one,
        many => return Err(SequenceError::MultipleScaffolds(many.len())),
    };
    let source = source.trim();
    check_alphabet(source)?;
    let bases: Vec<char> = source.chars().collect();
    let needed = design.strands[scaffold_index].dna_length();
    if needed > bases.len() {
        return Err(SequenceError::ScaffoldTooLong {
            needed,
            available: bases.len(),
        });
    }
    let start = rotation.rem_euclid(bases.len() as i64) as usize;
    let rotated: String = (0..needed)
        .map(|i| bases[(start + i) % bases.len()])
        .collect();
    assign_dna(design, scaffold_index, &rotated)
}

/// Paired position where both strands carry concrete, non-complementary
/// bases. `within` indexes into the forward-side insertion run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Mismatch {
    pub helix: usize,
    pub offset: i64,
    pub within: usize,
}

/// Lists every paired base position whose two concrete bases are not
/// Watson-Crick complements. Empty iff the design is complement-consistent.
pub fn find_mismatches(design: &Design) -> Vec<Mismatch> {
    let assignment = BaseAssignment::from_design(design);
    let runs = RunIndex::build(design);
    let mut out = Vec::new();
    for (key, &base) in assignment.iter() {
        if !key.forward {
            continue;
        }
        let own_count = runs.get(key.helix, key.offset, true).unwrap_or(0);
        let partner_count = runs.get(key.helix, key.offset, false).unwrap_or(0);
        let Some(pk) = partner_within(key.within, own_count, partner_count) else {
            continue;
        };
        let partner_key = BaseKey {
            helix: key.helix,
            offset: key.offset,
            forward: false,
            within: pk,
        };
        if let Some(partner) = assignment.get(&partner_key) {
            if complement_base(base) != Some(partner) {
                out.push(Mismatch {
                    helix: key.helix,
                    offset: key.offset,
                    within: key.within,
                });
            }
        }
    }
    out.sort_unstable();
    out
}
