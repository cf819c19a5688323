//! Pure design-editing operations.
//!
//! Every operation takes a design by reference and returns a new design (or
//! an error), leaving the input untouched. Each successful edit re-validates
//! the result, so the output of any operation here passes
//! [`Design::validate`] with zero errors.
//!
//! Strand surgery follows the 5'→3' reading of the domain list:
//!
//! * [`add_nick`] removes the covalent bond between two adjacent bases,
//!   splitting one strand into a 5'-side and a 3'-side strand.
//! * [`ligate`] restores such a bond, fusing the abutting domains back
//!   together; it is the exact inverse of a nick.
//! * [`add_half_crossover`] joins a strand's 3' end on one helix to another
//!   strand's 5' end on a second helix at the same offset.
//! * [`add_full_crossover`] splits both helices at an offset and rejoins the
//!   four ends across the helices, so two strands exchange partners.

use thiserror::Error;

use crate::model::{BoundDomain, Color, Design, Domain, ExtraFields, Insertion, Strand};
use crate::validate::ValidationReport;

/// Placement of one crossover between two helices.
///
/// A half crossover joins two existing strand ends at `offset1`; a full
/// crossover cuts both helices around the bond between `offset1 - 1` and
/// `offset1` and rewires the four ends. `forward1` names the strand
/// direction on `helix1`; the partner on `helix2` is antiparallel. As a
/// special case, a half crossover with `helix1 == helix2` rejoins the two
/// halves of a nick (see [`ligate`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossoverSpec {
    pub helix1: usize,
    pub helix2: usize,
    pub offset1: i64,
    pub forward1: bool,
    pub half: bool,
}

impl CrossoverSpec {
    pub fn half(helix1: usize, helix2: usize, offset1: i64, forward1: bool) -> CrossoverSpec {
        CrossoverSpec {
            helix1,
            helix2,
            offset1,
            forward1,
            half: true,
        }
    }

    pub fn full(helix1: usize, helix2: usize, offset1: i64, forward1: bool) -> CrossoverSpec {
        CrossoverSpec {
            helix1,
            helix2,
            offset1,
            forward1,
            half: false,
        }
    }
}

#[derive(Debug, Error)]
pub enum EditError {
    #[error("no domain on helix {helix} (forward={forward}) strictly contains offset {offset}")]
    NoDomainToNick {
        helix: usize,
        offset: i64,
        forward: bool,
    },
    #[error("no strand ends to join on helices {helix1} and {helix2} at offset {offset}")]
    EndsNotFound {
        helix1: usize,
        helix2: usize,
        offset: i64,
    },
    #[error("joining these ends would close the strand into a circle")]
    WouldBeCircular,
    #[error("a full crossover needs two distinct helices")]
    SameHelixFullCrossover,
    #[error("helix {0} does not exist")]
    HelixNotFound(usize),
    #[error("no domain on helix {helix} contains offset {offset}")]
    NoDomainAtOffset { helix: usize, offset: i64 },
    #[error("offset {offset} on helix {helix} already carries a deletion")]
    DeletionAlreadyExists { helix: usize, offset: i64 },
    #[error("offset {offset} on helix {helix} already carries an insertion")]
    InsertionAlreadyExists { helix: usize, offset: i64 },
    #[error("offset {offset} on helix {helix} already carries the opposite annotation")]
    AnnotationConflict { helix: usize, offset: i64 },
    #[error("insertion length must be at least 1")]
    InvalidInsertionLength,
    #[error("strand index {0} does not exist")]
    StrandIndexOutOfRange(usize),
    #[error("strand {strand} would leave the displayed helix rows")]
    TargetRowOutOfRange { strand: usize },
    #[error("strand {strand} shifted by {delta} does not fit helix {helix}'s offset window")]
    WindowOutOfBounds {
        strand: usize,
        helix: usize,
        delta: i64,
    },
    #[error("edit would produce an invalid design:\n{0}")]
    Invalid(ValidationReport),
}

fn validated(design: Design) -> Result<Design, EditError> {
    let report = design.validate();
    if report.is_valid() {
        Ok(design)
    } else {
        Err(EditError::Invalid(report))
    }
}

/// Appends a strand, assigning it the next default palette color if it has
/// none, and re-validates the whole design.
pub fn add_strand(design: &Design, strand: Strand) -> Result<Design, EditError> {
    let mut result = design.clone();
    let index = result.strands.len();
    let mut strand = strand;
    if strand.color.is_none() {
        strand.color = Some(Color::default_for_strand(index, strand.is_scaffold));
    }
    result.strands.push(strand);
    validated(result)
}

/// Strand and domain index of the bound domain on `(helix, forward)` that
/// strictly contains `offset` (so the bond between `offset - 1` and `offset`
/// is interior to it).
fn domain_spanning_bond(
    design: &Design,
    helix: usize,
    forward: bool,
    offset: i64,
) -> Option<(usize, usize)> {
    for (i, strand) in design.strands.iter().enumerate() {
        for (k, domain) in strand.domains.iter().enumerate() {
            if let Domain::Bound(b) = domain {
                if b.helix == helix && b.forward == forward && b.start < offset && offset < b.end {
                    return Some((i, k));
                }
            }
        }
    }
    None
}

/// Removes the covalent bond between the bases at `offset - 1` and `offset`
/// on `(helix, forward)`, splitting the containing strand in two.
///
/// Both halves keep the original color and scaffold flag; the sequence, the
/// deletions/insertions, and the internal modifications partition at the
/// split point; the 5'-side strand keeps the 5' modification and the 3'-side
/// the 3' one.
pub fn add_nick(
    design: &Design,
    helix: usize,
    offset: i64,
    forward: bool,
) -> Result<Design, EditError> {
    let (si, k) =
        domain_spanning_bond(design, helix, forward, offset).ok_or(EditError::NoDomainToNick {
            helix,
            offset,
            forward,
        })?;
    let color = design.strand_color(si);
    let strand = &design.strands[si];
    let (five_side, three_side) = split_strand(strand, k, offset, color);
    let mut result = design.clone();
    result.strands.splice(si..=si, [five_side, three_side]);
    validated(result)
}

fn split_strand(strand: &Strand, k: usize, offset: i64, color: Color) -> (Strand, Strand) {
    let Domain::Bound(b) = &strand.domains[k] else {
        unreachable!("split point is always a bound domain");
    };
    let mut low = b.clone();
    let mut high = b.clone();
    low.end = offset;
    high.start = offset;
    low.deletions.retain(|&d| d < offset);
    high.deletions.retain(|&d| d >= offset);
    low.insertions.retain(|i| i.offset < offset);
    high.insertions.retain(|i| i.offset >= offset);

    // 5'→3' on a forward domain ascends offsets, so the low half is the
    // 5' side; on a reverse domain the high half is.
    let (five_part, three_part) = if b.forward { (low, high) } else { (high, low) };

    let mut five_domains: Vec<Domain> = strand.domains[..k].to_vec();
    five_domains.push(Domain::Bound(five_part));
    let mut three_domains: Vec<Domain> = vec![Domain::Bound(three_part)];
    three_domains.extend_from_slice(&strand.domains[k + 1..]);

    let split_index: usize = five_domains.iter().map(Domain::dna_length).sum();

    let (seq5, seq3) = match &strand.sequence {
        Some(seq) => {
            let chars: Vec<char> = seq.chars().collect();
            (
                Some(chars[..split_index].iter().collect::<String>()),
                Some(chars[split_index..].iter().collect::<String>()),
            )
        }
        None => (None, None),
    };

    let mut five = Strand::new(five_domains);
    five.color = Some(color);
    five.is_scaffold = strand.is_scaffold;
    five.sequence = seq5;
    five.modification_5p = strand.modification_5p.clone();
    five.extra_fields = strand.extra_fields.clone();
    let mut three = Strand::new(three_domains);
    three.color = Some(color);
    three.is_scaffold = strand.is_scaffold;
    three.sequence = seq3;
    three.modification_3p = strand.modification_3p.clone();
    three.extra_fields = strand.extra_fields.clone();
    for (&base_index, id) in &strand.modifications_internal {
        if base_index < split_index {
            five.modifications_internal.insert(base_index, id.clone());
        } else {
            three
                .modifications_internal
                .insert(base_index - split_index, id.clone());
        }
    }
    (five, three)
}

fn find_3p_end(design: &Design, helix: usize, forward: bool, offset: i64) -> Option<usize> {
    design.strands.iter().position(|s| {
        s.last_bound()
            .is_some_and(|b| b.helix == helix && b.forward == forward && b.offset_3p() == offset)
    })
}

fn find_5p_end(design: &Design, helix: usize, forward: bool, offset: i64) -> Option<usize> {
    design.strands.iter().position(|s| {
        s.first_bound()
            .is_some_and(|b| b.helix == helix && b.forward == forward && b.offset_5p() == offset)
    })
}

/// Restores the bond between the bases at `offset - 1` and `offset` on
/// `(helix, forward)`, merging the two strands that end there. Exact inverse
/// of [`add_nick`] at the same arguments.
pub fn ligate(
    design: &Design,
    helix: usize,
    offset: i64,
    forward: bool,
) -> Result<Design, EditError> {
    // The 3'-side of the bond depends on direction: a forward strand reads
    // low-to-high, so its 3' piece ends at offset - 1; a reverse strand's
    // 3' piece ends at offset.
    let (three_at, five_at) = if forward {
        (offset - 1, offset)
    } else {
        (offset, offset - 1)
    };
    let a = find_3p_end(design, helix, forward, three_at);
    let b = find_5p_end(design, helix, forward, five_at);
    let (Some(a), Some(b)) = (a, b) else {
        return Err(EditError::EndsNotFound {
            helix1: helix,
            helix2: helix,
            offset,
        });
    };
    join_strands(design, a, b)
}

/// Joins strand `a`'s 3' end to strand `b`'s 5' end: domain lists and
/// sequences concatenate, scaffold flags OR, the color comes from the
/// 5'-most strand, and abutting same-helix domains fuse back into one.
fn join_strands(design: &Design, a_index: usize, b_index: usize) -> Result<Design, EditError> {
    if a_index == b_index {
        return Err(EditError::WouldBeCircular);
    }
    let a = &design.strands[a_index];
    let b = &design.strands[b_index];
    let a_len = a.dna_length();

    let mut domains = a.domains.clone();
    let mut b_domains = b.domains.clone().into_iter();
    if let (Some(Domain::Bound(last)), Some(Domain::Bound(first))) =
        (domains.last(), b.domains.first())
    {
        let abutting = last.helix == first.helix
            && last.forward == first.forward
            && (if last.forward {
                last.end == first.start
            } else {
                first.end == last.start
            });
        if abutting {
            let first = match b_domains.next() {
                Some(Domain::Bound(f)) => f,
                _ => unreachable!(),
            };
            let Some(Domain::Bound(last)) = domains.last_mut() else {
                unreachable!()
            };
            fuse_bound(last, first);
        }
    }
    domains.extend(b_domains);

    let sequence = match (&a.sequence, &b.sequence) {
        (None, None) => None,
        (sa, sb) => {
            let left = sa.clone().unwrap_or_else(|| "?".repeat(a_len));
            let right = sb.clone().unwrap_or_else(|| "?".repeat(b.dna_length()));
            Some(left + &right)
        }
    };

    let mut joined = Strand::new(domains);
    joined.color = Some(design.strand_color(a_index));
    joined.is_scaffold = a.is_scaffold || b.is_scaffold;
    joined.sequence = sequence;
    joined.modification_5p = a.modification_5p.clone();
    joined.modification_3p = b.modification_3p.clone();
    joined.modifications_internal = a.modifications_internal.clone();
    for (&base_index, id) in &b.modifications_internal {
        joined
            .modifications_internal
            .insert(base_index + a_len, id.clone());
    }
    joined.extra_fields = merged_extras(&a.extra_fields, &b.extra_fields);

    let mut result = design.clone();
    let (keep, remove) = (a_index.min(b_index), a_index.max(b_index));
    result.strands.remove(remove);
    result.strands[keep] = joined;
    validated(result)
}

fn fuse_bound(into: &mut BoundDomain, other: BoundDomain) {
    into.start = into.start.min(other.start);
    into.end = into.end.max(other.end);
    into.deletions.extend(other.deletions);
    into.deletions.sort_unstable();
    into.insertions.extend(other.insertions);
    into.insertions.sort_unstable_by_key(|i| i.offset);
    for (k, v) in other.extra_fields {
        into.extra_fields.entry(k).or_insert(v);
    }
}

fn merged_extras(a: &ExtraFields, b: &ExtraFields) -> ExtraFields {
    let mut out = a.clone();
    for (k, v) in b {
        out.entry(k.clone()).or_insert_with(|| v.clone());
    }
    out
}

/// Joins a 3' end and a 5' end that meet at `offset1` on the two helices
/// (antiparallel). With `helix1 == helix2` this rejoins a nick at `offset1`;
/// see [`ligate`].
pub fn add_half_crossover(design: &Design, spec: &CrossoverSpec) -> Result<Design, EditError> {
    check_helices_exist(design, spec)?;
    if spec.helix1 == spec.helix2 {
        return ligate(design, spec.helix1, spec.offset1, spec.forward1);
    }
    half_join(
        design,
        spec.helix1,
        spec.helix2,
        spec.offset1,
        spec.forward1,
    )
}

fn check_helices_exist(design: &Design, spec: &CrossoverSpec) -> Result<(), EditError> {
    for idx in [spec.helix1, spec.helix2] {
        if design.helix(idx).is_none() {
            return Err(EditError::HelixNotFound(idx));
        }
    }
    Ok(())
}

fn half_join(
    design: &Design,
    helix1: usize,
    helix2: usize,
    offset: i64,
    forward1: bool,
) -> Result<Design, EditError> {
    // Either helix1 carries the 3' end and helix2 the 5' end, or vice versa.
    if let (Some(a), Some(b)) = (
        find_3p_end(design, helix1, forward1, offset),
        find_5p_end(design, helix2, !forward1, offset),
    ) {
        return join_strands(design, a, b);
    }
    if let (Some(a), Some(b)) = (
        find_3p_end(design, helix2, !forward1, offset),
        find_5p_end(design, helix1, forward1, offset),
    ) {
        return join_strands(design, a, b);
    }
    Err(EditError::EndsNotFound {
        helix1,
        helix2,
        offset,
    })
}

/// Cuts both helices at `offset1` (where a domain still spans the bond) and
/// rejoins the four ends across the helices: the strands on `(helix1,
/// forward1)` and `(helix2, !forward1)` exchange partners around the bond
/// between `offset1 - 1` and `offset1`. A side already nicked at `offset1`
/// is used as-is, so a seam of nicks can be converted into crossovers.
pub fn add_full_crossover(design: &Design, spec: &CrossoverSpec) -> Result<Design, EditError> {
    check_helices_exist(design, spec)?;
    if spec.helix1 == spec.helix2 {
        return Err(EditError::SameHelixFullCrossover);
    }
    let step1 = ensure_nicked(design, spec.helix1, spec.forward1, spec.offset1)?;
    let step2 = ensure_nicked(&step1, spec.helix2, !spec.forward1, spec.offset1)?;
    let step3 = half_join(
        &step2,
        spec.helix1,
        spec.helix2,
        spec.offset1 - 1,
        spec.forward1,
    )?;
    half_join(
        &step3,
        spec.helix1,
        spec.helix2,
        spec.offset1,
        spec.forward1,
    )
}

fn ensure_nicked(
    design: &Design,
    helix: usize,
    forward: bool,
    offset: i64,
) -> Result<Design, EditError> {
    if domain_spanning_bond(design, helix, forward, offset).is_some() {
        add_nick(design, helix, offset, forward)
    } else {
        Ok(design.clone())
    }
}

/// Applies a batch of crossovers in order, dispatching on each spec's `half`
/// flag.
pub fn add_crossovers(design: &Design, specs: &[CrossoverSpec]) -> Result<Design, EditError> {
    let mut current = design.clone();
    for spec in specs {
        current = if spec.half {
            add_half_crossover(&current, spec)?
        } else {
            add_full_crossover(&current, spec)?
        };
    }
    Ok(current)
}

/// Bound domains (on any strand, either direction) containing `offset` on
/// `helix`.
fn domains_at(design: &Design, helix: usize, offset: i64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, strand) in design.strands.iter().enumerate() {
        for (k, domain) in strand.domains.iter().enumerate() {
            if let Domain::Bound(b) = domain {
                if b.helix == helix && b.contains_offset(offset) {
                    out.push((i, k));
                }
            }
        }
    }
    out
}

/// Base index within the strand's 5'→3' sequence where domain `k`'s bases at
/// `offset` begin.
fn base_index_of(strand: &Strand, k: usize, offset: i64) -> usize {
    let mut index: usize = strand.domains[..k].iter().map(Domain::dna_length).sum();
    let Domain::Bound(b) = &strand.domains[k] else {
        unreachable!("annotation target is always a bound domain");
    };
    for (o, count) in b.base_offsets() {
        if o == offset {
            break;
        }
        index += count;
    }
    index
}

/// Adds a deletion at `(helix, offset)` to every bound domain containing
/// that offset, in both directions, and removes the corresponding base from
/// every affected assigned sequence.
pub fn add_deletion(design: &Design, helix: usize, offset: i64) -> Result<Design, EditError> {
    let affected = domains_at(design, helix, offset);
    if affected.is_empty() {
        return Err(EditError::NoDomainAtOffset { helix, offset });
    }
    for &(i, k) in &affected {
        let Some(b) = design.strands[i].domains[k].as_bound() else {
            continue;
        };
        if b.deletions.contains(&offset) {
            return Err(EditError::DeletionAlreadyExists { helix, offset });
        }
        if b.insertions.iter().any(|ins| ins.offset == offset) {
            return Err(EditError::AnnotationConflict { helix, offset });
        }
    }
    let mut result = design.clone();
    // Collect sequence positions before mutating any domain.
    let mut removals: Vec<(usize, usize)> = affected
        .iter()
        .map(|&(i, k)| (i, base_index_of(&design.strands[i], k, offset)))
        .collect();
    for &(i, k) in &affected {
        let Some(Domain::Bound(b)) = result.strands[i].domains.get_mut(k) else {
            continue;
        };
        b.deletions.push(offset);
        b.deletions.sort_unstable();
    }
    removals.sort_unstable_by(|x, y| y.cmp(x));
    for (i, base_index) in removals {
        if let Some(seq) = &result.strands[i].sequence {
            let mut chars: Vec<char> = seq.chars().collect();
            chars.remove(base_index);
            result.strands[i].sequence = Some(chars.into_iter().collect());
        }
    }
    validated(result)
}

/// Adds an insertion of `length` extra bases at `(helix, offset)` to every
/// bound domain containing that offset; assigned sequences gain `length`
/// wildcard bases right after the existing base at that offset.
pub fn add_insertion(
    design: &Design,
    helix: usize,
    offset: i64,
    length: usize,
) -> Result<Design, EditError> {
    if length < 1 {
        return Err(EditError::InvalidInsertionLength);
    }
    let affected = domains_at(design, helix, offset);
    if affected.is_empty() {
        return Err(EditError::NoDomainAtOffset { helix, offset });
    }
    for &(i, k) in &affected {
        let Some(b) = design.strands[i].domains[k].as_bound() else {
            continue;
        };
        if b.insertions.iter().any(|ins| ins.offset == offset) {
            return Err(EditError::InsertionAlreadyExists { helix, offset });
        }
        if b.deletions.contains(&offset) {
            return Err(EditError::AnnotationConflict { helix, offset });
        }
    }
    let mut result = design.clone();
    let mut additions: Vec<(usize, usize)> = affected
        .iter()
        .map(|&(i, k)| (i, base_index_of(&design.strands[i], k, offset)))
        .collect();
    for &(i, k) in &affected {
        let Some(Domain::Bound(b)) = result.strands[i].domains.get_mut(k) else {
            continue;
        };
        b.insertions.push(Insertion::new(offset, length));
        b.insertions.sort_unstable_by_key(|ins| ins.offset);
    }
    additions.sort_unstable_by(|x, y| y.cmp(x));
    for (i, base_index) in additions {
        if let Some(seq) = &result.strands[i].sequence {
            let mut chars: Vec<char> = seq.chars().collect();
            for _ in 0..length {
                chars.insert(base_index + 1, '?');
            }
            result.strands[i].sequence = Some(chars.into_iter().collect());
        }
    }
    validated(result)
}

/// Marks a strand as scaffold. A strand still wearing its default palette
/// color switches to the scaffold color; an explicit custom color is kept.
pub fn set_scaffold(design: &Design, strand_index: usize) -> Result<Design, EditError> {
    if strand_index >= design.strands.len() {
        return Err(EditError::StrandIndexOutOfRange(strand_index));
    }
    let mut result = design.clone();
    let had_default = design.strands[strand_index].color.is_none()
        || design.strand_color(strand_index) == Color::default_for_strand(strand_index, false);
    let strand = &mut result.strands[strand_index];
    strand.is_scaffold = true;
    if had_default {
        strand.color = Some(crate::model::SCAFFOLD_COLOR);
    }
    validated(result)
}

/// Deep-copies the selected strands, moving them `delta_view_rows` rows down
/// in the displayed helix order and `delta_offset` offsets to the right.
/// Sequences are not copied; deletions and insertions shift along.
pub fn copy_translate_strands(
    design: &Design,
    strand_indices: &[usize],
    delta_view_rows: i64,
    delta_offset: i64,
) -> Result<Design, EditError> {
    let order = design.view_order();
    let row_of = |idx: usize| order.iter().position(|&o| o == idx);
    let mut copies = Vec::with_capacity(strand_indices.len());
    for &si in strand_indices {
        let strand = design
            .strands
            .get(si)
            .ok_or(EditError::StrandIndexOutOfRange(si))?;
        let mut copy = strand.clone();
        copy.sequence = None;
        copy.color = Some(design.strand_color(si));
        for domain in &mut copy.domains {
            let Domain::Bound(b) = domain else { continue };
            let row =
                row_of(b.helix).ok_or(EditError::HelixNotFound(b.helix))? as i64 + delta_view_rows;
            if row < 0 || row as usize >= order.len() {
                return Err(EditError::TargetRowOutOfRange { strand: si });
            }
            let target_idx = order[row as usize];
            let target = design
                .helix(target_idx)
                .ok_or(EditError::HelixNotFound(target_idx))?;
            let (new_start, new_end) = (b.start + delta_offset, b.end + delta_offset);
            let fits = new_start >= target.min_offset
                && target.max_offset.is_some_and(|max| new_end <= max);
            if !fits {
                return Err(EditError::WindowOutOfBounds {
                    strand: si,
                    helix: target_idx,
                    delta: delta_offset,
                });
            }
            b.helix = target_idx;
            b.start = new_start;
            b.end = new_end;
            for d in &mut b.deletions {
                *d += delta_offset;
            }
            for ins in &mut b.insertions {
                ins.offset += delta_offset;
            }
        }
        copies.push(copy);
    }
    let mut result = design.clone();
    result.strands.extend(copies);
    validated(result)
}
