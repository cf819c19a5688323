//! Shared fixtures, oracles, and random generators for integration tests.
#![allow(dead_code)]

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use scadkit::edit;
use scadkit::model::{BoundDomain, Design, Domain, Grid, Helix, Strand};

pub const GOLDEN_SC: &str = include_str!("../data/two_helix_example.sc");

/// Published sequences of the golden design, scaffold first.
pub const GOLDEN_SCAFFOLD_SEQ: &str =
    "AACGTAACGTAACGTAACGTAACGTAACGTAACGTAACGTAACGTAACGTAACGTAACGTAACGTAACG";
pub const GOLDEN_STAPLE_1_SEQ: &str = "ACGTTACGTTACGTTTTACGTTACGTTACGTT";
pub const GOLDEN_STAPLE_2_SEQ: &str = "ACGTTACGTTACGTTACGCGTTACGTTACGTTAC";

pub fn golden_design() -> Design {
    scadkit::codec::parse_design(GOLDEN_SC).expect("golden fixture parses")
}

/// Two-helix square-grid fixture: four 16-base single-domain strands, two
/// per helix, colors resolved by construction.
pub fn fix_a() -> Design {
    let base = Design::new(Grid::Square).with_helices(vec![
        Helix::new(0, 32).with_grid_position(0, 0),
        Helix::new(1, 32).with_grid_position(0, 1),
    ]);
    [
        Strand::from_bound(0, true, 0, 16),
        Strand::from_bound(0, false, 0, 16),
        Strand::from_bound(1, true, 0, 16),
        Strand::from_bound(1, false, 0, 16),
    ]
    .into_iter()
    .fold(base, |d, s| {
        edit::add_strand(&d, s).expect("fixture strand")
    })
}

/// Independent base-count oracle: walk the domain offset by offset,
/// counting 0 bases at a deletion, length + 1 at an insertion, 1 otherwise.
pub fn walk_length_oracle(b: &BoundDomain) -> usize {
    let mut total = 0;
    for offset in b.start..b.end {
        if b.deletions.contains(&offset) {
            continue;
        }
        total += 1 + b
            .insertions
            .iter()
            .find(|i| i.offset == offset)
            .map_or(0, |i| i.length);
    }
    total
}

/// 5'→3' traversal oracle for strands produced by the editing operations.
///
/// Checks that each strand's domain walk is structurally connected: bound
/// domains at both ends, no empty domains, and every bound-to-bound junction
/// an antiparallel crossover meeting at one offset on two different helices
/// (ligated same-helix junctions would have been fused away).
pub fn assert_traversal_connected(design: &Design) {
    for (si, strand) in design.strands.iter().enumerate() {
        assert!(!strand.domains.is_empty(), "strand {si} has no domains");
        assert!(
            strand.domains.first().unwrap().as_bound().is_some(),
            "strand {si} starts with a loopout"
        );
        assert!(
            strand.domains.last().unwrap().as_bound().is_some(),
            "strand {si} ends with a loopout"
        );
        for domain in &strand.domains {
            assert!(domain.dna_length() >= 1, "strand {si} has an empty domain");
        }
        for (k, pair) in strand.domains.windows(2).enumerate() {
            if let (Domain::Bound(a), Domain::Bound(b)) = (&pair[0], &pair[1]) {
                assert_ne!(
                    a.helix, b.helix,
                    "strand {si} junction {k} stays on one helix"
                );
                assert_ne!(
                    a.forward, b.forward,
                    "strand {si} junction {k} is not antiparallel"
                );
                assert_eq!(
                    a.offset_3p(),
                    b.offset_5p(),
                    "strand {si} junction {k} ends do not meet"
                );
            }
        }
        if let Some(seq) = &strand.sequence {
            assert_eq!(
                seq.chars().count(),
                strand.dna_length(),
                "strand {si} sequence length drifted"
            );
        }
    }
}

/// Independent complement-consistency oracle: collect each (helix, offset,
/// direction) base run from the strand sequences, pair runs antiparallel,
/// and count concrete non-complementary pairs.
pub fn pairing_walk_mismatches(design: &Design) -> usize {
    use std::collections::HashMap;
    let mut runs: HashMap<(usize, i64, bool), Vec<char>> = HashMap::new();
    for strand in &design.strands {
        let Some(seq) = &strand.sequence else {
            continue;
        };
        let mut chars = seq.chars();
        for domain in &strand.domains {
            match domain {
                Domain::Loopout(l) => {
                    for _ in 0..l.length {
                        chars.next();
                    }
                }
                Domain::Bound(b) => {
                    for (offset, count) in b.base_offsets() {
                        let run: Vec<char> = (0..count).filter_map(|_| chars.next()).collect();
                        runs.insert((b.helix, offset, b.forward), run);
                    }
                }
            }
        }
    }
    let mut mismatches = 0;
    for ((helix, offset, forward), run) in &runs {
        if !forward {
            continue;
        }
        let Some(partner) = runs.get(&(*helix, *offset, false)) else {
            continue;
        };
        let total = run.len().max(partner.len());
        for (k, &base) in run.iter().enumerate() {
            let j = total - 1 - k;
            if j >= partner.len() {
                continue;
            }
            let other = partner[j];
            if base == '?' || other == '?' {
                continue;
            }
            let expected = match base {
                'A' => 'T',
                'T' => 'A',
                'C' => 'G',
                'G' => 'C',
                _ => '?',
            };
            if other != expected {
                mismatches += 1;
            }
        }
    }
    mismatches
}

/// Canonical per-strand key for order-insensitive design comparison.
fn strand_key(strand: &Strand) -> (usize, i64, bool, bool) {
    let first = strand.first_bound().expect("strand has a bound domain");
    (
        first.helix,
        first.offset_5p(),
        first.forward,
        strand.is_scaffold,
    )
}

/// Asserts two designs carry the same strands (structure, annotations,
/// scaffold flags, resolved colors) regardless of list order, ignoring
/// sequences.
pub fn assert_same_strands_ignoring_sequence(a: &Design, b: &Design) {
    assert_eq!(a.strands.len(), b.strands.len(), "strand counts differ");
    fn canonical(d: &Design) -> Vec<(usize, &Strand)> {
        let mut indexed: Vec<(usize, &Strand)> = d.strands.iter().enumerate().collect();
        indexed.sort_by_key(|(_, s)| strand_key(s));
        indexed
    }
    for ((ia, sa), (ib, sb)) in canonical(a).into_iter().zip(canonical(b)) {
        assert_eq!(sa.domains, sb.domains, "domains differ");
        assert_eq!(sa.is_scaffold, sb.is_scaffold, "scaffold flags differ");
        assert_eq!(
            a.strand_color(ia),
            b.strand_color(ib),
            "resolved colors differ"
        );
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random square-grid design that cadnano can encode: directions follow the
/// even-forward scaffold parity, no loopouts, no modifications, and
/// deletions/insertions applied through the editing ops so both strands at
/// an offset agree.
pub fn random_exportable_design(rng: &mut ChaCha8Rng) -> Design {
    let n_helices = rng.gen_range(1..=4);
    let max_offset: i64 = *[32, 48, 64].choose(rng).unwrap();
    let mut design = Design::new(Grid::Square).with_helices(
        (0..n_helices)
            .map(|i| Helix::new(i, max_offset).with_grid_position(0, i as i64))
            .collect(),
    );
    // Full-width scaffold and staple tracks on each helix.
    for h in 0..n_helices {
        let scaffold_forward = h % 2 == 0;
        let scaffold = Strand::from_bound(h, scaffold_forward, 0, max_offset).scaffold();
        design = edit::add_strand(&design, scaffold).unwrap();
        design = edit::set_scaffold(&design, design.strands.len() - 1).unwrap();
        let staple = Strand::from_bound(h, !scaffold_forward, 0, max_offset);
        design = edit::add_strand(&design, staple).unwrap();
    }
    // Random nicks on both tracks. A strand occupying a single offset
    // cannot be encoded in cadnano, so nicks that would shave one off are
    // skipped.
    let single_offset_strand = |d: &Design| {
        d.strands
            .iter()
            .any(|s| s.bound_domains().map(|b| b.end - b.start).sum::<i64>() < 2)
    };
    for _ in 0..rng.gen_range(0..3 * n_helices) {
        let h = rng.gen_range(0..n_helices);
        let offset = rng.gen_range(1..max_offset);
        let forward = rng.gen_bool(0.5);
        if let Ok(next) = edit::add_nick(&design, h, offset, forward) {
            if !single_offset_strand(&next) {
                design = next;
            }
        }
    }
    // Random full crossovers between adjacent helices.
    if n_helices > 1 {
        for _ in 0..rng.gen_range(0..2 * n_helices) {
            let h = rng.gen_range(0..n_helices - 1);
            let offset = rng.gen_range(1..max_offset);
            let forward = rng.gen_bool(0.5);
            let spec = edit::CrossoverSpec::full(h, h + 1, offset, forward);
            if let Ok(next) = edit::add_full_crossover(&design, &spec) {
                design = next;
            }
        }
    }
    // Random deletions and insertions, kept consistent by the ops.
    for _ in 0..rng.gen_range(0..6) {
        let h = rng.gen_range(0..n_helices);
        let offset = rng.gen_range(0..max_offset);
        let result = if rng.gen_bool(0.5) {
            edit::add_deletion(&design, h, offset)
        } else {
            edit::add_insertion(&design, h, offset, rng.gen_range(1..=3))
        };
        if let Ok(next) = result {
            design = next;
        }
    }
    design
}

/// Fixture for random edit-operation sequences: 2-4 helices with full-width
/// strand pairs on each.
pub fn random_edit_fixture(rng: &mut ChaCha8Rng) -> Design {
    let n_helices = rng.gen_range(2..=4);
    let max_offset: i64 = *[32, 48].choose(rng).unwrap();
    let base = Design::new(Grid::Square).with_helices(
        (0..n_helices)
            .map(|i| Helix::new(i, max_offset).with_grid_position(0, i as i64))
            .collect(),
    );
    (0..n_helices)
        .flat_map(|h| {
            [
                Strand::from_bound(h, true, 0, max_offset),
                Strand::from_bound(h, false, 0, max_offset),
            ]
        })
        .fold(base, |d, s| edit::add_strand(&d, s).unwrap())
}

/// One random editing step; `Ok` results have been re-validated by the op.
pub fn random_edit_step(design: &Design, rng: &mut ChaCha8Rng) -> Result<Design, edit::EditError> {
    let n_helices = design.helices.len();
    let max_offset = design.helices[0].max_offset.unwrap();
    let h = rng.gen_range(0..n_helices);
    let offset = rng.gen_range(0..max_offset);
    let forward = rng.gen_bool(0.5);
    match rng.gen_range(0..5) {
        0 => edit::add_nick(design, h, offset.max(1), forward),
        1 => {
            let other = if h + 1 < n_helices {
                h + 1
            } else {
                h.saturating_sub(1)
            };
            let spec = edit::CrossoverSpec::full(h, other, offset.max(1), forward);
            edit::add_full_crossover(design, &spec)
        }
        2 => edit::add_deletion(design, h, offset),
        3 => edit::add_insertion(design, h, offset, rng.gen_range(1..=3)),
        _ => edit::ligate(design, h, offset.max(1), forward),
    }
}

/// Random valid design over any grid, exercising loopouts, modifications,
/// view orders, explicit colors, sequences, and extra fields. Used for codec
/// round-trip properties.
pub fn random_any_design(rng: &mut ChaCha8Rng) -> Design {
    use scadkit::model::{Color, Modification, ModificationLocation};

    let grid = *[Grid::Square, Grid::Honeycomb, Grid::Hex, Grid::None]
        .choose(rng)
        .unwrap();
    let n_helices = rng.gen_range(0..=4usize);
    let min_offset = if rng.gen_bool(0.2) { -8 } else { 0 };
    let max_offset: i64 = rng.gen_range(24..=64);
    let mut design = Design::new(grid);
    for i in 0..n_helices {
        let mut helix = Helix::new(i, max_offset).with_min_offset(min_offset);
        match grid {
            Grid::None => {
                helix = helix.with_position(
                    rng.gen_range(-10.0..10.0),
                    rng.gen_range(-10.0..10.0),
                    0.0,
                );
            }
            _ => {
                helix = helix.with_grid_position(rng.gen_range(-2..2), i as i64);
            }
        }
        if rng.gen_bool(0.3) {
            helix.roll = rng.gen_range(0.0..360.0);
        }
        if rng.gen_bool(0.2) {
            helix.major_tick_distance = Some(rng.gen_range(4..10));
        } else if rng.gen_bool(0.2) {
            let mut marks: Vec<i64> = (min_offset..max_offset)
                .filter(|_| rng.gen_bool(0.2))
                .collect();
            marks.dedup();
            helix.major_tick_marks = Some(marks);
        }
        if rng.gen_bool(0.1) {
            helix
                .extra_fields
                .insert("group".into(), serde_json::json!("north"));
        }
        design.helices.push(helix);
    }

    // Disjoint intervals per (helix, direction).
    let mut intervals: Vec<BoundDomain> = Vec::new();
    for helix in 0..n_helices {
        for forward in [true, false] {
            let mut cursor = min_offset;
            while cursor < max_offset {
                let gap = rng.gen_range(0..6);
                let len = rng.gen_range(1..=12);
                let start = cursor + gap;
                let end = start + len;
                if end > max_offset {
                    break;
                }
                if rng.gen_bool(0.7) {
                    let mut b = BoundDomain::new(helix, forward, start, end);
                    for o in start..end {
                        if b.dna_length() > 1 && rng.gen_bool(0.08) {
                            b.deletions.push(o);
                        } else if rng.gen_bool(0.08) {
                            b.insertions
                                .push(scadkit::model::Insertion::new(o, rng.gen_range(1..=3)));
                        }
                    }
                    if b.dna_length() >= 1 {
                        intervals.push(b);
                    }
                }
                cursor = end;
            }
        }
    }
    let mut queue = intervals.into_iter();
    let mut strands: Vec<Strand> = Vec::new();
    while let Some(first) = queue.next() {
        let mut domains: Vec<Domain> = vec![first.into()];
        if rng.gen_bool(0.3) {
            if let Some(second) = queue.next() {
                if rng.gen_bool(0.5) {
                    domains.push(scadkit::model::Loopout::new(rng.gen_range(1..=5)).into());
                }
                domains.push(second.into());
            }
        }
        let mut strand = Strand::new(domains);
        if rng.gen_bool(0.3) {
            strand.color = Some(Color(rng.gen(), rng.gen(), rng.gen()));
        }
        if rng.gen_bool(0.1) {
            strand.is_scaffold = true;
        }
        if rng.gen_bool(0.4) {
            let len = strand.dna_length();
            let seq: String = (0..len)
                .map(|_| *['A', 'C', 'G', 'T', '?'].choose(rng).unwrap())
                .collect();
            strand.sequence = Some(seq);
        }
        if rng.gen_bool(0.1) {
            strand
                .extra_fields
                .insert("label".into(), serde_json::json!("x"));
        }
        strands.push(strand);
    }
    design.strands = strands;

    if rng.gen_bool(0.3) && !design.strands.is_empty() {
        design.modifications.insert(
            "/5Biosg/".into(),
            Modification::new("B", "/5Biosg/", ModificationLocation::FivePrime),
        );
        let i = rng.gen_range(0..design.strands.len());
        design.strands[i].modification_5p = Some("/5Biosg/".into());
    }
    if rng.gen_bool(0.3) && n_helices > 0 {
        let mut order: Vec<usize> = (0..n_helices).collect();
        order.shuffle(rng);
        design.helices_view_order = Some(order);
    }
    if rng.gen_bool(0.2) {
        design
            .extra_fields
            .insert("version".into(), serde_json::json!("0.19.4"));
    }

    let report = design.validate();
    assert!(
        report.is_valid(),
        "generator produced invalid design:\n{report}"
    );
    design
}

/// Exports a design to cadnano v2, imports it back, and asserts that the
/// round trip preserves everything except the padded max_offset and the
/// dropped sequences.
pub fn assert_cadnano_roundtrip(design: &Design) {
    use scadkit::cadnano::{export_cadnano_v2, import_cadnano_v2, pad_max_offset};

    let text = export_cadnano_v2(design).expect("generated design exports");
    let back = import_cadnano_v2(&text).expect("exported design imports");
    let report = back.validate();
    assert!(report.is_valid(), "imported design invalid:\n{report}");
    assert_eq!(back.grid, design.grid);
    assert_eq!(back.helices.len(), design.helices.len());
    let design_max = design
        .helices
        .iter()
        .filter_map(|h| h.max_offset)
        .max()
        .unwrap_or(0);
    let padded = pad_max_offset(design_max, design.grid).unwrap();
    for (a, b) in design.helices.iter().zip(&back.helices) {
        assert_eq!(a.idx, b.idx);
        assert_eq!(a.grid_position, b.grid_position);
        assert_eq!(b.max_offset, Some(padded));
    }
    assert_same_strands_ignoring_sequence(design, &back);
    assert!(back.strands.iter().all(|s| s.sequence.is_none()));
}
