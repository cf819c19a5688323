//! Properties of the editing operations under random operation sequences.

mod common;

use common::{
    assert_traversal_connected, fix_a, random_any_design, random_edit_fixture, random_edit_step,
    rng, walk_length_oracle,
};
use scadkit::edit;
use scadkit::model::{Design, Domain};

fn total_bases(design: &Design) -> usize {
    design.strands.iter().map(|s| s.dna_length()).sum()
}

fn domains_containing(design: &Design, helix: usize, offset: i64) -> usize {
    design
        .strands
        .iter()
        .flat_map(|s| s.bound_domains())
        .filter(|b| b.helix == helix && b.contains_offset(offset))
        .count()
}

#[test]
fn random_edit_sequences_preserve_validity_and_connectivity() {
    let mut rng = rng(0xed17);
    for _ in 0..60 {
        let mut design = random_edit_fixture(&mut rng);
        for _ in 0..12 {
            if let Ok(next) = random_edit_step(&design, &mut rng) {
                assert!(next.validate().is_valid());
                assert_traversal_connected(&next);
                design = next;
            }
        }
        // Length arithmetic agrees with the offset-walk oracle everywhere.
        for strand in &design.strands {
            for domain in &strand.domains {
                if let Domain::Bound(b) = domain {
                    assert_eq!(b.dna_length(), walk_length_oracle(b));
                }
            }
        }
    }
}

#[test]
fn edits_account_for_every_base() {
    let mut rng = rng(0xacc7);
    for _ in 0..40 {
        let design = random_edit_fixture(&mut rng);
        let before = total_bases(&design);
        let helix = 0;
        let offset = 7;

        if let Ok(nicked) = edit::add_nick(&design, helix, offset, true) {
            assert_eq!(total_bases(&nicked), before);
        }
        if let Ok(crossed) =
            edit::add_full_crossover(&design, &edit::CrossoverSpec::full(0, 1, offset, true))
        {
            assert_eq!(total_bases(&crossed), before);
        }
        let k = domains_containing(&design, helix, offset);
        if let Ok(deleted) = edit::add_deletion(&design, helix, offset) {
            assert_eq!(total_bases(&deleted), before - k);
        }
        let length = 3;
        if let Ok(inserted) = edit::add_insertion(&design, helix, offset, length) {
            assert_eq!(total_bases(&inserted), before + k * length);
        }
    }
}

#[test]
fn nick_then_ligate_is_identity() {
    let mut rng = rng(0x1d);
    for _ in 0..40 {
        let design = random_edit_fixture(&mut rng);
        let helix = 0;
        let offset = 9;
        for forward in [true, false] {
            let nicked = edit::add_nick(&design, helix, offset, forward).unwrap();
            assert_eq!(nicked.strands.len(), design.strands.len() + 1);
            let restored = edit::ligate(&nicked, helix, offset, forward).unwrap();
            assert_eq!(restored, design);
        }
    }
}

#[test]
fn nick_then_half_crossover_rejoin_is_identity() {
    let design = fix_a();
    let nicked = edit::add_nick(&design, 1, 5, false).unwrap();
    let spec = edit::CrossoverSpec::half(1, 1, 5, false);
    let restored = edit::add_half_crossover(&nicked, &spec).unwrap();
    assert_eq!(restored, design);
}

#[test]
fn failed_edits_leave_no_trace() {
    let design = fix_a();
    let before = design.clone();
    let _ = edit::add_nick(&design, 0, 0, true);
    let _ = edit::add_deletion(&design, 0, 31);
    let _ = edit::add_full_crossover(&design, &edit::CrossoverSpec::full(0, 1, 0, true));
    assert_eq!(design, before);
}

#[test]
fn scripted_column_copies_multiply_staples() {
    // Build one column of staples on a 9-helix design, then paste the
    // column sideways 8 times: staple count becomes 9x the column count.
    let mut design = Design::new(scadkit::model::Grid::Square).with_helices(
        (0..9)
            .map(|i| scadkit::model::Helix::new(i, 288).with_grid_position(0, i as i64))
            .collect(),
    );
    for h in 0..9usize {
        design = edit::add_strand(
            &design,
            scadkit::model::Strand::from_bound(h, h % 2 == 0, 0, 32),
        )
        .unwrap();
    }
    let column: Vec<usize> = (0..9).collect();
    let column_size = design.strands.len();
    for step in 1..=8 {
        design = edit::copy_translate_strands(&design, &column, 0, 32 * step).unwrap();
    }
    assert_eq!(design.strands.len(), 9 * column_size);
    assert!(design.validate().is_valid());
}

#[test]
fn domain_lengths_match_walk_oracle_on_arbitrary_designs() {
    let mut rng = rng(0x0a11);
    for _ in 0..50 {
        let design = random_any_design(&mut rng);
        for strand in &design.strands {
            let mut walked = 0usize;
            for domain in &strand.domains {
                match domain {
                    Domain::Bound(b) => {
                        assert_eq!(b.dna_length(), walk_length_oracle(b));
                        let offsets = b.base_offsets();
                        let total: usize = offsets.iter().map(|(_, n)| n).sum();
                        assert_eq!(total, b.dna_length());
                        walked += total;
                    }
                    Domain::Loopout(l) => walked += l.length,
                }
            }
            assert_eq!(walked, strand.dna_length());
        }
    }
}
