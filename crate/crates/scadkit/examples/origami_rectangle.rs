//! Builds a 24-helix origami rectangle from scratch and writes the design
//! file, a staple plate order, and figures into `rectangle-out/`.
//!
//! The construction mirrors the usual scripted workflow: full-width
//! precursor scaffolds, a seam of nicks converted into crossovers, edge
//! crossovers to close the raster, precursor staples broken into a weave,
//! twist-correcting deletions, and finally scaffold sequence assignment.
//!
//! ```sh
//! cargo run --example origami_rectangle -p scadkit
//! ```

use std::fs;
use std::path::Path;

use scadkit::edit::{self, CrossoverSpec};
use scadkit::export::{export_idt_plate, export_sequences_csv, IdtOptions};
use scadkit::svg::{render_svg, RenderOptions, View};
use scadkit::{codec, sequence, Design, Grid, Helix, Strand};

const HELICES: usize = 24;
const MAX_OFFSET: i64 = 304;
const SEAM: i64 = 152;

fn scaffold_forward(h: usize) -> bool {
    h % 2 == 0
}

fn build() -> Design {
    let mut design = Design::new(Grid::Square).with_helices(
        (0..HELICES)
            .map(|i| Helix::new(i, MAX_OFFSET).with_grid_position(0, i as i64))
            .collect(),
    );

    // Precursor scaffolds, one per helix, alternating direction.
    for h in 0..HELICES {
        design =
            edit::add_strand(&design, Strand::from_bound(h, scaffold_forward(h), 8, 296)).unwrap();
    }
    // Seam nicks, then crossovers: full crossovers across the seam in the
    // interior, half crossovers at the left and right edges. The one nick
    // left unconverted (helix 23) becomes the scaffold's endpoints.
    for h in 1..HELICES {
        design = edit::add_nick(&design, h, SEAM, scaffold_forward(h)).unwrap();
    }
    let mut crossovers = Vec::new();
    for h in (1..HELICES - 1).step_by(2) {
        crossovers.push(CrossoverSpec::full(h, h + 1, SEAM, scaffold_forward(h)));
    }
    for h in (0..HELICES - 1).step_by(2) {
        crossovers.push(CrossoverSpec::half(h, h + 1, 8, true));
        crossovers.push(CrossoverSpec::half(h, h + 1, 295, true));
    }
    design = edit::add_crossovers(&design, &crossovers).unwrap();
    design = edit::set_scaffold(&design, 0).unwrap();

    // Precursor staples, nicked every 32 offsets with alternating phase.
    for h in 0..HELICES {
        design =
            edit::add_strand(&design, Strand::from_bound(h, !scaffold_forward(h), 8, 296)).unwrap();
    }
    for h in 0..HELICES {
        let start = if h % 2 == 0 { 32 } else { 48 };
        for offset in (start..280).step_by(32) {
            design = edit::add_nick(&design, h, offset, !scaffold_forward(h)).unwrap();
        }
    }
    // Staple crossover weave, skipping the seam column.
    for h in 0..HELICES - 1 {
        let start = if h % 2 == 0 { 24 } else { 40 };
        for offset in (start..296).step_by(32) {
            if offset != SEAM {
                let spec = CrossoverSpec::full(h, h + 1, offset, !scaffold_forward(h));
                design = edit::add_full_crossover(&design, &spec).unwrap();
            }
        }
    }
    // Twist-correcting deletions every 48 offsets.
    for h in 0..HELICES {
        for offset in (27..294).step_by(48) {
            design = edit::add_deletion(&design, h, offset).unwrap();
        }
    }
    design
}

fn main() {
    let design = build();
    let report = design.validate();
    assert!(report.is_valid(), "{report}");

    let scaffold_len = design.strands[0].dna_length();
    let staples = design.strands.len() - 1;
    println!("built rectangle: {staples} staples, scaffold {scaffold_len} bases");

    let assigned = sequence::assign_m13(&design, 0).expect("scaffold fits the default sequence");
    assert!(sequence::find_mismatches(&assigned).is_empty());

    let out = Path::new("rectangle-out");
    fs::create_dir_all(out).unwrap();
    fs::write(
        out.join("rectangle.sc"),
        codec::serialize_design(&assigned).unwrap(),
    )
    .unwrap();
    fs::write(out.join("strands.csv"), export_sequences_csv(&assigned)).unwrap();
    fs::write(
        out.join("plates.csv"),
        export_idt_plate(&assigned, &IdtOptions::default()).unwrap(),
    )
    .unwrap();
    fs::write(
        out.join("main.svg"),
        render_svg(&assigned, &RenderOptions::default()),
    )
    .unwrap();
    fs::write(
        out.join("side.svg"),
        render_svg(
            &assigned,
            &RenderOptions {
                view: View::Side,
                ..RenderOptions::default()
            },
        ),
    )
    .unwrap();
    println!("wrote rectangle-out/{{rectangle.sc, strands.csv, plates.csv, main.svg, side.svg}}");
}
