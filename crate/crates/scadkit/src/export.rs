//! Sequence exports: plain CSV, IDT bulk order lines, and IDT 96-well plate
//! layout.
//!
//! Exports are deterministic: the same design produces byte-identical text.

use thiserror::Error;

use crate::model::{Design, Strand};

/// Synthesis options forwarded into IDT order files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdtOptions {
    pub scale: String,
    pub purification: String,
}

impl Default for IdtOptions {
    fn default() -> Self {
        IdtOptions {
            scale: "25nm".to_string(),
            purification: "STD".to_string(),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ExportError {
    #[error("strands[{strand}]: cannot order a sequence with unassigned bases")]
    WildcardBase { strand: usize },
    #[error("strands[{strand}]: strand has no sequence")]
    MissingSequence { strand: usize },
    #[error("strands[{strand}]: modification {id:?} has no IDT code")]
    MissingIdtText { strand: usize, id: String },
    #[error("strands[{strand}]: unknown modification id {id:?}")]
    UnknownModification { strand: usize, id: String },
}

/// Default export name of a strand: its kind plus the helix/offset of both
/// ends, e.g. `ST1[8]0[8]` for a staple from helix 1 offset 8 to helix 0
/// offset 8. Collision-light and sorts by position.
pub fn strand_name(strand: &Strand) -> String {
    let kind = if strand.is_scaffold { "SCAF" } else { "ST" };
    match (strand.first_bound(), strand.last_bound()) {
        (Some(first), Some(last)) => format!(
            "{kind}{}[{}]{}[{}]",
            first.helix,
            first.offset_5p(),
            last.helix,
            last.offset_3p()
        ),
        _ => kind.to_string(),
    }
}

/// RFC 4180 quoting: fields containing commas, quotes, or line breaks are
/// quoted, with embedded quotes doubled.
fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

/// One `name,sequence` row per strand, in design order. A strand whose
/// sequence is missing or still contains wildcards gets the wildcards
/// written as `?` and a warning cell appended to its row.
pub fn export_sequences_csv(design: &Design) -> String {
    let mut out = String::from("name,sequence\n");
    for strand in &design.strands {
        let sequence = strand
            .sequence
            .clone()
            .unwrap_or_else(|| "?".repeat(strand.dna_length()));
        out.push_str(&csv_field(&strand_name(strand)));
        out.push(',');
        out.push_str(&csv_field(&sequence));
        if sequence.contains('?') {
            out.push_str(",contains unassigned bases");
        }
        out.push('\n');
    }
    out
}

/// The strand's order sequence: IDT modification codes spliced into the
/// bases, with the 5' code first, internal codes right after their base,
/// and the 3' code last.
fn sequence_with_modifications(
    design: &Design,
    strand_index: usize,
) -> Result<String, ExportError> {
    let strand = &design.strands[strand_index];
    let seq = strand
        .sequence
        .as_ref()
        .ok_or(ExportError::MissingSequence {
            strand: strand_index,
        })?;
    if seq.contains('?') {
        return Err(ExportError::WildcardBase {
            strand: strand_index,
        });
    }
    let idt_code = |id: &str| -> Result<String, ExportError> {
        let m = design
            .modifications
            .get(id)
            .ok_or_else(|| ExportError::UnknownModification {
                strand: strand_index,
                id: id.to_string(),
            })?;
        if m.idt_text.is_empty() {
            return Err(ExportError::MissingIdtText {
                strand: strand_index,
                id: id.to_string(),
            });
        }
        Ok(m.idt_text.clone())
    };
    let mut out = String::new();
    if let Some(id) = &strand.modification_5p {
        out.push_str(&idt_code(id)?);
    }
    for (i, base) in seq.chars().enumerate() {
        out.push(base);
        if let Some(id) = strand.modifications_internal.get(&i) {
            out.push_str(&idt_code(id)?);
        }
    }
    if let Some(id) = &strand.modification_3p {
        out.push_str(&idt_code(id)?);
    }
    Ok(out)
}

/// IDT bulk-input lines, one `name,sequence,scale,purification` row per
/// non-scaffold strand. Unassigned bases cannot be ordered and are an error.
pub fn export_idt_bulk(design: &Design, options: &IdtOptions) -> Result<String, ExportError> {
    let mut out = String::new();
    for (i, strand) in design.strands.iter().enumerate() {
        if strand.is_scaffold {
            continue;
        }
        let seq = sequence_with_modifications(design, i)?;
        out.push_str(&format!(
            "{},{},{},{}\n",
            csv_field(&strand_name(strand)),
            csv_field(&seq),
            csv_field(&options.scale),
            csv_field(&options.purification),
        ));
    }
    Ok(out)
}

const PLATE_ROWS: [char; 8] = ['A', 'B', 'C', 'D', 'E', 'F', 'G', 'H'];
const PLATE_COLUMNS: usize = 12;
const WELLS_PER_PLATE: usize = PLATE_ROWS.len() * PLATE_COLUMNS;

/// Well name for position `index` on a plate, filling column-major:
/// A1, B1, ... H1, A2, ...
fn well_name(index: usize) -> String {
    let row = PLATE_ROWS[index % PLATE_ROWS.len()];
    let column = index / PLATE_ROWS.len() + 1;
    format!("{row}{column}")
}

/// 96-well plate layout CSV (`plate,well,name,sequence`) for every
/// non-scaffold strand, filling wells column-major and starting a new
/// `plate_k` when one fills up.
pub fn export_idt_plate(design: &Design, options: &IdtOptions) -> Result<String, ExportError> {
    let _ = options;
    let mut out = String::from("plate,well,name,sequence\n");
    let mut placed = 0usize;
    for (i, strand) in design.strands.iter().enumerate() {
        if strand.is_scaffold {
            continue;
        }
        let seq = sequence_with_modifications(design, i)?;
        let plate = placed / WELLS_PER_PLATE + 1;
        let well = well_name(placed % WELLS_PER_PLATE);
        out.push_str(&format!(
            "plate_{plate},{well},{},{}\n",
            csv_field(&strand_name(strand)),
            csv_field(&seq),
        ));
        placed += 1;
    }
    Ok(out)
}
