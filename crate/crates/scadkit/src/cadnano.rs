//! cadnano v2 JSON import and export.
//!
//! cadnano lays every strand onto a `(helices) × (padded max offset)` grid of
//! neighbor tuples, one `vstrand` record per helix. The format is strictly
//! less expressive than the native design model, so export first decides
//! whether a design is representable at all ([`exportable`]) and reports
//! every blocker; import reconstructs strands by walking neighbor links from
//! each 5' end.

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::model::{BoundDomain, Color, Design, Domain, Grid, Helix, Insertion, Strand};
use crate::validate::ValidationReport;

/// One reason a design cannot be written as cadnano v2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExportBlocker {
    /// Only the square and honeycomb lattices exist in cadnano.
    UnsupportedGrid(String),
    /// cadnano has no single-stranded loopouts.
    Loopout { strand: usize, domain: usize },
    /// cadnano has no modifications.
    Modification { what: String },
    /// Scaffolds must run forward on even-numbered helices and reverse on
    /// odd ones; staples the opposite.
    Parity {
        strand: usize,
        domain: usize,
        helix: usize,
    },
}

impl std::fmt::Display for ExportBlocker {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExportBlocker::UnsupportedGrid(grid) => {
                write!(f, "cadnano cannot encode the {grid} grid")
            }
            ExportBlocker::Loopout { strand, domain } => write!(
                f,
                "strands[{strand}].domains[{domain}]: cadnano cannot encode a loopout"
            ),
            ExportBlocker::Modification { what } => {
                write!(f, "{what}: cadnano cannot encode modifications")
            }
            ExportBlocker::Parity {
                strand,
                domain,
                helix,
            } => write!(
                f,
                "strands[{strand}].domains[{domain}]: direction on helix {helix} breaks \
                 cadnano's scaffold-forward-on-even-helices convention"
            ),
        }
    }
}

#[derive(Debug, Error)]
pub enum CadnanoError {
    #[error("design is invalid:\n{0}")]
    Invalid(ValidationReport),
    #[error("design cannot be encoded as cadnano v2:\n{}",
            .0.iter().map(|b| format!("  {b}")).collect::<Vec<_>>().join("\n"))]
    Unexportable(Vec<ExportBlocker>),
    #[error("helix {helix}: cadnano offsets start at 0 but min_offset is {min_offset}")]
    NegativeOffsets { helix: usize, min_offset: i64 },
    #[error(
        "helix {helix} offset {offset}: inconsistent deletion/insertion between the \
             strands at this position; cadnano applies them to both"
    )]
    ConflictingAnnotation { helix: usize, offset: i64 },
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Format { path: String, message: String },
    #[error("circular strands are not supported")]
    CircularStrand,
    #[error(
        "strands[{strand}]: a strand occupying a single offset has no neighbor links \
             and cannot be told apart from an empty slot in cadnano's grid"
    )]
    SingleOffsetStrand { strand: usize },
}

fn format_err(path: impl Into<String>, message: impl Into<String>) -> CadnanoError {
    CadnanoError::Format {
        path: path.into(),
        message: message.into(),
    }
}

/// Smallest cadnano-legal array length covering `max_offset`: cadnano infers
/// the lattice from the array length, multiples of 32 meaning square and
/// multiples of 21 honeycomb.
pub fn pad_max_offset(max_offset: i64, grid: Grid) -> Result<i64, CadnanoError> {
    let unit = match grid {
        Grid::Square => 32,
        Grid::Honeycomb => 21,
        other => {
            return Err(CadnanoError::Unexportable(vec![
                ExportBlocker::UnsupportedGrid(other.as_str().to_string()),
            ]))
        }
    };
    Ok((max_offset.max(0) + unit - 1).div_euclid(unit) * unit)
}

/// Every reason the design cannot round-trip through cadnano v2; empty means
/// exportable. The checks mirror the four representational gaps: grid,
/// loopouts, modifications, and strand-direction parity.
pub fn exportable(design: &Design) -> Vec<ExportBlocker> {
    let mut blockers = Vec::new();
    if !matches!(design.grid, Grid::Square | Grid::Honeycomb) {
        blockers.push(ExportBlocker::UnsupportedGrid(
            design.grid.as_str().to_string(),
        ));
    }
    if !design.modifications.is_empty() {
        blockers.push(ExportBlocker::Modification {
            what: "modifications_in_design".to_string(),
        });
    }
    for (si, strand) in design.strands.iter().enumerate() {
        for (label, present) in [
            ("5prime_modification", strand.modification_5p.is_some()),
            ("3prime_modification", strand.modification_3p.is_some()),
            (
                "internal_modifications",
                !strand.modifications_internal.is_empty(),
            ),
        ] {
            if present {
                blockers.push(ExportBlocker::Modification {
                    what: format!("strands[{si}].{label}"),
                });
            }
        }
        for (k, domain) in strand.domains.iter().enumerate() {
            match domain {
                Domain::Loopout(_) => blockers.push(ExportBlocker::Loopout {
                    strand: si,
                    domain: k,
                }),
                Domain::Bound(b) => {
                    let scaffold_forward = b.helix % 2 == 0;
                    let expected = if strand.is_scaffold {
                        scaffold_forward
                    } else {
                        !scaffold_forward
                    };
                    if b.forward != expected {
                        blockers.push(ExportBlocker::Parity {
                            strand: si,
                            domain: k,
                            helix: b.helix,
                        });
                    }
                }
            }
        }
    }
    blockers
}

#[derive(Clone)]
struct VStrandBuilder {
    num: usize,
    row: i64,
    col: i64,
    scaf: Vec<[i64; 4]>,
    stap: Vec<[i64; 4]>,
    skip: Vec<i64>,
    loop_: Vec<i64>,
    stap_colors: Vec<(i64, u32)>,
}

const EMPTY_TUPLE: [i64; 4] = [-1, -1, -1, -1];

/// Exports a valid, exportable design as cadnano v2 JSON, using the design's
/// own `name` extra field (or `"exported-design"`) as the document name.
pub fn export_cadnano_v2(design: &Design) -> Result<String, CadnanoError> {
    let name = design
        .extra_fields
        .get("name")
        .and_then(Value::as_str)
        .unwrap_or("exported-design")
        .to_string();
    export_cadnano_v2_named(design, &name)
}

/// Exports with an explicit document name (conventionally the output file
/// name). DNA sequences are dropped: cadnano does not store them.
pub fn export_cadnano_v2_named(design: &Design, name: &str) -> Result<String, CadnanoError> {
    let report = design.validate();
    if !report.is_valid() {
        return Err(CadnanoError::Invalid(report));
    }
    let blockers = exportable(design);
    if !blockers.is_empty() {
        return Err(CadnanoError::Unexportable(blockers));
    }
    for helix in &design.helices {
        if helix.min_offset < 0 {
            return Err(CadnanoError::NegativeOffsets {
                helix: helix.idx,
                min_offset: helix.min_offset,
            });
        }
    }
    for (si, strand) in design.strands.iter().enumerate() {
        let positions: i64 = strand.bound_domains().map(|b| b.end - b.start).sum();
        if positions < 2 {
            return Err(CadnanoError::SingleOffsetStrand { strand: si });
        }
    }
    let design_max = design
        .helices
        .iter()
        .filter_map(|h| h.max_offset)
        .max()
        .unwrap_or(0);
    let padded = pad_max_offset(design_max, design.grid)? as usize;

    let mut vstrands: Vec<VStrandBuilder> = design
        .helices
        .iter()
        .map(|h| {
            let (gx, gy) = h.grid_position.unwrap_or((0, 0));
            VStrandBuilder {
                num: h.idx,
                col: gx,
                row: gy,
                scaf: vec![EMPTY_TUPLE; padded],
                stap: vec![EMPTY_TUPLE; padded],
                skip: vec![0; padded],
                loop_: vec![0; padded],
                stap_colors: Vec::new(),
            }
        })
        .collect();
    let slot_of: std::collections::HashMap<usize, usize> = design
        .helices
        .iter()
        .enumerate()
        .map(|(slot, h)| (h.idx, slot))
        .collect();

    for (si, strand) in design.strands.iter().enumerate() {
        // 5'→3' walk over every visual offset, deletions included: cadnano
        // paths pass through skipped positions.
        let mut path: Vec<(usize, i64)> = Vec::new();
        for b in strand.bound_domains() {
            if b.forward {
                path.extend((b.start..b.end).map(|o| (b.helix, o)));
            } else {
                path.extend((b.start..b.end).rev().map(|o| (b.helix, o)));
            }
        }
        for (pos, &(helix, offset)) in path.iter().enumerate() {
            let prev = if pos > 0 {
                path[pos - 1]
            } else {
                (usize::MAX, -1)
            };
            let next = if pos + 1 < path.len() {
                path[pos + 1]
            } else {
                (usize::MAX, -1)
            };
            let tuple = [
                if prev.1 >= 0 { prev.0 as i64 } else { -1 },
                prev.1,
                if next.1 >= 0 { next.0 as i64 } else { -1 },
                next.1,
            ];
            let vs = &mut vstrands[slot_of[&helix]];
            let arr = if strand.is_scaffold {
                &mut vs.scaf
            } else {
                &mut vs.stap
            };
            arr[offset as usize] = tuple;
        }
        for b in strand.bound_domains() {
            let vs = &mut vstrands[slot_of[&b.helix]];
            for &d in &b.deletions {
                vs.skip[d as usize] = -1;
            }
            for ins in &b.insertions {
                vs.loop_[ins.offset as usize] = ins.length as i64;
            }
        }
        if !strand.is_scaffold {
            if let Some(first) = strand.first_bound() {
                let color = design.strand_color(si).to_u32();
                vstrands[slot_of[&first.helix]]
                    .stap_colors
                    .push((first.offset_5p(), color));
            }
        }
    }

    // cadnano applies skip/loop to both strands at an offset, so every
    // covering domain must agree with the array.
    for strand in &design.strands {
        for b in strand.bound_domains() {
            let vs = &vstrands[slot_of[&b.helix]];
            for o in b.start..b.end {
                let has_del = b.deletions.contains(&o);
                if (vs.skip[o as usize] == -1) != has_del {
                    return Err(CadnanoError::ConflictingAnnotation {
                        helix: b.helix,
                        offset: o,
                    });
                }
                let run = vs.loop_[o as usize];
                let own = b
                    .insertions
                    .iter()
                    .find(|i| i.offset == o)
                    .map(|i| i.length as i64)
                    .unwrap_or(0);
                if run != own {
                    return Err(CadnanoError::ConflictingAnnotation {
                        helix: b.helix,
                        offset: o,
                    });
                }
            }
        }
    }

    let vstrand_values: Vec<Value> = vstrands
        .into_iter()
        .map(|mut vs| {
            vs.stap_colors.sort_unstable();
            let mut obj = Map::new();
            obj.insert("row".into(), json!(vs.row));
            obj.insert("col".into(), json!(vs.col));
            obj.insert("num".into(), json!(vs.num));
            obj.insert(
                "scaf".into(),
                Value::Array(vs.scaf.iter().map(|t| json!(t)).collect()),
            );
            obj.insert(
                "stap".into(),
                Value::Array(vs.stap.iter().map(|t| json!(t)).collect()),
            );
            obj.insert("loop".into(), json!(vs.loop_));
            obj.insert("skip".into(), json!(vs.skip));
            obj.insert("scafLoop".into(), json!([] as [i64; 0]));
            obj.insert("stapLoop".into(), json!([] as [i64; 0]));
            obj.insert(
                "stap_colors".into(),
                Value::Array(vs.stap_colors.iter().map(|(o, c)| json!([o, c])).collect()),
            );
            Value::Object(obj)
        })
        .collect();

    let doc = json!({
        "name": name,
        "vstrands": vstrand_values,
    });
    Ok(serde_json::to_string(&doc).expect("JSON value always serializes"))
}

struct ParsedVStrand {
    num: usize,
    row: i64,
    col: i64,
    scaf: Vec<[i64; 4]>,
    stap: Vec<[i64; 4]>,
    skip: Vec<i64>,
    loop_: Vec<i64>,
    stap_colors: Vec<(i64, u32)>,
}

/// Imports a cadnano v2 document.
///
/// The lattice is inferred from the padded array length (multiples of 32 →
/// square, otherwise multiples of 21 → honeycomb). Strands are recovered by
/// walking 3'-neighbor links from every base with no 5' neighbor; helix or
/// step-direction changes split the walk into bound domains. The document
/// name is kept in the design's extra fields.
pub fn import_cadnano_v2(text: &str) -> Result<Design, CadnanoError> {
    let value: Value = serde_json::from_str(text).map_err(|e| CadnanoError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let root = value
        .as_object()
        .ok_or_else(|| format_err("document root", "expected a JSON object"))?;
    let vstrands_value = root
        .get("vstrands")
        .ok_or_else(|| format_err("document root", "missing \"vstrands\""))?;
    let vstrand_array = vstrands_value
        .as_array()
        .ok_or_else(|| format_err("vstrands", "expected an array"))?;

    let mut vstrands = Vec::with_capacity(vstrand_array.len());
    let mut padded: Option<usize> = None;
    let mut seen_nums = std::collections::HashSet::new();
    for (i, vv) in vstrand_array.iter().enumerate() {
        let path = format!("vstrands[{i}]");
        let vs = parse_vstrand(vv, &path)?;
        if !seen_nums.insert(vs.num) {
            return Err(format_err(
                &path,
                format!("duplicate helix number {}", vs.num),
            ));
        }
        let length = vs.scaf.len();
        match padded {
            None => padded = Some(length),
            Some(existing) if existing != length => {
                return Err(format_err(&path, "vstrand array lengths differ"));
            }
            _ => {}
        }
        vstrands.push(vs);
    }

    let mut design = Design::new(Grid::Square);
    if let Some(padded) = padded {
        if padded == 0 {
            return Err(format_err("vstrands", "vstrand arrays are empty"));
        }
        design.grid = if padded % 32 == 0 {
            Grid::Square
        } else if padded % 21 == 0 {
            Grid::Honeycomb
        } else {
            return Err(format_err(
                "vstrands",
                format!("array length {padded} is a multiple of neither 32 nor 21"),
            ));
        };
        for vs in &vstrands {
            design
                .helices
                .push(Helix::new(vs.num, padded as i64).with_grid_position(vs.col, vs.row));
        }
        trace_strands(&mut design, &vstrands, padded)?;
    }
    if let Some(name) = root.get("name") {
        design.extra_fields.insert("name".into(), name.clone());
    }
    for (k, v) in root {
        if k != "name" && k != "vstrands" {
            design.extra_fields.insert(k.clone(), v.clone());
        }
    }
    Ok(design)
}

fn parse_vstrand(value: &Value, path: &str) -> Result<ParsedVStrand, CadnanoError> {
    let obj = value
        .as_object()
        .ok_or_else(|| format_err(path, "expected an object"))?;
    let int = |key: &str| -> Result<i64, CadnanoError> {
        obj.get(key)
            .and_then(Value::as_i64)
            .ok_or_else(|| format_err(format!("{path}.{key}"), "expected an integer"))
    };
    let num_raw = int("num")?;
    if num_raw < 0 {
        return Err(format_err(
            format!("{path}.num"),
            "helix number must be nonnegative",
        ));
    }
    let tuples = |key: &str| -> Result<Vec<[i64; 4]>, CadnanoError> {
        let kpath = format!("{path}.{key}");
        let arr = obj
            .get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| format_err(&kpath, "expected an array"))?;
        arr.iter()
            .map(|t| {
                let quad = t
                    .as_array()
                    .filter(|q| q.len() == 4)
                    .ok_or_else(|| format_err(&kpath, "expected 4-element tuples"))?;
                let mut out = [0i64; 4];
                for (slot, qv) in out.iter_mut().zip(quad) {
                    *slot = qv
                        .as_i64()
                        .ok_or_else(|| format_err(&kpath, "expected integer tuples"))?;
                }
                Ok(out)
            })
            .collect()
    };
    let scaf = tuples("scaf")?;
    let stap = tuples("stap")?;
    let ints_or_zeroes = |key: &str, len: usize| -> Result<Vec<i64>, CadnanoError> {
        match obj.get(key) {
            None => Ok(vec![0; len]),
            Some(v) => {
                let kpath = format!("{path}.{key}");
                let arr = v
                    .as_array()
                    .ok_or_else(|| format_err(&kpath, "expected an array"))?;
                arr.iter()
                    .map(|x| {
                        x.as_i64()
                            .ok_or_else(|| format_err(&kpath, "expected integers"))
                    })
                    .collect()
            }
        }
    };
    let skip = ints_or_zeroes("skip", scaf.len())?;
    let loop_ = ints_or_zeroes("loop", scaf.len())?;
    if stap.len() != scaf.len() || skip.len() != scaf.len() || loop_.len() != scaf.len() {
        return Err(format_err(
            path,
            "scaf, stap, skip, and loop lengths differ",
        ));
    }
    for key in ["scafLoop", "stapLoop"] {
        if let Some(v) = obj.get(key) {
            if v.as_array().is_none_or(|a| !a.is_empty()) {
                return Err(CadnanoError::CircularStrand);
            }
        }
    }
    let mut stap_colors = Vec::new();
    if let Some(v) = obj.get("stap_colors") {
        let kpath = format!("{path}.stap_colors");
        let arr = v
            .as_array()
            .ok_or_else(|| format_err(&kpath, "expected an array"))?;
        for entry in arr {
            let pair = entry
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| format_err(&kpath, "expected [offset, color] pairs"))?;
            let offset = pair[0]
                .as_i64()
                .ok_or_else(|| format_err(&kpath, "expected integer offsets"))?;
            let color = pair[1]
                .as_i64()
                .ok_or_else(|| format_err(&kpath, "expected integer colors"))?;
            stap_colors.push((offset, (color as u32) & 0x00ff_ffff));
        }
    }
    Ok(ParsedVStrand {
        num: num_raw as usize,
        row: int("row")?,
        col: int("col")?,
        scaf,
        stap,
        skip,
        loop_,
        stap_colors,
    })
}

fn trace_strands(
    design: &mut Design,
    vstrands: &[ParsedVStrand],
    padded: usize,
) -> Result<(), CadnanoError> {
    let slot_of: std::collections::HashMap<usize, usize> = vstrands
        .iter()
        .enumerate()
        .map(|(slot, vs)| (vs.num, slot))
        .collect();
    for is_scaffold in [true, false] {
        let arrays: Vec<&Vec<[i64; 4]>> = vstrands
            .iter()
            .map(|vs| if is_scaffold { &vs.scaf } else { &vs.stap })
            .collect();
        let mut visited = vec![vec![false; padded]; vstrands.len()];
        let occupied = |slot: usize, offset: usize| arrays[slot][offset] != EMPTY_TUPLE;

        for start_slot in 0..vstrands.len() {
            for start_offset in 0..padded {
                if !occupied(start_slot, start_offset) {
                    continue;
                }
                let tuple = arrays[start_slot][start_offset];
                let is_5p_end = tuple[0] == -1 && tuple[1] == -1;
                if !is_5p_end {
                    continue;
                }
                let mut path: Vec<(usize, usize)> = Vec::new(); // (slot, offset)
                let mut current = (start_slot, start_offset);
                loop {
                    let (slot, offset) = current;
                    if visited[slot][offset] {
                        return Err(format_err(
                            format!("vstrands[{slot}]"),
                            format!("offset {offset} is reached by two strand walks"),
                        ));
                    }
                    visited[slot][offset] = true;
                    path.push(current);
                    let tuple = arrays[slot][offset];
                    if tuple[2] == -1 && tuple[3] == -1 {
                        break;
                    }
                    let next_slot = *slot_of.get(&(tuple[2] as usize)).ok_or_else(|| {
                        format_err(
                            format!("vstrands[{slot}]"),
                            format!("3' neighbor references unknown helix {}", tuple[2]),
                        )
                    })?;
                    let next_offset = tuple[3];
                    if tuple[2] < 0 || next_offset < 0 || next_offset as usize >= padded {
                        return Err(format_err(
                            format!("vstrands[{slot}]"),
                            format!("dangling 3' neighbor [{}, {next_offset}]", tuple[2]),
                        ));
                    }
                    let next = (next_slot, next_offset as usize);
                    if !occupied(next.0, next.1) {
                        return Err(format_err(
                            format!("vstrands[{slot}]"),
                            format!(
                                "3' neighbor [{}, {next_offset}] points at an empty slot",
                                tuple[2]
                            ),
                        ));
                    }
                    current = next;
                }
                let strand = strand_from_path(&path, vstrands, is_scaffold);
                design.strands.push(strand);
            }
        }
        // Any occupied base not reached from a 5' end belongs to a cycle.
        for (slot, seen) in visited.iter().enumerate() {
            for (offset, was_visited) in seen.iter().enumerate() {
                if occupied(slot, offset) && !was_visited {
                    return Err(CadnanoError::CircularStrand);
                }
            }
        }
    }
    Ok(())
}

fn strand_from_path(
    path: &[(usize, usize)],
    vstrands: &[ParsedVStrand],
    is_scaffold: bool,
) -> Strand {
    // Even-numbered helices carry the scaffold forward, odd ones reverse;
    // staples run opposite. That convention fixes every domain's direction.
    let direction = |slot: usize| {
        let even = vstrands[slot].num.is_multiple_of(2);
        if is_scaffold {
            even
        } else {
            !even
        }
    };
    let mut domains: Vec<Domain> = Vec::new();
    let mut run: Vec<(usize, usize)> = Vec::new();
    let flush = |run: &mut Vec<(usize, usize)>, domains: &mut Vec<Domain>| {
        if run.is_empty() {
            return;
        }
        let slot = run[0].0;
        let vs = &vstrands[slot];
        let forward = direction(slot);
        let offsets: Vec<i64> = run.iter().map(|&(_, o)| o as i64).collect();
        let (start, end) = if forward {
            (offsets[0], offsets[offsets.len() - 1] + 1)
        } else {
            (offsets[offsets.len() - 1], offsets[0] + 1)
        };
        let mut bound = BoundDomain::new(vs.num, forward, start, end);
        for o in start..end {
            if vs.skip[o as usize] == -1 {
                bound.deletions.push(o);
            }
            let extra = vs.loop_[o as usize];
            if extra > 0 {
                bound.insertions.push(Insertion::new(o, extra as usize));
            }
        }
        domains.push(Domain::Bound(bound));
        run.clear();
    };
    for &(slot, offset) in path {
        if let Some(&(last_slot, last_offset)) = run.last() {
            let step = if direction(last_slot) { 1i64 } else { -1 };
            let contiguous = slot == last_slot && offset as i64 == last_offset as i64 + step;
            if !contiguous {
                flush(&mut run, &mut domains);
            }
        }
        run.push((slot, offset));
    }
    flush(&mut run, &mut domains);

    let mut strand = Strand::new(domains);
    strand.is_scaffold = is_scaffold;
    if is_scaffold {
        strand.color = Some(crate::model::SCAFFOLD_COLOR);
    } else if let Some(first) = strand.first_bound() {
        let slot = vstrands
            .iter()
            .position(|vs| vs.num == first.helix)
            .expect("domain helix came from this vstrand set");
        strand.color = vstrands[slot]
            .stap_colors
            .iter()
            .find(|(o, _)| *o == first.offset_5p())
            .map(|&(_, c)| Some(Color::from_u32(c)))
            .unwrap_or(None);
    }
    strand
}
