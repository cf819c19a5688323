//! Whole-design validation.
//!
//! [`Design::validate`] never fails: violations are returned as data in a
//! [`ValidationReport`], one [`Finding`] per broken rule, each carrying a
//! path into the document (`strands[2].domains[0]`).

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::model::{Design, Domain, Grid, Strand};

/// One diagnostic: where in the document, and what is wrong.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub path: String,
    pub message: String,
}

impl Finding {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Finding {
        Finding {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// Result of validating a design. The design is valid iff `errors` is empty;
/// warnings never make a design invalid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub errors: Vec<Finding>,
    pub warnings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.errors {
            writeln!(f, "{e}")?;
        }
        for w in &self.warnings {
            writeln!(f, "{}: warning: {}", w.path, w.message)?;
        }
        Ok(())
    }
}

const SEQUENCE_ALPHABET: &str = "ACGT?";

impl Design {
    /// Checks every structural rule of the document and reports each
    /// violation. Pure: two calls on the same design yield identical reports.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        check_helices(self, &mut report);
        check_view_order(self, &mut report);
        check_modification_table(self, &mut report);
        let windows = helix_windows(self);
        for (i, strand) in self.strands.iter().enumerate() {
            check_strand(self, i, strand, &windows, &mut report);
        }
        check_overlaps(self, &mut report);
        report
    }
}

/// Offset window of a helix: (min_offset, max_offset).
type Window = (i64, Option<i64>);

/// Map from helix idx to its offset window.
fn helix_windows(design: &Design) -> HashMap<usize, Window> {
    design
        .helices
        .iter()
        .map(|h| (h.idx, (h.min_offset, h.max_offset)))
        .collect()
}

fn check_helices(design: &Design, report: &mut ValidationReport) {
    let mut seen = HashSet::new();
    for (i, helix) in design.helices.iter().enumerate() {
        let path = format!("helices[{i}]");
        if !seen.insert(helix.idx) {
            report.errors.push(Finding::new(
                &path,
                format!("duplicate helix idx {}", helix.idx),
            ));
        }
        match helix.max_offset {
            None => report.errors.push(Finding::new(
                format!("{path}.max_offset"),
                "max_offset is required",
            )),
            Some(max) => {
                if helix.min_offset >= max {
                    report.errors.push(Finding::new(
                        &path,
                        format!(
                            "min_offset {} must be less than max_offset {max}",
                            helix.min_offset
                        ),
                    ));
                }
            }
        }
        match design.grid {
            Grid::None => {
                if helix.position.is_none() {
                    report.errors.push(Finding::new(
                        &path,
                        "gridless design requires a 3D position on every helix",
                    ));
                }
                if helix.grid_position.is_some() {
                    report.errors.push(Finding::new(
                        &path,
                        "gridless design must not use grid_position",
                    ));
                }
            }
            _ => {
                if helix.grid_position.is_none() {
                    report.errors.push(Finding::new(
                        &path,
                        format!("{} grid requires grid_position on every helix", design.grid),
                    ));
                }
                if helix.position.is_some() {
                    report.errors.push(Finding::new(
                        &path,
                        "helix on a grid must not carry a free position",
                    ));
                }
            }
        }
        if let Some(marks) = &helix.major_tick_marks {
            let increasing = marks.windows(2).all(|w| w[0] < w[1]);
            if !increasing {
                report.errors.push(Finding::new(
                    format!("{path}.major_tick_marks"),
                    "tick marks must strictly increase",
                ));
            }
            if let Some(max) = helix.max_offset {
                if marks.iter().any(|&m| m < helix.min_offset || m > max) {
                    report.errors.push(Finding::new(
                        format!("{path}.major_tick_marks"),
                        format!("tick marks must lie within [{}, {max}]", helix.min_offset),
                    ));
                }
            }
        }
        if helix.pitch != 0.0 || helix.yaw != 0.0 {
            report.warnings.push(Finding::new(
                &path,
                "pitch and yaw are stored but not used by any geometry",
            ));
        }
    }
}

fn check_view_order(design: &Design, report: &mut ValidationReport) {
    let Some(order) = &design.helices_view_order else {
        return;
    };
    let idx_set: HashSet<usize> = design.helices.iter().map(|h| h.idx).collect();
    let order_set: HashSet<usize> = order.iter().copied().collect();
    if order.len() != design.helices.len() || order_set != idx_set {
        report.errors.push(Finding::new(
            "helices_view_order",
            "must be a permutation of the helix idx values",
        ));
    }
}

fn check_modification_table(design: &Design, report: &mut ValidationReport) {
    let mut referenced = HashSet::new();
    for strand in &design.strands {
        referenced.extend(strand.modification_5p.iter().cloned());
        referenced.extend(strand.modification_3p.iter().cloned());
        referenced.extend(strand.modifications_internal.values().cloned());
    }
    for (id, m) in &design.modifications {
        let path = format!("modifications[{id:?}]");
        if m.display_text.is_empty() {
            report
                .errors
                .push(Finding::new(&path, "display_text must be nonempty"));
        }
        if m.idt_text.is_empty() {
            report
                .errors
                .push(Finding::new(&path, "idt_text must be nonempty"));
        }
        if !referenced.contains(id) {
            report
                .warnings
                .push(Finding::new(&path, "modification is never referenced"));
        }
    }
}

fn check_strand(
    design: &Design,
    index: usize,
    strand: &Strand,
    windows: &HashMap<usize, Window>,
    report: &mut ValidationReport,
) {
    let path = format!("strands[{index}]");
    if strand.domains.is_empty() {
        report
            .errors
            .push(Finding::new(&path, "strand has no domains"));
        return;
    }
    if matches!(strand.domains.first(), Some(Domain::Loopout(_)))
        || matches!(strand.domains.last(), Some(Domain::Loopout(_)))
    {
        report.errors.push(Finding::new(
            &path,
            "loopout cannot be the first or last domain of a strand",
        ));
    }
    for (k, pair) in strand.domains.windows(2).enumerate() {
        if pair[0].as_loopout().is_some() && pair[1].as_loopout().is_some() {
            report.errors.push(Finding::new(
                format!("{path}.domains[{}]", k + 1),
                "two loopouts cannot be consecutive",
            ));
        }
    }

    for (k, domain) in strand.domains.iter().enumerate() {
        let dpath = format!("{path}.domains[{k}]");
        match domain {
            Domain::Loopout(l) => {
                if l.length < 1 {
                    report
                        .errors
                        .push(Finding::new(&dpath, "loopout length must be at least 1"));
                }
            }
            Domain::Bound(b) => {
                if b.start >= b.end {
                    report.errors.push(Finding::new(
                        &dpath,
                        format!("start {} must be less than end {}", b.start, b.end),
                    ));
                }
                match windows.get(&b.helix) {
                    None => report.errors.push(Finding::new(
                        &dpath,
                        format!("references nonexistent helix {}", b.helix),
                    )),
                    Some((min, max)) => {
                        if b.start < *min {
                            report.errors.push(Finding::new(
                                &dpath,
                                format!("start {} is below helix min_offset {min}", b.start),
                            ));
                        }
                        if let Some(max) = max {
                            if b.end > *max {
                                report.errors.push(Finding::new(
                                    &dpath,
                                    format!("end {} is above helix max_offset {max}", b.end),
                                ));
                            }
                        }
                    }
                }
                check_domain_annotations(b, &dpath, report);
                if b.start < b.end && b.dna_length() == 0 {
                    report.errors.push(Finding::new(
                        &dpath,
                        "domain has no bases left after deletions",
                    ));
                }
            }
        }
    }

    if let Some(seq) = &strand.sequence {
        let spath = format!("{path}.sequence");
        if let Some(bad) = seq.chars().find(|c| !SEQUENCE_ALPHABET.contains(*c)) {
            report.errors.push(Finding::new(
                &spath,
                format!("illegal sequence character {bad:?}"),
            ));
        } else if seq.chars().count() != strand.dna_length() {
            report.errors.push(Finding::new(
                &spath,
                format!(
                    "sequence length {} does not match strand base count {}",
                    seq.chars().count(),
                    strand.dna_length()
                ),
            ));
        }
        if seq.contains('?') {
            report
                .warnings
                .push(Finding::new(&spath, "sequence contains unassigned bases"));
        }
    }

    for (label, id) in [
        ("modification_5p", &strand.modification_5p),
        ("modification_3p", &strand.modification_3p),
    ] {
        if let Some(id) = id {
            if !design.modifications.contains_key(id) {
                report.errors.push(Finding::new(
                    format!("{path}.{label}"),
                    format!("unknown modification id {id:?}"),
                ));
            }
        }
    }
    for (offset, id) in &strand.modifications_internal {
        if !design.modifications.contains_key(id) {
            report.errors.push(Finding::new(
                format!("{path}.modifications_internal[{offset}]"),
                format!("unknown modification id {id:?}"),
            ));
        }
    }
}

fn check_domain_annotations(
    b: &crate::model::BoundDomain,
    dpath: &str,
    report: &mut ValidationReport,
) {
    let mut seen_deletions = HashSet::new();
    for &d in &b.deletions {
        if !b.contains_offset(d) {
            report.errors.push(Finding::new(
                dpath,
                format!("deletion offset {d} lies outside [{}, {})", b.start, b.end),
            ));
        }
        if !seen_deletions.insert(d) {
            report.errors.push(Finding::new(
                dpath,
                format!("duplicate deletion offset {d}"),
            ));
        }
    }
    let mut seen_insertions = HashSet::new();
    for ins in &b.insertions {
        if !b.contains_offset(ins.offset) {
            report.errors.push(Finding::new(
                dpath,
                format!(
                    "insertion offset {} lies outside [{}, {})",
                    ins.offset, b.start, b.end
                ),
            ));
        }
        if ins.length < 1 {
            report.errors.push(Finding::new(
                dpath,
                format!("insertion at {} must have length at least 1", ins.offset),
            ));
        }
        if !seen_insertions.insert(ins.offset) {
            report.errors.push(Finding::new(
                dpath,
                format!("duplicate insertion offset {}", ins.offset),
            ));
        }
        if seen_deletions.contains(&ins.offset) {
            report.errors.push(Finding::new(
                dpath,
                format!("offset {} is both a deletion and an insertion", ins.offset),
            ));
        }
    }
}

/// A domain interval on a track: (start, end, strand index, domain index).
type TrackInterval = (i64, i64, usize, usize);

/// Same-helix, same-direction bound domains must not share offsets.
fn check_overlaps(design: &Design, report: &mut ValidationReport) {
    let mut by_track: BTreeMap<(usize, bool), Vec<TrackInterval>> = BTreeMap::new();
    for (i, strand) in design.strands.iter().enumerate() {
        for (k, domain) in strand.domains.iter().enumerate() {
            if let Domain::Bound(b) = domain {
                by_track
                    .entry((b.helix, b.forward))
                    .or_default()
                    .push((b.start, b.end, i, k));
            }
        }
    }
    for ((helix, forward), mut intervals) in by_track {
        intervals.sort_unstable();
        for pair in intervals.windows(2) {
            let (s1, e1, i1, k1) = pair[0];
            let (s2, _e2, i2, k2) = pair[1];
            if e1 > s2 {
                let dir = if forward { "forward" } else { "reverse" };
                report.errors.push(Finding::new(
                    format!("strands[{i2}].domains[{k2}]"),
                    format!(
                        "[{s2}..) overlaps strands[{i1}].domains[{k1}] [{s1}, {e1}) \
                         on helix {helix} {dir}"
                    ),
                ));
            }
        }
    }
}
