//! Core design document types: grids, helices, strands, domains, and
//! modifications.
//!
//! A [`Design`] is an immutable value. Editing functions in [`crate::edit`]
//! take a design by reference and return a new one, so designs can be shared
//! freely across threads.

use std::collections::BTreeMap;
use std::fmt;

/// JSON object used to carry unrecognized fields through a parse/serialize
/// cycle. Key order is preserved.
pub type ExtraFields = serde_json::Map<String, serde_json::Value>;

/// Lattice arrangement of helix cross-sections in the side view.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grid {
    Square,
    Honeycomb,
    Hex,
    /// Free placement: every helix carries an explicit 3D position.
    None,
}

impl Grid {
    pub fn as_str(&self) -> &'static str {
        match self {
            Grid::Square => "square",
            Grid::Honeycomb => "honeycomb",
            Grid::Hex => "hex",
            Grid::None => "none",
        }
    }

    pub fn from_name(s: &str) -> Option<Grid> {
        match s {
            "square" => Some(Grid::Square),
            "honeycomb" => Some(Grid::Honeycomb),
            "hex" => Some(Grid::Hex),
            "none" => Some(Grid::None),
            _ => None,
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// RGB color, written as `#rrggbb` in the `.sc` format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Color(pub u8, pub u8, pub u8);

/// Default color given to scaffold strands.
pub const SCAFFOLD_COLOR: Color = Color(0x00, 0x66, 0xcc);

/// Palette cycled by strand index for strands without an explicit color.
pub const STRAND_PALETTE: [Color; 8] = [
    Color(0xf7, 0x43, 0x08),
    Color(0x57, 0xbb, 0x00),
    Color(0x88, 0x88, 0x88),
    Color(0x32, 0xb8, 0x6c),
    Color(0x33, 0x33, 0x33),
    Color(0x32, 0x00, 0x96),
    Color(0x03, 0xb6, 0xa2),
    Color(0x73, 0x00, 0xde),
];

impl Color {
    /// Parses `#rrggbb` (case-insensitive hex digits).
    pub fn from_hex(s: &str) -> Option<Color> {
        let hex = s.strip_prefix('#')?;
        if hex.len() != 6 || !hex.bytes().all(|b| b.is_ascii_hexdigit()) {
            return None;
        }
        let r = u8::from_str_radix(&hex[0..2], 16).ok()?;
        let g = u8::from_str_radix(&hex[2..4], 16).ok()?;
        let b = u8::from_str_radix(&hex[4..6], 16).ok()?;
        Some(Color(r, g, b))
    }

    pub fn to_hex(&self) -> String {
        format!("#{:02x}{:02x}{:02x}", self.0, self.1, self.2)
    }

    /// 24-bit `0xRRGGBB` integer, the encoding used by cadnano `stap_colors`.
    pub fn to_u32(&self) -> u32 {
        ((self.0 as u32) << 16) | ((self.1 as u32) << 8) | self.2 as u32
    }

    pub fn from_u32(v: u32) -> Color {
        Color((v >> 16) as u8, (v >> 8) as u8, v as u8)
    }

    /// Default palette color for the strand at `strand_index`.
    pub fn default_for_strand(strand_index: usize, is_scaffold: bool) -> Color {
        if is_scaffold {
            SCAFFOLD_COLOR
        } else {
            STRAND_PALETTE[strand_index % STRAND_PALETTE.len()]
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// Point in nanometers. Screen convention: in the main view `x` increases
/// rightward and `y` downward; `z` points out of the screen.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Position3D {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position3D {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Position3D { x, y, z }
    }

    pub fn distance(&self, other: &Position3D) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

/// One DNA double helix. Offsets index base positions along the helix;
/// `min_offset` is inclusive and `max_offset` exclusive.
#[derive(Debug, Clone, PartialEq)]
pub struct Helix {
    pub idx: usize,
    pub min_offset: i64,
    /// Required for a valid design; kept optional so a parsed document can be
    /// inspected before validation.
    pub max_offset: Option<i64>,
    pub grid_position: Option<(i64, i64)>,
    pub position: Option<Position3D>,
    pub pitch: f64,
    pub roll: f64,
    pub yaw: f64,
    /// Explicit tick offsets; overrides `major_tick_distance` when present.
    pub major_tick_marks: Option<Vec<i64>>,
    pub major_tick_distance: Option<i64>,
    pub extra_fields: ExtraFields,
}

/// Spacing used for tick marks when neither explicit marks nor a distance is
/// given.
pub const DEFAULT_MAJOR_TICK_DISTANCE: i64 = 8;

impl Helix {
    pub fn new(idx: usize, max_offset: i64) -> Helix {
        Helix {
            idx,
            min_offset: 0,
            max_offset: Some(max_offset),
            grid_position: None,
            position: None,
            pitch: 0.0,
            roll: 0.0,
            yaw: 0.0,
            major_tick_marks: None,
            major_tick_distance: None,
            extra_fields: ExtraFields::new(),
        }
    }

    pub fn with_grid_position(mut self, gx: i64, gy: i64) -> Helix {
        self.grid_position = Some((gx, gy));
        self
    }

    pub fn with_position(mut self, x: f64, y: f64, z: f64) -> Helix {
        self.position = Some(Position3D::new(x, y, z));
        self
    }

    pub fn with_min_offset(mut self, min_offset: i64) -> Helix {
        self.min_offset = min_offset;
        self
    }

    pub fn with_roll(mut self, roll: f64) -> Helix {
        self.roll = roll;
        self
    }

    /// Effective major tick offsets within the helix window.
    pub fn effective_major_ticks(&self) -> Vec<i64> {
        if let Some(marks) = &self.major_tick_marks {
            return marks.clone();
        }
        let Some(max) = self.max_offset else {
            return Vec::new();
        };
        let step = self
            .major_tick_distance
            .unwrap_or(DEFAULT_MAJOR_TICK_DISTANCE);
        if step <= 0 {
            return Vec::new();
        }
        (self.min_offset..=max).step_by(step as usize).collect()
    }
}

/// Length of an insertion at one offset: that offset holds `length + 1`
/// bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Insertion {
    pub offset: i64,
    pub length: usize,
}

impl Insertion {
    pub fn new(offset: i64, length: usize) -> Insertion {
        Insertion { offset, length }
    }
}

/// Contiguous run of a strand on a single helix in one direction.
/// `start` is inclusive, `end` exclusive, so a domain with `end == 8` abuts
/// one with `start == 8`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundDomain {
    pub helix: usize,
    pub forward: bool,
    pub start: i64,
    pub end: i64,
    pub deletions: Vec<i64>,
    pub insertions: Vec<Insertion>,
    pub extra_fields: ExtraFields,
}

impl BoundDomain {
    pub fn new(helix: usize, forward: bool, start: i64, end: i64) -> BoundDomain {
        BoundDomain {
            helix,
            forward,
            start,
            end,
            deletions: Vec::new(),
            insertions: Vec::new(),
            extra_fields: ExtraFields::new(),
        }
    }

    pub fn with_deletions(mut self, deletions: Vec<i64>) -> BoundDomain {
        self.deletions = deletions;
        self
    }

    pub fn with_insertions(mut self, insertions: Vec<(i64, usize)>) -> BoundDomain {
        self.insertions = insertions
            .into_iter()
            .map(|(o, n)| Insertion::new(o, n))
            .collect();
        self
    }

    pub fn contains_offset(&self, offset: i64) -> bool {
        self.start <= offset && offset < self.end
    }

    /// Number of bases the domain holds at `offset`: 0 for a deletion,
    /// insertion length + 1 for an insertion, 1 otherwise.
    pub fn bases_at(&self, offset: i64) -> usize {
        if self.deletions.contains(&offset) {
            0
        } else if let Some(ins) = self.insertions.iter().find(|i| i.offset == offset) {
            ins.length + 1
        } else {
            1
        }
    }

    /// Offsets visited in 5'→3' order, each with its base multiplicity.
    /// Forward domains ascend from `start`; reverse domains descend from
    /// `end - 1`.
    pub fn base_offsets(&self) -> Vec<(i64, usize)> {
        let mut out = Vec::with_capacity((self.end - self.start).max(0) as usize);
        if self.forward {
            for offset in self.start..self.end {
                out.push((offset, self.bases_at(offset)));
            }
        } else {
            for offset in (self.start..self.end).rev() {
                out.push((offset, self.bases_at(offset)));
            }
        }
        out
    }

    /// Total number of DNA bases in the domain.
    pub fn dna_length(&self) -> usize {
        let visual = (self.end - self.start).max(0) as usize;
        let inserted: usize = self.insertions.iter().map(|i| i.length).sum();
        (visual + inserted).saturating_sub(self.deletions.len())
    }

    /// Offset of the 5' end of this domain.
    pub fn offset_5p(&self) -> i64 {
        if self.forward {
            self.start
        } else {
            self.end - 1
        }
    }

    /// Offset of the 3' end of this domain.
    pub fn offset_3p(&self) -> i64 {
        if self.forward {
            self.end - 1
        } else {
            self.start
        }
    }
}

/// Single-stranded segment not associated with any helix.
#[derive(Debug, Clone, PartialEq)]
pub struct Loopout {
    pub length: usize,
    pub extra_fields: ExtraFields,
}

impl Loopout {
    pub fn new(length: usize) -> Loopout {
        Loopout {
            length,
            extra_fields: ExtraFields::new(),
        }
    }
}

/// One element of a strand's 5'→3' domain list.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    Bound(BoundDomain),
    Loopout(Loopout),
}

impl Domain {
    pub fn as_bound(&self) -> Option<&BoundDomain> {
        match self {
            Domain::Bound(b) => Some(b),
            Domain::Loopout(_) => None,
        }
    }

    pub fn as_loopout(&self) -> Option<&Loopout> {
        match self {
            Domain::Loopout(l) => Some(l),
            Domain::Bound(_) => None,
        }
    }

    pub fn dna_length(&self) -> usize {
        match self {
            Domain::Bound(b) => b.dna_length(),
            Domain::Loopout(l) => l.length,
        }
    }
}

impl From<BoundDomain> for Domain {
    fn from(b: BoundDomain) -> Domain {
        Domain::Bound(b)
    }
}

impl From<Loopout> for Domain {
    fn from(l: Loopout) -> Domain {
        Domain::Loopout(l)
    }
}

/// Where a modification attaches to a strand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModificationLocation {
    FivePrime,
    ThreePrime,
    Internal,
}

impl ModificationLocation {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModificationLocation::FivePrime => "5'",
            ModificationLocation::ThreePrime => "3'",
            ModificationLocation::Internal => "internal",
        }
    }

    pub fn from_name(s: &str) -> Option<ModificationLocation> {
        match s {
            "5'" => Some(ModificationLocation::FivePrime),
            "3'" => Some(ModificationLocation::ThreePrime),
            "internal" => Some(ModificationLocation::Internal),
            _ => None,
        }
    }
}

/// Small molecule attached during synthesis (biotin, fluorophores, ...).
/// Defined once at design level and referenced by id from strands.
#[derive(Debug, Clone, PartialEq)]
pub struct Modification {
    /// Short text shown in diagrams, e.g. `B` for biotin.
    pub display_text: String,
    /// IDT order code, e.g. `/5Biosg/`.
    pub idt_text: String,
    pub location: ModificationLocation,
    pub extra_fields: ExtraFields,
}

impl Modification {
    pub fn new(display_text: &str, idt_text: &str, location: ModificationLocation) -> Self {
        Modification {
            display_text: display_text.to_string(),
            idt_text: idt_text.to_string(),
            location,
            extra_fields: ExtraFields::new(),
        }
    }
}

/// One DNA strand: an ordered 5'→3' list of domains plus display and
/// synthesis metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Strand {
    pub domains: Vec<Domain>,
    /// `None` means "use the default palette"; see [`Design::strand_color`].
    pub color: Option<Color>,
    pub is_scaffold: bool,
    /// DNA over the alphabet `A C G T ?`, where `?` marks an unassigned base.
    pub sequence: Option<String>,
    pub modification_5p: Option<String>,
    pub modification_3p: Option<String>,
    /// Keyed by 0-based base index into the strand's 5'→3' sequence.
    pub modifications_internal: BTreeMap<usize, String>,
    pub extra_fields: ExtraFields,
}

impl Strand {
    pub fn new(domains: Vec<Domain>) -> Strand {
        Strand {
            domains,
            color: None,
            is_scaffold: false,
            sequence: None,
            modification_5p: None,
            modification_3p: None,
            modifications_internal: BTreeMap::new(),
            extra_fields: ExtraFields::new(),
        }
    }

    /// Builds a strand from a single bound domain.
    pub fn from_bound(helix: usize, forward: bool, start: i64, end: i64) -> Strand {
        Strand::new(vec![BoundDomain::new(helix, forward, start, end).into()])
    }

    pub fn with_color(mut self, color: Color) -> Strand {
        self.color = Some(color);
        self
    }

    pub fn with_sequence(mut self, sequence: &str) -> Strand {
        self.sequence = Some(sequence.to_string());
        self
    }

    pub fn scaffold(mut self) -> Strand {
        self.is_scaffold = true;
        self
    }

    /// Total number of DNA bases: bound-domain bases plus loopout lengths.
    pub fn dna_length(&self) -> usize {
        self.domains.iter().map(Domain::dna_length).sum()
    }

    pub fn bound_domains(&self) -> impl Iterator<Item = &BoundDomain> {
        self.domains.iter().filter_map(Domain::as_bound)
    }

    /// First domain, which is a bound domain in any valid strand.
    pub fn first_bound(&self) -> Option<&BoundDomain> {
        self.domains.first().and_then(Domain::as_bound)
    }

    /// Last domain, which is a bound domain in any valid strand.
    pub fn last_bound(&self) -> Option<&BoundDomain> {
        self.domains.last().and_then(Domain::as_bound)
    }
}

/// Root document: one lattice, its helices, and the strands laid onto them.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    pub grid: Grid,
    pub helices: Vec<Helix>,
    pub strands: Vec<Strand>,
    /// Modification table keyed by id (conventionally the IDT code).
    pub modifications: BTreeMap<String, Modification>,
    /// Display order of helices as a permutation of their `idx` values.
    pub helices_view_order: Option<Vec<usize>>,
    pub extra_fields: ExtraFields,
}

impl Design {
    pub fn new(grid: Grid) -> Design {
        Design {
            grid,
            helices: Vec::new(),
            strands: Vec::new(),
            modifications: BTreeMap::new(),
            helices_view_order: None,
            extra_fields: ExtraFields::new(),
        }
    }

    pub fn with_helices(mut self, helices: Vec<Helix>) -> Design {
        self.helices = helices;
        self
    }

    pub fn with_strands(mut self, strands: Vec<Strand>) -> Design {
        self.strands = strands;
        self
    }

    pub fn helix(&self, idx: usize) -> Option<&Helix> {
        self.helices.iter().find(|h| h.idx == idx)
    }

    /// Resolved display color of strand `index`: the explicit color when set,
    /// otherwise the scaffold color or the palette entry for that index.
    pub fn strand_color(&self, index: usize) -> Color {
        match self.strands.get(index).and_then(|s| s.color) {
            Some(c) => c,
            None => {
                let is_scaffold = self
                    .strands
                    .get(index)
                    .map(|s| s.is_scaffold)
                    .unwrap_or(false);
                Color::default_for_strand(index, is_scaffold)
            }
        }
    }

    /// Helix idx values in display order: `helices_view_order` when present,
    /// ascending idx otherwise.
    pub fn view_order(&self) -> Vec<usize> {
        match &self.helices_view_order {
            Some(order) => order.clone(),
            None => {
                let mut idxs: Vec<usize> = self.helices.iter().map(|h| h.idx).collect();
                idxs.sort_unstable();
                idxs
            }
        }
    }

    /// Indices of scaffold strands.
    pub fn scaffold_indices(&self) -> Vec<usize> {
        self.strands
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_scaffold)
            .map(|(i, _)| i)
            .collect()
    }
}
