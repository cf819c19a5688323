//! Reading and writing the `.sc` JSON design format.
//!
//! The codec is conservative in both directions: unrecognized keys at the
//! design, helix, strand, domain, and modification levels are captured into
//! `extra_fields` on parse and re-emitted verbatim on serialize, so editing a
//! file written by another tool preserves that tool's data. Recognized keys
//! with the wrong JSON type are reported as schema errors rather than
//! silently dropped.
//!
//! Parsing does not validate: a structurally well-formed document parses even
//! if it breaks design rules. Serialization refuses invalid designs.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::model::{
    BoundDomain, Color, Design, Domain, ExtraFields, Grid, Helix, Insertion, Loopout, Modification,
    ModificationLocation, Position3D, Strand,
};
use crate::validate::ValidationReport;

/// Parsed JSON tree of a document, with key order and unknown keys retained.
/// Useful for inspecting files without interpreting them.
#[derive(Debug, Clone, PartialEq)]
pub struct RawDocument(pub Value);

impl RawDocument {
    pub fn parse(text: &str) -> Result<RawDocument, CodecError> {
        Ok(RawDocument(parse_json(text)?))
    }

    pub fn to_json_text(&self) -> String {
        serde_json::to_string_pretty(&self.0).expect("JSON value always serializes")
    }

    /// Key-order-insensitive equality of the underlying JSON trees.
    pub fn semantically_equals(&self, other: &RawDocument) -> bool {
        json_semantic_eq(&self.0, &other.0)
    }
}

/// Compares JSON values ignoring object key order.
pub fn json_semantic_eq(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Object(ma), Value::Object(mb)) => {
            ma.len() == mb.len()
                && ma
                    .iter()
                    .all(|(k, va)| mb.get(k).is_some_and(|vb| json_semantic_eq(va, vb)))
        }
        (Value::Array(va), Value::Array(vb)) => {
            va.len() == vb.len() && va.iter().zip(vb).all(|(x, y)| json_semantic_eq(x, y))
        }
        _ => a == b,
    }
}

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("design is invalid:\n{0}")]
    Invalid(ValidationReport),
}

impl CodecError {
    fn schema(path: &str, message: impl Into<String>) -> CodecError {
        CodecError::Schema {
            path: path.to_string(),
            message: message.into(),
        }
    }
}

fn parse_json(text: &str) -> Result<Value, CodecError> {
    serde_json::from_str(text).map_err(|e| CodecError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

// ---------------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------------

/// Parses `.sc` JSON text into a [`Design`].
///
/// Missing optional fields take their defaults (helix idx from list position,
/// min_offset 0, colors from the palette). Validation is not run; call
/// [`Design::validate`] separately.
pub fn parse_design(text: &str) -> Result<Design, CodecError> {
    let value = parse_json(text)?;
    design_from_value(&value)
}

/// Interprets an already-parsed JSON tree as a design.
pub fn design_from_value(value: &Value) -> Result<Design, CodecError> {
    let root = as_object(value, "")?;
    let mut design = Design::new(Grid::None);
    design.grid = match root.get("grid") {
        Some(v) => {
            let s = as_str(v, "grid")?;
            Grid::from_name(s)
                .ok_or_else(|| CodecError::schema("grid", format!("unknown grid type {s:?}")))?
        }
        None => return Err(CodecError::schema("grid", "missing required key")),
    };

    if let Some(v) = root.get("helices") {
        let arr = as_array(v, "helices")?;
        for (i, hv) in arr.iter().enumerate() {
            design.helices.push(helix_from_value(hv, i)?);
        }
    }

    if let Some(v) = root.get("modifications_in_design") {
        let obj = as_object(v, "modifications_in_design")?;
        for (id, mv) in obj {
            let path = format!("modifications_in_design[{id:?}]");
            design
                .modifications
                .insert(id.clone(), modification_from_value(mv, &path)?);
        }
    }

    if let Some(v) = root.get("strands") {
        let arr = as_array(v, "strands")?;
        for (i, sv) in arr.iter().enumerate() {
            design.strands.push(strand_from_value(sv, i)?);
        }
    }

    if let Some(v) = root.get("helices_view_order") {
        let arr = as_array(v, "helices_view_order")?;
        let mut order = Vec::with_capacity(arr.len());
        for (i, ov) in arr.iter().enumerate() {
            order.push(as_usize(ov, &format!("helices_view_order[{i}]"))?);
        }
        design.helices_view_order = Some(order);
    }

    const KNOWN: [&str; 5] = [
        "grid",
        "helices",
        "strands",
        "modifications_in_design",
        "helices_view_order",
    ];
    design.extra_fields = collect_extras(root, &KNOWN);
    Ok(design)
}

fn helix_from_value(value: &Value, position_in_list: usize) -> Result<Helix, CodecError> {
    let path = format!("helices[{position_in_list}]");
    let obj = as_object(value, &path)?;
    let mut helix = Helix::new(0, 0);
    helix.max_offset = None;
    helix.idx = match obj.get("idx") {
        Some(v) => as_usize(v, &format!("{path}.idx"))?,
        None => position_in_list,
    };
    if let Some(v) = obj.get("min_offset") {
        helix.min_offset = as_i64(v, &format!("{path}.min_offset"))?;
    }
    if let Some(v) = obj.get("max_offset") {
        helix.max_offset = Some(as_i64(v, &format!("{path}.max_offset"))?);
    }
    if let Some(v) = obj.get("grid_position") {
        let gp_path = format!("{path}.grid_position");
        let arr = as_array(v, &gp_path)?;
        if arr.len() != 2 {
            return Err(CodecError::schema(&gp_path, "expected a pair of integers"));
        }
        helix.grid_position = Some((as_i64(&arr[0], &gp_path)?, as_i64(&arr[1], &gp_path)?));
    }
    if let Some(v) = obj.get("position") {
        helix.position = Some(position_from_value(v, &format!("{path}.position"))?);
    }
    for (key, slot) in [
        ("pitch", &mut helix.pitch),
        ("roll", &mut helix.roll),
        ("yaw", &mut helix.yaw),
    ] {
        if let Some(v) = obj.get(key) {
            *slot = as_f64(v, &format!("{path}.{key}"))?;
        }
    }
    if let Some(v) = obj.get("major_tick_marks") {
        let mt_path = format!("{path}.major_tick_marks");
        let arr = as_array(v, &mt_path)?;
        let mut marks = Vec::with_capacity(arr.len());
        for mv in arr {
            marks.push(as_i64(mv, &mt_path)?);
        }
        helix.major_tick_marks = Some(marks);
    }
    if let Some(v) = obj.get("major_tick_distance") {
        helix.major_tick_distance = Some(as_i64(v, &format!("{path}.major_tick_distance"))?);
    }
    const KNOWN: [&str; 10] = [
        "idx",
        "min_offset",
        "max_offset",
        "grid_position",
        "position",
        "pitch",
        "roll",
        "yaw",
        "major_tick_marks",
        "major_tick_distance",
    ];
    helix.extra_fields = collect_extras(obj, &KNOWN);
    Ok(helix)
}

fn position_from_value(value: &Value, path: &str) -> Result<Position3D, CodecError> {
    // Object form {"x":..,"y":..,"z":..} is canonical; a 3-array is accepted.
    match value {
        Value::Object(obj) => {
            let mut pos = Position3D::default();
            for (key, slot) in [("x", &mut pos.x), ("y", &mut pos.y), ("z", &mut pos.z)] {
                match obj.get(key) {
                    Some(v) => *slot = as_f64(v, &format!("{path}.{key}"))?,
                    None => return Err(CodecError::schema(path, format!("missing {key:?}"))),
                }
            }
            Ok(pos)
        }
        Value::Array(arr) if arr.len() == 3 => Ok(Position3D::new(
            as_f64(&arr[0], path)?,
            as_f64(&arr[1], path)?,
            as_f64(&arr[2], path)?,
        )),
        _ => Err(CodecError::schema(
            path,
            "expected an {x, y, z} object or a 3-element array",
        )),
    }
}

fn modification_from_value(value: &Value, path: &str) -> Result<Modification, CodecError> {
    let obj = as_object(value, path)?;
    let display_text = match obj.get("display_text") {
        Some(v) => as_str(v, &format!("{path}.display_text"))?.to_string(),
        None => return Err(CodecError::schema(path, "missing \"display_text\"")),
    };
    let idt_text = match obj.get("idt_text") {
        Some(v) => as_str(v, &format!("{path}.idt_text"))?.to_string(),
        None => return Err(CodecError::schema(path, "missing \"idt_text\"")),
    };
    let location = match obj.get("location") {
        Some(v) => {
            let s = as_str(v, &format!("{path}.location"))?;
            ModificationLocation::from_name(s).ok_or_else(|| {
                CodecError::schema(
                    &format!("{path}.location"),
                    format!("expected \"5'\", \"3'\", or \"internal\", got {s:?}"),
                )
            })?
        }
        None => return Err(CodecError::schema(path, "missing \"location\"")),
    };
    let mut m = Modification::new(&display_text, &idt_text, location);
    const KNOWN: [&str; 3] = ["display_text", "idt_text", "location"];
    m.extra_fields = collect_extras(obj, &KNOWN);
    Ok(m)
}

fn strand_from_value(value: &Value, index: usize) -> Result<Strand, CodecError> {
    let path = format!("strands[{index}]");
    let obj = as_object(value, &path)?;
    let mut domains = Vec::new();
    match obj.get("domains") {
        Some(v) => {
            let arr = as_array(v, &format!("{path}.domains"))?;
            for (k, dv) in arr.iter().enumerate() {
                domains.push(domain_from_value(dv, &format!("{path}.domains[{k}]"))?);
            }
        }
        None => return Err(CodecError::schema(&path, "missing \"domains\"")),
    }
    let mut strand = Strand::new(domains);
    if let Some(v) = obj.get("color") {
        let cpath = format!("{path}.color");
        let text = as_str(v, &cpath)?;
        strand.color = Some(Color::from_hex(text).ok_or_else(|| {
            CodecError::schema(
                &cpath,
                format!("malformed color {text:?}, expected #rrggbb"),
            )
        })?);
    }
    if let Some(v) = obj.get("is_scaffold") {
        strand.is_scaffold = as_bool(v, &format!("{path}.is_scaffold"))?;
    }
    if let Some(v) = obj.get("sequence") {
        strand.sequence = Some(as_str(v, &format!("{path}.sequence"))?.to_string());
    }
    if let Some(v) = obj.get("5prime_modification") {
        strand.modification_5p =
            Some(as_str(v, &format!("{path}.5prime_modification"))?.to_string());
    }
    if let Some(v) = obj.get("3prime_modification") {
        strand.modification_3p =
            Some(as_str(v, &format!("{path}.3prime_modification"))?.to_string());
    }
    if let Some(v) = obj.get("internal_modifications") {
        let im_path = format!("{path}.internal_modifications");
        let map = as_object(v, &im_path)?;
        let mut internal = BTreeMap::new();
        for (key, idv) in map {
            let base_index: usize = key.parse().map_err(|_| {
                CodecError::schema(&im_path, format!("key {key:?} is not a base index"))
            })?;
            internal.insert(base_index, as_str(idv, &im_path)?.to_string());
        }
        strand.modifications_internal = internal;
    }
    const KNOWN: [&str; 7] = [
        "domains",
        "color",
        "is_scaffold",
        "sequence",
        "5prime_modification",
        "3prime_modification",
        "internal_modifications",
    ];
    strand.extra_fields = collect_extras(obj, &KNOWN);
    Ok(strand)
}

fn domain_from_value(value: &Value, path: &str) -> Result<Domain, CodecError> {
    let obj = as_object(value, path)?;
    if let Some(v) = obj.get("loopout") {
        let length = as_usize(v, &format!("{path}.loopout"))?;
        let mut loopout = Loopout::new(length);
        loopout.extra_fields = collect_extras(obj, &["loopout"]);
        return Ok(Domain::Loopout(loopout));
    }
    let mut bound = BoundDomain::new(0, true, 0, 0);
    for (key, slot) in [("helix", &mut bound.helix)] {
        match obj.get(key) {
            Some(v) => *slot = as_usize(v, &format!("{path}.{key}"))?,
            None => return Err(CodecError::schema(path, format!("missing {key:?}"))),
        }
    }
    bound.forward = match obj.get("forward") {
        Some(v) => as_bool(v, &format!("{path}.forward"))?,
        None => return Err(CodecError::schema(path, "missing \"forward\"")),
    };
    for (key, slot) in [("start", &mut bound.start), ("end", &mut bound.end)] {
        match obj.get(key) {
            Some(v) => *slot = as_i64(v, &format!("{path}.{key}"))?,
            None => return Err(CodecError::schema(path, format!("missing {key:?}"))),
        }
    }
    if let Some(v) = obj.get("deletions") {
        let dpath = format!("{path}.deletions");
        let arr = as_array(v, &dpath)?;
        for dv in arr {
            bound.deletions.push(as_i64(dv, &dpath)?);
        }
    }
    if let Some(v) = obj.get("insertions") {
        let ipath = format!("{path}.insertions");
        let arr = as_array(v, &ipath)?;
        for iv in arr {
            let pair = as_array(iv, &ipath)?;
            if pair.len() != 2 {
                return Err(CodecError::schema(
                    &ipath,
                    "expected [offset, length] pairs",
                ));
            }
            bound.insertions.push(Insertion::new(
                as_i64(&pair[0], &ipath)?,
                as_usize(&pair[1], &ipath)?,
            ));
        }
    }
    const KNOWN: [&str; 6] = [
        "helix",
        "forward",
        "start",
        "end",
        "deletions",
        "insertions",
    ];
    bound.extra_fields = collect_extras(obj, &KNOWN);
    Ok(Domain::Bound(bound))
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

/// Serializes a design to `.sc` JSON text.
///
/// The design must be valid; an invalid design is refused with its
/// validation report. Key order and whitespace are not part of the format
/// contract, but output is deterministic for a given design.
pub fn serialize_design(design: &Design) -> Result<String, CodecError> {
    let value = design_to_value(design)?;
    Ok(serde_json::to_string_pretty(&value).expect("JSON value always serializes"))
}

/// Builds the JSON tree for a valid design.
pub fn design_to_value(design: &Design) -> Result<Value, CodecError> {
    let report = design.validate();
    if !report.is_valid() {
        return Err(CodecError::Invalid(report));
    }
    let mut root = Map::new();
    root.insert("grid".into(), json!(design.grid.as_str()));
    root.insert(
        "helices".into(),
        Value::Array(
            design
                .helices
                .iter()
                .enumerate()
                .map(helix_to_value)
                .collect(),
        ),
    );
    if !design.modifications.is_empty() {
        let mut mods = Map::new();
        for (id, m) in &design.modifications {
            mods.insert(id.clone(), modification_to_value(m));
        }
        root.insert("modifications_in_design".into(), Value::Object(mods));
    }
    root.insert(
        "strands".into(),
        Value::Array(
            design
                .strands
                .iter()
                .enumerate()
                .map(|(i, s)| strand_to_value(s, design.strand_color(i)))
                .collect(),
        ),
    );
    if let Some(order) = &design.helices_view_order {
        root.insert("helices_view_order".into(), json!(order));
    }
    for (k, v) in &design.extra_fields {
        root.insert(k.clone(), v.clone());
    }
    Ok(Value::Object(root))
}

fn helix_to_value((position_in_list, helix): (usize, &Helix)) -> Value {
    let mut obj = Map::new();
    if helix.idx != position_in_list {
        obj.insert("idx".into(), json!(helix.idx));
    }
    if helix.min_offset != 0 {
        obj.insert("min_offset".into(), json!(helix.min_offset));
    }
    if let Some(max) = helix.max_offset {
        obj.insert("max_offset".into(), json!(max));
    }
    if let Some((gx, gy)) = helix.grid_position {
        obj.insert("grid_position".into(), json!([gx, gy]));
    }
    if let Some(pos) = helix.position {
        obj.insert(
            "position".into(),
            json!({"x": pos.x, "y": pos.y, "z": pos.z}),
        );
    }
    for (key, val) in [
        ("pitch", helix.pitch),
        ("roll", helix.roll),
        ("yaw", helix.yaw),
    ] {
        if val != 0.0 {
            obj.insert(key.into(), json!(val));
        }
    }
    if let Some(marks) = &helix.major_tick_marks {
        obj.insert("major_tick_marks".into(), json!(marks));
    }
    if let Some(dist) = helix.major_tick_distance {
        obj.insert("major_tick_distance".into(), json!(dist));
    }
    for (k, v) in &helix.extra_fields {
        obj.insert(k.clone(), v.clone());
    }
    Value::Object(obj)
}

fn modification_to_value(m: &Modification) -> Value {
    let mut obj = Map::new();
    obj.insert("display_text".into(), json!(m.display_text));
    obj.insert("idt_text".into(), json!(m.idt_text));
    obj.insert("location".into(), json!(m.location.as_str()));
    for (k, v) in &m.extra_fields {
        obj.insert(k.clone(), v.clone());
    }
    Value::Object(obj)
}

fn strand_to_value(strand: &Strand, resolved_color: Color) -> Value {
    let mut obj = Map::new();
    obj.insert("color".into(), json!(resolved_color.to_hex()));
    if let Some(seq) = &strand.sequence {
        obj.insert("sequence".into(), json!(seq));
    }
    obj.insert(
        "domains".into(),
        Value::Array(strand.domains.iter().map(domain_to_value).collect()),
    );
    if strand.is_scaffold {
        obj.insert("is_scaffold".into(), json!(true));
    }
    if let Some(id) = &strand.modification_5p {
        obj.insert("5prime_modification".into(), json!(id));
    }
    if let Some(id) = &strand.modification_3p {
        obj.insert("3prime_modification".into(), json!(id));
    }
    if !strand.modifications_internal.is_empty() {
        let mut map = Map::new();
        for (base_index, id) in &strand.modifications_internal {
            map.insert(base_index.to_string(), json!(id));
        }
        obj.insert("internal_modifications".into(), Value::Object(map));
    }
    for (k, v) in &strand.extra_fields {
        obj.insert(k.clone(), v.clone());
    }
    Value::Object(obj)
}

fn domain_to_value(domain: &Domain) -> Value {
    match domain {
        Domain::Loopout(l) => {
            let mut obj = Map::new();
            obj.insert("loopout".into(), json!(l.length));
            for (k, v) in &l.extra_fields {
                obj.insert(k.clone(), v.clone());
            }
            Value::Object(obj)
        }
        Domain::Bound(b) => {
            let mut obj = Map::new();
            obj.insert("helix".into(), json!(b.helix));
            obj.insert("forward".into(), json!(b.forward));
            obj.insert("start".into(), json!(b.start));
            obj.insert("end".into(), json!(b.end));
            if !b.deletions.is_empty() {
                obj.insert("deletions".into(), json!(b.deletions));
            }
            if !b.insertions.is_empty() {
                let pairs: Vec<Value> = b
                    .insertions
                    .iter()
                    .map(|i| json!([i.offset, i.length]))
                    .collect();
                obj.insert("insertions".into(), Value::Array(pairs));
            }
            for (k, v) in &b.extra_fields {
                obj.insert(k.clone(), v.clone());
            }
            Value::Object(obj)
        }
    }
}

// ---------------------------------------------------------------------------
// JSON access helpers with path-carrying errors
// ---------------------------------------------------------------------------

fn as_object<'v>(value: &'v Value, path: &str) -> Result<&'v Map<String, Value>, CodecError> {
    value.as_object().ok_or_else(|| {
        let where_ = if path.is_empty() {
            "document root"
        } else {
            path
        };
        CodecError::schema(where_, "expected a JSON object")
    })
}

fn as_array<'v>(value: &'v Value, path: &str) -> Result<&'v Vec<Value>, CodecError> {
    value
        .as_array()
        .ok_or_else(|| CodecError::schema(path, "expected a JSON array"))
}

fn as_str<'v>(value: &'v Value, path: &str) -> Result<&'v str, CodecError> {
    value
        .as_str()
        .ok_or_else(|| CodecError::schema(path, "expected a string"))
}

fn as_bool(value: &Value, path: &str) -> Result<bool, CodecError> {
    value
        .as_bool()
        .ok_or_else(|| CodecError::schema(path, "expected a boolean"))
}

fn as_i64(value: &Value, path: &str) -> Result<i64, CodecError> {
    value
        .as_i64()
        .ok_or_else(|| CodecError::schema(path, "expected an integer"))
}

fn as_usize(value: &Value, path: &str) -> Result<usize, CodecError> {
    value
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| CodecError::schema(path, "expected a nonnegative integer"))
}

fn as_f64(value: &Value, path: &str) -> Result<f64, CodecError> {
    value
        .as_f64()
        .ok_or_else(|| CodecError::schema(path, "expected a number"))
}

fn collect_extras(obj: &Map<String, Value>, known: &[&str]) -> ExtraFields {
    let mut extras = ExtraFields::new();
    for (k, v) in obj {
        if !known.contains(&k.as_str()) {
            extras.insert(k.clone(), v.clone());
        }
    }
    extras
}
