//! Lattice coordinates, main-view layout, and backbone rotation angles.
//!
//! All angles are degrees in `[0, 360)`, measured from straight up in the
//! side view and increasing clockwise (screen coordinates, `y` down). The
//! same convention is used for the roll field, for backbone angles, and for
//! azimuths between helix centers, so the three are directly comparable.

use thiserror::Error;

use crate::model::{Design, Grid, Helix, Position3D};

/// Physical constants of the helix layout. All lengths in nanometers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryParams {
    /// Center-to-center distance of lattice-adjacent helices.
    pub helix_spacing: f64,
    /// Bases per full backbone turn.
    pub bases_per_turn: f64,
    /// Angle from the forward backbone to the reverse backbone across the
    /// minor groove.
    pub minor_groove_offset: f64,
}

impl Default for GeometryParams {
    fn default() -> Self {
        GeometryParams {
            helix_spacing: 2.5,
            bases_per_turn: 10.5,
            minor_groove_offset: 150.0,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("helix {0} does not exist")]
    HelixNotFound(usize),
    #[error("offset {offset} outside helix window [{min}, {max})")]
    OffsetOutOfWindow { offset: i64, min: i64, max: i64 },
    #[error("gridless designs have no lattice coordinates")]
    GridlessLattice,
    #[error("helix centers coincide; azimuth is undefined")]
    DegenerateAzimuth,
    #[error("helix {0} has no placement")]
    UnplacedHelix(usize),
}

/// Maps integer lattice coordinates to a side-view position with `z = 0`.
///
/// Square: `(x, y) = spacing · (gx, gy)`. Hex uses offset rows (odd rows
/// shifted half a cell) so each site has 6 neighbors at exactly
/// `helix_spacing`. Honeycomb staggers sites by the parity of `gx + gy`,
/// matching the cadnano construction, so each site has 3 neighbors at
/// exactly `helix_spacing`.
pub fn grid_to_position(
    grid: Grid,
    grid_position: (i64, i64),
    params: &GeometryParams,
) -> Result<Position3D, GeometryError> {
    let s = params.helix_spacing;
    let (gx, gy) = (grid_position.0 as f64, grid_position.1 as f64);
    let sqrt3 = 3.0_f64.sqrt();
    match grid {
        Grid::Square => Ok(Position3D::new(s * gx, s * gy, 0.0)),
        Grid::Hex => {
            let row_shift = 0.5 * (grid_position.1.rem_euclid(2)) as f64;
            Ok(Position3D::new(
                s * (gx + row_shift),
                s * (sqrt3 / 2.0) * gy,
                0.0,
            ))
        }
        Grid::Honeycomb => {
            let stagger = ((grid_position.0 + grid_position.1).rem_euclid(2)) as f64;
            Ok(Position3D::new(
                s * (sqrt3 / 2.0) * gx,
                s * (1.5 * gy + 0.5 * stagger),
                0.0,
            ))
        }
        Grid::None => Err(GeometryError::GridlessLattice),
    }
}

/// Lattice coordinates adjacent to `at`, i.e. sites whose centers lie exactly
/// `helix_spacing` away: 4 for square, 6 for hex, 3 for honeycomb.
pub fn lattice_neighbors(grid: Grid, at: (i64, i64)) -> Vec<(i64, i64)> {
    let (gx, gy) = at;
    match grid {
        Grid::Square => vec![(gx + 1, gy), (gx - 1, gy), (gx, gy + 1), (gx, gy - 1)],
        Grid::Hex => {
            // Offset rows: the diagonal pair depends on row parity.
            let shift = if gy.rem_euclid(2) == 0 { -1 } else { 1 };
            vec![
                (gx + 1, gy),
                (gx - 1, gy),
                (gx, gy + 1),
                (gx, gy - 1),
                (gx + shift, gy + 1),
                (gx + shift, gy - 1),
            ]
        }
        Grid::Honeycomb => {
            // Vertical neighbor is below for even-parity sites, above for odd.
            let vertical = if (gx + gy).rem_euclid(2) == 0 {
                (gx, gy - 1)
            } else {
                (gx, gy + 1)
            };
            vec![(gx + 1, gy), (gx - 1, gy), vertical]
        }
        Grid::None => Vec::new(),
    }
}

/// 3D center of a helix: lattice position for grid designs, the explicit
/// position for gridless ones.
pub fn helix_center(
    design: &Design,
    helix: &Helix,
    params: &GeometryParams,
) -> Result<Position3D, GeometryError> {
    match design.grid {
        Grid::None => helix
            .position
            .ok_or(GeometryError::UnplacedHelix(helix.idx)),
        grid => {
            let gp = helix
                .grid_position
                .ok_or(GeometryError::UnplacedHelix(helix.idx))?;
            grid_to_position(grid, gp, params)
        }
    }
}

/// Vertical main-view coordinate for each helix, in display order.
///
/// The first displayed helix sits at 0; each next helix is placed below the
/// previous by the 3D distance between their centers, so lattice gaps show up
/// as proportionally larger spacing. Expects a valid design.
pub fn main_view_layout(design: &Design, params: &GeometryParams) -> Vec<(usize, f64)> {
    let mut out = Vec::with_capacity(design.helices.len());
    let mut previous: Option<Position3D> = None;
    let mut coord = 0.0;
    for idx in design.view_order() {
        let Some(helix) = design.helix(idx) else {
            continue;
        };
        let center = helix_center(design, helix, params).unwrap_or_default();
        if let Some(prev) = previous {
            coord += prev.distance(&center);
        }
        out.push((idx, coord));
        previous = Some(center);
    }
    out
}

fn normalize_degrees(angle: f64) -> f64 {
    angle.rem_euclid(360.0)
}

/// Backbone rotation at one offset of a helix, degrees in `[0, 360)`.
///
/// The forward backbone points at `roll` at `min_offset` and advances
/// `360 / bases_per_turn` clockwise per offset; the reverse backbone trails
/// it by the minor-groove angle.
pub fn backbone_angle(
    helix: &Helix,
    offset: i64,
    forward: bool,
    params: &GeometryParams,
) -> Result<f64, GeometryError> {
    let max = helix.max_offset.unwrap_or(i64::MIN);
    if offset < helix.min_offset || offset >= max {
        return Err(GeometryError::OffsetOutOfWindow {
            offset,
            min: helix.min_offset,
            max,
        });
    }
    let turns = (offset - helix.min_offset) as f64 / params.bases_per_turn;
    let fwd = helix.roll + 360.0 * turns;
    if forward {
        Ok(normalize_degrees(fwd))
    } else {
        Ok(normalize_degrees(fwd + params.minor_groove_offset))
    }
}

/// Azimuth of the direction `from → to` in the side-view plane: 0° up,
/// clockwise, degrees in `[0, 360)`.
pub fn azimuth(from: &Position3D, to: &Position3D) -> Result<f64, GeometryError> {
    let dx = to.x - from.x;
    let dy = to.y - from.y;
    if dx == 0.0 && dy == 0.0 {
        return Err(GeometryError::DegenerateAzimuth);
    }
    // Screen coordinates: up is -y, and clockwise from up heads toward +x.
    Ok(normalize_degrees(dx.atan2(-dy).to_degrees()))
}

/// Signed angular difference in `(-180, 180]` between the backbone at
/// `(helix_from, offset, forward)` and the azimuth toward `helix_to`'s
/// center. Zero means the backbone points straight at the other helix.
pub fn backbone_misalignment(
    design: &Design,
    helix_from: usize,
    offset: i64,
    forward: bool,
    helix_to: usize,
    params: &GeometryParams,
) -> Result<f64, GeometryError> {
    let from = design
        .helix(helix_from)
        .ok_or(GeometryError::HelixNotFound(helix_from))?;
    let to = design
        .helix(helix_to)
        .ok_or(GeometryError::HelixNotFound(helix_to))?;
    let angle = backbone_angle(from, offset, forward, params)?;
    let target = azimuth(
        &helix_center(design, from, params)?,
        &helix_center(design, to, params)?,
    )?;
    let mut diff = normalize_degrees(angle - target);
    if diff > 180.0 {
        diff -= 360.0;
    }
    Ok(diff)
}

/// Roll value for `helix_b` that aligns its crossover-side backbone with the
/// crossover to `helix_a`.
///
/// A crossover at `offset_a` joins the strand on `(helix_a, forward_a)` to
/// the antiparallel strand on `helix_b`. The returned roll makes the
/// backbone at `(helix_b, offset_a, !forward_a)` point exactly at
/// `helix_a`'s center. Only `helix_b`'s roll is computed; `helix_a` is left
/// alone.
pub fn unstrain_roll_at_crossover(
    design: &Design,
    helix_a: usize,
    offset_a: i64,
    forward_a: bool,
    helix_b: usize,
    params: &GeometryParams,
) -> Result<f64, GeometryError> {
    let a = design
        .helix(helix_a)
        .ok_or(GeometryError::HelixNotFound(helix_a))?;
    let b = design
        .helix(helix_b)
        .ok_or(GeometryError::HelixNotFound(helix_b))?;
    let max = b.max_offset.unwrap_or(i64::MIN);
    if offset_a < b.min_offset || offset_a >= max {
        return Err(GeometryError::OffsetOutOfWindow {
            offset: offset_a,
            min: b.min_offset,
            max,
        });
    }
    let target = azimuth(
        &helix_center(design, b, params)?,
        &helix_center(design, a, params)?,
    )?;
    let turns = (offset_a - b.min_offset) as f64 / params.bases_per_turn;
    // Solve backbone_angle(b, offset_a, reverse side of the partner) == target
    // for roll. The partner strand runs opposite to forward_a; when that
    // partner is the reverse strand the minor-groove offset applies.
    let groove = if !forward_a {
        0.0
    } else {
        params.minor_groove_offset
    };
    Ok(normalize_degrees(target - 360.0 * turns - groove))
}
