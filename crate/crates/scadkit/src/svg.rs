//! SVG rendering of the main view (strands on helices) and the side view
//! (helix cross-sections).
//!
//! The output is plain SVG 1.1 with stable element classes, one class per
//! glyph kind, so figures are scriptable and testable:
//!
//! * `polygon.arrowhead` — one per strand, at its 3' end.
//! * `path.deletion` — one per domain that carries deletions, with an X
//!   subpath at every deleted offset.
//! * `path.insertion` — one per domain that carries insertions, with a caret
//!   subpath at every insertion offset (plus a count label).
//! * `path.loopout` — one arc per loopout.
//!
//! Strands are emitted in design order, so later strands paint over earlier
//! ones. Rendering is deterministic.

use std::fmt::Write as _;

use crate::geometry::{self, GeometryParams};
use crate::model::{Design, Domain, Grid};

/// Which projection to draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum View {
    /// Helices as horizontal double tracks, offsets increasing rightward.
    Main,
    /// Helix cross-sections in the lattice plane.
    Side,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    pub view: View,
    /// Pixels per offset in the main view; also pixels per nanometer.
    pub base_width_px: f64,
    /// Draw base letters along each bound domain.
    pub show_sequences: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            view: View::Main,
            base_width_px: 10.0,
            show_sequences: false,
        }
    }
}

const MARGIN: f64 = 20.0;

fn xml_escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Renders a valid design to SVG text.
pub fn render_svg(design: &Design, options: &RenderOptions) -> String {
    match options.view {
        View::Main => render_main_view(design, options),
        View::Side => render_side_view(design, options),
    }
}

struct MainLayout {
    base_width: f64,
    min_offset: i64,
    helix_y: Vec<(usize, f64)>,
}

impl MainLayout {
    fn x(&self, offset: i64) -> f64 {
        MARGIN + (offset - self.min_offset) as f64 * self.base_width
    }

    fn y(&self, helix: usize) -> f64 {
        self.helix_y
            .iter()
            .find(|(idx, _)| *idx == helix)
            .map(|&(_, y)| y)
            .unwrap_or(MARGIN)
    }

    /// Vertical center of the forward (top) or reverse (bottom) line of a
    /// helix track.
    fn track_y(&self, helix: usize, forward: bool) -> f64 {
        let half = self.base_width / 4.0;
        if forward {
            self.y(helix) - half
        } else {
            self.y(helix) + half
        }
    }
}

fn render_main_view(design: &Design, options: &RenderOptions) -> String {
    let bw = options.base_width_px;
    let params = GeometryParams::default();
    let layout = MainLayout {
        base_width: bw,
        min_offset: design
            .helices
            .iter()
            .map(|h| h.min_offset)
            .min()
            .unwrap_or(0),
        helix_y: geometry::main_view_layout(design, &params)
            .into_iter()
            .map(|(idx, nm)| (idx, MARGIN + nm * bw + bw))
            .collect(),
    };
    let max_offset = design
        .helices
        .iter()
        .filter_map(|h| h.max_offset)
        .max()
        .unwrap_or(layout.min_offset);
    let width = layout.x(max_offset) + MARGIN;
    let height = layout
        .helix_y
        .iter()
        .map(|&(_, y)| y)
        .fold(MARGIN, f64::max)
        + bw
        + MARGIN;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{width}\" height=\"{height}\">"
    );

    for helix in &design.helices {
        let y = layout.y(helix.idx);
        let top = y - bw / 2.0;
        let bottom = y + bw / 2.0;
        for tick in helix.effective_major_ticks() {
            let x = layout.x(tick);
            let _ = writeln!(
                svg,
                "  <line class=\"major-tick\" x1=\"{x}\" y1=\"{top}\" x2=\"{x}\" \
                 y2=\"{bottom}\" stroke=\"#cccccc\"/>"
            );
        }
        let label_x = layout.x(helix.min_offset) - bw;
        let _ = writeln!(
            svg,
            "  <text class=\"helix-label\" x=\"{label_x}\" y=\"{y}\" \
             text-anchor=\"end\">{}</text>",
            helix.idx
        );
    }

    for (si, strand) in design.strands.iter().enumerate() {
        let color = design.strand_color(si).to_hex();
        let _ = writeln!(svg, "  <g class=\"strand\" data-strand=\"{si}\">");
        // Domain lines and crossover connectors.
        for (k, domain) in strand.domains.iter().enumerate() {
            match domain {
                Domain::Bound(b) => {
                    let y = layout.track_y(b.helix, b.forward);
                    let x1 = layout.x(b.start);
                    let x2 = layout.x(b.end);
                    let _ = writeln!(
                        svg,
                        "    <line class=\"domain\" x1=\"{x1}\" y1=\"{y}\" x2=\"{x2}\" \
                         y2=\"{y}\" stroke=\"{color}\" stroke-width=\"2\"/>"
                    );
                    if !b.deletions.is_empty() {
                        let mut d = String::new();
                        for &offset in &b.deletions {
                            let cx = layout.x(offset) + bw / 2.0;
                            let r = bw / 4.0;
                            let _ = write!(
                                d,
                                "M {} {} L {} {} M {} {} L {} {} ",
                                cx - r,
                                y - r,
                                cx + r,
                                y + r,
                                cx + r,
                                y - r,
                                cx - r,
                                y + r
                            );
                        }
                        let _ = writeln!(
                            svg,
                            "    <path class=\"deletion\" d=\"{}\" stroke=\"#cc0000\" \
                             fill=\"none\"/>",
                            d.trim_end()
                        );
                    }
                    if !b.insertions.is_empty() {
                        let mut d = String::new();
                        for ins in &b.insertions {
                            let cx = layout.x(ins.offset) + bw / 2.0;
                            let r = bw / 4.0;
                            let up = if b.forward { -1.0 } else { 1.0 };
                            let _ = write!(
                                d,
                                "M {} {} L {} {} L {} {} ",
                                cx - r,
                                y,
                                cx,
                                y + up * bw / 2.0,
                                cx + r,
                                y
                            );
                        }
                        let _ = writeln!(
                            svg,
                            "    <path class=\"insertion\" d=\"{}\" stroke=\"{color}\" \
                             fill=\"none\"/>",
                            d.trim_end()
                        );
                        for ins in &b.insertions {
                            let cx = layout.x(ins.offset) + bw / 2.0;
                            let ty = if b.forward {
                                y - bw * 0.7
                            } else {
                                y + bw * 1.1
                            };
                            let _ = writeln!(
                                svg,
                                "    <text class=\"insertion-count\" x=\"{cx}\" y=\"{ty}\" \
                                 text-anchor=\"middle\" font-size=\"{}\">{}</text>",
                                bw * 0.6,
                                ins.length
                            );
                        }
                    }
                    if options.show_sequences {
                        if let Some(seq) = domain_sequence(strand, k) {
                            let y_text = if b.forward { y - 2.0 } else { y + bw * 0.6 };
                            let _ = writeln!(
                                svg,
                                "    <text class=\"sequence\" x=\"{}\" y=\"{y_text}\" \
                                 font-size=\"{}\" textLength=\"{}\">{}</text>",
                                layout.x(b.start.min(b.end - 1)),
                                bw * 0.7,
                                (b.end - b.start) as f64 * bw,
                                xml_escape(&seq)
                            );
                        }
                    }
                }
                Domain::Loopout(l) => {
                    // Arc between the 3' point of the previous bound domain
                    // and the 5' point of the next one.
                    let prev = strand.domains[..k].iter().rev().find_map(Domain::as_bound);
                    let next = strand.domains[k + 1..].iter().find_map(Domain::as_bound);
                    if let (Some(p), Some(n)) = (prev, next) {
                        let (x1, y1) = end_point_3p(&layout, p);
                        let (x2, y2) = end_point_5p(&layout, n);
                        let lift = bw * (1.0 + l.length as f64 / 4.0);
                        let mid_x = (x1 + x2) / 2.0;
                        let mid_y = y1.min(y2) - lift;
                        let _ = writeln!(
                            svg,
                            "    <path class=\"loopout\" d=\"M {x1} {y1} Q {mid_x} {mid_y} \
                             {x2} {y2}\" stroke=\"{color}\" fill=\"none\" \
                             stroke-dasharray=\"3 2\"/>"
                        );
                        let _ = writeln!(
                            svg,
                            "    <text class=\"loopout-length\" x=\"{mid_x}\" y=\"{}\" \
                             text-anchor=\"middle\" font-size=\"{}\">{}</text>",
                            mid_y - 2.0,
                            bw * 0.6,
                            l.length
                        );
                    }
                }
            }
        }
        for pair in strand.domains.windows(2) {
            if let (Domain::Bound(a), Domain::Bound(b)) = (&pair[0], &pair[1]) {
                let (x1, y1) = end_point_3p(&layout, a);
                let (x2, y2) = end_point_5p(&layout, b);
                let _ = writeln!(
                    svg,
                    "    <polyline class=\"crossover\" points=\"{x1},{y1} {x2},{y2}\" \
                     stroke=\"{color}\" fill=\"none\"/>"
                );
            }
        }
        if let Some(last) = strand.last_bound() {
            let (tip_x, tip_y) = end_point_3p(&layout, last);
            let back = if last.forward { -bw / 2.0 } else { bw / 2.0 };
            let h = bw / 3.0;
            let _ = writeln!(
                svg,
                "    <polygon class=\"arrowhead\" points=\"{tip_x},{tip_y} {},{} {},{}\" \
                 fill=\"{color}\"/>",
                tip_x + back,
                tip_y - h,
                tip_x + back,
                tip_y + h
            );
        }
        svg.push_str("  </g>\n");
    }
    svg.push_str("</svg>\n");
    svg
}

/// Pixel position of a bound domain's 3' endpoint.
fn end_point_3p(layout: &MainLayout, b: &crate::model::BoundDomain) -> (f64, f64) {
    let y = layout.track_y(b.helix, b.forward);
    let x = if b.forward {
        layout.x(b.end)
    } else {
        layout.x(b.start)
    };
    (x, y)
}

/// Pixel position of a bound domain's 5' endpoint.
fn end_point_5p(layout: &MainLayout, b: &crate::model::BoundDomain) -> (f64, f64) {
    let y = layout.track_y(b.helix, b.forward);
    let x = if b.forward {
        layout.x(b.start)
    } else {
        layout.x(b.end)
    };
    (x, y)
}

/// The slice of the strand's sequence covered by domain `k`, if assigned.
fn domain_sequence(strand: &crate::model::Strand, k: usize) -> Option<String> {
    let seq = strand.sequence.as_ref()?;
    let chars: Vec<char> = seq.chars().collect();
    let start: usize = strand.domains[..k].iter().map(Domain::dna_length).sum();
    let len = strand.domains[k].dna_length();
    Some(chars.get(start..start + len)?.iter().collect())
}

fn render_side_view(design: &Design, options: &RenderOptions) -> String {
    let scale = options.base_width_px;
    let params = GeometryParams::default();
    let centers: Vec<(usize, f64, f64)> = design
        .helices
        .iter()
        .filter_map(|h| {
            let pos = match design.grid {
                Grid::None => h.position,
                grid => h
                    .grid_position
                    .and_then(|gp| geometry::grid_to_position(grid, gp, &params).ok()),
            }?;
            Some((h.idx, pos.x * scale, pos.y * scale))
        })
        .collect();
    let min_x = centers.iter().map(|c| c.1).fold(0.0, f64::min);
    let min_y = centers.iter().map(|c| c.2).fold(0.0, f64::min);
    let max_x = centers.iter().map(|c| c.1).fold(0.0, f64::max);
    let max_y = centers.iter().map(|c| c.2).fold(0.0, f64::max);
    let radius = params.helix_spacing / 2.0 * scale;
    let shift_x = MARGIN + radius - min_x;
    let shift_y = MARGIN + radius - min_y;
    let width = max_x - min_x + 2.0 * (MARGIN + radius);
    let height = max_y - min_y + 2.0 * (MARGIN + radius);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{width}\" height=\"{height}\">"
    );
    for (idx, x, y) in &centers {
        let cx = x + shift_x;
        let cy = y + shift_y;
        let _ = writeln!(
            svg,
            "  <circle class=\"helix-circle\" cx=\"{cx}\" cy=\"{cy}\" r=\"{radius}\" \
             fill=\"#eeeeee\" stroke=\"#333333\"/>"
        );
        let _ = writeln!(
            svg,
            "  <text class=\"helix-label\" x=\"{cx}\" y=\"{cy}\" text-anchor=\"middle\" \
             dominant-baseline=\"middle\">{idx}</text>"
        );
    }
    svg.push_str("</svg>\n");
    svg
}
