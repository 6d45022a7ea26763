//! Planar Tonnetz: pitch-class hexagons on a honeycomb, triads at the points
//! where three hexagons meet, and progression paths drawn as arrows.
//!
//! Lattice coordinate `(x, y)` holds pitch class `7x + 4y + anchor`: `x` steps
//! by perfect fifths and `y` by major thirds. Hexagon centers sit at
//! `((x + y/2)·d, y·(√3/2)·d)`; the renderer flips the vertical axis so that
//! thirds ascend on screen.

use std::fmt;

use thiserror::Error;

use crate::harmony::{NoteName, PitchClass, Quality, Triad};
use crate::svg::{escape, num, SvgDoc};
use crate::transform::{MoveKind, ProgressionAnnotation};

const SQRT3_2: f64 = 0.866_025_403_784_438_6;
const TIE_EPSILON: f64 = 1e-9;
/// Search half-width around `near`; the period lattice of each triad has a
/// covering radius below 3 hexes, so 8 is ample.
const SEARCH_RADIUS: i32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeCoord {
    pub x: i32,
    pub y: i32,
}

impl LatticeCoord {
    pub fn new(x: i32, y: i32) -> Self {
        LatticeCoord { x, y }
    }

    /// Hexagon center in units of the hexagon spacing.
    pub fn center(self) -> Point {
        Point {
            x: self.x as f64 + self.y as f64 / 2.0,
            y: self.y as f64 * SQRT3_2,
        }
    }

    pub fn offset(self, dx: i32, dy: i32) -> Self {
        LatticeCoord::new(self.x + dx, self.y + dy)
    }

    pub fn is_adjacent(self, other: LatticeCoord) -> bool {
        matches!(
            (other.x - self.x, other.y - self.y),
            (1, 0) | (-1, 0) | (0, 1) | (0, -1) | (1, -1) | (-1, 1)
        )
    }
}

impl fmt::Display for LatticeCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance_sq(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn distance(self, other: Point) -> f64 {
        self.distance_sq(other).sqrt()
    }

    /// Inverse of [`LatticeCoord::center`], unrounded.
    fn to_lattice(self) -> (f64, f64) {
        let y = self.y / SQRT3_2;
        (self.x - y / 2.0, y)
    }
}

pub fn node_pitch_class(c: LatticeCoord, anchor: PitchClass) -> PitchClass {
    anchor.transpose(7 * c.x + 4 * c.y)
}

/// One lattice instance of a triad.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriadPlacement {
    pub triad: Triad,
    /// Root, fifth and third hexagons.
    pub hexes: [LatticeCoord; 3],
    /// Centroid of the three hexagon centers.
    pub point: Point,
}

impl TriadPlacement {
    /// Placement whose root hexagon is at `root`. The caller guarantees that
    /// `root` carries the triad's root pitch class.
    fn at_root(triad: Triad, root: LatticeCoord) -> Self {
        let hexes = match triad.quality {
            Quality::Major => [root, root.offset(1, 0), root.offset(0, 1)],
            Quality::Minor => [root, root.offset(1, 0), root.offset(1, -1)],
        };
        let centers = hexes.map(LatticeCoord::center);
        let point = Point::new(
            centers.iter().map(|c| c.x).sum::<f64>() / 3.0,
            centers.iter().map(|c| c.y).sum::<f64>() / 3.0,
        );
        TriadPlacement {
            triad,
            hexes,
            point,
        }
    }

    pub fn root_hex(&self) -> LatticeCoord {
        self.hexes[0]
    }

    pub fn touches(&self, hex: LatticeCoord) -> bool {
        self.hexes.contains(&hex)
    }

    pub fn shares_hex(&self, other: &TriadPlacement) -> bool {
        self.hexes.iter().any(|h| other.touches(*h))
    }
}

/// Nearest lattice instance of `t` to `near` (the origin when absent).
/// Ties go to the smallest root coordinate, `x` then `y`.
pub fn place_triad(t: Triad, near: Option<Point>, anchor: PitchClass) -> TriadPlacement {
    let target = near.unwrap_or(Point::ORIGIN);
    let (cx, cy) = target.to_lattice();
    let (cx, cy) = (cx.round() as i32, cy.round() as i32);
    let mut best: Option<(f64, TriadPlacement)> = None;
    for x in cx - SEARCH_RADIUS..=cx + SEARCH_RADIUS {
        for y in cy - SEARCH_RADIUS..=cy + SEARCH_RADIUS {
            let root = LatticeCoord::new(x, y);
            if node_pitch_class(root, anchor) != t.root {
                continue;
            }
            let candidate = TriadPlacement::at_root(t, root);
            let d = candidate.point.distance_sq(target);
            let better = match &best {
                None => true,
                Some((bd, bp)) => {
                    d < bd - TIE_EPSILON || ((d - bd).abs() <= TIE_EPSILON && root < bp.root_hex())
                }
            };
            if better {
                best = Some((d, candidate));
            }
        }
    }
    best.expect("every pitch class recurs within the search window")
        .1
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathArrow {
    pub from: usize,
    pub to: usize,
    pub kind: MoveKind,
}

/// A progression laid out on the lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct PathEmbedding {
    pub anchor: PitchClass,
    pub placements: Vec<TriadPlacement>,
    /// Arrows between consecutive placements; identity moves are absorbed.
    pub arrows: Vec<PathArrow>,
}

impl PathEmbedding {
    pub fn start(&self) -> Option<&TriadPlacement> {
        self.placements.first()
    }

    pub fn end(&self) -> Option<&TriadPlacement> {
        self.placements.last()
    }

    pub fn total_length(&self) -> f64 {
        self.placements
            .windows(2)
            .map(|w| w[0].point.distance(w[1].point))
            .sum()
    }

    /// Distinct lattice instances visited.
    pub fn distinct_placements(&self) -> Vec<TriadPlacement> {
        let mut seen: Vec<TriadPlacement> = Vec::new();
        for p in &self.placements {
            if !seen
                .iter()
                .any(|q| q.triad == p.triad && q.root_hex() == p.root_hex())
            {
                seen.push(*p);
            }
        }
        seen
    }
}

/// Greedy nearest-instance chaining: each triad is placed at the instance
/// nearest the previous placement. Not globally optimal.
pub fn embed_path(annotation: &ProgressionAnnotation, anchor: PitchClass) -> PathEmbedding {
    let mut placements: Vec<TriadPlacement> = Vec::new();
    let mut arrows = Vec::new();
    for (i, chord) in annotation.chords.iter().enumerate() {
        let triad = chord.triad();
        match placements.last() {
            None => placements.push(place_triad(triad, None, anchor)),
            Some(prev) if prev.triad == triad => {}
            Some(prev) => {
                let next = place_triad(triad, Some(prev.point), anchor);
                let kind = annotation
                    .moves
                    .get(i - 1)
                    .map(|m| m.kind)
                    .unwrap_or(MoveKind::Single);
                arrows.push(PathArrow {
                    from: placements.len() - 1,
                    to: placements.len(),
                    kind,
                });
                placements.push(next);
            }
        }
    }
    PathEmbedding {
        anchor,
        placements,
        arrows,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("cannot render an empty embedding")]
    EmptyEmbedding,
}

/// A highlighted hexagon, e.g. a note held across a double transformation.
#[derive(Debug, Clone, PartialEq)]
pub struct NoteMarker {
    pub hex: LatticeCoord,
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TonnetzRenderOptions {
    /// Center spacing of neighboring hexagons, in user units.
    pub hex_spacing: f64,
    pub title: Option<String>,
    pub markers: Vec<NoteMarker>,
}

impl Default for TonnetzRenderOptions {
    fn default() -> Self {
        TonnetzRenderOptions {
            hex_spacing: 60.0,
            title: None,
            markers: Vec::new(),
        }
    }
}

const TONNETZ_CSS: &str = ".pc-hex{fill:#fdfdf8;stroke:#888;stroke-width:1}\
.pc-label{font:14px sans-serif;fill:#333}\
.move-arrow{stroke:#d22;stroke-width:2.5;fill:none}\
.move-arrow-double{stroke:#d22;stroke-width:1.5;fill:none}\
.chord-point{fill:#d22}\
.chord-label{font:bold 12px sans-serif;fill:#a11}\
.chord-circle{stroke:#d22;stroke-width:2;fill:none}\
.note-marker{stroke:#22d;stroke-width:2;fill:none}\
.title{font:bold 16px sans-serif}";

fn triad_label(t: Triad) -> String {
    let name = NoteName::sharp_spelling(t.root).pretty();
    match t.quality {
        Quality::Major => name,
        Quality::Minor => name.to_lowercase(),
    }
}

/// Renders an embedding over a honeycomb of labeled pitch-class hexagons.
pub fn render_tonnetz_svg(
    embedding: &PathEmbedding,
    options: &TonnetzRenderOptions,
) -> Result<String, RenderError> {
    if embedding.placements.is_empty() {
        return Err(RenderError::EmptyEmbedding);
    }
    let d = options.hex_spacing;
    let to_screen = |p: Point| (p.x * d, -p.y * d);

    let used = embedding
        .placements
        .iter()
        .flat_map(|p| p.hexes)
        .chain(options.markers.iter().map(|m| m.hex));
    let (mut min_x, mut max_x, mut min_y, mut max_y) = (i32::MAX, i32::MIN, i32::MAX, i32::MIN);
    for h in used {
        min_x = min_x.min(h.x);
        max_x = max_x.max(h.x);
        min_y = min_y.min(h.y);
        max_y = max_y.max(h.y);
    }
    let (min_x, max_x, min_y, max_y) = (min_x - 1, max_x + 1, min_y - 1, max_y + 1);

    let radius = d / 3f64.sqrt();
    let hexes: Vec<LatticeCoord> = (min_y..=max_y)
        .flat_map(|y| (min_x..=max_x).map(move |x| LatticeCoord::new(x, y)))
        .collect();

    let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for h in &hexes {
        let (sx, sy) = to_screen(h.center());
        lo_x = lo_x.min(sx - radius);
        hi_x = hi_x.max(sx + radius);
        lo_y = lo_y.min(sy - radius);
        hi_y = hi_y.max(sy + radius);
    }
    let pad = 10.0;
    let title_h = if options.title.is_some() { 24.0 } else { 0.0 };
    let mut doc = SvgDoc::new(
        lo_x - pad,
        lo_y - pad - title_h,
        hi_x - lo_x + 2.0 * pad,
        hi_y - lo_y + 2.0 * pad + title_h,
    );
    doc.style(TONNETZ_CSS);
    doc.def(
        r##"    <marker id="arrowhead" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" orient="auto-start-reverse"><path d="M0,0 L10,5 L0,10 z" fill="#d22"/></marker>"##,
    );
    if let Some(title) = &options.title {
        doc.push(format!(
            r#"<text class="title" x="{}" y="{}">{}</text>"#,
            num(lo_x),
            num(lo_y - title_h / 2.0),
            escape(title)
        ));
    }

    for h in &hexes {
        let (cx, cy) = to_screen(h.center());
        let points: Vec<String> = (0..6)
            .map(|k| {
                let angle = std::f64::consts::PI / 180.0 * (60.0 * k as f64 - 90.0);
                format!(
                    "{},{}",
                    num(cx + radius * angle.cos()),
                    num(cy + radius * angle.sin())
                )
            })
            .collect();
        let pc = node_pitch_class(*h, embedding.anchor);
        doc.push(format!(
            r#"<polygon class="pc-hex" data-x="{}" data-y="{}" data-pc="{}" points="{}"/>"#,
            h.x,
            h.y,
            pc.value(),
            points.join(" ")
        ));
        doc.text("pc-label", cx, cy, &NoteName::sharp_spelling(pc).pretty());
    }

    for m in &options.markers {
        let (cx, cy) = to_screen(m.hex.center());
        let side = radius * 0.9;
        doc.push(format!(
            r#"<rect class="note-marker" x="{}" y="{}" width="{}" height="{}"/>"#,
            num(cx - side / 2.0),
            num(cy - side / 2.0),
            num(side),
            num(side)
        ));
        if let Some(label) = &m.label {
            doc.text("pc-label", cx, cy + side / 2.0 + 8.0, label);
        }
    }

    let shrink = 0.12 * d;
    for arrow in &embedding.arrows {
        let (x1, y1) = to_screen(embedding.placements[arrow.from].point);
        let (x2, y2) = to_screen(embedding.placements[arrow.to].point);
        let (dx, dy) = (x2 - x1, y2 - y1);
        let len = (dx * dx + dy * dy).sqrt().max(1e-9);
        let (ux, uy) = (dx / len, dy / len);
        let (sx, sy) = (x1 + ux * shrink, y1 + uy * shrink);
        let (ex, ey) = (x2 - ux * shrink, y2 - uy * shrink);
        match arrow.kind {
            MoveKind::Double => {
                let (ox, oy) = (-uy * 2.5, ux * 2.5);
                doc.push(format!(
                    r#"<path class="move-arrow-double" d="M{},{} L{},{} M{},{} L{},{}" marker-end="url(#arrowhead)"/>"#,
                    num(sx + ox),
                    num(sy + oy),
                    num(ex + ox),
                    num(ey + oy),
                    num(sx - ox),
                    num(sy - oy),
                    num(ex - ox),
                    num(ey - oy)
                ));
            }
            _ => {
                doc.push(format!(
                    r#"<path class="move-arrow" d="M{},{} L{},{}" marker-end="url(#arrowhead)"/>"#,
                    num(sx),
                    num(sy),
                    num(ex),
                    num(ey)
                ));
            }
        }
    }

    for p in embedding.distinct_placements() {
        let (x, y) = to_screen(p.point);
        doc.push(format!(
            r#"<circle class="chord-point" cx="{}" cy="{}" r="3"/>"#,
            num(x),
            num(y)
        ));
        doc.text("chord-label", x, y - 9.0, &triad_label(p.triad));
    }

    let circles = [
        ("start", embedding.start(), 0.22),
        ("end", embedding.end(), 0.27),
    ];
    for (role, placement, r) in circles {
        if let Some(p) = placement {
            let (x, y) = to_screen(p.point);
            doc.push(format!(
                r#"<circle class="chord-circle" data-role="{role}" data-chord="{}" cx="{}" cy="{}" r="{}"/>"#,
                escape(&p.triad.to_string()),
                num(x),
                num(y),
                num(r * d)
            ));
        }
    }

    Ok(doc.finish())
}
