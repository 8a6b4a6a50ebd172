//! Deterministic SVG emission: the unit-interval integral-partition map
//! (all lines `h = i*alpha - j` over the unit square) and single-alpha
//! partition strips.
//!
//! Determinism contract: identical input produces byte-identical output.
//! Everything is plain SVG 1.1 text, coordinates are printed with exactly
//! six decimal places computed by integer arithmetic, and the styling
//! constants below are fixed.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::farey::farey_iter;
use crate::rational::Rational;
use crate::real_value::RealValue;
use crate::three_distance::interval_sequence;

// styling constants (not configurable; part of the byte-determinism
// contract)
const MARGIN: u64 = 24;
const SEGMENT_COLOR: &str = "#000000";
const FRAME_COLOR: &str = "#000000";
const VERTICAL_COLOR: &str = "#777777";
const VERTICAL_DASH: &str = "4,3";
const LABEL_FONT: &str = "font-family=\"monospace\" font-size=\"12\"";
const STRIP_WIDTH: u64 = 900;
const STRIP_HEIGHT: u64 = 170;

/// Parameters of one integral-partition map image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnMapSpec {
    n: u64,
    lines: Vec<(u64, u64)>,
    show_farey_verticals: bool,
    width_px: u64,
    height_px: u64,
}

impl UnMapSpec {
    /// Enumerates all line segments `h = i*alpha - j` with `0 < i <= n`,
    /// `0 <= j < i`; every such segment crosses the open unit square.
    pub fn new(n: u64, show_farey_verticals: bool, width_px: u64, height_px: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("map order must be >= 1".into()));
        }
        if n > 1000 {
            return Err(Error::InvalidArgument(format!(
                "map order {n} would draw {} segments; limit is 1000",
                n * (n + 1) / 2
            )));
        }
        if width_px < 64 || height_px < 64 {
            return Err(Error::InvalidArgument("pixel dimensions must be >= 64".into()));
        }
        let mut lines = Vec::with_capacity((n * (n + 1) / 2) as usize);
        for i in 1..=n {
            for j in 0..i {
                lines.push((i, j));
            }
        }
        Ok(UnMapSpec { n, lines, show_farey_verticals, width_px, height_px })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn lines(&self) -> &[(u64, u64)] {
        &self.lines
    }
}

struct Frame {
    x0: Rational,
    y0: Rational,
    x_span: Rational,
    y_span: Rational,
}

impl Frame {
    fn new(width: u64, height: u64) -> Frame {
        Frame {
            x0: Rational::from(MARGIN),
            y0: Rational::from(height - MARGIN),
            x_span: Rational::from(width - 2 * MARGIN),
            y_span: Rational::from(height - 2 * MARGIN),
        }
    }

    /// unit coordinates -> pixel coordinates (y grows downward in SVG)
    fn x(&self, u: &Rational) -> String {
        (&self.x0 + &(u * &self.x_span)).to_decimal_string(6)
    }

    fn y(&self, v: &Rational) -> String {
        (&self.y0 - &(v * &self.y_span)).to_decimal_string(6)
    }
}

fn svg_open(out: &mut String, width: u64, height: u64) {
    let _ = writeln!(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
}

fn line(out: &mut String, x1: &str, y1: &str, x2: &str, y2: &str, style: &str) {
    let _ = writeln!(
        out,
        "<line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" {style}/>"
    );
}

fn text(out: &mut String, x: &str, y: &str, anchor: &str, content: &str) {
    let _ = writeln!(
        out,
        "<text x=\"{x}\" y=\"{y}\" text-anchor=\"{anchor}\" {LABEL_FONT}>{content}</text>"
    );
}

/// Renders the order-`n` integral partition map: the family of segments
/// `h = i*alpha - j` over `alpha` in (0,1), clipped to `0 <= h < 1`, plus
/// an axis frame and (optionally) dashed verticals at the interior members
/// of `F_{n-1}`, the alpha-coordinates of all interior intersections.
pub fn render_un_map(spec: &UnMapSpec) -> String {
    let frame = Frame::new(spec.width_px, spec.height_px);
    let mut out = String::new();
    svg_open(&mut out, spec.width_px, spec.height_px);

    let zero = Rational::zero();
    let one = Rational::one();
    let frame_style = format!("stroke=\"{FRAME_COLOR}\" stroke-width=\"1\" fill=\"none\"");
    let _ = writeln!(
        out,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" {frame_style}/>",
        frame.x(&zero),
        frame.y(&one),
        frame.x_span.to_decimal_string(6),
        frame.y_span.to_decimal_string(6),
    );

    if spec.show_farey_verticals && spec.n >= 2 {
        let style = format!(
            "stroke=\"{VERTICAL_COLOR}\" stroke-width=\"1\" stroke-dasharray=\"{VERTICAL_DASH}\""
        );
        for member in farey_iter(spec.n - 1, u64::MAX).expect("n-1 >= 1") {
            if member.is_zero() || member == Rational::one() {
                continue;
            }
            let x = frame.x(&member);
            line(&mut out, &x, &frame.y(&zero), &x, &frame.y(&one), &style);
            let below = (&frame.y0 + &Rational::from(12u64)).to_decimal_string(6);
            text(&mut out, &x, &below, "middle", &member.to_string());
        }
    }

    let seg_style = format!("stroke=\"{SEGMENT_COLOR}\" stroke-width=\"1\"");
    for &(i, j) in &spec.lines {
        // h = i*alpha - j runs from (j/i, 0) up to ((j+1)/i, 1)
        let x1 = Rational::new(j, i).expect("i > 0");
        let x2 = Rational::new(j + 1, i).expect("i > 0");
        line(
            &mut out,
            &frame.x(&x1),
            &frame.y(&zero),
            &frame.x(&x2),
            &frame.y(&one),
            &seg_style,
        );
    }

    // corner labels and axis names
    let below = (&frame.y0 + &Rational::from(12u64)).to_decimal_string(6);
    text(&mut out, &frame.x(&zero), &below, "middle", "0");
    text(&mut out, &frame.x(&one), &below, "middle", "1");
    let left = (&frame.x0 - &Rational::from(8u64)).to_decimal_string(6);
    text(&mut out, &left, &frame.y(&zero), "end", "0");
    text(&mut out, &left, &frame.y(&one), "end", "1");
    let _ = writeln!(out, "<!-- alpha on the horizontal axis, h on the vertical axis -->");
    text(&mut out, &frame.x(&one), &(&frame.y0 + &Rational::from(22u64)).to_decimal_string(6), "end", "alpha");
    text(&mut out, &left, &(&(&frame.y0 - &frame.y_span) - &Rational::from(8u64)).to_decimal_string(6), "end", "h");

    out.push_str("</svg>\n");
    out
}

/// Renders a one-line partition strip: the unit segment with a tick at
/// every point `{i*alpha}` labeled by its rank `i`, and each interval's
/// length printed to three decimals under its midpoint.
pub fn render_partition_strip(alpha: &RealValue, n: u64) -> Result<String> {
    if n > 10_000 {
        return Err(Error::InvalidArgument(format!(
            "strip order {n} would draw {} ticks; limit is 10000",
            n + 1
        )));
    }
    let entries = interval_sequence(alpha, n)?;
    let frame = Frame::new(STRIP_WIDTH, STRIP_HEIGHT);
    let baseline = Rational::new(1, 2).expect("const");
    let mut out = String::new();
    svg_open(&mut out, STRIP_WIDTH, STRIP_HEIGHT);

    let y = frame.y(&baseline);
    let base_style = format!("stroke=\"{FRAME_COLOR}\" stroke-width=\"1\"");
    line(&mut out, &frame.x(&Rational::zero()), &y, &frame.x(&Rational::one()), &y, &base_style);

    let y_num = frame.y0.clone() - &frame.y_span * &baseline;
    let tick_top = (&y_num - &Rational::from(6u64)).to_decimal_string(6);
    let tick_bottom = (&y_num + &Rational::from(6u64)).to_decimal_string(6);
    let rank_y = (&y_num - &Rational::from(12u64)).to_decimal_string(6);
    let len_y = (&y_num + &Rational::from(20u64)).to_decimal_string(6);
    let end_y = (&y_num + &Rational::from(36u64)).to_decimal_string(6);

    let mut position = Rational::zero();
    for entry in &entries {
        let x = frame.x(&position);
        line(&mut out, &x, &tick_top, &x, &tick_bottom, &base_style);
        text(&mut out, &x, &rank_y, "middle", &entry.index.to_string());
        let half = Rational::new(1, 2).expect("const");
        let midpoint = &position + &(&entry.length * &half);
        text(
            &mut out,
            &frame.x(&midpoint),
            &len_y,
            "middle",
            &entry.length.to_decimal_string(3),
        );
        position = &position + &entry.length;
    }
    debug_assert_eq!(position, Rational::one(), "intervals must tile [0,1]");

    // scale endpoints
    for (u, label) in [(Rational::zero(), "0"), (Rational::one(), "1")] {
        let x = frame.x(&u);
        line(&mut out, &x, &tick_top, &x, &tick_bottom, &base_style);
        text(&mut out, &x, &end_y, "middle", label);
    }

    out.push_str("</svg>\n");
    Ok(out)
}
