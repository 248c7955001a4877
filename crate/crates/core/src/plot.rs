//! Results table, scatter CSV and a small self-contained SVG scatter.

use std::fmt::Write as _;
use std::io::{Read, Write};

use thiserror::Error;

use crate::classifier::{ClassificationResult, Label};

#[derive(Debug, Error)]
pub enum PlotError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("row {row}: {message}")]
    Field { row: usize, message: String },
}

pub const RESULTS_HEADER: [&str; 8] = ["doc_id", "label", "p_good", "p_bad", "strength", "x", "y", "avg_sign"];
pub const SCATTER_HEADER: [&str; 3] = ["x", "y", "label"];

#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub doc_id: String,
    pub label: Label,
    pub p_good: f64,
    pub p_bad: f64,
    pub strength: f64,
    pub x: f64,
    pub y: f64,
    pub avg_sign: Option<f64>,
}

impl ResultRow {
    pub fn new(doc_id: impl Into<String>, result: &ClassificationResult, avg_sign: Option<f64>) -> Self {
        ResultRow {
            doc_id: doc_id.into(),
            label: result.label,
            p_good: result.p_good,
            p_bad: result.p_bad,
            strength: result.strength,
            x: result.point.x,
            y: result.point.y,
            avg_sign,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScatterPoint {
    pub x: f64,
    pub y: f64,
    pub label: Label,
}

// Shortest round-trip formatting keeps the files stable and exact.
fn num(v: f64) -> String {
    format!("{v}")
}

fn parse_num(row: usize, field: &str, name: &str) -> Result<f64, PlotError> {
    field.parse().map_err(|_| PlotError::Field {
        row,
        message: format!("{name}: not a number: {field:?}"),
    })
}

pub fn write_results<W: Write>(rows: &[ResultRow], out: W) -> Result<(), PlotError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(RESULTS_HEADER)?;
    for r in rows {
        w.write_record([
            r.doc_id.clone(),
            r.label.to_string(),
            num(r.p_good),
            num(r.p_bad),
            num(r.strength),
            num(r.x),
            num(r.y),
            r.avg_sign.map(num).unwrap_or_default(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_results<R: Read>(input: R) -> Result<Vec<ResultRow>, PlotError> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().ne(RESULTS_HEADER) {
        return Err(PlotError::Field {
            row: 0,
            message: format!("unexpected header, expected {}", RESULTS_HEADER.join(",")),
        });
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let row = i + 1;
        let label = rec[1].parse().map_err(|message| PlotError::Field { row, message })?;
        rows.push(ResultRow {
            doc_id: rec[0].to_string(),
            label,
            p_good: parse_num(row, &rec[2], "p_good")?,
            p_bad: parse_num(row, &rec[3], "p_bad")?,
            strength: parse_num(row, &rec[4], "strength")?,
            x: parse_num(row, &rec[5], "x")?,
            y: parse_num(row, &rec[6], "y")?,
            avg_sign: match &rec[7] {
                "" => None,
                s => Some(parse_num(row, s, "avg_sign")?),
            },
        });
    }
    Ok(rows)
}

pub fn scatter_points(rows: &[ResultRow], swap_axes: bool) -> Vec<ScatterPoint> {
    rows.iter()
        .map(|r| {
            if swap_axes {
                ScatterPoint {
                    x: r.y,
                    y: r.x,
                    label: r.label,
                }
            } else {
                ScatterPoint {
                    x: r.x,
                    y: r.y,
                    label: r.label,
                }
            }
        })
        .collect()
}

pub fn write_scatter<W: Write>(points: &[ScatterPoint], out: W) -> Result<(), PlotError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(SCATTER_HEADER)?;
    for p in points {
        w.write_record([num(p.x), num(p.y), p.label.to_string()])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SvgLayout {
    pub width: f64,
    pub height: f64,
    pub margin: f64,
}

impl Default for SvgLayout {
    fn default() -> Self {
        SvgLayout {
            width: 480.0,
            height: 360.0,
            margin: 50.0,
        }
    }
}

impl SvgLayout {
    /// Axis maxima; an all-zero axis scales as if its maximum were 1.
    pub fn extent(points: &[ScatterPoint]) -> (f64, f64) {
        let max = |f: fn(&ScatterPoint) -> f64| {
            let m = points.iter().map(f).fold(0.0, f64::max);
            if m > 0.0 {
                m
            } else {
                1.0
            }
        };
        (max(|p| p.x), max(|p| p.y))
    }

    /// Pixel position of a data point: linear from the lower-left corner of
    /// the plot area to the upper-right at the axis maxima.
    pub fn project(&self, x: f64, y: f64, extent: (f64, f64)) -> (f64, f64) {
        let w = self.width - 2.0 * self.margin;
        let h = self.height - 2.0 * self.margin;
        (
            self.margin + x / extent.0 * w,
            self.height - self.margin - y / extent.1 * h,
        )
    }
}

pub fn label_class(label: Label) -> &'static str {
    match label {
        Label::A => "label-a",
        Label::B => "label-b",
        Label::Unclassified => "label-u",
    }
}

pub fn scatter_svg(points: &[ScatterPoint], layout: SvgLayout, swap_axes: bool) -> String {
    let (x_title, y_title) = if swap_axes {
        ("bad-set frequency", "good-set frequency")
    } else {
        ("good-set frequency", "bad-set frequency")
    };
    let extent = SvgLayout::extent(points);
    let SvgLayout { width, height, margin } = layout;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    s.push_str(
        "<style>\n\
         .label-a { fill: #2b8a3e; }\n\
         .label-b { fill: #c92a2a; }\n\
         .label-u { fill: #868e96; }\n\
         .axis { stroke: #212529; stroke-width: 1; }\n\
         text { font: 12px sans-serif; fill: #212529; }\n\
         </style>\n",
    );
    let (x0, y0) = (margin, height - margin);
    let _ = writeln!(
        s,
        r#"<line class="axis" x1="{x0}" y1="{y0}" x2="{}" y2="{y0}"/>"#,
        width - margin
    );
    let _ = writeln!(s, r#"<line class="axis" x1="{x0}" y1="{y0}" x2="{x0}" y2="{margin}"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{x_title}</text>"#,
        width / 2.0,
        height - margin / 3.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" transform="rotate(-90 {} {})">{y_title}</text>"#,
        margin / 3.0,
        height / 2.0,
        margin / 3.0,
        height / 2.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
        width - margin,
        y0 + 14.0,
        num(extent.0)
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
        x0 - 4.0,
        margin + 4.0,
        num(extent.1)
    );
    for p in points {
        let (cx, cy) = layout.project(p.x, p.y, extent);
        let _ = writeln!(
            s,
            r#"<circle class="{}" cx="{cx:.2}" cy="{cy:.2}" r="4"><title>{} ({}, {})</title></circle>"#,
            label_class(p.label),
            p.label,
            num(p.x),
            num(p.y)
        );
    }
    s.push_str("</svg>\n");
    s
}
