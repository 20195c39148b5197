//! Heat-maps of per-entry ranking values over 1D and 2D maps.
//!
//! Entries that no run accessed carry no value: they are written as empty
//! CSV cells and drawn in blue in the SVG.

use std::fmt::Write as _;

use lutloc_core::{LookupMap, RankingResult, TraceRun};

use crate::error::{Error, Result};

/// Values laid out on a 1D or 2D grid, row-major (last axis fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap {
    pub axes: Vec<Vec<f64>>,
    /// `None` marks an entry no run accessed.
    pub cells: Vec<Option<f64>>,
}

impl Heatmap {
    /// Builds the grid from a ranking; `fixed` pins axes to a breakpoint
    /// index so that at most two free axes remain.
    pub fn build(ranking: &RankingResult, runs: &[TraceRun], map: &LookupMap, fixed: &[(usize, usize)]) -> Result<Self> {
        if ranking.scores.len() != map.len() {
            return Err(Error::Invalid(format!(
                "ranking has {} entries, map has {}",
                ranking.scores.len(),
                map.len()
            )));
        }
        let shape = map.shape();
        let mut pin: Vec<Option<usize>> = vec![None; shape.len()];
        for &(axis, idx) in fixed {
            if axis >= shape.len() || idx >= shape[axis] {
                return Err(Error::Invalid(format!("slice {axis}={idx} is outside the map of shape {shape:?}")));
            }
            pin[axis] = Some(idx);
        }
        let free: Vec<usize> = (0..shape.len()).filter(|&a| pin[a].is_none()).collect();
        if free.len() > 2 {
            return Err(Error::Usage(format!(
                "map has {} free dimensions, heat-maps show at most 2; fix the others with --slice AXIS=INDEX",
                free.len()
            )));
        }
        if free.is_empty() {
            return Err(Error::Usage("every axis is sliced; leave at least one free".into()));
        }
        let mut accessed = vec![false; map.len()];
        for r in runs {
            for q in &r.queries {
                for &e in &q.depends {
                    if let Some(a) = accessed.get_mut(e) {
                        *a = true;
                    }
                }
            }
        }
        let axes: Vec<Vec<f64>> = free.iter().map(|&a| map.axes()[a].breakpoints().to_vec()).collect();
        let free_shape: Vec<usize> = axes.iter().map(Vec::len).collect();
        let count: usize = free_shape.iter().product();
        let mut cells = Vec::with_capacity(count);
        let mut coords: Vec<usize> = pin.iter().map(|p| p.unwrap_or(0)).collect();
        for k in 0..count {
            let mut rem = k;
            for (j, &a) in free.iter().enumerate().rev() {
                coords[a] = rem % free_shape[j];
                rem /= free_shape[j];
            }
            let flat = crate::formats::entry_index(map, &coords)?;
            cells.push(accessed[flat].then(|| ranking.scores[flat]));
        }
        Ok(Self { axes, cells })
    }

    pub fn dims(&self) -> usize {
        self.axes.len()
    }

    fn cell(&self, i: usize, j: usize) -> Option<f64> {
        self.cells[i * self.axes.get(1).map_or(1, Vec::len) + j]
    }

    /// Smallest and largest finite value.
    pub fn finite_range(&self) -> Option<(f64, f64)> {
        let mut it = self.cells.iter().flatten().copied().filter(|v| v.is_finite());
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), v| (lo.min(v), hi.max(v))))
    }
}

fn fmt_value(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        // shortest representation that parses back to the same f64
        format!("{v:?}")
    }
}

fn parse_value(s: &str) -> std::result::Result<Option<f64>, String> {
    match s.trim() {
        "" => Ok(None),
        "inf" | "+inf" => Ok(Some(f64::INFINITY)),
        "-inf" => Ok(Some(f64::NEG_INFINITY)),
        t => t.parse().map(Some).map_err(|_| format!("`{t}` is not a number")),
    }
}

/// 1D: two rows, breakpoints then values. 2D: first row holds the axis-1
/// breakpoints after an empty corner cell, each following row starts with
/// its axis-0 breakpoint.
pub fn heatmap_csv(h: &Heatmap) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    let opt = |v: Option<f64>| v.map(fmt_value).unwrap_or_default();
    match h.dims() {
        1 => {
            w.write_record(h.axes[0].iter().map(|&b| fmt_value(b))).expect("in-memory write");
            w.write_record(h.cells.iter().map(|&c| opt(c))).expect("in-memory write");
        }
        _ => {
            let mut header = vec![String::new()];
            header.extend(h.axes[1].iter().map(|&b| fmt_value(b)));
            w.write_record(&header).expect("in-memory write");
            for (i, &b) in h.axes[0].iter().enumerate() {
                let mut row = vec![fmt_value(b)];
                row.extend((0..h.axes[1].len()).map(|j| opt(h.cell(i, j))));
                w.write_record(&row).expect("in-memory write");
            }
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
}

/// Inverse of [`heatmap_csv`].
pub fn parse_heatmap_csv(text: &str) -> std::result::Result<Heatmap, String> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = r.records().collect::<std::result::Result<_, _>>().map_err(|e| e.to_string())?;
    let number = |s: &str| parse_value(s)?.ok_or_else(|| "missing breakpoint".to_string());
    match rows.as_slice() {
        [] => Err("empty heat-map".into()),
        [first, ..] if first.get(0) == Some("") => {
            let cols = first.iter().skip(1).map(number).collect::<std::result::Result<Vec<_>, _>>()?;
            let mut rows_bp = Vec::new();
            let mut cells = Vec::new();
            for row in &rows[1..] {
                rows_bp.push(number(&row[0])?);
                for field in row.iter().skip(1) {
                    cells.push(parse_value(field)?);
                }
            }
            Ok(Heatmap { axes: vec![rows_bp, cols], cells })
        }
        [bps, vals] => {
            let axis = bps.iter().map(number).collect::<std::result::Result<Vec<_>, _>>()?;
            let cells = vals.iter().map(parse_value).collect::<std::result::Result<Vec<_>, _>>()?;
            Ok(Heatmap { axes: vec![axis], cells })
        }
        _ => Err("a 1D heat-map has exactly two rows".into()),
    }
}

const RAMP: [(f64, [u8; 3]); 4] =
    [(0.0, [199, 233, 192]), (0.35, [254, 224, 139]), (0.7, [244, 109, 67]), (1.0, [103, 0, 13])];
const NOT_ACCESSED: &str = "#2b6cb0";

fn ramp(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let k = RAMP.windows(2).position(|w| t <= w[1].0).unwrap_or(RAMP.len() - 2);
    let ((t0, c0), (t1, c1)) = (RAMP[k], RAMP[k + 1]);
    let u = (t - t0) / (t1 - t0);
    let ch = |a: u8, b: u8| (a as f64 + (b as f64 - a as f64) * u).round() as u8;
    format!("#{:02x}{:02x}{:02x}", ch(c0[0], c1[0]), ch(c0[1], c1[1]), ch(c0[2], c1[2]))
}

fn color(v: f64, range: Option<(f64, f64)>) -> String {
    match range {
        _ if v == f64::INFINITY => ramp(1.0),
        _ if v == f64::NEG_INFINITY || v.is_nan() => ramp(0.0),
        Some((lo, hi)) if hi > lo => ramp((v - lo) / (hi - lo)),
        _ => ramp(0.5),
    }
}

fn label(v: f64) -> String {
    if v.is_finite() && v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-3) {
        format!("{v:.3e}")
    } else if v.is_finite() {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s == "-0" { "0".into() } else { s.into() }
    } else {
        fmt_value(v)
    }
}

fn tick_step(n: usize) -> usize {
    n.div_ceil(10).max(1)
}

/// Self-contained SVG drawing of the heat-map with a color bar.
///
/// The horizontal axis is the last free axis; in 2D the first axis runs
/// upwards.
pub fn heatmap_svg(h: &Heatmap, title: &str) -> String {
    let (nx, ny) = match h.dims() {
        1 => (h.axes[0].len(), 1),
        _ => (h.axes[1].len(), h.axes[0].len()),
    };
    let cell = (640.0 / nx.max(ny) as f64).clamp(4.0, 32.0);
    let (left, top) = (70.0, 40.0);
    let (gw, gh) = (cell * nx as f64, cell * ny as f64);
    let bar_x = left + gw + 30.0;
    let bar_h = gh.max(120.0);
    let width = bar_x + 110.0;
    let height = top + bar_h.max(gh) + 60.0;
    let range = h.finite_range();

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{left}" y="22" font-size="14">{}</text>"#, escape(title));

    for iy in 0..ny {
        for ix in 0..nx {
            let (v, at) = if h.dims() == 1 {
                (h.cells[ix], format!("x0={}", label(h.axes[0][ix])))
            } else {
                (h.cell(iy, ix), format!("x0={}, x1={}", label(h.axes[0][iy]), label(h.axes[1][ix])))
            };
            let fill = v.map_or_else(|| NOT_ACCESSED.to_string(), |v| color(v, range));
            let x = left + cell * ix as f64;
            let y = top + gh - cell * (iy + 1) as f64;
            let tip = v.map_or_else(|| "not accessed".into(), label);
            let _ = writeln!(
                s,
                r#"<rect x="{x:.2}" y="{y:.2}" width="{cell:.2}" height="{cell:.2}" fill="{fill}"><title>{at}: {tip}</title></rect>"#
            );
        }
    }

    let xaxis = h.axes.last().unwrap();
    for ix in (0..nx).step_by(tick_step(nx)) {
        let x = left + cell * (ix as f64 + 0.5);
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            top + gh + 14.0,
            label(xaxis[ix])
        );
    }
    if h.dims() == 2 {
        for iy in (0..ny).step_by(tick_step(ny)) {
            let y = top + gh - cell * (iy as f64 + 0.5) + 4.0;
            let _ = writeln!(s, r#"<text x="{:.2}" y="{y:.2}" text-anchor="end">{}</text>"#, left - 6.0, label(h.axes[0][iy]));
        }
    }

    // color bar
    match range {
        Some((lo, hi)) if hi > lo => {
            let bands = 64;
            let bh = bar_h / bands as f64;
            for k in 0..bands {
                let y = top + bar_h - bh * (k + 1) as f64;
                let t = (k as f64 + 0.5) / bands as f64;
                let _ = writeln!(
                    s,
                    r#"<rect x="{bar_x:.2}" y="{y:.2}" width="16" height="{:.2}" fill="{}"/>"#,
                    bh + 0.5,
                    ramp(t)
                );
            }
            for k in 0..=4 {
                let t = k as f64 / 4.0;
                let y = top + bar_h * (1.0 - t) + 4.0;
                let _ = writeln!(s, r#"<text x="{:.2}" y="{y:.2}">{}</text>"#, bar_x + 22.0, label(lo + (hi - lo) * t));
            }
        }
        Some((v, _)) => {
            let _ = writeln!(
                s,
                r#"<rect x="{bar_x:.2}" y="{top:.2}" width="16" height="16" fill="{}"/>"#,
                ramp(0.5)
            );
            let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, bar_x + 22.0, top + 12.0, label(v));
        }
        None => {}
    }
    let ly = top + bar_h + 24.0;
    let _ = writeln!(s, r#"<rect x="{bar_x:.2}" y="{:.2}" width="16" height="16" fill="{NOT_ACCESSED}"/>"#, ly - 12.0);
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">not accessed</text>"#, bar_x + 22.0, ly);
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
