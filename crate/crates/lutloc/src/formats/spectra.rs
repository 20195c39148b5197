use lutloc_core::{LookupMap, SpectraResult};
use serde::Serialize;

use super::{to_json, Real};

#[derive(Debug, Serialize)]
struct UnionLine {
    index: Vec<usize>,
    s_u: f64,
    d_u: Real,
    r_u: f64,
    neighbors: Vec<Vec<usize>>,
}

#[derive(Debug, Serialize)]
struct SpectraFile {
    radius: Real,
    distance: &'static str,
    sus_u: Vec<UnionLine>,
    sus_iu: Vec<Vec<usize>>,
    m_f: Vec<Vec<usize>>,
    m_s: Vec<Vec<usize>>,
}

/// Entries are written as index tuples; `sus_u` keeps its ranked order.
pub fn spectra_json(s: &SpectraResult, map: &LookupMap) -> String {
    let idx = |v: &[usize]| v.iter().map(|&e| map.entry_index(e).0).collect::<Vec<_>>();
    let file = SpectraFile {
        radius: Real::from_f64(s.radius),
        distance: s.distance.name(),
        sus_u: s
            .sus_u
            .iter()
            .map(|u| UnionLine {
                index: map.entry_index(u.entry).0,
                s_u: u.s_u,
                d_u: Real::from_f64(u.d_u),
                r_u: u.r_u,
                neighbors: idx(&u.neighbors),
            })
            .collect(),
        sus_iu: idx(&s.sus_iu),
        m_f: idx(&s.m_f),
        m_s: idx(&s.m_s),
    };
    to_json(&file)
}
