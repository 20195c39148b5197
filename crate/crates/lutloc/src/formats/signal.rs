use std::path::Path;

use lutloc_core::Signal;

use crate::error::{Error, Result};
use crate::fsio;

/// Header `t,<channels...>`, then one row per sample.
pub fn signal_csv(sig: &Signal) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["t".to_string()];
    header.extend(sig.channel_names().iter().cloned());
    w.write_record(&header).expect("in-memory write");
    for (i, t) in sig.times().iter().enumerate() {
        let mut row = vec![t.to_string()];
        row.extend(sig.channel_names().iter().map(|n| sig.channel(n).unwrap()[i].to_string()));
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
}

pub fn parse_signal_csv(text: &str) -> std::result::Result<Signal, String> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| e.to_string())?.clone();
    if header.len() < 2 {
        return Err("expected a time column followed by at least one channel".into());
    }
    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); header.len()];
    for (k, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        if rec.len() != header.len() {
            return Err(format!("row {} has {} fields, expected {}", k + 2, rec.len(), header.len()));
        }
        for (c, field) in rec.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| format!("row {}: `{field}` is not a number", k + 2))?;
            cols[c].push(v);
        }
    }
    let mut cols = cols.into_iter();
    let mut sig = Signal::new(cols.next().unwrap()).map_err(|e| e.to_string())?;
    for (name, values) in header.iter().skip(1).zip(cols) {
        sig.push_channel(name, values).map_err(|e| e.to_string())?;
    }
    Ok(sig)
}

pub fn read_signal_csv(path: &Path) -> Result<Signal> {
    parse_signal_csv(&fsio::read_to_string(path)?).map_err(|e| Error::format(path, e))
}
