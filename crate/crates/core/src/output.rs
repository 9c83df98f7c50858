//! Flat output records and their csv, json and table renderings.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::catalog::{Catalog, MatchResult};
use crate::correction_terms::DTable;
use crate::search::Candidate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    Csv,
    Json,
    #[default]
    Table,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "table" => Ok(Format::Table),
            _ => Err(format!("unknown format {s:?} (expected csv, json or table)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidateRecord {
    pub p: u64,
    pub q: u64,
    pub epsilon: i64,
    pub a: u64,
    pub b: u64,
    pub genus: usize,
    pub t_sequence: String,
    pub match_kind: String,
    pub match_params: String,
}

pub const CANDIDATE_HEADER: [&str; 9] =
    ["p", "q", "epsilon", "a", "b", "genus", "t_sequence", "match_kind", "match_params"];

impl CandidateRecord {
    pub fn new(c: &Candidate, m: &MatchResult) -> Self {
        CandidateRecord {
            p: c.p(),
            q: c.q(),
            epsilon: c.epsilon.value(),
            a: c.map.a,
            b: c.map.b,
            genus: c.genus(),
            t_sequence: c.t.to_spaced(),
            match_kind: m.kind().to_string(),
            match_params: m.params(),
        }
    }

    fn fields(&self) -> [String; 9] {
        [
            self.p.to_string(),
            self.q.to_string(),
            self.epsilon.to_string(),
            self.a.to_string(),
            self.b.to_string(),
            self.genus.to_string(),
            self.t_sequence.clone(),
            self.match_kind.clone(),
            self.match_params.clone(),
        ]
    }
}

pub fn candidate_records(cands: &[Candidate], catalog: &Catalog) -> Vec<CandidateRecord> {
    cands.iter().map(|c| CandidateRecord::new(c, &catalog.match_candidate(c))).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DRecord {
    pub i: u64,
    /// Reduced `n/d`, or `n` when integral.
    pub d: String,
}

pub fn d_records(table: &DTable) -> Vec<DRecord> {
    table.values().iter().enumerate().map(|(i, d)| DRecord { i: i as u64, d: d.to_string() }).collect()
}

pub fn render_candidates(records: &[CandidateRecord], format: Format) -> String {
    match format {
        Format::Csv => csv_with_header(&CANDIDATE_HEADER, records),
        Format::Json => json(records),
        Format::Table => {
            let rows: Vec<[String; 9]> = records.iter().map(CandidateRecord::fields).collect();
            aligned(&CANDIDATE_HEADER, &rows)
        }
    }
}

pub fn render_d_table(records: &[DRecord], format: Format) -> String {
    match format {
        Format::Json => json(records),
        Format::Csv => csv_with_header(&["i", "d"], records),
        Format::Table => records.iter().fold(String::new(), |mut s, r| {
            let _ = writeln!(s, "{} {}", r.i, r.d);
            s
        }),
    }
}

fn csv_with_header<T: Serialize>(header: &[&str], records: &[T]) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(vec![]);
    w.write_record(header).expect("write to memory");
    for r in records {
        w.serialize(r).expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8")
}

fn json<T: Serialize + ?Sized>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("records serialize");
    s.push('\n');
    s
}

fn aligned<const N: usize>(header: &[&str; N], rows: &[[String; N]]) -> String {
    let mut widths: [usize; N] = header.map(str::len);
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &mut dyn Iterator<Item = &str>| {
        let mut l = String::new();
        for (k, cell) in cells.enumerate() {
            if k > 0 {
                l.push_str("  ");
            }
            let _ = write!(l, "{cell:<w$}", w = widths[k]);
        }
        out.push_str(l.trim_end());
        out.push('\n');
    };
    line(&mut header.iter().copied());
    for row in rows {
        line(&mut row.iter().map(String::as_str));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correction_terms::d_lens_table;

    #[test]
    fn d_rows_plain() {
        let rows = d_records(&d_lens_table(3, 1).unwrap());
        assert_eq!(render_d_table(&rows, Format::Table), "0 1/2\n1 -1/6\n2 -1/6\n");
    }

    #[test]
    fn d_rows_json() {
        let rows = d_records(&d_lens_table(4, 3).unwrap());
        let v: serde_json::Value = serde_json::from_str(&render_d_table(&rows, Format::Json)).unwrap();
        assert_eq!(v[1]["i"], 1);
        assert_eq!(v[1]["d"], "1/4");
        assert_eq!(v[3]["d"], "-3/4");
        assert_eq!(v.as_array().unwrap().len(), 4);
    }

    #[test]
    fn table_alignment() {
        let out = aligned(&["a", "bb"], &[["xyz".to_string(), "1".to_string()]]);
        assert_eq!(out, "a    bb\nxyz  1\n");
    }

    #[test]
    fn csv_header_without_rows() {
        assert_eq!(render_candidates(&[], Format::Csv), "p,q,epsilon,a,b,genus,t_sequence,match_kind,match_params\n");
        let rows = d_records(&d_lens_table(3, 1).unwrap());
        assert_eq!(render_d_table(&rows, Format::Csv), "i,d\n0,1/2\n1,-1/6\n2,-1/6\n");
    }

    #[test]
    fn format_names() {
        assert_eq!("csv".parse::<Format>().unwrap(), Format::Csv);
        assert!("xml".parse::<Format>().is_err());
    }
}
