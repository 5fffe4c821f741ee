//! File formats for snapshots, diagnostics, invariants and profiles.
//!
//! CSV files are UTF-8 with a fixed header row:
//!
//! | file        | header                                                  |
//! |-------------|---------------------------------------------------------|
//! | snapshots   | `t,x,u`                                                 |
//! | diagnostics | `t,mass,momentum,energy,peak_x,peak_u,I_<k>...`         |
//! | invariants  | `t,mass,momentum,energy,I_<k>...`                       |
//! | profile     | `xi,u`                                                  |
//!
//! Numbers are written in shortest round-trip form, so reading a file back
//! reproduces the stored `f64` values exactly. JSON documents follow the
//! schemas in `schemas/`.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use ksharp_core::diagnostics::DiagnosticsRecord;
use ksharp_core::Grid;

use crate::error::{CliError, CliResult};

pub const SNAPSHOT_HEADER: [&str; 3] = ["t", "x", "u"];
pub const PROFILE_HEADER: [&str; 2] = ["xi", "u"];
pub const DIAGNOSTICS_HEADER: [&str; 6] = ["t", "mass", "momentum", "energy", "peak_x", "peak_u"];
pub const INVARIANTS_HEADER: [&str; 4] = ["t", "mass", "momentum", "energy"];

/// Shortest representation that parses back to the same value.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

fn ik_column(k: u32) -> String {
    format!("I_{k}")
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io(path, io),
        other => CliError::malformed(path, format!("{other:?}")),
    }
}

fn write_json<T: Serialize>(path: &Path, doc: &T) -> CliResult<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, doc).map_err(|e| CliError::io(path, e.into()))?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| CliError::io(path, e))
}

fn write_csv(path: &Path, header: &[String], rows: impl Iterator<Item = Vec<String>>) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(header).map_err(|e| csv_error(path, e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsDoc {
    pub n: u32,
    pub m: u32,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDoc {
    pub length: f64,
    pub points: usize,
    pub spacing: f64,
}

impl From<&Grid> for GridDoc {
    fn from(g: &Grid) -> Self {
        Self {
            length: g.length(),
            points: g.npoints(),
            spacing: g.spacing(),
        }
    }
}

/// Field samples at several times on one grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnapshotDoc {
    pub grid: GridDoc,
    pub params: ParamsDoc,
    pub times: Vec<f64>,
    pub fields: Vec<Vec<f64>>,
}

/// Snapshots read back from either format. CSV files carry no parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshots {
    pub grid: Grid,
    pub params: Option<ParamsDoc>,
    pub times: Vec<f64>,
    pub fields: Vec<Vec<f64>>,
}

pub fn write_snapshots_csv(path: &Path, grid: &Grid, times: &[f64], fields: &[Vec<f64>]) -> CliResult<()> {
    let header: Vec<String> = SNAPSHOT_HEADER.iter().map(|s| s.to_string()).collect();
    let xs: Vec<String> = grid.points().into_iter().map(fmt_f64).collect();
    let rows = times.iter().zip(fields).flat_map(|(&t, f)| {
        let t = fmt_f64(t);
        xs.iter().zip(f).map(move |(x, &u)| vec![t.clone(), x.clone(), fmt_f64(u)])
    });
    write_csv(path, &header, rows)
}

pub fn write_snapshots_json(path: &Path, doc: &SnapshotDoc) -> CliResult<()> {
    write_json(path, doc)
}

/// Reads a snapshot file, choosing the format from the first byte (`{` for
/// JSON).
pub fn read_snapshots(path: &Path) -> CliResult<Snapshots> {
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| CliError::io(path, e))?;
    if text.trim_start().starts_with('{') {
        parse_snapshot_json(path, &text)
    } else {
        parse_snapshot_csv(path, &text)
    }
}

fn parse_snapshot_json(path: &Path, text: &str) -> CliResult<Snapshots> {
    let doc: SnapshotDoc = serde_json::from_str(text).map_err(|e| CliError::malformed(path, e.to_string()))?;
    let grid = Grid::new(doc.grid.length, doc.grid.points).map_err(|e| CliError::malformed(path, e.to_string()))?;
    if doc.times.len() != doc.fields.len() {
        return Err(CliError::malformed(path, "times and fields differ in length"));
    }
    if doc.fields.iter().any(|f| f.len() != grid.npoints()) {
        return Err(CliError::malformed(path, "field length differs from grid.points"));
    }
    Ok(Snapshots {
        grid,
        params: Some(doc.params),
        times: doc.times,
        fields: doc.fields,
    })
}

fn parse_snapshot_csv(path: &Path, text: &str) -> CliResult<Snapshots> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    if header.iter().collect::<Vec<_>>() != SNAPSHOT_HEADER {
        return Err(CliError::malformed(path, format!("expected header t,x,u, got {header:?}")));
    }
    let num = |s: &str, what: &str| -> CliResult<f64> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| CliError::malformed(path, format!("bad {what} value {s:?}")))
    };
    let mut times: Vec<f64> = Vec::new();
    let mut blocks: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        if record.len() != 3 {
            return Err(CliError::malformed(path, "expected three columns"));
        }
        let t = num(&record[0], "t")?;
        let x = num(&record[1], "x")?;
        let u = num(&record[2], "u")?;
        if times.last() != Some(&t) {
            times.push(t);
            blocks.push((Vec::new(), Vec::new()));
        }
        let block = blocks.last_mut().expect("pushed above");
        block.0.push(x);
        block.1.push(u);
    }
    let Some((xs, _)) = blocks.first() else {
        return Err(CliError::malformed(path, "no data rows"));
    };
    if xs.len() < 2 || xs[0] != 0.0 {
        return Err(CliError::malformed(path, "x must start at 0 with at least two points"));
    }
    let grid = Grid::from_spacing(xs[1], xs.len()).map_err(|e| CliError::malformed(path, e.to_string()))?;
    let xs = xs.clone();
    let mut fields = Vec::with_capacity(blocks.len());
    for (bx, bu) in blocks {
        if bx != xs {
            return Err(CliError::malformed(path, "every time block must use the same x column"));
        }
        fields.push(bu);
    }
    Ok(Snapshots {
        grid,
        params: None,
        times,
        fields,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeakDoc {
    pub x: f64,
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IkDoc {
    pub k: u32,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IkDriftDoc {
    pub k: u32,
    pub drift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriftDoc {
    pub mass: f64,
    pub momentum: f64,
    pub energy: f64,
    pub ik: Vec<IkDriftDoc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MollificationDoc {
    pub width: f64,
    pub max_change: f64,
    pub l2_change: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatusDoc {
    Completed,
    BlowUp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsDoc {
    pub params: ParamsDoc,
    pub status: StatusDoc,
    pub times: Vec<f64>,
    pub mass: Vec<f64>,
    pub momentum: Vec<f64>,
    pub energy: Vec<f64>,
    pub peak: Vec<Option<PeakDoc>>,
    pub ik: Vec<IkDoc>,
    pub drift: DriftDoc,
    pub mollification: Option<MollificationDoc>,
}

impl DiagnosticsDoc {
    pub fn new(
        record: &DiagnosticsRecord,
        params: ParamsDoc,
        status: StatusDoc,
        mollification: Option<MollificationDoc>,
    ) -> Self {
        let drift = record.drift();
        Self {
            params,
            status,
            times: record.times.clone(),
            mass: record.mass.clone(),
            momentum: record.momentum.clone(),
            energy: record.energy.clone(),
            peak: record
                .peak
                .iter()
                .map(|p| p.map(|(x, height)| PeakDoc { x, height }))
                .collect(),
            ik: record
                .ik
                .iter()
                .map(|s| IkDoc {
                    k: s.k,
                    values: s.values.clone(),
                })
                .collect(),
            drift: DriftDoc {
                mass: drift.mass,
                momentum: drift.momentum,
                energy: drift.energy,
                ik: drift.ik.iter().map(|&(k, drift)| IkDriftDoc { k, drift }).collect(),
            },
            mollification,
        }
    }
}

pub fn write_diagnostics_csv(path: &Path, record: &DiagnosticsRecord) -> CliResult<()> {
    let mut header: Vec<String> = DIAGNOSTICS_HEADER.iter().map(|s| s.to_string()).collect();
    header.extend(record.ik.iter().map(|s| ik_column(s.k)));
    let rows = (0..record.len()).map(|i| {
        let (px, pu) = match record.peak[i] {
            Some((x, u)) => (fmt_f64(x), fmt_f64(u)),
            None => (String::new(), String::new()),
        };
        let mut row = vec![
            fmt_f64(record.times[i]),
            fmt_f64(record.mass[i]),
            fmt_f64(record.momentum[i]),
            fmt_f64(record.energy[i]),
            px,
            pu,
        ];
        row.extend(record.ik.iter().map(|s| fmt_f64(s.values[i])));
        row
    });
    write_csv(path, &header, rows)
}

pub fn write_diagnostics_json(path: &Path, doc: &DiagnosticsDoc) -> CliResult<()> {
    write_json(path, doc)
}

/// One row of `invariants` output.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantRow {
    pub t: f64,
    pub mass: f64,
    pub momentum: f64,
    pub energy: f64,
    pub ik: Vec<f64>,
}

pub fn invariants_csv<W: Write>(out: W, orders: &[u32], rows: &[InvariantRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = INVARIANTS_HEADER.iter().map(|s| s.to_string()).collect();
    header.extend(orders.iter().map(|&k| ik_column(k)));
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![fmt_f64(r.t), fmt_f64(r.mass), fmt_f64(r.momentum), fmt_f64(r.energy)];
        rec.extend(r.ik.iter().map(|&v| fmt_f64(v)));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Profile metadata; printed as JSON and embedded in JSON profile files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileHeader {
    pub n: u32,
    pub m: u32,
    pub c: f64,
    pub u_max: f64,
    pub xi0: f64,
    pub kappa: f64,
    pub gamma: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDoc {
    pub header: ProfileHeader,
    pub xi: Vec<f64>,
    pub u: Vec<f64>,
}

pub fn write_profile_csv(path: &Path, xi: &[f64], u: &[f64]) -> CliResult<()> {
    let header: Vec<String> = PROFILE_HEADER.iter().map(|s| s.to_string()).collect();
    let rows = xi.iter().zip(u).map(|(&a, &b)| vec![fmt_f64(a), fmt_f64(b)]);
    write_csv(path, &header, rows)
}

pub fn write_profile_json(path: &Path, doc: &ProfileDoc) -> CliResult<()> {
    write_json(path, doc)
}
