//! CSV tables and run manifests.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use strongsum::lab::{CorollaryReport, RatioReport};

use crate::config::RunConfig;
use crate::CliError;

/// 17 significant digits; empty for NaN.
pub fn num(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        format!("{v:.16e}")
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// An in-memory CSV table.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Result<Self, CliError> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header)?;
        Ok(Self { writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields)?;
        Ok(())
    }

    pub fn into_bytes(self) -> Result<Vec<u8>, CliError> {
        self.writer
            .into_inner()
            .map_err(|e| CliError::Config(format!("csv buffer: {e}")))
    }
}

pub const REPORT_HEADER: [&str; 11] = [
    "inequality_id",
    "function",
    "x",
    "params",
    "lhs",
    "rhs",
    "ratio",
    "constant",
    "status",
    "verdict",
    "extras",
];

pub fn report_rows(table: &mut Table, report: &RatioReport) -> Result<(), CliError> {
    for r in &report.rows {
        let params = r
            .config
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";");
        let extras = r.extras.iter().map(|(k, v)| format!("{k}={}", num(*v))).collect::<Vec<_>>().join(";");
        table.row([
            report.inequality_id.label().to_string(),
            r.config.function.clone(),
            num(r.config.x),
            params,
            num(r.lhs),
            num(r.rhs),
            opt(r.ratio),
            opt(r.constant),
            r.status.label().to_string(),
            report.verdict.label().to_string(),
            extras,
        ])?;
    }
    Ok(())
}

pub fn corollary_table(report: &CorollaryReport) -> Result<Table, CliError> {
    let ms = report.rows.first().map(|r| r.means.len()).unwrap_or(0);
    let mut header: Vec<String> = ["function", "x", "class"].map(String::from).to_vec();
    header.extend((1..=ms).map(|m| format!("h_m{m}")));
    header.extend(["decay_ratio", "decay_slope", "status"].map(String::from));
    let refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut t = Table::new(&refs)?;
    for r in &report.rows {
        let mut f = vec![r.function.clone(), num(r.x), r.class.label().to_string()];
        f.extend(r.means.iter().map(|(_, h)| num(*h)));
        f.extend([num(r.decay_ratio), opt(r.decay_slope), r.status.label().to_string()]);
        t.row(f)?;
    }
    Ok(t)
}

/// Fails early when the output file cannot be created.
pub fn check_out(out: Option<&Path>) -> Result<(), CliError> {
    if let Some(p) = out {
        let dir = match p.parent() {
            Some(d) if !d.as_os_str().is_empty() => d,
            _ => Path::new("."),
        };
        if !dir.is_dir() {
            return Err(CliError::Config(format!("output directory `{}` does not exist", dir.display())));
        }
    }
    Ok(())
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest");
    PathBuf::from(s)
}

/// Replayable `key = value` lines followed by `#` result lines.
pub fn manifest(cfg: &RunConfig, results: &[String]) -> String {
    let mut s = format!(
        "# strongsum {} run manifest\n# replay with: strongsum {} --config <this file>\n",
        env!("CARGO_PKG_VERSION"),
        cfg.command
    );
    for (k, v) in cfg.entries().filter(|(k, _)| *k != "out") {
        s.push_str(&format!("{k} = {v}\n"));
    }
    for r in results {
        s.push_str(&format!("# {r}\n"));
    }
    s
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Writes the table to `out` (with a manifest) or to stdout.
pub fn emit(cfg: &RunConfig, table: Table, results: &[String]) -> Result<(), CliError> {
    let bytes = table.into_bytes()?;
    match cfg.get("out") {
        Some(p) => {
            let p = Path::new(p);
            write_file(p, &bytes)?;
            write_file(&manifest_path(p), manifest(cfg, results).as_bytes())
        }
        None => std::io::stdout().write_all(&bytes).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, std::f64::consts::PI] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(num(f64::NAN), "");
        assert_eq!(num(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn fields_with_commas_are_quoted() {
        let mut t = Table::new(&["a", "b"]).unwrap();
        t.row(["shifted:4,32", "1"]).unwrap();
        let s = String::from_utf8(t.into_bytes().unwrap()).unwrap();
        assert_eq!(s, "a,b\n\"shifted:4,32\",1\n");
    }
}
