//! Plot-ready tables. CSV files carry `# key = value` header comments and
//! numbers with 17 significant digits; JSON files hold a `meta` object and
//! one array per column.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};
use surfcrack::SolveReport;

use crate::config::Format;
use crate::CliError;

/// Ordered metadata.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Meta(pub Vec<(String, MetaValue)>);

#[derive(Debug, Clone, PartialEq)]
pub enum MetaValue {
    Num(f64),
    Int(usize),
    Text(String),
}

impl Meta {
    pub fn num(mut self, k: &str, v: f64) -> Self {
        self.0.push((k.into(), MetaValue::Num(v)));
        self
    }

    pub fn int(mut self, k: &str, v: usize) -> Self {
        self.0.push((k.into(), MetaValue::Int(v)));
        self
    }

    pub fn text(mut self, k: &str, v: impl Into<String>) -> Self {
        self.0.push((k.into(), MetaValue::Text(v.into())));
        self
    }

    pub fn get(&self, k: &str) -> Option<&MetaValue> {
        self.0.iter().find(|(key, _)| key == k).map(|(_, v)| v)
    }
}

/// Column-oriented table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub meta: Meta,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else {
        format!("{v:.16e}")
    }
}

impl Table {
    pub fn new(meta: Meta, columns: &[&str]) -> Self {
        Self {
            meta,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.meta.0 {
            let v = match v {
                MetaValue::Num(x) => fmt_num(*x),
                MetaValue::Int(i) => i.to_string(),
                MetaValue::Text(t) => t.clone(),
            };
            let _ = writeln!(s, "# {k} = {v}");
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|v| fmt_num(*v)).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }

    /// NaN becomes `null`.
    pub fn to_json(&self) -> String {
        let mut meta = Map::new();
        for (k, v) in &self.meta.0 {
            let v = match v {
                MetaValue::Num(x) => serde_json::Number::from_f64(*x).map(Value::Number).unwrap_or(Value::Null),
                MetaValue::Int(i) => Value::from(*i),
                MetaValue::Text(t) => Value::from(t.as_str()),
            };
            meta.insert(k.clone(), v);
        }
        let mut root = Map::new();
        root.insert("meta".into(), Value::Object(meta));
        root.insert("columns".into(), Value::from(self.columns.clone()));
        for (k, c) in self.columns.iter().enumerate() {
            let col: Vec<Value> = self
                .rows
                .iter()
                .map(|r| serde_json::Number::from_f64(r[k]).map(Value::Number).unwrap_or(Value::Null))
                .collect();
            root.insert(c.clone(), Value::Array(col));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(root)).expect("serialisable");
        s.push('\n');
        s
    }

    /// Parses the CSV produced by [`Table::to_csv`]. Header values that parse
    /// as integers or floats come back as such.
    pub fn from_csv(text: &str) -> Result<Self, CliError> {
        let bad = |m: String| CliError::Io(std::io::Error::new(std::io::ErrorKind::InvalidData, m));
        let mut meta = Meta::default();
        let mut lines = text.lines();
        let header = loop {
            let line = lines.next().ok_or_else(|| bad("missing column header".into()))?;
            match line.strip_prefix("# ") {
                Some(kv) => {
                    let (k, v) = kv.split_once(" = ").ok_or_else(|| bad(format!("bad header line {line}")))?;
                    let value = if let Ok(i) = v.parse::<usize>() {
                        MetaValue::Int(i)
                    } else if let Ok(x) = v.parse::<f64>() {
                        MetaValue::Num(x)
                    } else {
                        MetaValue::Text(v.to_string())
                    };
                    meta.0.push((k.to_string(), value));
                }
                None => break line,
            }
        };
        let columns: Vec<String> = header.split(',').map(str::to_string).collect();
        let mut rows = Vec::new();
        for line in lines {
            let row = line
                .split(',')
                .map(|c| c.parse::<f64>().map_err(|e| bad(format!("{c}: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != columns.len() {
                return Err(bad(format!("row has {} cells, expected {}", row.len(), columns.len())));
            }
            rows.push(row);
        }
        Ok(Self { meta, columns, rows })
    }

    pub fn write(&self, dir: &Path, stem: &str, format: Format) -> Result<PathBuf, CliError> {
        let path = dir.join(format!("{stem}.{}", format.extension()));
        let body = match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        };
        std::fs::write(&path, body)?;
        Ok(path)
    }
}

/// Metadata shared by every solver output.
pub fn report_meta(base: Meta, report: &SolveReport) -> Meta {
    let p = report.profile.params();
    base.num("alpha", p.alpha)
        .num("beta", p.beta)
        .num("gamma", p.gamma)
        .int("n", report.profile.n)
        .num("max_f", report.max_f)
        .num("max_df", report.max_df)
        .num("energy", report.energy)
        .num("strong_residual_max", report.strong_residual_max)
        .num("weak_residual_max", report.weak_residual_max)
        .num("condition", report.profile.condition.unwrap_or(f64::NAN))
        .text("flagged", report.flagged.to_string())
}

/// Columns `x, f, f', f'', strong residual`.
pub fn profile_table(meta: Meta, report: &SolveReport) -> Table {
    let prof = &report.profile;
    let mut t = Table::new(report_meta(meta, report), &["x", "f", "df", "d2f", "strong_residual"]);
    for (i, x) in prof.nodes().iter().enumerate() {
        t.push(vec![*x, prof.values()[i], prof.df[i], prof.d2f[i], prof.strong_residual[i]]);
    }
    t
}

/// Writes the profile table of `report` as `<stem>.csv` or `<stem>.json`.
pub fn emit_profile(report: &SolveReport, meta: Meta, dir: &Path, stem: &str, format: Format) -> Result<PathBuf, CliError> {
    profile_table(meta, report).write(dir, stem, format)
}
