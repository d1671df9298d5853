use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::Value;

/// CSV table with a fixed header; floats are written with 17 significant digits.
pub struct Table {
    header: Vec<&'static str>,
    body: String,
}

pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(i64::from(v))
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

pub fn float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), body: String::new() }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        assert_eq!(cells.len(), self.header.len(), "row width");
        let fields: Vec<String> = cells
            .into_iter()
            .map(|c| match c {
                Cell::Int(i) => i.to_string(),
                Cell::Float(x) => float(x),
                Cell::Bool(b) => b.to_string(),
                Cell::Text(t) if t.contains([',', '"', '\n']) => format!("\"{}\"", t.replace('"', "\"\"")),
                Cell::Text(t) => t,
            })
            .collect();
        let _ = writeln!(self.body, "{}", fields.join(","));
    }

    pub fn render(&self) -> String {
        format!("{}\n{}", self.header.join(","), self.body)
    }
}

/// Where results go: files under `--out`, or the CSV on stdout.
pub struct Sink {
    dir: Option<PathBuf>,
    pub quiet: bool,
}

impl Sink {
    pub fn new(dir: Option<&Path>, quiet: bool) -> Result<Self> {
        if let Some(d) = dir {
            fs::create_dir_all(d).with_context(|| format!("creating {}", d.display()))?;
        }
        Ok(Sink { dir: dir.map(Path::to_path_buf), quiet })
    }

    pub fn csv(&self, name: &str, table: &Table) -> Result<()> {
        match &self.dir {
            Some(d) => {
                let path = d.join(format!("{name}.csv"));
                fs::write(&path, table.render()).with_context(|| format!("writing {}", path.display()))
            }
            None => {
                print!("{}", table.render());
                Ok(())
            }
        }
    }

    /// serde_json maps are ordered by key, so the output is sorted.
    pub fn json(&self, name: &str, value: &Value) -> Result<()> {
        let text = serde_json::to_string_pretty(value)? + "\n";
        match &self.dir {
            Some(d) => {
                let path = d.join(format!("{name}.json"));
                fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
            }
            None if !self.quiet => {
                eprint!("{text}");
                Ok(())
            }
            None => Ok(()),
        }
    }

    pub fn note(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}
