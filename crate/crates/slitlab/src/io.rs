//! CSV tables with a `# config_hash=` first line, wavefunction files with
//! JSON sidecars. Numbers use the shortest round-trip decimal form.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use slitlab_core::grid::{Axis, Grid};
use slitlab_core::madelung::HydroFields;
use slitlab_core::tdse::ScreenPattern;
use slitlab_core::{Complex64, UnitsConfig, Wavefunction};

use crate::error::{AppError, AppResult};

pub const HASH_PREFIX: &str = "# config_hash=";

/// Column names plus rows, written after the hash line and any comments.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { comments: Vec::new(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn comment(mut self, line: impl Into<String>) -> Self {
        self.comments.push(line.into());
        self
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, hash: &str) -> String {
        let mut out = String::new();
        writeln!(out, "{HASH_PREFIX}{hash}").unwrap();
        for c in &self.comments {
            writeln!(out, "# {c}").unwrap();
        }
        writeln!(out, "{}", self.columns.join(",")).unwrap();
        for row in &self.rows {
            let mut first = true;
            for v in row {
                if !first {
                    out.push(',');
                }
                write!(out, "{v}").unwrap();
                first = false;
            }
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path, hash: &str) -> AppResult<()> {
        std::fs::write(path, self.render(hash)).map_err(|e| AppError::io(path, e))
    }

    /// Parses a table written by [`Table::write`]; returns it with its hash.
    pub fn read(path: &Path) -> AppResult<(String, Table)> {
        let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        let bad = |reason: String| AppError::Format { path: path.to_path_buf(), reason };
        let mut lines = text.lines();
        let hash = lines
            .next()
            .and_then(|l| l.strip_prefix(HASH_PREFIX))
            .ok_or_else(|| bad("missing config_hash line".into()))?
            .to_string();
        let mut table = Table { comments: Vec::new(), columns: Vec::new(), rows: Vec::new() };
        for (lineno, line) in lines.enumerate() {
            if let Some(c) = line.strip_prefix("# ") {
                table.comments.push(c.to_string());
            } else if table.columns.is_empty() {
                table.columns = line.split(',').map(str::to_string).collect();
            } else {
                let row = line
                    .split(',')
                    .map(|f| f.parse::<f64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| bad(format!("line {}: {e}", lineno + 2)))?;
                if row.len() != table.columns.len() {
                    return Err(bad(format!("line {}: expected {} fields", lineno + 2, table.columns.len())));
                }
                table.rows.push(row);
            }
        }
        Ok((hash, table))
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }
}

pub fn pattern_table(pattern: &ScreenPattern, comments: &[String]) -> Table {
    let mut t = Table::new(&["s", "intensity"]);
    t.comments.push(format!("x_screen={}", pattern.x_screen));
    for (k, v) in &pattern.metadata {
        t.comments.push(format!("{k}={v}"));
    }
    t.comments.extend(comments.iter().cloned());
    for (s, i) in pattern.s.iter().zip(&pattern.intensity) {
        t.push(vec![*s, *i]);
    }
    t
}

/// JSON sidecar describing a wavefunction CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSidecar {
    pub config_hash: String,
    pub time: f64,
    pub x: Axis,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Axis>,
    pub units: UnitsConfig,
}

pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

pub fn write_state(path: &Path, hash: &str, psi: &Wavefunction, units: &UnitsConfig) -> AppResult<()> {
    let grid = psi.grid();
    let planar = grid.dims() == 2;
    let mut t = Table::new(if planar { &["x", "y", "re", "im"] } else { &["x", "re", "im"] });
    for (i, z) in psi.data().iter().enumerate() {
        let (x, y) = grid.point(i);
        t.push(if planar { vec![x, y, z.re, z.im] } else { vec![x, z.re, z.im] });
    }
    t.write(path, hash)?;
    let side = StateSidecar { config_hash: hash.to_string(), time: psi.time(), x: grid.x, y: grid.y, units: *units };
    crate::report::write_json(&sidecar_path(path), &side)
}

/// Reads a state and its sidecar; a hash mismatch between the two is an error.
pub fn read_state(path: &Path) -> AppResult<(Wavefunction, StateSidecar)> {
    let (hash, table) = Table::read(path)?;
    let side_path = sidecar_path(path);
    let text = std::fs::read_to_string(&side_path).map_err(|e| AppError::io(&side_path, e))?;
    let side: StateSidecar = serde_json::from_str(&text)
        .map_err(|e| AppError::Format { path: side_path.clone(), reason: e.to_string() })?;
    if side.config_hash != hash {
        return Err(AppError::Format {
            path: path.to_path_buf(),
            reason: format!("config_hash {hash} does not match sidecar {}", side.config_hash),
        });
    }
    let grid = match side.y {
        Some(y) => Grid::plane(side.x, y),
        None => Grid::line(side.x),
    };
    let (re, im) = (table.column("re"), table.column("im"));
    let (Some(re), Some(im)) = (re, im) else {
        return Err(AppError::Format { path: path.to_path_buf(), reason: "missing re/im columns".into() });
    };
    let data = re.into_iter().zip(im).map(|(a, b)| Complex64::new(a, b)).collect();
    Ok((Wavefunction::new(grid, data, side.time)?, side))
}

pub fn hydro_table(h: &HydroFields) -> Table {
    let planar = h.grid.dims() == 2;
    let mut cols = vec!["x"];
    if planar {
        cols.push("y");
    }
    cols.extend(["n", "rho"]);
    if !planar {
        cols.push("S");
    }
    cols.push("vx");
    if planar {
        cols.push("vy");
    }
    cols.extend(["V_q", "mask"]);
    let mut t = Table::new(&cols).comment(format!("time={}", h.time)).comment(format!("floor={}", h.floor));
    for i in 0..h.density.len() {
        let (x, y) = h.grid.point(i);
        let mut row = vec![x];
        if planar {
            row.push(y);
        }
        row.extend([h.density[i], h.mass_density[i]]);
        if let Some(s) = &h.action {
            row.push(s[i]);
        }
        row.push(h.velocity_x[i]);
        if let Some(vy) = &h.velocity_y {
            row.push(vy[i]);
        }
        row.extend([h.quantum_potential[i], if h.mask[i] { 1.0 } else { 0.0 }]);
        t.push(row);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use slitlab_core::grid::make_uniform_grid;
    use slitlab_core::wavefunction::gaussian_packet;

    #[test]
    fn table_round_trips_exactly() {
        let mut t = Table::new(&["a", "b"]).comment("note=1");
        t.push(vec![0.1 + 0.2, -1e-300]);
        t.push(vec![f64::NAN, 12345.678901234567]);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        t.write(&p, "abc").unwrap();
        let (hash, back) = Table::read(&p).unwrap();
        assert_eq!(hash, "abc");
        assert_eq!(back.comments, t.comments);
        assert_eq!(back.rows[0], t.rows[0]);
        assert!(back.rows[1][0].is_nan());
        assert_eq!(back.rows[1][1], t.rows[1][1]);
    }

    #[test]
    fn state_round_trip_and_hash_check() {
        let g = make_uniform_grid(-5.0, 5.0, 32).unwrap();
        let psi = gaussian_packet(&g, 0.3, 1.7, 0.9).unwrap().psi;
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("psi.csv");
        write_state(&p, "h1", &psi, &UnitsConfig::default()).unwrap();
        let (back, side) = read_state(&p).unwrap();
        assert_eq!(back, psi);
        assert_eq!(side.config_hash, "h1");

        let text = std::fs::read_to_string(&p).unwrap().replacen("h1", "h2", 1);
        std::fs::write(&p, text).unwrap();
        assert!(matches!(read_state(&p), Err(AppError::Format { .. })));
    }
}
