//! Parsing of signal sets, fade states and grid files.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use lsnc_core::fade_state::{parse_fade_state, FadeState};
use lsnc_core::latin::LatinGrid;
use lsnc_core::signal_set::{parse_signal_set, SignalSet};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::Usage;

#[derive(Debug, Serialize, Deserialize)]
pub struct Point {
    pub re: f64,
    pub im: f64,
}

/// A grid file: rows with 0 for empty cells, optionally naming the signal
/// set and fade state it belongs to.
#[derive(Debug, Default, Serialize, Deserialize)]
pub struct GridFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signal: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fade: Option<String>,
    pub rows: Vec<Vec<u32>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GridJson {
    File(GridFile),
    Rows(Vec<Vec<u32>>),
}

pub struct LoadedGrid {
    pub file: GridFile,
    pub grid: LatinGrid,
    /// Directory the file lives in, used to resolve `custom:@` references.
    pub dir: PathBuf,
}

pub fn load_grid(path: &Path) -> Result<LoadedGrid> {
    let text = std::fs::read_to_string(path).with_context(|| Usage(format!("cannot read {}", path.display())))?;
    let file = match serde_json::from_str(&text).with_context(|| Usage(format!("{} is not a grid file", path.display())))? {
        GridJson::File(f) => f,
        GridJson::Rows(rows) => GridFile { rows, ..Default::default() },
    };
    let grid = LatinGrid::from_rows(&file.rows).map_err(|e| anyhow::Error::new(e).context(Usage(format!("bad grid in {}", path.display()))))?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(LoadedGrid { file, grid, dir })
}

/// `psk:M`, `qam:M`, `pam:M` or `custom:@file.json`. A relative custom file
/// is looked up in the working directory, then in `fallback`.
pub fn signal_set(spec: &str, fallback: Option<&Path>) -> Result<SignalSet> {
    let Some(file) = spec.strip_prefix("custom:@") else {
        return parse_signal_set(spec).map_err(|e| anyhow::Error::new(e).context(Usage(format!("bad signal set {spec:?}"))));
    };
    let mut path = PathBuf::from(file);
    if !path.exists() {
        if let Some(dir) = fallback {
            path = dir.join(file);
        }
    }
    let text = std::fs::read_to_string(&path).with_context(|| Usage(format!("cannot read {}", path.display())))?;
    let points: Vec<Point> = serde_json::from_str(&text).with_context(|| Usage(format!("{} is not a point list", path.display())))?;
    let points = points.iter().map(|p| Complex64::new(p.re, p.im)).collect();
    SignalSet::custom(points).map_err(|e| anyhow::Error::new(e).context(Usage(format!("bad signal set in {}", path.display()))))
}

pub fn fade_state(spec: &str, set: &SignalSet) -> Result<FadeState> {
    let s = parse_fade_state(spec, set.order()).map_err(|e| anyhow::Error::new(e).context(Usage(format!("bad fade state {spec:?}"))))?;
    if s.is_zero() {
        bail!(Usage("the fade state must be nonzero".into()));
    }
    Ok(s)
}

/// Signal set and fade state from the flags, falling back to the grid file.
pub fn context_of(signal: Option<&str>, fade: Option<&str>, grid: Option<&LoadedGrid>) -> Result<(SignalSet, FadeState)> {
    let file = grid.map(|g| &g.file);
    let signal = signal
        .or_else(|| file.and_then(|f| f.signal.as_deref()))
        .ok_or_else(|| anyhow::anyhow!(Usage("--signal is required".into())))?;
    let fade = fade
        .or_else(|| file.and_then(|f| f.fade.as_deref()))
        .ok_or_else(|| anyhow::anyhow!(Usage("--fade is required".into())))?;
    let set = signal_set(signal, grid.map(|g| g.dir.as_path()))?;
    let s = fade_state(fade, &set)?;
    Ok((set, s))
}
