//! Arrangement ingestion: one table file with `gamma` (row-major integer
//! matrix), `theta` (character lift, one entry per row), and `xi` (grading
//! cocharacter). TOML is the native dialect; a file whose first non-blank
//! byte is `{` is read as JSON instead.

use std::path::Path;

use qdual::arrangement::Arrangement;
use serde::Deserialize;

/// On-disk shape shared by both dialects.
#[derive(Debug, Deserialize)]
pub struct RawInput {
    pub gamma: Vec<Vec<i64>>,
    pub theta: Vec<i64>,
    pub xi: Vec<i64>,
}

/// Reads and validates an arrangement; every failure is an input error.
pub fn load_arrangement(path: &Path) -> Result<Arrangement, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let raw: RawInput = if text.trim_start().starts_with('{') {
        serde_json::from_str(&text).map_err(|e| format!("invalid JSON input: {e}"))?
    } else {
        toml::from_str(&text).map_err(|e| format!("invalid TOML input: {e}"))?
    };
    Arrangement::new(raw.gamma, raw.theta, raw.xi).map_err(|e| e.to_string())
}

/// Renders an arrangement in the TOML input dialect, so emitted duals load
/// back through [`load_arrangement`].
pub fn render_toml(arr: &Arrangement) -> String {
    let row = |r: &[i64]| {
        let body: Vec<String> = r.iter().map(|x| x.to_string()).collect();
        format!("[{}]", body.join(", "))
    };
    let rows: Vec<String> = arr.gamma().iter().map(|r| row(r)).collect();
    format!(
        "gamma = [{}]\ntheta = {}\nxi = {}\n",
        rows.join(", "),
        row(arr.theta_lift()),
        row(arr.xi()),
    )
}
