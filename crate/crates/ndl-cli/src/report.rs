//! Report files. CSV reports start with a `# metadata` comment line carrying
//! the tool version and a timestamp; everything below it is byte-stable for
//! a fixed config. JSON reports carry no timestamp at all and are fully
//! deterministic (object keys serialize sorted).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use crate::config::CliError;

fn metadata_line() -> String {
    let stamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!(
        "# metadata tool=ndl version={} unix_time={stamp}",
        env!("CARGO_PKG_VERSION")
    )
}

pub fn ensure_out_dir(out: &Path) -> Result<(), CliError> {
    fs::create_dir_all(out)
        .map_err(|e| CliError::Invalid(format!("output directory {}: {e}", out.display())))
}

pub fn write_csv(
    out: &Path,
    name: &str,
    header: &str,
    rows: &[String],
) -> Result<PathBuf, CliError> {
    ensure_out_dir(out)?;
    let path = out.join(name);
    let mut buf = Vec::with_capacity(rows.len() * 64 + 128);
    writeln!(buf, "{}", metadata_line()).expect("write to vec");
    writeln!(buf, "{header}").expect("write to vec");
    for row in rows {
        writeln!(buf, "{row}").expect("write to vec");
    }
    fs::write(&path, buf).map_err(|e| CliError::Operation(format!("{}: {e}", path.display())))?;
    Ok(path)
}

pub fn write_json(out: &Path, name: &str, value: &serde_json::Value) -> Result<PathBuf, CliError> {
    ensure_out_dir(out)?;
    let path = out.join(name);
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Operation(format!("serialize {name}: {e}")))?;
    text.push('\n');
    fs::write(&path, text).map_err(|e| CliError::Operation(format!("{}: {e}", path.display())))?;
    Ok(path)
}

/// Lower median of an unsorted sample.
pub fn median_usize(values: &[usize]) -> usize {
    assert!(!values.is_empty());
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    sorted[(sorted.len() - 1) / 2]
}
