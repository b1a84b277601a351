//! Report directories `reports/<subcommand>/<timestamp>/` and their files.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use ixlab_core::Family;
use serde::Serialize;

/// Creates a fresh run directory under `base/reports/<subcommand>/`.
pub fn run_dir(base: &Path, subcommand: &str) -> Result<PathBuf> {
    let stamp = chrono::Utc::now().format("%Y%m%dT%H%M%S%.3fZ").to_string();
    let parent = base.join("reports").join(subcommand);
    let mut dir = parent.join(&stamp);
    let mut i = 1;
    while dir.exists() {
        dir = parent.join(format!("{stamp}-{i}"));
        i += 1;
    }
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Writes `witnesses/<stem>.fam` files in the given order.
pub fn write_families<'a>(dir: &Path, items: impl IntoIterator<Item = (String, &'a Family)>) -> Result<Vec<PathBuf>> {
    let wdir = dir.join("witnesses");
    let mut out = Vec::new();
    for (stem, fam) in items {
        let path = wdir.join(format!("{stem}.fam"));
        write_text(&path, &fam.to_text())?;
        out.push(path);
    }
    Ok(out)
}
