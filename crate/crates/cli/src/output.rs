//! CSV tables, plot scripts and atomic file writes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{CliError, Result};

/// A file produced by a scenario, not yet on disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

impl Artifact {
    pub fn new(name: impl Into<String>, contents: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            contents: contents.into(),
        }
    }
}

/// Header row plus one row per sample, every value as `{:.16e}`.
pub fn csv_table(header: &[&str], columns: &[&[f64]]) -> String {
    assert_eq!(header.len(), columns.len());
    let n = columns.first().map_or(0, |c| c.len());
    assert!(columns.iter().all(|c| c.len() == n), "ragged columns");
    let mut s = header.join(",");
    s.push('\n');
    for i in 0..n {
        let row: Vec<String> = columns.iter().map(|c| format!("{:.16e}", c[i])).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

/// One panel of a plot script: a CSV and the `(column, title)` pairs drawn
/// against its first column.
#[derive(Debug, Clone, Copy)]
pub struct Panel<'a> {
    pub csv: &'a str,
    pub title: &'a str,
    pub columns: &'a [(usize, &'a str)],
}

/// gnuplot script rendering `panels` side by side into `png`.
pub fn gnuplot_script(png: &str, xlabel: &str, ylabel: &str, xrange: Option<(f64, f64)>, panels: &[Panel]) -> String {
    let mut s = format!(
        "set datafile separator ','\n\
         set terminal pngcairo size {},600\n\
         set output '{png}'\n\
         set xlabel '{xlabel}'\n\
         set ylabel '{ylabel}'\n\
         set key top right\n",
        600 * panels.len().max(1) + 300
    );
    if let Some((lo, hi)) = xrange {
        s.push_str(&format!("set xrange [{lo}:{hi}]\n"));
    }
    if panels.len() > 1 {
        s.push_str(&format!("set multiplot layout 1,{}\n", panels.len()));
    }
    for p in panels {
        let plots: Vec<String> = p
            .columns
            .iter()
            .map(|(c, title)| format!("'{}' using 1:{c} with lines title '{title}'", p.csv))
            .collect();
        s.push_str(&format!("set title '{}'\nplot {}\n", p.title, plots.join(", \\\n     ")));
    }
    if panels.len() > 1 {
        s.push_str("unset multiplot\n");
    }
    s
}

/// Writes `contents` to a temporary sibling and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    let result = fs::File::create(&tmp)
        .and_then(|mut f| {
            f.write_all(contents)?;
            f.sync_all()
        })
        .and_then(|_| fs::rename(&tmp, path));
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(CliError::io(path, e));
    }
    Ok(())
}

/// Writes every artifact into `dir`; returns the paths written.
pub fn write_all(dir: &Path, artifacts: &[Artifact]) -> Result<Vec<PathBuf>> {
    artifacts
        .iter()
        .map(|a| {
            let p = dir.join(&a.name);
            write_atomic(&p, a.contents.as_bytes()).map(|_| p)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_uses_full_precision() {
        let s = csv_table(&["t", "x"], &[&[0.0, 1.5], &[0.1, -2.0]]);
        assert_eq!(s, "t,x\n0.0000000000000000e0,1.0000000000000001e-1\n1.5000000000000000e0,-2.0000000000000000e0\n");
        // 17 significant digits round-trip.
        let v: f64 = "1.0000000000000001e-1".parse().unwrap();
        assert_eq!(v, 0.1);
    }

    #[test]
    fn plot_script_names_files() {
        let panels = [
            Panel { csv: "a.csv", title: "a", columns: &[(2, "in"), (3, "out")] },
            Panel { csv: "b.csv", title: "b", columns: &[(2, "in")] },
        ];
        let g = gnuplot_script("a.png", "t", "Pi", Some((0.0, 5.0)), &panels);
        assert!(g.contains("'a.csv' using 1:3 with lines title 'out'"));
        assert!(g.contains("'b.csv' using 1:2"));
        assert!(g.contains("set output 'a.png'"));
        assert!(g.contains("set multiplot layout 1,2"));
        assert!(g.contains("set xrange [0:5]"));
    }
}
