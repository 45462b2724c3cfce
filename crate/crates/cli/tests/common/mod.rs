#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use hdi_core::ingest::{write_wide_csv, IndicatorTable, WideCsvFormat};
use hdi_core::kmeans::Point;

pub struct Output {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

pub fn hdi<S: AsRef<str>>(args: &[S]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hdi").chain(args.iter().map(AsRef::as_ref));
    let code = hdi_cli::run(argv, &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Wide CSV holding HDI and GDP for `year` at the given points.
pub fn write_points_csv(path: &Path, points: &[Point], year: i32) {
    let mut b = IndicatorTable::builder();
    for (i, p) in points.iter().enumerate() {
        let region = format!("Region {i:03}, Kota");
        b.insert(&region, "Human Development Index", year, Some(p[0]))
            .unwrap();
        b.insert(&region, "Gross Domestic Product", year, Some(p[1]))
            .unwrap();
    }
    let mut buf = Vec::new();
    write_wide_csv(&b.finish(), &mut buf, &WideCsvFormat::default()).unwrap();
    fs::write(path, buf).unwrap();
}

/// Relative path -> contents for every file below `root`.
pub fn tree(root: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                out.push((
                    path.strip_prefix(root).unwrap().to_path_buf(),
                    fs::read(&path).unwrap(),
                ));
            }
        }
    }
    out.sort();
    out
}
