//! CSV, SVG and atomic file output.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use eptrap_core::series::Series;
use eptrap_core::sweeps::SweepResult;

use crate::CliError;

/// 17 significant digits, so values round-trip exactly.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes through a temporary sibling and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    let res = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if let Err(e) = res {
        let _ = fs::remove_file(&tmp);
        return Err(CliError::io(path, e));
    }
    Ok(())
}

pub fn branches_csv(r: &SweepResult) -> String {
    let mut s = String::from("param,branch,re_z,im_z,gamma,a_k,r_k\n");
    for (k, p) in r.params.iter().enumerate() {
        for b in &r.branches {
            let z = b.z[k];
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                num(p.re),
                b.label,
                num(z.re),
                num(z.im),
                num(-2.0 * z.im),
                num(b.a_k[k]),
                num(b.r_k[k])
            );
        }
    }
    s
}

pub fn series_csv(series: &Series) -> String {
    let mut s = format!("# {} vs {} [{}]\n", series.name, series.x_label, series.units);
    for (k, v) in &series.meta {
        let _ = writeln!(s, "# {k} = {v}");
    }
    s.push_str("x,value\n");
    for (x, y) in series.x.iter().zip(&series.values) {
        let _ = writeln!(s, "{},{}", num(*x), num(*y));
    }
    s
}

fn esc(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Single polyline with axes, extreme-value ticks and labels.
pub fn series_svg(series: &Series) -> String {
    let (w, h) = (640.0, 400.0);
    let (ml, mr, mt, mb) = (70.0, 20.0, 30.0, 50.0);
    let finite: Vec<(f64, f64)> =
        series.x.iter().zip(&series.values).filter(|(x, y)| x.is_finite() && y.is_finite()).map(|(x, y)| (*x, *y)).collect();
    let span = |v: &mut dyn Iterator<Item = f64>| {
        let (lo, hi) = v.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
        if !lo.is_finite() {
            (0.0, 1.0)
        } else if hi > lo {
            (lo, hi)
        } else {
            (lo - 0.5, hi + 0.5)
        }
    };
    let (x0, x1) = span(&mut finite.iter().map(|p| p.0));
    let (y0, y1) = span(&mut finite.iter().map(|p| p.1));
    let px = |x: f64| ml + (x - x0) / (x1 - x0) * (w - ml - mr);
    let py = |y: f64| h - mb - (y - y0) / (y1 - y0) * (h - mt - mb);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{ml},{mt} L{ml},{} L{},{}" fill="none" stroke="black"/>"#,
        h - mb,
        w - mr,
        h - mb
    );
    let text = |s: &mut String, x: f64, y: f64, anchor: &str, t: &str| {
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="12" text-anchor="{anchor}">{}</text>"#, esc(t));
    };
    text(&mut s, w / 2.0, 18.0, "middle", &series.name);
    text(&mut s, (ml + w - mr) / 2.0, h - 12.0, "middle", &format!("{} [{}]", series.x_label, series.units));
    text(&mut s, ml, h - mb + 16.0, "start", &format!("{x0:.4e}"));
    text(&mut s, w - mr, h - mb + 16.0, "end", &format!("{x1:.4e}"));
    text(&mut s, ml - 4.0, h - mb, "end", &format!("{y0:.3e}"));
    text(&mut s, ml - 4.0, mt + 10.0, "end", &format!("{y1:.3e}"));
    let mut pts = String::new();
    for (x, y) in &finite {
        let _ = write!(pts, "{:.2},{:.2} ", px(*x), py(*y));
    }
    let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="1.5"/>"#, pts.trim_end());
    s.push_str("</svg>\n");
    s
}

/// File stem for a series name.
pub fn file_stem(name: &str) -> String {
    name.chars().map(|ch| if ch.is_ascii_alphanumeric() || ch == '-' || ch == '_' { ch } else { '_' }).collect()
}

/// Writes `<stem>.csv` (and `<stem>.svg`) for every series; returns the CSV names.
pub fn write_series(dir: &Path, series: &[Series], svg: bool) -> Result<Vec<String>, CliError> {
    let mut names = Vec::new();
    for s in series {
        let stem = file_stem(&s.name);
        if names.contains(&format!("{stem}.csv")) {
            return Err(CliError::Config(format!("two series share the file name `{stem}`")));
        }
        write_atomic(&dir.join(format!("{stem}.csv")), series_csv(s).as_bytes())?;
        if svg {
            write_atomic(&dir.join(format!("{stem}.svg")), series_svg(s).as_bytes())?;
        }
        names.push(format!("{stem}.csv"));
    }
    Ok(names)
}
