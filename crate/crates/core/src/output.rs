//! Serialization of computed results to CSV and JSON, plus atomic file
//! output.
//!
//! Floats are written in Rust's shortest round-trip decimal form, so parsing
//! a data file back reproduces the computed values exactly and identical
//! inputs give byte-identical files.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use crate::atom::DensityMatrix;
use crate::spectra::{LinewidthReport, Peak, Spectrum, SpectrumRow};

/// Exact column set and order of the spectrum writers.
pub const SPECTRUM_HEADER: &str = "delta_p,chi_re,chi_im,phase,kappa,transmission";

pub fn spectrum_to_csv(s: &Spectrum) -> String {
    let mut out = String::with_capacity(64 * (s.rows.len() + 1));
    out.push_str(SPECTRUM_HEADER);
    out.push('\n');
    for r in &s.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.delta_p, r.chi_re, r.chi_im, r.phase, r.kappa, r.transmission
        ));
    }
    out
}

pub fn spectrum_to_json(s: &Spectrum) -> String {
    let mut text = serde_json::to_string_pretty(&s.rows).expect("spectrum serializes");
    text.push('\n');
    text
}

/// Parse a CSV produced by [`spectrum_to_csv`] back into rows.
pub fn spectrum_from_csv(text: &str) -> Result<Spectrum, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == SPECTRUM_HEADER => {}
        other => return Err(format!("unexpected header {other:?}")),
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(format!("row {i}: expected 6 fields, got {}", fields.len()));
        }
        let mut v = [0f64; 6];
        for (slot, field) in v.iter_mut().zip(&fields) {
            *slot = field
                .parse()
                .map_err(|e| format!("row {i}: bad float {field:?}: {e}"))?;
        }
        rows.push(SpectrumRow {
            delta_p: v[0],
            chi_re: v[1],
            chi_im: v[2],
            phase: v[3],
            kappa: v[4],
            transmission: v[5],
        });
    }
    Ok(Spectrum { rows })
}

pub const PEAKS_HEADER: &str = "position,height,fwhm,left_half,right_half";

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn peaks_to_csv(peaks: &[Peak]) -> String {
    let mut out = String::new();
    out.push_str(PEAKS_HEADER);
    out.push('\n');
    for p in peaks {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            p.position,
            p.height,
            opt(p.fwhm),
            opt(p.left_half),
            opt(p.right_half)
        ));
    }
    out
}

pub fn peaks_to_json(peaks: &[Peak]) -> String {
    let mut text = serde_json::to_string_pretty(peaks).expect("peaks serialize");
    text.push('\n');
    text
}

pub fn report_to_csv(r: &LinewidthReport) -> String {
    format!(
        "fwhm_s,fwhm_d,measured_ratio,eq4_ratio\n{},{},{},{}\n",
        r.fwhm_s, r.fwhm_d, r.measured_ratio, r.eq4_ratio
    )
}

pub fn report_to_json(r: &LinewidthReport) -> String {
    let mut text = serde_json::to_string_pretty(r).expect("report serializes");
    text.push('\n');
    text
}

/// Density matrix as one `j,k,re,im` row per element.
pub fn density_to_csv(rho: &DensityMatrix) -> String {
    let mut out = String::from("j,k,re,im\n");
    for j in 0..4 {
        for k in 0..4 {
            let v: Complex64 = rho.element(j, k);
            out.push_str(&format!("{},{},{},{}\n", j, k, v.re, v.im));
        }
    }
    out
}

/// Density matrix as a 4×4 array of `[re, im]` pairs.
pub fn density_to_json(rho: &DensityMatrix) -> String {
    let rows: Vec<Vec<[f64; 2]>> = (0..4)
        .map(|j| {
            (0..4)
                .map(|k| {
                    let v = rho.element(j, k);
                    [v.re, v.im]
                })
                .collect()
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&rows).expect("density serializes");
    text.push('\n');
    text
}

/// Write via a temporary file in the destination directory and rename into
/// place, so a failed run never leaves a partial output file.
pub fn atomic_write(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty());
    let file_name = path
        .file_name()
        .ok_or_else(|| std::io::Error::new(std::io::ErrorKind::InvalidInput, "no file name"))?;
    let mut tmp = std::path::PathBuf::from(dir.unwrap_or_else(|| Path::new(".")));
    tmp.push(format!(".{}.tmp", file_name.to_string_lossy()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RunConfig;
    use crate::spectra::sweep;

    #[test]
    fn csv_round_trip_is_exact() {
        let c = RunConfig::default();
        let grid = crate::spectra::ScanGrid {
            points: 41,
            refine_windows: false,
            ..c.scan
        };
        let s = sweep(&grid, &c.atom, &c.model, &c.cavity).unwrap();
        let text = spectrum_to_csv(&s);
        assert!(text.starts_with(SPECTRUM_HEADER));
        let back = spectrum_from_csv(&text).unwrap();
        assert_eq!(s, back); // bitwise: shortest round-trip formatting
    }

    #[test]
    fn peaks_csv_has_empty_fields_for_missing_fwhm() {
        let peaks = [Peak {
            position: 1.0,
            height: 2.0,
            fwhm: None,
            left_half: None,
            right_half: None,
        }];
        let text = peaks_to_csv(&peaks);
        assert!(text.contains("1,2,,,\n"));
    }

    #[test]
    fn density_csv_lists_all_sixteen_elements() {
        let rho = DensityMatrix::pure(1);
        let text = density_to_csv(&rho);
        assert_eq!(text.lines().count(), 17);
        assert!(text.contains("1,1,1,0"));
    }

    #[test]
    fn atomic_write_replaces_and_leaves_no_temp() {
        let dir = std::env::temp_dir().join("tripodcav-output-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("data.csv");
        atomic_write(&path, "one\n").unwrap();
        atomic_write(&path, "two\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "two\n");
        let leftovers: Vec<_> = std::fs::read_dir(&dir)
            .unwrap()
            .filter_map(|e| e.ok())
            .filter(|e| e.file_name().to_string_lossy().ends_with(".tmp"))
            .collect();
        assert!(leftovers.is_empty());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
