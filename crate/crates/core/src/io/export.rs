use std::io::Write;
use std::path::Path;

use super::{IoError, PointStatus, RunOutput, RunReport, RunSpec};

fn io_err(path: &Path, e: impl std::fmt::Display) -> IoError {
    IoError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn report_json(report: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn write_report(report: &RunReport, path: &Path) -> Result<(), IoError> {
    std::fs::write(path, report_json(report)).map_err(|e| io_err(path, e))
}

/// One row per `(z, λ)`: the pulled-back frame entries, row-major, as re/im pairs.
/// Points that failed to solve get `NaN` entries.
pub fn write_frames_csv<W: Write>(out: &RunOutput, size: usize, sink: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(sink);
    let mut header = vec!["z_re".to_string(), "z_im".into(), "lambda_re".into(), "lambda_im".into()];
    for i in 0..size {
        for j in 0..size {
            header.push(format!("entry_{i}{j}_re"));
            header.push(format!("entry_{i}{j}_im"));
        }
    }
    w.write_record(&header)?;
    for rec in &out.records {
        for (k, l) in out.lambdas.iter().enumerate() {
            let mut row = vec![rec.z.re, rec.z.im, l.re, l.im];
            match rec.frames.get(k) {
                Some(f) => row.extend(f.entries().iter().flat_map(|x| [x.re, x.im])),
                None => row.extend(std::iter::repeat_n(f64::NAN, 2 * size * size)),
            }
            w.write_record(row.iter().map(|x| x.to_string()))?;
        }
    }
    w.flush()?;
    Ok(())
}

const FIELD_COLUMNS: [&str; 22] = [
    "z_re",
    "z_im",
    "status",
    "rank",
    "det_d",
    "cond_d",
    "d11",
    "d12_abs",
    "q11",
    "q_min_eig",
    "u_norm",
    "l11_re",
    "l11_im",
    "iwasawa",
    "reality",
    "membership",
    "twist",
    "consequence",
    "mc_pattern",
    "a12_proportionality",
    "lightlike_deviation",
    "message",
];

/// Per-point diagnostics for heatmaps.
pub fn write_fields_csv<W: Write>(out: &RunOutput, sink: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(FIELD_COLUMNS)?;
    let nan = f64::NAN;
    for rec in &out.records {
        let (status, message) = match &rec.status {
            PointStatus::Solved => ("ok".to_string(), String::new()),
            PointStatus::Failed { kind, message } => (kind.clone(), message.clone()),
        };
        let mut row = vec![rec.z.re.to_string(), rec.z.im.to_string(), status, rec.rank.to_string()];
        let nums: Vec<f64> = match &rec.solution {
            Some(s) => {
                let f = &s.factors;
                let q_eig = f.q.singular_values().last().copied().unwrap_or(nan);
                let mut v = vec![
                    f.d.det().map(|d| d.norm()).unwrap_or(nan),
                    f.cond_d,
                    f.d[(0, 0)].re,
                    f.d[(0, 1)].norm(),
                    f.q[(0, 0)].re,
                    q_eig,
                    f.u.norm_fro(),
                    s.l0[(0, 0)].re,
                    s.l0[(0, 0)].im,
                    rec.residuals.iwasawa,
                    rec.residuals.reality,
                    rec.residuals.membership,
                    rec.residuals.twist,
                    rec.consequence,
                ];
                match &rec.mc {
                    Some(mc) => v.extend([mc.worst_pattern(), mc.a12_proportionality]),
                    None => v.extend([nan, nan]),
                }
                v.push(rec.lightlike_deviation);
                v
            }
            None => vec![nan; FIELD_COLUMNS.len() - 5],
        };
        row.extend(nums.iter().map(|x| x.to_string()));
        row.push(message);
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn write_csv_file(
    path: &Path,
    f: impl FnOnce(std::io::BufWriter<std::fs::File>) -> Result<(), csv::Error>,
) -> Result<(), IoError> {
    let file = std::fs::File::create(path).map_err(|e| io_err(path, e))?;
    f(std::io::BufWriter::new(file)).map_err(|e| io_err(path, e))
}

/// Writes whichever of the report, frames and fields files the spec names.
pub fn export_outputs(out: &RunOutput, spec: &RunSpec) -> Result<(), IoError> {
    let o = &spec.outputs;
    if let Some(p) = &o.report_path {
        write_report(&out.report, p)?;
    }
    if let Some(p) = &o.frames_path {
        write_csv_file(p, |w| write_frames_csv(out, 2 * spec.m, w))?;
    }
    if let Some(p) = &o.fields_path {
        write_csv_file(p, |w| write_fields_csv(out, w))?;
    }
    Ok(())
}
