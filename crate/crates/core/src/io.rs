//! Plain-text lamination and manifest formats.
//!
//! A lamination file has one atom per line, `angle1 angle2 weight`,
//! whitespace separated, angles in radians. Lines starting with `#` and
//! blank lines are skipped.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{QuakeError, Result};
use crate::lamination::{Atom, MeasuredLamination};

/// Formats `x` as a plain decimal with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let point = exp + 1;
    let mut out = String::from(sign);
    if point <= 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-point) as usize));
        out.push_str(&digits);
    } else if point as usize >= digits.len() {
        out.push_str(&digits);
        out.extend(std::iter::repeat_n('0', point as usize - digits.len()));
    } else {
        out.push_str(&digits[..point as usize]);
        out.push('.');
        out.push_str(&digits[point as usize..]);
    }
    out
}

pub fn parse_lamination(text: &str) -> Result<MeasuredLamination> {
    let mut atoms = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| QuakeError::Parse {
            line: i + 1,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(format!(
                "expected 3 fields, found {}",
                fields.len()
            )));
        }
        let mut vals = [0.0_f64; 3];
        for (v, f) in vals.iter_mut().zip(&fields) {
            *v = f
                .parse()
                .map_err(|_| parse_err(format!("not a number: {f:?}")))?;
            if !v.is_finite() {
                return Err(parse_err(format!("not finite: {f:?}")));
            }
        }
        atoms.push(Atom::new(vals[0], vals[1], vals[2]).map_err(|e| parse_err(e.to_string()))?);
    }
    MeasuredLamination::validate(atoms)
}

pub fn write_lamination(mu: &MeasuredLamination) -> String {
    let mut out = String::new();
    for a in mu.atoms() {
        let _ = writeln!(
            out,
            "{} {} {}",
            fmt17(a.geodesic.p()),
            fmt17(a.geodesic.q()),
            fmt17(a.weight)
        );
    }
    out
}

pub fn read_lamination(path: &Path) -> Result<MeasuredLamination> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| QuakeError::InvalidParameter(format!("{}: {e}", path.display())))?;
    parse_lamination(&text)
}

/// A sequence of lamination files followed by its limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub sequence: Vec<PathBuf>,
    pub limit: PathBuf,
}

/// Parses a manifest: one path per line, the last line `limit: path`.
/// Relative paths resolve against `base`.
pub fn parse_manifest(text: &str, base: &Path) -> Result<Manifest> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let Some((&(last_no, last), rest)) = lines.split_last() else {
        return Err(QuakeError::Parse {
            line: 0,
            message: "empty manifest".into(),
        });
    };
    let limit = last.strip_prefix("limit:").ok_or(QuakeError::Parse {
        line: last_no,
        message: "last entry must be `limit: <path>`".into(),
    })?;
    let resolve = |p: &str| base.join(p.trim());
    let mut sequence = Vec::with_capacity(rest.len());
    for &(no, l) in rest {
        if l.starts_with("limit:") {
            return Err(QuakeError::Parse {
                line: no,
                message: "`limit:` must be the last entry".into(),
            });
        }
        sequence.push(resolve(l));
    }
    Ok(Manifest {
        sequence,
        limit: resolve(limit),
    })
}
