use std::fmt::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Parses the statevector text format: line 1 holds `n`, followed by `2^n`
/// lines of `re im` in index order.
pub fn read_statevector(text: &str) -> Result<Vec<Complex64>> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let (first, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
    let n: usize = header
        .parse()
        .map_err(|_| Error::Parse { line: first, msg: format!("expected qubit count, found {header:?}") })?;
    if n == 0 || n > 40 {
        return Err(Error::Parse { line: first, msg: format!("unsupported qubit count {n}") });
    }
    let dim = 1usize << n;
    let mut out = Vec::with_capacity(dim);
    let mut last = first;
    for (line, l) in lines {
        last = line;
        if out.len() == dim {
            return Err(Error::Parse { line, msg: format!("more than {dim} amplitudes") });
        }
        let mut parts = l.split_whitespace();
        let mut num = |what: &str| -> Result<f64> {
            let tok = parts.next().ok_or(Error::Parse { line, msg: format!("missing {what} part") })?;
            tok.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or(Error::Parse { line, msg: format!("bad {what} part {tok:?}") })
        };
        let re = num("real")?;
        let im = num("imaginary")?;
        if parts.next().is_some() {
            return Err(Error::Parse { line, msg: "trailing tokens".into() });
        }
        out.push(Complex64::new(re, im));
    }
    if out.len() != dim {
        return Err(Error::Parse { line: last, msg: format!("expected {dim} amplitudes, found {}", out.len()) });
    }
    Ok(out)
}

/// Writes amplitudes with 17 significant digits.
pub fn write_statevector(v: &[Complex64]) -> Result<String> {
    if v.len() < 2 || !v.len().is_power_of_two() {
        return Err(Error::NotPowerOfTwo(v.len()));
    }
    let mut s = String::new();
    let _ = writeln!(s, "{}", v.len().trailing_zeros());
    for a in v {
        let _ = writeln!(s, "{:.16e} {:.16e}", a.re, a.im);
    }
    Ok(s)
}
