//! FCIDUMP-style integral files.
//!
//! ```text
//! &FCI NORB=2 NELEC=2 MS2=0
//! &END
//!  0.6757  1 1 1 1     (ij|kl), 1-indexed spatial orbitals
//! -1.2563  1 1 0 0     h_ij
//!  0.7200  0 0 0 0     scalar shift
//! ```
//!
//! The header may span several lines and ends at `&END` or `/`. A single-line
//! header without terminator is accepted as well. Each integral may be given
//! once per symmetry class; repeating it with a different value is a symmetry
//! violation. Lines `e i 0 0 0` (orbital energies) are ignored.

use crate::prelude::*;
use crate::{Error, Result};

use super::{FermionHamiltonian, SYMMETRY_TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FcidumpHeader {
    /// Spatial orbitals; the Hamiltonian has twice as many modes.
    pub n_orbitals: usize,
    pub n_electrons: usize,
    pub ms2: i64,
}

fn header_value(header: &str, key: &str) -> Option<String> {
    let upper = header.to_ascii_uppercase();
    let mut search = 0;
    while let Some(pos) = upper[search..].find(key) {
        let start = search + pos;
        let before_ok = start == 0 || !upper.as_bytes()[start - 1].is_ascii_alphanumeric();
        let rest = upper[start + key.len()..].trim_start();
        if before_ok && rest.starts_with('=') {
            let value: String = rest[1..]
                .trim_start()
                .chars()
                .take_while(|c| c.is_ascii_alphanumeric() || *c == '-' || *c == '+')
                .collect();
            return Some(value);
        }
        search = start + key.len();
    }
    None
}

pub fn parse_fcidump(text: &str) -> Result<FermionHamiltonian> {
    let mut lines = text.lines().enumerate().peekable();
    let mut header = String::new();
    // header
    loop {
        let Some((i, line)) = lines.next() else {
            return Err(Error::parse(0, "missing &FCI header"));
        };
        let trimmed = line.trim();
        if header.is_empty() {
            if trimmed.is_empty() {
                continue;
            }
            if !trimmed.to_ascii_uppercase().starts_with("&FCI") {
                return Err(Error::parse(i + 1, "expected `&FCI` header"));
            }
        }
        header.push_str(trimmed);
        header.push(' ');
        let upper = trimmed.to_ascii_uppercase();
        if upper.ends_with("&END") || upper == "/" || upper.ends_with('/') {
            break;
        }
        // Single-line header followed directly by data.
        if let Some(&(_, next)) = lines.peek() {
            let looks_numeric = next
                .split_whitespace()
                .next()
                .is_some_and(|tok| tok.parse::<f64>().is_ok());
            if looks_numeric && header_value(&header, "NORB").is_some() {
                break;
            }
        }
    }

    let norb: usize = header_value(&header, "NORB")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::parse(1, "header lacks NORB"))?;
    let nelec: usize = header_value(&header, "NELEC")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::parse(1, "header lacks NELEC"))?;
    let ms2: i64 = header_value(&header, "MS2")
        .map(|v| v.parse())
        .transpose()
        .map_err(|_| Error::parse(1, "bad MS2"))?
        .unwrap_or(0);
    if norb == 0 {
        return Err(Error::parse(1, "NORB must be positive"));
    }
    let header = FcidumpHeader {
        n_orbitals: norb,
        n_electrons: nelec,
        ms2,
    };

    let n = norb;
    let mut h1: Vec<Option<f64>> = vec![None; n * n];
    let mut eri: Vec<Option<f64>> = vec![None; n.pow(4)];
    let mut shift = 0.0;
    let idx = |i: usize, j: usize, k: usize, l: usize| ((i * n + j) * n + k) * n + l;

    for (i, line) in lines {
        let line_no = i + 1;
        let body = line.trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(Error::parse(line_no, "expected `value i j k l`"));
        }
        let value: f64 = fields[0]
            .replace(['D', 'd'], "E")
            .parse()
            .map_err(|_| Error::parse(line_no, format!("bad value {:?}", fields[0])))?;
        let mut ix = [0usize; 4];
        for (slot, f) in ix.iter_mut().zip(&fields[1..]) {
            *slot = f
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad index {f:?}")))?;
            if *slot > n {
                return Err(Error::parse(
                    line_no,
                    format!("index {slot} exceeds NORB={n}"),
                ));
            }
        }
        let [p, q, r, s] = ix;
        let assign = |slot: &mut Option<f64>, what: String| -> Result<()> {
            match slot {
                Some(old) if (*old - value).abs() > SYMMETRY_TOLERANCE => {
                    Err(Error::Symmetry(format!(
                        "line {line_no}: {what} = {value} conflicts with symmetric partner {old}"
                    )))
                }
                _ => {
                    *slot = Some(value);
                    Ok(())
                }
            }
        };
        match (p, q, r, s) {
            (0, 0, 0, 0) => shift += value,
            (p, 0, 0, 0) if p > 0 => {}
            (p, q, 0, 0) if p > 0 && q > 0 => {
                let (a, b) = (p - 1, q - 1);
                assign(&mut h1[a * n + b], format!("h[{p}][{q}]"))?;
                if a != b {
                    assign(&mut h1[b * n + a], format!("h[{p}][{q}]"))?;
                }
            }
            (p, q, r, s) if p > 0 && q > 0 && r > 0 && s > 0 => {
                let (a, b, c, d) = (p - 1, q - 1, r - 1, s - 1);
                let mut perms = [
                    idx(a, b, c, d),
                    idx(b, a, c, d),
                    idx(a, b, d, c),
                    idx(b, a, d, c),
                    idx(c, d, a, b),
                    idx(d, c, a, b),
                    idx(c, d, b, a),
                    idx(d, c, b, a),
                ];
                perms.sort_unstable();
                let mut last = usize::MAX;
                for k in perms {
                    if k != last {
                        assign(&mut eri[k], format!("({p}{q}|{r}{s})"))?;
                        last = k;
                    }
                }
            }
            _ => return Err(Error::parse(line_no, "malformed index pattern")),
        }
    }

    let h1: Vec<f64> = h1.into_iter().map(|v| v.unwrap_or(0.0)).collect();
    let eri: Vec<f64> = eri.into_iter().map(|v| v.unwrap_or(0.0)).collect();
    let mut h = FermionHamiltonian::from_spatial(n, &h1, &eri, shift)?;
    h.set_n_electrons(Some(header.n_electrons));
    Ok(h)
}
