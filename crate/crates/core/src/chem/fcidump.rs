//! FCIDUMP reader.
//!
//! The header is a Fortran namelist (`&FCI NORB=.., NELEC=.., MS2=.., ORBSYM=.., ISYM=.. &END`,
//! `/` or `$END` also accepted). Each following line is `value p q r s` with
//! 1-based orbital indices: `(0,0,0,0)` is the core energy, `(p,q,0,0)` a
//! one-body integral, `(p,0,0,0)` an orbital energy (ignored) and anything
//! else a two-electron integral `(pq|rs)` in chemist order.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};

/// Spatial-orbital integrals, chemist notation for the two-body tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct MolecularIntegrals {
    pub n_orbitals: usize,
    pub n_electrons: usize,
    pub ms2: i64,
    pub core_energy: f64,
    pub orbsym: Vec<i64>,
    pub isym: Option<i64>,
    one_body: Vec<f64>,
    two_body: Vec<f64>,
}

impl MolecularIntegrals {
    /// All-zero integrals, for assembling test fixtures by hand.
    pub fn zeros(n_orbitals: usize, n_electrons: usize) -> Self {
        Self {
            n_orbitals,
            n_electrons,
            ms2: 0,
            core_energy: 0.0,
            orbsym: vec![1; n_orbitals],
            isym: None,
            one_body: vec![0.0; n_orbitals.pow(2)],
            two_body: vec![0.0; n_orbitals.pow(4)],
        }
    }

    /// `h_pq`, 0-based.
    pub fn h(&self, p: usize, q: usize) -> f64 {
        self.one_body[p * self.n_orbitals + q]
    }

    /// `(pq|rs)`, 0-based.
    pub fn g(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        self.two_body[self.g_index(p, q, r, s)]
    }

    fn g_index(&self, p: usize, q: usize, r: usize, s: usize) -> usize {
        let n = self.n_orbitals;
        ((p * n + q) * n + r) * n + s
    }

    /// Sets `h_pq` and `h_qp`.
    pub fn set_h(&mut self, p: usize, q: usize, value: f64) {
        let n = self.n_orbitals;
        self.one_body[p * n + q] = value;
        self.one_body[q * n + p] = value;
    }

    /// Sets `(pq|rs)` and its seven symmetry partners.
    pub fn set_g(&mut self, p: usize, q: usize, r: usize, s: usize, value: f64) {
        for (a, b, c, d) in [
            (p, q, r, s),
            (q, p, r, s),
            (p, q, s, r),
            (q, p, s, r),
            (r, s, p, q),
            (s, r, p, q),
            (r, s, q, p),
            (s, r, q, p),
        ] {
            let i = self.g_index(a, b, c, d);
            self.two_body[i] = value;
        }
    }

    /// Closed-shell determinant energy with the lowest `n_electrons / 2`
    /// orbitals doubly occupied, core energy included.
    pub fn closed_shell_energy(&self) -> f64 {
        let occ = self.n_electrons / 2;
        let mut e = self.core_energy;
        for i in 0..occ {
            e += 2.0 * self.h(i, i);
            for j in 0..occ {
                e += 2.0 * self.g(i, i, j, j) - self.g(i, j, j, i);
            }
        }
        e
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_float(tok: &str, line: usize) -> Result<f64> {
    let normalized = tok.replace(['D', 'd'], "E");
    let v: f64 = normalized
        .parse()
        .map_err(|_| parse_err(line, format!("non-numeric value {tok:?}")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("non-finite value {tok:?}")));
    }
    Ok(v)
}

fn is_header_end(line: &str) -> bool {
    let t = line.trim().to_ascii_uppercase();
    t == "/" || t.ends_with("&END") || t.ends_with("$END") || t.ends_with('/')
}

struct Header {
    norb: usize,
    nelec: usize,
    ms2: i64,
    orbsym: Vec<i64>,
    isym: Option<i64>,
}

fn parse_header(text: &str, line: usize) -> Result<Header> {
    let upper = text.to_ascii_uppercase();
    let body = upper
        .replace("&FCI", " ")
        .replace("$FCI", " ")
        .replace("&END", " ")
        .replace("$END", " ")
        .replace('/', " ");
    // Split at '=': every segment but the last ends with the next key name.
    let segments: Vec<&str> = body.split('=').collect();
    if segments.len() < 2 {
        return Err(parse_err(line, "header has no KEY=VALUE entries"));
    }
    let tokens = |s: &str| -> Vec<String> {
        s.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(str::to_string)
            .collect()
    };
    let mut entries: Vec<(String, Vec<String>)> = Vec::new();
    let mut key = {
        let t = tokens(segments[0]);
        t.last()
            .cloned()
            .ok_or_else(|| parse_err(line, "header key missing"))?
    };
    for (idx, seg) in segments.iter().enumerate().skip(1) {
        let mut toks = tokens(seg);
        let next_key = if idx + 1 < segments.len() {
            match toks.pop() {
                Some(k) if k.starts_with(|c: char| c.is_ascii_alphabetic()) => Some(k),
                _ => return Err(parse_err(line, format!("malformed header near {seg:?}"))),
            }
        } else {
            None
        };
        entries.push((key.clone(), toks));
        if let Some(k) = next_key {
            key = k;
        }
    }

    let int_of = |name: &str| -> Result<Option<i64>> {
        match entries.iter().find(|(k, _)| k == name) {
            None => Ok(None),
            Some((_, vals)) => {
                let v = vals
                    .first()
                    .ok_or_else(|| parse_err(line, format!("{name} has no value")))?;
                v.parse::<i64>()
                    .map(Some)
                    .map_err(|_| parse_err(line, format!("{name} value {v:?} is not an integer")))
            }
        }
    };
    let norb = int_of("NORB")?.ok_or_else(|| parse_err(line, "header lacks NORB"))?;
    let nelec = int_of("NELEC")?.ok_or_else(|| parse_err(line, "header lacks NELEC"))?;
    if norb <= 0 {
        return Err(parse_err(line, format!("NORB must be positive, got {norb}")));
    }
    if nelec < 0 {
        return Err(parse_err(line, format!("NELEC must be non-negative, got {nelec}")));
    }
    let ms2 = int_of("MS2")?.unwrap_or(0);
    let isym = int_of("ISYM")?;
    let orbsym = match entries.iter().find(|(k, _)| k == "ORBSYM") {
        None => vec![1; norb as usize],
        Some((_, vals)) => vals
            .iter()
            .map(|v| {
                v.parse::<i64>()
                    .map_err(|_| parse_err(line, format!("ORBSYM entry {v:?} is not an integer")))
            })
            .collect::<Result<_>>()?,
    };
    Ok(Header {
        norb: norb as usize,
        nelec: nelec as usize,
        ms2,
        orbsym,
        isym,
    })
}

/// Largest disagreement tolerated between two listings of partner integrals.
const CONFLICT_TOLERANCE: f64 = 1e-10;

/// Smallest index tuple among the permutational partners of a label.
fn symmetry_class([p, q, r, s]: [usize; 4]) -> [usize; 4] {
    if r == 0 && s == 0 {
        return [p.min(q), p.max(q), 0, 0];
    }
    [
        [p, q, r, s],
        [q, p, r, s],
        [p, q, s, r],
        [q, p, s, r],
        [r, s, p, q],
        [s, r, p, q],
        [r, s, q, p],
        [s, r, q, p],
    ]
    .into_iter()
    .min()
    .expect("eight partners")
}

/// Parses FCIDUMP text, completing every permutational partner of each
/// listed integral.
pub fn parse_fcidump(text: &str) -> Result<MolecularIntegrals> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    let mut header_text = String::new();
    let mut header_line = 0;
    let mut found_start = false;
    for (no, line) in lines.by_ref() {
        if line.trim().is_empty() && !found_start {
            continue;
        }
        if !found_start {
            let t = line.trim_start().to_ascii_uppercase();
            if !(t.starts_with("&FCI") || t.starts_with("$FCI")) {
                return Err(parse_err(no, "expected header starting with &FCI"));
            }
            found_start = true;
            header_line = no;
        }
        header_text.push_str(line);
        header_text.push('\n');
        if is_header_end(line) {
            break;
        }
    }
    if !found_start {
        return Err(parse_err(1, "empty input"));
    }
    let header = parse_header(&header_text, header_line)?;

    let mut ints = MolecularIntegrals::zeros(header.norb, header.nelec);
    ints.ms2 = header.ms2;
    ints.orbsym = header.orbsym;
    ints.isym = header.isym;

    let n = header.norb;
    // values of integrals listed so far, keyed by their symmetry class
    let mut listed: HashMap<[usize; 4], f64> = HashMap::new();
    for (no, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if toks.len() != 5 {
            return Err(parse_err(
                no,
                format!("expected `value p q r s`, found {} fields", toks.len()),
            ));
        }
        let value = parse_float(toks[0], no)?;
        let mut idx = [0usize; 4];
        for (slot, tok) in idx.iter_mut().zip(&toks[1..]) {
            let v: i64 = tok
                .parse()
                .map_err(|_| parse_err(no, format!("non-integer index {tok:?}")))?;
            if v < 0 || v as usize > n {
                return Err(parse_err(no, format!("index {v} outside 0..={n}")));
            }
            *slot = v as usize;
        }
        if idx[0] > 0 && idx[1] > 0 {
            let class = symmetry_class(idx);
            if let Some(&previous) = listed.get(&class) {
                if (previous - value).abs() > CONFLICT_TOLERANCE {
                    return Err(Error::NonHermitian {
                        residue: (previous - value).abs(),
                    }
                    .context(format!("FCIDUMP line {no}: {idx:?} contradicts an earlier partner")));
                }
            }
            listed.insert(class, value);
        }
        match idx {
            [0, 0, 0, 0] => ints.core_energy = value,
            [p, 0, 0, 0] if p > 0 => {}
            [p, q, 0, 0] if p > 0 && q > 0 => ints.set_h(p - 1, q - 1, value),
            [p, q, r, s] if p > 0 && q > 0 && r > 0 && s > 0 => {
                ints.set_g(p - 1, q - 1, r - 1, s - 1, value)
            }
            _ => {
                return Err(parse_err(
                    no,
                    format!("index pattern {idx:?} is not a valid integral label"),
                ))
            }
        }
    }
    Ok(ints)
}

pub fn read_fcidump(path: impl AsRef<Path>) -> Result<MolecularIntegrals> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::InvalidArgument(format!("cannot read {}: {e}", path.display()))
    })?;
    parse_fcidump(&text).map_err(|e| e.context(format!("parsing {}", path.display())))
}
