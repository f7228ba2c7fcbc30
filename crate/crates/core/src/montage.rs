//! Channel names, head-frame geometry, and hemisphere pairing.
//!
//! Head frame: X from the left to the right ear, Y from the back of the head
//! to the nose, Z upwards. Positions are unit vectors.

use crate::error::{Error, Result};

/// Version tag of the embedded electrode table.
pub const STANDARD_1020_VERSION: u32 = 1;

const STANDARD_1020_CSV: &str = include_str!("../data/standard_1020_v1.csv");

/// Channel order used when a caller asks for the first `n` standard channels.
/// The first 22 form the usual motor-imagery cap.
const SYNTHETIC_ORDER: [&str; 53] = [
    "C3", "C4", "Cz", "FC3", "FC4", "FCz", "CP3", "CP4", "CPz", "C1", "C2", "C5", "C6", "FC1",
    "FC2", "CP1", "CP2", "Fz", "Pz", "P1", "P2", "POz", "F3", "F4", "P3", "P4", "O1", "O2", "Oz",
    "F7", "F8", "T7", "T8", "P7", "P8", "Fp1", "Fp2", "Fpz", "AF3", "AF4", "AFz", "F1", "F2",
    "F5", "F6", "FC5", "FC6", "CP5", "CP6", "P5", "P6", "PO3", "PO4",
];

/// Left/right pairs plus unpaired midline channels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pairing {
    pub pairs: Vec<(usize, usize)>,
    pub midline: Vec<usize>,
}

impl Pairing {
    /// Index permutation swapping each pair; midline channels map to themselves.
    pub fn permutation(&self, n: usize) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..n).collect();
        for &(l, r) in &self.pairs {
            perm[l] = r;
            perm[r] = l;
        }
        perm
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Montage {
    names: Vec<String>,
    positions: Option<Vec<[f64; 3]>>,
}

fn normalize(p: [f64; 3]) -> Result<[f64; 3]> {
    let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    if !(n.is_finite() && n > 0.0) {
        return Err(Error::Data(format!("degenerate electrode position {p:?}")));
    }
    // Leave already-unit vectors alone so write/read cycles are exact.
    if (n - 1.0).abs() <= 1e-12 {
        return Ok(p);
    }
    Ok([p[0] / n, p[1] / n, p[2] / n])
}

impl Montage {
    /// Montage with names only (spatial transforms needing geometry will refuse it).
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Self {
        Self {
            names: names.iter().map(|s| s.as_ref().to_string()).collect(),
            positions: None,
        }
    }

    pub fn with_positions<S: AsRef<str>>(names: &[S], positions: &[[f64; 3]]) -> Result<Self> {
        if names.len() != positions.len() {
            return Err(Error::Input(format!(
                "{} names but {} positions",
                names.len(),
                positions.len()
            )));
        }
        let positions = positions
            .iter()
            .map(|&p| normalize(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            names: names.iter().map(|s| s.as_ref().to_string()).collect(),
            positions: Some(positions),
        })
    }

    /// Parses `name,x,y,z` lines (an optional header line starting with `name` is skipped).
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut names = Vec::new();
        let mut positions = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if lineno == 0 && fields.first().is_some_and(|f| f.eq_ignore_ascii_case("name")) {
                continue;
            }
            if fields.len() != 4 {
                return Err(Error::Format(format!(
                    "montage line {}: expected name,x,y,z",
                    lineno + 1
                )));
            }
            let mut p = [0.0; 3];
            for (k, f) in fields[1..].iter().enumerate() {
                p[k] = f.parse().map_err(|_| {
                    Error::Format(format!("montage line {}: bad number {f:?}", lineno + 1))
                })?;
            }
            names.push(fields[0].to_string());
            positions.push(p);
        }
        Self::with_positions(&names, &positions)
    }

    /// The full embedded electrode table.
    pub fn standard_1020() -> Self {
        Self::from_csv(STANDARD_1020_CSV).expect("embedded montage table is valid")
    }

    /// Picks the named channels from the embedded table (case-insensitive).
    pub fn from_standard<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let table = Self::standard_1020();
        let table_pos = table.positions.as_ref().expect("table has positions");
        let mut positions = Vec::with_capacity(names.len());
        let mut missing = Vec::new();
        for name in names {
            match table.index_of(name.as_ref()) {
                Some(i) => positions.push(table_pos[i]),
                None => missing.push(name.as_ref().to_string()),
            }
        }
        if !missing.is_empty() {
            return Err(Error::MissingPositions(missing.join(", ")));
        }
        Self::with_positions(names, &positions)
    }

    /// The first `n` channels of the standard synthetic ordering.
    pub fn standard_first(n: usize) -> Result<Self> {
        if n == 0 || n > SYNTHETIC_ORDER.len() {
            return Err(Error::Config(format!(
                "requested {n} channels; the built-in montage has {}",
                SYNTHETIC_ORDER.len()
            )));
        }
        Self::from_standard(&SYNTHETIC_ORDER[..n])
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn positions(&self) -> Option<&[[f64; 3]]> {
        self.positions.as_deref()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n.eq_ignore_ascii_case(name))
    }

    pub fn pairing(&self) -> Result<Pairing> {
        symmetric_pairs(&self.names)
    }
}

enum Site<'a> {
    Midline,
    Lateral { prefix: &'a str, number: u32 },
}

fn classify(name: &str) -> Option<Site<'_>> {
    if name.ends_with(['z', 'Z']) {
        return Some(Site::Midline);
    }
    let digits_at = name.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    if digits_at == name.len() {
        return None;
    }
    let number = name[digits_at..].parse().ok()?;
    Some(Site::Lateral {
        prefix: &name[..digits_at],
        number,
    })
}

/// Pairs left-hemisphere channels (odd digit) with their right counterpart
/// (same prefix, digit + 1). Names ending in `z` are midline.
pub fn symmetric_pairs<S: AsRef<str>>(names: &[S]) -> Result<Pairing> {
    let mut pairs = Vec::new();
    let mut midline = Vec::new();
    let mut used = vec![false; names.len()];
    let find = |prefix: &str, number: u32| {
        names.iter().position(|n| match classify(n.as_ref()) {
            Some(Site::Lateral { prefix: p, number: k }) => {
                k == number && p.eq_ignore_ascii_case(prefix)
            }
            _ => false,
        })
    };
    for (i, name) in names.iter().enumerate() {
        let name = name.as_ref();
        match classify(name) {
            Some(Site::Midline) => {
                midline.push(i);
                used[i] = true;
            }
            Some(Site::Lateral { prefix, number }) if number % 2 == 1 => {
                let Some(j) = find(prefix, number + 1) else {
                    return Err(Error::Pairing(name.to_string()));
                };
                if used[i] || used[j] {
                    return Err(Error::Pairing(format!("{name} (duplicate channel)")));
                }
                used[i] = true;
                used[j] = true;
                pairs.push((i, j));
            }
            _ => {}
        }
    }
    if let Some(i) = used.iter().position(|u| !u) {
        return Err(Error::Pairing(names[i].as_ref().to_string()));
    }
    Ok(Pairing { pairs, midline })
}
