//! Plain-text payoff tensor fixtures.
//!
//! ```text
//! # comments and blank lines are ignored
//! qgame-fixture <rows> <cols> sha256=<hex>
//! <row> <col> <re> <im>              one nonzero grid entry, 0-based
//! erratum <row> <col> <re> <im>      correction applied on top of the entries
//! ```
//!
//! The checksum covers every entry and erratum line, each trimmed and followed
//! by a newline, in file order.

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::game::{PayoffTensor, Player};

const MAGIC: &str = "qgame-fixture";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Erratum {
    pub row: usize,
    pub col: usize,
    pub value: Complex64,
}

/// A transcribed tensor plus the corrections recorded against it.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorFixture {
    pub transcribed: PayoffTensor,
    pub errata: Vec<Erratum>,
}

impl TensorFixture {
    /// The transcription with every erratum applied.
    pub fn corrected(&self) -> PayoffTensor {
        let t = &self.transcribed;
        let mut data = t.as_slice().to_vec();
        for e in &self.errata {
            data[e.row * t.grid_cols() + e.col] = e.value;
        }
        PayoffTensor::from_flat(t.player(), t.n1(), t.n2(), data).expect("same shape")
    }
}

fn digest(lines: &[&str]) -> String {
    let mut h = Sha256::new();
    for l in lines {
        h.update(l.as_bytes());
        h.update(b"\n");
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn fourth_root(x: usize) -> Option<usize> {
    (1..=x).take_while(|n| n.pow(4) <= x).find(|n| n.pow(4) == x)
}

fn corrupt(msg: impl Into<String>) -> Error {
    Error::FixtureCorrupt(msg.into())
}

pub fn parse_fixture(text: &str, player: Player) -> Result<TensorFixture> {
    let mut header = None;
    let mut payload: Vec<&str> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.starts_with(MAGIC) {
            if header.is_some() {
                return Err(corrupt(format!("line {}: duplicate header", lineno + 1)));
            }
            header = Some((lineno + 1, line));
        } else {
            if header.is_none() {
                return Err(corrupt(format!("line {}: data before header", lineno + 1)));
            }
            payload.push(line);
        }
    }
    let (_, header) = header.ok_or_else(|| corrupt("missing header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [_, rows, cols, sum] = fields[..] else {
        return Err(corrupt(format!("malformed header {header:?}")));
    };
    let rows: usize = rows.parse().map_err(|_| corrupt("bad row count"))?;
    let cols: usize = cols.parse().map_err(|_| corrupt("bad column count"))?;
    let expected_sum = sum
        .strip_prefix("sha256=")
        .ok_or_else(|| corrupt("header lacks sha256="))?;
    let actual = digest(&payload);
    if actual != expected_sum {
        return Err(corrupt(format!("checksum mismatch: header {expected_sum}, content {actual}")));
    }
    let n1 = fourth_root(rows).ok_or_else(|| corrupt(format!("{rows} rows is not n⁴")))?;
    let n2 = fourth_root(cols).ok_or_else(|| corrupt(format!("{cols} columns is not n⁴")))?;

    let mut data = vec![Complex64::new(0.0, 0.0); rows * cols];
    let mut errata = Vec::new();
    for line in payload {
        let (is_erratum, body) = match line.strip_prefix("erratum") {
            Some(rest) => (true, rest),
            None => (false, line),
        };
        let parts: Vec<&str> = body.split_whitespace().collect();
        let [r, c, re, im] = parts[..] else {
            return Err(corrupt(format!("expected `row col re im`, got {line:?}")));
        };
        let bad = || corrupt(format!("unparseable entry {line:?}"));
        let (r, c): (usize, usize) = (r.parse().map_err(|_| bad())?, c.parse().map_err(|_| bad())?);
        let value = Complex64::new(re.parse().map_err(|_| bad())?, im.parse().map_err(|_| bad())?);
        if r >= rows || c >= cols {
            return Err(corrupt(format!("entry ({r}, {c}) outside {rows}x{cols}")));
        }
        if is_erratum {
            errata.push(Erratum { row: r, col: c, value });
        } else {
            data[r * cols + c] = value;
        }
    }
    Ok(TensorFixture {
        transcribed: PayoffTensor::from_flat(player, n1, n2, data)?,
        errata,
    })
}

fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x}")
    }
}

/// Writes a tensor in fixture format (no errata).
pub fn render_fixture(tensor: &PayoffTensor, comment: &str) -> String {
    let (rows, cols) = (tensor.grid_rows(), tensor.grid_cols());
    let mut payload = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let z = tensor.grid(r, c);
            if z.re != 0.0 || z.im != 0.0 {
                payload.push(format!("{r} {c} {} {}", fmt_num(z.re), fmt_num(z.im)));
            }
        }
    }
    let refs: Vec<&str> = payload.iter().map(String::as_str).collect();
    let mut out = String::new();
    for line in comment.lines() {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(&format!("{MAGIC} {rows} {cols} sha256={}\n", digest(&refs)));
    for line in payload {
        out.push_str(&line);
        out.push('\n');
    }
    out
}
