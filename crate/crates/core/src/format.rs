//! Plain-text cell files and certificate files.
//!
//! A cell file starts with the header `cubeknot <k> <n> <scale>` followed by
//! one line per cell, `cell x1 .. xn : a1 .. ak`, where the `a` are 1-based
//! ascending axes. Lines starting with `#` and blank lines are ignored.
//!
//! A certificate file starts with `cubeknot-cert`, then holds its initial
//! diagram as an inline cell file, then one line per step (`m1 <m>` or
//! `m2 <carrier> | removed: <cells> | inserted: <cells>`, cells separated by
//! `;`), and ends with `digest sha256 <hex>`.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::knot::{CellComplex, KnotDiagram};
use crate::lattice::{LatticeCell, LatticeContext};
use crate::moves::{FaceBoundaryMove, MoveSequence, Step};

pub const CERT_HEADER: &str = "cubeknot-cert";
pub const DIGEST_ALGORITHM: &str = "sha256";

/// Canonical text of a complex: header plus cells in sorted order.
pub fn serialize_complex(c: &CellComplex) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "cubeknot {} {} {}",
        c.dim(),
        c.ctx().ambient_dim,
        c.ctx().scale
    )
    .unwrap();
    for cell in c.iter() {
        writeln!(out, "cell {cell}").unwrap();
    }
    out
}

pub fn serialize_knot(d: &KnotDiagram) -> String {
    serialize_complex(d.complex())
}

/// Hex SHA-256 of the canonical serialization.
pub fn digest_complex(c: &CellComplex) -> String {
    hex::encode(Sha256::digest(serialize_complex(c).as_bytes()))
}

pub fn digest(d: &KnotDiagram) -> String {
    digest_complex(d.complex())
}

/// Significant lines with their 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_header(line: usize, text: &str) -> Result<(usize, usize, u32)> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    if parts.len() != 4 || parts[0] != "cubeknot" {
        return Err(Error::parse(
            line,
            "expected header `cubeknot <k> <n> <scale>`",
        ));
    }
    let num = |s: &str, what: &str| -> Result<u64> {
        s.parse()
            .map_err(|_| Error::parse(line, format!("bad {what} `{s}`")))
    };
    let k = num(parts[1], "cell dimension")? as usize;
    let n = num(parts[2], "ambient dimension")? as usize;
    let scale = u32::try_from(num(parts[3], "scale")?)
        .map_err(|_| Error::parse(line, "scale out of range"))?;
    Ok((k, n, scale))
}

/// Parses `x1 .. xn : a1 .. ak` with 1-based axes.
pub fn parse_cell(line: usize, text: &str, n: usize, k: usize) -> Result<LatticeCell> {
    let (coords, axes) = text
        .split_once(':')
        .ok_or_else(|| Error::parse(line, "expected `x1 .. xn : a1 .. ak`"))?;
    let anchor = coords
        .split_whitespace()
        .map(|s| {
            s.parse::<i64>()
                .map_err(|_| Error::parse(line, format!("bad coordinate `{s}`")))
        })
        .collect::<Result<Vec<i64>>>()?;
    if anchor.len() != n {
        return Err(Error::parse(
            line,
            format!("expected {n} coordinates, found {}", anchor.len()),
        ));
    }
    let axes = axes
        .split_whitespace()
        .map(|s| match s.parse::<usize>() {
            Ok(a) if (1..=n).contains(&a) => Ok(a - 1),
            _ => Err(Error::parse(
                line,
                format!("bad axis `{s}`, expected 1..{n}"),
            )),
        })
        .collect::<Result<Vec<usize>>>()?;
    if axes.len() != k {
        return Err(Error::parse(
            line,
            format!("expected {k} axes, found {}", axes.len()),
        ));
    }
    if axes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::parse(line, "axes must be strictly ascending"));
    }
    LatticeCell::new(&anchor, &axes).map_err(|e| Error::parse(line, e.to_string()))
}

/// Reads a header and its cell lines, returning the complex and the lines
/// that follow the cells.
fn parse_complex_lines<'a>(
    it: &mut std::iter::Peekable<impl Iterator<Item = (usize, &'a str)>>,
) -> Result<CellComplex> {
    let (line, header) = it
        .next()
        .ok_or_else(|| Error::parse(1, "missing header `cubeknot <k> <n> <scale>`"))?;
    let (k, n, scale) = parse_header(line, header)?;
    let ctx = LatticeContext::new(n, scale).map_err(|e| Error::parse(line, e.to_string()))?;
    if k > n {
        return Err(Error::parse(
            line,
            format!("cell dimension {k} exceeds {n}"),
        ));
    }
    let mut cells = std::collections::BTreeSet::new();
    while let Some(&(line, text)) = it.peek() {
        let Some(rest) = text.strip_prefix("cell") else {
            break;
        };
        if !rest.is_empty() && !rest.starts_with(char::is_whitespace) {
            break;
        }
        it.next();
        let c = parse_cell(line, rest, n, k)?;
        if !cells.insert(c) {
            return Err(Error::parse(line, format!("duplicate cell {c}")));
        }
    }
    Ok(CellComplex::from_set(ctx, k, cells))
}

/// Parses a cell file of any shape.
pub fn parse_complex(text: &str) -> Result<CellComplex> {
    let mut it = lines(text).peekable();
    let c = parse_complex_lines(&mut it)?;
    if let Some((line, rest)) = it.next() {
        return Err(Error::parse(line, format!("unexpected line `{rest}`")));
    }
    Ok(c)
}

/// Parses a cell file holding edges in `Z^3` or squares in `Z^4`.
pub fn parse_knot(text: &str) -> Result<KnotDiagram> {
    KnotDiagram::new(parse_complex(text)?)
}

fn parse_cell_list(line: usize, text: &str, n: usize, k: usize) -> Result<Vec<LatticeCell>> {
    text.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_cell(line, s, n, k))
        .collect()
}

fn parse_step(line: usize, text: &str, n: usize, k: usize) -> Result<Step> {
    if let Some(m) = text.strip_prefix("m1 ") {
        let m: u32 = m
            .trim()
            .parse()
            .map_err(|_| Error::parse(line, format!("bad subdivision factor `{}`", m.trim())))?;
        return Ok(Step::Subdivide(m));
    }
    let Some(body) = text.strip_prefix("m2 ") else {
        return Err(Error::parse(line, format!("unexpected line `{text}`")));
    };
    let parts: Vec<&str> = body.split('|').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::parse(
            line,
            "expected `m2 <carrier> | removed: <cells> | inserted: <cells>`",
        ));
    }
    let carrier = parse_cell(line, parts[0], n, k + 1)?;
    let removed = parts[1]
        .strip_prefix("removed:")
        .ok_or_else(|| Error::parse(line, "expected `removed:`"))?;
    let inserted = parts[2]
        .strip_prefix("inserted:")
        .ok_or_else(|| Error::parse(line, "expected `inserted:`"))?;
    let removed = parse_cell_list(line, removed, n, k)?;
    let inserted = parse_cell_list(line, inserted, n, k)?;
    let mv = FaceBoundaryMove::from_parts(carrier, removed, inserted)
        .map_err(|e| Error::parse(line, e.to_string()))?;
    Ok(Step::Exchange(mv))
}

pub fn serialize_certificate(seq: &MoveSequence) -> String {
    let mut out = String::new();
    writeln!(out, "{CERT_HEADER}").unwrap();
    out.push_str(&serialize_knot(&seq.initial));
    for step in &seq.steps {
        writeln!(out, "{step}").unwrap();
    }
    writeln!(out, "digest {DIGEST_ALGORITHM} {}", seq.final_digest).unwrap();
    out
}

/// Parses a certificate. Legality is only checked by replay.
pub fn parse_certificate(text: &str) -> Result<MoveSequence> {
    let mut it = lines(text).peekable();
    match it.next() {
        Some((_, CERT_HEADER)) => {}
        Some((line, _)) => return Err(Error::parse(line, format!("expected `{CERT_HEADER}`"))),
        None => return Err(Error::parse(1, format!("expected `{CERT_HEADER}`"))),
    }
    let initial = KnotDiagram::new(parse_complex_lines(&mut it)?)?;
    let (n, k) = (initial.ctx().ambient_dim, initial.dim());
    let mut steps = Vec::new();
    let mut digest = None;
    for (line, text) in it.by_ref() {
        if let Some(rest) = text.strip_prefix("digest ") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            let hex = match parts.as_slice() {
                [alg, hex] if *alg == DIGEST_ALGORITHM => *hex,
                [hex] => *hex,
                _ => {
                    return Err(Error::parse(
                        line,
                        format!("expected `digest {DIGEST_ALGORITHM} <hex>`"),
                    ))
                }
            };
            if hex.len() != 64 || !hex.bytes().all(|b| b.is_ascii_hexdigit()) {
                return Err(Error::parse(line, "digest must be 64 hex digits"));
            }
            digest = Some((line, hex.to_ascii_lowercase()));
            break;
        }
        steps.push(parse_step(line, text, n, k)?);
    }
    let (_, final_digest) = digest
        .ok_or_else(|| Error::parse(text.lines().count().max(1), "missing `digest` trailer"))?;
    if let Some((line, rest)) = it.next() {
        return Err(Error::parse(
            line,
            format!("unexpected line after digest `{rest}`"),
        ));
    }
    Ok(MoveSequence {
        initial,
        steps,
        final_digest,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn sphere_round_trip() {
        let s = fixtures::sphere();
        let text = serialize_knot(&s);
        assert!(text.starts_with("cubeknot 2 4 1\n"));
        let back = parse_knot(&text).unwrap();
        assert_eq!(back.len(), 6);
        assert_eq!(serialize_knot(&back), text);
    }

    #[test]
    fn unsorted_input_is_canonicalized() {
        let text = "# comment\ncubeknot 1 3 1\n\ncell 0 1 0 : 1\ncell 0 0 0 : 1\ncell 0 0 0 : 2\ncell 1 0 0 : 2\n";
        let d = parse_knot(text).unwrap();
        assert!(d.is_valid());
        let canon = serialize_knot(&d);
        assert_eq!(
            canon,
            "cubeknot 1 3 1\ncell 0 0 0 : 1\ncell 0 0 0 : 2\ncell 0 1 0 : 1\ncell 1 0 0 : 2\n"
        );
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad_axes = "cubeknot 2 4 1\ncell 0 0 0 0 : 1 2\ncell 0 0 0 0 : 2 1\n";
        assert_eq!(
            parse_knot(bad_axes).unwrap_err(),
            Error::parse(3, "axes must be strictly ascending")
        );
        let dup = "cubeknot 2 4 1\ncell 0 0 0 0 : 1 2\n\ncell 0 0 0 0 : 1 2\n";
        assert!(matches!(parse_knot(dup), Err(Error::Parse { line: 4, .. })));
        let wrong_n = "cubeknot 2 4 1\ncell 0 0 0 : 1 2\n";
        assert!(matches!(
            parse_knot(wrong_n),
            Err(Error::Parse { line: 2, .. })
        ));
        let wrong_k = "cubeknot 2 4 1\ncell 0 0 0 0 : 1\n";
        assert!(matches!(
            parse_knot(wrong_k),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_knot("hello"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn digest_is_order_independent() {
        let a = "cubeknot 1 3 1\ncell 0 0 0 : 1\ncell 0 0 0 : 2\ncell 0 1 0 : 1\ncell 1 0 0 : 2\n";
        let b = "cubeknot 1 3 1\ncell 1 0 0 : 2\ncell 0 1 0 : 1\ncell 0 0 0 : 2\ncell 0 0 0 : 1\n";
        assert_eq!(
            digest(&parse_knot(a).unwrap()),
            digest(&parse_knot(b).unwrap())
        );
        assert_eq!(digest(&parse_knot(a).unwrap()).len(), 64);
    }

    #[test]
    fn certificate_round_trip() {
        let s = fixtures::sphere();
        let mv = crate::engine::enumerate_face_moves(&s)[3].clone();
        let end = crate::moves::apply_move(&s, &mv).unwrap();
        let seq = MoveSequence::from_run(
            s.clone(),
            vec![Step::Exchange(mv), Step::Subdivide(2)],
            &crate::moves::subdivide_knot(&end, 2).unwrap(),
        );
        let text = serialize_certificate(&seq);
        let back = parse_certificate(&text).unwrap();
        assert_eq!(back, seq);
        assert_eq!(serialize_certificate(&back), text);
        assert!(back.replay().is_ok());
    }

    #[test]
    fn certificate_needs_trailer() {
        let text = format!("{CERT_HEADER}\n{}", serialize_knot(&fixtures::sphere()));
        assert!(matches!(parse_certificate(&text), Err(Error::Parse { .. })));
    }
}
