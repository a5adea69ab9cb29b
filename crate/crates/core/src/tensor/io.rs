//! Text formats for sparse tensors.
//!
//! Matrix Market coordinate files carry order-2 tensors with 1-based indices.
//! Higher orders use a plain format: a header line `order d1 .. dn nnz`
//! followed by one `i1 .. in value` line per entry, indices 0-based.

use std::fmt::Display;
use std::io::{BufRead, Write};
use std::str::FromStr;

use super::{Layout, Symmetry, Tensor};
use crate::algebra::{Algebra, Element};
use crate::{Error, Result};

/// Element types with a textual form.
pub trait TextElement: Element + FromStr + Display {
    /// Matrix Market field name.
    const FIELD: &'static str;
}

impl TextElement for f64 {
    const FIELD: &'static str = "real";
}

impl TextElement for i64 {
    const FIELD: &'static str = "integer";
}

impl TextElement for i32 {
    const FIELD: &'static str = "integer";
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_num<N: FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<N> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} '{tok}'")))
}

/// Read a Matrix Market coordinate file into a sparse matrix. `general` and
/// `symmetric` storage are accepted; symmetric files are expanded.
pub fn read_matrix_market<T: TextElement>(
    reader: impl BufRead,
    algebra: &Algebra<T>,
) -> Result<Tensor<T>> {
    let mut lines = reader.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty input"))?;
    let header = header?;
    let words: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    if words.len() < 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" {
        return Err(parse_err(1, "expected '%%MatrixMarket matrix' header"));
    }
    if words[2] != "coordinate" {
        return Err(parse_err(1, "only coordinate format is supported"));
    }
    if words[3] != "real" && words[3] != "integer" {
        return Err(parse_err(1, format!("unsupported field '{}'", words[3])));
    }
    let symmetric = match words[4].as_str() {
        "general" => false,
        "symmetric" => true,
        other => return Err(parse_err(1, format!("unsupported symmetry '{other}'"))),
    };

    let mut size: Option<(usize, usize, usize)> = None;
    let mut pairs = Vec::new();
    let mut tensor: Option<Tensor<T>> = None;
    for (no, line) in lines {
        let no = no + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let mut toks = trimmed.split_whitespace();
        match size {
            None => {
                let rows = parse_num(toks.next(), no, "row count")?;
                let cols = parse_num(toks.next(), no, "column count")?;
                let nnz = parse_num(toks.next(), no, "entry count")?;
                size = Some((rows, cols, nnz));
                tensor = Some(Tensor::sparse(&[rows, cols], algebra)?);
            }
            Some((rows, cols, _)) => {
                let i: usize = parse_num(toks.next(), no, "row index")?;
                let j: usize = parse_num(toks.next(), no, "column index")?;
                let v: T = parse_num(toks.next(), no, "value")?;
                if i == 0 || j == 0 || i > rows || j > cols {
                    return Err(parse_err(no, format!("index ({i}, {j}) out of range")));
                }
                pairs.push(((i - 1) * cols + (j - 1), v));
                if symmetric && i != j {
                    pairs.push(((j - 1) * cols + (i - 1), v));
                }
            }
        }
    }
    let (_, _, nnz) = size.ok_or_else(|| parse_err(1, "missing size line"))?;
    let expected = if symmetric { pairs.len() } else { nnz };
    if pairs.len() != expected {
        return Err(parse_err(
            0,
            format!("header declares {nnz} entries, found {}", pairs.len()),
        ));
    }
    let mut tensor = tensor.expect("size line creates the tensor");
    pairs.sort_by_key(|p| p.0);
    tensor.write(&pairs, true)?;
    Ok(tensor)
}

/// Write an order-2 tensor as a general Matrix Market coordinate file.
pub fn write_matrix_market<T: TextElement>(
    tensor: &Tensor<T>,
    mut writer: impl Write,
) -> Result<()> {
    if tensor.order() != 2 {
        return Err(Error::BadIndexTuple {
            tuple: vec![0, 0],
            dims: tensor.dims().to_vec(),
        });
    }
    let entries = tensor.nonzeros();
    let (rows, cols) = (tensor.dims()[0], tensor.dims()[1]);
    writeln!(writer, "%%MatrixMarket matrix coordinate {} general", T::FIELD)?;
    writeln!(writer, "{rows} {cols} {}", entries.len())?;
    for (index, v) in entries {
        writeln!(writer, "{} {} {v}", index / cols + 1, index % cols + 1)?;
    }
    Ok(())
}

/// Read the plain coordinate format into a nonsymmetric sparse tensor.
pub fn read_coordinates<T: TextElement>(
    reader: impl BufRead,
    algebra: &Algebra<T>,
) -> Result<Tensor<T>> {
    let mut lines = reader
        .lines()
        .enumerate()
        .map(|(no, l)| (no + 1, l))
        .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()));
    let (no, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let header = header?;
    let mut toks = header.split_whitespace();
    let order: usize = parse_num(toks.next(), no, "order")?;
    let dims = (0..order)
        .map(|_| parse_num(toks.next(), no, "dimension"))
        .collect::<Result<Vec<usize>>>()?;
    let nnz: usize = parse_num(toks.next(), no, "entry count")?;
    let mut tensor = Tensor::new(&dims, &vec![Symmetry::NS; order], Layout::Sparse, algebra)?;
    let mut pairs = Vec::with_capacity(nnz);
    let mut tuple = vec![0usize; order];
    for (no, line) in lines {
        let line = line?;
        let mut toks = line.split_whitespace();
        for slot in tuple.iter_mut() {
            *slot = parse_num(toks.next(), no, "index")?;
        }
        let v: T = parse_num(toks.next(), no, "value")?;
        let index = tensor
            .linearize(&tuple)
            .map_err(|e| parse_err(no, e.to_string()))?;
        pairs.push((index, v));
    }
    if pairs.len() != nnz {
        return Err(parse_err(
            0,
            format!("header declares {nnz} entries, found {}", pairs.len()),
        ));
    }
    pairs.sort_by_key(|p| p.0);
    tensor.write(&pairs, true)?;
    Ok(tensor)
}

/// Write the nonzero entries of any tensor in the plain coordinate format.
pub fn write_coordinates<T: TextElement>(tensor: &Tensor<T>, mut writer: impl Write) -> Result<()> {
    let entries = tensor.nonzeros();
    let dims: Vec<String> = tensor.dims().iter().map(ToString::to_string).collect();
    writeln!(writer, "{} {} {}", tensor.order(), dims.join(" "), entries.len())?;
    for (index, v) in entries {
        let tuple: Vec<String> = tensor
            .delinearize(index)
            .iter()
            .map(ToString::to_string)
            .collect();
        writeln!(writer, "{} {v}", tuple.join(" "))?;
    }
    Ok(())
}
