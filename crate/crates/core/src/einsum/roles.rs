use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::{Error, Result};

/// How an index character participates in an expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum IndexRole {
    /// In both operands, absent from the output.
    Contracted,
    /// In exactly one operand, absent from the output.
    Summed,
    /// Only in the output; the result is replicated along it.
    Mapped,
    /// In the output and in both operands.
    Batch,
    /// In the output and in exactly one operand.
    External,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IndexInfo {
    pub index: char,
    pub role: IndexRole,
    /// Repeated within at least one tensor.
    pub diagonal: bool,
    pub size: usize,
}

pub(crate) fn parse_indices(indices: &str) -> Result<Vec<char>> {
    let chars: Vec<char> = indices.chars().collect();
    if let Some(bad) = chars
        .iter()
        .find(|c| c.is_whitespace() || matches!(c, ',' | '-' | '>'))
    {
        return Err(Error::MalformedExpression(format!(
            "'{bad}' cannot be used as an index in \"{indices}\""
        )));
    }
    Ok(chars)
}

/// Map every index character to its dimension, checking that each tensor
/// has one character per dimension and that shared characters agree.
pub(crate) fn index_sizes(
    tensors: &[(&[char], &[usize])],
) -> Result<BTreeMap<char, usize>> {
    let mut sizes = BTreeMap::new();
    for (chars, dims) in tensors {
        if chars.len() != dims.len() {
            return Err(Error::MalformedExpression(format!(
                "index string \"{}\" has {} characters for an order-{} tensor",
                chars.iter().collect::<String>(),
                chars.len(),
                dims.len()
            )));
        }
        for (&c, &d) in chars.iter().zip(dims.iter()) {
            match sizes.get(&c) {
                Some(&prev) if prev != d => {
                    return Err(Error::IndexSizeMismatch {
                        index: c,
                        left: prev,
                        right: d,
                    })
                }
                _ => {
                    sizes.insert(c, d);
                }
            }
        }
    }
    Ok(sizes)
}

/// Unique characters in order of first appearance.
pub(crate) fn unique(lists: &[&[char]]) -> Vec<char> {
    let mut out = Vec::new();
    for list in lists {
        for &c in *list {
            if !out.contains(&c) {
                out.push(c);
            }
        }
    }
    out
}

fn has_repeat(chars: &[char]) -> bool {
    chars
        .iter()
        .enumerate()
        .any(|(i, c)| chars[i + 1..].contains(c))
}

/// Classify every index of `output = f(operands...)`. Each argument is an
/// index string with the dimensions of the tensor it labels.
pub fn classify_indices(
    output: (&str, &[usize]),
    operands: &[(&str, &[usize])],
) -> Result<Vec<IndexInfo>> {
    let out_chars = parse_indices(output.0)?;
    let op_chars = operands
        .iter()
        .map(|(s, _)| parse_indices(s))
        .collect::<Result<Vec<_>>>()?;
    let mut labelled: Vec<(&[char], &[usize])> = vec![(&out_chars, output.1)];
    labelled.extend(op_chars.iter().zip(operands).map(|(c, (_, d))| (c.as_slice(), *d)));
    let sizes = index_sizes(&labelled)?;

    let lists: Vec<&[char]> = labelled.iter().map(|(c, _)| *c).collect();
    Ok(unique(&lists)
        .into_iter()
        .map(|c| {
            let in_out = out_chars.contains(&c);
            let count = op_chars.iter().filter(|o| o.contains(&c)).count();
            let role = match (in_out, count) {
                (true, 0) => IndexRole::Mapped,
                (true, 1) => IndexRole::External,
                (true, _) => IndexRole::Batch,
                (false, 1) => IndexRole::Summed,
                (false, _) => IndexRole::Contracted,
            };
            let diagonal = lists.iter().any(|l| l.contains(&c) && has_repeat_of(l, c));
            IndexInfo {
                index: c,
                role,
                diagonal,
                size: sizes[&c],
            }
        })
        .collect())
}

fn has_repeat_of(chars: &[char], c: char) -> bool {
    chars.iter().filter(|&&x| x == c).count() > 1
}

/// Index strings of an expression written as `"ik,kj->ij"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    pub operands: Vec<String>,
    pub output: String,
}

impl Signature {
    pub fn parse(text: &str) -> Result<Self> {
        let (lhs, rhs) = text
            .split_once("->")
            .ok_or_else(|| Error::MalformedExpression(format!("missing '->' in \"{text}\"")))?;
        let operands: Vec<String> = if lhs.trim().is_empty() {
            Vec::new()
        } else {
            lhs.split(',').map(|s| s.trim().to_string()).collect()
        };
        if operands.len() > 2 {
            return Err(Error::MalformedExpression(format!(
                "at most two operands are supported, got {}",
                operands.len()
            )));
        }
        let output = rhs.trim().to_string();
        for s in operands.iter().chain(std::iter::once(&output)) {
            parse_indices(s)?;
        }
        Ok(Signature { operands, output })
    }

    pub fn has_diagonal(&self) -> bool {
        self.operands
            .iter()
            .chain(std::iter::once(&self.output))
            .any(|s| has_repeat(&s.chars().collect::<Vec<_>>()))
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.operands.join(","), self.output)
    }
}
