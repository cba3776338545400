//! Text formats for tensors, forms, tuples of them, and certificates.
//!
//! ```text
//! TENSOR GF(2) shape=2,2,2
//! 1 1 1 : 1
//! 2 2 2 : 1
//! ```
//!
//! Indices are 1-based and omitted entries are zero. A form block reads
//! `FORM <field> n=<vars> d=<degree>` followed by `e1 ... en : <coeff>`
//! lines. A tuple file is a sequence of blocks of one kind. Lines starting
//! with `#` and blank lines are ignored everywhere.

use std::fmt::Write as _;

use strength_core::search::{
    Decomposition, DecompositionKind, PartitionTerm, RankCertificate, RankValue, StrengthTerm, Terms,
};
use strength_core::{Error, FieldCtx, Form, FormTuple, Result, Tensor, TensorTuple};

fn parse_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

/// A tensor or form read from a block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Block {
    Tensor(Tensor),
    Form(Form),
}

/// A parsed tuple file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tuple {
    Tensors(TensorTuple),
    Forms(FormTuple),
}

impl Tuple {
    pub fn field(&self) -> &FieldCtx {
        match self {
            Tuple::Tensors(t) => t.field(),
            Tuple::Forms(f) => f.field(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Tuple::Tensors(t) => t.len(),
            Tuple::Forms(f) => f.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn keyword(line: &str) -> &str {
    line.split_whitespace().next().unwrap_or("")
}

fn header_value<'a>(tokens: &[&'a str], key: &str, line: usize) -> Result<&'a str> {
    tokens
        .iter()
        .find_map(|t| t.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .ok_or_else(|| parse_err(line, format!("missing `{key}=`")))
}

fn parse_usize_list(s: &str, line: usize) -> Result<Vec<usize>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| x.trim().parse::<usize>().map_err(|_| parse_err(line, format!("bad integer `{x}`")))).collect()
}

/// Splits the field spec off a header such as `TENSOR GF(3^2;2,2,1) shape=2,2`.
/// Field specs contain no spaces, so the second token is the spec.
fn header_tokens(line: &str) -> Vec<&str> {
    line.split_whitespace().collect()
}

fn parse_entry_line(line: &str, lineno: usize) -> Result<(Vec<usize>, &str)> {
    let (idx, lit) = line.split_once(':').ok_or_else(|| parse_err(lineno, "expected `indices : value`"))?;
    let idx = idx
        .split_whitespace()
        .map(|x| x.parse::<usize>().map_err(|_| parse_err(lineno, format!("bad index `{x}`"))))
        .collect::<Result<Vec<_>>>()?;
    Ok((idx, lit.trim()))
}

fn parse_tensor_block(header: (usize, &str), body: &[(usize, &str)]) -> Result<Tensor> {
    let (lineno, line) = header;
    let tokens = header_tokens(line);
    let field: FieldCtx = tokens.get(1).ok_or_else(|| parse_err(lineno, "missing field"))?.parse()?;
    let shape = parse_usize_list(header_value(&tokens, "shape", lineno)?, lineno)?;
    if shape.is_empty() || shape.contains(&0) {
        return Err(parse_err(lineno, "shape entries must be positive"));
    }
    let mut t = Tensor::zeros(&field, &shape);
    let mut seen = std::collections::BTreeSet::new();
    for &(no, l) in body {
        let (idx, lit) = parse_entry_line(l, no)?;
        if idx.len() != shape.len() || idx.iter().zip(&shape).any(|(&i, &n)| i == 0 || i > n) {
            return Err(parse_err(no, "index out of range for the shape"));
        }
        let idx: Vec<usize> = idx.iter().map(|i| i - 1).collect();
        if !seen.insert(idx.clone()) {
            return Err(parse_err(no, "duplicate entry"));
        }
        t.set(&idx, field.parse_elem(lit)?);
    }
    Ok(t)
}

fn parse_form_block(header: (usize, &str), body: &[(usize, &str)]) -> Result<Form> {
    let (lineno, line) = header;
    let tokens = header_tokens(line);
    let field: FieldCtx = tokens.get(1).ok_or_else(|| parse_err(lineno, "missing field"))?.parse()?;
    let n: usize = header_value(&tokens, "n", lineno)?.parse().map_err(|_| parse_err(lineno, "bad `n=`"))?;
    let d: usize = header_value(&tokens, "d", lineno)?.parse().map_err(|_| parse_err(lineno, "bad `d=`"))?;
    let mut terms = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for &(no, l) in body {
        let (exps, lit) = parse_entry_line(l, no)?;
        if exps.len() != n || exps.iter().sum::<usize>() != d {
            return Err(parse_err(no, format!("exponents must be {n} numbers summing to {d}")));
        }
        if !seen.insert(exps.clone()) {
            return Err(parse_err(no, "duplicate monomial"));
        }
        terms.push((exps.into_iter().map(|e| e as u32).collect(), field.parse_elem(lit)?));
    }
    Form::from_terms(&field, n, d, terms)
}

/// Groups lines into blocks: each `TENSOR`/`FORM` header owns the lines up
/// to the next keyword line.
fn split_blocks(lines: &[(usize, &str)]) -> Result<Vec<Block>> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let (no, line) = lines[i];
        let kw = keyword(line);
        let end = (i + 1..lines.len()).find(|&j| is_keyword(lines[j].1)).unwrap_or(lines.len());
        let body = &lines[i + 1..end];
        match kw {
            "TENSOR" => out.push(Block::Tensor(parse_tensor_block((no, line), body)?)),
            "FORM" => out.push(Block::Form(parse_form_block((no, line), body)?)),
            _ => return Err(parse_err(no, format!("expected TENSOR or FORM, found `{kw}`"))),
        }
        i = end;
    }
    Ok(out)
}

fn is_keyword(line: &str) -> bool {
    matches!(keyword(line), "TENSOR" | "FORM" | "TERM" | "END" | "CERT" | "c:")
}

pub fn parse_blocks(text: &str) -> Result<Vec<Block>> {
    let lines: Vec<(usize, &str)> = content_lines(text).collect();
    split_blocks(&lines)
}

pub fn parse_tuple(text: &str) -> Result<Tuple> {
    let blocks = parse_blocks(text)?;
    if blocks.is_empty() {
        return Err(Error::Parse("no TENSOR or FORM block".into()));
    }
    if blocks.iter().all(|b| matches!(b, Block::Tensor(_))) {
        let ts = blocks.into_iter().map(|b| if let Block::Tensor(t) = b { t } else { unreachable!() }).collect();
        Ok(Tuple::Tensors(TensorTuple::new(ts)?))
    } else if blocks.iter().all(|b| matches!(b, Block::Form(_))) {
        let fs = blocks.into_iter().map(|b| if let Block::Form(f) = b { f } else { unreachable!() }).collect();
        Ok(Tuple::Forms(FormTuple::new(fs)?))
    } else {
        Err(Error::Parse("a tuple file may not mix tensors and forms".into()))
    }
}

pub fn write_tensor(t: &Tensor) -> String {
    let f = t.field();
    let shape: Vec<String> = t.shape().iter().map(|n| n.to_string()).collect();
    let mut s = format!("TENSOR {f} shape={}\n", shape.join(","));
    for (idx, v) in t.nonzero_entries() {
        let idx: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
        let _ = writeln!(s, "{} : {}", idx.join(" "), f.format_elem(v));
    }
    s
}

pub fn write_form(form: &Form) -> String {
    let f = form.field();
    let mut s = format!("FORM {f} n={} d={}\n", form.nvars(), form.degree());
    for (m, c) in form.terms() {
        let e: Vec<String> = m.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(s, "{} : {}", e.join(" "), f.format_elem(c));
    }
    s
}

pub fn write_tuple(t: &Tuple) -> String {
    match t {
        Tuple::Tensors(ts) => ts.tensors().iter().map(write_tensor).collect(),
        Tuple::Forms(fs) => fs.forms().iter().map(write_form).collect(),
    }
}

/// Contents of a certificate file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertFile {
    pub kind: DecompositionKind,
    pub value: RankValue,
    pub exhaustive: bool,
    pub witness: Option<Decomposition>,
}

impl CertFile {
    pub fn from_certificate(kind: DecompositionKind, cert: &RankCertificate) -> Self {
        CertFile { kind, value: cert.value, exhaustive: cert.exhaustive, witness: cert.witness.clone() }
    }
}

pub fn write_cert(cert: &CertFile, field: &FieldCtx, m: usize) -> String {
    let kind = match cert.kind {
        DecompositionKind::Strength => "STRENGTH",
        DecompositionKind::Partition => "PARTITION",
    };
    let mut s = format!("CERT {kind} value={} exhaustive={}\n", cert.value, u8::from(cert.exhaustive));
    if let Some(w) = &cert.witness {
        if m > 1 {
            let c: Vec<String> = w.coeffs.iter().map(|x| field.format_elem(x)).collect();
            let _ = writeln!(s, "c: {}", c.join(" "));
        }
        match &w.terms {
            Terms::Strength(ts) => {
                for (k, t) in ts.iter().enumerate() {
                    let _ = writeln!(s, "TERM {}", k + 1);
                    s += &write_form(&t.a);
                    s += &write_form(&t.b);
                }
            }
            Terms::Partition(ts) => {
                for (k, t) in ts.iter().enumerate() {
                    let slots: Vec<String> = t.slots.iter().map(|j| (j + 1).to_string()).collect();
                    let _ = writeln!(s, "TERM {} I={}", k + 1, slots.join(","));
                    s += &write_tensor(&t.a);
                    s += &write_tensor(&t.b);
                }
            }
        }
    }
    s += "END\n";
    s
}

/// Reads a certificate; `field` interprets the `c:` line, and `m` is the
/// tuple length it must match (`c = [1]` is implied for `m = 1`).
pub fn parse_cert(text: &str, field: &FieldCtx, m: usize) -> Result<CertFile> {
    let lines: Vec<(usize, &str)> = content_lines(text).collect();
    let Some(&(no, head)) = lines.first() else {
        return Err(Error::Parse("empty certificate".into()));
    };
    let tokens = header_tokens(head);
    if tokens.first() != Some(&"CERT") {
        return Err(parse_err(no, "expected CERT header"));
    }
    let kind = match tokens.get(1) {
        Some(&"STRENGTH") => DecompositionKind::Strength,
        Some(&"PARTITION") => DecompositionKind::Partition,
        _ => return Err(parse_err(no, "kind must be STRENGTH or PARTITION")),
    };
    let value = match header_value(&tokens, "value", no)? {
        "INF" => RankValue::Infinite,
        v => RankValue::Finite(v.parse().map_err(|_| parse_err(no, "bad value"))?),
    };
    let exhaustive = match header_value(&tokens, "exhaustive", no)? {
        "0" => false,
        "1" => true,
        _ => return Err(parse_err(no, "exhaustive must be 0 or 1")),
    };
    let Some(end) = lines.iter().position(|(_, l)| keyword(l) == "END") else {
        return Err(Error::Parse("missing END".into()));
    };
    if let Some(&(no, _)) = lines.get(end + 1) {
        return Err(parse_err(no, "content after END"));
    }
    let mut i = 1;
    let mut coeffs = None;
    if let Some(&(no, l)) = lines.get(i).filter(|(_, l)| keyword(l) == "c:") {
        let c = l["c:".len()..].split_whitespace().map(|x| field.parse_elem(x)).collect::<Result<Vec<_>>>()?;
        if c.len() != m {
            return Err(parse_err(no, format!("expected {m} coefficients")));
        }
        coeffs = Some(c);
        i += 1;
    }
    let mut strength = Vec::new();
    let mut partition = Vec::new();
    while i < end {
        let (no, l) = lines[i];
        let tokens = header_tokens(l);
        if tokens.first() != Some(&"TERM") {
            return Err(parse_err(no, "expected TERM"));
        }
        let next = (i + 1..end).find(|&j| keyword(lines[j].1) == "TERM").unwrap_or(end);
        let blocks = split_blocks(&lines[i + 1..next])?;
        match (kind, blocks.as_slice()) {
            (DecompositionKind::Strength, [Block::Form(a), Block::Form(b)]) => {
                strength.push(StrengthTerm { a: a.clone(), b: b.clone() });
            }
            (DecompositionKind::Partition, [Block::Tensor(a), Block::Tensor(b)]) => {
                let slots: Vec<usize> = parse_usize_list(header_value(&tokens, "I", no)?, no)?;
                if slots.contains(&0) {
                    return Err(parse_err(no, "slots are 1-based"));
                }
                partition.push(PartitionTerm { slots: slots.iter().map(|j| j - 1).collect(), a: a.clone(), b: b.clone() });
            }
            _ => return Err(parse_err(no, "a term needs exactly two blocks of the certificate's kind")),
        }
        i = next;
    }
    let n_terms = strength.len() + partition.len();
    let witness = if n_terms > 0 || coeffs.is_some() {
        let terms = match kind {
            DecompositionKind::Strength => Terms::Strength(strength),
            DecompositionKind::Partition => Terms::Partition(partition),
        };
        let coeffs = match coeffs {
            Some(c) => c,
            None if m == 1 => vec![field.one()],
            None => return Err(Error::Parse("missing `c:` line for a tuple".into())),
        };
        Some(Decomposition { terms, coeffs })
    } else {
        None
    };
    Ok(CertFile { kind, value, exhaustive, witness })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_round_trip() {
        let text = "TENSOR GF(2) shape=2,2,2\n1 1 1 : 1\n2 2 2 : 1\n";
        let blocks = parse_blocks(text).unwrap();
        let Block::Tensor(t) = &blocks[0] else { panic!() };
        assert_eq!(write_tensor(t), text);
    }

    #[test]
    fn form_with_comments() {
        let text = "# header\nFORM GF(9) n=2 d=2\n\n2 0 : [1,1]\n0 2 : 1\n";
        let Tuple::Forms(fs) = parse_tuple(text).unwrap() else { panic!() };
        let f = &fs.forms()[0];
        assert_eq!(write_form(f), "FORM GF(3^2) n=2 d=2\n2 0 : [1,1]\n0 2 : [1,0]\n");
    }

    #[test]
    fn malformed_inputs() {
        assert!(parse_tuple("TENSOR GF(2) shape=2,2\n3 1 : 1\n").is_err());
        assert!(parse_tuple("TENSOR GF(2) shape=2,2\n1 1 : 1\n1 1 : 0\n").is_err());
        assert!(parse_tuple("FORM GF(3) n=2 d=2\n1 0 : 1\n").is_err());
        assert!(parse_tuple("TENSOR GF(6) shape=2\n").is_err());
        assert!(parse_tuple("TENSOR GF(2) shape=2\nFORM GF(2) n=1 d=1\n").is_err());
        assert!(parse_tuple("").is_err());
    }
}
