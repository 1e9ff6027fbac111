//! Reader and writer for the SGC v1 text format.
//!
//! ```text
//! SGC 1
//! n 2
//! m 3
//! w0 = AND u0 v1      # gates in order, w0, w1, ...
//! w1 = NOT w0
//! w2 = CONST1
//! out pair w2
//! out edge w1
//! ```
//!
//! Inputs are `u0..u(n-1)` and `v0..v(n-1)`, with `u0` the least significant bit.

use std::fmt::Write as _;

use super::circuit::{GateOp, SuccinctCircuit, WireId, MAX_BITS, MAX_GATES};
use crate::error::{Error, ParseErrorKind, Result};

struct RawGate<'a> {
    line: usize,
    op: &'a str,
    args: Vec<&'a str>,
}

/// Parses SGC v1 text into a validated circuit.
pub fn parse_sgc(text: &str) -> Result<SuccinctCircuit> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let syntax = |line: usize, msg: String| Error::parse(line, ParseErrorKind::Syntax(msg));
    let mut next = |what: &str| {
        lines.next().ok_or_else(|| syntax(text.lines().count().max(1), format!("missing {what}")))
    };

    let (line, header) = next("header `SGC 1`")?;
    if header.split_whitespace().collect::<Vec<_>>() != ["SGC", "1"] {
        return Err(syntax(line, format!("expected header `SGC 1`, found `{header}`")));
    }
    let (line, n_line) = next("`n <int>`")?;
    let n: u32 = keyed_int(n_line, "n").ok_or_else(|| syntax(line, "expected `n <int>`".into()))?;
    if n == 0 || n > MAX_BITS {
        return Err(Error::parse(
            line,
            ParseErrorKind::Limit(format!("n must be in 1..={MAX_BITS}, got {n}")),
        ));
    }
    let (line, m_line) = next("`m <int>`")?;
    let m: u64 = keyed_int(m_line, "m").ok_or_else(|| syntax(line, "expected `m <int>`".into()))?;
    if m == 0 || m > 1u64 << n {
        return Err(Error::parse(
            line,
            ParseErrorKind::Limit(format!("m must be in 1..=2^{n}, got {m}")),
        ));
    }

    let mut raw = Vec::new();
    let mut out_pair = None;
    let mut out_edge = None;
    for (line, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.as_slice() {
            ["out", which, wire] => {
                let slot = match *which {
                    "pair" => &mut out_pair,
                    "edge" => &mut out_edge,
                    _ => return Err(syntax(line, format!("unknown output `{which}`"))),
                };
                if slot.is_some() {
                    return Err(syntax(line, format!("output `{which}` declared twice")));
                }
                *slot = Some((line, *wire));
            }
            [name, "=", op, args @ ..] => {
                if out_pair.is_some() || out_edge.is_some() {
                    return Err(syntax(line, "gate after output declarations".into()));
                }
                let k = raw.len();
                if gate_index(name) != Some(k) {
                    return Err(syntax(line, format!("expected gate `w{k}`, found `{name}`")));
                }
                if k >= MAX_GATES {
                    return Err(Error::parse(
                        line,
                        ParseErrorKind::Limit(format!("more than {MAX_GATES} gates")),
                    ));
                }
                raw.push(RawGate { line, op, args: args.to_vec() });
            }
            _ => return Err(syntax(line, format!("unrecognized line `{l}`"))),
        }
    }

    let total = raw.len();
    let resolve = |line: usize, name: &str, limit: usize| -> Result<WireId> {
        let w = wire_id(name, n, total)
            .ok_or_else(|| Error::parse(line, ParseErrorKind::UndefinedWire(name.to_string())))?;
        if w >= limit {
            return Err(Error::parse(line, ParseErrorKind::OutOfOrder(name.to_string())));
        }
        Ok(w)
    };
    let inputs = 2 * n as usize;
    let mut gates = Vec::with_capacity(total);
    for (k, g) in raw.iter().enumerate() {
        let limit = inputs + k;
        let arg = |i: usize| resolve(g.line, g.args[i], limit);
        let want = |count: usize| {
            if g.args.len() == count {
                Ok(())
            } else {
                Err(syntax(
                    g.line,
                    format!("{} takes {count} operands, got {}", g.op, g.args.len()),
                ))
            }
        };
        let op = match g.op {
            "AND" => {
                want(2)?;
                GateOp::And(arg(0)?, arg(1)?)
            }
            "OR" => {
                want(2)?;
                GateOp::Or(arg(0)?, arg(1)?)
            }
            "NOT" => {
                want(1)?;
                GateOp::Not(arg(0)?)
            }
            "CONST0" => {
                want(0)?;
                GateOp::Const0
            }
            "CONST1" => {
                want(0)?;
                GateOp::Const1
            }
            other => return Err(syntax(g.line, format!("unknown gate `{other}`"))),
        };
        gates.push(op);
    }
    let end = text.lines().count().max(1);
    let (pl, pw) = out_pair.ok_or_else(|| syntax(end, "missing `out pair <wire>`".into()))?;
    let (el, ew) = out_edge.ok_or_else(|| syntax(end, "missing `out edge <wire>`".into()))?;
    let out_pair = resolve(pl, pw, inputs + total)?;
    let out_edge = resolve(el, ew, inputs + total)?;
    SuccinctCircuit::new(n, m, gates, out_pair, out_edge)
}

/// Serializes a circuit in SGC v1.
pub fn write_sgc(c: &SuccinctCircuit) -> String {
    let n = c.n() as usize;
    let name = |w: WireId| wire_name(w, n);
    let mut s = format!("SGC 1\nn {}\nm {}\n", c.n(), c.m());
    for (k, g) in c.gates().iter().enumerate() {
        let _ = match *g {
            GateOp::And(a, b) => writeln!(s, "w{k} = AND {} {}", name(a), name(b)),
            GateOp::Or(a, b) => writeln!(s, "w{k} = OR {} {}", name(a), name(b)),
            GateOp::Not(a) => writeln!(s, "w{k} = NOT {}", name(a)),
            GateOp::Const0 => writeln!(s, "w{k} = CONST0"),
            GateOp::Const1 => writeln!(s, "w{k} = CONST1"),
        };
    }
    let _ = writeln!(s, "out pair {}", name(c.out_pair()));
    let _ = writeln!(s, "out edge {}", name(c.out_edge()));
    s
}

fn wire_name(w: WireId, n: usize) -> String {
    if w < n {
        format!("u{w}")
    } else if w < 2 * n {
        format!("v{}", w - n)
    } else {
        format!("w{}", w - 2 * n)
    }
}

fn keyed_int<T: std::str::FromStr>(line: &str, key: &str) -> Option<T> {
    match line.split_whitespace().collect::<Vec<_>>().as_slice() {
        [k, v] if *k == key && is_digits(v) => v.parse().ok(),
        _ => None,
    }
}

fn is_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

fn indexed(name: &str, prefix: char) -> Option<usize> {
    let rest = name.strip_prefix(prefix)?;
    if is_digits(rest) {
        rest.parse().ok()
    } else {
        None
    }
}

fn gate_index(name: &str) -> Option<usize> {
    indexed(name, 'w')
}

/// Wire id of a name, or `None` if it names nothing in a circuit with `gates` gates.
fn wire_id(name: &str, n: u32, gates: usize) -> Option<WireId> {
    let n = n as usize;
    if let Some(i) = indexed(name, 'u') {
        return (i < n).then_some(i);
    }
    if let Some(i) = indexed(name, 'v') {
        return (i < n).then_some(n + i);
    }
    let k = gate_index(name)?;
    (k < gates).then_some(2 * n + k)
}
