//! Text literals for elements: `coeff * h(i,-n)^k * … * e(c1,…,cd)` joined
//! by `+`/`-`. Basis indices `i` are one-based.

use num_traits::{One, Signed, Zero};

use crate::exact::{format_rational, parse_rational, Rational};

use super::fock::{FockMonomial, GradedVector, Mode};
use super::VoaError;

fn fmt_monomial(m: &FockMonomial) -> String {
    let mut parts = Vec::new();
    let modes = m.modes();
    let mut i = 0;
    while i < modes.len() {
        let mut j = i;
        while j < modes.len() && modes[j] == modes[i] {
            j += 1;
        }
        let base = format!("h({},-{})", modes[i].i + 1, modes[i].n);
        parts.push(if j - i > 1 { format!("{base}^{}", j - i) } else { base });
        i = j;
    }
    let tail: Vec<String> = m.tail().iter().map(i64::to_string).collect();
    parts.push(format!("e({})", tail.join(",")));
    parts.join(" * ")
}

/// Canonical printed form; `"0"` for the zero vector.
pub fn format_element(v: &GradedVector) -> String {
    if v.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in v.terms().enumerate() {
        let body = if c.abs().is_one() {
            fmt_monomial(m)
        } else {
            format!("{} * {}", format_rational(&c.abs()), fmt_monomial(m))
        };
        match (k, c.is_negative()) {
            (0, false) => out.push_str(&body),
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    out
}

fn split_top_level(s: &str, is_sep: impl Fn(char) -> bool) -> Vec<(Option<char>, String)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut sign = None;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth == 0 && is_sep(ch) {
            if cur.trim().is_empty() {
                if ch == '-' {
                    sign = Some(if sign == Some('-') { '+' } else { '-' });
                }
                continue;
            }
            out.push((sign, std::mem::take(&mut cur)));
            sign = Some(ch);
            continue;
        }
        cur.push(ch);
    }
    out.push((sign, cur));
    out
}

fn parse_call<'a>(f: &'a str, name: &str) -> Option<&'a str> {
    let f = f.trim();
    let rest = f.strip_prefix(name)?.trim_start();
    rest.strip_prefix('(')?.strip_suffix(')')
}

fn bad(msg: impl Into<String>) -> VoaError {
    VoaError::Parse(msg.into())
}

/// Parses an element literal for a lattice of the given rank.
pub fn parse_element(s: &str, rank: usize) -> Result<GradedVector, VoaError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(bad("empty literal"));
    }
    if s == "0" {
        return Ok(GradedVector::zero());
    }
    let mut v = GradedVector::zero();
    for (sign, term) in split_top_level(s, |c| c == '+' || c == '-') {
        if term.trim().is_empty() {
            return Err(bad(format!("empty term in `{s}`")));
        }
        let mut coeff = if sign == Some('-') { -Rational::one() } else { Rational::one() };
        let mut modes = Vec::new();
        let mut tail = None;
        for (_, factor) in split_top_level(&term, |c| c == '*') {
            let f = factor.trim();
            if let Some(args) = parse_call(f.split('^').next().unwrap_or(""), "h") {
                let (idx, n) = args.split_once(',').ok_or_else(|| bad(format!("bad mode `{f}`")))?;
                let idx: usize = idx.trim().parse().map_err(|_| bad(format!("bad index in `{f}`")))?;
                let n: i64 = n.trim().parse().map_err(|_| bad(format!("bad mode number in `{f}`")))?;
                if idx == 0 || idx > rank || n >= 0 {
                    return Err(bad(format!("mode `{f}` out of range")));
                }
                let power: usize = match f.split_once('^') {
                    Some((_, p)) => p.trim().parse().map_err(|_| bad(format!("bad power in `{f}`")))?,
                    None => 1,
                };
                modes.extend(std::iter::repeat_n(Mode { n: (-n) as u32, i: idx - 1 }, power));
            } else if let Some(args) = parse_call(f, "e") {
                let t: Vec<i64> = args
                    .split(',')
                    .map(|x| x.trim().parse::<i64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| bad(format!("bad lattice vector `{f}`")))?;
                if t.len() != rank {
                    return Err(VoaError::RankMismatch { expected: rank, found: t.len() });
                }
                if tail.replace(t).is_some() {
                    return Err(bad(format!("two lattice factors in `{term}`")));
                }
            } else {
                let c = parse_rational(f).map_err(|e| bad(e.to_string()))?;
                coeff *= c;
            }
        }
        let tail = tail.unwrap_or_else(|| vec![0; rank]);
        if !coeff.is_zero() {
            v.add_term(FockMonomial::new(modes, tail), coeff);
        }
    }
    Ok(v)
}
