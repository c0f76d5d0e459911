//! Small expression parser for algebra elements and free-algebra
//! polynomials given on the command line, e.g.
//! `p2.e11+p2.e22`, `1/2*e11 - z^2*e22`, `x*y*x - y*x*x - i`.

use ncdc_core::algebra::FDAlgebra;
use ncdc_core::freealg::{NCPoly, Word};
use ncdc_core::matrix::{vec_zero, Vector};
use ncdc_core::scalar::Cyclotomic;
use ncdc_core::{Error, Result};

struct SignedTerm {
    negative: bool,
    factors: Vec<String>,
}

fn split_terms(expr: &str) -> Result<Vec<SignedTerm>> {
    let mut terms = Vec::new();
    let mut cur = String::new();
    let mut negative = false;
    let mut seen_any = false;
    for ch in expr.chars() {
        match ch {
            '+' | '-' if seen_any && !cur.trim().is_empty() => {
                terms.push(SignedTerm {
                    negative,
                    factors: split_factors(cur.trim())?,
                });
                cur.clear();
                negative = ch == '-';
            }
            '-' if cur.trim().is_empty() => {
                negative = !negative;
                seen_any = true;
            }
            '+' if cur.trim().is_empty() => {
                seen_any = true;
            }
            _ => {
                if !ch.is_whitespace() {
                    cur.push(ch);
                }
                seen_any = true;
            }
        }
    }
    if !cur.trim().is_empty() {
        terms.push(SignedTerm {
            negative,
            factors: split_factors(cur.trim())?,
        });
    }
    if terms.is_empty() {
        return Err(Error::Parse(format!("empty expression '{}'", expr)));
    }
    Ok(terms)
}

fn split_factors(term: &str) -> Result<Vec<String>> {
    let parts: Vec<String> = term
        .split('*')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    if parts.is_empty() {
        return Err(Error::Parse(format!("empty term in expression '{}'", term)));
    }
    Ok(parts)
}

enum Factor {
    Scalar(Cyclotomic),
    Symbol(String),
}

fn parse_factor(tok: &str, order: u64) -> Result<Factor> {
    let bytes = tok.as_bytes();
    if bytes[0].is_ascii_digit() {
        // rational: int or int/int
        if let Some((n, d)) = tok.split_once('/') {
            let n: i64 = n
                .parse()
                .map_err(|_| Error::Parse(format!("bad numerator '{}'", tok)))?;
            let d: i64 = d
                .parse()
                .map_err(|_| Error::Parse(format!("bad denominator '{}'", tok)))?;
            if d == 0 {
                return Err(Error::Parse("zero denominator".into()));
            }
            return Ok(Factor::Scalar(Cyclotomic::from_ratio(n, d, order)));
        }
        let n: i64 = tok
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer '{}'", tok)))?;
        return Ok(Factor::Scalar(Cyclotomic::from_integer(n, order)));
    }
    if tok == "i" {
        if order % 4 != 0 {
            return Err(Error::Parse(
                "'i' requires a session field order divisible by 4".into(),
            ));
        }
        return Ok(Factor::Scalar(Cyclotomic::root_of_unity(
            order,
            (order / 4) as i64,
        )));
    }
    if tok == "z" {
        return Ok(Factor::Scalar(Cyclotomic::root_of_unity(order, 1)));
    }
    if let Some(rest) = tok.strip_prefix("z^") {
        let k: i64 = rest
            .parse()
            .map_err(|_| Error::Parse(format!("bad power '{}'", tok)))?;
        return Ok(Factor::Scalar(Cyclotomic::root_of_unity(order, k)));
    }
    Ok(Factor::Symbol(tok.to_string()))
}

/// Parse an element of a structure-constant algebra over its basis labels.
pub fn parse_element(expr: &str, alg: &FDAlgebra) -> Result<Vector> {
    let order = alg.order();
    let mut out = vec_zero(alg.dim(), order);
    for term in split_terms(expr)? {
        let mut coeff = Cyclotomic::one(order);
        if term.negative {
            coeff = coeff.neg_ref();
        }
        let mut index: Option<usize> = None;
        for f in &term.factors {
            match parse_factor(f, order)? {
                Factor::Scalar(c) => coeff = coeff.mul_ref(&c),
                Factor::Symbol(name) => {
                    let ix = alg
                        .labels()
                        .iter()
                        .position(|l| *l == name)
                        .ok_or_else(|| Error::Parse(format!("unknown basis label '{}'", name)))?;
                    if index.replace(ix).is_some() {
                        return Err(Error::Parse(format!(
                            "term '{}' multiplies two basis labels; expand the product by hand",
                            term.factors.join("*")
                        )));
                    }
                }
            }
        }
        match index {
            Some(ix) => out[ix] = out[ix].add_ref(&coeff),
            None => {
                // constant term: coeff * unit
                for (k, u) in alg.unit().iter().enumerate() {
                    out[k].add_mul_assign(&coeff, u);
                }
            }
        }
    }
    Ok(out)
}

/// Parse a comma-separated list of elements; the single token `@center`
/// expands to the center basis.
pub fn parse_element_list(expr: &str, alg: &FDAlgebra) -> Result<Vec<Vector>> {
    if expr.trim() == "@center" {
        return Ok(alg.center().basis_rows().collect());
    }
    expr.split(',')
        .map(|part| parse_element(part.trim(), alg))
        .collect()
}

/// Parse a noncommutative polynomial over the presentation's generators.
/// Words are `*`-separated generator names; when every generator name is a
/// single character, juxtaposition like `xyx` is also accepted.
pub fn parse_poly(expr: &str, generators: &[String], order: u64) -> Result<NCPoly> {
    let single_char = generators.iter().all(|g| g.chars().count() == 1);
    let gen_index = |name: &str| generators.iter().position(|g| g == name);
    let mut out = NCPoly::zero();
    for term in split_terms(expr)? {
        let mut coeff = Cyclotomic::one(order);
        if term.negative {
            coeff = coeff.neg_ref();
        }
        let mut word: Vec<u32> = Vec::new();
        for f in &term.factors {
            match parse_factor(f, order)? {
                Factor::Scalar(c) => coeff = coeff.mul_ref(&c),
                Factor::Symbol(name) => {
                    if let Some(ix) = gen_index(&name) {
                        word.push(ix as u32);
                    } else if name == "1" {
                        // the empty word
                    } else if single_char
                        && name.chars().all(|ch| gen_index(&ch.to_string()).is_some())
                    {
                        for ch in name.chars() {
                            word.push(gen_index(&ch.to_string()).unwrap() as u32);
                        }
                    } else {
                        return Err(Error::Parse(format!("unknown generator '{}'", name)));
                    }
                }
            }
        }
        out.add_term(Word(word), &coeff);
    }
    Ok(out)
}
