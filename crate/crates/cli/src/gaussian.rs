//! Parsing of Gaussian rational matrix entries such as `2`, `-1/2`, `i`,
//! `3/4-2i` and of 2x2 generators written `a,b;c,d`.

use friedlab_core::exact::{C, Q};
use friedlab_core::matrix::CMat;

fn parse_q(s: &str) -> Result<Q, String> {
    s.parse::<Q>().map_err(|e| format!("bad rational '{s}': {e}"))
}

/// Imaginary coefficient of a term ending in `i`: `i`, `-i`, `3i`, `1/2i`.
fn parse_imag(s: &str) -> Result<Q, String> {
    let body = &s[..s.len() - 1];
    match body {
        "" | "+" => Ok(Q::one()),
        "-" => Ok(-Q::one()),
        _ => parse_q(body),
    }
}

pub fn parse_entry(s: &str) -> Result<C, String> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty entry".into());
    }
    if !s.ends_with('i') {
        return Ok(C::real(parse_q(&s)?));
    }
    // split at the last sign that is not the leading one
    let split = s.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(k, _)| k).last();
    match split {
        Some(k) => Ok(C::new(parse_q(&s[..k])?, parse_imag(&s[k..])?)),
        None => Ok(C::new(Q::zero(), parse_imag(&s)?)),
    }
}

pub fn parse_matrix2(s: &str) -> Result<CMat, String> {
    let rows: Vec<&str> = s.split(';').collect();
    if rows.len() != 2 {
        return Err(format!("generator '{s}' must have two rows separated by ';'"));
    }
    let mut out = Vec::new();
    for r in rows {
        let entries: Vec<C> = r.split(',').map(parse_entry).collect::<Result<_, _>>()?;
        if entries.len() != 2 {
            return Err(format!("generator '{s}' must have two entries per row"));
        }
        out.push(entries);
    }
    let m = CMat::from_rows(out);
    let det = &(&m[(0, 0)] * &m[(1, 1)]) - &(&m[(0, 1)] * &m[(1, 0)]);
    if det != C::one() {
        return Err(format!("generator '{s}' has determinant {det:?}, expected 1"));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries() {
        assert_eq!(parse_entry("2").unwrap(), C::int(2));
        assert_eq!(parse_entry("-1/2").unwrap(), C::real(Q::new(-1, 2)));
        assert_eq!(parse_entry("i").unwrap(), C::new(Q::zero(), Q::one()));
        assert_eq!(parse_entry("-i").unwrap(), C::new(Q::zero(), -Q::one()));
        assert_eq!(parse_entry("3/4-2i").unwrap(), C::new(Q::new(3, 4), Q::int(-2)));
        assert_eq!(parse_entry("-1+1/3i").unwrap(), C::new(Q::int(-1), Q::new(1, 3)));
        assert!(parse_entry("x").is_err());
    }

    #[test]
    fn matrices() {
        let m = parse_matrix2("2,i;-i,1").unwrap();
        assert_eq!(m[(0, 1)], C::new(Q::zero(), Q::one()));
        assert!(parse_matrix2("1,1;1,1").is_err());
        assert!(parse_matrix2("1,0").is_err());
    }
}
