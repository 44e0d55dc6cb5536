//! Parsing of value grids: comma lists or `start:step:count`.

use tmq_core::tmcore::parse_rational;
use tmq_core::Rational;

use crate::config::GridSpec;
use crate::{CliError, Result};

/// Parses `"num/den"`, an integer, or a finite decimal such as `-0.125`
/// into an exact rational.
pub fn parse_value(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || CliError::Usage(format!("cannot parse {s:?} as a rational"));
    if let Some((int, frac)) = t.split_once('.') {
        if t.contains('/') || frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let (sign, int) = match int.strip_prefix('-') {
            Some(rest) => ("-", rest),
            None => ("", int.strip_prefix('+').unwrap_or(int)),
        };
        if !int.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{sign}{}{frac}", if int.is_empty() { "0" } else { int });
        let den = format!("1{}", "0".repeat(frac.len()));
        return parse_rational(&format!("{digits}/{den}")).map_err(|_| bad());
    }
    parse_rational(t).map_err(|_| bad())
}

fn split_items(spec: &GridSpec) -> Vec<String> {
    match spec {
        GridSpec::Text(s) if s.trim().is_empty() => Vec::new(),
        GridSpec::Text(s) => s.split(',').map(|x| x.trim().to_string()).collect(),
        GridSpec::List(v) => v.clone(),
    }
}

fn parse_range(s: &str) -> Option<Result<Vec<Rational>>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return None;
    }
    Some((|| {
        let start = parse_value(parts[0])?;
        let step = parse_value(parts[1])?;
        let count: u64 = parts[2]
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad count in grid {s:?}")))?;
        Ok((0..count)
            .map(|i| &start + &step * Rational::from_integer(i.into()))
            .collect())
    })())
}

/// Grid entries, each parsed on its own so that one bad entry does not
/// hide the others.
pub fn parse_grid_items(spec: &GridSpec) -> Result<Vec<(String, Result<Rational>)>> {
    if let GridSpec::Text(s) = spec {
        if let Some(r) = parse_range(s.trim()) {
            return Ok(r?.into_iter().map(|q| (tmq_core::tmcore::format_rational(&q), Ok(q))).collect());
        }
    }
    Ok(split_items(spec)
        .into_iter()
        .map(|item| {
            let v = parse_value(&item);
            (item, v)
        })
        .collect())
}

/// Grid values; the first bad entry is an error.
pub fn parse_grid(spec: &GridSpec) -> Result<Vec<Rational>> {
    parse_grid_items(spec)?.into_iter().map(|(_, v)| v).collect()
}

/// Comma list of positive integers.
pub fn parse_sizes(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| {
            x.trim()
                .parse::<u64>()
                .ok()
                .filter(|&l| l > 0)
                .ok_or_else(|| CliError::Usage(format!("bad size {x:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use tmq_core::tmcore::rational;

    #[test]
    fn values() {
        assert_eq!(parse_value("1/3").unwrap(), rational(1, 3));
        assert_eq!(parse_value("-0.125").unwrap(), rational(-1, 8));
        assert_eq!(parse_value(".5").unwrap(), rational(1, 2));
        assert_eq!(parse_value("7").unwrap(), rational(7, 1));
        assert!(parse_value("1/0").is_err());
        assert!(parse_value("x").is_err());
        assert!(parse_value("1.").is_err());
    }

    #[test]
    fn ranges_and_lists() {
        let g = parse_grid(&GridSpec::Text("0:1/64:3".into())).unwrap();
        assert_eq!(g, vec![rational(0, 1), rational(1, 64), rational(2, 64)]);
        let g = parse_grid(&GridSpec::Text("1/3, 0.25".into())).unwrap();
        assert_eq!(g, vec![rational(1, 3), rational(1, 4)]);
        assert!(parse_grid(&GridSpec::Text("".into())).unwrap().is_empty());
        let items = parse_grid_items(&GridSpec::Text("1/3,oops".into())).unwrap();
        assert!(items[0].1.is_ok() && items[1].1.is_err());
        assert_eq!(parse_sizes("1,2, 8").unwrap(), vec![1, 2, 8]);
        assert!(parse_sizes("0").is_err());
    }
}
