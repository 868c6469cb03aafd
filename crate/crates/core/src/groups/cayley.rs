//! Cayley-table files.
//!
//! Line 1 holds the order `n`; lines 2..=n+1 hold `n` whitespace-separated
//! indices in `0..n`, row `g` column `h` giving the index of `g·h`. Index 0
//! must be the identity.

use std::path::Path;

use rand::Rng;

use crate::{Error, Result};

/// Associativity is checked on all triples up to this many, and on this many
/// sampled triples beyond.
const ASSOCIATIVITY_TRIPLES: u64 = 1_000_000;

fn malformed(row: Option<usize>, reason: impl Into<String>) -> Error {
    Error::MalformedCayleyTable {
        row,
        reason: reason.into(),
    }
}

pub fn read_cayley_table(path: &Path) -> Result<Vec<u32>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_cayley_table(&text)
}

/// Parses and audits a table, returning it row-major.
pub fn parse_cayley_table(text: &str) -> Result<Vec<u32>> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| malformed(None, "empty file"))?;
    let n: usize = header
        .parse()
        .map_err(|_| malformed(None, format!("first line {header:?} is not an order")))?;
    if n == 0 {
        return Err(malformed(None, "order must be positive"));
    }
    if n > super::STRUCTURE_CAP as usize {
        return Err(malformed(
            None,
            format!("order {n} exceeds {}", super::STRUCTURE_CAP),
        ));
    }
    let mut table = Vec::with_capacity(n * n);
    for row in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| malformed(Some(row), format!("expected {n} rows")))?;
        let before = table.len();
        for tok in line.split_whitespace() {
            let v: usize = tok
                .parse()
                .map_err(|_| malformed(Some(row), format!("bad entry {tok:?}")))?;
            if v >= n {
                return Err(malformed(Some(row), format!("entry {v} out of range")));
            }
            table.push(v as u32);
        }
        if table.len() - before != n {
            return Err(malformed(Some(row), format!("expected {n} entries")));
        }
    }
    if lines.next().is_some() {
        return Err(malformed(None, "trailing rows after the table"));
    }
    validate_table(n, &table)?;
    Ok(table)
}

pub(crate) fn validate_table(n: usize, t: &[u32]) -> Result<()> {
    if t.len() != n * n {
        return Err(malformed(None, "table size does not match order"));
    }
    let at = |a: usize, b: usize| t[a * n + b] as usize;
    for g in 0..n {
        if at(0, g) != g {
            return Err(malformed(
                Some(0),
                format!("index 0 is not a left identity at column {g}"),
            ));
        }
        if at(g, 0) != g {
            return Err(malformed(Some(g), "index 0 is not a right identity"));
        }
    }
    for g in 0..n {
        let right = (0..n).find(|&h| at(g, h) == 0);
        match right {
            Some(h) if at(h, g) == 0 => {}
            _ => return Err(malformed(Some(g), "element has no two-sided inverse")),
        }
        let mut seen = vec![false; n];
        for h in 0..n {
            let v = at(g, h);
            if seen[v] {
                return Err(malformed(Some(g), format!("row repeats entry {v}")));
            }
            seen[v] = true;
        }
    }
    let full = (n as u64).pow(3);
    let check = |a: usize, b: usize, c: usize| -> Result<()> {
        if at(at(a, b), c) != at(a, at(b, c)) {
            Err(malformed(
                Some(a),
                format!("associativity fails for ({a}, {b}, {c})"),
            ))
        } else {
            Ok(())
        }
    };
    if full <= ASSOCIATIVITY_TRIPLES {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    check(a, b, c)?;
                }
            }
        }
    } else {
        let mut rng = crate::rng::stream(n as u64, 0);
        for _ in 0..ASSOCIATIVITY_TRIPLES {
            check(
                rng.random_range(0..n),
                rng.random_range(0..n),
                rng.random_range(0..n),
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const S3: &str = "6
0 1 2 3 4 5
1 2 0 4 5 3
2 0 1 5 3 4
3 5 4 0 2 1
4 3 5 1 0 2
5 4 3 2 1 0
";

    #[test]
    fn parses_s3() {
        let t = parse_cayley_table(S3).unwrap();
        assert_eq!(t.len(), 36);
    }

    #[test]
    fn broken_inverse_names_row() {
        let bad = S3.replace("3 5 4 0 2 1", "3 5 4 1 2 0");
        match parse_cayley_table(&bad) {
            Err(Error::MalformedCayleyTable { row: Some(r), .. }) => assert!(r <= 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_empty_and_ragged() {
        assert!(matches!(
            parse_cayley_table(""),
            Err(Error::MalformedCayleyTable { .. })
        ));
        assert!(parse_cayley_table("2\n0 1\n1\n").is_err());
        assert!(parse_cayley_table("2\n0 1\n1 0\n0 1\n").is_err());
        assert!(parse_cayley_table("2\n0 1\n1 2\n").is_err());
    }

    #[test]
    fn rejects_non_associative_latin_square() {
        // A loop of order 5 that is not a group.
        let t = "5
0 1 2 3 4
1 0 3 4 2
2 4 0 1 3
3 2 4 0 1
4 3 1 2 0
";
        let err = parse_cayley_table(t).unwrap_err();
        assert!(err.to_string().contains("associativity"), "{err}");
    }
}
