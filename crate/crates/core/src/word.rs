//! Finite words: parsing, printing and length-lexicographic enumeration.

use crate::error::{Error, Result};

/// Longest word accepted by the parsers.
pub const MAX_WORD_LEN: usize = 4096;

/// Parses a binary word such as `"0110"`. The empty string is the empty word.
pub fn parse_binary(s: &str) -> Result<Vec<u8>> {
    let s = s.trim();
    if s.len() > MAX_WORD_LEN {
        return Err(Error::parse("binary word too long"));
    }
    s.bytes()
        .map(|b| match b {
            b'0' => Ok(0),
            b'1' => Ok(1),
            _ => Err(Error::parse(format!(
                "invalid binary symbol {:?}",
                b as char
            ))),
        })
        .collect()
}

pub fn format_binary(w: &[u8]) -> String {
    w.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}

/// Parses a comma separated word over `{-1, 0, 1}` such as `"-1,0,1"`.
pub fn parse_triadic(s: &str) -> Result<Vec<i8>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if s.len() > 3 * MAX_WORD_LEN {
        return Err(Error::parse("triadic word too long"));
    }
    s.split(',')
        .map(|t| match t.trim() {
            "-1" => Ok(-1),
            "0" => Ok(0),
            "1" => Ok(1),
            other => Err(Error::parse(format!("invalid triadic symbol {other:?}"))),
        })
        .collect()
}

pub fn format_triadic(w: &[i8]) -> String {
    w.iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Parses a comma separated sequence of naturals such as `"3,0,1"`.
pub fn parse_naturals(s: &str) -> Result<Vec<u32>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() > MAX_WORD_LEN {
        return Err(Error::parse("sequence too long"));
    }
    parts
        .into_iter()
        .map(|t| {
            let t = t.trim();
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::parse(format!("invalid natural {t:?}")));
            }
            t.parse::<u32>()
                .map_err(|e| Error::parse(format!("invalid natural {t:?}: {e}")))
        })
        .collect()
}

pub fn format_naturals(w: &[u32]) -> String {
    w.iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// All binary words of length `n` in lexicographic order (`0 < 1`).
pub fn binary_words(n: usize) -> impl Iterator<Item = Vec<u8>> {
    assert!(n < 64, "word length too large to enumerate");
    (0..1u64 << n).map(move |i| index_to_word(i, n))
}

/// All binary words of length `≤ d` in length-lexicographic order.
pub fn binary_words_upto(d: usize) -> impl Iterator<Item = Vec<u8>> {
    (0..=d).flat_map(binary_words)
}

/// The word of length `n` whose bits, read most significant first, spell `i`.
pub fn index_to_word(i: u64, n: usize) -> Vec<u8> {
    (0..n).map(|k| ((i >> (n - 1 - k)) & 1) as u8).collect()
}

/// Inverse of [`index_to_word`].
pub fn word_to_index(w: &[u8]) -> u64 {
    assert!(w.len() < 64, "word too long for an index");
    w.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
}

/// Position of `w` in the length-lexicographic enumeration of all binary words.
pub fn length_lex_rank(w: &[u8]) -> u64 {
    (1u64 << w.len()) - 1 + word_to_index(w)
}

/// Inverse of [`length_lex_rank`].
pub fn length_lex_unrank(mut r: u64) -> Vec<u8> {
    let mut n = 0;
    while r >= 1u64 << n {
        r -= 1u64 << n;
        n += 1;
    }
    index_to_word(r, n)
}

pub fn is_prefix<T: PartialEq>(p: &[T], w: &[T]) -> bool {
    p.len() <= w.len() && &w[..p.len()] == p
}

pub fn comparable<T: PartialEq>(a: &[T], b: &[T]) -> bool {
    is_prefix(a, b) || is_prefix(b, a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_round_trip() {
        assert_eq!(parse_binary("0110").unwrap(), vec![0, 1, 1, 0]);
        assert_eq!(format_binary(&[1, 0]), "10");
        assert_eq!(parse_binary("").unwrap(), Vec::<u8>::new());
        assert!(parse_binary("012").is_err());
    }

    #[test]
    fn triadic_round_trip() {
        let w = parse_triadic("-1,0,1").unwrap();
        assert_eq!(w, vec![-1, 0, 1]);
        assert_eq!(format_triadic(&w), "-1,0,1");
        assert!(parse_triadic("2").is_err());
        assert!(parse_triadic("-1,,0").is_err());
    }

    #[test]
    fn naturals_round_trip() {
        assert_eq!(parse_naturals("3,0,12").unwrap(), vec![3, 0, 12]);
        assert!(parse_naturals("3,-1").is_err());
        assert_eq!(format_naturals(&[4, 5]), "4,5");
    }

    #[test]
    fn length_lex_ranks() {
        let all: Vec<_> = binary_words_upto(3).collect();
        assert_eq!(all.len(), 15);
        for (r, w) in all.iter().enumerate() {
            assert_eq!(length_lex_rank(w), r as u64);
            assert_eq!(&length_lex_unrank(r as u64), w);
        }
        assert_eq!(all[1], vec![0]);
        assert_eq!(all[4], vec![0, 1]);
    }

    #[test]
    fn prefixes() {
        assert!(is_prefix(&[0u8, 1], &[0, 1, 1]));
        assert!(!is_prefix(&[1u8], &[0, 1]));
        assert!(comparable(&[0u8, 1, 1], &[0, 1]));
        assert!(!comparable(&[0u8, 0], &[0, 1]));
    }
}
