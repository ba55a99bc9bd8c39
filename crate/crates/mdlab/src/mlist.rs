//! `--m` list syntax: comma-separated items, each an integer, a power `2^j`,
//! or a sweep `2^j..2^k` over consecutive powers of two.

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MListError {
    #[error("empty m list")]
    Empty,
    #[error("cannot parse {0:?} as an item count")]
    Item(String),
    #[error("m must be at least 1")]
    Zero,
    #[error("sweep {0:?} runs backwards")]
    Backwards(String),
}

fn parse_count(s: &str) -> Result<(usize, Option<u32>), MListError> {
    let bad = || MListError::Item(s.into());
    let s = s.trim();
    if let Some(exp) = s.strip_prefix("2^") {
        let j: u32 = exp.parse().map_err(|_| bad())?;
        let m = 1usize
            .checked_shl(j)
            .filter(|_| j < usize::BITS)
            .ok_or_else(bad)?;
        return Ok((m, Some(j)));
    }
    let m: usize = s.parse().map_err(|_| bad())?;
    Ok((m, None))
}

pub fn parse_m_list(s: &str) -> Result<Vec<usize>, MListError> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        if let Some((lo, hi)) = item.split_once("..") {
            let (Some(a), Some(b)) = (parse_count(lo)?.1, parse_count(hi)?.1) else {
                return Err(MListError::Item(item.into()));
            };
            if a > b {
                return Err(MListError::Backwards(item.into()));
            }
            out.extend((a..=b).map(|j| 1usize << j));
        } else {
            out.push(parse_count(item)?.0);
        }
    }
    if out.is_empty() {
        return Err(MListError::Empty);
    }
    if out.contains(&0) {
        return Err(MListError::Zero);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!(parse_m_list("8").unwrap(), vec![8]);
        assert_eq!(parse_m_list("4, 16,100").unwrap(), vec![4, 16, 100]);
        assert_eq!(parse_m_list("2^3").unwrap(), vec![8]);
        assert_eq!(parse_m_list("2^2..2^5").unwrap(), vec![4, 8, 16, 32]);
        assert_eq!(parse_m_list("3,2^1..2^2").unwrap(), vec![3, 2, 4]);
        let sweep = parse_m_list("2^10..2^20").unwrap();
        assert_eq!(sweep.len(), 11);
        assert_eq!(sweep[10], 1 << 20);
    }

    #[test]
    fn rejects() {
        assert_eq!(parse_m_list(""), Err(MListError::Empty));
        assert_eq!(parse_m_list("0"), Err(MListError::Zero));
        assert!(matches!(parse_m_list("4..16"), Err(MListError::Item(_))));
        assert!(matches!(
            parse_m_list("2^5..2^2"),
            Err(MListError::Backwards(_))
        ));
        assert!(matches!(parse_m_list("x"), Err(MListError::Item(_))));
        assert!(matches!(parse_m_list("2^99"), Err(MListError::Item(_))));
    }
}
