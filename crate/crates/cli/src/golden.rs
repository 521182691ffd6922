//! Reference tables shipped with the binary.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use crystgar::posetengine::CoarseTable;

pub const COARSE_G2: &str = include_str!("../data/coarse_g2.txt");
pub const COARSE_E8: &str = include_str!("../data/coarse_e8.txt");
pub const HORIZONTAL: &str = include_str!("../data/horizontal.txt");
pub const NCB_COUNTS: &str = include_str!("../data/ncb_counts.txt");
pub const FACTOR_SIZES: &str = include_str!("../data/factor_sizes.txt");
pub const G2_RELATIONS: &str = include_str!("../data/g2_relations.txt");

fn lines(src: &str) -> impl Iterator<Item = &str> {
    src.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

fn ints<T: std::str::FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    s.split_whitespace().map(|x| x.parse::<T>().with_context(|| format!("bad number {x:?}"))).collect()
}

pub fn coarse(src: &str) -> Result<CoarseTable> {
    let mut rows: BTreeMap<&str, Vec<u64>> = BTreeMap::new();
    for l in lines(src) {
        let (name, rest) = l.split_once(' ').ok_or_else(|| anyhow!("bad row {l:?}"))?;
        rows.insert(name, ints(rest)?);
    }
    let mut take = |k: &str| rows.remove(k).ok_or_else(|| anyhow!("missing row {k}"));
    Ok(CoarseTable { top: take("top")?, middle: take("middle")?, bottom: take("bottom")? })
}

/// Type name to sorted component names.
pub fn horizontal() -> Result<Vec<(String, Vec<String>)>> {
    lines(HORIZONTAL)
        .map(|l| {
            let (t, rest) = l.split_once(':').ok_or_else(|| anyhow!("bad row {l:?}"))?;
            let mut comps: Vec<String> = rest.split_whitespace().map(String::from).collect();
            comps.sort();
            Ok((t.trim().to_string(), comps))
        })
        .collect()
}

pub fn ncb_counts() -> Result<Vec<(usize, usize)>> {
    lines(NCB_COUNTS)
        .map(|l| match ints::<usize>(l)?.as_slice() {
            [n, c] => Ok((*n, *c)),
            _ => bail!("bad row {l:?}"),
        })
        .collect()
}

/// Type, interval size and middle-group ranks.
pub fn factor_sizes() -> Result<Vec<(String, usize, Vec<usize>)>> {
    lines(FACTOR_SIZES)
        .map(|l| {
            let (t, rest) = l.split_once(' ').ok_or_else(|| anyhow!("bad row {l:?}"))?;
            let v = ints::<usize>(rest)?;
            let (size, ranks) = v.split_first().ok_or_else(|| anyhow!("bad row {l:?}"))?;
            Ok((t.to_string(), *size, ranks.to_vec()))
        })
        .collect()
}

/// Relation families as `(kind, words)`; a line reads `kind: w = w = ...`.
pub fn g2_relations() -> Vec<(String, Vec<Vec<String>>)> {
    lines(G2_RELATIONS)
        .filter_map(|l| l.split_once(':'))
        .map(|(kind, rest)| {
            let words = rest.split('=').map(|w| w.split_whitespace().map(String::from).collect()).collect();
            (kind.trim().to_string(), words)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_parse() {
        let g2 = coarse(COARSE_G2).unwrap();
        assert_eq!(g2.middle, vec![6, 6]);
        let e8 = coarse(COARSE_E8).unwrap();
        assert!(e8.is_symmetric());
        assert_eq!(e8.bottom.len(), 8);
        assert!(horizontal().unwrap().iter().any(|(t, c)| t == "E8" && c == &["A1", "A2", "A4"]));
        assert_eq!(ncb_counts().unwrap().last(), Some(&(6, 924)));
        assert_eq!(factor_sizes().unwrap()[0].1, 30240);
        assert_eq!(g2_relations().len(), 8);
    }
}
