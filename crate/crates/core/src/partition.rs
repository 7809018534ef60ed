//! Block shapes and set partitions of the qubit labels.
//!
//! Labels are 0-based in the API and 1-based in the text form
//! (`"1|2,3"` for `{0}|{1,2}`). A [`Partition`] is always kept canonical:
//! labels sorted within each block, blocks ordered by (size, smallest label).

use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};

/// Non-decreasing block sizes `M_1 ≤ … ≤ M_K`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape {
    sizes: Vec<usize>,
}

impl Shape {
    pub fn new(mut sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(domain(format!("invalid block sizes {sizes:?}")));
        }
        sizes.sort_unstable();
        Ok(Self { sizes })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn num_qubits(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn num_blocks(&self) -> usize {
        self.sizes.len()
    }

    /// Multiplies every block size by `factor`.
    pub fn scale(&self, factor: usize) -> Result<Shape> {
        if factor == 0 {
            return Err(domain("scale factor must be positive"));
        }
        Ok(Shape {
            sizes: self.sizes.iter().map(|m| m * factor).collect(),
        })
    }

    /// The partition whose blocks are consecutive label ranges, in size order.
    pub fn contiguous_partition(&self) -> Partition {
        let mut next = 0;
        let blocks = self
            .sizes
            .iter()
            .map(|&m| {
                let b: Vec<usize> = (next..next + m).collect();
                next += m;
                b
            })
            .collect();
        Partition::from_blocks_unchecked(blocks)
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sizes.iter().map(|m| m.to_string()).collect();
        f.write_str(&parts.join("|"))
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let sizes = s
            .split('|')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad block size {p:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let shape = Shape::new(sizes.clone())?;
        if shape.sizes != sizes {
            return Err(Error::Parse(format!(
                "shape {s:?} is not in non-decreasing order"
            )));
        }
        Ok(shape)
    }
}

pub fn scale_shape(shape: &Shape, factor: usize) -> Result<Shape> {
    shape.scale(factor)
}

fn check_range(n: usize, k: usize) -> Result<()> {
    if n == 0 || k == 0 || k > n {
        return Err(domain(format!("need 1 <= K <= N, got N={n}, K={k}")));
    }
    Ok(())
}

/// All shapes of `n` qubits into exactly `k` blocks, in lexicographic order.
pub fn shapes(n: usize, k: usize) -> Result<Vec<Shape>> {
    check_range(n, k)?;
    fn rec(rest: usize, parts: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Shape>) {
        if parts == 0 {
            if rest == 0 {
                out.push(Shape { sizes: cur.clone() });
            }
            return;
        }
        // the remaining parts are all >= m, so m·parts <= rest
        let mut m = min;
        while m * parts <= rest {
            cur.push(m);
            rec(rest - m, parts - 1, m, cur, out);
            cur.pop();
            m += 1;
        }
    }
    let mut out = Vec::new();
    rec(n, k, 1, &mut Vec::with_capacity(k), &mut out);
    Ok(out)
}

/// A set partition of `{0..N-1}` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Validates and canonicalizes a list of blocks over `0..n`.
    pub fn new(blocks: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        let mut seen = vec![false; n];
        for block in &blocks {
            if block.is_empty() {
                return Err(domain("partition contains an empty block"));
            }
            for &q in block {
                if q >= n {
                    return Err(Error::Index { index: q, bound: n });
                }
                if seen[q] {
                    return Err(domain(format!("qubit {} appears twice", q + 1)));
                }
                seen[q] = true;
            }
        }
        if let Some(q) = seen.iter().position(|s| !s) {
            return Err(domain(format!("qubit {} is not covered", q + 1)));
        }
        Ok(Self::from_blocks_unchecked(blocks))
    }

    fn from_blocks_unchecked(mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_by_key(|b| (b.len(), b[0]));
        Self { blocks }
    }

    /// Parses the `|`/`,` text form with 1-based labels.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let blocks = text
            .split('|')
            .map(|b| {
                b.split(',')
                    .map(|q| {
                        let q = q.trim();
                        match q.parse::<usize>() {
                            Ok(l) if l >= 1 => Ok(l - 1),
                            _ => Err(Error::Parse(format!("bad qubit label {q:?} in {text:?}"))),
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(blocks, n)
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn num_qubits(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn shape(&self) -> Shape {
        // canonical order already sorts blocks by size
        Shape {
            sizes: self.blocks.iter().map(Vec::len).collect(),
        }
    }

    /// Image of the partition under the relabeling `q ↦ sigma[q]`.
    pub fn relabel(&self, sigma: &[usize]) -> Result<Partition> {
        let n = self.num_qubits();
        crate::state::check_permutation(sigma, n)?;
        Ok(Self::from_blocks_unchecked(
            self.blocks
                .iter()
                .map(|b| b.iter().map(|&q| sigma[q]).collect())
                .collect(),
        ))
    }

    /// True when the canonical-form invariants hold.
    pub fn is_canonical(&self) -> bool {
        self.blocks.iter().all(|b| b.windows(2).all(|w| w[0] < w[1]))
            && self
                .blocks
                .windows(2)
                .all(|w| (w[0].len(), w[0][0]) < (w[1].len(), w[1][0]))
    }
}

pub fn shape_of(partition: &Partition) -> Shape {
    partition.shape()
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|q| (q + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        f.write_str(&parts.join("|"))
    }
}

/// Lazy enumeration of the set partitions of `{0..n-1}` into exactly `k`
/// blocks, walking restricted growth strings in lexicographic order.
#[derive(Debug, Clone)]
pub struct SetPartitions {
    n: usize,
    k: usize,
    rgs: Vec<usize>,
    started: bool,
    done: bool,
}

pub fn set_partitions(n: usize, k: usize) -> Result<SetPartitions> {
    check_range(n, k)?;
    Ok(SetPartitions {
        n,
        k,
        rgs: vec![0; n],
        started: false,
        done: false,
    })
}

impl SetPartitions {
    /// Smallest completion of `rgs[..from]` that uses exactly `k` blocks,
    /// given that `used` blocks appear in the prefix.
    fn fill_from(&mut self, from: usize, mut used: usize) {
        for j in from..self.n {
            if self.n - j > self.k - used {
                self.rgs[j] = 0;
            } else {
                self.rgs[j] = used;
                used += 1;
            }
        }
    }

    fn advance(&mut self) -> bool {
        // prefix maxima
        let mut prefix_max = vec![0usize; self.n];
        for i in 1..self.n {
            prefix_max[i] = prefix_max[i - 1].max(self.rgs[i]);
        }
        for i in (1..self.n).rev() {
            let cap = (prefix_max[i - 1] + 1).min(self.k - 1);
            let next = self.rgs[i] + 1;
            if next > cap {
                continue;
            }
            let used = prefix_max[i - 1].max(next) + 1;
            if used + (self.n - i - 1) < self.k {
                continue;
            }
            self.rgs[i] = next;
            self.fill_from(i + 1, used);
            return true;
        }
        false
    }

    fn current(&self) -> Partition {
        let mut blocks = vec![Vec::new(); self.k];
        for (q, &b) in self.rgs.iter().enumerate() {
            blocks[b].push(q);
        }
        Partition::from_blocks_unchecked(blocks)
    }
}

impl Iterator for SetPartitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.rgs[0] = 0;
            self.fill_from(1, 1);
        } else if !self.advance() {
            self.done = true;
            return None;
        }
        Some(self.current())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(v: &[Shape]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn shape_lists() {
        assert_eq!(labels(&shapes(4, 2).unwrap()), ["1|3", "2|2"]);
        assert_eq!(labels(&shapes(6, 3).unwrap()), ["1|1|4", "1|2|3", "2|2|2"]);
        assert_eq!(labels(&shapes(5, 5).unwrap()), ["1|1|1|1|1"]);
        assert_eq!(labels(&shapes(5, 1).unwrap()), ["5"]);
        assert!(shapes(3, 4).is_err());
        assert!(shapes(3, 0).is_err());
    }

    #[test]
    fn three_qubit_bipartitions() {
        let got: Vec<String> = set_partitions(3, 2).unwrap().map(|p| p.to_string()).collect();
        let mut sorted = got.clone();
        sorted.sort();
        assert_eq!(sorted, ["1|2,3", "2|1,3", "3|1,2"]);
        assert_eq!(set_partitions(4, 1).unwrap().count(), 1);
        assert_eq!(set_partitions(1, 1).unwrap().count(), 1);
    }

    #[test]
    fn shapes_of_partitions() {
        let p = Partition::parse("2|1,3", 3).unwrap();
        assert_eq!(p.shape().to_string(), "1|2");
        assert_eq!(shape_of(&Partition::parse("1,2|3,4", 4).unwrap()).to_string(), "2|2");
        let p = Partition::parse("3,4,5,6|2|1", 6).unwrap();
        assert_eq!(p.to_string(), "1|2|3,4,5,6");
        assert_eq!(p.shape().to_string(), "1|1|4");
    }

    #[test]
    fn scaling() {
        let s: Shape = "1|2".parse().unwrap();
        assert_eq!(scale_shape(&s, 2).unwrap().to_string(), "2|4");
        assert_eq!(scale_shape(&s, 1).unwrap(), s);
        let t: Shape = "2|2|2".parse().unwrap();
        assert_eq!(t.scale(3).unwrap().to_string(), "6|6|6");
        assert_eq!(t.scale(3).unwrap().num_qubits(), 18);
        assert!(t.scale(0).is_err());
    }

    #[test]
    fn parse_errors() {
        assert!(Partition::parse("1|2", 3).is_err());
        assert!(Partition::parse("1,2|2,3", 3).is_err());
        assert!(Partition::parse("0|1,2", 3).is_err());
        assert!(Partition::parse("1|a", 2).is_err());
        assert!(Partition::parse("1|4", 3).is_err());
        assert!("2|1".parse::<Shape>().is_err());
    }

    #[test]
    fn relabel_moves_blocks() {
        let p = Partition::parse("1|2,3", 3).unwrap();
        assert_eq!(p.relabel(&[2, 0, 1]).unwrap().to_string(), "3|1,2");
    }

    #[test]
    fn contiguous_representatives() {
        let s: Shape = "1|2|3".parse().unwrap();
        assert_eq!(s.contiguous_partition().to_string(), "1|2,3|4,5,6");
    }
}
