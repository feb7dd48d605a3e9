use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::Distribution;
use crate::bits::BitString;
use crate::error::{ensure, Error, Result};
use crate::exact::ratio_string;

/// Codewords indexed by source symbol.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrefixCode {
    #[serde(serialize_with = "ser_words")]
    codewords: Vec<BitString>,
}

fn ser_words<S: serde::Serializer>(w: &[BitString], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(w.iter().map(|c| c.bits().iter().map(|b| (b'0' + b) as char).collect::<String>()))
}

impl PrefixCode {
    pub fn new(codewords: Vec<BitString>) -> Result<Self> {
        let code = PrefixCode { codewords };
        ensure!(is_prefix_free(&code.codewords), Validation, "codeword set is not prefix-free");
        Ok(code)
    }

    pub fn codewords(&self) -> &[BitString] {
        &self.codewords
    }

    pub fn lengths(&self) -> Vec<u32> {
        self.codewords.iter().map(|c| c.len() as u32).collect()
    }

    pub fn kraft(&self) -> BigRational {
        kraft_sum(&self.lengths())
    }
}

/// `Σ 2^-l` exactly.
pub fn kraft_sum(lengths: &[u32]) -> BigRational {
    let Some(&lmax) = lengths.iter().max() else {
        return BigRational::zero();
    };
    let num: BigUint = lengths.iter().map(|&l| BigUint::one() << (lmax - l)).sum();
    BigRational::new(BigInt::from(num), BigInt::one() << lmax)
}

/// No codeword is a prefix of another (duplicates count as a violation).
pub fn is_prefix_free(words: &[BitString]) -> bool {
    let mut sorted: Vec<&BitString> = words.iter().collect();
    sorted.sort();
    sorted.windows(2).all(|w| !w[0].is_prefix_of(w[1]))
}

/// Canonical code with the requested lengths: symbols taken by (length, index), each given
/// the lexicographically first word that keeps the set prefix-free.
pub fn build_prefix_code(lengths: &[u32]) -> Result<PrefixCode> {
    let k = kraft_sum(lengths);
    if k > BigRational::one() {
        return Err(Error::InfeasibleLengths(ratio_string(&k)));
    }
    let mut order: Vec<usize> = (0..lengths.len()).collect();
    order.sort_by_key(|&i| (lengths[i], i));
    let mut codewords = vec![BitString::empty(); lengths.len()];
    let mut next = BigUint::zero();
    let mut prev_len = 0u32;
    for (pos, &i) in order.iter().enumerate() {
        let l = lengths[i];
        if pos > 0 {
            next = (next + 1u32) << (l - prev_len);
        }
        prev_len = l;
        let bits = (0..l).rev().map(|b| next.bit(b as u64) as u8).collect();
        codewords[i] = BitString::from_bits_unchecked(bits);
    }
    Ok(PrefixCode { codewords })
}

/// `Σ P(x) |D(x)|`.
pub fn average_codeword_length(code: &PrefixCode, p: &Distribution) -> Result<f64> {
    ensure!(code.codewords.len() >= p.len(), Usage, "code covers {} symbols, law has {}", code.codewords.len(), p.len());
    Ok(p.weights().iter().zip(&code.codewords).map(|(w, c)| w * c.len() as f64).sum())
}

enum Node {
    Leaf(usize),
    Inner(Box<Node>, Box<Node>),
}

/// Huffman code; ties broken by (weight, smallest symbol index in the subtree).
pub fn huffman_code(p: &Distribution) -> PrefixCode {
    let n = p.len();
    if n == 1 {
        return PrefixCode { codewords: vec![BitString::empty()] };
    }
    #[derive(PartialEq)]
    struct W(f64);
    impl Eq for W {}
    impl PartialOrd for W {
        fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(o))
        }
    }
    impl Ord for W {
        fn cmp(&self, o: &Self) -> std::cmp::Ordering {
            self.0.total_cmp(&o.0)
        }
    }
    let mut nodes: Vec<Option<Node>> = (0..n).map(|i| Some(Node::Leaf(i))).collect();
    let mut heap: BinaryHeap<Reverse<(W, usize, usize)>> =
        p.weights().iter().enumerate().map(|(i, &w)| Reverse((W(w), i, i))).collect();
    while heap.len() > 1 {
        let Reverse((wa, fa, ia)) = heap.pop().unwrap();
        let Reverse((wb, fb, ib)) = heap.pop().unwrap();
        let a = nodes[ia].take().unwrap();
        let b = nodes[ib].take().unwrap();
        nodes.push(Some(Node::Inner(Box::new(a), Box::new(b))));
        heap.push(Reverse((W(wa.0 + wb.0), fa.min(fb), nodes.len() - 1)));
    }
    let Reverse((_, _, root)) = heap.pop().unwrap();
    let mut codewords = vec![BitString::empty(); n];
    let mut stack = vec![(nodes[root].take().unwrap(), Vec::new())];
    while let Some((node, path)) = stack.pop() {
        match node {
            Node::Leaf(i) => codewords[i] = BitString::from_bits_unchecked(path),
            Node::Inner(a, b) => {
                let mut pa = path.clone();
                pa.push(0);
                let mut pb = path;
                pb.push(1);
                stack.push((*a, pa));
                stack.push((*b, pb));
            }
        }
    }
    PrefixCode { codewords }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bs;
    use crate::coding::shannon_entropy;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn kraft_examples() {
        assert_eq!(kraft_sum(&[1, 2, 3, 3]), r(1, 1));
        assert_eq!(kraft_sum(&[1, 1]), r(1, 1));
        assert_eq!(kraft_sum(&[1, 1, 1]), r(3, 2));
        assert_eq!(kraft_sum(&[]), r(0, 1));
    }

    #[test]
    fn canonical_examples() {
        let c = build_prefix_code(&[1, 2, 3, 3]).unwrap();
        assert_eq!(c.codewords(), [bs("0"), bs("10"), bs("110"), bs("111")]);
        let c = build_prefix_code(&[2, 2, 2, 2]).unwrap();
        assert_eq!(c.codewords(), [bs("00"), bs("01"), bs("10"), bs("11")]);
        assert!(matches!(build_prefix_code(&[1, 1, 1]), Err(Error::InfeasibleLengths(_))));
        let c = build_prefix_code(&[3, 1, 2]).unwrap();
        assert_eq!(c.codewords(), [bs("110"), bs("0"), bs("10")]);
        assert_eq!(build_prefix_code(&[0]).unwrap().codewords(), [BitString::empty()]);
    }

    #[test]
    fn average_length_examples() {
        let full = build_prefix_code(&[2, 2, 2, 2]).unwrap();
        let u4 = Distribution::uniform(4);
        assert_eq!(average_codeword_length(&full, &u4).unwrap(), 2.0);
        let c = build_prefix_code(&[1, 2, 3, 3]).unwrap();
        let dy = Distribution::from_f64(vec![0.5, 0.25, 0.125, 0.125]).unwrap();
        assert_eq!(average_codeword_length(&c, &dy).unwrap(), 1.75);
        assert_eq!(average_codeword_length(&c, &u4).unwrap(), 2.25);
        assert!(average_codeword_length(&c, &Distribution::uniform(5)).is_err());
    }

    #[test]
    fn huffman_examples() {
        let dy = Distribution::from_f64(vec![0.5, 0.25, 0.125, 0.125]).unwrap();
        let h = huffman_code(&dy);
        assert_eq!(average_codeword_length(&h, &dy).unwrap(), 1.75);
        assert_eq!(shannon_entropy(&dy), 1.75);
        let u3 = Distribution::uniform(3);
        let l = average_codeword_length(&huffman_code(&u3), &u3).unwrap();
        assert!((l - 5.0 / 3.0).abs() < 1e-12);
        let deg = Distribution::from_f64(vec![1.0, 0.0]).unwrap();
        assert!(average_codeword_length(&huffman_code(&deg), &deg).unwrap() <= 1.0);
        let one = Distribution::from_f64(vec![1.0]).unwrap();
        assert_eq!(average_codeword_length(&huffman_code(&one), &one).unwrap(), 0.0);
    }

    #[test]
    fn huffman_is_deterministic_on_ties() {
        let u4 = Distribution::uniform(4);
        let a = huffman_code(&u4);
        assert_eq!(a, huffman_code(&u4));
        assert!(is_prefix_free(a.codewords()));
        assert_eq!(a.lengths(), [2, 2, 2, 2]);
    }

    #[test]
    fn prefix_free_detection() {
        assert!(is_prefix_free(&[bs("0"), bs("10"), bs("11")]));
        assert!(!is_prefix_free(&[bs("0"), bs("01")]));
        assert!(!is_prefix_free(&[bs("1"), bs("1")]));
        assert!(PrefixCode::new(vec![bs("1"), bs("10")]).is_err());
    }
}
