//! Partitions, permutations, pair partitions and symmetric group characters.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{factorial, Rational};

/// Integer partition with parts stored in weakly decreasing order.
///
/// The derived ordering is lexicographic on the parts, so among partitions of
/// equal weight "greater" means earlier in reverse-lexicographic listing.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Sorts the parts and drops zeros.
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Part `i` (0-based), zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// `(part, multiplicity)` pairs in decreasing part order.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// The partition with every part doubled.
    pub fn doubled(&self) -> Partition {
        Partition(self.0.iter().map(|p| 2 * p).collect())
    }

    /// Order of the centralizer of a permutation with this cycle type.
    pub fn centralizer_order(&self) -> BigInt {
        self.multiplicities()
            .into_iter()
            .fold(BigInt::from(1), |acc, (p, m)| {
                acc * BigInt::from(p).pow(m) * factorial(m as u64)
            })
    }

    /// Exponent vectors of all distinct monomials of type `self` in `n` variables.
    pub fn monomial_exponents(&self, n: usize) -> Vec<Vec<u32>> {
        if self.len() > n {
            return Vec::new();
        }
        let mut v: Vec<u32> = self.0.clone();
        v.resize(n, 0);
        v.sort_unstable();
        let mut out = vec![v.clone()];
        while next_permutation(&mut v) {
            out.push(v.clone());
        }
        out
    }
}

/// Advances to the next lexicographic arrangement; false when `v` was the last.
fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad partition part {p:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Partition::new(parts))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// All partitions of `k` in reverse-lexicographic order.
pub fn partitions_of(k: u32) -> Vec<Partition> {
    fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, k, &mut Vec::new(), &mut out);
    out
}

/// True iff `mu` is below `lambda` in dominance order.
pub fn dominance_leq(mu: &Partition, lambda: &Partition) -> Result<bool> {
    if mu.weight() != lambda.weight() {
        return Err(Error::UnequalWeight(mu.weight(), lambda.weight()));
    }
    let (mut a, mut b) = (0u32, 0u32);
    for i in 0..mu.len().max(lambda.len()) {
        a += mu.part(i);
        b += lambda.part(i);
        if a > b {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `m_lambda(1^n)`: the number of distinct monomials of type `lambda` in `n` variables.
pub fn monomial_principal(lambda: &Partition, n: u32) -> Rational {
    let l = lambda.len() as u32;
    if l > n {
        return Rational::zero();
    }
    let mut den = factorial((n - l) as u64);
    for (_, m) in lambda.multiplicities() {
        den *= factorial(m as u64);
    }
    Rational::from_bigints(factorial(n as u64), den)
}

/// Evaluates `m_lambda` at a point.
pub fn monomial_eval(lambda: &Partition, t: &[f64]) -> f64 {
    lambda
        .monomial_exponents(t.len())
        .iter()
        .map(|e| t.iter().zip(e).map(|(x, &p)| x.powi(p as i32)).product::<f64>())
        .sum()
}

/// A permutation of {1..k}; stored 0-based.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(k: usize) -> Self {
        Permutation((0..k).collect())
    }

    /// From a 1-based image list: `images[i-1] = pi(i)`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let k = images.len();
        let mut seen = vec![false; k];
        let mut v = Vec::with_capacity(k);
        for &x in images {
            if x == 0 || x > k || seen[x - 1] {
                return Err(Error::Parse(format!("not a permutation: {images:?}")));
            }
            seen[x - 1] = true;
            v.push(x - 1);
        }
        Ok(Permutation(v))
    }

    /// From 1-based disjoint cycles in S_k, e.g. `&[&[2, 4, 3]]` for (243).
    pub fn from_cycles(k: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut v: Vec<usize> = (0..k).collect();
        let mut seen = vec![false; k];
        for c in cycles {
            for (i, &a) in c.iter().enumerate() {
                let b = c[(i + 1) % c.len()];
                if a == 0 || a > k || b == 0 || b > k || seen[a - 1] {
                    return Err(Error::Parse(format!("bad cycle {c:?} in S_{k}")));
                }
                seen[a - 1] = true;
                v[a - 1] = b - 1;
            }
        }
        Ok(Permutation(v))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Image of the 1-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.0[i - 1] + 1
    }

    /// 1-based image list.
    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|x| x + 1).collect()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree());
        Permutation(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut v = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            v[x] = i;
        }
        Permutation(v)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Cycles as 1-based lists, each starting at its smallest element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for s in 0..self.0.len() {
            if seen[s] {
                continue;
            }
            let mut c = Vec::new();
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                c.push(x + 1);
                x = self.0[x];
            }
            out.push(c);
        }
        out
    }

    pub fn cycle_type(&self) -> Partition {
        Partition::new(self.cycles().iter().map(|c| c.len() as u32).collect())
    }

    /// Coset type in S_2k: half the component sizes of the graph joining
    /// {2i-1, 2i} and {σ(2i-1), σ(2i)}.
    pub fn coset_type(&self) -> Partition {
        let n = self.0.len();
        assert!(n % 2 == 0, "coset type needs even degree");
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        let mut union = |a: usize, b: usize| {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        };
        for i in 0..n / 2 {
            union(2 * i, 2 * i + 1);
            union(self.0[2 * i], self.0[2 * i + 1]);
        }
        let mut sizes: BTreeMap<usize, u32> = BTreeMap::new();
        for x in 0..n {
            *sizes.entry(find(&mut parent, x)).or_default() += 1;
        }
        Partition::new(sizes.values().map(|s| s / 2).collect())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "e");
        }
        for c in cycles {
            let s: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", s.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All permutations of degree `k`, in lexicographic order of image lists.
pub fn all_permutations(k: usize) -> Vec<Permutation> {
    let mut v: Vec<usize> = (0..k).collect();
    let mut out = vec![Permutation(v.clone())];
    while next_permutation(&mut v) {
        out.push(Permutation(v.clone()));
    }
    out
}

/// A perfect matching of {1..2k}, pairs sorted by smaller element.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PairPartition {
    pairs: Vec<(usize, usize)>,
}

impl PairPartition {
    pub fn new(mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        for p in pairs.iter_mut() {
            if p.0 > p.1 {
                *p = (p.1, p.0);
            }
        }
        pairs.sort_unstable();
        let mut points: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        points.sort_unstable();
        if points != (1..=2 * pairs.len()).collect::<Vec<_>>() {
            return Err(Error::Parse(format!("not a pair partition: {pairs:?}")));
        }
        Ok(PairPartition { pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// The permutation `2i-1 -> a_i, 2i -> b_i`.
    pub fn to_permutation(&self) -> Permutation {
        let images: Vec<usize> = self.pairs.iter().flat_map(|&(a, b)| [a - 1, b - 1]).collect();
        Permutation(images)
    }
}

impl fmt::Display for PairPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.pairs.iter().map(|(a, b)| format!("{{{a},{b}}}")).collect();
        write!(f, "{{{}}}", s.join(","))
    }
}

/// All (2k-1)!! pair partitions of {1..2k}.
pub fn pair_partitions(k: usize) -> Vec<PairPartition> {
    fn rec(free: &mut Vec<usize>, cur: &mut Vec<(usize, usize)>, out: &mut Vec<PairPartition>) {
        if free.is_empty() {
            out.push(PairPartition { pairs: cur.clone() });
            return;
        }
        let a = free.remove(0);
        for i in 0..free.len() {
            let b = free.remove(i);
            cur.push((a, b));
            rec(free, cur, out);
            cur.pop();
            free.insert(i, b);
        }
        free.insert(0, a);
    }
    let mut out = Vec::new();
    rec(&mut (1..=2 * k).collect(), &mut Vec::new(), &mut out);
    out
}

/// The hyperoctahedral subgroup H_k of S_2k, sorted.
pub fn hyperoctahedral(k: usize) -> Vec<Permutation> {
    let n = 2 * k;
    let mut gens = Vec::new();
    for i in 1..=k {
        gens.push(Permutation::from_cycles(n, &[&[2 * i - 1, 2 * i]]).unwrap());
        for j in i + 1..=k {
            gens.push(Permutation::from_cycles(n, &[&[2 * i - 1, 2 * j - 1], &[2 * i, 2 * j]]).unwrap());
        }
    }
    let id = Permutation::identity(n);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in &gens {
            let q = g.compose(&p);
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    let mut out: Vec<Permutation> = seen.into_iter().collect();
    out.sort();
    out
}

type CharKey = (Vec<u32>, Vec<u32>);

fn character_cache() -> &'static Mutex<HashMap<CharKey, i64>> {
    static CACHE: OnceLock<Mutex<HashMap<CharKey, i64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Irreducible character value χ^λ(μ) by the Murnaghan–Nakayama rule.
pub fn character(lambda: &Partition, mu: &Partition) -> Result<i64> {
    if lambda.weight() != mu.weight() {
        return Err(Error::UnequalWeight(lambda.weight(), mu.weight()));
    }
    Ok(mn(lambda.parts(), mu.parts()))
}

fn mn(lambda: &[u32], mu: &[u32]) -> i64 {
    if mu.is_empty() {
        return 1;
    }
    let key = (lambda.to_vec(), mu.to_vec());
    if let Some(&v) = character_cache().lock().unwrap().get(&key) {
        return v;
    }
    // Beta-set: removing a rim hook of length r moves one bead down by r.
    let l = lambda.len();
    let beta: Vec<u32> = lambda
        .iter()
        .enumerate()
        .map(|(i, &p)| p + (l - 1 - i) as u32)
        .collect();
    let r = mu[0];
    let rest = &mu[1..];
    let mut total = 0i64;
    for (idx, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let between = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut nb = beta.clone();
        nb[idx] = target;
        nb.sort_unstable_by(|a, c| c.cmp(a));
        let parts: Vec<u32> = nb
            .iter()
            .enumerate()
            .map(|(i, &x)| x - (l - 1 - i) as u32)
            .filter(|&p| p > 0)
            .collect();
        let sign = if between % 2 == 0 { 1 } else { -1 };
        total += sign * mn(&parts, rest);
    }
    character_cache().lock().unwrap().insert(key, total);
    total
}

/// Character table of S_k; rows and columns in reverse-lexicographic order.
#[derive(Clone, Debug, Serialize)]
pub struct CharacterTable {
    pub k: u32,
    pub partitions: Vec<Partition>,
    /// `values[row][col] = χ^{partitions[row]}(partitions[col])`.
    pub values: Vec<Vec<i64>>,
}

impl CharacterTable {
    pub fn new(k: u32) -> Self {
        let partitions = partitions_of(k);
        let values = partitions
            .iter()
            .map(|l| partitions.iter().map(|m| mn(l.parts(), m.parts())).collect())
            .collect();
        CharacterTable { k, partitions, values }
    }

    pub fn get(&self, lambda: &Partition, mu: &Partition) -> Option<i64> {
        let i = self.partitions.iter().position(|p| p == lambda)?;
        let j = self.partitions.iter().position(|p| p == mu)?;
        Some(self.values[i][j])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn enumerate_partitions() {
        assert_eq!(partitions_of(0), vec![Partition::empty()]);
        assert_eq!(partitions_of(2), vec![p("2"), p("1,1")]);
        assert_eq!(
            partitions_of(4),
            vec![p("4"), p("3,1"), p("2,2"), p("2,1,1"), p("1,1,1,1")]
        );
        assert_eq!(partitions_of(12).len(), 77);
    }

    #[test]
    fn dominance() {
        assert!(dominance_leq(&p("1,1,1"), &p("3")).unwrap());
        assert!(!dominance_leq(&p("3"), &p("1,1,1")).unwrap());
        assert!(dominance_leq(&p("2,2"), &p("3,1")).unwrap());
        assert!(!dominance_leq(&p("3,3"), &p("4,1,1")).unwrap());
        assert!(!dominance_leq(&p("4,1,1"), &p("3,3")).unwrap());
        assert_eq!(dominance_leq(&p("2"), &p("1")), Err(Error::UnequalWeight(2, 1)));
    }

    #[test]
    fn cycle_types() {
        assert_eq!(Permutation::identity(4).cycle_type(), p("1,1,1,1"));
        let x = Permutation::from_cycles(4, &[&[1, 2], &[3, 4]]).unwrap();
        assert_eq!(x.cycle_type(), p("2,2"));
        let y = Permutation::from_cycles(4, &[&[2, 4, 3]]).unwrap();
        assert_eq!(y.cycle_type(), p("3,1"));
        assert_eq!(y.to_string(), "(2 4 3)");
    }

    #[test]
    fn coset_types() {
        assert_eq!(Permutation::identity(4).coset_type(), p("1,1"));
        assert_eq!(Permutation::from_cycles(4, &[&[2, 3]]).unwrap().coset_type(), p("2"));
        assert_eq!(Permutation::from_cycles(4, &[&[2, 4, 3]]).unwrap().coset_type(), p("2"));
    }

    #[test]
    fn pair_partitions_embed() {
        assert_eq!(pair_partitions(1).len(), 1);
        assert_eq!(pair_partitions(3).len(), 15);
        assert_eq!(pair_partitions(4).len(), 105);
        let perms: Vec<Permutation> = pair_partitions(2).iter().map(|s| s.to_permutation()).collect();
        let expected = vec![
            Permutation::identity(4),
            Permutation::from_cycles(4, &[&[2, 3]]).unwrap(),
            Permutation::from_cycles(4, &[&[2, 4, 3]]).unwrap(),
        ];
        assert_eq!(perms, expected);
    }

    #[test]
    fn hyperoctahedral_sizes() {
        let h1 = hyperoctahedral(1);
        assert_eq!(h1, vec![Permutation::identity(2), Permutation::from_cycles(2, &[&[1, 2]]).unwrap()]);
        let h2 = hyperoctahedral(2);
        assert_eq!(h2.len(), 8);
        for c in [
            vec![],
            vec![vec![1, 2]],
            vec![vec![3, 4]],
            vec![vec![1, 2], vec![3, 4]],
            vec![vec![1, 3], vec![2, 4]],
            vec![vec![1, 4], vec![2, 3]],
            vec![vec![1, 3, 2, 4]],
            vec![vec![1, 4, 2, 3]],
        ] {
            let cs: Vec<&[usize]> = c.iter().map(|v| v.as_slice()).collect();
            assert!(h2.contains(&Permutation::from_cycles(4, &cs).unwrap()));
        }
        assert_eq!(hyperoctahedral(3).len(), 48);
        assert_eq!(hyperoctahedral(4).len(), 384);
    }

    #[test]
    fn characters_basic() {
        assert_eq!(character(&p("2,2"), &p("2,2")).unwrap(), 2);
        assert_eq!(character(&p("3,1"), &p("4")).unwrap(), -1);
        for mu in partitions_of(6) {
            assert_eq!(character(&p("6"), &mu).unwrap(), 1);
        }
    }

    #[test]
    fn row_orthogonality() {
        for k in 1..=8u32 {
            let t = CharacterTable::new(k);
            let kf = factorial(k as u64);
            for (i, a) in t.values.iter().enumerate() {
                for (j, b) in t.values.iter().enumerate() {
                    let mut s = BigInt::from(0);
                    for (c, mu) in t.partitions.iter().enumerate() {
                        s += &kf / mu.centralizer_order() * a[c] * b[c];
                    }
                    let expect = if i == j { kf.clone() } else { BigInt::from(0) };
                    assert_eq!(s, expect);
                }
            }
        }
    }

    #[test]
    fn monomial_principal_values() {
        assert_eq!(monomial_principal(&p("1,1"), 3), Rational::integer(3));
        assert_eq!(monomial_principal(&p("2,1"), 3), Rational::integer(6));
        assert_eq!(monomial_principal(&p("2"), 1), Rational::integer(1));
        assert_eq!(monomial_principal(&p("1,1,1"), 2), Rational::zero());
    }

    #[test]
    fn monomial_principal_matches_enumeration() {
        for n in 1..=6usize {
            for k in 0..=4 {
                for lam in partitions_of(k) {
                    let count = lam.monomial_exponents(n).len();
                    assert_eq!(monomial_principal(&lam, n as u32), Rational::from(count));
                }
            }
        }
    }

    #[test]
    fn partition_text() {
        assert_eq!(p("2,1,1").to_string(), "2,1,1");
        assert_eq!(Partition::empty().to_string(), "0");
        assert_eq!(p("0"), Partition::empty());
        assert_eq!(p("1,3"), p("3,1"));
    }
}
