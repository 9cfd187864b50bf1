//! Patience sorting, increasing subsequences, RSK shapes, uniform
//! involutions, airplane boarding and random words.

use crate::error::{range_err, Error, Result};
use crate::quadrature::{integrate_adaptive, GaussLegendre};
use crate::rng::StreamRng;
use crate::specfun::table::{DistributionTable, GridSpec, Law};
use crate::stats::EmpiricalSample;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::seq::SliceRandom;
use rand::Rng;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

/// A permutation of `1..=n` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    pub mapping: Vec<u32>,
}

impl Permutation {
    pub fn new(mapping: Vec<u32>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n + 1];
        for (i, &v) in mapping.iter().enumerate() {
            let v = v as usize;
            if v == 0 || v > n || seen[v] {
                return Err(Error::Input { offset: i, msg: format!("{v} breaks bijectivity on 1..{n}") });
            }
            seen[v] = true;
        }
        Ok(Self { mapping })
    }

    pub fn identity(n: usize) -> Self {
        Self { mapping: (1..=n as u32).collect() }
    }

    pub fn reversed(n: usize) -> Self {
        Self { mapping: (1..=n as u32).rev().collect() }
    }

    /// Uniform permutation by Fisher–Yates.
    pub fn random(n: usize, rng: &mut StreamRng) -> Self {
        let mut p = Self::identity(n);
        p.mapping.shuffle(rng);
        p
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn is_involution(&self) -> bool {
        self.mapping
            .iter()
            .enumerate()
            .all(|(i, &v)| self.mapping[v as usize - 1] as usize == i + 1)
    }
}

/// Integer partition with nonincreasing rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    pub rows: Vec<usize>,
}

impl Partition {
    pub fn size(&self) -> usize {
        self.rows.iter().sum()
    }

    pub fn row(&self, i: usize) -> usize {
        self.rows.get(i).copied().unwrap_or(0)
    }

    /// Number of standard Young tableaux, by the hook length formula.
    pub fn dimension(&self) -> BigUint {
        let n = self.size();
        let mut num = BigUint::one();
        for k in 2..=n {
            num *= k;
        }
        let mut den = BigUint::one();
        for (i, &r) in self.rows.iter().enumerate() {
            for j in 0..r {
                let arm = r - j - 1;
                let leg = self.rows[i + 1..].iter().filter(|&&rr| rr > j).count();
                den *= arm + leg + 1;
            }
        }
        num / den
    }
}

/// A word over the alphabet `0..k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    pub letters: Vec<u8>,
    pub alphabet_size: u8,
}

impl Word {
    pub fn new(letters: Vec<u8>, alphabet_size: u8) -> Result<Self> {
        if let Some(i) = letters.iter().position(|&l| l >= alphabet_size) {
            return Err(Error::Input {
                offset: i,
                msg: format!("letter {} outside alphabet of size {alphabet_size}", letters[i]),
            });
        }
        Ok(Self { letters, alphabet_size })
    }

    pub fn random(n: usize, k: u8, rng: &mut StreamRng) -> Self {
        Self { letters: (0..n).map(|_| rng.gen_range(0..k)).collect(), alphabet_size: k }
    }
}

/// Pile for a card: the leftmost pile whose top is larger. In the weak
/// variant an equal top does not count as larger, so repeated letters
/// extend a sequence instead of covering each other.
#[inline]
fn pile_for<T: Ord>(tops: &[T], x: &T, strict: bool) -> usize {
    if strict {
        tops.partition_point(|t| t < x)
    } else {
        tops.partition_point(|t| t <= x)
    }
}

/// Patience sorting core shared by permutations and words.
fn patience<T: Ord + Copy>(seq: &[T], strict: bool) -> usize {
    let mut tops: Vec<T> = Vec::new();
    for x in seq {
        let k = pile_for(&tops, x, strict);
        if k == tops.len() {
            tops.push(*x);
        } else {
            tops[k] = *x;
        }
    }
    tops.len()
}

/// Number of piles when each card goes on the leftmost pile with a larger
/// top card, or starts a new pile on the right.
pub fn patience_piles(p: &Permutation) -> usize {
    patience(&p.mapping, true)
}

/// Longest increasing subsequence by the quadratic dynamic program.
pub fn lis_length(p: &Permutation) -> usize {
    let m = &p.mapping;
    let mut best = vec![1usize; m.len()];
    let mut overall = 0;
    for i in 0..m.len() {
        for j in 0..i {
            if m[j] < m[i] && best[j] + 1 > best[i] {
                best[i] = best[j] + 1;
            }
        }
        overall = overall.max(best[i]);
    }
    overall
}

/// Longest weakly increasing subsequence.
pub fn weak_lis_length(w: &Word) -> usize {
    patience(&w.letters, false)
}

/// Row insertion keeping at most `max_rows` rows (values bumped out of the
/// last kept row are dropped).
fn rsk_rows(p: &Permutation, max_rows: usize) -> Vec<Vec<u32>> {
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for &x in &p.mapping {
        let mut carry = x;
        for r in 0..max_rows {
            if r == rows.len() {
                rows.push(vec![carry]);
                break;
            }
            let row = &mut rows[r];
            let k = row.partition_point(|&t| t < carry);
            if k == row.len() {
                row.push(carry);
                break;
            }
            carry = std::mem::replace(&mut row[k], carry);
        }
    }
    rows
}

/// Shape of the RSK insertion tableau.
pub fn rsk_shape(p: &Permutation) -> Partition {
    Partition { rows: rsk_rows(p, usize::MAX).iter().map(Vec::len).collect() }
}

/// Lengths of the first two rows of the RSK shape, without building the
/// rest of the tableau.
pub fn rsk_first_rows(p: &Permutation) -> (usize, usize) {
    let rows = rsk_rows(p, 2);
    (rows.first().map_or(0, Vec::len), rows.get(1).map_or(0, Vec::len))
}

/// Insertion tableau (all rows).
pub fn insertion_tableau(p: &Permutation) -> Vec<Vec<u32>> {
    rsk_rows(p, usize::MAX)
}

/// Involution counts `I(0..=n)` from `I(m) = I(m-1) + (m-1) I(m-2)`.
pub fn involution_counts(n: usize) -> Vec<BigUint> {
    let mut v: Vec<BigUint> = vec![BigUint::one(), BigUint::one()];
    for m in 2..=n {
        let next = &v[m - 1] + &v[m - 2] * (m - 1);
        v.push(next);
    }
    v.truncate(n + 1);
    v
}

/// Largest `n` for which the fixed-point probabilities come from exact
/// integer weights; beyond it the ratio recurrence is run in floating point.
pub const EXACT_INVOLUTION_LIMIT: usize = 100_000;

/// `a / b` rounded toward zero to 64 significant bits, as `f64`.
fn big_ratio(a: &BigUint, b: &BigUint) -> f64 {
    let shift = (b.bits() + 64).saturating_sub(a.bits());
    let q = (a << shift) / b;
    q.to_f64().unwrap_or(f64::INFINITY) * (-(shift as f64)).exp2()
}

/// `r_m = I(m-1) / I(m)` for `m = 0..=n`, from exact integers up to the
/// limit.
fn fix_probabilities(n: usize) -> std::sync::Arc<Vec<f64>> {
    static CACHE: OnceLock<Mutex<std::sync::Arc<Vec<f64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(std::sync::Arc::new(vec![1.0, 1.0])));
    let mut guard = cache.lock().expect("involution cache poisoned");
    if guard.len() > n {
        return guard.clone();
    }
    let mut r: Vec<f64> = vec![1.0, 1.0];
    let (mut prev, mut cur) = (BigUint::one(), BigUint::one());
    for m in 2..=n {
        if m <= EXACT_INVOLUTION_LIMIT {
            let next = &cur + &prev * (m - 1);
            r.push(big_ratio(&cur, &next));
            prev = cur;
            cur = next;
        } else {
            let last = r[m - 1];
            r.push(1.0 / (1.0 + (m - 1) as f64 * last));
        }
    }
    *guard = std::sync::Arc::new(r);
    guard.clone()
}

/// Exact Bernoulli draw with success probability `I(m-1)/I(m)`: the float
/// ratio settles all but a vanishing fraction of draws; ties are resolved
/// by extending the uniform variate bit by bit against the integers.
fn fix_point_draw(m: usize, approx: f64, rng: &mut StreamRng) -> bool {
    let k: u64 = rng.gen::<u64>() >> 11;
    let lo = k as f64 * (-53f64).exp2();
    let hi = (k + 1) as f64 * (-53f64).exp2();
    let margin = approx * 8.0 * f64::EPSILON;
    if hi <= approx - margin {
        return true;
    }
    if lo >= approx + margin || m > EXACT_INVOLUTION_LIMIT {
        return lo < approx;
    }
    let counts = involution_counts(m);
    let (a, b) = (&counts[m - 1], &counts[m]);
    let mut num = BigUint::from(k);
    let mut bits = 53u64;
    loop {
        // V lies in [num, num + 1) / 2^bits
        let scaled_a = a << bits;
        if (&num + 1u32) * b <= scaled_a {
            return true;
        }
        if &num * b >= scaled_a {
            return false;
        }
        num = (num << 64) + BigUint::from(rng.gen::<u64>());
        bits += 64;
    }
}

/// Uniform involution of `1..=n`: the largest remaining point is fixed with
/// probability `I(m-1)/I(m)`, otherwise paired with a uniform partner.
pub fn sample_involution(n: usize, rng: &mut StreamRng) -> Permutation {
    let r = fix_probabilities(n);
    let mut map = vec![0u32; n];
    let mut remaining: Vec<u32> = (1..=n as u32).collect();
    while let Some(x) = remaining.pop() {
        let m = remaining.len() + 1;
        if fix_point_draw(m, r[m], rng) {
            map[x as usize - 1] = x;
        } else {
            let j = rng.gen_range(0..remaining.len());
            let y = remaining.swap_remove(j);
            map[x as usize - 1] = y;
            map[y as usize - 1] = x;
        }
    }
    Permutation { mapping: map }
}

/// Boarding time under the unit-delay protocol. Passenger `i` in the queue
/// is assigned row `p[i]`; each time unit every standing passenger walks
/// forward until reaching their row or the passenger ahead, and those who
/// reach their row spend the unit seating (still blocking the aisle).
pub fn simulate_boarding(p: &Permutation) -> usize {
    let n = p.len();
    let eps = 1.0 / (2.0 * (n as f64 + 1.0));
    let mut queue: Vec<f64> = p.mapping.iter().map(|&v| v as f64).collect();
    let mut time = 0;
    while !queue.is_empty() {
        time += 1;
        let mut ahead = f64::INFINITY;
        let mut standing = Vec::with_capacity(queue.len());
        for &target in &queue {
            let pos = target.min(ahead - eps);
            if pos == target {
                // seats this unit; the aisle at `target` is blocked
                ahead = target;
            } else {
                ahead = pos;
                standing.push(target);
            }
        }
        queue = standing;
    }
    time
}

/// Number of shadow lines in the Viennot diagram of `p`: the points not in
/// the shadow (north-east quadrant) of any other remaining point form one
/// line; they are removed and the process repeats.
pub fn shadow_line_count(p: &Permutation) -> usize {
    let mut pts: Vec<(usize, u32)> = p.mapping.iter().copied().enumerate().collect();
    let mut lines = 0;
    while !pts.is_empty() {
        lines += 1;
        let mut lowest = u32::MAX;
        pts.retain(|&(_, y)| {
            // scanning left to right, a point is shadowed iff some earlier
            // remaining point lies below it
            if y < lowest {
                lowest = y;
                false
            } else {
                true
            }
        });
    }
    lines
}

/// Boarding time, cross-checked against the shadow-line count.
pub fn boarding_time(p: &Permutation) -> Result<usize> {
    let b = simulate_boarding(p);
    let k = shadow_line_count(p);
    if b != k {
        return Err(Error::Logic(format!("boarding time {b} differs from shadow-line count {k}")));
    }
    Ok(b)
}

/// `(l - N/k) / sqrt(2N/k)`
pub fn standardize_weak_lis(l: usize, n: usize, k: usize) -> f64 {
    let (n, k) = (n as f64, k as f64);
    (l as f64 - n / k) / (2.0 * n / k).sqrt()
}

/// Splits a digit stream into words of `word_len` and returns the
/// standardized longest weakly increasing subsequence of each.
pub fn digit_words_experiment(digits: &[u8], base: u8, word_len: usize) -> Result<EmpiricalSample> {
    if base < 2 {
        return Err(range_err(format!("base {base} below 2")));
    }
    if word_len == 0 || digits.len() < word_len {
        return Err(Error::InsufficientData(format!(
            "stream of {} digits is shorter than one word of {word_len}",
            digits.len()
        )));
    }
    if let Some(i) = digits.iter().position(|&d| d >= base) {
        return Err(Error::Input { offset: i, msg: format!("digit {} not valid in base {base}", digits[i]) });
    }
    let values = digits
        .chunks_exact(word_len)
        .map(|w| standardize_weak_lis(patience(w, false), word_len, base as usize))
        .collect();
    Ok(EmpiricalSample::new(values, "digits")
        .with_param("base", base as f64)
        .with_param("word_len", word_len as f64))
}

/// Parses a digit file: ASCII digits (letters `a..z` for digits above 9),
/// whitespace and the radix point ignored, and an optional first line
/// holding the exponent `q` skipped.
pub fn parse_digit_stream(text: &str) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(text.len());
    let mut start = 0;
    if let Some(first) = text.lines().next() {
        let t = first.trim_start();
        if t.starts_with('q') || t.starts_with('Q') {
            start = first.len();
        }
    }
    for (off, c) in text.char_indices().skip_while(|&(i, _)| i < start) {
        match c {
            '0'..='9' => out.push(c as u8 - b'0'),
            'a'..='z' => out.push(c as u8 - b'a' + 10),
            'A'..='Z' => out.push(c as u8 - b'A' + 10),
            '.' => {}
            c if c.is_whitespace() => {}
            _ => return Err(Error::Input { offset: off, msg: format!("unexpected character {c:?}") }),
        }
    }
    Ok(out)
}

/// Normalizing constant of the trace-zero density,
/// `γ_k = sqrt(k) 2^{k(k-1)/2} / ((Π i!) π^{(k-1)/2})`.
pub fn gamma_k(k: usize) -> f64 {
    let kf = k as f64;
    let mut fact_prod = 1.0;
    let mut f = 1.0;
    for i in 1..=k {
        f *= i as f64;
        fact_prod *= f;
    }
    kf.sqrt() * (kf * (kf - 1.0) / 2.0).exp2() / (fact_prod * PI.powf((kf - 1.0) / 2.0))
}

fn vandermonde_weight(x: &[f64]) -> f64 {
    let mut w = (-x.iter().map(|v| v * v).sum::<f64>()).exp();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let d = x[i] - x[j];
            w *= d * d;
        }
    }
    w
}

/// Truncation of the Gaussian integrand.
const WORD_CUTOFF: f64 = 7.0;

/// Right-hand side of the random-word limit at `s` for `k` letters.
pub fn word_limit_value(k: usize, s: f64) -> Result<f64> {
    if !(2..=4).contains(&k) {
        return Err(range_err(format!("alphabet size {k} not in 2..=4")));
    }
    if s <= 0.0 {
        // the coordinates sum to zero, so their maximum is nonnegative
        return Ok(0.0);
    }
    let g = gamma_k(k);
    let v = match k {
        2 => {
            // x = (t, -t): max <= s  <=>  |t| <= s
            let s = s.min(WORD_CUTOFF);
            2.0 * integrate_adaptive(|t: f64| vandermonde_weight(&[t, -t]), 0.0, s, 1e-15, 1e-13)?
        }
        3 => {
            let gl = GaussLegendre::cached(64);
            let lo = -WORD_CUTOFF;
            let hi = s.min(WORD_CUTOFF);
            gl.integrate(lo, hi, |x1| {
                // x3 = -x1 - x2 <= s  <=>  x2 >= -s - x1
                let a = (-s - x1).max(lo);
                if a >= hi {
                    return 0.0;
                }
                gl.integrate(a, hi, |x2| vandermonde_weight(&[x1, x2, -x1 - x2]))
            })
        }
        _ => {
            let gl = GaussLegendre::cached(40);
            let lo = -WORD_CUTOFF;
            let hi = s.min(WORD_CUTOFF);
            gl.integrate(lo, hi, |x1| {
                gl.integrate(lo, hi, |x2| {
                    let a = (-s - x1 - x2).max(lo);
                    if a >= hi {
                        return 0.0;
                    }
                    gl.integrate(a, hi, |x3| vandermonde_weight(&[x1, x2, x3, -x1 - x2 - x3]))
                })
            })
        }
    };
    Ok((g * v).clamp(0.0, 1.0))
}

/// Tabulated random-word limit law.
pub fn word_limit_cdf(k: usize, grid: GridSpec) -> Result<DistributionTable> {
    if !(2..=4).contains(&k) {
        return Err(range_err(format!("alphabet size {k} not in 2..=4")));
    }
    let mut cdf = grid.points().iter().map(|&s| word_limit_value(k, s)).collect::<Result<Vec<_>>>()?;
    for i in 1..cdf.len() {
        // quadrature noise must not break monotonicity
        if cdf[i] < cdf[i - 1] {
            cdf[i] = cdf[i - 1];
        }
    }
    DistributionTable::new(Law::Word(k as u8), grid, cdf)
}

/// Exact law of the standardized statistic over all `k^n` words, as
/// `(value, probability)` pairs sorted by value.
pub fn exact_word_law(k: u8, n: usize) -> Result<Vec<(f64, f64)>> {
    let total = (k as u64).checked_pow(n as u32).filter(|&t| t <= 1 << 24).ok_or_else(|| {
        range_err(format!("{k}^{n} words is too many to enumerate"))
    })?;
    let mut counts = vec![0u64; n + 1];
    let mut letters = vec![0u8; n];
    for code in 0..total {
        let mut c = code;
        for l in letters.iter_mut() {
            *l = (c % k as u64) as u8;
            c /= k as u64;
        }
        counts[patience(&letters, false)] += 1;
    }
    Ok(counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(l, &c)| (standardize_weak_lis(l, n, k as usize), c as f64 / total as f64))
        .collect())
}

/// Count of each weak-LIS value over a simulated sample, normalized.
pub fn empirical_law(values: &[usize], n: usize) -> Vec<f64> {
    let mut counts = vec![0.0; n + 1];
    for &v in values {
        counts[v] += 1.0;
    }
    let total = values.len() as f64;
    counts.iter().map(|c| c / total).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use proptest::prelude::{prop_assert, prop_assert_eq, proptest};
    use std::collections::HashMap;

    fn example() -> Permutation {
        Permutation::new(vec![3, 4, 1, 5, 6, 2]).unwrap()
    }

    fn all_permutations(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut a: Vec<u32> = (1..=n as u32).collect();
        // Heap's algorithm
        let mut c = vec![0usize; n];
        out.push(Permutation { mapping: a.clone() });
        let mut i = 0;
        while i < n {
            if c[i] < i {
                if i % 2 == 0 {
                    a.swap(0, i);
                } else {
                    a.swap(c[i], i);
                }
                out.push(Permutation { mapping: a.clone() });
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        out
    }

    #[test]
    fn worked_example() {
        let p = example();
        assert_eq!(patience_piles(&p), 4);
        assert_eq!(lis_length(&p), 4);
        assert_eq!(rsk_shape(&p).rows[0], 4);
        assert_eq!(boarding_time(&p).unwrap(), 4);
    }

    #[test]
    fn extreme_orders() {
        for n in [1, 3, 10] {
            assert_eq!(patience_piles(&Permutation::identity(n)), n);
            assert_eq!(patience_piles(&Permutation::reversed(n)), 1);
            assert_eq!(lis_length(&Permutation::identity(n)), n);
            assert_eq!(boarding_time(&Permutation::reversed(n)).unwrap(), 1);
            assert_eq!(boarding_time(&Permutation::identity(n)).unwrap(), n);
        }
    }

    #[test]
    fn identity_chain_on_s7() {
        let all = all_permutations(7);
        assert_eq!(all.len(), 5040);
        for p in &all {
            let q = patience_piles(p);
            assert_eq!(q, lis_length(p));
            assert_eq!(q, rsk_shape(p).rows[0]);
            assert_eq!(q, simulate_boarding(p));
            assert_eq!(q, shadow_line_count(p));
        }
    }

    #[test]
    fn plancherel_on_s4() {
        let mut freq: HashMap<Partition, usize> = HashMap::new();
        for p in all_permutations(4) {
            *freq.entry(rsk_shape(&p)).or_default() += 1;
        }
        // count standard tableaux of each shape by brute force
        for (shape, count) in freq {
            let dim = brute_force_tableaux(&shape.rows);
            assert_eq!(count, dim * dim, "{shape:?}");
            assert_eq!(BigUint::from(dim), shape.dimension());
        }
    }

    fn brute_force_tableaux(rows: &[usize]) -> usize {
        // remove the largest entry from any corner, recursively
        let n: usize = rows.iter().sum();
        if n <= 1 {
            return 1;
        }
        let mut total = 0;
        for i in 0..rows.len() {
            let next = rows.get(i + 1).copied().unwrap_or(0);
            if rows[i] > next {
                let mut r = rows.to_vec();
                r[i] -= 1;
                while r.last() == Some(&0) {
                    r.pop();
                }
                total += brute_force_tableaux(&r);
            }
        }
        total
    }

    #[test]
    fn weak_lis_examples() {
        assert_eq!(weak_lis_length(&Word::new(vec![1, 1, 1], 2).unwrap()), 3);
        let w = Word::new(vec![2, 1, 2, 1], 3).unwrap();
        assert_eq!(weak_lis_length(&w), brute_force_weak(&w.letters));
        assert_eq!(weak_lis_length(&w), 2);
    }

    fn brute_force_weak(l: &[u8]) -> usize {
        let n = l.len();
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            let sub: Vec<u8> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| l[i]).collect();
            if sub.windows(2).all(|w| w[0] <= w[1]) {
                best = best.max(sub.len());
            }
        }
        best
    }

    #[test]
    fn involution_counts_match_brute_force() {
        let counts = involution_counts(6);
        let expect = [1u32, 1, 2, 4, 10, 26, 76];
        for n in 1..=5 {
            let brute = all_permutations(n).iter().filter(|p| p.is_involution()).count();
            assert_eq!(brute as u32, expect[n]);
            assert_eq!(counts[n], BigUint::from(expect[n]));
        }
    }

    #[test]
    fn big_ratio_is_accurate() {
        let c = involution_counts(300);
        let r = fix_probabilities(300);
        // the float recurrence is a weaker but independent check
        let mut x = 1.0;
        for m in 2..=300 {
            x = 1.0 / (1.0 + (m - 1) as f64 * x);
            assert!((r[m] - x).abs() < 1e-12 * x);
        }
        assert!((big_ratio(&c[3], &c[4]) - 0.4).abs() < 1e-16);
    }

    #[test]
    fn involutions_are_involutions() {
        for i in 0..200 {
            let mut rng = stream(1, i);
            let p = sample_involution(50 + i as usize, &mut rng);
            assert!(p.is_involution());
            assert!(Permutation::new(p.mapping.clone()).is_ok());
        }
    }

    #[test]
    fn involutions_are_uniform_at_n4() {
        let draws = 100_000;
        let mut freq: HashMap<Vec<u32>, f64> = HashMap::new();
        for i in 0..draws {
            let mut rng = stream(17, i);
            *freq.entry(sample_involution(4, &mut rng).mapping).or_default() += 1.0;
        }
        assert_eq!(freq.len(), 10);
        let e = draws as f64 / 10.0;
        let chi2: f64 = freq.values().map(|o| (o - e) * (o - e) / e).sum();
        // 9 degrees of freedom: P(chi2 > 27.88) = 1e-3
        assert!(chi2 < 27.88, "chi2 = {chi2}");
    }

    #[test]
    fn gamma_k_normalizes() {
        for k in 2..=4 {
            let v = word_limit_value(k, 20.0).unwrap();
            assert!((v - 1.0).abs() < 1e-6, "k = {k}: {v}");
        }
    }

    #[test]
    fn word_limit_k2_matches_traceless_gue() {
        // max eigenvalue of a traceless 2x2 GUE matrix with density exp(-tr M^2)
        let draws = 2_000_000u64;
        let pts = [0.5, 1.0, 1.5];
        let mut hits = [0usize; 3];
        let mut rng = stream(5, 0);
        for _ in 0..draws {
            let a: f64 = rng.sample::<f64, _>(rand_distr::StandardNormal) * 0.5f64.sqrt();
            let d: f64 = rng.sample::<f64, _>(rand_distr::StandardNormal) * 0.5f64.sqrt();
            let br: f64 = rng.sample::<f64, _>(rand_distr::StandardNormal) * 0.5;
            let bi: f64 = rng.sample::<f64, _>(rand_distr::StandardNormal) * 0.5;
            let lam = (0.25 * (a - d) * (a - d) + br * br + bi * bi).sqrt();
            for (h, &s) in hits.iter_mut().zip(&pts) {
                if lam <= s {
                    *h += 1;
                }
            }
        }
        for (h, &s) in hits.iter().zip(&pts) {
            let mc = *h as f64 / draws as f64;
            let q = word_limit_value(2, s).unwrap();
            assert!((mc - q).abs() < 1e-3, "s = {s}: {mc} vs {q}");
        }
    }

    #[test]
    fn digit_experiment_basics() {
        let s = digit_words_experiment(&[1; 100], 2, 10).unwrap();
        assert_eq!(s.len(), 10);
        let v = standardize_weak_lis(10, 10, 2);
        assert!(s.values.iter().all(|&x| x == v));
        assert_eq!(digit_words_experiment(&[0; 105], 2, 10).unwrap().len(), 10);
        match digit_words_experiment(&[0, 1, 2], 2, 1) {
            Err(Error::Input { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn digit_file_parsing() {
        let d = parse_digit_stream("q 1\n3.14 15\n9").unwrap();
        assert_eq!(d, vec![3, 1, 4, 1, 5, 9]);
        assert!(matches!(parse_digit_stream("12,3"), Err(Error::Input { offset: 2, .. })));
    }

    proptest! {
        #[test]
        fn rsk_preserves_size(v in proptest::collection::vec(0u32..1000, 1..60)) {
            // rank the values to get a permutation
            let mut idx: Vec<usize> = (0..v.len()).collect();
            idx.sort_by_key(|&i| (v[i], i));
            let mut map = vec![0u32; v.len()];
            for (r, &i) in idx.iter().enumerate() {
                map[i] = r as u32 + 1;
            }
            let p = Permutation::new(map).unwrap();
            let shape = rsk_shape(&p);
            prop_assert_eq!(shape.size(), p.len());
            prop_assert!(shape.rows.windows(2).all(|w| w[0] >= w[1]));
            prop_assert_eq!(shape.rows[0], lis_length(&p));
            let (r1, r2) = rsk_first_rows(&p);
            prop_assert_eq!(r1, shape.row(0));
            prop_assert_eq!(r2, shape.row(1));
            prop_assert_eq!(boarding_time(&p).unwrap(), r1);
        }
    }
}
