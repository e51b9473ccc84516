use crate::error::{Error, Result};
use crate::qcombinat::{MultiIndex, Word};

/// Default cap on fiber enumeration.
pub const FIBER_CAP: usize = 1_000_000;

/// Letter-count profile p(α).
pub fn word_profile(alpha: &Word, n: usize) -> Result<MultiIndex> {
    alpha.check_letters(n)?;
    let mut k = vec![0u32; n];
    for &a in alpha.letters() {
        k[a as usize - 1] += 1;
    }
    Ok(MultiIndex::new(k))
}

/// |k|! / k!, the number of words with profile k.
pub fn fiber_count(k: &MultiIndex) -> Result<u64> {
    let mut total: u128 = 1;
    let mut placed: u128 = 0;
    for &e in k.entries() {
        // Multiply by binom(placed + e, e) one factor at a time; each step stays integral.
        for i in 1..=e as u128 {
            placed += 1;
            total = total
                .checked_mul(placed)
                .ok_or_else(|| Error::limit("fiber count overflow"))?
                / i;
        }
        if total > u64::MAX as u128 {
            return Err(Error::limit(format!(
                "fiber of {k} has more than 2^64 words"
            )));
        }
    }
    Ok(total as u64)
}

/// Inversion number m(α) = #{i < j : α_i > α_j}.
pub fn inversions(alpha: &Word) -> u64 {
    let letters = alpha.letters();
    let top = letters.iter().copied().max().unwrap_or(0) as usize;
    let mut seen = vec![0u64; top + 1];
    let mut acc = 0u64;
    for &a in letters {
        acc += seen[a as usize + 1..].iter().sum::<u64>();
        seen[a as usize] += 1;
    }
    acc
}

/// Adjacent-switch count s(α): the number of positions where the letter changes.
///
/// The empty word has s = −1 and a single letter has s = 0.
pub fn switch_count(alpha: &Word) -> i64 {
    let l = alpha.letters();
    if l.len() <= 1 {
        return l.len() as i64 - 1;
    }
    l.windows(2).filter(|w| w[0] != w[1]).count() as i64
}

/// The sorted word δ(k) = 1^{k_1} 2^{k_2} ... n^{k_n}.
pub fn delta_word(k: &MultiIndex) -> Word {
    let mut v = Vec::with_capacity(k.degree() as usize);
    for (i, &e) in k.entries().iter().enumerate() {
        v.extend(std::iter::repeat(i as u32 + 1).take(e as usize));
    }
    Word::new(v)
}

/// All words with profile k in lexicographic order.
pub fn fiber_words(k: &MultiIndex, cap: usize) -> Result<Vec<Word>> {
    let count = fiber_count(k)?;
    if count > cap as u64 {
        return Err(Error::limit(format!(
            "fiber of {k} has {count} words, cap {cap}"
        )));
    }
    let mut cur = delta_word(k).letters().to_vec();
    let mut out = Vec::with_capacity(count as usize);
    loop {
        out.push(Word::new(cur.clone()));
        if !next_permutation(&mut cur) {
            break;
        }
    }
    Ok(out)
}

fn next_permutation(v: &mut [u32]) -> bool {
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

/// Coefficients c_m = #{α ∈ fiber(k) : m(α) = m}, m = 0..=Σ_{i<j} k_i k_j.
///
/// Built as a product of Gaussian binomials, one per letter.
pub fn inversion_distribution(k: &MultiIndex) -> Result<Vec<u128>> {
    let mut poly = vec![1u128];
    let mut placed = 0u32;
    for &e in k.entries() {
        let g = gaussian_binomial(placed + e, e)?;
        poly = poly_mul(&poly, &g)?;
        placed += e;
    }
    Ok(poly)
}

fn gaussian_binomial(m: u32, r: u32) -> Result<Vec<u128>> {
    // row[j] holds binom(i, j)_q as a coefficient vector.
    let mut row: Vec<Vec<u128>> = vec![vec![1]];
    for i in 1..=m {
        let mut next: Vec<Vec<u128>> = Vec::with_capacity(i as usize + 1);
        for j in 0..=i {
            // binom(i, j) = binom(i-1, j-1) + q^j binom(i-1, j)
            let a = if j >= 1 {
                row[j as usize - 1].clone()
            } else {
                Vec::new()
            };
            let mut c = a;
            if j < i {
                let b = &row[j as usize];
                let need = j as usize + b.len();
                if c.len() < need {
                    c.resize(need, 0);
                }
                for (t, &x) in b.iter().enumerate() {
                    c[t + j as usize] = c[t + j as usize]
                        .checked_add(x)
                        .ok_or_else(|| Error::limit("Gaussian binomial overflow"))?;
                }
            }
            next.push(c);
        }
        row = next;
    }
    Ok(row[r as usize].clone())
}

fn poly_mul(a: &[u128], b: &[u128]) -> Result<Vec<u128>> {
    let mut out = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let t = x
                .checked_mul(y)
                .ok_or_else(|| Error::limit("distribution overflow"))?;
            out[i + j] = out[i + j]
                .checked_add(t)
                .ok_or_else(|| Error::limit("distribution overflow"))?;
        }
    }
    Ok(out)
}

/// A word with profile k and exactly `m` inversions, built by sweeping the
/// leading letter rightwards one adjacent swap at a time from δ(k).
///
/// Each swap raises the inversion number by one exactly when the passed
/// letter is larger, so every value between 0 and Σ_{i<j} k_i k_j is hit.
pub fn word_with_inversions(k: &MultiIndex, m: u64) -> Result<Word> {
    let max = k.pair_sum();
    if m > max {
        return Err(Error::param(format!(
            "m = {m} exceeds the maximum {max} for {k}"
        )));
    }
    let mut w = delta_word(k).letters().to_vec();
    let d = w.len();
    let mut acc = 0u64;
    if acc == m {
        return Ok(Word::new(w));
    }
    for phase in 0..d {
        let end = d - 1 - phase;
        for pos in 0..end {
            let moving = w[pos];
            let passed = w[pos + 1];
            w.swap(pos, pos + 1);
            if passed > moving {
                acc += 1;
            }
            if acc == m {
                return Ok(Word::new(w));
            }
        }
    }
    unreachable!("sweep reaches every inversion count up to the maximum")
}
