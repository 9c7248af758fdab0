//! Arrangements of distinct digits: the vertex labels of every graph family
//! in this crate.
//!
//! An [`Arrangement`] is a sequence of `k` distinct digits drawn from
//! `1..=n`. The set of all such sequences is ordered lexicographically, and
//! that order is canonical everywhere: vertex numbering, tie-breaking and
//! serialization all follow it. Digits are 1-based to match the usual
//! notation for these networks; ranks are 0-based for indexing.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Largest supported digit universe; keeps `n!` arithmetic inside `u64`.
pub const MAX_N: u8 = 20;

/// A sequence of `k` distinct digits from `1..=ambient_n`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrangement {
    digits: Vec<u8>,
    ambient: u8,
}

/// Parity of a full permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Arrangement {
    pub fn new(digits: Vec<u8>, ambient_n: u8) -> Result<Self> {
        if ambient_n == 0 || ambient_n > MAX_N {
            return Err(Error::domain(alloc::format!(
                "ambient n must be in 1..={MAX_N}, got {ambient_n}"
            )));
        }
        if digits.is_empty() || digits.len() > ambient_n as usize {
            return Err(Error::domain(alloc::format!(
                "arrangement length must be in 1..={ambient_n}, got {}",
                digits.len()
            )));
        }
        let mut seen = [false; MAX_N as usize + 1];
        for &d in &digits {
            if d == 0 || d > ambient_n {
                return Err(Error::domain(alloc::format!(
                    "digit {d} outside 1..={ambient_n}"
                )));
            }
            if seen[d as usize] {
                return Err(Error::domain(alloc::format!("duplicate digit {d}")));
            }
            seen[d as usize] = true;
        }
        Ok(Arrangement {
            digits,
            ambient: ambient_n,
        })
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn ambient_n(&self) -> u8 {
        self.ambient
    }

    /// Number of digits, usually written `k`.
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        false // constructor rejects empty digit sequences
    }

    /// The 1-digit (first position).
    pub fn first(&self) -> u8 {
        self.digits[0]
    }

    pub fn contains_digit(&self, d: u8) -> bool {
        self.digits.contains(&d)
    }

    /// Digits of `1..=ambient_n` not present, ascending.
    pub fn unused_digits(&self) -> Vec<u8> {
        (1..=self.ambient)
            .filter(|d| !self.digits.contains(d))
            .collect()
    }

    /// Exchange the 1-digit with the `i`-digit, `2 <= i <= k`. This is an
    /// involution without fixed points.
    pub fn swap_digit(&self, i: usize) -> Result<Arrangement> {
        if i < 2 || i > self.len() {
            return Err(Error::domain(alloc::format!(
                "swap position must be in 2..={}, got {i}",
                self.len()
            )));
        }
        let mut digits = self.digits.clone();
        digits.swap(0, i - 1);
        Ok(Arrangement {
            digits,
            ambient: self.ambient,
        })
    }

    /// Replace the 1-digit by a digit not present in the arrangement.
    pub fn replace_first(&self, s: u8) -> Result<Arrangement> {
        if s == 0 || s > self.ambient {
            return Err(Error::domain(alloc::format!(
                "digit {s} outside 1..={}",
                self.ambient
            )));
        }
        if self.contains_digit(s) {
            return Err(Error::domain(alloc::format!(
                "digit {s} already present in {self}"
            )));
        }
        let mut digits = self.digits.clone();
        digits[0] = s;
        Ok(Arrangement {
            digits,
            ambient: self.ambient,
        })
    }

    /// Parity of a full permutation (`k = n`): even iff the number of
    /// inversions is even.
    pub fn parity(&self) -> Result<Parity> {
        if self.len() != self.ambient as usize {
            return Err(Error::domain(alloc::format!(
                "parity needs a full permutation, got {} of {} digits",
                self.len(),
                self.ambient
            )));
        }
        let mut inversions = 0usize;
        for i in 0..self.digits.len() {
            for j in i + 1..self.digits.len() {
                if self.digits[i] > self.digits[j] {
                    inversions += 1;
                }
            }
        }
        Ok(if inversions % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        })
    }

    /// Text label: digits joined by `.`, e.g. `2.1` or `2.1.3.4`.
    pub fn to_label(&self) -> String {
        let mut out = String::new();
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                out.push('.');
            }
            let _ = fmt::Write::write_fmt(&mut out, format_args!("{d}"));
        }
        out
    }

    /// Parse a `.`-joined label against a digit universe. Rejects duplicate
    /// and out-of-range digits.
    pub fn parse_label(text: &str, ambient_n: u8) -> Result<Arrangement> {
        let mut digits = Vec::new();
        for part in text.split('.') {
            let d: u8 = part
                .parse()
                .map_err(|_| Error::domain(alloc::format!("bad digit {part:?} in label {text:?}")))?;
            digits.push(d);
        }
        Arrangement::new(digits, ambient_n)
    }
}

impl fmt::Display for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_label())
    }
}

impl fmt::Debug for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `n! / (n-k)!`, the number of k-arrangements on n digits.
pub fn arrangement_count(n: u8, k: u8) -> Result<u64> {
    check_nk(n, k)?;
    falling_product(n as u64, k as u64)
}

/// Product of `k` consecutive factors `n, n-1, ..., n-k+1`, checked.
fn falling_product(n: u64, k: u64) -> Result<u64> {
    let mut out: u64 = 1;
    for i in 0..k {
        out = out
            .checked_mul(n - i)
            .ok_or_else(|| Error::domain("arrangement count overflows u64"))?;
    }
    Ok(out)
}

fn check_nk(n: u8, k: u8) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::domain(alloc::format!(
            "n must be in 1..={MAX_N}, got {n}"
        )));
    }
    if k == 0 || k > n {
        return Err(Error::domain(alloc::format!(
            "k must be in 1..={n}, got {k}"
        )));
    }
    Ok(())
}

/// All k-arrangements on `1..=n` in strictly increasing lexicographic order.
pub fn enumerate_arrangements(n: u8, k: u8) -> Result<Vec<Arrangement>> {
    let count = arrangement_count(n, k)?;
    let count = usize::try_from(count)
        .map_err(|_| Error::domain("arrangement count exceeds address space"))?;
    let mut out = Vec::with_capacity(count);
    let mut used = [false; MAX_N as usize + 1];
    let mut prefix = Vec::with_capacity(k as usize);
    build_lex(n, k as usize, &mut used, &mut prefix, &mut out);
    Ok(out)
}

fn build_lex(
    n: u8,
    k: usize,
    used: &mut [bool; MAX_N as usize + 1],
    prefix: &mut Vec<u8>,
    out: &mut Vec<Arrangement>,
) {
    if prefix.len() == k {
        out.push(Arrangement {
            digits: prefix.clone(),
            ambient: n,
        });
        return;
    }
    for d in 1..=n {
        if !used[d as usize] {
            used[d as usize] = true;
            prefix.push(d);
            build_lex(n, k, used, prefix, out);
            prefix.pop();
            used[d as usize] = false;
        }
    }
}

/// 0-based index of `a` in the lexicographic enumeration of its universe.
pub fn rank(a: &Arrangement) -> u64 {
    let n = a.ambient as u64;
    let k = a.digits.len() as u64;
    let mut used = [false; MAX_N as usize + 1];
    let mut r: u64 = 0;
    for (i, &d) in a.digits.iter().enumerate() {
        let smaller_unused = (1..d).filter(|&x| !used[x as usize]).count() as u64;
        // completions of one position filled with a fixed digit
        let block = falling_product(n - 1 - i as u64, k - 1 - i as u64)
            .expect("in-range by Arrangement invariants");
        r += smaller_unused * block;
        used[d as usize] = true;
    }
    r
}

/// Inverse of [`rank`]: the arrangement at 0-based index `r` in P(n,k).
pub fn unrank(r: u64, n: u8, k: u8) -> Result<Arrangement> {
    let total = arrangement_count(n, k)?;
    if r >= total {
        return Err(Error::domain(alloc::format!(
            "rank {r} out of range 0..{total}"
        )));
    }
    let mut rem = r;
    let mut used = [false; MAX_N as usize + 1];
    let mut digits = Vec::with_capacity(k as usize);
    for i in 0..k as u64 {
        let block = falling_product(n as u64 - 1 - i, k as u64 - 1 - i)?;
        let idx = rem / block;
        rem %= block;
        let mut seen = 0;
        for d in 1..=n {
            if !used[d as usize] {
                if seen == idx {
                    used[d as usize] = true;
                    digits.push(d);
                    break;
                }
                seen += 1;
            }
        }
    }
    Ok(Arrangement { digits, ambient: n })
}
