//! Closed-form values of h-super connectivity and h-super edge-connectivity
//! for the star, (n,k)-star and alternating-group families.
//!
//! The (n,k)-star values are piecewise in `h`. Below the crossover
//! `h = n-k` the two measures differ; from the crossover up both equal
//! `(h+1)!(n-h-1)/(n-k)!`. At the crossover itself every applicable branch
//! must produce `(n-k+1)(k-1)`; the evaluators compute all of them and
//! refuse to answer if they disagree.
//!
//! Everything is exact 64-bit integer arithmetic with overflow checks; the
//! values are combinatorial counts, so no floating point appears anywhere.
//! The fractional regime test `h <= n/2 - 1` is evaluated exactly as
//! `2h <= n - 2`.

use crate::error::{Error, Result};
use crate::Measure;

/// Parameters identifying one (n,k)-star instance and a degree floor `h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyParams {
    pub n: u32,
    pub k: u32,
    pub h: u32,
}

impl FamilyParams {
    pub fn new(n: u32, k: u32, h: u32) -> Result<Self> {
        if n < 3 || k < 2 || k > n - 1 {
            return Err(Error::domain(alloc::format!(
                "need 2 <= k <= n-1, got n={n} k={k} (the measures do not exist for k=1)"
            )));
        }
        if h > n - 2 {
            return Err(Error::domain(alloc::format!(
                "need 0 <= h <= n-2, got h={h} for n={n}"
            )));
        }
        if n > 20 {
            return Err(Error::domain(alloc::format!("n={n} exceeds the n <= 20 cap")));
        }
        Ok(FamilyParams { n, k, h })
    }

    /// Crossover point between the two regimes.
    pub fn crossover(&self) -> u32 {
        self.n - self.k
    }
}

/// Which closed form produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Vertex measure below the crossover: `n + h(k-2) - 1`.
    KappaLow,
    /// Edge measure below the crossover with `h <= min(k-2, n/2-1)`:
    /// `(n-h-1)(h+1)`.
    LambdaLowSmallH,
    /// Edge measure below the crossover, remaining cases: `(n-k+1)(k-1)`.
    LambdaLowOtherwise,
    /// Both measures from the crossover up: `(h+1)!(n-h-1)/(n-k)!`.
    High,
    /// Star graph, all `0 <= h <= n-2`: `(h+1)!(n-h-1)`.
    Star,
    /// Alternating-group network, `2 <= h <= n-2`: `(h+1)!(n-h-1)/2`.
    AnHigh,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::KappaLow => "kappa_low",
            Branch::LambdaLowSmallH => "lambda_low_small_h",
            Branch::LambdaLowOtherwise => "lambda_low_otherwise",
            Branch::High => "high",
            Branch::Star => "star",
            Branch::AnHigh => "an_high",
        }
    }
}

impl core::fmt::Display for Branch {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormulaResult {
    pub value: u64,
    pub branch: Branch,
}

fn checked_mul(a: u64, b: u64) -> Result<u64> {
    a.checked_mul(b)
        .ok_or_else(|| Error::domain("formula value overflows u64"))
}

/// `(h+1)! / (n-k)!` as the exact product `(n-k+1)(n-k+2)...(h+1)`,
/// valid for `h >= n-k` so no division is ever needed.
fn factorial_ratio(p: &FamilyParams) -> Result<u64> {
    debug_assert!(p.h >= p.crossover());
    let mut out: u64 = 1;
    for i in (p.n - p.k + 1)..=(p.h + 1) {
        out = checked_mul(out, i as u64)?;
    }
    Ok(out)
}

/// Shared regime value for `n-k <= h <= n-2`: `(h+1)!(n-h-1)/(n-k)!`.
fn high_value(p: &FamilyParams) -> Result<u64> {
    checked_mul(factorial_ratio(p)?, (p.n - p.h - 1) as u64)
}

fn kappa_low_value(p: &FamilyParams) -> u64 {
    // n + h(k-2) - 1; k >= 2 keeps this nonnegative
    p.n as u64 + p.h as u64 * (p.k as u64 - 2) - 1
}

fn lambda_low(p: &FamilyParams) -> (u64, Branch) {
    let small_h = p.k >= 2 && p.h <= p.k - 2 && 2 * p.h <= p.n - 2;
    if small_h {
        (
            (p.n as u64 - p.h as u64 - 1) * (p.h as u64 + 1),
            Branch::LambdaLowSmallH,
        )
    } else {
        (
            (p.n as u64 - p.k as u64 + 1) * (p.k as u64 - 1),
            Branch::LambdaLowOtherwise,
        )
    }
}

fn crossover_value(p: &FamilyParams) -> u64 {
    (p.n as u64 - p.k as u64 + 1) * (p.k as u64 - 1)
}

/// h-super connectivity of the (n,k)-star graph.
pub fn kappa_nkstar_formula(p: &FamilyParams) -> Result<FormulaResult> {
    FamilyParams::new(p.n, p.k, p.h)?;
    let cross = p.crossover();
    if p.h < cross {
        return Ok(FormulaResult {
            value: kappa_low_value(p),
            branch: Branch::KappaLow,
        });
    }
    let value = high_value(p)?;
    if p.h == cross {
        let low = kappa_low_value(p);
        let expected = crossover_value(p);
        if low != value || value != expected {
            return Err(Error::structure(alloc::format!(
                "crossover disagreement at n={} k={} h={}: low={low} high={value} expected={expected}",
                p.n, p.k, p.h
            )));
        }
    }
    Ok(FormulaResult {
        value,
        branch: Branch::High,
    })
}

/// h-super edge-connectivity of the (n,k)-star graph.
pub fn lambda_nkstar_formula(p: &FamilyParams) -> Result<FormulaResult> {
    FamilyParams::new(p.n, p.k, p.h)?;
    let cross = p.crossover();
    if p.h < cross {
        let (value, branch) = lambda_low(p);
        return Ok(FormulaResult { value, branch });
    }
    let value = high_value(p)?;
    if p.h == cross {
        let (low, _) = lambda_low(p);
        let expected = crossover_value(p);
        if low != value || value != expected {
            return Err(Error::structure(alloc::format!(
                "crossover disagreement at n={} k={} h={}: low={low} high={value} expected={expected}",
                p.n, p.k, p.h
            )));
        }
    }
    Ok(FormulaResult {
        value,
        branch: Branch::High,
    })
}

/// Both measures of the star graph: `(h+1)!(n-h-1)` for `0 <= h <= n-2`.
pub fn star_formula(n: u32, h: u32) -> Result<FormulaResult> {
    if n < 2 || n > 20 {
        return Err(Error::domain(alloc::format!("star formula needs 2 <= n <= 20, got {n}")));
    }
    if h > n - 2 {
        return Err(Error::domain(alloc::format!(
            "star formula needs 0 <= h <= n-2, got h={h}"
        )));
    }
    let mut fact: u64 = 1;
    for i in 1..=(h + 1) {
        fact = checked_mul(fact, i as u64)?;
    }
    Ok(FormulaResult {
        value: checked_mul(fact, (n - h - 1) as u64)?,
        branch: Branch::Star,
    })
}

/// Both measures of the alternating-group network. For `h >= 2` the value
/// is `(h+1)!(n-h-1)/2`, the same for both measures; for `h` in `{0,1}` it
/// routes to the (n,k)-star forms with `k = n-2`, where the measures
/// differ, so the caller must say which one it wants.
pub fn an_formula(n: u32, h: u32, measure: Measure) -> Result<FormulaResult> {
    if n < 4 || n > 20 {
        return Err(Error::domain(alloc::format!(
            "alternating-network formula needs 4 <= n <= 20, got {n}"
        )));
    }
    if h > n - 2 {
        return Err(Error::domain(alloc::format!(
            "alternating-network formula needs 0 <= h <= n-2, got h={h}"
        )));
    }
    if h < 2 {
        let p = FamilyParams::new(n, n - 2, h)?;
        return match measure {
            Measure::Kappa => kappa_nkstar_formula(&p),
            Measure::Lambda => lambda_nkstar_formula(&p),
        };
    }
    let mut fact: u64 = 1;
    for i in 1..=(h + 1) {
        fact = checked_mul(fact, i as u64)?;
    }
    let double = checked_mul(fact, (n - h - 1) as u64)?;
    debug_assert!(double % 2 == 0, "(h+1)! is even for h >= 1");
    Ok(FormulaResult {
        value: double / 2,
        branch: Branch::AnHigh,
    })
}
