//! The digit pattern d1^ell d2^m d1^ell: closed-form composition, string
//! recognition, and the exhaustive low-range search over sequence indices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::real::pow10;
use crate::sequence::TribLucasSequence;
use crate::{Error, Result};

/// Parameters of a palindromic concatenation of two distinct repdigits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PatternParams {
    pub d1: u8,
    pub d2: u8,
    pub ell: u32,
    pub m: u32,
}

impl PatternParams {
    pub fn new(d1: u8, d2: u8, ell: u32, m: u32) -> Result<Self> {
        let p = PatternParams { d1, d2, ell, m };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d1 == 0 || self.d1 > 9 || self.d2 > 9 {
            return Err(Error::InvalidParams(
                "digits must satisfy 1<=d1<=9, 0<=d2<=9".into(),
            ));
        }
        if self.d1 == self.d2 {
            return Err(Error::InvalidParams("d1 and d2 must be distinct".into()));
        }
        if self.ell == 0 || self.m == 0 {
            return Err(Error::InvalidParams(
                "block lengths must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// A sequence index whose term matches the pattern.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternSolution {
    pub n: usize,
    pub params: PatternParams,
}

/// Closed form (d1*10^(2l+m) - (d1-d2)*10^(l+m) + (d1-d2)*10^l - d1)/9.
pub fn compose(params: &PatternParams) -> Result<BigInt> {
    params.validate()?;
    let d1 = BigInt::from(params.d1);
    let diff = BigInt::from(params.d1 as i32 - params.d2 as i32);
    let l = params.ell;
    let m = params.m;
    let num = &d1 * pow10(2 * l + m) - &diff * pow10(l + m) + &diff * pow10(l) - &d1;
    let (q, r) = num.div_rem(&BigInt::from(9));
    debug_assert!(r.is_zero(), "pattern closed form must divide by 9");
    Ok(q)
}

/// Direct digit-string construction d1^ell d2^m d1^ell; the independent
/// route the closed form is validated against.
pub fn compose_digits(params: &PatternParams) -> Result<BigInt> {
    params.validate()?;
    let mut s = String::with_capacity((2 * params.ell + params.m) as usize);
    let c1 = char::from(b'0' + params.d1);
    let c2 = char::from(b'0' + params.d2);
    for _ in 0..params.ell {
        s.push(c1);
    }
    for _ in 0..params.m {
        s.push(c2);
    }
    for _ in 0..params.ell {
        s.push(c1);
    }
    Ok(s.parse().expect("digit string is a valid integer"))
}

/// Inverse of [`compose`]: the unique parameters reproducing `n`, if any.
///
/// Scans the decimal string: the leading run fixes d1 and ell, the trailing
/// run must mirror it, and the middle must be one constant run of a
/// different digit.
pub fn recognize(n: &BigInt) -> Option<PatternParams> {
    if n.is_negative() {
        return None;
    }
    let s = n.to_string();
    let b = s.as_bytes();
    if b.len() < 3 {
        return None;
    }
    let d1 = b[0];
    let lead = b.iter().take_while(|&&c| c == d1).count();
    // middle must exist: pattern is d1^l d2^m d1^l with m >= 1
    if 2 * lead >= b.len() {
        return None;
    }
    let tail = b.iter().rev().take_while(|&&c| c == d1).count();
    if tail != lead {
        return None;
    }
    let mid = &b[lead..b.len() - lead];
    let d2 = mid[0];
    if d2 == d1 || mid.iter().any(|&c| c != d2) {
        return None;
    }
    Some(PatternParams {
        d1: d1 - b'0',
        d2: d2 - b'0',
        ell: lead as u32,
        m: mid.len() as u32,
    })
}

/// All n <= n_max with recognize(S_n) nonempty, in increasing n.
pub fn search_low_range(seq: &TribLucasSequence, n_max: usize) -> Result<Vec<PatternSolution>> {
    if n_max < 3 {
        return Err(Error::InvalidParams(
            "search range must reach n >= 3".into(),
        ));
    }
    let terms = seq.prefix(n_max);
    let mut found: Vec<PatternSolution> = terms
        .par_iter()
        .enumerate()
        .filter_map(|(n, t)| recognize(t).map(|params| PatternSolution { n, params }))
        .collect();
    found.sort_by_key(|s| s.n);
    Ok(found)
}
