//! Certified real arithmetic with ball (midpoint + radius) semantics.
//!
//! A [`CertifiedReal`] stores `mid` and `rad` as integers scaled by
//! `10^prec`; the exact value it stands for is guaranteed to lie in
//! `[(mid - rad)/10^prec, (mid + rad)/10^prec]`. Every operation widens the
//! radius enough to keep that containment true, so any sign test or
//! inequality that the API reports as certified is rigorous. Rounding is
//! plain floor division plus one ulp of slack; nothing here depends on the
//! platform's floating point.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

thread_local! {
    static POW10_CACHE: std::cell::RefCell<HashMap<u32, BigInt>> =
        std::cell::RefCell::new(HashMap::new());
}

/// 10^p, cached per thread: ball operations request the same scale constantly.
pub fn pow10(p: u32) -> BigInt {
    POW10_CACHE.with(|cache| {
        cache
            .borrow_mut()
            .entry(p)
            .or_insert_with(|| BigInt::from(10u32).pow(p))
            .clone()
    })
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    debug_assert!(b.is_positive());
    let (q, r) = a.div_rem(b);
    if r.is_zero() || a.is_negative() {
        q
    } else {
        q + 1
    }
}

/// Nearest integer to `v / scale`, rounding halves away from zero.
fn round_half_away(v: &BigInt, scale: &BigInt) -> BigInt {
    if v.is_negative() {
        -round_half_away(&-v, scale)
    } else {
        (v * BigInt::from(2) + scale).div_floor(&(scale * BigInt::from(2)))
    }
}

/// Decimal digit count of |n| (1 for zero).
fn digits10(n: &BigInt) -> i64 {
    let s = n.abs().to_string();
    s.len() as i64
}

#[derive(Clone, Debug)]
pub struct CertifiedReal {
    mid: BigInt,
    rad: BigInt,
    prec: u32,
}

struct LnConsts {
    ln2: (BigInt, BigInt),
    ln10: (BigInt, BigInt),
    /// ln((16+k)/16) for k = 0..=15 (entry 0 is zero), for range reduction
    ln_sixteenths: Vec<(BigInt, BigInt)>,
}

static LN_CACHE: OnceLock<Mutex<HashMap<u32, &'static LnConsts>>> = OnceLock::new();

/// 2 atanh(p/q) = ln((q+p)/(q-p)) scaled by 10^prec, with an error bound in
/// ulps; needs p/q <= 1/2 so the series converges geometrically.
fn two_atanh_ratio(p: u32, q: u32, prec: u32) -> (BigInt, BigInt) {
    debug_assert!(p > 0 && 2 * p <= q);
    let scale = pow10(prec);
    let p2 = BigInt::from(u64::from(p) * u64::from(p));
    let q2 = BigInt::from(u64::from(q) * u64::from(q));
    let mut num = BigInt::from(p) * &scale;
    let mut den = BigInt::from(q);
    let mut k: u64 = 0;
    let mut sum = BigInt::zero();
    let mut terms: u64 = 0;
    loop {
        let term = num.div_floor(&(&den * BigInt::from(2 * k + 1)));
        if term.is_zero() {
            break;
        }
        sum += term;
        num *= &p2;
        den *= &q2;
        k += 1;
        terms += 1;
    }
    // one ulp per floor division, plus the truncated tail
    (sum * 2, BigInt::from(2 * (terms + 2)))
}

fn ln_consts(prec: u32) -> &'static LnConsts {
    let cache = LN_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("ln cache poisoned");
    if let Some(c) = map.get(&prec) {
        return c;
    }
    let ln2 = two_atanh_ratio(1, 3, prec);
    // ln 10 = ln(5/4) + 3 ln 2, and ln(5/4) = 2 atanh(1/9)
    let (m54, e54) = two_atanh_ratio(1, 9, prec);
    let ln10 = (&m54 + &ln2.0 * 3, &e54 + &ln2.1 * 3 + 1);
    let mut ln_sixteenths = vec![(BigInt::zero(), BigInt::zero())];
    for k in 1u32..=15 {
        // ln((16+k)/16) = 2 atanh(k/(32+k))
        ln_sixteenths.push(two_atanh_ratio(k, 32 + k, prec));
    }
    let boxed: &'static LnConsts = Box::leak(Box::new(LnConsts {
        ln2,
        ln10,
        ln_sixteenths,
    }));
    map.insert(prec, boxed);
    boxed
}

/// ln(m / 10^prec) for m > 0, as (scaled midpoint, error in ulps).
fn ln_fixed(m: &BigInt, prec: u32) -> (BigInt, BigInt) {
    debug_assert!(m.is_positive());
    let scale = pow10(prec);
    let mut err = BigInt::zero();

    // decimal reduction: y/scale in [1, 10)
    let k = digits10(m) - i64::from(prec) - 1;
    let mut y = if k > 0 {
        err += 1;
        m.div_floor(&pow10(k as u32))
    } else if k < 0 {
        m * pow10((-k) as u32)
    } else {
        m.clone()
    };

    // binary reduction: y/scale in [1, 2); each floor halving costs at most
    // one ulp of ln
    let two_scale = &scale * 2;
    let mut j: u32 = 0;
    while y >= two_scale {
        y = y.div_floor(&BigInt::from(2));
        j += 1;
    }
    err += j;

    // sixteenth reduction: y/scale in [1, 1 + 1/16)
    let k16 = usize::try_from(((&y - &scale) * 16u32).div_floor(&scale))
        .unwrap_or(15)
        .min(15);
    if k16 > 0 {
        y = (y * 16u32).div_floor(&BigInt::from(16 + k16 as u32));
        err += 1;
    }

    // ln(y/scale) = 2 atanh(u) with u = (y - scale)/(y + scale) in [0, 1/33)
    let u = ((&y - &scale) * &scale).div_floor(&(&y + &scale));
    let u2 = (&u * &u).div_floor(&scale);
    let mut t = u.clone();
    let mut sum = u;
    let mut i: u64 = 1;
    let mut iters: u64 = 0;
    loop {
        t = (&t * &u2).div_floor(&scale);
        if t.is_zero() {
            break;
        }
        sum += t.div_floor(&BigInt::from(2 * i + 1));
        i += 1;
        iters += 1;
    }
    let series_err = BigInt::from(8 * (iters + 2));
    let consts = ln_consts(prec);
    let mut mid = sum * 2;
    err += series_err;
    if k16 > 0 {
        mid += &consts.ln_sixteenths[k16].0;
        err += &consts.ln_sixteenths[k16].1;
    }
    if j > 0 {
        mid += &consts.ln2.0 * j;
        err += &consts.ln2.1 * j;
    }
    if k != 0 {
        let ka = BigInt::from(k.unsigned_abs());
        if k > 0 {
            mid += &consts.ln10.0 * &ka;
        } else {
            mid -= &consts.ln10.0 * &ka;
        }
        err += &consts.ln10.1 * &ka;
    }
    (mid, err + 2)
}

impl CertifiedReal {
    pub fn new(mid: BigInt, rad: BigInt, prec: u32) -> Self {
        debug_assert!(!rad.is_negative());
        CertifiedReal { mid, rad, prec }
    }

    pub fn zero(prec: u32) -> Self {
        Self::new(BigInt::zero(), BigInt::zero(), prec)
    }

    pub fn one(prec: u32) -> Self {
        Self::from_bigint(&BigInt::one(), prec)
    }

    /// Exact embedding of an integer.
    pub fn from_bigint(n: &BigInt, prec: u32) -> Self {
        Self::new(n * pow10(prec), BigInt::zero(), prec)
    }

    pub fn from_u64(n: u64, prec: u32) -> Self {
        Self::from_bigint(&BigInt::from(n), prec)
    }

    /// p/q to within one ulp (exact when q divides p * 10^prec).
    pub fn from_ratio(p: &BigInt, q: &BigInt, prec: u32) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::InvalidParams("zero denominator".into()));
        }
        let (p, q) = if q.is_negative() {
            (-p, -q)
        } else {
            (p.clone(), q.clone())
        };
        let (mid, rem) = (p * pow10(prec)).div_mod_floor(&q);
        let rad = if rem.is_zero() {
            BigInt::zero()
        } else {
            BigInt::one()
        };
        Ok(Self::new(mid, rad, prec))
    }

    /// Exact decimal literal, e.g. "1.83" or "-0.25".
    pub fn from_decimal_str(s: &str, prec: u32) -> Result<Self> {
        let (int_part, frac_part) = match s.split_once('.') {
            Some((a, b)) => (a, b),
            None => (s, ""),
        };
        if frac_part.len() > prec as usize {
            return Err(Error::InvalidParams(format!(
                "literal {s} has more fractional digits than precision {prec}"
            )));
        }
        let neg = int_part.starts_with('-');
        let digits: String = format!("{}{}", int_part.trim_start_matches('-'), frac_part);
        let n: BigInt = digits
            .parse()
            .map_err(|_| Error::InvalidParams(format!("bad decimal literal {s}")))?;
        let mid = n * pow10(prec - frac_part.len() as u32);
        Ok(Self::new(
            if neg { -mid } else { mid },
            BigInt::zero(),
            prec,
        ))
    }

    /// Ball covering the exact interval [lo, hi] (both scaled by 10^prec).
    pub fn from_interval(lo: BigInt, hi: BigInt, prec: u32) -> Self {
        debug_assert!(lo <= hi);
        let mid = (&lo + &hi).div_floor(&BigInt::from(2));
        let rad = std::cmp::max(&hi - &mid, &mid - &lo);
        Self::new(mid, rad, prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn mid(&self) -> &BigInt {
        &self.mid
    }

    pub fn rad(&self) -> &BigInt {
        &self.rad
    }

    /// Scaled lower end mid - rad.
    pub fn lo(&self) -> BigInt {
        &self.mid - &self.rad
    }

    /// Scaled upper end mid + rad.
    pub fn hi(&self) -> BigInt {
        &self.mid + &self.rad
    }

    /// Exact rescale to a higher precision (lossless), or rounding rescale down.
    pub fn rescale(&self, prec: u32) -> Self {
        if prec == self.prec {
            self.clone()
        } else if prec > self.prec {
            let f = pow10(prec - self.prec);
            Self::new(&self.mid * &f, &self.rad * &f, prec)
        } else {
            let f = pow10(self.prec - prec);
            Self::new(self.mid.div_floor(&f), self.rad.div_floor(&f) + 2, prec)
        }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let p = self.prec.max(other.prec);
        (self.rescale(p), other.rescale(p))
    }

    /// Relative radius check: at least half the working digits must remain
    /// certified, else the computation reports precision exhaustion.
    pub fn check_exhaustion(&self) -> Result<()> {
        let scale = pow10(self.prec);
        let mag = std::cmp::max(self.mid.abs(), scale);
        if &self.rad * pow10(self.prec.div_ceil(2)) > mag {
            return Err(Error::PrecisionExhausted(format!(
                "radius 1e{} exceeds certified budget at precision {}",
                self.radius_exp10().unwrap_or(0),
                self.prec
            )));
        }
        Ok(())
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.mid, self.rad.clone(), self.prec)
    }

    pub fn abs(&self) -> Self {
        let lo = self.lo();
        let hi = self.hi();
        if !lo.is_negative() {
            self.clone()
        } else if !hi.is_positive() {
            self.neg()
        } else {
            Self::from_interval(BigInt::zero(), std::cmp::max(-lo, hi), self.prec)
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        Self::new(a.mid + b.mid, a.rad + b.rad, a.prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let scale = pow10(a.prec);
        let mid = (&a.mid * &b.mid).div_floor(&scale);
        let rad = ceil_div(
            &(a.mid.abs() * &b.rad + b.mid.abs() * &a.rad + &a.rad * &b.rad),
            &scale,
        ) + 1;
        Self::new(mid, rad, a.prec)
    }

    /// Exact scaling by an integer.
    pub fn mul_bigint(&self, k: &BigInt) -> Self {
        Self::new(&self.mid * k, &self.rad * k.abs(), self.prec)
    }

    pub fn div_bigint(&self, k: &BigInt) -> Result<Self> {
        if k.is_zero() {
            return Err(Error::InvalidParams("division by zero integer".into()));
        }
        let mid = self.mid.div_floor(k);
        let rad = ceil_div(&self.rad, &k.abs()) + 1;
        Ok(Self::new(mid, rad, self.prec))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other);
        let babs = b.mid.abs();
        let denom_lo = &babs - &b.rad;
        if !denom_lo.is_positive() {
            return Err(Error::PrecisionExhausted(
                "denominator ball contains zero".into(),
            ));
        }
        let scale = pow10(a.prec);
        let mid = (&a.mid * &scale).div_floor(&b.mid);
        let rad = ceil_div(
            &(&scale * (a.mid.abs() * &b.rad + &babs * &a.rad)),
            &(&babs * &denom_lo),
        ) + 2;
        Ok(Self::new(mid, rad, a.prec))
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one(self.prec).div(self)
    }

    /// Integer power by repeated squaring; negative exponents go through recip.
    pub fn powi(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.powi(-n)?.recip();
        }
        let mut result = Self::one(self.prec);
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(result)
    }

    /// Natural logarithm; requires the ball to be certainly positive.
    pub fn ln(&self) -> Result<Self> {
        let lo = self.lo();
        if !lo.is_positive() {
            return Err(Error::Domain("ln of a ball not certainly positive".into()));
        }
        let (mid, err) = ln_fixed(&self.mid, self.prec);
        // |ln x - ln m| <= rad / lo for x in the ball
        let scale = pow10(self.prec);
        let prop = ceil_div(&(&self.rad * &scale), &lo) + 1;
        let out = Self::new(mid, err + prop, self.prec);
        out.check_exhaustion()?;
        Ok(out)
    }

    /// ln 2 as a certified constant.
    pub fn ln2(prec: u32) -> Self {
        let c = ln_consts(prec);
        Self::new(c.ln2.0.clone(), c.ln2.1.clone(), prec)
    }

    /// ln 10 as a certified constant.
    pub fn ln10(prec: u32) -> Self {
        let c = ln_consts(prec);
        Self::new(c.ln10.0.clone(), c.ln10.1.clone(), prec)
    }

    pub fn sqrt(&self) -> Result<Self> {
        let lo = self.lo();
        if lo.is_negative() {
            return Err(Error::Domain("sqrt of a possibly negative ball".into()));
        }
        let scale = pow10(self.prec);
        let mid = (&self.mid * &scale).sqrt();
        let rad = if lo.is_positive() {
            let root_lo = (&lo * &scale).sqrt();
            if root_lo.is_zero() {
                (&self.rad * &scale).sqrt() + 2
            } else {
                ceil_div(&(&self.rad * &scale), &(&root_lo * 2)) + 2
            }
        } else {
            (&self.rad * &scale).sqrt() + 2
        };
        Ok(Self::new(mid, rad, self.prec))
    }

    pub fn cbrt(&self) -> Result<Self> {
        let lo = self.lo();
        if !lo.is_positive() {
            return Err(Error::Domain(
                "cbrt restricted to certainly positive balls".into(),
            ));
        }
        let scale = pow10(self.prec);
        let s2 = &scale * &scale;
        let mid = (&self.mid * &s2).cbrt();
        // |x^(1/3) - m^(1/3)| <= rad / (3 lo^(2/3))
        let root_lo = (&lo * &s2).cbrt();
        let denom = (&root_lo * &root_lo * 3u32).div_floor(&(&scale * &scale));
        let rad = if denom.is_positive() {
            ceil_div(&(&self.rad * &scale), &denom) + 2
        } else {
            return Err(Error::PrecisionExhausted("cbrt near zero".into()));
        };
        Ok(Self::new(mid, rad, self.prec))
    }

    /// Certified floor: fails when the ball straddles an integer boundary.
    pub fn floor_certified(&self) -> Result<BigInt> {
        let scale = pow10(self.prec);
        let fl = self.lo().div_floor(&scale);
        let fh = self.hi().div_floor(&scale);
        if fl == fh {
            Ok(fl)
        } else {
            Err(Error::PrecisionExhausted("floor ambiguous".into()))
        }
    }

    /// Certified ceiling.
    pub fn ceil_certified(&self) -> Result<BigInt> {
        Ok(-(self.neg().floor_certified()?))
    }

    /// Floor of the upper end of the ball (always defined; a safe over-bound).
    pub fn floor_upper(&self) -> BigInt {
        self.hi().div_floor(&pow10(self.prec))
    }

    /// Ceiling of the upper end of the ball.
    pub fn ceil_upper(&self) -> BigInt {
        -((-self.hi()).div_floor(&pow10(self.prec)))
    }

    /// Nearest integer with halves away from zero; fails when ambiguous
    /// (ball spans a half-integer).
    pub fn round_nearest_certified(&self) -> Result<BigInt> {
        let scale = pow10(self.prec);
        let nl = round_half_away(&self.lo(), &scale);
        let nh = round_half_away(&self.hi(), &scale);
        if nl == nh {
            Ok(nl)
        } else {
            Err(Error::PrecisionExhausted(
                "nearest integer ambiguous".into(),
            ))
        }
    }

    /// Distance to the nearest integer, ||x||, as a certified ball in [0, 1/2].
    ///
    /// Fails when the ball straddles a half-integer, since the nearest
    /// integer is then ambiguous.
    pub fn nearest_int_distance(&self) -> Result<Self> {
        let scale = pow10(self.prec);
        let lo = self.lo();
        let hi = self.hi();
        let nl = round_half_away(&lo, &scale);
        let nh = round_half_away(&hi, &scale);
        if nl != nh {
            return Err(Error::PrecisionExhausted(
                "nearest-integer distance straddles a half-integer".into(),
            ));
        }
        let n = nl * &scale;
        let (dlo, dhi) = if n <= lo {
            (&lo - &n, &hi - &n)
        } else if n >= hi {
            (&n - &hi, &n - &lo)
        } else {
            (BigInt::zero(), std::cmp::max(&hi - &n, &n - &lo))
        };
        let out = Self::from_interval(dlo, dhi, self.prec);
        Ok(out)
    }

    /// Certified strict a < b.
    pub fn certified_lt(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        a.hi() < b.lo()
    }

    /// Certified a <= b.
    pub fn certified_le(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        a.hi() <= b.lo()
    }

    pub fn certified_gt(&self, other: &Self) -> bool {
        other.certified_lt(self)
    }

    pub fn certified_ge(&self, other: &Self) -> bool {
        other.certified_le(self)
    }

    pub fn is_certainly_positive(&self) -> bool {
        self.lo().is_positive()
    }

    pub fn is_certainly_nonpositive(&self) -> bool {
        !self.hi().is_positive()
    }

    /// Certified sign: +1 / -1 / 0 (exact zero), or None when undecidable.
    pub fn sign_certified(&self) -> Option<i8> {
        if self.rad.is_zero() && self.mid.is_zero() {
            Some(0)
        } else if self.lo().is_positive() {
            Some(1)
        } else if self.hi().is_negative() {
            Some(-1)
        } else {
            None
        }
    }

    /// Do the two balls overlap (necessary condition for representing the
    /// same exact value)?
    pub fn overlaps(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        (&a.mid - &b.mid).abs() <= &a.rad + &b.rad
    }

    /// Midpoint as a decimal string truncated toward zero at `frac`
    /// fractional digits. Deterministic; used for reports.
    pub fn decimal_str(&self, frac: usize) -> String {
        let frac = frac.min(self.prec as usize);
        let cut = pow10(self.prec - frac as u32);
        let a = self.mid.abs() / &cut;
        let scale = pow10(frac as u32);
        let (ip, fp) = a.div_rem(&scale);
        let sign = if self.mid.is_negative() && !a.is_zero() {
            "-"
        } else {
            ""
        };
        if frac == 0 {
            format!("{sign}{ip}")
        } else {
            format!("{sign}{ip}.{:0width$}", fp, width = frac)
        }
    }

    /// Upper bound on the radius as a power of ten exponent (rad <= 10^e),
    /// or None for an exact value.
    pub fn radius_exp10(&self) -> Option<i64> {
        if self.rad.is_zero() {
            None
        } else {
            Some(digits10(&self.rad) - i64::from(self.prec))
        }
    }

    /// Midpoint in scientific notation with `sig` significant digits
    /// (truncated). Deterministic; used for report rendering.
    pub fn sci_str(&self, sig: usize) -> String {
        if self.mid.is_zero() {
            return "0".into();
        }
        let digits = self.mid.abs().to_string();
        let exp = digits.len() as i64 - 1 - i64::from(self.prec);
        let sig = sig.max(1).min(digits.len());
        let mantissa = if sig == 1 {
            digits[..1].to_string()
        } else {
            format!("{}.{}", &digits[..1], &digits[1..sig])
        };
        let sign = if self.mid.is_negative() { "-" } else { "" };
        format!("{sign}{mantissa}e{exp}")
    }
}
