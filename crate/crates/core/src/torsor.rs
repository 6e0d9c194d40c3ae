//! Universal-torsor coordinates.
//!
//! A torsor point is `(xi_1, xi_2, xi_3, xi_l, xi_4, xi_5, xi_6; tau_1, tau_2, tau_l)`
//! with positive `xi` and
//!
//! ```text
//! tau_l xi_l^3 xi_4^2 xi_5 + tau_2^2 xi_2 + tau_1^3 xi_1^2 xi_3 = 0.
//! ```
//!
//! The map [`psi`] sends it to the surface point
//!
//! ```text
//! x0 = xi^(1,2,2,0,1,2,3) tau_2,  x1 = tau_l,
//! x2 = xi^(2,3,4,3,4,5,6),        x3 = xi^(2,2,3,1,2,3,4) tau_1.
//! ```
//!
//! Two coprimality schemes `T1` and `T2` single out a unique preimage; [`lift_t1`]
//! constructs the `T1` preimage and [`phi_t1_to_t2`] / [`phi_t2_to_t1`] move between
//! the schemes by shuffling prime exponents among `xi_1, xi_3, xi_6, tau_1`.

use crate::arith::{factorize, Factorization};
use crate::surface::{canonicalize, Rejection, SurfacePoint};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Exponents `lambda` of the height monomial `x2 = xi^lambda`.
pub const HEIGHT_EXPONENTS: [u32; 7] = [2, 3, 4, 3, 4, 5, 6];

/// Exponents of a `xi`-monomial in coordinate order `1, 2, 3, l, 4, 5, 6`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentVector(pub [u32; 7]);

impl ExponentVector {
    /// Monomial multiplying `tau_2` in `x0`.
    pub const X0: Self = ExponentVector([1, 2, 2, 0, 1, 2, 3]);
    /// `x2`, also the height monomial.
    pub const X2: Self = ExponentVector(HEIGHT_EXPONENTS);
    /// Monomial multiplying `tau_1` in `x3`.
    pub const X3: Self = ExponentVector([2, 2, 3, 1, 2, 3, 4]);
    /// Coefficient of `tau_l` in the torsor equation.
    pub const Q0: Self = ExponentVector([0, 0, 0, 3, 2, 1, 0]);

    /// `prod xi_i^{n_i}`, or `None` on `u128` overflow.
    pub fn eval(&self, xi: &Xi) -> Option<u128> {
        xi.0.iter().zip(self.0).try_fold(1u128, |acc, (&x, n)| {
            (x as u128).checked_pow(n).and_then(|p| acc.checked_mul(p))
        })
    }
}

/// The seven `xi` coordinates, all positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Xi([u64; 7]);

impl Xi {
    /// Panics if a coordinate is zero.
    pub fn new(coords: [u64; 7]) -> Self {
        assert!(coords.iter().all(|&c| c > 0), "xi coordinates must be positive");
        Xi(coords)
    }

    pub fn ones() -> Self {
        Xi([1; 7])
    }

    pub fn as_array(&self) -> [u64; 7] {
        self.0
    }

    pub fn xi1(&self) -> u64 {
        self.0[0]
    }
    pub fn xi2(&self) -> u64 {
        self.0[1]
    }
    pub fn xi3(&self) -> u64 {
        self.0[2]
    }
    pub fn xil(&self) -> u64 {
        self.0[3]
    }
    pub fn xi4(&self) -> u64 {
        self.0[4]
    }
    pub fn xi5(&self) -> u64 {
        self.0[5]
    }
    pub fn xi6(&self) -> u64 {
        self.0[6]
    }

    /// `xi^(2,3,4,3,4,5,6)`; panics on `u128` overflow.
    pub fn height_monomial(&self) -> u128 {
        ExponentVector::X2.eval(self).expect("height monomial overflows u128")
    }

    /// `q0 = xi_l^3 xi_4^2 xi_5`; panics on `u128` overflow.
    pub fn q0(&self) -> u128 {
        ExponentVector::Q0.eval(self).expect("q0 overflows u128")
    }

    /// Membership in `F`: `xi_2 xi_3 xi_4 xi_5` squarefree,
    /// `gcd(xi_1, xi_2 xi_l xi_4 xi_5) = gcd(xi_l, xi_2 xi_3) = 1`.
    pub fn in_f(&self) -> bool {
        let [x1, x2, x3, xl, x4, x5, _] = self.0;
        squarefree_product(&[x2, x3, x4, x5])
            && coprime_to_product(x1, &[x2, xl, x4, x5])
            && coprime_to_product(xl, &[x2, x3])
    }
}

impl fmt::Display for Xi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, l, d, e, g] = self.0;
        write!(f, "({a},{b},{c},{l},{d},{e},{g})")
    }
}

/// True when the product of `vals` is squarefree.
pub fn squarefree_product(vals: &[u64]) -> bool {
    vals.iter().all(|&v| factorize(v).is_squarefree())
        && vals
            .iter()
            .enumerate()
            .all(|(i, &a)| vals[i + 1..].iter().all(|&b| a.gcd(&b) == 1))
}

/// True when `gcd(a, prod vals) = 1`.
pub fn coprime_to_product(a: u64, vals: &[u64]) -> bool {
    vals.iter().all(|&v| a.gcd(&v) == 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    T1,
    T2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorsorPoint {
    pub xi: Xi,
    pub tau1: i64,
    pub tau2: i64,
    pub tau_l: i64,
    pub scheme: Scheme,
}

impl fmt::Display for TorsorPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "xi={} tau=({},{},{}) {:?}",
            self.xi, self.tau1, self.tau2, self.tau_l, self.scheme
        )
    }
}

/// A failed condition reported by [`validate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Violation {
    Equation,
    Tau2NotPositive,
    Tau1Zero,
    TauLZero,
    Squarefree(&'static str),
    Coprime(&'static str),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Equation => write!(f, "torsor equation fails"),
            Violation::Tau2NotPositive => write!(f, "tau2 <= 0"),
            Violation::Tau1Zero => write!(f, "tau1 = 0"),
            Violation::TauLZero => write!(f, "tau_l = 0"),
            Violation::Squarefree(what) => write!(f, "{what} not squarefree"),
            Violation::Coprime(what) => write!(f, "{what} != 1"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum TorsorError {
    #[error("point does not satisfy the torsor equation")]
    NotOnTorsor,
    #[error("image rejected: {0}")]
    Rejected(Rejection),
    #[error("surface point is outside E (needs nonzero coordinates, x0 > 0, x2 > 0)")]
    NotInE,
    #[error("not a valid T1 point: {0:?}")]
    NotT1(Vec<Violation>),
    #[error("not a valid T2 point: {0:?}")]
    NotT2(Vec<Violation>),
    #[error("coordinate overflow")]
    Overflow,
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
}

fn big(x: u128) -> BigInt {
    BigInt::from(x)
}

/// `tau_l q0 + tau_2^2 xi_2 + tau_1^3 xi_1^2 xi_3` in exact arithmetic.
pub fn torsor_residual(t: &TorsorPoint) -> BigInt {
    let xi = &t.xi;
    let q0 = ExponentVector::Q0.0;
    let mono = |e: [u32; 7]| -> BigInt {
        xi.0.iter()
            .zip(e)
            .fold(BigInt::from(1), |acc, (&x, n)| acc * BigInt::from(x).pow(n))
    };
    BigInt::from(t.tau_l) * mono(q0)
        + BigInt::from(t.tau2).pow(2) * big(xi.xi2() as u128)
        + BigInt::from(t.tau1).pow(3) * mono([2, 0, 1, 0, 0, 0, 0])
}

/// Checks the torsor equation and every condition of `t.scheme`.
pub fn validate(t: &TorsorPoint) -> Vec<Violation> {
    let mut out = Vec::new();
    if !torsor_residual(t).is_zero() {
        out.push(Violation::Equation);
    }
    if t.tau2 <= 0 {
        out.push(Violation::Tau2NotPositive);
    }
    if t.tau1 == 0 {
        out.push(Violation::Tau1Zero);
    }
    if t.tau_l == 0 {
        out.push(Violation::TauLZero);
    }
    let [x1, x2, x3, xl, x4, x5, x6] = t.xi.0;
    let (a1, a2, al) = (t.tau1.unsigned_abs(), t.tau2.unsigned_abs(), t.tau_l.unsigned_abs());
    let mut sq = |vals: &[u64], what| {
        if !squarefree_product(vals) {
            out.push(Violation::Squarefree(what));
        }
    };
    match t.scheme {
        Scheme::T1 => sq(&[x1, x2, x3, x4, x5], "xi1 xi2 xi3 xi4 xi5"),
        Scheme::T2 => sq(&[x2, x3, x4, x5], "xi2 xi3 xi4 xi5"),
    }
    let mut cop = |a: u64, vals: &[u64], what| {
        if !coprime_to_product(a, vals) {
            out.push(Violation::Coprime(what));
        }
    };
    match t.scheme {
        Scheme::T1 => cop(a1, &[x2, xl, x4, x5], "gcd(tau1, xi2 xil xi4 xi5)"),
        Scheme::T2 => {
            cop(x1, &[x2], "gcd(xi1, xi2)");
            cop(a1, &[x2, x3, xl, x4, x5, x6], "gcd(tau1, xi2 xi3 xil xi4 xi5 xi6)");
        }
    }
    cop(a2, &[x1, x3], "gcd(tau2, xi1 xi3)");
    cop(al, &[x4, x5, x6], "gcd(tau_l, xi4 xi5 xi6)");
    if t.scheme == Scheme::T2 {
        cop(x1, &[x2, xl, x4, x5], "gcd(xi1, xi2 xil xi4 xi5)");
        cop(xl, &[x2, x3], "gcd(xil, xi2 xi3)");
    }
    out
}

fn mono_i64(e: ExponentVector, xi: &Xi, tau: i64) -> Result<i64, TorsorError> {
    let m = e.eval(xi).ok_or(TorsorError::Overflow)?;
    let m = i128::try_from(m).map_err(|_| TorsorError::Overflow)?;
    let v = m.checked_mul(tau as i128).ok_or(TorsorError::Overflow)?;
    i64::try_from(v).map_err(|_| TorsorError::Overflow)
}

/// The surface point of a torsor point.
pub fn psi(t: &TorsorPoint) -> Result<SurfacePoint, TorsorError> {
    if !torsor_residual(t).is_zero() {
        return Err(TorsorError::NotOnTorsor);
    }
    let x0 = mono_i64(ExponentVector::X0, &t.xi, t.tau2)?;
    let x2 = mono_i64(ExponentVector::X2, &t.xi, 1)?;
    let x3 = mono_i64(ExponentVector::X3, &t.xi, t.tau1)?;
    canonicalize(x0, t.tau_l, x2, x3).map_err(TorsorError::Rejected)
}

fn exact_div(a: u64, b: u64, step: &str) -> Result<u64, TorsorError> {
    if b == 0 || !a.is_multiple_of(b) {
        return Err(TorsorError::InternalInvariantViolation(format!(
            "{step}: {b} does not divide {a}"
        )));
    }
    Ok(a / b)
}

fn exact_div_signed(a: i64, b: u64, step: &str) -> Result<i64, TorsorError> {
    let q = exact_div(a.unsigned_abs(), b, step)? as i64;
    Ok(if a < 0 { -q } else { q })
}

fn split_by_residue(f: &Factorization, modulus: u32) -> Vec<u64> {
    // product of p^{e mod modulus == r} for each residue r, then the quotient part
    let mut parts = vec![1u64; modulus as usize + 1];
    for &(p, e) in f.factors() {
        let r = (e % modulus) as usize;
        if r > 0 {
            parts[r] *= p;
        }
        parts[modulus as usize] *= p.pow(e / modulus);
    }
    parts
}

/// The `T1` preimage of a point of `E`.
pub fn lift_t1(p: &SurfacePoint) -> Result<TorsorPoint, TorsorError> {
    let [x0, x1, x2, x3] = p.coords();
    if x0 <= 0 || x2 <= 0 || x1 == 0 || x3 == 0 {
        return Err(TorsorError::NotInE);
    }
    let (x0, x2) = (x0 as u64, x2 as u64);
    // x2 = y1 y2^2 y3^3 with y1, y2 squarefree
    let parts = split_by_residue(&factorize(x2), 3);
    let (y1, y2, y3) = (parts[1], parts[2], parts[3]);
    let z = exact_div_signed(x3, y1 * y2 * y3, "z = x3/(y1 y2 y3)")?;
    let w = exact_div(x0, y1 * y2, "w = x0/(y1 y2)")?;
    let z1 = exact_div_signed(z, y2, "z' = z/y2")?;
    let y3_1 = exact_div(y3, y1, "y3' = y3/y1")?;
    let a = y3_1.gcd(&z1.unsigned_abs());
    let y3_2 = y3_1 / a;
    let z2 = exact_div_signed(z1, a, "z'' = z'/a")?;
    let sq = split_by_residue(&factorize(a), 2);
    let (xi2, xi6) = (sq[1], sq[2]);
    let w1 = exact_div(w, xi6.pow(3) * xi2 * xi2, "w' = w/(xi6^3 xi2^2)")?;
    let xi5 = y3_2.gcd(&w1);
    let xil = y3_2 / xi5;
    let w2 = w1 / xi5;
    let xi1 = exact_div(y2, xi5, "xi1 = y2/xi5")?;
    let xi3 = w2.gcd(&y1);
    let tau2 = w2 / xi3;
    let xi4 = y1 / xi3;
    let tau1 = exact_div_signed(z2, xi3, "tau1 = z''/xi3")?;
    let t = TorsorPoint {
        xi: Xi::new([xi1, xi2, xi3, xil, xi4, xi5, xi6]),
        tau1,
        tau2: tau2 as i64,
        tau_l: x1,
        scheme: Scheme::T1,
    };
    let violations = validate(&t);
    if !violations.is_empty() {
        return Err(TorsorError::InternalInvariantViolation(format!(
            "lift of {p} fails T1: {violations:?}"
        )));
    }
    Ok(t)
}

/// Which of the three exponent-transfer cases applied at a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransferCase {
    I,
    II,
    III,
}

/// Exponents of one prime in `(xi_1, xi_3, xi_6, tau_1)`.
pub type PrimeExponents = (u32, u32, u32, u32);

/// Forward transfer at one prime, `T1 -> T2`.
pub fn transfer_t1_to_t2(e: PrimeExponents) -> Result<(TransferCase, PrimeExponents), TorsorError> {
    let (m1, m3, m6, n1) = e;
    let k = m6.min(n1 / 2);
    let case_i = n1 == 2 * k + 1 && m6 > k && m3 == 0;
    let case_ii = (n1 == 2 * k + 1 && m6 > k && m3 == 1) || (n1 > 2 * k && m6 == k && m3 == 1);
    let case_iii = (n1 > 2 * k && m6 == k && m3 == 0) || (n1 == 2 * k && m6 >= k);
    match (case_i, case_ii, case_iii) {
        (true, false, false) => Ok((TransferCase::I, (m1 + 3 * k + 1, 1, m6 - k - 1, n1 - 2 * k - 1))),
        (false, true, false) => Ok((TransferCase::II, (m1 + 3 * k + 2, 0, m6 - k, n1 - 2 * k - 1))),
        (false, false, true) => Ok((TransferCase::III, (m1 + 3 * k, m3, m6 - k, n1 - 2 * k))),
        _ => Err(TorsorError::InternalInvariantViolation(format!(
            "exponents {e:?}: expected exactly one transfer case"
        ))),
    }
}

/// Inverse transfer at one prime, `T2 -> T1`.
pub fn transfer_t2_to_t1(e: PrimeExponents) -> Result<(TransferCase, PrimeExponents), TorsorError> {
    let (m1, m3, m6, n1) = e;
    let k = m1 / 3;
    let r = m1 - 3 * k;
    let case_i = (r == 1 || r == 2) && m3 == 1;
    let case_ii = r == 2 && m3 == 0;
    let case_iii = (r == 1 && m3 == 0) || r == 0;
    match (case_i, case_ii, case_iii) {
        (true, false, false) => Ok((TransferCase::I, (r - 1, 0, m6 + k + 1, n1 + 2 * k + 1))),
        (false, true, false) => Ok((TransferCase::II, (r - 2, 1, m6 + k, n1 + 2 * k + 1))),
        (false, false, true) => Ok((TransferCase::III, (r, m3, m6 + k, n1 + 2 * k))),
        _ => Err(TorsorError::InternalInvariantViolation(format!(
            "exponents {e:?}: expected exactly one transfer case"
        ))),
    }
}

type Transfer = fn(PrimeExponents) -> Result<(TransferCase, PrimeExponents), TorsorError>;

fn shuffle(t: &TorsorPoint, transfer: Transfer, target: Scheme) -> Result<TorsorPoint, TorsorError> {
    let [x1, x2, x3, xl, x4, x5, x6] = t.xi.0;
    let a1 = t.tau1.unsigned_abs();
    let fs = [factorize(x1), factorize(x3), factorize(x6), factorize(a1)];
    let mut primes: Vec<u64> = fs.iter().flat_map(|f| f.primes().collect::<Vec<_>>()).collect();
    primes.sort_unstable();
    primes.dedup();
    let mut out = [1u64; 4];
    for p in primes {
        let e = (fs[0].valuation(p), fs[1].valuation(p), fs[2].valuation(p), fs[3].valuation(p));
        let (_, (n1, n3, n6, nt)) = transfer(e)?;
        for (slot, n) in out.iter_mut().zip([n1, n3, n6, nt]) {
            let pw = p.checked_pow(n).ok_or(TorsorError::Overflow)?;
            *slot = slot.checked_mul(pw).ok_or(TorsorError::Overflow)?;
        }
    }
    let tau1 = i64::try_from(out[3]).map_err(|_| TorsorError::Overflow)?;
    Ok(TorsorPoint {
        xi: Xi::new([out[0], x2, out[1], xl, x4, x5, out[2]]),
        tau1: if t.tau1 < 0 { -tau1 } else { tau1 },
        tau2: t.tau2,
        tau_l: t.tau_l,
        scheme: target,
    })
}

/// `Phi`: valid `T1` point to the `T2` point with the same image.
pub fn phi_t1_to_t2(t: &TorsorPoint) -> Result<TorsorPoint, TorsorError> {
    let v = validate(t);
    if t.scheme != Scheme::T1 || !v.is_empty() {
        return Err(TorsorError::NotT1(v));
    }
    shuffle(t, transfer_t1_to_t2, Scheme::T2)
}

/// `Phi^{-1}`: valid `T2` point to the `T1` point with the same image.
pub fn phi_t2_to_t1(t: &TorsorPoint) -> Result<TorsorPoint, TorsorError> {
    let v = validate(t);
    if t.scheme != Scheme::T2 || !v.is_empty() {
        return Err(TorsorError::NotT2(v));
    }
    shuffle(t, transfer_t2_to_t1, Scheme::T1)
}
