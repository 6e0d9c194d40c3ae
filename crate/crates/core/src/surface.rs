//! Points of the surface `x1 x2^2 + x2 x0^2 + x3^3 = 0` and the naive counter.
//!
//! Points are counted on the complement `U` of the line `x2 = x3 = 0`. The
//! point `[0:0:1:0]` is excluded as well, matching the reference counts
//! `N(1) = 6` and `N(2) = 8`; every total reported here is therefore one less
//! than the number of points of `U` of height at most `B`.
//!
//! Every counted point has `x2 != 0`, so representatives are normalised to
//! `x2 > 0`. The points then split into four disjoint classes:
//!
//! * `E(B)`: all coordinates nonzero and `x0 > 0` (the `x0 < 0` mirror image
//!   doubles it),
//! * the conic `x3 = 0`: `[+-ab : -a^2 : b^2 : 0]`,
//! * `x0 = 0`: `[0 : -+a^3 : b^3 : +-ab^2]`,
//! * `x1 = 0`: `[+-a^3 : 0 : b^3 : -a^2 b]`,
//!
//! with `a, b >= 1` coprime in each family. Their sizes are `2 Q(floor(B^{1/2}))`, `2 Q(floor(B^{1/3}))` and
//! `2 Q(floor(B^{1/3}))`, with `Q(Y)` the number of coprime pairs in `[1, Y]^2`.

use crate::arith::{ceil_cbrt, cube_step, floor_cbrt, q_coprime};
use crate::par::{map_collect, map_reduce};
use crate::{Execution, MAX_BOUND};
use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::time::Instant;

/// A normalised point of `U`: primitive, on the surface, `x2 > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SurfacePoint([i64; 4]);

impl SurfacePoint {
    pub fn coords(&self) -> [i64; 4] {
        self.0
    }
    pub fn x0(&self) -> i64 {
        self.0[0]
    }
    pub fn x1(&self) -> i64 {
        self.0[1]
    }
    pub fn x2(&self) -> i64 {
        self.0[2]
    }
    pub fn x3(&self) -> i64 {
        self.0[3]
    }

    /// `max |x_i|`.
    pub fn height(&self) -> u64 {
        self.0.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
    }

    /// All coordinates nonzero and `x0 > 0`.
    pub fn in_e(&self) -> bool {
        self.0.iter().all(|&x| x != 0) && self.x0() > 0
    }
}

impl fmt::Display for SurfacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a},{b},{c},{d})")
    }
}

/// `max |x_i|` of a point.
pub fn height(p: &SurfacePoint) -> u64 {
    p.height()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Rejection {
    #[error("zero vector")]
    ZeroVector,
    #[error("not on the surface")]
    OffSurface,
    /// On the line `x2 = x3 = 0`, or the excluded point `[0:0:1:0]`.
    #[error("on the excluded line")]
    OnLine,
}

/// `x1 x2^2 + x2 x0^2 + x3^3` exactly.
pub fn eval_surface(x0: i64, x1: i64, x2: i64, x3: i64) -> BigInt {
    let (x0, x1, x2, x3) = (BigInt::from(x0), BigInt::from(x1), BigInt::from(x2), BigInt::from(x3));
    &x1 * &x2 * &x2 + &x2 * &x0 * &x0 + &x3 * &x3 * &x3
}

/// Reduces to the primitive representative with `x2 > 0`.
pub fn canonicalize(x0: i64, x1: i64, x2: i64, x3: i64) -> Result<SurfacePoint, Rejection> {
    if x0 == 0 && x1 == 0 && x2 == 0 && x3 == 0 {
        return Err(Rejection::ZeroVector);
    }
    if eval_surface(x0, x1, x2, x3) != BigInt::from(0) {
        return Err(Rejection::OffSurface);
    }
    if x2 == 0 && x3 == 0 {
        return Err(Rejection::OnLine);
    }
    if x0 == 0 && x1 == 0 && x3 == 0 {
        return Err(Rejection::OnLine);
    }
    let g = [x0, x1, x3]
        .iter()
        .fold(x2.unsigned_abs(), |g, &x| g.gcd(&x.unsigned_abs())) as i64;
    let sign = if x2 < 0 { -1 } else { 1 };
    Ok(SurfacePoint([x0, x1, x2, x3].map(|x| sign * (x / g))))
}

/// `x1 = -(x2 x0^2 + x3^3) / x2^2` when integral.
fn solve_x1(x0: i128, x2: i128, x3: i128) -> Option<i128> {
    let num = x2 * x0 * x0 + x3 * x3 * x3;
    let d = x2 * x2;
    (num % d == 0).then(|| -num / d)
}

fn gcd4(x: [i128; 4]) -> i128 {
    x.iter().fold(0i128, |g, v| g.gcd(v))
}

/// Visits every counted point with the given `x2` and height at most `b`.
///
/// `x2 | x3^3` is necessary, so `x3` steps through multiples of the least
/// `s` with `x2 | s^3`. With `e_only` only points of `E` are produced.
fn visit_x2<F: FnMut([i64; 4])>(x2: u64, b: u64, e_only: bool, mut f: F) {
    let (x2i, bi) = (x2 as i128, b as i128);
    let s = cube_step(x2) as i128;
    let lim = bi * x2i * x2i;
    let x0_lo = if e_only { 1 } else { -bi };
    for x0 in x0_lo..=bi {
        let base = x2i * x0 * x0;
        let lo = ceil_cbrt(-lim - base).max(-bi);
        let hi = floor_cbrt(lim - base).min(bi);
        let mut x3 = lo + (s - lo.rem_euclid(s)) % s;
        while x3 <= hi {
            if let Some(x1) = solve_x1(x0, x2i, x3) {
                let keep = x1.abs() <= bi
                    && !(x0 == 0 && x1 == 0 && x3 == 0)
                    && (!e_only || (x1 != 0 && x3 != 0))
                    && gcd4([x0, x1, x2i, x3]) == 1;
                if keep {
                    f([x0 as i64, x1 as i64, x2 as i64, x3 as i64]);
                }
            }
            x3 += s;
        }
    }
}

fn check_bound(b: u64) {
    assert!(b >= 1, "height bound must be positive");
    assert!(b <= MAX_BOUND, "height bound exceeds {MAX_BOUND}");
}

/// Points of `E(B)`, sorted by `(x2, x0, x3)`, lazily.
pub fn enumerate_e_iter(b: u64) -> impl Iterator<Item = SurfacePoint> {
    check_bound(b);
    (1..=b).flat_map(move |x2| {
        let mut pts = Vec::new();
        visit_x2(x2, b, true, |x| pts.push(SurfacePoint(x)));
        pts
    })
}

/// Points of `E(B)`, sorted by `(x2, x0, x3)`.
pub fn enumerate_e(b: u64, exec: Execution) -> Vec<SurfacePoint> {
    check_bound(b);
    let x2s: Vec<u64> = (1..=b).collect();
    map_collect(&x2s, exec, |&x2| {
        let mut pts = Vec::new();
        visit_x2(x2, b, true, |x| pts.push(SurfacePoint(x)));
        pts
    })
    .into_iter()
    .flatten()
    .collect()
}

/// How a [`CountReport`] was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Naive,
    TorsorDirect,
    TorsorResidue,
    TorsorAuto,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Naive => "naive",
            Method::TorsorDirect => "torsor-direct",
            Method::TorsorResidue => "torsor-residue",
            Method::TorsorAuto => "torsor-auto",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub b: u64,
    pub e_count: u64,
    pub conic_count: u64,
    pub x0zero_count: u64,
    pub x1zero_count: u64,
    pub total: u64,
    pub method: Method,
    pub elapsed: f64,
}

impl CountReport {
    /// `total == 2 e_count + families`.
    pub fn is_consistent(&self) -> bool {
        self.total == 2 * self.e_count + self.conic_count + self.x0zero_count + self.x1zero_count
    }
}

/// Sizes of the three degenerate families.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCounts {
    pub conic: u64,
    pub x0zero: u64,
    pub x1zero: u64,
}

impl FamilyCounts {
    pub fn sum(&self) -> u64 {
        self.conic + self.x0zero + self.x1zero
    }
}

impl std::ops::Add for FamilyCounts {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        FamilyCounts {
            conic: self.conic + o.conic,
            x0zero: self.x0zero + o.x0zero,
            x1zero: self.x1zero + o.x1zero,
        }
    }
}

/// Closed-form family sizes.
pub fn family_counts(b: u64) -> FamilyCounts {
    assert!(b >= 1, "height bound must be positive");
    let q3 = 2 * q_coprime(b.cbrt());
    FamilyCounts {
        conic: 2 * q_coprime(b.sqrt()),
        x0zero: q3,
        x1zero: q3,
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct NaiveTally {
    total: u64,
    e: u64,
    fam: FamilyCounts,
}

impl std::ops::Add for NaiveTally {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        NaiveTally {
            total: self.total + o.total,
            e: self.e + o.e,
            fam: self.fam + o.fam,
        }
    }
}

/// Exact count by scanning all normalised representatives.
pub fn count_naive(b: u64) -> CountReport {
    count_naive_with(b, Execution::default())
}

pub fn count_naive_with(b: u64, exec: Execution) -> CountReport {
    check_bound(b);
    let start = Instant::now();
    let x2s: Vec<u64> = (1..=b).collect();
    let t: NaiveTally = map_reduce(&x2s, exec, |&x2| {
        let mut t = NaiveTally::default();
        visit_x2(x2, b, false, |[x0, x1, _, x3]| {
            t.total += 1;
            if x3 == 0 {
                t.fam.conic += 1;
            } else if x0 == 0 {
                t.fam.x0zero += 1;
            } else if x1 == 0 {
                t.fam.x1zero += 1;
            } else if x0 > 0 {
                t.e += 1;
            }
        });
        t
    });
    CountReport {
        b,
        e_count: t.e,
        conic_count: t.fam.conic,
        x0zero_count: t.fam.x0zero,
        x1zero_count: t.fam.x1zero,
        total: t.total,
        method: Method::Naive,
        elapsed: start.elapsed().as_secs_f64(),
    }
}

/// Projective `F_p`-points of the surface (line and singular point included).
pub fn count_mod_p(p: u64) -> u64 {
    assert!(crate::arith::is_prime(p), "{p} is not prime");
    let f = |x: [u64; 4]| {
        let [x0, x1, x2, x3] = x.map(|v| v as u128);
        let p = p as u128;
        (x1 * x2 % p * x2 + x2 * x0 % p * x0 + x3 * x3 % p * x3).is_multiple_of(p)
    };
    let mut n = 0;
    // representatives with the first nonzero coordinate equal to 1
    for lead in 0..4 {
        let free = 3 - lead;
        for code in 0..p.pow(free as u32) {
            let mut x = [0u64; 4];
            x[lead] = 1;
            let mut c = code;
            for slot in x.iter_mut().skip(lead + 1) {
                *slot = c % p;
                c /= p;
            }
            if f(x) {
                n += 1;
            }
        }
    }
    n
}
