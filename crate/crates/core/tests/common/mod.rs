//! Shared generators and independent oracles for the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use sympindex::angle::Angle;
use sympindex::arith::{parse_rational, q, ten_pow, Q};
use sympindex::indexiter::IndexProfile;
use sympindex::symplin::{Block, NormalFormDecomposition};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Irrational marker near `x`, with 30 correct digits.
pub fn irr(x: f64) -> Angle {
    let s = format!("{x:.15}");
    let base = parse_rational(&s).unwrap();
    // push the value off the 15-digit grid so it is not a short decimal
    let approx = base + Q::new(BigInt::from(314159265358979i64), ten_pow(30));
    Angle::irrational_with_computed_gap(approx, Q::new(BigInt::from(1), ten_pow(30)), 1000).unwrap()
}

pub fn random_rational_angle(r: &mut impl Rng, max_den: i64) -> Angle {
    loop {
        let den = r.gen_range(2..=max_den);
        let p = r.gen_range(1..den);
        if let Ok(a) = Angle::rational(p, den) {
            if !a.is_half() {
                return a;
            }
        }
    }
}

/// An irrational angle away from 0, 1/2 and 1 by at least `margin`.
pub fn random_irrational_angle(r: &mut impl Rng, margin: f64) -> Angle {
    loop {
        let x: f64 = r.gen_range(margin..1.0 - margin);
        if (x - 0.5).abs() < margin {
            continue;
        }
        if let Ok(a) = std::panic::catch_unwind(|| irr(x)) {
            return a;
        }
    }
}

pub fn random_angle(r: &mut impl Rng, irrational_share: f64) -> Angle {
    if r.gen_bool(irrational_share) {
        random_irrational_angle(r, 0.02)
    } else {
        random_rational_angle(r, 12)
    }
}

/// Blocks of every kind with total half-dimension `d`.
pub fn random_blocks(r: &mut impl Rng, d: usize, irrational_share: f64) -> Vec<Block> {
    let mut blocks = Vec::new();
    let mut left = d;
    while left > 0 {
        let pick = r.gen_range(0..12);
        let b = match pick {
            0 => Block::EMinus,
            1 => Block::EId,
            2 => Block::EPlus,
            3 => Block::FMinus,
            4 => Block::FId,
            5 => Block::FPlus,
            6 | 7 => Block::Rot(random_angle(r, irrational_share)),
            8 if left >= 2 => Block::N2Star(random_angle(r, irrational_share)),
            9 if left >= 2 => Block::N2Zero(random_angle(r, irrational_share)),
            10 => Block::Hyp(r.gen_range(1..=left as u32)),
            _ => Block::Rot(random_angle(r, irrational_share)),
        };
        left -= b.half_dim();
        blocks.push(b);
    }
    blocks
}

pub fn random_profile(r: &mut impl Rng, d_max: usize, irrational_share: f64) -> IndexProfile {
    let d = r.gen_range(1..=d_max);
    let dec = NormalFormDecomposition::new(random_blocks(r, d, irrational_share)).unwrap();
    IndexProfile::new(dec, r.gen_range(-3..=8))
}

/// Lower index of a rotation path turning through `x` full turns, read off by
/// walking the integers it passes: each integer in `(0, x)` adds 2, each
/// integer in `[x, 0]` removes 2.
pub fn rotation_crossings(x: &Q) -> i64 {
    let zero = Q::from_integer(0.into());
    let mut count = 1i64;
    let mut j = 1i64;
    while Q::from_integer(j.into()) < *x {
        count += 2;
        j += 1;
    }
    let mut j = 0i64;
    while *x <= zero && Q::from_integer(j.into()) >= *x {
        count -= 2;
        j -= 1;
    }
    count
}

/// `μ₋` of the `m`-th iterate of a path ending in `R(a_1) ⋄ … ⋄ R(a_d)` with
/// base index `i`, by direct crossing count.
///
/// The first block carries all whole turns of the path; a base index of the
/// wrong parity leaves an odd remainder that grows linearly with `m`.
pub fn rotation_oracle(angles: &[Q], i: i64, m: i64) -> i64 {
    let d = angles.len() as i64;
    let extra = i - d;
    let (turns, rem) = (extra.div_euclid(2), extra.rem_euclid(2));
    let mut total = m * rem;
    for (j, a) in angles.iter().enumerate() {
        let k = if j == 0 { turns } else { 0 };
        let x = (Q::from_integer(k.into()) + a) * Q::from_integer(m.into());
        total += rotation_crossings(&x);
    }
    total
}

/// Betti numbers by listing the degrees that carry two classes.
pub fn betti_oracle(n: i64, k: i64) -> u32 {
    if (k - n) % 2 == 0 {
        return 0;
    }
    let doubled = (2..=k).any(|j| j * (n - 1) == k && (n % 2 == 1 || j % 2 == 1));
    if doubled {
        2
    } else {
        1
    }
}

pub fn rationals_up_to(max_den: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for den in 2..=max_den {
        for p in 1..den {
            if num_integer::gcd(p, den) == 1 && 2 * p != den {
                out.push((p, den));
            }
        }
    }
    out
}

pub fn qf(p: i64, d: i64) -> Q {
    q(p, d)
}

/// Incremental form of [`rotation_crossings`] along `x_m = m·num/den`,
/// `m = 1, 2, …`.
pub struct CrossingWalk {
    num: i64,
    den: i64,
    m: i64,
    up: i64,
    down: i64,
    count: i64,
}

impl CrossingWalk {
    pub fn new(num: i64, den: i64) -> Self {
        CrossingWalk { num, den, m: 0, up: 1, down: 0, count: 1 }
    }

    pub fn next_index(&mut self) -> i64 {
        self.m += 1;
        let x = self.m * self.num;
        while self.up * self.den < x {
            self.count += 2;
            self.up += 1;
        }
        while self.down * self.den >= x {
            self.count -= 2;
            self.down -= 1;
        }
        self.count
    }
}
