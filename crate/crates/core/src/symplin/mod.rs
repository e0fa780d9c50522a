//! Basic normal forms of symplectic matrices and the quantities read off them:
//! ω-nullities, splitting numbers, `C(M)` and the elliptic multiplicity.

mod decompose;
pub mod matrix;
pub mod poly;

use std::fmt;

use crate::angle::{Angle, UnitPoint};
use crate::error::{invalid, Result};

pub use decompose::{decompose_numeric, DecomposeOptions};
pub use matrix::SymplecticMatrix;

/// One basic normal-form block.
#[derive(Clone, Debug, PartialEq)]
pub enum Block {
    /// `N₁(1, 1)`
    EMinus,
    /// `I₂`
    EId,
    /// `N₁(1, -1)`
    EPlus,
    /// `N₁(-1, 1)`
    FMinus,
    /// `-I₂`
    FId,
    /// `N₁(-1, -1)`
    FPlus,
    /// `R(2π a)`
    Rot(Angle),
    /// `N₂(e^{2πi a}, B)` counted by `r⁎`.
    N2Star(Angle),
    /// `N₂(e^{2πi a}, B)` counted by `r₀`.
    N2Zero(Angle),
    /// `k` two-dimensional hyperbolic units (any `D(λ)` or `H(2)` factors).
    Hyp(u32),
}

impl Block {
    pub fn dim(&self) -> usize {
        2 * self.half_dim()
    }

    pub fn half_dim(&self) -> usize {
        match self {
            Block::N2Star(_) | Block::N2Zero(_) => 2,
            Block::Hyp(k) => *k as usize,
            _ => 1,
        }
    }

    pub fn angle(&self) -> Option<&Angle> {
        match self {
            Block::Rot(a) | Block::N2Star(a) | Block::N2Zero(a) => Some(a),
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Block::Rot(a) | Block::N2Star(a) | Block::N2Zero(a) if a.is_half() => {
                Err(invalid(format!("{self}: rotation angle must differ from π")))
            }
            Block::Hyp(0) => Err(invalid("hyperbolic block with k = 0")),
            _ => Ok(()),
        }
    }

    /// `(S⁺, S⁻)` of this block at `ω`.
    ///
    /// At `1`: `(1,1)` for `N₁(1,1)` and `I₂`, `(0,0)` for `N₁(1,-1)`.
    /// At `-1`: `(1,1)` for `N₁(-1,-1)` and `-I₂`, `(0,0)` for `N₁(-1,1)`.
    /// `R(θ)`: `(0,1)` at `e^{iθ}` and `(1,0)` at `e^{-iθ}`.
    /// `N₂` of the `r⁎` kind: `(1,1)` at both `e^{±iθ}`; `r₀` kind: `(0,0)`.
    fn splitting(&self, w: &UnitPoint) -> (u32, u32) {
        match (self, w) {
            (Block::EMinus | Block::EId, UnitPoint::One) => (1, 1),
            (Block::FPlus | Block::FId, UnitPoint::MinusOne) => (1, 1),
            (Block::Rot(a), UnitPoint::Turn(b)) => {
                if a.same_point(b) {
                    (0, 1)
                } else if a.conj().same_point(b) {
                    (1, 0)
                } else {
                    (0, 0)
                }
            }
            (Block::N2Star(a), UnitPoint::Turn(b)) if a.same_point(b) || a.conj().same_point(b) => (1, 1),
            _ => (0, 0),
        }
    }

    fn nullity(&self, w: &UnitPoint) -> u32 {
        match (self, w) {
            (Block::EMinus | Block::EPlus, UnitPoint::One) => 1,
            (Block::EId, UnitPoint::One) => 2,
            (Block::FMinus | Block::FPlus, UnitPoint::MinusOne) => 1,
            (Block::FId, UnitPoint::MinusOne) => 2,
            (Block::Rot(a) | Block::N2Star(a) | Block::N2Zero(a), UnitPoint::Turn(b)) => {
                u32::from(a.same_point(b) || a.conj().same_point(b))
            }
            _ => 0,
        }
    }

    /// Unit-circle eigenvalues of the block (each listed once).
    fn eigen_points(&self) -> Vec<UnitPoint> {
        match self {
            Block::EMinus | Block::EId | Block::EPlus => vec![UnitPoint::One],
            Block::FMinus | Block::FId | Block::FPlus => vec![UnitPoint::MinusOne],
            Block::Rot(a) | Block::N2Star(a) | Block::N2Zero(a) => {
                vec![UnitPoint::Turn(a.clone()), UnitPoint::Turn(a.conj())]
            }
            Block::Hyp(_) => vec![],
        }
    }

    /// Normal form of the `k`-th power of the block.
    fn power(&self, k: u64) -> Vec<Block> {
        let even = k % 2 == 0;
        match self {
            Block::FMinus if even => vec![Block::EPlus],
            Block::FPlus if even => vec![Block::EMinus],
            Block::FId if even => vec![Block::EId],
            Block::Rot(a) => match a.times(k) {
                Some(b) if b.is_half() => vec![Block::FId],
                Some(b) => vec![Block::Rot(b)],
                None => vec![Block::EId],
            },
            Block::N2Star(a) => match a.times(k) {
                Some(b) if b.is_half() => vec![Block::FPlus, Block::FPlus],
                Some(b) => vec![Block::N2Star(b)],
                None => vec![Block::EMinus, Block::EMinus],
            },
            Block::N2Zero(a) => match a.times(k) {
                Some(b) if b.is_half() => vec![Block::FMinus, Block::FMinus],
                Some(b) => vec![Block::N2Zero(b)],
                None => vec![Block::EPlus, Block::EPlus],
            },
            other => vec![other.clone()],
        }
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Block::EMinus => write!(f, "N1(1,1)"),
            Block::EId => write!(f, "I2"),
            Block::EPlus => write!(f, "N1(1,-1)"),
            Block::FMinus => write!(f, "N1(-1,1)"),
            Block::FId => write!(f, "-I2"),
            Block::FPlus => write!(f, "N1(-1,-1)"),
            Block::Rot(a) => write!(f, "R({a})"),
            Block::N2Star(a) => write!(f, "N2*({a})"),
            Block::N2Zero(a) => write!(f, "N2o({a})"),
            Block::Hyp(k) => write!(f, "H^{k}"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BlockCounts {
    pub p_minus: usize,
    pub p_zero: usize,
    pub p_plus: usize,
    pub q_minus: usize,
    pub q_zero: usize,
    pub q_plus: usize,
    pub r: usize,
    pub r_star: usize,
    pub r_zero: usize,
    pub h: usize,
}

impl BlockCounts {
    /// `p₋+p₀+p₊+q₋+q₀+q₊+r+2r⁎+2r₀+h`
    pub fn half_dim(&self) -> usize {
        self.p_minus
            + self.p_zero
            + self.p_plus
            + self.q_minus
            + self.q_zero
            + self.q_plus
            + self.r
            + 2 * self.r_star
            + 2 * self.r_zero
            + self.h
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SplittingPair {
    pub s_plus: u32,
    pub s_minus: u32,
}

/// A ⋄-sum of basic normal forms living in `Sp(2d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalFormDecomposition {
    blocks: Vec<Block>,
    d: usize,
}

impl NormalFormDecomposition {
    pub fn new(blocks: Vec<Block>) -> Result<Self> {
        for b in &blocks {
            b.validate()?;
        }
        let d = blocks.iter().map(Block::half_dim).sum();
        Ok(NormalFormDecomposition { blocks, d })
    }

    /// Like [`new`](Self::new) but also checks a declared half-dimension.
    pub fn with_dim(d: usize, blocks: Vec<Block>) -> Result<Self> {
        let dec = Self::new(blocks)?;
        if dec.d != d {
            return Err(invalid(format!(
                "declared half-dimension {d} but blocks account for {}",
                dec.d
            )));
        }
        Ok(dec)
    }

    pub fn empty() -> Self {
        NormalFormDecomposition { blocks: vec![], d: 0 }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn counts(&self) -> BlockCounts {
        let mut c = BlockCounts::default();
        for b in &self.blocks {
            match b {
                Block::EMinus => c.p_minus += 1,
                Block::EId => c.p_zero += 1,
                Block::EPlus => c.p_plus += 1,
                Block::FMinus => c.q_minus += 1,
                Block::FId => c.q_zero += 1,
                Block::FPlus => c.q_plus += 1,
                Block::Rot(_) => c.r += 1,
                Block::N2Star(_) => c.r_star += 1,
                Block::N2Zero(_) => c.r_zero += 1,
                Block::Hyp(k) => c.h += *k as usize,
            }
        }
        c
    }

    pub fn rotation_angles(&self) -> impl Iterator<Item = &Angle> {
        self.blocks.iter().filter_map(|b| match b {
            Block::Rot(a) => Some(a),
            _ => None,
        })
    }

    pub fn n2_star_angles(&self) -> impl Iterator<Item = &Angle> {
        self.blocks.iter().filter_map(|b| match b {
            Block::N2Star(a) => Some(a),
            _ => None,
        })
    }

    pub fn n2_zero_angles(&self) -> impl Iterator<Item = &Angle> {
        self.blocks.iter().filter_map(|b| match b {
            Block::N2Zero(a) => Some(a),
            _ => None,
        })
    }

    /// `⋄`-sum: block lists are concatenated.
    pub fn diamond_sum(&self, other: &Self) -> Self {
        let mut blocks = self.blocks.clone();
        blocks.extend(other.blocks.iter().cloned());
        NormalFormDecomposition { blocks, d: self.d + other.d }
    }

    /// `ν_ω = dim_C ker(M - ωI)`.
    pub fn nullity_at(&self, w: &UnitPoint) -> u32 {
        self.blocks.iter().map(|b| b.nullity(w)).sum()
    }

    /// Total algebraic multiplicity of unit-circle eigenvalues.
    pub fn total_elliptic_multiplicity(&self) -> usize {
        self.blocks
            .iter()
            .filter(|b| !matches!(b, Block::Hyp(_)))
            .map(Block::dim)
            .sum()
    }

    pub fn splitting_numbers(&self, w: &UnitPoint) -> SplittingPair {
        self.blocks.iter().fold(SplittingPair::default(), |acc, b| {
            let (p, m) = b.splitting(w);
            SplittingPair { s_plus: acc.s_plus + p, s_minus: acc.s_minus + m }
        })
    }

    /// Distinct unit-circle eigenvalues.
    pub fn eigen_points(&self) -> Vec<UnitPoint> {
        let mut out: Vec<UnitPoint> = Vec::new();
        for p in self.blocks.iter().flat_map(Block::eigen_points) {
            if !out.iter().any(|q| q.same(&p)) {
                out.push(p);
            }
        }
        out
    }

    /// `C(M) = Σ_{0<θ<2π} S⁻(e^{iθ})`.
    pub fn c_of(&self) -> u32 {
        self.eigen_points()
            .iter()
            .filter(|w| !matches!(w, UnitPoint::One))
            .map(|w| self.splitting_numbers(w).s_minus)
            .sum()
    }

    /// Eigenvalues `e^{iθ} ≠ 1` listed `S⁻` times each.
    pub fn s_minus_points(&self) -> Vec<UnitPoint> {
        let mut out = Vec::new();
        for w in self.eigen_points() {
            if matches!(w, UnitPoint::One) {
                continue;
            }
            let s = self.splitting_numbers(&w).s_minus;
            for _ in 0..s {
                out.push(w.clone());
            }
        }
        out
    }

    /// Exactly `d` rotation blocks, all with irrational angles.
    pub fn is_irrationally_elliptic(&self) -> bool {
        self.d > 0
            && self
                .blocks
                .iter()
                .all(|b| matches!(b, Block::Rot(a) if !a.is_rational()))
    }

    /// Normal form of `M^k`.
    pub fn power(&self, k: u64) -> Self {
        assert!(k >= 1);
        let blocks: Vec<Block> = self.blocks.iter().flat_map(|b| b.power(k)).collect();
        NormalFormDecomposition { blocks, d: self.d }
    }

    /// Whether every iterate is non-degenerate at 1: no `±1` blocks and every
    /// elliptic angle irrational.
    pub fn all_iterates_nondegenerate(&self) -> bool {
        self.blocks.iter().all(|b| match b {
            Block::Hyp(_) => true,
            Block::Rot(a) | Block::N2Star(a) | Block::N2Zero(a) => !a.is_rational(),
            _ => false,
        })
    }
}

impl fmt::Display for NormalFormDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self.blocks.iter().map(|b| b.to_string()).collect();
        write!(f, "{}", parts.join(" ⋄ "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rot(p: i64, q: i64) -> Block {
        Block::Rot(Angle::rational(p, q).unwrap())
    }

    fn turn(p: i64, q: i64) -> UnitPoint {
        UnitPoint::from_turn(Angle::rational(p, q).unwrap())
    }

    #[test]
    fn diamond_sum_examples() {
        let a = NormalFormDecomposition::new(vec![rot(1, 3)]).unwrap();
        let b = NormalFormDecomposition::new(vec![Block::EId]).unwrap();
        let s = a.diamond_sum(&b);
        assert_eq!(s.blocks(), &[rot(1, 3), Block::EId]);
        assert_eq!(s.d(), 2);
        assert_eq!(s.counts().r, 1);
        assert_eq!(s.counts().p_zero, 1);
        assert_eq!(NormalFormDecomposition::empty().diamond_sum(&a), a);
        let h = NormalFormDecomposition::new(vec![Block::Hyp(1)])
            .unwrap()
            .diamond_sum(&NormalFormDecomposition::new(vec![Block::Hyp(2)]).unwrap());
        assert_eq!(h.d(), 3);
        assert_eq!(h.counts().h, 3);
        assert_eq!(h.counts().half_dim(), 3);
    }

    #[test]
    fn nullity_examples() {
        let e = NormalFormDecomposition::new(vec![Block::EId]).unwrap();
        assert_eq!(e.nullity_at(&UnitPoint::One), 2);
        let r = NormalFormDecomposition::new(vec![rot(1, 3)]).unwrap();
        assert_eq!(r.nullity_at(&turn(1, 3)), 1);
        assert_eq!(r.nullity_at(&turn(2, 3)), 1);
        assert_eq!(r.nullity_at(&UnitPoint::One), 0);
        let n = NormalFormDecomposition::new(vec![Block::N2Star(Angle::rational(1, 5).unwrap())]).unwrap();
        assert_eq!(n.nullity_at(&turn(1, 5)), 1);
    }

    #[test]
    fn elliptic_multiplicity_examples() {
        let n = |b: Vec<Block>| NormalFormDecomposition::new(b).unwrap().total_elliptic_multiplicity();
        assert_eq!(n(vec![Block::EId]), 2);
        assert_eq!(n(vec![rot(1, 3), Block::Hyp(1)]), 2);
        assert_eq!(n(vec![Block::N2Star(Angle::rational(1, 5).unwrap())]), 4);
    }

    #[test]
    fn splitting_examples() {
        let d = NormalFormDecomposition::new(vec![Block::EMinus, Block::EId, Block::EPlus]).unwrap();
        assert_eq!(d.splitting_numbers(&UnitPoint::One).s_plus, 2);
        assert_eq!(d.splitting_numbers(&turn(1, 4)), SplittingPair::default());
        let r = NormalFormDecomposition::new(vec![rot(1, 3)]).unwrap();
        assert_eq!(r.splitting_numbers(&turn(1, 3)), SplittingPair { s_plus: 0, s_minus: 1 });
        assert_eq!(r.splitting_numbers(&turn(2, 3)), SplittingPair { s_plus: 1, s_minus: 0 });
    }

    #[test]
    fn c_of_examples() {
        let c = |b: Vec<Block>| NormalFormDecomposition::new(b).unwrap().c_of();
        assert_eq!(c(vec![Block::Hyp(2)]), 0);
        assert_eq!(c(vec![rot(1, 3)]), 1);
        assert_eq!(c(vec![Block::EId]), 0);
        assert_eq!(c(vec![Block::FId, Block::FPlus, Block::FMinus]), 2);
        assert_eq!(c(vec![Block::N2Star(Angle::rational(1, 5).unwrap())]), 2);
        assert_eq!(c(vec![rot(1, 3), rot(1, 3)]), 2);
    }

    #[test]
    fn irrational_ellipticity() {
        let g = Angle::irrational_with_computed_gap(
            crate::arith::parse_rational("0.61803398874989484820458683436563811772").unwrap(),
            crate::arith::q(1, 1) / crate::arith::Q::from_integer(crate::arith::ten_pow(35)),
            100,
        )
        .unwrap();
        let e = |b: Vec<Block>| NormalFormDecomposition::new(b).unwrap().is_irrationally_elliptic();
        assert!(e(vec![Block::Rot(g.clone()), Block::Rot(g.conj())]));
        assert!(!e(vec![rot(1, 3)]));
        assert!(!e(vec![Block::Rot(g.clone()), Block::EId]));
        assert!(!e(vec![]));
    }

    #[test]
    fn rejects_half_turn_rotation_and_bad_dims() {
        assert!(NormalFormDecomposition::new(vec![rot(1, 2)]).is_err());
        assert!(NormalFormDecomposition::with_dim(3, vec![Block::EId]).is_err());
    }

    #[test]
    fn powers() {
        let d = NormalFormDecomposition::new(vec![rot(1, 3), Block::FPlus, Block::FMinus]).unwrap();
        let p = d.power(2);
        assert_eq!(p.blocks(), &[rot(2, 3), Block::EMinus, Block::EPlus]);
        let p3 = d.power(3);
        assert_eq!(p3.blocks(), &[Block::EId, Block::FPlus, Block::FMinus]);
        let q = NormalFormDecomposition::new(vec![rot(1, 4)]).unwrap().power(2);
        assert_eq!(q.blocks(), &[Block::FId]);
    }
}
