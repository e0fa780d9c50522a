use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::{mat_vec, omega, QMat, SymplecticMatrix};
use super::poly::{cyclotomic, isolate_roots, refine_root, separator, totient, IsolatedRoot, Poly, Sturm};
use super::{Block, NormalFormDecomposition};
use crate::angle::{Angle, DEFAULT_GAP_DENOMINATOR};
use crate::arith::{qi, ten_pow, to_f64, Q};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct DecomposeOptions {
    /// Decimal digits kept for irrational angle approximations.
    pub digits: u32,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions { digits: 60 }
    }
}

/// Reads the basic normal form off an exact symplectic matrix.
///
/// Handles simple elliptic and hyperbolic spectra plus `±1` eigenvalues that
/// are either a single `N₁(±1, b)` / `±I₂` pair or fully semisimple.
pub fn decompose_numeric(m: &SymplecticMatrix, opts: &DecomposeOptions) -> Result<NormalFormDecomposition> {
    let chi = m.charpoly();
    let trace_poly = chi
        .palindromic_to_trace()
        .ok_or_else(|| Error::NonGenericSpectrum("characteristic polynomial is not palindromic".into()))?;
    let (p1, k_one) = trace_poly.remove_root(&qi(2));
    let (rest, k_minus) = p1.remove_root(&qi(-2));

    let mut blocks = Vec::new();
    blocks.extend(unit_blocks(m, 1, k_one)?);
    blocks.extend(unit_blocks(m, -1, k_minus)?);

    if rest.degree() > 0 {
        if !rest.is_squarefree() {
            return Err(Error::NonGenericSpectrum(
                "repeated eigenvalues away from ±1 (N₂-type or degenerate hyperbolic spectrum)".into(),
            ));
        }
        blocks.extend(elliptic_blocks(m, &rest, opts)?);
        blocks.extend(hyperbolic_blocks(&rest));
    }
    NormalFormDecomposition::with_dim(m.d(), blocks)
}

fn unit_blocks(m: &SymplecticMatrix, lambda: i64, k: usize) -> Result<Vec<Block>> {
    if k == 0 {
        return Ok(vec![]);
    }
    let n = 2 * m.d();
    let shifted = m.matrix().sub(&QMat::identity(n).scale(&qi(lambda)));
    let nu = n - shifted.rank();
    let (ident, minus, plus) = if lambda == 1 {
        (Block::EId, Block::EMinus, Block::EPlus)
    } else {
        (Block::FId, Block::FMinus, Block::FPlus)
    };
    if nu == 2 * k {
        return Ok(vec![ident; k]);
    }
    if k != 1 || nu != 1 {
        return Err(Error::NonGenericSpectrum(format!(
            "eigenvalue {lambda} has algebraic multiplicity {} but nullity {nu}",
            2 * k
        )));
    }
    // A generalised eigenvector w with u = (M - λ)w ≠ 0; after scaling to
    // ω(u/c, w) = 1 the off-diagonal entry is c = ω(u, w) up to a square.
    let gen = shifted.mul(&shifted).kernel();
    for j in 0..gen.cols() {
        let w = gen.column(j);
        let u = mat_vec(&shifted, &w);
        if u.iter().all(Zero::is_zero) {
            continue;
        }
        let c = omega(&u, &w);
        return Ok(vec![if c.is_positive() { minus } else { plus }]);
    }
    Err(Error::NonGenericSpectrum(format!("no Jordan chain found at eigenvalue {lambda}")))
}

fn hyperbolic_blocks(rest: &Poly) -> Vec<Block> {
    let bound = qi(1) + rest.coeffs().iter().map(|c| (c / rest.lead()).abs()).max().unwrap_or_else(Q::zero);
    let sturm = Sturm::new(rest);
    let real = sturm.count(&-bound.clone(), &bound);
    let elliptic = sturm.count(&qi(-2), &qi(2));
    let complex_pairs = (rest.degree() - real) / 2;
    let mut out = vec![Block::Hyp(1); real - elliptic];
    out.extend(vec![Block::Hyp(2); complex_pairs]);
    out
}

fn elliptic_blocks(m: &SymplecticMatrix, rest: &Poly, opts: &DecomposeOptions) -> Result<Vec<Block>> {
    let coarse = isolate_roots(rest, &qi(-2), &qi(2), &Q::new(1.into(), 1024.into()));
    if coarse.is_empty() {
        return Ok(vec![]);
    }
    let signs = krein_signs(m, rest, &coarse)?;
    let ratio_den = cyclotomic_candidates(rest);
    let mut out = Vec::new();
    for (root, s) in coarse.iter().zip(signs) {
        let angle = root_angle(rest, root, &ratio_den, opts.digits)?;
        out.push(Block::Rot(if s > 0 { angle } else { angle.conj() }));
    }
    Ok(out)
}

/// Sign of the form `u ↦ uᵀJMu` on the real invariant plane of each
/// elliptic root of `rest(M + M⁻¹)`.
fn krein_signs(m: &SymplecticMatrix, rest: &Poly, roots: &[IsolatedRoot]) -> Result<Vec<i64>> {
    let n = 2 * m.d();
    let s = m.matrix().add(m.inverse().matrix());
    let kernel = s.eval_poly(rest).kernel();
    let jm = QMat::j(m.d()).mul(m.matrix());
    let mut cuts = vec![qi(-2)];
    for w in roots.windows(2) {
        cuts.push(separator(&w[0], &w[1]));
    }
    cuts.push(qi(2));
    let id = QMat::identity(n);
    let mut balance = Vec::with_capacity(cuts.len());
    for c in &cuts {
        let f = s.sub(&id.scale(c));
        let form = jm.mul(&f).symmetric_part();
        let restricted = kernel.transpose().mul(&form).mul(&kernel);
        let (pos, neg) = restricted.inertia();
        balance.push(pos as i64 - neg as i64);
    }
    let mut signs = Vec::with_capacity(roots.len());
    for k in 0..roots.len() {
        let diff = balance[k] - balance[k + 1];
        if diff.abs() != 4 {
            return Err(Error::NonGenericSpectrum(format!(
                "could not separate Krein signs (jump {diff} at elliptic root {k})"
            )));
        }
        signs.push(diff / 4);
    }
    Ok(signs)
}

/// Denominators `q` for which some root of `rest` may be `2cos(2πp/q)`,
/// paired with the common factor of `rest` and the minimal polynomial.
fn cyclotomic_candidates(rest: &Poly) -> Vec<(u64, Poly)> {
    let deg = rest.degree() as u64;
    let mut out = Vec::new();
    // φ(q) >= sqrt(q/2), so φ(q)/2 <= deg bounds q by 8 deg².
    for qd in 3..=(8 * deg * deg).max(6) {
        if totient(qd) > 2 * deg {
            continue;
        }
        let Some(psi) = cyclotomic(qd).palindromic_to_trace() else { continue };
        let g = rest.gcd(&psi);
        if g.degree() > 0 {
            out.push((qd, g));
        }
    }
    out
}

fn root_angle(rest: &Poly, root: &IsolatedRoot, candidates: &[(u64, Poly)], digits: u32) -> Result<Angle> {
    for (den, g) in candidates {
        let hit = if root.lo == root.hi {
            g.eval(&root.lo).is_zero()
        } else {
            Sturm::new(g).count(&root.lo, &root.hi) > 0
        };
        if hit {
            let x = to_f64(&root.mid()) / 2.0;
            let turns = x.clamp(-1.0, 1.0).acos() / std::f64::consts::TAU;
            let p = (turns * *den as f64).round() as i64;
            if p.gcd(&(*den as i64)) != 1 {
                return Err(Error::NonGenericSpectrum("inconsistent root of unity".into()));
            }
            return Angle::rational(p, *den as i64);
        }
    }
    // acos has derivative at most 1/(2 - |x|) in turns here, so this width
    // keeps the propagated error below 10^-digits.
    let mut root = root.clone();
    let mut margin = qi(2) - root.lo.abs().max(root.hi.abs());
    while !margin.is_positive() {
        root = refine_root(rest, &root, &(root.width() / qi(16)));
        margin = qi(2) - root.lo.abs().max(root.hi.abs());
    }
    let width = margin / Q::from_integer(ten_pow(digits + 1));
    let fine = refine_root(rest, &root, &width);
    let half = fine.mid() / qi(2);
    let approx = crate::hiprec::acos_turns(&half, digits + 2)?;
    let err = Q::new(2.into(), ten_pow(digits));
    Angle::irrational_with_computed_gap(approx, err, DEFAULT_GAP_DENOMINATOR)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::UnitPoint;
    use crate::arith::q;

    fn sym(rows: Vec<Vec<Q>>) -> SymplecticMatrix {
        SymplecticMatrix::new(QMat::from_rows(rows).unwrap()).unwrap()
    }

    fn dec(m: &SymplecticMatrix) -> NormalFormDecomposition {
        decompose_numeric(m, &DecomposeOptions::default()).unwrap()
    }

    #[test]
    fn identity_four() {
        let m = SymplecticMatrix::new(QMat::identity(4)).unwrap();
        assert_eq!(dec(&m).blocks(), &[Block::EId, Block::EId]);
    }

    #[test]
    fn pythagorean_rotation() {
        let m = sym(vec![vec![q(3, 5), q(-4, 5)], vec![q(4, 5), q(3, 5)]]);
        let d = dec(&m);
        let Block::Rot(a) = &d.blocks()[0] else { panic!("{d}") };
        assert!(!a.is_rational());
        let f = (0.6f64).acos() / std::f64::consts::TAU;
        assert!((a.to_f64() - f).abs() < 1e-15);
        let back = sym(vec![vec![q(3, 5), q(4, 5)], vec![q(-4, 5), q(3, 5)]]);
        let back = dec(&back);
        let Block::Rot(b) = &back.blocks()[0] else { panic!() };
        assert!((b.to_f64() - (1.0 - f)).abs() < 1e-15);
    }

    #[test]
    fn quarter_and_sixth_turns() {
        let m = sym(vec![vec![qi(0), qi(-1)], vec![qi(1), qi(0)]]);
        assert_eq!(dec(&m).blocks(), &[Block::Rot(Angle::rational(1, 4).unwrap())]);
        // trace 1, rotating forwards: angle 1/6
        let m = sym(vec![vec![qi(1), qi(-1)], vec![qi(1), qi(0)]]);
        let d = dec(&m);
        assert_eq!(d.blocks().len(), 1);
        let a = d.blocks()[0].angle().unwrap();
        assert!(a.same_point(&Angle::rational(1, 6).unwrap()) || a.same_point(&Angle::rational(5, 6).unwrap()));
    }

    #[test]
    fn hyperbolic_pair() {
        let m = sym(vec![vec![qi(2), qi(0)], vec![qi(0), q(1, 2)]]);
        assert_eq!(dec(&m).blocks(), &[Block::Hyp(1)]);
    }

    #[test]
    fn jordan_signs() {
        let m = sym(vec![vec![qi(1), qi(1)], vec![qi(0), qi(1)]]);
        assert_eq!(dec(&m).blocks(), &[Block::EMinus]);
        let m = sym(vec![vec![qi(1), qi(-3)], vec![qi(0), qi(1)]]);
        assert_eq!(dec(&m).blocks(), &[Block::EPlus]);
        let m = sym(vec![vec![qi(-1), qi(2)], vec![qi(0), qi(-1)]]);
        assert_eq!(dec(&m).blocks(), &[Block::FMinus]);
        let m = sym(vec![vec![qi(-1), qi(-1)], vec![qi(0), qi(-1)]]);
        assert_eq!(dec(&m).blocks(), &[Block::FPlus]);
    }

    #[test]
    fn conjugation_preserves_blocks() {
        let r = sym(vec![vec![q(3, 5), q(-4, 5)], vec![q(4, 5), q(3, 5)]]);
        let e = sym(vec![vec![qi(1), qi(1)], vec![qi(0), qi(1)]]);
        let h = sym(vec![vec![qi(3), qi(0)], vec![qi(0), q(1, 3)]]);
        let big = r.diamond(&e).diamond(&h);
        let p = SymplecticMatrix::upper_shear(&QMat::from_ints(&[&[1, 2, 0], &[2, -1, 1], &[0, 1, 3]]))
            .unwrap()
            .mul(&SymplecticMatrix::lower_shear(&QMat::from_ints(&[&[2, 1, 1], &[1, 0, -1], &[1, -1, 1]])).unwrap());
        let c = big.conjugate(&p);
        let d = dec(&c);
        assert_eq!(d.counts().p_minus, 1);
        assert_eq!(d.counts().r, 1);
        assert_eq!(d.counts().h, 1);
        let ang = d.rotation_angles().next().unwrap();
        assert!((ang.to_f64() - (0.6f64).acos() / std::f64::consts::TAU).abs() < 1e-12);
        assert_eq!(d.nullity_at(&UnitPoint::One), 1);
    }

    #[test]
    fn refuses_repeated_elliptic_spectrum() {
        let r = sym(vec![vec![qi(0), qi(-1)], vec![qi(1), qi(0)]]);
        assert!(matches!(
            decompose_numeric(&r.diamond(&r), &DecomposeOptions::default()),
            Err(Error::NonGenericSpectrum(_))
        ));
    }
}
