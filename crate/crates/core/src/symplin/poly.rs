//! Dense univariate polynomials over `Q`, with Sturm-sequence root counting.

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::arith::{qi, Q};

/// Coefficients from the constant term upwards; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<Q>);

impl Poly {
    pub fn new(mut c: Vec<Q>) -> Poly {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly(c)
    }

    pub fn from_ints(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| qi(x)).collect())
    }

    pub fn zero() -> Poly {
        Poly(vec![])
    }

    pub fn one() -> Poly {
        Poly(vec![qi(1)])
    }

    /// `x - r`
    pub fn linear(r: &Q) -> Poly {
        Poly(vec![-r.clone(), qi(1)])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Q {
        self.0.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let c = (0..n)
            .map(|i| self.0.get(i).cloned().unwrap_or_default() + o.0.get(i).cloned().unwrap_or_default())
            .collect();
        Poly::new(c)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&qi(-1)))
    }

    pub fn scale(&self, k: &Q) -> Poly {
        Poly::new(self.0.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.0.clone();
        let dl = d.lead();
        let dd = d.degree();
        if self.is_zero() || self.degree() < dd {
            return (Poly::zero(), self.clone());
        }
        let mut quo = vec![Q::zero(); self.degree() - dd + 1];
        for k in (0..quo.len()).rev() {
            let coef = &r[k + dd] / &dl;
            if !coef.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    r[k + j] -= &coef * dc;
                }
            }
            quo[k] = coef;
        }
        r.truncate(dd);
        (Poly::new(quo), Poly::new(r))
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&(qi(1) / self.lead()))
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * qi(i as i64))
                .collect(),
        )
    }

    pub fn is_squarefree(&self) -> bool {
        self.degree() == 0 || self.gcd(&self.derivative()).degree() == 0
    }

    /// Strips every factor `x - r` and returns the multiplicity found.
    pub fn remove_root(&self, r: &Q) -> (Poly, usize) {
        let lin = Poly::linear(r);
        let mut p = self.clone();
        let mut k = 0;
        while !p.is_zero() && p.eval(r).is_zero() {
            p = p.div_rem(&lin).0;
            k += 1;
        }
        (p, k)
    }

    /// Rewrites a palindromic `p(λ)` of degree `2d` as `λ^d · P(λ + 1/λ)` and
    /// returns `P`.
    pub fn palindromic_to_trace(&self) -> Option<Poly> {
        let n = self.0.len();
        if n == 0 || n % 2 == 0 {
            return None;
        }
        for i in 0..n {
            if self.0[i] != self.0[n - 1 - i] {
                return None;
            }
        }
        let d = (n - 1) / 2;
        let x = Poly::from_ints(&[0, 1]);
        let mut prev = Poly::from_ints(&[2]);
        let mut cur = x.clone();
        let mut out = Poly::new(vec![self.0[d].clone()]);
        for k in 1..=d {
            out = out.add(&cur.scale(&self.0[d + k]));
            let next = x.mul(&cur).sub(&prev);
            prev = cur;
            cur = next;
        }
        Some(out)
    }
}

/// The cyclotomic polynomial `Φ_n(λ) = Π_{d|n} (λ^d - 1)^{μ(n/d)}`.
pub fn cyclotomic(n: u64) -> Poly {
    let xd = |d: u64| {
        let mut c = vec![Q::zero(); d as usize + 1];
        c[0] = qi(-1);
        c[d as usize] = qi(1);
        Poly::new(c)
    };
    let (mut num, mut den) = (Poly::one(), Poly::one());
    for d in (1..=n).filter(|d| n % d == 0) {
        match mobius(n / d) {
            1 => num = num.mul(&xd(d)),
            -1 => den = den.mul(&xd(d)),
            _ => {}
        }
    }
    num.div_rem(&den).0
}

fn mobius(mut n: u64) -> i32 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

/// Sturm chain of a squarefree polynomial.
#[derive(Clone, Debug)]
pub struct Sturm(Vec<Poly>);

impl Sturm {
    pub fn new(p: &Poly) -> Sturm {
        let mut chain = vec![p.clone(), p.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].div_rem(&chain[n - 1]).1;
            if r.is_zero() {
                break;
            }
            chain.push(r.scale(&qi(-1)));
        }
        Sturm(chain)
    }

    fn variations(&self, x: &Q) -> usize {
        let mut last = 0i8;
        let mut v = 0;
        for p in &self.0 {
            let s = p.eval(x);
            let sg = if s.is_positive() {
                1
            } else if s.is_negative() {
                -1
            } else {
                0
            };
            if sg != 0 {
                if last != 0 && sg != last {
                    v += 1;
                }
                last = sg;
            }
        }
        v
    }

    /// Distinct real roots in `(a, b]`.
    pub fn count(&self, a: &Q, b: &Q) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

/// A real root known to lie in `(lo, hi)` with no other root of the
/// polynomial in `[lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct IsolatedRoot {
    pub lo: Q,
    pub hi: Q,
}

impl IsolatedRoot {
    pub fn mid(&self) -> Q {
        (&self.lo + &self.hi) / qi(2)
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }
}

/// Isolates the real roots of a squarefree `p` in the open interval `(a, b)`,
/// assuming neither endpoint is a root. Intervals are refined to width below
/// `width`.
pub fn isolate_roots(p: &Poly, a: &Q, b: &Q, width: &Q) -> Vec<IsolatedRoot> {
    let sturm = Sturm::new(p);
    let mut out = Vec::new();
    let mut stack = vec![(a.clone(), b.clone())];
    while let Some((lo, hi)) = stack.pop() {
        let n = sturm.count(&lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 && &(&hi - &lo) < width && !p.eval(&hi).is_zero() {
            out.push(IsolatedRoot { lo, hi });
            continue;
        }
        let mut mid = (&lo + &hi) / qi(2);
        if p.eval(&mid).is_zero() {
            // nudge off an exact rational root
            let step = (&hi - &lo) / qi(7);
            mid += step;
        }
        if n == 1 && p.eval(&hi).is_zero() {
            // the single root sits exactly at hi
            out.push(IsolatedRoot { lo: hi.clone(), hi: hi.clone() });
            continue;
        }
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    out
}

/// Bisects an isolating interval of a simple root until it is narrower than
/// `width`.
pub fn refine_root(p: &Poly, r: &IsolatedRoot, width: &Q) -> IsolatedRoot {
    let (mut lo, mut hi) = (r.lo.clone(), r.hi.clone());
    let mut s_hi = p.eval(&hi);
    while &(&hi - &lo) >= width {
        let mid = (&lo + &hi) / qi(2);
        let s = p.eval(&mid);
        if s.is_zero() {
            return IsolatedRoot { lo: mid.clone(), hi: mid };
        }
        if s.is_positive() == s_hi.is_positive() {
            hi = mid;
            s_hi = s;
        } else {
            lo = mid;
        }
    }
    IsolatedRoot { lo, hi }
}

/// A rational strictly between two sorted isolated roots.
pub fn separator(a: &IsolatedRoot, b: &IsolatedRoot) -> Q {
    (&a.hi + &b.lo) / qi(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    #[test]
    fn division_and_gcd() {
        let a = Poly::from_ints(&[-1, 0, 1]);
        let b = Poly::from_ints(&[1, 1]);
        let (quo, r) = a.div_rem(&b);
        assert_eq!(quo, Poly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        let g = Poly::from_ints(&[-1, 0, 1]).gcd(&Poly::from_ints(&[1, 2, 1]));
        assert_eq!(g, Poly::from_ints(&[1, 1]));
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(cyclotomic(1), Poly::from_ints(&[-1, 1]));
        assert_eq!(cyclotomic(4), Poly::from_ints(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), Poly::from_ints(&[1, -1, 1]));
        assert_eq!(cyclotomic(12).degree() as u64, totient(12));
    }

    #[test]
    fn trace_form() {
        // λ^2 - λ + 1 = λ (X - 1)
        assert_eq!(
            cyclotomic(6).palindromic_to_trace().unwrap(),
            Poly::from_ints(&[-1, 1])
        );
        // (λ^2+1)^2 = λ^2 X^2
        let p = cyclotomic(4).mul(&cyclotomic(4));
        assert_eq!(p.palindromic_to_trace().unwrap(), Poly::from_ints(&[0, 0, 1]));
        assert!(Poly::from_ints(&[1, 2]).palindromic_to_trace().is_none());
    }

    #[test]
    fn sturm_counts_and_isolation() {
        // (x-1)(x+1)(x-1/2)
        let p = Poly::from_ints(&[-1, 0, 1]).mul(&Poly::linear(&q(1, 2)));
        let s = Sturm::new(&p);
        assert_eq!(s.count(&qi(-2), &qi(2)), 3);
        assert_eq!(s.count(&qi(0), &qi(2)), 2);
        let roots = isolate_roots(&p, &qi(-3), &qi(3), &q(1, 1000));
        assert_eq!(roots.len(), 3);
        assert!(roots[0].lo <= qi(-1) && qi(-1) <= roots[0].hi);
        assert!(roots[1].lo <= q(1, 2) && q(1, 2) <= roots[1].hi);
        let x2 = Poly::from_ints(&[-2, 0, 1]);
        let r = isolate_roots(&x2, &qi(0), &qi(2), &q(1, 10_000));
        assert_eq!(r.len(), 1);
        let m = crate::arith::to_f64(&r[0].mid());
        assert!((m - 2f64.sqrt()).abs() < 1e-4);
    }

    #[test]
    fn root_removal() {
        let p = Poly::from_ints(&[-2, 1]).mul(&Poly::from_ints(&[-2, 1])).mul(&Poly::from_ints(&[1, 1]));
        let (rest, k) = p.remove_root(&qi(2));
        assert_eq!(k, 2);
        assert_eq!(rest, Poly::from_ints(&[1, 1]));
        assert!(!p.is_squarefree());
        assert!(rest.is_squarefree());
    }
}
