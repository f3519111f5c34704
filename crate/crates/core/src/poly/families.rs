//! The benchmark families: Mignotte, Mandelbrot, Bernoulli and Runnels.
//!
//! Mignotte, Mandelbrot and Runnels polynomials are evaluated with their
//! straight-line programs; derivatives come from forward-mode differentiation
//! of the same program. Their exact integer coefficients are also attached.

use std::sync::Arc;

use rug::{Integer, Rational};

use super::dense::{CoefficientList, Horner};
use super::series::Series;
use super::{Evaluator, Family, PolynomialOracle, Provenance};
use crate::numerics::{ComplexInterval, DdBall, RealInterval};

fn pow_dd(z: &DdBall, mut n: u64) -> DdBall {
    let mut acc = DdBall::one();
    let mut base = *z;
    while n > 0 {
        if n & 1 == 1 {
            acc = acc.mul(&base);
        }
        n >>= 1;
        if n > 0 {
            base = base.sqr();
        }
    }
    acc
}

fn pow(z: &ComplexInterval, mut n: u64, prec: u32) -> ComplexInterval {
    let mut acc = ComplexInterval::one();
    let mut base = z.clone();
    while n > 0 {
        if n & 1 == 1 {
            acc = acc.mul(&base, prec);
        }
        n >>= 1;
        if n > 0 {
            base = base.sqr(prec);
        }
    }
    acc
}

struct Mignotte {
    a: u32,
    d: u32,
}

impl Mignotte {
    fn shifted(&self, z: &ComplexInterval, prec: u32) -> ComplexInterval {
        // 2^a z - 1
        z.mul_2exp(self.a as i64).sub(&ComplexInterval::one(), prec)
    }
}

impl Evaluator for Mignotte {
    fn eval_pair(&self, z: &ComplexInterval, prec: u32) -> (ComplexInterval, ComplexInterval) {
        let zd1 = pow(z, self.d as u64 - 1, prec);
        let zd = zd1.mul(z, prec);
        let t = self.shifted(z, prec);
        let p = zd.sub(&t.sqr(prec).mul_2exp(1), prec);
        let dp = zd1
            .mul_real(&RealInterval::from_i64(self.d as i64), prec)
            .sub(&t.mul_2exp(self.a as i64 + 2), prec);
        (p, dp)
    }

    fn eval(&self, z: &ComplexInterval, prec: u32) -> ComplexInterval {
        let zd = pow(z, self.d as u64, prec);
        let t = self.shifted(z, prec);
        zd.sub(&t.sqr(prec).mul_2exp(1), prec)
    }

    fn eval_pair_dd(&self, z: &DdBall) -> Option<(DdBall, DdBall)> {
        let zd1 = pow_dd(z, self.d as u64 - 1);
        let t = z.mul_2exp(self.a as i64).sub(&DdBall::one());
        let p = zd1.mul(z).sub(&t.sqr().mul_2exp(1));
        let dp = zd1.mul(&DdBall::from_f64(self.d as f64, 0.0)).sub(&t.mul_2exp(self.a as i64 + 2));
        Some((p, dp))
    }

    fn taylor_dd(&self, c: &DdBall, r: &DdBall, k: usize) -> Option<Vec<DdBall>> {
        let z = Series::variable(*c, *r, k);
        let t = z.mul_2exp(self.a as i64).add_const(&DdBall::one().neg());
        Some(z.pow(self.d as u64).sub(&t.sqr().mul_2exp(1)).0)
    }
}

/// `z^d - 2(2^a z - 1)^2`, a cluster of two roots near `2^-a`.
pub fn family_mignotte(a: u32, d: u32) -> PolynomialOracle {
    assert!(a >= 1 && d >= 3, "Mignotte polynomial needs a >= 1 and d >= 3");
    let mut c = vec![Integer::new(); d as usize + 1];
    c[0] = Integer::from(-2);
    c[1] = Integer::from(1) << (a + 2);
    c[2] = -(Integer::from(1) << (2 * a + 1));
    c[d as usize] += 1;
    PolynomialOracle::new(d as usize, Arc::new(Mignotte { a, d }), true, Provenance::Family(Family::Mignotte { a, d }))
        .with_coefficients(integer_list(c))
}

struct Mandelbrot {
    k: u32,
}

impl Evaluator for Mandelbrot {
    fn eval_pair(&self, z: &ComplexInterval, prec: u32) -> (ComplexInterval, ComplexInterval) {
        let one = ComplexInterval::one();
        let mut m = one.clone();
        let mut dm = ComplexInterval::zero();
        for _ in 0..self.k {
            // m' <- m^2 + 2 z m dm ; m <- z m^2 + 1
            let m2 = m.sqr(prec);
            dm = m2.add(&z.mul(&m, prec).mul(&dm, prec).mul_2exp(1), prec);
            m = z.mul(&m2, prec).add(&one, prec);
        }
        (m, dm)
    }

    fn eval(&self, z: &ComplexInterval, prec: u32) -> ComplexInterval {
        let one = ComplexInterval::one();
        let mut m = one.clone();
        for _ in 0..self.k {
            m = z.mul(&m.sqr(prec), prec).add(&one, prec);
        }
        m
    }

    fn eval_pair_dd(&self, z: &DdBall) -> Option<(DdBall, DdBall)> {
        let one = DdBall::one();
        let mut m = one;
        let mut dm = DdBall::ZERO;
        for _ in 0..self.k {
            let m2 = m.sqr();
            dm = m2.add(&z.mul(&m).mul(&dm).mul_2exp(1));
            m = z.mul(&m2).add(&one);
        }
        Some((m, dm))
    }

    fn taylor_dd(&self, c: &DdBall, r: &DdBall, k: usize) -> Option<Vec<DdBall>> {
        let z = Series::variable(*c, *r, k);
        let one = DdBall::one();
        let mut m = Series::constant(one, k);
        for _ in 0..self.k {
            m = z.mul(&m.sqr()).add_const(&one);
        }
        Some(m.0)
    }
}

fn poly_mul(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    let mut out = vec![Integer::new(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += Integer::from(x * y);
        }
    }
    out
}

fn poly_add(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    let mut out = vec![Integer::new(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += y;
    }
    out
}

fn shift_up(a: &[Integer]) -> Vec<Integer> {
    let mut out = Vec::with_capacity(a.len() + 1);
    out.push(Integer::new());
    out.extend(a.iter().cloned());
    out
}

fn integer_list(c: Vec<Integer>) -> CoefficientList {
    CoefficientList::from_rationals(c.into_iter().map(Rational::from).collect()).expect("nonzero polynomial")
}

/// Exact coefficients of `Man_k` (with `Man_0 = 1`), ascending.
pub fn mandelbrot_coefficients(k: u32) -> Vec<Integer> {
    let mut m = vec![Integer::from(1)];
    for _ in 0..k {
        let sq = poly_mul(&m, &m);
        m = poly_add(&shift_up(&sq), &[Integer::from(1)]);
    }
    m
}

/// `Man_0 = 1`, `Man_k = z Man_{k-1}^2 + 1`; degree `2^k - 1`.
pub fn family_mandelbrot(k: u32) -> PolynomialOracle {
    assert!(k < 31, "Mandelbrot index too large");
    let degree = (1usize << k) - 1;
    PolynomialOracle::new(degree, Arc::new(Mandelbrot { k }), true, Provenance::Family(Family::Mandelbrot { k }))
        .with_coefficients(integer_list(mandelbrot_coefficients(k)))
}

struct Runnels {
    k: u32,
}

impl Evaluator for Runnels {
    fn eval_pair(&self, z: &ComplexInterval, prec: u32) -> (ComplexInterval, ComplexInterval) {
        if self.k == 0 {
            return (ComplexInterval::one(), ComplexInterval::zero());
        }
        // (q_{j-1}, q_j) and derivatives
        let mut prev = ComplexInterval::one();
        let mut dprev = ComplexInterval::zero();
        let mut cur = z.clone();
        let mut dcur = ComplexInterval::one();
        for _ in 1..self.k {
            // q_{j+1} = q_j^2 + z q_{j-1}^4
            // q'_{j+1} = 2 q_j q'_j + q_{j-1}^4 + 4 z q_{j-1}^3 q'_{j-1}
            let p2 = prev.sqr(prec);
            let p3 = p2.mul(&prev, prec);
            let p4 = p2.sqr(prec);
            let next = cur.sqr(prec).add(&z.mul(&p4, prec), prec);
            let dnext = cur
                .mul(&dcur, prec)
                .mul_2exp(1)
                .add(&p4, prec)
                .add(&z.mul(&p3, prec).mul(&dprev, prec).mul_2exp(2), prec);
            prev = cur;
            dprev = dcur;
            cur = next;
            dcur = dnext;
        }
        (cur, dcur)
    }

    fn eval_pair_dd(&self, z: &DdBall) -> Option<(DdBall, DdBall)> {
        if self.k == 0 {
            return Some((DdBall::one(), DdBall::ZERO));
        }
        let (mut prev, mut dprev) = (DdBall::one(), DdBall::ZERO);
        let (mut cur, mut dcur) = (*z, DdBall::one());
        for _ in 1..self.k {
            let p2 = prev.sqr();
            let p3 = p2.mul(&prev);
            let p4 = p2.sqr();
            let next = cur.sqr().add(&z.mul(&p4));
            let dnext = cur.mul(&dcur).mul_2exp(1).add(&p4).add(&z.mul(&p3).mul(&dprev).mul_2exp(2));
            prev = cur;
            dprev = dcur;
            cur = next;
            dcur = dnext;
        }
        Some((cur, dcur))
    }

    fn taylor_dd(&self, c: &DdBall, r: &DdBall, k: usize) -> Option<Vec<DdBall>> {
        let z = Series::variable(*c, *r, k);
        let mut prev = Series::constant(DdBall::one(), k);
        if self.k == 0 {
            return Some(prev.0);
        }
        let mut cur = z.clone();
        for _ in 1..self.k {
            let next = cur.sqr().add(&z.mul(&prev.sqr().sqr()));
            prev = cur;
            cur = next;
        }
        Some(cur.0)
    }
}

/// Exact coefficients of `Run_k`, ascending.
pub fn runnels_coefficients(k: u32) -> Vec<Integer> {
    let mut prev = vec![Integer::from(1)];
    if k == 0 {
        return prev;
    }
    let mut cur = vec![Integer::new(), Integer::from(1)];
    for _ in 1..k {
        let p2 = poly_mul(&prev, &prev);
        let p4 = poly_mul(&p2, &p2);
        let next = poly_add(&poly_mul(&cur, &cur), &shift_up(&p4));
        prev = cur;
        cur = next;
    }
    cur
}

/// Degree of `Run_k` from the recurrence.
pub fn runnels_degree(k: u32) -> usize {
    let (mut prev, mut cur) = (0usize, 1usize);
    if k == 0 {
        return 0;
    }
    for _ in 1..k {
        let next = (2 * cur).max(1 + 4 * prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// `q_0 = 1`, `q_1 = z`, `q_{j+1} = q_j^2 + z q_{j-1}^4`.
pub fn family_runnels(k: u32) -> PolynomialOracle {
    let coeffs = runnels_coefficients(k);
    let degree = runnels_degree(k);
    debug_assert_eq!(degree + 1, coeffs.len());
    PolynomialOracle::new(degree, Arc::new(Runnels { k }), true, Provenance::Family(Family::Runnels { k }))
        .with_coefficients(integer_list(coeffs))
}

/// Bernoulli numbers `b_0..=b_n` from `sum_{j=0}^{m} C(m+1, j) b_j = 0`, `b_0 = 1`.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut b = vec![Rational::from(1)];
    for m in 1..=n {
        let mut s = Rational::new();
        let mut binom = Integer::from(1); // C(m+1, 0)
        for (j, bj) in b.iter().enumerate() {
            s += Rational::from(&binom * bj.numer()) / bj.denom();
            binom = binom * Integer::from(m + 1 - j) / Integer::from(j + 1);
        }
        // binom is now C(m+1, m) = m + 1
        b.push(-s / binom);
    }
    b
}

/// `sum_{k=0}^{d} C(d, k) b_{d-k} z^k`, evaluated by Horner on exact coefficients.
pub fn family_bernoulli(d: u32) -> PolynomialOracle {
    assert!(d >= 1, "Bernoulli polynomial needs d >= 1");
    let d = d as usize;
    let b = bernoulli_numbers(d);
    let mut coeffs = Vec::with_capacity(d + 1);
    let mut binom = Integer::from(1);
    for k in 0..=d {
        coeffs.push(Rational::from(&binom * &b[d - k]));
        binom = binom * Integer::from(d - k) / Integer::from(k + 1);
    }
    let list = CoefficientList::from_rationals(coeffs).expect("monic");
    let horner = Horner::new(Arc::new(list.clone()));
    PolynomialOracle::new(d, Arc::new(horner), true, Provenance::Family(Family::Bernoulli { d: d as u32 }))
        .with_coefficients(list)
}
