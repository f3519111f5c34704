//! Soft Pellet test: shift and scale `p` to the unit disc, run Graeffe
//! iterations, and look for a dominant coefficient.

use rug::float::Round;
use rug::{Float, Rational};

use crate::geometry::Disc;
use crate::numerics::{root_of_unity, ComplexInterval, DdBall, Dyadic, DyadicComplex, Mag, RealInterval, GUARD_BITS};
use crate::poly::{Expansion, PolynomialOracle};

/// Highest working precision tried before giving up.
pub const TSTAR_MAX_PREC: u32 = 1 << 15;
const FIRST_MPFR_PREC: u32 = 212;
// the Taylor expansion is cut once the tail is this many bits below the largest
// kept term; Graeffe steps can cancel many bits, so the cut follows the precision
const DD_TAIL_BITS: i64 = 80;
const MP_TAIL_SLACK: i64 = 30;
const R_STEPS: [i64; 14] = [1, 2, 3, 4, 6, 8, 11, 16, 22, 32, 45, 64, 90, 128];

pub(crate) trait Kernel {
    type B: Clone;
    fn add(&self, a: &Self::B, b: &Self::B) -> Self::B;
    fn sub(&self, a: &Self::B, b: &Self::B) -> Self::B;
    fn mul(&self, a: &Self::B, b: &Self::B) -> Self::B;
    fn neg(&self, a: &Self::B) -> Self::B;
    fn mul_2exp(&self, a: &Self::B, k: i64) -> Self::B;
    fn abs_upper(&self, a: &Self::B) -> Mag;
    fn abs_lower(&self, a: &Self::B) -> Mag;
    /// Modulus of the midpoint; not a bound.
    fn mid_abs(&self, a: &Self::B) -> Mag;
    fn from_dyadic(&self, z: &DyadicComplex) -> Self::B;
}

pub(crate) struct DdKernel;

impl Kernel for DdKernel {
    type B = DdBall;
    fn add(&self, a: &DdBall, b: &DdBall) -> DdBall {
        a.add(b)
    }
    fn sub(&self, a: &DdBall, b: &DdBall) -> DdBall {
        a.sub(b)
    }
    fn mul(&self, a: &DdBall, b: &DdBall) -> DdBall {
        a.mul(b)
    }
    fn neg(&self, a: &DdBall) -> DdBall {
        a.neg()
    }
    fn mul_2exp(&self, a: &DdBall, k: i64) -> DdBall {
        a.mul_2exp(k)
    }
    fn abs_upper(&self, a: &DdBall) -> Mag {
        a.abs_upper()
    }
    fn abs_lower(&self, a: &DdBall) -> Mag {
        a.abs_lower()
    }
    fn mid_abs(&self, a: &DdBall) -> Mag {
        a.mid_abs()
    }
    fn from_dyadic(&self, z: &DyadicComplex) -> DdBall {
        DdBall::from_interval(&ComplexInterval::from_dyadic(z, z.bits().max(128)))
    }
}

pub(crate) struct MpKernel {
    pub prec: u32,
}

impl Kernel for MpKernel {
    type B = ComplexInterval;
    fn add(&self, a: &ComplexInterval, b: &ComplexInterval) -> ComplexInterval {
        a.add(b, self.prec)
    }
    fn sub(&self, a: &ComplexInterval, b: &ComplexInterval) -> ComplexInterval {
        a.sub(b, self.prec)
    }
    fn mul(&self, a: &ComplexInterval, b: &ComplexInterval) -> ComplexInterval {
        a.mul(b, self.prec)
    }
    fn neg(&self, a: &ComplexInterval) -> ComplexInterval {
        a.neg()
    }
    fn mul_2exp(&self, a: &ComplexInterval, k: i64) -> ComplexInterval {
        a.mul_2exp(k)
    }
    fn abs_upper(&self, a: &ComplexInterval) -> Mag {
        a.abs_upper()
    }
    fn abs_lower(&self, a: &ComplexInterval) -> Mag {
        a.abs_lower()
    }
    fn mid_abs(&self, a: &ComplexInterval) -> Mag {
        let (re, im) = (a.re.mid(), a.im.mid());
        let h = Float::with_val(64, re * re) + Float::with_val(64, im * im);
        Mag::from_float_abs(&h.sqrt())
    }
    fn from_dyadic(&self, z: &DyadicComplex) -> ComplexInterval {
        ComplexInterval::from_dyadic(z, self.prec)
    }
}

/// Result of one soft Pellet check on a coefficient vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Check {
    Pass(usize),
    /// failed, but more precision might change that
    Uncertain,
    Fail,
}

/// Outcome of a T* call.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TStarOutcome {
    /// `k >= 0` only if the disc contains exactly `k` roots; `-1` otherwise
    pub value: i64,
    /// highest working precision used (106 stands for the double-double level)
    pub precision: u32,
    pub graeffe_iterations: u32,
    /// number of Taylor coefficients computed at the last level
    pub terms: usize,
}

/// Number of Graeffe iterations, `ceil(log2(4 + log2 d)) + 2`.
pub fn graeffe_count(d: usize) -> u32 {
    // 2^n >= 4 + log2 d  <=>  d <= 2^(2^n - 4)
    let mut n = 0u32;
    loop {
        let t = (1i64 << n) - 4;
        if t >= 0 && (t >= 63 || (d as u128) <= 1u128 << t) {
            return n + 2;
        }
        n += 1;
    }
}

fn square<K: Kernel>(k: &K, e: &[K::B]) -> Vec<K::B> {
    let m = e.len();
    if m == 0 {
        return Vec::new();
    }
    let mut out: Vec<Option<K::B>> = vec![None; 2 * m - 1];
    let mut acc = |idx: usize, v: K::B| {
        out[idx] = Some(match out[idx].take() {
            None => v,
            Some(s) => k.add(&s, &v),
        });
    };
    for i in 0..m {
        acc(2 * i, k.mul(&e[i], &e[i]));
        for j in i + 1..m {
            acc(i + j, k.mul_2exp(&k.mul(&e[i], &e[j]), 1));
        }
    }
    out.into_iter().map(|v| v.expect("every index is written")).collect()
}

/// One Graeffe step: `q(z^2) = (-1)^n p(z) p(-z)`.
fn graeffe_step<K: Kernel>(k: &K, g: &[K::B]) -> Vec<K::B> {
    let n = g.len() - 1;
    let even: Vec<K::B> = g.iter().step_by(2).cloned().collect();
    let odd: Vec<K::B> = g.iter().skip(1).step_by(2).cloned().collect();
    let ee = square(k, &even);
    let oo = square(k, &odd);
    let flip = n % 2 == 1;
    (0..=n)
        .map(|j| {
            let v = match (ee.get(j), j.checked_sub(1).and_then(|i| oo.get(i))) {
                (Some(a), Some(b)) => k.sub(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => k.neg(b),
                (None, None) => unreachable!("degree bookkeeping"),
            };
            if flip {
                k.neg(&v)
            } else {
                v
            }
        })
        .collect()
}

/// Coefficients of the Graeffe iterate of `coeffs` (ascending degree):
/// its roots are the squares of the roots of the input.
pub fn graeffe_iterate(coeffs: &[ComplexInterval], prec: u32) -> Vec<ComplexInterval> {
    assert!(!coeffs.is_empty(), "empty coefficient list");
    graeffe_step(&MpKernel { prec }, coeffs)
}

fn sum_upper(v: &[Mag]) -> Mag {
    v.iter().fold(Mag::ZERO, |s, x| s.add(*x))
}

/// Soft Pellet check `|g_k| > 3/2 * sum_{i != k} |g_i|`, with `tau` bounding the
/// 1-norm of an unknown perturbation of the whole vector.
fn dominance<K: Kernel>(k: &K, g: &[K::B], tau: Mag) -> Check {
    let n = g.len();
    let ups: Vec<Mag> = g.iter().map(|x| k.abs_upper(x)).collect();
    let mut pre = vec![Mag::ZERO; n + 1];
    for i in 0..n {
        pre[i + 1] = pre[i].add(ups[i]);
    }
    let mut suf = vec![Mag::ZERO; n + 1];
    for i in (0..n).rev() {
        suf[i] = suf[i + 1].add(ups[i]);
    }
    let three_halves = Mag::from_f64(1.5);
    for i in 0..n {
        let others = pre[i].add(suf[i + 1]).add(tau);
        let lhs = k.abs_lower(&g[i]).sub_lower(tau);
        if lhs.cmp_value(&others.mul(three_halves)).is_gt() {
            return Check::Pass(i);
        }
    }
    // would exact arithmetic have passed?
    let mids: Vec<Mag> = g.iter().map(|x| k.mid_abs(x)).collect();
    let total = sum_upper(&mids);
    let max_up = ups.iter().fold(Mag::ZERO, |m, x| m.max(*x));
    for i in 0..n {
        let others = total.sub_lower(mids[i]);
        if mids[i].cmp_value(&others.mul(three_halves)).is_gt() {
            return Check::Uncertain;
        }
    }
    let floor = max_up.mul_2exp(-20);
    for i in 0..n {
        if ups[i].cmp_value(&floor).is_ge() && k.abs_lower(&g[i]).cmp_value(&ups[i].mul_2exp(-1)).is_lt() {
            return Check::Uncertain;
        }
    }
    Check::Fail
}

enum Verdict {
    Decided(i64, u32),
    Escalate,
}

fn pellet_graeffe<K: Kernel>(k: &K, mut g: Vec<K::B>, mut tau: Mag, iterations: u32) -> Verdict {
    for it in 0..=iterations {
        match dominance(k, &g, tau) {
            Check::Pass(i) => return Verdict::Decided(i as i64, it),
            Check::Uncertain => return Verdict::Escalate,
            Check::Fail if it == iterations => return Verdict::Decided(-1, it),
            Check::Fail => {}
        }
        if !tau.is_zero() {
            let norm = sum_upper(&g.iter().map(|x| k.abs_upper(x)).collect::<Vec<_>>());
            tau = norm.mul(tau).mul_2exp(1).add(tau.mul(tau));
        }
        g = graeffe_step(k, &g);
    }
    unreachable!("loop returns at the last iteration")
}

fn upper_abs_dyadic(z: &DyadicComplex) -> Mag {
    let n = z.norm_sqr();
    if n.is_zero() {
        return Mag::ZERO;
    }
    let mut f = Float::with_val_round(64, &n.to_rational(), Round::Up).0;
    f.sqrt_round(Round::Up);
    Mag::from_float_abs(&f)
}

/// Upper bound of `sum |p_j| x^j`.
fn abs_poly(mags: &[Mag], x: Mag) -> Mag {
    mags.iter().rev().fold(Mag::ZERO, |acc, m| acc.mul(x).add(*m))
}

/// Truncation plan: Cauchy radius `R = r 2^s`, the bound `M >= max_{|u| = R} |p(c + u)|`
/// and a guess of the number of terms needed.
struct TailPlan {
    s: i64,
    m_bound: Mag,
    est_terms: usize,
}

impl TailPlan {
    fn new(mags: &[Mag], c: &DyadicComplex, r: &Dyadic, a0: Mag, tail_bits: i64) -> TailPlan {
        let c_abs = upper_abs_dyadic(c);
        let r_mag = Mag::from_float_abs(&r.to_float(64));
        let a0 = a0.max(abs_poly(mags, c_abs.add(r_mag)).mul_2exp(-100));
        let log_a0 = a0.exp_bound().unwrap_or(i64::MIN / 4);
        let mut plan: Option<TailPlan> = None;
        for s in R_STEPS {
            let m = abs_poly(mags, c_abs.add(r_mag.mul_2exp(s)));
            let need = m.exp_bound().unwrap_or(0) + tail_bits + 2 - log_a0;
            let terms = if need <= 0 { 1 } else { (need + s - 1) / s } as usize;
            if plan.as_ref().is_none_or(|p| terms < p.est_terms) {
                plan = Some(TailPlan { s, m_bound: m, est_terms: terms });
            }
        }
        plan.expect("at least one candidate")
    }

    /// Bound on `sum_{l >= i} |a_l|`: `M (r/R)^i / (1 - r/R) <= M 2^(1 - s i)`.
    fn tail(&self, i: usize) -> Mag {
        self.m_bound.mul_2exp(1 - self.s * i as i64)
    }
}

/// Taylor coefficients of `p(c + r z)` from its coefficients, possibly
/// truncated, with a bound on the 1-norm of the dropped tail.
fn shifted_coefficients<K: Kernel>(
    k: &K,
    coeffs: &[K::B],
    mags: &[Mag],
    c: &DyadicComplex,
    r: &Dyadic,
    tail_bits: i64,
) -> (Vec<K::B>, Mag) {
    let d = coeffs.len() - 1;
    let cb = k.from_dyadic(c);
    let rb = k.from_dyadic(&DyadicComplex::real(r.clone()));
    let mut b = coeffs.to_vec();
    let pass = |b: &mut Vec<K::B>, i: usize| {
        for j in (i..d).rev() {
            b[j] = k.add(&b[j], &k.mul(&cb, &b[j + 1]));
        }
    };
    if d == 0 {
        return (b, Mag::ZERO);
    }
    pass(&mut b, 0);
    let mut out = vec![b[0].clone()];
    let plan = TailPlan::new(mags, c, r, k.mid_abs(&out[0]), tail_bits);

    let mut rpow = rb.clone();
    let mut a_max = k.abs_lower(&out[0]);
    for i in 1..=d {
        let tail = plan.tail(i);
        if tail.cmp_value(&a_max.mul_2exp(-tail_bits)).is_le() {
            return (out, tail);
        }
        pass(&mut b, i);
        let a = k.mul(&b[i], &rpow);
        a_max = a_max.max(k.abs_lower(&a));
        out.push(a);
        if i < d {
            rpow = k.mul(&rpow, &rb);
        }
    }
    (out, Mag::ZERO)
}

/// The same expansion computed by the evaluator's own program, when it has one.
fn expanded_coefficients(
    p: &PolynomialOracle,
    mags: &[Mag],
    c: &DyadicComplex,
    r: &Dyadic,
    tail_bits: i64,
) -> Option<(Vec<DdBall>, Mag)> {
    let d = p.degree();
    let cb = DdKernel.from_dyadic(c);
    let rb = DdKernel.from_dyadic(&DyadicComplex::real(r.clone()));
    let first = p.taylor_dd(&cb, &rb, 1)?;
    let plan = TailPlan::new(mags, c, r, first[0].mid_abs(), tail_bits);
    let mut terms = (plan.est_terms + 1).min(d + 1);
    loop {
        let a = p.taylor_dd(&cb, &rb, terms)?;
        if terms > d {
            return Some((a, Mag::ZERO));
        }
        let a_max = a.iter().fold(Mag::ZERO, |m, x| m.max(x.abs_lower()));
        let tail = plan.tail(terms);
        if tail.cmp_value(&a_max.mul_2exp(-tail_bits)).is_le() {
            return Some((a, tail));
        }
        terms = (2 * terms).min(d + 1);
    }
}

/// Coefficients of `p(c + r z)` from `2(d+1)` evaluations on the circle.
fn interpolated_coefficients(p: &PolynomialOracle, c: &DyadicComplex, r: &Dyadic, prec: u32) -> Vec<ComplexInterval> {
    let d = p.degree();
    let m = 2 * (d + 1) as u64;
    let roots: Vec<ComplexInterval> = (0..m).map(|j| root_of_unity(j, m, prec + 8)).collect();
    let cb = ComplexInterval::from_dyadic(c, prec);
    let rb = RealInterval::from_dyadic(r, prec);
    let values: Vec<ComplexInterval> =
        roots.iter().map(|w| p.eval_at(&cb.add(&w.mul_real(&rb, prec), prec), prec)).collect();
    let inv_m = RealInterval::from_rational(&Rational::from((1, m)), prec);
    (0..=d)
        .map(|kk| {
            let mut s = ComplexInterval::zero();
            for (j, v) in values.iter().enumerate() {
                let idx = ((j as u64) * (kk as u64)) % m;
                s = s.add(&v.mul(&roots[idx as usize].conj(), prec), prec);
            }
            s.mul_real(&inv_m, prec)
        })
        .collect()
}

/// Soft Pellet test on `delta`: `k >= 0` only if `p` has exactly `k` roots
/// (with multiplicity) in `delta`.
pub fn tstar(p: &PolynomialOracle, delta: &Disc) -> i64 {
    tstar_detail(p, delta).value
}

pub fn tstar_detail(p: &PolynomialOracle, delta: &Disc) -> TStarOutcome {
    let d = p.degree();
    if d == 0 {
        return TStarOutcome { value: 0, precision: 53, graeffe_iterations: 0, terms: 1 };
    }
    let iterations = graeffe_count(d);
    let (c, r) = (&delta.center, &delta.radius);
    let done = |value: i64, precision: u32, it: u32, terms: usize| TStarOutcome {
        value,
        precision,
        graeffe_iterations: it,
        terms,
    };

    if let Some(balls) = p.coefficient_balls() {
        let (g, tau) = expanded_coefficients(p, &balls.magnitudes, c, r, DD_TAIL_BITS)
            .unwrap_or_else(|| shifted_coefficients(&DdKernel, &balls.balls, &balls.magnitudes, c, r, DD_TAIL_BITS));
        let terms = g.len();
        if let Verdict::Decided(v, it) = pellet_graeffe(&DdKernel, g, tau, iterations) {
            return done(v, 106, it, terms);
        }
        // a small disc away from the origin: the monomial basis may be what
        // failed, so retry in an exact expansion about a nearby lattice point
        let local = if r.to_f64() <= 1.0 { p.expansion_near(c) } else { None };
        let shift = |e: &Expansion| DyadicComplex::new(&c.re - &e.center.re, &c.im - &e.center.im);
        if let Some(e) = &local {
            let (g, tau) = shifted_coefficients(&DdKernel, &e.balls, &e.magnitudes, &shift(e), r, DD_TAIL_BITS);
            let terms = g.len();
            if let Verdict::Decided(v, it) = pellet_graeffe(&DdKernel, g, tau, iterations) {
                return done(v, 106, it, terms);
            }
        }
        let mut prec = FIRST_MPFR_PREC;
        while prec <= TSTAR_MAX_PREC {
            let kern = MpKernel { prec };
            let source = local.as_ref().and_then(|e| Some((e.enclosures(prec)?, &e.magnitudes[..], shift(e))));
            let (coeffs, mags, center) = source.unwrap_or_else(|| {
                (p.coefficient_enclosures(prec).expect("coefficients present"), &balls.magnitudes[..], c.clone())
            });
            let (g, tau) = shifted_coefficients(&kern, &coeffs, mags, &center, r, prec as i64 - MP_TAIL_SLACK);
            let terms = g.len();
            if let Verdict::Decided(v, it) = pellet_graeffe(&kern, g, tau, iterations) {
                return done(v, prec, it, terms);
            }
            prec *= 2;
        }
        return done(-1, TSTAR_MAX_PREC, iterations, d + 1);
    }

    let mut bits = 53u32;
    while bits <= TSTAR_MAX_PREC {
        let prec = bits + GUARD_BITS;
        let kern = MpKernel { prec };
        let g = interpolated_coefficients(p, c, r, prec);
        if let Verdict::Decided(v, it) = pellet_graeffe(&kern, g, Mag::ZERO, iterations) {
            return done(v, bits, it, d + 1);
        }
        bits *= 2;
    }
    done(-1, TSTAR_MAX_PREC, iterations, d + 1)
}
