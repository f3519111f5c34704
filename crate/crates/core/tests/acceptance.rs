//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any failure.
//!
//! Solver runs are shared between criteria, so each (polynomial, configuration)
//! pair is solved once.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use rootclust::counting::{choose_q, pstar_count, s0_star, tstar, TestMode};
use rootclust::geometry::{ClusterReport, Disc, Square};
use rootclust::numerics::{ComplexInterval, Dyadic, DyadicComplex};
use rootclust::poly::{dense_oracle, CoefficientList, Family, PolynomialOracle};
use rootclust::solver::{solve, verify_report_detailed, SolverConfig};

const CONFIGS: [(&str, TestMode, bool); 4] = [
    ("t-star", TestMode::TStarOnly, false),
    ("real", TestMode::TStarOnly, true),
    ("ps", TestMode::PStarFiltered, false),
    ("real-ps", TestMode::PStarFiltered, true),
];
const PLAIN: usize = 0;
const REAL_PS: usize = 3;

#[derive(Clone, Copy)]
struct Case {
    family: Family,
    roi_half: i64,
}

impl Case {
    fn label(&self) -> String {
        format!("{}@{}", self.family.label(), 2 * self.roi_half)
    }

    fn roi(&self) -> Square {
        Square::new(DyadicComplex::zero(), Dyadic::from_i64(2 * self.roi_half))
    }
}

fn global(family: Family) -> Case {
    Case { family, roi_half: 500 }
}

struct Run {
    report: ClusterReport,
    secs: f64,
}

#[derive(Default)]
struct Runs {
    done: HashMap<(String, usize), Run>,
    oracles: HashMap<String, PolynomialOracle>,
}

impl Runs {
    fn oracle(&mut self, case: Case) -> PolynomialOracle {
        self.oracles.entry(case.family.label()).or_insert_with(|| case.family.oracle()).clone()
    }

    fn get(&mut self, case: Case, config: usize) -> Result<&Run, String> {
        let key = (case.label(), config);
        if !self.done.contains_key(&key) {
            let p = self.oracle(case);
            let (name, mode, sym) = CONFIGS[config];
            let cfg = SolverConfig::new(case.roi(), Dyadic::pow2(-53)).with_mode(mode).with_real_symmetry(sym);
            let t = Instant::now();
            let report = solve(&p, &cfg).map_err(|e| format!("{} {name}: {e}", case.label()))?;
            let secs = t.elapsed().as_secs_f64();
            println!("  run {:<22} {name:<8} {:>4} clusters {:>4} roots  tree {:>6}  {secs:>8.2} s", case.label(), report.clusters.len(), report.total_roots(), report.stats.tree_size);
            self.done.insert(key.clone(), Run { report, secs });
        }
        Ok(&self.done[&key])
    }
}

fn report_line(n: u32, title: &str, result: &Result<String, String>) {
    match result {
        Ok(detail) => println!("PASS criterion {n}: {title} ({detail})"),
        Err(why) => println!("FAIL criterion {n}: {title}: {why}"),
    }
}

// ---------------------------------------------------------------- brute force

const ABERTH_PREC: u32 = 1100;

#[derive(Clone, Debug)]
struct Cx {
    re: Float,
    im: Float,
}

impl Cx {
    fn new(re: Float, im: Float) -> Cx {
        Cx { re, im }
    }

    fn from_f64(re: f64, im: f64) -> Cx {
        Cx::new(Float::with_val(ABERTH_PREC, re), Float::with_val(ABERTH_PREC, im))
    }

    fn add(&self, o: &Cx) -> Cx {
        Cx::new(Float::with_val(ABERTH_PREC, &self.re + &o.re), Float::with_val(ABERTH_PREC, &self.im + &o.im))
    }

    fn sub(&self, o: &Cx) -> Cx {
        Cx::new(Float::with_val(ABERTH_PREC, &self.re - &o.re), Float::with_val(ABERTH_PREC, &self.im - &o.im))
    }

    fn mul(&self, o: &Cx) -> Cx {
        let re = Float::with_val(ABERTH_PREC, &self.re * &o.re) - Float::with_val(ABERTH_PREC, &self.im * &o.im);
        let im = Float::with_val(ABERTH_PREC, &self.re * &o.im) + Float::with_val(ABERTH_PREC, &self.im * &o.re);
        Cx::new(re, im)
    }

    fn norm(&self) -> Float {
        Float::with_val(ABERTH_PREC, &self.re * &self.re) + Float::with_val(ABERTH_PREC, &self.im * &self.im)
    }

    fn div(&self, o: &Cx) -> Cx {
        let n = o.norm();
        let conj = Cx::new(o.re.clone(), Float::with_val(ABERTH_PREC, -&o.im));
        let t = self.mul(&conj);
        Cx::new(t.re / &n, t.im / &n)
    }

    fn abs(&self) -> f64 {
        self.norm().sqrt().to_f64()
    }
}

/// All roots by the Aberth-Ehrlich iteration at high precision.
fn aberth(p: &PolynomialOracle) -> Vec<Cx> {
    let enc = p.coefficient_enclosures(ABERTH_PREC).expect("suite polynomials carry coefficients");
    let a: Vec<Cx> = enc.iter().map(|c: &ComplexInterval| Cx::new(c.re.mid().clone(), c.im.mid().clone())).collect();
    let d = a.len() - 1;
    let lead = a[d].abs();
    let rho = (1..=d).map(|k| (a[d - k].abs() / lead).powf(1.0 / k as f64)).fold(0.0, f64::max).max(1e-3);
    let mut z: Vec<Cx> =
        (0..d).map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4;
            Cx::from_f64(rho * t.cos(), rho * t.sin())
        }).collect();
    let mut active = vec![true; d];
    let tol = 2f64.powi(-(ABERTH_PREC as i32 - 80));
    for _ in 0..4000 {
        if !active.iter().any(|&x| x) {
            break;
        }
        for k in 0..d {
            if !active[k] {
                continue;
            }
            let mut v = a[d].clone();
            let mut dv = Cx::from_f64(0.0, 0.0);
            for c in a[..d].iter().rev() {
                dv = dv.mul(&z[k]).add(&v);
                v = v.mul(&z[k]).add(c);
            }
            if v.norm().is_zero() {
                active[k] = false;
                continue;
            }
            let ratio = v.div(&dv);
            let mut s = Cx::from_f64(0.0, 0.0);
            for j in 0..d {
                if j != k {
                    s = s.add(&Cx::from_f64(1.0, 0.0).div(&z[k].sub(&z[j])));
                }
            }
            let w = ratio.div(&Cx::from_f64(1.0, 0.0).sub(&ratio.mul(&s)));
            z[k] = z[k].sub(&w);
            if w.abs() <= tol * z[k].abs().max(1e-300) {
                active[k] = false;
            }
        }
    }
    z
}

fn check_against_roots(case: Case, report: &ClusterReport, roots: &[Cx]) -> Result<(), String> {
    let roi = case.roi();
    let mut inside = vec![0u64; report.clusters.len()];
    for z in roots {
        let hits: Vec<usize> = report
            .clusters
            .iter()
            .enumerate()
            .filter(|(_, (d, _))| d.cmp_float_point(&z.re, &z.im).is_le())
            .map(|(i, _)| i)
            .collect();
        match hits[..] {
            [i] => inside[i] += 1,
            [] => {
                let in_roi = Float::with_val(64, &z.re).to_f64().abs() < roi.width.to_f64() / 2.0
                    && Float::with_val(64, &z.im).to_f64().abs() < roi.width.to_f64() / 2.0;
                if in_roi {
                    return Err(format!("{}: root {:.6e}{:+.6e}i lies in no disc", case.label(), z.re.to_f64(), z.im.to_f64()));
                }
            }
            _ => return Err(format!("{}: a root lies in several discs", case.label())),
        }
    }
    for ((d, m), n) in report.clusters.iter().zip(inside) {
        if *m != n {
            return Err(format!("{}: disc {d} reports {m} roots, brute force finds {n}", case.label()));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- criteria

fn expect_counts(run: &Run, clusters: usize, roots: u64) -> Result<(), String> {
    let got = (run.report.clusters.len(), run.report.total_roots());
    if got == (clusters, roots) {
        Ok(())
    } else {
        Err(format!("got {got:?}, expected ({clusters}, {roots})"))
    }
}

fn criterion_1(runs: &mut Runs) -> Result<String, String> {
    let cases = [
        (Case { family: Family::Mignotte { a: 14, d: 64 }, roi_half: 2 }, 63, 64),
        (global(Family::Mandelbrot { k: 6 }), 63, 63),
        (global(Family::Bernoulli { d: 64 }), 64, 64),
    ];
    let mut slowest: f64 = 0.0;
    for (case, clusters, roots) in cases {
        for config in 0..CONFIGS.len() {
            let run = runs.get(case, config)?;
            expect_counts(run, clusters, roots).map_err(|e| format!("{} {}: {e}", case.label(), CONFIGS[config].0))?;
            if run.secs >= 60.0 {
                return Err(format!("{} {} took {:.1} s", case.label(), CONFIGS[config].0, run.secs));
            }
            slowest = slowest.max(run.secs);
        }
    }
    Ok(format!("all configurations, slowest {slowest:.1} s"))
}

fn criterion_2(runs: &mut Runs) -> Result<String, String> {
    let rows = [
        (Family::Bernoulli { d: 128 }, 128, 128),
        (Family::Bernoulli { d: 256 }, 256, 256),
        (Family::Mignotte { a: 14, d: 128 }, 127, 128),
        (Family::Mignotte { a: 14, d: 256 }, 255, 256),
        (Family::Mandelbrot { k: 7 }, 127, 127),
        (Family::Mandelbrot { k: 8 }, 255, 255),
        (Family::Runnels { k: 8 }, 107, 170),
        (Family::Runnels { k: 9 }, 214, 341),
    ];
    let mut times = Vec::new();
    for (family, clusters, roots) in rows {
        let case = global(family);
        let run = runs.get(case, REAL_PS)?;
        expect_counts(run, clusters, roots).map_err(|e| format!("{}: {e}", case.label()))?;
        times.push(format!("{} {:.0} s", family.label(), run.secs));
    }
    Ok(times.join(", "))
}

fn criterion_3(runs: &mut Runs) -> Result<String, String> {
    let mut notes = Vec::new();
    for family in [Family::Mignotte { a: 14, d: 128 }, Family::Mandelbrot { k: 7 }] {
        let case = global(family);
        let (t1, tree1) = {
            let r = runs.get(case, PLAIN)?;
            (r.secs, r.report.stats.tree_size)
        };
        let (t3, tree3) = {
            let r = runs.get(case, REAL_PS)?;
            (r.secs, r.report.stats.tree_size)
        };
        let speedup = t1 / t3;
        if speedup < 1.5 {
            return Err(format!("{}: speed-up {speedup:.2}", family.label()));
        }
        if tree3 >= tree1 {
            return Err(format!("{}: tree {tree3} is not smaller than {tree1}", family.label()));
        }
        notes.push(format!("{} {speedup:.2}x, tree {tree1} -> {tree3}", family.label()));
    }
    Ok(notes.join("; "))
}

fn criterion_4() -> Result<String, String> {
    let unit = Disc::new(DyadicComplex::zero(), Dyadic::from_i64(1));
    let prec = 256;
    for a in [Rational::from((3, 10)), Rational::from((1, 2)), Rational::from((7, 10))] {
        let list = CoefficientList::from_rationals(vec![Rational::from(-&a), Rational::from(1)]).unwrap();
        let p = dense_oracle(list);
        for q in 2..=16u32 {
            let (s, _) = s0_star(&p, &unit, q, 200).map_err(|e| format!("a={a}, q={q}: {e}"))?;
            let aq = Rational::from((&a).pow(q));
            let exact = Rational::from(1) / (Rational::from(1) - &aq);
            if !s.contains_rational(&exact, &Rational::new()) {
                return Err(format!("a={a}, q={q}: {s} misses 1/(1-a^q)"));
            }
            // |mid - 1| <= theta^q / (1 - theta^q) + width / 2 with theta = |a|
            let dre = Float::with_val(prec, s.re.mid() - 1u32);
            let dist = Float::with_val(prec, dre.hypot_ref(s.im.mid()));
            let bound = Float::with_val(prec, &aq / (Rational::from(1) - &aq)) + s.width().to_float() / 2u32;
            if dist > bound {
                return Err(format!("a={a}, q={q}: |mid - 1| = {dist:.3e} exceeds {bound:.3e}"));
            }
        }
    }
    let two = Rational::from(2);
    let quarter = Rational::from((1, 4));
    for d in 1..=1024usize {
        // ceil(log2(d + 4) + 2)
        let limit = (d as u64 + 4).next_power_of_two().trailing_zeros() + 2;
        let q = choose_q(d, &two, &quarter);
        if q > limit {
            return Err(format!("choose_q({d}) = {q} > {limit}"));
        }
    }
    let q500 = choose_q(500, &two, &quarter);
    if q500 != 11 {
        return Err(format!("choose_q(500) = {q500}"));
    }
    Ok("45 contour sums, q bound for d <= 1024, q(500) = 11".into())
}

type Root = (DyadicComplex, u64);

fn random_dyadic(rng: &mut ChaCha8Rng, half: i64, frac_bits: i64) -> Dyadic {
    let span = half << frac_bits;
    Dyadic::new(Integer::from(rng.gen_range(-span..=span)), -frac_bits)
}

fn random_point(rng: &mut ChaCha8Rng, half: i64, frac_bits: i64) -> DyadicComplex {
    DyadicComplex::new(random_dyadic(rng, half, frac_bits), random_dyadic(rng, half, frac_bits))
}

/// Product of `(z - root)^m`, expanded exactly.
fn from_roots(roots: &[Root]) -> PolynomialOracle {
    let mut c: Vec<(Rational, Rational)> = vec![(Rational::from(1), Rational::new())];
    for (r, m) in roots {
        let (rr, ri) = (r.re.to_rational(), r.im.to_rational());
        for _ in 0..*m {
            let mut next = vec![(Rational::new(), Rational::new()); c.len() + 1];
            for (k, (a, b)) in c.iter().enumerate() {
                next[k + 1].0 += a;
                next[k + 1].1 += b;
                // -(rr + i ri)(a + i b)
                next[k].0 -= Rational::from(&rr * a) - Rational::from(&ri * b);
                next[k].1 -= Rational::from(&rr * b) + Rational::from(&ri * a);
            }
            c = next;
        }
    }
    dense_oracle(CoefficientList::from_complex_rationals(c).unwrap())
}

fn dist2(a: &DyadicComplex, b: &DyadicComplex) -> Dyadic {
    DyadicComplex::new(&a.re - &b.re, &a.im - &b.im).norm_sqr()
}

/// Roots in the closed disc, and whether any root lies in the closed annulus
/// `lo * r <= |z - c| <= hi * r` with factors given as `(num, log2 den)`.
fn census(roots: &[Root], d: &Disc, lo: (i64, i64), hi: (i64, i64)) -> (u64, bool) {
    let scale = |f: (i64, i64)| &d.radius.mul_2exp(-f.1) * &Dyadic::from_i64(f.0);
    let (rlo, rhi) = (scale(lo), scale(hi));
    let (lo2, hi2) = (&rlo * &rlo, &rhi * &rhi);
    let r2 = &d.radius * &d.radius;
    let mut count = 0;
    let mut in_annulus = false;
    for (z, m) in roots {
        let t = dist2(z, &d.center);
        if t <= r2 {
            count += m;
        }
        if lo2 <= t && t <= hi2 {
            in_annulus = true;
        }
    }
    (count, in_annulus)
}

fn random_disc(rng: &mut ChaCha8Rng, roots: &[Root]) -> Disc {
    let center = if rng.gen_bool(0.5) {
        let (r, _) = &roots[rng.gen_range(0..roots.len())];
        let off = random_point(rng, 1, 6).re.mul_2exp(-rng.gen_range(0..4));
        DyadicComplex::new(&r.re + &off, r.im.clone())
    } else {
        random_point(rng, 3, 5)
    };
    let radius = Dyadic::new(Integer::from(rng.gen_range(1..=15)), -rng.gen_range(1..=6));
    Disc::new(center, radius)
}

fn criterion_5() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_26);
    let (mut pstar_checked, mut tstar_checked, mut unconditional) = (0, 0, 0);
    for i in 0..20 {
        let mut roots: Vec<Root> = Vec::new();
        let mut degree = 0;
        let target = rng.gen_range(2..=16);
        while degree < target {
            let z = random_point(&mut rng, 2, 4);
            if roots.iter().any(|(r, _)| *r == z) {
                continue;
            }
            let m = rng.gen_range(1..=3u64).min(target - degree);
            degree += m;
            roots.push((z, m));
        }
        let p = from_roots(&roots);
        let (mut np, mut nt) = (0, 0);
        let mut attempts = 0;
        while np < 50 || nt < 50 {
            attempts += 1;
            if attempts > 100_000 {
                return Err(format!("polynomial {i}: could not draw enough discs"));
            }
            let d = random_disc(&mut rng, &roots);
            // isolation ratio 2: no root with r/2 <= |z - c| <= 2r
            let (count, crowded) = census(&roots, &d, (1, 1), (2, 0));
            if np < 50 && !crowded {
                let v = pstar_count(&p, &d, &Rational::from(2)).value;
                if v != count as i64 {
                    return Err(format!("polynomial {i}: P* on {d} gave {v}, expected {count}"));
                }
                np += 1;
            }
            // root-free contour with a margin: nothing in 3r/4 <= |z - c| <= 11r/8
            let (count, near) = census(&roots, &d, (3, 2), (11, 3));
            if nt < 50 && !near {
                let v = tstar(&p, &d);
                if v != count as i64 {
                    return Err(format!("polynomial {i}: T* on {d} gave {v}, expected {count}"));
                }
                nt += 1;
            }
            // any disc with no root on its contour: a count, when given, is exact
            let (count, on_contour) = census(&roots, &d, (1, 0), (1, 0));
            if !on_contour {
                let v = tstar(&p, &d);
                if v >= 0 && v != count as i64 {
                    return Err(format!("polynomial {i}: T* on {d} gave {v}, expected {count}"));
                }
                unconditional += (v >= 0) as usize;
            }
        }
        pstar_checked += np;
        tstar_checked += nt;
    }
    Ok(format!(
        "{pstar_checked} P* and {tstar_checked} T* counts on 20 polynomials, {unconditional} more T* counts on unrestricted discs"
    ))
}

fn suite_small() -> Vec<Case> {
    vec![
        Case { family: Family::Mignotte { a: 14, d: 64 }, roi_half: 2 },
        global(Family::Mandelbrot { k: 6 }),
        global(Family::Bernoulli { d: 64 }),
        global(Family::Mignotte { a: 14, d: 32 }),
        global(Family::Mandelbrot { k: 5 }),
        global(Family::Bernoulli { d: 32 }),
        global(Family::Runnels { k: 6 }),
    ]
}

fn criterion_6(runs: &mut Runs) -> Result<String, String> {
    let mut cases = suite_small();
    cases.extend([
        global(Family::Mignotte { a: 14, d: 128 }),
        global(Family::Mandelbrot { k: 7 }),
        global(Family::Bernoulli { d: 128 }),
    ]);
    let mut verified = 0;
    for case in cases {
        let p = runs.oracle(case);
        let mut first: Option<Vec<u64>> = None;
        for config in 0..CONFIGS.len() {
            let run = runs.get(case, config)?;
            let m = run.report.multiplicities();
            match &first {
                None => first = Some(m),
                Some(f) if *f != m => {
                    return Err(format!("{}: {} multiplicities differ from {}", case.label(), CONFIGS[config].0, CONFIGS[0].0))
                }
                Some(_) => {}
            }
            let v = verify_report_detailed(&p, &run.report);
            if !v.ok() {
                return Err(format!("{} {}: {}", case.label(), CONFIGS[config].0, v.problems.join("; ")));
            }
            verified += 1;
        }
    }
    Ok(format!("{verified} reports verified"))
}

fn is_conjugation_invariant(report: &ClusterReport) -> bool {
    report.clusters.iter().all(|(d, m)| report.clusters.contains(&(d.conj(), *m)))
}

fn criterion_7(runs: &mut Runs) -> Result<String, String> {
    let keys: Vec<(String, usize)> = runs.done.keys().cloned().collect();
    for key in &keys {
        if CONFIGS[key.1].2 && !is_conjugation_invariant(&runs.done[key].report) {
            return Err(format!("{} {}: disc set is not closed under conjugation", key.0, CONFIGS[key.1].0));
        }
    }
    let mut checked = 0;
    for case in suite_small() {
        let p = runs.oracle(case);
        let roots = aberth(&p);
        for config in [1, REAL_PS] {
            check_against_roots(case, &runs.get(case, config)?.report, &roots)?;
        }
        checked += 1;
    }
    Ok(format!("{} symmetric runs closed under conjugation, roots of {checked} polynomials located", keys.iter().filter(|k| CONFIGS[k.1].2).count()))
}

fn main() -> ExitCode {
    // numeric arguments pick criteria; everything runs by default
    let picked: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let wanted = |n: u32| picked.is_empty() || picked.contains(&n);
    let mut runs = Runs::default();
    let mut results = Vec::new();
    // cheap criteria first; solver runs are shared from criterion 1 on
    let order: [(u32, &str); 7] = [
        (4, "contour sum of z - a and the choice of q"),
        (5, "P* and T* agree with exact root counts"),
        (1, "cluster counts of Mignotte(14,64), Man_6, Bernoulli(64)"),
        (6, "four configurations agree and every report verifies"),
        (3, "real symmetry with the P* filter beats plain T*"),
        (2, "large benchmark cluster counts"),
        (7, "real symmetry and brute-force roots"),
    ];
    for (n, title) in order {
        if !wanted(n) {
            continue;
        }
        let result = match n {
            1 => criterion_1(&mut runs),
            2 => criterion_2(&mut runs),
            3 => criterion_3(&mut runs),
            4 => criterion_4(),
            5 => criterion_5(),
            6 => criterion_6(&mut runs),
            _ => criterion_7(&mut runs),
        };
        results.push((n, title, result));
    }
    results.sort_by_key(|r| r.0);
    println!();
    for (n, title, result) in &results {
        report_line(*n, title, result);
    }
    if results.iter().all(|r| r.2.is_ok()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
