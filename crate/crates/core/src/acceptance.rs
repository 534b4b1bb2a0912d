//! The acceptance suite: twelve end-to-end checks, shared by the `acceptance`
//! integration test and `qshap selftest`.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::centre::{central_truncation, centre_subspace, invariant_search, preimage_of, span_dimension, t_g, z_membership};
use crate::clifford::{t_h_element, CliffordAlgebra, CliffordElement};
use crate::enveloping::Uea;
use crate::error::{Error, Result};
use crate::exactalg::rational::factorial;
use crate::exactalg::{det_fraction_free, rat, ratio, PolyMatrix, Polynomial, Rational};
use crate::modrep::{
    classify_weight, corank_profile, default_cutoff, default_rho_prime, hyperplanes_through, jantzen_orders,
    predicted_order, weight_from_coroots, HyperplaneId, MatrixFamily, WeightClass,
};
use crate::rootdata::{AlgebraKind, Family, Root, RootVector, Species, Weight};
use crate::shapovalov::matrix::permutation_sign;
use crate::shapovalov::{
    closed_form_norm, partitions, proportional, shapovalov_matrix, tau, tau_alpha, verify_factorization,
    ShapovalovReport,
};

const SEED: u64 = 0x5eed_0001;

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2}. {}: {} ({:.2} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

pub const TITLES: [&str; 12] = [
    "sq(2) fixtures",
    "sq(2) HC closed forms",
    "determinant factorization",
    "det = Norm^(2^N)",
    "Norm(q) = Norm(sq)",
    "simplicity vs hyperplanes",
    "Jantzen orders",
    "Clifford layer",
    "anticentre of q(2)",
    "centre membership and search",
    "central truncation",
    "structural properties",
];

/// One B_ν factorization run, kept for criteria 3 to 5.
#[derive(Clone, Debug)]
pub struct FactorizationRun {
    pub kind: AlgebraKind,
    pub nu: RootVector,
    pub report: std::result::Result<ShapovalovReport, Error>,
    pub elapsed: Duration,
}

/// Shared state between criteria (the factorization runs are expensive).
#[derive(Default)]
pub struct Suite {
    runs: Option<Vec<FactorizationRun>>,
}

fn kind(f: Family, n: usize) -> AlgebraKind {
    AlgebraKind::new(f, n).expect("valid kind")
}

fn h(n: usize, i: usize) -> Polynomial {
    Polynomial::var(n, i)
}

fn c(n: usize, x: i64) -> Polynomial {
    Polynomial::from_int(n, x)
}

fn outcome(id: usize, start: Instant, r: Result<(bool, String)>) -> CriterionResult {
    let (passed, detail) = r.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult { id, title: TITLES[id - 1], passed, detail, elapsed: start.elapsed() }
}

impl Suite {
    pub fn new() -> Self {
        Suite::default()
    }

    pub fn run(&mut self, id: usize) -> CriterionResult {
        let start = Instant::now();
        let r = match id {
            1 => criterion_1(),
            2 => criterion_2(),
            3..=5 => self.factorization_runs().and_then(|runs| match id {
                3 => criterion_3(runs),
                4 => criterion_4(runs),
                _ => criterion_5(runs),
            }),
            6 => criterion_6(),
            7 => criterion_7(),
            8 => criterion_8(),
            9 => criterion_9(),
            10 => criterion_10(),
            11 => criterion_11(),
            12 => criterion_12(),
            _ => Err(Error::Parse(format!("no criterion {id}"))),
        };
        outcome(id.clamp(1, 12), start, r)
    }

    pub fn run_all(&mut self, mut report: impl FnMut(&CriterionResult)) -> Vec<CriterionResult> {
        (1..=12)
            .map(|id| {
                let r = self.run(id);
                report(&r);
                r
            })
            .collect()
    }

    fn factorization_runs(&mut self) -> Result<&[FactorizationRun]> {
        if self.runs.is_none() {
            let mut runs = Vec::new();
            let plan: [(Family, usize, u32); 6] = [
                (Family::Q, 2, 4),
                (Family::SQ, 2, 4),
                (Family::Q, 3, 3),
                (Family::SQ, 3, 3),
                (Family::PQ, 3, 3),
                (Family::PSQ, 3, 3),
            ];
            for (f, n, ht) in plan {
                let k = kind(f, n);
                let uea = Uea::new(k);
                for nu in RootVector::up_to_height(n, ht) {
                    let start = Instant::now();
                    let report = verify_factorization(&uea, k, &nu);
                    runs.push(FactorizationRun { kind: k, nu, report, elapsed: start.elapsed() });
                }
            }
            self.runs = Some(runs);
        }
        Ok(self.runs.as_deref().unwrap_or(&[]))
    }
}

/// Runs all criteria and returns the results in order.
pub fn run_all(report: impl FnMut(&CriterionResult)) -> Vec<CriterionResult> {
    Suite::new().run_all(report)
}

// ---------------------------------------------------------------------------
// 1. sq(2) fixtures

/// h_0 = 1, h_k = k!(h-1)…(h-k) with h = h_1 - h_2.
fn hk(k: u32) -> Polynomial {
    let hh = &h(2, 0) - &h(2, 1);
    let mut p = Polynomial::constant(2, Rational::from_integer(factorial(k)));
    for j in 1..=k {
        p = &p * &(&hh - &c(2, j as i64));
    }
    p
}

/// The displayed matrix of B_{(k+1)α} in the basis f^{k+1}, f^kFH, f^{k+1}H, f^kF.
pub fn sq2_fixture(k: u32) -> Vec<Vec<Polynomial>> {
    let hh = &h(2, 0) - &h(2, 1);
    let hp = &h(2, 0) + &h(2, 1);
    let sgn = |e: u32| c(2, if e % 2 == 0 { 1 } else { -1 });
    let k1 = c(2, k as i64 + 1);
    let z = Polynomial::zero(2);
    let hkk = hk(k);
    vec![
        vec![z.clone(), z.clone(), &(&sgn(k + 1) * &k1) * &(&hh * &hkk), &(&sgn(k + 1) * &k1) * &hkk],
        vec![z.clone(), z.clone(), &(&sgn(k) * &k1) * &(&hp * &hkk), &sgn(k) * &(&hp * &hkk)],
        vec![&(&sgn(k) * &k1) * &(&hh * &hkk), &(&sgn(k) * &k1) * &(&hp * &hkk), z.clone(), z.clone()],
        vec![&(&sgn(k + 1) * &k1) * &hkk, &sgn(k + 1) * &(&hp * &hkk), z.clone(), z],
    ]
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Whether `ours` becomes `target` after row/column permutations and either a
/// global sign or (when `per_vector`) independent signs on each row and column.
fn matches_fixture(ours: &PolyMatrix, target: &[Vec<Polynomial>], per_vector: bool) -> bool {
    let n = target.len();
    let perms = permutations(n);
    for pr in &perms {
        'cols: for pc in &perms {
            // s[i][j] with target = s · ours[pr[i]][pc[j]]
            let mut row_sign: Vec<Option<i64>> = vec![None; n];
            let mut col_sign: Vec<Option<i64>> = vec![None; n];
            let mut global: Option<i64> = None;
            for i in 0..n {
                for j in 0..n {
                    let a = ours.get(pr[i], pc[j]);
                    let b = &target[i][j];
                    let s = if a == b {
                        1
                    } else if &-a == b {
                        -1
                    } else {
                        continue 'cols;
                    };
                    if a.is_zero() {
                        continue;
                    }
                    if per_vector {
                        match (row_sign[i], col_sign[j]) {
                            (Some(r), Some(c)) if r * c != s => continue 'cols,
                            (Some(r), None) => col_sign[j] = Some(r * s),
                            (None, Some(c)) => row_sign[i] = Some(c * s),
                            (None, None) => {
                                row_sign[i] = Some(1);
                                col_sign[j] = Some(s);
                            }
                            _ => {}
                        }
                    } else {
                        match global {
                            Some(g) if g != s => continue 'cols,
                            _ => global = Some(s),
                        }
                    }
                }
            }
            return true;
        }
    }
    false
}

/// Whether a sign assignment on rows/columns solves the constraint system; the
/// greedy propagation above can miss a solution, so fall back to brute force.
fn matches_with_vector_signs(ours: &PolyMatrix, target: &[Vec<Polynomial>]) -> bool {
    if matches_fixture(ours, target, true) {
        return true;
    }
    let n = target.len();
    for rs in 0..1u32 << n {
        for cs in 0..1u32 << n {
            let sign = |m: u32, i: usize| if m >> i & 1 == 1 { -1 } else { 1 };
            let mut signed = ours.clone();
            for i in 0..n {
                for j in 0..n {
                    signed.set(i, j, ours.get(i, j).scale(&rat(sign(rs, i) * sign(cs, j))));
                }
            }
            if matches_fixture(&signed, target, false) {
                return true;
            }
        }
    }
    false
}

fn criterion_1() -> Result<(bool, String)> {
    let start = Instant::now();
    let sq2 = kind(Family::SQ, 2);
    let uea = Uea::new(sq2);
    let hp = &h(2, 0) + &h(2, 1);
    let mut literal = true;
    let mut vector_signs = true;
    let mut det_exact = true;
    let mut det_abs = true;
    let mut det_signs = Vec::new();
    for k in 0..3u32 {
        let sm = shapovalov_matrix(&uea, sq2, &RootVector(vec![k + 1]))?;
        let fixture = sq2_fixture(k);
        literal &= matches_fixture(&sm.matrix, &fixture, false);
        vector_signs &= matches_with_vector_signs(&sm.matrix, &fixture);
        let det = det_fraction_free(&sm.matrix)?;
        let claim = (&(&hp * &hk(k)) * &hk(k + 1)).pow(2);
        det_exact &= det == claim;
        det_abs &= det == claim || det == -&claim;
        det_signs.push(if det == claim { "+" } else if det == -&claim { "-" } else { "?" });
    }
    let fast = start.elapsed() < Duration::from_secs(1);
    let detail = format!(
        "matrix up to permutation and global sign: {}; up to permutation and per-basis-vector signs: {}; \
         det = (h' h_k h_(k+1))^2 exactly: {}; up to sign: {} (signs {}); runtime < 1 s: {}",
        yes(literal),
        yes(vector_signs),
        yes(det_exact),
        yes(det_abs),
        det_signs.join(""),
        yes(fast)
    );
    Ok((literal && det_exact && fast, detail))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

// ---------------------------------------------------------------------------
// 2. HC closed forms on sq(2)

fn criterion_2() -> Result<(bool, String)> {
    let sq2 = kind(Family::SQ, 2);
    let uea = Uea::new(sq2);
    let e = uea.parse_word("e(1,2)")?[0];
    let big_e = uea.parse_word("E(1,2)")?[0];
    let f = uea.parse_word("f(1,2)")?[0];
    let big_f = uea.parse_word("F(1,2)")?[0];
    let hh = &h(2, 0) - &h(2, 1);
    let hp = &h(2, 0) + &h(2, 1);
    let rep = |g: usize, m: u32| vec![g; m as usize];
    let hc = |w: Vec<usize>| uea.hc_project(&uea.normal_order(&w));
    let mut failures = Vec::new();
    let mut checked = 0;
    for k in 0..=4u32 {
        let kf = Polynomial::constant(2, Rational::from_integer(factorial(k)));
        // h(h-1)…(h-(k-1)) and (h-1)…(h-k)
        let falling = (0..k).fold(Polynomial::one(2), |acc, j| &acc * &(&hh - &c(2, j as i64)));
        let shifted = (1..=k).fold(Polynomial::one(2), |acc, j| &acc * &(&hh - &c(2, j as i64)));
        let k1f = Polynomial::constant(2, Rational::from_integer(factorial(k + 1)));
        let cases: Vec<(&str, Vec<usize>, CliffordElement)> = vec![
            ("e^k f^k", [rep(e, k), rep(f, k)].concat(), CliffordElement::scalar(&kf * &falling)),
            (
                "E e^k f^k F",
                [vec![big_e], rep(e, k), rep(f, k), vec![big_f]].concat(),
                CliffordElement::scalar(&(&kf * &hp) * &shifted),
            ),
            ("E e^k f^(k+1)", [vec![big_e], rep(e, k), rep(f, k + 1)].concat(), odd_times(&k1f * &shifted)),
            ("e^(k+1) f^k F", [rep(e, k + 1), rep(f, k), vec![big_f]].concat(), odd_times(&k1f * &shifted)),
        ];
        for (name, word, expected) in cases {
            checked += 1;
            let got = hc(word);
            if got != expected {
                failures.push(format!("k={k} {name}: got {got}, expected {expected}"));
            }
        }
    }
    let ok = failures.is_empty();
    Ok((ok, if ok { format!("{checked} identities, k = 0..4") } else { failures.join("; ") }))
}

fn odd_times(p: Polynomial) -> CliffordElement {
    let mut out = CliffordElement::zero(2);
    out.add(1, p);
    out
}

// ---------------------------------------------------------------------------
// 3-5. factorization runs

fn runs_of<'a>(runs: &'a [FactorizationRun], f: Family, n: usize) -> impl Iterator<Item = &'a FactorizationRun> {
    runs.iter().filter(move |r| r.kind.family() == f && r.kind.rank() == n)
}

fn criterion_3(runs: &[FactorizationRun]) -> Result<(bool, String)> {
    let mut problems = Vec::new();
    for r in runs {
        match &r.report {
            Ok(rep) if rep.leading_ok && rep.degree_ok => {}
            Ok(rep) => problems.push(format!(
                "{} nu={}: leading {} degree {}",
                r.kind,
                r.nu,
                yes(rep.leading_ok),
                yes(rep.degree_ok)
            )),
            Err(e) => problems.push(format!("{} nu={}: {e}", r.kind, r.nu)),
        }
    }
    // projective kinds: det equals the parent det after h_n := -(h_1+…+h_{n-1})
    for (proj, parent) in [(Family::PQ, Family::Q), (Family::PSQ, Family::SQ)] {
        for r in runs_of(runs, proj, 3) {
            let Some(p) = runs_of(runs, parent, 3).find(|p| p.nu == r.nu) else { continue };
            if let (Ok(rp), Ok(pp)) = (&r.report, &p.report) {
                let projected = match (&rp.det_expanded, &pp.det_expanded) {
                    (Some(a), Some(b)) => r.kind.project(b).map(|b| &b == a).unwrap_or(false),
                    _ => {
                        let mut ok = rp.det.scalar == pp.det.scalar;
                        let mut fs = crate::shapovalov::Factored::one(r.kind.arity());
                        fs.scalar = pp.det.scalar.clone();
                        for (f, m) in &pp.det.factors {
                            fs.push(&r.kind.project(f)?, *m);
                        }
                        ok &= fs.same_up_to_scalar(&rp.det) && fs.scalar == rp.det.scalar;
                        ok
                    }
                };
                if !projected {
                    problems.push(format!("{} nu={}: substitution identity fails", r.kind, r.nu));
                }
            }
        }
    }
    let mut timing = Vec::new();
    let mut slow = false;
    for f in [Family::Q, Family::SQ] {
        let low: Duration = runs_of(runs, f, 3).filter(|r| r.nu.height() <= 2).map(|r| r.elapsed).sum();
        let top: Duration = runs_of(runs, f, 3).filter(|r| r.nu.height() == 3).map(|r| r.elapsed).sum();
        slow |= low > Duration::from_secs(30) || top > Duration::from_secs(600);
        timing.push(format!("{}(3) ht<=2 {:.1} s, ht=3 {:.1} s", f.name(), low.as_secs_f64(), top.as_secs_f64()));
    }
    if slow {
        problems.push("time budget exceeded".into());
    }
    let ok = problems.is_empty();
    let detail = format!("{} runs; {}{}", runs.len(), timing.join("; "), if ok { String::new() } else { format!("; {}", problems.join("; ")) });
    Ok((ok, detail))
}

fn criterion_4(runs: &[FactorizationRun]) -> Result<(bool, String)> {
    let mut problems = Vec::new();
    let mut expanded_checks = 0;
    for r in runs {
        let Ok(rep) = &r.report else {
            problems.push(format!("{} nu={}: no report", r.kind, r.nu));
            continue;
        };
        let power = 1u32 << r.kind.odd_cartan_dim();
        let norm = closed_form_norm(r.kind, &r.nu)?;
        let target = norm.pow(power);
        if rep.scalar.is_zero() || !rep.det.same_up_to_scalar(&target) {
            problems.push(format!("{} nu={}: det {} vs Norm^{power} {}", r.kind, r.nu, rep.det, norm));
            continue;
        }
        if let Some(full) = &rep.det_expanded {
            expanded_checks += 1;
            let lhs = target.expand().scale(&(&rep.det.scalar / &target.scalar));
            if &lhs != full {
                problems.push(format!("{} nu={}: expanded det differs from scalar * Norm^{power}", r.kind, r.nu));
            }
        }
    }
    let ok = problems.is_empty();
    Ok((ok, if ok { format!("{} runs, {expanded_checks} compared as expanded polynomials", runs.len()) } else { problems.join("; ") }))
}

fn criterion_5(runs: &[FactorizationRun]) -> Result<(bool, String)> {
    let mut problems = Vec::new();
    let mut pairs = 0;
    for n in [2, 3] {
        for rq in runs_of(runs, Family::Q, n) {
            let Some(rs) = runs_of(runs, Family::SQ, n).find(|r| r.nu == rq.nu) else { continue };
            match (&rq.report, &rs.report) {
                (Ok(a), Ok(b)) => {
                    pairs += 1;
                    if a.norm.expand() != b.norm.expand() {
                        problems.push(format!("n={n} nu={}: {} vs {}", rq.nu, a.norm, b.norm));
                    }
                }
                _ => problems.push(format!("n={n} nu={}: missing report", rq.nu)),
            }
        }
    }
    let ok = problems.is_empty() && pairs > 0;
    Ok((ok, if ok { format!("{pairs} pairs equal as polynomials") } else { problems.join("; ") }))
}

// ---------------------------------------------------------------------------
// 6. simplicity

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    ratio(rng.gen_range(-12..=12), rng.gen_range(1..=4))
}

/// A random weight, on a random hyperplane about half of the time.
fn random_weight(k: AlgebraKind, rng: &mut ChaCha8Rng) -> Weight {
    let n = k.rank();
    let mut v: Vec<Rational> = (0..n).map(|_| random_rational(rng)).collect();
    let roots = k.positive_roots();
    let fix_trace = |v: &mut Vec<Rational>, free: usize| {
        if k.is_projective() {
            let others: Rational = (0..n).filter(|&i| i != free).map(|i| v[i].clone()).sum();
            v[free] = -others;
        }
    };
    let choice = rng.gen_range(0..4);
    let alpha = *roots.choose(rng).expect("roots");
    let free = (0..n).find(|&i| i != alpha.i && i != alpha.j);
    match choice {
        0 => {
            v[alpha.j] = -v[alpha.i].clone();
        }
        1 => {
            let r = rng.gen_range(1..=5);
            v[alpha.j] = &v[alpha.i] - rat(r);
        }
        _ => {}
    }
    match free {
        Some(f) => fix_trace(&mut v, f),
        None => {
            if k.is_projective() {
                fix_trace(&mut v, n - 1);
            }
        }
    }
    Weight(v)
}

fn criterion_6() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let kinds = [
        kind(Family::Q, 2),
        kind(Family::SQ, 2),
        kind(Family::Q, 3),
        kind(Family::SQ, 3),
        kind(Family::PQ, 3),
        kind(Family::PSQ, 3),
    ];
    let mut problems = Vec::new();
    let mut summary = Vec::new();
    for k in kinds {
        let cutoff = default_cutoff(k);
        let family = MatrixFamily::new(k, cutoff)?;
        let (mut hit, mut total) = (0, 0);
        while total < 50 {
            let lambda = random_weight(k, &mut rng);
            if k.check_weight(&lambda).is_err() {
                continue;
            }
            total += 1;
            let profile = corank_profile(&family, &lambda)?;
            let reachable =
                hyperplanes_through(k, &lambda)?.iter().any(|hp| hp.first_height() <= cutoff);
            let all_zero = profile.values().all(|&c| c == 0);
            if !all_zero {
                hit += 1;
            }
            if all_zero == reachable {
                problems.push(format!("{k} lambda=({lambda}): coranks {:?}", profile.values().collect::<Vec<_>>()));
            }
            for (nu, &corank) in &profile {
                if (corank > 0) != (predicted_order(k, &lambda, nu)? > 0) {
                    problems.push(format!("{k} lambda=({lambda}) nu={nu}: corank {corank}"));
                }
            }
        }
        summary.push(format!("{k}: {total} weights, {hit} degenerate"));
    }
    let ok = problems.is_empty();
    Ok((ok, if ok { summary.join("; ") } else { problems.join("; ") }))
}

// ---------------------------------------------------------------------------
// 7. Jantzen orders

fn subregular_points(
    k: AlgebraKind,
    hp: HyperplaneId,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Weight> {
    let mut out = Vec::new();
    while out.len() < count {
        let free = random_rational(rng);
        let w = match hp {
            HyperplaneId::CorootSum(_) => weight_from_coroots(free, Rational::zero()),
            HyperplaneId::RootInteger(_, r) => weight_from_coroots(rat(r as i64), free),
        };
        if classify_weight(k, &w).ok() == Some(WeightClass::Subregular(hp)) {
            out.push(w);
        }
    }
    out
}

fn criterion_7() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let alpha = Root { i: 0, j: 1 };
    let mut problems = Vec::new();
    let mut points = 0;
    for k in [kind(Family::SQ, 2), kind(Family::Q, 2)] {
        let family = MatrixFamily::new(k, 4)?;
        let rho1 = default_rho_prime(k);
        let rho2 = Weight(vec![rat(1), rat(-2)]);
        let planes = [
            HyperplaneId::CorootSum(alpha),
            HyperplaneId::RootInteger(alpha, 1),
            HyperplaneId::RootInteger(alpha, 2),
            HyperplaneId::RootInteger(alpha, 3),
        ];
        for hp in planes {
            for lambda in subregular_points(k, hp, 5, &mut rng) {
                points += 1;
                let o1 = jantzen_orders(&family, &lambda, &rho1)?;
                let o2 = jantzen_orders(&family, &lambda, &rho2)?;
                let cor = corank_profile(&family, &lambda)?;
                if o1 != o2 {
                    problems.push(format!("{k} {hp} lambda=({lambda}): orders depend on rho'"));
                }
                for (nu, &ord) in &o1 {
                    let predicted = predicted_order(k, &lambda, nu)?;
                    if ord as usize != cor[nu] || u64::from(ord) != predicted {
                        problems.push(format!(
                            "{k} {hp} lambda=({lambda}) nu={nu}: order {ord}, corank {}, predicted {predicted}",
                            cor[nu]
                        ));
                    }
                }
            }
        }
    }
    let ok = problems.is_empty();
    Ok((ok, if ok { format!("{points} subregular points, all nu with ht <= 4, two rho'") } else { problems.join("; ") }))
}

// ---------------------------------------------------------------------------
// 8. Clifford layer

fn random_poly(n: usize, rng: &mut ChaCha8Rng, constant: bool) -> Polynomial {
    let mut p = Polynomial::zero(n);
    let terms = rng.gen_range(1..=3);
    for _ in 0..terms {
        let mut exps = vec![0u32; n];
        if !constant {
            for e in exps.iter_mut() {
                *e = rng.gen_range(0..=1);
            }
        }
        p.add_term(crate::exactalg::Monomial::new(exps), rat(rng.gen_range(-3..=3)));
    }
    p
}

/// A random element of R of the given parity.
fn random_clifford(alg: &CliffordAlgebra, parity: bool, rng: &mut ChaCha8Rng, constant: bool) -> CliffordElement {
    let n = alg.arity();
    let masks: Vec<u32> = (0..1u32 << alg.generators()).filter(|m| (m.count_ones() % 2 == 1) == parity).collect();
    let mut out = CliffordElement::zero(n);
    for _ in 0..3 {
        let m = *masks.choose(rng).expect("masks");
        out.add(m, random_poly(n, rng, constant));
    }
    out
}

fn criterion_8() -> Result<(bool, String)> {
    let mut problems = Vec::new();
    let mut grams = 0;
    for n in 2..=4 {
        for f in [Family::Q, Family::SQ] {
            let k = kind(f, n);
            let g = CliffordAlgebra::for_kind(k).gram_matrix();
            let size = g.rows();
            grams += 1;
            for i in 0..size {
                for j in 0..size {
                    let v = g.get(i, j);
                    let ok = if i + j == size - 1 { v == &c(n, 1) || v == &c(n, -1) } else { v.is_zero() };
                    if !ok {
                        problems.push(format!("{k} gram[{i}][{j}] = {v}"));
                    }
                }
            }
            // t_h = ±h_1…h_n (q) or ±Σ_i Π_{j≠i} h_j (sq)
            let (_, th) = t_h_element(k)?;
            let expected = match f {
                Family::Q => (0..n).fold(Polynomial::one(n), |acc, i| &acc * &h(n, i)),
                _ => (0..n).fold(Polynomial::zero(n), |acc, i| {
                    &acc + &(0..n).filter(|&j| j != i).fold(Polynomial::one(n), |p, j| &p * &h(n, j))
                }),
            };
            if th != expected && th != -&expected {
                problems.push(format!("{k}: t_h = {th}"));
            }
        }
    }
    // ∫[a,b] = 0 and ∫σ(a) = (-1)^N ∫a
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    let algs: Vec<(AlgebraKind, CliffordAlgebra)> = [(Family::Q, 2), (Family::SQ, 2), (Family::Q, 3), (Family::SQ, 3)]
        .into_iter()
        .map(|(f, n)| (kind(f, n), CliffordAlgebra::for_kind(kind(f, n))))
        .collect();
    for t in 0..100 {
        let (k, alg) = &algs[t % algs.len()];
        let n = alg.arity();
        let pa = rng.gen_bool(0.5);
        let pb = rng.gen_bool(0.5);
        let a = random_clifford(alg, pa, &mut rng, false);
        let b = random_clifford(alg, pb, &mut rng, false);
        let comm = alg.supercommutator(&a, &b);
        if !alg.integral(&comm).is_zero() {
            problems.push(format!("{k}: integral of [a,b] is nonzero for a = {a}, b = {b}"));
        }
        let sign = if alg.generators() % 2 == 0 { 1 } else { -1 };
        // constant coefficients: the identity as stated
        let a0 = random_clifford(alg, pa, &mut rng, true);
        if alg.integral(&alg.sigma(&a0)) != alg.integral(&a0).scale(&rat(sign)) {
            problems.push(format!("{k}: integral of sigma({a0})"));
        }
        // polynomial coefficients: σ also acts by h ↦ -h on A
        let neg: Vec<Polynomial> = (0..n).map(|i| -h(n, i)).collect();
        if alg.integral(&alg.sigma(&a)) != alg.integral(&a).compose(&neg)?.scale(&rat(sign)) {
            problems.push(format!("{k}: integral of sigma({a})"));
        }
    }
    let ok = problems.is_empty();
    Ok((ok, if ok { format!("{grams} Gram matrices antidiagonal, t_h for n = 2..4, 100 random pairs") } else { problems.join("; ") }))
}

// ---------------------------------------------------------------------------
// 9. anticentre

fn criterion_9() -> Result<(bool, String)> {
    let q2 = kind(Family::Q, 2);
    let uea = Uea::new(q2);
    let res = invariant_search(q2, 4, true)?;
    let mut target = CliffordElement::zero(2);
    target.add(0b11, &h(2, 0) + &h(2, 1));
    let Some(z) = preimage_of(&res, &target) else {
        return Ok((false, format!("no twisted invariant of degree <= 4 maps to H1H2(h1+h2); {} found", res.basis.len())));
    };
    let hc = uea.hc_project(&z);
    let image_ok = hc == target && !z.is_zero();
    let sq = uea.hc_project(&uea.mul(&z, &z));
    let tg = t_g(q2)?;
    let scalar_part = sq.terms().all(|(m, _)| m == 0);
    let square_ok = scalar_part && proportional(&sq.coeff(0), &tg);
    Ok((
        image_ok && square_ok,
        format!(
            "{} twisted invariants; HC(T) = {hc}; HC(T^2) = {}; t_g = {tg}",
            res.basis.len(),
            sq.coeff(0)
        ),
    ))
}

// ---------------------------------------------------------------------------
// 10. centre

fn elementary(n: usize, m: usize) -> Polynomial {
    let mut out = Polynomial::zero(n);
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize == m {
            out = &out + &(0..n).filter(|i| mask >> i & 1 == 1).fold(Polynomial::one(n), |p, i| &p * &h(n, i));
        }
    }
    out
}

fn criterion_10() -> Result<(bool, String)> {
    let mut problems = Vec::new();
    let mut accepted = 0;
    for n in 2..=4 {
        for f in [Family::Q, Family::SQ, Family::PQ, Family::PSQ] {
            let Ok(k) = AlgebraKind::new(f, n) else { continue };
            let mut candidates = Vec::new();
            for kk in 0..=3u32 {
                let p = (0..n).fold(Polynomial::zero(n), |acc, i| &acc + &h(n, i).pow(2 * kk + 1));
                candidates.push((format!("p_{}", 2 * kk + 1), k.project(&p)?));
            }
            let tg = t_g(k)?;
            for m in 0..=n {
                candidates.push((format!("t_g*e_{m}"), &tg * &k.project(&elementary(n, m))?));
            }
            for (name, p) in candidates {
                let r = z_membership(k, &p)?;
                if r.member {
                    accepted += 1;
                } else {
                    problems.push(format!("{k}: {name} rejected ({})", r.witness.map(|w| w.to_string()).unwrap_or_default()));
                }
            }
        }
    }
    let q2 = kind(Family::Q, 2);
    for (name, p) in [("h1^2+h2^2", &h(2, 0).pow(2) + &h(2, 1).pow(2)), ("h1*h2", &h(2, 0) * &h(2, 1))] {
        if z_membership(q2, &p)?.member {
            problems.push(format!("q(2): {name} accepted"));
        }
    }
    // untwisted search on q(2), degree ≤ 2
    let res = invariant_search(q2, 2, false)?;
    let s = &h(2, 0) + &h(2, 1);
    let expected: Vec<CliffordElement> =
        [Polynomial::one(2), s.clone(), s.pow(2)].into_iter().map(CliffordElement::scalar).collect();
    let filtered: Vec<CliffordElement> = centre_subspace(q2, 2)?.into_iter().map(CliffordElement::scalar).collect();
    let d_search = span_dimension(&res.hc_images);
    let d_union = span_dimension(&[res.hc_images.clone(), expected.clone()].concat());
    let d_filter = span_dimension(&filtered);
    let d_filter_union = span_dimension(&[filtered.clone(), expected.clone()].concat());
    if !(d_search == 3 && d_union == 3 && d_filter == 3 && d_filter_union == 3) {
        problems.push(format!(
            "q(2) degree 2: search span {d_search}, with expected {d_union}, filter {d_filter}, with expected {d_filter_union}"
        ));
    }
    for img in &res.hc_images {
        if img.terms().any(|(m, _)| m != 0) || !z_membership(q2, &img.coeff(0))?.member {
            problems.push(format!("q(2): HC image {img} is not in Z"));
        }
    }
    let ok = problems.is_empty();
    Ok((ok, if ok { format!("{accepted} members accepted, 2 rejected, q(2) degree-2 span has dimension 3") } else { problems.join("; ") }))
}

// ---------------------------------------------------------------------------
// 11. central truncation

fn criterion_11() -> Result<(bool, String)> {
    let sq2 = kind(Family::SQ, 2);
    let mut parts = Vec::new();
    let mut ok = true;
    for phi in [Polynomial::one(2), &h(2, 0).pow(3) + &h(2, 1).pow(3)] {
        match central_truncation(sq2, &phi, &RootVector(vec![3])) {
            Ok(kc) => {
                ok &= kc.residual_zero;
                let nonzero = kc.terms.iter().filter(|t| !t.z.is_zero()).count();
                parts.push(format!("phi = {phi}: {} levels, {nonzero} nonzero, residual zero {}", kc.terms.len(), yes(kc.residual_zero)));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("phi = {phi}: {e}"));
            }
        }
    }
    Ok((ok, parts.join("; ")))
}

// ---------------------------------------------------------------------------
// 12. structural properties

type Combo = BTreeMap<usize, Rational>;

fn combo_bracket(basis: &crate::rootdata::Basis, a: &Combo, b: &Combo) -> Combo {
    let mut out = Combo::new();
    for (&i, ci) in a {
        for (&j, cj) in b {
            for (k, v) in basis.bracket(i, j) {
                let e = out.entry(*k).or_insert_with(Rational::zero);
                *e += ci * cj * v;
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn super_jacobi(k: AlgebraKind) -> usize {
    let basis = crate::rootdata::Basis::new(k);
    let d = basis.len();
    let unit = |i: usize| Combo::from([(i, Rational::one())]);
    let mut bad = 0;
    for a in 0..d {
        for b in 0..d {
            let ab = combo_bracket(&basis, &unit(a), &unit(b));
            for cc in 0..d {
                // [a,[b,c]] = [[a,b],c] + (-1)^{|a||b|}[b,[a,c]]
                let lhs = combo_bracket(&basis, &unit(a), &combo_bracket(&basis, &unit(b), &unit(cc)));
                let mut rhs = combo_bracket(&basis, &ab, &unit(cc));
                let sign = if basis.is_odd(a) && basis.is_odd(b) { -1 } else { 1 };
                for (i, v) in combo_bracket(&basis, &unit(b), &combo_bracket(&basis, &unit(a), &unit(cc))) {
                    let e = rhs.entry(i).or_insert_with(Rational::zero);
                    *e += v * rat(sign);
                }
                rhs.retain(|_, v| !v.is_zero());
                if lhs != rhs {
                    bad += 1;
                }
            }
        }
    }
    bad
}

fn random_word(uea: &Uea, rng: &mut ChaCha8Rng, len: usize) -> Vec<usize> {
    (0..len).map(|_| rng.gen_range(0..uea.dim())).collect()
}

fn word_parity(uea: &Uea, w: &[usize]) -> bool {
    w.iter().filter(|&&g| uea.basis().is_odd(g)).count() % 2 == 1
}

/// Filtration degree of an element of R: polynomial degree plus Clifford length.
fn r_degree(x: &CliffordElement) -> u32 {
    x.terms().map(|(m, p)| p.total_degree().unwrap_or(0) + m.count_ones()).max().unwrap_or(0)
}

/// Kostant partition function from the product Π(1+e^{-α})/(1-e^{-α}), truncated.
fn tau_series(n: usize, max_ht: u32) -> BTreeMap<Vec<u32>, u64> {
    let all = RootVector::up_to_height(n, max_ht);
    let mut coeffs: BTreeMap<Vec<u32>, u64> = all.iter().map(|v| (v.0.clone(), u64::from(v.height() == 0))).collect();
    for r in crate::rootdata::positive_roots(n) {
        let a = r.as_root_vector(n).0;
        let minus = |v: &[u32]| -> Option<Vec<u32>> { v.iter().zip(&a).map(|(x, y)| x.checked_sub(*y)).collect() };
        // multiply by (1 + x^α): descending height so the old value is used
        for v in all.iter().rev() {
            if let Some(w) = minus(&v.0) {
                let add = coeffs[&w];
                *coeffs.get_mut(&v.0).expect("key") += add;
            }
        }
        // divide by (1 - x^α): ascending height
        for v in &all {
            if let Some(w) = minus(&v.0) {
                let add = coeffs[&w];
                *coeffs.get_mut(&v.0).expect("key") += add;
            }
        }
    }
    coeffs
}

fn criterion_12() -> Result<(bool, String)> {
    let mut problems = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 12);

    // super-Jacobi
    for (f, n) in [(Family::Q, 2), (Family::SQ, 2), (Family::Q, 3), (Family::SQ, 3)] {
        let bad = super_jacobi(kind(f, n));
        if bad > 0 {
            problems.push(format!("{}: {bad} super-Jacobi failures", kind(f, n)));
        }
    }

    // σ and the HC degree bound
    for (f, n) in [(Family::Q, 2), (Family::SQ, 2), (Family::Q, 3)] {
        let k = kind(f, n);
        let uea = Uea::new(k);
        for _ in 0..30 {
            let wa = { let len = rng.gen_range(1..=3); random_word(&uea, &mut rng, len) };
            let wb = { let len = rng.gen_range(1..=3); random_word(&uea, &mut rng, len) };
            let a = uea.normal_order(&wa);
            let b = uea.normal_order(&wb);
            let lhs = uea.sigma(&uea.mul(&a, &b));
            let sign = if word_parity(&uea, &wa) && word_parity(&uea, &wb) { -Rational::one() } else { Rational::one() };
            let rhs = uea.mul(&uea.sigma(&b), &uea.sigma(&a)).scale(&sign);
            if lhs != rhs {
                problems.push(format!("{k}: sigma(ab) for a = {}, b = {}", uea.fmt_element(&a), uea.fmt_element(&b)));
            }
            if uea.sigma(&uea.sigma(&a)) != a {
                problems.push(format!("{k}: sigma^2 != id on {}", uea.fmt_element(&a)));
            }
            let w = { let len = rng.gen_range(1..=5); random_word(&uea, &mut rng, len) };
            let count = |pred: fn(Species) -> bool| w.iter().filter(|&&g| pred(uea.basis().gen(g).species)).count() as u32;
            let nm = count(Species::is_negative);
            let np = count(Species::is_positive);
            let n0 = w.len() as u32 - nm - np;
            let hc = uea.hc_project(&uea.normal_order(&w));
            if r_degree(&hc) > nm.min(np) + n0 {
                problems.push(format!("{k}: deg HC of word {w:?} is {}", r_degree(&hc)));
            }
        }
    }

    // τ against the generating function; partition sums
    for n in 2..=4 {
        let series = tau_series(n, 6);
        for nu in RootVector::up_to_height(n, 6) {
            if tau(&nu) != series[&nu.0] {
                problems.push(format!("tau({nu}) = {} but the series gives {}", tau(&nu), series[&nu.0]));
            }
            let parts = partitions(&nu);
            for (idx, alpha) in crate::rootdata::positive_roots(n).into_iter().enumerate() {
                let sum_even: u64 = parts.iter().map(|p| u64::from(p.even[idx])).sum();
                let sum_odd: u64 = parts.iter().map(|p| u64::from(p.odd[idx])).sum();
                let rhs_even: u64 = (1..=6).filter_map(|m| nu.checked_sub(&alpha.as_root_vector(n), m)).map(|v| tau(&v)).sum();
                let shifted = nu.checked_sub(&alpha.as_root_vector(n), 1);
                let rhs_odd = shifted.map(|v| tau_alpha(&v, alpha)).unwrap_or(0);
                if sum_even != rhs_even || sum_odd != rhs_odd || sum_odd != tau(&nu) - tau_alpha(&nu, alpha) {
                    problems.push(format!("partition sums at nu={nu}, alpha={alpha}"));
                }
            }
        }
    }

    // reordering the bases multiplies det by the permutation signs
    let sq2 = kind(Family::SQ, 2);
    let uea = Uea::new(sq2);
    for m in 0..=3u32 {
        let sm = shapovalov_matrix(&uea, sq2, &RootVector(vec![m]))?;
        let det = det_fraction_free(&sm.matrix)?;
        let size = sm.size();
        for _ in 0..3 {
            let mut pr: Vec<usize> = (0..size).collect();
            let mut pc: Vec<usize> = (0..size).collect();
            pr.shuffle(&mut rng);
            pc.shuffle(&mut rng);
            let rows: Vec<Vec<Polynomial>> = pr.iter().map(|&i| pc.iter().map(|&j| sm.matrix.get(i, j).clone()).collect()).collect();
            let permuted = det_fraction_free(&PolyMatrix::from_rows(2, rows)?)?;
            let sign = permutation_sign(&pr) * permutation_sign(&pc);
            if permuted != det.scale(&rat(sign)) {
                problems.push(format!("sq(2) nu={m}: reordered det"));
            }
        }
        let report = verify_factorization(&uea, sq2, &RootVector(vec![m]))?;
        if report.det_expanded.as_ref() != Some(&det) {
            problems.push(format!("sq(2) nu={m}: block det differs from the full det"));
        }
    }

    let ok = problems.is_empty();
    Ok((ok, if ok { "super-Jacobi, sigma, HC degree, tau and partition sums, basis reordering".into() } else { problems.join("; ") }))
}
