//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::collections::BTreeMap;
use std::time::Instant;

use odeinv::compare::{
    self, check_weights, classify, corpus, fixed_maps, random_affine, verify_identities, CheckOptions, NamedOde,
    Verdict,
};
use odeinv::expr::{Env, RatFunc};
use odeinv::ode::Ode;
use odeinv::report::{IdentityReport, Status};
use odeinv::sample::Sampler;
use odeinv::{sd, Plain, Rational};
use odeinv_cli::{run, RunReport};

const SEED: u64 = 0;
const TRIALS: usize = 25;
const DEGREE: u32 = 2;
/// Relative tolerance of every numeric comparison.
const TOLERANCE: f64 = 1e-9;
/// Sample points of numeric comparisons.
const POINTS: usize = 100;
const AFFINE_MAPS: usize = 10;

fn opts() -> CheckOptions {
    CheckOptions {
        seed: SEED,
        tolerance: TOLERANCE,
        points: POINTS,
    }
}

/// Integer polynomials in `x, y`, kept apart from the library's own
/// arithmetic.
#[derive(Clone, Debug, Default, PartialEq)]
struct P(BTreeMap<(u32, u32), i64>);

impl P {
    fn mono(c: i64, i: u32, j: u32) -> P {
        let mut m = BTreeMap::new();
        if c != 0 {
            m.insert((i, j), c);
        }
        P(m)
    }
    fn c(c: i64) -> P {
        P::mono(c, 0, 0)
    }
    fn add(&self, o: &P) -> P {
        let mut m = self.0.clone();
        for (k, v) in &o.0 {
            *m.entry(*k).or_insert(0) += v;
        }
        m.retain(|_, v| *v != 0);
        P(m)
    }
    fn k(&self, s: i64) -> P {
        P(self.0.iter().map(|(k, v)| (*k, v * s)).filter(|(_, v)| *v != 0).collect())
    }
    fn sub(&self, o: &P) -> P {
        self.add(&o.k(-1))
    }
    fn mul(&self, o: &P) -> P {
        let mut acc = P::default();
        for ((i, j), a) in &self.0 {
            for ((k, l), b) in &o.0 {
                acc = acc.add(&P::mono(a * b, i + k, j + l));
            }
        }
        acc
    }
    fn dx(&self) -> P {
        let mut acc = P::default();
        for ((i, j), a) in &self.0 {
            if *i > 0 {
                acc = acc.add(&P::mono(a * *i as i64, i - 1, *j));
            }
        }
        acc
    }
    fn dy(&self) -> P {
        let mut acc = P::default();
        for ((i, j), a) in &self.0 {
            if *j > 0 {
                acc = acc.add(&P::mono(a * *j as i64, *i, j - 1));
            }
        }
        acc
    }
    fn at(&self, x: i64, y: i64) -> i64 {
        self.0.iter().map(|((i, j), a)| a * x.pow(*i) * y.pow(*j)).sum()
    }
}

/// `A`, `B` and `F⁵` from their defining formulas.
fn oracle(p: &P, q: &P, r: &P, s: &P) -> (P, P, P) {
    let a = p.dy().dy().sub(&q.dx().dy().k(2)).add(&r.dx().dx())
        .add(&p.mul(&s.dx()).k(2)).add(&s.mul(&p.dx()))
        .sub(&p.mul(&r.dy()).k(3)).sub(&r.mul(&p.dy()).k(3))
        .sub(&q.mul(&r.dx()).k(3)).add(&q.mul(&q.dy()).k(6));
    let b = s.dx().dx().sub(&r.dx().dy().k(2)).add(&q.dy().dy())
        .sub(&s.mul(&p.dy()).k(2)).sub(&p.mul(&s.dy()))
        .add(&s.mul(&q.dx()).k(3)).add(&q.mul(&s.dx()).k(3))
        .add(&r.mul(&q.dy()).k(3)).sub(&r.mul(&r.dx()).k(6));
    let (ab, a2, b2) = (a.mul(&b), a.mul(&a), b.mul(&b));
    let f5 = ab.mul(&a.dy()).add(&ab.mul(&b.dx()))
        .sub(&a2.mul(&b.dy())).sub(&b2.mul(&a.dx()))
        .sub(&p.mul(&b2).mul(&b)).add(&q.mul(&a).mul(&b2).k(3))
        .sub(&r.mul(&a2).mul(&b).k(3)).add(&s.mul(&a2).mul(&a));
    (a, b, f5)
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Whether `core` and `oracle` agree on a grid large enough to separate
/// polynomials of the degrees involved.
fn agrees(core: &RatFunc, oracle: &P) -> bool {
    (-6..=6).all(|x| {
        (-6..=6).all(|y| core.eval(&Env::new(int(x), int(y))).ok() == Some(int(oracle.at(x, y))))
    })
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Every report in `group` passes, with `exact` demanding an exact zero.
fn tally(group: &[&IdentityReport], exact: bool) -> Outcome {
    let bad: Vec<&str> = group
        .iter()
        .filter(|r| match r.status {
            Status::ExactZero => false,
            Status::NumericZero { .. } => exact,
            Status::Failed => true,
        })
        .map(|r| r.name.as_str())
        .collect();
    let exact = group.iter().filter(|r| matches!(r.status, Status::ExactZero)).count();
    let numeric = group.iter().filter(|r| matches!(r.status, Status::NumericZero { .. })).count();
    let detail = format!(
        "{} residuals, {exact} exact, {numeric} numeric, {} rejected{}",
        group.len(),
        bad.len(),
        bad.first().map(|n| format!(" (first: {n})")).unwrap_or_default()
    );
    outcome(bad.is_empty() && !group.is_empty(), detail)
}

const LEMMAS: [&str; 8] = [
    "beta1 = A",
    "beta2 = B",
    "J0 = -F^5",
    "Gamma0 = -H",
    "Gamma1 = G",
    "3 J0 = beta2 Gamma0 - beta1 Gamma1",
    "3 F^5 = B H + A G",
    "I6 by both explicit formulas",
];

const RELATIONS: [&str; 12] = [
    "I2 = 1/3",
    "I1 = -4 I6",
    "I4 = 4 I6",
    "I5 = -I8",
    "I5 = I3 - L",
    "I6 = -I1 + K",
    "L = I3 + I8",
    "K = -3 I6",
    "Omega1 = L",
    "Omega2 = -K",
    "(8 IB1 - IB4)/5 = Omega1",
    "IB3/5 = Omega2",
];

const CROSSWALK: [&str; 8] = [
    "IB3 = 15 I6",
    "IB1 = I3 + 14/5 I8",
    "IB4 = 3 I3 + 87/5 I8",
    "IB2 = -I7 - 3 D1(I8) + 15 D2(I6) + (24 I8 + 15 I3) I6",
    "I6 = IB3/15",
    "I3 = 29/15 IB1 - 14/45 IB4",
    "I8 = IB4/9 - IB1/3",
    "I7 = -IB2 - D1(IB4)/3 + D1(IB1) + D2(IB3) + (21 IB1 - 2 IB4) IB3/15",
];

struct Suite {
    members: Vec<(NamedOde, Vec<IdentityReport>, bool)>,
}

impl Suite {
    fn pick(&self, keep: impl Fn(&str) -> bool) -> Vec<&IdentityReport> {
        self.members
            .iter()
            .flat_map(|(_, r, _)| r.iter())
            .filter(|r| keep(&r.name))
            .collect()
    }

    /// General-position members missing any of `names`.
    fn missing(&self, names: &[&str]) -> usize {
        self.members
            .iter()
            .filter(|(_, r, general)| *general && names.iter().any(|n| !r.iter().any(|x| x.name == *n)))
            .count()
    }

    fn general(&self) -> usize {
        self.members.iter().filter(|m| m.2).count()
    }
}

fn identity_suite() -> Suite {
    let o = opts();
    let members = corpus(SEED, TRIALS, DEGREE)
        .into_iter()
        .map(|m| {
            let reports = verify_identities(&m.ode, &o);
            let general = !sd::core(&Plain, &m.ode).f5.is_zero();
            (m, reports, general)
        })
        .collect();
    Suite { members }
}

fn criterion_1(s: &Suite) -> Outcome {
    let t = tally(&s.pick(|n| LEMMAS.contains(&n)), true);
    let (plain, general) = LEMMAS.split_at(7);
    let complete = s.members.iter().all(|(_, r, _)| plain.iter().all(|n| r.iter().any(|x| x.name == *n)));
    outcome(t.pass && complete && s.missing(general) == 0, format!("{} equations, {}", s.members.len(), t.detail))
}

fn criterion_2(s: &Suite) -> Outcome {
    let t = tally(&s.pick(|n| RELATIONS.contains(&n)), true);
    let missing = s.missing(&RELATIONS);
    outcome(
        t.pass && missing == 0 && s.general() > 0,
        format!("{} in general position, {missing} incomplete, {}", s.general(), t.detail),
    )
}

fn criterion_3(s: &Suite) -> Outcome {
    let t = tally(&s.pick(|n| CROSSWALK.contains(&n)), false);
    let missing = s.missing(&CROSSWALK);
    outcome(t.pass && missing == 0, format!("{missing} incomplete, {}", t.detail))
}

fn criterion_4(s: &Suite) -> Outcome {
    let group = s.pick(|n| n.ends_with(" via connection"));
    let t = tally(&group, true);
    let per_member = 10;
    outcome(t.pass && group.len() == per_member * s.general(), t.detail)
}

fn criterion_5() -> Outcome {
    let o = opts();
    let mut sampler = Sampler::new(SEED);
    let mut maps: Vec<(String, _)> = (0..AFFINE_MAPS)
        .map(|i| (format!("affine-{i}"), random_affine(&mut sampler)))
        .collect();
    maps.extend(fixed_maps());
    let mut odes = corpus(SEED + 1, 2, DEGREE);
    odes.truncate(2);
    odes.push(compare::fixed_examples().swap_remove(1));
    let required = ["I3", "I6", "I7", "I8", "L", "K"];
    let mut all = Vec::new();
    let mut problems = Vec::new();
    for (name, t) in &maps {
        for m in &odes {
            match check_weights(&m.ode, t, &o) {
                Ok(r) => {
                    for need in required {
                        let want = format!("{need} agrees at matched points");
                        if !r.iter().any(|x| x.name == want) {
                            problems.push(format!("{name} on {}: no {need}", m.name));
                        }
                    }
                    for need in ["F^5", "(A, B)", "(-H, G)", "classification preserved"] {
                        if !r.iter().any(|x| x.name.contains(need)) {
                            problems.push(format!("{name} on {}: no check of {need}", m.name));
                        }
                    }
                    all.extend(r);
                }
                Err(e) => problems.push(format!("{name} on {}: {e}", m.name)),
            }
        }
    }
    let refs: Vec<&IdentityReport> = all.iter().collect();
    let t = tally(&refs, false);
    outcome(
        t.pass && problems.is_empty(),
        format!(
            "{} maps x {} equations, {}{}",
            maps.len(),
            odes.len(),
            t.detail,
            problems.first().map(|p| format!("; {p}")).unwrap_or_default()
        ),
    )
}

fn criterion_6() -> Outcome {
    let o = opts();
    let zero = P::default();
    let mut notes = Vec::new();
    let mut pass = true;
    let mut check = |ok: bool, what: &str| {
        if !ok {
            pass = false;
            notes.push(what.to_string());
        }
    };

    let c = classify(&Ode::zero(), None, &o);
    check(matches!(c, Ok(ref c) if c.verdict == Verdict::MaximalDegeneration), "y'' = 0 not maximally degenerate");

    let ode = Ode::parse("1", "0", "0", "x^2").expect("parses");
    let (a, b, f5) = oracle(&P::c(1), &zero, &zero, &P::mono(1, 2, 0));
    let core = sd::core(&Plain, &ode);
    check(agrees(&core.a, &a) && agrees(&core.b, &b) && agrees(&core.f5, &f5), "A, B, F^5 differ from the oracle");
    check(f5.at(0, 0) == -24, "oracle F^5(0,0) is not -24");
    let c = classify(&ode, None, &o);
    let want = Verdict::GeneralPositionAt {
        x: int(0),
        y: int(0),
        f5: odeinv::expr::Value::Exact(int(-24)),
    };
    check(matches!(c, Ok(ref c) if c.verdict == want && !c.probabilistic), "y'' = 1 + x^2 y'^3 verdict");

    let ode = Ode::parse("y^2", "0", "0", "0").expect("parses");
    let (a, _, f5) = oracle(&P::mono(1, 0, 2), &zero, &zero, &zero);
    let core = sd::core(&Plain, &ode);
    check(a == P::c(2) && f5 == zero, "oracle A = 2, F^5 = 0 fails");
    check(agrees(&core.a, &a) && core.f5.is_zero(), "A or F^5 differ from the oracle");
    let c = classify(&ode, None, &o);
    check(matches!(c, Ok(ref c) if c.verdict == Verdict::OtherCase), "y'' = y^2 not in the other case");

    outcome(pass, if notes.is_empty() { "3 examples".to_string() } else { notes.join("; ") })
}

fn criterion_7() -> Outcome {
    match odeinv::special::verify_all() {
        Ok(r) => {
            let refs: Vec<&IdentityReport> = r.iter().collect();
            let t = tally(&refs, true);
            let rewrite = r.iter().any(|x| x.name.contains("before the S_{3.0} rule"));
            outcome(t.pass && rewrite, t.detail)
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn criterion_8() -> Outcome {
    let dir = std::env::temp_dir().join(format!("odeinv-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let ode = dir.join("cubic.ode");
    std::fs::write(&ode, "P = 1\nQ = 0\nR = 0\nS = x^2\n").expect("write");
    let ode = ode.to_str().expect("utf-8 path").to_string();
    let commands: Vec<Vec<&str>> = vec![
        vec!["odeinv", "--format", "json", "--seed", "11", "fuzz", "--trials", "2"],
        vec!["odeinv", "--format", "json", "--seed", "11", "compare", &ode],
        vec!["odeinv", "--format", "json", "invariants", &ode, "--point", "1/2,3"],
    ];
    let mut notes = Vec::new();
    for args in &commands {
        let (a, b) = (run(args.clone()), run(args.clone()));
        if a.code != 0 || a.stdout.is_empty() || a.stdout != b.stdout {
            notes.push(format!("{} differs or fails", args.join(" ")));
        }
        match serde_json::from_str::<RunReport>(&a.stdout) {
            Ok(r) if serde_json::to_string_pretty(&r).map(|s| s + "\n").ok() == Some(a.stdout.clone()) => {}
            _ => notes.push("report does not round-trip".into()),
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    outcome(notes.is_empty(), if notes.is_empty() { format!("{} commands run twice", commands.len()) } else { notes.join("; ") })
}

fn main() {
    let start = Instant::now();
    let suite = identity_suite();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("identity suite exact on the corpus", Box::new(|| criterion_1(&suite))),
        ("scalar relations exact with F adjoined", Box::new(|| criterion_2(&suite))),
        ("crosswalk between the two families", Box::new(|| criterion_3(&suite))),
        ("connection route equals explicit formulas", Box::new(|| criterion_4(&suite))),
        ("transformation laws", Box::new(criterion_5)),
        ("classification examples", Box::new(criterion_6)),
        ("special coordinates suite", Box::new(criterion_7)),
        ("deterministic JSON reports", Box::new(criterion_8)),
    ];
    println!("tolerance {TOLERANCE:e}, {POINTS} points, seed {SEED}, {TRIALS} random equations of degree {DEGREE}");
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        failed += usize::from(!o.pass);
        println!("{} {}. {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("{} of {} criteria passed in {:.1?}", criteria.len() - failed, criteria.len(), start.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
