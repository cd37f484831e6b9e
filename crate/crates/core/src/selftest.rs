//! Invariant suites run by `stoplat selftest`.

use rand::Rng;

use crate::instance::Instance;
use crate::rieszcore::{rv_decompose, rv_interpolate};
use crate::search::generate::{
    instance_rng, random_admitted, random_filtration, random_grid_time, FiltrationShape,
};
use crate::search::hunt::{generate_instance, hunt, replay, HuntConfig};
use crate::search::oracle::{
    canonical_decomposition, cone_interpolants, decompositions, dense_admits, max_minorant,
    pointwise_min,
};
use crate::search::{
    decompose_stopping, interpolate_cone, max_stopping_minorant, Caps, Grid, SearchOutcome,
};
use crate::space::Partition;
use crate::times::{is_member_x, RandomTime, RealRv, TimeKind};
use crate::value::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checks: u64,
    pub failures: Vec<String>,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        SuiteResult { name, checks: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failures.len() < 10 {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub type Suite = fn(u64) -> SuiteResult;

pub const SUITES: [(&str, Suite); 6] = [
    ("space", space_suite),
    ("times", times_suite),
    ("rieszcore", rieszcore_suite),
    ("search", search_suite),
    ("instance", instance_suite),
    ("hunt", hunt_suite),
];

pub fn run_all(seed: u64) -> Vec<SuiteResult> {
    SUITES.iter().map(|(_, suite)| suite(seed)).collect()
}

fn shape(max_omega: usize, max_breakpoints: usize, q: i64, max: i64) -> FiltrationShape {
    FiltrationShape {
        max_omega,
        max_breakpoints,
        grid: Grid::new(q, Rational::from_integer(max), false).expect("valid grid"),
        allow_exclusive: true,
    }
}

/// Lattice laws of the partition lattice and consistency of refinement.
pub fn space_suite(_seed: u64) -> SuiteResult {
    let mut r = SuiteResult::new("space");
    for m in 1..=4 {
        let all = Partition::all(m);
        for a in &all {
            for b in &all {
                let join = a.join(b).unwrap();
                let meet = a.meet(b).unwrap();
                r.check(join == b.join(a).unwrap() && meet == b.meet(a).unwrap(), || {
                    format!("join/meet not commutative on |Ω|={m}")
                });
                r.check(a.join(&a.meet(b).unwrap()).unwrap() == *a, || {
                    format!("absorption a ∨ (a ∧ b) = a fails on |Ω|={m}")
                });
                r.check(a.meet(&join).unwrap() == *a, || {
                    format!("absorption a ∧ (a ∨ b) = a fails on |Ω|={m}")
                });
                r.check(join.refines(a).unwrap() && a.refines(&meet).unwrap(), || {
                    format!("join/meet not bounds on |Ω|={m}")
                });
                r.check(a.refines(b).unwrap() == (a.join(b).unwrap() == *a), || {
                    format!("refinement disagrees with join on |Ω|={m}")
                });
            }
        }
    }
    r
}

/// Closure of admitted times under the lattice and cone operations, and
/// agreement of the predicates with the dense oracle.
pub fn times_suite(seed: u64) -> SuiteResult {
    let mut r = SuiteResult::new("times");
    let sh = shape(5, 4, 4, 2);
    let with_inf = sh.grid.with_infinity(true);
    let scalars = [Rational::from_integer(1), Rational::new(3, 2), Rational::from_integer(2)];
    for i in 0..300 {
        let mut rng = instance_rng(seed ^ 0x7469_6d65, i);
        let f = random_filtration(&mut rng, &sh);
        for kind in [TimeKind::Stopping, TimeKind::Optional] {
            let s = random_admitted(&mut rng, &f, &with_inf, kind, 0.2);
            let t = random_admitted(&mut rng, &f, &with_inf, kind, 0.2);
            let lambda = scalars[rng.random_range(0..scalars.len())];
            for (op, out) in [
                ("meet", s.meet(&t).unwrap()),
                ("join", s.join(&t).unwrap()),
                ("add", s.add(&t).unwrap()),
                ("scale", s.scale(lambda).unwrap()),
                ("truncate", s.truncate(rng.random_range(1..=3)).unwrap()),
            ] {
                r.check(kind.admits(&out, &f).unwrap(), || {
                    format!("{op} of {} times ({s}), ({t}) is not {} time", kind.name(), kind.name())
                });
            }
            if s.is_finite() && t.is_finite() {
                let (x, y) = (s.to_real().unwrap(), t.to_real().unwrap());
                r.check(
                    is_member_x(&x.meet(&y).unwrap(), &f, kind).unwrap()
                        && is_member_x(&x.join(&y).unwrap(), &f, kind).unwrap(),
                    || format!("X not closed under ∧/∨ for ({s}), ({t})"),
                );
            }
        }
        let u = random_grid_time(&mut rng, f.size(), &with_inf, 0.2);
        let stopping = TimeKind::Stopping.admits(&u, &f).unwrap();
        let optional = TimeKind::Optional.admits(&u, &f).unwrap();
        r.check(stopping == dense_admits(&u, &f, TimeKind::Stopping), || {
            format!("stopping predicate disagrees with the dense check on ({u})")
        });
        r.check(optional == dense_admits(&u, &f, TimeKind::Optional), || {
            format!("optional predicate disagrees with the dense check on ({u})")
        });
        r.check(!stopping || optional, || format!("stopping but not optional: ({u})"));
        if !f.has_exclusive() {
            r.check(stopping == optional, || {
                format!("optional and stopping differ on an inclusive filtration: ({u})")
            });
        }
    }
    r
}

/// Exactness of the plain Riesz decomposition and interpolation.
pub fn rieszcore_suite(seed: u64) -> SuiteResult {
    let mut r = SuiteResult::new("rieszcore");
    for i in 0..500 {
        let mut rng = instance_rng(seed ^ 0x7269_6573, i);
        let m = rng.random_range(1..=5);
        let n = rng.random_range(1..=3);
        let mut rv = |lo: i64, hi: i64| -> RealRv {
            RealRv::new((0..m).map(|_| Rational::new(rng.random_range(lo..=hi), 2)).collect()).unwrap()
        };
        let bounds: Vec<RealRv> = (0..n).map(|_| rv(0, 6)).collect();
        let total = bounds.iter().fold(RealRv::zero(m), |acc, y| acc.add(y).unwrap());
        let x = rv(0, 6).meet(&total).unwrap();
        match rv_decompose(&x, &bounds) {
            Ok(d) => r.check(d.is_valid(), || format!("invalid decomposition of ({x})")),
            Err(e) => r.check(false, || format!("decomposition of ({x}) failed: {e}")),
        }
        let lower: Vec<RealRv> = (0..n).map(|_| rv(-4, 0)).collect();
        let upper: Vec<RealRv> = (0..n).map(|_| rv(0, 4)).collect();
        let z = rv_interpolate(&lower, &upper).unwrap();
        r.check(
            lower.iter().all(|a| a.le(&z).unwrap()) && upper.iter().all(|b| z.le(b).unwrap()),
            || format!("interpolant ({z}) out of bounds"),
        );
    }
    r
}

/// Searches against the brute-force oracles.
pub fn search_suite(seed: u64) -> SuiteResult {
    let mut r = SuiteResult::new("search");
    let sh = shape(3, 3, 2, 1);
    let grid = sh.grid.with_infinity(true);
    let caps = Caps::default();
    for i in 0..150 {
        let mut rng = instance_rng(seed ^ 0x7365_6172, i);
        let f = random_filtration(&mut rng, &sh);
        let kind = if rng.random_bool(0.5) { TimeKind::Stopping } else { TimeKind::Optional };

        let u = random_grid_time(&mut rng, f.size(), &grid, 0.2);
        let fast = max_stopping_minorant(&u, &f, kind).unwrap();
        let slow = max_minorant(&u, &f, &grid, kind, caps).unwrap();
        r.check(fast == slow, || format!("minorant of ({u}) is ({fast}), oracle ({slow})"));

        let t1 = random_admitted(&mut rng, &f, &grid, kind, 0.2);
        let t2 = random_admitted(&mut rng, &f, &grid, kind, 0.2);
        let bound = t1.add(&t2).unwrap();
        let s = max_stopping_minorant(&crate::search::generate::random_grid_time_below(&mut rng, &bound, &grid), &f, kind)
            .unwrap();
        let parts = [t1, t2];
        let all = decompositions(&s, &parts, &f, &grid, kind, caps).unwrap();
        match decompose_stopping(&s, &parts, &f, &grid, kind) {
            SearchOutcome::Found(d) => r.check(Some(&d.parts) == canonical_decomposition(&all), || {
                format!("decomposition of ({s}) is not the canonical oracle one")
            }),
            SearchOutcome::NotFoundOnGrid(_) => {
                r.check(all.is_empty(), || format!("search missed a decomposition of ({s})"))
            }
            SearchOutcome::PreconditionFailed(p) => {
                r.check(false, || format!("unexpected precondition failure: {p}"))
            }
        }

        let a = random_admitted(&mut rng, &f, &sh.grid, kind, 0.0);
        let b = a.add(&random_admitted(&mut rng, &f, &sh.grid, kind, 0.0)).unwrap();
        let cone_grid = Grid::covering(2, [&a, &b]).unwrap();
        let all = cone_interpolants(
            std::slice::from_ref(&a),
            std::slice::from_ref(&b),
            &f,
            &cone_grid,
            kind,
            caps,
        )
        .unwrap();
        let out = interpolate_cone(std::slice::from_ref(&a), std::slice::from_ref(&b), &f, &cone_grid, kind);
        r.check(out.found() == pointwise_min(&all).as_ref(), || {
            format!("cone interpolation between ({a}) and ({b}) disagrees with the oracle")
        });
    }
    r
}

/// Canonical emission round-trips.
pub fn instance_suite(seed: u64) -> SuiteResult {
    let mut r = SuiteResult::new("instance");
    let config = HuntConfig { seed, ..HuntConfig::default() };
    for i in 0..200 {
        let inst = generate_instance(&config, i).expect("generation succeeds");
        let text = inst.emit();
        match Instance::parse(&text) {
            Ok(back) => r.check(back == inst && back.emit() == text, || {
                format!("instance {i} does not round-trip")
            }),
            Err(e) => r.check(false, || format!("instance {i} fails to parse: {e}")),
        }
    }
    r
}

/// Hunter determinism across thread counts, and replay of flagged entries.
pub fn hunt_suite(seed: u64) -> SuiteResult {
    let mut r = SuiteResult::new("hunt");
    let base = HuntConfig { seed, instances: 80, ..HuntConfig::default() };
    let one = hunt(&HuntConfig { threads: 1, ..base.clone() }).map(|h| h.to_text());
    let many = hunt(&HuntConfig { threads: 3, ..base }).map(|h| h.to_text());
    match (one, many) {
        (Ok(a), Ok(b)) => {
            r.check(a == b, || "report depends on the thread count".into());
            match replay(&a) {
                Ok(replays) => {
                    for rep in replays {
                        r.check(rep.matches(), || {
                            format!("flagged {} {} does not replay", rep.id, rep.property.name())
                        });
                    }
                }
                Err(e) => r.check(false, || format!("replay failed: {e}")),
            }
        }
        (Err(e), _) | (_, Err(e)) => r.check(false, || format!("hunt failed: {e}")),
    }
    r
}

/// Times from a list checked against both predicates and the dense oracle;
/// shared with the command-line `oracle` command.
pub fn dense_agreement(times: &[RandomTime], f: &crate::space::Filtration) -> Vec<String> {
    let mut out = Vec::new();
    for t in times {
        for kind in [TimeKind::Stopping, TimeKind::Optional] {
            let fast = kind.admits(t, f).unwrap_or(false);
            if fast != dense_admits(t, f, kind) {
                out.push(format!("({t}): {} predicate {fast}, dense check {}", kind.name(), !fast));
            }
        }
    }
    out
}
