//! Acceptance criteria, one line of output each.
//!
//! Every expected value comes from brute-force enumeration or from the
//! definitions directly; nothing here calls the search code to check itself.

use std::collections::HashMap;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;

use stoplat::rieszcore::rv_decompose;
use stoplat::search::generate::{
    all_filtrations, instance_rng, random_admitted, random_filtration, random_grid_time,
    random_grid_time_below, FiltrationShape,
};
use stoplat::search::hunt::replay;
use stoplat::search::oracle::{cone_interpolants, dense_admits, max_minorant_from};
use stoplat::search::{
    decompose_stopping, enumerate_stopping_times, interpolate_cone, interpolate_pointwise,
    max_stopping_minorant, Caps, Grid, SearchOutcome,
};
use stoplat::times::{leq, OrderKind};
use stoplat::{
    Boundary, Filtration, FiltrationEntry, Partition, RandomTime, Rational, RealRv, SampleSpace, Time,
    TimeKind,
};

const SEED: u64 = 20_240_601;

const BUDGET_CONE_CLOSURE: Duration = Duration::from_secs(10);
const BUDGET_TRUNCATION: Duration = Duration::from_secs(5);
const BUDGET_RIESZ: Duration = Duration::from_secs(30);
const BUDGET_MINORANT: Duration = Duration::from_secs(60);
const BUDGET_DECOMPOSE: Duration = Duration::from_secs(120);
const BUDGET_SPLIT: Duration = Duration::from_secs(10);
const BUDGET_INTERPOLATION: Duration = Duration::from_secs(60);
const BUDGET_OPTIONAL: Duration = Duration::from_secs(5);
const BUDGET_HUNT: Duration = Duration::from_secs(600);

/// Pass/fail for one criterion with a one-line explanation.
struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict { ok, detail: detail.into() }
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

fn grid(q: i64, max: i64, inf: bool) -> Grid {
    Grid::new(q, int(max), inf).unwrap()
}

fn late_split(first: Partition, boundary: Boundary) -> Filtration {
    Filtration::new(
        SampleSpace::new(["a", "b"]).unwrap(),
        vec![
            FiltrationEntry { time: int(0), partition: first, boundary: Boundary::Inclusive },
            FiltrationEntry { time: int(1), partition: Partition::discrete(2), boundary },
        ],
    )
    .unwrap()
}

fn t(s: &str) -> RandomTime {
    s.parse().unwrap()
}

/// Tally of failures with the first witness kept.
#[derive(Default)]
struct Failures {
    checked: u64,
    failed: u64,
    first: Option<String>,
}

impl Failures {
    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.first.is_none() {
                self.first = Some(witness());
            }
        }
    }

    fn ok(&self) -> bool {
        self.failed == 0
    }

    fn summary(&self) -> String {
        match &self.first {
            None => format!("{}/{} pass", self.checked, self.checked),
            Some(w) => format!("{}/{} fail, first: {w}", self.failed, self.checked),
        }
    }
}

fn cone_closure() -> Verdict {
    let shape = FiltrationShape {
        max_omega: 6,
        max_breakpoints: 4,
        grid: grid(4, 2, false),
        allow_exclusive: true,
    };
    let with_inf = shape.grid.with_infinity(true);
    let ops = ["meet", "join", "add", "scale"];
    let mut tallies: Vec<Failures> = ops.iter().map(|_| Failures::default()).collect();
    for i in 0..1000 {
        let mut rng = instance_rng(SEED, i);
        let f = random_filtration(&mut rng, &shape);
        for kind in [TimeKind::Stopping, TimeKind::Optional] {
            let s = random_admitted(&mut rng, &f, &with_inf, kind, 0.15);
            let u = random_admitted(&mut rng, &f, &with_inf, kind, 0.15);
            let lambda = Rational::new(rng.random_range(1..=4), rng.random_range(1..=4));
            let outputs = [
                s.meet(&u).unwrap(),
                s.join(&u).unwrap(),
                s.add(&u).unwrap(),
                s.scale(lambda).unwrap(),
            ];
            for ((op, out), tally) in ops.iter().zip(&outputs).zip(&mut tallies) {
                tally.check(kind.admits(out, &f).unwrap(), || {
                    let arg = if *op == "scale" { format!("{lambda}·({s})") } else { format!("({s}), ({u})") };
                    format!("{} {op} {arg} = ({out}) on instance {i}", kind.name())
                });
            }
        }
    }
    let ok = tallies.iter().all(Failures::ok);
    let detail: Vec<String> =
        ops.iter().zip(&tallies).map(|(op, t)| format!("{op}: {}", t.summary())).collect();
    verdict(ok, detail.join("; "))
}

fn truncation() -> Verdict {
    let shape = FiltrationShape {
        max_omega: 6,
        max_breakpoints: 4,
        grid: grid(4, 3, false),
        allow_exclusive: true,
    };
    let with_inf = shape.grid.with_infinity(true);
    let mut fails = Failures::default();
    for i in 0..1000 {
        let mut rng = instance_rng(SEED ^ 2, i);
        let f = random_filtration(&mut rng, &shape);
        let kind = TimeKind::Stopping;
        let t1 = random_admitted(&mut rng, &f, &with_inf, kind, 0.15);
        let t2 = random_admitted(&mut rng, &f, &with_inf, kind, 0.15);
        let sum = t1.add(&t2).unwrap();
        let s = max_stopping_minorant(&random_grid_time_below(&mut rng, &sum, &with_inf), &f, kind).unwrap();
        fails.check(s.le(&sum).unwrap(), || format!("S ≰ T1 + T2 on instance {i}"));
        for n in [1, 2, 3, 5] {
            let sn = s.truncate(n).unwrap();
            let bound = t1.truncate(n).unwrap().add(&t2.truncate(n).unwrap()).unwrap();
            fails.check(sn.le(&bound).unwrap(), || format!("S^{n} = ({sn}) ≰ ({bound}) on instance {i}"));
        }
        for x in [&s, &t1, &t2] {
            for n in 1..=5 {
                let lo = x.truncate(n).unwrap();
                let hi = x.truncate(n + 1).unwrap();
                fails.check(lo.le(&hi).unwrap(), || format!("({x})^n not monotone at {n}"));
                fails.check(dense_admits(&lo, &f, kind), || format!("({x})^{n} not a stopping time"));
            }
            // Beyond every finite value the truncation returns T where T is finite,
            // and grows without bound where T is infinite.
            for n in [7, 50] {
                let tn = x.truncate(n).unwrap();
                let ok = x.values().iter().zip(tn.values()).all(|(v, r)| match v {
                    Time::Finite(_) => v == r,
                    Time::Infinite => *r == Time::from_int(n),
                });
                fails.check(ok, || format!("({x})^{n} = ({tn}) does not recover ({x})"));
            }
        }
    }
    verdict(fails.ok(), fails.summary())
}

fn vectors(m: usize, values: &[Rational]) -> Vec<Vec<Rational>> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |v| {
                    let mut next = prefix.clone();
                    next.push(*v);
                    next
                })
            })
            .collect();
    }
    out
}

/// Exhaustive existence check: each outcome splits independently, so try
/// every tuple of grid values per outcome.
fn riesz_oracle(x: &[Rational], ys: &[Vec<Rational>], values: &[Rational]) -> bool {
    let n = ys.len();
    (0..x.len()).all(|w| {
        vectors(n, values).iter().any(|parts| {
            parts.iter().copied().sum::<Rational>() == x[w]
                && parts.iter().zip(ys).all(|(p, y)| *p >= int(0) && *p <= y[w])
        })
    })
}

fn riesz() -> Verdict {
    let values = [int(0), int(1), int(2)];
    let mut fails = Failures::default();
    let mut decomposed = 0u64;
    for m in 1..=3 {
        let all = vectors(m, &values);
        for n in 1..=3 {
            let mut bounds = vec![Vec::new()];
            for _ in 0..n {
                bounds = bounds
                    .into_iter()
                    .flat_map(|prefix: Vec<&Vec<Rational>>| {
                        all.iter().map(move |y| {
                            let mut next = prefix.clone();
                            next.push(y);
                            next
                        })
                    })
                    .collect();
            }
            for ys in &bounds {
                let ys: Vec<Vec<Rational>> = ys.iter().map(|y| (*y).clone()).collect();
                let rvs: Vec<RealRv> = ys.iter().map(|y| RealRv::new(y.clone()).unwrap()).collect();
                for x in &all {
                    let holds = (0..m).all(|w| x[w] <= ys.iter().map(|y| y[w]).sum());
                    let result = rv_decompose(&RealRv::new(x.clone()).unwrap(), &rvs);
                    match result {
                        Ok(d) => {
                            decomposed += 1;
                            let exact = d.parts.iter().fold(RealRv::zero(m), |a, p| a.add(p).unwrap()).values() == x
                                && d.parts.iter().zip(&ys).all(|(p, y)| {
                                    p.values().iter().zip(y).all(|(v, b)| *v >= int(0) && v <= b)
                                });
                            fails.check(holds && exact, || format!("bad decomposition of {x:?} over {ys:?}"));
                            fails.check(riesz_oracle(x, &ys, &values), || {
                                format!("oracle finds no decomposition of {x:?} over {ys:?}")
                            });
                        }
                        Err(_) => fails.check(!holds, || format!("rejected valid input {x:?} over {ys:?}")),
                    }
                }
            }
        }
    }
    verdict(fails.ok(), format!("{} ({decomposed} decomposed)", fails.summary()))
}

fn sweep() -> Vec<Filtration> {
    all_filtrations(3, 2, &[int(1), int(2)])
}

fn minorant() -> Verdict {
    let g = grid(1, 2, true);
    let values = g.values();
    let mut fails = Failures::default();
    for f in sweep() {
        for kind in [TimeKind::Stopping, TimeKind::Optional] {
            let admitted = enumerate_stopping_times(&f, &g, kind, Caps::default()).unwrap();
            for u in vectors_t(f.size(), &values) {
                let fast = max_stopping_minorant(&u, &f, kind).unwrap();
                let slow = max_minorant_from(&admitted, &u);
                fails.check(fast == slow && admitted.contains(&slow), || {
                    format!("{} minorant of ({u}) is ({fast}), oracle ({slow})", kind.name())
                });
            }
        }
    }
    verdict(fails.ok(), format!("{} over {} filtrations", fails.summary(), sweep().len()))
}

fn vectors_t(m: usize, values: &[Time]) -> Vec<RandomTime> {
    let mut out: Vec<Vec<Time>> = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |v| {
                    let mut next = prefix.clone();
                    next.push(*v);
                    next
                })
            })
            .collect();
    }
    out.into_iter().map(|v| RandomTime::new(v).unwrap()).collect()
}

/// For fixed bounds, every admitted pair below them grouped by its sum, keeping
/// the lexicographically largest pair for each sum.
fn oracle_sums<'a>(
    admitted: &'a [RandomTime],
    t1: &RandomTime,
    t2: &RandomTime,
) -> HashMap<RandomTime, (&'a RandomTime, &'a RandomTime)> {
    let below1: Vec<&RandomTime> = admitted.iter().filter(|a| RandomTime::le(a, t1).unwrap()).collect();
    let below2: Vec<&RandomTime> = admitted.iter().filter(|a| RandomTime::le(a, t2).unwrap()).collect();
    let mut best: HashMap<RandomTime, (&RandomTime, &RandomTime)> = HashMap::new();
    for a in &below1 {
        for b in &below2 {
            let sum = a.add(b).unwrap();
            let entry = best.entry(sum).or_insert((a, b));
            if (*a, *b) > *entry {
                *entry = (a, b);
            }
        }
    }
    best
}

fn decompose_sweep(values: Grid, max_omega: usize, kinds: &[TimeKind], fails: &mut Failures, found: &mut u64) {
    for f in sweep().into_iter().filter(|f| f.size() <= max_omega) {
        for &kind in kinds {
            let admitted = enumerate_stopping_times(&f, &values, kind, Caps::default()).unwrap();
            for t1 in &admitted {
                for t2 in &admitted {
                    let sums = oracle_sums(&admitted, t1, t2);
                    let bound = t1.add(t2).unwrap();
                    let parts = [t1.clone(), t2.clone()];
                    for s in admitted.iter().filter(|s| RandomTime::le(s, &bound).unwrap()) {
                        let expected = sums.get(s);
                        match decompose_stopping(s, &parts, &f, &values, kind) {
                            SearchOutcome::Found(d) => {
                                *found += 1;
                                let canonical = expected.is_some_and(|(a, b)| d.parts == [(*a).clone(), (*b).clone()]);
                                let certified = d.certificates.len() == 2
                                    && d.certificates.iter().all(|c| c.iter().all(|r| r.measurable))
                                    && d.parts.iter().all(|p| dense_admits(p, &f, kind))
                                    && d.parts[0].add(&d.parts[1]).unwrap() == *s
                                    && d.parts.iter().zip(&parts).all(|(p, b)| p.le(b).unwrap());
                                fails.check(canonical && certified, || {
                                    format!("({s}) over ({t1}), ({t2}): found {:?}, oracle {expected:?}", d.parts)
                                });
                            }
                            SearchOutcome::NotFoundOnGrid(_) => fails.check(expected.is_none(), || {
                                format!("({s}) over ({t1}), ({t2}): search missed {expected:?}")
                            }),
                            SearchOutcome::PreconditionFailed(p) => {
                                fails.check(false, || format!("({s}) over ({t1}), ({t2}): {p}"))
                            }
                        }
                    }
                }
            }
        }
    }
}

fn decompose() -> Verdict {
    let mut fails = Failures::default();
    let mut found = 0;
    let both = [TimeKind::Stopping, TimeKind::Optional];
    decompose_sweep(grid(1, 2, false), 3, &both, &mut fails, &mut found);
    decompose_sweep(grid(1, 2, true), 2, &both, &mut fails, &mut found);
    verdict(fails.ok(), format!("{} ({found} found)", fails.summary()))
}

fn late_split_counterexample() -> Verdict {
    let (s, t1) = (t("1 2"), t("1 1"));
    let parts = [t1.clone(), t1];
    let f = late_split(Partition::trivial(2), Boundary::Inclusive);
    let mut notes = Vec::new();
    let mut ok = true;
    for q in [1, 2, 4, 8, 16, 32, 64] {
        let g = Grid::covering(q, std::iter::once(&s).chain(&parts)).unwrap();
        match decompose_stopping(&s, &parts, &f, &g, TimeKind::Stopping) {
            SearchOutcome::NotFoundOnGrid(ex) => notes.push(format!("q={q}: {} states", ex.states_explored)),
            other => {
                ok = false;
                notes.push(format!("q={q}: {}", other.verdict()));
            }
        }
    }
    let discrete = late_split(Partition::discrete(2), Boundary::Inclusive);
    let g = Grid::covering(1, std::iter::once(&s).chain(&parts)).unwrap();
    let found = decompose_stopping(&s, &parts, &discrete, &g, TimeKind::Stopping);
    ok &= found.is_found();
    notes.push(format!("F0 discrete: {}", found.verdict()));
    verdict(ok, format!("not found on every grid tested (grid-relative finding); {}", notes.join(", ")))
}

fn interpolation() -> Verdict {
    let shape = FiltrationShape {
        max_omega: 6,
        max_breakpoints: 4,
        grid: grid(4, 2, false),
        allow_exclusive: true,
    };
    let with_inf = shape.grid.with_infinity(true);
    let mut pointwise = Failures::default();
    for i in 0..1000 {
        let mut rng = instance_rng(SEED ^ 7, i);
        let f = random_filtration(&mut rng, &shape);
        let kind = if i % 2 == 0 { TimeKind::Stopping } else { TimeKind::Optional };
        let a: Vec<RandomTime> =
            (0..rng.random_range(1..=3)).map(|_| random_admitted(&mut rng, &f, &with_inf, kind, 0.15)).collect();
        let top = a.iter().skip(1).fold(a[0].clone(), |acc, x| acc.join(x).unwrap());
        let b: Vec<RandomTime> = (0..rng.random_range(1..=3))
            .map(|_| top.join(&random_admitted(&mut rng, &f, &with_inf, kind, 0.15)).unwrap())
            .collect();
        match interpolate_pointwise(&a, &b, &f, kind) {
            Ok(x) => pointwise.check(
                dense_admits(&x, &f, kind)
                    && a.iter().all(|y| y.le(&x).unwrap())
                    && b.iter().all(|y| x.le(y).unwrap()),
                || format!("interpolant ({x}) fails its re-check on instance {i}"),
            ),
            Err(e) => pointwise.check(false, || format!("instance {i}: {e}")),
        }
    }

    let mut cone = Failures::default();
    let g = grid(1, 2, false);
    for f in sweep() {
        for kind in [TimeKind::Stopping, TimeKind::Optional] {
            let admitted = enumerate_stopping_times(&f, &g, kind, Caps::default()).unwrap();
            let mut sets: Vec<Vec<&RandomTime>> = admitted.iter().map(|x| vec![x]).collect();
            if f.size() <= 2 {
                for (i, x) in admitted.iter().enumerate() {
                    for y in &admitted[i + 1..] {
                        sets.push(vec![x, y]);
                    }
                }
            }
            for lower in &sets {
                for upper in &sets {
                    let lo: Vec<RandomTime> = lower.iter().map(|x| (*x).clone()).collect();
                    let hi: Vec<RandomTime> = upper.iter().map(|x| (*x).clone()).collect();
                    let ordered = lo.iter().all(|x| {
                        hi.iter().all(|y| leq(x, y, OrderKind::Cone, &f, kind).unwrap())
                    });
                    let all = cone_interpolants(&lo, &hi, &f, &g, kind, Caps::default()).unwrap();
                    let least = all.iter().find(|x| all.iter().all(|y| RandomTime::le(x, y).unwrap()));
                    match interpolate_cone(&lo, &hi, &f, &g, kind) {
                        SearchOutcome::Found(x) => cone.check(ordered && least == Some(&x), || {
                            format!("cone ({lo:?}) to ({hi:?}): found ({x}), oracle {least:?}")
                        }),
                        SearchOutcome::NotFoundOnGrid(_) => cone.check(ordered && all.is_empty(), || {
                            format!("cone ({lo:?}) to ({hi:?}): search missed {} interpolants", all.len())
                        }),
                        SearchOutcome::PreconditionFailed(_) => cone.check(!ordered, || {
                            format!("cone ({lo:?}) to ({hi:?}): precondition rejected an ordered pair")
                        }),
                    }
                }
            }
        }
    }
    verdict(
        pointwise.ok() && cone.ok(),
        format!("pointwise: {}; cone vs oracle: {}", pointwise.summary(), cone.summary()),
    )
}

fn optional_vs_stopping() -> Verdict {
    let shape = FiltrationShape {
        max_omega: 6,
        max_breakpoints: 4,
        grid: grid(4, 2, false),
        allow_exclusive: false,
    };
    let with_inf = shape.grid.with_infinity(true);
    let mut fails = Failures::default();
    for i in 0..1000 {
        let mut rng = instance_rng(SEED ^ 8, i);
        let f = random_filtration(&mut rng, &shape);
        let mut times = vec![
            random_grid_time(&mut rng, f.size(), &with_inf, 0.15),
            random_grid_time(&mut rng, f.size(), &shape.grid, 0.0),
        ];
        times.push(random_admitted(&mut rng, &f, &with_inf, TimeKind::Stopping, 0.15));
        times.push(random_admitted(&mut rng, &f, &with_inf, TimeKind::Optional, 0.15));
        for x in &times {
            let stopping = TimeKind::Stopping.admits(x, &f).unwrap();
            let optional = TimeKind::Optional.admits(x, &f).unwrap();
            fails.check(stopping == optional, || format!("({x}) on instance {i}: stopping={stopping} optional={optional}"));
        }
    }
    let witness = late_split(Partition::trivial(2), Boundary::Exclusive);
    let s = t("1 2");
    let optional = TimeKind::Optional.admits(&s, &witness).unwrap();
    let stopping = TimeKind::Stopping.admits(&s, &witness).unwrap();
    let dense = dense_admits(&s, &witness, TimeKind::Optional) && !dense_admits(&s, &witness, TimeKind::Stopping);
    let ok = fails.ok() && optional && !stopping && dense;
    verdict(ok, format!("{}; exclusive witness: optional={optional} stopping={stopping}", fails.summary()))
}

fn hunter() -> Verdict {
    let dir = tempfile::TempDir::new().unwrap();
    let run = |name: &str, threads: &str| -> Result<String, String> {
        let path = dir.path().join(name);
        let out = Command::new(env!("CARGO_BIN_EXE_stoplat"))
            .args(["hunt", "--seed", "42", "--instances", "10000", "--threads", threads, "--report"])
            .arg(&path)
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(String::from_utf8_lossy(&out.stderr).into_owned());
        }
        std::fs::read_to_string(&path).map_err(|e| e.to_string())
    };
    let runs = [run("a", "0"), run("b", "0"), run("c", "1"), run("d", "3")];
    let texts: Vec<&String> = match runs.iter().map(|r| r.as_ref()).collect::<Result<Vec<_>, _>>() {
        Ok(t) => t,
        Err(e) => return verdict(false, format!("hunt failed: {e}")),
    };
    let identical = texts.iter().all(|t| *t == texts[0]);
    let replays = match replay(texts[0]) {
        Ok(r) => r,
        Err(e) => return verdict(false, format!("replay failed: {e}")),
    };
    let mismatched = replays.iter().filter(|r| !r.matches()).count();
    let tallies: Vec<&str> = texts[0].lines().filter(|l| l.starts_with("tally ")).collect();
    verdict(
        identical && mismatched == 0,
        format!(
            "4 runs (threads default, default, 1, 3) identical={identical}; {} flagged, {mismatched} replay mismatches; {}",
            replays.len(),
            tallies.join("; ")
        ),
    )
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Verdict); 9] = [
        ("cone closure", BUDGET_CONE_CLOSURE, cone_closure),
        ("truncation", BUDGET_TRUNCATION, truncation),
        ("riesz decomposition vs oracle", BUDGET_RIESZ, riesz),
        ("minorant exactness", BUDGET_MINORANT, minorant),
        ("decomposition search vs oracle", BUDGET_DECOMPOSE, decompose),
        ("late-split counterexample", BUDGET_SPLIT, late_split_counterexample),
        ("interpolation", BUDGET_INTERPOLATION, interpolation),
        ("optional vs stopping", BUDGET_OPTIONAL, optional_vs_stopping),
        ("hunter determinism and replay", BUDGET_HUNT, hunter),
    ];
    let mut failed = 0;
    for (k, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *budget;
        let ok = v.ok && in_time;
        failed += usize::from(!ok);
        println!(
            "criterion {} {:<32} {} [{:.2?} of {:?}] {}",
            k + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            elapsed,
            budget,
            if in_time { v.detail } else { format!("over time budget; {}", v.detail) }
        );
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
