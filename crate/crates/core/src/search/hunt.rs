//! Seeded counterexample hunter.
//!
//! Instance `i` is generated from its own random stream, every property is
//! evaluated on it, and anything other than a pass or a skip is re-checked by
//! a brute-force oracle and flagged with the full instance text. The report
//! depends only on the seed, the configuration and the crate version.

use std::fmt::{self, Write as _};

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::space::Filtration;
use crate::times::{is_member_x, RandomTime, TimeKind};
use crate::value::{parse_rational, Rational, Time};

use super::generate::{
    instance_rng, random_admitted, random_filtration, random_grid_time, random_grid_time_below,
    FiltrationShape,
};
use super::oracle::{cone_interpolants, decompositions, dense_admits};
use super::{decompose_stopping, interpolate_cone, max_stopping_minorant, Caps, Grid, SearchOutcome};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

const P_INFINITE: f64 = 0.15;
const TRUNCATION_LEVELS: [i64; 4] = [1, 2, 3, 5];
const ORACLE_CAPS: Caps = Caps { max_outcomes: 6, max_values: 16 };

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    /// `S ≤ T₁ + T₂` splits into admitted parts below `T₁`, `T₂`.
    Decompose,
    /// A cone-order interpolant exists between the sets `A` and `B`.
    Cone,
    /// `T₁ − T₂` lies in `X`.
    XSub,
    /// Truncation is admitted, monotone, bounded and subadditive.
    Truncation,
    /// Optional and stopping agree when every boundary is inclusive.
    Agreement,
}

impl Property {
    pub const ALL: [Property; 5] =
        [Property::Decompose, Property::Cone, Property::XSub, Property::Truncation, Property::Agreement];

    pub fn name(self) -> &'static str {
        match self {
            Property::Decompose => "decompose",
            Property::Cone => "cone",
            Property::XSub => "x-sub",
            Property::Truncation => "truncation",
            Property::Agreement => "agreement",
        }
    }
}

impl std::str::FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Instance(format!("unknown property `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HuntConfig {
    pub seed: u64,
    pub instances: u64,
    pub max_omega: usize,
    /// Counting the breakpoint at `0`.
    pub max_breakpoints: usize,
    pub grid_denominator: i64,
    /// Largest finite value used when generating times and breakpoints.
    pub grid_max: Rational,
    pub properties: Vec<Property>,
    pub kind: TimeKind,
    /// Worker threads; `0` uses the default pool. Has no effect on the report.
    pub threads: usize,
    /// Extra instances evaluated before the generated ones.
    pub corpus: Vec<Instance>,
}

impl Default for HuntConfig {
    fn default() -> Self {
        HuntConfig {
            seed: 0,
            instances: 1000,
            max_omega: 4,
            max_breakpoints: 3,
            grid_denominator: 4,
            grid_max: Rational::from_integer(1),
            properties: Property::ALL.to_vec(),
            kind: TimeKind::Stopping,
            threads: 0,
            corpus: Vec::new(),
        }
    }
}

impl HuntConfig {
    fn generation_grid(&self) -> Result<Grid> {
        Grid::new(self.grid_denominator, self.grid_max, false)
    }

    fn validate(&self) -> Result<()> {
        if !(1..=6).contains(&self.max_omega) {
            return Err(Error::CapExceeded(format!("max-omega {} must lie in 1..=6", self.max_omega)));
        }
        if !(1..=5).contains(&self.max_breakpoints) {
            return Err(Error::CapExceeded(format!(
                "max-breakpoints {} must lie in 1..=5",
                self.max_breakpoints
            )));
        }
        let grid = self.generation_grid()?;
        if grid.finite_count() > 9 {
            return Err(Error::CapExceeded(format!("generation grid {grid} has more than 9 values")));
        }
        Ok(())
    }

    fn describe(&self) -> String {
        let properties: Vec<&str> = self.properties.iter().map(|p| p.name()).collect();
        format!(
            "instances {} max-omega {} max-breakpoints {} grid-denominator {} grid-max {} mode {} properties {} corpus {}",
            self.instances,
            self.max_omega,
            self.max_breakpoints,
            self.grid_denominator,
            self.grid_max,
            self.kind.name(),
            properties.join(","),
            self.corpus.len()
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Skipped,
    /// The hypothesis failed; the detail names the oracle evidence.
    Fail(String),
    /// An exhaustive search and the oracle both came up empty on the grid.
    NotFound(String),
}

impl Verdict {
    pub fn is_flagged(&self) -> bool {
        matches!(self, Verdict::Fail(_) | Verdict::NotFound(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => f.write_str("pass"),
            Verdict::Skipped => f.write_str("skipped"),
            Verdict::Fail(d) => write!(f, "fail {d}"),
            Verdict::NotFound(d) => write!(f, "notfound {d}"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub pass: u64,
    pub fail: u64,
    pub notfound: u64,
    pub skipped: u64,
}

impl Tally {
    fn record(&mut self, v: &Verdict) {
        match v {
            Verdict::Pass => self.pass += 1,
            Verdict::Skipped => self.skipped += 1,
            Verdict::Fail(_) => self.fail += 1,
            Verdict::NotFound(_) => self.notfound += 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flagged {
    /// Generated instances use their index, corpus instances `c<k>`.
    pub id: String,
    pub property: Property,
    pub verdict: Verdict,
    pub instance: Instance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HuntReport {
    pub version: String,
    pub seed: u64,
    pub config: String,
    pub tallies: Vec<(Property, Tally)>,
    pub flagged: Vec<Flagged>,
}

impl HuntReport {
    pub fn tally(&self, property: Property) -> Option<Tally> {
        self.tallies.iter().find(|(p, _)| *p == property).map(|(_, t)| *t)
    }

    /// Machine-readable report in the instance grammar extended with
    /// `tally`, `result` and `flagged … end` blocks.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# stoplat hunt report\n");
        writeln!(out, "version {}", self.version).unwrap();
        writeln!(out, "seed {}", self.seed).unwrap();
        writeln!(out, "config {}", self.config).unwrap();
        for (p, t) in &self.tallies {
            writeln!(
                out,
                "tally {} pass {} fail {} notfound {} skipped {}",
                p.name(),
                t.pass,
                t.fail,
                t.notfound,
                t.skipped
            )
            .unwrap();
        }
        writeln!(out, "result flagged {}", self.flagged.len()).unwrap();
        for f in &self.flagged {
            writeln!(out, "flagged {} {} {}", f.id, f.property.name(), f.verdict).unwrap();
            out.push_str(&f.instance.emit());
            out.push_str("end\n");
        }
        out
    }

    /// Short human-readable summary.
    pub fn summary(&self) -> String {
        let mut out = format!("stoplat {} hunt, seed {}\n{}\n", self.version, self.seed, self.config);
        for (p, t) in &self.tallies {
            writeln!(
                out,
                "  {:<11} pass {:>6}  fail {:>6}  notfound {:>6}  skipped {:>6}",
                p.name(),
                t.pass,
                t.fail,
                t.notfound,
                t.skipped
            )
            .unwrap();
        }
        writeln!(out, "flagged: {}", self.flagged.len()).unwrap();
        for f in self.flagged.iter().take(20) {
            writeln!(out, "  {} {} {}", f.id, f.property.name(), f.verdict).unwrap();
        }
        if self.flagged.len() > 20 {
            writeln!(out, "  … {} more in the machine report", self.flagged.len() - 20).unwrap();
        }
        out
    }
}

/// Builds generated instance `index`: roles `S, T1, T2`, sets `A, B` and two
/// unprojected times `U1, U2`.
pub fn generate_instance(config: &HuntConfig, index: u64) -> Result<Instance> {
    let mut rng = instance_rng(config.seed, index);
    let grid = config.generation_grid()?;
    let shape = FiltrationShape {
        max_omega: config.max_omega,
        max_breakpoints: config.max_breakpoints,
        grid,
        allow_exclusive: true,
    };
    let f = random_filtration(&mut rng, &shape);
    let m = f.size();
    let kind = config.kind;
    let with_inf = grid.with_infinity(true);

    let t1 = random_admitted(&mut rng, &f, &with_inf, kind, P_INFINITE);
    let t2 = random_admitted(&mut rng, &f, &with_inf, kind, P_INFINITE);
    let below = random_grid_time_below(&mut rng, &t1.add(&t2)?, &with_inf);
    let s = max_stopping_minorant(&below, &f, kind)?;

    let a1 = random_admitted(&mut rng, &f, &grid, kind, 0.0);
    let mut set_a = vec![a1.clone()];
    let mut top = a1;
    if rng.random_bool(0.5) {
        let e = random_admitted(&mut rng, &f, &grid, kind, 0.0);
        top = top.add(&e)?;
        set_a.push(top.clone());
    }
    let mut set_b = Vec::new();
    for _ in 0..rng.random_range(1..=2) {
        let b = if rng.random_bool(0.2) {
            random_admitted(&mut rng, &f, &grid, kind, 0.0)
        } else {
            top.add(&random_admitted(&mut rng, &f, &grid, kind, 0.0))?
        };
        set_b.push(b);
    }
    let u1 = random_grid_time(&mut rng, m, &with_inf, P_INFINITE);
    let u2 = random_grid_time(&mut rng, m, &grid, 0.0);

    let mut inst = Instance::new(f);
    inst.add_time("S", s)?;
    inst.add_time("T1", t1)?;
    inst.add_time("T2", t2)?;
    for (i, a) in set_a.into_iter().enumerate() {
        let name = format!("A{}", i + 1);
        inst.add_time(name.clone(), a)?;
        inst.set_a.push(name);
    }
    for (i, b) in set_b.into_iter().enumerate() {
        let name = format!("B{}", i + 1);
        inst.add_time(name.clone(), b)?;
        inst.set_b.push(name);
    }
    inst.add_time("U1", u1)?;
    inst.add_time("U2", u2)?;
    inst.target = Some("S".into());
    inst.parts = vec!["T1".into(), "T2".into()];
    Ok(inst)
}

/// Evaluates one property on one instance. Depends only on the instance, the
/// grid denominator and the kind, so flagged instances can be replayed.
pub fn evaluate(instance: &Instance, property: Property, denominator: i64, kind: TimeKind) -> Result<Verdict> {
    let f = &instance.filtration;
    match property {
        Property::Decompose => evaluate_decompose(instance, denominator, kind),
        Property::Cone => evaluate_cone(instance, denominator, kind),
        Property::XSub => evaluate_x_sub(instance, kind),
        Property::Truncation => evaluate_truncation(instance, kind),
        Property::Agreement => {
            if f.has_exclusive() {
                return Ok(Verdict::Skipped);
            }
            for (name, t) in &instance.times {
                let stopping = TimeKind::Stopping.admits(t, f)?;
                let optional = TimeKind::Optional.admits(t, f)?;
                if stopping != optional {
                    return Ok(Verdict::Fail(format!(
                        "{name} stopping={stopping} optional={optional} dense-stopping={} dense-optional={}",
                        dense_admits(t, f, TimeKind::Stopping),
                        dense_admits(t, f, TimeKind::Optional)
                    )));
                }
            }
            Ok(Verdict::Pass)
        }
    }
}

fn roles(instance: &Instance) -> Option<(RandomTime, Vec<RandomTime>)> {
    let s = instance.target_time().ok()?;
    let parts = instance.part_times().ok()?;
    (!parts.is_empty()).then_some((s, parts))
}

fn evaluate_decompose(instance: &Instance, denominator: i64, kind: TimeKind) -> Result<Verdict> {
    let f = &instance.filtration;
    let Some((s, parts)) = roles(instance) else { return Ok(Verdict::Skipped) };
    let grid = Grid::covering(denominator, std::iter::once(&s).chain(&parts))?;
    match decompose_stopping(&s, &parts, f, &grid, kind) {
        SearchOutcome::PreconditionFailed(_) => Ok(Verdict::Skipped),
        SearchOutcome::Found(d) => {
            let sum = d.parts.iter().try_fold(RandomTime::zero(s.size()), |acc, p| acc.add(p))?;
            let bounded = d.parts.iter().zip(&parts).all(|(p, b)| p.le(b).unwrap_or(false));
            let admitted = d.parts.iter().all(|p| dense_admits(p, f, kind));
            if sum == s && bounded && admitted {
                Ok(Verdict::Pass)
            } else {
                Ok(Verdict::Fail("found decomposition failed its re-check".into()))
            }
        }
        SearchOutcome::NotFoundOnGrid(ex) => {
            let all = decompositions(&s, &parts, f, &grid, kind, ORACLE_CAPS)?;
            if all.is_empty() {
                Ok(Verdict::NotFound(format!(
                    "grid {} explored {} digest {}",
                    ex.grid, ex.states_explored, ex.digest
                )))
            } else {
                Ok(Verdict::Fail(format!("search missed {} oracle decompositions", all.len())))
            }
        }
    }
}

fn evaluate_cone(instance: &Instance, denominator: i64, kind: TimeKind) -> Result<Verdict> {
    let f = &instance.filtration;
    if instance.set_a.is_empty() || instance.set_b.is_empty() {
        return Ok(Verdict::Skipped);
    }
    let a = instance.resolve(&instance.set_a)?;
    let b = instance.resolve(&instance.set_b)?;
    if !a.iter().chain(&b).all(RandomTime::is_finite) {
        return Ok(Verdict::Skipped);
    }
    let grid = Grid::covering(denominator, a.iter().chain(&b))?;
    match interpolate_cone(&a, &b, f, &grid, kind) {
        SearchOutcome::PreconditionFailed(_) => Ok(Verdict::Skipped),
        SearchOutcome::Found(_) => Ok(Verdict::Pass),
        SearchOutcome::NotFoundOnGrid(ex) => {
            let all = cone_interpolants(&a, &b, f, &grid, kind, ORACLE_CAPS)?;
            if all.is_empty() {
                Ok(Verdict::NotFound(format!(
                    "grid {} explored {} digest {}",
                    ex.grid, ex.states_explored, ex.digest
                )))
            } else {
                Ok(Verdict::Fail(format!("search missed {} oracle interpolants", all.len())))
            }
        }
    }
}

fn evaluate_x_sub(instance: &Instance, kind: TimeKind) -> Result<Verdict> {
    let f = &instance.filtration;
    let Some((_, parts)) = roles(instance) else { return Ok(Verdict::Skipped) };
    let [t1, t2, ..] = parts.as_slice() else { return Ok(Verdict::Skipped) };
    if !t1.is_finite() || !t2.is_finite() {
        return Ok(Verdict::Skipped);
    }
    let diff = t1.sub(t2)?;
    if is_member_x(&diff, f, kind)? {
        return Ok(Verdict::Pass);
    }
    let pos = diff.pos_part().to_time()?;
    let neg = diff.neg_part().to_time()?;
    let dense = dense_admits(&pos, f, kind) && dense_admits(&neg, f, kind);
    Ok(Verdict::Fail(format!("T1 - T2 = ({diff}) outside X, dense-check member={dense}")))
}

fn truncation_failure(name: &str, t: &RandomTime, f: &Filtration, kind: TimeKind) -> Result<Option<String>> {
    let mut previous: Option<RandomTime> = None;
    for n in TRUNCATION_LEVELS {
        let tn = t.truncate(n)?;
        if !kind.admits(&tn, f)? {
            return Ok(Some(format!(
                "{name}^{n} not admitted, dense-check admitted={}",
                dense_admits(&tn, f, kind)
            )));
        }
        if tn.values().iter().any(|v| *v > Time::from_int(n)) {
            return Ok(Some(format!("{name}^{n} exceeds {n}")));
        }
        if let Some(p) = &previous {
            if !p.le(&tn)? {
                return Ok(Some(format!("{name}^n not monotone at n={n}")));
            }
        }
        previous = Some(tn);
    }
    let beyond = t.max_finite().map_or(1, |m| m.to_integer() + 1).max(1);
    let recovered = t.truncate(beyond)?;
    let ok = t.values().iter().zip(recovered.values()).all(|(v, r)| match v {
        Time::Finite(_) => v == r,
        Time::Infinite => *r == Time::from_int(beyond),
    });
    if !ok {
        return Ok(Some(format!("{name}^{beyond} does not recover {name}")));
    }
    Ok(None)
}

fn evaluate_truncation(instance: &Instance, kind: TimeKind) -> Result<Verdict> {
    let f = &instance.filtration;
    let Some((s, parts)) = roles(instance) else { return Ok(Verdict::Skipped) };
    let sum = parts.iter().try_fold(RandomTime::zero(s.size()), |acc, p| acc.add(p))?;
    if !s.le(&sum)? {
        return Ok(Verdict::Skipped);
    }
    let names = std::iter::once("S".to_string()).chain((1..=parts.len()).map(|i| format!("T{i}")));
    for (name, t) in names.zip(std::iter::once(&s).chain(&parts)) {
        if let Some(why) = truncation_failure(&name, t, f, kind)? {
            return Ok(Verdict::Fail(why));
        }
    }
    for n in TRUNCATION_LEVELS {
        let sn = s.truncate(n)?;
        let bound = parts
            .iter()
            .try_fold(RandomTime::zero(s.size()), |acc, p| acc.add(&p.truncate(n)?))?;
        if !sn.le(&bound)? {
            return Ok(Verdict::Fail(format!("S^{n} exceeds the sum of the truncated parts")));
        }
    }
    Ok(Verdict::Pass)
}

type Evaluated = (String, Instance, Vec<(Property, Verdict)>);

fn evaluate_all(config: &HuntConfig, id: String, instance: Instance) -> Result<Evaluated> {
    let verdicts = config
        .properties
        .iter()
        .map(|&p| Ok((p, evaluate(&instance, p, config.grid_denominator, config.kind)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok((id, instance, verdicts))
}

fn run_one(config: &HuntConfig, k: u64) -> Result<Evaluated> {
    let corpus = config.corpus.len() as u64;
    if k < corpus {
        evaluate_all(config, format!("c{k}"), config.corpus[k as usize].clone())
    } else {
        let index = k - corpus;
        evaluate_all(config, index.to_string(), generate_instance(config, index)?)
    }
}

/// Runs the hunt. The report is identical for every thread count.
pub fn hunt(config: &HuntConfig) -> Result<HuntReport> {
    config.validate()?;
    let total = config.corpus.len() as u64 + config.instances;
    let results: Vec<Result<Evaluated>> = if config.threads == 1 {
        (0..total).map(|k| run_one(config, k)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| Error::Instance(format!("thread pool: {e}")))?;
        pool.install(|| (0..total).into_par_iter().map(|k| run_one(config, k)).collect())
    };

    let mut tallies: Vec<(Property, Tally)> =
        config.properties.iter().map(|&p| (p, Tally::default())).collect();
    let mut flagged = Vec::new();
    for result in results {
        let (id, instance, verdicts) = result?;
        for (p, v) in verdicts {
            if let Some((_, t)) = tallies.iter_mut().find(|(q, _)| *q == p) {
                t.record(&v);
            }
            if v.is_flagged() {
                flagged.push(Flagged { id: id.clone(), property: p, verdict: v, instance: instance.clone() });
            }
        }
    }
    Ok(HuntReport {
        version: VERSION.to_string(),
        seed: config.seed,
        config: config.describe(),
        tallies,
        flagged,
    })
}

/// One flagged entry re-evaluated from its serialized form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Replay {
    pub id: String,
    pub property: Property,
    pub recorded: String,
    pub replayed: String,
}

impl Replay {
    pub fn matches(&self) -> bool {
        self.recorded == self.replayed
    }
}

fn config_value<'a>(config: &'a str, key: &str) -> Option<&'a str> {
    let tokens: Vec<&str> = config.split_whitespace().collect();
    tokens.windows(2).find(|w| w[0] == key).map(|w| w[1])
}

/// Re-parses every flagged block of a report and re-evaluates its verdict.
pub fn replay(report: &str) -> Result<Vec<Replay>> {
    let config = report
        .lines()
        .find_map(|l| l.strip_prefix("config "))
        .ok_or_else(|| Error::Instance("report has no `config` line".into()))?;
    let denominator: i64 = config_value(config, "grid-denominator")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::Instance("config lacks grid-denominator".into()))?;
    let kind = match config_value(config, "mode") {
        Some("stopping") => TimeKind::Stopping,
        Some("optional") => TimeKind::Optional,
        _ => return Err(Error::Instance("config lacks a valid mode".into())),
    };
    if let Some(max) = config_value(config, "grid-max") {
        parse_rational(max)?;
    }

    let mut out = Vec::new();
    let mut lines = report.lines();
    while let Some(line) = lines.next() {
        let Some(rest) = line.strip_prefix("flagged ") else { continue };
        let mut parts = rest.splitn(3, ' ');
        let (Some(id), Some(property), Some(recorded)) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Instance(format!("malformed flagged line `{line}`")));
        };
        let property: Property = property.parse()?;
        let mut block = String::new();
        for l in lines.by_ref() {
            if l == "end" {
                break;
            }
            block.push_str(l);
            block.push('\n');
        }
        let instance = Instance::parse(&block)?;
        let replayed = evaluate(&instance, property, denominator, kind)?.to_string();
        out.push(Replay { id: id.to_string(), property, recorded: recorded.to_string(), replayed });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const LATE_SPLIT: &str = "omega a b\nbreakpoint 0 inclusive a,b\nbreakpoint 1 inclusive a;b\n\
                      time S 1 2\ntime T1 1 1\ntime T2 1 1\nrole S S\nrole T1 T1\nrole T2 T2\n";

    fn small(instances: u64) -> HuntConfig {
        HuntConfig { seed: 42, instances, ..HuntConfig::default() }
    }

    #[test]
    fn empty_hunt_has_zero_tallies() {
        let report = hunt(&small(0)).unwrap();
        assert!(report.flagged.is_empty());
        assert!(report.tallies.iter().all(|(_, t)| *t == Tally::default()));
    }

    #[test]
    fn deterministic_across_threads() {
        let mut one = small(60);
        one.threads = 1;
        let mut four = small(60);
        four.threads = 4;
        let a = hunt(&one).unwrap().to_text();
        let b = hunt(&four).unwrap().to_text();
        assert_eq!(a, b);
        assert_eq!(a, hunt(&one).unwrap().to_text());
    }

    #[test]
    fn late_split_corpus_is_flagged_and_replays() {
        let mut config = small(0);
        config.corpus = vec![Instance::parse(LATE_SPLIT).unwrap()];
        let report = hunt(&config).unwrap();
        let decompose: Vec<_> =
            report.flagged.iter().filter(|f| f.property == Property::Decompose).collect();
        assert_eq!(decompose.len(), 1);
        assert!(matches!(decompose[0].verdict, Verdict::NotFound(_)));
        let replays = replay(&report.to_text()).unwrap();
        assert!(!replays.is_empty());
        assert!(replays.iter().all(Replay::matches));
    }

    #[test]
    fn generated_instances_are_valid() {
        let config = small(50);
        for i in 0..50 {
            let inst = generate_instance(&config, i).unwrap();
            let f = &inst.filtration;
            for (_, t) in inst.times.iter().filter(|(n, _)| !n.starts_with('U')) {
                assert!(config.kind.admits(t, f).unwrap());
            }
            let s = inst.target_time().unwrap();
            let sum = inst.part_times().unwrap().iter().try_fold(RandomTime::zero(s.size()), |a, p| a.add(p)).unwrap();
            assert!(s.le(&sum).unwrap());
            assert_eq!(Instance::parse(&inst.emit()).unwrap(), inst);
        }
    }

    #[test]
    fn caps_are_enforced() {
        let mut config = small(1);
        config.max_omega = 7;
        assert!(matches!(hunt(&config), Err(Error::CapExceeded(_))));
    }
}
