//! Line-oriented instance files.
//!
//! ```text
//! # trivial before 1, discrete from 1
//! omega a b
//! breakpoint 0 inclusive a,b
//! breakpoint 1 inclusive a;b
//! time S 1 2
//! time T1 1 1
//! time T2 1 1
//! role S S
//! role T1 T1
//! role T2 T2
//! ```
//!
//! One directive per line, `#` starts a comment. Directives:
//! `omega <name>+`, `breakpoint <rational> [inclusive|exclusive] <blocks>`
//! (blocks are comma-separated outcome lists joined by `;`), `time <name>
//! <value>+` (`inf` for ∞), `rv <name> <signed-rational>+`, `set <A|B>
//! <time-name>+` and `role <S|T1|T2|…> <time-name>`. [`Instance::emit`]
//! writes the canonical form, which parses back to the same instance.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::space::{Boundary, Filtration, FiltrationEntry, OutcomeSet, Partition, SampleSpace};
use crate::times::{RandomTime, RealRv};
use crate::value::{parse_rational, Rational, Time};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub filtration: Filtration,
    pub times: Vec<(String, RandomTime)>,
    pub rvs: Vec<(String, RealRv)>,
    pub set_a: Vec<String>,
    pub set_b: Vec<String>,
    /// Name of the time playing `S`.
    pub target: Option<String>,
    /// Names of the times playing `T1, T2, …`, in order.
    pub parts: Vec<String>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(|c| c.is_whitespace() || c == '#')
}

impl Instance {
    pub fn new(filtration: Filtration) -> Self {
        Instance {
            filtration,
            times: Vec::new(),
            rvs: Vec::new(),
            set_a: Vec::new(),
            set_b: Vec::new(),
            target: None,
            parts: Vec::new(),
        }
    }

    pub fn space(&self) -> &SampleSpace {
        self.filtration.space()
    }

    fn name_taken(&self, name: &str) -> bool {
        self.times.iter().any(|(n, _)| n == name) || self.rvs.iter().any(|(n, _)| n == name)
    }

    /// Adds a named time; names are unique across times and random variables.
    pub fn add_time(&mut self, name: impl Into<String>, time: RandomTime) -> Result<()> {
        let name = name.into();
        if !valid_name(&name) {
            return Err(Error::Instance(format!("invalid name `{name}`")));
        }
        if self.name_taken(&name) {
            return Err(Error::Instance(format!("duplicate name `{name}`")));
        }
        if time.size() != self.filtration.size() {
            return Err(Error::SpaceMismatch { expected: self.filtration.size(), found: time.size() });
        }
        self.times.push((name, time));
        Ok(())
    }

    pub fn add_rv(&mut self, name: impl Into<String>, rv: RealRv) -> Result<()> {
        let name = name.into();
        if !valid_name(&name) {
            return Err(Error::Instance(format!("invalid name `{name}`")));
        }
        if self.name_taken(&name) {
            return Err(Error::Instance(format!("duplicate name `{name}`")));
        }
        if rv.size() != self.filtration.size() {
            return Err(Error::SpaceMismatch { expected: self.filtration.size(), found: rv.size() });
        }
        self.rvs.push((name, rv));
        Ok(())
    }

    pub fn time(&self, name: &str) -> Option<&RandomTime> {
        self.times.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn rv(&self, name: &str) -> Option<&RealRv> {
        self.rvs.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    /// Looks up a list of time names.
    pub fn resolve(&self, names: &[String]) -> Result<Vec<RandomTime>> {
        names
            .iter()
            .map(|n| {
                self.time(n).cloned().ok_or_else(|| Error::Instance(format!("unknown time `{n}`")))
            })
            .collect()
    }

    pub fn target_time(&self) -> Result<RandomTime> {
        let name = self.target.as_ref().ok_or_else(|| Error::Instance("no `S` role".into()))?;
        Ok(self.resolve(std::slice::from_ref(name))?.remove(0))
    }

    pub fn part_times(&self) -> Result<Vec<RandomTime>> {
        self.resolve(&self.parts)
    }

    pub fn parse(text: &str) -> Result<Instance> {
        Parser::default().parse(text)
    }

    /// Canonical text: omega, breakpoints, times, random variables, sets, roles.
    pub fn emit(&self) -> String {
        let space = self.space();
        let mut out = String::new();
        out.push_str("omega");
        for l in space.labels() {
            out.push(' ');
            out.push_str(l);
        }
        out.push('\n');
        for e in self.filtration.entries() {
            writeln!(
                out,
                "breakpoint {} {} {}",
                e.time,
                e.boundary.as_str(),
                e.partition.display(space)
            )
            .unwrap();
        }
        for (name, t) in &self.times {
            writeln!(out, "time {name} {t}").unwrap();
        }
        for (name, rv) in &self.rvs {
            writeln!(out, "rv {name} {rv}").unwrap();
        }
        for (label, set) in [("A", &self.set_a), ("B", &self.set_b)] {
            if !set.is_empty() {
                writeln!(out, "set {label} {}", set.join(" ")).unwrap();
            }
        }
        if let Some(s) = &self.target {
            writeln!(out, "role S {s}").unwrap();
        }
        for (i, p) in self.parts.iter().enumerate() {
            writeln!(out, "role T{} {p}", i + 1).unwrap();
        }
        out
    }
}

#[derive(Default)]
struct Parser {
    space: Option<SampleSpace>,
    entries: Vec<FiltrationEntry>,
    times: Vec<(usize, String, RandomTime)>,
    rvs: Vec<(usize, String, RealRv)>,
    set_a: Option<(usize, Vec<String>)>,
    set_b: Option<(usize, Vec<String>)>,
    target: Option<(usize, String)>,
    parts: Vec<(usize, usize, String)>,
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn rational_at(line: usize, token: &str) -> Result<Rational> {
    parse_rational(token).map_err(|_| err(line, format!("malformed rational `{token}`")))
}

impl Parser {
    fn space(&self, line: usize) -> Result<&SampleSpace> {
        self.space.as_ref().ok_or_else(|| err(line, "`omega` must come first"))
    }

    fn parse(mut self, text: &str) -> Result<Instance> {
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.split('#').next().unwrap_or("");
            let mut tokens = content.split_whitespace();
            let Some(directive) = tokens.next() else { continue };
            let args: Vec<&str> = tokens.collect();
            match directive {
                "omega" => self.omega(line, &args)?,
                "breakpoint" => self.breakpoint(line, &args)?,
                "time" => self.time(line, &args)?,
                "rv" => self.rv(line, &args)?,
                "set" => self.set(line, &args)?,
                "role" => self.role(line, &args)?,
                other => return Err(err(line, format!("unknown directive `{other}`"))),
            }
        }
        self.finish(text.lines().count().max(1))
    }

    fn omega(&mut self, line: usize, args: &[&str]) -> Result<()> {
        if self.space.is_some() {
            return Err(err(line, "duplicate `omega`"));
        }
        let space = SampleSpace::new(args.iter().copied()).map_err(|e| err(line, e.to_string()))?;
        self.space = Some(space);
        Ok(())
    }

    fn partition(&self, line: usize, spec: &str) -> Result<Partition> {
        let space = self.space(line)?;
        let mut blocks = Vec::new();
        let mut seen = OutcomeSet::EMPTY;
        for block in spec.split(';') {
            let mut set = OutcomeSet::EMPTY;
            for label in block.split(',') {
                let i = space
                    .index_of(label)
                    .ok_or_else(|| err(line, format!("unknown outcome `{label}`")))?;
                if seen.contains(i) || set.contains(i) {
                    return Err(err(line, format!("outcome `{label}` appears twice")));
                }
                set = set.with(i);
            }
            seen = seen.union(set);
            blocks.push(set);
        }
        Partition::new(space.size(), blocks).map_err(|e| err(line, e.to_string()))
    }

    fn breakpoint(&mut self, line: usize, args: &[&str]) -> Result<()> {
        let (time, rest) = args.split_first().ok_or_else(|| err(line, "missing breakpoint time"))?;
        let time = rational_at(line, time)?;
        let (boundary, blocks) = match rest.first() {
            Some(&"inclusive") => (Boundary::Inclusive, &rest[1..]),
            Some(&"exclusive") => (Boundary::Exclusive, &rest[1..]),
            _ => (Boundary::Inclusive, rest),
        };
        if blocks.is_empty() {
            return Err(err(line, "missing partition blocks"));
        }
        let partition = self.partition(line, &blocks.concat())?;
        match self.entries.last() {
            None if !(time == Rational::from_integer(0) && boundary == Boundary::Inclusive) => {
                return Err(err(line, "first breakpoint must be `0 inclusive`"));
            }
            Some(prev) if time <= prev.time => {
                return Err(err(line, "breakpoints not increasing"));
            }
            Some(prev) if !partition.refines(&prev.partition).expect("same space") => {
                return Err(err(line, "partition does not refine the previous breakpoint's"));
            }
            _ => {}
        }
        self.entries.push(FiltrationEntry { time, partition, boundary });
        Ok(())
    }

    fn values<'a>(&self, line: usize, args: &'a [&'a str]) -> Result<(&'a str, &'a [&'a str])> {
        let m = self.space(line)?.size();
        let (name, values) = args.split_first().ok_or_else(|| err(line, "missing name"))?;
        if !valid_name(name) {
            return Err(err(line, format!("invalid name `{name}`")));
        }
        if values.len() != m {
            return Err(err(line, format!("expected {m} values, found {}", values.len())));
        }
        let duplicate = self.times.iter().map(|(_, n, _)| n).chain(self.rvs.iter().map(|(_, n, _)| n));
        if duplicate.into_iter().any(|n| n == name) {
            return Err(err(line, format!("duplicate name `{name}`")));
        }
        Ok((name, values))
    }

    fn time(&mut self, line: usize, args: &[&str]) -> Result<()> {
        let (name, values) = self.values(line, args)?;
        let values = values
            .iter()
            .map(|v| match *v {
                "inf" => Ok(Time::Infinite),
                v => rational_at(line, v).map(Time::Finite),
            })
            .collect::<Result<Vec<_>>>()?;
        let time = RandomTime::new(values).map_err(|e| err(line, e.to_string()))?;
        self.times.push((line, name.to_string(), time));
        Ok(())
    }

    fn rv(&mut self, line: usize, args: &[&str]) -> Result<()> {
        let (name, values) = self.values(line, args)?;
        let values = values.iter().map(|v| rational_at(line, v)).collect::<Result<Vec<_>>>()?;
        let rv = RealRv::new(values).map_err(|e| err(line, e.to_string()))?;
        self.rvs.push((line, name.to_string(), rv));
        Ok(())
    }

    fn set(&mut self, line: usize, args: &[&str]) -> Result<()> {
        let (which, names) = args.split_first().ok_or_else(|| err(line, "missing set name"))?;
        if names.is_empty() {
            return Err(err(line, "empty set"));
        }
        let slot = match *which {
            "A" => &mut self.set_a,
            "B" => &mut self.set_b,
            other => return Err(err(line, format!("unknown set `{other}`; expected A or B"))),
        };
        if slot.is_some() {
            return Err(err(line, format!("duplicate set {which}")));
        }
        *slot = Some((line, names.iter().map(|s| s.to_string()).collect()));
        Ok(())
    }

    fn role(&mut self, line: usize, args: &[&str]) -> Result<()> {
        let [role, name] = args else {
            return Err(err(line, "expected `role <S|Tn> <time-name>`"));
        };
        if *role == "S" {
            if self.target.is_some() {
                return Err(err(line, "duplicate role S"));
            }
            self.target = Some((line, name.to_string()));
            return Ok(());
        }
        let index = role
            .strip_prefix('T')
            .and_then(|n| n.parse::<usize>().ok())
            .filter(|n| *n >= 1)
            .ok_or_else(|| err(line, format!("unknown role `{role}`")))?;
        if self.parts.iter().any(|(_, i, _)| *i == index) {
            return Err(err(line, format!("duplicate role {role}")));
        }
        self.parts.push((line, index, name.to_string()));
        Ok(())
    }

    fn finish(mut self, last_line: usize) -> Result<Instance> {
        let space = self.space.take().ok_or_else(|| err(last_line, "missing `omega`"))?;
        if self.entries.is_empty() {
            return Err(err(last_line, "missing `breakpoint`"));
        }
        let filtration = Filtration::new(space, std::mem::take(&mut self.entries))
            .map_err(|e| err(last_line, e.to_string()))?;
        let known = |line: usize, name: &str| -> Result<String> {
            if self.times.iter().any(|(_, n, _)| n == name) {
                Ok(name.to_string())
            } else {
                Err(err(line, format!("unknown time `{name}`")))
            }
        };
        let mut instance = Instance::new(filtration.clone());
        if let Some((line, names)) = &self.set_a {
            instance.set_a = names.iter().map(|n| known(*line, n)).collect::<Result<_>>()?;
        }
        if let Some((line, names)) = &self.set_b {
            instance.set_b = names.iter().map(|n| known(*line, n)).collect::<Result<_>>()?;
        }
        if let Some((line, name)) = &self.target {
            instance.target = Some(known(*line, name)?);
        }
        self.parts.sort_by_key(|(_, i, _)| *i);
        for (k, (line, index, name)) in self.parts.iter().enumerate() {
            if *index != k + 1 {
                return Err(err(*line, format!("role T{index} without T{}", k + 1)));
            }
            instance.parts.push(known(*line, name)?);
        }
        instance.times = self.times.into_iter().map(|(_, n, t)| (n, t)).collect();
        instance.rvs = self.rvs.into_iter().map(|(_, n, r)| (n, r)).collect();
        Ok(instance)
    }
}
