//! Handle-calculus replay: a second, independent route to the homological
//! bookkeeping of the blow-down constructions.
//!
//! A script is a list of Kirby-move directives (`init cp2`, `pair 2-3`,
//! `slide`, `blowup`) interleaved with `expect` assertions. Replaying a
//! script drives a [`HandleLedger`], which tracks handle counts by index
//! and the second-homology class of every 2-handle in the current ambient
//! lattice `diag(1, n)`. The built-in scripts reconstruct the
//! configurations of the data set move by move, so their `expect config`
//! lines cross-check the lattice-level chain data against an origin that
//! never touches it.
//!
//! Grammar (one directive per line, `#` starts a comment):
//!
//! ```text
//! name <script-name>
//! extend <builtin-name>          # inline the moves (not expects) of a builtin
//! init cp2
//! pair 2-3 | pair 1-2            # add a cancelling handle pair
//! cancel 2-3 | cancel 1-2        # remove one (the 2-handle class must be 0)
//! slide (A) + (B)                # the handle with class A slides over B
//! slide (A) - (B)
//! blowup                         # disjoint blow-up
//! blowup (A):m (B):k ...         # blow up a point on A (mult m), B (mult k), ...
//! expect class (A)
//! expect square (A) <n>
//! expect counts c0 c1 c2 c3 c4
//! expect euler <n>
//! expect ambient <n>
//! expect signature <pos> <neg>
//! expect config <p> (S1) (S2) ...
//! ```

use num_bigint::BigInt;

use crate::dataset;
use crate::error::{Error, Result};
use crate::lattice::{gram_of, rational_inertia, ClassVector, Lattice, Signature};
use crate::rbd::{validate_config, CpConfiguration};

/// Handle counts by index and the classes of all 2-handles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HandleLedger {
    counts: [usize; 5],
    classes: Vec<ClassVector>,
    ambient_n: usize,
    initialized: bool,
}

impl HandleLedger {
    /// An empty ledger; `init cp2` must run before any other move.
    pub fn new() -> Self {
        HandleLedger {
            counts: [0; 5],
            classes: Vec::new(),
            ambient_n: 0,
            initialized: false,
        }
    }

    /// Handle counts `[c0, c1, c2, c3, c4]`.
    pub fn counts(&self) -> [usize; 5] {
        self.counts
    }

    /// Classes of the 2-handles, in attachment order, as vectors in
    /// `diag(1, ambient_n)`.
    pub fn classes(&self) -> &[ClassVector] {
        &self.classes
    }

    /// Number of exceptional directions in the ambient lattice.
    pub fn ambient_n(&self) -> usize {
        self.ambient_n
    }

    /// The ambient intersection form `diag(1, ambient_n)`.
    pub fn ambient_lattice(&self) -> Lattice {
        Lattice::diagonal(1, self.ambient_n)
    }

    /// Euler characteristic `c0 - c1 + c2 - c3 + c4`.
    pub fn euler(&self) -> i64 {
        let c = &self.counts;
        c[0] as i64 - c[1] as i64 + c[2] as i64 - c[3] as i64 + c[4] as i64
    }

    /// Inertia of the Gram matrix spanned by the 2-handle classes
    /// (dependent and zero classes contribute to the zero count).
    pub fn span_signature(&self) -> Signature {
        let ambient = self.ambient_lattice();
        let gram = gram_of(&ambient, &self.classes);
        rational_inertia(&gram)
    }

    fn require_init(&self, step: usize) -> Result<()> {
        if !self.initialized {
            return Err(Error::MoveRejected {
                step,
                reason: "ledger not initialized; the first move must be `init cp2`".into(),
            });
        }
        Ok(())
    }

    fn init_cp2(&mut self, step: usize) -> Result<()> {
        if self.initialized {
            return Err(Error::MoveRejected {
                step,
                reason: "ledger already initialized".into(),
            });
        }
        self.counts = [1, 0, 1, 0, 1];
        self.classes = vec![ClassVector::from_i64(&[1])];
        self.ambient_n = 0;
        self.initialized = true;
        Ok(())
    }

    fn pair(&mut self, step: usize, lower: usize) -> Result<()> {
        self.require_init(step)?;
        self.counts[lower] += 1;
        self.counts[lower + 1] += 1;
        // Either way the new 2-handle starts with trivial class.
        self.classes.push(ClassVector::zero(self.ambient_n + 1));
        Ok(())
    }

    fn cancel(&mut self, step: usize, lower: usize) -> Result<()> {
        self.require_init(step)?;
        if self.counts[lower] == 0 || self.counts[lower + 1] == 0 {
            return Err(Error::MoveRejected {
                step,
                reason: format!("no {lower}-/{}-handle pair to cancel", lower + 1),
            });
        }
        let zero_at = self
            .classes
            .iter()
            .position(|c| c.is_zero())
            .ok_or_else(|| Error::MoveRejected {
                step,
                reason: "cancelling a handle pair needs a 2-handle of trivial class".into(),
            })?;
        self.classes.remove(zero_at);
        self.counts[lower] -= 1;
        self.counts[lower + 1] -= 1;
        Ok(())
    }

    fn find_class(&self, v: &ClassVector, skip: Option<usize>) -> Option<usize> {
        self.classes
            .iter()
            .enumerate()
            .find(|(i, c)| Some(*i) != skip && *c == v)
            .map(|(i, _)| i)
    }

    fn slide(&mut self, step: usize, moving: &ClassVector, positive: bool, over: &ClassVector) -> Result<()> {
        self.require_init(step)?;
        let i = self.find_class(moving, None).ok_or_else(|| Error::MoveRejected {
            step,
            reason: format!("no handle has class {}", moving.format_he()),
        })?;
        let j = self.find_class(over, Some(i)).ok_or_else(|| Error::MoveRejected {
            step,
            reason: format!("no other handle has class {}", over.format_he()),
        })?;
        let other = self.classes[j].clone();
        self.classes[i] = if positive {
            self.classes[i].add(&other)
        } else {
            self.classes[i].sub(&other)
        };
        Ok(())
    }

    fn blowup(&mut self, step: usize, links: &[(ClassVector, u64)]) -> Result<()> {
        self.require_init(step)?;
        let mut indices = Vec::with_capacity(links.len());
        for (class, _) in links {
            let mut found = None;
            for (i, c) in self.classes.iter().enumerate() {
                if c == class && !indices.contains(&i) {
                    found = Some(i);
                    break;
                }
            }
            let i = found.ok_or_else(|| Error::MoveRejected {
                step,
                reason: format!("no unlinked handle has class {}", class.format_he()),
            })?;
            indices.push(i);
        }
        self.ambient_n += 1;
        let dim = self.ambient_n + 1;
        for c in self.classes.iter_mut() {
            *c = c.extended(1);
        }
        let e_new = ClassVector::standard_basis(dim, dim - 1);
        for (&i, (_, mult)) in indices.iter().zip(links) {
            let shift = e_new.scale(&BigInt::from(*mult));
            self.classes[i] = self.classes[i].sub(&shift);
        }
        self.classes.push(e_new);
        self.counts[2] += 1;
        Ok(())
    }

    /// Handle counts after replacing the `(p-1)`-sphere chain of `config`
    /// by the rational ball: the chain handles disappear, a single
    /// 2-handle survives, and the 0-/4-handle structure is unchanged.
    ///
    /// Every chain sphere must be the class of a distinct current handle,
    /// and the configuration must be valid in the current ambient form.
    pub fn blowdown_counts(&self, config: &CpConfiguration) -> Result<[usize; 5]> {
        validate_config(&self.ambient_lattice(), config)?;
        if self.counts[1] != 0 {
            return Err(Error::precondition(
                "blowdown_counts",
                "ledger still has 1-handles",
            ));
        }
        let mut used: Vec<usize> = Vec::new();
        for sphere in config.spheres() {
            let mut found = None;
            for (i, c) in self.classes.iter().enumerate() {
                if c == sphere && !used.contains(&i) {
                    found = Some(i);
                    break;
                }
            }
            match found {
                Some(i) => used.push(i),
                None => {
                    return Err(Error::precondition(
                        "blowdown_counts",
                        format!(
                            "chain sphere {} is not the class of any handle",
                            sphere.format_he()
                        ),
                    ))
                }
            }
        }
        let p = config.p() as usize;
        if self.counts[2] + 1 < p {
            return Err(Error::precondition(
                "blowdown_counts",
                "fewer 2-handles than the chain length",
            ));
        }
        Ok([1, 0, self.counts[2] - (p - 1), self.counts[3], 1])
    }
}

impl Default for HandleLedger {
    fn default() -> Self {
        HandleLedger::new()
    }
}

// ---------------------------------------------------------------------------
// Script representation and parsing
// ---------------------------------------------------------------------------

/// A single Kirby move. Class expressions stay textual until replay, when
/// the ambient dimension is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    Init,
    Pair { lower: usize },
    Cancel { lower: usize },
    Slide { moving: String, positive: bool, over: String },
    Blowup { links: Vec<(String, u64)> },
    Extend { script: String },
}

/// A replay-time assertion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expect {
    Class(String),
    Square(String, BigInt),
    Counts([usize; 5]),
    Euler(i64),
    Ambient(usize),
    Signature(usize, usize),
    Config { p: u32, spheres: Vec<String> },
}

/// One parsed script step with its source line number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Move(Move),
    Expect(Expect),
}

/// A parsed move script.
#[derive(Clone, Debug)]
pub struct Script {
    pub name: String,
    pub steps: Vec<(usize, Step)>,
}

fn parse_err(line: usize, reason: impl Into<String>) -> Error {
    Error::ScriptParse {
        line,
        reason: reason.into(),
    }
}

fn strip_parens(line: usize, token: &str) -> Result<String> {
    token
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .map(str::to_owned)
        .ok_or_else(|| parse_err(line, format!("expected a parenthesized class, found `{token}`")))
}

fn parse_int<T: std::str::FromStr>(line: usize, token: &str, what: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| parse_err(line, format!("expected {what}, found `{token}`")))
}

/// Parses a script from text. Class expressions are validated only at
/// replay time, once the ambient dimension is known.
pub fn parse_script(text: &str) -> Result<Script> {
    let mut name = String::from("unnamed");
    let mut steps = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let step = match tokens[0] {
            "name" => {
                if tokens.len() != 2 {
                    return Err(parse_err(line, "usage: name <script-name>"));
                }
                name = tokens[1].to_owned();
                continue;
            }
            "extend" => {
                if tokens.len() != 2 {
                    return Err(parse_err(line, "usage: extend <builtin-name>"));
                }
                Step::Move(Move::Extend {
                    script: tokens[1].to_owned(),
                })
            }
            "init" => {
                if tokens.as_slice() != ["init", "cp2"] {
                    return Err(parse_err(line, "usage: init cp2"));
                }
                Step::Move(Move::Init)
            }
            "pair" | "cancel" => {
                let lower = match tokens.get(1).copied() {
                    Some("2-3") => 2,
                    Some("1-2") => 1,
                    _ => return Err(parse_err(line, format!("usage: {} 2-3 | {} 1-2", tokens[0], tokens[0]))),
                };
                if tokens[0] == "pair" {
                    Step::Move(Move::Pair { lower })
                } else {
                    Step::Move(Move::Cancel { lower })
                }
            }
            "slide" => {
                if tokens.len() != 4 {
                    return Err(parse_err(line, "usage: slide (A) + (B) | slide (A) - (B)"));
                }
                let positive = match tokens[2] {
                    "+" => true,
                    "-" => false,
                    other => return Err(parse_err(line, format!("expected + or -, found `{other}`"))),
                };
                Step::Move(Move::Slide {
                    moving: strip_parens(line, tokens[1])?,
                    positive,
                    over: strip_parens(line, tokens[3])?,
                })
            }
            "blowup" => {
                let mut links = Vec::new();
                for token in &tokens[1..] {
                    let (class_part, mult_part) = token.rsplit_once(':').ok_or_else(|| {
                        parse_err(line, format!("expected `(class):multiplicity`, found `{token}`"))
                    })?;
                    let mult: u64 = parse_int(line, mult_part, "a multiplicity")?;
                    if mult == 0 {
                        return Err(parse_err(line, "multiplicity must be positive"));
                    }
                    links.push((strip_parens(line, class_part)?, mult));
                }
                Step::Move(Move::Blowup { links })
            }
            "expect" => {
                let kind = tokens
                    .get(1)
                    .copied()
                    .ok_or_else(|| parse_err(line, "expect needs a kind"))?;
                let expect = match kind {
                    "class" => {
                        if tokens.len() != 3 {
                            return Err(parse_err(line, "usage: expect class (A)"));
                        }
                        Expect::Class(strip_parens(line, tokens[2])?)
                    }
                    "square" => {
                        if tokens.len() != 4 {
                            return Err(parse_err(line, "usage: expect square (A) <n>"));
                        }
                        let n: BigInt = tokens[3]
                            .parse()
                            .map_err(|_| parse_err(line, format!("expected an integer, found `{}`", tokens[3])))?;
                        Expect::Square(strip_parens(line, tokens[2])?, n)
                    }
                    "counts" => {
                        if tokens.len() != 7 {
                            return Err(parse_err(line, "usage: expect counts c0 c1 c2 c3 c4"));
                        }
                        let mut c = [0usize; 5];
                        for (slot, token) in c.iter_mut().zip(&tokens[2..]) {
                            *slot = parse_int(line, token, "a handle count")?;
                        }
                        Expect::Counts(c)
                    }
                    "euler" => Expect::Euler(parse_int(
                        line,
                        tokens.get(2).copied().unwrap_or(""),
                        "an Euler characteristic",
                    )?),
                    "ambient" => Expect::Ambient(parse_int(
                        line,
                        tokens.get(2).copied().unwrap_or(""),
                        "an ambient rank",
                    )?),
                    "signature" => {
                        if tokens.len() != 4 {
                            return Err(parse_err(line, "usage: expect signature <pos> <neg>"));
                        }
                        Expect::Signature(
                            parse_int(line, tokens[2], "a count of positive squares")?,
                            parse_int(line, tokens[3], "a count of negative squares")?,
                        )
                    }
                    "config" => {
                        if tokens.len() < 4 {
                            return Err(parse_err(line, "usage: expect config <p> (S1) (S2) ..."));
                        }
                        let p: u32 = parse_int(line, tokens[2], "a blow-down order")?;
                        let spheres = tokens[3..]
                            .iter()
                            .map(|t| strip_parens(line, t))
                            .collect::<Result<Vec<_>>>()?;
                        Expect::Config { p, spheres }
                    }
                    other => return Err(parse_err(line, format!("unknown expectation `{other}`"))),
                };
                Step::Expect(expect)
            }
            other => return Err(parse_err(line, format!("unknown directive `{other}`"))),
        };
        steps.push((line, step));
    }
    Ok(Script { name, steps })
}

// ---------------------------------------------------------------------------
// Replay
// ---------------------------------------------------------------------------

/// The final state and statistics of a replay.
#[derive(Clone, Debug)]
pub struct ReplayOutcome {
    pub name: String,
    pub ledger: HandleLedger,
    pub moves_applied: usize,
    pub expects_checked: usize,
}

const MAX_EXTEND_DEPTH: usize = 8;

/// Replays a parsed script against a fresh ledger, applying every move and
/// checking every expectation. `extend` inlines the moves of a built-in
/// script, skipping its expectations.
pub fn replay(script: &Script) -> Result<ReplayOutcome> {
    let mut ledger = HandleLedger::new();
    let mut moves = 0usize;
    let mut expects = 0usize;
    run_steps(script, &mut ledger, true, 0, &mut moves, &mut expects)?;
    Ok(ReplayOutcome {
        name: script.name.clone(),
        ledger,
        moves_applied: moves,
        expects_checked: expects,
    })
}

/// Parses and replays a built-in script by name.
pub fn replay_builtin(name: &str) -> Result<ReplayOutcome> {
    let text = dataset::builtin_script(name).ok_or_else(|| Error::UnknownName {
        name: name.to_owned(),
    })?;
    replay(&parse_script(text)?)
}

fn run_steps(
    script: &Script,
    ledger: &mut HandleLedger,
    check_expects: bool,
    depth: usize,
    moves: &mut usize,
    expects: &mut usize,
) -> Result<()> {
    if depth > MAX_EXTEND_DEPTH {
        return Err(Error::precondition(
            "replay",
            "extend chain deeper than 8 scripts",
        ));
    }
    for (line, step) in &script.steps {
        match step {
            Step::Move(Move::Extend { script: base }) => {
                let text = dataset::builtin_script(base).ok_or_else(|| Error::MoveRejected {
                    step: *line,
                    reason: format!("`extend {base}`: no built-in script has that name"),
                })?;
                let parsed = parse_script(text)?;
                run_steps(&parsed, ledger, false, depth + 1, moves, expects)?;
            }
            Step::Move(mv) => {
                apply_move(ledger, *line, mv)?;
                *moves += 1;
            }
            Step::Expect(expect) => {
                if check_expects {
                    check_expect(ledger, *line, expect)?;
                    *expects += 1;
                }
            }
        }
    }
    Ok(())
}

fn resolve(ledger: &HandleLedger, line: usize, expr: &str) -> Result<ClassVector> {
    ClassVector::parse_he(expr, ledger.ambient_n + 1).map_err(|e| Error::MoveRejected {
        step: line,
        reason: format!("class `{expr}`: {e}"),
    })
}

fn apply_move(ledger: &mut HandleLedger, line: usize, mv: &Move) -> Result<()> {
    match mv {
        Move::Init => ledger.init_cp2(line),
        Move::Pair { lower } => ledger.pair(line, *lower),
        Move::Cancel { lower } => ledger.cancel(line, *lower),
        Move::Slide {
            moving,
            positive,
            over,
        } => {
            let a = resolve(ledger, line, moving)?;
            let b = resolve(ledger, line, over)?;
            ledger.slide(line, &a, *positive, &b)
        }
        Move::Blowup { links } => {
            let resolved = links
                .iter()
                .map(|(expr, mult)| Ok((resolve(ledger, line, expr)?, *mult)))
                .collect::<Result<Vec<_>>>()?;
            ledger.blowup(line, &resolved)
        }
        Move::Extend { .. } => unreachable!("extend handled by run_steps"),
    }
}

fn expect_err(line: usize, reason: String) -> Error {
    Error::MoveRejected { step: line, reason }
}

fn check_expect(ledger: &HandleLedger, line: usize, expect: &Expect) -> Result<()> {
    match expect {
        Expect::Class(expr) => {
            let v = resolve(ledger, line, expr)?;
            if ledger.find_class(&v, None).is_none() {
                return Err(expect_err(
                    line,
                    format!("expected a handle with class {}", v.format_he()),
                ));
            }
        }
        Expect::Square(expr, want) => {
            let v = resolve(ledger, line, expr)?;
            let got = ledger.ambient_lattice().square(&v)?;
            if got != *want {
                return Err(expect_err(
                    line,
                    format!("class {} has square {got}, expected {want}", v.format_he()),
                ));
            }
        }
        Expect::Counts(want) => {
            if ledger.counts() != *want {
                return Err(expect_err(
                    line,
                    format!("handle counts {:?}, expected {:?}", ledger.counts(), want),
                ));
            }
        }
        Expect::Euler(want) => {
            if ledger.euler() != *want {
                return Err(expect_err(
                    line,
                    format!("Euler characteristic {}, expected {want}", ledger.euler()),
                ));
            }
        }
        Expect::Ambient(want) => {
            if ledger.ambient_n() != *want {
                return Err(expect_err(
                    line,
                    format!("ambient rank {}, expected {want}", ledger.ambient_n()),
                ));
            }
        }
        Expect::Signature(pos, neg) => {
            let sig = ledger.span_signature();
            if sig.positive != *pos || sig.negative != *neg {
                return Err(expect_err(
                    line,
                    format!(
                        "handle span has inertia ({}, {}), expected ({pos}, {neg})",
                        sig.positive, sig.negative
                    ),
                ));
            }
        }
        Expect::Config { p, spheres } => {
            let resolved = spheres
                .iter()
                .map(|expr| resolve(ledger, line, expr))
                .collect::<Result<Vec<_>>>()?;
            let config = CpConfiguration::new(*p, resolved)
                .map_err(|e| expect_err(line, format!("configuration: {e}")))?;
            validate_config(&ledger.ambient_lattice(), &config)
                .map_err(|e| expect_err(line, format!("configuration: {e}")))?;
            for sphere in config.spheres() {
                if ledger.find_class(sphere, None).is_none() {
                    return Err(expect_err(
                        line,
                        format!(
                            "chain sphere {} is not the class of any handle",
                            sphere.format_he()
                        ),
                    ));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::SCRIPT_NAMES;

    #[test]
    fn all_builtin_scripts_replay() {
        for name in SCRIPT_NAMES {
            let outcome = replay_builtin(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(outcome.name, name);
            assert!(outcome.expects_checked > 0, "{name} asserts nothing");
        }
    }

    #[test]
    fn fiber_assembly_counts() {
        let outcome = replay_builtin("lemma-3.1").unwrap();
        assert_eq!(outcome.ledger.counts(), [1, 0, 12, 2, 1]);
        assert_eq!(outcome.ledger.euler(), 12);
        assert_eq!(outcome.ledger.ambient_n(), 9);
        let fiber = ClassVector::from_i64(&[6, -2, -2, -2, -2, -2, -2, -2, -2, -2]);
        assert!(outcome.ledger.classes().contains(&fiber));
    }

    #[test]
    fn blowdown_counts_across_all_chain_scripts() {
        // (script, p, expected counts after the rational-ball swap)
        let cases: [(&str, [usize; 5]); 4] = [
            ("prop-3.2-q3", [1, 0, 12, 2, 1]),
            ("prop-3.2-q5", [1, 0, 12, 2, 1]),
            ("prop-3.3", [1, 0, 10, 0, 1]),
            ("remark-6.1", [1, 0, 11, 1, 1]),
        ];
        for (name, want) in cases {
            let outcome = replay_builtin(name).unwrap();
            let config = final_config(name, &outcome.ledger);
            let counts = outcome.ledger.blowdown_counts(&config).unwrap();
            assert_eq!(counts, want, "{name}");
            let euler = counts[0] as i64 - counts[1] as i64 + counts[2] as i64
                - counts[3] as i64
                + counts[4] as i64;
            assert_eq!(euler, 12, "{name}: every blow-down lands on Euler 12");
        }
    }

    /// Rebuilds the configuration asserted by the script's final
    /// `expect config` line, via the parsed script itself.
    fn final_config(name: &str, ledger: &HandleLedger) -> CpConfiguration {
        let text = dataset::builtin_script(name).unwrap();
        let script = parse_script(text).unwrap();
        for (line, step) in script.steps.iter().rev() {
            if let Step::Expect(Expect::Config { p, spheres }) = step {
                let resolved = spheres
                    .iter()
                    .map(|s| resolve(ledger, *line, s).unwrap())
                    .collect();
                return CpConfiguration::new(*p, resolved).unwrap();
            }
        }
        panic!("{name} has no expect config line");
    }

    #[test]
    fn slides_track_first_matching_handle() {
        let text = "init cp2\npair 2-3\nslide (0) + (h)\nslide (h) + (h)\nexpect class (2h)\nexpect class (h)\n";
        let outcome = replay(&parse_script(text).unwrap()).unwrap();
        assert_eq!(outcome.moves_applied, 4);
        assert_eq!(outcome.expects_checked, 2);
    }

    #[test]
    fn cancel_removes_a_trivial_pair() {
        let text = "init cp2\npair 2-3\ncancel 2-3\nexpect counts 1 0 1 0 1\n";
        let outcome = replay(&parse_script(text).unwrap()).unwrap();
        assert_eq!(outcome.ledger.counts(), [1, 0, 1, 0, 1]);
        // Cancelling requires a trivial class.
        let bad = "init cp2\npair 2-3\nslide (0) + (h)\ncancel 2-3\n";
        assert!(matches!(
            replay(&parse_script(bad).unwrap()),
            Err(Error::MoveRejected { step: 4, .. })
        ));
    }

    #[test]
    fn failed_expectations_carry_line_numbers() {
        let text = "init cp2\nexpect counts 1 0 2 0 1\n";
        match replay(&parse_script(text).unwrap()) {
            Err(Error::MoveRejected { step, .. }) => assert_eq!(step, 2),
            other => panic!("expected a rejected expectation, got {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert!(matches!(
            parse_script("init cp2\nwobble\n"),
            Err(Error::ScriptParse { line: 2, .. })
        ));
        assert!(matches!(
            parse_script("slide (h) * (h)\n"),
            Err(Error::ScriptParse { line: 1, .. })
        ));
        assert!(matches!(
            parse_script("blowup (h):0\n"),
            Err(Error::ScriptParse { line: 1, .. })
        ));
    }

    #[test]
    fn moves_before_init_are_rejected() {
        let text = "pair 2-3\n";
        assert!(matches!(
            replay(&parse_script(text).unwrap()),
            Err(Error::MoveRejected { step: 1, .. })
        ));
    }

    #[test]
    fn blowup_links_take_distinct_handles() {
        // Two links naming the same class must bind two different handles.
        let text = "init cp2\npair 2-3\nslide (0) + (h)\nblowup (h):1 (h):1\n";
        let outcome = replay(&parse_script(text).unwrap()).unwrap();
        let e1 = ClassVector::from_i64(&[0, 1]);
        let shifted = ClassVector::from_i64(&[1, -1]);
        let hits = outcome
            .ledger
            .classes()
            .iter()
            .filter(|c| **c == shifted)
            .count();
        assert_eq!(hits, 2, "both h-handles pass through the blown-up point");
        assert!(outcome.ledger.classes().contains(&e1));
    }
}
