//! Symbolic walks through the tower and the occurrence/gap analysis of
//! circuits inside projected walks.
//!
//! A [`SymWalk`] is a run-length list of loop (`E`) and circuit (`C_i`)
//! tokens at one level, always starting and ending at the base vertex. Its
//! length is `sum rep * (1 for E, l(n,i) for C_i)`. Projection replaces each
//! circuit token by its rewrite template, so the length is preserved.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::{VertexId, WalkSeq};
use crate::report::Report;
use crate::tower::Tower;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    /// The loop `e_{n,0}`.
    Loop,
    /// The circuit `c_{n,i}`, `i >= 1`.
    Circuit(usize),
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sym::Loop => f.write_str("E"),
            Sym::Circuit(i) => write!(f, "C{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub sym: Sym,
    pub rep: BigUint,
}

impl Token {
    pub fn new(sym: Sym, rep: impl Into<BigUint>) -> Self {
        Token {
            sym,
            rep: rep.into(),
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rep.is_one() {
            write!(f, "{}", self.sym)
        } else {
            write!(f, "{}^{}", self.sym, self.rep)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymWalk {
    level: usize,
    tokens: Vec<Token>,
}

impl SymWalk {
    /// Checks circuit indices against the level; merges adjacent equal
    /// symbols and drops empty runs.
    pub fn new(level: usize, tokens: Vec<Token>) -> Result<Self> {
        for tok in &tokens {
            if let Sym::Circuit(i) = tok.sym {
                if i == 0 || i > level {
                    return Err(Error::OutOfRange(format!(
                        "C{i} does not exist at level {level}"
                    )));
                }
            }
        }
        Ok(SymWalk::from_tokens_unchecked(level, tokens))
    }

    pub(crate) fn from_tokens_unchecked(level: usize, tokens: Vec<Token>) -> Self {
        let mut walk = SymWalk {
            level,
            tokens: Vec::with_capacity(tokens.len()),
        };
        for tok in tokens {
            walk.push(tok.sym, tok.rep);
        }
        walk
    }

    /// One traversal of `c_{level,i}`.
    pub fn circuit(level: usize, i: usize) -> Result<Self> {
        SymWalk::new(level, vec![Token::new(Sym::Circuit(i), 1u32)])
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    fn push(&mut self, sym: Sym, rep: BigUint) {
        if rep.is_zero() {
            return;
        }
        match self.tokens.last_mut() {
            Some(last) if last.sym == sym => last.rep += rep,
            _ => self.tokens.push(Token { sym, rep }),
        }
    }

    /// `self + other`.
    pub fn concat(&self, other: &SymWalk) -> Result<SymWalk> {
        if self.level != other.level {
            return Err(Error::GraphMismatch(format!(
                "walks at levels {} and {}",
                self.level, other.level
            )));
        }
        let mut out = self.clone();
        for tok in &other.tokens {
            out.push(tok.sym, tok.rep.clone());
        }
        Ok(out)
    }

    /// `k` back-to-back copies.
    pub fn repeat(&self, k: usize) -> SymWalk {
        let mut out = SymWalk {
            level: self.level,
            tokens: Vec::with_capacity(self.tokens.len() * k),
        };
        for _ in 0..k {
            for tok in &self.tokens {
                out.push(tok.sym, tok.rep.clone());
            }
        }
        out
    }

    /// Symbolic edge length.
    pub fn length(&self, t: &Tower) -> BigUint {
        self.tokens
            .iter()
            .map(|tok| &tok.rep * t.sym_length(self.level, tok.sym))
            .sum()
    }

    pub fn contains_circuit(&self, i: usize) -> bool {
        self.tokens.iter().any(|tok| tok.sym == Sym::Circuit(i))
    }
}

impl fmt::Display for SymWalk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tokens.is_empty() {
            return f.write_str("()");
        }
        for (k, tok) in self.tokens.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{tok}")?;
        }
        Ok(())
    }
}

/// Parses `"<level>:<tokens>"`, tokens like `E`, `E^3`, `C2`, `C1^2`,
/// separated by spaces or `+`.
impl FromStr for SymWalk {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (level, body) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("walk {s:?} lacks a level prefix")))?;
        let level: usize = level
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad level in {s:?}")))?;
        let mut tokens = Vec::new();
        for word in body.split(|c: char| c.is_whitespace() || c == '+') {
            if word.is_empty() || word == "()" {
                continue;
            }
            let (head, rep) = match word.split_once('^') {
                Some((h, r)) => (
                    h,
                    r.parse::<BigUint>()
                        .map_err(|_| Error::Parse(format!("bad repetition in {word:?}")))?,
                ),
                None => (word, BigUint::one()),
            };
            let sym = if head == "E" {
                Sym::Loop
            } else if let Some(idx) = head.strip_prefix('C') {
                Sym::Circuit(
                    idx.parse()
                        .map_err(|_| Error::Parse(format!("bad circuit in {word:?}")))?,
                )
            } else {
                return Err(Error::Parse(format!("unknown token {word:?}")));
            };
            tokens.push(Token { sym, rep });
        }
        SymWalk::new(level, tokens)
    }
}

/// Rewrites every circuit token through the cover into level `n-1`.
pub fn project_one(t: &Tower, w: &SymWalk) -> Result<SymWalk> {
    let n = w.level;
    if n == 0 {
        return Err(Error::OutOfRange("level 0 has nothing below it".into()));
    }
    t.check_level(n)?;
    let limit = t.explicit_limit();
    let mut out = SymWalk {
        level: n - 1,
        tokens: Vec::new(),
    };
    for tok in &w.tokens {
        match tok.sym {
            Sym::Loop => out.push(Sym::Loop, tok.rep.clone()),
            Sym::Circuit(i) => {
                let tmpl = &t.template(n - 1, i).walk;
                if let [single] = tmpl.tokens() {
                    // the top circuit collapses onto the loop
                    out.push(single.sym, &single.rep * &tok.rep);
                    continue;
                }
                let needed = BigUint::from(out.tokens.len() + tmpl.tokens.len()) * &tok.rep;
                if needed > BigUint::from(limit) {
                    return Err(Error::limit("projected token count", needed, limit));
                }
                let reps = tok.rep.to_usize().expect("bounded by limit");
                for _ in 0..reps {
                    for inner in tmpl.tokens() {
                        out.push(inner.sym, inner.rep.clone());
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Iterated [`project_one`] down to level `m`.
pub fn project_to(t: &Tower, w: &SymWalk, m: usize) -> Result<SymWalk> {
    if m > w.level {
        return Err(Error::OutOfRange(format!(
            "cannot project a level-{} walk up to level {m}",
            w.level
        )));
    }
    let mut cur = w.clone();
    while cur.level > m {
        cur = project_one(t, &cur)?;
    }
    Ok(cur)
}

/// `sum_{k=d}^{n} m(n,k) * phi_{n,m}(c_{n,k}) + e_{m,0}`: the part of a
/// level-`n` template after the `C_{d-1}` block, projected to level `m`.
/// `d = n + 1` gives the bare loop.
pub fn r_walk(t: &Tower, n: usize, d: usize, m: usize) -> Result<SymWalk> {
    check_r_indices(t, n, d, m)?;
    let mut tokens = Vec::with_capacity(n + 2 - d);
    for k in d..=n {
        let mult = t
            .config()
            .mult(n, k)
            .ok_or_else(|| Error::OutOfRange(format!("no multiplicity m({n},{k})")))?;
        tokens.push(Token::new(Sym::Circuit(k), mult));
    }
    tokens.push(Token::new(Sym::Loop, 1u32));
    project_to(t, &SymWalk::new(n, tokens)?, m)
}

fn check_r_indices(t: &Tower, n: usize, d: usize, m: usize) -> Result<()> {
    t.check_level(n)?;
    if d == 0 || d > n + 1 || m > n {
        return Err(Error::OutOfRange(format!(
            "r_walk needs 1 <= d <= n+1 and m <= n, got n={n} d={d} m={m}"
        )));
    }
    Ok(())
}

/// Length of [`r_walk`], read off the length table.
pub fn r_length(t: &Tower, n: usize, d: usize) -> Result<BigUint> {
    check_r_indices(t, n, d, 0)?;
    let mut total = BigUint::one();
    for k in d..=n {
        let mult = t
            .config()
            .mult(n, k)
            .ok_or_else(|| Error::OutOfRange(format!("no multiplicity m({n},{k})")))?;
        total += t.len(n, k) * mult;
    }
    Ok(total)
}

/// The explicit vertex sequence of a symbolic walk inside the materialized
/// level. A brute-force path used to cross-check the symbolic machinery.
pub fn expand_explicit(t: &Tower, w: &SymWalk, limit: u64) -> Result<WalkSeq> {
    let len = w.length(t);
    if len > BigUint::from(limit) {
        return Err(Error::limit("explicit walk length", len, limit));
    }
    let n = w.level;
    let mut verts = Vec::with_capacity(len.to_usize().expect("bounded") + 1);
    verts.push(VertexId::new(0));
    // ids of each circuit's interior, as laid out by materialize_level
    let mut firsts = vec![0usize; n + 1];
    let mut next = 1;
    for (i, first) in firsts.iter_mut().enumerate().skip(1) {
        *first = next;
        next += t.len(n, i).to_usize().expect("bounded") - 1;
    }
    for tok in &w.tokens {
        let reps = tok.rep.to_usize().expect("bounded");
        match tok.sym {
            Sym::Loop => verts.extend(std::iter::repeat_n(VertexId::new(0), reps)),
            Sym::Circuit(i) => {
                let interior = t.len(n, i).to_usize().expect("bounded") - 1;
                for _ in 0..reps {
                    verts.extend((firsts[i]..firsts[i] + interior).map(VertexId::new));
                    verts.push(VertexId::new(0));
                }
            }
        }
    }
    Ok(WalkSeq::from_raw(verts))
}

/// Back-to-back traversals of the target circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccurrenceRun {
    /// Edge offset of the first traversal from the walk start.
    pub start: BigUint,
    pub count: BigUint,
}

/// Where a circuit `c_{N,l}` is traversed inside a walk and the gaps between
/// consecutive traversals. Runs are maximal, so every gap between runs is
/// positive and every gap inside a run is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapSpectrum {
    pub circuit: usize,
    pub unit: BigUint,
    pub runs: Vec<OccurrenceRun>,
}

impl GapSpectrum {
    pub fn occurrence_count(&self) -> BigUint {
        self.runs.iter().map(|r| &r.count).sum()
    }

    /// Run-length encoded gap sequence `(value, multiplicity)`, in order.
    pub fn gap_runs(&self) -> Vec<(BigUint, BigUint)> {
        let mut out: Vec<(BigUint, BigUint)> = Vec::new();
        let mut push = |value: BigUint, count: BigUint| {
            if count.is_zero() {
                return;
            }
            match out.last_mut() {
                Some((v, c)) if *v == value => *c += count,
                _ => out.push((value, count)),
            }
        };
        for (k, run) in self.runs.iter().enumerate() {
            if k > 0 {
                let prev = &self.runs[k - 1];
                let prev_end = &prev.start + &prev.count * &self.unit;
                push(&run.start - prev_end, BigUint::one());
            }
            push(BigUint::zero(), &run.count - 1u32);
        }
        out
    }

    pub fn max_gap(&self) -> Option<BigUint> {
        self.gap_runs().into_iter().map(|(v, _)| v).max()
    }

    /// Every occurrence start, expanded.
    pub fn occurrences(&self) -> Vec<BigUint> {
        let mut out = Vec::new();
        for run in &self.runs {
            let mut at = run.start.clone();
            let mut left = run.count.clone();
            while !left.is_zero() {
                out.push(at.clone());
                at += &self.unit;
                left -= 1u32;
            }
        }
        out
    }

    /// Every gap, expanded.
    pub fn gaps(&self) -> Vec<BigUint> {
        let mut out = Vec::new();
        for (value, count) in self.gap_runs() {
            let k = count.to_usize().expect("expansion requested");
            out.extend(std::iter::repeat_n(value, k));
        }
        out
    }

    /// Canonical text: occurrence starts, then gaps, comma separated.
    pub fn render(&self) -> String {
        let join = |xs: Vec<BigUint>| {
            xs.iter()
                .map(BigUint::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        format!(
            "circuit={} unit={} occurrences={} gaps={}",
            self.circuit,
            self.unit,
            join(self.occurrences()),
            join(self.gaps())
        )
    }

    /// CSV rows `index,start,gap_after` (empty gap after the last one).
    pub fn to_csv(&self) -> Result<String> {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Parse(e.to_string());
        wtr.write_record(["index", "start", "gap_after"]).map_err(io)?;
        let starts = self.occurrences();
        let gaps = self.gaps();
        for (k, start) in starts.iter().enumerate() {
            let gap = gaps.get(k).map(BigUint::to_string).unwrap_or_default();
            wtr.write_record([k.to_string(), start.to_string(), gap])
                .map_err(io)?;
        }
        let bytes = wtr.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Occurrences of `c_{N,l}` in `w`: each unit of a `C_l` token.
pub fn gap_spectrum(t: &Tower, w: &SymWalk, l: usize) -> Result<GapSpectrum> {
    let n = w.level;
    if l == 0 || l > n {
        return Err(Error::OutOfRange(format!(
            "circuit {l} does not exist at level {n}"
        )));
    }
    let mut runs = Vec::new();
    let mut offset = BigUint::zero();
    for tok in &w.tokens {
        if tok.sym == Sym::Circuit(l) {
            runs.push(OccurrenceRun {
                start: offset.clone(),
                count: tok.rep.clone(),
            });
        }
        offset += &tok.rep * t.sym_length(n, tok.sym);
    }
    Ok(GapSpectrum {
        circuit: l,
        unit: t.len(n, l).clone(),
        runs,
    })
}

/// `g(n,l,N) = (n - N) + sum_{k=N}^{n-1} |r(k, l+1, N)|`: the largest gap
/// between traversals of `c_{N,l}` inside the projection of `c_{n,l} + c_{n,l}`.
pub fn g_formula(t: &Tower, n: usize, l: usize, big_n: usize) -> Result<BigUint> {
    if l == 0 || l > big_n || n < big_n {
        return Err(Error::OutOfRange(format!(
            "g needs 1 <= l <= N <= n, got n={n} l={l} N={big_n}"
        )));
    }
    t.check_level(n)?;
    let mut total = BigUint::from(n - big_n);
    for k in big_n..n {
        total += r_length(t, k, l + 1)?;
    }
    Ok(total)
}

fn check_gap_params(t: &Tower, n: usize, l: usize, big_n: usize) -> Result<()> {
    t.check_level(n)?;
    if l == 0 || l > big_n || big_n >= n {
        return Err(Error::OutOfRange(format!(
            "need 1 <= l <= N < n, got n={n} l={l} N={big_n}"
        )));
    }
    Ok(())
}

fn projected_circuit(t: &Tower, n: usize, l: usize, big_n: usize, copies: usize) -> Result<SymWalk> {
    project_to(t, &SymWalk::circuit(n, l)?.repeat(copies), big_n)
}

/// `value -> m` with `g(m,l,N) = value`, for `N <= m <= n`.
fn g_table(t: &Tower, n: usize, l: usize, big_n: usize) -> Result<Vec<(BigUint, usize)>> {
    (big_n..=n)
        .map(|m| Ok((g_formula(t, m, l, big_n)?, m)))
        .collect()
}

/// Every gap between traversals of `c_{N,l}` in the projection of `c_{n,l}`
/// is 0 or some `g(m,l,N)` with `N < m <= n`, and the largest gap in the
/// projection of `c_{n,l} + c_{n,l}` sits at the junction and equals
/// `g(n,l,N)`.
pub fn verify_spectrum(t: &Tower, n: usize, l: usize, big_n: usize) -> Result<Report> {
    check_gap_params(t, n, l, big_n)?;
    let mut report = Report::new("verify_spectrum")
        .param("n", n)
        .param("l", l)
        .param("N", big_n);
    let table = g_table(t, n, l, big_n)?;
    let single = gap_spectrum(t, &projected_circuit(t, n, l, big_n, 1)?, l)?;
    let mut index = BigUint::zero();
    for (value, count) in single.gap_runs() {
        if !table.iter().any(|(g, _)| *g == value) {
            report.detail("gap", &value);
            report.detail("gap_index", &index);
            report.fail("gap is neither 0 nor g(m,l,N)");
            return Ok(report);
        }
        index += count;
    }
    report.detail("gaps", &index);

    let expected = g_formula(t, n, l, big_n)?;
    let doubled = gap_spectrum(t, &projected_circuit(t, n, l, big_n, 2)?, l)?;
    let half = t.len(n, l);
    let junction = doubled
        .runs
        .windows(2)
        .find(|pair| &pair[1].start >= half)
        .map(|pair| &pair[1].start - (&pair[0].start + &pair[0].count * &doubled.unit));
    let max = doubled.max_gap();
    report.detail("g", &expected);
    match (&junction, &max) {
        (Some(j), Some(m)) if *j == expected && *m == expected => {}
        _ => {
            report.detail(
                "junction_gap",
                junction.map_or("none".into(), |j| j.to_string()),
            );
            report.detail("max_gap", max.map_or("none".into(), |m| m.to_string()));
            report.fail("largest gap of the doubled walk differs from g(n,l,N)");
        }
    }
    Ok(report)
}

/// Between any two gaps of value `g(m,l,N)` in the projection of `c_{n,l}`
/// there is a gap `g(m',l,N)` with `m' > m`.
pub fn verify_interleaving(t: &Tower, n: usize, l: usize, big_n: usize) -> Result<Report> {
    check_gap_params(t, n, l, big_n)?;
    let mut report = Report::new("verify_interleaving")
        .param("n", n)
        .param("l", l)
        .param("N", big_n);
    let table = g_table(t, n, l, big_n)?;
    let spectrum = gap_spectrum(t, &projected_circuit(t, n, l, big_n, 1)?, l)?;
    let level_of = |v: &BigUint| table.iter().find(|(g, _)| g == v).map(|(_, m)| *m);

    // Strictly decreasing stack of (value, gap index). A new gap pops smaller
    // values; meeting an equal value on top means nothing larger sat between.
    let mut stack: Vec<(BigUint, BigUint)> = Vec::new();
    let mut pattern = Vec::new();
    let mut index = BigUint::zero();
    for (value, count) in spectrum.gap_runs() {
        if count > BigUint::one() {
            report.detail("gap", &value);
            report.detail("first_index", &index);
            report.detail("second_index", &index + 1u32);
            report.fail("adjacent equal gaps");
            return Ok(report);
        }
        match level_of(&value) {
            Some(m) => {
                if !value.is_zero() && pattern.len() < 64 {
                    pattern.push(m.to_string());
                }
            }
            None => {
                report.detail("gap", &value);
                report.detail("gap_index", &index);
                report.fail("gap is not of the form g(m,l,N)");
                return Ok(report);
            }
        }
        while stack.last().is_some_and(|(v, _)| *v < value) {
            stack.pop();
        }
        if let Some((v, at)) = stack.last() {
            if *v == value {
                report.detail("gap", &value);
                report.detail("first_index", at);
                report.detail("second_index", &index);
                report.fail("two equal gaps with no larger gap between them");
                return Ok(report);
            }
        }
        stack.push((value, index.clone()));
        index += 1u32;
    }
    report.detail("gaps", &index);
    report.detail("pattern", pattern.join(","));
    Ok(report)
}

/// After the last traversal of `c_{N,l}` in the projection of `c_{n,l}`,
/// `c_{N,l+1}` still occurs, and two of its gaps equal `g(n-1,l+1,N)` with
/// only smaller gaps between them.
pub fn verify_tail(t: &Tower, n: usize, l: usize, big_n: usize) -> Result<Report> {
    t.check_level(n)?;
    if l == 0 || l >= big_n || n < big_n + 2 {
        return Err(Error::OutOfRange(format!(
            "verify_tail needs 1 <= l < N and n >= N + 2, got n={n} l={l} N={big_n}"
        )));
    }
    let mut report = Report::new("verify_tail")
        .param("n", n)
        .param("l", l)
        .param("N", big_n);
    let walk = projected_circuit(t, n, l, big_n, 1)?;
    let own = gap_spectrum(t, &walk, l)?;
    let tail_start = own
        .runs
        .last()
        .map(|r| &r.start + &r.count * &own.unit)
        .unwrap_or_default();
    report.detail("tail_start", &tail_start);

    let next = gap_spectrum(t, &walk, l + 1)?;
    let tail_runs: Vec<OccurrenceRun> = next
        .runs
        .into_iter()
        .filter(|r| r.start >= tail_start)
        .collect();
    let tail = GapSpectrum {
        circuit: l + 1,
        unit: next.unit,
        runs: tail_runs,
    };
    if tail.runs.is_empty() {
        report.fail("no traversal of c_{N,l+1} after the last c_{N,l}");
        return Ok(report);
    }
    report.detail("tail_occurrences", tail.occurrence_count());

    let target = g_formula(t, n - 1, l + 1, big_n)?;
    report.detail("g", &target);
    // Walk the tail's gaps with their start offsets; remember the last pair
    // of target-valued gaps that only has smaller gaps between them.
    let mut last_target_start: Option<BigUint> = None;
    let mut max_since = BigUint::zero();
    let mut pair: Option<(BigUint, BigUint)> = None;
    let mut prev_end: Option<BigUint> = None;
    for run in &tail.runs {
        let mut gaps: Vec<(BigUint, BigUint)> = Vec::new();
        if let Some(end) = &prev_end {
            gaps.push((end.clone(), &run.start - end));
        }
        // zero gaps inside the run
        if run.count > BigUint::one() {
            gaps.push((&run.start + &tail.unit, BigUint::zero()));
        }
        for (start, value) in gaps {
            if value == target {
                if let Some(first) = &last_target_start {
                    if max_since < target {
                        pair = Some((first.clone(), start.clone()));
                    }
                }
                last_target_start = Some(start);
                max_since = BigUint::zero();
            } else if value > max_since {
                max_since = value;
            }
        }
        prev_end = Some(&run.start + &run.count * &tail.unit);
    }
    match pair {
        Some((first, second)) => {
            report.detail("pair_first", &first);
            report.detail("pair_second", &second);
            report.detail("lead", &first - &tail_start);
        }
        None => report.fail("no pair of g(n-1,l+1,N) gaps with only smaller gaps between"),
    }
    Ok(report)
}
