//! The tower of figure-8 graphs and the covers between consecutive levels.
//!
//! Level `n >= 1` is a wedge of circuits `c_{n,1}, ..., c_{n,n}` and the loop
//! `e_{n,0}`, all meeting at the base vertex `v_{n,0}`. Level 0 is a single
//! vertex with a loop. The cover from level `n+1` to level `n` is described by
//! one rewrite template per circuit of level `n+1`:
//!
//! ```text
//! c_{n+1,i}   ->  E + C_i^{m(n,i)} + C_{i+1}^{m(n,i+1)} + ... + C_n^{m(n,n)} + E   (i <= n)
//! c_{n+1,n+1} ->  E^{top(n+1)}
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, GraphHom, VertexId};
use crate::walk::{Sym, SymWalk, Token};

/// Largest materialized vertex count (and explicit walk length) by default.
pub const DEFAULT_EXPLICIT_LIMIT: u64 = 10_000_000;

/// Either one value for every level or an explicit list indexed by level
/// (first entry is level 1).
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum Schedule {
    Constant(u64),
    PerLevel(Vec<u64>),
}

impl Schedule {
    fn at(&self, level: usize) -> Option<u64> {
        match self {
            Schedule::Constant(v) => Some(*v),
            Schedule::PerLevel(list) => level.checked_sub(1).and_then(|k| list.get(k).copied()),
        }
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Schedule::Constant(v) => write!(f, "{v}"),
            Schedule::PerLevel(list) => {
                let items: Vec<String> = list.iter().map(u64::to_string).collect();
                write!(f, "[{}]", items.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerConfig {
    pub depth: usize,
    /// `l(c_{n,n})` for `n >= 1`.
    pub top_length: Schedule,
    /// Multiplicity `m(n,i)` of `C_i` in the templates that rewrite level
    /// `n+1` into level `n`, unless overridden by a row.
    pub mult: Schedule,
    /// Explicit rows `m(n,1..=n)` by level `n`.
    pub mult_rows: BTreeMap<usize, Vec<u64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    depth: usize,
    #[serde(default = "two")]
    top_length: Schedule,
    #[serde(default = "two")]
    mult: Schedule,
    #[serde(default)]
    mult_rows: BTreeMap<String, Vec<u64>>,
}

fn two() -> Schedule {
    Schedule::Constant(2)
}

impl TowerConfig {
    /// `top_length = 2`, `mult = 2`.
    pub fn new(depth: usize) -> Self {
        TowerConfig {
            depth,
            top_length: two(),
            mult: two(),
            mult_rows: BTreeMap::new(),
        }
    }

    pub fn top_length(&self, n: usize) -> Option<u64> {
        self.top_length.at(n)
    }

    pub fn mult(&self, n: usize, i: usize) -> Option<u64> {
        match self.mult_rows.get(&n) {
            Some(row) => i.checked_sub(1).and_then(|k| row.get(k).copied()),
            None => self.mult.at(n),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for n in 1..=self.depth {
            match self.top_length(n) {
                None => {
                    return Err(Error::InvalidSchedule(format!(
                        "top_length has no entry for level {n}"
                    )))
                }
                Some(v) if v < 2 => {
                    return Err(Error::InvalidSchedule(format!(
                        "top_length({n}) = {v}, must be at least 2"
                    )))
                }
                _ => {}
            }
        }
        for (&n, row) in &self.mult_rows {
            if row.len() != n {
                return Err(Error::InvalidSchedule(format!(
                    "mult row for level {n} has {} entries, expected {n}",
                    row.len()
                )));
            }
        }
        for n in 1..self.depth {
            for i in 1..=n {
                match self.mult(n, i) {
                    None => {
                        return Err(Error::InvalidSchedule(format!(
                            "mult has no entry for level {n}"
                        )))
                    }
                    Some(v) if v < 2 => {
                        return Err(Error::InvalidSchedule(format!(
                            "mult({n},{i}) = {v}, must be at least 2"
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// Parses the TOML config format:
    ///
    /// ```toml
    /// depth = 6
    /// top_length = 2          # or a per-level list: [2, 3, 5]
    /// mult = 2                # or a per-level list
    /// [mult_rows]
    /// 3 = [2, 2, 3]           # m(3,1), m(3,2), m(3,3)
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config {
            line: e
                .span()
                .map(|span| line_of_offset(text, span.start))
                .unwrap_or(0),
            message: e.message().to_string(),
        })?;
        let mut mult_rows = BTreeMap::new();
        for (key, row) in raw.mult_rows {
            let level = key.trim().parse::<usize>().map_err(|_| Error::Config {
                line: line_of_key(text, &key),
                message: format!("mult_rows key {key:?} is not a level number"),
            })?;
            mult_rows.insert(level, row);
        }
        let cfg = TowerConfig {
            depth: raw.depth,
            top_length: raw.top_length,
            mult: raw.mult,
            mult_rows,
        };
        cfg.validate().map_err(|e| {
            let key = match &e {
                Error::InvalidSchedule(msg) if msg.starts_with("top_length") => "top_length",
                Error::InvalidSchedule(msg) if msg.contains("row") => "mult_rows",
                _ => "mult",
            };
            Error::Config {
                line: line_of_key(text, key),
                message: e.to_string(),
            }
        })?;
        Ok(cfg)
    }

    /// Renders the config back into the TOML format accepted by [`parse`](Self::parse).
    pub fn to_toml(&self) -> String {
        let mut out = format!(
            "depth = {}\ntop_length = {}\nmult = {}\n",
            self.depth, self.top_length, self.mult
        );
        if !self.mult_rows.is_empty() {
            out.push_str("[mult_rows]\n");
            for (n, row) in &self.mult_rows {
                let items: Vec<String> = row.iter().map(u64::to_string).collect();
                out.push_str(&format!("{n} = [{}]\n", items.join(", ")));
            }
        }
        out
    }
}

fn line_of_offset(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

fn line_of_key(text: &str, key: &str) -> usize {
    text.lines()
        .position(|line| {
            let line = line.trim_start();
            line.starts_with(key) || line.starts_with(&format!("\"{key}\""))
        })
        .map_or(0, |k| k + 1)
}

/// Canonical name of a vertex `v_{n,i,j}`. Both endpoints of a circuit are
/// the base vertex `v_{n,0}`, stored as circuit 0 with position 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexRef {
    level: usize,
    circuit: usize,
    pos: BigUint,
}

impl VertexRef {
    pub fn base(level: usize) -> Self {
        VertexRef {
            level,
            circuit: 0,
            pos: BigUint::zero(),
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// 0 for the base vertex.
    pub fn circuit(&self) -> usize {
        self.circuit
    }

    pub fn position(&self) -> &BigUint {
        &self.pos
    }

    pub fn is_base(&self) -> bool {
        self.circuit == 0
    }

    /// Skips canonicalization; callers guarantee `0 < pos < l(level, circuit)`.
    pub(crate) fn interior(level: usize, circuit: usize, pos: BigUint) -> Self {
        debug_assert!(circuit >= 1 && !pos.is_zero());
        VertexRef {
            level,
            circuit,
            pos,
        }
    }
}

impl fmt::Display for VertexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_base() {
            write!(f, "v_{{{},0}}", self.level)
        } else {
            write!(f, "v_{{{},{},{}}}", self.level, self.circuit, self.pos)
        }
    }
}

/// A rewrite template together with the offset at which each token starts.
#[derive(Debug, Clone)]
pub(crate) struct Template {
    pub(crate) walk: SymWalk,
    pub(crate) starts: Vec<BigUint>,
}

impl Template {
    /// Index of the token covering `offset`: the last token starting at or
    /// before it.
    pub(crate) fn token_at(&self, offset: &BigUint) -> usize {
        self.starts.partition_point(|s| s <= offset) - 1
    }
}

#[derive(Debug, Clone)]
pub struct Tower {
    config: TowerConfig,
    /// `lengths[n][i]`; index 0 is the loop, of length 1.
    lengths: Vec<Vec<BigUint>>,
    /// `templates[n][i - 1]` rewrites `c_{n+1,i}` into level `n`.
    templates: Vec<Vec<Template>>,
    explicit_limit: u64,
}

impl Tower {
    pub fn build(config: TowerConfig) -> Result<Self> {
        config.validate()?;
        let depth = config.depth;
        let mut lengths: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
        let mut templates: Vec<Vec<Template>> = Vec::with_capacity(depth);
        for n in 0..depth {
            let mut level_templates = Vec::with_capacity(n + 1);
            let mut next_lengths = vec![BigUint::one()];
            for i in 1..=n + 1 {
                let tokens = if i <= n {
                    let mut tokens = vec![Token::new(Sym::Loop, 1u32)];
                    for k in i..=n {
                        let m = config.mult(n, k).expect("validated");
                        tokens.push(Token::new(Sym::Circuit(k), m));
                    }
                    tokens.push(Token::new(Sym::Loop, 1u32));
                    tokens
                } else {
                    let top = config.top_length(n + 1).expect("validated");
                    vec![Token::new(Sym::Loop, top)]
                };
                let walk = SymWalk::from_tokens_unchecked(n, tokens);
                let mut starts = Vec::with_capacity(walk.tokens().len());
                let mut acc = BigUint::zero();
                for tok in walk.tokens() {
                    starts.push(acc.clone());
                    acc += &tok.rep * sym_len(&lengths[n], tok.sym);
                }
                next_lengths.push(acc);
                level_templates.push(Template { walk, starts });
            }
            lengths.push(next_lengths);
            templates.push(level_templates);
        }
        Ok(Tower {
            config,
            lengths,
            templates,
            explicit_limit: DEFAULT_EXPLICIT_LIMIT,
        })
    }

    pub fn with_default_config(depth: usize) -> Self {
        Tower::build(TowerConfig::new(depth)).expect("default schedule is valid")
    }

    pub fn with_explicit_limit(mut self, limit: u64) -> Self {
        self.explicit_limit = limit;
        self
    }

    pub fn explicit_limit(&self) -> u64 {
        self.explicit_limit
    }

    pub fn config(&self) -> &TowerConfig {
        &self.config
    }

    pub fn depth(&self) -> usize {
        self.config.depth
    }

    pub(crate) fn check_level(&self, n: usize) -> Result<()> {
        if n > self.depth() {
            return Err(Error::OutOfRange(format!(
                "level {n} exceeds tower depth {}",
                self.depth()
            )));
        }
        Ok(())
    }

    /// `l(n,i)` for `1 <= i <= n <= depth`.
    pub fn circuit_length(&self, n: usize, i: usize) -> Result<&BigUint> {
        self.check_level(n)?;
        if i == 0 || i > n {
            return Err(Error::OutOfRange(format!(
                "circuit {i} does not exist at level {n}"
            )));
        }
        Ok(&self.lengths[n][i])
    }

    /// Length of the loop `e_{n,0}`, always 1.
    pub fn loop_length(&self) -> BigUint {
        BigUint::one()
    }

    /// Length of one unit of a symbol at level `n`; no range checks.
    pub(crate) fn sym_length(&self, n: usize, sym: Sym) -> &BigUint {
        match sym {
            Sym::Loop => &self.lengths[0][0],
            Sym::Circuit(i) => &self.lengths[n][i],
        }
    }

    /// Unchecked `l(n,i)`.
    pub(crate) fn len(&self, n: usize, i: usize) -> &BigUint {
        &self.lengths[n][i]
    }

    pub(crate) fn template(&self, n: usize, i: usize) -> &Template {
        &self.templates[n][i - 1]
    }

    /// The walk at level `n` that `c_{n+1,i}` is sent to.
    pub fn rewrite_template(&self, n: usize, i: usize) -> Result<&SymWalk> {
        if n + 1 > self.depth() || i == 0 || i > n + 1 {
            return Err(Error::OutOfRange(format!(
                "no template for c_{{{},{i}}} in a tower of depth {}",
                n + 1,
                self.depth()
            )));
        }
        Ok(&self.template(n, i).walk)
    }

    /// Canonical vertex `v_{n,i,j}`; `j = 0` and `j = l(n,i)` give the base.
    pub fn vertex(&self, n: usize, i: usize, j: impl Into<BigUint>) -> Result<VertexRef> {
        self.check_level(n)?;
        let j = j.into();
        if i == 0 {
            return if j.is_zero() {
                Ok(VertexRef::base(n))
            } else {
                Err(Error::OutOfRange("the base vertex has no position".into()))
            };
        }
        let len = self.circuit_length(n, i)?;
        if &j > len {
            return Err(Error::OutOfRange(format!(
                "position {j} exceeds l({n},{i}) = {len}"
            )));
        }
        if j.is_zero() || &j == len {
            Ok(VertexRef::base(n))
        } else {
            Ok(VertexRef::interior(n, i, j))
        }
    }

    /// `|V_n| = 1 + sum_i (l(n,i) - 1)`.
    pub fn vertex_count(&self, n: usize) -> Result<BigUint> {
        self.check_level(n)?;
        Ok(self.lengths[n][1..]
            .iter()
            .fold(BigUint::one(), |acc, l| acc + l - 1u32))
    }

    fn materializable(&self, n: usize) -> Result<usize> {
        let count = self.vertex_count(n)?;
        match count.to_u64() {
            Some(c) if c <= self.explicit_limit => Ok(c as usize),
            _ => Err(Error::limit(
                format!("level {n} vertex count"),
                count,
                self.explicit_limit,
            )),
        }
    }

    /// Id of circuit `i`'s first interior vertex in the materialized level.
    fn circuit_offset(&self, n: usize, i: usize) -> usize {
        1 + self.lengths[n][1..i]
            .iter()
            .map(|l| l.to_usize().expect("materializable") - 1)
            .sum::<usize>()
    }

    /// Id of a vertex inside [`materialize_level`](Self::materialize_level).
    pub fn vertex_id(&self, v: &VertexRef) -> Result<VertexId> {
        self.materializable(v.level)?;
        if v.is_base() {
            return Ok(VertexId::new(0));
        }
        let j = v.pos.to_usize().expect("materializable");
        Ok(VertexId::new(self.circuit_offset(v.level, v.circuit) + j - 1))
    }

    /// Inverse of [`vertex_id`](Self::vertex_id).
    pub fn vertex_of_id(&self, n: usize, id: VertexId) -> Result<VertexRef> {
        let count = self.materializable(n)?;
        let mut k = id.index();
        if k >= count {
            return Err(Error::OutOfRange(format!("vertex id {k} at level {n}")));
        }
        if k == 0 {
            return Ok(VertexRef::base(n));
        }
        k -= 1;
        for i in 1..=n {
            let interior = self.lengths[n][i].to_usize().expect("materializable") - 1;
            if k < interior {
                return Ok(VertexRef::interior(n, i, BigUint::from(k + 1)));
            }
            k -= interior;
        }
        unreachable!("id below vertex count")
    }

    /// Level `n` as an explicit graph: the loop at the base plus each circuit.
    pub fn materialize_level(&self, n: usize) -> Result<DirectedGraph> {
        let count = self.materializable(n)?;
        let mut edges = Vec::with_capacity(count + n);
        edges.push((0, 0));
        let mut next_id = 1;
        for i in 1..=n {
            let len = self.lengths[n][i].to_usize().expect("materializable");
            let mut prev = 0;
            for _ in 1..len {
                edges.push((prev, next_id));
                prev = next_id;
                next_id += 1;
            }
            edges.push((prev, 0));
        }
        DirectedGraph::new(count, edges)
    }

    /// The cover from level `n+1` onto level `n`, built from the templates.
    pub fn materialize_cover(&self, n: usize) -> Result<GraphHom> {
        if n + 1 > self.depth() {
            return Err(Error::OutOfRange(format!(
                "no cover out of level {} in a tower of depth {}",
                n + 1,
                self.depth()
            )));
        }
        let target = Arc::new(self.materialize_level(n)?);
        let source = Arc::new(self.materialize_level(n + 1)?);
        let mut vmap = vec![0usize; source.vertex_count()];
        let mut next_id = 1;
        for i in 1..=n + 1 {
            let image = self.expand_template_ids(n, i)?;
            // image[j] is the image of v_{n+1,i,j}; endpoints are the base.
            for id in &image[1..image.len() - 1] {
                vmap[next_id] = *id;
                next_id += 1;
            }
        }
        GraphHom::new(source, target, vmap)
    }

    /// Vertex ids (at level `n`) visited by the template of `c_{n+1,i}`.
    fn expand_template_ids(&self, n: usize, i: usize) -> Result<Vec<usize>> {
        let tmpl = self.template(n, i);
        let mut out = vec![0usize];
        for tok in tmpl.walk.tokens() {
            let reps = tok.rep.to_usize().expect("template reps are small");
            match tok.sym {
                Sym::Loop => out.extend(std::iter::repeat_n(0, reps)),
                Sym::Circuit(c) => {
                    let first = self.circuit_offset(n, c);
                    let len = self.lengths[n][c].to_usize().expect("materializable");
                    for _ in 0..reps {
                        out.extend(first..first + len - 1);
                        out.push(0);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Image of a vertex one level down, located by binary search in the
    /// template's prefix sums.
    pub(crate) fn project_once(&self, v: &VertexRef) -> VertexRef {
        let n = v.level;
        debug_assert!(n >= 1);
        if v.is_base() {
            return VertexRef::base(n - 1);
        }
        let tmpl = self.template(n - 1, v.circuit);
        let k = tmpl.token_at(&v.pos);
        let offset = &v.pos - &tmpl.starts[k];
        match tmpl.walk.tokens()[k].sym {
            Sym::Loop => VertexRef::base(n - 1),
            Sym::Circuit(c) => {
                let u = offset % &self.lengths[n - 1][c];
                if u.is_zero() {
                    VertexRef::base(n - 1)
                } else {
                    VertexRef::interior(n - 1, c, u)
                }
            }
        }
    }
}

fn sym_len(lengths: &[BigUint], sym: Sym) -> &BigUint {
    match sym {
        Sym::Loop => &lengths[0],
        Sym::Circuit(i) => &lengths[i],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{check_bidirectional, check_cover, check_edge_surjective};

    #[test]
    fn default_lengths() {
        let t = Tower::with_default_config(5);
        assert_eq!(t.circuit_length(1, 1).unwrap(), &BigUint::from(2u32));
        assert_eq!(t.circuit_length(2, 1).unwrap(), &BigUint::from(6u32));
        assert_eq!(t.circuit_length(3, 1).unwrap(), &BigUint::from(18u32));
        assert_eq!(t.circuit_length(4, 1).unwrap(), &BigUint::from(54u32));
        assert_eq!(t.circuit_length(5, 5).unwrap(), &BigUint::from(2u32));
        assert!(t.circuit_length(5, 6).is_err());
        assert!(t.circuit_length(6, 1).is_err());
        assert!(t.circuit_length(3, 0).is_err());
        assert_eq!(t.loop_length(), BigUint::one());
    }

    #[test]
    fn schedule_validation() {
        let mut cfg = TowerConfig::new(4);
        cfg.mult = Schedule::Constant(1);
        assert!(Tower::build(cfg).is_err());
        let mut cfg = TowerConfig::new(4);
        cfg.top_length = Schedule::PerLevel(vec![2, 3, 1, 2]);
        assert!(Tower::build(cfg).is_err());
        let mut cfg = TowerConfig::new(4);
        cfg.top_length = Schedule::PerLevel(vec![2, 3]);
        assert!(Tower::build(cfg).is_err());
        let mut cfg = TowerConfig::new(4);
        cfg.mult_rows.insert(2, vec![2]);
        assert!(Tower::build(cfg).is_err());
    }

    #[test]
    fn vertex_canonicalization() {
        let t = Tower::with_default_config(3);
        assert_eq!(t.vertex(2, 1, 0u32).unwrap(), VertexRef::base(2));
        assert_eq!(t.vertex(2, 1, 6u32).unwrap(), VertexRef::base(2));
        assert_eq!(t.vertex(2, 0, 0u32).unwrap(), VertexRef::base(2));
        assert!(t.vertex(2, 1, 7u32).is_err());
        assert!(t.vertex(2, 0, 1u32).is_err());
        let v = t.vertex(2, 1, 3u32).unwrap();
        assert_eq!(v.to_string(), "v_{2,1,3}");
        assert_eq!(VertexRef::base(4).to_string(), "v_{4,0}");
    }

    #[test]
    fn level_zero_and_two() {
        let t = Tower::with_default_config(4);
        let g0 = t.materialize_level(0).unwrap();
        assert_eq!(g0.vertex_count(), 1);
        assert_eq!(g0.edge_count(), 1);
        let g2 = t.materialize_level(2).unwrap();
        assert_eq!(g2.vertex_count(), 7);
        assert!(check_edge_surjective(&g2));
        assert_eq!(t.materialize_level(4).unwrap().vertex_count(), 77);
    }

    #[test]
    fn ids_round_trip() {
        let t = Tower::with_default_config(3);
        let g = t.materialize_level(3).unwrap();
        for v in g.vertices() {
            let r = t.vertex_of_id(3, v).unwrap();
            assert_eq!(t.vertex_id(&r).unwrap(), v);
        }
    }

    #[test]
    fn limit_is_enforced() {
        let t = Tower::with_default_config(5).with_explicit_limit(100);
        assert!(t.materialize_level(4).is_ok());
        assert!(matches!(
            t.materialize_level(5),
            Err(Error::ExplicitLimitExceeded { .. })
        ));
    }

    #[test]
    fn covers_are_bidirectional() {
        let t = Tower::with_default_config(5);
        for n in 0..5 {
            let h = t.materialize_cover(n).unwrap();
            assert!(check_cover(&h), "phi_{n}");
            assert!(check_bidirectional(&h), "phi_{n}");
        }
        let phi0 = t.materialize_cover(0).unwrap();
        assert!(phi0.vertex_map().iter().all(|&w| w == 0));
    }

    #[test]
    fn templates() {
        let t = Tower::with_default_config(4);
        assert_eq!(t.rewrite_template(1, 1).unwrap().to_string(), "E C1^2 E");
        assert_eq!(t.rewrite_template(2, 3).unwrap().to_string(), "E^2");
        assert_eq!(t.rewrite_template(3, 2).unwrap().to_string(), "E C2^2 C3^2 E");
        assert_eq!(t.rewrite_template(3, 2).unwrap().length(&t), BigUint::from(18u32));
        assert!(t.rewrite_template(4, 1).is_err());
        assert!(t.rewrite_template(2, 4).is_err());
    }

    #[test]
    fn config_round_trip_and_errors() {
        let text = "depth = 5\ntop_length = [2, 3, 2, 4, 2]\nmult = 3\n[mult_rows]\n2 = [2, 5]\n";
        let cfg = TowerConfig::parse(text).unwrap();
        assert_eq!(cfg.mult(2, 2), Some(5));
        assert_eq!(cfg.mult(3, 1), Some(3));
        assert_eq!(cfg.top_length(2), Some(3));
        assert_eq!(TowerConfig::parse(&cfg.to_toml()).unwrap(), cfg);

        let err = TowerConfig::parse("depth = 4\nmult = 1\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 2, .. }), "{err}");
        let err = TowerConfig::parse("depth = 4\n\ntop_length = \"x\"\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 3, .. }), "{err}");
    }

    #[test]
    fn generalized_multiplicities_change_lengths() {
        let mut cfg = TowerConfig::new(3);
        cfg.mult = Schedule::Constant(3);
        let t = Tower::build(cfg).unwrap();
        // l(2,1) = 2 + 3*2, l(3,1) = 2 + 3*8 + 3*2
        assert_eq!(t.circuit_length(2, 1).unwrap(), &BigUint::from(8u32));
        assert_eq!(t.circuit_length(3, 1).unwrap(), &BigUint::from(32u32));
    }
}
