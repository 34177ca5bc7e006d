//! Points of the inverse limit at finite depth.
//!
//! A point is represented by a cylinder anchor: an interior vertex
//! `v_{D,i,j}` at depth `D`. Every point of that cylinder has the same orbit
//! at all levels `<= D` for the first `remn = l(D,i) - j` steps, so orbit
//! questions are answered exactly up to that horizon and refused beyond it.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::tower::{Tower, VertexRef};
use crate::walk::Sym;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PointAnchor {
    /// The all-base thread `p`.
    Fixed,
    /// An interior vertex at the anchor depth.
    Anchored(VertexRef),
}

impl PointAnchor {
    /// Anchors at `v_{D,i,j}`; the base vertex is refused.
    pub fn new(t: &Tower, depth: usize, circuit: usize, pos: impl Into<BigUint>) -> Result<Self> {
        let v = t.vertex(depth, circuit, pos)?;
        PointAnchor::at(v)
    }

    pub fn at(v: VertexRef) -> Result<Self> {
        if v.is_base() {
            return Err(Error::InvalidAnchor(format!(
                "{v} is a base vertex; use the fixed point instead"
            )));
        }
        Ok(PointAnchor::Anchored(v))
    }

    /// `"p"` or `"D:i:j"` with a decimal position.
    pub fn parse(t: &Tower, text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "p" {
            return Ok(PointAnchor::Fixed);
        }
        let parts: Vec<&str> = text.split(':').collect();
        let [d, i, j] = parts.as_slice() else {
            return Err(Error::Parse(format!("anchor {text:?} is not D:i:j or p")));
        };
        let bad = |what: &str| Error::Parse(format!("bad {what} in anchor {text:?}"));
        let d: usize = d.parse().map_err(|_| bad("depth"))?;
        let i: usize = i.parse().map_err(|_| bad("circuit"))?;
        let j: BigUint = j.parse().map_err(|_| bad("position"))?;
        PointAnchor::new(t, d, i, j).map_err(|e| match e {
            Error::OutOfRange(msg) => Error::InvalidAnchor(msg),
            other => other,
        })
    }

    pub fn depth(&self) -> Option<usize> {
        match self {
            PointAnchor::Fixed => None,
            PointAnchor::Anchored(v) => Some(v.level()),
        }
    }

    pub fn vertex(&self) -> Option<&VertexRef> {
        match self {
            PointAnchor::Fixed => None,
            PointAnchor::Anchored(v) => Some(v),
        }
    }

    /// Steps until the anchor vertex returns to the base; `None` for the
    /// fixed point, whose orbit is known forever.
    pub fn horizon(&self, t: &Tower) -> Option<BigUint> {
        self.vertex().map(|v| remn(t, v).expect("anchors are interior"))
    }
}

impl fmt::Display for PointAnchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointAnchor::Fixed => f.write_str("p"),
            PointAnchor::Anchored(v) => {
                write!(f, "{}:{}:{}", v.level(), v.circuit(), v.position())
            }
        }
    }
}

/// Compatible coordinates `x_0, ..., x_D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thread {
    coords: Vec<VertexRef>,
}

impl Thread {
    pub fn depth(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn at(&self, level: usize) -> Option<&VertexRef> {
        self.coords.get(level)
    }

    pub fn coords(&self) -> &[VertexRef] {
        &self.coords
    }
}

impl fmt::Display for Thread {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.coords.iter().map(VertexRef::to_string).collect();
        write!(f, "({})", items.join(", "))
    }
}

/// `2^-level` when threads first differ at `level`; at most `2^-(depth+1)`
/// when they agree through `depth`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DyadicDistance {
    Exact(usize),
    AtMost(usize),
}

impl DyadicDistance {
    /// Exponent `e` with the distance equal to (or bounded by) `2^-e`.
    pub fn exponent(self) -> usize {
        match self {
            DyadicDistance::Exact(m) => m,
            DyadicDistance::AtMost(d) => d + 1,
        }
    }

    pub fn value(self) -> f64 {
        0.5f64.powi(self.exponent() as i32)
    }
}

impl fmt::Display for DyadicDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DyadicDistance::Exact(m) => write!(f, "2^-{m}"),
            DyadicDistance::AtMost(d) => write!(f, "<=2^-{}", d + 1),
        }
    }
}

/// Circuit index of a vertex, infinite at the base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Degree {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Finite(i) => write!(f, "{i}"),
            Degree::Infinite => f.write_str("inf"),
        }
    }
}

/// Image of `v` at level `m`.
pub fn project_vertex(t: &Tower, v: &VertexRef, m: usize) -> Result<VertexRef> {
    if m > v.level() {
        return Err(Error::OutOfRange(format!(
            "cannot project {v} up to level {m}"
        )));
    }
    t.check_level(v.level())?;
    let mut cur = v.clone();
    while cur.level() > m {
        if cur.is_base() {
            return Ok(VertexRef::base(m));
        }
        cur = t.project_once(&cur);
    }
    Ok(cur)
}

pub fn thread(t: &Tower, a: &PointAnchor) -> Thread {
    let depth = a.depth().unwrap_or_else(|| t.depth());
    thread_to(t, a, depth).expect("depth is in range")
}

/// Thread of `a` through `depth`; the fixed point extends to any depth.
pub fn thread_to(t: &Tower, a: &PointAnchor, depth: usize) -> Result<Thread> {
    t.check_level(depth)?;
    let coords = match a {
        PointAnchor::Fixed => (0..=depth).map(VertexRef::base).collect(),
        PointAnchor::Anchored(v) => {
            if depth > v.level() {
                return Err(Error::OutOfRange(format!(
                    "anchor {a} has no coordinate at level {depth}"
                )));
            }
            let mut out = Vec::with_capacity(depth + 1);
            let mut cur = project_vertex(t, v, depth)?;
            while cur.level() > 0 {
                let next = project_vertex(t, &cur, cur.level() - 1)?;
                out.push(cur);
                cur = next;
            }
            out.push(cur);
            out.reverse();
            out
        }
    };
    Ok(Thread { coords })
}

/// Steps left along the vertex's circuit before reaching the base.
pub fn remn(t: &Tower, v: &VertexRef) -> Result<BigUint> {
    if v.is_base() {
        return Err(Error::BaseVertex(v.level()));
    }
    Ok(t.circuit_length(v.level(), v.circuit())? - v.position())
}

pub fn deg(v: &VertexRef) -> Degree {
    if v.is_base() {
        Degree::Infinite
    } else {
        Degree::Finite(v.circuit())
    }
}

/// Degree of the cylinder: that of the anchor vertex.
pub fn anchor_degree(a: &PointAnchor) -> Degree {
    a.vertex().map_or(Degree::Infinite, deg)
}

/// Least level `s` such that the anchor's projections to every level in
/// `s..=D` have the anchor's degree. `None` for the fixed point.
pub fn stabilization_level(t: &Tower, a: &PointAnchor) -> Option<usize> {
    let v = a.vertex()?;
    let th = thread(t, a);
    let d = deg(v);
    let mut s = v.level();
    while s > 0 && deg(&th.coords[s - 1]) == d {
        s -= 1;
    }
    Some(s)
}

/// The level-`n` vertex of `f^time(a)`, for `time <= remn`.
pub fn vertex_at(t: &Tower, a: &PointAnchor, n: usize, time: &BigUint) -> Result<VertexRef> {
    match a {
        PointAnchor::Fixed => {
            t.check_level(n)?;
            Ok(VertexRef::base(n))
        }
        PointAnchor::Anchored(v) => {
            let max = remn(t, v)?;
            if time > &max {
                return Err(Error::HorizonExhausted {
                    requested: time.clone(),
                    max,
                });
            }
            let moved = t.vertex(v.level(), v.circuit(), v.position() + time)?;
            project_vertex(t, &moved, n)
        }
    }
}

/// Level-`n` coordinates of `a, f(a), ..., f^k(a)`.
pub fn orbit_trace(t: &Tower, a: &PointAnchor, n: usize, k: &BigUint) -> Result<Vec<VertexRef>> {
    t.check_level(n)?;
    if let Some(v) = a.vertex() {
        if n > v.level() {
            return Err(Error::OutOfRange(format!(
                "resolution {n} exceeds anchor depth {}",
                v.level()
            )));
        }
        let max = remn(t, v)?;
        if k > &max {
            return Err(Error::HorizonExhausted {
                requested: k.clone(),
                max,
            });
        }
    }
    let count = k + 1u32;
    let limit = t.explicit_limit();
    let count = match count.to_u64() {
        Some(c) if c <= limit => c as usize,
        _ => return Err(Error::limit("orbit trace length", count, limit)),
    };
    let mut out = Vec::with_capacity(count);
    let mut stream = SegmentStream::new(t, a, n, k)?;
    while out.len() < count {
        let seg = stream.next().expect("stream covers the horizon");
        let mut time = seg.start.clone();
        while time < seg.end && out.len() < count {
            out.push(seg.vertex_at(t, n, &time));
            time += 1u32;
        }
    }
    Ok(out)
}

/// Distance between threads of equal depth.
pub fn distance(x: &Thread, y: &Thread) -> Result<DyadicDistance> {
    if x.depth() != y.depth() {
        return Err(Error::GraphMismatch(format!(
            "threads of depth {} and {}",
            x.depth(),
            y.depth()
        )));
    }
    Ok(x.coords
        .iter()
        .zip(&y.coords)
        .position(|(a, b)| a != b)
        .map_or(DyadicDistance::AtMost(x.depth()), DyadicDistance::Exact))
}

/// The `k`-th (0-based) vertex of `c_{n+1,c}` that projects to `v`, in order
/// along the circuit. `v` must be interior.
pub fn preimage(t: &Tower, v: &VertexRef, c: usize, k: usize) -> Result<Option<VertexRef>> {
    let n = v.level();
    if v.is_base() {
        return Err(Error::BaseVertex(n));
    }
    t.circuit_length(n + 1, c)?;
    let tmpl = t.template(n, c);
    let mut seen = 0usize;
    for (idx, tok) in tmpl.walk.tokens().iter().enumerate() {
        if tok.sym != Sym::Circuit(v.circuit()) {
            continue;
        }
        let reps = tok.rep.to_usize().unwrap_or(usize::MAX);
        if k < seen + reps {
            let unit = t.len(n, v.circuit());
            let pos = &tmpl.starts[idx] + unit * (k - seen) + v.position();
            return Ok(Some(VertexRef::interior(n + 1, c, pos)));
        }
        seen += reps;
    }
    Ok(None)
}

/// CSV with header `t,vertex,circuit,position`.
pub fn trace_to_csv(trace: &[VertexRef]) -> Result<String> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Parse(e.to_string());
    wtr.write_record(["t", "vertex", "circuit", "position"])
        .map_err(io)?;
    for (time, v) in trace.iter().enumerate() {
        wtr.write_record([
            time.to_string(),
            v.to_string(),
            v.circuit().to_string(),
            v.position().to_string(),
        ])
        .map_err(io)?;
    }
    let bytes = wtr.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// A stretch of the level-`N` orbit spent in one token: times
/// `start..end`, starting `phase` edges into the unit of `sym`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Segment {
    pub start: BigUint,
    pub end: BigUint,
    pub sym: Sym,
    pub phase: BigUint,
}

impl Segment {
    /// Offset into the current unit at `time`.
    pub fn phase_at(&self, t: &Tower, n: usize, time: &BigUint) -> BigUint {
        match self.sym {
            Sym::Loop => BigUint::zero(),
            Sym::Circuit(c) => (&self.phase + time - &self.start) % t.len(n, c),
        }
    }

    pub fn vertex_at(&self, t: &Tower, n: usize, time: &BigUint) -> VertexRef {
        match self.sym {
            Sym::Loop => VertexRef::base(n),
            Sym::Circuit(c) => {
                let u = self.phase_at(t, n, time);
                if u.is_zero() {
                    VertexRef::base(n)
                } else {
                    VertexRef::interior(n, c, u)
                }
            }
        }
    }
}

/// Remaining token units of one template being expanded.
#[derive(Debug, Clone)]
struct Frame {
    /// Level of the template's tokens.
    level: usize,
    circuit: usize,
    tok: usize,
    /// Units of the current token not yet handed out.
    left: BigUint,
}

/// The level-`N` orbit of an anchor as a lazy sequence of segments covering
/// times `0..=horizon`. Time `remn` is the base vertex; for the fixed point
/// the whole horizon is a single loop segment.
pub(crate) struct SegmentStream<'t> {
    tower: &'t Tower,
    level: usize,
    stack: Vec<Frame>,
    clock: BigUint,
    /// Exclusive end of the stream.
    end: BigUint,
    pending: Option<Segment>,
}

impl<'t> SegmentStream<'t> {
    /// Stream of `a` at level `n` for times `0..=horizon`. Anchored points
    /// must have `horizon <= remn`.
    pub fn new(tower: &'t Tower, a: &PointAnchor, n: usize, horizon: &BigUint) -> Result<Self> {
        let end = horizon + 1u32;
        let mut s = SegmentStream {
            tower,
            level: n,
            stack: Vec::new(),
            clock: BigUint::zero(),
            end,
            pending: None,
        };
        let v = match a {
            PointAnchor::Fixed => {
                s.emit_raw(Sym::Loop, BigUint::zero(), s.end.clone());
                return Ok(s);
            }
            PointAnchor::Anchored(v) => v,
        };
        if n > v.level() {
            return Err(Error::OutOfRange(format!(
                "resolution {n} exceeds anchor depth {}",
                v.level()
            )));
        }
        let max = remn(tower, v)?;
        if horizon > &max {
            return Err(Error::HorizonExhausted {
                requested: horizon.clone(),
                max,
            });
        }
        // Descend from the anchor unit to level n, leaving a frame per level
        // for the rest of each template.
        let mut level = v.level();
        let mut sym = Sym::Circuit(v.circuit());
        let mut offset = v.position().clone();
        while level > n {
            let c = match sym {
                Sym::Circuit(c) if c < level => c,
                // loops and the top circuit project onto the base loop
                _ => {
                    let len = tower.sym_length(level, sym);
                    let run = len - &offset;
                    s.emit_raw(Sym::Loop, BigUint::zero(), run);
                    return Ok(s);
                }
            };
            let tmpl = tower.template(level - 1, c);
            let k = tmpl.token_at(&offset);
            let tok = &tmpl.walk.tokens()[k];
            let unit = tower.sym_length(level - 1, tok.sym);
            let within = &offset - &tmpl.starts[k];
            let q = &within / unit;
            s.stack.push(Frame {
                level: level - 1,
                circuit: c,
                tok: k,
                left: &tok.rep - &q - 1u32,
            });
            offset = within % unit;
            sym = tok.sym;
            level -= 1;
        }
        let run = tower.sym_length(n, sym) - &offset;
        s.emit_raw(sym, offset, run);
        Ok(s)
    }

    /// Queues a segment of `len` steps; clipped at the stream end.
    fn emit_raw(&mut self, sym: Sym, phase: BigUint, len: BigUint) {
        debug_assert!(self.pending.is_none());
        let start = self.clock.clone();
        let mut end = &start + len;
        if end > self.end {
            end = self.end.clone();
        }
        self.clock = end.clone();
        self.pending = Some(Segment {
            start,
            end,
            sym,
            phase,
        });
    }

    fn advance(&mut self) {
        let t = self.tower;
        while self.pending.is_none() && self.clock < self.end {
            let Some(top) = self.stack.last_mut() else {
                // the anchor circuit is finished: base at time remn
                self.emit_raw(Sym::Loop, BigUint::zero(), BigUint::one());
                continue;
            };
            let tokens = t.template(top.level, top.circuit).walk.tokens();
            if top.left.is_zero() {
                top.tok += 1;
                match tokens.get(top.tok) {
                    Some(tok) => top.left = tok.rep.clone(),
                    None => {
                        self.stack.pop();
                    }
                }
                continue;
            }
            let level = top.level;
            let sym = tokens[top.tok].sym;
            let flat = level == self.level
                || match sym {
                    Sym::Loop => true,
                    Sym::Circuit(c) => c == level,
                };
            if flat {
                let len = &top.left * t.sym_length(level, sym);
                top.left = BigUint::zero();
                let out = if level == self.level { sym } else { Sym::Loop };
                self.emit_raw(out, BigUint::zero(), len);
            } else {
                top.left -= 1u32;
                let Sym::Circuit(c) = sym else { unreachable!() };
                let first = &t.template(level - 1, c).walk.tokens()[0];
                self.stack.push(Frame {
                    level: level - 1,
                    circuit: c,
                    tok: 0,
                    left: first.rep.clone(),
                });
            }
        }
    }
}

impl Iterator for SegmentStream<'_> {
    type Item = Segment;

    fn next(&mut self) -> Option<Segment> {
        self.advance();
        self.pending.take()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn projection_examples() {
        let t = Tower::with_default_config(4);
        let v = t.vertex(3, 1, 2u32).unwrap();
        assert_eq!(project_vertex(&t, &v, 2).unwrap(), t.vertex(2, 1, 1u32).unwrap());
        let v = t.vertex(3, 1, 1u32).unwrap();
        assert_eq!(project_vertex(&t, &v, 2).unwrap(), VertexRef::base(2));
        assert_eq!(
            project_vertex(&t, &VertexRef::base(4), 1).unwrap(),
            VertexRef::base(1)
        );
        assert!(project_vertex(&t, &VertexRef::base(2), 3).is_err());
    }

    #[test]
    fn thread_of_anchor() {
        let t = Tower::with_default_config(4);
        let a = PointAnchor::parse(&t, "3:1:2").unwrap();
        assert_eq!(
            thread(&t, &a).to_string(),
            "(v_{0,0}, v_{1,0}, v_{2,1,1}, v_{3,1,2})"
        );
        assert!(thread(&t, &PointAnchor::Fixed)
            .coords()
            .iter()
            .all(VertexRef::is_base));
        assert_eq!(thread(&t, &PointAnchor::Fixed).depth(), 4);
    }

    #[test]
    fn anchor_parsing() {
        let t = Tower::with_default_config(3);
        assert_eq!(PointAnchor::parse(&t, "p").unwrap(), PointAnchor::Fixed);
        assert_eq!(PointAnchor::parse(&t, "2:1:3").unwrap().to_string(), "2:1:3");
        assert!(matches!(
            PointAnchor::parse(&t, "2:1:0"),
            Err(Error::InvalidAnchor(_))
        ));
        assert!(matches!(
            PointAnchor::parse(&t, "2:1:6"),
            Err(Error::InvalidAnchor(_))
        ));
        assert!(PointAnchor::parse(&t, "2:3:1").is_err());
        assert!(matches!(
            PointAnchor::parse(&t, "2:1"),
            Err(Error::Parse(_))
        ));
        assert!(PointAnchor::parse(&t, "5:1:1").is_err());
    }

    #[test]
    fn remn_and_degree() {
        let t = Tower::with_default_config(3);
        assert_eq!(remn(&t, &t.vertex(2, 1, 1u32).unwrap()).unwrap(), b(5));
        assert_eq!(remn(&t, &t.vertex(3, 1, 3u32).unwrap()).unwrap(), b(15));
        assert_eq!(remn(&t, &t.vertex(3, 2, 5u32).unwrap()).unwrap(), b(1));
        assert_eq!(remn(&t, &VertexRef::base(2)), Err(Error::BaseVertex(2)));
        assert_eq!(deg(&VertexRef::base(3)), Degree::Infinite);
        assert_eq!(deg(&t.vertex(3, 2, 4u32).unwrap()), Degree::Finite(2));
        assert!(Degree::Finite(7) < Degree::Infinite);
    }

    #[test]
    fn trace_example() {
        let t = Tower::with_default_config(3);
        let a = PointAnchor::parse(&t, "2:1:1").unwrap();
        let tr = orbit_trace(&t, &a, 1, &b(5)).unwrap();
        let names: Vec<String> = tr.iter().map(VertexRef::to_string).collect();
        assert_eq!(
            names,
            ["v_{1,0}", "v_{1,1,1}", "v_{1,0}", "v_{1,1,1}", "v_{1,0}", "v_{1,0}"]
        );
        assert_eq!(
            orbit_trace(&t, &a, 1, &b(6)),
            Err(Error::HorizonExhausted {
                requested: b(6),
                max: b(5)
            })
        );
        let p = orbit_trace(&t, &PointAnchor::Fixed, 2, &b(40)).unwrap();
        assert_eq!(p.len(), 41);
        assert!(p.iter().all(VertexRef::is_base));
        assert!(trace_to_csv(&tr).unwrap().starts_with("t,vertex,circuit,position\n0,\"v_{1,0}\",0,0\n"));
    }

    #[test]
    fn distances() {
        let t = Tower::with_default_config(3);
        let x = thread(&t, &PointAnchor::parse(&t, "3:1:2").unwrap());
        let y = thread(&t, &PointAnchor::parse(&t, "3:1:3").unwrap());
        let z = thread(&t, &PointAnchor::parse(&t, "3:2:2").unwrap());
        assert_eq!(distance(&x, &x).unwrap(), DyadicDistance::AtMost(3));
        assert_eq!(distance(&x, &y).unwrap(), DyadicDistance::Exact(1));
        assert_eq!(distance(&y, &x).unwrap(), DyadicDistance::Exact(1));
        assert_eq!(distance(&x, &z).unwrap(), DyadicDistance::Exact(2));
        assert_eq!(DyadicDistance::Exact(1).value(), 0.5);
        let short = thread_to(&t, &PointAnchor::Fixed, 2).unwrap();
        assert!(distance(&x, &short).is_err());
    }

    #[test]
    fn preimages_in_order() {
        let t = Tower::with_default_config(4);
        let v = t.vertex(2, 1, 1u32).unwrap();
        let first = preimage(&t, &v, 1, 0).unwrap().unwrap();
        let second = preimage(&t, &v, 1, 1).unwrap().unwrap();
        assert_eq!(first, t.vertex(3, 1, 2u32).unwrap());
        assert_eq!(second, t.vertex(3, 1, 8u32).unwrap());
        assert_eq!(preimage(&t, &v, 1, 2).unwrap(), None);
        assert_eq!(preimage(&t, &v, 2, 0).unwrap(), None);
    }
}
