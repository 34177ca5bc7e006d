//! Finite-horizon evidence for the dynamical properties of the inverse limit:
//! proximality, separation, same-orbit detection, density, the lack of
//! periodic points and the failure of local equicontinuity.
//!
//! Pair searches never step one time unit at a time. Both orbits are
//! streamed as level-`N` segments and merged into windows during which each
//! side stays inside one token; inside a window the base-visit times of a
//! side form an arithmetic progression, so every question reduces to a
//! congruence.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::point::{
    deg, preimage, project_vertex, remn, stabilization_level, vertex_at, Degree,
    DyadicDistance, PointAnchor, Segment, SegmentStream,
};
use crate::report::Report;
use crate::tower::{Tower, VertexRef};
use crate::walk::Sym;

/// First time the level-`n` coordinate of the orbit is the base vertex.
pub fn first_meet_base(t: &Tower, a: &PointAnchor, n: usize) -> Result<BigUint> {
    let horizon = a.horizon(t).unwrap_or_default();
    let mut stream = SegmentStream::new(t, a, n, &horizon)?;
    let first = stream
        .by_ref()
        .find_map(|seg| Side::new(t, n, &seg, &seg.start).first_base(&seg.start, &seg.end))
        .expect("the anchor circuit ends at the base");
    Ok(first)
}

/// Number of times `s <= horizon` with the level-`N` coordinate of `f^s(a)`
/// equal to `target`, counted on the template structure.
pub fn visit_count(
    t: &Tower,
    a: &PointAnchor,
    target: &VertexRef,
    horizon: &BigUint,
) -> Result<BigUint> {
    let n = target.level();
    t.check_level(n)?;
    let v = match a {
        PointAnchor::Fixed => {
            return Ok(if target.is_base() {
                horizon + 1u32
            } else {
                BigUint::zero()
            })
        }
        PointAnchor::Anchored(v) => v,
    };
    if n > v.level() {
        return Err(Error::OutOfRange(format!(
            "target level {n} exceeds anchor depth {}",
            v.level()
        )));
    }
    let max = remn(t, v)?;
    if horizon > &max {
        return Err(Error::HorizonExhausted {
            requested: horizon.clone(),
            max,
        });
    }
    let mut counter = VisitCounter::new(t, target);
    let (d, c) = (v.level(), v.circuit());
    let lo = v.position();
    let hi = lo + horizon + 1u32;
    let len = t.len(d, c);
    let upper = if &hi > len {
        // offset l(D,i) is the base vertex closing the circuit
        counter.full(d, c) + u32::from(target.is_base())
    } else {
        counter.prefix(d, c, &hi)
    };
    Ok(upper - counter.prefix(d, c, lo))
}

/// Counts offsets inside circuit units whose projection is the target.
struct VisitCounter<'t> {
    tower: &'t Tower,
    target: VertexRef,
    memo: HashMap<(usize, usize), BigUint>,
}

impl<'t> VisitCounter<'t> {
    fn new(tower: &'t Tower, target: &VertexRef) -> Self {
        VisitCounter {
            tower,
            target: target.clone(),
            memo: HashMap::new(),
        }
    }

    fn base_hit(&self) -> u32 {
        u32::from(self.target.is_base())
    }

    /// Hits among offsets `0..l(m,c)` of one unit of `c_{m,c}`.
    fn full(&mut self, m: usize, c: usize) -> BigUint {
        if let Some(hit) = self.memo.get(&(m, c)) {
            return hit.clone();
        }
        let n = self.target.level();
        let hit = if m == n {
            BigUint::from(self.base_hit() + u32::from(self.target.circuit() == c))
        } else {
            let tokens = self.tower.template(m - 1, c).walk.tokens();
            let mut acc = BigUint::zero();
            for tok in tokens {
                acc += &tok.rep * self.unit(m - 1, tok.sym);
            }
            acc
        };
        self.memo.insert((m, c), hit.clone());
        hit
    }

    fn unit(&mut self, m: usize, sym: Sym) -> BigUint {
        match sym {
            Sym::Loop => BigUint::from(self.base_hit()),
            Sym::Circuit(c) => self.full(m, c),
        }
    }

    /// Hits among offsets `0..o` of one unit of `c_{m,c}`, `o <= l(m,c)`.
    fn prefix(&mut self, m: usize, c: usize, o: &BigUint) -> BigUint {
        if o.is_zero() {
            return BigUint::zero();
        }
        if o >= self.tower.len(m, c) {
            return self.full(m, c);
        }
        let n = self.target.level();
        if m == n {
            let own = self.target.circuit() == c && self.target.position() < o;
            return BigUint::from(self.base_hit() + u32::from(own));
        }
        let tower = self.tower;
        let tmpl = tower.template(m - 1, c);
        let k = tmpl.token_at(o);
        let mut acc = BigUint::zero();
        for tok in &tmpl.walk.tokens()[..k] {
            acc += &tok.rep * self.unit(m - 1, tok.sym);
        }
        let tok = &tmpl.walk.tokens()[k];
        let within = o - &tmpl.starts[k];
        let size = tower.sym_length(m - 1, tok.sym);
        let (q, rem) = within.div_rem(size);
        acc += q * self.unit(m - 1, tok.sym);
        if !rem.is_zero() {
            acc += match tok.sym {
                Sym::Loop => BigUint::from(self.base_hit()),
                Sym::Circuit(c2) => self.prefix(m - 1, c2, &rem),
            };
        }
        acc
    }
}

/// `j' - j` when both level-`n` coordinates are interior vertices of the
/// same circuit.
pub fn gap_at_level(t: &Tower, x: &PointAnchor, y: &PointAnchor, n: usize) -> Result<Option<BigInt>> {
    let (Some(u), Some(v)) = (x.vertex(), y.vertex()) else {
        return Ok(None);
    };
    let u = project_vertex(t, u, n)?;
    let v = project_vertex(t, v, n)?;
    if u.is_base() || v.is_base() || u.circuit() != v.circuit() {
        return Ok(None);
    }
    Ok(Some(
        BigInt::from(v.position().clone()) - BigInt::from(u.position().clone()),
    ))
}

/// The common gap over `levels`, if it is defined and constant there.
pub fn same_orbit_detect(
    t: &Tower,
    x: &PointAnchor,
    y: &PointAnchor,
    levels: &[usize],
) -> Result<Option<BigInt>> {
    let mut shift: Option<BigInt> = None;
    for &n in levels {
        match (gap_at_level(t, x, y, n)?, &shift) {
            (None, _) => return Ok(None),
            (Some(g), None) => shift = Some(g),
            (Some(g), Some(s)) if &g != s => return Ok(None),
            _ => {}
        }
    }
    Ok(shift)
}

/// Where one side of a pair sits during a window.
#[derive(Debug, Clone)]
struct Side {
    sym: Sym,
    /// Offset into the unit at the window start.
    phase: BigUint,
    /// Unit length; 1 for the loop.
    len: BigUint,
}

impl Side {
    fn new(t: &Tower, n: usize, seg: &Segment, lo: &BigUint) -> Self {
        Side {
            sym: seg.sym,
            phase: seg.phase_at(t, n, lo),
            len: t.sym_length(n, seg.sym).clone(),
        }
    }

    /// Base-visit times are `lo + residue (mod len)`.
    fn residue(&self) -> BigUint {
        (&self.len - &self.phase % &self.len) % &self.len
    }

    fn coord(&self, lo: &BigUint, time: &BigUint) -> (usize, BigUint) {
        match self.sym {
            Sym::Loop => (0, BigUint::zero()),
            Sym::Circuit(c) => {
                let u = (&self.phase + time - lo) % &self.len;
                if u.is_zero() {
                    (0, u)
                } else {
                    (c, u)
                }
            }
        }
    }

    fn degree(&self, lo: &BigUint, time: &BigUint) -> Degree {
        match self.coord(lo, time) {
            (0, _) => Degree::Infinite,
            (c, _) => Degree::Finite(c),
        }
    }

    fn first_base(&self, lo: &BigUint, hi: &BigUint) -> Option<BigUint> {
        let s = lo + self.residue();
        (&s < hi).then_some(s)
    }
}

/// Least `s` in `lo..hi` with `s = lo + a (mod m)` and `s = lo + b (mod n)`.
fn first_common(lo: &BigUint, hi: &BigUint, a: &BigUint, m: &BigUint, b: &BigUint, n: &BigUint) -> Option<BigUint> {
    let (a, m, b, n) = (
        BigInt::from(a.clone()),
        BigInt::from(m.clone()),
        BigInt::from(b.clone()),
        BigInt::from(n.clone()),
    );
    let eg = m.extended_gcd(&n);
    let diff = &b - &a;
    if !(&diff % &eg.gcd).is_zero() {
        return None;
    }
    let lcm = &m / &eg.gcd * &n;
    let k = (&diff / &eg.gcd * &eg.x).mod_floor(&(&n / &eg.gcd));
    let r = (a + m * k).mod_floor(&lcm);
    let s = lo + r.to_biguint().expect("nonnegative");
    (&s < hi).then_some(s)
}

/// A stretch `lo..hi` of time during which each side stays in one segment.
struct Window {
    lo: BigUint,
    hi: BigUint,
    x: Side,
    y: Side,
}

impl Window {
    fn identical(&self) -> bool {
        match (self.x.sym, self.y.sym) {
            (Sym::Loop, Sym::Loop) => true,
            (Sym::Circuit(a), Sym::Circuit(b)) => a == b && self.x.phase == self.y.phase,
            _ => false,
        }
    }

    fn differ_at(&self, time: &BigUint) -> bool {
        self.x.coord(&self.lo, time) != self.y.coord(&self.lo, time)
    }

    fn first_joint_base(&self) -> Option<BigUint> {
        first_common(
            &self.lo,
            &self.hi,
            &self.x.residue(),
            &self.x.len,
            &self.y.residue(),
            &self.y.len,
        )
    }

    /// Unless the window is identical, the sides agree only at joint base
    /// visits, which are at least two steps apart. So the first (last)
    /// difference is at one of the first (last) two times.
    fn first_divergence(&self) -> Option<BigUint> {
        if self.identical() {
            return None;
        }
        let next = &self.lo + 1u32;
        [self.lo.clone(), next]
            .into_iter()
            .find(|s| s < &self.hi && self.differ_at(s))
    }

    fn last_divergence(&self) -> Option<BigUint> {
        if self.identical() {
            return None;
        }
        let mut out = None;
        for back in [1u32, 2] {
            if self.hi >= &self.lo + back {
                let s = &self.hi - back;
                if self.differ_at(&s) {
                    out = Some(s);
                    break;
                }
            }
        }
        out
    }

    fn first_agreement(&self) -> Option<BigUint> {
        if self.identical() {
            Some(self.lo.clone())
        } else {
            self.first_joint_base()
        }
    }

    fn first_degree_difference(&self) -> Option<BigUint> {
        let (x, y, lo, hi) = (&self.x, &self.y, &self.lo, &self.hi);
        if x.sym == y.sym {
            if x.sym == Sym::Loop || x.phase == y.phase {
                return None;
            }
            // same circuit, out of phase: differ exactly when one side is base
            return match (x.first_base(lo, hi), y.first_base(lo, hi)) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
        }
        let next = lo + 1u32;
        [lo.clone(), next]
            .into_iter()
            .find(|s| s < hi && x.degree(lo, s) != y.degree(lo, s))
    }
}

/// Merged windows of two orbits at level `n`, covering `0..=horizon`.
struct PairScan<'t> {
    tower: &'t Tower,
    level: usize,
    xs: SegmentStream<'t>,
    ys: SegmentStream<'t>,
    cur_x: Option<Segment>,
    cur_y: Option<Segment>,
    clock: BigUint,
    end: BigUint,
    windows: u64,
}

impl<'t> PairScan<'t> {
    fn new(t: &'t Tower, x: &PointAnchor, y: &PointAnchor, n: usize, horizon: &BigUint) -> Result<Self> {
        let mut xs = SegmentStream::new(t, x, n, horizon)?;
        let mut ys = SegmentStream::new(t, y, n, horizon)?;
        let cur_x = xs.next();
        let cur_y = ys.next();
        Ok(PairScan {
            tower: t,
            level: n,
            xs,
            ys,
            cur_x,
            cur_y,
            clock: BigUint::zero(),
            end: horizon + 1u32,
            windows: 0,
        })
    }

    /// Next window; errors once the window budget is spent.
    fn next_window(&mut self) -> Result<Option<Window>> {
        if self.clock >= self.end {
            return Ok(None);
        }
        self.windows += 1;
        let limit = self.tower.explicit_limit();
        if self.windows > limit {
            return Err(Error::limit("pair scan windows", self.windows, limit));
        }
        let (Some(sx), Some(sy)) = (&self.cur_x, &self.cur_y) else {
            return Ok(None);
        };
        let lo = self.clock.clone();
        let hi = sx.end.clone().min(sy.end.clone()).min(self.end.clone());
        let w = Window {
            x: Side::new(self.tower, self.level, sx, &lo),
            y: Side::new(self.tower, self.level, sy, &lo),
            lo,
            hi: hi.clone(),
        };
        if sx.end == hi {
            self.cur_x = self.xs.next();
        }
        if sy.end == hi {
            self.cur_y = self.ys.next();
        }
        self.clock = hi;
        Ok(Some(w))
    }

    fn find<F>(&mut self, mut f: F) -> Result<Option<BigUint>>
    where
        F: FnMut(&Window) -> Option<BigUint>,
    {
        while let Some(w) = self.next_window()? {
            if let Some(s) = f(&w) {
                return Ok(Some(s));
            }
        }
        Ok(None)
    }
}

/// Largest horizon on which both orbits are determined.
pub fn common_horizon(t: &Tower, x: &PointAnchor, y: &PointAnchor) -> BigUint {
    match (x.horizon(t), y.horizon(t)) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => BigUint::zero(),
    }
}

/// First time both level-`n` coordinates are the base vertex, within the
/// common horizon.
pub fn joint_meet(t: &Tower, x: &PointAnchor, y: &PointAnchor, n: usize) -> Result<Option<BigUint>> {
    let horizon = common_horizon(t, x, y);
    PairScan::new(t, x, y, n, &horizon)?.find(Window::first_joint_base)
}

/// First time the level-`n` coordinates differ, within `horizon`.
pub fn first_divergence(
    t: &Tower,
    x: &PointAnchor,
    y: &PointAnchor,
    n: usize,
    horizon: &BigUint,
) -> Result<Option<BigUint>> {
    PairScan::new(t, x, y, n, horizon)?.find(Window::first_divergence)
}

fn last_divergence(t: &Tower, x: &PointAnchor, y: &PointAnchor, n: usize, horizon: &BigUint) -> Result<Option<BigUint>> {
    let mut scan = PairScan::new(t, x, y, n, horizon)?;
    let mut last = None;
    while let Some(w) = scan.next_window()? {
        if let Some(s) = w.last_divergence() {
            last = Some(s);
        }
    }
    Ok(last)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairReport {
    pub x: PointAnchor,
    pub y: PointAnchor,
    pub level: usize,
    pub horizon: BigUint,
    pub first_joint_base: Option<BigUint>,
    pub first_divergence: Option<BigUint>,
    pub last_divergence: Option<BigUint>,
    /// First time the level-`N` coordinates have different degrees; only
    /// recorded when the cylinders have different degrees.
    pub first_degree_difference: Option<BigUint>,
    /// Largest and smallest distance between the full threads over the
    /// window `0..=horizon`.
    pub max_distance: DyadicDistance,
    pub min_distance: DyadicDistance,
}

impl PairReport {
    pub fn to_report(&self) -> Report {
        let opt = |v: &Option<BigUint>| v.as_ref().map_or("none".to_string(), BigUint::to_string);
        let mut r = Report::new("pair")
            .param("x", &self.x)
            .param("y", &self.y)
            .param("N", self.level)
            .param("horizon", &self.horizon);
        r.detail("first_joint_base", opt(&self.first_joint_base));
        r.detail("first_divergence", opt(&self.first_divergence));
        r.detail("last_divergence", opt(&self.last_divergence));
        r.detail("first_degree_difference", opt(&self.first_degree_difference));
        r.detail("max_distance", self.max_distance);
        r.detail("min_distance", self.min_distance);
        r
    }
}

impl fmt::Display for PairReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_report())
    }
}

fn pair_depth(t: &Tower, x: &PointAnchor, y: &PointAnchor) -> Result<usize> {
    match (x.depth(), y.depth()) {
        (Some(a), Some(b)) if a != b => Err(Error::GraphMismatch(format!(
            "anchors at depths {a} and {b}"
        ))),
        (Some(a), _) | (_, Some(a)) => Ok(a),
        (None, None) => Ok(t.depth()),
    }
}

/// Divergence, joint base visits and distances of two orbits over
/// `0..=horizon`.
pub fn separation_report(
    t: &Tower,
    x: &PointAnchor,
    y: &PointAnchor,
    n: usize,
    horizon: &BigUint,
) -> Result<PairReport> {
    let depth = pair_depth(t, x, y)?;
    if n > depth {
        return Err(Error::OutOfRange(format!(
            "resolution {n} exceeds anchor depth {depth}"
        )));
    }
    let max = common_horizon(t, x, y);
    if horizon > &max && (x.depth().is_some() || y.depth().is_some()) {
        return Err(Error::HorizonExhausted {
            requested: horizon.clone(),
            max,
        });
    }
    let first_joint_base = PairScan::new(t, x, y, n, horizon)?.find(Window::first_joint_base)?;
    let first_div = first_divergence(t, x, y, n, horizon)?;
    let last_div = last_divergence(t, x, y, n, horizon)?;
    let deg_x = x.vertex().map_or(Degree::Infinite, deg);
    let deg_y = y.vertex().map_or(Degree::Infinite, deg);
    let first_degree_difference = if deg_x != deg_y {
        PairScan::new(t, x, y, n, horizon)?.find(Window::first_degree_difference)?
    } else {
        None
    };

    // Differences are inherited upwards, so the largest distance is set by
    // the lowest level that ever differs and the smallest by the highest
    // level that ever agrees.
    let mut max_distance = DyadicDistance::AtMost(depth);
    for m in 1..=depth {
        let hit = if m == n {
            first_div.clone()
        } else {
            first_divergence(t, x, y, m, horizon)?
        };
        if hit.is_some() {
            max_distance = DyadicDistance::Exact(m);
            break;
        }
    }
    let mut min_distance = DyadicDistance::Exact(1);
    for m in (1..=depth).rev() {
        let hit = PairScan::new(t, x, y, m, horizon)?.find(Window::first_agreement)?;
        if hit.is_some() {
            min_distance = if m == depth {
                DyadicDistance::AtMost(depth)
            } else {
                DyadicDistance::Exact(m + 1)
            };
            break;
        }
    }
    Ok(PairReport {
        x: x.clone(),
        y: y.clone(),
        level: n,
        horizon: horizon.clone(),
        first_joint_base,
        first_divergence: first_div,
        last_divergence: last_div,
        first_degree_difference,
        max_distance,
        min_distance,
    })
}

/// The anchor at depth `D` reached from `v_{N,1,1}` by taking, level by
/// level, the first vertex of `c_{n+1,1}` over the current one.
pub fn dense_anchor(t: &Tower, n: usize, d: usize) -> Result<PointAnchor> {
    if n == 0 || d <= n {
        return Err(Error::OutOfRange(format!(
            "dense anchor needs 1 <= N < D, got N={n} D={d}"
        )));
    }
    t.check_level(d)?;
    let mut v = t.vertex(n, 1, 1u32)?;
    for _ in n..d {
        v = preimage(t, &v, 1, 0)?.expect("c_{n,1} occurs in every template of c_{n+1,1}");
    }
    PointAnchor::at(v)
}

/// Whether the orbit visits every vertex of level `n` before its horizon.
pub fn coverage_check(t: &Tower, a: &PointAnchor, n: usize) -> Result<bool> {
    let g = t.materialize_level(n)?;
    let horizon = a.horizon(t).unwrap_or_default();
    for id in g.vertices() {
        let target = t.vertex_of_id(n, id)?;
        if visit_count(t, a, &target, &horizon)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessReport {
    pub x: PointAnchor,
    /// First vertex of `c_{D+1,i}` over the anchor.
    pub lifted: PointAnchor,
    /// Second vertex of `c_{D+1,i}` over the anchor.
    pub companion: PointAnchor,
    /// `companion = f^shift(lifted)`.
    pub shift: BigInt,
    pub level: usize,
    pub divergence: BigUint,
    pub horizon: BigUint,
    /// Whether the anchor's degree already holds one level down.
    pub stabilized: bool,
}

impl WitnessReport {
    pub fn to_report(&self) -> Report {
        let mut r = Report::new("witness")
            .param("x", &self.x)
            .param("N", self.level);
        r.detail("lifted", &self.lifted);
        r.detail("companion", &self.companion);
        r.detail("shift", &self.shift);
        r.detail("divergence", &self.divergence);
        r.detail("horizon", &self.horizon);
        r.detail("stabilized", self.stabilized);
        r
    }
}

impl fmt::Display for WitnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_report())
    }
}

/// Two points of the cylinder of `x`, one level deeper, that separate at
/// level `n`: the first two vertices of `c_{D+1,i}` lying over `x`.
pub fn equicontinuity_witness(t: &Tower, x: &PointAnchor, n: usize) -> Result<WitnessReport> {
    let Some(v) = x.vertex() else {
        return Err(Error::InvalidAnchor(
            "the fixed point has no cylinder-mates to separate from".into(),
        ));
    };
    let d = v.level();
    if n > d {
        return Err(Error::OutOfRange(format!(
            "resolution {n} exceeds anchor depth {d}"
        )));
    }
    t.check_level(d + 1)?;
    let i = v.circuit();
    let lifted = preimage(t, v, i, 0)?.expect("c_{D,i} occurs in the template of c_{D+1,i}");
    let companion = preimage(t, v, i, 1)?.ok_or_else(|| {
        Error::InvalidSchedule(format!("c_{{{d},{i}}} occurs once in its own cover"))
    })?;
    let shift = BigInt::from(companion.position().clone()) - BigInt::from(lifted.position().clone());
    let stabilized = d >= 2 && deg(&project_vertex(t, v, d - 1)?) == deg(v);
    let lifted = PointAnchor::at(lifted)?;
    let companion = PointAnchor::at(companion)?;
    let horizon = common_horizon(t, &lifted, &companion);
    let divergence = first_divergence(t, &lifted, &companion, n, &horizon)?.ok_or(
        Error::NoDivergenceWithinHorizon {
            level: n,
            horizon: horizon.clone(),
        },
    )?;
    Ok(WitnessReport {
        x: x.clone(),
        lifted,
        companion,
        shift,
        level: n,
        divergence,
        horizon,
        stabilized,
    })
}

/// No circuit of level `n+1` is sent onto a single traversal of a circuit
/// of level `n`, for every `n <= depth`.
pub fn no_periodic_check(t: &Tower, depth: usize) -> Result<Report> {
    t.check_level(depth + 1)?;
    let mut report = Report::new("no_periodic").param("depth", depth);
    for n in 0..=depth {
        for c in 1..=n + 1 {
            let tokens = t.rewrite_template(n, c)?.tokens();
            if let [only] = tokens {
                if matches!(only.sym, Sym::Circuit(_)) && only.rep.is_one() {
                    report.detail("level", n + 1);
                    report.detail("circuit", c);
                    report.fail("circuit maps onto a single circuit");
                    return Ok(report);
                }
            }
        }
    }
    Ok(report)
}

/// `true` when every value is at least the one before it.
fn nondecreasing(values: &[BigUint]) -> bool {
    values.windows(2).all(|w| w[0] <= w[1])
}

/// Follows a pair up the tower by first preimages and records, per depth,
/// the joint base time and the witness divergence time at level `n`. Both
/// sequences are expected to be nondecreasing.
pub fn depth_trend(t: &Tower, x: &PointAnchor, y: &PointAnchor, n: usize, max_depth: usize) -> Result<Report> {
    let start = pair_depth(t, x, y)?;
    let mut report = Report::new("depth_trend")
        .param("x", x)
        .param("y", y)
        .param("N", n)
        .param("max_depth", max_depth);
    let (mut x, mut y) = (x.clone(), y.clone());
    let mut meets = Vec::new();
    let mut divergences = Vec::new();
    for d in start..=max_depth {
        let meet = joint_meet(t, &x, &y, n)?;
        let div = match equicontinuity_witness(t, &x, n) {
            Ok(w) => Some(w.divergence),
            Err(Error::OutOfRange(_) | Error::InvalidAnchor(_) | Error::NoDivergenceWithinHorizon { .. }) => None,
            Err(e) => return Err(e),
        };
        let show = |v: &Option<BigUint>| v.as_ref().map_or("none".into(), BigUint::to_string);
        report.detail(&format!("meet_{d}"), show(&meet));
        report.detail(&format!("divergence_{d}"), show(&div));
        meets.extend(meet);
        divergences.extend(div);
        if d == max_depth {
            break;
        }
        x = lift_first(t, &x)?;
        y = lift_first(t, &y)?;
    }
    if !nondecreasing(&meets) {
        report.fail("joint base times decrease with depth");
    } else if !nondecreasing(&divergences) {
        report.fail("witness divergence times decrease with depth");
    }
    Ok(report)
}

/// First vertex one level up, in the same circuit index, over the anchor.
pub fn lift_first(t: &Tower, a: &PointAnchor) -> Result<PointAnchor> {
    match a {
        PointAnchor::Fixed => Ok(PointAnchor::Fixed),
        PointAnchor::Anchored(v) => {
            let up = preimage(t, v, v.circuit(), 0)?.expect("c_{D,i} occurs over itself");
            PointAnchor::at(up)
        }
    }
}

/// All anchors at depth `d`, ordered by circuit then position.
pub fn all_anchors(t: &Tower, d: usize) -> Result<Vec<PointAnchor>> {
    t.check_level(d)?;
    let mut out = Vec::new();
    for i in 1..=d {
        let len = t
            .circuit_length(d, i)?
            .to_u64()
            .filter(|&l| l <= t.explicit_limit())
            .ok_or_else(|| Error::limit("anchor enumeration", t.len(d, i).clone(), t.explicit_limit()))?;
        for j in 1..len {
            out.push(PointAnchor::Anchored(VertexRef::interior(d, i, BigUint::from(j))));
        }
    }
    Ok(out)
}

/// Stabilization level of a pair: the least `N` from which both anchors'
/// projections keep their anchor degree.
pub fn pair_stabilization(t: &Tower, x: &PointAnchor, y: &PointAnchor) -> Option<usize> {
    Some(stabilization_level(t, x)?.max(stabilization_level(t, y)?))
}

/// Thread distance between two orbits at a given time.
pub fn distance_at(t: &Tower, x: &PointAnchor, y: &PointAnchor, time: &BigUint) -> Result<DyadicDistance> {
    let depth = pair_depth(t, x, y)?;
    let mut first = None;
    for m in 1..=depth {
        if vertex_at(t, x, m, time)? != vertex_at(t, y, m, time)? {
            first = Some(m);
            break;
        }
    }
    Ok(first.map_or(DyadicDistance::AtMost(depth), DyadicDistance::Exact))
}
