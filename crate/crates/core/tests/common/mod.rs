//! Brute-force oracles built only from materialized levels and covers.
#![allow(dead_code)]

use std::sync::Arc;

use covertower::graph::{compose, GraphHom, VertexId};
use covertower::{Tower, VertexRef};
use num_bigint::BigUint;
use num_traits::ToPrimitive;

/// Composite cover from level `d` down to level `n`.
pub fn cover_down(t: &Tower, d: usize, n: usize) -> GraphHom {
    let mut h = GraphHom::identity(Arc::new(t.materialize_level(d).unwrap()));
    for m in (n..d).rev() {
        h = compose(&t.materialize_cover(m).unwrap(), &h).unwrap();
    }
    h
}

/// Ids along `c_{d,i}` from offset 0 to `l(d,i)`.
pub fn circuit_ids(t: &Tower, d: usize, i: usize) -> Vec<VertexId> {
    let len = t.circuit_length(d, i).unwrap().to_usize().unwrap();
    (0..=len)
        .map(|j| t.vertex_id(&t.vertex(d, i, j).unwrap()).unwrap())
        .collect()
}

/// Level-`n` coordinates of the orbit of `v_{d,i,j}` for `k + 1` steps.
pub fn explicit_orbit(t: &Tower, h: &GraphHom, d: usize, i: usize, j: usize, n: usize, k: usize) -> Vec<VertexRef> {
    let ids = circuit_ids(t, d, i);
    ids[j..=j + k]
        .iter()
        .map(|&id| t.vertex_of_id(n, h.apply(id)).unwrap())
        .collect()
}

/// Occurrence starts of `c_{n,l}` in an explicit vertex sequence at level
/// `n`: base, the circuit's interior in order, base.
pub fn scan_occurrences(t: &Tower, seq: &[VertexRef], n: usize, l: usize) -> Vec<usize> {
    let pattern: Vec<VertexRef> = circuit_ids(t, n, l)
        .into_iter()
        .map(|id| t.vertex_of_id(n, id).unwrap())
        .collect();
    let mut out = Vec::new();
    let mut p = 0;
    while p + pattern.len() <= seq.len() {
        if seq[p..p + pattern.len()] == pattern[..] {
            out.push(p);
            p += pattern.len() - 1;
        } else {
            p += 1;
        }
    }
    out
}

/// Level-`n` vertex sequence of `copies` traversals of `c_{d,l}`.
pub fn explicit_projected_circuit(t: &Tower, d: usize, l: usize, n: usize, copies: usize) -> Vec<VertexRef> {
    let h = cover_down(t, d, n);
    let ids = circuit_ids(t, d, l);
    let mut walk = vec![ids[0]];
    for _ in 0..copies {
        walk.extend_from_slice(&ids[1..]);
    }
    walk.iter()
        .map(|&id| t.vertex_of_id(n, h.apply(id)).unwrap())
        .collect()
}

/// Same rendering as `GapSpectrum::render`, from explicit occurrences.
pub fn render_scan(circuit: usize, unit: usize, starts: &[usize]) -> String {
    let gaps: Vec<String> = starts
        .windows(2)
        .map(|w| (w[1] - w[0] - unit).to_string())
        .collect();
    let occ: Vec<String> = starts.iter().map(usize::to_string).collect();
    format!(
        "circuit={circuit} unit={unit} occurrences={} gaps={}",
        occ.join(","),
        gaps.join(",")
    )
}

pub fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

/// `3^e` as a big integer.
pub fn pow3(e: u32) -> BigUint {
    BigUint::from(3u32).pow(e)
}
