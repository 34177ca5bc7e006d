mod common;

use common::{big, cover_down, explicit_projected_circuit, pow3, render_scan, scan_occurrences};
use covertower::graph::map_walk;
use covertower::walk::*;
use covertower::Tower;
use num_traits::ToPrimitive;

fn w(s: &str) -> SymWalk {
    s.parse().unwrap()
}

#[test]
fn deep_projection_examples() {
    let t = Tower::with_default_config(5);
    let p = project_to(&t, &w("3:C1"), 1).unwrap();
    assert_eq!(p.length(&t), big(18));
    assert_eq!(p.to_string(), "E^2 C1^2 E^2 C1^2 E^6");
    let p = project_to(&t, &w("4:C2"), 2).unwrap();
    assert_eq!(p.length(&t), big(18));
}

#[test]
fn explicit_expansion_examples() {
    let t = Tower::with_default_config(2);
    let e = expand_explicit(&t, &w("1:E"), 100).unwrap();
    assert_eq!(e.vertices().iter().map(|v| v.index()).collect::<Vec<_>>(), [0, 0]);
    let c = expand_explicit(&t, &w("1:C1"), 100).unwrap();
    assert_eq!(c.vertices().iter().map(|v| v.index()).collect::<Vec<_>>(), [0, 1, 0]);
    assert!(expand_explicit(&t, &w("2:C1^3"), 10).is_err());
}

#[test]
fn projection_commutes_with_explicit_covers() {
    let t = Tower::with_default_config(6);
    let walks = [
        "2:C1", "2:E C2 C1^2", "3:C1 C3 E^2 C2", "4:C1", "4:C2^2 E C4", "5:C1", "5:E C3 C2 C5 C1",
        "6:C1", "6:C2 C6 E",
    ];
    for text in walks {
        let sw = w(text);
        let n = sw.level();
        let phi = t.materialize_cover(n - 1).unwrap();
        let lhs = expand_explicit(&t, &project_one(&t, &sw).unwrap(), 1_000_000).unwrap();
        let rhs = map_walk(&phi, &expand_explicit(&t, &sw, 1_000_000).unwrap()).unwrap();
        assert_eq!(lhs, rhs, "{text}");
        lhs.validate(phi.target()).unwrap();
    }
}

#[test]
fn r_walk_lengths_match_explicit_expansion() {
    let t = Tower::with_default_config(6);
    assert_eq!(r_walk(&t, 2, 2, 2).unwrap().length(&t), big(5));
    assert_eq!(r_walk(&t, 3, 2, 2).unwrap().length(&t), big(17));
    for n in 1..=5 {
        for d in 1..=n + 1 {
            for m in 0..=n {
                let r = r_walk(&t, n, d, m).unwrap();
                let e = expand_explicit(&t, &r, 1_000_000).unwrap();
                assert_eq!(big(e.len() as u64), r_length(&t, n, d).unwrap());
            }
        }
    }
}

#[test]
fn spectra_match_substring_scan() {
    let t = Tower::with_default_config(7);
    for n in 2..=7 {
        for big_n in 1..n.min(5) {
            for l in 1..=big_n {
                for copies in 1..=2 {
                    let seq = explicit_projected_circuit(&t, n, l, big_n, copies);
                    let starts = scan_occurrences(&t, &seq, big_n, l);
                    let unit = t.circuit_length(big_n, l).unwrap().to_usize().unwrap();
                    let walk = project_to(&t, &SymWalk::circuit(n, l).unwrap().repeat(copies), big_n).unwrap();
                    let spectrum = gap_spectrum(&t, &walk, l).unwrap();
                    assert_eq!(spectrum.render(), render_scan(l, unit, &starts), "n={n} l={l} N={big_n}");
                }
            }
        }
    }
}

#[test]
fn largest_gaps_equal_formula() {
    let t = Tower::with_default_config(12);
    assert_eq!(g_formula(&t, 3, 1, 2).unwrap(), big(6));
    assert_eq!(g_formula(&t, 4, 1, 2).unwrap(), big(24));
    // brute-force largest gap of the doubled walk
    let t6 = Tower::with_default_config(6);
    for (n, l, big_n) in [(3, 1, 2), (4, 1, 2), (5, 2, 3), (6, 1, 3)] {
        let seq = explicit_projected_circuit(&t6, n, l, big_n, 2);
        let starts = scan_occurrences(&t6, &seq, big_n, l);
        let unit = t6.circuit_length(big_n, l).unwrap().to_usize().unwrap();
        let max = starts.windows(2).map(|p| p[1] - p[0] - unit).max().unwrap();
        assert_eq!(big(max as u64), g_formula(&t6, n, l, big_n).unwrap(), "({n},{l},{big_n})");
    }
    for n in 2..=12 {
        for big_n in 1..n {
            for l in 1..=big_n {
                let g = g_formula(&t, n, l, big_n).unwrap();
                let closed = pow3((n - l) as u32) - pow3((big_n - l) as u32);
                assert_eq!(g, closed, "g({n},{l},{big_n})");
                let doubled = project_to(&t, &SymWalk::circuit(n, l).unwrap().repeat(2), big_n);
                if let Ok(doubled) = doubled {
                    assert_eq!(gap_spectrum(&t, &doubled, l).unwrap().max_gap(), Some(g));
                }
            }
        }
    }
}

#[test]
fn verifier_examples() {
    let t = Tower::with_default_config(7);
    for (n, l, big_n) in [(4, 1, 2), (5, 2, 3), (3, 1, 2), (4, 2, 3)] {
        assert!(verify_spectrum(&t, n, l, big_n).unwrap().passed, "({n},{l},{big_n})");
    }
    // one level up only g(N+1,l,N) and 0 occur
    for big_n in 1..=5 {
        for l in 1..=big_n {
            let walk = project_to(&t, &SymWalk::circuit(big_n + 1, l).unwrap(), big_n).unwrap();
            let g = g_formula(&t, big_n + 1, l, big_n).unwrap();
            for (value, _) in gap_spectrum(&t, &walk, l).unwrap().gap_runs() {
                assert!(value == big(0) || value == g);
            }
        }
    }
    for (n, l, big_n) in [(4, 1, 2), (5, 1, 2), (6, 2, 3)] {
        assert!(verify_interleaving(&t, n, l, big_n).unwrap().passed, "({n},{l},{big_n})");
    }
    let r = verify_interleaving(&t, 5, 1, 2).unwrap();
    assert!(r.get("pattern").unwrap().contains("3,4,3"), "{r}");
    let r5 = verify_tail(&t, 5, 1, 3).unwrap();
    let r6 = verify_tail(&t, 6, 1, 3).unwrap();
    assert!(r5.passed && r6.passed && verify_tail(&t, 6, 2, 4).unwrap().passed);
    let lead = |r: &covertower::report::Report| r.get("lead").unwrap().parse::<u64>().unwrap();
    assert!(lead(&r6) > lead(&r5), "{r5}\n{r6}");
}

#[test]
fn tail_pair_matches_explicit_scan() {
    let t = Tower::with_default_config(6);
    let r = verify_tail(&t, 6, 1, 3).unwrap();
    let seq = explicit_projected_circuit(&t, 6, 1, 3, 1);
    let own = scan_occurrences(&t, &seq, 3, 1);
    let next = scan_occurrences(&t, &seq, 3, 2);
    let tail_start = own.last().unwrap() + 18;
    assert_eq!(r.get("tail_start").unwrap(), tail_start.to_string());
    let tail: Vec<usize> = next.into_iter().filter(|&s| s >= tail_start).collect();
    assert_eq!(r.get("tail_occurrences").unwrap(), tail.len().to_string());
    // the gap after the first paired occurrence ends where the report says
    let first: usize = r.get("pair_first").unwrap().parse().unwrap();
    assert!(tail.iter().any(|&s| s + 6 == first));
}

#[test]
fn explicit_cover_composite_agrees_with_symbolic_projection() {
    let t = Tower::with_default_config(5);
    let h = cover_down(&t, 5, 2);
    let c = SymWalk::circuit(5, 2).unwrap();
    let explicit = map_walk(&h, &expand_explicit(&t, &c, 1_000_000).unwrap()).unwrap();
    let symbolic = expand_explicit(&t, &project_to(&t, &c, 2).unwrap(), 1_000_000).unwrap();
    assert_eq!(explicit, symbolic);
}
