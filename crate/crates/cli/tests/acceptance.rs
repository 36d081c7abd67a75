//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stringsep::congestion::{congestion, decompose_to_paths, Caps, Mode};
use stringsep::cuts::{find_separator, fhl_sweep, min_separator_exact, min_vertex_cut, ratio_f64};
use stringsep::embedding::{bourgain_sample, lipschitz_violation, scale_count, success_bound};
use stringsep::experiments::{all_counts_even, drawing_conflict_experiment, even_subword, pcr_lower_bound};
use stringsep::geometry::{
    expo_family, intersection_graph, random_segment_instance, validate_weak_realization, weak_realization_to_text,
    weak_to_strings, Violation,
};
use stringsep::graph::{check_separator, complete, cycle, gnp_connected, grid, path};
use stringsep::metrics::{
    edge_sparsity_exact, ratio_functional, shortest_path_metric, vertex_sparsity_exact, vertex_weight_metric,
    MetricMatrix,
};
use stringsep::{seeds, Graph};

/// Regression baseline for `|S| / (√m · ln(m + 2))` on random segment
/// instances, frozen from a calibration run (observed maximum 0.122).
const C_CAL: f64 = 0.15;

/// One-sided 99% normal quantile.
const Z99: f64 = 2.326;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    check(elapsed <= limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

/// 50 random connected graphs with n in 4..=10.
fn duality_corpus() -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..50)
        .map(|i| {
            let n = rng.gen_range(4..=10);
            let p = rng.gen_range(0.2..0.7);
            gnp_connected(n, p, seeds::derive(77, i)).unwrap()
        })
        .collect()
}

fn c1_exact_congestion() -> Outcome {
    let econg = |g: &Graph| congestion(g, Mode::Edge, Caps::default()).unwrap().congestion;
    let vcong = |g: &Graph| congestion(g, Mode::Vertex, Caps::default()).unwrap().congestion;
    let mut cases: Vec<(String, Box<dyn Fn() -> f64>, f64)> = Vec::new();
    for n in 3..=6 {
        cases.push((format!("econg(K_{n})"), Box::new(move || econg(&complete(n))), 1.0));
    }
    cases.push(("econg(P_3)".into(), Box::new(move || econg(&path(3))), 2.0));
    cases.push(("econg(C_4)".into(), Box::new(move || econg(&cycle(4))), 2.0));
    cases.push(("vcong(P_3)".into(), Box::new(move || vcong(&path(3))), 2.0));
    cases.push(("vcong(K_4)".into(), Box::new(move || vcong(&complete(4))), 1.5));
    cases.push(("vcong(K_2)".into(), Box::new(move || vcong(&complete(2))), 0.5));
    let mut slowest = Duration::ZERO;
    for (name, run, want) in &cases {
        let t = Instant::now();
        let got = run();
        let el = t.elapsed();
        slowest = slowest.max(el);
        check((got - want).abs() <= 1e-6, || format!("{name} = {got}, expected {want}"))?;
        within(el, Duration::from_secs(5)).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!("{} values exact, slowest run {slowest:.2?}", cases.len()))
}

fn c2_easy_duality() -> Outcome {
    let t = Instant::now();
    let mut worst_e = f64::INFINITY;
    let mut worst_v = f64::INFINITY;
    for (i, g) in duality_corpus().iter().enumerate() {
        let econg = congestion(g, Mode::Edge, Caps::UNLIMITED).map_err(|e| e.to_string())?.congestion;
        let vcong = congestion(g, Mode::Vertex, Caps::UNLIMITED).map_err(|e| e.to_string())?.congestion;
        let espars = ratio_f64(edge_sparsity_exact(g).unwrap().0);
        let pe = espars * econg;
        check(pe >= 1.0 - 1e-6, || format!("graph {i}: espars*econg = {pe}"))?;
        worst_e = worst_e.min(pe);
        if !g.is_complete() {
            let vspars = ratio_f64(vertex_sparsity_exact(g).unwrap().0);
            let pv = 4.0 * vspars * vcong;
            check(pv >= 1.0 - 1e-6, || format!("graph {i}: 4*vspars*vcong = {pv}"))?;
            worst_v = worst_v.min(pv);
        }
    }
    within(t.elapsed(), Duration::from_secs(120))?;
    Ok(format!(
        "min espars*econg = {worst_e:.6}, min 4*vspars*vcong = {worst_v:.6} ({:.2?})",
        t.elapsed()
    ))
}

fn c3_dualization() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst_gap: f64 = 0.0;
    let mut random_checked = 0;
    for (i, g) in duality_corpus().iter().enumerate() {
        let sol = congestion(g, Mode::Edge, Caps::UNLIMITED).map_err(|e| e.to_string())?;
        let target = 1.0 / sol.congestion;
        let r = ratio_functional(g, Mode::Edge, &sol.dual_weights).map_err(|e| e.to_string())?;
        check((r - target).abs() <= 1e-6, || format!("graph {i}: dual ratio {r}, 1/econg {target}"))?;
        worst_gap = worst_gap.max((r - target).abs());
        for _ in 0..20 {
            let w: Vec<f64> = (0..g.m()).map(|_| rng.gen_range(0.0..1.0)).collect();
            let r = ratio_functional(g, Mode::Edge, &w).map_err(|e| e.to_string())?;
            check(r >= target - 1e-6, || format!("graph {i}: random weights give {r} < {target}"))?;
            random_checked += 1;
        }
    }
    Ok(format!(
        "dual metric within {worst_gap:.1e} of 1/econg; {random_checked} random weightings above it ({:.2?})",
        t.elapsed()
    ))
}

/// A random function that is 1-Lipschitz for `d`: either a distance to a
/// random set, or random values scaled down to Lipschitz constant 1.
fn random_lipschitz(d: &MetricMatrix, rng: &mut ChaCha8Rng, kind: usize) -> Vec<f64> {
    let n = d.n();
    loop {
        let f: Vec<f64> = if kind.is_multiple_of(2) {
            let anchors: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
            if anchors.is_empty() {
                continue;
            }
            (0..n)
                .map(|u| anchors.iter().map(|&a| d.get(u, a)).fold(f64::INFINITY, f64::min))
                .collect()
        } else {
            let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut lip: f64 = 0.0;
            for u in 0..n {
                for v in u + 1..n {
                    lip = lip.max((raw[u] - raw[v]).abs() / d.get(u, v));
                }
            }
            raw.iter().map(|x| x / lip).collect()
        };
        if f.iter().any(|&x| x != f[0]) {
            return f;
        }
    }
}

fn c4_fhl_inequality() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut tightest = f64::INFINITY;
    for gi in 0..20u64 {
        let n = rng.gen_range(5..=12);
        let g = gnp_connected(n, rng.gen_range(0.2..0.6), seeds::derive(44, gi)).unwrap();
        let s: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..2.0)).collect();
        let d = vertex_weight_metric(&g, &s).unwrap();
        for fi in 0..5 {
            let f = random_lipschitz(&d, &mut rng, fi);
            let r = fhl_sweep(&g, &s, &f).map_err(|e| format!("graph {gi}: {e}"))?;
            let alpha = r.best.sparsity;
            let sp = ratio_f64(alpha);
            check(sp <= r.bound + 1e-9, || format!("graph {gi} f {fi}: sparsity {sp} > bound {}", r.bound))?;
            tightest = tightest.min(r.bound - sp);
            for st in &r.steps {
                let lhs = stringsep::Rational::from(st.cut.s.len() as i64);
                let rhs = alpha * stringsep::Rational::from((st.i * (n - st.i)) as i64);
                check(lhs >= rhs, || format!("graph {gi} f {fi}: |S_{}| = {lhs} < {rhs}", st.i))?;
            }
        }
    }
    within(t.elapsed(), Duration::from_secs(120))?;
    Ok(format!("100 sweeps within bound (smallest slack {tightest:.3e}) ({:.2?})", t.elapsed()))
}

/// Lower confidence bound of a binomial proportion (Wilson score).
fn wilson_lower(successes: usize, trials: usize, z: f64) -> f64 {
    let nf = trials as f64;
    let p = successes as f64 / nf;
    let z2 = z * z;
    (p + z2 / (2.0 * nf) - z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt()) / (1.0 + z2 / nf)
}

fn c5_bourgain() -> Outcome {
    let t = Instant::now();
    let samples = 5000;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_margin = f64::INFINITY;
    for mi in 0..10u64 {
        let n = rng.gen_range(6..=32);
        let g = gnp_connected(n, rng.gen_range(0.08..0.4), seeds::derive(55, mi)).unwrap();
        let w: Vec<f64> = (0..g.m()).map(|_| rng.gen_range(1..=4) as f64).collect();
        let d = shortest_path_metric(&g, &w).unwrap();
        let k = scale_count(n);
        let mut hits = vec![0usize; n * n];
        for s in 0..samples {
            let e = bourgain_sample(&d, seeds::derive(mi, s));
            if let Some((u, v)) = lipschitz_violation(&d, &e.f, 1e-12) {
                return Err(format!("metric {mi} sample {s}: pair ({u},{v}) breaks Lipschitz"));
            }
            for u in 0..n {
                for v in u + 1..n {
                    let delta = d.get(u, v) / (2.0 * k as f64 - 1.0);
                    if (e.f[u] - e.f[v]).abs() >= delta {
                        hits[u * n + v] += 1;
                    }
                }
            }
        }
        let bound = success_bound(k);
        for u in 0..n {
            for v in u + 1..n {
                let lo = wilson_lower(hits[u * n + v], samples as usize, Z99);
                check(lo >= bound, || {
                    format!("metric {mi} pair ({u},{v}): lower bound {lo:.4} < {bound:.4}")
                })?;
                worst_margin = worst_margin.min(lo - bound);
            }
        }
    }
    within(t.elapsed(), Duration::from_secs(120))?;
    Ok(format!(
        "10 metrics x {samples} samples, smallest 99% margin {worst_margin:.4} ({:.2?})",
        t.elapsed()
    ))
}

fn c6_separator() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut max_ratio: f64 = 0.0;
    for i in 0..20u64 {
        let count = rng.gen_range(20..=60);
        let rep = random_segment_instance(count, seeds::derive(66, i)).map_err(|e| e.to_string())?;
        let g = intersection_graph(&rep).map_err(|e| e.to_string())?.graph;
        let r = find_separator(&g, i).map_err(|e| e.to_string())?;
        let ok = check_separator(&g, &r.cut).unwrap();
        check(ok.valid, || format!("instance {i}: {}", ok.reason.clone().unwrap_or_default()))?;
        let m = g.m() as f64;
        let scale = m.sqrt() * (m + 2.0).ln();
        let size = r.size() as f64;
        check(size <= C_CAL * scale, || {
            format!("instance {i}: |S| = {size} exceeds {C_CAL} * sqrt(m) ln(m+2) with m = {m}")
        })?;
        if scale > 0.0 {
            max_ratio = max_ratio.max(size / scale);
        }
    }
    let mut small: Vec<Graph> = duality_corpus();
    small.extend([grid(3, 3), grid(3, 4), grid(2, 6), path(12), cycle(12), complete(7)]);
    let mut ratio_sum = 0.0;
    let mut counted = 0;
    for (i, g) in small.iter().enumerate() {
        let pipeline = find_separator(g, i as u64).map_err(|e| e.to_string())?.size();
        let (exact, _) = min_separator_exact(g).map_err(|e| e.to_string())?;
        check(pipeline >= exact, || format!("small graph {i}: pipeline {pipeline} < exact {exact}"))?;
        if exact > 0 {
            ratio_sum += pipeline as f64 / exact as f64;
            counted += 1;
        }
    }
    within(t.elapsed(), Duration::from_secs(300))?;
    Ok(format!(
        "20 instances valid, max |S|/(sqrt(m) ln(m+2)) = {max_ratio:.3} <= C_cal = {C_CAL}; \
         mean pipeline/exact on {counted} small graphs = {:.3} ({:.2?})",
        ratio_sum / counted as f64,
        t.elapsed()
    ))
}

/// Smallest number of vertices meeting all X–Y paths.
fn brute_vertex_cut(g: &Graph, x: &[usize], y: &[usize]) -> usize {
    let n = g.n();
    (0u32..1 << n)
        .filter(|&mask| {
            let removed: Vec<bool> = (0..n).map(|v| mask >> v & 1 == 1).collect();
            g.components_avoiding(&removed)
                .iter()
                .all(|c| !(c.iter().any(|v| x.contains(v)) && c.iter().any(|v| y.contains(v))))
        })
        .map(u32::count_ones)
        .min()
        .unwrap() as usize
}

/// Smallest separator by plain subset enumeration, independent of the
/// library's component grouping: a set S works if the components of G − S
/// can be 2-colored with both color classes within ⌈2n/3⌉.
fn brute_separator(g: &Graph) -> usize {
    let n = g.n();
    let limit = (2 * n).div_ceil(3);
    (0u32..1 << n)
        .filter(|&mask| {
            let removed: Vec<bool> = (0..n).map(|v| mask >> v & 1 == 1).collect();
            let sizes: Vec<usize> = g.components_avoiding(&removed).iter().map(Vec::len).collect();
            (0u32..1 << sizes.len()).any(|side| {
                let a: usize = (0..sizes.len()).filter(|&i| side >> i & 1 == 1).map(|i| sizes[i]).sum();
                let b: usize = sizes.iter().sum::<usize>() - a;
                a <= limit && b <= limit
            })
        })
        .map(u32::count_ones)
        .min()
        .unwrap() as usize
}

fn c7_small_oracles() -> Outcome {
    let t = Instant::now();
    let (k, _) = min_separator_exact(&grid(3, 3)).unwrap();
    check(k == 2, || format!("3x3 grid separator {k}, expected 2"))?;
    let mut grid_sizes = Vec::new();
    for m in [3usize, 4] {
        let g = grid(m, m);
        let (k, cut) = min_separator_exact(&g).unwrap();
        let brute = brute_separator(&g);
        check(k == brute, || format!("{m}x{m} grid: library {k}, brute force {brute}"))?;
        check(check_separator(&g, &cut).unwrap().valid, || format!("{m}x{m} grid: invalid cut"))?;
        check(4 * k > m, || format!("{m}x{m} grid: separator {k} <= m/4"))?;
        grid_sizes.push(k);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for i in 0..60u64 {
        let n = rng.gen_range(3..=10);
        let g = gnp_connected(n, rng.gen_range(0.2..0.6), seeds::derive(77, i)).unwrap();
        let mut order: Vec<usize> = (0..n).collect();
        for j in (1..n).rev() {
            order.swap(j, rng.gen_range(0..=j));
        }
        let split = rng.gen_range(1..n);
        let y_len = rng.gen_range(1..=n - split);
        let (x, y) = (&order[..split], &order[split..split + y_len]);
        let cert = min_vertex_cut(&g, x, y).map_err(|e| e.to_string())?;
        cert.verify(&g, x, y).map_err(|e| format!("graph {i}: {e}"))?;
        let brute = brute_vertex_cut(&g, x, y);
        check(cert.cut.len() == brute, || format!("graph {i}: max-flow {} vs brute force {brute}", cert.cut.len()))?;
        checked += 1;
    }
    within(t.elapsed(), Duration::from_secs(180))?;
    Ok(format!(
        "3x3 grid -> 2; grid separators {grid_sizes:?} > m/4; {checked} vertex cuts match brute force ({:.2?})",
        t.elapsed()
    ))
}

fn c8_expo() -> Outcome {
    let t = Instant::now();
    let mut counts = Vec::new();
    for k in 1..=6 {
        let fam = expo_family(k).map_err(|e| e.to_string())?;
        let report = validate_weak_realization(&fam.realization).map_err(|e| e.to_string())?;
        let forbidden = report
            .violations
            .iter()
            .filter(|v| matches!(v, Violation::ForbiddenCrossing { .. }))
            .count();
        check(report.violations.is_empty(), || {
            format!("k = {k}: {forbidden} forbidden crossings, {} violations", report.violations.len())
        })?;
        let c = fam.rung_frame_crossings();
        for (i, &x) in c.iter().enumerate() {
            check(x >= 1 << i, || format!("k = {k}: rung {} crosses the frame {x} times", i + 1))?;
        }
        let out = weak_to_strings(&fam.realization).map_err(|e| e.to_string())?;
        let ig = intersection_graph(&out.rep).map_err(|e| format!("k = {k}: {e}"))?;
        check(ig.graph == out.predicted, || format!("k = {k}: string graph differs from prediction"))?;
        counts = c;
    }
    within(t.elapsed(), Duration::from_secs(60))?;
    Ok(format!("k = 1..6 valid; rung/frame crossings at k = 6: {counts:?} ({:.2?})", t.elapsed()))
}

fn c9_even_subword() -> Outcome {
    let t = Instant::now();
    let verify = |w: &[u8], alphabet: u32| -> Result<(), String> {
        match even_subword(w) {
            Some((s, e)) => check(s < e && e <= w.len() && all_counts_even(&w[s..e]), || {
                format!("{w:?}: bad factor {s}..{e}")
            }),
            None => check(w.len() < 1 << alphabet, || format!("{w:?}: no factor found")),
        }
    };
    let mut exhaustive = 0;
    for (alphabet, len) in [(2u32, 4u32), (3, 8)] {
        for code in 0..alphabet.pow(len) {
            let w: Vec<u8> = (0..len).map(|i| (code / alphabet.pow(i) % alphabet) as u8).collect();
            check(even_subword(&w).is_some(), || format!("{w:?}: no factor found"))?;
            verify(&w, alphabet)?;
            exhaustive += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100_000 {
        let alphabet = rng.gen_range(1..=5u32);
        let len = rng.gen_range(0..=40);
        let w: Vec<u8> = (0..len).map(|_| rng.gen_range(0..alphabet) as u8).collect();
        let used = w.iter().collect::<std::collections::BTreeSet<_>>().len() as u32;
        verify(&w, used)?;
    }
    within(t.elapsed(), Duration::from_secs(60))?;
    Ok(format!("{exhaustive} exhaustive words and 100000 random words verified ({:.2?})", t.elapsed()))
}

fn bfs_prefix(g: &Graph, start: usize, count: usize) -> Vec<usize> {
    let mut seen = vec![false; g.n()];
    let mut order = vec![start];
    seen[start] = true;
    let mut i = 0;
    while order.len() < count {
        for &w in g.neighbors(order[i]) {
            if !seen[w] && order.len() < count {
                seen[w] = true;
                order.push(w);
            }
        }
        i += 1;
    }
    order.sort_unstable();
    order
}

fn c10_conflicts() -> Outcome {
    let t = Instant::now();
    let trials = 2000;
    let mut found = 0;
    let mut attempt = 0u64;
    let mut summary = Vec::new();
    while found < 10 {
        attempt += 1;
        check(attempt < 1000, || "could not find 10 connected instances".into())?;
        let n = 5 + (found % 6);
        // Curves reached first by BFS inside the largest component: dropping
        // the other curves keeps a connected string graph on n vertices.
        let rep = random_segment_instance(6 * n, seeds::derive(1010, attempt)).map_err(|e| e.to_string())?;
        let full = intersection_graph(&rep).map_err(|e| e.to_string())?.graph;
        let Some(keep) = full.components().into_iter().find(|c| c.len() >= n).map(|c| bfs_prefix(&full, c[0], n))
        else {
            continue;
        };
        let g = full.induced(&keep);
        found += 1;
        let sol = congestion(&g, Mode::Vertex, Caps::UNLIMITED).map_err(|e| e.to_string())?;
        let phi = decompose_to_paths(&g, &sol).map_err(|e| e.to_string())?;
        let stats = drawing_conflict_experiment(&g, &phi, sol.congestion, trials, attempt).map_err(|e| e.to_string())?;
        let lower = ratio_f64(pcr_lower_bound(n as u64).unwrap());
        let min = *stats.counts.iter().min().unwrap();
        check(min as f64 >= lower, || format!("n = {n}: trial with X = {min} < {lower}"))?;
        let guard = stats.upper_bound + 4.0 * stats.stddev() / (trials as f64).sqrt();
        check(stats.mean <= guard, || format!("n = {n}: mean {} > {guard}", stats.mean))?;
        summary.push(format!("n={n} mean {:.1}/{:.0}", stats.mean, stats.upper_bound));
    }
    within(t.elapsed(), Duration::from_secs(180))?;
    Ok(format!("{} ({:.2?})", summary.join(", "), t.elapsed()))
}

fn c11_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_stringsep");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let p = |name: &str| dir.path().join(name);
    let graph = gnp_connected(8, 0.35, 11).unwrap();
    std::fs::write(p("g.txt"), graph.to_text()).unwrap();
    std::fs::write(p("k5.txt"), complete(5).to_text()).unwrap();
    let strings = random_segment_instance(25, 11).unwrap();
    std::fs::write(p("s.txt"), strings.to_text()).unwrap();
    std::fs::write(p("w.txt"), weak_realization_to_text(&expo_family(3).unwrap().realization)).unwrap();
    let s = |path: &Path| path.to_str().unwrap().to_string();
    let runs: Vec<Vec<String>> = vec![
        vec!["build-ig".into(), "--strings".into(), s(&p("s.txt"))],
        vec!["separator".into(), "--strings".into(), s(&p("s.txt"))],
        vec!["separator".into(), "--graph".into(), s(&p("g.txt"))],
        vec!["econg".into(), "--graph".into(), s(&p("g.txt"))],
        vec!["vcong".into(), "--graph".into(), s(&p("g.txt"))],
        vec!["sparsity".into(), "--graph".into(), s(&p("g.txt")), "--mode".into(), "vertex".into()],
        vec!["embed".into(), "--graph".into(), s(&p("g.txt"))],
        vec!["sweep".into(), "--graph".into(), s(&p("g.txt"))],
        vec!["expo".into(), "--k".into(), "4".into()],
        vec!["weak2str".into(), "--weak".into(), s(&p("w.txt"))],
        vec!["evensub".into(), "--word".into(), "abcabcab".into()],
        vec!["pcr-bound".into(), "--n".into(), "10".into()],
        vec!["conflicts".into(), "--graph".into(), s(&p("g.txt")), "--trials".into(), "300".into()],
        vec!["report".into(), "--graph".into(), s(&p("g.txt")), "--graph".into(), s(&p("k5.txt"))],
    ];
    for args in &runs {
        let mut outs = Vec::new();
        for _ in 0..2 {
            let o = Command::new(bin)
                .args(args)
                .args(["--seed", "17"])
                .output()
                .map_err(|e| e.to_string())?;
            check(o.status.success(), || {
                format!("{}: exit {:?}: {}", args[0], o.status.code(), String::from_utf8_lossy(&o.stderr))
            })?;
            outs.push(o.stdout);
        }
        check(outs[0] == outs[1], || format!("{}: outputs differ between runs", args[0]))?;
        check(!outs[0].is_empty(), || format!("{}: empty output", args[0]))?;
    }
    Ok(format!("{} invocations byte-identical across reruns", runs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("exact congestion values", c1_exact_congestion),
        ("easy duality directions", c2_easy_duality),
        ("dualization equality", c3_dualization),
        ("sweep inequality", c4_fhl_inequality),
        ("random embedding sampler", c5_bourgain),
        ("separator pipeline", c6_separator),
        ("exact small oracles", c7_small_oracles),
        ("exponential crossing family", c8_expo),
        ("even subwords", c9_even_subword),
        ("conflict experiment", c10_conflicts),
        ("CLI determinism", c11_determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match std::panic::catch_unwind(run) {
            Ok(Ok(detail)) => println!("PASS [{:>2}] {name}: {detail}", i + 1),
            Ok(Err(why)) => {
                failed += 1;
                println!("FAIL [{:>2}] {name}: {why}", i + 1);
            }
            Err(_) => {
                failed += 1;
                println!("FAIL [{:>2}] {name}: panicked", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
