//! Acceptance suite. Runs every criterion, prints one line each and exits
//! non-zero if any fails.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

use dhgpart::gen::{generate, GenParams};
use dhgpart::{dhg, partfile};
use dhgpart_core::baselines::{one_pass, overlap_greedy};
use dhgpart_core::coarsen::{
    coarsen_level, materialize_neighbors, select_candidates, valid_pair, PairingForest,
};
use dhgpart_core::driver::{partition_with, NoClock, Observer, PassRecord};
use dhgpart_core::oracle::{brute_force_optimal, simulate_sequence};
use dhgpart_core::{
    check_validity, connectivity, Config, Constraints, Hypergraph, NodeId, Partitioning,
};

struct Instance {
    graph: Hypergraph,
    c: Constraints,
}

/// Random instance with `nodes` nodes, about 1.5 edges per node, Ω drawn
/// from `sizes` and Δ between the largest inbound degree and 4Ω above it.
fn instance(seed: u64, nodes: usize, sizes: std::ops::RangeInclusive<u64>) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let edges = nodes * rng.gen_range(10..=20) / 10;
    let max_pins = rng.gen_range(2..=6);
    let graph = generate(&GenParams { nodes, edges, max_pins, seed });
    let max_size = rng.gen_range(sizes);
    let slack = rng.gen_range(0..=4 * max_size);
    let c = Constraints::new(max_size, graph.max_inbound_degree() as u64 + slack);
    Instance { graph, c }
}

fn suite(base: u64, count: usize, nodes: std::ops::RangeInclusive<usize>, sizes: std::ops::RangeInclusive<u64>) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    (0..count)
        .map(|i| instance(base * 1000 + i as u64, rng.gen_range(nodes.clone()), sizes.clone()))
        .collect()
}

fn run(g: &Hypergraph, cfg: &Config, obs: &mut dyn Observer) -> (Partitioning, dhgpart_core::RunStats) {
    partition_with(g, cfg, &NoClock, obs).expect("feasible instance")
}

fn traces_monotone(stats: &dhgpart_core::RunStats) -> bool {
    stats.connectivity_trace.iter().all(|t| t.windows(2).all(|w| w[1] <= w[0]))
}

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, id: u32, name: &str, ok: bool, detail: String) {
        if !ok {
            self.failed += 1;
        }
        println!("criterion {id:>2} {:<4} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

/// Replays each pass against the from-scratch simulation.
#[derive(Default)]
struct PassChecker {
    c: Option<Constraints>,
    passes: usize,
    moves: usize,
    event_mismatches: usize,
    gain_mismatches: usize,
    total_mismatches: usize,
    max_gain_err: f64,
}

impl Observer for PassChecker {
    fn on_pass(&mut self, pass: &PassRecord<'_>) {
        let c = self.c.as_ref().unwrap();
        self.passes += 1;
        self.moves += pass.moves.len();
        let sim = simulate_sequence(pass.graph, pass.before, pass.moves, c);
        let active = &pass.selection.active_violations;
        if active.len() != pass.moves.len() {
            self.event_mismatches += 1;
        }
        for (j, m) in pass.moves.iter().enumerate() {
            if active.get(j) != Some(&sim[j + 1].violations) {
                self.event_mismatches += 1;
            }
            let err = (sim[j].connectivity - sim[j + 1].connectivity - m.gain_seq).abs();
            self.max_gain_err = self.max_gain_err.max(err);
            if err > 1e-9 {
                self.gain_mismatches += 1;
            }
        }
        let k = pass.selection.apply_count;
        let applied: f64 = pass.moves[..k].iter().map(|m| m.gain_seq).sum();
        let drop = connectivity(pass.graph, pass.before) - connectivity(pass.graph, pass.after);
        if (applied - drop).abs() > 1e-9 || (pass.selection.total_gain - drop).abs() > 1e-9 {
            self.total_mismatches += 1;
        }
    }
}

/// Checks the matching produced at every coarsening level.
struct MatchChecker {
    c: Constraints,
    levels: usize,
    pairs: usize,
    failures: Vec<String>,
}

impl MatchChecker {
    fn check(&mut self, g: &Hypergraph, f: &PairingForest) {
        let n = f.num_nodes();
        self.levels += 1;
        for a in 0..n {
            let b = f.matched[a] as usize;
            if f.matched[b] as usize != a {
                self.failures.push(format!("matched is not an involution at {a}"));
            }
            if b > a {
                self.pairs += 1;
                if !valid_pair(g, &self.c, a as NodeId, b as NodeId) {
                    self.failures.push(format!("pair ({a}, {b}) breaks a limit"));
                }
            }
            if let Some(p) = f.pair[a] {
                if f.score[p as usize] < f.score[a] {
                    self.failures.push(format!("score not monotone along {a} -> {p}"));
                }
            }
        }
        // Every cycle of the functional pairing graph must have length 2.
        let mut state = vec![0u8; n];
        for start in 0..n {
            let mut path = Vec::new();
            let mut v = start;
            while state[v] == 0 {
                state[v] = 1;
                path.push(v);
                match f.pair[v] {
                    Some(p) => v = p as usize,
                    None => break,
                }
            }
            if state[v] == 1 {
                if let Some(pos) = path.iter().position(|&x| x == v) {
                    let len = path.len() - pos;
                    if f.pair[v].is_some() && len != 2 {
                        self.failures.push(format!("pairing cycle of length {len} at {v}"));
                    }
                }
            }
            for x in path {
                state[x] = 2;
            }
        }
    }
}

impl Observer for MatchChecker {
    fn on_coarsen(&mut self, _level: usize, g: &Hypergraph, f: &PairingForest) {
        self.check(g, f);
    }
}

fn write_instance(dir: &Path, name: &str, g: &Hypergraph) -> String {
    let p = dir.join(name);
    fs::write(&p, dhg::write(g)).unwrap();
    p.to_str().unwrap().to_string()
}

fn cli(args: &[String]) -> i32 {
    dhgpart::cli::run(std::iter::once("dhgpart".to_string()).chain(args.iter().cloned()))
}

fn partition_args(input: &str, c: &Constraints, out: &str, metrics: &str) -> Vec<String> {
    [
        "partition", "--input", input,
        "--max-size", &c.max_size.to_string(),
        "--max-inbound", &c.max_inbound.to_string(),
        "--out", out, "--metrics", metrics,
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

fn criterion_1_and_4(report: &mut Report, monotone_failures: &mut usize, checked: &mut usize) {
    let dir = TempDir::new().unwrap();
    let started = Instant::now();
    let mut invalid = 0;
    let mut errors = 0;
    let suite = suite(1, 200, 50..=2000, 4..=64);
    let mut nodes = 0;
    for (i, inst) in suite.iter().enumerate() {
        nodes += inst.graph.num_nodes();
        let input = write_instance(dir.path(), "g.dhg", &inst.graph);
        let out = dir.path().join("p.txt").to_str().unwrap().to_string();
        let metrics = dir.path().join("m.json").to_str().unwrap().to_string();
        if cli(&partition_args(&input, &inst.c, &out, &metrics)) != 0 {
            errors += 1;
            continue;
        }
        let assign = partfile::parse(&fs::read_to_string(&out).unwrap()).unwrap();
        match Partitioning::from_assignment(assign) {
            Ok(rho) if check_validity(&inst.graph, &rho, &inst.c).is_empty() => {}
            _ => {
                invalid += 1;
                eprintln!("instance {i} invalid");
            }
        }
        let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(&metrics).unwrap()).unwrap();
        *checked += 1;
        let ok = m["connectivity_trace"].as_array().unwrap().iter().all(|t| {
            let t: Vec<f64> = t.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
            t.windows(2).all(|w| w[1] <= w[0])
        });
        if !ok {
            *monotone_failures += 1;
        }
    }
    let elapsed = started.elapsed();
    report.line(
        1,
        "validity",
        invalid == 0 && errors == 0 && elapsed < Duration::from_secs(120),
        format!(
            "{} instances ({nodes} nodes total), {invalid} invalid, {errors} errors, {:.1}s",
            suite.len(),
            elapsed.as_secs_f64()
        ),
    );
}

fn criteria_2_3(report: &mut Report, monotone_failures: &mut usize, checked: &mut usize) {
    let mut chk = PassChecker::default();
    for inst in suite(2, 100, 30..=250, 2..=24) {
        chk.c = Some(inst.c);
        let (_, stats) = run(&inst.graph, &Config::new(inst.c), &mut chk);
        *checked += 1;
        if !traces_monotone(&stats) {
            *monotone_failures += 1;
        }
    }
    report.line(
        2,
        "event pipeline vs simulation",
        chk.event_mismatches == 0 && chk.passes > 0,
        format!("{} passes, {} moves, {} mismatches", chk.passes, chk.moves, chk.event_mismatches),
    );
    report.line(
        3,
        "gain exactness",
        chk.gain_mismatches == 0 && chk.total_mismatches == 0 && chk.moves > 0,
        format!(
            "max |gain_seq - delta| = {:.1e}, {} move mismatches, {} prefix-sum mismatches",
            chk.max_gain_err, chk.gain_mismatches, chk.total_mismatches
        ),
    );
}

fn criterion_5(report: &mut Report) {
    let mut levels = 0;
    let mut pairs = 0;
    let mut failures = Vec::new();
    for inst in suite(5, 100, 20..=1500, 2..=64) {
        let mut chk = MatchChecker { c: inst.c, levels: 0, pairs: 0, failures: Vec::new() };
        run(&inst.graph, &Config::new(inst.c), &mut chk);
        levels += chk.levels;
        pairs += chk.pairs;
        failures.extend(chk.failures);
    }
    report.line(
        5,
        "matching structure",
        failures.is_empty() && pairs > 0,
        format!("{levels} levels, {pairs} matched pairs, {} failures {:?}", failures.len(), failures.iter().take(3).collect::<Vec<_>>()),
    );
}

fn same_forest(a: &PairingForest, b: &PairingForest) -> bool {
    a.pair == b.pair
        && a.score.iter().map(|x| x.to_bits()).eq(b.score.iter().map(|x| x.to_bits()))
}

fn criterion_6(report: &mut Report) {
    let mut compared = 0;
    let mut diffs = 0;
    for inst in suite(6, 20, 50..=2000, 4..=64) {
        // Finest level and the one below it.
        let mut g = inst.graph;
        for _ in 0..2 {
            let nbrs = materialize_neighbors(&g);
            let base = select_candidates(&g, &nbrs, &inst.c, 1);
            for b in [7, 32] {
                compared += 1;
                if !same_forest(&base, &select_candidates(&g, &nbrs, &inst.c, b)) {
                    diffs += 1;
                }
            }
            g = coarsen_level(&g, &nbrs, &inst.c, 32).unwrap().contraction.graph;
        }
    }
    report.line(6, "batch invariance", diffs == 0, format!("{compared} comparisons against batch 1, {diffs} differ"));
}

fn criterion_7(report: &mut Report) {
    let (mut ours, mut onep, mut over) = (0.0, 0.0, 0.0);
    let suite = suite(7, 50, 200..=2000, 4..=64);
    for inst in &suite {
        let (rho, _) = run(&inst.graph, &Config::new(inst.c), &mut ());
        ours += connectivity(&inst.graph, &rho);
        onep += connectivity(&inst.graph, &one_pass(&inst.graph, &inst.c).unwrap());
        over += connectivity(&inst.graph, &overlap_greedy(&inst.graph, &inst.c).unwrap());
    }
    let n = suite.len() as f64;
    let (ours, onep, over) = (ours / n, onep / n, over / n);
    let r1 = ours / onep;
    let r2 = ours / over;
    report.line(
        7,
        "quality proxy",
        r1 <= 0.9 && r2 <= 1.0,
        format!(
            "mean connectivity {ours:.1}; vs one-pass {onep:.1} ratio {r1:.3} (<= 0.9); vs overlap {over:.1} ratio {r2:.3} (<= 1.0)"
        ),
    );
}

fn criterion_8(report: &mut Report) {
    let mut below_bound = 0;
    let mut not_worse = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let total = 30;
    for i in 0..total {
        let nodes = rng.gen_range(3..=8);
        let inst = instance(8000 + i, nodes, 2..=4);
        let (rho, _) = run(&inst.graph, &Config::new(inst.c), &mut ());
        let ours = connectivity(&inst.graph, &rho);
        let (_, best) = brute_force_optimal(&inst.graph, &inst.c).unwrap();
        let base = connectivity(&inst.graph, &one_pass(&inst.graph, &inst.c).unwrap());
        if ours < best {
            below_bound += 1;
        }
        if ours <= base {
            not_worse += 1;
        }
    }
    let share = not_worse as f64 / total as f64;
    report.line(
        8,
        "optimality sanity",
        below_bound == 0 && share >= 0.8,
        format!("{total} instances, {below_bound} below the optimum, <= one-pass in {:.0}%", share * 100.0),
    );
}

fn criterion_9(report: &mut Report) {
    let dir = TempDir::new().unwrap();
    let bin = env!("CARGO_BIN_EXE_dhgpart");
    let mut differing = 0;
    let mut failures = 0;
    let count = 10;
    for inst in suite(9, count, 50..=2000, 4..=64) {
        let input = write_instance(dir.path(), "g.dhg", &inst.graph);
        let mut outputs = BTreeSet::new();
        for r in 0..3 {
            let out = dir.path().join(format!("p{r}.txt")).to_str().unwrap().to_string();
            let metrics = dir.path().join(format!("m{r}.json")).to_str().unwrap().to_string();
            let status = Command::new(bin)
                .args(partition_args(&input, &inst.c, &out, &metrics))
                .status()
                .unwrap();
            if !status.success() {
                failures += 1;
                continue;
            }
            outputs.insert((fs::read(&out).unwrap(), fs::read(&metrics).unwrap()));
        }
        if outputs.len() != 1 {
            differing += 1;
        }
    }
    report.line(
        9,
        "determinism",
        differing == 0 && failures == 0,
        format!("{count} instances x 3 runs, {differing} with differing output, {failures} failed runs"),
    );
}

fn criterion_10(report: &mut Report) {
    let sizes = [10_000usize, 20_000, 40_000];
    // Four pins per edge on average, one node per two pins.
    let series: Vec<(Hypergraph, Constraints)> = sizes
        .iter()
        .enumerate()
        .map(|(i, &pins)| {
            let g = generate(&GenParams { nodes: pins / 2, edges: pins / 4, max_pins: 6, seed: 100 + i as u64 });
            let c = Constraints::new(16, g.max_inbound_degree() as u64 + 32);
            (g, c)
        })
        .collect();
    let time = |(g, c): &(Hypergraph, Constraints)| {
        let t = Instant::now();
        run(g, &Config::new(*c), &mut ());
        t.elapsed().as_secs_f64()
    };
    series.iter().for_each(|s| {
        time(s);
    });
    // Round-robin over the sizes so background load hits each one alike.
    let mut times = vec![Vec::new(); series.len()];
    for _ in 0..5 {
        for (s, t) in series.iter().zip(&mut times) {
            t.push(time(s));
        }
    }
    let medians: Vec<(usize, f64)> = series
        .iter()
        .zip(&mut times)
        .map(|((g, _), t)| {
            t.sort_by(f64::total_cmp);
            (g.num_pins(), t[2])
        })
        .collect();
    let ratios: Vec<f64> = medians.windows(2).map(|w| w[1].1 / w[0].1).collect();
    report.line(
        10,
        "scaling proxy",
        ratios.iter().all(|&r| r <= 2.5),
        format!(
            "median ms {:?} at pins {:?}, ratios per doubling {:?} (<= 2.5)",
            medians.iter().map(|m| (m.1 * 1e4).round() / 10.0).collect::<Vec<_>>(),
            medians.iter().map(|m| m.0).collect::<Vec<_>>(),
            ratios.iter().map(|r| (r * 1000.0).round() / 1000.0).collect::<Vec<_>>()
        ),
    );
}

fn main() {
    let mut report = Report { failed: 0 };
    let mut monotone_failures = 0;
    let mut checked = 0;
    criterion_1_and_4(&mut report, &mut monotone_failures, &mut checked);
    criteria_2_3(&mut report, &mut monotone_failures, &mut checked);
    report.line(
        4,
        "monotone connectivity trace",
        monotone_failures == 0,
        format!("{checked} runs, {monotone_failures} with an increasing step"),
    );
    criterion_5(&mut report);
    criterion_6(&mut report);
    criterion_7(&mut report);
    criterion_8(&mut report);
    criterion_9(&mut report);
    criterion_10(&mut report);
    if report.failed > 0 {
        println!("acceptance: {} criteria failed", report.failed);
        std::process::exit(1);
    }
    println!("acceptance: all criteria passed");
}
