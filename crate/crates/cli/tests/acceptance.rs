//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::collections::HashSet;
use std::path::Path;
use std::process::Command;
use std::sync::atomic::{AtomicU64, AtomicU8, Ordering};
use std::time::{Duration, Instant};

use grainstone::algorithms::{
    bc, bfs, cc, default_delta, kcore, pagerank, sssp, tc, DirectionOptParams, PageRankParams,
};
use grainstone::graph::{compute_meta, generate_rmat, RmatParams};
use grainstone::mem_policy::{
    page_plan, plan_allocation, socket_balance, DistributeOver, PageSize, Policy, Topology,
};
use grainstone::oracle::*;
use grainstone::worklist::{BucketedWorklist, SparseWorklist};
use grainstone::{Graph, Runtime, Variant};
use grainstone_cli::schema::validate_run_report;
use grainstone_cli::{main_with, Fault};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GB: u64 = 1 << 30;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// The 50 test graphs: scales 10..=12 and edge factors {4, 16} in rotation,
/// one seed per graph, random weights in [1, 255].
fn test_graphs() -> Vec<(String, Graph)> {
    (0..50u64)
        .map(|i| {
            let scale = 10 + (i % 3) as u32;
            let ef = if (i / 3) % 2 == 0 { 4 } else { 16 };
            let g = generate_rmat(&RmatParams::graph500(scale, ef, i))
                .unwrap()
                .assign_random_weights(i, 255)
                .unwrap()
                .build_transpose();
            (format!("rmat:{scale}:{ef}:{i}"), g)
        })
        .collect()
}

/// Triangle count by hash-set lookups over the simple undirected view; used
/// where the triple-loop oracle's node limit rules it out.
fn triangles_by_hashing(g: &Graph) -> u64 {
    let und = g.to_undirected();
    let sets: Vec<HashSet<u64>> = (0..und.num_nodes()).map(|u| und.out_neighbors(u).iter().copied().collect()).collect();
    let mut count = 0;
    for u in 0..und.num_nodes() {
        for &v in und.out_neighbors(u).iter().filter(|&&v| v > u) {
            count += und.out_neighbors(v).iter().filter(|&&w| w > v && sets[u as usize].contains(&w)).count() as u64;
        }
    }
    count
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn criterion_1_and_3(graphs: &[(String, Graph)]) -> (Outcome, Outcome) {
    let started = Instant::now();
    let rts: Vec<Runtime> = [1, 2, 8].iter().map(|&t| Runtime::new(t).unwrap()).collect();
    let mut checks = 0u64;
    let mut worst_bc = 0.0f64;
    let mut worst_pr = 0.0f64;
    let mut c1 = Ok(());
    let mut c3 = Ok(());
    for (name, g) in graphs {
        let src = compute_meta(g).max_out_degree_node;
        let delta = default_delta(g);
        let bfs_o = oracle_bfs(g, src);
        let sssp_o = oracle_dijkstra(g, src).unwrap();
        let cc_o = oracle_cc_unionfind(g);
        let pr_o = oracle_pagerank_power(g, 0.85, 1000);
        let kcore_o = [4, 16].map(|k| oracle_kcore(g, k));
        let bc_o = oracle_bc_seq(g, src);
        let tc_o = if g.num_nodes() <= ORACLE_TC_MAX_NODES { oracle_tc(g) } else { triangles_by_hashing(g) };
        for rt in &rts {
            let t = rt.threads();
            let mut check = |ok: bool, what: &str| {
                checks += 1;
                if !ok && c1.is_ok() {
                    c1 = Err(format!("{what} differs from its oracle on {name} with {t} workers"));
                }
            };
            let mut bfs_out = Vec::new();
            for v in [Variant::PushBspSparse, Variant::DirectionOpt] {
                let d = bfs(g, src, v, DirectionOptParams::default(), rt).unwrap().0;
                check(d == bfs_o, v.name());
                bfs_out.push(d);
            }
            for v in [Variant::DeltaAsync, Variant::DataDrivenBsp, Variant::BellmanFordTopo] {
                check(sssp(g, src, v, delta, rt).unwrap().0 == sssp_o, v.name());
            }
            let (lp, lp_stats) = cc(g, Variant::LabelPropBsp, rt).unwrap();
            let (sc, sc_stats) = cc(g, Variant::LabelPropSc, rt).unwrap();
            check(lp == cc_o, "label_prop_bsp");
            check(sc == cc_o, "label_prop_sc");
            let pr = pagerank(g, PageRankParams::default(), rt).unwrap().0;
            let pr_err = max_abs_diff(&pr, &pr_o);
            worst_pr = worst_pr.max(pr_err);
            check(pr_err < 1e-4, "pull_topo");
            for (k, expected) in [4, 16].into_iter().zip(&kcore_o) {
                check(&kcore(g, k, Variant::PeelAsync, rt).unwrap().0 == expected, "peel_async");
            }
            let bc_err = max_abs_diff(&bc(g, src, Variant::Brandes, rt).unwrap().0, &bc_o);
            worst_bc = worst_bc.max(bc_err);
            check(bc_err <= 1e-9, "brandes");
            check(tc(g, Variant::DegreeOrdered, rt).unwrap().0 == tc_o, "degree_ordered");

            if c3.is_ok() {
                c3 = if bfs_out[0] != bfs_out[1] {
                    Err(format!("bfs push and direction_opt differ on {name} with {t} workers"))
                } else if lp != sc {
                    Err(format!("cc partitions differ on {name} with {t} workers"))
                } else if sc_stats.rounds > lp_stats.rounds {
                    Err(format!(
                        "label_prop_sc took {} rounds vs {} on {name}",
                        sc_stats.rounds, lp_stats.rounds
                    ))
                } else {
                    Ok(())
                };
            }
        }
    }
    let elapsed = started.elapsed();
    let c1 = c1.and_then(|_| {
        ensure(elapsed < Duration::from_secs(300), || format!("took {elapsed:.1?}, budget is 5 min"))?;
        Ok(format!(
            "{} graphs x {{1,2,8}} workers, {checks} comparisons, max bc error {worst_bc:.1e}, max pr error {worst_pr:.1e}, {elapsed:.1?}",
            graphs.len()
        ))
    });
    let c3 = c3.map(|_| format!("{} graphs x {{1,2,8}} workers", graphs.len()));
    (c1, c3)
}

fn criterion_2() -> Outcome {
    let n = 10_000u64;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let edges: Vec<_> = (0..n - 1).map(|u| (u, u + 1, rng.gen_range(1..=255))).collect();
    let g = Graph::from_weighted_edges(n, &edges).unwrap();
    let rt = Runtime::new(1).unwrap();
    let delta = default_delta(&g);
    let run = |v| sssp(&g, 0, v, delta, &rt).unwrap().1;
    let (asynch, dd, topo) = (run(Variant::DeltaAsync), run(Variant::DataDrivenBsp), run(Variant::BellmanFordTopo));
    ensure(dd.operator_applications * 10 <= topo.operator_applications, || {
        format!("data_driven_bsp {} vs bellman_ford_topo {} applications", dd.operator_applications, topo.operator_applications)
    })?;
    ensure(asynch.edges_relaxed as f64 <= 1.1 * dd.edges_relaxed as f64, || {
        format!("delta_async {} vs data_driven_bsp {} edges relaxed", asynch.edges_relaxed, dd.edges_relaxed)
    })?;
    Ok(format!(
        "applications {} vs {}, edges relaxed {} vs {}",
        dd.operator_applications, topo.operator_applications, asynch.edges_relaxed, dd.edges_relaxed
    ))
}

fn criterion_4() -> Outcome {
    let small = page_plan(320 * GB, PageSize::Small).num_pages;
    let huge = page_plan(320 * GB, PageSize::Huge).num_pages;
    ensure(small == 83_886_080 && huge == 163_840 && small / huge == 512, || {
        format!("{small} small pages, {huge} huge pages")
    })?;
    Ok(format!("{small} small, {huge} huge, ratio {}", small / huge))
}

fn criterion_5() -> Outcome {
    let block = PageSize::Small.bytes();
    let mut cases = 0;
    for units in 1..=8usize {
        let topo = Topology::new(units, 1 << 40, 4).unwrap();
        for nblocks in 1..=64usize {
            let total = nblocks as u64 * block;
            let inter = plan_allocation(total, Policy::Interleaved, &topo, DistributeOver::Sockets, PageSize::Small).unwrap();
            ensure(inter.assignments.iter().enumerate().all(|(i, &s)| s == i % units), || {
                format!("interleaved {nblocks} blocks over {units} units: {:?}", inter.assignments)
            })?;
            let blocked = plan_allocation(total, Policy::Blocked, &topo, DistributeOver::Sockets, PageSize::Small).unwrap();
            let a = &blocked.assignments;
            let mut runs = vec![0usize; units];
            for &s in a {
                runs[s] += 1;
            }
            let (lo, hi) = (nblocks / units, nblocks.div_ceil(units));
            let ok = a.windows(2).all(|w| w[0] <= w[1])
                && runs.iter().all(|&r| r == lo || r == hi)
                && runs.windows(2).all(|w| w[0] >= w[1])
                && runs.iter().sum::<usize>() == nblocks;
            ensure(ok, || format!("blocked {nblocks} blocks over {units} units: {a:?}"))?;
            cases += 1;
        }
    }
    let two = Topology::two_socket();
    for t in 1..=two.threads_per_socket {
        for policy in [Policy::Interleaved, Policy::Blocked] {
            let map = plan_allocation(64 * block, policy, &two, DistributeOver::Threads(t), PageSize::Small).unwrap();
            let bytes = socket_balance(&map).per_socket_bytes;
            ensure(bytes[0] == 64 * block && bytes[1..].iter().all(|&b| b == 0), || {
                format!("{policy} over {t} threads placed {bytes:?}")
            })?;
        }
    }
    Ok(format!("{cases} (nblocks, units) pairs; threads 1..={} all on socket 0", two.threads_per_socket))
}

fn criterion_6() -> Outcome {
    let map = plan_allocation(320 * GB, Policy::Local(0), &Topology::two_socket(), DistributeOver::Sockets, PageSize::Huge)
        .map_err(|e| e.to_string())?;
    let bytes = socket_balance(&map).per_socket_bytes;
    ensure(bytes == [192 * GB, 128 * GB], || format!("placed {bytes:?}"))?;
    Ok("192GB on socket 0, 128GB on socket 1".into())
}

/// Binary-tree expansion from id 0: every id below `total` is pushed exactly
/// once, most of them by workers while the drain is running.
fn children(id: u64, total: u64) -> impl Iterator<Item = u64> {
    [2 * id + 1, 2 * id + 2].into_iter().filter(move |&c| c < total)
}

fn criterion_7() -> Outcome {
    const PUSHES: u64 = 1_000_000;
    const REPS: usize = 100;
    let seen: Vec<AtomicU8> = (0..PUSHES).map(|_| AtomicU8::new(0)).collect();
    let check_seen = |kind: &str, rep: usize, drained: u64| -> Result<(), String> {
        ensure(drained == PUSHES, || format!("{kind} rep {rep}: drained {drained} of {PUSHES}"))?;
        if let Some(i) = seen.iter().position(|c| c.swap(0, Ordering::Relaxed) != 1) {
            return Err(format!("{kind} rep {rep}: id {i} not drained exactly once"));
        }
        Ok(())
    };
    for rep in 0..REPS {
        let wl = SparseWorklist::new();
        wl.push(0);
        let drained = wl.drain(8, |id, pusher| {
            seen[id as usize].fetch_add(1, Ordering::Relaxed);
            for c in children(id, PUSHES) {
                pusher.push(c);
            }
        });
        ensure(wl.is_empty(), || format!("sparse rep {rep}: items left after drain"))?;
        check_seen("sparse", rep, drained)?;

        let wl = BucketedWorklist::new();
        wl.push(0, 0);
        let ops = AtomicU64::new(0);
        let drained = wl.drain(8, |id, prio, pusher| {
            ops.fetch_add(1, Ordering::Relaxed);
            seen[id as usize].fetch_add(1, Ordering::Relaxed);
            for c in children(id, PUSHES) {
                // mix of same, higher and lower priorities
                pusher.push(c, (prio + (c % 3) as usize).saturating_sub(1) % 64);
            }
        });
        ensure(wl.is_empty() && ops.into_inner() == drained, || format!("bucketed rep {rep}: drain returned early"))?;
        check_seen("bucketed", rep, drained)?;
    }
    Ok(format!("{REPS} reps x {PUSHES} pushes on sparse and bucketed worklists, 8 workers"))
}

fn criterion_8() -> Outcome {
    let rt = Runtime::new(4).unwrap();
    let n = 1000u64;
    let edges: Vec<_> = (0..n).map(|u| (u, (u + 1) % n)).collect();
    let cycle = Graph::from_edges(n, &edges).unwrap().build_transpose();
    let ranks = pagerank(&cycle, PageRankParams::default(), &rt).unwrap().0;
    let spread = ranks.iter().copied().fold(f64::MIN, f64::max) - ranks.iter().copied().fold(f64::MAX, f64::min);
    ensure(spread <= 1e-12, || format!("cycle ranks spread {spread:e}"))?;

    let mut worst = 0.0f64;
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rng.gen_range(50..600);
        let edges: Vec<_> = (0..m).map(|_| (rng.gen_range(0..100), rng.gen_range(0..100))).collect();
        let g = Graph::from_edges(100, &edges).unwrap().build_transpose();
        let got = pagerank(&g, PageRankParams::default(), &rt).unwrap().0;
        let err = max_abs_diff(&got, &oracle_pagerank_power(&g, 0.85, 1000));
        worst = worst.max(err);
        ensure(err < 1e-4, || format!("seed {seed}: L-inf {err:e}"))?;
    }
    Ok(format!("cycle spread {spread:.1e}, worst L-inf on 20 random graphs {worst:.1e}"))
}

fn criterion_9(dir: &Path) -> Outcome {
    let bin = env!("CARGO_BIN_EXE_grainstone");
    let mut runs = 0;
    for algo in grainstone::Algo::ALL {
        for variant in algo.variants() {
            let out = dir.join(format!("{algo}-{variant}.json"));
            let status = Command::new(bin)
                .args(["run", "--algo", algo.name(), "--variant", variant.name(), "--graph", "rmat:10:16:9"])
                .args(["--threads", "2", "--verify", "--report", "json", "--out"])
                .arg(&out)
                .status()
                .map_err(|e| e.to_string())?;
            ensure(status.code() == Some(0), || format!("{algo}/{variant} exited with {status}"))?;
            let text = std::fs::read_to_string(&out).map_err(|e| e.to_string())?;
            let json: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
            validate_run_report(&json).map_err(|errs| format!("{algo}/{variant}: {}", errs.join("; ")))?;
            ensure(json["verification"]["status"] == "passed", || format!("{algo}/{variant} not verified"))?;
            runs += 1;
        }
    }

    let faulty = [
        "grainstone", "run", "--algo", "sssp", "--variant", "delta_async", "--graph", "rmat:10:16:9", "--verify",
        "--trials", "1", "--threads", "2", "--out",
    ];
    let out = dir.join("fault.json");
    let code = main_with(faulty.iter().map(|s| s.to_string()).chain([out.display().to_string()]), Some(Fault { node: 5 }));
    ensure(code == 1, || format!("injected fault exited with {code}"))?;
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    ensure(json["verification"]["first_mismatch"] == 5, || format!("fault report: {}", json["verification"]))?;

    #[cfg(feature = "fault-injection")]
    {
        let status = Command::new(bin)
            .args(&faulty[1..])
            .arg(dir.join("fault-bin.json"))
            .env("GRAINSTONE_INJECT_FAULT", "5")
            .status()
            .map_err(|e| e.to_string())?;
        ensure(status.code() == Some(1), || format!("fault-injection binary exited with {status}"))?;
    }

    Ok(format!("{runs} algo/variant runs exit 0 with valid reports; injected fault exits 1 at node 5"))
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let graphs = test_graphs();
    let (c1, c3) = criterion_1_and_3(&graphs);
    let results = [
        ("oracle equivalence", c1),
        ("work-efficiency ordering", criterion_2()),
        ("variant confluence", c3),
        ("page arithmetic", criterion_4()),
        ("allocation-map exactness", criterion_5()),
        ("local-policy spill", criterion_6()),
        ("worklist safety", criterion_7()),
        ("pagerank", criterion_8()),
        ("cli contract", criterion_9(dir.path())),
    ];
    let mut failed = 0;
    for (i, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({reason})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
