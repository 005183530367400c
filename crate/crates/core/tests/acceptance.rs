//! Acceptance suite. Prints one `PASS`/`FAIL` line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Run a subset by passing criterion numbers:
//! `cargo test -p embgo-core --test acceptance -- 2 7`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use embgo_core::algorithms::build_optimizer;
use embgo_core::baselines::{De, DeParams, RandomSearch};
use embgo_core::discrete::{
    brute_force_optimum, decode, lookup_fitness, parse_table, synthetic_table, transfer, ArchCode,
    ArnasProblem, LookupTable, EDGES, SPACE_SIZE, SYMBOLS,
};
use embgo_core::embgo::{diff_mutation, levy_move, Embgo, EmbgoParams};
use embgo_core::levy::{gamma_fn, levy_sigma, LevyParams};
use embgo_core::mbgo::{
    battle_dir, battle_vs_stronger, battle_vs_weaker, in_safe_zone, move_inside, move_outside,
    safe_zone_with_delta, Mbgo, SafeZone,
};
use embgo_core::metrics::population_diversity;
use embgo_core::population::{best_worst, clamp, greedy_replace, init_population};
use embgo_core::problems::{
    build_problem, evaluate_benchmark, penalized_fitness, Benchmark, ConstrainedProblem, Function,
    ThreeBarTruss, Transform,
};
use embgo_core::rng::ScriptedSource;
use embgo_core::run::CountingObserver;
use embgo_core::stats::{
    average_rank, holm_adjust, mann_whitney_u, mann_whitney_u_using, mann_whitney_u_with, median,
    significance_marks, Alternative, ComparisonMatrix, Mark, PMethod,
};
use embgo_core::{
    Bounds, Individual, Optimizer, OptimizerConfig, Population, Problem, RandomSource, RngStream,
    RunResult,
};

/// Collects sub-check failures for one criterion.
#[derive(Default)]
struct Checks {
    total: usize,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        self.total += 1;
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn close(&mut self, got: f64, want: f64, tol: f64, what: &str) {
        self.check(
            (got - want).abs() <= tol,
            format!("{what}: got {got:e}, want {want:e} ± {tol:e}"),
        );
    }

    fn vec_close(&mut self, got: &[f64], want: &[f64], tol: f64, what: &str) {
        let ok = got.len() == want.len() && got.iter().zip(want).all(|(g, w)| (g - w).abs() <= tol);
        self.check(ok, format!("{what}: got {got:?}, want {want:?}"));
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Duration,
    body: fn(&mut Checks),
}

fn main() -> ExitCode {
    let selected: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let criteria = [
        Criterion {
            id: 1,
            title: "operator unit suite",
            limit: secs(1),
            body: c01_operator_units,
        },
        Criterion {
            id: 2,
            title: "Lévy suite",
            limit: secs(10),
            body: c02_levy,
        },
        Criterion {
            id: 3,
            title: "monotone traces and box invariance",
            limit: secs(30),
            body: c03_invariants,
        },
        Criterion {
            id: 4,
            title: "byte-identical reruns",
            limit: secs(10),
            body: c04_determinism,
        },
        Criterion {
            id: 5,
            title: "EMBGO dominates random search",
            limit: secs(120),
            body: c05_dominance,
        },
        Criterion {
            id: 6,
            title: "EMBGO not worse than MBGO",
            limit: secs(600),
            body: c06_embgo_vs_mbgo,
        },
        Criterion {
            id: 7,
            title: "per-iteration FE accounting",
            limit: secs(5),
            body: c07_fe_accounting,
        },
        Criterion {
            id: 8,
            title: "three-bar truss anchor",
            limit: secs(120),
            body: c08_truss,
        },
        Criterion {
            id: 9,
            title: "ARNAS oracle and search",
            limit: secs(180),
            body: c09_arnas,
        },
        Criterion {
            id: 10,
            title: "statistics oracles",
            limit: secs(30),
            body: c10_statistics,
        },
        Criterion {
            id: 11,
            title: "complexity scaling",
            limit: secs(120),
            body: c11_scaling,
        },
    ];
    let mut failed = 0;
    let mut ran = 0;
    for c in criteria
        .iter()
        .filter(|c| selected.is_empty() || selected.contains(&c.id))
    {
        let mut checks = Checks::default();
        let start = Instant::now();
        (c.body)(&mut checks);
        let elapsed = start.elapsed();
        if elapsed > c.limit {
            checks.failures.push(format!(
                "runtime {:.2} s exceeds {} s",
                elapsed.as_secs_f64(),
                c.limit.as_secs()
            ));
        }
        let pass = checks.failures.is_empty();
        ran += 1;
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {:>2}: {} ({} checks, {:.2} s)",
            if pass { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            checks.total,
            elapsed.as_secs_f64()
        );
        for n in &checks.notes {
            println!("      {n}");
        }
        for f in &checks.failures {
            println!("      failed: {f}");
        }
    }
    println!("{} of {ran} criteria passed", ran - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn ind(p: &[f64], f: f64) -> Individual {
    Individual::new(p.to_vec(), f)
}

fn uniforms(r: &[f64]) -> ScriptedSource {
    ScriptedSource::uniforms(r)
}

fn finals(
    alg: &str,
    problem: &dyn Problem,
    n: usize,
    budget: usize,
    seeds: std::ops::Range<u64>,
) -> Vec<f64> {
    let a = build_optimizer(alg, &[]).expect("registered algorithm");
    seeds
        .map(|s| {
            a.optimizer
                .run_seeded(problem, &OptimizerConfig::new(n, budget, s))
                .expect("valid run")
                .best_fitness()
        })
        .collect()
}

// ---------------------------------------------------------------------------

fn c01_operator_units(c: &mut Checks) {
    // population
    c.check(
        Bounds::new(vec![0.0, 0.0], vec![0.0, 0.0]).is_err(),
        "degenerate bounds rejected",
    );
    let cube = Bounds::cube(3, -100.0, 100.0).unwrap();
    let pop = init_population(5, &cube, &mut RngStream::new(11)).unwrap();
    c.check(
        pop.members().iter().all(|m| cube.contains(&m.position)) && pop.len() * pop.dim() == 15,
        "initial population inside the box",
    );
    let again = init_population(5, &cube, &mut RngStream::new(11)).unwrap();
    let positions = |p: &Population| {
        p.members()
            .iter()
            .map(|m| m.position.clone())
            .collect::<Vec<_>>()
    };
    c.check(
        positions(&pop) == positions(&again),
        "same seed gives identical populations",
    );
    let sq = Bounds::cube(2, -100.0, 100.0).unwrap();
    c.check(
        clamp(&[150.0, -150.0], &sq).unwrap() == vec![100.0, -100.0],
        "clamp projects",
    );
    c.check(
        clamp(&[0.0, 50.0], &sq).unwrap() == vec![0.0, 50.0],
        "clamp identity inside",
    );
    c.check(
        clamp(&[-100.0, 100.0], &sq).unwrap() == vec![-100.0, 100.0],
        "clamp boundary fixed",
    );
    let parent = ind(&[0.0], 5.0);
    c.check(
        greedy_replace(parent.clone(), ind(&[1.0], 3.0)).fitness == 3.0,
        "greedy accepts better",
    );
    c.check(
        greedy_replace(parent.clone(), ind(&[1.0], 5.0)).position == vec![0.0],
        "greedy keeps on tie",
    );
    c.check(
        greedy_replace(parent, ind(&[1.0], 7.0)).position == vec![0.0],
        "greedy rejects worse",
    );
    let with =
        |f: &[f64]| Population::from_members(f.iter().map(|&v| ind(&[v], v)).collect()).unwrap();
    c.check(
        best_worst(&with(&[3.0, 1.0, 2.0])).unwrap() == (1, 0),
        "best/worst [3,1,2]",
    );
    c.check(
        best_worst(&with(&[1.0, 1.0, 1.0])).unwrap() == (0, 0),
        "best/worst ties",
    );
    c.check(
        best_worst(&with(&[2.0, 9.0])).unwrap() == (0, 1),
        "best/worst N=2",
    );

    // Lévy
    c.check(
        gamma_fn(1.0).unwrap() == 1.0 || (gamma_fn(1.0).unwrap() - 1.0).abs() < 1e-14,
        "Γ(1)",
    );
    c.close(gamma_fn(5.0).unwrap(), 24.0, 1e-12, "Γ(5)");
    c.close(levy_sigma(1.0).unwrap(), 1.0, 1e-15, "σ(1)");
    c.check(levy_sigma(2.0).is_err(), "σ(2) rejected");
    let lp = LevyParams::default();
    let mut zero_u = ScriptedSource::new(vec![0.5], vec![0.0, 0.7], vec![0]);
    c.check(
        lp.sample(5, &mut zero_u) == vec![0.0; 5],
        "u = 0 gives zero step",
    );
    c.check(
        lp.sample(8, &mut RngStream::new(3)) == lp.sample(8, &mut RngStream::new(3)),
        "Lévy sampling deterministic",
    );

    // safe zone and movement
    let same = safe_zone_with_delta(&ind(&[1.0, 1.0], 0.0), &ind(&[1.0, 1.0], 1.0), 1.0);
    c.check(same.radius == 1e-12, "zero-distance radius is ε");
    let z = safe_zone_with_delta(&ind(&[0.0, 0.0], 0.0), &ind(&[3.0, 4.0], 1.0), 1.0);
    c.check(z.radius == 5.0 + 1e-12, "3-4-5 radius");
    let zone = SafeZone {
        center: vec![0.0, 0.0],
        radius: 5.0,
    };
    c.check(in_safe_zone(&ind(&[0.0, 0.0], 0.0), &zone), "center inside");
    c.check(
        in_safe_zone(&ind(&[3.0, 4.0], 0.0), &zone),
        "boundary inside",
    );
    c.check(
        !in_safe_zone(&ind(&[6.0, 0.0], 0.0), &zone),
        "R + 1 outside",
    );
    let xi = ind(&[1.0, 1.0], 0.0);
    let xb = ind(&[2.0, -2.0], 0.0);
    c.vec_close(
        &move_inside(&xi, &xb, &mut uniforms(&[0.5])),
        &[1.0, 1.0],
        1e-15,
        "move_inside r=0.5",
    );
    c.check(
        move_inside(&xi, &xb, &mut uniforms(&[0.25])) == vec![3.0, -1.0],
        "move_inside r=0.25",
    );
    c.vec_close(
        &move_inside(&xi, &xb, &mut uniforms(&[0.75])),
        &[-1.0, 3.0],
        1e-15,
        "move_inside r=0.75",
    );
    let far = ind(&[-7.0, 40.0], 0.0);
    let near_one = move_outside(&far, &xb, &mut uniforms(&[1.0 - 1e-12]));
    c.vec_close(
        &near_one,
        &xb.position,
        1e-9,
        "move_outside r→1⁻ reaches best",
    );
    let at_best = move_outside(&xb, &xb, &mut uniforms(&[0.7, 0.9]));
    c.check(at_best == xb.position, "move_outside zero difference");

    // battle
    let (a, b) = (ind(&[5.0], 1.0), ind(&[3.0], 2.0));
    c.check(battle_dir(&a, &b) == vec![2.0], "dir when self better");
    let (a2, b2) = (ind(&[5.0], 2.0), ind(&[3.0], 1.0));
    c.check(battle_dir(&a2, &b2) == vec![-2.0], "dir when enemy better");
    let (a3, b3) = (ind(&[5.0], 1.0), ind(&[3.0], 1.0));
    c.check(
        battle_dir(&a3, &b3) == vec![-2.0],
        "dir on equal fitness uses else-branch",
    );
    let me = ind(&[1.0, 2.0], 3.0);
    let foe = ind(&[4.0, -1.0], 1.0);
    let zero_step = battle_vs_stronger(&me, &foe, &[0.0, 0.0], &mut uniforms(&[0.3, 0.7]));
    c.check(
        zero_step == vec![1.0, -1.0],
        "zero dir lands on self or enemy",
    );
    let twin = battle_vs_stronger(&me, &me, &battle_dir(&me, &me), &mut uniforms(&[0.3, 0.8]));
    c.check(twin == me.position, "X_i = X_enemy is a fixed point");
    let dir = [2.0, -3.0];
    c.vec_close(
        &battle_vs_weaker(&me, &dir, &mut uniforms(&[0.25])),
        &me.position,
        1e-15,
        "cos(π/2)",
    );
    c.check(
        battle_vs_weaker(&me, &dir, &mut uniforms(&[0.0])) == vec![3.0, -1.0],
        "cos(0)",
    );
    c.check(
        battle_vs_weaker(&me, &dir, &mut uniforms(&[0.5])) == vec![-1.0, 5.0],
        "cos(π)",
    );

    // EMBGO operators
    let p = ind(&[1.5, -2.0], 0.0);
    c.check(
        diff_mutation(&p, &p, &p.position, false, &mut uniforms(&[0.3, 0.9])) == p.position,
        "diff mutation zero differences",
    );
    let other = ind(&[4.0, 4.0], 0.0);
    c.vec_close(
        &diff_mutation(&p, &other, &[9.0, 9.0], false, &mut uniforms(&[0.5, 0.5])),
        &p.position,
        1e-14,
        "diff mutation r1=r2=0.5",
    );
    c.vec_close(
        &diff_mutation(
            &ind(&[0.0], 0.0),
            &ind(&[4.0], 0.0),
            &[9.0],
            false,
            &mut uniforms(&[0.25, 0.5]),
        ),
        &[4.0],
        1e-14,
        "diff mutation only best-difference active",
    );
    let params = EmbgoParams::default();
    let mut zero = ScriptedSource::new(vec![0.5], vec![0.0, 1.3], vec![0]);
    c.check(
        levy_move(&p, &params, &mut zero) == p.position,
        "Lévy move with u = 0",
    );
    c.check(
        levy_move(&p, &params, &mut RngStream::new(9))
            == levy_move(&p, &params, &mut RngStream::new(9)),
        "Lévy move deterministic",
    );

    // run-level edge cases
    let sphere = build_problem("sphere", 4).unwrap();
    let cfg = OptimizerConfig::new(6, 6, 21);
    let init = init_population(6, sphere.bounds(), &mut RngStream::new(21)).unwrap();
    let init_best = init
        .members()
        .iter()
        .map(|m| sphere.evaluate(&m.position))
        .fold(f64::INFINITY, f64::min);
    for opt in [&Mbgo::default() as &dyn Optimizer, &Embgo::default()] {
        let r = opt.run_seeded(sphere.as_ref(), &cfg).unwrap();
        c.check(
            r.trace.len() == 1,
            format!("{}: budget N gives a single trace point", opt.name()),
        );
        c.check(
            r.best_fitness() == init_best,
            format!("{}: budget N returns initial best", opt.name()),
        );
        let big = OptimizerConfig::new(6, 300, 21);
        c.check(
            opt.run_seeded(sphere.as_ref(), &big).unwrap()
                == opt.run_seeded(sphere.as_ref(), &big).unwrap(),
            format!("{}: fixed seed reproducible", opt.name()),
        );
    }
    let frozen = De::new(DeParams { f: 0.0, cr: 0.0 })
        .run_seeded(sphere.as_ref(), &OptimizerConfig::new(6, 120, 21))
        .unwrap();
    c.check(
        frozen.best_fitness() == init_best
            && frozen.trace.iter().all(|t| t.best_fitness == init_best),
        "DE with F = 0, Cr = 0 never changes the population",
    );
    let one = RandomSearch
        .run_seeded(sphere.as_ref(), &OptimizerConfig::new(1, 1, 5))
        .unwrap();
    let x = sphere.bounds().sample(&mut RngStream::new(5));
    c.check(
        one.best.position == x && one.fes_used == 1,
        "random search budget 1",
    );

    // problems
    c.check(
        evaluate_benchmark("sphere", &[0.0; 5]).unwrap() == 0.0,
        "sphere(0)",
    );
    c.check(
        evaluate_benchmark("rastrigin", &[0.0; 5]).unwrap() == 0.0,
        "rastrigin(0)",
    );
    c.close(
        evaluate_benchmark("rastrigin", &[1.0, 0.0]).unwrap(),
        1.0,
        1e-12,
        "rastrigin(1,0)",
    );
    c.check(
        evaluate_benchmark("bent-cigar", &[1.0, 1.0]).unwrap() == 1.0 + 1e6,
        "bent-cigar(1,1)",
    );
    let id = Transform::identity(3);
    c.check(
        id.apply(&[1.0, -2.0, 3.0]) == vec![1.0, -2.0, 3.0],
        "identity transform",
    );
    let t = Transform::random(6, 99, 80.0).unwrap();
    let shifted = Benchmark::new(Function::Rastrigin, Bounds::cube(6, -100.0, 100.0).unwrap())
        .with_transform(t.clone())
        .unwrap();
    c.close(
        shifted.evaluate(&shifted.optimum_location()),
        0.0,
        1e-9,
        "transformed optimum",
    );
    let v = [3.0, -1.0, 4.0, 1.0, -5.0, 9.0];
    let rotated = t.apply(
        &v.iter()
            .zip(t.shift())
            .map(|(a, s)| a + s)
            .collect::<Vec<_>>(),
    );
    let norm = |x: &[f64]| x.iter().map(|a| a * a).sum::<f64>().sqrt();
    c.close(norm(&rotated), norm(&v), 1e-9, "rotation preserves norm");
    c.check(
        penalized_fitness(3.0, &[-1.0, -5.0], 1e7) == 3.0,
        "feasible point unpenalized",
    );
    c.check(
        penalized_fitness(1.0, &[0.5, -2.0], 1e7) == 5_000_001.0,
        "penalty substitution",
    );
    c.check(
        penalized_fitness(0.0, &[0.0], 1e7) == 0.0,
        "boundary of feasibility",
    );
    let (f, g) = ThreeBarTruss
        .objective_and_constraints(&[1.0, 1.0])
        .unwrap();
    c.check(
        g.iter().all(|&v| v <= 0.0) && penalized_fitness(f, &g, 1e7) == f,
        "feasible truss design unpenalized",
    );

    // discrete
    for (x, s) in [
        (-60.0, 1),
        (-20.0, 2),
        (20.0, 3),
        (60.0, 4),
        (-60.000001, 0),
        (59.999999, 3),
    ] {
        c.check(transfer(x) == s, format!("transfer({x}) = {s}"));
    }
    let grid: Vec<f64> = (-1500..=1500).map(|k| k as f64 / 10.0).collect();
    c.check(
        grid.windows(2).all(|w| transfer(w[0]) <= transfer(w[1])),
        "transfer monotone",
    );
    c.check(
        decode(&[0.0; 6]).unwrap().symbols() == [2; 6],
        "origin decodes to all-2",
    );
    c.check(
        decode(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap().symbols()[0] == 2,
        "within-band invariance",
    );
    let mut zeros = LookupTable::from_fn(|_| 50.0).unwrap();
    let code = ArchCode::new([0, 1, 2, 3, 4, 0]).unwrap();
    zeros.insert(code, 0.0).unwrap();
    c.check(
        lookup_fitness(&zeros, code).unwrap() == 0.0,
        "accuracy 0 gives fitness 0",
    );
    c.check(
        lookup_fitness(&zeros, code).unwrap()
            == lookup_fitness(&zeros, ArchCode::new([0, 1, 2, 3, 4, 0]).unwrap()).unwrap(),
        "equal codes equal fitness",
    );
    let constant = LookupTable::from_fn(|_| 42.0).unwrap();
    c.check(
        brute_force_optimum(&constant).unwrap().0 == ArchCode::from_index(0),
        "constant table tie-break",
    );
    let star = ArchCode::new([3, 1, 4, 1, 4, 2]).unwrap();
    let peaked = LookupTable::from_fn(|k| if k == star { 90.0 } else { 10.0 }).unwrap();
    c.check(
        brute_force_optimum(&peaked).unwrap() == (star, 90.0),
        "single maximum found",
    );
    let text = synthetic_table(5).to_text();
    c.check(
        parse_table(&text).map(|t| t.len()).ok() == Some(SPACE_SIZE),
        "full table parses",
    );
    let dup = parse_table("code,accuracy\n000000,1\n000000,2\n");
    c.check(
        matches!(&dup, Err(e) if e.to_string().contains("line 3")),
        format!("duplicate names its line: {dup:?}"),
    );
    c.check(
        parse_table("# default: 1\ncode,accuracy\n000001,101\n").is_err(),
        "accuracy 101 rejected",
    );

    // metrics and statistics
    let b1 = Bounds::cube(1, -3.0, 5.0).unwrap();
    c.check(
        population_diversity(&[ind(&[-3.0], 0.0), ind(&[5.0], 0.0)], &b1) == 0.5,
        "PD extremes 0.5",
    );
    c.check(
        population_diversity(&vec![ind(&[1.0], 0.0); 4], &b1) == 0.0,
        "PD identical 0",
    );
    c.check(
        population_diversity(&[ind(&[1.0], 0.0)], &b1) == 0.0,
        "PD N=1",
    );
    let mw = mann_whitney_u(&[1.0, 2.0], &[3.0, 4.0]).unwrap();
    c.check(mw.u_a == 0.0, "U_a = 0");
    c.close(mw.p, 1.0 / 3.0, 1e-15, "exact p for [1,2] vs [3,4]");
    let same = [1.0, 4.0, 2.0, 8.0, 5.0];
    c.check(
        mann_whitney_u(&same, &same).unwrap().p >= 0.99,
        "identical samples p ≥ 0.99",
    );
    c.check(holm_adjust(&[0.5]).unwrap() == vec![0.5], "Holm m = 1");
    let m = ComparisonMatrix::new(
        vec!["p".into()],
        vec!["ref".into(), "copy".into()],
        vec![vec![vec![1.0, 2.0, 3.0], vec![1.0, 2.0, 3.0]]],
    )
    .unwrap();
    c.check(
        significance_marks(&m, "ref", 0.05).unwrap()[0][1] == Some(Mark::Approx),
        "identical column ≈",
    );
    c.check(average_rank(&m) == vec![1.5, 1.5], "tied ranks 1.5");
    let m3 = ComparisonMatrix::new(
        vec!["p".into()],
        vec!["a".into(), "b".into(), "c".into()],
        vec![vec![vec![3.0], vec![1.0], vec![2.0]]],
    )
    .unwrap();
    c.check(average_rank(&m3) == vec![3.0, 1.0, 2.0], "ranks [3,1,2]");
}

// ---------------------------------------------------------------------------

/// Γ(z) by composite Simpson on t = u², Γ(z) = 2∫₀^∞ u^(2z−1) e^(−u²) du.
fn gamma_quadrature(z: f64) -> f64 {
    let (b, n) = (12.0, 200_000);
    let h = b / n as f64;
    let f = |u: f64| 2.0 * u.powf(2.0 * z - 1.0) * (-u * u).exp();
    let mut s = f(0.0) + f(b);
    for k in 1..n {
        s += f(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

fn c02_levy(c: &mut Checks) {
    c.check(
        (levy_sigma(1.0).unwrap() - 1.0).abs() <= 2.0 * f64::EPSILON,
        "σ(1) = 1 to round-off",
    );
    // 40-digit evaluation: (Γ(2.5)·sin(3π/4) / (1.5·Γ(1.25)·2^0.25))^(1/1.5)
    c.close(
        levy_sigma(1.5).unwrap(),
        0.696_574_502_557_696_8,
        1e-9,
        "σ(1.5)",
    );
    c.close(
        gamma_fn(0.5).unwrap(),
        gamma_quadrature(0.5),
        1e-9,
        "Γ(0.5) vs quadrature",
    );
    c.close(
        gamma_fn(2.5).unwrap(),
        gamma_quadrature(2.5),
        1e-9,
        "Γ(2.5) vs quadrature",
    );

    let params = LevyParams::new(1.5).unwrap();
    let mut rng = RngStream::new(2024);
    let n = 1_000_000;
    let steps = params.sample(n, &mut rng);
    let positive = steps.iter().filter(|s| **s > 0.0).count() as f64 / n as f64;
    let beyond5 = steps.iter().filter(|s| s.abs() > 5.0).count() as f64 / n as f64;
    let mut abs: Vec<f64> = steps.iter().map(|s| s.abs()).collect();
    abs.sort_by(f64::total_cmp);
    let q999 = abs[(0.999 * n as f64) as usize];
    c.check(
        (0.49..=0.51).contains(&positive),
        format!("positive fraction {positive}"),
    );
    c.check(beyond5 >= 0.004, format!("P(|step| > 5) = {beyond5}"));
    c.check(
        q999 >= 2.0 * 3.29,
        format!("99.9th percentile of |step| = {q999}"),
    );
    c.note(format!(
        "positive {positive:.4}, P(|s|>5) {beyond5:.4}, q99.9 {q999:.2} over {n} samples"
    ));
}

// ---------------------------------------------------------------------------

fn c03_invariants(c: &mut Checks) {
    let problems = [
        build_problem("sphere", 10).unwrap(),
        build_problem("sr-rastrigin", 10).unwrap(),
        build_problem("three-bar-truss", 2).unwrap(),
    ];
    let mut runs = 0;
    for alg in ["mbgo", "embgo", "de", "random"] {
        let a = build_optimizer(alg, &[]).unwrap();
        for p in &problems {
            for seed in 0..5 {
                let cfg = OptimizerConfig::new(20, 4_000, seed);
                let mut obs = CountingObserver::with_bounds(p.bounds().clone());
                let r = a
                    .optimizer
                    .run_observed(p.as_ref(), &cfg, &mut RngStream::new(seed), &mut obs)
                    .unwrap();
                let tag = format!("{alg} on {} seed {seed}", p.name());
                c.check(
                    r.trace
                        .windows(2)
                        .all(|w| w[1].best_fitness <= w[0].best_fitness),
                    format!("{tag}: trace increases"),
                );
                c.check(
                    obs.out_of_bounds == 0,
                    format!("{tag}: {} positions out of box", obs.out_of_bounds),
                );
                c.check(
                    p.bounds().contains(&r.best.position),
                    format!("{tag}: best outside box"),
                );
                c.check(
                    r.fes_used == 4_000 && obs.evaluations == 4_000,
                    format!("{tag}: used {} FEs", r.fes_used),
                );
                c.check(
                    r.diversity_trace
                        .iter()
                        .all(|d| (0.0..=1.0).contains(&d.diversity)),
                    format!("{tag}: diversity outside [0, 1]"),
                );
                runs += 1;
            }
        }
    }
    c.note(format!("{runs} runs checked"));
}

// ---------------------------------------------------------------------------

fn c04_determinism(c: &mut Checks) {
    let p = build_problem("sr-ackley", 8).unwrap();
    for alg in ["mbgo", "embgo", "de", "random", "pso"] {
        let a = build_optimizer(alg, &[]).unwrap();
        let cfg = OptimizerConfig::new(15, 3_000, 77);
        let ser = |r: RunResult| serde_json::to_string(&r).unwrap();
        let first = ser(a.optimizer.run_seeded(p.as_ref(), &cfg).unwrap());
        let second = ser(a.optimizer.run_seeded(p.as_ref(), &cfg).unwrap());
        c.check(first == second, format!("{alg}: reruns differ"));
        let other = ser(a
            .optimizer
            .run_seeded(p.as_ref(), &OptimizerConfig { seed: 78, ..cfg })
            .unwrap());
        c.check(first != other, format!("{alg}: seed is ignored"));
    }
}

// ---------------------------------------------------------------------------

fn c05_dominance(c: &mut Checks) {
    for (name, margin) in [("sphere", 10.0), ("rastrigin", 1.0)] {
        let p = build_problem(name, 10).unwrap();
        let e = median(&finals("embgo", p.as_ref(), 50, 20_000, 0..10));
        let r = median(&finals("random", p.as_ref(), 50, 20_000, 0..10));
        c.check(e < r, format!("{name}: EMBGO median {e:e} vs random {r:e}"));
        if margin > 1.0 {
            c.check(
                e * margin <= r,
                format!("{name}: margin {:.3e} below {margin}", r / e),
            );
        }
        c.note(format!(
            "{name}: EMBGO median {e:.3e}, random median {r:.3e}"
        ));
    }
}

// ---------------------------------------------------------------------------

fn c06_embgo_vs_mbgo(c: &mut Checks) {
    let mut wins = 0;
    for name in ["rastrigin", "sr-bent-cigar"] {
        let p = build_problem(name, 10).unwrap();
        let e = finals("embgo", p.as_ref(), 50, 20_000, 0..30);
        let m = finals("mbgo", p.as_ref(), 50, 20_000, 0..30);
        // H1: EMBGO's final fitness tends to be larger (worse)
        let worse = mann_whitney_u_with(&e, &m, Alternative::Greater).unwrap();
        let (me, mm) = (median(&e), median(&m));
        c.check(
            worse.p >= 0.05,
            format!(
                "{name}: EMBGO significantly worse than MBGO (one-sided p = {:.3e})",
                worse.p
            ),
        );
        if me < mm {
            wins += 1;
        }
        c.note(format!(
            "{name}: EMBGO median {me:.4e}, MBGO median {mm:.4e}, one-sided p = {:.3e}",
            worse.p
        ));
    }
    c.check(wins >= 1, "EMBGO has the lower median on neither problem");

    // Diagnostic only: the same comparison on the shifted and rotated
    // Rastrigin, where the optimum is not at the origin.
    let p = build_problem("sr-rastrigin", 10).unwrap();
    let e = finals("embgo", p.as_ref(), 50, 20_000, 0..30);
    let m = finals("mbgo", p.as_ref(), 50, 20_000, 0..30);
    let worse = mann_whitney_u_with(&e, &m, Alternative::Greater).unwrap();
    c.note(format!(
        "(diagnostic) sr-rastrigin: EMBGO median {:.4e}, MBGO median {:.4e}, one-sided p = {:.3e}",
        median(&e),
        median(&m),
        worse.p
    ));
}

// ---------------------------------------------------------------------------

fn c07_fe_accounting(c: &mut Checks) {
    let p = build_problem("sr-griewank", 6).unwrap();
    let n = 20;
    for (alg, per_iter) in [("mbgo", 2 * n), ("embgo", n)] {
        let a = build_optimizer(alg, &[]).unwrap();
        let iterations = 25;
        let cfg = OptimizerConfig::new(n, n + iterations * per_iter, 4);
        let mut obs = CountingObserver::with_bounds(p.bounds().clone());
        let r = a
            .optimizer
            .run_observed(p.as_ref(), &cfg, &mut RngStream::new(4), &mut obs)
            .unwrap();
        c.check(
            obs.fes_per_iteration.len() == iterations
                && obs.fes_per_iteration.iter().all(|&f| f == per_iter),
            format!("{alg}: per-iteration FEs {:?}", obs.fes_per_iteration),
        );
        c.check(
            obs.evaluations == cfg.budget && r.fes_used == cfg.budget,
            format!("{alg}: budget not met exactly"),
        );
        let ops: usize = obs.operators.values().sum();
        c.check(
            ops == iterations * per_iter,
            format!("{alg}: {ops} operator applications"),
        );
        // truncated final iteration
        let cut = OptimizerConfig::new(n, n + 3 * per_iter + 7, 4);
        let mut obs = CountingObserver::default();
        let r = a
            .optimizer
            .run_observed(p.as_ref(), &cut, &mut RngStream::new(4), &mut obs)
            .unwrap();
        c.check(
            obs.fes_per_iteration == vec![per_iter; 3] && r.fes_used == cut.budget,
            format!(
                "{alg}: truncated run {:?} / {}",
                obs.fes_per_iteration, r.fes_used
            ),
        );
        c.check(
            r.trace.last().map(|t| t.fes) == Some(cut.budget),
            format!("{alg}: partial iteration not traced"),
        );
    }

    // EMBGO enters either branch with equal probability.
    let long = OptimizerConfig::new(n, n + 1_000 * n, 8);
    let mut obs = CountingObserver::default();
    Embgo::default()
        .run_observed(p.as_ref(), &long, &mut RngStream::new(8), &mut obs)
        .unwrap();
    let movement = obs
        .operators
        .iter()
        .filter(|(k, _)| *k == "DiffMutation" || *k == "LevyFlight")
        .map(|(_, v)| v)
        .sum::<usize>();
    let share = movement as f64 / (1_000 * n) as f64;
    c.check(
        (share - 0.5).abs() <= 0.02,
        format!("movement branch share {share}"),
    );
    c.note(format!(
        "EMBGO movement-branch share {share:.4} over {} candidates",
        1_000 * n
    ));
}

// ---------------------------------------------------------------------------

fn c08_truss(c: &mut Checks) {
    let p = build_problem("three-bar-truss", 2).unwrap();
    let runs = finals("embgo", p.as_ref(), 100, 10_000, 0..30);
    let best = runs.iter().copied().fold(f64::INFINITY, f64::min);
    c.check(
        (263.89..=264.5).contains(&best),
        format!("best of 30 = {best}"),
    );
    c.note(format!(
        "best of 30 = {best:.6}, median = {:.6}",
        median(&runs)
    ));
}

// ---------------------------------------------------------------------------

fn c09_arnas(c: &mut Checks) {
    let table = synthetic_table(42);
    let (code, acc) = brute_force_optimum(&table).unwrap();

    // Second enumeration: nested loops over symbols, no index arithmetic.
    let mut oracle: Option<([u8; EDGES], f64)> = None;
    let mut visited = 0;
    let s = SYMBOLS;
    for a in 0..s {
        for b in 0..s {
            for d in 0..s {
                for e in 0..s {
                    for f in 0..s {
                        for g in 0..s {
                            let sym = [a, b, d, e, f, g];
                            let v = table.accuracy(ArchCode::new(sym).unwrap()).unwrap();
                            visited += 1;
                            if oracle.is_none_or(|(_, best)| v > best) {
                                oracle = Some((sym, v));
                            }
                        }
                    }
                }
            }
        }
    }
    let (osym, oacc) = oracle.unwrap();
    c.check(visited == SPACE_SIZE, "second enumeration covers the space");
    c.check(
        code.symbols() == osym && acc == oacc,
        format!("optimum {code} ({acc}) vs oracle {osym:?} ({oacc})"),
    );
    let reparsed = parse_table(&table.to_text()).unwrap();
    c.check(
        brute_force_optimum(&reparsed).unwrap() == (code, acc),
        "optimum survives text round trip",
    );

    let mut sorted: Vec<f64> = table.iter().map(|(_, a)| a).collect();
    sorted.sort_by(|x, y| y.total_cmp(x));
    let top = SPACE_SIZE / 100;
    let threshold = sorted[top - 1];
    let problem = ArnasProblem::new(table);
    let finals = finals("embgo", &problem, 50, 5_000, 0..10);
    let hits = finals.iter().filter(|f| -**f >= threshold).count();
    c.check(hits >= 8, format!("{hits}/10 seeds reached the top 1%"));
    c.note(format!(
        "optimum {code} = {acc:.3}; top-1% threshold {threshold:.3}; {hits}/10 seeds reached it"
    ));
}

// ---------------------------------------------------------------------------

/// Rank-sum permutation p-values by listing every labelling.
fn enumeration_oracle(a: &[f64], b: &[f64]) -> (f64, f64, f64) {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let n = pooled.len();
    let ranks: Vec<f64> = pooled
        .iter()
        .map(|x| {
            let less = pooled.iter().filter(|y| *y < x).count() as f64;
            let equal = pooled.iter().filter(|y| *y == x).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect();
    let observed: f64 = ranks[..a.len()].iter().sum();
    let (mut le, mut ge, mut total) = (0u64, 0u64, 0u64);
    let mut pick: Vec<usize> = (0..a.len()).collect();
    loop {
        let s: f64 = pick.iter().map(|&i| ranks[i]).sum();
        total += 1;
        if s <= observed + 1e-9 {
            le += 1;
        }
        if s >= observed - 1e-9 {
            ge += 1;
        }
        // next combination in lexicographic order
        let k = pick.len();
        let mut i = k;
        while i > 0 && pick[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        pick[i - 1] += 1;
        for j in i..k {
            pick[j] = pick[j - 1] + 1;
        }
    }
    let (le, ge) = (le as f64 / total as f64, ge as f64 / total as f64);
    ((2.0 * le.min(ge)).min(1.0), le, ge)
}

fn c10_statistics(c: &mut Checks) {
    let mut rng = RngStream::new(10);
    let mut pairs = 0;
    for na in 1..=36usize {
        for nb in 1..=36 / na {
            for tied in [false, true] {
                let draw = |rng: &mut RngStream, k: usize| -> Vec<f64> {
                    (0..k)
                        .map(|_| {
                            if tied {
                                rng.below(4) as f64
                            } else {
                                rng.uniform()
                            }
                        })
                        .collect()
                };
                let (a, b) = (draw(&mut rng, na), draw(&mut rng, nb));
                let (two, le, ge) = enumeration_oracle(&a, &b);
                for (alt, want) in [
                    (Alternative::TwoSided, two),
                    (Alternative::Less, le),
                    (Alternative::Greater, ge),
                ] {
                    let got = mann_whitney_u_with(&a, &b, alt).unwrap();
                    c.check(got.method == PMethod::Exact, "exact path used");
                    c.close(
                        got.p,
                        want,
                        1e-12,
                        &format!("{alt:?} p for nₐ={na}, n_b={nb}, tied={tied}"),
                    );
                    c.check(got.u_a + got.u_b == (na * nb) as f64, "U_a + U_b = nₐ·n_b");
                }
                pairs += 1;
            }
        }
    }

    let holm = [
        (vec![0.5], vec![0.5]),
        (vec![0.01, 0.04], vec![0.02, 0.04]),
        (vec![0.03, 0.01, 0.04], vec![0.06, 0.03, 0.06]),
    ];
    for (input, want) in holm {
        c.vec_close(
            &holm_adjust(&input).unwrap(),
            &want,
            1e-15,
            &format!("Holm {input:?}"),
        );
    }

    let mut worst_gap: f64 = 0.0;
    for _ in 0..100 {
        let a: Vec<f64> = (0..8).map(|_| rng.uniform()).collect();
        let b: Vec<f64> = (0..8)
            .map(|_| rng.uniform() + 0.3 * rng.uniform())
            .collect();
        let (oracle, _, _) = enumeration_oracle(&a, &b);
        let exact = mann_whitney_u_using(&a, &b, Alternative::TwoSided, PMethod::Exact)
            .unwrap()
            .p;
        let normal = mann_whitney_u_using(&a, &b, Alternative::TwoSided, PMethod::Normal)
            .unwrap()
            .p;
        c.close(exact, oracle, 1e-12, "8×8 exact vs oracle");
        worst_gap = worst_gap.max((normal - oracle).abs());
    }
    c.check(
        worst_gap <= 0.02,
        format!("8×8 normal approximation off by {worst_gap}"),
    );

    let mut out_of_range = 0;
    for _ in 0..10_000 {
        let n = 1 + rng.below(30);
        let d = 1 + rng.below(10);
        let lower: Vec<f64> = (0..d).map(|_| rng.uniform_in(-1e3, 1e3)).collect();
        let upper: Vec<f64> = lower
            .iter()
            .map(|l| l + rng.uniform_in(1e-3, 1e3))
            .collect();
        let bounds = Bounds::new(lower.clone(), upper.clone()).unwrap();
        let members: Vec<Individual> = (0..n)
            .map(|_| {
                let x = (0..d)
                    .map(|j| match rng.below(4) {
                        0 => lower[j],
                        1 => upper[j],
                        _ => rng.uniform_in(lower[j], upper[j]),
                    })
                    .collect();
                Individual::new(x, 0.0)
            })
            .collect();
        let pd = population_diversity(&members, &bounds);
        if !(0.0..=1.0).contains(&pd) {
            out_of_range += 1;
        }
    }
    c.check(
        out_of_range == 0,
        format!("{out_of_range} fuzzed populations with PD outside [0, 1]"),
    );
    c.note(format!(
        "{pairs} exact sample pairs matched; 8×8 normal-approximation gap ≤ {worst_gap:.4}; 10000 PD cases"
    ));
}

// ---------------------------------------------------------------------------

fn timed_run(n: usize, d: usize, iterations: usize) -> f64 {
    let p = build_problem("sphere", d).unwrap();
    let cfg = OptimizerConfig::new(n, n * (iterations + 1), 3);
    let start = Instant::now();
    std::hint::black_box(Embgo::default().run_seeded(p.as_ref(), &cfg).unwrap());
    start.elapsed().as_secs_f64()
}

fn c11_scaling(c: &mut Checks) {
    let (n, d, t) = (60, 60, 150);
    timed_run(n, d, 20); // warm-up
                         // Interleave the three shapes so drift in machine load hits all of them.
    let mut best = [f64::INFINITY; 3];
    for _ in 0..9 {
        for (slot, (nn, dd)) in [(n, d), (2 * n, d), (n, 2 * d)].into_iter().enumerate() {
            best[slot] = best[slot].min(timed_run(nn, dd, t));
        }
    }
    let double_n = best[1] / best[0];
    let double_d = best[2] / best[0];
    c.check(
        (1.5..=3.0).contains(&double_n),
        format!("doubling N scales time by {double_n:.3}"),
    );
    c.check(
        (1.5..=3.0).contains(&double_d),
        format!("doubling D scales time by {double_d:.3}"),
    );
    c.note(format!(
        "base {:.2} ms; ×N {double_n:.3}; ×D {double_d:.3}",
        best[0] * 1e3
    ));
}
