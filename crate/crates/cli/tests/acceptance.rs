//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::collections::HashSet;
use std::process::Command;
use std::time::{Duration, Instant};

use graphsched::schedule::{
    self, decomposition_to_schedule, ordering_to_schedule, schedule_to_decomposition,
    validate_decomposition, validate_schedule,
};
use graphsched::sim::{distribution_equivalence, stream_simulate};
use graphsched::solver::{
    branch_and_bound, brute_force, exact_dp, heuristic, lower_bound, Strategy,
};
use graphsched::{
    Basis, BasisAssignment, Budget, FamilyDescriptor, Graph, MeasurementSchedule,
    PathDecomposition, ScheduleEvent,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    check(t < limit, || format!("took {t:.2?}, limit {limit:?}"))
}

/// A uniformly random valid schedule: at each step pick any permitted event.
fn random_schedule(g: &Graph, rng: &mut ChaCha8Rng) -> MeasurementSchedule {
    let n = g.n();
    let mut state = vec![0u8; n];
    let mut events = Vec::with_capacity(2 * n);
    loop {
        let options: Vec<ScheduleEvent> = (0..n)
            .filter_map(|v| match state[v] {
                0 => Some(ScheduleEvent::init(v)),
                1 if g.neighbours(v).unwrap().iter().all(|&u| state[u] != 0) => {
                    Some(ScheduleEvent::measure(v))
                }
                _ => None,
            })
            .collect();
        let Some(&e) = options.choose(rng) else { break };
        state[e.vertex] += 1;
        events.push(e);
    }
    MeasurementSchedule::new(events)
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    FamilyDescriptor::Random {
        n,
        p: rng.gen_range(0.1..0.9),
        seed: rng.gen(),
    }
    .generate()
    .unwrap()
}

/// Minimum eager-schedule cost over all orderings, by enumeration.
fn min_cost_over_orderings(g: &Graph) -> usize {
    let mut order: Vec<usize> = (0..g.n()).collect();
    let mut best = usize::MAX;
    loop {
        let s = ordering_to_schedule(g, &order).unwrap();
        best = best.min(schedule::cost(&s).unwrap());
        // Lexicographic successor.
        let Some(i) = (1..order.len()).rev().find(|&i| order[i - 1] < order[i]) else {
            return best;
        };
        let j = (i..order.len())
            .rev()
            .find(|&j| order[j] > order[i - 1])
            .unwrap();
        order.swap(i - 1, j);
        order[i..].reverse();
    }
}

/// Smallest adjacency bitmask over all relabellings.
fn canonical(n: usize, edges: &[(usize, usize)]) -> u32 {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = u32::MAX;
    loop {
        let mut mask = 0u32;
        for &(u, v) in edges {
            let (a, b) = (perm[u].min(perm[v]), perm[u].max(perm[v]));
            mask |= 1 << pairs.iter().position(|&p| p == (a, b)).unwrap();
        }
        best = best.min(mask);
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return best;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

/// Every connected graph on `n` vertices, one per isomorphism class.
fn connected_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let edges: Vec<(usize, usize)> = (0..pairs.len())
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| pairs[b])
            .collect();
        let g = Graph::from_edges(n, edges.iter().copied()).unwrap();
        if g.is_connected() && seen.insert(canonical(n, &edges)) {
            out.push(g);
        }
    }
    out
}

fn small_corpus() -> Vec<Graph> {
    let classes: Vec<Vec<Graph>> = (1..=6).map(connected_graphs).collect();
    let counts: Vec<usize> = classes.iter().map(Vec::len).collect();
    // Known numbers of connected graphs on 1..=6 unlabelled vertices.
    assert_eq!(
        counts,
        [1, 1, 2, 6, 21, 112],
        "isomorphism-class enumeration"
    );
    let mut corpus: Vec<Graph> = classes.into_iter().flatten().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in [7, 8] {
        corpus.extend((0..200).map(|_| random_graph(&mut rng, n)));
    }
    corpus
}

fn complete_graphs() -> Outcome {
    let start = Instant::now();
    for n in 2..=10 {
        let g = FamilyDescriptor::Complete { n }.generate().unwrap();
        let r = exact_dp(&g).unwrap();
        check(r.spatial_cost() == n && r.exact, || {
            format!("K{n}: spatial cost {}", r.spatial_cost())
        })?;
    }
    within(start, Duration::from_secs(5))?;
    Ok(format!(
        "exact_dp spatial cost = n for K2..K10 in {:.2?}",
        start.elapsed()
    ))
}

fn square_lattices() -> Outcome {
    let start = Instant::now();
    for m in 2..=5 {
        for n in 2..=5 {
            let g = FamilyDescriptor::Grid { m, n }.generate().unwrap();
            let r = branch_and_bound(&g, Budget::unlimited()).unwrap();
            check(r.exact && r.spatial_cost() == m.min(n) + 1, || {
                format!("grid({m},{n}): cost {} exact {}", r.spatial_cost(), r.exact)
            })?;
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "branch_and_bound cost = min(m,n)+1, exact, on 16 grids in {:.2?}",
        start.elapsed()
    ))
}

fn two_bag_decomposition() -> Outcome {
    // Width depends only on the bags; no edge set is assumed.
    let bag = |names: &str| {
        names
            .bytes()
            .map(|c| usize::from(c - b'a'))
            .collect::<Vec<_>>()
    };
    let pd = PathDecomposition::new([bag("abcd"), bag("cdef")]);
    let w = pd.width().unwrap();
    check(w == 3, || format!("width {w}"))?;
    Ok("width(({a,b,c,d},{c,d,e,f})) = 3".into())
}

fn round_trips() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let graphs: Vec<Graph> = (0..600)
        .map(|_| {
            let n = rng.gen_range(1..=10);
            random_graph(&mut rng, n)
        })
        .collect();
    let mut schedules = 0;
    for (i, g) in graphs.iter().enumerate() {
        let mut candidates: Vec<MeasurementSchedule> =
            (0..4).map(|_| random_schedule(g, &mut rng)).collect();
        let mut order: Vec<usize> = (0..g.n()).collect();
        order.shuffle(&mut rng);
        candidates.push(ordering_to_schedule(g, &order).unwrap());
        for s in candidates {
            schedules += 1;
            check(validate_schedule(g, &s).unwrap().is_valid(), || {
                format!("graph {i}: generator produced an invalid schedule")
            })?;
            let pd = schedule_to_decomposition(g, &s).unwrap();
            check(validate_decomposition(g, &pd).unwrap().is_valid(), || {
                format!("graph {i}: forward conversion invalid")
            })?;
            let cost = schedule::cost(&s).unwrap();
            let width = pd.width().unwrap();
            check(width + 1 == cost, || {
                format!("graph {i}: width {width}, cost {cost}")
            })?;
            let back = decomposition_to_schedule(g, &pd).unwrap();
            check(validate_schedule(g, &back).unwrap().is_valid(), || {
                format!("graph {i}: reverse conversion invalid")
            })?;
            let back_cost = schedule::cost(&back).unwrap();
            check(back_cost <= width + 1, || {
                format!(
                    "graph {i}: reverse cost {back_cost} > width + 1 = {}",
                    width + 1
                )
            })?;
        }
    }
    Ok(format!(
        "{} graphs, {schedules} schedules, zero failures",
        graphs.len()
    ))
}

fn ordering_minimum(corpus: &[Graph]) -> Outcome {
    let start = Instant::now();
    let failures: Vec<String> = corpus
        .par_iter()
        .enumerate()
        .filter_map(|(i, g)| {
            let by_enumeration = min_cost_over_orderings(g);
            let dp = exact_dp(g).unwrap().width + 1;
            (by_enumeration != dp).then(|| format!("graph {i}: {by_enumeration} vs {dp}"))
        })
        .collect();
    check(failures.is_empty(), || failures.join(", "))?;
    within(start, Duration::from_secs(600))?;
    Ok(format!(
        "{} graphs: min over n! orderings = exact_dp width + 1 in {:.2?}",
        corpus.len(),
        start.elapsed()
    ))
}

fn oracle_agreement(corpus: &[Graph]) -> Outcome {
    let failures: Vec<String> = corpus
        .par_iter()
        .enumerate()
        .filter_map(|(i, g)| {
            let brute = brute_force(g).unwrap();
            let dp = exact_dp(g).unwrap();
            let bnb = branch_and_bound(g, Budget::unlimited()).unwrap();
            let greedy = heuristic(g, Strategy::GreedyBoundary).unwrap();
            let restarts = heuristic(
                g,
                Strategy::RandomRestart {
                    seed: i as u64,
                    restarts: 8,
                },
            )
            .unwrap();
            let w = dp.width;
            let ok = brute.width == w
                && bnb.width == w
                && bnb.exact
                && greedy.width >= w
                && restarts.width >= w
                && lower_bound(g) <= w
                && [&brute, &dp, &bnb, &greedy, &restarts]
                    .iter()
                    .all(|r| r.lower_bound <= w);
            (!ok).then(|| {
                format!(
                    "graph {i}: brute {} dp {w} bnb {} greedy {} restarts {}",
                    brute.width, bnb.width, greedy.width, restarts.width
                )
            })
        })
        .collect();
    check(failures.is_empty(), || failures.join(", "))?;
    Ok(format!(
        "{} graphs: brute = dp = bnb, heuristic >= exact, lower bound <= exact",
        corpus.len()
    ))
}

fn random_bases(rng: &mut ChaCha8Rng, n: usize) -> BasisAssignment {
    BasisAssignment::new(
        (0..n)
            .map(|_| *[Basis::Z, Basis::X, Basis::Y].choose(rng).unwrap())
            .collect(),
    )
}

/// Simulation triples: two distinct valid schedules per graph.
fn simulation_triples() -> Vec<(Graph, MeasurementSchedule, BasisAssignment)> {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut triples = Vec::new();
    while triples.len() < 120 {
        let n = rng.gen_range(2..=8);
        let g = random_graph(&mut rng, n);
        let optimal = exact_dp(&g).unwrap().schedule;
        let mut other = random_schedule(&g, &mut rng);
        if other == optimal {
            other = MeasurementSchedule::all_init_then_measure(n);
        }
        if other == optimal {
            continue;
        }
        for s in [optimal, other] {
            triples.push((g.clone(), s, random_bases(&mut rng, n)));
        }
    }
    triples
}

fn equivalence(triples: &[(Graph, MeasurementSchedule, BasisAssignment)]) -> Outcome {
    let mut worst = 0.0f64;
    for (i, (g, s, b)) in triples.iter().enumerate() {
        let r = distribution_equivalence::<f64>(g, s, b).unwrap();
        worst = worst.max(r.max_deviation);
        check(r.max_deviation < 1e-9, || {
            format!("triple {i}: deviation {:e}", r.max_deviation)
        })?;
    }
    Ok(format!(
        "{} triples, max deviation {worst:.1e} < 1e-9",
        triples.len()
    ))
}

fn memory_law(triples: &[(Graph, MeasurementSchedule, BasisAssignment)]) -> Outcome {
    for (i, (g, s, b)) in triples.iter().enumerate() {
        let cost = schedule::cost(s).unwrap();
        let r = stream_simulate::<f64>(g, s, b, i as u64).unwrap();
        check(
            r.peak_active == cost && r.peak_amplitude_length == 1 << cost,
            || {
                format!(
                    "triple {i}: cost {cost}, peak length {}",
                    r.peak_amplitude_length
                )
            },
        )?;
    }
    let g = FamilyDescriptor::Grid { m: 2, n: 5 }.generate().unwrap();
    let s = exact_dp(&g).unwrap().schedule;
    let r = stream_simulate::<f64>(&g, &s, &BasisAssignment::uniform(Basis::X, 10), 1).unwrap();
    check(r.peak_amplitude_length == 8, || {
        format!("grid(2,5): peak length {}", r.peak_amplitude_length)
    })?;
    Ok(format!(
        "peak amplitude length = 2^cost on {} runs; grid(2,5) peak 8 with 10 qubits",
        triples.len()
    ))
}

fn dp_at_twenty() -> Outcome {
    let mut slowest = Duration::ZERO;
    for (p, seed) in [(0.2, 1), (0.5, 2), (0.8, 3)] {
        let g = FamilyDescriptor::Random { n: 20, p, seed }
            .generate()
            .unwrap();
        let start = Instant::now();
        let r = exact_dp(&g).unwrap();
        within(start, Duration::from_secs(30))?;
        slowest = slowest.max(start.elapsed());
        r.check_certificates(&g)?;
    }
    Ok(format!(
        "exact_dp on n = 20 random graphs, slowest {slowest:.2?} < 30s"
    ))
}

fn run_cli(args: &[&str], stdin: Option<&[u8]>) -> Vec<u8> {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_graphsched"))
        .args(args)
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::null())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.unwrap_or_default())
        .unwrap();
    child.wait_with_output().unwrap().stdout
}

fn cli_determinism() -> Outcome {
    let graph = run_cli(&["generate", "random", "12", "0.3", "--seed", "7"], None);
    let small = run_cli(&["generate", "grid", "2", "4"], None);
    let invocations: Vec<(Vec<&str>, Option<&[u8]>)> = vec![
        (vec!["generate", "random", "12", "0.3", "--seed", "7"], None),
        (
            vec!["solve", "--method", "heuristic", "--seed", "3"],
            Some(&graph),
        ),
        (vec!["solve", "--method", "dp"], Some(&graph)),
        (vec!["solve"], Some(&graph)),
        (
            vec!["simulate", "--bases", "XYZXYZXY", "--seed", "5"],
            Some(&small),
        ),
        (
            vec!["simulate", "--mode", "check", "--bases", "Y"],
            Some(&small),
        ),
        (
            vec![
                "bench",
                "--corpus",
                "random:8:0.4:5,grid:2..3",
                "--methods",
                "dp,heuristic",
                "--seed",
                "2",
            ],
            None,
        ),
    ];
    for (args, stdin) in &invocations {
        let first = run_cli(args, *stdin);
        let second = run_cli(args, *stdin);
        check(!first.is_empty(), || {
            format!("`{}` produced no output", args.join(" "))
        })?;
        check(first == second, || {
            format!("`{}` differs between runs", args.join(" "))
        })?;
    }
    Ok(format!(
        "{} seeded invocations byte-identical across runs",
        invocations.len()
    ))
}

fn main() {
    let corpus = small_corpus();
    let triples = simulation_triples();
    let criteria: Vec<Criterion> = vec![
        ("complete graphs", Box::new(complete_graphs)),
        ("square lattices", Box::new(square_lattices)),
        (
            "two-bag decomposition width",
            Box::new(two_bag_decomposition),
        ),
        ("schedule/decomposition equivalence", Box::new(round_trips)),
        (
            "optimal ordering minimum",
            Box::new(|| ordering_minimum(&corpus)),
        ),
        (
            "solver oracle agreement",
            Box::new(|| oracle_agreement(&corpus)),
        ),
        ("simulation equivalence", Box::new(|| equivalence(&triples))),
        ("memory law", Box::new(|| memory_law(&triples))),
        ("exact_dp at n = 20", Box::new(dp_at_twenty)),
        ("CLI determinism", Box::new(cli_determinism)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS  {:>2}  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {:>2}  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
