use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use lsnc_core::coloring::{exact_chromatic, greedy_color, ChromaticOutcome, Coloring, GreedyOrder};
use lsnc_core::constraint::{build_constraints, constrained_pls, ConstraintPartition};
use lsnc_core::fade_state::{effective_constellation, enumerate_singular_fade_states, psk_representatives, FadeState};
use lsnc_core::latin::{
    complete_rows_hall, from_coloring, generic_complete, latin_violation, random_latin_rectangle, removal_violation,
    Completion, LatinGrid,
};
use lsnc_core::psk::construct;
use lsnc_core::signal_set::{SignalKind, SignalSet};
use lsnc_core::srg::{build_srg, greedy_clique_lower_bound, qam_clique_certificates, vital_subgraph, RemovalGraph};
use num_complex::Complex64;
use rand::SeedableRng;
use serde::Serialize;

use crate::input::{self, GridFile};
use crate::{Command, Status, Target, Usage};

type Dest = Option<Option<PathBuf>>;

pub fn run(command: Command) -> Result<Status> {
    match command {
        Command::FadeStates { signal, json } => fade_states(&signal, &json),
        Command::Constraints { target, ascii, json } => constraints(&target, ascii, &json),
        Command::Graph { target, vital, dot, json } => graph(&target, vital, &dot, &json),
        Command::Chromatic { target, vital_only, budget } => chromatic(&target, vital_only, budget.budget),
        Command::Latin { target, budget, json } => latin(&target, budget.budget, &json),
        Command::Verify { latin, signal, fade } => verify(&latin, signal.as_deref(), fade.as_deref()),
        Command::Complete { partial, symbols, budget, json } => complete(&partial, symbols, budget.budget, &json),
        Command::PskSweep { m, out, timing } => psk_sweep(m, out.as_deref(), timing),
        Command::Clique { m, json } => clique(m, &json),
        Command::Mindist { target } => mindist(&target),
        Command::Rectangle { m, rows, seed, complete, json } => rectangle(m, rows, seed, complete, &json),
        Command::Fixtures { dir } => fixtures(&dir),
    }
}

/// Writes `text` to the file, to stdout for a bare flag, or nowhere.
fn emit(dest: &Dest, text: &str) -> Result<()> {
    match dest {
        None => Ok(()),
        Some(None) => {
            print!("{text}");
            Ok(())
        }
        Some(Some(path)) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn fmt_complex(z: Complex64) -> String {
    let sign = if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) { '-' } else { '+' };
    format!("{}{}{}j", z.re, sign, z.im.abs())
}

fn target(t: &Target) -> Result<(SignalSet, FadeState)> {
    let set = input::signal_set(&t.signal, None)?;
    let s = input::fade_state(&t.fade, &set)?;
    Ok((set, s))
}

fn grid_file(grid: &LatinGrid, role: &str, signal: Option<&str>, fade: Option<&str>) -> GridFile {
    GridFile {
        role: Some(role.to_string()),
        signal: signal.map(str::to_string),
        fade: fade.map(str::to_string),
        rows: grid.to_rows(),
    }
}

#[derive(Serialize)]
struct FadeRecord {
    re: f64,
    im: f64,
    k: Option<usize>,
    l: Option<usize>,
    radius: f64,
}

fn fade_states(signal: &str, json: &Dest) -> Result<Status> {
    let set = input::signal_set(signal, None)?;
    let states = enumerate_singular_fade_states(&set)?.states;
    let records: Vec<FadeRecord> = states
        .iter()
        .map(|s| FadeRecord {
            re: s.value.re,
            im: s.value.im,
            k: s.psk.map(|p| p.k),
            l: s.psk.map(|p| p.l),
            radius: s.radius(),
        })
        .collect();
    if json.is_some() {
        emit(json, &to_json(&records))?;
    }
    if !matches!(json, Some(None)) {
        let psk = matches!(set.kind(), SignalKind::Psk { .. });
        for r in &records {
            let mut line = format!("{:>12.8} {:>12.8}  radius {:.8}", r.re, r.im, r.radius);
            if let (true, Some(k), Some(l)) = (psk, r.k, r.l) {
                write!(line, "  k={k} l={l}").unwrap();
            }
            println!("{line}");
        }
        println!("states={}", records.len());
    }
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct BlocksJson {
    blocks: Vec<Vec<[usize; 2]>>,
}

fn blocks_json(p: &ConstraintPartition) -> BlocksJson {
    BlocksJson {
        blocks: p
            .blocks()
            .iter()
            .map(|b| b.iter().map(|c| { let (r, c) = c.labels(); [r, c] }).collect())
            .collect(),
    }
}

fn constraints(t: &Target, ascii: bool, json: &Dest) -> Result<Status> {
    let (set, s) = target(t)?;
    let p = build_constraints(&set, &s)?;
    emit(json, &to_json(&blocks_json(&p)))?;
    if ascii || json.is_none() {
        print!("{}", constrained_pls(&p).to_ascii());
        println!("blocks={} multi-cell={}", p.len(), p.multi_cell_blocks().len());
    }
    Ok(Status::Ok)
}

fn removal_graph(set: &SignalSet, s: &FadeState, vital: bool) -> Result<(ConstraintPartition, RemovalGraph)> {
    let p = build_constraints(set, s)?;
    let g = build_srg(&p);
    let g = if vital { vital_subgraph(&g, &p) } else { g };
    Ok((p, g))
}

#[derive(Serialize)]
struct GraphJson {
    /// Block index (1-based) of each vertex.
    vertices: Vec<usize>,
    /// Edges between block indices.
    edges: Vec<[usize; 2]>,
}

fn graph(t: &Target, vital: bool, dot: &Dest, json: &Dest) -> Result<Status> {
    let (set, s) = target(t)?;
    let (_, g) = removal_graph(&set, &s, vital)?;
    emit(dot, &g.to_dot())?;
    let doc = GraphJson {
        vertices: g.vertex_block.iter().map(|b| b + 1).collect(),
        edges: g
            .graph
            .edges()
            .iter()
            .map(|&(u, v)| [g.vertex_block[u] + 1, g.vertex_block[v] + 1])
            .collect(),
    };
    emit(json, &to_json(&doc))?;
    if dot.is_none() && json.is_none() {
        println!(
            "vertices={} edges={} clique>={}",
            g.vertex_count(),
            g.graph.edge_count(),
            greedy_clique_lower_bound(&g.graph)
        );
    }
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct ColorsJson {
    colors: Vec<usize>,
}

fn colors_json(c: &Coloring) -> String {
    serde_json::to_string(&ColorsJson {
        colors: c.colors().iter().map(|x| x + 1).collect(),
    })
    .expect("serializable")
}

/// Branch and bound between the clique bound and the DSATUR coloring.
fn solve(g: &lsnc_core::graph::Graph, budget: u64) -> Result<ChromaticOutcome> {
    let lower = greedy_clique_lower_bound(g);
    let upper = greedy_color(g, &GreedyOrder::Dsatur).num_colors();
    Ok(exact_chromatic(g, lower, upper, budget)?)
}

fn chromatic(t: &Target, vital_only: bool, budget: u64) -> Result<Status> {
    let (set, s) = target(t)?;
    let (_, g) = removal_graph(&set, &s, vital_only)?;
    match solve(&g.graph, budget)? {
        ChromaticOutcome::Optimal { chi, coloring } => {
            println!("chi={chi}");
            println!("{}", colors_json(&coloring));
            Ok(Status::Ok)
        }
        ChromaticOutcome::BudgetExhausted { lower, best } => {
            println!("chi>={lower} chi<={}", best.num_colors());
            println!("{}", colors_json(&best));
            eprintln!("search budget exhausted; the coloring may not be optimal");
            Ok(Status::BudgetExhausted)
        }
    }
}

/// The closed-form construction when `s` is a PSK representative.
fn psk_square(set: &SignalSet, s: &FadeState) -> Option<(LatinGrid, &'static str)> {
    let SignalKind::Psk { .. } = set.kind() else { return None };
    let p = s.psk?;
    let rep = FadeState::psk_representative(set.order(), p.k, p.l).ok()?;
    if (rep.value - s.value).norm() > 1e-9 {
        return None;
    }
    let built = construct(set.order(), p.k, p.l).ok()?;
    Some((built.grid, built.method.name()))
}

fn latin(t: &Target, budget: u64, json: &Dest) -> Result<Status> {
    let (set, s) = target(t)?;
    let (grid, method, status) = match psk_square(&set, &s) {
        Some((g, m)) => (g, m, Status::Ok),
        None => {
            let p = build_constraints(&set, &s)?;
            let g = build_srg(&p);
            let (coloring, status) = match solve(&g.graph, budget)? {
                ChromaticOutcome::Optimal { coloring, .. } => (coloring, Status::Ok),
                ChromaticOutcome::BudgetExhausted { best, .. } => (best, Status::BudgetExhausted),
            };
            (from_coloring(&p, &coloring)?, "exact-coloring", status)
        }
    };
    if status == Status::BudgetExhausted {
        eprintln!("search budget exhausted; the square may use more symbols than necessary");
    }
    emit(json, &to_json(&grid_file(&grid, "latin", Some(&t.signal), Some(&t.fade))))?;
    if !matches!(json, Some(None)) {
        print!("{}", grid.to_ascii());
        println!("symbols={} method={method}", grid.symbol_count());
    }
    Ok(status)
}

fn verify(path: &Path, signal: Option<&str>, fade: Option<&str>) -> Result<Status> {
    let loaded = input::load_grid(path)?;
    let (set, s) = input::context_of(signal, fade, Some(&loaded))?;
    if set.order() != loaded.grid.order() {
        anyhow::bail!(Usage(format!(
            "grid order {} does not match signal set order {}",
            loaded.grid.order(),
            set.order()
        )));
    }
    let p = build_constraints(&set, &s)?;
    let latin = latin_violation(&loaded.grid);
    let removal = removal_violation(&loaded.grid, &p);
    println!(
        "latin={} removes={} symbols={}",
        latin.is_none() && loaded.grid.is_complete(),
        removal.is_none(),
        loaded.grid.symbol_count()
    );
    if !loaded.grid.is_complete() {
        eprintln!("the grid has empty cells");
    }
    for v in latin.iter().chain(&removal) {
        eprintln!("{v}");
    }
    Ok(if latin.is_none() && removal.is_none() { Status::Ok } else { Status::Failed })
}

fn complete(path: &Path, symbols: usize, budget: u64, json: &Dest) -> Result<Status> {
    let loaded = input::load_grid(path)?;
    match generic_complete(&loaded.grid, symbols, budget)? {
        Completion::Completed(grid) => {
            let f = &loaded.file;
            emit(json, &to_json(&grid_file(&grid, "latin", f.signal.as_deref(), f.fade.as_deref())))?;
            if !matches!(json, Some(None)) {
                print!("{}", grid.to_ascii());
                println!("symbols={}", grid.symbol_count());
            }
            Ok(Status::Ok)
        }
        Completion::Infeasible => {
            println!("infeasible with {symbols} symbols");
            Ok(Status::Failed)
        }
        Completion::BudgetExhausted => {
            println!("budget exhausted");
            Ok(Status::BudgetExhausted)
        }
    }
}

#[derive(Serialize)]
struct SweepRecord {
    k: usize,
    l: usize,
    case: String,
    method: String,
    symbols: usize,
    lower: usize,
    upper: usize,
    verified: bool,
    #[serde(skip)]
    grid: Option<LatinGrid>,
    #[serde(skip)]
    millis: u128,
}

fn sweep_one(set: &SignalSet, k: usize, l: usize) -> SweepRecord {
    let m = set.order();
    let start = Instant::now();
    let mut rec = SweepRecord {
        k,
        l,
        case: String::new(),
        method: String::new(),
        symbols: 0,
        lower: m,
        upper: 0,
        verified: false,
        grid: None,
        millis: 0,
    };
    match construct(m, k, l) {
        Ok(built) => {
            let g = build_srg(&build_constraints(set, &built.fade_state).expect("nonzero representative"));
            rec.lower = greedy_clique_lower_bound(&g.graph);
            rec.case = built.case.tag.name().to_string();
            rec.method = built.method.name().to_string();
            rec.symbols = built.grid.symbol_count();
            rec.upper = rec.symbols;
            let p = build_constraints(set, &built.fade_state).expect("nonzero representative");
            rec.verified = latin_violation(&built.grid).is_none()
                && built.grid.is_complete()
                && removal_violation(&built.grid, &p).is_none()
                && rec.symbols == m;
            rec.grid = Some(built.grid);
        }
        Err(e) => eprintln!("k={k} l={l}: {e}"),
    }
    rec.millis = start.elapsed().as_millis();
    rec
}

fn psk_sweep(m: usize, out: Option<&Path>, timing: bool) -> Result<Status> {
    if !m.is_power_of_two() || m < 8 {
        anyhow::bail!(Usage(format!("--m must be a power of two of at least 8, got {m}")));
    }
    let set = SignalSet::psk(m.trailing_zeros())?;
    let reps: Vec<(usize, usize)> = psk_representatives(m)?
        .iter()
        .map(|s| s.psk.map(|p| (p.k, p.l)).expect("representatives carry circle parameters"))
        .collect();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(reps.len()).max(1);
    let mut records: Vec<Option<SweepRecord>> = (0..reps.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let chunk = reps.len().div_ceil(workers);
        for (slots, pairs) in records.chunks_mut(chunk).zip(reps.chunks(chunk)) {
            let set = &set;
            scope.spawn(move || {
                for (slot, &(k, l)) in slots.iter_mut().zip(pairs) {
                    *slot = Some(sweep_one(set, k, l));
                }
            });
        }
    });
    let records: Vec<SweepRecord> = records.into_iter().map(|r| r.expect("every slot is filled")).collect();

    if let Some(dir) = out {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        for r in &records {
            if let Some(grid) = &r.grid {
                let file = grid_file(grid, "latin", Some(&format!("psk:{m}")), Some(&format!("psk:{},{}", r.k, r.l)));
                let path = dir.join(format!("psk{m}_k{}_l{}.json", r.k, r.l));
                std::fs::write(&path, to_json(&file)).with_context(|| format!("cannot write {}", path.display()))?;
            }
        }
        let path = dir.join("summary.json");
        std::fs::write(&path, to_json(&records)).with_context(|| format!("cannot write {}", path.display()))?;
    }

    let mut header = format!("{:>3} {:>3}  {:<10} {:<16} {:>7} {:>5} {:>5}  verified", "k", "l", "case", "method", "symbols", "lower", "upper");
    if timing {
        header.push_str("  ms");
    }
    println!("{header}");
    for r in &records {
        let mut line = format!(
            "{:>3} {:>3}  {:<10} {:<16} {:>7} {:>5} {:>5}  {}",
            r.k, r.l, r.case, r.method, r.symbols, r.lower, r.upper, r.verified
        );
        if timing {
            write!(line, "  {}", r.millis).unwrap();
        }
        println!("{line}");
    }
    let ok = records.iter().filter(|r| r.verified).count();
    println!("verified {ok}/{}", records.len());
    Ok(if ok == records.len() { Status::Ok } else { Status::Failed })
}

#[derive(Serialize)]
struct CliqueJson {
    re: f64,
    im: f64,
    cells: Vec<[usize; 2]>,
    blocks: Vec<usize>,
    clique: bool,
}

fn clique(m: usize, json: &Dest) -> Result<Status> {
    let set = input::signal_set(&format!("qam:{m}"), None)?;
    let mut docs = Vec::new();
    for cert in qam_clique_certificates(m)? {
        let p = build_constraints(&set, &cert.fade_state)?;
        let g = build_srg(&p);
        let blocks: BTreeSet<usize> = cert.cells.iter().map(|&c| p.block_of(c)).collect();
        let vs: Vec<usize> = blocks.into_iter().collect();
        let ok = vs.len() == m + 1 && g.graph.is_clique(&vs);
        docs.push(CliqueJson {
            re: cert.fade_state.value.re,
            im: cert.fade_state.value.im,
            cells: cert.cells.iter().map(|c| { let (r, c) = c.labels(); [r, c] }).collect(),
            blocks: cert.blocks.iter().map(|b| b + 1).collect(),
            clique: ok,
        });
    }
    emit(json, &to_json(&docs))?;
    if !matches!(json, Some(None)) {
        for d in &docs {
            println!("s={} size={} clique={}", fmt_complex(Complex64::new(d.re, d.im)), d.cells.len(), d.clique);
        }
    }
    Ok(if docs.iter().all(|d| d.clique) { Status::Ok } else { Status::Failed })
}

fn mindist(t: &Target) -> Result<Status> {
    let (set, s) = target(t)?;
    let e = effective_constellation(&set, &s)?;
    println!("points={} dmin={}", e.points.len(), e.min_distance);
    Ok(Status::Ok)
}

fn rectangle(m: usize, rows: usize, seed: u64, complete: bool, json: &Dest) -> Result<Status> {
    if m == 0 || rows > m || m > 1 << 12 {
        anyhow::bail!(Usage(format!("need 0 <= rows <= m with 1 <= m <= 4096, got m={m} rows={rows}")));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut grid = random_latin_rectangle(&mut rng, m, rows);
    if complete {
        grid = complete_rows_hall(&grid)?;
    }
    let role = if complete { "latin" } else { "rectangle" };
    emit(json, &to_json(&grid_file(&grid, role, None, None)))?;
    if !matches!(json, Some(None)) {
        print!("{}", grid.to_ascii());
    }
    Ok(Status::Ok)
}

/// First problem found with one fixture, if any.
fn check_fixture(path: &Path) -> Result<Option<String>> {
    let loaded = input::load_grid(path)?;
    if let Some(v) = latin_violation(&loaded.grid) {
        return Ok(Some(v));
    }
    let f = &loaded.file;
    if f.role.as_deref() == Some("latin") && !loaded.grid.is_complete() {
        return Ok(Some("a Latin Square with empty cells".into()));
    }
    let in_place = matches!(f.role.as_deref(), None | Some("latin" | "constrained" | "partial" | "filled"));
    if f.signal.is_none() || f.fade.is_none() || !in_place {
        return Ok(None);
    }
    let (set, s) = input::context_of(None, None, Some(&loaded))?;
    let p = build_constraints(&set, &s)?;
    if loaded.grid.is_complete() {
        return Ok(removal_violation(&loaded.grid, &p));
    }
    for b in p.blocks().iter().filter(|b| b.len() > 1) {
        let symbols: BTreeSet<Option<u32>> = b.iter().map(|&c| loaded.grid.get(c)).collect();
        if symbols.len() > 1 {
            let (r, c) = b[0].labels();
            return Ok(Some(format!("block at ({r},{c}) holds {symbols:?}")));
        }
    }
    Ok(None)
}

fn fixtures(dir: &Path) -> Result<Status> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| Usage(format!("cannot read {}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut failures = 0;
    let mut checked = 0;
    for path in &paths {
        let text = std::fs::read_to_string(path)?;
        if serde_json::from_str::<Vec<input::Point>>(&text).is_ok() {
            continue;
        }
        checked += 1;
        let name = path.file_stem().unwrap_or_default().to_string_lossy();
        match check_fixture(path) {
            Ok(None) => println!("ok   {name}"),
            Ok(Some(v)) => {
                failures += 1;
                println!("FAIL {name}: {v}");
            }
            Err(e) => {
                failures += 1;
                println!("FAIL {name}: {e:#}");
            }
        }
    }
    println!("checked={checked} failed={failures}");
    Ok(if failures == 0 { Status::Ok } else { Status::Failed })
}
