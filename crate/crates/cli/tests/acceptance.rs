//! Acceptance criteria, one line each. Exits nonzero if any fails.
//!
//! Oracles here are written independently of the library routines they
//! check: brute-force subset loops, direct rational sums, and a separate
//! recursion for the teaching budget.

use std::process::{Command, ExitCode};
use std::time::Instant;

use udtfs_core::rational::{self, ratio, Rational};
use udtfs_core::{
    eval_exists, eval_forall, find_approximation, isolate, isolate_under_constraint,
    make_template, min_teaching_set, solver_by_name, t_budget, BitRow, Certificate, Compressor,
    GameMatrix, Measure, Multiset, PipelineConfig, SetSystem, Sign, SignedTuple,
};
use udtfs_corpus::{standard_corpus, FamilySpec};

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

struct Corpus {
    specs: Vec<FamilySpec>,
    systems: Vec<SetSystem>,
}

impl Corpus {
    fn load() -> Corpus {
        let specs: Vec<FamilySpec> = standard_corpus();
        let systems = specs.iter().map(|s| s.generate().expect("corpus spec")).collect();
        Corpus { specs, systems }
    }

    fn iter(&self) -> impl Iterator<Item = (&FamilySpec, &SetSystem)> {
        self.specs.iter().zip(&self.systems)
    }
}

fn subsets(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max.min(n) {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s.last().map_or(0, |&l: &usize| l + 1);
            for c in start..n {
                let mut t = s.clone();
                t.push(c);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn trace_set(s: &SetSystem, pts: &[usize]) -> std::collections::HashSet<Vec<bool>> {
    s.rows().iter().map(|r| pts.iter().map(|&p| r.get(p)).collect()).collect()
}

fn brute_vc(s: &SetSystem) -> usize {
    // shattering is hereditary, so grow the size until nothing is shattered
    let distinct = trace_set(s, &(0..s.n_columns()).collect::<Vec<_>>()).len();
    let mut d = 0;
    while d < s.n_columns() && 2usize << d <= distinct {
        let shattered = exact_subsets(s.n_columns(), d + 1)
            .iter()
            .any(|x| trace_set(s, x).len() == 1 << x.len());
        if !shattered {
            break;
        }
        d += 1;
    }
    d
}

fn exact_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for c in start..n {
            cur.push(c);
            rec(n, k, c + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

fn t_oracle(n: u64) -> u64 {
    let mut t = 0u64;
    for i in 1..=n {
        t += (1u64 << i) * (i - 1) + 1;
    }
    t
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

struct CertRun {
    spec: String,
    system: SetSystem,
    types: Vec<BitRow>,
    certs: Vec<Certificate>,
    values: Vec<Rational>,
    games: Vec<(GameMatrix, Measure, Measure, Rational)>,
    margins: Vec<Rational>,
    n_used: Vec<usize>,
}

fn run_pipeline(corpus: &Corpus, config: &PipelineConfig) -> Result<Vec<CertRun>, String> {
    let mut runs = Vec::new();
    for (spec, s) in corpus.iter() {
        if s.vc_dim() > 3 || s.n_columns() > 14 || s.n_rows() > 256 || s.n_columns() < 2 {
            continue;
        }
        let c = Compressor::new(s, config.clone()).map_err(|e| format!("{spec}: {e}"))?;
        let mut run = CertRun {
            spec: spec.to_string(),
            system: s.clone(),
            types: vec![],
            certs: vec![],
            values: vec![],
            games: vec![],
            margins: vec![],
            n_used: vec![],
        };
        for p in s.realized_types() {
            let out = c.compress(&p).map_err(|e| format!("{spec} type {}: {e}", p.bits))?;
            let b = out.pool.agreement_matrix(s, &p).map_err(|e| e.to_string())?;
            run.types.push(p.bits.clone());
            run.values.push(out.game.value.clone());
            run.games.push((b, out.game.nu.clone(), out.game.mu.clone(), out.game.value.clone()));
            run.margins.push(out.committee.margin.clone());
            run.n_used.push(out.n_used);
            run.certs.push(out.certificate);
        }
        runs.push(run);
    }
    Ok(runs)
}

fn votes(cert: &Certificate, a: usize) -> usize {
    cert.traces().iter().filter(|t| t.get(a)).count()
}

fn criterion_1(runs: &[CertRun], elapsed_ms: u128) -> Outcome {
    let mut types = 0;
    let mut mismatches = 0;
    for run in runs {
        for (cert, p) in run.certs.iter().zip(&run.types) {
            types += 1;
            let decoded: Vec<bool> = (0..run.system.n_columns())
                .map(|a| 2 * votes(cert, a) > cert.m())
                .collect();
            if decoded != p.iter().collect::<Vec<_>>() {
                mismatches += 1;
            }
        }
    }
    let detail = format!(
        "{} systems, {types} types, {mismatches} mismatches, {elapsed_ms} ms (limit 60000)",
        runs.len()
    );
    if mismatches == 0 && runs.len() >= 15 && elapsed_ms < 60_000 {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn criterion_2(runs: &[CertRun]) -> Outcome {
    let mut checks = 0;
    let mut bad = Vec::new();
    for run in runs {
        for cert in &run.certs {
            for a in 0..run.system.n_columns() {
                checks += 1;
                if eval_exists(cert, a) != eval_forall(&run.system, cert, a) {
                    bad.push(format!("{} col {a}", run.spec));
                }
            }
        }
    }
    if bad.is_empty() {
        pass(format!("{checks} column evaluations agree"))
    } else {
        fail(format!("{} disagreements, first {}", bad.len(), bad[0]))
    }
}

fn strict_majority_everywhere(run: &CertRun) -> Option<(usize, Rational)> {
    let mut worst: Option<Rational> = None;
    for (cert, p) in run.certs.iter().zip(&run.types) {
        let m = cert.m();
        for a in 0..run.system.n_columns() {
            let ones = votes(cert, a);
            let agree = if p.get(a) { ones } else { m - ones };
            if 2 * agree <= m {
                return None;
            }
            let frac = ratio(agree as i64, m as i64);
            if worst.as_ref().is_none_or(|w| frac < *w) {
                worst = Some(frac);
            }
        }
    }
    Some((run.certs.len(), worst.unwrap_or_else(|| ratio(1, 1))))
}

fn criterion_3(exact: &[CertRun], approx: &[CertRun]) -> Outcome {
    let floor = ratio(25, 48);
    let mut worst_exact = ratio(1, 1);
    for run in exact {
        match strict_majority_everywhere(run) {
            Some((_, w)) => worst_exact = worst_exact.min(w),
            None => return fail(format!("{}: no strict majority somewhere (exact)", run.spec)),
        }
    }
    let mut worst_approx = ratio(1, 1);
    for run in approx {
        match strict_majority_everywhere(run) {
            Some((_, w)) => worst_approx = worst_approx.min(w),
            None => return fail(format!("{}: no strict majority somewhere (approx)", run.spec)),
        }
    }
    let detail = format!(
        "min margin exact {}, approx {} (floor 25/48)",
        rational::format(&worst_exact),
        rational::format(&worst_approx)
    );
    if worst_approx >= floor && worst_exact > ratio(1, 2) {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn criterion_4(corpus: &Corpus) -> Outcome {
    let values: Vec<u64> = (0..4).map(t_budget).collect();
    if values != [0, 1, 6, 23] {
        return fail(format!("t(0..3) = {values:?}"));
    }
    for n in 0..12 {
        if t_budget(n as usize) != t_oracle(n) {
            return fail(format!("t({n}) differs from the recursion"));
        }
    }
    let mut worst_slack = u64::MAX;
    for (spec, s) in corpus.iter() {
        let vc = brute_vc(s);
        let ts = isolate(s);
        let size = ts.points.len() as u64;
        if size > t_oracle(vc as u64) {
            return fail(format!("{spec}: |points| {size} > t({vc})"));
        }
        worst_slack = worst_slack.min(t_oracle(vc as u64) - size);
        let concept = s.row(ts.concept);
        let unique = s
            .rows()
            .iter()
            .all(|r| r == concept || ts.points.as_slice().iter().any(|&p| r.get(p) != concept.get(p)));
        if !unique {
            return fail(format!("{spec}: isolated row not unique on its points"));
        }
        match min_teaching_set(s, ts.concept) {
            Ok(min) if min.len() as u64 <= size => {}
            Ok(min) => return fail(format!("{spec}: oracle {} exceeds {size}", min.len())),
            Err(e) => return fail(format!("{spec}: oracle refused: {e}")),
        }
    }
    pass(format!(
        "t(0..3) = (0, 1, 6, 23); {} systems within t(vc), tightest slack {worst_slack}",
        corpus.systems.len()
    ))
}

fn criterion_5(corpus: &Corpus) -> Outcome {
    let mut count = 0usize;
    for (spec, s) in corpus.iter() {
        let dual_vc = brute_vc(&s.dual());
        for cols in subsets(s.n_columns(), 3) {
            for signs in 0..1u32 << cols.len() {
                let chi = SignedTuple::new(
                    cols.iter()
                        .enumerate()
                        .map(|(i, &c)| (c, if signs >> i & 1 == 0 { Sign::Pos } else { Sign::Neg }))
                        .collect(),
                );
                let consistent = s.rows().iter().any(|r| {
                    chi.pairs().iter().all(|&(c, sg)| r.get(c) == (sg == Sign::Pos))
                });
                if !consistent {
                    continue;
                }
                count += 1;
                let iso = match isolate_under_constraint(s, &chi) {
                    Ok(iso) => iso,
                    Err(e) => return fail(format!("{spec} {chi}: {e}")),
                };
                let budget = t_oracle((1u64 << (dual_vc + 1)) - 1) + chi.len() as u64;
                if iso.k_budget != budget || iso.a0.len() as u64 > budget {
                    return fail(format!("{spec} {chi}: |A0| {} budget {}", iso.a0.len(), budget));
                }
                let p0 = &iso.p0.bits;
                if !chi.pairs().iter().all(|&(c, sg)| p0.get(c) == (sg == Sign::Pos)) {
                    return fail(format!("{spec} {chi}: p0 violates the constraint"));
                }
                let determined = s.rows().iter().all(|r| {
                    r == p0 || iso.a0.as_slice().iter().any(|&a| r.get(a) != p0.get(a))
                });
                if !determined {
                    return fail(format!("{spec} {chi}: A0-trace does not determine p0"));
                }
            }
        }
    }
    pass(format!("{count} consistent constraints of length <= 3 verified"))
}

fn criterion_6(runs: &[CertRun]) -> Outcome {
    let id = GameMatrix::from_strs(&["10", "01"]).expect("matrix");
    let exact = solver_by_name("exact-lp", &ratio(1, 48)).expect("solver");
    let id_value = match exact.solve(&id) {
        Ok(s) => s.value,
        Err(e) => return fail(format!("identity: {e}")),
    };
    if id_value != ratio(1, 2) {
        return fail(format!("identity value {}", rational::format(&id_value)));
    }
    let mut games = 0;
    let two_thirds = ratio(2, 3);
    for run in runs {
        for ((b, nu, mu, value), n) in run.games.iter().zip(&run.n_used) {
            games += 1;
            let lower = (0..b.n_rows())
                .map(|i| {
                    (0..b.n_cols())
                        .filter(|&j| b.get(i, j))
                        .fold(ratio(0, 1), |acc, j| acc + &nu.weights()[j])
                })
                .min()
                .expect("rows");
            let upper = (0..b.n_cols())
                .map(|j| {
                    (0..b.n_rows())
                        .filter(|&i| b.get(i, j))
                        .fold(ratio(0, 1), |acc, i| acc + &mu.weights()[i])
                })
                .max()
                .expect("cols");
            if lower != upper || &lower != value {
                return fail(format!("{}: duality gap {}", run.spec, rational::format(&(upper - lower))));
            }
            if *value < two_thirds || *n > run.system.n_columns() {
                return fail(format!("{}: value {} at N {n}", run.spec, rational::format(value)));
            }
        }
    }
    pass(format!("identity value 1/2; {games} games with zero gap and value >= 2/3"))
}

fn deviation_oracle(weights: &[Rational], counts: &[u64], set: &[bool]) -> Rational {
    let size: u64 = counts.iter().sum();
    let mut mu = ratio(0, 1);
    let mut hits = 0u64;
    for ((w, &c), &inside) in weights.iter().zip(counts).zip(set) {
        if inside {
            mu += w;
            hits += c;
        }
    }
    let d = mu - ratio(hits as i64, size as i64);
    if d < ratio(0, 1) {
        -d
    } else {
        d
    }
}

fn criterion_7(corpus: &Corpus) -> Outcome {
    use rand::{Rng, SeedableRng};
    let mut verified = 0;
    for (spec, s) in corpus.iter() {
        let fam = s.symmetric_difference_family();
        for sys in [s, &fam] {
            let mu = Measure::uniform(sys.n_columns());
            for (eps, budget) in [(ratio(1, 3), 64), (ratio(1, 4), 64), (ratio(1, 8), 256)] {
                let y = match find_approximation(sys, &mu, &eps, budget, 1) {
                    Ok(y) => y,
                    Err(e) => return fail(format!("{spec} eps {}: {e}", rational::format(&eps))),
                };
                let mut counts = vec![0u64; sys.n_columns()];
                for &(i, c) in y.pairs() {
                    counts[i] += c;
                }
                for r in sys.rows() {
                    let set: Vec<bool> = r.iter().collect();
                    if deviation_oracle(mu.weights(), &counts, &set) > eps {
                        return fail(format!("{spec}: returned multiset misses eps"));
                    }
                }
                verified += 1;
            }
        }
    }

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    for inst in 0..200 {
        let cols = rng.gen_range(1..10);
        let raw: Vec<i64> = (0..cols).map(|_| rng.gen_range(0..6)).collect();
        let total: i64 = raw.iter().sum::<i64>().max(1);
        let mut weights: Vec<Rational> = raw.iter().map(|&w| ratio(w, total)).collect();
        if raw.iter().all(|&w| w == 0) {
            weights[0] = ratio(1, 1);
        }
        let counts: Vec<u64> = (0..cols).map(|_| rng.gen_range(0..4)).collect();
        let mut counts = counts;
        if counts.iter().all(|&c| c == 0) {
            counts[0] = 1;
        }
        let set: Vec<bool> = (0..cols).map(|_| rng.gen_bool(0.5)).collect();
        let comp: Vec<bool> = set.iter().map(|b| !b).collect();
        let d1 = deviation_oracle(&weights, &counts, &set);
        let d2 = deviation_oracle(&weights, &counts, &comp);
        if d1 != d2 {
            return fail(format!("complement asymmetry on instance {inst}"));
        }
        // the library agrees with the oracle on both sides
        let m = Measure::new(weights.clone()).expect("measure");
        let y = Multiset::from_counts(&counts).expect("multiset");
        let lib = udtfs_core::approx::deviation(&m, &y, &BitRow::from_bools(set.iter().copied()));
        if lib != d1 {
            return fail(format!("library deviation differs on instance {inst}"));
        }
    }
    pass(format!("{verified} returned multisets re-verified; 200 complement instances exact"))
}

fn criterion_8(corpus: &Corpus) -> Outcome {
    let mut checked = 0;
    for (spec, s) in corpus.iter() {
        let vc = brute_vc(s);
        for x in subsets(s.n_columns(), 6) {
            let traces = trace_set(s, &x).len();
            let bound: usize = (0..=vc.min(x.len())).map(|i| binom(x.len(), i)).sum();
            if traces > bound {
                return fail(format!("{spec}: {traces} traces on {x:?} > {bound}"));
            }
            checked += 1;
        }
        let dual_vc = brute_vc(&s.dual());
        if dual_vc >= 1 << (vc + 1) {
            return fail(format!("{spec}: dual vc {dual_vc} >= 2^{}", vc + 1));
        }
    }
    pass(format!("{checked} point sets within the Sauer-Shelah bound; dual bound on all systems"))
}

fn criterion_9(runs: &[CertRun]) -> Outcome {
    use num_bigint::BigUint;
    for run in runs {
        let (template, padded) = match make_template(&run.system, &run.certs) {
            Ok(t) => t,
            Err(e) => return fail(format!("{}: {e}", run.spec)),
        };
        for (p, c) in padded.iter().zip(&run.certs) {
            let orig: Vec<bool> = (0..run.system.n_columns()).map(|a| 2 * votes(c, a) > c.m()).collect();
            match p.decode(&run.system) {
                Ok(d) if d.iter().collect::<Vec<_>>() == orig => {}
                _ => return fail(format!("{}: padded decode differs", run.spec)),
            }
        }
        let distinct = run.types.len();
        let bound = BigUint::from(run.system.n_columns()).pow(template.k_param as u32);
        if BigUint::from(distinct) > bound {
            return fail(format!("{}: {distinct} types > {}^{}", run.spec, run.system.n_columns(), template.k_param));
        }
    }
    for d in 2..=5usize {
        let s: SetSystem = format!("powerset({d})").parse::<FamilySpec>().expect("spec").generate().expect("gen");
        let all: Vec<usize> = (0..d).collect();
        if trace_set(&s, &all).len() != 1 << d {
            return fail(format!("powerset({d}) trace count"));
        }
        let report = udtfs_core::count_types_check(&s, 1).expect("report");
        if report.witness_traces != 1 << d || report.vc != d {
            return fail(format!("powerset({d}) shattered witness"));
        }
    }
    pass(format!("{} systems: types <= |A|^K; powerset(2..5) traces = 2^d", runs.len()))
}

fn criterion_10(corpus: &Corpus) -> Outcome {
    let dir = tempfile::tempdir().expect("tempdir");
    let specfile = dir.path().join("corpus.txt");
    let text: String = corpus.specs.iter().map(|s| format!("{s}\n")).collect();
    std::fs::write(&specfile, text).expect("write specs");
    let mut outputs = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("run{i}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_udtfs"))
            .args(["experiment", specfile.to_str().unwrap(), "-o", out.to_str().unwrap(), "--seed", "7"])
            .status()
            .expect("run udtfs");
        if !status.success() {
            return fail(format!("experiment run {i} exited with {status}"));
        }
        outputs.push(std::fs::read(&out).expect("read csv"));
    }
    if outputs[0] == outputs[1] {
        pass(format!("two runs, {} identical bytes", outputs[0].len()))
    } else {
        fail("CSV outputs differ")
    }
}

fn main() -> ExitCode {
    let corpus = Corpus::load();
    let start = Instant::now();
    let exact_cfg = PipelineConfig { solver: "exact-lp".into(), ..PipelineConfig::default() };
    let exact = run_pipeline(&corpus, &exact_cfg);
    let elapsed = start.elapsed().as_millis();
    let approx_cfg = PipelineConfig {
        solver: "approx-mwu".into(),
        tolerance: ratio(1, 48),
        ..PipelineConfig::default()
    };
    let approx = run_pipeline(&corpus, &approx_cfg);

    let pipeline = |f: &dyn Fn(&[CertRun]) -> Outcome| match &exact {
        Ok(runs) => f(runs),
        Err(e) => fail(format!("pipeline error: {e}")),
    };

    let results: Vec<(&str, Outcome)> = vec![
        ("1 roundtrip", pipeline(&|r| criterion_1(r, elapsed))),
        ("2 exists/forall equivalence", pipeline(&criterion_2)),
        (
            "3 majority margin",
            match (&exact, &approx) {
                (Ok(e), Ok(a)) => criterion_3(e, a),
                (Err(e), _) | (_, Err(e)) => fail(format!("pipeline error: {e}")),
            },
        ),
        ("4 teaching budgets", criterion_4(&corpus)),
        ("5 constraint isolation", criterion_5(&corpus)),
        ("6 game certification", pipeline(&criterion_6)),
        ("7 approximation soundness", criterion_7(&corpus)),
        ("8 combinatorial bounds", criterion_8(&corpus)),
        ("9 type counting", pipeline(&criterion_9)),
        ("10 determinism", criterion_10(&corpus)),
    ];

    let mut all = true;
    for (name, o) in &results {
        all &= o.ok;
        println!("[{}] {name}: {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
