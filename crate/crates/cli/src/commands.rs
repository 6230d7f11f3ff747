use std::fmt::Write as _;

use qline::bounds::{emit_sweep, Grid};
use qline::disjwalk::{
    choose_t, disjointness_with_t, exhaustive_sweep, DisjointnessRun, Verdict, WalkConfig,
};
use qline::infoaudit::{audit_compiled, InputDistribution};
use qline::lineproto::random::{random_protocol, GeneratorConfig};
use qline::lineproto::{self, LineParams, LineProtocol, OutputDistribution};
use qline::qcore::Bits;
use qline::querymodel::{run_query_algorithm, QueryAccount, QueryAlgorithm};
use qline::twoparty::{
    self, communication_total, compile_line_to_two_party, pipeline_schedule, CommAccount,
    TwoPartyProtocol,
};
use qline::Execution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{read, write, CliError, CliResult, Opts};

fn bits(v: &Option<String>, flag: &str) -> CliResult<Bits> {
    Ok(Opts::require(v, flag)?.parse()?)
}

fn emit(o: &Opts, text: &str) -> CliResult<()> {
    match &o.out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_distribution(out: &OutputDistribution) {
    println!("P(output=0)={:.12}", out.p0);
    println!("P(output=1)={:.12}", out.p1);
}

fn line_protocol(o: &Opts) -> CliResult<LineProtocol> {
    if let Some(path) = &o.input {
        return Ok(LineProtocol::parse(&read(path)?)?);
    }
    let params = LineParams::new(
        Opts::require(&o.n, "n")?,
        Opts::require(&o.d, "d")?,
        Opts::require(&o.r, "r (or --in)")?,
        o.b.unwrap_or(1),
        o.s.unwrap_or(0),
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed());
    Ok(random_protocol(
        params,
        &GeneratorConfig::default(),
        &mut rng,
    ))
}

fn padded(p: LineProtocol) -> LineProtocol {
    let before = p.params().r;
    let q = p.pad_to_multiple();
    if q.params().r != before {
        println!("padded to r={}", q.params().r);
    }
    q
}

fn print_comm(acc: &CommAccount) {
    println!("rounds={}", acc.rounds);
    for (k, sender, q) in &acc.per_round {
        println!("round {k} sender={sender} qubits={q}");
    }
    println!("total_qubits={}", acc.total);
}

pub fn simulate_line(o: &Opts) -> CliResult<()> {
    let p = line_protocol(o)?;
    let (x, y) = (bits(&o.x, "x")?, bits(&o.y, "y")?);
    let (out, trace) = lineproto::simulate_line(&p, &x, &y)?;
    println!("protocol {}", p.params());
    print_distribution(&out);
    let mut csv = String::from("t,norm\n");
    for (t, norm) in trace.norms().iter().enumerate() {
        println!("round {t} norm={norm:.12}");
        writeln!(csv, "{t},{norm:.12}").expect("string write");
    }
    if let Some(path) = &o.out {
        write(path, &csv)?;
    }
    Ok(())
}

pub fn compile(o: &Opts) -> CliResult<()> {
    let p = padded(line_protocol(o)?);
    let tp = compile_line_to_two_party(&p)?;
    print_comm(&communication_total(&tp));
    match &o.out {
        Some(path) => write(path, &tp.to_ir()),
        None => {
            print!("{}", tp.to_ir());
            Ok(())
        }
    }
}

pub fn simulate_two_party(o: &Opts) -> CliResult<()> {
    let path = Opts::require(&o.input, "in")?;
    let tp = TwoPartyProtocol::parse(&read(&path)?)?;
    let (x, y) = (bits(&o.x, "x")?, bits(&o.y, "y")?);
    let (out, _) = twoparty::simulate_two_party(&tp, &x, &y)?;
    print_distribution(&out);
    let acc = communication_total(&tp);
    print_comm(&acc);
    if let Some(path) = &o.out {
        write(path, &acc.to_csv())?;
    }
    Ok(())
}

fn distribution(o: &Opts, n: usize) -> CliResult<InputDistribution> {
    let choice = o.mu.clone().unwrap_or_else(|| "uniform".into());
    let mu = match choice.as_str() {
        "uniform" => InputDistribution::uniform_product(n),
        "planted" => InputDistribution::planted_intersection(n),
        "mixture" => InputDistribution::z_mixture(n),
        path => InputDistribution::parse(&read(&path.into())?)?,
    };
    if mu.n() != n {
        return Err(CliError::Usage(format!(
            "distribution is over {}-bit inputs, protocol has n={n}",
            mu.n()
        )));
    }
    Ok(mu)
}

pub fn audit(o: &Opts) -> CliResult<()> {
    let p = padded(line_protocol(o)?);
    let params = *p.params();
    let mu = distribution(o, params.n)?;
    let a = audit_compiled(&p, &mu)?;
    println!("protocol {params}");
    for r in &a.trace.rows {
        println!(
            "t={} I(X:D_t|Z)={:.12} I(Y:C_t|Z)={:.12} bound={} {}",
            r.t,
            r.i_x_dt,
            r.i_y_ct,
            r.bound,
            if r.pass { "ok" } else { "VIOLATED" }
        );
    }
    for t in &a.leakage.terms {
        println!(
            "round {} sender={} qil={:.12} il={:.12}",
            t.k, t.sender, t.qil, t.il
        );
    }
    println!(
        "QIL={:.12} IL={:.12} bound_4r2b_over_d={:.12}",
        a.leakage.qil, a.leakage.il, a.qil_bound
    );
    println!("y_identity_gap={:.3e}", a.y_identity_gap());
    println!("x_identity_gap_strict={:.3e}", a.x_identity_gap_strict());
    println!(
        "x_identity_gap_corrected={:.3e}",
        a.x_identity_gap_corrected()
    );
    if let Some(path) = &o.out {
        write(path, &a.trace.to_csv())?;
    }
    let checks = [
        ("per-round bound", a.trace.all_pass()),
        ("per-round increment", a.trace.steps_within_2b()),
        ("QIL bound", a.qil_ok()),
        ("QIL ≥ IL", a.qil_at_least_il()),
        ("Y-side identity", a.y_identity_gap() < 1e-8),
        ("X-side identity", a.x_identity_gap_corrected() < 1e-8),
        ("block terms", a.block_terms_bounded()),
    ];
    let failed: Vec<&str> = checks
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(n, _)| *n)
        .collect();
    if failed.is_empty() {
        println!("all bounds hold");
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "bounds violated: {}",
            failed.join(", ")
        )))
    }
}

fn walk_config(o: &Opts) -> WalkConfig {
    let def = WalkConfig::default();
    WalkConfig {
        c_eps: o.c_eps.unwrap_or(def.c_eps),
        c_delta: o.c_delta.unwrap_or(def.c_delta),
        c: o.c.unwrap_or(def.c),
    }
}

fn print_account(acc: &QueryAccount) {
    println!(
        "rounds={} queries_x={} queries_y={} delay_d_complexity={}",
        acc.rounds,
        acc.queries_x,
        acc.queries_y,
        acc.delay_d_complexity()
    );
}

pub fn disjointness(o: &Opts) -> CliResult<()> {
    let (x, y) = (bits(&o.x, "x")?, bits(&o.y, "y")?);
    let n = o.n.unwrap_or(x.len());
    if x.len() != n || y.len() != n {
        return Err(CliError::Usage(format!(
            "--x and --y must have length n={n}"
        )));
    }
    let d = Opts::require(&o.d, "d")?;
    let t = match o.t {
        Some(t) => t,
        None => choose_t(n, d)?,
    };
    let run: DisjointnessRun = disjointness_with_t(n, d, t, &x, &y, &walk_config(o))?;
    println!(
        "n={n} d={d} t={t} eps={:.12} delta={:.12} iterations={} walk_steps={} checking_queries={}",
        run.params.eps,
        run.params.delta,
        run.params.iterations,
        run.params.walk_steps_per_iteration,
        run.checking_queries
    );
    let mark = if run.p_success >= 2.0 / 3.0 {
        " ≥ 2/3"
    } else {
        " < 2/3"
    };
    match run.verdict() {
        Verdict::Intersecting => println!("intersecting, p_success={:.12}{mark}", run.p_success),
        Verdict::Disjoint => println!("disjoint, p_success={:.12}{mark}", run.p_success),
    }
    print_account(&run.account);
    println!("round_cost={:.12}", run.round_cost);
    if let Some(path) = &o.out {
        write(
            path,
            &format!("{}\n{}\n", DisjointnessRun::CSV_HEADER, run.csv_row()),
        )?;
    }
    Ok(())
}

pub fn query_run(o: &Opts) -> CliResult<()> {
    let path = Opts::require(&o.input, "in")?;
    let alg = QueryAlgorithm::parse(&read(&path)?)?;
    let (x, y) = (bits(&o.x, "x")?, bits(&o.y, "y")?);
    let (out, acc) = run_query_algorithm(&alg, &x, &y, o.d.unwrap_or(1))?;
    print_distribution(&out);
    print_account(&acc);
    if let Some(path) = &o.out {
        write(path, &acc.to_csv())?;
    }
    Ok(())
}

fn grid(o: &Opts) -> CliResult<Grid> {
    match &o.grid {
        Some(g) => Ok(g.parse()?),
        None => Ok(Grid {
            n: vec![Opts::require(&o.n, "grid (or --n)")?],
            d: vec![Opts::require(&o.d, "d")?],
            b: vec![o.b.unwrap_or(1)],
        }),
    }
}

pub fn bounds(o: &Opts) -> CliResult<()> {
    emit(o, &emit_sweep(&grid(o)?, Execution::Parallel)?)
}

fn disjointness_sweep(o: &Opts) -> CliResult<String> {
    let g = grid(o)?;
    let cfg = walk_config(o);
    let mut csv = String::from(
        "n,d,t,pairs,min_success,max_false_positive,accounts_match,queries_x,queries_y,rounds\n",
    );
    for &n in &g.n {
        for &d in g.d.iter().filter(|&&d| d <= n) {
            let s = exhaustive_sweep(n, d, &cfg, Execution::Parallel)?;
            writeln!(
                csv,
                "{},{},{},{},{:.12},{:.12},{},{},{},{}",
                s.n,
                s.d,
                s.t,
                s.pairs,
                s.min_success,
                s.max_false_positive,
                s.accounts_match,
                s.account.queries_x,
                s.account.queries_y,
                s.account.rounds
            )
            .expect("string write");
        }
    }
    Ok(csv)
}

fn pipeline_sweep(o: &Opts) -> CliResult<String> {
    let g = grid(o)?;
    let mut csv = String::from("n,d,b,waves,rounds,bound,within\n");
    for p in g.points() {
        let waves = ((p.n as f64 / p.d as f64).sqrt()).ceil() as usize;
        let rounds = pipeline_schedule(waves, p.d, p.d, p.b)?;
        let bound = 2.0 * ((p.n * p.d) as f64).sqrt() + p.d as f64;
        writeln!(
            csv,
            "{},{},{},{waves},{rounds},{bound:.9},{}",
            p.n,
            p.d,
            p.b,
            rounds as f64 <= bound
        )
        .expect("string write");
    }
    Ok(csv)
}

pub fn sweep(o: &Opts) -> CliResult<()> {
    let text = match o.kind.as_deref().unwrap_or("bounds") {
        "bounds" => emit_sweep(&grid(o)?, Execution::Parallel)?,
        "disjointness" => disjointness_sweep(o)?,
        "pipeline" => pipeline_sweep(o)?,
        other => return Err(CliError::Usage(format!("unknown sweep kind `{other}`"))),
    };
    emit(o, &text)
}
