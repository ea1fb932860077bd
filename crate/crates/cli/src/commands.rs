use crate::cert::{CertWriter, Certificate, Stage};
use crate::{
    verify, BoundsArgs, CertifyArgs, CliError, Command, KrausArgs, RunConfig, ScanArgs, SieveArgs, ThreelogCmd,
};
use bounds::{theta_fib, theta_lucas, Approx, ThetaBound};
use num_bigint::BigUint;
use seqcore::SeqKind;
use serde_json::{json, Value};
use sieve::{run_sieve, Checkpoint, SieveSession, Strategy};
use std::path::Path;
use std::time::Instant;
use threelog::{fib_p_reduction, maurice_check, FibSetup, ReductionOptions, ThreeLogParams, ZeroLemmaReading};

pub fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<(), CliError> {
    match cmd {
        Command::Scan(a) => {
            let mut w = CertWriter::open(pick_out(&a.out, cfg)?.as_deref())?;
            let r = scan(a, cfg, &mut w);
            w.finish()?;
            r
        }
        Command::Kraus(a) => {
            let mut w = CertWriter::open(pick_out(&a.out, cfg)?.as_deref())?;
            let r = kraus(a, cfg, &mut w);
            w.finish()?;
            r
        }
        Command::Sieve(a) => {
            let mut w = CertWriter::open(pick_out(&a.out, cfg)?.as_deref())?;
            let r = sieve_cmd(a, cfg, &mut w);
            w.finish()?;
            r
        }
        Command::Bounds(a) => {
            let mut w = CertWriter::open(pick_out(&a.out, cfg)?.as_deref())?;
            let r = bounds_cmd(a, cfg, &mut w);
            w.finish()?;
            r
        }
        Command::Threelog { cmd: ThreelogCmd::Check { params, reading } } => threelog_check(params, reading, cfg),
        Command::Threelog { cmd: ThreelogCmd::Reduce { seq, log_y, reading, tolerance, out } } => {
            let mut w = CertWriter::open(pick_out(out, cfg)?.as_deref())?;
            let r = threelog_reduce(seq, log_y, reading, *tolerance, cfg, &mut w);
            w.finish()?;
            r
        }
        Command::Certify(a) => certify(a, cfg),
        Command::Verify(a) => verify::verify_file(&a.input, cfg),
    }
}

fn pick_out(flag: &Option<std::path::PathBuf>, cfg: &RunConfig) -> Result<Option<std::path::PathBuf>, CliError> {
    cfg.file.pick_opt(flag.clone(), "out")
}

pub fn parse_seq(s: &str) -> Result<SeqKind, CliError> {
    s.parse().map_err(|_| CliError::Config(format!("unknown sequence {s:?} (use fib or lucas)")))
}

fn seq(flag: &Option<String>, cfg: &RunConfig) -> Result<SeqKind, CliError> {
    parse_seq(&cfg.file.pick(flag.clone(), "seq", "fib".to_string())?)
}

pub fn parse_reading(s: &str) -> Result<ZeroLemmaReading, CliError> {
    match s.to_ascii_lowercase().as_str() {
        "proposition" => Ok(ZeroLemmaReading::Proposition),
        "theorem" => Ok(ZeroLemmaReading::Theorem),
        "conjunction" => Ok(ZeroLemmaReading::Conjunction),
        _ => Err(CliError::Config(format!("unknown reading {s:?}"))),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Result<Value, CliError> {
    serde_json::to_value(x).map_err(|e| CliError::Compute(e.to_string()))
}

pub fn scan(a: &ScanArgs, cfg: &RunConfig, w: &mut CertWriter) -> Result<(), CliError> {
    let kind = seq(&a.seq, cfg)?;
    let lo = cfg.file.pick(a.min_n, "min_n", powertest::min_index(kind))?;
    let hi = cfg.file.pick(a.max_n, "max_n", 2000)?;
    if lo < powertest::min_index(kind) || lo > hi {
        return Err(CliError::Config(format!(
            "index range {lo}..={hi} is empty or below {}",
            powertest::min_index(kind)
        )));
    }
    let opts = powertest::ScanOptions {
        l_budget: cfg.file.pick(a.l_budget, "l_budget", powertest::DEFAULT_L_BUDGET)?,
        exec: cfg.exec,
        ..Default::default()
    };
    let start = Instant::now();
    let mut write_err = None;
    let report = powertest::scan_range_with(kind, lo, hi, &opts, |ws| {
        let Some(first) = ws.first() else { return };
        let pairs: Vec<[u64; 2]> = ws.iter().map(|x| [x.p, x.l]).collect();
        let c = Certificate::new(Stage::Scan, json!({"kind": kind, "n": first.n}), json!({"witnesses": pairs}), None);
        if write_err.is_none() {
            write_err = w.write(&c).err();
        }
    })
    .map_err(CliError::Config)?;
    if let Some(e) = write_err {
        return Err(e);
    }
    cfg.progress(format!(
        "scan {kind} n={lo}..={hi}: {} witnesses, {} failures, {:.1}s",
        report.witnesses,
        report.failures.len(),
        start.elapsed().as_secs_f64()
    ));
    if !report.is_clean() {
        return Err(CliError::Verification(format!("no witness for (n, p) in {:?}", report.failures)));
    }
    Ok(())
}

fn kinds(s: &str) -> Result<Vec<SeqKind>, CliError> {
    if s.eq_ignore_ascii_case("both") {
        Ok(vec![SeqKind::Fibonacci, SeqKind::Lucas])
    } else {
        Ok(vec![parse_seq(s)?])
    }
}

pub fn kraus_certificates(
    kind: SeqKind,
    p_min: u64,
    p_max: u64,
    k_max: u64,
    cfg: &RunConfig,
    w: &mut CertWriter,
) -> Result<Vec<u64>, CliError> {
    let primes: Vec<u64> = arith::primes_up_to(p_max).into_iter().filter(|&p| p >= p_min.max(7)).collect();
    let mut missing = Vec::new();
    for r in kraus::sweep(kind, &primes, k_max, cfg.exec) {
        match r {
            Ok(cert) => {
                let mut out = to_value(&cert)?;
                let elapsed = out.as_object_mut().and_then(|o| o.remove("elapsed_ms"));
                let c = Certificate::new(
                    Stage::Kraus,
                    json!({"kind": kind, "p": cert.p, "k_max": k_max}),
                    out,
                    elapsed.map(|e| json!({"elapsed_ms": e})),
                );
                w.write(&c)?;
            }
            Err(nf) => missing.push(nf.p),
        }
    }
    cfg.progress(format!(
        "kraus {kind} p={}..={p_max}: {} certificates, {} missing",
        p_min.max(7),
        primes.len() - missing.len(),
        missing.len()
    ));
    Ok(missing)
}

pub fn kraus(a: &KrausArgs, cfg: &RunConfig, w: &mut CertWriter) -> Result<(), CliError> {
    let ks = kinds(&cfg.file.pick(a.seq.clone(), "seq", "fib".to_string())?)?;
    let p_min = cfg.file.pick(a.p_min, "p_min", 7)?;
    let p_max = cfg.file.pick(a.p_max, "p_max", 1009)?;
    let k_max = cfg.file.pick(a.k_max, "k_max", kraus::DEFAULT_K_MAX)?;
    if p_min > p_max || p_max < 7 || k_max == 0 {
        return Err(CliError::Config(format!("empty range p={p_min}..={p_max}, k <= {k_max}")));
    }
    let mut missing = Vec::new();
    for kind in ks {
        for p in kraus_certificates(kind, p_min, p_max, k_max, cfg, w)? {
            missing.push(format!("{kind} p={p}"));
        }
    }
    if !missing.is_empty() {
        return Err(CliError::Verification(format!("no certificate with k <= {k_max} for {}", missing.join(", "))));
    }
    Ok(())
}

pub fn theta(kind: SeqKind, p: u64) -> Result<ThetaBound, CliError> {
    Ok(match kind {
        SeqKind::Fibonacci => theta_fib(p)?,
        SeqKind::Lucas => theta_lucas(p)?,
    })
}

pub fn hex(x: &BigUint) -> String {
    x.to_str_radix(16)
}

fn sieve_outputs(s: &SieveSession, n_max_log10: f64) -> Value {
    let stages: Vec<Value> = s
        .stages
        .iter()
        .map(|st| {
            json!({
                "modulus_hex": hex(&st.modulus),
                "pairs": st.pairs,
                "size": st.set.len(),
            })
        })
        .collect();
    json!({
        "outcome": s.outcome,
        "l": s.pairs.iter().map(|pr| pr.l).collect::<Vec<_>>(),
        "modulus_hex": hex(&s.k_s),
        "residues_hex": s.n_s.residues().iter().map(hex).collect::<Vec<_>>(),
        "a_hex": hex(&s.lower_bound),
        "a": s.lower_bound.to_string(),
        "log10_a": sieve::session::log10_big(&s.lower_bound),
        "log10_n_max": n_max_log10,
        "stages": stages,
    })
}

pub fn sieve_run(
    kind: SeqKind,
    p: u64,
    q: u64,
    strategy: &Strategy,
    checkpoint: Option<&Path>,
    resume: bool,
    cfg: &RunConfig,
) -> Result<Certificate, CliError> {
    let bound = theta(kind, p)?;
    let mut session = match checkpoint {
        Some(path) if resume && path.exists() => {
            let c = Checkpoint::load(path)?;
            if (c.kind, c.p, c.q) != (kind, p, q) {
                return Err(CliError::Config(format!("checkpoint is for {} p={} q={}", c.kind, c.p, c.q)));
            }
            let mut s = SieveSession::from_checkpoint(&c)?;
            s.resume();
            cfg.progress(format!("resumed at {} pairs, |N|={}", s.pairs.len(), s.n_s.len()));
            s
        }
        _ => SieveSession::new(kind, p, q, strategy)?,
    };
    let start = Instant::now();
    let mut last_size = usize::MAX;
    let outcome = run_sieve(&mut session, &bound.n_max, strategy, checkpoint, |pr| {
        if pr.size != last_size {
            last_size = pr.size;
            cfg.progress(pr);
        }
    })?;
    let log10_n_max = bound.n_max.log10().to_f64();
    cfg.progress(format!(
        "sieve {kind} p={p} q={q}: {outcome:?} after {} pairs, {:.1}s",
        session.pairs.len(),
        start.elapsed().as_secs_f64()
    ));
    let inputs = json!({"kind": kind, "p": p, "q": q, "l_max": strategy.l_max, "patience": strategy.patience});
    Ok(Certificate::new(
        Stage::Sieve,
        inputs,
        sieve_outputs(&session, log10_n_max),
        Some(json!({"elapsed_ms": start.elapsed().as_millis() as u64})),
    ))
}

pub fn sieve_cmd(a: &SieveArgs, cfg: &RunConfig, w: &mut CertWriter) -> Result<(), CliError> {
    let kind = seq(&a.seq, cfg)?;
    let p = cfg.file.pick(a.p, "p", 7)?;
    let q = cfg.file.pick(a.q, "q", 5)?;
    let mut strategy = Strategy { exec: cfg.exec, ..Default::default() };
    strategy.l_max = cfg.file.pick(a.l_max, "l_max", strategy.l_max)?;
    strategy.patience = cfg.file.pick(a.patience, "patience", strategy.patience)?;
    let checkpoint = cfg.file.pick_opt(a.checkpoint.clone(), "checkpoint")?;
    let c = sieve_run(kind, p, q, &strategy, checkpoint.as_deref(), a.resume, cfg)?;
    w.write(&c)
}

pub fn bounds_certificate(kind: SeqKind, p: u64) -> Result<Certificate, CliError> {
    let t = theta(kind, p)?;
    Ok(Certificate::new(Stage::Bounds, json!({"kind": kind, "p": p}), to_value(&t.summary())?, None))
}

pub fn bounds_cmd(a: &BoundsArgs, cfg: &RunConfig, w: &mut CertWriter) -> Result<(), CliError> {
    let kind = seq(&a.seq, cfg)?;
    let p = cfg.file.pick(a.p, "p", 7)?;
    let c = bounds_certificate(kind, p)?;
    cfg.progress(format!("theta {kind} p={p}: log10 n_max = {}", c.outputs["log10_n_max"]));
    w.write(&c)
}

fn threelog_check(params: &Path, reading: &Option<String>, cfg: &RunConfig) -> Result<(), CliError> {
    let text = std::fs::read_to_string(params).map_err(|e| CliError::io(params, e))?;
    let p: ThreeLogParams =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", params.display())))?;
    let reading = parse_reading(&cfg.file.pick(reading.clone(), "reading", "proposition".to_string())?)?;
    let v = maurice_check(&p, reading)?;
    println!("{}", serde_json::to_string_pretty(&v).map_err(|e| CliError::Compute(e.to_string()))?);
    if !v.success {
        let failed: Vec<&str> = v.conditions.iter().filter(|c| !c.holds).map(|c| c.name.as_str()).collect();
        return Err(CliError::Verification(format!("conditions fail: {failed:?}, structural: {:?}", v.structural)));
    }
    Ok(())
}

pub fn reduction_options(
    log_y: Option<String>,
    reading: Option<String>,
    tolerance: Option<f64>,
    cfg: &RunConfig,
) -> Result<ReductionOptions, CliError> {
    let log_y = cfg.file.pick(log_y, "log_y", "1e20".to_string())?;
    match log_y.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 1.0 => {}
        _ => return Err(CliError::Config(format!("log_y must be a number above 1, got {log_y:?}"))),
    }
    let reading = parse_reading(&cfg.file.pick(reading, "reading", "proposition".to_string())?)?;
    let tolerance = cfg.file.pick(tolerance, "tolerance", 0.01)?;
    if !(tolerance > 0.0 && tolerance < 1.0) {
        return Err(CliError::Config("tolerance must lie in (0, 1)".into()));
    }
    Ok(ReductionOptions {
        setup: FibSetup { log_y: Approx::lit(&log_y) },
        reading,
        tolerance,
        exec: cfg.exec,
        ..Default::default()
    })
}

pub fn reduction_certificate(opts: &ReductionOptions, log_y: &str, cfg: &RunConfig) -> Result<Certificate, CliError> {
    let red = fib_p_reduction(opts)?;
    cfg.progress(format!("Matveev: p < {}", red.matveev_bound));
    for (i, r) in red.rounds.iter().enumerate() {
        cfg.progress(format!(
            "round {}: p < {} -> main {} / degenerate {} / S {}: p < {} (L={}, rho={}, m={})",
            i + 1,
            r.p_in,
            r.main_bound,
            r.c3_bound,
            r.s_max,
            r.p_out,
            r.l,
            r.rho,
            r.m
        ));
    }
    let inputs =
        json!({"kind": SeqKind::Fibonacci, "log_y": log_y, "reading": opts.reading, "tolerance": opts.tolerance});
    Ok(Certificate::new(Stage::Threelog, inputs, to_value(&red)?, None))
}

fn threelog_reduce(
    seq_flag: &Option<String>,
    log_y: &Option<String>,
    reading: &Option<String>,
    tolerance: Option<f64>,
    cfg: &RunConfig,
    w: &mut CertWriter,
) -> Result<(), CliError> {
    if seq(seq_flag, cfg)? != SeqKind::Fibonacci {
        return Err(CliError::Config("the reduction is implemented for --seq fib only".into()));
    }
    let opts = reduction_options(log_y.clone(), reading.clone(), tolerance, cfg)?;
    let ly = cfg.file.pick(log_y.clone(), "log_y", "1e20".to_string())?;
    w.write(&reduction_certificate(&opts, &ly, cfg)?)
}

fn certify(a: &CertifyArgs, cfg: &RunConfig) -> Result<(), CliError> {
    let mut w = CertWriter::open(pick_out(&a.out, cfg)?.as_deref())?;
    let max_n = cfg.file.pick(a.max_n, "max_n", 2000)?;
    let p_max = cfg.file.pick(a.p_max, "p_max", 1009)?;
    let mut problems = Vec::new();
    for kind in [SeqKind::Fibonacci, SeqKind::Lucas] {
        let args =
            ScanArgs { seq: Some(kind.short().into()), min_n: None, max_n: Some(max_n), l_budget: None, out: None };
        if let Err(e) = scan(&args, cfg, &mut w) {
            match e {
                CliError::Verification(s) => problems.push(s),
                other => return Err(other),
            }
        }
        for p in kraus_certificates(kind, 7, p_max, kraus::DEFAULT_K_MAX, cfg, &mut w)? {
            problems.push(format!("kraus {kind} p={p}"));
        }
        w.write(&bounds_certificate(kind, 7)?)?;
        let strategy = Strategy { exec: cfg.exec, ..Default::default() };
        w.write(&sieve_run(kind, 7, 5, &strategy, None, false, cfg)?)?;
    }
    let opts = reduction_options(None, None, None, cfg)?;
    w.write(&reduction_certificate(&opts, "1e20", cfg)?)?;
    let n = w.finish()?;
    cfg.progress(format!("certify: {n} certificates"));
    if !problems.is_empty() {
        return Err(CliError::Verification(problems.join("; ")));
    }
    Ok(())
}
