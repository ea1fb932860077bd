//! Offline re-checking of certificate files.
//!
//! Nothing here repeats a search. Scan witnesses are re-evaluated, Kraus
//! certificates re-run their three checks, sieve pairs are replayed in the
//! recorded order and reduction rounds are recomputed from their parameters.

use crate::cert::{Certificate, Stage, SCHEMA_VERSION};
use crate::commands::{hex, parse_reading, theta};
use crate::{CliError, RunConfig};
use bounds::Approx;
use kraus::KrausCertificate;
use num_bigint::BigUint;
use powertest::PowerWitness;
use seqcore::SeqKind;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};
use sieve::{Outcome, SieveSession, Strategy};
use std::io::Write;
use std::path::Path;
use threelog::{matveev_first_bound, recheck_round, FibSetup, Reduction, ReductionOptions};

/// Checks every line of `path`, printing one JSON verdict per record.
pub fn verify_file(path: &Path, cfg: &RunConfig) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut stdout = std::io::stdout().lock();
    let mut total = 0usize;
    let mut failed = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        total += 1;
        let (stage, verdict) = match serde_json::from_str::<Certificate>(line) {
            Ok(c) => (json!(c.stage), check_certificate(&c, cfg.exec)),
            Err(e) => (Value::Null, Err(format!("malformed record: {e}"))),
        };
        let record = match &verdict {
            Ok(detail) => json!({"line": i + 1, "stage": stage, "ok": true, "detail": detail}),
            Err(why) => json!({"line": i + 1, "stage": stage, "ok": false, "detail": why}),
        };
        writeln!(stdout, "{record}").map_err(|e| CliError::Io(format!("stdout: {e}")))?;
        if verdict.is_err() {
            failed.push(i + 1);
        }
    }
    cfg.progress(format!("verify: {} of {total} records pass", total - failed.len()));
    if total == 0 {
        return Err(CliError::Verification(format!("{}: no certificates", path.display())));
    }
    if !failed.is_empty() {
        return Err(CliError::Verification(format!("{} of {total} records fail (lines {failed:?})", failed.len())));
    }
    Ok(())
}

/// Envelope checks, then the stage-specific recomputation.
pub fn check_certificate(c: &Certificate, exec: arith::Exec) -> Result<String, String> {
    if c.schema != SCHEMA_VERSION {
        return Err(format!("schema {} is not {SCHEMA_VERSION}", c.schema));
    }
    if c.hash != c.payload_hash() {
        return Err("hash does not match the payload".into());
    }
    match c.stage {
        Stage::Scan => check_scan(c),
        Stage::Kraus => check_kraus(c),
        Stage::Sieve => check_sieve(c, exec),
        Stage::Bounds => check_bounds(c),
        Stage::Threelog => check_threelog(c, exec),
    }
}

fn field<T: DeserializeOwned>(v: &Value, key: &str) -> Result<T, String> {
    let x = v.get(key).ok_or_else(|| format!("missing field {key:?}"))?;
    serde_json::from_value(x.clone()).map_err(|e| format!("field {key:?}: {e}"))
}

fn big_hex(s: &str) -> Result<BigUint, String> {
    BigUint::parse_bytes(s.as_bytes(), 16).ok_or_else(|| format!("bad hex {s:?}"))
}

fn check_scan(c: &Certificate) -> Result<String, String> {
    let kind: SeqKind = field(&c.inputs, "kind")?;
    let n: u64 = field(&c.inputs, "n")?;
    if n < powertest::min_index(kind) {
        return Err(format!("index {n} below the scanned range"));
    }
    let pairs: Vec<[u64; 2]> = field(&c.outputs, "witnesses")?;
    let expected = arith::primes_up_to(powertest::exponent_cap(n));
    let got: Vec<u64> = pairs.iter().map(|w| w[0]).collect();
    if got != expected {
        return Err(format!("exponents {got:?} differ from the primes up to {}", powertest::exponent_cap(n)));
    }
    for &[p, l] in &pairs {
        if !powertest::verify_witness(&PowerWitness { kind, n, p, l }) {
            return Err(format!("l = {l} does not witness p = {p}"));
        }
    }
    Ok(format!("{kind} n={n}: {} exponents", pairs.len()))
}

fn check_kraus(c: &Certificate) -> Result<String, String> {
    let mut out = c.outputs.clone();
    out.as_object_mut().ok_or("outputs must be an object")?.insert("elapsed_ms".into(), json!(0));
    let cert: KrausCertificate = serde_json::from_value(out).map_err(|e| format!("certificate: {e}"))?;
    let kind: SeqKind = field(&c.inputs, "kind")?;
    let p: u64 = field(&c.inputs, "p")?;
    let k_max: u64 = field(&c.inputs, "k_max")?;
    if cert.kind != kind || cert.p != p {
        return Err(format!("inputs name {kind} p={p}, certificate is for {} p={}", cert.kind, cert.p));
    }
    if cert.k > k_max {
        return Err(format!("k = {} exceeds k_max = {k_max}", cert.k));
    }
    kraus::verify_certificate(&cert)?;
    if !cert.checks.all() {
        return Err("a recorded check is false".into());
    }
    Ok(format!("{kind} p={p}: k={} l={}", cert.k, cert.l))
}

fn check_sieve(c: &Certificate, exec: arith::Exec) -> Result<String, String> {
    let kind: SeqKind = field(&c.inputs, "kind")?;
    let p: u64 = field(&c.inputs, "p")?;
    let q: u64 = field(&c.inputs, "q")?;
    let ls: Vec<u64> = field(&c.outputs, "l")?;
    let outcome: Outcome = field(&c.outputs, "outcome")?;
    let modulus = big_hex(&field::<String>(&c.outputs, "modulus_hex")?)?;
    let residues: Vec<String> = field(&c.outputs, "residues_hex")?;
    let a = big_hex(&field::<String>(&c.outputs, "a_hex")?)?;
    let stages: Vec<Value> = field(&c.outputs, "stages")?;

    let mut session = SieveSession::new(kind, p, q, &Strategy::default()).map_err(|e| e.to_string())?;
    let mut at = 0usize;
    for st in &stages {
        let upto: usize = field(st, "pairs")?;
        if upto < at || upto > ls.len() {
            return Err(format!("stage pair count {upto} out of order"));
        }
        for &l in &ls[at..upto] {
            session.push(l, exec).map_err(|e| e.to_string())?;
        }
        at = upto;
        if hex(&session.k_s) != field::<String>(st, "modulus_hex")? || session.n_s.len() != field::<usize>(st, "size")?
        {
            return Err(format!("stage ending at {upto} pairs does not replay"));
        }
    }
    for &l in &ls[at..] {
        session.push(l, exec).map_err(|e| e.to_string())?;
    }
    if session.k_s != modulus {
        return Err("modulus does not equal K(S) of the listed pairs".into());
    }
    let replayed: Vec<String> = session.n_s.residues().iter().map(hex).collect();
    if replayed != residues {
        return Err(format!("replayed N(S) has {} classes, certificate lists {}", replayed.len(), residues.len()));
    }
    if session.lower_bound != a {
        return Err(format!("replayed lower bound {} differs from {a}", session.lower_bound));
    }
    if outcome == Outcome::Contradiction {
        let n_max = theta(kind, p).map_err(|e| e.to_string())?.n_max;
        let log_a = bounds::LogMagnitude::from_biguint(&a);
        match log_a.compare(&n_max) {
            Ok(std::cmp::Ordering::Greater) => {}
            Ok(_) => return Err("a does not exceed the index bound".into()),
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(format!("{kind} p={p} q={q}: {} pairs, |N|={}, {outcome:?}", ls.len(), residues.len()))
}

fn check_bounds(c: &Certificate) -> Result<String, String> {
    let kind: SeqKind = field(&c.inputs, "kind")?;
    let p: u64 = field(&c.inputs, "p")?;
    let s = theta(kind, p).map_err(|e| e.to_string())?.summary();
    for (key, fresh) in [("log10_theta", s.log10_theta), ("log10_n_max", s.log10_n_max)] {
        let stored: f64 = field(&c.outputs, key)?;
        if (stored - fresh).abs() > 1e-9 * fresh.abs().max(1.0) {
            return Err(format!("{key}: stored {stored}, recomputed {fresh}"));
        }
    }
    Ok(format!("{kind} p={p}: log10 n_max = {:.6}", s.log10_n_max))
}

fn check_threelog(c: &Certificate, exec: arith::Exec) -> Result<String, String> {
    let log_y: String = field(&c.inputs, "log_y")?;
    let reading: String = field(&c.inputs, "reading")?;
    let tolerance: f64 = field(&c.inputs, "tolerance")?;
    let red: Reduction = serde_json::from_value(c.outputs.clone()).map_err(|e| format!("reduction: {e}"))?;
    let opts = ReductionOptions {
        setup: FibSetup { log_y: Approx::lit(&log_y) },
        reading: parse_reading(&reading).map_err(|e| e.to_string())?,
        tolerance,
        exec,
        ..Default::default()
    };
    let first = matveev_first_bound(&opts.setup).map_err(|e| e.to_string())?;
    if first != red.matveev_bound {
        return Err(format!("first bound {} recomputes as {first}", red.matveev_bound));
    }
    let mut p = first;
    for (i, r) in red.rounds.iter().enumerate() {
        if r.p_in != p {
            return Err(format!("round {} starts at {} instead of {p}", i + 1, r.p_in));
        }
        let fresh = recheck_round(r.p_in, r.l, r.rho, r.m, &opts).map_err(|e| format!("round {}: {e}", i + 1))?;
        if &fresh != r {
            return Err(format!("round {} does not recompute", i + 1));
        }
        p = r.p_out;
    }
    if red.final_bound != p {
        return Err(format!("final bound {} is not the last round's {p}", red.final_bound));
    }
    let settled = red.rounds.last().is_some_and(|r| ((r.p_in - r.p_out) as f64 / r.p_in as f64) < tolerance);
    if red.converged != settled {
        return Err("convergence flag disagrees with the trace".into());
    }
    Ok(format!("{} rounds: p < {}", red.rounds.len(), red.final_bound))
}
