//! Benchmark corpus generation and the CSV measurement harness.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};
use std::fmt::Write;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigUint;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{ArityHistogram, Gate};
use crate::error::{Error, Result};
use crate::limtdd::{self, DiagramStore};
use crate::sim::{self, DenseState, Parallelism, SIM_MAX_QUBITS};
use crate::synth;

/// Identifier of the corpus PRNG, recorded in every CSV.
pub const PRNG_NAME: &str = "chacha8";

pub const CSV_HEADER: &str = "n,seed,depth,build_ms,synth_ms,nodes,reduced_paths,g1,g2,g3,g4plus,fidelity,status";

/// Fidelity below `1 - FIDELITY_TOL` fails a record.
pub const FIDELITY_TOL: f64 = 1e-9;

fn hadamard() -> Gate {
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    Gate::unitary([s, s, s, -s], 0)
}

fn on(mut g: Gate, q: usize) -> Gate {
    g.target = q;
    g
}

fn run_gates(n: usize, gates: impl IntoIterator<Item = Gate>) -> Vec<Complex64> {
    let mut state = DenseState::zero(n).expect("corpus register fits the simulator");
    for g in gates {
        state.apply_gate_with(&g, Parallelism::Sequential).expect("corpus gates are in range");
    }
    state.into_amplitudes()
}

/// Applies `num_gates` gates drawn uniformly from {H, S, T, CX} to `|0…0⟩`.
/// CX is not drawn when `n == 1`.
pub fn random_clifford_t_state(n: usize, num_gates: usize, seed: u64) -> Vec<Complex64> {
    assert!(n >= 1, "need at least one qubit");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kinds = if n == 1 { 3 } else { 4 };
    let gates: Vec<Gate> = (0..num_gates)
        .map(|_| match rng.random_range(0..kinds) {
            0 => on(hadamard(), rng.random_range(0..n)),
            1 => Gate::phase(FRAC_PI_2, rng.random_range(0..n)),
            2 => Gate::phase(FRAC_PI_4, rng.random_range(0..n)),
            _ => {
                let c = rng.random_range(0..n);
                let mut t = rng.random_range(0..n - 1);
                if t >= c {
                    t += 1;
                }
                Gate::x(t).ctrl(c)
            }
        })
        .collect();
    let mut v = run_gates(n, gates);
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut v {
        *a /= norm;
    }
    v
}

/// H on every qubit, then CZ on every pair.
pub fn vn_family_state(n: usize) -> Vec<Complex64> {
    assert!(n >= 1, "need at least one qubit");
    let hs = (0..n).map(|q| on(hadamard(), q));
    let czs = (1..n).flat_map(|k| (0..k).map(move |j| Gate::z(j).ctrl(k)));
    run_gates(n, hs.chain(czs).collect::<Vec<_>>())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    CliffordT,
    Vn,
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "clifford-t" => Ok(Family::CliffordT),
            "vn" => Ok(Family::Vn),
            other => Err(format!("unknown family {other:?} (expected clifford-t or vn)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Failed,
    SkippedVerify,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "OK",
            Status::Failed => "FAILED",
            Status::SkippedVerify => "SKIPPED_VERIFY",
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub family: Family,
    pub n_min: usize,
    pub n_max: usize,
    pub instances: usize,
    /// Clifford+T gate count; `None` means `3n²`.
    pub gates: Option<usize>,
    pub seed: u64,
    /// Largest state size whose preparation is simulated.
    pub verify_max_n: usize,
    pub tol: f64,
    pub parallel: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            family: Family::CliffordT,
            n_min: 4,
            n_max: 10,
            instances: 20,
            gates: None,
            seed: 0,
            verify_max_n: SIM_MAX_QUBITS - 1,
            tol: crate::lim::TOL,
            parallel: true,
        }
    }
}

impl BenchConfig {
    /// Parses `key = value` lines; `#` starts a comment. Unknown keys are
    /// errors so typos do not silently fall back to defaults.
    pub fn parse(text: &str) -> Result<BenchConfig> {
        let mut cfg = BenchConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let l = raw.split('#').next().unwrap_or("").trim();
            if l.is_empty() {
                continue;
            }
            let (key, value) =
                l.split_once('=').ok_or(Error::Parse { line, msg: format!("expected key=value, found {l:?}") })?;
            cfg.set(key.trim(), value.trim()).map_err(|msg| Error::Parse { line, msg })?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        fn num<T: FromStr>(key: &str, v: &str) -> std::result::Result<T, String> {
            v.parse().map_err(|_| format!("bad value {v:?} for {key}"))
        }
        match key {
            "family" => self.family = value.parse()?,
            "n_min" => self.n_min = num(key, value)?,
            "n_max" => self.n_max = num(key, value)?,
            "n" => {
                let (lo, hi) = match value.split_once("..") {
                    Some((a, b)) => (num(key, a)?, num(key, b.trim_start_matches('='))?),
                    None => {
                        let v = num(key, value)?;
                        (v, v)
                    }
                };
                self.n_min = lo;
                self.n_max = hi;
            }
            "instances" => self.instances = num(key, value)?,
            "gates" => self.gates = Some(num(key, value)?),
            "seed" => self.seed = num(key, value)?,
            "verify_max_n" => self.verify_max_n = num(key, value)?,
            "tol" => self.tol = num(key, value)?,
            "parallel" => self.parallel = num(key, value)?,
            other => return Err(format!("unknown key {other:?}")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_min == 0 {
            return Err(Error::Contract("n must be at least 1".into()));
        }
        if self.n_max > SIM_MAX_QUBITS {
            return Err(Error::TooManyQubits { requested: self.n_max, limit: SIM_MAX_QUBITS });
        }
        if !(self.tol > 0.0 && self.tol <= 1e-3) {
            return Err(Error::Contract(format!("tolerance {} outside (0, 1e-3]", self.tol)));
        }
        Ok(())
    }

    pub fn depth(&self, n: usize) -> usize {
        match self.family {
            Family::CliffordT => self.gates.unwrap_or(3 * n * n),
            Family::Vn => n * (n - 1) / 2 + n,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchRecord {
    pub n: usize,
    pub seed: u64,
    pub depth: usize,
    pub build_ms: f64,
    pub synth_ms: f64,
    pub node_count: usize,
    pub reduced_paths: BigUint,
    pub histogram: ArityHistogram,
    pub fidelity: Option<f64>,
    pub node_visits: usize,
    pub budget_violations: Vec<String>,
    pub status: Status,
}

/// Gate-count and visit budgets in terms of `n` qubits and `p` reduced paths.
/// Returns one message per violated budget.
pub fn budget_violations(n: usize, p: &BigUint, hist: &ArityHistogram, visits: usize) -> Vec<String> {
    let n_big = BigUint::from(n);
    let checks = [
        ("arity>=4", hist.at_least(4), BigUint::from(3u32) * p),
        ("3q", hist.get(3), &n_big * &n_big * p),
        ("2q", hist.get(2), BigUint::from(3u32) * &n_big * p),
        ("1q", hist.get(1), &n_big + BigUint::from(2u32) * p),
        ("visits", visits, &n_big * p + BigUint::from(1u32)),
    ];
    checks
        .into_iter()
        .filter(|(_, got, bound)| BigUint::from(*got) > *bound)
        .map(|(name, got, bound)| format!("{name}: {got} > {bound}"))
        .collect()
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

pub fn run_instance(cfg: &BenchConfig, n: usize, seed: u64) -> Result<BenchRecord> {
    let depth = cfg.depth(n);
    let psi = match cfg.family {
        Family::CliffordT => random_clifford_t_state(n, depth, seed),
        Family::Vn => vn_family_state(n),
    };

    let t = Instant::now();
    let mut store = DiagramStore::with_tolerance(cfg.tol);
    let root = limtdd::from_statevector(&mut store, &psi, cfg.tol)?;
    let build_ms = ms(t);

    let t = Instant::now();
    let (reduction, report) = synth::synthesize_reduction(&store, &root)?;
    let prep = synth::preparation_from(&reduction, &report, false);
    let synth_ms = ms(t);

    let node_count = limtdd::node_count(&store, &root);
    let reduced_paths = limtdd::reduced_path_count(&store, &root);
    let budget = budget_violations(n, &reduced_paths, &report.histogram, report.node_visits);

    let fidelity = if n <= cfg.verify_max_n && n < SIM_MAX_QUBITS {
        let out = sim::run(&prep, DenseState::basis(n + 1, 1 << n)?)?;
        let want = DenseState::with_ancilla_one(&psi)?;
        Some(sim::fidelity(&out, &want)?)
    } else {
        None
    };
    let status = match fidelity {
        _ if !budget.is_empty() => Status::Failed,
        Some(f) if f < 1.0 - FIDELITY_TOL => Status::Failed,
        Some(_) => Status::Ok,
        None => Status::SkippedVerify,
    };
    Ok(BenchRecord {
        n,
        seed,
        depth,
        build_ms,
        synth_ms,
        node_count,
        reduced_paths,
        histogram: report.histogram,
        fidelity,
        node_visits: report.node_visits,
        budget_violations: budget,
        status,
    })
}

/// Runs every `(n, seed)` instance, ordered by `n` then seed.
pub fn run_suite(cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    cfg.validate()?;
    let jobs: Vec<(usize, u64)> =
        (cfg.n_min..=cfg.n_max).flat_map(|n| (0..cfg.instances as u64).map(move |i| (n, cfg.seed + i))).collect();
    run_jobs(cfg, &jobs)
}

#[cfg(feature = "parallel")]
fn run_jobs(cfg: &BenchConfig, jobs: &[(usize, u64)]) -> Result<Vec<BenchRecord>> {
    use rayon::prelude::*;
    if cfg.parallel {
        jobs.par_iter().map(|&(n, s)| run_instance(cfg, n, s)).collect()
    } else {
        jobs.iter().map(|&(n, s)| run_instance(cfg, n, s)).collect()
    }
}

#[cfg(not(feature = "parallel"))]
fn run_jobs(cfg: &BenchConfig, jobs: &[(usize, u64)]) -> Result<Vec<BenchRecord>> {
    jobs.iter().map(|&(n, s)| run_instance(cfg, n, s)).collect()
}

fn hist_cols(h: &ArityHistogram) -> [usize; 4] {
    [h.get(1), h.get(2), h.get(3), h.at_least(4)]
}

/// CSV with a PRNG comment line, the fixed header, and one `avg` row after
/// the records of each `n`.
pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut out = format!("# prng={PRNG_NAME}\n{CSV_HEADER}\n");
    let mut i = 0;
    while i < records.len() {
        let n = records[i].n;
        let group: Vec<&BenchRecord> = records[i..].iter().take_while(|r| r.n == n).collect();
        i += group.len();
        for r in &group {
            let [g1, g2, g3, g4] = hist_cols(&r.histogram);
            let fid = r.fidelity.map(|f| format!("{f:.12}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{:.3},{:.3},{},{},{g1},{g2},{g3},{g4},{fid},{}",
                r.n,
                r.seed,
                r.depth,
                r.build_ms,
                r.synth_ms,
                r.node_count,
                r.reduced_paths,
                r.status.as_str()
            );
        }
        let k = group.len() as f64;
        let mean = |f: &dyn Fn(&BenchRecord) -> f64| group.iter().map(|r| f(r)).sum::<f64>() / k;
        let g = |j: usize| mean(&|r| hist_cols(&r.histogram)[j] as f64);
        let fids: Vec<f64> = group.iter().filter_map(|r| r.fidelity).collect();
        let fid = if fids.is_empty() {
            String::new()
        } else {
            format!("{:.12}", fids.iter().sum::<f64>() / fids.len() as f64)
        };
        let status = if group.iter().any(|r| r.status == Status::Failed) {
            Status::Failed
        } else if group.iter().all(|r| r.status == Status::Ok) {
            Status::Ok
        } else {
            Status::SkippedVerify
        };
        let _ = writeln!(
            out,
            "{n},avg,{:.3},{:.3},{:.3},{:.3},{:.3},{:.3},{:.3},{:.3},{:.3},{fid},{}",
            mean(&|r| r.depth as f64),
            mean(&|r| r.build_ms),
            mean(&|r| r.synth_ms),
            mean(&|r| r.node_count as f64),
            mean(&|r| r.reduced_paths.to_string().parse::<f64>().unwrap_or(f64::INFINITY)),
            g(0),
            g(1),
            g(2),
            g(3),
            status.as_str()
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clifford_t_is_deterministic_and_normalized() {
        let a = random_clifford_t_state(3, 27, 7);
        assert_eq!(a, random_clifford_t_state(3, 27, 7));
        assert_ne!(a, random_clifford_t_state(3, 27, 8));
        let norm: f64 = a.iter().map(|x| x.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        let z = random_clifford_t_state(4, 0, 1);
        assert_eq!(z[0], Complex64::new(1.0, 0.0));
        assert!(z[1..].iter().all(|x| x.norm() == 0.0));
        // n = 1 never draws CX
        let _ = random_clifford_t_state(1, 50, 3);
    }

    #[test]
    fn vn_single_qubit() {
        let v = vn_family_state(1);
        assert!((v[0].re - FRAC_1_SQRT_2).abs() < 1e-15 && (v[1].re - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn config_parsing() {
        let cfg = BenchConfig::parse("# corpus\nfamily = vn\nn = 2..5\ninstances=3 # trailing\nseed=9\n").unwrap();
        assert_eq!(cfg.family, Family::Vn);
        assert_eq!((cfg.n_min, cfg.n_max, cfg.instances, cfg.seed), (2, 5, 3, 9));
        assert!(matches!(BenchConfig::parse("n=4\nwat=1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(BenchConfig::parse("nonsense"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn empty_range_is_header_only() {
        let cfg = BenchConfig { n_min: 5, n_max: 4, ..BenchConfig::default() };
        let csv = to_csv(&run_suite(&cfg).unwrap());
        assert_eq!(csv, format!("# prng=chacha8\n{CSV_HEADER}\n"));
    }

    #[test]
    fn small_suite_rows() {
        let cfg = BenchConfig { n_min: 3, n_max: 3, instances: 2, ..BenchConfig::default() };
        let records = run_suite(&cfg).unwrap();
        assert_eq!(records.len(), 2);
        assert!(records.iter().all(|r| r.status == Status::Ok), "{records:?}");
        let csv = to_csv(&records);
        let rows: Vec<&str> = csv.lines().skip(2).collect();
        assert_eq!(rows.len(), 3);
        assert!(rows[2].starts_with("3,avg,"));
    }

    #[test]
    fn budgets_flag_excess() {
        let mut h = ArityHistogram::default();
        for _ in 0..4 {
            h.record(4);
        }
        let v = budget_violations(3, &BigUint::from(1u32), &h, 1);
        assert_eq!(v, vec!["arity>=4: 4 > 3".to_string()]);
    }
}
