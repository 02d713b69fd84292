use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use selfaffine::analysis::{
    check_separation, detect_similitude_structure, fw_constancy, fw_normalize, lemma3_identity, rho_multiplicativity,
    SeparationOptions, DEFAULT_SIMILITUDE_TOL, MAX_CESARO_ITERS,
};
use selfaffine::linalg::singular_values;
use selfaffine::structure::{structure_report, ProximalityOptions, StructureOptions};
use selfaffine::symbolic::{
    affinity_dimension, gibbs_approx, gibbs_constant_profile, lyapunov_spectrum, pressure_bracket,
    sample_self_affine, upper_pressure_sequence, PressureOptions, DEFAULT_BUDGET,
};
use selfaffine::word::random_words;
use selfaffine::{dualize, svf, svf_via_exterior, Error, Matrix, MatrixTuple, PotentialSpec, Result};

use crate::input::{self, InputFile};
use crate::report::{to_json, write_atomic, InputEcho, Report};
use crate::{Cli, Command, Params};

/// Largest level whose weights are echoed in a gibbs report.
const MAX_ECHOED_WEIGHTS: usize = 4096;

fn missing(field: &str) -> Error {
    Error::InvalidInput { field: field.into(), reason: "required by this command".into() }
}

fn bad(field: &str, reason: impl Into<String>) -> Error {
    Error::InvalidInput { field: field.into(), reason: reason.into() }
}

fn to_value(v: impl Serialize) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Io(e.to_string()))
}

impl Params {
    fn s_in(&self, lo: f64, hi: f64, open_hi: bool) -> Result<f64> {
        let s = self.s.ok_or_else(|| missing("s"))?;
        let ok = s.is_finite() && s >= lo && if open_hi { s < hi } else { s <= hi };
        if !ok {
            let close = if open_hi { ")" } else { "]" };
            return Err(bad("s", format!("must lie in [{lo}, {hi}{close}, got {s}")));
        }
        Ok(s)
    }

    fn s_open(&self, lo: f64, hi: f64) -> Result<f64> {
        let s = self.s_in(lo, hi, true)?;
        if s == lo {
            return Err(bad("s", format!("must lie in ({lo}, {hi}), got {s}")));
        }
        Ok(s)
    }

    fn positive(value: Option<usize>, field: &str, default: Option<usize>) -> Result<usize> {
        let v = value.or(default).ok_or_else(|| missing(field))?;
        if v == 0 {
            return Err(bad(field, "must be at least 1"));
        }
        Ok(v)
    }

    fn depth(&self, default: Option<usize>) -> Result<usize> {
        Self::positive(self.depth, "depth", default)
    }

    fn max_len(&self, default: usize) -> Result<usize> {
        Self::positive(self.max_len, "max-len", Some(default))
    }

    fn samples(&self, default: usize) -> Result<usize> {
        Self::positive(self.samples, "samples", Some(default))
    }

    fn budget(&self) -> Result<u64> {
        match self.budget {
            Some(0) => Err(bad("budget", "must be at least 1")),
            Some(b) => Ok(b),
            None => Ok(DEFAULT_BUDGET),
        }
    }

    fn tol(&self, default: f64) -> Result<f64> {
        let t = self.tol.unwrap_or(default);
        if !(t.is_finite() && t > 0.0) {
            return Err(bad("tol", "must be positive"));
        }
        Ok(t)
    }

    fn pressure_options(&self) -> Result<PressureOptions> {
        Ok(PressureOptions { budget: self.budget()?, seed: self.seed, ..PressureOptions::default() })
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    let p = &cli.params;
    if let Some(n) = p.threads {
        if n == 0 {
            return Err(bad("threads", "must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| bad("threads", e.to_string()))?;
    }
    let path = p.input.as_ref().ok_or_else(|| missing("input"))?;
    let file = input::read(path)?;
    let start = Instant::now();
    let result = dispatch(cli.command, p, &file)?;
    let report = Report {
        command: cli.command.name(),
        version: selfaffine::VERSION,
        seed: p.seed,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        input: InputEcho { path: path.display().to_string(), content: &file },
        parameters: p,
        result,
    };
    let text = to_json(&report)?;
    match &p.output {
        Some(out) => write_atomic(out, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dispatch(cmd: Command, p: &Params, file: &InputFile) -> Result<Value> {
    let t = file.tuple()?;
    let d = t.dim() as f64;
    match cmd {
        Command::Svf => {
            let s = p.s_in(0.0, f64::INFINITY, false)?;
            let gens = t
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    let exterior = if s > 0.0 && s <= d { Some(svf_via_exterior(a, s)?) } else { None };
                    Ok(json!({
                        "index": i + 1,
                        "label": file.labels.as_ref().map(|l| l[i].clone()),
                        "singular_values": singular_values(a)?,
                        "svf": svf(a, s)?,
                        "svf_via_exterior": exterior,
                    }))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(json!({ "generators": gens }))
        }
        Command::Pressure => {
            let s = p.s_in(0.0, f64::INFINITY, false)?;
            let n = p.depth(None)?;
            let spec = PotentialSpec::svf(s)?;
            let bracket = pressure_bracket(&t, &spec, n, &p.pressure_options()?)?;
            let upper_sequence = upper_pressure_sequence(&t, &spec, n, p.budget()?)?;
            Ok(json!({ "bracket": to_value(bracket)?, "upper_sequence": upper_sequence }))
        }
        Command::Affdim => {
            let n = p.depth(None)?;
            to_value(affinity_dimension(&t, n, p.tol(1e-3)?, &p.pressure_options()?)?)
        }
        Command::Lyapunov => {
            let horizon = Params::positive(p.horizon, "horizon", Some(10_000))?;
            let reps = Params::positive(p.reps, "reps", Some(16))?;
            to_value(lyapunov_spectrum(&t, &file.measure()?, horizon, reps, p.seed)?)
        }
        Command::Gibbs => gibbs(p, &t),
        Command::Structure => {
            let opts = StructureOptions {
                proximality: ProximalityOptions { max_len: p.max_len(6)?, seed: p.seed, ..Default::default() },
                ..Default::default()
            };
            to_value(structure_report(&t, &opts)?)
        }
        Command::CheckSep => {
            let s = p.s_open(0.0, d)?;
            let opts = SeparationOptions {
                depth: p.depth(Some(10))?,
                budget: p.budget()?,
                proximality: ProximalityOptions { max_len: p.max_len(6)?, seed: p.seed, ..Default::default() },
                ..Default::default()
            };
            to_value(check_separation(&t, s, &opts)?)
        }
        Command::CheckSimilitude => {
            let iters = p.iters.unwrap_or(MAX_CESARO_ITERS);
            if iters > MAX_CESARO_ITERS {
                return Err(bad("iters", format!("at most {MAX_CESARO_ITERS}")));
            }
            to_value(detect_similitude_structure(&t, iters, p.tol(DEFAULT_SIMILITUDE_TOL)?)?)
        }
        Command::CheckMult => to_value(rho_multiplicativity(&t, p.samples(1000)?, p.max_len(6)?, p.seed)?),
        Command::FwCheck => {
            let s = p.s_open(0.0, d)?;
            let normalized = fw_normalize(&t, s)?;
            let constancy = fw_constancy(&t, s, p.max_len(8)?, p.samples(1000)?, p.seed)?;
            Ok(json!({ "normalized": to_value(normalized)?, "constancy": to_value(constancy)? }))
        }
        Command::Dualize => {
            let s = p.s_open(0.0, d)?;
            to_value(dualize(&t, s)?)
        }
        Command::SampleAttractor => sample(p, file),
        Command::Lemma3 => lemma3(p, file),
    }
}

fn gibbs(p: &Params, t: &MatrixTuple) -> Result<Value> {
    let s = p.s_in(0.0, f64::INFINITY, false)?;
    let n = p.depth(None)?;
    let spec = PotentialSpec::svf(s)?;
    let g = gibbs_approx(t, &spec, n, p.budget()?)?;
    let weights = (g.log_weights.len() <= MAX_ECHOED_WEIGHTS).then(|| g.weights());
    let profile = if n >= 2 { Some(to_value(gibbs_constant_profile(t, &spec, n, p.budget()?)?)?) } else { None };
    Ok(json!({
        "depth": g.depth,
        "upper": g.upper,
        "entropy_estimate": g.entropy_estimate,
        "lyapunov_estimate": g.lyapunov_estimate,
        "pressure_defect": g.pressure_defect,
        "marginal_defect": g.marginal_defect,
        "exponents": g.exponents,
        "exponent_drift": g.exponent_drift,
        "weights": weights,
        "constant_profile": profile,
    }))
}

fn sample(p: &Params, file: &InputFile) -> Result<Value> {
    let ifs = file.ifs()?;
    let points = Params::positive(p.points, "points", Some(10_000))?;
    let burn = p.burn.unwrap_or(100);
    let cloud = sample_self_affine(&ifs, &file.measure()?, points, burn, p.seed)?;
    let d = cloud.dim;
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for x in &cloud.points {
        for j in 0..d {
            lo[j] = lo[j].min(x[j]);
            hi[j] = hi[j].max(x[j]);
        }
    }
    let echoed = match &p.csv {
        Some(path) => {
            let mut buf = Vec::new();
            cloud.write_csv(&mut buf)?;
            write_atomic(path, &buf)?;
            None
        }
        None => Some(&cloud.points),
    };
    Ok(json!({
        "dim": d,
        "count": cloud.points.len(),
        "burn": burn,
        "bounding_box": { "min": lo, "max": hi },
        "csv": p.csv.as_ref().map(|c| c.display().to_string()),
        "points": echoed,
    }))
}

/// Splits each generator into `b = A[0,0]` and the trailing block `C`.
fn split_blocks(file: &InputFile) -> Result<(Vec<f64>, MatrixTuple)> {
    let d = file.d;
    if d < 3 {
        return Err(bad("d", "lemma3 needs d ≥ 3"));
    }
    let mut b = Vec::new();
    let mut c = Vec::new();
    for (i, m) in file.matrices.iter().enumerate() {
        if (1..d).any(|j| m[0][j] != 0.0 || m[j][0] != 0.0) {
            return Err(bad(&format!("matrices[{i}]"), "must be block diagonal diag(b, C)"));
        }
        b.push(m[0][0]);
        c.push(Matrix::from_fn(d - 1, d - 1, |r, k| m[r + 1][k + 1]));
    }
    Ok((b, MatrixTuple::new(c)?))
}

fn lemma3(p: &Params, file: &InputFile) -> Result<Value> {
    let (b, c) = split_blocks(file)?;
    let s = p.s_open(1.0, (file.d - 1) as f64)?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let words = random_words(&mut rng, c.len(), p.samples(1000)?, 1, p.max_len(8)?);
    to_value(lemma3_identity(&b, &c, s, &words)?)
}
