use std::path::Path;

use hsrmamba::bench::{run_bench, BenchConfig};
use hsrmamba::hsio::{self, HsiCube, SampleType};
use hsrmamba::model::{self, ModelWeights};
use hsrmamba::quality;
use hsrmamba::selftest::{run_selftest, SelftestOptions};
use hsrmamba::{Error, Rng};

use crate::args::*;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_IO: u8 = 2;
pub const EXIT_VALIDATION: u8 = 3;
pub const EXIT_SELFTEST: u8 = 4;

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. } => EXIT_IO,
        _ => EXIT_VALIDATION,
    }
}

pub fn run(command: Command) -> hsrmamba::Result<u8> {
    match command {
        Command::Synth(a) => synth(&a),
        Command::Import(a) => import(&a),
        Command::Degrade(a) => degrade(&a),
        Command::InitWeights(a) => init_weights(&a),
        Command::Sr(a) => sr(&a),
        Command::Eval(a) => eval(&a),
        Command::Bench(a) => bench(&a),
        Command::Selftest(a) => selftest(&a),
    }
}

fn save(path: &Path, cube: &HsiCube, precision: Precision) -> hsrmamba::Result<()> {
    hsio::save_cube(path, cube, SampleType::from(precision))
}

fn extents(c: &HsiCube) -> String {
    let (h, w, b) = c.dims();
    format!("{h}x{w}x{b}")
}

fn synth(a: &SynthArgs) -> hsrmamba::Result<u8> {
    let profile = a.profile();
    let cube = hsio::synth_cube(&mut Rng::new(a.seed), a.h, a.w, a.b, profile)?;
    save(&a.output, &cube, a.precision)?;
    println!(
        "synth profile={profile} seed={} extents={} -> {}",
        a.seed,
        extents(&cube),
        a.output.display()
    );
    Ok(EXIT_OK)
}

fn import(a: &ImportArgs) -> hsrmamba::Result<u8> {
    let cube = hsio::import_raw(&a.input, (a.h, a.w, a.b), a.sample.into())?;
    save(&a.output, &cube, a.precision)?;
    let (lo, hi) = cube.normalization();
    println!(
        "import extents={} range=[{lo}, {hi}] -> {}",
        extents(&cube),
        a.output.display()
    );
    Ok(EXIT_OK)
}

fn degrade(a: &DegradeArgs) -> hsrmamba::Result<u8> {
    let hr = hsio::load_cube(&a.input)?;
    let lr = hsio::degrade(&hr, a.scale)?;
    save(&a.output, &lr, a.precision)?;
    println!(
        "degrade scale={} {} -> {} -> {}",
        a.scale,
        extents(&hr),
        extents(&lr),
        a.output.display()
    );
    Ok(EXIT_OK)
}

fn init_weights(a: &InitWeightsArgs) -> hsrmamba::Result<u8> {
    let cfg = a.model.config(a.bands);
    let weights = ModelWeights::init(&cfg)?;
    model::save_weights(&a.output, &cfg, &weights)?;
    println!(
        "init-weights {cfg} seed={} parameters={} -> {}",
        cfg.seed,
        weights.parameter_count(),
        a.output.display()
    );
    Ok(EXIT_OK)
}

fn sr(a: &SrArgs) -> hsrmamba::Result<u8> {
    let lr = hsio::load_cube(&a.input)?;
    let cfg = a.model.config(lr.dims().2);
    cfg.validate()?;
    let weights = match &a.weights {
        Some(path) => model::load_weights_for(path, &cfg)?,
        None => ModelWeights::init(&cfg)?,
    };
    let (out, timings) = model::forward_timed(lr.tensor(), &cfg, &weights)?;
    let (lo, hi) = lr.normalization();
    let cube = HsiCube::from_clamped(out)?.with_normalization(lo, hi)?;
    save(&a.output, &cube, a.precision)?;
    println!("sr {cfg} {} -> {} -> {}", extents(&lr), extents(&cube), a.output.display());
    println!("stage\tms");
    let mut total = 0.0;
    for t in &timings {
        let ms = t.elapsed.as_secs_f64() * 1e3;
        total += ms;
        println!("{}\t{ms:.3}", t.stage);
    }
    println!("total\t{total:.3}");
    Ok(EXIT_OK)
}

fn eval(a: &EvalArgs) -> hsrmamba::Result<u8> {
    let sr = hsio::load_cube(&a.sr)?;
    let hr = hsio::load_cube(&a.hr)?;
    let report = quality::evaluate(sr.tensor(), hr.tensor(), a.scale as f64)?;
    if let Some(path) = &a.error_map {
        let map = HsiCube::from_clamped(quality::error_map(sr.tensor(), hr.tensor())?)?;
        hsio::save_cube(path, &map, SampleType::F64)?;
    }
    if a.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    Ok(EXIT_OK)
}

fn bench(a: &BenchArgs) -> hsrmamba::Result<u8> {
    let report = run_bench(&BenchConfig {
        lengths: a.lengths.clone(),
        state: a.state,
        reps: a.reps,
        quadratic: !a.no_quadratic,
        seed: a.seed,
    })?;
    print!("{}", report.to_tsv());
    Ok(EXIT_OK)
}

fn selftest(a: &SelftestArgs) -> hsrmamba::Result<u8> {
    let results = run_selftest(&SelftestOptions {
        quick: a.quick,
        perturb: a.perturb_tolerance.clone(),
        seed: a.seed,
    })?;
    for r in &results {
        println!("{}", r.line());
    }
    let failed: Vec<_> = results.iter().filter(|r| !r.passed).map(|r| r.name).collect();
    if failed.is_empty() {
        println!("selftest: all {} suites passed", results.len());
        Ok(EXIT_OK)
    } else {
        println!("selftest: failed suites: {}", failed.join(", "));
        Ok(EXIT_SELFTEST)
    }
}
