//! `swhe` — batch CLI over the integer homomorphic encryption toolkit.
//!
//! Every subcommand reads and writes the versioned text formats from
//! `swhe_core::io`. All randomness is reproducible under `--seed`: identical
//! seeds and inputs give byte-identical key, ciphertext and result files
//! (report timing fields necessarily vary).
//!
//! Exit codes: 0 success, 1 other errors, 2 parse, 3 capacity,
//! 4 overflow-risk, 5 verification-mismatch, 6 attack-budget.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;

use swhe_core::boolfhe::{compile_boolean_circuit, fhe_keygen, parse_bool_netlist};
use swhe_core::circuit::{evaluate, parse_circuit};
use swhe_core::error::{Error, ErrorCategory};
use swhe_core::io;
use swhe_core::keys::{AnyCiphertext, AnyKey};
use swhe_core::params::{parse_presets, ParameterSet, Preset, Scheme, DEFAULT_PRESETS};
use swhe_core::pipeline::{measure_ops, relative_bench, run_pipeline, OpCosts, PipelineJob};
use swhe_core::rng::{os_rng, seeded_rng, SchemeRng};

#[derive(Parser)]
#[command(name = "swhe", version, about = "Somewhat homomorphic encryption over the integers")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Derive or resolve parameter sets.
    #[command(subcommand)]
    Params(ParamsCmd),
    /// Generate a key pair (secret key file + public parameters file).
    Keygen(KeygenArgs),
    /// Encrypt a file of integers, one per line.
    Encrypt(EncryptArgs),
    /// Decrypt a ciphertext file.
    Decrypt(DecryptArgs),
    /// Evaluate an arithmetic circuit over encrypted inputs.
    Eval(EvalArgs),
    /// Run the encrypted inner-product map/reduce pipeline.
    Pipeline(PipelineArgs),
    /// Run a cryptanalytic attack against public data.
    Attack(AttackArgs),
    /// Compile a Boolean netlist into an encrypted circuit.
    FheCompile(FheCompileArgs),
    /// Evaluate a compiled Boolean circuit on input bits.
    FheEval(FheEvalArgs),
    /// Measure per-operation costs and report ordinal comparisons.
    Bench(BenchArgs),
}

#[derive(Subcommand)]
enum ParamsCmd {
    /// Derive sizes from scheme, degree, input count and entropy.
    Derive(DeriveArgs),
    /// Resolve a named preset.
    Resolve(ResolveArgs),
    /// List available presets.
    ListPresets(PresetFileArgs),
}

#[derive(Args)]
struct SchemeSelect {
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    d: Option<u32>,
    /// lg of the input count bound (default 16).
    #[arg(long, default_value_t = 16)]
    n_bits: u32,
    #[arg(long)]
    rho: Option<u32>,
    /// Ciphertext dimension for the k-vector schemes.
    #[arg(long)]
    k: Option<u32>,
    /// Shard count for the CRT variant.
    #[arg(long)]
    shards: Option<u32>,
    /// Resolve a named preset instead of explicit fields.
    #[arg(long)]
    preset: Option<String>,
    /// Presets file; defaults to $SWHE_PRESET_DIR/presets.txt or built-ins.
    #[arg(long)]
    presets_file: Option<PathBuf>,
}

#[derive(Args)]
struct DeriveArgs {
    #[command(flatten)]
    select: SchemeSelect,
}

#[derive(Args)]
struct ResolveArgs {
    #[arg(long)]
    preset: String,
    #[arg(long)]
    presets_file: Option<PathBuf>,
}

#[derive(Args)]
struct PresetFileArgs {
    #[arg(long)]
    presets_file: Option<PathBuf>,
}

#[derive(Args)]
struct KeygenArgs {
    #[command(flatten)]
    select: SchemeSelect,
    /// Secret key output path (written mode 0600).
    #[arg(long)]
    secret_out: PathBuf,
    /// Public parameters output path.
    #[arg(long)]
    public_out: PathBuf,
    /// Centered (signed) plaintext encoding.
    #[arg(long)]
    signed: bool,
    /// Acknowledge deliberately undersized parameters.
    #[arg(long)]
    insecure_toy: bool,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct EncryptArgs {
    #[arg(long)]
    key: PathBuf,
    /// Plaintext integers, one per line.
    #[arg(long)]
    input: PathBuf,
    /// Ciphertext stream output (CRT keys write <output>.shard<j> job files).
    #[arg(long)]
    output: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct DecryptArgs {
    #[arg(long)]
    key: PathBuf,
    /// Ciphertext stream (CRT keys read <input>.shard<j> job files).
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Decrypt even when a ciphertext bound flags overflow risk.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct EvalArgs {
    /// Arithmetic circuit netlist.
    #[arg(long)]
    circuit: PathBuf,
    /// Encrypted inputs (CRT: shard-job prefix).
    #[arg(long)]
    inputs: PathBuf,
    /// Public parameters file.
    #[arg(long)]
    params: PathBuf,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct PipelineArgs {
    #[command(flatten)]
    select: SchemeSelect,
    #[arg(long, default_value_t = 24000)]
    count: usize,
    #[arg(long, default_value_t = 4)]
    workers: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the report here as well as stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Also write the encrypted input file (d tab-separated ciphertexts per line).
    #[arg(long)]
    input_out: Option<PathBuf>,
}

#[derive(Args)]
struct AttackArgs {
    /// One of: brute-force, collision, two-plaintext, known-plaintext,
    /// associator, uniformity.
    name: String,
    /// Public parameters file (the attacker's view of the system).
    #[arg(long)]
    keys: PathBuf,
    /// Ciphertext stream to attack.
    #[arg(long)]
    ciphertexts: PathBuf,
    /// Known plaintexts, lines of `index value` (known-plaintext attacks).
    #[arg(long)]
    known: Option<PathBuf>,
    #[arg(long, default_value_t = 1 << 16)]
    budget: u64,
    /// Guess range upper bound for brute force.
    #[arg(long, default_value_t = 1 << 16)]
    guess_limit: u64,
    /// Noise modulus for the uniformity test.
    #[arg(long)]
    kappa: Option<u64>,
    #[arg(long, default_value_t = 0.001)]
    significance: f64,
    /// Report format: json-lines or text.
    #[arg(long, default_value = "json-lines")]
    report: String,
}

#[derive(Args)]
struct FheCompileArgs {
    /// Boolean netlist (INPUT/GATE<tt4>/OUTPUT lines).
    #[arg(long)]
    netlist: PathBuf,
    #[arg(long, default_value_t = 3)]
    k: u32,
    /// Bit length of the per-circuit prime p.
    #[arg(long, default_value_t = 64)]
    lambda: u32,
    /// Evaluator-side program file.
    #[arg(long)]
    program_out: PathBuf,
    /// Client-side key file (written mode 0600).
    #[arg(long)]
    key_out: PathBuf,
    /// Acknowledge desk-scale parameters (k and lambda far below any
    /// security margin).
    #[arg(long)]
    insecure_toy: bool,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct FheEvalArgs {
    #[arg(long)]
    program: PathBuf,
    #[arg(long)]
    key: PathBuf,
    /// Input bits, e.g. 0110.
    #[arg(long)]
    inputs: String,
    /// Override the single-use guard on an already-evaluated program.
    #[arg(long)]
    allow_reuse: bool,
    /// Write encrypted output wires here.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated schemes to measure at matched (d, rho).
    #[arg(long, default_value = "he1,he2")]
    schemes: String,
    #[arg(long, default_value_t = 2)]
    d: u32,
    #[arg(long, default_value_t = 16)]
    n_bits: u32,
    #[arg(long, default_value_t = 32)]
    rho: u32,
    #[arg(long)]
    k: Option<u32>,
    /// Operations per measured batch.
    #[arg(long, default_value_t = 200)]
    ops: usize,
    /// Batches per configuration (median taken).
    #[arg(long, default_value_t = 5)]
    rounds: usize,
    /// Ordinal claims require at least this cost ratio.
    #[arg(long, default_value_t = 1.5)]
    min_ratio: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let cat = e.category();
            eprintln!("error category={}: {e}", cat.as_str());
            ExitCode::from(match cat {
                ErrorCategory::Parse => 2,
                ErrorCategory::Capacity => 3,
                ErrorCategory::OverflowRisk => 4,
                ErrorCategory::VerificationMismatch => 5,
                ErrorCategory::AttackBudget => 6,
                ErrorCategory::Other => 1,
            })
        }
    }
}

fn rng_from(seed: Option<u64>) -> SchemeRng {
    match seed {
        Some(s) => seeded_rng(s),
        None => os_rng(),
    }
}

fn load_presets(path: &Option<PathBuf>) -> Result<Vec<Preset>, Error> {
    if let Some(path) = path {
        return parse_presets(&std::fs::read_to_string(path)?);
    }
    if let Ok(dir) = std::env::var("SWHE_PRESET_DIR") {
        let candidate = Path::new(&dir).join("presets.txt");
        if candidate.exists() {
            return parse_presets(&std::fs::read_to_string(candidate)?);
        }
    }
    parse_presets(DEFAULT_PRESETS)
}

fn resolve_params(select: &SchemeSelect) -> Result<ParameterSet, Error> {
    if let Some(name) = &select.preset {
        let presets = load_presets(&select.presets_file)?;
        let preset = presets
            .iter()
            .find(|p| &p.name == name)
            .ok_or_else(|| Error::InvalidParams(format!("unknown preset '{name}'")))?;
        return preset.resolve();
    }
    let scheme = Scheme::parse(
        select
            .scheme
            .as_deref()
            .ok_or_else(|| Error::InvalidParams("--scheme or --preset required".into()))?,
    )?;
    let d = select
        .d
        .ok_or_else(|| Error::InvalidParams("--d required".into()))?;
    let rho = select
        .rho
        .ok_or_else(|| Error::InvalidParams("--rho required".into()))?;
    ParameterSet::derive(scheme, d, select.n_bits, rho, select.k, select.shards)
}

fn print_params(p: &ParameterSet) {
    println!("scheme={}", p.scheme);
    println!("d={}", p.d);
    println!("n_bits={}", p.n_bits);
    println!("rho={}", p.rho);
    if let Some(kb) = p.kappa_bits {
        println!("kappa_bits={kb}");
    }
    if let Some(rp) = p.rho_prime {
        println!("rho_prime={rp}");
    }
    println!("lambda={}", p.lambda);
    println!("eta={}", p.eta);
    if p.k > 1 {
        println!("k={}", p.k);
    }
    if p.shards > 1 {
        println!("K={}", p.shards);
    }
    println!("insecure_toy={}", p.insecure_toy);
}

fn shard_path(prefix: &Path, j: usize) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(format!(".shard{j}"));
    PathBuf::from(name)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.cmd {
        Cmd::Params(ParamsCmd::Derive(args)) => {
            let p = resolve_params(&args.select)?;
            print_params(&p);
            Ok(())
        }
        Cmd::Params(ParamsCmd::Resolve(args)) => {
            let presets = load_presets(&args.presets_file)?;
            let preset = presets
                .iter()
                .find(|p| p.name == args.preset)
                .ok_or_else(|| Error::InvalidParams(format!("unknown preset '{}'", args.preset)))?;
            print_params(&preset.resolve()?);
            Ok(())
        }
        Cmd::Params(ParamsCmd::ListPresets(args)) => {
            for p in load_presets(&args.presets_file)? {
                println!(
                    "{} scheme={} d={} n_bits={} rho={}{}{}",
                    p.name,
                    p.scheme,
                    p.d,
                    p.n_bits,
                    p.rho,
                    p.k.map(|k| format!(" k={k}")).unwrap_or_default(),
                    p.shards.map(|s| format!(" K={s}")).unwrap_or_default()
                );
            }
            Ok(())
        }
        Cmd::Keygen(args) => {
            let params = resolve_params(&args.select)?;
            if params.insecure_toy && !args.insecure_toy {
                return Err(Error::InvalidParams(
                    "derived sizes are below the brute-force margin; pass --insecure-toy to acknowledge".into(),
                ));
            }
            let mut rng = rng_from(args.seed);
            let key = AnyKey::generate(&params, args.signed, &mut rng)?;
            io::write_secret_file(&args.secret_out, &io::write_secret_key(&key, args.signed))?;
            std::fs::write(&args.public_out, io::write_public_params(&key))?;
            println!(
                "wrote secret key to {} and public parameters to {}",
                args.secret_out.display(),
                args.public_out.display()
            );
            Ok(())
        }
        Cmd::Encrypt(args) => {
            let (key, _) = io::read_secret_key(&std::fs::read_to_string(&args.key)?)?;
            let plain = io::read_plaintexts(&std::fs::read_to_string(&args.input)?)?;
            let mut rng = rng_from(args.seed);
            let cts: Vec<AnyCiphertext> = plain
                .iter()
                .map(|m| key.encrypt(m, &mut rng))
                .collect::<Result<_, _>>()?;
            if let AnyKey::Crt(pair) = &key {
                let crt_cts: Vec<_> = cts
                    .iter()
                    .map(|c| match c {
                        AnyCiphertext::Crt(c) => c.clone(),
                        _ => unreachable!("CRT key produced non-CRT ciphertext"),
                    })
                    .collect();
                for (j, job) in io::write_shard_jobs(&pair.pp, &crt_cts).iter().enumerate() {
                    std::fs::write(shard_path(&args.output, j), job)?;
                }
                println!(
                    "wrote {} ciphertexts as {} shard job files at {}.shard*",
                    plain.len(),
                    pair.pp.shards.len(),
                    args.output.display()
                );
            } else {
                std::fs::write(&args.output, io::write_ciphertexts(&cts)?)?;
                println!("wrote {} ciphertexts to {}", plain.len(), args.output.display());
            }
            Ok(())
        }
        Cmd::Decrypt(args) => {
            let (key, _) = io::read_secret_key(&std::fs::read_to_string(&args.key)?)?;
            let cts = read_ciphertexts_for(&key, &args.input)?;
            let mut out = String::new();
            for c in &cts {
                let m = if args.force {
                    key.decrypt_unchecked(c)?
                } else {
                    key.decrypt(c)?
                };
                out.push_str(&m.to_string());
                out.push('\n');
            }
            match &args.output {
                Some(path) => std::fs::write(path, out)?,
                None => print!("{out}"),
            }
            Ok(())
        }
        Cmd::Eval(args) => {
            let circuit = parse_circuit(&std::fs::read_to_string(&args.circuit)?)?;
            let (pp, _) = io::read_public_params(&std::fs::read_to_string(&args.params)?)?;
            match pp {
                io::AnyPublicParams::Scalar(pp) => {
                    let cts =
                        io::read_scalar_ciphertexts(&std::fs::read_to_string(&args.inputs)?)?;
                    let outs = evaluate(&circuit, &cts, &pp)?;
                    let text: String = outs
                        .iter()
                        .map(|c| format!("{}\n", io::scalar_ct_line(c)))
                        .collect();
                    std::fs::write(&args.output, text)?;
                }
                io::AnyPublicParams::Vector(pp) => {
                    let cts =
                        io::read_vector_ciphertexts(&std::fs::read_to_string(&args.inputs)?)?;
                    let outs = evaluate(&circuit, &cts, &pp)?;
                    let text: String = outs
                        .iter()
                        .map(|c| format!("{}\n", io::vector_ct_line(c)))
                        .collect();
                    std::fs::write(&args.output, text)?;
                }
                io::AnyPublicParams::Crt(pp) => {
                    // one worker per shard job file
                    std::thread::scope(|scope| -> Result<(), Error> {
                        let mut handles = Vec::new();
                        for j in 0..pp.shards.len() {
                            let circuit = &circuit;
                            let inputs = shard_path(&args.inputs, j);
                            let output = shard_path(&args.output, j);
                            handles.push(scope.spawn(move || -> Result<(), Error> {
                                let (idx, shard_pp, cts) =
                                    io::read_shard_job(&std::fs::read_to_string(&inputs)?)?;
                                let outs = evaluate(circuit, &cts, &shard_pp)?;
                                let refs: Vec<&swhe_core::VectorCiphertext> = outs.iter().collect();
                                std::fs::write(&output, io::write_shard_job(idx, &shard_pp, &refs))?;
                                Ok(())
                            }));
                        }
                        for h in handles {
                            h.join().expect("shard worker panicked")?;
                        }
                        Ok(())
                    })?;
                }
            }
            println!("evaluated {} onto {}", args.circuit.display(), args.output.display());
            Ok(())
        }
        Cmd::Pipeline(args) => {
            let params = resolve_params(&args.select)?;
            let job = PipelineJob {
                params,
                count: args.count,
                workers: args.workers,
                seed: args.seed,
            };
            let arts = run_pipeline(&job)?;
            if let Some(path) = &args.input_out {
                let mut text = String::new();
                for line in &arts.lines {
                    let fields: Vec<String> = line
                        .iter()
                        .map(|c| match c {
                            AnyCiphertext::Scalar(c) => io::scalar_ct_line(c),
                            AnyCiphertext::Vector(c) => io::vector_ct_line(c),
                            AnyCiphertext::Crt(_) => "-".into(),
                        })
                        .collect();
                    text.push_str(&fields.join("\t"));
                    text.push('\n');
                }
                std::fs::write(path, text)?;
            }
            let report = io::write_pipeline_report(&arts.report);
            if let Some(path) = &args.report {
                std::fs::write(path, &report)?;
            }
            print!("{report}");
            Ok(())
        }
        Cmd::Attack(args) => run_attack(args),
        Cmd::FheCompile(args) => {
            if !args.insecure_toy {
                return Err(Error::InvalidParams(
                    "encrypted-circuit parameters at desk scale are not secure; pass --insecure-toy to acknowledge".into(),
                ));
            }
            let netlist = parse_bool_netlist(&std::fs::read_to_string(&args.netlist)?)?;
            let mut rng = rng_from(args.seed);
            let (bundle, kappa) = fhe_keygen(args.k, args.lambda, &mut rng)?;
            let (compiled, client) = compile_boolean_circuit(&netlist, &bundle, &kappa, &mut rng)?;
            std::fs::write(&args.program_out, io::write_compiled_circuit(&compiled))?;
            io::write_secret_file(&args.key_out, &io::write_fhe_client_key(&client))?;
            println!(
                "compiled {} gates, {} wires; program {} key {}",
                netlist.gates.len(),
                compiled.wires.len(),
                args.program_out.display(),
                args.key_out.display()
            );
            Ok(())
        }
        Cmd::FheEval(args) => {
            let mut compiled =
                io::read_compiled_circuit(&std::fs::read_to_string(&args.program)?)?;
            let client = io::read_fhe_client_key(&std::fs::read_to_string(&args.key)?)?;
            let bits: Vec<bool> = args
                .inputs
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(Error::Parse(format!("input bits must be 0/1, got '{other}'"))),
                })
                .collect::<Result<_, _>>()?;
            let mut rng = rng_from(args.seed);
            let inputs = client.encrypt_inputs(&bits, &mut rng)?;
            let outs = compiled.evaluate(&inputs, args.allow_reuse)?;
            // persist the reuse stamp so a second invocation trips the guard
            std::fs::write(&args.program, io::write_compiled_circuit(&compiled))?;
            if let Some(path) = &args.output {
                let text: String = outs
                    .iter()
                    .map(|c| format!("{}\n", io::vector_ct_line(c)))
                    .collect();
                std::fs::write(path, text)?;
            }
            let out_bits = client.decrypt_outputs(&outs)?;
            let rendered: String = out_bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
            println!("{rendered}");
            Ok(())
        }
        Cmd::Bench(args) => {
            let mut rng = seeded_rng(args.seed);
            let mut costs: Vec<OpCosts> = Vec::new();
            for name in args.schemes.split(',') {
                let scheme = Scheme::parse(name.trim())?;
                let params =
                    ParameterSet::derive(scheme, args.d, args.n_bits, args.rho, args.k, None)?;
                let c = measure_ops(&params, args.ops, args.rounds, &mut rng)?;
                println!(
                    "{} k={} d={} rho={}: enc {:.2}us add {:.2}us mul {:.2}us dec {:.2}us",
                    c.scheme, c.k, c.d, c.rho, c.enc_us, c.add_us, c.mul_us, c.dec_us
                );
                costs.push(c);
            }
            let claims = relative_bench(&costs, args.min_ratio);
            if claims.is_empty() {
                println!("no ordinal comparisons (need two configurations at matched d, rho)");
            }
            for claim in &claims {
                println!(
                    "{} -> ratio {:.2} {}",
                    claim.label,
                    claim.ratio,
                    if claim.holds { "ordered" } else { "NOT ordered" }
                );
            }
            Ok(())
        }
    }
}

fn read_ciphertexts_for(key: &AnyKey, input: &Path) -> Result<Vec<AnyCiphertext>, Error> {
    match key {
        AnyKey::Scalar(_) => Ok(io::read_scalar_ciphertexts(&std::fs::read_to_string(input)?)?
            .into_iter()
            .map(AnyCiphertext::Scalar)
            .collect()),
        AnyKey::Vector(_) => Ok(io::read_vector_ciphertexts(&std::fs::read_to_string(input)?)?
            .into_iter()
            .map(AnyCiphertext::Vector)
            .collect()),
        AnyKey::Crt(pair) => {
            let shard_count = pair.pp.shards.len();
            let mut per_shard = Vec::with_capacity(shard_count);
            for j in 0..shard_count {
                let (_, _, cts) =
                    io::read_shard_job(&std::fs::read_to_string(shard_path(input, j))?)?;
                per_shard.push(cts);
            }
            let n = per_shard.first().map(Vec::len).unwrap_or(0);
            if per_shard.iter().any(|s| s.len() != n) {
                return Err(Error::Parse("shard files disagree on ciphertext count".into()));
            }
            Ok((0..n)
                .map(|i| {
                    let shards: Vec<_> = per_shard.iter().map(|s| s[i].clone()).collect();
                    let bound = shards[0].bound.clone();
                    AnyCiphertext::Crt(swhe_core::CrtCiphertext { shards, bound })
                })
                .collect())
        }
    }
}

fn run_attack(args: AttackArgs) -> Result<(), Error> {
    use swhe_core::attacks;
    let (pp, _scheme) = io::read_public_params(&std::fs::read_to_string(&args.keys)?)?;
    let ct_text = std::fs::read_to_string(&args.ciphertexts)?;

    let known: Vec<(usize, BigUint)> = match &args.known {
        None => Vec::new(),
        Some(path) => std::fs::read_to_string(path)?
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(|l| {
                let (i, m) = l
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| Error::Parse(format!("known-plaintext line '{l}'")))?;
                Ok((
                    i.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad index '{i}'")))?,
                    m.trim()
                        .parse::<BigUint>()
                        .map_err(|_| Error::Parse(format!("bad plaintext '{m}'")))?,
                ))
            })
            .collect::<Result<_, Error>>()?,
    };

    let report = match (args.name.as_str(), &pp) {
        ("brute-force", io::AnyPublicParams::Scalar(pp)) => {
            let cts: Vec<BigUint> = io::read_scalar_ciphertexts(&ct_text)?
                .into_iter()
                .map(|c| c.value)
                .collect();
            let guesses = (0u64..args.guess_limit).map(BigUint::from);
            attacks::brute_force_gcd(&cts, &pp.pq, None, guesses, args.budget, None)
        }
        ("collision", io::AnyPublicParams::Scalar(pp)) => {
            let cts: Vec<BigUint> = io::read_scalar_ciphertexts(&ct_text)?
                .into_iter()
                .map(|c| c.value)
                .collect();
            attacks::collision_attack(&cts, &pp.pq)
        }
        ("two-plaintext", io::AnyPublicParams::Vector(pp)) => {
            let cts = io::read_vector_ciphertexts(&ct_text)?;
            if known.len() < 2 {
                return Err(Error::InvalidParams(
                    "--known must list two `index value` lines".into(),
                ));
            }
            let fetch = |i: usize| {
                cts.get(i).ok_or_else(|| {
                    Error::InvalidParams(format!("known-plaintext index {i} out of range"))
                })
            };
            let holdout = match known.get(2) {
                Some((i, m)) => Some((fetch(*i)?, m)),
                None => None,
            };
            attacks::he2_two_plaintext_attack(
                fetch(known[0].0)?,
                fetch(known[1].0)?,
                &known[0].1,
                &known[1].1,
                &pp.pq,
                holdout,
            )?
        }
        ("known-plaintext", io::AnyPublicParams::Vector(pp)) => {
            let cts = io::read_vector_ciphertexts(&ct_text)?;
            let k = pp.k;
            if known.len() < k {
                return Err(Error::InvalidParams(format!(
                    "--known must list k={k} `index value` lines"
                )));
            }
            let fetch = |i: usize| {
                cts.get(i).cloned().ok_or_else(|| {
                    Error::InvalidParams(format!("known-plaintext index {i} out of range"))
                })
            };
            let sel: Vec<swhe_core::VectorCiphertext> = known[..k]
                .iter()
                .map(|(i, _)| fetch(*i))
                .collect::<Result<_, Error>>()?;
            let ms: Vec<BigUint> = known[..k].iter().map(|(_, m)| m.clone()).collect();
            let holdout_ct = match known.get(k) {
                Some((i, m)) => Some((fetch(*i)?, m)),
                None => None,
            };
            attacks::hek_known_plaintext_attack(
                &sel,
                &ms,
                &pp.pq,
                holdout_ct.as_ref().map(|(c, m)| (c, *m)),
            )?
        }
        ("associator", io::AnyPublicParams::Vector(pp)) => {
            let cts = io::read_vector_ciphertexts(&ct_text)?;
            attacks::associator_attack(&cts, pp, args.budget)
        }
        ("uniformity", _) => {
            // needs only the residue stream and kappa; works for scalar
            // streams and for the first component of vector streams
            let kappa = BigUint::from(args.kappa.ok_or_else(|| {
                Error::InvalidParams("--kappa required for the uniformity test".into())
            })?);
            let values: Vec<BigUint> = match io::read_scalar_ciphertexts(&ct_text) {
                Ok(cts) => cts.into_iter().map(|c| c.value).collect(),
                Err(_) => io::read_vector_ciphertexts(&ct_text)?
                    .into_iter()
                    .map(|mut c| c.v.swap_remove(0))
                    .collect(),
            };
            let r = swhe_core::stats::chi_square_uniformity(&values, &kappa, args.significance)?;
            println!(
                "{}",
                serde_json::json!({
                    "attack": "uniformity",
                    "statistic": r.statistic,
                    "dof": r.dof,
                    "critical": r.critical,
                    "significance": r.significance,
                    "samples": r.samples,
                    "pass": r.pass,
                })
            );
            return Ok(());
        }
        (name, _) => {
            return Err(Error::InvalidParams(format!(
                "unknown attack '{name}' or mismatched parameter kind"
            )))
        }
    };

    match args.report.as_str() {
        "text" => {
            println!(
                "{}: {}{}",
                report.attack,
                if report.success { "success" } else { "failure" },
                report
                    .recovered_p
                    .as_ref()
                    .map(|p| format!(", p = {p}"))
                    .unwrap_or_default()
            );
        }
        _ => println!("{}", serde_json::to_string(&report).expect("report serializes")),
    }
    // budget exhaustion has its own exit code; other negative results are
    // valid outcomes reported on stdout
    if !report.success && report.note.as_deref() == Some("budget exhausted") {
        return Err(Error::BudgetExhausted(report.operations));
    }
    Ok(())
}
