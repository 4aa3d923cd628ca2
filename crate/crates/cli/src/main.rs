mod pack;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rlce_core::analysis::{
    construct_equivalent, distinguisher_experiment, isd_workfactor, puncture, square_code_dimension,
    AnalysisError, ExperimentConfig, IsdAlgorithm, KeySource, SquareCodeReport,
};
use rlce_core::rlce::{keygen, public_key_size_bits, recommended_params, RECOMMENDED};
use rlce_core::{Ciphertext, Field, GrsCode, Matrix, PrivateKey, PublicKey, RlceError, RlceParams};
use std::fmt;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Debug)]
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }

    fn io(path: &Path, err: io::Error) -> Self {
        CliError { code: 3, message: format!("{}: {err}", path.display()) }
    }

    fn format(path: &Path, err: impl fmt::Display) -> Self {
        CliError { code: 4, message: format!("{}: {err}", path.display()) }
    }
}

impl From<RlceError> for CliError {
    fn from(err: RlceError) -> Self {
        let code = match err {
            RlceError::InvalidParameters(_) | RlceError::UnknownLevel(_) => 2,
            RlceError::Format(_) | RlceError::DimensionMismatch { .. } => 4,
            RlceError::DecryptionFailed | RlceError::KeyMismatch => 5,
            _ => 1,
        };
        CliError { code, message: err.to_string() }
    }
}

impl From<AnalysisError> for CliError {
    fn from(err: AnalysisError) -> Self {
        match err {
            AnalysisError::Rlce(e) => e.into(),
            AnalysisError::InvalidParameters(_) | AnalysisError::IndexOutOfRange { .. } => CliError::usage(err.to_string()),
            _ => CliError { code: 1, message: err.to_string() },
        }
    }
}

type CliResult = Result<(), CliError>;

#[derive(Parser)]
#[command(name = "rlce", version, about = "RLCE public-key encryption and code analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key pair.
    Keygen(KeygenArgs),
    /// Encrypt a message under a public key.
    Encrypt(EncryptArgs),
    /// Decrypt a ciphertext.
    Decrypt(DecryptArgs),
    /// Show parameter sets, key sizes and ISD estimates.
    Params(ParamsArgs),
    /// Run analysis experiments.
    #[command(subcommand)]
    Analyze(AnalyzeCommand),
}

#[derive(Args, Clone)]
struct ParamArgs {
    /// Registry security level (60, 80, 128, 192, 256).
    #[arg(long, conflicts_with_all = ["n", "k", "t", "r", "m"])]
    level: Option<u32>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    m: Option<u32>,
}

impl ParamArgs {
    fn is_empty(&self) -> bool {
        self.level.is_none() && [self.n, self.k, self.t, self.r].iter().all(Option::is_none) && self.m.is_none()
    }

    fn resolve(&self) -> Result<RlceParams, CliError> {
        if let Some(level) = self.level {
            return Ok(recommended_params(level)?);
        }
        match (self.n, self.k, self.t) {
            (Some(n), Some(k), Some(t)) => Ok(RlceParams::new(n, k, t, self.r.unwrap_or(1), self.m.unwrap_or(8))),
            _ => Err(CliError::usage("give --level or all of --n, --k, --t (optionally --r, --m)")),
        }
    }
}

#[derive(Args)]
struct KeygenArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Output path for the public key.
    #[arg(long, default_value = "rlce.pub")]
    public: PathBuf,
    /// Output path for the private key.
    #[arg(long, default_value = "rlce.key")]
    private: PathBuf,
    /// Store the public key in systematic form.
    #[arg(long)]
    systematic: bool,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["input", "message"]))]
struct EncryptArgs {
    #[arg(long)]
    public_key: PathBuf,
    /// Message file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Message given inline.
    #[arg(long)]
    message: Option<String>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct DecryptArgs {
    #[arg(long)]
    private_key: PathBuf,
    /// Public key the private key belongs to; needed for the weight check.
    #[arg(long)]
    public_key: PathBuf,
    #[arg(long)]
    ciphertext: PathBuf,
    /// Output path; `-` writes to stdout.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ParamsArgs {
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Subcommand)]
enum AnalyzeCommand {
    /// Square-code dimension of a public key or a fresh GRS generator.
    Square(SquareArgs),
    /// Punctured square-code experiment over fresh keys.
    Distinguish(DistinguishArgs),
    /// Information-set decoding work factor.
    Isd(IsdArgs),
    /// Block equivalence construction on random targets.
    Equiv(EquivArgs),
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("code").required(true).args(["public_key", "grs_n"]))]
struct SquareArgs {
    /// Public key file whose generator is analysed.
    #[arg(long)]
    public_key: Option<PathBuf>,
    /// Length of a fresh random GRS code.
    #[arg(long, requires = "grs_k")]
    grs_n: Option<usize>,
    /// Dimension of the fresh GRS code.
    #[arg(long)]
    grs_k: Option<usize>,
    #[arg(long, default_value_t = 8)]
    m: u32,
    /// Delete this column before squaring.
    #[arg(long)]
    puncture: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SourceArg {
    Rlce,
    Grs,
}

#[derive(Args)]
struct DistinguishArgs {
    #[arg(long, default_value_t = 60)]
    n: usize,
    #[arg(long, default_value_t = 40)]
    k: usize,
    #[arg(long, default_value_t = 10)]
    t: usize,
    #[arg(long, default_value_t = 1)]
    r: usize,
    #[arg(long, default_value_t = 8)]
    m: u32,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    /// Puncture only this many random columns per trial.
    #[arg(long)]
    columns: Option<usize>,
    #[arg(long, value_enum, default_value_t = SourceArg::Rlce)]
    source: SourceArg,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Prange,
    LeeBrickell,
    Both,
}

#[derive(Args)]
struct IsdArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    t: usize,
    #[arg(long, default_value_t = 256)]
    q: u64,
    #[arg(long, value_enum, default_value_t = AlgorithmArg::Both)]
    algorithm: AlgorithmArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EquivArgs {
    #[arg(long, default_value_t = 6)]
    n: usize,
    #[arg(long, default_value_t = 4)]
    k: usize,
    #[arg(long, default_value_t = 3)]
    r: usize,
    #[arg(long, default_value_t = 8)]
    m: u32,
    #[arg(long, default_value_t = 20)]
    instances: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn rng_from(seed: Option<u64>) -> ChaCha20Rng {
    match seed {
        Some(s) => ChaCha20Rng::seed_from_u64(s),
        None => ChaCha20Rng::from_os_rng(),
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::io(path, e))
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult {
    if path == Path::new("-") {
        return io::stdout().write_all(bytes).map_err(|e| CliError::io(path, e));
    }
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult {
    match out {
        Some(path) => write_file(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_public(path: &Path) -> Result<PublicKey, CliError> {
    PublicKey::from_bytes(&read_file(path)?).map_err(|e| CliError::format(path, e))
}

fn cmd_keygen(args: &KeygenArgs) -> CliResult {
    let params = args.params.resolve()?;
    let mut rng = rng_from(args.seed);
    let (pk, sk) = keygen(&params, args.systematic, &mut rng)?;
    let (pk_bytes, sk_bytes) = (pk.to_bytes(), sk.to_bytes());
    write_file(&args.public, &pk_bytes)?;
    write_file(&args.private, &sk_bytes)?;
    println!("{params}");
    println!("public key: {} bytes", pk_bytes.len());
    println!("private key: {} bytes", sk_bytes.len());
    Ok(())
}

fn cmd_encrypt(args: &EncryptArgs) -> CliResult {
    let pk = load_public(&args.public_key)?;
    let message = match (&args.input, &args.message) {
        (Some(path), _) if path == Path::new("-") => {
            let mut buf = Vec::new();
            io::stdin().read_to_end(&mut buf).map_err(|e| CliError::io(path, e))?;
            buf
        }
        (Some(path), _) => read_file(path)?,
        (None, Some(text)) => text.as_bytes().to_vec(),
        (None, None) => unreachable!("clap requires a message source"),
    };
    let params = *pk.params();
    let elems = pack::pack(pk.field(), params.k, &message).ok_or_else(|| {
        CliError::usage(format!(
            "message is {} bytes; at most {} fit in k = {} elements of GF(2^{})",
            message.len(),
            pack::capacity(params.m, params.k),
            params.k,
            params.m
        ))
    })?;
    let ct = pk.encrypt(&elems, &mut rng_from(args.seed))?;
    write_file(&args.out, &ct.to_bytes(&params)?)
}

fn cmd_decrypt(args: &DecryptArgs) -> CliResult {
    let sk_bytes = read_file(&args.private_key)?;
    let sk = PrivateKey::from_bytes(&sk_bytes).map_err(|e| CliError::format(&args.private_key, e))?;
    let pk = load_public(&args.public_key)?;
    let ct_bytes = read_file(&args.ciphertext)?;
    let ct = Ciphertext::from_bytes(&ct_bytes, sk.params()).map_err(|e| CliError::format(&args.ciphertext, e))?;
    let elems = sk.decrypt(&pk, &ct)?;
    let message = pack::unpack(pk.field(), &elems)
        .ok_or_else(|| CliError { code: 5, message: "decrypted block is not a packed message".into() })?;
    write_file(&args.out, &message)
}

fn params_line(params: &RlceParams) -> String {
    let valid = match params.validate() {
        Ok(()) => "valid".to_string(),
        Err(e) => e.to_string(),
    };
    let q = 1u64 << params.m;
    let isd = isd_workfactor(params.code_length(), params.k, params.t, q, IsdAlgorithm::LeeBrickell)
        .map(|e| format!("{:.1}", e.log2_cost))
        .unwrap_or_else(|_| "n/a".into());
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        params.security_bits.map(|l| l.to_string()).unwrap_or_default(),
        params.n,
        params.k,
        params.t,
        params.r,
        params.m,
        public_key_size_bits(params, true) / 8,
        public_key_size_bits(params, false) / 8,
        isd,
        valid
    )
}

fn cmd_params(args: &ParamsArgs) -> CliResult {
    println!("level,n,k,t,r,m,systematic_pk_bytes,full_pk_bytes,lee_brickell_log2_cost,status");
    if args.params.is_empty() {
        for &(level, ..) in &RECOMMENDED {
            println!("{}", params_line(&recommended_params(level)?));
        }
    } else {
        println!("{}", params_line(&args.params.resolve()?));
    }
    Ok(())
}

fn square_csv(rep: &SquareCodeReport, punctured: Option<usize>) -> String {
    format!(
        "punctured_column,k,N,square_dim,bound,classification\n{},{},{},{},{},{}\n",
        punctured.map(|c| c.to_string()).unwrap_or_default(),
        rep.k,
        rep.n,
        rep.square_dim,
        rep.bound,
        rep.classification
    )
}

fn cmd_square(args: &SquareArgs) -> CliResult {
    let g: Matrix = match (&args.public_key, args.grs_n, args.grs_k) {
        (Some(path), ..) => load_public(path)?.generator().clone(),
        (None, Some(n), Some(k)) => {
            let field = Arc::new(Field::new(args.m).map_err(|e| CliError::usage(e.to_string()))?);
            GrsCode::random(&field, n, k, &mut rng_from(args.seed))
                .map_err(|e| CliError::usage(e.to_string()))?
                .generator_matrix()
        }
        _ => return Err(CliError::usage("give --public-key or --grs-n with --grs-k")),
    };
    let g = match args.puncture {
        Some(col) => puncture(&g, col)?,
        None => g,
    };
    emit(args.out.as_deref(), &square_csv(&square_code_dimension(&g), args.puncture))
}

fn cmd_distinguish(args: &DistinguishArgs) -> CliResult {
    let params = RlceParams::new(args.n, args.k, args.t, args.r, args.m);
    params.validate()?;
    let config = ExperimentConfig {
        params,
        trials: args.trials,
        sample_columns: args.columns,
        source: match args.source {
            SourceArg::Rlce => KeySource::Rlce,
            SourceArg::Grs => KeySource::Grs,
        },
    };
    let report = distinguisher_experiment(&config, &mut rng_from(args.seed))?;
    emit(args.out.as_deref(), &report.to_csv())?;
    eprintln!("random-like fraction: {:.4}", report.fraction_random_like());
    Ok(())
}

fn cmd_isd(args: &IsdArgs) -> CliResult {
    let algorithms: &[IsdAlgorithm] = match args.algorithm {
        AlgorithmArg::Prange => &[IsdAlgorithm::Prange],
        AlgorithmArg::LeeBrickell => &[IsdAlgorithm::LeeBrickell],
        AlgorithmArg::Both => &[IsdAlgorithm::Prange, IsdAlgorithm::LeeBrickell],
    };
    let mut csv = String::from("algorithm,n,k,t,q,p,log2_iterations,log2_cost\n");
    for &alg in algorithms {
        let e = isd_workfactor(args.n, args.k, args.t, args.q, alg)?;
        csv += &format!(
            "{},{},{},{},{},{},{:.4},{:.4}\n",
            e.algorithm, e.n, e.k, e.t, e.q, e.p, e.log2_iterations, e.log2_cost
        );
    }
    emit(args.out.as_deref(), &csv)
}

fn cmd_equiv(args: &EquivArgs) -> CliResult {
    let field = Arc::new(Field::new(args.m).map_err(|e| CliError::usage(e.to_string()))?);
    let mut rng = rng_from(args.seed);
    let w = args.r + 1;
    let mut csv = String::from("instance,n,k,r,result\n");
    for i in 0..args.instances {
        let code = GrsCode::random(&field, args.n, args.k, &mut rng).map_err(|e| CliError::usage(e.to_string()))?;
        let blocks: Vec<Matrix> =
            (0..args.n).map(|_| Matrix::random_full_rank(&field, args.k, w, &mut rng)).collect();
        let mut target = blocks[0].clone();
        for b in &blocks[1..] {
            target = target.hconcat(b).expect("equal row counts");
        }
        let result = match construct_equivalent(&target, &code, args.r, &mut rng) {
            Ok(eq) if eq.reconstruct(&code)? == target => "exact".to_string(),
            Ok(_) => "mismatch".to_string(),
            Err(AnalysisError::Infeasible { .. }) => "infeasible".to_string(),
            Err(e) => return Err(e.into()),
        };
        csv += &format!("{i},{},{},{},{result}\n", args.n, args.k, args.r);
    }
    emit(args.out.as_deref(), &csv)
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Keygen(a) => cmd_keygen(&a),
        Command::Encrypt(a) => cmd_encrypt(&a),
        Command::Decrypt(a) => cmd_decrypt(&a),
        Command::Params(a) => cmd_params(&a),
        Command::Analyze(AnalyzeCommand::Square(a)) => cmd_square(&a),
        Command::Analyze(AnalyzeCommand::Distinguish(a)) => cmd_distinguish(&a),
        Command::Analyze(AnalyzeCommand::Isd(a)) => cmd_isd(&a),
        Command::Analyze(AnalyzeCommand::Equiv(a)) => cmd_equiv(&a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
