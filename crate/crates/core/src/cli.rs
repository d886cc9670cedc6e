//! Command-line front end. [`run`] parses arguments, executes one command
//! and returns the process exit code: 0 on success, 1 when processing
//! fails and 2 for usage errors.

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::bench::{
    kernel_ncc, rmse, synth_blur, test_scene, BenchReport, KernelFamily, SynthSpec,
};
use crate::error::DeblurError;
use crate::imaging::{self, BlurKernel, PlanarImage};
use crate::pipeline::{
    deblur_multi_region_with, deblur_spatially_variant_with, deblur_uniform_with, edge_map_image,
    saliency_mask, DeblurConfig, Diagnostics, ForegroundMode,
};
use crate::saliency::{largest_background_rectangle, saliency_map, BinaryMask};

#[derive(Debug, Parser)]
#[command(
    name = "sdeblur",
    version,
    about = "Blind motion deblurring with saliency-guided fusion"
)]
pub struct Cli {
    /// Worker threads for the parallel stages (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Uniform blind deblurring.
    Deblur(DeblurArgs),
    /// Deblur an image whose blur is confined to one side of its saliency mask.
    DeblurSv(DeblurSvArgs),
    /// Deblur several user-masked regions, each with its own kernel.
    DeblurMulti(DeblurMultiArgs),
    /// Saliency map, binary mask and background rectangle.
    Saliency(SaliencyArgs),
    /// Blur a sharp image with a synthetic kernel and noise.
    Synth(SynthArgs),
    /// Compare deblurred output against ground truth.
    Eval(EvalArgs),
    /// Synthesize, deblur and evaluate a set of images with timing.
    Bench(BenchArgs),
}

/// Pipeline parameter overrides shared by the deblurring commands.
#[derive(Debug, Args)]
pub struct Tuning {
    /// Blur kernel size (odd).
    #[arg(short = 'k', long = "ksize", value_name = "N")]
    pub ksize: Option<usize>,
    /// Flat `key = value` config file applied before the flags below.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub alpha0: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Alternations of the final deconvolution.
    #[arg(long = "inner-iters", value_name = "N")]
    pub inner_iters: Option<usize>,
    /// Estimation iterations per pyramid level.
    #[arg(long = "iters", value_name = "N")]
    pub iters: Option<usize>,
    /// Any config key, e.g. `--set threshold_ratio=0.3`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

#[derive(Debug, Args)]
pub struct DeblurArgs {
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    #[command(flatten)]
    pub tuning: Tuning,
    /// Write the estimated kernel as text.
    #[arg(long, value_name = "PATH")]
    pub dump_kernel: Option<PathBuf>,
    /// Per-iteration CSV trace of the estimation loop.
    #[arg(long, value_name = "PATH")]
    pub trace: Option<PathBuf>,
    /// Tiled image of every intermediate kernel.
    #[arg(long, value_name = "PATH")]
    pub kernel_montage: Option<PathBuf>,
    /// Magnitude of the last PDE enhancement map.
    #[arg(long, value_name = "PATH")]
    pub edge_map: Option<PathBuf>,
    /// Directory receiving the kernel and predicted latent of every scale.
    #[arg(long, value_name = "DIR")]
    pub diag_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DeblurSvArgs {
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    #[command(flatten)]
    pub tuning: Tuning,
    #[arg(long, default_value = "sharp-fg", value_name = "sharp-fg|blurry-fg")]
    pub mode: ForegroundMode,
    /// Foreground mask (PGM, 0/255) replacing the saliency segmentation.
    #[arg(long, value_name = "PATH")]
    pub mask: Option<PathBuf>,
    /// Write the foreground mask that was used.
    #[arg(long, value_name = "PATH")]
    pub mask_out: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub dump_kernel: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DeblurMultiArgs {
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    #[command(flatten)]
    pub tuning: Tuning,
    /// Region mask (PGM, 0/255). Repeat once per region.
    #[arg(long = "mask", value_name = "PATH")]
    pub masks: Vec<PathBuf>,
    /// Directory receiving `kernel_<i>.txt` per region.
    #[arg(long, value_name = "DIR")]
    pub kernel_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SaliencyArgs {
    pub input: PathBuf,
    /// Saliency map image.
    #[arg(short, long)]
    pub output: PathBuf,
    /// Thresholded and dilated mask (PGM).
    #[arg(long, value_name = "PATH")]
    pub mask_out: Option<PathBuf>,
    #[command(flatten)]
    pub tuning: Tuning,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Sharp input image; omit to use a generated test scene.
    pub input: Option<PathBuf>,
    /// `line:LEN:DEG`, `gaussian:SIGMA` or `disk:RADIUS`.
    #[arg(long, value_name = "SPEC")]
    pub kernel: KernelFamily,
    /// Kernel side (default: smallest odd size holding the shape).
    #[arg(short = 'k', long = "ksize", value_name = "N")]
    pub ksize: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub kernel_out: Option<PathBuf>,
    /// Seed of the generated test scene when no input is given.
    #[arg(long, value_name = "SEED")]
    pub scene: Option<u64>,
    /// Side of the generated test scene.
    #[arg(long, default_value_t = 256)]
    pub size: usize,
    /// Write the sharp image that was blurred.
    #[arg(long, value_name = "PATH")]
    pub sharp_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub sharp: PathBuf,
    #[arg(long)]
    pub blurry: PathBuf,
    #[arg(long)]
    pub deblurred: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub kernel_true: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub kernel_est: Option<PathBuf>,
    /// Restrict the RMSEs to the set pixels of a mask (PGM).
    #[arg(long, value_name = "PATH")]
    pub mask: Option<PathBuf>,
    /// Report identifier (default: file stem of the sharp image).
    #[arg(long)]
    pub id: Option<String>,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Sharp images to blur and restore.
    pub inputs: Vec<PathBuf>,
    /// Generated test scenes to add, by seed. Repeatable.
    #[arg(long = "scene", value_name = "SEED")]
    pub scenes: Vec<u64>,
    #[arg(long, default_value_t = 256)]
    pub size: usize,
    #[arg(long, default_value = "line:15:30", value_name = "SPEC")]
    pub kernel: KernelFamily,
    #[arg(long, default_value_t = 0.005)]
    pub noise: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub tuning: Tuning,
    /// JSON array of reports.
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Directory receiving blurry and deblurred images.
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
}

/// Failure of a command, mapped to an exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Processing(DeblurError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Processing(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Processing(e) => e.fmt(f),
        }
    }
}

impl From<DeblurError> for CliError {
    fn from(e: DeblurError) -> Self {
        CliError::Processing(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Messages go to standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command inside a pool of the requested size.
pub fn execute(cli: Cli) -> CliResult<()> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start thread pool: {e}")))?;
    pool.install(|| match cli.command {
        Command::Deblur(a) => deblur(a),
        Command::DeblurSv(a) => deblur_sv(a),
        Command::DeblurMulti(a) => deblur_multi(a),
        Command::Saliency(a) => saliency(a),
        Command::Synth(a) => synth(a),
        Command::Eval(a) => eval(a),
        Command::Bench(a) => bench(a),
    })
}

impl Tuning {
    /// Defaults, then the config file, then the individual flags.
    pub fn config(&self) -> CliResult<DeblurConfig> {
        let mut c = DeblurConfig::default();
        if let Some(path) = &self.config {
            c.apply_file(path)?;
        }
        if let Some(k) = self.ksize {
            c.kernel_size = k;
        }
        if let Some(v) = self.alpha0 {
            c.alpha0 = v;
        }
        if let Some(v) = self.mu {
            c.mu = v;
        }
        if let Some(v) = self.beta {
            c.deconv.beta = v;
        }
        if let Some(v) = self.inner_iters {
            c.deconv.inner_iterations = v;
        }
        if let Some(v) = self.iters {
            c.iterations_per_scale = v;
        }
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got {kv:?}")))?;
            c.set(k.trim(), v.trim()).map_err(CliError::Usage)?;
        }
        c.validate()?;
        Ok(c)
    }
}

fn load_masks(paths: &[PathBuf]) -> CliResult<Vec<BinaryMask>> {
    Ok(paths
        .iter()
        .map(BinaryMask::load)
        .collect::<crate::Result<_>>()?)
}

fn create_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|source| {
        CliError::Processing(DeblurError::Io {
            path: dir.to_path_buf(),
            source,
        })
    })
}

/// Last kernel and prediction of every scale as images in `dir`.
fn write_scale_images(diag: &Diagnostics, per_scale: usize, dir: &Path) -> CliResult<()> {
    create_dir(dir)?;
    for (s, chunk) in diag.kernels.chunks(per_scale).enumerate() {
        let k = chunk.last().expect("chunks are non-empty");
        let max = k.max().max(f64::MIN_POSITIVE);
        let img = PlanarImage::from_vec(
            k.size(),
            k.size(),
            1,
            k.weights().iter().map(|v| v / max).collect(),
        )?;
        imaging::save(&img, dir.join(format!("kernel_s{s}.png")))?;
    }
    for (s, p) in diag.predictions.iter().enumerate() {
        imaging::save(p, dir.join(format!("prediction_s{s}.png")))?;
    }
    Ok(())
}

fn deblur(a: DeblurArgs) -> CliResult<()> {
    let config = a.tuning.config()?;
    let input = imaging::load(&a.input)?;
    let mut diag = Diagnostics::default();
    let (out, kernel) = deblur_uniform_with(&input, &config, Some(&mut diag))?;
    imaging::save(&out, &a.output)?;
    if let Some(p) = &a.dump_kernel {
        kernel.save(p)?;
    }
    if let Some(p) = &a.trace {
        diag.write_trace(p)?;
    }
    if let Some(p) = &a.kernel_montage {
        if let Some(m) = diag.kernel_montage(4) {
            imaging::save(&m, p)?;
        }
    }
    if let (Some(p), Some(e)) = (&a.edge_map, &diag.edge_map) {
        imaging::save(&edge_map_image(e), p)?;
    }
    if let Some(dir) = &a.diag_dir {
        write_scale_images(&diag, config.iterations_per_scale, dir)?;
    }
    Ok(())
}

fn deblur_sv(a: DeblurSvArgs) -> CliResult<()> {
    let config = a.tuning.config()?;
    let input = imaging::load(&a.input)?;
    let mask = a.mask.as_ref().map(BinaryMask::load).transpose()?;
    let mut diag = Diagnostics::default();
    let out =
        deblur_spatially_variant_with(&input, &config, a.mode, mask.as_ref(), Some(&mut diag))?;
    imaging::save(&out.image, &a.output)?;
    println!("rect {}", out.rect);
    if let Some(p) = &a.mask_out {
        out.mask.save(p)?;
    }
    if let Some(p) = &a.dump_kernel {
        out.kernel.save(p)?;
    }
    if let Some(p) = &a.trace {
        diag.write_trace(p)?;
    }
    Ok(())
}

fn deblur_multi(a: DeblurMultiArgs) -> CliResult<()> {
    let config = a.tuning.config()?;
    let input = imaging::load(&a.input)?;
    let masks = load_masks(&a.masks)?;
    let out = deblur_multi_region_with(&input, &masks, &config)?;
    imaging::save(&out.image, &a.output)?;
    for (i, r) in out.rects.iter().enumerate() {
        println!("region {i} rect {r}");
    }
    if let Some(dir) = &a.kernel_dir {
        create_dir(dir)?;
        for (i, k) in out.kernels.iter().enumerate() {
            k.save(dir.join(format!("kernel_{i}.txt")))?;
        }
    }
    Ok(())
}

fn saliency(a: SaliencyArgs) -> CliResult<()> {
    let config = a.tuning.config()?;
    let input = imaging::load(&a.input)?;
    imaging::save(&saliency_map(&input)?, &a.output)?;
    let mask = saliency_mask(&input, &config)?;
    if let Some(p) = &a.mask_out {
        mask.save(p)?;
    }
    match largest_background_rectangle(&mask, config.min_side()) {
        Ok(r) => println!("{r}"),
        Err(e) => eprintln!("warning: {e}"),
    }
    Ok(())
}

fn scene_or_file(
    input: Option<&PathBuf>,
    scene: Option<u64>,
    size: usize,
) -> CliResult<PlanarImage> {
    match (input, scene) {
        (Some(p), None) => Ok(imaging::load(p)?),
        (None, Some(seed)) => Ok(test_scene(size, size, 3, seed)?),
        (None, None) => Err(CliError::Usage(
            "give an input image or --scene SEED".into(),
        )),
        (Some(_), Some(_)) => Err(CliError::Usage(
            "an input image and --scene are mutually exclusive".into(),
        )),
    }
}

fn synth(a: SynthArgs) -> CliResult<()> {
    let sharp = scene_or_file(a.input.as_ref(), a.scene, a.size)?;
    let spec = SynthSpec {
        size: a.ksize,
        ..SynthSpec::new(a.kernel, a.noise, a.seed)
    };
    let (blurry, kernel) = synth_blur(&sharp, &spec)?;
    imaging::save(&blurry, &a.output)?;
    if let Some(p) = &a.kernel_out {
        kernel.save(p)?;
    }
    if let Some(p) = &a.sharp_out {
        imaging::save(&sharp, p)?;
    }
    Ok(())
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(
        || path.display().to_string(),
        |s| s.to_string_lossy().into_owned(),
    )
}

fn eval(a: EvalArgs) -> CliResult<()> {
    let sharp = imaging::load(&a.sharp)?;
    let blurry = imaging::load(&a.blurry)?;
    let deblurred = imaging::load(&a.deblurred)?;
    let mask = a.mask.as_ref().map(BinaryMask::load).transpose()?;
    let k_true = a.kernel_true.as_ref().map(BlurKernel::load).transpose()?;
    let k_est = a.kernel_est.as_ref().map(BlurKernel::load).transpose()?;
    let report = BenchReport {
        image_id: a.id.unwrap_or_else(|| stem(&a.sharp)),
        width: sharp.width(),
        height: sharp.height(),
        ksize: k_true
            .as_ref()
            .or(k_est.as_ref())
            .map_or(0, BlurKernel::size),
        rmse_blurry: rmse(&blurry, &sharp, mask.as_ref())?,
        rmse_deblurred: rmse(&deblurred, &sharp, mask.as_ref())?,
        kernel_ncc: k_true
            .as_ref()
            .zip(k_est.as_ref())
            .map(|(t, e)| kernel_ncc(e, t)),
        seconds: None,
    };
    match &a.json {
        Some(p) => report.save(p)?,
        None => print!("{}", report.to_json()),
    }
    Ok(())
}

fn bench(a: BenchArgs) -> CliResult<()> {
    let mut config = a.tuning.config()?;
    let spec = SynthSpec::new(a.kernel, a.noise, a.seed);
    if a.tuning.ksize.is_none() {
        config.kernel_size = spec.kernel_size();
    }
    let mut cases: Vec<(String, PlanarImage)> = Vec::new();
    for p in &a.inputs {
        cases.push((stem(p), imaging::load(p)?));
    }
    for &s in &a.scenes {
        cases.push((format!("scene{s}"), test_scene(a.size, a.size, 3, s)?));
    }
    if cases.is_empty() {
        return Err(CliError::Usage("give sharp images or --scene SEED".into()));
    }
    if let Some(dir) = &a.out_dir {
        create_dir(dir)?;
    }
    let mut reports = Vec::new();
    println!(
        "{:<16} {:>9} {:>9} {:>7} {:>8}",
        "image", "rmse_in", "rmse_out", "ncc", "seconds"
    );
    for (id, sharp) in cases {
        let (blurry, k_true) = synth_blur(&sharp, &spec)?;
        let start = Instant::now();
        let (out, k_est) = deblur_uniform_with(&blurry, &config, None)?;
        let seconds = start.elapsed().as_secs_f64();
        let report = BenchReport {
            image_id: id.clone(),
            width: sharp.width(),
            height: sharp.height(),
            ksize: config.kernel_size,
            rmse_blurry: rmse(&blurry, &sharp, None)?,
            rmse_deblurred: rmse(&out, &sharp, None)?,
            kernel_ncc: Some(kernel_ncc(&k_est, &k_true)),
            seconds: Some(seconds),
        };
        println!(
            "{:<16} {:>9.5} {:>9.5} {:>7.3} {:>8.2}",
            id,
            report.rmse_blurry,
            report.rmse_deblurred,
            report.kernel_ncc.unwrap_or(f64::NAN),
            seconds
        );
        if let Some(dir) = &a.out_dir {
            imaging::save(&blurry, dir.join(format!("{id}_blurry.png")))?;
            imaging::save(&out, dir.join(format!("{id}_deblurred.png")))?;
            k_est.save(dir.join(format!("{id}_kernel.txt")))?;
        }
        reports.push(report);
    }
    if let Some(p) = &a.json {
        let text = serde_json::to_string_pretty(&reports).expect("reports serialize") + "\n";
        std::fs::write(p, text).map_err(|source| DeblurError::Io {
            path: p.clone(),
            source,
        })?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("sdeblur").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn tuning_layers_flags_over_defaults() {
        let cli = parse(&[
            "deblur",
            "in.png",
            "-o",
            "out.png",
            "-k",
            "9",
            "--mu",
            "0.8",
            "--set",
            "threshold_ratio=0.3",
        ]);
        let Command::Deblur(a) = cli.command else {
            panic!("wrong command")
        };
        let c = a.tuning.config().unwrap();
        assert_eq!(
            (c.kernel_size, c.mu, c.kernel.threshold_ratio),
            (9, 0.8, 0.3)
        );
    }

    #[test]
    fn bad_set_is_a_usage_error() {
        let cli = parse(&["deblur", "in.png", "-o", "out.png", "--set", "nope=1"]);
        let Command::Deblur(a) = cli.command else {
            panic!("wrong command")
        };
        assert_eq!(a.tuning.config().unwrap_err().exit_code(), 2);
    }

    #[test]
    fn invalid_config_is_a_processing_error() {
        let cli = parse(&["deblur", "in.png", "-o", "out.png", "--iters", "0"]);
        let Command::Deblur(a) = cli.command else {
            panic!("wrong command")
        };
        assert_eq!(a.tuning.config().unwrap_err().exit_code(), 1);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["sdeblur", "deblur", "--bogus"]), 2);
        assert_eq!(run(["sdeblur"]), 2);
        assert_eq!(run(["sdeblur", "--help"]), 0);
        assert_eq!(
            run(["sdeblur", "synth", "--kernel", "spiral:3", "-o", "x.png"]),
            2
        );
        assert_eq!(
            run([
                "sdeblur",
                "deblur",
                "/nonexistent/in.png",
                "-o",
                "/tmp/never.png"
            ]),
            1
        );
    }

    #[test]
    fn mode_parses() {
        let cli = parse(&["deblur-sv", "in.png", "-o", "o.png", "--mode", "blurry-fg"]);
        let Command::DeblurSv(a) = cli.command else {
            panic!("wrong command")
        };
        assert_eq!(a.mode, ForegroundMode::BlurryForeground);
    }
}
