// The coarse-to-fine loop, step by step.
//
// Prints the pyramid, records one trace row per iteration and writes the
// trace as CSV next to a montage of the kernel after every iteration.

use std::path::{Path, PathBuf};

use sdeblur::bench::{kernel_ncc, synth_blur, test_scene, KernelFamily, SynthSpec};
use sdeblur::imaging::{build_pyramid, save};
use sdeblur::pipeline::{deblur_uniform_with, DeblurConfig, Diagnostics};

pub fn run(out: &Path) -> sdeblur::Result<()> {
    let sharp = test_scene(128, 128, 1, 4)?;
    let spec = SynthSpec::new(
        KernelFamily::Line {
            length: 11.0,
            angle: 0.0,
        },
        0.002,
        4,
    );
    let (blurry, truth) = synth_blur(&sharp, &spec)?;
    let config = DeblurConfig::with_kernel_size(truth.size());

    for level in build_pyramid(
        128,
        128,
        config.kernel_size,
        config.min_kernel,
        config.pyramid_factor,
    )? {
        println!(
            "level {}x{} kernel {}",
            level.width, level.height, level.kernel_size
        );
    }

    let mut diag = Diagnostics::default();
    let (_, kernel) = deblur_uniform_with(&blurry, &config, Some(&mut diag))?;
    for row in &diag.trace {
        println!(
            "scale {} iter {}  lambda {:.3}  alpha {:.3}  f(K) {:.4}",
            row.scale, row.iter, row.lambda, row.alpha, row.fk_energy
        );
    }
    println!("final ncc {:.3}", kernel_ncc(&kernel, &truth));

    diag.write_trace(out.join("trace.csv"))?;
    if let Some(montage) = diag.kernel_montage(4) {
        save(&montage, out.join("kernel_montage.png"))?;
    }
    Ok(())
}

fn main() {
    let out = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    if let Err(e) = run(&out) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
