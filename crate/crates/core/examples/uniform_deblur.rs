// Blind deblurring of a uniformly blurred image.
//
// Synthesizes a motion-blurred scene, estimates the kernel coarse to fine
// and deconvolves it. Writes `uniform_blurry.png`, `uniform_deblurred.png`
// and `uniform_kernel.txt` to the output directory (first argument,
// default: the system temp dir).

use std::path::{Path, PathBuf};

use sdeblur::bench::{kernel_ncc, rmse, synth_blur, test_scene, KernelFamily, SynthSpec};
use sdeblur::imaging::save;
use sdeblur::pipeline::{deblur_uniform, DeblurConfig};

pub fn run(out: &Path) -> sdeblur::Result<()> {
    let sharp = test_scene(160, 160, 3, 1)?;
    let spec = SynthSpec::new(
        KernelFamily::Line {
            length: 9.0,
            angle: 30.0,
        },
        0.005,
        1,
    );
    let (blurry, truth) = synth_blur(&sharp, &spec)?;

    let config = DeblurConfig::with_kernel_size(truth.size());
    let (deblurred, kernel) = deblur_uniform(&blurry, &config)?;

    println!("rmse blurry    {:.4}", rmse(&blurry, &sharp, None)?);
    println!("rmse deblurred {:.4}", rmse(&deblurred, &sharp, None)?);
    println!("kernel ncc     {:.3}", kernel_ncc(&kernel, &truth));

    save(&blurry, out.join("uniform_blurry.png"))?;
    save(&deblurred, out.join("uniform_deblurred.png"))?;
    kernel.save(out.join("uniform_kernel.txt"))
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
