// Non-blind deconvolution with the adaptive shrinkage scheme.
//
// Shows how the number of alternations and the starting `α` change the
// result for a known kernel.

use std::path::{Path, PathBuf};

use sdeblur::bench::{rmse, synth_blur, test_scene, KernelFamily, SynthSpec};
use sdeblur::deconv::{deconvolve, AlphaSchedule, DeconvParams};
use sdeblur::imaging::save;

pub fn run(out: &Path) -> sdeblur::Result<()> {
    let sharp = test_scene(128, 128, 3, 5)?;
    let spec = SynthSpec::new(
        KernelFamily::Line {
            length: 11.0,
            angle: 120.0,
        },
        0.003,
        5,
    );
    let (blurry, kernel) = synth_blur(&sharp, &spec)?;
    println!("blurry         rmse {:.4}", rmse(&blurry, &sharp, None)?);

    let mut best = None;
    for alpha0 in [0.05, 0.2, 0.8] {
        for inner in [1, 3, 6] {
            let params = DeconvParams {
                inner_iterations: inner,
                ..DeconvParams::default()
            };
            let restored = deconvolve(&blurry, &kernel, AlphaSchedule::new(alpha0, 0.9), &params)?;
            let e = rmse(&restored, &sharp, None)?;
            println!("alpha0 {alpha0:<4} x{inner}  rmse {e:.4}");
            if best.as_ref().map_or(true, |(b, _)| e < *b) {
                best = Some((e, restored));
            }
        }
    }
    let (_, restored) = best.expect("at least one run");
    save(&restored, out.join("deconvolved.png"))
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
