// Fourier-domain kernel estimation from known sharp gradients.
//
// With the true gradients in hand the solve, clean-up and centering are
// the whole story; the blind pipeline replaces them with predictions.

use std::path::{Path, PathBuf};

use sdeblur::bench::{kernel_ncc, synth_kernel, test_scene, KernelFamily, SynthSpec};
use sdeblur::imaging::{
    convolve, derivative, ConvMode, Derivative, EdgeMode, GradientField, Padding,
};
use sdeblur::kernel_est::{
    center_kernel, denoise_kernel, estimate_kernel, GradientPairs, KernelEstParams,
};

pub fn run(out: &Path) -> sdeblur::Result<()> {
    let sharp = test_scene(96, 96, 1, 3)?;
    let grads = GradientField::new(
        derivative(&sharp, Derivative::Dx)?,
        derivative(&sharp, Derivative::Dy)?,
    )?;
    let params = KernelEstParams::default();
    for (i, family) in [
        KernelFamily::Line {
            length: 7.0,
            angle: 60.0,
        },
        KernelFamily::Gaussian { sigma: 1.0 },
        KernelFamily::Disk { radius: 2.5 },
    ]
    .into_iter()
    .enumerate()
    {
        let truth = synth_kernel(&SynthSpec::new(family, 0.0, 0))?;
        let blurry = convolve(&sharp, &truth, ConvMode::Fft, Padding::Replicate)?;
        let mut pairs = GradientPairs::new(&grads, &blurry, params.weights, EdgeMode::Replicate)?;
        pairs.clear_border(truth.size());
        let raw = estimate_kernel(&pairs, &params, truth.size())?;
        let clean = center_kernel(&denoise_kernel(&raw, params.denoise_divisor)?);
        println!(
            "{:<12} ncc raw {:.3}  cleaned {:.3}",
            family.to_string(),
            kernel_ncc(&raw, &truth),
            kernel_ncc(&clean, &truth)
        );
        clean.save(out.join(format!("estimated_kernel_{i}.txt")))?;
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
