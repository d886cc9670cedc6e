// Forward synthesis and scoring.
//
// Blurs a scene with each kernel family, deconvolves with the true kernel
// and writes one JSON report per case.

use std::path::{Path, PathBuf};

use sdeblur::bench::{
    kernel_ncc, rmse, synth_blur, test_scene, BenchReport, KernelFamily, SynthSpec,
};
use sdeblur::pipeline::{deconvolve_final, DeblurConfig};

pub fn run(out: &Path) -> sdeblur::Result<()> {
    let sharp = test_scene(96, 96, 1, 7)?;
    for (i, spec) in ["line:9:0", "gaussian:1.5", "disk:3"].iter().enumerate() {
        let family: KernelFamily = spec.parse().map_err(sdeblur::DeblurError::Parameter)?;
        let (blurry, kernel) = synth_blur(&sharp, &SynthSpec::new(family, 0.002, i as u64))?;
        let restored = deconvolve_final(
            &blurry,
            &kernel,
            &DeblurConfig::with_kernel_size(kernel.size()),
        )?;
        let report = BenchReport {
            image_id: format!("scene7-{family}"),
            width: sharp.width(),
            height: sharp.height(),
            ksize: kernel.size(),
            rmse_blurry: rmse(&blurry, &sharp, None)?,
            rmse_deblurred: rmse(&restored, &sharp, None)?,
            kernel_ncc: Some(kernel_ncc(&kernel, &kernel)),
            seconds: None,
        };
        println!(
            "{:<12} {:.4} -> {:.4}",
            family.to_string(),
            report.rmse_blurry,
            report.rmse_deblurred
        );
        report.save(out.join(format!("synth_report_{i}.json")))?;
        kernel.save(out.join(format!("synth_kernel_{i}.txt")))?;
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
