// Saliency-driven deblurring of an image whose background alone is
// blurred.
//
// The salient patch is detected, the kernel is estimated on the largest
// background rectangle, the patch is blurred by that kernel so the frame
// is uniformly blurred, and after deconvolution the original patch is put
// back unchanged.

use std::path::{Path, PathBuf};

use sdeblur::bench::{kernel_ncc, rmse, salient_composite};
use sdeblur::imaging::save;
use sdeblur::pipeline::{deblur_spatially_variant_with, DeblurConfig, ForegroundMode};

pub fn run(out: &Path) -> sdeblur::Result<()> {
    let scene = salient_composite(41)?;
    let config = DeblurConfig::with_kernel_size(scene.kernels[0].size());
    let result = deblur_spatially_variant_with(
        &scene.blurry,
        &config,
        ForegroundMode::SharpForeground,
        None,
        None,
    )?;

    let fg = &scene.masks[0];
    let bg = fg.complement();
    println!("estimation rect   {}", result.rect);
    println!("salient pixels    {}", result.mask.count_ones());
    println!(
        "kernel ncc        {:.3}",
        kernel_ncc(&result.kernel, &scene.kernels[0])
    );
    println!(
        "foreground rmse   {:.4}",
        rmse(&result.image, &scene.sharp, Some(fg))?
    );
    println!(
        "background rmse   {:.4} -> {:.4}",
        rmse(&scene.blurry, &scene.sharp, Some(&bg))?,
        rmse(&result.image, &scene.sharp, Some(&bg))?
    );

    save(&scene.blurry, out.join("variant_input.png"))?;
    save(&result.image, out.join("variant_output.png"))?;
    result.mask.save(out.join("variant_mask.pgm"))
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
