// Two regions blurred in different directions over a sharp background.
//
// Each region gets its own kernel, estimated outside the other regions,
// and its own fused image; the background is returned untouched.

use std::path::{Path, PathBuf};

use sdeblur::bench::{kernel_ncc, rmse, two_region_composite};
use sdeblur::imaging::save;
use sdeblur::pipeline::{deblur_multi_region_with, DeblurConfig};

pub fn run(out: &Path) -> sdeblur::Result<()> {
    let scene = two_region_composite(21)?;
    let config = DeblurConfig::with_kernel_size(9);
    let result = deblur_multi_region_with(&scene.blurry, &scene.masks, &config)?;

    for (i, mask) in scene.masks.iter().enumerate() {
        println!(
            "region {i}: rect {}  ncc {:.3}  rmse {:.4} -> {:.4}",
            result.rects[i],
            kernel_ncc(&result.kernels[i], &scene.kernels[i]),
            rmse(&scene.blurry, &scene.sharp, Some(mask))?,
            rmse(&result.image, &scene.sharp, Some(mask))?
        );
    }
    let background = scene.masks[0].union(&scene.masks[1])?.complement();
    println!(
        "background change {:.1e}",
        rmse(&result.image, &scene.blurry, Some(&background))?
    );

    save(&scene.blurry, out.join("multi_input.png"))?;
    save(&result.image, out.join("multi_output.png"))
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
