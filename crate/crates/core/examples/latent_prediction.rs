// Latent prediction: the anisotropic PDE step against a shock filter.
//
// Both sharpen a blurred image; the edge map shows where the PDE step
// pushed intensities.

use std::path::{Path, PathBuf};

use sdeblur::bench::{synth_blur, test_scene, KernelFamily, SynthSpec};
use sdeblur::imaging::{rgb_to_gray, save, PlanarImage};
use sdeblur::pipeline::edge_map_image;
use sdeblur::predict::{bilateral_filter, predict_latent, shock_filter, PredictParams};

fn peak_gradient(img: &PlanarImage) -> f64 {
    let mut peak: f64 = 0.0;
    for y in 0..img.height() - 1 {
        for x in 0..img.width() - 1 {
            let gx = img.at(x + 1, y) - img.at(x, y);
            let gy = img.at(x, y + 1) - img.at(x, y);
            peak = peak.max(gx.hypot(gy));
        }
    }
    peak
}

pub fn run(out: &Path) -> sdeblur::Result<()> {
    let sharp = rgb_to_gray(&test_scene(128, 128, 3, 2)?)?;
    let spec = SynthSpec::new(KernelFamily::Gaussian { sigma: 1.5 }, 0.0, 0);
    let (blurry, _) = synth_blur(&sharp, &spec)?;

    let prediction = predict_latent(&blurry, &PredictParams::default())?;
    let smoothed = bilateral_filter(&blurry, 2.0, 0.1)?;
    let shocked = shock_filter(&smoothed, 0.5, 5)?;

    println!("peak gradient sharp   {:.3}", peak_gradient(&sharp));
    println!("peak gradient blurry  {:.3}", peak_gradient(&blurry));
    println!(
        "peak gradient pde     {:.3}",
        peak_gradient(&prediction.latent)
    );
    println!("peak gradient shock   {:.3}", peak_gradient(&shocked));

    save(&prediction.latent, out.join("prediction_pde.png"))?;
    save(&shocked, out.join("prediction_shock.png"))?;
    save(
        &edge_map_image(&prediction.edge_map),
        out.join("prediction_edges.png"),
    )
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
