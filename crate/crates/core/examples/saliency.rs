// Frequency-tuned saliency, mask extraction and the background rectangle
// used for kernel estimation.

use std::path::{Path, PathBuf};

use sdeblur::bench::salient_composite;
use sdeblur::imaging::save;
use sdeblur::saliency::{binarize_and_dilate, largest_background_rectangle, saliency_map};

pub fn run(out: &Path) -> sdeblur::Result<()> {
    let scene = salient_composite(11)?;
    let map = saliency_map(&scene.blurry)?;
    let mask = binarize_and_dilate(&map, 2.0, 9)?;
    let rect = largest_background_rectangle(&mask, 27)?;

    let truth = &scene.masks[0];
    let hits = (0..mask.bits().len())
        .filter(|&i| mask.bits()[i] && truth.bits()[i])
        .count();
    println!(
        "mask pixels   {} ({} on the true patch of {})",
        mask.count_ones(),
        hits,
        truth.count_ones()
    );
    println!("rectangle     {rect}");

    save(&map, out.join("saliency_map.png"))?;
    mask.save(out.join("saliency_mask.pgm"))
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
