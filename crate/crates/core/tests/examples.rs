mod uniform_deblur {
    #![allow(dead_code)]
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/uniform_deblur.rs"
    ));
}

mod spatially_variant {
    #![allow(dead_code)]
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/spatially_variant.rs"
    ));
}

mod multi_region {
    #![allow(dead_code)]
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/multi_region.rs"
    ));
}

mod saliency {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/saliency.rs"));
}

mod synth_and_eval {
    #![allow(dead_code)]
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/synth_and_eval.rs"
    ));
}

mod kernel_estimation {
    #![allow(dead_code)]
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/kernel_estimation.rs"
    ));
}

mod deconvolution {
    #![allow(dead_code)]
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/deconvolution.rs"
    ));
}

mod latent_prediction {
    #![allow(dead_code)]
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/latent_prediction.rs"
    ));
}

mod coarse_to_fine {
    #![allow(dead_code)]
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/coarse_to_fine.rs"
    ));
}

fn check(run: fn(&std::path::Path) -> sdeblur::Result<()>, outputs: &[&str]) {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path()).expect("example should run");
    for name in outputs {
        assert!(dir.path().join(name).is_file(), "missing {name}");
    }
}

#[test]
fn uniform_deblur_example_runs() {
    check(
        uniform_deblur::run,
        &[
            "uniform_blurry.png",
            "uniform_deblurred.png",
            "uniform_kernel.txt",
        ],
    );
}

#[test]
fn spatially_variant_example_runs() {
    check(
        spatially_variant::run,
        &["variant_output.png", "variant_mask.pgm"],
    );
}

#[test]
fn multi_region_example_runs() {
    check(multi_region::run, &["multi_output.png"]);
}

#[test]
fn saliency_example_runs() {
    check(saliency::run, &["saliency_map.png", "saliency_mask.pgm"]);
}

#[test]
fn synth_and_eval_example_runs() {
    check(
        synth_and_eval::run,
        &["synth_report_0.json", "synth_kernel_2.txt"],
    );
}

#[test]
fn kernel_estimation_example_runs() {
    check(kernel_estimation::run, &["estimated_kernel_0.txt"]);
}

#[test]
fn deconvolution_example_runs() {
    check(deconvolution::run, &["deconvolved.png"]);
}

#[test]
fn latent_prediction_example_runs() {
    check(
        latent_prediction::run,
        &["prediction_pde.png", "prediction_edges.png"],
    );
}

#[test]
fn coarse_to_fine_example_runs() {
    check(coarse_to_fine::run, &["trace.csv", "kernel_montage.png"]);
}
