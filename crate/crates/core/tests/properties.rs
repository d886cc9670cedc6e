mod common;

use proptest::prelude::*;
use sdeblur::bench::rmse;
use sdeblur::deconv::update_v;
use sdeblur::imaging::{build_pyramid, convolve, ConvMode, Padding, PlanarImage};
use sdeblur::kernel_est::{align_kernel, center_kernel, denoise_kernel};
use sdeblur::predict::{pde_tensors, predict_latent, PredictParams};
use sdeblur::saliency::{fuse_final, separate, BinaryMask};
use sdeblur::BlurKernel;

fn image(max: usize) -> impl Strategy<Value = PlanarImage> {
    (3..=max, 3..=max).prop_flat_map(|(w, h)| {
        prop::collection::vec(0.0..=1.0f64, w * h)
            .prop_map(move |d| PlanarImage::from_vec(w, h, 1, d).unwrap())
    })
}

fn kernel() -> impl Strategy<Value = BlurKernel> {
    prop::sample::select(vec![3usize, 5, 7]).prop_flat_map(|n| {
        prop::collection::vec(0.0..1.0f64, n * n)
            .prop_filter("some mass", |w| w.iter().any(|&v| v > 1e-3))
            .prop_map(move |w| BlurKernel::new(n, w).unwrap().normalized().unwrap())
    })
}

/// Kernels whose support is small enough that centering never wraps.
fn compact_kernel() -> impl Strategy<Value = BlurKernel> {
    prop::sample::select(vec![7usize, 9, 11]).prop_flat_map(|n| {
        let b = n / 2;
        (
            0..=n - b,
            0..=n - b,
            prop::collection::vec(0.01..1.0f64, b * b),
        )
            .prop_map(move |(x0, y0, w)| {
                BlurKernel::from_fn(n, |x, y| {
                    if (x0..x0 + b).contains(&x) && (y0..y0 + b).contains(&y) {
                        w[(y - y0) * b + x - x0]
                    } else {
                        0.0
                    }
                })
                .unwrap()
                .normalized()
                .unwrap()
            })
    })
}

fn image_and_mask(max: usize) -> impl Strategy<Value = (PlanarImage, BinaryMask)> {
    image(max).prop_flat_map(|img| {
        let (w, h) = (img.width(), img.height());
        prop::collection::vec(any::<bool>(), w * h).prop_map(move |bits| {
            (
                img.clone(),
                BinaryMask::from_fn(w, h, |x, y| bits[y * w + x]),
            )
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unit_sum_kernels_preserve_constants(k in kernel(), v in 0.0..1.0f64) {
        let img = PlanarImage::filled(12, 10, 1, v);
        for mode in [ConvMode::Spatial, ConvMode::Fft] {
            let out = convolve(&img, &k, mode, Padding::Replicate).unwrap();
            prop_assert!(out.data().iter().all(|&o| (o - v).abs() <= 1e-9));
        }
    }

    #[test]
    fn denoise_is_normalized_and_idempotent(k in kernel(), d in 128.0..=256.0f64) {
        let once = denoise_kernel(&k, d).unwrap();
        prop_assert!(once.is_normalized(1e-9));
        prop_assert!(once.weights().iter().all(|&v| v >= 0.0));
        let twice = denoise_kernel(&once, d).unwrap();
        prop_assert!(common::max_abs_diff(once.weights(), twice.weights()) <= 1e-12);
    }

    #[test]
    fn alignment_centers_compact_kernels(k in compact_kernel()) {
        let c = k.radius() as f64;
        let a = align_kernel(&k);
        prop_assert!(a.is_normalized(1e-9));
        let (ax, ay) = a.centroid();
        prop_assert!((ax - c).abs() <= 0.5 + 1e-12 && (ay - c).abs() <= 0.5 + 1e-12);
        let centered = center_kernel(&k);
        prop_assert!(centered.is_normalized(1e-9));
        let (cx, cy) = centered.centroid();
        prop_assert!((cx - c).abs() <= 1e-9 && (cy - c).abs() <= 1e-9);
    }

    #[test]
    fn shrinkage_contracts_gradients(img in image(12), alpha in 0.001..1.0f64, beta in 0.0..0.1f64) {
        let v = update_v(&img, alpha, beta).unwrap();
        let raw = update_v(&img, alpha, 0.0).unwrap();
        for i in 0..img.area() {
            let (a, b) = ([v.dx.data()[i], v.dy.data()[i]], [raw.dx.data()[i], raw.dy.data()[i]]);
            let (ma, mb) = (a[0].hypot(a[1]), b[0].hypot(b[1]));
            prop_assert!(ma <= mb + 1e-15);
            prop_assert!((mb - ma - (beta / (2.0 * alpha)).min(mb)).abs() <= 1e-12);
            // same direction
            prop_assert!((a[0] * b[1] - a[1] * b[0]).abs() <= 1e-12);
        }
    }

    #[test]
    fn separation_partitions_the_image((img, mask) in image_and_mask(10)) {
        let (fg, bg) = separate(&img, &mask).unwrap();
        for i in 0..img.area() {
            prop_assert_eq!(fg.data()[i] + bg.data()[i], img.data()[i]);
            prop_assert!(fg.data()[i] == 0.0 || bg.data()[i] == 0.0);
        }
    }

    #[test]
    fn fusing_an_image_with_itself_is_identity((img, mask) in image_and_mask(10)) {
        prop_assert_eq!(fuse_final(&img, &img, &mask).unwrap(), img);
    }

    #[test]
    fn complement_is_an_involution((_img, mask) in image_and_mask(10)) {
        prop_assert_eq!(mask.complement().complement(), mask.clone());
        prop_assert_eq!(mask.complement().count_ones(), mask.bits().len() - mask.count_ones());
    }

    #[test]
    fn pyramid_is_monotone(w in 45usize..400, h in 45usize..400, ks in prop::sample::select(vec![5usize, 9, 15, 25, 31])) {
        prop_assume!(w.min(h) >= 3 * ks);
        let levels = build_pyramid(w, h, ks, 3, std::f64::consts::FRAC_1_SQRT_2).unwrap();
        prop_assert_eq!(levels.last().unwrap().kernel_size, ks);
        prop_assert_eq!((levels.last().unwrap().width, levels.last().unwrap().height), (w, h));
        for p in levels.windows(2) {
            prop_assert!(p[0].width <= p[1].width && p[0].height <= p[1].height);
            prop_assert!(p[0].kernel_size <= p[1].kernel_size && p[0].kernel_size % 2 == 1);
        }
    }

    #[test]
    fn prediction_stays_in_range(img in image(14), lambda in 0.0..2.0f64) {
        let params = PredictParams { lambda, ..PredictParams::default() };
        let p = predict_latent(&img, &params).unwrap();
        prop_assert!(p.latent.data().iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn flow_weights_are_ordered(img in image(10)) {
        let t = pde_tensors(&img).unwrap();
        for i in 0..img.area() {
            let (ce, cx) = (t.c_eta.data()[i], t.c_xi.data()[i]);
            prop_assert!(0.0 < ce && ce <= cx && cx <= 1.0);
        }
    }

    #[test]
    fn rmse_is_symmetric_and_zero_on_self(a in image(8)) {
        let b = a.map(|v| 1.0 - v);
        prop_assert_eq!(rmse(&a, &a, None).unwrap(), 0.0);
        prop_assert_eq!(rmse(&a, &b, None).unwrap(), rmse(&b, &a, None).unwrap());
    }
}

#[test]
fn flow_weights_at_reference_magnitudes() {
    use sdeblur::predict::{weight_across, weight_along};
    assert_eq!((weight_across(0.0), weight_along(0.0)), (1.0, 1.0));
    let mut prev = (1.0, 1.0);
    for g in [1.0, 10.0, 100.0] {
        let (e, x) = (weight_across(g), weight_along(g));
        assert!(e <= x && e < prev.0 && x < prev.1);
        prev = (e, x);
    }
    assert!(prev.0 < 1e-3 && prev.1 < 1e-1);
}
