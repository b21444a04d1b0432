//! Implementation outputs checked against independently coded references.

mod common;

use common::*;
use resadapt::cnn::{conv2d, network_forward, select_model, AdaptationVersion, ConvParams, Tensor3};
use resadapt::metrics::{bd_metric, point_above_curve, BdKind, QualityMetric, RdCurve, RdPoint};
use resadapt::qro::{gop_features, srqm_score, temporal_information};
use resadapt::resampler::{filter_plane, lanczos3_downsample_2x, lanczos3_upsample_2x, FilterKernel};
use resadapt::video_io::{from_rgb, to_rgb, ChromaFormat, Frame, FrameFormat, Plane, VideoSequence};

#[test]
fn downsample_impulse_matches_kernel_formula() {
    let (w, h, x0, y0) = (24usize, 24usize, 11usize, 12usize);
    let mut src = vec![0.0; w * h];
    src[y0 * w + x0] = 1023.0;
    let (out, ow, oh) = filter_plane(&src, w, h, &FilterKernel::downsample_2x());
    // normalisation: kernel sampled at the 12 offsets ±0.25, ±0.75, ..., ±2.75
    let norm: f64 = (0..12).map(|k| lanczos3_direct((k as f64 - 5.5) / 2.0)).sum();
    let weight = |o: usize, c: usize| lanczos3_direct((c as f64 - (2.0 * o as f64 + 0.5)) / 2.0) / norm;
    for oy in 0..oh {
        for ox in 0..ow {
            let expected = 1023.0 * weight(ox, x0) * weight(oy, y0);
            assert!((out[oy * ow + ox] - expected).abs() < 1e-6, "({ox},{oy})");
        }
    }
}

#[test]
fn upsample_impulse_matches_kernel_formula() {
    let (w, h, x0, y0) = (12usize, 12usize, 5usize, 6usize);
    let mut src = vec![0.0; w * h];
    src[y0 * w + x0] = 1023.0;
    let (out, ow, oh) = filter_plane(&src, w, h, &FilterKernel::upsample_2x());
    let norm: f64 = (-3..=2).map(|k| lanczos3_direct(k as f64 + 0.25)).sum();
    let weight = |o: usize, c: usize| lanczos3_direct(c as f64 - (o as f64 / 2.0 - 0.25)) / norm;
    for oy in 0..oh {
        for ox in 0..ow {
            let expected = 1023.0 * weight(ox, x0) * weight(oy, y0);
            assert!((out[oy * ow + ox] - expected).abs() < 1e-6, "({ox},{oy})");
        }
    }
}

#[test]
fn separable_equals_direct_2d() {
    for seed in 0..20 {
        let p = random_plane(16, 16, 1023, seed);
        let src: Vec<f64> = p.data.iter().map(|&v| v as f64).collect();
        for down in [true, false] {
            let k = if down { FilterKernel::downsample_2x() } else { FilterKernel::upsample_2x() };
            let (a, _, _) = filter_plane(&src, 16, 16, &k);
            let (b, _, _) = reference_resample_2d(&src, 16, 16, down);
            let err = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            assert!(err < 1e-6, "seed {seed} down {down}: {err}");
        }
    }
}

#[test]
fn stripes_against_reference_convolution() {
    let mut f = Frame::filled(FrameFormat::new(32, 32, 10, ChromaFormat::C444), 0, 512).unwrap();
    for y in 0..32 {
        for x in 0..32 {
            f.planes[0].set(x, y, if y % 2 == 0 { 300 } else { 700 });
        }
    }
    let src: Vec<f64> = f.planes[0].data.iter().map(|&v| v as f64).collect();
    let (reference, _, _) = reference_resample_2d(&src, 32, 32, true);
    let d = lanczos3_downsample_2x(&f).unwrap();
    for (i, (&got, &r)) in d.planes[0].data.iter().zip(&reference).enumerate() {
        assert!((got as f64 - r).abs() <= 0.5 + 1e-9, "sample {i}");
        let y = i / 16;
        if (3..13).contains(&y) {
            assert!((got as i32 - 500).abs() <= 1);
        }
    }
}

#[test]
fn ramp_survives_down_up() {
    let f = ramp_frame(192, 128, ChromaFormat::C420);
    let back = lanczos3_upsample_2x(&lanczos3_downsample_2x(&f).unwrap()).unwrap();
    let psnr = luma_psnr_ref(f.luma(), back.luma(), 10);
    assert!(psnr >= 40.0, "{psnr}");
}

#[test]
fn conv_matches_bruteforce() {
    let mut r = rng(7);
    for seed in 0..10 {
        let p = random_conv(2, 1, 1.0, &mut r);
        let plane = random_plane(5, 5, 255, seed);
        let input: Vec<f32> = plane.data.iter().map(|&v| v as f32 / 255.0).collect();
        let t = Tensor3::from_vec(1, 5, 5, input.clone()).unwrap();
        let got = conv2d(&t, &p).unwrap();
        let nested = vec![(0..5).map(|y| (0..5).map(|x| input[y * 5 + x] as f64).collect()).collect()];
        let want = conv_bruteforce(&nested, &p);
        for o in 0..2 {
            for y in 0..5 {
                for x in 0..5 {
                    assert!((got.get(o, y, x) as f64 - want[o][y][x]).abs() < 1e-6);
                }
            }
        }
    }
}

#[test]
fn forward_matches_topology_oracle() {
    for seed in 0..6 {
        let n = 1 + seed as usize % 2;
        let fm = 2 + seed as usize % 3;
        let model = random_model(n, fm, 100 + seed);
        let block = random_block(8 + 2 * (seed as usize % 3), 200 + seed);
        let got = network_forward(&model, &block).unwrap();
        let want = forward_oracle(&model, &block);
        for c in 0..3 {
            for (a, b) in got.channels[c].iter().zip(&want[c]) {
                assert!((*a as f64 - b).abs() < 1e-5);
            }
        }
    }
}

#[test]
fn colour_roundtrip_on_natural_content() {
    for chroma in [ChromaFormat::C444, ChromaFormat::C420] {
        let f = natural_frame(64, 48, chroma, 3);
        let back = from_rgb(&to_rgb(&f), f.format()).unwrap();
        let within = f
            .luma()
            .data
            .iter()
            .zip(&back.luma().data)
            .filter(|(a, b)| (**a as i32 - **b as i32).abs() <= 1)
            .count();
        assert!(within as f64 >= 0.95 * f.luma().data.len() as f64, "{chroma:?}");
    }
}

fn curve(points: &[(f64, f64)]) -> RdCurve {
    RdCurve::new(points.iter().map(|&(r, q)| RdPoint::new(r, q)).collect(), QualityMetric::Psnr).unwrap()
}

const ANCHOR: [(f64, f64); 4] = [(820.0, 31.9), (1530.0, 34.8), (2950.0, 37.7), (6100.0, 40.4)];

#[test]
fn bd_half_rate_and_plus_one_db() {
    let halved: Vec<(f64, f64)> = ANCHOR.iter().map(|&(r, q)| (r / 2.0, q)).collect();
    let lifted: Vec<(f64, f64)> = ANCHOR.iter().map(|&(r, q)| (r, q + 1.0)).collect();

    let rate = bd_metric(&curve(&ANCHOR), &curve(&halved), BdKind::Rate).unwrap();
    let (oracle_rate, _) = bd_oracle(&ANCHOR, &halved);
    assert!((rate + 50.0).abs() < 0.1, "{rate}");
    assert!((rate - oracle_rate).abs() < 0.1);

    let dq = bd_metric(&curve(&ANCHOR), &curve(&lifted), BdKind::Quality).unwrap();
    let (_, oracle_q) = bd_oracle(&ANCHOR, &lifted);
    assert!((dq - 1.0).abs() < 0.01, "{dq}");
    assert!((dq - oracle_q).abs() < 0.01);
}

#[test]
fn bd_general_curves_match_oracle() {
    let test = [(700.0, 32.5), (1400.0, 35.6), (2600.0, 38.1), (5500.0, 40.9)];
    let rate = bd_metric(&curve(&ANCHOR), &curve(&test), BdKind::Rate).unwrap();
    let q = bd_metric(&curve(&ANCHOR), &curve(&test), BdKind::Quality).unwrap();
    let (or, oq) = bd_oracle(&ANCHOR, &test);
    assert!((rate - or).abs() < 1e-3, "{rate} vs {or}");
    assert!((q - oq).abs() < 1e-5, "{q} vs {oq}");
    assert!(rate < 0.0 && q > 0.0);
}

#[test]
fn midpoint_above_cubic_matches_dense_sampling() {
    let c = curve(&ANCHOR);
    let lr: Vec<f64> = ANCHOR.iter().map(|p| p.0.log10()).collect();
    let qs: Vec<f64> = ANCHOR.iter().map(|p| p.1).collect();
    // densely sample the interpolant between the 2nd and 3rd points
    for k in 0..=1000 {
        let x = lr[1] + (lr[2] - lr[1]) * k as f64 / 1000.0;
        let fitted = lagrange4(&lr, &qs, x);
        let rate = 10f64.powf(x);
        assert!(point_above_curve(&c, RdPoint::new(rate, fitted + 0.01)).unwrap().above);
        assert!(!point_above_curve(&c, RdPoint::new(rate, fitted - 0.01)).unwrap().above);
    }
}

#[test]
fn model_group_at_tie() {
    assert_eq!(select_model(39.5, "HM", AdaptationVersion::Ebd).qp_group.value(), 37);
    assert_eq!(select_model(27.0, "HM", AdaptationVersion::Ebd).qp_group.value(), 27);
}

fn luma_frame(f: impl Fn(usize, usize) -> u16) -> Frame {
    let mut fr = Frame::filled(FrameFormat::new(32, 32, 10, ChromaFormat::C420), 0, 512).unwrap();
    for y in 0..32 {
        for x in 0..32 {
            fr.planes[0].set(x, y, f(x, y));
        }
    }
    fr
}

#[test]
fn checkerboard_scores_below_gradient() {
    let checker = luma_frame(|x, y| if (x + y) % 2 == 0 { 200 } else { 800 });
    let gradient = luma_frame(|x, y| (200 + 10 * x + 5 * y) as u16);
    let resample = |f: &Frame| lanczos3_upsample_2x(&lanczos3_downsample_2x(f).unwrap()).unwrap();
    let s_checker = srqm_score(&[checker.clone()], &[resample(&checker)]).unwrap();
    let s_grad = srqm_score(&[gradient.clone()], &[resample(&gradient)]).unwrap();
    assert!(s_checker < s_grad, "{s_checker} vs {s_grad}");
    assert!(s_grad > 0.9);
    let flat = luma_frame(|_, _| 400);
    assert_eq!(srqm_score(&[flat.clone()], &[resample(&flat)]).unwrap(), 1.0);
}

#[test]
fn gop_features_are_windowed() {
    let a: Vec<Frame> = (0..4).map(|i| luma_frame(move |x, _| (300 + 3 * i + x) as u16)).collect();
    let b: Vec<Frame> = (0..4).map(|i| luma_frame(move |x, y| (100 + 40 * i + x + y) as u16)).collect();
    let c: Vec<Frame> = (0..4).map(|_| luma_frame(|x, y| ((x * y) % 900) as u16)).collect();
    let ab = VideoSequence::new([a.clone(), b.clone()].concat(), 30.0).unwrap();
    let cb = VideoSequence::new([c, b.clone()].concat(), 30.0).unwrap();
    let only_b = VideoSequence::new(b, 30.0).unwrap();
    let fb = gop_features(&only_b, 0, 4, 32.0).unwrap();
    assert_eq!(gop_features(&ab, 4, 4, 32.0).unwrap(), fb);
    assert_eq!(gop_features(&cb, 4, 4, 32.0).unwrap(), fb);
    // TI of the first window: constant +3 steps
    let fa = gop_features(&ab, 0, 4, 32.0).unwrap();
    assert!((fa.ti_mean - 3.0).abs() < 1e-12);
    assert_eq!(fa.qp_base, 32.0);
    // single-frame GOP: no neighbours
    assert_eq!(gop_features(&ab, 2, 1, 22.0).unwrap().ti_mean, 0.0);
    assert!(gop_features(&ab, 6, 4, 22.0).is_err());
}

#[test]
fn ti_three_frames() {
    let p = |v| Plane::filled(4, 4, v);
    let (f0, f1, f2) = (p(10), p(12), p(16));
    assert_eq!(temporal_information(&[&f0, &f1, &f2], 1), 3.0);
}

#[test]
fn conv_rejects_shape_mismatch() {
    let t = Tensor3::zeros(3, 4, 4);
    assert!(conv2d(&t, &ConvParams::zeros(2, 2)).is_err());
}
