use resadapt_web::demo::*;

#[test]
fn kernel_curve_shape() {
    let c = kernel_curve(601);
    assert_eq!(c.len(), 601);
    assert_eq!(c[0], (-3.0, 0.0));
    assert!((c[300].1 - 1.0).abs() < 1e-12);
    // zero crossings at the integers
    assert!(c[200].1.abs() < 1e-12 && c[400].1.abs() < 1e-12);
    assert!(c.iter().all(|&(x, y)| (y - c.iter().find(|p| (p.0 + x).abs() < 1e-9).unwrap().1).abs() < 1e-12));
}

#[test]
fn taps_sum_to_one() {
    for (down, phases, taps) in [(true, 1, 12), (false, 2, 6)] {
        let k = kernel_taps(down);
        assert_eq!(k.len(), phases);
        for (_, w) in &k {
            assert_eq!(w.len(), taps);
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn round_trip_quality_ordering() {
    let src = pattern_frame(Pattern::Ramp, 64, 48, 4).unwrap();
    let shift_only = round_trip(&src, None, 1).unwrap();
    let lanczos = round_trip(&src, Some(Upsampler::Lanczos3), 1).unwrap();
    assert!(shift_only.psnr > 55.0);
    assert!(lanczos.psnr >= 40.0, "{}", lanczos.psnr);

    // fine detail: Lanczos3 beats nearest-neighbour
    let zp = pattern_frame(Pattern::ZonePlate, 64, 64, 8).unwrap();
    let l = round_trip(&zp, Some(Upsampler::Lanczos3), 0).unwrap();
    let n = round_trip(&zp, Some(Upsampler::Nearest), 0).unwrap();
    assert!(l.psnr > n.psnr, "{} vs {}", l.psnr, n.psnr);
    assert_eq!(round_trip(&zp, None, 0).unwrap().psnr, resadapt::metrics::PSNR_CAP);
}

#[test]
fn rgba_buffers() {
    let src = pattern_frame(Pattern::Checker, 8, 8, 2).unwrap();
    let rgba = luma_rgba(&src);
    assert_eq!(rgba.len(), 8 * 8 * 4);
    assert_eq!(&rgba[..4], &[50, 50, 50, 255]);
    assert!(error_rgba(&src, &src, 10.0).chunks(4).all(|p| p == [0, 0, 255, 255]));
    assert!(Pattern::from_name("plaid").is_err());
    assert!(round_trip(&pattern_frame(Pattern::Ramp, 6, 6, 1).unwrap(), Some(Upsampler::Nearest), 0).is_ok());
    assert!(round_trip(&pattern_frame(Pattern::Ramp, 6, 6, 1).unwrap(), None, 10).is_err());
}

#[test]
fn bd_calculator() {
    let anchor = "# kbps, dB\n1000,32\n1800 34.6\n3300,37.1\n6200,39.5\n";
    let half = "500,32\n900,34.6\n1650,37.1\n3100,39.5";
    let (r, q) = bd_pair(anchor, half).unwrap();
    assert!((r + 50.0).abs() < 0.1);
    assert!(q > 0.0);
    assert_eq!(bd_pair(anchor, anchor).unwrap(), (0.0, 0.0));
    assert!(bd_pair(anchor, "1,2\n3,4").is_err());
    assert!(parse_points("1,2,3").is_err());
    assert!(parse_points("a,2").is_err());
}

#[test]
fn model_groups() {
    let got: Vec<u8> = [22.0, 24.5, 24.6, 39.5, 50.0].into_iter().map(model_group).collect();
    assert_eq!(got, [22, 22, 27, 37, 42]);
}
