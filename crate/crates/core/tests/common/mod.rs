//! Synthetic content and independent reference computations for the
//! integration tests. Nothing here calls the code paths it is used to check.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use resadapt::cnn::{ConvParams, ModelWeights, NetworkSpec, PReluParams, ResidualBlock};
use resadapt::video_io::{ChromaFormat, Frame, FrameFormat, Plane, RgbBlock};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn fill_plane(plane: &mut Plane, f: impl Fn(usize, usize) -> u16) {
    for y in 0..plane.height {
        for x in 0..plane.width {
            plane.set(x, y, f(x, y));
        }
    }
}

/// Linear luma ramp with flat chroma, full coding depth.
pub fn ramp_frame(w: usize, h: usize, chroma: ChromaFormat) -> Frame {
    let mut f = Frame::filled(FrameFormat::new(w, h, 10, chroma), 0, 512).unwrap();
    fill_plane(&mut f.planes[0], |x, y| (100 + 2 * x + 2 * y) as u16);
    f
}

/// Smooth, in-gamut 10-bit content: low-frequency luma between 200 and 800
/// with mild chroma around neutral plus a little noise.
pub fn natural_frame(w: usize, h: usize, chroma: ChromaFormat, seed: u64) -> Frame {
    let mut r = rng(seed);
    let (a, b, c): (f64, f64, f64) = (r.gen_range(0.0..std::f64::consts::TAU), r.gen_range(0.0..std::f64::consts::TAU), r.gen_range(0.02..0.1));
    let mut f = Frame::filled(FrameFormat::new(w, h, 10, chroma), 0, 512).unwrap();
    let noise: Vec<i32> = (0..w * h).map(|_| r.gen_range(-3..=3)).collect();
    fill_plane(&mut f.planes[0], |x, y| {
        let v = 500.0 + 200.0 * ((x as f64 * c + a).sin() * (y as f64 * c * 0.7 + b).cos());
        (v as i32 + noise[y * w + x]) as u16
    });
    for (k, p) in f.planes[1..].iter_mut().enumerate() {
        let phase = k as f64 * 1.3;
        fill_plane(p, |x, y| (512.0 + 30.0 * ((x + y) as f64 * c * 0.5 + phase).sin()) as u16);
    }
    f
}

pub fn random_plane(w: usize, h: usize, max: u16, seed: u64) -> Plane {
    let mut r = rng(seed);
    Plane {
        width: w,
        height: h,
        data: (0..w * h).map(|_| r.gen_range(0..=max)).collect(),
    }
}

pub fn random_frame(w: usize, h: usize, bits: u8, chroma: ChromaFormat, seed: u64) -> Frame {
    let mut r = rng(seed);
    let max = ((1u32 << bits) - 1) as u16;
    let mut f = Frame::filled(FrameFormat::new(w, h, bits, chroma), 0, 0).unwrap();
    for p in f.planes.iter_mut() {
        p.data.iter_mut().for_each(|v| *v = r.gen_range(0..=max));
    }
    f
}

pub fn random_block(size: usize, seed: u64) -> RgbBlock {
    let mut r = rng(seed);
    RgbBlock {
        size,
        channels: std::array::from_fn(|_| (0..size * size).map(|_| r.gen::<f32>()).collect()),
    }
}

/// `sin(πx)/(πx) · sin(πx/3)/(πx/3)` written out directly.
pub fn lanczos3_direct(x: f64) -> f64 {
    if x.abs() >= 3.0 {
        return 0.0;
    }
    let sinc = |t: f64| if t == 0.0 { 1.0 } else { (std::f64::consts::PI * t).sin() / (std::f64::consts::PI * t) };
    sinc(x) * sinc(x / 3.0)
}

/// Weights of the 1-D resampler for output index `o`: source index → weight.
/// Down-sampling: output centre at source 2o+0.5, window stretched by 2.
/// Up-sampling: output centre at source o/2-0.25.
pub fn reference_taps(o: usize, down: bool) -> Vec<(isize, f64)> {
    let (pos, stretch) = if down {
        (2.0 * o as f64 + 0.5, 2.0)
    } else {
        (o as f64 / 2.0 - 0.25, 1.0)
    };
    let lo = (pos - 3.0 * stretch).floor() as isize;
    let hi = (pos + 3.0 * stretch).ceil() as isize;
    let raw: Vec<(isize, f64)> = (lo..=hi)
        .map(|j| (j, lanczos3_direct((j as f64 - pos) / stretch)))
        .filter(|(_, w)| *w != 0.0)
        .collect();
    let s: f64 = raw.iter().map(|(_, w)| w).sum();
    raw.into_iter().map(|(j, w)| (j, w / s)).collect()
}

/// Direct 2-D convolution with an outer-product kernel and edge replication.
pub fn reference_resample_2d(src: &[f64], w: usize, h: usize, down: bool) -> (Vec<f64>, usize, usize) {
    let (ow, oh) = if down { (w / 2, h / 2) } else { (w * 2, h * 2) };
    let mut out = vec![0.0; ow * oh];
    for oy in 0..oh {
        let ty = reference_taps(oy, down);
        for ox in 0..ow {
            let tx = reference_taps(ox, down);
            let mut acc = 0.0;
            for &(jy, wy) in &ty {
                let sy = jy.clamp(0, h as isize - 1) as usize;
                for &(jx, wx) in &tx {
                    let sx = jx.clamp(0, w as isize - 1) as usize;
                    acc += wx * wy * src[sy * w + sx];
                }
            }
            out[oy * ow + ox] = acc;
        }
    }
    (out, ow, oh)
}

/// Zero-padded 3×3 convolution written as a plain nested sum.
pub fn conv_bruteforce(input: &[Vec<Vec<f64>>], p: &ConvParams) -> Vec<Vec<Vec<f64>>> {
    let h = input[0].len();
    let w = input[0][0].len();
    (0..p.out_channels)
        .map(|o| {
            (0..h)
                .map(|y| {
                    (0..w)
                        .map(|x| {
                            let mut s = p.bias[o] as f64;
                            for (i, ch) in input.iter().enumerate() {
                                for dy in 0..3 {
                                    for dx in 0..3 {
                                        let yy = y as isize + dy as isize - 1;
                                        let xx = x as isize + dx as isize - 1;
                                        if yy >= 0 && xx >= 0 && (yy as usize) < h && (xx as usize) < w {
                                            let wt = p.weights[((o * p.in_channels + i) * 3 + dy) * 3 + dx] as f64;
                                            s += wt * ch[yy as usize][xx as usize];
                                        }
                                    }
                                }
                            }
                            s
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

fn prelu_ref(x: Vec<Vec<Vec<f64>>>, a: &PReluParams) -> Vec<Vec<Vec<f64>>> {
    x.into_iter()
        .enumerate()
        .map(|(c, plane)| {
            plane
                .into_iter()
                .map(|row| row.into_iter().map(|v| if v >= 0.0 { v } else { a.alpha[c] as f64 * v }).collect())
                .collect()
        })
        .collect()
}

fn add_ref(a: &[Vec<Vec<f64>>], b: &[Vec<Vec<f64>>]) -> Vec<Vec<Vec<f64>>> {
    a.iter()
        .zip(b)
        .map(|(pa, pb)| pa.iter().zip(pb).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect()).collect())
        .collect()
}

/// Straight-line evaluation of the reconstruction topology in f64.
pub fn forward_oracle(m: &ModelWeights, block: &RgbBlock) -> [Vec<f64>; 3] {
    let s = block.size;
    let input: Vec<Vec<Vec<f64>>> = block
        .channels
        .iter()
        .map(|c| (0..s).map(|y| (0..s).map(|x| c[y * s + x] as f64).collect()).collect())
        .collect();
    let head = prelu_ref(conv_bruteforce(&input, &m.head_conv), &m.head_prelu);
    let mut r = head.clone();
    for b in &m.blocks {
        let t = conv_bruteforce(&prelu_ref(conv_bruteforce(&r, &b.conv1), &b.prelu), &b.conv2);
        r = add_ref(&r, &t);
    }
    let g = add_ref(&conv_bruteforce(&r, &m.post_blocks_conv), &head);
    let tail = conv_bruteforce(&g, &m.tail_conv);
    std::array::from_fn(|c| {
        (0..s * s)
            .map(|i| (input[c][i / s][i % s] + tail[c][i / s][i % s].tanh()).clamp(0.0, 1.0))
            .collect()
    })
}

pub fn random_conv(o: usize, i: usize, scale: f32, r: &mut ChaCha8Rng) -> ConvParams {
    ConvParams {
        out_channels: o,
        in_channels: i,
        weights: (0..o * i * 9).map(|_| r.gen_range(-scale..scale)).collect(),
        bias: (0..o).map(|_| r.gen_range(-0.1..0.1)).collect(),
    }
}

pub fn random_model(n_blocks: usize, fm: usize, seed: u64) -> ModelWeights {
    let mut r = rng(seed);
    let prelu = |r: &mut ChaCha8Rng| PReluParams {
        alpha: (0..fm).map(|_| r.gen_range(0.0..0.5)).collect(),
    };
    ModelWeights {
        spec: NetworkSpec {
            n_residual_blocks: n_blocks,
            feature_maps: fm,
        },
        head_conv: random_conv(fm, 3, 0.5, &mut r),
        head_prelu: prelu(&mut r),
        blocks: (0..n_blocks)
            .map(|_| ResidualBlock {
                conv1: random_conv(fm, fm, 0.5, &mut r),
                prelu: prelu(&mut r),
                conv2: random_conv(fm, fm, 0.5, &mut r),
            })
            .collect(),
        post_blocks_conv: random_conv(fm, fm, 0.5, &mut r),
        tail_conv: random_conv(3, fm, 0.5, &mut r),
    }
}

/// Lagrange interpolant through exactly four points.
pub fn lagrange4(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    (0..4)
        .map(|i| {
            let mut l = 1.0;
            for j in 0..4 {
                if j != i {
                    l *= (x - xs[j]) / (xs[i] - xs[j]);
                }
            }
            ys[i] * l
        })
        .sum()
}

/// Trapezoid rule with `n` panels.
pub fn trapezoid(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    let h = (hi - lo) / n as f64;
    let inner: f64 = (1..n).map(|k| f(lo + k as f64 * h)).sum();
    h * (0.5 * (f(lo) + f(hi)) + inner)
}

/// BD-rate (%) and BD-quality via Lagrange interpolation and dense
/// trapezoids; four-point curves only, (bitrate, quality) pairs.
pub fn bd_oracle(anchor: &[(f64, f64)], test: &[(f64, f64)]) -> (f64, f64) {
    let lr = |c: &[(f64, f64)]| c.iter().map(|p| p.0.log10()).collect::<Vec<_>>();
    let q = |c: &[(f64, f64)]| c.iter().map(|p| p.1).collect::<Vec<_>>();
    let (ra, qa, rt, qt) = (lr(anchor), q(anchor), lr(test), q(test));
    let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
    let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let (lo, hi) = (min(&qa).max(min(&qt)), max(&qa).min(max(&qt)));
    let diff = |x: f64| lagrange4(&qt, &rt, x) - lagrange4(&qa, &ra, x);
    let rate = (10f64.powf(trapezoid(diff, lo, hi, 10_000) / (hi - lo)) - 1.0) * 100.0;

    let (lo, hi) = (min(&ra).max(min(&rt)), max(&ra).min(max(&rt)));
    let diff = |x: f64| lagrange4(&rt, &qt, x) - lagrange4(&ra, &qa, x);
    let quality = trapezoid(diff, lo, hi, 10_000) / (hi - lo);
    (rate, quality)
}

pub fn max_abs_diff(a: &Plane, b: &Plane) -> i32 {
    a.data.iter().zip(&b.data).map(|(&x, &y)| (x as i32 - y as i32).abs()).max().unwrap_or(0)
}

pub fn luma_psnr_ref(a: &Plane, b: &Plane, bits: u8) -> f64 {
    let mse: f64 = a.data.iter().zip(&b.data).map(|(&x, &y)| (x as f64 - y as f64).powi(2)).sum::<f64>() / a.data.len() as f64;
    let max = ((1u32 << bits) - 1) as f64;
    10.0 * (max * max / mse).log10()
}
