use crate::error::{Error, Result};

/// Channel-major feature map `[channels][height][width]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3 {
    pub channels: usize,
    pub height: usize,
    pub width: usize,
    pub data: Vec<f32>,
}

impl Tensor3 {
    pub fn zeros(channels: usize, height: usize, width: usize) -> Self {
        Tensor3 {
            channels,
            height,
            width,
            data: vec![0.0; channels * height * width],
        }
    }

    pub fn from_vec(channels: usize, height: usize, width: usize, data: Vec<f32>) -> Result<Self> {
        if data.len() != channels * height * width {
            return Err(Error::Shape(format!(
                "{} values for a {channels}x{height}x{width} tensor",
                data.len()
            )));
        }
        Ok(Tensor3 {
            channels,
            height,
            width,
            data,
        })
    }

    #[inline]
    pub fn plane(&self, c: usize) -> &[f32] {
        let n = self.height * self.width;
        &self.data[c * n..(c + 1) * n]
    }

    #[inline]
    pub fn get(&self, c: usize, y: usize, x: usize) -> f32 {
        self.data[(c * self.height + y) * self.width + x]
    }

    pub fn add_assign(&mut self, other: &Tensor3) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// 3×3 convolution parameters, weights laid out `[out][in][3][3]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvParams {
    pub out_channels: usize,
    pub in_channels: usize,
    pub weights: Vec<f32>,
    pub bias: Vec<f32>,
}

pub const KERNEL: usize = 3;

impl ConvParams {
    pub fn zeros(out_channels: usize, in_channels: usize) -> Self {
        ConvParams {
            out_channels,
            in_channels,
            weights: vec![0.0; out_channels * in_channels * KERNEL * KERNEL],
            bias: vec![0.0; out_channels],
        }
    }

    pub fn new(out_channels: usize, in_channels: usize, weights: Vec<f32>, bias: Vec<f32>) -> Result<Self> {
        let p = ConvParams {
            out_channels,
            in_channels,
            weights,
            bias,
        };
        p.check_shape()?;
        Ok(p)
    }

    pub fn check_shape(&self) -> Result<()> {
        if self.weights.len() != self.out_channels * self.in_channels * KERNEL * KERNEL
            || self.bias.len() != self.out_channels
        {
            return Err(Error::Shape(format!(
                "conv {}->{} holds {} weights and {} biases",
                self.in_channels,
                self.out_channels,
                self.weights.len(),
                self.bias.len()
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn weight(&self, o: usize, i: usize, dy: usize, dx: usize) -> f32 {
        self.weights[((o * self.in_channels + i) * KERNEL + dy) * KERNEL + dx]
    }

    pub fn is_finite(&self) -> bool {
        self.weights.iter().chain(&self.bias).all(|v| v.is_finite())
    }
}

/// Stride-1 3×3 convolution with one pixel of zero padding, so the output has
/// the input's spatial size.
pub fn conv2d(input: &Tensor3, params: &ConvParams) -> Result<Tensor3> {
    params.check_shape()?;
    if input.channels != params.in_channels {
        return Err(Error::Shape(format!(
            "conv expects {} input channels, got {}",
            params.in_channels, input.channels
        )));
    }
    let (h, w) = (input.height, input.width);
    let n = h * w;
    let mut out = Tensor3::zeros(params.out_channels, h, w);
    for (o, dst) in out.data.chunks_exact_mut(n.max(1)).enumerate() {
        dst.fill(params.bias[o]);
        for i in 0..params.in_channels {
            let src = input.plane(i);
            for dy in 0..KERNEL {
                // output row y reads input row y + dy - 1
                let (y0, y1) = (if dy == 0 { 1 } else { 0 }, if dy == 2 { h.saturating_sub(1) } else { h });
                for dx in 0..KERNEL {
                    let k = params.weight(o, i, dy, dx);
                    if k == 0.0 {
                        continue;
                    }
                    let (x0, x1) = (if dx == 0 { 1 } else { 0 }, if dx == 2 { w.saturating_sub(1) } else { w });
                    if x0 >= x1 {
                        continue;
                    }
                    for y in y0..y1 {
                        let sy = y + dy - 1;
                        let d = &mut dst[y * w + x0..y * w + x1];
                        let s = &src[sy * w + x0 + dx - 1..sy * w + x1 + dx - 1];
                        for (a, &b) in d.iter_mut().zip(s) {
                            *a += k * b;
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Per-channel PReLU slopes.
#[derive(Clone, Debug, PartialEq)]
pub struct PReluParams {
    pub alpha: Vec<f32>,
}

impl PReluParams {
    pub fn zeros(channels: usize) -> Self {
        PReluParams {
            alpha: vec![0.0; channels],
        }
    }
}

pub fn prelu(x: &mut Tensor3, params: &PReluParams) -> Result<()> {
    if params.alpha.len() != x.channels {
        return Err(Error::Shape(format!(
            "prelu has {} slopes for {} channels",
            params.alpha.len(),
            x.channels
        )));
    }
    let n = x.height * x.width;
    for (c, plane) in x.data.chunks_exact_mut(n.max(1)).enumerate() {
        let a = params.alpha[c];
        for v in plane.iter_mut() {
            if *v < 0.0 {
                *v *= a;
            }
        }
    }
    Ok(())
}
