use serde::{Deserialize, Serialize};

use super::layers::{conv2d, prelu, ConvParams, PReluParams, Tensor3};
use crate::error::{Error, Result};
use crate::video_io::RgbBlock;

pub const IO_CHANNELS: usize = 3;

/// Depth and width of the reconstruction network.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub n_residual_blocks: usize,
    pub feature_maps: usize,
}

impl Default for NetworkSpec {
    fn default() -> Self {
        NetworkSpec {
            n_residual_blocks: 16,
            feature_maps: 64,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualBlock {
    pub conv1: ConvParams,
    pub prelu: PReluParams,
    pub conv2: ConvParams,
}

/// Parameters of the residual reconstruction network:
///
/// ```text
/// head  = prelu(conv_head(x))
/// r     = head; r = r + conv2(prelu(conv1(r)))   (per residual block)
/// g     = conv_post(r) + head
/// y     = clip(x + tanh(conv_tail(g)), 0, 1)
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct ModelWeights {
    pub spec: NetworkSpec,
    pub head_conv: ConvParams,
    pub head_prelu: PReluParams,
    pub blocks: Vec<ResidualBlock>,
    pub post_blocks_conv: ConvParams,
    pub tail_conv: ConvParams,
}

impl ModelWeights {
    /// All-zero parameters; the forward pass reduces to the identity.
    pub fn zeros(spec: NetworkSpec) -> Self {
        let fm = spec.feature_maps;
        ModelWeights {
            spec,
            head_conv: ConvParams::zeros(fm, IO_CHANNELS),
            head_prelu: PReluParams::zeros(fm),
            blocks: (0..spec.n_residual_blocks)
                .map(|_| ResidualBlock {
                    conv1: ConvParams::zeros(fm, fm),
                    prelu: PReluParams::zeros(fm),
                    conv2: ConvParams::zeros(fm, fm),
                })
                .collect(),
            post_blocks_conv: ConvParams::zeros(fm, fm),
            tail_conv: ConvParams::zeros(IO_CHANNELS, fm),
        }
    }

    /// Checks the layer inventory against `spec` and that every parameter is finite.
    pub fn validate(&self) -> Result<()> {
        let fm = self.spec.feature_maps;
        if fm == 0 {
            return Err(Error::Shape("zero feature maps".into()));
        }
        if self.blocks.len() != self.spec.n_residual_blocks {
            return Err(Error::Shape(format!(
                "{} residual blocks, model header declares {}",
                self.blocks.len(),
                self.spec.n_residual_blocks
            )));
        }
        let conv = |name: &str, c: &ConvParams, o: usize, i: usize| -> Result<()> {
            c.check_shape()?;
            if c.out_channels != o || c.in_channels != i {
                return Err(Error::Shape(format!(
                    "{name}: {}->{} channels, expected {i}->{o}",
                    c.in_channels, c.out_channels
                )));
            }
            if !c.is_finite() {
                return Err(Error::NonFinite(name.into()));
            }
            Ok(())
        };
        let act = |name: &str, p: &PReluParams| -> Result<()> {
            if p.alpha.len() != fm {
                return Err(Error::Shape(format!("{name}: {} slopes, expected {fm}", p.alpha.len())));
            }
            if !p.alpha.iter().all(|a| a.is_finite()) {
                return Err(Error::NonFinite(name.into()));
            }
            Ok(())
        };
        conv("head conv", &self.head_conv, fm, IO_CHANNELS)?;
        act("head prelu", &self.head_prelu)?;
        for (k, b) in self.blocks.iter().enumerate() {
            conv(&format!("block {k} conv1"), &b.conv1, fm, fm)?;
            act(&format!("block {k} prelu"), &b.prelu)?;
            conv(&format!("block {k} conv2"), &b.conv2, fm, fm)?;
        }
        conv("post-block conv", &self.post_blocks_conv, fm, fm)?;
        conv("tail conv", &self.tail_conv, IO_CHANNELS, fm)?;
        Ok(())
    }
}

fn finite(t: Tensor3, stage: &str) -> Result<Tensor3> {
    if t.is_finite() {
        Ok(t)
    } else {
        Err(Error::NonFinite(stage.into()))
    }
}

/// Runs the network on one block.
pub fn network_forward(model: &ModelWeights, block: &RgbBlock) -> Result<RgbBlock> {
    let s = block.size;
    let input = Tensor3::from_vec(IO_CHANNELS, s, s, block.channels.concat())?;

    let mut head = conv2d(&input, &model.head_conv)?;
    prelu(&mut head, &model.head_prelu)?;
    let head = finite(head, "head")?;

    let mut r = head.clone();
    for (k, b) in model.blocks.iter().enumerate() {
        let mut t = conv2d(&r, &b.conv1)?;
        prelu(&mut t, &b.prelu)?;
        let t = conv2d(&t, &b.conv2)?;
        r.add_assign(&t);
        if !r.is_finite() {
            return Err(Error::NonFinite(format!("residual block {k}")));
        }
    }

    let mut g = conv2d(&r, &model.post_blocks_conv)?;
    g.add_assign(&head);
    let tail = finite(conv2d(&g, &model.tail_conv)?, "tail")?;

    let n = s * s;
    let channels = std::array::from_fn(|c| {
        block.channels[c]
            .iter()
            .zip(&tail.data[c * n..(c + 1) * n])
            .map(|(&x, &t)| (x + t.tanh()).clamp(0.0, 1.0))
            .collect()
    });
    Ok(RgbBlock { size: s, channels })
}
