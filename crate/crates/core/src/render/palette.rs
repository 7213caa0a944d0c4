use crate::error::{Error, Result};

pub type Rgb = [u8; 3];

/// Piecewise-linear color ramp over `[0, 1]` plus a color for pixels that
/// never converged.
#[derive(Clone, Debug, PartialEq)]
pub struct Palette {
    anchors: Vec<(f64, Rgb)>,
    non_converged: Rgb,
}

impl Default for Palette {
    /// Red, yellow, green, blue, purple, grey; black when not converged.
    fn default() -> Self {
        Palette {
            anchors: vec![
                (0.0, [255, 0, 0]),
                (0.2, [255, 255, 0]),
                (0.4, [0, 200, 0]),
                (0.6, [0, 64, 255]),
                (0.8, [160, 32, 240]),
                (1.0, [128, 128, 128]),
            ],
            non_converged: [0, 0, 0],
        }
    }
}

impl Palette {
    pub fn new(anchors: Vec<(f64, Rgb)>, non_converged: Rgb) -> Result<Self> {
        if anchors.len() < 2 {
            return Err(Error::InvalidParameter(
                "a palette needs at least two anchors".into(),
            ));
        }
        if anchors[0].0 != 0.0 || anchors[anchors.len() - 1].0 != 1.0 {
            return Err(Error::InvalidParameter(
                "palette anchors must span [0, 1]".into(),
            ));
        }
        if anchors
            .windows(2)
            .any(|w| w[0].0.partial_cmp(&w[1].0) != Some(std::cmp::Ordering::Less))
        {
            return Err(Error::InvalidParameter(
                "palette fractions must increase strictly".into(),
            ));
        }
        Ok(Palette {
            anchors,
            non_converged,
        })
    }

    pub fn anchors(&self) -> &[(f64, Rgb)] {
        &self.anchors
    }

    pub fn non_converged(&self) -> Rgb {
        self.non_converged
    }

    /// Color at `fraction`, clamped to `[0, 1]`, each channel rounded half up.
    pub fn color(&self, fraction: f64) -> Rgb {
        let t = if fraction.is_nan() {
            1.0
        } else {
            fraction.clamp(0.0, 1.0)
        };
        let k = self
            .anchors
            .windows(2)
            .position(|w| t <= w[1].0)
            .unwrap_or(self.anchors.len() - 2);
        let (t0, c0) = self.anchors[k];
        let (t1, c1) = self.anchors[k + 1];
        let s = (t - t0) / (t1 - t0);
        let mut out = [0u8; 3];
        for ch in 0..3 {
            let v = f64::from(c0[ch]) + s * (f64::from(c1[ch]) - f64::from(c0[ch]));
            out[ch] = (v + 0.5).floor().clamp(0.0, 255.0) as u8;
        }
        out
    }

    /// Color for a pixel that converged after `iterations` out of `max`.
    pub fn iteration_color(&self, iterations: u32, max: u32) -> Rgb {
        if max == 0 {
            return self.color(0.0);
        }
        self.color(f64::from(iterations) / f64::from(max))
    }
}
