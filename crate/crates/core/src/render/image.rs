use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::PlaneImage;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImageFormat {
    Ppm,
    Png,
}

impl ImageFormat {
    /// Guesses the format from a file extension (`.png`, otherwise PPM).
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("png") => ImageFormat::Png,
            _ => ImageFormat::Ppm,
        }
    }
}

/// Binary P6 encoding of an RGB8 raster.
pub fn encode_ppm(width: usize, height: usize, rgb: &[u8]) -> Vec<u8> {
    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(rgb);
    out
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes an RGB8 raster of the given size.
pub fn write_rgb(
    width: usize,
    height: usize,
    rgb: &[u8],
    path: &Path,
    format: ImageFormat,
) -> Result<()> {
    assert_eq!(rgb.len(), 3 * width * height, "raster size mismatch");
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    match format {
        ImageFormat::Ppm => {
            w.write_all(&encode_ppm(width, height, rgb))
                .map_err(|e| io_err(path, e))?;
        }
        ImageFormat::Png => {
            let mut enc = png::Encoder::new(&mut w, width as u32, height as u32);
            enc.set_color(png::ColorType::Rgb);
            enc.set_depth(png::BitDepth::Eight);
            let to_io = |e: png::EncodingError| io_err(path, std::io::Error::other(e));
            let mut writer = enc.write_header().map_err(to_io)?;
            writer.write_image_data(rgb).map_err(to_io)?;
            writer.finish().map_err(to_io)?;
        }
    }
    w.flush().map_err(|e| io_err(path, e))
}

pub fn write_image(img: &PlaneImage, path: &Path, format: ImageFormat) -> Result<()> {
    write_rgb(img.width(), img.height(), &img.raster, path, format)
}

/// Writes the plane settings next to an image as `key = value` lines.
pub fn write_sidecar(img: &PlaneImage, path: &Path) -> Result<()> {
    std::fs::write(path, img.spec.to_sidecar()).map_err(|e| io_err(path, e))
}
