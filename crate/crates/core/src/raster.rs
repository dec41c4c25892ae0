//! Minimal RGB raster with binary PPM (P6, maxval 255) reading and writing.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    width: u32,
    height: u32,
    data: Vec<u8>, // rgb, row-major
}

impl Raster {
    pub fn new(width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            data: vec![0; (width as usize) * (height as usize) * 3],
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    fn offset(&self, x: u32, y: u32) -> usize {
        ((y as usize) * (self.width as usize) + x as usize) * 3
    }

    pub fn get(&self, x: u32, y: u32) -> [u8; 3] {
        let o = self.offset(x, y);
        [self.data[o], self.data[o + 1], self.data[o + 2]]
    }

    pub fn set(&mut self, x: u32, y: u32, rgb: [u8; 3]) {
        let o = self.offset(x, y);
        self.data[o..o + 3].copy_from_slice(&rgb);
    }

    /// Luminance in [0, 255] using the Rec. 601 weights.
    pub fn luminance(&self, x: u32, y: u32) -> f64 {
        let [r, g, b] = self.get(x, y);
        0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64
    }

    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.data);
        out
    }

    pub fn from_ppm(bytes: &[u8]) -> Result<Self> {
        let mut pos = 0usize;
        let mut next_token = |what: &str| -> Result<String> {
            // skip whitespace and '#' comments
            loop {
                while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                    pos += 1;
                }
                if pos < bytes.len() && bytes[pos] == b'#' {
                    while pos < bytes.len() && bytes[pos] != b'\n' {
                        pos += 1;
                    }
                } else {
                    break;
                }
            }
            let start = pos;
            while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if start == pos {
                return Err(Error::Malformed(format!("ppm: missing {what}")));
            }
            Ok(String::from_utf8_lossy(&bytes[start..pos]).into_owned())
        };

        if next_token("magic")? != "P6" {
            return Err(Error::Malformed("ppm: expected P6 magic".into()));
        }
        let parse = |s: String, what: &str| -> Result<u32> {
            s.parse()
                .map_err(|_| Error::Malformed(format!("ppm: bad {what}: {s:?}")))
        };
        let width = parse(next_token("width")?, "width")?;
        let height = parse(next_token("height")?, "height")?;
        let maxval = parse(next_token("maxval")?, "maxval")?;
        if maxval != 255 {
            return Err(Error::Malformed(format!("ppm: maxval must be 255, got {maxval}")));
        }
        if width == 0 || height == 0 {
            return Err(Error::Malformed("ppm: zero dimension".into()));
        }
        pos += 1; // single whitespace byte after maxval
        let need = (width as usize) * (height as usize) * 3;
        if bytes.len() < pos + need {
            return Err(Error::Malformed(format!(
                "ppm: expected {need} pixel bytes, found {}",
                bytes.len().saturating_sub(pos)
            )));
        }
        Ok(Self {
            width,
            height,
            data: bytes[pos..pos + need].to_vec(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ppm_round_trip() {
        let mut r = Raster::new(3, 2);
        r.set(0, 0, [255, 0, 10]);
        r.set(2, 1, [1, 2, 3]);
        let bytes = r.to_ppm();
        let back = Raster::from_ppm(&bytes).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_ppm(), bytes);
    }

    #[test]
    fn ppm_with_comment_parses() {
        let mut bytes = b"P6\n# a comment\n2 1\n255\n".to_vec();
        bytes.extend_from_slice(&[0, 0, 0, 9, 9, 9]);
        let r = Raster::from_ppm(&bytes).unwrap();
        assert_eq!(r.get(1, 0), [9, 9, 9]);
    }

    #[test]
    fn truncated_ppm_rejected() {
        let r = Raster::new(4, 4).to_ppm();
        assert!(Raster::from_ppm(&r[..r.len() - 1]).is_err());
        assert!(Raster::from_ppm(b"P5\n1 1\n255\nxxx").is_err());
    }
}
