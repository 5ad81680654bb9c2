use super::MaskError;

/// One flag per pixel, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize) -> Self {
        BinaryMask {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn from_bits(width: usize, height: usize, bits: Vec<bool>) -> Result<Self, MaskError> {
        if bits.len() != width * height {
            return Err(MaskError::DimensionMismatch {
                expected: (width, height),
                got: (bits.len(), 1),
            });
        }
        Ok(BinaryMask {
            width,
            height,
            bits,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut bits = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                bits.push(f(x, y));
            }
        }
        BinaryMask {
            width,
            height,
            bits,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.bits[y * self.width + x] = value;
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.contains(&true)
    }

    /// Coordinates of set bits in row-major order.
    pub fn ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.width;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| (i % w, i / w))
    }

    pub fn complement(&self) -> Self {
        BinaryMask {
            width: self.width,
            height: self.height,
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    /// Nearest-neighbor enlargement: destination `(x, y)` reads `(x / factor, y / factor)`.
    pub fn upscale_nearest(
        &self,
        factor: usize,
        width: usize,
        height: usize,
    ) -> Result<Self, MaskError> {
        if factor == 0 {
            return Err(MaskError::InvalidArgument("upscale factor 0".into()));
        }
        if width.div_ceil(factor) != self.width || height.div_ceil(factor) != self.height {
            return Err(MaskError::DimensionMismatch {
                expected: (width.div_ceil(factor), height.div_ceil(factor)),
                got: self.dims(),
            });
        }
        Ok(BinaryMask::from_fn(width, height, |x, y| {
            self.get(x / factor, y / factor)
        }))
    }

    /// Intersection over union; two empty masks score 1.
    pub fn iou(&self, other: &Self) -> Result<f64, MaskError> {
        if self.dims() != other.dims() {
            return Err(MaskError::DimensionMismatch {
                expected: self.dims(),
                got: other.dims(),
            });
        }
        let (mut inter, mut union) = (0usize, 0usize);
        for (&a, &b) in self.bits.iter().zip(&other.bits) {
            inter += (a && b) as usize;
            union += (a || b) as usize;
        }
        Ok(if union == 0 {
            1.0
        } else {
            inter as f64 / union as f64
        })
    }

    /// 0 for background, 255 for foreground.
    pub fn to_gray_bytes(&self) -> Vec<u8> {
        self.bits.iter().map(|&b| if b { 255 } else { 0 }).collect()
    }
}

/// Single-channel 8-bit image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub values: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, values: Vec<u8>) -> Result<Self, MaskError> {
        if values.len() != width * height {
            return Err(MaskError::DimensionMismatch {
                expected: (width, height),
                got: (values.len(), 1),
            });
        }
        Ok(GrayImage {
            width,
            height,
            values,
        })
    }
}
