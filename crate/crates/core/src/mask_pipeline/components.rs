//! 8-connected component labeling (two-pass, union-find).

use super::BinaryMask;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundingBox {
    pub min_x: usize,
    pub min_y: usize,
    pub max_x: usize,
    pub max_y: usize,
}

impl BoundingBox {
    fn point(x: usize, y: usize) -> Self {
        BoundingBox {
            min_x: x,
            min_y: y,
            max_x: x,
            max_y: y,
        }
    }

    fn include(&mut self, x: usize, y: usize) {
        self.min_x = self.min_x.min(x);
        self.min_y = self.min_y.min(y);
        self.max_x = self.max_x.max(x);
        self.max_y = self.max_y.max(y);
    }

    pub fn width(&self) -> usize {
        self.max_x - self.min_x + 1
    }

    pub fn height(&self) -> usize {
        self.max_y - self.min_y + 1
    }

    pub fn diagonal(&self) -> f64 {
        (self.width() as f64).hypot(self.height() as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Component {
    /// 1-based; label 0 is background in [`Labeling::labels`].
    pub label: u32,
    pub area: usize,
    pub bbox: BoundingBox,
}

#[derive(Debug, Clone)]
pub struct Labeling {
    pub width: usize,
    pub height: usize,
    /// Row-major label per pixel, 0 for background.
    pub labels: Vec<u32>,
    /// Sorted by area descending, ties by bounding-box top-left in row-major
    /// order. `components[i].label == i + 1`.
    pub components: Vec<Component>,
}

impl Labeling {
    pub fn mask_of(&self, label: u32) -> BinaryMask {
        let bits = self.labels.iter().map(|&l| l == label).collect();
        BinaryMask::from_bits(self.width, self.height, bits).expect("labeling is consistent")
    }
}

fn find(parent: &mut [u32], mut i: u32) -> u32 {
    while parent[i as usize] != i {
        let grand = parent[parent[i as usize] as usize];
        parent[i as usize] = grand;
        i = grand;
    }
    i
}

fn union(parent: &mut [u32], a: u32, b: u32) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi as usize] = lo;
    }
}

pub fn label_components(mask: &BinaryMask) -> Labeling {
    let (w, h) = mask.dims();
    let mut labels = vec![0u32; w * h];
    // parent[0] is the unused background slot
    let mut parent: Vec<u32> = vec![0];

    for y in 0..h {
        for x in 0..w {
            if !mask.get(x, y) {
                continue;
            }
            let mut current = 0u32;
            let mut neighbors = [0u32; 4];
            if x > 0 {
                neighbors[0] = labels[y * w + x - 1];
            }
            if y > 0 {
                let row = (y - 1) * w;
                if x > 0 {
                    neighbors[1] = labels[row + x - 1];
                }
                neighbors[2] = labels[row + x];
                if x + 1 < w {
                    neighbors[3] = labels[row + x + 1];
                }
            }
            for &n in neighbors.iter().filter(|&&n| n != 0) {
                if current == 0 {
                    current = n;
                } else {
                    union(&mut parent, current, n);
                }
            }
            if current == 0 {
                current = parent.len() as u32;
                parent.push(current);
            }
            labels[y * w + x] = current;
        }
    }

    // Resolve provisional labels to roots and gather statistics per root.
    let mut stats: Vec<Option<(usize, BoundingBox)>> = vec![None; parent.len()];
    for y in 0..h {
        for x in 0..w {
            let l = labels[y * w + x];
            if l == 0 {
                continue;
            }
            let root = find(&mut parent, l);
            labels[y * w + x] = root;
            match &mut stats[root as usize] {
                Some((area, bbox)) => {
                    *area += 1;
                    bbox.include(x, y);
                }
                slot => *slot = Some((1, BoundingBox::point(x, y))),
            }
        }
    }

    let mut found: Vec<(u32, usize, BoundingBox)> = stats
        .iter()
        .enumerate()
        .filter_map(|(root, s)| s.map(|(area, bbox)| (root as u32, area, bbox)))
        .collect();
    found.sort_by_key(|&(_, area, bbox)| (std::cmp::Reverse(area), bbox.min_y, bbox.min_x));

    let mut relabel = vec![0u32; parent.len()];
    let components = found
        .iter()
        .enumerate()
        .map(|(i, &(root, area, bbox))| {
            relabel[root as usize] = i as u32 + 1;
            Component {
                label: i as u32 + 1,
                area,
                bbox,
            }
        })
        .collect();
    for l in labels.iter_mut() {
        *l = relabel[*l as usize];
    }
    Labeling {
        width: w,
        height: h,
        labels,
        components,
    }
}

/// Components of `mask` under 8-connectivity, largest first.
pub fn connected_components(mask: &BinaryMask) -> Vec<Component> {
    label_components(mask).components
}

/// The largest component as its own mask, if it has at least `min_area` pixels.
pub fn largest_blob(mask: &BinaryMask, min_area: usize) -> Option<BinaryMask> {
    let labeling = label_components(mask);
    let top = labeling.components.first()?;
    (top.area >= min_area).then(|| labeling.mask_of(top.label))
}
