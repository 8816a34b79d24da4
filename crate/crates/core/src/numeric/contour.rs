//! Marching squares on a rectilinear grid.

/// A line segment of the level set, in grid coordinates `(x, y)`.
pub type Segment = [(f64, f64); 2];

/// Scalar field sampled at `xs[i], ys[j]`, stored row-major as `z[i * ys.len() + j]`.
#[derive(Debug, Clone)]
pub struct GridField {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub z: Vec<f64>,
}

impl GridField {
    pub fn from_fn<F: Fn(f64, f64) -> f64>(xs: Vec<f64>, ys: Vec<f64>, f: F) -> Self {
        let mut z = Vec::with_capacity(xs.len() * ys.len());
        for &x in &xs {
            for &y in &ys {
                z.push(f(x, y));
            }
        }
        Self { xs, ys, z }
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.z[i * self.ys.len() + j]
    }

    /// Segments of the level set `z = level`, linearly interpolated along
    /// cell edges. Saddle cells are split using the cell-centre average.
    pub fn march(&self, level: f64) -> Vec<Segment> {
        let (nx, ny) = (self.xs.len(), self.ys.len());
        let mut out = Vec::new();
        if nx < 2 || ny < 2 {
            return out;
        }
        for i in 0..nx - 1 {
            for j in 0..ny - 1 {
                // corners counter-clockwise: (i,j) (i+1,j) (i+1,j+1) (i,j+1)
                let c = [
                    self.at(i, j),
                    self.at(i + 1, j),
                    self.at(i + 1, j + 1),
                    self.at(i, j + 1),
                ];
                if c.iter().any(|v| v.is_nan()) {
                    continue;
                }
                let mut case = 0u8;
                for (k, v) in c.iter().enumerate() {
                    if *v > level {
                        case |= 1 << k;
                    }
                }
                if case == 0 || case == 15 {
                    continue;
                }
                let (x0, x1, y0, y1) = (self.xs[i], self.xs[i + 1], self.ys[j], self.ys[j + 1]);
                let lerp = |a: f64, b: f64, za: f64, zb: f64| {
                    if zb == za {
                        0.5 * (a + b)
                    } else {
                        a + (level - za) / (zb - za) * (b - a)
                    }
                };
                // edges: 0 bottom (c0-c1), 1 right (c1-c2), 2 top (c3-c2), 3 left (c0-c3)
                let edge = |e: u8| -> (f64, f64) {
                    match e {
                        0 => (lerp(x0, x1, c[0], c[1]), y0),
                        1 => (x1, lerp(y0, y1, c[1], c[2])),
                        2 => (lerp(x0, x1, c[3], c[2]), y1),
                        _ => (x0, lerp(y0, y1, c[0], c[3])),
                    }
                };
                let centre_above = 0.25 * (c[0] + c[1] + c[2] + c[3]) > level;
                let pairs: &[(u8, u8)] = match case {
                    1 | 14 => &[(3, 0)],
                    2 | 13 => &[(0, 1)],
                    3 | 12 => &[(3, 1)],
                    4 | 11 => &[(1, 2)],
                    6 | 9 => &[(0, 2)],
                    7 | 8 => &[(3, 2)],
                    5 => {
                        if centre_above {
                            &[(3, 2), (0, 1)]
                        } else {
                            &[(3, 0), (1, 2)]
                        }
                    }
                    10 => {
                        if centre_above {
                            &[(3, 0), (1, 2)]
                        } else {
                            &[(3, 2), (0, 1)]
                        }
                    }
                    _ => &[],
                };
                for &(a, b) in pairs {
                    out.push([edge(a), edge(b)]);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::linspace;

    #[test]
    fn circle_vertices_lie_near_level() {
        let g = GridField::from_fn(linspace(-2.0, 2.0, 81), linspace(-2.0, 2.0, 81), |x, y| {
            x * x + y * y
        });
        let segs = g.march(1.0);
        assert!(segs.len() > 100);
        for s in &segs {
            for &(x, y) in s {
                assert!(((x * x + y * y).sqrt() - 1.0).abs() < 2e-3);
            }
        }
        // closed curve: every vertex appears twice
        let mut pts: Vec<(i64, i64)> = segs
            .iter()
            .flat_map(|s| s.iter().map(|&(x, y)| ((x * 1e9).round() as i64, (y * 1e9).round() as i64)))
            .collect();
        pts.sort();
        let mut i = 0;
        while i < pts.len() {
            assert_eq!(pts[i], pts[i + 1]);
            i += 2;
        }
    }

    #[test]
    fn linear_field_gives_straight_line() {
        let g = GridField::from_fn(linspace(0.0, 1.0, 11), linspace(0.0, 1.0, 11), |x, y| x + y);
        for s in g.march(0.95) {
            for (x, y) in s {
                assert!((x + y - 0.95).abs() < 1e-12);
            }
        }
        assert!(g.march(5.0).is_empty());
    }
}
