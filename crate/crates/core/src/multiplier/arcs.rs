use std::f64::consts::PI;

use num_complex::Complex64;

/// Membership tolerance on `xi` for the closed boxes.
pub const BOX_TOL: f64 = 1e-14;

/// The closed box `W_{m,nu}` in the `xi` coordinate, where `s = exp(2 pi i xi)`:
/// `|Re xi - nu/(M0 m)| <= 1/(2 M0 m)` and `|Im xi| <= 1/(4 M0 m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArcBox {
    pub m: u32,
    pub nu: u32,
    pub m0: u32,
}

impl ArcBox {
    pub fn new(m: u32, nu: u32, m0: u32) -> Option<Self> {
        (m >= 1 && m0 >= 1 && nu < m0 * m).then_some(ArcBox { m, nu, m0 })
    }

    /// `M0 * m`, the torsion order of the box.
    pub fn level(&self) -> u32 {
        self.m0 * self.m
    }

    pub fn center(&self) -> f64 {
        self.nu as f64 / self.level() as f64
    }

    pub fn half_width_re(&self) -> f64 {
        0.5 / self.level() as f64
    }

    pub fn half_width_im(&self) -> f64 {
        0.25 / self.level() as f64
    }

    /// The unique `s` in the box with `s^(M0 m) = 1`.
    pub fn torsion_point(&self) -> Complex64 {
        xi_to_s(Complex64::new(self.center(), 0.0))
    }

    pub fn contains_xi(&self, xi: Complex64) -> bool {
        let d = crate::multiplier::circle_distance(xi.re, self.center());
        d <= self.half_width_re() + BOX_TOL && xi.im.abs() <= self.half_width_im() + BOX_TOL
    }

    /// Chebyshev-Lobatto points on each side of the box, counter-clockwise.
    pub fn boundary_xi(&self, per_side: usize) -> Vec<Complex64> {
        let per_side = per_side.max(2);
        let (c, hr, hi) = (self.center(), self.half_width_re(), self.half_width_im());
        let corners = [
            Complex64::new(c - hr, -hi),
            Complex64::new(c + hr, -hi),
            Complex64::new(c + hr, hi),
            Complex64::new(c - hr, hi),
        ];
        let mut out = Vec::with_capacity(4 * per_side);
        for side in 0..4 {
            let (a, b) = (corners[side], corners[(side + 1) % 4]);
            for k in 0..per_side {
                // node runs from a (t = 0) to b (t = 1), clustered at the ends
                let t = 0.5 * (1.0 - (PI * k as f64 / (per_side - 1) as f64).cos());
                out.push(a + (b - a) * t);
            }
        }
        out
    }

    /// Tensor grid strictly inside the box, covering the central `fill` fraction.
    pub fn interior_xi(&self, per_axis: usize, fill: f64) -> Vec<Complex64> {
        let (c, hr, hi) = (self.center(), self.half_width_re(), self.half_width_im());
        let nodes: Vec<f64> = (0..per_axis).map(|k| fill * (2.0 * (k as f64 + 0.5) / per_axis as f64 - 1.0)).collect();
        let mut out = Vec::with_capacity(per_axis * per_axis);
        for &u in &nodes {
            for &v in &nodes {
                out.push(Complex64::new(c + u * hr, v * hi));
            }
        }
        out
    }

    /// Equispaced points along the real segment (the arc on the unit circle),
    /// endpoints and the torsion point included when `count` is odd.
    pub fn arc_xi(&self, count: usize) -> Vec<Complex64> {
        let count = count.max(3);
        let (c, hr) = (self.center(), self.half_width_re());
        (0..count).map(|k| Complex64::new(c - hr + 2.0 * hr * k as f64 / (count - 1) as f64, 0.0)).collect()
    }
}

pub fn xi_to_s(xi: Complex64) -> Complex64 {
    (Complex64::new(0.0, 2.0 * PI) * xi).exp()
}

/// The `M0 * m` boxes `W_{m,0..M0 m - 1}`.
pub fn arc_partition(m: u32, m0: u32) -> Vec<ArcBox> {
    if m == 0 || m0 == 0 {
        return Vec::new();
    }
    (0..m0 * m).map(|nu| ArcBox { m, nu, m0 }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_box_dimensions() {
        let boxes = arc_partition(1, 1);
        assert_eq!(boxes.len(), 1);
        assert_eq!(boxes[0].center(), 0.0);
        assert_eq!(boxes[0].half_width_re(), 0.5);
        assert_eq!(boxes[0].half_width_im(), 0.25);
    }

    #[test]
    fn two_boxes_at_zero_and_half() {
        let boxes = arc_partition(2, 1);
        let centers: Vec<f64> = boxes.iter().map(ArcBox::center).collect();
        assert_eq!(centers, vec![0.0, 0.5]);
        assert!(boxes.iter().all(|b| b.half_width_re() == 0.25));
    }

    #[test]
    fn six_boxes_hit_sixth_roots() {
        let boxes = arc_partition(2, 3);
        assert_eq!(boxes.len(), 6);
        for b in &boxes {
            let z = b.torsion_point();
            let z6 = z.powu(6);
            assert!((z6 - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn boxes_cover_the_circle() {
        let boxes = arc_partition(5, 2);
        for k in 0..1000 {
            let xi = Complex64::new(k as f64 / 1000.0, 0.0);
            assert!(boxes.iter().any(|b| b.contains_xi(xi)), "xi = {xi}");
        }
    }

    #[test]
    fn one_torsion_abscissa_per_box() {
        for (m, m0) in [(1, 1), (3, 1), (4, 2), (7, 3)] {
            for b in arc_partition(m, m0) {
                let n = b.level();
                let hits = (0..n).filter(|&k| b.contains_xi(Complex64::new(k as f64 / n as f64, 0.0))).count();
                assert_eq!(hits, 1, "box {b:?}");
            }
        }
    }
}
