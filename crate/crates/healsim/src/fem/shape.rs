//! Bilinear quadrilateral shape functions and the 2×2 Gauss rule.

/// Gauss points (local coordinates) and weights of the 2×2 rule.
pub const GAUSS_2X2: [([f64; 2], f64); 4] = {
    const A: f64 = 0.577_350_269_189_625_8; // 1/√3
    [
        ([-A, -A], 1.0),
        ([A, -A], 1.0),
        ([A, A], 1.0),
        ([-A, A], 1.0),
    ]
};

/// Values and local gradients of the four bilinear shape functions at ξ.
/// Node order: (−1,−1), (1,−1), (1,1), (−1,1).
pub fn shape_eval(xi: [f64; 2]) -> ([f64; 4], [[f64; 2]; 4]) {
    let (r, s) = (xi[0], xi[1]);
    let n = [
        0.25 * (1.0 - r) * (1.0 - s),
        0.25 * (1.0 + r) * (1.0 - s),
        0.25 * (1.0 + r) * (1.0 + s),
        0.25 * (1.0 - r) * (1.0 + s),
    ];
    let dn = [
        [-0.25 * (1.0 - s), -0.25 * (1.0 - r)],
        [0.25 * (1.0 - s), -0.25 * (1.0 + r)],
        [0.25 * (1.0 + s), 0.25 * (1.0 + r)],
        [-0.25 * (1.0 + s), 0.25 * (1.0 - r)],
    ];
    (n, dn)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn center_values_are_quarter() {
        let (n, _) = shape_eval([0.0, 0.0]);
        for v in n {
            assert!((v - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn nodal_values_are_kronecker() {
        let corners = [[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]];
        for (k, c) in corners.iter().enumerate() {
            let (n, _) = shape_eval(*c);
            for (i, v) in n.iter().enumerate() {
                let expected = if i == k { 1.0 } else { 0.0 };
                assert!((v - expected).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn partition_of_unity_and_gradient_closure() {
        for xi in [[0.3, -0.7], [0.123, 0.456], [-0.9, 0.2], [0.577, 0.577]] {
            let (n, dn) = shape_eval(xi);
            let sum: f64 = n.iter().sum();
            assert!((sum - 1.0).abs() < 1e-14);
            for c in 0..2 {
                let g: f64 = dn.iter().map(|d| d[c]).sum();
                assert!(g.abs() < 1e-14);
            }
        }
    }
}
