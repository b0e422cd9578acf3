//! Globally adaptive Gauss–Kronrod (7/15) quadrature for smooth integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoConvergence {
    pub best: Estimate,
    pub tolerance: f64,
}

fn gk15(f: &mut impl FnMut(f64) -> Complex64, a: f64, b: f64) -> Estimate {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    Estimate { value: kronrod * h, error: ((kronrod - gauss) * h).norm() }
}

struct Piece {
    a: f64,
    b: f64,
    est: Estimate,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.est.error == other.est.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.est.error.total_cmp(&other.est.error)
    }
}

/// Integrates `f` over `[a, b]`, bisecting the interval with the largest
/// error estimate until the summed estimate is below `abs_tol`.
pub fn integrate(
    mut f: impl FnMut(f64) -> Complex64,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_pieces: usize,
) -> Result<Estimate, NoConvergence> {
    let first = gk15(&mut f, a, b);
    let mut heap = BinaryHeap::from([Piece { a, b, est: first }]);
    loop {
        let value: Complex64 = heap.iter().map(|p| p.est.value).sum();
        let error: f64 = heap.iter().map(|p| p.est.error).sum();
        let total = Estimate { value, error };
        if error <= abs_tol {
            return Ok(total);
        }
        if heap.len() >= max_pieces || !error.is_finite() {
            return Err(NoConvergence { best: total, tolerance: abs_tol });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        heap.push(Piece { a: worst.a, b: mid, est: gk15(&mut f, worst.a, mid) });
        heap.push(Piece { a: mid, b: worst.b, est: gk15(&mut f, mid, worst.b) });
    }
}
