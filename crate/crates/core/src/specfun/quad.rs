use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
        }
    }
}

impl Quadrature {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions < 1 {
            return Err(Error::InvalidRange(format!(
                "quadrature tolerances must be positive (abs {abs_tol}, rel {rel_tol}, max {max_subdivisions})"
            )));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    resabs: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

// 15-point Kronrod rule with the embedded 7-point Gauss rule; error scaled as in QUADPACK.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = resk * 0.5;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = resk * half;
    resabs *= half.abs();
    resasc *= half.abs();
    let mut error = ((resk - resg) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Segment {
        a,
        b,
        value,
        error,
        resabs,
    }
}

/// Globally adaptive Gauss-Kronrod (7, 15) quadrature of `f` over `[a, b]`.
///
/// The segment with the largest error estimate is bisected until the summed
/// estimate meets `max(abs_tol, rel_tol * |I|)`. Requests below the rounding
/// level of `∫|f|` are met at that level.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, q: Quadrature) -> Result<QuadResult> {
    if !a.is_finite() || !b.is_finite() || a > b {
        return Err(Error::InvalidRange(format!(
            "integration interval [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            abs_error: 0.0,
        });
    }
    let first = gk15(&f, a, b);
    let mut value = first.value;
    let mut error = first.error;
    let mut resabs = first.resabs;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut subdivisions = 1;
    loop {
        let tol = q
            .abs_tol
            .max(q.rel_tol * value.abs())
            .max(100.0 * f64::EPSILON * resabs);
        if error <= tol {
            return Ok(QuadResult {
                value,
                abs_error: error,
            });
        }
        if subdivisions >= q.max_subdivisions {
            return Err(Error::NoConvergence {
                estimate: value,
                error,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap holds every live segment");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(Error::NoConvergence {
                estimate: value,
                error,
                subdivisions,
            });
        }
        let left = gk15(&f, worst.a, mid);
        let right = gk15(&f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        resabs += left.resabs + right.resabs - worst.resabs;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
        if subdivisions % 64 == 0 {
            // Re-sum to shed drift from the running updates.
            value = heap.iter().map(|s| s.value).sum();
            error = heap.iter().map(|s| s.error).sum();
            resabs = heap.iter().map(|s| s.resabs).sum();
        }
    }
}
