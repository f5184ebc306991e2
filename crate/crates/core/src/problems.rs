//! Bi-objective test problems built by pairing shifted (and optionally
//! rotated) single-objective base functions, in the style of bi-objective
//! black-box benchmarking suites.
//!
//! Every base function attains its minimum value 0 at the origin; an instance
//! transform maps `x` to `z = R (x - shift)` with the shift drawn from
//! `[-4, 4]^n` and the search box fixed to `[-5, 5]^n`.

use serde::{Deserialize, Serialize};

use crate::rng::RandomSource;
use crate::scalar::Scalar;
use crate::types::Bounds;

pub const SEARCH_HALF_WIDTH: f64 = 5.0;
pub const SHIFT_HALF_WIDTH: f64 = 4.0;
const NADIR_MARGIN: f64 = 1.1;
const NADIR_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseFunctionKind {
    Sphere,
    Ellipsoid,
    Rastrigin,
    Rosenbrock,
    SharpRidge,
    DifferentPowers,
}

impl BaseFunctionKind {
    pub fn name(&self) -> &'static str {
        match self {
            BaseFunctionKind::Sphere => "sphere",
            BaseFunctionKind::Ellipsoid => "ellipsoid",
            BaseFunctionKind::Rastrigin => "rastrigin",
            BaseFunctionKind::Rosenbrock => "rosenbrock",
            BaseFunctionKind::SharpRidge => "sharpridge",
            BaseFunctionKind::DifferentPowers => "diffpowers",
        }
    }

    /// Raw value at `z`; minimum 0 at the origin for every kind.
    pub fn eval_raw<T: Scalar>(&self, z: &[T]) -> T {
        let n = z.len();
        match self {
            BaseFunctionKind::Sphere => z.iter().map(|&v| v * v).sum(),
            BaseFunctionKind::Ellipsoid => {
                let expo = T::of(6.0) / T::of((n - 1).max(1) as f64);
                z.iter()
                    .enumerate()
                    .map(|(j, &v)| T::of(10.0).powf(expo * T::of(j as f64)) * v * v)
                    .sum()
            }
            BaseFunctionKind::Rastrigin => {
                let two_pi = T::of(2.0 * std::f64::consts::PI);
                let cos_sum: T = z.iter().map(|&v| (two_pi * v).cos()).sum();
                let sq_sum: T = z.iter().map(|&v| v * v).sum();
                T::of(10.0) * (T::of(n as f64) - cos_sum) + sq_sum
            }
            BaseFunctionKind::Rosenbrock => {
                // classic Rosenbrock shifted so the optimum sits at z = 0
                let one = T::one();
                let mut sum = T::zero();
                for j in 0..n - 1 {
                    let a = z[j] + one;
                    let b = z[j + 1] + one;
                    let t1 = a * a - b;
                    sum = sum + T::of(100.0) * t1 * t1 + z[j] * z[j];
                }
                sum
            }
            BaseFunctionKind::SharpRidge => {
                let tail: T = z[1..].iter().map(|&v| v * v).sum();
                z[0] * z[0] + T::of(100.0) * tail.sqrt()
            }
            BaseFunctionKind::DifferentPowers => {
                let denom = T::of((n - 1).max(1) as f64);
                z.iter()
                    .enumerate()
                    .map(|(j, &v)| {
                        v.abs().powf(T::of(2.0) + T::of(4.0) * T::of(j as f64) / denom)
                    })
                    .sum()
            }
        }
    }
}

/// Orthonormalize a seeded standard-normal matrix with modified Gram-Schmidt
/// (two passes), then fix signs so the diagonal is positive.
pub fn random_rotation<T: Scalar>(n: usize, rng: &mut RandomSource) -> Vec<Vec<T>> {
    let mut rows: Vec<Vec<T>> = (0..n)
        .map(|_| (0..n).map(|_| rng.normal()).collect())
        .collect();
    for i in 0..n {
        for _pass in 0..2 {
            for j in 0..i {
                let proj: T = (0..n).map(|c| rows[i][c] * rows[j][c]).sum();
                for c in 0..n {
                    rows[i][c] = rows[i][c] - proj * rows[j][c];
                }
            }
        }
        let norm: T = (0..n).map(|c| rows[i][c] * rows[i][c]).sum::<T>().sqrt();
        assert!(norm > T::of(1e-12), "degenerate random matrix");
        for c in 0..n {
            rows[i][c] = rows[i][c] / norm;
        }
    }
    for i in 0..n {
        if rows[i][i] < T::zero() {
            for c in 0..n {
                rows[i][c] = -rows[i][c];
            }
        }
    }
    rows
}

/// Shift plus optional rotation defining one problem instance, applied as
/// `z = R (x - shift)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceTransform<T> {
    pub shift: Vec<T>,
    pub rotation: Option<Vec<Vec<T>>>,
}

impl<T: Scalar> InstanceTransform<T> {
    pub fn draw(n: usize, rotated: bool, rng: &mut RandomSource) -> Self {
        let half = T::of(SHIFT_HALF_WIDTH);
        let shift = (0..n).map(|_| rng.uniform_in(-half, half)).collect();
        let rotation = rotated.then(|| random_rotation(n, rng));
        Self { shift, rotation }
    }

    pub fn apply(&self, x: &[T]) -> Vec<T> {
        let shifted: Vec<T> = x.iter().zip(&self.shift).map(|(&v, &s)| v - s).collect();
        match &self.rotation {
            None => shifted,
            Some(rot) => rot
                .iter()
                .map(|row| row.iter().zip(&shifted).map(|(&r, &v)| r * v).sum())
                .collect(),
        }
    }
}

/// One transformed base function.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformedFunction<T> {
    pub kind: BaseFunctionKind,
    pub transform: InstanceTransform<T>,
}

impl<T: Scalar> TransformedFunction<T> {
    pub fn eval(&self, x: &[T]) -> T {
        self.kind.eval_raw(&self.transform.apply(x))
    }
}

/// A bi-objective problem: two transformed base functions over `[-5, 5]^n`,
/// with the normalization data (ideal and estimated nadir) the indicator
/// needs.
#[derive(Debug, Clone, PartialEq)]
pub struct BiObjectiveProblem<T> {
    pub id: String,
    pub pair_name: String,
    pub n: usize,
    pub bounds: Bounds<T>,
    pub g1: TransformedFunction<T>,
    pub g2: TransformedFunction<T>,
    pub ideal: [T; 2],
    pub nadir: [T; 2],
    pub instance_seed: u64,
}

impl<T: Scalar> BiObjectiveProblem<T> {
    /// Evaluate both objectives. `x` may lie outside the bounds; it must be
    /// finite and of length n.
    pub fn evaluate(&self, x: &[T]) -> [T; 2] {
        assert_eq!(x.len(), self.n, "decision vector length differs from n");
        assert!(x.iter().all(|v| v.is_finite()), "non-finite decision vector");
        [self.g1.eval(x), self.g2.eval(x)]
    }
}

/// The ten shipped base-function pairs: (name, first kind, first rotated,
/// second kind, second rotated). Spans unimodal/multimodal and
/// separable/rotated compositions.
pub const SHIPPED_PAIRS: [(&str, BaseFunctionKind, bool, BaseFunctionKind, bool); 10] = [
    ("sphere_sphere", BaseFunctionKind::Sphere, false, BaseFunctionKind::Sphere, false),
    ("sphere_rastrigin_rot", BaseFunctionKind::Sphere, false, BaseFunctionKind::Rastrigin, true),
    ("sphere_rosenbrock", BaseFunctionKind::Sphere, false, BaseFunctionKind::Rosenbrock, false),
    ("ellipsoid_ellipsoid_rot", BaseFunctionKind::Ellipsoid, false, BaseFunctionKind::Ellipsoid, true),
    ("ellipsoid_rastrigin_rot", BaseFunctionKind::Ellipsoid, false, BaseFunctionKind::Rastrigin, true),
    ("rastrigin_rastrigin_rot", BaseFunctionKind::Rastrigin, true, BaseFunctionKind::Rastrigin, true),
    ("rosenbrock_rastrigin_rot", BaseFunctionKind::Rosenbrock, false, BaseFunctionKind::Rastrigin, true),
    ("sharpridge_sphere", BaseFunctionKind::SharpRidge, false, BaseFunctionKind::Sphere, false),
    ("diffpowers_ellipsoid", BaseFunctionKind::DifferentPowers, false, BaseFunctionKind::Ellipsoid, false),
    ("rastrigin_rosenbrock", BaseFunctionKind::Rastrigin, false, BaseFunctionKind::Rosenbrock, false),
];

/// Ordered collection of problem instances.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSuite<T> {
    pub problems: Vec<BiObjectiveProblem<T>>,
    pub dims: Vec<usize>,
    pub suite_seed: u64,
}

impl<T: Scalar> ProblemSuite<T> {
    pub fn find(&self, id: &str) -> Option<&BiObjectiveProblem<T>> {
        self.problems.iter().find(|p| p.id == id)
    }
}

fn instance_seed(suite_seed: u64, n: usize, pair_index: usize) -> u64 {
    // splitmix64 over a composed key; stable across platforms
    let mut z = suite_seed
        .wrapping_mul(0x9e37_79b9_7f4a_7c15)
        .wrapping_add((n as u64) << 20)
        .wrapping_add(pair_index as u64 + 1);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic suite: every shipped pair instantiated at every dimension,
/// transforms drawn from per-instance seeded random sources.
pub fn make_suite<T: Scalar>(dims: &[usize], suite_seed: u64) -> ProblemSuite<T> {
    assert!(!dims.is_empty(), "dims must be non-empty");
    assert!(dims.iter().all(|&n| n >= 2), "every dimension must be >= 2");
    let mut problems = Vec::with_capacity(dims.len() * SHIPPED_PAIRS.len());
    for &n in dims {
        for (pair_index, &(name, k1, rot1, k2, rot2)) in SHIPPED_PAIRS.iter().enumerate() {
            let seed = instance_seed(suite_seed, n, pair_index);
            let mut rng = RandomSource::new(seed);
            let g1 = TransformedFunction { kind: k1, transform: InstanceTransform::draw(n, rot1, &mut rng) };
            let g2 = TransformedFunction { kind: k2, transform: InstanceTransform::draw(n, rot2, &mut rng) };
            // nadir: each objective at the other optimum, with safety margin
            let f1_at_second = g1.eval(&g2.transform.shift);
            let f2_at_first = g2.eval(&g1.transform.shift);
            let floor = T::of(NADIR_FLOOR);
            let margin = T::of(NADIR_MARGIN);
            let nadir = [(margin * f1_at_second).max(floor), (margin * f2_at_first).max(floor)];
            problems.push(BiObjectiveProblem {
                id: format!("{name}_n{n}"),
                pair_name: name.to_string(),
                n,
                bounds: Bounds::symmetric(n, T::of(SEARCH_HALF_WIDTH)),
                g1,
                g2,
                ideal: [T::zero(), T::zero()],
                nadir,
                instance_seed: seed,
            });
        }
    }
    ProblemSuite { problems, dims: dims.to_vec(), suite_seed }
}
