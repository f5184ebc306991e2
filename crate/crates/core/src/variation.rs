//! Real-coded variation: SBX with polynomial mutation, BLX-α, PCX, SPX and
//! REX, plus the brood generation step that applies one crossover to the same
//! parent set λ times.
//!
//! Every operator clamps its output onto the violated bound before returning.

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::rng::RandomSource;
use crate::scalar::Scalar;
use crate::types::{Bounds, Individual};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CrossoverMethod {
    Sbx,
    Blx,
    Pcx,
    Spx,
    Rex,
}

impl CrossoverMethod {
    pub const ALL: [CrossoverMethod; 5] = [
        CrossoverMethod::Sbx,
        CrossoverMethod::Blx,
        CrossoverMethod::Pcx,
        CrossoverMethod::Spx,
        CrossoverMethod::Rex,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CrossoverMethod::Sbx => "SBX",
            CrossoverMethod::Blx => "BLX",
            CrossoverMethod::Pcx => "PCX",
            CrossoverMethod::Spx => "SPX",
            CrossoverMethod::Rex => "REX",
        }
    }

    /// Parent count: 2 for the variable-wise pair operators, n+1 for the
    /// multi-parent ones.
    pub fn parent_count(&self, n: usize) -> usize {
        match self {
            CrossoverMethod::Sbx | CrossoverMethod::Blx => 2,
            _ => n + 1,
        }
    }
}

impl std::str::FromStr for CrossoverMethod {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "SBX" => Ok(CrossoverMethod::Sbx),
            "BLX" => Ok(CrossoverMethod::Blx),
            "PCX" => Ok(CrossoverMethod::Pcx),
            "SPX" => Ok(CrossoverMethod::Spx),
            "REX" => Ok(CrossoverMethod::Rex),
            _ => Err(ConfigError::Unknown { what: "crossover method", got: s.to_string() }),
        }
    }
}

/// All operator parameters in one bundle. `for_problem` fills in the
/// recommended values: η_c = η_m = 20, p_c = 0.9, p_m = 1/n, α = 0.5,
/// σ_ζ² = σ_η² = 0.1, ε = √(n+2), σ² = 1/(k-1), k = 2 or n+1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossoverConfig<T> {
    pub method: CrossoverMethod,
    pub eta_c: T,
    pub eta_m: T,
    pub p_c: T,
    pub p_m: T,
    pub alpha: T,
    pub sigma_zeta_sq: T,
    pub sigma_eta_sq: T,
    pub epsilon: T,
    pub sigma_sq: T,
    pub k: usize,
}

impl<T: Scalar> CrossoverConfig<T> {
    pub fn for_problem(method: CrossoverMethod, n: usize) -> Self {
        let k = method.parent_count(n);
        Self {
            method,
            eta_c: T::of(20.0),
            eta_m: T::of(20.0),
            p_c: T::of(0.9),
            p_m: T::one() / T::of(n as f64),
            alpha: T::of(0.5),
            sigma_zeta_sq: T::of(0.1),
            sigma_eta_sq: T::of(0.1),
            epsilon: T::of((n as f64 + 2.0).sqrt()),
            sigma_sq: T::one() / T::of((k - 1) as f64),
            k,
        }
    }
}

/// SBX spread factor for a uniform draw u.
fn sbx_beta<T: Scalar>(u: T, eta_c: T) -> T {
    let exponent = T::one() / (eta_c + T::one());
    if u <= T::of(0.5) {
        (T::of(2.0) * u).powf(exponent)
    } else {
        (T::one() / (T::of(2.0) * (T::one() - u))).powf(exponent)
    }
}

/// Simulated binary crossover: per variable, with probability p_c spread the
/// parent values by the β factor; otherwise copy them through. Children are
/// clamped onto the bounds.
pub fn sbx_pair<T: Scalar>(
    p1: &[T],
    p2: &[T],
    cfg: &CrossoverConfig<T>,
    bounds: &Bounds<T>,
    rng: &mut RandomSource,
) -> (Vec<T>, Vec<T>) {
    assert_eq!(p1.len(), p2.len(), "parent length mismatch");
    let half = T::of(0.5);
    let one = T::one();
    let mut c1 = Vec::with_capacity(p1.len());
    let mut c2 = Vec::with_capacity(p1.len());
    for (&a, &b) in p1.iter().zip(p2) {
        if rng.coin(cfg.p_c.as_f64()) {
            let beta = sbx_beta(rng.uniform::<T>(), cfg.eta_c);
            if a == b {
                // the spread formula would only add round-off here
                c1.push(a);
                c2.push(b);
            } else {
                c1.push(half * ((one + beta) * a + (one - beta) * b));
                c2.push(half * ((one - beta) * a + (one + beta) * b));
            }
        } else {
            c1.push(a);
            c2.push(b);
        }
    }
    bounds.repair(&mut c1);
    bounds.repair(&mut c2);
    (c1, c2)
}

/// Bounded polynomial mutation: each variable is perturbed with probability
/// p_m by the polynomial step of index η_m; the result stays inside bounds.
pub fn polynomial_mutation<T: Scalar>(
    x: &[T],
    bounds: &Bounds<T>,
    cfg: &CrossoverConfig<T>,
    rng: &mut RandomSource,
) -> Vec<T> {
    let one = T::one();
    let two = T::of(2.0);
    let half = T::of(0.5);
    let mut_pow = one / (cfg.eta_m + one);
    let mut out = x.to_vec();
    for (j, y) in out.iter_mut().enumerate() {
        if !rng.coin(cfg.p_m.as_f64()) {
            continue;
        }
        let lo = bounds.lower()[j];
        let hi = bounds.upper()[j];
        let range = hi - lo;
        let d1 = (*y - lo) / range;
        let d2 = (hi - *y) / range;
        let u: T = rng.uniform();
        let dq = if u <= half {
            let xy = one - d1;
            let val = two * u + (one - two * u) * xy.powf(cfg.eta_m + one);
            val.powf(mut_pow) - one
        } else {
            let xy = one - d2;
            let val = two * (one - u) + two * (u - half) * xy.powf(cfg.eta_m + one);
            one - val.powf(mut_pow)
        };
        *y = *y + dq * range;
    }
    bounds.repair(&mut out);
    out
}

/// Blend crossover: each child variable uniform on the α-expanded parent
/// interval.
pub fn blx_alpha<T: Scalar>(
    p1: &[T],
    p2: &[T],
    cfg: &CrossoverConfig<T>,
    bounds: &Bounds<T>,
    rng: &mut RandomSource,
) -> Vec<T> {
    assert_eq!(p1.len(), p2.len(), "parent length mismatch");
    let mut child: Vec<T> = p1
        .iter()
        .zip(p2)
        .map(|(&a, &b)| {
            let spread = cfg.alpha * (a - b).abs();
            let lo = a.min(b) - spread;
            let hi = a.max(b) + spread;
            if hi > lo {
                rng.uniform_in(lo, hi)
            } else {
                a
            }
        })
        .collect();
    bounds.repair(&mut child);
    child
}

fn mean_of<T: Scalar>(parents: &[&[T]]) -> Vec<T> {
    let n = parents[0].len();
    let scale = T::one() / T::of(parents.len() as f64);
    (0..n)
        .map(|j| parents.iter().map(|p| p[j]).sum::<T>() * scale)
        .collect()
}

fn norm<T: Scalar>(v: &[T]) -> T {
    v.iter().map(|&a| a * a).sum::<T>().sqrt()
}

/// Parent-centric crossover around `parents[center]`: one normal step along
/// the center's deviation from the parent mean plus isotropic normal steps in
/// the orthogonal complement, scaled by the mean perpendicular distance of
/// the other parents.
pub fn pcx<T: Scalar>(
    parents: &[&[T]],
    center: usize,
    cfg: &CrossoverConfig<T>,
    bounds: &Bounds<T>,
    rng: &mut RandomSource,
) -> Vec<T> {
    let k = parents.len();
    assert!(k >= 2, "pcx needs at least two parents");
    assert!(center < k, "center index out of range");
    let n = parents[0].len();
    let g = mean_of(parents);
    let xp = parents[center];
    let d: Vec<T> = (0..n).map(|j| xp[j] - g[j]).collect();
    let d_norm = norm(&d);
    let sigma_zeta = cfg.sigma_zeta_sq.sqrt();
    let sigma_eta = cfg.sigma_eta_sq.sqrt();

    // mean perpendicular distance of the other parents from the line through
    // g along d
    let mut child: Vec<T>;
    if d_norm < T::of(1e-12) {
        // collinear/collapsed parent set: isotropic fallback around the center
        let mut dbar = T::zero();
        let mut count = 0;
        for (i, p) in parents.iter().enumerate() {
            if i == center {
                continue;
            }
            let w: Vec<T> = (0..n).map(|j| p[j] - g[j]).collect();
            dbar = dbar + norm(&w);
            count += 1;
        }
        let dbar = dbar / T::of(count.max(1) as f64);
        let std = if dbar > T::of(1e-12) { sigma_eta * dbar } else { T::of(1e-6) };
        child = (0..n).map(|j| xp[j] + std * rng.normal::<T>()).collect();
    } else {
        let unit: Vec<T> = d.iter().map(|&v| v / d_norm).collect();
        let mut dbar = T::zero();
        let mut count = 0;
        for (i, p) in parents.iter().enumerate() {
            if i == center {
                continue;
            }
            let w: Vec<T> = (0..n).map(|j| p[j] - g[j]).collect();
            let along: T = w.iter().zip(&unit).map(|(&a, &b)| a * b).sum();
            let perp_sq = w.iter().map(|&a| a * a).sum::<T>() - along * along;
            dbar = dbar + perp_sq.max(T::zero()).sqrt();
            count += 1;
        }
        let dbar = dbar / T::of(count.max(1) as f64);

        // orthonormal basis of the complement of d, by Gram-Schmidt over the
        // standard basis
        let mut basis: Vec<Vec<T>> = vec![unit.clone()];
        for axis in 0..n {
            if basis.len() == n {
                break;
            }
            let mut e: Vec<T> = vec![T::zero(); n];
            e[axis] = T::one();
            for b in &basis {
                let proj: T = e.iter().zip(b).map(|(&a, &v)| a * v).sum();
                for j in 0..n {
                    e[j] = e[j] - proj * b[j];
                }
            }
            let e_norm = norm(&e);
            if e_norm > T::of(1e-9) {
                for v in e.iter_mut() {
                    *v = *v / e_norm;
                }
                basis.push(e);
            }
        }

        let w_zeta = sigma_zeta * rng.normal::<T>();
        child = (0..n).map(|j| xp[j] + w_zeta * d[j]).collect();
        for b in basis.iter().skip(1) {
            let w_eta = sigma_eta * rng.normal::<T>() * dbar;
            for j in 0..n {
                child[j] = child[j] + w_eta * b[j];
            }
        }
    }
    bounds.repair(&mut child);
    child
}

/// Simplex crossover: a point drawn uniformly inside the simplex spanned by
/// the parents expanded by ε about their mean.
pub fn spx<T: Scalar>(
    parents: &[&[T]],
    cfg: &CrossoverConfig<T>,
    bounds: &Bounds<T>,
    rng: &mut RandomSource,
) -> Vec<T> {
    let k = parents.len();
    assert!(k >= 2, "spx needs at least two parents");
    let n = parents[0].len();
    let g = mean_of(parents);
    let vertices: Vec<Vec<T>> = parents
        .iter()
        .map(|p| (0..n).map(|j| g[j] + cfg.epsilon * (p[j] - g[j])).collect())
        .collect();
    // accumulate c_i = r_i (y_{i-1} - y_i + c_{i-1}) with r_i = u^(1/i);
    // the exponent 1/i is what makes the sample uniform on the simplex
    let mut c = vec![T::zero(); n];
    for i in 1..k {
        let r = rng.uniform::<T>().powf(T::one() / T::of(i as f64));
        for j in 0..n {
            c[j] = r * (vertices[i - 1][j] - vertices[i][j] + c[j]);
        }
    }
    let mut child: Vec<T> = (0..n).map(|j| vertices[k - 1][j] + c[j]).collect();
    bounds.repair(&mut child);
    child
}

/// Real-coded ensemble crossover: the parent mean plus independent zero-mean
/// normal weights on every parent deviation.
pub fn rex<T: Scalar>(
    parents: &[&[T]],
    cfg: &CrossoverConfig<T>,
    bounds: &Bounds<T>,
    rng: &mut RandomSource,
) -> Vec<T> {
    let k = parents.len();
    assert!(k >= 2, "rex needs at least two parents");
    let n = parents[0].len();
    let g = mean_of(parents);
    let sigma = cfg.sigma_sq.sqrt();
    let mut child = g.clone();
    for p in parents {
        let xi = sigma * rng.normal::<T>();
        for j in 0..n {
            child[j] = child[j] + xi * (p[j] - g[j]);
        }
    }
    bounds.repair(&mut child);
    child
}

/// Generate λ children from the same parent set. SBX produces children in
/// pairs and applies polynomial mutation to both; PCX rotates its center
/// parent round-robin over the set. `evaluate` turns a repaired decision
/// vector into an evaluated individual.
pub fn generate_children<T, F>(
    parents: &[&Individual<T>],
    lambda: usize,
    cfg: &CrossoverConfig<T>,
    bounds: &Bounds<T>,
    rng: &mut RandomSource,
    mut evaluate: F,
) -> Result<Vec<Individual<T>>, ConfigError>
where
    T: Scalar,
    F: FnMut(Vec<T>) -> Individual<T>,
{
    assert_eq!(parents.len(), cfg.k, "parent set size differs from configured k");
    assert!(lambda >= 1, "lambda must be positive");
    let xs: Vec<&[T]> = parents.iter().map(|p| p.x.as_slice()).collect();
    let mut children = Vec::with_capacity(lambda);
    match cfg.method {
        CrossoverMethod::Sbx => {
            if lambda % 2 != 0 {
                return Err(ConfigError::OddSbxBrood(lambda));
            }
            for _ in 0..lambda / 2 {
                let (c1, c2) = sbx_pair(xs[0], xs[1], cfg, bounds, rng);
                let c1 = polynomial_mutation(&c1, bounds, cfg, rng);
                let c2 = polynomial_mutation(&c2, bounds, cfg, rng);
                children.push(evaluate(c1));
                children.push(evaluate(c2));
            }
        }
        CrossoverMethod::Blx => {
            for _ in 0..lambda {
                children.push(evaluate(blx_alpha(xs[0], xs[1], cfg, bounds, rng)));
            }
        }
        CrossoverMethod::Pcx => {
            for i in 0..lambda {
                children.push(evaluate(pcx(&xs, i % cfg.k, cfg, bounds, rng)));
            }
        }
        CrossoverMethod::Spx => {
            for _ in 0..lambda {
                children.push(evaluate(spx(&xs, cfg, bounds, rng)));
            }
        }
        CrossoverMethod::Rex => {
            for _ in 0..lambda {
                children.push(evaluate(rex(&xs, cfg, bounds, rng)));
            }
        }
    }
    Ok(children)
}
