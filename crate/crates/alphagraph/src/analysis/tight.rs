//! Four-point configurations that attain the worst-case reachability
//! bounds exactly. Each generator returns a tiny dataset with labeled
//! roles: a pivot `p`, a pruned-away target `z`, the witness `y` whose
//! edge covered `z`, and the surviving neighbor `x` that covered `y`.

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// A labeled extremal configuration. Point indices follow the fixed
/// layout `[p, x, y, z]`.
#[derive(Debug, Clone)]
pub struct TightConfig {
    pub dataset: Dataset,
    pub p: usize,
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

fn validate_alphas(alpha1: f64, alpha2: f64) -> Result<()> {
    if !(alpha2 > 1.0 && alpha1 >= alpha2) {
        return Err(Error::InvalidParams(format!(
            "need alpha1 >= alpha2 > 1, got ({alpha1}, {alpha2})"
        )));
    }
    Ok(())
}

impl TightConfig {
    fn dist(&self, a: usize, b: usize) -> f64 {
        self.dataset.distance(a, b)
    }

    /// The extremal objective `D(x, z)`.
    pub fn objective(&self) -> f64 {
        self.dist(self.x, self.z)
    }

    /// Largest violation of the constraint system
    ///
    /// ```text
    /// D(y,z) <= 1/alpha1
    /// D(x,y) <= D(p,y)/alpha2
    /// D(p,z)  = 1
    /// ordered only: D(x,y) <= D(p,y) <= D(p,z)
    /// ```
    ///
    /// The ordered system is symmetric under exchanging the roles of `x`
    /// and `z` in the objective, and one published labeling of the
    /// general-metric configuration is stated with the two swapped; both
    /// orientations are therefore tried and the smaller violation is
    /// returned. Zero (up to float evaluation noise) means the
    /// configuration is feasible.
    pub fn max_constraint_violation(&self, alpha1: f64, alpha2: f64, ordered: bool) -> f64 {
        let v = self.violation_oriented(self.x, self.z, alpha1, alpha2, ordered);
        if ordered {
            v.min(self.violation_oriented(self.z, self.x, alpha1, alpha2, ordered))
        } else {
            v
        }
    }

    fn violation_oriented(
        &self,
        x: usize,
        z: usize,
        alpha1: f64,
        alpha2: f64,
        ordered: bool,
    ) -> f64 {
        let (p, y) = (self.p, self.y);
        let mut worst = (self.dist(y, z) - 1.0 / alpha1).max(0.0);
        worst = worst.max((self.dist(x, y) - self.dist(p, y) / alpha2).max(0.0));
        worst = worst.max((self.dist(p, z) - 1.0).abs());
        if ordered {
            worst = worst.max((self.dist(x, y) - self.dist(p, y)).max(0.0));
            worst = worst.max((self.dist(p, y) - self.dist(p, z)).max(0.0));
        }
        worst
    }
}

/// Collinear configuration attaining `D(x,z) = (a1 + a2 + 1)/(a1*a2)`,
/// the worst case for arbitrary selection order in any metric.
///
/// On the line: `p = 0`, `z = 1`, `y = 1 + 1/a1`,
/// `x = y + (1 + 1/a1)/a2`. Here `z` is the nearest point to `p` and `x`
/// the farthest, the pattern nearest-first selection forbids.
pub fn gen_unsorted_tight_config(alpha1: f64, alpha2: f64) -> Result<TightConfig> {
    validate_alphas(alpha1, alpha2)?;
    let zc = 1.0;
    let yc = 1.0 + 1.0 / alpha1;
    let xc = yc + (1.0 + 1.0 / alpha1) / alpha2;
    let dataset = Dataset::from_points(vec![vec![0.0], vec![xc], vec![yc], vec![zc]])?;
    Ok(TightConfig {
        dataset,
        p: 0,
        x: 1,
        y: 2,
        z: 3,
    })
}

/// General-metric configuration attaining `D(x,z) = (a1 + a2)/(a1*a2)`
/// under nearest-first selection: `x`, `y`, `z` all at distance 1 from
/// `p` yet collinear among themselves, which no Euclidean embedding
/// allows.
pub fn gen_sorted_general_tight_config(alpha1: f64, alpha2: f64) -> Result<TightConfig> {
    validate_alphas(alpha1, alpha2)?;
    let dxy = 1.0 / alpha1;
    let dyz = 1.0 / alpha2;
    let dxz = (alpha1 + alpha2) / (alpha1 * alpha2);
    let dataset = Dataset::from_distance_matrix(vec![
        vec![0.0, 1.0, 1.0, 1.0],
        vec![1.0, 0.0, dxy, dxz],
        vec![1.0, dxy, 0.0, dyz],
        vec![1.0, dxz, dyz, 0.0],
    ])?;
    Ok(TightConfig {
        dataset,
        p: 0,
        x: 1,
        y: 2,
        z: 3,
    })
}

/// Planar Euclidean configuration attaining `D(x,z) = beta(a1, a2)`:
/// `x`, `y`, `z` on the unit circle around `p` at angles `2*(t1+t2)`,
/// `2*t1` and `0` with `t_i = asin(1/(2*a_i))`, so the chords satisfy
/// `D(y,z) = 1/a1` and `D(x,y) = 1/a2` with equality.
pub fn gen_sorted_euclid_tight_config(alpha1: f64, alpha2: f64) -> Result<TightConfig> {
    validate_alphas(alpha1, alpha2)?;
    let t1 = (1.0 / (2.0 * alpha1)).asin();
    let t2 = (1.0 / (2.0 * alpha2)).asin();
    let y_ang = 2.0 * t1;
    let x_ang = 2.0 * (t1 + t2);
    let dataset = Dataset::from_points(vec![
        vec![0.0, 0.0],
        vec![x_ang.cos(), x_ang.sin()],
        vec![y_ang.cos(), y_ang.sin()],
        vec![1.0, 0.0],
    ])?;
    Ok(TightConfig {
        dataset,
        p: 0,
        x: 1,
        y: 2,
        z: 3,
    })
}
