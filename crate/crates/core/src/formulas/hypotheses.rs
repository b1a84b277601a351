use serde::{Deserialize, Serialize};

/// Scalar parameters of one of the three problem variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum ParamSet {
    /// Single r-wise t-intersecting family of k-subsets of `[n]`.
    Rwise { n: i64, k: i64, t: i64, r: i64 },
    /// Pair of k1- and k2-uniform cross t-intersecting families.
    Cross { n: i64, k1: i64, k2: i64, t: i64 },
    /// The three-set construction `X ⊆ M ⊆ C` with `|C| = c`.
    FamilyI { n: i64, k: i64, t: i64, c: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Theorem {
    /// Extremal non-trivial r-wise t-intersecting families.
    #[serde(rename = "1.1")]
    RwiseExtremal,
    /// Stability for non-trivial r-wise t-intersecting families.
    #[serde(rename = "1.2")]
    RwiseStability,
    /// Maximum product of non-trivial cross t-intersecting pairs.
    #[serde(rename = "1.3")]
    CrossProduct,
}

impl Theorem {
    pub fn parse(s: &str) -> Option<Theorem> {
        match s {
            "1.1" => Some(Theorem::RwiseExtremal),
            "1.2" => Some(Theorem::RwiseStability),
            "1.3" => Some(Theorem::CrossProduct),
            _ => None,
        }
    }
}

const CROSS_EXCLUDED: [(i64, i64, i64); 4] = [(2, 2, 1), (3, 2, 1), (4, 2, 1), (4, 4, 2)];

pub(crate) fn cross_excluded(k1: i64, k2: i64, t: i64) -> bool {
    CROSS_EXCLUDED.contains(&(k1, k2, t))
}

/// `max{t+1, k2-t} (t+1)(k1-t+1)(k2-t+1) + t + 1`, the smallest admissible `n`
/// for the cross-product theorem.
pub fn theorem_cross_threshold(k1: i64, k2: i64, t: i64) -> i64 {
    (t + 1).max(k2 - t) * (t + 1) * (k1 - t + 1) * (k2 - t + 1) + t + 1
}

/// Whether `params` satisfies every side condition of `theorem`. A variant
/// that does not belong to the theorem is reported as `false`.
pub fn hypotheses(theorem: Theorem, params: &ParamSet) -> bool {
    match (theorem, *params) {
        (Theorem::RwiseExtremal, ParamSet::Rwise { n, k, t, r }) => {
            t >= 1 && k >= 1 && r >= 3 && (t + r - 1) * (k - t - r + 3) < n
        }
        (Theorem::RwiseStability, ParamSet::Rwise { n, k, t, r }) => {
            if t < 1 || r < 3 || t + r > k {
                return false;
            }
            // max{C(t+r,2), (k-t-r+4)/2} (k-t-r+3)^2 + t+r-2 <= n, doubled to stay integral
            let a = (t + r) * (t + r - 1);
            let b = k - t - r + 4;
            let sq = (k - t - r + 3) * (k - t - r + 3);
            a.max(b) * sq + 2 * (t + r - 2) <= 2 * n
        }
        (Theorem::CrossProduct, ParamSet::Cross { n, k1, k2, t }) => {
            t >= 1
                && k1 >= k2
                && k2 >= t + 1
                && !cross_excluded(k1, k2, t)
                && n >= theorem_cross_threshold(k1, k2, t)
        }
        _ => false,
    }
}
