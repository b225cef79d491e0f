use num_complex::Complex64;

use super::{Poly, DEGREE_CAP, ONE, ZERO};
use crate::error::{Error, Result};

/// Iteration cap for the simultaneous refinement.
pub const MAX_ITERATIONS: usize = 500;

/// A root together with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
}

/// Roots of a polynomial with multiplicities and its leading coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    entries: Vec<Root>,
    leading: Complex64,
    condition_hint: Vec<f64>,
}

impl RootSet {
    pub fn new(entries: Vec<Root>, leading: Complex64) -> Self {
        let condition_hint = separation(&entries);
        RootSet {
            entries,
            leading,
            condition_hint,
        }
    }

    /// A root set without roots: a nonzero constant.
    pub fn constant(leading: Complex64) -> Self {
        RootSet::new(Vec::new(), leading)
    }

    /// Every listed value becomes a simple root, repeated values are not merged.
    pub fn from_simple(values: &[Complex64], leading: Complex64) -> Self {
        RootSet::new(
            values
                .iter()
                .map(|&value| Root {
                    value,
                    multiplicity: 1,
                })
                .collect(),
            leading,
        )
    }

    pub fn entries(&self) -> &[Root] {
        &self.entries
    }

    pub fn leading(&self) -> Complex64 {
        self.leading
    }

    /// Distance from each root to its nearest neighbour (`inf` for a lone root).
    pub fn condition_hint(&self) -> &[f64] {
        &self.condition_hint
    }

    /// Sum of multiplicities.
    pub fn degree(&self) -> usize {
        self.entries.iter().map(|r| r.multiplicity).sum()
    }

    /// Roots listed with repetition.
    pub fn flat(&self) -> Vec<Complex64> {
        self.entries
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity))
            .collect()
    }

    /// Keeps the roots selected by `keep`; the leading coefficient becomes 1.
    pub fn filter_monic(&self, keep: impl Fn(&Root) -> bool) -> RootSet {
        RootSet::new(self.entries.iter().copied().filter(keep).collect(), ONE)
    }

    /// Monic root set of `1/conj(b)` over the nonzero roots `b`.
    pub fn reflect(&self) -> RootSet {
        RootSet::new(
            self.entries
                .iter()
                .filter(|r| r.value != ZERO)
                .map(|r| Root {
                    value: r.value.conj().inv(),
                    multiplicity: r.multiplicity,
                })
                .collect(),
            ONE,
        )
    }

    /// Concatenates two root sets; leading coefficients multiply.
    pub fn union(&self, other: &RootSet) -> RootSet {
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        RootSet::new(entries, self.leading * other.leading)
    }

    pub fn to_poly(&self) -> Poly {
        Poly::from_roots(self)
    }
}

fn separation(entries: &[Root]) -> Vec<f64> {
    entries
        .iter()
        .enumerate()
        .map(|(i, a)| {
            entries
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, b)| (a.value - b.value).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

impl Poly {
    /// All complex roots with multiplicities.
    ///
    /// Roots are refined simultaneously by Aberth–Ehrlich iteration. Roots
    /// within `max(1e-6, 10 tol)` of each other are merged into one root at
    /// the cluster mean. Remaining nearby clusters are merged when the Taylor
    /// coefficients of `p` at the merged centre confirm a numerical root of
    /// the combined multiplicity.
    ///
    /// Fails with [`Error::NonConvergence`] if a reported root has backward
    /// error `|p(r)| / sum |c_k| |r|^k` above `tol`.
    pub fn roots(&self, tol: f64) -> Result<RootSet> {
        let Some(degree) = self.degree() else {
            return Err(Error::ZeroPolynomial);
        };
        if degree > DEGREE_CAP {
            return Err(Error::DegreeCap {
                degree,
                cap: DEGREE_CAP,
            });
        }
        let leading = self.leading();
        let zeros = self.origin_multiplicity();
        let reduced = Poly {
            coeffs: self.coeffs[zeros..].to_vec(),
        };

        let mut approx = aberth(&reduced);
        approx.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));

        let radius = (10.0 * tol).max(1e-6);
        let mut clusters = cluster_by_radius(&approx, radius);
        for cl in &mut clusters {
            cl.refine(&reduced);
        }
        merge_validated(&reduced, &mut clusters);

        let mut entries: Vec<Root> = Vec::with_capacity(clusters.len() + 1);
        if zeros > 0 {
            entries.push(Root {
                value: ZERO,
                multiplicity: zeros,
            });
        }
        for cl in &clusters {
            let value = cl.center;
            let residual = reduced.eval(value).norm() / reduced.eval_abs(value).max(f64::MIN_POSITIVE);
            if residual > tol {
                return Err(Error::NonConvergence { residual, tol });
            }
            entries.push(Root {
                value,
                multiplicity: cl.multiplicity(),
            });
        }
        Ok(RootSet::new(entries, leading))
    }
}

/// Newton correction `p(z)/p'(z)`, evaluated through the reversed polynomial
/// when `|z| > 1` so that large roots do not overflow. Also reports whether
/// `p(z)` is already at rounding level.
fn newton_ratio(coeffs: &[Complex64], z: Complex64) -> (Complex64, bool) {
    let n = coeffs.len() - 1;
    let eps = f64::EPSILON;
    if z.norm() <= 1.0 {
        let mut p = ZERO;
        let mut dp = ZERO;
        let mut bound = 0.0;
        let r = z.norm();
        for &c in coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
            bound = bound * r + c.norm();
        }
        let small = p.norm() <= 4.0 * eps * bound;
        if dp == ZERO {
            return (ZERO, small);
        }
        (p / dp, small)
    } else {
        // p(z) = z^n q(y), y = 1/z, q with reversed coefficients.
        let y = z.inv();
        let r = y.norm();
        let mut q = ZERO;
        let mut dq = ZERO;
        let mut bound = 0.0;
        for &c in coeffs.iter() {
            dq = dq * y + q;
            q = q * y + c;
            bound = bound * r + c.norm();
        }
        let small = q.norm() <= 4.0 * eps * bound;
        if q == ZERO {
            return (ZERO, true);
        }
        let denom = Complex64::new(n as f64, 0.0) - y * dq / q;
        if denom == ZERO {
            return (ZERO, small);
        }
        (z / denom, small)
    }
}

/// Initial guesses on concentric circles whose radii come from the upper
/// convex hull of `(k, log|c_k|)`.
fn initial_guesses(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let pts: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(k, c)| (k, c.norm().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (k1, l1) = hull[hull.len() - 2];
            let (k2, l2) = hull[hull.len() - 1];
            // drop k2 if it lies on or below the segment k1 -> p
            let cross = (k2 as f64 - k1 as f64) * (p.1 - l1) - (l2 - l1) * (p.0 as f64 - k1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut guesses = Vec::with_capacity(n);
    let sigma = 0.7;
    for w in hull.windows(2) {
        let (k1, l1) = w[0];
        let (k2, l2) = w[1];
        let count = k2 - k1;
        let radius = ((l1 - l2) / count as f64).exp();
        for j in 0..count {
            let angle = 2.0 * std::f64::consts::PI * j as f64 / count as f64
                + 2.0 * std::f64::consts::PI * k2 as f64 / n as f64
                + sigma;
            guesses.push(Complex64::from_polar(radius, angle));
        }
    }
    guesses
}

fn aberth(p: &Poly) -> Vec<Complex64> {
    let coeffs = p.coeffs();
    let n = coeffs.len() - 1;
    match n {
        0 => return Vec::new(),
        1 => return vec![-coeffs[0] / coeffs[1]],
        _ => {}
    }
    let mut z = initial_guesses(coeffs);
    let mut done = vec![false; n];
    for _ in 0..MAX_ITERATIONS {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (ratio, small) = newton_ratio(coeffs, z[i]);
            if small || ratio == ZERO {
                done[i] = true;
                continue;
            }
            let sum: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d == ZERO {
                        ZERO
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let step = ratio / (ONE - ratio * sum);
            if !step.re.is_finite() || !step.im.is_finite() {
                done[i] = true;
                continue;
            }
            z[i] -= step;
            if step.norm() <= 2.0 * f64::EPSILON * z[i].norm() {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            break;
        }
    }
    z
}

#[derive(Debug, Clone)]
struct Cluster {
    members: Vec<Complex64>,
    center: Complex64,
}

impl Cluster {
    fn new(members: Vec<Complex64>) -> Self {
        let center = members.iter().sum::<Complex64>() / members.len() as f64;
        Cluster { members, center }
    }

    fn multiplicity(&self) -> usize {
        self.members.len()
    }

    /// Moves the centre onto the simple root of `p^(m-1)` near the mean; an
    /// m-fold root of `p` is a well-conditioned root of that derivative.
    fn refine(&mut self, p: &Poly) {
        let m = self.multiplicity();
        if m < 2 {
            return;
        }
        let mean = self.center;
        let spread = self
            .members
            .iter()
            .map(|z| (z - mean).norm())
            .fold(0.0, f64::max);
        let q = (1..m).fold(p.clone(), |acc, _| acc.derivative());
        let dq = q.derivative();
        let mut z = mean;
        for _ in 0..50 {
            let d = dq.eval(z);
            if d == ZERO {
                break;
            }
            let step = q.eval(z) / d;
            z -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z.norm().max(1.0) {
                break;
            }
        }
        if z.re.is_finite() && z.im.is_finite() && (z - mean).norm() <= 2.0 * spread + 1e-12 {
            self.center = z;
        }
    }
}

fn cluster_by_radius(points: &[Complex64], radius: f64) -> Vec<Cluster> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            let scale = points[i].norm().max(points[j].norm()).max(1.0);
            if (points[i] - points[j]).norm() <= radius * scale {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b.max(a)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for (i, &z) in points.iter().enumerate() {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(z);
    }
    groups.into_iter().map(Cluster::new).collect()
}

/// Candidate merges are limited to centres this close (relative). Aberth
/// scatters an m-fold root over a disc of radius about `eps^(1/m)`, which
/// reaches a few percent by m = 8.
const MERGE_REACH: f64 = 5e-2;
/// Allowed ratio of a Taylor coefficient to its rounding-error scale.
const MERGE_SLACK: f64 = 1e4;

/// Merges clusters whose union behaves as a single root of higher
/// multiplicity: all Taylor coefficients of order below the combined
/// multiplicity vanish at the merged centre up to rounding. Each cluster is
/// grown by its nearest neighbours and the largest validated union wins.
fn merge_validated(p: &Poly, clusters: &mut Vec<Cluster>) {
    loop {
        let mut best: Option<(usize, f64, Vec<usize>, Cluster)> = None;
        for i in 0..clusters.len() {
            let a = clusters[i].center;
            let mut near: Vec<(f64, usize)> = (0..clusters.len())
                .filter(|&j| j != i)
                .map(|j| {
                    let b = clusters[j].center;
                    ((a - b).norm() / a.norm().max(b.norm()).max(1.0), j)
                })
                .filter(|&(d, _)| d <= MERGE_REACH)
                .collect();
            near.sort_by(|x, y| x.0.total_cmp(&y.0));
            for k in (1..=near.len()).rev() {
                let mut members = clusters[i].members.clone();
                for &(_, j) in &near[..k] {
                    members.extend_from_slice(&clusters[j].members);
                }
                let m = members.len();
                let reach = near[k - 1].0;
                let better = best.as_ref().is_none_or(|(bm, br, ..)| m > *bm || (m == *bm && reach < *br));
                if !better {
                    break;
                }
                let mut merged = Cluster::new(members);
                merged.refine(p);
                if is_numerical_multiple_root(p, &merged) {
                    let mut taken: Vec<usize> = near[..k].iter().map(|&(_, j)| j).collect();
                    taken.push(i);
                    best = Some((m, reach, taken, merged));
                    break;
                }
            }
        }
        let Some((_, _, mut taken, merged)) = best else {
            return;
        };
        taken.sort_unstable();
        let keep = taken[0];
        for &j in taken[1..].iter().rev() {
            clusters.remove(j);
        }
        clusters[keep] = merged;
    }
}

fn is_numerical_multiple_root(p: &Poly, cluster: &Cluster) -> bool {
    let m = cluster.multiplicity();
    let c = cluster.center;
    let shifted = p.taylor_shift(c);
    let abs = Poly {
        coeffs: p.coeffs().iter().map(|a| Complex64::new(a.norm(), 0.0)).collect(),
    }
    .taylor_shift(Complex64::new(c.norm(), 0.0));
    (0..m).all(|k| {
        let a = shifted.coeffs().get(k).map_or(0.0, |v| v.norm());
        let bound = abs.coeffs().get(k).map_or(0.0, |v| v.norm());
        a <= MERGE_SLACK * f64::EPSILON * bound
    })
}
