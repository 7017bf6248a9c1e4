//! Symmetries of the search problems.
//!
//! Swapping two bodies of equal mass maps solutions to solutions, and so do
//! the reflections `y -> -y` and `x -> -x`. The search only covers the region
//!
//! * `x` non-decreasing within each class of equal masses,
//! * `x_f + x_l >= 0` for the first and last member of the first class
//!   (`x_0 >= 0` without classes),
//! * `y_0 >= 0`.
//!
//! Every solution has an image there: reflect in `y` to fix the sign of
//! `y_0`, and reflect in `x` while reversing each class to fix the sum. The
//! two half-space cuts are relaxed by `MARGIN`, because solutions on the
//! mirror lines are common and a zero on a box face cannot be certified.
//! Ties in the `x` order need no margin: that cut only moves box bounds to
//! other box bounds. The other images are recovered from the certified boxes
//! afterwards.

use super::{certify_point, make_certificate, ProblemSpec, SolutionCertificate};
use crate::error::Result;
use crate::interval::{round, Interval, IntervalBox};
use crate::krawczyk::{Certified, KrawczykStatus};

/// Symmetries used to shrink the search region.
pub(crate) struct Symmetry {
    /// Bodies that may be swapped; singletons are left out.
    classes: Vec<Vec<usize>>,
    /// Box coordinates of each body's `x` and `y`.
    vars: Vec<[Option<usize>; 2]>,
    /// Whether the two axis reflections are symmetries as well.
    reflect: bool,
}

impl Symmetry {
    /// The anisotropic problem: equal masses and both reflections. For the
    /// reduced n-body problem only swaps of equal free bodies whose starting
    /// intervals agree, since the gauge and the eliminated body break the
    /// rest and the region need not be symmetric.
    pub(crate) fn new(problem: &ProblemSpec, region: &IntervalBox) -> Option<Symmetry> {
        match problem {
            ProblemSpec::Aniso(p) => {
                let mut classes: Vec<Vec<usize>> = Vec::new();
                for i in 0..p.k() {
                    match classes.iter_mut().find(|c| p.mu.get(c[0]) == p.mu.get(i)) {
                        Some(c) => c.push(i),
                        None => classes.push(vec![i]),
                    }
                }
                classes.retain(|c| c.len() > 1);
                Some(Symmetry {
                    classes,
                    vars: (0..p.k()).map(|b| [Some(2 * b), Some(2 * b + 1)]).collect(),
                    reflect: true,
                })
            }
            ProblemSpec::Nbody(p) => {
                let vars: Vec<[Option<usize>; 2]> = (0..p.n())
                    .map(|b| [p.var_index(b, 0), p.var_index(b, 1)])
                    .collect();
                let key = |b: usize| {
                    let iv = |v: Option<usize>| v.map(|v| (region[v].lo(), region[v].hi()));
                    (p.masses.get(b), iv(vars[b][0]), iv(vars[b][1]))
                };
                let mut classes: Vec<Vec<usize>> = Vec::new();
                for b in (0..p.n() - 1).filter(|&b| b != p.gauge) {
                    match classes.iter_mut().find(|c| key(c[0]) == key(b)) {
                        Some(c) => c.push(b),
                        None => classes.push(vec![b]),
                    }
                }
                classes.retain(|c| c.len() > 1);
                (!classes.is_empty()).then_some(Symmetry {
                    classes,
                    vars,
                    reflect: false,
                })
            }
        }
    }

    fn x(&self, body: usize) -> usize {
        self.vars[body][0].expect("class members have both coordinates")
    }
}

/// Slack on the reflection cuts; a power of two, so the cuts stay exact.
const MARGIN: f64 = 1.0 / 1024.0;

/// Narrows `x` to the region above; `None` when the box misses it.
pub(crate) fn order_contract(x: &IntervalBox, sym: &Symmetry) -> Option<IntervalBox> {
    let mut y = x.clone();
    for c in &sym.classes {
        let mut lo = f64::NEG_INFINITY;
        for &i in c {
            let v = y[sym.x(i)];
            lo = lo.max(v.lo());
            y[sym.x(i)] = v.intersect(Interval::from_bounds(lo, v.hi().max(lo)))?;
        }
        let mut hi = f64::INFINITY;
        for &i in c.iter().rev() {
            let v = y[sym.x(i)];
            hi = hi.min(v.hi());
            y[sym.x(i)] = v.intersect(Interval::from_bounds(v.lo().min(hi), hi))?;
        }
    }
    if !sym.reflect {
        return Some(y);
    }
    let at_least = |v: Interval, lo: f64| v.intersect(Interval::from_bounds(lo, v.hi().max(lo)));
    match sym.classes.first() {
        Some(c) => {
            let (f, l) = (sym.x(c[0]), sym.x(c[c.len() - 1]));
            // Rounded down, so the cuts never drop a point of the region.
            y[f] = at_least(y[f], round::sub_down(-y[l].hi(), MARGIN))?;
            y[l] = at_least(y[l], round::sub_down(-y[f].hi(), MARGIN))?;
        }
        None => y[0] = at_least(y[0], -MARGIN)?,
    }
    y[1] = at_least(y[1], -MARGIN)?;
    Some(y)
}

/// Every relabeling that permutes bodies within classes, identity first.
/// Entry `t` of a relabeling is the old index of new body `t`.
fn relabelings(k: usize, classes: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![(0..k).collect::<Vec<usize>>()];
    for c in classes {
        let mut next = Vec::new();
        for base in &out {
            for p in permutations(c.len()) {
                let mut s = base.clone();
                for (slot, &from) in c.iter().zip(&p) {
                    s[*slot] = base[c[from]];
                }
                next.push(s);
            }
        }
        out = next;
    }
    out
}

/// Permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// A relabeling followed by sign flips of the two axes.
struct Map<'a> {
    sym: &'a Symmetry,
    sigma: Vec<usize>,
    sign: [f64; 2],
}

impl Map<'_> {
    fn is_identity(&self) -> bool {
        self.sign == [1.0, 1.0] && self.sigma.iter().enumerate().all(|(t, &s)| t == s)
    }

    /// Pairs (new coordinate, old coordinate, sign).
    fn moves(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.sigma.iter().enumerate().flat_map(move |(t, &s)| {
            (0..2).filter_map(move |a| {
                Some((self.sym.vars[t][a]?, self.sym.vars[s][a]?, self.sign[a]))
            })
        })
    }

    fn apply_box(&self, x: &IntervalBox) -> IntervalBox {
        let mut y = x.clone();
        for (to, from, s) in self.moves() {
            y[to] = if s < 0.0 { -x[from] } else { x[from] };
        }
        y
    }

    fn apply_point(&self, x: &[f64]) -> Vec<f64> {
        let mut y = x.to_vec();
        for (to, from, s) in self.moves() {
            y[to] = s * x[from];
        }
        y
    }
}

fn symmetry_maps(sym: &Symmetry) -> Vec<Map<'_>> {
    let signs: &[[f64; 2]] = if sym.reflect {
        &[[1.0, 1.0], [-1.0, 1.0], [1.0, -1.0], [-1.0, -1.0]]
    } else {
        &[[1.0, 1.0]]
    };
    let mut out = Vec::new();
    for sigma in relabelings(sym.vars.len(), &sym.classes) {
        for &sign in signs {
            out.push(Map {
                sym,
                sigma: sigma.clone(),
                sign,
            });
        }
    }
    out
}

/// True when both certificates enclose the same zero: the zero of one lies
/// in its image, and the other region holds only one zero.
fn same_zero(a: &SolutionCertificate, b: &SolutionCertificate) -> bool {
    if a.krawczyk_image.subset_of(&b.region) || b.krawczyk_image.subset_of(&a.region) {
        return true;
    }
    if a.krawczyk_image.intersect(&b.krawczyk_image).is_none() {
        return false;
    }
    a.midpoint
        .iter()
        .zip(&b.midpoint)
        .all(|(x, y)| (x - y).abs() < 1e-9)
}

/// Certificate for the relabeled zero: the relabeled box usually passes the
/// Krawczyk test as is; otherwise certify around the relabeled midpoint.
fn relabeled(
    problem: &ProblemSpec,
    id: &str,
    c: &SolutionCertificate,
    map: &Map<'_>,
) -> Result<SolutionCertificate> {
    let region = map.apply_box(&c.region);
    let mid = map.apply_point(&c.midpoint);
    if let Ok(k) = problem.step(&region) {
        if k.status == KrawczykStatus::UniqueZero {
            if let Some(image) = k.image {
                let cert = Certified {
                    region,
                    image,
                    contraction_norm: k.contraction_norm,
                };
                let mut out = make_certificate(problem, id, cert, c.origin);
                if out.krawczyk_image.contains_point(&mid) {
                    out.midpoint_residual_norm = problem.residual_norm(&mid);
                    out.midpoint = mid;
                }
                return Ok(out);
            }
        }
    }
    let mut out = certify_point(problem, &mid, c.origin)?
        .ok_or(crate::Error::Domain("relabeled solution failed to certify"))?;
    out.problem_id = id.to_string();
    Ok(out)
}

/// Adds every symmetric image of the certified solutions, without duplicates.
pub(crate) fn close_orbits(
    problem: &ProblemSpec,
    id: &str,
    certs: Vec<SolutionCertificate>,
    sym: &Symmetry,
) -> Result<Vec<SolutionCertificate>> {
    let maps = symmetry_maps(sym);
    let mut out: Vec<SolutionCertificate> = Vec::new();
    for c in &certs {
        for map in &maps {
            // The mapped zero lies in the mapped image; if that fits in a
            // certified region, it is that region's zero.
            let image = map.apply_box(&c.krawczyk_image);
            if out.iter().any(|o| image.subset_of(&o.region)) {
                continue;
            }
            let r = if map.is_identity() {
                c.clone()
            } else {
                relabeled(problem, id, c, map)?
            };
            if !out.iter().any(|o| same_zero(o, &r)) {
                out.push(r);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabelings_cover_each_class() {
        assert_eq!(relabelings(3, &[vec![0, 1, 2]]).len(), 6);
        let r = relabelings(4, &[vec![0, 2], vec![1, 3]]);
        assert_eq!(r.len(), 4);
        assert!(r.contains(&vec![2, 3, 0, 1]));
        assert_eq!(r[0], vec![0, 1, 2, 3]);
    }

    #[test]
    fn order_contraction_trims_and_rejects() {
        let x: IntervalBox = [(0.0, 2.0), (0.0, 1.0), (-1.0, 1.0), (0.0, 1.0)]
            .iter()
            .map(|&(a, b)| Interval::from_bounds(a, b))
            .collect();
        let sym = Symmetry {
            classes: vec![vec![0, 1]],
            vars: vec![[Some(0), Some(1)], [Some(2), Some(3)]],
            reflect: true,
        };
        let y = order_contract(&x, &sym).unwrap();
        assert_eq!((y[0].lo(), y[0].hi()), (0.0, 1.0));
        assert_eq!((y[2].lo(), y[2].hi()), (0.0, 1.0));
        let w: IntervalBox = [(-3.0, 1.0), (-1.0, 1.0), (-1.0, 1.0), (0.0, 1.0)]
            .iter()
            .map(|&(a, b)| Interval::from_bounds(a, b))
            .collect();
        let w = order_contract(&w, &sym).unwrap();
        assert_eq!(
            (w[0].lo(), w[1].lo(), w[2].lo()),
            (-1.0 - MARGIN, -MARGIN, -1.0)
        );
        let z: IntervalBox = [(2.0, 3.0), (0.0, 1.0), (0.0, 1.0), (0.0, 1.0)]
            .iter()
            .map(|&(a, b)| Interval::from_bounds(a, b))
            .collect();
        assert!(order_contract(&z, &sym).is_none());
    }
}
