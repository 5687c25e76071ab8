//! Winding numbers of entire functions around parallelograms, computed by
//! tracking a continuous branch of `arg f` along the boundary, and zero
//! localization by recursive subdivision.

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};

/// One function value together with the magnitude it should be judged
/// against. For a sum of terms the scale is the largest term, so an
/// identically vanishing sum shows up as `|value| ≪ scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub value: C64,
    pub scale: f64,
}

pub trait Evaluable {
    fn sample(&self, z: C64) -> Result<Sample>;

    fn value(&self, z: C64) -> Result<C64> {
        self.sample(z).map(|s| s.value)
    }
}

/// Adapter for plain closures; the scale is `|f(z)|`.
pub struct Func<F>(pub F);

impl<F: Fn(C64) -> Result<C64>> Evaluable for Func<F> {
    fn sample(&self, z: C64) -> Result<Sample> {
        let value = (self.0)(z)?;
        Ok(Sample {
            value,
            scale: value.norm(),
        })
    }
}

impl<T: Evaluable + ?Sized> Evaluable for &T {
    fn sample(&self, z: C64) -> Result<Sample> {
        (**self).sample(z)
    }
}

/// Cell coordinates `(u, v)` with `z = u·l1 + v·l2`.
pub fn cell_coords(z: C64, l1: C64, l2: C64) -> (f64, f64) {
    let cross = |a: C64, b: C64| (a.conj() * b).im;
    let det = cross(l1, l2);
    (cross(z, l2) / det, cross(l1, z) / det)
}

/// Distance from `z` to the nearest point of `w + l1ℤ + l2ℤ`.
pub fn lattice_distance(z: C64, w: C64, l1: C64, l2: C64) -> f64 {
    let (u, v) = cell_coords(z - w, l1, l2);
    let (n0, m0) = (u.round(), v.round());
    let mut best = f64::INFINITY;
    for dn in -1..=1 {
        for dm in -1..=1 {
            let p = (n0 + dn as f64) * l1 + (m0 + dm as f64) * l2;
            best = best.min((z - w - p).norm());
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Parallelogram {
    pub base: C64,
    pub gen1: C64,
    pub gen2: C64,
}

impl Parallelogram {
    pub fn new(base: C64, gen1: C64, gen2: C64) -> Result<Self> {
        let ratio = gen2 / gen1;
        if !ratio.is_finite() || ratio.im <= 0.0 {
            return Err(Error::Domain(format!(
                "generators {gen1} and {gen2} are not positively oriented"
            )));
        }
        Ok(Parallelogram { base, gen1, gen2 })
    }

    pub fn point(&self, u: f64, v: f64) -> C64 {
        self.base + u * self.gen1 + v * self.gen2
    }

    pub fn vertices(&self) -> [C64; 4] {
        [
            self.point(0.0, 0.0),
            self.point(1.0, 0.0),
            self.point(1.0, 1.0),
            self.point(0.0, 1.0),
        ]
    }

    pub fn center(&self) -> C64 {
        self.point(0.5, 0.5)
    }

    pub fn diameter(&self) -> f64 {
        (self.gen1 + self.gen2)
            .norm()
            .max((self.gen1 - self.gen2).norm())
    }

    pub fn contains(&self, z: C64) -> bool {
        let (u, v) = cell_coords(z - self.base, self.gen1, self.gen2);
        (0.0..=1.0).contains(&u) && (0.0..=1.0).contains(&v)
    }

    /// Sub-parallelogram spanning `[u0,u1] × [v0,v1]` in cell coordinates.
    pub fn sub(&self, u0: f64, u1: f64, v0: f64, v1: f64) -> Parallelogram {
        Parallelogram {
            base: self.point(u0, v0),
            gen1: (u1 - u0) * self.gen1,
            gen2: (v1 - v0) * self.gen2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindingOptions {
    /// Initial samples per edge.
    pub init_samples: usize,
    /// Budget for function evaluations in one call.
    pub max_samples: usize,
    /// Boundary values below this multiple of the median `|f|` count as a
    /// boundary zero.
    pub min_abs_rel: f64,
}

impl Default for WindingOptions {
    fn default() -> Self {
        WindingOptions {
            init_samples: 256,
            max_samples: 1 << 20,
            min_abs_rel: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindingCertificate {
    pub winding: i64,
    pub min_abs_on_boundary: f64,
    pub max_phase_step: f64,
    pub samples_used: usize,
}

struct Tracker<'a, F: ?Sized> {
    f: &'a F,
    budget: usize,
    used: usize,
    threshold: f64,
    min_abs: f64,
    max_step: f64,
    total: f64,
}

impl<F: Evaluable + ?Sized> Tracker<'_, F> {
    fn eval(&mut self, z: C64) -> Result<C64> {
        if self.used >= self.budget {
            return Err(Error::BudgetExceeded(self.used));
        }
        self.used += 1;
        let w = self.f.value(z)?;
        if !w.is_finite() {
            return Err(Error::NonFinite(z));
        }
        self.check(z, w)?;
        Ok(w)
    }

    fn check(&mut self, z: C64, w: C64) -> Result<()> {
        let abs = w.norm();
        if abs < self.threshold {
            return Err(Error::BoundaryZero { at: z, abs });
        }
        self.min_abs = self.min_abs.min(abs);
        Ok(())
    }

    /// Accumulates the argument change along the segment `a → b`, bisecting
    /// until every accepted step is below `π/2`.
    fn segment(&mut self, a: C64, fa: C64, b: C64, fb: C64) -> Result<()> {
        let mut stack = vec![(a, fa, b, fb)];
        while let Some((a, fa, b, fb)) = stack.pop() {
            let step = (fb / fa).arg();
            if step.abs() < FRAC_PI_2 {
                self.total += step;
                self.max_step = self.max_step.max(step.abs());
                continue;
            }
            let mid = (a + b) / 2.0;
            if mid == a || mid == b || (b - a).norm() < 1e-15 * a.norm().max(1.0) {
                return Err(Error::BoundaryZero {
                    at: mid,
                    abs: fa.norm().min(fb.norm()),
                });
            }
            let fm = self.eval(mid)?;
            // Later half pushed first so the walk stays in boundary order.
            stack.push((mid, fm, b, fb));
            stack.push((a, fa, mid, fm));
        }
        Ok(())
    }
}

pub fn winding_count<F: Evaluable + ?Sized>(
    f: &F,
    p: &Parallelogram,
    opts: &WindingOptions,
) -> Result<WindingCertificate> {
    let n = opts.init_samples.max(4);
    let verts = p.vertices();
    let mut points = Vec::with_capacity(4 * n);
    for e in 0..4 {
        let (a, b) = (verts[e], verts[(e + 1) % 4]);
        for k in 0..n {
            points.push(a + (b - a) * (k as f64 / n as f64));
        }
    }
    if points.len() > opts.max_samples {
        return Err(Error::BudgetExceeded(points.len()));
    }
    let mut values = Vec::with_capacity(points.len());
    for &z in &points {
        let w = f.value(z)?;
        if !w.is_finite() {
            return Err(Error::NonFinite(z));
        }
        values.push(w);
    }
    let median = median_abs(&values);
    let mut tracker = Tracker {
        f,
        budget: opts.max_samples,
        used: points.len(),
        threshold: opts.min_abs_rel * median,
        min_abs: f64::INFINITY,
        max_step: 0.0,
        total: 0.0,
    };
    if median == 0.0 {
        return Err(Error::BoundaryZero {
            at: points[0],
            abs: 0.0,
        });
    }
    for (&z, &w) in points.iter().zip(&values) {
        tracker.check(z, w)?;
    }
    for k in 0..points.len() {
        let next = (k + 1) % points.len();
        tracker.segment(points[k], values[k], points[next], values[next])?;
    }
    let raw = tracker.total / (2.0 * PI);
    let winding = raw.round();
    if (raw - winding).abs() >= 0.25 {
        return Err(Error::InconsistentWinding(format!(
            "total argument change {raw}·2π"
        )));
    }
    Ok(WindingCertificate {
        winding: winding as i64,
        min_abs_on_boundary: tracker.min_abs,
        max_phase_step: tracker.max_step,
        samples_used: tracker.used,
    })
}

fn median_abs(values: &[C64]) -> f64 {
    let mut mags: Vec<f64> = values.iter().map(|w| w.norm()).collect();
    mags.sort_by(|a, b| a.total_cmp(b));
    mags[mags.len() / 2]
}

const BASE_RETRIES: usize = 16;
const BASE_SCAN: usize = 64;

/// Picks a base point `ω₀ + u·λ1 + v·λ2` with `ω₀ = -(λ1+λ2)/2` and `(u, v)`
/// drawn from a seeded generator, such that a coarse boundary scan stays
/// away from zeros.
pub fn choose_admissible_base<F: Evaluable + ?Sized>(
    f: &F,
    l1: C64,
    l2: C64,
    seed: u64,
) -> Result<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let origin = -(l1 + l2) / 2.0;
    for _ in 0..BASE_RETRIES {
        let (u, v): (f64, f64) = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
        let base = origin + u * l1 + v * l2;
        let cell = Parallelogram::new(base, l1, l2)?;
        if scan_is_admissible(f, &cell)? {
            return Ok(base);
        }
    }
    Err(Error::NoAdmissibleBase(BASE_RETRIES))
}

fn scan_is_admissible<F: Evaluable + ?Sized>(f: &F, cell: &Parallelogram) -> Result<bool> {
    let verts = cell.vertices();
    let per_edge = BASE_SCAN / 4;
    let mut values = Vec::with_capacity(BASE_SCAN);
    let mut scale: f64 = 0.0;
    for e in 0..4 {
        let (a, b) = (verts[e], verts[(e + 1) % 4]);
        for k in 0..per_edge {
            let s = f.sample(a + (b - a) * (k as f64 / per_edge as f64))?;
            if !s.value.is_finite() {
                return Ok(false);
            }
            scale = scale.max(s.scale);
            values.push(s.value);
        }
    }
    let median = median_abs(&values);
    let min = values
        .iter()
        .map(|w| w.norm())
        .fold(f64::INFINITY, f64::min);
    Ok(median > 1e-12 * scale && min > 1e-6 * median)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocatedZero {
    pub zero: C64,
    pub multiplicity: i64,
}

/// One split of a cell with nonzero winding.
#[derive(Debug, Clone, PartialEq)]
pub struct SubdivisionStep {
    pub cell: Parallelogram,
    pub winding: i64,
    pub child_windings: [i64; 4],
}

const SPLIT_OFFSETS: [f64; 5] = [0.0, 0.01, -0.01, 0.023, -0.023];
const MAX_CELLS: usize = 1 << 14;

pub fn locate_zeros<F: Evaluable + ?Sized>(
    f: &F,
    p: &Parallelogram,
    expected: i64,
    tol: f64,
) -> Result<Vec<LocatedZero>> {
    locate_zeros_traced(f, p, expected, tol, &WindingOptions::default()).map(|(z, _)| z)
}

pub fn locate_zeros_traced<F: Evaluable + ?Sized>(
    f: &F,
    p: &Parallelogram,
    expected: i64,
    tol: f64,
    opts: &WindingOptions,
) -> Result<(Vec<LocatedZero>, Vec<SubdivisionStep>)> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!("tolerance {tol} must be positive")));
    }
    let root = winding_count(f, p, opts)?.winding;
    if root != expected {
        return Err(Error::InconsistentWinding(format!(
            "expected {expected} zeros, boundary winding is {root}"
        )));
    }
    let child_opts = WindingOptions {
        init_samples: 32,
        ..*opts
    };
    let mut zeros = Vec::new();
    let mut steps = Vec::new();
    let mut queue = vec![(*p, root)];
    let mut processed = 0;
    while let Some((cell, winding)) = queue.pop() {
        if winding == 0 {
            continue;
        }
        processed += 1;
        if processed > MAX_CELLS {
            return Err(Error::BudgetExceeded(processed));
        }
        if cell.diameter() < tol {
            zeros.push(LocatedZero {
                zero: polish(f, &cell, winding),
                multiplicity: winding,
            });
            continue;
        }
        let (children, windings) = split(f, &cell, &child_opts)?;
        let sum: i64 = windings.iter().sum();
        if sum != winding {
            return Err(Error::InconsistentWinding(format!(
                "children wind {windings:?}, parent {winding}"
            )));
        }
        steps.push(SubdivisionStep {
            cell,
            winding,
            child_windings: windings,
        });
        for (child, w) in children.into_iter().zip(windings).rev() {
            queue.push((child, w));
        }
    }
    Ok((zeros, steps))
}

fn split<F: Evaluable + ?Sized>(
    f: &F,
    cell: &Parallelogram,
    opts: &WindingOptions,
) -> Result<([Parallelogram; 4], [i64; 4])> {
    let mut last = None;
    for &du in &SPLIT_OFFSETS {
        for &dv in &SPLIT_OFFSETS {
            let (su, sv) = (0.5 + du, 0.5 + dv);
            let children = [
                cell.sub(0.0, su, 0.0, sv),
                cell.sub(su, 1.0, 0.0, sv),
                cell.sub(0.0, su, sv, 1.0),
                cell.sub(su, 1.0, sv, 1.0),
            ];
            let mut windings = [0i64; 4];
            let mut collided = false;
            for (k, child) in children.iter().enumerate() {
                match winding_count(f, child, opts) {
                    Ok(cert) => windings[k] = cert.winding,
                    Err(e @ Error::BoundaryZero { .. }) => {
                        last = Some(e);
                        collided = true;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            if !collided {
                return Ok((children, windings));
            }
        }
    }
    Err(last.expect("split loop ran at least once"))
}

/// A few secant steps from the cell centre; falls back to the centre when
/// the iteration leaves the neighbourhood or stalls.
fn polish<F: Evaluable + ?Sized>(f: &F, cell: &Parallelogram, multiplicity: i64) -> C64 {
    let center = cell.center();
    if multiplicity != 1 {
        return center;
    }
    let reach = cell.diameter().max(f64::MIN_POSITIVE);
    let mut x0 = cell.point(0.25, 0.25);
    let mut x1 = center;
    let (Ok(mut f0), Ok(mut f1)) = (f.value(x0), f.value(x1)) else {
        return center;
    };
    for _ in 0..5 {
        let denom = f1 - f0;
        if denom.norm() == 0.0 || f1.norm() == 0.0 {
            break;
        }
        let x2 = x1 - f1 * (x1 - x0) / denom;
        if !x2.is_finite() || (x2 - center).norm() > 2.0 * reach {
            return center;
        }
        let Ok(f2) = f.value(x2) else {
            return center;
        };
        (x0, f0, x1, f1) = (x1, f1, x2, f2);
    }
    x1
}
