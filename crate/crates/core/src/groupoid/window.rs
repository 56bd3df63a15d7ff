//! Finite boxes of triples `(z, x, w)` and their exhaustive enumeration.

use super::{Coords, Cuts, Ext};
use crate::error::{Error, Result};

/// Desk-scale bound: finite `w` entries in `[0, W]`, `x` entries in `[-W, W]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window(u32);

impl Window {
    /// Keeps shifted coordinates within the packed 8-bit lanes of the checker.
    pub const MAX: u32 = 60;

    pub fn new(w: u32) -> Result<Window> {
        if !(1..=Self::MAX).contains(&w) {
            return Err(Error::OutOfRange(format!(
                "window must be in 1..={}, got {w}",
                Self::MAX
            )));
        }
        Ok(Window(w))
    }

    pub fn get(self) -> i64 {
        self.0 as i64
    }
}

/// Per-axis bounds; `inf` admits `w_m = ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AxisBox {
    pub x: (i64, i64),
    pub w: (i64, i64),
    pub inf: bool,
}

impl AxisBox {
    pub fn standard(window: Window) -> AxisBox {
        let b = window.get();
        AxisBox {
            x: (-b, b),
            w: (0, b),
            inf: true,
        }
    }

    /// Only `w_m = v`.
    pub fn pinned(mut self, v: i64) -> AxisBox {
        self.w = (v, v);
        self.inf = false;
        self
    }
}

/// A product box; enumeration yields canonical `w` and cone-positive `x`
/// only, with `x` zero after the first infinite cut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxRegion {
    pub z: (i64, i64),
    pub axes: Vec<AxisBox>,
}

fn within(v: i64, (lo, hi): (i64, i64)) -> bool {
    lo <= v && v <= hi
}

impl BoxRegion {
    pub fn standard(n: usize, z: (i64, i64), window: Window) -> BoxRegion {
        BoxRegion {
            z,
            axes: vec![AxisBox::standard(window); n],
        }
    }

    pub fn n(&self) -> usize {
        self.axes.len()
    }

    pub fn contains(&self, z: i64, x: &[i64], w: &[Ext]) -> bool {
        within(z, self.z)
            && x.len() == self.n()
            && self
                .axes
                .iter()
                .zip(x.iter().zip(w))
                .all(|(ax, (&xm, &wm))| {
                    within(xm, ax.x)
                        && match wm {
                            Ext::Fin(v) => within(v, ax.w),
                            Ext::Inf => ax.inf,
                        }
                })
    }

    fn cuts(&self, m: usize, w: &mut Cuts, f: &mut dyn FnMut(&[Ext])) {
        if m == self.n() {
            f(w);
            return;
        }
        let ax = self.axes[m];
        if m > 0 && w[m - 1].is_inf() {
            if ax.inf {
                w.push(Ext::Inf);
                self.cuts(m + 1, w, f);
                w.pop();
            }
            return;
        }
        for v in ax.w.0.max(0)..=ax.w.1 {
            w.push(Ext::Fin(v));
            self.cuts(m + 1, w, f);
            w.pop();
        }
        if ax.inf {
            w.push(Ext::Inf);
            self.cuts(m + 1, w, f);
            w.pop();
        }
    }

    /// Every `(x, w)` in the box, ignoring the degree.
    pub fn for_each_pair(&self, mut f: impl FnMut(&[i64], &[Ext])) {
        let n = self.n();
        let mut w = Cuts::new();
        self.cuts(0, &mut w, &mut |w: &[Ext]| {
            let mut ranges = Vec::with_capacity(n);
            for (m, (ax, &wm)) in self.axes.iter().zip(w).enumerate() {
                let r = match wm {
                    Ext::Fin(v) => (ax.x.0.max(-v), ax.x.1),
                    Ext::Inf if m > 0 && w[m - 1].is_inf() => (0, 0),
                    Ext::Inf => ax.x,
                };
                if r.0 > r.1 || (r == (0, 0) && !within(0, ax.x)) {
                    return;
                }
                ranges.push(r);
            }
            let mut x: Coords = ranges.iter().map(|r| r.0).collect();
            loop {
                f(&x, w);
                let mut m = n;
                loop {
                    if m == 0 {
                        return;
                    }
                    m -= 1;
                    if x[m] < ranges[m].1 {
                        x[m] += 1;
                        break;
                    }
                    x[m] = ranges[m].0;
                }
            }
        });
    }

    /// Every `(z, x, w)` in the box.
    pub fn for_each_triple(&self, mut f: impl FnMut(i64, &[i64], &[Ext])) {
        for z in self.z.0..=self.z.1 {
            self.for_each_pair(|x, w| f(z, x, w));
        }
    }
}
