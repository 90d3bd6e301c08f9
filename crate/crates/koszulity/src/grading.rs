//! Tridegrees and rectangular windows.
//!
//! Every object in the crate is graded by `(h, w, d)`: cohomological degree,
//! internal weight, and x-degree. Differentials always have tridegree
//! (1, 0, 0), and the sign rules depend on `h` only (parity = h mod 2).

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Tri {
    pub h: i32,
    pub w: i32,
    pub d: i32,
}

pub const fn tri(h: i32, w: i32, d: i32) -> Tri {
    Tri { h, w, d }
}

impl Tri {
    pub const ZERO: Tri = tri(0, 0, 0);
    /// Degree of every differential.
    pub const DIFF: Tri = tri(1, 0, 0);

    pub fn add(self, o: Tri) -> Tri {
        tri(self.h + o.h, self.w + o.w, self.d + o.d)
    }

    pub fn sub(self, o: Tri) -> Tri {
        tri(self.h - o.h, self.w - o.w, self.d - o.d)
    }

    pub fn neg(self) -> Tri {
        tri(-self.h, -self.w, -self.d)
    }

    pub fn scale(self, k: i32) -> Tri {
        tri(self.h * k, self.w * k, self.d * k)
    }

    pub fn is_even(self) -> bool {
        self.h.rem_euclid(2) == 0
    }

    /// Koszul sign (-1)^(h(a) * h(b)) as a rational-free integer sign.
    pub fn koszul_sign(self, other: Tri) -> i64 {
        if self.is_even() || other.is_even() {
            1
        } else {
            -1
        }
    }
}

impl std::fmt::Display for Tri {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.h, self.w, self.d)
    }
}

/// Inclusive box of tridegrees.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Window {
    pub h_min: i32,
    pub h_max: i32,
    pub w_min: i32,
    pub w_max: i32,
    pub d_min: i32,
    pub d_max: i32,
}

impl Window {
    pub fn new(h: (i32, i32), w: (i32, i32), d: (i32, i32)) -> Result<Window> {
        let win = Window {
            h_min: h.0,
            h_max: h.1,
            w_min: w.0,
            w_max: w.1,
            d_min: d.0,
            d_max: d.1,
        };
        if win.h_min > win.h_max || win.w_min > win.w_max || win.d_min > win.d_max {
            return Err(Error::Scenario(format!("empty window {win:?}")));
        }
        Ok(win)
    }

    pub fn contains(&self, t: Tri) -> bool {
        (self.h_min..=self.h_max).contains(&t.h)
            && (self.w_min..=self.w_max).contains(&t.w)
            && (self.d_min..=self.d_max).contains(&t.d)
    }

    pub fn iter(&self) -> impl Iterator<Item = Tri> + '_ {
        let (w0, w1, d0, d1) = (self.w_min, self.w_max, self.d_min, self.d_max);
        (self.h_min..=self.h_max).flat_map(move |h| {
            (w0..=w1).flat_map(move |w| (d0..=d1).map(move |d| tri(h, w, d)))
        })
    }

    /// Tridegrees at which cohomology computed on this window is exact:
    /// both h-neighbours must also lie inside. w and d need no trimming
    /// because the differential preserves them.
    pub fn safe_interior(&self) -> Window {
        Window {
            h_min: self.h_min + 1,
            h_max: self.h_max - 1,
            ..*self
        }
    }

    pub fn grow_h(&self, lo: i32, hi: i32) -> Window {
        Window {
            h_min: self.h_min - lo,
            h_max: self.h_max + hi,
            ..*self
        }
    }

    pub fn intersect(&self, o: &Window) -> Window {
        Window {
            h_min: self.h_min.max(o.h_min),
            h_max: self.h_max.min(o.h_max),
            w_min: self.w_min.max(o.w_min),
            w_max: self.w_max.min(o.w_max),
            d_min: self.d_min.max(o.d_min),
            d_max: self.d_max.min(o.d_max),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.h_min > self.h_max || self.w_min > self.w_max || self.d_min > self.d_max
    }

    /// Shift the whole box by `off` (used to relate a window on a module to
    /// the matching window on a shifted/twisted module).
    pub fn translate(&self, off: Tri) -> Window {
        Window {
            h_min: self.h_min + off.h,
            h_max: self.h_max + off.h,
            w_min: self.w_min + off.w,
            w_max: self.w_max + off.w,
            d_min: self.d_min + off.d,
            d_max: self.d_max + off.d,
        }
    }

    /// Parse the CLI grammar `h:a..b,w:a..b,d:a..b` (each axis optional,
    /// missing axes keep `base`).
    pub fn parse_override(spec: &str, base: Window) -> Result<Window> {
        let mut win = base;
        for part in spec.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (axis, range) = part.split_once(':').ok_or_else(|| {
                Error::Scenario(format!("bad window fragment {part:?}, want axis:a..b"))
            })?;
            let (lo, hi) = range.split_once("..").ok_or_else(|| {
                Error::Scenario(format!("bad range {range:?}, want a..b"))
            })?;
            let lo: i32 = lo
                .trim()
                .parse()
                .map_err(|_| Error::Scenario(format!("bad integer {lo:?}")))?;
            let hi: i32 = hi
                .trim()
                .parse()
                .map_err(|_| Error::Scenario(format!("bad integer {hi:?}")))?;
            match axis.trim() {
                "h" => {
                    win.h_min = lo;
                    win.h_max = hi;
                }
                "w" => {
                    win.w_min = lo;
                    win.w_max = hi;
                }
                "d" => {
                    win.d_min = lo;
                    win.d_max = hi;
                }
                other => {
                    return Err(Error::Scenario(format!("unknown window axis {other:?}")));
                }
            }
        }
        if win.is_empty() {
            return Err(Error::Scenario("window override is empty".into()));
        }
        Ok(win)
    }
}

impl std::fmt::Display for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "h:{}..{},w:{}..{},d:{}..{}",
            self.h_min, self.h_max, self.w_min, self.w_max, self.d_min, self.d_max
        )
    }
}
