use serde::{Deserialize, Serialize};

/// Path summary: total weight and number of hops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PathElement {
    pub w: i32,
    pub h: i32,
}

impl PathElement {
    /// Additive identity of the path semiring, `(i32::MAX / 2, 0)`.
    pub const INFINITY: PathElement = PathElement {
        w: i32::MAX / 2,
        h: 0,
    };

    pub const fn new(w: i32, h: i32) -> Self {
        PathElement { w, h }
    }

    pub fn is_infinite(&self) -> bool {
        self.w >= Self::INFINITY.w
    }
}
