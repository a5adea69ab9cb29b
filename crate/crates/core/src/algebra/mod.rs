//! Algebraic structures that parameterize every tensor operation.
//!
//! A structure bundles an element type with the operators and identities of
//! one row of the classic hierarchy:
//!
//! | kind     | add | add id | add inv | mul | mul id |
//! |----------|-----|--------|---------|-----|--------|
//! | set      |     |        |         |     |        |
//! | monoid   |  x  |   x    |         |     |        |
//! | group    |  x  |   x    |    x    |     |        |
//! | semiring |  x  |   x    |         |  x  |   x    |
//! | ring     |  x  |   x    |    x    |  x  |   x    |
//!
//! Constructors enforce that exactly the fields of the chosen row are present.
//! Elements are `Copy`, so every element has a fixed byte width.

mod axioms;
mod function;
mod path;

use std::fmt;
use std::sync::Arc;

use num_traits::PrimInt;

pub use axioms::{check_axioms, check_triples, Axiom, AxiomCheck, AxiomReport};
pub use function::{
    BinaryFunction, BinaryTransform, TernaryTransform, UnaryFunction, UnaryTransform,
};
pub use path::PathElement;

/// Fixed-size tensor element.
pub trait Element: Copy + PartialEq + fmt::Debug + Send + Sync + 'static {}

impl<T: Copy + PartialEq + fmt::Debug + Send + Sync + 'static> Element for T {}

pub(crate) type BinOp<T> = Arc<dyn Fn(T, T) -> T + Send + Sync>;
pub(crate) type UnOp<T> = Arc<dyn Fn(T) -> T + Send + Sync>;
pub(crate) type Magnitude<T> = Arc<dyn Fn(&T) -> f64 + Send + Sync>;

/// Row of the structure table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StructureKind {
    Set,
    Monoid,
    Group,
    Semiring,
    Ring,
}

impl StructureKind {
    pub fn has_add(self) -> bool {
        !matches!(self, StructureKind::Set)
    }

    pub fn has_inverse(self) -> bool {
        matches!(self, StructureKind::Group | StructureKind::Ring)
    }

    pub fn has_mul(self) -> bool {
        matches!(self, StructureKind::Semiring | StructureKind::Ring)
    }
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            StructureKind::Set => "set",
            StructureKind::Monoid => "monoid",
            StructureKind::Group => "group",
            StructureKind::Semiring => "semiring",
            StructureKind::Ring => "ring",
        };
        f.write_str(name)
    }
}

struct Inner<T> {
    name: String,
    kind: StructureKind,
    add_id: Option<T>,
    add: Option<BinOp<T>>,
    add_inv: Option<UnOp<T>>,
    mul_id: Option<T>,
    mul: Option<BinOp<T>>,
    magnitude: Option<Magnitude<T>>,
}

/// An algebraic structure over elements of type `T`.
///
/// Cloning is cheap; the operators are shared and immutable.
pub struct Algebra<T: Element> {
    inner: Arc<Inner<T>>,
}

impl<T: Element> Clone for Algebra<T> {
    fn clone(&self) -> Self {
        Algebra {
            inner: Arc::clone(&self.inner),
        }
    }
}

impl<T: Element> fmt::Debug for Algebra<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra")
            .field("name", &self.inner.name)
            .field("kind", &self.inner.kind)
            .field("add_id", &self.inner.add_id)
            .field("mul_id", &self.inner.mul_id)
            .finish()
    }
}

impl<T: Element> Algebra<T> {
    fn build(name: impl Into<String>, kind: StructureKind) -> Inner<T> {
        Inner {
            name: name.into(),
            kind,
            add_id: None,
            add: None,
            add_inv: None,
            mul_id: None,
            mul: None,
            magnitude: None,
        }
    }

    fn wrap(inner: Inner<T>) -> Self {
        Algebra {
            inner: Arc::new(inner),
        }
    }

    /// Bare element type with no operators.
    pub fn set(name: impl Into<String>) -> Self {
        Self::wrap(Self::build(name, StructureKind::Set))
    }

    pub fn monoid(
        name: impl Into<String>,
        add_id: T,
        add: impl Fn(T, T) -> T + Send + Sync + 'static,
    ) -> Self {
        let mut inner = Self::build(name, StructureKind::Monoid);
        inner.add_id = Some(add_id);
        inner.add = Some(Arc::new(add));
        Self::wrap(inner)
    }

    pub fn group(
        name: impl Into<String>,
        add_id: T,
        add: impl Fn(T, T) -> T + Send + Sync + 'static,
        add_inv: impl Fn(T) -> T + Send + Sync + 'static,
    ) -> Self {
        let mut inner = Self::build(name, StructureKind::Group);
        inner.add_id = Some(add_id);
        inner.add = Some(Arc::new(add));
        inner.add_inv = Some(Arc::new(add_inv));
        Self::wrap(inner)
    }

    pub fn semiring(
        name: impl Into<String>,
        add_id: T,
        add: impl Fn(T, T) -> T + Send + Sync + 'static,
        mul_id: T,
        mul: impl Fn(T, T) -> T + Send + Sync + 'static,
    ) -> Self {
        let mut inner = Self::build(name, StructureKind::Semiring);
        inner.add_id = Some(add_id);
        inner.add = Some(Arc::new(add));
        inner.mul_id = Some(mul_id);
        inner.mul = Some(Arc::new(mul));
        Self::wrap(inner)
    }

    pub fn ring(
        name: impl Into<String>,
        add_id: T,
        add: impl Fn(T, T) -> T + Send + Sync + 'static,
        add_inv: impl Fn(T) -> T + Send + Sync + 'static,
        mul_id: T,
        mul: impl Fn(T, T) -> T + Send + Sync + 'static,
    ) -> Self {
        let mut inner = Self::build(name, StructureKind::Ring);
        inner.add_id = Some(add_id);
        inner.add = Some(Arc::new(add));
        inner.add_inv = Some(Arc::new(add_inv));
        inner.mul_id = Some(mul_id);
        inner.mul = Some(Arc::new(mul));
        Self::wrap(inner)
    }

    /// Attach a map to real numbers. Norms use it, and the axiom checker uses
    /// it to report violation magnitudes instead of exact mismatches.
    pub fn with_magnitude(self, magnitude: impl Fn(&T) -> f64 + Send + Sync + 'static) -> Self {
        let inner = &self.inner;
        Self::wrap(Inner {
            name: inner.name.clone(),
            kind: inner.kind,
            add_id: inner.add_id,
            add: inner.add.clone(),
            add_inv: inner.add_inv.clone(),
            mul_id: inner.mul_id,
            mul: inner.mul.clone(),
            magnitude: Some(Arc::new(magnitude)),
        })
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    pub fn kind(&self) -> StructureKind {
        self.inner.kind
    }

    /// Byte width of one element.
    pub fn elem_size(&self) -> usize {
        std::mem::size_of::<T>()
    }

    pub fn add_id(&self) -> Option<T> {
        self.inner.add_id
    }

    pub fn mul_id(&self) -> Option<T> {
        self.inner.mul_id
    }

    pub fn has_add(&self) -> bool {
        self.inner.add.is_some()
    }

    pub fn has_mul(&self) -> bool {
        self.inner.mul.is_some()
    }

    pub fn has_inverse(&self) -> bool {
        self.inner.add_inv.is_some()
    }

    pub fn has_magnitude(&self) -> bool {
        self.inner.magnitude.is_some()
    }

    pub fn is_add_id(&self, value: &T) -> bool {
        self.inner.add_id.as_ref() == Some(value)
    }

    pub fn add(&self, a: T, b: T) -> Option<T> {
        self.inner.add.as_ref().map(|f| f(a, b))
    }

    pub fn mul(&self, a: T, b: T) -> Option<T> {
        self.inner.mul.as_ref().map(|f| f(a, b))
    }

    pub fn inv(&self, a: T) -> Option<T> {
        self.inner.add_inv.as_ref().map(|f| f(a))
    }

    pub fn magnitude(&self, a: &T) -> Option<f64> {
        self.inner.magnitude.as_ref().map(|f| f(a))
    }

    pub(crate) fn add_op(&self) -> crate::Result<BinOp<T>> {
        self.inner
            .add
            .clone()
            .ok_or_else(|| self.missing("addition"))
    }

    pub(crate) fn mul_op(&self) -> crate::Result<BinOp<T>> {
        self.inner
            .mul
            .clone()
            .ok_or_else(|| self.missing("multiplication"))
    }

    pub(crate) fn inv_op(&self) -> crate::Result<UnOp<T>> {
        self.inner
            .add_inv
            .clone()
            .ok_or_else(|| self.missing("additive inverse"))
    }

    pub(crate) fn require_add_id(&self) -> crate::Result<T> {
        self.inner
            .add_id
            .ok_or_else(|| self.missing("additive identity"))
    }

    pub(crate) fn missing(&self, operation: &'static str) -> crate::Error {
        crate::Error::MissingOperation {
            structure: format!("{} ({})", self.inner.name, self.inner.kind),
            operation,
        }
    }
}

/// The default structure: real numbers with the usual `+` and `*`.
pub fn standard_ring() -> Algebra<f64> {
    Algebra::ring("real", 0.0, |a, b| a + b, |a| -a, 1.0, |a, b| a * b).with_magnitude(|x| *x)
}

/// Ring over 64-bit integers.
pub fn integer_ring() -> Algebra<i64> {
    Algebra::ring("integer", 0, |a, b| a + b, |a| -a, 1, |a, b| a * b)
        .with_magnitude(|x| *x as f64)
}

/// Min-plus semiring over a primitive integer type.
///
/// The additive identity ("infinity") is `max_int / 2`, so adding two
/// infinities cannot overflow. Multiplication is integer addition, except
/// that infinity absorbs: `inf * x = inf`.
pub fn tropical_semiring<I>(max_int: I) -> Algebra<I>
where
    I: PrimInt + Element,
{
    let two = I::one() + I::one();
    let inf = max_int / two;
    Algebra::semiring(
        "tropical",
        inf,
        |a: I, b: I| a.min(b),
        I::zero(),
        move |a: I, b: I| {
            if a >= inf || b >= inf {
                inf
            } else {
                a + b
            }
        },
    )
    .with_magnitude(|x: &I| x.to_f64().map_or(f64::INFINITY, f64::abs))
}

/// Min-plus semiring on 32-bit weights, infinity `i32::MAX / 2`.
pub fn tropical_i32() -> Algebra<i32> {
    tropical_semiring(i32::MAX)
}

/// Min-plus semiring whose elements carry a hop count alongside the weight.
///
/// `add` keeps the operand with the smaller `(w, h)` pair, so the hop count
/// travels with the winner of the min. `mul` adds weights and hops.
pub fn path_semiring() -> Algebra<PathElement> {
    Algebra::semiring(
        "path",
        PathElement::INFINITY,
        |a: PathElement, b: PathElement| if (a.w, a.h) < (b.w, b.h) { a } else { b },
        PathElement::new(0, 0),
        |a: PathElement, b: PathElement| {
            if a.is_infinite() || b.is_infinite() {
                PathElement::INFINITY
            } else {
                PathElement::new(a.w + b.w, a.h + b.h)
            }
        },
    )
    .with_magnitude(|p| f64::from(p.w).abs())
}
