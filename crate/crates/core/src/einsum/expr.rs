use std::sync::Arc;

use crate::algebra::{BinaryFunction, Element, UnaryFunction};
use crate::tensor::Tensor;
use crate::{Error, Result};

/// `=` or `+=`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Update {
    /// Reset the touched output entries to the additive identity first.
    Assign,
    /// Combine with the existing output through the output structure's add.
    Accumulate,
}

pub(crate) type Kernel<A, B, C> = Arc<dyn Fn(A, B) -> C + Send + Sync>;

pub(crate) enum Source<'a, T: Element> {
    Tensor {
        tensor: &'a Tensor<T>,
        indices: String,
    },
    /// Index-free pseudo-operand holding one value.
    Unit(T),
}

impl<T: Element> Source<'_, T> {
    pub(crate) fn indices(&self) -> &str {
        match self {
            Source::Tensor { indices, .. } => indices,
            Source::Unit(_) => "",
        }
    }

    pub(crate) fn tensor(&self) -> Option<&Tensor<T>> {
        match self {
            Source::Tensor { tensor, .. } => Some(tensor),
            Source::Unit(_) => None,
        }
    }
}

/// Right-hand side of an indexed assignment: zero, one or two indexed
/// tensors combined by the structure's multiplication or a user function,
/// with an optional scalar coefficient.
pub struct Expr<'a, A: Element, B: Element, C: Element> {
    pub(crate) left: Source<'a, A>,
    pub(crate) right: Source<'a, B>,
    pub(crate) kernel: Kernel<A, B, C>,
    /// The kernel maps an additive identity operand to the additive
    /// identity, so such operand entries can be skipped.
    pub(crate) annihilating: bool,
    pub(crate) coefficient: Option<C>,
}

fn operand<'a, T: Element>(tensor: &'a Tensor<T>, indices: &str) -> Source<'a, T> {
    Source::Tensor {
        tensor,
        indices: indices.to_string(),
    }
}

impl<'a, T: Element> Expr<'a, T, T, T> {
    /// `a[ia] * b[ib]` under the structure of `a`.
    pub fn mul(a: &'a Tensor<T>, ia: &str, b: &'a Tensor<T>, ib: &str) -> Result<Self> {
        let mul = a.algebra().mul_op()?;
        Ok(Expr {
            left: operand(a, ia),
            right: operand(b, ib),
            kernel: Arc::new(move |x, y| mul(x, y)),
            annihilating: true,
            coefficient: None,
        })
    }
}

impl<'a, T: Element> Expr<'a, T, (), T> {
    /// `a[ia]` unchanged.
    pub fn copy(a: &'a Tensor<T>, ia: &str) -> Self {
        Expr {
            left: operand(a, ia),
            right: Source::Unit(()),
            kernel: Arc::new(|x, ()| x),
            annihilating: true,
            coefficient: None,
        }
    }
}

impl<'a, A: Element, C: Element> Expr<'a, A, (), C> {
    /// `f(a[ia])`.
    pub fn map(f: &UnaryFunction<A, C>, a: &'a Tensor<A>, ia: &str) -> Result<Self> {
        if !f.is_distributive() {
            return Err(Error::NonDistributive);
        }
        let body = f.body();
        Ok(Expr {
            left: operand(a, ia),
            right: Source::Unit(()),
            kernel: Arc::new(move |x, ()| body(x)),
            annihilating: false,
            coefficient: None,
        })
    }
}

impl<'a, A: Element, B: Element, C: Element> Expr<'a, A, B, C> {
    /// `f(a[ia], b[ib])`.
    pub fn apply(
        f: &BinaryFunction<A, B, C>,
        a: &'a Tensor<A>,
        ia: &str,
        b: &'a Tensor<B>,
        ib: &str,
    ) -> Result<Self> {
        if !f.is_distributive() {
            return Err(Error::NonDistributive);
        }
        Ok(Expr {
            left: operand(a, ia),
            right: operand(b, ib),
            kernel: f.body(),
            annihilating: false,
            coefficient: None,
        })
    }

    /// Multiply every term by `c` under the output structure.
    pub fn scale(mut self, c: C) -> Self {
        self.coefficient = Some(c);
        self
    }

    /// Index strings as `"ik,kj->ij"`.
    pub fn signature(&self, output: &str) -> String {
        let ops: Vec<&str> = [self.left.indices(), self.right.indices()]
            .into_iter()
            .zip([self.left.tensor().is_some(), self.right.tensor().is_some()])
            .filter(|(_, present)| *present)
            .map(|(s, _)| s)
            .collect();
        format!("{}->{output}", ops.join(","))
    }
}

impl<C: Element> Expr<'static, (), (), C> {
    /// The constant `c` at every output position the indices select.
    pub fn constant(c: C) -> Self {
        Expr {
            left: Source::Unit(()),
            right: Source::Unit(()),
            kernel: Arc::new(move |(), ()| c),
            annihilating: false,
            coefficient: None,
        }
    }
}
