//! User-defined elementwise functions and transforms.
//!
//! Functions produce a new element from one or two operands, possibly of
//! different types. Transforms mutate their last operand in place and
//! replace the output structure's addition entirely.

use std::fmt;
use std::sync::Arc;

use super::Element;

/// `(C) <- (A)`.
pub struct UnaryFunction<A, C> {
    body: Arc<dyn Fn(A) -> C + Send + Sync>,
    distributive: bool,
}

/// `(C) <- (A, B)`.
pub struct BinaryFunction<A, B, C> {
    body: Arc<dyn Fn(A, B) -> C + Send + Sync>,
    distributive: bool,
}

impl<A: Element, C: Element> UnaryFunction<A, C> {
    pub fn new(body: impl Fn(A) -> C + Send + Sync + 'static) -> Self {
        UnaryFunction {
            body: Arc::new(body),
            distributive: true,
        }
    }

    /// Mark the function as non-distributive. Executing it is rejected.
    pub fn non_distributive(mut self) -> Self {
        self.distributive = false;
        self
    }

    pub fn arity(&self) -> usize {
        1
    }

    pub fn is_distributive(&self) -> bool {
        self.distributive
    }

    pub fn call(&self, a: A) -> C {
        (self.body)(a)
    }

    pub(crate) fn body(&self) -> Arc<dyn Fn(A) -> C + Send + Sync> {
        Arc::clone(&self.body)
    }
}

impl<A: Element, B: Element, C: Element> BinaryFunction<A, B, C> {
    pub fn new(body: impl Fn(A, B) -> C + Send + Sync + 'static) -> Self {
        BinaryFunction {
            body: Arc::new(body),
            distributive: true,
        }
    }

    pub fn non_distributive(mut self) -> Self {
        self.distributive = false;
        self
    }

    pub fn arity(&self) -> usize {
        2
    }

    pub fn is_distributive(&self) -> bool {
        self.distributive
    }

    pub fn call(&self, a: A, b: B) -> C {
        (self.body)(a, b)
    }

    pub(crate) fn body(&self) -> Arc<dyn Fn(A, B) -> C + Send + Sync> {
        Arc::clone(&self.body)
    }
}

impl<A, C> Clone for UnaryFunction<A, C> {
    fn clone(&self) -> Self {
        UnaryFunction {
            body: Arc::clone(&self.body),
            distributive: self.distributive,
        }
    }
}

impl<A, B, C> Clone for BinaryFunction<A, B, C> {
    fn clone(&self) -> Self {
        BinaryFunction {
            body: Arc::clone(&self.body),
            distributive: self.distributive,
        }
    }
}

impl<A, C> fmt::Debug for UnaryFunction<A, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UnaryFunction(distributive={})", self.distributive)
    }
}

impl<A, B, C> fmt::Debug for BinaryFunction<A, B, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryFunction(distributive={})", self.distributive)
    }
}

/// `void (&A)`.
pub struct UnaryTransform<A> {
    body: Arc<dyn Fn(&mut A) + Send + Sync>,
}

/// `void (A, &B)`.
pub struct BinaryTransform<A, B> {
    body: Arc<dyn Fn(A, &mut B) + Send + Sync>,
}

/// `void (A, B, &C)`.
pub struct TernaryTransform<A, B, C> {
    body: Arc<dyn Fn(A, B, &mut C) + Send + Sync>,
}

impl<A: Element> UnaryTransform<A> {
    pub fn new(body: impl Fn(&mut A) + Send + Sync + 'static) -> Self {
        UnaryTransform {
            body: Arc::new(body),
        }
    }

    pub fn arity(&self) -> usize {
        1
    }

    pub fn apply(&self, a: &mut A) {
        (self.body)(a)
    }
}

impl<A: Element, B: Element> BinaryTransform<A, B> {
    pub fn new(body: impl Fn(A, &mut B) + Send + Sync + 'static) -> Self {
        BinaryTransform {
            body: Arc::new(body),
        }
    }

    pub fn arity(&self) -> usize {
        2
    }

    pub fn apply(&self, a: A, b: &mut B) {
        (self.body)(a, b)
    }
}

impl<A: Element, B: Element, C: Element> TernaryTransform<A, B, C> {
    pub fn new(body: impl Fn(A, B, &mut C) + Send + Sync + 'static) -> Self {
        TernaryTransform {
            body: Arc::new(body),
        }
    }

    pub fn arity(&self) -> usize {
        3
    }

    pub fn apply(&self, a: A, b: B, c: &mut C) {
        (self.body)(a, b, c)
    }
}
