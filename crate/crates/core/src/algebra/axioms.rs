//! Opt-in validator for the algebraic laws a structure claims.
//!
//! Nothing in the library calls this; operations simply trust the laws.

use serde::Serialize;

use super::{Algebra, Element};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Axiom {
    AddAssociative,
    AddCommutative,
    AddIdentity,
    AddInverse,
    MulIdentity,
    Distributive,
    Annihilation,
}

/// Outcome of one law over all evaluated samples.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub evaluated: usize,
    /// Cases where the two sides were not bitwise equal.
    pub failures: usize,
    /// Largest `|lhs - rhs| / max(1, |lhs|, |rhs|)` under the structure's
    /// magnitude map; `None` when the structure has none.
    pub max_violation: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub structure: String,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn check(&self, axiom: Axiom) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    /// Every law held exactly.
    pub fn passes_exact(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0)
    }

    /// Every law held within `tol` relative violation. Falls back to exact
    /// equality for structures without a magnitude map.
    pub fn passes_within(&self, tol: f64) -> bool {
        self.checks.iter().all(|c| match c.max_violation {
            Some(v) => v <= tol,
            None => c.failures == 0,
        })
    }
}

struct Tally<'a, T: Element> {
    algebra: &'a Algebra<T>,
    check: AxiomCheck,
}

impl<'a, T: Element> Tally<'a, T> {
    fn new(algebra: &'a Algebra<T>, axiom: Axiom) -> Self {
        Tally {
            algebra,
            check: AxiomCheck {
                axiom,
                evaluated: 0,
                failures: 0,
                max_violation: algebra.has_magnitude().then_some(0.0),
            },
        }
    }

    fn compare(&mut self, lhs: T, rhs: T) {
        self.check.evaluated += 1;
        if lhs != rhs {
            self.check.failures += 1;
        }
        if let (Some(l), Some(r)) = (self.algebra.magnitude(&lhs), self.algebra.magnitude(&rhs))
        {
            let diff = if l == r { 0.0 } else { (l - r).abs() };
            let scale = l.abs().max(r.abs()).max(1.0);
            let v = diff / scale;
            let slot = self.check.max_violation.get_or_insert(0.0);
            if v > *slot || v.is_nan() {
                *slot = v;
            }
        }
    }
}

/// Check every law of `algebra` on all ordered triples drawn from `samples`.
pub fn check_axioms<T: Element>(algebra: &Algebra<T>, samples: &[T]) -> AxiomReport {
    let triples = samples.iter().flat_map(|&a| {
        samples
            .iter()
            .flat_map(move |&b| samples.iter().map(move |&c| (a, b, c)))
    });
    check_triples(algebra, triples)
}

/// Check every law of `algebra` on the given triples. Laws with fewer
/// operands use the leading components of each triple.
pub fn check_triples<T: Element>(
    algebra: &Algebra<T>,
    triples: impl IntoIterator<Item = (T, T, T)>,
) -> AxiomReport {
    let kind = algebra.kind();
    let mut assoc = Tally::new(algebra, Axiom::AddAssociative);
    let mut comm = Tally::new(algebra, Axiom::AddCommutative);
    let mut ident = Tally::new(algebra, Axiom::AddIdentity);
    let mut inverse = Tally::new(algebra, Axiom::AddInverse);
    let mut mul_ident = Tally::new(algebra, Axiom::MulIdentity);
    let mut dist = Tally::new(algebra, Axiom::Distributive);
    let mut annihil = Tally::new(algebra, Axiom::Annihilation);

    if kind.has_add() {
        let add = |x, y| algebra.add(x, y).expect("kind has add");
        let zero = algebra.add_id().expect("kind has add id");
        for (a, b, c) in triples {
            assoc.compare(add(add(a, b), c), add(a, add(b, c)));
            comm.compare(add(a, b), add(b, a));
            ident.compare(add(zero, a), a);
            ident.compare(add(a, zero), a);
            if kind.has_inverse() {
                inverse.compare(add(a, algebra.inv(a).expect("kind has inverse")), zero);
            }
            if kind.has_mul() {
                let mul = |x, y| algebra.mul(x, y).expect("kind has mul");
                let one = algebra.mul_id().expect("kind has mul id");
                mul_ident.compare(mul(one, a), a);
                mul_ident.compare(mul(a, one), a);
                dist.compare(mul(a, add(b, c)), add(mul(a, b), mul(a, c)));
                dist.compare(mul(add(b, c), a), add(mul(b, a), mul(c, a)));
                annihil.compare(mul(zero, a), zero);
                annihil.compare(mul(a, zero), zero);
            }
        }
    }

    let mut checks = Vec::new();
    if kind.has_add() {
        checks.extend([assoc.check, comm.check, ident.check]);
    }
    if kind.has_inverse() {
        checks.push(inverse.check);
    }
    if kind.has_mul() {
        checks.extend([mul_ident.check, dist.check, annihil.check]);
    }
    AxiomReport {
        structure: algebra.name().to_string(),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{integer_ring, path_semiring, standard_ring, tropical_i32, PathElement};

    #[test]
    fn tropical_passes_on_small_samples() {
        let t = tropical_i32();
        let inf = t.add_id().unwrap();
        let report = check_axioms(&t, &[0, 1, 5, inf]);
        assert!(report.passes_exact(), "{report:?}");
        assert_eq!(report.check(Axiom::AddAssociative).unwrap().evaluated, 64);
    }

    #[test]
    fn real_distributivity_violation_is_tiny() {
        let report = check_axioms(&standard_ring(), &[0.1, 0.2, 0.3]);
        let dist = report.check(Axiom::Distributive).unwrap();
        assert!(dist.max_violation.unwrap() <= 1e-15);
        assert!(report.passes_within(1e-15));
    }

    #[test]
    fn wrong_identity_is_caught() {
        let bogus = Algebra::monoid("bad", 1i64, |a, b| a + b);
        let report = check_axioms(&bogus, &[0, 2, 7]);
        assert!(report.check(Axiom::AddIdentity).unwrap().failures > 0);
        assert_eq!(report.check(Axiom::AddAssociative).unwrap().failures, 0);
        assert!(!report.passes_exact());
    }

    #[test]
    fn rings_and_path_semiring_pass() {
        assert!(check_axioms(&integer_ring(), &[-3, 0, 1, 8]).passes_exact());
        let samples = [
            PathElement::new(0, 0),
            PathElement::new(4, 1),
            PathElement::new(4, 3),
            PathElement::INFINITY,
        ];
        assert!(check_axioms(&path_semiring(), &samples).passes_exact());
    }

    #[test]
    fn set_reports_no_laws() {
        let s: Algebra<u8> = Algebra::set("s");
        assert!(check_axioms(&s, &[1, 2]).checks.is_empty());
    }
}
