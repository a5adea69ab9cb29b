//! In-place element transforms driven by the present entries of the target.

use super::roles;
use crate::algebra::{BinaryTransform, Element, TernaryTransform, UnaryTransform};
use crate::tensor::{Reset, Tensor};
use crate::Result;

struct Slots {
    slots: Vec<usize>,
    strides: Vec<usize>,
}

impl Slots {
    fn new<T: Element>(tensor: &Tensor<T>, chars: &[char], order: &[char]) -> Self {
        Slots {
            slots: chars
                .iter()
                .map(|c| order.iter().position(|x| x == c).expect("collected"))
                .collect(),
            strides: tensor.strides().to_vec(),
        }
    }

    fn lookup<T: Element>(&self, tensor: &Tensor<T>, vals: &[usize]) -> Option<T> {
        let lin = self
            .slots
            .iter()
            .zip(&self.strides)
            .map(|(&s, st)| vals[s] * st)
            .sum();
        tensor.stored_at(lin)
    }
}

/// Visit every stored target entry and every assignment of the indices that
/// only inputs carry. `visit` receives the loop variables and the target
/// value, which it may change; changed values are committed at the end.
fn drive<T: Element>(
    target: &mut Tensor<T>,
    target_indices: &str,
    inputs: &[(&[char], &[usize])],
    mut visit: impl FnMut(&[usize], &[char], &mut T),
) -> Result<()> {
    let t_chars = roles::parse_indices(target_indices)?;
    let mut labelled: Vec<(&[char], &[usize])> = vec![(&t_chars, target.dims())];
    labelled.extend_from_slice(inputs);
    let sizes = roles::index_sizes(&labelled)?;
    let lists: Vec<&[char]> = labelled.iter().map(|l| l.0).collect();
    let order = roles::unique(&lists);
    let free: Vec<usize> = (0..order.len())
        .filter(|&i| !t_chars.contains(&order[i]))
        .collect();
    let t_slots: Vec<usize> = t_chars
        .iter()
        .map(|c| order.iter().position(|x| x == c).expect("collected"))
        .collect();

    let mut vals = vec![0usize; order.len()];
    let mut updates = Vec::new();
    let present: Vec<(usize, T)> = target.entries().collect();
    for (index, original) in present {
        let tuple = target.delinearize(index);
        let mut set = vec![false; order.len()];
        let consistent = t_slots.iter().zip(&tuple).all(|(&s, &i)| {
            let ok = !set[s] || vals[s] == i;
            vals[s] = i;
            set[s] = true;
            ok
        });
        if !consistent {
            continue;
        }
        let mut value = original;
        for &f in &free {
            vals[f] = 0;
        }
        loop {
            visit(&vals, &order, &mut value);
            let mut carried = true;
            for &f in free.iter().rev() {
                vals[f] += 1;
                if vals[f] < sizes[&order[f]] {
                    carried = false;
                    break;
                }
                vals[f] = 0;
            }
            if carried {
                break;
            }
        }
        if value != original {
            updates.push((index, value));
        }
    }
    target.commit(Reset::Nothing, updates)
}

/// `f(&mut target[it])` for every stored entry.
pub fn transform1<A: Element>(
    target: &mut Tensor<A>,
    indices: &str,
    f: &UnaryTransform<A>,
) -> Result<()> {
    drive(target, indices, &[], |_, _, v| f.apply(v))
}

/// `f(a[ia], &mut target[it])` for every stored target entry and every
/// present `a` entry that matches it. Indices only `a` carries are looped
/// over in order, applying `f` once per match.
pub fn transform2<A: Element, B: Element>(
    a: &Tensor<A>,
    ia: &str,
    target: &mut Tensor<B>,
    it: &str,
    f: &BinaryTransform<A, B>,
) -> Result<()> {
    let a_chars = roles::parse_indices(ia)?;
    let mut bound: Option<Slots> = None;
    drive(target, it, &[(&a_chars, a.dims())], |vals, order, v| {
        let slots = bound.get_or_insert_with(|| Slots::new(a, &a_chars, order));
        if let Some(x) = slots.lookup(a, vals) {
            f.apply(x, v);
        }
    })
}

/// `f(a[ia], b[ib], &mut target[it])`, skipping positions where either input
/// is absent.
pub fn transform3<A: Element, B: Element, C: Element>(
    a: &Tensor<A>,
    ia: &str,
    b: &Tensor<B>,
    ib: &str,
    target: &mut Tensor<C>,
    it: &str,
    f: &TernaryTransform<A, B, C>,
) -> Result<()> {
    let a_chars = roles::parse_indices(ia)?;
    let b_chars = roles::parse_indices(ib)?;
    let mut bound: Option<(Slots, Slots)> = None;
    drive(
        target,
        it,
        &[(&a_chars, a.dims()), (&b_chars, b.dims())],
        |vals, order, v| {
            let (sa, sb) = bound.get_or_insert_with(|| {
                (Slots::new(a, &a_chars, order), Slots::new(b, &b_chars, order))
            });
            if let (Some(x), Some(y)) = (sa.lookup(a, vals), sb.lookup(b, vals)) {
                f.apply(x, y, v);
            }
        },
    )
}
