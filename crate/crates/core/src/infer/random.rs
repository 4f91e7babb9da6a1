//! Random simply typable closed terms.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::term::{abs, app, var, Term};

use super::principal_simple_type;

fn gen(rng: &mut ChaCha8Rng, size: usize, scope: &mut Vec<String>) -> Option<Term> {
    match size {
        0 => None,
        1 => {
            if scope.is_empty() {
                return None;
            }
            Some(var(&scope[rng.gen_range(0..scope.len())]))
        }
        _ if size == 2 || rng.gen_bool(0.4) => {
            let x = format!("x{}", scope.len());
            scope.push(x.clone());
            let body = gen(rng, size - 1, scope);
            scope.pop();
            Some(abs(&x, body?))
        }
        _ => {
            let k = rng.gen_range(1..=size - 2);
            let f = gen(rng, k, scope)?;
            let a = gen(rng, size - 1 - k, scope)?;
            Some(app(f, a))
        }
    }
}

/// A closed, simply typable term of size between 3 and `max_size`.
pub fn random_typable(rng: &mut ChaCha8Rng, max_size: usize) -> Term {
    loop {
        let size = rng.gen_range(3..=max_size.max(3));
        if let Some(t) = gen(rng, size, &mut Vec::new()) {
            if principal_simple_type(&t).is_ok() {
                return t;
            }
        }
    }
}

/// `count` such terms from a seed.
pub fn random_corpus(seed: u64, count: usize, max_size: usize) -> Vec<Term> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_typable(&mut rng, max_size)).collect()
}
