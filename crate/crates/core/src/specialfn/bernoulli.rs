use std::sync::OnceLock;

use rug::{Float, Integer, Rational};

/// Highest index kept in the table.
pub const MAX_INDEX: usize = 300;

fn table() -> &'static [Rational] {
    static TABLE: OnceLock<Vec<Rational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // sum_{k=0}^{n} C(n+1, k) B_k = 0
        let mut b: Vec<Rational> = vec![Rational::from(1)];
        for n in 1..=MAX_INDEX {
            if n > 1 && n % 2 == 1 {
                b.push(Rational::new());
                continue;
            }
            let mut acc = Rational::new();
            let mut binom = Integer::from(1);
            for (k, bk) in b.iter().enumerate() {
                if bk.cmp0().is_ne() {
                    acc += Rational::from(bk * &binom);
                }
                binom *= (n + 1 - k) as u64;
                binom /= (k + 1) as u64;
            }
            b.push(-acc / Rational::from(n as u64 + 1));
        }
        b
    })
}

/// Bernoulli number `B_n` with the convention `B_1 = -1/2`.
///
/// Panics if `n` exceeds [`MAX_INDEX`].
pub fn bernoulli(n: usize) -> &'static Rational {
    assert!(n <= MAX_INDEX, "Bernoulli table holds indices up to {MAX_INDEX}");
    &table()[n]
}

pub fn bernoulli_float(n: usize, prec: u32) -> Float {
    Float::with_val(prec, bernoulli(n))
}
