//! Word-size prime fields: reductions of ℚ(√5) data, elimination, and
//! rational reconstruction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{ExactScalar, MultiPoly};

/// Primes just below 2^62, all ≡ ±1 (mod 5) so that 5 is a square.
pub const PRIMES: [u64; 48] = [
    4611686018427387761, 4611686018427387751, 4611686018427387709, 4611686018427387701,
    4611686018427387631, 4611686018427387461, 4611686018427387421, 4611686018427387409,
    4611686018427387329, 4611686018427387301, 4611686018427387271, 4611686018427387241,
    4611686018427387139, 4611686018427387131, 4611686018427387091, 4611686018427386981,
    4611686018427386911, 4611686018427386611, 4611686018427386551, 4611686018427386471,
    4611686018427386389, 4611686018427386351, 4611686018427386329, 4611686018427386309,
    4611686018427386231, 4611686018427386201, 4611686018427386081, 4611686018427385981,
    4611686018427385861, 4611686018427385831, 4611686018427385801, 4611686018427385619,
    4611686018427385529, 4611686018427385321, 4611686018427385229, 4611686018427385151,
    4611686018427385111, 4611686018427384881, 4611686018427384649, 4611686018427384641,
    4611686018427384359, 4611686018427384341, 4611686018427384199, 4611686018427384101,
    4611686018427384031, 4611686018427383971, 4611686018427383741, 4611686018427383629,
];

/// `F_p` together with a chosen square root of the discriminant.
#[derive(Clone, Copy, Debug)]
pub struct PrimeField {
    pub p: u64,
    pub root: u64,
}

impl PrimeField {
    /// `None` when `disc` is not a nonzero square mod `p`.
    pub fn new(p: u64, disc: u32) -> Option<PrimeField> {
        let root = if disc == 0 { 0 } else { sqrt_mod(disc as u64 % p, p)? };
        Some(PrimeField { p, root })
    }

    /// The same prime with the other square root.
    pub fn conjugate(&self) -> PrimeField {
        PrimeField { p: self.p, root: (self.p - self.root) % self.p }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a as u128 + b as u128;
        (s % self.p as u128) as u64
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.p - b)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        (a != 0).then(|| self.pow(a, self.p - 2))
    }

    pub fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    fn big(&self, v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(self.p)).to_u64().expect("reduced")
    }

    fn rational(&self, r: &BigRational) -> Option<u64> {
        Some(self.mul(self.big(r.numer()), self.inv(self.big(r.denom()))?))
    }

    /// Image of a scalar; `None` when a denominator vanishes mod p.
    pub fn reduce(&self, s: &ExactScalar) -> Option<u64> {
        let a = self.rational(s.rational_part())?;
        if s.surd_part().is_zero() {
            return Some(a);
        }
        Some(self.add(a, self.mul(self.rational(s.surd_part())?, self.root)))
    }

    /// Reduced coefficients of a polynomial, ready for repeated evaluation.
    pub fn reduce_poly(&self, f: &MultiPoly) -> Option<ReducedPoly> {
        let terms = f
            .terms()
            .map(|(m, c)| Some((m.exponents().to_vec(), self.reduce(c)?)))
            .collect::<Option<Vec<_>>>()?;
        Some(ReducedPoly { terms })
    }
}

#[derive(Clone, Debug)]
pub struct ReducedPoly {
    terms: Vec<(Vec<u32>, u64)>,
}

impl ReducedPoly {
    /// Value at a point given by its coordinate power tables.
    pub fn eval(&self, field: &PrimeField, powers: &PowerTable) -> u64 {
        let mut acc = 0;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = field.mul(t, powers.get(i, k));
                }
            }
            acc = field.add(acc, t);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(_, c)| *c == 0)
    }

    /// Order of vanishing at `t = 0` of `t ↦ f(p + t·v)`, capped at `cap`.
    pub fn order_on_line(&self, field: &PrimeField, p: &[u64], v: &[u64], cap: u32) -> u32 {
        let len = cap as usize + 1;
        let trunc_mul = |a: &[u64], b: &[u64]| {
            let mut out = vec![0; len];
            for (i, &x) in a.iter().enumerate().filter(|(_, x)| **x != 0) {
                for (j, &y) in b.iter().enumerate().take(len - i) {
                    out[i + j] = field.add(out[i + j], field.mul(x, y));
                }
            }
            out
        };
        // series[i][k] = (p_i + t v_i)^k mod t^{cap+1}
        let mut series: Vec<Vec<Vec<u64>>> = Vec::with_capacity(p.len());
        for i in 0..p.len() {
            let top = self.terms.iter().map(|(e, _)| e[i]).max().unwrap_or(0) as usize;
            let mut lin = vec![0; len];
            lin[0] = p[i];
            if len > 1 {
                lin[1] = v[i];
            }
            let mut pw = vec![{
                let mut one = vec![0; len];
                one[0] = 1;
                one
            }];
            for k in 1..=top {
                let next = trunc_mul(&pw[k - 1], &lin);
                pw.push(next);
            }
            series.push(pw);
        }
        let mut acc = vec![0; len];
        for (e, c) in &self.terms {
            let mut t = vec![0; len];
            t[0] = *c;
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = trunc_mul(&t, &series[i][k as usize]);
                }
            }
            for (a, x) in acc.iter_mut().zip(&t) {
                *a = field.add(*a, *x);
            }
        }
        acc.iter().position(|&x| x != 0).map_or(cap, |i| i as u32)
    }
}

/// `x_i^k` for a fixed point, filled on demand.
pub struct PowerTable {
    field: PrimeField,
    rows: Vec<Vec<u64>>,
}

impl PowerTable {
    pub fn new(field: PrimeField, point: &[u64]) -> PowerTable {
        PowerTable { field, rows: point.iter().map(|&x| vec![1, x]).collect() }
    }

    pub fn reserve(&mut self, degree: u32) {
        for row in &mut self.rows {
            while row.len() <= degree as usize {
                let next = self.field.mul(row[row.len() - 1], row[1]);
                row.push(next);
            }
        }
    }

    fn get(&self, i: usize, k: u32) -> u64 {
        self.rows[i][k as usize]
    }
}

/// Outcome of elimination over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModSolution {
    Unique(Vec<u64>),
    Deficient { rank: usize },
    Inconsistent,
}

/// Gauss-Jordan elimination of `a·u = b` over `F_p`.
pub fn solve_mod(field: &PrimeField, mut a: Vec<Vec<u64>>, mut b: Vec<u64>) -> ModSolution {
    let n = a.first().map_or(0, |r| r.len());
    let mut row = 0;
    let mut pivots = Vec::new();
    for col in 0..n {
        let Some(p) = (row..a.len()).find(|&r| a[r][col] != 0) else { continue };
        a.swap(row, p);
        b.swap(row, p);
        let inv = field.inv(a[row][col]).expect("nonzero pivot");
        for v in a[row].iter_mut() {
            *v = field.mul(*v, inv);
        }
        b[row] = field.mul(b[row], inv);
        let (pivot_row, pivot_b) = (a[row].clone(), b[row]);
        for r in 0..a.len() {
            let f = a[r][col];
            if r == row || f == 0 {
                continue;
            }
            for (v, pv) in a[r].iter_mut().zip(&pivot_row).skip(col) {
                *v = field.sub(*v, field.mul(f, *pv));
            }
            b[r] = field.sub(b[r], field.mul(f, pivot_b));
        }
        pivots.push(col);
        row += 1;
    }
    if b[row..].iter().any(|&v| v != 0) {
        return ModSolution::Inconsistent;
    }
    if row < n {
        return ModSolution::Deficient { rank: row };
    }
    ModSolution::Unique(b[..n].to_vec())
}

/// Accumulates images of an element of ℚ(√d) under several primes and both
/// square roots, and recovers it by CRT and rational reconstruction.
#[derive(Clone, Debug)]
pub struct Reconstructor {
    modulus: BigInt,
    rational: BigInt,
    surd: BigInt,
}

impl Default for Reconstructor {
    fn default() -> Self {
        Reconstructor { modulus: BigInt::one(), rational: BigInt::zero(), surd: BigInt::zero() }
    }
}

impl Reconstructor {
    /// `plus` and `minus` are the images under `root` and `-root`.
    pub fn push(&mut self, field: &PrimeField, plus: u64, minus: u64) {
        let half = field.inv(2).expect("odd prime");
        let a = field.mul(field.add(plus, minus), half);
        let b = if field.root == 0 {
            0
        } else {
            let two_root_inv = field.inv(field.mul(2, field.root)).expect("nonzero root");
            field.mul(field.sub(plus, minus), two_root_inv)
        };
        let p = BigInt::from(field.p);
        self.rational = crt(&self.rational, &self.modulus, a, &p);
        self.surd = crt(&self.surd, &self.modulus, b, &p);
        self.modulus *= &p;
    }

    pub fn reconstruct(&self, disc: u32) -> Option<ExactScalar> {
        let a = rational_reconstruct(&self.rational, &self.modulus)?;
        let b = rational_reconstruct(&self.surd, &self.modulus)?;
        if b.is_zero() {
            return Some(ExactScalar::from_rational(a));
        }
        ExactScalar::quadratic(a, b, disc).ok()
    }
}

fn crt(r: &BigInt, m: &BigInt, a: u64, p: &BigInt) -> BigInt {
    // r + m·t ≡ a (mod p)
    let field = PrimeField { p: p.to_u64().expect("word prime"), root: 0 };
    let r_mod = field.big(r);
    let m_inv = field.inv(field.big(m)).expect("coprime moduli");
    let t = field.mul(field.sub(a, r_mod), m_inv);
    r + m * BigInt::from(t)
}

/// `n/d ≡ a (mod m)` with `|n|, d ≤ √(m/2)`.
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<BigRational> {
    let a = a.mod_floor(m);
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a);
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// Square root mod an odd prime by Tonelli-Shanks.
fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let f = PrimeField { p, root: 0 };
    if a == 0 {
        return Some(0);
    }
    if f.pow(a, (p - 1) / 2) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..).find(|&z| f.pow(z, (p - 1) / 2) == p - 1).expect("non-residue exists");
    let (mut m, mut c, mut t, mut r) = (s, f.pow(z, q), f.pow(a, q), f.pow(a, q.div_ceil(2)));
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = f.mul(t2, t2);
            i += 1;
        }
        let b = f.pow(c, 1 << (m - i - 1));
        m = i;
        c = f.mul(b, b);
        t = f.mul(t, c);
        r = f.mul(r, b);
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_roots_of_five() {
        for &p in &PRIMES[..4] {
            let f = PrimeField::new(p, 5).unwrap();
            assert_eq!(f.mul(f.root, f.root), 5);
        }
        assert!(PrimeField::new(13, 5).is_none());
    }

    #[test]
    fn reconstructs_quadratic_values() {
        let v = ExactScalar::quadratic(BigRational::new((-783).into(), 160.into()), BigRational::new(351.into(), 7.into()), 5)
            .unwrap();
        let mut rec = Reconstructor::default();
        for &p in &PRIMES[..2] {
            let f = PrimeField::new(p, 5).unwrap();
            rec.push(&f, f.reduce(&v).unwrap(), f.conjugate().reduce(&v).unwrap());
        }
        assert_eq!(rec.reconstruct(5), Some(v));
    }

    #[test]
    fn modular_solve() {
        let f = PrimeField::new(PRIMES[0], 5).unwrap();
        let a = vec![vec![1, 2], vec![3, 4], vec![5, 6]];
        let b = vec![5, 11, 17];
        assert_eq!(solve_mod(&f, a.clone(), b), ModSolution::Unique(vec![1, 2]));
        assert_eq!(solve_mod(&f, a.clone(), vec![5, 11, 18]), ModSolution::Inconsistent);
        assert_eq!(solve_mod(&f, vec![vec![1, 2], vec![2, 4]], vec![1, 2]), ModSolution::Deficient { rank: 1 });
    }
}
