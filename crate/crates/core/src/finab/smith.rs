//! Smith normal form over the integers and over `Z/N`.
//!
//! Both variants share one elimination engine. Over `Z` the diagonal is
//! made non-negative; over `Z/N` every pivot is scaled by a unit to the
//! divisor `gcd(pivot, N)` of `N`, so all entries stay in `[0, N)` and
//! nothing grows during elimination. The `Z/N` variant drives every
//! kernel, image, cokernel and preimage computation on finite abelian
//! groups: a group with invariant factors `d_1 | ... | d_k` is the
//! quotient of `(Z/N)^k` by the columns `d_i e_i`, for `N = d_k`.

use super::matrix::IntMatrix;

/// `U * M * V = D` with `U`, `V` unimodular and `D` diagonal in
/// divisibility-chain form (zeros last).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    /// Diagonal entries of `D`, including trailing zeros.
    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)])
            .collect()
    }
}

/// Computes the Smith normal form of an integer matrix of any shape.
pub fn smith_normal_form(m: &IntMatrix) -> SnfDecomposition {
    let mut e = Engine::new(m.clone(), None, true, false, true);
    e.run();
    SnfDecomposition {
        u: e.u.unwrap(),
        d: e.a,
        v: e.v.unwrap(),
    }
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn lcm(a: i64, b: i64) -> i64 {
    if a == 0 || b == 0 {
        return 0;
    }
    (a / gcd(a, b)) * b
}

/// Returns `(g, s, t)` with `g = gcd(a, b) >= 0` and `s*a + t*b = g`.
pub(crate) fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a as i128, b as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (old_r, old_s, old_t) = (-old_r, -old_s, -old_t);
    }
    (old_r as i64, old_s as i64, old_t as i64)
}

/// Inverse of `x` modulo `n`, if it exists.
pub(crate) fn mod_inverse(x: i64, n: i64) -> Option<i64> {
    if n == 1 {
        return Some(0);
    }
    let (g, s, _) = ext_gcd(x.rem_euclid(n), n);
    (g == 1).then(|| s.rem_euclid(n))
}

/// A unit `u` of `Z/n` with `u * x = gcd(x, n) (mod n)`. `x` must be nonzero mod `n`.
fn normalizing_unit(x: i64, n: i64) -> i64 {
    let g = gcd(x, n);
    let x1 = x / g;
    let n1 = n / g;
    let v = mod_inverse(x1, n1).expect("cofactor is coprime by construction");
    let mut u = v;
    while gcd(u, n) != 1 {
        u += n1;
    }
    u.rem_euclid(n)
}

struct Engine {
    a: IntMatrix,
    u: Option<IntMatrix>,
    uinv: Option<IntMatrix>,
    v: Option<IntMatrix>,
    modulus: Option<i64>,
}

impl Engine {
    fn new(
        a: IntMatrix,
        modulus: Option<i64>,
        track_u: bool,
        track_uinv: bool,
        track_v: bool,
    ) -> Self {
        let (r, c) = (a.rows(), a.cols());
        let mut a = a;
        if let Some(n) = modulus {
            for i in 0..r {
                for x in a.row_mut(i) {
                    *x = x.rem_euclid(n);
                }
            }
        }
        Engine {
            a,
            u: track_u.then(|| IntMatrix::identity(r)),
            uinv: track_uinv.then(|| IntMatrix::identity(r)),
            v: track_v.then(|| IntMatrix::identity(c)),
            modulus,
        }
    }

    fn red(&self, x: i128) -> i64 {
        match self.modulus {
            Some(n) => x.rem_euclid(n as i128) as i64,
            None => i64::try_from(x).expect("integer overflow in Smith normal form"),
        }
    }

    fn key(&self, x: i64) -> i64 {
        match self.modulus {
            Some(n) => gcd(x, n),
            None => x.abs(),
        }
    }

    fn combine_rows(m: &mut IntMatrix, i: usize, j: usize, c: [i64; 4], red: &dyn Fn(i128) -> i64) {
        let [p, q, r, s] = c.map(|x| x as i128);
        for k in 0..m.cols() {
            let (x, y) = (m[(i, k)] as i128, m[(j, k)] as i128);
            if x == 0 && y == 0 {
                continue;
            }
            m[(i, k)] = red(p * x + q * y);
            m[(j, k)] = red(r * x + s * y);
        }
    }

    fn combine_cols(m: &mut IntMatrix, i: usize, j: usize, c: [i64; 4], red: &dyn Fn(i128) -> i64) {
        let [p, q, r, s] = c.map(|x| x as i128);
        for k in 0..m.rows() {
            let (x, y) = (m[(k, i)] as i128, m[(k, j)] as i128);
            if x == 0 && y == 0 {
                continue;
            }
            m[(k, i)] = red(p * x + q * y);
            m[(k, j)] = red(r * x + s * y);
        }
    }

    /// Row op: `row_i <- p row_i + q row_j`, `row_j <- r row_i + s row_j`, `ps - qr = 1`.
    fn row_op(&mut self, i: usize, j: usize, c: [i64; 4]) {
        let modulus = self.modulus;
        let red = move |x: i128| match modulus {
            Some(n) => x.rem_euclid(n as i128) as i64,
            None => i64::try_from(x).expect("integer overflow in Smith normal form"),
        };
        Self::combine_rows(&mut self.a, i, j, c, &red);
        if let Some(u) = self.u.as_mut() {
            Self::combine_rows(u, i, j, c, &red);
        }
        if let Some(ui) = self.uinv.as_mut() {
            let [p, q, r, s] = c;
            Self::combine_cols(ui, i, j, [s, -r, -q, p], &red);
        }
    }

    /// Column op: `col_i <- p col_i + q col_j`, `col_j <- r col_i + s col_j`, `ps - qr = 1`.
    fn col_op(&mut self, i: usize, j: usize, c: [i64; 4]) {
        let modulus = self.modulus;
        let red = move |x: i128| match modulus {
            Some(n) => x.rem_euclid(n as i128) as i64,
            None => i64::try_from(x).expect("integer overflow in Smith normal form"),
        };
        Self::combine_cols(&mut self.a, i, j, c, &red);
        if let Some(v) = self.v.as_mut() {
            Self::combine_cols(v, i, j, c, &red);
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_rows(i, j);
        if let Some(u) = self.u.as_mut() {
            u.swap_rows(i, j);
        }
        if let Some(ui) = self.uinv.as_mut() {
            ui.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_cols(i, j);
        if let Some(v) = self.v.as_mut() {
            v.swap_cols(i, j);
        }
    }

    fn scale_row(&mut self, i: usize, unit: i64, inverse: i64) {
        for k in 0..self.a.cols() {
            self.a[(i, k)] = self.red(self.a[(i, k)] as i128 * unit as i128);
        }
        if let Some(mut u) = self.u.take() {
            for k in 0..u.cols() {
                u[(i, k)] = self.red(u[(i, k)] as i128 * unit as i128);
            }
            self.u = Some(u);
        }
        if let Some(mut ui) = self.uinv.take() {
            for k in 0..ui.rows() {
                ui[(k, i)] = self.red(ui[(k, i)] as i128 * inverse as i128);
            }
            self.uinv = Some(ui);
        }
    }

    fn normalize_pivot(&mut self, t: usize) {
        let x = self.a[(t, t)];
        match self.modulus {
            None => {
                if x < 0 {
                    self.scale_row(t, -1, -1);
                }
            }
            Some(n) => {
                let g = gcd(x, n);
                if x != g {
                    let unit = normalizing_unit(x, n);
                    let inv = mod_inverse(unit, n).expect("unit");
                    self.scale_row(t, unit, inv);
                }
            }
        }
    }

    /// Coefficients clearing `y` against pivot `p`: the new pivot is `gcd(p, y)`.
    fn clearing(p: i64, y: i64) -> [i64; 4] {
        if y % p == 0 {
            [1, 0, -(y / p), 1]
        } else {
            let (g, s, t) = ext_gcd(p, y);
            [s, t, -(y / g), p / g]
        }
    }

    fn run(&mut self) {
        let (rows, cols) = (self.a.rows(), self.a.cols());
        let steps = rows.min(cols);
        for t in 0..steps {
            let mut best: Option<(i64, usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = self.a[(i, j)];
                    if x != 0 {
                        let k = self.key(x);
                        if best.is_none_or(|(bk, _, _)| k < bk) {
                            best = Some((k, i, j));
                            if k == 1 {
                                break;
                            }
                        }
                    }
                }
                if matches!(best, Some((1, _, _))) {
                    break;
                }
            }
            let Some((_, pi, pj)) = best else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                self.normalize_pivot(t);
                let mut clean = true;
                for i in t + 1..rows {
                    let y = self.a[(i, t)];
                    if y != 0 {
                        let c = Self::clearing(self.a[(t, t)], y);
                        self.row_op(t, i, c);
                        self.normalize_pivot(t);
                    }
                }
                for j in t + 1..cols {
                    let y = self.a[(t, j)];
                    if y != 0 {
                        let c = Self::clearing(self.a[(t, t)], y);
                        self.col_op(t, j, c);
                        self.normalize_pivot(t);
                        clean = false;
                    }
                }
                if !clean && (t + 1..rows).any(|i| self.a[(i, t)] != 0) {
                    continue;
                }
                let p = self.a[(t, t)];
                let offender =
                    (t + 1..rows).find(|&i| (t + 1..cols).any(|j| self.a[(i, j)] % p != 0));
                match offender {
                    Some(i) => self.row_op(t, i, [1, 1, 0, 1]),
                    None => break,
                }
            }
        }
    }
}

/// Result of a diagonalisation over `Z/N`.
pub(crate) struct ModSmith {
    /// `gcd(D_ii, N)` for `i < min(rows, cols)`; `N` stands for a zero pivot.
    pub pivots: Vec<i64>,
    pub u: Option<IntMatrix>,
    pub uinv: Option<IntMatrix>,
    pub v: Option<IntMatrix>,
    pub rows: usize,
    pub cols: usize,
}

pub(crate) fn smith_mod(m: &IntMatrix, modulus: i64, u: bool, uinv: bool, v: bool) -> ModSmith {
    assert!(modulus >= 1);
    let mut e = Engine::new(m.clone(), Some(modulus), u, uinv, v);
    if modulus > 1 {
        e.run();
    }
    let steps = m.rows().min(m.cols());
    let pivots = (0..steps)
        .map(|i| {
            let x = e.a[(i, i)];
            if x == 0 {
                modulus
            } else {
                gcd(x, modulus)
            }
        })
        .collect();
    ModSmith {
        pivots,
        u: e.u,
        uinv: e.uinv,
        v: e.v,
        rows: m.rows(),
        cols: m.cols(),
    }
}

/// Presentation of a finite quotient `(Z/N)^k / span(relations)` in
/// invariant-factor form.
#[derive(Clone, Debug)]
pub(crate) struct Presentation {
    pub factors: Vec<i64>,
    /// `factors.len() x k`; row `i` read modulo `factors[i]`.
    pub proj: IntMatrix,
    /// `k x factors.len()`; column `i` is a representative of generator `i`.
    pub lift: IntMatrix,
}

pub(crate) fn quotient_presentation(modulus: i64, k: usize, relations: &IntMatrix) -> Presentation {
    assert_eq!(relations.rows(), k);
    let s = smith_mod(relations, modulus, true, true, false);
    let u = s.u.unwrap();
    let uinv = s.uinv.unwrap();
    let mut keep = Vec::new();
    let mut factors = Vec::new();
    for i in 0..k {
        let g = if i < s.pivots.len() {
            s.pivots[i]
        } else {
            modulus
        };
        if g > 1 {
            keep.push(i);
            factors.push(g);
        }
    }
    let mut proj = u.select_rows(&keep);
    for (r, &f) in factors.iter().enumerate() {
        for x in proj.row_mut(r) {
            *x = x.rem_euclid(f);
        }
    }
    let lift = uinv.select_cols(&keep);
    Presentation {
        factors,
        proj,
        lift,
    }
}

/// Generators of the kernel of `x -> M x` on `(Z/N)^cols`.
pub(crate) fn kernel_mod(modulus: i64, m: &IntMatrix) -> Vec<Vec<i64>> {
    let s = smith_mod(m, modulus, false, false, true);
    let v = s.v.unwrap();
    let mut gens = Vec::new();
    for i in 0..s.cols {
        let coeff = if i < s.pivots.len() {
            modulus / s.pivots[i]
        } else {
            1
        };
        if coeff % modulus == 0 {
            continue;
        }
        let g: Vec<i64> = (0..s.cols)
            .map(|r| ((v[(r, i)] as i128 * coeff as i128).rem_euclid(modulus as i128)) as i64)
            .collect();
        if g.iter().any(|&x| x != 0) {
            gens.push(g);
        }
    }
    gens
}

/// Solves `M x = b` over `Z/N` for many right-hand sides.
#[derive(Clone, Debug)]
pub(crate) struct LinearSolver {
    modulus: i64,
    pivots: Vec<i64>,
    u: IntMatrix,
    v: IntMatrix,
    rows: usize,
    cols: usize,
}

impl LinearSolver {
    pub fn new(m: &IntMatrix, modulus: i64) -> Self {
        let s = smith_mod(m, modulus, true, false, true);
        LinearSolver {
            modulus,
            pivots: s.pivots,
            u: s.u.unwrap(),
            v: s.v.unwrap(),
            rows: s.rows,
            cols: s.cols,
        }
    }

    pub fn solve(&self, b: &[i64]) -> Option<Vec<i64>> {
        assert_eq!(b.len(), self.rows);
        let n = self.modulus as i128;
        let c: Vec<i128> = (0..self.rows)
            .map(|i| {
                self.u.row(i).iter().zip(b).fold(0i128, |acc, (&x, &y)| {
                    (acc + x as i128 * y as i128).rem_euclid(n)
                })
            })
            .collect();
        let mut z = vec![0i128; self.cols];
        for (i, &ci) in c.iter().enumerate() {
            if i < self.pivots.len() {
                let g = self.pivots[i] as i128;
                if ci % g != 0 {
                    return None;
                }
                z[i] = if g == n { 0 } else { ci / g };
            } else if ci != 0 {
                return None;
            }
        }
        Some(
            (0..self.cols)
                .map(|r| {
                    (0..self.cols).fold(0i128, |acc, k| {
                        (acc + self.v[(r, k)] as i128 * z[k]).rem_euclid(n)
                    }) as i64
                })
                .collect(),
        )
    }
}
