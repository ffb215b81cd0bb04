//! Integer lattices: membership, Smith normal form and finitely generated abelian quotients.

use std::collections::BTreeSet;

use num_integer::Integer;

/// A sublattice of `Z^n` given by an echelon basis.
#[derive(Clone, Debug)]
pub struct Lattice {
    n: usize,
    basis: Vec<Vec<i64>>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn new(gens: &[Vec<i64>], n: usize) -> Self {
        let mut rows: Vec<Vec<i64>> = gens.iter().filter(|g| g.iter().any(|&x| x != 0)).cloned().collect();
        let mut basis = Vec::new();
        let mut pivots = Vec::new();
        for c in 0..n {
            loop {
                let nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][c] != 0).collect();
                if nz.len() <= 1 {
                    break;
                }
                let p = *nz.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
                let pv = rows[p][c];
                for &i in &nz {
                    if i != p {
                        let q = Integer::div_floor(&rows[i][c], &pv);
                        for j in 0..n {
                            rows[i][j] -= q * rows[p][j];
                        }
                    }
                }
            }
            if let Some(p) = (0..rows.len()).find(|&i| rows[i][c] != 0) {
                let mut r = rows.swap_remove(p);
                if r[c] < 0 {
                    r.iter_mut().for_each(|x| *x = -*x);
                }
                basis.push(r);
                pivots.push(c);
            }
            rows.retain(|r| r.iter().any(|&x| x != 0));
        }
        Lattice { n, basis, pivots }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        let mut v = v.to_vec();
        for (b, &c) in self.basis.iter().zip(&self.pivots) {
            if v[c] % b[c] != 0 {
                return false;
            }
            let q = v[c] / b[c];
            if q != 0 {
                for j in 0..self.n {
                    v[j] -= q * b[j];
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }
}

/// Smith form data: `rowspace(G) · Q = rowspace(diag(divisors))`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub divisors: Vec<i64>,
    pub q: Vec<Vec<i64>>,
    pub qinv: Vec<Vec<i64>>,
}

pub fn smith(gens: &[Vec<i64>], n: usize) -> Smith {
    let mut a: Vec<Vec<i64>> = gens.to_vec();
    let m = a.len();
    let mut q = identity(n);
    let mut qinv = identity(n);
    let col_sub = |a: &mut Vec<Vec<i64>>, q: &mut Vec<Vec<i64>>, qinv: &mut Vec<Vec<i64>>, j: usize, t: usize, k: i64| {
        for row in a.iter_mut() {
            row[j] -= k * row[t];
        }
        for row in q.iter_mut() {
            row[j] -= k * row[t];
        }
        for c in 0..n {
            let x = qinv[j][c];
            qinv[t][c] += k * x;
        }
    };
    let col_swap = |a: &mut Vec<Vec<i64>>, q: &mut Vec<Vec<i64>>, qinv: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in q.iter_mut() {
            row.swap(i, j);
        }
        qinv.swap(i, j);
    };
    let mut divisors = vec![0i64; n];
    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            a.swap(t, bi);
            if bj != t {
                col_swap(&mut a, &mut q, &mut qinv, t, bj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..m {
                let k = Integer::div_floor(&a[i][t], &p);
                if k != 0 {
                    for j in t..n {
                        a[i][j] -= k * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let k = Integer::div_floor(&a[t][j], &p);
                if k != 0 {
                    col_sub(&mut a, &mut q, &mut qinv, j, t, k);
                }
                if a[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    for j in t..n {
                        let x = a[i][j];
                        a[t][j] += x;
                    }
                }
                None => break,
            }
        }
        if t < m && a[t][t] < 0 {
            for row in q.iter_mut() {
                row[t] = -row[t];
            }
            qinv[t].iter_mut().for_each(|x| *x = -*x);
            a[t][t] = -a[t][t];
        }
        if t < m {
            divisors[t] = a[t][t];
        }
    }
    Smith { divisors, q, qinv }
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

/// The quotient `Z^n / L` in Smith coordinates.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    n: usize,
    smith: Smith,
    /// Positions with divisor different from one.
    slots: Vec<usize>,
}

impl QuotientGroup {
    pub fn new(gens: &[Vec<i64>], n: usize) -> Self {
        let smith = smith(gens, n);
        let slots = (0..n).filter(|&i| smith.divisors[i] != 1).collect();
        QuotientGroup { n, smith, slots }
    }

    /// Cyclic factor orders (0 for a free factor), in Smith order.
    pub fn divisors(&self) -> Vec<i64> {
        self.slots.iter().map(|&i| self.smith.divisors[i]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.slots.iter().all(|&i| self.smith.divisors[i] != 0)
    }

    pub fn order(&self) -> Option<u64> {
        self.is_finite().then(|| self.divisors().iter().map(|&d| d as u64).product())
    }

    /// Canonical coordinates of the class of `v`.
    pub fn class(&self, v: &[i64]) -> Vec<i64> {
        self.slots
            .iter()
            .map(|&s| {
                let x: i64 = (0..self.n).map(|i| v[i] * self.smith.q[i][s]).sum();
                let d = self.smith.divisors[s];
                if d == 0 { x } else { x.rem_euclid(d) }
            })
            .collect()
    }

    /// A lattice vector in the given class.
    pub fn rep(&self, class: &[i64]) -> Vec<i64> {
        let mut v = vec![0i64; self.n];
        for (k, &s) in self.slots.iter().enumerate() {
            for (j, vj) in v.iter_mut().enumerate() {
                *vj += class[k] * self.smith.qinv[s][j];
            }
        }
        v
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        self.normalize(a.iter().zip(b).map(|(x, y)| x + y).collect())
    }

    pub fn mul(&self, k: i64, a: &[i64]) -> Vec<i64> {
        self.normalize(a.iter().map(|x| k * x).collect())
    }

    fn normalize(&self, mut c: Vec<i64>) -> Vec<i64> {
        for (k, &s) in self.slots.iter().enumerate() {
            let d = self.smith.divisors[s];
            if d != 0 {
                c[k] = c[k].rem_euclid(d);
            }
        }
        c
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.slots.len()]
    }

    /// All elements of a finite quotient, in lexicographic coordinate order.
    pub fn elements(&self) -> Vec<Vec<i64>> {
        assert!(self.is_finite(), "infinite quotient");
        let divs = self.divisors();
        let mut out = vec![Vec::new()];
        for &d in &divs {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0..d).map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        out
    }

    /// Invariant factors of a finite subgroup given by its full element list.
    pub fn invariant_factors(&self, elements: &[Vec<i64>]) -> Vec<u64> {
        let order = elements.len() as u64;
        let mut primes = Vec::new();
        let mut m = order;
        let mut p = 2;
        while m > 1 {
            if m.is_multiple_of(p) {
                primes.push(p);
                while m.is_multiple_of(p) {
                    m /= p;
                }
            }
            p += 1;
        }
        let zero = self.zero();
        let mut exps_per_prime: Vec<(u64, Vec<u32>)> = Vec::new();
        for &p in &primes {
            // e[j] = log_p |{x : p^j x = 0}|
            let mut e = vec![0u32];
            let mut pj = 1i64;
            loop {
                pj *= p as i64;
                let cnt = elements.iter().filter(|x| self.mul(pj, x) == zero).count() as u64;
                let mut l = 0;
                let mut c = cnt;
                while c > 1 {
                    c /= p;
                    l += 1;
                }
                if l == *e.last().unwrap() {
                    break;
                }
                e.push(l);
            }
            let r: Vec<u32> = (1..e.len()).map(|j| e[j] - e[j - 1]).collect();
            let mut exps = Vec::new();
            for j in 0..r.len() {
                let next = r.get(j + 1).copied().unwrap_or(0);
                for _ in 0..(r[j] - next) {
                    exps.push(j as u32 + 1);
                }
            }
            exps.sort_unstable_by(|a, b| b.cmp(a));
            exps_per_prime.push((p, exps));
        }
        let len = exps_per_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
        let mut factors: Vec<u64> = (0..len)
            .map(|k| exps_per_prime.iter().map(|(p, e)| e.get(k).map_or(1, |&x| p.pow(x))).product())
            .collect();
        factors.reverse();
        factors
    }

    /// The subgroup generated by `gens`, as a sorted element list.
    pub fn span(&self, gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        seen.insert(self.zero());
        let mut frontier = vec![self.zero()];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = self.add(&x, g);
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        seen.into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_membership() {
        let l = Lattice::new(&[vec![2, -1], vec![-1, 2]], 2);
        assert!(l.contains(&[3, 0]));
        assert!(!l.contains(&[1, 0]));
        assert!(l.contains(&[1, 1]));
        assert_eq!(l.rank(), 2);
    }

    #[test]
    fn a2_cartan_quotient_is_z3() {
        let g = QuotientGroup::new(&[vec![2, -1], vec![-1, 2]], 2);
        assert_eq!(g.divisors(), vec![3]);
        let els = g.elements();
        assert_eq!(g.invariant_factors(&els), vec![3]);
        for e in &els {
            assert_eq!(&g.class(&g.rep(e)), e);
        }
    }

    #[test]
    fn d4_quotient_is_klein() {
        let c = vec![vec![2, -1, 0, 0], vec![-1, 2, -1, -1], vec![0, -1, 2, 0], vec![0, -1, 0, 2]];
        let g = QuotientGroup::new(&c, 4);
        assert_eq!(g.order(), Some(4));
        assert_eq!(g.invariant_factors(&g.elements()), vec![2, 2]);
    }

    #[test]
    fn free_part_reported_as_zero() {
        let g = QuotientGroup::new(&[vec![2, 0]], 2);
        let mut d = g.divisors();
        d.sort();
        assert_eq!(d, vec![0, 2]);
        assert!(!g.is_finite());
    }

    #[test]
    fn invariant_factors_mixed() {
        let g = QuotientGroup::new(&[vec![2, 0], vec![0, 6]], 2);
        assert_eq!(g.invariant_factors(&g.elements()), vec![2, 6]);
        let g = QuotientGroup::new(&[vec![4, 0], vec![0, 6]], 2);
        assert_eq!(g.invariant_factors(&g.elements()), vec![2, 12]);
    }
}
