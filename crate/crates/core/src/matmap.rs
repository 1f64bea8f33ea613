//! Matrices of polynomials: minors, Jacobians, the ideals `J` and `J'`, and
//! the associated map `ã(β, x) = β_1 a_1(x) + ... + β_k a_k(x)`.

use std::sync::Arc;

use crate::poly::{Polynomial, Ring};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("minor size {size} exceeds matrix shape {rows}x{cols}")]
    SizeExceeded { size: usize, rows: usize, cols: usize },
    #[error("matrix needs more rows than columns, got {rows}x{cols}")]
    NotTall { rows: usize, cols: usize },
    #[error("matrix entries and the constraint polynomials live in different rings")]
    RingMismatch,
    #[error("expected {expected} entries, got {got}")]
    Shape { expected: usize, got: usize },
}

/// Row-major `rows x cols` matrix of polynomials over one ring.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    ring: Arc<Ring>,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn new(
        ring: &Arc<Ring>,
        rows: usize,
        cols: usize,
        entries: Vec<Polynomial>,
    ) -> Result<Self, MatrixError> {
        if entries.len() != rows * cols {
            return Err(MatrixError::Shape {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        if entries.iter().any(|e| e.ring() != ring) {
            return Err(MatrixError::RingMismatch);
        }
        Ok(PolyMatrix {
            rows,
            cols,
            ring: ring.clone(),
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn get(&self, r: usize, c: usize) -> &Polynomial {
        &self.entries[r * self.cols + c]
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn column(&self, c: usize) -> Vec<Polynomial> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        PolyMatrix {
            rows: self.cols,
            cols: self.rows,
            ring: self.ring.clone(),
            entries,
        }
    }

    /// Evaluates every entry at a floating point, row-major.
    pub fn eval_f64(&self, point: &[f64]) -> Vec<f64> {
        self.entries
            .iter()
            .map(|e| e.eval_f64(point).expect("point matches ring"))
            .collect()
    }

    /// All `r x r` minors, ordered lexicographically by (row set, column set).
    /// The `0 x 0` minor is the constant 1.
    pub fn minors(&self, r: usize) -> Result<Vec<Polynomial>, MatrixError> {
        if r > self.rows.min(self.cols) {
            return Err(MatrixError::SizeExceeded {
                size: r,
                rows: self.rows,
                cols: self.cols,
            });
        }
        if r == 0 {
            return Ok(vec![Polynomial::one(&self.ring)]);
        }
        let row_sets = combinations(self.rows, r);
        let col_sets = combinations(self.cols, r);
        let mut out = Vec::with_capacity(row_sets.len() * col_sets.len());
        for rs in &row_sets {
            for cs in &col_sets {
                let sub: Vec<Vec<Polynomial>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| self.get(i, j).clone()).collect())
                    .collect();
                out.push(if r >= 4 { bareiss_det(sub) } else { cofactor_det(&sub) });
            }
        }
        Ok(out)
    }
}

/// All `r`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if r > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        out.push(idx.clone());
        // rightmost position that can still advance
        let mut i = r;
        while i > 0 && idx[i - 1] == i - 1 + n - r {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn cofactor_det(m: &[Vec<Polynomial>]) -> Polynomial {
    let n = m.len();
    match n {
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        _ => {
            let ring = m[0][0].ring().clone();
            let mut acc = Polynomial::zero(&ring);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Polynomial>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][j] * &cofactor_det(&minor);
                if j % 2 == 0 {
                    acc += &term;
                } else {
                    acc += &(-&term);
                }
            }
            acc
        }
    }
}

/// Fraction-free elimination; every division is exact.
fn bareiss_det(mut m: Vec<Vec<Polynomial>>) -> Polynomial {
    let n = m.len();
    let ring = m[0][0].ring().clone();
    let mut sign_flip = false;
    let mut prev = Polynomial::one(&ring);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign_flip = !sign_flip;
                }
                None => return Polynomial::zero(&ring),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        -&det
    } else {
        det
    }
}

/// Jacobian of `maps`: one row per map, one column per ring variable.
pub fn jacobian(maps: &[Polynomial], ring: &Arc<Ring>) -> PolyMatrix {
    let mut entries = Vec::with_capacity(maps.len() * ring.nvars());
    for f in maps {
        for v in 0..ring.nvars() {
            entries.push(f.derivative(v));
        }
    }
    PolyMatrix {
        rows: maps.len(),
        cols: ring.nvars(),
        ring: ring.clone(),
        entries,
    }
}

fn check_constraints(h: &[Polynomial], a: &PolyMatrix) -> Result<(), MatrixError> {
    if a.rows <= a.cols {
        return Err(MatrixError::NotTall {
            rows: a.rows,
            cols: a.cols,
        });
    }
    if h.iter().any(|p| p.ring() != &a.ring) {
        return Err(MatrixError::RingMismatch);
    }
    Ok(())
}

/// Generators of `J`: the constraints and all maximal (`k x k`) minors.
pub fn build_j(h: &[Polynomial], a: &PolyMatrix) -> Result<Vec<Polynomial>, MatrixError> {
    check_constraints(h, a)?;
    let mut gens = h.to_vec();
    gens.extend(a.minors(a.cols)?);
    Ok(gens)
}

/// Generators of `J'`: the constraints and all `(k-1) x (k-1)` minors.
///
/// For a single column the only such minor is the empty one, equal to 1.
pub fn build_j_prime(h: &[Polynomial], a: &PolyMatrix) -> Result<Vec<Polynomial>, MatrixError> {
    check_constraints(h, a)?;
    let mut gens = h.to_vec();
    gens.extend(a.minors(a.cols - 1)?);
    Ok(gens)
}

/// `ã` as polynomials over the extended ring `(β_1..β_k, x_1..x_N)`.
#[derive(Clone, Debug)]
pub struct ATilde {
    pub ring: Arc<Ring>,
    /// Number of β variables; they come first in `ring`.
    pub k: usize,
    pub components: Vec<Polynomial>,
    pub sphere_constraint: Polynomial,
}

impl ATilde {
    /// Embeds a polynomial in the base variables into the extended ring.
    pub fn lift(&self, p: &Polynomial) -> Polynomial {
        let positions: Vec<usize> = (0..p.ring().nvars()).map(|i| i + self.k).collect();
        p.embed(&self.ring, &positions)
    }
}

/// Names for the β variables that do not clash with the base ring.
fn beta_names(base: &Ring, k: usize) -> Vec<String> {
    let mut prefix = "beta".to_string();
    while (1..=k).any(|i| base.index_of(&format!("{prefix}{i}")).is_some()) {
        prefix.insert(0, '_');
    }
    (1..=k).map(|i| format!("{prefix}{i}")).collect()
}

pub fn build_a_tilde(a: &PolyMatrix) -> ATilde {
    let k = a.cols;
    let mut names = beta_names(&a.ring, k);
    names.extend(a.ring.vars().iter().cloned());
    let ring = Ring::new(&names);
    let positions: Vec<usize> = (0..a.ring.nvars()).map(|i| i + k).collect();
    let components = (0..a.rows)
        .map(|row| {
            let mut comp = Polynomial::zero(&ring);
            for col in 0..k {
                let lifted = a.get(row, col).embed(&ring, &positions);
                comp += &(&Polynomial::var(&ring, col) * &lifted);
            }
            comp
        })
        .collect();
    let mut sphere = Polynomial::from_int(&ring, -1);
    for i in 0..k {
        sphere += &Polynomial::var(&ring, i).pow(2);
    }
    ATilde {
        ring,
        k,
        components,
        sphere_constraint: sphere,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn matrix(ring: &Arc<Ring>, rows: usize, cols: usize, src: &[&str]) -> PolyMatrix {
        let entries = src.iter().map(|s| parse_polynomial(s, ring).unwrap()).collect();
        PolyMatrix::new(ring, rows, cols, entries).unwrap()
    }

    #[test]
    fn determinant_definition() {
        let ring = Ring::new(&["p", "q", "r", "s"]);
        let m = matrix(&ring, 2, 2, &["p", "q", "r", "s"]);
        assert_eq!(m.minors(2).unwrap(), vec![parse_polynomial("p*s-q*r", &ring).unwrap()]);
        assert_eq!(m.minors(0).unwrap(), vec![Polynomial::one(&ring)]);
        assert!(matches!(m.minors(3), Err(MatrixError::SizeExceeded { .. })));
    }

    #[test]
    fn combination_order() {
        assert_eq!(
            combinations(4, 2),
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(6, 4).len(), 15);
    }

    #[test]
    fn bareiss_agrees_with_cofactor() {
        let ring = Ring::new(&["x", "y"]);
        let src = [
            "x", "y+1", "2", "x*y", "0", "1", "x^2", "y", "3", "x-y", "0", "1", "y", "1", "x", "2",
        ];
        let rows: Vec<Vec<Polynomial>> = src
            .chunks(4)
            .map(|r| r.iter().map(|s| parse_polynomial(s, &ring).unwrap()).collect())
            .collect();
        assert_eq!(bareiss_det(rows.clone()), cofactor_det(&rows));
    }

    #[test]
    fn jacobian_of_sphere() {
        let ring = Ring::new(&["x", "y", "z"]);
        let h = parse_polynomial("x^2+y^2+z^2-1", &ring).unwrap();
        let jac = jacobian(&[h], &ring);
        assert_eq!((jac.rows(), jac.cols()), (1, 3));
        assert_eq!(jac.get(0, 2), &parse_polynomial("2*z", &ring).unwrap());
    }

    #[test]
    fn single_column_conventions() {
        let ring = Ring::new(&["x", "y"]);
        let h = vec![parse_polynomial("x^2+y^2-1", &ring).unwrap()];
        let a = matrix(&ring, 2, 1, &["x", "y"]);
        let jp = build_j_prime(&h, &a).unwrap();
        assert_eq!(jp.len(), 2);
        assert!(jp[1].is_one());
        let at = build_a_tilde(&a);
        assert_eq!(at.k, 1);
        assert_eq!(
            at.sphere_constraint,
            parse_polynomial("beta1^2-1", &at.ring).unwrap()
        );
        assert_eq!(at.components[0], parse_polynomial("beta1*x", &at.ring).unwrap());
    }

    #[test]
    fn a_tilde_is_odd_in_beta() {
        let ring = Ring::new(&["x", "y"]);
        let a = matrix(&ring, 3, 2, &["x", "y^2", "1", "x*y", "y", "x-1"]);
        let at = build_a_tilde(&a);
        for comp in &at.components {
            let mut flipped = comp.clone();
            for b in 0..at.k {
                flipped = flipped.negate_var(b);
            }
            assert_eq!(flipped, -comp);
        }
    }

    #[test]
    fn tall_matrix_required() {
        let ring = Ring::new(&["x"]);
        let a = matrix(&ring, 2, 2, &["x", "1", "0", "x"]);
        assert!(matches!(build_j(&[], &a), Err(MatrixError::NotTall { .. })));
    }
}
