//! Degreewise finite augmented dg algebras and their bar construction.

use std::collections::{BTreeMap, HashMap};

use super::free::{cobar_complex_slice, FreeDgAlgebra, TruncationSpec};
use crate::chains::{add_term, Cell, DgCoalgebra};
use crate::error::{Error, Result};
use crate::field::{sign, Field, Scalar};
use crate::sparse::{normalize_vec, SparseMatrix, SparseVec};

/// Basis `(degree, index)` in each degree; `(0, 0)` is the unit. The algebra
/// is zero above the stored degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteDgAlgebra {
    pub name: String,
    pub field: Field,
    pub labels: Vec<Vec<String>>,
    /// Products of basis elements; absent pairs multiply to zero.
    pub product: BTreeMap<(Cell, Cell), SparseVec>,
    /// `differential[n] : A_n → A_{n-1}`.
    pub differential: Vec<SparseMatrix>,
    /// Values on the degree-0 basis.
    pub augmentation: Option<Vec<Scalar>>,
}

type Elt = BTreeMap<Cell, Scalar>;

impl FiniteDgAlgebra {
    pub fn truncation(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn dim(&self, n: usize) -> usize {
        self.labels.get(n).map_or(0, Vec::len)
    }

    pub fn mul(&self, a: Cell, b: Cell) -> Vec<(Cell, Scalar)> {
        let deg = a.0 + b.0;
        if a == (0, 0) {
            return vec![(b, self.field.one())];
        }
        if b == (0, 0) {
            return vec![(a, self.field.one())];
        }
        self.product.get(&(a, b)).map(|v| v.iter().map(|(i, c)| ((deg, *i), c.clone())).collect()).unwrap_or_default()
    }

    fn mul_elt(&self, x: &Elt, y: &Elt) -> Elt {
        let mut out = Elt::new();
        for (a, u) in x {
            for (b, v) in y {
                for (c, w) in self.mul(*a, *b) {
                    add_term(&mut out, c, &(u * v) * &w);
                }
            }
        }
        out
    }

    fn d_cell(&self, a: Cell) -> Elt {
        let mut out = Elt::new();
        if a.0 > 0 {
            for (r, c) in self.differential[a.0].column(a.1) {
                add_term(&mut out, (a.0 - 1, *r), c.clone());
            }
        }
        out
    }

    fn d_elt(&self, x: &Elt) -> Elt {
        let mut out = Elt::new();
        for (a, u) in x {
            for (b, v) in self.d_cell(*a) {
                add_term(&mut out, b, u * &v);
            }
        }
        out
    }

    fn cells(&self) -> Vec<Cell> {
        (0..=self.truncation()).flat_map(|n| (0..self.dim(n)).map(move |i| (n, i))).collect()
    }

    /// Unit, associativity, `d² = 0`, the Leibniz rule and an augmentation
    /// equal to the unit coordinate whose kernel is a dg ideal.
    pub fn validate(&self) -> Result<()> {
        let top = self.truncation();
        let bad = |m: String| Err(Error::InternalConsistency(format!("{}: {m}", self.name)));
        if self.dim(0) == 0 {
            return bad("no unit".into());
        }
        if self.differential.len() != self.labels.len() {
            return Err(Error::DimensionMismatch(format!("{}: differential count", self.name)));
        }
        let cells = self.cells();
        let one = |c: Cell| Elt::from([(c, self.field.one())]);
        for &a in &cells {
            if !self.d_elt(&self.d_cell(a)).is_empty() {
                return bad(format!("d² is nonzero on {}", self.labels[a.0][a.1]));
            }
            for &b in &cells {
                if a.0 + b.0 > top {
                    continue;
                }
                let ab = self.mul_elt(&one(a), &one(b));
                let mut rhs = self.mul_elt(&self.d_cell(a), &one(b));
                for (k, v) in self.mul_elt(&one(a), &self.d_cell(b)) {
                    add_term(&mut rhs, k, &v * &sign(self.field, a.0));
                }
                if self.d_elt(&ab) != rhs {
                    return bad(format!("Leibniz rule fails on {}·{}", self.labels[a.0][a.1], self.labels[b.0][b.1]));
                }
                if a != (0, 0) && b != (0, 0) && ab.contains_key(&(0, 0)) {
                    return bad("augmentation ideal is not closed under products".into());
                }
                for &c in &cells {
                    if a.0 + b.0 + c.0 > top {
                        continue;
                    }
                    let l = self.mul_elt(&ab, &one(c));
                    let r = self.mul_elt(&one(a), &self.mul_elt(&one(b), &one(c)));
                    if l != r {
                        return bad("product is not associative".into());
                    }
                }
            }
        }
        if (0..self.dim(1)).any(|i| self.d_cell((1, i)).contains_key(&(0, 0))) {
            return bad("augmentation ideal is not closed under d".into());
        }
        match &self.augmentation {
            None => Err(Error::InvalidPresentation(format!("{}: augmentation missing", self.name))),
            Some(e) if e.len() != self.dim(0) || !e[0].is_one() || e[1..].iter().any(|c| !c.is_zero()) => {
                bad("augmentation must be the unit coordinate".into())
            }
            Some(_) => Ok(()),
        }
    }

    /// `Λ(x)` with `|x| = 1` and `x² = 0`.
    pub fn exterior(field: Field) -> FiniteDgAlgebra {
        FiniteDgAlgebra {
            name: "Λ(x)".into(),
            field,
            labels: vec![vec!["1".into()], vec!["x".into()]],
            product: BTreeMap::new(),
            differential: vec![SparseMatrix::zero(field, 0, 1), SparseMatrix::zero(field, 1, 1)],
            augmentation: Some(vec![field.one()]),
        }
    }

    /// The words of degree ≤ `top` in a free algebra without degree-0
    /// generators, with products beyond `top` discarded. Its bar construction
    /// agrees with that of `a` through degree `top + 1`.
    pub fn from_free(a: &FreeDgAlgebra, top: usize) -> Result<FiniteDgAlgebra> {
        if !a.degree0_generators().is_empty() {
            return Err(Error::UnboundedTruncation(format!("{} has degree-0 generators", a.name)));
        }
        let s = cobar_complex_slice(a, TruncationSpec::degree(top))?;
        let names = a.names();
        let labels: Vec<Vec<String>> = s
            .bases
            .iter()
            .map(|b| {
                b.iter()
                    .map(|m| {
                        if m.word.is_empty() {
                            "1".into()
                        } else {
                            m.word.iter().map(|g| names[*g as usize].as_str()).collect::<Vec<_>>().join("·")
                        }
                    })
                    .collect()
            })
            .collect();
        let mut product = BTreeMap::new();
        for p in 1..=top {
            for q in 1..=top - p {
                for (i, x) in s.bases[p].iter().enumerate() {
                    for (j, y) in s.bases[q].iter().enumerate() {
                        let k = s.index_of(&x.concat(y)).expect("concatenation lies in the slice");
                        product.insert(((p, i), (q, j)), vec![(k, a.field.one())]);
                    }
                }
            }
        }
        Ok(FiniteDgAlgebra {
            name: a.name.clone(),
            field: a.field,
            labels,
            product,
            differential: s.complex.differentials.clone(),
            augmentation: Some(vec![a.field.one()]),
        })
    }
}

fn bar_words(a: &FiniteDgAlgebra, max_degree: usize) -> Vec<Vec<Vec<Cell>>> {
    let letters: Vec<Cell> = a.cells().into_iter().filter(|c| *c != (0, 0) && c.0 < max_degree).collect();
    let mut by_degree: Vec<Vec<Vec<Cell>>> = vec![Vec::new(); max_degree + 1];
    by_degree[0].push(Vec::new());
    for n in 1..=max_degree {
        let mut out = Vec::new();
        for l in &letters {
            if l.0 + 1 > n {
                continue;
            }
            for w in &by_degree[n - l.0 - 1] {
                let mut v = Vec::with_capacity(w.len() + 1);
                v.push(*l);
                v.extend_from_slice(w);
                out.push(v);
            }
        }
        out.sort_by(|x, y| (x.len(), x).cmp(&(y.len(), y)));
        by_degree[n] = out;
    }
    by_degree
}

/// `B(A)` through `max_degree`: words `[a_1|…|a_k]` in the augmentation
/// ideal of bar degree `Σ (|a_i| + 1)`, deconcatenation coproduct and
/// `d = -Σ (-1)^{ε_i} [… | d a_i | …] + Σ (-1)^{ε_{i+1}} [… | a_i a_{i+1} | …]`
/// with `ε_i = Σ_{j<i} (|a_j| + 1)`.
pub fn bar(a: &FiniteDgAlgebra, max_degree: usize) -> Result<DgCoalgebra> {
    a.validate()?;
    let f = a.field;
    let words = bar_words(a, max_degree);
    let index: Vec<HashMap<Vec<Cell>, usize>> =
        words.iter().map(|ws| ws.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect()).collect();
    let mut differential = Vec::with_capacity(max_degree + 1);
    let mut coproduct = Vec::with_capacity(max_degree + 1);
    for n in 0..=max_degree {
        let cols: Vec<SparseVec> = if n == 0 {
            vec![Vec::new()]
        } else {
            words[n]
                .iter()
                .map(|w| {
                    let mut acc: BTreeMap<Vec<Cell>, Scalar> = BTreeMap::new();
                    let mut eps = 0;
                    for i in 0..w.len() {
                        for (b, c) in a.d_cell(w[i]) {
                            let mut v = w.clone();
                            v[i] = b;
                            add_term(&mut acc, v, -(&c * &sign(f, eps)));
                        }
                        eps += w[i].0 + 1;
                        if i + 1 < w.len() {
                            for (b, c) in a.mul(w[i], w[i + 1]) {
                                let mut v = w[..i].to_vec();
                                v.push(b);
                                v.extend_from_slice(&w[i + 2..]);
                                add_term(&mut acc, v, &c * &sign(f, eps));
                            }
                        }
                    }
                    normalize_vec(acc.into_iter().map(|(v, c)| (index[n - 1][&v], c)).collect())
                })
                .collect()
        };
        let rows = if n == 0 { 0 } else { words[n - 1].len() };
        differential.push(SparseMatrix::from_columns(f, rows, cols));
        let terms = words[n]
            .iter()
            .map(|w| {
                let mut deg = 0;
                (0..=w.len())
                    .map(|k| {
                        if k > 0 {
                            deg += w[k - 1].0 + 1;
                        }
                        let (l, r) = (w[..k].to_vec(), w[k..].to_vec());
                        ((deg, index[deg][&l]), (n - deg, index[n - deg][&r]), f.one())
                    })
                    .collect()
            })
            .collect();
        coproduct.push(terms);
    }
    let label = |w: &Vec<Cell>| format!("[{}]", w.iter().map(|c| a.labels[c.0][c.1].as_str()).collect::<Vec<_>>().join("|"));
    Ok(DgCoalgebra {
        name: format!("B({})", a.name),
        field: f,
        labels: words.iter().map(|ws| ws.iter().map(label).collect()).collect(),
        differential,
        coproduct,
        counit: vec![f.one()],
        coaugmentation: Some(0),
        origin: words.iter().map(|ws| (0..ws.len()).collect()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::dg_homology;
    use crate::cobar::free::{cobar, cobar_homology, lambda};
    use crate::simplicial::builtins::sphere2_min;

    fn truncated_polynomial(field: Field) -> FiniteDgAlgebra {
        // 𝔽[y]/y³ with |y| = 2
        let mut product = BTreeMap::new();
        product.insert(((2, 0), (2, 0)), vec![(0, field.one())]);
        let z = |r, c| SparseMatrix::zero(field, r, c);
        FiniteDgAlgebra {
            name: "𝔽[y]/y³".into(),
            field,
            labels: vec![vec!["1".into()], vec![], vec!["y".into()], vec![], vec!["y²".into()]],
            product,
            differential: vec![z(0, 1), z(1, 0), z(0, 1), z(1, 0), z(0, 1)],
            augmentation: Some(vec![field.one()]),
        }
    }

    #[test]
    fn bar_of_the_ground_field() {
        let f = Field::Rationals;
        let unit = FiniteDgAlgebra {
            name: "𝔽".into(),
            field: f,
            labels: vec![vec!["1".into()]],
            product: BTreeMap::new(),
            differential: vec![SparseMatrix::zero(f, 0, 1)],
            augmentation: Some(vec![f.one()]),
        };
        let b = bar(&unit, 1).unwrap();
        assert_eq!(b.dims(), vec![1, 0]);
        let mut missing = unit.clone();
        missing.augmentation = None;
        assert!(matches!(bar(&missing, 1), Err(Error::InvalidPresentation(_))));
    }

    #[test]
    fn bar_of_exterior_algebra() {
        for f in [Field::Rationals, Field::Prime(2)] {
            let b = bar(&FiniteDgAlgebra::exterior(f), 8).unwrap();
            assert_eq!(b.dims(), vec![1, 0, 1, 0, 1, 0, 1, 0, 1]);
            assert_eq!(b.labels[4][0], "[x|x]");
            b.check_invariants().unwrap();
            let h = cobar_homology(&cobar(&b).unwrap(), TruncationSpec::degree(4)).unwrap();
            assert_eq!(h.numbers(), vec![1, 1, 0, 0, 0]);
            assert!(h.all_exact());
        }
    }

    #[test]
    fn bar_of_truncated_polynomials_is_a_dg_coalgebra() {
        for f in [Field::Rationals, Field::Prime(3)] {
            let b = bar(&truncated_polynomial(f), 7).unwrap();
            b.check_invariants().unwrap();
        }
    }

    #[test]
    fn bar_of_the_loop_algebra_of_the_sphere() {
        let om = lambda(&sphere2_min(8), Field::Rationals, 8).unwrap();
        let a = FiniteDgAlgebra::from_free(&om, 6).unwrap();
        let b = bar(&a, 6).unwrap();
        b.check_invariants().unwrap();
        assert_eq!(dg_homology(&b, 5).unwrap().numbers(), vec![1, 0, 1, 0, 0, 0]);
    }
}
