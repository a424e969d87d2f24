//! Weight generating functions: super Schur functions, characters of
//! orthosymplectic tableaux, the Kostka-type recording sets and the
//! insertion bijection onto pairs `(P, Q)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, Letter};
use crate::crystal::{weight_of, Weight};
use crate::error::{Error, Result};
use crate::osp::{enumerate, GKind, OspTableau, PShape, Piece};
use crate::signatures::{tableau_k_signature, tableau_r_k, tableau_rho_k, uninsert_column, Signature};
use crate::tableau::{column_step_ok, conjugate, row_step_ok, Column, Tableau};
use crate::weyl::{self, ClassicalType};

/// A finite sum of weights with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightPolynomial {
    pub terms: BTreeMap<Weight, i64>,
}

impl WeightPolynomial {
    pub fn new() -> WeightPolynomial {
        WeightPolynomial::default()
    }

    pub fn add(&mut self, w: Weight, c: i64) {
        let e = self.terms.entry(w.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&w);
        }
    }

    pub fn add_scaled(&mut self, other: &WeightPolynomial, c: i64) {
        for (w, &k) in &other.terms {
            self.add(w.clone(), c * k);
        }
    }

    /// Multiplies by `z^level`.
    pub fn shift_level(&self, level: i64) -> WeightPolynomial {
        let mut out = WeightPolynomial::new();
        for (w, &k) in &self.terms {
            let mut w = w.clone();
            w.level += level;
            out.add(w, k);
        }
        out
    }

    pub fn total(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &Weight) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    /// CSV lines `level,<letter columns...>,coefficient`.
    pub fn to_csv(&self, alphabet: &Alphabet) -> String {
        let mut out = String::from("level");
        for a in alphabet.letters() {
            out.push_str(&format!(",{a}"));
        }
        out.push_str(",coefficient\n");
        for (w, c) in &self.terms {
            out.push_str(&w.level.to_string());
            for &a in alphabet.letters() {
                out.push_str(&format!(",{}", w.get(a)));
            }
            out.push_str(&format!(",{c}\n"));
        }
        out
    }
}

/// All semistandard tableaux of straight shape `mu` over `alphabet`.
pub fn sst(mu: &[usize], alphabet: &Alphabet) -> Vec<Tableau> {
    let cells: Vec<(usize, usize)> =
        mu.iter().enumerate().flat_map(|(r, &len)| (0..len).map(move |c| (r, c))).collect();
    let mut grid: BTreeMap<(usize, usize), Letter> = BTreeMap::new();
    let mut out = Vec::new();
    fn go(
        i: usize,
        cells: &[(usize, usize)],
        letters: &[Letter],
        grid: &mut BTreeMap<(usize, usize), Letter>,
        out: &mut Vec<Tableau>,
    ) {
        if i == cells.len() {
            out.push(Tableau::from_cells(grid).expect("straight shape"));
            return;
        }
        let (r, c) = cells[i];
        for &x in letters {
            if c > 0 && !row_step_ok(grid[&(r, c - 1)], x) {
                continue;
            }
            if r > 0 && !column_step_ok(grid[&(r - 1, c)], x) {
                continue;
            }
            grid.insert((r, c), x);
            go(i + 1, cells, letters, grid, out);
            grid.remove(&(r, c));
        }
    }
    go(0, &cells, alphabet.letters(), &mut grid, &mut out);
    out
}

/// `s_mu(x_A)`, dropped entirely when `|mu|` exceeds the bound.
pub fn schur(mu: &[usize], alphabet: &Alphabet, degree_bound: usize) -> WeightPolynomial {
    let mut out = WeightPolynomial::new();
    if mu.iter().sum::<usize>() > degree_bound {
        return out;
    }
    for t in sst(mu, alphabet) {
        let mut w = Weight::new(0);
        for (a, k) in t.content() {
            w.add_letter(a, k as i64);
        }
        out.add(w, 1);
    }
    out
}

/// `z^ℓ Σ x^T` over the tableaux of the shape up to the degree bound.
pub fn osp_character(shape: &PShape, alphabet: &Alphabet, degree_bound: usize) -> WeightPolynomial {
    let mut out = WeightPolynomial::new();
    for t in enumerate(shape, alphabet, degree_bound) {
        out.add(weight_of(&t), 1);
    }
    out
}

fn label_counts(q: &Tableau, top: u32) -> Vec<usize> {
    let mut m = vec![0usize; top as usize + 2];
    for (_, x) in q.cells() {
        if let Some(v) = x.int_value() {
            if (v as usize) < m.len() {
                m[v as usize] += 1;
            }
        }
    }
    m
}

/// Membership of `q` in the Kostka-type set of the shape.
pub fn is_kostka(q: &Tableau, shape: &PShape) -> bool {
    let l = shape.tuple_length() as u32;
    let top = 2 * l;
    if !q.is_straight() || !q.is_semistandard() {
        return false;
    }
    if q.cells().any(|(_, x)| x.int_value().is_none_or(|v| v == 0 || v > top)) {
        return false;
    }
    let m = label_counts(q, top);
    let mm = |k: u32| m.get(k as usize).copied().unwrap_or(0) as i64;
    let lam = |k: u32| shape.conj(k as usize) as i64;
    let sig = |t: &Tableau, k: u32| -> (i64, i64) {
        let s: Signature = tableau_k_signature(t, k);
        (s.minus as i64, s.plus as i64)
    };
    let paired = |s: (i64, i64), first: i64, second: i64| -> bool {
        let p = first - s.0;
        p >= 0 && second - s.1 == p
    };
    match shape.g {
        GKind::C => {
            for k in 1..=l {
                if mm(2 * k) - mm(2 * k - 1) != lam(k) || sig(q, 2 * k - 1) != (lam(k), 0) {
                    return false;
                }
            }
            for k in 1..l {
                let d = mm(2 * k) - mm(2 * k + 2);
                if d < 0 || sig(&tableau_r_k(q, 2 * k + 1), 2 * k) != (0, d) {
                    return false;
                }
                if !paired(sig(&tableau_r_k(q, 2 * k - 1), 2 * k), lam(k) - lam(k + 1), d) {
                    return false;
                }
            }
            true
        }
        GKind::B | GKind::BBullet => {
            if shape.has_spin() && mm(top) != 0 {
                return false;
            }
            for k in 1..=l {
                let c = mm(2 * k) - lam(k);
                if c < 0 || mm(2 * k - 1) < c {
                    return false;
                }
                if sig(q, 2 * k - 1) != (lam(k), mm(2 * k - 1) - c) {
                    return false;
                }
            }
            for k in 1..l {
                let d = mm(2 * k) - mm(2 * k + 1) - lam(k + 1);
                if d < 0 || sig(&tableau_rho_k(q, 2 * k + 1), 2 * k) != (0, d) {
                    return false;
                }
                if !paired(sig(&tableau_rho_k(q, 2 * k - 1), 2 * k), lam(k) - lam(k + 1), d) {
                    return false;
                }
            }
            true
        }
    }
}

/// The recording tableaux paired with insertion tableaux of shape `mu`.
/// Recording cells are transposed, so these have the conjugate shape.
pub fn kostka_set(mu: &[usize], shape: &PShape) -> Vec<Tableau> {
    let labels = Alphabet::custom((1..=2 * shape.tuple_length() as u32).map(Letter::int).collect());
    let nu = conjugate(mu);
    if nu.len() > labels.len() {
        return Vec::new();
    }
    sst(&nu, &labels).into_iter().filter(|q| is_kostka(q, shape)).collect()
}

/// `(μ, K_μ)` for every partition `μ` of size at most the bound.
pub fn kostka_table(shape: &PShape, degree_bound: usize) -> Vec<(Vec<usize>, usize)> {
    let cols = 2 * shape.tuple_length();
    let mut out = Vec::new();
    for size in 0..=degree_bound {
        for mu in crate::osp::partitions(size, cols, size) {
            let k = kostka_set(&mu, shape).len();
            if k > 0 {
                out.push((mu, k));
            }
        }
    }
    out
}

/// Columns in insertion order: `T_1^R, T_1^L, T_2^R, ...`.
fn insertion_columns(t: &OspTableau) -> Vec<&Column> {
    t.pieces.iter().flat_map(|p| [&p.right, &p.left]).collect()
}

/// The bijection `T -> (P, Q)`.
pub fn psi(t: &OspTableau) -> (Tableau, Tableau) {
    let mut p = Tableau::empty();
    let mut qcells: BTreeMap<(usize, usize), Letter> = BTreeMap::new();
    for (step, col) in insertion_columns(t).into_iter().enumerate() {
        for (r, c) in p.insert_word(col.entries()) {
            qcells.insert((c, r), Letter::int(step as u32 + 1));
        }
    }
    let q = Tableau::from_cells(&qcells).expect("recording cells form a straight shape");
    (p, q)
}

/// Inverse of [`psi`] for the given shape; rejects pairs outside the image.
pub fn psi_inverse(p: &Tableau, q: &Tableau, shape: &PShape, alphabet: &Alphabet) -> Result<OspTableau> {
    let l = shape.tuple_length();
    let mut by_label: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
    for ((r, c), x) in q.cells() {
        let v = x
            .int_value()
            .filter(|&v| v >= 1 && v as usize <= 2 * l)
            .ok_or_else(|| Error::Reversal(format!("recording label {x} out of range")))?;
        by_label.entry(v).or_default().push((c, r));
    }
    if q.size() != p.size() {
        return Err(Error::Reversal("P and Q have different sizes".into()));
    }
    let mut cur = p.clone();
    let mut cols: Vec<Column> = vec![Column::empty(); 2 * l];
    for step in (1..=2 * l as u32).rev() {
        let cells = by_label.remove(&step).unwrap_or_default();
        let (rest, col) = uninsert_column(&cur, &cells)?;
        cols[step as usize - 1] = col;
        cur = rest;
    }
    let pieces = (0..l)
        .map(|k| {
            let (right, left) = (cols[2 * k].clone(), cols[2 * k + 1].clone());
            if shape.has_spin() && k + 1 == l {
                if !left.is_empty() {
                    return Err(Error::Reversal("spin slot received a left column".into()));
                }
                Ok(Piece::spin(right))
            } else {
                Ok(Piece::new(left, right))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let t = OspTableau::new(shape.clone(), pieces);
    t.validate(alphabet).map_err(|e| Error::Reversal(format!("inverse is not a tableau of the shape: {e}")))?;
    Ok(t)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub lhs_terms: usize,
    pub rhs_terms: usize,
    pub kostka: Vec<(Vec<usize>, usize)>,
    pub mismatches: Vec<(Weight, i64, i64)>,
}

impl ExpansionReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares the character with `z^ℓ Σ K_μ s_μ` up to the bound.
pub fn schur_expand(shape: &PShape, alphabet: &Alphabet, degree_bound: usize) -> ExpansionReport {
    let lhs = osp_character(shape, alphabet, degree_bound);
    let kostka = kostka_table(shape, degree_bound);
    let mut rhs = WeightPolynomial::new();
    for (mu, k) in &kostka {
        rhs.add_scaled(&schur(mu, alphabet, degree_bound), *k as i64);
    }
    let rhs = rhs.shift_level(shape.ell as i64);
    let mut mismatches = Vec::new();
    let keys: std::collections::BTreeSet<&Weight> = lhs.terms.keys().chain(rhs.terms.keys()).collect();
    for w in keys {
        let (a, b) = (lhs.coefficient(w), rhs.coefficient(w));
        if a != b {
            mismatches.push((w.clone(), a, b));
        }
    }
    ExpansionReport { lhs_terms: lhs.len(), rhs_terms: rhs.len(), kostka, mismatches }
}

pub fn classical_type(g: GKind) -> ClassicalType {
    if g == GKind::C {
        ClassicalType::C
    } else {
        ClassicalType::B
    }
}

/// Doubled classical coordinates of a weight over `J(m+0)`.
pub fn classical_weight(w: &Weight, g: GKind, m: u32) -> Vec<i64> {
    let unit = if g == GKind::C { 2 } else { 1 };
    (1..=m).map(|k| unit * w.level - 2 * w.get(Letter::bar(k))).collect()
}

/// The character over `J(m+0)` in classical coordinates.
pub fn classical_character(shape: &PShape, m: u32) -> weyl::ClassicalCharacter {
    let alphabet = Alphabet::plus(m, 0);
    let mut out = BTreeMap::new();
    for t in enumerate(shape, &alphabet, usize::MAX) {
        *out.entry(classical_weight(&weight_of(&t), shape.g, m)).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(s: &str) -> Letter {
        s.parse().unwrap()
    }

    #[test]
    fn schur_examples() {
        let a = Alphabet::sup(1, 1);
        let s1 = schur(&[1], &a, 10);
        assert_eq!(s1.len(), 2);
        let s2 = schur(&[2], &a, 10);
        assert_eq!(s2.total(), 2);
        let mut sq = Weight::new(0);
        sq.add_letter(l("1/2"), 2);
        assert_eq!(s2.coefficient(&sq), 0);
        let b = Alphabet::plus(2, 0);
        assert_eq!(schur(&[1, 1], &b, 10).total(), 1);
        assert!(schur(&[1, 1], &b, 1).is_empty());
    }

    #[test]
    fn character_examples() {
        let shape = PShape::new(GKind::C, vec![], 1).unwrap();
        let ch = osp_character(&shape, &Alphabet::plus(1, 0), 10);
        let mut w = Weight::new(1);
        assert_eq!(ch.coefficient(&w), 1);
        w.add_letter(l("b1"), 2);
        assert_eq!(ch.coefficient(&w), 1);
        assert_eq!(ch.total(), 2);
        let shape = PShape::new(GKind::C, vec![1], 1).unwrap();
        assert_eq!(osp_character(&shape, &Alphabet::plus(2, 0), 10).total(), 4);
        assert!(osp_character(&shape, &Alphabet::plus(2, 0), 0).is_empty());
    }

    #[test]
    fn kostka_examples() {
        let shape = PShape::new(GKind::C, vec![], 1).unwrap();
        let q = Tableau::from_rows(&[vec![l("1"), l("1")], vec![l("2"), l("2")]]).unwrap();
        assert!(is_kostka(&q, &shape));
        assert_eq!(kostka_set(&[2, 2], &shape), vec![q]);
        assert!(kostka_set(&[2, 1], &shape).is_empty());
        assert!(is_kostka(&Tableau::empty(), &shape));
    }

    #[test]
    fn psi_examples() {
        let shape = PShape::new(GKind::C, vec![], 1).unwrap();
        let row = Column::new(vec![l("b1")]);
        let t = OspTableau::new(shape.clone(), vec![Piece::new(row.clone(), row)]);
        let (p, q) = psi(&t);
        assert_eq!(p, Tableau::from_rows(&[vec![l("b1"), l("b1")]]).unwrap());
        assert_eq!(q, Tableau::from_columns(vec![vec![l("1"), l("2")]]));
        assert!(is_kostka(&q, &shape));
        let empty = OspTableau::new(shape.clone(), vec![Piece::empty()]);
        let (p, q) = psi(&empty);
        assert!(p.is_empty() && q.is_empty());
    }

    #[test]
    fn psi_round_trip_small() {
        let a = Alphabet::plus(2, 0);
        let shape = PShape::new(GKind::C, vec![1], 1).unwrap();
        for t in enumerate(&shape, &a, 20) {
            let (p, q) = psi(&t);
            assert!(is_kostka(&q, &shape), "{t}: {q}");
            assert_eq!(psi_inverse(&p, &q, &shape, &a).unwrap(), t);
        }
    }

    #[test]
    fn expansion_examples() {
        let shape = PShape::new(GKind::C, vec![], 1).unwrap();
        let r = schur_expand(&shape, &Alphabet::plus(1, 0), 6);
        assert!(r.ok(), "{:?}", r.mismatches);
        let r = schur_expand(&shape, &Alphabet::sup(2, 1), 0);
        assert!(r.ok());
        assert_eq!(r.lhs_terms, 1);
    }

    #[test]
    fn classical_examples() {
        let shape = PShape::new(GKind::C, vec![1], 1).unwrap();
        let ch = classical_character(&shape, 2);
        assert_eq!(ch, weyl::character(ClassicalType::C, &[2, 0]).unwrap());
        let spin = PShape::new(GKind::B, vec![], 1).unwrap();
        assert_eq!(classical_character(&spin, 2), weyl::character(ClassicalType::B, &[1, 1]).unwrap());
    }
}
