//! Sign sequences, k-signatures, the word operators `r_k` and `rho_k`, the
//! column R-matrix and the signature of a column pair.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::alphabet::Letter;
use crate::error::{Error, Result};
use crate::tableau::{Column, Tableau, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
    Dot,
}

/// Cancels every `(+, -)` pair separated only by dots, repeatedly.
pub fn reduce(signs: &[Sign]) -> Vec<Sign> {
    let mut out = signs.to_vec();
    let mut open: Vec<usize> = Vec::new();
    for j in 0..out.len() {
        match out[j] {
            Sign::Plus => open.push(j),
            Sign::Minus => {
                if let Some(i) = open.pop() {
                    out[i] = Sign::Dot;
                    out[j] = Sign::Dot;
                }
            }
            Sign::Dot => {}
        }
    }
    out
}

/// `(a, b)`: surviving minus and plus counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub minus: usize,
    pub plus: usize,
}

impl Signature {
    pub fn new(minus: usize, plus: usize) -> Signature {
        Signature { minus, plus }
    }

    pub fn pair(self) -> (usize, usize) {
        (self.minus, self.plus)
    }
}

fn signs_for(word: &[Letter], lo: Letter, hi: Letter) -> Vec<Sign> {
    word.iter()
        .map(|&x| {
            if x == lo {
                Sign::Plus
            } else if x == hi {
                Sign::Minus
            } else {
                Sign::Dot
            }
        })
        .collect()
}

/// Signature with `+` on `lo` and `-` on `hi`.
pub fn signature_of(word: &[Letter], lo: Letter, hi: Letter) -> Signature {
    let red = reduce(&signs_for(word, lo, hi));
    Signature {
        minus: red.iter().filter(|&&s| s == Sign::Minus).count(),
        plus: red.iter().filter(|&&s| s == Sign::Plus).count(),
    }
}

pub fn k_signature(word: &[Letter], k: u32) -> Signature {
    signature_of(word, Letter::int(k), Letter::int(k + 1))
}

/// Positions of the surviving signs after reduction.
fn survivors(word: &[Letter], lo: Letter, hi: Letter) -> (Vec<usize>, Vec<usize>) {
    let red = reduce(&signs_for(word, lo, hi));
    let minus = (0..red.len()).filter(|&j| red[j] == Sign::Minus).collect();
    let plus = (0..red.len()).filter(|&j| red[j] == Sign::Plus).collect();
    (minus, plus)
}

pub fn apply_r(word: &[Letter], lo: Letter, hi: Letter) -> Word {
    let (minus, plus) = survivors(word, lo, hi);
    let mut out = word.to_vec();
    let (a, b) = (minus.len(), plus.len());
    if a <= b {
        for &j in &plus[..b - a] {
            out[j] = hi;
        }
    } else {
        for &j in &minus[b..] {
            out[j] = lo;
        }
    }
    out
}

pub fn apply_rho(word: &[Letter], lo: Letter, hi: Letter) -> Word {
    let (minus, _) = survivors(word, lo, hi);
    let mut out = word.to_vec();
    for j in minus {
        out[j] = lo;
    }
    out
}

pub fn apply_r_k(word: &[Letter], k: u32) -> Word {
    apply_r(word, Letter::int(k), Letter::int(k + 1))
}

pub fn apply_rho_k(word: &[Letter], k: u32) -> Word {
    apply_rho(word, Letter::int(k), Letter::int(k + 1))
}

/// `r_k` on a tableau through its reading word.
pub fn tableau_r_k(t: &Tableau, k: u32) -> Tableau {
    t.refill(&apply_r_k(&t.reading_word(), k))
}

pub fn tableau_rho_k(t: &Tableau, k: u32) -> Tableau {
    t.refill(&apply_rho_k(&t.reading_word(), k))
}

pub fn tableau_k_signature(t: &Tableau, k: u32) -> Signature {
    k_signature(&t.reading_word(), k)
}

/// The column R-matrix: `R(S, T) = (T#, S#)` with `ht(T#) = ht(T)`.
pub fn r_matrix(s: &Column, t: &Column) -> Result<(Column, Column)> {
    let k = s.height();
    let l = t.height();
    if k < l {
        return Err(Error::Precondition(format!("R-matrix needs ht(S) = {k} >= ht(T) = {l}")));
    }
    let entries = s.entries();
    let mut taken = vec![false; k];
    for u in 1..=l {
        let tu = t.from_bottom(u).expect("in range");
        let fits = |y: Letter| if tu.is_even() { y <= tu } else { y < tu };
        // scan from the bottom so the first maximum found sits lowest
        let mut best: Option<usize> = None;
        for j in (0..k).rev() {
            if !taken[j] && fits(entries[j]) && best.is_none_or(|b| entries[j] > entries[b]) {
                best = Some(j);
            }
        }
        if best.is_none() {
            for j in (0..k).rev() {
                if !taken[j] && best.is_none_or(|b| entries[j] > entries[b]) {
                    best = Some(j);
                }
            }
        }
        taken[best.expect("ht(S) >= ht(T)")] = true;
    }
    let picked: Vec<Letter> = (0..k).filter(|&j| taken[j]).map(|j| entries[j]).collect();
    let mut rest: Vec<Letter> = (0..k).filter(|&j| !taken[j]).map(|j| entries[j]).collect();
    rest.extend_from_slice(t.entries());
    Ok((Column::sorted(picked), Column::sorted(rest)))
}

/// `P(S1, S2; U) = (S1 -> (S2 -> U))` with its recording tableau over `{k, k+1}`.
pub fn recording_pair(s1: &Column, s2: &Column, u: &Tableau, k: u32) -> (Tableau, Tableau) {
    let mut p = u.clone();
    let mut cells = BTreeMap::new();
    for (r, c) in p.insert_word(s2.entries()) {
        cells.insert((c, r), Letter::int(k));
    }
    for (r, c) in p.insert_word(s1.entries()) {
        cells.insert((c, r), Letter::int(k + 1));
    }
    let q = Tableau::from_cells(&cells).expect("recording cells form a skew shape");
    (p, q)
}

pub fn pair_signature(s1: &Column, s2: &Column) -> Signature {
    let (_, q) = recording_pair(s1, s2, &Tableau::empty(), 1);
    tableau_k_signature(&q, 1)
}

/// Undoes insertions whose new cells are listed in insertion order.
pub fn inverse_insertion(p: &Tableau, cells: &[(usize, usize)]) -> Result<Word> {
    let mut t = p.clone();
    let mut out = Vec::with_capacity(cells.len());
    for &(r, c) in cells.iter().rev() {
        out.push(t.reverse_bump(r, c)?);
    }
    out.reverse();
    Ok(out)
}

/// Undoes the insertion of one column word whose new cells are `cells`
/// (any order). Cells are removed bottom row first; the recovered column is
/// checked by re-insertion.
pub fn uninsert_column(p: &Tableau, cells: &[(usize, usize)]) -> Result<(Tableau, Column)> {
    let mut sorted = cells.to_vec();
    sorted.sort_by(|x, y| y.0.cmp(&x.0).then(y.1.cmp(&x.1)));
    let mut t = p.clone();
    let mut letters = Vec::with_capacity(sorted.len());
    for (r, c) in sorted {
        letters.push(t.reverse_bump(r, c)?);
    }
    letters.reverse();
    let column = Column::new(letters);
    if !column.is_semistandard() || t.inserted(column.entries()) != *p {
        return Err(Error::Reversal("recovered letters do not form the inserted column".into()));
    }
    Ok((t, column))
}

/// Inverse of [`recording_pair`]: recovers `(S1, S2, U)` from `(P, Q)`.
pub fn invert_recording(p: &Tableau, q: &Tableau, k: u32) -> Result<(Column, Column, Tableau)> {
    let mut hi_cells = Vec::new();
    let mut lo_cells = Vec::new();
    for ((r, c), x) in q.cells() {
        if x == Letter::int(k + 1) {
            hi_cells.push((c, r));
        } else if x == Letter::int(k) {
            lo_cells.push((c, r));
        } else {
            return Err(Error::Reversal(format!("label {x} outside {{{k}, {}}}", k + 1)));
        }
    }
    let (t, s1) = uninsert_column(p, &hi_cells)?;
    let (u, s2) = uninsert_column(&t, &lo_cells)?;
    Ok((s1, s2, u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use Sign::*;

    fn n(xs: &[u32]) -> Word {
        xs.iter().map(|&k| Letter::int(k)).collect()
    }
    fn col(s: &str) -> Column {
        Column::new(s.split_whitespace().map(|x| x.parse().unwrap()).collect())
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce(&[Plus, Minus, Plus, Dot, Minus]), vec![Dot; 5]);
        assert_eq!(reduce(&[Dot, Dot]), vec![Dot, Dot]);
        assert_eq!(reduce(&[Minus, Minus, Plus]), vec![Minus, Minus, Plus]);
    }

    #[test]
    fn k_signature_examples() {
        assert_eq!(k_signature(&n(&[1, 2, 2, 1, 1]), 1).pair(), (1, 2));
        assert_eq!(k_signature(&n(&[3, 4, 5]), 1).pair(), (0, 0));
    }

    #[test]
    fn r_and_rho_examples() {
        let w = n(&[1, 2, 2, 1, 1]);
        let r = apply_r_k(&w, 1);
        assert_eq!(r, n(&[1, 2, 2, 2, 1]));
        assert_eq!(k_signature(&r, 1).pair(), (2, 1));
        let rho = apply_rho_k(&w, 1);
        assert_eq!(rho, n(&[1, 2, 1, 1, 1]));
        assert_eq!(k_signature(&rho, 1).pair(), (0, 3));
        let balanced = n(&[2, 1]);
        assert_eq!(apply_r_k(&balanced, 1), balanced);
    }

    #[test]
    fn r_is_an_involution_exhaustively() {
        let letters = [1, 2, 3];
        for len in 0..=8u32 {
            for code in 0..3usize.pow(len) {
                let mut c = code;
                let w: Vec<u32> = (0..len)
                    .map(|_| {
                        let x = letters[c % 3];
                        c /= 3;
                        x
                    })
                    .collect();
                let w = n(&w);
                assert_eq!(apply_r_k(&apply_r_k(&w, 1), 1), w);
                let s = k_signature(&w, 1);
                if s.plus == 0 {
                    assert_eq!(apply_rho_k(&w, 1), apply_r_k(&w, 1));
                }
            }
        }
    }

    #[test]
    fn r_matrix_examples() {
        let s = col("b4 b3 b2 b1 1/2 3/2 3/2 5/2");
        let t = col("b3 b1 5/2");
        let (tt, ss) = r_matrix(&s, &t).unwrap();
        assert_eq!(tt, col("b3 b1 3/2"));
        assert_eq!(ss, col("b4 b3 b2 b1 1/2 3/2 5/2 5/2"));
        assert_eq!(r_matrix(&s, &Column::empty()).unwrap(), (Column::empty(), s.clone()));
        assert_eq!(r_matrix(&col("1 2"), &col("1")).unwrap(), (col("1"), col("1 2")));
        assert!(r_matrix(&t, &s).is_err());
    }

    #[test]
    fn recording_pair_small() {
        let (p, q) = recording_pair(&col("1"), &col("1 2"), &Tableau::empty(), 3);
        assert_eq!(p, Tableau::from_columns(vec![n(&[1, 2]), n(&[1])]));
        assert_eq!(q.content().get(&Letter::int(3)), Some(&2));
        assert_eq!(q.content().get(&Letter::int(4)), Some(&1));
        assert!(q.is_semistandard());
        assert_eq!(tableau_k_signature(&q, 3).pair(), (0, 1));
        let (p2, q2) = recording_pair(&Column::empty(), &col("1 2"), &Tableau::empty(), 1);
        assert_eq!(p2, Tableau::from_columns(vec![n(&[1, 2])]));
        assert!(q2.cells().all(|(_, x)| x == Letter::int(1)));
    }

    #[test]
    fn pair_signatures_of_example_pieces() {
        let s_left = col("b4 b3 b1 1/2 1/2");
        let s_right = col("b3 b2 3/2");
        assert_eq!(pair_signature(&s_left, &s_right).pair(), (2, 0));
        let t_left = col("b3 b1 1/2 3/2 3/2 5/2");
        let t_right = col("b4 b3 b2 b1 5/2");
        assert_eq!(pair_signature(&t_left, &t_right).pair(), (3, 2));
        assert_eq!(pair_signature(&Column::empty(), &col("b2 1/2")).pair(), (0, 2));
    }

    #[test]
    fn recording_round_trip() {
        let s1 = col("b4 b3 b1 1/2 1/2");
        let s2 = col("b3 b2 3/2");
        let u = Tableau::from_columns(vec![vec!["b2".parse().unwrap(), "1/2".parse().unwrap()]]);
        let (p, q) = recording_pair(&s1, &s2, &u, 1);
        let (a, b, back) = invert_recording(&p, &q, 1).unwrap();
        assert_eq!((a, b, back), (s1, s2, u));
        assert_eq!(inverse_insertion(&Tableau::empty(), &[]).unwrap(), Word::new());
    }
}
