//! Columns, skew tableaux in column-major storage, reading words and
//! column insertion with the graded bumping rule.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, Letter};
use crate::error::{Error, Result};

pub type Word = Vec<Letter>;

/// A single column, entries listed top to bottom.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Column(Vec<Letter>);

impl Column {
    pub fn new(entries: Vec<Letter>) -> Column {
        Column(entries)
    }

    pub fn empty() -> Column {
        Column(Vec::new())
    }

    /// Builds a column from any multiset of letters by sorting.
    pub fn sorted(mut entries: Vec<Letter>) -> Column {
        entries.sort();
        Column(entries)
    }

    pub fn entries(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Letter> {
        self.0
    }

    pub fn height(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The `i`-th entry counted from the bottom, starting at 1.
    pub fn from_bottom(&self, i: usize) -> Option<Letter> {
        if i == 0 || i > self.0.len() {
            None
        } else {
            Some(self.0[self.0.len() - i])
        }
    }

    pub fn top(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn is_semistandard(&self) -> bool {
        self.0.windows(2).all(|w| column_step_ok(w[0], w[1]))
    }

    /// The reading word of a column is its entries top to bottom.
    pub fn word(&self) -> Word {
        self.0.clone()
    }

    pub fn push_top(&mut self, a: Letter) {
        self.0.insert(0, a);
    }

    pub fn pop_top(&mut self) -> Option<Letter> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.remove(0))
        }
    }

    pub fn entries_mut(&mut self) -> &mut Vec<Letter> {
        &mut self.0
    }
}

impl fmt::Debug for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// `upper` directly above `lower` in a column.
pub fn column_step_ok(upper: Letter, lower: Letter) -> bool {
    upper < lower || (upper == lower && !upper.is_even())
}

/// `left` directly left of `right` in a row.
pub fn row_step_ok(left: Letter, right: Letter) -> bool {
    left < right || (left == right && left.is_even())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum Shape {
    Partition { rows: Vec<usize> },
    Skew { outer: Vec<usize>, inner: Vec<usize> },
    TwoColumn { a: usize, b: usize, c: usize },
}

impl Shape {
    /// Row lengths of the outer and inner partitions.
    pub fn outer_inner(&self) -> (Vec<usize>, Vec<usize>) {
        match self {
            Shape::Partition { rows } => (rows.clone(), Vec::new()),
            Shape::Skew { outer, inner } => (outer.clone(), inner.clone()),
            Shape::TwoColumn { a, b, c } => {
                let outer = conjugate(&[a + b + c, b + c]);
                let inner = conjugate(&[*b]);
                (outer, inner)
            }
        }
    }

    pub fn size(&self) -> usize {
        let (o, i) = self.outer_inner();
        o.iter().sum::<usize>() - i.iter().sum::<usize>()
    }
}

/// Conjugate of a partition given by its parts (trailing zeros ignored).
pub fn conjugate(parts: &[usize]) -> Vec<usize> {
    let first = parts.first().copied().unwrap_or(0);
    (0..first).map(|j| parts.iter().filter(|&&p| p > j).count()).collect()
}

/// A skew tableau stored by columns. Column `c` occupies rows
/// `tops[c] .. tops[c] + columns[c].len()`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Tableau {
    columns: Vec<Vec<Letter>>,
    tops: Vec<usize>,
}

impl Tableau {
    pub fn empty() -> Tableau {
        Tableau::default()
    }

    /// A tableau of straight shape from its columns, left to right.
    pub fn from_columns(columns: Vec<Vec<Letter>>) -> Tableau {
        let tops = vec![0; columns.len()];
        let mut t = Tableau { columns, tops };
        t.trim();
        t
    }

    pub fn from_skew_columns(columns: Vec<Vec<Letter>>, tops: Vec<usize>) -> Result<Tableau> {
        if columns.len() != tops.len() {
            return Err(Error::InvalidInput("one top offset per column".into()));
        }
        let t = Tableau { columns, tops };
        t.check_skew_shape()?;
        Ok(t)
    }

    /// Straight-shape tableau from rows, top to bottom.
    pub fn from_rows(rows: &[Vec<Letter>]) -> Result<Tableau> {
        let width = rows.first().map_or(0, |r| r.len());
        let mut cols = vec![Vec::new(); width];
        for (r, row) in rows.iter().enumerate() {
            if r > 0 && row.len() > rows[r - 1].len() {
                return Err(Error::InvalidInput("rows must weakly decrease".into()));
            }
            for (c, &x) in row.iter().enumerate() {
                cols[c].push(x);
            }
        }
        Ok(Tableau::from_columns(cols))
    }

    /// Builds a skew tableau from a cell map; cells must form a skew shape.
    pub fn from_cells(cells: &BTreeMap<(usize, usize), Letter>) -> Result<Tableau> {
        let ncols = cells.keys().map(|&(_, c)| c + 1).max().unwrap_or(0);
        let mut columns = vec![Vec::new(); ncols];
        let mut tops = vec![usize::MAX; ncols];
        let mut next = vec![usize::MAX; ncols];
        for (&(r, c), &x) in cells {
            if tops[c] == usize::MAX {
                tops[c] = r;
            } else if next[c] != r {
                return Err(Error::InvalidInput("column cells are not contiguous".into()));
            }
            next[c] = r + 1;
            columns[c].push(x);
        }
        // an empty interior column sits at the bottom of the next nonempty
        // column to its right, which keeps the representation canonical
        let mut below = 0;
        for c in (0..ncols).rev() {
            if tops[c] == usize::MAX {
                tops[c] = below;
            } else {
                below = next[c];
            }
        }
        let t = Tableau { columns, tops };
        t.check_skew_shape()?;
        Ok(t)
    }

    fn check_skew_shape(&self) -> Result<()> {
        let mut prev: Option<(usize, usize)> = None;
        for (col, &top) in self.columns.iter().zip(&self.tops) {
            if col.is_empty() {
                continue;
            }
            let bottom = top + col.len();
            if let Some((t0, b0)) = prev {
                if top > t0 || bottom > b0 {
                    return Err(Error::InvalidInput("cells do not form a skew shape".into()));
                }
            }
            prev = Some((top, bottom));
        }
        Ok(())
    }

    fn trim(&mut self) {
        while self.columns.last().is_some_and(|c| c.is_empty()) {
            self.columns.pop();
            self.tops.pop();
        }
    }

    pub fn columns(&self) -> &[Vec<Letter>] {
        &self.columns
    }

    pub fn tops(&self) -> &[usize] {
        &self.tops
    }

    pub fn column(&self, c: usize) -> Column {
        Column::new(self.columns.get(c).cloned().unwrap_or_default())
    }

    pub fn num_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn is_straight(&self) -> bool {
        self.tops.iter().all(|&t| t == 0)
    }

    pub fn size(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.size() == 0
    }

    pub fn get(&self, row: usize, col: usize) -> Option<Letter> {
        let top = *self.tops.get(col)?;
        if row < top {
            return None;
        }
        self.columns[col].get(row - top).copied()
    }

    pub fn set(&mut self, row: usize, col: usize, x: Letter) {
        let top = self.tops[col];
        self.columns[col][row - top] = x;
    }

    /// Column heights of a straight-shape tableau, i.e. the conjugate shape.
    pub fn column_heights(&self) -> Vec<usize> {
        self.columns.iter().map(|c| c.len()).collect()
    }

    /// Row lengths of the outer shape.
    pub fn outer_rows(&self) -> Vec<usize> {
        let bottoms: Vec<usize> =
            self.columns.iter().zip(&self.tops).map(|(c, &t)| t + c.len()).collect();
        let depth = bottoms.iter().copied().max().unwrap_or(0);
        (0..depth).map(|r| bottoms.iter().filter(|&&b| b > r).count()).collect()
    }

    /// Row lengths of the inner shape.
    pub fn inner_rows(&self) -> Vec<usize> {
        let depth = self.tops.iter().copied().max().unwrap_or(0);
        (0..depth).map(|r| self.tops.iter().filter(|&&t| t > r).count()).collect()
    }

    pub fn shape(&self) -> Shape {
        if self.is_straight() {
            Shape::Partition { rows: self.outer_rows() }
        } else {
            Shape::Skew { outer: self.outer_rows(), inner: self.inner_rows() }
        }
    }

    pub fn cells(&self) -> impl Iterator<Item = ((usize, usize), Letter)> + '_ {
        self.columns.iter().enumerate().flat_map(move |(c, col)| {
            let top = self.tops[c];
            col.iter().enumerate().map(move |(i, &x)| ((top + i, c), x))
        })
    }

    pub fn is_semistandard(&self) -> bool {
        if !self.columns.iter().all(|c| c.windows(2).all(|w| column_step_ok(w[0], w[1]))) {
            return false;
        }
        for c in 1..self.columns.len() {
            let top = self.tops[c];
            for (i, &y) in self.columns[c].iter().enumerate() {
                if let Some(x) = self.get(top + i, c - 1) {
                    if !row_step_ok(x, y) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_semistandard_over(&self, alphabet: &Alphabet) -> Result<bool> {
        if self.columns.iter().flatten().any(|&x| !alphabet.contains(x)) {
            return Err(Error::InvalidInput("entry outside the alphabet".into()));
        }
        Ok(self.is_semistandard())
    }

    /// Columns right to left, each read top to bottom.
    pub fn reading_word(&self) -> Word {
        self.columns.iter().rev().flat_map(|c| c.iter().copied()).collect()
    }

    pub fn reverse_word(&self) -> Word {
        let mut w = self.reading_word();
        w.reverse();
        w
    }

    /// Positions of the reading word, in reading order.
    pub fn reading_positions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.size());
        for c in (0..self.columns.len()).rev() {
            for i in 0..self.columns[c].len() {
                out.push((self.tops[c] + i, c));
            }
        }
        out
    }

    /// Replaces the entries in reading order, keeping the shape.
    pub fn refill(&self, word: &[Letter]) -> Tableau {
        assert_eq!(word.len(), self.size(), "refill needs a word of the same length");
        let mut t = self.clone();
        for (pos, &x) in self.reading_positions().iter().zip(word) {
            t.set(pos.0, pos.1, x);
        }
        t
    }

    /// Letter multiplicities.
    pub fn content(&self) -> BTreeMap<Letter, usize> {
        let mut m = BTreeMap::new();
        for &x in self.columns.iter().flatten() {
            *m.entry(x).or_insert(0) += 1;
        }
        m
    }

    /// Column insertion of one letter into a straight-shape tableau.
    /// Returns the new cell `(row, col)`.
    pub fn insert(&mut self, letter: Letter) -> (usize, usize) {
        debug_assert!(self.is_straight());
        let mut x = letter;
        let mut c = 0;
        loop {
            if c == self.columns.len() {
                self.columns.push(vec![x]);
                self.tops.push(0);
                return (0, c);
            }
            let col = &mut self.columns[c];
            let slot = if x.is_even() {
                col.iter().position(|&y| y >= x)
            } else {
                col.iter().position(|&y| y > x)
            };
            match slot {
                Some(j) => {
                    std::mem::swap(&mut col[j], &mut x);
                    c += 1;
                }
                None => {
                    col.push(x);
                    return (col.len() - 1, c);
                }
            }
        }
    }

    /// Inserts `w_1` first, then `w_2`, and so on. Returns the new cells.
    pub fn insert_word(&mut self, word: &[Letter]) -> Vec<(usize, usize)> {
        word.iter().map(|&x| self.insert(x)).collect()
    }

    /// `(S -> T)`: inserts the reading word of `other` into a copy of `self`.
    pub fn inserted(&self, other_word: &[Letter]) -> Tableau {
        let mut t = self.clone();
        t.insert_word(other_word);
        t
    }

    /// Removes the corner cell `(row, col)` by reverse bumping and returns the
    /// letter that leaves through the first column.
    pub fn reverse_bump(&mut self, row: usize, col: usize) -> Result<Letter> {
        if !self.is_straight() {
            return Err(Error::Reversal("reverse bumping needs a straight shape".into()));
        }
        let h = self.columns.get(col).map_or(0, |c| c.len());
        if h == 0 || row + 1 != h {
            return Err(Error::Reversal(format!("({row},{col}) is not the bottom of its column")));
        }
        if self.columns.get(col + 1).is_some_and(|c| c.len() >= h) {
            return Err(Error::Reversal(format!("({row},{col}) is not a corner")));
        }
        let mut z = self.columns[col].pop().expect("non-empty");
        for c in (0..col).rev() {
            let column = &mut self.columns[c];
            let slot = column
                .iter()
                .rposition(|&y| if y.is_even() { y <= z } else { y < z })
                .ok_or_else(|| Error::Reversal(format!("no entry of column {c} bumps {z}")))?;
            std::mem::swap(&mut column[slot], &mut z);
        }
        self.trim();
        Ok(z)
    }

    /// Rows as vectors, for display.
    pub fn rows(&self) -> Vec<Vec<Option<Letter>>> {
        let outer = self.outer_rows();
        outer
            .iter()
            .enumerate()
            .map(|(r, &len)| (0..len).map(|c| self.get(r, c)).collect())
            .collect()
    }
}

impl fmt::Debug for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_straight() {
            f.debug_list().entries(self.columns.iter()).finish()
        } else {
            f.debug_struct("Tableau").field("columns", &self.columns).field("tops", &self.tops).finish()
        }
    }
}

/// Top to bottom, e.g. `[b2,b1,1/2]`.
impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", body.join(","))
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> =
                row.iter().map(|x| x.map_or(".".to_string(), |l| l.to_string())).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TableauRepr {
    shape: Shape,
    columns: Vec<Vec<Letter>>,
}

impl Serialize for Tableau {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TableauRepr { shape: self.shape(), columns: self.columns.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Tableau {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Tableau, D::Error> {
        let repr = TableauRepr::deserialize(d)?;
        let (_, inner) = repr.shape.outer_inner();
        let inner_cols = conjugate(&inner);
        let tops: Vec<usize> =
            (0..repr.columns.len()).map(|c| inner_cols.get(c).copied().unwrap_or(0)).collect();
        Tableau::from_skew_columns(repr.columns, tops).map_err(serde::de::Error::custom)
    }
}

/// `(w -> T)` starting from the empty tableau.
pub fn insert_from_empty(word: &[Letter]) -> Tableau {
    let mut t = Tableau::empty();
    t.insert_word(word);
    t
}
