//! Dense exact linear algebra over a finite field.
//!
//! Sized for the windowed Čech complexes: a few hundred to a few thousand
//! unknowns, plain Gaussian elimination.

use crate::field::{Field, FieldElement};
use crate::ring::Ring;

/// A dense matrix over `F_q`, row-major.
#[derive(Clone, Debug)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![FieldElement::default(); rows * cols],
        }
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.data[r * self.cols + c] = v;
    }

    /// Reduces in place to row echelon form; returns the pivot columns.
    pub fn row_echelon(&mut self, field: &Field) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pivot_row) = (row..self.rows).find(|&r| !field.is_zero(&self.get(r, col)))
            else {
                continue;
            };
            if pivot_row != row {
                for c in 0..self.cols {
                    let tmp = self.get(row, c);
                    self.set(row, c, self.get(pivot_row, c));
                    self.set(pivot_row, c, tmp);
                }
            }
            let inv = field
                .inv(&self.get(row, col))
                .expect("pivot is nonzero by construction");
            for c in col..self.cols {
                let v = field.mul(&self.get(row, c), &inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col);
                if field.is_zero(&factor) {
                    continue;
                }
                for c in col..self.cols {
                    let v = field.sub(&self.get(r, c), &field.mul(&factor, &self.get(row, c)));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(mut self, field: &Field) -> usize {
        self.row_echelon(field).len()
    }
}
