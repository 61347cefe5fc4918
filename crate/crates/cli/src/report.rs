//! Command output in JSON or CSV.
//!
//! CSV is a long table with header `field,row,col,re,im`: scalars leave
//! `row` and `col` empty, lists fill `row`, matrices fill both. Real values
//! have `im = 0`.

use std::fmt::Write;

use covchan_core::io;
use covchan_core::CMatrix;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

pub struct Report {
    pub json: String,
    pub table: Table,
    pub exit_code: u8,
}

impl Report {
    pub fn new<T: Serialize>(value: &T, table: Table) -> Self {
        Self {
            json: io::to_json(value),
            table,
            exit_code: 0,
        }
    }

    pub fn failing_if(mut self, failed: bool) -> Self {
        if failed {
            self.exit_code = 1;
        }
        self
    }
}

type Row = (String, Option<usize>, Option<usize>, f64, f64);

#[derive(Default)]
pub struct Table {
    rows: Vec<Row>,
}

impl Table {
    pub fn scalar(&mut self, field: &str, x: f64) {
        self.rows.push((field.into(), None, None, x, 0.0));
    }

    pub fn list(&mut self, field: &str, xs: &[f64]) {
        for (i, &x) in xs.iter().enumerate() {
            self.rows.push((field.into(), Some(i), None, x, 0.0));
        }
    }

    pub fn complex_list(&mut self, field: &str, zs: &[Complex64]) {
        for (i, z) in zs.iter().enumerate() {
            self.rows.push((field.into(), Some(i), None, z.re, z.im));
        }
    }

    pub fn matrix(&mut self, field: &str, m: &CMatrix) {
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                self.rows.push((field.into(), Some(i), Some(j), z.re, z.im));
            }
        }
    }

    pub fn real_matrix(&mut self, field: &str, m: &DMatrix<f64>) {
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                self.rows
                    .push((field.into(), Some(i), Some(j), m[(i, j)], 0.0));
            }
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("field,row,col,re,im\n");
        let idx = |k: Option<usize>| k.map(|k| k.to_string()).unwrap_or_default();
        for (field, row, col, re, im) in &self.rows {
            let _ = writeln!(out, "{field},{},{},{re:?},{im:?}", idx(*row), idx(*col));
        }
        out
    }
}
