use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A group given by its operations; `contains` tells whether a value of the
/// shared element type belongs to this group.
pub trait Group<E> {
    fn mul(&self, a: &E, b: &E) -> E;
    fn inv(&self, a: &E) -> E;
    fn identity(&self) -> E;
    fn contains(&self, a: &E) -> bool;
    fn name(&self, a: &E) -> String;
    fn parse(&self, s: &str) -> Option<E>;

    fn is_identity(&self, a: &E) -> bool
    where
        E: PartialEq,
    {
        *a == self.identity()
    }
}

/// A finite group by multiplication table; elements are row indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    pub name: String,
    pub elements: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

#[derive(Deserialize, Serialize)]
struct TableJson {
    #[serde(default)]
    name: String,
    elements: Vec<String>,
    table: Vec<Vec<serde_json::Value>>,
}

impl FiniteGroup {
    pub fn from_table(name: &str, elements: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = elements.len();
        let bad = |m: &str| Err(Error::BadInput(format!("group {name}: {m}")));
        if n == 0 || table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return bad("table must be n x n with entries below n");
        }
        if elements.iter().collect::<BTreeSet<_>>().len() != n {
            return bad("element names must be distinct");
        }
        let Some(identity) = (0..n).find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x)) else {
            return bad("no identity");
        };
        let mut inverse = Vec::with_capacity(n);
        for x in 0..n {
            match (0..n).find(|&y| table[x][y] == identity && table[y][x] == identity) {
                Some(y) => inverse.push(y),
                None => return bad(&format!("{} has no inverse", elements[x])),
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return bad("not associative");
                    }
                }
            }
        }
        Ok(FiniteGroup { name: name.to_string(), elements, table, identity, inverse })
    }

    /// `{"name", "elements", "table"}`; entries are names or indices.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let raw: TableJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let index = |x: &serde_json::Value| -> Result<usize> {
            match x {
                serde_json::Value::Number(k) => k.as_u64().map(|k| k as usize),
                serde_json::Value::String(s) => raw.elements.iter().position(|e| e == s),
                _ => None,
            }
            .ok_or_else(|| Error::BadInput(format!("unknown table entry {x}")))
        };
        let table = raw.table.iter().map(|r| r.iter().map(index).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        FiniteGroup::from_table(&raw.name, raw.elements.clone(), table)
    }

    pub fn cyclic(n: usize) -> Self {
        let elements = (0..n).map(|k| k.to_string()).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_table(&format!("Z{n}"), elements, table).unwrap()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }
}

impl Group<usize> for FiniteGroup {
    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.table[*a][*b]
    }
    fn inv(&self, a: &usize) -> usize {
        self.inverse[*a]
    }
    fn identity(&self) -> usize {
        self.identity
    }
    fn contains(&self, a: &usize) -> bool {
        *a < self.elements.len()
    }
    fn name(&self, a: &usize) -> String {
        self.elements.get(*a).cloned().unwrap_or_else(|| format!("#{a}"))
    }
    fn parse(&self, s: &str) -> Option<usize> {
        self.index_of(s)
    }
}

pub type Mat2 = [[i64; 2]; 2];

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

/// Inverse of a determinant-one integer matrix.
pub fn mat_inv(a: &Mat2) -> Mat2 {
    [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]]
}

/// Finite subgroup of `SL2(Z)` spanned by the given generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixGroup {
    pub elements: Vec<Mat2>,
}

impl MatrixGroup {
    pub fn generated_by(gens: &[Mat2], cap: usize) -> Result<Self> {
        let id = [[1, 0], [0, 1]];
        let mut elements = vec![id];
        let mut i = 0;
        while i < elements.len() {
            for g in gens {
                let p = mat_mul(&elements[i], g);
                if !elements.contains(&p) {
                    if elements.len() == cap {
                        return Err(Error::BadInput(format!("generated group exceeds {cap} elements")));
                    }
                    elements.push(p);
                }
            }
            i += 1;
        }
        Ok(MatrixGroup { elements })
    }
}

impl Group<Mat2> for MatrixGroup {
    fn mul(&self, a: &Mat2, b: &Mat2) -> Mat2 {
        mat_mul(a, b)
    }
    fn inv(&self, a: &Mat2) -> Mat2 {
        mat_inv(a)
    }
    fn identity(&self) -> Mat2 {
        [[1, 0], [0, 1]]
    }
    fn contains(&self, a: &Mat2) -> bool {
        self.elements.contains(a)
    }
    fn name(&self, a: &Mat2) -> String {
        format!("[[{},{}],[{},{}]]", a[0][0], a[0][1], a[1][0], a[1][1])
    }
    fn parse(&self, s: &str) -> Option<Mat2> {
        let v: Vec<Vec<i64>> = serde_json::from_str(s).ok()?;
        let m = [[*v.first()?.first()?, *v[0].get(1)?], [*v.get(1)?.first()?, *v[1].get(1)?]];
        self.contains(&m).then_some(m)
    }
}
