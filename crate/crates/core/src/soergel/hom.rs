//! Graded morphism spaces between free bimodules.
//!
//! A map is fixed by its values on bimodule generators of the source. The
//! other basis vectors are rewritten through the left action, and the
//! remaining left-linearity conditions form a finite linear system over the
//! monomial coefficients of the unknown values.

use std::collections::{BTreeMap, HashMap};

use crate::invpoly::{mono_mul, monomials, Mono, Poly};
use crate::linalg::{Matrix, RowBasis};
use crate::numeric::{FieldDescriptor, Scalar};

use super::bimodule::FreeBimodule;
use super::polymatrix::PolyMatrix;

/// Coordinates of a graded piece N^d: pairs (basis index j, monomial x^m) with deg e_j + 2|m| = d.
struct Piece {
    coords: Vec<(usize, Mono)>,
    index: HashMap<(usize, Mono), usize>,
}

struct Pieces<'a> {
    module: &'a FreeBimodule,
    cache: HashMap<i32, Piece>,
}

impl<'a> Pieces<'a> {
    fn new(module: &'a FreeBimodule) -> Self {
        Pieces { module, cache: HashMap::new() }
    }

    fn get(&mut self, d: i32) -> &Piece {
        let module = self.module;
        self.cache.entry(d).or_insert_with(|| {
            let mut coords = Vec::new();
            for (j, &dj) in module.degrees().iter().enumerate() {
                let diff = d - dj;
                if diff >= 0 && diff % 2 == 0 {
                    for m in monomials(module.nvars(), (diff / 2) as u32) {
                        coords.push((j, m));
                    }
                }
            }
            let index = coords.iter().enumerate().map(|(i, c)| (*c, i)).collect();
            Piece { coords, index }
        })
    }
}

/// Sparse linear combination of unknowns.
type Row = Vec<(u32, Scalar)>;

fn row_axpy(acc: &mut Row, c: &Scalar, x: &Row) {
    if c.is_zero() || x.is_empty() {
        return;
    }
    let mut out = Vec::with_capacity(acc.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < acc.len() || j < x.len() {
        if j == x.len() || (i < acc.len() && acc[i].0 < x[j].0) {
            out.push(acc[i].clone());
            i += 1;
        } else if i == acc.len() || x[j].0 < acc[i].0 {
            out.push((x[j].0, c * &x[j].1));
            j += 1;
        } else {
            let v = &acc[i].1 + &(c * &x[j].1);
            if !v.is_zero() {
                out.push((acc[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    *acc = out;
}

/// Symbolic element of a graded piece: one row of unknown-coefficients per coordinate.
#[derive(Clone)]
struct Sym {
    degree: i32,
    rows: Vec<Row>,
}

struct Engine<'a> {
    tgt: &'a FreeBimodule,
    pieces: Pieces<'a>,
    field: &'static FieldDescriptor,
}

impl<'a> Engine<'a> {
    fn zero(&mut self, d: i32) -> Sym {
        let n = self.pieces.get(d).coords.len();
        Sym { degree: d, rows: vec![Vec::new(); n] }
    }

    /// x_v · s.
    fn left_mult(&mut self, v: usize, s: &Sym) -> Sym {
        let mut out = self.zero(s.degree + 2);
        let src = self.pieces.get(s.degree).coords.clone();
        let tgt = self.tgt;
        let a = tgt.left(v);
        let piece = self.pieces.get(s.degree + 2);
        for (r, (j, m)) in src.iter().enumerate() {
            if s.rows[r].is_empty() {
                continue;
            }
            for i in 0..tgt.rank() {
                for (mm, c) in a.get(i, *j).terms() {
                    let idx = piece.index[&(i, mono_mul(m, mm))];
                    row_axpy(&mut out.rows[idx], c, &s.rows[r]);
                }
            }
        }
        out
    }

    /// s · p for a homogeneous polynomial p of degree k: lands in degree + 2k.
    fn right_mult(&mut self, s: &Sym, p: &Poly, acc: &mut Sym, sign: &Scalar) {
        let src = self.pieces.get(s.degree).coords.clone();
        let piece = self.pieces.get(acc.degree);
        for (r, (j, m)) in src.iter().enumerate() {
            if s.rows[r].is_empty() {
                continue;
            }
            for (mm, c) in p.terms() {
                let idx = piece.index[&(*j, mono_mul(m, mm))];
                let cc = sign * c;
                row_axpy(&mut acc.rows[idx], &cc, &s.rows[r]);
            }
        }
    }

    fn add_scaled(&self, acc: &mut Sym, c: &Scalar, s: &Sym) {
        assert_eq!(acc.degree, s.degree);
        for (a, b) in acc.rows.iter_mut().zip(&s.rows) {
            row_axpy(a, c, b);
        }
    }

    fn densify(&self, row: &Row, u: usize) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); u];
        for (i, c) in row {
            v[*i as usize] = c.clone();
        }
        v
    }
}

/// Generators of the source and the rewriting of the other basis vectors.
struct Presentation {
    generators: Vec<usize>,
    /// For a non-generator i: (coefficients c_{v,j} of x_v·e_j, coefficients of generators of equal degree).
    rewrite: HashMap<usize, (Vec<(usize, usize, Scalar)>, Vec<(usize, Scalar)>)>,
    order: Vec<usize>,
}

fn presentation(src: &FreeBimodule) -> Presentation {
    let f = src.sys().field();
    let nv = src.nvars();
    let deg = src.degrees();
    let mut levels: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (i, &d) in deg.iter().enumerate() {
        levels.entry(d).or_default().push(i);
    }
    let reduced: Vec<Matrix> = (0..nv).map(|v| src.left(v).constant_part()).collect();
    let mut generators = Vec::new();
    let mut rewrite = HashMap::new();
    let mut order = Vec::new();
    for (&d, here) in &levels {
        let pos: HashMap<usize, usize> = here.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let below = levels.get(&(d - 2)).cloned().unwrap_or_default();
        let mut images: Vec<(usize, usize, Vec<Scalar>)> = Vec::new();
        for v in 0..nv {
            for &j in &below {
                let col: Vec<Scalar> = here.iter().map(|&i| reduced[v][(i, j)].clone()).collect();
                if col.iter().any(|x| !x.is_zero()) {
                    images.push((v, j, col));
                }
            }
        }
        let mut span = RowBasis::new(f, here.len());
        for (_, _, c) in &images {
            span.insert(c);
        }
        let mut gens_here = Vec::new();
        for &i in here {
            let mut unit = vec![f.zero(); here.len()];
            unit[pos[&i]] = f.one();
            if span.insert(&unit) {
                gens_here.push(i);
            }
        }
        let non: Vec<usize> = here.iter().copied().filter(|i| !gens_here.contains(i)).collect();
        if !non.is_empty() {
            let mut cols: Vec<Vec<Scalar>> = images.iter().map(|(_, _, c)| c.clone()).collect();
            for &g in &gens_here {
                let mut unit = vec![f.zero(); here.len()];
                unit[pos[&g]] = f.one();
                cols.push(unit);
            }
            let a = Matrix::from_columns(f, here.len(), &cols);
            let rhs: Vec<Vec<Scalar>> = non
                .iter()
                .map(|&i| {
                    let mut unit = vec![f.zero(); here.len()];
                    unit[pos[&i]] = f.one();
                    unit
                })
                .collect();
            let b = Matrix::from_columns(f, here.len(), &rhs);
            let x = a.solve(&b).expect("generators and images span the reduction");
            for (k, &i) in non.iter().enumerate() {
                let mut lin = Vec::new();
                for (r, (v, j, _)) in images.iter().enumerate() {
                    let c = x[(r, k)].clone();
                    if !c.is_zero() {
                        lin.push((*v, *j, c));
                    }
                }
                let mut gc = Vec::new();
                for (r, &g) in gens_here.iter().enumerate() {
                    let c = x[(images.len() + r, k)].clone();
                    if !c.is_zero() {
                        gc.push((g, c));
                    }
                }
                rewrite.insert(i, (lin, gc));
            }
        }
        order.extend(gens_here.iter().copied());
        order.extend(non.iter().copied());
        generators.extend(gens_here);
    }
    Presentation { generators, rewrite, order }
}

/// Number of bimodule generators of M, i.e. dim of ℝ ⊗_R M ⊗_R ℝ.
pub fn generator_count(m: &FreeBimodule) -> usize {
    presentation(m).generators.len()
}

/// Basis of the degree-k bimodule maps src → tgt (sending src^i into tgt^{i+k}), as tgt×src matrices.
pub fn hom_space(src: &FreeBimodule, tgt: &FreeBimodule, k: i32) -> Vec<PolyMatrix> {
    let f = src.sys().field();
    let nv = src.nvars();
    let pres = presentation(src);
    let mut eng = Engine { tgt, pieces: Pieces::new(tgt), field: f };
    // unknowns: one per coordinate of tgt^{deg g + k} for each generator g
    let mut u = 0u32;
    let mut values: HashMap<usize, Sym> = HashMap::new();
    for &g in &pres.generators {
        let d = src.degrees()[g] + k;
        let n = eng.pieces.get(d).coords.len();
        let rows = (0..n).map(|r| vec![(u + r as u32, f.one())]).collect();
        u += n as u32;
        values.insert(g, Sym { degree: d, rows });
    }
    let u = u as usize;
    if u == 0 {
        return Vec::new();
    }
    let deg = src.degrees();
    for &i in &pres.order {
        if values.contains_key(&i) {
            continue;
        }
        let (lin, gc) = &pres.rewrite[&i];
        let d = deg[i] + k;
        let mut acc = eng.zero(d);
        for (g, c) in gc {
            let gv = values[g].clone();
            eng.add_scaled(&mut acc, c, &gv);
        }
        for (v, j, c) in lin {
            let xv = eng.left_mult(*v, &values[j].clone());
            eng.add_scaled(&mut acc, c, &xv);
            // subtract c·Σ_{deg l < deg i} φ(e_l)·A_v[l][j]
            let a = src.left(*v);
            for l in 0..src.rank() {
                if deg[l] >= deg[i] {
                    continue;
                }
                let p = a.get(l, *j);
                if p.is_zero() {
                    continue;
                }
                let vl = values[&l].clone();
                eng.right_mult(&vl, p, &mut acc, &(-c));
            }
        }
        values.insert(i, acc);
    }
    // left-linearity constraints
    let mut constraints = RowBasis::new(f, u);
    'outer: for v in 0..nv {
        let a = src.left(v);
        for j in 0..src.rank() {
            let mut res = eng.left_mult(v, &values[&j].clone());
            for l in 0..src.rank() {
                let p = a.get(l, j);
                if p.is_zero() {
                    continue;
                }
                let vl = values[&l].clone();
                eng.right_mult(&vl, p, &mut res, &f.from_int(-1));
            }
            for row in &res.rows {
                if !row.is_empty() {
                    constraints.insert(&eng.densify(row, u));
                    if constraints.dim() == u {
                        break 'outer;
                    }
                }
            }
        }
    }
    let kernel = constraints.annihilator();
    let mut out = Vec::with_capacity(kernel.cols());
    for c in 0..kernel.cols() {
        let z = kernel.column(c);
        let mut m = PolyMatrix::zeros(f, nv, tgt.rank(), src.rank());
        for i in 0..src.rank() {
            let sym = &values[&i];
            let coords = eng.pieces.get(sym.degree).coords.clone();
            let mut entries: Vec<BTreeMap<Mono, Scalar>> = vec![BTreeMap::new(); tgt.rank()];
            for (r, (a, mono)) in coords.iter().enumerate() {
                let mut val = f.zero();
                for (idx, coef) in &sym.rows[r] {
                    let zi = &z[*idx as usize];
                    if !zi.is_zero() {
                        val = &val + &(coef * zi);
                    }
                }
                if !val.is_zero() {
                    entries[*a].insert(*mono, val);
                }
            }
            for (a, e) in entries.into_iter().enumerate() {
                if !e.is_empty() {
                    m.set(a, i, Poly::from_map(f, nv, e));
                }
            }
        }
        out.push(m);
    }
    out
}

/// Flattened coordinates of polynomial matrices, for linear algebra on spaces of maps.
pub struct MapSpace {
    basis: Vec<PolyMatrix>,
    keys: Vec<(usize, usize, Mono)>,
    key_index: HashMap<(usize, usize, Mono), usize>,
    matrix: Matrix,
}

impl MapSpace {
    /// Requires the given maps to be linearly independent.
    pub fn new(field: &'static FieldDescriptor, basis: Vec<PolyMatrix>) -> Self {
        let mut keyset = std::collections::BTreeSet::new();
        for m in &basis {
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    for (mono, _) in m.get(r, c).terms() {
                        keyset.insert((r, c, *mono));
                    }
                }
            }
        }
        let keys: Vec<(usize, usize, Mono)> = keyset.into_iter().collect();
        let key_index: HashMap<_, _> = keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let cols: Vec<Vec<Scalar>> = basis.iter().map(|m| flatten(m, &keys)).collect();
        let matrix = Matrix::from_columns(field, keys.len(), &cols);
        assert_eq!(matrix.rank(), basis.len(), "MapSpace basis is linearly dependent");
        MapSpace { basis, keys, key_index, matrix }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[PolyMatrix] {
        &self.basis
    }

    /// Coordinates of m in the basis, if m lies in the span.
    pub fn coords(&self, m: &PolyMatrix) -> Option<Vec<Scalar>> {
        let f = m.field();
        if self.basis.is_empty() {
            return m.is_zero().then(Vec::new);
        }
        let mut vec = vec![f.zero(); self.keys.len()];
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                for (mono, x) in m.get(r, c).terms() {
                    vec[*self.key_index.get(&(r, c, *mono))?] = x.clone();
                }
            }
        }
        let rhs = Matrix::from_columns(f, self.keys.len(), &[vec]);
        Some(self.matrix.solve(&rhs)?.column(0))
    }

    pub fn combine(&self, c: &[Scalar]) -> PolyMatrix {
        let mut out = self.basis[0].scale(&c[0]);
        for (b, x) in self.basis.iter().zip(c).skip(1) {
            if !x.is_zero() {
                out = out.add(&b.scale(x));
            }
        }
        out
    }
}

fn flatten(m: &PolyMatrix, keys: &[(usize, usize, Mono)]) -> Vec<Scalar> {
    keys.iter().map(|(r, c, mono)| m.get(*r, *c).coeff(mono)).collect()
}
