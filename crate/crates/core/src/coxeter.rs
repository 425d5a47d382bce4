//! Coxeter systems, their reflection representations, and enumerated Bruhat ideals.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::linalg::Matrix;
use crate::numeric::{field_create, FieldDescriptor, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoxeterError {
    #[error("invalid Coxeter matrix: {0}")]
    InvalidMatrix(String),
    #[error("the coroots are linearly dependent in the geometric representation; use rep_choice=doubled")]
    DependentCoroots,
    #[error("letter {0} is not a generator")]
    BadLetter(usize),
    #[error("rho is not dominant: rho(coroot of generator {0}) <= 0")]
    NotDominant(usize),
    #[error("rho has {got} coordinates, expected {expected}")]
    RhoDimension { got: usize, expected: usize },
    #[error("representation is not faithful on the enumerated ideal: {0}")]
    NotFaithful(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RepChoice {
    Geometric,
    Doubled,
}

impl fmt::Display for RepChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepChoice::Geometric => write!(f, "geometric"),
            RepChoice::Doubled => write!(f, "doubled"),
        }
    }
}

/// A Coxeter system with a realization over ℚ(2cos(π/N)).
///
/// Coordinates on h* are taken in a fixed basis x_0, …, x_{d−1}; the simple
/// root α_s is x_s. The coroot α_s^∨ ∈ h is stored through the values
/// x_v(α_s^∨).
pub struct CoxeterSystem {
    matrix: Vec<Vec<u32>>,
    field: &'static FieldDescriptor,
    rep: RepChoice,
    rep_dim: usize,
    roots: Vec<Vec<Scalar>>,
    coroots: Vec<Vec<Scalar>>,
    gens: Vec<Matrix>,
}

impl fmt::Debug for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoxeterSystem({:?}, {}, {:?})", self.matrix, self.rep, self.field)
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Conductor of the smallest field ℚ(2cos(π/N)) containing every 2cos(π/m_st).
///
/// Entries 2 and 3 contribute rational values and do not enlarge the field.
pub fn conductor_for(matrix: &[Vec<u32>]) -> u32 {
    let mut n = 1;
    for row in matrix {
        for &m in row {
            if m >= 4 {
                n = n / gcd(n, m) * m;
            }
        }
    }
    n
}

impl CoxeterSystem {
    pub fn new(matrix: Vec<Vec<u32>>, rep: RepChoice) -> Result<Arc<Self>, CoxeterError> {
        let n = matrix.len();
        if n == 0 || n > 8 {
            return Err(CoxeterError::InvalidMatrix(format!("rank {n} outside 1..=8")));
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(CoxeterError::InvalidMatrix("matrix is not square".into()));
            }
            for (j, &m) in row.iter().enumerate() {
                if matrix[j][i] != m {
                    return Err(CoxeterError::InvalidMatrix("matrix is not symmetric".into()));
                }
                if i == j && m != 1 {
                    return Err(CoxeterError::InvalidMatrix(format!("diagonal entry m[{i}][{i}] = {m} != 1")));
                }
                if i != j && m == 1 {
                    return Err(CoxeterError::InvalidMatrix(format!("off-diagonal entry m[{i}][{j}] = 1")));
                }
            }
        }
        let field = field_create(conductor_for(&matrix));
        // pairing[t][s] = α_t(α_s^∨) = −2cos(π/m_st)
        let pairing: Vec<Vec<Scalar>> = (0..n)
            .map(|t| {
                (0..n)
                    .map(|s| match matrix[t][s] {
                        0 => field.from_int(-2),
                        m => -field.embed(m).expect("conductor covers every entry"),
                    })
                    .collect()
            })
            .collect();
        let rep_dim = match rep {
            RepChoice::Geometric => n,
            RepChoice::Doubled => 2 * n,
        };
        let coroots: Vec<Vec<Scalar>> = (0..n)
            .map(|s| {
                (0..rep_dim)
                    .map(|v| {
                        if v < n {
                            pairing[v][s].clone()
                        } else if v - n == s {
                            field.one()
                        } else {
                            field.zero()
                        }
                    })
                    .collect()
            })
            .collect();
        let roots: Vec<Vec<Scalar>> = (0..n)
            .map(|s| (0..rep_dim).map(|v| if v == s { field.one() } else { field.zero() }).collect())
            .collect();
        if Matrix::from_rows(field, coroots.clone()).rank() < n {
            return Err(CoxeterError::DependentCoroots);
        }
        let gens = (0..n)
            .map(|s| {
                let mut m = Matrix::identity(field, rep_dim);
                for j in 0..rep_dim {
                    let c = &coroots[s][j];
                    if !c.is_zero() {
                        for i in 0..rep_dim {
                            let v = &m[(i, j)] - &(c * &roots[s][i]);
                            m[(i, j)] = v;
                        }
                    }
                }
                m
            })
            .collect();
        Ok(Arc::new(CoxeterSystem { matrix, field, rep, rep_dim, roots, coroots, gens }))
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn coxeter_matrix(&self) -> &[Vec<u32>] {
        &self.matrix
    }

    pub fn m(&self, s: usize, t: usize) -> u32 {
        self.matrix[s][t]
    }

    pub fn field(&self) -> &'static FieldDescriptor {
        self.field
    }

    pub fn rep_choice(&self) -> RepChoice {
        self.rep
    }

    pub fn rep_dim(&self) -> usize {
        self.rep_dim
    }

    pub fn root(&self, s: usize) -> &[Scalar] {
        &self.roots[s]
    }

    /// The values x_v(α_s^∨) for every coordinate v.
    pub fn coroot(&self, s: usize) -> &[Scalar] {
        &self.coroots[s]
    }

    /// f(α_s^∨) for a linear form f given in coordinates.
    pub fn eval_coroot(&self, s: usize, f: &[Scalar]) -> Scalar {
        let mut acc = self.field.zero();
        for (a, b) in f.iter().zip(&self.coroots[s]) {
            if !a.is_zero() && !b.is_zero() {
                acc = &acc + &(a * b);
            }
        }
        acc
    }

    /// α_s(α_t^∨).
    pub fn pairing(&self, s: usize, t: usize) -> Scalar {
        self.eval_coroot(t, &self.roots[s])
    }

    /// Matrix of s acting on h*, columns are images of coordinate functions.
    pub fn gen_matrix(&self, s: usize) -> &Matrix {
        &self.gens[s]
    }

    /// Contragredient action of an element on a linear form.
    pub fn act_linear(&self, w: &CoxeterElement, f: &[Scalar]) -> Vec<Scalar> {
        w.matrix.mul_vec(f)
    }

    /// s·f = f − f(α_s^∨)α_s.
    pub fn reflect(&self, s: usize, f: &[Scalar]) -> Vec<Scalar> {
        let c = self.eval_coroot(s, f);
        let mut out = f.to_vec();
        if !c.is_zero() {
            for (o, r) in out.iter_mut().zip(&self.roots[s]) {
                if !r.is_zero() {
                    *o = &*o - &(&c * r);
                }
            }
        }
        out
    }

    pub fn is_finite_type_hint(&self) -> bool {
        self.matrix.iter().flatten().all(|&m| m != 0)
    }

    fn check_word(&self, word: &[usize]) -> Result<(), CoxeterError> {
        match word.iter().find(|&&s| s >= self.rank()) {
            Some(&s) => Err(CoxeterError::BadLetter(s)),
            None => Ok(()),
        }
    }

    fn word_matrix(&self, word: &[usize]) -> Matrix {
        let mut m = Matrix::identity(self.field, self.rep_dim);
        for &s in word {
            m = m.mul(&self.gens[s]);
        }
        m
    }

    /// ws < w iff w(α_s) is a negative root.
    fn is_right_descent_matrix(&self, m: &Matrix, s: usize) -> bool {
        let n = self.rank();
        let mut neg = false;
        for i in 0..n {
            match m[(i, s)].sign() {
                1 => return false,
                -1 => neg = true,
                _ => {}
            }
        }
        neg
    }

    /// The group element represented by a word, with length, shortlex normal form and descents.
    pub fn word_to_element(&self, word: &[usize]) -> Result<CoxeterElement, CoxeterError> {
        self.check_word(word)?;
        Ok(self.element_from_matrix(self.word_matrix(word)))
    }

    pub fn identity(&self) -> CoxeterElement {
        self.element_from_matrix(Matrix::identity(self.field, self.rep_dim))
    }

    fn element_from_matrix(&self, matrix: Matrix) -> CoxeterElement {
        let n = self.rank();
        // w^{-1} has s as right descent iff s is a left descent of w.
        let inv_of = |m: &Matrix| -> Matrix { m.inverse().expect("group elements are invertible") };
        let mut inv = inv_of(&matrix);
        let mut cur = matrix.clone();
        let mut word = Vec::new();
        loop {
            let Some(s) = (0..n).find(|&s| self.is_right_descent_matrix(&inv, s)) else { break };
            word.push(s);
            cur = self.gens[s].mul(&cur);
            inv = inv.mul(&self.gens[s]);
        }
        debug_assert!(cur == Matrix::identity(self.field, self.rep_dim));
        let mut right = 0u64;
        let mut left = 0u64;
        let inv = inv_of(&matrix);
        for s in 0..n {
            if self.is_right_descent_matrix(&matrix, s) {
                right |= 1 << s;
            }
            if self.is_right_descent_matrix(&inv, s) {
                left |= 1 << s;
            }
        }
        CoxeterElement { length: word.len(), matrix, word, left_descents: left, right_descents: right }
    }

    /// ℓ(word) == ℓ(product).
    pub fn is_reduced(&self, word: &[usize]) -> Result<bool, CoxeterError> {
        Ok(self.word_to_element(word)?.length == word.len())
    }

    pub fn choose_rho(&self, mode: RhoChoice) -> Result<DominantWeight, CoxeterError> {
        let f = self.field;
        let coords = match mode {
            RhoChoice::Canonical => self.rho_with_coroot_values(&vec![f.one(); self.rank()]),
            RhoChoice::CorootValues(vals) => self.rho_with_coroot_values(&vals),
            RhoChoice::Coordinates(c) => {
                if c.len() != self.rep_dim {
                    return Err(CoxeterError::RhoDimension { got: c.len(), expected: self.rep_dim });
                }
                c
            }
        };
        for s in 0..self.rank() {
            if self.eval_coroot(s, &coords).sign() <= 0 {
                return Err(CoxeterError::NotDominant(s));
            }
        }
        Ok(DominantWeight { rho: coords })
    }

    fn rho_with_coroot_values(&self, vals: &[Scalar]) -> Vec<Scalar> {
        let f = self.field;
        let a = Matrix::from_rows(f, self.coroots.clone());
        let b = Matrix::from_columns(f, self.rank(), &[vals.to_vec()]);
        let x = a.solve(&b).expect("coroots are independent");
        x.column(0)
    }

    /// Checks (wρ)(α_s^∨) > 0 ⇔ sw > w on every element of the ideal.
    pub fn verify_rho_property(&self, ideal: &Ideal, rho: &DominantWeight) -> Result<(), (usize, usize)> {
        for (i, w) in ideal.elements().iter().enumerate() {
            let wr = self.act_linear(w, &rho.rho);
            for s in 0..self.rank() {
                let pos = self.eval_coroot(s, &wr).sign() > 0;
                let ascent = !w.is_left_descent(s);
                if pos != ascent {
                    return Err((i, s));
                }
            }
        }
        Ok(())
    }
}

pub enum RhoChoice {
    Canonical,
    /// ρ determined by prescribed values ρ(α_s^∨), zero on a complement.
    CorootValues(Vec<Scalar>),
    /// ρ given directly in the coordinates of h*.
    Coordinates(Vec<Scalar>),
}

/// A linear form ρ ∈ h* with ρ(α_s^∨) > 0 for every simple reflection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominantWeight {
    pub rho: Vec<Scalar>,
}

impl DominantWeight {
    /// Dominant weight with random positive coroot values p/q, 1 ≤ p, q ≤ 9.
    pub fn from_values(sys: &CoxeterSystem, vals: &[Rational]) -> Result<Self, CoxeterError> {
        let f = sys.field();
        sys.choose_rho(RhoChoice::CorootValues(vals.iter().map(|q| f.from_rational(q.clone())).collect()))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct CoxeterElement {
    pub matrix: Matrix,
    pub length: usize,
    /// Shortlex-minimal reduced word.
    pub word: Vec<usize>,
    pub left_descents: u64,
    pub right_descents: u64,
}

impl fmt::Debug for CoxeterElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", word_string(&self.word))
    }
}

impl CoxeterElement {
    pub fn is_left_descent(&self, s: usize) -> bool {
        self.left_descents >> s & 1 == 1
    }

    pub fn is_right_descent(&self, s: usize) -> bool {
        self.right_descents >> s & 1 == 1
    }
}

/// Letters printed as s0 s1 …; the identity prints as "e".
pub fn word_string(word: &[usize]) -> String {
    if word.is_empty() {
        return "e".into();
    }
    word.iter().map(|s| format!("s{s}")).collect::<Vec<_>>().join(" ")
}

/// Letter names "s", "t", "u", "v" for ranks up to 4, otherwise "s0", "s1", ….
pub fn parse_word(text: &str, rank: usize) -> Result<Vec<usize>, CoxeterError> {
    let named = ["s", "t", "u", "v"];
    let mut out = Vec::new();
    for tok in text.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
        if tok == "e" {
            continue;
        }
        let idx = if let Some(i) = named.iter().position(|n| *n == tok) {
            i
        } else if let Some(rest) = tok.strip_prefix('s') {
            rest.parse::<usize>().map_err(|_| CoxeterError::InvalidMatrix(format!("bad letter {tok:?}")))?
        } else if let Ok(i) = tok.parse::<usize>() {
            i
        } else {
            return Err(CoxeterError::InvalidMatrix(format!("bad letter {tok:?}")));
        };
        if idx >= rank {
            return Err(CoxeterError::BadLetter(idx));
        }
        out.push(idx);
    }
    Ok(out)
}

/// All elements of length ≤ max_length, sorted by length then shortlex word,
/// with multiplication tables by generators.
pub struct Ideal {
    sys: Arc<CoxeterSystem>,
    max_length: usize,
    elems: Vec<CoxeterElement>,
    index: HashMap<Matrix, usize>,
    right: Vec<Vec<Option<usize>>>,
    left: Vec<Vec<Option<usize>>>,
    by_length: Vec<std::ops::Range<usize>>,
    complete: bool,
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal({} elements, max length {})", self.elems.len(), self.max_length)
    }
}

/// Enumerates the Bruhat ideal of elements of length ≤ max_length.
pub fn enumerate_ideal(sys: &Arc<CoxeterSystem>, max_length: usize) -> Result<Ideal, CoxeterError> {
    let n = sys.rank();
    let f = sys.field();
    let id = Matrix::identity(f, sys.rep_dim());
    let mut elems: Vec<CoxeterElement> =
        vec![CoxeterElement { matrix: id.clone(), length: 0, word: vec![], left_descents: 0, right_descents: 0 }];
    let mut index: HashMap<Matrix, usize> = HashMap::new();
    index.insert(id, 0);
    let mut by_length = vec![0..1];
    let mut complete = false;
    for len in 1..=max_length {
        let prev = by_length[len - 1].clone();
        let mut fresh: Vec<Matrix> = Vec::new();
        let mut seen: HashMap<Matrix, ()> = HashMap::new();
        for i in prev.clone() {
            for s in 0..n {
                let m = elems[i].matrix.mul(sys.gen_matrix(s));
                if index.contains_key(&m) || seen.contains_key(&m) {
                    continue;
                }
                seen.insert(m.clone(), ());
                fresh.push(m);
            }
        }
        if fresh.is_empty() {
            complete = true;
            break;
        }
        // Shortlex normal form: smallest left descent followed by the normal form of the rest.
        let mut level: Vec<(Vec<usize>, Matrix)> = fresh
            .into_iter()
            .map(|m| {
                let s0 = (0..n)
                    .find(|&s| {
                        let sm = sys.gen_matrix(s).mul(&m);
                        index.get(&sm).is_some_and(|&j| elems[j].length == len - 1)
                    })
                    .expect("every nontrivial element has a left descent");
                let sm = sys.gen_matrix(s0).mul(&m);
                let mut w = vec![s0];
                w.extend(elems[index[&sm]].word.iter().copied());
                (w, m)
            })
            .collect();
        level.sort_by(|a, b| a.0.cmp(&b.0));
        let start = elems.len();
        for (w, m) in level {
            index.insert(m.clone(), elems.len());
            elems.push(CoxeterElement { matrix: m, length: len, word: w, left_descents: 0, right_descents: 0 });
        }
        by_length.push(start..elems.len());
    }
    if !complete && by_length.len() == max_length + 1 {
        // Check whether the group is exhausted exactly at max_length.
        let last = by_length[max_length].clone();
        complete = last.clone().all(|i| {
            (0..n).all(|s| index.contains_key(&elems[i].matrix.mul(sys.gen_matrix(s))))
        });
    }
    let total = elems.len();
    let mut right = vec![vec![None; n]; total];
    let mut left = vec![vec![None; n]; total];
    for i in 0..total {
        for s in 0..n {
            right[i][s] = index.get(&elems[i].matrix.mul(sys.gen_matrix(s))).copied();
            left[i][s] = index.get(&sys.gen_matrix(s).mul(&elems[i].matrix)).copied();
        }
    }
    for i in 0..total {
        let len = elems[i].length;
        let (mut rd, mut ld) = (0u64, 0u64);
        for s in 0..n {
            let r = right[i][s].map(|j| elems[j].length);
            let l = left[i][s].map(|j| elems[j].length);
            // Faithfulness: lengths must change by exactly one and agree with the root test.
            let root_says_down = sys.is_right_descent_matrix(&elems[i].matrix, s);
            match r {
                Some(l2) if l2 + 1 == len => {
                    if !root_says_down {
                        return Err(CoxeterError::NotFaithful(format!("{:?} * s{s}", elems[i])));
                    }
                    rd |= 1 << s;
                }
                Some(l2) if l2 == len + 1 => {
                    if root_says_down {
                        return Err(CoxeterError::NotFaithful(format!("{:?} * s{s}", elems[i])));
                    }
                }
                None if len == max_length => {
                    if root_says_down {
                        return Err(CoxeterError::NotFaithful(format!("{:?} * s{s}", elems[i])));
                    }
                }
                _ => return Err(CoxeterError::NotFaithful(format!("{:?} * s{s}", elems[i]))),
            }
            match l {
                Some(l2) if l2 + 1 == len => ld |= 1 << s,
                Some(l2) if l2 == len + 1 => {}
                None if len == max_length => {}
                _ => return Err(CoxeterError::NotFaithful(format!("s{s} * {:?}", elems[i]))),
            }
        }
        elems[i].right_descents = rd;
        elems[i].left_descents = ld;
    }
    Ok(Ideal { sys: sys.clone(), max_length, elems, index, right, left, by_length, complete })
}

impl Ideal {
    pub fn system(&self) -> &Arc<CoxeterSystem> {
        &self.sys
    }

    pub fn max_length(&self) -> usize {
        self.max_length
    }

    /// True when the ideal is the whole (finite) group.
    pub fn is_whole_group(&self) -> bool {
        self.complete
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[CoxeterElement] {
        &self.elems
    }

    pub fn element(&self, i: usize) -> &CoxeterElement {
        &self.elems[i]
    }

    pub fn length(&self, i: usize) -> usize {
        self.elems[i].length
    }

    pub fn word(&self, i: usize) -> &[usize] {
        &self.elems[i].word
    }

    pub fn of_length(&self, l: usize) -> std::ops::Range<usize> {
        self.by_length.get(l).cloned().unwrap_or(0..0)
    }

    pub fn lookup(&self, e: &CoxeterElement) -> Option<usize> {
        self.index.get(&e.matrix).copied()
    }

    /// Index of the product of a word, if it lies in the ideal.
    pub fn index_of_word(&self, word: &[usize]) -> Option<usize> {
        let mut cur = 0;
        for &s in word {
            cur = self.right_mul(cur, s).or_else(|| {
                let m = self.elems[cur].matrix.mul(self.sys.gen_matrix(s));
                self.index.get(&m).copied()
            })?;
        }
        Some(cur)
    }

    pub fn right_mul(&self, i: usize, s: usize) -> Option<usize> {
        self.right[i][s]
    }

    pub fn left_mul(&self, s: usize, i: usize) -> Option<usize> {
        self.left[i][s]
    }

    pub fn inverse(&self, i: usize) -> usize {
        let mut w = self.elems[i].word.clone();
        w.reverse();
        self.index_of_word(&w).expect("ideal is closed under inversion")
    }

    /// y ≤ x in the Bruhat order, via: for xs < x, y ≤ x ⇔ min(y, ys) ≤ xs.
    pub fn bruhat_leq(&self, y: usize, x: usize) -> bool {
        let (ly, lx) = (self.elems[y].length, self.elems[x].length);
        if ly > lx {
            return false;
        }
        if ly == lx {
            return y == x;
        }
        if y == 0 {
            return true;
        }
        let s = *self.elems[x].word.last().unwrap();
        let xs = self.right[x][s].expect("descent stays in ideal");
        if self.elems[y].is_right_descent(s) {
            self.bruhat_leq(self.right[y][s].unwrap(), xs)
        } else {
            self.bruhat_leq(y, xs)
        }
    }

    /// Elements below x in Bruhat order (including x), in ideal order.
    pub fn lower_set(&self, x: usize) -> Vec<usize> {
        (0..=x).filter(|&y| self.bruhat_leq(y, x)).collect()
    }
}
