//! Splitting bimodules into catalogued indecomposables, and the inductive catalogue of B_x.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use crate::coxeter::{word_string, CoxeterSystem, Ideal};
use crate::hecke::{Hecke, HeckeElement, LaurentPoly};
use crate::linalg::Matrix;
use crate::numeric::Scalar;

use super::algebra::{endomorphism_scalar, realize_image, split_top, Summand};
use super::bimodule::{BsBimodule, FreeBimodule};
use super::hom::hom_space;
use super::polymatrix::{tensor_id_s, PolyMatrix};
use super::SoergelError;

/// One copy of B_y(k) split off from a module.
#[derive(Clone, Debug)]
pub struct Peeled {
    pub element: usize,
    pub shift: i32,
    /// module × rank(B_y): a degree-0 map B_y(k) → module
    pub incl: PolyMatrix,
    /// rank(B_y) × module
    pub proj: PolyMatrix,
}

/// Result of peeling: split-off copies and the leftover summand.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub pieces: Vec<Peeled>,
    pub remainder: Summand,
    /// (y, k, predicted, found) for every candidate whose count disagreed with the prediction.
    pub mismatches: Vec<(usize, i32, usize, usize)>,
}

impl Decomposition {
    /// Multiset {(y, k) ↦ multiplicity}.
    pub fn multiplicities(&self) -> BTreeMap<(usize, i32), usize> {
        let mut out = BTreeMap::new();
        for p in &self.pieces {
            *out.entry((p.element, p.shift)).or_insert(0) += 1;
        }
        out
    }
}

/// Catalogue entry: a realized B_x.
#[derive(Clone, Debug)]
pub struct CatalogueEntry {
    pub element: usize,
    pub word: Vec<usize>,
    pub module: FreeBimodule,
    /// BS(word) × rank
    pub incl: PolyMatrix,
    /// rank × BS(word)
    pub proj: PolyMatrix,
    pub character: HeckeElement,
    pub soergel: bool,
    pub end0_dim: usize,
    /// (y, multiplicity) of the summands split off B_{x′}B_s.
    pub peeled: Vec<(usize, usize)>,
    pub used_split_top: bool,
    /// Unexpected leftover summands, if any.
    pub failures: Vec<String>,
}

impl CatalogueEntry {
    pub fn bottom(&self) -> usize {
        self.module.bottom_index().expect("B_x has a one-dimensional bottom degree")
    }
}

/// Decomposition of B_z·B_s into catalogued summands, in the α/β basis of B_z·B_s.
#[derive(Clone, Debug)]
pub struct ProductDecomposition {
    pub z: usize,
    pub s: usize,
    pub module: FreeBimodule,
    pub pieces: Vec<Peeled>,
}

/// All B_x of an ideal, realized inductively inside B_{x′}·B_s for x = x′s the shortlex word.
pub struct Catalogue {
    hecke: Arc<Hecke>,
    entries: Vec<CatalogueEntry>,
    products: Mutex<HashMap<(usize, usize), Arc<ProductDecomposition>>>,
}

/// Orders candidates by decreasing length, then increasing |shift|, then shift, then index.
fn sort_candidates(ideal: &Ideal, c: &mut [(usize, i32, usize)]) {
    c.sort_by_key(|&(y, k, _)| (std::cmp::Reverse(ideal.length(y)), k.abs(), k, y));
}

/// Candidates (y, k, multiplicity) read off a character in the KL basis.
pub fn candidates_from(hecke: &Hecke, ch: &HeckeElement) -> Vec<(usize, i32, usize)> {
    let mut out = Vec::new();
    for (y, p) in hecke.to_kl_coords(ch) {
        for (k, c) in p.terms() {
            let n: i64 = c.try_into().unwrap_or(-1);
            if n > 0 {
                out.push((y, k, n as usize));
            }
        }
    }
    sort_candidates(hecke.ideal(), &mut out);
    out
}

/// Peels catalogued summands (y, k) off B, in the given order.
pub fn peel(
    cat: &Catalogue,
    b: &FreeBimodule,
    candidates: &[(usize, i32, usize)],
) -> Result<Decomposition, SoergelError> {
    let mut cur = Summand::whole(b);
    let mut pieces = Vec::new();
    let mut mismatches = Vec::new();
    for &(y, k, predicted) in candidates {
        if cur.rank() == 0 {
            mismatches.push((y, k, predicted, 0));
            continue;
        }
        let by = &cat.entry(y)?.module;
        let fs = hom_space(by, &cur.module, -k);
        let gs = hom_space(&cur.module, by, k);
        let f = b.sys().field();
        let mut pm = Matrix::zeros(f, gs.len(), fs.len());
        for (a, g) in gs.iter().enumerate() {
            for (c, fm) in fs.iter().enumerate() {
                let comp = g.mul(fm);
                pm[(a, c)] = endomorphism_scalar(&comp).ok_or_else(|| {
                    SoergelError::Internal(format!("End⁰ of catalogued {} is not scalar", y))
                })?;
            }
        }
        let mut r = pm.clone();
        let cols = r.rref_in_place();
        let found = cols.len();
        if found != predicted {
            mismatches.push((y, k, predicted, found));
        }
        if found == 0 {
            continue;
        }
        let mut t = pm.submatrix(&(0..pm.rows()).collect::<Vec<_>>(), &cols).transpose();
        let rows = t.rref_in_place();
        let sub = pm.submatrix(&rows, &cols);
        let inv = sub.inverse().expect("pivot block is invertible");
        let nv = b.nvars();
        let mut e = PolyMatrix::zeros(f, nv, cur.rank(), cur.rank());
        for (ci, &c) in cols.iter().enumerate() {
            let incl = fs[c].clone();
            let mut proj = PolyMatrix::zeros(f, nv, by.rank(), cur.rank());
            for (ai, &a) in rows.iter().enumerate() {
                let w = &inv[(ci, ai)];
                if !w.is_zero() {
                    proj = proj.add(&gs[a].scale(w));
                }
            }
            e = e.add(&incl.mul(&proj));
            pieces.push(Peeled { element: y, shift: k, incl: cur.incl.mul(&incl), proj: proj.mul(&cur.proj) });
        }
        let comp = PolyMatrix::identity(f, nv, cur.rank()).sub(&e);
        let next = realize_image(&cur.module, &comp)?;
        cur = Summand {
            incl: cur.incl.mul(&next.incl),
            proj: next.proj.mul(&cur.proj),
            module: next.module,
            label: None,
        };
    }
    Ok(Decomposition { pieces, remainder: cur, mismatches })
}

impl Catalogue {
    /// Starts a catalogue containing only B_id = R.
    pub fn new(hecke: Arc<Hecke>) -> Self {
        let sys = hecke.ideal().system().clone();
        let (f, nv) = (sys.field(), sys.rep_dim());
        let r = FreeBimodule::regular(&sys);
        let id = CatalogueEntry {
            element: 0,
            word: vec![],
            module: r,
            incl: PolyMatrix::identity(f, nv, 1),
            proj: PolyMatrix::identity(f, nv, 1),
            character: HeckeElement::standard(0),
            soergel: true,
            end0_dim: 1,
            peeled: vec![],
            used_split_top: false,
            failures: vec![],
        };
        Catalogue { hecke, entries: vec![id], products: Mutex::new(HashMap::new()) }
    }

    /// Builds entries for every element of length ≤ max_len.
    pub fn build(hecke: Arc<Hecke>, max_len: usize) -> Result<Self, SoergelError> {
        let mut cat = Catalogue::new(hecke);
        let n = cat.ideal().len();
        for x in 1..n {
            if cat.ideal().length(x) > max_len {
                break;
            }
            cat.extend()?;
        }
        Ok(cat)
    }

    pub fn hecke(&self) -> &Arc<Hecke> {
        &self.hecke
    }

    pub fn ideal(&self) -> &Arc<Ideal> {
        self.hecke.ideal()
    }

    pub fn sys(&self) -> &Arc<CoxeterSystem> {
        self.ideal().system()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[CatalogueEntry] {
        &self.entries
    }

    pub fn entry(&self, y: usize) -> Result<&CatalogueEntry, SoergelError> {
        self.entries.get(y).ok_or(SoergelError::NotCatalogued(y))
    }

    /// Adds B_x for the next element x in shortlex order.
    pub fn extend(&mut self) -> Result<&CatalogueEntry, SoergelError> {
        let x = self.entries.len();
        if x >= self.ideal().len() {
            return Err(SoergelError::NotCatalogued(x));
        }
        let entry = self.construct(x)?;
        self.entries.push(entry);
        Ok(self.entries.last().unwrap())
    }

    fn construct(&self, x: usize) -> Result<CatalogueEntry, SoergelError> {
        let ideal = self.ideal().clone();
        let sys = self.sys().clone();
        let word = ideal.word(x).to_vec();
        let s = *word.last().unwrap();
        let xp = ideal.right_mul(x, s).unwrap();
        let prev = self.entry(xp)?;
        let n = prev.module.induce(s);
        let ch_n = self.hecke.mul_kl_s(&prev.character, s)?;
        let mut cands = candidates_from(&self.hecke, &ch_n);
        cands.retain(|&(y, k, _)| !(y == x && k == 0));
        for &(y, _, _) in &cands {
            if y >= x {
                return Err(SoergelError::Internal(format!("candidate {} is not below {}", y, x)));
            }
        }
        let dec = peel(self, &n, &cands)?;
        let mut failures: Vec<String> = dec
            .mismatches
            .iter()
            .map(|(y, k, p, f)| format!("B_{}({}) predicted {} found {}", word_string(ideal.word(*y)), k, p, f))
            .collect();
        let mut rem = dec.remainder.clone();
        let mut end0 = hom_space(&rem.module, &rem.module, 0).len();
        let mut used_split_top = false;
        if end0 != 1 && rem.rank() > 0 {
            used_split_top = true;
            let top = split_top(&rem.module)?;
            failures.push(format!("leftover of rank {} beyond B_x", rem.rank() - top.rank()));
            rem = Summand {
                incl: rem.incl.mul(&top.incl),
                proj: top.proj.mul(&rem.proj),
                module: top.module,
                label: None,
            };
            end0 = hom_space(&rem.module, &rem.module, 0).len();
        }
        let mut character = ch_n.clone();
        for p in &dec.pieces {
            let py = &self.entry(p.element)?.character;
            character.add_scaled(py, &LaurentPoly::monomial(-1, p.shift));
        }
        let ambient_incl = tensor_id_s(&sys, &prev.incl, s);
        let ambient_proj = tensor_id_s(&sys, &prev.proj, s);
        let incl = ambient_incl.mul(&rem.incl);
        let proj = rem.proj.mul(&ambient_proj);
        let mut peeled: BTreeMap<usize, usize> = BTreeMap::new();
        for p in &dec.pieces {
            *peeled.entry(p.element).or_insert(0) += 1;
        }
        let soergel = character == *self.hecke.kl_basis(x)
            && failures.is_empty()
            && end0 == 1
            && graded_rank_matches(&self.hecke, &rem.module, x);
        Ok(CatalogueEntry {
            element: x,
            word,
            module: rem.module,
            incl,
            proj,
            character,
            soergel,
            end0_dim: end0,
            peeled: peeled.into_iter().collect(),
            used_split_top,
            failures,
        })
    }

    /// Decomposition of B_z·B_s, peeling every predicted summand including the top one.
    pub fn product(&self, z: usize, s: usize) -> Result<Arc<ProductDecomposition>, SoergelError> {
        if let Some(p) = self.products.lock().unwrap().get(&(z, s)) {
            return Ok(p.clone());
        }
        let bz = &self.entry(z)?.module;
        let n = bz.induce(s);
        let ch = self.hecke.mul_kl_s(self.hecke.kl_basis(z), s)?;
        let cands = candidates_from(&self.hecke, &ch);
        for &(y, _, _) in &cands {
            self.entry(y)?;
        }
        let dec = peel(self, &n, &cands)?;
        if !dec.mismatches.is_empty() || dec.remainder.rank() != 0 {
            return Err(SoergelError::Internal(format!(
                "B_z B_s for z = {} does not decompose as predicted",
                word_string(self.ideal().word(z))
            )));
        }
        let pd = Arc::new(ProductDecomposition { z, s, module: n, pieces: dec.pieces });
        self.products.lock().unwrap().insert((z, s), pd.clone());
        Ok(pd)
    }
}

/// gdim B̄ = Σ_y h_{y,x}(v)·v^{−ℓ(y)}, with gdim V = Σ dim V^i v^{−i}.
pub fn graded_rank_matches(hecke: &Hecke, b: &FreeBimodule, x: usize) -> bool {
    let ideal = hecke.ideal();
    let mut expected = LaurentPoly::zero();
    for (y, p) in &hecke.kl_basis(x).coeffs {
        expected = &expected + &p.shift(-(ideal.length(*y) as i32));
    }
    gdim(b) == expected
}

/// Σ_i dim B̄^i v^{−i}.
pub fn gdim(b: &FreeBimodule) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    for (d, n) in b.graded_dims() {
        out = &out + &LaurentPoly::monomial(n as i64, -d);
    }
    out
}

/// Decomposes BS(x̲) for a reduced word: peels catalogued summands below x, then splits off B_x.
pub fn decompose_bs(cat: &Catalogue, bs: &BsBimodule) -> Result<(Decomposition, Summand, HeckeElement), SoergelError> {
    let hecke = cat.hecke();
    let ch = hecke.bs_character(bs.word())?;
    let ideal = cat.ideal();
    let x = ideal.index_of_word(bs.word());
    let reduced = ideal.system().is_reduced(bs.word()).unwrap_or(false);
    let mut cands = candidates_from(hecke, &ch);
    if reduced {
        if let Some(x) = x {
            cands.retain(|&(y, k, _)| !(y == x && k == 0));
        }
    }
    let dec = peel(cat, bs.module(), &cands)?;
    let top = if reduced && dec.remainder.rank() > 0 {
        let t = split_top(&dec.remainder.module)?;
        Summand {
            incl: dec.remainder.incl.mul(&t.incl),
            proj: t.proj.mul(&dec.remainder.proj),
            module: t.module,
            label: x.map(|x| (x, 0)),
        }
    } else {
        dec.remainder.clone()
    };
    let mut character = ch;
    for p in &dec.pieces {
        character.add_scaled(&cat.entry(p.element)?.character, &LaurentPoly::monomial(-1, p.shift));
    }
    Ok((dec, top, character))
}

/// Scalar pairing matrix (g_a ∘ f_b) between two families of maps into and out of B_y.
pub fn composition_pairing(gs: &[PolyMatrix], fs: &[PolyMatrix]) -> Option<Vec<Vec<Scalar>>> {
    gs.iter().map(|g| fs.iter().map(|f| endomorphism_scalar(&g.mul(f))).collect()).collect()
}
