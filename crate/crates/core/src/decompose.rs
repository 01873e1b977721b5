//! Direct-sum decompositions through idempotents of endomorphism algebras.
//!
//! Everything runs on minimal models. A degree-0 self-map `f` of a minimal
//! complex has a scalar part `S(f)`: the coefficients of the vertex idempotents
//! on entries between equal summands. Over a nonnegatively graded algebra whose
//! degree-0 part is spanned by the idempotents (every validated zigzag model),
//! `S` is multiplicative and its kernel is a nilpotent ideal containing the
//! null-homotopic maps. So `End(m)` is local exactly when the matrix algebra
//! `S(End(m))` is, and idempotents found there lift to exact chain-level ones.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::AlgElem;
use crate::analysis::{commute_classify, is_orthogonal, is_spherical, strong_sphericity_violation, CommuteReport};
use crate::complex::{direct_sum, projective, AMatrix, ChainMap, TwistedComplex};
use crate::config::Config;
use crate::error::TwistError;
use crate::field::Field;
use crate::hom::{HomBasisVector, HomComplex};
use crate::linalg::Matrix;
use crate::minimal::{is_isomorphic, isomorphic_up_to_shift, minimize};
use crate::twist::SphericalCollection;

/// Cap on the lifting iteration `e <- 3e^2 - 2e^3`.
pub const MAX_LIFT_STEPS: usize = 64;
const COEFF_BOUND: i64 = 1000;
const MAX_PAIR_CANDIDATES: usize = 256;

/// The scalar part of a degree-0 self-map of `x`, as an ordinary matrix.
pub fn scalar_part<K: Field>(x: &TwistedComplex<K>, f: &AMatrix<K>) -> Matrix<K> {
    let alg = x.algebra();
    let s = x.summands();
    let mut out = Matrix::zeros(s.len(), s.len());
    for j in 0..s.len() {
        for k in 0..s.len() {
            if s[j] == s[k] {
                out[(j, k)] = alg.unit_coefficient(f.get(j, k), s[k].vertex);
            }
        }
    }
    out
}

/// The degree-0 self-map with scalar entries `s`, which must vanish between
/// unequal summands.
pub fn scalar_map<K: Field>(x: &TwistedComplex<K>, s: &Matrix<K>) -> AMatrix<K> {
    let alg = x.algebra();
    let sm = x.summands();
    let mut out = AMatrix::zeros(sm.len(), sm.len());
    for j in 0..sm.len() {
        for k in 0..sm.len() {
            if !s[(j, k)].is_zero() {
                assert_eq!(sm[j], sm[k], "scalar entry between unequal summands");
                let e = alg.idempotent(sm[k].vertex).expect("vertex idempotent");
                out.set(j, k, AlgElem::term(e, s[(j, k)].clone()));
            }
        }
    }
    out
}

/// Inverse of a degree-0 self-map of `x`, or `None` when its scalar part is
/// singular. Writes `u = s (1 - n)` with `n` nilpotent and sums the series.
pub fn invert_degree_zero<K: Field>(x: &TwistedComplex<K>, u: &AMatrix<K>) -> Option<AMatrix<K>> {
    let alg = x.algebra();
    let s_inv = scalar_map(x, &scalar_part(x, u).inverse()?);
    let id = ChainMap::identity(x).matrix().clone();
    let nil = id.add(&s_inv.mul(alg, u).neg());
    let mut sum = id.clone();
    let mut term = id;
    for _ in 0..x.len() {
        term = term.mul(alg, &nil);
        if term.is_zero() {
            break;
        }
        sum = sum.add(&term);
    }
    debug_assert!(term.mul(alg, &nil).is_zero());
    Some(sum.mul(alg, &s_inv))
}

/// `H^0(Hom(m, m))` computed on `minimize(m)`, with cocycle representatives
/// and structure constants `r_i r_j = Σ_k c[i][j][k] r_k`.
#[derive(Clone)]
pub struct EndAlgebra<K> {
    object: TwistedComplex<K>,
    representatives: Vec<AMatrix<K>>,
    structure: Vec<Vec<Vec<K>>>,
    unit: Vec<K>,
    index: HashMap<HomBasisVector, usize>,
    reduction: Matrix<K>,
}

pub fn endomorphism_algebra<K: Field>(m: &TwistedComplex<K>) -> EndAlgebra<K> {
    let object = minimize(m);
    let hc = HomComplex::new(&object, &object).expect("same algebra");
    let basis = hc.basis(0).to_vec();
    let reps = hc.homology_basis(0);
    let mut cols = reps.clone();
    if !basis.is_empty() && hc.dim(-1) > 0 {
        let b = hc.differential(-1);
        cols.extend((0..b.cols()).map(|j| b.column(j)));
    }
    let reduction = Matrix::from_columns(basis.len(), &cols);
    let representatives: Vec<AMatrix<K>> = reps.iter().map(|c| hc.to_matrix(0, c)).collect();
    let index = basis.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut a = EndAlgebra { object, representatives, structure: Vec::new(), unit: Vec::new(), index, reduction };
    let alg = a.object.algebra().clone();
    a.unit = a.class_of(ChainMap::identity(&a.object).matrix()).expect("identity is closed");
    a.structure = a
        .representatives
        .iter()
        .map(|x| {
            a.representatives
                .iter()
                .map(|y| a.class_of(&x.mul(&alg, y)).expect("products of cocycles are cocycles"))
                .collect()
        })
        .collect();
    a
}

impl<K: Field> EndAlgebra<K> {
    /// The minimal model everything is expressed on.
    pub fn object(&self) -> &TwistedComplex<K> {
        &self.object
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn representatives(&self) -> &[AMatrix<K>] {
        &self.representatives
    }

    pub fn structure_constants(&self) -> &[Vec<Vec<K>>] {
        &self.structure
    }

    /// Coordinates of the identity.
    pub fn unit(&self) -> &[K] {
        &self.unit
    }

    /// Coordinates of the class of a closed degree-0 self-map; `None` if it is not closed.
    pub fn class_of(&self, f: &AMatrix<K>) -> Option<Vec<K>> {
        if self.index.is_empty() {
            return f.is_zero().then(|| vec![K::zero(); self.dim()]);
        }
        let mut coords = vec![K::zero(); self.index.len()];
        for j in 0..f.rows() {
            for k in 0..f.cols() {
                for (b, c) in f.get(j, k).terms() {
                    let pos = self.index.get(&HomBasisVector { row: j, col: k, elem: *b })?;
                    coords[*pos] = c.clone();
                }
            }
        }
        if self.reduction.cols() == 0 {
            return coords.iter().all(Field::is_zero).then(Vec::new);
        }
        let sol = self.reduction.solve(&coords).expect("shape")?;
        Some(sol[..self.dim()].to_vec())
    }

    /// `Σ c_i r_i`.
    pub fn map_of(&self, coords: &[K]) -> AMatrix<K> {
        let n = self.object.len();
        let mut out = AMatrix::zeros(n, n);
        for (c, r) in coords.iter().zip(&self.representatives) {
            if !c.is_zero() {
                out = out.add(&r.scale(c));
            }
        }
        out
    }

    /// Product of two classes through the structure constants.
    pub fn multiply(&self, a: &[K], b: &[K]) -> Vec<K> {
        let mut out = vec![K::zero(); self.dim()];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let c = x.clone() * y.clone();
                for (o, s) in out.iter_mut().zip(&self.structure[i][j]) {
                    *o = o.clone() + c.clone() * s.clone();
                }
            }
        }
        out
    }
}

/// Outcome of the idempotent search on one endomorphism algebra.
#[derive(Clone)]
pub enum Locality<K> {
    /// Certified local: the scalar image is `K·1` plus a nilpotent ideal.
    Local,
    /// An exact idempotent `e ∉ {0, 1}`: a closed degree-0 self-map of the minimal model.
    Split(ChainMap<K>),
    /// Neither certified local nor split within the budget.
    Unresolved,
}

fn mat_pow<K: Field>(x: &Matrix<K>, k: usize) -> Matrix<K> {
    (0..k).fold(Matrix::identity(x.rows()), |acc, _| acc.mul(x))
}

/// Minimal polynomial, coefficients lowest degree first.
fn min_poly<K: Field>(x: &Matrix<K>) -> Vec<K> {
    let n = x.rows();
    let mut powers = vec![Matrix::identity(n).entries().to_vec()];
    let mut cur = Matrix::identity(n);
    loop {
        cur = cur.mul(x);
        let flat = cur.entries().to_vec();
        if let Some(c) = Matrix::from_columns(n * n, &powers).solve(&flat).expect("shape") {
            let mut out: Vec<K> = c.into_iter().map(|v| -v).collect();
            out.push(K::one());
            return out;
        }
        powers.push(flat);
    }
}

/// Projection onto the generalized kernel of `y` along its stable image, when
/// both are nonzero.
fn fitting_projection<K: Field>(y: &Matrix<K>) -> Option<Matrix<K>> {
    let n = y.rows();
    let z = mat_pow(y, n);
    let ker = z.kernel_basis();
    if ker.is_empty() || ker.len() == n {
        return None;
    }
    let k = ker.len();
    let mut cols = ker;
    cols.extend(z.row_reduce().pivots.iter().map(|&p| z.column(p)));
    let b = Matrix::from_columns(n, &cols);
    let mut d = Matrix::zeros(n, n);
    for i in 0..k {
        d[(i, i)] = K::one();
    }
    Some(b.mul(&d).mul(&b.inverse().expect("Fitting decomposition")))
}

enum Probe<K> {
    Split(Matrix<K>),
    /// A single eigenvalue `λ` with `x - λ` nilpotent.
    Primary(K),
    NoEigenvalue,
}

fn probe<K: Field>(x: &Matrix<K>) -> Probe<K> {
    let n = x.rows();
    let roots = K::roots(&min_poly(x));
    for l in &roots {
        if let Some(p) = fitting_projection(&x.sub(&Matrix::identity(n).scale(l))) {
            return Probe::Split(p);
        }
    }
    match roots.into_iter().next() {
        Some(l) => Probe::Primary(l),
        None => Probe::NoEigenvalue,
    }
}

fn flat<K: Field>(ms: &[Matrix<K>], n: usize) -> Matrix<K> {
    let cols: Vec<Vec<K>> = ms.iter().map(|m| m.entries().to_vec()).collect();
    Matrix::from_columns(n * n, &cols)
}

/// A basis of the span of `ms`.
fn span_basis<K: Field>(ms: &[Matrix<K>], n: usize) -> Vec<Matrix<K>> {
    if ms.is_empty() {
        return Vec::new();
    }
    flat(ms, n).row_reduce().pivots.iter().map(|&p| ms[p].clone()).collect()
}

/// Whether all sufficiently long products of `gens` vanish.
fn generates_nilpotent<K: Field>(gens: &[Matrix<K>], n: usize) -> bool {
    let mut layer = span_basis(gens, n);
    for _ in 0..=n {
        if layer.is_empty() {
            return true;
        }
        let prods: Vec<Matrix<K>> = layer.iter().flat_map(|a| gens.iter().map(move |g| a.mul(g))).collect();
        layer = span_basis(&prods, n);
    }
    layer.is_empty()
}

fn combine<K: Field>(coeffs: &[K], ms: &[Matrix<K>], n: usize) -> Matrix<K> {
    coeffs.iter().zip(ms).fold(Matrix::zeros(n, n), |acc, (c, m)| acc.add(&m.scale(c)))
}

fn random_coeffs<K: Field>(rng: &mut impl Rng, len: usize) -> Vec<K> {
    (0..len).map(|_| K::random(rng, COEFF_BOUND)).collect()
}

/// Searches the matrix algebra spanned by `images` (containing the identity)
/// for an idempotent other than 0 and 1.
fn search<K: Field>(images: &[Matrix<K>], n: usize, rng: &mut impl Rng, budget: usize) -> Result<Option<Matrix<K>>, ()> {
    let id = Matrix::identity(n);
    let mut radical = Vec::new();
    let mut certain = true;
    for b in images {
        match probe(b) {
            Probe::Split(p) => return Ok(Some(p)),
            Probe::Primary(l) => radical.push(b.sub(&id.scale(&l))),
            Probe::NoEigenvalue => certain = false,
        }
    }
    if certain && generates_nilpotent(&radical, n) {
        return Ok(None);
    }
    // annihilators of coordinate vectors are left ideals of singular elements
    for k in 0..n {
        let cols: Vec<Vec<K>> = images.iter().map(|b| b.column(k)).collect();
        let ann: Vec<Matrix<K>> =
            Matrix::from_columns(n, &cols).kernel_basis().iter().map(|c| combine(c, images, n)).collect();
        if ann.is_empty() {
            continue;
        }
        let mut tries = ann.clone();
        tries.push(combine(&random_coeffs(rng, ann.len()), &ann, n));
        for x in &tries {
            if let Some(p) = fitting_projection(x) {
                return Ok(Some(p));
            }
        }
    }
    let mut pairs = 0;
    'pairs: for (i, a) in images.iter().enumerate() {
        for b in &images[i + 1..] {
            for x in [a.mul(b), a.add(b)] {
                if let Probe::Split(p) = probe(&x) {
                    return Ok(Some(p));
                }
            }
            pairs += 1;
            if pairs >= MAX_PAIR_CANDIDATES {
                break 'pairs;
            }
        }
    }
    for _ in 0..budget {
        let x = combine(&random_coeffs(rng, images.len()), images, n);
        if let Probe::Split(p) = probe(&x) {
            return Ok(Some(p));
        }
    }
    Err(())
}

/// Lifts an idempotent of the scalar image to an exact chain-level idempotent.
fn lift_idempotent<K: Field>(a: &EndAlgebra<K>, images: &[Matrix<K>], target: &Matrix<K>) -> AMatrix<K> {
    let n = a.object.len();
    let c = flat(images, n).solve(target.entries()).expect("shape").expect("projection lies in the scalar image");
    let alg = a.object.algebra();
    let mut e = a.map_of(&c);
    for _ in 0..MAX_LIFT_STEPS {
        let e2 = e.mul(alg, &e);
        if e2 == e {
            return e;
        }
        let e3 = e2.mul(alg, &e);
        e = e2.scale(&K::from_i64(3)).add(&e3.scale(&K::from_i64(-2)));
    }
    panic!("idempotent lifting did not converge in {MAX_LIFT_STEPS} steps");
}

fn locate<K: Field>(a: &EndAlgebra<K>, rng: &mut impl Rng, budget: usize) -> Locality<K> {
    let n = a.object.len();
    if n == 0 {
        return Locality::Local;
    }
    let images: Vec<Matrix<K>> = a.representatives.iter().map(|r| scalar_part(&a.object, r)).collect();
    match search(&images, n, rng, budget) {
        Ok(None) => Locality::Local,
        Ok(Some(p)) => {
            let e = lift_idempotent(a, &images, &p);
            Locality::Split(ChainMap::from_raw(a.object.clone(), a.object.clone(), 0, e))
        }
        Err(()) => Locality::Unresolved,
    }
}

/// Decides whether `End(m)` is local, or produces a splitting idempotent.
pub fn locality<K: Field>(a: &EndAlgebra<K>, cfg: &Config) -> Locality<K> {
    locate(a, &mut ChaCha8Rng::seed_from_u64(cfg.seed), cfg.budget)
}

/// An exact idempotent `e ∉ {0, 1}` of the minimal model, if the search finds one.
pub fn find_idempotent<K: Field>(a: &EndAlgebra<K>, cfg: &Config) -> Option<ChainMap<K>> {
    match locality(a, cfg) {
        Locality::Split(e) => Some(e),
        _ => None,
    }
}

/// Splits a minimal complex along an exact idempotent `e` into `(image, kernel)`.
///
/// A scalar base change brings `S(e)` to a 0/1 diagonal `Π`; then
/// `ψ = eΠ + (1-e)(1-Π)` is unipotent with `ψ^{-1} e ψ = Π`, so conjugating the
/// differential by `ψ` makes it commute with `Π`.
fn split_along<K: Field>(x: &TwistedComplex<K>, e: &AMatrix<K>) -> (TwistedComplex<K>, TwistedComplex<K>) {
    let alg = x.algebra().clone();
    let n = x.len();
    let s = x.summands();
    let ebar = scalar_part(x, e);
    let mut b = Matrix::zeros(n, n);
    let mut keep = vec![false; n];
    let mut seen = vec![false; n];
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let class: Vec<usize> = (0..n).filter(|&j| s[j] == s[i]).collect();
        for &j in &class {
            seen[j] = true;
        }
        let block = Matrix::from_rows(class.iter().map(|&r| class.iter().map(|&c| ebar[(r, c)].clone()).collect()).collect());
        let mut cols: Vec<Vec<K>> = block.row_reduce().pivots.iter().map(|&p| block.column(p)).collect();
        let rank = cols.len();
        cols.extend(block.kernel_basis());
        for (t, col) in cols.iter().enumerate() {
            keep[class[t]] = t < rank;
            for (r, v) in col.iter().enumerate() {
                b[(class[r], class[t])] = v.clone();
            }
        }
    }
    let u = scalar_map(x, &b.inverse().expect("image and kernel span"));
    let u_inv = scalar_map(x, &b);
    let x1 = x.conjugate(&u, &u_inv);
    let e1 = u.mul(&alg, e).mul(&alg, &u_inv);
    let mut pi = Matrix::zeros(n, n);
    for (i, &k) in keep.iter().enumerate() {
        if k {
            pi[(i, i)] = K::one();
        }
    }
    let pi = scalar_map(x, &pi);
    let id = ChainMap::identity(x).matrix().clone();
    let psi = e1.mul(&alg, &pi).add(&id.add(&e1.neg()).mul(&alg, &id.add(&pi.neg())));
    let psi_inv = invert_degree_zero(&x1, &psi).expect("unipotent");
    let x2 = x1.conjugate(&psi_inv, &psi);
    let im: Vec<usize> = (0..n).filter(|&i| keep[i]).collect();
    let co: Vec<usize> = (0..n).filter(|&i| !keep[i]).collect();
    let d = x2.differential();
    assert!(d.select(&im, &co).is_zero() && d.select(&co, &im).is_zero(), "split differential is block diagonal");
    (x2.restrict(&im), x2.restrict(&co))
}

fn split_into<K: Field>(x: &TwistedComplex<K>, rng: &mut ChaCha8Rng, budget: usize, out: &mut Vec<(TwistedComplex<K>, bool)>) {
    if minimize(x).is_empty() {
        return;
    }
    let a = endomorphism_algebra(x);
    match locate(&a, rng, budget) {
        Locality::Local => out.push((a.object, true)),
        Locality::Unresolved => out.push((a.object, false)),
        Locality::Split(e) => {
            let (p, q) = split_along(&a.object, e.matrix());
            split_into(&p, rng, budget, out);
            split_into(&q, rng, budget, out);
        }
    }
}

/// One isomorphism class of indecomposable summands.
#[derive(Clone)]
pub struct Piece<K> {
    pub object: TwistedComplex<K>,
    pub multiplicity: usize,
    pub is_spherical: bool,
    /// False when locality of the piece could not be settled within the budget.
    pub resolved: bool,
}

#[derive(Clone)]
pub struct SummandReport<K> {
    /// Classes in increasing rank order.
    pub pieces: Vec<Piece<K>>,
    /// `orthogonality[i][j]` for `i != j`: no maps in any degree either way. The diagonal is false.
    pub orthogonality: Vec<Vec<bool>>,
    /// The distinct pieces, when all are spherical and pairwise orthogonal.
    pub collection: Option<SphericalCollection<K>>,
    /// `⊕ pieces ≅ input`, checked exactly.
    pub verified: bool,
    pub seed: u64,
}

impl<K: Field> SummandReport<K> {
    pub fn total(&self) -> usize {
        self.pieces.iter().map(|p| p.multiplicity).sum()
    }

    pub fn is_complete(&self) -> bool {
        self.pieces.iter().all(|p| p.resolved)
    }

    /// Every summand, repeated by multiplicity.
    pub fn expanded(&self) -> Vec<TwistedComplex<K>> {
        self.pieces.iter().flat_map(|p| std::iter::repeat_n(p.object.clone(), p.multiplicity)).collect()
    }
}

/// Splits `m` into indecomposable summands, grouped up to isomorphism.
pub fn split_summands<K: Field>(m: &TwistedComplex<K>, cfg: &Config) -> Result<SummandReport<K>, TwistError> {
    let alg = m.algebra();
    let d = alg.cy_dimension();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut raw = Vec::new();
    split_into(m, &mut rng, cfg.budget, &mut raw);
    raw.sort_by_cached_key(|(p, _)| (p.len(), p.summand_multiset()));
    let all: Vec<TwistedComplex<K>> = raw.iter().map(|(p, _)| p.clone()).collect();
    let verified = is_isomorphic(&direct_sum(alg, &all)?, m, cfg.seed)?.isomorphic;
    let mut pieces: Vec<Piece<K>> = Vec::new();
    for (p, resolved) in raw {
        let mut found = None;
        for (i, q) in pieces.iter().enumerate() {
            if q.object.summand_multiset() == p.summand_multiset() && is_isomorphic(&q.object, &p, cfg.seed)?.isomorphic {
                found = Some(i);
                break;
            }
        }
        match found {
            Some(i) => {
                pieces[i].multiplicity += 1;
                pieces[i].resolved &= resolved;
            }
            None => pieces.push(Piece { is_spherical: is_spherical(&p, d)?, object: p, multiplicity: 1, resolved }),
        }
    }
    let k = pieces.len();
    let mut orthogonality = vec![vec![false; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let o = is_orthogonal(&pieces[i].object, &pieces[j].object)?;
            orthogonality[i][j] = o;
            orthogonality[j][i] = o;
        }
    }
    let all_orthogonal = (0..k).all(|i| (0..k).all(|j| i == j || orthogonality[i][j]));
    let collection = (all_orthogonal && pieces.iter().all(|p| p.is_spherical)).then(|| SphericalCollection {
        objects: pieces.iter().map(|p| p.object.clone()).collect(),
        d,
    });
    Ok(SummandReport { pieces, orthogonality, collection, verified, seed: cfg.seed })
}

/// Why a split does not yield a strongly spherical collection. Indices are 1-based members.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RecoveryDiagnostic {
    NonSpherical { member: usize },
    OrthogonalityViolation { first: usize, second: usize, shift: i64 },
    /// The split could not be completed within the budget.
    Unresolved { member: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommutePair {
    pub first: usize,
    pub second: usize,
    pub report: CommuteReport,
}

#[derive(Clone)]
pub struct Recovery<K> {
    pub split: SummandReport<K>,
    /// Summands deduplicated up to isomorphism and shift, in increasing rank order.
    pub members: Vec<TwistedComplex<K>>,
    pub multiplicities: Vec<usize>,
    /// For each member, one shift `n` per occurrence of `member[n]` as a summand.
    pub shifts: Vec<Vec<i64>>,
    pub collection: Option<SphericalCollection<K>>,
    pub diagnostic: Option<RecoveryDiagnostic>,
    /// Pairwise commutation of the recovered twists, generators = all projectives.
    pub commute: Vec<CommutePair>,
}

impl<K: Field> Recovery<K> {
    pub fn strongly_spherical(&self) -> bool {
        self.collection.is_some()
    }
}

/// Splits `m`, deduplicates up to isomorphism and shift, and checks that the
/// members form a strongly spherical collection whose twists commute.
pub fn recover_collection<K: Field>(m: &TwistedComplex<K>, d: i64, cfg: &Config) -> Result<Recovery<K>, TwistError> {
    let split = split_summands(m, cfg)?;
    let mut members: Vec<TwistedComplex<K>> = Vec::new();
    let mut shifts: Vec<Vec<i64>> = Vec::new();
    let mut resolved: Vec<bool> = Vec::new();
    for p in &split.pieces {
        let mut found = None;
        for (i, q) in members.iter().enumerate() {
            if let Some(n) = isomorphic_up_to_shift(q, &p.object, cfg.seed)? {
                found = Some((i, n));
                break;
            }
        }
        let (i, n) = found.unwrap_or_else(|| {
            members.push(p.object.clone());
            shifts.push(Vec::new());
            resolved.push(true);
            (members.len() - 1, 0)
        });
        shifts[i].extend(std::iter::repeat_n(n, p.multiplicity));
        resolved[i] &= p.resolved;
    }
    let multiplicities = shifts.iter().map(Vec::len).collect();
    let mut diagnostic = resolved.iter().position(|r| !r).map(|i| RecoveryDiagnostic::Unresolved { member: i + 1 });
    if diagnostic.is_none() {
        for (i, x) in members.iter().enumerate() {
            if !is_spherical(x, d)? {
                diagnostic = Some(RecoveryDiagnostic::NonSpherical { member: i + 1 });
                break;
            }
        }
    }
    if diagnostic.is_none() {
        if let Some(v) = strong_sphericity_violation(&members, d)? {
            diagnostic =
                Some(RecoveryDiagnostic::OrthogonalityViolation { first: v.first, second: v.second, shift: v.shift });
        }
    }
    let mut commute = Vec::new();
    let mut collection = None;
    if diagnostic.is_none() {
        let alg = m.algebra();
        let generators = (0..alg.vertices().len()).map(|v| projective(alg, v)).collect::<Result<Vec<_>, _>>()?;
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                let report = commute_classify(&members[i], &members[j], &generators, d, cfg)?;
                commute.push(CommutePair { first: i + 1, second: j + 1, report });
            }
        }
        collection = Some(SphericalCollection { objects: members.clone(), d });
    }
    Ok(Recovery { split, members, multiplicities, shifts, collection, diagnostic, commute })
}
