use super::{Result, SymmetryError};
use crate::corpus::{
    builtin_equivalence_generators, lagr_flat_ops8, published_equivalence_maps, published_inner_automorphisms, CaseId,
};
use crate::expr::{Atom, Coeff, Expr, Mono, Sym};
use crate::jet::Generator;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Action of a point generator on a function of the coordinates.
fn act(g: &Generator, e: &Expr) -> Expr {
    e.derive_with(
        &|a| match a {
            Atom::T => Some(g.xi_t.clone()),
            Atom::S => Some(g.xi_s.clone()),
            Atom::Jet(j) if j.order() == 0 => Some(g.eta(&j.dep)),
            Atom::Jet(_) => Some(Expr::zero()),
            _ => None,
        },
        None,
    )
}

/// `[g1, g2]` with coefficients `g1(coeff of g2) - g2(coeff of g1)`.
pub fn commutator(g1: &Generator, g2: &Generator) -> Generator {
    let bracket = |c1: &Expr, c2: &Expr| act(g1, c2).sub(&act(g2, c1));
    let mut etas = BTreeMap::new();
    for d in g1.etas.keys().chain(g2.etas.keys()) {
        let v = bracket(&g1.eta(d), &g2.eta(d));
        if !v.is_zero() {
            etas.insert(d.clone(), v);
        }
    }
    Generator {
        xi_t: bracket(&g1.xi_t, &g2.xi_t),
        xi_s: bracket(&g1.xi_s, &g2.xi_s),
        etas,
        label: format!("[{}, {}]", g1.label, g2.label),
    }
}

fn components(g: &Generator) -> Vec<(Sym, &Expr)> {
    let mut out = vec![(Sym::from("@t"), &g.xi_t), (Sym::from("@s"), &g.xi_s)];
    out.extend(g.etas.iter().map(|(k, v)| (k.clone(), v)));
    out
}

/// Constant coefficients `c` with `g = sum c_k basis_k`, by exact
/// elimination over the monomial coefficients; `None` outside the span.
pub fn decompose(g: &Generator, basis: &[Generator]) -> Option<Vec<Coeff>> {
    let n = basis.len();
    let mut index: BTreeMap<(Sym, Mono), usize> = BTreeMap::new();
    let mut rows: Vec<Vec<Coeff>> = Vec::new();
    let mut put = |comp: Sym, m: &Mono, col: usize, c: &Coeff, rows: &mut Vec<Vec<Coeff>>| {
        let r = *index.entry((comp, m.clone())).or_insert_with(|| {
            rows.push(vec![Coeff::zero(); n + 1]);
            rows.len() - 1
        });
        rows[r][col] = rows[r][col].add(c);
    };
    for (k, b) in basis.iter().enumerate() {
        for (comp, e) in components(b) {
            for (m, c) in e.terms() {
                put(comp.clone(), m, k, c, &mut rows);
            }
        }
    }
    for (comp, e) in components(g) {
        for (m, c) in e.terms() {
            put(comp.clone(), m, n, c, &mut rows);
        }
    }
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..rows.len()).find(|r| !rows[*r][col].is_zero()) else { continue };
        rows.swap(rank, p);
        let inv = rows[rank][col].inv()?;
        rows[rank] = rows[rank].iter().map(|x| x.mul(&inv)).collect();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                let pivot_row = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if rows[rank..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    let mut out = vec![Coeff::zero(); n];
    for (i, col) in pivots.iter().enumerate() {
        out[*col] = rows[i][n].clone();
    }
    Some(out)
}

/// Structure constants: `entries[i][j][k]` is the `Y_k` coefficient of
/// `[Y_i, Y_j]` (0-based).
#[derive(Debug, Clone, PartialEq)]
pub struct StructureTable {
    pub labels: Vec<String>,
    pub entries: Vec<Vec<Vec<Coeff>>>,
}

impl StructureTable {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &[Coeff] {
        &self.entries[i][j]
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.entries[i][j].iter().zip(&self.entries[j][i]).all(|(a, b)| a.add(b).is_zero())))
    }

    /// `[[Yi,Yj],Yk]` as a coefficient vector.
    fn double(&self, i: usize, j: usize, k: usize) -> Vec<Coeff> {
        let n = self.dim();
        let mut out = vec![Coeff::zero(); n];
        for (m, c) in self.entries[i][j].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, d) in self.entries[m][k].iter().enumerate() {
                out[o] = out[o].add(&c.mul(d));
            }
        }
        out
    }

    pub fn jacobi_holds(&self) -> bool {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (a, b, c) = (self.double(i, j, k), self.double(j, k, i), self.double(k, i, j));
                    if a.iter().zip(&b).zip(&c).any(|((x, y), z)| !x.add(y).add(z).is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Positions `(i, j)` (1-based) where the table differs from integer data.
    pub fn mismatches(&self, published: &[Vec<Vec<i64>>]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, row) in published.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let same = v.iter().zip(&self.entries[i][j]).all(|(p, c)| Coeff::from_int(*p) == *c);
                if !same {
                    out.push((i + 1, j + 1));
                }
            }
        }
        out
    }
}

pub fn structure_table(basis: &[Generator]) -> Result<StructureTable> {
    let n = basis.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let flat: Vec<Vec<Coeff>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let c = commutator(&basis[i], &basis[j]);
            decompose(&c, basis).ok_or_else(|| SymmetryError::NotClosed(basis[i].label.clone(), basis[j].label.clone()))
        })
        .collect::<Result<_>>()?;
    let mut it = flat.into_iter();
    let entries = (0..n).map(|_| (0..n).map(|_| it.next().expect("n*n entries")).collect()).collect();
    Ok(StructureTable { labels: basis.iter().map(|g| g.label.clone()).collect(), entries })
}

pub fn is_subalgebra(gens: &[Generator]) -> bool {
    (0..gens.len()).all(|i| (i + 1..gens.len()).all(|j| decompose(&commutator(&gens[i], &gens[j]), gens).is_some()))
}

/// Whether `sub` is an ideal of the algebra spanned by `basis`.
pub fn is_ideal(sub: &[Generator], basis: &[Generator]) -> bool {
    sub.iter().all(|s| basis.iter().all(|b| decompose(&commutator(b, s), sub).is_some()))
}

/// Linear map `kappa -> kappa~ = matrix * kappa` depending on the group
/// parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjointMap {
    pub generator: usize,
    pub matrix: Vec<Vec<Expr>>,
}

/// Symbols `k1..kn` standing for the coordinates of a generator in the basis.
pub fn kappa_vector(n: usize) -> Vec<Expr> {
    (1..=n).map(|i| Expr::constant(&format!("k{}", i))).collect()
}

pub fn apply_map(m: &AdjointMap, kappa: &[Expr]) -> Vec<Expr> {
    m.matrix
        .iter()
        .map(|row| row.iter().zip(kappa).fold(Expr::zero(), |acc, (e, k)| acc.add(&e.mul(k))))
        .collect()
}

fn mat_mul(a: &[Vec<Coeff>], b: &[Vec<Coeff>]) -> Vec<Vec<Coeff>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).fold(Coeff::zero(), |acc, k| acc.add(&a[i][k].mul(&b[k][j])))).collect())
        .collect()
}

/// `exp(a M)` for `M = D + N` with `D` diagonal, `N` nilpotent, `DN = ND`.
fn exp_split(m: &[Vec<Coeff>], a: &Expr, j: usize) -> Result<Vec<Vec<Expr>>> {
    let n = m.len();
    let d: Vec<Vec<Coeff>> =
        (0..n).map(|i| (0..n).map(|k| if i == k { m[i][i].clone() } else { Coeff::zero() }).collect()).collect();
    let nil: Vec<Vec<Coeff>> = (0..n).map(|i| (0..n).map(|k| m[i][k].sub(&d[i][k])).collect()).collect();
    if mat_mul(&d, &nil) != mat_mul(&nil, &d) {
        return Err(SymmetryError::NoClosedForm(j));
    }
    let mut powers = vec![(0..n).map(|i| (0..n).map(|k| if i == k { Coeff::one() } else { Coeff::zero() }).collect::<Vec<_>>()).collect::<Vec<_>>()];
    for _ in 1..=n {
        let next = mat_mul(powers.last().expect("nonempty"), &nil);
        powers.push(next);
    }
    if powers[n].iter().flatten().any(|c| !c.is_zero()) {
        return Err(SymmetryError::NoClosedForm(j));
    }
    let mut series = vec![vec![Expr::zero(); n]; n];
    let mut ak = Expr::one();
    let mut fact = Coeff::one();
    for (k, p) in powers.iter().enumerate().take(n) {
        if k > 0 {
            ak = ak.mul(a);
            fact = fact.mul(&Coeff::from_int(k as i64));
        }
        let scale = fact.inv().expect("nonzero factorial");
        for i in 0..n {
            for l in 0..n {
                if !p[i][l].is_zero() {
                    series[i][l].add_assign(&ak.scale(&p[i][l].mul(&scale)));
                }
            }
        }
    }
    Ok((0..n).map(|i| {
        let e = Expr::from_coeff(d[i][i].clone()).mul(a).exp();
        series[i].iter().map(|x| e.mul(x)).collect()
    })
    .collect())
}

/// Inner automorphism generated by basis element `j` (1-based): solution of
/// `d kappa~ / da = -ad(Y_j) kappa~` with `kappa~(0) = kappa`.
pub fn adjoint_coefficient_map(table: &StructureTable, j: usize, a: &Expr) -> Result<AdjointMap> {
    let n = table.dim();
    if j == 0 || j > n {
        return Err(SymmetryError::BadIndex(j));
    }
    let m: Vec<Vec<Coeff>> = (0..n).map(|g| (0..n).map(|al| table.entries[j - 1][al][g].neg()).collect()).collect();
    Ok(AdjointMap { generator: j, matrix: exp_split(&m, a, j)? })
}

fn equivalence_route_map(j: usize, basis: &[Generator], a: &Expr) -> Result<Vec<Expr>> {
    let list = builtin_equivalence_generators(CaseId::FiniteSigmaH0zeroReduced);
    let mut xe = list.generators[j - 1].generator.clone();
    for d in &list.elements {
        xe.etas.remove(&d.name);
    }
    let n = basis.len();
    let cols: Vec<Vec<Coeff>> = basis
        .iter()
        .map(|y| {
            decompose(&commutator(&xe, y), basis).ok_or_else(|| SymmetryError::NotClosed(xe.label.clone(), y.label.clone()))
        })
        .collect::<Result<_>>()?;
    let m: Vec<Vec<Coeff>> = (0..n).map(|g| (0..n).map(|al| cols[al][g].neg()).collect()).collect();
    let map = AdjointMap { generator: j, matrix: exp_split(&m, a, j)? };
    Ok(apply_map(&map, &kappa_vector(n)))
}

/// Comparison for one generator index of the reduced algebra.
#[derive(Debug, Clone)]
pub struct ActionMatch {
    pub index: usize,
    pub adjoint: Vec<Expr>,
    /// Adjoint map equals the published inner automorphism.
    pub inner_ok: bool,
    /// Adjoint map equals the published equivalence coefficient change.
    pub equivalence_ok: bool,
    /// The map recomputed from the equivalence generator itself agrees.
    pub generator_route_ok: bool,
}

pub fn equivalence_action_report() -> Result<Vec<ActionMatch>> {
    let basis = lagr_flat_ops8();
    let table = structure_table(&basis)?;
    let a = Expr::constant("a");
    let inner = published_inner_automorphisms();
    let eq = published_equivalence_maps();
    let kappa = kappa_vector(basis.len());
    [1usize, 2, 3, 4, 6, 7, 8]
        .iter()
        .map(|&j| {
            let adjoint = apply_map(&adjoint_coefficient_map(&table, j, &a)?, &kappa);
            let route = equivalence_route_map(j, &basis, &a)?;
            Ok(ActionMatch {
                index: j,
                inner_ok: inner.get(&j) == Some(&adjoint),
                equivalence_ok: eq.get(&j) == Some(&adjoint),
                generator_route_ok: route == adjoint,
                adjoint,
            })
        })
        .collect()
}

/// True iff the published equivalence coefficient maps coincide with the
/// computed inner automorphisms.
pub fn verify_equivalence_action_match() -> Result<bool> {
    Ok(equivalence_action_report()?.iter().all(|m| m.equivalence_ok))
}
