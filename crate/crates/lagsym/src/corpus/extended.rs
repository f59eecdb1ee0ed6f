use super::corpus_context;
use super::generators::lagr_flat_ops8;
use crate::expr::Expr;
use crate::jet::Generator;
use std::collections::BTreeMap;

type Entry = &'static [(i64, usize)];

/// Published commutators `[Y_i, Y_j]` of the eight-dimensional algebra as
/// `(integer coefficient, basis index)` lists, 1-based.
const COMMUTATORS: [[Entry; 8]; 8] = [
    [&[], &[], &[], &[(1, 3)], &[], &[(1, 1)], &[], &[]],
    [&[], &[], &[], &[], &[], &[(2, 2)], &[(-1, 2)], &[(2, 2)]],
    [&[], &[], &[], &[], &[], &[], &[(1, 3)], &[]],
    [&[(-1, 3)], &[], &[], &[], &[], &[(-1, 4)], &[(1, 4)], &[]],
    [&[], &[], &[], &[], &[], &[], &[], &[]],
    [&[(-1, 1)], &[(-2, 2)], &[], &[(1, 4)], &[], &[], &[], &[]],
    [&[], &[(1, 2)], &[(-1, 3)], &[(-1, 4)], &[], &[], &[], &[]],
    [&[], &[(-2, 2)], &[], &[], &[], &[], &[], &[]],
];

/// The published commutator table as dense integer coefficient vectors.
pub fn published_commutators() -> Vec<Vec<Vec<i64>>> {
    COMMUTATORS
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| {
                    let mut v = vec![0; 8];
                    for (c, k) in e.iter() {
                        v[k - 1] += c;
                    }
                    v
                })
                .collect()
        })
        .collect()
}

/// Coefficient maps `kappa -> kappa~` in the symbols `k1..k8` and the group
/// parameter `a`; unchanged coordinates are filled in.
fn expand(changes: &[(usize, &str)]) -> Vec<Expr> {
    let ctx = corpus_context();
    let mut out: Vec<Expr> = (1..=8).map(|i| Expr::constant(&format!("k{}", i))).collect();
    for (i, text) in changes {
        out[i - 1] = ctx.p(text);
    }
    out
}

/// Inner automorphisms of the algebra, keyed by the generating basis index.
pub fn published_inner_automorphisms() -> BTreeMap<usize, Vec<Expr>> {
    BTreeMap::from([
        (1, expand(&[(1, "k1 - a*k6"), (3, "k3 - a*k4")])),
        (2, expand(&[(2, "k2 - a*(2*k6 - k7 + 2*k8)")])),
        (3, expand(&[(3, "k3 - a*k7")])),
        (4, expand(&[(3, "k3 + a*k1"), (4, "k4 + a*(k6 - k7)")])),
        (6, expand(&[(1, "exp(a)*k1"), (2, "exp(2*a)*k2"), (4, "exp(-a)*k4")])),
        (7, expand(&[(2, "exp(-a)*k2"), (3, "exp(a)*k3"), (4, "exp(a)*k4")])),
        (8, expand(&[(2, "exp(2*a)*k2")])),
    ])
}

/// Coefficient changes induced by the equivalence transformations of the
/// reduced system, keyed by the equivalence generator index.
pub fn published_equivalence_maps() -> BTreeMap<usize, Vec<Expr>> {
    BTreeMap::from([
        (1, expand(&[(1, "k1 - a*k6"), (3, "k3 - a*k4")])),
        (2, expand(&[(2, "k2 - a*(2*k6 - k7 + 2*k8)")])),
        (3, expand(&[(3, "k3 - a*k7")])),
        (4, expand(&[(3, "k3 + a*k1"), (4, "k4 + a*(k6 - k7)")])),
        (6, expand(&[(1, "exp(a)*k1"), (2, "exp(2*a)*k2"), (4, "exp(-a)*k4")])),
        (7, expand(&[(2, "exp(-a)*k2"), (3, "exp(a)*k3"), (4, "exp(a)*k4")])),
        (8, expand(&[(2, "exp(2*a)*k2")])),
    ])
}

fn combo(label: &str, basis: &[Generator], parts: &[(&str, usize)]) -> Generator {
    let ctx = corpus_context();
    let ps: Vec<(Expr, &Generator)> = parts.iter().map(|(k, i)| (ctx.p(k), &basis[*i - 1])).collect();
    Generator::combine(label, &ps)
}

/// Subalgebras of `{Y6, Y7, Y8}` that may extend the kernel, with symbolic
/// `alpha`, `beta`.
pub fn extension_subalgebras() -> Vec<(String, Vec<Generator>)> {
    let y = lagr_flat_ops8();
    let one = |l: &str, parts: &[(&str, usize)]| combo(l, &y, parts);
    vec![
        ("{Y7}".into(), vec![one("Y7", &[("1", 7)])]),
        ("{Y6 + alpha Y7}".into(), vec![one("Y6+aY7", &[("1", 6), ("alpha", 7)])]),
        ("{Y8 + alpha Y6 + beta Y7}".into(), vec![one("Y8+aY6+bY7", &[("1", 8), ("alpha", 6), ("beta", 7)])]),
        ("{Y6, Y7}".into(), vec![one("Y6", &[("1", 6)]), one("Y7", &[("1", 7)])]),
        ("{Y8 + alpha Y6, Y7}".into(), vec![one("Y8+aY6", &[("1", 8), ("alpha", 6)]), one("Y7", &[("1", 7)])]),
        (
            "{Y8 + alpha Y7, Y6 + beta Y7}".into(),
            vec![one("Y8+aY7", &[("1", 8), ("alpha", 7)]), one("Y6+bY7", &[("1", 6), ("beta", 7)])],
        ),
        ("{Y6, Y7, Y8}".into(), vec![one("Y6", &[("1", 6)]), one("Y7", &[("1", 7)]), one("Y8", &[("1", 8)])]),
    ]
}
