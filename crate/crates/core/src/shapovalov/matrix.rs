//! Weight-space bases of U(b^±)_ν and the Shapovalov matrix B_ν.

use super::partitions::{partitions, PartitionVector};
use crate::clifford::CliffordElement;
use crate::enveloping::{Uea, UeaElement};
use crate::error::Result;
use crate::exactalg::{PolyMatrix, Polynomial};
use crate::rootdata::{AlgebraKind, GenIndex, RootVector, Species};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Minus,
    Plus,
}

/// Row/column label: partition index and odd-Cartan subset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Label {
    pub partition: usize,
    pub mask: u32,
}

/// Generator word of the root part: Π f^{k_α} Π F^{k_ᾱ} (minus) or
/// Π E^{k_ᾱ} Π e^{k_α} (plus), in PBW order.
pub fn root_word(uea: &Uea, side: Side, p: &PartitionVector) -> Vec<usize> {
    let roots = uea.kind().positive_roots();
    let idx = |s: Species, k: usize| uea.basis().index_of(GenIndex::root(s, roots[k])).expect("root generator");
    let mut word = Vec::new();
    let (even, odd) = match side {
        Side::Minus => (Species::F, Species::OddF),
        Side::Plus => (Species::E, Species::OddE),
    };
    let evens = (0..roots.len()).flat_map(|k| std::iter::repeat(idx(even, k)).take(p.even[k] as usize));
    let odds = (0..roots.len()).filter(|&k| p.odd[k]).map(|k| idx(odd, k));
    match side {
        Side::Minus => word.extend(evens.chain(odds)),
        Side::Plus => word.extend(odds.chain(evens)),
    }
    word
}

fn odd_cartan_word(uea: &Uea, mask: u32) -> Vec<usize> {
    (0..32)
        .filter(|k| mask >> k & 1 == 1)
        .map(|k| uea.basis().index_of(GenIndex::cartan(Species::OddH, k)).expect("odd Cartan"))
        .collect()
}

/// x_i H_I (minus) or y_j H_J (plus) in partition-major, subset-minor order.
pub fn pbw_weight_basis(uea: &Uea, side: Side, nu: &RootVector) -> Result<Vec<UeaElement>> {
    let kind = uea.kind();
    kind.check_root_vector(nu)?;
    let nn = kind.odd_cartan_dim();
    let mut out = Vec::new();
    for p in partitions(nu) {
        let w = root_word(uea, side, &p);
        for mask in 0..1u32 << nn {
            let mut word = w.clone();
            word.extend(odd_cartan_word(uea, mask));
            out.push(uea.normal_order(&word));
        }
    }
    Ok(out)
}

/// Printable names of the basis vectors, in the order of `pbw_weight_basis`,
/// written as words (x_i H_I or y_j H_J) rather than normal-ordered.
pub fn basis_labels(uea: &Uea, side: Side, nu: &RootVector) -> Result<Vec<String>> {
    uea.kind().check_root_vector(nu)?;
    let nn = uea.kind().odd_cartan_dim();
    let mut out = Vec::new();
    for p in partitions(nu) {
        let w = root_word(uea, side, &p);
        for mask in 0..1u32 << nn {
            let mut word = w.clone();
            word.extend(odd_cartan_word(uea, mask));
            let mut parts: Vec<(usize, u32)> = Vec::new();
            for g in word {
                match parts.last_mut() {
                    Some((h, e)) if *h == g => *e += 1,
                    _ => parts.push((g, 1)),
                }
            }
            let names: Vec<String> = parts
                .iter()
                .map(|&(g, e)| {
                    let name = uea.basis().gen(g).to_string();
                    if e == 1 { name } else { format!("{name}^{e}") }
                })
                .collect();
            out.push(if names.is_empty() { "1".into() } else { names.join(" ") });
        }
    }
    Ok(out)
}

/// B_ν with row/column parities.
#[derive(Clone, Debug)]
pub struct ShapovalovMatrix {
    pub kind: AlgebraKind,
    pub nu: RootVector,
    pub partitions: Vec<PartitionVector>,
    pub labels: Vec<Label>,
    pub row_parity: Vec<bool>,
    pub col_parity: Vec<bool>,
    pub matrix: PolyMatrix,
}

impl ShapovalovMatrix {
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    /// Row and column index sets of the two parity blocks; every nonzero
    /// entry lies in one of them.
    pub fn parity_blocks(&self) -> [(Vec<usize>, Vec<usize>); 2] {
        let top = self.kind.odd_cartan_dim() % 2 == 1;
        let pick = |v: &[bool], p: bool| -> Vec<usize> { (0..v.len()).filter(|&i| v[i] == p).collect() };
        [
            (pick(&self.row_parity, false), pick(&self.col_parity, top)),
            (pick(&self.row_parity, true), pick(&self.col_parity, !top)),
        ]
    }

    pub fn blocks(&self) -> Vec<PolyMatrix> {
        self.parity_blocks().iter().map(|(r, c)| self.matrix.submatrix(r, c)).collect()
    }

    /// Sign of the row and column permutations that bring B_ν to block form.
    pub fn block_sign(&self) -> i64 {
        let [(r0, c0), (r1, c1)] = self.parity_blocks();
        let rows: Vec<usize> = r0.into_iter().chain(r1).collect();
        let cols: Vec<usize> = c0.into_iter().chain(c1).collect();
        permutation_sign(&rows) * permutation_sign(&cols)
    }
}

pub fn permutation_sign(p: &[usize]) -> i64 {
    let mut inv = 0usize;
    for i in 0..p.len() {
        for j in (i + 1)..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Entry ((i,I),(j,J)) = (-1)^{p(x_iH_I)p(y_jH_J)} ∫ HC(σ(y_jH_J)·x_iH_I),
/// assembled as ±∫(σ(H_J)·HC(σ(y_j)x_i)·H_I) since HC is an R-bimodule map.
pub fn shapovalov_matrix(uea: &Uea, kind: AlgebraKind, nu: &RootVector) -> Result<ShapovalovMatrix> {
    kind.check_root_vector(nu)?;
    let n = kind.rank();
    let nn = kind.odd_cartan_dim();
    let cl = uea.clifford();
    let parts = partitions(nu);

    let minus: Vec<UeaElement> =
        parts.iter().map(|p| uea.normal_order(&root_word(uea, Side::Minus, p))).collect();
    let plus_words: Vec<Vec<usize>> = parts.iter().map(|p| root_word(uea, Side::Plus, p)).collect();
    let odd_x: Vec<bool> = parts.iter().map(|p| p.odd_count() % 2 == 1).collect();

    // c[j][i] = HC(σ(y_j) x_i)
    let mut c: Vec<Vec<CliffordElement>> = Vec::with_capacity(parts.len());
    for w in &plus_words {
        let (sign, rev) = uea.sigma_word(w);
        let row = minus
            .iter()
            .map(|x| {
                let h = uea.hc_of_word_times(&rev, x);
                let mut out = CliffordElement::zero(n);
                out.add_scaled(&h, &Polynomial::constant(n, sign.clone()));
                out
            })
            .collect();
        c.push(row);
    }

    let size = parts.len() << nn;
    let masks: Vec<u32> = (0..1u32 << nn).collect();
    let sig_h: Vec<CliffordElement> = masks.iter().map(|&m| cl.sigma(&CliffordElement::basis(n, m))).collect();
    let hs: Vec<CliffordElement> = masks.iter().map(|&m| CliffordElement::basis(n, m)).collect();
    let mut labels = Vec::with_capacity(size);
    let mut parity = Vec::with_capacity(size);
    for (i, _) in parts.iter().enumerate() {
        for &mask in &masks {
            labels.push(Label { partition: i, mask });
            parity.push(odd_x[i] ^ (mask.count_ones() % 2 == 1));
        }
    }
    let mut mat = PolyMatrix::zeros(size, size, n);
    for (r, lr) in labels.iter().enumerate() {
        for (col, lc) in labels.iter().enumerate() {
            if (parity[r] ^ parity[col]) != (nn % 2 == 1) {
                continue;
            }
            let cji = &c[lc.partition][lr.partition];
            if cji.is_zero() {
                continue;
            }
            let prod = cl.mul(&sig_h[lc.mask as usize], &cl.mul(cji, &hs[lr.mask as usize]));
            let mut v = cl.integral(&prod);
            let flip = (parity[r] && parity[col]) ^ (odd_x[lc.partition] && lc.mask.count_ones() % 2 == 1);
            if flip {
                v = -v;
            }
            mat.set(r, col, v);
        }
    }
    let matrix = if kind.is_projective() { mat.try_map(|p| kind.project(p))? } else { mat };
    Ok(ShapovalovMatrix {
        kind,
        nu: nu.clone(),
        partitions: parts,
        labels,
        row_parity: parity.clone(),
        col_parity: parity,
        matrix,
    })
}
