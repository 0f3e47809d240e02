//! Hard-coded generating functions for the five string ensembles.
//!
//! Count series `d_n`, the bimultus/persolus bitsum triples, the
//! `(G, H, H_k)` run families behind the moment formulas, and the
//! cross-run families `f_{i,j}`. Nothing here is derived at run time; the
//! enumeration oracle certifies every entry (see the tests below and the
//! `verify` module).

use crate::error::{Error, Result};
use crate::oracle::StringClass;
use crate::series::{Poly, RationalGF};

/// Generating function of `d_n`, the number of class strings of length `n`.
pub fn count_gf(class: StringClass) -> RationalGF {
    let (num, den): (Poly, Poly) = match class {
        StringClass::Unconstrained => (Poly::one(), Poly::from_i64s(&[1, -2])),
        StringClass::Solus => (Poly::from_i64s(&[1, 1]), Poly::from_i64s(&[1, -1, -1])),
        StringClass::Multus => (
            Poly::from_i64s(&[1, -1, 1]),
            Poly::from_i64s(&[1, -2, 1, -1]),
        ),
        StringClass::Bimultus => (Poly::monomial(2, 2), Poly::from_i64s(&[1, -1, -1])),
        StringClass::Persolus => (
            Poly::from_i64s(&[0, 1, 0, 2]),
            Poly::from_i64s(&[1, -1, 0, -1]),
        ),
    };
    RationalGF::fixed(num, den)
}

/// Generating functions of the bitsum totals over an ensemble:
/// `a_n = sum S`, `b_n = sum S^2` and `c_n = d_n b_n - a_n^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitsumTriple {
    pub a: RationalGF,
    pub b: RationalGF,
    pub c: RationalGF,
}

pub fn bitsum_triple(class: StringClass) -> Result<BitsumTriple> {
    let p = Poly::from_i64s;
    match class {
        StringClass::Bimultus => {
            let fib = p(&[1, -1, -1]);
            let a = RationalGF::fixed(p(&[0, 0, 2, -1]), fib.pow(2));
            let b = RationalGF::fixed(
                p(&[0, 0, 4, -7, 4, -1, 4, -1]),
                p(&[1, -1, 1]).mul(&fib.pow(3)),
            );
            let c = RationalGF::fixed(
                p(&[0, 0, 4, -11, 11, -13, 2, 17, -5, -1]),
                p(&[1, 1])
                    .pow(2)
                    .mul(&p(&[1, -3, 1]).pow(2))
                    .mul(&p(&[1, -1, 2, 1, 1])),
            );
            Ok(BitsumTriple { a, b, c })
        }
        StringClass::Persolus => {
            let base = p(&[1, -1, 0, -1]);
            let lead = p(&[0, 1]).mul(&p(&[1, -1, 1]).pow(2));
            let a = RationalGF::fixed(lead.clone(), base.pow(2));
            let b = RationalGF::fixed(lead.mul(&p(&[1, -1, 0, 1])), base.pow(3));
            let c = RationalGF::fixed(
                p(&[0, 0, 0, 2, 4, -6, -6, -16, -8, 8, 14, 5, -2, -3, -1]),
                p(&[1, -1, -2, -1]).pow(2).mul(&p(&[1, 0, 1, -1]).pow(3)),
            );
            Ok(BitsumTriple { a, b, c })
        }
        other => Err(Error::UnsupportedClass(other)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum FamilyKind {
    Unconstrained,
    SolusZeros,
    MultusOnes,
    MultusZeros,
    Bimultus,
    PersolusZeros,
}

/// The `(G, H, H_k)` triple for the longest run of one symbol in one class.
///
/// `H_k` counts class strings with no run of `k` copies of the symbol, `H`
/// is its `k -> infinity` limit and `G` corrects for the `H_k` closed forms
/// that do not count correctly at small `k`.
#[derive(Clone, Debug)]
pub struct RunFamily {
    pub class: StringClass,
    pub bit: u8,
    pub g: RationalGF,
    pub h: RationalGF,
    kind: FamilyKind,
}

impl RunFamily {
    /// `H_k`. The closed form is defined for every `k >= 1`, but only counts
    /// correctly from [`RunFamily::min_valid_k`] on.
    pub fn hk(&self, k: usize) -> RationalGF {
        assert!(k >= 1, "H_k is indexed from k = 1");
        let k = k as i64;
        let t = |terms: &[(i64, i64)]| Poly::from_terms(terms);
        let (num, den) = match self.kind {
            FamilyKind::Unconstrained => (
                t(&[(1, 0), (-1, k)]),
                t(&[(1, 0), (-2, 1), (1, k + 1)]),
            ),
            FamilyKind::SolusZeros => (
                t(&[(1, 0), (1, 1), (-1, k), (-1, k + 1)]),
                t(&[(1, 0), (-1, 1), (-1, 2), (1, k + 1)]),
            ),
            FamilyKind::MultusOnes => (
                t(&[(1, 1), (1, 3), (-1, k), (-1, k + 1)]),
                t(&[(1, 0), (-2, 1), (1, 2), (-1, 3), (1, k + 1)]),
            ),
            FamilyKind::MultusZeros => (
                t(&[(1, 1), (1, 3), (-1, k), (1, k + 1), (-2, k + 2)]),
                t(&[(1, 0), (-2, 1), (1, 2), (-1, 3), (1, k + 2)]),
            ),
            FamilyKind::Bimultus => (
                t(&[(2, 2), (-2, 3), (2, 4), (-1, k), (1, k + 1), (-2, k + 2)]),
                t(&[(1, 0), (-2, 1), (1, 2), (-1, 4), (1, k + 2)]),
            ),
            FamilyKind::PersolusZeros => (
                t(&[(1, 1), (2, 3), (-1, k), (-2, k + 1)]),
                t(&[(1, 0), (-1, 1), (-1, 3), (1, k + 1)]),
            ),
        };
        RationalGF::fixed(num, den)
    }

    /// Smallest `k` from which `[z^n] H_k` equals the number of class strings
    /// of length `n >= 1` whose longest run of the symbol is below `k`.
    ///
    /// Established by exhaustive comparison (see the catalog tests); below
    /// this index the closed form miscounts and `G` absorbs the difference.
    pub fn min_valid_k(&self) -> usize {
        match self.kind {
            FamilyKind::Unconstrained | FamilyKind::SolusZeros | FamilyKind::MultusZeros => 1,
            FamilyKind::MultusOnes | FamilyKind::Bimultus | FamilyKind::PersolusZeros => 2,
        }
    }
}

/// The run family for `bit`-runs of `class`.
pub fn run_family(class: StringClass, bit: u8) -> Result<RunFamily> {
    let p = Poly::from_i64s;
    let (kind, g, h) = match (class, bit) {
        (StringClass::Unconstrained, 0 | 1) => (
            FamilyKind::Unconstrained,
            RationalGF::zero(),
            RationalGF::fixed(Poly::one(), p(&[1, -2])),
        ),
        (StringClass::Solus, 0) => (
            FamilyKind::SolusZeros,
            RationalGF::zero(),
            count_gf(StringClass::Solus),
        ),
        (StringClass::Multus, 0 | 1) => {
            let h = RationalGF::fixed(p(&[0, 1, 0, 1]), p(&[1, -2, 1, -1]));
            if bit == 1 {
                let g = RationalGF::fixed(p(&[0, -1]), p(&[1, -1]).mul(&p(&[1, -1, 1])));
                (FamilyKind::MultusOnes, g, h)
            } else {
                (FamilyKind::MultusZeros, RationalGF::zero(), h)
            }
        }
        (StringClass::Bimultus, 0 | 1) => {
            let g = RationalGF::fixed(
                p(&[0, -1]).mul(&p(&[1, -1, 1]).pow(2)),
                p(&[1, -1]).mul(&p(&[1, -1, 0, 1])),
            );
            let h = RationalGF::fixed(p(&[0, 0, 2, -2, 2]), p(&[1, -2, 1, 0, -1]));
            (FamilyKind::Bimultus, g, h)
        }
        (StringClass::Persolus, 0) => {
            let g = RationalGF::fixed(p(&[0, -1]).mul(&p(&[1, 1]).pow(2)), p(&[1, 0, 1]));
            (FamilyKind::PersolusZeros, g, count_gf(StringClass::Persolus))
        }
        (class, bit) if bit <= 1 => return Err(Error::UndefinedFamily { class, bit }),
        (_, bit) => {
            return Err(Error::InvalidArgument(format!("bit must be 0 or 1, got {bit}")))
        }
    };
    Ok(RunFamily {
        class,
        bit,
        g,
        h,
        kind,
    })
}

/// Every `(class, bit)` pair with a defined run family.
pub fn defined_families() -> Vec<(StringClass, u8)> {
    vec![
        (StringClass::Unconstrained, 0),
        (StringClass::Unconstrained, 1),
        (StringClass::Solus, 0),
        (StringClass::Multus, 0),
        (StringClass::Multus, 1),
        (StringClass::Bimultus, 0),
        (StringClass::Bimultus, 1),
        (StringClass::Persolus, 0),
    ]
}

/// `f_{i,j}`: strings with no run of `i` 1s and no run of `j` 0s.
pub fn cross_gf(class: StringClass, i: usize, j: usize) -> Result<RationalGF> {
    if i == 0 || j == 0 {
        return Err(Error::InvalidArgument(format!(
            "f_{{i,j}} needs i, j >= 1 (got {i}, {j})"
        )));
    }
    let (i, j) = (i as i64, j as i64);
    let t = Poly::from_terms;
    match class {
        StringClass::Unconstrained => Ok(RationalGF::fixed(
            t(&[(1, 0), (-1, i), (-1, j), (1, i + j)]),
            t(&[(1, 0), (-2, 1), (1, i + 1), (1, j + 1), (-1, i + j)]),
        )),
        StringClass::Multus => Ok(RationalGF::fixed(
            t(&[
                (1, 1),
                (1, 3),
                (-1, i),
                (-1, i + 1),
                (-1, j),
                (1, j + 1),
                (-2, j + 2),
                (2, i + j),
            ]),
            t(&[
                (1, 0),
                (-2, 1),
                (1, 2),
                (-1, 3),
                (1, i + 1),
                (1, j + 2),
                (-1, i + j),
            ]),
        )),
        other => Err(Error::UnsupportedClass(other)),
    }
}

/// Smallest `(i, j)` from which `[z^n] f_{i,j}` counts correctly for `n >= 1`.
pub fn cross_min_valid(class: StringClass) -> Result<(usize, usize)> {
    match class {
        StringClass::Unconstrained => Ok((1, 1)),
        StringClass::Multus => Ok((2, 1)),
        other => Err(Error::UnsupportedClass(other)),
    }
}
