//! The cohomologies of a bi-differential complex, the maps between them,
//! and the Lefschetz / Brylinski / `∂∂̄`-lemma verdicts.

use std::fmt;

use crate::complex::BiDifferentialComplex;
use crate::linalg::{image, intersect, kernel, sum, Matrix, Quotient, Subspace};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CohomologyKind {
    /// `ker ∂ / im ∂`.
    DeRham,
    /// `ker ∂̄ / im ∂̄`.
    Debar,
    /// `(ker ∂ ∩ ker ∂̄) / im ∂∂̄`.
    BottChern,
    /// `ker ∂∂̄ / (im ∂ + im ∂̄)`.
    Aeppli,
    /// `ker ∂ ∩ ker ∂̄`, no quotient.
    Harmonic,
}

impl CohomologyKind {
    pub const ALL: [CohomologyKind; 5] = [
        CohomologyKind::DeRham,
        CohomologyKind::Debar,
        CohomologyKind::BottChern,
        CohomologyKind::Aeppli,
        CohomologyKind::Harmonic,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            CohomologyKind::DeRham => "dR",
            CohomologyKind::Debar => "dLambda",
            CohomologyKind::BottChern => "BC",
            CohomologyKind::Aeppli => "A",
            CohomologyKind::Harmonic => "harmonic",
        }
    }
}

impl fmt::Display for CohomologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologySpace {
    pub kind: CohomologyKind,
    /// Index into the complex (add `min_degree` for the actual degree).
    pub degree: usize,
    pub quotient: Quotient,
}

impl CohomologySpace {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    /// Canonical cocycle lifts of a basis of the quotient.
    pub fn representatives(&self) -> &Subspace {
        &self.quotient.representatives
    }

    /// Coordinates of the class of `v` in the representative basis, `None`
    /// when `v` is not a cocycle of this kind.
    pub fn class_of(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        self.quotient.coordinates(v).ok()
    }
}

/// `∂∂̄` on `A^k`, i.e. `∂̄` down to `A^{k−1}` followed by `∂` back up.
pub fn del_debar(c: &BiDifferentialComplex, k: usize) -> Matrix {
    let k = k as i64;
    &c.del_from(k - 1) * &c.debar_from(k)
}

pub fn cohomology(c: &BiDifferentialComplex, kind: CohomologyKind, k: usize) -> CohomologySpace {
    let ki = k as i64;
    let ambient = c.dims[k];
    let (num, den) = match kind {
        CohomologyKind::DeRham => (kernel(&c.del_from(ki)), image(&c.del_from(ki - 1))),
        CohomologyKind::Debar => (kernel(&c.debar_from(ki)), image(&c.debar_from(ki + 1))),
        CohomologyKind::BottChern => {
            let num = intersect(&kernel(&c.del_from(ki)), &kernel(&c.debar_from(ki)));
            let den = image(&del_debar(c, k));
            let other = image(&(&c.debar_from(ki + 1) * &c.del_from(ki)));
            assert_eq!(den, other, "im ∂∂̄ and im ∂̄∂ differ in degree {k}: ∂ and ∂̄ do not anticommute");
            (num, den)
        }
        CohomologyKind::Aeppli => {
            let num = kernel(&del_debar(c, k));
            let den = sum(&image(&c.del_from(ki - 1)), &image(&c.debar_from(ki + 1)));
            (num, den)
        }
        CohomologyKind::Harmonic => {
            (intersect(&kernel(&c.del_from(ki)), &kernel(&c.debar_from(ki))), Subspace::zero(ambient))
        }
    };
    let quotient = Quotient::new(num, den).expect("coboundaries lie inside cocycles");
    CohomologySpace { kind, degree: k, quotient }
}

pub fn all_degrees(c: &BiDifferentialComplex, kind: CohomologyKind) -> Vec<CohomologySpace> {
    (0..c.len()).map(|k| cohomology(c, kind, k)).collect()
}

pub fn h_dr(c: &BiDifferentialComplex) -> Vec<CohomologySpace> {
    all_degrees(c, CohomologyKind::DeRham)
}

pub fn h_debar(c: &BiDifferentialComplex) -> Vec<CohomologySpace> {
    all_degrees(c, CohomologyKind::Debar)
}

pub fn h_bc(c: &BiDifferentialComplex) -> Vec<CohomologySpace> {
    all_degrees(c, CohomologyKind::BottChern)
}

pub fn h_aeppli(c: &BiDifferentialComplex) -> Vec<CohomologySpace> {
    all_degrees(c, CohomologyKind::Aeppli)
}

pub fn harmonic_space(c: &BiDifferentialComplex) -> Vec<CohomologySpace> {
    all_degrees(c, CohomologyKind::Harmonic)
}

/// A linear map between two cohomology spaces in representative bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedMap {
    pub source: (CohomologyKind, usize),
    pub target: (CohomologyKind, usize),
    pub matrix: Matrix,
    pub rank: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub injective: bool,
    pub surjective: bool,
}

impl InducedMap {
    pub fn bijective(&self) -> bool {
        self.injective && self.surjective
    }
}

/// Matrix of `v ↦ [f(v)]` over the source representatives.
pub fn induced_map(source: &CohomologySpace, target: &CohomologySpace, f: &Matrix) -> InducedMap {
    let columns: Vec<Vec<Scalar>> = source
        .representatives()
        .basis()
        .iter()
        .map(|v| target.class_of(&f.apply(v)).expect("image is a cocycle of the target kind"))
        .collect();
    let matrix = Matrix::from_columns(target.dim(), &columns);
    let rank = matrix.rank();
    InducedMap {
        source: (source.kind, source.degree),
        target: (target.kind, target.degree),
        rank,
        source_dim: source.dim(),
        target_dim: target.dim(),
        injective: rank == source.dim(),
        surjective: rank == target.dim(),
        matrix,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("no natural map {from} → {to}")]
pub struct UnsupportedMap {
    pub from: CohomologyKind,
    pub to: CohomologyKind,
}

/// The map induced by the identity between two cohomologies of one degree.
pub fn natural_map(
    c: &BiDifferentialComplex,
    from: CohomologyKind,
    to: CohomologyKind,
    k: usize,
) -> Result<InducedMap, UnsupportedMap> {
    use CohomologyKind::*;
    let supported = matches!(
        (from, to),
        (BottChern, DeRham)
            | (BottChern, Debar)
            | (BottChern, Aeppli)
            | (DeRham, Aeppli)
            | (Debar, Aeppli)
            | (Harmonic, DeRham)
            | (Harmonic, BottChern)
    );
    if !supported {
        return Err(UnsupportedMap { from, to });
    }
    let source = cohomology(c, from, k);
    let target = cohomology(c, to, k);
    Ok(induced_map(&source, &target, &Matrix::identity(c.dims[k])))
}

/// `[L^j]: H^{n−j}_dR → H^{n+j}_dR`; `None` without Lefschetz data or when
/// the degrees fall outside the complex.
pub fn lefschetz_map(c: &BiDifferentialComplex, j: usize) -> Option<InducedMap> {
    let lf = c.lefschetz.as_ref()?;
    let source_k = lf.middle.checked_sub(j)?;
    let target_k = lf.middle + j;
    if target_k >= c.len() {
        return None;
    }
    let source = cohomology(c, CohomologyKind::DeRham, source_k);
    let target = cohomology(c, CohomologyKind::DeRham, target_k);
    Some(induced_map(&source, &target, &lf.power(&c.dims, source_k, j)))
}

/// Dimensions of `im ∂̄ ∩ ker ∂`, `im ∂∂̄`, `im ∂ ∩ ker ∂̄` in one degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceComparison {
    pub degree: usize,
    pub debar_exact_del_closed: usize,
    pub del_debar_exact: usize,
    pub del_exact_debar_closed: usize,
    pub all_equal: bool,
}

pub fn subspace_comparison(c: &BiDifferentialComplex, k: usize) -> SubspaceComparison {
    let ki = k as i64;
    let a = intersect(&image(&c.debar_from(ki + 1)), &kernel(&c.del_from(ki)));
    let b = image(&del_debar(c, k));
    let e = intersect(&image(&c.del_from(ki - 1)), &kernel(&c.debar_from(ki)));
    SubspaceComparison {
        degree: k,
        debar_exact_del_closed: a.dim(),
        del_debar_exact: b.dim(),
        del_exact_debar_closed: e.dim(),
        all_equal: a == b && b == e,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LefschetzRank {
    pub k: usize,
    pub rank: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub injective: bool,
    pub surjective: bool,
}

/// Per-degree dimensions of the four cohomologies.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CohomologyDims {
    pub dr: Vec<usize>,
    pub debar: Vec<usize>,
    pub bc: Vec<usize>,
    pub aeppli: Vec<usize>,
}

impl CohomologyDims {
    /// `Δ^k = dim H_BC + dim H_A − 2 dim H_dR`.
    pub fn delta(&self) -> Vec<i64> {
        (0..self.dr.len()).map(|k| self.bc[k] as i64 + self.aeppli[k] as i64 - 2 * self.dr[k] as i64).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerdictReport {
    pub dims: CohomologyDims,
    pub delta: Vec<i64>,
    /// All `[ω^k]` bijective; `None` for complexes without `L`.
    pub hlc: Option<bool>,
    pub lefschetz: Vec<LefschetzRank>,
    /// Every `[ω^k]` surjective (injectivity can differ in twisted cases).
    pub lefschetz_surjective: Option<bool>,
    pub lefschetz_injective: Option<bool>,
    /// Per degree: harmonic cocycles surject onto `H_dR`.
    pub harmonic_surjective: Vec<bool>,
    pub brylinski: bool,
    pub bc_to_dr_injective: Vec<bool>,
    pub bc_to_dr_surjective: Vec<bool>,
    /// `H_BC → H_dR` injective in every degree.
    pub dd_lambda_lemma: bool,
    pub bc_to_dr_bijective: bool,
    pub subspaces: Vec<SubspaceComparison>,
}

impl VerdictReport {
    pub fn delta_vanishes(&self) -> bool {
        self.delta.iter().all(|&d| d == 0)
    }

    pub fn delta_nonnegative(&self) -> bool {
        self.delta.iter().all(|&d| d >= 0)
    }

    /// Whether the three subspaces coincide in every degree.
    pub fn subspaces_equal(&self) -> bool {
        self.subspaces.iter().all(|s| s.all_equal)
    }

    /// HLC, `Δ ≡ 0`, Brylinski and the lemma give one answer (HLC is
    /// skipped when unavailable).
    pub fn equivalences_agree(&self) -> bool {
        let reference = self.dd_lambda_lemma;
        self.hlc.is_none_or(|h| h == reference)
            && self.delta_vanishes() == reference
            && self.brylinski == reference
            && self.subspaces_equal() == reference
    }

    /// Harmonic surjectivity against surjectivity of every `[ω^k]`.
    pub fn harmonic_criterion_agrees(&self) -> Option<bool> {
        self.lefschetz_surjective.map(|s| s == self.brylinski)
    }
}

/// Dimensions of all four cohomologies.
pub fn cohomology_dims(c: &BiDifferentialComplex) -> CohomologyDims {
    let dims = |kind| all_degrees(c, kind).iter().map(CohomologySpace::dim).collect();
    CohomologyDims {
        dr: dims(CohomologyKind::DeRham),
        debar: dims(CohomologyKind::Debar),
        bc: dims(CohomologyKind::BottChern),
        aeppli: dims(CohomologyKind::Aeppli),
    }
}

pub fn verdicts(c: &BiDifferentialComplex) -> VerdictReport {
    let top = c.len();
    let dr = h_dr(c);
    let bc = h_bc(c);
    let harmonic = harmonic_space(c);
    let dims = CohomologyDims {
        dr: dr.iter().map(CohomologySpace::dim).collect(),
        debar: h_debar(c).iter().map(CohomologySpace::dim).collect(),
        bc: bc.iter().map(CohomologySpace::dim).collect(),
        aeppli: h_aeppli(c).iter().map(CohomologySpace::dim).collect(),
    };
    let mut bc_inj = Vec::new();
    let mut bc_surj = Vec::new();
    let mut harm_surj = Vec::new();
    for k in 0..top {
        let id = Matrix::identity(c.dims[k]);
        let m = induced_map(&bc[k], &dr[k], &id);
        bc_inj.push(m.injective);
        bc_surj.push(m.surjective);
        harm_surj.push(induced_map(&harmonic[k], &dr[k], &id).surjective);
    }
    let lefschetz: Vec<LefschetzRank> = match &c.lefschetz {
        Some(lf) => (0..=lf.middle)
            .filter_map(|j| lefschetz_map(c, j))
            .enumerate()
            .map(|(j, m)| LefschetzRank {
                k: j,
                rank: m.rank,
                source_dim: m.source_dim,
                target_dim: m.target_dim,
                injective: m.injective,
                surjective: m.surjective,
            })
            .collect(),
        None => Vec::new(),
    };
    let has_l = c.lefschetz.is_some();
    let lefschetz_surjective = has_l.then(|| lefschetz.iter().all(|l| l.surjective));
    let lefschetz_injective = has_l.then(|| lefschetz.iter().all(|l| l.injective));
    let hlc = has_l.then(|| lefschetz.iter().all(|l| l.injective && l.surjective));
    let dd_lambda_lemma = bc_inj.iter().all(|&b| b);
    VerdictReport {
        delta: dims.delta(),
        dims,
        hlc,
        lefschetz,
        lefschetz_surjective,
        lefschetz_injective,
        brylinski: harm_surj.iter().all(|&b| b),
        harmonic_surjective: harm_surj,
        bc_to_dr_bijective: dd_lambda_lemma && bc_surj.iter().all(|&b| b),
        bc_to_dr_injective: bc_inj,
        bc_to_dr_surjective: bc_surj,
        dd_lambda_lemma,
        subspaces: (0..top).map(|k| subspace_comparison(c, k)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::parse_raw_complex;

    #[test]
    fn zero_complex() {
        let c = parse_raw_complex("dims 0 0 0").unwrap();
        let r = verdicts(&c);
        assert_eq!(r.dims.dr, vec![0, 0, 0]);
        assert!(r.dd_lambda_lemma && r.brylinski && r.hlc.is_none());
    }

    #[test]
    fn two_arrows() {
        // A^0 = <u>, A^1 = <∂u, v>, A^2 = <w> with ∂̄w = v
        let text = "dims 1 2 1\n\
                    del 0\n1\n0\n\
                    del 1\n0 0\n\
                    debar 1\n0 0\n\
                    debar 2\n0\n1\n";
        let c = parse_raw_complex(text).unwrap();
        let d = cohomology_dims(&c);
        assert_eq!(d.dr, vec![0, 1, 1]);
        assert_eq!(d.debar, vec![1, 1, 0]);
        assert_eq!(d.bc, vec![0, 2, 0]);
        assert_eq!(d.aeppli, vec![1, 0, 1]);
        assert_eq!(d.delta(), vec![1, 0, -1]);
    }

    #[test]
    fn unsupported_map() {
        let c = parse_raw_complex("dims 1").unwrap();
        assert!(natural_map(&c, CohomologyKind::DeRham, CohomologyKind::BottChern, 0).is_err());
        assert!(natural_map(&c, CohomologyKind::BottChern, CohomologyKind::DeRham, 0).unwrap().bijective());
    }
}
