use std::sync::{Arc, OnceLock};

use super::{two_form_matrix, ContactError, ContactPair, ContactPairStructure, Projections};
use crate::frame::{Connection, EndoField, FramePresentation, MetricField, VectorField};
use crate::linalg::Matrix;
use crate::report::{frame_label, residual_check, Check};
use crate::scalar::ScalarExpr;

use super::structure::matrix_entries;

/// A contact pair structure with a metric and its verdicts.
///
/// The Levi-Civita connection and the projections are computed once on
/// first use and shared read-only afterwards.
#[derive(Debug)]
pub struct MetricContactPair {
    structure: ContactPairStructure,
    metric: MetricField,
    compatible: Check,
    associated: Check,
    orthogonal: Check,
    foliations_orthogonal: Check,
    checks: Vec<Check>,
    connection: OnceLock<Arc<Connection>>,
    projections: OnceLock<Arc<Projections>>,
}

impl Clone for MetricContactPair {
    fn clone(&self) -> Self {
        MetricContactPair {
            structure: self.structure.clone(),
            metric: self.metric.clone(),
            compatible: self.compatible.clone(),
            associated: self.associated.clone(),
            orthogonal: self.orthogonal.clone(),
            foliations_orthogonal: self.foliations_orthogonal.clone(),
            checks: self.checks.clone(),
            connection: self.connection.clone(),
            projections: self.projections.clone(),
        }
    }
}

impl MetricContactPair {
    pub fn structure(&self) -> &ContactPairStructure {
        &self.structure
    }

    pub fn pair(&self) -> &ContactPair {
        self.structure.pair()
    }

    pub fn frame(&self) -> &Arc<FramePresentation> {
        self.pair().frame()
    }

    pub fn metric(&self) -> &MetricField {
        &self.metric
    }

    pub fn phi(&self) -> &EndoField {
        self.structure.phi()
    }

    pub fn dim(&self) -> usize {
        self.pair().dim()
    }

    pub fn is_compatible(&self) -> bool {
        self.compatible.passed()
    }

    pub fn is_associated(&self) -> bool {
        self.associated.passed()
    }

    pub fn is_decomposable(&self) -> bool {
        self.structure.is_decomposable()
    }

    pub fn compatible(&self) -> &Check {
        &self.compatible
    }

    pub fn associated(&self) -> &Check {
        &self.associated
    }

    /// Every verdict recorded by `validate_metric`.
    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    pub fn connection(&self) -> Arc<Connection> {
        self.connection
            .get_or_init(|| {
                Arc::new(Connection::levi_civita(self.frame().as_ref(), &self.metric).expect("metric dimension was checked"))
            })
            .clone()
    }

    pub fn projections(&self) -> Arc<Projections> {
        self.projections.get_or_init(|| Arc::new(self.pair().splitting().projections(&self.metric))).clone()
    }

    pub fn basis(&self, a: usize) -> VectorField {
        VectorField::basis(self.dim(), a)
    }

    /// `α_i(X)` for a field in frame components.
    pub fn alpha_at(&self, i: usize, x: &VectorField) -> ScalarExpr {
        self.pair()
            .alpha_components(i)
            .iter()
            .zip(x.components())
            .filter(|(a, _)| !a.is_zero())
            .map(|(a, b)| a * b)
            .sum()
    }
}

/// Compatibility, associated-ness and the orthogonality statements.
pub fn validate_metric(structure: &ContactPairStructure, g: MetricField) -> Result<MetricContactPair, ContactError> {
    let pair = structure.pair();
    let n = pair.dim();
    if g.dim() != n {
        return Err(crate::frame::FrameError::DimensionMismatch(g.dim(), n).into());
    }
    let coords = pair.frame().coordinates().clone();
    let gm = g.gram();
    let phi = structure.phi().matrix();
    let a = [pair.alpha_components(0), pair.alpha_components(1)];
    let outer = |v: &[ScalarExpr]| Matrix::from_fn(n, n, |x, y| &v[x] * &v[y]);

    let compat = phi.transpose().mul(gm).mul(phi).sub(gm).add(&outer(&a[0])).add(&outer(&a[1]));
    let compatible = residual_check("metric.compatible", &coords, "g(φX,φY) − g(X,Y) + Σα_i(X)α_i(Y)", matrix_entries(&compat));

    let dsum = two_form_matrix(pair.dalpha(0)).add(&two_form_matrix(pair.dalpha(1)));
    let assoc = gm.mul(phi).sub(&dsum);
    let reeb_dual: Vec<(String, ScalarExpr)> = (0..2)
        .flat_map(|i| {
            let gz = gm.mul_vec(pair.reeb(i).components());
            gz.into_iter().zip(a[i].clone()).enumerate().map(move |(x, (l, r))| (format!("g({}, Z{}) − α{}", frame_label(x), i + 1, i + 1), &l - &r))
        })
        .collect();
    let associated = residual_check(
        "metric.associated",
        &coords,
        "g(X,φY) − (dα₁+dα₂)(X,Y), g(X,Z_i) − α_i(X)",
        matrix_entries(&assoc).chain(reeb_dual),
    );
    let implication = Check::from_bool(
        "metric.associated_implies_compatible",
        !associated.passed() || compatible.passed(),
        if associated.passed() { "associated and compatible" } else { "not associated; implication vacuous" },
    );

    let s = pair.splitting();
    let gr = &g;
    let blocks: [(String, Vec<VectorField>); 4] = [
        ("H1".into(), s.h(0).to_vec()),
        ("H2".into(), s.h(1).to_vec()),
        ("RZ1".into(), vec![pair.reeb(0).clone()]),
        ("RZ2".into(), vec![pair.reeb(1).clone()]),
    ];
    let cross = (0..4).flat_map(|p| (p + 1..4).map(move |q| (p, q))).flat_map(|(p, q)| {
        let (bp, bq) = (&blocks[p], &blocks[q]);
        bp.1.iter().enumerate().flat_map(move |(i, u)| {
            bq.1.iter().enumerate().map(move |(j, v)| (format!("g({}[{}], {}[{}])", bp.0, i + 1, bq.0, j + 1), gr.inner(u, v)))
        })
    });
    let orthogonal = residual_check("metric.orthogonal", &coords, "cross inner products of H1, H2, RZ1, RZ2", cross);

    let tf = [s.tf(0), s.tf(1)];
    let fol = tf[0].iter().enumerate().flat_map(|(i, u)| {
        tf[1].iter().enumerate().map(move |(j, v)| (format!("g(TF1[{}], TF2[{}])", i + 1, j + 1), gr.inner(u, v)))
    });
    let foliations_orthogonal = residual_check("metric.foliations_orthogonal", &coords, "g(TF1, TF2)", fol);
    let equivalence = Check::from_bool(
        "metric.decomposable_iff_orthogonal",
        !associated.passed() || structure.is_decomposable() == foliations_orthogonal.passed(),
        format!(
            "decomposable: {}, TF1 ⊥ TF2: {}",
            structure.is_decomposable(),
            foliations_orthogonal.passed()
        ),
    );
    let checks = vec![
        compatible.clone(),
        associated.clone(),
        implication,
        orthogonal.clone(),
        foliations_orthogonal.clone(),
        equivalence,
    ];
    Ok(MetricContactPair {
        structure: structure.clone(),
        metric: g,
        compatible,
        associated,
        orthogonal,
        foliations_orthogonal,
        checks,
        connection: OnceLock::new(),
        projections: OnceLock::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::{corpus_pair, validate_contact_pair, validate_structure};
    use crate::frame::interior;
    use crate::probe::{random_rational, ProbeSet};
    use rand::SeedableRng;

    #[test]
    fn reeb_fields_are_orthonormal_and_in_the_kernel() {
        for (name, params) in [("heis6", None), ("darboux", Some((2, 1))), ("darboux", Some((1, 0)))] {
            let m = corpus_pair(name, params);
            let p = m.pair();
            for i in 0..2 {
                for j in 0..2 {
                    let want = if i == j { ScalarExpr::one() } else { ScalarExpr::zero() };
                    assert_eq!(m.metric().inner(p.reeb(i), p.reeb(j)), want, "{name} g(Z{i}, Z{j})");
                }
            }
            let sum = p.dalpha(0).add(p.dalpha(1));
            assert!(interior(&sum, p.reeb(0)).unwrap().is_zero(), "{name}");
        }
    }

    #[test]
    fn doubled_metric_is_not_associated() {
        let m = corpus_pair("heis6", None);
        let g = MetricField::new(m.metric().gram().scale(&ScalarExpr::int(2)), m.frame().base_point()).unwrap();
        let bad = validate_metric(m.structure(), g).unwrap();
        assert!(!bad.is_associated());
        assert!(bad.associated().failed());
    }

    /// Block-diagonal constant change of basis on the two factors.
    fn block_change(blocks: &[std::ops::Range<usize>], n: usize, seed: u64) -> Matrix {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        loop {
            let mut c = Matrix::zeros(n, n);
            for b in blocks {
                for i in b.clone() {
                    for j in b.clone() {
                        c.set(i, j, ScalarExpr::constant(random_rational(&mut rng)));
                    }
                }
            }
            if c.inverse().is_some() {
                return c;
            }
        }
    }

    #[test]
    fn decomposability_is_frame_independent() {
        for (name, params, blocks) in [("darboux", Some((1, 1)), [0..3, 3..6]), ("heis6", None, [0..3, 3..6])] {
            let m = corpus_pair(name, params);
            let s = crate::corpus::corpus_build(name, params).unwrap();
            for seed in 0..3 {
                let c = block_change(&blocks, 6, seed);
                let cinv = c.inverse().unwrap();
                let frame = Arc::new(m.frame().with_frame_change(&c).unwrap());
                let alpha = [0, 1].map(|i| frame.from_coordinate_covector(&s.alpha[i]));
                let probes = ProbeSet::new(frame.base_point().to_vec(), 1, 4);
                let [a0, a1] = alpha;
                let pair = validate_contact_pair(frame.clone(), a0, a1, 1, 1, &probes).unwrap();
                let phi = EndoField::new(cinv.mul(m.phi().matrix()).mul(&c));
                let structure = validate_structure(&pair, phi, &probes).unwrap();
                let g = MetricField::new(c.transpose().mul(m.metric().gram()).mul(&c), frame.base_point()).unwrap();
                let changed = validate_metric(&structure, g).unwrap();
                assert_eq!(changed.is_decomposable(), m.is_decomposable(), "{name} seed {seed}");
                assert!(changed.is_associated(), "{name} seed {seed}");
            }
        }
    }
}
