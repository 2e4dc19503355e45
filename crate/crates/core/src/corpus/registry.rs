/// Every check id a run can emit, with the statement it certifies.
/// `*` stands for a submanifold name. Sentinels for invalid input
/// (`<group>.invalid`) and dependency skips (`<group>.skipped`) are not listed.
pub const CHECK_REGISTRY: &[(&str, &str)] = &[
    ("pair.dimension", "dimension is 2h + 2k + 2"),
    ("pair.volume", "α₁ ∧ (dα₁)^h ∧ α₂ ∧ (dα₂)^k is a volume form"),
    ("pair.degeneracy1", "(dα₁)^(h+1) ≡ 0"),
    ("pair.degeneracy2", "(dα₂)^(k+1) ≡ 0"),
    ("pair.class1", "Cartan class of α₁ is 2h + 1"),
    ("pair.class2", "Cartan class of α₂ is 2k + 1"),
    ("pair.reeb", "Reeb fields solve α_i(Z_j) = δ_ij, i_{Z_j}dα_i = 0"),
    ("pair.reeb_commute", "[Z₁, Z₂] ≡ 0"),
    ("pair.splitting", "H₁ ⊕ H₂ ⊕ V spans the tangent space"),
    ("structure.phi_squared", "φ² = −Id + α₁ ⊗ Z₁ + α₂ ⊗ Z₂"),
    ("structure.phi_reeb", "φZ_i ≡ 0"),
    ("structure.alpha_phi", "α_i ∘ φ ≡ 0"),
    ("structure.rank", "rank φ = 2h + 2k symbolically and at probes"),
    ("structure.decomposable", "φ preserves the characteristic foliations"),
    ("metric.compatible", "g(φX, φY) = g(X, Y) − Σ α_i(X) α_i(Y)"),
    ("metric.associated", "g(X, φY) = (dα₁ + dα₂)(X, Y), g(X, Z_i) = α_i(X)"),
    ("metric.associated_implies_compatible", "associated metrics are compatible"),
    ("metric.orthogonal", "H₁, H₂, ℝZ₁, ℝZ₂ are mutually orthogonal"),
    ("metric.foliations_orthogonal", "the characteristic foliations are orthogonal"),
    ("metric.decomposable_iff_orthogonal", "φ decomposable exactly when the foliations are orthogonal"),
    ("normality.N1", "N¹ ≡ 0"),
    ("normality.NJ", "N_J ≡ 0"),
    ("normality.NT", "N_T ≡ 0"),
    ("normality.equivalence", "N¹ ≡ 0 exactly when N_J ≡ 0 and N_T ≡ 0"),
    ("connection.torsion_free", "Levi-Civita connection is torsion free"),
    ("connection.metric_compatible", "Levi-Civita connection is metric"),
    ("connection.phi_derivative", "covariant derivative of φ on a metric contact pair"),
    ("connection.reeb_derivative", "∇_X Z = −φX"),
    ("connection.characterization", "normality via (∇_X φ)Y and the projections X_i"),
    ("connection.reeb_curvature_h", "R_{ZX}Z through φ and h"),
    ("connection.reeb_derivative_h", "∇_X Z = −φX − φhX"),
    ("connection.h_vanishes", "h = ½ L_Z φ ≡ 0"),
    ("connection.killing", "Z is Killing"),
    ("curvature.characterization", "normality via R_{XY}Z and the projections X_i"),
    ("curvature.reeb_horizontal", "R_{ZY}Z = −Y on horizontal Y"),
    ("curvature.bianchi", "first Bianchi identity"),
    ("hermitian.alpha_j", "α₂ ∘ J = α₁"),
    ("hermitian.dalpha_j_invariant", "dα_i is J-invariant"),
    ("hermitian.projection_commute", "π_i commutes with J"),
    ("hermitian.classical_identity", "(∇_X J) through dΦ on a Hermitian manifold"),
    ("hermitian.f_closed_form", "(∇_X J)Y in closed form"),
    ("hermitian.non_kahler", "dΦ ≢ 0"),
    ("submanifold.*.profile", "invariance flags and Reeb position"),
    ("submanifold.*.tangential_vertical", "φ-invariant: φZ_iᵀ ≡ 0 and φZ_i^⊥ ≡ 0"),
    ("submanifold.*.not_orthogonal_both", "φ-invariant: not orthogonal to both Reeb fields"),
    ("submanifold.*.parity", "dimension parity forced by the Reeb position"),
    ("submanifold.*.semi_invariant_orthogonal", "tangent to Z_i forces orthogonal to Z_j"),
    ("submanifold.*.transverse_vertical_line", "transverse φ-invariant: Z₁ᵀ ∥ Z₂ᵀ"),
    ("submanifold.*.orthogonal_not_invariant", "orthogonal to the Reeb distribution: not φ-, J- or T-invariant"),
    ("submanifold.*.rho_invariance", "ρ-invariance against the Reeb position"),
    ("submanifold.*.invariance_equivalence", "tangent-both: φ-, J-, T-invariance agree"),
    ("submanifold.*.b_symmetric", "B(X, Y) = B(Y, X)"),
    ("submanifold.*.b_normal", "B and H are normal"),
    ("submanifold.*.minimal", "H ≡ 0"),
    ("submanifold.*.induced_contact_pair", "induced forms give a contact pair"),
    ("submanifold.*.induced_contact_metric", "induced contact metric structure"),
    ("submanifold.*.sasakian", "induced structure is Sasakian"),
    ("submanifold.*.semi_invariant_identity", "second fundamental form identity on semi-invariant subframes"),
    ("submanifold.*.reeb_geodesic", "the tangent Reeb field is geodesic"),
    ("submanifold.*.angle_constancy", "angle between Z₁ᵀ and Z₁ is constant along Z₁ᵀ"),
    ("submanifold.*.angle_minimal_equivalence", "constant angle exactly when minimal"),
    ("submanifold.*.trace_concentration", "tr B = B(Z₁ᵀ, Z₁ᵀ)/‖Z₁ᵀ‖²"),
    ("submanifold.*.direction_identity", "∇_{Z₁ᵀ}Z₁ᵀ splits along Z₁ᵀ and (JZ₁ᵀ)^⊥"),
    ("submanifold.*.hermitian_second_fundamental_form", "B(X, X) + B(JX, JX) through the Reeb normal parts"),
    ("submanifold.*.minimal_iff_reeb_tangent", "J-invariant: minimal exactly when tangent to the Reeb distribution"),
    ("submanifold.*.mean_curvature_formula", "mean curvature in an orthonormal J-basis, numerically"),
    ("submanifold.*.nonminimal_at_probes", "J-invariant, not tangent: H ≠ 0 at a probe"),
];

/// Registry pattern of a concrete check id.
pub fn registry_key(id: &str) -> String {
    match id.strip_prefix("submanifold.") {
        Some(rest) => match rest.split_once('.') {
            Some((_, check)) => format!("submanifold.*.{check}"),
            None => id.to_string(),
        },
        None => id.to_string(),
    }
}
