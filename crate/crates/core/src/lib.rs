//! Exact commutative-algebra kernel for invariants of isolated hypersurface
//! singularities.
//!
//! The crate computes Milnor and Tjurina numbers, generalized Milnor numbers
//! via unit sampling, Hilbert-Samuel and Hilbert-Kunz multiplicities, finite
//! s-multiplicity levels and Frobenius threshold data for hypersurface germs
//! over Q and F_p, together with the exact simplicial volume function H_s(d),
//! the resulting mu/tau bound, and deformation-family experiments around
//! Fermat singularities.
//!
//! Everything is exact: scalars are rationals or prime-field residues, and
//! every colength is certified through a Nakayama truncation argument before
//! it is reported.

pub mod conjectures;
pub mod error;
pub mod family;
pub mod field;
pub mod frobenius;
pub mod groebner;
pub mod hfun;
pub mod ideal;
pub mod invariants;
pub mod local;
pub mod monomial;
pub mod order;
pub mod parse;
pub mod poly;
pub mod ring;

pub use conjectures::{
    builtin_corpus, check_colon_containment, check_power_membership, corpus_run, corpus_run_text,
    parse_corpus, ColonCheck, ConjectureReport, ConjectureSummary, CorpusEntry, InstanceRecord,
    PowerMembership, REPORT_HEADER,
};
pub use error::{Error, Result};
pub use family::{
    asymptotic_lemma_check, codim_prediction, count_bounded, count_compositions, fermat,
    graded_codim, random_deformation, tau_min_experiment, AsymptoticReport, AsymptoticRow,
    CoefficientMode, DeformationSpec, FamilyReport, SumMode, TrialResult,
};
pub use field::{ExtField, Field, PrimeField, Rat, Rationals};
pub use groebner::{exact_divide, groebner_basis, staircase_count, GroebnerBasis, GroebnerConfig};
pub use frobenius::{
    default_e_max, e_s_level, frobenius_power, h_s_level, hk_sequence, threshold_levels,
    HKEntry, HKSequence, HsLevel, Thresholds,
};
pub use ideal::Ideal;
pub use invariants::{
    briancon_skoda_exponent, generalized_milnor, generalized_milnor_extended,
    hilbert_samuel_multiplicity, jacobian_ideal, milnor, mu_tau_report, tjurina, tjurina_ideal,
    Count, EBs, GeneralizedMilnor, InvariantOptions, SingularityRecord,
};
pub use local::{
    local_colength, local_colon, local_contains, local_data, Colength, LocalData, LocalOptions,
    LocalOutcome,
};
pub use monomial::{Exp, Monomial};
pub use order::MonomialOrder;
pub use parse::{parse_polynomial, parse_polynomial_list};
pub use poly::Polynomial;
pub use ring::{parse_ring_spec, prime_ring, rational_ring, FieldSpec, Ring};

/// Rational-coefficient concrete instances.
pub type QRing = Ring<Rationals>;
pub type QPolynomial = Polynomial<Rationals>;
pub type QIdeal = Ideal<Rationals>;

/// Prime-field concrete instances.
pub type FpRing = Ring<PrimeField>;
pub type FpPolynomial = Polynomial<PrimeField>;
pub type FpIdeal = Ideal<PrimeField>;
