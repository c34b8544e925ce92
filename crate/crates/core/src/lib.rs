//! Engine for the rho-Bockstein and Adams spectral sequences computing the
//! coweight-0 region of C2-equivariant Ext above the line `f = s/2 - 1`, and
//! the homotopy consequences derived from it.

pub mod adams;
pub mod catalog;
pub mod chart;
pub mod checks;
pub mod cone;
pub mod degree;
pub mod engine;
pub mod error;
pub mod f2;
pub mod inference;
pub mod leibniz;
pub mod monomial;
pub mod report;
pub mod rules;
pub mod space;

pub use adams::{
    adams_no_differentials, divisibility_records, fixed_point_image, install_hidden_rho_extensions,
    mahowald_invariant_of_2k, rho_divisibility_closed, two_divisibility, underlying_map, AdamsEinf,
    AdamsReport, DivisibilityRecord, HiddenExtension,
};
pub use catalog::{load_catalog, Catalog, FamilyId, GeneratorFamily, Height};
pub use chart::{chart_from_page, ko_chart, render, ChartDocument, ChartKind, Format, LineKind};
pub use checks::{census, check_structural_constraints, expected_census, Census, StructuralReport};
pub use cone::{build_e1_negative, build_e1_positive, E1Page, Window};
pub use degree::{coweight, TriDegree};
pub use engine::{run_bockstein, BocksteinPage, BocksteinRun, DifferentialRecord, EngineOptions};
pub use error::{Error, Result};
pub use f2::{kernel_basis, quotient_basis, F2Matrix, F2Vector, Subspace};
pub use inference::{infer_forced_differentials, Inference, Outcome};
pub use leibniz::{Determination, Differentials, Profile};
pub use monomial::{module_action, multiply, Cone, Element, ExtElement, Generator, Monomial};
pub use report::{analyze, covers_region, Analysis, ReportKind, Table};
pub use rules::{load_rules, parse_rules, seed_rules, DifferentialRule, RuleInstance};
pub use space::TrigradedSpace;
