//! Finite fields, polynomials over them, factorization and residue symbols.

mod factor;
mod field;
mod poly;
mod residue;
mod text;

pub(crate) use factor::uniform_below;
pub use factor::{
    count_irreducible, count_irreducible_u64, distinct_degree, equal_degree, factor, irreducible_density, irreducibles,
    is_irreducible, monics, sample_monic, sample_monic_with, squarefree_decomposition, Factorization,
};
pub use field::{Elem, Fq};
pub use poly::{Modulus, Poly};
pub use residue::{residue_symbol, FieldSpec, RootOfUnity};
