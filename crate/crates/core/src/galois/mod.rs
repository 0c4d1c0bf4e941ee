//! SL₂(𝔽_p) densities, place classification for elliptic curves over 𝔽_q(t), and
//! Chebotarev / character-sum censuses.

mod census;
mod curve;
pub mod resfield;
mod sl2;

pub use census::{
    charsum_grid, chebotarev_kummer_census, equidistribution_census, fit_decay, place_class_census, CensusRow,
    CharacterSum, EquidistCensus, KummerCensus, PlaceCensus, SymbolCell, CENSUS_BUDGET,
};
pub use curve::{
    classify_irreducible, classify_place, residue_field_size, three_torsion_oracle, two_torsion_oracle, CurveSpec,
    PlaceClass,
};
pub use sl2::{closed_form_densities, sl2_densities, sl2_elements, GroupElement, Sl2Densities};
