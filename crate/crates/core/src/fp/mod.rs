//! Finitely presented groups: words, presentation parsing, the universal
//! presentations driving the census, coset enumeration, and low-index
//! normal-subgroup (quotient) search.

mod low_index;
mod presentation;
mod quotient_in_group;
mod todd_coxeter;
mod universal;
mod word;

pub use low_index::{
    canonical_regular_table_bytes, low_index_normal_quotients, normal_quotients_of_index,
    QuotientRecord, QuotientSearchOptions,
};
pub use presentation::{parse_presentation, FpPresentation};
pub use quotient_in_group::{quotient_search_in_group, Epimorphism};
pub use todd_coxeter::{todd_coxeter, CosetTable};
pub use universal::{universal_catalogue, universal_group, UniversalType};
pub use word::Word;
