//! Sp-filtrations and t-functions on finite posets.

mod enumerate;
mod filtration;
mod poset;

pub use enumerate::{
    enumerate, enumerate_filtrations, enumerate_order_preserving, roundtrip_verify, EnumWhat, Enumerated,
    RoundtripReport, MAX_ENUM_ELEMENTS, MAX_ENUM_WIDTH,
};
pub use filtration::{
    f_map, phi_map, t_function_check, weak_cousin_check, CousinViolation, SpFiltration, TCheckMode, TFunction,
};
pub use poset::{ElemSet, FinPoset, MAX_ELEMENTS};

#[cfg(test)]
mod tests;
