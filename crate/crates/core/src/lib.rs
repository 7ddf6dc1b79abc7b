//! Census engine for SL(2) representations and character varieties of
//! finitely presented groups over finite fields.

pub mod acfc;
pub mod distinguish;
pub mod gf;
pub mod presentation;
pub mod repvar;
pub mod sl2;
