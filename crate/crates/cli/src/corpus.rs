//! Example presentations shipped with the binary.
//!
//! Refer to them on the command line as `corpus:NAME`, e.g. `corpus:q8`.

pub const ENTRIES: &[(&str, &str)] = &[
    ("trivial", include_str!("../corpus/trivial.pres")),
    ("z", include_str!("../corpus/z.pres")),
    ("zmod2", include_str!("../corpus/zmod2.pres")),
    ("zmod3", include_str!("../corpus/zmod3.pres")),
    ("zmod4", include_str!("../corpus/zmod4.pres")),
    ("zmod6", include_str!("../corpus/zmod6.pres")),
    ("q8", include_str!("../corpus/q8.pres")),
    ("free2", include_str!("../corpus/free2.pres")),
    ("fig8", include_str!("../corpus/fig8.pres")),
];

pub fn get(name: &str) -> Option<&'static str> {
    let name = name.strip_suffix(".pres").unwrap_or(name);
    ENTRIES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    ENTRIES.iter().map(|(n, _)| *n)
}
