//! Preset documents shipped inside the binary.

pub const CORPUS: &[(&str, &str)] = &[
    ("associativity.operad", include_str!("../corpus/associativity.operad")),
    ("cp2.cdga", include_str!("../corpus/cp2.cdga")),
    ("gerstenhaber.operad", include_str!("../corpus/gerstenhaber.operad")),
    ("gerstenhaber_padded.operad", include_str!("../corpus/gerstenhaber_padded.operad")),
    ("heisenberg.cdga", include_str!("../corpus/heisenberg.cdga")),
    ("heisenberg_padded.cdga", include_str!("../corpus/heisenberg_padded.cdga")),
    ("s2xs2.cdga", include_str!("../corpus/s2xs2.cdga")),
    ("sphere2.cdga", include_str!("../corpus/sphere2.cdga")),
    ("sphere2_padded.cdga", include_str!("../corpus/sphere2_padded.cdga")),
    ("sphere3.cdga", include_str!("../corpus/sphere3.cdga")),
    ("torus2.cdga", include_str!("../corpus/torus2.cdga")),
];

pub fn get(name: &str) -> Option<&'static str> {
    CORPUS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    CORPUS.iter().map(|(n, _)| *n)
}
