//! Bundled example problems with their expected reports.

use serde_json::Value;

pub struct Gallery {
    pub name: &'static str,
    pub description: &'static str,
    pub input: &'static str,
    /// The expected report without its timing block, for the default settings.
    pub golden: &'static str,
}

macro_rules! gallery {
    ($name:literal, $desc:literal) => {
        Gallery {
            name: $name,
            description: $desc,
            input: include_str!(concat!("../galleries/", $name, ".json")),
            golden: include_str!(concat!("../galleries/", $name, ".golden.json")),
        }
    };
}

pub const GALLERIES: &[Gallery] = &[
    gallery!("smooth-divisor", "The smooth divisor chart 0 -> N over k[x]: morphism classes and the chart criterion"),
    gallery!("toric-point", "Modules over the toric point k[x,y] tested prime by prime"),
    gallery!("nodal-descent", "Gluing the two branches of the node and descending modules"),
    gallery!("nodal-degeneration", "The node over the line: graded flatness, the criteria panel, chart changes"),
    gallery!("expansions", "Monoid modules, bases, and lifting log structures"),
];

pub fn find(name: &str) -> Option<&'static Gallery> {
    GALLERIES.iter().find(|g| g.name == name)
}

impl Gallery {
    pub fn golden_value(&self) -> Value {
        serde_json::from_str(self.golden).expect("bundled goldens are valid JSON")
    }
}
