//! scadkit works with scadnano-style DNA designs: parallel-helix DNA
//! nanostructures such as DNA origami, described as strands laid out on a
//! lattice of helices.
//!
//! The crate covers the whole batch workflow around the `.sc` JSON format:
//!
//! * [`model`] — the design document types and [`Design::validate`].
//! * [`codec`] — reading and writing `.sc` JSON, preserving unknown fields.
//! * [`edit`] — pure editing operations: nicks, crossovers, deletions,
//!   insertions, copy-translate.
//! * [`sequence`] — DNA assignment with automatic complement propagation.
//! * [`geometry`] — lattice coordinates, layout, and backbone angles.
//! * [`cadnano`] — cadnano v2 import and export.
//! * [`export`] / [`svg`] — CSV and IDT sequence exports, SVG figures.
//!
//! ```
//! use scadkit::{codec, Design, Grid, Helix, Strand};
//!
//! let design = Design::new(Grid::Square)
//!     .with_helices(vec![
//!         Helix::new(0, 32).with_grid_position(0, 0),
//!         Helix::new(1, 32).with_grid_position(0, 1),
//!     ])
//!     .with_strands(vec![
//!         Strand::from_bound(0, true, 0, 16),
//!         Strand::from_bound(1, false, 0, 16),
//!     ]);
//! assert!(design.validate().is_valid());
//! let text = codec::serialize_design(&design).unwrap();
//! let reloaded = codec::parse_design(&text).unwrap();
//! assert_eq!(reloaded.strands.len(), 2);
//! ```
//!
//! Designs are immutable values: every edit returns a new [`Design`], so any
//! value can be shared freely across threads.

pub mod cadnano;
pub mod codec;
pub mod edit;
pub mod export;
pub mod geometry;
pub mod model;
pub mod sequence;
pub mod svg;
pub mod validate;

pub use model::{
    BoundDomain, Color, Design, Domain, ExtraFields, Grid, Helix, Insertion, Loopout, Modification,
    ModificationLocation, Position3D, Strand, SCAFFOLD_COLOR, STRAND_PALETTE,
};
pub use validate::{Finding, ValidationReport};

#[cfg(doctest)]
mod book_doctests {
    //! Runs every Rust snippet in the guide (and the README) as a doctest,
    //! keeping the book in sync with the library.
    macro_rules! doc_check {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            #[allow(dead_code)]
            struct $name;
        };
    }

    doc_check!(Readme, "../../../README.md");
    doc_check!(BookIntroduction, "../../../book/src/introduction.md");
    doc_check!(BookDataModel, "../../../book/src/data-model.md");
    doc_check!(BookFileFormat, "../../../book/src/file-format.md");
    doc_check!(BookEditing, "../../../book/src/editing.md");
    doc_check!(BookSequences, "../../../book/src/sequences.md");
    doc_check!(BookGeometry, "../../../book/src/geometry.md");
    doc_check!(BookCadnano, "../../../book/src/cadnano.md");
    doc_check!(BookExports, "../../../book/src/exports.md");
}
