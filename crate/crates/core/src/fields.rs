//! Scalar arrays indexed by mesh entity.
//!
//! An [`EdgeField`] stores one value per undirected edge in the owner
//! orientation `i -> j` of that edge; reading it from the other side negates
//! the value.

use std::ops::{Deref, DerefMut};

macro_rules! scalar_field {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, Debug, Default, PartialEq)]
        pub struct $name(pub Vec<f64>);

        impl $name {
            pub fn zeros(len: usize) -> Self {
                Self(vec![0.0; len])
            }

            pub fn constant(len: usize, value: f64) -> Self {
                Self(vec![value; len])
            }

            pub fn from_fn(len: usize, f: impl FnMut(usize) -> f64) -> Self {
                Self((0..len).map(f).collect())
            }

            pub fn into_inner(self) -> Vec<f64> {
                self.0
            }

            pub fn max_abs(&self) -> f64 {
                self.0.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
            }

            pub fn is_finite(&self) -> bool {
                self.0.iter().all(|v| v.is_finite())
            }

            pub fn scaled(&self, s: f64) -> Self {
                Self(self.0.iter().map(|v| v * s).collect())
            }

            /// Max-norm of the difference.
            pub fn max_diff(&self, other: &Self) -> f64 {
                self.0
                    .iter()
                    .zip(&other.0)
                    .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
            }
        }

        impl From<Vec<f64>> for $name {
            fn from(v: Vec<f64>) -> Self {
                Self(v)
            }
        }

        impl Deref for $name {
            type Target = [f64];
            fn deref(&self) -> &[f64] {
                &self.0
            }
        }

        impl DerefMut for $name {
            fn deref_mut(&mut self) -> &mut [f64] {
                &mut self.0
            }
        }
    };
}

scalar_field!(
    /// One value per undirected edge, stored for the owner orientation.
    EdgeField
);
scalar_field!(
    /// One value per triangle.
    CellField
);
scalar_field!(
    /// One value per mesh node (dual cell).
    NodeField
);

impl EdgeField {
    /// Value of edge `e` read in the direction given by `sign`
    /// (`+1` owner orientation, `-1` reversed).
    #[inline]
    pub fn oriented(&self, e: usize, sign: f64) -> f64 {
        sign * self.0[e]
    }
}
