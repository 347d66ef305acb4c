//! Synthetic serial chains and complete binary trees.
//!
//! Every link has unit mass, a box-shaped rotational inertia scaled by a
//! seeded multiplier in `[0.5, 1.5]`, and its centre of mass halfway along
//! the link. Child joints sit one link length further along the parent's z
//! axis.

use std::str::FromStr;

use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::joint::JointKind;
use crate::model::tree::{default_gravity, Body, Model};
use crate::spatial::{SpatialInertia, SpatialTransform};

/// Which joint kind body `i` receives.
#[derive(Clone, Debug, PartialEq)]
pub enum JointPattern {
    Uniform(JointKind),
    /// Repeats the given kinds in order.
    Cycle(Vec<JointKind>),
}

impl JointPattern {
    /// Revolute joints cycling through the z, y and x axes.
    pub fn revolute_cycle() -> Self {
        JointPattern::Cycle(vec![JointKind::RevoluteZ, JointKind::RevoluteY, JointKind::RevoluteX])
    }

    /// Revolute, spherical and prismatic joints interleaved.
    pub fn mixed() -> Self {
        JointPattern::Cycle(vec![
            JointKind::RevoluteZ,
            JointKind::Spherical,
            JointKind::PrismaticY,
            JointKind::RevoluteX,
        ])
    }

    pub fn kind(&self, i: usize) -> JointKind {
        match self {
            JointPattern::Uniform(k) => *k,
            JointPattern::Cycle(ks) => ks[i % ks.len()],
        }
    }
}

impl Default for JointPattern {
    fn default() -> Self {
        Self::revolute_cycle()
    }
}

impl FromStr for JointPattern {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "revolute-cycle" => Ok(Self::revolute_cycle()),
            "mixed" => Ok(Self::mixed()),
            other => {
                let kinds = other
                    .split(',')
                    .map(str::parse)
                    .collect::<Result<Vec<JointKind>>>()?;
                Ok(match kinds.as_slice() {
                    [k] => JointPattern::Uniform(*k),
                    _ => JointPattern::Cycle(kinds),
                })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenOptions {
    pub pattern: JointPattern,
    /// Replace the first joint by a 6-DoF floating joint.
    pub floating_base: bool,
    pub link_length: f64,
    pub link_width: f64,
    pub seed: u64,
}

impl Default for GenOptions {
    fn default() -> Self {
        Self {
            pattern: JointPattern::default(),
            floating_base: false,
            link_length: 0.5,
            link_width: 0.1,
            seed: 0,
        }
    }
}

impl GenOptions {
    pub fn with_pattern(pattern: JointPattern) -> Self {
        Self {
            pattern,
            ..Self::default()
        }
    }

    pub fn floating(mut self, yes: bool) -> Self {
        self.floating_base = yes;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

fn link_inertia(opts: &GenOptions, rng: &mut ChaCha8Rng) -> SpatialInertia<f64> {
    let mult = rng.gen_range(0.5..1.5);
    let (w, l) = (opts.link_width, opts.link_length);
    let d = Vector3::new(w * w + l * l, w * w + l * l, 2.0 * w * w) * (mult / 12.0);
    SpatialInertia::from_com_unchecked(1.0, Vector3::new(0.0, 0.0, 0.5 * l), Matrix3::from_diagonal(&d))
}

fn build(
    n: usize,
    opts: &GenOptions,
    parent_of: impl Fn(usize) -> Option<usize>,
    lateral: impl Fn(usize) -> f64,
    tag: &str,
) -> Result<Model> {
    if n == 0 {
        return Err(Error::InvalidArgument(format!("{tag} needs at least one body")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let bodies = (0..n)
        .map(|i| {
            let parent = parent_of(i);
            let joint = if i == 0 && opts.floating_base {
                JointKind::Floating
            } else {
                opts.pattern.kind(i)
            };
            let placement = match parent {
                None => SpatialTransform::identity(),
                Some(_) => SpatialTransform::translation(Vector3::new(
                    lateral(i) * opts.link_length,
                    0.0,
                    opts.link_length,
                )),
            };
            Body {
                name: format!("link{}", i + 1),
                parent,
                joint,
                placement,
                inertia: link_inertia(opts, &mut rng),
            }
        })
        .collect();
    Model::new(bodies, default_gravity())
}

/// Serial chain: body `i` hangs off body `i - 1`.
pub fn serial_chain(n: usize, opts: &GenOptions) -> Result<Model> {
    build(n, opts, |i| i.checked_sub(1), |_| 0.0, "serial chain")
}

/// Complete binary tree in heap numbering: with 1-based numbers the parent
/// of body `i` is `⌊i/2⌋`.
pub fn binary_tree(n: usize, opts: &GenOptions) -> Result<Model> {
    // Siblings are spread sideways so they do not share a joint origin.
    let parent_of = |i: usize| if i == 0 { None } else { Some(i.div_ceil(2) - 1) };
    let lateral = |i: usize| if i % 2 == 1 { 0.25 } else { -0.25 };
    build(n, opts, parent_of, lateral, "binary tree")
}
