//! `--model` values: `chain:N`, `bintree:N`, `file:PATH`, or a bare
//! `chain`/`bintree` combined with `--sizes`.

use std::path::PathBuf;
use std::str::FromStr;

use sorbd::model::{binary_tree, load_model, serial_chain, GenOptions, JointPattern, Model};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelSelector {
    Chain(Option<usize>),
    BinTree(Option<usize>),
    File(PathBuf),
}

impl FromStr for ModelSelector {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (s, None),
        };
        let size = |a: Option<&str>| -> Result<Option<usize>, String> {
            a.map(|a| match a.parse::<usize>() {
                Ok(n) if n > 0 => Ok(n),
                _ => Err(format!("invalid model size '{a}'")),
            })
            .transpose()
        };
        match kind {
            "chain" => Ok(ModelSelector::Chain(size(arg)?)),
            "bintree" => Ok(ModelSelector::BinTree(size(arg)?)),
            "file" => match arg {
                Some(p) if !p.is_empty() => Ok(ModelSelector::File(PathBuf::from(p))),
                _ => Err("file: needs a path".into()),
            },
            _ => Err(format!("unknown model '{s}' (expected chain:N, bintree:N or file:PATH)")),
        }
    }
}

/// Generator settings shared by every subcommand that builds models.
#[derive(Clone, Debug)]
pub struct Generator {
    pub pattern: JointPattern,
    pub floating_base: bool,
}

impl Generator {
    fn options(&self) -> GenOptions {
        GenOptions::with_pattern(self.pattern.clone()).floating(self.floating_base)
    }
}

/// A model together with the label written to CSV output.
pub struct NamedModel {
    pub label: String,
    pub model: Model,
}

impl ModelSelector {
    /// Every model selected by the argument and an optional size list.
    pub fn build_all(&self, sizes: &[usize], g: &Generator) -> Result<Vec<NamedModel>, CliError> {
        let generated = |name: &str, fixed: Option<usize>, build: fn(usize, &GenOptions) -> sorbd::Result<Model>| {
            let list = match (fixed, sizes.is_empty()) {
                (Some(n), true) => vec![n],
                (None, false) => sizes.to_vec(),
                (Some(_), false) => return Err(CliError::Usage(format!("give either {name}:N or --sizes, not both"))),
                (None, true) => return Err(CliError::Usage(format!("{name} needs a size: {name}:N or --sizes"))),
            };
            list.into_iter()
                .map(|n| {
                    Ok(NamedModel {
                        label: format!("{name}:{n}"),
                        model: build(n, &g.options())?,
                    })
                })
                .collect()
        };
        match self {
            ModelSelector::Chain(n) => generated("chain", *n, serial_chain),
            ModelSelector::BinTree(n) => generated("bintree", *n, binary_tree),
            ModelSelector::File(path) => {
                if !sizes.is_empty() {
                    return Err(CliError::Usage("--sizes cannot be combined with file:PATH".into()));
                }
                Ok(vec![NamedModel {
                    label: format!("file:{}", path.display()),
                    model: load_model(path)?,
                }])
            }
        }
    }

    /// Exactly one model.
    pub fn build_one(&self, g: &Generator) -> Result<NamedModel, CliError> {
        let mut all = self.build_all(&[], g)?;
        Ok(all.remove(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        assert_eq!("chain:10".parse(), Ok(ModelSelector::Chain(Some(10))));
        assert_eq!("chain".parse(), Ok(ModelSelector::Chain(None)));
        assert_eq!("bintree:15".parse(), Ok(ModelSelector::BinTree(Some(15))));
        assert_eq!("file:a/b.txt".parse(), Ok(ModelSelector::File("a/b.txt".into())));
        for bad in ["chain:0", "chain:x", "tree:3", "file:", ""] {
            assert!(bad.parse::<ModelSelector>().is_err(), "{bad}");
        }
    }

    #[test]
    fn sizes_and_fixed_size_are_exclusive() {
        let g = Generator {
            pattern: JointPattern::default(),
            floating_base: false,
        };
        assert_eq!(ModelSelector::Chain(None).build_all(&[3, 4], &g).unwrap().len(), 2);
        assert!(ModelSelector::Chain(Some(3)).build_all(&[3], &g).is_err());
        assert!(ModelSelector::BinTree(None).build_all(&[], &g).is_err());
        let m = ModelSelector::BinTree(Some(7)).build_one(&g).unwrap();
        assert_eq!((m.label.as_str(), m.model.num_bodies()), ("bintree:7", 7));
    }
}
