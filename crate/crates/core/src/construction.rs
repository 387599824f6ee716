//! Named strategies for building `Π_d(Λ)`, selected at run time.

use std::sync::Arc;

use crate::algebra::{FDAlgebra, Presented};
use crate::error::{Error, Result};
use crate::groebner::GroebnerBounds;
use crate::preprojective::{double_quiver_pi2, jacobian, keller_qp, tensor_pi_d};
use crate::quiver::QuiverWithPotential;

/// What a construction starts from.
#[derive(Clone, Debug)]
pub enum ConstructionInput {
    Presentation(Presented),
    Potential(QuiverWithPotential),
    Algebra(Arc<FDAlgebra>),
}

impl ConstructionInput {
    /// The algebra the input describes (the Jacobian for a potential).
    pub fn algebra(&self, bounds: GroebnerBounds) -> Result<Arc<FDAlgebra>> {
        match self {
            ConstructionInput::Presentation(p) => Ok(p.algebra.clone()),
            ConstructionInput::Potential(qp) => Ok(jacobian(qp, bounds)?.algebra),
            ConstructionInput::Algebra(a) => Ok(a.clone()),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    pub d: usize,
    pub bounds: GroebnerBounds,
    pub max_degree: usize,
}

pub trait PreprojectiveConstruction: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn build(&self, input: &ConstructionInput, opts: &BuildOptions) -> Result<FDAlgebra>;
}

/// `T_Λ Ext^{d-1}_Λ(DΛ, Λ)` by structure constants; works for any `d`.
pub struct Tensor;

impl PreprojectiveConstruction for Tensor {
    fn name(&self) -> &'static str {
        "tensor"
    }

    fn description(&self) -> &'static str {
        "tensor algebra of Ext^{d-1}(DΛ, Λ) over Λ"
    }

    fn build(&self, input: &ConstructionInput, opts: &BuildOptions) -> Result<FDAlgebra> {
        if let ConstructionInput::Potential(_) = input {
            return Err(Error::Validation("the tensor construction takes an algebra, not a potential".into()));
        }
        tensor_pi_d(&input.algebra(opts.bounds)?, opts.d, opts.max_degree)
    }
}

/// The double quiver with the preprojective relations; `d = 2` and a path
/// algebra of an acyclic quiver.
pub struct DoubleQuiver;

impl PreprojectiveConstruction for DoubleQuiver {
    fn name(&self) -> &'static str {
        "double-quiver"
    }

    fn description(&self) -> &'static str {
        "double quiver with the preprojective relations (d = 2, hereditary input)"
    }

    fn build(&self, input: &ConstructionInput, opts: &BuildOptions) -> Result<FDAlgebra> {
        if opts.d != 2 {
            return Err(Error::Validation("the double-quiver construction needs d = 2".into()));
        }
        let ConstructionInput::Presentation(p) = input else {
            return Err(Error::Validation("the double-quiver construction takes a quiver".into()));
        };
        if !p.presentation.relations.is_empty() {
            return Err(Error::Validation("the double-quiver construction takes a quiver without relations".into()));
        }
        let pres = double_quiver_pi2(&p.presentation.quiver, p.presentation.field)?;
        FDAlgebra::from_presentation(&pres, opts.bounds)
    }
}

/// Keller's quiver with potential for global dimension at most 2, or a
/// given potential; `d = 3`.
pub struct KellerQp;

impl PreprojectiveConstruction for KellerQp {
    fn name(&self) -> &'static str {
        "keller-qp"
    }

    fn description(&self) -> &'static str {
        "Jacobian algebra of Keller's quiver with potential (d = 3, gldim ≤ 2 input)"
    }

    fn build(&self, input: &ConstructionInput, opts: &BuildOptions) -> Result<FDAlgebra> {
        if opts.d != 3 {
            return Err(Error::Validation("the keller-qp construction needs d = 3".into()));
        }
        let qp = match input {
            ConstructionInput::Presentation(p) => keller_qp(p)?,
            ConstructionInput::Potential(qp) => qp.clone(),
            ConstructionInput::Algebra(_) => {
                return Err(Error::Validation("the keller-qp construction takes a presentation".into()))
            }
        };
        let j = jacobian(&qp, opts.bounds)?;
        Ok(Arc::try_unwrap(j.algebra).unwrap_or_else(|a| (*a).clone()))
    }
}

pub struct Registry {
    entries: Vec<Box<dyn PreprojectiveConstruction>>,
}

impl Default for Registry {
    fn default() -> Self {
        let mut r = Registry { entries: Vec::new() };
        r.register(Box::new(Tensor));
        r.register(Box::new(DoubleQuiver));
        r.register(Box::new(KellerQp));
        r
    }
}

impl Registry {
    pub fn register(&mut self, c: Box<dyn PreprojectiveConstruction>) {
        self.entries.retain(|e| e.name() != c.name());
        self.entries.push(c);
    }

    pub fn get(&self, name: &str) -> Option<&dyn PreprojectiveConstruction> {
        self.entries.iter().find(|e| e.name() == name).map(|e| e.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn build(&self, name: &str, input: &ConstructionInput, opts: &BuildOptions) -> Result<FDAlgebra> {
        let c = self.get(name).ok_or_else(|| {
            Error::Validation(format!("unknown construction '{name}' (known: {})", self.names().join(", ")))
        })?;
        c.build(input, opts)
    }
}
