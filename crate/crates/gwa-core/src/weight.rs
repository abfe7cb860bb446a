//! Weight-module data attached to subquotients: supports with residue-field
//! dimensions, break detection, and the weighting functor on finite windows.

use crate::error::{MathError, MathResult};
use crate::factored::FactoredElement;
use crate::gwa::GwaSpec;
use crate::polyring::{is_irreducible, Irreducibility, Poly};
use crate::rank1::{Rank1Module, SubmoduleCert};
use crate::rankn::{MatrixModule, PolyMatrix};

/// One maximal ideal in a weight-module support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSlot {
    /// Monic irreducible generator of the ideal.
    pub ideal: Poly,
    /// Dimension of the weight space over the residue field.
    pub dim: u32,
    /// Whether `a` lies in the ideal.
    pub is_break: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightData {
    pub support: Vec<WeightSlot>,
    /// Dimension over the base field: sum of residue degrees times weight
    /// space dimensions.
    pub total_dim: u64,
}

/// Weight data of `R / <g>` for a squarefree generator `g`: one slot per
/// irreducible factor, each weight space one-dimensional. Slots are listed
/// orbit by orbit in increasing sigma-position, so chain quotients read as
/// consecutive translates.
pub fn generator_weight_data(g: &FactoredElement, spec: &GwaSpec) -> MathResult<WeightData> {
    if !g.is_squarefree() {
        return Err(MathError::NotMaximal);
    }
    let mut support = Vec::new();
    let mut total_dim = 0u64;
    for (rep, part) in crate::factored::orbit_partition(g, spec)? {
        let profile = crate::factored::profile_of(&part, &rep, spec)?;
        for &k in profile.values().keys() {
            let factor = spec.sigma_pow(&rep, k).normalize_monic()?.1;
            let is_break = factor.divides(spec.a_poly());
            total_dim += factor.degree().unwrap_or(0) as u64;
            support.push(WeightSlot {
                ideal: factor,
                dim: 1,
                is_break,
            });
        }
    }
    Ok(WeightData { support, total_dim })
}

/// Weight data of the quotient of a rank-1 module by a maximal submodule
/// generated by a single chain or a single full finite orbit.
pub fn quotient_weight_data(m: &Rank1Module, cert: &SubmoduleCert) -> MathResult<WeightData> {
    let single_chain = cert.chains.len() == 1 && cert.full_orbits.is_empty();
    let single_orbit = cert.chains.is_empty()
        && cert.full_orbits.len() == 1
        && cert.full_orbits[0].power == 1;
    if !single_chain && !single_orbit {
        return Err(MathError::NotMaximal);
    }
    if !m.is_submodule(&cert.generator, crate::rank1::SubmoduleTest::Multiset) {
        return Err(MathError::NotMaximal);
    }
    generator_weight_data(&cert.generator, m.spec())
}

/// Matrix view shared by the free modules of every rank: the action of `x`
/// is `v -> X sigma^{-1}(v)` and of `y` is `v -> Y sigma(v)`.
pub trait FreeModuleMatrices {
    fn module_spec(&self) -> &GwaSpec;
    fn rank(&self) -> usize;
    fn x_matrix(&self) -> PolyMatrix;
    fn y_matrix(&self) -> PolyMatrix;
}

impl FreeModuleMatrices for Rank1Module {
    fn module_spec(&self) -> &GwaSpec {
        self.spec()
    }

    fn rank(&self) -> usize {
        1
    }

    fn x_matrix(&self) -> PolyMatrix {
        PolyMatrix::new(1, vec![self.p_poly().clone()]).expect("1x1")
    }

    fn y_matrix(&self) -> PolyMatrix {
        PolyMatrix::new(1, vec![self.q_poly().clone()]).expect("1x1")
    }
}

impl FreeModuleMatrices for MatrixModule {
    fn module_spec(&self) -> &GwaSpec {
        self.spec()
    }

    fn rank(&self) -> usize {
        self.size()
    }

    fn x_matrix(&self) -> PolyMatrix {
        self.p_matrix().clone()
    }

    fn y_matrix(&self) -> PolyMatrix {
        self.q_matrix().clone()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenLabel {
    X,
    Y,
}

/// The residue matrix of a generator between two window slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowTransition {
    pub gen: GenLabel,
    pub from: Poly,
    pub to: Poly,
    /// Action matrix with entries reduced modulo the target ideal.
    pub matrix: PolyMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightWindow {
    pub slots: Vec<WeightSlot>,
    pub transitions: Vec<WindowTransition>,
}

/// Evaluate the weighting functor of a free module on a finite window of
/// maximal ideals: every slot has weight-space dimension equal to the rank,
/// and transition matrices are reported whenever both endpoints lie in the
/// window.
pub fn weighting_window<M: FreeModuleMatrices>(
    module: &M,
    ideals: &[Poly],
) -> MathResult<WeightWindow> {
    let spec = module.module_spec();
    let mut slots = Vec::with_capacity(ideals.len());
    for ideal in ideals {
        if ideal.field() != spec.field() {
            return Err(MathError::FieldMismatch);
        }
        if !ideal.is_monic() || ideal.is_constant() {
            return Err(MathError::ReducibleIdeal(ideal.to_string()));
        }
        if is_irreducible(ideal)? != Irreducibility::Yes {
            return Err(MathError::ReducibleIdeal(ideal.to_string()));
        }
        slots.push(WeightSlot {
            ideal: ideal.clone(),
            dim: module.rank() as u32,
            is_break: ideal.divides(spec.a_poly()),
        });
    }
    let reduce = |m: &PolyMatrix, modulus: &Poly| -> PolyMatrix {
        let n = m.size();
        let mut out = PolyMatrix::zero(n, m.field());
        for i in 0..n {
            for j in 0..n {
                *out.entry_mut(i, j) = m.entry(i, j).divmod(modulus).expect("nonzero").1;
            }
        }
        out
    };
    let mut transitions = Vec::new();
    for ideal in ideals {
        // x maps the slot at <m> into the slot at <sigma^{-1}(m)>
        let x_target = spec
            .sigma_pow(ideal, -1)
            .normalize_monic()
            .expect("nonzero")
            .1;
        if ideals.contains(&x_target) {
            transitions.push(WindowTransition {
                gen: GenLabel::X,
                from: ideal.clone(),
                to: x_target.clone(),
                matrix: reduce(&module.x_matrix(), &x_target),
            });
        }
        let y_target = spec
            .sigma_pow(ideal, 1)
            .normalize_monic()
            .expect("nonzero")
            .1;
        if ideals.contains(&y_target) {
            transitions.push(WindowTransition {
                gen: GenLabel::Y,
                from: ideal.clone(),
                to: y_target.clone(),
                matrix: reduce(&module.y_matrix(), &y_target),
            });
        }
    }
    Ok(WeightWindow { slots, transitions })
}
