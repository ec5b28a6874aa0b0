//! Kernel of `M*`, the tiling sets `E_k`, `E_∞`, the spectral split
//! `h = h_B + h_∞` and the abstract sub-isometry model.

pub mod experiment;
pub mod model;
pub mod sets;

pub use experiment::{shannon_experiment, shannon_experiment_for, split_projection, ShannonConfig, ShannonRow, ShannonTrace};
pub use model::{abstract_model_check, commutant_check, CommutantReport, ModelReport, SubIsometryModel};
pub use sets::{f_set, kernel_element_defects, kernel_set, wold_sets, KernelElement, TilingReport, WoldDump, WoldSets};
