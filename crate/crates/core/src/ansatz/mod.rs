//! Variational wave functions over doubled configurations.
//!
//! Two neural architectures parameterize purifications ψ(σ, s̃):
//!
//! * [`RbmoParams`] — a restricted Boltzmann machine whose visible layer is
//!   the doubled register.  Parameters are complex and the model is
//!   holomorphic, so imaginary- and real-time variational flows act on
//!   complex parameter vectors.
//! * [`ArnnoParams`] — an autoregressive recurrent network (one LSTM cell
//!   plus amplitude/phase heads) over the per-site four-state alphabet
//!   (σᵢ, s̃ᵢ).  Parameters are real and the state is normalized, which
//!   enables direct (ancestral) sampling.
//!
//! Both come with exact identity-state initializations at β = 0, and
//! [`MeanFieldWrapped`] multiplies any inner network by a per-site mean-field
//! factor that can represent the identity support exactly.
//!
//! The [`VariationalState`] trait is the contract consumed by samplers and
//! evolution drivers: log-amplitudes (with −∞ real part encoding exact
//! zeros), log-derivatives `O_k = ∂_θₖ ln ψ`, and the *total* amplitude
//! gradient `(ψ, ∂_θₖ ψ)` that stays finite where ψ vanishes — the quantity
//! infidelity-based imaginary-time steps need in order to lift amplitudes
//! off exact zeros.

mod arnno;
mod mean_field;
mod rbmo;

pub use arnno::{init_arnno_identity, ArnnoParams};
pub use mean_field::{wrap_mean_field, MeanFieldWrapped};
pub use rbmo::{init_rbmo_identity, RbmoParams};

use nalgebra::DVector;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::thermofield::{AuxBasis, DoubledConfiguration};
use crate::C64;

/// How the flat parameter vector is interpreted by evolution drivers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamKind {
    /// Complex parameters of a holomorphic model; the flat storage
    /// interleaves (re, im) pairs and `param_count` counts complex entries.
    Holomorphic,
    /// Real parameters; the flat storage is the parameter vector itself.
    Real,
}

/// Architecture + hyperparameters, serializable into checkpoints.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "architecture", rename_all = "snake_case")]
pub enum ArchDescriptor {
    Rbmo { n_sites: usize, hidden: usize },
    ArnnoX { n_sites: usize, hidden: usize },
    ArnnoZ { n_sites: usize, hidden: usize },
    MeanFieldWrapped { inner: Box<ArchDescriptor> },
}

impl ArchDescriptor {
    pub fn n_sites(&self) -> usize {
        match self {
            Self::Rbmo { n_sites, .. }
            | Self::ArnnoX { n_sites, .. }
            | Self::ArnnoZ { n_sites, .. } => *n_sites,
            Self::MeanFieldWrapped { inner } => inner.n_sites(),
        }
    }
}

/// Instantiates a state of the described architecture with its identity
/// (β = 0) initialization; `seed` feeds the randomized parts of the
/// autoregressive initialization.  Checkpoint loaders call this and then
/// overwrite the flat parameters.
pub fn state_from_descriptor(desc: &ArchDescriptor, seed: u64) -> Result<Box<dyn VariationalState>> {
    match desc {
        ArchDescriptor::Rbmo { n_sites, hidden } => {
            if *hidden % n_sites != 0 {
                return Err(Error::Schema(format!(
                    "RBM hidden count {hidden} is not a multiple of {n_sites} sites"
                )));
            }
            Ok(Box::new(init_rbmo_identity(*n_sites, hidden / n_sites)?))
        }
        ArchDescriptor::ArnnoX { n_sites, hidden } => Ok(Box::new(init_arnno_identity(
            *n_sites,
            *hidden,
            AuxBasis::AuxX,
            seed,
        )?)),
        ArchDescriptor::ArnnoZ { n_sites, hidden } => Ok(Box::new(init_arnno_identity(
            *n_sites,
            *hidden,
            AuxBasis::AuxZ,
            seed,
        )?)),
        ArchDescriptor::MeanFieldWrapped { inner } => {
            Ok(Box::new(wrap_mean_field(state_from_descriptor(inner, seed)?)))
        }
    }
}

/// Contract between wave functions and the samplers / evolution drivers.
pub trait VariationalState: Send + Sync {
    fn n_sites(&self) -> usize;

    /// Auxiliary basis the configurations of this state live in.
    fn basis(&self) -> AuxBasis;

    fn param_kind(&self) -> ParamKind;

    /// Number of variational parameters (complex entries for holomorphic
    /// models, real entries otherwise).
    fn param_count(&self) -> usize;

    /// Length of the flat f64 parameter storage.
    fn flat_len(&self) -> usize {
        match self.param_kind() {
            ParamKind::Holomorphic => 2 * self.param_count(),
            ParamKind::Real => self.param_count(),
        }
    }

    /// Flat f64 parameter vector (holomorphic models interleave re/im, which
    /// is exactly a little-endian complex128 block).
    fn flat_params(&self) -> DVector<f64>;

    fn set_flat_params(&mut self, params: &DVector<f64>) -> Result<()>;

    /// ln ψ(config).  Exact zeros are reported with `re == -∞`.
    fn log_amplitude(&self, config: &DoubledConfiguration) -> Result<C64>;

    /// Log-derivatives `O_k = ∂_θₖ ln ψ(config)`, length [`Self::param_count`].
    /// Fails with [`Error::ZeroAmplitude`] on exactly vanishing amplitudes.
    fn log_derivatives(&self, config: &DoubledConfiguration) -> Result<DVector<C64>>;

    /// Total amplitude gradient `(ψ·e^{−shift}, ∂_θₖψ·e^{−shift})`, finite
    /// also where ψ = 0 (there the product-rule limit of ψ·O_k is taken
    /// analytically).  `log_shift` rescales both outputs to keep
    /// unnormalized amplitudes in range.
    fn amplitude_gradient(
        &self,
        config: &DoubledConfiguration,
        log_shift: C64,
    ) -> Result<(C64, DVector<C64>)>;

    fn descriptor(&self) -> ArchDescriptor;

    fn clone_box(&self) -> Box<dyn VariationalState>;

    /// True for autoregressive states with unit norm and ancestral sampling.
    fn is_normalized(&self) -> bool {
        false
    }

    /// Draws one configuration from |ψ|² (normalized states only) and
    /// returns it with its log-amplitude.
    fn direct_sample(&self, _rng: &mut dyn RngCore) -> Result<(DoubledConfiguration, C64)> {
        Err(Error::Sampling(
            "direct sampling requires a normalized autoregressive state".into(),
        ))
    }

    /// Conditional distribution of site `site` given the previous sites of
    /// `config` (autoregressive states only): per-outcome probabilities and
    /// phases over the local alphabet (↑+̃), (↑−̃), (↓+̃), (↓−̃).
    fn conditionals(&self, _config: &DoubledConfiguration, _site: usize) -> Result<([f64; 4], [f64; 4])> {
        Err(Error::Sampling("conditionals are only defined for autoregressive states".into()))
    }

    /// A Metropolis walker holding per-chain caches.  The default
    /// re-evaluates [`Self::log_amplitude`] per proposal; architectures with
    /// cheap incremental updates override it.
    fn walker<'a>(&'a self, start: DoubledConfiguration) -> Result<Box<dyn Walker + 'a>> {
        Ok(Box::new(GenericWalker::new(self.as_dyn(), start)?))
    }

    /// Helper for default methods that need a trait object of `self`.
    fn as_dyn(&self) -> &dyn VariationalState;
}

/// Single-slot move of a Metropolis proposal; joint (σᵢ, s̃ᵢ) moves are two
/// flips of the same site.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flip {
    Physical(usize),
    Auxiliary(usize),
}

/// Per-chain state of a Metropolis walk: the current configuration, its
/// log-amplitude, and a propose/accept protocol over slot flips.
pub trait Walker: Send {
    fn config(&self) -> &DoubledConfiguration;

    /// ln ψ of the current configuration.
    fn log_amp(&self) -> C64;

    /// Log weight ratio `ln |ψ(x′)/ψ(x)|²` for flipping `flips`; `-∞` when
    /// the proposed amplitude vanishes.  The proposal is kept pending until
    /// [`Walker::accept`] commits it; a new call discards the previous one.
    fn propose(&mut self, flips: &[Flip]) -> f64;

    /// Commits the pending proposal.
    fn accept(&mut self);
}

/// Fallback walker: full log-amplitude evaluation per proposal.
struct GenericWalker<'a> {
    state: &'a dyn VariationalState,
    config: DoubledConfiguration,
    log_amp: C64,
    pending: Option<(Vec<Flip>, C64)>,
}

impl<'a> GenericWalker<'a> {
    fn new(state: &'a dyn VariationalState, start: DoubledConfiguration) -> Result<Self> {
        let log_amp = state.log_amplitude(&start)?;
        if !log_amp.re.is_finite() {
            return Err(Error::ZeroAmplitude(
                "Metropolis chains must start on a configuration with nonzero amplitude".into(),
            ));
        }
        Ok(Self { state, config: start, log_amp, pending: None })
    }
}

fn apply_flips(config: &mut DoubledConfiguration, flips: &[Flip]) {
    for &flip in flips {
        match flip {
            Flip::Physical(site) => config.flip_physical(site),
            Flip::Auxiliary(site) => config.flip_auxiliary(site),
        }
    }
}

impl Walker for GenericWalker<'_> {
    fn config(&self) -> &DoubledConfiguration {
        &self.config
    }

    fn log_amp(&self) -> C64 {
        self.log_amp
    }

    fn propose(&mut self, flips: &[Flip]) -> f64 {
        apply_flips(&mut self.config, flips);
        let candidate = self
            .state
            .log_amplitude(&self.config)
            .expect("configuration stays well-formed under flips");
        apply_flips(&mut self.config, flips); // restore
        self.pending = Some((flips.to_vec(), candidate));
        2.0 * (candidate.re - self.log_amp.re)
    }

    fn accept(&mut self) {
        let (flips, candidate) = self.pending.take().expect("accept without pending proposal");
        apply_flips(&mut self.config, &flips);
        self.log_amp = candidate;
    }
}

/// Overflow-safe ln cosh for complex arguments.  For |Re z| > 12 the direct
/// cosh would lose precision or overflow, so the asymptotic form
/// `ln cosh z = |z| − ln 2 + ln(1 + e^{−2|z|})` (with |z| the sign-flipped
/// argument; cosh is even) is used.
pub(crate) fn ln_cosh(z: C64) -> C64 {
    let zp = if z.re < 0.0 { -z } else { z };
    if zp.re > 12.0 {
        let correction = (C64::new(1.0, 0.0) + (-2.0 * zp).exp()).ln();
        zp - C64::new(std::f64::consts::LN_2, 0.0) + correction
    } else {
        zp.cosh().ln()
    }
}

/// tanh with a stable asymptotic branch; the textbook formula returns NaN
/// for |Re z| large enough that sinh/cosh overflow individually.
pub(crate) fn tanh_safe(z: C64) -> C64 {
    let sign = if z.re < 0.0 { -1.0 } else { 1.0 };
    let zp = z * sign;
    if zp.re > 20.0 {
        // (1 − e^{−2z})/(1 + e^{−2z}) ≈ 1 − 2e^{−2z} with |e^{−2z}| ≤ e^{−40}.
        (C64::new(1.0, 0.0) - 2.0 * (-2.0 * zp).exp()) * sign
    } else {
        zp.tanh() * sign
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ln_cosh_matches_direct_evaluation_across_branch() {
        for &(re, im) in &[(0.0, 0.0), (0.5, 1.2), (-3.0, 0.7), (11.9, -2.0), (12.1, 0.3), (40.0, 1.0), (-55.0, -0.4)] {
            let z = C64::new(re, im);
            let got = ln_cosh(z);
            // Reference via the asymptotic-safe identity evaluated in a
            // different arrangement: cosh z = e^{|x|}(e^{z−|x|}+e^{−z−|x|})/2.
            let xs = re.abs();
            let reference = (((z - xs).exp() + (-z - C64::new(xs, 0.0)).exp()) / 2.0).ln() + xs;
            assert_abs_diff_eq!(got.re, reference.re, epsilon = 1e-12);
            // Compare phases on the circle (ln branches may differ by 2π).
            let dphi = (got.im - reference.im).rem_euclid(2.0 * std::f64::consts::PI);
            assert!(dphi < 1e-12 || (2.0 * std::f64::consts::PI - dphi) < 1e-12);
        }
    }

    #[test]
    fn tanh_safe_is_finite_and_accurate_for_large_arguments() {
        let z = C64::new(350.0, 0.4);
        let t = tanh_safe(z);
        assert!(t.re.is_finite() && t.im.is_finite());
        assert_abs_diff_eq!(t.re, 1.0, epsilon = 1e-14);
        let z = C64::new(-350.0, 0.4);
        assert_abs_diff_eq!(tanh_safe(z).re, -1.0, epsilon = 1e-14);
        // Agreement with the library tanh in the safe region.
        let z = C64::new(1.3, -0.8);
        let lib = z.tanh();
        let got = tanh_safe(z);
        assert_abs_diff_eq!(got.re, lib.re, epsilon = 1e-15);
        assert_abs_diff_eq!(got.im, lib.im, epsilon = 1e-15);
    }
}
