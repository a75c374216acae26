//! Restricted Boltzmann machine over the doubled register, in operator form.
//!
//! The log-amplitude of a doubled configuration (σ, s̃) is
//!
//! ```text
//! ln ψ(σ, s̃) = Σᵢ (aᵢσᵢ + a′ᵢs̃ᵢ) + Σₖ ln cosh(bₖ + Σⱼ Wₖⱼσⱼ + Σⱼ W′ₖⱼs̃ⱼ)
//! ```
//!
//! with complex parameters; the model is holomorphic in all of them.  The
//! identity state is represented exactly by `a = a′ = b = 0`,
//! `Wᵢⱼ = −W′ᵢⱼ = (iπ/4)δᵢⱼ`: matched pairs give cosh(0) = 1, mismatched
//! pairs give cosh(±iπ/2) = 0.

use nalgebra::DVector;

use super::{ln_cosh, tanh_safe, ArchDescriptor, Flip, ParamKind, VariationalState, Walker};
use crate::error::{Error, Result};
use crate::thermofield::{AuxBasis, DoubledConfiguration};
use crate::C64;

/// RBM purification ansatz: visible biases `a` (physical), `a′` (auxiliary),
/// hidden biases `b`, and dense weight blocks `W` (hidden × physical),
/// `W′` (hidden × auxiliary).
#[derive(Clone, Debug)]
pub struct RbmoParams {
    n: usize,
    m: usize,
    a: Vec<C64>,
    a_tilde: Vec<C64>,
    b: Vec<C64>,
    w: Vec<C64>,       // row-major m×n
    w_tilde: Vec<C64>, // row-major m×n
}

/// Builds the exact identity-state initialization with `hidden = alpha ·
/// n_sites` hidden units (`alpha ≥ 1` so the diagonal weight blocks fit).
pub fn init_rbmo_identity(n_sites: usize, alpha: usize) -> Result<RbmoParams> {
    if n_sites == 0 {
        return Err(Error::InvalidConfig("RBM needs at least one site".into()));
    }
    if alpha == 0 {
        return Err(Error::InvalidConfig(
            "identity initialization needs hidden density alpha ≥ 1".into(),
        ));
    }
    let m = alpha * n_sites;
    let quarter_pi = C64::new(0.0, std::f64::consts::FRAC_PI_4);
    let mut w = vec![C64::new(0.0, 0.0); m * n_sites];
    let mut w_tilde = vec![C64::new(0.0, 0.0); m * n_sites];
    for k in 0..n_sites {
        w[k * n_sites + k] = quarter_pi;
        w_tilde[k * n_sites + k] = -quarter_pi;
    }
    Ok(RbmoParams {
        n: n_sites,
        m,
        a: vec![C64::new(0.0, 0.0); n_sites],
        a_tilde: vec![C64::new(0.0, 0.0); n_sites],
        b: vec![C64::new(0.0, 0.0); m],
        w,
        w_tilde,
    })
}

impl RbmoParams {
    pub fn hidden_count(&self) -> usize {
        self.m
    }

    /// Hidden-unit preactivations θₖ = bₖ + Σⱼ Wₖⱼσⱼ + Σⱼ W′ₖⱼs̃ⱼ.
    fn theta(&self, config: &DoubledConfiguration) -> Vec<C64> {
        let sigma = config.physical();
        let tilde = config.auxiliary();
        (0..self.m)
            .map(|k| {
                let mut t = self.b[k];
                let row = &self.w[k * self.n..(k + 1) * self.n];
                let row_tilde = &self.w_tilde[k * self.n..(k + 1) * self.n];
                for j in 0..self.n {
                    t += row[j] * f64::from(sigma[j]) + row_tilde[j] * f64::from(tilde[j]);
                }
                t
            })
            .collect()
    }

    fn linear(&self, config: &DoubledConfiguration) -> C64 {
        let mut lin = C64::new(0.0, 0.0);
        for j in 0..self.n {
            lin += self.a[j] * f64::from(config.physical()[j])
                + self.a_tilde[j] * f64::from(config.auxiliary()[j]);
        }
        lin
    }

    fn check_config(&self, config: &DoubledConfiguration) -> Result<()> {
        if config.basis() != AuxBasis::AuxZ {
            return Err(Error::BasisMismatch(
                "RBM purification states live in the AuxZ basis".into(),
            ));
        }
        if config.n_sites() != self.n {
            return Err(Error::InvalidConfig(format!(
                "configuration has {} sites, state has {}",
                config.n_sites(),
                self.n
            )));
        }
        Ok(())
    }
}

impl VariationalState for RbmoParams {
    fn n_sites(&self) -> usize {
        self.n
    }

    fn basis(&self) -> AuxBasis {
        AuxBasis::AuxZ
    }

    fn param_kind(&self) -> ParamKind {
        ParamKind::Holomorphic
    }

    fn param_count(&self) -> usize {
        2 * self.n + self.m + 2 * self.m * self.n
    }

    fn flat_params(&self) -> DVector<f64> {
        let mut flat = Vec::with_capacity(self.flat_len());
        for &z in self
            .a
            .iter()
            .chain(&self.a_tilde)
            .chain(&self.b)
            .chain(&self.w)
            .chain(&self.w_tilde)
        {
            flat.push(z.re);
            flat.push(z.im);
        }
        DVector::from_vec(flat)
    }

    fn set_flat_params(&mut self, params: &DVector<f64>) -> Result<()> {
        if params.len() != self.flat_len() {
            return Err(Error::Schema(format!(
                "expected {} flat parameters, got {}",
                self.flat_len(),
                params.len()
            )));
        }
        let mut it = params.iter();
        let mut next = || {
            let re = *it.next().expect("length checked");
            let im = *it.next().expect("length checked");
            C64::new(re, im)
        };
        for z in self
            .a
            .iter_mut()
            .chain(&mut self.a_tilde)
            .chain(&mut self.b)
            .chain(&mut self.w)
            .chain(&mut self.w_tilde)
        {
            *z = next();
        }
        Ok(())
    }

    fn log_amplitude(&self, config: &DoubledConfiguration) -> Result<C64> {
        self.check_config(config)?;
        let mut log = self.linear(config);
        for theta in self.theta(config) {
            log += ln_cosh(theta);
        }
        Ok(log)
    }

    fn log_derivatives(&self, config: &DoubledConfiguration) -> Result<DVector<C64>> {
        self.check_config(config)?;
        let sigma = config.physical();
        let tilde = config.auxiliary();
        let mut out = Vec::with_capacity(self.param_count());
        for j in 0..self.n {
            out.push(C64::new(f64::from(sigma[j]), 0.0));
        }
        for j in 0..self.n {
            out.push(C64::new(f64::from(tilde[j]), 0.0));
        }
        let tanh: Vec<C64> = self.theta(config).into_iter().map(tanh_safe).collect();
        out.extend(&tanh);
        for &t in &tanh {
            for j in 0..self.n {
                out.push(t * f64::from(sigma[j]));
            }
        }
        for &t in &tanh {
            for j in 0..self.n {
                out.push(t * f64::from(tilde[j]));
            }
        }
        Ok(DVector::from_vec(out))
    }

    fn amplitude_gradient(
        &self,
        config: &DoubledConfiguration,
        log_shift: C64,
    ) -> Result<(C64, DVector<C64>)> {
        self.check_config(config)?;
        let sigma = config.physical();
        let tilde = config.auxiliary();
        let prefactor = (self.linear(config) - log_shift).exp();
        let theta = self.theta(config);
        let cosh: Vec<C64> = theta.iter().map(|t| t.cosh()).collect();

        // Leave-one-out cosh products via prefix/suffix accumulation keep the
        // gradient finite where a single cosh factor vanishes.
        let mut prefix = vec![C64::new(1.0, 0.0); self.m + 1];
        for k in 0..self.m {
            prefix[k + 1] = prefix[k] * cosh[k];
        }
        let mut suffix = vec![C64::new(1.0, 0.0); self.m + 1];
        for k in (0..self.m).rev() {
            suffix[k] = suffix[k + 1] * cosh[k];
        }
        let psi = prefactor * prefix[self.m];

        // ∂ψ/∂bₖ, from which the weight gradients follow by σⱼ / s̃ⱼ factors.
        let d_bias: Vec<C64> = (0..self.m)
            .map(|k| prefactor * theta[k].sinh() * prefix[k] * suffix[k + 1])
            .collect();

        let mut grad = Vec::with_capacity(self.param_count());
        for j in 0..self.n {
            grad.push(psi * f64::from(sigma[j]));
        }
        for j in 0..self.n {
            grad.push(psi * f64::from(tilde[j]));
        }
        grad.extend(&d_bias);
        for k in 0..self.m {
            for j in 0..self.n {
                grad.push(d_bias[k] * f64::from(sigma[j]));
            }
        }
        for k in 0..self.m {
            for j in 0..self.n {
                grad.push(d_bias[k] * f64::from(tilde[j]));
            }
        }
        Ok((psi, DVector::from_vec(grad)))
    }

    fn descriptor(&self) -> ArchDescriptor {
        ArchDescriptor::Rbmo { n_sites: self.n, hidden: self.m }
    }

    fn clone_box(&self) -> Box<dyn VariationalState> {
        Box::new(self.clone())
    }

    fn walker<'a>(&'a self, start: DoubledConfiguration) -> Result<Box<dyn Walker + 'a>> {
        self.check_config(&start)?;
        Ok(Box::new(RbmoWalker::new(self, start)))
    }

    fn as_dyn(&self) -> &dyn VariationalState {
        self
    }
}

/// Incremental Metropolis walker: caches the hidden preactivations θ and the
/// squared cosh magnitudes, so a proposal costs O(hidden) instead of a full
/// O(hidden × sites) re-evaluation.  |cosh(x+iy)|² ∝ cosh 2x + cos 2y avoids
/// complex logarithms in the accept test.
struct RbmoWalker<'a> {
    state: &'a RbmoParams,
    config: DoubledConfiguration,
    theta: Vec<C64>,
    linear: C64,
    g: Vec<f64>, // cosh(2 Re θₖ) + cos(2 Im θₖ)
    g_prod: f64,
    theta_pending: Vec<C64>,
    g_pending: Vec<f64>,
    pending: Option<PendingMove>,
}

struct PendingMove {
    flips: [Option<Flip>; 2],
    linear: C64,
    g_prod: f64,
}

fn cosh_mag_sq(theta: C64) -> f64 {
    (2.0 * theta.re).cosh() + (2.0 * theta.im).cos()
}

impl<'a> RbmoWalker<'a> {
    fn new(state: &'a RbmoParams, config: DoubledConfiguration) -> Self {
        let theta = state.theta(&config);
        let linear = state.linear(&config);
        let g: Vec<f64> = theta.iter().map(|&t| cosh_mag_sq(t)).collect();
        let g_prod = g.iter().product();
        let m = state.m;
        Self {
            state,
            config,
            theta,
            linear,
            g,
            g_prod,
            theta_pending: vec![C64::new(0.0, 0.0); m],
            g_pending: vec![0.0; m],
            pending: None,
        }
    }
}

impl Walker for RbmoWalker<'_> {
    fn config(&self) -> &DoubledConfiguration {
        &self.config
    }

    fn log_amp(&self) -> C64 {
        let mut log = self.linear;
        for &t in &self.theta {
            log += ln_cosh(t);
        }
        log
    }

    fn propose(&mut self, flips: &[Flip]) -> f64 {
        debug_assert!(flips.len() <= 2);
        let n = self.state.n;
        self.theta_pending.copy_from_slice(&self.theta);
        let mut linear = self.linear;
        let mut stored = [None, None];
        for (slot, &flip) in flips.iter().enumerate() {
            stored[slot] = Some(flip);
            match flip {
                Flip::Physical(j) => {
                    let step = -2.0 * f64::from(self.config.physical()[j]);
                    linear += self.state.a[j] * step;
                    for k in 0..self.state.m {
                        self.theta_pending[k] += self.state.w[k * n + j] * step;
                    }
                }
                Flip::Auxiliary(j) => {
                    let step = -2.0 * f64::from(self.config.auxiliary()[j]);
                    linear += self.state.a_tilde[j] * step;
                    for k in 0..self.state.m {
                        self.theta_pending[k] += self.state.w_tilde[k * n + j] * step;
                    }
                }
            }
        }
        let mut g_prod = 1.0;
        for k in 0..self.state.m {
            let g = cosh_mag_sq(self.theta_pending[k]);
            self.g_pending[k] = g;
            g_prod *= g;
        }
        let log_ratio = 2.0 * (linear.re - self.linear.re) + (g_prod / self.g_prod).ln();
        self.pending = Some(PendingMove { flips: stored, linear, g_prod });
        log_ratio
    }

    fn accept(&mut self) {
        let mv = self.pending.take().expect("accept without pending proposal");
        for flip in mv.flips.into_iter().flatten() {
            match flip {
                Flip::Physical(j) => self.config.flip_physical(j),
                Flip::Auxiliary(j) => self.config.flip_auxiliary(j),
            }
        }
        std::mem::swap(&mut self.theta, &mut self.theta_pending);
        std::mem::swap(&mut self.g, &mut self.g_pending);
        self.linear = mv.linear;
        self.g_prod = mv.g_prod;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermofield::identity_amplitude;
    use approx::assert_abs_diff_eq;

    fn all_configs(n: usize) -> Vec<DoubledConfiguration> {
        (0..1usize << (2 * n))
            .map(|idx| DoubledConfiguration::from_doubled_index(idx, n, AuxBasis::AuxZ))
            .collect()
    }

    /// A deterministic scrambled parameter set for derivative tests.
    fn scrambled(n: usize, alpha: usize) -> RbmoParams {
        let mut state = init_rbmo_identity(n, alpha).unwrap();
        let mut flat = state.flat_params();
        let mut seed = 0x9e3779b97f4a7c15u64;
        for x in flat.iter_mut() {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            *x += 0.3 * ((seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5);
        }
        state.set_flat_params(&flat).unwrap();
        state
    }

    #[test]
    fn identity_init_reproduces_identity_amplitudes() {
        for n in 1..=4 {
            let state = init_rbmo_identity(n, 1).unwrap();
            for cfg in all_configs(n) {
                let psi = state.log_amplitude(&cfg).unwrap().exp();
                let expected = identity_amplitude(&cfg).unwrap();
                assert_abs_diff_eq!(psi.re, expected.re, epsilon = 1e-15);
                assert_abs_diff_eq!(psi.im, expected.im, epsilon = 1e-15);
            }
        }
        // Larger hidden density must not disturb the identity.
        let state = init_rbmo_identity(3, 2).unwrap();
        for cfg in all_configs(3) {
            let psi = state.log_amplitude(&cfg).unwrap().exp();
            assert_abs_diff_eq!(psi.re, identity_amplitude(&cfg).unwrap().re, epsilon = 1e-15);
        }
    }

    #[test]
    fn log_derivatives_match_central_differences_and_holomorphy() {
        let state = scrambled(2, 2);
        let cfg = DoubledConfiguration::new(vec![1, -1], vec![-1, -1], AuxBasis::AuxZ).unwrap();
        let analytic = state.log_derivatives(&cfg).unwrap();
        let flat0 = state.flat_params();
        let h = 1e-5;
        for k in 0..state.param_count() {
            let mut probe = |offset: usize, delta: f64| -> C64 {
                let mut s = state.clone();
                let mut flat = flat0.clone();
                flat[2 * k + offset] += delta;
                s.set_flat_params(&flat).unwrap();
                s.log_amplitude(&cfg).unwrap()
            };
            // Derivative along the real direction.
            let d_re = (probe(0, h) - probe(0, -h)) / (2.0 * h);
            // Derivative along the imaginary direction must equal i·O_k for
            // a holomorphic model.
            let d_im = (probe(1, h) - probe(1, -h)) / (2.0 * h);
            let o = analytic[k];
            assert_abs_diff_eq!(d_re.re, o.re, epsilon = 1e-6 * (1.0 + o.norm()));
            assert_abs_diff_eq!(d_re.im, o.im, epsilon = 1e-6 * (1.0 + o.norm()));
            assert_abs_diff_eq!(d_im.re, -o.im, epsilon = 1e-6 * (1.0 + o.norm()));
            assert_abs_diff_eq!(d_im.im, o.re, epsilon = 1e-6 * (1.0 + o.norm()));
        }
    }

    #[test]
    fn amplitude_gradient_is_total_also_at_identity_zeros() {
        // At the identity init, a mismatched pair makes ψ vanish through a
        // single cosh factor; the amplitude gradient must stay finite and
        // match finite differences of ψ itself.
        let state = init_rbmo_identity(2, 1).unwrap();
        let cfg = DoubledConfiguration::new(vec![1, -1], vec![1, 1], AuxBasis::AuxZ).unwrap();
        let shift = C64::new(0.0, 0.0);
        let (psi, grad) = state.amplitude_gradient(&cfg, shift).unwrap();
        assert!(psi.norm() < 1e-15);
        let flat0 = state.flat_params();
        let h = 1e-6;
        for k in 0..state.param_count() {
            let mut probe = |offset: usize, delta: f64| -> C64 {
                let mut s = state.clone();
                let mut flat = flat0.clone();
                flat[2 * k + offset] += delta;
                s.set_flat_params(&flat).unwrap();
                s.log_amplitude(&cfg).unwrap().exp()
            };
            let d_re = (probe(0, h) - probe(0, -h)) / (2.0 * h);
            assert_abs_diff_eq!(d_re.re, grad[k].re, epsilon = 1e-7);
            assert_abs_diff_eq!(d_re.im, grad[k].im, epsilon = 1e-7);
        }
        // The mismatched pair couples hidden unit 1 (site index 1); its
        // weight gradient is O(1), which is what lifts the zero.
        let w_index = 2 * 2 + 2 + 2 + 1; // a, a′, b, then w[1][1] at row 1 col 1
        assert!(grad[w_index].norm() > 0.4);
    }

    #[test]
    fn amplitude_gradient_equals_psi_times_log_derivatives_on_support() {
        let state = scrambled(3, 1);
        let cfg = DoubledConfiguration::new(vec![1, -1, 1], vec![1, -1, -1], AuxBasis::AuxZ).unwrap();
        let log_amp = state.log_amplitude(&cfg).unwrap();
        let (psi, grad) = state.amplitude_gradient(&cfg, C64::new(0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(psi.re, log_amp.exp().re, epsilon = 1e-12);
        let o = state.log_derivatives(&cfg).unwrap();
        for k in 0..state.param_count() {
            let expected = psi * o[k];
            assert_abs_diff_eq!(grad[k].re, expected.re, epsilon = 1e-11);
            assert_abs_diff_eq!(grad[k].im, expected.im, epsilon = 1e-11);
        }
        // The log shift rescales both outputs coherently.
        let shift = C64::new(0.7, -0.3);
        let (psi_s, grad_s) = state.amplitude_gradient(&cfg, shift).unwrap();
        let scale = (-shift).exp();
        assert_abs_diff_eq!(psi_s.re, (psi * scale).re, epsilon = 1e-12);
        assert_abs_diff_eq!(grad_s[5].im, (grad[5] * scale).im, epsilon = 1e-12);
    }

    #[test]
    fn incremental_walker_matches_full_evaluation() {
        let state = scrambled(3, 2);
        let start = DoubledConfiguration::new(vec![1, 1, -1], vec![1, 1, -1], AuxBasis::AuxZ).unwrap();
        let mut walker = state.walker(start.clone()).unwrap();
        let moves: Vec<Vec<Flip>> = vec![
            vec![Flip::Physical(0)],
            vec![Flip::Auxiliary(2)],
            vec![Flip::Physical(1), Flip::Auxiliary(1)],
            vec![Flip::Physical(2)],
            vec![Flip::Auxiliary(0), Flip::Physical(0)],
        ];
        let mut reference = start;
        for (i, flips) in moves.iter().enumerate() {
            let before = state.log_amplitude(&reference).unwrap();
            let log_ratio = walker.propose(flips);
            let mut after_cfg = reference.clone();
            for &f in flips {
                match f {
                    Flip::Physical(j) => after_cfg.flip_physical(j),
                    Flip::Auxiliary(j) => after_cfg.flip_auxiliary(j),
                }
            }
            let after = state.log_amplitude(&after_cfg).unwrap();
            assert_abs_diff_eq!(log_ratio, 2.0 * (after.re - before.re), epsilon = 1e-10);
            // Accept every other proposal to exercise both paths.
            if i % 2 == 0 {
                walker.accept();
                reference = after_cfg;
            }
            let log_amp = walker.log_amp();
            let expected = state.log_amplitude(&reference).unwrap();
            assert_abs_diff_eq!(log_amp.re, expected.re, epsilon = 1e-10);
            assert_abs_diff_eq!(log_amp.im, expected.im, epsilon = 1e-10);
            assert_eq!(walker.config(), &reference);
        }
    }

    #[test]
    fn flat_params_round_trip() {
        let state = scrambled(2, 3);
        let flat = state.flat_params();
        assert_eq!(flat.len(), state.flat_len());
        let mut other = init_rbmo_identity(2, 3).unwrap();
        other.set_flat_params(&flat).unwrap();
        assert_eq!(other.flat_params(), flat);
        // Wrong length is rejected.
        assert!(other.set_flat_params(&DVector::zeros(3)).is_err());
    }

    #[test]
    fn rejects_wrong_basis_and_size() {
        let state = init_rbmo_identity(2, 1).unwrap();
        let rotated = DoubledConfiguration::new(vec![1, 1], vec![1, 1], AuxBasis::AuxX).unwrap();
        assert!(state.log_amplitude(&rotated).is_err());
        let small = DoubledConfiguration::new(vec![1], vec![1], AuxBasis::AuxZ).unwrap();
        assert!(state.log_amplitude(&small).is_err());
    }
}
