use std::path::Path;

use crate::deconv::{AlphaSchedule, DeconvParams};
use crate::error::{DeblurError, Result};
use crate::kernel_est::KernelEstParams;
use crate::predict::PredictParams;

/// Every tunable of the deblurring pipeline.
#[derive(Clone, Debug, PartialEq)]
pub struct DeblurConfig {
    /// Side of the estimated kernel at full resolution (odd).
    pub kernel_size: usize,
    pub min_kernel: usize,
    pub pyramid_factor: f64,
    pub iterations_per_scale: usize,
    pub lambda0: f64,
    pub lambda_decay: f64,
    pub alpha0: f64,
    pub mu: f64,
    /// Bilateral sigmas and PDE steps; `lambda` is overwritten by the
    /// schedule.
    pub predict: PredictParams,
    pub kernel: KernelEstParams,
    /// Parameters of the final deconvolution.
    pub deconv: DeconvParams,
    /// Inner alternations of the deconvolutions inside the estimation loop.
    pub intermediate_inner_iterations: usize,
    pub threshold_scale: f64,
    /// Defaults to `ceil(kernel_size / 2)`.
    pub dilate_radius: Option<usize>,
    /// Defaults to `3 · kernel_size`.
    pub min_side: Option<usize>,
}

impl Default for DeblurConfig {
    fn default() -> Self {
        Self::with_kernel_size(15)
    }
}

impl DeblurConfig {
    pub fn with_kernel_size(kernel_size: usize) -> Self {
        Self {
            kernel_size,
            min_kernel: 3,
            pyramid_factor: std::f64::consts::FRAC_1_SQRT_2,
            iterations_per_scale: 7,
            lambda0: 1.0,
            lambda_decay: 0.9,
            alpha0: 0.2,
            mu: 0.9,
            predict: PredictParams::default(),
            kernel: KernelEstParams::default(),
            deconv: DeconvParams::default(),
            intermediate_inner_iterations: 1,
            threshold_scale: 2.0,
            dilate_radius: None,
            min_side: None,
        }
    }

    pub fn dilate_radius(&self) -> usize {
        self.dilate_radius.unwrap_or(self.kernel_size.div_ceil(2))
    }

    pub fn min_side(&self) -> usize {
        self.min_side.unwrap_or(3 * self.kernel_size)
    }

    /// `λ` after `n` iterations at one scale.
    pub fn lambda_at(&self, n: usize) -> f64 {
        self.lambda0 * self.lambda_decay.powi(n as i32)
    }

    pub fn alpha_schedule(&self) -> AlphaSchedule {
        AlphaSchedule::new(self.alpha0, self.mu)
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations_per_scale == 0 {
            return Err(DeblurError::NoIterations);
        }
        if self.kernel_size % 2 == 0 || self.kernel_size == 0 {
            return Err(DeblurError::Parameter(format!(
                "kernel size must be odd, got {}",
                self.kernel_size
            )));
        }
        let positive = [
            ("lambda0", self.lambda0),
            ("lambda_decay", self.lambda_decay),
            ("threshold_scale", self.threshold_scale),
            ("sigma_spatial", self.predict.sigma_spatial),
            ("sigma_range", self.predict.sigma_range),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(DeblurError::Parameter(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if self.deconv.beta < 0.0 {
            return Err(DeblurError::Parameter("beta must be non-negative".into()));
        }
        self.alpha_schedule().validate()?;
        self.kernel.validate()
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> std::result::Result<T, String> {
            v.parse()
                .map_err(|_| format!("invalid value {v:?} for {key}"))
        }
        fn list<const N: usize>(key: &str, v: &str) -> std::result::Result<[f64; N], String> {
            let vals = v
                .split(',')
                .map(|s| num::<f64>(key, s.trim()))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            vals.try_into()
                .map_err(|_| format!("{key} needs {N} comma-separated values"))
        }
        match key {
            "kernel_size" => self.kernel_size = num(key, value)?,
            "min_kernel" => self.min_kernel = num(key, value)?,
            "pyramid_factor" => self.pyramid_factor = num(key, value)?,
            "iterations_per_scale" => self.iterations_per_scale = num(key, value)?,
            "lambda0" => self.lambda0 = num(key, value)?,
            "lambda_decay" => self.lambda_decay = num(key, value)?,
            "alpha0" => self.alpha0 = num(key, value)?,
            "mu" => self.mu = num(key, value)?,
            "beta" => self.deconv.beta = num(key, value)?,
            "theta" => self.kernel.theta = num(key, value)?,
            "gamma" => self.kernel.gamma = num(key, value)?,
            "denoise_divisor" => self.kernel.denoise_divisor = num(key, value)?,
            "threshold_ratio" => self.kernel.threshold_ratio = num(key, value)?,
            "pair_weights" => self.kernel.weights = list(key, value)?,
            "derivative_weights" => self.deconv.weights = list(key, value)?,
            "inner_iterations" => self.deconv.inner_iterations = num(key, value)?,
            "intermediate_inner_iterations" => {
                self.intermediate_inner_iterations = num(key, value)?
            }
            "sigma_spatial" => self.predict.sigma_spatial = num(key, value)?,
            "sigma_range" => self.predict.sigma_range = num(key, value)?,
            "pde_iterations" => self.predict.pde_iterations = num(key, value)?,
            "threshold_scale" => self.threshold_scale = num(key, value)?,
            "dilate_radius" => self.dilate_radius = Some(num(key, value)?),
            "min_side" => self.min_side = Some(num(key, value)?),
            _ => return Err(format!("unknown config key {key:?}")),
        }
        Ok(())
    }

    /// Applies a flat `key = value` file on top of `self`. Blank lines and
    /// lines starting with `#` are skipped.
    pub fn apply_text(&mut self, text: &str) -> std::result::Result<(), String> {
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", n + 1))?;
            self.set(k.trim(), v.trim())
                .map_err(|e| format!("line {}: {e}", n + 1))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| DeblurError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.apply_text(&text)
            .map_err(|message| DeblurError::Format {
                path: path.to_path_buf(),
                message,
            })
    }
}
