//! The spin-raising operator ð and its conjugate ð̄ acting on the harmonic basis.
//!
//! `ð ₛY_{ℓm} = +√((ℓ−s)(ℓ+s+1)) ₛ₊₁Y_{ℓm}` and `ð̄ ₛY_{ℓm} = −√((ℓ+s)(ℓ−s+1)) ₛ₋₁Y_{ℓm}`,
//! where `ðη = −sin^s θ (∂_θ + (i/sin θ)∂_φ)(sin^{−s} θ η)` for spin weight `s`.

/// Which operator to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EthDirection {
    /// ð, spin `s → s+1`.
    Raise,
    /// ð̄, spin `s → s−1`.
    Lower,
}

/// Ladder coefficient; `in_range` is false when the input or output spin leaves `[−ℓ, ℓ]`,
/// in which case `value` is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EthFactor {
    pub value: f64,
    pub in_range: bool,
}

/// Coefficient by which ð or ð̄ maps `ₛY_{ℓm}` onto `ₛ₊₁Y_{ℓm}` or `ₛ₋₁Y_{ℓm}`.
pub fn eth_on_basis(spin: i64, ell: usize, direction: EthDirection) -> EthFactor {
    let l = ell as i64;
    let target = match direction {
        EthDirection::Raise => spin + 1,
        EthDirection::Lower => spin - 1,
    };
    if spin.abs() > l || target.abs() > l {
        return EthFactor { value: 0.0, in_range: false };
    }
    let value = match direction {
        EthDirection::Raise => (((l - spin) * (l + spin + 1)) as f64).sqrt(),
        EthDirection::Lower => -(((l + spin) * (l - spin + 1)) as f64).sqrt(),
    };
    EthFactor { value, in_range: true }
}

/// Product of `steps` successive ladder coefficients starting at `spin`.
pub fn eth_power(spin: i64, ell: usize, direction: EthDirection, steps: usize) -> EthFactor {
    let mut s = spin;
    let mut value = 1.0;
    for _ in 0..steps {
        let f = eth_on_basis(s, ell, direction);
        if !f.in_range {
            return f;
        }
        value *= f.value;
        s += if direction == EthDirection::Raise { 1 } else { -1 };
    }
    EthFactor { value, in_range: true }
}
