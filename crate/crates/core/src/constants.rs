//! Physical constants (CODATA 2018) and ⁸⁷Rb line data.

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const PLANCK: f64 = 6.626_070_15e-34;
pub const HBAR: f64 = PLANCK / (2.0 * std::f64::consts::PI);
pub const BOLTZMANN: f64 = 1.380_649e-23;
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;

/// Rubidium-87 data used throughout the detection and dynamics models.
pub mod rb87 {
    use super::ATOMIC_MASS_UNIT;

    pub const MASS: f64 = 86.909_180_527 * ATOMIC_MASS_UNIT;

    /// D2 (5S₁/₂ → 5P₃/₂) vacuum wavelength.
    pub const D2_WAVELENGTH: f64 = 780.241_209_686e-9;
    /// Natural linewidth Γ/2π of the D2 line.
    pub const D2_LINEWIDTH_HZ: f64 = 6.0666e6;

    /// Ground-state hyperfine (clock) splitting.
    pub const GROUND_SPLITTING_HZ: f64 = 6.834_682_610_904e9;

    /// Energy of 5P₃/₂ F' relative to F'=3, indexed by F'.
    pub const EXCITED_OFFSET_HZ: [f64; 4] = [
        -(266.650e6 + 156.947e6 + 72.218e6),
        -(266.650e6 + 156.947e6),
        -266.650e6,
        0.0,
    ];

    /// Saturation intensity of the cycling |F=2,m=2⟩ → |F'=3,m'=3⟩ transition.
    pub const CYCLING_SATURATION_INTENSITY: f64 = 16.69;

    /// π-transition saturation intensities from |F=1⟩ to F'=0,1,2 with the
    /// Zeeman sublevels equally populated (W/m²).
    pub const F1_SATURATION_INTENSITY: [f64; 3] = [16.67, 26.7, 61.23];
    /// Branching from F'=0,1,2 back into |F=2⟩.
    pub const F1_BRANCHING_TO_F2: [f64; 3] = [0.0, 0.2, 0.5];

    /// Relative π line strengths |⟨F=2,0|d₀|F',0⟩|² in units of the reduced
    /// J-matrix element, indexed by F'. The cycling transition is 1/2 on the
    /// same scale.
    pub const F2_CLOCK_PI_STRENGTH: [f64; 4] = [0.0, 1.0 / 30.0, 0.0, 0.3];

    /// Polarizability ratio 5P₃/₂ : 5S₁/₂ at 1560 nm.
    pub const POLARIZABILITY_RATIO_1560: f64 = 47.7;
    /// Ground-state scalar polarizability at 1560 nm (J·m²·V⁻²).
    pub const POLARIZABILITY_1560: f64 = 6.83e-39;

    /// Transition frequency F → F' relative to F=2 → F'=3.
    pub fn transition_offset_hz(ground_f: u8, excited_f: usize) -> f64 {
        let ground = if ground_f == 1 { GROUND_SPLITTING_HZ } else { 0.0 };
        EXCITED_OFFSET_HZ[excited_f] + ground
    }

    /// Resonant two-level cross-section 3λ²/2π.
    pub fn resonant_cross_section() -> f64 {
        3.0 * D2_WAVELENGTH * D2_WAVELENGTH / (2.0 * std::f64::consts::PI)
    }
}
